//! Finitely presented index categories.
//!
//! A base category is given by objects, generating morphisms and equations
//! between generator paths. The generator graph must be acyclic so that every
//! hom-set is finite.

use std::collections::{BTreeMap, HashMap};

use crate::error::BaseError;
use crate::union_find::UnionFind;

/// A generating morphism `name: src -> dst`, with endpoints stored as object indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// A path of composable generators in diagrammatic order: `[g1, g2]` means `g1` then `g2`.
pub type Path = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseCategory {
    objects: Vec<String>,
    generators: Vec<Generator>,
    relations: Vec<(Path, Path)>,
    object_index: HashMap<String, usize>,
    generator_index: HashMap<String, usize>,
    /// Object indices sorted by object name; used for canonical orderings.
    objects_by_name: Vec<usize>,
}

impl BaseCategory {
    pub fn new(
        objects: Vec<String>,
        generators: Vec<(String, String, String)>,
        relations: Vec<(Vec<String>, Vec<String>)>,
    ) -> Result<Self, BaseError> {
        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), i).is_some() {
                return Err(BaseError::DuplicateObject(o.clone()));
            }
        }
        let mut generator_index = HashMap::new();
        let mut gens = Vec::with_capacity(generators.len());
        for (i, (name, src, dst)) in generators.into_iter().enumerate() {
            if generator_index.insert(name.clone(), i).is_some() {
                return Err(BaseError::DuplicateGenerator(name));
            }
            let s = *object_index.get(&src).ok_or_else(|| BaseError::UnknownObject(src.clone()))?;
            let d = *object_index.get(&dst).ok_or_else(|| BaseError::UnknownObject(dst.clone()))?;
            gens.push(Generator { name, src: s, dst: d });
        }

        let mut objects_by_name: Vec<usize> = (0..objects.len()).collect();
        objects_by_name.sort_by(|&a, &b| objects[a].cmp(&objects[b]));

        let mut base = BaseCategory {
            objects,
            generators: gens,
            relations: Vec::new(),
            object_index,
            generator_index,
            objects_by_name,
        };
        base.check_acyclic()?;

        for (lhs, rhs) in relations {
            let l = base.resolve_path(&lhs)?;
            let r = base.resolve_path(&rhs)?;
            if base.path_src(&l) != base.path_src(&r) || base.path_dst(&l) != base.path_dst(&r) {
                return Err(BaseError::RelationEndpoints(lhs.join("."), rhs.join(".")));
            }
            base.relations.push((l, r));
        }
        Ok(base)
    }

    /// The directed multigraph base: objects `v`, `e` and `s, t: v -> e`.
    pub fn graph() -> Self {
        BaseCategory::new(
            vec!["v".into(), "e".into()],
            vec![("s".into(), "v".into(), "e".into()), ("t".into(), "v".into(), "e".into())],
            vec![],
        )
        .expect("graph base is well formed")
    }

    fn resolve_path(&self, names: &[String]) -> Result<Path, BaseError> {
        if names.is_empty() {
            return Err(BaseError::EmptyPath);
        }
        let mut path: Path = Vec::with_capacity(names.len());
        for n in names {
            let g = self.generator(n).ok_or_else(|| BaseError::UnknownGenerator(n.clone()))?;
            if let Some(&prev) = path.last() {
                if self.generators[prev].dst != self.generators[g].src {
                    return Err(BaseError::NotComposable(names.join(".")));
                }
            }
            path.push(g);
        }
        Ok(path)
    }

    fn check_acyclic(&self) -> Result<(), BaseError> {
        // Kahn's algorithm over the generator graph.
        let n = self.objects.len();
        let mut indegree = vec![0usize; n];
        for g in &self.generators {
            indegree[g.dst] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&o| indegree[o] == 0).collect();
        let mut seen = 0;
        while let Some(o) = ready.pop() {
            seen += 1;
            for g in self.generators.iter().filter(|g| g.src == o) {
                indegree[g.dst] -= 1;
                if indegree[g.dst] == 0 {
                    ready.push(g.dst);
                }
            }
        }
        if seen == n {
            Ok(())
        } else {
            Err(BaseError::Cyclic)
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[(Path, Path)] {
        &self.relations
    }

    pub fn object(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn generator(&self, name: &str) -> Option<usize> {
        self.generator_index.get(name).copied()
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn objects_by_name(&self) -> &[usize] {
        &self.objects_by_name
    }

    /// Generators whose codomain is `o`; their actions map elements over `o` downward.
    pub fn generators_into(&self, o: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.generators.len()).filter(move |&g| self.generators[g].dst == o)
    }

    /// Generators whose domain is `o`.
    pub fn generators_from(&self, o: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.generators.len()).filter(move |&g| self.generators[g].src == o)
    }

    pub fn path_src(&self, p: &[usize]) -> usize {
        self.generators[p[0]].src
    }

    pub fn path_dst(&self, p: &[usize]) -> usize {
        self.generators[p[p.len() - 1]].dst
    }

    pub fn path_name(&self, p: &[usize]) -> String {
        p.iter().map(|&g| self.generators[g].name.as_str()).collect::<Vec<_>>().join(".")
    }

    /// All generator paths from `from` to `to`, including the empty path when they coincide.
    pub fn paths(&self, from: usize, to: usize) -> Vec<Path> {
        let mut out = Vec::new();
        let mut stack = vec![(from, Vec::new())];
        while let Some((o, path)) = stack.pop() {
            if o == to {
                out.push(path.clone());
            }
            for g in self.generators_from(o) {
                let mut next = path.clone();
                next.push(g);
                stack.push((self.generators[g].dst, next));
            }
        }
        out.sort();
        out
    }

    /// The hom-set `from -> to` as equivalence classes of paths under the relations.
    ///
    /// Two paths are identified when one rewrites to the other by replacing a
    /// contiguous subpath with the other side of a relation. Every rewrite stays
    /// inside the finite set of paths `from -> to`, so union-find over that set
    /// computes the congruence exactly.
    pub fn hom(&self, from: usize, to: usize) -> Vec<Vec<Path>> {
        let paths = self.paths(from, to);
        let index: BTreeMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut uf = UnionFind::new(paths.len());
        for (i, p) in paths.iter().enumerate() {
            for (l, r) in &self.relations {
                for (pat, rep) in [(l, r), (r, l)] {
                    if pat.len() > p.len() {
                        continue;
                    }
                    for start in 0..=p.len() - pat.len() {
                        if &p[start..start + pat.len()] == pat.as_slice() {
                            let mut q = p[..start].to_vec();
                            q.extend_from_slice(rep);
                            q.extend_from_slice(&p[start + pat.len()..]);
                            let j = index[&q];
                            uf.union(i, j);
                        }
                    }
                }
            }
        }
        let mut classes: BTreeMap<usize, Vec<Path>> = BTreeMap::new();
        for (i, p) in paths.iter().enumerate() {
            classes.entry(uf.find(i)).or_default().push(p.clone());
        }
        let mut out: Vec<Vec<Path>> = classes.into_values().collect();
        for c in &mut out {
            c.sort();
        }
        out.sort();
        out
    }
}
