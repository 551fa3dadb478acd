//! Finite presheaves over a [`BaseCategory`].
//!
//! Elements are opaque string identifiers kept sorted per object, so element
//! indices follow lexicographic order. For a generator `m: a -> b` the action
//! sends elements over `b` to elements over `a`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::base::BaseCategory;
use crate::error::{PresheafError, Violation};
use crate::morphism::PresheafMorphism;

#[derive(Clone, PartialEq, Eq)]
pub struct Presheaf {
    base: Arc<BaseCategory>,
    carriers: Vec<Vec<String>>,
    actions: Vec<Vec<usize>>,
}

/// Unvalidated presheaf data keyed by names, as found in files.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawPresheaf {
    pub elements: BTreeMap<String, Vec<String>>,
    /// For each generator `m: a -> b`, a map from elements over `b` to elements over `a`.
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

impl fmt::Debug for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (o, name) in self.base.objects().iter().enumerate() {
            m.entry(name, &self.carriers[o]);
        }
        for (g, gen) in self.base.generators().iter().enumerate() {
            let pairs: Vec<(&str, &str)> = self.actions[g]
                .iter()
                .enumerate()
                .map(|(y, &x)| (self.carriers[gen.dst][y].as_str(), self.carriers[gen.src][x].as_str()))
                .collect();
            m.entry(&gen.name, &pairs);
        }
        m.finish()
    }
}

impl Presheaf {
    pub fn empty(base: Arc<BaseCategory>) -> Self {
        let carriers = vec![Vec::new(); base.objects().len()];
        let actions = vec![Vec::new(); base.generators().len()];
        Presheaf { base, carriers, actions }
    }

    /// Builds a presheaf from index data. Carriers must be sorted and duplicate
    /// free and actions must be in range; relations are not checked.
    pub(crate) fn from_indexed(base: Arc<BaseCategory>, carriers: Vec<Vec<String>>, actions: Vec<Vec<usize>>) -> Self {
        debug_assert_eq!(carriers.len(), base.objects().len());
        debug_assert_eq!(actions.len(), base.generators().len());
        debug_assert!(carriers.iter().all(|c| c.windows(2).all(|w| w[0] < w[1])));
        debug_assert!(base.generators().iter().enumerate().all(|(g, gen)| {
            actions[g].len() == carriers[gen.dst].len() && actions[g].iter().all(|&x| x < carriers[gen.src].len())
        }));
        Presheaf { base, carriers, actions }
    }

    pub fn base(&self) -> &Arc<BaseCategory> {
        &self.base
    }

    pub fn carrier(&self, o: usize) -> &[String] {
        &self.carriers[o]
    }

    pub fn size(&self, o: usize) -> usize {
        self.carriers[o].len()
    }

    pub fn total_size(&self) -> usize {
        self.carriers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_size() == 0
    }

    /// Per-object element counts, in object order.
    pub fn counts(&self) -> Vec<usize> {
        self.carriers.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, o: usize, id: &str) -> Option<usize> {
        self.carriers[o].binary_search_by(|x| x.as_str().cmp(id)).ok()
    }

    /// The action of generator `g: a -> b` on element `y` over `b`.
    pub fn act(&self, g: usize, y: usize) -> usize {
        self.actions[g][y]
    }

    pub fn action(&self, g: usize) -> &[usize] {
        &self.actions[g]
    }

    /// Applies a generator path (diagrammatic order) to an element over its codomain.
    pub fn act_path(&self, path: &[usize], mut y: usize) -> usize {
        for &g in path.iter().rev() {
            y = self.actions[g][y];
        }
        y
    }

    pub fn carriers(&self) -> &[Vec<String>] {
        &self.carriers
    }

    pub fn to_raw(&self) -> RawPresheaf {
        let mut raw = RawPresheaf::default();
        for (o, name) in self.base.objects().iter().enumerate() {
            raw.elements.insert(name.clone(), self.carriers[o].clone());
        }
        for (g, gen) in self.base.generators().iter().enumerate() {
            let map = self.actions[g]
                .iter()
                .enumerate()
                .map(|(y, &x)| (self.carriers[gen.dst][y].clone(), self.carriers[gen.src][x].clone()))
                .collect();
            raw.maps.insert(gen.name.clone(), map);
        }
        raw
    }

    /// Renames every element by prepending `prefix`. Uniform prefixes keep the
    /// sorted order, so indices and morphisms into or out of `self` stay valid.
    pub fn with_prefix(&self, prefix: &str) -> Presheaf {
        let carriers = self.carriers.iter().map(|c| c.iter().map(|x| format!("{prefix}{x}")).collect()).collect();
        Presheaf { base: self.base.clone(), carriers, actions: self.actions.clone() }
    }

    /// Renames elements over each object to `{prefix}{object}{i}` in current order.
    pub fn relabel(&self, prefix: &str) -> Presheaf {
        let width = self.carriers.iter().map(Vec::len).max().unwrap_or(0).to_string().len();
        let carriers = self
            .carriers
            .iter()
            .enumerate()
            .map(|(o, c)| {
                let name = self.base.object_name(o);
                (0..c.len()).map(|i| format!("{prefix}{name}{i:0width$}")).collect()
            })
            .collect();
        Presheaf { base: self.base.clone(), carriers, actions: self.actions.clone() }
    }
}

/// Checks raw data against `base` and builds the presheaf.
///
/// Unknown objects, generators or duplicate identifiers are structural
/// errors; missing or ill-landing map entries and broken relations are
/// reported as [`Violation`]s.
pub fn validate_presheaf(base: &Arc<BaseCategory>, raw: &RawPresheaf) -> Result<Presheaf, PresheafError> {
    for name in raw.elements.keys() {
        if base.object(name).is_none() {
            return Err(PresheafError::Structural(format!("unknown object `{name}`")));
        }
    }
    for name in raw.maps.keys() {
        if base.generator(name).is_none() {
            return Err(PresheafError::Structural(format!("unknown generator `{name}`")));
        }
    }
    let mut carriers = Vec::with_capacity(base.objects().len());
    for name in base.objects() {
        let ids = raw.elements.get(name).cloned().unwrap_or_default();
        let set: BTreeSet<String> = ids.iter().cloned().collect();
        if set.len() != ids.len() {
            return Err(PresheafError::Structural(format!("duplicate element over `{name}`")));
        }
        carriers.push(set.into_iter().collect::<Vec<_>>());
    }
    let lookup = |o: usize, id: &str| carriers[o].binary_search_by(|x: &String| x.as_str().cmp(id)).ok();

    let mut actions = Vec::with_capacity(base.generators().len());
    for gen in base.generators() {
        let map = raw.maps.get(&gen.name);
        if let Some(map) = map {
            if let Some(k) = map.keys().find(|k| lookup(gen.dst, k).is_none()) {
                return Err(PresheafError::Structural(format!(
                    "map `{}` mentions `{k}`, which is not over `{}`",
                    gen.name,
                    base.object_name(gen.dst)
                )));
            }
        }
        let mut action = Vec::with_capacity(carriers[gen.dst].len());
        for y in &carriers[gen.dst] {
            let image = map.and_then(|m| m.get(y)).ok_or_else(|| {
                PresheafError::Violation(Violation::NonTotal { generator: gen.name.clone(), element: y.clone() })
            })?;
            let x = lookup(gen.src, image).ok_or_else(|| {
                PresheafError::Violation(Violation::IllLanding {
                    generator: gen.name.clone(),
                    element: y.clone(),
                    image: image.clone(),
                    object: base.object_name(gen.src).to_string(),
                })
            })?;
            action.push(x);
        }
        actions.push(action);
    }

    let p = Presheaf { base: base.clone(), carriers, actions };
    for (l, r) in base.relations() {
        let top = base.path_dst(l);
        for y in 0..p.size(top) {
            if p.act_path(l, y) != p.act_path(r, y) {
                return Err(PresheafError::Violation(Violation::Relation {
                    lhs: base.path_name(l),
                    rhs: base.path_name(r),
                    element: p.carriers[top][y].clone(),
                }));
            }
        }
    }
    Ok(p)
}

/// Hom-classes `d -> c` named by their least path (identity named by `c`), sorted by name.
fn named_hom(base: &BaseCategory, d: usize, c: usize) -> Vec<(String, Vec<Vec<usize>>)> {
    let mut out: Vec<(String, Vec<Vec<usize>>)> = base
        .hom(d, c)
        .into_iter()
        .map(|class| {
            let name = if class[0].is_empty() { base.object_name(c).to_string() } else { base.path_name(&class[0]) };
            (name, class)
        })
        .collect();
    out.sort();
    out
}

/// The representable presheaf on object `c`: over `d`, the generator paths
/// `d -> c` modulo relations, acted on by precomposition. Each element is
/// named by the least path of its class (dot-joined generator names) and the
/// identity path by the object's own name.
pub fn representable(base: &Arc<BaseCategory>, c: usize) -> Presheaf {
    let homs: Vec<_> = (0..base.objects().len()).map(|d| named_hom(base, d, c)).collect();
    let class_of = |d: usize, path: &[usize]| -> usize {
        homs[d]
            .iter()
            .position(|(_, cls)| cls.iter().any(|p| p.as_slice() == path))
            .expect("every path lies in some class")
    };
    let actions = base
        .generators()
        .iter()
        .enumerate()
        .map(|(g, gen)| {
            homs[gen.dst]
                .iter()
                .map(|(_, cls)| {
                    let mut path = vec![g];
                    path.extend_from_slice(&cls[0]);
                    class_of(gen.src, &path)
                })
                .collect()
        })
        .collect();
    let carriers = homs.iter().map(|h| h.iter().map(|(n, _)| n.clone()).collect()).collect();
    Presheaf::from_indexed(base.clone(), carriers, actions)
}

/// The Yoneda bijection: one morphism `representable(c) -> p` per element of
/// `p` over `c`, sending the class of a path `w: d -> c` to `p(w)(x)`.
pub fn elements_as_morphisms(p: &Arc<Presheaf>, c: usize) -> Vec<PresheafMorphism> {
    let base = p.base();
    let rep = Arc::new(representable(base, c));
    let reps: Vec<Vec<Vec<usize>>> = (0..base.objects().len())
        .map(|d| named_hom(base, d, c).into_iter().map(|(_, cls)| cls[0].clone()).collect())
        .collect();
    (0..p.size(c))
        .map(|x| {
            let components = reps.iter().map(|paths| paths.iter().map(|path| p.act_path(path, x)).collect()).collect();
            PresheafMorphism::from_parts(rep.clone(), p.clone(), components)
        })
        .collect()
}

/// Coproduct with index-tagged identifiers (`"0/x"`, `"1/x"`, ...) and its injections.
pub fn disjoint_union(base: &Arc<BaseCategory>, ps: &[Arc<Presheaf>]) -> (Arc<Presheaf>, Vec<PresheafMorphism>) {
    let n = base.objects().len();
    let mut tagged: Vec<Vec<(String, usize, usize)>> = vec![Vec::new(); n];
    for (i, p) in ps.iter().enumerate() {
        for (o, tagged_o) in tagged.iter_mut().enumerate() {
            for (x, id) in p.carrier(o).iter().enumerate() {
                tagged_o.push((format!("{i}/{id}"), i, x));
            }
        }
    }
    for t in &mut tagged {
        t.sort();
    }
    // position[o][i][x] = index in the union
    let mut position: Vec<Vec<Vec<usize>>> = (0..n).map(|o| ps.iter().map(|p| vec![0; p.size(o)]).collect()).collect();
    for (o, t) in tagged.iter().enumerate() {
        for (k, (_, i, x)) in t.iter().enumerate() {
            position[o][*i][*x] = k;
        }
    }
    let actions = base
        .generators()
        .iter()
        .enumerate()
        .map(|(g, gen)| tagged[gen.dst].iter().map(|(_, i, y)| position[gen.src][*i][ps[*i].act(g, *y)]).collect())
        .collect();
    let carriers = tagged.iter().map(|t| t.iter().map(|(id, _, _)| id.clone()).collect()).collect();
    let union = Arc::new(Presheaf::from_indexed(base.clone(), carriers, actions));
    let legs = ps
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let components = (0..n).map(|o| position[o][i].clone()).collect();
            PresheafMorphism::from_parts(p.clone(), union.clone(), components)
        })
        .collect();
    (union, legs)
}
