//! Seeded generators and brute-force oracles shared by the integration tests.
//! Oracles here never call the matcher or the colimit code under test.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use gt_core::corpus::graph;
use gt_core::{BaseCategory, Presheaf, PresheafMorphism};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph_base() -> Arc<BaseCategory> {
    Arc::new(BaseCategory::graph())
}

/// Vertex and edge lists of a graph presheaf, as `(id, src, tgt)` for edges.
pub fn edges_of(p: &Presheaf) -> Vec<(String, String, String)> {
    (0..p.size(1))
        .map(|y| (p.carrier(1)[y].clone(), p.carrier(0)[p.act(0, y)].clone(), p.carrier(0)[p.act(1, y)].clone()))
        .collect()
}

pub fn build(base: &Arc<BaseCategory>, vertices: &[String], edges: &[(String, String, String)]) -> Presheaf {
    let vs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let es: Vec<(&str, &str, &str)> = edges.iter().map(|(e, s, t)| (e.as_str(), s.as_str(), t.as_str())).collect();
    graph(base, &vs, &es)
}

/// `n_v` vertices, `n_e` random edges; loops only when allowed.
pub fn random_graph(base: &Arc<BaseCategory>, rng: &mut ChaCha8Rng, n_v: usize, n_e: usize, loops: bool) -> Presheaf {
    let vs: Vec<String> = (0..n_v).map(|i| format!("v{i}")).collect();
    let mut es = Vec::new();
    if n_v > 0 && (loops || n_v > 1) {
        while es.len() < n_e {
            let (s, t) = (rng.gen_range(0..n_v), rng.gen_range(0..n_v));
            if s != t || loops {
                es.push((format!("e{}", es.len()), vs[s].clone(), vs[t].clone()));
            }
        }
    }
    build(base, &vs, &es)
}

/// Connected, loop-free, at most `max_elems` elements in total, at least one edge.
pub fn random_connected_graph(base: &Arc<BaseCategory>, rng: &mut ChaCha8Rng, max_elems: usize) -> Presheaf {
    let n_v = rng.gen_range(2..=max_elems.div_ceil(2));
    let vs: Vec<String> = (0..n_v).map(|i| format!("v{i}")).collect();
    let mut es = Vec::new();
    for i in 1..n_v {
        let j = rng.gen_range(0..i);
        let (s, t) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
        es.push((format!("e{}", es.len()), vs[s].clone(), vs[t].clone()));
    }
    let extra = rng.gen_range(0..=max_elems - n_v - es.len());
    for _ in 0..extra {
        let (s, t) = (rng.gen_range(0..n_v), rng.gen_range(0..n_v));
        if s != t {
            es.push((format!("e{}", es.len()), vs[s].clone(), vs[t].clone()));
        }
    }
    build(base, &vs, &es)
}

/// A random sub-graph of `p` (vertex subset, then an edge subset among
/// surviving endpoints) with its inclusion.
pub fn random_subgraph(rng: &mut ChaCha8Rng, p: &Arc<Presheaf>) -> PresheafMorphism {
    random_subgraph_keeping(rng, p, 0.7)
}

/// As `random_subgraph`, each element surviving with probability `keep`.
pub fn random_subgraph_keeping(rng: &mut ChaCha8Rng, p: &Arc<Presheaf>, prob: f64) -> PresheafMorphism {
    let base = p.base().clone();
    let keep: BTreeSet<String> = p.carrier(0).iter().filter(|_| rng.gen_bool(prob)).cloned().collect();
    let es: Vec<_> = edges_of(p)
        .into_iter()
        .filter(|(_, s, t)| keep.contains(s) && keep.contains(t) && rng.gen_bool(prob))
        .collect();
    let vs: Vec<String> = keep.into_iter().collect();
    let sub = Arc::new(build(&base, &vs, &es));
    let pairs: Vec<(&str, &str, &str)> = vs
        .iter()
        .map(|v| ("v", v.as_str(), v.as_str()))
        .chain(es.iter().map(|(e, _, _)| ("e", e.as_str(), e.as_str())))
        .collect();
    PresheafMorphism::from_names(sub, p.clone(), pairs).unwrap()
}

/// The same presheaf with fresh names and shuffled element order.
pub fn scramble(rng: &mut ChaCha8Rng, p: &Presheaf) -> Presheaf {
    let base = p.base().clone();
    let mut vperm: Vec<usize> = (0..p.size(0)).collect();
    vperm.shuffle(rng);
    let vname = |x: usize| format!("n{}", vperm[x]);
    let vs: Vec<String> = (0..p.size(0)).map(vname).collect();
    let es: Vec<_> =
        (0..p.size(1)).map(|y| (format!("a{}", (y * 7919) % 10007), vname(p.act(0, y)), vname(p.act(1, y)))).collect();
    build(&base, &vs, &es)
}

/// Naturality checked directly against the actions.
pub fn natural(p: &Presheaf, q: &Presheaf, comps: &[Vec<usize>]) -> bool {
    p.base()
        .generators()
        .iter()
        .enumerate()
        .all(|(g, gen)| (0..p.size(gen.dst)).all(|y| comps[gen.src][p.act(g, y)] == q.act(g, comps[gen.dst][y])))
}

/// Every function per object (injective ones only when asked), filtered by naturality.
pub fn brute_force_morphisms(p: &Presheaf, q: &Presheaf, injective: bool) -> Vec<Vec<Vec<usize>>> {
    let n_obj = p.base().objects().len();
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = (0..n_obj).map(|_| Vec::new()).collect();
    fn rec(
        p: &Presheaf,
        q: &Presheaf,
        injective: bool,
        o: usize,
        current: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let n_obj = current.len();
        if o == n_obj {
            if natural(p, q, current) {
                out.push(current.clone());
            }
            return;
        }
        if current[o].len() == p.size(o) {
            rec(p, q, injective, o + 1, current, out);
            return;
        }
        for y in 0..q.size(o) {
            if injective && current[o].contains(&y) {
                continue;
            }
            current[o].push(y);
            rec(p, q, injective, o, current, out);
            current[o].pop();
        }
    }
    rec(p, q, injective, 0, &mut current, &mut out);
    out
}

/// Class counts of the colimit per object, by depth-first search over the
/// zig-zag graph on tagged elements.
pub fn zigzag_class_counts(nodes: &[Arc<Presheaf>], arrows: &[(usize, usize, Vec<Vec<usize>>)]) -> Vec<usize> {
    let n_obj = nodes.first().map_or(0, |p| p.base().objects().len());
    (0..n_obj)
        .map(|o| {
            let mut offset = vec![0];
            for p in nodes {
                offset.push(offset.last().unwrap() + p.size(o));
            }
            let total = *offset.last().unwrap();
            let mut adj = vec![Vec::new(); total];
            for (from, to, comps) in arrows {
                for (x, &y) in comps[o].iter().enumerate() {
                    adj[offset[*from] + x].push(offset[*to] + y);
                    adj[offset[*to] + y].push(offset[*from] + x);
                }
            }
            let mut seen = vec![false; total];
            let mut classes = 0;
            for start in 0..total {
                if seen[start] {
                    continue;
                }
                classes += 1;
                let mut stack = vec![start];
                seen[start] = true;
                while let Some(u) = stack.pop() {
                    for &w in &adj[u] {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
            classes
        })
        .collect()
}

/// Removes vertices without incident edges.
pub fn drop_isolated(p: &Presheaf) -> Presheaf {
    let es = edges_of(p);
    let used: BTreeSet<&String> = es.iter().flat_map(|(_, s, t)| [s, t]).collect();
    let vs: Vec<String> = p.carrier(0).iter().filter(|v| used.contains(v)).cloned().collect();
    build(p.base(), &vs, &es)
}

/// Keeps one edge per ordered pair of endpoints.
pub fn merge_parallel(p: &Presheaf) -> Presheaf {
    let mut pairs = BTreeSet::new();
    let es: Vec<_> = edges_of(p).into_iter().filter(|(_, s, t)| pairs.insert((s.clone(), t.clone()))).collect();
    build(p.base(), p.carrier(0), &es)
}

/// A graph under construction, with insertion-order names `v{i}` / `e{i}`.
#[derive(Default)]
struct Growing {
    vs: usize,
    es: Vec<(usize, usize)>,
}

impl Growing {
    fn seeded(rng: &mut ChaCha8Rng) -> Self {
        let mut g = Growing { vs: rng.gen_range(0..=2), es: Vec::new() };
        if g.vs > 0 && rng.gen_bool(0.5) {
            g.es.push((rng.gen_range(0..g.vs), rng.gen_range(0..g.vs)));
        }
        g
    }

    /// Extends the graph so that `s` maps into it, reusing elements when it can.
    fn absorb(&mut self, rng: &mut ChaCha8Rng, s: &Presheaf) -> Vec<(&'static str, String, String)> {
        let mut pairs = Vec::new();
        let mut vmap = Vec::new();
        for x in 0..s.size(0) {
            let y = if self.vs > 0 && rng.gen_bool(0.6) {
                rng.gen_range(0..self.vs)
            } else {
                self.vs += 1;
                self.vs - 1
            };
            vmap.push(y);
            pairs.push(("v", s.carrier(0)[x].clone(), format!("v{y}")));
        }
        for e in 0..s.size(1) {
            let (a, b) = (vmap[s.act(0, e)], vmap[s.act(1, e)]);
            let existing: Vec<usize> = (0..self.es.len()).filter(|&k| self.es[k] == (a, b)).collect();
            let k = if !existing.is_empty() && rng.gen_bool(0.6) {
                *existing.choose(rng).unwrap()
            } else {
                self.es.push((a, b));
                self.es.len() - 1
            };
            pairs.push(("e", s.carrier(1)[e].clone(), format!("e{k}")));
        }
        pairs
    }

    fn size(&self) -> usize {
        self.vs + self.es.len()
    }

    fn finish(&self, base: &Arc<BaseCategory>) -> Presheaf {
        let vs: Vec<String> = (0..self.vs).map(|i| format!("v{i}")).collect();
        let es: Vec<_> = self
            .es
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| (format!("e{k}"), format!("v{a}"), format!("v{b}")))
            .collect();
        build(base, &vs, &es)
    }
}

/// `p1`, `p2` and up to `max_spans` spans between them, every presheaf with at
/// most `max_elems` elements. Span legs are arbitrary morphisms.
pub fn random_spans(
    rng: &mut ChaCha8Rng,
    max_spans: usize,
    max_elems: usize,
) -> (Arc<Presheaf>, Arc<Presheaf>, Vec<gt_core::Span>) {
    let base = graph_base();
    loop {
        let (mut g1, mut g2) = (Growing::seeded(rng), Growing::seeded(rng));
        let mut raw = Vec::new();
        for _ in 0..rng.gen_range(0..=max_spans) {
            let v = rng.gen_range(1..=3);
            let e = rng.gen_range(0..=2);
            let s = Arc::new(random_graph(&base, rng, v, e, true));
            let left = g1.absorb(rng, &s);
            let right = g2.absorb(rng, &s);
            raw.push((s, left, right));
        }
        if g1.size() > max_elems || g2.size() > max_elems {
            continue;
        }
        let (p1, p2) = (Arc::new(g1.finish(&base)), Arc::new(g2.finish(&base)));
        let spans = raw
            .into_iter()
            .map(|(s, left, right)| {
                let to = |target: &Arc<Presheaf>, pairs: &[(&'static str, String, String)]| {
                    let triples = pairs.iter().map(|(o, x, y)| (*o, x.as_str(), y.as_str()));
                    PresheafMorphism::from_names(s.clone(), target.clone(), triples).unwrap()
                };
                gt_core::Span { apex: s.clone(), left: to(&p1, &left), right: to(&p2, &right) }
            })
            .collect();
        return (p1, p2, spans);
    }
}

fn lit(base: &Arc<BaseCategory>, vs: &[&str], es: &[(&str, &str, &str)]) -> Arc<Presheaf> {
    Arc::new(graph(base, vs, es))
}

fn by_names(src: &Arc<Presheaf>, dst: &Arc<Presheaf>, pairs: &[(&str, &str, &str)]) -> PresheafMorphism {
    PresheafMorphism::from_names(src.clone(), dst.clone(), pairs.iter().copied()).unwrap()
}

/// Vertices are kept and every edge becomes a path through `k` fresh midpoints.
pub fn subdivision(k: usize) -> gt_core::RuleSystem {
    use gt_core::rules::{Rule, RuleInclusion};
    let base = graph_base();
    let v = lit(&base, &["v"], &[]);
    let edge = lit(&base, &["s", "t"], &[("e", "s", "t")]);
    let mut vs: Vec<String> = vec!["s".into(), "t".into()];
    vs.extend((0..k).map(|i| format!("m{i}")));
    let chain: Vec<String> = std::iter::once("s".to_string())
        .chain((0..k).map(|i| format!("m{i}")))
        .chain(std::iter::once("t".to_string()))
        .collect();
    let es: Vec<(String, String, String)> =
        chain.windows(2).enumerate().map(|(i, w)| (format!("p{i}"), w[0].clone(), w[1].clone())).collect();
    let path = Arc::new(build(&base, &vs, &es));
    let rules = vec![
        Rule { id: "vertex".into(), lhs: v.clone(), rhs: v.clone() },
        Rule { id: "edge".into(), lhs: edge.clone(), rhs: path.clone() },
    ];
    let inclusions = ["s", "t"]
        .iter()
        .map(|&end| RuleInclusion {
            id: format!("at_{end}"),
            src: 0,
            dst: 1,
            lhs_map: by_names(&v, &edge, &[("v", "v", end)]),
            rhs_map: by_names(&v, &path, &[("v", "v", end)]),
        })
        .collect();
    gt_core::RuleSystem::new(base, rules, inclusions).unwrap()
}

/// The identity transformation on loop-free graphs.
pub fn copy_system() -> gt_core::RuleSystem {
    use gt_core::rules::{Rule, RuleInclusion};
    let base = graph_base();
    let v = lit(&base, &["v"], &[]);
    let edge = lit(&base, &["s", "t"], &[("e", "s", "t")]);
    let rules = vec![
        Rule { id: "vertex".into(), lhs: v.clone(), rhs: v.clone() },
        Rule { id: "edge".into(), lhs: edge.clone(), rhs: edge.clone() },
    ];
    let inclusions = ["s", "t"]
        .iter()
        .map(|&end| {
            let m = by_names(&v, &edge, &[("v", "v", end)]);
            RuleInclusion { id: format!("at_{end}"), src: 0, dst: 1, lhs_map: m.clone(), rhs_map: m }
        })
        .collect();
    gt_core::RuleSystem::new(base, rules, inclusions).unwrap()
}

/// Every edge collapses into a loop on a single vertex.
pub fn loop_collapse() -> gt_core::RuleSystem {
    use gt_core::rules::{Rule, RuleInclusion};
    let base = graph_base();
    let v = lit(&base, &["v"], &[]);
    let edge = lit(&base, &["s", "t"], &[("e", "s", "t")]);
    let lp = lit(&base, &["w"], &[("l", "w", "w")]);
    let rules = vec![
        Rule { id: "vertex".into(), lhs: v.clone(), rhs: v.clone() },
        Rule { id: "edge".into(), lhs: edge.clone(), rhs: lp.clone() },
    ];
    let inclusions = ["s", "t"]
        .iter()
        .map(|&end| RuleInclusion {
            id: format!("at_{end}"),
            src: 0,
            dst: 1,
            lhs_map: by_names(&v, &edge, &[("v", "v", end)]),
            rhs_map: by_names(&v, &lp, &[("v", "v", "w")]),
        })
        .collect();
    gt_core::RuleSystem::new(base, rules, inclusions).unwrap()
}

/// Connected loop-free graph rich in acyclic triangles.
pub fn random_triangulated(base: &Arc<BaseCategory>, rng: &mut ChaCha8Rng, max_elems: usize) -> Presheaf {
    let mut best = random_connected_graph(base, rng, max_elems);
    for _ in 0..4 {
        let g = random_connected_graph(base, rng, max_elems);
        if g.size(1) > best.size(1) {
            best = g;
        }
    }
    best
}
