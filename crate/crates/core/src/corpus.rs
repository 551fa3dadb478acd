//! Reference graphs and rule systems over the graph base `v =s,t=> e`.

use std::sync::Arc;

use crate::base::BaseCategory;
use crate::morphism::PresheafMorphism;
use crate::presheaf::{validate_presheaf, Presheaf, RawPresheaf};
use crate::rules::{Rule, RuleInclusion, RuleSystem};

/// A graph presheaf from vertex ids and `(edge, source, target)` triples.
///
/// Panics on dangling endpoints; meant for literals.
pub fn graph(base: &Arc<BaseCategory>, vertices: &[&str], edges: &[(&str, &str, &str)]) -> Presheaf {
    let mut raw = RawPresheaf::default();
    raw.elements.insert("v".into(), vertices.iter().map(|v| v.to_string()).collect());
    raw.elements.insert("e".into(), edges.iter().map(|(e, _, _)| e.to_string()).collect());
    raw.maps.insert("s".into(), edges.iter().map(|(e, s, _)| (e.to_string(), s.to_string())).collect());
    raw.maps.insert("t".into(), edges.iter().map(|(e, _, t)| (e.to_string(), t.to_string())).collect());
    validate_presheaf(base, &raw).expect("well-formed graph literal")
}

fn owned_graph(base: &Arc<BaseCategory>, vertices: &[String], edges: &[(String, String, String)]) -> Presheaf {
    let vs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let es: Vec<(&str, &str, &str)> = edges.iter().map(|(e, s, t)| (e.as_str(), s.as_str(), t.as_str())).collect();
    graph(base, &vs, &es)
}

/// `k` isolated vertices `v0..`.
pub fn discrete(base: &Arc<BaseCategory>, k: usize) -> Presheaf {
    let vs: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    owned_graph(base, &vs, &[])
}

/// `v0 -e0-> v1 -e1-> ... vk`, with `k` edges.
pub fn path(base: &Arc<BaseCategory>, k: usize) -> Presheaf {
    let vs: Vec<String> = (0..=k).map(|i| format!("v{i}")).collect();
    let es: Vec<_> = (0..k).map(|i| (format!("e{i}"), format!("v{i}"), format!("v{}", i + 1))).collect();
    owned_graph(base, &vs, &es)
}

/// Directed cycle on `k ≥ 1` vertices, `ei: vi -> v(i+1 mod k)`.
pub fn cycle(base: &Arc<BaseCategory>, k: usize) -> Presheaf {
    let vs: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    let es: Vec<_> = (0..k).map(|i| (format!("e{i}"), format!("v{i}"), format!("v{}", (i + 1) % k))).collect();
    owned_graph(base, &vs, &es)
}

/// `a -ab-> b -bc-> c` and `a -ac-> c`.
pub fn acyclic_triangle(base: &Arc<BaseCategory>) -> Presheaf {
    graph(base, &["a", "b", "c"], &[("ab", "a", "b"), ("bc", "b", "c"), ("ac", "a", "c")])
}

/// Accumulates rules and inclusions given by element-id maps.
struct Builder {
    base: Arc<BaseCategory>,
    rules: Vec<Rule>,
    inclusions: Vec<RuleInclusion>,
}

impl Builder {
    fn new() -> Self {
        Builder { base: Arc::new(BaseCategory::graph()), rules: Vec::new(), inclusions: Vec::new() }
    }

    fn g(&self, vertices: &[&str], edges: &[(&str, &str, &str)]) -> Arc<Presheaf> {
        Arc::new(graph(&self.base, vertices, edges))
    }

    fn rule(&mut self, id: &str, lhs: Arc<Presheaf>, rhs: Arc<Presheaf>) {
        self.rules.push(Rule { id: id.into(), lhs, rhs });
    }

    /// A rule whose rhs equals its lhs.
    fn keep(&mut self, id: &str, (vertices, edges): (&[&str], &[(&str, &str, &str)])) {
        let g = self.g(vertices, edges);
        self.rule(id, g.clone(), g);
    }

    fn index(&self, id: &str) -> usize {
        self.rules.iter().position(|r| r.id == id).expect("declared rule")
    }

    /// Element ids are unique across objects within each rule graph.
    fn map(&self, source: &Arc<Presheaf>, target: &Arc<Presheaf>, pairs: &[(&str, &str)]) -> PresheafMorphism {
        let triples = pairs.iter().map(|&(x, y)| {
            let o = (0..2).find(|&o| source.index_of(o, x).is_some()).expect("known element");
            (self.base.object_name(o), x, y)
        });
        PresheafMorphism::from_names(source.clone(), target.clone(), triples.collect::<Vec<_>>())
            .expect("natural literal map")
    }

    fn include(&mut self, id: &str, src: &str, dst: &str, lhs: &[(&str, &str)], rhs: &[(&str, &str)]) {
        let (s, d) = (self.index(src), self.index(dst));
        let lhs_map = self.map(&self.rules[s].lhs, &self.rules[d].lhs, lhs);
        let rhs_map = self.map(&self.rules[s].rhs, &self.rules[d].rhs, rhs);
        self.inclusions.push(RuleInclusion { id: id.into(), src: s, dst: d, lhs_map, rhs_map });
    }

    fn build(self) -> RuleSystem {
        RuleSystem::new(self.base, self.rules, self.inclusions).expect("well-formed reference system")
    }
}

/// Sierpinski refinement: every acyclic triangle is replaced by three corner
/// triangles around an inner cycle of edge midpoints.
pub fn sierpinski() -> RuleSystem {
    let mut b = Builder::new();
    let v = b.g(&["v"], &[]);
    b.rule("vertex", v.clone(), v);
    let edge = b.g(&["s", "t"], &[("e", "s", "t")]);
    let split = b.g(&["s", "t", "m"], &[("es", "s", "m"), ("et", "t", "m")]);
    b.rule("edge", edge, split);
    let tri = b.g(&["a", "b", "c"], &[("ab", "a", "b"), ("bc", "b", "c"), ("ac", "a", "c")]);
    let refined = b.g(
        &["a", "b", "c", "mab", "mbc", "mac"],
        &[
            ("a_ab", "a", "mab"),
            ("b_ab", "b", "mab"),
            ("b_bc", "b", "mbc"),
            ("c_bc", "c", "mbc"),
            ("a_ac", "a", "mac"),
            ("c_ac", "c", "mac"),
            ("mab_mac", "mab", "mac"),
            ("mac_mbc", "mac", "mbc"),
            ("mbc_mab", "mbc", "mab"),
        ],
    );
    b.rule("triangle", tri, refined);
    b.include("src", "vertex", "edge", &[("v", "s")], &[("v", "s")]);
    b.include("tgt", "vertex", "edge", &[("v", "t")], &[("v", "t")]);
    for (x, y) in [("a", "c"), ("a", "b"), ("b", "c")] {
        let (xy, m) = (format!("{x}{y}"), format!("m{x}{y}"));
        let (hx, hy) = (format!("{x}_{x}{y}"), format!("{y}_{x}{y}"));
        b.include(
            &xy,
            "edge",
            "triangle",
            &[("s", x), ("t", y), ("e", &xy)],
            &[("s", x), ("t", y), ("m", &m), ("es", &hx), ("et", &hy)],
        );
    }
    b.build()
}

/// Dualization: vertices become edges, edges become two-edge paths joining them.
pub fn dualization() -> RuleSystem {
    let mut b = Builder::new();
    b.rule("vertex", b.g(&["v"], &[]), b.g(&["x", "y"], &[("d", "x", "y")]));
    b.rule("edge", b.g(&["s", "t"], &[("e", "s", "t")]), b.g(&["x", "m", "y"], &[("a", "x", "m"), ("b", "m", "y")]));
    b.include("src", "vertex", "edge", &[("v", "s")], &[("x", "x"), ("y", "m"), ("d", "a")]);
    b.include("tgt", "vertex", "edge", &[("v", "t")], &[("x", "m"), ("y", "y"), ("d", "b")]);
    b.build()
}

/// Edge contraction: every edge collapses its endpoints to one vertex.
pub fn contraction() -> RuleSystem {
    let mut b = Builder::new();
    let v = b.g(&["v"], &[]);
    b.rule("vertex", v.clone(), v);
    b.rule("edge", b.g(&["s", "t"], &[("e", "s", "t")]), b.g(&["w"], &[]));
    b.include("src", "vertex", "edge", &[("v", "s")], &[("v", "w")]);
    b.include("tgt", "vertex", "edge", &[("v", "t")], &[("v", "w")]);
    b.build()
}

/// Isolated-vertex removal on loop-free graphs: rules only see edges and
/// copy them, so vertices without edges are never produced.
pub fn isolated_removal() -> RuleSystem {
    let mut b = Builder::new();
    b.keep("edge", (&["s", "t"], &[("e", "s", "t")]));
    b.keep("path", (&["a", "m", "b"], &[("f", "a", "m"), ("g", "m", "b")]));
    b.keep("out-star", (&["m", "a", "b"], &[("f", "m", "a"), ("g", "m", "b")]));
    b.keep("in-star", (&["a", "b", "m"], &[("f", "a", "m"), ("g", "b", "m")]));
    b.keep("parallel", (&["a", "b"], &[("f", "a", "b"), ("g", "a", "b")]));
    b.keep("two-cycle", (&["a", "b"], &[("f", "a", "b"), ("g", "b", "a")]));
    let both = |b: &mut Builder, id: &str, dst: &str, pairs: &[(&str, &str)]| b.include(id, "edge", dst, pairs, pairs);
    both(&mut b, "path.f", "path", &[("s", "a"), ("t", "m"), ("e", "f")]);
    both(&mut b, "path.g", "path", &[("s", "m"), ("t", "b"), ("e", "g")]);
    both(&mut b, "out.f", "out-star", &[("s", "m"), ("t", "a"), ("e", "f")]);
    both(&mut b, "out.g", "out-star", &[("s", "m"), ("t", "b"), ("e", "g")]);
    both(&mut b, "in.f", "in-star", &[("s", "a"), ("t", "m"), ("e", "f")]);
    both(&mut b, "in.g", "in-star", &[("s", "b"), ("t", "m"), ("e", "g")]);
    both(&mut b, "par.f", "parallel", &[("s", "a"), ("t", "b"), ("e", "f")]);
    both(&mut b, "par.g", "parallel", &[("s", "a"), ("t", "b"), ("e", "g")]);
    both(&mut b, "cyc.f", "two-cycle", &[("s", "a"), ("t", "b"), ("e", "f")]);
    both(&mut b, "cyc.g", "two-cycle", &[("s", "b"), ("t", "a"), ("e", "g")]);
    let swap = |b: &mut Builder, id: &str, rule: &str, pairs: &[(&str, &str)]| b.include(id, rule, rule, pairs, pairs);
    swap(&mut b, "out.swap", "out-star", &[("m", "m"), ("a", "b"), ("b", "a"), ("f", "g"), ("g", "f")]);
    swap(&mut b, "in.swap", "in-star", &[("m", "m"), ("a", "b"), ("b", "a"), ("f", "g"), ("g", "f")]);
    swap(&mut b, "par.swap", "parallel", &[("a", "a"), ("b", "b"), ("f", "g"), ("g", "f")]);
    swap(&mut b, "cyc.swap", "two-cycle", &[("a", "b"), ("b", "a"), ("f", "g"), ("g", "f")]);
    b.build()
}

/// Multi-edge simplification: each pair of parallel edges merges into one.
pub fn multi_edge() -> RuleSystem {
    let mut b = Builder::new();
    let v = b.g(&["v"], &[]);
    b.rule("vertex", v.clone(), v);
    let e = b.g(&["s", "t"], &[("e", "s", "t")]);
    b.rule("edge", e.clone(), e);
    b.rule("parallel", b.g(&["a", "b"], &[("f", "a", "b"), ("g", "a", "b")]), b.g(&["a", "b"], &[("h", "a", "b")]));
    b.include("src", "vertex", "edge", &[("v", "s")], &[("v", "s")]);
    b.include("tgt", "vertex", "edge", &[("v", "t")], &[("v", "t")]);
    b.include(
        "first",
        "edge",
        "parallel",
        &[("s", "a"), ("t", "b"), ("e", "f")],
        &[("s", "a"), ("t", "b"), ("e", "h")],
    );
    b.include(
        "second",
        "edge",
        "parallel",
        &[("s", "a"), ("t", "b"), ("e", "g")],
        &[("s", "a"), ("t", "b"), ("e", "h")],
    );
    b.include(
        "swap",
        "parallel",
        "parallel",
        &[("a", "a"), ("b", "b"), ("f", "g"), ("g", "f")],
        &[("a", "a"), ("b", "b"), ("h", "h")],
    );
    b.build()
}

/// The reference systems by name, in a fixed order.
pub fn reference_systems() -> Vec<(String, RuleSystem)> {
    vec![
        ("sierpinski".into(), sierpinski()),
        ("dualization".into(), dualization()),
        ("contraction".into(), contraction()),
        ("isolated-removal".into(), isolated_removal()),
        ("multi-edge".into(), multi_edge()),
    ]
}
