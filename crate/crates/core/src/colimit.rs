//! Colimits of finite diagrams of presheaves.
//!
//! Colimits are computed object by object: the carrier over `c` is the
//! disjoint union of the node carriers over `c`, quotiented by the
//! equivalence generated by the diagram arrows. Actions on classes are read
//! off any member, which is well defined by naturality of the arrows.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use crate::base::BaseCategory;
use crate::morphism::{compose, PresheafMorphism};
use crate::presheaf::Presheaf;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("arrow {arrow} refers to node {node}, which does not exist")]
    UnknownNode { arrow: usize, node: usize },
    #[error("arrow {0} does not go between its declared nodes")]
    ArrowEndpoints(usize),
    #[error("cocone has {found} legs for {expected} nodes")]
    LegCount { found: usize, expected: usize },
    #[error("leg {0} does not start at its node or end at the apex")]
    LegEndpoints(usize),
    #[error("cocone does not commute along arrow {0}")]
    NotCommuting(usize),
}

#[derive(Clone, Debug)]
pub struct DiagramArrow {
    pub from: usize,
    pub to: usize,
    pub morphism: PresheafMorphism,
}

#[derive(Clone, Debug)]
pub struct Diagram {
    base: Arc<BaseCategory>,
    nodes: Vec<Arc<Presheaf>>,
    arrows: Vec<DiagramArrow>,
}

impl Diagram {
    pub fn new(
        base: Arc<BaseCategory>,
        nodes: Vec<Arc<Presheaf>>,
        arrows: Vec<DiagramArrow>,
    ) -> Result<Self, DiagramError> {
        for (i, a) in arrows.iter().enumerate() {
            for node in [a.from, a.to] {
                if node >= nodes.len() {
                    return Err(DiagramError::UnknownNode { arrow: i, node });
                }
            }
            if a.morphism.source() != &nodes[a.from] || a.morphism.target() != &nodes[a.to] {
                return Err(DiagramError::ArrowEndpoints(i));
            }
        }
        Ok(Diagram { base, nodes, arrows })
    }

    pub fn base(&self) -> &Arc<BaseCategory> {
        &self.base
    }

    pub fn nodes(&self) -> &[Arc<Presheaf>] {
        &self.nodes
    }

    pub fn arrows(&self) -> &[DiagramArrow] {
        &self.arrows
    }
}

#[derive(Clone, Debug)]
pub struct Cocone {
    diagram: Arc<Diagram>,
    apex: Arc<Presheaf>,
    legs: Vec<PresheafMorphism>,
}

impl Cocone {
    pub fn new(diagram: Arc<Diagram>, apex: Arc<Presheaf>, legs: Vec<PresheafMorphism>) -> Result<Self, DiagramError> {
        if legs.len() != diagram.nodes.len() {
            return Err(DiagramError::LegCount { found: legs.len(), expected: diagram.nodes.len() });
        }
        for (i, leg) in legs.iter().enumerate() {
            if leg.source() != &diagram.nodes[i] || leg.target() != &apex {
                return Err(DiagramError::LegEndpoints(i));
            }
        }
        for (k, a) in diagram.arrows.iter().enumerate() {
            let via = compose(&a.morphism, &legs[a.to]).map_err(|_| DiagramError::NotCommuting(k))?;
            if via != legs[a.from] {
                return Err(DiagramError::NotCommuting(k));
            }
        }
        Ok(Cocone { diagram, apex, legs })
    }

    pub fn diagram(&self) -> &Arc<Diagram> {
        &self.diagram
    }

    pub fn apex(&self) -> &Arc<Presheaf> {
        &self.apex
    }

    pub fn legs(&self) -> &[PresheafMorphism] {
        &self.legs
    }

    pub fn leg(&self, i: usize) -> &PresheafMorphism {
        &self.legs[i]
    }
}

/// Builds the apex and legs once every object's elements have been sorted
/// into classes. `members[o]` lists, for each tagged element, its class
/// label; `names[o][k]` is the chosen name of class `k`.
struct Quotient {
    /// For each object: per element of the flattened union, its class label.
    labels: Vec<Vec<usize>>,
    names: Vec<Vec<String>>,
}

/// Flattened layout of several presheaves: `offset[o][i]` is where node `i`
/// starts in the union over object `o`.
struct Layout {
    offset: Vec<Vec<usize>>,
    total: Vec<usize>,
}

impl Layout {
    fn new(n_obj: usize, nodes: &[&Presheaf]) -> Self {
        let mut offset = vec![Vec::with_capacity(nodes.len()); n_obj];
        let mut total = vec![0; n_obj];
        for (o, off) in offset.iter_mut().enumerate() {
            for p in nodes {
                off.push(total[o]);
                total[o] += p.size(o);
            }
        }
        Layout { offset, total }
    }

    fn at(&self, o: usize, node: usize, x: usize) -> usize {
        self.offset[o][node] + x
    }
}

/// Turns class labels into an apex presheaf with sorted carriers, plus the
/// leg components for each node.
fn assemble(
    base: &Arc<BaseCategory>,
    nodes: &[&Presheaf],
    layout: &Layout,
    q: Quotient,
) -> (Arc<Presheaf>, Vec<Vec<Vec<usize>>>) {
    let n_obj = base.objects().len();
    // Sort class names; position[o][label] = index in the apex carrier.
    let mut position = Vec::with_capacity(n_obj);
    let mut carriers = Vec::with_capacity(n_obj);
    for names in &q.names {
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let mut pos = vec![0; names.len()];
        for (k, &label) in order.iter().enumerate() {
            pos[label] = k;
        }
        carriers.push(order.iter().map(|&l| names[l].clone()).collect::<Vec<_>>());
        position.push(pos);
    }
    let class_of = |o: usize, node: usize, x: usize| position[o][q.labels[o][layout.at(o, node, x)]];

    let mut actions = Vec::with_capacity(base.generators().len());
    for (g, gen) in base.generators().iter().enumerate() {
        let mut action = vec![usize::MAX; carriers[gen.dst].len()];
        for (i, p) in nodes.iter().enumerate() {
            for y in 0..p.size(gen.dst) {
                let k = class_of(gen.dst, i, y);
                let image = class_of(gen.src, i, p.act(g, y));
                debug_assert!(action[k] == usize::MAX || action[k] == image, "induced action is ill defined");
                action[k] = image;
            }
        }
        actions.push(action);
    }
    let apex = Arc::new(Presheaf::from_indexed(base.clone(), carriers, actions));
    let legs = nodes
        .iter()
        .enumerate()
        .map(|(i, p)| (0..n_obj).map(|o| (0..p.size(o)).map(|x| class_of(o, i, x)).collect()).collect())
        .collect();
    (apex, legs)
}

/// The colimit of a finite diagram. Each class is named by its least tagged
/// member `"{node}/{id}"`.
pub fn colimit_of_diagram(d: &Arc<Diagram>) -> Cocone {
    let base = d.base.clone();
    let n_obj = base.objects().len();
    let nodes: Vec<&Presheaf> = d.nodes.iter().map(|p| p.as_ref()).collect();
    let layout = Layout::new(n_obj, &nodes);
    let mut labels = Vec::with_capacity(n_obj);
    let mut names = Vec::with_capacity(n_obj);
    for o in 0..n_obj {
        let mut uf = UnionFind::new(layout.total[o]);
        for a in &d.arrows {
            for (x, &y) in a.morphism.components()[o].iter().enumerate() {
                uf.union(layout.at(o, a.from, x), layout.at(o, a.to, y));
            }
        }
        let (lab, k) = uf.classes();
        let mut best: Vec<Option<String>> = vec![None; k];
        for (i, p) in nodes.iter().enumerate() {
            for (x, id) in p.carrier(o).iter().enumerate() {
                let tag = format!("{i}/{id}");
                let slot = &mut best[lab[layout.at(o, i, x)]];
                if slot.as_ref().is_none_or(|b| tag < *b) {
                    *slot = Some(tag);
                }
            }
        }
        labels.push(lab);
        names.push(best.into_iter().map(|b| b.expect("classes are nonempty")).collect());
    }
    let (apex, legs) = assemble(&base, &nodes, &layout, Quotient { labels, names });
    let legs = legs
        .into_iter()
        .enumerate()
        .map(|(i, c)| PresheafMorphism::from_parts(d.nodes[i].clone(), apex.clone(), c))
        .collect();
    Cocone { diagram: d.clone(), apex, legs }
}

#[derive(Clone, Debug)]
pub struct Span {
    pub apex: Arc<Presheaf>,
    pub left: PresheafMorphism,
    pub right: PresheafMorphism,
}

#[derive(Clone, Debug)]
pub struct GeneralizedPushoutResult {
    pub apex: Arc<Presheaf>,
    pub leg1: PresheafMorphism,
    pub leg2: PresheafMorphism,
}

/// The colimit of a family of spans `p1 <- s -> p2`.
///
/// Classes meeting `p1` keep the least `p1` identifier, so `p1` ids survive
/// verbatim whenever `leg1` is injective. Classes meeting only `p2` take the
/// least `p2` identifier, suffixed with `~k` if that name is already used by a
/// `p1` class.
pub fn generalized_pushout(p1: &Arc<Presheaf>, p2: &Arc<Presheaf>, spans: &[Span]) -> GeneralizedPushoutResult {
    let base = p1.base().clone();
    let n_obj = base.objects().len();
    let nodes = [p1.as_ref(), p2.as_ref()];
    let layout = Layout::new(n_obj, &nodes);
    let mut labels = Vec::with_capacity(n_obj);
    let mut names = Vec::with_capacity(n_obj);
    for o in 0..n_obj {
        let mut uf = UnionFind::new(layout.total[o]);
        for s in spans {
            debug_assert!(s.left.target() == p1 && s.right.target() == p2);
            for (l, r) in s.left.components()[o].iter().zip(&s.right.components()[o]) {
                uf.union(layout.at(o, 0, *l), layout.at(o, 1, *r));
            }
        }
        let (lab, k) = uf.classes();
        let mut from_p1: Vec<Option<&String>> = vec![None; k];
        let mut from_p2: Vec<Option<&String>> = vec![None; k];
        // Carriers are sorted, so the first member seen is the least.
        for (x, id) in p1.carrier(o).iter().enumerate() {
            from_p1[lab[layout.at(o, 0, x)]].get_or_insert(id);
        }
        for (x, id) in p2.carrier(o).iter().enumerate() {
            from_p2[lab[layout.at(o, 1, x)]].get_or_insert(id);
        }
        let taken: HashSet<&String> = from_p1.iter().flatten().copied().collect();
        let class_names = (0..k)
            .map(|c| match (from_p1[c], from_p2[c]) {
                (Some(id), _) => id.clone(),
                (None, Some(id)) => {
                    if !taken.contains(id) {
                        return id.clone();
                    }
                    (1..)
                        .map(|n| format!("{id}~{n}"))
                        .find(|cand| !taken.contains(cand) && p2.index_of(o, cand).is_none())
                        .expect("some suffix is free")
                }
                (None, None) => unreachable!("every class has a member"),
            })
            .collect();
        labels.push(lab);
        names.push(class_names);
    }
    let (apex, mut legs) = assemble(&base, &nodes, &layout, Quotient { labels, names });
    let leg2 = PresheafMorphism::from_parts(p2.clone(), apex.clone(), legs.pop().unwrap());
    let leg1 = PresheafMorphism::from_parts(p1.clone(), apex.clone(), legs.pop().unwrap());
    GeneralizedPushoutResult { apex, leg1, leg2 }
}

/// The unique morphism `u` from the universal apex with `leg_i ; u = other.leg_i`.
pub fn mediating(universal: &Cocone, other: &Cocone) -> PresheafMorphism {
    assert_eq!(universal.legs.len(), other.legs.len(), "cocones over different diagrams");
    let n_obj = universal.apex.base().objects().len();
    let mut components: Vec<Vec<usize>> = (0..n_obj).map(|o| vec![usize::MAX; universal.apex.size(o)]).collect();
    for (leg, theirs) in universal.legs.iter().zip(&other.legs) {
        for (o, comp) in components.iter_mut().enumerate() {
            for (x, &k) in leg.components()[o].iter().enumerate() {
                let y = theirs.apply(o, x);
                assert!(comp[k] == usize::MAX || comp[k] == y, "the second cocone does not factor through the first");
                comp[k] = y;
            }
        }
    }
    assert!(components.iter().flatten().all(|&y| y != usize::MAX), "the first cocone is not jointly surjective");
    PresheafMorphism::from_parts(universal.apex.clone(), other.apex.clone(), components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{discrete, graph, path};
    use crate::matching::is_isomorphic;
    use crate::presheaf::representable;

    fn base() -> Arc<BaseCategory> {
        Arc::new(BaseCategory::graph())
    }

    #[test]
    fn single_node_colimit_is_the_node() {
        let b = base();
        let p = Arc::new(path(&b, 2));
        let d = Arc::new(Diagram::new(b, vec![p.clone()], vec![]).unwrap());
        let c = colimit_of_diagram(&d);
        assert!(c.leg(0).is_iso());
        assert!(is_isomorphic(&p, c.apex()).is_some());
    }

    #[test]
    fn gluing_two_edges_gives_a_path() {
        let b = base();
        let yv = Arc::new(representable(&b, 0));
        let ye = Arc::new(representable(&b, 1));
        let t = PresheafMorphism::from_names(yv.clone(), ye.clone(), [("v", "v", "t")]).unwrap();
        let s = PresheafMorphism::from_names(yv.clone(), ye.clone(), [("v", "v", "s")]).unwrap();
        let d = Arc::new(
            Diagram::new(
                b.clone(),
                vec![ye.clone(), yv.clone(), ye.clone()],
                vec![
                    DiagramArrow { from: 1, to: 0, morphism: t.clone() },
                    DiagramArrow { from: 1, to: 2, morphism: s.clone() },
                ],
            )
            .unwrap(),
        );
        let c = colimit_of_diagram(&d);
        assert_eq!(c.apex().counts(), vec![3, 2]);
        let p2 = Arc::new(path(&b, 2));
        assert!(is_isomorphic(c.apex(), &p2).is_some());

        let gp = generalized_pushout(&ye, &ye, &[Span { apex: yv.clone(), left: t, right: s }]);
        assert_eq!(gp.apex.counts(), vec![3, 2]);
        assert!(gp.leg1.is_mono() && gp.leg2.is_mono());
        // p1 identifiers survive.
        assert_eq!(gp.leg1.named_components()["v"]["s"], "s");
        assert_eq!(gp.leg1.named_components()["e"]["e"], "e");
    }

    #[test]
    fn no_spans_is_a_coproduct() {
        let b = base();
        let p = Arc::new(path(&b, 1));
        let gp = generalized_pushout(&p, &p, &[]);
        assert_eq!(gp.apex.counts(), vec![4, 2]);
        assert!(gp.apex.carrier(0).contains(&"v0~1".to_string()));
    }

    #[test]
    fn mediating_identity_and_fold() {
        let b = base();
        let v = Arc::new(discrete(&b, 1));
        let d = Arc::new(Diagram::new(b.clone(), vec![v.clone(), v.clone()], vec![]).unwrap());
        let colim = colimit_of_diagram(&d);
        assert_eq!(mediating(&colim, &colim), PresheafMorphism::identity(colim.apex().clone()));
        let id = PresheafMorphism::identity(v.clone());
        let fold = Cocone::new(d, v.clone(), vec![id.clone(), id]).unwrap();
        let u = mediating(&colim, &fold);
        assert!(!u.is_mono());
    }

    #[test]
    fn cocone_rejects_non_commuting_legs() {
        let b = base();
        let yv = Arc::new(representable(&b, 0));
        let ye = Arc::new(representable(&b, 1));
        let s = PresheafMorphism::from_names(yv.clone(), ye.clone(), [("v", "v", "s")]).unwrap();
        let t = PresheafMorphism::from_names(yv.clone(), ye.clone(), [("v", "v", "t")]).unwrap();
        let d = Arc::new(
            Diagram::new(b, vec![yv.clone(), ye.clone()], vec![DiagramArrow { from: 0, to: 1, morphism: s }]).unwrap(),
        );
        let err = Cocone::new(d, ye.clone(), vec![t, PresheafMorphism::identity(ye)]).unwrap_err();
        assert_eq!(err, DiagramError::NotCommuting(0));
        let _ = graph;
    }
}
