//! The batch oracle: the colimit of the rhs diagram over every instance and
//! every comma morphism, and its action on monos.

use std::collections::HashMap;
use std::sync::Arc;

use super::Instance;
use crate::colimit::{colimit_of_diagram, mediating, Cocone, Diagram, DiagramArrow};
use crate::matching::find_monos;
use crate::morphism::{compose, PresheafMorphism};
use crate::presheaf::Presheaf;
use crate::rules::RuleSystem;

#[derive(Clone, Debug)]
pub struct BatchResult {
    /// Node `i` of the cocone's diagram is `R(instances[i].rule)`.
    pub instances: Vec<Instance>,
    pub cocone: Cocone,
    /// Pairs of instances joined by two distinct comma morphisms; zero when `L` is full and faithful.
    pub thinness_violations: usize,
}

impl BatchResult {
    pub fn apex(&self) -> &Arc<Presheaf> {
        self.cocone.apex()
    }

    pub fn index_of(&self, inst: &Instance) -> Option<usize> {
        self.instances.iter().position(|i| i == inst)
    }
}

/// All rules matched everywhere, all non-identity comma morphisms as arrows.
pub fn batch_step(rs: &RuleSystem, p: &Arc<Presheaf>) -> BatchResult {
    let mut instances = Vec::new();
    for (r, rule) in rs.rules().iter().enumerate() {
        for matched in find_monos(&rule.lhs, p) {
            instances.push(Instance { rule: r, matched });
        }
    }
    let index: HashMap<&Instance, usize> = instances.iter().enumerate().map(|(i, inst)| (inst, i)).collect();
    let mut arrows = Vec::new();
    let mut thinness_violations = 0;
    for (j, m) in instances.iter().enumerate() {
        let mut sources: HashMap<usize, usize> = HashMap::new();
        for &k in rs.members_into(m.rule) {
            let e = rs.member(k);
            if e.is_identity() {
                continue;
            }
            let sub = Instance { rule: e.src, matched: compose(&e.lhs_map, &m.matched).expect("composable") };
            let i = index[&sub];
            let count = sources.entry(i).or_insert(0);
            *count += 1;
            if *count == 2 {
                thinness_violations += 1;
            }
            arrows.push(DiagramArrow { from: i, to: j, morphism: e.rhs_map.clone() });
        }
    }
    let nodes = instances.iter().map(|inst| rs.rule(inst.rule).rhs.clone()).collect();
    let diagram = Arc::new(Diagram::new(rs.base().clone(), nodes, arrows).expect("arrows follow rule inclusions"));
    let cocone = colimit_of_diagram(&diagram);
    BatchResult { instances, cocone, thinness_violations }
}

/// `T(h): T(p) -> T(p')` for a mono `h: p ↣ p'`, as the mediating morphism
/// from the batch colimit of `p` to the batch cocone of `p'` restricted along
/// `⟨γ, f⟩ ↦ ⟨γ, f;h⟩`.
pub fn transport(rs: &RuleSystem, h: &PresheafMorphism) -> PresheafMorphism {
    assert!(h.is_mono(), "transport is defined along monos");
    let here = batch_step(rs, h.source());
    let there = batch_step(rs, h.target());
    let index: HashMap<&Instance, usize> = there.instances.iter().enumerate().map(|(i, inst)| (inst, i)).collect();
    let legs = here
        .instances
        .iter()
        .map(|inst| {
            let image = Instance { rule: inst.rule, matched: compose(&inst.matched, h).expect("composable") };
            there.cocone.leg(index[&image]).clone()
        })
        .collect();
    let restricted = Cocone::new(here.cocone.diagram().clone(), there.apex().clone(), legs)
        .expect("restriction of a cocone along instance images is a cocone");
    mediating(&here.cocone, &restricted)
}
