//! The comma category `L/p` explored lazily, the online step, the batch
//! oracle, transport along monos and iteration.
//!
//! An instance is a pair of a rule and a mono from its lhs into the input.
//! Instances related by invertible rule inclusions are isomorphic in `L/p`;
//! the engine works with the least member of each isomorphism class.

mod batch;
mod online;

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::matching::{extend_mono, find_monos, has_extension};
use crate::morphism::{compose, PresheafMorphism};
use crate::presheaf::Presheaf;
use crate::rules::RuleSystem;

pub use batch::{batch_step, transport, BatchResult};
pub use online::{online_step, online_step_with, NonMonoPushout, OnlineOptions, OnlineReport};

/// An object `⟨γ, f⟩` of `L/p`: rule index `γ` and `f: lhs(γ) ↣ p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub rule: usize,
    pub matched: PresheafMorphism,
}

impl Hash for Instance {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rule.hash(state);
        self.matched.components().hash(state);
    }
}

impl Ord for Instance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rule.cmp(&other.rule).then_with(|| self.matched.canonical_cmp(&other.matched))
    }
}

impl PartialOrd for Instance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Instance {
    /// `rule@obj{x:y,..};..` with rule and element names, for reports.
    pub fn describe(&self, rs: &RuleSystem) -> String {
        let comps: Vec<String> = self
            .matched
            .named_components()
            .into_iter()
            .filter(|(_, m)| !m.is_empty())
            .map(|(o, m)| {
                let pairs: Vec<String> = m.into_iter().map(|(x, y)| format!("{x}:{y}")).collect();
                format!("{o}{{{}}}", pairs.join(","))
            })
            .collect();
        format!("{}@{}", rs.rule(self.rule).id, comps.join(";"))
    }
}

/// Every `⟨γ, L(e);f⟩` for closure members `e: γ -> rule(m)`, identity
/// included, each paired with the closure index of `e`.
///
/// Distinct members give distinct instances because `f` is mono and `L` is
/// faithful.
pub fn sub_instances(rs: &RuleSystem, m: &Instance) -> Vec<(Instance, usize)> {
    rs.members_into(m.rule)
        .iter()
        .map(|&k| {
            let e = rs.member(k);
            let matched = compose(&e.lhs_map, &m.matched).expect("closure member ends at the rule of m");
            (Instance { rule: e.src, matched }, k)
        })
        .collect()
}

/// Every `⟨γ'', f''⟩` with `L(e');f'' = f` for closure members `e': rule(n) -> γ''`,
/// identity included, each paired with the closure index of `e'`.
pub fn super_instances(rs: &RuleSystem, n: &Instance) -> Vec<(Instance, usize)> {
    let mut out = Vec::new();
    for &k in rs.members_from(n.rule) {
        let e = rs.member(k);
        for matched in extend_mono(&e.lhs_map, &n.matched) {
            out.push((Instance { rule: e.dst, matched }, k));
        }
    }
    out
}

/// No extension along a non-invertible closure member.
///
/// By thinness this is equivalent to every super-instance being isomorphic to `n`.
pub fn is_maximal(rs: &RuleSystem, n: &Instance) -> bool {
    rs.members_from(n.rule).iter().all(|&k| {
        let e = rs.member(k);
        e.is_invertible() || !has_extension(&e.lhs_map, &n.matched)
    })
}

/// Instances of rules without a proper incoming inclusion, in rule order then
/// match order. These are minimal in `L/p`.
pub fn minimal_instances(rs: &RuleSystem, p: &Arc<Presheaf>) -> Vec<Instance> {
    let mut out = Vec::new();
    for r in 0..rs.rules().len() {
        if rs.is_minimal_rule(r) {
            for matched in find_monos(&rs.rule(r).lhs, p) {
                out.push(Instance { rule: r, matched });
            }
        }
    }
    out
}

/// The first minimal instance, if `p` matches anything at all.
pub fn find_any_minimal(rs: &RuleSystem, p: &Arc<Presheaf>) -> Option<Instance> {
    (0..rs.rules().len())
        .filter(|&r| rs.is_minimal_rule(r))
        .find_map(|r| find_monos(&rs.rule(r).lhs, p).into_iter().next().map(|matched| Instance { rule: r, matched }))
}

/// The least instance isomorphic to `inst`, with the rhs map of the
/// comparison morphism `R(rep) -> R(inst)`.
pub fn canonicalize(rs: &RuleSystem, inst: &Instance) -> (Instance, PresheafMorphism) {
    let mut best: Option<(Instance, PresheafMorphism)> = None;
    for &k in rs.members_into(inst.rule) {
        let sigma = rs.member(k);
        if !sigma.is_invertible() {
            continue;
        }
        let cand = Instance {
            rule: sigma.src,
            matched: compose(&sigma.lhs_map, &inst.matched).expect("member ends at the rule of inst"),
        };
        if best.as_ref().is_none_or(|(b, _)| cand < *b) {
            best = Some((cand, sigma.rhs_map.clone()));
        }
    }
    best.expect("identity is a closure member")
}

/// Applies the online step `k` times; step outputs are renamed `"{step}:{obj}{i}"`.
pub fn iterate(rs: &RuleSystem, p: &Arc<Presheaf>, k: usize) -> Arc<Presheaf> {
    let mut cur = p.clone();
    for step in 1..=k {
        let next = online_step(rs, &cur);
        cur = Arc::new(next.relabel(&format!("{step}:")));
    }
    cur
}
