//! Online accretive computation: breadth-first over non-maximal instances,
//! gluing the rhs of each maximal instance onto the running result by a
//! generalized pushout along the already-placed shared sub-instances.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::{canonicalize, is_maximal, minimal_instances, super_instances, Instance};
use crate::colimit::{generalized_pushout, Span};
use crate::morphism::{compose, PresheafMorphism};
use crate::presheaf::{disjoint_union, Presheaf};
use crate::rules::RuleSystem;

#[derive(Clone, Copy, Debug, Default)]
pub struct OnlineOptions {
    /// Re-check the queue invariants after every drop; costs one extension
    /// search per dropped instance.
    pub check_invariants: bool,
}

/// A pushout whose leg from the previous intermediate result is not mono.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonMonoPushout {
    /// Index of the pushout within the run, from 1.
    pub index: usize,
    pub maximal: String,
}

#[derive(Clone, Debug, Default)]
pub struct OnlineReport {
    pub components: usize,
    pub pushouts: usize,
    pub non_mono: Vec<NonMonoPushout>,
    /// Largest queue length observed.
    pub peak_queue: usize,
    /// Broken invariants, empty on a correct run.
    pub violations: Vec<String>,
}

impl OnlineReport {
    pub fn is_accretive(&self) -> bool {
        self.non_mono.is_empty()
    }
}

pub fn online_step(rs: &RuleSystem, p: &Arc<Presheaf>) -> Presheaf {
    online_step_with(rs, p, OnlineOptions::default()).0
}

/// One step of the transformation computed online, one connected component
/// of `L/p` at a time.
pub fn online_step_with(rs: &RuleSystem, p: &Arc<Presheaf>, opts: OnlineOptions) -> (Presheaf, OnlineReport) {
    let mut run = Run { rs, opts, report: OnlineReport::default(), covered: HashSet::new(), maximal: HashMap::new() };
    let mut parts = Vec::new();
    for seed in minimal_instances(rs, p) {
        let (seed, _) = canonicalize(rs, &seed);
        if run.covered.contains(&seed) {
            continue;
        }
        run.report.components += 1;
        parts.push(run.component(seed));
    }
    let result = match parts.len() {
        0 => Presheaf::empty(rs.base().clone()),
        1 => Arc::try_unwrap(parts.pop().unwrap()).unwrap_or_else(|a| (*a).clone()),
        _ => {
            let (u, _) = disjoint_union(rs.base(), &parts);
            Arc::try_unwrap(u).unwrap_or_else(|a| (*a).clone())
        }
    };
    (result, run.report)
}

struct Run<'a> {
    rs: &'a RuleSystem,
    opts: OnlineOptions,
    report: OnlineReport,
    /// Every instance reached so far, across components.
    covered: HashSet<Instance>,
    maximal: HashMap<Instance, bool>,
}

/// Queue state for one component.
struct Component {
    result: Arc<Presheaf>,
    queue: VecDeque<Instance>,
    /// Legs `R(n) -> result` for queued `n`.
    legs: HashMap<Instance, PresheafMorphism>,
    /// Processed maximal super-instances recorded per queued instance.
    seen: HashMap<Instance, HashSet<Instance>>,
    processed: HashSet<Instance>,
    dropped: HashSet<Instance>,
    fresh: usize,
}

impl Run<'_> {
    fn is_maximal(&mut self, inst: &Instance) -> bool {
        if let Some(&b) = self.maximal.get(inst) {
            return b;
        }
        let b = is_maximal(self.rs, inst);
        self.maximal.insert(inst.clone(), b);
        b
    }

    /// Canonical maximal super-instances, first occurrence order.
    fn maximal_supers(&mut self, n: &Instance) -> Vec<Instance> {
        let mut out: Vec<Instance> = Vec::new();
        for (sup, _) in super_instances(self.rs, n) {
            let (m, _) = canonicalize(self.rs, &sup);
            if !out.contains(&m) && self.is_maximal(&m) {
                out.push(m);
            }
        }
        out
    }

    /// Canonical proper sub-instances of `m`, with `R(n') -> R(m)`.
    fn proper_subs(&self, m: &Instance) -> Vec<(Instance, PresheafMorphism)> {
        let mut out: Vec<(Instance, PresheafMorphism)> = Vec::new();
        for &k in self.rs.members_into(m.rule) {
            let e = self.rs.member(k);
            let raw = Instance { rule: e.src, matched: compose(&e.lhs_map, &m.matched).expect("composable") };
            let (n, sigma) = canonicalize(self.rs, &raw);
            if n == *m || out.iter().any(|(o, _)| *o == n) {
                continue;
            }
            let rhs = compose(&sigma, &e.rhs_map).expect("composable");
            out.push((n, rhs));
        }
        out
    }

    fn component(&mut self, seed: Instance) -> Arc<Presheaf> {
        let rs = self.rs;
        self.covered.insert(seed.clone());
        let rhs = |inst: &Instance| rs.rule(inst.rule).rhs.clone();
        if self.is_maximal(&seed) {
            return Arc::new(rhs(&seed).with_prefix("0."));
        }
        let start = Arc::new(rhs(&seed).with_prefix("0."));
        let mut st = Component {
            result: start.clone(),
            queue: VecDeque::from([seed.clone()]),
            legs: HashMap::from([(seed.clone(), PresheafMorphism::identity(rhs(&seed)).retarget(start))]),
            seen: HashMap::new(),
            processed: HashSet::new(),
            dropped: HashSet::new(),
            fresh: 0,
        };
        while let Some(n) = st.queue.front().cloned() {
            for m in self.maximal_supers(&n) {
                if st.seen.get(&n).is_some_and(|s| s.contains(&m)) {
                    continue;
                }
                self.glue(&mut st, m);
            }
            st.queue.pop_front();
            st.legs.remove(&n);
            st.seen.remove(&n);
            st.dropped.insert(n.clone());
            if self.opts.check_invariants {
                self.check_after_drop(&st, &n);
            }
        }
        st.result
    }

    fn glue(&mut self, st: &mut Component, m: Instance) {
        let rs = self.rs;
        st.fresh += 1;
        let rhs_m = Arc::new(rs.rule(m.rule).rhs.with_prefix(&format!("{}.", st.fresh)));
        let subs: Vec<(Instance, PresheafMorphism)> =
            self.proper_subs(&m).into_iter().map(|(n, r)| (n, r.retarget(rhs_m.clone()))).collect();
        let mut spans = Vec::new();
        for (n, r) in &subs {
            match st.legs.get(n) {
                Some(leg) => {
                    spans.push(Span { apex: rs.rule(n.rule).rhs.clone(), left: leg.clone(), right: r.clone() })
                }
                None if st.dropped.contains(n) => self.report.violations.push(format!(
                    "dropped instance {} is a sub-instance of unprocessed {}",
                    n.describe(rs),
                    m.describe(rs)
                )),
                None => {}
            }
        }
        let po = generalized_pushout(&st.result, &rhs_m, &spans);
        self.report.pushouts += 1;
        if !po.leg1.is_mono() {
            self.report.non_mono.push(NonMonoPushout { index: self.report.pushouts, maximal: m.describe(rs) });
        }
        for leg in st.legs.values_mut() {
            *leg = compose(leg, &po.leg1).expect("legs end at the current result");
        }
        for (n, r) in subs {
            if st.dropped.contains(&n) {
                continue;
            }
            st.seen.entry(n.clone()).or_default().insert(m.clone());
            if !st.legs.contains_key(&n) {
                st.legs.insert(n.clone(), compose(&r, &po.leg2).expect("composable"));
                st.queue.push_back(n.clone());
            }
            self.covered.insert(n);
        }
        self.report.peak_queue = self.report.peak_queue.max(st.queue.len());
        self.covered.insert(m.clone());
        st.processed.insert(m);
        st.result = po.apex;
    }

    /// A dropped instance has no unprocessed maximal super-instance, and
    /// bookkeeping only mentions queued instances.
    fn check_after_drop(&mut self, st: &Component, n: &Instance) {
        for m in self.maximal_supers(n) {
            if !st.processed.contains(&m) {
                let msg = format!("{} dropped before {}", n.describe(self.rs), m.describe(self.rs));
                self.report.violations.push(msg);
            }
        }
        let queued: HashSet<&Instance> = st.queue.iter().collect();
        if st.seen.keys().any(|k| !queued.contains(k)) || st.legs.keys().any(|k| !queued.contains(k)) {
            self.report.violations.push("bookkeeping mentions an instance outside the queue".into());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{self, acyclic_triangle, cycle, discrete, path};
    use crate::matching::is_isomorphic;

    fn checked(rs: &RuleSystem, p: &Arc<Presheaf>) -> (Presheaf, OnlineReport) {
        let (out, report) = online_step_with(rs, p, OnlineOptions { check_invariants: true });
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        (out, report)
    }

    #[test]
    fn sierpinski_one_triangle() {
        let rs = corpus::sierpinski();
        let tri = Arc::new(acyclic_triangle(rs.base()));
        let (out, report) = checked(&rs, &tri);
        assert_eq!(out.counts(), vec![6, 9]);
        assert!(report.is_accretive());
        assert_eq!(report.components, 1);
        let rhs = rs.rule(rs.rule_index("triangle").unwrap()).rhs.clone();
        assert!(is_isomorphic(&Arc::new(out), &rhs).is_some());
    }

    #[test]
    fn sierpinski_second_step() {
        let rs = corpus::sierpinski();
        let tri = Arc::new(acyclic_triangle(rs.base()));
        let once = Arc::new(online_step(&rs, &tri));
        let (twice, report) = checked(&rs, &once);
        assert_eq!(twice.counts(), vec![15, 27]);
        assert!(report.is_accretive());
    }

    #[test]
    fn single_vertex_under_sierpinski() {
        let rs = corpus::sierpinski();
        let d1 = Arc::new(discrete(rs.base(), 1));
        let (out, report) = checked(&rs, &d1);
        assert_eq!(out.counts(), vec![1, 0]);
        assert_eq!(report.pushouts, 0);
    }

    #[test]
    fn components_are_processed_separately() {
        let rs = corpus::sierpinski();
        let d3 = Arc::new(discrete(rs.base(), 3));
        let (out, report) = checked(&rs, &d3);
        assert_eq!(out.counts(), vec![3, 0]);
        assert_eq!(report.components, 3);
        let empty = Arc::new(Presheaf::empty(rs.base().clone()));
        assert!(online_step(&rs, &empty).is_empty());
    }

    #[test]
    fn dualization_on_a_cycle_is_not_accretive() {
        let rs = corpus::dualization();
        let c3 = Arc::new(cycle(rs.base(), 3));
        let (out, report) = checked(&rs, &c3);
        assert_eq!(out.counts(), vec![3, 3]);
        assert!(!report.is_accretive());
        let p2 = Arc::new(path(rs.base(), 2));
        let (out, report) = checked(&rs, &p2);
        assert_eq!(out.counts(), vec![4, 3]);
        assert!(report.is_accretive());
    }

    #[test]
    fn contraction_of_an_edge() {
        let rs = corpus::contraction();
        let p1 = Arc::new(path(rs.base(), 1));
        assert_eq!(checked(&rs, &p1).0.counts(), vec![1, 0]);
    }
}
