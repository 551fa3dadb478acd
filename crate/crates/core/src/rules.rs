//! Rule systems: rules `lhs ⇒ rhs`, rule inclusions, their composition
//! closure, well-formedness checks and the incrementality decision procedure.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::base::BaseCategory;
use crate::error::RuleError;
use crate::matching::find_monos;
use crate::morphism::{compose, PresheafMorphism};
use crate::presheaf::Presheaf;

#[derive(Clone, Debug)]
pub struct Rule {
    pub id: String,
    pub lhs: Arc<Presheaf>,
    pub rhs: Arc<Presheaf>,
}

/// A morphism of the rule category: `lhs_map: L(src) ↣ L(dst)` together with
/// `rhs_map: R(src) -> R(dst)`. Closure members reuse this type, with
/// composite ids such as `i3∘i1` and identities `id:<rule>`.
#[derive(Clone, Debug)]
pub struct RuleInclusion {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub lhs_map: PresheafMorphism,
    pub rhs_map: PresheafMorphism,
}

impl RuleInclusion {
    /// Extensional equality: same endpoints and pointwise-equal components.
    pub fn same_morphism(&self, other: &RuleInclusion) -> bool {
        self.src == other.src && self.dst == other.dst && self.lhs_map == other.lhs_map && self.rhs_map == other.rhs_map
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst && self.lhs_map == PresheafMorphism::identity(self.lhs_map.source().clone())
    }

    /// Invertible in the rule category: the lhs map is a bijection.
    pub fn is_invertible(&self) -> bool {
        self.lhs_map.is_iso()
    }
}

#[derive(Clone, Debug)]
pub struct RuleSystem {
    base: Arc<BaseCategory>,
    rules: Vec<Rule>,
    inclusions: Vec<RuleInclusion>,
    closure: Vec<RuleInclusion>,
    into: Vec<Vec<usize>>,
    from: Vec<Vec<usize>>,
}

impl RuleSystem {
    /// Checks the raw data and computes the composition closure.
    pub fn new(base: Arc<BaseCategory>, rules: Vec<Rule>, inclusions: Vec<RuleInclusion>) -> Result<Self, RuleError> {
        let mut seen = HashMap::new();
        for r in &rules {
            if seen.insert(r.id.clone(), ()).is_some() {
                return Err(RuleError::DuplicateRule(r.id.clone()));
            }
            if r.lhs.is_empty() {
                return Err(RuleError::EmptyLhs(r.id.clone()));
            }
        }
        let mut seen = HashMap::new();
        for inc in &inclusions {
            if seen.insert(inc.id.clone(), ()).is_some() {
                return Err(RuleError::DuplicateInclusion(inc.id.clone()));
            }
            let (src, dst) = (&rules[inc.src], &rules[inc.dst]);
            let endpoints_ok = inc.lhs_map.source() == &src.lhs
                && inc.lhs_map.target() == &dst.lhs
                && inc.rhs_map.source() == &src.rhs
                && inc.rhs_map.target() == &dst.rhs;
            if !endpoints_ok {
                return Err(RuleError::Morphism {
                    inclusion: inc.id.clone(),
                    source: crate::error::MorphismError::Mismatch,
                });
            }
            if !inc.lhs_map.is_mono() {
                return Err(RuleError::LhsNotMono(inc.id.clone()));
            }
        }
        let mut rs = RuleSystem { base, rules, inclusions, closure: Vec::new(), into: Vec::new(), from: Vec::new() };
        rs.closure = close_under_composition(&rs)?;
        rs.into =
            (0..rs.rules.len()).map(|r| (0..rs.closure.len()).filter(|&k| rs.closure[k].dst == r).collect()).collect();
        rs.from =
            (0..rs.rules.len()).map(|r| (0..rs.closure.len()).filter(|&k| rs.closure[k].src == r).collect()).collect();
        Ok(rs)
    }

    pub fn base(&self) -> &Arc<BaseCategory> {
        &self.base
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, r: usize) -> &Rule {
        &self.rules[r]
    }

    pub fn rule_index(&self, id: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.id == id)
    }

    pub fn inclusions(&self) -> &[RuleInclusion] {
        &self.inclusions
    }

    pub fn closure(&self) -> &[RuleInclusion] {
        &self.closure
    }

    pub fn member(&self, k: usize) -> &RuleInclusion {
        &self.closure[k]
    }

    /// Closure members ending at rule `r`, identities included.
    pub fn members_into(&self, r: usize) -> &[usize] {
        &self.into[r]
    }

    /// Closure members starting at rule `r`, identities included.
    pub fn members_from(&self, r: usize) -> &[usize] {
        &self.from[r]
    }

    /// Rules without a non-invertible incoming inclusion.
    pub fn is_minimal_rule(&self, r: usize) -> bool {
        self.into[r].iter().all(|&k| self.closure[k].is_invertible())
    }
}

fn identity_of(rules: &[Rule], r: usize) -> RuleInclusion {
    RuleInclusion {
        id: format!("id:{}", rules[r].id),
        src: r,
        dst: r,
        lhs_map: PresheafMorphism::identity(rules[r].lhs.clone()),
        rhs_map: PresheafMorphism::identity(rules[r].rhs.clone()),
    }
}

/// Identities, raw inclusions and all composites, computed to a fixpoint and
/// deduplicated extensionally. Two members with equal lhs maps but different
/// rhs maps mean `R` is not a functor and are reported as an error.
pub fn close_under_composition(rs: &RuleSystem) -> Result<Vec<RuleInclusion>, RuleError> {
    let mut closure: Vec<RuleInclusion> = Vec::new();
    let insert = |closure: &mut Vec<RuleInclusion>, cand: RuleInclusion| -> Result<bool, RuleError> {
        if let Some(existing) =
            closure.iter().find(|m| m.src == cand.src && m.dst == cand.dst && m.lhs_map == cand.lhs_map)
        {
            if existing.rhs_map != cand.rhs_map {
                return Err(RuleError::NotFunctorial { first: existing.id.clone(), second: cand.id });
            }
            return Ok(false);
        }
        closure.push(cand);
        Ok(true)
    };
    for r in 0..rs.rules.len() {
        insert(&mut closure, identity_of(&rs.rules, r))?;
    }
    for inc in &rs.inclusions {
        insert(&mut closure, inc.clone())?;
    }
    // Semi-naive fixpoint: compose every new member with every member on both sides.
    let mut frontier = 0;
    while frontier < closure.len() {
        let end = closure.len();
        let mut fresh = Vec::new();
        for i in 0..end {
            for j in 0..end {
                if i < frontier && j < frontier {
                    continue;
                }
                let (a, b) = (&closure[i], &closure[j]);
                if a.dst != b.src || a.is_identity() || b.is_identity() {
                    continue;
                }
                let lhs_map = compose(&a.lhs_map, &b.lhs_map).expect("composable lhs maps");
                let rhs_map = compose(&a.rhs_map, &b.rhs_map).expect("composable rhs maps");
                fresh.push(RuleInclusion {
                    id: format!("{}∘{}", b.id, a.id),
                    src: a.src,
                    dst: b.dst,
                    lhs_map,
                    rhs_map,
                });
            }
        }
        frontier = end;
        for cand in fresh {
            insert(&mut closure, cand)?;
        }
    }
    Ok(closure)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    /// A mono between left-hand sides not realised by any closure member.
    UnmatchedMono {
        from: String,
        to: String,
        components: std::collections::BTreeMap<String, std::collections::BTreeMap<String, String>>,
    },
    RhsNotMono {
        inclusion: String,
    },
    /// Two distinct rules with identical left-hand sides would make `L` non-injective.
    SharedLhs {
        first: String,
        second: String,
    },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::UnmatchedMono { from, to, components } => {
                write!(f, "mono from lhs of `{from}` into lhs of `{to}` is not a rule inclusion: {components:?}")
            }
            Issue::RhsNotMono { inclusion } => write!(f, "inclusion `{inclusion}` has a non-injective rhs map"),
            Issue::SharedLhs { first, second } => write!(f, "rules `{first}` and `{second}` have the same lhs"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Checks `L`-fullness against the matcher and reports non-mono rhs maps as warnings.
pub fn validate_rule_system(rs: &RuleSystem) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (a, ra) in rs.rules.iter().enumerate() {
        for (b, rb) in rs.rules.iter().enumerate() {
            if a < b && ra.lhs == rb.lhs {
                report.errors.push(Issue::SharedLhs { first: ra.id.clone(), second: rb.id.clone() });
            }
            for mono in find_monos(&ra.lhs, &rb.lhs) {
                let realised = rs.into[b].iter().any(|&k| rs.closure[k].src == a && rs.closure[k].lhs_map == mono);
                if !realised {
                    report.errors.push(Issue::UnmatchedMono {
                        from: ra.id.clone(),
                        to: rb.id.clone(),
                        components: mono.named_components(),
                    });
                }
            }
        }
    }
    for inc in &rs.inclusions {
        if !inc.rhs_map.is_mono() {
            report.warnings.push(Issue::RhsNotMono { inclusion: inc.id.clone() });
        }
    }
    report
}

/// Two sub-rules whose right-hand sides overlap inside a common super-rule
/// without a common sub-rule accounting for the overlap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub rule: String,
    pub first: String,
    pub first_rule: String,
    pub second: String,
    pub second_rule: String,
    pub object: String,
    pub first_element: String,
    pub second_element: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rule `{}` is not incremental: cospan `{}` --{}--> `{}` <--{}-- `{}` identifies `{}` element `{}` of R({}) with `{}` of R({}), and no common sub-rule accounts for it",
            self.rule,
            self.first_rule,
            self.first,
            self.rule,
            self.second,
            self.second_rule,
            self.object,
            self.first_element,
            self.first_rule,
            self.second_element,
            self.second_rule
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Incrementality {
    Incremental,
    NotIncremental(Counterexample),
}

impl Incrementality {
    pub fn is_incremental(&self) -> bool {
        matches!(self, Incrementality::Incremental)
    }
}

/// Decides incrementality; returns the first witness in rule, closure, object
/// and element order.
///
/// Representable morphisms `ŷc -> R(γ)` are handled as elements of `R(γ)(c)`.
pub fn check_incremental(rs: &RuleSystem) -> Incrementality {
    let n_obj = rs.base.objects().len();
    for (gamma, rule) in rs.rules.iter().enumerate() {
        let subs = &rs.into[gamma];
        for &k1 in subs {
            for &k2 in subs {
                let (i1, i2) = (&rs.closure[k1], &rs.closure[k2]);
                for c in 0..n_obj {
                    for x1 in 0..i1.rhs_map.source().size(c) {
                        for x2 in 0..i2.rhs_map.source().size(c) {
                            if i1.rhs_map.apply(c, x1) != i2.rhs_map.apply(c, x2) {
                                continue;
                            }
                            if !overlap_explained(rs, i1, i2, c, x1, x2) {
                                return Incrementality::NotIncremental(Counterexample {
                                    rule: rule.id.clone(),
                                    first: i1.id.clone(),
                                    first_rule: rs.rules[i1.src].id.clone(),
                                    second: i2.id.clone(),
                                    second_rule: rs.rules[i2.src].id.clone(),
                                    object: rs.base.object_name(c).to_string(),
                                    first_element: i1.rhs_map.source().carrier(c)[x1].clone(),
                                    second_element: i2.rhs_map.source().carrier(c)[x2].clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Incrementality::Incremental
}

/// Is there `γ1 <-π1- γ' -π2-> γ2` with `i1∘π1 = i2∘π2` and `x ∈ R(γ')(c)`
/// mapped to `x1` and `x2`?
fn overlap_explained(rs: &RuleSystem, i1: &RuleInclusion, i2: &RuleInclusion, c: usize, x1: usize, x2: usize) -> bool {
    for &p1 in &rs.into[i1.src] {
        let pi1 = &rs.closure[p1];
        for &p2 in &rs.into[i2.src] {
            let pi2 = &rs.closure[p2];
            if pi1.src != pi2.src {
                continue;
            }
            let candidates: Vec<usize> = (0..pi1.rhs_map.source().size(c))
                .filter(|&x| pi1.rhs_map.apply(c, x) == x1 && pi2.rhs_map.apply(c, x) == x2)
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let left = compose(&pi1.lhs_map, &i1.lhs_map).expect("composable");
            let right = compose(&pi2.lhs_map, &i2.lhs_map).expect("composable");
            if left == right {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{self, graph};

    #[test]
    fn sierpinski_closure() {
        let rs = corpus::sierpinski();
        let vertex = rs.rule_index("vertex").unwrap();
        let triangle = rs.rule_index("triangle").unwrap();
        let into_triangle: Vec<_> =
            rs.members_into(triangle).iter().map(|&k| rs.member(k)).filter(|m| m.src == vertex).collect();
        // Six composites collapse onto the three corners.
        assert_eq!(into_triangle.len(), 3);
        // 3 identities + 5 raw + 3 corner composites
        assert_eq!(rs.closure().len(), 11);
        let again = close_under_composition(&rs).unwrap();
        assert_eq!(again.len(), rs.closure().len());
        assert!(again.iter().zip(rs.closure()).all(|(a, b)| a.same_morphism(b)));
    }

    #[test]
    fn closure_of_a_chain_adds_one_composite() {
        let base = Arc::new(BaseCategory::graph());
        let p = |k| Arc::new(graph(&base, &(0..k).map(|i| ["a", "b", "c"][i]).collect::<Vec<_>>(), &[]));
        let (d1, d2, d3) = (p(1), p(2), p(3));
        let rules = vec![
            Rule { id: "r1".into(), lhs: d1.clone(), rhs: d1.clone() },
            Rule { id: "r2".into(), lhs: d2.clone(), rhs: d2.clone() },
            Rule { id: "r3".into(), lhs: d3.clone(), rhs: d3.clone() },
        ];
        let m = |s: &Arc<Presheaf>, t: &Arc<Presheaf>| {
            let pairs: Vec<(&str, &str, &str)> = s.carrier(0).iter().map(|x| ("v", x.as_str(), x.as_str())).collect();
            PresheafMorphism::from_names(s.clone(), t.clone(), pairs).unwrap()
        };
        let inclusions = vec![
            RuleInclusion { id: "i".into(), src: 0, dst: 1, lhs_map: m(&d1, &d2), rhs_map: m(&d1, &d2) },
            RuleInclusion { id: "j".into(), src: 1, dst: 2, lhs_map: m(&d2, &d3), rhs_map: m(&d2, &d3) },
        ];
        let rs = RuleSystem::new(base.clone(), rules.clone(), inclusions).unwrap();
        assert_eq!(rs.closure().len(), 3 + 2 + 1);
        assert!(rs.closure().iter().any(|m| m.id == "j∘i"));

        let bare = RuleSystem::new(base, rules, vec![]).unwrap();
        assert!(bare.closure().iter().all(RuleInclusion::is_identity));
        // d1 embeds into d2 in two ways, none declared.
        let report = validate_rule_system(&bare);
        assert!(!report.is_ok());
        assert!(matches!(report.errors[0], Issue::UnmatchedMono { .. }));
    }

    #[test]
    fn reference_systems_validate() {
        for rs in corpus::reference_systems().into_iter().map(|(_, rs)| rs) {
            let report = validate_rule_system(&rs);
            assert!(report.is_ok(), "{:?}", report.errors);
        }
    }

    #[test]
    fn incrementality_table() {
        let verdicts: Vec<(String, bool)> = corpus::reference_systems()
            .into_iter()
            .map(|(name, rs)| (name, check_incremental(&rs).is_incremental()))
            .collect();
        let expect = [
            ("sierpinski", true),
            ("dualization", false),
            ("contraction", false),
            ("isolated-removal", false),
            ("multi-edge", false),
        ];
        for ((name, got), (want_name, want)) in verdicts.iter().zip(expect) {
            assert_eq!(name, want_name);
            assert_eq!(*got, want, "{name}");
        }
    }

    #[test]
    fn contraction_witness_is_the_two_endpoint_cospan() {
        let Incrementality::NotIncremental(w) = check_incremental(&corpus::contraction()) else {
            panic!("contraction is not incremental")
        };
        assert_eq!(w.rule, "edge");
        assert_eq!((w.first_rule.as_str(), w.second_rule.as_str()), ("vertex", "vertex"));
        assert_ne!(w.first, w.second);
        assert_eq!(w.object, "v");
    }

    #[test]
    fn isolated_removal_witness_is_a_two_edge_rule() {
        let Incrementality::NotIncremental(w) = check_incremental(&corpus::isolated_removal()) else {
            panic!("isolated-vertex removal is not incremental")
        };
        assert_eq!((w.first_rule.as_str(), w.second_rule.as_str()), ("edge", "edge"));
        assert_eq!(w.object, "v");
    }

    #[test]
    fn multi_edge_witness_is_on_the_merged_edge() {
        let Incrementality::NotIncremental(w) = check_incremental(&corpus::multi_edge()) else {
            panic!("multi-edge simplification is not incremental")
        };
        assert_eq!(w.rule, "parallel");
        assert_eq!((w.first_rule.as_str(), w.second_rule.as_str()), ("edge", "edge"));
        assert_eq!(w.object, "e");
    }

    #[test]
    fn non_functorial_system_is_rejected() {
        let base = Arc::new(BaseCategory::graph());
        let v = Arc::new(graph(&base, &["v"], &[]));
        let ab = Arc::new(graph(&base, &["a", "b"], &[]));
        let rules = vec![
            Rule { id: "one".into(), lhs: v.clone(), rhs: v.clone() },
            Rule { id: "two".into(), lhs: v.clone(), rhs: ab.clone() },
        ];
        let id = PresheafMorphism::identity(v.clone());
        let to = |x: &str| PresheafMorphism::from_names(v.clone(), ab.clone(), [("v", "v", x)]).unwrap();
        let inclusions = vec![
            RuleInclusion { id: "p".into(), src: 0, dst: 1, lhs_map: id.clone(), rhs_map: to("a") },
            RuleInclusion { id: "q".into(), src: 0, dst: 1, lhs_map: id, rhs_map: to("b") },
        ];
        let err = RuleSystem::new(base, rules, inclusions).unwrap_err();
        assert_eq!(err, RuleError::NotFunctorial { first: "p".into(), second: "q".into() });
    }

    #[test]
    fn empty_lhs_is_rejected() {
        let base = Arc::new(BaseCategory::graph());
        let empty = Arc::new(Presheaf::empty(base.clone()));
        let err =
            RuleSystem::new(base, vec![Rule { id: "z".into(), lhs: empty.clone(), rhs: empty }], vec![]).unwrap_err();
        assert_eq!(err, RuleError::EmptyLhs("z".into()));
    }
}
