//! JSON encodings of base categories, presheaves, morphisms and rule systems.
//!
//! Maps are `BTreeMap`s, so serialization has a canonical key order and is
//! byte-stable across runs.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::base::BaseCategory;
use crate::error::{BaseError, MorphismError, PresheafError, RuleError};
use crate::morphism::PresheafMorphism;
use crate::presheaf::{validate_presheaf, Presheaf, RawPresheaf};
use crate::rules::{Rule, RuleInclusion, RuleSystem};

/// `object -> (source id -> target id)`.
pub type Components = BTreeMap<String, BTreeMap<String, String>>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorJson {
    pub name: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BaseJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<GeneratorJson>,
    #[serde(default)]
    pub relations: Vec<(Vec<String>, Vec<String>)>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PresheafJson {
    pub elements: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MorphismJson {
    pub components: Components,
}

/// Inclusion maps are written as bare components; a `{"components": ..}`
/// wrapper is accepted on input.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ComponentsJson {
    Wrapped { components: Components },
    Bare(Components),
}

impl ComponentsJson {
    fn into_components(self) -> Components {
        match self {
            ComponentsJson::Wrapped { components } | ComponentsJson::Bare(components) => components,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RuleJson {
    pub id: String,
    pub lhs: PresheafJson,
    pub rhs: PresheafJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InclusionJson {
    pub id: String,
    pub src: String,
    pub dst: String,
    pub lhs_map: ComponentsJson,
    pub rhs_map: ComponentsJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RuleSystemJson {
    pub base: BaseJson,
    pub rules: Vec<RuleJson>,
    #[serde(default)]
    pub inclusions: Vec<InclusionJson>,
}

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("base category: {0}")]
    Base(#[from] BaseError),
    #[error("presheaf: {0}")]
    Presheaf(#[from] PresheafError),
    #[error("morphism: {0}")]
    Morphism(#[from] MorphismError),
    #[error("rule system: {0}")]
    Rules(#[from] RuleError),
}

impl JsonError {
    /// Well-formed data that breaks a semantic invariant, as opposed to
    /// unreadable or dangling data.
    pub fn is_validation(&self) -> bool {
        match self {
            JsonError::Syntax(_) | JsonError::Base(_) => false,
            JsonError::Presheaf(e) => matches!(e, PresheafError::Violation(_)),
            JsonError::Morphism(e) => !matches!(e, MorphismError::UnknownObject(_)),
            JsonError::Rules(e) => match e {
                RuleError::UnknownRule(_) => false,
                RuleError::Presheaf { source, .. } => matches!(source, PresheafError::Violation(_)),
                RuleError::Morphism { source, .. } => !matches!(source, MorphismError::UnknownObject(_)),
                _ => true,
            },
        }
    }
}

impl From<&BaseCategory> for BaseJson {
    fn from(b: &BaseCategory) -> Self {
        BaseJson {
            objects: b.objects().to_vec(),
            morphisms: b
                .generators()
                .iter()
                .map(|g| GeneratorJson {
                    name: g.name.clone(),
                    src: b.object_name(g.src).into(),
                    dst: b.object_name(g.dst).into(),
                })
                .collect(),
            relations: b.relations().iter().map(|(l, r)| (names(b, l), names(b, r))).collect(),
        }
    }
}

fn names(b: &BaseCategory, path: &[usize]) -> Vec<String> {
    path.iter().map(|&g| b.generators()[g].name.clone()).collect()
}

impl TryFrom<BaseJson> for BaseCategory {
    type Error = BaseError;

    fn try_from(j: BaseJson) -> Result<Self, BaseError> {
        BaseCategory::new(j.objects, j.morphisms.into_iter().map(|g| (g.name, g.src, g.dst)).collect(), j.relations)
    }
}

impl From<&Presheaf> for PresheafJson {
    fn from(p: &Presheaf) -> Self {
        let RawPresheaf { elements, maps } = p.to_raw();
        PresheafJson { elements, maps }
    }
}

impl PresheafJson {
    pub fn validate(self, base: &Arc<BaseCategory>) -> Result<Presheaf, PresheafError> {
        validate_presheaf(base, &RawPresheaf { elements: self.elements, maps: self.maps })
    }
}

impl From<&RuleSystem> for RuleSystemJson {
    fn from(rs: &RuleSystem) -> Self {
        RuleSystemJson {
            base: BaseJson::from(rs.base().as_ref()),
            rules: rs
                .rules()
                .iter()
                .map(|r| RuleJson { id: r.id.clone(), lhs: r.lhs.as_ref().into(), rhs: r.rhs.as_ref().into() })
                .collect(),
            inclusions: rs
                .inclusions()
                .iter()
                .map(|i| InclusionJson {
                    id: i.id.clone(),
                    src: rs.rule(i.src).id.clone(),
                    dst: rs.rule(i.dst).id.clone(),
                    lhs_map: ComponentsJson::Bare(i.lhs_map.named_components()),
                    rhs_map: ComponentsJson::Bare(i.rhs_map.named_components()),
                })
                .collect(),
        }
    }
}

impl RuleSystemJson {
    pub fn build(self) -> Result<RuleSystem, JsonError> {
        let base = Arc::new(BaseCategory::try_from(self.base)?);
        let mut rules = Vec::with_capacity(self.rules.len());
        for r in self.rules {
            let wrap = |source| RuleError::Presheaf { rule: r.id.clone(), source };
            let lhs = Arc::new(r.lhs.validate(&base).map_err(wrap)?);
            let rhs = Arc::new(r.rhs.validate(&base).map_err(wrap)?);
            rules.push(Rule { id: r.id, lhs, rhs });
        }
        let index = |id: &str| rules.iter().position(|r| r.id == id).ok_or_else(|| RuleError::UnknownRule(id.into()));
        let mut inclusions = Vec::with_capacity(self.inclusions.len());
        for i in self.inclusions {
            let (src, dst) = (index(&i.src)?, index(&i.dst)?);
            let wrap = |source| RuleError::Morphism { inclusion: i.id.clone(), source };
            let lhs_map = PresheafMorphism::from_name_map(
                rules[src].lhs.clone(),
                rules[dst].lhs.clone(),
                &i.lhs_map.into_components(),
            )
            .map_err(wrap)?;
            let rhs_map = PresheafMorphism::from_name_map(
                rules[src].rhs.clone(),
                rules[dst].rhs.clone(),
                &i.rhs_map.into_components(),
            )
            .map_err(wrap)?;
            inclusions.push(RuleInclusion { id: i.id, src, dst, lhs_map, rhs_map });
        }
        Ok(RuleSystem::new(base, rules, inclusions)?)
    }
}

pub fn base_from_str(s: &str) -> Result<BaseCategory, JsonError> {
    Ok(BaseCategory::try_from(serde_json::from_str::<BaseJson>(s)?)?)
}

pub fn base_to_string(b: &BaseCategory) -> String {
    pretty(&BaseJson::from(b))
}

pub fn presheaf_from_str(base: &Arc<BaseCategory>, s: &str) -> Result<Presheaf, JsonError> {
    Ok(serde_json::from_str::<PresheafJson>(s)?.validate(base)?)
}

pub fn presheaf_to_string(p: &Presheaf) -> String {
    pretty(&PresheafJson::from(p))
}

pub fn morphism_from_str(
    source: &Arc<Presheaf>,
    target: &Arc<Presheaf>,
    s: &str,
) -> Result<PresheafMorphism, JsonError> {
    let j: MorphismJson = serde_json::from_str(s)?;
    Ok(PresheafMorphism::from_name_map(source.clone(), target.clone(), &j.components)?)
}

pub fn morphism_to_string(f: &PresheafMorphism) -> String {
    pretty(&MorphismJson { components: f.named_components() })
}

pub fn rule_system_from_str(s: &str) -> Result<RuleSystem, JsonError> {
    serde_json::from_str::<RuleSystemJson>(s)?.build()
}

pub fn rule_system_to_string(rs: &RuleSystem) -> String {
    pretty(&RuleSystemJson::from(rs))
}

/// Two-space indented JSON with a trailing newline.
fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}
