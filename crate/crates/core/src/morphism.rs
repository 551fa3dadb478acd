//! Natural transformations between finite presheaves.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::MorphismError;
use crate::presheaf::Presheaf;

/// A morphism of presheaves, stored as per-object index maps.
#[derive(Clone, PartialEq, Eq)]
pub struct PresheafMorphism {
    source: Arc<Presheaf>,
    target: Arc<Presheaf>,
    components: Vec<Vec<usize>>,
}

impl fmt::Debug for PresheafMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.named_components()).finish()
    }
}

impl PresheafMorphism {
    /// Checks totality, range and naturality.
    pub fn new(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        components: Vec<Vec<usize>>,
    ) -> Result<Self, MorphismError> {
        if source.base() != target.base() {
            return Err(MorphismError::BaseMismatch);
        }
        let base = source.base().clone();
        if components.len() != base.objects().len() {
            return Err(MorphismError::Arity {
                object: "*".into(),
                found: components.len(),
                expected: base.objects().len(),
            });
        }
        for (o, comp) in components.iter().enumerate() {
            if comp.len() != source.size(o) {
                return Err(MorphismError::Arity {
                    object: base.object_name(o).into(),
                    found: comp.len(),
                    expected: source.size(o),
                });
            }
            if let Some(x) = comp.iter().position(|&y| y >= target.size(o)) {
                return Err(MorphismError::OutOfRange {
                    object: base.object_name(o).into(),
                    element: source.carrier(o)[x].clone(),
                });
            }
        }
        let f = PresheafMorphism { source, target, components };
        f.check_naturality()?;
        Ok(f)
    }

    /// Builds a morphism from name pairs `(object, source element, target element)`.
    pub fn from_names<'a>(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    ) -> Result<Self, MorphismError> {
        let base = source.base().clone();
        let mut comps: Vec<Vec<Option<usize>>> =
            (0..base.objects().len()).map(|o| vec![None; source.size(o)]).collect();
        for (obj, x, y) in pairs {
            let o = base.object(obj).ok_or_else(|| MorphismError::UnknownObject(obj.into()))?;
            let xi = source
                .index_of(o, x)
                .ok_or_else(|| MorphismError::NonTotal { object: obj.into(), element: x.into() })?;
            let yi = target
                .index_of(o, y)
                .ok_or_else(|| MorphismError::OutOfRange { object: obj.into(), element: x.into() })?;
            comps[o][xi] = Some(yi);
        }
        let mut components = Vec::with_capacity(comps.len());
        for (o, comp) in comps.into_iter().enumerate() {
            let mut c = Vec::with_capacity(comp.len());
            for (x, y) in comp.into_iter().enumerate() {
                c.push(y.ok_or_else(|| MorphismError::NonTotal {
                    object: base.object_name(o).into(),
                    element: source.carrier(o)[x].clone(),
                })?);
            }
            components.push(c);
        }
        Self::new(source, target, components)
    }

    /// Builds a morphism from nested name maps `object -> (source element -> target element)`.
    pub fn from_name_map(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        map: &BTreeMap<String, BTreeMap<String, String>>,
    ) -> Result<Self, MorphismError> {
        let base = source.base().clone();
        if let Some(o) = map.keys().find(|o| base.object(o).is_none()) {
            return Err(MorphismError::UnknownObject(o.clone()));
        }
        let pairs = map.iter().flat_map(|(o, m)| m.iter().map(move |(x, y)| (o.as_str(), x.as_str(), y.as_str())));
        Self::from_names(source, target, pairs)
    }

    pub(crate) fn from_parts(source: Arc<Presheaf>, target: Arc<Presheaf>, components: Vec<Vec<usize>>) -> Self {
        let f = PresheafMorphism { source, target, components };
        debug_assert!(f.check_naturality().is_ok(), "unnatural morphism {f:?}");
        f
    }

    pub fn identity(p: Arc<Presheaf>) -> Self {
        let components = (0..p.base().objects().len()).map(|o| (0..p.size(o)).collect()).collect();
        PresheafMorphism { source: p.clone(), target: p, components }
    }

    fn check_naturality(&self) -> Result<(), MorphismError> {
        let base = self.source.base();
        for (g, gen) in base.generators().iter().enumerate() {
            for y in 0..self.source.size(gen.dst) {
                let down_then_map = self.components[gen.src][self.source.act(g, y)];
                let map_then_down = self.target.act(g, self.components[gen.dst][y]);
                if down_then_map != map_then_down {
                    return Err(MorphismError::NotNatural {
                        generator: gen.name.clone(),
                        element: self.source.carrier(gen.dst)[y].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<Presheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presheaf> {
        &self.target
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn apply(&self, o: usize, x: usize) -> usize {
        self.components[o][x]
    }

    /// True iff every component is injective.
    pub fn is_mono(&self) -> bool {
        self.components.iter().enumerate().all(|(o, comp)| {
            let mut seen = vec![false; self.target.size(o)];
            comp.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    /// True iff every component is a bijection.
    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.components.iter().enumerate().all(|(o, c)| c.len() == self.target.size(o))
    }

    /// The inverse of an isomorphism.
    pub fn inverse(&self) -> Option<PresheafMorphism> {
        if !self.is_iso() {
            return None;
        }
        let components = self
            .components
            .iter()
            .map(|c| {
                let mut inv = vec![0; c.len()];
                for (x, &y) in c.iter().enumerate() {
                    inv[y] = x;
                }
                inv
            })
            .collect();
        Some(PresheafMorphism { source: self.target.clone(), target: self.source.clone(), components })
    }

    /// Same components, read against a different but index-compatible target
    /// (for instance a prefixed copy of the original target).
    pub(crate) fn retarget(&self, target: Arc<Presheaf>) -> PresheafMorphism {
        debug_assert_eq!(target.counts(), self.target.counts());
        PresheafMorphism { source: self.source.clone(), target, components: self.components.clone() }
    }

    /// `object -> (source id -> target id)` with objects in name order.
    pub fn named_components(&self) -> BTreeMap<String, BTreeMap<String, String>> {
        let base = self.source.base();
        (0..base.objects().len())
            .map(|o| {
                let m = self.components[o]
                    .iter()
                    .enumerate()
                    .map(|(x, &y)| (self.source.carrier(o)[x].clone(), self.target.carrier(o)[y].clone()))
                    .collect();
                (base.object_name(o).to_string(), m)
            })
            .collect()
    }

    /// Canonical order: components compared object by object in object-name order.
    /// Since carriers are sorted, this is the lexicographic order on serialized components.
    pub fn canonical_cmp(&self, other: &PresheafMorphism) -> Ordering {
        for &o in self.source.base().objects_by_name() {
            match self.components[o].cmp(&other.components[o]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// `compose(f, g)` is `g ∘ f`: first `f`, then `g`.
pub fn compose(f: &PresheafMorphism, g: &PresheafMorphism) -> Result<PresheafMorphism, MorphismError> {
    if f.target != g.source {
        return Err(MorphismError::Mismatch);
    }
    let components =
        f.components.iter().zip(&g.components).map(|(fc, gc)| fc.iter().map(|&y| gc[y]).collect()).collect();
    Ok(PresheafMorphism { source: f.source.clone(), target: g.target.clone(), components })
}

/// Pointwise equality of two parallel morphisms.
pub fn morphism_equal(f: &PresheafMorphism, g: &PresheafMorphism) -> bool {
    f == g
}

pub fn is_mono(f: &PresheafMorphism) -> bool {
    f.is_mono()
}
