use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseError {
    #[error("duplicate object name `{0}`")]
    DuplicateObject(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("relation path is empty")]
    EmptyPath,
    #[error("path `{0}` is not composable")]
    NotComposable(String),
    #[error("relation `{0}` = `{1}` has mismatched endpoints")]
    RelationEndpoints(String, String),
    #[error("generator graph has a directed cycle")]
    Cyclic,
}

/// Failure to build a presheaf from raw data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresheafError {
    /// The data names objects, generators or elements that do not exist.
    #[error("structural error: {0}")]
    Structural(String),
    /// The data is well-formed but breaks a presheaf invariant.
    #[error("invariant violation: {0}")]
    Violation(Violation),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("map `{generator}` is undefined on `{element}`")]
    NonTotal { generator: String, element: String },
    #[error("map `{generator}` sends `{element}` to `{image}`, which is not in the carrier of `{object}`")]
    IllLanding { generator: String, element: String, image: String, object: String },
    #[error("relation `{lhs}` = `{rhs}` fails on `{element}`")]
    Relation { lhs: String, rhs: String, element: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("presheaves live over different base categories")]
    BaseMismatch,
    #[error("component `{object}` has {found} entries, expected {expected}")]
    Arity { object: String, found: usize, expected: usize },
    #[error("component `{object}` is undefined on `{element}`")]
    NonTotal { object: String, element: String },
    #[error("component `{object}` sends `{element}` outside the target")]
    OutOfRange { object: String, element: String },
    #[error("naturality fails for generator `{generator}` at `{element}`")]
    NotNatural { generator: String, element: String },
    #[error("cannot compose: target of the first morphism is not the source of the second")]
    Mismatch,
    #[error("unknown object `{0}` in components")]
    UnknownObject(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("duplicate rule id `{0}`")]
    DuplicateRule(String),
    #[error("duplicate inclusion id `{0}`")]
    DuplicateInclusion(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("rule `{0}` has an empty left-hand side")]
    EmptyLhs(String),
    #[error("rule `{rule}`: {source}")]
    Presheaf {
        rule: String,
        #[source]
        source: PresheafError,
    },
    #[error("inclusion `{inclusion}`: {source}")]
    Morphism {
        inclusion: String,
        #[source]
        source: MorphismError,
    },
    #[error("inclusion `{0}` has a non-injective left-hand map")]
    LhsNotMono(String),
    #[error("composites `{first}` and `{second}` agree on left-hand sides but differ on right-hand sides")]
    NotFunctorial { first: String, second: String },
}
