use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty coefficient list")]
    EmptyPolynomial,
    #[error("defining polynomial is not monic (leading coefficient {0})")]
    NonMonic(i64),
    #[error("defining polynomial must have degree >= 1")]
    ConstantPolynomial,
    #[error("degree {0} exceeds the supported maximum of {max}", max = crate::numberfield::MAX_DEGREE)]
    DegreeTooLarge(usize),
    #[error("polynomial discriminant is zero (repeated root)")]
    ZeroDiscriminant,
    #[error("polynomial has the rational root {0}")]
    RationalRootFound(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Dedekind criterion fails at p = {0}; the defining order is not p-maximal")]
    IrregularPrime(u64),
    #[error("ideals belong to different fields")]
    FieldMismatch,
    #[error("arithmetic tables have different domains")]
    DomainMismatch,
    #[error("Dirichlet inverse needs F(unit) = 1")]
    NonUnitLeadingValue,
    #[error("unknown test function id '{0}'")]
    UnknownFunctionId(String),
    #[error("norm bound {needed} exceeds the sieve capacity {capacity}")]
    CapacityExceeded { needed: f64, capacity: u64 },
    #[error("ideal norm overflowed 64 bits")]
    NormOverflow,
    #[error("set member of norm {norm} exceeds X = {x}")]
    MemberNormExceedsX { norm: u64, x: u64 },
    #[error("no window pair found in [{n}, {n}+1); counts per grid point: {profile:?}")]
    NoPairFound { n: u64, profile: Vec<usize> },
    #[error("selection failed on window [{n}, {n}+1)")]
    SelectionFailed { n: u64 },
    #[error("construction infeasible: {0}")]
    ConstructionInfeasible(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cache file: {0}")]
    Cache(String),
}
