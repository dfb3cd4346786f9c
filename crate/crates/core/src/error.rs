use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),

    #[error("invalid multiplicity profile: {0}")]
    InvalidMultiplicity(String),

    #[error("not a simple root of this system")]
    NotSimpleRoot,

    #[error("Weyl group exceeds the element cap of {cap}")]
    WeylCapExceeded { cap: usize },

    #[error("singular Gram matrix; the root system data is corrupted")]
    SingularGram,

    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("element fails group validation ({relation}): residual {residual:e} > tolerance {tolerance:e}")]
    Validation {
        relation: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("matrix is singular at working precision")]
    Singular,

    #[error("eigenvalue computation failed to converge")]
    Eigen,

    #[error("vector lies outside the closed positive chamber (min simple-root value {min_value:e})")]
    OutsideChamber { min_value: f64 },

    #[error("invalid isotropy specification: {0}")]
    InvalidIsotropy(String),

    #[error("degenerate arrangement: {0}")]
    DegenerateArrangement(String),

    #[error("arrangement has walls of codimension >= 2; sign-vector chambers are undefined")]
    NotHyperplanes,

    #[error("opposition involution sends component {component} onto a wall")]
    IotaOnWall { component: usize },

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("word ball exceeds the element cap of {cap}")]
    BallCapExceeded { cap: usize },

    #[error("dedup ambiguity: new product is within tolerance of stored elements {first} and {second}")]
    DedupAmbiguity { first: usize, second: usize },

    #[error("new product is {distance:e} from stored element {stored}: too close to tell apart, too far to merge")]
    NearCollision { stored: usize, distance: f64 },

    #[error("generating set is not closed under inverses: {0}")]
    NotInverseClosed(String),

    #[error("root systems do not match: {0}")]
    SystemMismatch(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("point lies outside every supplied chamber: {0}")]
    OutsideChambers(String),

    #[error("unknown group family: {0}")]
    UnknownFamily(String),

    #[error("negative required dimension {0}; the case is misconfigured")]
    NegativeRequiredDimension(i64),

    #[error("bound rule does not apply: {0}")]
    RuleMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}
