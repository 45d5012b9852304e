use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("jet order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("jet order {0} exceeds the supported maximum of 6")]
    OrderTooLarge(usize),
    #[error("{func} is undefined at base value {value:e}")]
    Domain { func: &'static str, value: f64 },
    #[error("needs jet order at least {needed}, got {got}")]
    InsufficientOrder { needed: usize, got: usize },

    #[error("unknown surface `{0}`")]
    UnknownSurface(String),
    #[error("invalid parameters for {surface}: {reason}")]
    InvalidParams { surface: String, reason: String },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{name}` at byte {pos}")]
    UnboundVariable { name: String, pos: usize },
    #[error("arity mismatch: expected {expected} components, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("surface passes through inversion center {center:?} at parameter {point:?}")]
    InversionCollision { point: [f64; 2], center: [f64; 3] },
    #[error("radius {0:e} outside the punctured domain")]
    RadiusOutOfDomain(f64),
    #[error("chart has no puncture with index {0}")]
    NoSuchPuncture(usize),

    #[error("degenerate metric at {point:?} (det g = {det:e})")]
    DegenerateMetric { point: [f64; 2], det: f64 },
    #[error("point {point:?} lies within r_min of a puncture (r = {r:e})")]
    PunctureProximity { point: [f64; 2], r: f64 },
    #[error("test-field support touches the domain boundary")]
    SupportTouchesBoundary,
    #[error("non-integrable blow-up near {point:?}")]
    Blowup { point: [f64; 2] },
    #[error("annulus at rho = {0:e} is out of range")]
    AnnulusOutOfRange(f64),
    #[error("inner radius {t} must be smaller than outer radius {big_t}")]
    RadiusOrder { t: f64, big_t: f64 },
    #[error("grid too coarse: boundary cells cover {fraction:.3} of the ball area")]
    GridTooCoarse { fraction: f64 },

    #[error("conformal map is not invertible: {0}")]
    NonInvertible(String),
    #[error("stereographic projection undefined at the north pole")]
    NorthPole,
    #[error("degenerate chart at {point:?}")]
    DegenerateChart { point: [f64; 2] },
    #[error("empty sample region")]
    EmptyRegion,

    #[error("chart is not conformal at {point:?} (anisotropy {anisotropy:e})")]
    NonConformal { point: [f64; 2], anisotropy: f64 },
    #[error("identically-zero quartic, pole order vacuous")]
    DegenerateFit,

    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
