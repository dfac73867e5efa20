use thiserror::Error;

/// Crate-wide error type. Domain errors carry enough context to name the
/// violated limit or the offending input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} deg outside admissible range [{lo}, {hi}] deg")]
    AngleOutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("contact violation: |{which}| = {value} deg exceeds the geometric limit {limit} deg")]
    ContactViolation {
        which: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("motor {which} saturated: required {required} deg exceeds the +/-90 deg servo range")]
    MotorSaturation { which: &'static str, required: f64 },

    #[error("pressure {value} MPa outside [0, {max}] MPa")]
    PressureOutOfRange { value: f64, max: f64 },

    #[error("stretch must be positive, got {0}")]
    NonPositiveStretch(f64),

    #[error("material fit failed: {0}")]
    FitFailure(String),

    #[error("no feasible wall thickness under strain cap {cap}; (thickness, peak strain) = {strains:?}")]
    NoFeasibleThickness { strains: Vec<(f64, f64)>, cap: f64 },

    #[error("target ({x}, {y}, {z}) mm lies beyond the maximum reach {reach} mm")]
    Unreachable { x: f64, y: f64, z: f64, reach: f64 },

    #[error("object size {size} mm exceeds the maximum enhanced opening {max_opening} mm")]
    InfeasibleGrip { size: f64, max_opening: f64 },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
