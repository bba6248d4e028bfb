use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("energy must be strictly positive, got {0}")]
    NonPositiveEnergy(f64),
    #[error("invalid unit system: hbar = {hbar}, mass = {mass} (both must be positive and finite)")]
    InvalidUnits { hbar: f64, mass: f64 },
    #[error("segment {index} has non-positive width [{x_left}, {x_right}]")]
    DegenerateSegment { index: usize, x_left: f64, x_right: f64 },
    #[error("segments overlap near x = {at}")]
    OverlappingSegments { at: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid region [{x1}, {x2}]")]
    InvalidRegion { x1: f64, x2: f64 },
    #[error("{channel} time is undefined: {reason}")]
    UndefinedChannelTime { channel: &'static str, reason: UndefinedReason },
    #[error("phase difference undefined: reflection amplitude vanishes")]
    UndefinedPhase,
    #[error("opaque-limit asymptotics require E < V0 (E = {energy}, V0 = {barrier})")]
    NotTunneling { energy: f64, barrier: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("post-selected norm vanishes ({0:e})")]
    PostSelectedNormZero(f64),
    #[error("grid resolution check failed: {0}")]
    GridResolution(String),
    #[error("adaptive quadrature did not converge within {0} subdivisions")]
    QuadratureNoConvergence(usize),
    #[error("derivative error estimate {estimate:e} exceeds bound {bound:e}")]
    DerivativeInaccurate { estimate: f64, bound: f64 },
    #[error("probe region must lie strictly beyond the barrier")]
    ProbeNotBeyondBarrier,
    #[error("malformed profile JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Machine-readable cause for a channel time that has no value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UndefinedReason {
    /// `r = 0`: transmission resonance or no barrier at all.
    ReflectionVanishes,
    /// `t = 0`.
    TransmissionVanishes,
}

impl UndefinedReason {
    pub fn code(self) -> &'static str {
        match self {
            UndefinedReason::ReflectionVanishes => "reflection_vanishes",
            UndefinedReason::TransmissionVanishes => "transmission_vanishes",
        }
    }
}

impl std::fmt::Display for UndefinedReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}
