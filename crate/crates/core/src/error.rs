use thiserror::Error;

/// Errors produced by the cooling library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("normalized frequency of mode {mode} is imaginary (omega_tilde^2 + 2 mu / m = {radicand:e})")]
    ImaginaryFrequency { mode: usize, radicand: f64 },

    #[error("zero-temperature bath: occupation 0 has no finite temperature")]
    ZeroTemperatureBath,

    #[error("self-consistent detuning did not converge after {iterations} iterations (last change {last_change:e})")]
    DetuningNotConverged { iterations: usize, last_change: f64 },

    #[error("resonance singularity for mode {mode} at omega = {omega}")]
    ResonanceSingularity { mode: usize, omega: f64 },

    #[error("degenerate denominator for mode {mode} at omega = {omega} (value {value:e})")]
    DegenerateDenominator { mode: usize, omega: f64, value: f64 },

    #[error("imaginary shifted frequency for mode {mode} at omega = {omega} (radicand {radicand:e})")]
    ImaginaryShiftedFrequency { mode: usize, omega: f64, radicand: f64 },

    #[error("closed-form spectra require zero effective detuning, got {detuning}")]
    NonzeroDetuning { detuning: f64 },

    #[error("singular response system at omega = {omega} (condition estimate {condition:e})")]
    SingularSystem { omega: f64, condition: f64 },

    #[error("no optomechanical coupling: G1 = G2 = 0")]
    NoCoupling,

    #[error("nonconvergent tail: integration cutoff reached {omega_max:e} with relative tail {tail:e}")]
    NonconvergentTail { omega_max: f64, tail: f64 },

    #[error("unstable system: {0}")]
    Unstable(String),

    #[error("negative occupation for mode {mode}: {value:e}")]
    NegativeOccupation { mode: usize, value: f64 },

    #[error("bare parameters required for bare-quadrature occupations")]
    BareParamsRequired,

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("unknown sweep parameter `{0}`")]
    UnknownParameter(String),

    #[error("invalid override: {0}")]
    InvalidOverride(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
