//! Closed-form susceptibilities, cooling rates and noise spectra.

mod ladder;
mod spectra;

pub use ladder::{ladder, CoefficientLadder};
pub use spectra::{
    decompose, effective_damping, net_cooling_rate, noise_spectra, spring_shift, susceptibility,
    AnalyticModel, ModeSpectrum, NoiseChannels, SpectrumDecomposition,
};
