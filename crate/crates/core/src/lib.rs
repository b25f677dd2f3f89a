//! Averaged single-qubit gate error under two competing decoherence channels:
//! Markovian damping that accumulates linearly with gate duration, and
//! phonon dressing that only acts while the pulse is on and grows as the gate
//! gets faster. The crate evaluates both, and finds the gate duration that
//! minimizes their sum.
//!
//! Units throughout: ps, rad/ps, meV, nm, K (see [`quantities`]).

pub mod cli;
pub mod config;
pub mod error;
pub mod gate_spectrum;
pub mod gauss_legendre;
pub mod optimize;
pub mod quadrature;
pub mod quantities;
pub mod reservoir;
pub mod tradeoff;

pub use error::{Error, Result};
pub use gate_spectrum::GateSpectrum;
pub use quantities::{
    DotGeometry, EnvelopePath, MarkovianChannel, MaterialParams, PulseFamily, PulseSpec,
};
pub use reservoir::ReservoirSpectrum;
pub use tradeoff::{ErrorBudget, OptimumMethod, TradeoffResult};
