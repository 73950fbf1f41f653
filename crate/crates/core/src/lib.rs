//! Level counting for a quantum particle in rigid boxes.
//!
//! Energies are in reduced units `hbar^2 pi^2 / 2M = 1` with unit box
//! volume unless a function says otherwise. The pipeline is
//! [`spectra`] (complete spectra up to a cutoff) into [`staircase`]
//! (degeneracies, `N(e)`, windowed DOS) into [`fitlab`] (log-log power-law
//! fits), with [`manybody`] building N-boson spectra on top of any
//! single-particle spectrum and [`analytic`] supplying the closed forms the
//! numbers are compared against.

pub mod analytic;
pub mod csvio;
pub mod error;
pub mod fitlab;
pub mod manybody;
pub mod spectra;
pub mod specfun;
pub mod staircase;

pub use analytic::{AnalyticDos, NBosonClosedForm};
pub use error::{Error, Result};
pub use fitlab::{EnsembleStats, FitOptions, PowerLawFit, ScalingOptions};
pub use manybody::{build_nboson_spectrum, BosonConfig};
pub use spectra::{BoxGeometry, Level, Spectrum};
pub use specfun::{BesselKind, BesselZero, HalfInteger};
pub use staircase::{DosSeries, Staircase};
