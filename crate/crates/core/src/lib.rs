//! Photon-added two-variable coherent states attached to Landau levels.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: Laguerre polynomials, log-factorials, incomplete gamma of
//!   non-positive order and the Meijer-G density of the completeness measure.
//! - [`quad`]: Gauss rules used by the wavefunction and measure integrals.
//! - [`fock`]: truncated two-mode Fock space (storage, ladders, moments).
//! - [`states`]: constructors for displaced number states, two-variable
//!   coherent states and their photon-added excitations, plus the scalar
//!   closed forms attached to them.
//! - [`wavefun`]: polar-coordinate wavefunctions.
//! - [`diagnostics`]: photon statistics, Mandel Q, quadrature covariances.
//! - [`measure`]: the resolution-of-identity density and its checks.
//! - [`linalg`] and [`cavity`]: propagators and the cavity generation schemes.
//! - [`verify`]: the runtime self-check suite used by the CLI.
//!
//! Every closed form has a brute-force counterpart on the Fock grid so the two
//! can be compared directly.

pub mod cavity;
pub mod diagnostics;
pub mod error;
pub mod fock;
pub mod format;
pub mod linalg;
pub mod measure;
pub mod quad;
pub mod specfun;
pub mod states;
pub mod verify;
pub mod wavefun;

pub use num_complex::Complex64 as C64;

pub use cavity::{AtomFieldState, CavityParams};
pub use diagnostics::{CovarianceReport, ExpectationTable, SeriesTable};
pub use error::{Error, Result};
pub use fock::{Cutoffs, Ladder, LevelIndex, Mode, ModeOccupation, PhysicalScales, TwoModeState};
pub use measure::MeasureDensity;
pub use states::StateLabel;
pub use wavefun::PolarPoint;
