//! # mgl
//!
//! Spectra of measure-geometric Laplacians on the unit interval.
//!
//! For a measure `η = ν + Σ αᵢ δ_{zᵢ}` — a continuous part ν with strictly
//! increasing distribution function plus finitely many weighted point masses
//! on (0, 1] — the operator Δ_η = −∇*_η ∘ ∇_η is self-adjoint and
//! non-positive with compact resolvent, and its eigenfunctions are piecewise
//! sines `aⱼ sin(b F_ν(x) + γⱼ)` with eigenvalue λ = −b². This crate
//! computes those spectra three ways and cross-checks them against each
//! other:
//!
//! * closed forms for one atom and for two equally weighted atoms at half
//!   spacing ([`closed_form`]),
//! * a transfer-matrix discriminant for any number of atoms
//!   ([`monodromy`]),
//! * a discrete cycle-operator approximation eigensolved from scratch
//!   ([`oracle`]).
//!
//! ## Quick start
//!
//! ```
//! use mgl::measure::MeasureSpec;
//! use mgl::monodromy::{find_spectrum, ScanOptions};
//!
//! let spec = MeasureSpec::lebesgue_with_atoms(&[(1.0, 1.0 / std::f64::consts::PI)])?;
//! let spectrum = find_spectrum(&spec, 12.0, &ScanOptions::default())?;
//! // λ = 0 plus the first nonzero eigenvalues near −16.9 and −29.3.
//! assert!(spectrum.roots.iter().any(|r| (r.lambda + 29.3337).abs() < 1e-3));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! The `mgl` binary exposes the same functionality as subcommands
//! (`spectrum`, `oracle`, `count`, `plot`, `check`); see the book under
//! `book/` for a guided tour of the underlying calculus.

pub mod analysis;
pub mod calculus;
pub mod closed_form;
pub mod eigen;
pub mod harmonic;
pub mod measure;
pub mod monodromy;
pub mod oracle;
pub mod plot;
pub mod roots;

pub use calculus::{PiecewiseEval, PiecewiseSine};
pub use closed_form::EigenPair;
pub use measure::{CanonicalForm, ContinuousPart, MeasureSpec};
pub use monodromy::{SpectrumResult, Transfer2x2};
