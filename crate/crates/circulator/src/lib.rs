//! Simulation of a four-port fiber-optical circulator operated by a single
//! atom that couples chirally to the whispering-gallery modes of a bottle
//! microresonator.
//!
//! The resonator supports degenerate counter-propagating modes whose
//! evanescent fields are nearly circularly polarized with opposite handedness.
//! An atom spin-polarized in a stretched Zeeman state therefore couples
//! strongly to one propagation direction and weakly to the other, which makes
//! the fiber-resonator-fiber system nonreciprocal: light entering the four
//! fiber ports is routed cyclically, port i to port i+1, and preparing the
//! opposite Zeeman state reverses the cycle.
//!
//! The crate provides
//!
//! - dense operator algebra on truncated atom ⊗ Fock spaces ([`hilbert`]),
//! - Lindblad master-equation machinery: Liouvillian construction,
//!   steady states by direct linear solve, and adaptive time evolution
//!   ([`lindblad`]),
//! - the circulator models themselves, mapping physical rates onto
//!   Hamiltonians, collapse operators and port geometry ([`model`]),
//! - input-output observables: 4x4 transmission matrices, operation
//!   fidelity, photon survival and isolations ([`observables`]), together
//!   with the closed-form low-saturation expressions ([`analytic`]),
//! - second-order output correlations g2(tau) via the quantum regression
//!   theorem ([`correlations`]),
//! - coupling-rate scans under the critical-coupling constraint
//!   ([`scan`]), and
//! - file formats and unit conversion for the CLI ([`config`], [`output`]).
//!
//! Rates and detunings are handled internally in angular units (rad/us).
//! All external interfaces accept plain MHz (omega/2pi) as quoted in the
//! literature and convert on ingestion; see [`config`].

// Force linkage of the system BLAS/LAPACK that ndarray-linalg binds to.
extern crate openblas_src as _;

pub mod analytic;
pub mod config;
pub mod correlations;
pub mod hilbert;
pub mod lindblad;
pub mod model;
pub mod observables;
pub mod ode;
pub mod output;
pub mod scan;

mod error;

pub use error::{Error, Result};

/// Numerical tolerances used for state validation and the steady-state
/// solver. All values can be overridden; [`Tolerances::default`] matches the
/// module contracts.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Max elementwise deviation from Hermiticity accepted for a density
    /// matrix.
    pub hermiticity: f64,
    /// Max deviation of the trace from one.
    pub trace: f64,
    /// Most negative eigenvalue accepted for a density matrix.
    pub positivity: f64,
    /// Max elementwise residual of L[rho_ss] accepted by the steady-state
    /// solver.
    pub steady_residual: f64,
    /// Relative tolerance of the adaptive time integrator.
    pub evolve_rtol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            trace: 1e-10,
            positivity: 1e-8,
            steady_residual: 1e-9,
            evolve_rtol: 1e-8,
        }
    }
}

/// Conversion factor from MHz (omega/2pi, as quoted in the literature) to the
/// internal angular units of rad/us.
pub const MHZ_TO_ANGULAR: f64 = 2.0 * std::f64::consts::PI;
