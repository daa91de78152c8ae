//! Atom-wall interaction potentials for a ground-state hydrogen atom near a
//! perfect metallic wall, in thermal equilibrium with the photon field.
//!
//! Everything is expressed in Hartree atomic units: `a_B = e = hbar = m = 1`,
//! `c = 1/alpha_fs`. The central object is the response kernel `B(k)` built
//! from the hydrogen dipole spectrum; the net potential `Phi(X)` is its
//! oscillatory Fourier inversion. The crate reproduces the van der Waals,
//! Casimir-Polder and classical Lifshitz tails, the screening corrections to
//! them, and verifies the generalized Feynman-Kac machinery by exact Gaussian
//! reduction and Monte Carlo.
//!
//! Data-parallel loops (curve evaluation, path ensembles) run on rayon when
//! the default `parallel` feature is enabled and fall back to sequential
//! iteration otherwise.

pub mod fk;
pub mod hydrogen;
pub mod kernel;
pub mod par;
pub mod potential;
pub mod propagator;
pub mod quad;
pub mod spectrum;
pub mod units;
pub mod verify;

pub use kernel::{
    b_general, b_low_temp, g_factor, KernelParams, LowTempKernel, ResponseKernel, TransitionBasis,
};
pub use potential::{fourier_invert, image_potential, phi_asymptote, CutoffSpec, PotentialEngine};
pub use spectrum::{build_spectrum, SpectrumParams, SpectrumTable};
pub use units::{classify_regime, derive_scales, LengthScales, PhysicalConfig, Regime};
