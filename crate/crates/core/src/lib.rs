//! Steady-state preserving semi-discrete schemes.
//!
//! The central piece is [`residual`]: given any semi-discrete operator
//! `G_h` and a discrete equilibrium `u_eq`, the wrapped operator
//! `u -> G_h(u) - G_h(u_eq)` has `u_eq` as an exact fixed point while
//! keeping the accuracy of `G_h`. The remaining modules provide the model
//! operators the wrapper is exercised on:
//!
//! - [`fokker_planck`]: linear Fokker-Planck (upwind, central, Chang-Cooper, BGK)
//! - [`porous_medium`]: 2D porous medium equation in self-similar variables
//! - [`boltzmann`]: Fourier-Galerkin collision operator for 2D Maxwell molecules
//! - [`shallow_water`]: 1D shallow water with topography, flux-limited variants
//! - [`advection`]: scalar advection with relaxation and the TVD sweep harness
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod advection;
pub mod boltzmann;
pub mod diagnostics;
pub mod error;
pub mod fokker_planck;
pub mod limiter;
pub mod math;
pub mod mesh;
pub mod porous_medium;
pub mod residual;
pub mod shallow_water;

pub use error::{Error, Result};
pub use mesh::{Field, Grid1D, Grid2D, Shape};
pub use residual::{
    advance, run_simulation, uniform_samples, EquilibriumProfile, ReferenceTrajectory, ResidualEquilibrium,
    SemiDiscreteOperator, StepperKind, TimeDependentResidual, TimeStepper,
};
