//! Numerical toolkit for the box-confined quartic oscillator.
//!
//! A particle of mass `m` in the potential `λx⁴`, confined to `[-a, a]` with
//! wavefunctions vanishing at the walls. The energy levels are computed two
//! ways and cross-verified:
//!
//! * direct diagonalization of the Hamiltonian in the particle-in-a-box
//!   parity basis (treated as the exact reference), and
//! * second-order Rayleigh-Schrödinger perturbation theory, both through the
//!   closed-form correction and through brute-force summation of the
//!   perturbation series.
//!
//! All internal math runs in reduced units with energy scale
//! `ε = π²ħ²/(8ma²)` and dimensionless coupling `g = λa⁴/ε`; physical units
//! are applied only at I/O boundaries.

pub mod analysis;
pub mod basis;
pub mod cli;
pub mod eigen;
pub mod hamiltonian;
pub mod params;
pub mod perturbation;

pub use params::{PhysicalParams, ReducedParams};
