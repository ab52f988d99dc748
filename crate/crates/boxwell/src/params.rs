//! Physical parameters and the reduced (dimensionless) formulation.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("invalid parameter: {name} must be {requirement}, got {value}")]
    Invalid {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
}

/// Inputs of the physical problem: mass, ħ, box half-width `a` and the
/// quartic coupling `λ`, in any consistent unit system.
///
/// `coupling == 0` is admitted as the free-box limit even though the
/// physical problem of interest has `λ > 0`; the free box is the exact
/// anchor for every regression test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub mass: f64,
    pub hbar: f64,
    pub half_width: f64,
    pub coupling: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64, hbar: f64, half_width: f64, coupling: f64) -> Result<Self, ParamError> {
        let require_pos = |name, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(ParamError::Invalid {
                    name,
                    requirement: "finite and > 0",
                    value,
                })
            }
        };
        require_pos("mass", mass)?;
        require_pos("hbar", hbar)?;
        require_pos("half_width", half_width)?;
        if !(coupling >= 0.0) || !coupling.is_finite() {
            return Err(ParamError::Invalid {
                name: "coupling",
                requirement: "finite and >= 0",
                value: coupling,
            });
        }
        Ok(Self {
            mass,
            hbar,
            half_width,
            coupling,
        })
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
            half_width: 1.0,
            coupling: 1.0,
        }
    }
}

/// Dimensionless formulation: energy scale `ε = π²ħ²/(8ma²)` and coupling
/// `g = λa⁴/ε`. Everything downstream of this type works with `ε = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    pub epsilon: f64,
    pub g: f64,
}

impl ReducedParams {
    /// Reduced parameters straight from a dimensionless coupling, for
    /// callers that never touch physical units.
    pub fn from_g(g: f64) -> Self {
        Self { epsilon: 1.0, g }
    }
}

/// Map physical parameters to the reduced formulation.
pub fn reduce(p: &PhysicalParams) -> Result<ReducedParams, ParamError> {
    // Re-validate so raw struct literals cannot smuggle bad values past us.
    let p = PhysicalParams::new(p.mass, p.hbar, p.half_width, p.coupling)?;
    let epsilon = PI * PI * p.hbar * p.hbar / (8.0 * p.mass * p.half_width * p.half_width);
    let g = p.coupling * p.half_width.powi(4) / epsilon;
    Ok(ReducedParams { epsilon, g })
}

/// Rescale a reduced energy back to physical units.
pub fn to_physical_energy(e_reduced: f64, p: &PhysicalParams) -> f64 {
    let rp = reduce(p).expect("params validated at construction");
    e_reduced * rp.epsilon
}
