//! Rayleigh-Schrödinger energy corrections for the quartic perturbation:
//! E⁽⁰⁾, E⁽¹⁾, and E⁽²⁾ both in closed form and by brute-force summation
//! of the second-order series.
//!
//! Everything here is in reduced units (ε = 1, coupling `g`).

use crate::hamiltonian::{potential_coefficients, v_element};
use crate::params::ReducedParams;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PerturbationError {
    #[error("off-diagonal element requires r != s, got r = s = {0}")]
    DiagonalIndex(usize),
    #[error("indices {r} and {s} have opposite parity; the element vanishes identically")]
    OppositeParity { r: usize, s: usize },
    #[error("series cutoff s_max = {s_max} too small for level r = {r}; need s_max >= r + 2")]
    CutoffTooSmall { r: usize, s_max: usize },
}

/// Which route produced an E⁽²⁾ value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum E2Source {
    Closed,
    Series,
}

/// Zeroth-order level: the free box, `(r+1)²`.
pub fn e0(r: usize) -> f64 {
    (r as f64 + 1.0).powi(2)
}

/// First-order correction, the diagonal potential element
/// `(g/5)(1 - 20/π²(r+1)² + 120/π⁴(r+1)⁴)`.
pub fn e1(r: usize, g: f64) -> f64 {
    let x2 = (r as f64 + 1.0).powi(2);
    g / 5.0 * (1.0 - 20.0 / (PI * PI * x2) + 120.0 / (PI.powi(4) * x2 * x2))
}

/// Magnitudes of the five closed-form E⁽²⁾ coefficients; the k-th term is
/// `(-1)^(k+1)·COEFF[k-1]/(π^2k·(r+1)^2k)`.
pub const E2_COEFFS: [f64; 5] = [
    32.0 / 225.0,
    1184.0 / 35.0,
    10048.0 / 5.0,
    44928.0,
    278784.0,
];

/// Closed-form E⁽²⁾ with caller-supplied coefficient magnitudes. The
/// production path goes through [`e2_closed`]; this entry point exists so
/// the validation suite can inject a perturbed coefficient and confirm the
/// series cross-check actually pins the closed form.
pub fn e2_closed_with(r: usize, g: f64, coeffs: &[f64; 5]) -> f64 {
    e2_closed_arg(r as f64 + 1.0, g, coeffs)
}

fn e2_closed_arg(x: f64, g: f64, coeffs: &[f64; 5]) -> f64 {
    let mut sum = 0.0;
    let mut sign = 1.0;
    for (k, &c) in coeffs.iter().enumerate() {
        let p = 2.0 * (k as f64 + 1.0);
        sum += sign * c / (PI.powf(p) * x.powf(p));
        sign = -sign;
    }
    // The physical prefactor m·a¹⁰·λ²/ħ² equals g²·ε·π²/8; with ε = 1 the
    // reduced prefactor is g²·π²/8.
    g * g * PI * PI / 8.0 * sum
}

/// Unified closed-form second-order correction E⁽²⁾(r).
pub fn e2_closed(r: usize, g: f64) -> f64 {
    e2_closed_with(r, g, &E2_COEFFS)
}

/// Even-family closed form: the correction for global level 2r, expressed
/// with argument (2r+1) and the unified coefficients.
pub fn e2_even_closed(r: usize, g: f64) -> f64 {
    e2_closed_arg(2.0 * r as f64 + 1.0, g, &E2_COEFFS)
}

/// Odd-family closed form: the correction for global level 2r+1, with the
/// parity family's own printed coefficients over powers of (r+1).
pub fn e2_odd_closed(r: usize, g: f64) -> f64 {
    const ODD_COEFFS: [f64; 5] = [
        8.0 / 225.0,
        74.0 / 35.0,
        157.0 / 5.0,
        351.0 / 2.0,
        1089.0 / 4.0,
    ];
    e2_closed_arg(r as f64 + 1.0, g, &ODD_COEFFS)
}

/// Off-diagonal potential element V_rs for a same-parity pair; identical
/// bit-for-bit to the Hamiltonian module's element.
pub fn v_offdiag(r: usize, s: usize, g: f64) -> Result<f64, PerturbationError> {
    if r == s {
        return Err(PerturbationError::DiagonalIndex(r));
    }
    if r % 2 != s % 2 {
        return Err(PerturbationError::OppositeParity { r, s });
    }
    Ok(v_element(r, s, &ReducedParams::from_g(g)))
}

/// Energy denominator ε_rs = (r+s+2)(r-s) in reduced units.
pub fn energy_denominator(r: usize, s: usize) -> Result<f64, PerturbationError> {
    if r == s {
        return Err(PerturbationError::DiagonalIndex(r));
    }
    Ok(((r + s + 2) as f64) * (r as f64 - s as f64))
}

/// Partial-fraction form of the reciprocal denominator,
/// `1/ε_rs = [1/(r-s) + 1/(r+s+2)] / (2(r+1))`.
pub fn energy_denominator_reciprocal(r: usize, s: usize) -> Result<f64, PerturbationError> {
    if r == s {
        return Err(PerturbationError::DiagonalIndex(r));
    }
    let diff = r as f64 - s as f64;
    let sum = (r + s + 2) as f64;
    Ok((1.0 / diff + 1.0 / sum) / (2.0 * (r as f64 + 1.0)))
}

/// Result of summing the second-order series up to a cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
    /// Partial sum over s < r (non-negative: ε_rs > 0 there).
    pub lower_sum: f64,
    /// Partial sum over s > r (non-positive: ε_rs < 0 there).
    pub upper_sum: f64,
}

#[derive(Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    err: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.err;
        let t = self.sum + y;
        self.err = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Brute-force second-order sum Σ V_rs²/ε_rs over same-parity s ≤ s_max,
/// s ≠ r, with compensated accumulation in ascending s.
///
/// The lower (s < r) and upper (s > r) partial sums are accumulated
/// separately, matching the split form of the defining sum and preserving
/// its sign structure.
pub fn e2_series(r: usize, g: f64, s_max: usize) -> Result<SeriesResult, PerturbationError> {
    if s_max < r + 2 {
        return Err(PerturbationError::CutoffTooSmall { r, s_max });
    }
    let rp = ReducedParams::from_g(g);
    let mut lower = KahanSum::default();
    let mut upper = KahanSum::default();
    let mut terms_used = 0;
    let mut s = r % 2;
    while s <= s_max {
        if s != r {
            let v = v_element(r, s, &rp);
            let term = v * v / energy_denominator(r, s).expect("s != r");
            if s < r {
                lower.add(term);
            } else {
                upper.add(term);
            }
            terms_used += 1;
        }
        s += 2;
    }
    // Tail bound. For large s the quartic (c₂) part of V_rs is O(1/s⁴) and
    // subdominant; the leading behaviour comes from
    //   V_rs ≈ ±c₁·[1/(r-s)² - 1/(r+s+2)²] = ±c₁·4(r+1)(s+1)/[(r-s)²(r+s+2)²]
    //        ~ ±4c₁(r+1)/s³,
    // while 1/ε_rs ~ -1/s², so |V_rs²/ε_rs| ~ 16c₁²(r+1)²/s⁸. Summing over
    // same-parity s > s_max (step 2) and bounding by the integral gives
    //   tail ≤ (1/2)·∫ 16c₁²(r+1)²/s⁸ ds = 8c₁²(r+1)²/(7·s_max⁷),
    // doubled to absorb the subleading 1/s⁹-and-beyond corrections.
    let (c1, _) = potential_coefficients(g);
    let tail_bound = 16.0 * c1 * c1 * (r as f64 + 1.0).powi(2) / (7.0 * (s_max as f64).powi(7));
    Ok(SeriesResult {
        value: lower.sum + upper.sum,
        terms_used,
        tail_bound,
        lower_sum: lower.sum,
        upper_sum: upper.sum,
    })
}

pub const DEFAULT_S_MAX: usize = 2000;

/// Full second-order energy breakdown for one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationBreakdown {
    pub r: usize,
    pub e0: f64,
    pub e1: f64,
    pub e2: f64,
    pub total: f64,
    pub e2_source: E2Source,
}

/// Second-order Rayleigh-Schrödinger estimate E_r ≈ E⁽⁰⁾ + E⁽¹⁾ + E⁽²⁾,
/// with E⁽²⁾ from the closed form.
pub fn energy_rs2(r: usize, rp: &ReducedParams) -> PerturbationBreakdown {
    breakdown(r, rp, E2Source::Closed, DEFAULT_S_MAX).expect("closed form has no cutoff")
}

/// Breakdown with a selectable E⁽²⁾ route. The series route uses the given
/// cutoff.
pub fn breakdown(
    r: usize,
    rp: &ReducedParams,
    source: E2Source,
    s_max: usize,
) -> Result<PerturbationBreakdown, PerturbationError> {
    let e0v = e0(r);
    let e1v = e1(r, rp.g);
    let e2v = match source {
        E2Source::Closed => e2_closed(r, rp.g),
        E2Source::Series => e2_series(r, rp.g, s_max)?.value,
    };
    Ok(PerturbationBreakdown {
        r,
        e0: e0v,
        e1: e1v,
        e2: e2v,
        total: e0v + e1v + e2v,
        e2_source: source,
    })
}
