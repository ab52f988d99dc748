//! Parity basis functions for the box `[-a, a]`, the analytic inner-product
//! identities, and a Gauss-Legendre quadrature oracle for x⁴-weighted
//! matrix elements.
//!
//! The basis is `φ_{2r}(x) = √(1/a)·cos((2r+1)πx/2a)` (even parity) and
//! `φ_{2r+1}(x) = √(1/a)·sin((r+1)πx/a)` (odd parity). Both branches share
//! the wavenumber `α_r = (r+1)π/(2a)`.

use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BasisError {
    #[error("point x = {x} outside the box [-{a}, {a}]")]
    OutsideBox { x: f64, a: f64 },
    #[error("wavenumbers must be positive, got alpha = {alpha}, beta = {beta}")]
    NonPositiveWavenumber { alpha: f64, beta: f64 },
    #[error(
        "quadrature rule with {n_points} points cannot resolve indices up to {max_index}; \
         need at least {required} points"
    )]
    InsufficientResolution {
        n_points: usize,
        max_index: usize,
        required: usize,
    },
}

/// Parity of the basis function with index `r`: even indices are cosines,
/// odd indices are sines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

pub fn parity(r: usize) -> Parity {
    if r % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Which trig product an inner-product identity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapKind {
    Cosine,
    Sine,
}

/// Wavenumber of φ_r, `(r+1)π/(2a)`.
pub fn wavenumber(r: usize, a: f64) -> f64 {
    (r as f64 + 1.0) * PI / (2.0 * a)
}

/// Evaluate φ_r(x) on the box `[-a, a]`.
pub fn basis_eval(r: usize, x: f64, a: f64) -> Result<f64, BasisError> {
    if x.abs() > a {
        return Err(BasisError::OutsideBox { x, a });
    }
    let norm = (1.0 / a).sqrt();
    // Phase in units of π. At the walls this is exactly (r+1)/2, so the
    // half-period trig evaluation below lands the boundary zeros exactly.
    let phase = (r as f64 + 1.0) * x / (2.0 * a);
    let value = match parity(r) {
        Parity::Even => norm * cos_pi(phase),
        Parity::Odd => norm * sin_pi(phase),
    };
    Ok(value)
}

/// sin(πx), exact at the quarter-period lattice points.
fn sin_pi(x: f64) -> f64 {
    let y = x % 2.0;
    let quarters = 2.0 * y;
    if quarters == quarters.trunc() {
        return match (quarters as i64).rem_euclid(4) {
            0 => 0.0,
            1 => 1.0,
            2 => 0.0,
            _ => -1.0,
        };
    }
    (PI * y).sin()
}

/// cos(πx), exact at the quarter-period lattice points.
fn cos_pi(x: f64) -> f64 {
    let y = x % 2.0;
    let quarters = 2.0 * y;
    if quarters == quarters.trunc() {
        return match (quarters as i64).rem_euclid(4) {
            0 => 1.0,
            1 => 0.0,
            2 => -1.0,
            _ => 0.0,
        };
    }
    (PI * y).cos()
}

/// Analytic inner product `∫_{-a}^{a} trig(αx)·trig(βx) dx` for the cosine
/// and sine families.
///
/// The equal-wavenumber case is handled by an explicit branch instead of the
/// Kronecker-delta guard terms of the textbook identity, so no 0/0-adjacent
/// expression is ever evaluated.
pub fn overlap_analytic(
    alpha: f64,
    beta: f64,
    a: f64,
    kind: OverlapKind,
) -> Result<f64, BasisError> {
    if alpha <= 0.0 || beta <= 0.0 {
        return Err(BasisError::NonPositiveWavenumber { alpha, beta });
    }
    let sign = match kind {
        OverlapKind::Cosine => 1.0,
        OverlapKind::Sine => -1.0,
    };
    if alpha == beta {
        Ok(a + sign * (2.0 * alpha * a).sin() / (2.0 * alpha))
    } else {
        let diff = ((alpha - beta) * a).sin() / (alpha - beta);
        let sum = ((alpha + beta) * a).sin() / (alpha + beta);
        Ok(diff + sign * sum)
    }
}

/// Gauss-Legendre rule on `[-a, a]`.
///
/// Nodes are the Legendre roots found by Newton iteration, scaled to the
/// box; the rule integrates polynomials of degree ≤ 2n-1 exactly.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub n_points: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn gauss_legendre(n_points: usize, a: f64) -> Self {
        assert!(n_points >= 1, "quadrature rule needs at least one point");
        let mut nodes = vec![0.0; n_points];
        let mut weights = vec![0.0; n_points];
        let n = n_points;
        // Roots come in ± pairs; solve for the non-negative half.
        for i in 0..(n + 1) / 2 {
            // Standard initial guess for the i-th root of P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x * a;
            nodes[n - 1 - i] = x * a;
            weights[i] = w * a;
            weights[n - 1 - i] = w * a;
        }
        Self {
            n_points,
            nodes,
            weights,
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    fn check_resolution(&self, max_index: usize) -> Result<(), BasisError> {
        // The integrand φ_r x⁴ φ_s is a trig polynomial of bounded
        // frequency; 2(max(r,s)+2) points oversample it about 2x.
        let required = 2 * (max_index + 2);
        if self.n_points < required {
            return Err(BasisError::InsufficientResolution {
                n_points: self.n_points,
                max_index,
                required,
            });
        }
        Ok(())
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Quadrature oracle for `∫_{-a}^{a} φ_r(x)·x⁴·φ_s(x) dx`.
///
/// The integrand is built from the same `basis_eval` code path for both
/// indices, and f64 multiplication commutes, so the result is symmetric in
/// (r, s) bit-for-bit.
pub fn quadrature_x4_element(
    r: usize,
    s: usize,
    a: f64,
    rule: &QuadratureRule,
) -> Result<f64, BasisError> {
    rule.check_resolution(r.max(s))?;
    Ok(rule.integrate(|x| {
        let fr = basis_eval(r, x, a).expect("quadrature node inside box");
        let fs = basis_eval(s, x, a).expect("quadrature node inside box");
        // product of the basis factors first, so (r, s) and (s, r) follow
        // the identical sequence of float operations
        (fr * fs) * x.powi(4)
    }))
}

/// Max |⟨φ_r, φ_s⟩ - δ_rs| over all r, s < n, by quadrature. A self-test of
/// basis evaluation plus the quadrature rule.
pub fn orthonormality_defect(
    n: usize,
    a: f64,
    rule: &QuadratureRule,
) -> Result<f64, BasisError> {
    rule.check_resolution(n.saturating_sub(1))?;
    let mut max_defect: f64 = 0.0;
    for r in 0..n {
        for s in 0..=r {
            let overlap = rule.integrate(|x| {
                basis_eval(r, x, a).unwrap() * basis_eval(s, x, a).unwrap()
            });
            let expected = if r == s { 1.0 } else { 0.0 };
            max_defect = max_defect.max((overlap - expected).abs());
        }
    }
    Ok(max_defect)
}
