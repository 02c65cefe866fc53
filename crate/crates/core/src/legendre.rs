//! Legendre polynomials, their roots, and the two weight families built on
//! those roots.
//!
//! The classical Gauss-Legendre weight is `2 / ((1 - x^2) P_c'(x)^2)`. The
//! bias-distribution weight carries an extra `(1 - x^2)^{-1/2}` factor, which
//! turns the rule into a quadrature for `1 / sqrt(1 - x^2)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest degree accepted by [`legendre_roots`].
pub const MAX_DEGREE: usize = 10_000;

/// Newton iterations stop once the update is below this.
pub const STEP_TOLERANCE: f64 = 1e-14;

/// Upper bound on `|P_c(x)|` at every accepted root.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

pub const MAX_ITERATIONS: usize = 100;

/// Accepted residual at a root where `P_c'` has magnitude `|derivative|`.
///
/// One ulp of `x` moves `P_c` by about `eps |P_c'|`, which exceeds
/// [`RESIDUAL_TOLERANCE`] near the endpoints once the degree passes ~300.
pub fn residual_bound(derivative: f64) -> f64 {
    RESIDUAL_TOLERANCE.max(16.0 * f64::EPSILON * derivative.abs())
}

/// Evaluate `P_n(x)` and `P_n'(x)` with the ascending three-term recurrence.
///
/// The derivative uses `P'_{k+1} = x P'_k + (k + 1) P_k`, which stays finite
/// at `x = +-1`.
pub fn eval_legendre(degree: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let mut dp = 0.0;
    for k in 0..degree {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        dp = x * dp + (kf + 1.0) * p;
        p_prev = p;
        p = next;
    }
    (p, dp)
}

/// Roots of `P_c` in ascending order with the derivative at each root.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreRoots {
    degree: usize,
    roots: Vec<f64>,
    derivatives: Vec<f64>,
}

impl LegendreRoots {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    /// `P_c'(x_k)` for each root.
    pub fn derivatives(&self) -> &[f64] {
        &self.derivatives
    }

    /// Classical Gauss-Legendre weights, summing to 2.
    pub fn standard_weights(&self) -> Vec<f64> {
        self.roots
            .iter()
            .zip(&self.derivatives)
            .map(|(&x, &d)| standard_weight(x, d).expect("roots are interior and simple"))
            .collect()
    }

    /// Weights `2 / ((1 - x^2)^{3/2} P_c'(x)^2)` of the optimal bias distribution.
    pub fn modified_weights(&self) -> Vec<f64> {
        self.roots
            .iter()
            .zip(&self.derivatives)
            .map(|(&x, &d)| modified_weight(x, d).expect("roots are interior and simple"))
            .collect()
    }

    /// Integrate `f` over [-1, 1] with the standard weights.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.roots
            .iter()
            .zip(self.standard_weights())
            .map(|(&x, w)| w * f(x))
            .sum()
    }
}

/// Initial guess for the `k`-th root (1-based, ascending) of `P_c`.
fn initial_guess(degree: usize, k: usize) -> f64 {
    let (c, k) = (degree as f64, k as f64);
    let theta = (4.0 * (c - k) + 3.0) / (4.0 * c + 2.0) * PI;
    theta.cos()
}

fn polish(degree: usize, k: usize) -> Result<(f64, f64)> {
    let mut x = initial_guess(degree, k);
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let (p, dp) = eval_legendre(degree, x);
        let step = p / dp;
        x -= step;
        if step.abs() < STEP_TOLERANCE {
            converged = true;
            break;
        }
    }
    let (p, dp) = eval_legendre(degree, x);
    if !converged || p.abs() > residual_bound(dp) || !(x > -1.0 && x < 1.0) {
        return Err(Error::RootNotConverged {
            degree,
            index: k,
            residual: p.abs(),
        });
    }
    Ok((x, dp))
}

/// Find all roots of `P_c`, seeded from the asymptotic angle formula and
/// polished by Newton's method.
///
/// Only the positive half is iterated; the negative half is its mirror image,
/// so antisymmetry holds exactly and the middle root of an odd degree is 0.
pub fn legendre_roots(degree: usize) -> Result<LegendreRoots> {
    if degree == 0 {
        return Err(Error::DegreeTooSmall { degree, min: 1 });
    }
    if degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree,
            max: MAX_DEGREE,
        });
    }

    let half = degree / 2;
    let mut upper = Vec::with_capacity(half);
    for k in (degree - half + 1)..=degree {
        upper.push(polish(degree, k)?);
    }

    let mut roots = Vec::with_capacity(degree);
    let mut derivatives = Vec::with_capacity(degree);
    // P_c'(-x) = (-1)^{c+1} P_c'(x)
    let mirror_sign = if degree.is_multiple_of(2) { -1.0 } else { 1.0 };
    for &(x, d) in upper.iter().rev() {
        roots.push(-x);
        derivatives.push(mirror_sign * d);
    }
    if degree % 2 == 1 {
        roots.push(0.0);
        derivatives.push(eval_legendre(degree, 0.0).1);
    }
    for &(x, d) in &upper {
        roots.push(x);
        derivatives.push(d);
    }

    Ok(LegendreRoots {
        degree,
        roots,
        derivatives,
    })
}

fn check_node(root: f64, derivative: f64) -> Result<f64> {
    let one_minus_sq = (1.0 - root) * (1.0 + root);
    if one_minus_sq.is_nan() || one_minus_sq <= 0.0 || derivative == 0.0 || !derivative.is_finite()
    {
        return Err(Error::InvalidNode { root, derivative });
    }
    Ok(one_minus_sq)
}

/// Weight `2 / ((1 - x^2)^{3/2} P_c'(x)^2)` attached to a Legendre root in the
/// optimal discrete bias distribution.
pub fn modified_weight(root: f64, derivative: f64) -> Result<f64> {
    let s = check_node(root, derivative)?;
    Ok(2.0 / (s * s.sqrt() * derivative * derivative))
}

/// Classical Gauss-Legendre weight `2 / ((1 - x^2) P_c'(x)^2)`.
pub fn standard_weight(root: f64, derivative: f64) -> Result<f64> {
    let s = check_node(root, derivative)?;
    Ok(2.0 / (s * derivative * derivative))
}
