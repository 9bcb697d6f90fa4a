//! Exact power-law solution governing the tip asymptotics.
//!
//! With `a = a₀s³`, `b = b₀s⁴`, `θ = s^p` the three column equations reduce
//! to `b₀ = a₀/4`, `p(p+5) = −γ` and `½p²(2p+1) = −γ` where `γ = λ/(4a₀)`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exponent of θ together with the constants of the similarity solution.
///
/// `a₀` and `b₀` are kept as ratios to `λ`, which is only known after the
/// shooting run has finished.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityExponents {
    pub p: f64,
    pub gamma: f64,
    pub a0_over_lambda: f64,
    pub b0_over_lambda: f64,
}

/// Powers of `(θ, b, a)` in the similarity solution.
pub const EXPONENT_VECTOR: [f64; 3] = [-2.0, 4.0, 3.0];

/// Roots of `2p(p+5) = p²(2p+1)`, ascending.
///
/// The cubic factors as `p(2p − 5)(p + 2)`.
pub fn exponent_roots() -> [f64; 3] {
    [-2.0, 0.0, 2.5]
}

/// `γ` implied by an exponent through `p(p+5) = −γ`.
pub fn gamma_for(p: f64) -> f64 {
    -p * (p + 5.0)
}

/// Residual of the second balance `½p²(2p+1) = −γ`.
pub fn balance_residual(p: f64, gamma: f64) -> f64 {
    0.5 * p * p * (2.0 * p + 1.0) + gamma
}

/// The only exponent with `γ > 0`: `p = −2`, `γ = 6`, `a₀ = λ/24`, `b₀ = λ/96`.
pub fn admissible_exponent() -> SimilarityExponents {
    let (p, gamma) = exponent_roots()
        .into_iter()
        .map(|p| (p, gamma_for(p)))
        .find(|&(_, g)| g > 0.0)
        .expect("exactly one root has positive gamma");
    // γ = λ/(4a₀)
    let a0_over_lambda = 1.0 / (4.0 * gamma);
    SimilarityExponents {
        p,
        gamma,
        a0_over_lambda,
        b0_over_lambda: a0_over_lambda / 4.0,
    }
}

/// Values of the similarity solution at one arclength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityPoint {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub theta_s: f64,
}

/// `ã = (λ/24)s³`, `b̃ = (λ/96)s⁴`, `θ̃ = s⁻²` (and `θ̃_s = −2s⁻³`).
pub fn similarity_profile(lambda: f64, s: f64) -> Result<SimilarityPoint> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidArgument(format!("s must lie in (0, 1], got {s}")));
    }
    Ok(similarity_point_unchecked(lambda, s))
}

pub(crate) fn similarity_point_unchecked(lambda: f64, s: f64) -> SimilarityPoint {
    let e = admissible_exponent();
    SimilarityPoint {
        a: lambda * e.a0_over_lambda * s.powi(3),
        b: lambda * e.b0_over_lambda * s.powi(4),
        theta: s.powi(-2),
        theta_s: -2.0 * s.powi(-3),
    }
}
