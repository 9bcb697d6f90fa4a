//! Explicit right-hand side of the peeled autonomous system.
//!
//! With `a = (λ/24)s³α`, `b = (λ/96)s⁴β`, `θ = s⁻²τ` and `t = −ln s`, the
//! column equations become
//!
//! ```text
//! (3−D)[α²w] = 6βτ,   (3+D)[αw²] = 12τ²,   (4−D)β = 4α,   w = (2+D)τ
//! ```
//!
//! Solving the first two for `α_t`, `w_t` (determinant `3α²w²`) gives the
//! explicit form used here.

use serde::{Deserialize, Serialize};

use crate::linearize::Eigenmode;
use crate::shooting::BoundaryKind;
use crate::{Error, Result};

/// Peeled state at one log-time. Also used for its time derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsState {
    pub tau: f64,
    /// `τ_t + 2τ`
    pub w: f64,
    pub beta: f64,
    pub alpha: f64,
}

impl AsState {
    /// The similarity solution `(τ, w, β, α) = (1, 2, 1, 1)`.
    pub const CRITICAL_POINT: AsState = AsState { tau: 1.0, w: 2.0, beta: 1.0, alpha: 1.0 };

    pub fn new(tau: f64, w: f64, beta: f64, alpha: f64) -> Self {
        Self { tau, w, beta, alpha }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.tau, self.w, self.beta, self.alpha]
    }

    pub fn from_array(y: [f64; 4]) -> Self {
        Self { tau: y[0], w: y[1], beta: y[2], alpha: y[3] }
    }

    /// `τ_t`
    pub fn tau_rate(&self) -> f64 {
        self.w - 2.0 * self.tau
    }
}

/// Right-hand side with a configurable floor on `|α·w|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutonomousSystem {
    pub singular_floor: f64,
}

impl Default for AutonomousSystem {
    fn default() -> Self {
        Self { singular_floor: 1e-12 }
    }
}

impl AutonomousSystem {
    pub fn rhs(&self, y: &AsState) -> Result<AsState> {
        let AsState { tau, w, beta, alpha } = *y;
        let aw = alpha * w;
        if !(aw.abs() >= self.singular_floor) {
            return Err(Error::SingularElimination { product: aw, floor: self.singular_floor });
        }
        Ok(AsState {
            tau: w - 2.0 * tau,
            w: -3.0 * w + 8.0 * tau * tau / aw + 2.0 * beta * tau / (alpha * alpha),
            beta: 4.0 * beta - 4.0 * alpha,
            alpha: 3.0 * alpha - 4.0 * beta * tau / aw - 4.0 * tau * tau / (w * w),
        })
    }

    pub(crate) fn rhs_array(&self, y: &[f64; 4]) -> Result<[f64; 4]> {
        self.rhs(&AsState::from_array(*y)).map(AsState::to_array)
    }
}

/// [`AutonomousSystem::rhs`] with the default floor.
pub fn rhs(y: &AsState) -> Result<AsState> {
    AutonomousSystem::default().rhs(y)
}

/// Residuals of the implicit equations (expanded with the product rule) for
/// a state and a proposed rate. The last entry checks `τ_t = w − 2τ`.
pub fn implicit_residuals(y: &AsState, rate: &AsState) -> [f64; 4] {
    let AsState { tau, w, beta, alpha } = *y;
    [
        3.0 * alpha * alpha * w - (2.0 * alpha * rate.alpha * w + alpha * alpha * rate.w) - 6.0 * beta * tau,
        3.0 * alpha * w * w + rate.alpha * w * w + 2.0 * alpha * w * rate.w - 12.0 * tau * tau,
        4.0 * beta - rate.beta - 4.0 * alpha,
        rate.tau - (w - 2.0 * tau),
    ]
}

/// Scalar whose zero marks the base: `τ` (clamped) or `α²w` (hinged, the
/// peeled torque).
pub fn event_residual(y: &AsState, bc: BoundaryKind) -> f64 {
    match bc {
        BoundaryKind::Clamped => y.tau,
        BoundaryKind::Hinged => y.alpha * y.alpha * y.w,
    }
}

/// d/dt of [`event_residual`]. For the hinged case `d(α²w)/dt = 3α²w − 6βτ`,
/// which stays finite where `α → 0`, `w → ∞`.
pub fn event_rate(y: &AsState, bc: BoundaryKind) -> f64 {
    match bc {
        BoundaryKind::Clamped => y.tau_rate(),
        BoundaryKind::Hinged => 3.0 * y.alpha * y.alpha * y.w - 6.0 * y.beta * y.tau,
    }
}

/// Point on the tangent line of the stable manifold:
/// `(1, 2, 1, 1) + δ·(δτ₀, (q+2)δτ₀, δβ₀, δα₀)`.
pub fn initial_state(delta: f64, mode: &Eigenmode) -> Result<AsState> {
    if delta == 0.0 || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("delta must be finite and nonzero, got {delta}")));
    }
    let [dtau, dbeta, dalpha] = mode.v;
    let c = AsState::CRITICAL_POINT;
    Ok(AsState {
        tau: c.tau + delta * dtau,
        w: c.w + delta * (mode.q + 2.0) * dtau,
        beta: c.beta + delta * dbeta,
        alpha: c.alpha + delta * dalpha,
    })
}
