//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Errors cross the boundary as strings so the same methods also run
//! natively in tests.

use tallest_column::oracle::DEFAULT_S_FLOOR;
use tallest_column::{
    event_residual, integrate_backward, optimality_residual, profile, sturm_liouville_lambda,
    torque_residual, volume, BoundaryKind, ColumnProfile, DiscreteShape, ShootingOptions, Solution,
};
use wasm_bindgen::prelude::*;

/// A solved column: shooting result plus sampled profile.
#[wasm_bindgen]
#[derive(Debug)]
pub struct Column {
    solution: Solution,
    profile: ColumnProfile,
}

#[wasm_bindgen]
impl Column {
    /// Shoot from offset `delta` for base condition `bc` ("clamped" or
    /// "hinged") and sample `points` profile values.
    #[wasm_bindgen(constructor)]
    pub fn new(bc: &str, delta: f64, points: usize) -> Result<Column, String> {
        let bc: BoundaryKind = bc.parse().map_err(|e| format!("{e}"))?;
        let opts = ShootingOptions::default().with_delta(delta);
        let solution = integrate_backward(bc, &opts).map_err(|e| e.to_string())?;
        let profile = profile(&solution, points.max(5), 1e-3).map_err(|e| e.to_string())?;
        Ok(Column { solution, profile })
    }

    pub fn lambda(&self) -> f64 {
        self.solution.lambda
    }

    pub fn t_stop(&self) -> f64 {
        self.solution.t_stop
    }

    pub fn volume(&self) -> f64 {
        volume(&self.profile)
    }

    pub fn s(&self) -> Vec<f64> {
        self.profile.samples.iter().map(|p| p.s).collect()
    }

    pub fn area(&self) -> Vec<f64> {
        self.profile.samples.iter().map(|p| p.a).collect()
    }

    /// Angle scaled to unit maximum magnitude over `s ≥ 0.05`.
    pub fn theta(&self) -> Vec<f64> {
        let peak = self
            .profile
            .samples
            .iter()
            .filter(|p| p.s >= 0.05)
            .fold(0.0f64, |m, p| m.max(p.theta.abs()));
        self.profile.samples.iter().map(|p| p.theta / peak).collect()
    }

    /// 1 where the tip is filled in by the similarity solution.
    pub fn extended(&self) -> Vec<u8> {
        self.profile.samples.iter().map(|p| p.extended as u8).collect()
    }

    pub fn trajectory_t(&self) -> Vec<f64> {
        self.solution.trajectory.iter().map(|p| p.t).collect()
    }

    /// One state component along the trajectory: 0 τ, 1 w, 2 β, 3 α.
    pub fn trajectory_component(&self, index: usize) -> Vec<f64> {
        self.solution
            .trajectory
            .iter()
            .map(|p| p.state.to_array().get(index).copied().unwrap_or(f64::NAN))
            .collect()
    }

    /// Boundary residual whose zero marks the base.
    pub fn event_residual(&self) -> Vec<f64> {
        let bc = self.solution.bc;
        self.solution.trajectory.iter().map(|p| event_residual(&p.state, bc)).collect()
    }

    /// Independent eigenvalue of the sampled shape on `n` intervals.
    pub fn oracle_lambda(&self, n: usize) -> Result<f64, String> {
        let shape = DiscreteShape::from_profile(&self.profile, n, DEFAULT_S_FLOOR).map_err(|e| e.to_string())?;
        sturm_liouville_lambda(&shape, self.solution.bc).map_err(|e| e.to_string())
    }

    pub fn optimality_residual(&self) -> f64 {
        optimality_residual(&self.profile)
    }

    pub fn torque_residual(&self) -> f64 {
        torque_residual(&self.profile)
    }
}

/// Roots of the linearization's characteristic polynomial, ascending.
#[wasm_bindgen]
pub fn characteristic_roots() -> Vec<f64> {
    tallest_column::characteristic_roots().to_vec()
}
