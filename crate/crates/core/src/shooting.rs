//! Backward shooting along the stable manifold.
//!
//! The run starts on the tangent line of the stable manifold a distance `δ`
//! from the critical point and integrates toward decreasing `t` until the
//! base surface is reached. Errors in the neutral and unstable directions
//! decay in this direction, so one pass suffices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{event_rate, event_residual, initial_state, AsState, AutonomousSystem};
use crate::integrator::{DenseSegment, Dopri5, StepControl};
use crate::linearize::stable_mode;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    /// `θ(1) = 0`; stops on `τ = 0`.
    Clamped,
    /// `a²θ_s = 0` at `s = 1`; stops on `α²w = 0`.
    Hinged,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 2] = [BoundaryKind::Clamped, BoundaryKind::Hinged];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryKind::Clamped => "clamped",
            BoundaryKind::Hinged => "hinged",
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "clamped" => Ok(BoundaryKind::Clamped),
            "hinged" => Ok(BoundaryKind::Hinged),
            other => Err(Error::InvalidArgument(format!("unknown boundary kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingOptions {
    /// Signed offset along the stable eigenvector.
    pub delta: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest backward span `|t|` before giving up.
    pub max_span: f64,
    /// Root tolerance on the stopping time.
    pub event_tol: f64,
    /// Upper bound on a single step; keeps the stored trajectory plottable.
    pub max_step: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            delta: -1e-4,
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_span: 10.0,
            event_tol: 1e-12,
            max_step: 0.05,
        }
    }
}

impl ShootingOptions {
    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta == 0.0 || !self.delta.is_finite() {
            return Err(Error::InvalidArgument(format!("delta must be finite and nonzero, got {}", self.delta)));
        }
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("max_span", self.max_span),
            ("event_tol", self.event_tol),
            ("max_step", self.max_step),
        ] {
            if !(v > 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub state: AsState,
}

/// Result of one shooting run.
#[derive(Debug, Clone)]
pub struct Solution {
    pub bc: BoundaryKind,
    pub lambda: f64,
    /// Signed backward span; negative.
    pub t_stop: f64,
    /// Accepted steps in integration order: `t` runs from 0 down to `t_stop`.
    pub trajectory: Vec<TrajectoryPoint>,
    pub options: ShootingOptions,
    dense: Vec<DenseSegment<4>>,
}

impl Solution {
    pub fn start_state(&self) -> AsState {
        self.trajectory[0].state
    }

    pub fn stop_state(&self) -> AsState {
        self.trajectory.last().expect("non-empty trajectory").state
    }

    /// Interpolated state for `t` in `[t_stop, 0]`.
    pub fn state_at(&self, t: f64) -> Option<AsState> {
        if !(t <= 0.0 && t >= self.t_stop) {
            return None;
        }
        // segments run with decreasing t
        let idx = self.dense.partition_point(|g| g.t1() > t);
        match self.dense.get(idx) {
            Some(seg) if seg.contains(t) => Some(AsState::from_array(seg.eval(t))),
            _ => Some(self.stop_state()),
        }
    }
}

/// Integrate from the tangent of the stable manifold backward until the
/// boundary surface of `bc` is crossed; `λ = 96/β` there.
pub fn integrate_backward(bc: BoundaryKind, opts: &ShootingOptions) -> Result<Solution> {
    opts.validate()?;
    let mode = stable_mode();
    let y0 = initial_state(opts.delta, &mode)?;
    let sys = AutonomousSystem::default();
    let ctl = StepControl {
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        max_step: opts.max_step,
        ..Default::default()
    };
    let mut stepper = Dopri5::new(|y: &[f64; 4]| sys.rhs_array(y), 0.0, y0.to_array(), -1.0, ctl)?;

    let mut trajectory = vec![TrajectoryPoint { t: 0.0, state: y0 }];
    let mut dense: Vec<DenseSegment<4>> = Vec::new();

    let (t_stop, stop_state) = loop {
        let t = stepper.t();
        let y = AsState::from_array(*stepper.y());
        let g = event_residual(&y, bc);
        let rate = event_rate(&y, bc);

        // Surfaces approached through a square-root singularity (hinged:
        // α → 0, w → ∞) are never crossed by an accepted step; finish with a
        // Newton step on the smooth event function once it is within tolerance.
        if rate != 0.0 {
            let dt = -g / rate;
            if dt <= 0.0 && dt.abs() <= opts.event_tol {
                break (t + dt, y);
            }
        }
        if t < -opts.max_span {
            return Err(Error::NoCrossing { max_span: opts.max_span, t_reached: t });
        }

        let seg = match stepper.step() {
            Ok(seg) => seg,
            // A run that ends on a singular surface of the system without
            // meeting the base never intersects it (the wrong branch of δ).
            Err(Error::StepFailure { .. } | Error::SingularElimination { .. })
                if leaving_domain(&y) =>
            {
                return Err(Error::NoCrossing { max_span: opts.max_span, t_reached: t });
            }
            Err(e) => return Err(e),
        };
        let y1 = AsState::from_array(*stepper.y());
        let g1 = event_residual(&y1, bc);
        if g1 == 0.0 || g.signum() != g1.signum() {
            let ts = refine_crossing(&seg, bc, opts.event_tol);
            let ys = AsState::from_array(seg.eval(ts));
            dense.push(seg);
            break (ts, ys);
        }
        dense.push(seg);
        trajectory.push(TrajectoryPoint { t: stepper.t(), state: y1 });
    };

    if trajectory.last().is_some_and(|p| p.t == t_stop) {
        trajectory.pop();
    }
    trajectory.push(TrajectoryPoint { t: t_stop, state: stop_state });

    if !(stop_state.beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "base reached with non-positive beta = {}",
            stop_state.beta
        )));
    }
    Ok(Solution {
        bc,
        lambda: 96.0 / stop_state.beta,
        t_stop,
        trajectory,
        options: *opts,
        dense,
    })
}

/// Near `αw = 0` or with an unbounded component the explicit system ceases to exist.
fn leaving_domain(y: &AsState) -> bool {
    let big = y.to_array().iter().any(|x| x.abs() > 1e3);
    big || (y.alpha * y.w).abs() < 1e-3
}

/// Illinois false position on the dense output of one step.
fn refine_crossing(seg: &DenseSegment<4>, bc: BoundaryKind, tol: f64) -> f64 {
    let g = |t: f64| event_residual(&AsState::from_array(seg.eval(t)), bc);
    let (mut a, mut b) = (seg.t0, seg.t1());
    let (mut ga, mut gb) = (g(a), g(b));
    if gb == 0.0 {
        return b;
    }
    let mut side = 0i8;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let mut c = (a * gb - b * ga) / (gb - ga);
        if !c.is_finite() || !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let gc = g(c);
        if gc == 0.0 {
            return c;
        }
        if gc.signum() == gb.signum() {
            b = c;
            gb = gc;
            if side == -1 {
                ga *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            ga = gc;
            if side == 1 {
                gb *= 0.5;
            }
            side = 1;
        }
    }
    if ga.abs() < gb.abs() { a } else { b }
}

/// `λ(δ)` for each offset. All offsets must share a sign; a failing run is
/// reported in its own entry.
pub fn lambda_sensitivity(
    bc: BoundaryKind,
    deltas: &[f64],
    base: &ShootingOptions,
) -> Result<Vec<(f64, Result<f64>)>> {
    if deltas.iter().any(|d| *d == 0.0 || !d.is_finite()) {
        return Err(Error::InvalidArgument("offsets must be finite and nonzero".into()));
    }
    if let Some(first) = deltas.first() {
        if deltas.iter().any(|d| d.signum() != first.signum()) {
            return Err(Error::InvalidArgument("offsets must all have the same sign".into()));
        }
    }
    Ok(deltas
        .iter()
        .map(|&d| (d, integrate_backward(bc, &base.with_delta(d)).map(|s| s.lambda)))
        .collect())
}

/// Extrapolated limit of `λ(δ)` as `δ → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub lambda: f64,
    /// Observed order in `|δ|`; `None` when the differences carry no trend
    /// above the integration noise and the finest value is returned.
    pub order: Option<f64>,
}

/// Richardson extrapolation over the three smallest offsets, which must form a
/// geometric sequence.
pub fn extrapolate_lambda(points: &[(f64, f64)]) -> Option<Extrapolation> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|&(d, l)| (d.abs(), l)).collect();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let finest = *pts.last()?;
    let fallback = Extrapolation { lambda: finest.1, order: None };
    if pts.len() < 3 {
        return Some(fallback);
    }
    let [(d1, l1), (d2, l2), (d3, l3)] = [pts[pts.len() - 3], pts[pts.len() - 2], pts[pts.len() - 1]];
    let r = d1 / d2;
    if !(r > 1.0) || ((d2 / d3) / r - 1.0).abs() > 1e-6 {
        return Some(fallback);
    }
    let (e1, e2) = (l1 - l2, l2 - l3);
    if e1 == 0.0 || e2 == 0.0 || e1.signum() != e2.signum() || e2.abs() >= e1.abs() {
        return Some(fallback);
    }
    let p = (e1 / e2).ln() / r.ln();
    Some(Extrapolation { lambda: l3 - e2 / (r.powf(p) - 1.0), order: Some(p) })
}
