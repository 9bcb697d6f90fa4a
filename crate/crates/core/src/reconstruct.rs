//! Physical profiles from a peeled solution.
//!
//! The base sits at `t′ = t − t_stop = 0` (`s = 1`); the start of the run maps
//! to `s_min = e^{t_stop}`. Below `s_min` the pure similarity solution is used.

use serde::{Deserialize, Serialize};

use crate::dynamics::AsState;
use crate::shooting::{BoundaryKind, Solution};
use crate::similarity::similarity_point_unchecked;
use crate::{Error, Result};

pub const DEFAULT_POINTS: usize = 400;
pub const DEFAULT_S_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub s: f64,
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    /// `θ_s`; carried so torque `a²θ_s` and `aθ_s²` stay accurate where `θ`
    /// itself is singular (hinged base).
    pub theta_s: f64,
    pub extended: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnProfile {
    pub bc: BoundaryKind,
    pub lambda: f64,
    pub samples: Vec<ProfileSample>,
    /// Smallest `s` covered by the computed trajectory.
    pub s_min: f64,
    pub extended: bool,
}

fn peeled_from_state(lambda: f64, s: f64, y: &AsState, extended: bool) -> ProfileSample {
    let sim = similarity_point_unchecked(lambda, s);
    ProfileSample {
        s,
        a: sim.a * y.alpha,
        b: sim.b * y.beta,
        theta: sim.theta * y.tau,
        // θ_s = −s⁻³ w
        theta_s: -y.w / (s * s * s),
        extended,
    }
}

/// Physical values at one arclength `s ∈ (0, 1]`.
pub fn evaluate(solution: &Solution, s: f64) -> Result<ProfileSample> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidArgument(format!("s must lie in (0, 1], got {s}")));
    }
    let t = solution.t_stop - s.ln();
    if t > 0.0 {
        return Ok(peeled_from_state(solution.lambda, s, &AsState::CRITICAL_POINT, true));
    }
    let y = solution.state_at(t).expect("t within trajectory span");
    Ok(peeled_from_state(solution.lambda, s, &y, false))
}

/// `n` geometrically spaced points from `s_floor` to exactly 1.
pub fn geometric_grid(n: usize, s_floor: f64) -> Vec<f64> {
    let l = s_floor.ln();
    let mut g: Vec<f64> = (0..n).map(|i| (l * (1.0 - i as f64 / (n - 1) as f64)).exp()).collect();
    g[0] = s_floor;
    g[n - 1] = 1.0;
    g
}

/// Grid coordinate `ln s − 3(1 − s)^{1/3}`: logarithmic toward the tip and
/// cube-root toward the base, where the hinged optimum has `(1 − s)^{1/3}`
/// behaviour.
pub fn graded_coordinate(s: f64) -> f64 {
    s.ln() - 3.0 * (1.0 - s).max(0.0).cbrt()
}

/// `ds/dx` for [`graded_coordinate`].
pub fn graded_jacobian(s: f64) -> f64 {
    let u2 = (1.0 - s).max(0.0).cbrt().powi(2);
    s * u2 / (u2 + s)
}

/// Integration and interpolation variable for a set of samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    Log,
    Graded,
}

impl Coordinate {
    /// Whichever coordinate the samples are closer to uniform in, judged by
    /// the largest step relative to the total range.
    pub fn for_grid(s: &[f64]) -> Self {
        let worst = |c: Coordinate| {
            let x: Vec<f64> = s.iter().map(|&v| c.x(v)).collect();
            let span = x[x.len() - 1] - x[0];
            x.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max) / span
        };
        if worst(Coordinate::Graded) < worst(Coordinate::Log) {
            Coordinate::Graded
        } else {
            Coordinate::Log
        }
    }

    pub fn x(self, s: f64) -> f64 {
        match self {
            Coordinate::Log => s.ln(),
            Coordinate::Graded => graded_coordinate(s),
        }
    }

    /// `ds/dx`.
    pub fn jacobian(self, s: f64) -> f64 {
        match self {
            Coordinate::Log => s,
            Coordinate::Graded => graded_jacobian(s),
        }
    }
}

/// `n` points from `s_floor` to exactly 1, uniform in [`graded_coordinate`].
pub fn graded_grid(n: usize, s_floor: f64) -> Vec<f64> {
    let x0 = graded_coordinate(s_floor);
    let mut g: Vec<f64> = (0..n)
        .map(|i| {
            let target = x0 * (1.0 - i as f64 / (n - 1) as f64);
            // bisection in ln s; the coordinate is increasing
            let (mut lo, mut hi) = (s_floor.ln(), 0.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if graded_coordinate(mid.exp()) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (0.5 * (lo + hi)).exp()
        })
        .collect();
    g[0] = s_floor;
    g[n - 1] = 1.0;
    g
}

/// Sample the solution at `n_points` arclengths from [`graded_grid`].
pub fn profile(solution: &Solution, n_points: usize, s_floor: f64) -> Result<ColumnProfile> {
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 points, got {n_points}")));
    }
    if !(s_floor > 0.0 && s_floor < 1.0) {
        return Err(Error::InvalidArgument(format!("s_floor must lie in (0, 1), got {s_floor}")));
    }
    let samples = graded_grid(n_points, s_floor)
        .into_iter()
        .map(|s| evaluate(solution, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(ColumnProfile {
        bc: solution.bc,
        lambda: solution.lambda,
        extended: samples.iter().any(|p| p.extended),
        samples,
        s_min: solution.t_stop.exp(),
    })
}

impl ColumnProfile {
    /// Build from externally supplied samples, checking ordering. Missing
    /// `θ_s` (NaN) is reconstructed by differencing the peeled angle.
    pub fn from_samples(
        bc: BoundaryKind,
        lambda: f64,
        mut samples: Vec<ProfileSample>,
    ) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidArgument("profile needs at least 3 samples".into()));
        }
        if !samples.windows(2).all(|w| w[1].s > w[0].s) || samples[0].s <= 0.0 {
            return Err(Error::InvalidArgument("s must be positive and strictly increasing".into()));
        }
        if (samples.last().unwrap().s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("last sample must be at s = 1".into()));
        }
        if samples.iter().any(|p| p.theta_s.is_nan()) {
            let s: Vec<f64> = samples.iter().map(|p| p.s).collect();
            // the clamped angle is smooth in ln s up to the base
            let coord = match bc {
                BoundaryKind::Clamped => Coordinate::Log,
                BoundaryKind::Hinged => Coordinate::for_grid(&s),
            };
            let x: Vec<f64> = s.iter().map(|&v| coord.x(v)).collect();
            let tau: Vec<f64> = samples.iter().map(|p| p.theta * p.s * p.s).collect();
            let dtau = derivative5(&x, &tau);
            for (p, d) in samples.iter_mut().zip(dtau) {
                // θ = s⁻²τ ⇒ θ_s = s⁻²τ_s − 2s⁻³τ
                let tau_s = d / coord.jacobian(p.s);
                p.theta_s = (tau_s - 2.0 * p.theta * p.s) / (p.s * p.s);
            }
            let n = samples.len();
            if !samples[n - 1].theta_s.is_finite() && n >= 4 {
                // aθ_s² stays finite at either base; extrapolate it quadratically
                let bend = |q: &ProfileSample| q.a * q.theta_s * q.theta_s;
                let (q1, q2, q3) = (&samples[n - 4], &samples[n - 3], &samples[n - 2]);
                let (x1, x2, x3, x) = (coord.x(q1.s), coord.x(q2.s), coord.x(q3.s), x[n - 1]);
                let l1 = (x - x2) * (x - x3) / ((x1 - x2) * (x1 - x3));
                let l2 = (x - x1) * (x - x3) / ((x2 - x1) * (x2 - x3));
                let l3 = (x - x1) * (x - x2) / ((x3 - x1) * (x3 - x2));
                let end = (l1 * bend(q1) + l2 * bend(q2) + l3 * bend(q3)).max(0.0);
                let sign = q3.theta_s.signum();
                let last = &mut samples[n - 1];
                last.theta_s = sign * (end / last.a).sqrt();
            }
        }
        let s_min = samples.iter().find(|p| !p.extended).map_or(1.0, |p| p.s);
        Ok(Self {
            bc,
            lambda,
            extended: samples.iter().any(|p| p.extended),
            samples,
            s_min,
        })
    }

    pub fn s_values(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.s).collect()
    }

    pub fn coordinate(&self) -> Coordinate {
        Coordinate::for_grid(&self.s_values())
    }

    /// Checks positivity, monotonicity of `b`, and `b(1) = 1`.
    pub fn check_invariants(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if let Some(p) = self.samples.iter().find(|p| !(p.a > 0.0) || !(p.b > 0.0)) {
            return bad(format!("non-positive a or b at s = {}", p.s));
        }
        if self.samples.windows(2).any(|w| w[1].b < w[0].b) {
            return bad("b decreases".into());
        }
        let b1 = self.samples.last().unwrap().b;
        if (b1 - 1.0).abs() > 1e-6 {
            return bad(format!("b(1) = {b1}, expected 1"));
        }
        Ok(())
    }

    /// Area by interpolation of the peeled value `α = 24a/(λs³)`.
    pub fn area_at(&self, s: f64) -> f64 {
        let c = self.lambda / 24.0;
        self.peeled_interp(s, |p| p.a / (c * p.s.powi(3))) * c * s.powi(3)
    }

    /// Volume above `s`, interpolated through `β = 96b/(λs⁴)`.
    pub fn volume_above_at(&self, s: f64) -> f64 {
        let c = self.lambda / 96.0;
        self.peeled_interp(s, |p| p.b / (c * p.s.powi(4))) * c * s.powi(4)
    }

    fn peeled_interp(&self, s: f64, f: impl Fn(&ProfileSample) -> f64) -> f64 {
        let c = self.coordinate();
        let x: Vec<f64> = self.samples.iter().map(|p| c.x(p.s)).collect();
        let y: Vec<f64> = self.samples.iter().map(f).collect();
        hermite(&x, &y, c.x(s))
    }
}

/// Three-point derivative on a non-uniform grid (one-sided at the ends).
pub(crate) fn derivative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let d3 = |i0: usize, i: usize| {
        let (x0, x1, x2) = (x[i0], x[i0 + 1], x[i0 + 2]);
        let (y0, y1, y2) = (y[i0], y[i0 + 1], y[i0 + 2]);
        let xi = x[i];
        y0 * (2.0 * xi - x1 - x2) / ((x0 - x1) * (x0 - x2))
            + y1 * (2.0 * xi - x0 - x2) / ((x1 - x0) * (x1 - x2))
            + y2 * (2.0 * xi - x0 - x1) / ((x2 - x0) * (x2 - x1))
    };
    (0..n).map(|i| d3(i.saturating_sub(1).min(n - 3), i)).collect()
}

/// First derivative from the five nearest samples (Fornberg weights).
pub(crate) fn derivative5(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 5 {
        return derivative(x, y);
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(2).min(n - 5);
            let w = fornberg_first(x[i], &x[lo..lo + 5]);
            w.iter().zip(&y[lo..lo + 5]).map(|(w, y)| w * y).sum()
        })
        .collect()
}

/// Weights of the first derivative at `z` on the nodes `x`.
fn fornberg_first(z: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    // c[j][k]: weight of node j for derivative order k
    let mut c = vec![[0.0f64; 2]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|w| w[1]).collect()
}

/// Cubic Hermite interpolation with finite-difference slopes; constant
/// extrapolation outside the data.
fn hermite(x: &[f64], y: &[f64], xq: f64) -> f64 {
    let n = x.len();
    if xq <= x[0] {
        return y[0];
    }
    if xq >= x[n - 1] {
        return y[n - 1];
    }
    let i = x.partition_point(|v| *v <= xq).saturating_sub(1).min(n - 2);
    let slope = |k: usize| {
        if k == 0 {
            (y[1] - y[0]) / (x[1] - x[0])
        } else if k == n - 1 {
            (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2])
        } else {
            let (h0, h1) = (x[k] - x[k - 1], x[k + 1] - x[k]);
            let (d0, d1) = ((y[k] - y[k - 1]) / h0, (y[k + 1] - y[k]) / h1);
            (h1 * d0 + h0 * d1) / (h0 + h1)
        }
    };
    let h = x[i + 1] - x[i];
    let t = (xq - x[i]) / h;
    let (t2, t3) = (t * t, t * t * t);
    (2.0 * t3 - 3.0 * t2 + 1.0) * y[i]
        + (t3 - 2.0 * t2 + t) * h * slope(i)
        + (-2.0 * t3 + 3.0 * t2) * y[i + 1]
        + (t3 - t2) * h * slope(i + 1)
}

/// Local power-law exponent of the first two samples, clipped to `[0, 10]`.
pub(crate) fn tip_exponent(s0: f64, s1: f64, f0: f64, f1: f64) -> f64 {
    let k = (f1 / f0).abs().ln() / (s1 / s0).ln();
    if k.is_finite() { k.clamp(0.0, 10.0) } else { 0.0 }
}

/// `∫₀¹ a ds`: Simpson in the profile's [`Coordinate`] above the first
/// sample, power-law tail below.
pub fn volume(profile: &ColumnProfile) -> f64 {
    let p = &profile.samples;
    let c = profile.coordinate();
    let x: Vec<f64> = p.iter().map(|q| c.x(q.s)).collect();
    let f: Vec<f64> = p.iter().map(|q| q.a * c.jacobian(q.s)).collect();
    let k = tip_exponent(p[0].s, p[1].s, p[0].a, p[1].a);
    crate::quadrature::simpson(&x, &f) + p[0].a * p[0].s / (k + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    pub density: f64,
    pub gravity: f64,
    pub youngs_modulus: f64,
    /// Cross-section shape constant in `EI = cEa²`.
    pub shape_constant: f64,
    pub volume: f64,
}

impl MaterialSpec {
    pub fn validate(&self) -> Result<()> {
        let all = [self.density, self.gravity, self.youngs_modulus, self.shape_constant, self.volume];
        if all.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("material parameters must be positive: {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionalDesign {
    pub height: f64,
    /// Physical arclength from the tip.
    pub arclength: Vec<f64>,
    pub area: Vec<f64>,
}

/// Height from `λ = ρgL³/(VcE)`; areas scale by `V/L`.
pub fn dimensional_design(profile: &ColumnProfile, mat: &MaterialSpec) -> Result<DimensionalDesign> {
    mat.validate()?;
    let height = (profile.lambda * mat.shape_constant * mat.youngs_modulus * mat.volume
        / (mat.density * mat.gravity))
        .cbrt();
    let unit_area = mat.volume / height;
    Ok(DimensionalDesign {
        height,
        arclength: profile.samples.iter().map(|p| height * p.s).collect(),
        area: profile.samples.iter().map(|p| unit_area * p.a).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shooting::{integrate_backward, ShootingOptions};
    use approx::assert_abs_diff_eq;

    fn solved(bc: BoundaryKind) -> Solution {
        integrate_backward(bc, &ShootingOptions::default()).unwrap()
    }

    #[test]
    fn clamped_profile_basics() {
        let sol = solved(BoundaryKind::Clamped);
        let p = profile(&sol, DEFAULT_POINTS, DEFAULT_S_FLOOR).unwrap();
        p.check_invariants().unwrap();
        let last = p.samples.last().unwrap();
        assert_eq!(last.s, 1.0);
        assert!(last.theta.abs() < 1e-10);
        assert_abs_diff_eq!(last.a, sol.lambda / 24.0 * sol.stop_state().alpha, epsilon = 1e-12);
        assert_abs_diff_eq!(last.b, 1.0, epsilon = 1e-12);
        assert!(p.extended);
        assert_abs_diff_eq!(p.s_min, (-1.7114f64).exp(), epsilon = 1e-3);
        for q in p.samples.iter().filter(|q| q.extended) {
            assert!(q.s < p.s_min);
            assert_abs_diff_eq!(q.a / q.s.powi(3), sol.lambda / 24.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn volume_is_one() {
        for bc in BoundaryKind::ALL {
            let p = profile(&solved(bc), DEFAULT_POINTS, DEFAULT_S_FLOOR).unwrap();
            assert_abs_diff_eq!(volume(&p), 1.0, epsilon = 1e-3);
        }
    }

    #[test]
    fn volume_of_similarity_column_and_linearity() {
        // λ = 96: a = 4s³, ∫ = 1
        let samples: Vec<ProfileSample> = geometric_grid(300, 1e-3)
            .into_iter()
            .map(|s| {
                let v = similarity_point_unchecked(96.0, s);
                ProfileSample { s, a: v.a, b: v.b, theta: v.theta, theta_s: v.theta_s, extended: true }
            })
            .collect();
        let p = ColumnProfile::from_samples(BoundaryKind::Clamped, 96.0, samples).unwrap();
        assert_abs_diff_eq!(volume(&p), 1.0, epsilon = 1e-6);
        let mut doubled = p.clone();
        doubled.samples.iter_mut().for_each(|q| q.a *= 2.0);
        assert_abs_diff_eq!(volume(&doubled), 2.0 * volume(&p), epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_arguments() {
        let sol = solved(BoundaryKind::Clamped);
        assert!(profile(&sol, 1, 1e-3).is_err());
        assert!(profile(&sol, 10, 1.0).is_err());
        assert!(profile(&sol, 10, 0.0).is_err());
        assert!(evaluate(&sol, 0.0).is_err());
    }

    /// Finite differences need spacing well above the dense-output noise, so
    /// these checks sample geometrically rather than on the graded grid.
    fn geometric_profile(sol: &Solution, n: usize, s_floor: f64) -> ColumnProfile {
        let samples = geometric_grid(n, s_floor).into_iter().map(|s| evaluate(sol, s).unwrap()).collect();
        ColumnProfile::from_samples(sol.bc, sol.lambda, samples).unwrap()
    }

    #[test]
    fn b_derivative_is_a() {
        let sol = solved(BoundaryKind::Clamped);
        let p = geometric_profile(&sol, 2000, 0.05);
        let s = p.s_values();
        let b: Vec<f64> = p.samples.iter().map(|q| q.b).collect();
        let db = derivative(&s, &b);
        for (i, q) in p.samples.iter().enumerate().skip(1).take(p.samples.len() - 2) {
            if p.samples[i - 1].extended != p.samples[i + 1].extended {
                continue;
            }
            assert!((db[i] - q.a).abs() < 1e-4 * q.a, "s = {}: {} vs {}", q.s, db[i], q.a);
        }
    }

    /// Differences of the stored torque and `aθ_s²` satisfy the column
    /// equations on the sample grid. The hinged base is a weak singularity
    /// (`τ − τ* ∝ (1−s)^{2/3}`) and is left out.
    #[test]
    fn column_equations_hold_on_samples() {
        for bc in BoundaryKind::ALL {
            let opts = ShootingOptions { rel_tol: 1e-10, abs_tol: 1e-12, ..Default::default() };
            let sol = integrate_backward(bc, &opts).unwrap();
            let p = geometric_profile(&sol, 4000, 0.05);
            let s_max = if bc == BoundaryKind::Hinged { 0.95 } else { 1.0 };
            let s = p.s_values();
            let torque: Vec<f64> = p.samples.iter().map(|q| q.a * q.a * q.theta_s).collect();
            let bend: Vec<f64> = p.samples.iter().map(|q| q.a * q.theta_s * q.theta_s).collect();
            let dt = derivative(&s, &torque);
            let dbend = derivative(&s, &bend);
            let lam = p.lambda;
            for i in 1..s.len() - 2 {
                if p.samples[i - 1].extended != p.samples[i + 1].extended || s[i] > s_max {
                    continue;
                }
                let q = &p.samples[i];
                // each equation scaled by the size of its own terms
                let r1 = (dt[i] + lam * q.b * q.theta) / (lam * q.b * q.theta.abs()).max(torque[i].abs() / q.s);
                let r2 = (2.0 * dbend[i] + lam * q.theta * q.theta) / (lam * q.theta * q.theta).max(bend[i] / q.s);
                assert!(r1.abs() < 1e-4, "{bc} s = {}: r1 = {r1}", q.s);
                assert!(r2.abs() < 1e-4, "{bc} s = {}: r2 = {r2}", q.s);
            }
        }
    }

    #[test]
    fn five_point_derivative_is_exact_for_quartics() {
        let x: Vec<f64> = (0..9).map(|i| (i as f64 * 0.37).powf(1.4)).collect();
        let y: Vec<f64> = x.iter().map(|x| x.powi(4) - 2.0 * x * x + x).collect();
        for (xi, d) in x.iter().zip(derivative5(&x, &y)) {
            assert_abs_diff_eq!(d, 4.0 * xi.powi(3) - 4.0 * xi + 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn reconstructed_angle_slope() {
        for bc in BoundaryKind::ALL {
            let p = profile(&solved(bc), 400, 1e-3).unwrap();
            let mut stripped = p.samples.clone();
            stripped.iter_mut().for_each(|q| q.theta_s = f64::NAN);
            let q = ColumnProfile::from_samples(bc, p.lambda, stripped).unwrap();
            let peak = p.samples.iter().map(|x| (x.a * x.a * x.theta_s).abs()).fold(0.0, f64::max);
            for (x, y) in p.samples.iter().zip(&q.samples) {
                // compare torques, which stay finite at the hinged base
                let (tx, ty) = (x.a * x.a * x.theta_s, y.a * y.a * y.theta_s);
                assert!((tx - ty).abs() < 1e-4 * peak, "{bc} s = {}: {tx} vs {ty}", x.s);
            }
        }
    }

    #[test]
    fn clamped_angle_is_monotone() {
        let sol = solved(BoundaryKind::Clamped);
        let p = profile(&sol, 400, 1e-3).unwrap();
        let computed: Vec<_> = p.samples.iter().filter(|q| !q.extended).collect();
        assert!(computed.windows(2).all(|w| w[1].theta < w[0].theta));
    }

    #[test]
    fn interpolation_reproduces_samples() {
        let sol = solved(BoundaryKind::Clamped);
        let p = profile(&sol, 400, 1e-3).unwrap();
        for s in [0.01, 0.2, 0.5, 0.77, 0.999] {
            let exact = evaluate(&sol, s).unwrap();
            assert_abs_diff_eq!(p.area_at(s), exact.a, epsilon = 1e-4 * exact.a.max(1e-3));
            assert_abs_diff_eq!(p.volume_above_at(s), exact.b, epsilon = 1e-4 * exact.b.max(1e-3));
        }
    }

    #[test]
    fn dimensional_scaling() {
        let sol = solved(BoundaryKind::Clamped);
        let mut p = profile(&sol, 50, 1e-3).unwrap();
        p.lambda = 1.0;
        let unit = MaterialSpec { density: 2.0, gravity: 0.5, youngs_modulus: 1.0, shape_constant: 1.0, volume: 1.0 };
        let d = dimensional_design(&p, &unit).unwrap();
        assert_abs_diff_eq!(d.height, 1.0, epsilon = 1e-15);
        let twice = MaterialSpec { volume: 2.0, ..unit };
        let d2 = dimensional_design(&p, &twice).unwrap();
        assert_abs_diff_eq!(d2.height, 2f64.cbrt(), epsilon = 1e-14);
        assert!(dimensional_design(&p, &MaterialSpec { density: 0.0, ..unit }).is_err());
    }
}
