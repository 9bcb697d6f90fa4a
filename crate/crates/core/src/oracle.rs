//! Independent check of a column shape.
//!
//! The buckling load of a given area function is recomputed from the
//! Sturm–Liouville problem `−(a²θ′)′ = λ b θ` by a symmetric finite-volume
//! discretization on a grid graded toward the tip, with the flux condition
//! `a²θ′ = 0` imposed at the first node `s₀ > 0`. Nothing here touches the
//! autonomous system or the shooting path.

use serde::{Deserialize, Serialize};

use crate::quadrature::cumulative_quadratic;
use crate::reconstruct::{graded_grid, tip_exponent, ColumnProfile};
use crate::shooting::BoundaryKind;
use crate::{Error, Result};

/// Tip cut-off for the discrete problem. Near the optimum `θ²b` tends to a
/// constant at the tip, so the mass dropped below the first node scales with
/// this value.
pub const DEFAULT_S_FLOOR: f64 = 1e-5;

/// Smallest node count accepted by [`sturm_liouville_lambda`].
pub const MIN_INTERVALS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteShape {
    pub grid: Vec<f64>,
    pub a_values: Vec<f64>,
    /// `∫₀ˢ a` at the nodes.
    pub b_values: Vec<f64>,
}

impl DiscreteShape {
    pub fn new(grid: Vec<f64>, a_values: Vec<f64>, b_values: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        if n < 3 || a_values.len() != n || b_values.len() != n {
            return Err(Error::InvalidArgument(format!(
                "grid/a/b lengths {}/{}/{} (need equal, >= 3)",
                n,
                a_values.len(),
                b_values.len()
            )));
        }
        if !(grid[0] > 0.0) || !grid.windows(2).all(|w| w[1] > w[0]) || grid[n - 1] > 1.0 {
            return Err(Error::InvalidArgument("grid must increase strictly within (0, 1]".into()));
        }
        if a_values.iter().any(|a| !(*a >= 0.0)) {
            return Err(Error::InvalidArgument("area must be non-negative".into()));
        }
        if b_values.iter().any(|b| !(*b > 0.0)) || b_values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument("b must be positive and non-decreasing".into()));
        }
        Ok(Self { grid, a_values, b_values })
    }

    /// `n` intervals on the graded grid from `s_floor` to 1.
    pub fn graded_grid(n: usize, s_floor: f64) -> Vec<f64> {
        graded_grid(n + 1, s_floor)
    }

    pub fn from_fn(grid: Vec<f64>, a: impl Fn(f64) -> f64, b: impl Fn(f64) -> f64) -> Result<Self> {
        let av = grid.iter().map(|&s| a(s)).collect();
        let bv = grid.iter().map(|&s| b(s)).collect();
        Self::new(grid, av, bv)
    }

    /// `a ≡ 1`, `b = s`.
    pub fn uniform(n: usize, s_floor: f64) -> Result<Self> {
        Self::from_fn(Self::graded_grid(n, s_floor), |_| 1.0, |s| s)
    }

    /// Resample a profile onto a graded grid of `n` intervals. `b` is rebuilt
    /// from the resampled area so that it stays consistent with [`Self::perturbed`].
    pub fn from_profile(profile: &ColumnProfile, n: usize, s_floor: f64) -> Result<Self> {
        let grid = Self::graded_grid(n, s_floor);
        let a: Vec<f64> = grid.iter().map(|&s| profile.area_at(s)).collect();
        let b0 = profile.volume_above_at(grid[0]);
        let shape = Self { grid, a_values: a, b_values: Vec::new() };
        let b = shape.cumulative(&shape.a_values).into_iter().map(|v| v - shape.tip(&shape.a_values) + b0).collect();
        Self::new(shape.grid, shape.a_values, b)
    }

    pub fn intervals(&self) -> usize {
        self.grid.len() - 1
    }

    /// `∫₀¹ f` for nodal values `f` that behave like `a` near the tip.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        *self.cumulative(f).last().unwrap()
    }

    /// `∫₀^{s₀} f`, assuming `f` follows the local power law of `a`.
    fn tip(&self, f: &[f64]) -> f64 {
        let g = &self.grid;
        let k = tip_exponent(g[0], g[1], self.a_values[0], self.a_values[1]);
        f[0] * g[0] / (k + 1.0)
    }

    fn cumulative(&self, f: &[f64]) -> Vec<f64> {
        let tip = self.tip(f);
        cumulative_quadratic(&self.grid, f).into_iter().map(|v| v + tip).collect()
    }

    /// Zero-mean perturbation `a·(φ − c)`, normalized to unit `∫|δa|`.
    pub fn volume_preserving_direction(&self, phi: impl Fn(f64) -> f64) -> Vec<f64> {
        let aphi: Vec<f64> = self.grid.iter().zip(&self.a_values).map(|(&s, &a)| a * phi(s)).collect();
        let c = self.integrate(&aphi) / self.integrate(&self.a_values);
        let d: Vec<f64> = aphi.iter().zip(&self.a_values).map(|(x, a)| x - c * a).collect();
        let norm = self.integrate(&d.iter().map(|x| x.abs()).collect::<Vec<_>>());
        d.into_iter().map(|x| x / norm).collect()
    }

    /// `a + ε·δa` with `b` updated by the same quadrature.
    pub fn perturbed(&self, direction: &[f64], eps: f64) -> Result<Self> {
        if direction.len() != self.grid.len() {
            return Err(Error::InvalidArgument("direction length does not match grid".into()));
        }
        let db = self.cumulative(direction);
        let a: Vec<f64> = self.a_values.iter().zip(direction).map(|(a, d)| a + eps * d).collect();
        let b: Vec<f64> = self.b_values.iter().zip(&db).map(|(b, d)| b + eps * d).collect();
        if a.iter().any(|x| !(*x > 0.0)) || b.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::InvalidArgument(format!("perturbation with eps = {eps} leaves a non-positive shape")));
        }
        Self::new(self.grid.clone(), a, b)
    }
}

/// Tridiagonal stiffness `K` and diagonal mass `M` of `Kθ = λMθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub mass: Vec<f64>,
}

impl Pencil {
    pub fn assemble(shape: &DiscreteShape, bc: BoundaryKind) -> Self {
        let s = &shape.grid;
        let a = &shape.a_values;
        let n = shape.intervals();
        // a² evaluated at half-nodes
        let flux: Vec<f64> = (0..n)
            .map(|i| {
                let ah = 0.5 * (a[i] + a[i + 1]);
                ah * ah / (s[i + 1] - s[i])
            })
            .collect();
        let unknowns = match bc {
            BoundaryKind::Clamped => n,
            BoundaryKind::Hinged => n + 1,
        };
        let mut diag = vec![0.0; unknowns];
        let mut off = vec![0.0; unknowns - 1];
        let mut mass = vec![0.0; unknowns];
        for i in 0..unknowns {
            let left = if i > 0 { flux[i - 1] } else { 0.0 };
            let right = if i < n { flux[i] } else { 0.0 };
            diag[i] = left + right;
            if i + 1 < unknowns {
                off[i] = -flux[i];
            }
            let lo = if i > 0 { 0.5 * (s[i] + s[i - 1]) } else { s[0] };
            let hi = if i < n { 0.5 * (s[i] + s[i + 1]) } else { s[n] };
            mass[i] = shape.b_values[i] * (hi - lo);
        }
        Self { diag, off, mass }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply_stiffness(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    pub fn rayleigh_quotient(&self, x: &[f64]) -> f64 {
        let kx = self.apply_stiffness(x);
        let num: f64 = kx.iter().zip(x).map(|(a, b)| a * b).sum();
        let den: f64 = x.iter().zip(&self.mass).map(|(a, m)| a * a * m).sum();
        num / den
    }

    /// Solve `K x = r` over the first `m` unknowns (Thomas algorithm; `K` is
    /// symmetric positive definite on any proper leading block).
    fn solve_leading(&self, r: &[f64], m: usize) -> Result<Vec<f64>> {
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        let mut beta = self.diag[0];
        if !(beta > 0.0) {
            return Err(Error::Eigen("singular stiffness matrix".into()));
        }
        d[0] = r[0] / beta;
        for i in 1..m {
            c[i - 1] = self.off[i - 1] / beta;
            beta = self.diag[i] - self.off[i - 1] * c[i - 1];
            if !(beta > 0.0) {
                return Err(Error::Eigen(format!("non-positive pivot at row {i}")));
            }
            d[i] = (r[i] - self.off[i - 1] * d[i - 1]) / beta;
        }
        for i in (0..m - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }
}

/// Lowest (nonzero) eigenpair on the full grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub lambda: f64,
    /// Eigenfunction at every grid node (zero at the base for the clamped case).
    pub theta: Vec<f64>,
}

fn project_out_constant(x: &mut [f64], mass: &[f64]) {
    let mean = x.iter().zip(mass).map(|(a, m)| a * m).sum::<f64>() / mass.iter().sum::<f64>();
    x.iter_mut().for_each(|v| *v -= mean);
}

/// Inverse iteration with shift 0. For the hinged pencil the constant mode
/// spans the kernel of `K`; iterates are kept `M`-orthogonal to it and the
/// singular system is solved with the last unknown pinned.
pub fn lowest_mode(shape: &DiscreteShape, bc: BoundaryKind) -> Result<Mode> {
    let pencil = Pencil::assemble(shape, bc);
    let n = pencil.len();
    let hinged = bc == BoundaryKind::Hinged;
    let mut x: Vec<f64> = match bc {
        BoundaryKind::Clamped => vec![1.0; n],
        BoundaryKind::Hinged => shape.grid.iter().map(|s| 1.0 - 2.0 * s).collect(),
    };
    if hinged {
        project_out_constant(&mut x, &pencil.mass);
    }
    let mut lambda = pencil.rayleigh_quotient(&x);
    let mut converged = false;
    for _ in 0..20_000 {
        let r: Vec<f64> = x.iter().zip(&pencil.mass).map(|(a, m)| a * m).collect();
        let mut y = if hinged {
            let mut y = pencil.solve_leading(&r, n - 1)?;
            y.push(0.0);
            project_out_constant(&mut y, &pencil.mass);
            y
        } else {
            pencil.solve_leading(&r, n)?
        };
        let norm = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Eigen("inverse iteration collapsed".into()));
        }
        y.iter_mut().for_each(|v| *v /= norm);
        let next = pencil.rayleigh_quotient(&y);
        x = y;
        if (next - lambda).abs() <= 1e-13 * next.abs() {
            lambda = next;
            converged = true;
            break;
        }
        lambda = next;
    }
    if !converged {
        return Err(Error::Eigen("inverse iteration did not converge".into()));
    }
    // backward error: each row's residual against the size of its own terms
    let kx = pencil.apply_stiffness(&x);
    let worst = (0..n)
        .map(|i| {
            let mut size = (pencil.diag[i] * x[i]).abs() + (lambda * pencil.mass[i] * x[i]).abs();
            if i > 0 {
                size += (pencil.off[i - 1] * x[i - 1]).abs();
            }
            if i + 1 < n {
                size += (pencil.off[i] * x[i + 1]).abs();
            }
            let r = (kx[i] - lambda * pencil.mass[i] * x[i]).abs();
            if size > 0.0 { r / size } else { 0.0 }
        })
        .fold(0.0f64, f64::max);
    if worst > 1e-6 {
        return Err(Error::Eigen(format!("relative eigen-residual {worst:e}")));
    }
    if !hinged {
        x.push(0.0);
    }
    Ok(Mode { lambda, theta: x })
}

/// Smallest buckling load of the shape (smallest nonzero for hinged).
pub fn sturm_liouville_lambda(shape: &DiscreteShape, bc: BoundaryKind) -> Result<f64> {
    if shape.intervals() < MIN_INTERVALS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_INTERVALS} intervals, got {}",
            shape.intervals()
        )));
    }
    lowest_mode(shape, bc).map(|m| m.lambda)
}

/// Central difference `(λ[a+εδa] − λ[a−εδa]) / 2ε` along a volume-preserving
/// direction.
pub fn stationarity_check(
    shape: &DiscreteShape,
    bc: BoundaryKind,
    direction: &[f64],
    eps: f64,
) -> Result<f64> {
    if eps == 0.0 || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("step must be finite and nonzero, got {eps}")));
    }
    let total = shape.integrate(direction);
    let size = shape.integrate(&direction.iter().map(|d| d.abs()).collect::<Vec<_>>());
    if total.abs() > 1e-9 * size.max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidArgument(format!("direction changes the volume by {total:e}")));
    }
    let plus = sturm_liouville_lambda(&shape.perturbed(direction, eps)?, bc)?;
    let minus = sturm_liouville_lambda(&shape.perturbed(direction, -eps)?, bc)?;
    Ok((plus - minus) / (2.0 * eps))
}

/// Cumulative `∫ f ds` over the samples, integrated in the profile's
/// coordinate.
fn profile_cumulative(profile: &ColumnProfile, f: impl Fn(usize) -> f64) -> (Vec<f64>, f64) {
    let p = &profile.samples;
    let c = profile.coordinate();
    let (x, g): (Vec<f64>, Vec<f64>) = (0..p.len())
        .map(|i| {
            let s = p[i].s;
            (c.x(s), f(i) * c.jacobian(s))
        })
        .unzip();
    let k = tip_exponent(p[0].s, p[1].s, f(0), f(1));
    let tip = f(0) * p[0].s / (k + 1.0);
    (cumulative_quadratic(&x, &g), tip)
}

/// `F(s) = 2aθ_s² − λ∫_s¹θ²` at each sample, and `C = λ∫₀¹θ²b`.
pub fn optimality_curve(profile: &ColumnProfile) -> (Vec<(f64, f64)>, f64) {
    let p = &profile.samples;
    let lam = profile.lambda;
    let (th2, _) = profile_cumulative(profile, |i| p[i].theta * p[i].theta);
    let total_th2 = *th2.last().unwrap();
    let (th2b, tip) = profile_cumulative(profile, |i| p[i].theta * p[i].theta * p[i].b);
    let c = lam * (th2b.last().unwrap() + tip);
    let curve = p
        .iter()
        .zip(&th2)
        .map(|(q, cum)| (q.s, 2.0 * q.a * q.theta_s * q.theta_s - lam * (total_th2 - cum)))
        .collect();
    (curve, c)
}

fn relative_gap(x: f64, scale: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        (x / scale).abs()
    }
}

/// Lower end of the window where the optimality identity is tested; nearer
/// the tip `F` is a difference of two `s⁻³` terms.
pub const OPTIMALITY_WINDOW: f64 = 0.2;

/// `max |F(s) − C| / |C|` over `s ∈ [0.2, 1]`, with the Lagrange multiplier
/// equal to `λ`.
pub fn optimality_residual(profile: &ColumnProfile) -> f64 {
    let (curve, c) = optimality_curve(profile);
    curve
        .iter()
        .filter(|(s, _)| *s >= OPTIMALITY_WINDOW)
        .map(|(_, f)| relative_gap(f - c, c))
        .fold(0.0, f64::max)
}

pub const TORQUE_WINDOW: f64 = 0.05;

/// Elastic torque `a²θ_s` and gravity torque `λ∫₀ˢθb` at each sample; they
/// cancel for a solution of the buckling equation.
pub fn torque_balance(profile: &ColumnProfile) -> Vec<(f64, f64, f64)> {
    let p = &profile.samples;
    let (cum, tip) = profile_cumulative(profile, |i| p[i].theta * p[i].b);
    p.iter()
        .zip(cum)
        .map(|(q, c)| (q.s, q.a * q.a * q.theta_s, profile.lambda * (c + tip)))
        .collect()
}

/// Largest mismatch `|a²θ_s + λ∫₀ˢθb|` over `s ∈ [0.05, 1]`, relative to the
/// peak torque in that window (pointwise ratios are meaningless where the
/// hinged torque vanishes at the base).
pub fn torque_residual(profile: &ColumnProfile) -> f64 {
    let window: Vec<_> = torque_balance(profile).into_iter().filter(|(s, _, _)| *s >= TORQUE_WINDOW).collect();
    let peak = window.iter().fold(0.0f64, |m, (_, l, r)| m.max(l.abs()).max(r.abs()));
    let worst = window.iter().fold(0.0f64, |m, (_, l, r)| m.max((l + r).abs()));
    relative_gap(worst, peak)
}
