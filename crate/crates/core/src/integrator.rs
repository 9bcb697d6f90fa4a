//! Dormand–Prince 5(4) with the standard fourth-order continuous extension.
//!
//! Only autonomous systems are needed here, so the right-hand side takes the
//! state alone. A stage evaluation that fails (or produces non-finite values)
//! is treated as a rejected step.

use crate::{Error, Result};


const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Dense-output polynomial covering one accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSegment<const N: usize> {
    pub t0: f64,
    pub h: f64,
    coeffs: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// True if `t` lies in the closed step interval.
    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = if self.h >= 0.0 { (self.t0, self.t1()) } else { (self.t1(), self.t0) };
        t >= lo && t <= hi
    }

    pub fn eval(&self, t: f64) -> [f64; N] {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        std::array::from_fn(|i| r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i]))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 1e-10, max_step: f64::INFINITY, max_steps: 100_000 }
    }
}

/// Adaptive stepper that advances one accepted step at a time in a fixed
/// direction of `t`.
pub struct Dopri5<F, const N: usize> {
    f: F,
    ctl: StepControl,
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    direction: f64,
    steps: usize,
}

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

impl<F, const N: usize> Dopri5<F, N>
where
    F: FnMut(&[f64; N]) -> Result<[f64; N]>,
{
    /// `direction` is the sign of the steps (`-1.0` integrates backward).
    pub fn new(mut f: F, t0: f64, y0: [f64; N], direction: f64, ctl: StepControl) -> Result<Self> {
        let k1 = f(&y0)?;
        let direction = if direction < 0.0 { -1.0 } else { 1.0 };
        let h = initial_step(&y0, &k1, &ctl).min(ctl.max_step) * direction;
        Ok(Self { f, ctl, t: t0, y: y0, k1, h, direction, steps: 0 })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    /// Right-hand side at the current state.
    pub fn derivative(&self) -> &[f64; N] {
        &self.k1
    }

    fn h_min(&self) -> f64 {
        16.0 * f64::EPSILON * self.t.abs().max(1.0)
    }

    /// Advance by one accepted step, returning its dense output.
    pub fn step(&mut self) -> Result<DenseSegment<N>> {
        if self.steps >= self.ctl.max_steps {
            return Err(Error::StepFailure { t: self.t, h: self.h });
        }
        loop {
            let h = self.h;
            if h.abs() < self.h_min() {
                return Err(Error::StepFailure { t: self.t, h });
            }
            match self.attempt(h) {
                Some((y_new, k7, err, dense)) if err <= 1.0 => {
                    let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    self.t += h;
                    self.y = y_new;
                    self.k1 = k7;
                    self.h = (h.abs() * fac).min(self.ctl.max_step) * self.direction;
                    self.steps += 1;
                    return Ok(dense);
                }
                Some((_, _, err, _)) => {
                    let fac = (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                    self.h = h * fac;
                }
                None => self.h = h * 0.25,
            }
        }
    }

    #[allow(clippy::type_complexity)]
    fn attempt(&mut self, h: f64) -> Option<([f64; N], [f64; N], f64, DenseSegment<N>)> {
        let y = self.y;
        let k1 = self.k1;
        let f = &mut self.f;
        let mut eval = |y: [f64; N]| -> Option<[f64; N]> {
            let k = f(&y).ok()?;
            k.iter().all(|x| x.is_finite()).then_some(k)
        };
        let k2 = eval(axpy(&y, &[(h * A21, &k1)]))?;
        let k3 = eval(axpy(&y, &[(h * A31, &k1), (h * A32, &k2)]))?;
        let k4 = eval(axpy(&y, &[(h * A41, &k1), (h * A42, &k2), (h * A43, &k3)]))?;
        let k5 = eval(axpy(&y, &[(h * A51, &k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)]))?;
        let k6 = eval(axpy(
            &y,
            &[(h * A61, &k1), (h * A62, &k2), (h * A63, &k3), (h * A64, &k4), (h * A65, &k5)],
        ))?;
        let y_new = axpy(
            &y,
            &[(h * A71, &k1), (h * A73, &k3), (h * A74, &k4), (h * A75, &k5), (h * A76, &k6)],
        );
        if !y_new.iter().all(|x| x.is_finite()) {
            return None;
        }
        let k7 = eval(y_new)?;

        let mut sum = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = self.ctl.abs_tol + self.ctl.rel_tol * y[i].abs().max(y_new[i].abs());
            sum += (e / sc).powi(2);
        }
        let err = (sum / N as f64).sqrt();
        if !err.is_finite() {
            return None;
        }

        let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
        let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
        let coeffs = [
            y,
            ydiff,
            bspl,
            std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]),
            std::array::from_fn(|i| {
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            }),
        ];
        Some((y_new, k7, err, DenseSegment { t0: self.t, h, coeffs }))
    }
}

/// Crude first step: a fraction of the time scale `|y|/|f|`, tied to the tolerance.
fn initial_step<const N: usize>(y: &[f64; N], f: &[f64; N], ctl: &StepControl) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        let sc = ctl.abs_tol + ctl.rel_tol * y[i].abs();
        d0 += (y[i] / sc).powi(2);
        d1 += (f[i] / sc).powi(2);
    }
    let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.clamp(1e-8, 0.1)
}
