//! Dormand–Prince 5(4) integrator with step-size control and continuous
//! output, specialised to small fixed-size states.

use crate::error::{Error, Result};

// Butcher tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
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
// error coefficients: 5th-order minus embedded 4th-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// dense output
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const MAX_STEPS: usize = 50_000_000;

/// Right-hand side of `y' = f(t, y)`.
pub trait System<const N: usize> {
    fn derivs(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]>;
}

impl<const N: usize, F> System<N> for F
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
{
    fn derivs(&self, t: f64, y: &[f64; N]) -> Result<[f64; N]> {
        self(t, y)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Tolerance {
    pub fn uniform(tol: f64) -> Self {
        Self { rtol: tol, atol: tol }
    }
}

/// Step statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Continuous extension of one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub h: f64,
    coeffs: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    pub fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.coeffs;
        std::array::from_fn(|i| {
            r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])))
        })
    }
}

/// Adaptive Dormand–Prince integrator.
#[derive(Debug, Clone)]
pub struct DormandPrince {
    pub tol: Tolerance,
    pub h_init: Option<f64>,
    pub h_max: f64,
}

impl DormandPrince {
    pub fn new(tol: f64) -> Self {
        Self {
            tol: Tolerance::uniform(tol),
            h_init: None,
            h_max: f64::INFINITY,
        }
    }

    pub fn with_max_step(mut self, h_max: f64) -> Self {
        self.h_max = h_max;
        self
    }

    /// Integrate from `t0` to `t1`, returning the final state.
    pub fn integrate<const N: usize, S: System<N>>(
        &self,
        sys: &S,
        t0: f64,
        y0: [f64; N],
        t1: f64,
    ) -> Result<([f64; N], Stats)> {
        if t1 < t0 {
            let reversed = |tau: f64, y: &[f64; N]| -> Result<[f64; N]> {
                let f = sys.derivs(-tau, y)?;
                Ok(std::array::from_fn(|i| -f[i]))
            };
            return self.integrate_with(&reversed, -t0, y0, -t1, |_| Ok(()));
        }
        self.integrate_with(sys, t0, y0, t1, |_| Ok(()))
    }

    /// Integrate and evaluate the continuous extension at each sorted time in
    /// `samples` (all within `[t0, t1]`).
    pub fn integrate_dense<const N: usize, S: System<N>>(
        &self,
        sys: &S,
        t0: f64,
        y0: [f64; N],
        t1: f64,
        samples: &[f64],
    ) -> Result<(Vec<[f64; N]>, Stats)> {
        let mut out = Vec::with_capacity(samples.len());
        let mut next = 0;
        while next < samples.len() && samples[next] <= t0 {
            out.push(y0);
            next += 1;
        }
        let (_, stats) = self.integrate_with(sys, t0, y0, t1, |step| {
            let t_end = step.t0 + step.h;
            while next < samples.len() && samples[next] <= t_end {
                out.push(step.eval(samples[next]));
                next += 1;
            }
            Ok(())
        })?;
        if out.len() != samples.len() {
            return Err(Error::Integration(format!(
                "{} sample times lie beyond the end of integration",
                samples.len() - out.len()
            )));
        }
        Ok((out, stats))
    }

    /// Integrate, handing every accepted step's continuous extension to
    /// `on_step`.
    pub fn integrate_with<const N: usize, S, F>(
        &self,
        sys: &S,
        t0: f64,
        y0: [f64; N],
        t1: f64,
        mut on_step: F,
    ) -> Result<([f64; N], Stats)>
    where
        S: System<N>,
        F: FnMut(&DenseStep<N>) -> Result<()>,
    {
        let mut stats = Stats::default();
        if t1 == t0 {
            return Ok((y0, stats));
        }
        if t1 < t0 {
            return Err(Error::Integration("backward integration span".into()));
        }
        let span = t1 - t0;
        let mut t = t0;
        let mut y = y0;
        let mut k1 = sys.derivs(t, &y)?;
        stats.evaluations += 1;
        let mut h = match self.h_init {
            Some(h) => h,
            None => self.initial_step(sys, t, &y, &k1, span, &mut stats)?,
        }
        .min(self.h_max)
        .min(span);
        let mut err_old: f64 = 1e-4;
        let mut last_rejected = false;

        while t < t1 {
            if stats.accepted + stats.rejected > MAX_STEPS {
                return Err(Error::Integration("maximum number of steps exceeded".into()));
            }
            if h < 1e-14 * t.abs().max(span) {
                return Err(Error::StepUnderflow { t, h });
            }
            let last = t + 1.01 * h >= t1;
            if last {
                h = t1 - t;
            }
            let step = Self::stage(sys, t, &y, &k1, h)?;
            stats.evaluations += 6;
            let err = self.error_norm(&y, &step.y_new, &step.err);
            if err <= 1.0 {
                let fac = (err.powf(0.2 - 0.75 * BETA) * err_old.powf(-BETA) / SAFETY)
                    .clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                let mut h_new = h / fac;
                if last_rejected {
                    h_new = h_new.min(h);
                }
                err_old = err.max(1e-4);
                let dense = DenseStep {
                    t0: t,
                    h,
                    coeffs: step.dense(&y, &k1, h),
                };
                on_step(&dense)?;
                t = if last { t1 } else { t + h };
                y = step.y_new;
                k1 = step.k7;
                stats.accepted += 1;
                last_rejected = false;
                h = h_new.min(self.h_max);
            } else {
                let fac = (err.powf(0.2 - 0.75 * BETA) / SAFETY).min(1.0 / FAC_MIN);
                h /= fac;
                stats.rejected += 1;
                last_rejected = true;
            }
        }
        Ok((y, stats))
    }

    fn error_norm<const N: usize>(&self, y: &[f64; N], y_new: &[f64; N], err: &[f64; N]) -> f64 {
        let sum: f64 = (0..N)
            .map(|i| {
                let sc = self.tol.atol + self.tol.rtol * y[i].abs().max(y_new[i].abs());
                (err[i] / sc).powi(2)
            })
            .sum();
        (sum / N as f64).sqrt()
    }

    fn initial_step<const N: usize, S: System<N>>(
        &self,
        sys: &S,
        t: f64,
        y: &[f64; N],
        f0: &[f64; N],
        span: f64,
        stats: &mut Stats,
    ) -> Result<f64> {
        let scale = |i: usize| self.tol.atol + self.tol.rtol * y[i].abs();
        let d0 = rms(|i| y[i] / scale(i), N);
        let d1 = rms(|i| f0[i] / scale(i), N);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span);
        let y1: [f64; N] = std::array::from_fn(|i| y[i] + h0 * f0[i]);
        let f1 = sys.derivs(t + h0, &y1)?;
        stats.evaluations += 1;
        let d2 = rms(|i| (f1[i] - f0[i]) / scale(i), N) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        Ok((100.0 * h0).min(h1))
    }

    fn stage<const N: usize, S: System<N>>(
        sys: &S,
        t: f64,
        y: &[f64; N],
        k1: &[f64; N],
        h: f64,
    ) -> Result<StageResult<N>> {
        let at = |f: &dyn Fn(usize) -> f64| -> [f64; N] { std::array::from_fn(|i| y[i] + h * f(i)) };
        let k2 = sys.derivs(t + C2 * h, &at(&|i| A21 * k1[i]))?;
        let k3 = sys.derivs(t + C3 * h, &at(&|i| A31 * k1[i] + A32 * k2[i]))?;
        let k4 = sys.derivs(t + C4 * h, &at(&|i| A41 * k1[i] + A42 * k2[i] + A43 * k3[i]))?;
        let k5 = sys.derivs(
            t + C5 * h,
            &at(&|i| A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]),
        )?;
        let k6 = sys.derivs(
            t + h,
            &at(&|i| A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]),
        )?;
        let y_new = at(&|i| A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        let k7 = sys.derivs(t + h, &y_new)?;
        let err = std::array::from_fn(|i| {
            h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
        });
        Ok(StageResult {
            y_new,
            err,
            k3,
            k4,
            k5,
            k6,
            k7,
        })
    }
}

struct StageResult<const N: usize> {
    y_new: [f64; N],
    err: [f64; N],
    k3: [f64; N],
    k4: [f64; N],
    k5: [f64; N],
    k6: [f64; N],
    k7: [f64; N],
}

impl<const N: usize> StageResult<N> {
    fn dense(&self, y: &[f64; N], k1: &[f64; N], h: f64) -> [[f64; N]; 5] {
        let r1 = *y;
        let r2: [f64; N] = std::array::from_fn(|i| self.y_new[i] - y[i]);
        let r3: [f64; N] = std::array::from_fn(|i| h * k1[i] - r2[i]);
        let r4: [f64; N] = std::array::from_fn(|i| r2[i] - h * self.k7[i] - r3[i]);
        let r5: [f64; N] = std::array::from_fn(|i| {
            h * (D1 * k1[i]
                + D3 * self.k3[i]
                + D4 * self.k4[i]
                + D5 * self.k5[i]
                + D6 * self.k6[i]
                + D7 * self.k7[i])
        });
        [r1, r2, r3, r4, r5]
    }
}

fn rms(f: impl Fn(usize) -> f64, n: usize) -> f64 {
    ((0..n).map(|i| f(i).powi(2)).sum::<f64>() / n as f64).sqrt()
}

/// Fixed-step Dormand–Prince (5th-order solution, no error control).
pub fn integrate_fixed<const N: usize, S: System<N>>(
    sys: &S,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    steps: usize,
) -> Result<[f64; N]> {
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    for j in 0..steps {
        let t = t0 + j as f64 * h;
        let k1 = sys.derivs(t, &y)?;
        y = DormandPrince::stage(sys, t, &y, &k1, h)?.y_new;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn oscillator(w: f64) -> impl Fn(f64, &[f64; 2]) -> Result<[f64; 2]> {
        move |_t, y| Ok([y[1], -w * w * y[0]])
    }

    #[test]
    fn harmonic_oscillator_one_period() {
        let sys = oscillator(2.0);
        let (y, stats) = DormandPrince::new(1e-12)
            .integrate(&sys, 0.0, [1.0, 0.0], PI)
            .unwrap();
        assert!((y[0] - 1.0).abs() < 1e-10, "{y:?}");
        assert!(y[1].abs() < 1e-9);
        assert!(stats.accepted > 10);
    }

    #[test]
    fn dense_output_matches_exact() {
        let sys = oscillator(1.0);
        let samples: Vec<f64> = (0..=50).map(|j| j as f64 * 0.2).collect();
        let (ys, _) = DormandPrince::new(1e-10)
            .integrate_dense(&sys, 0.0, [0.0, 1.0], 10.0, &samples)
            .unwrap();
        for (t, y) in samples.iter().zip(&ys) {
            assert!((y[0] - t.sin()).abs() < 1e-8, "t={t}");
            assert!((y[1] - t.cos()).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn exponential_growth_tolerance_scaling() {
        let sys = |_t: f64, y: &[f64; 1]| Ok([y[0]]);
        let coarse = DormandPrince::new(1e-6).integrate(&sys, 0.0, [1.0], 3.0).unwrap().0[0];
        let fine = DormandPrince::new(1e-11).integrate(&sys, 0.0, [1.0], 3.0).unwrap().0[0];
        let exact = 3f64.exp();
        assert!((fine - exact).abs() / exact < 1e-9);
        assert!((fine - exact).abs() < (coarse - exact).abs());
    }

    #[test]
    fn backward_integration_returns() {
        let sys = |t: f64, y: &[f64; 2]| Ok([y[1], -(1.0 + 0.3 * t.cos()) * y[0]]);
        let dp = DormandPrince::new(1e-12);
        let (fwd, _) = dp.integrate(&sys, 0.0, [1.0, 0.5], 7.0).unwrap();
        let (back, _) = dp.integrate(&sys, 7.0, fwd, 0.0).unwrap();
        assert!((back[0] - 1.0).abs() < 1e-9 && (back[1] - 0.5).abs() < 1e-9, "{back:?}");
    }

    #[test]
    fn fixed_step_agrees_with_adaptive() {
        let sys = oscillator(3.0);
        let fixed = integrate_fixed(&sys, 0.0, [1.0, 0.0], 2.0, 4096).unwrap();
        let adaptive = DormandPrince::new(1e-12).integrate(&sys, 0.0, [1.0, 0.0], 2.0).unwrap().0;
        assert!((fixed[0] - adaptive[0]).abs() < 1e-10);
    }

    #[test]
    fn rhs_errors_propagate() {
        let sys = |t: f64, y: &[f64; 1]| {
            if t > 0.5 {
                Err(Error::Collision { t, separation: 0.0 })
            } else {
                Ok([y[0]])
            }
        };
        let res = DormandPrince::new(1e-8).integrate(&sys, 0.0, [1.0], 1.0);
        assert!(matches!(res, Err(Error::Collision { .. })));
    }
}
