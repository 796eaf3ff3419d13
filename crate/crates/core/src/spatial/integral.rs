//! Composite trapezoidal approximation of `J(u)(x_i) = int u(z) rho(z - x_i) dz`.
//!
//! The kernel is always sampled at node differences, so row `i` of the
//! operator is a shifted copy of `rho((j - i) h)`; only the `2M + 1` distinct
//! samples are stored.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

use super::grid::{GridFunction, SpatialGrid};

type Kernel1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type Kernel2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Signed integral kernel `rho(y, t)` of the space difference `y = z - x`.
#[derive(Clone)]
pub enum IntegralKernel {
    Constant(f64),
    Stationary(Kernel1),
    TimeDependent(Kernel2),
}

impl IntegralKernel {
    pub fn stationary(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Stationary(Arc::new(f))
    }

    pub fn time_dependent(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::TimeDependent(Arc::new(f))
    }

    pub fn eval(&self, y: f64, t: f64) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Stationary(f) => f(y),
            Self::TimeDependent(f) => f(y, t),
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, Self::TimeDependent(_))
    }
}

impl fmt::Debug for IntegralKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::Stationary(_) => f.write_str("Stationary(..)"),
            Self::TimeDependent(_) => f.write_str("TimeDependent(..)"),
        }
    }
}

/// Trapezoid-weighted kernel samples at one time level.
#[derive(Debug, Clone)]
pub struct IntegralOperator {
    m: usize,
    h: f64,
    /// `samples[d + M] = rho(d h, t)` for `d = -M..=M`.
    samples: Vec<f64>,
    constant: Option<f64>,
    time_dependent: bool,
}

impl IntegralOperator {
    pub fn new(grid: &SpatialGrid, kernel: &IntegralKernel, t: f64) -> Self {
        let m = grid.intervals();
        let h = grid.h();
        let samples = (0..=2 * m)
            .map(|k| kernel.eval((k as f64 - m as f64) * h, t))
            .collect();
        Self {
            m,
            h,
            samples,
            constant: match kernel {
                IntegralKernel::Constant(c) => Some(*c),
                _ => None,
            },
            time_dependent: kernel.is_time_dependent(),
        }
    }

    pub fn intervals(&self) -> usize {
        self.m
    }

    pub fn is_time_dependent(&self) -> bool {
        self.time_dependent
    }

    /// `rho(x_j - x_i)`.
    #[inline]
    pub fn sample(&self, i: usize, j: usize) -> f64 {
        self.samples[j + self.m - i]
    }

    /// Full quadrature weight of `u_j` in row `i`, half weight at `j = 0, M`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let w = if j == 0 || j == self.m { 0.5 } else { 1.0 };
        self.h * w * self.sample(i, j)
    }

    /// Operator with kernel `rho(-y)`, i.e. the transpose on interior nodes.
    pub fn transposed(&self) -> Self {
        let mut samples = self.samples.clone();
        samples.reverse();
        Self { samples, ..self.clone() }
    }

    fn check(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.m + 1 {
            return Err(Error::DimensionMismatch { expected: self.m + 1, got: u.len() });
        }
        Ok(())
    }

    /// Dense row-by-row application, O(M^2).
    pub fn apply_direct(&self, u: &[f64]) -> Result<GridFunction> {
        self.check(u)?;
        let m = self.m;
        let mut out = vec![0.0; m + 1];
        for (i, o) in out.iter_mut().enumerate().take(m).skip(1) {
            let row = &self.samples[m - i..=2 * m - i];
            let mut acc = 0.5 * (u[0] * row[0] + u[m] * row[m]);
            for j in 1..m {
                acc += u[j] * row[j];
            }
            *o = self.h * acc;
        }
        Ok(out.into())
    }

    /// O(M) application for a constant kernel; `None` for any other kernel.
    pub fn apply_constant(&self, u: &[f64]) -> Option<Result<GridFunction>> {
        let c = self.constant?;
        Some(self.check(u).map(|_| {
            let m = self.m;
            let s = 0.5 * (u[0] + u[m]) + u[1..m].iter().sum::<f64>();
            let mut out = vec![c * self.h * s; m + 1];
            out[0] = 0.0;
            out[m] = 0.0;
            out.into()
        }))
    }
}

/// FFT-backed application of a time-independent [`IntegralOperator`].
///
/// The trapezoid sum is a linear correlation of the half-weighted grid
/// function with the kernel samples; it is evaluated as a zero-padded
/// circular convolution of length `L = 2^k >= 2(M+1)`, which leaves the
/// interior outputs free of wrap-around.
#[derive(Clone)]
pub struct FastIntegral {
    m: usize,
    h: f64,
    len: usize,
    spectrum: Vec<Complex<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for FastIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FastIntegral").field("m", &self.m).field("len", &self.len).finish()
    }
}

impl FastIntegral {
    pub fn new(op: &IntegralOperator) -> Result<Self> {
        if op.time_dependent {
            return Err(Error::NonStationaryKernel);
        }
        let m = op.m;
        let len = (2 * (m + 1)).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let mut spectrum = vec![Complex::new(0.0, 0.0); len];
        // Circular placement: sample index k lands at k mod len.
        for (k, &s) in op.samples.iter().enumerate() {
            spectrum[k % len].re += s;
        }
        forward.process(&mut spectrum);
        Ok(Self { m, h: op.h, len, spectrum, forward, inverse })
    }

    pub fn apply(&self, u: &[f64]) -> Result<GridFunction> {
        let m = self.m;
        if u.len() != m + 1 {
            return Err(Error::DimensionMismatch { expected: m + 1, got: u.len() });
        }
        let mut buf = vec![Complex::new(0.0, 0.0); self.len];
        // reversed, half-weighted data: buf[j] = w_{M-j} u_{M-j}
        for (j, b) in buf.iter_mut().take(m + 1).enumerate() {
            let src = m - j;
            let w = if src == 0 || src == m { 0.5 } else { 1.0 };
            b.re = w * u[src];
        }
        self.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.inverse.process(&mut buf);
        let scale = self.h / self.len as f64;
        let mut out = vec![0.0; m + 1];
        for (i, o) in out.iter_mut().enumerate().take(m).skip(1) {
            *o = buf[(2 * m - i) % self.len].re * scale;
        }
        Ok(out.into())
    }
}

/// Estimate `C_J = sup ||J_h u|| / ||u||` over grid functions vanishing on the
/// boundary by power iteration on `J_h^T J_h`. Deterministic: the iteration
/// starts from the all-ones interior vector.
pub fn estimate_operator_norm(op: &IntegralOperator, use_fast: bool) -> Result<f64> {
    let m = op.m;
    let t_op = op.transposed();
    let fast = if use_fast && !op.time_dependent {
        Some((FastIntegral::new(op)?, FastIntegral::new(&t_op)?))
    } else {
        None
    };
    let apply = |which: bool, v: &[f64]| -> Result<GridFunction> {
        match (&fast, which) {
            (Some((f, _)), false) => f.apply(v),
            (Some((_, ft)), true) => ft.apply(v),
            (None, false) => op.apply_direct(v),
            (None, true) => t_op.apply_direct(v),
        }
    };
    let norm = |v: &[f64]| v[1..m].iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut v = vec![1.0; m + 1];
    v[0] = 0.0;
    v[m] = 0.0;
    let mut sigma_sq = 0.0;
    for _ in 0..1000 {
        let nv = norm(&v);
        if nv == 0.0 {
            return Ok(0.0);
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let av = apply(false, &v)?;
        let atav = apply(true, &av)?;
        let next = norm(&atav);
        v = atav.into_vec();
        v[0] = 0.0;
        v[m] = 0.0;
        let done = (next - sigma_sq).abs() <= 1e-13 * next;
        sigma_sq = next;
        if done {
            break;
        }
    }
    Ok(sigma_sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_kernel_sums_interior() {
        let g = SpatialGrid::new(0.0, 1.0, 10).unwrap();
        let op = IntegralOperator::new(&g, &IntegralKernel::Constant(1.0), 0.0);
        let mut u = GridFunction::from_fn(&g, |x| x * (1.0 - x) + 0.1);
        u[0] = 0.0;
        u[10] = 0.0;
        let expected = g.h() * u.interior().iter().sum::<f64>();
        let d = op.apply_direct(&u).unwrap();
        let c = op.apply_constant(&u).unwrap().unwrap();
        for i in 1..10 {
            assert!((d[i] - expected).abs() < 1e-14);
            assert!((c[i] - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn trapezoid_of_sine() {
        let g = SpatialGrid::new(0.0, PI, 200).unwrap();
        let op = IntegralOperator::new(&g, &IntegralKernel::Constant(1.0), 0.0);
        let u = GridFunction::from_fn(&g, f64::sin);
        let out = op.apply_direct(&u).unwrap();
        for i in 1..200 {
            assert!((out[i] - 2.0).abs() < 1e-4);
        }
    }

    #[test]
    fn zero_inputs_give_zero() {
        let g = SpatialGrid::new(-1.0, 1.0, 33).unwrap();
        let gauss = IntegralKernel::stationary(|y| (-y * y).exp());
        let op = IntegralOperator::new(&g, &gauss, 0.0);
        let z = GridFunction::zeros(&g);
        assert!(op.apply_direct(&z).unwrap().iter().all(|&v| v == 0.0));
        assert!(FastIntegral::new(&op).unwrap().apply(&z).unwrap().iter().all(|&v| v == 0.0));
        let zero_k = IntegralOperator::new(&g, &IntegralKernel::Constant(0.0), 0.0);
        let u = GridFunction::from_fn(&g, f64::cos);
        assert!(FastIntegral::new(&zero_k).unwrap().apply(&u).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn impulse_kernel_shifts() {
        let g = SpatialGrid::new(0.0, 1.0, 20).unwrap();
        let h = g.h();
        // rho nonzero only at y = 3h
        let k = IntegralKernel::stationary(move |y| if ((y / h) - 3.0).abs() < 1e-6 { 1.0 } else { 0.0 });
        let op = IntegralOperator::new(&g, &k, 0.0);
        let u = GridFunction::from_fn(&g, |x| x * x + 1.0);
        let fast = FastIntegral::new(&op).unwrap().apply(&u).unwrap();
        for i in 1..20 {
            let j = i + 3;
            let expected = match j {
                j if j < 20 => h * u[j],
                20 => 0.5 * h * u[20],
                _ => 0.0,
            };
            assert!((fast[i] - expected).abs() < 1e-14, "i={i}");
        }
    }

    #[test]
    fn fast_rejects_time_dependent_kernel() {
        let g = SpatialGrid::new(0.0, 1.0, 8).unwrap();
        let k = IntegralKernel::time_dependent(|y, t| y * t);
        let op = IntegralOperator::new(&g, &k, 0.5);
        assert!(matches!(FastIntegral::new(&op), Err(Error::NonStationaryKernel)));
        assert!((op.sample(2, 5) - 3.0 * g.h() * 0.5).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let g = SpatialGrid::new(0.0, 1.0, 8).unwrap();
        let op = IntegralOperator::new(&g, &IntegralKernel::Constant(1.0), 0.0);
        assert!(op.apply_direct(&[0.0; 5]).is_err());
    }

    #[test]
    fn constant_kernel_norm() {
        // J_h = c h 1 1^T on M-1 interior nodes: norm c h (M-1)
        let g = SpatialGrid::new(0.0, PI, 64).unwrap();
        let op = IntegralOperator::new(&g, &IntegralKernel::Constant(1.0), 0.0);
        let est = estimate_operator_norm(&op, false).unwrap();
        assert!((est - g.h() * 63.0).abs() < 1e-10);
    }
}
