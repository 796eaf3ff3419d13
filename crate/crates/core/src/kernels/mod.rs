//! Variable-step BDF2 convolution kernels and their discrete orthogonal (DOC)
//! and complementary (DCC) companions.
//!
//! The BDF2 operator with a BDF1 start is written as
//! `D2 u^n = sum_{k=1}^n b^{(n)}_{n-k} (u^k - u^{k-1})`, where only the lags
//! 0 and 1 are nonzero. The DOC kernels `theta^{(n)}_{n-j}` invert that
//! convolution step-locally and the DCC kernels `p^{(n)}_{n-j}` are their
//! column-wise cumulative sums.
//!
//! Tables are indexed by time level `n` (1-based) and lag `n - j`.

mod identities;

pub use identities::*;

use crate::mesh::TimeMesh;

/// Lower-triangular table with row `n` (1-based) holding lags `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangular {
    n: usize,
    data: Vec<f64>,
}

impl Triangular {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * (n + 1) / 2] }
    }

    /// Number of rows `N`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    fn offset(n: usize) -> usize {
        n * (n - 1) / 2
    }

    /// Entry at level `n` and lag `n - j`.
    #[inline]
    pub fn get(&self, n: usize, lag: usize) -> f64 {
        debug_assert!(n >= 1 && n <= self.n && lag < n);
        self.data[Self::offset(n) + lag]
    }

    #[inline]
    pub fn set(&mut self, n: usize, lag: usize, v: f64) {
        debug_assert!(n >= 1 && n <= self.n && lag < n);
        self.data[Self::offset(n) + lag] = v;
    }

    /// Row `n` ordered by lag (`row[0]` is the diagonal entry).
    pub fn row(&self, n: usize) -> &[f64] {
        let o = Self::offset(n);
        &self.data[o..o + n]
    }

    fn row_mut(&mut self, n: usize) -> &mut [f64] {
        let o = Self::offset(n);
        &mut self.data[o..o + n]
    }
}

/// Nonzero BDF2 kernels: `b0(n)` for `n >= 1` and `b1(n)` for `n >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bdf2Kernels {
    b0: Vec<f64>,
    b1: Vec<f64>,
}

impl Bdf2Kernels {
    pub fn len(&self) -> usize {
        self.b0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b0.is_empty()
    }

    pub fn b0(&self, n: usize) -> f64 {
        self.b0[n - 1]
    }

    /// Lag-1 kernel; zero at `n = 1`.
    pub fn b1(&self, n: usize) -> f64 {
        self.b1[n - 1]
    }

    /// `b^{(n)}_{lag}` for any lag in `0..n`.
    #[inline]
    pub fn kernel(&self, n: usize, lag: usize) -> f64 {
        match lag {
            0 => self.b0(n),
            1 => self.b1(n),
            _ => 0.0,
        }
    }
}

pub fn bdf2_kernels(mesh: &TimeMesh) -> Bdf2Kernels {
    let n = mesh.len();
    let mut b0 = Vec::with_capacity(n);
    let mut b1 = Vec::with_capacity(n);
    b0.push(1.0 / mesh.step(1));
    b1.push(0.0);
    for k in 2..=n {
        let (tau, r) = (mesh.step(k), mesh.ratio(k));
        let denom = tau * (1.0 + r);
        b0.push((1.0 + 2.0 * r) / denom);
        b1.push(-r * r / denom);
    }
    Bdf2Kernels { b0, b1 }
}

/// DOC kernels `theta^{(n)}_{n-j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DocTable {
    pub theta: Triangular,
}

impl DocTable {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// `theta^{(n)}_{lag}`.
    pub fn get(&self, n: usize, lag: usize) -> f64 {
        self.theta.get(n, lag)
    }
}

/// DCC kernels `p^{(n)}_{n-j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DccTable {
    pub p: Triangular,
}

impl DccTable {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// `p^{(n)}_{lag}`.
    pub fn get(&self, n: usize, lag: usize) -> f64 {
        self.p.get(n, lag)
    }
}

/// DOC kernels by the two-diagonal recurrence
/// `theta^{(n)}_{n-k} b0(k) + theta^{(n)}_{n-k-1} b1(k+1) = 0` for `k < n`,
/// started from `theta^{(n)}_0 = 1 / b0(n)`.
pub fn doc_kernels(kern: &Bdf2Kernels) -> DocTable {
    let n_max = kern.len();
    let mut theta = Triangular::zeros(n_max);
    for n in 1..=n_max {
        let row = theta.row_mut(n);
        row[0] = 1.0 / kern.b0(n);
        for k in (1..n).rev() {
            let lag = n - k;
            row[lag] = -kern.b1(k + 1) / kern.b0(k) * row[lag - 1];
        }
    }
    DocTable { theta }
}

/// DCC kernels as cumulative DOC sums `p^{(n)}_{n-j} = sum_{k=j}^n theta^{(k)}_{k-j}`.
pub fn dcc_from_doc(doc: &DocTable) -> DccTable {
    let n_max = doc.len();
    let mut p = Triangular::zeros(n_max);
    for n in 1..=n_max {
        p.set(n, 0, doc.get(n, 0));
        for j in 1..n {
            let lag = n - j;
            p.set(n, lag, p.get(n - 1, lag - 1) + doc.get(n, lag));
        }
    }
    DccTable { p }
}

/// DCC kernels from the closed-form product expression
/// `p^{(n)}_{n-j} = sum_{k=j}^n tau_k (1+r_j)/(1+2r_j) prod_{i=j+1}^k r_i/(1+2r_i)`.
pub fn dcc_explicit(mesh: &TimeMesh) -> DccTable {
    let n_max = mesh.len();
    let mut p = Triangular::zeros(n_max);
    for j in 1..=n_max {
        let rj = mesh.ratio(j);
        let lead = (1.0 + rj) / (1.0 + 2.0 * rj);
        let mut prod = 1.0;
        let mut acc = 0.0;
        for k in j..=n_max {
            if k > j {
                let ri = mesh.ratio(k);
                prod *= ri / (1.0 + 2.0 * ri);
            }
            acc += mesh.step(k) * lead * prod;
            p.set(k, k - j, acc);
        }
    }
    DccTable { p }
}

/// All kernel tables for one mesh.
#[derive(Debug, Clone)]
pub struct KernelTables {
    pub bdf2: Bdf2Kernels,
    pub doc: DocTable,
    pub dcc: DccTable,
}

impl KernelTables {
    pub fn new(mesh: &TimeMesh) -> Self {
        let bdf2 = bdf2_kernels(mesh);
        let doc = doc_kernels(&bdf2);
        let dcc = dcc_from_doc(&doc);
        Self { bdf2, doc, dcc }
    }
}
