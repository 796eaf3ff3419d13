//! Residuals of the defining kernel identities, the positive-definiteness
//! quadratic forms and the sharp DCC bound.
//!
//! Residuals are scale-aware: each sum is compared against its target and
//! divided by the largest term magnitude entering the sum (or the target,
//! whichever is larger).

use super::{Bdf2Kernels, DccTable, DocTable};
use crate::error::{Error, Result};
use crate::mesh::{r_max, TimeMesh};

/// `C_r = sqrt(r_max) / (1 + r_max)^2`, the constant of the positivity bounds.
pub fn positivity_constant() -> f64 {
    let r = r_max();
    r.sqrt() / (1.0 + r).powi(2)
}

/// `c_r = r_max^{5/2}`, the constant of the sharp DCC bound.
pub fn dcc_bound_constant() -> f64 {
    r_max().powf(2.5)
}

fn scaled(residual: f64, scale: f64) -> f64 {
    residual.abs() / scale.max(f64::MIN_POSITIVE)
}

/// Worst scaled residual of `sum_{j=k}^n theta^{(n)}_{n-j} b^{(j)}_{j-k} = delta_{nk}`.
pub fn orthogonality_residual(kern: &Bdf2Kernels, doc: &DocTable) -> f64 {
    let n_max = doc.len();
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        for k in 1..=n {
            let mut sum = 0.0;
            let mut scale = if n == k { 1.0 } else { 0.0 };
            for j in k..=n {
                let b = kern.kernel(j, j - k);
                if b == 0.0 {
                    continue;
                }
                let term = doc.get(n, n - j) * b;
                scale = f64::max(scale, term.abs());
                sum += term;
            }
            let target = if n == k { 1.0 } else { 0.0 };
            worst = worst.max(scaled(sum - target, scale));
        }
    }
    worst
}

/// Worst scaled residual of `sum_{j=k}^n p^{(n)}_{n-j} b^{(j)}_{j-k} = 1`.
pub fn completeness_residual(kern: &Bdf2Kernels, dcc: &DccTable) -> f64 {
    let n_max = dcc.len();
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        for k in 1..=n {
            let mut sum = 0.0;
            let mut scale = 1.0f64;
            for j in k..=n {
                let b = kern.kernel(j, j - k);
                if b == 0.0 {
                    continue;
                }
                let term = dcc.get(n, n - j) * b;
                scale = scale.max(term.abs());
                sum += term;
            }
            worst = worst.max(scaled(sum - 1.0, scale));
        }
    }
    worst
}

/// Worst relative residual of `theta^{(n)}_0 = p^{(n)}_0` and
/// `theta^{(n)}_{n-k} = p^{(n)}_{n-k} - p^{(n-1)}_{n-k-1}`.
pub fn relation_residual(doc: &DocTable, dcc: &DccTable) -> f64 {
    let mut worst = 0.0f64;
    for n in 1..=doc.len() {
        worst = worst.max(scaled(doc.get(n, 0) - dcc.get(n, 0), dcc.get(n, 0)));
        for k in 1..n {
            let lag = n - k;
            let a = dcc.get(n, lag);
            let b = dcc.get(n - 1, lag - 1);
            worst = worst.max(scaled(doc.get(n, lag) - (a - b), a.abs().max(b.abs())));
        }
    }
    worst
}

/// Worst relative residual of `sum_j theta^{(n)}_{n-j} = tau_n`.
pub fn doc_sum_residual(mesh: &TimeMesh, doc: &DocTable) -> f64 {
    (1..=doc.len())
        .map(|n| scaled(doc.theta.row(n).iter().sum::<f64>() - mesh.step(n), mesh.step(n)))
        .fold(0.0, f64::max)
}

/// Worst relative residual of `sum_j p^{(n)}_{n-j} = t_n`.
pub fn dcc_sum_residual(mesh: &TimeMesh, dcc: &DccTable) -> f64 {
    (1..=dcc.len())
        .map(|n| scaled(dcc.p.row(n).iter().sum::<f64>() - mesh.time(n), mesh.time(n)))
        .fold(0.0, f64::max)
}

/// Smallest DOC entry; strictly positive on every mesh.
pub fn doc_min(doc: &DocTable) -> f64 {
    (1..=doc.len())
        .flat_map(|n| doc.theta.row(n).iter().copied())
        .fold(f64::INFINITY, f64::min)
}

/// `(D2 u)^j` for `j = 1..=N` (0-based output, entry `j-1`).
pub fn bdf2_apply(kern: &Bdf2Kernels, u: &[f64]) -> Vec<f64> {
    let n_max = kern.len();
    assert_eq!(u.len(), n_max + 1, "sequence must have N+1 levels");
    (1..=n_max)
        .map(|j| {
            let mut v = kern.b0(j) * (u[j] - u[j - 1]);
            if j >= 2 {
                v += kern.b1(j) * (u[j - 1] - u[j - 2]);
            }
            v
        })
        .collect()
}

/// Worst scaled residual of `sum_{j=1}^n p^{(n)}_{n-j} (D2 u)^j = u^n - u^0` over `n`.
pub fn dcc_telescoping_residual(kern: &Bdf2Kernels, dcc: &DccTable, u: &[f64]) -> f64 {
    let d2 = bdf2_apply(kern, u);
    let mut worst = 0.0f64;
    for n in 1..=dcc.len() {
        let mut sum = 0.0;
        let mut scale = (u[n] - u[0]).abs();
        for j in 1..=n {
            let term = dcc.get(n, n - j) * d2[j - 1];
            scale = scale.max(term.abs());
            sum += term;
        }
        worst = worst.max(scaled(sum - (u[n] - u[0]), scale));
    }
    worst
}

/// Worst scaled residual of `sum_{j=1}^k theta^{(k)}_{k-j} (D2 u)^j = u^k - u^{k-1}`.
pub fn doc_telescoping_residual(kern: &Bdf2Kernels, doc: &DocTable, u: &[f64]) -> f64 {
    let d2 = bdf2_apply(kern, u);
    let mut worst = 0.0f64;
    for k in 1..=doc.len() {
        let mut sum = 0.0;
        let mut scale = (u[k] - u[k - 1]).abs();
        for j in 1..=k {
            let term = doc.get(k, k - j) * d2[j - 1];
            scale = scale.max(term.abs());
            sum += term;
        }
        worst = worst.max(scaled(sum - (u[k] - u[k - 1]), scale));
    }
    worst
}

/// `2 sum_{k=2}^n omega_k sum_{j=2}^k b^{(k)}_{k-j} omega_j`, where
/// `omega[0]` holds `omega_2` and `n = omega.len() + 1`.
pub fn quadratic_form_b(kern: &Bdf2Kernels, omega: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (i, &w) in omega.iter().enumerate() {
        let k = i + 2;
        let mut inner = kern.b0(k) * w;
        if i >= 1 {
            inner += kern.b1(k) * omega[i - 1];
        }
        acc += w * inner;
    }
    2.0 * acc
}

/// `sum_{j=2}^k theta^{(k)}_{k-j} omega_j` for `k = 2..=n` (0-based output).
pub fn doc_convolve(doc: &DocTable, omega: &[f64]) -> Vec<f64> {
    (0..omega.len())
        .map(|i| {
            let k = i + 2;
            (0..=i).map(|l| doc.get(k, k - (l + 2)) * omega[l]).sum()
        })
        .collect()
}

/// `2 sum_{k=2}^n omega_k sum_{j=2}^k theta^{(k)}_{k-j} omega_j` with the same
/// indexing as [`quadratic_form_b`].
pub fn quadratic_form_theta(doc: &DocTable, omega: &[f64]) -> f64 {
    2.0 * doc_convolve(doc, omega)
        .iter()
        .zip(omega)
        .map(|(c, w)| c * w)
        .sum::<f64>()
}

/// Lower bound `C_r delta sum_k omega_k^2 / tau_k` for [`quadratic_form_b`].
pub fn quadratic_form_b_bound(mesh: &TimeMesh, omega: &[f64], delta: f64) -> f64 {
    let s: f64 = omega
        .iter()
        .enumerate()
        .map(|(i, w)| w * w / mesh.step(i + 2))
        .sum();
    positivity_constant() * delta * s
}

/// Lower bound `C_r delta sum_k tau_k^{-1} (sum_j theta^{(k)}_{k-j} omega_j)^2`
/// for [`quadratic_form_theta`].
pub fn quadratic_form_theta_bound(mesh: &TimeMesh, doc: &DocTable, omega: &[f64], delta: f64) -> f64 {
    let s: f64 = doc_convolve(doc, omega)
        .iter()
        .enumerate()
        .map(|(i, c)| c * c / mesh.step(i + 2))
        .sum();
    positivity_constant() * delta * s
}

/// Outcome of checking both positivity bounds for every prefix length `n`
/// of one `omega` draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFormCheck {
    /// Smallest `(form - bound) / max(|form|, bound)` over prefixes for the BDF2 form.
    pub b_slack: f64,
    /// Same for the DOC form.
    pub theta_slack: f64,
}

impl QuadraticFormCheck {
    pub fn holds(&self) -> bool {
        self.b_slack >= -1e-12 && self.theta_slack >= -1e-12
    }
}

/// Check both quadratic-form lower bounds for all `2 <= n <= omega.len() + 1`
/// in a single O(n^2) pass.
pub fn check_quadratic_forms(
    mesh: &TimeMesh,
    kern: &Bdf2Kernels,
    doc: &DocTable,
    omega: &[f64],
    delta: f64,
) -> QuadraticFormCheck {
    let cr = positivity_constant() * delta;
    let conv = doc_convolve(doc, omega);
    let (mut qb, mut bb, mut qt, mut bt) = (0.0, 0.0, 0.0, 0.0);
    let (mut b_slack, mut theta_slack) = (f64::INFINITY, f64::INFINITY);
    for (i, &w) in omega.iter().enumerate() {
        let k = i + 2;
        let tau = mesh.step(k);
        let mut inner = kern.b0(k) * w;
        if i >= 1 {
            inner += kern.b1(k) * omega[i - 1];
        }
        qb += 2.0 * w * inner;
        bb += cr * w * w / tau;
        qt += 2.0 * w * conv[i];
        bt += cr * conv[i] * conv[i] / tau;
        let rel = |q: f64, b: f64| {
            let s = q.abs().max(b);
            if s == 0.0 { 0.0 } else { (q - b) / s }
        };
        b_slack = b_slack.min(rel(qb, bb));
        theta_slack = theta_slack.min(rel(qt, bt));
    }
    QuadraticFormCheck { b_slack, theta_slack }
}

/// Sharp DCC bound diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DccBoundReport {
    pub delta: f64,
    /// Smallest `bound - p` over all `(n, j)`.
    pub min_slack: f64,
    /// Smallest `(bound - p) / bound`.
    pub min_relative_slack: f64,
    /// Location `(n, j)` of the tightest entry.
    pub tightest: (usize, usize),
    pub violations: usize,
}

impl DccBoundReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Check `p^{(n)}_{n-j} <= c_r/delta sqrt(tau_j tau)` for `j >= 2` and
/// `p^{(n)}_{n-1} <= tau_1 + c_r/delta sqrt(tau_2 tau)`, with `delta` the
/// observed ratio margin of the mesh.
pub fn dcc_bound_check(mesh: &TimeMesh, dcc: &DccTable) -> Result<DccBoundReport> {
    let report = mesh.ratio_report();
    if !report.satisfies_a1 || !(report.delta_margin > 0.0) {
        return Err(Error::invalid(format!(
            "DCC bound needs a positive ratio margin, observed {}",
            report.delta_margin
        )));
    }
    let delta = report.delta_margin;
    let coef = dcc_bound_constant() / delta;
    let tau_max = mesh.max_step();
    let tau2 = if mesh.len() >= 2 { mesh.step(2) } else { 0.0 };
    let mut out = DccBoundReport {
        delta,
        min_slack: f64::INFINITY,
        min_relative_slack: f64::INFINITY,
        tightest: (0, 0),
        violations: 0,
    };
    for n in 1..=dcc.len() {
        for j in 1..=n {
            let bound = if j == 1 {
                mesh.step(1) + coef * (tau2 * tau_max).sqrt()
            } else {
                coef * (mesh.step(j) * tau_max).sqrt()
            };
            let slack = bound - dcc.get(n, n - j);
            if slack < out.min_slack {
                out.min_slack = slack;
                out.tightest = (n, j);
            }
            out.min_relative_slack = out.min_relative_slack.min(slack / bound);
            // Rounding in p can exceed an exactly tight bound by a few ulps.
            if slack < -1e-14 * bound {
                out.violations += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelTables;

    #[test]
    fn forms_vanish_at_zero() {
        let mesh = TimeMesh::graded(1.0, 16, 2.0).unwrap();
        let t = KernelTables::new(&mesh);
        let omega = vec![0.0; 15];
        assert_eq!(quadratic_form_b(&t.bdf2, &omega), 0.0);
        assert_eq!(quadratic_form_theta(&t.doc, &omega), 0.0);
    }

    #[test]
    fn single_entry_forms() {
        let mesh = TimeMesh::graded(1.0, 8, 3.0).unwrap();
        let t = KernelTables::new(&mesh);
        assert_eq!(quadratic_form_b(&t.bdf2, &[1.0]), 2.0 * t.bdf2.b0(2));
        assert_eq!(quadratic_form_theta(&t.doc, &[1.0]), 2.0 * t.doc.get(2, 0));
        assert!(t.doc.get(2, 0) > 0.0);
    }

    #[test]
    fn identities_on_small_mesh() {
        let mesh = TimeMesh::graded(2.0, 30, 4.0).unwrap();
        let t = KernelTables::new(&mesh);
        assert!(orthogonality_residual(&t.bdf2, &t.doc) < 1e-12);
        assert!(completeness_residual(&t.bdf2, &t.dcc) < 1e-12);
        assert!(relation_residual(&t.doc, &t.dcc) < 1e-12);
        assert!(doc_sum_residual(&mesh, &t.doc) < 1e-12);
        assert!(dcc_sum_residual(&mesh, &t.dcc) < 1e-12);
        assert!(doc_min(&t.doc) > 0.0);
        let u: Vec<f64> = (0..=30).map(|k| (k as f64 * 0.37).sin()).collect();
        assert!(dcc_telescoping_residual(&t.bdf2, &t.dcc, &u) < 1e-12);
        assert!(doc_telescoping_residual(&t.bdf2, &t.doc, &u) < 1e-12);
    }

    #[test]
    fn dcc_never_exceeds_twice_max_step() {
        for gamma in [1.0, 2.0, 3.0, 4.0] {
            let mesh = TimeMesh::graded(1.0, 100, gamma).unwrap();
            let t = KernelTables::new(&mesh);
            let cap = 2.0 * mesh.max_step();
            for n in 1..=100 {
                assert!(t.dcc.p.row(n).iter().all(|&p| p <= cap * (1.0 + 1e-14)));
            }
        }
    }

    #[test]
    fn uniform_dcc_bound() {
        let mesh = TimeMesh::uniform(1.0, 50).unwrap();
        let t = KernelTables::new(&mesh);
        let rep = dcc_bound_check(&mesh, &t.dcc).unwrap();
        assert!(rep.holds());
        assert!((rep.delta - (r_max() - 1.0)).abs() < 1e-12);
        let tau = mesh.step(1);
        for n in 2..=50 {
            assert!(t.dcc.get(n, n - 2) <= dcc_bound_constant() / rep.delta * tau);
        }
    }

    #[test]
    fn single_level_dcc_bound_is_tight() {
        let mesh = TimeMesh::from_points(vec![0.0, 0.4]).unwrap();
        let t = KernelTables::new(&mesh);
        let rep = dcc_bound_check(&mesh, &t.dcc).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.tightest, (1, 1));
        assert!(rep.min_slack >= 0.0 && rep.min_slack < 1e-15);
    }

    #[test]
    fn bound_check_rejects_a1_violation() {
        let mesh = TimeMesh::from_points(vec![0.0, 0.01, 0.02, 0.2]).unwrap();
        let t = KernelTables::new(&mesh);
        assert!(dcc_bound_check(&mesh, &t.dcc).is_err());
    }
}
