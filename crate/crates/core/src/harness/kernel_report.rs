use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernels::{
    check_quadratic_forms, completeness_residual, dcc_bound_check, dcc_explicit, dcc_sum_residual,
    dcc_telescoping_residual, doc_min, doc_sum_residual, doc_telescoping_residual, orthogonality_residual,
    relation_residual, DccBoundReport, DccTable, KernelTables,
};
use crate::mesh::{RatioReport, TimeMesh};

/// Worst residuals and bound slacks of the kernel identities on one mesh.
#[derive(Debug, Clone)]
pub struct KernelReport {
    pub n: usize,
    pub gamma: f64,
    pub ratios: RatioReport,
    pub orthogonality: f64,
    pub completeness: f64,
    pub relation: f64,
    pub doc_sum: f64,
    pub dcc_sum: f64,
    pub dcc_cross: f64,
    pub doc_telescoping: f64,
    pub dcc_telescoping: f64,
    pub doc_min: f64,
    pub dcc_bound: Option<DccBoundReport>,
    pub quadratic_draws: usize,
    pub quadratic_b_slack: f64,
    pub quadratic_theta_slack: f64,
    pub quadratic_violations: usize,
}

/// Tolerance on every identity residual.
const IDENTITY_TOL: f64 = 1e-12;

fn max_relative_difference(a: &DccTable, b: &DccTable) -> f64 {
    let mut worst = 0.0f64;
    for n in 1..=a.len() {
        for (x, y) in a.p.row(n).iter().zip(b.p.row(n)) {
            worst = worst.max((x - y).abs() / y.abs().max(f64::MIN_POSITIVE));
        }
    }
    worst
}

/// Run every kernel check on `mesh`: `sequences` random sequences for the
/// telescoping identities and `draws` random weight vectors for the
/// quadratic-form bounds.
pub fn kernel_report(mesh: &TimeMesh, sequences: usize, draws: usize, seed: u64) -> KernelReport {
    let tables = KernelTables::new(mesh);
    let explicit = dcc_explicit(mesh);
    let ratios = mesh.ratio_report();
    let n = mesh.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (mut doc_tel, mut dcc_tel) = (0.0f64, 0.0f64);
    for _ in 0..sequences {
        let u: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
        doc_tel = doc_tel.max(doc_telescoping_residual(&tables.bdf2, &tables.doc, &u));
        dcc_tel = dcc_tel.max(dcc_telescoping_residual(&tables.bdf2, &tables.dcc, &u));
    }

    let delta = ratios.delta_margin;
    let (mut b_slack, mut theta_slack, mut violations) = (f64::INFINITY, f64::INFINITY, 0);
    let mut performed = 0;
    if n >= 2 && ratios.satisfies_a1 {
        for _ in 0..draws {
            let omega: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
            let check = check_quadratic_forms(mesh, &tables.bdf2, &tables.doc, &omega, delta);
            b_slack = b_slack.min(check.b_slack);
            theta_slack = theta_slack.min(check.theta_slack);
            violations += usize::from(!check.holds());
            performed += 1;
        }
    }

    KernelReport {
        n,
        gamma: mesh.gamma(),
        ratios,
        orthogonality: orthogonality_residual(&tables.bdf2, &tables.doc),
        completeness: completeness_residual(&tables.bdf2, &tables.dcc),
        relation: relation_residual(&tables.doc, &tables.dcc),
        doc_sum: doc_sum_residual(mesh, &tables.doc),
        dcc_sum: dcc_sum_residual(mesh, &tables.dcc),
        dcc_cross: max_relative_difference(&tables.dcc, &explicit),
        doc_telescoping: doc_tel,
        dcc_telescoping: dcc_tel,
        doc_min: doc_min(&tables.doc),
        dcc_bound: dcc_bound_check(mesh, &tables.dcc).ok(),
        quadratic_draws: performed,
        quadratic_b_slack: b_slack,
        quadratic_theta_slack: theta_slack,
        quadratic_violations: violations,
    }
}

impl KernelReport {
    pub fn identities_pass(&self) -> bool {
        [
            self.orthogonality,
            self.completeness,
            self.relation,
            self.doc_sum,
            self.dcc_sum,
            self.dcc_cross,
            self.doc_telescoping,
            self.dcc_telescoping,
        ]
        .iter()
        .all(|&r| r <= IDENTITY_TOL)
            && self.doc_min > 0.0
    }

    pub fn passes(&self) -> bool {
        self.identities_pass()
            && self.quadratic_violations == 0
            && self.dcc_bound.is_none_or(|b| b.holds())
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(w, "N = {}", self.n)?;
        writeln!(w, "gamma = {}", self.gamma)?;
        writeln!(w, "r2 = {}", self.ratios.r2.map_or("none".into(), |r| format!("{r:.12e}")))?;
        writeln!(w, "r_max_observed = {:.12e}", self.ratios.r_max_observed)?;
        writeln!(w, "delta_margin = {:.12e}", self.ratios.delta_margin)?;
        writeln!(w, "satisfies_a1 = {}", self.ratios.satisfies_a1)?;
        for (name, v) in [
            ("orthogonality_residual", self.orthogonality),
            ("completeness_residual", self.completeness),
            ("relation_residual", self.relation),
            ("doc_sum_residual", self.doc_sum),
            ("dcc_sum_residual", self.dcc_sum),
            ("dcc_cross_residual", self.dcc_cross),
            ("doc_telescoping_residual", self.doc_telescoping),
            ("dcc_telescoping_residual", self.dcc_telescoping),
        ] {
            writeln!(w, "{name} = {v:.3e} {}", verdict(v <= IDENTITY_TOL))?;
        }
        writeln!(w, "doc_min = {:.6e} {}", self.doc_min, verdict(self.doc_min > 0.0))?;
        match &self.dcc_bound {
            Some(b) => {
                writeln!(w, "dcc_bound_min_slack = {:.6e} {}", b.min_slack, verdict(b.holds()))?;
                writeln!(w, "dcc_bound_min_relative_slack = {:.6e}", b.min_relative_slack)?;
                writeln!(w, "dcc_bound_tightest = ({}, {})", b.tightest.0, b.tightest.1)?;
            }
            None => writeln!(w, "dcc_bound = skipped (no positive ratio margin)")?,
        }
        writeln!(w, "quadratic_draws = {}", self.quadratic_draws)?;
        if self.quadratic_draws > 0 {
            writeln!(w, "quadratic_b_min_slack = {:.6e}", self.quadratic_b_slack)?;
            writeln!(w, "quadratic_theta_min_slack = {:.6e}", self.quadratic_theta_slack)?;
        }
        writeln!(w, "quadratic_violations = {} {}", self.quadratic_violations, verdict(self.quadratic_violations == 0))?;
        writeln!(w, "overall = {}", verdict(self.passes()))
    }
}
