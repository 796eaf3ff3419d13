//! Fixed CSV schemas. Floats are written with 17 significant digits so that
//! reading a file back reproduces the report exactly.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::kernels::KernelTables;

use super::studies::{ConvergenceReport, ConvergenceRow, MertonReport, MertonRow};

const CONVERGENCE_HEADER: [&str; 6] = ["alpha", "gamma", "N", "M", "error", "order"];
const MERTON_HEADER: [&str; 5] = ["M", "N", "spot", "error", "order"];

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Config(format!("bad {what} value {s:?}")))
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Config(format!("bad {what} value {s:?}")))
}

fn parse_opt(s: &str, what: &str) -> Result<Option<f64>> {
    if s.trim().is_empty() {
        Ok(None)
    } else {
        parse_f64(s, what).map(Some)
    }
}

fn check_header(rdr: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<()> {
    let header = rdr.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    Ok(())
}

pub fn write_convergence_csv(report: &ConvergenceReport, w: impl Write) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(CONVERGENCE_HEADER)?;
    for r in &report.rows {
        wtr.write_record([fmt(r.alpha), fmt(r.gamma), r.n.to_string(), r.m.to_string(), fmt(r.error), fmt_opt(r.order)])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_convergence_csv(r: impl Read) -> Result<ConvergenceReport> {
    let mut rdr = csv::Reader::from_reader(r);
    check_header(&mut rdr, &CONVERGENCE_HEADER)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        rows.push(ConvergenceRow {
            alpha: parse_f64(&rec[0], "alpha")?,
            gamma: parse_f64(&rec[1], "gamma")?,
            n: parse_usize(&rec[2], "N")?,
            m: parse_usize(&rec[3], "M")?,
            error: parse_f64(&rec[4], "error")?,
            order: parse_opt(&rec[5], "order")?,
        });
    }
    Ok(ConvergenceReport { rows })
}

/// The price column is not part of the schema; rows read back carry `NaN`.
pub fn write_merton_csv(report: &MertonReport, w: impl Write) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(MERTON_HEADER)?;
    for r in &report.rows {
        wtr.write_record([r.m.to_string(), r.n.to_string(), fmt(r.spot), fmt(r.error), fmt_opt(r.order)])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_merton_csv(r: impl Read) -> Result<MertonReport> {
    let mut rdr = csv::Reader::from_reader(r);
    check_header(&mut rdr, &MERTON_HEADER)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        rows.push(MertonRow {
            m: parse_usize(&rec[0], "M")?,
            n: parse_usize(&rec[1], "N")?,
            spot: parse_f64(&rec[2], "spot")?,
            price: f64::NAN,
            error: parse_f64(&rec[3], "error")?,
            order: parse_opt(&rec[4], "order")?,
        });
    }
    Ok(MertonReport { rows })
}

/// Kernel tables as `n,j,b0,b1,theta,p` rows (`b0`, `b1` belong to level `n`).
pub fn write_kernel_table_csv(tables: &KernelTables, w: impl Write) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["n", "j", "b0", "b1", "theta", "p"])?;
    for n in 1..=tables.doc.len() {
        for j in 1..=n {
            wtr.write_record([
                n.to_string(),
                j.to_string(),
                fmt(tables.bdf2.b0(n)),
                fmt(tables.bdf2.b1(n)),
                fmt(tables.doc.get(n, n - j)),
                fmt(tables.dcc.get(n, n - j)),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}
