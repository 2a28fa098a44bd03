//! Scaling sweeps A(mesh(rIⁿ, h))/rⁿ with resumable CSV output.

use std::collections::HashSet;
use std::fs::OpenOptions;
use std::path::Path;
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundId;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::geometry::cube_mesh;

/// One CSV row: bound,dim,r,h,value,value_over_rn,wall_ms,status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub bound: String,
    pub dim: usize,
    pub r: f64,
    pub h: f64,
    pub value: f64,
    pub value_over_rn: f64,
    pub wall_ms: f64,
    pub status: String,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    fn key(&self) -> (String, usize, u64, u64) {
        (self.bound.clone(), self.dim, self.r.to_bits(), self.h.to_bits())
    }
}

/// Whether values at fixed r are nondecreasing as h shrinks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementCheck {
    pub r: f64,
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub bound: String,
    pub dim: usize,
    pub rows: Vec<SweepRow>,
    pub refinement: Vec<RefinementCheck>,
}

impl SweepRecord {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(SweepRow::is_ok)
    }
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::SizeCapExceeded { .. } => "cap_exceeded",
        Error::Solver(_) => "solver_failure",
        _ => "error",
    }
}

fn evaluate(bound: BoundId, n: usize, r: f64, h: f64, cfg: &Config) -> SweepRow {
    let start = Instant::now();
    let result = cube_mesh(n, r, h).and_then(|m| bound.evaluate(&m, cfg));
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let (value, status) = match result {
        Ok(v) => (v, "ok"),
        Err(e) => (f64::NAN, status_of(&e)),
    };
    SweepRow {
        bound: bound.name(),
        dim: n,
        r,
        h,
        value,
        value_over_rn: value / r.powi(n as i32),
        wall_ms,
        status: status.into(),
    }
}

pub fn read_rows(path: &Path) -> Result<Vec<SweepRow>> {
    if !path.exists() || std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true) {
        return Ok(Vec::new());
    }
    let mut rd = csv::Reader::from_path(path).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    rd.deserialize()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| Error::Parse { line: i + 2, message: e.to_string() }))
        .collect()
}

/// Evaluates `bound` on cube_mesh(n, r, h) for every (r, h). With a CSV
/// path, rows already present are reused and new rows are appended by a
/// single writer as they finish.
pub fn delta_sweep(bound: BoundId, n: usize, r_list: &[f64], h_list: &[f64], cfg: &Config, workers: usize, csv_path: Option<&Path>) -> Result<SweepRecord> {
    if r_list.iter().chain(h_list).any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidArgument("r and h must be positive".into()));
    }
    let existing = match csv_path {
        Some(p) => read_rows(p)?,
        None => Vec::new(),
    };
    let done: HashSet<_> = existing.iter().map(SweepRow::key).collect();
    let name = bound.name();
    let jobs: Vec<(f64, f64)> = r_list
        .iter()
        .flat_map(|&r| h_list.iter().map(move |&h| (r, h)))
        .filter(|&(r, h)| !done.contains(&(name.clone(), n, r.to_bits(), h.to_bits())))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let (tx, rx) = mpsc::channel::<SweepRow>();
    let writer = csv_path.map(|p| {
        let fresh = existing.is_empty() && std::fs::metadata(p).map(|m| m.len() == 0).unwrap_or(true);
        let file = OpenOptions::new().create(true).append(true).open(p);
        std::thread::spawn(move || -> std::io::Result<Vec<SweepRow>> {
            let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file?);
            let mut rows = Vec::new();
            for row in rx {
                w.serialize(&row)?;
                w.flush()?;
                rows.push(row);
            }
            Ok(rows)
        })
    });
    let mut fresh_rows: Vec<SweepRow> = pool.install(|| {
        jobs.par_iter()
            .map_with(tx, |tx, &(r, h)| {
                let row = evaluate(bound, n, r, h, cfg);
                // The receiver only goes away when the writer failed; that
                // failure is reported below.
                let _ = tx.send(row.clone());
                row
            })
            .collect()
    });
    if let Some(handle) = writer {
        handle
            .join()
            .map_err(|_| Error::InvalidArgument("CSV writer panicked".into()))?
            .map_err(|e| Error::InvalidArgument(format!("CSV write failed: {e}")))?;
    }
    let mut rows: Vec<SweepRow> = Vec::new();
    for &r in r_list {
        for &h in h_list {
            let key = (name.clone(), n, r.to_bits(), h.to_bits());
            if let Some(pos) = fresh_rows.iter().position(|x| x.key() == key) {
                rows.push(fresh_rows.swap_remove(pos));
            } else if let Some(old) = existing.iter().find(|x| x.key() == key) {
                rows.push(old.clone());
            }
        }
    }
    let refinement = refinement_checks(&rows);
    Ok(SweepRecord { bound: name, dim: n, rows, refinement })
}

fn refinement_checks(rows: &[SweepRow]) -> Vec<RefinementCheck> {
    let mut rs: Vec<f64> = rows.iter().map(|x| x.r).collect();
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    rs.into_iter()
        .map(|r| {
            let mut at: Vec<&SweepRow> = rows.iter().filter(|x| x.r == r && x.is_ok()).collect();
            at.sort_by(|a, b| b.h.total_cmp(&a.h));
            RefinementCheck {
                r,
                monotone: at.windows(2).all(|w| w[1].value >= w[0].value - 1e-5),
            }
        })
        .collect()
}
