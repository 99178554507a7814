//! Parameter-grid sweeps, CSV persistence and figure presets.

mod config;
pub mod figures;
pub mod svg;

use std::io::{Read, Write};
use std::time::Instant;

use rayon::prelude::*;

use crate::hilbert::{Boundary, StateVector};
use crate::models::{plaquette_observable, ModelConfig, ModelKind};
use crate::resources::{faf, ggm, sre};
use crate::solver::{low_spectrum, sector_spectrum, SolverOptions};
use crate::{Error, Result};

pub use config::{default_grid, logspace, SweepConfig, DEFAULT_SEED};
pub(crate) use config::describe;

pub const CSV_HEADER: [&str; 16] = [
    "model",
    "N",
    "k",
    "L",
    "g2",
    "boundary",
    "energy",
    "gap",
    "gap_same_sector",
    "plaquette",
    "ggm",
    "sre2",
    "faf2",
    "solver_iterations",
    "wall_time_ms",
    "error",
];

/// One grid point. Measured fields stay `None` when the point failed before
/// reaching them, or when they do not apply to the model.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub model: ModelKind,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub l: usize,
    pub g2: f64,
    pub boundary: Boundary,
    pub energy: Option<f64>,
    pub gap: Option<f64>,
    /// Only for models with a nontrivial global symmetry.
    pub gap_same_sector: Option<f64>,
    pub plaquette: Option<f64>,
    pub ggm: Option<f64>,
    pub sre2: Option<f64>,
    /// Only for qubit chains.
    pub faf2: Option<f64>,
    pub solver_iterations: usize,
    pub wall_time_ms: u64,
    pub error: Option<String>,
}

impl SweepResult {
    fn empty(cfg: &ModelConfig) -> Self {
        let zn = cfg.model == ModelKind::Zn;
        Self {
            model: cfg.model,
            n: zn.then_some(cfg.n),
            k: zn.then_some(cfg.k),
            l: cfg.l,
            g2: cfg.g2,
            boundary: cfg.boundary,
            energy: None,
            gap: None,
            gap_same_sector: None,
            plaquette: None,
            ggm: None,
            sre2: None,
            faf2: None,
            solver_iterations: 0,
            wall_time_ms: 0,
            error: None,
        }
    }

    /// The model configuration this row was computed from.
    pub fn config(&self) -> ModelConfig {
        let base = match self.model {
            ModelKind::Su2 => ModelConfig::su2(self.l, self.g2),
            ModelKind::Zn => ModelConfig::zn(self.n.unwrap_or(2), self.k.unwrap_or(0), self.l, self.g2),
            ModelKind::D3 => ModelConfig::d3(self.l, self.g2),
        };
        base.with_boundary(self.boundary)
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    fn validate(&self) -> Result<()> {
        if let Some(g) = self.ggm {
            if !(0.0..1.0).contains(&g) {
                return Err(Error::InvalidArgument(format!("ggm = {g} outside [0, 1) at {}", describe(&self.config()))));
            }
        }
        if let Some(m) = self.sre2 {
            if m.is_nan() || m < -1e-10 {
                return Err(Error::InvalidArgument(format!("sre2 = {m} below zero at {}", describe(&self.config()))));
            }
        }
        Ok(())
    }
}

/// Ground state and derived quantities of one grid point.
pub struct PointState {
    pub result: SweepResult,
    pub state: Option<StateVector>,
}

/// Evaluates one grid point. Failures are stored in the `error` field with
/// every quantity computed so far kept.
pub fn run_point(cfg: &ModelConfig, opts: &SolverOptions) -> PointState {
    let start = Instant::now();
    let mut row = SweepResult::empty(cfg);
    let state = fill(cfg, opts, &mut row).map_err(|e| row.error = Some(e.to_string())).ok();
    row.wall_time_ms = start.elapsed().as_millis() as u64;
    PointState { result: row, state }
}

fn fill(cfg: &ModelConfig, opts: &SolverOptions, row: &mut SweepResult) -> Result<StateVector> {
    let spec = cfg.build()?;
    let full = low_spectrum(&spec, 2, opts)?;
    row.solver_iterations += full.iterations;
    let e0 = full.eigenvalues[0];
    row.energy = Some(e0);
    row.gap = full.gap();

    let mut psi = full.eigenvectors[0].clone();
    if let Some(sym) = cfg.global_symmetry()?.filter(|s| s.order() > 1) {
        let sector = sector_spectrum(&spec, &sym, 2, opts)?;
        row.solver_iterations += sector.iterations;
        row.gap_same_sector = sector.gap();
        if let Some(&es) = sector.eigenvalues.first() {
            if (es - e0).abs() <= opts.degeneracy_tol * e0.abs().max(1.0) {
                psi = sector.eigenvectors[0].clone();
            }
        }
    }

    row.plaquette = Some(plaquette_observable(cfg)?.evaluate(&psi)?);
    row.ggm = Some(ggm(&psi)?);
    row.sre2 = Some(sre(&psi, 2)?);
    if psi.d() == 2 {
        row.faf2 = Some(faf(&psi, 2)?);
    }
    Ok(psi)
}

/// Runs every point on `threads` workers (all cores when `None`); rows come
/// back in grid order.
pub fn run_points(points: &[ModelConfig], opts: &SolverOptions, threads: Option<usize>) -> Result<Vec<SweepResult>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder.build().map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(|| points.par_iter().map(|p| run_point(p, opts).result).collect()))
}

pub fn run_sweep(config: &SweepConfig, threads: Option<usize>) -> Result<Vec<SweepResult>> {
    let opts = SolverOptions::default().with_seed(config.seed);
    run_points(&config.points(), &opts, threads)
}

fn float(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

fn int(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes rows under [`CSV_HEADER`], re-checking `ggm` and `sre2` bounds.
pub fn write_csv<W: Write>(rows: &[SweepResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        r.validate()?;
        w.write_record([
            r.model.to_string(),
            int(r.n),
            int(r.k),
            r.l.to_string(),
            format!("{:.16e}", r.g2),
            r.boundary.to_string(),
            float(r.energy),
            float(r.gap),
            float(r.gap_same_sector),
            float(r.plaquette),
            float(r.ggm),
            float(r.sre2),
            float(r.faf2),
            r.solver_iterations.to_string(),
            r.wall_time_ms.to_string(),
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepResult>> {
    let mut rd = csv::Reader::from_reader(input);
    let bad = |line: usize, msg: String| Error::StateFormat(format!("csv line {line}: {msg}"));
    let header = rd.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(bad(1, format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| bad(line, e.to_string()))?;
        let opt_f = |j: usize| -> Result<Option<f64>> {
            match &rec[j] {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|_| bad(line, format!("bad number `{s}` in {}", CSV_HEADER[j]))),
            }
        };
        let opt_u = |j: usize| -> Result<Option<usize>> {
            match &rec[j] {
                "" => Ok(None),
                s => s.parse().map(Some).map_err(|_| bad(line, format!("bad integer `{s}` in {}", CSV_HEADER[j]))),
            }
        };
        let req = |v: Option<usize>, j: usize| v.ok_or_else(|| bad(line, format!("missing {}", CSV_HEADER[j])));
        rows.push(SweepResult {
            model: rec[0].parse().map_err(|e: Error| bad(line, e.to_string()))?,
            n: opt_u(1)?,
            k: opt_u(2)?,
            l: req(opt_u(3)?, 3)?,
            g2: opt_f(4)?.ok_or_else(|| bad(line, "missing g2".into()))?,
            boundary: rec[5].parse().map_err(|e: Error| bad(line, e.to_string()))?,
            energy: opt_f(6)?,
            gap: opt_f(7)?,
            gap_same_sector: opt_f(8)?,
            plaquette: opt_f(9)?,
            ggm: opt_f(10)?,
            sre2: opt_f(11)?,
            faf2: opt_f(12)?,
            solver_iterations: req(opt_u(13)?, 13)?,
            wall_time_ms: req(opt_u(14)?, 14)? as u64,
            error: Some(rec[15].to_string()).filter(|s| !s.is_empty()),
        });
    }
    Ok(rows)
}
