use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use lgt_resources::hilbert::{read_state, write_state, Boundary};
use lgt_resources::models::{plaquette_observable, ModelConfig, ModelKind};
use lgt_resources::resources::{faf, ggm, sre};
use lgt_resources::solver::SolverOptions;
use lgt_resources::sweep::figures::{plots, table1, table1_csv, Column, Figure};
use lgt_resources::sweep::{run_point, run_points, write_csv, SweepConfig, SweepResult, DEFAULT_SEED};
use lgt_resources::zn_analytics::{analytic_sre_pair, pair_state};
use lgt_resources::Error;

/// Ground-state entanglement, magic and fermionic non-Gaussianity of
/// one-dimensional lattice gauge chains.
#[derive(Parser)]
#[command(name = "lgt-resources", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed of the Lanczos start vectors (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Write SVG plots next to the CSV.
    #[arg(long, global = true, overrides_with = "no_svg")]
    svg: bool,
    #[arg(long, global = true, action = ArgAction::SetTrue, overrides_with = "svg")]
    no_svg: bool,
    /// Boundary condition (default: periodic for SU2/ZN, open for D3).
    #[arg(long, global = true)]
    boundary: Option<Boundary>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the grid described by a TOML file.
    Sweep { config: PathBuf },
    /// Run a bundled preset: fig2, fig3, fig4 or table1.
    Figure { name: String },
    /// Degenerate uniform configurations of the ZN chain.
    Table1,
    /// Ground-state resources at a single coupling.
    Resources {
        #[arg(long)]
        model: ModelKind,
        #[arg(long)]
        g2: f64,
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long = "L", default_value_t = 4)]
        l: usize,
        /// D3 electric energies, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 3)]
        epsilon: Option<Vec<f64>>,
        /// Save the ground state in binary form.
        #[arg(long)]
        dump_state: Option<PathBuf>,
        /// Evaluate resources on a saved state instead of solving.
        #[arg(long)]
        load_state: Option<PathBuf>,
    },
    /// Closed-form M2 of the ZN pair state (|a..a> + |b..b>)/sqrt 2.
    AnalyticSre {
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "L")]
        l: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Also enumerate all Pauli strings of the state.
        #[arg(long)]
        verify: bool,
    },
}

enum Failure {
    Config(String),
    Points(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence { .. }
            | Error::SymmetryViolation(_)
            | Error::BudgetExceeded { .. }
            | Error::SelfCheck(_)
            | Error::NotNormalized(_) => Failure::Points(e.to_string()),
            e => Failure::Config(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Points(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Config(format!("{}: {e}", path.display()))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let svg = !cli.no_svg;
    match &cli.command {
        Command::Sweep { config } => {
            let mut cfg = SweepConfig::load(config)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if let Some(b) = cli.boundary {
                cfg.boundary = Some(b);
                for p in cfg.points() {
                    p.validate()?;
                }
            }
            let stem = config.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep").to_string();
            let opts = SolverOptions::default().with_seed(cfg.seed);
            let rows = run_points(&cfg.points(), &opts, cli.threads)?;
            let cols = [Column::Plaquette, Column::Ggm, Column::Sre2Density, Column::Faf2Density, Column::Gap, Column::GapSameSector];
            emit(cli, &stem, &rows, if svg { &cols[..] } else { &[] })
        }
        Command::Figure { name } => {
            let fig: Figure = name.parse()?;
            if fig == Figure::Table1 {
                return write_table1(cli);
            }
            let mut points = fig.points();
            if let Some(b) = cli.boundary {
                points.iter_mut().for_each(|p| p.boundary = b);
                for p in &points {
                    p.validate()?;
                }
            }
            let opts = SolverOptions::default().with_seed(cli.seed.unwrap_or(DEFAULT_SEED));
            let rows = run_points(&points, &opts, cli.threads)?;
            emit(cli, &fig.to_string(), &rows, if svg { fig.columns() } else { &[] })
        }
        Command::Table1 => write_table1(cli),
        Command::Resources { model, g2, n, k, l, epsilon, dump_state, load_state } => {
            let mut cfg = match model {
                ModelKind::Su2 => ModelConfig::su2(*l, *g2),
                ModelKind::Zn => ModelConfig::zn(*n, *k, *l, *g2),
                ModelKind::D3 => ModelConfig::d3(*l, *g2),
            };
            if let Some(e) = epsilon {
                cfg = cfg.with_epsilon([e[0], e[1], e[2]]);
            }
            if let Some(b) = cli.boundary {
                cfg = cfg.with_boundary(b);
            }
            cfg.validate()?;
            let row = match load_state {
                Some(path) => {
                    let f = fs::File::open(path).map_err(|e| io_err(path, e))?;
                    let psi = read_state(std::io::BufReader::new(f))?;
                    if psi.d() != cfg.local_dim() || psi.sites() != cfg.l {
                        return Err(Failure::Config(format!(
                            "state has d = {}, L = {}; model needs d = {}, L = {}",
                            psi.d(),
                            psi.sites(),
                            cfg.local_dim(),
                            cfg.l
                        )));
                    }
                    resources_of(&cfg, &psi)?
                }
                None => {
                    let opts = SolverOptions::default().with_seed(cli.seed.unwrap_or(DEFAULT_SEED));
                    let point = run_point(&cfg, &opts);
                    if let (Some(path), Some(psi)) = (dump_state, &point.state) {
                        let f = fs::File::create(path).map_err(|e| io_err(path, e))?;
                        write_state(psi, std::io::BufWriter::new(f))?;
                    }
                    point.result
                }
            };
            write_csv(std::slice::from_ref(&row), std::io::stdout().lock())?;
            match row.error {
                Some(e) => Err(Failure::Points(e)),
                None => Ok(()),
            }
        }
        Command::AnalyticSre { n, l, a, b, verify } => {
            let m2 = analytic_sre_pair(*n, *l, *a, *b)?;
            println!("M2 = {m2:.16e}");
            if *verify {
                let brute = sre(&pair_state(*n, *l, *a, *b)?, 2)?;
                println!("enumerated = {brute:.16e}");
                println!("difference = {:.3e}", (m2 - brute).abs());
            }
            Ok(())
        }
    }
}

fn resources_of(cfg: &ModelConfig, psi: &lgt_resources::hilbert::StateVector) -> Result<SweepResult, Failure> {
    let spec = cfg.build()?;
    let zn = cfg.model == ModelKind::Zn;
    Ok(SweepResult {
        model: cfg.model,
        n: zn.then_some(cfg.n),
        k: zn.then_some(cfg.k),
        l: cfg.l,
        g2: cfg.g2,
        boundary: cfg.boundary,
        energy: Some(spec.expectation(psi)?.re),
        gap: None,
        gap_same_sector: None,
        plaquette: Some(plaquette_observable(cfg)?.evaluate(psi)?),
        ggm: Some(ggm(psi)?),
        sre2: Some(sre(psi, 2)?),
        faf2: if psi.d() == 2 { Some(faf(psi, 2)?) } else { None },
        solver_iterations: 0,
        wall_time_ms: 0,
        error: None,
    })
}

fn write_table1(cli: &Cli) -> Result<(), Failure> {
    let csv = table1_csv(&table1()?);
    fs::create_dir_all(&cli.out_dir).map_err(|e| io_err(&cli.out_dir, e))?;
    let path = cli.out_dir.join("table1.csv");
    fs::write(&path, &csv).map_err(|e| io_err(&path, e))?;
    print!("{csv}");
    Ok(())
}

fn emit(cli: &Cli, stem: &str, rows: &[SweepResult], columns: &[Column]) -> Result<(), Failure> {
    fs::create_dir_all(&cli.out_dir).map_err(|e| io_err(&cli.out_dir, e))?;
    let path = cli.out_dir.join(format!("{stem}.csv"));
    let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
    write_csv(rows, std::io::BufWriter::new(file))?;
    eprintln!("wrote {}", path.display());
    for (col, svg) in plots(rows, columns) {
        let p = cli.out_dir.join(format!("{stem}_{col}.svg"));
        fs::write(&p, svg).map_err(|e| io_err(&p, e))?;
        eprintln!("wrote {}", p.display());
    }
    let failed: Vec<&SweepResult> = rows.iter().filter(|r| !r.is_ok()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Points(format!("{} of {} points failed", failed.len(), rows.len())))
    }
}
