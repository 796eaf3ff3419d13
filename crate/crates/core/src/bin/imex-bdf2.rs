use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use imex_bdf2::harness::{
    convergence_study, kernel_report, merton_study, write_convergence_csv, write_kernel_table_csv,
    write_merton_csv, ConfigFile, ErrorMeasure, StudySettings,
};
use imex_bdf2::kernels::KernelTables;
use imex_bdf2::problems::manufactured_problem_on;
use imex_bdf2::{run, Error, MertonParams, Result, SolveOptions, TimeMesh};

#[derive(Parser)]
#[command(name = "imex-bdf2", version, about = "Variable-step IMEX BDF2 for 1-D PIDEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the manufactured problem once and write the final-time solution.
    Solve(StudyArgs),
    /// Temporal convergence table for the manufactured problem.
    Convergence(StudyArgs),
    /// Merton call prices against the series reference.
    Merton(StudyArgs),
    /// Kernel identity and bound diagnostics for one graded mesh.
    Kernels(StudyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Max,
    Final,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long)]
    alpha: Option<f64>,
    /// Grading exponent(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    /// Number of time steps, comma separated for studies.
    #[arg(long = "N", value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Number of spatial intervals, comma separated for the Merton study.
    #[arg(long = "M", value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Final time (maturity for `merton`).
    #[arg(long = "T")]
    t: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "fast-integral", value_enum)]
    fast_integral: Option<Switch>,
    /// Error over all time levels (`max`) or at the final time only.
    #[arg(long, value_enum)]
    measure: Option<Measure>,
    /// Spot prices for `merton`, comma separated.
    #[arg(long, value_delimiter = ',')]
    spot: Option<Vec<f64>>,
    /// Extra CSV with the kernel tables (`kernels` only).
    #[arg(long)]
    table: Option<PathBuf>,
    /// Lift the default caps on N and M.
    #[arg(long)]
    allow_large: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Flag values merged over the optional config file.
struct Settings {
    args: StudyArgs,
    file: ConfigFile,
}

impl Settings {
    fn new(args: StudyArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        Ok(Self { args, file })
    }

    fn scalar<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(match flag {
            Some(v) => v,
            None => self.file.get(key)?.unwrap_or(default),
        })
    }

    fn list<T: FromStr + Clone>(&self, flag: &Option<Vec<T>>, key: &str, default: &[T]) -> Result<Vec<T>> {
        Ok(match flag {
            Some(v) => v.clone(),
            None => self.file.get_list(key)?.unwrap_or_else(|| default.to_vec()),
        })
    }

    fn single<T: FromStr + Clone + Copy>(&self, flag: &Option<Vec<T>>, key: &str, default: T) -> Result<T> {
        let v = self.list(flag, key, &[default])?;
        match v.as_slice() {
            [x] => Ok(*x),
            _ => Err(Error::Config(format!("{key} takes a single value here"))),
        }
    }

    fn fast_integral(&self) -> Result<bool> {
        match self.args.fast_integral {
            Some(s) => Ok(matches!(s, Switch::On)),
            None => match self.file.get_str("fast-integral") {
                None | Some("on") => Ok(true),
                Some("off") => Ok(false),
                Some(v) => Err(Error::Config(format!("fast-integral must be on or off, got {v:?}"))),
            },
        }
    }

    fn measure(&self) -> Result<ErrorMeasure> {
        let m = match self.args.measure {
            Some(m) => m,
            None => match self.file.get_str("measure") {
                None | Some("max") => Measure::Max,
                Some("final") => Measure::Final,
                Some(v) => return Err(Error::Config(format!("measure must be max or final, got {v:?}"))),
            },
        };
        Ok(match m {
            Measure::Max => ErrorMeasure::MaxOverLevels,
            Measure::Final => ErrorMeasure::FinalTime,
        })
    }

    fn study(&self) -> Result<StudySettings> {
        let allow_large = self.args.allow_large || self.file.get::<bool>("allow-large")?.unwrap_or(false);
        Ok(StudySettings {
            measure: self.measure()?,
            fast_integral: self.fast_integral()?,
            allow_large,
            parallel: true,
        })
    }

    fn out(&self) -> Option<PathBuf> {
        self.args.out.clone().or_else(|| self.file.get_str("out").map(PathBuf::from))
    }

    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match self.out() {
            Some(p) => Box::new(BufWriter::new(File::create(&p)?)),
            None => Box::new(io::stdout().lock()),
        })
    }
}

fn solve(s: &Settings) -> Result<()> {
    let alpha = s.scalar(s.args.alpha, "alpha", 0.5)?;
    let gamma = s.single(&s.args.gamma, "gamma", 2.0 / alpha)?;
    let n = s.single(&s.args.n, "N", 256)?;
    let m = s.single(&s.args.m, "M", 256)?;
    let t = s.scalar(s.args.t, "T", 1.0)?;
    let problem = manufactured_problem_on(alpha, t)?;
    let grid = problem.grid(m)?;
    let mesh = TimeMesh::graded(t, n, gamma)?;
    let opts = SolveOptions { fast_integral: s.fast_integral()?, ..Default::default() };
    let res = run(&problem, &grid, &mesh, &opts)?;

    let mut w = csv::Writer::from_writer(s.writer()?);
    w.write_record(["x", "u", "exact"])?;
    for (i, &u) in res.final_solution().iter().enumerate() {
        let x = grid.node(i);
        let exact = problem.exact_at(x, t).unwrap_or(f64::NAN);
        w.write_record([format!("{x:.16e}"), format!("{u:.16e}"), format!("{exact:.16e}")])?;
    }
    w.flush()?;

    let d = &res.diagnostics;
    eprintln!("final-time error {:.6e}", res.final_error().unwrap_or(f64::NAN));
    eprintln!("max level error  {:.6e}", res.max_level_error().unwrap_or(f64::NAN));
    eprintln!("ratio margin     {:.6e}", d.delta);
    match d.stability_bound {
        Some(b) => eprintln!("tau_max {:.6e} vs step bound {:.6e} ({})", d.tau_max, b, if d.bound_satisfied { "within" } else { "above" }),
        None => eprintln!("tau_max {:.6e}, step bound unavailable", d.tau_max),
    }
    eprintln!("wall time        {:.3?}", res.wall_time);
    Ok(())
}

fn convergence(s: &Settings) -> Result<()> {
    let alpha = s.scalar(s.args.alpha, "alpha", 0.5)?;
    let gammas = s.list(&s.args.gamma, "gamma", &[1.0, 2.0, 3.0, 4.0])?;
    let ns = s.list(&s.args.n, "N", &[128, 256, 512, 1024])?;
    let m = s.single(&s.args.m, "M", 2048)?;
    let t = s.scalar(s.args.t, "T", 1.0)?;
    let problem = manufactured_problem_on(alpha, t)?;
    let report = convergence_study(&problem, &gammas, &ns, m, &s.study()?)?;
    write_convergence_csv(&report, s.writer()?)
}

fn merton(s: &Settings) -> Result<()> {
    let ms = s.list(&s.args.m, "M", &[128, 256, 512])?;
    let ns = s.list(&s.args.n, "N", &ms)?;
    if ms.len() != ns.len() {
        return Err(Error::Config(format!("{} values of M but {} values of N", ms.len(), ns.len())));
    }
    let gamma = s.single(&s.args.gamma, "gamma", 4.0)?;
    let spots = s.list(&s.args.spot, "spot", &[90.0, 100.0, 110.0])?;
    let mut params = MertonParams::default();
    params.maturity = s.scalar(s.args.t, "T", params.maturity)?;
    let pairs: Vec<(usize, usize)> = ms.into_iter().zip(ns).collect();
    let report = merton_study(&params, &pairs, &spots, gamma, &s.study()?)?;
    write_merton_csv(&report, s.writer()?)
}

fn kernels(s: &Settings) -> Result<()> {
    let n = s.single(&s.args.n, "N", 64)?;
    let gamma = s.single(&s.args.gamma, "gamma", 2.0)?;
    let t = s.scalar(s.args.t, "T", 1.0)?;
    let mesh = if n == 1 { TimeMesh::from_points(vec![0.0, t])? } else { TimeMesh::graded(t, n, gamma)? };
    let report = kernel_report(&mesh, 20, 1000, 0x5eed);
    report.write_to(s.writer()?)?;
    if let Some(path) = s.args.table.clone().or_else(|| s.file.get_str("table").map(PathBuf::from)) {
        write_kernel_table_csv(&KernelTables::new(&mesh), BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => Settings::new(a).and_then(|s| solve(&s)),
        Command::Convergence(a) => Settings::new(a).and_then(|s| convergence(&s)),
        Command::Merton(a) => Settings::new(a).and_then(|s| merton(&s)),
        Command::Kernels(a) => Settings::new(a).and_then(|s| kernels(&s)),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
