//! Command-line front end. [`run`] takes the arguments and output streams so
//! it can be driven from tests; the binary only forwards to it.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dynamics::{
    growth_rate, linearity_check, linearity_check_exact, simulate, write_csv, StateVector,
};
use crate::format::sig15;
use crate::oracle::scalar_roots;
use crate::spectral::{
    classify_region, eigen_set, exact_eigenpair, extend_full, lambda_nonneg, reduced_eigenvector,
    residual_ev, residual_s, residual_ss, residual_sz, z_transform, ReducedEigenpair, Regime,
    ZVector, DEFAULT_TOLERANCE,
};
use crate::traffic::{
    allocate, parse_config, DerivedParams, JunctionConvention, TrafficConfig, TrafficError,
};

#[derive(Debug, Parser)]
#[command(
    name = "tropica",
    version,
    about = "Eigenvalues and dynamics of a two-ring traffic junction"
)]
struct Cli {
    /// Absolute tolerance for every residual and linearity check.
    #[arg(long, global = true, env = "TROPICA_TOL")]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the traffic constraints and print the derived quantities.
    Validate { config: PathBuf },
    /// Print the region, the eigenvalues and their eigenvectors.
    Eigen(EigenArgs),
    /// Run the dynamics and write the trajectory as CSV.
    Simulate(SimulateArgs),
    /// Tabulate the eigenvalues over a density grid as CSV.
    Sweep(SweepArgs),
    /// Evaluate a residual for a user-supplied eigenvalue and vector.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct EigenArgs {
    config: PathBuf,
    /// Also print the full eigenvectors.
    #[arg(long)]
    full: bool,
    /// Check every residual and exit 1 if one exceeds the tolerance.
    #[arg(long)]
    verify: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Init {
    Eigen,
    Zero,
    File,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    config: PathBuf,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, value_enum, default_value = "zero")]
    init: Init,
    /// JSON array with the initial state, for `--init file`.
    #[arg(long)]
    init_file: Option<PathBuf>,
    /// Growth-rate window; defaults to half the run.
    #[arg(long)]
    window: Option<usize>,
    /// Regime of the starting eigenvector, for `--init eigen`.
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long, default_value = "EV")]
    convention: JunctionConvention,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "UPPER")]
enum System {
    Ev,
    Ss,
    S,
    Sz,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "UPPER")]
enum RegimeArg {
    R1,
    R2,
    R3,
    R4,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::R1 => Regime::R1,
            RegimeArg::R2 => Regime::R2,
            RegimeArg::R3 => Regime::R3,
            RegimeArg::R4 => Regime::R4,
        }
    }
}

#[derive(Debug, Args)]
struct VerifyArgs {
    config: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    /// File holding a JSON array: the full vector for EV and SS,
    /// `[x_1, x_n, x_{n+1}, x_{n+m}]` for S, `[z_1, z_n, z_{n+1}, z_{n+m}]` for SZ.
    #[arg(long)]
    x: PathBuf,
    #[arg(long, value_enum)]
    system: System,
}

/// Why a command stopped; maps to the exit code.
enum Failure {
    /// Bad input (exit 2).
    Usage(String),
    /// A check came out false (exit 1).
    Check(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Runs the command line `args` (including the program name) and returns the
/// process exit code: 0 on success, 1 when a check fails, 2 on bad input.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let tol = cli.tol.unwrap_or(DEFAULT_TOLERANCE);
    if !(tol.is_finite() && tol >= 0.0) {
        let _ = writeln!(
            err,
            "error: tolerance must be a nonnegative number, got {tol}"
        );
        return 2;
    }
    let result = match cli.command {
        Command::Validate { config } => cmd_validate(&config, out),
        Command::Eigen(args) => cmd_eigen(&args, tol, out),
        Command::Simulate(args) => cmd_simulate(&args, tol, out, err),
        Command::Sweep(args) => cmd_sweep(&args, out),
        Command::Verify(args) => cmd_verify(&args, tol, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "check failed: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Loads a configuration. Constraint violations are check failures; anything
/// else wrong with the document is bad input.
fn load_config(path: &Path) -> Result<TrafficConfig, Failure> {
    parse_config(&read_text(path)?).map_err(|e| match e {
        TrafficError::InvalidConfig(_) | TrafficError::DensityOutOfRange(_) => {
            Failure::Check(e.to_string())
        }
        _ => Failure::Usage(format!("{}: {e}", path.display())),
    })
}

fn load_vector(path: &Path) -> Result<Vec<f64>, Failure> {
    serde_json::from_str(&read_text(path)?).map_err(|e| {
        Failure::Usage(format!(
            "{}: expected a JSON array of numbers: {e}",
            path.display()
        ))
    })
}

fn derive(config: &TrafficConfig) -> Result<DerivedParams, Failure> {
    config.derive().map_err(|e| Failure::Check(e.to_string()))
}

fn join(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|&v| sig15(v)).collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_validate(path: &Path, out: &mut dyn Write) -> Outcome {
    let config = load_config(path)?;
    let p = derive(&config)?;
    writeln!(
        out,
        "valid: n={} m={} convention={}",
        p.n, p.m, config.convention
    )?;
    for (name, v) in [
        ("d", p.d),
        ("r", p.r),
        ("rho", p.rho),
        ("b_n", p.b_n),
        ("bbar_n", p.bbar_n),
        ("b_m", p.b_m),
        ("bbar_m", p.bbar_m),
        ("d1", p.d1),
        ("d2", p.d2),
    ] {
        writeln!(out, "{name}={}", sig15(v))?;
    }
    Ok(())
}

fn reduced_line(pair: &ReducedEigenpair) -> String {
    join(&pair.as_array())
}

fn cmd_eigen(args: &EigenArgs, tol: f64, out: &mut dyn Write) -> Outcome {
    let config = load_config(&args.config)?;
    let p = derive(&config)?;
    let region = classify_region(&p);
    writeln!(
        out,
        "region {} [{}, {}{}  d={} d1={} d2={} r={}",
        region.label,
        sig15(region.lo),
        sig15(region.hi),
        if region.label == crate::spectral::Region::F {
            "]"
        } else {
            ")"
        },
        sig15(p.d),
        sig15(p.d1),
        sig15(p.d2),
        sig15(p.r)
    )?;
    let roots = scalar_roots(&p);
    for (lo, hi) in &roots.intervals {
        writeln!(
            out,
            "note: the characteristic function vanishes on [{}, {}]",
            sig15(*lo),
            sig15(*hi)
        )?;
    }
    let mut failures = Vec::new();
    for ev in eigen_set(&p) {
        let tags: Vec<String> = ev.regimes.iter().map(ToString::to_string).collect();
        writeln!(
            out,
            "lambda={} regimes={}",
            sig15(ev.lambda),
            tags.join(",")
        )?;
        for &g in &ev.regimes {
            let pair = reduced_eigenvector(&p, g).map_err(|e| Failure::Check(e.to_string()))?;
            writeln!(
                out,
                "  {g} reduced (x_1, x_n, x_n+1, x_n+m) = {}",
                reduced_line(&pair)
            )?;
            let full = extend_full(&config, &pair).map_err(|e| Failure::Check(e.to_string()))?;
            if args.full {
                writeln!(out, "  {g} full x = {}", join(&full.x))?;
            }
            if args.verify {
                let mut checks = vec![
                    ("S", residual_s(&p, &pair)),
                    (
                        "SS",
                        residual_ss(&config, full.lambda, &full.x).expect("length n+m"),
                    ),
                    (
                        "EV",
                        residual_ev(&config, full.lambda, &full.x).expect("length n+m"),
                    ),
                ];
                let zt = z_transform(&pair, p.m);
                if zt.lambda_positive {
                    checks.push(("SZ", residual_sz(&p, pair.lambda, &zt.z)));
                }
                let parts: Vec<String> = checks
                    .iter()
                    .map(|(name, v)| format!("{name}={}", sig15(*v)))
                    .collect();
                writeln!(out, "  {g} residuals {}", parts.join(" "))?;
                for (name, v) in checks {
                    if v > tol {
                        failures.push(format!("{g} {name} residual {} > {}", sig15(v), sig15(tol)));
                    }
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failures.join("; ")))
    }
}

fn cmd_simulate(
    args: &SimulateArgs,
    tol: f64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let config = load_config(&args.config)?;
    let p = derive(&config)?;
    let size = config.size();
    let mut eigen = None;
    let x0 = match args.init {
        Init::Zero => vec![0.0; size],
        Init::File => {
            let path = args
                .init_file
                .as_ref()
                .ok_or_else(|| Failure::Usage("--init file needs --init-file".into()))?;
            let x = load_vector(path)?;
            if x.len() != size {
                return Err(Failure::Usage(format!(
                    "initial state has {} entries, expected {size}",
                    x.len()
                )));
            }
            x
        }
        Init::Eigen => {
            let regime = match args.regime {
                Some(r) => r.into(),
                None => eigen_set(&p)[0].regimes[0],
            };
            let pair =
                reduced_eigenvector(&p, regime).map_err(|e| Failure::Usage(e.to_string()))?;
            let full = extend_full(&config, &pair).map_err(|e| Failure::Check(e.to_string()))?;
            let x = full.x.clone();
            eigen = Some((regime, full));
            x
        }
    };
    let traj = simulate(&config, &StateVector::initial(x0), args.steps)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let summary: &mut dyn Write = match &args.out {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            write_csv(&traj, io::BufWriter::new(file))
                .map_err(|e| Failure::Usage(e.to_string()))?;
            out
        }
        None => {
            write_csv(&traj, &mut *out).map_err(|e| Failure::Usage(e.to_string()))?;
            err
        }
    };
    let window = args.window.unwrap_or(args.steps / 2);
    if window > 0 || args.window.is_some() {
        let g = growth_rate(&traj, window).map_err(|e| Failure::Usage(e.to_string()))?;
        writeln!(
            summary,
            "growth over last {window} steps: min={} mean={} max={}",
            sig15(g.min),
            sig15(g.mean),
            sig15(g.max)
        )?;
    }
    if let Some((regime, full)) = eigen {
        let float_dev = linearity_check(&config, &full, args.steps);
        let exact = exact_eigenpair(&config, regime).map_err(|e| Failure::Check(e.to_string()))?;
        let exact_dev = linearity_check_exact(&config, &exact, args.steps);
        writeln!(
            summary,
            "eigenvector {regime} lambda={}: linearity deviation exact={} float={}",
            sig15(full.lambda),
            sig15(exact_dev),
            sig15(float_dev)
        )?;
        if exact_dev > tol {
            return Err(Failure::Check(format!(
                "linearity deviation {} > {}",
                sig15(exact_dev),
                sig15(tol)
            )));
        }
    }
    Ok(())
}

/// One sweep row: density, region and the constructed eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramPoint {
    pub d: f64,
    pub region: crate::spectral::RegionLabel,
    pub lambdas: Vec<f64>,
    pub lambda_corollary: Option<f64>,
    pub d1: f64,
    pub d2: f64,
    pub r: f64,
}

/// The sweep rows at `points` evenly spaced densities in `[0, 1]`.
pub fn sweep_points(
    n: usize,
    m: usize,
    points: usize,
    convention: JunctionConvention,
) -> Result<Vec<DiagramPoint>, TrafficError> {
    (0..points)
        .map(|k| {
            let d = k as f64 / (points - 1) as f64;
            let config = allocate(n, m, d)?.with_convention(convention);
            let p = config.derive()?;
            Ok(DiagramPoint {
                d,
                region: classify_region(&p),
                lambdas: eigen_set(&p).into_iter().map(|e| e.lambda).collect(),
                lambda_corollary: lambda_nonneg(&p).ok(),
                d1: p.d1,
                d2: p.d2,
                r: p.r,
            })
        })
        .collect()
}

/// Writes the sweep table with a header row.
pub fn write_sweep_csv<W: Write>(rows: &[DiagramPoint], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "d",
        "region",
        "lambda_corollary",
        "lambda_count",
        "lambda_1",
        "lambda_2",
        "lambda_3",
        "d1",
        "d2",
        "r",
    ])?;
    for row in rows {
        let lam = |i: usize| row.lambdas.get(i).map(|&v| sig15(v)).unwrap_or_default();
        w.write_record([
            sig15(row.d),
            row.region.label.to_string(),
            row.lambda_corollary.map(sig15).unwrap_or_default(),
            row.lambdas.len().to_string(),
            lam(0),
            lam(1),
            lam(2),
            sig15(row.d1),
            sig15(row.d2),
            sig15(row.r),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Outcome {
    if args.points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }
    let rows = sweep_points(args.n, args.m, args.points, args.convention)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let written = match &args.out {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            write_sweep_csv(&rows, io::BufWriter::new(file))
        }
        None => write_sweep_csv(&rows, &mut *out),
    };
    written.map_err(|e| Failure::Usage(e.to_string()))
}

fn cmd_verify(args: &VerifyArgs, tol: f64, out: &mut dyn Write) -> Outcome {
    let config = load_config(&args.config)?;
    let p = derive(&config)?;
    let v = load_vector(&args.x)?;
    let expected = match args.system {
        System::Ev | System::Ss => config.size(),
        System::S | System::Sz => 4,
    };
    if v.len() != expected {
        return Err(Failure::Usage(format!(
            "vector has {} entries, expected {expected}",
            v.len()
        )));
    }
    let lambda = args.lambda;
    let (name, residual) = match args.system {
        System::Ev => (
            "EV",
            residual_ev(&config, lambda, &v).expect("length checked"),
        ),
        System::Ss => (
            "SS",
            residual_ss(&config, lambda, &v).expect("length checked"),
        ),
        System::S => {
            let pair = ReducedEigenpair {
                lambda,
                x1: v[0],
                xn: v[1],
                xn1: v[2],
                xnm: v[3],
                regime: Regime::R1,
            };
            ("S", residual_s(&p, &pair))
        }
        System::Sz => {
            let z = ZVector {
                z1: v[0],
                zn: v[1],
                zn1: v[2],
                znm: v[3],
            };
            ("SZ", residual_sz(&p, lambda, &z))
        }
    };
    writeln!(
        out,
        "{name} residual={} tol={}",
        sig15(residual),
        sig15(tol)
    )?;
    if residual <= tol {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{name} residual {} > {}",
            sig15(residual),
            sig15(tol)
        )))
    }
}
