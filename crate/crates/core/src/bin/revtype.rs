use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use revtype::expr::Params;
use revtype::finite_type::{ScanRange, DEFAULT_SCAN_THRESHOLD};
use revtype::grid::Grid;
use revtype::report::{
    self, Case2Config, Check, OutputFormat, RunConfig, SurfaceSource, ToleranceConfig,
    VerifyOptions, EXIT_INPUT,
};
use revtype::{Error, Result};

#[derive(Parser)]
#[command(
    name = "revtype",
    version,
    about = "Finite-type tests for surfaces of revolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit Δ^III x = A x and classify the surface
    Classify(SurfaceArgs),
    /// Run one residual check: eq2 | eq8 | eq9-vs-eq1 | eq14 | eq15
    Verify {
        check: String,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<f64>,
        /// Override the check's tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// Random field/point pairs for eq9-vs-eq1
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Scan (λ, μ) for a common root of the off-diagonal quartic coefficients
    Case2 {
        /// λ range as lo:hi, or a single value
        #[arg(long, default_value = "-10:10", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "-10:10", allow_hyphen_values = true)]
        mu: String,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        #[arg(long, default_value_t = DEFAULT_SCAN_THRESHOLD)]
        threshold: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// List or export built-in surfaces
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    /// Print an entry as a profile file
    Export {
        name: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Built-in surface: catenoid | sphere | torus | broken-line
    #[arg(long, conflicts_with = "profile")]
    catalog: Option<String>,
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Profile file (TOML)
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Grid as NSxNTHETA, e.g. 32x32
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    ns: Option<usize>,
    #[arg(long)]
    ntheta: Option<usize>,
    #[arg(long)]
    tol_arc: Option<f64>,
    #[arg(long)]
    tol_parab: Option<f64>,
    #[arg(long)]
    tol_fit: Option<f64>,
    #[arg(long)]
    tol_struct: Option<f64>,
    #[arg(long)]
    tol_reject: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

fn params(list: &[String]) -> Result<Params> {
    list.iter().map(|t| report::parse_param(t)).collect()
}

impl SurfaceArgs {
    fn config(&self) -> Result<RunConfig> {
        let source = match (&self.catalog, &self.profile) {
            (Some(name), None) => SurfaceSource::Catalog {
                name: name.clone(),
                params: params(&self.params)?,
            },
            (None, Some(path)) if self.params.is_empty() => {
                SurfaceSource::File { path: path.clone() }
            }
            (None, Some(_)) => {
                return Err(Error::Usage("--param applies to --catalog only".into()))
            }
            _ => return Err(Error::Usage("give one of --catalog or --profile".into())),
        };
        let mut grid = Grid::default();
        if let Some(g) = &self.grid {
            let (a, b) = g
                .split_once('x')
                .ok_or_else(|| Error::Usage(format!("grid `{g}` is not NSxNTHETA")))?;
            let n = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| Error::Usage(format!("grid `{g}` is not NSxNTHETA")))
            };
            grid = Grid {
                n_s: n(a)?,
                n_theta: n(b)?,
            };
        }
        grid.n_s = self.ns.unwrap_or(grid.n_s);
        grid.n_theta = self.ntheta.unwrap_or(grid.n_theta);
        let d = ToleranceConfig::default();
        Ok(RunConfig {
            source,
            grid,
            tolerances: ToleranceConfig {
                arc: self.tol_arc.unwrap_or(d.arc),
                parab: self.tol_parab.unwrap_or(d.parab),
                fit: self.tol_fit.unwrap_or(d.fit),
                structure: self.tol_struct.unwrap_or(d.structure),
                reject: self.tol_reject.unwrap_or(d.reject),
            },
            output: self.out.output.clone(),
            format: self.out.format.parse()?,
            seed: self.seed,
        })
    }
}

fn run(cli: Cli) -> Result<i32> {
    report::configure_threads()?;
    let (outcome, output) = match cli.command {
        Command::Classify(args) => {
            let cfg = args.config()?;
            (report::classify(&cfg)?, cfg.output)
        }
        Command::Verify {
            check,
            surface,
            lambda,
            mu,
            tol,
            samples,
        } => {
            let cfg = surface.config()?;
            let opts = VerifyOptions {
                check: check.parse::<Check>()?,
                lambda,
                mu,
                tol,
                samples,
            };
            (report::verify(&cfg, &opts)?, cfg.output)
        }
        Command::Case2 {
            lambda,
            mu,
            step,
            threshold,
            out,
        } => {
            let cfg = Case2Config {
                range: ScanRange {
                    lambda: report::parse_range(&lambda)?,
                    mu: report::parse_range(&mu)?,
                    step,
                },
                threshold,
                output: out.output,
                format: out.format.parse::<OutputFormat>()?,
            };
            (report::case2(&cfg)?, cfg.output)
        }
        Command::Catalog { action } => {
            let text = match action {
                CatalogAction::List => report::catalog_list()?,
                CatalogAction::Export { name, params: p } => {
                    report::catalog_export(&name, &params(&p)?)?
                }
            };
            print!("{text}");
            return Ok(0);
        }
    };
    outcome.emit(output.as_ref())?;
    eprintln!("{}", outcome.summary);
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
