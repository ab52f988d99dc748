use boxwell::cli::{
    cmd_dump_matrix, cmd_perturb, cmd_spectrum, cmd_sweep, emit, run_validation, CliError,
    OutputFormat, RunConfig, EXIT_CHECK_FAILED, EXIT_OK,
};
use boxwell::perturbation::E2Source;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "boxwell",
    about = "Eigenvalues of the box-confined quartic oscillator: direct diagonalization \
             cross-checked against second-order perturbation theory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum E2SourceArg {
    Closed,
    Series,
}

#[derive(Args)]
struct CommonArgs {
    /// Oscillator mass (any consistent unit system)
    #[arg(long)]
    mass: Option<f64>,
    /// Reduced Planck constant
    #[arg(long)]
    hbar: Option<f64>,
    /// Box half-width a
    #[arg(long)]
    half_width: Option<f64>,
    /// Quartic coupling λ (0 gives the free box)
    #[arg(long)]
    coupling: Option<f64>,
    /// Number of levels to report
    #[arg(long)]
    levels: Option<usize>,
    /// Hamiltonian matrix dimension
    #[arg(long)]
    matrix_size: Option<usize>,
    /// Series summation cutoff
    #[arg(long)]
    s_max: Option<usize>,
    /// Eigensolver tolerance relative to the Frobenius norm
    #[arg(long)]
    tol: Option<f64>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report energies in reduced units (ε = 1) instead of physical units
    #[arg(long)]
    reduced: bool,
    /// Flat `key = value` config file; CLI flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run sweep cells concurrently
    #[arg(long)]
    parallel: bool,
}

impl CommonArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_config_file(path)?;
        }
        if let Some(v) = self.mass {
            cfg.mass = v;
        }
        if let Some(v) = self.hbar {
            cfg.hbar = v;
        }
        if let Some(v) = self.half_width {
            cfg.half_width = v;
        }
        if let Some(v) = self.coupling {
            cfg.coupling = v;
        }
        if let Some(v) = self.levels {
            cfg.n_levels = v;
        }
        if let Some(v) = self.matrix_size {
            cfg.n_matrix = v;
        }
        if let Some(v) = self.s_max {
            cfg.s_max = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.format {
            cfg.format = match v {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            };
        }
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }
        if self.reduced {
            cfg.reduced = true;
        }
        if self.parallel {
            cfg.parallel = true;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compare diagonalized, closed-form and series energies per level
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Perturbation breakdown E⁽⁰⁾ + E⁽¹⁾ + E⁽²⁾ for one level
    Perturb {
        #[command(flatten)]
        common: CommonArgs,
        /// Quantum number of the level
        #[arg(long, short)]
        r: usize,
        /// Route for the second-order correction
        #[arg(long, value_enum, default_value = "closed")]
        e2_source: E2SourceArg,
    },
    /// Run the oracle cross-check suite and report pass/fail
    Validate {
        #[command(flatten)]
        common: CommonArgs,
        /// Skip the slope study (fast subset)
        #[arg(long)]
        quick: bool,
    },
    /// Residual-vs-coupling sweep with a log-log slope fit
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Level under study
        #[arg(long, short, default_value = "0")]
        r: usize,
        #[arg(long, default_value = "0.02")]
        g_min: f64,
        #[arg(long, default_value = "0.2")]
        g_max: f64,
        #[arg(long, default_value = "4")]
        steps: usize,
    },
    /// Dump the Hamiltonian matrix as row,col,value CSV (reduced units)
    DumpMatrix {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn use_color() -> bool {
    std::env::var_os("BOXWELL_NO_COLOR").is_none()
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Spectrum { common } => {
            let cfg = common.resolve()?;
            emit(&cfg, &cmd_spectrum(&cfg)?)?;
            Ok(EXIT_OK)
        }
        Command::Perturb {
            common,
            r,
            e2_source,
        } => {
            let cfg = common.resolve()?;
            let source = match e2_source {
                E2SourceArg::Closed => E2Source::Closed,
                E2SourceArg::Series => E2Source::Series,
            };
            emit(&cfg, &cmd_perturb(&cfg, r, source)?)?;
            Ok(EXIT_OK)
        }
        Command::Validate { common, quick } => {
            let cfg = common.resolve()?;
            let checks = run_validation(&cfg, quick)?;
            let color = use_color();
            let mut all_passed = true;
            let mut report = String::new();
            for c in &checks {
                all_passed &= c.passed;
                let status = match (c.passed, color) {
                    (true, true) => "\x1b[32mPASS\x1b[0m",
                    (false, true) => "\x1b[31mFAIL\x1b[0m",
                    (true, false) => "PASS",
                    (false, false) => "FAIL",
                };
                report.push_str(&format!("{status} {} ({})\n", c.name, c.detail));
            }
            emit(&cfg, &report)?;
            Ok(if all_passed { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Sweep {
            common,
            r,
            g_min,
            g_max,
            steps,
        } => {
            let cfg = common.resolve()?;
            emit(&cfg, &cmd_sweep(&cfg, r, g_min, g_max, steps)?)?;
            Ok(EXIT_OK)
        }
        Command::DumpMatrix { common } => {
            let cfg = common.resolve()?;
            emit(&cfg, &cmd_dump_matrix(&cfg)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
