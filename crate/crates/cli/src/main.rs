use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cliffwave::cwt::{ConstantMode, CwtQuadrature};
use cliffwave_cli::scenario::THEOREMS;
use cliffwave_cli::{run_scenario, CliError, RunReport, Scenario};

#[derive(Parser)]
#[command(
    name = "cliffwave",
    version,
    about = "Clifford-wavelet uncertainty verification runner"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage selected by a scenario file.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        outputs: Outputs,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Blade products against the transposition oracle, involution identities.
    VerifyAlgebra(StageArgs),
    /// Fixed point, round trip, Plancherel, derivative rule.
    VerifyFourier(StageArgs),
    /// Scalarness, A_psi, calibrated C_psi.
    Admissibility(StageArgs),
    /// Fast-path oracle, isometry, reconstruction.
    CwtRoundtrip(StageArgs),
    /// Selected uncertainty evaluators over the test suite.
    Uncertainty(StageArgs),
    /// Convert a JSON run report.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the default scenario as TOML.
    Scenario {
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Args)]
struct Outputs {
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV export path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct StageArgs {
    /// Start from this scenario instead of the built-in default.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long = "grid-n")]
    grid_n: Option<usize>,
    /// Box half-width L; the grid covers [-L, L)^n.
    #[arg(long = "box")]
    half_width: Option<f64>,
    #[arg(long)]
    wavelet: Option<String>,
    /// Scale range and count as MIN:MAX:COUNT.
    #[arg(long, value_parser = parse_scales)]
    scales: Option<(f64, f64, usize)>,
    #[arg(long)]
    spins: Option<usize>,
    /// Evaluator to run; repeatable. Defaults to all six.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(THEOREMS))]
    theorem: Vec<String>,
    #[arg(long = "constant-mode")]
    constant_mode: Option<ConstantMode>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    outputs: Outputs,
}

fn parse_scales(text: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err("expected MIN:MAX:COUNT".into());
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    let count = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("{:?}: {e}", parts[2]))?;
    Ok((num(parts[0])?, num(parts[1])?, count))
}

impl StageArgs {
    fn scenario(&self, stage: &str) -> Result<Scenario, CliError> {
        let mut s = match &self.scenario {
            Some(path) => Scenario::load(path)?,
            None => Scenario::default_for(self.dim.unwrap_or(2)),
        };
        s.stages = vec![stage.to_string()];
        if let Some(d) = self.dim {
            s.dim = d;
        }
        if let Some(n) = self.grid_n {
            s.grid.points = n;
        }
        if let Some(l) = self.half_width {
            s.grid.half_width = l;
        }
        if let Some(w) = &self.wavelet {
            s.wavelet.name = w.clone();
        }
        if let Some((min, max, count)) = self.scales {
            s.quadrature = CwtQuadrature {
                scale_min: min,
                scale_max: max,
                scale_count: count,
                spin_count: s.quadrature.spin_count,
            };
        }
        if let Some(m) = self.spins {
            s.quadrature.spin_count = m;
        }
        if !self.theorem.is_empty() {
            s.theorems = self.theorem.clone();
        }
        if let Some(mode) = self.constant_mode {
            s.constant_mode = mode;
        }
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        self.outputs.apply(&mut s);
        s.validate()?;
        Ok(s)
    }
}

impl Outputs {
    fn apply(&self, s: &mut Scenario) {
        if let Some(p) = &self.out {
            s.output.report = Some(p.clone());
        }
        if let Some(p) = &self.csv {
            s.output.csv = Some(p.clone());
        }
    }
}

fn execute(scenario: &Scenario) -> Result<i32, CliError> {
    let report = run_scenario(scenario)?;
    print!("{}", report.render_text());
    for c in report
        .checks
        .iter()
        .filter(|c| c.status == cliffwave_cli::CheckStatus::Fail)
    {
        eprintln!("FAILED {}", c.diagnostic());
    }
    if let Some(path) = &scenario.output.report {
        report.write_json(path)?;
    }
    if let Some(path) = &scenario.output.csv {
        report.write_csv_file(path)?;
    }
    Ok(report.exit_code())
}

fn convert(input: &Path, format: Format, out: Option<&Path>) -> Result<i32, CliError> {
    let report = RunReport::load(input)?;
    let mut buf = Vec::new();
    match format {
        Format::Csv => report.write_csv(&mut buf)?,
        Format::Json => buf = (report.to_json() + "\n").into_bytes(),
        Format::Text => buf = report.render_text().into_bytes(),
    }
    match out {
        Some(path) => std::fs::write(path, buf).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?,
        None => std::io::stdout().write_all(&buf).map_err(|e| CliError::Io {
            path: "stdout".into(),
            source: e,
        })?,
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run {
            scenario,
            outputs,
            seed,
        } => {
            let mut s = Scenario::load(&scenario)?;
            if let Some(seed) = seed {
                s.seed = seed;
            }
            outputs.apply(&mut s);
            execute(&s)
        }
        Command::VerifyAlgebra(a) => execute(&a.scenario("algebra")?),
        Command::VerifyFourier(a) => execute(&a.scenario("fourier")?),
        Command::Admissibility(a) => execute(&a.scenario("admissibility")?),
        Command::CwtRoundtrip(a) => execute(&a.scenario("cwt_roundtrip")?),
        Command::Uncertainty(a) => execute(&a.scenario("uncertainty")?),
        Command::Report { input, format, out } => convert(&input, format, out.as_deref()),
        Command::Scenario { dim } => {
            let s = Scenario::default_for(dim);
            s.validate()?;
            print!("{}", s.to_toml());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code.clamp(0, 255) as u8)
}
