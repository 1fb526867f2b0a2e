//! `optoffload`: command-line front end for the optical-offload toolkit.
//!
//! Every subcommand builds a [`report::RunReport`], prints it as a table (or
//! JSON with `--json`), and writes its CSV/JSON artifacts under `--out-dir`.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use optoffload::optics::{DetectorMode, Encoding};
use optoffload::pareto::ConverterKind;
use optoffload::Ratio;

#[derive(Debug, Parser)]
#[command(name = "optoffload", version, about = "Optical offload cost, physics and speedup analysis")]
pub struct Cli {
    /// Print the report as JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Directory that receives CSV and JSON artifacts.
    #[arg(long, global = true, default_value = "optoffload-out")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a 4f optical convolution and compare it to the exact result.
    Simulate(SimulateArgs),
    /// Amdahl analysis of profiled benchmarks.
    ProfileAnalyze(ProfileArgs),
    /// Converter survey Pareto frontier and feasibility gap.
    Pareto(ParetoArgs),
    /// Offload speedup against problem size for a complexity class.
    Crossover(CrossoverArgs),
    /// Pipeline time breakdown and energy advantage from a config file.
    Costmodel(CostmodelArgs),
    /// Run the brute-force validation suites.
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    IdealComplex,
    Magnitude,
    Intensity,
}

impl From<ModeArg> for DetectorMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::IdealComplex => DetectorMode::IdealComplex,
            ModeArg::Magnitude => DetectorMode::Magnitude,
            ModeArg::Intensity => DetectorMode::Intensity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Amplitude,
    Phase,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Amplitude => Encoding::Amplitude,
            EncodingArg::Phase => Encoding::Phase,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    /// Uniform random values in [0, 1).
    Random,
    /// A single one at the origin.
    Delta,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Grid rows (ignored when --input-a is given).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..), required_unless_present = "input_a")]
    pub rows: Option<u32>,
    /// Grid columns (ignored when --input-a is given).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..), required_unless_present = "input_a")]
    pub cols: Option<u32>,
    #[arg(long, value_enum, default_value_t = ModeArg::IdealComplex)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = EncodingArg::Amplitude)]
    pub encoding: EncodingArg,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=24))]
    pub bit_depth: u32,
    /// Macro-pixel edge length in physical pixels.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub macro_pixel: u32,
    /// Physical pixel pitch in metres.
    #[arg(long, default_value_t = 15e-6)]
    pub pixel_pitch: f64,
    /// Second operand when --input-b is absent.
    #[arg(long, value_enum, default_value_t = KernelArg::Random)]
    pub kernel: KernelArg,
    /// First operand as a grid CSV (real parts are used).
    #[arg(long)]
    pub input_a: Option<PathBuf>,
    /// Second operand as a grid CSV; requires --input-a.
    #[arg(long, requires = "input_a")]
    pub input_b: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "table1"])))]
pub struct ProfileArgs {
    /// Profile CSV, either `benchmark,function,cumulative_s,total_s` or
    /// `benchmark,accel_time_s,total_time_s`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Analyze the bundled benchmark table.
    #[arg(long)]
    pub table1: bool,
    /// Comma-separated function-name substrings counted as accelerable.
    #[arg(long, value_delimiter = ',')]
    pub patterns: Option<Vec<String>>,
    /// Acceleration factor of the offloaded part; `inf` for unbounded.
    #[arg(long, default_value = "inf", value_parser = parse_acceleration)]
    pub p: Ratio,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("survey").required(true).args(["input", "synthetic"])))]
pub struct ParetoArgs {
    /// Converter survey CSV.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Generate this many synthetic records from --seed.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub synthetic: Option<u32>,
    /// DAC or ADC.
    #[arg(long, value_parser = parse_kind)]
    pub kind: ConverterKind,
    /// Target energy per bit in joules.
    #[arg(long)]
    pub target: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CrossoverArgs {
    /// n, nlogn, n2, exp, or const:<k>.
    #[arg(long, default_value = "n", conflicts_with = "tabulated")]
    pub class: String,
    /// Measured op counts as `N,ops` CSV instead of a closed-form class.
    #[arg(long)]
    pub tabulated: Option<PathBuf>,
    /// Seconds per converted element.
    #[arg(long, default_value_t = 1.0)]
    pub t_conv: f64,
    /// Seconds per digital op.
    #[arg(long, default_value_t = 1.0)]
    pub t_digital: f64,
    /// Seconds per analog op.
    #[arg(long, default_value_t = 0.0)]
    pub t_analog: f64,
    /// Converted inputs per unit of N.
    #[arg(long, default_value_t = 1.0)]
    pub inputs_per_n: f64,
    /// Converted outputs per unit of N.
    #[arg(long, default_value_t = 1.0)]
    pub outputs_per_n: f64,
    /// Speedup whose smallest reaching N is reported.
    #[arg(long)]
    pub target: Option<f64>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_min: u64,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_max: u64,
    /// Curve sample count (log-spaced, duplicates dropped).
    #[arg(long, default_value_t = 61, value_parser = clap::value_parser!(u32).range(1..))]
    pub points: u32,
}

#[derive(Debug, Args)]
pub struct CostmodelArgs {
    /// Key-value config; defaults to the bundled prototype.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_acceleration(s: &str) -> Result<Ratio, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "unbounded" => Ok(Ratio::Unbounded),
        other => {
            let p: f64 = other.parse().map_err(|_| format!("not a number: {s}"))?;
            if p.is_finite() && p >= 1.0 {
                Ok(Ratio::Finite(p))
            } else {
                Err(format!("acceleration must be >= 1, got {s}"))
            }
        }
    }
}

fn parse_kind(s: &str) -> Result<ConverterKind, String> {
    s.parse().map_err(|e: optoffload::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if report.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
