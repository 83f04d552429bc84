use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_CODES_HELP: &str = "\
Exit status:
  0  success
  2  usage error (unknown command or malformed flag)
  3  invalid parameter value
  4  unreadable input file (samples or waveform)
  5  output path not writable
  6  computation failure (quadrature, integration or invariant breach)
  7  verification found a failing check

Errors are reported on stderr as one JSON object:
  {\"error\": {\"kind\": ..., \"exit_code\": ..., \"message\": ...}}";

/// Design time-dependent XY couplings that make two qubits follow a target
/// entanglement curve, and verify the design by forward simulation.
#[derive(Debug, Parser)]
#[command(name = "entdesign", version, after_help = EXIT_CODES_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimize the ansatz distance d(q) and print q* and d(q*).
    OptimizeQ(OptimizeQArgs),
    /// Turn a target trajectory into a coupling waveform.
    Design(DesignArgs),
    /// Simulate a waveform (designed in-process or read from a file).
    Evolve(EvolveArgs),
    /// Final entanglement over the (log10 p, Γ/κ) grid of the path family (κt/10)^p.
    Sweep(SweepArgs),
    /// Write the data behind the reference figures plus a run manifest.
    Reproduce(ReproduceArgs),
    /// Run the built-in self-checks and report one line per check.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// f(t) = 1 − exp(−κt)
    Exp,
    /// f(t) = ½ + (1/π) arcsin(sin(πκt − π/2))
    Triangle,
    /// f(t) = (κt/10)^p
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Channel {
    None,
    /// amplitude damping, jump operators √(2Γ) σ⁻ on each qubit
    Ad,
    /// phase damping, jump operators √Γ σᶻ on each qubit
    Pd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    #[value(name = "1")]
    Distance,
    #[value(name = "2")]
    Entropy,
    #[value(name = "3")]
    Exp,
    #[value(name = "4")]
    Triangle,
    #[value(name = "5")]
    Sweep,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (stdout when omitted); written atomically.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeQArgs {
    /// Lower end of the search bracket (dimensionless).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub q_lo: f64,
    /// Upper end of the search bracket (dimensionless).
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub q_hi: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AnsatzArgs {
    /// Ansatz exponent q in (0, 2) (dimensionless).
    #[arg(long, default_value_t = 1.345, allow_negative_numbers = true)]
    pub q: f64,
    /// Lower cutoff δ₀ of the renormalization band; δ₁ = 1 − δ₀ (ebits).
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub delta0: f64,
    /// Fallback coupling λ₀ outside the band (units of κ).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub lambda0: f64,
    /// Grid cells over [0, t_final] (at least 1000).
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct TrajectoryArgs {
    /// Target trajectory family; ignored when --samples is given.
    #[arg(long, value_enum, default_value_t = Family::Exp)]
    pub family: Family,
    /// Rate κ (inverse time units).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub kappa: f64,
    /// Exponent p of the power family (dimensionless).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub p: f64,
    /// Final time (time units); defaults to 10 for exp/triangle and 10/κ for power.
    #[arg(long, allow_negative_numbers = true)]
    pub t_final: Option<f64>,
    /// Sampled target: CSV with header `t,f` or a JSON array of [t, f] pairs.
    #[arg(long, value_name = "PATH")]
    pub samples: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub trajectory: TrajectoryArgs,
    #[command(flatten)]
    pub ansatz: AnsatzArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Noise channel acting on both qubits.
    #[arg(long, value_enum, default_value_t = Channel::None)]
    pub channel: Channel,
    /// Decay rate Γ (units of κ); must be 0 with --channel none.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    /// Waveform file written by `design` (CSV or JSON); replaces the design flags.
    #[arg(long, value_name = "PATH")]
    pub waveform: Option<PathBuf>,
    #[command(flatten)]
    pub trajectory: TrajectoryArgs,
    #[command(flatten)]
    pub ansatz: AnsatzArgs,
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Also write every density matrix as JSON [re, im] pairs in basis order 00, 01, 10, 11.
    #[arg(long, value_name = "PATH")]
    pub dump_states: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// log10 p axis as LO:HI:POINTS (dimensionless).
    #[arg(long, default_value = "-1:1:41", allow_hyphen_values = true)]
    pub grid_p: String,
    /// Γ/κ axis as LO:HI:POINTS (dimensionless).
    #[arg(long, default_value = "0:0.25:26", allow_hyphen_values = true)]
    pub grid_gamma: String,
    /// Rate κ (inverse time units); t_final = 10/κ.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub kappa: f64,
    /// Worker threads for the sweep (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Noise channel (ad or pd).
    #[arg(long, value_enum, default_value_t = Channel::Ad)]
    pub channel: Channel,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub ansatz: AnsatzArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    /// Which figure to reproduce.
    #[arg(long, value_enum, default_value_t = Figure::All)]
    pub figure: Figure,
    /// Output directory; created if missing.
    #[arg(long, value_name = "DIR", default_value = "reproduction")]
    pub output: PathBuf,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Grid cells per sweep run (at least 1000).
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Print the report as JSON instead of text.
    #[arg(long)]
    pub json: bool,
}
