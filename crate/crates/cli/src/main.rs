mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(name = "orliczkit", version, about = "Orlicz mixed volumes, geominimal surface areas and Orlicz-Petty bodies")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct Global {
    /// Worker threads (default: all cores). Not part of the recorded config:
    /// output does not depend on it.
    #[arg(long, global = true, env = "ORLICZKIT_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Quadrature grid for solvers that need one: uniform-<m> or sym3d-590.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Optimizer tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Inspect or draw a body.
    #[command(subcommand)]
    Body(BodyCommand),
    /// Orlicz mixed volume of K and L (nonhomogeneous by default).
    Mv(MvArgs),
    /// Orlicz-Petty body of K.
    Petty(PettyArgs),
    /// Geominimal or affine surface area.
    Functional(FunctionalArgs),
    /// Check one inequality and emit a certificate.
    Certify(CertifyArgs),
    /// Variational estimate of V_φ₂(K, L) through linear Orlicz addition.
    Interpret(InterpretArgs),
    /// Continuity, degeneracy and projection-constant probes.
    Probe(ProbeArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyCommand {
    Info {
        path: PathBuf,
    },
    Render {
        path: PathBuf,
        /// Also draw the homogeneous Orlicz-Petty body for this φ.
        #[arg(long)]
        petty_phi: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct MvArgs {
    #[arg(long = "K")]
    pub k: PathBuf,
    #[arg(long = "L")]
    pub l: Option<PathBuf>,
    #[arg(long)]
    pub phi: String,
    #[arg(long, conflicts_with_all = ["polar_star", "segment"])]
    pub homogeneous: bool,
    /// Treat L as a star body and use the polar variant.
    #[arg(long, conflicts_with = "segment")]
    pub polar_star: bool,
    /// Segment [0, v]; components separated by commas.
    #[arg(long, value_name = "V", allow_hyphen_values = true)]
    pub segment: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Hom,
    Nonhom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeArg {
    Full,
    Sym,
}

#[derive(Args, Debug, Serialize)]
pub struct PettyArgs {
    #[arg(long = "K")]
    pub k: PathBuf,
    #[arg(long)]
    pub phi: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Hom)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ConeArg::Full)]
    pub cone: ConeArg,
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
    #[arg(long, default_value_t = 4000)]
    pub max_iter: usize,
    /// Write the normalized Petty body here (body JSON).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionalKind {
    Geominimal,
    Affine,
}

#[derive(Args, Debug, Serialize)]
pub struct FunctionalArgs {
    #[arg(long, value_enum)]
    pub which: FunctionalKind,
    #[arg(long = "K")]
    pub k: PathBuf,
    #[arg(long)]
    pub phi: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Hom)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ConeArg::Full)]
    pub cone: ConeArg,
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
    #[arg(long, default_value_t = 4000)]
    pub max_iter: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct CertifyArgs {
    /// isoperimetric | santalo | cyclic | mahler | minkowski | bracket
    #[arg(long)]
    pub which: String,
    #[arg(long = "K")]
    pub k: PathBuf,
    #[arg(long = "L")]
    pub l: Option<PathBuf>,
    #[arg(long)]
    pub phi: String,
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct InterpretArgs {
    #[arg(long = "K")]
    pub k: PathBuf,
    #[arg(long = "L")]
    pub l: PathBuf,
    #[arg(long)]
    pub phi1: String,
    #[arg(long)]
    pub phi2: String,
    /// Comma-separated decreasing ε values (default 0.1·2^-k, k = 0..7).
    #[arg(long)]
    pub eps_schedule: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeKind {
    Continuity,
    Degeneracy,
    Cnp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Mgons,
    Constant,
    Perturbed,
}

#[derive(Args, Debug, Serialize)]
pub struct ProbeArgs {
    #[arg(long, value_enum)]
    pub which: ProbeKind,
    #[arg(long = "K")]
    pub k: Option<PathBuf>,
    #[arg(long, default_value = "pow:1")]
    pub phi: String,
    /// Continuity family.
    #[arg(long, value_enum, default_value_t = FamilyKind::Mgons)]
    pub family: FamilyKind,
    #[arg(long, default_value = "8,16,32,64,128,256")]
    pub ms: String,
    #[arg(long, default_value = "0.1,0.01,0.001,0.0001")]
    pub deltas: String,
    #[arg(long, default_value_t = 4)]
    pub count: usize,
    #[arg(long, default_value_t = 5e-3)]
    pub tolerance: f64,
    /// Degeneracy schedule (default 2^-k, k = 0..8).
    #[arg(long)]
    pub eps: Option<String>,
    /// Exponent of the projection integral.
    #[arg(long, default_value = "-1/2", allow_hyphen_values = true)]
    pub p: String,
    #[arg(long, default_value_t = 64)]
    pub trials: usize,
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
