use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mdiff::config::{parse_settings, Settings};
use mdiff::{CliError, Command, RunConfig};

/// Diffraction patterns of diatomic molecules behind slits and gratings.
#[derive(Parser)]
#[command(name = "mdiff", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Density behind a single slit.
    Single(Common),
    /// Density behind a finite grating.
    Grating(Common),
    /// Talbot carpet from the secondary to the primary revival.
    Carpet(Common),
    /// On-axis focus search along Z.
    Focus(Common),
    /// Molecule and point-particle profiles at X = d/2 around L_T/2.
    Revivals(Common),
    /// Validity report and mode table, no grid.
    Validate(Common),
    /// Closed forms against the quadrature oracle.
    Selfcheck(Common),
}

#[derive(Args)]
struct Common {
    /// key = value file read before any flag.
    #[arg(long)]
    config: Option<PathBuf>,
    /// near-field, optic-grate, nano or crystal.
    #[arg(long)]
    preset: Option<String>,
    /// Wavelength over slit width.
    #[arg(long)]
    lambda: Option<f64>,
    /// Oscillator length over slit width.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    m1: Option<f64>,
    #[arg(long)]
    m2: Option<f64>,
    #[arg(long)]
    n0: Option<u32>,
    #[arg(long)]
    l0: Option<i32>,
    /// Grating period over slit width.
    #[arg(long)]
    d: Option<f64>,
    /// Slits on each side of the central one.
    #[arg(long = "N")]
    half_count: Option<u32>,
    /// exact or paraxial.
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    delta_l_max: Option<u32>,
    #[arg(long)]
    weight_floor: Option<f64>,
    /// Smallest admissible Z/L.
    #[arg(long)]
    z_floor: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    z_min: Option<f64>,
    #[arg(long)]
    z_max: Option<f64>,
    #[arg(long)]
    nz: Option<usize>,
    /// X/L of the focus and revival scans.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    /// Worker threads; 0 reads MDIFF_THREADS, then uses every core.
    #[arg(long)]
    threads: Option<usize>,
    /// CSV path; `-` or absent for stdout.
    #[arg(long)]
    csv: Option<String>,
    /// PGM heatmap path.
    #[arg(long)]
    heatmap: Option<String>,
    /// Summary path.
    #[arg(long)]
    summary: Option<String>,
    /// max1 or raw.
    #[arg(long)]
    normalize: Option<String>,
    /// Heatmap mapping: log or linear.
    #[arg(long)]
    scale: Option<String>,
    /// Any configuration key, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut out = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                parse_settings(&text)?
            }
            None => Settings::new(),
        };
        let mut push = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                out.push((key.to_string(), v));
            }
        };
        let s = |v: Option<f64>| v.map(|x| x.to_string());
        push("preset", self.preset.clone());
        push("lambda_over_l", s(self.lambda));
        push("a_over_l", s(self.a));
        push("m1", s(self.m1));
        push("m2", s(self.m2));
        push("n0", self.n0.map(|v| v.to_string()));
        push("l0", self.l0.map(|v| v.to_string()));
        push("d_over_l", s(self.d));
        push("half_count", self.half_count.map(|v| v.to_string()));
        push("kernel", self.kernel.clone());
        push("n_max", self.n_max.map(|v| v.to_string()));
        push("delta_l_max", self.delta_l_max.map(|v| v.to_string()));
        push("weight_floor", s(self.weight_floor));
        push("z_floor", s(self.z_floor));
        push("x_min", s(self.x_min));
        push("x_max", s(self.x_max));
        push("nx", self.nx.map(|v| v.to_string()));
        push("z_min", s(self.z_min));
        push("z_max", s(self.z_max));
        push("nz", self.nz.map(|v| v.to_string()));
        push("focus_x", s(self.x));
        push("threads", self.threads.map(|v| v.to_string()));
        push("csv", self.csv.clone());
        push("heatmap", self.heatmap.clone());
        push("summary", self.summary.clone());
        push("normalization", self.normalize.clone());
        push("heatmap_scale", self.scale.clone());
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("--set {kv}: expected KEY=VALUE")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(out)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match &cli.command {
        Sub::Single(c) => (Command::Single, c),
        Sub::Grating(c) => (Command::Grating, c),
        Sub::Carpet(c) => (Command::Carpet, c),
        Sub::Focus(c) => (Command::Focus, c),
        Sub::Revivals(c) => (Command::Revivals, c),
        Sub::Validate(c) => (Command::Validate, c),
        Sub::Selfcheck(c) => (Command::Selfcheck, c),
    };
    let result = common
        .settings()
        .and_then(|s| RunConfig::resolve(command, &s))
        .and_then(|config| mdiff::run(&config));
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mdiff: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
