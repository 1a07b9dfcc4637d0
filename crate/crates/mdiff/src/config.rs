//! Run configuration: flat `key = value` settings, presets, and the
//! per-command defaults that turn them into a fully resolved [`RunConfig`].

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use mdiff_core::pattern::{linspace, talbot_length};
use mdiff_core::scenario::DEFAULT_GRATING_HALF_COUNT;
use mdiff_core::{Geometry, KernelChoice, Preset, Scenario};

use crate::{CliError, Result};

/// Grating period used when a grating command is given none.
pub const DEFAULT_PERIOD: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Single,
    Grating,
    Carpet,
    Focus,
    Revivals,
    Validate,
    Selfcheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Single => "single",
            Command::Grating => "grating",
            Command::Carpet => "carpet",
            Command::Focus => "focus",
            Command::Revivals => "revivals",
            Command::Validate => "validate",
            Command::Selfcheck => "selfcheck",
        }
    }

    fn needs_grating(self) -> bool {
        matches!(self, Command::Grating | Command::Carpet | Command::Revivals)
    }

    /// Whether the command writes a data file.
    pub fn emits_csv(self) -> bool {
        !matches!(self, Command::Validate | Command::Selfcheck)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub nz: usize,
}

impl Grid {
    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }

    pub fn zs(&self) -> Vec<f64> {
        linspace(self.z_min, self.z_max, self.nz)
    }

    fn validate(&self, single_column: bool) -> Result<()> {
        let x_ok = if single_column {
            self.x_min.is_finite()
        } else {
            self.nx >= 2 && self.x_min < self.x_max
        };
        if !x_ok || !(self.x_min.is_finite() && self.x_max.is_finite()) {
            return Err(CliError::Config("grid needs nx >= 2 and x_min < x_max".into()));
        }
        if !(self.nz >= 2 && 0.0 < self.z_min && self.z_min < self.z_max && self.z_max.is_finite()) {
            return Err(CliError::Config("grid needs nz >= 2 and 0 < z_min < z_max".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Max1,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapScale {
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outputs {
    /// `None` writes the CSV to standard output.
    pub csv: Option<PathBuf>,
    pub heatmap: Option<PathBuf>,
    /// `None` prints the summary (to stderr when the CSV goes to stdout).
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub scenario: Scenario,
    pub grid: Grid,
    /// Fixed `X` of the `focus` and `revivals` scans.
    pub focus_x: f64,
    /// 0 picks the `MDIFF_THREADS` variable, then the core count.
    pub threads: usize,
    pub normalization: Normalization,
    pub heatmap_scale: HeatmapScale,
    pub outputs: Outputs,
}

/// Ordered `key = value` pairs; later entries win.
pub type Settings = Vec<(String, String)>;

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_settings(text: &str) -> Result<Settings> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("{key}: cannot parse `{value}`")))
}

fn path(value: &str) -> Option<PathBuf> {
    match value {
        "" | "-" => None,
        v => Some(PathBuf::from(v)),
    }
}

#[derive(Default)]
struct Partial {
    geometry: Option<String>,
    d: Option<f64>,
    half_count: Option<u32>,
    x_min: Option<f64>,
    x_max: Option<f64>,
    nx: Option<usize>,
    z_min: Option<f64>,
    z_max: Option<f64>,
    nz: Option<usize>,
    focus_x: Option<f64>,
}

impl RunConfig {
    /// Resolves `settings` for `command`, materializing every default.
    pub fn resolve(command: Command, settings: &Settings) -> Result<RunConfig> {
        let mut scenario = Scenario::default();
        if let Some((_, name)) = settings.iter().rev().find(|(k, _)| k == "preset") {
            scenario = name
                .parse::<Preset>()
                .map_err(|e| CliError::Config(e.to_string()))?
                .scenario();
        }
        let mut p = Partial::default();
        let mut threads = 0;
        let mut normalization = Normalization::Max1;
        let mut heatmap_scale = if command == Command::Carpet {
            HeatmapScale::Log
        } else {
            HeatmapScale::Linear
        };
        let mut outputs = Outputs::default();
        for (key, value) in settings {
            let v = value.as_str();
            match key.as_str() {
                "preset" => {}
                "lambda_over_l" => scenario.lambda_over_l = parse(key, v)?,
                "a_over_l" => scenario.a_over_l = parse(key, v)?,
                "m1" => scenario.m1 = parse(key, v)?,
                "m2" => scenario.m2 = parse(key, v)?,
                "n0" => scenario.initial.n = parse(key, v)?,
                "l0" => scenario.initial.l = parse(key, v)?,
                "kernel" => scenario.kernel = v.parse::<KernelChoice>().map_err(|e| CliError::Config(e.to_string()))?,
                "n_max" => scenario.cutoffs.n_max = parse(key, v)?,
                "delta_l_max" => scenario.cutoffs.delta_l_max = parse(key, v)?,
                "weight_floor" => scenario.cutoffs.weight_floor = parse(key, v)?,
                "z_floor" => scenario.z_min = parse(key, v)?,
                "geometry" => p.geometry = Some(v.to_string()),
                "d_over_l" => p.d = Some(parse(key, v)?),
                "half_count" => p.half_count = Some(parse(key, v)?),
                "x_min" => p.x_min = Some(parse(key, v)?),
                "x_max" => p.x_max = Some(parse(key, v)?),
                "nx" => p.nx = Some(parse(key, v)?),
                "z_min" => p.z_min = Some(parse(key, v)?),
                "z_max" => p.z_max = Some(parse(key, v)?),
                "nz" => p.nz = Some(parse(key, v)?),
                "focus_x" => p.focus_x = Some(parse(key, v)?),
                "threads" => threads = parse(key, v)?,
                "normalization" => {
                    normalization = match v {
                        "max1" => Normalization::Max1,
                        "raw" => Normalization::Raw,
                        _ => return Err(CliError::Config("normalization must be max1 or raw".into())),
                    }
                }
                "heatmap_scale" => {
                    heatmap_scale = match v {
                        "log" => HeatmapScale::Log,
                        "linear" => HeatmapScale::Linear,
                        _ => return Err(CliError::Config("heatmap_scale must be log or linear".into())),
                    }
                }
                "csv" => outputs.csv = path(v),
                "heatmap" => outputs.heatmap = path(v),
                "summary" => outputs.summary = path(v),
                other => return Err(CliError::Config(format!("unknown key `{other}`"))),
            }
        }

        let wants_grating = match p.geometry.as_deref() {
            Some("grating") => true,
            Some("single") => false,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "geometry `{other}`: expected single or grating"
                )))
            }
            None => command.needs_grating() || p.d.is_some() || p.half_count.is_some(),
        };
        if command == Command::Single && wants_grating {
            return Err(CliError::Config("`single` needs geometry = single".into()));
        }
        if command.needs_grating() && !wants_grating {
            return Err(CliError::Config(format!(
                "`{}` needs geometry = grating",
                command.name()
            )));
        }
        scenario.geometry = if wants_grating {
            Geometry::Grating {
                d_over_l: p.d.unwrap_or(DEFAULT_PERIOD),
                half_count: p.half_count.unwrap_or(DEFAULT_GRATING_HALF_COUNT),
            }
        } else {
            Geometry::SingleSlit
        };
        scenario.validate()?;

        let lambda = scenario.lambda_over_l;
        let (x_default, z_default, n_default) = match (command, scenario.geometry) {
            (Command::Focus, _) => ((0.0, 0.0), (0.05 / lambda, 2.0 / lambda), (1, 2000)),
            (Command::Revivals, Geometry::Grating { d_over_l, .. }) => {
                let lt = talbot_length(d_over_l, lambda);
                ((0.5 * d_over_l, 0.5 * d_over_l), (0.4 * lt, 0.6 * lt), (1, 400))
            }
            (Command::Carpet, Geometry::Grating { d_over_l, .. }) => {
                let lt = talbot_length(d_over_l, lambda);
                ((-d_over_l, d_over_l), (0.5 * lt, lt), (400, 400))
            }
            (_, Geometry::Grating { d_over_l, .. }) => {
                let lt = talbot_length(d_over_l, lambda);
                ((-2.0 * d_over_l, 2.0 * d_over_l), (lt / 400.0, lt), (400, 400))
            }
            (_, Geometry::SingleSlit) => {
                let z_max = 1.0 / lambda;
                ((-1.5, 1.5), ((z_max / 400.0).max(scenario.z_min), z_max), (400, 400))
            }
        };
        let single_column = matches!(command, Command::Focus | Command::Revivals);
        let focus_x = p.focus_x.unwrap_or(if single_column { x_default.0 } else { 0.0 });
        let grid = Grid {
            x_min: if single_column {
                focus_x
            } else {
                p.x_min.unwrap_or(x_default.0)
            },
            x_max: if single_column {
                focus_x
            } else {
                p.x_max.unwrap_or(x_default.1)
            },
            nx: if single_column { 1 } else { p.nx.unwrap_or(n_default.0) },
            z_min: p.z_min.unwrap_or(z_default.0),
            z_max: p.z_max.unwrap_or(z_default.1),
            nz: p.nz.unwrap_or(n_default.1),
        };
        grid.validate(single_column)?;
        if grid.z_min < scenario.z_min {
            return Err(CliError::Config(format!(
                "z_min = {} lies below z_floor = {}",
                grid.z_min, scenario.z_min
            )));
        }
        Ok(RunConfig {
            command,
            scenario,
            grid,
            focus_x,
            threads,
            normalization,
            heatmap_scale,
            outputs,
        })
    }

    /// Every setting as `key = value`, in a form [`parse_settings`] and
    /// [`RunConfig::resolve`] read back to the same configuration.
    pub fn to_settings(&self) -> Settings {
        let s = &self.scenario;
        let mut out: Vec<(&str, String)> = vec![
            ("lambda_over_l", s.lambda_over_l.to_string()),
            ("a_over_l", s.a_over_l.to_string()),
            ("m1", s.m1.to_string()),
            ("m2", s.m2.to_string()),
            ("n0", s.initial.n.to_string()),
            ("l0", s.initial.l.to_string()),
            ("kernel", s.kernel.to_string()),
            ("n_max", s.cutoffs.n_max.to_string()),
            ("delta_l_max", s.cutoffs.delta_l_max.to_string()),
            ("weight_floor", s.cutoffs.weight_floor.to_string()),
            ("z_floor", s.z_min.to_string()),
        ];
        match s.geometry {
            Geometry::SingleSlit => out.push(("geometry", "single".into())),
            Geometry::Grating { d_over_l, half_count } => {
                out.push(("geometry", "grating".into()));
                out.push(("d_over_l", d_over_l.to_string()));
                out.push(("half_count", half_count.to_string()));
            }
        }
        let g = &self.grid;
        out.extend([
            ("x_min", g.x_min.to_string()),
            ("x_max", g.x_max.to_string()),
            ("nx", g.nx.to_string()),
            ("z_min", g.z_min.to_string()),
            ("z_max", g.z_max.to_string()),
            ("nz", g.nz.to_string()),
            ("focus_x", self.focus_x.to_string()),
            ("threads", self.threads.to_string()),
            (
                "normalization",
                match self.normalization {
                    Normalization::Max1 => "max1",
                    Normalization::Raw => "raw",
                }
                .into(),
            ),
            (
                "heatmap_scale",
                match self.heatmap_scale {
                    HeatmapScale::Log => "log",
                    HeatmapScale::Linear => "linear",
                }
                .into(),
            ),
        ]);
        let show = |p: &Option<PathBuf>| p.as_ref().map_or("-".to_string(), |p| p.display().to_string());
        out.push(("csv", show(&self.outputs.csv)));
        out.push(("heatmap", show(&self.outputs.heatmap)));
        out.push(("summary", show(&self.outputs.summary)));
        out.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.to_settings() {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> Settings {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn preset_then_overrides() {
        let c = RunConfig::resolve(
            Command::Single,
            &settings(&[("a_over_l", "0.2"), ("preset", "crystal")]),
        )
        .unwrap();
        assert_eq!(c.scenario.lambda_over_l, 0.363);
        assert_eq!(c.scenario.a_over_l, 0.2);
        assert_eq!(c.grid.nx, 400);
    }

    #[test]
    fn carpet_defaults_span_half_to_full_talbot_length() {
        let c = RunConfig::resolve(Command::Carpet, &settings(&[("preset", "crystal")])).unwrap();
        let lt = talbot_length(8.0, 0.363);
        assert_eq!((c.grid.z_min, c.grid.z_max), (0.5 * lt, lt));
        assert_eq!(c.heatmap_scale, HeatmapScale::Log);
        assert!(matches!(c.scenario.geometry, Geometry::Grating { half_count: 20, .. }));
    }

    #[test]
    fn round_trip() {
        let c = RunConfig::resolve(
            Command::Revivals,
            &settings(&[
                ("preset", "nano"),
                ("d_over_l", "6"),
                ("threads", "3"),
                ("csv", "out.csv"),
            ]),
        )
        .unwrap();
        let back = RunConfig::resolve(Command::Revivals, &parse_settings(&c.to_string()).unwrap()).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_settings("a_over_l 0.1").is_err());
        assert!(RunConfig::resolve(Command::Single, &settings(&[("bogus", "1")])).is_err());
        assert!(RunConfig::resolve(Command::Single, &settings(&[("nx", "1")])).is_err());
        assert!(RunConfig::resolve(Command::Single, &settings(&[("geometry", "grating")])).is_err());
        assert!(RunConfig::resolve(Command::Carpet, &settings(&[("d_over_l", "0.5")])).is_err());
        assert!(RunConfig::resolve(Command::Single, &settings(&[("z_min", "1e-5"), ("z_max", "1")])).is_err());
    }
}
