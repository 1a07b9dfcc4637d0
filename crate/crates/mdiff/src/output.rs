//! File formats: CSV, 16-bit PGM heatmaps and the text summary.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use mdiff_core::pattern::{DensityField, DensityModel, Warning};
use mdiff_core::Severity;

use crate::config::{HeatmapScale, Normalization, RunConfig};
use crate::{CliError, Result};

pub const CSV_HEADER: &str = "X_over_L,Z_over_L,density";

/// Decades kept below the maximum on the log heatmap scale.
pub const LOG_DECADES: f64 = 4.0;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Runs `write` against the file at `path`, or stdout for `None`.
pub fn with_output<F>(path: Option<&Path>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).map_err(io_err(p))?;
            let mut w = BufWriter::new(file);
            write(&mut w).and_then(|_| w.flush()).map_err(io_err(p))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)
                .and_then(|_| w.flush())
                .map_err(io_err(Path::new("<stdout>")))
        }
    }
}

/// Divisor applied to emitted densities; dividing keeps the maximum at
/// exactly 1.
pub fn divisor_for(normalization: Normalization, max: f64) -> f64 {
    match normalization {
        Normalization::Max1 if max > 0.0 => max,
        _ => 1.0,
    }
}

/// `X_over_L,Z_over_L,density` rows, `Z` outer, 17 significant digits.
pub fn write_csv(w: &mut dyn Write, field: &DensityField, divisor: f64) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for (iz, &z) in field.zs.iter().enumerate() {
        for (ix, &x) in field.xs.iter().enumerate() {
            writeln!(w, "{x:.16e},{z:.16e},{:.16e}", field.at(ix, iz) / divisor)?;
        }
    }
    Ok(())
}

/// Like [`write_csv`] with an extra column per named series.
pub fn write_csv_columns(w: &mut dyn Write, x: f64, zs: &[f64], columns: &[(&str, &[f64])]) -> io::Result<()> {
    write!(w, "{CSV_HEADER}")?;
    for (name, _) in &columns[1..] {
        write!(w, ",{name}")?;
    }
    writeln!(w)?;
    for (i, &z) in zs.iter().enumerate() {
        write!(w, "{x:.16e},{z:.16e}")?;
        for (_, values) in columns {
            write!(w, ",{:.16e}", values[i])?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Binary PGM (P5, maxval 65535, big-endian): one image row per `Z`
/// sample, one column per `X` sample.
pub fn write_pgm(w: &mut dyn Write, field: &DensityField, scale: HeatmapScale) -> io::Result<()> {
    let (nx, nz) = (field.xs.len(), field.zs.len());
    write!(w, "P5\n{nx} {nz}\n65535\n")?;
    let max = field.max();
    let mut bytes = Vec::with_capacity(2 * nx * nz);
    for &v in &field.values {
        let level = if max <= 0.0 {
            0.0
        } else {
            match scale {
                HeatmapScale::Linear => v / max,
                HeatmapScale::Log => {
                    let floor = 10f64.powf(-LOG_DECADES);
                    ((v / max).max(floor).log10() + LOG_DECADES) / LOG_DECADES
                }
            }
        };
        let pixel = (level.clamp(0.0, 1.0) * 65535.0).round() as u16;
        bytes.extend_from_slice(&pixel.to_be_bytes());
    }
    w.write_all(&bytes)
}

fn severity(s: Severity) -> &'static str {
    match s {
        Severity::Note => "note",
        Severity::Strong => "strong",
    }
}

/// Text summary: `#` comment lines followed by the resolved configuration.
#[derive(Debug, Default)]
pub struct Summary {
    lines: Vec<String>,
}

impl Summary {
    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn warnings(&mut self, warnings: &[Warning]) {
        if warnings.is_empty() {
            self.line("warnings: none");
        }
        for w in warnings {
            self.line(format!(
                "warning [{}] {} (value {:.4e})",
                severity(w.severity),
                w.message,
                w.value
            ));
        }
    }

    pub fn modes(&mut self, model: &DensityModel) {
        let t = model.truncation();
        if model.modes().is_empty() {
            self.line("modes: none (point particle)");
            return;
        }
        self.line(format!(
            "modes: {} enumerated, {} distinct propagating wavenumbers",
            model.modes().len(),
            model.kernel_count()
        ));
        self.line("   n    l   radial_element   angular_coeff        combined          k_over_L  propagating");
        for m in model.modes() {
            self.line(format!(
                "{:4} {:4} {:16.8e} {:15.8e} {:15.8e} {:17.10e}  {}",
                m.state.n,
                m.state.l,
                m.radial_element,
                m.angular_coeff,
                m.combined,
                m.wavenumber.k,
                if m.wavenumber.is_propagating() { "yes" } else { "no" }
            ));
        }
        self.line(format!(
            "truncation: retained weight {:.6e} of {:.6e} (tail fraction {:.3e}), evanescent {:.3e}",
            t.retained,
            t.total,
            t.tail_fraction(),
            t.evanescent
        ));
    }

    pub fn render(&self, config: &RunConfig) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str("# ");
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(&config.to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mdiff_core::Preset;

    fn field() -> DensityField {
        let model = DensityModel::new(&Preset::Crystal.scenario().with_a(0.0)).unwrap();
        DensityField::evaluate(&model, vec![-0.5, 0.0, 0.5], vec![1.0, 2.0]).unwrap()
    }

    #[test]
    fn csv_layout() {
        let f = field();
        let mut buf = Vec::new();
        write_csv(&mut buf, &f, 1.0).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("-5.0000000000000000e-1,1.0000000000000000e0,"));
        assert!(lines[4].starts_with("-5.0000000000000000e-1,2.0000000000000000e0,"));
        let v: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(v, f.at(1, 0));
    }

    #[test]
    fn pgm_layout() {
        let f = field();
        let mut buf = Vec::new();
        write_pgm(&mut buf, &f, HeatmapScale::Log).unwrap();
        let header = b"P5\n3 2\n65535\n";
        assert_eq!(&buf[..header.len()], header);
        assert_eq!(buf.len(), header.len() + 12);
        let (ix, iz) = f.argmax().unwrap();
        let at = header.len() + 2 * (iz * 3 + ix);
        assert_eq!(&buf[at..at + 2], &[0xff, 0xff]);
    }
}
