//! Subcommand drivers. Each one evaluates, writes its files and returns the
//! summary it printed.

use std::io::Write;
use std::time::Instant;

use mdiff_core::pattern::{
    focus_from_samples, talbot_length, validity_check, DensityField, DensityModel, Focus, Region,
};
use mdiff_core::Geometry;

use crate::config::{Command, RunConfig};
use crate::output::{divisor_for, with_output, write_csv, write_csv_columns, write_pgm, Summary};
use crate::selfcheck::{self, Check, Status};
use crate::{grid, CliError, Result};

/// What a run produced besides its files.
#[derive(Debug)]
pub struct Outcome {
    pub summary: String,
    /// The evaluated grid (unscaled) for the plotting commands.
    pub field: Option<DensityField>,
    pub focus: Option<Focus>,
    pub checks: Vec<Check>,
}

/// Executes `config`. A selfcheck with failing checks still writes its
/// report and then returns [`CliError::SelfcheckFailed`].
pub fn run(config: &RunConfig) -> Result<Outcome> {
    let started = Instant::now();
    let mut summary = Summary::default();
    summary.line(format!("mdiff {}", config.command.name()));
    let mut outcome = Outcome {
        summary: String::new(),
        field: None,
        focus: None,
        checks: Vec::new(),
    };
    match config.command {
        Command::Single | Command::Grating | Command::Carpet => plot(config, &mut summary, &mut outcome)?,
        Command::Focus => focus(config, &mut summary, &mut outcome)?,
        Command::Revivals => revivals(config, &mut summary, &mut outcome)?,
        Command::Validate => validate(config, &mut summary)?,
        Command::Selfcheck => {
            outcome.checks = selfcheck::run(&config.scenario)?;
            for c in &outcome.checks {
                summary.line(c.line());
            }
        }
    }
    summary.line(format!("elapsed: {:.3} s", started.elapsed().as_secs_f64()));
    outcome.summary = summary.render(config);
    emit_summary(config, &outcome.summary)?;

    let failed = outcome.checks.iter().filter(|c| c.status == Status::Fail).count();
    if failed > 0 {
        return Err(CliError::SelfcheckFailed(failed));
    }
    Ok(outcome)
}

fn emit_summary(config: &RunConfig, text: &str) -> Result<()> {
    if config.outputs.summary.is_some() {
        return with_output(config.outputs.summary.as_deref(), |w| w.write_all(text.as_bytes()));
    }
    if config.command.emits_csv() && config.outputs.csv.is_none() {
        let stderr = std::io::stderr();
        let mut w = stderr.lock();
        return w.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stderr>".into(),
            source,
        });
    }
    with_output(None, |w| w.write_all(text.as_bytes()))
}

fn talbot_line(config: &RunConfig, summary: &mut Summary) {
    if let Geometry::Grating { d_over_l, half_count } = config.scenario.geometry {
        let lt = talbot_length(d_over_l, config.scenario.lambda_over_l);
        summary.line(format!(
            "grating: d/L = {d_over_l}, {} slits, Talbot length L_T/L = {lt:.10e}",
            2 * half_count + 1
        ));
    }
}

fn plot(config: &RunConfig, summary: &mut Summary, outcome: &mut Outcome) -> Result<()> {
    let model = DensityModel::new(&config.scenario)?;
    let field = grid::evaluate(&model, &config.grid, config.threads)?;
    let divisor = divisor_for(config.normalization, field.max());
    with_output(config.outputs.csv.as_deref(), |w| write_csv(w, &field, divisor))?;
    if let Some(path) = &config.outputs.heatmap {
        with_output(Some(path), |w| write_pgm(w, &field, config.heatmap_scale))?;
    }
    if let Some((ix, iz)) = field.argmax() {
        summary.line(format!(
            "peak: density {:.10e} at X/L = {:.10e}, Z/L = {:.10e}",
            field.at(ix, iz),
            field.xs[ix],
            field.zs[iz]
        ));
    }
    talbot_line(config, summary);
    summary.modes(&model);
    summary.warnings(&field.warnings);
    outcome.field = Some(field);
    Ok(())
}

fn focus(config: &RunConfig, summary: &mut Summary, outcome: &mut Outcome) -> Result<()> {
    let model = DensityModel::new(&config.scenario)?;
    let field = grid::evaluate(&model, &config.grid, config.threads)?;
    let f = focus_from_samples(&model, config.focus_x, &field.zs, &field.values)?;
    let divisor = divisor_for(config.normalization, f.value.max(field.max()));
    with_output(config.outputs.csv.as_deref(), |w| write_csv(w, &field, divisor))?;
    summary.line(format!(
        "focus: Z*/L = {:.10e} at X/L = {}, density {:.10e}{}",
        f.z,
        config.focus_x,
        f.value,
        if f.at_boundary { " (on the range boundary)" } else { "" }
    ));
    talbot_line(config, summary);
    summary.modes(&model);
    summary.warnings(&field.warnings);
    outcome.field = Some(field);
    outcome.focus = Some(f);
    Ok(())
}

fn revivals(config: &RunConfig, summary: &mut Summary, outcome: &mut Outcome) -> Result<()> {
    let model = DensityModel::new(&config.scenario)?;
    let point = DensityModel::new(&config.scenario.with_a(0.0))?;
    let field = grid::evaluate(&model, &config.grid, config.threads)?;
    let reference = grid::evaluate(&point, &config.grid, config.threads)?;
    let f_mol = focus_from_samples(&model, config.focus_x, &field.zs, &field.values)?;
    let f_pt = focus_from_samples(&point, config.focus_x, &reference.zs, &reference.values)?;
    let divisor = divisor_for(config.normalization, reference.max());
    let scaled = |v: &[f64]| v.iter().map(|x| x / divisor).collect::<Vec<_>>();
    let (mol, pt) = (scaled(&field.values), scaled(&reference.values));
    with_output(config.outputs.csv.as_deref(), |w| {
        write_csv_columns(
            w,
            config.focus_x,
            &field.zs,
            &[("density", &mol), ("density_point", &pt)],
        )
    })?;
    talbot_line(config, summary);
    if let Geometry::Grating { d_over_l, .. } = config.scenario.geometry {
        summary.line(format!(
            "secondary revival: L_T/2 = {:.10e}",
            0.5 * talbot_length(d_over_l, config.scenario.lambda_over_l)
        ));
    }
    summary.line(format!(
        "molecule maximum: Z/L = {:.10e}, density {:.10e}",
        f_mol.z, f_mol.value
    ));
    summary.line(format!(
        "point particle maximum: Z/L = {:.10e}, density {:.10e}",
        f_pt.z, f_pt.value
    ));
    let deviation = field
        .values
        .iter()
        .zip(&reference.values)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    summary.line(format!(
        "largest deviation from the point particle: {:.4e} (relative to its maximum)",
        deviation / reference.max()
    ));
    summary.modes(&model);
    summary.warnings(&field.warnings);
    outcome.field = Some(field);
    outcome.focus = Some(f_mol);
    Ok(())
}

fn validate(config: &RunConfig, summary: &mut Summary) -> Result<()> {
    let s = &config.scenario;
    let model = DensityModel::new(s)?;
    let g = &config.grid;
    let region = Region {
        x_max: g.x_min.abs().max(g.x_max.abs()),
        z_min: g.z_min,
        z_max: g.z_max,
    };
    summary.line(format!(
        "scenario: lambda/L = {}, a/L = {}, k0 L = {:.10e}, lambda/Z_min = {:.4e}",
        s.lambda_over_l,
        s.a_over_l,
        s.incoming_k(),
        s.lambda_over_l / g.z_min
    ));
    talbot_line(config, summary);
    summary.modes(&model);
    summary.warnings(&validity_check(s, &region));
    Ok(())
}
