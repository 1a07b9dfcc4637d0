//! Observables: the first-order marginal density behind a slit or grating,
//! Talbot length, focus search and validity diagnostics.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::kernels::{kernel_slit, mode_wavenumber, moshinsky_slit, ModeWavenumber};
use crate::molecule::{
    angular_coeff_f, enumerate_modes, reduced_matrix_element, HarmonicMolecule, ModeWeight, TruncationReport,
};
use crate::scenario::{Geometry, KernelChoice, Scenario};
use crate::{Error, Result};

/// Talbot length `L_T = 2d²/λ` (units of `L`).
pub fn talbot_length(d_over_l: f64, lambda_over_l: f64) -> f64 {
    2.0 * d_over_l * d_over_l / lambda_over_l
}

/// Kernel group: all retained modes sharing one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
struct KernelGroup {
    mode: ModeWavenumber,
    /// `Σ |⟨nl‖r′‖n₀l₀⟩ f_{ll₀}|²` over the group.
    weight: f64,
}

/// Precomputed mode table for one scenario. Immutable and `Sync`; grid
/// points can be evaluated from any number of threads.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityModel {
    scenario: Scenario,
    incoming: ModeWavenumber,
    /// `⟨n₀l₀‖r′‖n₀l₀⟩ f_{l₀l₀}`.
    cross: f64,
    modes: Vec<ModeWeight>,
    groups: Vec<KernelGroup>,
    offsets: Vec<f64>,
    truncation: TruncationReport,
}

impl DensityModel {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        scenario.validate()?;
        let incoming = mode_wavenumber(scenario, scenario.initial);
        let offsets: Vec<f64> = scenario.slit_offsets().collect();
        let (cross, modes) = if scenario.a_over_l == 0.0 {
            (0.0, Vec::new())
        } else {
            let mol = HarmonicMolecule::new(scenario.a_over_l, scenario.m1, scenario.m2)?;
            let cross = reduced_matrix_element(scenario.initial, scenario.initial, &mol)?
                * angular_coeff_f(scenario.initial.l, scenario.initial.l);
            let mut modes = enumerate_modes(scenario, &scenario.cutoffs)?;
            // The incoming mode always stays: with it the three terms
            // combine into |M − cK|² plus a sum of squares.
            if !modes.iter().any(|w| w.state == scenario.initial) {
                let cut = crate::molecule::Cutoffs {
                    n_max: scenario.initial.n,
                    delta_l_max: 0,
                    weight_floor: 0.0,
                };
                let extra = enumerate_modes(scenario, &cut)?
                    .into_iter()
                    .filter(|w| w.state == scenario.initial);
                modes.extend(extra);
            }
            (cross, modes)
        };
        let truncation = TruncationReport::new(scenario, &modes);
        let mut groups: Vec<KernelGroup> = Vec::new();
        for w in modes.iter().filter(|w| w.wavenumber.is_propagating()) {
            let weight = w.combined * w.combined;
            match groups.iter_mut().find(|g| g.mode.k_squared == w.wavenumber.k_squared) {
                Some(g) => g.weight += weight,
                None => groups.push(KernelGroup {
                    mode: w.wavenumber,
                    weight,
                }),
            }
        }
        groups.sort_by(|a, b| b.mode.k_squared.total_cmp(&a.mode.k_squared));
        Ok(DensityModel {
            scenario: *scenario,
            incoming,
            cross,
            modes,
            groups,
            offsets,
            truncation,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Enumerated modes, evanescent ones included (they do not enter the
    /// density).
    pub fn modes(&self) -> &[ModeWeight] {
        &self.modes
    }

    pub fn truncation(&self) -> &TruncationReport {
        &self.truncation
    }

    /// Number of distinct propagating wavenumbers in the correction sum.
    pub fn kernel_count(&self) -> usize {
        self.groups.len()
    }

    fn slit_sum(&self, x: f64, z: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &off in &self.offsets {
            acc += moshinsky_slit(&self.incoming, x + off, z)?;
        }
        Ok(acc)
    }

    fn kernel_sum(&self, mode: &ModeWavenumber, x: f64, z: f64) -> Result<Complex64> {
        let choice: KernelChoice = self.scenario.kernel;
        let mut acc = Complex64::new(0.0, 0.0);
        for &off in &self.offsets {
            acc += kernel_slit(choice, mode, x + off, z)?;
        }
        Ok(acc)
    }

    /// The three terms `(|M|², −2Re[c K M*], Σ w²|K|²)` at one point.
    pub fn terms(&self, x: f64, z: f64) -> Result<[f64; 3]> {
        if !(z >= self.scenario.z_min) || !x.is_finite() {
            return Err(Error::Domain {
                what: "density below z_min",
                value: z,
            });
        }
        let m = self.slit_sum(x, z)?;
        if self.groups.is_empty() && self.cross == 0.0 {
            return Ok([m.norm_sqr(), 0.0, 0.0]);
        }
        let k0 = self.kernel_sum(&self.incoming, x, z)?;
        let cross = -2.0 * (k0 * m.conj()).re * self.cross;
        let mut sum = 0.0;
        for g in &self.groups {
            let k = if g.mode.k_squared == self.incoming.k_squared {
                k0
            } else {
                self.kernel_sum(&g.mode, x, z)?
            };
            sum += g.weight * k.norm_sqr();
        }
        Ok([m.norm_sqr(), cross, sum])
    }

    /// Marginal density at `(X, Z)`, arbitrary units.
    pub fn density(&self, x: f64, z: f64) -> Result<f64> {
        let [direct, cross, modes] = self.terms(x, z)?;
        let value = direct + cross + modes;
        if value >= 0.0 {
            return Ok(value);
        }
        let scale = direct + cross.abs() + modes;
        if -value <= 1e-12 * scale {
            Ok(0.0)
        } else {
            Err(Error::Consistency {
                what: "negative density",
                residual: value,
            })
        }
    }

    /// Densities along one row of fixed `Z`.
    pub fn row(&self, xs: &[f64], z: f64) -> Result<Vec<f64>> {
        xs.iter().map(|&x| self.density(x, z)).collect()
    }
}

/// `|M_{L,N}|²` with the point-particle terms only, for comparison curves.
pub fn point_particle_density(scenario: &Scenario, x: f64, z: f64) -> Result<f64> {
    DensityModel::new(&scenario.with_a(0.0))?.density(x, z)
}

/// Density behind a single slit; the scenario's geometry is ignored.
pub fn density_single_slit(scenario: &Scenario, x: f64, z: f64) -> Result<f64> {
    let mut s = *scenario;
    s.geometry = Geometry::SingleSlit;
    DensityModel::new(&s)?.density(x, z)
}

/// Density behind the scenario's grating (`2N+1` slits of period `d`).
pub fn density_grating(scenario: &Scenario, x: f64, z: f64) -> Result<f64> {
    if scenario.geometry == Geometry::SingleSlit {
        return Err(Error::Configuration("density_grating needs a grating geometry"));
    }
    DensityModel::new(scenario)?.density(x, z)
}

/// Densities on a grid in row-major, `Z`-outer order.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub xs: Vec<f64>,
    pub zs: Vec<f64>,
    pub values: Vec<f64>,
    pub warnings: Vec<Warning>,
    pub truncation: TruncationReport,
}

impl DensityField {
    /// Serial evaluation; rows are independent so callers may parallelize
    /// over [`DensityModel::row`] and assemble positionally.
    pub fn evaluate(model: &DensityModel, xs: Vec<f64>, zs: Vec<f64>) -> Result<Self> {
        let mut values = Vec::with_capacity(xs.len() * zs.len());
        for &z in &zs {
            values.extend(model.row(&xs, z)?);
        }
        Self::from_rows(model, xs, zs, values)
    }

    pub fn from_rows(model: &DensityModel, xs: Vec<f64>, zs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != xs.len() * zs.len() {
            return Err(Error::Configuration("grid size does not match the values"));
        }
        let x_max = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let z_min = zs.iter().copied().fold(f64::INFINITY, f64::min);
        let z_max = zs.iter().copied().fold(0.0, f64::max);
        let warnings = validity_check(model.scenario(), &Region { x_max, z_min, z_max });
        Ok(DensityField {
            xs,
            zs,
            values,
            warnings,
            truncation: *model.truncation(),
        })
    }

    pub fn at(&self, ix: usize, iz: usize) -> f64 {
        self.values[iz * self.xs.len() + ix]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Scales so the maximum is 1 (no-op for an all-zero field).
    pub fn normalize_max(&mut self) {
        let m = self.max();
        if m > 0.0 {
            for v in &mut self.values {
                *v /= m;
            }
        }
    }

    /// Grid position of the maximum; ties go to the earlier point.
    pub fn argmax(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &v) in self.values.iter().enumerate() {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        best.map(|(i, _)| (i % self.xs.len(), i / self.xs.len()))
    }
}

/// Evenly spaced samples including both ends.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Result of a focus search along `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Focus {
    pub z: f64,
    pub value: f64,
    /// The discrete maximum sat on an end of the range.
    pub at_boundary: bool,
}

/// Global maximum of the density along `Z ∈ [z_lo, z_hi]` at fixed `X`,
/// sampled at `samples` points and refined by a parabola through the
/// bracketing samples. Ties go to the smaller `Z`.
pub fn find_focus(model: &DensityModel, x: f64, z_lo: f64, z_hi: f64, samples: usize) -> Result<Focus> {
    if !(z_lo < z_hi) || samples < 3 {
        return Err(Error::Configuration(
            "focus search needs z_lo < z_hi and at least 3 samples",
        ));
    }
    let zs = linspace(z_lo, z_hi, samples);
    let values: Vec<f64> = zs.iter().map(|&z| model.density(x, z)).collect::<Result<_>>()?;
    focus_from_samples(model, x, &zs, &values)
}

/// The refinement step of [`find_focus`] for a profile sampled elsewhere
/// (uniform spacing in `zs`).
pub fn focus_from_samples(model: &DensityModel, x: f64, zs: &[f64], values: &[f64]) -> Result<Focus> {
    if zs.len() != values.len() || zs.len() < 3 {
        return Err(Error::Configuration("focus search needs at least 3 samples"));
    }
    let samples = zs.len();
    let mut i = 0;
    for (j, &v) in values.iter().enumerate() {
        if v > values[i] {
            i = j;
        }
    }
    if i == 0 || i + 1 == samples {
        return Ok(Focus {
            z: zs[i],
            value: values[i],
            at_boundary: true,
        });
    }
    let (y0, y1, y2) = (values[i - 1], values[i], values[i + 1]);
    let h = zs[i + 1] - zs[i];
    let curvature = y0 - 2.0 * y1 + y2;
    let shift = if curvature < 0.0 {
        (0.5 * (y0 - y2) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    let z = zs[i] + shift * h;
    let refined = model.density(x, z)?;
    let (z, value) = if refined >= y1 { (z, refined) } else { (zs[i], y1) };
    Ok(Focus {
        z,
        value,
        at_boundary: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Note,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarningKind {
    /// `λ/L > 1`: the screen no longer diffracts in the usual sense.
    Wavelength,
    /// `λ/Z_min > 0.1`: too close to the screen.
    NearScreen,
    /// `a/L` large enough that the first-order truncation is doubtful.
    Truncation,
    /// Grid extends past `|X| ≤ 2d`, where a finite grating mimics a
    /// periodic one.
    GratingEdge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Warning {
    pub kind: WarningKind,
    pub severity: Severity,
    /// The ratio that crossed its threshold.
    pub value: f64,
    pub message: &'static str,
}

/// Region of the `(X, Z)` plane a computation covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x_max: f64,
    pub z_min: f64,
    pub z_max: f64,
}

/// Advisory diagnostics for the scenario over `region`.
pub fn validity_check(scenario: &Scenario, region: &Region) -> Vec<Warning> {
    let mut out = Vec::new();
    let lambda = scenario.lambda_over_l;
    if lambda > 1.0 {
        out.push(Warning {
            kind: WarningKind::Wavelength,
            severity: Severity::Strong,
            value: lambda,
            message: "lambda/L > 1: wavelength exceeds the slit width",
        });
    }
    let ratio = lambda / region.z_min;
    if ratio > 0.1 {
        out.push(Warning {
            kind: WarningKind::NearScreen,
            severity: Severity::Note,
            value: ratio,
            message: "lambda/Z > 0.1 near the screen: region closer than ten wavelengths",
        });
    }
    let a = scenario.a_over_l;
    if a > 0.1 {
        let (severity, message) = if a >= 0.5 {
            (
                Severity::Strong,
                "a/L >= 0.5: first-order molecular terms are not small corrections",
            )
        } else {
            (
                Severity::Note,
                "a/L > 0.1: first-order truncation in the molecular radius may be inaccurate",
            )
        };
        out.push(Warning {
            kind: WarningKind::Truncation,
            severity,
            value: a,
            message,
        });
    }
    if let Geometry::Grating { d_over_l, .. } = scenario.geometry {
        if region.x_max > 2.0 * d_over_l {
            out.push(Warning {
                kind: WarningKind::GratingEdge,
                severity: Severity::Note,
                value: region.x_max / d_over_l,
                message: "|X| > 2d: outside the window where the finite grating is periodic",
            });
        }
    }
    out
}
