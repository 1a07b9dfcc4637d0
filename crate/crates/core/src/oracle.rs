//! Brute-force quadratures of the defining integrals. Nothing here calls a
//! closed form it is meant to check: kernels come from their plane-wave
//! integral, edge functions from integrating kernels, coefficients from
//! their angular and radial integrals.

use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;

use crate::kernels::{kernel, EdgeGeometry, ModeWavenumber};
use crate::molecule::{radial_wavefn, HarmonicMolecule, InternalState};
use crate::quad::{integrate, Estimate, Tolerance};
use crate::scenario::{KernelChoice, Scenario};
use crate::{Error, Result};

/// Tolerances of the oracle quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Largest `|K_X|` reached by the plane-wave integral (units `1/L`);
    /// `None` picks `4k`. The evanescent tail is extended further when
    /// `e^{-qZ}` has not yet dropped below `1e-14`.
    pub oscillatory_cutoff: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-15,
            rel_tol: 1e-11,
            max_subdivisions: 4_000_000,
            oscillatory_cutoff: None,
        }
    }
}

impl QuadratureSpec {
    fn tolerance(&self) -> Tolerance {
        Tolerance {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }

    /// Same spec with both tolerances halved.
    pub fn halved(self) -> Self {
        QuadratureSpec {
            abs_tol: 0.5 * self.abs_tol,
            rel_tol: 0.5 * self.rel_tol,
            ..self
        }
    }

    fn validate(&self, k: f64) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Configuration("oracle tolerances must be positive"));
        }
        if let Some(c) = self.oscillatory_cutoff {
            if !(c >= 4.0 * k) {
                return Err(Error::Configuration("oscillatory cutoff must be at least 4k"));
            }
        }
        Ok(())
    }
}

fn check_z(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "oracle: propagation distance Z",
            value: z,
        })
    }
}

fn propagating_k(mode: &ModeWavenumber) -> Result<f64> {
    if mode.is_propagating() {
        Ok(mode.k)
    } else {
        Err(Error::EvanescentMode {
            n: mode.state.n,
            l: mode.state.l,
            k_squared: mode.k_squared,
        })
    }
}

/// `K(X, Z) = (1/2π) ∫ e^{iK_X X + i√(k²−K_X²) Z} dK_X`.
///
/// The band `|K_X| < k` is integrated as `K_X = k sin φ`, the two
/// evanescent branches together as `K_X = k cosh t`; the part beyond the
/// last `t` is bounded analytically and added to the error.
pub fn kernel_quadrature(mode: &ModeWavenumber, x: f64, z: f64, spec: &QuadratureSpec) -> Result<Estimate<Complex64>> {
    let k = propagating_k(mode)?;
    check_z(z)?;
    spec.validate(k)?;
    let scale = k / TAU;
    let rho = x.hypot(z);
    let band_panels = (k * rho).ceil() as usize + 8;
    let band = integrate(
        |phi: f64| {
            let (s, c) = phi.sin_cos();
            Complex64::from_polar(c, k * (x * s + z * c))
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        band_panels,
        spec.tolerance(),
    )?;

    let cutoff = spec.oscillatory_cutoff.unwrap_or(4.0 * k);
    let decay = k * z;
    let t_max = (cutoff / k).acosh().max((32.3 / decay).asinh());
    let tail_tol = Tolerance {
        abs_tol: spec.abs_tol.max(spec.rel_tol * band.value.norm()),
        ..spec.tolerance()
    };
    let tail_panels = ((k * x.abs() * t_max.sinh() * t_max) / PI).ceil() as usize + 16;
    let tail = integrate(
        |t: f64| {
            let (sh, ch) = (t.sinh(), t.cosh());
            sh * 2.0 * (k * x * ch).cos() * (-decay * sh).exp()
        },
        0.0,
        t_max,
        tail_panels,
        tail_tol,
    )?;
    // ∫_{T}^∞ 2 sinh t e^{-kZ sinh t} dt ≤ 2 e^{-kZ sinh T} / (kZ)
    let bound = 2.0 * (-decay * t_max.sinh()).exp() / decay;
    Ok(Estimate {
        value: (band.value + Complex64::new(tail.value, 0.0)) * scale,
        error: (band.error + tail.error + bound) * scale,
        evaluations: band.evaluations + tail.evaluations,
    })
}

fn paraxial_complex(k: f64, z: f64, u: Complex64) -> Complex64 {
    let amplitude = (k / (TAU * z)).sqrt();
    Complex64::from_polar(amplitude, k * z - FRAC_PI_4) * (Complex64::i() * u * u * (k / (2.0 * z))).exp()
}

/// `M₀(X, Z) = ∫₀^∞ K_par(X − X′, Z) dX′` with the paraxial kernel.
///
/// Substituting `u = X − X′` leaves `∫_{−∞}^{X}`; the segment `[−U, X]` is
/// integrated on the real line and the rest along the ray
/// `u = −U − s e^{iπ/4}`, where the chirp becomes a decaying Gaussian.
pub fn moshinsky0_quadrature(
    mode: &ModeWavenumber,
    x: f64,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<Complex64>> {
    let k = propagating_k(mode)?;
    check_z(z)?;
    spec.validate(k)?;
    let width = (PI * z / k).sqrt();
    let u0 = x.abs() + 8.0 * width;
    let phase_span = k * u0 * u0 / (2.0 * z);
    let real = integrate(
        |u: f64| paraxial_complex(k, z, Complex64::new(u, 0.0)),
        -u0,
        x,
        (phase_span / 2.0).ceil() as usize + 8,
        spec.tolerance(),
    )?;
    let w = Complex64::from_polar(1.0, FRAC_PI_4);
    let s_max = (2.0 * z * 45.0 / k).sqrt();
    let ray = integrate(
        |s: f64| paraxial_complex(k, z, Complex64::new(-u0, 0.0) - w * s),
        0.0,
        s_max,
        (k * u0 * s_max / z / 2.0).ceil() as usize + 8,
        Tolerance {
            abs_tol: spec.abs_tol.max(spec.rel_tol * real.value.norm()),
            ..spec.tolerance()
        },
    )?;
    Ok(Estimate {
        value: real.value + w * ray.value,
        error: real.error + ray.error,
        evaluations: real.evaluations + ray.evaluations,
    })
}

fn kernel_phase(choice: KernelChoice, k: f64, u: f64, z: f64) -> f64 {
    match choice {
        KernelChoice::Exact => k * (u.hypot(z) - z),
        KernelChoice::Paraxial => k * u * u / (2.0 * z),
    }
}

/// `∫_{lo}^{hi} K(X − X′, Z) dX′` by adaptive quadrature, split at the
/// kernel's stationary point `X′ = X`.
pub fn edge_interval_integral(
    choice: KernelChoice,
    mode: &ModeWavenumber,
    x: f64,
    z: f64,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<Complex64>> {
    let k = propagating_k(mode)?;
    check_z(z)?;
    spec.validate(k)?;
    if lo >= hi {
        return Ok(Estimate {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut cuts = alloc::vec![lo];
    if lo < x && x < hi {
        cuts.push(x);
    }
    cuts.push(hi);
    let mut total = Estimate {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        evaluations: 0,
    };
    let mut err = None;
    for piece in cuts.windows(2) {
        let (a, b) = (piece[0], piece[1]);
        let span = (kernel_phase(choice, k, x - a, z) - kernel_phase(choice, k, x - b, z)).abs();
        let panels = (span / 2.0).ceil() as usize + 4;
        let f = |xp: f64| {
            kernel(choice, mode, x - xp, z).unwrap_or_else(|e| {
                err.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            })
        };
        let est = integrate(f, a, b, panels, spec.tolerance())?;
        total.value += est.value;
        total.error += est.error;
        total.evaluations += est.evaluations;
    }
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Slit amplitude for a molecule frozen at `(r′, θ′)`:
/// `φ_{n₀l₀}(r′, θ′) ∫_{X₋}^{X₊} K(X − X′, Z) dX′`, zero when the molecule
/// does not fit through the slit.
#[allow(clippy::too_many_arguments)]
pub fn moshinsky_variable_limits_quadrature(
    scenario: &Scenario,
    x: f64,
    z: f64,
    r_prime: f64,
    theta_prime: f64,
    mode: &ModeWavenumber,
    spec: &QuadratureSpec,
) -> Result<Estimate<Complex64>> {
    if !(r_prime >= 0.0 && r_prime.is_finite()) {
        return Err(Error::Domain {
            what: "oracle: molecular radius r'",
            value: r_prime,
        });
    }
    let mol = HarmonicMolecule::new(scenario.a_over_l, scenario.m1, scenario.m2)?;
    let edges = EdgeGeometry::new(r_prime, theta_prime, scenario.m1, scenario.m2);
    let phi = Complex64::from_polar(
        radial_wavefn(scenario.initial, r_prime, &mol),
        scenario.initial.l as f64 * theta_prime,
    );
    if !edges.is_open() {
        return Ok(Estimate {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
        });
    }
    let inner = edge_interval_integral(scenario.kernel, mode, x, z, edges.x_minus, edges.x_plus, spec)?;
    Ok(Estimate {
        value: inner.value * phi,
        error: inner.error * phi.norm(),
        evaluations: inner.evaluations,
    })
}

/// `∫₀^{2π} S(θ′) e^{i(l₀−l)θ′} dθ′`, split at the kinks of `S` at `π/2`
/// and `3π/2`.
fn angular_quadrature(l: i32, l0: i32, m1: f64, m2: f64, upper: bool) -> Result<f64> {
    let total = m1 + m2;
    let dl = (l0 - l) as f64;
    let s = |theta: f64| {
        let c = theta.cos();
        let (a, b) = (m2 * c / total, -m1 * c / total);
        if upper {
            a.min(b)
        } else {
            a.max(b)
        }
    };
    let tol = Tolerance {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_subdivisions: 100_000,
    };
    let mut acc = Complex64::new(0.0, 0.0);
    let cuts = [0.0, FRAC_PI_2, 1.5 * PI, TAU];
    for piece in cuts.windows(2) {
        let est = integrate(
            |t: f64| Complex64::from_polar(s(t), dl * t),
            piece[0],
            piece[1],
            (dl.abs() as usize).max(1) + 2,
            tol,
        )?;
        acc += est.value;
    }
    if acc.im.abs() > 1e-9 {
        return Err(Error::Consistency {
            what: "angular coefficient imaginary part",
            residual: acc.im,
        });
    }
    Ok(acc.re)
}

/// `f_{ll₀}` as the angular integral of `S₋` against `e^{i(l₀−l)θ′}`.
pub fn f_coeff_quadrature(l: i32, l0: i32, m1: f64, m2: f64) -> Result<f64> {
    angular_quadrature(l, l0, m1, m2, false)
}

/// `g_{ll₀}` as the angular integral of `S₊` against `e^{i(l₀−l)θ′}`.
pub fn g_coeff_quadrature(l: i32, l0: i32, m1: f64, m2: f64) -> Result<f64> {
    angular_quadrature(l, l0, m1, m2, true)
}

/// `∫₀^∞ r² R_nl(r) R_{n₀l₀}(r) dr` by adaptive quadrature.
pub fn matrix_element_quadrature(state: InternalState, initial: InternalState, mol: &HarmonicMolecule) -> Result<f64> {
    let p = (state.n + initial.n) as f64 + 0.5 * (state.l.unsigned_abs() + initial.l.unsigned_abs()) as f64;
    let r_max = mol.a * (2.0 * (p + 1.0).sqrt() + 8.0);
    let est = integrate(
        |r: f64| r * r * radial_wavefn(state, r, mol) * radial_wavefn(initial, r, mol),
        0.0,
        r_max,
        8 + (state.n + initial.n) as usize,
        Tolerance {
            abs_tol: 1e-14 * mol.a,
            rel_tol: 1e-12,
            max_subdivisions: 100_000,
        },
    )?;
    Ok(est.value)
}

/// Exact-in-`r′` amplitude of the incoming internal state behind one slit:
/// `∫∫ |φ_{n₀l₀}(r′,θ′)|² ∫_{X₋}^{X₊} K(X−X′,Z) dX′ r′dr′dθ′`.
///
/// Its first-order expansion is `M_L − c K_L` with
/// `c = ⟨n₀l₀‖r′‖n₀l₀⟩ f_{l₀l₀}`.
pub fn incoming_amplitude_quadrature(scenario: &Scenario, x: f64, z: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    let mol = HarmonicMolecule::new(scenario.a_over_l, scenario.m1, scenario.m2)?;
    let mode = crate::kernels::mode_wavenumber(scenario, scenario.initial);
    let p = scenario.initial.energy_index() as f64;
    let r_max = mol.a * (2.0 * (p + 1.0).sqrt() + 8.0);
    let outer = Tolerance {
        abs_tol: spec.abs_tol,
        rel_tol: spec.rel_tol,
        max_subdivisions: 10_000,
    };
    let mut failure = None;
    let mut angular = |r: f64| -> Complex64 {
        let density = radial_wavefn(scenario.initial, r, &mol).powi(2) * r;
        if density == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for piece in [0.0, FRAC_PI_2, 1.5 * PI, TAU].windows(2) {
            let est = integrate(
                |theta: f64| {
                    let edges = EdgeGeometry::new(r, theta, scenario.m1, scenario.m2);
                    match edge_interval_integral(scenario.kernel, &mode, x, z, edges.x_minus, edges.x_plus, spec) {
                        Ok(v) => v.value,
                        Err(e) => {
                            failure.get_or_insert(e);
                            Complex64::new(0.0, 0.0)
                        }
                    }
                },
                piece[0],
                piece[1],
                1,
                outer,
            );
            match est {
                Ok(v) => acc += v.value,
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
        acc * density
    };
    let est = integrate(&mut angular, 0.0, r_max, 4, outer);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{kernel_exact, kernel_paraxial, moshinsky0};
    use crate::molecule::{angular_coeff_f, reduced_matrix_element};

    #[test]
    fn kernel_at_crystal_wavenumber() {
        let m = ModeWavenumber::propagating(17.308);
        for &(x, z) in &[(0.0, 5.0), (1.3, 0.4), (-3.0, 2.0)] {
            let q = kernel_quadrature(&m, x, z, &QuadratureSpec::default()).unwrap();
            let c = kernel_exact(&m, x, z).unwrap();
            assert!(
                (q.value - c).norm() < 1e-9 * c.norm(),
                "({x},{z}): {} vs {}",
                q.value,
                c
            );
        }
    }

    #[test]
    fn kernel_decays_like_cylindrical_wave() {
        let m = ModeWavenumber::propagating(40.0);
        let spec = QuadratureSpec::default();
        let a = kernel_quadrature(&m, 0.0, 50.0, &spec).unwrap().value.norm();
        let b = kernel_quadrature(&m, 0.0, 200.0, &spec).unwrap().value.norm();
        assert!((a / b - 2.0).abs() < 1e-2);
    }

    #[test]
    fn halving_tolerance_stays_within_error() {
        let m = ModeWavenumber::propagating(17.308);
        let spec = QuadratureSpec {
            rel_tol: 1e-7,
            ..QuadratureSpec::default()
        };
        let a = kernel_quadrature(&m, 0.7, 3.0, &spec).unwrap();
        let b = kernel_quadrature(&m, 0.7, 3.0, &spec.halved()).unwrap();
        assert!((a.value - b.value).norm() <= a.error.max(1e-15));
    }

    #[test]
    fn cutoff_must_cover_four_k() {
        let m = ModeWavenumber::propagating(10.0);
        let spec = QuadratureSpec {
            oscillatory_cutoff: Some(20.0),
            ..QuadratureSpec::default()
        };
        assert!(kernel_quadrature(&m, 0.0, 1.0, &spec).is_err());
    }

    #[test]
    fn edge_quadrature_matches_fresnel_form() {
        let m = ModeWavenumber::propagating(1e3);
        let q = moshinsky0_quadrature(&m, 3.0, 200.0, &QuadratureSpec::default()).unwrap();
        let c = moshinsky0(&m, 3.0, 200.0).unwrap();
        assert!((q.value - c).norm() < 1e-8 * c.norm());
    }

    #[test]
    fn variable_limits_reduce_to_slit() {
        let mut s = Scenario::default().with_a(0.01).with_kernel(KernelChoice::Paraxial);
        s.lambda_over_l = 2.0 * PI / 1e3;
        let m = crate::kernels::mode_wavenumber(&s, InternalState::GROUND);
        let spec = QuadratureSpec::default();
        let mol = HarmonicMolecule::new(0.01, 20.0, 26.0).unwrap();
        let phi0 = radial_wavefn(InternalState::GROUND, 0.0, &mol);
        let slit = (moshinsky0(&m, 0.2 + 0.5, 30.0).unwrap() - moshinsky0(&m, 0.2 - 0.5, 30.0).unwrap()) * phi0;
        let at_zero = moshinsky_variable_limits_quadrature(&s, 0.2, 30.0, 0.0, 1.0, &m, &spec).unwrap();
        assert!((at_zero.value - slit).norm() < 1e-8 * slit.norm());
        let r = 0.02;
        let phi_r = radial_wavefn(InternalState::GROUND, r, &mol) / phi0;
        let side = moshinsky_variable_limits_quadrature(&s, 0.2, 30.0, r, FRAC_PI_2, &m, &spec).unwrap();
        assert!((side.value - slit * phi_r).norm() < 1e-8 * slit.norm());
        let blocked = moshinsky_variable_limits_quadrature(&s, 0.2, 30.0, 5.0, 0.0, &m, &spec).unwrap();
        assert_eq!(blocked.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn exact_kernel_interval_matches_paraxial_far_away() {
        let m = ModeWavenumber::propagating(1e3);
        let spec = QuadratureSpec::default();
        let e = edge_interval_integral(KernelChoice::Exact, &m, 0.1, 500.0, -0.5, 0.5, &spec).unwrap();
        let p = edge_interval_integral(KernelChoice::Paraxial, &m, 0.1, 500.0, -0.5, 0.5, &spec).unwrap();
        assert!((e.value - p.value).norm() < 1e-3 * p.value.norm());
        let direct = kernel_paraxial(&m, 0.1, 500.0).unwrap();
        assert!(direct.norm() > 0.0);
    }

    #[test]
    fn angular_coefficients_by_quadrature() {
        for &(m1, m2) in &[(20.0, 26.0), (1.0, 45.0)] {
            for l0 in [-2, 0, 3] {
                assert!((f_coeff_quadrature(l0, l0, m1, m2).unwrap() - 2.0).abs() < 1e-12);
                assert!((f_coeff_quadrature(l0 + 2, l0, m1, m2).unwrap() - 2.0 / 3.0).abs() < 1e-12);
                assert!((g_coeff_quadrature(l0 - 4, l0, m1, m2).unwrap() - 2.0 / 15.0).abs() < 1e-12);
                for dl in [2, 4, 6, 3, 5] {
                    let f = f_coeff_quadrature(l0 + dl, l0, m1, m2).unwrap();
                    assert!((f - angular_coeff_f(l0 + dl, l0)).abs() < 1e-12, "{dl}");
                }
            }
        }
    }

    #[test]
    fn matrix_elements_by_quadrature() {
        let mol = HarmonicMolecule::new(1.0, 20.0, 26.0).unwrap();
        let e00 = matrix_element_quadrature(InternalState::GROUND, InternalState::GROUND, &mol).unwrap();
        assert!((e00 - PI.sqrt() / (4.0 * PI)).abs() < 1e-13);
        let e30 = matrix_element_quadrature(InternalState::new(3, 0), InternalState::GROUND, &mol).unwrap();
        assert!((e30 + PI.sqrt() / (64.0 * PI)).abs() < 1e-13);
        for &(s, i) in &[
            (InternalState::new(2, 4), InternalState::GROUND),
            (InternalState::new(1, -3), InternalState::new(2, 1)),
        ] {
            let q = matrix_element_quadrature(s, i, &mol).unwrap();
            let t = reduced_matrix_element(s, i, &mol).unwrap();
            assert!((q - t).abs() < 1e-12);
        }
    }

    #[test]
    fn incoming_amplitude_first_order() {
        let mut s = Scenario::default().with_a(2e-3).with_kernel(KernelChoice::Paraxial);
        s.lambda_over_l = 2.0 * PI / 2e3;
        let spec = QuadratureSpec {
            rel_tol: 1e-10,
            ..QuadratureSpec::default()
        };
        let (x, z) = (0.3, 40.0);
        let exact = incoming_amplitude_quadrature(&s, x, z, &spec).unwrap();
        let m = crate::kernels::mode_wavenumber(&s, InternalState::GROUND);
        let mol = HarmonicMolecule::new(2e-3, 20.0, 26.0).unwrap();
        let c = reduced_matrix_element(InternalState::GROUND, InternalState::GROUND, &mol).unwrap() * 2.0;
        let ml = crate::kernels::moshinsky_slit(&m, x, z).unwrap();
        let kl = crate::kernels::kernel_slit(KernelChoice::Paraxial, &m, x, z).unwrap();
        let first = ml - kl * c;
        let zeroth_gap = (exact - ml).norm();
        let first_gap = (exact - first).norm();
        assert!(first_gap < 0.05 * zeroth_gap, "{first_gap} vs {zeroth_gap}");
    }
}
