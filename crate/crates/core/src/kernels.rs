//! Center-of-mass propagation: per-mode wavenumbers, the exact and paraxial
//! kernels, and the edge (Moshinsky) functions built from them.

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::molecule::InternalState;
use crate::scenario::{KernelChoice, Scenario};
use crate::specfun::{fresnel, hankel1_order1};
use crate::{Error, Result};

/// Longitudinal wavenumber budget of one internal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeWavenumber {
    pub state: InternalState,
    /// `k² = (2π/λ)² − (ε_nl − ε_{n₀l₀})` in units of `1/L²`.
    pub k_squared: f64,
    /// `√max(k², 0)`.
    pub k: f64,
}

impl ModeWavenumber {
    /// A propagating mode with the given wavenumber, tagged as the ground
    /// state. Convenient for evaluating kernels outside a scenario.
    pub fn propagating(k: f64) -> Self {
        ModeWavenumber {
            state: InternalState::GROUND,
            k_squared: k * k,
            k,
        }
    }

    pub fn is_propagating(&self) -> bool {
        self.k_squared > 0.0
    }

    fn require_propagating(&self) -> Result<f64> {
        if self.is_propagating() && self.k.is_finite() {
            Ok(self.k)
        } else {
            Err(Error::EvanescentMode {
                n: self.state.n,
                l: self.state.l,
                k_squared: self.k_squared,
            })
        }
    }
}

/// Wavenumber of `state` for a beam prepared in `scenario.initial`.
///
/// `k² = (2π L/λ)² − 2 (M/μ) (L/a)² [(2n+|l|) − (2n₀+|l₀|)]`; for `a = 0`
/// every excited state is infinitely far above the beam energy.
pub fn mode_wavenumber(scenario: &Scenario, state: InternalState) -> ModeWavenumber {
    let k0 = scenario.incoming_k();
    let delta = state.energy_index() as f64 - scenario.initial.energy_index() as f64;
    let k_squared = if delta == 0.0 {
        k0 * k0
    } else if scenario.a_over_l == 0.0 {
        -delta.signum() * f64::INFINITY
    } else {
        let spacing = 2.0 * scenario.total_mass() / scenario.reduced_mass() / (scenario.a_over_l * scenario.a_over_l);
        k0 * k0 - spacing * delta
    };
    ModeWavenumber {
        state,
        k_squared,
        k: k_squared.max(0.0).sqrt(),
    }
}

fn require_positive_z(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "propagation distance Z",
            value: z,
        })
    }
}

/// Exact two-dimensional kernel `K = i Z k / (2ρ) · H₁⁽¹⁾(kρ)`,
/// `ρ = √(X² + Z²)`.
pub fn kernel_exact(mode: &ModeWavenumber, x: f64, z: f64) -> Result<Complex64> {
    let k = mode.require_propagating()?;
    require_positive_z(z)?;
    let rho = x.hypot(z);
    let h = hankel1_order1(k * rho)?;
    Ok(Complex64::new(0.0, 0.5 * z * k / rho) * h)
}

/// Paraxial kernel `√(k/(2πiZ)) · exp(ik[Z + X²/(2Z)])`.
pub fn kernel_paraxial(mode: &ModeWavenumber, x: f64, z: f64) -> Result<Complex64> {
    let k = mode.require_propagating()?;
    require_positive_z(z)?;
    let amplitude = (k / (2.0 * PI * z)).sqrt();
    Ok(Complex64::from_polar(amplitude, k * z - FRAC_PI_4) * Complex64::cis(k * x * x / (2.0 * z)))
}

/// Kernel selected by `choice`.
pub fn kernel(choice: KernelChoice, mode: &ModeWavenumber, x: f64, z: f64) -> Result<Complex64> {
    match choice {
        KernelChoice::Exact => kernel_exact(mode, x, z),
        KernelChoice::Paraxial => kernel_paraxial(mode, x, z),
    }
}

/// Single-edge Moshinsky function with the edge at the origin, in Fresnel
/// form: `√(-i/2) e^{ikZ} [1/2 + i/2 + C(w) + iS(w)]`, `w = X √(k/(πZ))`.
pub fn moshinsky0(mode: &ModeWavenumber, x: f64, z: f64) -> Result<Complex64> {
    let k = mode.require_propagating()?;
    require_positive_z(z)?;
    let w = x * (k / (PI * z)).sqrt();
    let (c, s) = fresnel(w)?;
    let prefactor = Complex64::from_polar(FRAC_1_SQRT_2, k * z - FRAC_PI_4);
    Ok(prefactor * Complex64::new(0.5 + c, 0.5 + s))
}

/// Single-slit function `M_L(X) = M₀(X + L/2) − M₀(X − L/2)`.
pub fn moshinsky_slit(mode: &ModeWavenumber, x: f64, z: f64) -> Result<Complex64> {
    Ok(moshinsky0(mode, x + 0.5, z)? - moshinsky0(mode, x - 0.5, z)?)
}

/// Two-edge kernel sum `K_L(X) = K(X + L/2) + K(X − L/2)`.
pub fn kernel_slit(choice: KernelChoice, mode: &ModeWavenumber, x: f64, z: f64) -> Result<Complex64> {
    Ok(kernel(choice, mode, x + 0.5, z)? + kernel(choice, mode, x - 0.5, z)?)
}

/// Orientation-dependent edge shifts of a molecule of radius `r` at angle
/// `θ` between the molecular axis and the propagation direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeGeometry {
    pub s_minus: f64,
    pub s_plus: f64,
    /// Lower limit of the allowed center-of-mass interval.
    pub x_minus: f64,
    /// Upper limit of the allowed center-of-mass interval.
    pub x_plus: f64,
}

impl EdgeGeometry {
    pub fn new(r: f64, theta: f64, m1: f64, m2: f64) -> Self {
        let total = m1 + m2;
        let c = theta.cos();
        let a = m2 * c / total;
        let b = -m1 * c / total;
        let (s_minus, s_plus) = (a.max(b), a.min(b));
        EdgeGeometry {
            s_minus,
            s_plus,
            x_minus: r * s_minus - 0.5,
            x_plus: r * s_plus + 0.5,
        }
    }

    /// Whether the molecule fits through the slit at this orientation.
    pub fn is_open(&self) -> bool {
        self.x_minus <= self.x_plus
    }
}

/// Slit amplitude truncated after the first power of the molecular radius:
/// `M_L − r (S₋ K(X + L/2) − S₊ K(X − L/2))`, without the internal
/// wavefunction factor.
pub fn first_order_slit_amplitude(
    choice: KernelChoice,
    mode: &ModeWavenumber,
    x: f64,
    z: f64,
    r: f64,
    edges: &EdgeGeometry,
) -> Result<Complex64> {
    let slit = moshinsky_slit(mode, x, z)?;
    let correction =
        kernel(choice, mode, x + 0.5, z)? * edges.s_minus - kernel(choice, mode, x - 0.5, z)? * edges.s_plus;
    Ok(slit - correction * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Preset;

    #[test]
    fn crystal_mode_classification() {
        let s = Preset::Crystal.scenario();
        let ground = mode_wavenumber(&s, InternalState::GROUND);
        assert!((ground.k - 2.0 * PI / 0.363).abs() < 1e-12);
        assert!((ground.k - 17.308).abs() < 2e-3);
        // M/μ = 46²/(20·26); 2(M/μ)/a² · E ≤ k₀² ⟺ E ≤ 4
        let spacing = 2.0 * 46.0 * 46.0 / (20.0 * 26.0) / (0.335 * 0.335);
        let k0sq = (2.0 * PI / 0.363).powi(2);
        for n in 0..5u32 {
            for l in -6i32..=6 {
                let st = InternalState::new(n, l);
                let m = mode_wavenumber(&s, st);
                let e = (2 * n + l.unsigned_abs()) as f64;
                assert_eq!(m.is_propagating(), k0sq - spacing * e > 0.0);
                assert_eq!(m.is_propagating(), st.energy_index() <= 4, "{st:?}");
            }
        }
    }

    #[test]
    fn point_particle_excited_modes_are_evanescent() {
        let s = Preset::Crystal.scenario().with_a(0.0);
        assert!(mode_wavenumber(&s, InternalState::GROUND).is_propagating());
        assert!(!mode_wavenumber(&s, InternalState::new(0, 2)).is_propagating());
    }

    #[test]
    fn kernels_reject_bad_input() {
        let s = Preset::Crystal.scenario();
        let ev = mode_wavenumber(&s, InternalState::new(3, 0));
        assert!(matches!(kernel_exact(&ev, 0.0, 1.0), Err(Error::EvanescentMode { .. })));
        let m = ModeWavenumber::propagating(10.0);
        assert!(kernel_exact(&m, 0.0, 0.0).is_err());
        assert!(kernel_paraxial(&m, 0.0, -1.0).is_err());
        assert!(moshinsky0(&m, 0.0, 0.0).is_err());
    }

    #[test]
    fn kernels_are_even_in_x() {
        let m = ModeWavenumber::propagating(17.308);
        for &(x, z) in &[(0.3, 0.5), (2.0, 5.0), (11.0, 0.2)] {
            assert_eq!(kernel_exact(&m, x, z).unwrap(), kernel_exact(&m, -x, z).unwrap());
            assert_eq!(kernel_paraxial(&m, x, z).unwrap(), kernel_paraxial(&m, -x, z).unwrap());
            assert_eq!(
                kernel_slit(KernelChoice::Exact, &m, x, z).unwrap(),
                kernel_slit(KernelChoice::Exact, &m, -x, z).unwrap()
            );
        }
    }

    #[test]
    fn paraxial_modulus_and_phase() {
        let m = ModeWavenumber::propagating(1e3);
        let z = 7.0;
        for &x in &[0.0, 0.4, 3.0] {
            let kp = kernel_paraxial(&m, x, z).unwrap();
            assert!((kp.norm() - (1e3 / (2.0 * PI * z)).sqrt()).abs() < 1e-12);
        }
        let k0 = kernel_paraxial(&m, 0.0, z).unwrap();
        let expected = Complex64::from_polar(k0.norm(), 1e3 * z - FRAC_PI_4);
        assert!((k0 - expected).norm() < 1e-9 * k0.norm());
    }

    #[test]
    fn paraxial_matches_exact_in_its_regime() {
        let m = ModeWavenumber::propagating(1e3);
        for &x in &[0.0, 4.0, 10.0, -8.0] {
            let ex = kernel_exact(&m, x, 1e3).unwrap();
            let px = kernel_paraxial(&m, x, 1e3).unwrap();
            assert!((ex - px).norm() / ex.norm() < 1e-2);
        }
    }

    #[test]
    fn moshinsky_edge_limits() {
        let m = ModeWavenumber::propagating(1e3);
        assert!((moshinsky0(&m, 0.0, 200.0).unwrap().norm() - 0.5).abs() < 1e-14);
        assert!((moshinsky0(&m, 1e6, 200.0).unwrap().norm() - 1.0).abs() < 1e-6);
        assert!(moshinsky0(&m, -1e6, 200.0).unwrap().norm() < 1e-6);
    }

    #[test]
    fn slit_function_mirror_and_shadow() {
        let m = ModeWavenumber::propagating(1e3);
        for &(x, z) in &[(0.2, 3.0), (1.4, 40.0), (0.7, 500.0)] {
            let a = moshinsky_slit(&m, x, z).unwrap().norm();
            let b = moshinsky_slit(&m, -x, z).unwrap().norm();
            assert!((a - b).abs() < 1e-13);
        }
        assert!(moshinsky_slit(&m, 50.0, 1.0).unwrap().norm() < 1e-3);
        let d = moshinsky0(&m, 0.3 + 0.5, 2.0).unwrap() - moshinsky0(&m, 0.3 - 0.5, 2.0).unwrap();
        assert_eq!(moshinsky_slit(&m, 0.3, 2.0).unwrap(), d);
    }

    #[test]
    fn far_field_first_zero_follows_single_slit_envelope() {
        // Fraunhofer: |M_L|² ∝ sinc²(π X L/(λ Z)), first zero at X/Z = λ/L
        let k = 1e3;
        let lambda = 2.0 * PI / k;
        let m = ModeWavenumber::propagating(k);
        let z = 2.0e3;
        let x_zero = lambda * z;
        let profile = |x: f64| moshinsky_slit(&m, x, z).unwrap().norm_sqr();
        let mut best = (f64::INFINITY, 0.0);
        let n = 2000;
        for i in 0..=n {
            let x = x_zero * (0.7 + 0.6 * i as f64 / n as f64);
            let v = profile(x);
            if v < best.0 {
                best = (v, x);
            }
        }
        assert!((best.1 / x_zero - 1.0).abs() < 0.02, "minimum at {}", best.1 / z);
        assert!(best.0 < 0.02 * profile(0.0));
    }

    #[test]
    fn coincident_edges_double_the_kernel() {
        let m = ModeWavenumber::propagating(17.3);
        let z = 3.0;
        let x = 0.25;
        let sum = kernel_exact(&m, x, z).unwrap() * 2.0;
        let narrow = kernel_exact(&m, x + 1e-9, z).unwrap() + kernel_exact(&m, x - 1e-9, z).unwrap();
        assert!((sum - narrow).norm() < 1e-8 * sum.norm());
    }

    #[test]
    fn edge_geometry_ordering() {
        for i in 0..64 {
            let theta = i as f64 * 0.1;
            let e = EdgeGeometry::new(0.1, theta, 20.0, 26.0);
            assert!(e.s_minus >= e.s_plus);
            assert!((e.x_minus - (0.1 * e.s_minus - 0.5)).abs() < 1e-15);
            assert!((e.x_plus - (0.1 * e.s_plus + 0.5)).abs() < 1e-15);
        }
        let perpendicular = EdgeGeometry::new(0.3, core::f64::consts::FRAC_PI_2, 20.0, 26.0);
        assert!((perpendicular.x_minus + 0.5).abs() < 1e-15 && (perpendicular.x_plus - 0.5).abs() < 1e-15);
        assert!(!EdgeGeometry::new(3.0, 0.0, 20.0, 26.0).is_open());
    }
}
