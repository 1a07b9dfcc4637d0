use std::f64::consts::PI;

use mdiff_core::kernels::{kernel, mode_wavenumber, moshinsky_slit, ModeWavenumber};
use mdiff_core::pattern::DensityModel;
use mdiff_core::quad::{integrate, Tolerance};
use mdiff_core::specfun::{bessel_j1, bessel_y1, fresnel, laguerre, talmi};
use mdiff_core::{InternalState, KernelChoice, Preset};
use proptest::prelude::*;

#[test]
fn wronskian() {
    for &x in &[1e-3f64, 0.05, 0.7, 3.0, 11.9, 12.0, 12.1, 40.0, 777.0, 1e5] {
        let h = 1e-5 * x.min(10.0);
        let d = |f: fn(f64) -> mdiff_core::Result<f64>| (f(x + h).unwrap() - f(x - h).unwrap()) / (2.0 * h);
        let w = bessel_j1(x).unwrap() * d(bessel_y1) - d(bessel_j1) * bessel_y1(x).unwrap();
        let expected = 2.0 / (PI * x);
        assert!((w - expected).abs() <= 1e-6 * expected, "x={x}: {w} vs {expected}");
    }
}

#[test]
fn laguerre_recurrence() {
    for alpha in 0..6u32 {
        for n in 1..20u32 {
            for i in 0..=40 {
                let x = -50.0 + 2.5 * i as f64;
                let lhs = (n + 1) as f64 * laguerre(n + 1, alpha, x);
                let rhs = (2 * n + 1 + alpha) as f64 * laguerre(n, alpha, x)
                    - x * laguerre(n, alpha, x)
                    - (n + alpha) as f64 * laguerre(n - 1, alpha, x);
                let scale = lhs.abs().max(rhs.abs()).max(1.0);
                assert!((lhs - rhs).abs() <= 1e-12 * scale, "n={n} a={alpha} x={x}");
            }
        }
    }
}

#[test]
fn talmi_against_quadrature() {
    for p in 0..=12 {
        let q: f64 = integrate(
            |u: f64| (-u * u).exp() * u.powi(2 * p + 2),
            0.0,
            30.0,
            16,
            Tolerance {
                abs_tol: 0.0,
                rel_tol: 1e-13,
                max_subdivisions: 10_000,
            },
        )
        .unwrap()
        .value;
        let t = talmi(p).unwrap();
        assert!((q - t).abs() <= 1e-10 * t, "p={p}: {q} vs {t}");
    }
}

#[test]
fn slit_function_matches_the_exact_kernel_far_away() {
    // Far from the slit the exact and paraxial pictures coincide, so the
    // Fresnel slit function approaches L times the kernel at the centre.
    let mode = ModeWavenumber::propagating(50.0);
    let (x, z) = (0.3, 4e4);
    let m = moshinsky_slit(&mode, x, z).unwrap();
    let k = kernel(KernelChoice::Exact, &mode, x, z).unwrap();
    assert!((m - k).norm() / k.norm() < 1e-3);
}

proptest! {
    #[test]
    fn fresnel_is_odd(x in -1e4f64..1e4) {
        let (c, s) = fresnel(x).unwrap();
        let (cm, sm) = fresnel(-x).unwrap();
        prop_assert_eq!(c, -cm);
        prop_assert_eq!(s, -sm);
    }

    #[test]
    fn density_is_even_for_l0_zero(x in 0.0f64..2.0, zf in 0.02f64..2.0, preset in 0usize..4) {
        let s = Preset::ALL[preset].scenario();
        let z = zf / s.lambda_over_l;
        let model = DensityModel::new(&s).unwrap();
        let (a, b) = (model.density(x, z).unwrap(), model.density(-x, z).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()));
    }

    #[test]
    fn grating_density_is_nonnegative(x in -16.0f64..16.0, zf in 0.05f64..1.0) {
        let s = Preset::Crystal.scenario().with_grating(8.0, 5);
        let z = zf * 2.0 * 64.0 / s.lambda_over_l;
        let model = DensityModel::new(&s).unwrap();
        prop_assert!(model.density(x, z).unwrap() >= 0.0);
    }

    #[test]
    fn excited_modes_are_slower(n in 0u32..6, l in -6i32..=6) {
        let s = Preset::Nano.scenario();
        let m = mode_wavenumber(&s, InternalState::new(n, l));
        prop_assert!(m.k <= s.incoming_k());
    }
}
