//! Bessel functions of order one and the Hankel function `H₁⁽¹⁾ = J₁ + iY₁`.
//!
//! Below [`HANKEL_SERIES_LIMIT`] the ascending series are summed directly
//! (with digamma coefficients for `Y₁`); at and above it the Hankel
//! asymptotic expansion is truncated at its smallest term. At the seam the
//! smallest asymptotic term is ~6e-12 relative, and the series loses about
//! four digits to cancellation.

use core::f64::consts::{FRAC_2_PI, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::{Error, Result};

/// Switchover argument between the ascending series and the asymptotic
/// expansion.
pub const HANKEL_SERIES_LIMIT: f64 = 12.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_TERMS: usize = 200;

/// `H₁⁽¹⁾(x)` for `x > 0`.
pub fn hankel1_order1(x: f64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "hankel1_order1",
            value: x,
        });
    }
    if x < HANKEL_SERIES_LIMIT {
        let (j, y) = ascending_series(x);
        Ok(Complex64::new(j, y))
    } else {
        Ok(asymptotic(x))
    }
}

/// `J₁(x)` for `x > 0`.
pub fn bessel_j1(x: f64) -> Result<f64> {
    hankel1_order1(x).map(|h| h.re)
}

/// `Y₁(x)` for `x > 0`.
pub fn bessel_y1(x: f64) -> Result<f64> {
    hankel1_order1(x).map(|h| h.im)
}

fn ascending_series(x: f64) -> (f64, f64) {
    let half = 0.5 * x;
    let q = -half * half;
    // term_k = (-x²/4)^k (x/2) / (k! (k+1)!)
    let mut term = half;
    // psi(k+1) + psi(k+2) = -2γ + H_k + H_{k+1}
    let mut harmonic_k = 0.0;
    let mut j1 = 0.0;
    let mut psi_sum = 0.0;
    for k in 0..MAX_TERMS {
        let harmonic_k1 = harmonic_k + 1.0 / (k + 1) as f64;
        j1 += term;
        psi_sum += term * (harmonic_k + harmonic_k1 - 2.0 * EULER_GAMMA);
        if term.abs() < 1e-18 * j1.abs() && k > 2 {
            break;
        }
        let kk = (k + 1) as f64;
        term *= q / (kk * (kk + 1.0));
        harmonic_k = harmonic_k1;
    }
    let y1 = FRAC_2_PI * (half.ln() * j1 - 1.0 / x) - psi_sum / PI;
    (j1, y1)
}

fn asymptotic(x: f64) -> Complex64 {
    // Σ i^k a_k / x^k with a_k = Π_{j≤k} (4 - (2j-1)²) / (k! 8^k)
    let mut sum = Complex64::new(1.0, 0.0);
    let mut coeff = 1.0;
    let mut last = f64::INFINITY;
    let rotations = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        coeff *= (4.0 - odd * odd) / (k as f64 * 8.0 * x);
        let mag = coeff.abs();
        if mag > last || mag < 1e-17 {
            break;
        }
        sum += rotations[k % 4] * coeff;
        last = mag;
    }
    let phase = x - 3.0 * FRAC_PI_4;
    let amplitude = (FRAC_2_PI / x).sqrt();
    Complex64::new(phase.cos(), phase.sin()) * sum * amplitude
}
