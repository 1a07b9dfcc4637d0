//! Gamma function on the half-integer lattice and Talmi integrals.

use core::f64::consts::PI;

use crate::{Error, Result};

/// `Γ(twice/2)` for any integer `twice` that is not a pole
/// (`twice ≤ 0` and even).
pub fn gamma_half(twice: i32) -> Result<f64> {
    if twice <= 0 && twice % 2 == 0 {
        return Err(Error::Domain {
            what: "gamma_half (pole)",
            value: twice as f64 / 2.0,
        });
    }
    // Start from Γ(1) or Γ(1/2) and walk with Γ(x+1) = xΓ(x).
    let (mut x2, mut value) = if twice % 2 == 0 { (2, 1.0) } else { (1, PI.sqrt()) };
    while x2 < twice {
        value *= x2 as f64 / 2.0;
        x2 += 2;
    }
    while x2 > twice {
        x2 -= 2;
        value /= x2 as f64 / 2.0;
    }
    Ok(value)
}

/// Talmi integral `T(p) = ∫₀^∞ e^{-u²} u^{2p+2} du = Γ(p + 3/2)/2`.
pub fn talmi(p: i32) -> Result<f64> {
    if p < 0 {
        return Err(Error::Domain {
            what: "talmi",
            value: p as f64,
        });
    }
    talmi_twice(2 * p)
}

/// Talmi integral at `p = twice_p / 2`, i.e. on the half-integer lattice.
pub fn talmi_twice(twice_p: i32) -> Result<f64> {
    if twice_p < 0 {
        return Err(Error::Domain {
            what: "talmi",
            value: twice_p as f64 / 2.0,
        });
    }
    Ok(gamma_half(twice_p + 3)? / 2.0)
}
