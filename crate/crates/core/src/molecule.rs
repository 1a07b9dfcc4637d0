//! Internal structure of a harmonic diatomic molecule: 2-D oscillator
//! states, radial functions, matrix elements of the molecular radius and
//! the angular coefficients of the slit edges.
//!
//! Wavefunctions are `φ_nl(r, θ) = R_nl(r) e^{ilθ}` with the angular
//! `1/√(2π)` folded into `R_nl`, so `∫∫|φ_nl|² r dr dθ = 1`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::kernels::{mode_wavenumber, ModeWavenumber};
use crate::scenario::Scenario;
use crate::specfun::{gamma_half, laguerre, laguerre_product_coefficients, Rational};
use crate::{Error, Result};

/// Radial and angular quantum numbers of the relative motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InternalState {
    pub n: u32,
    pub l: i32,
}

impl InternalState {
    pub const GROUND: InternalState = InternalState { n: 0, l: 0 };

    pub const fn new(n: u32, l: i32) -> Self {
        InternalState { n, l }
    }

    /// `2n + |l|`.
    pub fn energy_index(&self) -> u32 {
        2 * self.n + self.l.unsigned_abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicMolecule {
    /// Oscillator length `a = 1/√β`, in units of `L`.
    pub a: f64,
    pub m1: f64,
    pub m2: f64,
}

impl HarmonicMolecule {
    pub fn new(a: f64, m1: f64, m2: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidScenario("molecular length a must be positive"));
        }
        if !(m1 > 0.0 && m2 > 0.0 && m1.is_finite() && m2.is_finite()) {
            return Err(Error::InvalidScenario("masses must be positive"));
        }
        Ok(HarmonicMolecule { a, m1, m2 })
    }

    pub fn total_mass(&self) -> f64 {
        self.m1 + self.m2
    }

    pub fn reduced_mass(&self) -> f64 {
        self.m1 * self.m2 / (self.m1 + self.m2)
    }

    pub fn beta(&self) -> f64 {
        1.0 / (self.a * self.a)
    }
}

fn factorial_ratio_sqrt(n: u32, l: u32) -> f64 {
    // √(n!/(n+l)!)
    let mut q = 1.0;
    for j in n + 1..=n + l {
        q /= j as f64;
    }
    q.sqrt()
}

/// `R_nl(r)`, normalized to `∫₀^∞ R² r dr = 1/(2π)`.
pub fn radial_wavefn(state: InternalState, r: f64, mol: &HarmonicMolecule) -> f64 {
    let beta = mol.beta();
    let l = state.l.unsigned_abs();
    let x = beta * r * r;
    let norm = (beta / PI).sqrt() * factorial_ratio_sqrt(state.n, l);
    norm * (beta.sqrt() * r).powi(l as i32) * (-0.5 * x).exp() * laguerre(state.n, l, x)
}

/// Internal energy in units of `ħ²/(2ML²)`:
/// `ε_nl = (2n+|l|+1) ħ²/(μa²)`.
pub fn energy(state: InternalState, mol: &HarmonicMolecule) -> f64 {
    let quantum = 2.0 * mol.total_mass() / (mol.reduced_mass() * mol.a * mol.a);
    (state.energy_index() + 1) as f64 * quantum
}

/// Rational part of `T(twice_p/2)`: `T = q·√π` for integer `p`,
/// `T = q` for half-integer `p`.
fn talmi_rational(twice_p: u32) -> Option<Rational> {
    if twice_p.is_multiple_of(2) {
        // Γ(p+3/2)/2 = √π (2p+1)!! / 2^{p+2}
        let p = twice_p / 2;
        let mut num: i128 = 1;
        let mut j = 2 * p as i128 + 1;
        while j > 1 {
            num = num.checked_mul(j)?;
            j -= 2;
        }
        Rational::new(num, 1i128.checked_shl(p + 2)?)
    } else {
        // Γ(m+1)/2 with m = p + 1/2
        let m = twice_p.div_ceil(2);
        let mut num: i128 = 1;
        for j in 2..=m as i128 {
            num = num.checked_mul(j)?;
        }
        Rational::new(num, 2)
    }
}

fn laguerre_coefficients_f64(n: u32, alpha: u32) -> Vec<f64> {
    // c_k = (-1)^k C(n+α, n-k)/k!, from c_0 = C(n+α, n) by the ratio
    // c_{k+1}/c_k = -(n-k)/((k+1)(k+1+α)).
    let mut c0 = 1.0;
    for j in 1..=n {
        c0 *= (alpha + j) as f64 / j as f64;
    }
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(c0);
    for k in 0..n {
        let prev = out[k as usize];
        out.push(-prev * (n - k) as f64 / ((k + 1) as f64 * (k + 1 + alpha) as f64));
    }
    out
}

fn talmi_sum_exact(state: InternalState, initial: InternalState) -> Option<f64> {
    let (l, l0) = (state.l.unsigned_abs(), initial.l.unsigned_abs());
    let product = laguerre_product_coefficients(state.n, l, initial.n, l0)?;
    let mut sum = Rational::ZERO;
    for (k, c) in product.iter().enumerate() {
        let twice_p = 2 * k as u32 + l + l0;
        sum = sum.checked_add(c.checked_mul(talmi_rational(twice_p)?)?)?;
    }
    let value = sum.to_f64();
    Some(if (l + l0) % 2 == 0 { value * PI.sqrt() } else { value })
}

fn talmi_sum_float(state: InternalState, initial: InternalState) -> Result<f64> {
    let (l, l0) = (state.l.unsigned_abs(), initial.l.unsigned_abs());
    let a = laguerre_coefficients_f64(state.n, l);
    let b = laguerre_coefficients_f64(initial.n, l0);
    let mut sum = 0.0;
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let twice_p = 2 * (i + j) as i32 + (l + l0) as i32;
            sum += ai * bj * gamma_half(twice_p + 3)? / 2.0;
        }
    }
    Ok(sum)
}

/// Reduced matrix element `⟨nl‖r′‖n₀l₀⟩ = ∫₀^∞ r² R_nl R_{n₀l₀} dr`
/// (units of `L`), from the Talmi series over the Laguerre product.
///
/// The Talmi integrals are evaluated on the half-integer lattice too, so
/// odd `|l|+|l₀|` gives the true radial overlap.
pub fn reduced_matrix_element(state: InternalState, initial: InternalState, mol: &HarmonicMolecule) -> Result<f64> {
    let (l, l0) = (state.l.unsigned_abs(), initial.l.unsigned_abs());
    let sum = match talmi_sum_exact(state, initial) {
        Some(v) => v,
        None => talmi_sum_float(state, initial)?,
    };
    let d = 2.0 * factorial_ratio_sqrt(state.n, l) * factorial_ratio_sqrt(initial.n, l0);
    Ok(mol.a * d * sum / (2.0 * PI))
}

/// Closed form of `⟨nl‖r′‖0,0⟩`:
/// `(a/2π) Γ(n+|l|/2−1/2) (l²−1) / (4 n!) · √(n!/(n+|l|)!)`,
/// taken as its limit `δ_{n0} a/(2π)` at `|l| = 1`.
pub fn ground_state_matrix_element(state: InternalState, mol: &HarmonicMolecule) -> Result<f64> {
    let l = state.l.unsigned_abs();
    let n = state.n;
    let core = if l == 1 {
        if n == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        let mut inv_factorial = 1.0;
        for j in 2..=n {
            inv_factorial /= j as f64;
        }
        let lf = l as f64;
        gamma_half(2 * n as i32 + l as i32 - 1)? * (lf * lf - 1.0) / 4.0 * inv_factorial
    };
    Ok(mol.a / (2.0 * PI) * core * factorial_ratio_sqrt(n, l))
}

/// Angular coefficient `f_{ll₀} = cos(πΔ/2) · 2/(1−Δ²)`, `Δ = l − l₀`;
/// exactly zero for odd `Δ`. Independent of the masses.
pub fn angular_coeff_f(l: i32, l0: i32) -> f64 {
    let delta = (l as i64 - l0 as i64).abs();
    if delta % 2 == 1 {
        return 0.0;
    }
    let zeta = if delta % 4 == 0 { 1.0 } else { -1.0 };
    let d = delta as f64;
    zeta * 2.0 / (1.0 - d * d)
}

/// `g_{ll₀} = −f_{ll₀}`.
pub fn angular_coeff_g(l: i32, l0: i32) -> f64 {
    -angular_coeff_f(l, l0)
}

/// Truncation of the mode sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoffs {
    pub n_max: u32,
    pub delta_l_max: u32,
    /// Modes with `|combined| < weight_floor · max |combined|` are dropped.
    pub weight_floor: f64,
}

impl Default for Cutoffs {
    fn default() -> Self {
        Cutoffs {
            n_max: 8,
            delta_l_max: 8,
            weight_floor: 1e-4,
        }
    }
}

impl Cutoffs {
    pub fn validate(&self) -> Result<()> {
        if !(self.weight_floor >= 0.0 && self.weight_floor < 1.0) {
            return Err(Error::Configuration("weight_floor must lie in [0, 1)"));
        }
        if self.n_max > 30 {
            return Err(Error::Configuration("n_max above 30 is not supported"));
        }
        if self.delta_l_max > 60 {
            return Err(Error::Configuration("delta_l_max above 60 is not supported"));
        }
        Ok(())
    }
}

/// One term of the correction sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeWeight {
    pub state: InternalState,
    /// `⟨nl‖r′‖n₀l₀⟩`, units of `L`.
    pub radial_element: f64,
    pub angular_coeff: f64,
    /// `radial_element · angular_coeff`.
    pub combined: f64,
    pub wavenumber: ModeWavenumber,
}

/// Weight of a single `state` for the scenario's initial state; the
/// combined weight is exactly zero for odd `l − l₀`.
pub fn mode_weight(scenario: &Scenario, state: InternalState) -> Result<ModeWeight> {
    let mol = HarmonicMolecule::new(scenario.a_over_l, scenario.m1, scenario.m2)?;
    let angular_coeff = angular_coeff_f(state.l, scenario.initial.l);
    let radial_element = reduced_matrix_element(state, scenario.initial, &mol)?;
    let combined = if angular_coeff == 0.0 {
        0.0
    } else {
        radial_element * angular_coeff
    };
    Ok(ModeWeight {
        state,
        radial_element,
        angular_coeff,
        combined,
        wavenumber: mode_wavenumber(scenario, state),
    })
}

/// All modes within `cutoffs`, sorted by decreasing `|combined|` (ties by
/// state). Evanescent modes are kept and tagged.
pub fn enumerate_modes(scenario: &Scenario, cutoffs: &Cutoffs) -> Result<Vec<ModeWeight>> {
    cutoffs.validate()?;
    let dl = cutoffs.delta_l_max as i32;
    let mut modes = Vec::new();
    for delta in (-dl..=dl).filter(|d| d % 2 == 0) {
        let l = scenario.initial.l + delta;
        for n in 0..=cutoffs.n_max {
            let w = mode_weight(scenario, InternalState::new(n, l))?;
            if w.combined != 0.0 {
                modes.push(w);
            }
        }
    }
    let max = modes.iter().fold(0.0f64, |m, w| m.max(w.combined.abs()));
    modes.retain(|w| w.combined.abs() >= cutoffs.weight_floor * max);
    if modes.is_empty() {
        return Err(Error::Configuration("weight_floor excludes every internal mode"));
    }
    modes.sort_by(|a, b| {
        b.combined
            .abs()
            .total_cmp(&a.combined.abs())
            .then(a.state.cmp(&b.state))
    });
    Ok(modes)
}

/// Bookkeeping of `Σ |combined|²`, the weight carried by the last term of
/// the density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationReport {
    /// Sum over all states, `a² (2n₀+|l₀|+1) / 8` (units `L²`).
    pub total: f64,
    /// Sum over the enumerated modes.
    pub retained: f64,
    /// Part of `retained` in evanescent modes.
    pub evanescent: f64,
}

impl TruncationReport {
    pub fn new(scenario: &Scenario, modes: &[ModeWeight]) -> Self {
        let a = scenario.a_over_l;
        let total = a * a * (scenario.initial.energy_index() + 1) as f64 / 8.0;
        let mut retained = 0.0;
        let mut evanescent = 0.0;
        for w in modes {
            let s = w.combined * w.combined;
            retained += s;
            if !w.wavenumber.is_propagating() {
                evanescent += s;
            }
        }
        TruncationReport {
            total,
            retained,
            evanescent,
        }
    }

    /// Fraction of the total weight discarded by the cutoffs.
    pub fn tail_fraction(&self) -> f64 {
        if self.total == 0.0 {
            0.0
        } else {
            ((self.total - self.retained) / self.total).max(0.0)
        }
    }
}
