//! Physical setup of one diffraction run, in slit-width units.

use core::fmt;
use core::str::FromStr;

use crate::molecule::{Cutoffs, HarmonicMolecule, InternalState};
use crate::{Error, Result};

/// Default lower bound of the propagation distance, in units of `L`.
pub const DEFAULT_Z_MIN: f64 = 1e-3;

/// Default number of slits on each side of the central one for carpets.
pub const DEFAULT_GRATING_HALF_COUNT: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    SingleSlit,
    /// `2N+1` slits of width `L` with period `d` (both in units of `L`).
    Grating {
        d_over_l: f64,
        half_count: u32,
    },
}

/// Which center-of-mass propagator the correction terms use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelChoice {
    #[default]
    Exact,
    Paraxial,
}

impl fmt::Display for KernelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelChoice::Exact => "exact",
            KernelChoice::Paraxial => "paraxial",
        })
    }
}

impl FromStr for KernelChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(KernelChoice::Exact),
            "paraxial" => Ok(KernelChoice::Paraxial),
            _ => Err(Error::Configuration("kernel must be `exact` or `paraxial`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub lambda_over_l: f64,
    pub a_over_l: f64,
    pub m1: f64,
    pub m2: f64,
    pub initial: InternalState,
    pub geometry: Geometry,
    pub kernel: KernelChoice,
    pub cutoffs: Cutoffs,
    pub z_min: f64,
}

/// Parameter sets used for the published figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    NearField,
    OpticGrate,
    Nano,
    Crystal,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::NearField, Preset::OpticGrate, Preset::Nano, Preset::Crystal];

    pub fn name(self) -> &'static str {
        match self {
            Preset::NearField => "near-field",
            Preset::OpticGrate => "optic-grate",
            Preset::Nano => "nano",
            Preset::Crystal => "crystal",
        }
    }

    /// `(λ/L, a/L)`.
    pub fn ratios(self) -> (f64, f64) {
        match self {
            // a/L = 1e-3 is the largest molecule shown for this wavelength
            Preset::NearField => (9.64e-5, 1e-3),
            Preset::OpticGrate => (3.89e-4, 4e-3),
            Preset::Nano => (9.64e-4, 0.14),
            Preset::Crystal => (0.363, 0.335),
        }
    }

    pub fn scenario(self) -> Scenario {
        let (lambda_over_l, a_over_l) = self.ratios();
        Scenario {
            lambda_over_l,
            a_over_l,
            ..Scenario::default()
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or(Error::Configuration(
                "unknown preset (near-field, optic-grate, nano, crystal)",
            ))
    }
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            lambda_over_l: 3.89e-4,
            a_over_l: 0.0,
            m1: 20.0,
            m2: 26.0,
            initial: InternalState::GROUND,
            geometry: Geometry::SingleSlit,
            kernel: KernelChoice::Exact,
            cutoffs: Cutoffs::default(),
            z_min: DEFAULT_Z_MIN,
        }
    }
}

impl Scenario {
    pub fn with_grating(mut self, d_over_l: f64, half_count: u32) -> Self {
        self.geometry = Geometry::Grating { d_over_l, half_count };
        self
    }

    pub fn with_a(mut self, a_over_l: f64) -> Self {
        self.a_over_l = a_over_l;
        self
    }

    pub fn with_kernel(mut self, kernel: KernelChoice) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_over_l > 0.0 && self.lambda_over_l.is_finite()) {
            return Err(Error::InvalidScenario("lambda/L must be positive and finite"));
        }
        if !(self.a_over_l >= 0.0 && self.a_over_l.is_finite()) {
            return Err(Error::InvalidScenario("a/L must be non-negative and finite"));
        }
        if !(self.m1 > 0.0 && self.m2 > 0.0 && self.m1.is_finite() && self.m2.is_finite()) {
            return Err(Error::InvalidScenario("masses must be positive"));
        }
        if !(self.z_min > 0.0 && self.z_min.is_finite()) {
            return Err(Error::InvalidScenario("z_min must be positive"));
        }
        if let Geometry::Grating { d_over_l, .. } = self.geometry {
            if !(d_over_l > 1.0 && d_over_l.is_finite()) {
                return Err(Error::InvalidScenario(
                    "grating period must exceed the slit width (d > L)",
                ));
            }
        }
        self.cutoffs.validate()
    }

    pub fn total_mass(&self) -> f64 {
        self.m1 + self.m2
    }

    pub fn reduced_mass(&self) -> f64 {
        self.m1 * self.m2 / (self.m1 + self.m2)
    }

    /// Wavenumber of the incoming beam, `2π/λ` in units of `1/L`.
    pub fn incoming_k(&self) -> f64 {
        core::f64::consts::TAU / self.lambda_over_l
    }

    /// `None` for the point-particle limit `a = 0`.
    pub fn molecule(&self) -> Option<HarmonicMolecule> {
        HarmonicMolecule::new(self.a_over_l, self.m1, self.m2).ok()
    }

    /// Slit-center offsets `k·d` for `k = -N..=N` (just `[0]` for one slit).
    pub fn slit_offsets(&self) -> impl Iterator<Item = f64> {
        let (d, n) = match self.geometry {
            Geometry::SingleSlit => (0.0, 0i64),
            Geometry::Grating { d_over_l, half_count } => (d_over_l, half_count as i64),
        };
        (-n..=n).map(move |k| k as f64 * d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_carry_published_ratios() {
        assert_eq!(Preset::Crystal.ratios(), (0.363, 0.335));
        assert_eq!(Preset::OpticGrate.ratios(), (3.89e-4, 4e-3));
        assert_eq!(Preset::Nano.ratios(), (9.64e-4, 0.14));
        assert_eq!(Preset::NearField.ratios().0, 9.64e-5);
        for p in Preset::ALL {
            let s = p.scenario();
            assert_eq!((s.m1, s.m2), (20.0, 26.0));
            assert_eq!(s.initial, InternalState::GROUND);
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
    }

    #[test]
    fn validation() {
        assert!(Preset::Crystal.scenario().validate().is_ok());
        assert!(Preset::Crystal.scenario().with_grating(1.0, 3).validate().is_err());
        assert!(Preset::Crystal.scenario().with_grating(8.0, 20).validate().is_ok());
        let mut s = Preset::Nano.scenario();
        s.lambda_over_l = 0.0;
        assert!(s.validate().is_err());
        let mut s = Preset::Nano.scenario();
        s.m2 = -1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn offsets() {
        let s = Scenario::default().with_grating(8.0, 2);
        let v: alloc::vec::Vec<f64> = s.slit_offsets().collect();
        assert_eq!(v, [-16.0, -8.0, 0.0, 8.0, 16.0]);
        assert_eq!(Scenario::default().slit_offsets().count(), 1);
    }
}
