//! Special functions used by the closed forms: Fresnel integrals, the
//! order-one Hankel function, associated Laguerre polynomials, the Gamma
//! function on the half-integer lattice and Talmi integrals.
//!
//! Only the orders and ranges the engine needs are covered.

mod bessel;
mod fresnel;
mod gamma;
mod laguerre;

pub use bessel::{bessel_j1, bessel_y1, hankel1_order1, HANKEL_SERIES_LIMIT};
pub use fresnel::fresnel;
pub use gamma::{gamma_half, talmi, talmi_twice};
pub use laguerre::{laguerre, laguerre_coefficients, laguerre_product_coefficients, Rational};
