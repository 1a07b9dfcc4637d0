use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside the domain")]
    Domain { what: &'static str, value: f64 },

    #[error("mode (n={n}, l={l}) is evanescent (k^2 = {k_squared})")]
    EvanescentMode { n: u32, l: i32, k_squared: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(&'static str),

    #[error("configuration: {0}")]
    Configuration(&'static str),

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate_re}+{estimate_im}i, error {error:e})")]
    NoConvergence {
        estimate_re: f64,
        estimate_im: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("{what}: residual {residual:e} exceeds tolerance")]
    Consistency { what: &'static str, residual: f64 },
}

impl Error {
    /// True for errors caused by the physical setup rather than by bad input
    /// syntax (mode cut-offs, evanescent beams, empty mode tables).
    pub fn is_physics(&self) -> bool {
        matches!(
            self,
            Error::EvanescentMode { .. } | Error::InvalidScenario(_) | Error::Configuration(_)
        )
    }
}
