use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: error estimate {estimate:.3e} after {panels} panels")]
    QuadratureNonConvergence { estimate: f64, panels: usize },

    #[error("correlator G_{r} could not be evaluated: {source}")]
    Correlator { r: i64, source: Box<Error> },

    #[error("offset {r} lies outside the materialized range |r| <= {max_abs_offset}")]
    MissingOffset { r: i64, max_abs_offset: i64 },

    #[error("site {site} is outside the chain of {n_sites} sites")]
    SiteOutOfRange { site: i64, n_sites: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Whether the error comes from an evaluation (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::QuadratureNonConvergence { .. } | Error::Numerical(_) => true,
            Error::Correlator { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
