//! Symmetric Tardos fingerprinting codes.
//!
//! Bias distributions (Gauss-Legendre, discrete arcsine, Chebyshev-Gauss and
//! the continuous arcsine law), code generation and accusation with the
//! symbol-symmetric score, collusion strategies, exact expected coalition
//! scores, and Monte Carlo validation.

pub mod analysis;
pub mod attacks;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod format;
pub mod legendre;
pub mod scheme;

pub use error::{Error, Result};
