//! Smooth, log-singular and adaptive panel quadrature.

mod adaptive;
mod gauss;
mod logrule;

pub use adaptive::{adaptive_integrate, AdaptiveReport};
pub use gauss::{legendre_values, legendre_with_derivative, smooth_rule, GaussRule};
pub use logrule::{legendre_log_moments, log_weights};
