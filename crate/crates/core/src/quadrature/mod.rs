//! Integration engines: adaptive Gauss-Kronrod on bounded intervals,
//! truncation limits on unbounded ones, oscillatory kernels, and the
//! variation-type functionals built on them.

mod bounded;
mod cumulative;
mod improper;
mod kronrod;
mod oscillatory;
mod series;
mod variation;

pub use bounded::integrate_bounded;
pub use cumulative::CumulativeIntegral;
pub use improper::{integrate_improper, TruncationPolicy, DEFAULT_TOL};
pub use oscillatory::oscillatory_integral;
pub use variation::{alexiewicz_norm, alexiewicz_norm_on, holder_bound_check, total_variation};

pub(crate) use bounded::{bounded_integrand, check_tol, complex_over};
pub(crate) use oscillatory::{bounded_kernel, oscillatory_with, tail_kernel};
