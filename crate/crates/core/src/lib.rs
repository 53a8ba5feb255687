//! Laplace-integral machinery: exponential-mean derivatives, improper and
//! oscillatory integrals, convolution and a Fourier transform for
//! conditionally integrable functions.

pub mod cli;
pub mod config;
pub mod convolution;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod extrapolation;
pub mod fourier;
pub mod function;
pub mod interchange;
pub mod laplace_means;
pub mod quadrature;
pub mod types;
pub mod verify;

pub use convolution::{convolve, ConvPlan, ConvRoute, Convolver};
pub use error::{Error, Result};
pub use fourier::{fourier_transform, invert, spectrum, SpectrumProvider, SpectrumTable, TransformRequest};
pub use function::{translate, ExtendedInterval, RealFn, TailClass};
pub use interchange::{diff_under_integral, fubini_residual, iterated_integrals, Kernel2D};
pub use quadrature::{
    alexiewicz_norm, holder_bound_check, integrate_bounded, integrate_improper, oscillatory_integral, total_variation,
    CumulativeIntegral, TruncationPolicy,
};
pub use types::{
    IntegralResult, LadderConfig, LadderDirection, LimitResult, QuadValue, ResidualReport, Scalar, Status,
};
