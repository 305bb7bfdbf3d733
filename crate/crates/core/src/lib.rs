//! Generalized Li coefficients of L-functions: zero sums, the arithmetic
//! formula from Laurent data, the integral decomposition against `S_F`, and
//! the related Volchkov-type integrals.

pub mod cli;
pub mod descriptors;
pub mod error;
pub mod ingest;
pub mod li;
pub mod quadrature;
pub mod special;
pub mod stieltjes;
pub mod summation;
pub mod volchkov;
pub mod zeros;

pub use descriptors::{DerivedConstants, FunctionDescriptor, GammaFactor, EULER_GAMMA};
pub use error::{LiLabError, Result};
pub use li::{
    archimedean_sum, asymptotic_residual, li_arithmetic, li_decomposition, li_general_sum,
    li_zero_sum, LiEvaluation, Route,
};
pub use stieltjes::{logderiv_coefficients, LaurentData};
pub use volchkov::{asymptotic_scan, i2, i3, volchkov_integral, IntegralReport, VolchkovConfig};
pub use zeros::{OffLineZero, OffLineZeroSet, Ordinate, ZeroTable};
