//! Special functions: Chebyshev polynomials, the mapped oscillator `G_n`,
//! and the complex gamma family on `Re z > 0`.

mod chebyshev;
mod gamma;

pub use chebyshev::{
    cayley, cheb_t, cheb_t_recurrence, cheb_u, cheb_u_recurrence, g_oscillator,
    g_oscillator_weight, oscillation_nodes,
};
pub use gamma::{digamma, log_gamma, polygamma};

pub(crate) use gamma::{log_gamma_unchecked, polygamma_unchecked, scaled_hurwitz};
