//! The archimedean term I₂(n), the oscillatory integral I₃(n) of `S_F`
//! against `-G'_n`, the Volchkov integral and the normalized scan built on it.

use rayon::prelude::*;

use crate::descriptors::FunctionDescriptor;
use crate::error::{LiLabError, Result};
use crate::li::{gamma_factor_sum, li_arithmetic, LiEvaluation};
use crate::quadrature::{integrate, QuadConfig};
use crate::special::{g_oscillator, g_oscillator_weight, oscillation_nodes};
use crate::stieltjes::{logderiv_coefficients, LaurentData};
use crate::summation::NeumaierSum;
use crate::zeros::{smooth_count, ZeroTable};

/// Knobs for [`i3`].
#[derive(Debug, Clone, Copy)]
pub struct VolchkovConfig {
    /// Assumed bound on `|S_F|` beyond the table, used for the tail bound.
    pub s_cap: f64,
    /// Absolute tolerance of the smooth-part quadrature.
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for VolchkovConfig {
    fn default() -> Self {
        Self {
            s_cap: 4.0,
            abs_tol: 1e-8,
            max_subdivisions: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralReport {
    pub n: u32,
    /// `step_part - smooth_part`.
    pub value: f64,
    /// `∫_0^T N_F(x)(-G'_n(x)) dx`, summed exactly.
    pub step_part: f64,
    /// `∫_0^T smooth_count(x)(-G'_n(x)) dx` by quadrature.
    pub smooth_part: f64,
    /// `s_cap · ∫_T^∞ |G'_n|`.
    pub tail_bound: f64,
    /// Error estimate of the smooth-part quadrature.
    pub quadrature_error: f64,
    pub truncation_height: f64,
    pub s_cap: f64,
}

/// `Re Σ_j [n λ_j ψ(λ_j+μ_j) + Σ_{k=2..n} C(n,k) λ_j^k/(k-1)! ψ^{(k-1)}(λ_j+μ_j)]`.
pub fn i2(desc: &FunctionDescriptor, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(LiLabError::domain("i2", "n must be >= 1"));
    }
    Ok(gamma_factor_sum(desc, n).re)
}

/// `∫_T^∞ |G'_n(x)| dx`, the total variation of `G_n` above `T`, summed over
/// its monotone pieces. `G_n = 2 sin²(nφ)` with `φ = atan(1/(2x))`, whose
/// turning points sit at `nφ = kπ/2`.
pub fn oscillator_variation_above(n: u32, t: f64) -> f64 {
    let phi_t = (0.5 / t).atan();
    let nf = f64::from(n);
    let g = |phi: f64| 2.0 * (nf * phi).sin().powi(2);
    let mut angles = vec![phi_t];
    let mut k = (2.0 * nf * phi_t / std::f64::consts::PI).floor() as u64;
    while k >= 1 {
        let phi = k as f64 * std::f64::consts::PI / (2.0 * nf);
        if phi < phi_t {
            angles.push(phi);
        }
        k -= 1;
    }
    angles.push(0.0);
    angles.windows(2).map(|w| (g(w[0]) - g(w[1])).abs()).sum()
}

/// Exact integral of `N_F` against `-G'_n` over `[0, T]`: each zero at
/// height `γ` contributes `G_n(γ) - G_n(T)`.
pub fn step_part(desc: &FunctionDescriptor, table: &ZeroTable, n: u32, t: f64) -> f64 {
    let g_t = g_oscillator(n, t);
    let weight = f64::from(table.pair_weight());
    let mut sum = NeumaierSum::new();
    for o in table.ordinates().iter().filter(|o| o.gamma.abs() <= t) {
        sum.add(weight * f64::from(o.multiplicity) * (g_oscillator(n, o.gamma.abs()) - g_t));
    }
    sum.add(f64::from(desc.siegel_zero_count()) * (g_oscillator(n, 0.0) - g_t));
    sum.value()
}

fn smooth_breakpoints(n: u32, t: f64) -> Vec<f64> {
    let mut points = vec![0.0];
    let nodes = oscillation_nodes(n, 0.0, t);
    let mut x = nodes.last().copied().unwrap_or(0.0).max(1.0);
    points.extend(nodes);
    // geometric panels over the slowly decaying part
    loop {
        x *= 2.0;
        if x >= t {
            break;
        }
        points.push(x);
    }
    points.push(t);
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// `I₃(n) = ∫_0^∞ S_F(x) (-G'_n(x)) dx`, truncated at the table coverage.
pub fn i3(
    desc: &FunctionDescriptor,
    table: &ZeroTable,
    n: u32,
    config: VolchkovConfig,
) -> Result<IntegralReport> {
    if n == 0 {
        return Err(LiLabError::domain("i3", "n must be >= 1"));
    }
    if table.is_empty() {
        return Err(LiLabError::EmptyTable);
    }
    table.check_compatible(desc)?;
    if !(config.s_cap >= 0.0) {
        return Err(LiLabError::domain("i3", "s_cap must be >= 0"));
    }
    let t = table.coverage_height();
    let step = step_part(desc, table, n, t);
    let quad = integrate(
        |x| smooth_count(desc, x) * g_oscillator_weight(n, x),
        &smooth_breakpoints(n, t),
        QuadConfig {
            abs_tol: config.abs_tol,
            rel_tol: 1e-14,
            max_subdivisions: config.max_subdivisions,
        },
    );
    if !quad.converged {
        log::warn!(
            "i3(n = {n}): quadrature stopped at error estimate {:e}",
            quad.abs_error
        );
    }
    Ok(IntegralReport {
        n,
        value: step - quad.value,
        step_part: step,
        smooth_part: quad.value,
        tail_bound: config.s_cap * oscillator_variation_above(n, t),
        quadrature_error: quad.abs_error,
        truncation_height: t,
        s_cap: config.s_cap,
    })
}

/// Both sides of the Volchkov-type identity at `n = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct VolchkovReport {
    /// `∫ x S_F(x)/(x²+¼)² dx`, i.e. `I₃(1)`.
    pub integral: IntegralReport,
    /// `λ_F(1) - log Q_F - 4m_F - I₂(1)` with `λ_F(1)` from the arithmetic route.
    pub rhs: f64,
    pub lambda_one: LiEvaluation,
    /// `Re γ_F(0)` from the Laurent data.
    pub gamma0: f64,
    /// `3m_F + integral`, which should reproduce `gamma0`.
    pub gamma0_from_integral: f64,
}

pub fn volchkov_integral(
    desc: &FunctionDescriptor,
    table: &ZeroTable,
    laurent: &LaurentData,
    config: VolchkovConfig,
) -> Result<VolchkovReport> {
    let integral = i3(desc, table, 1, config)?;
    let lambda_one = li_arithmetic(desc, laurent, 1)?;
    let m = f64::from(desc.polar_order());
    let rhs = lambda_one.value - desc.q_scale().ln() - 4.0 * m - i2(desc, 1)?;
    let gamma0 = logderiv_coefficients(laurent)?[0].re;
    Ok(VolchkovReport {
        gamma0_from_integral: 3.0 * m + integral.value,
        integral,
        rhs,
        lambda_one,
        gamma0,
    })
}

/// One entry of [`asymptotic_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub n: u32,
    /// `∫ x S_F(x)/(x²+¼)² U_{n-1}(u(x)) dx = I₃(n)/n`.
    pub value: f64,
    /// `value · √n / log(n+1)`.
    pub normalized: f64,
    pub tail_bound: f64,
}

pub fn asymptotic_scan(
    desc: &FunctionDescriptor,
    table: &ZeroTable,
    n_values: &[u32],
    config: VolchkovConfig,
) -> Result<Vec<ScanRow>> {
    n_values
        .par_iter()
        .map(|&n| {
            let r = i3(desc, table, n, config)?;
            let nf = f64::from(n);
            let value = r.value / nf;
            Ok(ScanRow {
                n,
                value,
                normalized: value * nf.sqrt() / (nf + 1.0).ln(),
                tail_bound: (r.tail_bound + r.quadrature_error) / nf,
            })
        })
        .collect()
}
