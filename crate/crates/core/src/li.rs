//! Re λ_F(n) by four routes, plus the asymptotic model for the residual check.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::descriptors::FunctionDescriptor;
use crate::error::{LiLabError, Result};
use crate::quadrature::{integrate_to_infinity_with_points, QuadConfig};
use crate::special::{g_oscillator, oscillation_nodes, polygamma_unchecked, scaled_hurwitz};
use crate::stieltjes::{logderiv_coefficients, nonarchimedean_sum, LaurentData};
use crate::summation::{ComplexNeumaierSum, NeumaierSum};
use crate::volchkov::{i2, i3, VolchkovConfig};
use crate::zeros::{tail_density_unchecked, OffLineZeroSet, ZeroTable};

/// Fraction of the tail correction reported as its error bound.
pub const TAIL_HAIRCUT: f64 = 0.1;

/// Polygamma orders above this go through the scaled Hurwitz sum instead.
const DIRECT_POLYGAMMA_MAX_ORDER: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ZeroSum,
    GeneralSum,
    Arithmetic,
    Decomposition,
}

impl Route {
    pub const ALL: [Route; 4] = [
        Route::ZeroSum,
        Route::GeneralSum,
        Route::Arithmetic,
        Route::Decomposition,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Route::ZeroSum => "zero_sum",
            Route::GeneralSum => "general_sum",
            Route::Arithmetic => "arithmetic",
            Route::Decomposition => "decomposition",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Route::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| {
                format!("unknown route `{s}` (expected zero_sum, general_sum, arithmetic or decomposition)")
            })
    }
}

/// One computed value of `Re λ_F(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiEvaluation {
    pub n: u32,
    pub route: Route,
    pub value: f64,
    /// `conj λ_F(-n)`, arithmetic route only.
    pub complex_value: Option<Complex64>,
    pub truncation_height: Option<f64>,
    /// Estimated absolute error from truncation; always `>= 0`.
    pub tail_bound: f64,
}

fn check_n(function: &'static str, n: u32) -> Result<()> {
    if n == 0 {
        return Err(LiLabError::domain(function, "n must be >= 1"));
    }
    Ok(())
}

/// Options for [`li_zero_sum_with`].
#[derive(Debug, Clone, Copy)]
pub struct ZeroSumOptions {
    /// Use only ordinates up to this height (must be within coverage).
    pub height: Option<f64>,
    /// Add the modelled contribution of zeros above the truncation height.
    pub tail_correction: bool,
}

impl Default for ZeroSumOptions {
    fn default() -> Self {
        Self {
            height: None,
            tail_correction: true,
        }
    }
}

/// Zero-sum route with the default tail correction.
pub fn li_zero_sum(desc: &FunctionDescriptor, table: &ZeroTable, n: u32) -> Result<LiEvaluation> {
    li_zero_sum_with(desc, table, n, ZeroSumOptions::default())
}

/// `Σ weight·mult·G_n(γ) + N_F(0)·G_n(0)` over the table, all zeros taken on
/// the critical line, plus `∫_{T}^∞ G_n·density` for the zeros above `T`.
pub fn li_zero_sum_with(
    desc: &FunctionDescriptor,
    table: &ZeroTable,
    n: u32,
    options: ZeroSumOptions,
) -> Result<LiEvaluation> {
    check_n("li_zero_sum", n)?;
    if table.is_empty() {
        return Err(LiLabError::EmptyTable);
    }
    table.check_compatible(desc)?;
    let height = match options.height {
        Some(h) if h > table.coverage_height() => {
            return Err(LiLabError::OutOfCoverage {
                requested: h,
                coverage: table.coverage_height(),
            })
        }
        Some(h) if !(h > 0.0) => {
            return Err(LiLabError::domain("li_zero_sum", "height must be positive"))
        }
        Some(h) => h,
        None => table.coverage_height(),
    };

    let weight = f64::from(table.pair_weight());
    let mut sum = NeumaierSum::new();
    for o in table.ordinates().iter().filter(|o| o.gamma.abs() <= height) {
        sum.add(weight * f64::from(o.multiplicity) * g_oscillator(n, o.gamma.abs()));
    }
    sum.add(f64::from(desc.siegel_zero_count()) * g_oscillator(n, 0.0));

    let mut tail_bound = 0.0;
    if options.tail_correction {
        if desc.has_gamma_factors() {
            let correction = tail_correction(desc, n, height);
            sum.add(correction);
            tail_bound = TAIL_HAIRCUT * correction.abs();
        } else {
            tail_bound = f64::INFINITY;
        }
    }

    Ok(LiEvaluation {
        n,
        route: Route::ZeroSum,
        value: sum.value(),
        complex_value: None,
        truncation_height: Some(height),
        tail_bound,
    })
}

/// `∫_T^∞ G_n(x) ρ(x) dx` with `ρ` the two-sided model density, clamped at 0
/// where the asymptotic model goes negative.
fn tail_correction(desc: &FunctionDescriptor, n: u32, height: f64) -> f64 {
    let nodes = oscillation_nodes(n, height, f64::INFINITY);
    let config = QuadConfig {
        abs_tol: 1e-15,
        rel_tol: 1e-10,
        max_subdivisions: 20_000,
    };
    integrate_to_infinity_with_points(
        |x| g_oscillator(n, x) * tail_density_unchecked(desc, x).max(0.0),
        height,
        &nodes,
        config,
    )
    .value
}

/// `g_{n,γ}(σ) = Re (1 - 1/ρ)^n` for `ρ = σ + iγ`.
pub fn general_weight(n: u32, sigma: f64, gamma: f64) -> f64 {
    1.0 - one_minus_general_weight(n, sigma, gamma)
}

/// `1 - g_{n,γ}(σ)`, computed without cancellation when `|1 - 1/ρ|` is close to 1.
pub fn one_minus_general_weight(n: u32, sigma: f64, gamma: f64) -> f64 {
    let rho = Complex64::new(sigma, gamma);
    let w = (rho - 1.0) / rho;
    // 1 - r^n cos(nθ) = (1 - r^n) + r^n · 2 sin²(nθ/2)
    let nf = f64::from(n);
    let log_r = 0.5 * ((sigma - 1.0).powi(2) + gamma * gamma).ln()
        - 0.5 * (sigma * sigma + gamma * gamma).ln();
    let rn = (nf * log_r).exp();
    let half = 0.5 * nf * w.arg();
    -(nf * log_r).exp_m1() + rn * 2.0 * half.sin().powi(2)
}

/// `Σ mult·(1 - g_{n,γ}(σ))` over a symmetry-closed finite zero set.
pub fn li_general_sum(zeros: &OffLineZeroSet, n: u32) -> Result<f64> {
    check_n("li_general_sum", n)?;
    let mut sum = NeumaierSum::new();
    for z in zeros.zeros() {
        sum.add(f64::from(z.multiplicity) * one_minus_general_weight(n, z.sigma, z.gamma));
    }
    Ok(sum.value())
}

/// The gamma-factor part without `n log Q_F`:
/// `Σ_j [n λ_j ψ(λ_j+μ_j) + Σ_{l=2..n} C(n,l) λ_j^l/(l-1)! ψ^{(l-1)}(λ_j+μ_j)]`.
pub(crate) fn gamma_factor_sum(desc: &FunctionDescriptor, n: u32) -> Complex64 {
    let nf = f64::from(n);
    let mut acc = ComplexNeumaierSum::new();
    for g in desc.gamma_factors() {
        let lambda = g.lambda();
        let z = g.mu() + lambda;
        acc.add(polygamma_unchecked(0, z) * (nf * lambda));
        let mut binom = nf;
        // λ^l/(l-1)!, carried for the direct branch
        let mut factor = lambda;
        for l in 2..=n {
            let lf = f64::from(l);
            binom *= (nf - lf + 1.0) / lf;
            factor *= lambda / (lf - 1.0);
            let term = if l - 1 <= DIRECT_POLYGAMMA_MAX_ORDER {
                polygamma_unchecked(l - 1, z) * factor
            } else {
                scaled_hurwitz(l, Complex64::new(-lambda, 0.0), z)
            };
            acc.add(term * binom);
        }
    }
    acc.value()
}

/// `S_∞(F, n) = n log Q_F + gamma-factor sum`.
pub fn archimedean_sum(desc: &FunctionDescriptor, n: u32) -> Result<Complex64> {
    check_n("archimedean_sum", n)?;
    let s = gamma_factor_sum(desc, n) + f64::from(n) * desc.q_scale().ln();
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(LiLabError::domain(
            "archimedean_sum",
            format!("binomial sum overflows at n = {n}"),
        ));
    }
    Ok(s)
}

/// Arithmetic route: `conj λ_F(-n) = S_NA(F, n) + S_∞(F, n)`.
pub fn li_arithmetic(
    desc: &FunctionDescriptor,
    laurent: &LaurentData,
    n: u32,
) -> Result<LiEvaluation> {
    check_n("li_arithmetic", n)?;
    if laurent.pole_order() != desc.polar_order() {
        return Err(LiLabError::InvalidLaurent(format!(
            "pole order {} does not match the descriptor's polar order {}",
            laurent.pole_order(),
            desc.polar_order()
        )));
    }
    if laurent.truncation_order() < n as usize {
        return Err(LiLabError::InsufficientCoefficients {
            needed: n as usize,
            available: laurent.truncation_order(),
        });
    }
    let gammas = logderiv_coefficients(laurent)?;
    let total = nonarchimedean_sum(&gammas, desc.polar_order(), n)? + archimedean_sum(desc, n)?;
    Ok(LiEvaluation {
        n,
        route: Route::Arithmetic,
        value: total.re,
        complex_value: Some(total),
        truncation_height: None,
        tail_bound: 0.0,
    })
}

/// `n log Q_F + (1-(-1)^n)(2m_F - N_F(0))`: the closed-form part of the
/// decomposition.
pub fn decomposition_constant(desc: &FunctionDescriptor, n: u32) -> f64 {
    let parity = if n % 2 == 0 { 0.0 } else { 2.0 };
    f64::from(n) * desc.q_scale().ln()
        + parity * (2.0 * f64::from(desc.polar_order()) - f64::from(desc.siegel_zero_count()))
}

/// `n log Q_F + (1-(-1)^n)(2m_F - N_F(0)) + I₂(n) + I₃(n)`.
pub fn li_decomposition(
    desc: &FunctionDescriptor,
    table: &ZeroTable,
    n: u32,
) -> Result<LiEvaluation> {
    li_decomposition_with(desc, table, n, VolchkovConfig::default())
}

pub fn li_decomposition_with(
    desc: &FunctionDescriptor,
    table: &ZeroTable,
    n: u32,
    config: VolchkovConfig,
) -> Result<LiEvaluation> {
    check_n("li_decomposition", n)?;
    let third = i3(desc, table, n, config)?;
    let value = decomposition_constant(desc, n) + i2(desc, n)? + third.value;
    Ok(LiEvaluation {
        n,
        route: Route::Decomposition,
        value,
        complex_value: None,
        truncation_height: Some(third.truncation_height),
        tail_bound: third.tail_bound + third.quadrature_error,
    })
}

/// `(d_F/2) n log n + c_F n`.
pub fn asymptotic_model(desc: &FunctionDescriptor, n: u32) -> f64 {
    let nf = f64::from(n);
    0.5 * desc.degree() * nf * nf.ln() + desc.derived().c_asymptotic * nf
}

/// `(value - model) / (√n log n)`.
pub fn asymptotic_residual(desc: &FunctionDescriptor, evaluation: &LiEvaluation) -> Result<f64> {
    desc.require_gamma_factors("asymptotic_residual")?;
    let n = evaluation.n;
    if n < 2 {
        return Err(LiLabError::domain("asymptotic_residual", "n must be >= 2"));
    }
    let nf = f64::from(n);
    Ok((evaluation.value - asymptotic_model(desc, n)) / (nf.sqrt() * nf.ln()))
}

/// Both sides of the concavity comparison at `σ`:
/// `(g(σ) + g(1-σ), 2 g(½))`. Concavity of `1 - g` in `σ` means the first is
/// at least the second.
pub fn concavity_witness(n: u32, gamma: f64, sigma: f64) -> (f64, f64) {
    let lhs = 2.0
        - one_minus_general_weight(n, sigma, gamma)
        - one_minus_general_weight(n, 1.0 - sigma, gamma);
    let rhs = 2.0 - 2.0 * one_minus_general_weight(n, 0.5, gamma);
    (lhs, rhs)
}

/// `g(σ) + g(1-σ) - 2g(½)`, formed from the `1 - g` values so that it keeps
/// relative accuracy when `g` is close to 1. Nonnegative when `1 - g` is
/// concave in `σ`.
pub fn concavity_gap(n: u32, gamma: f64, sigma: f64) -> f64 {
    2.0 * one_minus_general_weight(n, 0.5, gamma)
        - one_minus_general_weight(n, sigma, gamma)
        - one_minus_general_weight(n, 1.0 - sigma, gamma)
}

/// Largest sampled value of `∂²/∂σ² (1 - g_{n,γ}(σ))` on `σ ∈ (0, 1]`.
fn max_second_derivative(n: u32, gamma: f64) -> f64 {
    const STEPS: usize = 200;
    const H: f64 = 1e-3;
    let f = |s: f64| one_minus_general_weight(n, s, gamma);
    (1..=STEPS)
        .map(|i| {
            let s = i as f64 / STEPS as f64;
            (f(s + H) - 2.0 * f(s) + f(s - H)) / (H * H)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Numeric estimate of the smallest `t` such that `1 - g_{n,γ}` is concave
/// on `[0, 1]` for every `|γ| > t`. Diagnostic only: the sign test uses a
/// sampled finite-difference second derivative.
pub fn concavity_threshold(n: u32) -> Result<f64> {
    check_n("concavity_threshold", n)?;
    let concave = |g: f64| max_second_derivative(n, g) < 0.0;
    let step = 0.01;
    let mut hi = 4.0 * f64::from(n) + 4.0;
    if !concave(hi) {
        return Err(LiLabError::domain(
            "concavity_threshold",
            format!("no concavity found at γ = {hi}"),
        ));
    }
    let mut lo = hi - step;
    while lo > 0.0 && concave(lo) {
        hi = lo;
        lo -= step;
    }
    if lo <= 0.0 {
        return Ok(0.0);
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if concave(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::EULER_GAMMA;
    use crate::special::polygamma;
    use crate::zeros::OffLineZero;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn lambda_one() -> f64 {
        1.0 + EULER_GAMMA / 2.0 - 0.5 * (4.0 * PI).ln()
    }

    #[test]
    fn synthetic_pair_without_tail() {
        let z = FunctionDescriptor::zeta();
        let t = ZeroTable::from_ordinates(&[1.0], 1.0).unwrap();
        let opts = ZeroSumOptions {
            height: None,
            tail_correction: false,
        };
        let e = li_zero_sum_with(&z, &t, 1, opts).unwrap();
        assert!((e.value - 0.8).abs() < 1e-15);
        assert_eq!(e.tail_bound, 0.0);
        assert_eq!(e.truncation_height, Some(1.0));
    }

    #[test]
    fn empty_table_is_rejected() {
        let z = FunctionDescriptor::zeta();
        let t = ZeroTable::from_ordinates(&[], 10.0).unwrap();
        assert!(matches!(
            li_zero_sum(&z, &t, 1),
            Err(LiLabError::EmptyTable)
        ));
        assert!(li_zero_sum(&z, &ZeroTable::from_ordinates(&[3.0], 5.0).unwrap(), 0).is_err());
    }

    #[test]
    fn siegel_zeros_count_only_for_odd_n() {
        let z = FunctionDescriptor::new(
            "s",
            0,
            1.0,
            FunctionDescriptor::zeta().gamma_factors().to_vec(),
            true,
            1,
        )
        .unwrap();
        let t = ZeroTable::from_ordinates(&[5.0], 6.0).unwrap();
        let opts = ZeroSumOptions {
            height: None,
            tail_correction: false,
        };
        let odd = li_zero_sum_with(&z, &t, 3, opts).unwrap().value;
        let even = li_zero_sum_with(&z, &t, 4, opts).unwrap().value;
        assert!((odd - 2.0 - 2.0 * g_oscillator(3, 5.0)).abs() < 1e-15);
        assert!((even - 2.0 * g_oscillator(4, 5.0)).abs() < 1e-15);
    }

    #[test]
    fn arithmetic_zeta_closed_form() {
        let e = li_arithmetic(&FunctionDescriptor::zeta(), &LaurentData::zeta(), 1).unwrap();
        assert!((e.value - lambda_one()).abs() < 1e-13, "{}", e.value);
        assert_eq!(e.tail_bound, 0.0);
        assert!(e.complex_value.unwrap().im.abs() < 1e-15);
    }

    #[test]
    fn arithmetic_needs_enough_coefficients() {
        let short = LaurentData::new(1, vec![Complex64::new(1.0, 0.0); 4]).unwrap();
        assert!(matches!(
            li_arithmetic(&FunctionDescriptor::zeta(), &short, 5),
            Err(LiLabError::InsufficientCoefficients { .. })
        ));
    }

    #[test]
    fn archimedean_zeta_values() {
        let z = FunctionDescriptor::zeta();
        let psi_half = -EULER_GAMMA - 2.0 * 2f64.ln();
        let s1 = archimedean_sum(&z, 1).unwrap();
        assert!((s1.re - (-0.5 * PI.ln() + 0.5 * psi_half)).abs() < 1e-14);
        assert!((s1.re + 1.55412).abs() < 1e-5);
        let s2 = archimedean_sum(&z, 2).unwrap();
        let expected = -PI.ln() + psi_half + 0.25 * PI * PI / 2.0;
        assert!((s2.re - expected).abs() < 1e-13);
    }

    #[test]
    fn archimedean_branches_agree() {
        // direct polygamma term vs scaled Hurwitz at the switch-over order
        let z = Complex64::new(1.25, 0.5);
        let l = DIRECT_POLYGAMMA_MAX_ORDER;
        let lambda: f64 = 0.5;
        let mut factor = lambda;
        for k in 2..=l {
            factor *= lambda / f64::from(k - 1);
        }
        let direct = polygamma(l - 1, z).unwrap() * factor;
        let scaled = scaled_hurwitz(l, Complex64::new(-lambda, 0.0), z);
        assert!((direct - scaled).norm() < 1e-12 * scaled.norm());
    }

    #[test]
    fn general_sum_cases() {
        assert_eq!(li_general_sum(&OffLineZeroSet::default(), 3).unwrap(), 0.0);
        let gammas = [-20.0, -3.5, 3.5, 20.0, 101.0];
        let set = OffLineZeroSet::critical_line(&gammas);
        for n in [1, 2, 7, 50] {
            let expected: f64 = gammas.iter().map(|&g| g_oscillator(n, g.abs())).sum();
            assert!((li_general_sum(&set, n).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn off_line_pair_lowers_value() {
        let pair = OffLineZeroSet::new(vec![
            OffLineZero {
                sigma: 0.75,
                gamma: 20.0,
                multiplicity: 1,
            },
            OffLineZero {
                sigma: 0.25,
                gamma: 20.0,
                multiplicity: 1,
            },
        ])
        .unwrap();
        let on_line = 2.0 * g_oscillator(1, 20.0);
        let off = li_general_sum(&pair, 1).unwrap();
        assert!(on_line - off > 1e-9, "{on_line} {off}");
    }

    #[test]
    fn lambda_two_per_zero() {
        // zero pair at ±γ: 2·32γ²/(4γ²+1)²
        let g: f64 = 3.0;
        let set = OffLineZeroSet::critical_line(&[g, -g]);
        let expected = 2.0 * 32.0 * g * g / (4.0 * g * g + 1.0).powi(2);
        assert!((li_general_sum(&set, 2).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn concavity_thresholds() {
        let t1 = concavity_threshold(1).unwrap();
        assert!((t1 - 1.0 / 3f64.sqrt()).abs() < 1e-3, "{t1}");
        let t2 = concavity_threshold(2).unwrap();
        assert!(t2 > t1 && t2 <= 6f64.sqrt(), "{t2}");
    }

    #[test]
    fn asymptotic_model_has_zero_residual() {
        let z = FunctionDescriptor::zeta();
        for n in [2, 10, 500] {
            let e = LiEvaluation {
                n,
                route: Route::ZeroSum,
                value: asymptotic_model(&z, n),
                complex_value: None,
                truncation_height: None,
                tail_bound: 0.0,
            };
            assert!(asymptotic_residual(&z, &e).unwrap().abs() < 1e-13);
        }
        let e = LiEvaluation {
            n: 1,
            route: Route::ZeroSum,
            value: 0.0,
            complex_value: None,
            truncation_height: None,
            tail_bound: 0.0,
        };
        assert!(asymptotic_residual(&z, &e).is_err());
    }

    #[test]
    fn route_names_round_trip() {
        for r in Route::ALL {
            assert_eq!(r.as_str().parse::<Route>().unwrap(), r);
        }
        assert!("zero".parse::<Route>().is_err());
    }

    proptest! {
        #[test]
        fn concavity_witness_holds(
            gamma in 0.6f64..200.0,
            sigma_idx in 1usize..=9,
        ) {
            let sigma = sigma_idx as f64 / 10.0;
            let (lhs, rhs) = concavity_witness(1, gamma, sigma);
            if sigma_idx == 5 {
                prop_assert!((lhs - rhs).abs() <= 1e-12);
            } else {
                prop_assert!(lhs > rhs, "{} {}", lhs, rhs);
            }
        }

        #[test]
        fn critical_line_general_sum_matches_zero_sum(
            gammas in prop::collection::vec(0.01f64..1e4, 1..20),
            n in 1u32..200,
        ) {
            let set = OffLineZeroSet::critical_line(&gammas);
            let direct: f64 = gammas.iter().map(|&g| g_oscillator(n, g)).sum();
            prop_assert!((li_general_sum(&set, n).unwrap() - direct).abs() <= 1e-12);
        }

        #[test]
        fn zero_sum_is_nonnegative(
            gammas in prop::collection::vec(0.1f64..100.0, 1..10),
            n in 1u32..100,
        ) {
            let mut g = gammas.clone();
            g.sort_by(f64::total_cmp);
            g.dedup();
            let top = *g.last().unwrap();
            let t = ZeroTable::from_ordinates(&g, top).unwrap();
            let e = li_zero_sum(&FunctionDescriptor::zeta(), &t, n).unwrap();
            prop_assert!(e.value >= 0.0);
            prop_assert!(e.tail_bound >= 0.0);
        }
    }
}
