//! Generalized Euler–Stieltjes constants of the second kind.
//!
//! Input is the Laurent expansion of `F` at `s = 1`,
//! `F(s) = (s-1)^{-m} Σ_k c_k (s-1)^k`. The constants `γ_F(k)` are the Taylor
//! coefficients of `F'/F(s) + m/(s-1)`, i.e. of `f'/f` with `f = Σ c_k u^k`,
//! obtained here by formal power-series division.
//!
//! Everything is plain `f64` with compensated accumulation. The series
//! division is well conditioned when `f` has no zeros close to `u = 0`
//! relative to the decay of its coefficients; for ζ the coefficients of
//! `(s-1)ζ(s)` decay like `1/k!` while `γ_ζ(k)` decays only like `3^{-k}`,
//! so beyond `K ≈ 40` the low-order digits of the highest coefficients are
//! noise.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LiLabError, Result};
use crate::summation::ComplexNeumaierSum;

/// Largest supported truncation order.
pub const MAX_TRUNCATION_ORDER: usize = 64;

/// Classical Stieltjes constants `γ_0..γ_39` to 32 significant digits.
const STIELTJES_TABLE: &str = include_str!("../data/stieltjes_constants.txt");

/// Laurent data of `F` at `s = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentData {
    pole_order: u32,
    coefficients: Vec<Complex64>,
}

impl LaurentData {
    pub fn new(pole_order: u32, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(LiLabError::InvalidLaurent(format!(
                "need at least c_0 and c_1, got {} coefficients",
                coefficients.len()
            )));
        }
        if coefficients.len() > MAX_TRUNCATION_ORDER + 1 {
            return Err(LiLabError::InvalidLaurent(format!(
                "truncation order {} exceeds the supported maximum {MAX_TRUNCATION_ORDER}",
                coefficients.len() - 1
            )));
        }
        if coefficients
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(LiLabError::InvalidLaurent("non-finite coefficient".into()));
        }
        if coefficients[0] == Complex64::new(0.0, 0.0) {
            return Err(LiLabError::DegenerateLaurent);
        }
        Ok(Self {
            pole_order,
            coefficients,
        })
    }

    /// ζ(s) from the classical Stieltjes constants:
    /// `(s-1)ζ(s) = 1 + Σ_{k≥1} (-1)^{k-1} γ_{k-1}/(k-1)! (s-1)^k`.
    pub fn zeta_from_stieltjes(stieltjes: &[f64]) -> Result<Self> {
        let mut coefficients = Vec::with_capacity(stieltjes.len() + 1);
        coefficients.push(Complex64::new(1.0, 0.0));
        let mut factorial = 1.0;
        for (j, &g) in stieltjes.iter().enumerate() {
            if j > 0 {
                factorial *= j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            coefficients.push(Complex64::new(sign * g / factorial, 0.0));
        }
        Self::new(1, coefficients)
    }

    /// ζ Laurent data from the bundled table of 40 Stieltjes constants (`K = 40`).
    pub fn zeta() -> Self {
        Self::zeta_from_stieltjes(&classical_stieltjes_constants())
            .expect("bundled Stieltjes table is valid")
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `K`: index of the last coefficient.
    pub fn truncation_order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: LaurentDocument = serde_json::from_str(text)?;
        Self::new(
            doc.pole_order,
            doc.coefficients
                .iter()
                .map(|c| Complex64::new(c.re, c.im))
                .collect(),
        )
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        let doc = LaurentDocument {
            pole_order: self.pole_order,
            coefficients: self
                .coefficients
                .iter()
                .map(|c| ComplexDocument { re: c.re, im: c.im })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("Laurent data serializes")
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LaurentDocument {
    pole_order: u32,
    coefficients: Vec<ComplexDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDocument {
    re: f64,
    #[serde(default)]
    im: f64,
}

/// The bundled classical Stieltjes constants `γ_0, …, γ_39`.
pub fn classical_stieltjes_constants() -> Vec<f64> {
    STIELTJES_TABLE
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let value = l.split_whitespace().nth(1).expect("index and value");
            value.parse::<f64>().expect("decimal constant")
        })
        .collect()
}

/// `γ_F(0..K-1)`: Taylor coefficients of `F'/F(s) + m/(s-1)` at `s = 1`.
pub fn logderiv_coefficients(data: &LaurentData) -> Result<Vec<Complex64>> {
    let c = data.coefficients();
    let c0 = c[0];
    if c0 == Complex64::new(0.0, 0.0) {
        return Err(LiLabError::DegenerateLaurent);
    }
    let b: Vec<Complex64> = c.iter().map(|ck| ck / c0).collect();
    let k = data.truncation_order();
    // f·q = f' with f = Σ b_i u^i, b_0 = 1:
    // q_j = (j+1) b_{j+1} - Σ_{i=1..j} b_i q_{j-i}
    let mut q: Vec<Complex64> = Vec::with_capacity(k);
    for j in 0..k {
        let mut acc = ComplexNeumaierSum::new();
        acc.add(b[j + 1] * (j + 1) as f64);
        for i in 1..=j {
            acc.add(-(b[i] * q[j - i]));
        }
        q.push(acc.value());
    }
    Ok(q)
}

/// Per-coefficient relative residual of `f·(F'/F + m/u) = f'`, i.e.
/// `|Σ_{i≤j} c_i γ_F(j-i) - (j+1)c_{j+1}| / |(j+1)c_{j+1}|` for `j < K`.
/// Equivalent to multiplying the log-derivative series (with its pole) by the
/// `F` series and comparing with `F'` term by term.
pub fn series_consistency(data: &LaurentData, gammas: &[Complex64]) -> Vec<f64> {
    let c = data.coefficients();
    (0..gammas.len().min(data.truncation_order()))
        .map(|j| {
            let mut acc = ComplexNeumaierSum::new();
            for i in 0..=j {
                acc.add(c[i] * gammas[j - i]);
            }
            let target = c[j + 1] * (j + 1) as f64;
            (acc.value() - target).norm() / target.norm()
        })
        .collect()
}

/// Componentwise backward error of the same identity: the residual divided
/// by `Σ_{i≤j} |c_i||γ_F(j-i)| + (j+1)|c_{j+1}|`.
pub fn series_backward_error(data: &LaurentData, gammas: &[Complex64]) -> Vec<f64> {
    let c = data.coefficients();
    (0..gammas.len().min(data.truncation_order()))
        .map(|j| {
            let mut acc = ComplexNeumaierSum::new();
            let mut magnitude = 0.0;
            for i in 0..=j {
                acc.add(c[i] * gammas[j - i]);
                magnitude += c[i].norm() * gammas[j - i].norm();
            }
            let target = c[j + 1] * (j + 1) as f64;
            magnitude += target.norm();
            (acc.value() - target).norm() / magnitude
        })
        .collect()
}

fn require_len(gammas: &[Complex64], n: usize) -> Result<()> {
    if gammas.len() < n {
        return Err(LiLabError::InsufficientCoefficients {
            needed: n,
            available: gammas.len(),
        });
    }
    Ok(())
}

/// `S_NA(F, n) = m_F + Σ_{l=1..n} C(n,l) γ_F(l-1)`.
pub fn nonarchimedean_sum(gammas: &[Complex64], polar_order: u32, n: u32) -> Result<Complex64> {
    if n == 0 {
        return Err(LiLabError::domain(
            "nonarchimedean_sum",
            "n must be positive",
        ));
    }
    require_len(gammas, n as usize)?;
    let mut acc = ComplexNeumaierSum::new();
    acc.add(Complex64::new(f64::from(polar_order), 0.0));
    let mut binom = 1.0;
    let nf = f64::from(n);
    for l in 1..=n {
        binom *= (nf - f64::from(l) + 1.0) / f64::from(l);
        acc.add(gammas[(l - 1) as usize] * binom);
    }
    Ok(acc.value())
}

/// One entry of [`bound_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundScanEntry {
    pub n: u32,
    /// `|Re S_NA(F,n) - m_F| / (√n log n)`; `log 2` replaces `log 1` at `n = 1`.
    pub normalized: f64,
}

/// The normalized binomial sums whose boundedness is equivalent to GRH.
pub fn bound_scan(
    gammas: &[Complex64],
    polar_order: u32,
    n_max: u32,
) -> Result<Vec<BoundScanEntry>> {
    if n_max == 0 {
        return Err(LiLabError::domain("bound_scan", "n_max must be positive"));
    }
    require_len(gammas, n_max as usize)?;
    (1..=n_max)
        .map(|n| {
            let s = nonarchimedean_sum(gammas, polar_order, n)?;
            let nf = f64::from(n);
            let log = if n == 1 { 2f64.ln() } else { nf.ln() };
            Ok(BoundScanEntry {
                n,
                normalized: (s.re - f64::from(polar_order)).abs() / (nf.sqrt() * log),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::EULER_GAMMA;
    use proptest::prelude::*;

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn bundled_table_has_forty_constants() {
        let g = classical_stieltjes_constants();
        assert_eq!(g.len(), 40);
        assert_eq!(g[0], EULER_GAMMA);
        assert!((g[1] + 0.072_815_845_483_676_72).abs() < 2e-17);
    }

    #[test]
    fn zeta_constant_term_is_euler_gamma() {
        let g = logderiv_coefficients(&LaurentData::zeta()).unwrap();
        assert_eq!(g.len(), 40);
        assert!((g[0].re - EULER_GAMMA).abs() < 1e-13);
        assert_eq!(g[0].im, 0.0);
    }

    #[test]
    fn two_term_series() {
        let data = LaurentData::new(0, real(&[1.0, 0.37])).unwrap();
        let g = logderiv_coefficients(&data).unwrap();
        assert_eq!(g, vec![Complex64::new(0.37, 0.0)]);
    }

    #[test]
    fn exponential_has_constant_log_derivative() {
        // f = exp(a u) → f'/f = a
        let a = 0.8;
        let mut c = vec![1.0];
        for k in 1..=20 {
            let prev = c[k - 1];
            c.push(prev * a / k as f64);
        }
        let g = logderiv_coefficients(&LaurentData::new(0, real(&c)).unwrap()).unwrap();
        assert!((g[0].re - a).abs() < 1e-15);
        for gk in &g[1..] {
            assert!(gk.norm() < 1e-15);
        }
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        assert!(matches!(
            LaurentData::new(1, real(&[0.0, 1.0])),
            Err(LiLabError::DegenerateLaurent)
        ));
        assert!(LaurentData::new(1, real(&[1.0])).is_err());
        assert!(LaurentData::new(0, vec![Complex64::new(1.0, 0.0); 70]).is_err());
    }

    #[test]
    fn nonarchimedean_reference_values() {
        let g = logderiv_coefficients(&LaurentData::zeta()).unwrap();
        let s1 = nonarchimedean_sum(&g, 1, 1).unwrap();
        assert!((s1.re - (1.0 + EULER_GAMMA)).abs() < 1e-14);
        let h = real(&[0.25, 9.0]);
        assert_eq!(nonarchimedean_sum(&h, 0, 1).unwrap().re, 0.25);
        assert!(matches!(
            nonarchimedean_sum(&h, 0, 3),
            Err(LiLabError::InsufficientCoefficients {
                needed: 3,
                available: 2
            })
        ));
    }

    #[test]
    fn bound_scan_conventions() {
        let g = real(&[0.5]);
        let s = bound_scan(&g, 0, 1).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0].normalized - 0.5 / 2f64.ln()).abs() < 1e-15);
        let zeros = real(&[0.0; 10]);
        assert!(bound_scan(&zeros, 0, 10)
            .unwrap()
            .iter()
            .all(|e| e.normalized == 0.0));
    }

    #[test]
    fn zeta_bound_scan_stays_small() {
        let g = logderiv_coefficients(&LaurentData::zeta()).unwrap();
        let scan = bound_scan(&g, 1, 30).unwrap();
        assert!(scan.iter().all(|e| e.normalized < 5.0), "{scan:?}");
    }

    #[test]
    fn json_round_trip() {
        let z = LaurentData::zeta();
        let again = LaurentData::from_json_str(&z.to_json_string()).unwrap();
        assert_eq!(z, again);
        assert!(
            LaurentData::from_json_str(r#"{"pole_order":0,"coefficients":[{"re":1}],"x":1}"#)
                .is_err()
        );
    }

    /// Coefficients with geometric decay `R^{-k}`; returns the series and `R`.
    fn well_scaled_series() -> impl Strategy<Value = (Vec<Complex64>, f64)> {
        (2usize..=40, 3.0f64..8.0).prop_flat_map(|(k, radius)| {
            prop::collection::vec((0.5f64..1.5, -0.5f64..0.5), k + 1).prop_map(move |v| {
                let c = v
                    .into_iter()
                    .enumerate()
                    .map(|(i, (re, im))| Complex64::new(re, im) * radius.powi(-(i as i32)))
                    .collect();
                (c, radius)
            })
        })
    }

    #[test]
    fn zeta_series_backward_error_is_at_rounding_level() {
        let z = LaurentData::zeta();
        let g = logderiv_coefficients(&z).unwrap();
        let back = series_backward_error(&z, &g);
        assert_eq!(back.len(), 40);
        assert!(back.iter().all(|&e| e < 1e-15), "{back:?}");
        // the low-order coefficients also meet the per-coefficient form
        assert!(series_consistency(&z, &g)[..8].iter().all(|&e| e < 1e-12));
    }

    /// `exp(H(u e^{iθ}))` with positive Taylor coefficients of `H`: no
    /// cancellation anywhere, so the identity should hold to rounding level.
    fn exponential_series() -> impl Strategy<Value = LaurentData> {
        (
            1usize..=40,
            prop::collection::vec(0.1f64..1.0, 1..=5),
            0.0f64..std::f64::consts::TAU,
            0.2f64..5.0,
        )
            .prop_map(|(k, h, theta, scale)| {
                let rot = Complex64::from_polar(1.0, theta);
                let hm: Vec<Complex64> = h
                    .iter()
                    .enumerate()
                    .map(|(m, &r)| rot.powi(m as i32 + 1) * r)
                    .collect();
                let mut c = vec![Complex64::new(scale, 0.0)];
                for j in 1..=k {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m in 1..=j.min(hm.len()) {
                        acc += hm[m - 1] * c[j - m] * m as f64;
                    }
                    c.push(acc / j as f64);
                }
                LaurentData::new(1, c).unwrap()
            })
    }

    #[test]
    fn zeta_constants_invariant_under_scaling() {
        let z = LaurentData::zeta();
        let base = logderiv_coefficients(&z).unwrap();
        for alpha in [
            Complex64::new(3.0, 0.0),
            Complex64::new(-0.7, 2.5),
            Complex64::new(1e-3, 1e-3),
        ] {
            let scaled: Vec<_> = z.coefficients().iter().map(|c| c * alpha).collect();
            let g = logderiv_coefficients(&LaurentData::new(1, scaled).unwrap()).unwrap();
            let scale = base.iter().map(|q| q.norm()).fold(0.0, f64::max);
            for (x, y) in base.iter().zip(&g) {
                assert!((x - y).norm() <= 1e-14 * scale, "{x} {y}");
            }
        }
    }

    proptest! {
        #[test]
        fn series_consistency_per_coefficient(data in exponential_series()) {
            let g = logderiv_coefficients(&data).unwrap();
            for (j, r) in series_consistency(&data, &g).into_iter().enumerate() {
                prop_assert!(r <= 1e-12, "j={} residual {}", j, r);
            }
        }

        #[test]
        fn scaling_leaves_constants_unchanged(
            (c, _radius) in well_scaled_series(),
            scale_re in 0.1f64..10.0,
            scale_im in -3.0f64..3.0,
        ) {
            let alpha = Complex64::new(scale_re, scale_im);
            let a = logderiv_coefficients(&LaurentData::new(1, c.clone()).unwrap()).unwrap();
            let scaled: Vec<_> = c.iter().map(|x| x * alpha).collect();
            let b = logderiv_coefficients(&LaurentData::new(1, scaled).unwrap()).unwrap();
            // normwise: relative to the largest constant
            let scale = a.iter().map(|q| q.norm()).fold(0.0, f64::max);
            for (j, (x, y)) in a.iter().zip(&b).enumerate() {
                prop_assert!((x - y).norm() <= 1e-14 * scale, "j={} {} {}", j, x, y);
            }
        }
    }
}
