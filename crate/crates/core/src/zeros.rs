//! Zero tables and the counting function `N_F(T)`, its smooth gamma-factor
//! part, and the argument term `S_F(T)` defined by their difference.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::descriptors::FunctionDescriptor;
use crate::error::{LiLabError, Result};
use crate::special::log_gamma_unchecked;

/// One tabulated ordinate. The decimal text is kept as received.
#[derive(Debug, Clone, PartialEq)]
pub struct Ordinate {
    pub gamma: f64,
    pub text: String,
    pub multiplicity: u32,
}

impl Ordinate {
    pub fn new(gamma: f64, multiplicity: u32) -> Self {
        Self {
            gamma,
            text: format!("{gamma}"),
            multiplicity,
        }
    }
}

/// A validated, ascending list of zero ordinates certified complete up to
/// `coverage_height`.
///
/// When `symmetric` is set, each entry `γ > 0` stands for the conjugate pair
/// `½ ± iγ`. Otherwise ordinates are signed and each entry is one zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<Ordinate>,
    coverage_height: f64,
    coverage_text: String,
    symmetric: bool,
    /// `cumulative[i]` = total multiplicity of `ordinates[..i]`.
    cumulative: Vec<u64>,
}

impl ZeroTable {
    pub fn new(ordinates: Vec<Ordinate>, coverage_height: f64, symmetric: bool) -> Result<Self> {
        Self::with_coverage_text(
            ordinates,
            coverage_height,
            format!("{coverage_height}"),
            symmetric,
        )
    }

    pub(crate) fn with_coverage_text(
        ordinates: Vec<Ordinate>,
        coverage_height: f64,
        coverage_text: String,
        symmetric: bool,
    ) -> Result<Self> {
        if !coverage_height.is_finite() || coverage_height <= 0.0 {
            return Err(LiLabError::InvalidTable(format!(
                "coverage height must be positive, got {coverage_height}"
            )));
        }
        for (i, o) in ordinates.iter().enumerate() {
            if !o.gamma.is_finite() || o.gamma == 0.0 || (symmetric && o.gamma < 0.0) {
                return Err(LiLabError::InvalidTable(format!(
                    "entry {i}: ordinate {} not allowed (real zeros go in siegel_zero_count)",
                    o.text
                )));
            }
            if o.multiplicity == 0 {
                return Err(LiLabError::InvalidTable(format!(
                    "entry {i}: multiplicity must be at least 1"
                )));
            }
            if o.gamma.abs() > coverage_height {
                return Err(LiLabError::InvalidTable(format!(
                    "entry {i}: ordinate {} exceeds coverage height {coverage_height}",
                    o.text
                )));
            }
        }
        if let Some(i) = ordinates.windows(2).position(|w| w[1].gamma <= w[0].gamma) {
            return Err(LiLabError::InvalidTable(format!(
                "ordinates not strictly increasing at entry {}",
                i + 1
            )));
        }
        let mut cumulative = Vec::with_capacity(ordinates.len() + 1);
        let mut acc = 0u64;
        cumulative.push(0);
        for o in &ordinates {
            acc += u64::from(o.multiplicity);
            cumulative.push(acc);
        }
        Ok(Self {
            ordinates,
            coverage_height,
            coverage_text,
            symmetric,
            cumulative,
        })
    }

    /// Build a symmetric table from bare ordinates with multiplicity one.
    pub fn from_ordinates(gammas: &[f64], coverage_height: f64) -> Result<Self> {
        Self::new(
            gammas.iter().map(|&g| Ordinate::new(g, 1)).collect(),
            coverage_height,
            true,
        )
    }

    pub fn ordinates(&self) -> &[Ordinate] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn coverage_height(&self) -> f64 {
        self.coverage_height
    }

    pub(crate) fn coverage_text(&self) -> &str {
        &self.coverage_text
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    /// Number of zeros each entry stands for per unit multiplicity.
    pub fn pair_weight(&self) -> u32 {
        if self.symmetric {
            2
        } else {
            1
        }
    }

    /// A copy truncated to ordinates with `|γ| ≤ height`, certified to `height`.
    pub fn truncated(&self, height: f64) -> Result<Self> {
        if height > self.coverage_height {
            return Err(LiLabError::OutOfCoverage {
                requested: height,
                coverage: self.coverage_height,
            });
        }
        let kept = self
            .ordinates
            .iter()
            .filter(|o| o.gamma.abs() <= height)
            .cloned()
            .collect();
        Self::new(kept, height, self.symmetric)
    }

    pub(crate) fn check_compatible(&self, descriptor: &FunctionDescriptor) -> Result<()> {
        if self.symmetric && !descriptor.real_coefficients() {
            return Err(LiLabError::InvalidTable(format!(
                "symmetric table used with `{}`, which has complex coefficients; \
                 list signed ordinates instead",
                descriptor.name()
            )));
        }
        Ok(())
    }

    /// Total multiplicity of entries with `|γ| ≤ t` (table entries, not zeros).
    fn entries_up_to(&self, t: f64) -> u64 {
        if self.symmetric {
            let hi = self.ordinates.partition_point(|o| o.gamma <= t);
            self.cumulative[hi]
        } else {
            let lo = self.ordinates.partition_point(|o| o.gamma < -t);
            let hi = self.ordinates.partition_point(|o| o.gamma <= t);
            self.cumulative[hi] - self.cumulative[lo]
        }
    }
}

/// `N_F(T)`: zeros with `|Im ρ| ≤ T`, right-continuous at ordinates, including
/// the real zeros counted by `siegel_zero_count`.
pub fn count_zeros(table: &ZeroTable, descriptor: &FunctionDescriptor, t: f64) -> Result<u64> {
    table.check_compatible(descriptor)?;
    if !(t >= 0.0) {
        return Err(LiLabError::domain(
            "count_zeros",
            format!("T must be >= 0, got {t}"),
        ));
    }
    if t > table.coverage_height {
        return Err(LiLabError::OutOfCoverage {
            requested: t,
            coverage: table.coverage_height,
        });
    }
    Ok(u64::from(descriptor.siegel_zero_count())
        + u64::from(table.pair_weight()) * table.entries_up_to(t))
}

/// The gamma-factor part of the counting formula:
/// `2m_F + 2T log Q_F / π + (1/π) Im Σ_j [log Γ(λ_j(½+iT)+μ_j) + log Γ(λ_j(½+iT)+conj μ_j)]`.
pub fn smooth_count(descriptor: &FunctionDescriptor, t: f64) -> f64 {
    let mut im_sum = 0.0;
    for g in descriptor.gamma_factors() {
        let base = Complex64::new(0.5 * g.lambda(), g.lambda() * t);
        im_sum += log_gamma_unchecked(base + g.mu()).im;
        im_sum += log_gamma_unchecked(base + g.mu().conj()).im;
    }
    2.0 * f64::from(descriptor.polar_order())
        + 2.0 * t * descriptor.q_scale().ln() / PI
        + im_sum / PI
}

/// `S_F(T) = N_F(T) - smooth_count(T)`.
pub fn s_function(table: &ZeroTable, descriptor: &FunctionDescriptor, t: f64) -> Result<f64> {
    let n = count_zeros(table, descriptor, t)?;
    Ok(n as f64 - smooth_count(descriptor, t))
}

/// Two-sided zero density from the main terms of the counting asymptotic:
/// `(d_F/π)(log T + 1) + 2C_F + 2a_F/T`.
pub fn tail_density(descriptor: &FunctionDescriptor, t: f64) -> Result<f64> {
    descriptor.require_gamma_factors("tail_density")?;
    if !(t > 0.0) {
        return Err(LiLabError::domain(
            "tail_density",
            format!("T must be > 0, got {t}"),
        ));
    }
    Ok(tail_density_unchecked(descriptor, t))
}

pub(crate) fn tail_density_unchecked(descriptor: &FunctionDescriptor, t: f64) -> f64 {
    let d = descriptor.derived();
    d.degree / PI * (t.ln() + 1.0) + 2.0 * d.c_linear + 2.0 * d.a_log / t
}

/// One zero `σ + iγ` of a synthetic set, not necessarily on the critical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffLineZero {
    pub sigma: f64,
    pub gamma: f64,
    pub multiplicity: u32,
}

/// A finite zero set closed under `ρ ↔ 1 - conj ρ`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OffLineZeroSet {
    zeros: Vec<OffLineZero>,
}

const PAIRING_TOL: f64 = 1e-12;

impl OffLineZeroSet {
    pub fn new(zeros: Vec<OffLineZero>) -> Result<Self> {
        for z in &zeros {
            if !(0.0..=1.0).contains(&z.sigma) || !z.gamma.is_finite() || z.multiplicity == 0 {
                return Err(LiLabError::InvalidTable(format!(
                    "off-line zero ({}, {}) with multiplicity {} is out of range",
                    z.sigma, z.gamma, z.multiplicity
                )));
            }
            if z.gamma == 0.0 && (z.sigma == 0.0 || z.sigma == 1.0) {
                return Err(LiLabError::InvalidTable(format!(
                    "s = {} is not a non-trivial zero",
                    z.sigma
                )));
            }
            if (z.sigma - 0.5).abs() <= PAIRING_TOL {
                continue;
            }
            let partner_mult: u32 = zeros
                .iter()
                .filter(|w| {
                    (w.sigma - (1.0 - z.sigma)).abs() <= PAIRING_TOL
                        && (w.gamma - z.gamma).abs() <= PAIRING_TOL * z.gamma.abs().max(1.0)
                })
                .map(|w| w.multiplicity)
                .sum();
            let own_mult: u32 = zeros
                .iter()
                .filter(|w| {
                    (w.sigma - z.sigma).abs() <= PAIRING_TOL
                        && (w.gamma - z.gamma).abs() <= PAIRING_TOL * z.gamma.abs().max(1.0)
                })
                .map(|w| w.multiplicity)
                .sum();
            if partner_mult != own_mult {
                return Err(LiLabError::SymmetryViolation {
                    sigma: z.sigma,
                    gamma: z.gamma,
                });
            }
        }
        Ok(Self { zeros })
    }

    /// All zeros on the critical line at the given ordinates.
    pub fn critical_line(gammas: &[f64]) -> Self {
        Self {
            zeros: gammas
                .iter()
                .map(|&gamma| OffLineZero {
                    sigma: 0.5,
                    gamma,
                    multiplicity: 1,
                })
                .collect(),
        }
    }

    pub fn zeros(&self) -> &[OffLineZero] {
        &self.zeros
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIRST_ZEROS: [f64; 10] = [
        14.134725141734693,
        21.022039638771555,
        25.010857580145688,
        30.424876125859513,
        32.935061587739189,
        37.586178158825671,
        40.918719012147495,
        43.327073280914999,
        48.005150881167159,
        49.773832477672302,
    ];

    fn zeta_table() -> ZeroTable {
        ZeroTable::from_ordinates(&FIRST_ZEROS, 50.0).unwrap()
    }

    #[test]
    fn counting_reference_points() {
        let z = FunctionDescriptor::zeta();
        let t = zeta_table();
        assert_eq!(count_zeros(&t, &z, 0.0).unwrap(), 0);
        assert_eq!(count_zeros(&t, &z, 20.0).unwrap(), 2);
        assert_eq!(count_zeros(&t, &z, FIRST_ZEROS[0]).unwrap(), 2);
        assert_eq!(
            count_zeros(&t, &z, FIRST_ZEROS[0] * (1.0 - 1e-15)).unwrap(),
            0
        );
        assert_eq!(count_zeros(&t, &z, 50.0).unwrap(), 20);
        assert!(matches!(
            count_zeros(&t, &z, 50.5),
            Err(LiLabError::OutOfCoverage { .. })
        ));
    }

    #[test]
    fn siegel_zeros_counted_at_zero_height() {
        let f = FunctionDescriptor::new("s", 0, 1.0, vec![], true, 3).unwrap();
        let t = zeta_table();
        assert_eq!(count_zeros(&t, &f, 0.0).unwrap(), 3);
        assert_eq!(count_zeros(&t, &f, 22.0).unwrap(), 7);
    }

    #[test]
    fn signed_table_counts_each_entry_once() {
        let f = FunctionDescriptor::new("c", 0, 1.0, vec![], false, 0).unwrap();
        let ords = vec![
            Ordinate::new(-8.0, 1),
            Ordinate::new(-3.0, 2),
            Ordinate::new(5.0, 1),
        ];
        let t = ZeroTable::new(ords, 10.0, false).unwrap();
        assert_eq!(count_zeros(&t, &f, 4.0).unwrap(), 2);
        assert_eq!(count_zeros(&t, &f, 5.0).unwrap(), 3);
        assert_eq!(count_zeros(&t, &f, 9.0).unwrap(), 4);
        let sym = zeta_table();
        assert!(count_zeros(&sym, &f, 1.0).is_err());
    }

    #[test]
    fn table_validation() {
        assert!(ZeroTable::from_ordinates(&[3.0, 2.0], 5.0).is_err());
        assert!(ZeroTable::from_ordinates(&[3.0, 3.0], 5.0).is_err());
        assert!(ZeroTable::from_ordinates(&[3.0, 6.0], 5.0).is_err());
        assert!(ZeroTable::from_ordinates(&[-1.0], 5.0).is_err());
        assert!(ZeroTable::new(vec![Ordinate::new(1.0, 0)], 5.0, true).is_err());
    }

    #[test]
    fn smooth_term_vanishes_apart_from_pole_at_zero_height() {
        let z = FunctionDescriptor::zeta();
        assert!((smooth_count(&z, 0.0) - 2.0).abs() < 1e-15);
        let f = FunctionDescriptor::automorphic(
            "gl2",
            11.0,
            &[Complex64::new(0.5, 0.0), Complex64::new(1.5, 0.0)],
            true,
        )
        .unwrap();
        assert!(smooth_count(&f, 0.0).abs() < 1e-15);
    }

    #[test]
    fn s_function_at_zero_height() {
        // N(0) = 0 while the smooth term equals 2m, so S(0) = -2m.
        let z = FunctionDescriptor::zeta();
        let s0 = s_function(&zeta_table(), &z, 0.0).unwrap();
        assert!((s0 + 2.0).abs() < 1e-15);
    }

    #[test]
    fn smooth_count_matches_riemann_von_mangoldt() {
        // Classical N(T) main term (T/2π) log(T/2πe) + 7/8 counts one half-plane.
        let z = FunctionDescriptor::zeta();
        let t = 1000.0;
        let classical = t / (2.0 * PI) * (t / (2.0 * PI * std::f64::consts::E)).ln() + 7.0 / 8.0;
        assert!((smooth_count(&z, t) / 2.0 - classical).abs() < 0.01);
    }

    #[test]
    fn s_function_small_below_thirty() {
        let z = FunctionDescriptor::zeta();
        let t = zeta_table();
        let v = smooth_count(&z, 30.0);
        // two-sided count, so twice the classical |S(T)| < 1
        assert!((v - count_zeros(&t, &z, 30.0).unwrap() as f64).abs() < 2.0);
        let s = s_function(&t, &z, 14.2).unwrap();
        assert!(s > -2.0 && s < 2.0, "S(14.2) = {s}");
    }

    #[test]
    fn s_function_continuous_between_ordinates() {
        let z = FunctionDescriptor::zeta();
        let t = zeta_table();
        let a = s_function(&t, &z, 25.0).unwrap();
        let b = s_function(&t, &z, 25.00001).unwrap();
        assert!((a - b).abs() < 1e-4);
    }

    #[test]
    fn s_function_jumps_by_pair_count() {
        let z = FunctionDescriptor::zeta();
        let t = zeta_table();
        for &g in &FIRST_ZEROS {
            let left = s_function(&t, &z, g * (1.0 - 1e-14)).unwrap();
            let right = s_function(&t, &z, g).unwrap();
            assert!((right - left - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tail_density_for_zeta() {
        let z = FunctionDescriptor::zeta();
        let t = 1e4;
        let want = (t / (2.0 * PI)).ln() / PI;
        assert!((tail_density(&z, t).unwrap() - want).abs() < 1e-13);
        // finite difference of the smooth count
        let h = 1.0;
        let fd = (smooth_count(&z, t + h) - smooth_count(&z, t - h)) / (2.0 * h);
        assert!((fd / want - 1.0).abs() < 0.01);
        assert!(tail_density(&z, 10.0).unwrap() > 0.0);
        let trivial = FunctionDescriptor::new("t", 0, 1.0, vec![], true, 0).unwrap();
        assert!(matches!(
            tail_density(&trivial, 10.0),
            Err(LiLabError::UnsupportedDegreeZero(_))
        ));
    }

    #[test]
    fn off_line_set_requires_partners() {
        let pair = vec![
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
        ];
        assert!(OffLineZeroSet::new(pair.clone()).is_ok());
        assert!(matches!(
            OffLineZeroSet::new(pair[..1].to_vec()),
            Err(LiLabError::SymmetryViolation { .. })
        ));
        let mut unequal = pair;
        unequal[0].multiplicity = 2;
        assert!(OffLineZeroSet::new(unequal).is_err());
        // 1 - 0.3 is not bit-identical to 0.7
        let fuzzy = vec![
            OffLineZero {
                sigma: 0.3,
                gamma: 5.0,
                multiplicity: 1,
            },
            OffLineZero {
                sigma: 0.7,
                gamma: 5.0,
                multiplicity: 1,
            },
        ];
        assert!(OffLineZeroSet::new(fuzzy).is_ok());
    }
}
