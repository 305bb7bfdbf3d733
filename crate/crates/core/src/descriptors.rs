//! Functional-equation data of an L-function and the constants derived from it.
//!
//! A descriptor holds `Q_F`, the gamma factors `Γ(λ_j s + μ_j)`, the pole
//! order `m_F` at `s = 1` and the number of real non-trivial zeros. Everything
//! downstream (zero counting, archimedean sums, asymptotic models) reads the
//! derived constants computed once in [`FunctionDescriptor::new`].

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LiLabError, Result};

/// Euler's constant, 0.577215664901532860606512090082.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;

/// Current descriptor document version.
pub const DESCRIPTOR_SCHEMA_VERSION: u32 = 1;

/// One gamma factor `Γ(λ s + μ)` of the functional equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFactor {
    lambda: f64,
    mu: Complex64,
}

impl GammaFactor {
    pub fn new(lambda: f64, mu: Complex64) -> Result<Self> {
        Self::validated(lambda, mu, 0)
    }

    fn validated(lambda: f64, mu: Complex64, index: usize) -> Result<Self> {
        let field = |name: &str| format!("gamma_factors[{index}].{name}");
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(LiLabError::descriptor(
                field("lambda"),
                format!("must be positive, got {lambda}"),
            ));
        }
        if !mu.re.is_finite() || !mu.im.is_finite() {
            return Err(LiLabError::descriptor(field("mu"), "must be finite"));
        }
        if mu.re <= -0.25 {
            return Err(LiLabError::descriptor(
                field("mu_re"),
                format!("Re mu must exceed -1/4, got {}", mu.re),
            ));
        }
        if lambda + 2.0 * mu.re <= 0.0 {
            return Err(LiLabError::descriptor(
                field("mu_re"),
                format!(
                    "Re(lambda + 2 mu) must be positive, got {}",
                    lambda + 2.0 * mu.re
                ),
            ));
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }
}

/// Validated functional-equation data plus derived constants.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDescriptor {
    name: String,
    polar_order: u32,
    q_scale: f64,
    gamma_factors: Vec<GammaFactor>,
    real_coefficients: bool,
    siegel_zero_count: u32,
    root_number: Option<Complex64>,
    derived: DerivedConstants,
}

/// Constants computed from the raw functional-equation data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// `d_F = 2 Σ λ_j`.
    pub degree: f64,
    /// `q_F = (2π)^{d_F} Q_F² Π λ_j^{2λ_j}`.
    pub conductor: f64,
    /// `log q_F`, kept separately since `q_F` overflows for large degree.
    pub log_conductor: f64,
    /// `C_F = (log q_F - d_F (log 2π + 1)) / 2π`.
    pub c_linear: f64,
    /// `a_F = Σ Im μ_j / π`.
    pub a_log: f64,
    /// `c_F = (d_F/2)(γ - 1) + ½ log(λ Q_F²)` with `λ = Π λ_j^{2λ_j}`.
    pub c_asymptotic: f64,
    /// `log Π λ_j^{2λ_j}`.
    pub log_lambda_product: f64,
}

impl FunctionDescriptor {
    pub fn new(
        name: impl Into<String>,
        polar_order: u32,
        q_scale: f64,
        gamma_factors: Vec<GammaFactor>,
        real_coefficients: bool,
        siegel_zero_count: u32,
    ) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(LiLabError::descriptor("name", "must not be empty"));
        }
        if !q_scale.is_finite() || q_scale <= 0.0 {
            return Err(LiLabError::descriptor(
                "q_scale",
                format!("Q_F must be positive, got {q_scale}"),
            ));
        }
        // Re-run per-factor validation so the index lands in the diagnostic.
        let gamma_factors = gamma_factors
            .into_iter()
            .enumerate()
            .map(|(i, g)| GammaFactor::validated(g.lambda, g.mu, i))
            .collect::<Result<Vec<_>>>()?;
        let derived = DerivedConstants::compute(q_scale, &gamma_factors);
        Ok(Self {
            name,
            polar_order,
            q_scale,
            gamma_factors,
            real_coefficients,
            siegel_zero_count,
            root_number: None,
            derived,
        })
    }

    /// Attach the root number `w` of the functional equation. It is carried as
    /// metadata only.
    pub fn with_root_number(mut self, w: Complex64) -> Result<Self> {
        if (w.norm() - 1.0).abs() > 1e-9 {
            return Err(LiLabError::descriptor(
                "root_number",
                format!("|w| must equal 1, got {}", w.norm()),
            ));
        }
        self.root_number = Some(w);
        Ok(self)
    }

    /// The Riemann zeta function: `Q = π^{-1/2}`, one factor `Γ(s/2)`, simple pole.
    pub fn zeta() -> Self {
        Self::new(
            "zeta",
            1,
            PI.powf(-0.5),
            vec![GammaFactor {
                lambda: 0.5,
                mu: Complex64::new(0.0, 0.0),
            }],
            true,
            0,
        )
        .expect("zeta preset is valid")
        .with_root_number(Complex64::new(1.0, 0.0))
        .expect("unit root number")
    }

    /// `L(s, π)` for a cuspidal representation of `GL_N` with conductor
    /// `Q(π)` and archimedean parameters `k_j(π)`: `Q_F = Q(π)^{1/2} π^{-N/2}`,
    /// `λ_j = 1/2`, `μ_j = k_j/2`. `m_F = 1` only for the trivial
    /// representation of `GL_1`, which is ζ.
    pub fn automorphic(
        name: impl Into<String>,
        conductor: f64,
        k_params: &[Complex64],
        real_coefficients: bool,
    ) -> Result<Self> {
        if !conductor.is_finite() || conductor <= 0.0 {
            return Err(LiLabError::descriptor(
                "conductor",
                format!("must be positive, got {conductor}"),
            ));
        }
        let n = k_params.len();
        let q_scale = conductor.sqrt() * PI.powf(-(n as f64) / 2.0);
        let factors = k_params
            .iter()
            .map(|k| GammaFactor {
                lambda: 0.5,
                mu: k / 2.0,
            })
            .collect();
        let trivial = n == 1 && conductor == 1.0 && k_params[0] == Complex64::new(0.0, 0.0);
        Self::new(
            name,
            u32::from(trivial),
            q_scale,
            factors,
            real_coefficients,
            0,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn polar_order(&self) -> u32 {
        self.polar_order
    }

    pub fn q_scale(&self) -> f64 {
        self.q_scale
    }

    pub fn gamma_factors(&self) -> &[GammaFactor] {
        &self.gamma_factors
    }

    pub fn real_coefficients(&self) -> bool {
        self.real_coefficients
    }

    pub fn siegel_zero_count(&self) -> u32 {
        self.siegel_zero_count
    }

    pub fn root_number(&self) -> Option<Complex64> {
        self.root_number
    }

    pub fn derived(&self) -> &DerivedConstants {
        &self.derived
    }

    pub fn degree(&self) -> f64 {
        self.derived.degree
    }

    /// Whether asymptotic operations (which need `d_F > 0`) are available.
    pub fn has_gamma_factors(&self) -> bool {
        !self.gamma_factors.is_empty()
    }

    pub(crate) fn require_gamma_factors(&self, operation: &'static str) -> Result<()> {
        if self.has_gamma_factors() {
            Ok(())
        } else {
            Err(LiLabError::UnsupportedDegreeZero(operation))
        }
    }

    /// Raw fields as a versioned document.
    pub fn to_document(&self) -> DescriptorDocument {
        DescriptorDocument {
            schema_version: DESCRIPTOR_SCHEMA_VERSION,
            name: self.name.clone(),
            polar_order: self.polar_order,
            q_scale: self.q_scale,
            gamma_factors: self
                .gamma_factors
                .iter()
                .map(|g| GammaFactorDocument {
                    lambda: g.lambda,
                    mu_re: g.mu.re,
                    mu_im: g.mu.im,
                })
                .collect(),
            real_coefficients: self.real_coefficients,
            siegel_zero_count: self.siegel_zero_count,
            root_number: self.root_number.map(|w| [w.re, w.im]),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: DescriptorDocument = serde_json::from_str(text)?;
        doc.build()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("descriptor serializes")
    }
}

impl DerivedConstants {
    fn compute(q_scale: f64, factors: &[GammaFactor]) -> Self {
        let degree = 2.0 * factors.iter().map(|g| g.lambda).sum::<f64>();
        let log_lambda_product: f64 = factors.iter().map(|g| 2.0 * g.lambda * g.lambda.ln()).sum();
        let log_2pi = (2.0 * PI).ln();
        let log_conductor = degree * log_2pi + 2.0 * q_scale.ln() + log_lambda_product;
        let conductor = (2.0 * PI).powf(degree)
            * q_scale
            * q_scale
            * factors
                .iter()
                .map(|g| g.lambda.powf(2.0 * g.lambda))
                .product::<f64>();
        let c_linear = (log_conductor - degree * (log_2pi + 1.0)) / (2.0 * PI);
        let a_log = factors.iter().map(|g| g.mu.im).sum::<f64>() / PI;
        let c_asymptotic =
            0.5 * degree * (EULER_GAMMA - 1.0) + 0.5 * (log_lambda_product + 2.0 * q_scale.ln());
        Self {
            degree,
            conductor,
            log_conductor,
            c_linear,
            a_log,
            c_asymptotic,
            log_lambda_product,
        }
    }
}

/// On-disk descriptor format. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorDocument {
    pub schema_version: u32,
    pub name: String,
    pub polar_order: u32,
    pub q_scale: f64,
    pub gamma_factors: Vec<GammaFactorDocument>,
    pub real_coefficients: bool,
    pub siegel_zero_count: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_number: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaFactorDocument {
    pub lambda: f64,
    pub mu_re: f64,
    pub mu_im: f64,
}

impl DescriptorDocument {
    pub fn build(&self) -> Result<FunctionDescriptor> {
        if self.schema_version != DESCRIPTOR_SCHEMA_VERSION {
            return Err(LiLabError::descriptor(
                "schema_version",
                format!(
                    "unsupported version {}, expected {DESCRIPTOR_SCHEMA_VERSION}",
                    self.schema_version
                ),
            ));
        }
        let factors = self
            .gamma_factors
            .iter()
            .enumerate()
            .map(|(i, g)| GammaFactor::validated(g.lambda, Complex64::new(g.mu_re, g.mu_im), i))
            .collect::<Result<Vec<_>>>()?;
        let descriptor = FunctionDescriptor::new(
            self.name.clone(),
            self.polar_order,
            self.q_scale,
            factors,
            self.real_coefficients,
            self.siegel_zero_count,
        )?;
        match self.root_number {
            Some([re, im]) => descriptor.with_root_number(Complex64::new(re, im)),
            None => Ok(descriptor),
        }
    }
}
