//! Complex log-gamma and polygamma functions on the right half-plane.
//!
//! Both use the same scheme: shift the argument upward with the functional
//! recurrence until the asymptotic (Stirling / Bernoulli) series is accurate,
//! then sum that series. All arguments must satisfy `Re z > 0`; on that
//! half-plane the shifted principal logarithms never cross a branch cut, so
//! the result is the continuous branch of `log Γ`.

use num_complex::Complex64;

use crate::error::{LiLabError, Result};

/// `B_{2j}` for `j = 1..=20`.
const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

/// Stirling's series is used once `|z|` reaches this radius.
const LOG_GAMMA_RADIUS: f64 = 20.0;

/// Base threshold on `Re z` before the polygamma asymptotic series is used.
/// The series for `ψ^{(k)}` needs roughly `k` more units of headroom, so the
/// effective threshold is `POLYGAMMA_SHIFT + k`.
const POLYGAMMA_SHIFT: f64 = 12.0;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

fn check_domain(function: &'static str, z: Complex64) -> Result<()> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(LiLabError::domain(function, "argument is NaN"));
    }
    if z.re <= 0.0 {
        return Err(LiLabError::domain(
            function,
            format!("requires Re z > 0, got {z}"),
        ));
    }
    Ok(())
}

/// Principal branch of `log Γ(z)` for `Re z > 0`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    check_domain("log_gamma", z)?;
    Ok(log_gamma_unchecked(z))
}

pub(crate) fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < LOG_GAMMA_RADIUS {
        shift += w.ln();
        w += 1.0;
    }

    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_j = 2.0 * (j + 1) as f64;
        let term = power * (b / (two_j * (two_j - 1.0)));
        series += term;
        if term.norm() < 1e-18 * series.norm() {
            break;
        }
        power *= inv2;
    }

    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series - shift
}

/// `Σ_{k≥0} (w/(z+k))^l` for integer `l ≥ 2` and `Re z > 0`, i.e.
/// `w^l ζ(l, z)`. Equals `(-w)^l ψ^{(l-1)}(z) / (l-1)!` without forming the
/// factorials, so it stays finite for large `l`.
pub(crate) fn scaled_hurwitz(l: u32, w: Complex64, z: Complex64) -> Complex64 {
    debug_assert!(l >= 2);
    let terms = l as usize + 15;
    let mut sum = crate::summation::ComplexNeumaierSum::new();
    for k in 0..terms {
        sum.add((w / (z + k as f64)).powi(l as i32));
    }
    // Euler–Maclaurin remainder at a = z + N
    let a = z + terms as f64;
    let lf = f64::from(l);
    let inv = a.inv();
    let mut bracket = a / (lf - 1.0) + 0.5;
    let mut poch = lf;
    let mut fact = 2.0;
    let mut power = inv;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = power * (b * poch / fact);
        bracket += term;
        if term.norm() < 1e-18 * bracket.norm() {
            break;
        }
        let two_j = 2.0 * (j + 1) as f64;
        poch *= (lf + two_j - 1.0) * (lf + two_j);
        fact *= (two_j + 1.0) * (two_j + 2.0);
        power *= inv * inv;
    }
    sum.add((w * inv).powi(l as i32) * bracket);
    sum.value()
}

/// `ψ(z)` for `Re z > 0`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    polygamma(0, z)
}

/// `ψ^{(k)}(z)` for `Re z > 0`; `k = 0` is the digamma function.
pub fn polygamma(k: u32, z: Complex64) -> Result<Complex64> {
    check_domain("polygamma", z)?;
    Ok(polygamma_unchecked(k, z))
}

pub(crate) fn polygamma_unchecked(k: u32, z: Complex64) -> Complex64 {
    let threshold = POLYGAMMA_SHIFT + k as f64;
    let kf = k as f64;
    let k_factorial = factorial(k);

    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < threshold {
        // ψ^{(k)}(w) = ψ^{(k)}(w+1) - (-1)^k k! / w^{k+1}
        shift += w.powi(-(k as i32) - 1);
        w += 1.0;
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let shift = shift * (sign * k_factorial);

    let inv = w.inv();
    let inv2 = inv * inv;
    let asymptotic = if k == 0 {
        let mut acc = w.ln() - 0.5 * inv;
        let mut power = inv2;
        for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
            let term = power * (b / (2.0 * (j + 1) as f64));
            acc -= term;
            if term.norm() < 1e-18 * acc.norm() {
                break;
            }
            power *= inv2;
        }
        acc
    } else {
        // (-1)^{k+1} (k-1)! w^{-k} [1 + k/(2w) + Σ_j B_{2j} C(2j+k-1, 2j) w^{-2j}]
        let mut bracket = Complex64::new(1.0, 0.0) + inv * (0.5 * kf);
        let mut ratio = kf * (kf + 1.0) / 2.0;
        let mut power = inv2;
        for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
            let term = power * (b * ratio);
            bracket += term;
            if term.norm() < 1e-18 * bracket.norm() {
                break;
            }
            let two_j = 2.0 * (j + 1) as f64;
            ratio *= (two_j + kf) * (two_j + kf + 1.0) / ((two_j + 1.0) * (two_j + 2.0));
            power *= inv2;
        }
        let lead_sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        bracket * inv.powi(k as i32) * (lead_sign * factorial(k - 1))
    };

    asymptotic - shift
}

fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}
