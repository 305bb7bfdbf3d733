//! Chebyshev polynomials of both kinds and the mapped oscillator `G_n`.
//!
//! On `[-1, 1]` the polynomials are evaluated through their trigonometric
//! forms, which do not accumulate the error the three-term recurrence does
//! for large degrees. Outside that interval the recurrence is used; it is
//! exact in structure but loses relative accuracy as `|x|` grows.

/// `T_n(x)`.
pub fn cheb_t(n: u32, x: f64) -> f64 {
    if x.abs() <= 1.0 {
        (n as f64 * x.acos()).cos()
    } else {
        cheb_t_recurrence(n, x)
    }
}

/// `U_n(x)`.
pub fn cheb_u(n: u32, x: f64) -> f64 {
    if x == 1.0 {
        return (n + 1) as f64;
    }
    if x == -1.0 {
        let v = (n + 1) as f64;
        return if n % 2 == 0 { v } else { -v };
    }
    if x.abs() < 1.0 {
        let theta = x.acos();
        ((n + 1) as f64 * theta).sin() / theta.sin()
    } else {
        cheb_u_recurrence(n, x)
    }
}

/// `T_n(x)` via `T_{k+1} = 2x T_k - T_{k-1}`.
pub fn cheb_t_recurrence(n: u32, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 1..n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `U_n(x)` via `U_{k+1} = 2x U_k - U_{k-1}`.
pub fn cheb_u_recurrence(n: u32, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0 * x,
        _ => {
            let (mut prev, mut cur) = (1.0, 2.0 * x);
            for _ in 1..n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// The Cayley-type map `u(x) = (4x² - 1) / (4x² + 1)` sending `[0, ∞)` onto `[-1, 1)`.
#[inline]
pub fn cayley(x: f64) -> f64 {
    let s = 4.0 * x * x;
    (s - 1.0) / (s + 1.0)
}

/// `G_n(x) = 1 - T_n(u(x))`, the per-zero contribution to `Re λ(n)` of a
/// zero at height `x` on the critical line.
///
/// Evaluated as `2 sin²(n·atan(1/(2x)))`: with `tan(θ/2) = 1/(2x)` one has
/// `cos θ = u(x)`, so `1 - cos(nθ) = 2 sin²(nθ/2)`. This keeps full relative
/// accuracy for `x ≫ n`, where the direct form cancels catastrophically.
pub fn g_oscillator(n: u32, x: f64) -> f64 {
    let half_angle = if x == 0.0 {
        std::f64::consts::FRAC_PI_2
    } else {
        (0.5 / x).atan()
    };
    let s = (n as f64 * half_angle).sin();
    2.0 * s * s
}

/// `-G'_n(x) = 16 n x / (4x² + 1)² · U_{n-1}(u(x))`, i.e. `d/dx T_n(u(x))`.
pub fn g_oscillator_weight(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let d = 4.0 * x * x + 1.0;
    16.0 * n as f64 * x / (d * d) * cheb_u(n - 1, cayley(x))
}

/// Points in `(lo, hi)` where `n·atan(1/(2x))` is a multiple of `π/4`,
/// ascending. Between consecutive points `G_n` has no interior turning point
/// and at most one inflection, which makes them good quadrature breakpoints.
pub fn oscillation_nodes(n: u32, lo: f64, hi: f64) -> Vec<f64> {
    let mut nodes: Vec<f64> = (1..2 * u64::from(n))
        .map(|k| {
            let angle = k as f64 * std::f64::consts::PI / (4.0 * f64::from(n));
            0.5 / angle.tan()
        })
        .filter(|&x| x > lo && x < hi)
        .collect();
    nodes.reverse();
    nodes
}
