//! Globally adaptive Gauss–Kronrod (7/15 and 10/21) quadrature with forced
//! breakpoints.
//!
//! The interval list is seeded from the caller's breakpoints; the panel with
//! the largest error estimate is bisected until the summed estimate meets the
//! tolerance or the subdivision budget is exhausted.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::summation::NeumaierSum;

// Gauss-Kronrod 10/21 nodes and weights (QUADPACK qk21).
const XGK21: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG10: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
    pub converged: bool,
}

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_subdivisions: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod panel; returns `(integral, error estimate)`.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK21[10];
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK21[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK21[j] * (f1 + f2);
        abs_sum += WGK21[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG10[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK21[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK21[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

/// Integrate `f` over `[points[0], points[last]]`, never splitting across the
/// supplied interior breakpoints. `points` must be ascending with at least two
/// entries; duplicate points are skipped.
pub fn integrate<F: Fn(f64) -> f64>(f: F, points: &[f64], config: QuadConfig) -> QuadResult {
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        debug_assert!(a <= b, "breakpoints must ascend");
        if b <= a {
            continue;
        }
        let (value, error) = gk21(&f, a, b);
        evaluations += 21;
        heap.push(Panel { a, b, value, error });
    }

    let totals = |heap: &BinaryHeap<Panel>| {
        let mut v = NeumaierSum::new();
        let mut e = NeumaierSum::new();
        for p in heap.iter() {
            v.add(p.value);
            e.add(p.error);
        }
        (v.value(), e.value())
    };

    let mut subdivisions = 0;
    let (mut value, mut error) = totals(&heap);
    let mut converged = error <= config.abs_tol.max(config.rel_tol * value.abs());
    while !converged && subdivisions < config.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel is at floating-point resolution; keep it and stop refining.
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        evaluations += 42;
        subdivisions += 1;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        if subdivisions % 64 == 0 {
            (value, error) = totals(&heap);
        }
        converged = error <= config.abs_tol.max(config.rel_tol * value.abs());
    }
    let (value, error) = totals(&heap);
    QuadResult {
        value,
        abs_error: error,
        evaluations,
        subdivisions,
        converged: error <= config.abs_tol.max(config.rel_tol * value.abs()),
    }
}

/// Integrate `f` over `[a, ∞)` through the substitution `x = a / t`, which
/// maps the half-line onto `(0, 1]`. Requires `a > 0`; `f` must decay faster
/// than `1/x`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, config: QuadConfig) -> QuadResult {
    integrate_to_infinity_with_points(f, a, &[], config)
}

/// As [`integrate_to_infinity`], with extra breakpoints given in `x`.
/// Points outside `(a, ∞)` are ignored.
pub fn integrate_to_infinity_with_points<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    x_points: &[f64],
    config: QuadConfig,
) -> QuadResult {
    assert!(a > 0.0, "lower limit must be positive");
    let mut points = vec![0.0, 1.0];
    points.extend(
        x_points
            .iter()
            .filter(|&&x| x > a && x.is_finite())
            .map(|&x| a / x),
    );
    points.sort_by(f64::total_cmp);
    points.dedup();
    let mapped = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let x = a / t;
        f(x) * a / (t * t)
    };
    integrate(mapped, &points, config)
}
