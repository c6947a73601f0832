//! Quadrature rules: Gauss–Legendre with order doubling and an adaptive
//! Gauss–Kronrod (7/15) integrator with breakpoints.
//!
//! Both routines report an error estimate next to the value so callers can
//! propagate the achieved accuracy.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A computed value together with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
}

impl Estimate {
    pub fn relative_error(&self) -> f64 {
        if self.value == 0.0 {
            self.abs_error
        } else {
            self.abs_error / self.value.abs()
        }
    }
}

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on P_n from the Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
            let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = x;
            weights[i] = w;
            nodes[n - 1 - i] = -x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// Gauss–Legendre integration on [a, b], doubling the order from `start_order`
/// until two successive results agree to `rel_tol`.
pub fn gauss_legendre_doubling<F: Fn(f64) -> f64>(
    a: f64,
    b: f64,
    f: F,
    start_order: usize,
    rel_tol: f64,
    max_order: usize,
) -> Result<Estimate> {
    let mut order = start_order.max(2);
    let mut previous = GaussLegendre::new(order).integrate(a, b, &f);
    let mut diff = f64::INFINITY;
    while order * 2 <= max_order {
        order *= 2;
        let current = GaussLegendre::new(order).integrate(a, b, &f);
        diff = (current - previous).abs();
        if diff <= rel_tol * current.abs() || diff <= f64::MIN_POSITIVE {
            return Ok(Estimate {
                value: current,
                abs_error: diff,
            });
        }
        previous = current;
    }
    Err(Error::NoConvergence {
        what: "Gauss-Legendre order doubling",
        achieved: diff / previous.abs().max(f64::MIN_POSITIVE),
        requested: rel_tol,
    })
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Tolerances for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_segments: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 0.0,
            rel: 1e-12,
            max_segments: 4000,
        }
    }
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self {
            rel,
            ..Self::default()
        }
    }
}

/// Adaptive Gauss–Kronrod integration over the consecutive intervals defined
/// by `breakpoints` (which must be sorted and contain at least two entries).
/// The segment with the largest error estimate is bisected until the total
/// estimate meets `max(tol.abs, tol.rel * |I|)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<Estimate> {
    if breakpoints.len() < 2 {
        return Err(Error::InvalidArgument(
            "adaptive quadrature needs at least two breakpoints".into(),
        ));
    }
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    // Segments that can no longer be split in floating point.
    let mut frozen: Vec<Segment> = Vec::new();
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(a.is_finite() && b.is_finite()) || b < a {
            return Err(Error::InvalidArgument(format!(
                "bad integration interval [{a}, {b}]"
            )));
        }
        if a == b {
            continue;
        }
        let (value, error) = gauss_kronrod_15(&f, a, b);
        total += value;
        total_err += error;
        heap.push(Segment { a, b, value, error });
    }
    loop {
        let target = tol.abs.max(tol.rel * total.abs());
        if total_err <= target {
            break;
        }
        if heap.len() >= tol.max_segments {
            return Err(Error::NoConvergence {
                what: "adaptive Gauss-Kronrod quadrature",
                achieved: total_err / total.abs().max(f64::MIN_POSITIVE),
                requested: tol.rel,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::NoConvergence {
                what: "adaptive Gauss-Kronrod quadrature (roundoff limited)",
                achieved: total_err / total.abs().max(f64::MIN_POSITIVE),
                requested: tol.rel,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        let (v1, e1) = gauss_kronrod_15(&f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed the drift of the running updates.
    let value: f64 = heap.iter().chain(&frozen).map(|s| s.value).sum();
    let diff = (value - total).abs();
    Ok(Estimate {
        value,
        abs_error: total_err.max(0.0) + diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(5);
        // degree 9 is the highest exact degree for 5 nodes
        let v = rule.integrate(-1.0, 2.0, |x| x.powi(9) - 3.0 * x.powi(4) + 1.0);
        let exact = (2f64.powi(10) - 1.0) / 10.0 - 3.0 * (32.0 + 1.0) / 5.0 + 3.0;
        assert!((v - exact).abs() < 1e-12 * exact.abs().max(1.0));
        let w: f64 = GaussLegendre::new(64).weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn doubling_converges_on_smooth_integrand() {
        let est = gauss_legendre_doubling(0.0, PI, f64::sin, 4, 1e-14, 1024).unwrap();
        assert!((est.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let est = integrate_adaptive(
            |x: f64| x.powf(-0.5),
            &[0.0, 1.0],
            Tolerance::relative(1e-10),
        )
        .unwrap();
        assert!((est.value - 2.0).abs() < 1e-9, "{est:?}");
        // ∫_0^1 ln x dx = -1
        let est =
            integrate_adaptive(|x: f64| x.ln(), &[0.0, 1.0], Tolerance::relative(1e-12)).unwrap();
        assert!((est.value + 1.0).abs() < 1e-11, "{est:?}");
    }

    #[test]
    fn adaptive_reports_failure_when_budget_exhausted() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-15,
            max_segments: 3,
        };
        let err = integrate_adaptive(|x: f64| (1.0 / x).sin(), &[1e-6, 1.0], tol).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }
}
