//! Exact bound states of `-½ψ'' - ψ/|x| = Eψ` on the whole line.
//!
//! State `n` has energy `-2/(n+1)²` and wavefunction
//! `sign(x)^n W_{(n+1)/2, 1/2}(4|x|/(n+1))`. Wavefunctions are returned
//! unnormalized unless a [`BoundState`] is used.

use std::fmt;

use rayon::prelude::*;

use crate::error::{ensure_finite, Error, Result};
use crate::quad::{integrate_adaptive, Estimate, Tolerance};
use crate::specfun::{whittaker_w, WhittakerParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuantumNumber(pub u32);

impl QuantumNumber {
    pub fn get(self) -> u32 {
        self.0
    }

    pub fn parity(self) -> Parity {
        if self.0.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Whittaker index `κ = (n+1)/2`.
    pub fn kappa(self) -> f64 {
        (self.0 as f64 + 1.0) / 2.0
    }
}

impl From<u32> for QuantumNumber {
    fn from(n: u32) -> Self {
        Self(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A normalized exact bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub n: QuantumNumber,
    /// Hartree.
    pub energy: f64,
    pub parity: Parity,
    /// Multiplies [`wavefunction`] to give unit norm over the whole line.
    pub norm: f64,
}

impl BoundState {
    pub fn wavefunction(&self, x: f64) -> Result<f64> {
        Ok(self.norm * wavefunction(self.n, x)?)
    }

    /// Normalization constant of the already-normalized wavefunction; 1 up to
    /// quadrature error.
    pub fn renormalize(&self) -> Result<f64> {
        let est = norm_squared(self.n, |x| self.wavefunction(x))?;
        Ok(1.0 / est.value.sqrt())
    }
}

pub fn exact_energy(n: QuantumNumber) -> f64 {
    let m = n.0 as f64 + 1.0;
    -2.0 / (m * m)
}

/// Unnormalized `ψ_n(x)`; at `x = 0` the finite limit `1/Γ(1-κ)` (zero for odd `n`).
pub fn wavefunction(n: QuantumNumber, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    let z = 4.0 * x.abs() / (n.0 as f64 + 1.0);
    let w = whittaker_w(WhittakerParams::new(n.kappa(), z))?;
    Ok(if x < 0.0 && n.parity() == Parity::Odd {
        -w
    } else {
        w
    })
}

/// `∫_{-∞}^{∞} f(x)² dx` for a function of definite parity, integrated as
/// twice the half-line integral and truncated where `f²` drops below
/// `1e-16` of its peak.
fn norm_squared<F>(n: QuantumNumber, f: F) -> Result<Estimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let scale = (n.0 as f64 + 1.0).powi(2);
    let peak = (0..=200)
        .map(|i| f(2.0 * scale * i as f64 / 200.0).map(|v| v * v))
        .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))?;
    let mut x_max = scale;
    while f(x_max)?.powi(2) >= 1e-16 * peak {
        x_max *= 1.2;
    }
    // Panels of width ~(n+1) keep each node inside a few segments.
    let panels = ((x_max / (n.0 as f64 + 1.0)).ceil() as usize).clamp(4, 400);
    let breaks: Vec<f64> = (0..=panels)
        .map(|i| x_max * i as f64 / panels as f64)
        .collect();
    // Failures inside the integrand surface as NaN and are reported below.
    let est = integrate_adaptive(
        |x| f(x).map(|v| v * v).unwrap_or(f64::NAN),
        &breaks,
        Tolerance::relative(1e-12),
    )?;
    if !est.value.is_finite() || est.value <= 0.0 {
        return Err(Error::NoConvergence {
            what: "normalization quadrature",
            achieved: f64::INFINITY,
            requested: 1e-12,
        });
    }
    Ok(Estimate {
        value: 2.0 * est.value,
        abs_error: 2.0 * est.abs_error,
    })
}

pub fn normalize(n: QuantumNumber) -> Result<BoundState> {
    let est = norm_squared(n, |x| wavefunction(n, x))?;
    Ok(BoundState {
        n,
        energy: exact_energy(n),
        parity: n.parity(),
        norm: 1.0 / est.value.sqrt(),
    })
}

/// Symmetric sampling window for [`node_count`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeWindow {
    pub half_width: f64,
    pub samples: usize,
}

impl NodeWindow {
    /// `[-4(n+1)², 4(n+1)²]` with `1000(n+1)` samples.
    pub fn default_for(n: QuantumNumber) -> Self {
        let m = n.0 as f64 + 1.0;
        Self {
            half_width: 4.0 * m * m,
            samples: 1000 * (n.0 as usize + 1),
        }
    }
}

/// Number of strict sign changes of `ψ_n` over the window.
///
/// Samples sit at half-step offsets so none lands on `x = 0`. Only `x > 0` is
/// sampled; the negative half follows from parity and the origin contributes
/// one node for odd `n`.
pub fn node_count(n: QuantumNumber, window: NodeWindow) -> Result<usize> {
    ensure_finite("half_width", window.half_width)?;
    if window.half_width <= 0.0 {
        return Err(Error::InvalidArgument(
            "window half-width must be positive".into(),
        ));
    }
    let min_samples = 1000 * (n.0 as usize + 1);
    if window.samples < min_samples {
        return Err(Error::WindowTooSmall(format!(
            "{} samples requested, at least {min_samples} needed for n = {}",
            window.samples, n.0
        )));
    }
    let step = 2.0 * window.half_width / window.samples as f64;
    let half = window.samples / 2;
    let xs: Vec<f64> = (0..half).map(|j| (j as f64 + 0.5) * step).collect();
    let values: Vec<f64> = xs
        .par_iter()
        .map(|&x| wavefunction(n, x))
        .collect::<Result<_>>()?;

    let edge = 0.95 * window.half_width;
    let mut changes = 0;
    let mut last_sign = 0.0;
    for (x, v) in xs.iter().zip(&values) {
        if *v == 0.0 {
            continue;
        }
        let s = v.signum();
        if last_sign != 0.0 && s != last_sign {
            if *x > edge {
                return Err(Error::WindowTooSmall(format!(
                    "sign change at x = {x} lies in the outer 5% of [-{w}, {w}]",
                    w = window.half_width
                )));
            }
            changes += 1;
        }
        last_sign = s;
    }
    let origin = usize::from(n.parity() == Parity::Odd);
    Ok(2 * changes + origin)
}

/// Second derivative by Ridders' extrapolation of central differences.
fn second_derivative<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h0: f64) -> Result<f64> {
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    const LEVELS: usize = 12;
    const SAFE: f64 = 2.0;
    let f0 = f(x)?;
    let mut table = [[0.0f64; LEVELS]; LEVELS];
    let mut h = h0;
    let mut best = f64::NAN;
    let mut best_err = f64::INFINITY;
    for i in 0..LEVELS {
        if i > 0 {
            h /= CON;
        }
        table[i][0] = (f(x + h)? - 2.0 * f0 + f(x - h)?) / (h * h);
        // error terms are even powers of h: eliminate h², h⁴, ... in turn
        let mut fac = CON2;
        for j in 1..=i {
            table[i][j] = (table[i][j - 1] * fac - table[i - 1][j - 1]) / (fac - 1.0);
            fac *= CON2;
            let err = (table[i][j] - table[i][j - 1])
                .abs()
                .max((table[i][j] - table[i - 1][j - 1]).abs());
            if err <= best_err {
                best_err = err;
                best = table[i][j];
            }
        }
        if i > 0 && (table[i][i] - table[i - 1][i - 1]).abs() >= SAFE * best_err {
            break;
        }
    }
    if best.is_nan() {
        return Err(Error::NoConvergence {
            what: "finite-difference second derivative",
            achieved: best_err,
            requested: 0.0,
        });
    }
    Ok(best)
}

/// `|-½ψ'' - ψ/|x| - E_n ψ|` at `x`, for `|x| ≥ 0.05`.
pub fn ode_residual(n: QuantumNumber, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    if x.abs() < 0.05 {
        return Err(Error::InvalidArgument(format!(
            "finite differences need |x| >= 0.05 to stay clear of the cusp, got {x}"
        )));
    }
    let h0 = (0.25 * x.abs()).min(0.5);
    let psi = wavefunction(n, x)?;
    let d2 = second_derivative(|t| wavefunction(n, t), x, h0)?;
    Ok((-0.5 * d2 - psi / x.abs() - exact_energy(n) * psi).abs())
}

/// One-sided difference quotient `[ψ(h) - ψ(0)]/h` for even `n`; it diverges
/// logarithmically as `h → 0`.
pub fn cusp_indicator(n: QuantumNumber, h: f64) -> Result<f64> {
    if n.parity() == Parity::Odd {
        return Err(Error::InvalidArgument(format!(
            "odd state n = {} has no cusp at the origin",
            n.0
        )));
    }
    ensure_finite("h", h)?;
    if !(h > 0.0 && h <= 0.1) {
        return Err(Error::InvalidArgument(format!(
            "h must lie in (0, 0.1], got {h}"
        )));
    }
    Ok((wavefunction(n, h)? - wavefunction(n, 0.0)?) / h)
}

/// `(x, ψ(x))` on `points` equally spaced abscissae spanning `[x_min, x_max]`.
pub fn sample_wavefunction(
    n: QuantumNumber,
    x_min: f64,
    x_max: f64,
    points: usize,
    normalized: bool,
) -> Result<Vec<(f64, f64)>> {
    ensure_finite("x_min", x_min)?;
    ensure_finite("x_max", x_max)?;
    if points < 2 || x_min >= x_max {
        return Err(Error::InvalidArgument(format!(
            "need points >= 2 and x_min < x_max, got {points} points on [{x_min}, {x_max}]"
        )));
    }
    let norm = if normalized { normalize(n)?.norm } else { 1.0 };
    let step = (x_max - x_min) / (points - 1) as f64;
    (0..points)
        .into_par_iter()
        .map(|i| {
            // symmetric windows get exactly mirrored abscissae and an exact origin
            let mirror = points - 1 - i;
            let x = if x_min != -x_max || i < mirror {
                x_min + step * i as f64
            } else if i == mirror {
                0.0
            } else {
                -(x_min + step * mirror as f64)
            };
            Ok((x, norm * wavefunction(n, x)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn q(n: u32) -> QuantumNumber {
        QuantumNumber(n)
    }

    #[test]
    fn energies() {
        assert_eq!(exact_energy(q(0)), -2.0);
        assert_eq!(exact_energy(q(1)), -0.5);
        assert_eq!(exact_energy(q(2)), -2.0 / 9.0);
        // odd n = 2k-1 reproduces the 3D s-wave levels -1/(2k²)
        for k in 1..=10u32 {
            let e = exact_energy(q(2 * k - 1));
            assert!((e + 1.0 / (2.0 * (k * k) as f64)).abs() < 1e-16);
        }
    }

    #[test]
    fn wavefunction_values() {
        let psi0 = wavefunction(q(0), 0.0).unwrap();
        assert!((psi0 - 0.564_189_6).abs() < 1e-7);
        for &x in &[-3.0, -0.2, 0.5, 1.0, 4.0] {
            let v = wavefunction(q(1), x).unwrap();
            let c = v / (x * (-x.abs()).exp());
            assert!((c - 2.0).abs() < 1e-13, "x={x}: c={c}");
        }
        let psi2 = wavefunction(q(2), 0.0).unwrap();
        // 1/Γ(-1/2) = -1/(2√π)
        assert!((psi2 + 0.5 / PI.sqrt()).abs() < 1e-15);
        assert!((psi2 + 0.282_094_8).abs() < 1e-7);
        // small-z extrapolation of the U path approaches the same limit
        let near = wavefunction(q(2), 1e-7).unwrap();
        assert!((near - psi2).abs() < 1e-5);
        assert!(wavefunction(q(0), f64::NAN).is_err());
    }

    #[test]
    fn parity_is_exact() {
        for n in 0..=10 {
            for i in 0..100 {
                let x = 0.01 + (20.0 - 0.01) * i as f64 / 99.0;
                let plus = wavefunction(q(n), x).unwrap();
                let minus = wavefunction(q(n), -x).unwrap();
                let expected = if n % 2 == 0 { plus } else { -plus };
                assert_eq!(minus.to_bits(), expected.to_bits(), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn normalization_constants() {
        // ∫ (2x e^{-|x|})² dx = 2·4·2!/2³ = 2
        let oracle = 1.0 / 2f64.sqrt();
        let s1 = normalize(q(1)).unwrap();
        assert!((s1.norm - oracle).abs() < 1e-10, "{}", s1.norm);
        assert_eq!(s1.parity, Parity::Odd);
        assert_eq!(normalize(q(0)).unwrap().energy, -2.0);
        for n in 0..=10 {
            let s = normalize(q(n)).unwrap();
            assert!(s.norm > 0.0);
        }
    }

    #[test]
    fn normalization_is_idempotent() {
        for n in [0, 1, 2, 5] {
            let s = normalize(q(n)).unwrap();
            let again = s.renormalize().unwrap();
            assert!((again - 1.0).abs() <= 1e-10, "n={n}: {again}");
        }
    }

    #[test]
    fn normalized_state_has_unit_norm_by_independent_sum() {
        // Composite Simpson on a fine symmetric grid avoiding the cusp point.
        let s = normalize(q(0)).unwrap();
        let (l, m) = (20.0, 400_000);
        let h = l / m as f64;
        let f = |x: f64| s.wavefunction(x).unwrap().powi(2);
        let mut acc = f(0.0) + f(l);
        for i in 1..m {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        let total = 2.0 * acc * h / 3.0;
        assert!((total - 1.0).abs() < 1e-6, "{total}");
    }

    #[test]
    fn node_counts_follow_quantum_number() {
        for n in 0..=10 {
            let nodes = node_count(q(n), NodeWindow::default_for(q(n))).unwrap();
            assert_eq!(nodes, n as usize, "n={n}");
        }
    }

    #[test]
    fn node_count_detects_insufficient_window() {
        // ψ₃ has its outer nodes at |x| = 2
        let narrow = NodeWindow {
            half_width: 2.05,
            samples: 4000,
        };
        assert!(matches!(
            node_count(q(3), narrow),
            Err(Error::WindowTooSmall(_))
        ));
        let sparse = NodeWindow {
            half_width: 100.0,
            samples: 10,
        };
        assert!(matches!(
            node_count(q(3), sparse),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn ode_residual_examples() {
        assert!(ode_residual(q(1), 1.0).unwrap() <= 1e-6);
        assert!(ode_residual(q(0), 0.5).unwrap() <= 1e-6);
        assert!(ode_residual(q(3), 2.0).unwrap() <= 1e-6);
        assert!(ode_residual(q(0), 0.01).is_err());
    }

    #[test]
    fn n3_matches_hand_reduction() {
        // ψ₃ = -2 sign(x) e^{-|x|/2} |x| (|x| - 2) from W_{2,1/2}(z) = -e^{-z/2} z (2 - z), z = |x|
        for x in [0.3f64, 1.7, 2.0, 5.0, -4.0] {
            let t: f64 = x.abs();
            let hand = x.signum() * (-(-t / 2.0).exp() * t * (2.0 - t));
            assert!((wavefunction(q(3), x).unwrap() - hand).abs() < 1e-14);
        }
    }

    #[test]
    fn cusp_grows_toward_origin() {
        for n in [0, 2] {
            let coarse = cusp_indicator(q(n), 1e-2).unwrap().abs();
            let fine = cusp_indicator(q(n), 1e-3).unwrap().abs();
            let finer = cusp_indicator(q(n), 1e-4).unwrap().abs();
            assert!(fine.is_finite() && fine > coarse && finer > fine, "n={n}");
        }
        assert!(cusp_indicator(q(1), 1e-2).is_err());
        assert!(cusp_indicator(q(0), 0.5).is_err());
        assert!(cusp_indicator(q(0), 0.0).is_err());
    }

    #[test]
    fn ground_state_cusp_rises_away_from_origin() {
        // ψ₀(z) ≈ 1/√π - z ln z / Γ(-1/2): the slope is +∞ on the right of 0,
        // so the origin is a local minimum; the maximum sits near x ≈ 0.157.
        // Reference W_{1/2,1/2}(0.68) = 0.749221239908573 (mpmath).
        let at0 = wavefunction(q(0), 0.0).unwrap();
        assert!(at0 > 0.0);
        assert!(cusp_indicator(q(0), 1e-3).unwrap() > 0.0);
        let peak = wavefunction(q(0), 0.17).unwrap();
        assert!(peak > at0 && (peak - 0.749_221_239_908_573).abs() < 1e-12);
    }

    #[test]
    fn decay_rate_matches_binding_energy() {
        for n in 0..=10u32 {
            let m = n as f64 + 1.0;
            let (x1, x2) = (20.0 * m, 40.0 * m);
            let l1 = wavefunction(q(n), x1).unwrap().abs().ln();
            let l2 = wavefunction(q(n), x2).unwrap().abs().ln();
            let rate = -2.0 / m;
            // the z^κ prefactor contributes κ ln 2 / (20(n+1)) to the secant slope
            let prefactor = q(n).kappa() * (x2 / x1).ln() / (x2 - x1);
            let slope = (l2 - l1) / (x2 - x1);
            assert!(
                ((slope - prefactor) - rate).abs() <= 0.02 * rate.abs(),
                "n={n}"
            );
            if n <= 1 {
                assert!((slope - rate).abs() <= 0.02 * rate.abs(), "n={n}");
            }
            assert_eq!(rate, -(2.0 * exact_energy(q(n)).abs()).sqrt());
        }
    }

    #[test]
    fn sampling_window() {
        let s = sample_wavefunction(q(0), -10.0, 10.0, 2001, false).unwrap();
        assert_eq!(s.len(), 2001);
        assert_eq!(s[1000].0, 0.0);
        assert!((s[1000].1 - 0.564_19).abs() < 5e-5);
        assert!(sample_wavefunction(q(0), 1.0, 1.0, 10, false).is_err());
        assert!(sample_wavefunction(q(0), 0.0, 1.0, 1, false).is_err());
    }
}
