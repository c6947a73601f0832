//! Semiclassical action `∫ √(2(E - V(x))) dx` between turning points and the
//! quantization condition `S(E) = (n + m)π`, with Maslov offset `m = 1` for the
//! 1D Coulomb potential.
//!
//! For `V = -1/|x|` the half-line integral is mapped by `x = x_t sin²θ`,
//! `x_t = 1/|E|`, which absorbs both the `1/√x` origin behaviour and the
//! square-root zero at the turning point, leaving a smooth integrand on
//! `[0, π/2]`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ensure_finite, Error, Result};
use crate::quad::{gauss_legendre_doubling, integrate_adaptive, Tolerance};
use crate::regularized::PotentialSpec;
use crate::roots::brent;
use crate::spectrum::QuantumNumber;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionResult {
    pub energy: f64,
    pub action: f64,
    /// Outer classical turning points `(left, right)`.
    pub turning_points: (f64, f64),
    /// Inner turning point on `x > 0` when a repulsive core makes the
    /// allowed region two disjoint intervals.
    pub inner_turning_point: Option<f64>,
    pub abs_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbConfig {
    /// `m` in `S(E) = (n + m)π`; 1 for the Coulomb singularity.
    pub maslov_offset: f64,
    pub quadrature_tolerance: f64,
    /// Initial energy bracket; derived from the Balmer scale when `None`.
    pub root_bracket: Option<(f64, f64)>,
}

impl Default for WkbConfig {
    fn default() -> Self {
        Self {
            maslov_offset: 1.0,
            quadrature_tolerance: 1e-13,
            root_bracket: None,
        }
    }
}

fn check_energy(energy: f64) -> Result<()> {
    ensure_finite("energy", energy)?;
    if energy >= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "bound-state action needs E < 0, got {energy}"
        )));
    }
    Ok(())
}

/// Action of `V = -1/|x|` at energy `E < 0` over `[-1/|E|, 1/|E|]`.
pub fn action(energy: f64) -> Result<ActionResult> {
    action_with_tolerance(energy, WkbConfig::default().quadrature_tolerance)
}

pub fn action_with_tolerance(energy: f64, rel_tol: f64) -> Result<ActionResult> {
    check_energy(energy)?;
    let binding = energy.abs();
    let x_t = 1.0 / binding;
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let x = x_t * s * s;
        (2.0 * (1.0 / x - binding)).max(0.0).sqrt() * 2.0 * x_t * s * c
    };
    let half = gauss_legendre_doubling(0.0, FRAC_PI_2, integrand, 8, rel_tol, 1 << 12)?;
    Ok(ActionResult {
        energy,
        action: 2.0 * half.value,
        turning_points: (-x_t, x_t),
        inner_turning_point: None,
        abs_error: 2.0 * half.abs_error,
    })
}

/// Root of `action(E) = (n + maslov_offset)π` by Brent's method on a bracket
/// that is widened geometrically until it straddles the root.
pub fn wkb_energy(n: QuantumNumber, cfg: &WkbConfig) -> Result<f64> {
    ensure_finite("maslov_offset", cfg.maslov_offset)?;
    let target = (n.get() as f64 + cfg.maslov_offset) * PI;
    if target <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "n + maslov_offset must be positive, got {}",
            target / PI
        )));
    }
    let tol = cfg.quadrature_tolerance;
    let residual = |e: f64| action_with_tolerance(e, tol).map(|r| r.action - target);

    let scale = -2.0 / (n.get() as f64 + 1.0).powi(2);
    let (mut lo, mut hi) = cfg.root_bracket.unwrap_or((4.0 * scale, scale / 4.0));
    if !(lo < hi && hi < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "energy bracket must satisfy lo < hi < 0, got [{lo}, {hi}]"
        )));
    }
    // S grows as |E| shrinks: need S(lo) < target < S(hi).
    let mut f_lo = residual(lo)?;
    let mut f_hi = residual(hi)?;
    for _ in 0..60 {
        if f_lo < 0.0 {
            break;
        }
        lo *= 4.0;
        f_lo = residual(lo)?;
    }
    for _ in 0..60 {
        if f_hi > 0.0 {
            break;
        }
        hi /= 4.0;
        f_hi = residual(hi)?;
    }
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::NotBracketed { lo, hi });
    }
    let mid = 0.5 * (lo + hi);
    let f_mid = residual(mid)?;
    if !(f_lo <= f_mid && f_mid <= f_hi) {
        return Err(Error::NonMonotone(format!(
            "action not increasing in E on [{lo}, {hi}]"
        )));
    }
    let mut failure = None;
    let root = brent(
        |e| match residual(e) {
            Ok(v) => v,
            Err(err) => {
                failure.get_or_insert(err);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-14,
        0.0,
    );
    if let Some(err) = failure {
        return Err(err);
    }
    root
}

fn outer_turning_point(v: &PotentialSpec, energy: f64, start: f64) -> Result<f64> {
    let gap = |x: f64| energy - v.evaluate(x).unwrap_or(f64::NAN);
    let mut hi = if start > 0.0 { 2.0 * start } else { 1.0 };
    for _ in 0..200 {
        if gap(hi) < 0.0 {
            break;
        }
        hi *= 2.0;
    }
    let outer = gap(hi);
    if outer.is_nan() || outer >= 0.0 {
        return Err(Error::NoTurningPoints(format!(
            "{v} has no outer turning point at E = {energy}"
        )));
    }
    let lo = if start > 0.0 {
        start
    } else {
        hi.min(1.0) * 1e-300
    };
    brent(gap, lo, hi, 1e-15, 0.0)
}

/// Action of an arbitrary family at energy `E` over its classically allowed
/// region (both sides of the origin for symmetric potentials).
pub fn action_generic(energy: f64, v: &PotentialSpec) -> Result<ActionResult> {
    v.validate()?;
    ensure_finite("energy", energy)?;
    let (x_min, v_min) = v.positive_axis_minimum();
    if energy >= v.asymptote() {
        return Err(Error::NoTurningPoints(format!(
            "E = {energy} is not below the asymptote {} of {v}",
            v.asymptote()
        )));
    }
    if energy <= v_min {
        return Err(Error::NoTurningPoints(format!(
            "E = {energy} is at or below the floor {v_min} of {v}"
        )));
    }
    let x_out = outer_turning_point(v, energy, x_min)?;
    let at_origin = match v {
        PotentialSpec::PureCoulomb | PotentialSpec::HalfLine => f64::NEG_INFINITY,
        _ => v.evaluate(0.0)?,
    };
    let x_in = if energy > at_origin {
        0.0
    } else {
        let gap = |x: f64| energy - v.evaluate(x).unwrap_or(f64::NAN);
        brent(gap, 0.0, x_min, 1e-15, 0.0)?
    };
    let width = x_out - x_in;
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let x = x_in + width * s * s;
        let kinetic = energy - v.evaluate(x).unwrap_or(f64::NAN);
        (2.0 * kinetic.max(0.0)).sqrt() * 2.0 * width * s * c
    };
    let est = integrate_adaptive(integrand, &[0.0, FRAC_PI_2], Tolerance::relative(1e-11))?;
    let sides = if v.is_symmetric() { 2.0 } else { 1.0 };
    let turning_points = if v.is_symmetric() {
        (-x_out, x_out)
    } else {
        (x_in, x_out)
    };
    Ok(ActionResult {
        energy,
        action: sides * est.value,
        turning_points,
        inner_turning_point: (x_in > 0.0).then_some(x_in),
        abs_error: sides * est.abs_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::exact_energy;

    /// Midpoint rule with 10⁶ panels on the substituted integrand 2√(2|E|) x_t cos²θ
    /// written out from the original √(2(1/x - |E|)) without simplification.
    fn brute_force_action(energy: f64) -> f64 {
        let b = energy.abs();
        let x_t = 1.0 / b;
        let m = 1_000_000;
        let h = FRAC_PI_2 / m as f64;
        let mut acc = 0.0;
        for i in 0..m {
            let th = (i as f64 + 0.5) * h;
            let x = x_t * th.sin().powi(2);
            acc += (2.0 * (1.0 / x - b)).sqrt() * 2.0 * x_t * th.sin() * th.cos();
        }
        2.0 * acc * h
    }

    #[test]
    fn closed_form_verified_by_brute_force() {
        for &e in &[-2.0, -1.0, -0.5, -2.0 / 9.0, -0.125, -0.01, -8.0] {
            let bf = brute_force_action(e);
            let closed = PI * (2.0 / e.abs()).sqrt();
            assert!(
                (bf - closed).abs() < 1e-9 * closed,
                "E={e}: {bf} vs {closed}"
            );
            let r = action(e).unwrap();
            assert!((r.action - closed).abs() <= 1e-10 * closed, "E={e}");
        }
    }

    #[test]
    fn action_examples() {
        let r = action(-2.0).unwrap();
        assert!((r.action - PI).abs() < 1e-12);
        assert_eq!(r.turning_points, (-0.5, 0.5));
        assert!((action(-0.5).unwrap().action - 2.0 * PI).abs() < 1e-12);
        assert!((action(-8.0).unwrap().action - PI / 2.0).abs() < 1e-12);
        assert!(action(0.0).is_err());
        assert!(action(1.0).is_err());
        assert!(action(f64::NAN).is_err());
    }

    #[test]
    fn action_decreases_with_binding() {
        let mut last = f64::INFINITY;
        for i in 0..50 {
            let b = 10f64.powf(-3.0 + 5.0 * i as f64 / 49.0);
            let s = action(-b).unwrap().action;
            assert!(s < last);
            assert!(s > 0.0);
            last = s;
        }
    }

    #[test]
    fn quantization_reproduces_exact_spectrum() {
        let cfg = WkbConfig::default();
        for n in 0..=20 {
            let q = QuantumNumber(n);
            let e = wkb_energy(q, &cfg).unwrap();
            let exact = exact_energy(q);
            assert!(
                (e - exact).abs() <= 1e-10 * exact.abs(),
                "n={n}: {e} vs {exact}"
            );
        }
        assert!((wkb_energy(QuantumNumber(4), &cfg).unwrap() + 0.08).abs() < 1e-12);
    }

    #[test]
    fn maslov_offset_matters() {
        let cfg = WkbConfig {
            maslov_offset: 0.5,
            ..WkbConfig::default()
        };
        // π√(2/|E|) = π/2  ⇒  E = -8
        let e = wkb_energy(QuantumNumber(0), &cfg).unwrap();
        assert!((e + 8.0).abs() < 1e-10 * 8.0, "{e}");
        let bad = WkbConfig {
            maslov_offset: -1.0,
            ..WkbConfig::default()
        };
        assert!(wkb_energy(QuantumNumber(0), &bad).is_err());
    }

    #[test]
    fn bracket_is_widened_when_needed() {
        let cfg = WkbConfig {
            root_bracket: Some((-0.02, -0.01)),
            ..WkbConfig::default()
        };
        let e = wkb_energy(QuantumNumber(0), &cfg).unwrap();
        assert!((e + 2.0).abs() < 1e-10);
        let bad = WkbConfig {
            root_bracket: Some((-1.0, 1.0)),
            ..WkbConfig::default()
        };
        assert!(wkb_energy(QuantumNumber(0), &bad).is_err());
    }

    #[test]
    fn generic_matches_coulomb_family() {
        let direct = action(-2.0).unwrap().action;
        let generic = action_generic(-2.0, &PotentialSpec::PureCoulomb).unwrap();
        assert!((generic.action - direct).abs() < 1e-8 * direct);
        assert!((generic.turning_points.1 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn generic_soft_core_limit() {
        let soft = action_generic(-0.5, &PotentialSpec::SoftCore { a: 1e-6 }).unwrap();
        let pure = action(-0.5).unwrap().action;
        assert!((soft.action - pure).abs() <= 1e-3 * pure);
        // turning point of -1/(x+a) = E is 1/|E| - a
        assert!((soft.turning_points.1 - (2.0 - 1e-6)).abs() < 1e-12);
    }

    #[test]
    fn generic_half_line_is_half_of_symmetric() {
        // independent check: midpoint rule of √(2(1/x - 1/2)) on [0, 2] after x = 2 sin²θ
        let r = action_generic(-0.5, &PotentialSpec::HalfLine).unwrap();
        let bf = brute_force_action(-0.5) / 2.0;
        assert!((r.action - PI).abs() < 1e-8 * PI);
        assert!((bf - PI).abs() < 1e-8);
        assert_eq!(r.turning_points.0, 0.0);
    }

    #[test]
    fn generic_repulsive_core_has_inner_turning_point() {
        let v = PotentialSpec::RepulsiveCore { a: 0.1, b: 0.2 };
        let r = action_generic(-0.5, &v).unwrap();
        let x_in = r.inner_turning_point.unwrap();
        assert!((v.evaluate(x_in).unwrap() + 0.5).abs() < 1e-10);
        assert!((v.evaluate(r.turning_points.1).unwrap() + 0.5).abs() < 1e-10);
        assert!(r.action > 0.0 && r.action < action(-0.5).unwrap().action);
    }

    #[test]
    fn generic_harmonic_action() {
        // ∮ p dx = 2π E/ω for the oscillator; one traverse gives π E/ω
        let r = action_generic(-1.0, &PotentialSpec::Harmonic { omega: 1.0 });
        assert!(r.is_err());
        let cfg = PotentialSpec::Harmonic { omega: 2.0 };
        let r = action_generic(3.0, &cfg).unwrap();
        assert!((r.action - PI * 3.0 / 2.0).abs() < 1e-8);
    }

    #[test]
    fn generic_errors() {
        assert!(matches!(
            action_generic(-20.0, &PotentialSpec::SoftCore { a: 0.1 }),
            Err(Error::NoTurningPoints(_))
        ));
        assert!(matches!(
            action_generic(-0.1, &PotentialSpec::Box),
            Err(Error::NoTurningPoints(_))
        ));
        assert!(matches!(
            action_generic(0.5, &PotentialSpec::PureCoulomb),
            Err(Error::NoTurningPoints(_))
        ));
    }
}
