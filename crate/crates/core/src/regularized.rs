//! Regularized Coulomb potentials and the parameter studies run on them.
//!
//! Families: pure `-1/|x|`, soft-core `-1/(|x|+a)`, repulsive-core
//! `-(|x|-b)/(|x|+a)²`, and the half-line `-1/x` with a wall at `x ≤ 0`.
//! A harmonic well and a flat box are included for solver calibration.

use std::fmt;

use log::warn;
use rayon::prelude::*;

use crate::error::{ensure_finite, Error, Result};
use crate::gridsolver::{self, Domain, Grid};
use crate::spectrum::Parity;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    PureCoulomb,
    SoftCore {
        a: f64,
    },
    RepulsiveCore {
        a: f64,
        b: f64,
    },
    HalfLine,
    /// `ω² x² / 2`
    Harmonic {
        omega: f64,
    },
    /// `V = 0`; confinement comes from the grid walls.
    Box,
}

impl PotentialSpec {
    pub fn soft_core(a: f64) -> Result<Self> {
        let v = Self::SoftCore { a };
        v.validate()?;
        Ok(v)
    }

    pub fn repulsive_core(a: f64, b: f64) -> Result<Self> {
        let v = Self::RepulsiveCore { a, b };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::SoftCore { a } => positive("a", a),
            Self::RepulsiveCore { a, b } => {
                positive("a", a)?;
                ensure_finite("b", b)?;
                if b < 0.0 {
                    return Err(Error::InvalidArgument(format!("b must be >= 0, got {b}")));
                }
                Ok(())
            }
            Self::Harmonic { omega } => positive("omega", omega),
            Self::PureCoulomb | Self::HalfLine | Self::Box => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::PureCoulomb => "pure-coulomb",
            Self::SoftCore { .. } => "soft-core",
            Self::RepulsiveCore { .. } => "repulsive-core",
            Self::HalfLine => "half-line",
            Self::Harmonic { .. } => "harmonic",
            Self::Box => "box",
        }
    }

    /// `V(x)`. The half-line family returns `f64::INFINITY` for `x ≤ 0`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        ensure_finite("x", x)?;
        let r = x.abs();
        Ok(match *self {
            Self::PureCoulomb => {
                if x == 0.0 {
                    return Err(Error::Singular("pure Coulomb potential at x = 0".into()));
                }
                -1.0 / r
            }
            Self::SoftCore { a } => -1.0 / (r + a),
            Self::RepulsiveCore { a, b } => -(r - b) / ((r + a) * (r + a)),
            Self::HalfLine => {
                if x <= 0.0 {
                    f64::INFINITY
                } else {
                    -1.0 / x
                }
            }
            Self::Harmonic { omega } => 0.5 * omega * omega * x * x,
            Self::Box => 0.0,
        })
    }

    pub fn is_symmetric(&self) -> bool {
        !matches!(self, Self::HalfLine)
    }

    /// Length scale of the regularized core, if any.
    pub fn core_scale(&self) -> Option<f64> {
        match *self {
            Self::SoftCore { a } | Self::RepulsiveCore { a, .. } => Some(a),
            _ => None,
        }
    }

    /// Location and value of the minimum of `V` on `x ≥ 0` (`-∞` at `0⁺` for
    /// the unregularized families).
    pub(crate) fn positive_axis_minimum(&self) -> (f64, f64) {
        match *self {
            Self::PureCoulomb | Self::HalfLine => (0.0, f64::NEG_INFINITY),
            Self::SoftCore { a } => (0.0, -1.0 / a),
            // V' ∝ x - a - 2b
            Self::RepulsiveCore { a, b } => (a + 2.0 * b, -1.0 / (4.0 * (a + b))),
            Self::Harmonic { .. } | Self::Box => (0.0, 0.0),
        }
    }

    /// `lim_{|x|→∞} V(x)`.
    pub(crate) fn asymptote(&self) -> f64 {
        match self {
            Self::Harmonic { .. } => f64::INFINITY,
            _ => 0.0,
        }
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::SoftCore { a } => write!(f, "soft-core(a={a})"),
            Self::RepulsiveCore { a, b } => write!(f, "repulsive-core(a={a}, b={b})"),
            Self::Harmonic { omega } => write!(f, "harmonic(omega={omega})"),
            _ => f.write_str(self.name()),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    ensure_finite(name, v)?;
    if v <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "{name} must be > 0, got {v}"
        )));
    }
    Ok(())
}

/// Grid request for the parameter studies: a full-line staggered mesh of
/// half-width `half_width`, with `points` fixed or sized from the core scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub half_width: f64,
    pub points: Option<usize>,
}

/// Points per core radius demanded of every scan grid (`h ≤ a/5`).
pub const POINTS_PER_CORE: f64 = 5.0;
pub const MIN_HALF_WIDTH: f64 = 30.0;

impl ScanGrid {
    pub fn auto(half_width: f64) -> Self {
        Self {
            half_width,
            points: None,
        }
    }

    /// Smallest even point count with spacing `≤ a/5` on `[-L, L]`.
    pub fn required_points(half_width: f64, a: f64) -> usize {
        let n = (2.0 * half_width * POINTS_PER_CORE / a).ceil() as usize;
        n + n % 2
    }

    /// The grid for core radius `a`, refusing one that does not resolve it.
    pub fn resolve(&self, a: f64) -> Result<Grid> {
        positive("half_width", self.half_width)?;
        if self.half_width < MIN_HALF_WIDTH {
            warn!(
                "box half-width {} is below the recommended {MIN_HALF_WIDTH}",
                self.half_width
            );
        }
        let required = Self::required_points(self.half_width, a);
        let points = match self.points {
            None => required,
            Some(n) => {
                let spacing = 2.0 * self.half_width / n as f64;
                let limit = a / POINTS_PER_CORE;
                if spacing > limit * (1.0 + 1e-12) {
                    return Err(Error::GridTooCoarse {
                        spacing,
                        required: limit,
                        suggested_points: required,
                    });
                }
                n
            }
        };
        let grid = Grid::full_line(self.half_width, points, true);
        grid.validate()?;
        Ok(grid)
    }
}

/// Logarithmic estimate `-2 ln²(1/a)` of the soft-core ground energy.
pub fn loudon_estimate(a: f64) -> f64 {
    let l = (1.0 / a).ln();
    -2.0 * l * l
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftCoreRow {
    pub a: f64,
    pub points: usize,
    pub ground: f64,
    /// Lowest odd level, insensitive to the core.
    pub odd_companion: f64,
    pub loudon: f64,
}

impl SoftCoreRow {
    pub fn loudon_ratio(&self) -> f64 {
        self.ground / self.loudon
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoftCoreScan {
    /// Sorted by decreasing `a`.
    pub rows: Vec<SoftCoreRow>,
    /// Ground energy strictly decreases as `a` decreases.
    pub monotone: bool,
}

/// Ground and first odd energies of the soft-core potential for each `a`.
pub fn soft_core_ground_scan(a_values: &[f64], grid: ScanGrid) -> Result<SoftCoreScan> {
    if a_values.is_empty() {
        return Err(Error::InvalidArgument("no core radii given".into()));
    }
    for &a in a_values {
        positive("a", a)?;
        if a > 0.5 {
            return Err(Error::InvalidArgument(format!(
                "soft-core scan covers a in (0, 0.5], got {a}"
            )));
        }
    }
    let mut sorted = a_values.to_vec();
    sorted.sort_by(|x, y| y.total_cmp(x));
    // Resolve every grid first so a coarse request is refused before any work.
    let grids: Vec<Grid> = sorted
        .iter()
        .map(|&a| grid.resolve(a))
        .collect::<Result<_>>()?;
    let rows: Vec<SoftCoreRow> = sorted
        .par_iter()
        .zip(grids.par_iter())
        .map(|(&a, g)| {
            let spectrum = gridsolver::solve(&PotentialSpec::SoftCore { a }, g, 2)?;
            Ok(SoftCoreRow {
                a,
                points: g.points,
                ground: spectrum.levels[0].energy,
                odd_companion: spectrum.levels[1].energy,
                loudon: loudon_estimate(a),
            })
        })
        .collect::<Result<_>>()?;
    let monotone = rows.windows(2).all(|w| w[1].ground < w[0].ground);
    Ok(SoftCoreScan { rows, monotone })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interleaving {
    pub levels: Vec<(f64, Option<Parity>)>,
    /// Parities strictly alternate with increasing energy.
    pub interleaved: bool,
    /// `1 < b/a < ln(1/a)`.
    pub in_regime: bool,
}

/// Lowest `k_max` levels of the repulsive-core potential with measured parities.
pub fn care_interleaving(a: f64, b: f64, grid: ScanGrid, k_max: usize) -> Result<Interleaving> {
    let v = PotentialSpec::repulsive_core(a, b)?;
    let ratio = b / a;
    let in_regime = 1.0 < ratio && ratio < (1.0 / a).ln();
    if !in_regime {
        warn!(
            "b/a = {ratio} lies outside 1 < b/a < ln(1/a) = {}; computing anyway",
            (1.0 / a).ln()
        );
    }
    let g = grid.resolve(a)?;
    let spectrum = gridsolver::solve(&v, &g, k_max)?;
    let levels: Vec<(f64, Option<Parity>)> = spectrum
        .levels
        .iter()
        .map(|l| (l.energy, l.parity))
        .collect();
    let interleaved =
        levels.iter().all(|(_, p)| p.is_some()) && levels.windows(2).all(|w| w[0].1 != w[1].1);
    Ok(Interleaving {
        levels,
        interleaved,
        in_regime,
    })
}

/// Lowest `k_max` energies of `-1/x` on the half-line with `ψ(0) = 0`.
pub fn half_line_spectrum(grid: &Grid, k_max: usize) -> Result<Vec<f64>> {
    if grid.domain != Domain::HalfLine {
        return Err(Error::InvalidArgument(
            "half-line spectrum needs a half-line grid".into(),
        ));
    }
    let spectrum = gridsolver::solve(&PotentialSpec::HalfLine, grid, k_max)?;
    Ok(spectrum.levels.iter().map(|l| l.energy).collect())
}
