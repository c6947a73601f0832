//! Finite-difference eigensolver for `-½ψ'' + V(x)ψ = Eψ` with Dirichlet walls.
//!
//! The 3-point Laplacian gives a symmetric tridiagonal matrix with diagonal
//! `1/h² + V(x_j)` and off-diagonal `-1/(2h²)`. On a staggered mesh the points
//! sit at half-integer multiples of `h` so `x = 0` is never sampled and the
//! walls fall on cell faces; the face condition `ψ_ghost = -ψ_edge` adds
//! `1/(2h²)` to the two edge diagonals. On a plain mesh the walls are nodes.

mod tridiag;

pub use tridiag::SymTridiagonal;

use crate::error::{ensure_finite, Error, Result};
use crate::regularized::PotentialSpec;
use crate::spectrum::Parity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `[-L, L]`
    FullLine,
    /// `[0, L]` with a wall at the origin.
    HalfLine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub domain: Domain,
    pub half_width: f64,
    pub points: usize,
    pub staggered: bool,
}

impl Grid {
    pub fn full_line(half_width: f64, points: usize, staggered: bool) -> Self {
        Self {
            domain: Domain::FullLine,
            half_width,
            points,
            staggered,
        }
    }

    pub fn half_line(length: f64, points: usize, staggered: bool) -> Self {
        Self {
            domain: Domain::HalfLine,
            half_width: length,
            points,
            staggered,
        }
    }

    pub fn spacing(&self) -> f64 {
        match self.domain {
            Domain::FullLine => 2.0 * self.half_width / self.points as f64,
            Domain::HalfLine => self.half_width / self.points as f64,
        }
    }

    fn origin(&self) -> f64 {
        match self.domain {
            Domain::FullLine => -self.half_width,
            Domain::HalfLine => 0.0,
        }
    }

    /// Number of unknowns: `N` staggered, `N - 1` on a plain mesh.
    pub fn unknowns(&self) -> usize {
        if self.staggered {
            self.points
        } else {
            self.points.saturating_sub(1)
        }
    }

    pub fn abscissae(&self) -> Vec<f64> {
        let h = self.spacing();
        let x0 = self.origin();
        let shift = if self.staggered { 0.5 } else { 1.0 };
        (0..self.unknowns())
            .map(|j| x0 + (j as f64 + shift) * h)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("half_width", self.half_width)?;
        if self.half_width <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "grid half-width must be positive, got {}",
                self.half_width
            )));
        }
        if self.unknowns() < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 unknowns, got {} points",
                self.points
            )));
        }
        if self.staggered && self.domain == Domain::FullLine && self.points % 2 == 1 {
            return Err(Error::InvalidArgument(
                "a staggered full-line grid needs an even point count to avoid x = 0".into(),
            ));
        }
        Ok(())
    }

    fn with_points(&self, points: usize) -> Self {
        Self { points, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub index: usize,
    pub energy: f64,
    /// Measured from the eigenvector; `None` for asymmetric problems or mixed vectors.
    pub parity: Option<Parity>,
    /// `min_± ‖v(-x) ∓ v(x)‖` in the discrete norm, for symmetric problems.
    pub parity_residual: Option<f64>,
    pub nodes: usize,
    /// Eigenvector at [`Grid::abscissae`], normalized to `h Σ v² = 1`, with its
    /// largest-magnitude component positive.
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub levels: Vec<Level>,
    pub grid: Grid,
    pub potential: PotentialSpec,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

const PARITY_TOLERANCE: f64 = 1e-6;
/// Components below this fraction of the peak are ignored when counting nodes.
const NODE_FLOOR: f64 = 1e-10;

fn hamiltonian(v: &PotentialSpec, g: &Grid) -> Result<(SymTridiagonal, f64)> {
    v.validate()?;
    g.validate()?;
    if matches!(v, PotentialSpec::HalfLine) && g.domain == Domain::FullLine {
        return Err(Error::InvalidArgument(
            "the half-line potential needs a half-line grid".into(),
        ));
    }
    let h = g.spacing();
    let kinetic = 1.0 / (h * h);
    let xs = g.abscissae();
    let mut diag = Vec::with_capacity(xs.len());
    let mut v_min = f64::INFINITY;
    for &x in &xs {
        let vx = v.evaluate(x)?;
        if !vx.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "potential {v} is not finite at grid point x = {x}; use a staggered grid"
            )));
        }
        v_min = v_min.min(vx);
        diag.push(kinetic + vx);
    }
    if g.staggered {
        let last = diag.len() - 1;
        diag[0] += 0.5 * kinetic;
        diag[last] += 0.5 * kinetic;
    }
    let off = vec![-0.5 * kinetic; xs.len() - 1];
    Ok((SymTridiagonal::new(diag, off)?, v_min))
}

fn count_nodes(v: &[f64]) -> usize {
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = NODE_FLOOR * peak;
    let mut last = 0.0;
    let mut nodes = 0;
    for &x in v {
        if x.abs() <= floor {
            continue;
        }
        if last != 0.0 && x.signum() != last {
            nodes += 1;
        }
        last = x.signum();
    }
    nodes
}

fn measure_parity(v: &[f64], h: f64) -> (Option<Parity>, f64) {
    let n = v.len();
    let (mut even, mut odd) = (0.0, 0.0);
    for j in 0..n {
        let m = v[n - 1 - j];
        even += (v[j] - m).powi(2);
        odd += (v[j] + m).powi(2);
    }
    let (even, odd) = ((even * h).sqrt(), (odd * h).sqrt());
    let parity = if even < PARITY_TOLERANCE {
        Some(Parity::Even)
    } else if odd < PARITY_TOLERANCE {
        Some(Parity::Odd)
    } else {
        None
    };
    (parity, even.min(odd))
}

/// The `k_max` lowest eigenpairs of the discretized Hamiltonian.
pub fn solve(v: &PotentialSpec, g: &Grid, k_max: usize) -> Result<SpectrumResult> {
    if k_max == 0 || k_max > g.points / 4 {
        return Err(Error::InvalidArgument(format!(
            "k_max must lie in [1, N/4] = [1, {}], got {k_max}",
            g.points / 4
        )));
    }
    let (t, v_min) = hamiltonian(v, g)?;
    // The kinetic block is positive semidefinite, so min V bounds the spectrum.
    let energies = t.lowest_eigenvalues(k_max, Some(v_min))?;
    let h = g.spacing();
    let symmetric = g.domain == Domain::FullLine && v.is_symmetric();
    let mut levels = Vec::with_capacity(k_max);
    for (index, &energy) in energies.iter().enumerate() {
        let mut vector = t.inverse_iteration(energy)?;
        let peak = vector
            .iter()
            .copied()
            .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        let scale = peak.signum() / h.sqrt();
        for x in vector.iter_mut() {
            *x *= scale;
        }
        let (parity, parity_residual) = if symmetric {
            let (p, r) = measure_parity(&vector, h);
            (p, Some(r))
        } else {
            (None, None)
        };
        levels.push(Level {
            index,
            energy,
            parity,
            parity_residual,
            nodes: count_nodes(&vector),
            vector,
        });
    }
    Ok(SpectrumResult {
        levels,
        grid: *g,
        potential: *v,
    })
}

/// Energies of one level under successive grid halvings.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub level: usize,
    pub points: Vec<usize>,
    pub energies: Vec<f64>,
}

impl Refinement {
    /// `(E_i - E_{i+1}) / (E_{i+1} - E_{i+2})`; about 4 for a second-order scheme.
    pub fn difference_ratios(&self) -> Vec<f64> {
        self.energies
            .windows(3)
            .map(|w| (w[0] - w[1]) / (w[1] - w[2]))
            .collect()
    }

    /// `|E_i - exact| / |E_{i+1} - exact|`.
    pub fn error_ratios(&self, exact: f64) -> Vec<f64> {
        self.energies
            .windows(2)
            .map(|w| (w[0] - exact).abs() / (w[1] - exact).abs())
            .collect()
    }

    /// Richardson extrapolation of the two finest energies assuming `O(h²)` error.
    pub fn extrapolated(&self) -> f64 {
        let n = self.energies.len();
        let (coarse, fine) = (self.energies[n - 2], self.energies[n - 1]);
        fine + (fine - coarse) / 3.0
    }
}

/// Solves on `g` and on `refinements` successive halvings of its spacing.
pub fn refine(v: &PotentialSpec, g: &Grid, level: usize, refinements: usize) -> Result<Refinement> {
    if refinements == 0 || refinements > 4 {
        return Err(Error::InvalidArgument(format!(
            "refinements must lie in [1, 4], got {refinements}"
        )));
    }
    let mut points = Vec::with_capacity(refinements + 1);
    let mut energies = Vec::with_capacity(refinements + 1);
    for i in 0..=refinements {
        let grid = g.with_points(g.points << i);
        let (t, v_min) = hamiltonian(v, &grid)?;
        if level >= grid.points / 4 {
            return Err(Error::InvalidArgument(format!(
                "level {level} exceeds N/4 for {} points",
                grid.points
            )));
        }
        let evs = t.lowest_eigenvalues(level + 1, Some(v_min))?;
        points.push(grid.points);
        energies.push(evs[level]);
    }
    Ok(Refinement {
        level,
        points,
        energies,
    })
}
