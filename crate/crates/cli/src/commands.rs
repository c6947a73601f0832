use clap::ValueEnum;
use log::warn;

use coulomb1d::gridsolver::{self, Grid};
use coulomb1d::regularized::{
    care_interleaving, half_line_spectrum, soft_core_ground_scan, ScanGrid,
};
use coulomb1d::spectrum::{
    exact_energy, node_count, sample_wavefunction, NodeWindow, QuantumNumber,
};
use coulomb1d::wkb::{action_with_tolerance, wkb_energy, WkbConfig};
use coulomb1d::{Error, PotentialSpec, Result};

use crate::output::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    SoftCore,
    /// Repulsive core `-(|x|-b)/(|x|+a)²`.
    Care,
    HalfLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Coulomb,
    SoftCore,
    #[value(alias = "care")]
    RepulsiveCore,
    HalfLine,
    Harmonic,
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mesh {
    /// Points at cell centres; the origin is never a grid point.
    Staggered,
    Plain,
}

fn required(name: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{name} is required for this family")))
}

pub fn spectrum(n_max: u32, tolerance: f64) -> Result<Table> {
    let cfg = WkbConfig {
        quadrature_tolerance: tolerance,
        ..WkbConfig::default()
    };
    let mut t = Table::new("spectrum", &["n", "exact", "wkb", "parity", "nodes"]);
    for n in 0..=n_max {
        let q = QuantumNumber(n);
        let nodes = node_count(q, NodeWindow::default_for(q))?;
        t.push(vec![
            n.into(),
            exact_energy(q).into(),
            wkb_energy(q, &cfg)?.into(),
            q.parity().as_str().into(),
            nodes.into(),
        ]);
    }
    t.meta("command", "spectrum")
        .meta("n_max", n_max)
        .meta("maslov", cfg.maslov_offset);
    Ok(t)
}

pub fn wavefunction(
    n: u32,
    x_min: f64,
    x_max: f64,
    points: usize,
    normalized: bool,
) -> Result<Table> {
    let samples = sample_wavefunction(QuantumNumber(n), x_min, x_max, points, normalized)?;
    let mut t = Table::new("samples", &["x", "psi"]);
    for (x, psi) in samples {
        t.push(vec![x.into(), psi.into()]);
    }
    t.meta("command", "wavefunction")
        .meta("n", n)
        .meta("x_min", x_min)
        .meta("x_max", x_max)
        .meta("points", points)
        .meta("normalized", normalized);
    Ok(t)
}

pub fn wkb(energy: Option<f64>, n: Option<u32>, maslov: f64, tolerance: f64) -> Result<Table> {
    let mut t = Table::new(
        "action",
        &["energy", "action", "action_over_pi", "x_left", "x_right"],
    );
    t.meta("command", "wkb").meta("maslov", maslov);
    let e = match (energy, n) {
        (Some(e), None) => {
            t.meta("energy", e);
            e
        }
        (None, Some(n)) => {
            let cfg = WkbConfig {
                maslov_offset: maslov,
                quadrature_tolerance: tolerance,
                root_bracket: None,
            };
            t.meta("n", n);
            wkb_energy(QuantumNumber(n), &cfg)?
        }
        _ => {
            return Err(Error::InvalidArgument(
                "give exactly one of --energy and --n".into(),
            ))
        }
    };
    let r = action_with_tolerance(e, tolerance)?;
    t.push(vec![
        r.energy.into(),
        r.action.into(),
        (r.action / std::f64::consts::PI).into(),
        r.turning_points.0.into(),
        r.turning_points.1.into(),
    ]);
    Ok(t)
}

pub fn scan(
    family: Family,
    a: &[f64],
    b: Option<f64>,
    k_max: Option<usize>,
    half_width: Option<f64>,
    points: Option<usize>,
) -> Result<Table> {
    match family {
        Family::SoftCore => {
            if k_max.is_some() || b.is_some() {
                warn!("soft-core scan ignores --k-max and --b");
            }
            let grid = ScanGrid {
                half_width: half_width.unwrap_or(30.0),
                points,
            };
            let scan = soft_core_ground_scan(a, grid)?;
            let mut t = Table::new(
                "scan",
                &["a", "points", "ground", "odd", "estimate", "ratio"],
            );
            for r in &scan.rows {
                t.push(vec![
                    r.a.into(),
                    r.points.into(),
                    r.ground.into(),
                    r.odd_companion.into(),
                    r.loudon.into(),
                    r.loudon_ratio().into(),
                ]);
            }
            t.meta("command", "scan")
                .meta("family", "soft-core")
                .meta("a", a.to_vec())
                .meta("half_width", grid.half_width)
                .meta("points", points)
                .meta("mesh", "staggered")
                .verdict("monotone", scan.monotone);
            Ok(t)
        }
        Family::Care => {
            let &[a] = a else {
                return Err(Error::InvalidArgument(
                    "care scan takes exactly one --a".into(),
                ));
            };
            let b = required("b", b)?;
            let k_max = k_max.unwrap_or(6);
            let grid = ScanGrid {
                half_width: half_width.unwrap_or(60.0),
                points,
            };
            let resolved = grid.resolve(a)?.points;
            let report = care_interleaving(a, b, grid, k_max)?;
            let mut t = Table::new("scan", &["k", "energy", "parity"]);
            for (k, (e, p)) in report.levels.iter().enumerate() {
                t.push(vec![k.into(), (*e).into(), p.map(|p| p.as_str()).into()]);
            }
            t.meta("command", "scan")
                .meta("family", "care")
                .meta("a", a)
                .meta("b", b)
                .meta("k_max", k_max)
                .meta("half_width", grid.half_width)
                .meta("points", resolved)
                .meta("mesh", "staggered")
                .verdict("interleaved", report.interleaved)
                .verdict("in_regime", report.in_regime);
            Ok(t)
        }
        Family::HalfLine => {
            if !a.is_empty() || b.is_some() {
                warn!("half-line scan ignores --a and --b");
            }
            let k_max = k_max.unwrap_or(3);
            let length = half_width.unwrap_or(60.0);
            let points = points.unwrap_or(12000);
            let grid = Grid::half_line(length, points, true);
            let energies = half_line_spectrum(&grid, k_max)?;
            let mut t = Table::new("scan", &["k", "energy", "exact"]);
            for (k, e) in energies.iter().enumerate() {
                // odd states n = 2k + 1 of the full line
                let exact = exact_energy(QuantumNumber(2 * k as u32 + 1));
                t.push(vec![k.into(), (*e).into(), exact.into()]);
            }
            t.meta("command", "scan")
                .meta("family", "half-line")
                .meta("k_max", k_max)
                .meta("half_width", length)
                .meta("points", points)
                .meta("mesh", "staggered");
            Ok(t)
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn solve(
    kind: PotentialKind,
    a: Option<f64>,
    b: Option<f64>,
    omega: f64,
    half_width: f64,
    points: usize,
    k_max: usize,
    mesh: Mesh,
) -> Result<Table> {
    let potential = match kind {
        PotentialKind::Coulomb => PotentialSpec::PureCoulomb,
        PotentialKind::SoftCore => PotentialSpec::soft_core(required("a", a)?)?,
        PotentialKind::RepulsiveCore => {
            PotentialSpec::repulsive_core(required("a", a)?, required("b", b)?)?
        }
        PotentialKind::HalfLine => PotentialSpec::HalfLine,
        PotentialKind::Harmonic => PotentialSpec::Harmonic { omega },
        PotentialKind::Box => PotentialSpec::Box,
    };
    potential.validate()?;
    let staggered = mesh == Mesh::Staggered;
    let grid = if kind == PotentialKind::HalfLine {
        Grid::half_line(half_width, points, staggered)
    } else {
        Grid::full_line(half_width, points, staggered)
    };
    if let Some(core) = potential.core_scale() {
        if grid.spacing() > core / 5.0 {
            warn!(
                "spacing {} does not resolve the core radius {core}",
                grid.spacing()
            );
        }
    }
    let result = gridsolver::solve(&potential, &grid, k_max)?;
    let mut t = Table::new(
        "spectrum",
        &["k", "energy", "parity", "parity_residual", "nodes"],
    );
    for l in &result.levels {
        t.push(vec![
            l.index.into(),
            l.energy.into(),
            l.parity.map(|p| p.as_str()).into(),
            l.parity_residual.map(Cell::Real).unwrap_or(Cell::Missing),
            l.nodes.into(),
        ]);
    }
    t.meta("command", "solve")
        .meta("potential", potential.to_string())
        .meta("a", a)
        .meta("b", b)
        .meta("half_width", half_width)
        .meta("points", points)
        .meta("spacing", grid.spacing())
        .meta("k_max", k_max)
        .meta("mesh", if staggered { "staggered" } else { "plain" });
    if kind == PotentialKind::Harmonic {
        t.meta("omega", omega);
    }
    Ok(t)
}
