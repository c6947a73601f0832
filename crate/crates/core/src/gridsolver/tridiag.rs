//! Symmetric tridiagonal eigenproblem: Sturm-sequence bisection for
//! eigenvalues, inverse iteration for eigenvectors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn pivot_floor(&self) -> f64 {
        let emax = self.off.iter().fold(0.0f64, |m, e| m.max(e * e));
        (f64::MIN_POSITIVE * emax.max(1.0)).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `lambda` (negative LDLᵀ pivots).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let floor = self.pivot_floor();
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        for i in 0.. {
            if q.abs() < floor {
                q = -floor;
            }
            if q < 0.0 {
                count += 1;
            }
            if i + 1 == self.diag.len() {
                break;
            }
            let e = self.off[i];
            q = (self.diag[i + 1] - lambda) - e * e / q;
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection inside `[lo, hi]`.
    pub fn eigenvalue(&self, k: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "eigenvalue index {k} out of range for dimension {}",
                self.len()
            )));
        }
        if self.sturm_count(lo) > k || self.sturm_count(hi) <= k {
            return Err(Error::NotBracketed { lo, hi });
        }
        let floor = self.pivot_floor();
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + floor
                || mid <= lo
                || mid >= hi
            {
                return Ok(mid);
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::NoConvergence {
            what: "Sturm bisection",
            achieved: hi - lo,
            requested: 2.0 * f64::EPSILON * lo.abs().max(hi.abs()),
        })
    }

    /// The `count` smallest eigenvalues in increasing order. `lower` must be a
    /// lower bound of the spectrum; `None` uses Gershgorin.
    pub fn lowest_eigenvalues(&self, count: usize, lower: Option<f64>) -> Result<Vec<f64>> {
        let (g_lo, g_hi) = self.gershgorin();
        let pad = f64::EPSILON * g_lo.abs().max(g_hi.abs()) + self.pivot_floor();
        let lo = lower.map_or(g_lo, |l| l.max(g_lo)) - pad;
        let hi = g_hi + pad;
        let mut out = Vec::with_capacity(count);
        let mut start = lo;
        for k in 0..count {
            let value = self.eigenvalue(k, start, hi)?;
            // eigenvalues are found in order; later ones lie above this bracket
            start = lo.max(value - 4.0 * pad);
            out.push(value);
        }
        Ok(out)
    }

    /// Eigenvector for the eigenvalue `lambda` by inverse iteration with a
    /// partially pivoted tridiagonal LU. Returned with unit Euclidean norm.
    pub fn inverse_iteration(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.len();
        if n == 1 {
            return Ok(vec![1.0]);
        }
        let lu = ShiftedLu::factor(self, lambda);
        // deterministic start vector with no parity symmetry
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * (0.618_033_988_749_895 * i as f64 + 0.3).sin())
            .collect();
        normalize(&mut v);
        let mut previous = v.clone();
        for _ in 0..8 {
            lu.solve(&mut v);
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NoConvergence {
                    what: "inverse iteration",
                    achieved: f64::INFINITY,
                    requested: 1e-12,
                });
            }
            normalize(&mut v);
            let overlap: f64 = v.iter().zip(&previous).map(|(a, b)| a * b).sum();
            if 1.0 - overlap.abs() < 1e-14 {
                return Ok(v);
            }
            previous.copy_from_slice(&v);
        }
        let overlap: f64 = v.iter().zip(&previous).map(|(a, b)| a * b).sum();
        Err(Error::NoConvergence {
            what: "inverse iteration",
            achieved: 1.0 - overlap.abs(),
            requested: 1e-14,
        })
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// LU factors of `T - σI` with row interchanges (LAPACK `gttrf` layout).
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal, shift: f64) -> Self {
        let n = t.len();
        let scale = t
            .diag
            .iter()
            .map(|d| (d - shift).abs())
            .chain(t.off.iter().map(|e| e.abs()))
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let tiny = f64::EPSILON * scale;
        let mut dl = t.off.clone();
        let mut du = t.off.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for x in d.iter_mut() {
            if x.abs() < tiny {
                *x = tiny.copysign(*x);
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
