//! GUE matrices, Hermitian Brownian motion and its ordered eigenvalue process.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::stochastic::{RngStream, SampledPath, TimeGrid};

/// Dense Hermitian matrix stored as paired real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, re: vec![0.0; n * n], im: vec![0.0; n * n] }
    }

    /// Builds from the upper triangle (`j ≥ i`) of `entries`; the diagonal must be real.
    pub fn from_upper(n: usize, entries: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        let mut h = Self::zeros(n);
        for i in 0..n {
            let d = entries(i, i);
            if d.im != 0.0 {
                return invalid(format!("diagonal entry {i} has imaginary part {}", d.im));
            }
            h.set(i, i, d);
            for j in i + 1..n {
                h.set(i, j, entries(i, j));
            }
        }
        Ok(h)
    }

    fn set(&mut self, i: usize, j: usize, z: Complex64) {
        let n = self.n;
        self.re[i * n + j] = z.re;
        self.im[i * n + j] = z.im;
        self.re[j * n + i] = z.re;
        self.im[j * n + i] = -z.im;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re[i * self.n + j], self.im[i * self.n + j])
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            self.im[i * n + i] == 0.0
                && (i + 1..n).all(|j| {
                    self.re[i * n + j] == self.re[j * n + i] && self.im[i * n + j] == -self.im[j * n + i]
                })
        })
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.re[i * self.n + i]).sum()
    }

    /// `trace(H²) = Σ |H_ij|²`.
    pub fn trace_sq(&self) -> f64 {
        self.re.iter().zip(&self.im).map(|(a, b)| a * a + b * b).sum()
    }

    /// Entrywise sum; Hermitian inputs give a bit-exactly Hermitian output.
    pub fn add_assign(&mut self, other: &HermitianMatrix) {
        for (a, b) in self.re.iter_mut().zip(&other.re) {
            *a += b;
        }
        for (a, b) in self.im.iter_mut().zip(&other.im) {
            *a += b;
        }
    }

    /// Eigenvalues in decreasing order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.n;
        if n == 0 {
            return Ok(Vec::new());
        }
        if n == 1 {
            return Ok(vec![self.re[0]]);
        }
        let m = DMatrix::from_fn(n, n, |i, j| self.get(i, j));
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        if ev.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite eigenvalue for {n}×{n} matrix")));
        }
        ev.sort_by(|a, b| b.total_cmp(a));
        self.check_spectrum(&ev)?;
        Ok(ev)
    }

    // Trace and Frobenius identities as a residual check on the eigensolver.
    fn check_spectrum(&self, ev: &[f64]) -> Result<()> {
        let fro = self.trace_sq();
        let scale = fro.sqrt().max(1e-300);
        let tr_err = (ev.iter().sum::<f64>() - self.trace()).abs();
        let fro_err = (ev.iter().map(|v| v * v).sum::<f64>() - fro).abs();
        let tol = 1e-10 * (self.n as f64);
        if tr_err > tol * scale || fro_err > tol * scale * scale {
            return Err(Error::Numerical(format!(
                "eigensolver residual too large: n={}, |trace err|={tr_err:.3e}, |fro err|={fro_err:.3e}, ||H||_F={scale:.3e}",
                self.n
            )));
        }
        Ok(())
    }
}

/// `GUE_n(σ²)`: diagonal `N(0, σ²)`, off-diagonal `N(0, σ²/2) + i N(0, σ²/2)`.
pub fn sample_gue(n: usize, var: f64, rng: &mut RngStream) -> Result<HermitianMatrix> {
    if !(var > 0.0) || !var.is_finite() {
        return invalid(format!("GUE variance must be positive, got {var}"));
    }
    if n == 0 {
        return invalid("GUE dimension must be positive");
    }
    let sd = var.sqrt();
    let sd_off = (var / 2.0).sqrt();
    let mut h = HermitianMatrix::zeros(n);
    for i in 0..n {
        h.set(i, i, Complex64::new(sd * rng.normal(), 0.0));
        for j in i + 1..n {
            let re = sd_off * rng.normal();
            let im = sd_off * rng.normal();
            h.set(i, j, Complex64::new(re, im));
        }
    }
    Ok(h)
}

/// Sum of the `ℓ` largest eigenvalues.
pub fn top_eigensum(h: &HermitianMatrix, ell: usize) -> Result<f64> {
    if ell > h.n() {
        return invalid(format!("ℓ = {ell} exceeds dimension {}", h.n()));
    }
    Ok(h.eigenvalues()?.iter().take(ell).sum())
}

/// Ordered eigenvalues `λ(1, t) ≥ … ≥ λ(n, t)` on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenProcess {
    grid: TimeGrid,
    // n rows of length steps + 1
    rows: Vec<Vec<f64>>,
}

impl EigenProcess {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// `λ(k, t_i)`, `k = 0` the largest.
    pub fn value(&self, k: usize, i: usize) -> f64 {
        self.rows[k][i]
    }

    pub fn curves(&self) -> Vec<SampledPath> {
        self.rows
            .iter()
            .map(|r| SampledPath::from_parts_unchecked(self.grid, r.clone()))
            .collect()
    }
}

/// Eigenvalues of Hermitian Brownian motion (marginal `GUE_n(t)` at time `t`).
///
/// The matrix at `grid.a()` is `GUE_n(a)` (zero when `a = 0`); independent
/// `GUE_n(h)` increments are added per step and every gridpoint is diagonalised.
pub fn hbm_eigen_process(n: usize, grid: TimeGrid, rng: &mut RngStream) -> Result<EigenProcess> {
    if grid.a() < 0.0 {
        return invalid("Hermitian Brownian motion runs on nonnegative times");
    }
    if n == 0 {
        return invalid("dimension must be positive");
    }
    let mut h = if grid.a() > 0.0 { sample_gue(n, grid.a(), rng)? } else { HermitianMatrix::zeros(n) };
    let mut rows = vec![Vec::with_capacity(grid.len()); n];
    let push = |h: &HermitianMatrix, rows: &mut Vec<Vec<f64>>| -> Result<()> {
        for (row, v) in rows.iter_mut().zip(h.eigenvalues()?) {
            row.push(v);
        }
        Ok(())
    };
    push(&h, &mut rows)?;
    for _ in 0..grid.steps() {
        let dh = sample_gue(n, grid.h(), rng)?;
        h.add_assign(&dh);
        debug_assert!(h.is_hermitian());
        push(&h, &mut rows)?;
    }
    Ok(EigenProcess { grid, rows })
}
