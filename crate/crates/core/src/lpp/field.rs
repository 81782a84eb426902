use crate::error::{invalid, Result};
use crate::stochastic::{RngStream, SampledPath, TimeGrid};

/// Resolution of the dyadic lattice on which field values are stored.
///
/// With values on multiples of 2^-40 and magnitudes far below 2^12, every sum
/// and difference formed by the dynamic program is exact in `f64`.
const QUANTUM: f64 = 1.0 / (1u64 << 40) as f64;

fn quantize(v: f64) -> f64 {
    (v / QUANTUM).round() * QUANTUM
}

/// `n` independent Brownian motions `B(k, ·)` on a grid over `[0, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianField {
    n: usize,
    grid: TimeGrid,
    // row-major, n × (steps + 1)
    values: Vec<f64>,
}

impl BrownianField {
    pub fn sample(n: usize, grid: TimeGrid, rng: &mut RngStream) -> Result<Self> {
        if n == 0 {
            return invalid("field needs at least one line");
        }
        if grid.a() != 0.0 {
            return invalid("field grid must start at time 0");
        }
        let m = grid.len();
        let sd = grid.h().sqrt();
        let mut values = vec![0.0; n * m];
        for row in values.chunks_mut(m) {
            let mut v = 0.0;
            for slot in row.iter_mut().skip(1) {
                v += sd * rng.normal();
                *slot = quantize(v);
            }
        }
        Ok(Self { n, grid, values })
    }

    /// Field from explicit rows; values are snapped to the dyadic lattice.
    pub fn from_rows(grid: TimeGrid, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return invalid("field needs at least one line");
        }
        if grid.a() != 0.0 {
            return invalid("field grid must start at time 0");
        }
        let m = grid.len();
        let mut values = Vec::with_capacity(rows.len() * m);
        for (k, row) in rows.iter().enumerate() {
            if row.len() != m {
                return invalid(format!("row {k} has {} values, expected {m}", row.len()));
            }
            if row[0] != 0.0 {
                return invalid(format!("row {k} does not start at 0"));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return invalid(format!("row {k} has non-finite values"));
            }
            values.extend(row.iter().map(|&v| quantize(v)));
        }
        Ok(Self { n: rows.len(), grid, values })
    }

    pub fn zeros(n: usize, grid: TimeGrid) -> Result<Self> {
        Self::from_rows(grid, &vec![vec![0.0; grid.len()]; n])
    }

    /// Doubles the resolution by inserting exact Brownian-bridge midpoints.
    /// Existing gridpoint values are kept, so the coarse field is a restriction
    /// of the fine one.
    pub fn refine(&self, rng: &mut RngStream) -> Result<Self> {
        let grid = TimeGrid::new(self.grid.a(), self.grid.b(), 2 * self.grid.steps())?;
        let sd = (self.grid.h() / 4.0).sqrt();
        let m = grid.len();
        let mut values = vec![0.0; self.n * m];
        for k in 0..self.n {
            let old = self.row(k);
            let new = &mut values[k * m..(k + 1) * m];
            for (s, w) in old.windows(2).enumerate() {
                new[2 * s] = w[0];
                new[2 * s + 1] = quantize(0.5 * (w[0] + w[1]) + sd * rng.normal());
            }
            new[m - 1] = old[old.len() - 1];
        }
        Ok(Self { n: self.n, grid, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let m = self.grid.len();
        &self.values[k * m..(k + 1) * m]
    }

    pub fn value(&self, k: usize, i: usize) -> f64 {
        self.values[k * self.grid.len() + i]
    }

    /// `B(k, t_{s+1}) − B(k, t_s)`.
    pub fn increment(&self, k: usize, s: usize) -> f64 {
        let base = k * self.grid.len() + s;
        self.values[base + 1] - self.values[base]
    }

    pub fn line_path(&self, k: usize) -> SampledPath {
        SampledPath::from_parts_unchecked(self.grid, self.row(k).to_vec())
    }
}

/// Upright path on lines `first..=last` up to gridpoint `end`.
///
/// `jumps[q]` is the gridpoint at which the path moves from line `first + q`
/// to `first + q + 1`; implicitly `x_first = 0` and the final jump time is `end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UprightPath {
    pub first: usize,
    pub last: usize,
    pub jumps: Vec<usize>,
    pub end: usize,
}

impl UprightPath {
    pub fn new(first: usize, last: usize, jumps: Vec<usize>, end: usize) -> Result<Self> {
        if last < first {
            return invalid("path must have first <= last");
        }
        if jumps.len() != last - first {
            return invalid(format!(
                "path on lines {first}..={last} needs {} jump times, got {}",
                last - first,
                jumps.len()
            ));
        }
        if jumps.windows(2).any(|w| w[0] > w[1]) || jumps.iter().any(|&j| j > end) {
            return invalid("jump times must be non-decreasing and at most the end time");
        }
        Ok(Self { first, last, jumps, end })
    }

    /// Jump times with the conventions `x_first = 0` and `x_{last+1} = end`.
    fn breakpoints(&self) -> Vec<usize> {
        let mut xs = Vec::with_capacity(self.jumps.len() + 2);
        xs.push(0);
        xs.extend_from_slice(&self.jumps);
        xs.push(self.end);
        xs
    }
}

/// `Σ_k B(k, x_{k+1}) − B(k, x_k)`.
pub fn energy(field: &BrownianField, path: &UprightPath) -> Result<f64> {
    if path.last >= field.n() || path.end > field.grid().steps() {
        return invalid("path leaves the field");
    }
    let xs = path.breakpoints();
    Ok((path.first..=path.last)
        .zip(xs.windows(2))
        .map(|(k, w)| field.value(k, w[1]) - field.value(k, w[0]))
        .sum())
}

/// ℓ disjoint upright paths given by their per-cell occupancy.
///
/// `cells[s][j]` is the line held by path `j` during cell `[t_s, t_{s+1}]`.
/// Each row is strictly increasing, every column is non-decreasing, and path
/// `j` stays within lines `j..=n−ℓ+j`. Moves between cells may skip lines,
/// which corresponds to zero-length visits at a gridpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointTuple {
    n: usize,
    cells: Vec<Vec<usize>>,
}

impl DisjointTuple {
    pub fn new(n: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let ell = cells.first().map_or(0, Vec::len);
        if ell == 0 || ell > n {
            return invalid("tuple needs 1 <= ℓ <= n paths");
        }
        for (s, row) in cells.iter().enumerate() {
            if row.len() != ell {
                return invalid(format!("cell {s} has {} paths, expected {ell}", row.len()));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return invalid(format!("cell {s} is not strictly increasing"));
            }
            if row.iter().enumerate().any(|(j, &l)| l < j || l > n - ell + j) {
                return invalid(format!("cell {s} leaves the allowed line windows"));
            }
        }
        for pair in cells.windows(2) {
            if pair[0].iter().zip(&pair[1]).any(|(a, b)| a > b) {
                return invalid("paths must be non-decreasing in time");
            }
        }
        Ok(Self { n, cells })
    }

    pub fn ell(&self) -> usize {
        self.cells[0].len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Gridpoint at which the tuple ends.
    pub fn end(&self) -> usize {
        self.cells.len()
    }

    /// Member paths, path `j` running from line `j` to line `n−ℓ+j`.
    pub fn paths(&self) -> Vec<UprightPath> {
        let ell = self.ell();
        let end = self.end();
        (0..ell)
            .map(|j| {
                let (first, last) = (j, self.n - ell + j);
                let jumps = (first + 1..=last)
                    .map(|line| {
                        self.cells.iter().position(|row| row[j] >= line).unwrap_or(end)
                    })
                    .collect();
                UprightPath { first, last, jumps, end }
            })
            .collect()
    }
}

/// Sum of member energies.
pub fn tuple_energy(field: &BrownianField, tuple: &DisjointTuple) -> Result<f64> {
    if tuple.n != field.n() || tuple.end() > field.grid().steps() {
        return invalid("tuple does not fit the field");
    }
    tuple.paths().iter().map(|p| energy(field, p)).sum()
}
