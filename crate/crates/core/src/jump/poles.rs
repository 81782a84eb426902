use super::majorant::{piecewise_linear, ConcaveMajorant, LrSelection};
use crate::error::{invalid, Error, Result};

/// Selected extreme points of the majorant inside `[𝔩, 𝔯]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet {
    /// Grid indices (in the majorant's grid).
    pub indices: Vec<usize>,
    pub xs: Vec<f64>,
}

impl PoleSet {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// Piecewise affine interpolation of the floor through the pole tops.
#[derive(Debug, Clone, PartialEq)]
pub struct TentMap {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl TentMap {
    pub fn eval(&self, x: f64) -> f64 {
        piecewise_linear(&self.xs, &self.ys, x)
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect()
    }
}

/// Maximum-cardinality subset of sorted points `e` containing both ends, with
/// gaps `> d` and every skipped point within `d` of a chosen one. Ties go to
/// the lexicographically largest subset. Returns positions into `e`.
pub fn select_poles(e: &[f64], d: f64) -> Option<Vec<usize>> {
    let m = e.len();
    if m < 2 {
        return None;
    }
    // first index after j lying further than d from e[j]
    let next_far: Vec<usize> = (0..m).map(|j| e.partition_point(|&x| x <= e[j] + d)).collect();
    let valid = |j: usize, i: usize| {
        let q = next_far[j];
        e[i] - e[j] > d && (q >= i || e[q] >= e[i] - d)
    };
    let mut best = vec![0usize; m];
    best[m - 1] = 1;
    for j in (0..m - 1).rev() {
        best[j] = (j + 1..m).filter(|&i| best[i] > 0 && valid(j, i)).map(|i| best[i] + 1).max().unwrap_or(0);
    }
    if best[0] == 0 {
        return None;
    }
    let mut out = vec![0];
    let mut j = 0;
    while j != m - 1 {
        j = (j + 1..m).rev().find(|&i| best[i] + 1 == best[j] && valid(j, i))?;
        out.push(j);
    }
    Some(out)
}

/// Pole set and tent map for the majorant's breakpoints in `[𝔩, 𝔯]`.
/// `floor_at` gives the floor value at a grid index of the majorant's grid.
pub fn build_pole_set(
    majorant: &ConcaveMajorant,
    lr: &LrSelection,
    d_ip: f64,
    floor_at: impl Fn(usize) -> f64,
) -> Result<(PoleSet, TentMap)> {
    let (Some(lb), Some(rb)) = (lr.l_break, lr.r_break) else {
        return Err(Error::FavFailure("𝔩 or 𝔯 fell back to the empty-set convention".into()));
    };
    if lr.degenerate || !(lr.l < lr.r) {
        return Err(Error::FavFailure(format!("degenerate middle interval [{}, {}]", lr.l, lr.r)));
    }
    if !(d_ip >= 1.0 && d_ip < lr.r - lr.l) {
        return invalid(format!("d_ip = {d_ip} outside [1, {})", lr.r - lr.l));
    }
    let e = &majorant.xs()[lb..=rb];
    let Some(pos) = select_poles(e, d_ip) else {
        return Err(Error::FavFailure("no admissible pole set".into()));
    };
    let indices: Vec<usize> = pos.iter().map(|&p| majorant.indices()[lb + p]).collect();
    let xs: Vec<f64> = pos.iter().map(|&p| e[p]).collect();
    let ys = indices.iter().map(|&i| floor_at(i)).collect();
    Ok((PoleSet { indices, xs: xs.clone() }, TentMap { xs, ys }))
}
