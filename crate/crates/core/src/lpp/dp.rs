use super::BrownianField;
use crate::error::{invalid, Result};

/// Strictly increasing ℓ-tuples with `l_j ∈ [j, n−ℓ+j]`, in lexicographic order,
/// together with the index of `l − e_d` for each coordinate `d` when it is a state.
struct StateSpace {
    states: Vec<Vec<usize>>,
    pred: Vec<Vec<Option<usize>>>,
}

impl StateSpace {
    fn new(n: usize, ell: usize) -> Self {
        let mut states = Vec::new();
        let mut cur: Vec<usize> = (0..ell).collect();
        loop {
            states.push(cur.clone());
            // next combination in lexicographic order
            let mut j = ell;
            loop {
                if j == 0 {
                    return Self::with_preds(states);
                }
                j -= 1;
                if cur[j] < n - ell + j {
                    cur[j] += 1;
                    for q in j + 1..ell {
                        cur[q] = cur[q - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn with_preds(states: Vec<Vec<usize>>) -> Self {
        let ell = states[0].len();
        let index: std::collections::HashMap<&[usize], usize> =
            states.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let pred = (0..ell)
            .map(|d| {
                states
                    .iter()
                    .map(|s| {
                        if s[d] == 0 {
                            return None;
                        }
                        let mut t = s.clone();
                        t[d] -= 1;
                        index.get(t.as_slice()).copied()
                    })
                    .collect()
            })
            .collect();
        Self { states, pred }
    }
}

/// `M^ℓ` at every gridpoint: entry `i` is the maximal ℓ-tuple energy ending at `t_i`.
///
/// Per cell, each state gets the best value over all states it dominates
/// componentwise (paths only move up, possibly several lines at a gridpoint),
/// plus the increments of its occupied lines. The dominated maximum is a
/// sequence of one-coordinate running maxima, highest coordinate first, so
/// every intermediate tuple of the chain stays strictly increasing.
pub fn max_energy_profile(field: &BrownianField, ell: usize) -> Result<Vec<f64>> {
    let n = field.n();
    if ell == 0 || ell > n {
        return invalid(format!("need 1 <= ℓ <= n = {n}, got ℓ = {ell}"));
    }
    let space = StateSpace::new(n, ell);
    let steps = field.grid().steps();
    let mut value = vec![0.0f64; space.states.len()];
    let mut inc = vec![0.0f64; n];
    let mut out = Vec::with_capacity(steps + 1);
    out.push(0.0);
    for s in 0..steps {
        for d in (0..ell).rev() {
            for i in 0..value.len() {
                if let Some(p) = space.pred[d][i] {
                    if value[p] > value[i] {
                        value[i] = value[p];
                    }
                }
            }
        }
        for (k, slot) in inc.iter_mut().enumerate() {
            *slot = field.increment(k, s);
        }
        let mut best = f64::NEG_INFINITY;
        for (v, state) in value.iter_mut().zip(&space.states) {
            *v += state.iter().map(|&l| inc[l]).sum::<f64>();
            best = best.max(*v);
        }
        out.push(best);
    }
    Ok(out)
}

/// `M^ℓ_n(t_i)` for gridpoint index `i`.
pub fn max_energy(field: &BrownianField, ell: usize, i: usize) -> Result<f64> {
    if i > field.grid().steps() {
        return invalid(format!("gridpoint {i} beyond the field"));
    }
    let truncated;
    let f = if i < field.grid().steps() && i > 0 {
        let grid = field.grid().sub(0, i)?;
        let rows: Vec<Vec<f64>> = (0..field.n()).map(|k| field.row(k)[..=i].to_vec()).collect();
        truncated = BrownianField::from_rows(grid, &rows)?;
        &truncated
    } else {
        field
    };
    let profile = max_energy_profile(f, ell)?;
    Ok(if i == 0 { 0.0 } else { profile[profile.len() - 1] })
}
