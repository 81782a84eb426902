#![allow(dead_code)]

use lpp_ensembles::lpp::{tuple_energy, BrownianField, DisjointTuple};

/// All strictly increasing ℓ-tuples inside the line windows.
pub fn states(n: usize, ell: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, ell: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let j = cur.len();
        if j == ell {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().map_or(0, |&l| l + 1).max(j);
        for l in lo..=n - ell + j {
            cur.push(l);
            rec(n, ell, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, ell, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive maximum over occupancy sequences of length `cells`.
pub fn brute_force(field: &BrownianField, ell: usize, cells: usize) -> f64 {
    let sts = states(field.n(), ell);
    let mut best = f64::NEG_INFINITY;
    let mut seq: Vec<usize> = Vec::new();
    fn rec(
        field: &BrownianField,
        sts: &[Vec<usize>],
        cells: usize,
        seq: &mut Vec<usize>,
        best: &mut f64,
    ) {
        if seq.len() == cells {
            let rows: Vec<Vec<usize>> = seq.iter().map(|&i| sts[i].clone()).collect();
            let t = DisjointTuple::new(field.n(), rows).unwrap();
            *best = best.max(tuple_energy(field, &t).unwrap());
            return;
        }
        for i in 0..sts.len() {
            if let Some(&p) = seq.last() {
                if sts[p].iter().zip(&sts[i]).any(|(a, b)| a > b) {
                    continue;
                }
            }
            seq.push(i);
            rec(field, sts, cells, seq, best);
            seq.pop();
        }
    }
    rec(field, &sts, cells, &mut seq, &mut best);
    best
}

/// Mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Unbiased sample variance and its approximate standard error (Gaussian data).
pub fn var_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (v, v * (2.0 / (n - 1.0)).sqrt())
}
