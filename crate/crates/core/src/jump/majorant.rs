use crate::stochastic::SampledPath;

/// Least concave majorant of a sampled curve: the upper hull of its gridpoint graph.
///
/// Breakpoints are the hull vertices, i.e. the extreme points; collinear
/// gridpoints are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveMajorant {
    idx: Vec<usize>,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

/// Upper hull by a monotone chain scan.
pub fn least_concave_majorant(curve: &SampledPath) -> ConcaveMajorant {
    let g = curve.grid();
    let mut idx: Vec<usize> = Vec::with_capacity(16);
    for i in 0..g.len() {
        while idx.len() >= 2 {
            let (o, a) = (idx[idx.len() - 2], idx[idx.len() - 1]);
            let (xo, yo) = (g.time(o), curve.at(o));
            let (xa, ya) = (g.time(a), curve.at(a));
            let (xb, yb) = (g.time(i), curve.at(i));
            let cross = (xa - xo) * (yb - yo) - (ya - yo) * (xb - xo);
            if cross >= 0.0 {
                idx.pop();
            } else {
                break;
            }
        }
        idx.push(i);
    }
    let xs = idx.iter().map(|&i| g.time(i)).collect();
    let ys = idx.iter().map(|&i| curve.at(i)).collect();
    ConcaveMajorant { idx, xs, ys }
}

impl ConcaveMajorant {
    /// Grid indices of the breakpoints.
    pub fn indices(&self) -> &[usize] {
        &self.idx
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Slope of segment `j` (between breakpoints `j` and `j+1`).
    pub fn slope(&self, j: usize) -> f64 {
        (self.ys[j + 1] - self.ys[j]) / (self.xs[j + 1] - self.xs[j])
    }

    pub fn slopes(&self) -> Vec<f64> {
        (0..self.xs.len().saturating_sub(1)).map(|j| self.slope(j)).collect()
    }

    /// Value at `x`, clamped to the breakpoint range.
    pub fn eval(&self, x: f64) -> f64 {
        piecewise_linear(&self.xs, &self.ys, x)
    }
}

pub(crate) fn piecewise_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let m = xs.len();
    if m == 1 || x <= xs[0] {
        return ys[0];
    }
    if x >= xs[m - 1] {
        return ys[m - 1];
    }
    let j = xs.partition_point(|&p| p <= x) - 1;
    if x == xs[j] {
        return ys[j];
    }
    let w = (x - xs[j]) / (xs[j + 1] - xs[j]);
    ys[j] + w * (ys[j + 1] - ys[j])
}

/// The pair `(𝔩, 𝔯)` picked from the majorant's slopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrSelection {
    pub l: f64,
    pub r: f64,
    /// Breakpoint positions of `𝔩` and `𝔯` (`None` when the empty-set convention applied).
    pub l_break: Option<usize>,
    pub r_break: Option<usize>,
    /// `true` unless `𝔩 < 𝔯` with both thresholds met.
    pub degenerate: bool,
}

/// `𝔩` is the left end of the first segment with slope at most `4T`, and `𝔯`
/// the right end of the last segment with slope at least `-4T`. Empty sets
/// give `𝔩 = T` and `𝔯 = -T`.
pub fn select_lr(majorant: &ConcaveMajorant, t: f64) -> LrSelection {
    let m = majorant.len();
    let slopes = majorant.slopes();
    let l_break = slopes.iter().position(|&s| s <= 4.0 * t);
    let r_break = slopes.iter().rposition(|&s| s >= -4.0 * t).map(|j| j + 1);
    let (l_break, r_break) = if m == 1 { (Some(0), Some(0)) } else { (l_break, r_break) };
    let l = l_break.map_or(t, |j| majorant.xs[j]);
    let r = r_break.map_or(-t, |j| majorant.xs[j]);
    let degenerate = l_break.is_none() || r_break.is_none() || !(l < r);
    LrSelection { l, r, l_break, r_break, degenerate }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::{RngStream, TimeGrid};

    fn path(vals: Vec<f64>) -> SampledPath {
        let g = TimeGrid::new(-1.0, 1.0, vals.len() - 1).unwrap();
        SampledPath::new(g, vals).unwrap()
    }

    #[test]
    fn concave_input_is_its_own_majorant() {
        let g = TimeGrid::new(-1.0, 1.0, 20).unwrap();
        let p = SampledPath::from_fn(g, |x| -x * x).unwrap();
        let m = least_concave_majorant(&p);
        assert_eq!(m.len(), 21);
        for i in 0..=20 {
            assert_eq!(m.eval(g.time(i)), p.at(i));
        }
    }

    #[test]
    fn v_shape_gives_chord() {
        let m = least_concave_majorant(&path(vec![2.0, 1.0, 0.0, 1.0, 2.0]));
        assert_eq!(m.xs(), &[-1.0, 1.0]);
        assert_eq!(m.slopes(), vec![0.0]);
    }

    fn brute(p: &SampledPath, i: usize) -> f64 {
        let g = p.grid();
        let mut best = p.at(i);
        for j in 0..=i {
            for l in i..g.len() {
                if j == l {
                    continue;
                }
                let w = (g.time(i) - g.time(j)) / (g.time(l) - g.time(j));
                best = best.max(p.at(j) + w * (p.at(l) - p.at(j)));
            }
        }
        best
    }

    #[test]
    fn matches_pairwise_chords() {
        let mut rng = RngStream::new(11, 0);
        for _ in 0..50 {
            let vals: Vec<f64> = (0..20).map(|_| rng.normal()).collect();
            let p = path(vals);
            let m = least_concave_majorant(&p);
            for i in 0..20 {
                let x = p.grid().time(i);
                assert!((m.eval(x) - brute(&p, i)).abs() < 1e-12);
                assert!(m.eval(x) >= p.at(i) - 1e-12);
            }
            for (&i, &y) in m.indices().iter().zip(m.ys()) {
                assert_eq!(p.at(i), y);
            }
            let s = m.slopes();
            assert!(s.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn lr_conventions() {
        let flat = least_concave_majorant(&path(vec![0.0; 9]));
        let sel = select_lr(&flat, 1.0);
        assert_eq!((sel.l, sel.r, sel.degenerate), (-1.0, 1.0, false));

        let steep_up = least_concave_majorant(&path(vec![0.0, 10.0, 20.0]));
        let sel = select_lr(&steep_up, 1.0);
        assert_eq!((sel.l, sel.degenerate), (1.0, true));

        let steep_down = least_concave_majorant(&path(vec![20.0, 10.0, 0.0]));
        let sel = select_lr(&steep_down, 1.0);
        assert_eq!((sel.r, sel.degenerate), (-1.0, true));

        let both = least_concave_majorant(&path(vec![0.0, 10.0, 20.0, 10.0, 0.0]));
        let sel = select_lr(&both, 1.0);
        assert_eq!((sel.l, sel.r, sel.degenerate), (0.0, 0.0, true));
    }

    #[test]
    fn steep_first_segment() {
        // slope 10 on [-1, -0.5], then flat
        let m = least_concave_majorant(&path(vec![-5.0, 0.0, 0.0, 0.0, 0.0]));
        let sel = select_lr(&m, 1.0);
        assert_eq!(sel.l, -0.5);
        assert_eq!(sel.r, 1.0);
    }
}
