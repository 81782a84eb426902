use super::constants::RegularityConstants;
use super::majorant::{least_concave_majorant, select_lr, ConcaveMajorant, LrSelection};
use super::poles::{build_pole_set, PoleSet, TentMap};
use crate::bridges::{no_touch_range, FloorCurve};
use crate::error::{invalid, Error, Result};
use crate::stochastic::{affine_to_standard, sample_brownian_bridge, RngStream, SampledPath, TimeGrid};

/// What to do when `ε` is too large for the theoretical bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonPolicy {
    /// Refuse to build the frame.
    #[default]
    Strict,
    /// Log a warning and record it on the frame.
    Warn,
}

/// Window `T`, grid on `[-2T, 2T]` and the parameters shared by every context.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpFrame {
    constants: RegularityConstants,
    eps: f64,
    d_ip: f64,
    t: f64,
    grid: TimeGrid,
    warnings: Vec<String>,
}

impl JumpFrame {
    /// Builds the grid on `[-2T, 2T]` with spacing at most `spacing`; `±T`
    /// are always gridpoints.
    pub fn new(
        constants: RegularityConstants,
        eps: f64,
        d_ip: f64,
        spacing: f64,
        policy: EpsilonPolicy,
    ) -> Result<Self> {
        let t = constants.window(eps);
        Self::build(constants, eps, t, d_ip, spacing, policy)
    }

    /// Frame with the window `T` given exactly; `ε` is solved from `T`. Use
    /// this when `T` must be an exact value (for instance `2T` an integer),
    /// which the round trip through `ε` does not preserve.
    pub fn with_window(
        constants: RegularityConstants,
        t: f64,
        d_ip: f64,
        spacing: f64,
        policy: EpsilonPolicy,
    ) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return invalid(format!("window T = {t} must be positive"));
        }
        let eps = constants.epsilon_for_window(t);
        Self::build(constants, eps, t, d_ip, spacing, policy)
    }

    fn build(
        constants: RegularityConstants,
        eps: f64,
        t: f64,
        d_ip: f64,
        spacing: f64,
        policy: EpsilonPolicy,
    ) -> Result<Self> {
        if constants.k() < 2 {
            return invalid("the jump ensemble needs k >= 2");
        }
        if !(eps > 0.0 && eps < 1.0) {
            return invalid(format!("eps = {eps} outside (0, 1)"));
        }
        if !(d_ip >= 1.0 && d_ip.is_finite()) {
            return invalid(format!("d_ip = {d_ip} must be at least 1"));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return invalid(format!("bad spacing {spacing}"));
        }
        let mut warnings = Vec::new();
        let log_eps = eps.ln();
        let cap1 = constants.log_epsilon_cap_constants();
        if !(log_eps < cap1) {
            warnings.push(format!("log eps = {log_eps:.6e} violates log eps < {cap1:.6e} (C_k, D_k cap)"));
        }
        let cap2 = constants.log_epsilon_cap_poles(d_ip);
        if !(log_eps < cap2) {
            warnings.push(format!("log eps = {log_eps:.6e} violates log eps < {cap2:.6e} (d_ip cap)"));
        }
        if !warnings.is_empty() {
            match policy {
                EpsilonPolicy::Strict => return invalid(warnings.join("; ")),
                EpsilonPolicy::Warn => {
                    for w in &warnings {
                        log::warn!("{w}");
                    }
                }
            }
        }
        let m = (t / spacing).ceil().max(1.0) as usize;
        let grid = TimeGrid::new(-2.0 * t, 2.0 * t, 4 * m)?;
        Ok(Self { constants, eps, d_ip, t, grid, warnings })
    }

    pub fn constants(&self) -> &RegularityConstants {
        &self.constants
    }

    pub fn k(&self) -> usize {
        self.constants.k()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn d_ip(&self) -> f64 {
        self.d_ip
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Grid indices of `-T` and `T`.
    pub fn window_indices(&self) -> (usize, usize) {
        let m = self.grid.steps() / 4;
        (m, 3 * m)
    }

    /// Majorant of the floor on `[-T, T]` and the resulting `(𝔩, 𝔯)`.
    pub fn locate(&self, floor: &SampledPath) -> Result<(ConcaveMajorant, LrSelection)> {
        if !floor.grid().matches(&self.grid) {
            return Err(Error::GridMismatch("floor must live on the frame grid".into()));
        }
        let (a, b) = self.window_indices();
        let maj = least_concave_majorant(&floor.slice(a, b)?);
        let lr = select_lr(&maj, self.t);
        Ok((maj, lr))
    }
}

/// Side-interval data: how the curves look on `[-2T, 𝔩]` and `[𝔯, 2T]`.
pub enum SideData<'a> {
    /// Straight lines between the boundary data and the endpoint vectors.
    Zero,
    /// Standard bridges on the side grids (`frame.grid().sub(0, il)` and
    /// `sub(ir, steps)`).
    Standard { left: &'a [SampledPath], right: &'a [SampledPath] },
    /// Fresh independent standard bridges.
    Sample(&'a mut RngStream),
    /// Curves on the whole frame grid; their side segments are kept verbatim
    /// and their values at `±2T` must equal the boundary data.
    Curves(&'a [SampledPath]),
}

/// Lowest admissible endpoint vectors on each side, with the grid index of
/// the contact that fixes each component.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerVectors {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub left_contact: Vec<usize>,
    pub right_contact: Vec<usize>,
}

/// Side curves stored as `raw + w·(x - anchor)`, `w` the affine weight from the
/// outer boundary (0) to the middle endpoint (1).
#[derive(Debug, Clone, PartialEq)]
struct Side {
    raw: Vec<Vec<f64>>,
    anchor: Vec<f64>,
    grid: TimeGrid,
    // frame index of the outer boundary and of the middle endpoint
    outer: usize,
    inner: usize,
}

impl Side {
    fn len(&self) -> usize {
        self.raw[0].len()
    }

    /// Local index `s` (0 = leftmost) to affine weight.
    fn weight(&self, s: usize) -> f64 {
        let n = self.len() - 1;
        let dist = if self.outer < self.inner { s } else { n - s };
        dist as f64 / n as f64
    }

    fn value(&self, i: usize, s: usize, x: f64) -> f64 {
        let d = x - self.anchor[i];
        if d == 0.0 {
            self.raw[i][s]
        } else {
            self.raw[i][s] + self.weight(s) * d
        }
    }

    fn inner_local(&self) -> usize {
        if self.outer < self.inner { self.len() - 1 } else { 0 }
    }

    fn outer_local(&self) -> usize {
        if self.outer < self.inner { 0 } else { self.len() - 1 }
    }

    fn curves(&self, x: &[f64]) -> Vec<SampledPath> {
        (0..self.raw.len())
            .map(|i| {
                let mut vals: Vec<f64> = (0..self.len()).map(|s| self.value(i, s, x[i])).collect();
                vals[self.inner_local()] = x[i];
                SampledPath::from_parts_unchecked(self.grid, vals)
            })
            .collect()
    }

    /// Iterative contact construction from the bottom curve up.
    fn corners(&self, floor: &[f64], boundary: &[f64]) -> (Vec<f64>, Vec<usize>) {
        let k = self.raw.len();
        let outer = self.outer_local();
        let admissible_boundary =
            boundary.windows(2).all(|w| w[0] > w[1]) && boundary[k - 1] > floor[outer];
        if !admissible_boundary {
            return (vec![f64::INFINITY; k], vec![outer; k]);
        }
        let mut corner = vec![0.0; k];
        let mut contact = vec![0; k];
        for i in (0..k).rev() {
            let mut best = f64::NEG_INFINITY;
            let mut arg = self.inner_local();
            for s in 0..self.len() {
                if s == outer {
                    continue;
                }
                let target = if i == k - 1 { floor[s] } else { self.value(i + 1, s, corner[i + 1]) };
                let w = self.weight(s);
                let c = self.anchor[i] + (target - self.raw[i][s]) / w;
                if c > best {
                    best = c;
                    arg = s;
                }
            }
            corner[i] = best;
            contact[i] = arg + self.grid_offset();
        }
        (corner, contact)
    }

    fn grid_offset(&self) -> usize {
        self.outer.min(self.inner)
    }
}

/// `x - corner` is a strictly decreasing list of positive reals.
pub fn corner_admissible(x: &[f64], corner: &[f64]) -> bool {
    let d: Vec<f64> = x.iter().zip(corner).map(|(a, c)| a - c).collect();
    d.iter().all(|v| v.is_finite()) && d[d.len() - 1] > 0.0 && d.windows(2).all(|w| w[0] > w[1])
}

/// Results of the side-interval test, the pole test and the middle test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TestOutcome {
    pub t1: bool,
    pub t2: bool,
    pub t3: bool,
}

/// A jump ensemble draw.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpSample {
    /// The `k` curves on `[𝔩, 𝔯]`.
    pub curves: Vec<SampledPath>,
    pub attempts: u64,
    /// Whether the draw also avoids the floor and itself on `[𝔩, 𝔯]`.
    pub t3: bool,
}

/// Everything the jump ensemble needs: frame, floor, `(𝔩, 𝔯)`, poles, tent,
/// boundary data, side data and corners.
#[derive(Debug, Clone)]
pub struct JumpContext {
    frame: JumpFrame,
    floor: SampledPath,
    majorant: ConcaveMajorant,
    lr: LrSelection,
    il: usize,
    ir: usize,
    poles: PoleSet,
    pole_idx: Vec<usize>,
    tent: TentMap,
    u: Vec<f64>,
    v: Vec<f64>,
    left: Side,
    right: Side,
    corners: CornerVectors,
}

impl JumpContext {
    pub fn new(frame: &JumpFrame, floor: SampledPath, u: Vec<f64>, v: Vec<f64>, sides: SideData) -> Result<Self> {
        let k = frame.k();
        if u.len() != k || v.len() != k {
            return invalid(format!("boundary data must have {k} entries"));
        }
        if u.iter().chain(&v).any(|x| !x.is_finite()) {
            return invalid("boundary data must be finite");
        }
        let (majorant, lr) = frame.locate(&floor)?;
        if lr.degenerate {
            return Err(Error::FavFailure(format!("degenerate middle interval: 𝔩 = {}, 𝔯 = {}", lr.l, lr.r)));
        }
        let (wa, _) = frame.window_indices();
        let (mut poles, tent) = build_pole_set(&majorant, &lr, frame.d_ip, |i| floor.at(wa + i))?;
        for i in poles.indices.iter_mut() {
            *i += wa;
        }
        let pole_idx = poles.indices.clone();
        let g = frame.grid;
        let il = wa + majorant.indices()[lr.l_break.unwrap()];
        let ir = wa + majorant.indices()[lr.r_break.unwrap()];
        let steps = g.steps();
        let lgrid = g.sub(0, il)?;
        let rgrid = g.sub(ir, steps)?;

        let from_standard = |bridges: &[SampledPath], grid: TimeGrid, ends: &[f64], left: bool| -> Result<Vec<Vec<f64>>> {
            if bridges.len() != k || bridges.iter().any(|b| !b.grid().matches(&grid)) {
                return Err(Error::GridMismatch("side bridges do not match the side grid".into()));
            }
            let n = grid.steps();
            Ok(bridges
                .iter()
                .zip(ends)
                .map(|(b, &e)| {
                    (0..=n)
                        .map(|s| {
                            let w_outer = if left { (n - s) as f64 / n as f64 } else { s as f64 / n as f64 };
                            b.at(s) + w_outer * e
                        })
                        .collect()
                })
                .collect())
        };

        let (lraw, lanchor, rraw, ranchor) = match sides {
            SideData::Zero => {
                let zl: Vec<_> = (0..k).map(|_| SampledPath::constant(lgrid, 0.0)).collect();
                let zr: Vec<_> = (0..k).map(|_| SampledPath::constant(rgrid, 0.0)).collect();
                (from_standard(&zl, lgrid, &u, true)?, vec![0.0; k], from_standard(&zr, rgrid, &v, false)?, vec![0.0; k])
            }
            SideData::Standard { left, right } => {
                for b in left.iter().chain(right) {
                    if b.first() != 0.0 || b.last() != 0.0 {
                        return invalid("standard bridges must vanish at both ends");
                    }
                }
                (from_standard(left, lgrid, &u, true)?, vec![0.0; k], from_standard(right, rgrid, &v, false)?, vec![0.0; k])
            }
            SideData::Sample(rng) => {
                let zl: Vec<_> = (0..k).map(|_| sample_brownian_bridge(lgrid, 0.0, 0.0, rng)).collect();
                let zr: Vec<_> = (0..k).map(|_| sample_brownian_bridge(rgrid, 0.0, 0.0, rng)).collect();
                (from_standard(&zl, lgrid, &u, true)?, vec![0.0; k], from_standard(&zr, rgrid, &v, false)?, vec![0.0; k])
            }
            SideData::Curves(curves) => {
                if curves.len() != k || curves.iter().any(|c| !c.grid().matches(&g)) {
                    return Err(Error::GridMismatch("side curves must be k paths on the frame grid".into()));
                }
                for (i, c) in curves.iter().enumerate() {
                    if c.first() != u[i] || c.last() != v[i] {
                        return invalid(format!("curve {i} does not meet the boundary data"));
                    }
                }
                let lraw = curves.iter().map(|c| c.values()[..=il].to_vec()).collect();
                let rraw = curves.iter().map(|c| c.values()[ir..].to_vec()).collect();
                (lraw, curves.iter().map(|c| c.at(il)).collect(), rraw, curves.iter().map(|c| c.at(ir)).collect())
            }
        };
        let left = Side { raw: lraw, anchor: lanchor, grid: lgrid, outer: 0, inner: il };
        let right = Side { raw: rraw, anchor: ranchor, grid: rgrid, outer: steps, inner: ir };
        let fv = floor.values();
        let (lc, lcon) = left.corners(&fv[..=il], &u);
        let (rc, rcon) = right.corners(&fv[ir..], &v);
        let corners = CornerVectors { left: lc, right: rc, left_contact: lcon, right_contact: rcon };

        let ctx = Self { frame: frame.clone(), floor, majorant, lr, il, ir, poles, pole_idx, tent, u, v, left, right, corners };
        ctx.assert_invariants();
        Ok(ctx)
    }

    /// Context whose boundary and side data come from `curves` (the top `k`
    /// curves of an ensemble on the frame grid).
    pub fn from_ensemble(frame: &JumpFrame, curves: &[SampledPath], floor: SampledPath) -> Result<Self> {
        let u = curves.iter().map(|c| c.first()).collect();
        let v = curves.iter().map(|c| c.last()).collect();
        Self::new(frame, floor, u, v, SideData::Curves(curves))
    }

    fn assert_invariants(&self) {
        let t = self.frame.t;
        let d = self.frame.d_ip;
        let p = &self.poles.xs;
        assert_eq!(p[0], self.lr.l);
        assert_eq!(p[p.len() - 1], self.lr.r);
        assert!(p.windows(2).all(|w| w[1] - w[0] > d), "pole gaps");
        for i in self.il..=self.ir {
            let x = self.frame.grid.time(i);
            assert!(self.floor.at(i) <= self.tent.eval(x) + 8.0 * d * t + 1e-9 * t.max(1.0), "tent dominance at {x}");
        }
        let tol = 1e-9 * t.max(1.0);
        assert!(self.tent.slopes().iter().all(|s| s.abs() <= 4.0 * t + tol), "tent slopes");
    }

    pub fn frame(&self) -> &JumpFrame {
        &self.frame
    }

    pub fn k(&self) -> usize {
        self.frame.k()
    }

    pub fn t(&self) -> f64 {
        self.frame.t
    }

    pub fn floor(&self) -> &SampledPath {
        &self.floor
    }

    pub fn majorant(&self) -> &ConcaveMajorant {
        &self.majorant
    }

    pub fn lr(&self) -> (f64, f64) {
        (self.lr.l, self.lr.r)
    }

    /// Frame grid indices of `𝔩` and `𝔯`.
    pub fn lr_indices(&self) -> (usize, usize) {
        (self.il, self.ir)
    }

    pub fn middle_grid(&self) -> TimeGrid {
        self.frame.grid.sub(self.il, self.ir).expect("𝔩 < 𝔯")
    }

    pub fn poles(&self) -> &PoleSet {
        &self.poles
    }

    pub fn tent(&self) -> &TentMap {
        &self.tent
    }

    pub fn boundary(&self) -> (&[f64], &[f64]) {
        (&self.u, &self.v)
    }

    pub fn corners(&self) -> &CornerVectors {
        &self.corners
    }

    /// Side-interval test through the corner vectors.
    pub fn side_test(&self, x: &[f64], y: &[f64]) -> bool {
        corner_admissible(x, &self.corners.left) && corner_admissible(y, &self.corners.right)
    }

    /// Side-interval test by reconstructing the side curves and checking
    /// avoidance directly.
    pub fn side_test_direct(&self, x: &[f64], y: &[f64]) -> bool {
        let l = self.left.curves(x);
        let r = self.right.curves(y);
        let steps = self.frame.grid.steps();
        let lf = FloorCurve::linear(self.floor.slice(0, self.il).expect("il > 0"));
        let rf = FloorCurve::linear(self.floor.slice(self.ir, steps).expect("ir < steps"));
        no_touch_range(&l, &lf, 0, self.il).expect("side grids")
            && no_touch_range(&r, &rf, 0, steps - self.ir).expect("side grids")
    }

    /// Full curves on `[-2T, 2T]` from middle curves on `[𝔩, 𝔯]`.
    pub fn reconstruct(&self, middle: &[SampledPath]) -> Result<Vec<SampledPath>> {
        let mg = self.middle_grid();
        if middle.len() != self.k() || middle.iter().any(|c| !c.grid().matches(&mg)) {
            return Err(Error::GridMismatch("middle curves must be k paths on [𝔩, 𝔯]".into()));
        }
        let x: Vec<f64> = middle.iter().map(|c| c.first()).collect();
        let y: Vec<f64> = middle.iter().map(|c| c.last()).collect();
        let l = self.left.curves(&x);
        let r = self.right.curves(&y);
        Ok((0..self.k())
            .map(|i| {
                let mut vals = Vec::with_capacity(self.frame.grid.len());
                vals.extend_from_slice(&l[i].values()[..self.il]);
                vals.extend_from_slice(middle[i].values());
                vals.extend_from_slice(&r[i].values()[1..]);
                SampledPath::from_parts_unchecked(self.frame.grid, vals)
            })
            .collect())
    }

    /// `k` independent bridges on `[-2T, 2T]` from `u` to `v`, restricted to `[𝔩, 𝔯]`.
    pub fn sample_wiener_candidate(&self, rng: &mut RngStream) -> Vec<SampledPath> {
        self.u
            .iter()
            .zip(&self.v)
            .map(|(&a, &b)| {
                sample_brownian_bridge(self.frame.grid, a, b, rng)
                    .slice(self.il, self.ir)
                    .expect("𝔩 < 𝔯")
            })
            .collect()
    }

    /// Tests 1 to 3 for curves on `[𝔩, 𝔯]`.
    pub fn run_tests(&self, candidate: &[SampledPath]) -> TestOutcome {
        let k = self.k();
        let x: Vec<f64> = candidate.iter().map(|c| c.first()).collect();
        let y: Vec<f64> = candidate.iter().map(|c| c.last()).collect();
        let t1 = self.side_test(&x, &y);
        let t2 = self.pole_idx.iter().all(|&p| {
            let fl = self.floor.at(p);
            candidate.iter().take(k).all(|c| c.at(p - self.il) > fl)
        });
        let mid_floor = FloorCurve::linear(self.floor.slice(self.il, self.ir).expect("𝔩 < 𝔯"));
        let t3 = no_touch_range(candidate, &mid_floor, 0, self.ir - self.il).expect("candidate grid");
        assert!(!t3 || t2, "middle test passed but pole test failed");
        TestOutcome { t1, t2, t3 }
    }

    /// Wiener candidate conditioned on passing tests 1 and 2.
    pub fn sample_jump(&self, rng: &mut RngStream, max_attempts: u64) -> Result<JumpSample> {
        for attempt in 1..=max_attempts {
            let cand = self.sample_wiener_candidate(rng);
            let out = self.run_tests(&cand);
            if out.t1 && out.t2 {
                return Ok(JumpSample { curves: cand, attempts: attempt, t3: out.t3 });
            }
        }
        Err(Error::RejectionExhausted { attempts: max_attempts, accepted: 0, acceptance_estimate: 0.0 })
    }

    /// The favourable event for this context's data.
    pub fn fav(&self) -> bool {
        let (a, b) = self.frame.window_indices();
        let window = self.floor.slice(a, b).expect("window");
        let ok = check_fav(&self.u, &self.v, &window, &self.corners, self.frame.t);
        if ok {
            let t = self.frame.t;
            let tol = 1e-9 * t.max(1.0);
            assert!(self.lr.l <= -t / 2.0 + tol && self.lr.r >= t / 2.0 - tol, "Fav without [-T/2, T/2] ⊆ [𝔩, 𝔯]");
        }
        ok
    }
}

/// Boundary values in `T²[-2√2-1, -2√2+1]`, floor in `[-T², T²]` on
/// `[-T, T]`, all corner components in `[-T², T²]`.
pub fn check_fav(u: &[f64], v: &[f64], floor_window: &SampledPath, corners: &CornerVectors, t: f64) -> bool {
    let t2 = t * t;
    let s = 2f64.sqrt() * 2.0;
    let (lo, hi) = (t2 * (-s - 1.0), t2 * (-s + 1.0));
    let f1 = u.iter().chain(v).all(|&x| lo <= x && x <= hi);
    let f2 = floor_window.values().iter().all(|&x| -t2 <= x && x <= t2);
    let f3 = corners.left.iter().chain(&corners.right).all(|&x| -t2 <= x && x <= t2);
    f1 && f2 && f3
}

/// Standard bridges of the side segments of `curves` (for feeding
/// [`SideData::Standard`]).
pub fn side_bridges(ctx_frame: &JumpFrame, curves: &[SampledPath], il: usize, ir: usize) -> Result<(Vec<SampledPath>, Vec<SampledPath>)> {
    let steps = ctx_frame.grid().steps();
    let mut l = Vec::with_capacity(curves.len());
    let mut r = Vec::with_capacity(curves.len());
    for c in curves {
        l.push(affine_to_standard(&c.slice(0, il)?));
        r.push(affine_to_standard(&c.slice(ir, steps)?));
    }
    Ok((l, r))
}
