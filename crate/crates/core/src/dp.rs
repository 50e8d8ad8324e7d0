//! Position-resolved enumeration of walks in the full, half and quarter
//! planes: exact counts, Boltzmann endpoint statistics, and fast float and
//! modular variants for long series.

use crate::rule::{Dir, Rule, DIRS};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use twostep_algebra::{LPoly, Series, TSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Plane {
    Full,
    Half,
    Quarter,
}

impl Plane {
    pub fn admits(self, a: i32, b: i32) -> bool {
        match self {
            Plane::Full => true,
            Plane::Half => b >= 0,
            Plane::Quarter => a >= 0 && b >= 0,
        }
    }

    /// Directions a walk may start with. Follows from `admits`.
    pub fn first_steps(self) -> Vec<Dir> {
        DIRS.iter().copied().filter(|d| {
            let (a, b) = d.delta();
            self.admits(a, b)
        }).collect()
    }

    pub fn parse(s: &str) -> Option<Plane> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Some(Plane::Full),
            "half" => Some(Plane::Half),
            "quarter" => Some(Plane::Quarter),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Plane::Full => "full",
            Plane::Half => "half",
            Plane::Quarter => "quarter",
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DpError {
    #[error("no walk of length {0} in the requested ensemble")]
    EmptyEnsemble(usize),
}

/// Counts by endpoint and last step for one length.
pub type Layer = BTreeMap<(i32, i32), [BigUint; 4]>;

/// One CSV row: counts by last step, total and axis counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountRow {
    pub m: usize,
    pub by_dir: [BigUint; 4],
    pub p: BigUint,
    pub px: BigUint,
    pub py: BigUint,
    pub po: BigUint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EndpointStats {
    pub m: usize,
    pub mean_x: BigRational,
    pub mean_y: BigRational,
    pub total: BigRational,
}

/// Exact enumeration up to `m_max`, keeping every layer.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub rule: Rule,
    pub plane: Plane,
    layers: Vec<Layer>,
}

impl Enumeration {
    pub fn run(rule: Rule, plane: Plane, m_max: usize) -> Enumeration {
        let mut layers: Vec<Layer> = Vec::with_capacity(m_max);
        if m_max == 0 {
            return Enumeration { rule, plane, layers };
        }
        let mut first = Layer::new();
        for d in plane.first_steps() {
            let cell = first.entry(d.delta()).or_insert_with(zero4);
            cell[d.index()] = BigUint::one();
        }
        layers.push(first);
        for _ in 1..m_max {
            let prev = layers.last().unwrap();
            let mut next = Layer::new();
            for (&(a, b), cnt) in prev {
                for i in 0..4 {
                    if cnt[i].is_zero() {
                        continue;
                    }
                    for j in rule.successors(i) {
                        let (da, db) = DIRS[j].delta();
                        let (na, nb) = (a + da, b + db);
                        if plane.admits(na, nb) {
                            next.entry((na, nb)).or_insert_with(zero4)[j] += &cnt[i];
                        }
                    }
                }
            }
            layers.push(next);
        }
        Enumeration { rule, plane, layers }
    }

    pub fn m_max(&self) -> usize {
        self.layers.len()
    }

    /// Walks of length `m` (1-based).
    pub fn layer(&self, m: usize) -> &Layer {
        &self.layers[m - 1]
    }

    pub fn counts(&self, m: usize) -> [BigUint; 4] {
        let mut c = zero4();
        for cnt in self.layer(m).values() {
            for k in 0..4 {
                c[k] += &cnt[k];
            }
        }
        c
    }

    pub fn total(&self, m: usize) -> BigUint {
        self.counts(m).iter().sum()
    }

    pub fn row(&self, m: usize) -> CountRow {
        let (mut px, mut py, mut po) = (BigUint::zero(), BigUint::zero(), BigUint::zero());
        for (&(a, b), cnt) in self.layer(m) {
            let s: BigUint = cnt.iter().sum();
            if b == 0 {
                px += &s;
            }
            if a == 0 {
                py += &s;
            }
            if a == 0 && b == 0 {
                po += &s;
            }
        }
        let by_dir = self.counts(m);
        let p = by_dir.iter().sum();
        CountRow { m, by_dir, p, px, py, po }
    }

    pub fn rows(&self) -> Vec<CountRow> {
        (1..=self.m_max()).map(|m| self.row(m)).collect()
    }

    fn series_by(&self, f: impl Fn(i32, i32, &[BigUint; 4]) -> Option<(i32, i32, BigUint)>) -> TSeries {
        let mut c = vec![LPoly::zero(); self.m_max() + 1];
        for (k, layer) in self.layers.iter().enumerate() {
            for (&(a, b), cnt) in layer {
                if let Some((i, j, v)) = f(a, b, cnt) {
                    if !v.is_zero() {
                        c[k + 1].add_term(i, j, &BigRational::from_integer(v.into()));
                    }
                }
            }
        }
        Series::from_coeffs(c)
    }

    /// Generating function of walks ending with a `theta` step, to `O(t^(m_max+1))`.
    pub fn series(&self, theta: Dir) -> TSeries {
        self.series_by(|a, b, cnt| Some((a, b, cnt[theta.index()].clone())))
    }

    pub fn total_series(&self) -> TSeries {
        self.series_by(|a, b, cnt| Some((a, b, cnt.iter().sum())))
    }

    /// Walks ending on the x-axis whose last step may be followed by S.
    pub fn boundary_down(&self) -> TSeries {
        let r = self.rule;
        self.series_by(move |a, b, cnt| {
            (b == 0).then(|| (a, 0, (0..4).filter(|&j| r.get(j, Dir::S.index())).map(|j| cnt[j].clone()).sum()))
        })
    }

    /// Walks ending on the y-axis whose last step may be followed by W.
    pub fn boundary_left(&self) -> TSeries {
        let r = self.rule;
        self.series_by(move |a, b, cnt| {
            (a == 0).then(|| (0, b, (0..4).filter(|&j| r.get(j, Dir::W.index())).map(|j| cnt[j].clone()).sum()))
        })
    }

    /// Boltzmann statistics of length-`m` endpoints at weights `(x, y)`,
    /// restricted to walks ending with `theta` when given.
    pub fn weighted_stats(&self, m: usize, x: &BigRational, y: &BigRational, theta: Option<Dir>) -> Result<EndpointStats, DpError> {
        let mut total = BigRational::zero();
        let mut sx = BigRational::zero();
        let mut sy = BigRational::zero();
        for (&(a, b), cnt) in self.layer(m) {
            let n: BigUint = match theta {
                Some(d) => cnt[d.index()].clone(),
                None => cnt.iter().sum(),
            };
            if n.is_zero() {
                continue;
            }
            let w = BigRational::from_integer(n.into()) * x.pow(a) * y.pow(b);
            sx += &w * BigRational::from_integer(a.into());
            sy += &w * BigRational::from_integer(b.into());
            total += w;
        }
        if total.is_zero() {
            return Err(DpError::EmptyEnsemble(m));
        }
        Ok(EndpointStats { m, mean_x: sx / &total, mean_y: sy / &total, total })
    }
}

fn zero4() -> [BigUint; 4] {
    std::array::from_fn(|_| BigUint::zero())
}

/// Exact expected endpoint under the Boltzmann weights `x^a y^b`.
///
/// The full plane uses the weighted transfer recursion together with its
/// x- and y-log-derivatives, so large `m` is cheap.
pub fn endpoint_expectation(
    rule: Rule,
    plane: Plane,
    m: usize,
    x: &BigRational,
    y: &BigRational,
    theta: Option<Dir>,
) -> Result<EndpointStats, DpError> {
    assert!(m >= 1);
    if plane != Plane::Full {
        return Enumeration::run(rule, plane, m).weighted_stats(m, x, y, theta);
    }
    let zero = BigRational::zero;
    let w = [x.clone(), y.clone(), x.recip(), y.recip()];
    let wx = [x.clone(), zero(), -x.recip(), zero()];
    let wy = [zero(), y.clone(), zero(), -y.recip()];
    let mut c = w.clone();
    let mut dx = wx.clone();
    let mut dy = wy.clone();
    for _ in 1..m {
        let mut nc: [BigRational; 4] = std::array::from_fn(|_| zero());
        let mut ndx = nc.clone();
        let mut ndy = nc.clone();
        for i in 0..4 {
            for j in rule.successors(i) {
                nc[j] += &c[i] * &w[j];
                ndx[j] += &dx[i] * &w[j] + &c[i] * &wx[j];
                ndy[j] += &dy[i] * &w[j] + &c[i] * &wy[j];
            }
        }
        c = nc;
        dx = ndx;
        dy = ndy;
    }
    let pick = |v: &[BigRational; 4]| match theta {
        Some(d) => v[d.index()].clone(),
        None => v.iter().sum(),
    };
    let total = pick(&c);
    if total.is_zero() {
        return Err(DpError::EmptyEnsemble(m));
    }
    Ok(EndpointStats { m, mean_x: pick(&dx) / &total, mean_y: pick(&dy) / &total, total })
}

/// Float half-plane data at weights `(x, y)`; index `m` holds length `m`.
#[derive(Clone, Debug)]
pub struct HalfProbe {
    pub x: f64,
    pub y: f64,
    /// `ln` of the weighted count of walks by last step.
    pub ln_dir: Vec<[f64; 4]>,
    /// `ln` of the weighted total.
    pub ln_total: Vec<f64>,
    pub mean_y: Vec<f64>,
}

/// Half-plane Boltzmann DP in floating point. Only the height is tracked;
/// the x-coordinate enters through the step weight.
pub fn half_plane_float(rule: Rule, x: f64, y: f64, m_max: usize) -> HalfProbe {
    let w = [x, y, 1.0 / x, 1.0 / y];
    let h = m_max + 2;
    let mut cur = vec![[0.0f64; 4]; h];
    cur[0][Dir::E.index()] = w[0];
    cur[1][Dir::N.index()] = w[1];
    cur[0][Dir::W.index()] = w[2];
    let mut probe = HalfProbe {
        x,
        y,
        ln_dir: vec![[f64::NEG_INFINITY; 4]; m_max + 1],
        ln_total: vec![f64::NEG_INFINITY; m_max + 1],
        mean_y: vec![0.0; m_max + 1],
    };
    let preds: [Vec<usize>; 4] = std::array::from_fn(|j| (0..4).filter(|&i| rule.get(i, j)).collect());
    let mut ln_scale = 0.0f64;
    for m in 1..=m_max {
        let mut tot = [0.0f64; 4];
        let mut sy = 0.0;
        for (b, cell) in cur.iter().enumerate().take(m + 1) {
            for k in 0..4 {
                tot[k] += cell[k];
            }
            sy += b as f64 * cell.iter().sum::<f64>();
        }
        let all: f64 = tot.iter().sum();
        for k in 0..4 {
            probe.ln_dir[m][k] = tot[k].ln() + ln_scale;
        }
        probe.ln_total[m] = all.ln() + ln_scale;
        if all == 0.0 {
            break;
        }
        probe.mean_y[m] = sy / all;
        if m == m_max {
            break;
        }
        for cell in cur.iter_mut().take(m + 1) {
            for v in cell.iter_mut() {
                *v /= all;
            }
        }
        ln_scale += all.ln();
        let mut next = vec![[0.0f64; 4]; h];
        for b in 0..=m {
            for j in 0..4 {
                let nb = b as i64 + DIRS[j].delta().1 as i64;
                if nb < 0 {
                    continue;
                }
                let s: f64 = preds[j].iter().map(|&i| cur[b][i]).sum();
                next[nb as usize][j] += w[j] * s;
            }
        }
        cur = next;
    }
    probe
}

/// Float quarter-plane data; `ln` of the totals and of the walks ending on
/// the x-axis, the y-axis and at the origin.
#[derive(Clone, Debug)]
pub struct QuarterProbe {
    pub ln_p: Vec<f64>,
    pub ln_px: Vec<f64>,
    pub ln_py: Vec<f64>,
    pub ln_po: Vec<f64>,
}

/// Quarter-plane DP in floating point at weights `(x, y)`. Every term is
/// nonnegative, so a count that is zero comes out as exactly zero.
pub fn quarter_plane_float(rule: Rule, x: f64, y: f64, m_max: usize) -> QuarterProbe {
    let w = [x, y, 1.0 / x, 1.0 / y];
    let n = m_max + 2;
    let idx = |a: usize, b: usize| a * n + b;
    let mut cur = vec![[0.0f64; 4]; n * n];
    cur[idx(1, 0)][0] = w[0];
    cur[idx(0, 1)][1] = w[1];
    let ninf = vec![f64::NEG_INFINITY; m_max + 1];
    let mut probe = QuarterProbe { ln_p: ninf.clone(), ln_px: ninf.clone(), ln_py: ninf.clone(), ln_po: ninf };
    let mask: [[f64; 4]; 4] = std::array::from_fn(|j| std::array::from_fn(|i| rule.get(i, j) as u8 as f64));
    let mut ln_scale = 0.0f64;
    for m in 1..=m_max {
        let (mut p, mut px, mut py) = (0.0, 0.0, 0.0);
        for a in 0..=m {
            for b in 0..=(m - a) {
                let s: f64 = cur[idx(a, b)].iter().sum();
                p += s;
                if b == 0 {
                    px += s;
                }
                if a == 0 {
                    py += s;
                }
            }
        }
        let po: f64 = cur[idx(0, 0)].iter().sum();
        probe.ln_p[m] = p.ln() + ln_scale;
        probe.ln_px[m] = px.ln() + ln_scale;
        probe.ln_py[m] = py.ln() + ln_scale;
        probe.ln_po[m] = po.ln() + ln_scale;
        if p == 0.0 || m == m_max {
            break;
        }
        ln_scale += p.ln();
        let mut next = vec![[0.0f64; 4]; n * n];
        for a in 0..=m + 1 {
            for b in 0..=(m + 1 - a) {
                let mut cell = [0.0f64; 4];
                for j in 0..4 {
                    let (da, db) = DIRS[j].delta();
                    let (sa, sb) = (a as i64 - da as i64, b as i64 - db as i64);
                    if sa < 0 || sb < 0 || sa as usize + sb as usize > m {
                        continue;
                    }
                    let src = &cur[idx(sa as usize, sb as usize)];
                    let s: f64 = (0..4).map(|i| mask[j][i] * src[i]).sum();
                    cell[j] = w[j] * s / p;
                }
                next[idx(a, b)] = cell;
            }
        }
        cur = next;
    }
    probe
}

/// The Mersenne prime `2^31 - 1`.
pub const P31: u64 = (1 << 31) - 1;

#[inline]
fn fold31(s: u64) -> u32 {
    let r = (s & P31) + (s >> 31);
    let r = (r & P31) + (r >> 31);
    (if r >= P31 { r - P31 } else { r }) as u32
}

/// Quarter-plane totals `p_m mod 2^31 - 1` for `m = 0..=m_max` (entry 0 is 0).
pub fn quarter_totals_mod(rule: Rule, m_max: usize) -> Vec<u64> {
    let n = m_max + 2;
    let idx = |a: usize, b: usize| a * n + b;
    let mut out = vec![0u64; m_max + 1];
    if m_max == 0 {
        return out;
    }
    let mut cur = vec![[0u32; 4]; n * n];
    let mut next = vec![[0u32; 4]; n * n];
    cur[idx(1, 0)][0] = 1;
    cur[idx(0, 1)][1] = 1;
    let mask: [[u64; 4]; 4] = std::array::from_fn(|j| std::array::from_fn(|i| rule.get(i, j) as u64));
    for m in 1..=m_max {
        let mut tot = 0u64;
        for a in 0..=m {
            // Endpoints satisfy a + b <= m and a + b = m mod 2.
            let mut b = (m - a) % 2;
            while b <= m - a {
                let c = &cur[idx(a, b)];
                tot += c[0] as u64 + c[1] as u64 + c[2] as u64 + c[3] as u64;
                b += 2;
            }
            tot = fold31(tot) as u64;
        }
        out[m] = tot;
        if m == m_max {
            break;
        }
        let m1 = m + 1;
        let dot = |mk: &[u64; 4], s: &[u32; 4]| fold31(mk[0] * s[0] as u64 + mk[1] * s[1] as u64 + mk[2] * s[2] as u64 + mk[3] * s[3] as u64);
        for a in 0..=m1 {
            let row = &cur[a * n..(a + 1) * n];
            let below = if a >= 1 { Some(&cur[(a - 1) * n..a * n]) } else { None };
            let above = &cur[(a + 1) * n..(a + 2) * n];
            let out_row = &mut next[a * n..(a + 1) * n];
            let mut b = (m1 - a) % 2;
            while b <= m1 - a {
                let inner = a + b < m1;
                let e = below.map_or(0, |r| dot(&mask[0], &r[b]));
                let nn = if b >= 1 { dot(&mask[1], &row[b - 1]) } else { 0 };
                let (w, s) = if inner { (dot(&mask[2], &above[b]), dot(&mask[3], &row[b + 1])) } else { (0, 0) };
                out_row[b] = [e, nn, w, s];
                b += 2;
            }
        }
        // Cells of the old parity class are overwritten two layers later.
        std::mem::swap(&mut cur, &mut next);
    }
    out
}

/// Exact quarter-plane totals for `m = 0..=m_max`, keeping only two layers.
pub fn quarter_totals_exact(rule: Rule, m_max: usize) -> Vec<BigUint> {
    let n = m_max + 2;
    let idx = |a: usize, b: usize| a * n + b;
    let mut out = vec![BigUint::zero(); m_max + 1];
    if m_max == 0 {
        return out;
    }
    let mut cur: Vec<[BigUint; 4]> = vec![zero4(); n * n];
    cur[idx(1, 0)][0] = BigUint::one();
    cur[idx(0, 1)][1] = BigUint::one();
    for m in 1..=m_max {
        let mut tot = BigUint::zero();
        for a in 0..=m {
            for b in (((m - a) % 2)..=(m - a)).step_by(2) {
                for v in &cur[idx(a, b)] {
                    tot += v;
                }
            }
        }
        out[m] = tot;
        if m == m_max {
            break;
        }
        let mut next: Vec<[BigUint; 4]> = vec![zero4(); n * n];
        for a in 0..=m {
            for b in (((m - a) % 2)..=(m - a)).step_by(2) {
                let c = &cur[idx(a, b)];
                for j in 0..4 {
                    let (da, db) = DIRS[j].delta();
                    let (na, nb) = (a as i64 + da as i64, b as i64 + db as i64);
                    if na < 0 || nb < 0 {
                        continue;
                    }
                    let mut s = BigUint::zero();
                    for i in 0..4 {
                        if rule.get(i, j) {
                            s += &c[i];
                        }
                    }
                    if !s.is_zero() {
                        next[idx(na as usize, nb as usize)][j] += s;
                    }
                }
            }
        }
        cur = next;
    }
    out
}

/// Half-plane totals for `m = 0..=m_max`; heights only, two layers.
pub fn half_totals_exact(rule: Rule, m_max: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); m_max + 1];
    if m_max == 0 {
        return out;
    }
    let mut cur: Vec<[BigUint; 4]> = vec![zero4(); m_max + 2];
    for d in Plane::Half.first_steps() {
        cur[d.delta().1 as usize][d.index()] = BigUint::one();
    }
    for m in 1..=m_max {
        out[m] = cur.iter().flatten().sum();
        if m == m_max {
            break;
        }
        let mut next: Vec<[BigUint; 4]> = vec![zero4(); m_max + 2];
        for b in 0..=m {
            for j in 0..4 {
                let nb = b as i64 + DIRS[j].delta().1 as i64;
                if nb < 0 {
                    continue;
                }
                for i in 0..4 {
                    if rule.get(i, j) && !cur[b][i].is_zero() {
                        next[nb as usize][j] += &cur[b][i];
                    }
                }
            }
        }
        cur = next;
    }
    out
}

/// Totals `p_m` for `m = 0..=m_max` (entry 0 is 0) in any plane.
pub fn totals_exact(rule: Rule, plane: Plane, m_max: usize) -> Vec<BigUint> {
    match plane {
        Plane::Full => {
            let mut out = vec![BigUint::zero(); m_max + 1];
            let mut c: [BigUint; 4] = std::array::from_fn(|_| BigUint::one());
            for m in 1..=m_max {
                if m > 1 {
                    let mut n = zero4();
                    for i in 0..4 {
                        for j in rule.successors(i) {
                            n[j] += &c[i];
                        }
                    }
                    c = n;
                }
                out[m] = c.iter().sum();
            }
            out
        }
        Plane::Half => half_totals_exact(rule, m_max),
        Plane::Quarter => quarter_totals_exact(rule, m_max),
    }
}

/// Least-squares slope and intercept of `ys` against `xs`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = xs.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Least-squares fit of `v_m = sum_{k <= degree} c_k m^-k`; returns `c`.
pub fn inverse_power_fit(ms: &[usize], v: &[f64], degree: usize) -> Vec<f64> {
    let n = degree + 1;
    let mut a = vec![vec![0.0; n + 1]; n];
    for (&m, &y) in ms.iter().zip(v) {
        let r: Vec<f64> = (0..n).map(|k| (m as f64).powi(-(k as i32))).collect();
        for i in 0..n {
            for j in 0..n {
                a[i][j] += r[i] * r[j];
            }
            a[i][n] += r[i] * y;
        }
    }
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..=n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    (0..n).map(|i| a[i][n] / a[i][i]).collect()
}

#[derive(Clone, Debug)]
pub struct ScalingFit {
    /// Exponent g in `Theta_m ~ c m^g growth^m`.
    pub count_exponent: f64,
    /// Exponent h in `E_m(y) ~ c m^h`.
    pub mean_y_exponent: f64,
}

/// Log-log fits over the grid `ms` of the subexponential factor of the
/// half-plane partition function and of the mean height.
pub fn scaling_probe(probe: &HalfProbe, ms: &[usize], ln_growth: f64) -> ScalingFit {
    let lx: Vec<f64> = ms.iter().map(|&m| (m as f64).ln()).collect();
    let lc: Vec<f64> = ms.iter().map(|&m| probe.ln_total[m] - m as f64 * ln_growth).collect();
    let ly: Vec<f64> = ms.iter().map(|&m| probe.mean_y[m].max(f64::MIN_POSITIVE).ln()).collect();
    ScalingFit { count_exponent: linear_fit(&lx, &lc).0, mean_y_exponent: linear_fit(&lx, &ly).0 }
}

/// `f64` value of a big count.
pub fn to_f64(n: &BigUint) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(k: u64) -> BigUint {
        BigUint::from(k)
    }

    #[test]
    fn totals_match_enumeration() {
        for r in [Rule::spiral(), Rule::ALL, Rule::decode("0110.1001.1111.1111").unwrap()] {
            for plane in [Plane::Full, Plane::Half, Plane::Quarter] {
                let e = Enumeration::run(r, plane, 9);
                let t = totals_exact(r, plane, 9);
                assert_eq!(t[0], n(0));
                for m in 1..=9 {
                    assert_eq!(t[m], e.total(m), "{r} {plane} {m}");
                }
            }
        }
    }

    #[test]
    fn inverse_power_fit_recovers_coefficients() {
        let ms: Vec<usize> = (50..200).collect();
        let v: Vec<f64> = ms.iter().map(|&m| 2.0 - 3.0 / m as f64 + 5.0 / (m * m) as f64).collect();
        let c = inverse_power_fit(&ms, &v, 3);
        assert!((c[0] - 2.0).abs() < 1e-9 && (c[1] + 3.0).abs() < 1e-6 && (c[2] - 5.0).abs() < 1e-3, "{c:?}");
    }

    #[test]
    fn spiral_full_plane() {
        let e = Enumeration::run(Rule::spiral(), Plane::Full, 6);
        let p: Vec<BigUint> = (1..=4).map(|m| e.total(m)).collect();
        assert_eq!(p, vec![n(4), n(8), n(16), n(32)]);
        for m in 1..=6 {
            assert_eq!(e.counts(m), Rule::spiral().transfer_counts(m));
        }
    }

    #[test]
    fn spiral_quarter_plane_e() {
        let e = Enumeration::run(Rule::spiral(), Plane::Quarter, 6);
        let s = e.series(Dir::E);
        assert_eq!(s.coeff(1).to_string(), "x");
        assert_eq!(s.coeff(2).to_string(), "x^2");
        assert_eq!(s.coeff(5).to_string(), "x^5 + x");
        assert_eq!(s.coeff(6).to_string(), "x^6 + 2*x^2 + x*y");
    }

    #[test]
    fn first_steps() {
        assert_eq!(Plane::Full.first_steps().len(), 4);
        assert_eq!(Plane::Half.first_steps(), vec![Dir::E, Dir::N, Dir::W]);
        assert_eq!(Plane::Quarter.first_steps(), vec![Dir::E, Dir::N]);
    }

    #[test]
    fn full_plane_expectation_recursion() {
        let half = BigRational::new(1.into(), 2.into());
        let three = BigRational::from_integer(3.into());
        for r in [Rule::spiral(), Rule::ALL, Rule(0x5a3c)] {
            let en = Enumeration::run(r, Plane::Full, 7);
            for th in [None, Some(Dir::N)] {
                let a = en.weighted_stats(7, &half, &three, th);
                let b = endpoint_expectation(r, Plane::Full, 7, &half, &three, th);
                assert_eq!(a, b);
            }
        }
        let one = BigRational::one();
        let s = endpoint_expectation(Rule::spiral(), Plane::Full, 9, &one, &one, None).unwrap();
        assert!(s.mean_x.is_zero() && s.mean_y.is_zero());
    }

    #[test]
    fn float_and_modular_agree_with_exact() {
        let r = Rule::decode("1110.0111.1011.1101").unwrap();
        let exact = quarter_totals_exact(r, 40);
        let modp = quarter_totals_mod(r, 40);
        let fl = quarter_plane_float(r, 1.0, 1.0, 40);
        let en = Enumeration::run(r, Plane::Quarter, 12);
        for m in 1..=40 {
            assert_eq!(BigUint::from(modp[m]), &exact[m] % BigUint::from(P31));
            let rel = (fl.ln_p[m] - to_f64(&exact[m]).ln()).abs();
            assert!(rel < 1e-12, "m={m}");
            if m <= 12 {
                assert_eq!(exact[m], en.total(m));
                let row = en.row(m);
                assert!((fl.ln_px[m] - to_f64(&row.px).ln()).abs() < 1e-12 || row.px.is_zero());
            }
        }
        let hp = half_plane_float(r, 1.0, 1.0, 12);
        let eh = Enumeration::run(r, Plane::Half, 12);
        for m in 1..=12 {
            assert!((hp.ln_total[m] - to_f64(&eh.total(m)).ln()).abs() < 1e-12);
        }
    }
}
