//! Growth rates, drifts and half-plane regimes for aperiodic rules.
//!
//! Numerics are plain `f64`. The weighted transfer matrix is
//! `M[i][j] = T[i][j] * w_j` with `w = (x, y, 1/x, 1/y)`, so that the row
//! vector of weighted counts obeys `c_m = c_{m-1} M`.

use crate::classify::{is_aperiodic, is_vertically_unbounded};
use crate::genfun::{build_blocks, kernel_quadratic, BlockSet};
use crate::rule::{Dir, Rule, DIRS};
use num_rational::BigRational;
use twostep_algebra::gcd::gcd;
use twostep_algebra::ratfunc::eval_zpoly_f64;
use twostep_algebra::{RatFunc, ZPoly, T, X, Y};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AsymptoticsError {
    #[error("rule {0} is periodic: the dominant eigenvalue is not unique in modulus")]
    NotAperiodic(Rule),
    #[error("rule {0} is not vertically unbounded")]
    NotVerticallyUnbounded(Rule),
    #[error("weights must be positive and finite")]
    BadWeights,
    #[error("eigenvector residual {0:e} exceeds tolerance")]
    Residual(f64),
    #[error("no root of B = 1 found below t = {0}")]
    NoRoot(f64),
    #[error("vertical drift does not change sign on [1e-6, 1e6]")]
    Bisection,
}

type Result<T> = std::result::Result<T, AsymptoticsError>;

pub type Mat4 = [[f64; 4]; 4];

pub fn step_weights_f64(x: f64, y: f64) -> [f64; 4] {
    [x, y, 1.0 / x, 1.0 / y]
}

pub fn weighted_matrix(rule: Rule, x: f64, y: f64) -> Mat4 {
    let w = step_weights_f64(x, y);
    std::array::from_fn(|i| std::array::from_fn(|j| if rule.get(i, j) { w[j] } else { 0.0 }))
}

fn mat_vec(m: &Mat4, v: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| (0..4).map(|j| m[i][j] * v[j]).sum())
}

fn transpose(m: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i]))
}

fn normalize(v: &mut [f64; 4]) -> f64 {
    let s: f64 = v.iter().sum();
    for e in v.iter_mut() {
        *e /= s;
    }
    s
}

/// Coefficients `c0..c4` of `det(lambda I - M)`, lowest degree first
/// (Faddeev-LeVerrier).
pub fn char_poly(m: &Mat4) -> [f64; 5] {
    let mut c = [0.0; 5];
    c[4] = 1.0;
    let mut mk = [[0.0; 4]; 4];
    for k in 1..=4 {
        let mut next = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                next[i][j] = (0..4).map(|l| m[i][l] * mk[l][j]).sum::<f64>() + if i == j { c[5 - k] } else { 0.0 };
            }
        }
        mk = next;
        let tr: f64 = (0..4).map(|i| (0..4).map(|l| m[i][l] * mk[l][i]).sum::<f64>()).sum();
        c[4 - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

fn horner_d(c: &[f64], t: f64) -> f64 {
    c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, &a)| acc * t + k as f64 * a)
}

/// Bisection on a sign change of `f` in `[lo, hi]`, down to adjacent floats.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Largest real root of the characteristic polynomial, scanning down from
/// the max row sum.
fn largest_real_root(m: &Mat4) -> Option<f64> {
    let c = char_poly(m);
    let bound = m.iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max) * (1.0 + 1e-9) + 1e-12;
    let steps = 4096;
    let mut hi = bound;
    let mut fhi = horner(&c, hi);
    for k in (0..steps).rev() {
        let lo = bound * k as f64 / steps as f64;
        let flo = horner(&c, lo);
        if flo == 0.0 {
            return Some(lo);
        }
        if (flo > 0.0) != (fhi > 0.0) {
            return Some(bisect(|t| horner(&c, t), lo, hi));
        }
        hi = lo;
        fhi = flo;
    }
    None
}

/// Spectral radius of the weighted matrix; defined for every rule.
pub fn spectral_radius(rule: Rule, x: f64, y: f64) -> f64 {
    let m = weighted_matrix(rule, x, y);
    if let Some(r) = largest_real_root(&m) {
        return r;
    }
    // Tangential root: M + I has the same dominant eigenvector and is aperiodic
    // on every irreducible block.
    let mut v = [1.0; 4];
    let mut mu = 0.0;
    for _ in 0..20000 {
        let mut w = mat_vec(&m, &v);
        for k in 0..4 {
            w[k] += v[k];
        }
        mu = normalize(&mut w) / v.iter().sum::<f64>() - 1.0;
        v = w;
    }
    mu
}

fn solve4(a: &Mat4, b: &[f64; 4]) -> Option<[f64; 4]> {
    let mut m = *a;
    let mut r = *b;
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col] == 0.0 {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for i in col + 1..4 {
            let f = m[i][col] / m[col][col];
            for j in col..4 {
                m[i][j] -= f * m[col][j];
            }
            r[i] -= f * r[col];
        }
    }
    let mut x = [0.0; 4];
    for i in (0..4).rev() {
        let s: f64 = (i + 1..4).map(|j| m[i][j] * x[j]).sum();
        x[i] = (r[i] - s) / m[i][i];
    }
    Some(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerronMethod {
    PowerIteration,
    CharPoly,
}

/// Dominant eigen-data of the weighted matrix.
#[derive(Clone, Debug)]
pub struct PerronData {
    pub x: f64,
    pub y: f64,
    pub mu: f64,
    /// `M v = mu v`, normalized to sum 1.
    pub right: [f64; 4],
    /// `u M = mu u`, normalized so that `u . v = 1`.
    pub left: [f64; 4],
    pub residual: f64,
    pub method: PerronMethod,
}

impl PerronData {
    pub fn rho(&self) -> f64 {
        1.0 / self.mu
    }

    /// `K_j` in `Theta_m ~ K_j mu^m` for walks ending with step `j`.
    pub fn dir_prefactor(&self, j: usize) -> f64 {
        let c1 = step_weights_f64(self.x, self.y);
        let cv: f64 = (0..4).map(|k| c1[k] * self.right[k]).sum();
        cv * self.left[j] / self.mu
    }

    /// `(d/dx log mu, d/dy log mu)` from `u M_x v / mu` and `u M_y v / mu`.
    pub fn log_gradient(&self, rule: Rule) -> (f64, f64) {
        let (x, y) = (self.x, self.y);
        let gx = [1.0, 0.0, -1.0 / (x * x), 0.0];
        let gy = [0.0, 1.0, 0.0, -1.0 / (y * y)];
        let form = |g: &[f64; 4]| -> f64 {
            let mut s = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    if rule.get(i, j) {
                        s += self.left[i] * g[j] * self.right[j];
                    }
                }
            }
            s / self.mu
        };
        (form(&gx), form(&gy))
    }

    /// `K` in `P_m ~ K mu^m`; at `x = y = 1` this is `|v|_1 |u|_1 / mu`.
    pub fn prefactor(&self) -> f64 {
        (0..4).map(|j| self.dir_prefactor(j)).sum()
    }
}

fn residual(m: &Mat4, v: &[f64; 4], mu: f64) -> f64 {
    let mv = mat_vec(m, v);
    (0..4).map(|k| (mv[k] - mu * v[k]).abs()).fold(0.0, f64::max)
}

fn power_iteration(m: &Mat4) -> Option<(f64, [f64; 4])> {
    let mut v = [0.25; 4];
    for _ in 0..5000 {
        let mut w = mat_vec(m, &v);
        let mu = normalize(&mut w);
        v = w;
        if residual(m, &v, mu) <= 1e-14 * mu * v.iter().cloned().fold(0.0, f64::max) {
            return Some((mu, v));
        }
    }
    None
}

fn inverse_iteration(m: &Mat4, mu: f64) -> Option<[f64; 4]> {
    let s = mu * (1.0 + 1e-11);
    let shifted: Mat4 = std::array::from_fn(|i| std::array::from_fn(|j| m[i][j] - if i == j { s } else { 0.0 }));
    let mut v = [0.25; 4];
    for _ in 0..4 {
        let mut w = solve4(&shifted, &v)?;
        let sign = w.iter().sum::<f64>().signum();
        for e in w.iter_mut() {
            *e *= sign;
        }
        normalize(&mut w);
        v = w;
    }
    Some(v)
}

fn dominant(m: &Mat4) -> Option<(f64, [f64; 4], PerronMethod)> {
    if let Some((mu, v)) = power_iteration(m) {
        return Some((mu, v, PerronMethod::PowerIteration));
    }
    let mut mu = largest_real_root(m)?;
    let c = char_poly(m);
    for _ in 0..3 {
        let d = horner_d(&c, mu);
        if d != 0.0 {
            mu -= horner(&c, mu) / d;
        }
    }
    let v = inverse_iteration(m, mu)?;
    let mv = mat_vec(m, &v);
    let mu = mv.iter().sum::<f64>() / v.iter().sum::<f64>();
    Some((mu, v, PerronMethod::CharPoly))
}

fn check_weights(x: f64, y: f64) -> Result<()> {
    if x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite() {
        Ok(())
    } else {
        Err(AsymptoticsError::BadWeights)
    }
}

pub fn perron(rule: Rule, x: f64, y: f64) -> Result<PerronData> {
    check_weights(x, y)?;
    if !is_aperiodic(rule) {
        return Err(AsymptoticsError::NotAperiodic(rule));
    }
    let m = weighted_matrix(rule, x, y);
    let (mu, right, m1) = dominant(&m).ok_or(AsymptoticsError::Residual(f64::NAN))?;
    let (_, mut left, m2) = dominant(&transpose(&m)).ok_or(AsymptoticsError::Residual(f64::NAN))?;
    let uv: f64 = (0..4).map(|k| left[k] * right[k]).sum();
    for e in left.iter_mut() {
        *e /= uv;
    }
    let res = residual(&m, &right, mu).max(residual(&transpose(&m), &left, mu) / left.iter().cloned().fold(0.0, f64::max));
    if !(res <= 1e-12 * mu) {
        return Err(AsymptoticsError::Residual(res));
    }
    let method = if m1 == PerronMethod::CharPoly || m2 == PerronMethod::CharPoly { PerronMethod::CharPoly } else { PerronMethod::PowerIteration };
    Ok(PerronData { x, y, mu, right, left, residual: res, method })
}

/// A rational function evaluated at `(t, x, y)`.
fn ev(f: &RatFunc, t: f64, x: f64, y: f64) -> f64 {
    f.eval_f64([t, x, y])
}

/// `B_theta` with the derivatives the asymptotic formulas need.
#[derive(Clone, Debug)]
struct Derivs {
    /// `den(B) - num(B)` by powers of t.
    kernel_t: Vec<ZPoly>,
    b: RatFunc,
    bt: RatFunc,
    bx: RatFunc,
    by: RatFunc,
    byy: RatFunc,
    btx: RatFunc,
    bty: RatFunc,
    a: RatFunc,
    ax: RatFunc,
    ay: RatFunc,
    c: RatFunc,
    d: RatFunc,
    /// `C / D` and its y-derivative.
    r: Option<(RatFunc, RatFunc)>,
    /// `D / (1 - B)`, reduced so that common poles cancel.
    d_over_kernel: Option<RatFunc>,
}

impl Derivs {
    fn new(blocks: &BlockSet, theta: Dir) -> Derivs {
        let tb = blocks.of(theta);
        let b = tb.b.clone();
        let bt = b.diff(T);
        let by = b.diff(Y);
        let r = tb.c.div(&tb.d).ok().map(|r| {
            let ry = r.diff(Y);
            (r, ry)
        });
        let d_over_kernel = tb.d.div(&RatFunc::one().sub(&b)).ok();
        Derivs {
            d_over_kernel,
            kernel_t: b.den().sub(b.num()).coeffs_in(T),
            bx: b.diff(X),
            byy: by.diff(Y),
            btx: bt.diff(X),
            bty: bt.diff(Y),
            ax: tb.a.diff(X),
            ay: tb.a.diff(Y),
            a: tb.a.clone(),
            c: tb.c.clone(),
            d: tb.d.clone(),
            b,
            bt,
            by,
            r,
        }
    }

    fn kernel_coeffs(&self, x: f64, y: f64) -> Vec<f64> {
        self.kernel_t.iter().map(|p| eval_zpoly_f64(p, [0.0, x, y])).collect()
    }

    /// Smallest positive root of `B(t) = 1`, searched on `(0, 2 hint]`.
    fn rho(&self, x: f64, y: f64, hint: f64) -> Result<f64> {
        let k = self.kernel_coeffs(x, y);
        let steps = 4000;
        let top = 2.0 * hint;
        let mut lo = 0.0;
        let mut flo = horner(&k, 0.0);
        for s in 1..=steps {
            let hi = top * s as f64 / steps as f64;
            let fhi = horner(&k, hi);
            if fhi == 0.0 {
                return Ok(hi);
            }
            if (fhi > 0.0) != (flo > 0.0) {
                let mut t = bisect(|t| horner(&k, t), lo, hi);
                let d = horner_d(&k, t);
                if d != 0.0 {
                    let step = horner(&k, t) / d;
                    if step.abs() < (hi - lo) {
                        t -= step;
                    }
                }
                return Ok(t);
            }
            lo = hi;
            flo = fhi;
        }
        Err(AsymptoticsError::NoRoot(top))
    }
}

/// Drifts `delta_x = d/dx log mu`, `delta_y = d/dy log mu`, computed from
/// the derivatives of `B_e` at `rho` and by central differences of `log mu`.
#[derive(Clone, Debug)]
pub struct DriftData {
    pub x: f64,
    pub y: f64,
    pub mu: f64,
    pub rho: f64,
    pub delta_x: f64,
    pub delta_y: f64,
    pub fd_delta_x: f64,
    pub fd_delta_y: f64,
    /// Largest difference between the two methods.
    pub method_agreement: f64,
}

impl DriftData {
    /// Mean displacement per step, `(x delta_x, y delta_y)`; this is the
    /// limit of `E_m / m`.
    pub fn step_mean(&self) -> (f64, f64) {
        (self.x * self.delta_x, self.y * self.delta_y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Positive,
    Zero,
    Negative,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Positive => "positive",
            Regime::Zero => "zero",
            Regime::Negative => "negative",
        }
    }

    /// Exponent `g` of `m^g` in the half-plane counts.
    pub fn exponent(self) -> f64 {
        match self {
            Regime::Positive => 0.0,
            Regime::Zero => -0.5,
            Regime::Negative => -1.5,
        }
    }
}

pub const ZERO_DRIFT_TOL: f64 = 1e-8;

/// Half-plane asymptotics at `(x, y)`:
/// `Theta+_m ~ amplitude[theta] * m^exponent * growth^m`.
#[derive(Clone, Debug)]
pub struct HalfPlaneRegime {
    pub x: f64,
    pub y: f64,
    pub tau: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub delta_y: f64,
    pub regime: Regime,
    /// `c+`, `c0` or `c-` for each final step.
    pub constants: [f64; 4],
    /// Sum of `constants`.
    pub prefactor: f64,
    pub amplitude: [f64; 4],
    pub growth: f64,
}

impl HalfPlaneRegime {
    pub fn exponent(&self) -> f64 {
        self.regime.exponent()
    }

    pub fn total_amplitude(&self) -> f64 {
        self.amplitude.iter().sum()
    }
}

/// Blocks and derivatives for one rule, reusable across weight points.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub rule: Rule,
    pub blocks: BlockSet,
    derivs: Vec<Derivs>,
}

impl Analysis {
    pub fn new(rule: Rule) -> Result<Analysis> {
        if !is_aperiodic(rule) {
            return Err(AsymptoticsError::NotAperiodic(rule));
        }
        let blocks = build_blocks(rule);
        let derivs = DIRS.iter().map(|&d| Derivs::new(&blocks, d)).collect();
        Ok(Analysis { rule, blocks, derivs })
    }

    fn dv(&self, theta: Dir) -> &Derivs {
        &self.derivs[theta.index()]
    }

    pub fn perron(&self, x: f64, y: f64) -> Result<PerronData> {
        perron(self.rule, x, y)
    }

    /// Smallest positive root of `B_theta(t; x, y) = 1`.
    pub fn rho_theta(&self, theta: Dir, x: f64, y: f64) -> Result<f64> {
        check_weights(x, y)?;
        let hint = self.perron(x, y)?.rho();
        self.dv(theta).rho(x, y, hint)
    }

    pub fn rho(&self, x: f64, y: f64) -> Result<f64> {
        self.rho_theta(Dir::E, x, y)
    }

    fn ln_mu(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.perron(x, y)?.mu.ln())
    }

    /// `(delta_x, delta_y)` from `B_theta` at `rho`.
    pub fn drift_symbolic(&self, theta: Dir, x: f64, y: f64) -> Result<(f64, f64, f64)> {
        let rho = self.rho_theta(theta, x, y)?;
        let d = self.dv(theta);
        let bt = ev(&d.bt, rho, x, y);
        Ok((ev(&d.bx, rho, x, y) / (rho * bt), ev(&d.by, rho, x, y) / (rho * bt), rho))
    }

    pub fn drift(&self, x: f64, y: f64) -> Result<DriftData> {
        let p = self.perron(x, y)?;
        let (delta_x, delta_y, rho) = self.drift_symbolic(Dir::E, x, y)?;
        let (hx, hy) = (1e-5 * x, 1e-5 * y);
        let fd_delta_x = (self.ln_mu(x + hx, y)? - self.ln_mu(x - hx, y)?) / (2.0 * hx);
        let fd_delta_y = (self.ln_mu(x, y + hy)? - self.ln_mu(x, y - hy)?) / (2.0 * hy);
        let method_agreement = (delta_x - fd_delta_x).abs().max((delta_y - fd_delta_y).abs());
        Ok(DriftData { x, y, mu: p.mu, rho, delta_x, delta_y, fd_delta_x, fd_delta_y, method_agreement })
    }

    /// Limits of `E_m(x)` and `E_m(y)` for walks ending with each step, in
    /// the full plane when the corresponding drift vanishes.
    pub fn zero_drift_offsets(&self, x: f64, y: f64) -> Result<([f64; 4], [f64; 4])> {
        let mut ox = [0.0; 4];
        let mut oy = [0.0; 4];
        for th in DIRS {
            let rho = self.rho_theta(th, x, y)?;
            let d = self.dv(th);
            let bt = ev(&d.bt, rho, x, y);
            let a = ev(&d.a, rho, x, y);
            ox[th.index()] = x * (-ev(&d.btx, rho, x, y) / bt + ev(&d.ax, rho, x, y) / a);
            oy[th.index()] = y * (-ev(&d.bty, rho, x, y) / bt + ev(&d.ay, rho, x, y) / a);
        }
        Ok((ox, oy))
    }

    /// `K_theta` in `Theta_m ~ K_theta mu^m` from `mu A(rho) / B_t(rho)`.
    pub fn full_plane_dir_prefactor(&self, theta: Dir, x: f64, y: f64) -> Result<f64> {
        let rho = self.rho_theta(theta, x, y)?;
        let d = self.dv(theta);
        Ok(ev(&d.a, rho, x, y) / (rho * ev(&d.bt, rho, x, y)))
    }

    /// `tau(x)`: the minimizer of `mu(x, .)`, by bisection in `ln y` on the
    /// sign of `d/dy log mu`.
    pub fn tau(&self, x: f64) -> Result<f64> {
        if !is_vertically_unbounded(self.rule) {
            return Err(AsymptoticsError::NotVerticallyUnbounded(self.rule));
        }
        let f = |ly: f64| self.perron(x, ly.exp()).map(|p| p.log_gradient(self.rule).1);
        let (lo, hi) = (1e-6f64.ln(), 1e6f64.ln());
        let (flo, fhi) = (f(lo)?, f(hi)?);
        if !(flo < 0.0 && fhi > 0.0) {
            return Err(AsymptoticsError::Bisection);
        }
        let (mut lo, mut hi) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = f(mid)?;
            if fm == 0.0 {
                return Ok(mid.exp());
            }
            if fm < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((0.5 * (lo + hi)).exp())
    }

    /// `sqrt(2 / (kappa mu_yy(x, tau)))`, the coefficient of
    /// `sqrt(1 - t/kappa)` in `tau - upsilon-(t)`, with
    /// `mu_yy = B_yy / (B_t kappa^2)` at `(kappa, x, tau)`.
    fn root_scale(&self, theta: Dir, x: f64, tau: f64, kappa: f64) -> f64 {
        let d = self.dv(theta);
        let byy = ev(&d.byy, kappa, x, tau);
        let bt = ev(&d.bt, kappa, x, tau);
        (2.0 * bt * kappa / byy).sqrt()
    }

    /// The small kernel root `upsilon-(t)` on the real line.
    fn small_root(&self, theta: Dir, t: f64, x: f64) -> Option<f64> {
        let [q0, q1, q2] = kernel_quadratic(&self.dv(theta).b).ok()?;
        let at = |p: &ZPoly| eval_zpoly_f64(p, [t, x, 0.0]);
        let (a, b, c) = (at(&q2), at(&q1), at(&q0));
        let disc = (b * b - 4.0 * a * c).max(0.0);
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        let (r1, r2) = (q / a, c / q);
        Some(r1.min(r2))
    }

    pub fn half_plane_regime(&self, x: f64, y: f64) -> Result<HalfPlaneRegime> {
        check_weights(x, y)?;
        let tau = self.tau(x)?;
        let kappa = self.rho(x, tau)?;
        let lambda = 1.0 / kappa;
        let p = self.perron(x, y)?;
        let delta_y = p.log_gradient(self.rule).1;
        let rho = p.rho();
        let regime = if delta_y.abs() < ZERO_DRIFT_TOL {
            Regime::Zero
        } else if delta_y > 0.0 {
            Regime::Positive
        } else {
            Regime::Negative
        };
        let mut constants = [f64::NAN; 4];
        let mut amplitude = [f64::NAN; 4];
        let rpi = std::f64::consts::PI.sqrt();
        for th in DIRS {
            let d = self.dv(th);
            let Some((r, ry)) = &d.r else { continue };
            let k = th.index();
            match regime {
                Regime::Positive => {
                    let rho = self.rho_theta(th, x, y)?;
                    let Some(v) = self.small_root(th, rho, x) else { continue };
                    let h_star = ev(r, rho, x, v);
                    let num = ev(&d.c, rho, x, y) - ev(&d.d, rho, x, y) * h_star;
                    constants[k] = num / (rho * ev(&d.bt, rho, x, y));
                    amplitude[k] = constants[k];
                }
                Regime::Zero => {
                    let s = self.root_scale(th, x, tau, kappa);
                    let dry = ev(&d.d, kappa, x, tau) * ev(ry, kappa, x, tau);
                    constants[k] = s / (kappa * ev(&d.bt, kappa, x, tau)) * dry;
                    amplitude[k] = constants[k] / rpi;
                }
                Regime::Negative => {
                    let Some(dk) = &d.d_over_kernel else { continue };
                    let s = self.root_scale(th, x, tau, kappa);
                    constants[k] = s * ev(dk, kappa, x, y) * ev(ry, kappa, x, tau);
                    amplitude[k] = -constants[k] / (2.0 * rpi);
                }
            }
        }
        let growth = match regime {
            Regime::Positive => 1.0 / rho,
            _ => lambda,
        };
        Ok(HalfPlaneRegime { x, y, tau, kappa, lambda, delta_y, regime, prefactor: constants.iter().sum(), constants, amplitude, growth })
    }

    /// Exact check at rational `(x, y)` that `B_y` vanishes at the root
    /// `rho` of `B = 1`: the t-numerators of `1 - B` and `B_y` share a
    /// factor with a root at `rho`.
    pub fn confirm_zero_drift(&self, x: &BigRational, y: &BigRational) -> Result<bool> {
        let (xf, yf) = (rat_f64(x), rat_f64(y));
        let rho = self.rho(xf, yf)?;
        let d = self.dv(Dir::E);
        let (xr, yr) = (RatFunc::from_rational(x), RatFunc::from_rational(y));
        let vals = [None, Some(&xr), Some(&yr)];
        let k = RatFunc::one().sub(&d.b).subst(vals);
        let by = d.by.subst(vals);
        if by.is_zero() {
            return Ok(true);
        }
        let g = gcd(k.num(), by.num());
        if g.degree(T) == 0 {
            return Ok(false);
        }
        let at = |t: f64| eval_zpoly_f64(&g, [t, 0.0, 0.0]);
        let scale: f64 = g.terms().iter().map(|(m, c)| num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN).abs() * rho.powi(m.exp(T) as i32)).sum();
        let (lo, hi) = (at(rho * (1.0 - 1e-9)), at(rho * (1.0 + 1e-9)));
        Ok(at(rho).abs() <= 1e-10 * scale || (lo > 0.0) != (hi > 0.0))
    }
}

pub fn rat_f64(q: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}

pub fn drift(rule: Rule, x: f64, y: f64) -> Result<DriftData> {
    check_weights(x, y)?;
    Analysis::new(rule)?.drift(x, y)
}

pub fn half_plane_regime(rule: Rule, x: f64, y: f64) -> Result<HalfPlaneRegime> {
    if !is_vertically_unbounded(rule) {
        return Err(AsymptoticsError::NotVerticallyUnbounded(rule));
    }
    Analysis::new(rule)?.half_plane_regime(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_and_spiral() {
        let p = perron(Rule::ALL, 1.0, 1.0).unwrap();
        assert!((p.mu - 4.0).abs() < 1e-12);
        assert!((p.prefactor() - 1.0).abs() < 1e-12);
        let p = perron(Rule::spiral(), 1.0, 1.0).unwrap();
        assert!((p.mu - 2.0).abs() < 1e-12);
        assert!((p.prefactor() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn periodic_rule_reports_radius_only() {
        let r: Rule = "0101.1000.0100.1010".parse().unwrap();
        assert!(matches!(perron(r, 1.0, 1.0), Err(AsymptoticsError::NotAperiodic(_))));
        assert!((spectral_radius(r, 1.0, 1.0) - 1.55377).abs() < 1e-5);
    }

    #[test]
    fn char_poly_of_all_ones() {
        let c = char_poly(&weighted_matrix(Rule::ALL, 1.0, 1.0));
        // lambda^4 - 4 lambda^3
        assert_eq!(c, [0.0, 0.0, 0.0, -4.0, 1.0]);
    }
}
