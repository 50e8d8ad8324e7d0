//! Guessing linear differential and algebraic equations for a power series
//! from its first coefficients.
//!
//! Each ansatz is a homogeneous linear system in the unknown coefficients.
//! It is solved modulo 62-bit primes; a system of full column rank modulo a
//! prime has only the trivial solution over Q, which rules the ansatz out.
//! Otherwise the kernel is lifted by CRT and rational reconstruction and the
//! relation is checked exactly against every supplied term, including a
//! held-out suffix that played no part in finding it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use twostep_algebra::linalg::left_nullspace;
use twostep_algebra::modp::{addmod, invmod, mulmod, primes, submod};
use twostep_algebra::{Mono, ZPoly, T};

pub const DEFAULT_HELDOUT: usize = 20;
pub const DEFAULT_ODE_BOUNDS: (usize, usize) = (8, 12);
pub const DEFAULT_ALG_BOUNDS: (usize, usize) = (6, 10);

/// Cap on the primes combined while reconstructing one kernel vector.
const MAX_PRIMES: usize = 200;
/// Extra equations beyond the unknown count used for the first rank test.
const SPARE_ROWS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GuessError {
    #[error("need at least {need} terms, got {have}")]
    InsufficientTerms { need: usize, have: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Algebraic,
    DFinite,
    None,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Algebraic => "algebraic",
            Kind::DFinite => "dfinite",
            Kind::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Modular rank test, CRT and rational reconstruction.
    Modular,
    /// Exact Gaussian elimination over Q.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    /// `sum_{k <= r} p_k(t) f^(k)(t) = 0`, `deg p_k <= d`.
    Ode { r: usize, d: usize },
    /// `sum_{j <= dq} c_j(t) f(t)^j = 0`, `deg c_j <= dt`.
    Alg { dq: usize, dt: usize },
}

impl Shape {
    fn dims(self) -> (usize, usize) {
        match self {
            Shape::Ode { r, d } => (r, d),
            Shape::Alg { dq, dt } => (dq, dt),
        }
    }

    fn unknowns(self) -> usize {
        let (a, b) = self.dims();
        (a + 1) * (b + 1)
    }

    /// Equations `[t^n]` available from `len` terms.
    fn equations(self, len: usize) -> usize {
        match self {
            Shape::Ode { r, .. } => len.saturating_sub(r),
            Shape::Alg { .. } => len,
        }
    }
}

/// Search order: fewest unknowns first, then the lower order (or Q-degree).
fn ansatz_grid(ode: bool, (amax, bmax): (usize, usize)) -> Vec<Shape> {
    let mut v: Vec<Shape> = (1..=amax)
        .flat_map(|a| {
            (0..=bmax).map(move |b| if ode { Shape::Ode { r: a, d: b } } else { Shape::Alg { dq: a, dt: b } })
        })
        .collect();
    v.sort_by_key(|s| (s.unknowns(), s.dims().0));
    v
}

/// `m (m - 1) ... (m - k + 1)`.
fn falling(m: usize, k: usize) -> u128 {
    (0..k).map(|i| (m - i) as u128).product()
}

/// The data an equation row is built from: the series itself for an ODE,
/// its powers for an algebraic ansatz.
trait Field: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Fp(u64, u64);

impl Field for Fp {
    fn zero() -> Self {
        Fp(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        let p = self.1.max(o.1);
        Fp(addmod(self.0, o.0, p), p)
    }
    fn mul(&self, o: &Self) -> Self {
        let p = self.1.max(o.1);
        Fp(mulmod(self.0, o.0, p), p)
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

/// Truncated powers `f^0 .. f^dq`.
fn powers<F: Field>(f: &[F], dq: usize, one: F) -> Vec<Vec<F>> {
    let n = f.len();
    let mut out = vec![{
        let mut v = vec![F::zero(); n];
        if n > 0 {
            v[0] = one;
        }
        v
    }];
    for j in 1..=dq {
        let prev = &out[j - 1];
        let mut v = vec![F::zero(); n];
        for (a, pa) in prev.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for b in 0..n - a {
                if !f[b].is_zero() {
                    v[a + b] = v[a + b].add(&pa.mul(&f[b]));
                }
            }
        }
        out.push(v);
    }
    out
}

/// Row of `[t^n]` in the unknowns, with `data[j]` the j-th power (algebraic)
/// or `data[0]` the series (ODE). `lift` maps an integer factor into F.
fn row<F: Field>(shape: Shape, data: &[Vec<F>], n: usize, lift: &impl Fn(u128) -> F) -> Vec<F> {
    let mut out = vec![F::zero(); shape.unknowns()];
    match shape {
        Shape::Ode { r, d } => {
            for k in 0..=r {
                for i in 0..=d.min(n) {
                    let m = n - i + k;
                    let v = &data[0][m];
                    if !v.is_zero() {
                        out[k * (d + 1) + i] = v.mul(&lift(falling(m, k)));
                    }
                }
            }
        }
        Shape::Alg { dq, dt } => {
            for j in 0..=dq {
                for i in 0..=dt.min(n) {
                    out[j * (dt + 1) + i] = data[j][n - i].clone();
                }
            }
        }
    }
    out
}

/// Kernel basis of a matrix over Z/p, one vector per free column with that
/// entry 1, plus the pivot columns.
fn kernel_mod(mut a: Vec<Vec<u64>>, cols: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = invmod(a[r][c], p);
        for j in c..cols {
            a[r][j] = mulmod(a[r][j], inv, p);
        }
        let pr = a[r].clone();
        for (i, ri) in a.iter_mut().enumerate() {
            if i != r && ri[c] != 0 {
                let f = ri[c];
                for j in c..cols {
                    if pr[j] != 0 {
                        ri[j] = submod(ri[j], mulmod(f, pr[j], p), p);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let basis = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = submod(0, a[k][free], p);
            }
            v
        })
        .collect();
    (pivots, basis)
}

fn to_mod(q: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = q.denom().mod_floor(&pb).to_u64().unwrap();
    if d == 0 {
        return None;
    }
    let n = q.numer().mod_floor(&pb).to_u64().unwrap();
    Some(mulmod(n, invmod(d, p), p))
}

/// `a / b` with `|a|, b <= sqrt(m / 2)` and `a = b r mod m`.
fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Integer multiple with content 1 and a positive first nonzero entry.
fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = ints.iter().find(|c| !c.is_zero()).map_or(1, |c| if c.is_negative() { -1 } else { 1 });
    ints.into_iter().map(|c| c * sign / &g).collect()
}

struct Residues {
    p: u64,
    data: Vec<Vec<Fp>>,
}

impl Residues {
    fn new(series: &[BigRational], p: u64, dq: usize) -> Option<Residues> {
        let f: Option<Vec<u64>> = series.iter().map(|q| to_mod(q, p)).collect();
        let f: Vec<Fp> = f?.into_iter().map(|v| Fp(v, p)).collect();
        let data = if dq == 0 { vec![f] } else { powers(&f, dq, Fp(1, p)) };
        Some(Residues { p, data })
    }

    fn rows(&self, shape: Shape, ns: std::ops::Range<usize>) -> Vec<Vec<u64>> {
        let p = self.p;
        ns.map(|n| row(shape, &self.data, n, &|k| Fp((k % p as u128) as u64, p)).into_iter().map(|e| e.0).collect())
            .collect()
    }

    fn annihilates(&self, shape: Shape, v: &[u64], ns: std::ops::Range<usize>) -> bool {
        self.rows(shape, ns).iter().all(|r| r.iter().zip(v).fold(0, |acc, (a, b)| addmod(acc, mulmod(*a, *b, self.p), self.p)) == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuessResult {
    pub kind: Kind,
    /// ODE: `coeffs[k]` is `p_k(t)` (ascending in t) multiplying `f^(k)`.
    /// Algebraic: `coeffs[j]` multiplies `Q^j`.
    pub coeffs: Vec<Vec<BigInt>>,
    /// `(order, degree)` or `(Q-degree, t-degree)` of the relation found.
    pub ansatz: Option<(usize, usize)>,
    /// Bounds of the ansatz grid searched.
    pub bounds: (usize, usize),
    pub terms_used: usize,
    pub terms_heldout: usize,
    /// Ansatz shapes examined.
    pub tried: usize,
    /// Shapes whose fitted relation failed on the held-out terms.
    pub rejected: usize,
}

impl GuessResult {
    pub fn text(&self) -> String {
        if self.kind == Kind::None {
            return format!("none (bounds {:?})", self.bounds);
        }
        let poly = |c: &[BigInt]| {
            let z = ZPoly::from_terms(c.iter().enumerate().map(|(i, k)| (Mono::var(T, i as u32), k.clone())).collect());
            format!("({z})")
        };
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().any(|k| !k.is_zero()))
            .map(|(k, c)| match (self.kind, k) {
                (Kind::DFinite, 0) => format!("{}*f", poly(c)),
                (Kind::DFinite, _) => format!("{}*D^{k}(f)", poly(c)),
                (_, 0) => poly(c),
                _ => format!("{}*Q^{k}", poly(c)),
            })
            .collect();
        format!("{} = 0", terms.join(" + "))
    }

    /// The relation applied to the whole series: every coefficient vanishes.
    pub fn annihilates(&self, series: &[BigRational]) -> bool {
        let Some((a, b)) = self.ansatz else { return false };
        let shape = if self.kind == Kind::DFinite { Shape::Ode { r: a, d: b } } else { Shape::Alg { dq: a, dt: b } };
        let flat: Vec<BigInt> = self.coeffs.iter().flatten().cloned().collect();
        exact_check(shape, series, &flat)
    }
}

fn exact_check(shape: Shape, series: &[BigRational], v: &[BigInt]) -> bool {
    let data = match shape {
        Shape::Ode { .. } => vec![series.to_vec()],
        Shape::Alg { dq, .. } => powers(series, dq, BigRational::one()),
    };
    let vq: Vec<BigRational> = v.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    (0..shape.equations(series.len())).all(|n| {
        let r = row(shape, &data, n, &|k| BigRational::from_integer(k.into()));
        Zero::is_zero(&r.iter().zip(&vq).fold(<BigRational as Zero>::zero(), |acc, (a, b)| acc + a * b))
    })
}

/// Kernel vector of the fitted system, lifted to Q.
fn lift_kernel(series: &[BigRational], shape: Shape, fit: usize) -> Option<Vec<BigRational>> {
    let dq = if let Shape::Alg { dq, .. } = shape { dq } else { 0 };
    let eqs = shape.equations(fit);
    let mut best: Option<(Vec<usize>, BigInt, Vec<BigInt>)> = None;
    let mut last: Option<Vec<BigRational>> = None;
    for &p in primes().iter().take(MAX_PRIMES) {
        let Some(res) = Residues::new(series, p, dq) else { continue };
        let (piv, basis) = kernel_mod(res.rows(shape, 0..eqs), shape.unknowns(), p);
        let Some(v) = basis.into_iter().next() else { return None };
        let pb = BigInt::from(p);
        match &mut best {
            Some((bp, _, _)) if piv.len() < bp.len() => continue,
            Some((bp, m, acc)) if *bp == piv => {
                for (a, &r) in acc.iter_mut().zip(&v) {
                    // a + m ((r - a) / m mod p)
                    let am = a.mod_floor(&pb).to_u64().unwrap();
                    let k = mulmod(submod(r, am, p), invmod((&*m % &pb).to_u64().unwrap(), p), p);
                    *a += &*m * BigInt::from(k);
                }
                *m *= &pb;
            }
            _ => {
                // First prime, or an earlier prime had unlucky rank.
                best = Some((piv, pb, v.iter().map(|&r| BigInt::from(r)).collect()));
                last = None;
                continue;
            }
        }
        let (_, m, acc) = best.as_ref().unwrap();
        let rec: Option<Vec<BigRational>> = acc.iter().map(|a| rational_reconstruct(a, m)).collect();
        if let Some(rec) = rec {
            if last.as_ref() == Some(&rec) {
                return Some(rec);
            }
            last = Some(rec);
        }
    }
    None
}

fn exact_kernel(series: &[BigRational], shape: Shape, fit: usize) -> Option<Vec<BigRational>> {
    let data = match shape {
        Shape::Ode { .. } => vec![series[..fit].to_vec()],
        Shape::Alg { dq, .. } => powers(&series[..fit], dq, BigRational::one()),
    };
    let rows: Vec<Vec<BigRational>> =
        (0..shape.equations(fit)).map(|n| row(shape, &data, n, &|k| BigRational::from_integer(k.into()))).collect();
    // Right kernel of the equations = left kernel of the transpose.
    let u = shape.unknowns();
    let tr: Vec<Vec<BigRational>> = (0..u).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
    left_nullspace(&tr).into_iter().next()
}

fn search(ode: bool, series: &[BigRational], bounds: (usize, usize), heldout: usize, method: Method) -> Result<GuessResult, GuessError> {
    let (a, b) = bounds;
    let need = (a + 1) * (b + 1) + heldout + if ode { a } else { 0 };
    if series.len() < need {
        return Err(GuessError::InsufficientTerms { need, have: series.len() });
    }
    let fit = series.len() - heldout;
    let grid = ansatz_grid(ode, bounds);
    let dq = if ode { 0 } else { a };
    let pre = primes().iter().find_map(|&p| Residues::new(series, p, dq));
    let mut out = GuessResult {
        kind: Kind::None,
        coeffs: vec![],
        ansatz: None,
        bounds,
        terms_used: fit,
        terms_heldout: heldout,
        tried: 0,
        rejected: 0,
    };
    for shape in grid {
        out.tried += 1;
        let u = shape.unknowns();
        let eqs = shape.equations(fit);
        let kernel = match method {
            Method::Modular => {
                let pre = pre.as_ref().expect("some prime avoids every denominator");
                let few = eqs.min(u + SPARE_ROWS);
                let (_, basis) = kernel_mod(pre.rows(shape, 0..few), u, pre.p);
                let Some(v) = basis.first() else { continue };
                if few < eqs && !pre.annihilates(shape, v, few..eqs) && kernel_mod(pre.rows(shape, 0..eqs), u, pre.p).1.is_empty() {
                    continue;
                }
                lift_kernel(series, shape, fit)
            }
            Method::Exact => exact_kernel(series, shape, fit),
        };
        let Some(k) = kernel else { continue };
        let v = primitive(&k);
        if !exact_check(shape, series, &v) {
            out.rejected += 1;
            continue;
        }
        let (_, bb) = shape.dims();
        out.kind = if ode { Kind::DFinite } else { Kind::Algebraic };
        out.coeffs = v.chunks(bb + 1).map(|c| c.to_vec()).collect();
        out.ansatz = Some(shape.dims());
        return Ok(out);
    }
    Ok(out)
}

/// Smallest linear ODE with polynomial coefficients, `order <= bounds.0`,
/// `degree <= bounds.1`, annihilating all of `series`.
pub fn guess_ode(series: &[BigRational], r_max: usize, d_max: usize, heldout: usize) -> Result<GuessResult, GuessError> {
    search(true, series, (r_max, d_max), heldout, Method::Modular)
}

pub fn guess_ode_with(series: &[BigRational], bounds: (usize, usize), heldout: usize, method: Method) -> Result<GuessResult, GuessError> {
    search(true, series, bounds, heldout, method)
}

/// Smallest `P(t, Q)` with `deg_Q <= dq_max`, `deg_t <= dt_max` and
/// `P(t, series) = 0` to the available order.
pub fn guess_algebraic(series: &[BigRational], dq_max: usize, dt_max: usize, heldout: usize) -> Result<GuessResult, GuessError> {
    search(false, series, (dq_max, dt_max), heldout, Method::Modular)
}

pub fn guess_algebraic_with(series: &[BigRational], bounds: (usize, usize), heldout: usize, method: Method) -> Result<GuessResult, GuessError> {
    search(false, series, bounds, heldout, method)
}

/// Outcome of a search on residues modulo a single prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModularScan {
    /// Every ansatz in the grid has full column rank: no relation of these
    /// shapes annihilates the fitted terms over Q.
    NoneProved { tried: usize },
    /// A relation mod p that also annihilates the held-out residues.
    Candidate { ansatz: (usize, usize) },
}

/// ODE search where only `series mod p` is known, e.g. counts too large to
/// compute exactly.
pub fn scan_ode_mod(series: &[u64], p: u64, bounds: (usize, usize), heldout: usize) -> Result<ModularScan, GuessError> {
    scan_mod(true, series, p, bounds, heldout)
}

pub fn scan_algebraic_mod(series: &[u64], p: u64, bounds: (usize, usize), heldout: usize) -> Result<ModularScan, GuessError> {
    scan_mod(false, series, p, bounds, heldout)
}

fn scan_mod(ode: bool, series: &[u64], p: u64, bounds: (usize, usize), heldout: usize) -> Result<ModularScan, GuessError> {
    let (a, b) = bounds;
    let need = (a + 1) * (b + 1) + heldout + if ode { a } else { 0 };
    if series.len() < need {
        return Err(GuessError::InsufficientTerms { need, have: series.len() });
    }
    let f: Vec<Fp> = series.iter().map(|&v| Fp(v % p, p)).collect();
    let data = if ode { vec![f] } else { powers(&f, a, Fp(1, p)) };
    let res = Residues { p, data };
    let fit = series.len() - heldout;
    let grid = ansatz_grid(ode, bounds);
    let tried = grid.len();
    for shape in grid {
        let u = shape.unknowns();
        let eqs = shape.equations(fit);
        let few = eqs.min(u + SPARE_ROWS);
        let (_, basis) = kernel_mod(res.rows(shape, 0..few), u, p);
        if basis.is_empty() {
            continue;
        }
        let (_, basis) = kernel_mod(res.rows(shape, 0..eqs), u, p);
        let all = shape.equations(series.len());
        if basis.iter().any(|v| res.annihilates(shape, v, 0..all)) {
            return Ok(ModularScan::Candidate { ansatz: shape.dims() });
        }
    }
    Ok(ModularScan::NoneProved { tried })
}
