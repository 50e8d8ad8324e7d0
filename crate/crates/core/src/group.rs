//! The involutions fixing `B_theta`, the group they generate, and the
//! orbit-sum solution of the quarter-plane functional equation.

use crate::genfun::{build_blocks, counts_walks, BlockSet};
use crate::rule::{Dir, Rule};
use rand::{Rng, SeedableRng};
use std::collections::HashMap;
use twostep_algebra::linalg::{left_nullspace, Matrix};
use twostep_algebra::modp::{addmod, invmod, mulmod, powmod, primes};
use twostep_algebra::{series_expand, AlgebraError, LPoly, Mono, RatFunc, Ring, Series, TSeries, ZPoly, T, X, Y};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("B_{0} is not a proper quadratic in {1}")]
    Degenerate(Dir, char),
    #[error("involution check failed for {0}")]
    Check(&'static str),
    #[error("no pole-free evaluation points found")]
    Points,
}

/// Non-trivial roots `Phi` (in y) and `Psi` (in x) of `B(x, Y) = B(x, y)`
/// and `B(X, y) = B(x, y)`.
#[derive(Clone, Debug)]
pub struct Involutions {
    pub theta: Dir,
    pub b: RatFunc,
    pub phi: RatFunc,
    pub psi: RatFunc,
}

/// Second root of `N(Y) D(y) - N(y) D(Y)` in the variable `v`: with
/// coefficients `p_k` of `Y^k`, the roots sum to `-p_1 / p_2`.
fn other_root(b: &RatFunc, v: usize) -> Option<RatFunc> {
    let n = b.num().coeffs_in(v);
    let d = b.den().coeffs_in(v);
    let at = |cs: &[ZPoly], k: usize| cs.get(k).cloned().unwrap_or_else(ZPoly::zero);
    let p = |k: usize| at(&n, k).mul(b.den()).sub(&b.num().mul(&at(&d, k)));
    let (p1, p2) = (p(1), p(2));
    if p2.is_zero() || n.len().max(d.len()) > 3 {
        return None;
    }
    let r = RatFunc::new(p1.neg(), p2).ok()?;
    Some(r.sub(&RatFunc::var(v)))
}

fn subst_xy(f: &RatFunc, x: &RatFunc, y: &RatFunc) -> RatFunc {
    f.subst([None, Some(x), Some(y)])
}

impl Involutions {
    pub fn of_block(theta: Dir, b: &RatFunc) -> Result<Involutions, GroupError> {
        let phi = other_root(b, Y).ok_or(GroupError::Degenerate(theta, 'y'))?;
        let psi = other_root(b, X).ok_or(GroupError::Degenerate(theta, 'x'))?;
        Ok(Involutions { theta, b: b.clone(), phi, psi })
    }

    pub fn compute(rule: Rule, theta: Dir) -> Result<Involutions, GroupError> {
        Involutions::of_block(theta, &build_blocks(rule).of(theta).b)
    }

    /// `B` is fixed by both maps and both maps square to the identity.
    pub fn verify(&self) -> Result<(), GroupError> {
        let (x, y) = (RatFunc::x(), RatFunc::y());
        if subst_xy(&self.b, &x, &self.phi) != self.b {
            return Err(GroupError::Check("B(x, Phi) = B"));
        }
        if subst_xy(&self.b, &self.psi, &y) != self.b {
            return Err(GroupError::Check("B(Psi, y) = B"));
        }
        if subst_xy(&self.phi, &x, &self.phi) != y {
            return Err(GroupError::Check("Phi o Phi = id"));
        }
        if subst_xy(&self.psi, &self.psi, &y) != x {
            return Err(GroupError::Check("Psi o Psi = id"));
        }
        Ok(())
    }

    /// `(X, Y) -> (X, Phi(X, Y))`.
    pub fn apply_phi(&self, e: &(RatFunc, RatFunc)) -> (RatFunc, RatFunc) {
        (e.0.clone(), subst_xy(&self.phi, &e.0, &e.1))
    }

    /// `(X, Y) -> (Psi(X, Y), Y)`.
    pub fn apply_psi(&self, e: &(RatFunc, RatFunc)) -> (RatFunc, RatFunc) {
        (subst_xy(&self.psi, &e.0, &e.1), e.1.clone())
    }
}

/// A rational function compiled for evaluation modulo a prime.
#[derive(Clone, Debug)]
struct ModFn {
    num: Vec<([u32; 3], u64)>,
    den: Vec<([u32; 3], u64)>,
}

impl ModFn {
    fn new(f: &RatFunc, p: u64) -> ModFn {
        let conv = |z: &ZPoly| -> Vec<([u32; 3], u64)> {
            let pb = num_bigint::BigInt::from(p);
            z.terms()
                .iter()
                .map(|(m, c)| {
                    let r = c % &pb;
                    let r = if r < num_bigint::BigInt::from(0) { r + &pb } else { r };
                    (m.exps(), u64::try_from(r).unwrap())
                })
                .collect()
        };
        ModFn { num: conv(f.num()), den: conv(f.den()) }
    }

    fn eval(&self, pt: [u64; 3], p: u64) -> Option<u64> {
        let ev = |terms: &[([u32; 3], u64)]| {
            terms.iter().fold(0, |acc, (e, c)| {
                let mut v = *c;
                for k in 0..3 {
                    if e[k] > 0 {
                        v = mulmod(v, powmod(pt[k], e[k] as u64, p), p);
                    }
                }
                addmod(acc, v, p)
            })
        };
        let d = ev(&self.den);
        if d == 0 {
            return None;
        }
        Some(mulmod(ev(&self.num), invmod(d, p), p))
    }
}

pub const DEFAULT_CAP: usize = 400;
pub const FINGERPRINT_SEED: u64 = 0x5eed_2024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(usize),
    /// More than `cap` elements were generated.
    Infinite(usize),
}

impl GroupOrder {
    pub fn finite(self) -> Option<usize> {
        match self {
            GroupOrder::Finite(n) => Some(n),
            GroupOrder::Infinite(_) => None,
        }
    }
}

impl std::fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupOrder::Finite(n) => write!(f, "{n}"),
            GroupOrder::Infinite(cap) => write!(f, "infinite({cap})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    pub x: RatFunc,
    pub y: RatFunc,
    /// Generators in the order they are applied to `(x, y)`.
    pub word: String,
}

impl GroupElement {
    /// Both components expand as power series in t with Laurent coefficients.
    pub fn substitutable(&self) -> bool {
        expandable(&self.x) && expandable(&self.y)
    }

    pub fn text(&self) -> String {
        format!("({}, {})", self.x, self.y)
    }
}

/// `den(0, x, y)` is a single monomial.
pub fn expandable(f: &RatFunc) -> bool {
    let d0 = f.den().subst_var(T, &ZPoly::zero());
    !d0.is_zero() && d0.is_monomial()
}

#[derive(Clone, Debug)]
pub struct GroupResult {
    pub theta: Dir,
    pub order: GroupOrder,
    /// Present when the order is finite and closure was confirmed exactly.
    pub elements: Vec<GroupElement>,
    pub substitutable: Vec<bool>,
    pub involutions: Involutions,
}

/// Orbit size of random points under the two maps, modulo a 62-bit prime.
pub fn fingerprint_order(inv: &Involutions, cap: usize, seed: u64) -> Result<(GroupOrder, Vec<String>), GroupError> {
    let p = primes()[0];
    let (phi, psi) = (ModFn::new(&inv.phi, p), ModFn::new(&inv.psi, p));
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    'retry: for _ in 0..8 {
        let pts: Vec<[u64; 3]> = (0..3).map(|_| [rng.gen_range(2..p), rng.gen_range(2..p), rng.gen_range(2..p)]).collect();
        type Fp = Vec<(u64, u64)>;
        let start: Fp = pts.iter().map(|q| (q[1], q[2])).collect();
        let mut seen: HashMap<Fp, usize> = HashMap::new();
        seen.insert(start.clone(), 0);
        let mut words = vec![String::new()];
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let cur = queue[head].clone();
            let w = words[head].clone();
            head += 1;
            for (g, letter) in [(&phi, 'Φ'), (&psi, 'Ψ')] {
                let mut next = Vec::with_capacity(3);
                for (k, &(a, b)) in cur.iter().enumerate() {
                    let Some(v) = g.eval([pts[k][0], a, b], p) else { continue 'retry };
                    next.push(if letter == 'Φ' { (a, v) } else { (v, b) });
                }
                if !seen.contains_key(&next) {
                    if seen.len() >= cap {
                        return Ok((GroupOrder::Infinite(cap), words));
                    }
                    seen.insert(next.clone(), queue.len());
                    queue.push(next);
                    words.push(format!("{w}{letter}"));
                }
            }
        }
        return Ok((GroupOrder::Finite(seen.len()), words));
    }
    Err(GroupError::Points)
}

/// Breadth-first closure under `Phi` and `Psi`. The modular orbit decides
/// the order; a finite group is then rebuilt symbolically and its closure
/// confirmed with exact equality.
pub fn generate_group(rule: Rule, theta: Dir, cap: usize) -> Result<GroupResult, GroupError> {
    group_of(&build_blocks(rule), theta, cap)
}

pub fn group_of(blocks: &BlockSet, theta: Dir, cap: usize) -> Result<GroupResult, GroupError> {
    let inv = Involutions::of_block(theta, &blocks.of(theta).b)?;
    let (order, words) = fingerprint_order(&inv, cap, FINGERPRINT_SEED)?;
    let mut elements = Vec::new();
    if let GroupOrder::Finite(_) = order {
        elements = symbolic_elements(&inv, &words);
        confirm_closure(&inv, &elements)?;
    }
    let substitutable = elements.iter().map(|e| e.substitutable()).collect();
    Ok(GroupResult { theta, order, elements, substitutable, involutions: inv })
}

fn symbolic_elements(inv: &Involutions, words: &[String]) -> Vec<GroupElement> {
    let mut out: Vec<GroupElement> = Vec::with_capacity(words.len());
    let mut by_word: HashMap<&str, usize> = HashMap::new();
    for w in words {
        let e = match w.chars().last() {
            None => (RatFunc::x(), RatFunc::y()),
            Some(c) => {
                let parent = &out[by_word[&w[..w.len() - c.len_utf8()]]];
                let pe = (parent.x.clone(), parent.y.clone());
                if c == 'Φ' {
                    inv.apply_phi(&pe)
                } else {
                    inv.apply_psi(&pe)
                }
            }
        };
        by_word.insert(w.as_str(), out.len());
        out.push(GroupElement { x: e.0, y: e.1, word: w.clone() });
    }
    out
}

fn confirm_closure(inv: &Involutions, elements: &[GroupElement]) -> Result<(), GroupError> {
    for (i, e) in elements.iter().enumerate() {
        for j in (i + 1)..elements.len() {
            if e.x == elements[j].x && e.y == elements[j].y {
                return Err(GroupError::Check("distinct elements"));
            }
        }
        let pe = (e.x.clone(), e.y.clone());
        for img in [inv.apply_phi(&pe), inv.apply_psi(&pe)] {
            if !elements.iter().any(|f| f.x == img.0 && f.y == img.1) {
                return Err(GroupError::Check("closure"));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    Solved,
    CoefficientsNotEliminable,
    VanishingOrbitSum,
    NonSubstitutableElements,
    InfiniteGroup,
    /// Elimination succeeded but no normalization of the combination has a
    /// positive part that isolates `Q_theta`.
    ExtractionFailed,
}

impl OrbitStatus {
    pub fn name(self) -> &'static str {
        match self {
            OrbitStatus::Solved => "solved",
            OrbitStatus::CoefficientsNotEliminable => "coefficients-not-eliminable",
            OrbitStatus::VanishingOrbitSum => "vanishing-orbit-sum",
            OrbitStatus::NonSubstitutableElements => "non-substitutable-elements",
            OrbitStatus::InfiniteGroup => "infinite-group",
            OrbitStatus::ExtractionFailed => "extraction-failed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitSumSolution {
    pub theta: Dir,
    pub status: OrbitStatus,
    pub group: GroupResult,
    /// Coefficient of each group element in the eliminating combination.
    pub coefficients: Vec<RatFunc>,
    /// `sum_g c_g L(g) / (1 - B)`.
    pub rhs: Option<RatFunc>,
    pub q: Option<TSeries>,
}

/// Lowest exponents of `x` and `y` for a quarter-plane walk ending with `theta`.
fn support_floor(theta: Dir) -> (i32, i32) {
    match theta {
        Dir::E => (1, 0),
        Dir::N => (0, 1),
        _ => (0, 0),
    }
}

/// Unknown boundary values `Q_down(X_g)` and `Q_left(Y_g)`, one column per
/// distinct argument.
fn boundary_matrix(elements: &[GroupElement], d: &[RatFunc], j: &[RatFunc]) -> Matrix<RatFunc> {
    let mut xs: Vec<&RatFunc> = Vec::new();
    let mut ys: Vec<&RatFunc> = Vec::new();
    for e in elements {
        if !xs.contains(&&e.x) {
            xs.push(&e.x);
        }
        if !ys.contains(&&e.y) {
            ys.push(&e.y);
        }
    }
    let nx = xs.len();
    let mut m = vec![vec![RatFunc::zero(); nx + ys.len()]; elements.len()];
    for (g, e) in elements.iter().enumerate() {
        let cx = xs.iter().position(|v| *v == &e.x).unwrap();
        let cy = ys.iter().position(|v| *v == &e.y).unwrap();
        m[g][cx] = m[g][cx].add(&d[g]);
        m[g][nx + cy] = m[g][nx + cy].add(&j[g]);
    }
    m
}

/// `f = t^v S(t)` with `S(0) != 0`, `S` to `O(t^(n+1))`.
fn laurent_t(f: &RatFunc, n: usize) -> Option<(i64, TSeries)> {
    if f.is_zero() {
        return None;
    }
    let (vn, vd) = (f.num().min_degree(T), f.den().min_degree(T));
    let strip = |z: &ZPoly, k: u32| z.div_mono(Mono::var(T, k));
    let g = RatFunc::new(strip(f.num(), vn), strip(f.den(), vd)).ok()?;
    Some((vn as i64 - vd as i64, series_expand(&g, n).ok()?))
}

/// `q(X, Y)` for series `X`, `Y` without negative powers of t.
fn compose(q: &TSeries, x: &TSeries, y: &TSeries) -> TSeries {
    let prec = q.prec();
    let (mut di, mut dj) = (0, 0);
    for c in q.coeffs() {
        for (&(i, j), _) in c.terms() {
            di = di.max(i);
            dj = dj.max(j);
        }
    }
    let powers = |s: &TSeries, d: i32| {
        let mut out = vec![Series::one(prec)];
        for k in 1..=d as usize {
            out.push(out[k - 1].mul(&s.truncate(prec)).truncate(prec));
        }
        out
    };
    let (px, py) = (powers(x, di), powers(y, dj));
    let mut out: TSeries = Series::zero(prec);
    for (m, c) in q.coeffs().iter().enumerate() {
        for (&(i, j), k) in c.terms() {
            let term = px[i as usize].mul(&py[j as usize]).truncate(prec - m).shift_up(m).scale(&LPoly::constant(k.clone()));
            out = out.add(&term);
        }
    }
    out.truncate(prec)
}

fn positive(p: &LPoly) -> LPoly {
    p.filter(|i, j| i >= 1 && j >= 1)
}

/// Solves `[x^> y^>](c Q) = [x^> y^>] r` order by order in t, for `Q`
/// supported on `i >= floor.0, j >= floor.1`. Monomials of `Q` that `c`'s
/// leading term does not move into the positive quadrant must come from
/// `known`.
fn solve_positive(c: &(i64, TSeries), r: &(i64, TSeries), floor: (i32, i32), known: Option<&TSeries>, n: usize) -> Option<TSeries> {
    let (v, cs) = c;
    let (w, rs) = r;
    let c0 = cs.coeff(0);
    if c0.len() != 1 {
        return None;
    }
    let (&(a, b), k0) = c0.terms().next().unwrap();
    let lost = |i: i32, j: i32| i + a < 1 || j + b < 1;
    let has_lost = lost(floor.0, floor.1);
    if has_lost && known.is_none() {
        return None;
    }
    let in_floor = |i: i32, j: i32| i >= floor.0 && j >= floor.1;
    let mut q: Vec<LPoly> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let km = known.map(|s| s.coeff(m)).unwrap_or_else(LPoly::zero);
        if km.terms().any(|(&(i, j), _)| !in_floor(i, j) || !lost(i, j)) {
            return None;
        }
        let mut acc = c0.mul(&km);
        for kk in 1..=m.min(cs.prec() - 1) {
            acc = acc.add(&cs.coeff(kk).mul(&q[m - kk]));
        }
        let idx = v + m as i64 - w;
        let target = if idx < 0 {
            LPoly::zero()
        } else if idx as usize >= rs.prec() {
            return None;
        } else {
            positive(&rs.coeff(idx as usize))
        };
        let u = target.sub(&positive(&acc)).shift(-a, -b).scale(&k0.recip());
        if u.terms().any(|(&(i, j), _)| !in_floor(i, j) || lost(i, j)) {
            return None;
        }
        q.push(u.add(&km));
    }
    Some(Series::from_coeffs(q))
}

/// The premises of the extraction hold for `q` through `t^n`: every term
/// `c_g Q(g)` with `g` not the identity has no monomial with both exponents
/// positive, and `sum_g c_g Q(g) = rhs` after clearing a common power of t.
fn orbit_identity_holds(elements: &[GroupElement], c: &[RatFunc], rhs: &RatFunc, q: &TSeries, n: usize) -> bool {
    let mut terms: Vec<(i64, TSeries)> = Vec::new();
    for (g, e) in elements.iter().enumerate() {
        if c[g].is_zero() {
            continue;
        }
        let (Some(cg), Ok(xs), Ok(ys)) = (laurent_t(&c[g], n), series_expand(&e.x, n), series_expand(&e.y, n)) else {
            return false;
        };
        let term = cg.1.mul(&compose(q, &xs, &ys)).truncate(n + 1);
        if g > 0 && term.coeffs().iter().any(|p| !positive(p).is_zero()) {
            return false;
        }
        terms.push((cg.0, term));
    }
    let Some((w, r)) = laurent_t(rhs, n) else { return false };
    let base = terms.iter().map(|t| t.0).chain([w]).min().unwrap();
    let top = n as i64 + base;
    let lift = |(v, s): &(i64, TSeries)| s.truncate((top - v + 1).max(0) as usize).shift_up((v - base) as usize);
    let mut total: TSeries = Series::zero(n + 1);
    for t in &terms {
        total = total.add(&lift(t));
    }
    total.truncate(n + 1) == lift(&(w, r)).truncate(n + 1)
}

/// Orbit sum for the quarter-plane equation
/// `(1 - B) Q = L - D Q_down(x) - J Q_left(y)`.
///
/// `known_axis`, when given, is the part of `Q_theta` that the positive-part
/// extraction cannot see (for the spiral with `theta = n`, `Q_n(0, y)`).
pub fn orbit_sum_solve(rule: Rule, theta: Dir, n: usize, known_axis: Option<&TSeries>) -> Result<OrbitSumSolution, GroupError> {
    let blocks = build_blocks(rule);
    let group = group_of(&blocks, theta, DEFAULT_CAP)?;
    let tb = blocks.of(theta);
    let done = |status, group, coefficients, rhs, q| Ok(OrbitSumSolution { theta, status, group, coefficients, rhs, q });
    if group.order.finite().is_none() {
        return done(OrbitStatus::InfiniteGroup, group, vec![], None, None);
    }
    if group.substitutable.iter().any(|s| !s) {
        return done(OrbitStatus::NonSubstitutableElements, group, vec![], None, None);
    }
    let at = |f: &RatFunc, e: &GroupElement| subst_xy(f, &e.x, &e.y);
    let ds: Vec<RatFunc> = group.elements.iter().map(|e| at(&tb.d, e)).collect();
    let js: Vec<RatFunc> = group.elements.iter().map(|e| at(&tb.j, e)).collect();
    let ls: Vec<RatFunc> = group.elements.iter().map(|e| at(&tb.l, e)).collect();
    let m = boundary_matrix(&group.elements, &ds, &js);
    let basis: Vec<Vec<RatFunc>> = left_nullspace(&m).into_iter().filter(|v| !v[0].is_zero()).collect();
    if basis.is_empty() {
        return done(OrbitStatus::CoefficientsNotEliminable, group, vec![], None, None);
    }
    let orbit_sum = |c: &[RatFunc]| c.iter().zip(&ls).fold(RatFunc::zero(), |acc, (cg, l)| acc.add(&cg.mul(l)));
    let Some(c) = basis.iter().find(|c| !orbit_sum(c).is_zero()) else {
        return done(OrbitStatus::VanishingOrbitSum, group, basis[0].clone(), None, None);
    };
    let kernel = RatFunc::one().sub(&tb.b);
    // The positive part depends on how the combination is scaled; try making
    // each coefficient 1 in turn.
    let mut first = None;
    for h in 0..c.len() {
        if c[h].is_zero() {
            continue;
        }
        let cn: Vec<RatFunc> = c.iter().map(|v| v.div(&c[h]).expect("nonzero")).collect();
        let rhs = orbit_sum(&cn).div(&kernel).expect("kernel is nonzero");
        if first.is_none() {
            first = Some((cn.clone(), rhs.clone()));
        }
        let (Some(lc), Some(lr)) = (laurent_t(&cn[0], n + 4), laurent_t(&rhs, n + 8)) else { continue };
        let Some(q) = solve_positive(&lc, &lr, support_floor(theta), known_axis, n) else { continue };
        if counts_walks(&q) && orbit_identity_holds(&group.elements, &cn, &rhs, &q, n) {
            return done(OrbitStatus::Solved, group, cn, Some(rhs), Some(q));
        }
    }
    let (cn, rhs) = first.expect("some coefficient is nonzero");
    done(OrbitStatus::ExtractionFailed, group, cn, Some(rhs), None)
}

/// All four spiral generating functions from the orbit-sum solution for `Q_e`.
#[derive(Clone, Debug)]
pub struct BoundaryChain {
    pub q_down: TSeries,
    pub q_left: TSeries,
    pub q: [TSeries; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("orbit sum for Q_e did not solve")]
    OrbitSum,
    #[error("Q_left depends on x")]
    NotUnivariate,
}

/// `y = 0` in the `e` equation gives `Q_down` (spiral walks never end at the
/// origin with a west step, so `Q_left(0) = 0`), the full `e` equation then
/// gives `Q_left`, and each `Q_theta` follows from its own equation.
pub fn spiral_boundary_chain(n: usize) -> Result<BoundaryChain, ChainError> {
    let rule = Rule::spiral();
    // Divisions below can cost a few orders.
    let big = n + 4;
    let sol = orbit_sum_solve(rule, Dir::E, big, None)?;
    let qe = sol.q.ok_or(ChainError::OrbitSum)?;
    let blocks = build_blocks(rule);
    let e = blocks.of(Dir::E);
    let ser = |f: &RatFunc| -> Result<TSeries, ChainError> { Ok(series_expand(f, big)?) };
    let at0 = |f: &RatFunc| -> Result<TSeries, ChainError> { ser(&f.at_zero(Y)?) };
    let qe0 = Series::from_coeffs(qe.coeffs().iter().map(|c| c.filter(|_, j| j == 0)).collect());
    let one = Series::one(big + 1);
    let num = at0(&e.l)?.sub(&one.sub(&at0(&e.b)?).mul(&qe0));
    let q_down = num.div(&at0(&e.d)?)?;
    let kq = one.sub(&ser(&e.b)?).mul(&qe);
    let q_left = ser(&e.l)?.sub(&ser(&e.d)?.mul(&q_down)).sub(&kq).div(&ser(&e.j)?)?;
    if q_left.coeffs().iter().any(|c| c.terms().any(|(&(i, _), _)| i != 0)) {
        return Err(ChainError::NotUnivariate);
    }
    let mut q: [TSeries; 4] = std::array::from_fn(|_| Series::zero(n + 1));
    for th in crate::rule::DIRS {
        let b = blocks.of(th);
        let rhs = ser(&b.l)?.sub(&ser(&b.d)?.mul(&q_down)).sub(&ser(&b.j)?.mul(&q_left));
        q[th.index()] = rhs.div(&one.sub(&ser(&b.b)?))?.truncate(n + 1);
    }
    let (q_down, q_left) = (q_down.truncate(n + 1), q_left.truncate(n + 1));
    if q_left.prec() < n + 1 || q.iter().any(|s| s.prec() < n + 1) {
        return Err(ChainError::Algebra(AlgebraError::NotExpandable));
    }
    Ok(BoundaryChain { q_down, q_left, q })
}
