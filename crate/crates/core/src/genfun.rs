//! Rational generating functions for the full, half and quarter planes, and
//! the kernel-method solution in the half plane.

use crate::rule::{Dir, Rule, DIRS};
use num_bigint::BigInt;
use num_rational::BigRational;
use twostep_algebra::linalg::{adjugate, det, Matrix};
use twostep_algebra::{series_expand, AlgebraError, LPoly, Mono, RatFunc, Ring, Series, TSeries, ZPoly, T, X, Y};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenfunError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("kernel is not a proper quadratic in y (vertically bounded rule?)")]
    DegenerateQuadratic,
    #[error("kernel root does not start at t^1")]
    NoSmallRoot,
    #[error("series coefficient is not a Laurent polynomial")]
    NotLaurent,
    #[error("kernel root needed to O(t^{0})")]
    Precision(usize),
    #[error("identity check failed: {0}")]
    Identity(&'static str),
}

fn zmono(t: u32, x: u32, y: u32) -> ZPoly {
    ZPoly::monomial(Mono::new(t, x, y), BigInt::from(1))
}

/// Step weights `(tx, ty, t/x, t/y)`.
pub fn step_weights() -> [RatFunc; 4] {
    let t = RatFunc::t();
    [
        t.mul(&RatFunc::x()),
        t.mul(&RatFunc::y()),
        t.mul(&RatFunc::var_inv(X)),
        t.mul(&RatFunc::var_inv(Y)),
    ]
}

/// `T * diag(tx, ty, t/x, t/y)`.
pub fn weighted_transfer(rule: Rule) -> [[RatFunc; 4]; 4] {
    let w = step_weights();
    std::array::from_fn(|i| std::array::from_fn(|j| if rule.get(i, j) { w[j].clone() } else { RatFunc::zero() }))
}

/// Row multipliers that clear the Laurent weights, and the cleared weights.
fn cleared() -> ([ZPoly; 4], [ZPoly; 4]) {
    let c = [ZPoly::one(), ZPoly::one(), zmono(0, 1, 0), zmono(0, 0, 1)];
    let cw = [zmono(1, 1, 0), zmono(1, 0, 1), zmono(1, 0, 0), zmono(1, 0, 0)];
    (c, cw)
}

/// Row `i` of `I - I_theta T^T` (or of `I - T^T` with no mask), multiplied by `c_i`.
/// `c_i w_j` for an entry `-T_ji w_i` in row `i` is `cw_i` (the weight depends on the row).
fn cleared_row(rule: Rule, i: usize, cols: &[usize]) -> Vec<ZPoly> {
    let (c, cw) = cleared();
    cols.iter()
        .map(|&j| {
            let mut e = if i == j { c[i].clone() } else { ZPoly::zero() };
            if rule.get(j, i) {
                e = e.sub(&cw[i]);
            }
            e
        })
        .collect()
}

/// Per-direction building blocks of walks ending with a `theta` step.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaBlocks {
    pub theta: Dir,
    /// Walks starting with step `k` whose only `theta` step is the last one.
    pub g: [RatFunc; 4],
    pub a: RatFunc,
    pub b: RatFunc,
    pub c: RatFunc,
    pub d: RatFunc,
    pub l: RatFunc,
    pub j: RatFunc,
}

impl ThetaBlocks {
    pub fn compute(rule: Rule, theta: Dir) -> ThetaBlocks {
        let th = theta.index();
        let w = step_weights();
        let (_, cw) = cleared();
        let idx: Vec<usize> = (0..4).filter(|&i| i != th).collect();
        let p: Matrix<ZPoly> = idx.iter().map(|&i| cleared_row(rule, i, &idx)).collect();
        let d3 = det(&p);
        let adj = adjugate(&p);
        let g: [RatFunc; 4] = std::array::from_fn(|k| {
            if k == th {
                return w[th].clone();
            }
            let kk = idx.iter().position(|&i| i == k).unwrap();
            let mut num = ZPoly::zero();
            for (jj, &j) in idx.iter().enumerate() {
                if rule.get(j, th) {
                    num = num.add(&adj[jj][kk]);
                }
            }
            let num = num.mul(&cw[k]);
            RatFunc::new(num, d3.clone()).expect("det(I - I_theta T^T) is 1 at t = 0").mul(&w[th])
        });
        let sum = |ks: &[usize]| ks.iter().fold(RatFunc::zero(), |acc, &k| acc.add(&g[k]));
        let mut b = RatFunc::zero();
        for k in rule.successors(th) {
            b = b.add(&g[k]);
        }
        ThetaBlocks {
            theta,
            a: sum(&[0, 1, 2, 3]),
            b,
            c: sum(&[0, 1, 2]),
            d: g[3].clone(),
            l: sum(&[0, 1]),
            j: g[2].clone(),
            g,
        }
    }
}

/// Blocks for all four directions together with the full-plane system.
#[derive(Clone, Debug)]
pub struct BlockSet {
    pub rule: Rule,
    pub theta: [ThetaBlocks; 4],
    /// `F^(k)_theta`: full-plane walks starting with `k` and ending with `theta`, as `[theta][k]`.
    pub full_parts: [[RatFunc; 4]; 4],
}

impl BlockSet {
    pub fn of(&self, theta: Dir) -> &ThetaBlocks {
        &self.theta[theta.index()]
    }

    pub fn f(&self, theta: Dir) -> RatFunc {
        self.full_parts[theta.index()].iter().fold(RatFunc::zero(), |a, b| a.add(b))
    }

    /// Full-plane walks not starting with S.
    pub fn x_block(&self, theta: Dir) -> RatFunc {
        let p = &self.full_parts[theta.index()];
        p[0].add(&p[1]).add(&p[2])
    }

    /// Full-plane walks starting with S.
    pub fn z_block(&self, theta: Dir) -> RatFunc {
        self.full_parts[theta.index()][3].clone()
    }
}

pub fn build_blocks(rule: Rule) -> BlockSet {
    let theta = std::array::from_fn(|i| ThetaBlocks::compute(rule, DIRS[i]));
    BlockSet { rule, theta, full_parts: full_plane_parts(rule) }
}

fn full_plane_parts(rule: Rule) -> [[RatFunc; 4]; 4] {
    let (_, cw) = cleared();
    let all = [0, 1, 2, 3];
    let p: Matrix<ZPoly> = all.iter().map(|&i| cleared_row(rule, i, &all)).collect();
    let d = det(&p);
    let adj = adjugate(&p);
    std::array::from_fn(|th| {
        std::array::from_fn(|k| RatFunc::new(adj[th][k].mul(&cw[k]), d.clone()).expect("det(I - T^T) is 1 at t = 0"))
    })
}

/// Solves `(I - T^T) F = (tx, ty, t/x, t/y)` and checks `(1 - B) F = A` for every direction.
pub fn solve_full_plane(rule: Rule) -> Result<[RatFunc; 4], GenfunError> {
    let bs = build_blocks(rule);
    let f: [RatFunc; 4] = std::array::from_fn(|i| bs.f(DIRS[i]));
    for d in DIRS {
        let tb = bs.of(d);
        let lhs = RatFunc::one().sub(&tb.b).mul(&f[d.index()]);
        if lhs != tb.a {
            return Err(GenfunError::Identity("(1 - B) F = A"));
        }
    }
    Ok(f)
}

/// `(X_theta, Z_theta)` for each direction.
pub fn half_plane_blocks(rule: Rule) -> [(RatFunc, RatFunc); 4] {
    let bs = build_blocks(rule);
    std::array::from_fn(|i| (bs.x_block(DIRS[i]), bs.z_block(DIRS[i])))
}

/// Series in t whose coefficients are rational functions of x alone.
pub type XSeries = Series<RatFunc>;

/// Maps a polynomial in (t, x, y) to a series in t, substituting `y -> ypow[1]`
/// (given as its powers) and sending each `c x^b` through `xcoef`.
fn poly_to_xseries(p: &ZPoly, ypow: &[XSeries], prec: usize, xcoef: &dyn Fn(u32, &BigInt) -> RatFunc) -> XSeries {
    let mut acc: XSeries = Series::zero(prec);
    for (m, c) in p.terms() {
        let a = m.exp(T) as usize;
        if a >= prec {
            continue;
        }
        let k = xcoef(m.exp(X), c);
        let term = ypow[m.exp(Y) as usize].scale(&k).shift_up(a).truncate(prec);
        acc = acc.add(&term);
    }
    acc
}

fn powers(s: &XSeries, n: usize, prec: usize) -> Vec<XSeries> {
    let mut out = vec![Series::one(prec)];
    for k in 1..=n {
        let next = out[k - 1].mul(s).truncate(prec);
        out.push(next);
    }
    out
}

/// The kernel `den(B) - num(B)` as coefficients of `y^0, y^1, y^2`.
pub fn kernel_quadratic(b: &RatFunc) -> Result<[ZPoly; 3], GenfunError> {
    let k = b.den().sub(b.num());
    if k.degree(Y) > 2 {
        return Err(GenfunError::DegenerateQuadratic);
    }
    let mut cs = k.coeffs_in(Y);
    cs.resize(3, ZPoly::zero());
    if cs[2].is_zero() || cs[0].is_zero() {
        return Err(GenfunError::DegenerateQuadratic);
    }
    Ok([cs[0].clone(), cs[1].clone(), cs[2].clone()])
}

/// Small root of the kernel in y.
#[derive(Clone, Debug)]
pub struct KernelRoots {
    pub theta: Dir,
    /// `q0 + q1 y + q2 y^2`, coefficient polynomials in (t, x).
    pub q: [ZPoly; 3],
    /// The fixed value of x, or `None` when x is kept symbolic.
    pub x: Option<BigRational>,
    /// `upsilon^-` to `O(t^(n+1))`.
    pub root: XSeries,
}

impl KernelRoots {
    pub fn q_series(&self, prec: usize) -> [XSeries; 3] {
        let one = [Series::one(prec)];
        let xc = x_coef(self.x.clone());
        std::array::from_fn(|i| poly_to_xseries(&self.q[i], &one, prec, &*xc))
    }
}

fn x_coef(x: Option<BigRational>) -> Box<dyn Fn(u32, &BigInt) -> RatFunc> {
    match x {
        None => Box::new(|b, c| RatFunc::from_zpoly(ZPoly::monomial(Mono::new(0, b, 0), c.clone()))),
        Some(v) => Box::new(move |b, c| RatFunc::from_rational(&(BigRational::from_integer(c.clone()) * Ring::pow(&v, b)))),
    }
}

/// Newton iteration from 0 on `q0 + q1 y + q2 y^2 = 0` for the root that vanishes at t = 0.
pub fn kernel_roots(rule: Rule, theta: Dir, x: Option<&BigRational>, n: usize) -> Result<KernelRoots, GenfunError> {
    let tb = ThetaBlocks::compute(rule, theta);
    kernel_roots_of(&tb.b, theta, x, n)
}

pub fn kernel_roots_of(b: &RatFunc, theta: Dir, x: Option<&BigRational>, n: usize) -> Result<KernelRoots, GenfunError> {
    let q = kernel_quadratic(b)?;
    let prec = n + 1;
    let mut kr = KernelRoots { theta, q, x: x.cloned(), root: Series::zero(prec) };
    let [q0, q1, q2] = kr.q_series(prec);
    if !q0.coeff(0).is_zero() || q1.coeff(0).is_zero() {
        return Err(GenfunError::NoSmallRoot);
    }
    let mut v: XSeries = Series::zero(prec);
    let mut good = 1usize;
    while good < 2 * prec {
        let f = q0.add(&q1.mul(&v)).add(&q2.mul(&v).mul(&v)).truncate(prec);
        let fp = q1.add(&q2.mul(&v).scale(&RatFunc::from_int(2))).truncate(prec);
        v = v.sub(&f.mul(&fp.inv()?)).truncate(prec);
        good *= 2;
    }
    let resid = q0.add(&q1.mul(&v)).add(&q2.mul(&v).mul(&v));
    if !resid.truncate(prec).is_zero() {
        return Err(GenfunError::NoSmallRoot);
    }
    kr.root = v;
    Ok(kr)
}

/// `f(t, x, y)` with `y` replaced by a series, as a series in t over Q(x),
/// to `O(t^(n+1))`. Fails with `Precision(k)` when `y` must be known to `O(t^k)`.
pub fn subst_y(f: &RatFunc, y: &XSeries, x: Option<&BigRational>, n: usize) -> Result<XSeries, GenfunError> {
    let xc = x_coef(x.cloned());
    let prec = y.prec();
    let yp = powers(y, f.num().degree(Y).max(f.den().degree(Y)) as usize, prec);
    let num = poly_to_xseries(f.num(), &yp, prec, &*xc);
    let den = poly_to_xseries(f.den(), &yp, prec, &*xc);
    let w = den.valuation();
    if w >= prec || prec - w < n + 1 {
        return Err(GenfunError::Precision(n + 1 + w));
    }
    Ok(num.div(&den)?.truncate(n + 1))
}

/// [`subst_y`] at the small kernel root, raising the root's precision as needed.
pub fn subst_root(f: &RatFunc, b: &RatFunc, theta: Dir, x: Option<&BigRational>, n: usize) -> Result<(KernelRoots, XSeries), GenfunError> {
    let mut order = n + 2;
    loop {
        let root = kernel_roots_of(b, theta, x, order)?;
        match subst_y(f, &root.root, x, n) {
            Ok(s) => return Ok((root, s)),
            Err(GenfunError::Precision(k)) if k <= 4 * n + 16 && k > order + 1 => order = k - 1,
            Err(GenfunError::Precision(_)) if order < 4 * n + 16 => order = 4 * n + 16,
            Err(e) => return Err(e),
        }
    }
}

/// Converts a series over Q(x) whose coefficients are Laurent in x.
pub fn xseries_to_tseries(s: &XSeries) -> Result<TSeries, GenfunError> {
    let coeffs = s
        .coeffs()
        .iter()
        .map(|c| {
            if c.is_zero() {
                return Ok(LPoly::zero());
            }
            let den = c.den();
            if den.len() != 1 || den.involves(T) || den.involves(Y) {
                return Err(GenfunError::NotLaurent);
            }
            let (dm, dc) = &den.terms()[0];
            let shift = dm.exp(X) as i32;
            let mut out = LPoly::zero();
            for (m, k) in c.num().terms() {
                if m.exp(T) != 0 || m.exp(Y) != 0 {
                    return Err(GenfunError::NotLaurent);
                }
                out.add_term(m.exp(X) as i32 - shift, 0, &BigRational::new(k.clone(), dc.clone()));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Series::from_coeffs(coeffs))
}

/// Kernel-method half-plane solution.
#[derive(Clone, Debug)]
pub struct HalfPlaneSolution {
    pub theta: Dir,
    pub root: KernelRoots,
    /// `H*(x, 0)`: walks ending on the x-axis with a step that may precede S.
    pub h_star: TSeries,
    /// `H_theta(x, y)` for all four directions.
    pub h: [TSeries; 4],
}

impl HalfPlaneSolution {
    pub fn total(&self) -> TSeries {
        let mut acc = self.h[0].clone();
        for s in &self.h[1..] {
            acc = acc.add(s);
        }
        acc
    }
}

/// `H*(x,0) = C(x, u)/D(x, u)` with `u` the small kernel root of `B_theta`,
/// then `H_d = (C_d - D_d H*)/(1 - B_d)` for each direction `d`.
pub fn solve_half_plane(rule: Rule, theta: Dir, n: usize) -> Result<HalfPlaneSolution, GenfunError> {
    let bs = build_blocks(rule);
    let tb = bs.of(theta);
    // D(x, u) alone can be a Laurent series in t; the quotient is a power series.
    let ratio = tb.c.div(&tb.d)?;
    let (root, hs) = subst_root(&ratio, &tb.b, theta, None, n)?;
    let h_star = xseries_to_tseries(&hs)?;
    let mut h: [TSeries; 4] = std::array::from_fn(|_| Series::zero(0));
    for d in DIRS {
        let b = bs.of(d);
        let c = series_expand(&b.c, n)?;
        let dd = series_expand(&b.d, n)?;
        let kb = series_expand(&RatFunc::one().sub(&b.b), n)?;
        h[d.index()] = c.sub(&dd.mul(&h_star)).mul(&kb.inv()?).truncate(n + 1);
    }
    Ok(HalfPlaneSolution { theta, root, h_star, h })
}

/// The quarter-plane equation `(1 - B) Q = L - D Q_down(x) - J Q_left(y)`.
#[derive(Clone, Debug)]
pub struct QuarterEquation {
    pub theta: Dir,
    pub b: RatFunc,
    pub l: RatFunc,
    pub d: RatFunc,
    pub j: RatFunc,
}

impl QuarterEquation {
    pub fn text(&self) -> String {
        format!("(1 - B_{0}) Q_{0}(x,y) = L_{0} - D_{0} Q_down(x) - J_{0} Q_left(y)", self.theta)
    }

    /// Residual of the equation on truncated series.
    pub fn residual(&self, q: &TSeries, q_down: &TSeries, q_left: &TSeries, n: usize) -> Result<TSeries, GenfunError> {
        let kb = series_expand(&RatFunc::one().sub(&self.b), n)?;
        let l = series_expand(&self.l, n)?;
        let d = series_expand(&self.d, n)?;
        let j = series_expand(&self.j, n)?;
        let lhs = kb.mul(q);
        let rhs = l.sub(&d.mul(q_down)).sub(&j.mul(q_left));
        Ok(lhs.sub(&rhs).truncate(n + 1))
    }
}

pub fn quarter_plane_equation(rule: Rule, theta: Dir) -> QuarterEquation {
    let tb = ThetaBlocks::compute(rule, theta);
    QuarterEquation { theta, b: tb.b, l: tb.l, d: tb.d, j: tb.j }
}

/// Rational bound check: every coefficient is a Laurent polynomial with
/// nonnegative integer coefficients.
pub fn counts_walks(s: &TSeries) -> bool {
    s.coeffs().iter().all(|c| c.is_nonneg_integral())
}

/// Leading term helper used by tests and the CLI: `t^k` coefficient of `f` at (1,1).
pub fn at_one(s: &TSeries) -> Vec<BigRational> {
    let one = BigRational::from_integer(1.into());
    s.coeffs().iter().map(|c| c.eval(&one, &one)).collect()
}
