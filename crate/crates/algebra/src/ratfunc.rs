//! Normalized rational functions in (t, x, y) over Q.

use crate::gcd::gcd;
use crate::modp;
use crate::mono::{Mono, T, X, Y};
use crate::poly::{MPoly, Poly, ZPoly};
use crate::ring::Ring;
use crate::AlgebraError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// `num/den` with integer-coefficient polynomials, `gcd(num, den) = 1`
/// (including the integer content) and `den` having positive leading
/// coefficient. This is canonical, so `==` is equality of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: ZPoly,
    den: ZPoly,
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc { num: ZPoly::zero(), den: ZPoly::one() }
    }

    pub fn one() -> RatFunc {
        RatFunc { num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn var(v: usize) -> RatFunc {
        RatFunc { num: ZPoly::var(v), den: ZPoly::one() }
    }

    pub fn t() -> RatFunc {
        Self::var(T)
    }
    pub fn x() -> RatFunc {
        Self::var(X)
    }
    pub fn y() -> RatFunc {
        Self::var(Y)
    }

    /// `1/v`.
    pub fn var_inv(v: usize) -> RatFunc {
        RatFunc { num: ZPoly::one(), den: ZPoly::var(v) }
    }

    pub fn from_int(n: i64) -> RatFunc {
        Self::from_zpoly(ZPoly::constant(BigInt::from(n)))
    }

    pub fn from_rational(q: &BigRational) -> RatFunc {
        Self::new_unchecked_coprime(ZPoly::constant(q.numer().clone()), ZPoly::constant(q.denom().clone()))
    }

    pub fn from_zpoly(p: ZPoly) -> RatFunc {
        RatFunc { num: p, den: ZPoly::one() }
    }

    pub fn from_mpoly(p: &MPoly) -> RatFunc {
        let (k, z) = p.to_z();
        RatFunc::from_zpoly(z).mul(&RatFunc::from_rational(&k))
    }

    /// Normalizes `num/den`.
    pub fn new(num: ZPoly, den: ZPoly) -> Result<RatFunc, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if den.is_constant() {
            return Ok(Self::new_unchecked_coprime(num, den));
        }
        let g = gcd(&num, &den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Ok(Self::new_unchecked_coprime(n, d))
    }

    /// Normalizes the rational quotient of two MPolys.
    pub fn from_mpolys(num: &MPoly, den: &MPoly) -> Result<RatFunc, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let (kn, zn) = num.to_z();
        let (kd, zd) = den.to_z();
        Ok(RatFunc::new(zn, zd)?.mul(&RatFunc::from_rational(&(kn / kd))))
    }

    /// Caller guarantees coprimality as polynomials; only the integer
    /// content and sign are fixed here.
    fn new_unchecked_coprime(num: ZPoly, den: ZPoly) -> RatFunc {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.content().gcd(&den.content());
        let mut g = g;
        if den.lc().unwrap().is_negative() {
            g = -g;
        }
        RatFunc { num: num.div_int(&g), den: den.div_int(&g) }
    }

    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    pub fn den(&self) -> &ZPoly {
        &self.den
    }

    pub fn num_q(&self) -> MPoly {
        self.num.to_q()
    }

    pub fn den_q(&self) -> MPoly {
        self.den.to_q()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(BigRational::new(self.num.constant_term(), self.den.constant_term()))
        } else {
            None
        }
    }

    pub fn involves(&self, v: usize) -> bool {
        self.num.involves(v) || self.den.involves(v)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let n = self.num.add(&o.num);
            return RatFunc::new(n, self.den.clone()).unwrap();
        }
        if self.den.is_constant() && o.den.is_constant() {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            return Self::new_unchecked_coprime(n, self.den.mul(&o.den));
        }
        let g = gcd(&self.den, &o.den);
        if g.is_constant() {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            // gcd(n, den) is 1 when the denominators are coprime.
            return Self::new_unchecked_coprime(n, self.den.mul(&o.den));
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = o.den.div_exact(&g).unwrap();
        let n = self.num.mul(&d1).add(&o.num.mul(&b1));
        let den = b1.mul(&o.den);
        if n.is_zero() {
            return Self::zero();
        }
        let h = gcd(&n, &g);
        if h.is_constant() {
            Self::new_unchecked_coprime(n, den)
        } else {
            Self::new_unchecked_coprime(n.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let (a, d) = cancel(&self.num, &o.den);
        let (c, b) = cancel(&o.num, &self.den);
        Self::new_unchecked_coprime(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Result<RatFunc, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::new_unchecked_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, AlgebraError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn scale(&self, k: &BigRational) -> RatFunc {
        self.mul(&RatFunc::from_rational(k))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn powi(&self, e: i32) -> Result<RatFunc, AlgebraError> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow((-e) as u32))
        }
    }

    pub fn diff(&self, v: usize) -> RatFunc {
        let n = self.num.derivative(v).mul(&self.den).sub(&self.num.mul(&self.den.derivative(v)));
        RatFunc::new(n, self.den.mul(&self.den)).unwrap()
    }

    pub fn eval(&self, pt: &[BigRational; 3]) -> Result<BigRational, AlgebraError> {
        let lift = |c: &BigInt| BigRational::from_integer(c.clone());
        let d = self.den.eval_with(pt, lift);
        if Zero::is_zero(&d) {
            return Err(AlgebraError::Pole);
        }
        Ok(self.num.eval_with(pt, lift) / d)
    }

    pub fn eval_f64(&self, pt: [f64; 3]) -> f64 {
        eval_zpoly_f64(&self.num, pt) / eval_zpoly_f64(&self.den, pt)
    }

    /// Value modulo `p`, or `None` at a pole.
    pub fn eval_mod(&self, pt: [u64; 3], p: u64) -> Option<u64> {
        let d = eval_zpoly_mod(&self.den, pt, p);
        if d == 0 {
            return None;
        }
        Some(modp::mulmod(eval_zpoly_mod(&self.num, pt, p), modp::invmod(d, p), p))
    }

    /// Substitutes rational functions for the variables (`None` keeps a
    /// variable unchanged).
    pub fn subst(&self, vals: [Option<&RatFunc>; 3]) -> RatFunc {
        let dn: Vec<u32> = (0..3).map(|v| self.num.degree(v)).collect();
        let dd: Vec<u32> = (0..3).map(|v| self.den.degree(v)).collect();
        let mut num = homogenized(&self.num, &vals, &dn);
        let mut den = homogenized(&self.den, &vals, &dd);
        for v in 0..3 {
            if let Some(r) = vals[v] {
                if dd[v] > dn[v] {
                    num = num.mul(&r.den.pow(dd[v] - dn[v]));
                } else if dn[v] > dd[v] {
                    den = den.mul(&r.den.pow(dn[v] - dd[v]));
                }
            }
        }
        RatFunc::new(num, den).expect("substitution hit a pole")
    }

    /// Sets variable `v` to zero; fails at a pole.
    pub fn at_zero(&self, v: usize) -> Result<RatFunc, AlgebraError> {
        let n = self.num.subst_var(v, &ZPoly::zero());
        let d = self.den.subst_var(v, &ZPoly::zero());
        RatFunc::new(n, d).map_err(|_| AlgebraError::Pole)
    }

    pub fn total_size(&self) -> usize {
        self.num.len() + self.den.len()
    }
}

fn homogenized(p: &ZPoly, vals: &[Option<&RatFunc>; 3], degs: &[u32]) -> ZPoly {
    // Powers of numerators and denominators, cached per variable.
    let mut num_pows: Vec<Vec<ZPoly>> = vec![Vec::new(); 3];
    let mut den_pows: Vec<Vec<ZPoly>> = vec![Vec::new(); 3];
    for v in 0..3 {
        if let Some(r) = vals[v] {
            let d = degs[v] as usize;
            let mut np = vec![ZPoly::one()];
            let mut dp = vec![ZPoly::one()];
            for k in 1..=d {
                np.push(np[k - 1].mul(&r.num));
                dp.push(dp[k - 1].mul(&r.den));
            }
            num_pows[v] = np;
            den_pows[v] = dp;
        }
    }
    let mut acc = ZPoly::zero();
    let mut parts: Vec<(Mono, BigInt)> = Vec::new();
    // Group terms by the exponents of the substituted variables.
    let mut sorted: Vec<&(Mono, BigInt)> = p.terms().iter().collect();
    let key = |m: Mono| -> [u32; 3] {
        let e = m.exps();
        [
            if vals[0].is_some() { e[0] } else { 0 },
            if vals[1].is_some() { e[1] } else { 0 },
            if vals[2].is_some() { e[2] } else { 0 },
        ]
    };
    sorted.sort_by_key(|(m, _)| key(*m));
    let mut i = 0;
    while i < sorted.len() {
        let k = key(sorted[i].0);
        parts.clear();
        while i < sorted.len() && key(sorted[i].0) == k {
            let (m, c) = sorted[i];
            let e = m.exps();
            let kept = Mono::new(
                if vals[0].is_some() { 0 } else { e[0] },
                if vals[1].is_some() { 0 } else { e[1] },
                if vals[2].is_some() { 0 } else { e[2] },
            );
            parts.push((kept, c.clone()));
            i += 1;
        }
        let mut term = ZPoly::from_terms(parts.clone());
        for v in 0..3 {
            if vals[v].is_some() {
                let e = k[v] as usize;
                let d = degs[v] as usize;
                term = term.mul(&num_pows[v][e]).mul(&den_pows[v][d - e]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

fn cancel(a: &ZPoly, b: &ZPoly) -> (ZPoly, ZPoly) {
    if a.is_constant() || b.is_constant() {
        return (a.clone(), b.clone());
    }
    let g = gcd(a, b);
    if g.is_constant() {
        (a.clone(), b.clone())
    } else {
        (a.div_exact(&g).unwrap(), b.div_exact(&g).unwrap())
    }
}

pub fn eval_zpoly_f64(p: &ZPoly, pt: [f64; 3]) -> f64 {
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let [a, b, e] = m.exps();
        acc += c.to_f64().unwrap_or(f64::NAN) * pt[0].powi(a as i32) * pt[1].powi(b as i32) * pt[2].powi(e as i32);
    }
    acc
}

pub fn eval_zpoly_mod(p: &ZPoly, pt: [u64; 3], q: u64) -> u64 {
    let qb = BigInt::from(q);
    let mut acc = 0u64;
    for (m, c) in p.terms() {
        let [a, b, e] = m.exps();
        let cm = c.mod_floor(&qb).to_u64().unwrap();
        let v = modp::mulmod(
            modp::mulmod(cm, modp::powmod(pt[0], a as u64, q), q),
            modp::mulmod(modp::powmod(pt[1], b as u64, q), modp::powmod(pt[2], e as u64, q), q),
            q,
        );
        acc = modp::addmod(acc, v, q);
    }
    acc
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn from_i64(n: i64) -> Self {
        RatFunc::from_int(n)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        self.div(o).ok()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.den.is_constant() && self.num.is_monomial() {
            let k = BigRational::new(self.num.lc().unwrap().clone(), self.den.lc().unwrap().clone());
            write!(f, "{}", Poly::monomial(self.num.lm().unwrap(), k))
        } else {
            let wrap_num = self.num.len() > 1;
            if wrap_num {
                write!(f, "({})", self.num)?;
            } else {
                write!(f, "{}", self.num)?;
            }
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<ZPoly> for RatFunc {
    fn from(p: ZPoly) -> Self {
        RatFunc::from_zpoly(p)
    }
}

/// Parses `expr` built from polynomials in canonical form, `(`, `)`, `*`,
/// `/`, `+`, `-`, integer powers `^n` and the Laurent shorthand `x^-1`.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc, String> {
    let toks = tokenize(s)?;
    let mut pos = 0;
    let r = parse_sum(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(format!("unexpected token at {pos} in '{s}'"));
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let n: String = cs[st..i].iter().collect();
            out.push(Tok::Num(n.parse().unwrap()));
        } else if let Some(v) = ['t', 'x', 'y'].iter().position(|&n| n == c) {
            out.push(Tok::Var(v));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

fn parse_sum(t: &[Tok], pos: &mut usize) -> Result<RatFunc, String> {
    let mut acc = if t.get(*pos) == Some(&Tok::Op('-')) {
        *pos += 1;
        parse_product(t, pos)?.neg()
    } else {
        parse_product(t, pos)?
    };
    while let Some(Tok::Op(c @ ('+' | '-'))) = t.get(*pos) {
        let c = *c;
        *pos += 1;
        let r = parse_product(t, pos)?;
        acc = if c == '+' { acc.add(&r) } else { acc.sub(&r) };
    }
    Ok(acc)
}

fn parse_product(t: &[Tok], pos: &mut usize) -> Result<RatFunc, String> {
    let mut acc = parse_power(t, pos)?;
    while let Some(Tok::Op(c @ ('*' | '/'))) = t.get(*pos) {
        let c = *c;
        *pos += 1;
        let r = parse_power(t, pos)?;
        acc = if c == '*' { acc.mul(&r) } else { acc.div(&r).map_err(|e| e.to_string())? };
    }
    Ok(acc)
}

fn parse_power(t: &[Tok], pos: &mut usize) -> Result<RatFunc, String> {
    let base = parse_atom(t, pos)?;
    if t.get(*pos) == Some(&Tok::Op('^')) {
        *pos += 1;
        let neg = if t.get(*pos) == Some(&Tok::Op('-')) {
            *pos += 1;
            true
        } else {
            false
        };
        match t.get(*pos) {
            Some(Tok::Num(n)) => {
                *pos += 1;
                let e = n.to_i32().ok_or("exponent too large")?;
                let e = if neg { -e } else { e };
                base.powi(e).map_err(|e| e.to_string())
            }
            _ => Err("expected exponent".into()),
        }
    } else {
        Ok(base)
    }
}

fn parse_atom(t: &[Tok], pos: &mut usize) -> Result<RatFunc, String> {
    match t.get(*pos) {
        Some(Tok::Num(n)) => {
            *pos += 1;
            Ok(RatFunc::from_zpoly(ZPoly::constant(n.clone())))
        }
        Some(Tok::Var(v)) => {
            *pos += 1;
            Ok(RatFunc::var(*v))
        }
        Some(Tok::Op('(')) => {
            *pos += 1;
            let r = parse_sum(t, pos)?;
            if t.get(*pos) != Some(&Tok::Op(')')) {
                return Err("missing ')'".into());
            }
            *pos += 1;
            Ok(r)
        }
        Some(Tok::Op('-')) => {
            *pos += 1;
            Ok(parse_power(t, pos)?.neg())
        }
        other => Err(format!("unexpected token {other:?}")),
    }
}
