//! Sparse Laurent polynomials in (x, y) with rational coefficients.

use crate::poly::MPoly;
use crate::ring::Ring;
use crate::mono::Mono;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LPoly {
    terms: BTreeMap<(i32, i32), BigRational>,
}

impl LPoly {
    pub fn zero() -> LPoly {
        LPoly::default()
    }

    pub fn one() -> LPoly {
        Self::monomial(0, 0, One::one())
    }

    pub fn monomial(i: i32, j: i32, c: BigRational) -> LPoly {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert((i, j), c);
        }
        LPoly { terms }
    }

    pub fn constant(c: BigRational) -> LPoly {
        Self::monomial(0, 0, c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: i32, j: i32) -> BigRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn add_term(&mut self, i: i32, j: i32, c: &BigRational) {
        if Zero::is_zero(c) {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Zero::zero);
        *e += c;
        if Zero::is_zero(e) {
            self.terms.remove(&(i, j));
        }
    }

    /// Polynomial in x, y with the t-exponent ignored (the caller passes a
    /// t-free polynomial or one coefficient of a t-expansion).
    pub fn from_mpoly_xy(p: &MPoly) -> LPoly {
        let mut out = LPoly::zero();
        for (m, c) in p.terms() {
            out.add_term(m.exp(1) as i32, m.exp(2) as i32, c);
        }
        out
    }

    /// Splits into `P(x,y) * x^a * y^b` with `P` a polynomial (t = 0).
    pub fn to_shifted(&self) -> (MPoly, i32, i32) {
        let a = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        let p = MPoly::from_terms(
            self.terms
                .iter()
                .map(|(&(i, j), c)| (Mono::new(0, (i - a) as u32, (j - b) as u32), c.clone()))
                .collect(),
        );
        (p, a, b)
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc: BigRational = Zero::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * powi(x, i) * powi(y, j);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_f64().unwrap() * x.powi(i) * y.powi(j))
            .sum()
    }

    pub fn scale(&self, k: &BigRational) -> LPoly {
        if Zero::is_zero(k) {
            return LPoly::zero();
        }
        LPoly { terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect() }
    }

    pub fn shift(&self, di: i32, dj: i32) -> LPoly {
        LPoly { terms: self.terms.iter().map(|(&(i, j), c)| ((i + di, j + dj), c.clone())).collect() }
    }

    /// Keeps only the monomials `x^i y^j` with `keep(i, j)`.
    pub fn filter(&self, keep: impl Fn(i32, i32) -> bool) -> LPoly {
        LPoly {
            terms: self.terms.iter().filter(|(&(i, j), _)| keep(i, j)).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    pub fn max_abs_exp(&self) -> i32 {
        self.terms.keys().map(|&(i, j)| i.abs().max(j.abs())).max().unwrap_or(0)
    }

    pub fn is_nonneg_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer() && !c.is_negative())
    }

    /// Sorted by descending total degree, then descending x exponent.
    fn display_order(&self) -> Vec<(&(i32, i32), &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        v
    }
}

fn powi(x: &BigRational, e: i32) -> BigRational {
    let p = Ring::pow(x, e.unsigned_abs());
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

impl Ring for LPoly {
    fn zero() -> Self {
        LPoly::zero()
    }
    fn one() -> Self {
        LPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, c);
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &o.terms {
            out.add_term(i, j, &-c);
        }
        out
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = LPoly::zero();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &o.terms {
                out.add_term(i + k, j + l, &(c * d));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        LPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
    fn from_i64(n: i64) -> Self {
        LPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }
    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&(i, j), c) = self.terms.iter().next().unwrap();
        Some(LPoly::monomial(-i, -j, c.recip()))
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        o.try_inv().map(|inv| self.mul(&inv))
    }
    fn add_assign(&mut self, o: &Self) {
        for (&(i, j), c) in &o.terms {
            self.add_term(i, j, c);
        }
    }
}

fn fmt_factor(f: &mut fmt::Formatter<'_>, name: &str, e: i32, first: &mut bool) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        write!(f, "*")?;
    }
    *first = false;
    if e == 1 {
        write!(f, "{name}")
    } else {
        write!(f, "{name}^{e}")
    }
}

pub(crate) fn fmt_laurent_term(
    f: &mut fmt::Formatter<'_>,
    c: &BigRational,
    exps: &[(&str, i32)],
    leading: bool,
) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    match (leading, neg) {
        (true, true) => write!(f, "-")?,
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
        (true, false) => {}
    }
    let is_unit = exps.iter().all(|&(_, e)| e == 0);
    let mut first = true;
    if !One::is_one(&a) || is_unit {
        write!(f, "{a}")?;
        first = false;
    }
    for &(n, e) in exps {
        fmt_factor(f, n, e, &mut first)?;
    }
    Ok(())
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (&(i, j), c)) in self.display_order().into_iter().enumerate() {
            fmt_laurent_term(f, c, &[("x", i), ("y", j)], k == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
