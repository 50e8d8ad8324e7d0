//! Truncated power series in t over a coefficient ring.

use crate::laurent::LPoly;
use crate::mono::T;
use crate::ratfunc::RatFunc;
use crate::ring::Ring;
use crate::poly::ZPoly;
use crate::AlgebraError;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

/// `sum_{k < prec} c[k] t^k + O(t^prec)`.
#[derive(Clone, PartialEq)]
pub struct Series<C> {
    c: Vec<C>,
}

pub type TSeries = Series<LPoly>;

impl<C: Ring> Series<C> {
    pub fn zero(prec: usize) -> Self {
        Series { c: vec![C::zero(); prec] }
    }

    pub fn one(prec: usize) -> Self {
        Self::constant(C::one(), prec)
    }

    pub fn constant(k: C, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if prec > 0 {
            s.c[0] = k;
        }
        s
    }

    /// `k * t^e`.
    pub fn monomial(k: C, e: usize, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if e < prec {
            s.c[e] = k;
        }
        s
    }

    pub fn from_coeffs(c: Vec<C>) -> Self {
        Series { c }
    }

    pub fn prec(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.c
    }

    pub fn coeff(&self, k: usize) -> C {
        self.c.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn set_coeff(&mut self, k: usize, v: C) {
        if k < self.c.len() {
            self.c[k] = v;
        }
    }

    /// Index of the first nonzero coefficient, or `prec` if none is known.
    pub fn valuation(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(self.c.len())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn truncate(&self, prec: usize) -> Self {
        Series { c: self.c.iter().take(prec).cloned().collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec().min(o.prec());
        Series { c: (0..p).map(|k| self.c[k].add(&o.c[k])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec().min(o.prec());
        Series { c: (0..p).map(|k| self.c[k].sub(&o.c[k])).collect() }
    }

    pub fn neg(&self) -> Self {
        Series { c: self.c.iter().map(|x| x.neg()).collect() }
    }

    pub fn scale(&self, k: &C) -> Self {
        Series { c: self.c.iter().map(|x| x.mul(k)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let va = self.valuation();
        let vb = o.valuation();
        // Precision of a product is limited by the factor valuations.
        let p = (self.prec() + vb).min(o.prec() + va).min(self.prec().max(o.prec()));
        let mut c = vec![C::zero(); p];
        for i in va..self.prec() {
            if self.c[i].is_zero() {
                continue;
            }
            for j in vb..o.prec() {
                if i + j >= p {
                    break;
                }
                if o.c[j].is_zero() {
                    continue;
                }
                let prod = self.c[i].mul(&o.c[j]);
                c[i + j].add_assign(&prod);
            }
        }
        Series { c }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.prec());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `t^e`.
    pub fn shift_up(&self, e: usize) -> Self {
        let mut c = vec![C::zero(); e];
        c.extend(self.c.iter().cloned());
        Series { c }
    }

    /// Divides by `t^e`; the low coefficients must vanish.
    pub fn shift_down(&self, e: usize) -> Result<Self, AlgebraError> {
        if self.c.iter().take(e).any(|x| !x.is_zero()) {
            return Err(AlgebraError::NotExpandable);
        }
        Ok(Series { c: self.c.iter().skip(e).cloned().collect() })
    }

    /// Inverse when the constant term is a unit.
    pub fn inv(&self) -> Result<Self, AlgebraError> {
        let p = self.prec();
        if p == 0 {
            return Ok(Series { c: vec![] });
        }
        let b0 = self.c[0].try_inv().ok_or(AlgebraError::NotExpandable)?;
        let mut b: Vec<C> = Vec::with_capacity(p);
        b.push(b0.clone());
        for k in 1..p {
            let mut s = C::zero();
            for j in 1..=k {
                if !self.c[j].is_zero() && !b[k - j].is_zero() {
                    s.add_assign(&self.c[j].mul(&b[k - j]));
                }
            }
            b.push(s.mul(&b0).neg());
        }
        Ok(Series { c: b })
    }

    /// `self / o`, cancelling a common power of t first.
    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        let w = o.valuation();
        if w >= o.prec() {
            return Err(AlgebraError::DivisionByZero);
        }
        let num = self.shift_down(w)?;
        let den = o.shift_down(w)?;
        let p = num.prec().min(den.prec());
        Ok(num.truncate(p).mul(&den.truncate(p).inv()?).truncate(p))
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series { c: self.c.iter().map(f).collect() }
    }

    /// Formal derivative in t (the precision drops by one).
    pub fn derivative(&self) -> Self {
        Series {
            c: (1..self.prec()).map(|k| self.c[k].mul(&C::from_i64(k as i64))).collect(),
        }
    }
}

/// Expands a polynomial in t with coefficients given by `coef` (applied to
/// each monomial's (x, y) part).
fn zpoly_to_series<C: Ring>(p: &ZPoly, prec: usize, coef: &impl Fn(u32, u32, &BigInt) -> C) -> Series<C> {
    let mut s: Series<C> = Series::zero(prec);
    for (m, c) in p.terms() {
        let k = m.exp(T) as usize;
        if k < prec {
            let term = coef(m.exp(1), m.exp(2), c);
            s.c[k].add_assign(&term);
        }
    }
    s
}

/// t-expansion of `f` to `O(t^(n+1))` with Laurent coefficients in (x, y).
///
/// Requires `den(0, x, y)` to be a nonzero monomial, so that it is a unit
/// in the Laurent ring.
pub fn series_expand(f: &RatFunc, n: usize) -> Result<TSeries, AlgebraError> {
    let prec = n + 1;
    let coef = |i: u32, j: u32, c: &BigInt| LPoly::monomial(i as i32, j as i32, BigRational::from_integer(c.clone()));
    let den = zpoly_to_series(f.den(), prec, &coef);
    if den.coeff(0).len() != 1 {
        return Err(AlgebraError::NotExpandable);
    }
    let num = zpoly_to_series(f.num(), prec, &coef);
    Ok(num.mul(&den.inv()?))
}

/// t-expansion of `f` with x and y fixed to rational values.
pub fn series_expand_at(f: &RatFunc, x: &BigRational, y: &BigRational, n: usize) -> Result<Series<BigRational>, AlgebraError> {
    let prec = n + 1;
    let coef = |i: u32, j: u32, c: &BigInt| {
        BigRational::from_integer(c.clone()) * Ring::pow(x, i) * Ring::pow(y, j)
    };
    let w = zpoly_to_series(f.den(), prec, &coef).valuation();
    let den = zpoly_to_series(f.den(), prec + w, &coef);
    let num = zpoly_to_series(f.num(), prec + w, &coef);
    num.div(&den).map(|s| s.truncate(prec))
}

impl TSeries {
    /// Series evaluated at fixed rational (x, y).
    pub fn eval_xy(&self, x: &BigRational, y: &BigRational) -> Series<BigRational> {
        self.map(|c| c.eval(x, y))
    }
}

impl<C: Ring + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) if !rest.contains(" + ") && !rest.contains(" - ") => (true, rest.to_string()),
                _ => (false, s.clone()),
            };
            let compound = body.contains(" + ") || body.contains(" - ");
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let tpow = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if tpow.is_empty() {
                write!(f, "{}", if compound { format!("({body})") } else { body })?;
            } else if body == "1" {
                write!(f, "{tpow}")?;
            } else if compound {
                write!(f, "{tpow}*({body})")?;
            } else {
                write!(f, "{tpow}*{body}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.prec())
    }
}

impl<C: Ring + fmt::Display> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::parse_ratfunc;
    use crate::ring::int;

    #[test]
    fn geometric_series() {
        let f = parse_ratfunc("1/(1-t)").unwrap();
        let s = series_expand(&f, 5).unwrap();
        assert_eq!(s.prec(), 6);
        assert!(s.coeffs().iter().all(|c| *c == LPoly::one()));
    }

    #[test]
    fn laurent_expansion() {
        let f = parse_ratfunc("t^2*x/(y-t)").unwrap();
        let s = series_expand(&f, 4).unwrap();
        assert_eq!(s.to_string(), "t^2*x*y^-1 + t^3*x*y^-2 + t^4*x*y^-3 + O(t^5)");
        assert!(series_expand(&parse_ratfunc("1/(x+y-t)").unwrap(), 3).is_err());
        assert!(series_expand(&parse_ratfunc("1/t").unwrap(), 3).is_err());
    }

    #[test]
    fn valuation_division() {
        let a = Series::from_coeffs(vec![int(0), int(2), int(4), int(0)]);
        let b = Series::from_coeffs(vec![int(0), int(1), int(1), int(0)]);
        let q = a.div(&b).unwrap();
        assert_eq!(q.coeffs(), &[int(2), int(2), int(-2)]);
    }
}
