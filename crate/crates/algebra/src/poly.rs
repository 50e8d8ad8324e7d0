//! Sparse polynomials in (t, x, y) over a coefficient ring.

use crate::mono::{Mono, VAR_NAMES};
use crate::ring::Ring;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Terms are kept with strictly decreasing monomials (graded lex) and no
/// zero coefficients, so derived equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    terms: Vec<(Mono, C)>,
}

pub type MPoly = Poly<BigRational>;
pub type ZPoly = Poly<BigInt>;

impl<C: Ring> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Mono::ONE, c)
    }

    pub fn monomial(m: Mono, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(v: usize) -> Self {
        Self::monomial(Mono::var(v, 1), C::one())
    }

    /// Builds from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(mut terms: Vec<(Mono, C)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, C)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => lc.add_assign(&c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if lc.is_zero() {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    /// Terms already sorted strictly decreasing and nonzero.
    pub(crate) fn from_sorted(terms: Vec<(Mono, C)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn lm(&self) -> Option<Mono> {
        self.terms.first().map(|t| t.0)
    }

    pub fn lc(&self) -> Option<&C> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn constant_term(&self) -> C {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => C::zero(),
        }
    }

    pub fn coeff(&self, m: Mono) -> C {
        match self.terms.binary_search_by(|t| m.cmp(&t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => C::zero(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        merge(&self.terms, &o.terms, |c| c.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        merge(&self.terms, &o.terms, |c| c.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.mul(k)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn mul_term(&self, m: Mono, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.mul(m), c.mul(k)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            return o.mul_term(self.terms[0].0, &self.terms[0].1);
        }
        if o.terms.len() == 1 {
            return self.mul_term(o.terms[0].0, &o.terms[0].1);
        }
        let mut acc: Vec<(Mono, C)> = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                acc.push((ma.mul(*mb), ca.mul(cb)));
            }
        }
        Self::from_terms(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.lm().map(|m| m.deg()).unwrap_or(0)
    }

    /// Largest monomial dividing every term.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.iter();
        match it.next() {
            None => Mono::ONE,
            Some((m0, _)) => it.fold(*m0, |g, (m, _)| g.gcd(*m)),
        }
    }

    pub fn div_mono(&self, d: Mono) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.div(d), c.clone())).collect(),
        }
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    /// Coefficients with respect to variable `v`: entry k is the coefficient
    /// of v^k (with v removed).
    pub fn coeffs_in(&self, v: usize) -> Vec<Self> {
        let d = self.degree(v) as usize;
        let mut buckets: Vec<Vec<(Mono, C)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v);
            buckets[e as usize].push((m.with_exp(v, 0), c.clone()));
        }
        buckets.into_iter().map(Self::from_terms).collect()
    }

    pub fn from_coeffs_in(v: usize, cs: &[Self]) -> Self {
        let mut acc = Vec::new();
        for (k, c) in cs.iter().enumerate() {
            let vm = Mono::var(v, k as u32);
            for (m, a) in &c.terms {
                acc.push((m.mul(vm), a.clone()));
            }
        }
        Self::from_terms(acc)
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                out.push((m.with_exp(v, e - 1), c.mul(&C::from_i64(e as i64))));
            }
        }
        Self::from_terms(out)
    }

    /// Evaluates at a point of any ring that the coefficients map into.
    pub fn eval_with<R: Ring>(&self, pt: &[R; 3], lift: impl Fn(&C) -> R) -> R {
        let mut pows: [Vec<R>; 3] = [vec![R::one()], vec![R::one()], vec![R::one()]];
        for v in 0..3 {
            let d = self.degree(v) as usize;
            for k in 1..=d {
                let next = pows[v][k - 1].mul(&pt[v]);
                pows[v].push(next);
            }
        }
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let [a, b, e] = m.exps();
            let term = lift(c)
                .mul(&pows[0][a as usize])
                .mul(&pows[1][b as usize])
                .mul(&pows[2][e as usize]);
            acc.add_assign(&term);
        }
        acc
    }

    pub fn eval(&self, pt: &[C; 3]) -> C {
        self.eval_with(pt, |c| c.clone())
    }

    /// Substitutes a polynomial for variable `v`.
    pub fn subst_var(&self, v: usize, val: &Self) -> Self {
        let cs = self.coeffs_in(v);
        let mut acc = Self::zero();
        for c in cs.iter().rev() {
            acc = acc.mul(val).add(c);
        }
        acc
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !dm.divides(*m) {
                    return None;
                }
                out.push((m.div(*dm), c.div_exact(dc)?));
            }
            return Some(Poly::from_sorted(out));
        }
        for v in 0..3 {
            if d.degree(v) > self.degree(v) {
                return None;
            }
        }
        let (dm, dc) = d.terms[0].clone();
        let mut rem: BTreeMap<Mono, C> = self.terms.iter().cloned().collect();
        let mut q: Vec<(Mono, C)> = Vec::new();
        while let Some((&m, c)) = rem.iter().next_back() {
            if !dm.divides(m) {
                return None;
            }
            let qc = c.div_exact(&dc)?;
            let qm = m.div(dm);
            for v in 0..3 {
                if qm.exp(v) + d.degree(v) > self.degree(v) {
                    return None;
                }
            }
            for (bm, bc) in &d.terms {
                let key = qm.mul(*bm);
                let delta = qc.mul(bc);
                match rem.get_mut(&key) {
                    Some(cur) => {
                        *cur = cur.sub(&delta);
                        if cur.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, delta.neg());
                    }
                }
            }
            q.push((qm, qc));
        }
        Some(Poly::from_sorted(q))
    }
}

fn merge<C: Ring>(a: &[(Mono, C)], b: &[(Mono, C)], fb: impl Fn(&C) -> C) -> Poly<C> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].0 > b[j].0 {
            out.push(a[i].clone());
            i += 1;
        } else if a[i].0 < b[j].0 {
            out.push((b[j].0, fb(&b[j].1)));
            j += 1;
        } else {
            let c = a[i].1.add(&fb(&b[j].1));
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(m, c)| (*m, fb(c))));
    Poly { terms: out }
}

impl<C: Ring> Ring for Poly<C> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn from_i64(n: i64) -> Self {
        Poly::constant(C::from_i64(n))
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_constant() {
            self.constant_term().try_inv().map(Poly::constant)
        } else {
            None
        }
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        if Poly::is_zero(o) {
            None
        } else {
            Poly::div_exact(self, o)
        }
    }
}

impl ZPoly {
    /// Gcd of the integer coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        let mut g: BigInt = Zero::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if One::is_one(&g) {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        self.div_int(&g)
    }

    pub fn div_int(&self, k: &BigInt) -> ZPoly {
        if One::is_one(k) {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c / k)).collect(),
        }
    }

    pub fn to_q(&self) -> MPoly {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
    }
}

impl MPoly {
    /// Splits as `(k, p)` with `self = k * p`, `p` integral and primitive
    /// with positive leading coefficient.
    pub fn to_z(&self) -> (BigRational, ZPoly) {
        if self.is_zero() {
            return (Zero::zero(), ZPoly::zero());
        }
        let mut l: BigInt = One::one();
        for (_, c) in &self.terms {
            l = l.lcm(c.denom());
        }
        let z: ZPoly = self.map_coeffs(|c| (c * BigRational::from_integer(l.clone())).to_integer());
        let p = z.primitive();
        let k = BigRational::new(z.terms[0].1.clone(), p.terms[0].1.clone() * l);
        (k, p)
    }
}

pub(crate) fn fmt_terms<C>(
    f: &mut fmt::Formatter<'_>,
    terms: &[(Mono, C)],
    coeff: impl Fn(&C) -> (bool, String),
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (m, c)) in terms.iter().enumerate() {
        let (neg, mag) = coeff(c);
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        if m.is_one() {
            write!(f, "{mag}")?;
        } else if mag == "1" {
            write!(f, "{m}")?;
        } else {
            write!(f, "{mag}*{m}")?;
        }
    }
    Ok(())
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms, |c| (c.is_negative(), c.abs().to_string()))
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms, |c| (c.is_negative(), c.abs().to_string()))
    }
}

impl<C: Ring> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[")?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:?}*{m}")?;
        }
        write!(f, "]")
    }
}

/// Parses the canonical text form, e.g. `t^2*x - 3/2*y + 1`.
pub fn parse_mpoly(s: &str) -> Result<MPoly, String> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut terms = Vec::new();
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        rest = &body[end..];
        let mut coeff = BigRational::from_integer(BigInt::from(sign));
        let mut exps = [0u32; 3];
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(format!("bad term '{term}'"));
            }
            let (base, e) = match factor.split_once('^') {
                Some((b, e)) => (b, e.parse::<u32>().map_err(|_| format!("bad exponent in '{factor}'"))?),
                None => (factor, 1),
            };
            if let Some(v) = VAR_NAMES.iter().position(|n| *n == base) {
                exps[v] += e;
            } else {
                let q: BigRational = base.parse().map_err(|_| format!("bad coefficient '{base}'"))?;
                coeff *= Ring::pow(&q, e);
            }
        }
        terms.push((Mono::from_exps(exps), coeff));
    }
    Ok(MPoly::from_terms(terms))
}
