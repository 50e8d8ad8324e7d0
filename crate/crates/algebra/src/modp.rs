//! Arithmetic modulo word-size primes, dense univariate and sparse
//! multivariate polynomials over Z/p.

use std::sync::OnceLock;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod p");
    powmod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, largest first.
pub fn primes() -> &'static [u64] {
    static P: OnceLock<Vec<u64>> = OnceLock::new();
    P.get_or_init(|| {
        let mut v = Vec::new();
        let mut n = (1u64 << 62) - 1;
        while v.len() < 256 {
            if is_prime(n) {
                v.push(n);
            }
            n -= 2;
        }
        v
    })
}

/// Signed integer from a residue in the symmetric range.
pub fn symmetric(a: u64, p: u64) -> i128 {
    if a > p / 2 {
        a as i128 - p as i128
    } else {
        a as i128
    }
}

// ---------- dense univariate, ascending coefficients ----------

pub fn utrim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn ueval(a: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0;
    for &c in a.iter().rev() {
        acc = addmod(mulmod(acc, x, p), c, p);
    }
    acc
}

pub fn umul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addmod(out[i + j], mulmod(x, y, p), p);
        }
    }
    utrim(&mut out);
    out
}

/// Quotient and remainder; `b` nonzero.
pub fn udivrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    utrim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = invmod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = mulmod(r[k + db], inv, p);
        q[k] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = submod(r[k + j], mulmod(c, bj, p), p);
            }
        }
    }
    r.truncate(db);
    utrim(&mut r);
    utrim(&mut q);
    (q, r)
}

pub fn umonic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = invmod(l, p);
            a.iter().map(|&c| mulmod(c, inv, p)).collect()
        }
    }
}

/// Monic gcd (empty for gcd(0,0)).
pub fn ugcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    utrim(&mut x);
    utrim(&mut y);
    while !y.is_empty() {
        let (_, r) = udivrem(&x, &y, p);
        x = y;
        y = r;
    }
    umonic(&x, p)
}

// ---------- sparse multivariate, lex order on [u32; 3] ----------

pub type Exp = [u32; 3];

/// Terms sorted by decreasing lex exponent, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PP {
    pub terms: Vec<(Exp, u64)>,
}

impl PP {
    pub fn zero() -> PP {
        PP { terms: Vec::new() }
    }

    pub fn constant(c: u64) -> PP {
        if c == 0 {
            PP::zero()
        } else {
            PP { terms: vec![([0; 3], c)] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms(mut t: Vec<(Exp, u64)>, p: u64) -> PP {
        t.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Exp, u64)> = Vec::with_capacity(t.len());
        for (e, c) in t {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = addmod(*lc, c, p),
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        PP { terms: out }
    }

    pub fn lead(&self) -> Option<Exp> {
        self.terms.first().map(|t| t.0)
    }

    pub fn lc(&self) -> u64 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0)
    }

    pub fn scale(&self, k: u64, p: u64) -> PP {
        if k == 0 {
            return PP::zero();
        }
        PP {
            terms: self.terms.iter().map(|(e, c)| (*e, mulmod(*c, k, p))).collect(),
        }
    }

    pub fn monic(&self, p: u64) -> PP {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lc(), p), p)
    }

    pub fn add(&self, o: &PP, p: u64) -> PP {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (a, b) = (&self.terms, &o.terms);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i].0 > b[j].0 {
                out.push(a[i]);
                i += 1;
            } else if a[i].0 < b[j].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let c = addmod(a[i].1, b[j].1, p);
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        PP { terms: out }
    }

    pub fn sub(&self, o: &PP, p: u64) -> PP {
        self.add(&o.scale(p - 1, p), p)
    }

    pub fn mul(&self, o: &PP, p: u64) -> PP {
        let mut acc = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                acc.push(([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], mulmod(*ca, *cb, p)));
            }
        }
        PP::from_terms(acc, p)
    }

    /// Multiplies by a dense univariate polynomial in variable `v`.
    pub fn mul_univ(&self, u: &[u64], v: usize, p: u64) -> PP {
        let mut acc = Vec::with_capacity(self.terms.len() * u.len());
        for (e, c) in &self.terms {
            for (k, &uk) in u.iter().enumerate() {
                if uk != 0 {
                    let mut f = *e;
                    f[v] += k as u32;
                    acc.push((f, mulmod(*c, uk, p)));
                }
            }
        }
        PP::from_terms(acc, p)
    }

    /// Substitutes `v = a`.
    pub fn eval_var(&self, v: usize, a: u64, p: u64) -> PP {
        let d = self.degree(v) as usize;
        let mut pw = vec![1u64; d + 1];
        for k in 1..=d {
            pw[k] = mulmod(pw[k - 1], a, p);
        }
        let t = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = *e;
                let k = f[v];
                f[v] = 0;
                (f, mulmod(*c, pw[k as usize], p))
            })
            .collect();
        PP::from_terms(t, p)
    }

    /// Groups terms by exponents of variables `0..last` (exclusive); each
    /// group is a dense univariate polynomial in `last`. Groups come out in
    /// decreasing lex order of their key.
    pub fn groups(&self, last: usize) -> Vec<(Exp, Vec<u64>)> {
        let mut out: Vec<(Exp, Vec<u64>)> = Vec::new();
        for (e, c) in &self.terms {
            let mut key = *e;
            key[last] = 0;
            let k = e[last] as usize;
            match out.last_mut() {
                Some((lk, u)) if *lk == key => {
                    if u.len() <= k {
                        u.resize(k + 1, 0);
                    }
                    u[k] = *c;
                }
                _ => {
                    let mut u = vec![0u64; k + 1];
                    u[k] = *c;
                    out.push((key, u));
                }
            }
        }
        out
    }

    pub fn from_groups(g: &[(Exp, Vec<u64>)], last: usize, p: u64) -> PP {
        let mut t = Vec::new();
        for (key, u) in g {
            for (k, &c) in u.iter().enumerate() {
                if c != 0 {
                    let mut e = *key;
                    e[last] = k as u32;
                    t.push((e, c));
                }
            }
        }
        PP::from_terms(t, p)
    }

    /// Exact division in lex order; `None` if not divisible.
    pub fn div_exact(&self, d: &PP, p: u64) -> Option<PP> {
        if self.is_zero() {
            return Some(PP::zero());
        }
        let (de, dc) = d.terms[0];
        let inv = invmod(dc, p);
        let mut rem = std::collections::BTreeMap::new();
        for (e, c) in &self.terms {
            rem.insert(*e, *c);
        }
        let degs: Vec<u32> = (0..3).map(|v| self.degree(v)).collect();
        let mut q = Vec::new();
        while let Some((&e, &c)) = rem.iter().next_back() {
            if (0..3).any(|v| e[v] < de[v]) {
                return None;
            }
            let qe = [e[0] - de[0], e[1] - de[1], e[2] - de[2]];
            if (0..3).any(|v| qe[v] + d.degree(v) > degs[v]) {
                return None;
            }
            let qc = mulmod(c, inv, p);
            for (be, bc) in &d.terms {
                let key = [qe[0] + be[0], qe[1] + be[1], qe[2] + be[2]];
                let delta = mulmod(qc, *bc, p);
                let cur = rem.get(&key).copied().unwrap_or(0);
                let nv = submod(cur, delta, p);
                if nv == 0 {
                    rem.remove(&key);
                } else {
                    rem.insert(key, nv);
                }
            }
            q.push((qe, qc));
        }
        Some(PP::from_terms(q, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime_and_large() {
        let ps = primes();
        assert!(ps[0] < 1 << 62 && ps[0] > (1 << 62) - 1000);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn univariate_gcd() {
        let p = 1_000_000_007;
        // (x+1)(x+2) and (x+1)(x+3)
        let a = umul(&[1, 1], &[2, 1], p);
        let b = umul(&[1, 1], &[3, 1], p);
        assert_eq!(ugcd(&a, &b, p), vec![1, 1]);
        let (q, r) = udivrem(&a, &[1, 1], p);
        assert_eq!(q, vec![2, 1]);
        assert!(r.is_empty());
    }
}
