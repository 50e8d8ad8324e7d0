//! Multivariate polynomial gcd over Z by the dense modular method:
//! images modulo word-size primes, recursive evaluation/interpolation over
//! Z/p, Chinese remaindering, and trial division to certify the result.

use crate::modp::{self, invmod, mulmod, submod, ueval, ugcd, umul, udivrem, Exp, PP};
use crate::mono::Mono;
use crate::poly::ZPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

fn to_dense(a: &PP, v: usize) -> Vec<u64> {
    let mut u = vec![0u64; a.degree(v) as usize + 1];
    for (e, c) in &a.terms {
        u[e[v] as usize] = *c;
    }
    modp::utrim(&mut u);
    u
}

fn from_dense(u: &[u64], v: usize) -> PP {
    let mut t = Vec::new();
    for (k, &c) in u.iter().enumerate().rev() {
        if c != 0 {
            let mut e = [0u32; 3];
            e[v] = k as u32;
            t.push((e, c));
        }
    }
    PP { terms: t }
}

fn divide_groups(g: &[(Exp, Vec<u64>)], d: &[u64], p: u64) -> Vec<(Exp, Vec<u64>)> {
    g.iter()
        .map(|(k, u)| {
            let (q, r) = udivrem(u, d, p);
            debug_assert!(r.is_empty());
            (*k, q)
        })
        .collect()
}

fn content_of(g: &[(Exp, Vec<u64>)], p: u64) -> Vec<u64> {
    let mut c: Vec<u64> = Vec::new();
    for (_, u) in g {
        c = ugcd(&c, u, p);
        if c.len() == 1 {
            break;
        }
    }
    c
}

/// Monic gcd over Z/p of polynomials in variables `0..k`.
pub(crate) fn pgcd(a: &PP, b: &PP, k: usize, p: u64) -> PP {
    if a.is_zero() {
        return b.monic(p);
    }
    if b.is_zero() {
        return a.monic(p);
    }
    if k == 1 {
        let g = ugcd(&to_dense(a, 0), &to_dense(b, 0), p);
        return from_dense(&g, 0);
    }
    let last = k - 1;
    let ga = a.groups(last);
    let gb = b.groups(last);
    let ca = content_of(&ga, p);
    let cb = content_of(&gb, p);
    let c = ugcd(&ca, &cb, p);
    let ga = divide_groups(&ga, &ca, p);
    let gb = divide_groups(&gb, &cb, p);
    if ga.len() == 1 && ga[0].0 == [0; 3] || gb.len() == 1 && gb[0].0 == [0; 3] {
        return from_dense(&c, last);
    }
    let a1 = PP::from_groups(&ga, last, p);
    let b1 = PP::from_groups(&gb, last, p);
    let lca = &ga[0].1;
    let lcb = &gb[0].1;
    let g = ugcd(lca, lcb, p);
    let bound = (g.len() - 1) + (a1.degree(last).min(b1.degree(last)) as usize);

    let mut h: Option<PP> = None;
    let mut lead = [0u32; 3];
    let mut q: Vec<u64> = vec![1];
    let mut npts = 0usize;
    let mut alpha = 0u64;
    loop {
        alpha += 1;
        assert!(alpha < p, "exhausted evaluation points");
        if ueval(lca, alpha, p) == 0 || ueval(lcb, alpha, p) == 0 {
            continue;
        }
        let aa = a1.eval_var(last, alpha, p);
        let bb = b1.eval_var(last, alpha, p);
        let ce = pgcd(&aa, &bb, last, p);
        let le = ce.lead().expect("nonzero gcd image");
        if le == [0; 3] {
            return from_dense(&c, last);
        }
        let ce = ce.scale(ueval(&g, alpha, p), p);
        let mut stable = false;
        match &h {
            Some(hh) if le == lead => {
                let hv = hh.eval_var(last, alpha, p);
                let diff = ce.sub(&hv, p);
                if diff.is_zero() {
                    stable = true;
                } else {
                    let qa = ueval(&q, alpha, p);
                    let f = diff.scale(invmod(qa, p), p);
                    h = Some(hh.add(&f.mul_univ(&q, last, p), p));
                }
                q = umul(&q, &[p - alpha, 1], p);
                npts += 1;
            }
            Some(_) if le > lead => continue,
            _ => {
                h = Some(ce);
                lead = le;
                q = vec![p - alpha, 1];
                npts = 1;
            }
        }
        if stable || npts > bound {
            let hh = h.as_ref().unwrap();
            let gh = hh.groups(last);
            let ch = content_of(&gh, p);
            let hp = PP::from_groups(&divide_groups(&gh, &ch, p), last, p);
            if a1.div_exact(&hp, p).is_some() && b1.div_exact(&hp, p).is_some() {
                return hp.mul(&from_dense(&c, last), p).monic(p);
            }
            if npts > bound {
                h = None;
                npts = 0;
            }
        }
    }
}

type ZLex = Vec<(Exp, BigInt)>;

fn to_lex(a: &ZPoly, vars: &[usize]) -> ZLex {
    let mut v: ZLex = a
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e = [0u32; 3];
            for (i, &var) in vars.iter().enumerate() {
                e[i] = m.exp(var);
            }
            (e, c.clone())
        })
        .collect();
    v.sort_by(|x, y| y.0.cmp(&x.0));
    v
}

fn from_lex(a: &ZLex, vars: &[usize]) -> ZPoly {
    ZPoly::from_terms(
        a.iter()
            .map(|(e, c)| {
                let mut ex = [0u32; 3];
                for (i, &var) in vars.iter().enumerate() {
                    ex[var] = e[i];
                }
                (Mono::from_exps(ex), c.clone())
            })
            .collect(),
    )
}

fn reduce(a: &ZLex, p: u64) -> PP {
    let pb = BigInt::from(p);
    let t = a
        .iter()
        .map(|(e, c)| (*e, c.mod_floor(&pb).to_u64().unwrap()))
        .filter(|(_, c)| *c != 0)
        .collect();
    PP { terms: t }
}

/// Greatest common divisor in Z[t,x,y], normalized to positive leading
/// coefficient (graded lex). gcd(0, 0) = 0.
pub fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    let ma = a.mono_content();
    let mb = b.mono_content();
    let m = ma.gcd(mb);
    let ca = a.content();
    let cb = b.content();
    let c = ca.gcd(&cb);
    let a1 = a.div_mono(ma).div_int(&ca);
    let b1 = b.div_mono(mb).div_int(&cb);
    let unit = ZPoly::monomial(m, c.clone());
    if a1.is_constant() || b1.is_constant() {
        return unit;
    }
    let a1 = normalize_sign(a1);
    let b1 = normalize_sign(b1);
    if a1 == b1 {
        return a1.mul(&unit);
    }
    if a1.len() <= b1.len() {
        if b1.div_exact(&a1).is_some() {
            return a1.mul(&unit);
        }
    } else if a1.div_exact(&b1).is_some() {
        return b1.mul(&unit);
    }
    let vars: Vec<usize> = (0..3).filter(|&v| a1.involves(v) || b1.involves(v)).collect();
    for v in 0..3 {
        if a1.involves(v) != b1.involves(v) {
            // The gcd is free of a variable present in only one argument.
            let (with, without) = if a1.involves(v) { (&a1, &b1) } else { (&b1, &a1) };
            let mut g = without.clone();
            for coeff in with.coeffs_in(v) {
                if !coeff.is_zero() {
                    g = gcd(&g, &coeff);
                    if g.is_constant() {
                        break;
                    }
                }
            }
            return normalize_sign(g).mul(&unit);
        }
    }
    let k = vars.len();
    let la = to_lex(&a1, &vars);
    let lb = to_lex(&b1, &vars);
    let lca = la[0].1.clone();
    let lcb = lb[0].1.clone();
    let gam = lca.gcd(&lcb);

    let mut h: Option<(ZLex, BigInt, Exp)> = None;
    for &p in modp::primes() {
        let pb = BigInt::from(p);
        if (&lca % &pb).is_zero() || (&lcb % &pb).is_zero() {
            continue;
        }
        let gp = pgcd(&reduce(&la, p), &reduce(&lb, p), k, p);
        let le = gp.lead().unwrap();
        if le == [0; 3] {
            return unit;
        }
        let gp = gp.scale(gam.mod_floor(&pb).to_u64().unwrap(), p);
        let (next, changed) = match h.take() {
            Some((hz, modulus, lead)) if lead == le => {
                let (nz, changed) = crt(&hz, &modulus, &gp, p);
                (Some((nz, modulus * &pb, lead)), changed)
            }
            Some((hz, modulus, lead)) if le > lead => (Some((hz, modulus, lead)), false),
            _ => {
                let hz: ZLex = gp
                    .terms
                    .iter()
                    .map(|(e, c)| (*e, BigInt::from(modp::symmetric(*c, p))))
                    .collect();
                (Some((hz, pb.clone(), le)), true)
            }
        };
        h = next;
        if !changed {
            let (hz, _, _) = h.as_ref().unwrap();
            let cand = from_lex(hz, &vars).primitive();
            if a1.div_exact(&cand).is_some() && b1.div_exact(&cand).is_some() {
                return cand.mul(&unit);
            }
        }
    }
    panic!("gcd: ran out of primes");
}

fn normalize_sign(a: ZPoly) -> ZPoly {
    match a.lc() {
        Some(c) if c.is_negative() => a.neg(),
        _ => a,
    }
}

/// Combines `h mod m` with `g mod p`; reports whether any coefficient moved.
fn crt(h: &ZLex, m: &BigInt, g: &PP, p: u64) -> (ZLex, bool) {
    let pb = BigInt::from(p);
    let minv = invmod(m.mod_floor(&pb).to_u64().unwrap(), p);
    let mp = m * &pb;
    let half = &mp >> 1;
    let mut out: ZLex = Vec::with_capacity(h.len().max(g.terms.len()));
    let mut changed = false;
    let (mut i, mut j) = (0, 0);
    let zero = BigInt::zero();
    loop {
        let (e, hv, gv) = match (h.get(i), g.terms.get(j)) {
            (None, None) => break,
            (Some((he, hc)), Some((ge, gc))) if he == ge => {
                i += 1;
                j += 1;
                (*he, hc, *gc)
            }
            (Some((he, hc)), Some((ge, _))) if he > ge => {
                i += 1;
                (*he, hc, 0)
            }
            (Some((he, hc)), None) => {
                i += 1;
                (*he, hc, 0)
            }
            (_, Some((ge, gc))) => {
                j += 1;
                (*ge, &zero, *gc)
            }
        };
        let hm = hv.mod_floor(&pb).to_u64().unwrap();
        let delta = mulmod(submod(gv, hm, p), minv, p);
        if delta == 0 {
            if !hv.is_zero() {
                out.push((e, hv.clone()));
            }
            continue;
        }
        changed = true;
        let mut v = hv + m * BigInt::from(delta);
        v = v.mod_floor(&mp);
        if v > half {
            v -= &mp;
        }
        if !v.is_zero() {
            out.push((e, v));
        }
    }
    (out, changed)
}

/// Cofactors `(g, a/g, b/g)`.
pub fn gcd_cofactors(a: &ZPoly, b: &ZPoly) -> (ZPoly, ZPoly, ZPoly) {
    let g = gcd(a, b);
    if g.is_zero() {
        return (g, a.clone(), b.clone());
    }
    let ca = a.div_exact(&g).expect("gcd divides a");
    let cb = b.div_exact(&g).expect("gcd divides b");
    (g, ca, cb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_mpoly;

    fn z(s: &str) -> ZPoly {
        let (k, p) = parse_mpoly(s).unwrap().to_z();
        let k = k.to_integer();
        p.map_coeffs(|c| c * &k)
    }

    #[test]
    fn simple_common_factor() {
        let g = gcd(&z("t*x - t^2"), &z("x - t"));
        assert_eq!(g, z("t - x"));
        assert_eq!(gcd(&z("t^2*x"), &z("y - t")), z("1"));
    }

    #[test]
    fn trivariate_products() {
        let f = z("t^2*x*y - 3*x + y^2 + 5");
        let g = z("x^2 - t*y + 2*t^3");
        let h = z("7*x*y^3 - t + 1");
        let a = f.mul(&g);
        let b = f.mul(&h);
        assert_eq!(gcd(&a, &b), f);
        let a2 = f.mul(&g).mul(&g);
        let b2 = g.mul(&h).mul(&z("6"));
        assert_eq!(gcd(&a2, &b2), g);
    }

    #[test]
    fn integer_content_and_monomials() {
        let a = z("6*t^2*x + 12*t^2");
        let b = z("4*t*x^2 + 8*t*x");
        assert_eq!(gcd(&a, &b), z("2*t*x + 4*t"));
    }

    #[test]
    fn coprime_dense() {
        let a = z("t + x + y").pow(4).add(&z("1"));
        let b = z("t*x*y - 2").pow(3);
        assert!(gcd(&a, &b).is_constant());
    }

    #[test]
    fn variable_missing_from_one_side() {
        let a = z("x^2 - 1").mul(&z("y + t"));
        let b = z("x - 1").mul(&z("t + 3"));
        assert_eq!(gcd(&a, &b), z("x - 1"));
    }
}
