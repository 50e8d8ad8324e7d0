use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use twostep_algebra::gcd::gcd;
use twostep_algebra::{series_expand, Mono, RatFunc, Ring, ZPoly};

fn zpoly_strategy(max_terms: usize, max_deg: u32) -> impl Strategy<Value = ZPoly> {
    prop::collection::vec(((0..=max_deg, 0..=max_deg, 0..=max_deg), -6i64..=6), 1..=max_terms).prop_map(|ts| {
        ZPoly::from_terms(ts.into_iter().map(|((a, b, c), k)| (Mono::new(a, b, c), BigInt::from(k))).collect())
    })
}

fn nonzero_zpoly(max_terms: usize, max_deg: u32) -> impl Strategy<Value = ZPoly> {
    zpoly_strategy(max_terms, max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

/// Denominators with a nonzero constant term, so the quotient expands in t.
fn expandable_den() -> impl Strategy<Value = ZPoly> {
    (zpoly_strategy(3, 2), 1i64..=4).prop_map(|(p, c)| {
        let p = ZPoly::from_terms(p.terms().iter().filter(|(m, _)| m.exp(0) > 0).cloned().collect());
        p.add(&ZPoly::constant(BigInt::from(c)))
    })
}

fn ratfunc_strategy() -> impl Strategy<Value = RatFunc> {
    (zpoly_strategy(4, 2), nonzero_zpoly(3, 2)).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn point(seed: i64) -> [BigRational; 3] {
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    [r(seed % 7 + 1, 11), r(seed % 5 + 2, 3), r(-(seed % 3) - 1, 4)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ring_axioms(a in ratfunc_strategy(), b in ratfunc_strategy(), c in ratfunc_strategy()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        for s in [3i64, 10, 17] {
            let pt = point(s);
            let lhs = a.mul(&b.add(&c));
            if let (Ok(va), Ok(vb), Ok(vc), Ok(v)) = (a.eval(&pt), b.eval(&pt), c.eval(&pt), lhs.eval(&pt)) {
                prop_assert_eq!(v, va * (vb + vc));
            }
        }
    }

    #[test]
    fn normalize_idempotent(n in zpoly_strategy(5, 3), d in nonzero_zpoly(4, 3)) {
        let f = RatFunc::new(n, d).unwrap();
        let g = RatFunc::new(f.num().clone(), f.den().clone()).unwrap();
        prop_assert_eq!(&f, &g);
        prop_assert!(gcd(f.num(), f.den()).is_constant() || f.is_zero());
    }

    #[test]
    fn gcd_recovers_common_factor(f in nonzero_zpoly(3, 2), g in nonzero_zpoly(3, 2), h in nonzero_zpoly(3, 2)) {
        let a = f.mul(&g);
        let b = f.mul(&h);
        let d = gcd(&a, &b);
        prop_assert!(a.div_exact(&d).is_some());
        prop_assert!(b.div_exact(&d).is_some());
        prop_assert!(d.div_exact(&f.primitive()).is_some());
        // The cofactors are coprime.
        let ca = a.div_exact(&d).unwrap();
        let cb = b.div_exact(&d).unwrap();
        prop_assert!(gcd(&ca, &cb).is_constant());
    }

    #[test]
    fn series_of_product(n1 in zpoly_strategy(3, 2), d1 in expandable_den(), n2 in zpoly_strategy(3, 2), d2 in expandable_den()) {
        let f = RatFunc::new(n1, d1).unwrap();
        let g = RatFunc::new(n2, d2).unwrap();
        let n = 6;
        let sf = series_expand(&f, n).unwrap();
        let sg = series_expand(&g, n).unwrap();
        let sfg = series_expand(&f.mul(&g), n).unwrap();
        prop_assert_eq!(sfg, sf.mul(&sg));
    }

    #[test]
    fn expansion_times_den_is_num(n1 in zpoly_strategy(4, 3), d1 in expandable_den()) {
        let f = RatFunc::new(n1, d1).unwrap();
        let n = 5;
        let s = series_expand(&f, n).unwrap();
        let den = series_expand(&RatFunc::from_zpoly(f.den().clone()), n).unwrap();
        let num = series_expand(&RatFunc::from_zpoly(f.num().clone()), n).unwrap();
        prop_assert_eq!(s.mul(&den), num);
    }
}

#[test]
fn derivative_matches_finite_differences() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 20 {
        let rp = |rng: &mut rand_chacha::ChaCha8Rng| {
            let terms: Vec<(Mono, BigInt)> = (0..rng.gen_range(1..4))
                .map(|_| (Mono::new(rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..3)), BigInt::from(rng.gen_range(-4..5))))
                .collect();
            ZPoly::from_terms(terms)
        };
        let n = rp(&mut rng);
        let d = rp(&mut rng).add(&ZPoly::constant(BigInt::from(5)));
        let f = RatFunc::new(n, d).unwrap();
        let pt = [0.3, 0.7, 0.45];
        if f.eval_f64(pt).abs() > 1e6 || f.den().is_zero() {
            continue;
        }
        for v in 0..3 {
            let h = 1e-6;
            let mut up = pt;
            let mut dn = pt;
            up[v] += h;
            dn[v] -= h;
            let fd = (f.eval_f64(up) - f.eval_f64(dn)) / (2.0 * h);
            let exact = f.diff(v).eval_f64(pt);
            let scale = exact.abs().max(1.0);
            assert!((fd - exact).abs() / scale < 1e-8, "{f} d{v}: {fd} vs {exact}");
        }
        checked += 1;
    }
}

#[test]
fn exact_evaluation_matches_float() {
    let f = twostep_algebra::parse_ratfunc("t^2*x/(y - t)").unwrap();
    let pt = [BigRational::new(1.into(), 4.into()), BigRational::from_integer(1.into()), BigRational::from_integer(1.into())];
    let v = f.eval(&pt).unwrap();
    assert_eq!(v, BigRational::new(1.into(), 12.into()));
    assert!((v.to_f64().unwrap() - f.eval_f64([0.25, 1.0, 1.0])).abs() < 1e-15);
    assert!(!Zero::is_zero(&v));
    assert_eq!(RatFunc::one(), <RatFunc as Ring>::one());
}
