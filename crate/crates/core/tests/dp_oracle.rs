use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;
use twostep::dp::*;
use twostep::{Dir, Rule, StepPerm, DIRS};

/// Depth-first generation of all step sequences, filtering consecutive
/// pairs by the rule and every prefix endpoint by the plane.
fn brute_force(rule: Rule, plane: Plane, m: usize) -> BTreeMap<(i32, i32, usize), u64> {
    fn go(rule: Rule, plane: Plane, left: usize, pos: (i32, i32), last: usize, out: &mut BTreeMap<(i32, i32, usize), u64>) {
        if left == 0 {
            *out.entry((pos.0, pos.1, last)).or_default() += 1;
            return;
        }
        for j in 0..4 {
            if !rule.get(last, j) {
                continue;
            }
            let (da, db) = DIRS[j].delta();
            let np = (pos.0 + da, pos.1 + db);
            if plane.admits(np.0, np.1) {
                go(rule, plane, left - 1, np, j, out);
            }
        }
    }
    let mut out = BTreeMap::new();
    for d in 0..4 {
        let (a, b) = DIRS[d].delta();
        if plane.admits(a, b) {
            go(rule, plane, m - 1, (a, b), d, &mut out);
        }
    }
    out
}

fn flatten(layer: &Layer) -> BTreeMap<(i32, i32, usize), u64> {
    let mut out = BTreeMap::new();
    for (&(a, b), cnt) in layer {
        for (k, c) in cnt.iter().enumerate() {
            if *c != BigUint::from(0u8) {
                out.insert((a, b, k), u64::try_from(c).unwrap());
            }
        }
    }
    out
}

#[test]
fn dp_matches_exhaustive_enumeration() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let rule = Rule(rng.gen());
        for plane in [Plane::Full, Plane::Half, Plane::Quarter] {
            let e = Enumeration::run(rule, plane, 8);
            for m in 1..=8 {
                assert_eq!(flatten(e.layer(m)), brute_force(rule, plane, m), "{rule} {plane} m={m}");
            }
        }
    }
}

#[test]
fn transfer_counts_match_exhaustive_enumeration() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let rule = Rule(rng.gen());
        for m in 1..=8 {
            let bf = brute_force(rule, Plane::Full, m);
            let mut by_dir = [0u64; 4];
            for (&(_, _, k), &c) in &bf {
                by_dir[k] += c;
            }
            assert_eq!(rule.transfer_counts(m), by_dir.map(BigUint::from), "{rule} m={m}");
        }
    }
}

#[test]
fn zero_rule_counts() {
    assert_eq!(Rule::ZERO.total_count(1), BigUint::from(4u8));
    for m in 2..6 {
        assert_eq!(Rule::ZERO.total_count(m), BigUint::from(0u8));
    }
}

#[test]
fn spiral_origin_returns_vanish_for_odd_lengths() {
    let e = Enumeration::run(Rule::spiral(), Plane::Quarter, 30);
    for m in (1..=30).step_by(2) {
        assert_eq!(e.row(m).po, BigUint::from(0u8));
    }
    let q = quarter_plane_float(Rule::spiral(), 1.0, 1.0, 61);
    for m in (1..=61).step_by(2) {
        assert_eq!(q.ln_po[m], f64::NEG_INFINITY);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_action_composes(r in any::<u16>(), a in 0usize..24, b in 0usize..24) {
        let all = StepPerm::all();
        let (p, q) = (all[a], all[b]);
        let r = Rule(r);
        prop_assert_eq!(r.apply(&p).apply(&q), r.apply(&q.after(&p)));
    }

    #[test]
    fn containment_quarter_half_full(r in any::<u16>()) {
        let rule = Rule(r);
        let f = Enumeration::run(rule, Plane::Full, 9);
        let h = Enumeration::run(rule, Plane::Half, 9);
        let q = Enumeration::run(rule, Plane::Quarter, 9);
        for m in 1..=9 {
            let (cf, ch, cq) = (f.counts(m), h.counts(m), q.counts(m));
            for k in 0..4 {
                prop_assert!(cq[k] <= ch[k] && ch[k] <= cf[k]);
            }
        }
    }

    #[test]
    fn weighted_stats_match_series_evaluation(r in any::<u16>(), xn in 1i64..5, yd in 1i64..5) {
        let rule = Rule(r);
        let x = BigRational::new(xn.into(), 3.into());
        let y = BigRational::new(2.into(), yd.into());
        for plane in [Plane::Full, Plane::Half, Plane::Quarter] {
            let e = Enumeration::run(rule, plane, 7);
            let s = e.series(Dir::E);
            let v = s.eval_xy(&x, &y);
            for m in 1..=7 {
                match e.weighted_stats(m, &x, &y, Some(Dir::E)) {
                    Ok(st) => prop_assert_eq!(&st.total, &v.coeff(m)),
                    Err(_) => prop_assert_eq!(v.coeff(m), BigRational::from_integer(0.into())),
                }
            }
        }
    }

    #[test]
    fn positive_rule_counts_are_monotone(r in any::<u16>()) {
        let rule = Rule(r);
        // Every vertex has an out-edge, so every walk extends.
        prop_assume!((0..4).all(|i| rule.successors(i).next().is_some()));
        for m in 1..12 {
            prop_assert!(rule.total_count(m) <= rule.total_count(m + 1));
        }
    }
}
