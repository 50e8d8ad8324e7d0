use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;
use twostep::classify::{in_q, in_v, is_aperiodic, is_connected, is_vertically_unbounded};
use twostep::dp::{Enumeration, Plane};
use twostep::genfun::*;
use twostep::{Dir, Rule, DIRS};
use twostep_algebra::{series_expand, series_expand_at, LPoly, RatFunc, Series, TSeries, Y};

fn rules(seed: u64, n: usize, keep: impl Fn(Rule) -> bool) -> Vec<Rule> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let r = Rule(rng.gen());
        if keep(r) {
            out.push(r);
        }
    }
    out
}

fn one() -> BigRational {
    BigRational::from_integer(1.into())
}

/// Full-plane walks by (first step, last step, endpoint, number of `theta` steps), m <= len.
fn full_plane_walks(rule: Rule, len: usize, theta: usize) -> BTreeMap<(usize, usize, usize, i32, i32, usize), u64> {
    fn go(r: Rule, left: usize, m: usize, first: usize, last: usize, pos: (i32, i32), th: usize, nth: usize, out: &mut BTreeMap<(usize, usize, usize, i32, i32, usize), u64>) {
        *out.entry((m, first, last, pos.0, pos.1, nth)).or_default() += 1;
        if left == 0 {
            return;
        }
        for j in r.successors(last) {
            let (a, b) = DIRS[j].delta();
            go(r, left - 1, m + 1, first, j, (pos.0 + a, pos.1 + b), th, nth + (j == th) as usize, out);
        }
    }
    let mut out = BTreeMap::new();
    for d in 0..4 {
        go(rule, len - 1, 1, d, d, DIRS[d].delta(), theta, (d == theta) as usize, &mut out);
    }
    out
}

fn brute_series(w: &BTreeMap<(usize, usize, usize, i32, i32, usize), u64>, len: usize, keep: impl Fn(usize, usize, usize) -> bool) -> TSeries {
    let mut c = vec![LPoly::zero(); len + 1];
    for (&(m, first, last, a, b, nth), &k) in w {
        if keep(first, last, nth) {
            c[m].add_term(a, b, &BigRational::from_integer(k.into()));
        }
    }
    Series::from_coeffs(c)
}

#[test]
fn full_plane_series_match_transfer_counts() {
    for r in rules(1, 200, |r| is_aperiodic(r)) {
        let f = solve_full_plane(r).unwrap();
        let counts: Vec<[BigUint; 4]> = (1..=20).map(|m| r.transfer_counts(m)).collect();
        for d in DIRS {
            let s = series_expand_at(&f[d.index()], &one(), &one(), 20).unwrap();
            for m in 1..=20 {
                assert_eq!(s.coeff(m), BigRational::from_integer(counts[m - 1][d.index()].clone().into()), "{r} {d} m={m}");
            }
        }
    }
}

#[test]
fn blocks_count_walks_with_one_theta_step() {
    let len = 7;
    for r in rules(2, 25, is_connected).into_iter().chain([Rule::ALL, Rule::spiral()]) {
        let bs = build_blocks(r);
        for th in DIRS {
            let t = th.index();
            let walks = full_plane_walks(r, len, t);
            let tb = bs.of(th);
            let ends = |last: usize, nth: usize| last == t && nth == 1;
            let cases: [(&RatFunc, Box<dyn Fn(usize) -> bool>); 5] = [
                (&tb.a, Box::new(|_| true)),
                (&tb.c, Box::new(|f| f != 3)),
                (&tb.d, Box::new(|f| f == 3)),
                (&tb.l, Box::new(|f| f < 2)),
                (&tb.j, Box::new(|f| f == 2)),
            ];
            for (block, first_ok) in cases {
                let got = series_expand(block, len).unwrap();
                let want = brute_series(&walks, len, |f, l, n| first_ok(f) && ends(l, n));
                assert_eq!(got, want, "{r} {th}");
                assert!(counts_walks(&got));
            }
            // B: walks entered right after a theta step.
            let got = series_expand(&tb.b, len).unwrap();
            let want = brute_series(&walks, len, |f, l, n| r.get(t, f) && ends(l, n));
            assert_eq!(got, want, "{r} B_{th}");
            assert_eq!(series_expand(&tb.a.sub(&tb.c).sub(&tb.d), 12).unwrap().is_zero(), true);
            assert_eq!(tb.l.add(&tb.j).add(&tb.d), tb.a);
            // X and Z split the full-plane walks by first step.
            let x = series_expand(&bs.x_block(th), len).unwrap();
            let z = series_expand(&bs.z_block(th), len).unwrap();
            assert_eq!(x, brute_series(&walks, len, |f, l, _| f != 3 && l == t));
            assert_eq!(z, brute_series(&walks, len, |f, l, _| f == 3 && l == t));
            assert_eq!(bs.x_block(th).add(&bs.z_block(th)), bs.f(th));
        }
    }
}

#[test]
fn spiral_z_s_starts_with_single_step() {
    let hp = half_plane_blocks(Rule::spiral());
    let zs = series_expand(&hp[Dir::S.index()].1, 3).unwrap();
    assert_eq!(zs.valuation(), 1);
    assert_eq!(zs.coeff(1).to_string(), "y^-1");
}

#[test]
fn all_ones_b_e() {
    let b = &build_blocks(Rule::ALL).theta[0].b;
    let s = series_expand(b, 3).unwrap();
    assert_eq!(s.coeff(1).to_string(), "x");
    // Second step E after one of N, W, S (the first step may follow an E step).
    assert_eq!(s.coeff(2).to_string(), "x*y + x*y^-1 + 1");
}

#[test]
fn full_plane_identity_on_sample() {
    for r in rules(3, 40, is_connected) {
        let bs = build_blocks(r);
        for th in DIRS {
            let tb = bs.of(th);
            assert_eq!(RatFunc::one().sub(&tb.b).mul(&bs.f(th)), tb.a, "{r} {th}");
        }
    }
}

#[test]
fn kernel_is_quadratic_for_vertically_unbounded_rules() {
    for r in rules(4, 60, |r| is_aperiodic(r) && is_vertically_unbounded(r)) {
        let bs = build_blocks(r);
        for th in DIRS {
            let b = &bs.of(th).b;
            let k = b.den().sub(b.num());
            assert_eq!(k.degree(Y), 2, "{r} {th}");
        }
    }
}

#[test]
fn kernel_root_properties() {
    let spiral = Rule::spiral();
    let kr = kernel_roots(spiral, Dir::E, Some(&one()), 10).unwrap();
    assert_eq!(kr.root.valuation(), 1);
    let c1 = kr.root.coeff(1).as_constant().unwrap();
    assert!(c1 > BigRational::from_integer(0.into()));
    // B_e(1, u) = 1 to the computed order.
    let b = build_blocks(spiral).theta[0].b.clone();
    let (_, bu) = subst_root(&b, &b, Dir::E, Some(&one()), 8).unwrap();
    assert_eq!(bu, Series::one(9));
    // Vieta: u+ = -q1/q2 - u-, and u- u+ = q0/q2 as Laurent series in t.
    for r in rules(5, 10, |r| is_aperiodic(r) && in_v(r)) {
        for th in DIRS {
            let kr = kernel_roots(r, th, None, 12).unwrap_or_else(|e| panic!("{r} {th}: {e}"));
            let [q0, q1, q2] = kr.q_series(13);
            let v = &kr.root;
            let lhs = v.mul(&q1.add(&q2.mul(v))).neg();
            assert_eq!(lhs.truncate(13), q0.truncate(13), "{r} {th}");
        }
    }
}

#[test]
fn half_plane_kernel_method_matches_dp() {
    let n = 14;
    for r in rules(6, 50, |r| is_aperiodic(r) && is_vertically_unbounded(r)) {
        let dp = Enumeration::run(r, Plane::Half, n);
        let down = dp.boundary_down();
        for th in DIRS {
            let sol = solve_half_plane(r, th, n).unwrap_or_else(|e| panic!("{r} {th}: {e}"));
            assert_eq!(sol.h_star, down, "{r} {th} H*");
            assert_eq!(sol.h_star.coeff(0), LPoly::zero());
            for d in DIRS {
                assert_eq!(sol.h[d.index()], dp.series(d), "{r} {th} H_{d}");
            }
        }
    }
}

#[test]
fn quarter_plane_equation_holds_on_dp_series() {
    let n = 12;
    let sample = rules(7, 15, |r| in_q(r) && is_aperiodic(r));
    for r in sample.into_iter().chain([Rule::spiral()]) {
        let dp = Enumeration::run(r, Plane::Quarter, n);
        let (down, left) = (dp.boundary_down(), dp.boundary_left());
        for th in DIRS {
            let eq = quarter_plane_equation(r, th);
            let res = eq.residual(&dp.series(th), &down, &left, n).unwrap();
            assert!(res.is_zero(), "{r} {th}: {res}");
        }
    }
    let eq = quarter_plane_equation(Rule::spiral(), Dir::E);
    assert_eq!(eq.l, eq.b);
}
