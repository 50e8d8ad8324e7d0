use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use twostep::classify::{in_q, is_aperiodic, qp_representatives};
use twostep::dp::{Enumeration, Plane};
use twostep::genfun::{build_blocks, solve_full_plane};
use twostep::group::*;
use twostep::{Dir, Rule, DIRS};
use num_traits::Zero;
use std::sync::OnceLock;
use twostep_algebra::{parse_ratfunc, series_expand, RatFunc, TSeries};

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}

fn sample(seed: u64, n: usize) -> Vec<Rule> {
    let mut reps = qp_representatives();
    reps.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    reps.truncate(n);
    reps
}

fn has_pair(g: &GroupResult, x: &RatFunc, y: &RatFunc) -> bool {
    g.elements.iter().any(|e| &e.x == x && &e.y == y)
}

#[test]
fn spiral_blocks_match_displays() {
    let bs = build_blocks(Rule::spiral());
    let e = bs.of(Dir::E);
    let b = rf("t*x*(t^2-t*x-t*y+x*y+t^2*x*y+t^2*y^2-t*x*y^2)/((x-t)*(y-t)*(1-t*y))");
    assert_eq!(e.b, b);
    assert_eq!(e.l, b);
    assert_eq!(e.d, rf("t^2*x/(y-t)"));
    assert_eq!(e.j, rf("t^3*x/((x-t)*(y-t))"));
    let den = "(t^2-t*x-t^3*x+t^2*x^2-t*y-t^3*y+x*y+2*t^2*x*y-t*x^2*y-t^3*x^2*y+t^2*y^2-t*x*y^2-t^3*x*y^2+t^2*x^2*y^2)";
    let f = solve_full_plane(Rule::spiral()).unwrap();
    assert_eq!(f[0], rf(&format!("t*x*(t^2-t*y+x*y+t^2*y^2-t*x*y^2)/{den}")));
    assert_eq!(f[1], rf(&format!("t*y*(t^2-t*x+t^2*x^2-t*y+x*y)/{den}")));
    assert_eq!(f[2], rf(&format!("t*(-t+t^2*x+y-t*x*y+t^2*x*y^2)/{den}")));
    assert_eq!(f[3], rf(&format!("t*(x-t*x^2+t^2*y-t*x*y+t^2*x^2*y)/{den}")));
}

#[test]
fn spiral_group() {
    let s = Rule::spiral();
    let g = generate_group(s, Dir::E, DEFAULT_CAP).unwrap();
    let inv = &g.involutions;
    inv.verify().unwrap();
    assert_eq!(inv.phi, rf("y^-1"));
    let psi = rf("t*(t^2-t*x-t*y+x*y+t^2*x*y+t^2*y^2-t*x*y^2)/((x-t)*(y-t)*(1-t*y))");
    assert_eq!(inv.psi, psi);
    assert_eq!(inv.psi, inv.b.div(&RatFunc::x()).unwrap());
    assert_eq!(g.order, GroupOrder::Finite(4));
    let (x, y, yb) = (RatFunc::x(), RatFunc::y(), rf("y^-1"));
    for (a, b) in [(&x, &y), (&psi, &y), (&psi, &yb), (&x, &yb)] {
        assert!(has_pair(&g, a, b));
    }
    assert!(g.substitutable.iter().all(|&s| s));
    for th in DIRS {
        let g = generate_group(s, th, DEFAULT_CAP).unwrap();
        assert_eq!(g.order, GroupOrder::Finite(4), "{th}");
        let all = g.substitutable.iter().all(|&s| s);
        assert_eq!(all, matches!(th, Dir::E | Dir::N), "{th}");
    }
}

#[test]
fn six_element_group_has_vanishing_orbit_sum() {
    let r = Rule::decode("0110.1001.1111.1111").unwrap();
    let sol = orbit_sum_solve(r, Dir::E, 8, None).unwrap();
    let g = &sol.group;
    assert_eq!(g.order, GroupOrder::Finite(6));
    let psi = rf("t*(1+x*y)/(x*y-t*x-t*y-t^2*x*y)");
    assert_eq!(g.involutions.psi, psi);
    let (x, y) = (RatFunc::x(), RatFunc::y());
    for (a, b) in [(&x, &y), (&psi, &y), (&y, &psi), (&y, &x), (&psi, &x), (&x, &psi)] {
        assert!(has_pair(g, a, b));
    }
    assert_eq!(sol.status, OrbitStatus::VanishingOrbitSum);
}

#[test]
fn finite_group_without_elimination() {
    let r = Rule::decode("1110.0111.1011.1101").unwrap();
    let sol = orbit_sum_solve(r, Dir::E, 8, None).unwrap();
    assert!(sol.group.order.finite().is_some());
    assert_eq!(sol.status, OrbitStatus::CoefficientsNotEliminable);
}

#[test]
fn spiral_q_e_from_orbit_sum() {
    let sol = orbit_sum_solve(Rule::spiral(), Dir::E, 6, None).unwrap();
    assert_eq!(sol.status, OrbitStatus::Solved);
    let want = ["0", "x", "x^2", "x^3", "x^4", "x^5 + x", "x^6 + 2*x^2 + x*y"];
    let q = sol.q.unwrap();
    for (m, w) in want.iter().enumerate() {
        assert_eq!(q.coeff(m).to_string(), *w, "t^{m}");
    }
    // The identity coefficient is the one in the displayed solution.
    assert_eq!(sol.coefficients[0], rf("y*(t-y)/(1-t*y)"));
    let n = 14;
    let dp = Enumeration::run(Rule::spiral(), Plane::Quarter, n);
    let sol = orbit_sum_solve(Rule::spiral(), Dir::E, n, None).unwrap();
    assert_eq!(sol.q.unwrap(), dp.series(Dir::E));
}

#[test]
fn spiral_q_n_needs_its_axis_part() {
    let n = 12;
    let dp = Enumeration::run(Rule::spiral(), Plane::Quarter, n);
    let axis = series_expand(&rf("t*y/(1-t*y)"), n).unwrap();
    let from_dp = TSeries::from_coeffs(dp.series(Dir::N).coeffs().iter().map(|c| c.filter(|i, _| i == 0)).collect());
    assert_eq!(axis, from_dp);
    let sol = orbit_sum_solve(Rule::spiral(), Dir::N, n, Some(&axis)).unwrap();
    assert_eq!(sol.status, OrbitStatus::Solved);
    assert_eq!(sol.q.unwrap(), dp.series(Dir::N));
    let bare = orbit_sum_solve(Rule::spiral(), Dir::N, n, None).unwrap();
    assert_eq!(bare.status, OrbitStatus::ExtractionFailed);
    for th in [Dir::W, Dir::S] {
        let sol = orbit_sum_solve(Rule::spiral(), th, n, None).unwrap();
        assert_eq!(sol.status, OrbitStatus::NonSubstitutableElements, "{th}");
    }
}

#[test]
fn spiral_chain_matches_dp() {
    let n = 12;
    let dp = Enumeration::run(Rule::spiral(), Plane::Quarter, n);
    let chain = spiral_boundary_chain(n).unwrap();
    let left = dp.boundary_left();
    assert!(left.coeffs().iter().all(|c| c.coeff(0, 0).is_zero()));
    assert_eq!(chain.q_down, dp.boundary_down());
    assert_eq!(chain.q_left, left);
    for th in DIRS {
        assert_eq!(chain.q[th.index()], dp.series(th), "{th}");
    }
}

#[test]
fn groups_are_closed_even_and_seed_independent() {
    for r in sample(31, 60) {
        let bs = build_blocks(r);
        for th in DIRS {
            let g = group_of(&bs, th, DEFAULT_CAP).unwrap();
            let (other, _) = fingerprint_order(&g.involutions, DEFAULT_CAP, 99).unwrap();
            assert_eq!(g.order, other, "{r} {th}");
            if let GroupOrder::Finite(k) = g.order {
                assert_eq!(k % 2, 0, "{r} {th}");
                assert_eq!(g.elements.len(), k);
                assert_eq!(g.substitutable.len(), k);
            }
        }
    }
}

#[test]
fn solved_orbit_sums_match_dp() {
    let n = 8;
    let mut solved = 0;
    let finite: Vec<Rule> = sample(32, 400)
        .into_iter()
        .filter(|&r| generate_group(r, Dir::E, DEFAULT_CAP).unwrap().order.finite().is_some())
        .take(40)
        .collect();
    for r in finite {
        let dp = Enumeration::run(r, Plane::Quarter, n);
        for th in [Dir::E, Dir::N] {
            let sol = orbit_sum_solve(r, th, n, None).unwrap();
            if sol.status == OrbitStatus::Solved {
                solved += 1;
                assert_eq!(sol.q.unwrap(), dp.series(th), "{r} {th}");
            }
        }
    }
    assert!(solved > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn involutions_square_to_identity(k in 0usize..6909, th in 0usize..4) {
        static REPS: OnceLock<Vec<Rule>> = OnceLock::new();
        let r = REPS.get_or_init(qp_representatives)[k];
        prop_assert!(in_q(r) && is_aperiodic(r));
        let inv = Involutions::compute(r, Dir::from_index(th)).unwrap();
        prop_assert!(inv.verify().is_ok(), "{} {}", r, th);
    }
}
