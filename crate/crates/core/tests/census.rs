use twostep::classify::*;
use twostep::{Rule, StepPerm};

/// Transitive closure by Warshall's algorithm.
fn warshall_connected(r: Rule) -> bool {
    let mut reach = r.matrix().map(|row| row.map(|x| x != 0));
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                reach[i][j] |= reach[i][k] && reach[k][j];
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&x| x))
}

#[test]
fn published_census() {
    let c = census();
    for (k, v, want) in c.mismatches() {
        panic!("{k}: got {v}, expected {want}");
    }
    assert_eq!(c.get("|Q|"), 13749);
}

#[test]
fn burnside_agrees_with_orbit_enumeration() {
    let sets = Sets::compute();
    let a = census_with(&sets, false);
    let b = census_with(&sets, true);
    assert_eq!(a.ordered(), b.ordered());
}

#[test]
fn sharded_scan_is_identical() {
    let one = census_with(&Sets::compute_sharded(1), false);
    let four = census_with(&Sets::compute_sharded(4), false);
    assert_eq!(one.ordered(), four.ordered());
}

#[test]
fn connectivity_matches_warshall_everywhere() {
    for r in 0..=u16::MAX {
        let rule = Rule(r);
        assert_eq!(is_connected(rule), warshall_connected(rule), "{rule}");
        if is_aperiodic(rule) {
            assert!(is_connected(rule));
        }
        if is_connected(rule) {
            assert_eq!(period(rule) == Some(1), is_aperiodic(rule), "{rule}");
        }
    }
}

#[test]
fn glued_rules_account_for_q() {
    let sets = Sets::compute();
    let ud = sets.ud.iter().filter(|&&x| x).count();
    let glued = (0..=u16::MAX).filter(|&r| sets.ud[r as usize] && is_glued(Rule(r))).count();
    let q = sets.q.iter().filter(|&&x| x).count();
    assert_eq!(q, ud - glued);
}

#[test]
fn representatives() {
    let reps = qp_representatives();
    assert_eq!(reps.len(), 6909);
    for r in &reps {
        assert!(r.bitstring() <= r.apply(&StepPerm::SIGMA_PRIME).bitstring());
    }
}
