//! Classification predicates and the Burnside censuses.

use crate::rule::{Dir, Rule, StepPerm};
use std::collections::BTreeMap;

/// Boolean 4x4 matrices packed like `Rule`.
fn bmul(a: u16, b: u16) -> u16 {
    let mut out = 0u16;
    for i in 0..4 {
        for k in 0..4 {
            if a >> (4 * i + k) & 1 == 1 {
                // Row k of b, OR-ed into row i.
                out |= ((b >> (4 * k)) & 0xf) << (4 * i);
            }
        }
    }
    out
}

fn entry(m: u16, i: usize, j: usize) -> bool {
    m >> (4 * i + j) & 1 == 1
}

/// `T` with row and column `d` cleared (the masked product `I_d T I_d`).
fn masked(r: Rule, d: Dir) -> u16 {
    let d = d.index();
    let row = 0xfu16 << (4 * d);
    let col = 0x1111u16 << d;
    r.0 & !row & !col
}

/// Boolean powers `T^1..=T^k`.
fn powers(m: u16, k: usize) -> Vec<u16> {
    let mut out = Vec::with_capacity(k);
    let mut p = m;
    for _ in 0..k {
        out.push(p);
        p = bmul(p, m);
    }
    out
}

pub fn is_connected(r: Rule) -> bool {
    powers(r.0, 4).iter().fold(0u16, |acc, p| acc | p) == 0xffff
}

/// `T^10` entrywise positive (the Wielandt bound for 4x4 matrices).
pub fn is_aperiodic(r: Rule) -> bool {
    powers(r.0, 10)[9] == 0xffff
}

/// Smallest k with `T^k` entrywise positive, if any.
pub fn primitivity_exponent(r: Rule) -> Option<usize> {
    powers(r.0, 10).iter().position(|&p| p == 0xffff).map(|k| k + 1)
}

/// gcd of the return lengths; `None` for disconnected rules.
pub fn period(r: Rule) -> Option<u32> {
    if !is_connected(r) {
        return None;
    }
    let ps = powers(r.0, 16);
    let mut g = 0u32;
    for i in 0..4 {
        for (k, &p) in ps.iter().enumerate() {
            if entry(p, i, i) {
                g = num_integer::gcd(g, k as u32 + 1);
            }
        }
    }
    Some(g)
}

/// There is no path `from -> ... -> from` avoiding `avoid`.
fn bound(r: Rule, avoid: Dir, from: Dir) -> bool {
    let m = masked(r, avoid);
    !powers(m, 3).iter().any(|&p| entry(p, from.index(), from.index()))
}

/// A north step between any two south steps.
pub fn is_north_bound(r: Rule) -> bool {
    bound(r, Dir::N, Dir::S)
}

pub fn is_south_bound(r: Rule) -> bool {
    bound(r, Dir::S, Dir::N)
}

/// An east step between any two west steps.
pub fn is_east_bound(r: Rule) -> bool {
    bound(r, Dir::E, Dir::W)
}

pub fn is_west_bound(r: Rule) -> bool {
    bound(r, Dir::W, Dir::E)
}

pub fn is_vertically_unbounded(r: Rule) -> bool {
    !is_north_bound(r) && !is_south_bound(r)
}

pub fn is_horizontally_unbounded(r: Rule) -> bool {
    !is_east_bound(r) && !is_west_bound(r)
}

pub fn is_cardinally_unbounded(r: Rule) -> bool {
    is_vertically_unbounded(r) && is_horizontally_unbounded(r)
}

/// True iff every listed product of transfer-matrix entries vanishes.
fn all_zero(r: Rule, products: &[&[(Dir, Dir)]]) -> bool {
    products.iter().all(|p| p.iter().any(|&(i, j)| r.t(i, j) == 0))
}

use Dir::{E, N, S, W};

pub fn is_se_bound(r: Rule) -> bool {
    all_zero(
        r,
        &[
            &[(N, N)],
            &[(W, W)],
            &[(N, W), (W, N)],
            &[(N, E), (E, W), (W, N)],
            &[(N, W), (W, E), (E, N)],
            &[(W, N), (N, S), (S, W)],
            &[(W, S), (S, N), (N, W)],
        ],
    )
}

pub fn is_nw_bound(r: Rule) -> bool {
    all_zero(
        r,
        &[
            &[(E, E)],
            &[(S, S)],
            &[(E, S), (S, E)],
            &[(E, N), (N, S), (S, E)],
            &[(E, S), (S, N), (N, E)],
            &[(S, E), (E, W), (W, S)],
            &[(S, W), (W, E), (E, S)],
        ],
    )
}

pub fn is_sw_bound(r: Rule) -> bool {
    all_zero(
        r,
        &[
            &[(E, E)],
            &[(N, N)],
            &[(N, E), (E, N)],
            &[(E, N), (N, S), (S, E)],
            &[(E, S), (S, N), (N, E)],
            &[(N, E), (E, W), (W, N)],
            &[(N, W), (W, E), (E, N)],
        ],
    )
}

pub fn is_diagonally_unbounded(r: Rule) -> bool {
    !is_se_bound(r) && !is_nw_bound(r) && !is_sw_bound(r)
}

/// Walks started in the quarter plane can never leave the axes.
pub fn is_glued(r: Rule) -> bool {
    all_zero(r, &[&[(E, N)], &[(E, E), (E, W), (W, N)], &[(N, E)], &[(N, N), (N, S), (S, E)]])
}

/// Connected and vertically unbounded.
pub fn in_v(r: Rule) -> bool {
    is_connected(r) && is_vertically_unbounded(r)
}

/// Connected and cardinally unbounded.
pub fn in_u(r: Rule) -> bool {
    is_connected(r) && is_cardinally_unbounded(r)
}

pub fn in_q(r: Rule) -> bool {
    in_u(r) && is_diagonally_unbounded(r) && !is_glued(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub connected: bool,
    pub aperiodic: bool,
    pub period: Option<u32>,
    pub north_bound: bool,
    pub south_bound: bool,
    pub east_bound: bool,
    pub west_bound: bool,
    pub se_bound: bool,
    pub nw_bound: bool,
    pub sw_bound: bool,
    pub glued: bool,
}

impl Classification {
    pub fn of(r: Rule) -> Classification {
        Classification {
            connected: is_connected(r),
            aperiodic: is_aperiodic(r),
            period: period(r),
            north_bound: is_north_bound(r),
            south_bound: is_south_bound(r),
            east_bound: is_east_bound(r),
            west_bound: is_west_bound(r),
            se_bound: is_se_bound(r),
            nw_bound: is_nw_bound(r),
            sw_bound: is_sw_bound(r),
            glued: is_glued(r),
        }
    }

    pub fn vertically_unbounded(&self) -> bool {
        !self.north_bound && !self.south_bound
    }

    pub fn horizontally_unbounded(&self) -> bool {
        !self.east_bound && !self.west_bound
    }

    pub fn cardinally_unbounded(&self) -> bool {
        self.vertically_unbounded() && self.horizontally_unbounded()
    }

    pub fn diagonally_unbounded(&self) -> bool {
        !self.se_bound && !self.nw_bound && !self.sw_bound
    }

    pub fn in_q(&self) -> bool {
        self.connected && self.cardinally_unbounded() && self.diagonally_unbounded() && !self.glued
    }
}

/// Burnside count `(1/|G|) sum_g |Fix_X(g)|` over a set closed under `G`.
pub fn burnside(members: &[bool], group: &[StepPerm]) -> u64 {
    let mut fixed = 0u64;
    for g in group {
        for r in 0..=u16::MAX {
            if members[r as usize] && Rule(r).apply(g) == Rule(r) {
                fixed += 1;
            }
        }
    }
    assert_eq!(fixed % group.len() as u64, 0);
    fixed / group.len() as u64
}

/// Orbit count by direct enumeration: members that are the minimum of
/// their orbit.
pub fn orbit_count(members: &[bool], group: &[StepPerm]) -> u64 {
    (0..=u16::MAX)
        .filter(|&r| members[r as usize] && group.iter().all(|g| Rule(r).apply(g).0 >= r))
        .count() as u64
}

pub fn g2() -> Vec<StepPerm> {
    vec![StepPerm::ID, StepPerm::SIGMA]
}

pub fn g2_prime() -> Vec<StepPerm> {
    vec![StepPerm::ID, StepPerm::SIGMA_PRIME]
}

/// Key names in output order, with the published values.
pub const CENSUS_EXPECTED: [(&str, u64); 22] = [
    ("|T|", 65536),
    ("|C|", 25696),
    ("|A|", 25575),
    ("N_S4(T)", 3044),
    ("N_S4(C)", 1168),
    ("N_S4(A)", 1159),
    ("|V|", 19328),
    ("|V&A|", 19285),
    ("N_G2(V)", 9744),
    ("N_G2(V&A)", 9722),
    ("|U|", 14978),
    ("|U&A|", 14943),
    ("N_G2'(U)", 7541),
    ("N_G2'(U&A)", 7520),
    ("|U&D|", 14209),
    ("|U&D&A|", 14205),
    ("N_G2'(U&D)", 7149),
    ("N_G2'(U&D&A)", 7146),
    ("|Q|", 13749),
    ("|Q&A|", 13745),
    ("N_G2'(Q)", 6912),
    ("N_G2'(Q&A)", 6909),
];

pub struct Census {
    pub counts: BTreeMap<&'static str, u64>,
}

impl Census {
    pub fn get(&self, key: &str) -> u64 {
        self.counts[key]
    }

    /// Entries in the published order.
    pub fn ordered(&self) -> Vec<(&'static str, u64)> {
        CENSUS_EXPECTED.iter().map(|&(k, _)| (k, self.counts[k])).collect()
    }

    pub fn mismatches(&self) -> Vec<(&'static str, u64, u64)> {
        CENSUS_EXPECTED
            .iter()
            .filter(|&&(k, v)| self.counts[k] != v)
            .map(|&(k, v)| (k, self.counts[k], v))
            .collect()
    }
}

/// Membership tables, indexed by the rule's integer form.
pub struct Sets {
    pub t: Vec<bool>,
    pub c: Vec<bool>,
    pub a: Vec<bool>,
    pub v: Vec<bool>,
    pub u: Vec<bool>,
    pub ud: Vec<bool>,
    pub q: Vec<bool>,
}

impl Sets {
    pub fn compute() -> Sets {
        Self::compute_sharded(1)
    }

    /// Scans the rules in `shards` contiguous integer ranges on separate
    /// threads.
    pub fn compute_sharded(shards: usize) -> Sets {
        let n = 1usize << 16;
        let shards = shards.clamp(1, 64);
        let chunk = n.div_ceil(shards);
        let parts: Vec<Vec<[bool; 6]>> = std::thread::scope(|sc| {
            let hs: Vec<_> = (0..shards)
                .map(|k| sc.spawn(move || (k * chunk..((k + 1) * chunk).min(n)).map(|r| flags(Rule(r as u16))).collect()))
                .collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let all: Vec<[bool; 6]> = parts.into_iter().flatten().collect();
        let col = |i: usize| all.iter().map(|f| f[i]).collect::<Vec<bool>>();
        Sets { t: vec![true; n], c: col(0), a: col(1), v: col(2), u: col(3), ud: col(4), q: col(5) }
    }
}

fn flags(rule: Rule) -> [bool; 6] {
    if !is_connected(rule) {
        return [false; 6];
    }
    let a = is_aperiodic(rule);
    let v = is_vertically_unbounded(rule);
    let u = v && is_horizontally_unbounded(rule);
    let ud = u && is_diagonally_unbounded(rule);
    let q = ud && !is_glued(rule);
    [true, a, v, u, ud, q]
}

fn and(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| *x && *y).collect()
}

fn size(a: &[bool]) -> u64 {
    a.iter().filter(|&&x| x).count() as u64
}

/// Orbit counts use Burnside by default or direct enumeration when
/// `by_orbits` is set.
pub fn census_with(sets: &Sets, by_orbits: bool) -> Census {
    let s4 = StepPerm::all();
    let n = |m: &[bool], g: &[StepPerm]| if by_orbits { orbit_count(m, g) } else { burnside(m, g) };
    let va = and(&sets.v, &sets.a);
    let ua = and(&sets.u, &sets.a);
    let uda = and(&sets.ud, &sets.a);
    let qa = and(&sets.q, &sets.a);
    let (g2, g2p) = (g2(), g2_prime());
    let mut counts = BTreeMap::new();
    counts.insert("|T|", size(&sets.t));
    counts.insert("|C|", size(&sets.c));
    counts.insert("|A|", size(&sets.a));
    counts.insert("N_S4(T)", n(&sets.t, &s4));
    counts.insert("N_S4(C)", n(&sets.c, &s4));
    counts.insert("N_S4(A)", n(&sets.a, &s4));
    counts.insert("|V|", size(&sets.v));
    counts.insert("|V&A|", size(&va));
    counts.insert("N_G2(V)", n(&sets.v, &g2));
    counts.insert("N_G2(V&A)", n(&va, &g2));
    counts.insert("|U|", size(&sets.u));
    counts.insert("|U&A|", size(&ua));
    counts.insert("N_G2'(U)", n(&sets.u, &g2p));
    counts.insert("N_G2'(U&A)", n(&ua, &g2p));
    counts.insert("|U&D|", size(&sets.ud));
    counts.insert("|U&D&A|", size(&uda));
    counts.insert("N_G2'(U&D)", n(&sets.ud, &g2p));
    counts.insert("N_G2'(U&D&A)", n(&uda, &g2p));
    counts.insert("|Q|", size(&sets.q));
    counts.insert("|Q&A|", size(&qa));
    counts.insert("N_G2'(Q)", n(&sets.q, &g2p));
    counts.insert("N_G2'(Q&A)", n(&qa, &g2p));
    Census { counts }
}

pub fn census() -> Census {
    census_with(&Sets::compute(), false)
}

/// Lexicographically smaller bitstring of `{r, sigma'(r)}`.
pub fn qp_canonical(r: Rule) -> Rule {
    let s = r.apply(&StepPerm::SIGMA_PRIME);
    if s.bitstring() < r.bitstring() {
        s
    } else {
        r
    }
}

/// Canonical representatives of `Q & A` under `G2'`, in bitstring order.
pub fn qp_representatives() -> Vec<Rule> {
    let mut reps: Vec<Rule> = (0..=u16::MAX)
        .map(Rule)
        .filter(|&r| in_q(r) && is_aperiodic(r) && qp_canonical(r) == r)
        .collect();
    reps.sort_by_key(|r| r.bitstring());
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rule {
        Rule::decode(s).unwrap()
    }

    #[test]
    fn connectivity_and_periods() {
        assert!(!is_connected(Rule::ZERO));
        assert!(!is_connected(Rule::identity()));
        assert!(is_connected(Rule::spiral()));
        assert!(is_aperiodic(r("0100.0010.1001.1000")));
        assert_eq!(primitivity_exponent(r("0100.0010.1001.1000")), Some(10));
        assert!(!is_aperiodic(r("0101.1000.0100.1010")));
        assert!(is_aperiodic(Rule::ALL));
        assert_eq!(period(r("0101.1000.0100.1010")), Some(2));
        assert_eq!(period(r("0101.0010.1000.0010")), Some(3));
        assert_eq!(period(r("0100.0010.0001.1000")), Some(4));
        assert_eq!(period(Rule::ZERO), None);
    }

    #[test]
    fn boundedness() {
        assert!(is_vertically_unbounded(Rule::spiral()));
        let se = r("0100.1001.0001.1011");
        assert!(is_vertically_unbounded(se));
        assert!(is_se_bound(se));
        assert!(!is_diagonally_unbounded(se));
        // SS... is allowed, so the identity rule is not north-bound; it is
        // excluded from V by connectivity instead.
        assert!(is_vertically_unbounded(Rule::identity()));
        assert!(!in_v(Rule::identity()));
        assert!(is_glued(r("0001.0110.1110.1110")));
        assert!(!is_glued(Rule::spiral()));
        assert!(is_diagonally_unbounded(Rule::ALL));
        assert!(!is_glued(Rule::ALL));
    }
}
