//! Two-step rules on the unit steps E, N, W, S and the symmetric-group action.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    E = 0,
    N = 1,
    W = 2,
    S = 3,
}

pub const DIRS: [Dir; 4] = [Dir::E, Dir::N, Dir::W, Dir::S];

impl Dir {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Dir {
        DIRS[i]
    }

    pub fn delta(self) -> (i32, i32) {
        match self {
            Dir::E => (1, 0),
            Dir::N => (0, 1),
            Dir::W => (-1, 0),
            Dir::S => (0, -1),
        }
    }

    pub fn letter(self) -> char {
        ['e', 'n', 'w', 's'][self.index()]
    }

    pub fn parse(s: &str) -> Option<Dir> {
        match s.to_ascii_lowercase().as_str() {
            "e" | "east" => Some(Dir::E),
            "n" | "north" => Some(Dir::N),
            "w" | "west" => Some(Dir::W),
            "s" | "south" => Some(Dir::S),
            _ => None,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Bit `4i + j` is set iff step `i` may be followed by step `j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rule(pub u16);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleParseError {
    #[error("malformed rule string '{0}': expected 16 characters from {{0,1}}")]
    Malformed(String),
}

impl Rule {
    pub const ZERO: Rule = Rule(0);
    pub const ALL: Rule = Rule(0xffff);

    pub fn identity() -> Rule {
        Rule::from_matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    }

    pub fn spiral() -> Rule {
        Rule::from_matrix([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]])
    }

    pub fn from_matrix(m: [[u8; 4]; 4]) -> Rule {
        let mut bits = 0u16;
        for i in 0..4 {
            for j in 0..4 {
                if m[i][j] != 0 {
                    bits |= 1 << (4 * i + j);
                }
            }
        }
        Rule(bits)
    }

    pub fn get(self, i: usize, j: usize) -> bool {
        self.0 >> (4 * i + j) & 1 == 1
    }

    pub fn t(self, i: Dir, j: Dir) -> u8 {
        self.get(i.index(), j.index()) as u8
    }

    pub fn matrix(self) -> [[u8; 4]; 4] {
        let mut m = [[0u8; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.get(i, j) as u8;
            }
        }
        m
    }

    pub fn successors(self, i: usize) -> impl Iterator<Item = usize> {
        (0..4).filter(move |&j| self.get(i, j))
    }

    /// Dot-separated row-major bitstring.
    pub fn encode(self) -> String {
        let rows: Vec<String> =
            (0..4).map(|i| (0..4).map(|j| if self.get(i, j) { '1' } else { '0' }).collect()).collect();
        rows.join(".")
    }

    /// Undotted 16-character bitstring; orders rules lexicographically.
    pub fn bitstring(self) -> String {
        self.encode().replace('.', "")
    }

    /// Accepts the bitstring with or without separators.
    pub fn decode(s: &str) -> Result<Rule, RuleParseError> {
        let chars: Vec<char> = s.chars().filter(|&c| c != '.' && !c.is_whitespace()).collect();
        if chars.len() != 16 || chars.iter().any(|&c| c != '0' && c != '1') {
            return Err(RuleParseError::Malformed(s.to_string()));
        }
        let mut bits = 0u16;
        for (k, &c) in chars.iter().enumerate() {
            if c == '1' {
                bits |= 1 << k;
            }
        }
        Ok(Rule(bits))
    }

    pub fn apply(self, p: &StepPerm) -> Rule {
        let mut bits = 0u16;
        for i in 0..4 {
            for j in 0..4 {
                if self.get(i, j) {
                    bits |= 1 << (4 * p.0[i] as usize + p.0[j] as usize);
                }
            }
        }
        Rule(bits)
    }

    /// `c_m = c_1 T^(m-1)` with `c_1 = (1, 1, 1, 1)`; entry j counts walks
    /// ending with step j.
    pub fn transfer_counts(self, m: usize) -> [BigUint; 4] {
        assert!(m >= 1);
        let mut c: [BigUint; 4] = std::array::from_fn(|_| BigUint::one());
        for _ in 1..m {
            let mut n: [BigUint; 4] = std::array::from_fn(|_| BigUint::zero());
            for i in 0..4 {
                for j in self.successors(i) {
                    n[j] += &c[i];
                }
            }
            c = n;
        }
        c
    }

    pub fn total_count(self, m: usize) -> BigUint {
        self.transfer_counts(m).iter().sum()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rule({})", self.encode())
    }
}

impl FromStr for Rule {
    type Err = RuleParseError;
    fn from_str(s: &str) -> Result<Rule, RuleParseError> {
        Rule::decode(s)
    }
}

/// A permutation of the step directions, `i -> p[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StepPerm(pub [u8; 4]);

impl StepPerm {
    pub const ID: StepPerm = StepPerm([0, 1, 2, 3]);
    /// Swaps east and west.
    pub const SIGMA: StepPerm = StepPerm([2, 1, 0, 3]);
    /// Swaps east with north and west with south.
    pub const SIGMA_PRIME: StepPerm = StepPerm([1, 0, 3, 2]);

    pub fn new(p: [u8; 4]) -> Option<StepPerm> {
        let mut seen = [false; 4];
        for &x in &p {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(StepPerm(p))
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self` after `first`.
    pub fn after(&self, first: &StepPerm) -> StepPerm {
        StepPerm(std::array::from_fn(|i| self.0[first.0[i] as usize]))
    }

    pub fn inverse(&self) -> StepPerm {
        let mut q = [0u8; 4];
        for i in 0..4 {
            q[self.0[i] as usize] = i as u8;
        }
        StepPerm(q)
    }

    /// All 24 permutations, identity first.
    pub fn all() -> Vec<StepPerm> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        if let Some(p) = StepPerm::new([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding() {
        assert_eq!(Rule::ZERO.encode(), "0000.0000.0000.0000");
        assert_eq!(Rule::spiral().encode(), "1100.0110.0011.1001");
        assert_eq!(Rule::identity().encode(), "1000.0100.0010.0001");
        assert_eq!(Rule::decode("1100.0110.0011.1001").unwrap(), Rule::spiral());
        assert_eq!(Rule::decode("0000000000000000").unwrap(), Rule::ZERO);
        assert!(Rule::decode("110.0110").is_err());
        assert!(Rule::decode("1100.0110.0011.100x").is_err());
    }

    #[test]
    fn permutations() {
        assert_eq!(StepPerm::all().len(), 24);
        assert_eq!(Rule::spiral().apply(&StepPerm::ID), Rule::spiral());
        // b'[p(i)][p(j)] = b[i][j]
        assert_eq!(Rule::spiral().apply(&StepPerm::SIGMA).encode(), "1001.1100.0110.0011");
        for p in StepPerm::all() {
            assert_eq!(Rule::spiral().apply(&p).apply(&p.inverse()), Rule::spiral());
        }
    }

    #[test]
    fn spiral_counts() {
        let c = |m| Rule::spiral().transfer_counts(m).map(|x| x.to_string());
        assert_eq!(c(2), ["2", "2", "2", "2"]);
        assert_eq!(c(4), ["8", "8", "8", "8"]);
        assert_eq!(Rule::ALL.transfer_counts(5)[0], BigUint::from(256u32));
        assert_eq!(Rule::ZERO.total_count(1), BigUint::from(4u32));
        assert_eq!(Rule::ZERO.total_count(2), BigUint::zero());
    }
}
