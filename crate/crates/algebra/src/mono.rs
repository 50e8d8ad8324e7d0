//! Packed monomials t^a x^b y^c.

use std::fmt;

pub const T: usize = 0;
pub const X: usize = 1;
pub const Y: usize = 2;

pub const VAR_NAMES: [&str; 3] = ["t", "x", "y"];

/// Exponents packed as `deg | t | x | y` in 16-bit fields, so plain integer
/// comparison is graded lex with t > x > y, and multiplication is addition.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(u64);

const MASK: u64 = 0xffff;

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn new(t: u32, x: u32, y: u32) -> Mono {
        let d = t + x + y;
        assert!(d <= MASK as u32, "monomial degree overflow");
        Mono((d as u64) << 48 | (t as u64) << 32 | (x as u64) << 16 | y as u64)
    }

    pub fn from_exps(e: [u32; 3]) -> Mono {
        Mono::new(e[0], e[1], e[2])
    }

    pub fn var(v: usize, e: u32) -> Mono {
        let mut a = [0; 3];
        a[v] = e;
        Mono::from_exps(a)
    }

    #[inline]
    pub fn exp(self, v: usize) -> u32 {
        ((self.0 >> (32 - 16 * v)) & MASK) as u32
    }

    #[inline]
    pub fn exps(self) -> [u32; 3] {
        [self.exp(0), self.exp(1), self.exp(2)]
    }

    #[inline]
    pub fn deg(self) -> u32 {
        (self.0 >> 48) as u32
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn mul(self, o: Mono) -> Mono {
        debug_assert!(self.deg() + o.deg() <= MASK as u32);
        Mono(self.0 + o.0)
    }

    #[inline]
    pub fn divides(self, o: Mono) -> bool {
        (0..3).all(|v| self.exp(v) <= o.exp(v))
    }

    /// `o / self`-style quotient: requires `d.divides(self)`.
    #[inline]
    pub fn div(self, d: Mono) -> Mono {
        debug_assert!(d.divides(self));
        Mono(self.0 - d.0)
    }

    pub fn gcd(self, o: Mono) -> Mono {
        let a = self.exps();
        let b = o.exps();
        Mono::new(a[0].min(b[0]), a[1].min(b[1]), a[2].min(b[2]))
    }

    pub fn lcm(self, o: Mono) -> Mono {
        let a = self.exps();
        let b = o.exps();
        Mono::new(a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2]))
    }

    pub fn with_exp(self, v: usize, e: u32) -> Mono {
        let mut a = self.exps();
        a[v] = e;
        Mono::from_exps(a)
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for v in 0..3 {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", VAR_NAMES[v])?;
            } else {
                write!(f, "{}^{}", VAR_NAMES[v], e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_roundtrip() {
        let m = Mono::new(3, 0, 7);
        assert_eq!(m.exps(), [3, 0, 7]);
        assert_eq!(m.deg(), 10);
        assert_eq!(m.mul(Mono::new(1, 2, 3)).exps(), [4, 2, 10]);
        assert_eq!(Mono::new(4, 2, 10).div(Mono::new(1, 2, 3)), m);
    }

    #[test]
    fn graded_lex() {
        // higher degree first, then t, then x
        assert!(Mono::new(0, 0, 3) > Mono::new(1, 1, 0));
        assert!(Mono::new(1, 0, 1) > Mono::new(0, 2, 0));
        assert!(Mono::new(0, 1, 1) > Mono::new(0, 0, 2));
    }
}
