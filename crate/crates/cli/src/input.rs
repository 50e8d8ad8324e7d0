//! Parsing of rule, direction, plane and weight arguments.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed};
use std::str::FromStr;
use twostep::{Dir, Plane, Rule};

/// A rule given as `spiral`, a 16-digit bitstring (dots optional) or its
/// integer form `0..=65535`.
pub fn parse_rule(s: &str) -> Result<Rule, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("spiral") {
        return Ok(Rule::spiral());
    }
    if let Ok(r) = Rule::decode(t) {
        return Ok(r);
    }
    t.parse::<u16>()
        .map(Rule)
        .map_err(|_| format!("'{s}' is neither a 16-digit bitstring nor an integer in 0..=65535"))
}

pub fn parse_dir(s: &str) -> Result<Dir, String> {
    Dir::parse(s).ok_or_else(|| format!("'{s}' is not a direction (e, n, w, s)"))
}

pub fn parse_plane(s: &str) -> Result<Plane, String> {
    Plane::parse(s).ok_or_else(|| format!("'{s}' is not a plane (full, half, quarter)"))
}

/// `p/q`, an integer or a finite decimal, read exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    let bad = || format!("'{s}' is not a rational number");
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let num = BigInt::from_str(&format!("{int}{frac}")).map_err(|_| bad())?;
        let den = BigInt::from(10).pow(frac.len() as u32);
        return Ok(BigRational::new(num, den));
    }
    BigRational::from_str(t).map_err(|_| bad())
}

pub fn parse_weight(s: &str) -> Result<BigRational, String> {
    let q = parse_rational(s)?;
    if !q.is_positive() {
        return Err(format!("weight '{s}' must be positive"));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_forms() {
        let s = Rule::spiral();
        assert_eq!(parse_rule("spiral").unwrap(), s);
        assert_eq!(parse_rule(&s.encode()).unwrap(), s);
        assert_eq!(parse_rule(&s.bitstring()).unwrap(), s);
        assert_eq!(parse_rule(&s.0.to_string()).unwrap(), s);
        assert!(parse_rule("65536").is_err());
        assert!(parse_rule("0102.0000.0000.0000").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("1.25").unwrap(), BigRational::new(5.into(), 4.into()));
        assert_eq!(parse_rational("-2").unwrap(), BigRational::from_integer((-2).into()));
        assert!(parse_rational("1.").is_err());
        assert!(parse_weight("0").is_err());
    }
}
