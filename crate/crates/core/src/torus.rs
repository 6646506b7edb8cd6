//! Exact points of the circle `T = ℝ/ℤ`.
//!
//! Angles are reduced rationals in `[0, 1)`. An irrational rotation number is
//! replaced by one of its continued-fraction convergents; the literal syntax
//! `cf:<name>:<k>` selects the `k`-th convergent (index 0 is the integer part)
//! of `sqrt2`, `golden` or `e`, reduced mod 1.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusAngle(BigRational);

impl TorusAngle {
    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    /// `numer/denom mod 1`.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::InvalidArgument("angle denominator must be nonzero".into()));
        }
        Ok(Self::from_rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let frac = &r - r.floor();
        Self(frac)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `n·self mod 1`.
    pub fn times(&self, n: &BigInt) -> Self {
        let r = (n * self.numer()).mod_floor(self.denom());
        Self(BigRational::new(r, self.denom().clone()))
    }

    pub fn add(&self, other: &TorusAngle) -> Self {
        Self::from_rational(&self.0 + &other.0)
    }

    /// `k`-th continued-fraction convergent of a named constant, mod 1.
    pub fn convergent(name: &str, k: usize) -> Result<Self> {
        let c = NamedConstant::from_str(name)?;
        Ok(Self::from_rational(c.convergent(k)))
    }
}

impl fmt::Debug for TorusAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for TorusAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

/// Parses `p/q`, a bare integer, or `cf:<name>:<k>`.
impl FromStr for TorusAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("cf:") {
            let (name, k) = rest
                .rsplit_once(':')
                .ok_or_else(|| Error::InvalidArgument(format!("expected cf:<name>:<k>, got '{s}'")))?;
            let k: usize = k
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad convergent index '{k}'")))?;
            return Self::convergent(name, k);
        }
        parse_rational(s).map(Self::from_rational)
    }
}

/// Parses `p/q` or an integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("expected a rational 'p/q', got '{s}'"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::InvalidArgument(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(n, d))
}

/// Nearest-integer distance between two angles, in `[0, 1/2]`.
pub fn torus_distance(a: &TorusAngle, b: &TorusAngle) -> BigRational {
    let diff = (a.value() - b.value()).abs();
    let one = BigRational::one();
    let other = &one - &diff;
    if diff < other {
        diff
    } else {
        other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConstant {
    Sqrt2,
    Golden,
    E,
}

impl FromStr for NamedConstant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt2" => Ok(Self::Sqrt2),
            "golden" => Ok(Self::Golden),
            "e" => Ok(Self::E),
            other => Err(Error::InvalidArgument(format!(
                "unknown constant '{other}' (expected sqrt2, golden or e)"
            ))),
        }
    }
}

impl NamedConstant {
    /// Partial quotient `a_i` of the regular continued fraction.
    pub fn partial_quotient(self, i: usize) -> u64 {
        match self {
            Self::Sqrt2 => {
                if i == 0 {
                    1
                } else {
                    2
                }
            }
            Self::Golden => 1,
            // e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]
            Self::E => match i {
                0 => 2,
                i if i % 3 == 2 => 2 * (i as u64 + 1) / 3,
                _ => 1,
            },
        }
    }

    /// `h_k / k_k` from the standard three-term recurrence.
    pub fn convergent(self, k: usize) -> BigRational {
        let (mut h_prev, mut h) = (BigInt::one(), BigInt::from(self.partial_quotient(0)));
        let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
        for i in 1..=k {
            let a = BigInt::from(self.partial_quotient(i));
            let h_next = &a * &h + &h_prev;
            let q_next = &a * &q + &q_prev;
            h_prev = std::mem::replace(&mut h, h_next);
            q_prev = std::mem::replace(&mut q, q_next);
        }
        BigRational::new(h, q)
    }
}

/// Membership test for the open arc `{x : ‖x − center‖ < radius}` evaluated at
/// `m·angle`, using only integer arithmetic on a common denominator.
#[derive(Debug, Clone)]
pub(crate) struct ArcProbe {
    // angle = a/q, center = u/v, radius = s/t
    av: BigInt,
    uq: BigInt,
    qv: BigInt,
    t: BigInt,
    sqv: BigInt,
}

impl ArcProbe {
    pub fn new(angle: &TorusAngle, center: &TorusAngle, radius: &BigRational) -> Self {
        let (a, q) = (angle.numer(), angle.denom());
        let (u, v) = (center.numer(), center.denom());
        let qv = q * v;
        Self {
            av: a * v,
            uq: u * q,
            t: radius.denom().clone(),
            sqv: radius.numer() * &qv,
            qv,
        }
    }

    /// `‖m·angle − center‖ < radius`.
    pub fn hits(&self, m: &BigInt) -> bool {
        let r = (m * &self.av - &self.uq).mod_floor(&self.qv);
        let other = &self.qv - &r;
        let dist = if r < other { r } else { other };
        dist * &self.t < self.sqv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ang(s: &str) -> TorusAngle {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normalization() {
        assert_eq!(ang("5/4"), ang("1/4"));
        assert_eq!(ang("-1/4"), ang("3/4"));
        assert_eq!(ang("2/8"), ang("1/4"));
        assert_eq!(ang("3"), TorusAngle::zero());
        assert!("1/0".parse::<TorusAngle>().is_err());
        assert!("abc".parse::<TorusAngle>().is_err());
        assert_eq!(ang("-1/4").denom(), &BigInt::from(4));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(torus_distance(&ang("0"), &ang("0")), q(0, 1));
        assert_eq!(torus_distance(&ang("1/4"), &ang("3/4")), q(1, 2));
        assert_eq!(torus_distance(&ang("1/10"), &ang("9/10")), q(1, 5));
        assert_eq!(torus_distance(&ang("9/10"), &ang("1/10")), q(1, 5));
    }

    #[test]
    fn convergents() {
        assert_eq!(NamedConstant::Sqrt2.convergent(0), q(1, 1));
        assert_eq!(NamedConstant::Sqrt2.convergent(1), q(3, 2));
        assert_eq!(NamedConstant::Sqrt2.convergent(3), q(17, 12));
        assert_eq!(NamedConstant::Golden.convergent(5), q(13, 8));
        // e: 2, 3, 8/3, 11/4, 19/7, 87/32
        let e: Vec<_> = (0..6).map(|k| NamedConstant::E.convergent(k)).collect();
        assert_eq!(e, vec![q(2, 1), q(3, 1), q(8, 3), q(11, 4), q(19, 7), q(87, 32)]);
        let a = ang("cf:sqrt2:40");
        assert_eq!(a.denom().to_string(), "1746860020068409");
        assert_eq!(a.numer().to_string(), "723573111879672");
        assert!("cf:pi:3".parse::<TorusAngle>().is_err());
        assert!("cf:sqrt2".parse::<TorusAngle>().is_err());
    }

    #[test]
    fn arc_probe_matches_distance() {
        let angle = ang("cf:golden:20");
        let center = ang("1/3");
        let radius = q(1, 7);
        let probe = ArcProbe::new(&angle, &center, &radius);
        for m in -300i64..300 {
            let m = BigInt::from(m);
            let expect = torus_distance(&angle.times(&m), &center) < radius;
            assert_eq!(probe.hits(&m), expect);
        }
    }
}
