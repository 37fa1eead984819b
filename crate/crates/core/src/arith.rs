//! Integer and square-class arithmetic shared by the quadratic-form and
//! Brauer-group modules.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest absolute value we are willing to factor by trial division.
pub const FACTOR_LIMIT: u64 = 1 << 40;

/// A verified rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub const TWO: Prime = Prime(2);

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// p-adic valuation of a positive integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n > 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol (a/p) for an odd prime p; zero when p divides a.
pub fn legendre(a: i64, p: u64) -> i8 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Parses `n`, `-n`, or `n/d` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A place of the rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RationalPlace {
    Infinity,
    Finite(Prime),
}

impl RationalPlace {
    pub fn prime(p: u64) -> Result<Self> {
        Ok(RationalPlace::Finite(Prime::new(p)?))
    }
}

impl fmt::Display for RationalPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPlace::Infinity => write!(f, "inf"),
            RationalPlace::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for RationalPlace {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "real" => Ok(RationalPlace::Infinity),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::Parse(format!("bad place `{t}`")))?;
                RationalPlace::prime(p)
            }
        }
    }
}

/// A class in Q*/Q*², stored as a sign and a set of primes (the
/// squarefree representative).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareClass {
    negative: bool,
    primes: BTreeSet<u64>,
}

impl SquareClass {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn minus_one() -> Self {
        SquareClass { negative: true, primes: BTreeSet::new() }
    }

    pub fn of_rational(r: &BigRational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::InvalidRational("zero has no square class".into()));
        }
        let mut primes = BTreeSet::new();
        for part in [r.numer(), r.denom()] {
            let n = part
                .abs()
                .to_u64()
                .filter(|&n| n <= FACTOR_LIMIT)
                .ok_or_else(|| Error::TooLarge(part.to_string()))?;
            for (q, e) in factorize(n) {
                if e % 2 == 1 && !primes.remove(&q) {
                    primes.insert(q);
                }
            }
        }
        Ok(SquareClass { negative: r.is_negative(), primes })
    }

    pub fn of_integer(n: i64) -> Result<Self> {
        Self::of_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.contains(&p)
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.primes.is_empty()
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        SquareClass {
            negative: self.negative ^ other.negative,
            primes: self.primes.symmetric_difference(&other.primes).copied().collect(),
        }
    }

    pub fn neg(&self) -> SquareClass {
        SquareClass { negative: !self.negative, primes: self.primes.clone() }
    }

    /// The p-free part reduced mod `m` (m ≥ 2, coprime to the remaining primes).
    fn unit_part_mod(&self, p: u64, m: u64) -> u64 {
        let mut acc = 1u128;
        for &q in self.primes.iter().filter(|&&q| q != p) {
            acc = acc * (q % m) as u128 % m as u128;
        }
        let r = acc as u64;
        if self.negative {
            (m - r) % m
        } else {
            r
        }
    }

    /// Legendre symbol of the p-free part at an odd prime p.
    pub fn unit_legendre(&self, p: u64) -> i8 {
        legendre(self.unit_part_mod(p, p) as i64, p)
    }

    /// Residue of the 2-free part mod 8 (always odd).
    pub fn unit_mod8(&self) -> u64 {
        self.unit_part_mod(2, 8)
    }

    /// Whether this class is a square in the completion at `v`.
    pub fn is_local_square(&self, v: RationalPlace) -> bool {
        match v {
            RationalPlace::Infinity => !self.negative,
            RationalPlace::Finite(p) if p.get() == 2 => !self.contains(2) && self.unit_mod8() == 1,
            RationalPlace::Finite(p) => !self.contains(p.get()) && self.unit_legendre(p.get()) == 1,
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        let mut n = BigInt::one();
        for &q in &self.primes {
            n *= q;
        }
        if self.negative {
            n = -n;
        }
        n
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.to_bigint())
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bigint())
    }
}

impl FromStr for SquareClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let r = parse_rational(s)?;
        SquareClass::of_rational(&r)
    }
}
