//! Central simple algebras over a number field, described by their local
//! invariants.
//!
//! The model identifies a Brauer class with its vector of local
//! invariants in Q/Z (Brauer–Hasse–Noether): the index is the lcm of the
//! local orders. Scalar extension is simulated place by place: a place v
//! with local degrees d_1, …, d_r above it becomes r places with invariants
//! d_i · inv_v. Simulated outputs need not satisfy the global sum-to-zero
//! condition, because an arbitrary local-degree pattern need not come from
//! one global extension.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::arith::{valuation, Prime};
use crate::error::{Error, Result};

/// An element of Q/Z, stored as num/den in lowest terms with 0 ≤ num < den.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalInvariant {
    num: u64,
    den: u64,
}

impl LocalInvariant {
    pub const ZERO: LocalInvariant = LocalInvariant { num: 0, den: 1 };

    /// Reduces n/d modulo 1.
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidAlgebra("zero denominator".into()));
        }
        let r = num.rem_euclid(den as i64) as u64;
        let g = r.gcd(&den);
        Ok(LocalInvariant { num: r / g, den: den / g })
    }

    pub fn half() -> Self {
        LocalInvariant { num: 1, den: 2 }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    /// Order in Q/Z.
    pub fn order(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn times(self, m: u64) -> Self {
        let r = ((self.num as u128 * m as u128) % self.den as u128) as u64;
        let g = r.gcd(&self.den);
        LocalInvariant { num: r / g, den: self.den / g }
    }

    pub fn add(self, other: Self) -> Self {
        let den = self.den.lcm(&other.den);
        let num = (self.num as u128 * (den / self.den) as u128 + other.num as u128 * (den / other.den) as u128)
            % den as u128;
        let num = num as u64;
        let g = num.gcd(&den);
        LocalInvariant { num: num / g, den: den / g }
    }

    pub fn neg(self) -> Self {
        if self.num == 0 {
            self
        } else {
            LocalInvariant { num: self.den - self.num, den: self.den }
        }
    }

    /// The component of order a power of p in Q/Z = ⊕_p Q_p/Z_p.
    pub fn p_part(self, p: u64) -> Self {
        let k = valuation(self.den, p);
        let pk = p.pow(k);
        let m = self.den / pk;
        if pk == 1 {
            return LocalInvariant::ZERO;
        }
        // u ≡ num · m^{-1} (mod p^k)
        let m_inv = mod_inverse(m % pk, pk);
        let u = (self.num as u128 * m_inv as u128 % pk as u128) as u64;
        LocalInvariant::new(u as i64, pk).expect("nonzero modulus")
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

impl fmt::Display for LocalInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for LocalInvariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidAlgebra(format!("bad local invariant `{s}`"));
        let (n, d) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
        LocalInvariant::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceKind {
    Real,
    Complex,
    Finite,
}

impl PlaceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlaceKind::Real => "real",
            PlaceKind::Complex => "complex",
            PlaceKind::Finite => "finite",
        }
    }
}

impl FromStr for PlaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(PlaceKind::Real),
            "complex" => Ok(PlaceKind::Complex),
            "finite" => Ok(PlaceKind::Finite),
            _ => Err(Error::InvalidAlgebra(format!("unknown place kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalData {
    pub kind: PlaceKind,
    pub inv: LocalInvariant,
}

/// A central simple algebra of given degree with its local invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CsaDescriptor {
    degree: u64,
    places: BTreeMap<String, LocalData>,
    simulated: bool,
}

impl CsaDescriptor {
    /// Validated constructor for a global class.
    pub fn new(degree: u64, places: BTreeMap<String, LocalData>) -> Result<Self> {
        let a = CsaDescriptor { degree, places, simulated: false };
        a.validate()?;
        Ok(a)
    }

    /// Constructor for the output of a simulated extension: every check
    /// except the global sum-to-zero condition.
    pub fn new_simulated(degree: u64, places: BTreeMap<String, LocalData>) -> Result<Self> {
        let a = CsaDescriptor { degree, places, simulated: true };
        a.validate()?;
        Ok(a)
    }

    /// All places finite; invariants given as `(label, "n/d")`.
    pub fn from_invariants(degree: u64, invariants: &[(&str, &str)]) -> Result<Self> {
        let places = invariants
            .iter()
            .map(|(label, inv)| Ok((label.to_string(), LocalData { kind: PlaceKind::Finite, inv: inv.parse()? })))
            .collect::<Result<_>>()?;
        Self::new(degree, places)
    }

    pub fn split(degree: u64) -> Result<Self> {
        Self::new(degree, BTreeMap::new())
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidAlgebra(m));
        if self.degree == 0 {
            return bad("degree must be positive".into());
        }
        for (label, data) in &self.places {
            match data.kind {
                PlaceKind::Real if !(data.inv.is_zero() || data.inv == LocalInvariant::half()) => {
                    return bad(format!("real place {label} carries {}", data.inv));
                }
                PlaceKind::Complex if !data.inv.is_zero() => {
                    return bad(format!("complex place {label} carries {}", data.inv));
                }
                _ => {}
            }
        }
        if !self.simulated {
            let sum = self.places.values().fold(LocalInvariant::ZERO, |acc, d| acc.add(d.inv));
            if !sum.is_zero() {
                return bad(format!("local invariants sum to {sum}, not 0"));
            }
        }
        let index = self.index();
        if self.degree % index != 0 {
            return bad(format!("index {index} does not divide degree {}", self.degree));
        }
        Ok(())
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn places(&self) -> &BTreeMap<String, LocalData> {
        &self.places
    }

    pub fn is_simulated(&self) -> bool {
        self.simulated
    }

    pub fn invariant(&self, label: &str) -> LocalInvariant {
        self.places.get(label).map_or(LocalInvariant::ZERO, |d| d.inv)
    }

    /// lcm of the local orders.
    pub fn index(&self) -> u64 {
        self.places.values().fold(1u64, |acc, d| acc.lcm(&d.inv.order()))
    }

    pub fn p_valuation_index(&self, p: Prime) -> u32 {
        valuation(self.index(), p.get())
    }

    /// d_p, the largest power of p dividing the index.
    pub fn d_p(&self, p: Prime) -> u64 {
        p.get().pow(self.p_valuation_index(p))
    }

    /// v_p of each local order.
    pub fn local_valuations(&self, p: Prime) -> BTreeMap<String, u32> {
        self.places.iter().map(|(l, d)| (l.clone(), valuation(d.inv.order(), p.get()))).collect()
    }

    pub fn extend(&self, e: &ExtensionSim) -> Result<CsaDescriptor> {
        let mut places = BTreeMap::new();
        for (label, data) in &self.places {
            let degrees = e.degrees_at(label);
            for (slot, &deg) in degrees.iter().enumerate() {
                let kind = match (data.kind, deg) {
                    (PlaceKind::Real, 1) => PlaceKind::Real,
                    (PlaceKind::Real, 2) | (PlaceKind::Complex, 1) => PlaceKind::Complex,
                    (PlaceKind::Finite, _) => PlaceKind::Finite,
                    (kind, d) => {
                        return Err(Error::InvalidExtension(format!(
                            "local degree {d} above {} place {label}",
                            kind.as_str()
                        )))
                    }
                };
                let new_label = if degrees.len() == 1 { label.clone() } else { format!("{label}#{slot}") };
                places.insert(new_label, LocalData { kind, inv: data.inv.times(deg) });
            }
        }
        CsaDescriptor::new_simulated(self.degree, places)
    }

    /// Each invariant replaced by its p-primary component; degree p^(max k).
    pub fn p_primary_part(&self, p: Prime) -> CsaDescriptor {
        let places: BTreeMap<_, _> = self
            .places
            .iter()
            .map(|(l, d)| (l.clone(), LocalData { kind: d.kind, inv: d.inv.p_part(p.get()) }))
            .collect();
        let index = places.values().fold(1u64, |acc, d: &LocalData| acc.lcm(&d.inv.order()));
        CsaDescriptor { degree: index, places, simulated: self.simulated }
    }

    /// The opposite algebra: invariants negated.
    pub fn opposite(&self) -> CsaDescriptor {
        let places = self
            .places
            .iter()
            .map(|(l, d)| (l.clone(), LocalData { kind: d.kind, inv: d.inv.neg() }))
            .collect();
        CsaDescriptor { degree: self.degree, places, simulated: self.simulated }
    }

    /// Same Brauer class, different degree (a matrix algebra over the same
    /// division part).
    pub fn with_degree(&self, degree: u64) -> Result<CsaDescriptor> {
        let a = CsaDescriptor { degree, places: self.places.clone(), simulated: self.simulated };
        a.validate()?;
        Ok(a)
    }

    /// Index equals degree.
    pub fn is_division(&self) -> bool {
        self.index() == self.degree
    }
}

/// Local degrees of a simulated extension, per place of the base.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ExtensionSim {
    degrees: BTreeMap<String, Vec<u64>>,
}

impl ExtensionSim {
    pub fn new(degrees: BTreeMap<String, Vec<u64>>) -> Result<Self> {
        for (label, ds) in &degrees {
            if ds.is_empty() || ds.contains(&0) {
                return Err(Error::InvalidExtension(format!("place {label} needs positive local degrees")));
            }
        }
        Ok(ExtensionSim { degrees })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(&str, &[u64])]) -> Result<Self> {
        Self::new(pairs.iter().map(|(l, d)| (l.to_string(), d.to_vec())).collect())
    }

    pub fn degrees(&self) -> &BTreeMap<String, Vec<u64>> {
        &self.degrees
    }

    /// Unlisted places are unramified of degree one.
    pub fn degrees_at(&self, label: &str) -> &[u64] {
        self.degrees.get(label).map_or(&[1], Vec::as_slice)
    }
}
