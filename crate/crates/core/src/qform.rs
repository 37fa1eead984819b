//! Nondegenerate quadratic forms over Q: Hilbert symbols, Hasse invariants,
//! Hasse–Minkowski isotropy and Witt indices.
//!
//! Everything past ingestion runs on [`FormInvariants`], the complete
//! isometry invariant (dimension, determinant class, finite Hasse
//! invariants, signature). Stripping a hyperbolic plane is an update of
//! that tuple; no isotropic vector is ever constructed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{format_rational, parse_rational, Prime, RationalPlace, SquareClass};
use crate::error::{Error, Result};

/// Hilbert symbol on square classes, by the closed formulas for odd
/// primes, the dyadic prime and the real place.
pub fn hilbert_symbol_classes(a: &SquareClass, b: &SquareClass, v: RationalPlace) -> i8 {
    let sign = |odd: bool| if odd { -1 } else { 1 };
    match v {
        RationalPlace::Infinity => sign(a.is_negative() && b.is_negative()),
        RationalPlace::Finite(p) if p.get() == 2 => {
            let (alpha, beta) = (a.contains(2) as u64, b.contains(2) as u64);
            let (u, w) = (a.unit_mod8(), b.unit_mod8());
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            sign((eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)) % 2 == 1)
        }
        RationalPlace::Finite(p) => {
            let p = p.get();
            let (alpha, beta) = (a.contains(p), b.contains(p));
            let mut s = sign(alpha && beta && ((p - 1) / 2) % 2 == 1);
            if beta {
                s *= a.unit_legendre(p);
            }
            if alpha {
                s *= b.unit_legendre(p);
            }
            s
        }
    }
}

/// (a, b)_v for nonzero rationals.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: RationalPlace) -> Result<i8> {
    Ok(hilbert_symbol_classes(&SquareClass::of_rational(a)?, &SquareClass::of_rational(b)?, v))
}

/// Diagonal form ⟨a_1, …, a_n⟩ with nonzero rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    coeffs: Vec<BigRational>,
    classes: Vec<SquareClass>,
}

impl QuadraticForm {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidForm("a form needs at least one coefficient".into()));
        }
        if coeffs.iter().any(Zero::is_zero) {
            return Err(Error::InvalidForm("zero coefficient (degenerate form)".into()));
        }
        let classes = coeffs.iter().map(SquareClass::of_rational).collect::<Result<_>>()?;
        Ok(QuadraticForm { coeffs, classes })
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn parse<S: AsRef<str>>(coeffs: &[S]) -> Result<Self> {
        Self::new(coeffs.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<_>>()?)
    }

    /// Diagonalizes a symmetric Gram matrix by exact symmetric elimination.
    pub fn from_gram(mut m: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = m.len();
        if m.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidForm("Gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if m[i][j] != m[j][i] {
                    return Err(Error::InvalidForm("Gram matrix is not symmetric".into()));
                }
            }
        }
        let mut diag = Vec::with_capacity(n);
        for i in 0..n {
            if m[i][i].is_zero() {
                if let Some(j) = (i + 1..n).find(|&j| !m[j][j].is_zero()) {
                    m.swap(i, j);
                    for row in m.iter_mut() {
                        row.swap(i, j);
                    }
                } else if let Some(j) = (i + 1..n).find(|&j| !m[i][j].is_zero()) {
                    // e_i <- e_i + e_j makes the pivot 2·m[i][j]
                    for k in 0..n {
                        let add = m[j][k].clone();
                        m[i][k] += add;
                    }
                    for k in 0..n {
                        let add = m[k][j].clone();
                        m[k][i] += add;
                    }
                } else {
                    return Err(Error::InvalidForm("Gram matrix is degenerate".into()));
                }
            }
            let pivot = m[i][i].clone();
            for r in i + 1..n {
                let factor = &m[r][i] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for k in i..n {
                    let sub = &factor * &m[i][k];
                    m[r][k] -= sub;
                }
                for k in i..n {
                    let sub = &factor * &m[k][i];
                    m[k][r] -= sub;
                }
            }
            diag.push(pivot);
        }
        Self::new(diag)
    }

    /// m copies of the hyperbolic plane ⟨1, −1⟩.
    pub fn hyperbolic(m: usize) -> Self {
        let one = BigRational::one();
        let coeffs = (0..m).flat_map(|_| [one.clone(), -one.clone()]).collect();
        Self::new(coeffs).expect("hyperbolic form with m ≥ 1")
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn signature(&self) -> (usize, usize) {
        let neg = self.coeffs.iter().filter(|c| c.is_negative()).count();
        (self.dim() - neg, neg)
    }

    pub fn determinant(&self) -> SquareClass {
        self.classes.iter().fold(SquareClass::one(), |acc, c| acc.mul(c))
    }

    /// (−1)^{n(n−1)/2}·det, trivial exactly when SO(q) is inner of type D.
    pub fn signed_discriminant(&self) -> SquareClass {
        self.invariants().signed_discriminant()
    }

    pub fn hasse_invariant(&self, v: RationalPlace) -> i8 {
        let mut eps = 1;
        for (i, a) in self.classes.iter().enumerate() {
            for b in &self.classes[i + 1..] {
                eps *= hilbert_symbol_classes(a, b, v);
            }
        }
        eps
    }

    pub fn relevant_primes(&self) -> BTreeSet<Prime> {
        let mut out = BTreeSet::from([Prime::TWO]);
        for c in &self.classes {
            out.extend(c.primes().map(|p| Prime::new(p).expect("factor is prime")));
        }
        out
    }

    pub fn invariants(&self) -> FormInvariants {
        let (positive, negative) = self.signature();
        let hasse = self
            .relevant_primes()
            .into_iter()
            .map(|p| (p, self.hasse_invariant(RationalPlace::Finite(p))))
            .collect();
        FormInvariants { dim: self.dim(), det: self.determinant(), hasse, positive, negative }.normalized()
    }

    /// Isotropy at one place, or over Q when `v` is `None`.
    pub fn is_isotropic(&self, v: Option<RationalPlace>) -> bool {
        let inv = self.invariants();
        match v {
            Some(v) => inv.is_locally_isotropic(v),
            None => inv.is_isotropic(),
        }
    }

    pub fn witt_index(&self) -> usize {
        self.invariants().witt_index()
    }

    pub fn orthogonal_sum(&self, other: &QuadraticForm) -> QuadraticForm {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(other.coeffs.iter().cloned());
        let mut classes = self.classes.clone();
        classes.extend(other.classes.iter().cloned());
        QuadraticForm { coeffs, classes }
    }

    pub fn scaled(&self, lambda: &BigRational) -> Result<QuadraticForm> {
        Self::new(self.coeffs.iter().map(|c| c * lambda).collect())
    }

    pub fn negated(&self) -> QuadraticForm {
        QuadraticForm {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            classes: self.classes.iter().map(SquareClass::neg).collect(),
        }
    }

    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.coefficient_strings().join(","))
    }
}

/// Complete isometry invariant of a form over Q.
///
/// `hasse` holds ε_p at 2 and at every odd prime where the determinant or
/// ε_p can be nontrivial; all other odd primes have ε_p = 1. ε_∞ is read off
/// the signature. Dimension 0 stands for the zero form left after
/// splitting off every hyperbolic plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormInvariants {
    dim: usize,
    det: SquareClass,
    hasse: BTreeMap<Prime, i8>,
    positive: usize,
    negative: usize,
}

impl FormInvariants {
    /// Checks sign consistency, support of the finite data and Hilbert
    /// reciprocity.
    pub fn new(
        dim: usize,
        det: SquareClass,
        hasse: BTreeMap<Prime, i8>,
        signature: (usize, usize),
    ) -> Result<Self> {
        let (positive, negative) = signature;
        let bad = |m: &str| Err(Error::InvalidForm(m.to_string()));
        if positive + negative != dim {
            return bad("signature does not add up to the dimension");
        }
        if det.is_negative() != (negative % 2 == 1) {
            return bad("determinant sign disagrees with the signature");
        }
        if hasse.values().any(|e| *e != 1 && *e != -1) {
            return bad("Hasse invariants must be ±1");
        }
        let mut hasse = hasse;
        hasse.entry(Prime::TWO).or_insert(1);
        for p in det.primes() {
            hasse.entry(Prime::new(p)?).or_insert(1);
        }
        let inv = FormInvariants { dim, det, hasse, positive, negative }.normalized();
        let product: i8 = inv.hasse.values().product::<i8>() * inv.hasse_at(RationalPlace::Infinity);
        if product != 1 {
            return bad("Hasse invariants violate the product formula");
        }
        if dim <= 1 && inv.hasse.values().any(|e| *e != 1) {
            return bad("forms of dimension ≤ 1 have trivial Hasse invariants");
        }
        Ok(inv)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn determinant(&self) -> &SquareClass {
        &self.det
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.positive, self.negative)
    }

    pub fn finite_hasse(&self) -> &BTreeMap<Prime, i8> {
        &self.hasse
    }

    pub fn signed_discriminant(&self) -> SquareClass {
        let n = self.dim;
        if (n * n.saturating_sub(1) / 2) % 2 == 1 {
            self.det.neg()
        } else {
            self.det.clone()
        }
    }

    pub fn hasse_at(&self, v: RationalPlace) -> i8 {
        match v {
            RationalPlace::Infinity => {
                let n = self.negative;
                if (n * n.saturating_sub(1) / 2) % 2 == 1 {
                    -1
                } else {
                    1
                }
            }
            RationalPlace::Finite(p) => self.hasse.get(&p).copied().unwrap_or(1),
        }
    }

    /// ∞ followed by the finite primes carrying data.
    pub fn relevant_places(&self) -> Vec<RationalPlace> {
        std::iter::once(RationalPlace::Infinity)
            .chain(self.hasse.keys().map(|&p| RationalPlace::Finite(p)))
            .collect()
    }

    pub fn is_locally_isotropic(&self, v: RationalPlace) -> bool {
        if let RationalPlace::Infinity = v {
            return self.positive > 0 && self.negative > 0;
        }
        let d = &self.det;
        let eps = self.hasse_at(v);
        let minus_one = SquareClass::minus_one();
        match self.dim {
            0 | 1 => false,
            2 => d.neg().is_local_square(v),
            3 => eps == hilbert_symbol_classes(&minus_one, &d.neg(), v),
            4 => !d.is_local_square(v) || eps == hilbert_symbol_classes(&minus_one, &minus_one, v),
            _ => true,
        }
    }

    /// Hasse–Minkowski. Odd primes outside the support see a unimodular
    /// form, which is isotropic from dimension 3 on.
    pub fn is_isotropic(&self) -> bool {
        match self.dim {
            0 | 1 => false,
            2 => self.det.neg().is_one(),
            _ => self.relevant_places().into_iter().all(|v| self.is_locally_isotropic(v)),
        }
    }

    /// Invariants of q' where q ≅ H ⊥ q'. Only meaningful when q is
    /// isotropic; returns `None` below dimension 2.
    pub fn strip_hyperbolic(&self) -> Option<FormInvariants> {
        if self.dim < 2 || self.positive == 0 || self.negative == 0 {
            return None;
        }
        Some(self.strip_formal())
    }

    /// The same update of det and Hasse invariants with no signature check,
    /// for local computations where q may be definite.
    fn strip_formal(&self) -> FormInvariants {
        let minus_one = SquareClass::minus_one();
        let minus_d = self.det.neg();
        let hasse = self
            .hasse
            .iter()
            .map(|(&p, &e)| (p, e * hilbert_symbol_classes(&minus_one, &minus_d, RationalPlace::Finite(p))))
            .collect();
        FormInvariants {
            dim: self.dim - 2,
            det: minus_d,
            hasse,
            positive: self.positive.saturating_sub(1),
            negative: self.negative.saturating_sub(1),
        }
        .normalized()
    }

    fn strip_while(&self, isotropic: impl Fn(&FormInvariants) -> bool) -> (usize, FormInvariants) {
        let mut current = self.clone();
        let mut count = 0;
        while current.dim >= 2 && isotropic(&current) {
            current = current.strip_formal();
            count += 1;
        }
        (count, current)
    }

    pub fn witt_index(&self) -> usize {
        self.strip_while(FormInvariants::is_isotropic).0
    }

    /// Witt index over the completion Q_v.
    pub fn local_witt_index(&self, v: RationalPlace) -> usize {
        if let RationalPlace::Infinity = v {
            return self.positive.min(self.negative);
        }
        self.strip_while(|q| q.is_locally_isotropic(v)).0
    }

    /// The anisotropic kernel over Q.
    pub fn anisotropic_kernel(&self) -> FormInvariants {
        self.strip_while(FormInvariants::is_isotropic).1
    }

    /// Invariants of q with k hyperbolic planes removed, when k ≤ w(q).
    pub fn strip(&self, k: usize) -> Option<FormInvariants> {
        let mut current = self.clone();
        for _ in 0..k {
            if !current.is_isotropic() {
                return None;
            }
            current = current.strip_hyperbolic()?;
        }
        Some(current)
    }

    pub fn orthogonal_sum(&self, other: &FormInvariants) -> FormInvariants {
        let primes: BTreeSet<Prime> = self.hasse.keys().chain(other.hasse.keys()).copied().collect();
        let hasse = primes
            .into_iter()
            .map(|p| {
                let v = RationalPlace::Finite(p);
                let e = self.hasse_at(v) * other.hasse_at(v) * hilbert_symbol_classes(&self.det, &other.det, v);
                (p, e)
            })
            .collect();
        FormInvariants {
            dim: self.dim + other.dim,
            det: self.det.mul(&other.det),
            hasse,
            positive: self.positive + other.positive,
            negative: self.negative + other.negative,
        }
        .normalized()
    }

    /// Invariants of λ·q: ε' = ε · (λ,−1)^{n(n−1)/2} · (λ,d)^{n−1}.
    pub fn scaled(&self, lambda: &SquareClass) -> FormInvariants {
        let n = self.dim;
        let mut primes: BTreeSet<Prime> = self.hasse.keys().copied().collect();
        primes.extend(lambda.primes().map(|p| Prime::new(p).expect("factor is prime")));
        let minus_one = SquareClass::minus_one();
        let hasse = primes
            .into_iter()
            .map(|p| {
                let v = RationalPlace::Finite(p);
                let mut e = self.hasse_at(v);
                if (n * n.saturating_sub(1) / 2) % 2 == 1 {
                    e *= hilbert_symbol_classes(lambda, &minus_one, v);
                }
                if n.saturating_sub(1) % 2 == 1 {
                    e *= hilbert_symbol_classes(lambda, &self.det, v);
                }
                (p, e)
            })
            .collect();
        let det = if n % 2 == 1 { self.det.mul(lambda) } else { self.det.clone() };
        let (positive, negative) = if lambda.is_negative() {
            (self.negative, self.positive)
        } else {
            (self.positive, self.negative)
        };
        FormInvariants { dim: n, det, hasse, positive, negative }.normalized()
    }

    /// Keeps Hasse entries at 2, at primes of the determinant, and where
    /// the invariant is −1, so that equal forms have equal invariants.
    fn normalized(mut self) -> Self {
        let det = &self.det;
        self.hasse.retain(|p, e| *e == -1 || p.get() == 2 || det.contains(p.get()));
        for p in det.primes() {
            self.hasse.entry(Prime::new(p).expect("factor is prime")).or_insert(1);
        }
        self.hasse.entry(Prime::TWO).or_insert(1);
        self
    }

    pub fn is_isometric(&self, other: &FormInvariants) -> bool {
        self.dim == other.dim
            && self.det == other.det
            && self.signature() == other.signature()
            && self
                .hasse
                .keys()
                .chain(other.hasse.keys())
                .all(|&p| self.hasse_at(RationalPlace::Finite(p)) == other.hasse_at(RationalPlace::Finite(p)))
    }

    /// Finds λ with λ·self ≅ other among products of −1 and the primes in
    /// the joint support, if one exists there.
    pub fn similarity_factor(&self, other: &FormInvariants) -> Option<SquareClass> {
        if self.dim != other.dim {
            return None;
        }
        let mut gens: BTreeSet<u64> = self.hasse.keys().chain(other.hasse.keys()).map(|p| p.get()).collect();
        gens.extend(self.det.primes().chain(other.det.primes()));
        let gens: Vec<u64> = gens.into_iter().collect();
        // The search is exponential in the support; larger supports are
        // reported as undecided by the caller.
        if gens.len() > 16 {
            return None;
        }
        for negative in [false, true] {
            for mask in 0u32..(1 << gens.len()) {
                let mut lambda = if negative { SquareClass::minus_one() } else { SquareClass::one() };
                for (i, &p) in gens.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        lambda = lambda.mul(&SquareClass::of_integer(p as i64).expect("prime"));
                    }
                }
                if self.scaled(&lambda).is_isometric(other) {
                    return Some(lambda);
                }
            }
        }
        None
    }
}

impl From<&QuadraticForm> for FormInvariants {
    fn from(q: &QuadraticForm) -> Self {
        q.invariants()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> QuadraticForm {
        QuadraticForm::from_integers(c).unwrap()
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn place(p: u64) -> RationalPlace {
        RationalPlace::prime(p).unwrap()
    }

    #[test]
    fn hilbert_examples() {
        for v in [RationalPlace::Infinity, place(2), place(3), place(7)] {
            assert_eq!(hilbert_symbol(&r(1), &r(-13), v).unwrap(), 1);
        }
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), RationalPlace::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol(&r(2), &r(5), place(5)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&r(-1), &r(-1), place(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&r(2), &r(3), place(3)).unwrap(), -1);
        assert!(hilbert_symbol(&r(0), &r(3), place(3)).is_err());
    }

    #[test]
    fn hasse_examples() {
        for v in [RationalPlace::Infinity, place(2), place(5)] {
            assert_eq!(q(&[1, 1, 1, 1]).hasse_invariant(v), 1);
        }
        assert_eq!(q(&[1, -1]).hasse_invariant(place(2)), 1);
        // (2,5)_5 (2,-10)_5 (5,-10)_5
        let expected: i8 = [(2, 5), (2, -10), (5, -10)]
            .iter()
            .map(|&(a, b)| hilbert_symbol(&r(a), &r(b), place(5)).unwrap())
            .product();
        assert_eq!(q(&[2, 5, -10]).hasse_invariant(place(5)), expected);
    }

    #[test]
    fn isotropy_examples() {
        assert!(q(&[1, 1, -5]).is_isotropic(None));
        assert!(!q(&[1, 1, 1, 1]).is_isotropic(None));
        assert!(!q(&[1, 1, -7]).is_isotropic(None));
        assert!(!q(&[1, 1, -7]).is_isotropic(Some(place(7))));
        assert!(q(&[1, 1, -7]).is_isotropic(Some(place(3))));
        assert!(!q(&[5]).is_isotropic(None));
        assert!(q(&[3, -3]).is_isotropic(None));
        assert!(!q(&[1, 1, 1, 1, 1]).is_isotropic(None));
        assert!(q(&[1, 1, 1, 1, 1]).is_isotropic(Some(place(2))));
    }

    #[test]
    fn witt_examples() {
        assert_eq!(q(&[1, -1, 1, -1]).witt_index(), 2);
        assert_eq!(q(&[1, 1, 1, 1]).witt_index(), 0);
        assert_eq!(q(&[1, 1, -5, -5]).witt_index(), 2);
        assert_eq!(q(&[1, 1, 1, -7]).witt_index(), 0);
        assert_eq!(q(&[1, 1, 1, 1, -1]).witt_index(), 1);
    }

    #[test]
    fn stripping_matches_explicit_forms() {
        let big = q(&[1, -1, 1, -1, 1]).invariants();
        assert!(big.strip(1).unwrap().is_isometric(&q(&[1, -1, 1]).invariants()));
        assert!(big.strip(2).unwrap().is_isometric(&q(&[1]).invariants()));
        assert!(big.strip(3).is_none());
        // ⟨1,1,−5,−5⟩ is hyperbolic
        let h = q(&[1, 1, -5, -5]).invariants().strip(2).unwrap();
        assert_eq!(h.dim(), 0);
    }

    #[test]
    fn gram_diagonalization() {
        // hyperbolic plane as [[0,1],[1,0]]
        let g = vec![vec![r(0), r(1)], vec![r(1), r(0)]];
        let form = QuadraticForm::from_gram(g).unwrap();
        assert_eq!(form.witt_index(), 1);
        let g = vec![vec![r(2), r(1), r(0)], vec![r(1), r(2), r(1)], vec![r(0), r(1), r(2)]];
        let form = QuadraticForm::from_gram(g).unwrap();
        assert_eq!(form.signature(), (3, 0));
        // det of the A3 Cartan matrix is 4
        assert!(form.determinant().is_one());
        assert!(QuadraticForm::from_gram(vec![vec![r(1), r(1)], vec![r(1), r(1)]]).is_err());
        assert!(QuadraticForm::from_gram(vec![vec![r(1), r(2)], vec![r(1), r(1)]]).is_err());
    }

    #[test]
    fn invariant_validation() {
        let inv = q(&[1, 2, 3]).invariants();
        let rebuilt =
            FormInvariants::new(inv.dim(), inv.determinant().clone(), inv.finite_hasse().clone(), inv.signature())
                .unwrap();
        assert_eq!(rebuilt, inv);
        let mut broken = inv.finite_hasse().clone();
        *broken.get_mut(&Prime::TWO).unwrap() *= -1;
        assert!(FormInvariants::new(3, inv.determinant().clone(), broken, (3, 0)).is_err());
        assert!(FormInvariants::new(2, SquareClass::one(), BTreeMap::new(), (1, 1)).is_err());
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(QuadraticForm::from_integers(&[]).is_err());
        assert!(QuadraticForm::from_integers(&[1, 0]).is_err());
        assert!(QuadraticForm::parse(&["1", "x"]).is_err());
    }

    #[test]
    fn similarity_detection() {
        let a = q(&[1, 2, 3, 5]).invariants();
        let b = q(&[3, 6, 9, 15]).invariants();
        assert!(a.similarity_factor(&b).is_some());
        assert!(q(&[1, 1, 1, 1]).invariants().similarity_factor(&q(&[1, 1, 1, -1]).invariants()).is_none());
    }
}
