//! Symbolic Krull–Schmidt calculus: motives are finite multisets of
//! shifted upper motives, identified up to isomorphism by their class id.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagram::{flag_poincare, DynkinDiagram, VertexSet};
use crate::error::{Error, Result};

/// Class id of the Tate motive.
pub const TATE: &str = "tate";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UpperMotiveLabel {
    pub group: String,
    /// Global 1-based vertex numbers of Θ.
    pub theta: Vec<u32>,
    pub p: u64,
    pub class: String,
}

impl UpperMotiveLabel {
    pub fn new(group: impl Into<String>, theta: Vec<u32>, p: u64, class: impl Into<String>) -> Self {
        let mut theta = theta;
        theta.sort_unstable();
        theta.dedup();
        UpperMotiveLabel { group: group.into(), theta, p, class: class.into() }
    }

    pub fn tate() -> Self {
        UpperMotiveLabel { group: String::new(), theta: Vec::new(), p: 0, class: TATE.into() }
    }

    pub fn is_tate(&self) -> bool {
        self.class == TATE
    }
}

impl fmt::Display for UpperMotiveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_tate() {
            return write!(f, "Tate");
        }
        let theta: Vec<String> = self.theta.iter().map(u32::to_string).collect();
        write!(f, "U({},{{{}}},{})~{}", self.group, theta.join(","), self.p, self.class)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Term {
    label: UpperMotiveLabel,
    shift: u32,
    mult: u64,
}

/// Finite multiset of (label, shift) with positive multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Term>", into = "Vec<Term>")]
pub struct Motive {
    terms: BTreeMap<(UpperMotiveLabel, u32), u64>,
}

impl TryFrom<Vec<Term>> for Motive {
    type Error = Error;
    fn try_from(terms: Vec<Term>) -> Result<Self> {
        let mut m = Motive::zero();
        for t in terms {
            if t.mult == 0 {
                return Err(Error::Parse("motive multiplicities must be positive".into()));
            }
            m.add_term(t.label, t.shift, t.mult);
        }
        Ok(m)
    }
}

impl From<Motive> for Vec<Term> {
    fn from(m: Motive) -> Self {
        m.terms.into_iter().map(|((label, shift), mult)| Term { label, shift, mult }).collect()
    }
}

impl Motive {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A single summand `label[shift]`.
    pub fn of(label: UpperMotiveLabel, shift: u32) -> Self {
        let mut m = Self::zero();
        m.add_term(label, shift, 1);
        m
    }

    pub fn tate(shift: u32) -> Self {
        Self::of(UpperMotiveLabel::tate(), shift)
    }

    pub fn add_term(&mut self, label: UpperMotiveLabel, shift: u32, mult: u64) {
        if mult > 0 {
            *self.terms.entry((label, shift)).or_insert(0) += mult;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&UpperMotiveLabel, u32, u64)> {
        self.terms.iter().map(|((l, s), &m)| (l, *s, m))
    }

    pub fn multiplicity(&self, label: &UpperMotiveLabel, shift: u32) -> u64 {
        self.terms.get(&(label.clone(), shift)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total number of indecomposable summands.
    pub fn rank(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn min_shift(&self) -> Option<u32> {
        self.terms.keys().map(|(_, s)| *s).min()
    }

    pub fn max_shift(&self) -> Option<u32> {
        self.terms.keys().map(|(_, s)| *s).max()
    }

    pub fn shifted(&self, k: u32) -> Motive {
        let terms = self.terms.iter().map(|((l, s), &m)| ((l.clone(), s + k), m)).collect();
        Motive { terms }
    }

    pub fn plus(&self, other: &Motive) -> Motive {
        let mut out = self.clone();
        for (l, s, m) in other.iter() {
            out.add_term(l.clone(), s, m);
        }
        out
    }

    pub fn scaled(&self, k: u64) -> Motive {
        if k == 0 {
            return Motive::zero();
        }
        let terms = self.terms.iter().map(|(key, &m)| (key.clone(), m * k)).collect();
        Motive { terms }
    }

    /// Part with shift exactly `i`.
    pub fn at_shift(&self, i: u32) -> Motive {
        let terms = self.terms.iter().filter(|((_, s), _)| *s == i).map(|(k, &m)| (k.clone(), m)).collect();
        Motive { terms }
    }

    /// Isomorphism of motives: equal characteristic maps.
    pub fn is_isomorphic(&self, other: &Motive) -> bool {
        chi(self) == chi(other)
    }
}

impl fmt::Display for Motive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(l, s, m)| if m == 1 { format!("{l}[{s}]") } else { format!("{m}·{l}[{s}]") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// (class id, shift) → number of summands.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct CharacteristicMap(BTreeMap<(String, u32), u64>);

impl CharacteristicMap {
    pub fn get(&self, class: &str, shift: i64) -> u64 {
        if shift < 0 {
            return 0;
        }
        self.0.get(&(class.to_string(), shift as u32)).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&str, u32, u64)> {
        self.0.iter().map(|((c, s), &m)| (c.as_str(), *s, m))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn plus(&self, other: &CharacteristicMap) -> CharacteristicMap {
        let mut out = self.0.clone();
        for (k, m) in &other.0 {
            *out.entry(k.clone()).or_insert(0) += m;
        }
        CharacteristicMap(out)
    }
}

pub fn chi(m: &Motive) -> CharacteristicMap {
    let mut out = BTreeMap::new();
    for (l, s, mult) in m.iter() {
        *out.entry((l.class.clone(), s)).or_insert(0) += mult;
    }
    CharacteristicMap(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SliceMode {
    Ge,
    Le,
    Gt,
    Lt,
}

impl SliceMode {
    fn keeps(self, shift: u32, i: i64) -> bool {
        let s = i64::from(shift);
        match self {
            SliceMode::Ge => s >= i,
            SliceMode::Le => s <= i,
            SliceMode::Gt => s > i,
            SliceMode::Lt => s < i,
        }
    }
}

impl FromStr for SliceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            ">=" | "≥" | "ge" => Ok(SliceMode::Ge),
            "<=" | "≤" | "le" => Ok(SliceMode::Le),
            ">" | "gt" => Ok(SliceMode::Gt),
            "<" | "lt" => Ok(SliceMode::Lt),
            _ => Err(Error::Parse(format!("unknown slice mode `{s}`"))),
        }
    }
}

pub fn slice(m: &Motive, i: i64, mode: SliceMode) -> Motive {
    let terms = m.terms.iter().filter(|((_, s), _)| mode.keeps(*s, i)).map(|(k, &v)| (k.clone(), v)).collect();
    Motive { terms }
}

/// Motive of a split flag variety: Tate motives weighted by the
/// coefficients of its Poincaré polynomial.
pub fn split_motive(d: &DynkinDiagram, theta: &VertexSet) -> Result<Motive> {
    let poly = flag_poincare(d, theta)?;
    let mut m = Motive::zero();
    for (j, &c) in poly.coefficients().iter().enumerate() {
        m.add_term(UpperMotiveLabel::tate(), j as u32, c);
    }
    Ok(m)
}

/// Scalar extension of motives, given by the images of upper motives.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, Motive>", into = "BTreeMap<String, Motive>")]
pub struct ExtensionModel {
    images: BTreeMap<String, Motive>,
}

impl TryFrom<BTreeMap<String, Motive>> for ExtensionModel {
    type Error = Error;
    fn try_from(images: BTreeMap<String, Motive>) -> Result<Self> {
        ExtensionModel::new(images)
    }
}

impl From<ExtensionModel> for BTreeMap<String, Motive> {
    fn from(e: ExtensionModel) -> Self {
        e.images
    }
}

impl ExtensionModel {
    /// The Tate class always maps to Tate[0]; an explicit entry must agree.
    pub fn new(images: BTreeMap<String, Motive>) -> Result<Self> {
        if let Some(t) = images.get(TATE) {
            if *t != Motive::tate(0) {
                return Err(Error::IllFormedModel("the Tate motive must map to Tate[0]".into()));
            }
        }
        Ok(ExtensionModel { images })
    }

    /// Every class in `classes` maps to its own label at shift 0.
    pub fn identity<'a>(labels: impl IntoIterator<Item = &'a UpperMotiveLabel>) -> Self {
        let images = labels.into_iter().map(|l| (l.class.clone(), Motive::of(l.clone(), 0))).collect();
        ExtensionModel { images }
    }

    pub fn image(&self, class: &str) -> Option<Motive> {
        if class == TATE {
            return Some(Motive::tate(0));
        }
        self.images.get(class).cloned()
    }

    pub fn classes(&self) -> impl Iterator<Item = &str> {
        self.images.keys().map(String::as_str)
    }

    /// Class of the unique shift-0 summand of the image of `class`.
    pub fn leading_class(&self, class: &str) -> Result<String> {
        let image = self.image(class).ok_or_else(|| Error::MissingClass(class.to_string()))?;
        let base = image.at_shift(0);
        match base.iter().collect::<Vec<_>>().as_slice() {
            [(l, _, 1)] => Ok(l.class.clone()),
            [] => Err(Error::IllFormedModel(format!("image of `{class}` has no shift-0 part"))),
            _ => Err(Error::IllFormedModel(format!("image of `{class}` has several shift-0 summands"))),
        }
    }

    /// Distinct classes have single shift-0 images lying in distinct
    /// classes.
    pub fn is_weighted(&self) -> bool {
        let mut seen = BTreeMap::new();
        for class in std::iter::once(TATE).chain(self.classes()) {
            match self.leading_class(class) {
                Ok(lead) => {
                    if let Some(prev) = seen.insert(lead, class) {
                        if prev != class {
                            return false;
                        }
                    }
                }
                Err(_) => return false,
            }
        }
        true
    }
}

pub fn restrict(m: &Motive, e: &ExtensionModel) -> Result<Motive> {
    let mut out = Motive::zero();
    for (l, s, mult) in m.iter() {
        let image = e.image(&l.class).ok_or_else(|| Error::MissingClass(l.class.clone()))?;
        out = out.plus(&image.shifted(s).scaled(mult));
    }
    Ok(out)
}

/// Compares χ_{M(X)}(U_Y, i) with χ_{M(X)_E}(U_{Y_E}, i) − χ_{(M(X)^{<i})_E}(U_{Y_E}, i),
/// where U_{Y_E} is the class of the shift-0 part of the image of U_Y.
pub fn check_calcul(mx: &Motive, e: &ExtensionModel, y: &UpperMotiveLabel, i: i64) -> Result<bool> {
    let y_e = e.leading_class(&y.class)?;
    let lhs = chi(mx).get(&y.class, i) as i128;
    let full = chi(&restrict(mx, e)?).get(&y_e, i) as i128;
    let below = chi(&restrict(&slice(mx, i, SliceMode::Lt), e)?).get(&y_e, i) as i128;
    Ok(lhs == full - below)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(c: &str) -> UpperMotiveLabel {
        UpperMotiveLabel::new("G", vec![1], 2, c)
    }

    fn m(terms: &[(&str, u32)]) -> Motive {
        let mut out = Motive::zero();
        for (c, s) in terms {
            let l = if *c == "t" { UpperMotiveLabel::tate() } else { lab(c) };
            out.add_term(l, *s, 1);
        }
        out
    }

    #[test]
    fn chi_counts() {
        assert!(chi(&Motive::zero()).is_zero());
        let c = chi(&m(&[("u", 0), ("u", 2), ("u", 2)]));
        assert_eq!(c.get("u", 0), 1);
        assert_eq!(c.get("u", 2), 2);
        let d: DynkinDiagram = "A2".parse().unwrap();
        let s = split_motive(&d, &VertexSet::of_nodes([1])).unwrap();
        assert_eq!(s, m(&[("t", 0), ("t", 1), ("t", 2)]));
    }

    #[test]
    fn slices() {
        let x = m(&[("u", 0), ("v", 1), ("u", 2)]);
        assert_eq!(slice(&x, 2, SliceMode::Lt), m(&[("u", 0), ("v", 1)]));
        assert_eq!(slice(&x, 0, SliceMode::Ge), x);
        assert_eq!(slice(&x, 1, SliceMode::Gt).plus(&slice(&x, 1, SliceMode::Le)), x);
    }

    #[test]
    fn restriction() {
        let e = ExtensionModel::new(BTreeMap::from([("u".to_string(), m(&[("t", 0), ("t", 1)]))])).unwrap();
        assert_eq!(restrict(&m(&[("u", 2)]), &e).unwrap(), m(&[("t", 2), ("t", 3)]));
        assert!(matches!(restrict(&m(&[("v", 0)]), &e), Err(Error::MissingClass(_))));
        assert!(ExtensionModel::new(BTreeMap::from([(TATE.to_string(), m(&[("t", 1)]))])).is_err());
    }

    #[test]
    fn calcul_example() {
        let x = m(&[("u", 0), ("v", 1), ("u", 2)]);
        let e = ExtensionModel::new(BTreeMap::from([
            ("u".to_string(), m(&[("t", 0)])),
            ("v".to_string(), m(&[("t", 0), ("t", 1)])),
        ]))
        .unwrap();
        assert!(check_calcul(&x, &e, &lab("u"), 2).unwrap());
        assert!(!e.is_weighted());
        let id = ExtensionModel::identity([lab("u"), lab("v")].iter());
        assert!(id.is_weighted());
        for i in -1..4 {
            assert!(check_calcul(&x, &id, &lab("v"), i).unwrap());
        }
    }

    #[test]
    fn non_weighted_model_fails() {
        let e = ExtensionModel::new(BTreeMap::from([
            ("u".to_string(), m(&[("w", 0)])),
            ("v".to_string(), m(&[("w", 0)])),
        ]))
        .unwrap();
        let x = m(&[("u", 0), ("v", 0)]);
        assert!(!check_calcul(&x, &e, &lab("u"), 0).unwrap());
    }

    #[test]
    fn json_shape() {
        let x = m(&[("u", 3), ("u", 3)]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"[{"label":{"group":"G","theta":[1],"p":2,"class":"u"},"shift":3,"mult":2}]"#);
        assert_eq!(serde_json::from_str::<Motive>(&s).unwrap(), x);
    }
}
