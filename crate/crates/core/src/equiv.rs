//! Equivalence modulo p and motivic equivalence of group descriptors,
//! Levi reduction, and class ids for upper motives.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{valuation, Prime, RationalPlace};
use crate::brauer::{CsaDescriptor, ExtensionSim, PlaceKind};
use crate::diagram::VertexSet;
use crate::error::{Error, Result};
use crate::motive::TATE;
use crate::qform::FormInvariants;
use crate::titsindex::{p_index, tits_index, GroupDescriptor, TitsIndex, GROUND};

/// Data showing that two descriptors are not equivalent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    /// Different diagrams or ∗-actions.
    Type { type_mismatch: [String; 2] },
    /// Even-dimensional forms with different signed discriminants.
    Discriminant { discriminants: [String; 2] },
    /// p-adic valuations of the local orders at one place.
    Place { place: String, vp_orders: [u32; 2] },
    /// Witt indices over the ground field (`ground`), `R`, or `Q_p`.
    WittIndex { field: String, witt_indices: [usize; 2] },
    /// A registry entry whose distinguished orbits differ.
    Entry { entry: String, distinguished: [Vec<Vec<u32>>; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Equivalent {
        /// Set when the verdict only covers the extensions of a registry.
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        registry_relative: bool,
    },
    NotEquivalent {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prime: Option<u64>,
        witness: Witness,
    },
    Unknown {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prime: Option<u64>,
        reason: String,
    },
}

impl Verdict {
    pub const EQUIVALENT: Verdict = Verdict::Equivalent { registry_relative: false };

    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent { .. })
    }

    pub fn is_not_equivalent(&self) -> bool {
        matches!(self, Verdict::NotEquivalent { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Equivalent { .. } => "equivalent",
            Verdict::NotEquivalent { .. } => "not_equivalent",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    fn not_equivalent(p: Option<Prime>, witness: Witness) -> Verdict {
        Verdict::NotEquivalent { prime: p.map(Prime::get), witness }
    }
}

fn check_kinds(g: &GroupDescriptor, h: &GroupDescriptor) -> Result<()> {
    if std::mem::discriminant(g) == std::mem::discriminant(h) {
        Ok(())
    } else {
        Err(Error::KindMismatch(g.kind_name(), h.kind_name()))
    }
}

/// Diagram and ∗-action comparison shared by every criterion.
fn type_witness(g: &GroupDescriptor, h: &GroupDescriptor) -> Option<Witness> {
    let describe = |g: &GroupDescriptor| {
        let action = g.action();
        if action.is_trivial() {
            g.diagram().to_string()
        } else {
            format!("{} with action {:?}", g.diagram(), action_cycles(g))
        }
    };
    if g.diagram() != h.diagram() || g.action() != h.action() {
        return Some(Witness::Type { type_mismatch: [describe(g), describe(h)] });
    }
    if let (GroupDescriptor::SpecialOrthogonal(q), GroupDescriptor::SpecialOrthogonal(r)) = (g, h) {
        let (dq, dr) = (q.signed_discriminant(), r.signed_discriminant());
        if q.dim() % 2 == 0 && dq != dr {
            return Some(Witness::Discriminant { discriminants: [dq.to_string(), dr.to_string()] });
        }
    }
    None
}

fn action_cycles(g: &GroupDescriptor) -> Vec<Vec<Vec<u32>>> {
    let d = g.diagram();
    g.action()
        .cycles()
        .iter()
        .map(|gen| gen.iter().map(|c| c.iter().filter_map(|v| d.global_index(v)).collect()).collect())
        .collect()
}

/// p-adic valuation of every local order, over the union of both place sets.
fn place_valuations(a: &CsaDescriptor, b: &CsaDescriptor, p: Prime) -> Result<Vec<(String, [u32; 2])>> {
    let mut labels: BTreeSet<&String> = a.places().keys().collect();
    labels.extend(b.places().keys());
    let mut out = Vec::new();
    for label in labels {
        if let (Some(x), Some(y)) = (a.places().get(label), b.places().get(label)) {
            if x.kind != y.kind {
                return Err(Error::InvalidDescriptor(format!(
                    "place {label} is {} for one algebra and {} for the other",
                    x.kind.as_str(),
                    y.kind.as_str()
                )));
            }
        }
        let v = |c: &CsaDescriptor| valuation(c.invariant(label).order(), p.get());
        out.push((label.clone(), [v(a), v(b)]));
    }
    Ok(out)
}

fn completion_name(v: RationalPlace) -> String {
    match v {
        RationalPlace::Infinity => "R".into(),
        RationalPlace::Finite(p) => format!("Q_{p}"),
    }
}

fn parse_field(field: &str) -> Result<Option<RationalPlace>> {
    match field {
        GROUND => Ok(None),
        "R" => Ok(Some(RationalPlace::Infinity)),
        f => match f.strip_prefix("Q_") {
            Some(p) => Ok(Some(p.parse()?)),
            None => Err(Error::Parse(format!("unknown field `{f}`"))),
        },
    }
}

fn orthogonal_mod_2(q: &FormInvariants, r: &FormInvariants) -> Verdict {
    let two = Some(Prime::TWO);
    let (wq, wr) = (q.witt_index(), r.witt_index());
    if wq != wr {
        return Verdict::not_equivalent(two, Witness::WittIndex { field: GROUND.into(), witt_indices: [wq, wr] });
    }
    let mut places: BTreeSet<RationalPlace> = q.relevant_places().into_iter().collect();
    places.extend(r.relevant_places());
    for v in places {
        let (lq, lr) = (q.local_witt_index(v), r.local_witt_index(v));
        if lq != lr {
            return Verdict::not_equivalent(
                two,
                Witness::WittIndex { field: completion_name(v), witt_indices: [lq, lr] },
            );
        }
    }
    if q.similarity_factor(r).is_some() {
        return Verdict::EQUIVALENT;
    }
    Verdict::Unknown { prime: Some(2), reason: "no similarity factor found among S-units; local Witt indices agree".into() }
}

fn index_nodes(idx: &TitsIndex) -> Vec<Vec<u32>> {
    let d = idx.diagram();
    idx.distinguished()
        .iter()
        .map(|o| o.iter().filter_map(|v| d.global_index(v)).collect())
        .collect()
}

/// Equivalence modulo p of two descriptors of the same kind.
///
/// Special linear groups are compared place by place. Orthogonal groups
/// at p = 2 are separated by Witt indices over Q and its completions and
/// identified by similarity; everything else is `Unknown`. Abstract
/// descriptors are compared entrywise over their common registry labels.
pub fn equivalent_mod_p(g: &GroupDescriptor, h: &GroupDescriptor, p: Prime) -> Result<Verdict> {
    check_kinds(g, h)?;
    if let Some(w) = type_witness(g, h) {
        return Ok(Verdict::not_equivalent(Some(p), w));
    }
    Ok(match (g, h) {
        (GroupDescriptor::SpecialLinear(a), GroupDescriptor::SpecialLinear(b)) => {
            match place_valuations(a, b, p)?.into_iter().find(|(_, [x, y])| x != y) {
                Some((place, vp_orders)) => Verdict::not_equivalent(Some(p), Witness::Place { place, vp_orders }),
                None => Verdict::EQUIVALENT,
            }
        }
        (GroupDescriptor::SpecialOrthogonal(q), GroupDescriptor::SpecialOrthogonal(r)) => {
            if p.get() == 2 {
                orthogonal_mod_2(q, r)
            } else {
                Verdict::EQUIVALENT
            }
        }
        (GroupDescriptor::Abstract(x), GroupDescriptor::Abstract(y)) => match (x.by_prime.get(&p), y.by_prime.get(&p)) {
            (Some(tx), Some(ty)) => {
                let differing = tx
                    .entries()
                    .iter()
                    .filter_map(|(label, ix)| ty.get(label).map(|iy| (label, ix, iy)))
                    .find(|(_, ix, iy)| ix != iy);
                match differing {
                    Some((label, ix, iy)) => Verdict::not_equivalent(
                        Some(p),
                        Witness::Entry { entry: label.clone(), distinguished: [index_nodes(ix), index_nodes(iy)] },
                    ),
                    None => Verdict::Equivalent { registry_relative: true },
                }
            }
            _ => Verdict::Unknown { prime: Some(p.get()), reason: format!("no {p}-index table on both sides") },
        },
        _ => unreachable!("kinds checked above"),
    })
}

impl Witness {
    /// Recomputes the data recorded in the witness and checks that it
    /// separates `g` and `h`.
    pub fn verify(&self, g: &GroupDescriptor, h: &GroupDescriptor, p: Prime) -> Result<bool> {
        check_kinds(g, h)?;
        Ok(match (self, g, h) {
            (Witness::Type { .. } | Witness::Discriminant { .. }, _, _) => type_witness(g, h).as_ref() == Some(self),
            (Witness::Place { place, vp_orders }, GroupDescriptor::SpecialLinear(a), GroupDescriptor::SpecialLinear(b)) => {
                let v = |c: &CsaDescriptor| valuation(c.invariant(place).order(), p.get());
                vp_orders[0] != vp_orders[1] && [v(a), v(b)] == *vp_orders
            }
            (
                Witness::WittIndex { field, witt_indices },
                GroupDescriptor::SpecialOrthogonal(q),
                GroupDescriptor::SpecialOrthogonal(r),
            ) => {
                let w = |f: &FormInvariants| match parse_field(field) {
                    Ok(None) => Some(f.witt_index()),
                    Ok(Some(v)) => Some(f.local_witt_index(v)),
                    Err(_) => None,
                };
                witt_indices[0] != witt_indices[1] && [w(q), w(r)] == [Some(witt_indices[0]), Some(witt_indices[1])]
            }
            (Witness::Entry { entry, distinguished }, GroupDescriptor::Abstract(x), GroupDescriptor::Abstract(y)) => {
                let get = |ag: &crate::titsindex::AbstractGroup| {
                    ag.by_prime.get(&p).and_then(|t| t.get(entry)).map(index_nodes)
                };
                distinguished[0] != distinguished[1]
                    && get(x).as_ref() == Some(&distinguished[0])
                    && get(y).as_ref() == Some(&distinguished[1])
            }
            _ => false,
        })
    }
}

/// Primes at which the two descriptors may fail to be equivalent.
pub fn relevant_primes(g: &GroupDescriptor, h: &GroupDescriptor) -> Result<BTreeSet<Prime>> {
    check_kinds(g, h)?;
    Ok(match (g, h) {
        (GroupDescriptor::SpecialLinear(a), GroupDescriptor::SpecialLinear(b)) => {
            let mut primes = BTreeSet::new();
            for idx in [a.index(), b.index()] {
                for (q, _) in crate::arith::factorize(idx) {
                    primes.insert(Prime::new(q)?);
                }
            }
            primes
        }
        (GroupDescriptor::SpecialOrthogonal(_), _) => BTreeSet::from([Prime::TWO]),
        (GroupDescriptor::Abstract(x), GroupDescriptor::Abstract(y)) => {
            x.by_prime.keys().chain(y.by_prime.keys()).copied().collect()
        }
        _ => unreachable!("kinds checked above"),
    })
}

/// Equivalence modulo every prime. Primes outside [`relevant_primes`]
/// see quasi-p-split groups on both sides.
pub fn motivically_equivalent(g: &GroupDescriptor, h: &GroupDescriptor) -> Result<Verdict> {
    check_kinds(g, h)?;
    if let Some(w) = type_witness(g, h) {
        return Ok(Verdict::not_equivalent(None, w));
    }
    let mut unknown = None;
    let mut registry_relative = false;
    for p in relevant_primes(g, h)? {
        match equivalent_mod_p(g, h, p)? {
            v @ Verdict::NotEquivalent { .. } => return Ok(v),
            Verdict::Unknown { reason, .. } => {
                unknown.get_or_insert(Verdict::Unknown { prime: Some(p.get()), reason });
            }
            Verdict::Equivalent { registry_relative: r } => registry_relative |= r,
        }
    }
    Ok(unknown.unwrap_or(Verdict::Equivalent { registry_relative }))
}

/// Draws random local-degree extensions and returns the first one over
/// which the p-adic valuations of the two indices differ, together with
/// those valuations. Degrees at finite places are powers of p (prime-to-p
/// degrees do not change p-valuations); real places stay real or become
/// complex.
pub fn search_separating_extension(
    a: &CsaDescriptor,
    b: &CsaDescriptor,
    p: Prime,
    draws: usize,
    seed: u64,
) -> Result<Option<(ExtensionSim, [u32; 2])>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut places: BTreeMap<&String, (PlaceKind, u32)> = BTreeMap::new();
    for c in [a, b] {
        for (label, data) in c.places() {
            let e = places.entry(label).or_insert((data.kind, 0));
            e.1 = e.1.max(valuation(data.inv.order(), p.get()));
        }
    }
    for draw in 0..=draws {
        let sim = if draw == 0 {
            ExtensionSim::trivial()
        } else {
            let mut degrees = BTreeMap::new();
            for (label, &(kind, vmax)) in &places {
                let local = match kind {
                    PlaceKind::Real => vec![rng.gen_range(1..=2)],
                    PlaceKind::Complex => vec![1],
                    PlaceKind::Finite => {
                        let slots = rng.gen_range(1..=2);
                        (0..slots).map(|_| p.get().pow(rng.gen_range(0..=vmax + 1))).collect()
                    }
                };
                degrees.insert(label.to_string(), local);
            }
            ExtensionSim::new(degrees)?
        };
        let va = a.extend(&sim)?.p_valuation_index(p);
        let vb = b.extend(&sim)?.p_valuation_index(p);
        if va != vb {
            return Ok(Some((sim, [va, vb])));
        }
    }
    Ok(None)
}

/// Semisimple parts of a Levi subgroup of type Θ, as descriptors.
///
/// For SL(A) with Θ = {k1 < … < kr} the blocks have degrees k1, k2 − k1,
/// …, n − kr and the Brauer class of A. For SO(q) the vertices give the
/// dimensions of the isotropic subspaces in the flag; the result is split
/// special linear blocks followed by the orthogonal group of what is left
/// of q (omitted when that is zero-dimensional).
pub fn levi_descriptor(g: &GroupDescriptor, theta: &VertexSet) -> Result<Vec<GroupDescriptor>> {
    let d = g.diagram();
    d.check_subset(theta)?;
    if !g.action().is_stable(theta) {
        return Err(Error::InvalidVertexSet(format!("{} is not ∗-stable", d.format_vertex_set(theta))));
    }
    let idx = tits_index(g)?;
    if !idx.admits(theta) {
        return Err(Error::NotDistinguished(d.format_vertex_set(theta)));
    }
    let nodes: Vec<u64> = theta.iter().map(|v| u64::from(v.node)).collect();
    match g {
        GroupDescriptor::SpecialLinear(a) => {
            let n = a.degree();
            let mut cuts = nodes;
            cuts.push(n);
            let mut prev = 0;
            let mut out = Vec::new();
            for k in cuts {
                out.push(GroupDescriptor::SpecialLinear(a.with_degree(k - prev)?));
                prev = k;
            }
            Ok(out)
        }
        GroupDescriptor::SpecialOrthogonal(q) => {
            let dims = isotropic_dimensions(q, &nodes, g.action().is_trivial());
            let mut out = Vec::new();
            let mut prev = 0;
            for &k in &dims {
                out.push(GroupDescriptor::SpecialLinear(CsaDescriptor::split(k - prev)?));
                prev = k;
            }
            let rest = q
                .strip(prev as usize)
                .ok_or_else(|| Error::Inconsistent(format!("form does not contain {prev} hyperbolic planes")))?;
            if rest.dim() > 0 {
                out.push(GroupDescriptor::SpecialOrthogonal(rest));
            }
            Ok(out)
        }
        GroupDescriptor::Abstract(_) => {
            Err(Error::InvalidDescriptor("Levi reduction needs a classical descriptor".into()))
        }
    }
}

/// Dimensions of the isotropic subspaces in a flag of type Θ. In type
/// D_m the two fork vertices stand for the two families of maximal
/// isotropic subspaces: one fork alone means dimension m, both together
/// (inner form) mean m − 1 and m, and the outer orbit means m − 1.
fn isotropic_dimensions(q: &FormInvariants, nodes: &[u64], inner: bool) -> Vec<u64> {
    let m = (q.dim() / 2) as u64;
    let mut dims = BTreeSet::new();
    if q.dim() % 2 == 1 || m < 2 {
        dims.extend(nodes.iter().copied());
    } else {
        let forks = nodes.iter().filter(|&&k| k + 1 >= m).count();
        dims.extend(nodes.iter().copied().filter(|&k| k + 1 < m));
        match (forks, inner) {
            (0, _) => {}
            (1, _) => {
                dims.insert(m);
            }
            (_, true) => {
                dims.insert(m - 1);
                dims.insert(m);
            }
            (_, false) => {
                dims.insert(m - 1);
            }
        }
    }
    dims.into_iter().collect()
}

/// Class ids of upper motives, keyed by (group name, Θ).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassAssignment {
    pub ids: BTreeMap<(String, VertexSet), String>,
    pub caveats: Vec<String>,
}

impl ClassAssignment {
    pub fn get(&self, group: &str, theta: &VertexSet) -> Option<&str> {
        self.ids.get(&(group.to_string(), theta.clone())).map(String::as_str)
    }
}

/// Groups the upper motives U(X_Θ) of the given groups into isomorphism
/// classes modulo p.
///
/// A flag variety with a point over a prime-to-p extension has the Tate
/// motive as upper motive (class [`TATE`]). Two p-anisotropic flag
/// varieties of the same type share a class exactly when their groups are
/// equivalent modulo p; an `Unknown` verdict keeps the classes apart and
/// records a caveat.
pub fn assign_class_ids(
    groups: &[(String, GroupDescriptor)],
    thetas: &[VertexSet],
    p: Prime,
) -> Result<ClassAssignment> {
    let mut out = ClassAssignment::default();
    let indices: Vec<TitsIndex> = groups.iter().map(|(_, g)| p_index(g, p)).collect::<Result<_>>()?;
    let mut verdicts: BTreeMap<(usize, usize), Verdict> = BTreeMap::new();
    let mut counter = 0;
    for theta in thetas {
        let mut parent: Vec<usize> = (0..groups.len()).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        let mut anisotropic = Vec::new();
        for (i, (name, g)) in groups.iter().enumerate() {
            g.diagram().check_subset(theta)?;
            if indices[i].admits(theta) {
                out.ids.insert((name.clone(), theta.clone()), TATE.to_string());
            } else {
                anisotropic.push(i);
            }
        }
        for (x, &i) in anisotropic.iter().enumerate() {
            for &j in &anisotropic[x + 1..] {
                if !verdicts.contains_key(&(i, j)) {
                    verdicts.insert((i, j), equivalent_mod_p(&groups[i].1, &groups[j].1, p)?);
                }
                match &verdicts[&(i, j)] {
                    Verdict::Equivalent { .. } => {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                    Verdict::Unknown { reason, .. } => out.caveats.push(format!(
                        "{} and {} at {}: {reason}",
                        groups[i].0,
                        groups[j].0,
                        groups[i].1.diagram().format_vertex_set(theta)
                    )),
                    Verdict::NotEquivalent { .. } => {}
                }
            }
        }
        let mut names: BTreeMap<usize, String> = BTreeMap::new();
        for &i in &anisotropic {
            let root = find(&mut parent, i);
            let id = names
                .entry(root)
                .or_insert_with(|| {
                    counter += 1;
                    format!("c{counter}")
                })
                .clone();
            out.ids.insert((groups[i].0.clone(), theta.clone()), id);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qform::QuadraticForm;

    fn sl(deg: u64, inv: &[(&str, &str)]) -> GroupDescriptor {
        GroupDescriptor::SpecialLinear(CsaDescriptor::from_invariants(deg, inv).unwrap())
    }

    fn so(c: &[i64]) -> GroupDescriptor {
        GroupDescriptor::special_orthogonal(&QuadraticForm::from_integers(c).unwrap())
    }

    const TWO: Prime = Prime::TWO;

    #[test]
    fn linear_examples() {
        let a = sl(4, &[("v3", "1/4"), ("v5", "3/4")]);
        let b = sl(4, &[("v3", "3/4"), ("v5", "1/4")]);
        let c = sl(4, &[("v3", "1/2"), ("v5", "1/2")]);
        assert_eq!(equivalent_mod_p(&a, &b, TWO).unwrap(), Verdict::EQUIVALENT);
        let v = equivalent_mod_p(&a, &c, TWO).unwrap();
        let w = Witness::Place { place: "v3".into(), vp_orders: [2, 1] };
        assert_eq!(v, Verdict::NotEquivalent { prime: Some(2), witness: w.clone() });
        assert!(w.verify(&a, &c, TWO).unwrap());
        assert!(motivically_equivalent(&a, &b).unwrap().is_equivalent());
        let split = sl(4, &[]);
        match motivically_equivalent(&split, &c).unwrap() {
            Verdict::NotEquivalent { prime, .. } => assert_eq!(prime, Some(2)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn orthogonal_examples() {
        let v = equivalent_mod_p(&so(&[1, 1, 1, 1]), &so(&[1, 1, 1, -1]), TWO).unwrap();
        assert!(v.is_not_equivalent());
        let q = so(&[1, 2, -3]);
        assert!(motivically_equivalent(&q, &so(&[3, 6, -9])).unwrap().is_equivalent());
        assert!(equivalent_mod_p(&so(&[1, 1, 1]), &so(&[2, 3, 5]), Prime::new(3).unwrap()).unwrap().is_equivalent());
    }

    #[test]
    fn kinds_must_match() {
        assert_eq!(equivalent_mod_p(&sl(2, &[]), &so(&[1, 1, 1]), TWO), Err(Error::KindMismatch("sl", "so")));
    }

    #[test]
    fn verdict_json() {
        let v = Verdict::NotEquivalent { prime: Some(2), witness: Witness::Place { place: "v3".into(), vp_orders: [2, 1] } };
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"verdict":"not_equivalent","prime":2,"witness":{"place":"v3","vp_orders":[2,1]}}"#);
        assert_eq!(serde_json::from_str::<Verdict>(&s).unwrap(), v);
        assert_eq!(serde_json::to_string(&Verdict::EQUIVALENT).unwrap(), r#"{"verdict":"equivalent"}"#);
    }

    #[test]
    fn levi_examples() {
        let two = VertexSet::of_nodes([2]);
        let out = levi_descriptor(&sl(4, &[]), &two).unwrap();
        assert_eq!(out, vec![sl(2, &[]), sl(2, &[])]);
        let quat = [("v3", "1/2"), ("v5", "1/2")];
        assert_eq!(levi_descriptor(&sl(4, &quat), &two).unwrap(), vec![sl(2, &quat), sl(2, &quat)]);
        assert!(matches!(levi_descriptor(&sl(4, &quat), &VertexSet::of_nodes([1])), Err(Error::NotDistinguished(_))));
        let out = levi_descriptor(&so(&[1, -1, 1, -1, 1]), &VertexSet::of_nodes([1])).unwrap();
        assert_eq!(out, vec![sl(1, &[]), so(&[1, -1, 1])]);
    }

    #[test]
    fn levi_forks() {
        // 6-dimensional hyperbolic form, D3 inner
        let h = so(&[1, -1, 1, -1, 1, -1]);
        let out = levi_descriptor(&h, &VertexSet::of_nodes([3])).unwrap();
        assert_eq!(out, vec![sl(3, &[])]);
        let out = levi_descriptor(&h, &VertexSet::of_nodes([2, 3])).unwrap();
        assert_eq!(out, vec![sl(2, &[]), sl(1, &[])]);
        // outer form with w = 2
        let g = so(&[1, -1, 1, -1, 1, 1]);
        assert!(levi_descriptor(&g, &VertexSet::of_nodes([2])).is_err());
        let out = levi_descriptor(&g, &VertexSet::of_nodes([2, 3])).unwrap();
        assert_eq!(out, vec![sl(2, &[]), so(&[1, 1])]);
    }

    #[test]
    fn class_ids() {
        let a = sl(4, &[("v3", "1/4"), ("v5", "3/4")]);
        let b = sl(4, &[("v3", "3/4"), ("v5", "1/4")]);
        let groups = vec![("A".to_string(), a), ("Aop".to_string(), b)];
        let one = VertexSet::of_nodes([1]);
        let ids = assign_class_ids(&groups, &[one.clone()], TWO).unwrap();
        assert_eq!(ids.get("A", &one), ids.get("Aop", &one));
        assert_ne!(ids.get("A", &one), Some(TATE));

        let groups = vec![("split".to_string(), sl(2, &[])), ("quat".to_string(), sl(2, &[("v2", "1/2"), ("v3", "1/2")]))];
        let ids = assign_class_ids(&groups, &[one.clone()], TWO).unwrap();
        assert_eq!(ids.get("split", &one), Some(TATE));
        assert_ne!(ids.get("quat", &one), Some(TATE));
    }

    #[test]
    fn oracle_finds_separating_extension() {
        let a = CsaDescriptor::from_invariants(4, &[("v3", "1/4"), ("v5", "3/4")]).unwrap();
        let c = CsaDescriptor::from_invariants(4, &[("v3", "1/4"), ("v5", "1/4"), ("v7", "1/2")]).unwrap();
        let found = search_separating_extension(&a, &c, TWO, 200, 7).unwrap();
        let (sim, [x, y]) = found.expect("v7 differs");
        assert_ne!(x, y);
        assert_eq!(a.extend(&sim).unwrap().p_valuation_index(TWO), x);
        assert!(search_separating_extension(&a, &a.opposite(), TWO, 200, 7).unwrap().is_none());
    }
}
