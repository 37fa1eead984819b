//! Tits indices and p-indices of special linear and special orthogonal
//! groups, and finite tables of higher p-indices.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::{Prime, RationalPlace};
use crate::brauer::{CsaDescriptor, ExtensionSim};
use crate::diagram::{DynkinDiagram, Series, StarAction, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::qform::{FormInvariants, QuadraticForm};

/// Label of the base field in every index table.
pub const GROUND: &str = "ground";

/// Diagram, ∗-action and the set of distinguished orbits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TitsIndex {
    diagram: DynkinDiagram,
    action: StarAction,
    distinguished: BTreeSet<VertexSet>,
}

impl TitsIndex {
    pub fn new(
        diagram: DynkinDiagram,
        action: StarAction,
        distinguished: impl IntoIterator<Item = VertexSet>,
    ) -> Result<Self> {
        let orbits = action.orbits(&diagram);
        let distinguished: BTreeSet<VertexSet> = distinguished.into_iter().collect();
        for set in &distinguished {
            if !orbits.contains(set) {
                return Err(Error::Inconsistent(format!(
                    "{} is not a ∗-orbit of {diagram}",
                    diagram.format_vertex_set(set)
                )));
            }
        }
        Ok(TitsIndex { diagram, action, distinguished })
    }

    /// Distinguished orbits are the orbits contained in `vertices`; an
    /// orbit meeting `vertices` only partially is an error.
    pub fn from_vertices(diagram: DynkinDiagram, action: StarAction, vertices: &VertexSet) -> Result<Self> {
        let mut distinguished = Vec::new();
        for orbit in action.orbits(&diagram) {
            if orbit.is_subset(vertices) {
                distinguished.push(orbit);
            } else if !orbit.is_disjoint(vertices) {
                return Err(Error::Inconsistent(format!(
                    "orbit {} only partially distinguished",
                    diagram.format_vertex_set(&orbit)
                )));
            }
        }
        Self::new(diagram, action, distinguished)
    }

    /// Every orbit distinguished.
    pub fn quasi_split(diagram: DynkinDiagram, action: StarAction) -> Self {
        let distinguished = action.orbits(&diagram).into_iter().collect();
        TitsIndex { diagram, action, distinguished }
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn action(&self) -> &StarAction {
        &self.action
    }

    pub fn distinguished(&self) -> &BTreeSet<VertexSet> {
        &self.distinguished
    }

    pub fn orbits(&self) -> Vec<VertexSet> {
        self.action.orbits(&self.diagram)
    }

    pub fn distinguished_vertices(&self) -> VertexSet {
        self.distinguished.iter().fold(VertexSet::new(), |acc, o| acc.union(o))
    }

    /// Whether the flag variety of type Θ has a point: Θ ⊆ ∪ δ0.
    pub fn admits(&self, theta: &VertexSet) -> bool {
        theta.is_subset(&self.distinguished_vertices())
    }

    pub fn is_quasi_split(&self) -> bool {
        self.distinguished.len() == self.orbits().len()
    }

    pub fn is_anisotropic(&self) -> bool {
        self.distinguished.is_empty()
    }

    fn same_shape(&self, other: &TitsIndex) -> bool {
        self.diagram == other.diagram && self.action == other.action
    }
}

/// Finite restriction of a higher index: extension label → index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HigherIndexTable {
    entries: BTreeMap<String, TitsIndex>,
    refinements: Vec<(String, String)>,
}

impl HigherIndexTable {
    /// `refinements` lists pairs (smaller, larger) of labels where the
    /// second field contains the first; distinguished sets must grow
    /// along them. The ground field lies below every entry.
    pub fn new(entries: BTreeMap<String, TitsIndex>, refinements: Vec<(String, String)>) -> Result<Self> {
        let ground = entries
            .get(GROUND)
            .ok_or_else(|| Error::Inconsistent(format!("table lacks the `{GROUND}` entry")))?;
        for (label, idx) in &entries {
            if !idx.same_shape(ground) {
                return Err(Error::Inconsistent(format!("entry `{label}` has a different diagram or action")));
            }
        }
        let mut pairs: Vec<(String, String)> = entries.keys().map(|l| (GROUND.to_string(), l.clone())).collect();
        pairs.extend(refinements.iter().cloned());
        for (lower, upper) in &pairs {
            let (lo, up) = match (entries.get(lower), entries.get(upper)) {
                (Some(lo), Some(up)) => (lo, up),
                _ => return Err(Error::Inconsistent(format!("unknown label in refinement {lower} ≤ {upper}"))),
            };
            if !lo.distinguished().is_subset(up.distinguished()) {
                return Err(Error::Inconsistent(format!("distinguished orbits shrink from `{lower}` to `{upper}`")));
            }
        }
        Ok(HigherIndexTable { entries, refinements })
    }

    pub fn single(ground: TitsIndex) -> Self {
        HigherIndexTable { entries: BTreeMap::from([(GROUND.to_string(), ground)]), refinements: Vec::new() }
    }

    pub fn ground(&self) -> &TitsIndex {
        &self.entries[GROUND]
    }

    pub fn get(&self, label: &str) -> Option<&TitsIndex> {
        self.entries.get(label)
    }

    pub fn entries(&self) -> &BTreeMap<String, TitsIndex> {
        &self.entries
    }

    pub fn refinements(&self) -> &[(String, String)] {
        &self.refinements
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// Group given only through its combinatorial data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractGroup {
    pub diagram: DynkinDiagram,
    pub action: StarAction,
    pub classical: Option<HigherIndexTable>,
    pub by_prime: BTreeMap<Prime, HigherIndexTable>,
}

impl AbstractGroup {
    pub fn new(
        diagram: DynkinDiagram,
        action: StarAction,
        classical: Option<HigherIndexTable>,
        by_prime: BTreeMap<Prime, HigherIndexTable>,
    ) -> Result<Self> {
        for table in classical.iter().chain(by_prime.values()) {
            let g = table.ground();
            if g.diagram() != &diagram || g.action() != &action {
                return Err(Error::InvalidDescriptor("table does not match the diagram and action".into()));
            }
        }
        if let Some(c) = &classical {
            for (p, table) in &by_prime {
                for (label, idx) in table.entries() {
                    if let Some(classical_idx) = c.get(label) {
                        if !classical_idx.distinguished().is_subset(idx.distinguished()) {
                            return Err(Error::Inconsistent(format!(
                                "classical index at `{label}` is not contained in its {p}-index"
                            )));
                        }
                    }
                }
            }
        }
        Ok(AbstractGroup { diagram, action, classical, by_prime })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDescriptor {
    /// SL_1(A), type A_{deg−1}.
    SpecialLinear(CsaDescriptor),
    /// SO(q), type B or D; held through the isometry invariants of q.
    SpecialOrthogonal(FormInvariants),
    Abstract(AbstractGroup),
}

impl GroupDescriptor {
    pub fn special_linear(a: CsaDescriptor) -> Self {
        GroupDescriptor::SpecialLinear(a)
    }

    pub fn special_orthogonal(q: &QuadraticForm) -> Self {
        GroupDescriptor::SpecialOrthogonal(q.invariants())
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GroupDescriptor::SpecialLinear(_) => "sl",
            GroupDescriptor::SpecialOrthogonal(_) => "so",
            GroupDescriptor::Abstract(_) => "abstract",
        }
    }

    pub fn diagram(&self) -> DynkinDiagram {
        match self {
            GroupDescriptor::SpecialLinear(a) => linear_diagram(a.degree()),
            GroupDescriptor::SpecialOrthogonal(q) => orthogonal_diagram(q.dim()),
            GroupDescriptor::Abstract(g) => g.diagram.clone(),
        }
    }

    pub fn action(&self) -> StarAction {
        match self {
            GroupDescriptor::SpecialLinear(_) => StarAction::trivial(),
            GroupDescriptor::SpecialOrthogonal(q) => orthogonal_action(q.dim(), q.signed_discriminant().is_one()),
            GroupDescriptor::Abstract(g) => g.action.clone(),
        }
    }
}

fn linear_diagram(degree: u64) -> DynkinDiagram {
    if degree <= 1 {
        DynkinDiagram::empty()
    } else {
        DynkinDiagram::simple(Series::A, (degree - 1) as u32).expect("rank ≥ 1")
    }
}

fn orthogonal_diagram(dim: usize) -> DynkinDiagram {
    let m = (dim / 2) as u32;
    match (dim % 2, m) {
        (1, m) if m >= 1 => DynkinDiagram::simple(Series::B, m).expect("rank ≥ 1"),
        (0, m) if m >= 2 => DynkinDiagram::simple(Series::D, m).expect("rank ≥ 2"),
        _ => DynkinDiagram::empty(),
    }
}

fn orthogonal_action(dim: usize, discriminant_trivial: bool) -> StarAction {
    let m = (dim / 2) as u32;
    if dim % 2 == 1 || m < 2 || discriminant_trivial {
        return StarAction::trivial();
    }
    let d = orthogonal_diagram(dim);
    StarAction::from_cycles(&d, &[vec![vec![Vertex::new(0, m - 1), Vertex::new(0, m)]]])
        .expect("fork swap is an automorphism of D_m")
}

/// Index of SO(q) over a field where q has Witt index `w` and the signed
/// discriminant is (or is not) a square, recorded with the ∗-action of
/// the base field.
fn orthogonal_index(
    dim: usize,
    base_action: StarAction,
    w: usize,
    discriminant_trivial: bool,
) -> Result<TitsIndex> {
    let d = orthogonal_diagram(dim);
    let m = dim / 2;
    let vertices: VertexSet = if d.is_empty() {
        VertexSet::new()
    } else if dim % 2 == 1 || w + 2 <= m {
        VertexSet::of_nodes(1..=w as u32)
    } else if w + 1 == m {
        if discriminant_trivial {
            return Err(Error::Inconsistent(format!(
                "Witt index {w} with trivial discriminant in dimension {dim}"
            )));
        }
        d.vertex_set()
    } else if w == m {
        if !discriminant_trivial {
            return Err(Error::Inconsistent("hyperbolic form with nontrivial discriminant".into()));
        }
        d.vertex_set()
    } else {
        return Err(Error::Inconsistent(format!("Witt index {w} exceeds half of dimension {dim}")));
    };
    TitsIndex::from_vertices(d, base_action, &vertices)
}

/// The classical Tits index.
pub fn tits_index(g: &GroupDescriptor) -> Result<TitsIndex> {
    match g {
        GroupDescriptor::SpecialLinear(a) => linear_index(a, a.index()),
        GroupDescriptor::SpecialOrthogonal(q) => {
            let trivial = q.signed_discriminant().is_one();
            orthogonal_index(q.dim(), g.action(), q.witt_index(), trivial)
        }
        GroupDescriptor::Abstract(ag) => ag
            .classical
            .as_ref()
            .map(|t| t.ground().clone())
            .ok_or_else(|| Error::InvalidDescriptor("abstract descriptor has no classical table".into())),
    }
}

/// A_{n−1} with δ0 = {k : divisor | k}.
fn linear_index(a: &CsaDescriptor, divisor: u64) -> Result<TitsIndex> {
    let n = a.degree();
    let d = linear_diagram(n);
    let vertices = VertexSet::of_nodes((1..n).filter(|k| k % divisor == 0).map(|k| k as u32));
    TitsIndex::from_vertices(d, StarAction::trivial(), &vertices)
}

/// The Tits p-index: orbits that become distinguished over some extension
/// of degree prime to p.
pub fn p_index(g: &GroupDescriptor, p: Prime) -> Result<TitsIndex> {
    match g {
        GroupDescriptor::SpecialLinear(a) => linear_index(a, a.d_p(p)),
        GroupDescriptor::SpecialOrthogonal(_) if p.get() == 2 => tits_index(g),
        GroupDescriptor::SpecialOrthogonal(_) => Ok(TitsIndex::quasi_split(g.diagram(), g.action())),
        GroupDescriptor::Abstract(ag) => ag
            .by_prime
            .get(&p)
            .map(|t| t.ground().clone())
            .ok_or(Error::MissingPrimeData(p.get())),
    }
}

pub fn is_quasi_p_split(g: &GroupDescriptor, p: Prime) -> Result<bool> {
    Ok(p_index(g, p)?.is_quasi_split())
}

pub fn is_p_anisotropic(g: &GroupDescriptor, p: Prime) -> Result<bool> {
    Ok(p_index(g, p)?.is_anisotropic())
}

/// How an extension in a registry acts on a descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionSpec {
    Ground,
    /// Local degrees over each place (special linear groups).
    Algebra(ExtensionSim),
    /// The completion Q_v, the real closure for v = ∞ (orthogonal groups).
    Completion(RationalPlace),
    /// An entry of an abstract descriptor's own tables.
    Label,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryEntry {
    pub label: String,
    pub spec: ExtensionSpec,
}

impl RegistryEntry {
    pub fn new(label: impl Into<String>, spec: ExtensionSpec) -> Self {
        RegistryEntry { label: label.into(), spec }
    }
}

/// p-index of an orthogonal group over a completion of Q.
pub fn local_orthogonal_p_index(q: &FormInvariants, v: RationalPlace, p: Prime) -> Result<TitsIndex> {
    let base_action = orthogonal_action(q.dim(), q.signed_discriminant().is_one());
    if p.get() != 2 {
        return Ok(TitsIndex::quasi_split(orthogonal_diagram(q.dim()), base_action));
    }
    let w = q.local_witt_index(v);
    let trivial = q.signed_discriminant().is_local_square(v);
    orthogonal_index(q.dim(), base_action, w, trivial)
}

/// p-indices of `g` over every registry entry, plus the ground field.
pub fn higher_p_index(g: &GroupDescriptor, p: Prime, registry: &[RegistryEntry]) -> Result<HigherIndexTable> {
    let mut entries = BTreeMap::from([(GROUND.to_string(), p_index(g, p)?)]);
    for entry in registry {
        let inapplicable = |reason: &str| Error::InapplicableExtension {
            label: entry.label.clone(),
            reason: reason.to_string(),
        };
        let idx = match (&entry.spec, g) {
            (ExtensionSpec::Ground, _) => p_index(g, p)?,
            (_, _) if entry.label == GROUND => return Err(inapplicable("the ground label is reserved")),
            (ExtensionSpec::Algebra(sim), GroupDescriptor::SpecialLinear(a)) => {
                p_index(&GroupDescriptor::SpecialLinear(a.extend(sim)?), p)?
            }
            (ExtensionSpec::Completion(v), GroupDescriptor::SpecialOrthogonal(q)) => {
                local_orthogonal_p_index(q, *v, p)?
            }
            (ExtensionSpec::Label, GroupDescriptor::Abstract(ag)) => ag
                .by_prime
                .get(&p)
                .ok_or(Error::MissingPrimeData(p.get()))?
                .get(&entry.label)
                .cloned()
                .ok_or_else(|| inapplicable("label missing from the abstract table"))?,
            (spec, g) => {
                return Err(inapplicable(&format!(
                    "{} extension for {} descriptor",
                    spec_name(spec),
                    g.kind_name()
                )))
            }
        };
        if entries.insert(entry.label.clone(), idx).is_some() && entry.label != GROUND {
            return Err(inapplicable("duplicate label"));
        }
    }
    HigherIndexTable::new(entries, Vec::new())
}

fn spec_name(spec: &ExtensionSpec) -> &'static str {
    match spec {
        ExtensionSpec::Ground => "ground",
        ExtensionSpec::Algebra(_) => "local-degree",
        ExtensionSpec::Completion(_) => "completion",
        ExtensionSpec::Label => "label",
    }
}
