//! Dynkin diagrams with Bourbaki numbering, star-actions, Levi surgery and
//! Poincaré polynomials of split flag varieties.
//!
//! Vertex numbering per series (edges are generated, never tabulated):
//!
//! ```text
//! A_n  1 - 2 - ... - n
//! B_n  1 - 2 - ... - (n-1) => n      (n short)
//! C_n  1 - 2 - ... - (n-1) <= n      (n long)
//! D_n  1 - 2 - ... - (n-2) < (n-1), n
//! E_n  1 - 3 - 4 - 5 - ... - n, with 2 attached to 4
//! F_4  1 - 2 => 3 - 4
//! G_2  1 <≡ 2                        (1 short)
//! ```
//!
//! A flag variety of type Θ is the one whose parabolic is obtained by
//! crossing the vertices of Θ; its Levi keeps the complement Δ∖Θ.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }
}

/// A simple component: series letter and rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub series: Series,
    pub rank: u32,
}

impl Component {
    pub fn new(series: Series, rank: u32) -> Result<Self> {
        let ok = match series {
            Series::A | Series::B | Series::C => rank >= 1,
            Series::D => rank >= 2,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(Component { series, rank })
        } else {
            Err(Error::InvalidDiagram(format!("no simple type {}{}", series.letter(), rank)))
        }
    }

    /// Edges between Bourbaki-numbered nodes (unordered, i < j not guaranteed).
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let n = self.rank;
        let chain = |upto: u32| (1..upto).map(|i| (i, i + 1)).collect::<Vec<_>>();
        match self.series {
            Series::A | Series::B | Series::C => chain(n),
            Series::D => {
                let mut e: Vec<_> = (1..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
                if n >= 3 {
                    e.push((n - 2, n));
                }
                e
            }
            Series::E => {
                let mut e = vec![(1, 3), (2, 4)];
                e.extend((3..n).map(|i| (i, i + 1)));
                e
            }
            Series::F => chain(4),
            Series::G => chain(2),
        }
    }

    /// Squared root length of a node, normalized so the shortest is 1.
    pub fn root_length(&self, node: u32) -> u8 {
        let n = self.rank;
        match self.series {
            Series::A | Series::D | Series::E => 1,
            Series::B => {
                if node == n {
                    1
                } else {
                    2
                }
            }
            Series::C => {
                if node == n {
                    2
                } else {
                    1
                }
            }
            Series::F => {
                if node <= 2 {
                    2
                } else {
                    1
                }
            }
            Series::G => {
                if node == 1 {
                    1
                } else {
                    3
                }
            }
        }
    }

    /// Fundamental degrees of the Weyl group.
    pub fn degrees(&self) -> Vec<u32> {
        let n = self.rank;
        match self.series {
            Series::A => (2..=n + 1).collect(),
            Series::B | Series::C => (1..=n).map(|i| 2 * i).collect(),
            Series::D => {
                let mut d: Vec<u32> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d
            }
            Series::E => match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            Series::F => vec![2, 6, 8, 12],
            Series::G => vec![2, 6],
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for Component {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = chars
            .next()
            .and_then(Series::from_letter)
            .ok_or_else(|| Error::InvalidDiagram(format!("bad component `{s}`")))?;
        let rank: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidDiagram(format!("bad component `{s}`")))?;
        Component::new(series, rank)
    }
}

/// A vertex: component index and Bourbaki number within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub component: usize,
    pub node: u32,
}

impl Vertex {
    pub fn new(component: usize, node: u32) -> Self {
        Vertex { component, node }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(BTreeSet<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.0.contains(v)
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        self.0.insert(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vertex> {
        self.0.iter()
    }

    pub fn first(&self) -> Option<&Vertex> {
        self.0.first()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.difference(&other.0).copied().collect())
    }

    /// Nodes of a single-component set (component 0).
    pub fn of_nodes(nodes: impl IntoIterator<Item = u32>) -> VertexSet {
        nodes.into_iter().map(|n| Vertex::new(0, n)).collect()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Vertex;
    type IntoIter = std::collections::btree_set::Iter<'a, Vertex>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Disjoint union of simple components.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DynkinDiagram {
    components: Vec<Component>,
}

impl DynkinDiagram {
    pub fn new(components: Vec<Component>) -> Self {
        DynkinDiagram { components }
    }

    pub fn simple(series: Series, rank: u32) -> Result<Self> {
        Ok(DynkinDiagram::new(vec![Component::new(series, rank)?]))
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(i, c)| (1..=c.rank).map(move |n| Vertex::new(i, n)))
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.components.get(v.component).is_some_and(|c| (1..=c.rank).contains(&v.node))
    }

    pub fn check_subset(&self, theta: &VertexSet) -> Result<()> {
        match theta.iter().find(|v| !self.contains(v)) {
            Some(v) => Err(Error::InvalidVertexSet(format!(
                "vertex {} not in {self}",
                self.global_index(v)
                    .map(|g| g.to_string())
                    .unwrap_or_else(|| format!("{}:{}", v.component, v.node))
            ))),
            None => Ok(()),
        }
    }

    /// 1-based position in the concatenated vertex order.
    pub fn global_index(&self, v: &Vertex) -> Option<u32> {
        if !self.contains(v) {
            return None;
        }
        let offset: u32 = self.components[..v.component].iter().map(|c| c.rank).sum();
        Some(offset + v.node)
    }

    pub fn vertex_at(&self, global: u32) -> Option<Vertex> {
        let mut rest = global;
        for (i, c) in self.components.iter().enumerate() {
            if rest >= 1 && rest <= c.rank {
                return Some(Vertex::new(i, rest));
            }
            rest = rest.checked_sub(c.rank)?;
        }
        None
    }

    pub fn root_length(&self, v: &Vertex) -> u8 {
        self.components[v.component].root_length(v.node)
    }

    pub fn adjacent(&self, u: &Vertex, v: &Vertex) -> bool {
        u.component == v.component
            && self.components[u.component]
                .edges()
                .iter()
                .any(|&(a, b)| (a, b) == (u.node, v.node) || (b, a) == (u.node, v.node))
    }

    /// Number of bonds between two vertices (0 when not adjacent).
    pub fn bond(&self, u: &Vertex, v: &Vertex) -> u8 {
        if !self.adjacent(u, v) {
            return 0;
        }
        let (a, b) = (self.root_length(u), self.root_length(v));
        a.max(b) / a.min(b)
    }

    /// Cartan matrix ⟨α_i^∨, α_j⟩ in global vertex order.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let verts: Vec<Vertex> = self.vertices().collect();
        verts
            .iter()
            .map(|u| {
                verts
                    .iter()
                    .map(|v| {
                        if u == v {
                            2
                        } else if self.adjacent(u, v) {
                            let (lu, lv) = (self.root_length(u) as i64, self.root_length(v) as i64);
                            -(lu.max(lv) / lu)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Vertex reference in text syntax: `A3:2`, or `A1#2:1` for the second
    /// `A1` component, or a bare global index.
    pub fn parse_vertex(&self, s: &str) -> Result<Vertex> {
        let s = s.trim();
        let bad = || Error::InvalidVertexSet(format!("bad vertex `{s}` for diagram {self}"));
        let v = match s.split_once(':') {
            None => self.vertex_at(s.parse().map_err(|_| bad())?).ok_or_else(bad)?,
            Some((comp, node)) => {
                let (name, occurrence) = match comp.split_once('#') {
                    Some((n, k)) => (n, k.parse::<usize>().map_err(|_| bad())?),
                    None => (comp, 1),
                };
                let wanted: Component = name.parse()?;
                let index = self
                    .components
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c == wanted)
                    .nth(occurrence.checked_sub(1).ok_or_else(bad)?)
                    .map(|(i, _)| i)
                    .ok_or_else(bad)?;
                Vertex::new(index, node.trim().parse().map_err(|_| bad())?)
            }
        };
        if self.contains(&v) {
            Ok(v)
        } else {
            Err(bad())
        }
    }

    /// Vertex set in text syntax: `{A3:1,A3:3}`, `1,3`, or empty.
    pub fn parse_vertex_set(&self, s: &str) -> Result<VertexSet> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| self.parse_vertex(t))
            .collect()
    }

    pub fn format_vertex(&self, v: &Vertex) -> String {
        let c = self.components[v.component];
        let occurrence = self.components[..v.component].iter().filter(|x| **x == c).count();
        if occurrence == 0 {
            format!("{c}:{}", v.node)
        } else {
            format!("{c}#{}:{}", occurrence + 1, v.node)
        }
    }

    pub fn format_vertex_set(&self, set: &VertexSet) -> String {
        let parts: Vec<String> = set.iter().map(|v| self.format_vertex(v)).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// ASCII picture, one line per component; vertices in `circled` are
    /// drawn as `(k)`.
    pub fn render_ascii(&self, circled: &VertexSet) -> String {
        let mut out = String::new();
        for (ci, comp) in self.components.iter().enumerate() {
            let label = |n: u32| {
                if circled.contains(&Vertex::new(ci, n)) {
                    format!("({n})")
                } else {
                    format!(" {n} ")
                }
            };
            let spine: Vec<u32> = match comp.series {
                Series::E => std::iter::once(1).chain(3..=comp.rank).collect(),
                Series::D if comp.rank >= 3 => (1..comp.rank).collect(),
                _ => (1..=comp.rank).collect(),
            };
            let mut line = format!("{:<4} ", comp.to_string());
            for (k, &n) in spine.iter().enumerate() {
                if k > 0 {
                    let prev = spine[k - 1];
                    let (u, v) = (Vertex::new(ci, prev), Vertex::new(ci, n));
                    let link = match (self.bond(&u, &v), self.root_length(&u).cmp(&self.root_length(&v))) {
                        (0, _) => "   ",
                        (1, _) => "-",
                        (2, std::cmp::Ordering::Greater) => "=>",
                        (2, _) => "<=",
                        (_, std::cmp::Ordering::Greater) => "≡>",
                        _ => "<≡",
                    };
                    line.push_str(link);
                }
                line.push_str(&label(n));
            }
            let extra: Vec<u32> = (1..=comp.rank).filter(|n| !spine.contains(n)).collect();
            for n in extra {
                let anchor = comp
                    .edges()
                    .iter()
                    .find_map(|&(a, b)| if a == n { Some(b) } else if b == n { Some(a) } else { None });
                match anchor {
                    Some(a) => line.push_str(&format!("   {} attached to {a}", label(n))),
                    None => line.push_str(&format!("   {}", label(n))),
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", names.join("+"))
    }
}

impl FromStr for DynkinDiagram {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(DynkinDiagram::empty());
        }
        let comps = s.split('+').map(str::parse).collect::<Result<Vec<_>>>()?;
        Ok(DynkinDiagram::new(comps))
    }
}

/// A permutation of the vertices of a diagram.
pub type VertexMap = BTreeMap<Vertex, Vertex>;

/// The ∗-action, given by generating diagram automorphisms.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarAction {
    generators: Vec<VertexMap>,
}

impl StarAction {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Validates each generator as an automorphism of `d`. Generators are
    /// completed to the identity on unlisted vertices; identity generators
    /// are dropped.
    pub fn new(d: &DynkinDiagram, generators: Vec<VertexMap>) -> Result<Self> {
        let mut kept = Vec::new();
        for g in generators {
            let full = check_automorphism(d, &g)?;
            if full.iter().any(|(a, b)| a != b) {
                kept.push(full);
            }
        }
        let action = StarAction { generators: kept };
        for orbit in action.orbits(d) {
            let comps: BTreeSet<usize> = orbit.iter().map(|v| v.component).collect();
            if orbit.len() >= 3
                && comps.len() == 1
                && d.components[orbit.first().unwrap().component].series == Series::D
            {
                return Err(Error::UnsupportedAction(format!(
                    "trialitarian orbit {} on {d}",
                    d.format_vertex_set(&orbit)
                )));
            }
        }
        Ok(action)
    }

    /// Builds from generators written as lists of cycles.
    pub fn from_cycles(d: &DynkinDiagram, generators: &[Vec<Vec<Vertex>>]) -> Result<Self> {
        let mut maps = Vec::new();
        for cycles in generators {
            let mut map = VertexMap::new();
            for cycle in cycles {
                for (k, v) in cycle.iter().enumerate() {
                    let next = cycle[(k + 1) % cycle.len()];
                    if map.insert(*v, next).is_some() {
                        return Err(Error::NotAutomorphism(format!(
                            "vertex {} repeated in generator",
                            d.format_vertex(v)
                        )));
                    }
                }
            }
            maps.push(map);
        }
        StarAction::new(d, maps)
    }

    pub fn generators(&self) -> &[VertexMap] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generators as lists of nontrivial cycles.
    pub fn cycles(&self) -> Vec<Vec<Vec<Vertex>>> {
        self.generators
            .iter()
            .map(|g| {
                let mut seen = BTreeSet::new();
                let mut cycles = Vec::new();
                for &start in g.keys() {
                    if seen.contains(&start) || g[&start] == start {
                        continue;
                    }
                    let mut cycle = vec![start];
                    seen.insert(start);
                    let mut v = g[&start];
                    while v != start {
                        seen.insert(v);
                        cycle.push(v);
                        v = g[&v];
                    }
                    cycles.push(cycle);
                }
                cycles
            })
            .collect()
    }

    fn image(&self, gen: usize, v: &Vertex) -> Vertex {
        *self.generators[gen].get(v).unwrap_or(v)
    }

    /// Orbits of the generated group, sorted by least vertex.
    pub fn orbits(&self, d: &DynkinDiagram) -> Vec<VertexSet> {
        let mut seen = BTreeSet::new();
        let mut orbits = Vec::new();
        for start in d.vertices() {
            if !seen.insert(start) {
                continue;
            }
            let mut orbit = VertexSet::new();
            orbit.insert(start);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for g in 0..self.generators.len() {
                    let w = self.image(g, &v);
                    if seen.insert(w) {
                        orbit.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            orbits.push(orbit);
        }
        orbits.sort();
        orbits
    }

    pub fn is_stable(&self, set: &VertexSet) -> bool {
        (0..self.generators.len()).all(|g| set.iter().all(|v| set.contains(&self.image(g, v))))
    }
}

/// Returns the generator completed to a full bijection, or an error if it
/// is not an automorphism of `d`.
fn check_automorphism(d: &DynkinDiagram, g: &VertexMap) -> Result<VertexMap> {
    let mut full: VertexMap = d.vertices().map(|v| (v, v)).collect();
    for (a, b) in g {
        if !d.contains(a) || !d.contains(b) {
            return Err(Error::NotAutomorphism("vertex outside the diagram".into()));
        }
        full.insert(*a, *b);
    }
    let images: BTreeSet<&Vertex> = full.values().collect();
    if images.len() != full.len() {
        return Err(Error::NotAutomorphism("generator is not a bijection".into()));
    }
    for (u, gu) in &full {
        if d.components[u.component] != d.components[gu.component] || d.root_length(u) != d.root_length(gu) {
            return Err(Error::NotAutomorphism(format!(
                "{} cannot map to {}",
                d.format_vertex(u),
                d.format_vertex(gu)
            )));
        }
        for (v, gv) in &full {
            if d.bond(u, v) != d.bond(gu, gv) {
                return Err(Error::NotAutomorphism(format!(
                    "edge {}–{} not preserved",
                    d.format_vertex(u),
                    d.format_vertex(v)
                )));
            }
        }
    }
    Ok(full)
}

/// Partition of the vertices of `d` into orbits of the group generated by
/// `generators`.
pub fn orbits(d: &DynkinDiagram, generators: Vec<VertexMap>) -> Result<Vec<VertexSet>> {
    Ok(StarAction::new(d, generators)?.orbits(d))
}

/// The semisimple type left after deleting Θ, with the relabeling of the
/// surviving vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviType {
    pub diagram: DynkinDiagram,
    pub relabel: VertexMap,
}

pub fn levi_type(d: &DynkinDiagram, theta: &VertexSet) -> Result<LeviType> {
    d.check_subset(theta)?;
    let mut pieces: Vec<Vec<Vertex>> = Vec::new();
    let mut seen = BTreeSet::new();
    for v in d.vertices() {
        if theta.contains(&v) || !seen.insert(v) {
            continue;
        }
        let mut piece = vec![v];
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for w in d.vertices().filter(|w| w.component == u.component) {
                if !theta.contains(&w) && d.adjacent(&u, &w) && seen.insert(w) {
                    piece.push(w);
                    queue.push_back(w);
                }
            }
        }
        piece.sort();
        pieces.push(piece);
    }
    let mut components = Vec::new();
    let mut relabel = VertexMap::new();
    for (index, piece) in pieces.iter().enumerate() {
        let comp = classify_piece(d, piece)?;
        let matching = match_standard(d, piece, comp)
            .ok_or_else(|| Error::InvalidDiagram(format!("cannot identify {comp} inside {d}")))?;
        for (node, old) in matching.iter().enumerate() {
            relabel.insert(*old, Vertex::new(index, node as u32 + 1));
        }
        components.push(comp);
    }
    Ok(LeviType { diagram: DynkinDiagram::new(components), relabel })
}

fn classify_piece(d: &DynkinDiagram, piece: &[Vertex]) -> Result<Component> {
    let n = piece.len() as u32;
    let degree = |v: &Vertex| piece.iter().filter(|w| d.adjacent(v, w)).count();
    let mut max_bond = 0;
    let mut multi_edge = None;
    for (i, u) in piece.iter().enumerate() {
        for w in &piece[i + 1..] {
            let b = d.bond(u, w);
            if b > max_bond {
                max_bond = b;
            }
            if b >= 2 {
                multi_edge = Some((*u, *w));
            }
        }
    }
    let comp = if n == 1 {
        Component::new(Series::A, 1)
    } else if max_bond == 3 {
        Component::new(Series::G, 2)
    } else if let Some((u, w)) = multi_edge {
        if n == 2 {
            Component::new(Series::B, 2)
        } else if degree(&u) == 1 || degree(&w) == 1 {
            let (end, inner) = if degree(&u) == 1 { (u, w) } else { (w, u) };
            if d.root_length(&end) < d.root_length(&inner) {
                Component::new(Series::B, n)
            } else {
                Component::new(Series::C, n)
            }
        } else {
            Component::new(Series::F, 4)
        }
    } else if let Some(center) = piece.iter().find(|v| degree(v) == 3) {
        let mut arms: Vec<u32> = piece
            .iter()
            .filter(|w| d.adjacent(center, w))
            .map(|start| {
                let (mut prev, mut cur, mut len) = (*center, *start, 1);
                while let Some(next) = piece.iter().find(|x| **x != prev && d.adjacent(&cur, x)) {
                    prev = cur;
                    cur = *next;
                    len += 1;
                }
                len
            })
            .collect();
        arms.sort_unstable();
        match arms.as_slice() {
            [1, 1, k] => Component::new(Series::D, k + 3),
            [1, 2, k] => Component::new(Series::E, k + 4),
            _ => Err(Error::InvalidDiagram(format!("unexpected branching {arms:?}"))),
        }
    } else {
        Component::new(Series::A, n)
    };
    comp
}

/// Lexicographically least assignment standard node → piece vertex that
/// preserves adjacency and the length order along every edge.
fn match_standard(d: &DynkinDiagram, piece: &[Vertex], comp: Component) -> Option<Vec<Vertex>> {
    let std = DynkinDiagram::new(vec![comp]);
    let std_nodes: Vec<Vertex> = std.vertices().collect();
    let mut assignment: Vec<Vertex> = Vec::with_capacity(piece.len());
    fn extend(
        d: &DynkinDiagram,
        std: &DynkinDiagram,
        piece: &[Vertex],
        std_nodes: &[Vertex],
        assignment: &mut Vec<Vertex>,
    ) -> bool {
        let k = assignment.len();
        if k == std_nodes.len() {
            return true;
        }
        for cand in piece {
            if assignment.contains(cand) {
                continue;
            }
            let consistent = (0..k).all(|j| {
                let (sa, sb) = (&std_nodes[j], &std_nodes[k]);
                let (pa, pb) = (&assignment[j], cand);
                let adj = std.adjacent(sa, sb);
                adj == d.adjacent(pa, pb)
                    && (!adj
                        || std.root_length(sa).cmp(&std.root_length(sb))
                            == d.root_length(pa).cmp(&d.root_length(pb)))
            });
            if consistent {
                assignment.push(*cand);
                if extend(d, std, piece, std_nodes, assignment) {
                    return true;
                }
                assignment.pop();
            }
        }
        false
    }
    extend(d, &std, piece, &std_nodes, &mut assignment).then_some(assignment)
}

/// Polynomial in q with nonnegative integer coefficients, index = degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PoincarePolynomial(Vec<u64>);

impl PoincarePolynomial {
    pub fn one() -> Self {
        PoincarePolynomial(vec![1])
    }

    pub fn from_coefficients(mut coeffs: Vec<u64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PoincarePolynomial(coeffs)
    }

    /// 1 + q + ... + q^{d-1}.
    pub fn q_integer(d: u32) -> Self {
        PoincarePolynomial(vec![1; d as usize])
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval_at_one(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0u64; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PoincarePolynomial::from_coefficients(out)
    }

    /// Exact quotient in Z[q]; fails if the divisor does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let lead = *divisor.0.last().ok_or(Error::InexactDivision)? as i128;
        if lead == 0 || divisor.0.len() > self.0.len() {
            return Err(Error::InexactDivision);
        }
        let mut rem: Vec<i128> = self.0.iter().map(|&c| c as i128).collect();
        let dlen = divisor.0.len();
        let mut quot = vec![0i128; rem.len() - dlen + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dlen - 1];
            if c % lead != 0 {
                return Err(Error::InexactDivision);
            }
            let q = c / lead;
            quot[k] = q;
            for (j, &dc) in divisor.0.iter().enumerate() {
                rem[k + j] -= q * dc as i128;
            }
        }
        if rem.iter().any(|&r| r != 0) || quot.iter().any(|&q| q < 0) {
            return Err(Error::InexactDivision);
        }
        Ok(PoincarePolynomial::from_coefficients(quot.into_iter().map(|q| q as u64).collect()))
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 if *c == 1 => "q".to_string(),
                1 => format!("{c}q"),
                _ if *c == 1 => format!("q^{i}"),
                _ => format!("{c}q^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Poincaré polynomial of the Weyl group: ∏ [d_i]_q over fundamental degrees.
pub fn weyl_poincare(d: &DynkinDiagram) -> PoincarePolynomial {
    d.components()
        .iter()
        .flat_map(|c| c.degrees())
        .fold(PoincarePolynomial::one(), |acc, deg| acc.mul(&PoincarePolynomial::q_integer(deg)))
}

/// Betti numbers of the split flag variety of type Θ: W / W_Levi.
pub fn flag_poincare(d: &DynkinDiagram, theta: &VertexSet) -> Result<PoincarePolynomial> {
    let levi = levi_type(d, theta)?;
    weyl_poincare(d).div_exact(&weyl_poincare(&levi.diagram))
}
