//! JSON encoding of descriptors, indices, tables and registries. Vertices
//! are written as global 1-based integers.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::arith::{parse_rational, Prime, RationalPlace, SquareClass};
use crate::brauer::{CsaDescriptor, ExtensionSim, LocalData, PlaceKind};
use crate::diagram::{DynkinDiagram, StarAction, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::qform::{FormInvariants, QuadraticForm};
use crate::titsindex::{AbstractGroup, ExtensionSpec, GroupDescriptor, HigherIndexTable, RegistryEntry, TitsIndex, GROUND};

pub const SCHEMA: &str = "1";

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(format!("{what} must be an object")))
}

/// Integers or strings such as "-3/4".
fn rational_text(v: &Value) -> Result<String> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        _ => Err(bad(format!("expected an integer or a rational string, got {v}"))),
    }
}

pub fn vertex_to_json(d: &DynkinDiagram, v: &Vertex) -> Value {
    json!(d.global_index(v).expect("vertex of the diagram"))
}

pub fn vertex_from_json(d: &DynkinDiagram, v: &Value) -> Result<Vertex> {
    match v {
        Value::Number(_) => {
            let n = as_u64(v, "vertex")?;
            u32::try_from(n)
                .ok()
                .and_then(|n| d.vertex_at(n))
                .ok_or_else(|| Error::InvalidVertexSet(format!("no vertex {n} in {d}")))
        }
        Value::String(s) => d.parse_vertex(s),
        _ => Err(bad("vertex must be an integer or a string")),
    }
}

pub fn vertex_set_to_json(d: &DynkinDiagram, s: &VertexSet) -> Value {
    Value::Array(s.iter().map(|v| vertex_to_json(d, v)).collect())
}

pub fn vertex_set_from_json(d: &DynkinDiagram, v: &Value) -> Result<VertexSet> {
    as_array(v, "vertex set")?.iter().map(|x| vertex_from_json(d, x)).collect()
}

/// Nothing for the trivial action, a list of cycles for one generator,
/// `{"generators": [...]}` otherwise.
pub fn action_to_json(d: &DynkinDiagram, a: &StarAction) -> Option<Value> {
    let gens: Vec<Value> = a
        .cycles()
        .iter()
        .map(|cycles| Value::Array(cycles.iter().map(|c| Value::Array(c.iter().map(|v| vertex_to_json(d, v)).collect())).collect()))
        .collect();
    match gens.len() {
        0 => None,
        1 => gens.into_iter().next(),
        _ => Some(json!({ "generators": gens })),
    }
}

pub fn action_from_json(d: &DynkinDiagram, v: Option<&Value>) -> Result<StarAction> {
    let gens: Vec<&Value> = match v {
        None | Some(Value::Null) => return Ok(StarAction::trivial()),
        Some(Value::Object(o)) => {
            as_array(o.get("generators").ok_or_else(|| bad("action object needs `generators`"))?, "generators")?
                .iter()
                .collect()
        }
        Some(other) => vec![other],
    };
    let mut cycles = Vec::new();
    for g in gens {
        let gen = as_array(g, "generator")?
            .iter()
            .map(|c| as_array(c, "cycle")?.iter().map(|x| vertex_from_json(d, x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        cycles.push(gen);
    }
    StarAction::from_cycles(d, &cycles)
}

pub fn index_to_json(idx: &TitsIndex) -> Value {
    let d = idx.diagram();
    let mut out = json!({
        "diagram": d.to_string(),
        "distinguished": idx.distinguished().iter().map(|o| vertex_set_to_json(d, o)).collect::<Vec<_>>(),
    });
    if let Some(a) = action_to_json(d, idx.action()) {
        out["action"] = a;
    }
    out
}

pub fn index_from_json(v: &Value) -> Result<TitsIndex> {
    let d: DynkinDiagram = as_str(field(v, "diagram")?, "diagram")?.parse()?;
    let action = action_from_json(&d, v.get("action"))?;
    let distinguished = as_array(field(v, "distinguished")?, "distinguished")?
        .iter()
        .map(|o| vertex_set_from_json(&d, o))
        .collect::<Result<Vec<_>>>()?;
    TitsIndex::new(d, action, distinguished)
}

pub fn table_to_json(t: &HigherIndexTable, p: Option<Prime>) -> Value {
    let entries: Map<String, Value> = t.entries().iter().map(|(l, i)| (l.clone(), index_to_json(i))).collect();
    let mut out = json!({ "entries": entries });
    if let Some(p) = p {
        out["prime"] = json!(p.get());
    }
    if !t.refinements().is_empty() {
        out["refinements"] = json!(t.refinements());
    }
    out
}

pub fn table_from_json(v: &Value) -> Result<(Option<Prime>, HigherIndexTable)> {
    let p = v.get("prime").map(|x| Prime::new(as_u64(x, "prime")?)).transpose()?;
    let entries = as_object(field(v, "entries")?, "entries")?
        .iter()
        .map(|(l, i)| Ok((l.clone(), index_from_json(i)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let refinements = match v.get("refinements") {
        None => Vec::new(),
        Some(r) => serde_json::from_value(r.clone()).map_err(|e| bad(format!("refinements: {e}")))?,
    };
    Ok((p, HigherIndexTable::new(entries, refinements)?))
}

fn algebra_to_json(a: &CsaDescriptor) -> Value {
    let places: Map<String, Value> = a
        .places()
        .iter()
        .map(|(l, d)| {
            let v = match d.kind {
                PlaceKind::Finite => json!(d.inv.to_string()),
                kind => json!({ "kind": kind.as_str(), "inv": d.inv.to_string() }),
            };
            (l.clone(), v)
        })
        .collect();
    json!({ "kind": "sl", "degree": a.degree(), "places": places })
}

fn algebra_from_json(v: &Value) -> Result<CsaDescriptor> {
    let degree = as_u64(field(v, "degree")?, "degree")?;
    let mut places = BTreeMap::new();
    if let Some(p) = v.get("places") {
        for (label, data) in as_object(p, "places")? {
            let local = match data {
                Value::Object(o) => LocalData {
                    kind: match o.get("kind") {
                        Some(k) => as_str(k, "place kind")?.parse()?,
                        None => PlaceKind::Finite,
                    },
                    inv: rational_text(o.get("inv").ok_or_else(|| bad(format!("place {label} lacks `inv`")))?)?.parse()?,
                },
                other => LocalData { kind: PlaceKind::Finite, inv: rational_text(other)?.parse()? },
            };
            places.insert(label.clone(), local);
        }
    }
    CsaDescriptor::new(degree, places)
}

fn invariants_to_json(q: &FormInvariants) -> Value {
    let hasse: Map<String, Value> = q.finite_hasse().iter().map(|(p, e)| (p.to_string(), json!(e))).collect();
    let (pos, neg) = q.signature();
    json!({
        "kind": "so",
        "invariants": { "dim": q.dim(), "det": q.determinant().to_string(), "hasse": hasse, "signature": [pos, neg] },
    })
}

fn form_from_json(v: &Value) -> Result<FormInvariants> {
    if let Some(diag) = v.get("diag") {
        let coeffs = as_array(diag, "diag")?
            .iter()
            .map(|c| parse_rational(&rational_text(c)?))
            .collect::<Result<Vec<_>>>()?;
        return Ok(QuadraticForm::new(coeffs)?.invariants());
    }
    if let Some(gram) = v.get("gram") {
        let rows = as_array(gram, "gram")?
            .iter()
            .map(|r| as_array(r, "gram row")?.iter().map(|c| parse_rational(&rational_text(c)?)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        return Ok(QuadraticForm::from_gram(rows)?.invariants());
    }
    let inv = field(v, "invariants")?;
    let dim = as_u64(field(inv, "dim")?, "dim")? as usize;
    let det: SquareClass = rational_text(field(inv, "det")?)?.parse()?;
    let mut hasse = BTreeMap::new();
    if let Some(h) = inv.get("hasse") {
        for (p, e) in as_object(h, "hasse")? {
            let p = Prime::new(p.parse().map_err(|_| bad(format!("bad prime `{p}`")))?)?;
            let e = e.as_i64().filter(|e| *e == 1 || *e == -1).ok_or_else(|| bad("Hasse invariants must be 1 or -1"))?;
            hasse.insert(p, e as i8);
        }
    }
    let sig = as_array(field(inv, "signature")?, "signature")?;
    if sig.len() != 2 {
        return Err(bad("signature must be [positive, negative]"));
    }
    let sig = (as_u64(&sig[0], "signature")? as usize, as_u64(&sig[1], "signature")? as usize);
    FormInvariants::new(dim, det, hasse, sig)
}

fn abstract_to_json(g: &AbstractGroup) -> Value {
    let mut out = json!({ "kind": "abstract", "diagram": g.diagram.to_string() });
    if let Some(a) = action_to_json(&g.diagram, &g.action) {
        out["action"] = a;
    }
    if let Some(c) = &g.classical {
        out["classical"] = table_to_json(c, None);
    }
    let by_prime: Map<String, Value> = g.by_prime.iter().map(|(p, t)| (p.to_string(), table_to_json(t, None))).collect();
    out["by_prime"] = Value::Object(by_prime);
    out
}

fn abstract_from_json(v: &Value) -> Result<AbstractGroup> {
    let diagram: DynkinDiagram = as_str(field(v, "diagram")?, "diagram")?.parse()?;
    let action = action_from_json(&diagram, v.get("action"))?;
    let classical = v.get("classical").map(|t| table_from_json(t).map(|x| x.1)).transpose()?;
    let mut by_prime = BTreeMap::new();
    if let Some(b) = v.get("by_prime") {
        for (p, t) in as_object(b, "by_prime")? {
            let p = Prime::new(p.parse().map_err(|_| bad(format!("bad prime `{p}`")))?)?;
            by_prime.insert(p, table_from_json(t)?.1);
        }
    }
    AbstractGroup::new(diagram, action, classical, by_prime)
}

pub fn descriptor_to_json(g: &GroupDescriptor) -> Value {
    match g {
        GroupDescriptor::SpecialLinear(a) => algebra_to_json(a),
        GroupDescriptor::SpecialOrthogonal(q) => invariants_to_json(q),
        GroupDescriptor::Abstract(ag) => abstract_to_json(ag),
    }
}

/// Reads `{"kind": "sl" | "so" | "abstract", ...}`.
pub fn descriptor_from_json(v: &Value) -> Result<GroupDescriptor> {
    match as_str(field(v, "kind")?, "kind")? {
        "sl" => Ok(GroupDescriptor::SpecialLinear(algebra_from_json(v)?)),
        "so" => Ok(GroupDescriptor::SpecialOrthogonal(form_from_json(v)?)),
        "abstract" => Ok(GroupDescriptor::Abstract(abstract_from_json(v)?)),
        k => Err(bad(format!("unknown descriptor kind `{k}`"))),
    }
}

/// Builds an abstract descriptor from an abstract descriptor, or from the
/// output of the `index`, `p-index` or `higher` commands. Data that
/// carries no prime is taken as data for `p`.
pub fn abstract_from_output(v: &Value, p: Prime) -> Result<GroupDescriptor> {
    if v.get("kind").and_then(Value::as_str) == Some("abstract") {
        return descriptor_from_json(v);
    }
    let output_prime = v.get("prime").map(|x| Prime::new(as_u64(x, "prime")?)).transpose()?;
    let (table, classical) = if let Some(t) = v.get("table") {
        (table_from_json(t)?.1, false)
    } else if let Some(i) = v.get("index") {
        (HigherIndexTable::single(index_from_json(i)?), output_prime.is_none())
    } else {
        return Err(bad("expected an abstract descriptor or an `index`/`table` field"));
    };
    let prime = output_prime.unwrap_or(p);
    let ground = table.ground().clone();
    let classical = classical.then(|| HigherIndexTable::single(ground.clone()));
    let by_prime = BTreeMap::from([(prime, table)]);
    Ok(GroupDescriptor::Abstract(AbstractGroup::new(
        ground.diagram().clone(),
        ground.action().clone(),
        classical,
        by_prime,
    )?))
}

pub fn sim_to_json(e: &ExtensionSim) -> Value {
    json!(e.degrees())
}

pub fn sim_from_json(v: &Value) -> Result<ExtensionSim> {
    let mut degrees = BTreeMap::new();
    for (label, d) in as_object(v, "sim")? {
        let list = match d {
            Value::Array(xs) => xs.iter().map(|x| as_u64(x, "local degree")).collect::<Result<Vec<_>>>()?,
            x => vec![as_u64(x, "local degree")?],
        };
        degrees.insert(label.clone(), list);
    }
    ExtensionSim::new(degrees)
}

/// `[{"label": "e1", "sim": {...}} | {"label": "Q2", "completion": "2"} | {"label": "x"}]`;
/// the label `ground` always denotes the base field.
pub fn registry_from_json(v: &Value) -> Result<Vec<RegistryEntry>> {
    as_array(v, "registry")?
        .iter()
        .map(|e| {
            let label = as_str(field(e, "label")?, "label")?.to_string();
            let spec = if let Some(s) = e.get("sim") {
                ExtensionSpec::Algebra(sim_from_json(s)?)
            } else if let Some(c) = e.get("completion") {
                let place: RationalPlace = match c {
                    Value::Number(_) => as_u64(c, "completion")?.to_string().parse()?,
                    _ => as_str(c, "completion")?.parse()?,
                };
                ExtensionSpec::Completion(place)
            } else if label == GROUND {
                ExtensionSpec::Ground
            } else {
                ExtensionSpec::Label
            };
            Ok(RegistryEntry { label, spec })
        })
        .collect()
}

pub fn registry_to_json(r: &[RegistryEntry]) -> Value {
    Value::Array(
        r.iter()
            .map(|e| match &e.spec {
                ExtensionSpec::Ground | ExtensionSpec::Label => json!({ "label": e.label }),
                ExtensionSpec::Algebra(s) => json!({ "label": e.label, "sim": sim_to_json(s) }),
                ExtensionSpec::Completion(v) => json!({ "label": e.label, "completion": v.to_string() }),
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::titsindex::{higher_p_index, tits_index};

    #[test]
    fn descriptors_round_trip() {
        let inputs = [
            json!({"kind":"sl","degree":4,"places":{"v3":"1/4","v5":"3/4"}}),
            json!({"kind":"sl","degree":2,"places":{"inf":{"kind":"real","inv":"1/2"},"v2":"1/2"}}),
            json!({"kind":"so","diag":[1,-1,"1/2",7]}),
            json!({"kind":"so","invariants":{"dim":3,"det":"1","hasse":{"2":-1},"signature":[1,2]}}),
        ];
        for v in inputs {
            let g = descriptor_from_json(&v).unwrap();
            assert_eq!(descriptor_from_json(&descriptor_to_json(&g)).unwrap(), g, "{v}");
        }
        assert!(descriptor_from_json(&json!({"kind":"sl","degree":2,"places":{"v2":"1/2"}})).is_err());
    }

    #[test]
    fn index_and_table_round_trip() {
        let g = descriptor_from_json(&json!({"kind":"so","diag":[1,-1,1,-1,1,1]})).unwrap();
        let idx = tits_index(&g).unwrap();
        let v = index_to_json(&idx);
        assert_eq!(v["action"], json!([[2, 3]]));
        assert_eq!(index_from_json(&v).unwrap(), idx);
        let reg = registry_from_json(&json!([{"label":"R","completion":"inf"},{"label":"Q3","completion":3}])).unwrap();
        let t = higher_p_index(&g, Prime::TWO, &reg).unwrap();
        let tv = table_to_json(&t, Some(Prime::TWO));
        assert_eq!(table_from_json(&tv).unwrap(), (Some(Prime::TWO), t.clone()));
        let ab = abstract_from_output(&json!({"schema":"1","prime":2,"table":tv}), Prime::TWO).unwrap();
        assert_eq!(descriptor_from_json(&descriptor_to_json(&ab)).unwrap(), ab);
        assert_eq!(registry_from_json(&registry_to_json(&reg)).unwrap(), reg);
    }
}
