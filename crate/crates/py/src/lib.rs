//! Python bindings. Structured results (indices, tables, verdicts) come
//! back as plain dicts in the same JSON shapes the CLI prints.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde_json::Value;
use titsmotive_core::arith::{parse_rational, Prime, RationalPlace};
use titsmotive_core::diagram::{self as dg, DynkinDiagram, VertexSet};
use titsmotive_core::equiv;
use titsmotive_core::error::Error;
use titsmotive_core::qform::{self, QuadraticForm as CoreForm};
use titsmotive_core::titsindex::{self as ti, GroupDescriptor};
use titsmotive_core::wire;

create_exception!(titsmotive, TitsMotiveError, PyValueError);

fn err(e: Error) -> PyErr {
    TitsMotiveError::new_err(format!("{}: {e}", e.kind()))
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = match obj.extract::<String>() {
        Ok(s) => s,
        Err(_) => obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?,
    };
    serde_json::from_str(&text).map_err(|e| TitsMotiveError::new_err(format!("parse: {e}")))
}

fn prime(p: u64) -> PyResult<Prime> {
    Prime::new(p).map_err(err)
}

fn place(s: &str) -> PyResult<RationalPlace> {
    s.parse().map_err(err)
}

fn rational_text(obj: &Bound<'_, PyAny>) -> PyResult<String> {
    if let Ok(n) = obj.extract::<i64>() {
        Ok(n.to_string())
    } else {
        obj.extract::<String>()
    }
}

#[pyclass(frozen, module = "titsmotive")]
struct Diagram {
    inner: DynkinDiagram,
}

impl Diagram {
    fn theta(&self, theta: &str) -> PyResult<VertexSet> {
        let set = self.inner.parse_vertex_set(theta).map_err(err)?;
        self.inner.check_subset(&set).map_err(err)?;
        Ok(set)
    }
}

#[pymethods]
impl Diagram {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(Diagram { inner: name.parse().map_err(err)? })
    }

    #[getter]
    fn rank(&self) -> u32 {
        self.inner.rank()
    }

    fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.inner.cartan_matrix()
    }

    fn weyl_poincare(&self) -> Vec<u64> {
        dg::weyl_poincare(&self.inner).coefficients().to_vec()
    }

    /// Coefficients of the Poincaré polynomial of the flag variety of type `theta`.
    fn flag_poincare(&self, theta: &str) -> PyResult<Vec<u64>> {
        Ok(dg::flag_poincare(&self.inner, &self.theta(theta)?).map_err(err)?.coefficients().to_vec())
    }

    fn levi_type(&self, theta: &str) -> PyResult<String> {
        Ok(dg::levi_type(&self.inner, &self.theta(theta)?).map_err(err)?.diagram.to_string())
    }

    #[pyo3(signature = (circled = ""))]
    fn render(&self, circled: &str) -> PyResult<String> {
        Ok(self.inner.render_ascii(&self.theta(circled)?))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Diagram('{}')", self.inner)
    }
}

#[pyclass(frozen, module = "titsmotive")]
struct QuadraticForm {
    inner: CoreForm,
}

#[pymethods]
impl QuadraticForm {
    /// Diagonal form from integers or rational strings such as "3/4".
    #[new]
    fn new(coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let texts = coeffs.iter().map(rational_text).collect::<PyResult<Vec<_>>>()?;
        Ok(QuadraticForm { inner: CoreForm::parse(&texts).map_err(err)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn signature(&self) -> (usize, usize) {
        self.inner.signature()
    }

    fn determinant(&self) -> String {
        self.inner.determinant().to_string()
    }

    fn hasse_invariant(&self, place: &str) -> PyResult<i8> {
        Ok(self.inner.hasse_invariant(self::place(place)?))
    }

    /// Isotropy over Q, or over the completion at `place` ("inf", "2", ...).
    #[pyo3(signature = (place = None))]
    fn is_isotropic(&self, place: Option<&str>) -> PyResult<bool> {
        Ok(self.inner.is_isotropic(place.map(self::place).transpose()?))
    }

    fn witt_index(&self) -> usize {
        self.inner.witt_index()
    }

    fn __add__(&self, other: &QuadraticForm) -> QuadraticForm {
        QuadraticForm { inner: self.inner.orthogonal_sum(&other.inner) }
    }

    fn __neg__(&self) -> QuadraticForm {
        QuadraticForm { inner: self.inner.negated() }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// A group descriptor: SL(A), SO(q), or abstract index data.
#[pyclass(frozen, module = "titsmotive")]
struct Group {
    inner: GroupDescriptor,
}

#[pymethods]
impl Group {
    /// SL of the algebra with the given degree and local invariants,
    /// e.g. `Group.sl(4, {"v2": "1/4", "v3": "3/4"})`.
    #[staticmethod]
    fn sl(degree: u64, places: Bound<'_, PyAny>) -> PyResult<Self> {
        let places = from_py(&places)?;
        let v = serde_json::json!({ "kind": "sl", "degree": degree, "places": places });
        Ok(Group { inner: wire::descriptor_from_json(&v).map_err(err)? })
    }

    #[staticmethod]
    fn so(form: &QuadraticForm) -> Self {
        Group { inner: GroupDescriptor::special_orthogonal(&form.inner) }
    }

    /// From a descriptor in the JSON wire format (a str or a dict).
    #[staticmethod]
    fn from_json(data: Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Group { inner: wire::descriptor_from_json(&from_py(&data)?).map_err(err)? })
    }

    /// From the dict printed by `index`, `p-index` or `higher`, read as data for `p`.
    #[staticmethod]
    fn from_output(data: Bound<'_, PyAny>, p: u64) -> PyResult<Self> {
        Ok(Group { inner: wire::abstract_from_output(&from_py(&data)?, prime(p)?).map_err(err)? })
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &wire::descriptor_to_json(&self.inner))
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind_name()
    }

    #[getter]
    fn diagram(&self) -> Diagram {
        Diagram { inner: self.inner.diagram() }
    }

    fn tits_index<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &wire::index_to_json(&ti::tits_index(&self.inner).map_err(err)?))
    }

    fn p_index<'py>(&self, py: Python<'py>, p: u64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &wire::index_to_json(&ti::p_index(&self.inner, prime(p)?).map_err(err)?))
    }

    /// Higher p-index over a registry given as a list of entries.
    fn higher_p_index<'py>(&self, py: Python<'py>, p: u64, registry: Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let p = prime(p)?;
        let registry = wire::registry_from_json(&from_py(&registry)?).map_err(err)?;
        let table = ti::higher_p_index(&self.inner, p, &registry).map_err(err)?;
        to_py(py, &wire::table_to_json(&table, Some(p)))
    }

    fn is_p_anisotropic(&self, p: u64) -> PyResult<bool> {
        ti::is_p_anisotropic(&self.inner, prime(p)?).map_err(err)
    }

    fn levi(&self, theta: &str) -> PyResult<Vec<Group>> {
        let d = self.inner.diagram();
        let set = d.parse_vertex_set(theta).map_err(err)?;
        let factors = equiv::levi_descriptor(&self.inner, &set).map_err(err)?;
        Ok(factors.into_iter().map(|inner| Group { inner }).collect())
    }

    fn __repr__(&self) -> String {
        format!("Group({})", wire::descriptor_to_json(&self.inner))
    }
}

#[pyfunction]
fn hilbert_symbol(a: Bound<'_, PyAny>, b: Bound<'_, PyAny>, place: &str) -> PyResult<i8> {
    let a = parse_rational(&rational_text(&a)?).map_err(err)?;
    let b = parse_rational(&rational_text(&b)?).map_err(err)?;
    qform::hilbert_symbol(&a, &b, self::place(place)?).map_err(err)
}

/// Verdict on equivalence modulo p, as a dict with a `verdict` key.
#[pyfunction]
fn equivalent_mod_p<'py>(py: Python<'py>, g: &Group, h: &Group, p: u64) -> PyResult<Bound<'py, PyAny>> {
    let v = equiv::equivalent_mod_p(&g.inner, &h.inner, prime(p)?).map_err(err)?;
    to_py(py, &serde_json::to_value(v).expect("verdicts serialize"))
}

#[pyfunction]
fn motivically_equivalent<'py>(py: Python<'py>, g: &Group, h: &Group) -> PyResult<Bound<'py, PyAny>> {
    let v = equiv::motivically_equivalent(&g.inner, &h.inner).map_err(err)?;
    to_py(py, &serde_json::to_value(v).expect("verdicts serialize"))
}

#[pymodule]
fn titsmotive(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TitsMotiveError", m.py().get_type::<TitsMotiveError>())?;
    m.add("SCHEMA", wire::SCHEMA)?;
    m.add_class::<Diagram>()?;
    m.add_class::<QuadraticForm>()?;
    m.add_class::<Group>()?;
    m.add_function(wrap_pyfunction!(hilbert_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(equivalent_mod_p, m)?)?;
    m.add_function(wrap_pyfunction!(motivically_equivalent, m)?)?;
    Ok(())
}
