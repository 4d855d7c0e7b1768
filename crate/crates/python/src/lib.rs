//! Python bindings: `import fusionring`.
//!
//! Structured results come back as plain dicts and lists, decoded from the
//! same JSON the command line prints.

use std::path::PathBuf;

use fusionring_core::automorph::automorphisms;
use fusionring_core::catalog::{
    direct_product, free_product, load_ring, parse_ring, resolve, ring_to_json, CATALOG_NAMES,
};
use fusionring_core::central::{center_subobject, chain_group, enumerate_central_subobjects, is_central_subobject};
use fusionring_core::group::{identify_group, Stability};
use fusionring_core::ring::validate_ring;
use fusionring_core::subgroups::{grouplikes, is_central_subgroup, is_normal, load_restriction, RestrictionData};
use fusionring_core::{search_budget, FusionError, FusionRing, Mult, Subobject};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(fusionring, FusionRingError, PyValueError);

fn err(e: FusionError) -> PyErr {
    FusionRingError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| err(e.into()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn int<'py>(py: Python<'py>, n: &Mult) -> PyResult<Bound<'py, PyAny>> {
    py.import("builtins")?.getattr("int")?.call1((n.to_string(),))
}

/// A fusion ring, finite or generated by a rule.
#[pyclass(name = "Ring", module = "fusionring", frozen)]
struct PyRing {
    inner: FusionRing,
}

#[pymethods]
impl PyRing {
    /// A catalog ring such as `su2`, `au:3`, `rep-s3` or `free:su2+cyclic:2`.
    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        resolve(name).map(|inner| PyRing { inner }).map_err(err)
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        load_ring(path).map(|inner| PyRing { inner }).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (text, name = "ring"))]
    fn from_json(text: &str, name: &str) -> PyResult<Self> {
        parse_ring(text, name).map(|inner| PyRing { inner }).map_err(err)
    }

    #[pyo3(signature = (depth = 6))]
    fn to_json(&self, depth: usize) -> PyResult<String> {
        ring_to_json(&self.inner, depth).map_err(err)
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn is_explicit(&self) -> bool {
        self.inner.is_explicit()
    }

    fn unit(&self) -> String {
        self.inner.unit()
    }

    fn generators(&self) -> Vec<String> {
        self.inner.generators()
    }

    /// `(label, dim, dual)` for every explored basis element.
    #[pyo3(signature = (depth = 6))]
    fn basis(&self, depth: usize) -> PyResult<Vec<(String, u64, String)>> {
        let t = self.inner.truncate(depth).map_err(err)?;
        Ok((0..t.explored()).map(|i| (t.label(i).to_string(), t.dim(i), t.label(t.dual(i)).to_string())).collect())
    }

    fn dim(&self, label: &str) -> PyResult<u64> {
        self.inner.dim(label).map_err(err)
    }

    fn dual(&self, label: &str) -> PyResult<String> {
        self.inner.dual(label).map_err(err)
    }

    /// Decomposition of the product of the given labels, as `(label, n)`.
    #[pyo3(signature = (*labels))]
    fn product<'py>(&self, py: Python<'py>, labels: Vec<String>) -> PyResult<Vec<(String, Bound<'py, PyAny>)>> {
        let d = self.inner.product_word(&labels).map_err(err)?;
        d.iter().map(|(l, m)| Ok((l.clone(), int(py, m)?))).collect()
    }

    #[pyo3(signature = (depth = 6))]
    fn validate<'py>(&self, py: Python<'py>, depth: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &validate_ring(&self.inner, depth).map_err(err)?)
    }

    /// The chain group descriptor, e.g. `{"order": 2, "abelian": True, ...}`.
    #[pyo3(signature = (depth = 6))]
    fn chain_group<'py>(&self, py: Python<'py>, depth: usize) -> PyResult<Bound<'py, PyAny>> {
        let cg = chain_group(&self.inner, depth, search_budget()).map_err(err)?;
        to_py(py, &cg.descriptor)
    }

    /// Chain classes of the explored basis.
    #[pyo3(signature = (depth = 6))]
    fn chain_classes(&self, depth: usize) -> PyResult<Vec<Vec<String>>> {
        Ok(chain_group(&self.inner, depth, search_budget()).map_err(err)?.classes)
    }

    /// Explored labels of the center subobject.
    #[pyo3(signature = (depth = 6))]
    fn center(&self, depth: usize) -> PyResult<Vec<String>> {
        let t = self.inner.truncate(depth).map_err(err)?;
        let s = center_subobject(&t, search_budget()).map_err(err)?;
        Ok(s.explored_members(&t).map(|i| t.label(i).to_string()).collect())
    }

    fn central_subobjects(&self) -> PyResult<Vec<Vec<String>>> {
        let t = self.inner.truncate(1).map_err(err)?;
        let all = enumerate_central_subobjects(&t, search_budget()).map_err(err)?;
        Ok(all.iter().map(|s| s.labels(&t)).collect())
    }

    #[pyo3(signature = (labels, depth = 6))]
    fn is_central_subobject(&self, labels: Vec<String>, depth: usize) -> PyResult<bool> {
        let t = self.inner.truncate(depth).map_err(err)?;
        let sigma = Subobject::from_labels(&t, &labels).map_err(err)?;
        sigma.check(&t).map_err(err)?;
        Ok(is_central_subobject(&t, &sigma).map_err(err)?.is_central())
    }

    /// Grouplike labels and the descriptor of their group, if closed.
    #[pyo3(signature = (depth = 6))]
    fn grouplikes<'py>(&self, py: Python<'py>, depth: usize) -> PyResult<(Vec<String>, Bound<'py, PyAny>)> {
        let g = grouplikes(&self.inner, depth).map_err(err)?;
        let descriptor = match &g.table {
            Some(t) => {
                let mut d = identify_group(t).map_err(err)?;
                d.flag = g.checked_to_depth.map_or(Stability::Exact, Stability::CheckedToDepth);
                Some(d)
            }
            None => None,
        };
        Ok((g.elements, to_py(py, &descriptor)?))
    }

    /// Each automorphism as a list of `(label, image)` pairs.
    #[pyo3(signature = (depth = 6))]
    fn automorphisms(&self, depth: usize) -> PyResult<Vec<Vec<(String, String)>>> {
        let a = automorphisms(&self.inner, depth, search_budget()).map_err(err)?;
        Ok(a.automorphisms.iter().map(|x| x.mapping()).collect())
    }

    fn __repr__(&self) -> String {
        format!("Ring({:?})", self.inner.name())
    }
}

/// Restriction data of a quantum subgroup.
#[pyclass(name = "Restriction", module = "fusionring", frozen)]
struct PyRestriction {
    inner: RestrictionData,
}

#[pymethods]
impl PyRestriction {
    #[staticmethod]
    #[pyo3(signature = (path, ring = None))]
    fn load(path: PathBuf, ring: Option<PyRef<'_, PyRing>>) -> PyResult<Self> {
        let source = ring.map(|r| r.inner.clone());
        load_restriction(path, source).map(|inner| PyRestriction { inner }).map_err(err)
    }

    #[pyo3(signature = (depth = 6))]
    fn is_normal<'py>(&self, py: Python<'py>, depth: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &is_normal(&self.inner, depth).map_err(err)?)
    }

    #[pyo3(signature = (depth = 6))]
    fn is_central<'py>(&self, py: Python<'py>, depth: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &is_central_subgroup(&self.inner, depth).map_err(err)?)
    }
}

#[pyfunction(name = "free_product")]
fn py_free_product(a: PyRef<'_, PyRing>, b: PyRef<'_, PyRing>) -> PyRing {
    PyRing { inner: free_product(&a.inner, &b.inner) }
}

#[pyfunction(name = "direct_product")]
fn py_direct_product(a: PyRef<'_, PyRing>, b: PyRef<'_, PyRing>) -> PyResult<PyRing> {
    direct_product(&a.inner, &b.inner).map(|inner| PyRing { inner }).map_err(err)
}

#[pyfunction]
fn catalog_names() -> Vec<(&'static str, &'static str)> {
    CATALOG_NAMES.to_vec()
}

#[pymodule]
fn fusionring(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRing>()?;
    m.add_class::<PyRestriction>()?;
    m.add_function(wrap_pyfunction!(py_free_product, m)?)?;
    m.add_function(wrap_pyfunction!(py_direct_product, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add("FusionRingError", m.py().get_type::<FusionRingError>())?;
    Ok(())
}
