//! Python bindings. Structured results come back as plain dicts and lists.

use std::sync::Arc;

use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use sl2rep::asymptotics::{self, Family, InducingDatum, MPSubgroup, Parity};
use sl2rep::localfield::{self, CharacterSpec};
use sl2rep::meataxe;
use sl2rep::packets::{self, Gl2ReplDescriptor};
use sl2rep::reps::{self, IrrepLabel, MatRep};
use sl2rep::{whittakerf2, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_) | Error::InvalidField(_) | Error::NotRegular | Error::Unsupported(_) => {
            PyValueError::new_err(e.to_string())
        }
        Error::ResourceLimit(_) => PyMemoryError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for sl2rep::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn family(s: &str) -> PyResult<Family> {
    s.parse().py()
}

/// GL2(F_q) and SL2(F_q) with coefficients of characteristic `char` (0 for complex).
#[pyclass(frozen, name = "Setting")]
struct PySetting {
    inner: Arc<reps::Setting>,
}

#[pymethods]
impl PySetting {
    #[new]
    #[pyo3(signature = (q, char = 0))]
    fn new(q: u64, char: u64) -> PyResult<Self> {
        Ok(PySetting { inner: reps::Setting::new(q, char).py()? })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q
    }

    #[getter]
    fn char(&self) -> u64 {
        self.inner.char_r
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().iter().map(|l| l.to_string()).collect()
    }

    fn construct(&self, label: &str) -> PyResult<PyRep> {
        let l = self.label(label)?;
        Ok(PyRep { inner: reps::construct(&self.inner, &l).py()? })
    }

    /// Closed-form length of the restriction to SL2.
    fn restriction_length(&self, label: &str) -> PyResult<usize> {
        Ok(self.label(label)?.restriction_length(&self.inner))
    }

    #[pyo3(signature = (label, seed = 0))]
    fn restriction_length_measured(&self, label: &str, seed: u64) -> PyResult<usize> {
        let l = self.label(label)?;
        meataxe::restriction_length_measured(&self.inner, &l, seed).py()
    }

    /// Composition factors of the reduction mod `ell` of a characteristic-0 label.
    fn reduction(&self, label: &str, ell: u64) -> PyResult<Vec<(String, usize)>> {
        let modular = reps::Coeffs::new(self.inner.q, ell).py()?;
        let l = self.label(label)?;
        Ok(l.reduction(&modular).py()?.into_iter().map(|(l, m)| (l.to_string(), m)).collect())
    }

    fn __repr__(&self) -> String {
        format!("Setting(q={}, char={})", self.inner.q, self.inner.char_r)
    }
}

impl PySetting {
    fn label(&self, s: &str) -> PyResult<IrrepLabel> {
        let l: IrrepLabel = s.parse().py()?;
        l.normalize(&self.inner).py()
    }
}

/// A matrix representation over a finite emulation field.
#[pyclass(frozen, name = "Rep")]
struct PyRep {
    inner: MatRep,
}

#[pymethods]
impl PyRep {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim
    }

    #[getter]
    fn field_order(&self) -> u64 {
        self.inner.field.order()
    }

    #[getter]
    fn label(&self) -> Option<String> {
        self.inner.label.map(|l| l.to_string())
    }

    #[pyo3(signature = (seed = 0))]
    fn is_irreducible(&self, seed: u64) -> PyResult<bool> {
        meataxe::is_irreducible(&self.inner, seed).py()
    }

    /// `{"dims": [...], "multiplicities": [...], "length": n, "semisimple": bool}`
    #[pyo3(signature = (seed = 0))]
    fn decompose(&self, py: Python<'_>, seed: u64) -> PyResult<Py<PyAny>> {
        #[derive(Serialize)]
        struct Out {
            dims: Vec<usize>,
            multiplicities: Vec<usize>,
            length: usize,
            semisimple: bool,
        }
        let r = meataxe::decompose(&self.inner, seed).py()?;
        let out = Out {
            dims: r.constituents.iter().map(|(c, _)| c.dim).collect(),
            multiplicities: r.constituents.iter().map(|(_, m)| *m).collect(),
            length: r.length,
            semisimple: r.semisimple,
        };
        to_py(py, &out)
    }

    fn hom_dim(&self, other: &PyRep) -> PyResult<usize> {
        meataxe::hom_dim(&self.inner, &other.inner).py()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyfunction]
fn census_formula(family_name: &str, q: u64, j: u32) -> PyResult<u64> {
    Ok(asymptotics::census_formula(family(family_name)?, q, j))
}

#[pyfunction]
fn coset_census(family_name: &str, p: u64, j: u32) -> PyResult<u64> {
    asymptotics::coset_census(family(family_name)?, p, j).py()
}

/// Dimension of the fixed vectors of the compactly induced representation `(+|-)label`.
#[pyfunction]
#[pyo3(signature = (q, label, family_name, j, parity = "+"))]
fn invariant_dim(q: u64, label: &str, family_name: &str, j: u32, parity: &str) -> PyResult<u64> {
    let s = reps::Setting::char0(q).py()?;
    let parity = match parity {
        "+" => Parity::Plus,
        "-" => Parity::Minus,
        "" | "both" => Parity::Both,
        other => return Err(PyValueError::new_err(format!("parity must be '+', '-' or 'both', got {other:?}"))),
    };
    let l: IrrepLabel = label.parse().py()?;
    let datum = InducingDatum::new(&s, &l, parity).py()?;
    Ok(asymptotics::invariant_dim(&datum, &MPSubgroup::new(family(family_name)?, j)).py()?.total)
}

/// Germ identity over a depth-zero packet; `drop` removes one member as a control.
#[pyfunction]
#[pyo3(signature = (q, label, js, family_name = "I", drop = None, seed = 0))]
fn germ_check(
    py: Python<'_>,
    q: u64,
    label: &str,
    js: (u32, u32),
    family_name: &str,
    drop: Option<usize>,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let s = reps::Setting::char0(q).py()?;
    let l: IrrepLabel = label.parse().py()?;
    let mut members = InducingDatum::packet_members(&s, &l, seed).py()?;
    if let Some(i) = drop {
        if i >= members.len() {
            return Err(PyValueError::new_err(format!("packet has {} members", members.len())));
        }
        members.remove(i);
    }
    let g = asymptotics::germ_identity_check(&members, family(family_name)?, js.0..=js.1).py()?;
    to_py(py, &g)
}

/// Packet report for a descriptor given as a JSON string.
#[pyfunction]
fn packet_report(py: Python<'_>, descriptor: &str) -> PyResult<Py<PyAny>> {
    let d: Gl2ReplDescriptor = serde_json::from_str(descriptor).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &packets::packet_report(&d).py()?)
}

fn character(spec: &str) -> PyResult<localfield::LocalCharacter> {
    let s: CharacterSpec = serde_json::from_str(spec).map_err(|e| PyValueError::new_err(e.to_string()))?;
    s.build().py()
}

/// `|X_sigma|` for a regular character given as a JSON spec.
#[pyfunction]
fn x_sigma_size(spec: &str) -> PyResult<usize> {
    Ok(localfield::x_sigma(&character(spec)?).py()?.size)
}

#[pyfunction]
fn sc_mod_ell_length(spec: &str, ell: u64) -> PyResult<usize> {
    localfield::mod_ell_sc_length(&character(spec)?, ell).py()
}

#[pyfunction]
fn lattice_exponent(d: u32, r: u32) -> PyResult<u64> {
    whittakerf2::lattice_exponent(d, r).py()
}

/// Runs the command-line interface in-process; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    sl2rep::cli::run(std::iter::once("sl2rep".to_string()).chain(args))
}

#[pymodule]
fn sl2rep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySetting>()?;
    m.add_class::<PyRep>()?;
    m.add_function(wrap_pyfunction!(census_formula, m)?)?;
    m.add_function(wrap_pyfunction!(coset_census, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_dim, m)?)?;
    m.add_function(wrap_pyfunction!(germ_check, m)?)?;
    m.add_function(wrap_pyfunction!(packet_report, m)?)?;
    m.add_function(wrap_pyfunction!(x_sigma_size, m)?)?;
    m.add_function(wrap_pyfunction!(sc_mod_ell_length, m)?)?;
    m.add_function(wrap_pyfunction!(lattice_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
