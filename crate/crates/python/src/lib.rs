//! Python bindings. Matrices cross the boundary as lists of integer rows and
//! degree reports as JSON strings.

use mu_torsion::galois_model;
use mu_torsion::mumford;
use mu_torsion::{
    smith_normal_form, Error, MatrixMod, ResidueRing, SymplecticSpace, TorsionSubgroup, DEFAULT_CAP,
};
use num_rational::Ratio;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::ExpectationFailed(_) | Error::CapExceeded { .. } | Error::NotMaterialized => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

type Rows = Vec<Vec<u64>>;

fn rows_of(m: &MatrixMod) -> Vec<Vec<u64>> {
    m.to_rows()
}

/// The ring `Z/l^n`.
#[pyclass(name = "ResidueRing", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyResidueRing {
    inner: ResidueRing,
}

#[pymethods]
impl PyResidueRing {
    #[new]
    fn new(ell: u64, level: u32) -> PyResult<Self> {
        Ok(Self {
            inner: ResidueRing::new(ell, level).map_err(to_py)?,
        })
    }

    #[getter]
    fn ell(&self) -> u64 {
        self.inner.ell()
    }

    #[getter]
    fn level(&self) -> u32 {
        self.inner.level()
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.modulus()
    }

    fn reduce(&self, x: i64) -> u64 {
        self.inner.reduce(x)
    }

    fn valuation(&self, x: i64) -> u32 {
        self.inner.valuation(self.inner.reduce(x))
    }

    fn inverse(&self, x: i64) -> PyResult<u64> {
        self.inner
            .inv(self.inner.reduce(x))
            .ok_or_else(|| PyValueError::new_err(format!("{x} is not a unit")))
    }

    fn unit_count(&self) -> u64 {
        self.inner.unit_count()
    }

    fn __repr__(&self) -> String {
        format!("ResidueRing({}, {})", self.inner.ell(), self.inner.level())
    }
}

fn matrix(ring: &PyResidueRing, rows: Vec<Vec<i64>>) -> PyResult<MatrixMod> {
    MatrixMod::from_rows(ring.inner, &rows).map_err(to_py)
}

/// Determinant of a square matrix over the ring.
#[pyfunction]
fn det(ring: &PyResidueRing, rows: Vec<Vec<i64>>) -> PyResult<u64> {
    let m = matrix(ring, rows)?;
    if !m.is_square() {
        return Err(PyValueError::new_err("matrix is not square"));
    }
    Ok(m.det().value())
}

/// Inverse of a square matrix; raises ValueError when it is singular.
#[pyfunction]
fn inverse(ring: &PyResidueRing, rows: Vec<Vec<i64>>) -> PyResult<Vec<Vec<u64>>> {
    Ok(rows_of(&matrix(ring, rows)?.inverse().map_err(to_py)?))
}

/// Smith form `(U, D, V)` with `U A V = D`.
#[pyfunction]
fn smith(ring: &PyResidueRing, rows: Vec<Vec<i64>>) -> PyResult<(Rows, Rows, Rows)> {
    let s = smith_normal_form(&matrix(ring, rows)?);
    Ok((rows_of(&s.u), rows_of(&s.d), rows_of(&s.v)))
}

/// A subgroup of `(Z/l^n)^d` generated by integer rows.
#[pyclass(name = "TorsionSubgroup", frozen)]
struct PyTorsionSubgroup {
    inner: TorsionSubgroup,
}

#[pymethods]
impl PyTorsionSubgroup {
    #[new]
    fn new(ring: &PyResidueRing, dim: usize, rows: Vec<Vec<i64>>) -> PyResult<Self> {
        Ok(Self {
            inner: TorsionSubgroup::from_rows(ring.inner, dim, &rows).map_err(to_py)?,
        })
    }

    #[getter]
    fn orders(&self) -> Vec<u32> {
        self.inner.orders().to_vec()
    }

    #[getter]
    fn basis(&self) -> Vec<Vec<u64>> {
        self.inner.basis().to_vec()
    }

    #[getter]
    fn log_order(&self) -> u32 {
        self.inner.log_order()
    }

    fn order(&self) -> Option<u128> {
        self.inner.order()
    }

    fn contains(&self, v: Vec<i64>) -> bool {
        let ring = self.inner.ring();
        let v: Vec<u64> = v.into_iter().map(|x| ring.reduce(x)).collect();
        v.len() == self.inner.ambient_dim() && self.inner.contains(&v)
    }

    /// The `l^m`-torsion of the subgroup.
    fn slice(&self, m: u32) -> Self {
        Self {
            inner: self.inner.slice(m),
        }
    }
}

/// `(Z/l^n)^{2g}` with an alternating unimodular form.
#[pyclass(name = "SymplecticSpace", frozen)]
struct PySymplecticSpace {
    inner: SymplecticSpace,
}

#[pymethods]
impl PySymplecticSpace {
    /// `kind` is "standard" (dimension 2g) or "tensor" (dimension 2^g, g odd).
    #[new]
    #[pyo3(signature = (g, ring, kind = "standard"))]
    fn new(g: usize, ring: &PyResidueRing, kind: &str) -> PyResult<Self> {
        let inner = match kind {
            "standard" => SymplecticSpace::standard(g, ring.inner),
            "tensor" => SymplecticSpace::tensor(g as u32, ring.inner),
            other => return Err(PyValueError::new_err(format!("unknown form kind {other}"))),
        }
        .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn form(&self) -> Vec<Vec<u64>> {
        rows_of(self.inner.form())
    }

    /// Pairing exponent of two `l^n`-torsion points, in `Z/l^n`.
    fn weil_pairing(&self, p: Vec<i64>, q: Vec<i64>, n: u32) -> PyResult<u64> {
        let ring = self.inner.ring();
        let p: Vec<u64> = p.into_iter().map(|x| ring.reduce(x)).collect();
        let q: Vec<u64> = q.into_iter().map(|x| ring.reduce(x)).collect();
        Ok(self
            .inner
            .weil_pairing(&p, &q, n)
            .map_err(to_py)?
            .exponent()
            .value())
    }

    fn multiplier(&self, rows: Vec<Vec<i64>>) -> PyResult<u64> {
        let m = MatrixMod::from_rows(self.inner.ring(), &rows).map_err(to_py)?;
        Ok(self.inner.multiplier(&m).map_err(to_py)?.value())
    }

    fn m1(&self, h: &PyTorsionSubgroup) -> PyResult<u32> {
        self.inner.m1(&h.inner).map_err(to_py)
    }

    #[pyo3(signature = (h, cap = DEFAULT_CAP))]
    fn m1_exhaustive(&self, h: &PyTorsionSubgroup, cap: u64) -> PyResult<u32> {
        self.inner.m1_exhaustive(&h.inner, cap).map_err(to_py)
    }
}

fn ratio(c: (u64, u64)) -> PyResult<Ratio<u64>> {
    if c.1 == 0 {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(Ratio::new(c.0, c.1))
}

fn report_json(value: &mu_torsion::DegreeReport) -> String {
    serde_json::to_string(value).expect("serializable")
}

/// Degree report (JSON) for a subgroup generated by `generators` with form
/// of the given kind; `h_rows` spans the torsion subgroup.
#[pyfunction]
#[pyo3(signature = (ring, g, generators, h_rows, c = (2, 1), cap = DEFAULT_CAP))]
fn degree_report(
    ring: &PyResidueRing,
    g: usize,
    generators: Vec<Vec<Vec<i64>>>,
    h_rows: Vec<Vec<i64>>,
    c: (u64, u64),
    cap: u64,
) -> PyResult<String> {
    let space = SymplecticSpace::standard(g, ring.inner).map_err(to_py)?;
    let gens = generators
        .iter()
        .map(|rows| MatrixMod::from_rows(ring.inner, rows))
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_py)?;
    let group = galois_model::close(&space, gens, cap).map_err(to_py)?;
    let h = TorsionSubgroup::from_rows(ring.inner, space.dim(), &h_rows).map_err(to_py)?;
    Ok(report_json(
        &galois_model::degree_report(&group, &h, ratio(c)?).map_err(to_py)?,
    ))
}

/// Degree report (JSON) for a built-in scenario: "cm" or "selfproduct".
#[pyfunction]
#[pyo3(signature = (name, ell, level = 1, g = 2, c = (2, 1), cap = DEFAULT_CAP))]
fn scenario(
    name: &str,
    ell: u64,
    level: u32,
    g: usize,
    c: (u64, u64),
    cap: u64,
) -> PyResult<String> {
    let (group, h) = match name {
        "cm" => galois_model::scenario_cm(g, ell, level, cap),
        "selfproduct" => galois_model::scenario_selfproduct(ell, level, cap),
        other => return Err(PyValueError::new_err(format!("unknown scenario {other}"))),
    }
    .map_err(to_py)?;
    Ok(report_json(
        &galois_model::degree_report(&group, &h, ratio(c)?).map_err(to_py)?,
    ))
}

/// Image of `(a, b, c)` in `GL_8` acting on the tensor cube.
#[pyfunction]
fn rho(
    ring: &PyResidueRing,
    a: Vec<Vec<i64>>,
    b: Vec<Vec<i64>>,
    c: Vec<Vec<i64>>,
) -> PyResult<Vec<Vec<u64>>> {
    let m = mumford::rho(&matrix(ring, a)?, &matrix(ring, b)?, &matrix(ring, c)?).map_err(to_py)?;
    Ok(rows_of(&m))
}

/// Pointwise stabilizer of the Lagrangian subgroup inside the tensor-cube image.
#[pyfunction]
#[pyo3(signature = (ell, cap = DEFAULT_CAP))]
fn mumford_stabilizer(ell: u64, cap: u64) -> PyResult<Vec<Vec<Vec<u64>>>> {
    let stab = mumford::pointwise_stabilizer_in_image(ell, cap).map_err(to_py)?;
    Ok(stab.iter().map(rows_of).collect())
}

/// Reports (JSON) checking that the strong property fails for each prime.
#[pyfunction]
#[pyo3(signature = (ells, c = (2, 1), cap = DEFAULT_CAP))]
fn verify_mumford(ells: Vec<u64>, c: (u64, u64), cap: u64) -> PyResult<Vec<String>> {
    let reports = mumford::verify_mu_s_failure(&ells, ratio(c)?, cap).map_err(to_py)?;
    Ok(reports.iter().map(report_json).collect())
}

#[pymodule]
fn mutorsion(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyResidueRing>()?;
    m.add_class::<PyTorsionSubgroup>()?;
    m.add_class::<PySymplecticSpace>()?;
    m.add_function(wrap_pyfunction!(det, m)?)?;
    m.add_function(wrap_pyfunction!(inverse, m)?)?;
    m.add_function(wrap_pyfunction!(smith, m)?)?;
    m.add_function(wrap_pyfunction!(degree_report, m)?)?;
    m.add_function(wrap_pyfunction!(scenario, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(mumford_stabilizer, m)?)?;
    m.add_function(wrap_pyfunction!(verify_mumford, m)?)?;
    Ok(())
}
