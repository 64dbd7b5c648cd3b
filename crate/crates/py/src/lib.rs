//! Python bindings. Build with `maturin develop` from this directory.

use deltarray_core::filter as core_filter;
use deltarray_core::reduction as core_reduction;
use deltarray_core::resonance as core_res;
use deltarray_core::units as core_units;
use deltarray_core::{Complex2x2, Error};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Matrix = [[Complex64; 2]; 2];

fn rows(m: &Complex2x2) -> Matrix {
    [[m.m11, m.m12], [m.m21, m.m22]]
}

#[pyclass(name = "Material", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMaterial(core_units::Material);

#[pymethods]
impl PyMaterial {
    #[new]
    fn new(label: String, effective_mass_ratio: f64) -> PyResult<Self> {
        core_units::Material::new(label, effective_mass_ratio).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn gaas() -> Self {
        Self(core_units::Material::gaas())
    }

    #[staticmethod]
    fn vacuum() -> Self {
        Self(core_units::Material::vacuum())
    }

    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        core_units::Material::preset(name).map(Self).map_err(py_err)
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    #[getter]
    fn effective_mass_ratio(&self) -> f64 {
        self.0.effective_mass_ratio()
    }

    fn __repr__(&self) -> String {
        format!("Material({:?}, {})", self.0.label(), self.0.effective_mass_ratio())
    }
}

/// Barriers at increasing positions `x` with reduced strengths `g`.
#[pyclass(name = "BarrierArray", frozen, from_py_object)]
#[derive(Clone)]
struct PyBarrierArray(deltarray_core::BarrierArray);

#[pymethods]
impl PyBarrierArray {
    #[new]
    fn new(pairs: Vec<(f64, f64)>) -> PyResult<Self> {
        deltarray_core::BarrierArray::from_pairs(pairs).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn equally_spaced(n: usize, g: f64, spacing: f64) -> PyResult<Self> {
        deltarray_core::BarrierArray::equally_spaced(n, g, spacing).map(Self).map_err(py_err)
    }

    #[getter]
    fn positions(&self) -> Vec<f64> {
        self.0.barriers().iter().map(|b| b.x).collect()
    }

    #[getter]
    fn strengths(&self) -> Vec<f64> {
        self.0.barriers().iter().map(|b| b.g).collect()
    }

    fn pairs(&self) -> Vec<(f64, f64)> {
        self.0.barriers().iter().map(|b| (b.x, b.g)).collect()
    }

    fn total_strength(&self) -> f64 {
        self.0.total_strength()
    }

    fn extent(&self) -> f64 {
        self.0.extent()
    }

    fn translated(&self, dx: f64) -> PyResult<Self> {
        self.0.translated(dx).map(Self).map_err(py_err)
    }

    fn scaled(&self, s: f64) -> PyResult<Self> {
        self.0.scaled(s).map(Self).map_err(py_err)
    }

    fn transfer(&self, k: f64) -> PyResult<PyTransferMatrix> {
        compose(self, k)
    }

    fn transmission(&self, k: f64) -> PyResult<f64> {
        deltarray_core::transfer::array_transmission(&self.0, k).map_err(py_err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("BarrierArray({:?})", self.pairs())
    }
}

#[pyclass(name = "TransferMatrix", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTransferMatrix(deltarray_core::TransferMatrix);

#[pymethods]
impl PyTransferMatrix {
    #[staticmethod]
    fn identity() -> Self {
        Self(deltarray_core::TransferMatrix::identity())
    }

    #[getter]
    fn m11(&self) -> Complex64 {
        self.0.matrix().m11
    }

    #[getter]
    fn m12(&self) -> Complex64 {
        self.0.matrix().m12
    }

    #[getter]
    fn m21(&self) -> Complex64 {
        self.0.matrix().m21
    }

    #[getter]
    fn m22(&self) -> Complex64 {
        self.0.matrix().m22
    }

    fn to_list(&self) -> Matrix {
        rows(self.0.matrix())
    }

    fn det(&self) -> Complex64 {
        self.0.matrix().det()
    }

    fn transmission(&self) -> f64 {
        deltarray_core::transmission(&self.0)
    }

    fn reflection(&self) -> f64 {
        deltarray_core::reflection(&self.0)
    }

    fn structure_defect(&self) -> f64 {
        self.0.structure_defect()
    }

    /// `a @ b` applies `b` first.
    fn __matmul__(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    fn __repr__(&self) -> String {
        format!("TransferMatrix({:?})", self.to_list())
    }
}

#[pyfunction]
fn lmatrix(phi: f64) -> Matrix {
    rows(&deltarray_core::lmatrix(phi))
}

#[pyfunction]
fn single_transfer(lambda: f64, phi: f64) -> PyTransferMatrix {
    PyTransferMatrix(deltarray_core::single_transfer(lambda, phi))
}

#[pyfunction]
fn compose(array: &PyBarrierArray, k: f64) -> PyResult<PyTransferMatrix> {
    deltarray_core::compose(&array.0, k).map(PyTransferMatrix).map_err(py_err)
}

#[pyfunction]
fn compose_expansion(array: &PyBarrierArray, k: f64) -> PyResult<Matrix> {
    deltarray_core::compose_expansion(&array.0, k).map(|m| rows(&m)).map_err(py_err)
}

#[pyfunction]
fn transmission(tm: &PyTransferMatrix) -> f64 {
    deltarray_core::transmission(&tm.0)
}

#[pyfunction]
fn reflection(tm: &PyTransferMatrix) -> f64 {
    deltarray_core::reflection(&tm.0)
}

#[pyclass(name = "ReductionResult", frozen, get_all)]
struct PyReductionResult {
    classification: String,
    effective: PyBarrierArray,
    transmission: f64,
    four_barrier_pattern: Option<String>,
    merges: Vec<String>,
    zero_strength_single: bool,
}

#[pyfunction]
#[pyo3(signature = (array, k, tol = core_reduction::DEFAULT_PHASE_TOL))]
fn reduce(array: &PyBarrierArray, k: f64, tol: f64) -> PyResult<PyReductionResult> {
    let r = core_reduction::reduce(&array.0, k, tol).map_err(py_err)?;
    Ok(PyReductionResult {
        classification: format!("{:?}", r.classification),
        zero_strength_single: r.is_zero_strength_single(),
        four_barrier_pattern: r.four_barrier_pattern.map(|p| format!("{p:?}")),
        merges: r.merge_log.iter().map(|m| format!("{m:?}")).collect(),
        transmission: r.transmission,
        effective: PyBarrierArray(r.effective),
    })
}

#[pyclass(name = "Spectrum", frozen)]
struct PySpectrum(core_res::Spectrum);

#[pymethods]
impl PySpectrum {
    #[getter]
    fn k(&self) -> Vec<f64> {
        self.0.points.iter().map(|p| p.k).collect()
    }

    /// Energies in meV, or `None` when the scan had no material.
    #[getter]
    fn energy_mev(&self) -> Option<Vec<f64>> {
        self.0.points.iter().map(|p| p.energy_mev).collect()
    }

    #[getter]
    fn transmission(&self) -> Vec<f64> {
        self.0.points.iter().map(|p| p.transmission).collect()
    }

    #[getter]
    fn reflection(&self) -> Vec<f64> {
        self.0.points.iter().map(|p| p.reflection).collect()
    }

    fn __len__(&self) -> usize {
        self.0.points.len()
    }
}

#[pyfunction]
#[pyo3(signature = (array, k_min, k_max, n_points, material = None))]
fn scan(
    array: &PyBarrierArray,
    k_min: f64,
    k_max: f64,
    n_points: usize,
    material: Option<&PyMaterial>,
) -> PyResult<PySpectrum> {
    let mut s = core_res::scan(&array.0, k_min, k_max, n_points).map_err(py_err)?;
    if let Some(m) = material {
        s = s.with_material(&m.0);
    }
    Ok(PySpectrum(s))
}

#[pyfunction]
fn scan_energy(
    array: &PyBarrierArray,
    material: &PyMaterial,
    e_min_mev: f64,
    e_max_mev: f64,
    n_points: usize,
) -> PyResult<PySpectrum> {
    core_res::scan_energy(&array.0, &material.0, e_min_mev, e_max_mev, n_points).map(PySpectrum).map_err(py_err)
}

#[pyclass(name = "Peak", frozen, get_all)]
struct PyPeak {
    k: f64,
    energy_mev: Option<f64>,
    t_max: f64,
    prominence: f64,
    fwhm: Option<f64>,
}

#[pyfunction]
#[pyo3(signature = (spectrum, prominence = core_filter::DEFAULT_PROMINENCE))]
fn peak_analysis(spectrum: &PySpectrum, prominence: f64) -> PyResult<Vec<PyPeak>> {
    let set = core_filter::peak_analysis(&spectrum.0, prominence).map_err(py_err)?;
    Ok(set
        .peaks
        .into_iter()
        .map(|p| PyPeak { k: p.k, energy_mev: p.energy_mev, t_max: p.t_max, prominence: p.prominence, fwhm: p.fwhm })
        .collect())
}

#[pyclass(name = "Resonance", frozen, get_all)]
struct PyResonance {
    k: f64,
    energy_mev: Option<f64>,
    transmission: f64,
    m21_sq: f64,
    bracket_width: f64,
    branch: Option<u32>,
}

impl From<&core_res::Resonance> for PyResonance {
    fn from(r: &core_res::Resonance) -> Self {
        Self {
            k: r.k,
            energy_mev: r.energy_mev,
            transmission: r.transmission,
            m21_sq: r.m21_sq,
            bracket_width: r.bracket_width,
            branch: r.branch,
        }
    }
}

/// Returns `(resonances, near_misses)`.
#[pyfunction]
#[pyo3(signature = (array, k_min, k_max, grid = 2000, tol = core_res::PERFECT_TOL, material = None))]
fn find_perfect_tunnelling(
    array: &PyBarrierArray,
    k_min: f64,
    k_max: f64,
    grid: usize,
    tol: f64,
    material: Option<&PyMaterial>,
) -> PyResult<(Vec<PyResonance>, Vec<PyResonance>)> {
    let mut rep = core_res::find_perfect_tunnelling(&array.0, k_min, k_max, core_res::SearchOptions { grid, tol })
        .map_err(py_err)?;
    if let Some(m) = material {
        rep = rep.with_material(&m.0);
    }
    Ok((rep.resonances.iter().map(Into::into).collect(), rep.near_misses.iter().map(Into::into).collect()))
}

#[pyfunction]
fn pair_resonance_k(g: f64, d: f64, branch: u32) -> PyResult<f64> {
    core_res::pair_resonance_k(g, d, branch).map_err(py_err)
}

#[pyfunction]
fn qbs_residual_n2(lambda: f64, theta: f64) -> f64 {
    core_res::qbs_residual_n2(lambda, theta)
}

#[pyfunction]
fn qbs_residual_n2_printed(lambda: f64, theta: f64) -> PyResult<f64> {
    core_res::qbs_residual_n2_printed(lambda, theta).map_err(py_err)
}

#[pyfunction]
fn qbs_residual_n3(lambda: f64, kx2: f64) -> PyResult<f64> {
    core_res::qbs_residual_n3(lambda, kx2).map_err(py_err)
}

#[pyfunction]
fn qbs_residual_n4(lambda: f64, kx2: f64) -> PyResult<f64> {
    core_res::qbs_residual_n4(lambda, kx2).map_err(py_err)
}

#[pyclass(name = "AuditedRoot", frozen, get_all)]
struct PyAuditedRoot {
    phase: f64,
    transmission: f64,
    residual: Option<f64>,
    agrees: bool,
}

#[pyclass(name = "FormAudit", frozen, get_all)]
struct PyFormAudit {
    form: String,
    passes: bool,
    at_oracle_roots: Vec<Py<PyAuditedRoot>>,
    at_form_roots: Vec<Py<PyAuditedRoot>>,
}

fn form_audit(py: Python<'_>, a: &core_res::FormAudit) -> PyResult<Py<PyFormAudit>> {
    let conv = |v: &[core_res::AuditedRoot]| -> PyResult<Vec<Py<PyAuditedRoot>>> {
        v.iter()
            .map(|r| {
                Py::new(
                    py,
                    PyAuditedRoot { phase: r.phase, transmission: r.transmission, residual: r.residual, agrees: r.agrees },
                )
            })
            .collect()
    };
    Py::new(
        py,
        PyFormAudit {
            form: a.form.to_string(),
            passes: a.passes,
            at_oracle_roots: conv(&a.at_oracle_roots)?,
            at_form_roots: conv(&a.at_form_roots)?,
        },
    )
}

/// Returns `(derived, printed)` audits of the two-barrier condition.
#[pyfunction]
#[pyo3(signature = (lambda, grid = 4000))]
fn audit_pair(py: Python<'_>, lambda: f64, grid: usize) -> PyResult<(Py<PyFormAudit>, Py<PyFormAudit>)> {
    let opts = core_res::SearchOptions { grid, ..Default::default() };
    let a = core_res::audit_pair(lambda, opts).map_err(py_err)?;
    Ok((form_audit(py, &a.derived)?, form_audit(py, &a.printed)?))
}

#[pyfunction]
#[pyo3(signature = (n, lambda, grid = 4000))]
fn audit_symmetric(py: Python<'_>, n: usize, lambda: f64, grid: usize) -> PyResult<Py<PyFormAudit>> {
    let opts = core_res::SearchOptions { grid, ..Default::default() };
    let a = core_res::audit_symmetric(n, lambda, opts).map_err(py_err)?;
    form_audit(py, &a.printed)
}

#[pyfunction]
fn reduced_strength(j_ev_angstrom: f64, material: &PyMaterial) -> f64 {
    core_units::reduced_strength(j_ev_angstrom, &material.0)
}

#[pyfunction]
fn k_from_energy(energy_mev: f64, material: &PyMaterial) -> PyResult<f64> {
    core_units::k_from_energy(energy_mev, &material.0).map_err(py_err)
}

#[pyfunction]
fn energy_from_k(k: f64, material: &PyMaterial) -> PyResult<f64> {
    core_units::energy_from_k(k, &material.0).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (target_mev, material, j_ev_angstrom, branch = 0))]
fn design_pair_cell(target_mev: f64, material: &PyMaterial, j_ev_angstrom: f64, branch: u32) -> PyResult<f64> {
    core_filter::design_pair_cell(target_mev, &material.0, j_ev_angstrom, branch).map_err(py_err)
}

/// Flattens cells (each starting at x = 0) separated by spacers.
#[pyfunction]
fn flatten_cells(cells: Vec<PyBarrierArray>, spacers: Vec<f64>) -> PyResult<PyBarrierArray> {
    let cells = cells
        .into_iter()
        .enumerate()
        .map(|(i, c)| core_filter::Cell::new(c.0, format!("cell{i}")))
        .collect::<Result<Vec<_>, _>>()
        .map_err(py_err)?;
    let comp = core_filter::Composition::new(cells, spacers).map_err(py_err)?;
    core_filter::flatten(&comp).map(PyBarrierArray).map_err(py_err)
}

#[pymodule]
fn deltarray(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMaterial>()?;
    m.add_class::<PyBarrierArray>()?;
    m.add_class::<PyTransferMatrix>()?;
    m.add_class::<PyReductionResult>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyPeak>()?;
    m.add_class::<PyResonance>()?;
    m.add_class::<PyAuditedRoot>()?;
    m.add_class::<PyFormAudit>()?;
    m.add_function(wrap_pyfunction!(lmatrix, m)?)?;
    m.add_function(wrap_pyfunction!(single_transfer, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(compose_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(transmission, m)?)?;
    m.add_function(wrap_pyfunction!(reflection, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(scan_energy, m)?)?;
    m.add_function(wrap_pyfunction!(peak_analysis, m)?)?;
    m.add_function(wrap_pyfunction!(find_perfect_tunnelling, m)?)?;
    m.add_function(wrap_pyfunction!(pair_resonance_k, m)?)?;
    m.add_function(wrap_pyfunction!(qbs_residual_n2, m)?)?;
    m.add_function(wrap_pyfunction!(qbs_residual_n2_printed, m)?)?;
    m.add_function(wrap_pyfunction!(qbs_residual_n3, m)?)?;
    m.add_function(wrap_pyfunction!(qbs_residual_n4, m)?)?;
    m.add_function(wrap_pyfunction!(audit_pair, m)?)?;
    m.add_function(wrap_pyfunction!(audit_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_strength, m)?)?;
    m.add_function(wrap_pyfunction!(k_from_energy, m)?)?;
    m.add_function(wrap_pyfunction!(energy_from_k, m)?)?;
    m.add_function(wrap_pyfunction!(design_pair_cell, m)?)?;
    m.add_function(wrap_pyfunction!(flatten_cells, m)?)?;
    Ok(())
}
