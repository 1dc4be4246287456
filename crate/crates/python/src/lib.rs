//! Python bindings. Exact matrices cross the boundary as nested lists of
//! strings (`"1/2"`, `"-i"`, `"3/4+1/2i"`); numeric views use `complex`.

use clifsym_core::certificate::{self, Command, Expectation, InputSpec};
use clifsym_core::scalar::parse_rational;
use clifsym_core::spectra::{self, DensityState};
use clifsym_core::symmetry::{self, Ansatz, SolveOptions, SymmetryCandidate};
use clifsym_core::{Error, ExactMatrix, ExactScalar, Extension, Variant};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<BigRational> {
    parse_rational(s).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn extension(s: &str) -> PyResult<Extension> {
    match s {
        "sigma3" => Ok(Extension::Sigma3),
        "sigma2" => Ok(Extension::Sigma2),
        other => Err(PyValueError::new_err(format!("unknown extension {other:?}"))),
    }
}

fn exact(m: &ExactMatrix) -> Vec<Vec<String>> {
    m.rows()
        .iter()
        .map(|r| r.iter().map(ExactScalar::to_string).collect())
        .collect()
}

fn numeric(m: &ExactMatrix) -> Vec<Vec<Complex64>> {
    m.rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|z| {
                    let (re, im) = z.to_f64_pair();
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect()
}

/// Clifford generators γ₀…γ_d for one spatial dimension.
#[pyclass(frozen, name = "GammaSystem")]
struct PyGammaSystem(clifsym_core::GammaSystem);

#[pymethods]
impl PyGammaSystem {
    #[new]
    #[pyo3(signature = (d, extension = "sigma3"))]
    fn new(d: usize, extension: &str) -> PyResult<Self> {
        let ext = self::extension(extension)?;
        clifsym_core::system_for_with(d, ext).map(Self).map_err(err)
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    #[getter]
    fn rep_dim(&self) -> usize {
        self.0.rep_dim()
    }

    fn gamma(&self, mu: usize) -> PyResult<Vec<Vec<String>>> {
        self.0
            .gammas()
            .get(mu)
            .map(exact)
            .ok_or_else(|| PyValueError::new_err(format!("index {mu} out of range")))
    }

    fn relations_hold(&self) -> bool {
        self.0.relations_hold()
    }
}

/// Dirac-type Hamiltonian for one variant.
#[pyclass(frozen, name = "DiracModel")]
struct PyDiracModel(clifsym_core::DiracModel);

#[pymethods]
impl PyDiracModel {
    #[new]
    #[pyo3(signature = (d, variant = "single", mass = "1", extension = "sigma3"))]
    fn new(d: usize, variant: &str, mass: &str, extension: &str) -> PyResult<Self> {
        let v = Variant::parse(variant).map_err(err)?;
        v.build(d, &rational(mass)?, self::extension(extension)?)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    #[getter]
    fn rep_dim(&self) -> usize {
        self.0.rep_dim()
    }

    fn alpha(&self, k: usize) -> PyResult<Vec<Vec<String>>> {
        if k == 0 || k > self.0.d() {
            return Err(PyValueError::new_err(format!("alpha index {k} out of range")));
        }
        Ok(exact(self.0.alpha(k)))
    }

    fn beta(&self) -> Vec<Vec<String>> {
        exact(self.0.beta())
    }

    /// Exact `H(p)` for rational momentum components given as strings.
    fn hamiltonian(&self, p: Vec<String>) -> PyResult<Vec<Vec<String>>> {
        let p = p.iter().map(|s| rational(s)).collect::<PyResult<Vec<_>>>()?;
        self.0.hamiltonian_at(&p).map(|h| exact(&h)).map_err(err)
    }

    /// Returns `(ω², H² == ω²·I and tr H == 0)`.
    fn dispersion(&self, p: Vec<String>) -> PyResult<(String, bool)> {
        let p = p.iter().map(|s| rational(s)).collect::<PyResult<Vec<_>>>()?;
        let proof = spectra::dispersion_check(&self.0, &p).map_err(err)?;
        Ok((proof.omega_sq.to_string(), proof.holds()))
    }

    /// Rest-frame labels as `(energy_sign, j1, j2, multiplicity)`.
    fn labels(&self) -> PyResult<Vec<(i8, String, String, usize)>> {
        let labels = spectra::little_group_labels(&self.0).map_err(err)?;
        Ok(labels
            .into_iter()
            .map(|l| (l.energy_sign, l.j1.to_string(), l.j2.to_string(), l.multiplicity))
            .collect())
    }

    /// Evolves a density matrix at momentum `p` to time `t`.
    #[pyo3(signature = (p, rho, t, steps = 1))]
    fn evolve_density(
        &self,
        p: Vec<f64>,
        rho: Vec<Vec<Complex64>>,
        t: f64,
        steps: usize,
    ) -> PyResult<Vec<Vec<Complex64>>> {
        let n = rho.len();
        if rho.iter().any(|r| r.len() != n) {
            return Err(PyValueError::new_err("rho must be square"));
        }
        let m = DMatrix::from_fn(n, n, |i, j| rho[i][j]);
        let state = DensityState::new(p, m).map_err(err)?;
        let out = spectra::density_evolve(&self.0, &state, t, steps).map_err(err)?;
        Ok((0..n)
            .map(|i| (0..n).map(|j| out.rho[(i, j)]).collect())
            .collect())
    }
}

/// Solution space of one intertwiner system.
#[pyclass(frozen, name = "TauSolution")]
struct PyTauSolution(symmetry::TauSolution);

#[pymethods]
impl PyTauSolution {
    #[getter]
    fn dim(&self) -> usize {
        self.0.dim
    }

    #[getter]
    fn exists(&self) -> bool {
        self.0.exists
    }

    #[getter]
    fn representative(&self) -> Option<Vec<Vec<String>>> {
        self.0.representative.as_ref().map(exact)
    }

    fn representative_numeric(&self) -> Option<Vec<Vec<Complex64>>> {
        self.0.representative.as_ref().map(numeric)
    }

    fn basis(&self) -> Vec<Vec<Vec<String>>> {
        self.0.basis.iter().map(exact).collect()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serializable")
    }

    fn __repr__(&self) -> String {
        format!(
            "TauSolution({}, dim={}, exists={})",
            self.0.candidate.name, self.0.dim, self.0.exists
        )
    }
}

#[pyfunction]
#[pyo3(signature = (model, symmetry, ansatz = "full"))]
fn solve_tau(model: &PyDiracModel, symmetry: &str, ansatz: &str) -> PyResult<PyTauSolution> {
    let cand = SymmetryCandidate::builtin(symmetry).map_err(err)?;
    let opts = SolveOptions::with_ansatz(Ansatz::parse(ansatz).map_err(err)?);
    symmetry::solve_tau_with(&model.0, &cand, &opts)
        .map(PyTauSolution)
        .map_err(err)
}

/// Sealed, reproducible record of one run.
#[pyclass(frozen, name = "Certificate")]
struct PyCertificate(certificate::Certificate);

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        certificate::Certificate::parse(text).map(Self).map_err(err)
    }

    #[getter]
    fn content_hash(&self) -> String {
        self.0.content_hash.clone()
    }

    fn all_checks_pass(&self) -> bool {
        self.0.all_checks_pass()
    }

    /// Failed checks as `(claim, expected, found)`.
    fn failed_checks(&self) -> Vec<(String, String, String)> {
        self.0
            .failed_checks()
            .map(|c| (c.claim.clone(), c.expected.clone(), c.found.clone()))
            .collect()
    }

    fn flags(&self) -> Vec<String> {
        self.0.flags.iter().map(|f| f.id.clone()).collect()
    }

    fn reverify(&self) -> PyResult<bool> {
        certificate::reverify(&self.0).map_err(err)
    }

    fn report(&self) -> String {
        certificate::render_report(std::slice::from_ref(&self.0))
    }

    fn to_json(&self) -> String {
        self.0.emit()
    }
}

fn variants(v: &[String]) -> PyResult<Vec<Variant>> {
    v.iter().map(|s| Variant::parse(s).map_err(err)).collect()
}

/// Existence table over `dims × variants`, sealed as a certificate.
#[pyfunction]
#[pyo3(signature = (dims, variants = vec!["single".to_string()], mass = "1", extension = "sigma3", ansatz = "full", expect = vec![]))]
fn classify(
    dims: Vec<usize>,
    variants: Vec<String>,
    mass: &str,
    extension: &str,
    ansatz: &str,
    expect: Vec<String>,
) -> PyResult<PyCertificate> {
    let mut i = InputSpec::new(Command::Classify);
    i.dims = dims;
    i.variants = self::variants(&variants)?;
    i.mass = rational(mass)?;
    i.extension = self::extension(extension)?;
    i.ansatz = Ansatz::parse(ansatz).map_err(err)?;
    i.expect = expect
        .iter()
        .map(|s| Expectation::parse(s).map_err(err))
        .collect::<PyResult<_>>()?;
    certificate::run(&i).map(PyCertificate).map_err(err)
}

/// Column order of the classification table.
#[pyfunction]
fn classification_columns() -> Vec<&'static str> {
    symmetry::CLASSIFICATION_COLUMNS.to_vec()
}

#[pymodule]
fn clifsym(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGammaSystem>()?;
    m.add_class::<PyDiracModel>()?;
    m.add_class::<PyTauSolution>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(solve_tau, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(classification_columns, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
