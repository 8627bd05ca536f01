//! Python bindings: grids, parameters, the optical and matter kernels,
//! a stepping `Simulation`, and the config/snapshot front end.

use std::path::PathBuf;
use std::sync::Arc;

use mbsim_cli::snapshot::{Array, Snapshot};
use mbsim_cli::CliError;
use mbsim_core::optics::{self, IndexProfile};
use mbsim_core::{
    density, make_grid, norm_squared, regime_report, Complex64, ComplexField, CoupledState,
    Coupler, CouplerSettings, Error, Grid1D, Illumination, MatterState, RealField,
};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

pyo3::create_exception!(mbsim, MbsimError, pyo3::exceptions::PyException);
pyo3::create_exception!(mbsim, SingularityError, MbsimError);
pyo3::create_exception!(mbsim, NumericalError, MbsimError);

fn core_err(e: Error) -> PyErr {
    match e {
        Error::Config { .. } | Error::Shape(_) | Error::Domain(_) => {
            PyValueError::new_err(e.to_string())
        }
        e if e.is_singularity() => SingularityError::new_err(e.to_string()),
        e => NumericalError::new_err(e.to_string()),
    }
}

fn cli_err(e: CliError) -> PyErr {
    match e {
        CliError::Physics(e) => core_err(e),
        CliError::Io { .. } => PyOSError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

/// Periodic grid `x_j = -L/2 + j L/N`.
#[pyclass(name = "Grid", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGrid(Arc<Grid1D>);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(n_points: usize, length: f64) -> PyResult<Self> {
        make_grid(n_points, length).map(PyGrid).map_err(core_err)
    }

    #[getter]
    fn n_points(&self) -> usize {
        self.0.n_points()
    }

    #[getter]
    fn length(&self) -> f64 {
        self.0.length()
    }

    #[getter]
    fn spacing(&self) -> f64 {
        self.0.spacing()
    }

    fn positions(&self) -> Vec<f64> {
        self.0.positions()
    }

    fn wavenumbers(&self) -> Vec<f64> {
        self.0.wavenumbers().to_vec()
    }

    fn __repr__(&self) -> String {
        format!(
            "Grid(n_points={}, length={})",
            self.0.n_points(),
            self.0.length()
        )
    }
}

impl PyGrid {
    fn real(&self, values: Vec<f64>) -> PyResult<RealField> {
        RealField::new(self.0.clone(), values).map_err(core_err)
    }

    fn complex(&self, values: Vec<Complex64>) -> PyResult<ComplexField> {
        ComplexField::new(self.0.clone(), values).map_err(core_err)
    }
}

#[pyclass(name = "PhysicalParams", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyParams(mbsim_core::PhysicalParams);

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (dipole, detuning, gamma=0.0, mass=1.0, k_laser=1.0, hbar=1.0, statistics="bose"))]
    fn new(
        dipole: f64,
        detuning: f64,
        gamma: f64,
        mass: f64,
        k_laser: f64,
        hbar: f64,
        statistics: &str,
    ) -> PyResult<Self> {
        mbsim_core::PhysicalParams {
            dipole,
            detuning,
            gamma,
            mass,
            k_laser,
            hbar,
            statistics: statistics.parse().map_err(core_err)?,
        }
        .validated()
        .map(PyParams)
        .map_err(core_err)
    }

    #[getter]
    fn dipole(&self) -> f64 {
        self.0.dipole
    }

    #[getter]
    fn detuning(&self) -> f64 {
        self.0.detuning
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.0.mass
    }

    #[getter]
    fn k_laser(&self) -> f64 {
        self.0.k_laser
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.0.hbar
    }

    #[getter]
    fn statistics(&self) -> &'static str {
        self.0.statistics.as_str()
    }

    /// `(4π/3ħ) d²`
    fn collective_shift(&self) -> f64 {
        self.0.collective_shift()
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        format!(
            "PhysicalParams(dipole={}, detuning={}, gamma={}, mass={}, k_laser={}, hbar={}, statistics='{}')",
            p.dipole,
            p.detuning,
            p.gamma,
            p.mass,
            p.k_laser,
            p.hbar,
            p.statistics.as_str()
        )
    }
}

#[pyfunction]
fn polarizability(params: &PyParams) -> PyResult<Complex64> {
    optics::polarizability(&params.0).map_err(core_err)
}

/// Clausius-Mossotti `n²` of a density sampled on `grid`.
#[pyfunction]
#[pyo3(signature = (grid, alpha, rho, epsilon=optics::MOSSOTTI_EPSILON))]
fn clausius_mossotti(
    grid: &PyGrid,
    alpha: Complex64,
    rho: Vec<f64>,
    epsilon: f64,
) -> PyResult<Vec<Complex64>> {
    let rho = grid.real(rho)?;
    optics::clausius_mossotti_with_threshold(alpha, &rho, epsilon)
        .map(|p| p.n_squared().to_vec())
        .map_err(core_err)
}

/// First-order index `1 + 4παρ`.
#[pyfunction]
fn low_density_index(grid: &PyGrid, alpha: Complex64, rho: Vec<f64>) -> PyResult<Vec<Complex64>> {
    let rho = grid.real(rho)?;
    optics::low_density_index(alpha, &rho)
        .map(|p| p.n_squared().to_vec())
        .map_err(core_err)
}

/// Solves `E'' + k² n² E = 0` for a wave of amplitude `left` (and
/// optionally `right`) incident on the profile. Returns
/// `(envelope, r, t)`.
#[pyfunction]
#[pyo3(signature = (grid, n_squared, k_laser, left, right=Complex64::new(0.0, 0.0)))]
fn solve_helmholtz(
    grid: &PyGrid,
    n_squared: Vec<Complex64>,
    k_laser: f64,
    left: Complex64,
    right: Complex64,
) -> PyResult<(Vec<Complex64>, Complex64, Complex64)> {
    let profile = IndexProfile::from_n_squared(grid.0.clone(), n_squared).map_err(core_err)?;
    let sol =
        optics::solve_helmholtz_two_sided(&profile, k_laser, left, right).map_err(core_err)?;
    Ok((
        sol.envelope.values().to_vec(),
        sol.reflection,
        sol.transmission,
    ))
}

#[pyfunction]
fn local_detuning(grid: &PyGrid, params: &PyParams, rho: Vec<f64>) -> PyResult<Vec<f64>> {
    let rho = grid.real(rho)?;
    mbsim_core::local_detuning(&rho, &params.0)
        .map(|d| d.values.into_values())
        .map_err(core_err)
}

/// `V = (ħ/4) Δ |Ω|² / Δ_l²` for a light envelope and density.
#[pyfunction]
fn effective_potential(
    grid: &PyGrid,
    params: &PyParams,
    envelope: Vec<Complex64>,
    rho: Vec<f64>,
) -> PyResult<Vec<f64>> {
    let env = grid.complex(envelope)?;
    let rho = grid.real(rho)?;
    let omega = mbsim_core::rabi_frequency(&env, &params.0);
    let dl = mbsim_core::local_detuning(&rho, &params.0).map_err(core_err)?;
    dl.ensure_regular().map_err(core_err)?;
    mbsim_core::effective_potential(&omega, &dl, &params.0)
        .map(RealField::into_values)
        .map_err(core_err)
}

#[pyfunction]
fn reduce_low_density(params: &PyParams, intensity: f64) -> PyResult<f64> {
    mbsim_core::reduce_low_density(&params.0, intensity).map_err(core_err)
}

#[pyfunction]
fn saturation_bound(s: f64) -> PyResult<f64> {
    mbsim_core::saturation_bound(s).map_err(core_err)
}

/// Coupled light-matter trajectory with fixed parameters and step.
///
/// `illumination` is `("scattering", left, right)` or
/// `("uniform", amplitude)`.
#[pyclass(name = "Simulation")]
struct PySimulation {
    grid: Arc<Grid1D>,
    params: mbsim_core::PhysicalParams,
    coupler: Coupler,
    state: CoupledState,
}

fn parse_illumination(illum: &Bound<'_, PyAny>) -> PyResult<Illumination> {
    let mode: String = illum.get_item(0)?.extract()?;
    match mode.as_str() {
        "scattering" => Ok(Illumination::Scattering {
            left: illum.get_item(1)?.extract()?,
            right: if illum.len()? > 2 {
                illum.get_item(2)?.extract()?
            } else {
                Complex64::new(0.0, 0.0)
            },
        }),
        "uniform" => Ok(Illumination::Uniform {
            amplitude: illum.get_item(1)?.extract()?,
        }),
        other => Err(PyValueError::new_err(format!(
            "illumination mode must be 'scattering' or 'uniform', got {other:?}"
        ))),
    }
}

#[pymethods]
impl PySimulation {
    #[new]
    #[pyo3(signature = (grid, params, psi, illumination, dt, tol=1e-12, max_iter=8, sub_iterate=false, eps_mossotti=optics::MOSSOTTI_EPSILON, eps_detuning=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        grid: &PyGrid,
        params: &PyParams,
        psi: Vec<Complex64>,
        illumination: &Bound<'_, PyAny>,
        dt: f64,
        tol: f64,
        max_iter: usize,
        sub_iterate: bool,
        eps_mossotti: f64,
        eps_detuning: Option<f64>,
    ) -> PyResult<Self> {
        let settings = CouplerSettings {
            tol,
            max_iter,
            sub_iterate,
            mossotti_epsilon: eps_mossotti,
            detuning_epsilon: eps_detuning,
        };
        let coupler = Coupler::new(
            grid.0.clone(),
            params.0,
            parse_illumination(illumination)?,
            settings,
            dt,
        )
        .map_err(core_err)?;
        let psi = grid.complex(psi)?;
        let state = coupler
            .initial_state(MatterState::new(psi))
            .map_err(core_err)?;
        Ok(Self {
            grid: grid.0.clone(),
            params: params.0,
            coupler,
            state,
        })
    }

    /// Advances `n` steps. On failure the state stays at the last good
    /// step and the error is raised.
    #[pyo3(signature = (n=1))]
    fn step(&mut self, py: Python<'_>, n: usize) -> PyResult<()> {
        for _ in 0..n {
            let next = py
                .detach(|| self.coupler.advance(&self.state))
                .map_err(core_err)?;
            self.state = next;
        }
        Ok(())
    }

    #[getter]
    fn time(&self) -> f64 {
        self.state.matter.time
    }

    #[getter]
    fn psi(&self) -> Vec<Complex64> {
        self.state.matter.psi1.values().to_vec()
    }

    #[getter]
    fn density(&self) -> Vec<f64> {
        density(&self.state.matter.psi1).into_values()
    }

    #[getter]
    fn norm(&self) -> f64 {
        norm_squared(&self.state.matter.psi1)
    }

    #[getter]
    fn envelope(&self) -> Vec<Complex64> {
        self.state.optics.envelope.values().to_vec()
    }

    #[getter]
    fn n_squared(&self) -> Vec<Complex64> {
        self.state.optics.profile.n_squared().to_vec()
    }

    #[getter]
    fn potential(&self) -> Vec<f64> {
        self.state.potential.values().to_vec()
    }

    #[getter]
    fn local_detuning(&self) -> Vec<f64> {
        self.state.local_detuning.values.values().to_vec()
    }

    #[getter]
    fn reflection(&self) -> Complex64 {
        self.state.optics.reflection
    }

    #[getter]
    fn transmission(&self) -> Complex64 {
        self.state.optics.transmission
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid(self.grid.clone())
    }

    /// Regime diagnostics at saturation parameter `s`.
    #[pyo3(signature = (saturation=0.01))]
    fn regime<'py>(&self, py: Python<'py>, saturation: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = regime_report(&self.state, &self.params, saturation).map_err(core_err)?;
        let d = PyDict::new(py);
        d.set_item("min_abs_detuning", r.min_abs_detuning)?;
        d.set_item(
            "max_mossotti_denominator_proximity",
            r.max_mossotti_denominator_proximity,
        )?;
        d.set_item("saturation_bound", r.saturation_bound)?;
        d.set_item("density_gradient_metric", r.density_gradient_metric)?;
        Ok(d)
    }
}

/// Validates a TOML run config and returns it, defaults filled in, as
/// TOML text.
#[pyfunction]
fn load_config(path: PathBuf) -> PyResult<String> {
    mbsim_cli::load_config(&path)
        .map(|c| c.to_toml())
        .map_err(cli_err)
}

/// Runs a config file. Returns `(output_directory, exit_code)`; physics
/// failures are reported through the exit code, as on the command line.
#[pyfunction]
fn run_config(py: Python<'_>, path: PathBuf) -> PyResult<(PathBuf, i32)> {
    let config = mbsim_cli::load_config(&path).map_err(cli_err)?;
    let outcome = py.detach(|| mbsim_cli::run(&config)).map_err(cli_err)?;
    let code = outcome.exit_code();
    Ok((outcome.directory, code))
}

/// Reads a snapshot into a dict: `time`, `x`, and every stored array
/// (complex arrays as lists of complex).
#[pyfunction]
fn read_snapshot<'py>(py: Python<'py>, path: PathBuf) -> PyResult<Bound<'py, PyDict>> {
    let snap = Snapshot::read(&path).map_err(cli_err)?;
    let d = PyDict::new(py);
    d.set_item("time", snap.time)?;
    d.set_item("x", snap.positions())?;
    for (name, array) in snap.arrays {
        match array {
            Array::Real(v) => d.set_item(name, v)?,
            Array::Complex(v) => d.set_item(name, v)?,
        }
    }
    Ok(d)
}

#[pymodule]
fn mbsim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MbsimError", m.py().get_type::<MbsimError>())?;
    m.add("SingularityError", m.py().get_type::<SingularityError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyParams>()?;
    m.add_class::<PySimulation>()?;
    m.add_function(wrap_pyfunction!(polarizability, m)?)?;
    m.add_function(wrap_pyfunction!(clausius_mossotti, m)?)?;
    m.add_function(wrap_pyfunction!(low_density_index, m)?)?;
    m.add_function(wrap_pyfunction!(solve_helmholtz, m)?)?;
    m.add_function(wrap_pyfunction!(local_detuning, m)?)?;
    m.add_function(wrap_pyfunction!(effective_potential, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_low_density, m)?)?;
    m.add_function(wrap_pyfunction!(saturation_bound, m)?)?;
    m.add_function(wrap_pyfunction!(load_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(read_snapshot, m)?)?;
    Ok(())
}
