//! Python bindings: a session object bundling one algebra realization with
//! its Cartan data, plus the gradient-map, polytope, atlas, and flow
//! operations on top of it.

use orbitope::convgeo::{face_lattice, weyl_orbit_polytope, Polytope};
use orbitope::faceatlas::{casselman_correspondence, enumerate_mu_connected, sandwich_check};
use orbitope::flowlab::{
    integrate_norm_flow, nu_p, stratification_probe, DEFAULT_GRAD_TOL, DEFAULT_STEP, DEFAULT_T_MAX,
};
use orbitope::gradmap::{
    beta_profile, flow_limit, gradient_map, mu_a, mu_beta, orbit_sample, ProjectivePoint,
};
use orbitope::liealg::{
    cartan_split, maximal_abelian, restricted_roots, weyl_group, AbelianSlice, CartanSplit, LieAlgebraRep,
    RestrictedRootSystem, WeylGroup,
};
use orbitope::matkernel::Matrix;
use orbitope::repspace::{adjoint_rep, sym_power_rep, weights, WeightData};
use orbitope::scenario::{preset_algebra, PRESETS};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: orbitope::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// One algebra realization with its Cartan split, abelian slice, restricted
/// roots, Weyl group, and weight data, computed once at construction.
#[pyclass]
struct Session {
    alg: LieAlgebraRep,
    split: CartanSplit,
    a: AbelianSlice,
    rs: RestrictedRootSystem,
    w: WeylGroup,
    wd: WeightData,
}

impl Session {
    fn from_algebra(alg: LieAlgebraRep, seed: u64) -> PyResult<Self> {
        let split = cartan_split(&alg).map_err(err)?;
        let a = maximal_abelian(&split, seed).map_err(err)?;
        let rs = restricted_roots(&alg, &a, 1e-8).map_err(err)?;
        let w = weyl_group(&rs).map_err(err)?;
        let wd = weights(&alg, &a, &rs).map_err(err)?;
        Ok(Session { alg, split, a, rs, w, wd })
    }

    fn hull(&self) -> PyResult<Polytope> {
        weyl_orbit_polytope(&self.w, &self.wd.mu_rho).map_err(err)
    }

    fn beta_from_coords(&self, coords: &[f64]) -> PyResult<Matrix> {
        if coords.len() != self.a.rank() {
            return Err(PyValueError::new_err(format!(
                "expected {} slice coordinates, got {}",
                self.a.rank(),
                coords.len()
            )));
        }
        let mut out = Matrix::zeros(self.alg.n, self.alg.n);
        for (c, h) in coords.iter().zip(&self.a.basis) {
            out.axpy(*c, h);
        }
        Ok(out)
    }
}

#[pymethods]
impl Session {
    #[new]
    #[pyo3(signature = (preset, seed = 11))]
    fn new(preset: &str, seed: u64) -> PyResult<Self> {
        Session::from_algebra(preset_algebra(preset).map_err(err)?, seed)
    }

    /// Build a session from explicit generator matrices, optionally pushed
    /// through a symmetric power or the adjoint representation.
    #[staticmethod]
    #[pyo3(signature = (generators, sym_power = None, adjoint = false, seed = 11))]
    fn from_generators(
        generators: Vec<Vec<Vec<f64>>>,
        sym_power: Option<usize>,
        adjoint: bool,
        seed: u64,
    ) -> PyResult<Self> {
        if generators.is_empty() {
            return Err(PyValueError::new_err("at least one generator required"));
        }
        let n = generators[0].len();
        let mats: Vec<Matrix> = generators.iter().map(|g| Matrix::from_rows(g)).collect();
        let mut alg = LieAlgebraRep::new(n, mats).map_err(err)?;
        if let Some(k) = sym_power {
            alg = sym_power_rep(&alg, k).map_err(err)?;
        }
        if adjoint {
            alg = adjoint_rep(&alg).map_err(err)?;
        }
        Session::from_algebra(alg, seed)
    }

    /// Matrix size the algebra acts on.
    #[getter]
    fn n(&self) -> usize {
        self.alg.n
    }

    /// Dimension of the algebra.
    #[getter]
    fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Rank of the abelian slice.
    #[getter]
    fn rank(&self) -> usize {
        self.a.rank()
    }

    /// Restricted-root data: functionals, multiplicities, base, Weyl order.
    fn roots<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("count", self.rs.roots.len())?;
        d.set_item("functionals", self.rs.roots.iter().map(|r| r.functional.clone()).collect::<Vec<_>>())?;
        d.set_item("multiplicities", self.rs.roots.iter().map(|r| r.space.len()).collect::<Vec<_>>())?;
        d.set_item("base", self.rs.base_functionals())?;
        d.set_item("weyl_order", self.w.elements.len())?;
        Ok(d)
    }

    /// Weight data: functionals, multiplicities, the highest weight reading
    /// and its unit weight vector.
    fn weights<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("weights", self.wd.weights.clone())?;
        d.set_item("multiplicities", self.wd.multiplicities())?;
        d.set_item("highest", self.wd.highest)?;
        d.set_item("mu_rho", self.wd.mu_rho.clone())?;
        d.set_item("v_rho", self.wd.v_rho.clone())?;
        Ok(d)
    }

    /// Momentum polytope: vertices, facets, dimension, face count.
    fn polytope<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let p = self.hull()?;
        let d = PyDict::new(py);
        d.set_item("ambient_dim", p.ambient_dim)?;
        d.set_item("dim", p.dim)?;
        d.set_item("vertices", p.vertices.clone())?;
        let facets = PyList::empty(py);
        for f in &p.facets {
            let fd = PyDict::new(py);
            fd.set_item("normal", f.normal.clone())?;
            fd.set_item("offset", f.offset)?;
            facets.append(fd)?;
        }
        d.set_item("facets", facets)?;
        d.set_item("face_count", face_lattice(&p).len())?;
        Ok(d)
    }

    /// Full gradient-map value at a projective point, as a symmetric matrix.
    fn gradient(&self, x: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        let x = ProjectivePoint::new(&x).map_err(err)?;
        Ok(matrix_rows(&gradient_map(&self.split, &x)))
    }

    /// Abelian-slice reading of the gradient map.
    fn reading(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let x = ProjectivePoint::new(&x).map_err(err)?;
        Ok(mu_a(&self.a, &x))
    }

    /// Height function along a slice direction, evaluated at a point.
    fn height(&self, beta_coords: Vec<f64>, x: Vec<f64>) -> PyResult<f64> {
        let beta = self.beta_from_coords(&beta_coords)?;
        let bp = beta_profile(&self.split, &beta, 1e-8).map_err(err)?;
        let x = ProjectivePoint::new(&x).map_err(err)?;
        Ok(mu_beta(&bp, &x))
    }

    /// Limit of the ascending flow along a slice direction.
    fn flow_limit(&self, beta_coords: Vec<f64>, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let beta = self.beta_from_coords(&beta_coords)?;
        let bp = beta_profile(&self.split, &beta, 1e-8).map_err(err)?;
        let x = ProjectivePoint::new(&x).map_err(err)?;
        Ok(flow_limit(&bp, &x).map_err(err)?.coords().to_vec())
    }

    /// Norm-square value at a projective point.
    fn norm_square(&self, x: Vec<f64>) -> PyResult<f64> {
        let x = ProjectivePoint::new(&x).map_err(err)?;
        Ok(nu_p(&self.split, &x))
    }

    /// Descend the norm-square flow; returns the limit, its gradient norm,
    /// the stop time and a convergence flag.
    fn norm_flow<'py>(&self, py: Python<'py>, x: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
        let x = ProjectivePoint::new(&x).map_err(err)?;
        let out = integrate_norm_flow(&self.split, &x, DEFAULT_STEP, DEFAULT_GRAD_TOL, DEFAULT_T_MAX).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("limit", out.x_inf.coords().to_vec())?;
        d.set_item("limit_norm", gradient_map(&self.split, &out.x_inf).frob_norm())?;
        d.set_item("converged", out.converged)?;
        d.set_item("t_final", out.t_final)?;
        Ok(d)
    }

    /// Random points on the compact-group orbit of x.
    #[pyo3(signature = (x, count, seed = 11))]
    fn orbit_samples(&self, x: Vec<f64>, count: usize, seed: u64) -> PyResult<Vec<Vec<f64>>> {
        let x = ProjectivePoint::new(&x).map_err(err)?;
        let pts = orbit_sample(&self.split.k_basis, &x, count, 1.0, seed).map_err(err)?;
        Ok(pts.into_iter().map(|p| p.coords().to_vec()).collect())
    }

    /// Connected-subset atlas: the face-class correspondence plus one
    /// parabolic sandwich report per subset.
    fn atlas<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let p = self.hull()?;
        let report = casselman_correspondence(&self.rs, &self.w, &self.wd.mu_rho, &p).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("matched", report.matched)?;
        d.set_item("class_count", report.classes.len())?;
        let classes = PyList::empty(py);
        for c in &report.classes {
            let cd = PyDict::new(py);
            cd.set_item("subset", c.subset.subset.clone())?;
            cd.set_item("saturation", c.subset.saturation.clone())?;
            cd.set_item("face_vertices", c.face.vertex_indices.clone())?;
            cd.set_item("orbit_size", c.orbit_size)?;
            classes.append(cd)?;
        }
        d.set_item("classes", classes)?;
        let sandwiches = PyList::empty(py);
        for ms in enumerate_mu_connected(&self.rs, &self.wd.mu_rho).map_err(err)? {
            let sw = sandwich_check(&self.alg, &self.rs, &ms, &self.wd).map_err(err)?;
            let sd = PyDict::new(py);
            sd.set_item("subset", sw.subset)?;
            sd.set_item("saturation", sw.saturation)?;
            sd.set_item("dims", (sw.dim_lower, sw.dim_stab, sw.dim_upper))?;
            sd.set_item("residuals", (sw.lower_residual, sw.upper_residual))?;
            sd.set_item("irreducible", sw.irreducible)?;
            sd.set_item("ok", sw.ok)?;
            sandwiches.append(sd)?;
        }
        d.set_item("sandwiches", sandwiches)?;
        Ok(d)
    }

    /// Sample the norm-square limit landscape.
    #[pyo3(signature = (samples = 200, seed = 11))]
    fn stratification<'py>(&self, py: Python<'py>, samples: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let report = stratification_probe(&self.split, samples.max(100), seed, 1e-4).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("samples", report.samples)?;
        d.set_item("min_value", report.min_value)?;
        d.set_item("min_fraction", report.min_fraction)?;
        d.set_item("non_converged", report.non_converged)?;
        d.set_item("histogram", report.histogram)?;
        Ok(d)
    }
}

/// Names and blurbs of the built-in presets.
#[pyfunction]
fn presets() -> Vec<(String, String)> {
    PRESETS.iter().map(|(n, b)| (n.to_string(), b.to_string())).collect()
}

#[pymodule]
fn orbitope_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Session>()?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    Ok(())
}
