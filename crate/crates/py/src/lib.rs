//! Python bindings: polytopes, zonal kernels, operator application and
//! Minkowski reconstruction.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use convexcal_core::bmh::BmHomomorphism;
use convexcal_core::body::{self, Polytope3};
use convexcal_core::minkowski::{solve, MinkowskiInstance};
use convexcal_core::quad::{support_grid, SphereRule};
use convexcal_core::zonal::{
    is_support_profile, legendre_coefficients, weakly_positive, ZonalProfile,
};
use convexcal_core::Error;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(m) => PyValueError::new_err(m),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// A convex polytope in R^3.
#[pyclass(name = "Polytope")]
#[derive(Clone)]
struct PyPolytope {
    inner: Polytope3,
}

#[pymethods]
impl PyPolytope {
    /// Convex hull of a vertex list.
    #[new]
    fn new(vertices: Vec<[f64; 3]>) -> PyResult<Self> {
        Ok(PyPolytope {
            inner: Polytope3::from_points(&vertices).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn cube(half_extent: f64) -> Self {
        PyPolytope {
            inner: Polytope3::cube(half_extent),
        }
    }

    #[staticmethod]
    fn tetrahedron() -> Self {
        PyPolytope {
            inner: Polytope3::tetrahedron(),
        }
    }

    fn vertices(&self) -> Vec<[f64; 3]> {
        self.inner.vertices().to_vec()
    }

    fn volume(&self) -> f64 {
        self.inner.volume()
    }

    fn surface_area(&self) -> f64 {
        self.inner.surface_area()
    }

    fn is_full_dimensional(&self) -> bool {
        self.inner.is_full_dimensional()
    }

    /// Support function value at a unit direction.
    fn support(&self, u: [f64; 3]) -> PyResult<f64> {
        body::support(&self.inner, u).map_err(to_py_err)
    }

    /// Surface area measure atoms as (normal, weight) pairs.
    fn surface_measure(&self) -> PyResult<Vec<([f64; 3], f64)>> {
        Ok(self
            .inner
            .surface_measure()
            .map_err(to_py_err)?
            .atoms()
            .to_vec())
    }

    /// Quermassintegrals (W0, W1, W2, W3); W2 by spherical quadrature.
    fn quermassintegrals(&self) -> PyResult<[f64; 4]> {
        self.inner
            .quermassintegrals(&SphereRule::default_rule())
            .map_err(to_py_err)
    }

    fn steiner_point(&self) -> [f64; 3] {
        self.inner.steiner_point(&SphereRule::default_rule())
    }

    fn translate(&self, x: [f64; 3]) -> Self {
        PyPolytope {
            inner: self.inner.translate(x),
        }
    }

    fn scale(&self, lambda: f64) -> Self {
        PyPolytope {
            inner: self.inner.scale_by(lambda),
        }
    }

    fn minkowski_sum(&self, other: &PyPolytope) -> PyResult<Self> {
        Ok(PyPolytope {
            inner: body::minkowski_sum(&self.inner, &other.inner).map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Polytope(vertices={}, facets={}, volume={:.6})",
            self.inner.vertices().len(),
            self.inner.facets().len(),
            self.inner.volume()
        )
    }
}

/// A zonal kernel profile on [-1, 1].
#[pyclass(name = "Kernel")]
#[derive(Clone)]
struct PyKernel {
    inner: ZonalProfile,
}

#[pymethods]
impl PyKernel {
    /// Builtin kernel by name: projection, mean_section_g2,
    /// segment_support, or cap (with an angle).
    #[new]
    #[pyo3(signature = (name, alpha=None))]
    fn new(name: &str, alpha: Option<f64>) -> PyResult<Self> {
        Ok(PyKernel {
            inner: ZonalProfile::builtin(name, alpha).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn from_table(t: Vec<f64>, value: Vec<f64>) -> PyResult<Self> {
        Ok(PyKernel {
            inner: ZonalProfile::from_table(t, value, "table").map_err(to_py_err)?,
        })
    }

    fn eval(&self, t: f64) -> f64 {
        self.inner.eval(t)
    }

    /// Legendre (multiplier) coefficients up to `max_degree` in dimension `n`.
    #[pyo3(signature = (max_degree, n=3))]
    fn multipliers(&self, max_degree: usize, n: usize) -> PyResult<Vec<f64>> {
        Ok(legendre_coefficients(&self.inner, n, max_degree)
            .map_err(to_py_err)?
            .values)
    }

    /// (is weakly positive, feasible linear shift if any).
    fn weakly_positive(&self) -> (bool, Option<f64>) {
        let w = weakly_positive(&self.inner);
        (w.weakly_positive, w.shift)
    }

    /// Sampled sublinearity screen of the zonal extension.
    fn is_support_profile(&self) -> bool {
        is_support_profile(&self.inner, 0, 10_000).pass
    }

    fn __repr__(&self) -> String {
        format!("Kernel({})", self.inner.label())
    }
}

/// Applies the operator generated by `kernel` to `body` and realizes the
/// image as a polytope on a direction grid of the given size.
#[pyfunction]
#[pyo3(signature = (body, kernel, grid = 302))]
fn apply_operator(body: &PyPolytope, kernel: &PyKernel, grid: usize) -> PyResult<PyPolytope> {
    let op = BmHomomorphism::new(kernel.inner.clone(), 12).map_err(to_py_err)?;
    let realized = op
        .realize(&body.inner, &support_grid(grid.max(26)))
        .map_err(to_py_err)?;
    Ok(PyPolytope {
        inner: realized.polytope,
    })
}

/// Support value of the operator image at one direction (exact atom sum).
#[pyfunction]
fn operator_support(body: &PyPolytope, kernel: &PyKernel, u: [f64; 3]) -> PyResult<f64> {
    let op = BmHomomorphism::new(kernel.inner.clone(), 12).map_err(to_py_err)?;
    let mu = body.inner.surface_measure().map_err(to_py_err)?;
    Ok(op.support_at(&mu, u))
}

/// Reconstructs a polytope (Steiner point at the origin) from surface
/// area measure atoms.
#[pyfunction]
fn reconstruct(atoms: Vec<([f64; 3], f64)>) -> PyResult<PyPolytope> {
    let mu = convexcal_core::body::DiscreteSurfaceMeasure::new(atoms).map_err(to_py_err)?;
    let sol = solve(&MinkowskiInstance::new(mu)).map_err(to_py_err)?;
    Ok(PyPolytope {
        inner: sol.polytope,
    })
}

/// The Blaschke body K # (-K).
#[pyfunction]
fn blaschke_body(body: &PyPolytope) -> PyResult<PyPolytope> {
    Ok(PyPolytope {
        inner: convexcal_core::minkowski::blaschke_body(&body.inner).map_err(to_py_err)?,
    })
}

#[pymodule]
fn convexcal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add_class::<PyKernel>()?;
    m.add_function(wrap_pyfunction!(apply_operator, m)?)?;
    m.add_function(wrap_pyfunction!(operator_support, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(blaschke_body, m)?)?;
    Ok(())
}
