//! Axis-aligned ellipsoids as smooth test bodies.
//!
//! For `E = {x : (x1/a)^2 + (x2/b)^2 + (x3/c)^2 <= 1}` the support function
//! is `h(u) = sqrt(a^2 u1^2 + b^2 u2^2 + c^2 u3^2)` and the classical closed
//! forms below give the surface-area-measure density and the trace of the
//! reverse Weingarten map, which the spectral routines need.

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::KAPPA_3;

#[derive(Debug, Clone, Copy)]
pub struct Ellipsoid {
    pub semiaxes: [f64; 3],
}

impl Ellipsoid {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(Error::InvalidInput("semiaxes must be positive".into()));
        }
        Ok(Ellipsoid {
            semiaxes: [a, b, c],
        })
    }

    pub fn ball(r: f64) -> Self {
        Ellipsoid {
            semiaxes: [r, r, r],
        }
    }

    #[inline]
    pub fn support(&self, u: Vec3) -> f64 {
        let [a, b, c] = self.semiaxes;
        (a * a * u[0] * u[0] + b * b * u[1] * u[1] + c * c * u[2] * u[2]).sqrt()
    }

    /// Density of the surface area measure with respect to the raw spherical
    /// (Hausdorff) measure at outer normal `u`: the product of the principal
    /// radii of curvature, `(abc)^2 / h(u)^4`.
    #[inline]
    pub fn surface_density(&self, u: Vec3) -> f64 {
        let [a, b, c] = self.semiaxes;
        let h = self.support(u);
        (a * b * c).powi(2) / h.powi(4)
    }

    /// Trace of the reverse Weingarten map (sum of principal radii) at outer
    /// normal `u`; equals the Euclidean Laplacian of the 1-homogeneous
    /// support extension.
    #[inline]
    pub fn radii_sum(&self, u: Vec3) -> f64 {
        let [a, b, c] = self.semiaxes;
        let h = self.support(u);
        let q = a.powi(4) * u[0] * u[0] + b.powi(4) * u[1] * u[1] + c.powi(4) * u[2] * u[2];
        (a * a + b * b + c * c) / h - q / h.powi(3)
    }

    pub fn volume(&self) -> f64 {
        let [a, b, c] = self.semiaxes;
        KAPPA_3 * a * b * c
    }
}

impl crate::body::SupportFunction for Ellipsoid {
    fn support(&self, u: Vec3) -> f64 {
        Ellipsoid::support(self, u)
    }
}
