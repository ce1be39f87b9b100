//! Spherical harmonics on S^2: Legendre polynomials of general dimension,
//! a real orthonormal basis under the probability measure, truncated
//! expansions with band projections and multiplier transforms, and the
//! second-order operator that maps support functions to first-order area
//! measure densities.
//!
//! Normalization: the constant function 1 is the (0,0) basis element, so the
//! degree-0 coefficient of a function is its spherical mean, and expanding a
//! measure yields its total mass at degree 0. The addition theorem reads
//! `sum_m Y_km(u) Y_km(v) = (2k+1) P_k(u.v)`.

use crate::body::DiscreteSurfaceMeasure;
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::quad::SphereRule;

/// Dimension of the space of spherical harmonics of degree `k` on `S^{n-1}`.
pub fn harmonic_dimension(n: usize, k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    if k == 1 {
        return n;
    }
    let binom = |top: usize, bot: usize| -> usize {
        if top < bot {
            return 0;
        }
        let mut acc = 1usize;
        for i in 0..bot {
            acc = acc * (top - i) / (i + 1);
        }
        acc
    };
    binom(n + k - 1, k) - binom(n + k - 3, k - 2)
}

/// Legendre polynomial of dimension `n >= 3` and degree `k`, normalized so
/// `P_k^n(1) = 1`. Evaluated by the stable three-term recurrence
/// `(k+n-2) P_{k+1} = (2k+n-2) t P_k - k P_{k-1}`.
pub fn legendre(n: usize, k: usize, t: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("dimension {n} < 3")));
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::InvalidInput(format!("t = {t} outside [-1, 1]")));
    }
    Ok(legendre_all(n, k, t)[k])
}

/// All values `P_0^n(t) ... P_kmax^n(t)`.
pub fn legendre_all(n: usize, kmax: usize, t: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(kmax + 1);
    p.push(1.0);
    if kmax == 0 {
        return p;
    }
    p.push(t);
    for k in 1..kmax {
        let next = ((2 * k + n - 2) as f64 * t * p[k] - k as f64 * p[k - 1]) / (k + n - 2) as f64;
        p.push(next);
    }
    p
}

/// Eigenvalue of the operator `Delta_0 + (n-1)` on degree-`k` harmonics,
/// where `Delta_0` is the Laplace-Beltrami operator (eigenvalue
/// `-k(k+n-2)`, checked numerically in the tests).
pub fn delta1_multiplier(n: usize, k: usize) -> f64 {
    (n - 1) as f64 - (k * (k + n - 2)) as f64
}

/// Real orthonormal basis on S^2 under the probability measure, evaluated by
/// fully normalized associated-Legendre recurrences.
#[derive(Debug, Clone)]
pub struct RealBasis {
    pub kmax: usize,
}

/// Packed index of `(k, m)` with `m` in `-k..=k`.
#[inline]
pub fn basis_index(k: usize, m: isize) -> usize {
    k * k + (m + k as isize) as usize
}

impl RealBasis {
    pub fn new(kmax: usize) -> Self {
        RealBasis { kmax }
    }

    pub fn len(&self) -> usize {
        (self.kmax + 1) * (self.kmax + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Evaluates the full table `Y_km(u)` into `out` (length `(K+1)^2`).
    pub fn eval_into(&self, u: Vec3, out: &mut [f64]) {
        let kmax = self.kmax;
        debug_assert_eq!(out.len(), self.len());
        let t = u[2].clamp(-1.0, 1.0);
        let rho = (u[0] * u[0] + u[1] * u[1]).sqrt();
        let (cphi, sphi) = if rho > 1e-300 {
            (u[0] / rho, u[1] / rho)
        } else {
            (1.0, 0.0)
        };
        // pbar[m][k] fully normalized: the mean square of
        // pbar_km * {sqrt2 cos(m phi), 1, sqrt2 sin(m phi)} over the sphere is 1
        let mut pbar = vec![vec![0.0f64; kmax + 1]; kmax + 1];
        pbar[0][0] = 1.0;
        for m in 1..=kmax {
            pbar[m][m] = ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * rho * pbar[m - 1][m - 1];
        }
        for m in 0..kmax {
            pbar[m][m + 1] = ((2 * m + 3) as f64).sqrt() * t * pbar[m][m];
        }
        for m in 0..=kmax {
            for k in (m + 2)..=kmax {
                let km = (k * k - m * m) as f64;
                let a = (((2 * k - 1) * (2 * k + 1)) as f64 / km).sqrt();
                let b = (((2 * k + 1) as f64 * ((k - 1) * (k - 1) - m * m) as f64)
                    / ((2 * k - 3) as f64 * km))
                    .sqrt();
                pbar[m][k] = a * t * pbar[m][k - 1] - b * pbar[m][k - 2];
            }
        }
        // azimuthal factors by recurrence
        let mut cm = vec![1.0f64; kmax + 1];
        let mut sm = vec![0.0f64; kmax + 1];
        for m in 1..=kmax {
            cm[m] = cm[m - 1] * cphi - sm[m - 1] * sphi;
            sm[m] = sm[m - 1] * cphi + cm[m - 1] * sphi;
        }
        let sqrt2 = std::f64::consts::SQRT_2;
        for k in 0..=kmax {
            out[basis_index(k, 0)] = pbar[0][k];
            for m in 1..=k {
                let v = pbar[m][k];
                out[basis_index(k, m as isize)] = sqrt2 * v * cm[m];
                out[basis_index(k, -(m as isize))] = sqrt2 * v * sm[m];
            }
        }
    }

    pub fn eval(&self, u: Vec3) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.eval_into(u, &mut out);
        out
    }
}

/// How an expansion's coefficients were produced.
#[derive(Debug, Clone, PartialEq)]
pub enum GridId {
    /// Exact atom sums (measure route).
    Exact,
    /// Product quadrature rule of the given order.
    Product { n_theta: usize, n_phi: usize },
    /// Synthesized directly from coefficients.
    Synthetic,
}

/// Truncated real spherical-harmonic expansion on S^2.
#[derive(Debug, Clone)]
pub struct HarmonicExpansion {
    pub kmax: usize,
    pub coeffs: Vec<f64>,
    pub grid: GridId,
}

impl HarmonicExpansion {
    pub fn zero(kmax: usize) -> Self {
        HarmonicExpansion {
            kmax,
            coeffs: vec![0.0; (kmax + 1) * (kmax + 1)],
            grid: GridId::Synthetic,
        }
    }

    /// Expansion of a function by quadrature inner products on `rule`.
    pub fn from_fn<F: FnMut(Vec3) -> f64>(mut f: F, kmax: usize, rule: &SphereRule) -> Self {
        let basis = RealBasis::new(kmax);
        let mut coeffs = vec![0.0; basis.len()];
        let mut comp = vec![0.0; basis.len()];
        let mut ytab = vec![0.0; basis.len()];
        for (&u, &w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let fv = f(u) * w;
            basis.eval_into(u, &mut ytab);
            for (i, y) in ytab.iter().enumerate() {
                // Kahan accumulation per coefficient
                let x = fv * y - comp[i];
                let t = coeffs[i] + x;
                comp[i] = (t - coeffs[i]) - x;
                coeffs[i] = t;
            }
        }
        HarmonicExpansion {
            kmax,
            coeffs,
            grid: GridId::Product {
                n_theta: rule.n_theta,
                n_phi: rule.n_phi,
            },
        }
    }

    /// Expansion of a discrete measure by exact atom sums:
    /// the `(k,m)` coefficient is `sum_i a_i Y_km(u_i)`.
    pub fn from_measure(mu: &DiscreteSurfaceMeasure, kmax: usize) -> Self {
        let basis = RealBasis::new(kmax);
        let mut coeffs = vec![0.0; basis.len()];
        let mut ytab = vec![0.0; basis.len()];
        for &(u, a) in mu.atoms() {
            basis.eval_into(u, &mut ytab);
            for (i, y) in ytab.iter().enumerate() {
                coeffs[i] += a * y;
            }
        }
        HarmonicExpansion {
            kmax,
            coeffs,
            grid: GridId::Exact,
        }
    }

    pub fn coeff(&self, k: usize, m: isize) -> f64 {
        self.coeffs[basis_index(k, m)]
    }

    pub fn eval(&self, u: Vec3) -> f64 {
        let basis = RealBasis::new(self.kmax);
        let ytab = basis.eval(u);
        self.coeffs
            .iter()
            .zip(ytab.iter())
            .map(|(c, y)| c * y)
            .sum()
    }

    /// Orthogonal projection onto the degree-`k` band.
    pub fn project(&self, k: usize) -> Result<HarmonicExpansion> {
        if k > self.kmax {
            return Err(Error::InvalidInput(format!(
                "band {k} exceeds max degree {}",
                self.kmax
            )));
        }
        let mut out = HarmonicExpansion::zero(self.kmax);
        for m in -(k as isize)..=(k as isize) {
            let i = basis_index(k, m);
            out.coeffs[i] = self.coeffs[i];
        }
        Ok(out)
    }

    /// Band-wise scaling by a multiplier sequence; the sequence must cover
    /// every band of the expansion.
    pub fn apply_multiplier(&self, c: &crate::zonal::MultiplierSequence) -> Result<Self> {
        if c.max_degree() < self.kmax {
            return Err(Error::InvalidInput(format!(
                "multiplier sequence covers degrees up to {}, expansion needs {}",
                c.max_degree(),
                self.kmax
            )));
        }
        let mut out = self.clone();
        out.grid = GridId::Synthetic;
        for k in 0..=self.kmax {
            let ck = c.value(k);
            for m in -(k as isize)..=(k as isize) {
                out.coeffs[basis_index(k, m)] *= ck;
            }
        }
        Ok(out)
    }

    /// Scales each band by an arbitrary function of the degree.
    pub fn scale_bands<F: Fn(usize) -> f64>(&self, f: F) -> Self {
        let mut out = self.clone();
        out.grid = GridId::Synthetic;
        for k in 0..=self.kmax {
            let ck = f(k);
            for m in -(k as isize)..=(k as isize) {
                out.coeffs[basis_index(k, m)] *= ck;
            }
        }
        out
    }

    /// The operator `Delta_0 + (n-1)` for n = 3: band `k` is scaled by
    /// `2 - k(k+1)`. Applied to a support function it yields the density of
    /// the first-order area measure in the mean-normalized convention.
    pub fn delta1(&self) -> Self {
        self.scale_bands(|k| delta1_multiplier(3, k))
    }

    /// Euclidean norm of the degree-`k` coefficient block.
    pub fn band_norm(&self, k: usize) -> f64 {
        let mut s = 0.0;
        for m in -(k as isize)..=(k as isize) {
            let c = self.coeffs[basis_index(k, m)];
            s += c * c;
        }
        s.sqrt()
    }

    /// Parseval sum `sum c^2` (the squared L^2 norm of the truncation).
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Steiner point encoded in the degree-1 block: `h({s}, u) = s . u`.
    pub fn steiner_from_band1(&self) -> Vec3 {
        let r3 = 3.0_f64.sqrt();
        [
            r3 * self.coeff(1, 1),
            r3 * self.coeff(1, -1),
            r3 * self.coeff(1, 0),
        ]
    }

    /// Pointwise linear combination `self + lambda * other`.
    pub fn add_scaled(&self, other: &HarmonicExpansion, lambda: f64) -> Result<Self> {
        if other.kmax != self.kmax {
            return Err(Error::InvalidInput("mismatched expansion degrees".into()));
        }
        let mut out = self.clone();
        out.grid = GridId::Synthetic;
        for (c, o) in out.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *c += lambda * o;
        }
        Ok(out)
    }
}

/// Spectral representation of a smooth convex body: harmonic expansions of
/// the support function and (when available) of the surface area measure.
#[derive(Debug, Clone)]
pub struct SpectralBody {
    pub support: HarmonicExpansion,
    /// Expansion of the surface area measure (total mass at degree 0);
    /// `None` for bodies obtained from band operations.
    pub surface: Option<HarmonicExpansion>,
}

impl SpectralBody {
    /// Spectral data of an axis-aligned ellipsoid: both the support function
    /// and the surface-measure density have closed forms, expanded on `rule`.
    pub fn from_ellipsoid(
        ell: &crate::ellipsoid::Ellipsoid,
        kmax: usize,
        rule: &SphereRule,
    ) -> Self {
        let support = HarmonicExpansion::from_fn(|u| ell.support(u), kmax, rule);
        // measure convention: density with respect to the probability
        // measure is omega_3 times the Hausdorff density
        let surf =
            HarmonicExpansion::from_fn(|u| crate::OMEGA_3 * ell.surface_density(u), kmax, rule);
        SpectralBody {
            support,
            surface: Some(surf),
        }
    }

    pub fn from_ball(r: f64, kmax: usize) -> Self {
        let mut support = HarmonicExpansion::zero(kmax);
        support.coeffs[0] = r;
        let mut surf = HarmonicExpansion::zero(kmax);
        surf.coeffs[0] = crate::OMEGA_3 * r * r;
        SpectralBody {
            support,
            surface: Some(surf),
        }
    }

    pub fn from_support(support: HarmonicExpansion) -> Self {
        SpectralBody {
            support,
            surface: None,
        }
    }

    pub fn kmax(&self) -> usize {
        self.support.kmax
    }

    /// Mean width quermassintegral `W_2 = kappa_3 * mean(h)`.
    pub fn w2(&self) -> f64 {
        crate::KAPPA_3 * self.support.coeff(0, 0)
    }

    /// `W_1 = (1/3) <h, S_1>` through the spectral identity
    /// `W_1 = (2 pi / 3) sum_k (2 - k(k+1)) |h_k|^2`.
    pub fn w1(&self) -> f64 {
        let mut s = 0.0;
        for k in 0..=self.support.kmax {
            s += delta1_multiplier(3, k) * self.support.band_norm(k).powi(2);
        }
        2.0 * std::f64::consts::PI / 3.0 * s
    }

    /// `W_1` from the surface-measure mass when the measure expansion is
    /// available; cross-checks [`Self::w1`].
    pub fn w1_from_surface(&self) -> Option<f64> {
        self.surface.as_ref().map(|s| s.coeff(0, 0) / 3.0)
    }

    /// Volume `V = (1/3) <h, S_2>` via the Parseval pairing of the two
    /// expansions.
    pub fn volume(&self) -> Option<f64> {
        self.surface.as_ref().map(|s| {
            self.support
                .coeffs
                .iter()
                .zip(s.coeffs.iter())
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / 3.0
        })
    }

    pub fn steiner_point(&self) -> Vec3 {
        self.support.steiner_from_band1()
    }
}

/// Distance between the Steiner point encoded in the k = 1 block and one
/// computed elsewhere; a structural invariant of support expansions.
pub fn steiner_consistency(h: &HarmonicExpansion, steiner_quadrature: Vec3) -> f64 {
    let s = h.steiner_from_band1();
    crate::geom::dist(s, steiner_quadrature)
}

/// Max residual of the Funk-Hecke identity `(H * g)(u) = c_k H(u)` over
/// degree-`k` basis harmonics and a deterministic test grid.
///
/// The convolution integral is evaluated with a pole-aligned rule: azimuthal
/// averages of `H` around `u` (exact for trigonometric polynomials), then an
/// adaptive 1D integral against the kernel profile with its breakpoints.
pub fn funk_hecke_residual(g: &crate::zonal::ZonalProfile, k: usize, c_k: f64) -> f64 {
    let basis = RealBasis::new(k);
    let dirs = crate::quad::support_grid(26);
    let n_phi = (2 * k + 2).max(4);
    let mut worst = 0.0f64;
    for &u in &dirs {
        let ytab_u = basis.eval(u);
        for m in -(k as isize)..=(k as isize) {
            let idx = basis_index(k, m);
            let (val, _err) = crate::quad::integrate_with_breakpoints(
                |t| {
                    // azimuthal mean of Y_km about u at polar cosine t;
                    // exact for trigonometric polynomials of degree < n_phi
                    let nodes = crate::quad::ring_nodes(u, t, n_phi);
                    let mut acc = 0.0;
                    let mut ytab = vec![0.0; basis.len()];
                    for &v in &nodes {
                        basis.eval_into(v, &mut ytab);
                        acc += ytab[idx];
                    }
                    0.5 * g.eval(t) * acc / nodes.len() as f64
                },
                -1.0,
                1.0,
                &g.breakpoints(),
                1e-13,
            );
            worst = worst.max((val - c_k * ytab_u[idx]).abs());
        }
    }
    worst
}
