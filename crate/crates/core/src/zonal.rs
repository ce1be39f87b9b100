//! Zonal kernels on the sphere through their profiles on [-1, 1]: builtin
//! kernels, tabulated profiles with monotone cubic interpolation, Legendre
//! (multiplier) coefficients, convolution against discrete measures, weak
//! positivity and support-function screening, cap smoothing, and the
//! zonal-zonal convolution used by endomorphism composition.
//!
//! Profile convention: a zonal function is `u -> profile(u . e)` where `e`
//! is the pole. Convolving a measure `mu` with a kernel `g` evaluates
//! `sum_i a_i profile(u . u_i)`; no quadrature is involved. Means over the
//! sphere reduce to `(1/2) integral profile dt` in dimension 3.

use crate::body::DiscreteSurfaceMeasure;
use crate::error::{Error, Result};
use crate::geom::{self, add, dot, norm, scale, Vec3};
use crate::quad::{integrate_with_breakpoints, support_grid};
use crate::sphharm::{harmonic_dimension, legendre_all};

/// Parity of a profile under `t -> -t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone)]
enum ProfileKind {
    /// `|t| / 2`: shadow-area (projection body) kernel.
    Projection,
    /// `|t|`: support function of the segment `[-e, e]`.
    SegmentSupport,
    /// `arccos(-t) sqrt(1 - t^2)`: second mean section kernel.
    MeanSection,
    /// Normalized indicator of `[cos alpha, 1]` with unit spherical mass.
    Cap {
        alpha: f64,
        height: f64,
    },
    Constant(f64),
    /// Finite Legendre combination `sum_k b_k P_k(t)` (dimension 3).
    Legendre(Vec<f64>),
    /// Tabulated with monotone cubic (Fritsch-Carlson) interpolation.
    Table(Pchip),
}

/// A zonal kernel profile `Lambda g` on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct ZonalProfile {
    kind: ProfileKind,
    label: String,
}

impl ZonalProfile {
    /// Builtin kernels by name: `projection`, `mean_section_g2`,
    /// `segment_support`, and `cap` (requires the opening angle).
    pub fn builtin(name: &str, alpha: Option<f64>) -> Result<Self> {
        match name {
            "projection" => Ok(Self::projection()),
            "segment_support" => Ok(Self::segment_support()),
            "mean_section_g2" => Ok(Self::mean_section_g2()),
            "cap" => {
                let a = alpha.ok_or_else(|| {
                    Error::InvalidInput("cap kernel needs an opening angle".into())
                })?;
                Self::cap(a)
            }
            other => Err(Error::InvalidInput(format!("unknown kernel '{other}'"))),
        }
    }

    pub fn projection() -> Self {
        ZonalProfile {
            kind: ProfileKind::Projection,
            label: "projection".into(),
        }
    }

    pub fn segment_support() -> Self {
        ZonalProfile {
            kind: ProfileKind::SegmentSupport,
            label: "segment_support".into(),
        }
    }

    pub fn mean_section_g2() -> Self {
        ZonalProfile {
            kind: ProfileKind::MeanSection,
            label: "mean_section_g2".into(),
        }
    }

    /// Spherical-cap kernel of opening angle `alpha` in (0, pi], normalized
    /// to unit mass: `c_0 = 1`, so smoothing preserves total mass.
    pub fn cap(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= std::f64::consts::PI) {
            return Err(Error::InvalidInput(format!(
                "cap angle must lie in (0, pi], got {alpha}"
            )));
        }
        let height = 2.0 / (1.0 - alpha.cos());
        Ok(ZonalProfile {
            kind: ProfileKind::Cap { alpha, height },
            label: format!("cap({alpha})"),
        })
    }

    pub fn constant(c: f64) -> Self {
        ZonalProfile {
            kind: ProfileKind::Constant(c),
            label: format!("const({c})"),
        }
    }

    /// `sum_k b_k P_k(t)`; bandlimited profiles convolve exactly.
    pub fn legendre_combination(coeffs: Vec<f64>, label: &str) -> Self {
        ZonalProfile {
            kind: ProfileKind::Legendre(coeffs),
            label: label.into(),
        }
    }

    /// Tabulated profile; knots must be strictly increasing and span
    /// `[-1, 1]` with both endpoints present.
    pub fn from_table(t: Vec<f64>, value: Vec<f64>, label: &str) -> Result<Self> {
        let p = Pchip::new(t, value)?;
        Ok(ZonalProfile {
            kind: ProfileKind::Table(p),
            label: label.into(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Profile value; the argument is clamped against rounding just outside
    /// `[-1, 1]`.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(-1.0, 1.0);
        match &self.kind {
            ProfileKind::Projection => t.abs() / 2.0,
            ProfileKind::SegmentSupport => t.abs(),
            ProfileKind::MeanSection => (-t).acos() * (1.0 - t * t).max(0.0).sqrt(),
            ProfileKind::Cap { alpha, height } => {
                if t >= alpha.cos() {
                    *height
                } else {
                    0.0
                }
            }
            ProfileKind::Constant(c) => *c,
            ProfileKind::Legendre(b) => {
                let p = legendre_all(3, b.len().saturating_sub(1), t);
                b.iter().zip(p.iter()).map(|(bk, pk)| bk * pk).sum()
            }
            ProfileKind::Table(p) => p.eval(t),
        }
    }

    /// Declared parity, validated on a grid in the tests.
    pub fn parity(&self) -> Option<Parity> {
        match &self.kind {
            ProfileKind::Projection | ProfileKind::SegmentSupport => Some(Parity::Even),
            ProfileKind::Constant(_) => Some(Parity::Even),
            ProfileKind::Legendre(b) => {
                let even = b.iter().skip(1).step_by(2).all(|&x| x == 0.0);
                let odd = b.iter().step_by(2).all(|&x| x == 0.0);
                if even {
                    Some(Parity::Even)
                } else if odd {
                    Some(Parity::Odd)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Interior points where the profile loses smoothness; quadratures
    /// split there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            ProfileKind::Projection | ProfileKind::SegmentSupport => vec![0.0],
            ProfileKind::Cap { alpha, .. } => vec![alpha.cos()],
            ProfileKind::Table(p) => p.x[1..p.x.len() - 1].to_vec(),
            _ => Vec::new(),
        }
    }

    /// Degree of exactness for bandlimited profiles.
    fn bandlimit(&self) -> Option<usize> {
        match &self.kind {
            ProfileKind::Constant(_) => Some(0),
            ProfileKind::Legendre(b) => Some(b.len().saturating_sub(1)),
            _ => None,
        }
    }

    /// Azimuthal (ring) mean: the average of the profile over the circle
    /// `{v : v.e = t}` seen from a direction at polar cosine `s`,
    /// `(1/2pi) int profile(st + sqrt((1-s^2)(1-t^2)) cos phi) dphi`.
    /// Closed forms cover the builtin kernels; the rest integrate adaptively.
    pub fn ring_mean(&self, s: f64, t: f64) -> f64 {
        let s = s.clamp(-1.0, 1.0);
        let t = t.clamp(-1.0, 1.0);
        let a = s * t;
        let b = ((1.0 - s * s) * (1.0 - t * t)).max(0.0).sqrt();
        if b < 1e-15 {
            return self.eval(a);
        }
        match &self.kind {
            ProfileKind::Projection => 0.5 * abs_cos_mean(a, b),
            ProfileKind::SegmentSupport => abs_cos_mean(a, b),
            ProfileKind::Constant(c) => *c,
            ProfileKind::Cap { alpha, height } => {
                let x = (alpha.cos() - a) / b;
                if x <= -1.0 {
                    *height
                } else if x >= 1.0 {
                    0.0
                } else {
                    height * x.acos() / std::f64::consts::PI
                }
            }
            ProfileKind::Legendre(coeffs) => {
                // product formula: ring mean of P_k is P_k(s) P_k(t)
                let kmax = coeffs.len().saturating_sub(1);
                let ps = legendre_all(3, kmax, s);
                let pt = legendre_all(3, kmax, t);
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, bk)| bk * ps[k] * pt[k])
                    .sum()
            }
            _ => {
                // numeric azimuthal mean; the integrand is smooth in phi
                // except where the argument grazes +-1 (phi = 0 or pi)
                let (val, _) = crate::quad::integrate_budgeted(
                    |phi| self.eval(a + b * phi.cos()),
                    0.0,
                    std::f64::consts::PI,
                    1e-12,
                    200,
                );
                val / std::f64::consts::PI
            }
        }
    }

    /// t-breakpoints of `ring_mean(s, .)` for a fixed `s`.
    fn ring_breakpoints(&self, s: f64) -> Vec<f64> {
        let theta_s = s.clamp(-1.0, 1.0).acos();
        match &self.kind {
            ProfileKind::Projection | ProfileKind::SegmentSupport => {
                let r = (1.0 - s * s).max(0.0).sqrt();
                vec![-r, r]
            }
            ProfileKind::Cap { alpha, .. } => {
                vec![(theta_s - alpha).cos(), (theta_s + alpha).cos()]
            }
            ProfileKind::MeanSection => vec![-s, s],
            ProfileKind::Table(p) => p.x[1..p.x.len() - 1].to_vec(),
            _ => Vec::new(),
        }
    }
}

/// Mean of `|a + b cos phi|` over a full period (b >= 0).
fn abs_cos_mean(a: f64, b: f64) -> f64 {
    if a.abs() >= b {
        a.abs()
    } else {
        let r = (a / b).clamp(-1.0, 1.0);
        2.0 / std::f64::consts::PI * (a * r.asin() + (b * b - a * a).max(0.0).sqrt())
    }
}

/// A discrete zonal measure: atoms at polar cosines. The Dirac at the pole
/// is the atom `(1, mass)`.
#[derive(Debug, Clone)]
pub struct ZonalMeasureAtoms {
    pub atoms: Vec<(f64, f64)>,
}

impl ZonalMeasureAtoms {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        for &(t, _) in &atoms {
            if !(-1.0..=1.0).contains(&t) {
                return Err(Error::InvalidInput(format!(
                    "atom at t = {t} outside [-1,1]"
                )));
            }
        }
        Ok(ZonalMeasureAtoms { atoms })
    }

    /// The right-neutral element of zonal convolution.
    pub fn dirac_pole() -> Self {
        ZonalMeasureAtoms {
            atoms: vec![(1.0, 1.0)],
        }
    }

    /// Convolution `(g * mu)` evaluated at polar cosine `s`: a mass-weighted
    /// sum of ring means of the profile.
    pub fn convolve_profile(&self, g: &ZonalProfile, s: f64) -> f64 {
        self.atoms.iter().map(|&(t, m)| m * g.ring_mean(s, t)).sum()
    }

    /// Exact Legendre coefficients `<mu, P_k^n(e . .)>`.
    pub fn legendre_coefficients(&self, n: usize, kmax: usize) -> MultiplierSequence {
        let mut values = vec![0.0; kmax + 1];
        for &(t, m) in &self.atoms {
            let p = legendre_all(n, kmax, t);
            for k in 0..=kmax {
                values[k] += m * p[k];
            }
        }
        MultiplierSequence {
            dimension: n,
            values,
            quad_errors: vec![0.0; kmax + 1],
        }
    }
}

/// Multiplier (Legendre) coefficients of a zonal kernel, with the recorded
/// quadrature error estimates.
#[derive(Debug, Clone)]
pub struct MultiplierSequence {
    pub dimension: usize,
    pub values: Vec<f64>,
    pub quad_errors: Vec<f64>,
}

impl MultiplierSequence {
    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn max_degree(&self) -> usize {
        self.values.len() - 1
    }

    /// Bandlimited injectivity: all multipliers up to the stored degree are
    /// bounded away from zero.
    pub fn all_nonzero(&self, tol: f64) -> bool {
        self.values.iter().all(|c| c.abs() > tol)
    }
}

/// Legendre coefficients of a profile in dimension `n`:
/// `c_k = int g P_k^n w dt / int w dt` with `w = (1-t^2)^((n-3)/2)`,
/// so the constant kernel has `c_0 = 1`. For n = 3 this is
/// `(1/2) int g P_k dt`.
pub fn legendre_coefficients(
    g: &ZonalProfile,
    n: usize,
    kmax: usize,
) -> Result<MultiplierSequence> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("dimension {n} < 3")));
    }
    let exponent = (n as f64 - 3.0) / 2.0;
    let weight = move |t: f64| {
        if n == 3 {
            1.0
        } else {
            (1.0 - t * t).max(0.0).powf(exponent)
        }
    };
    let bp = g.breakpoints();
    let (denom, _) = integrate_with_breakpoints(&weight, -1.0, 1.0, &[], 1e-14);
    let mut values = Vec::with_capacity(kmax + 1);
    let mut errors = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let (num, err) = integrate_with_breakpoints(
            |t| g.eval(t) * legendre_all(n, k, t)[k] * weight(t),
            -1.0,
            1.0,
            &bp,
            1e-14,
        );
        if !num.is_finite() {
            return Err(Error::Numeric(format!(
                "Legendre coefficient {k} of '{}' did not converge",
                g.label()
            )));
        }
        values.push(num / denom);
        errors.push(err / denom);
    }
    Ok(MultiplierSequence {
        dimension: n,
        values,
        quad_errors: errors,
    })
}

/// Zonal convolution of a discrete measure with a kernel at direction `u`:
/// `sum_i a_i profile(u . u_i)`, exact up to floating point.
pub fn convolve_measure(mu: &DiscreteSurfaceMeasure, g: &ZonalProfile, u: Vec3) -> Result<f64> {
    if !geom::is_unit(u, 1e-12) {
        return Err(Error::InvalidInput(
            "direction must be a unit vector".into(),
        ));
    }
    Ok(crate::quad::kahan_sum(
        mu.atoms().iter().map(|&(v, a)| a * g.eval(dot(u, v))),
    ))
}

/// Outcome of the weak-positivity screen.
#[derive(Debug, Clone, Copy)]
pub struct WeakPositivity {
    pub weakly_positive: bool,
    /// A feasible shift `c` with `g(t) + c t >= 0` when one exists.
    pub shift: Option<f64>,
}

/// Decides whether `g(t) + c t >= 0` has a solution `c`, on a dense grid:
/// feasible iff `sup_{t>0} (-g/t) <= inf_{t<0} (-g/t)` and `g(0) >= -tol`.
pub fn weakly_positive(g: &ZonalProfile) -> WeakPositivity {
    let n = 4096;
    let mut max_abs = 0.0f64;
    let mut samples = Vec::with_capacity(n + 2);
    samples.push(-1.0);
    for i in 0..n {
        samples.push(-1.0 + 2.0 * (i as f64 + 0.5) / n as f64);
    }
    samples.push(1.0);
    let values: Vec<f64> = samples.iter().map(|&t| g.eval(t)).collect();
    for &v in &values {
        max_abs = max_abs.max(v.abs());
    }
    let tol = 1e-10 * max_abs.max(1e-300);
    let mut lo = f64::NEG_INFINITY; // c must be >= lo
    let mut hi = f64::INFINITY; // c must be <= hi
    for (&t, &v) in samples.iter().zip(values.iter()) {
        if t > 1e-9 {
            lo = lo.max((-v - tol) / t);
        } else if t < -1e-9 {
            hi = hi.min((-v - tol) / t);
        }
    }
    let origin_ok = g.eval(0.0) >= -tol;
    if lo <= hi && origin_ok {
        let c = if lo <= 0.0 && 0.0 <= hi {
            0.0
        } else {
            0.5 * (lo + hi)
        };
        WeakPositivity {
            weakly_positive: true,
            shift: Some(c),
        }
    } else {
        WeakPositivity {
            weakly_positive: false,
            shift: None,
        }
    }
}

/// A sublinearity violation of the zonal extension of a profile.
#[derive(Debug, Clone, Copy)]
pub struct SublinearityViolation {
    pub x: Vec3,
    pub y: Vec3,
    /// `h(x+y) - h(x) - h(y) > 0`.
    pub gap: f64,
}

/// Outcome of the sampled support-function screen. A pass is evidence on
/// the tested pairs, not a proof.
#[derive(Debug, Clone)]
pub struct SupportCheck {
    pub pass: bool,
    pub violation: Option<SublinearityViolation>,
    pub pairs_tested: usize,
}

/// Tests sublinearity `h(x+y) <= h(x) + h(y)` of the 1-homogeneous zonal
/// extension `h(x) = |x| g(x.e/|x|)` over a deterministic 146-direction
/// pair grid (at several scale combinations) plus seeded random pairs.
pub fn is_support_profile(g: &ZonalProfile, seed: u64, random_pairs: usize) -> SupportCheck {
    let h = |x: Vec3| -> f64 {
        let r = norm(x);
        if r < 1e-300 {
            0.0
        } else {
            r * g.eval(x[2] / r)
        }
    };
    let mut scale_ref = 0.0f64;
    let grid = support_grid(146);
    for &u in &grid {
        scale_ref = scale_ref.max(h(u).abs());
    }
    let tol = 1e-9 * scale_ref.max(1e-300);
    let mut tested = 0usize;
    let mut check = |x: Vec3, y: Vec3| -> Option<SublinearityViolation> {
        tested += 1;
        let gap = h(add(x, y)) - h(x) - h(y);
        if gap > tol {
            Some(SublinearityViolation { x, y, gap })
        } else {
            None
        }
    };
    for i in 0..grid.len() {
        for j in (i + 1)..grid.len() {
            for (sx, sy) in [(1.0, 1.0), (1.0, 0.35), (0.35, 1.0)] {
                if let Some(v) = check(scale(grid[i], sx), scale(grid[j], sy)) {
                    return SupportCheck {
                        pass: false,
                        violation: Some(v),
                        pairs_tested: tested,
                    };
                }
            }
        }
    }
    let mut rng = crate::sample::rng(seed);
    for _ in 0..random_pairs {
        let x = scale(
            crate::sample::unit_vector(&mut rng),
            0.2 + 1.8 * rand::Rng::gen::<f64>(&mut rng),
        );
        let y = scale(
            crate::sample::unit_vector(&mut rng),
            0.2 + 1.8 * rand::Rng::gen::<f64>(&mut rng),
        );
        if let Some(v) = check(x, y) {
            return SupportCheck {
                pass: false,
                violation: Some(v),
                pairs_tested: tested,
            };
        }
    }
    SupportCheck {
        pass: true,
        violation: None,
        pairs_tested: tested,
    }
}

/// A discrete measure mollified by the cap kernel: a smooth density on the
/// sphere with the same total mass.
#[derive(Debug, Clone)]
pub struct SmoothedMeasure {
    atoms: Vec<(Vec3, f64)>,
    cap: ZonalProfile,
    pub alpha: f64,
}

/// Convolves `mu` with the unit-mass cap kernel of angle `alpha`.
pub fn smooth(mu: &DiscreteSurfaceMeasure, alpha: f64) -> Result<SmoothedMeasure> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidInput("cap angle must be positive".into()));
    }
    Ok(SmoothedMeasure {
        atoms: mu.atoms().to_vec(),
        cap: ZonalProfile::cap(alpha.min(std::f64::consts::PI))?,
        alpha,
    })
}

impl SmoothedMeasure {
    /// Density with respect to the probability measure.
    pub fn density(&self, u: Vec3) -> f64 {
        self.atoms
            .iter()
            .map(|&(v, a)| a * self.cap.eval(dot(u, v)))
            .sum()
    }

    /// Total mass `sum_i a_i c_0(cap)`; the 1D cap integral is evaluated by
    /// quadrature rather than assumed.
    pub fn total_mass(&self) -> f64 {
        let (c0, _) = integrate_with_breakpoints(
            |t| self.cap.eval(t),
            -1.0,
            1.0,
            &self.cap.breakpoints(),
            1e-14,
        );
        0.5 * c0 * self.atoms.iter().map(|&(_, a)| a).sum::<f64>()
    }

    /// Evaluation of the smoothed measure convolved with a further kernel:
    /// `((mu * cap) * g)(u) = sum_i a_i (cap * g)(u . u_i)`.
    pub fn convolve_with(&self, g: &ZonalProfile, u: Vec3) -> f64 {
        let conv = ProfileConvolution::new(&self.cap, g);
        self.atoms
            .iter()
            .map(|&(v, a)| a * conv.eval(dot(u, v)))
            .sum()
    }
}

/// Zonal-zonal convolution `q = a * b` as an evaluable profile:
/// `q(s) = (1/2) int a(t) ringmean_b(s, t) dt`.
///
/// When either factor is bandlimited the product of Legendre coefficients
/// gives `q` exactly as a finite series; otherwise the 1D integral runs
/// adaptively with both factors' breakpoints registered.
pub struct ProfileConvolution {
    mode: ConvMode,
}

enum ConvMode {
    Series(Vec<f64>),
    Quadrature {
        a: ZonalProfile,
        b: ZonalProfile,
        a_breaks: Vec<f64>,
        /// Absolute tolerance matched to the factor magnitudes so the outer
        /// integral never chases the inner ring-mean noise floor.
        tol: f64,
    },
}

impl ProfileConvolution {
    pub fn new(a: &ZonalProfile, b: &ZonalProfile) -> Self {
        let band = a
            .bandlimit()
            .map(|d| (a, b, d))
            .or_else(|| b.bandlimit().map(|d| (b, a, d)));
        if let Some((banded, other, deg)) = band {
            // q_k = (2k+1) c_k(banded) c_k(other); series in P_k
            let cb = legendre_coefficients(banded, 3, deg).expect("bandlimited coefficients");
            let co = legendre_coefficients(other, 3, deg).expect("kernel coefficients");
            let coeffs: Vec<f64> = (0..=deg)
                .map(|k| (2 * k + 1) as f64 * cb.value(k) * co.value(k))
                .collect();
            ProfileConvolution {
                mode: ConvMode::Series(coeffs),
            }
        } else {
            let probe = |g: &ZonalProfile| -> f64 {
                (0..33)
                    .map(|i| g.eval(-1.0 + 2.0 * i as f64 / 32.0).abs())
                    .fold(0.0, f64::max)
            };
            let scale = (probe(a) * probe(b)).max(1e-300);
            ProfileConvolution {
                mode: ConvMode::Quadrature {
                    a: a.clone(),
                    b: b.clone(),
                    a_breaks: a.breakpoints(),
                    tol: 3e-11 * scale,
                },
            }
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match &self.mode {
            ConvMode::Series(coeffs) => {
                let p = legendre_all(3, coeffs.len().saturating_sub(1), s.clamp(-1.0, 1.0));
                coeffs.iter().zip(p.iter()).map(|(c, pk)| c * pk).sum()
            }
            ConvMode::Quadrature {
                a,
                b,
                a_breaks,
                tol,
            } => {
                let mut bp = a_breaks.clone();
                bp.extend(b.ring_breakpoints(s));
                bp.retain(|t| t.is_finite());
                bp.sort_by(|x, y| x.partial_cmp(y).unwrap());
                bp.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
                let n_seg = bp.len() + 1;
                let mut total = 0.0;
                let mut lo = -1.0;
                for i in 0..n_seg {
                    let hi = if i < bp.len() { bp[i] } else { 1.0 };
                    if hi > lo + 1e-14 {
                        let (v, _) = crate::quad::integrate_budgeted(
                            |t| a.eval(t) * b.ring_mean(s, t),
                            lo,
                            hi,
                            tol / n_seg as f64,
                            3000,
                        );
                        total += v;
                    }
                    lo = hi;
                }
                0.5 * total
            }
        }
    }
}

/// Multiplier sequence of the convolution operator `nu -> nu * mu` for an
/// atomic zonal measure (wrapper around the exact atom sums).
pub fn atomic_multipliers(mu: &ZonalMeasureAtoms, kmax: usize) -> MultiplierSequence {
    mu.legendre_coefficients(3, kmax)
}

/// Dimension constant `N(n, k)` re-exported for multiplier bookkeeping.
pub fn multiplicity(n: usize, k: usize) -> usize {
    harmonic_dimension(n, k)
}

// ---------------------------------------------------------------------------
// monotone cubic interpolation (Fritsch-Carlson)

#[derive(Debug, Clone)]
struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 4 {
            return Err(Error::InvalidInput(
                "table needs at least 4 equal-length knot/value arrays".into(),
            ));
        }
        if (x[0] + 1.0).abs() > 1e-9 || (x[x.len() - 1] - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(
                "table must include the endpoints -1 and 1".into(),
            ));
        }
        for w in x.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidInput(
                    "table knots must strictly increase".into(),
                ));
            }
        }
        let n = x.len();
        let mut h = vec![0.0; n - 1];
        let mut delta = vec![0.0; n - 1];
        for i in 0..n - 1 {
            h[i] = x[i + 1] - x[i];
            delta[i] = (y[i + 1] - y[i]) / h[i];
        }
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] <= 0.0 {
                d[i] = 0.0;
            } else {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
        d[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        Ok(Pchip { x, y, d })
    }

    fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let t = t.clamp(self.x[0], self.x[n - 1]);
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.x[mid] <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h = self.x[lo + 1] - self.x[lo];
        let s = (t - self.x[lo]) / h;
        let (y0, y1) = (self.y[lo], self.y[lo + 1]);
        let (d0, d1) = (self.d[lo], self.d[lo + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + h * d0 * (s3 - 2.0 * s2 + s)
            + y1 * (-2.0 * s3 + 3.0 * s2)
            + h * d1 * (s3 - s2)
    }
}

fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0.abs() < (3.0 * d0).abs() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}
