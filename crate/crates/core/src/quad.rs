//! Quadrature: Gauss-Legendre rules, adaptive Gauss-Kronrod on intervals with
//! registered breakpoints, and the product rule on the unit sphere.
//!
//! The sphere rule is the single source of truth for spherical means across
//! the toolkit: Gauss-Legendre in the polar cosine times a uniform azimuth
//! grid, normalized to the rotation-invariant probability measure. A rule
//! with `n_theta` x `n_phi` nodes integrates every spherical harmonic of
//! degree below `min(2 n_theta, n_phi)` exactly.

use crate::geom::{orthonormal_frame, scale, Vec3};

/// Gauss-Legendre nodes and weights on [-1, 1] (weights sum to 2).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_p_and_dp(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_p_and_dp(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_p_and_dp(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

// Gauss 7 / Kronrod 15 pair (positive abscissae; symmetric).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let fa = f(c - x);
        let fb = f(c + x);
        kronrod += WGK[j] * (fa + fb);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (fa + fb);
        }
    }
    (kronrod * h, (kronrod - gauss).abs() * h.abs())
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` to absolute
/// tolerance `tol`. Returns the value and an error estimate. The number of
/// panels is budgeted so noise-limited integrands terminate.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    integrate_budgeted(f, a, b, tol, 4000)
}

pub fn integrate_budgeted<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> (f64, f64) {
    fn rec<F: FnMut(f64) -> f64>(
        f: &mut F,
        a: f64,
        b: f64,
        tol: f64,
        depth: usize,
        whole: (f64, f64),
        budget: &mut usize,
    ) -> (f64, f64) {
        let (value, err) = whole;
        if err <= tol || depth >= 40 || (b - a).abs() < 1e-15 || *budget == 0 {
            return (value, err);
        }
        *budget -= 1;
        let c = 0.5 * (a + b);
        let left = gk15(f, a, c);
        let right = gk15(f, c, b);
        let l = rec(f, a, c, 0.5 * tol, depth + 1, left, budget);
        let r = rec(f, c, b, 0.5 * tol, depth + 1, right, budget);
        (l.0 + r.0, l.1 + r.1)
    }
    let whole = gk15(&mut f, a, b);
    let mut budget = budget;
    rec(&mut f, a, b, tol, 0, whole, &mut budget)
}

/// Adaptive integral over `[a, b]` split at the supplied interior
/// breakpoints (points where the integrand loses smoothness).
pub fn integrate_with_breakpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> (f64, f64) {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&t| t > a + 1e-14 && t < b - 1e-14)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
    let mut total = 0.0;
    let mut err = 0.0;
    let mut lo = a;
    let n = cuts.len() + 1;
    for i in 0..n {
        let hi = if i < cuts.len() { cuts[i] } else { b };
        let (v, e) = integrate(&mut f, lo, hi, tol / n as f64);
        total += v;
        err += e;
        lo = hi;
    }
    (total, err)
}

/// Compensated (Kahan) summation in a fixed order.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for x in xs {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Product quadrature rule on S^2 for the invariant probability measure.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub nodes: Vec<Vec3>,
    /// Probability weights; they sum to 1.
    pub weights: Vec<f64>,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl SphereRule {
    /// Gauss-Legendre x uniform-azimuth product rule.
    pub fn product(n_theta: usize, n_phi: usize) -> Self {
        let (t, wt) = gauss_legendre(n_theta);
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (ti, wi) in t.iter().zip(wt.iter()) {
            let s = (1.0 - ti * ti).max(0.0).sqrt();
            let w = wi / 2.0 / n_phi as f64;
            for j in 0..n_phi {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
                nodes.push([s * phi.cos(), s * phi.sin(), *ti]);
                weights.push(w);
            }
        }
        SphereRule {
            nodes,
            weights,
            n_theta,
            n_phi,
        }
    }

    /// Default rule shared by the body and harmonic modules.
    pub fn default_rule() -> Self {
        Self::product(64, 128)
    }

    /// Spherical mean of `f` with respect to the probability measure.
    pub fn mean<F: FnMut(Vec3) -> f64>(&self, mut f: F) -> f64 {
        kahan_sum(
            self.nodes
                .iter()
                .zip(self.weights.iter())
                .map(|(&u, &w)| w * f(u)),
        )
    }

    /// Mean of a vector-valued function.
    pub fn mean_vec<F: FnMut(Vec3) -> Vec3>(&self, mut f: F) -> Vec3 {
        let mut acc = [0.0; 3];
        let mut c = [0.0; 3];
        for (&u, &w) in self.nodes.iter().zip(self.weights.iter()) {
            let v = f(u);
            for i in 0..3 {
                let y = w * v[i] - c[i];
                let t = acc[i] + y;
                c[i] = (t - acc[i]) - y;
                acc[i] = t;
            }
        }
        acc
    }
}

/// Deterministic spiral grid of `n` roughly equidistributed directions.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// The 26 octahedral symmetry directions (axes, edge midpoints, corners).
pub fn octahedral_directions() -> Vec<Vec3> {
    let mut dirs = Vec::with_capacity(26);
    for s in [1.0, -1.0] {
        dirs.push([s, 0.0, 0.0]);
        dirs.push([0.0, s, 0.0]);
        dirs.push([0.0, 0.0, s]);
    }
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    for s1 in [1.0f64, -1.0] {
        for s2 in [1.0f64, -1.0] {
            dirs.push([s1 * r2, s2 * r2, 0.0]);
            dirs.push([s1 * r2, 0.0, s2 * r2]);
            dirs.push([0.0, s1 * r2, s2 * r2]);
        }
    }
    let r3 = 1.0 / 3.0_f64.sqrt();
    for s1 in [1.0f64, -1.0] {
        for s2 in [1.0f64, -1.0] {
            for s3 in [1.0f64, -1.0] {
                dirs.push([s1 * r3, s2 * r3, s3 * r3]);
            }
        }
    }
    dirs
}

/// Deterministic direction grid of exactly `n` points that contains the 26
/// octahedral directions (so axis-aligned facets are sampled exactly), padded
/// with spiral points.
pub fn support_grid(n: usize) -> Vec<Vec3> {
    let base = octahedral_directions();
    if n <= base.len() {
        return base.into_iter().take(n).collect();
    }
    let mut dirs = base;
    // Padding points are pulled from a slightly larger spiral so collisions
    // with the octahedral set can be skipped while still reaching n.
    let spiral = fibonacci_sphere(n + 32);
    for p in spiral {
        if dirs.len() == n {
            break;
        }
        let collide = dirs.iter().any(|&d| crate::geom::dot(d, p) > 1.0 - 1e-12);
        if !collide {
            dirs.push(p);
        }
    }
    dirs
}

/// Nodes of an azimuthal ring rule around the axis `u` at polar cosine `t`:
/// `n_phi` equally spaced points on the circle `{v : v . u = t}`.
pub fn ring_nodes(u: Vec3, t: f64, n_phi: usize) -> Vec<Vec3> {
    let (e1, e2) = orthonormal_frame(u);
    let s = (1.0 - t * t).max(0.0).sqrt();
    (0..n_phi)
        .map(|j| {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
            let mut v = scale(u, t);
            for i in 0..3 {
                v[i] += s * (phi.cos() * e1[i] + phi.sin() * e2[i]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::dot;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // degree 15 polynomial t^14
        let val: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(14)).sum();
        assert!((val - 2.0 / 15.0).abs() < 1e-14);
        let odd: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(13)).sum();
        assert!(odd.abs() < 1e-15);
    }

    #[test]
    fn gk_adaptive_handles_kinks_with_breakpoints() {
        let (v, _) = integrate_with_breakpoints(|t| t.abs(), -1.0, 1.0, &[0.0], 1e-13);
        assert!((v - 1.0).abs() < 1e-14);
        let (v, _) = integrate(|t| (1.0 - t * t).sqrt(), -1.0, 1.0, 1e-12);
        assert!((v - std::f64::consts::PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn sphere_rule_is_a_probability_measure() {
        let rule = SphereRule::product(16, 32);
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        // mean of u_3^2 over the sphere is 1/3
        let m = rule.mean(|u| u[2] * u[2]);
        assert!((m - 1.0 / 3.0).abs() < 1e-14);
        // degree-1 harmonics average to zero
        assert!(rule.mean(|u| u[0]).abs() < 1e-15);
    }

    #[test]
    fn sphere_rule_kills_rotated_harmonics() {
        // mean of (u.a)^2 is |a|^2/3 for any axis, not just the pole
        let rule = SphereRule::product(8, 16);
        let a = crate::geom::normalize([0.3, -0.5, 0.8]).unwrap();
        let m = rule.mean(|u| dot(u, a) * dot(u, a));
        assert!((m - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn support_grid_contains_axes_and_has_requested_size() {
        let g = support_grid(302);
        assert_eq!(g.len(), 302);
        for axis in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
            assert!(g.iter().any(|&d| dot(d, axis) > 1.0 - 1e-12));
        }
        for d in &g {
            assert!((crate::geom::norm(*d) - 1.0).abs() < 1e-12);
        }
    }
}
