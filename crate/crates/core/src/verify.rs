//! Independent oracles used by tests and the check suites: Monte-Carlo
//! shadow areas, an adaptive-Simpson reference quadrature, and a
//! finite-difference Laplace-Beltrami stencil. None of these routines share
//! code paths with the implementations they cross-check.

use crate::body::Polytope3;
use crate::geom::{add, dot, orthonormal_frame, scale, Vec3};
use crate::sample::{rng, Seeded};
use rand::Rng;

/// Monte-Carlo area of the shadow `K | u_perp` of a polytope.
///
/// Samples points in a bounding square of the projection plane and tests
/// membership by intersecting the line `p + t u` with the facet halfspaces
/// directly; no hull or convolution machinery is involved.
pub fn mc_shadow_area(poly: &Polytope3, u: Vec3, samples: usize, seed: u64) -> f64 {
    let (e1, e2) = orthonormal_frame(u);
    let radius = poly
        .vertices()
        .iter()
        .map(|&v| dot(v, e1).hypot(dot(v, e2)))
        .fold(0.0, f64::max)
        * 1.0000001;
    let mut r: Seeded = rng(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let c1 = r.gen_range(-radius..radius);
        let c2 = r.gen_range(-radius..radius);
        let p = add(scale(e1, c1), scale(e2, c2));
        if line_hits_body(poly, p, u) {
            hits += 1;
        }
    }
    4.0 * radius * radius * hits as f64 / samples as f64
}

fn line_hits_body(poly: &Polytope3, p: Vec3, u: Vec3) -> bool {
    let mut t_lo = f64::NEG_INFINITY;
    let mut t_hi = f64::INFINITY;
    for f in poly.facets() {
        let a = dot(u, f.normal);
        let b = f.support - dot(p, f.normal);
        if a.abs() < 1e-14 {
            if b < 0.0 {
                return false;
            }
        } else if a > 0.0 {
            t_hi = t_hi.min(b / a);
        } else {
            t_lo = t_lo.max(b / a);
        }
        if t_lo > t_hi {
            return false;
        }
    }
    t_lo <= t_hi
}

/// Adaptive Simpson quadrature; deliberately a different scheme from the
/// Gauss-Kronrod rule in [`crate::quad`] so the two can cross-check.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn rec<F: FnMut(f64) -> f64>(
        f: &mut F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth >= 50 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1)
        }
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, a, b);
    rec(&mut f, a, b, fa, fm, fb, whole, tol, 0)
}

/// Sup-norm distance between two bodies modulo translation: fits the
/// translation by least squares on the support difference over `dirs` and
/// returns the largest remaining gap. Insensitive to vertex multiplicity,
/// unlike vertex-set comparisons.
pub fn support_translation_gap(a: &Polytope3, b: &Polytope3, dirs: &[Vec3]) -> f64 {
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for &u in dirs {
        let d = a.support_raw(u) - b.support_raw(u);
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += u[i] * u[j];
            }
            atb[i] += u[i] * d;
        }
    }
    // 3x3 solve by Cramer
    let det = ata[0][0] * (ata[1][1] * ata[2][2] - ata[1][2] * ata[2][1])
        - ata[0][1] * (ata[1][0] * ata[2][2] - ata[1][2] * ata[2][0])
        + ata[0][2] * (ata[1][0] * ata[2][1] - ata[1][1] * ata[2][0]);
    let solve_col = |k: usize| -> f64 {
        let mut m = ata;
        for r in 0..3 {
            m[r][k] = atb[r];
        }
        let d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        d / det
    };
    let x = [solve_col(0), solve_col(1), solve_col(2)];
    dirs.iter()
        .map(|&u| (a.support_raw(u) - b.support_raw(u) - dot(x, u)).abs())
        .fold(0.0, f64::max)
}

/// Finite-difference Laplace-Beltrami of `f` on the sphere at `u`.
///
/// Uses the normalized-offset chart `(s,t) -> (u + s e1 + t e2)/|.|`, whose
/// metric is Euclidean to second order at the origin, so the flat 5-point
/// stencil converges at O(h^2).
pub fn fd_laplace_beltrami<F: Fn(Vec3) -> f64>(f: &F, u: Vec3, h: f64) -> f64 {
    let (e1, e2) = orthonormal_frame(u);
    let at = |s: f64, t: f64| {
        let p = add(add(scale(e1, s), scale(e2, t)), u);
        let n = crate::geom::norm(p);
        f(scale(p, 1.0 / n))
    };
    (at(h, 0.0) + at(-h, 0.0) + at(0.0, h) + at(0.0, -h) - 4.0 * at(0.0, 0.0)) / (h * h)
}
