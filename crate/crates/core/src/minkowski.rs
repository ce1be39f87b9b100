//! Numerical Minkowski problem for polytopes: reconstruct the body (up to
//! translation) whose surface area measure matches a prescribed atom list.
//!
//! The variational route: minimize `sum a_i h_i` over support vectors with
//! `V(P(h)) = 1` by projected gradient (the gradient of the volume in `h`
//! is exactly the facet-area vector), rescale to match the target scale,
//! then polish with damped Newton on `F(h) = a` using the closed-form
//! area Jacobian `dF_i/dh_j = l_ij / sin(angle_ij)`. Volume, areas and edge
//! data come from a halfspace-intersection hull at every iterate.

use crate::body::{DiscreteSurfaceMeasure, Polytope3};
use crate::error::{Error, Result};
#[cfg(test)]
use crate::geom::sub;
use crate::geom::{dot, norm, Vec3};
use crate::hull::halfspace_intersection;
use crate::quad::SphereRule;

#[derive(Debug, Clone)]
pub struct MinkowskiOptions {
    pub max_iterations: usize,
    /// Convergence threshold on `max_i |F_i - a_i| / max_i a_i`.
    pub tolerance: f64,
}

impl Default for MinkowskiOptions {
    fn default() -> Self {
        MinkowskiOptions {
            max_iterations: 300,
            tolerance: 1e-10,
        }
    }
}

/// A reconstruction instance: target measure plus solver options.
#[derive(Debug, Clone)]
pub struct MinkowskiInstance {
    pub target: DiscreteSurfaceMeasure,
    pub options: MinkowskiOptions,
}

impl MinkowskiInstance {
    pub fn new(target: DiscreteSurfaceMeasure) -> Self {
        MinkowskiInstance {
            target,
            options: MinkowskiOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IterationRecord {
    /// `max_i |lambda F_i - a_i| / max a_i` at the accepted iterate.
    pub residual: f64,
    /// Normalized objective `sum a_i h_i / V^(1/3)`.
    pub objective: f64,
}

/// A solved instance: support numbers per target normal, the realized body
/// (Steiner point at the origin), residuals, and the iteration log.
#[derive(Debug, Clone)]
pub struct MinkowskiSolution {
    pub support_numbers: Vec<f64>,
    pub polytope: Polytope3,
    /// Achieved minus target facet areas.
    pub residual: Vec<f64>,
    pub max_rel_residual: f64,
    pub iterations: Vec<IterationRecord>,
}

struct Geometry {
    areas: Vec<f64>,
    volume: f64,
    /// (i, j, length) per active edge.
    edges: Vec<(usize, usize, f64)>,
}

fn geometry(normals: &[Vec3], h: &[f64]) -> Result<Geometry> {
    let cell = halfspace_intersection(normals, h)?;
    Ok(Geometry {
        areas: cell.facet_areas,
        volume: cell.volume,
        edges: cell.edges,
    })
}

/// Area Jacobian `dF/dh` assembled from edge lengths; symmetric with the
/// translation directions in its kernel.
fn jacobian(normals: &[Vec3], geo: &Geometry) -> Vec<f64> {
    let m = normals.len();
    let mut j = vec![0.0; m * m];
    for &(p, q, len) in &geo.edges {
        let c = dot(normals[p], normals[q]).clamp(-1.0, 1.0);
        let s = (1.0 - c * c).sqrt().max(1e-14);
        let val = len / s;
        j[p * m + q] += val;
        j[q * m + p] += val;
        j[p * m + p] -= val * c;
        j[q * m + q] -= val * c;
    }
    j
}

fn lu_solve(mut a: Vec<f64>, mut b: Vec<f64>, m: usize) -> Option<Vec<f64>> {
    let mut perm: Vec<usize> = (0..m).collect();
    for col in 0..m {
        let piv = (col..m).max_by(|&r1, &r2| {
            a[perm[r1] * m + col]
                .abs()
                .partial_cmp(&a[perm[r2] * m + col].abs())
                .unwrap()
        })?;
        perm.swap(col, piv);
        let d = a[perm[col] * m + col];
        if d.abs() < 1e-300 {
            return None;
        }
        for row in (col + 1)..m {
            let f = a[perm[row] * m + col] / d;
            if f != 0.0 {
                for k in col..m {
                    a[perm[row] * m + k] -= f * a[perm[col] * m + k];
                }
                b[perm[row]] -= f * b[perm[col]];
            }
        }
    }
    let mut x = vec![0.0; m];
    for row in (0..m).rev() {
        let mut s = b[perm[row]];
        for k in (row + 1)..m {
            s -= a[perm[row] * m + k] * x[k];
        }
        x[row] = s / a[perm[row] * m + row];
    }
    Some(x)
}

/// Solves the Minkowski problem for the instance's target measure.
pub fn solve(instance: &MinkowskiInstance) -> Result<MinkowskiSolution> {
    let target = &instance.target;
    let atoms = target.atoms();
    let m = atoms.len();
    if m < 4 {
        return Err(Error::Infeasible(format!("{m} atoms cannot bound a body")));
    }
    let mass = target.total_mass();
    if norm(target.moment()) > 1e-8 * mass {
        return Err(Error::Infeasible(format!(
            "moment violation: |sum a_i u_i| = {:.3e}",
            norm(target.moment())
        )));
    }
    if !target.spans_space(1e-10) {
        return Err(Error::Infeasible(
            "measure concentrated on a great sphere".into(),
        ));
    }
    let normals: Vec<Vec3> = atoms.iter().map(|&(u, _)| u).collect();
    let a: Vec<f64> = atoms.iter().map(|&(_, w)| w).collect();
    let a_max = a.iter().cloned().fold(0.0, f64::max);

    let mut h = vec![1.0f64; m];
    let mut geo = geometry(&normals, &h)?;
    let mut log: Vec<IterationRecord> = Vec::new();

    let objective = |h: &[f64], geo: &Geometry| -> f64 {
        let sah: f64 = h.iter().zip(&a).map(|(hi, ai)| ai * hi).sum();
        sah / geo.volume.powf(1.0 / 3.0)
    };
    let scaled_residual = |h: &[f64], geo: &Geometry| -> f64 {
        let sah: f64 = h.iter().zip(&a).map(|(hi, ai)| ai * hi).sum();
        let lambda = sah / (3.0 * geo.volume);
        geo.areas
            .iter()
            .zip(&a)
            .map(|(f, ai)| (lambda * f - ai).abs())
            .fold(0.0, f64::max)
            / a_max
    };

    // phase 1: projected gradient on the normalized objective
    let mut iter = 0usize;
    let budget = instance.options.max_iterations;
    while scaled_residual(&h, &geo) > 1e-3 && iter < budget {
        iter += 1;
        let sah: f64 = h.iter().zip(&a).map(|(hi, ai)| ai * hi).sum();
        let lambda = sah / (3.0 * geo.volume);
        let grad: Vec<f64> = a
            .iter()
            .zip(&geo.areas)
            .map(|(ai, fi)| ai - lambda * fi)
            .collect();
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-16 {
            break;
        }
        let f0 = objective(&h, &geo);
        let hmean = h.iter().sum::<f64>() / m as f64;
        let mut tau = 0.5 * hmean / gnorm * m as f64;
        let mut accepted = false;
        for _ in 0..40 {
            let h_try: Vec<f64> = h.iter().zip(&grad).map(|(hi, g)| hi - tau * g).collect();
            if h_try.iter().cloned().fold(f64::INFINITY, f64::min) > 1e-9 * hmean {
                if let Ok(geo_try) = geometry(&normals, &h_try) {
                    if geo_try.volume > 0.0 && objective(&h_try, &geo_try) < f0 {
                        h = h_try;
                        geo = geo_try;
                        accepted = true;
                        break;
                    }
                }
            }
            tau *= 0.5;
        }
        log.push(IterationRecord {
            residual: scaled_residual(&h, &geo),
            objective: objective(&h, &geo),
        });
        if !accepted {
            break;
        }
    }

    // rescale so the area system targets `a` directly
    {
        let sah: f64 = h.iter().zip(&a).map(|(hi, ai)| ai * hi).sum();
        let lambda = sah / (3.0 * geo.volume);
        let s = lambda.sqrt();
        for hi in h.iter_mut() {
            *hi *= s;
        }
        geo = geometry(&normals, &h)?;
    }

    // phase 2: damped Newton on F(h) = a
    let res_of = |geo: &Geometry| -> f64 {
        geo.areas
            .iter()
            .zip(&a)
            .map(|(f, ai)| (f - ai).abs())
            .fold(0.0, f64::max)
            / a_max
    };
    let mut best_res = res_of(&geo);
    while best_res > instance.options.tolerance && iter < budget {
        iter += 1;
        let inactive = geo.areas.iter().any(|&f| f <= 1e-12);
        let mut step: Option<Vec<f64>> = None;
        if !inactive {
            let mut j = jacobian(&normals, &geo);
            // pin the translation kernel: J + sum_axis T T^t
            let scale = j.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1e-12);
            for axis in 0..3 {
                for p in 0..m {
                    for q in 0..m {
                        j[p * m + q] += scale * normals[p][axis] * normals[q][axis];
                    }
                }
            }
            let rhs: Vec<f64> = a.iter().zip(&geo.areas).map(|(ai, f)| ai - f).collect();
            step = lu_solve(j, rhs, m);
        }
        let dir = match step {
            Some(d) => d,
            None => {
                // gradient fallback (reactivates collapsed facets)
                let sah: f64 = h.iter().zip(&a).map(|(hi, ai)| ai * hi).sum();
                let lambda = sah / (3.0 * geo.volume);
                let gnorm_scale = a_max;
                a.iter()
                    .zip(&geo.areas)
                    .map(|(ai, f)| -(ai - lambda * f) / gnorm_scale * 0.1)
                    .collect()
            }
        };
        let hmean = h.iter().map(|x| x.abs()).sum::<f64>() / m as f64;
        let f_prev = objective(&h, &geo);
        let mut tau = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let h_try: Vec<f64> = h.iter().zip(&dir).map(|(hi, d)| hi + tau * d).collect();
            if h_try.iter().cloned().fold(f64::INFINITY, f64::min) > 1e-9 * hmean {
                if let Ok(geo_try) = geometry(&normals, &h_try) {
                    let r_try = res_of(&geo_try);
                    // residual must drop; the normalized objective must not
                    // grow beyond rounding (it is minimal at the solution)
                    if r_try < best_res
                        && objective(&h_try, &geo_try) <= f_prev + 1e-12 * f_prev.abs()
                    {
                        h = h_try;
                        geo = geo_try;
                        best_res = r_try;
                        accepted = true;
                        break;
                    }
                }
            }
            tau *= 0.5;
        }
        log.push(IterationRecord {
            residual: best_res,
            objective: objective(&h, &geo),
        });
        if !accepted {
            break;
        }
    }

    if best_res > instance.options.tolerance.max(1e-8) {
        return Err(Error::NoConvergence {
            iterations: iter,
            residual: best_res,
        });
    }

    // canonical translation: Steiner point to the origin
    let cell = halfspace_intersection(&normals, &h)?;
    let poly = Polytope3::from_intersection(&cell, &normals, &h)?;
    let rule = SphereRule::default_rule();
    let s = poly.steiner_point(&rule);
    let polytope = poly.translate([-s[0], -s[1], -s[2]]);
    let support_numbers: Vec<f64> = h
        .iter()
        .zip(&normals)
        .map(|(hi, u)| hi - dot(*u, s))
        .collect();
    let residual: Vec<f64> = geo.areas.iter().zip(&a).map(|(f, ai)| f - ai).collect();
    Ok(MinkowskiSolution {
        support_numbers,
        polytope,
        residual,
        max_rel_residual: best_res,
        iterations: log,
    })
}

/// The Blaschke body `K # (-K)`: reconstructed from the symmetrized surface
/// area measure; origin-symmetric up to solver tolerance.
pub fn blaschke_body(body: &Polytope3) -> Result<Polytope3> {
    if !body.is_full_dimensional() {
        return Err(Error::Degenerate(
            "the Blaschke body needs a full-dimensional input".into(),
        ));
    }
    let mu = body.surface_measure()?;
    let nu = body.reflect().surface_measure()?;
    let sym = crate::body::blaschke_sum(&mu, &nu, 1.0, 1.0)?;
    let sol = solve(&MinkowskiInstance::new(sym))?;
    Ok(sol.polytope)
}
