//! Seeded random instances: polytopes, rotations, directions. ChaCha8 keeps
//! every suite reproducible from a single u64 seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::body::Polytope3;
use crate::geom::{normalize, Rotation, Vec3};

pub type Seeded = ChaCha8Rng;

pub fn rng(seed: u64) -> Seeded {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw in [0, 1).
pub fn uniform(rng: &mut Seeded) -> f64 {
    rng.gen_range(0.0..1.0)
}

/// Standard normal via Box-Muller.
pub fn normal(rng: &mut Seeded) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Uniform direction on the sphere.
pub fn unit_vector(rng: &mut Seeded) -> Vec3 {
    loop {
        let v = [normal(rng), normal(rng), normal(rng)];
        if let Some(u) = normalize(v) {
            return u;
        }
    }
}

/// Haar-uniform rotation from a uniform quaternion.
pub fn rotation(rng: &mut Seeded) -> Rotation {
    Rotation::from_quaternion(normal(rng), normal(rng), normal(rng), normal(rng))
}

/// Hull of `m` uniform sphere points; `m` is drawn from `8..=40` unless
/// pinned. Always full-dimensional (resampled otherwise).
pub fn random_polytope(rng: &mut Seeded, m: Option<usize>) -> Polytope3 {
    let m = m.unwrap_or_else(|| rng.gen_range(8..=40));
    loop {
        let pts: Vec<Vec3> = (0..m).map(|_| unit_vector(rng)).collect();
        if let Ok(p) = Polytope3::from_points(&pts) {
            if p.is_full_dimensional() {
                return p;
            }
        }
    }
}

/// Random polytope with a facet count in `lo..=hi`, built by resampling
/// hulls of sphere points until the facet count lands in range.
pub fn random_polytope_with_facets(rng: &mut Seeded, lo: usize, hi: usize) -> Polytope3 {
    assert!(lo >= 4 && hi >= lo);
    loop {
        for m in 4..=32 {
            let pts: Vec<Vec3> = (0..m).map(|_| unit_vector(rng)).collect();
            if let Ok(p) = Polytope3::from_points(&pts) {
                if p.is_full_dimensional() {
                    let f = p.facets().len();
                    if f >= lo && f <= hi {
                        return p;
                    }
                }
            }
        }
    }
}
