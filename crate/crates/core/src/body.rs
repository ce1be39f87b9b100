//! Convex-body primitives in R^3: polytopes with derived facet data, balls,
//! discrete surface area measures, support samples, and the classical
//! functionals (support, mixed volume V_1, quermassintegrals, Steiner point)
//! together with Minkowski and Blaschke arithmetic.

use crate::error::{Error, Result};
use crate::geom::{self, add, dot, norm, normalize, scale, Rotation, Vec3};
use crate::hull::{self, halfspace_intersection};
use crate::quad::SphereRule;
use crate::KAPPA_3;

/// Angular tolerance below which two measure atoms are coalesced.
pub const ATOM_COALESCE_ANGLE: f64 = 1e-9;

/// Anything that provides a support function on the unit sphere.
pub trait SupportFunction {
    fn support(&self, u: Vec3) -> f64;
}

/// One facet of a polytope: outer unit normal, area, and support number.
#[derive(Debug, Clone, Copy)]
pub struct Facet {
    pub normal: Vec3,
    pub area: f64,
    pub support: f64,
}

/// A convex polytope in R^3, stored as its extreme vertices plus facet data
/// derived by convex hull. Lower-dimensional vertex sets are allowed; they
/// carry no facet data and are rejected by the operations that need it.
#[derive(Debug, Clone)]
pub struct Polytope3 {
    vertices: Vec<Vec3>,
    facets: Vec<Facet>,
    /// (length, exterior angle) per edge; used for the mean-curvature sum.
    edges: Vec<(f64, f64)>,
    volume: f64,
    full_dim: bool,
}

impl Polytope3 {
    /// Builds the polytope as the convex hull of `points`. Degenerate
    /// (lower-dimensional) inputs are accepted and flagged.
    pub fn from_points(points: &[Vec3]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("empty vertex list".into()));
        }
        match hull::convex_hull(points) {
            Ok(h) => {
                let vertices = h.vertex_ids.iter().map(|&i| points[i]).collect();
                let facets = h
                    .facets
                    .iter()
                    .map(|f| Facet {
                        normal: f.normal,
                        area: f.area,
                        support: f.offset,
                    })
                    .collect();
                let edges = h.edges.iter().map(|e| (e.length, e.angle)).collect();
                Ok(Polytope3 {
                    vertices,
                    facets,
                    edges,
                    volume: h.volume,
                    full_dim: true,
                })
            }
            Err(Error::Degenerate(_)) => {
                let mut vertices: Vec<Vec3> = Vec::new();
                for &p in points {
                    if !vertices.iter().any(|&q| geom::dist(p, q) < 1e-14) {
                        vertices.push(p);
                    }
                }
                Ok(Polytope3 {
                    vertices,
                    facets: Vec::new(),
                    edges: Vec::new(),
                    volume: 0.0,
                    full_dim: false,
                })
            }
            Err(e) => Err(e),
        }
    }

    /// Builds a polytope directly from a halfspace-intersection cell, with
    /// known plane normals and offsets. Avoids re-hulling the vertex set,
    /// which can introduce sliver facets on near-degenerate geometry.
    pub(crate) fn from_intersection(
        cell: &crate::hull::Intersection,
        normals: &[Vec3],
        offsets: &[f64],
    ) -> Result<Self> {
        let total_area: f64 = cell.facet_areas.iter().sum();
        if !(total_area > 0.0) {
            return Err(Error::Degenerate("intersection has no area".into()));
        }
        let mut facets = Vec::new();
        for i in 0..normals.len() {
            if cell.facet_areas[i] > 1e-12 * total_area {
                facets.push(Facet {
                    normal: normals[i],
                    area: cell.facet_areas[i],
                    support: offsets[i],
                });
            }
        }
        let edges = cell
            .edges
            .iter()
            .map(|&(i, j, len)| {
                let c = dot(normals[i], normals[j]).clamp(-1.0, 1.0);
                (len, c.acos())
            })
            .collect();
        // split dual facets can emit near-coincident copies of a vertex
        let diam = cell
            .vertices
            .iter()
            .map(|v| norm(*v))
            .fold(0.0, f64::max)
            .max(1e-300);
        let mut vertices: Vec<Vec3> = Vec::with_capacity(cell.vertices.len());
        for &v in &cell.vertices {
            if !vertices.iter().any(|&w| geom::dist(v, w) < 1e-9 * diam) {
                vertices.push(v);
            }
        }
        Ok(Polytope3 {
            vertices,
            facets,
            edges,
            volume: cell.volume,
            full_dim: true,
        })
    }

    /// Cube `[-a, a]^3`.
    pub fn cube(a: f64) -> Self {
        let mut pts = Vec::with_capacity(8);
        for x in [-a, a] {
            for y in [-a, a] {
                for z in [-a, a] {
                    pts.push([x, y, z]);
                }
            }
        }
        Self::from_points(&pts).expect("cube")
    }

    /// Regular tetrahedron with vertices (1,1,1),(1,-1,-1),(-1,1,-1),(-1,-1,1).
    pub fn tetrahedron() -> Self {
        Self::from_points(&[
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ])
        .expect("tetrahedron")
    }

    /// Regular octahedron with vertices +-a e_i.
    pub fn octahedron(a: f64) -> Self {
        Self::from_points(&[
            [a, 0.0, 0.0],
            [-a, 0.0, 0.0],
            [0.0, a, 0.0],
            [0.0, -a, 0.0],
            [0.0, 0.0, a],
            [0.0, 0.0, -a],
        ])
        .expect("octahedron")
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.full_dim
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.area).sum()
    }

    /// Sum of edge length times exterior angle; `W_2 = this / 6` for
    /// full-dimensional polytopes.
    pub fn mean_curvature_sum(&self) -> f64 {
        self.edges.iter().map(|&(l, a)| l * a).sum()
    }

    /// Support value at an arbitrary (not necessarily unit) direction.
    pub fn support_raw(&self, u: Vec3) -> f64 {
        self.vertices
            .iter()
            .map(|&v| dot(u, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Translate by `x`; facet normals and areas are unchanged.
    pub fn translate(&self, x: Vec3) -> Self {
        Polytope3 {
            vertices: self.vertices.iter().map(|&v| add(v, x)).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal,
                    area: f.area,
                    support: f.support + dot(f.normal, x),
                })
                .collect(),
            edges: self.edges.clone(),
            volume: self.volume,
            full_dim: self.full_dim,
        }
    }

    /// Rotate by `r`; facet data rotates atom-for-atom.
    pub fn rotate(&self, r: &Rotation) -> Self {
        Polytope3 {
            vertices: self.vertices.iter().map(|&v| r.apply(v)).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: r.apply(f.normal),
                    area: f.area,
                    support: f.support,
                })
                .collect(),
            edges: self.edges.clone(),
            volume: self.volume,
            full_dim: self.full_dim,
        }
    }

    /// Scale by `lambda >= 0` about the origin.
    pub fn scale_by(&self, lambda: f64) -> Self {
        Polytope3 {
            vertices: self.vertices.iter().map(|&v| scale(v, lambda)).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal,
                    area: f.area * lambda * lambda,
                    support: f.support * lambda,
                })
                .collect(),
            edges: self.edges.iter().map(|&(l, a)| (l * lambda, a)).collect(),
            volume: self.volume * lambda.powi(3),
            full_dim: self.full_dim,
        }
    }

    /// Point reflection `-K`.
    pub fn reflect(&self) -> Self {
        Polytope3 {
            vertices: self.vertices.iter().map(|&v| geom::neg(v)).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: geom::neg(f.normal),
                    area: f.area,
                    support: f.support,
                })
                .collect(),
            edges: self.edges.clone(),
            volume: self.volume,
            full_dim: self.full_dim,
        }
    }

    /// Surface area measure: one atom per facet.
    pub fn surface_measure(&self) -> Result<DiscreteSurfaceMeasure> {
        if !self.full_dim {
            return Err(Error::Degenerate(
                "surface area measure needs a full-dimensional body".into(),
            ));
        }
        DiscreteSurfaceMeasure::new(
            self.facets
                .iter()
                .map(|f| (f.normal, f.area))
                .collect::<Vec<_>>(),
        )
    }

    /// Quermassintegrals `(W_0, W_1, W_2, W_3)`. `W_2` is evaluated as
    /// `kappa_3` times the spherical mean of the support function on `rule`.
    pub fn quermassintegrals(&self, rule: &SphereRule) -> Result<[f64; 4]> {
        if !self.full_dim {
            return Err(Error::Degenerate(
                "quermassintegrals need a full-dimensional body".into(),
            ));
        }
        let w0 = self.volume;
        let w1 = self.surface_area() / 3.0;
        let w2 = KAPPA_3 * rule.mean(|u| self.support_raw(u));
        Ok([w0, w1, w2, KAPPA_3])
    }

    /// Steiner point: `3 * mean of h(K,u) u` over the sphere.
    pub fn steiner_point(&self, rule: &SphereRule) -> Vec3 {
        scale(rule.mean_vec(|u| scale(u, self.support_raw(u))), 3.0)
    }
}

impl SupportFunction for Polytope3 {
    fn support(&self, u: Vec3) -> f64 {
        self.support_raw(u)
    }
}

/// Euclidean ball with arbitrary center.
#[derive(Debug, Clone, Copy)]
pub struct BallBody {
    pub center: Vec3,
    pub radius: f64,
}

impl BallBody {
    pub fn new(center: Vec3, radius: f64) -> Result<Self> {
        if radius < 0.0 {
            return Err(Error::InvalidInput("negative radius".into()));
        }
        Ok(BallBody { center, radius })
    }

    pub fn unit() -> Self {
        BallBody {
            center: [0.0; 3],
            radius: 1.0,
        }
    }

    /// A singleton `{x}` as the radius-zero ball.
    pub fn point(x: Vec3) -> Self {
        BallBody {
            center: x,
            radius: 0.0,
        }
    }

    /// Exact quermassintegrals `W_i(rB + c) = kappa_3 r^(3-i)`.
    pub fn quermassintegrals(&self) -> [f64; 4] {
        let r = self.radius;
        [
            KAPPA_3 * r.powi(3),
            KAPPA_3 * r.powi(2),
            KAPPA_3 * r,
            KAPPA_3,
        ]
    }
}

impl SupportFunction for BallBody {
    fn support(&self, u: Vec3) -> f64 {
        dot(self.center, u) + self.radius
    }
}

/// Checked support evaluation: `u` must be unit within 1e-12.
pub fn support<B: SupportFunction>(body: &B, u: Vec3) -> Result<f64> {
    if !geom::is_unit(u, 1e-12) {
        return Err(Error::InvalidInput(format!(
            "direction must be a unit vector, |u| = {}",
            norm(u)
        )));
    }
    Ok(body.support(u))
}

/// A discrete element of the cone of centered measures on the sphere:
/// finitely many atoms (unit normal, positive weight).
#[derive(Debug, Clone)]
pub struct DiscreteSurfaceMeasure {
    atoms: Vec<(Vec3, f64)>,
}

impl DiscreteSurfaceMeasure {
    /// Validates units and positivity, coalesces atoms whose normals are
    /// within [`ATOM_COALESCE_ANGLE`], and sorts atoms canonically.
    pub fn new(mut atoms: Vec<(Vec3, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput(
                "measure needs at least one atom".into(),
            ));
        }
        for (u, a) in atoms.iter_mut() {
            if !geom::is_unit(*u, 1e-9) {
                return Err(Error::InvalidInput(format!(
                    "atom normal is not unit: |u| = {}",
                    norm(*u)
                )));
            }
            *u = normalize(*u).unwrap();
            if !(*a > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "atom weight not positive: {a}"
                )));
            }
        }
        // coalesce near-coincident normals (weight-weighted direction)
        let cos_tol = ATOM_COALESCE_ANGLE.cos();
        let mut merged: Vec<(Vec3, f64)> = Vec::with_capacity(atoms.len());
        'outer: for (u, a) in atoms {
            for (v, b) in merged.iter_mut() {
                if dot(u, *v) >= cos_tol {
                    let w = scale(add(scale(*v, *b), scale(u, a)), 1.0);
                    *v = normalize(w).unwrap_or(*v);
                    *b += a;
                    continue 'outer;
                }
            }
            merged.push((u, a));
        }
        merged.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
        Ok(DiscreteSurfaceMeasure { atoms: merged })
    }

    pub fn atoms(&self) -> &[(Vec3, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|&(_, a)| a).sum()
    }

    /// First moment `sum a_i u_i`; zero for genuine surface area measures.
    pub fn moment(&self) -> Vec3 {
        let mut m = [0.0; 3];
        for &(u, a) in &self.atoms {
            m = add(m, scale(u, a));
        }
        m
    }

    pub fn is_centered(&self, rel_tol: f64) -> bool {
        norm(self.moment()) <= rel_tol * self.total_mass()
    }

    /// Image measure under a rotation.
    pub fn rotate(&self, r: &Rotation) -> Self {
        DiscreteSurfaceMeasure::new(
            self.atoms
                .iter()
                .map(|&(u, a)| (r.apply(u), a))
                .collect::<Vec<_>>(),
        )
        .expect("rotated measure")
    }

    /// Whether the atoms span R^3 (not concentrated on a great sphere):
    /// smallest eigenvalue of the second-moment matrix is positive.
    pub fn spans_space(&self, rel_tol: f64) -> bool {
        // power iteration on inverse is overkill; use the determinant test on
        // the second-moment matrix plus its trace for scale
        let mut m = [[0.0f64; 3]; 3];
        for &(u, a) in &self.atoms {
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] += a * u[i] * u[j];
                }
            }
        }
        let tr = m[0][0] + m[1][1] + m[2][2];
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        det > rel_tol * (tr / 3.0).powi(3)
    }
}

/// Blaschke linear combination `lambda1 mu + lambda2 nu` of surface measures.
pub fn blaschke_sum(
    mu: &DiscreteSurfaceMeasure,
    nu: &DiscreteSurfaceMeasure,
    lambda1: f64,
    lambda2: f64,
) -> Result<DiscreteSurfaceMeasure> {
    if lambda1 < 0.0 || lambda2 < 0.0 {
        return Err(Error::InvalidInput(
            "Blaschke weights must be nonnegative".into(),
        ));
    }
    if lambda1 == 0.0 && lambda2 == 0.0 {
        return Err(Error::InvalidInput(
            "Blaschke weights cannot both vanish".into(),
        ));
    }
    let mut atoms: Vec<(Vec3, f64)> = Vec::new();
    if lambda1 > 0.0 {
        atoms.extend(mu.atoms().iter().map(|&(u, a)| (u, lambda1 * a)));
    }
    if lambda2 > 0.0 {
        atoms.extend(nu.atoms().iter().map(|&(u, a)| (u, lambda2 * a)));
    }
    DiscreteSurfaceMeasure::new(atoms)
}

/// Mixed volume `V_1(K, L) = (1/3) sum_i a_i h(L, u_i)` from the surface
/// measure of `K` and the support function of `L`.
pub fn mixed_volume_v1<B: SupportFunction>(k: &DiscreteSurfaceMeasure, l: &B) -> f64 {
    crate::quad::kahan_sum(k.atoms().iter().map(|&(u, a)| a * l.support(u))) / 3.0
}

/// Minkowski sum as the hull of pairwise vertex sums.
pub fn minkowski_sum(a: &Polytope3, b: &Polytope3) -> Result<Polytope3> {
    let mut pts = Vec::with_capacity(a.vertices().len() * b.vertices().len());
    for &va in a.vertices() {
        for &vb in b.vertices() {
            pts.push(add(va, vb));
        }
    }
    Polytope3::from_points(&pts)
}

/// Support-function samples on a fixed direction grid.
#[derive(Debug, Clone)]
pub struct SupportSampleBody {
    pub directions: Vec<Vec3>,
    pub values: Vec<f64>,
}

/// A body realized from support samples along with the realization defects.
#[derive(Debug, Clone)]
pub struct RealizedBody {
    pub polytope: Polytope3,
    /// max over sample directions of (realized support - sample); positive
    /// values mean the intersection sticks out of a sample halfspace
    /// (numerical noise only).
    pub max_overshoot: f64,
    /// max over sample directions of (sample - realized support); large
    /// values mean the samples were not close to a support function.
    pub max_defect: f64,
}

impl SupportSampleBody {
    pub fn new(directions: Vec<Vec3>, values: Vec<f64>) -> Result<Self> {
        if directions.len() != values.len() {
            return Err(Error::InvalidInput(
                "direction and value counts differ".into(),
            ));
        }
        if directions.len() < 4 {
            return Err(Error::InvalidInput(
                "need at least 4 sample directions".into(),
            ));
        }
        for u in &directions {
            if !geom::is_unit(*u, 1e-9) {
                return Err(Error::InvalidInput("sample direction is not unit".into()));
            }
        }
        Ok(SupportSampleBody { directions, values })
    }

    /// Least-squares fit of the linear part of the samples; estimates the
    /// Steiner point on arbitrary grids and is exact on symmetric ones.
    pub fn sampled_steiner(&self) -> Vec3 {
        // normal equations for h ~ c + s.u over the sample set
        let mut ata = [[0.0f64; 4]; 4];
        let mut atb = [0.0f64; 4];
        for (u, &h) in self.directions.iter().zip(&self.values) {
            let row = [1.0, u[0], u[1], u[2]];
            for i in 0..4 {
                for j in 0..4 {
                    ata[i][j] += row[i] * row[j];
                }
                atb[i] += row[i] * h;
            }
        }
        let x = solve4(ata, atb);
        [x[1], x[2], x[3]]
    }

    /// Realizes the samples as the intersection of the sampled halfspaces.
    pub fn to_polytope(&self) -> Result<RealizedBody> {
        let s = self.sampled_steiner();
        let shifted: Vec<f64> = self
            .directions
            .iter()
            .zip(&self.values)
            .map(|(u, &h)| h - dot(*u, s))
            .collect();
        let min_h = shifted.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min_h > 0.0) {
            return Err(Error::Numeric(format!(
                "support samples not positive after Steiner recentering (min {min_h:.3e})"
            )));
        }
        let cell = halfspace_intersection(&self.directions, &shifted)?;
        let polytope =
            Polytope3::from_intersection(&cell, &self.directions, &shifted)?.translate(s);
        if !polytope.is_full_dimensional() {
            return Err(Error::Numeric(
                "halfspace intersection collapsed to a lower-dimensional set".into(),
            ));
        }
        let mut max_overshoot = f64::NEG_INFINITY;
        let mut max_defect = f64::NEG_INFINITY;
        for (u, &h) in self.directions.iter().zip(&self.values) {
            let hr = polytope.support_raw(*u);
            max_overshoot = max_overshoot.max(hr - h);
            max_defect = max_defect.max(h - hr);
        }
        Ok(RealizedBody {
            polytope,
            max_overshoot,
            max_defect,
        })
    }
}

fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> [f64; 4] {
    // Gaussian elimination with partial pivoting
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        for row in (col + 1)..4 {
            let f = a[row][col] / d;
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let mut s = b[row];
        for k in (row + 1)..4 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::support_grid;

    fn rule() -> SphereRule {
        SphereRule::default_rule()
    }

    #[test]
    fn support_examples() {
        let cube = Polytope3::cube(1.0);
        let d = normalize([1.0, 1.0, 1.0]).unwrap();
        assert!((support(&cube, d).unwrap() - 3.0_f64.sqrt()).abs() < 1e-14);
        assert!((support(&cube, [0.0, 0.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        let ball = BallBody::unit();
        assert!((support(&ball, d).unwrap() - 1.0).abs() < 1e-15);
        assert!(support(&cube, [0.0, 0.0, 2.0]).is_err());
    }

    #[test]
    fn cube_surface_measure_atoms() {
        let cube = Polytope3::cube(1.0);
        let mu = cube.surface_measure().unwrap();
        assert_eq!(mu.atoms().len(), 6);
        for &(u, a) in mu.atoms() {
            assert!((a - 4.0).abs() < 1e-12);
            let is_axis = (0..3).any(|i| (u[i].abs() - 1.0).abs() < 1e-12);
            assert!(is_axis);
        }
        assert!(mu.is_centered(1e-14));
    }

    #[test]
    fn tetrahedron_measure_against_triangle_area_oracle() {
        let tet = Polytope3::tetrahedron();
        let mu = tet.surface_measure().unwrap();
        assert_eq!(mu.atoms().len(), 4);
        // oracle: each facet is the triangle on three of the four vertices;
        // its area is |(b-a) x (c-a)|/2 = (regular, side 2*sqrt(2)) -> 2*sqrt(3)
        let expected = 2.0 * 3.0_f64.sqrt();
        for &(_, a) in mu.atoms() {
            assert!((a - expected).abs() < 1e-12);
        }
        assert!(norm(mu.moment()) < 1e-12 * mu.total_mass());
    }

    #[test]
    fn planar_set_is_dimension_error() {
        let flat: Vec<Vec3> = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 1.0, 0.0],
        ];
        let p = Polytope3::from_points(&flat).unwrap();
        assert!(!p.is_full_dimensional());
        assert!(matches!(p.surface_measure(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn v1_examples() {
        let cube = Polytope3::cube(1.0);
        let mu = cube.surface_measure().unwrap();
        // V1(K,K) = V(K)
        assert!((mixed_volume_v1(&mu, &cube) - 8.0).abs() < 1e-12);
        // h = 1 on all normals
        assert!((mixed_volume_v1(&mu, &BallBody::unit()) - 8.0).abs() < 1e-12);
        // singleton: linear support function integrates to zero
        let pt = BallBody::point([0.3, -0.7, 0.2]);
        assert!(mixed_volume_v1(&mu, &pt).abs() < 1e-13);
    }

    #[test]
    fn quermassintegrals_of_cube_and_ball() {
        let cube = Polytope3::cube(1.0);
        let w = cube.quermassintegrals(&rule()).unwrap();
        assert!((w[0] - 8.0).abs() < 1e-12);
        assert!((w[1] - 8.0).abs() < 1e-12);
        // W2 = 2 pi; quadrature of the kinked support function converges at
        // ~N^-2, about 4e-4 on the default grid
        assert!((w[2] - 2.0 * std::f64::consts::PI).abs() < 1e-3);
        let w_fine = cube
            .quermassintegrals(&SphereRule::product(256, 512))
            .unwrap();
        assert!((w_fine[2] - 2.0 * std::f64::consts::PI).abs() < 1e-4);
        assert!((w[3] - KAPPA_3).abs() < 1e-15);
        let wb = BallBody::unit().quermassintegrals();
        for wi in wb {
            assert!((wi - KAPPA_3).abs() < 1e-15);
        }
        // edge-formula oracle for W2: sum l_e gamma_e / 6
        let w2_edges = cube.mean_curvature_sum() / 6.0;
        assert!((w2_edges - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn steiner_point_examples() {
        let r = rule();
        let cube = Polytope3::cube(1.0);
        let s = cube.steiner_point(&r);
        assert!(norm(s) < 1e-12);
        let x0 = [0.25, -0.5, 1.0];
        let shifted = cube.translate(x0);
        let s2 = shifted.steiner_point(&r);
        // the shift is integrated exactly by the product rule
        assert!(geom::dist(s2, x0) < 1e-12);
        // degenerate body: still defined
        let seg = Polytope3::from_points(&[[0.0, 0.0, -1.0], [0.0, 0.0, 1.0]]).unwrap();
        let s3 = seg.steiner_point(&r);
        assert!(norm(s3) < 1e-12);
    }

    #[test]
    fn minkowski_sum_examples() {
        let cube = Polytope3::cube(1.0);
        // cube + point = translated cube
        let pt = Polytope3::from_points(&[[1.0, 2.0, 3.0]]).unwrap();
        let t = minkowski_sum(&cube, &pt).unwrap();
        assert!((t.volume() - 8.0).abs() < 1e-12);
        assert!((t.support_raw([0.0, 0.0, 1.0]) - 4.0).abs() < 1e-12);
        // segment + segment = square (degenerate allowed)
        let sz = Polytope3::from_points(&[[0.0, 0.0, -1.0], [0.0, 0.0, 1.0]]).unwrap();
        let sx = Polytope3::from_points(&[[-1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]).unwrap();
        let sq = minkowski_sum(&sz, &sx).unwrap();
        assert!(!sq.is_full_dimensional());
        assert_eq!(sq.vertices().len(), 4);
        // cube + cube = 2 cube
        let two = minkowski_sum(&cube, &cube).unwrap();
        assert!((two.volume() - 64.0).abs() < 1e-10);
        let d = normalize([1.0, 1.0, 1.0]).unwrap();
        assert!((two.support_raw(d) - 2.0 * cube.support_raw(d)).abs() < 1e-12);
    }

    #[test]
    fn blaschke_sum_examples() {
        let cube = Polytope3::cube(1.0);
        let mu = cube.surface_measure().unwrap();
        let doubled = blaschke_sum(&mu, &mu, 1.0, 1.0).unwrap();
        assert_eq!(doubled.atoms().len(), 6);
        assert!((doubled.total_mass() - 48.0).abs() < 1e-12);
        // rotated cube: 12 distinct atoms
        let r = Rotation::from_quaternion(0.9, 0.1, 0.2, 0.3);
        let nu = mu.rotate(&r);
        let s = blaschke_sum(&mu, &nu, 1.0, 1.0).unwrap();
        assert_eq!(s.atoms().len(), 12);
        // identity: lambda2 = 0
        let same = blaschke_sum(&mu, &nu, 1.0, 0.0).unwrap();
        assert_eq!(same.atoms().len(), 6);
        assert!((same.total_mass() - 24.0).abs() < 1e-12);
        assert!(blaschke_sum(&mu, &nu, 0.0, 0.0).is_err());
    }

    #[test]
    fn realize_cube_from_support_samples() {
        let cube = Polytope3::cube(1.0);
        let dirs = support_grid(302);
        let vals: Vec<f64> = dirs.iter().map(|&u| cube.support_raw(u)).collect();
        let body = SupportSampleBody::new(dirs, vals).unwrap();
        let realized = body.to_polytope().unwrap();
        // grid contains the facet normals, so the cube is recovered exactly
        assert!((realized.polytope.volume() - 8.0).abs() < 0.01 * 8.0);
        assert!(realized.max_overshoot < 1e-9);
        assert!(realized.max_defect < 1e-9);
    }

    #[test]
    fn realize_ball_from_constant_samples() {
        let dirs = support_grid(402);
        let vals = vec![1.0; dirs.len()];
        let body = SupportSampleBody::new(dirs, vals).unwrap();
        let realized = body.to_polytope().unwrap();
        let v = realized.polytope.volume();
        assert!(
            (v - KAPPA_3).abs() < 0.02 * KAPPA_3,
            "circumscribed volume {v} vs {KAPPA_3}"
        );
        assert!(v >= KAPPA_3 - 1e-12); // circumscribed
    }

    #[test]
    fn non_sublinear_samples_show_a_defect() {
        // h = exaggerated zonal bump: not a support function
        let dirs = support_grid(146);
        let vals: Vec<f64> = dirs
            .iter()
            .map(|u| 1.0 + 0.9 * (u[2] * u[2] - 0.5).max(0.0) * 4.0)
            .collect();
        let body = SupportSampleBody::new(dirs, vals).unwrap();
        let realized = body.to_polytope().unwrap();
        assert!(realized.max_defect > 1e-2);
    }
}
