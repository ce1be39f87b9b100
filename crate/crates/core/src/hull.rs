//! Incremental 3D convex hull with coplanar-facet merging, plus the dual
//! halfspace-intersection routine used to realize bodies from support data.
//!
//! The hull is built point by point. A point is inserted when it is strictly
//! outside the current hull; the visible region is grown across borderline
//! coplanar faces before the horizon is extracted, which keeps the fan
//! consistent for inputs with many cofacial points (cubes, Minkowski sums,
//! quadrature-grid duals). Coplanar triangles are merged into facets at a
//! dihedral tolerance of 1e-10 so facet areas are stable.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geom::{add, cross, dist, dot, norm, normalize, scale, sub, Vec3};

const MERGE_DIHEDRAL: f64 = 1e-10;

#[derive(Debug, Clone)]
struct Face {
    v: [usize; 3],
    normal: Vec3,
    offset: f64,
}

/// A merged (maximal planar) facet of a hull.
#[derive(Debug, Clone)]
pub struct HullFacet {
    pub normal: Vec3,
    pub offset: f64,
    pub area: f64,
    /// Triangles (point index triples) making up the facet.
    pub tris: Vec<[usize; 3]>,
}

/// An edge between two merged facets.
#[derive(Debug, Clone, Copy)]
pub struct HullEdge {
    pub facet_a: usize,
    pub facet_b: usize,
    pub length: f64,
    /// Exterior dihedral angle (angle between the facet normals).
    pub angle: f64,
}

/// Convex hull of a 3D point set with merged facets.
#[derive(Debug, Clone)]
pub struct HullData {
    /// Indices of the input points that are vertices of the hull.
    pub vertex_ids: Vec<usize>,
    pub facets: Vec<HullFacet>,
    pub edges: Vec<HullEdge>,
    pub volume: f64,
}

/// Computes the convex hull of `points`, dropping facets of negligible area.
///
/// Fails with [`Error::Degenerate`] when the points do not affinely span R^3.
pub fn convex_hull(points: &[Vec3]) -> Result<HullData> {
    let mut hull = convex_hull_unfiltered(points)?;
    let total_area: f64 = hull.facets.iter().map(|f| f.area).sum();
    let kept: Vec<usize> = (0..hull.facets.len())
        .filter(|&g| hull.facets[g].area > 1e-13 * total_area)
        .collect();
    if kept.len() != hull.facets.len() {
        let remap: HashMap<usize, usize> = kept
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        hull.edges = hull
            .edges
            .iter()
            .filter_map(|e| match (remap.get(&e.facet_a), remap.get(&e.facet_b)) {
                (Some(&a), Some(&b)) => Some(HullEdge {
                    facet_a: a,
                    facet_b: b,
                    ..*e
                }),
                _ => None,
            })
            .collect();
        hull.facets = kept.into_iter().map(|g| hull.facets[g].clone()).collect();
    }
    Ok(hull)
}

/// Hull with all coplanar groups kept, including slivers. Internal; the dual
/// construction needs a facet for every primal vertex.
fn convex_hull_unfiltered(points: &[Vec3]) -> Result<HullData> {
    let n = points.len();
    if n < 4 {
        return Err(Error::Degenerate(format!(
            "need at least 4 points, got {n}"
        )));
    }
    let diam = diameter_estimate(points);
    if diam == 0.0 {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    let seed = initial_simplex(points, diam)?;
    let mut builder = HullBuilder {
        points,
        diam,
        eps: 1e-12 * diam,
        faces: Vec::new(),
        half_edges: HashMap::new(),
    };
    builder.init_simplex(seed);
    for p in 0..n {
        if !seed.contains(&p) {
            builder.insert(p);
        }
    }
    let tri_faces: Vec<Face> = builder.faces.into_iter().flatten().collect();
    if tri_faces.is_empty() {
        return Err(Error::Degenerate("hull collapsed".into()));
    }
    Ok(assemble(points, &tri_faces))
}

fn diameter_estimate(points: &[Vec3]) -> f64 {
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        for i in 0..3 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    dist(lo, hi)
}

fn initial_simplex(points: &[Vec3], diam: f64) -> Result<[usize; 4]> {
    let mut best = (0, 1, 0.0);
    for axis in 0..3 {
        let i_min = (0..points.len())
            .min_by(|&a, &b| points[a][axis].partial_cmp(&points[b][axis]).unwrap())
            .unwrap();
        let i_max = (0..points.len())
            .max_by(|&a, &b| points[a][axis].partial_cmp(&points[b][axis]).unwrap())
            .unwrap();
        let d = dist(points[i_min], points[i_max]);
        if d > best.2 {
            best = (i_min, i_max, d);
        }
    }
    let (a, b, spread) = best;
    if spread < 1e-14 * diam.max(1.0) {
        return Err(Error::Degenerate("points coincide".into()));
    }
    let ab = sub(points[b], points[a]);
    let c = (0..points.len())
        .max_by(|&i, &j| {
            let di = norm(cross(ab, sub(points[i], points[a])));
            let dj = norm(cross(ab, sub(points[j], points[a])));
            di.partial_cmp(&dj).unwrap()
        })
        .unwrap();
    if norm(cross(ab, sub(points[c], points[a]))) < 1e-13 * diam * diam {
        return Err(Error::Degenerate("points are collinear".into()));
    }
    let n0 = cross(ab, sub(points[c], points[a]));
    let d = (0..points.len())
        .max_by(|&i, &j| {
            let di = dot(n0, sub(points[i], points[a])).abs();
            let dj = dot(n0, sub(points[j], points[a])).abs();
            di.partial_cmp(&dj).unwrap()
        })
        .unwrap();
    if dot(n0, sub(points[d], points[a])).abs() < 1e-13 * diam * diam * diam {
        return Err(Error::Degenerate("points are coplanar".into()));
    }
    Ok([a, b, c, d])
}

struct HullBuilder<'a> {
    points: &'a [Vec3],
    diam: f64,
    eps: f64,
    faces: Vec<Option<Face>>,
    // directed edge (a,b) -> face id containing that half-edge
    half_edges: HashMap<(usize, usize), usize>,
}

impl<'a> HullBuilder<'a> {
    fn make_face(&self, v: [usize; 3], fallback: Option<(Vec3, f64)>) -> Face {
        let (a, b, c) = (self.points[v[0]], self.points[v[1]], self.points[v[2]]);
        let raw = cross(sub(b, a), sub(c, a));
        if norm(raw) < 1e-22 * self.diam * self.diam {
            // degenerate sliver: inherit the neighbor plane we are fanning from
            if let Some((normal, offset)) = fallback {
                return Face { v, normal, offset };
            }
        }
        let normal = normalize(raw).unwrap_or([0.0, 0.0, 1.0]);
        Face {
            v,
            normal,
            offset: dot(normal, a),
        }
    }

    fn add_face(&mut self, v: [usize; 3], fallback: Option<(Vec3, f64)>) {
        let id = self.faces.len();
        let face = self.make_face(v, fallback);
        self.faces.push(Some(face));
        self.half_edges.insert((v[0], v[1]), id);
        self.half_edges.insert((v[1], v[2]), id);
        self.half_edges.insert((v[2], v[0]), id);
    }

    fn remove_face(&mut self, id: usize) {
        if let Some(face) = self.faces[id].take() {
            let v = face.v;
            self.half_edges.remove(&(v[0], v[1]));
            self.half_edges.remove(&(v[1], v[2]));
            self.half_edges.remove(&(v[2], v[0]));
        }
    }

    fn init_simplex(&mut self, seed: [usize; 4]) {
        let [a, b, c, d] = seed;
        let orient = dot(
            cross(
                sub(self.points[b], self.points[a]),
                sub(self.points[c], self.points[a]),
            ),
            sub(self.points[d], self.points[a]),
        );
        let (b, c) = if orient > 0.0 { (c, b) } else { (b, c) };
        self.add_face([a, b, c], None);
        self.add_face([a, c, d], None);
        self.add_face([c, b, d], None);
        self.add_face([b, a, d], None);
    }

    fn signed_dist(&self, face: &Face, p: usize) -> f64 {
        dot(face.normal, self.points[p]) - face.offset
    }

    fn insert(&mut self, p: usize) {
        let mut visible: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.faces.len()];
        for (id, f) in self.faces.iter().enumerate() {
            if let Some(face) = f {
                if self.signed_dist(face, p) > self.eps {
                    visible.push(id);
                    mark[id] = true;
                }
            }
        }
        if visible.is_empty() {
            return; // inside or on the hull
        }
        // absorb borderline-coplanar neighbors so horizon edges are convex
        let mut queue = visible.clone();
        while let Some(id) = queue.pop() {
            let v = self.faces[id].as_ref().unwrap().v;
            for (a, b) in [(v[1], v[0]), (v[2], v[1]), (v[0], v[2])] {
                if let Some(&nb) = self.half_edges.get(&(a, b)) {
                    if !mark[nb] {
                        let face = self.faces[nb].as_ref().unwrap();
                        if self.signed_dist(face, p) > -self.eps {
                            mark[nb] = true;
                            visible.push(nb);
                            queue.push(nb);
                        }
                    }
                }
            }
        }
        // horizon: half-edges of visible faces whose twin survives
        let mut horizon: Vec<((usize, usize), (Vec3, f64))> = Vec::new();
        for &id in &visible {
            let face = self.faces[id].as_ref().unwrap();
            let v = face.v;
            let plane = (face.normal, face.offset);
            for (a, b) in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
                match self.half_edges.get(&(b, a)) {
                    Some(&twin) if mark[twin] => {}
                    _ => horizon.push(((a, b), plane)),
                }
            }
        }
        if horizon.is_empty() {
            return; // expansion swallowed the hull; treat as interior noise
        }
        for &id in &visible {
            self.remove_face(id);
        }
        for ((a, b), plane) in horizon {
            self.add_face([a, b, p], Some(plane));
        }
    }
}

/// Groups coplanar adjacent triangles into facets and derives areas, edges,
/// volume, and the hull vertex set.
fn assemble(points: &[Vec3], tris: &[Face]) -> HullData {
    let nt = tris.len();
    let mut tri_area = vec![0.0; nt];
    let mut tri_normal = vec![[0.0, 0.0, 1.0]; nt];
    for (i, f) in tris.iter().enumerate() {
        let (a, b, c) = (points[f.v[0]], points[f.v[1]], points[f.v[2]]);
        let raw = cross(sub(b, a), sub(c, a));
        tri_area[i] = 0.5 * norm(raw);
        match normalize(raw) {
            Some(n) => tri_normal[i] = n,
            None => tri_normal[i] = f.normal,
        }
    }
    let max_area = tri_area.iter().cloned().fold(0.0, f64::max);
    let sliver = |i: usize| tri_area[i] <= 1e-14 * max_area;

    let mut edge_map: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, f) in tris.iter().enumerate() {
        let v = f.v;
        for (a, b) in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
            edge_map.insert((a, b), i);
        }
    }
    let neighbors = |i: usize| -> Vec<usize> {
        let v = tris[i].v;
        let mut out = Vec::with_capacity(3);
        for (a, b) in [(v[1], v[0]), (v[2], v[1]), (v[0], v[2])] {
            if let Some(&j) = edge_map.get(&(a, b)) {
                out.push(j);
            }
        }
        out
    };

    // grow groups from solid triangles first; slivers join whichever
    // geometric group reaches them
    let mut order: Vec<usize> = (0..nt).collect();
    order.sort_by(|&a, &b| {
        tri_area[b]
            .partial_cmp(&tri_area[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut group = vec![usize::MAX; nt];
    let mut group_normal: Vec<Vec3> = Vec::new();
    for &start in &order {
        if group[start] != usize::MAX {
            continue;
        }
        let g = group_normal.len();
        group[start] = g;
        let mut acc = scale(tri_normal[start], tri_area[start].max(1e-300));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in neighbors(i) {
                if group[j] != usize::MAX {
                    continue;
                }
                let joins = if sliver(j) {
                    true
                } else if let Some(gn) = normalize(acc) {
                    let c = dot(gn, tri_normal[j]).clamp(-1.0, 1.0);
                    c.acos() <= MERGE_DIHEDRAL
                } else {
                    true
                };
                if joins {
                    group[j] = g;
                    acc = add(acc, scale(tri_normal[j], tri_area[j]));
                    stack.push(j);
                }
            }
        }
        group_normal.push(normalize(acc).unwrap_or(tri_normal[start]));
    }
    let n_groups = group_normal.len();

    let mut facets: Vec<HullFacet> = (0..n_groups)
        .map(|g| HullFacet {
            normal: group_normal[g],
            offset: 0.0,
            area: 0.0,
            tris: Vec::new(),
        })
        .collect();
    for i in 0..nt {
        let f = &mut facets[group[i]];
        f.area += tri_area[i];
        f.tris.push(tris[i].v);
    }
    for f in facets.iter_mut() {
        let mut acc = 0.0;
        let mut wsum = 0.0;
        for t in &f.tris {
            let w = triangle_area(points, *t).max(1e-300);
            let centroid = scale(
                add(add(points[t[0]], points[t[1]]), points[t[2]]),
                1.0 / 3.0,
            );
            acc += w * dot(f.normal, centroid);
            wsum += w;
        }
        f.offset = acc / wsum;
    }

    let mut edge_len: HashMap<(usize, usize), f64> = HashMap::new();
    for i in 0..nt {
        let v = tris[i].v;
        for (a, b) in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
            if a < b {
                if let Some(&j) = edge_map.get(&(b, a)) {
                    let (gi, gj) = (group[i], group[j]);
                    if gi != gj {
                        let key = (gi.min(gj), gi.max(gj));
                        *edge_len.entry(key).or_insert(0.0) += dist(points[a], points[b]);
                    }
                }
            }
        }
    }
    let mut edge_keys: Vec<_> = edge_len.keys().copied().collect();
    edge_keys.sort_unstable();
    let edges = edge_keys
        .into_iter()
        .map(|(ga, gb)| {
            let c = dot(facets[ga].normal, facets[gb].normal).clamp(-1.0, 1.0);
            HullEdge {
                facet_a: ga,
                facet_b: gb,
                length: edge_len[&(ga, gb)],
                angle: c.acos(),
            }
        })
        .collect();

    let mut volume = 0.0;
    for f in tris {
        let (a, b, c) = (points[f.v[0]], points[f.v[1]], points[f.v[2]]);
        volume += dot(a, cross(b, c)) / 6.0;
    }
    let mut on_hull: Vec<usize> = tris.iter().flat_map(|f| f.v).collect();
    on_hull.sort_unstable();
    on_hull.dedup();
    HullData {
        vertex_ids: on_hull,
        facets,
        edges,
        volume,
    }
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<Vec3> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    if det.abs() < 1e-14 * scale.powi(3).max(1e-300) {
        return None;
    }
    let inv = 1.0 / det;
    let cof =
        |r1: usize, c1: usize, r2: usize, c2: usize| a[r1][c1] * a[r2][c2] - a[r1][c2] * a[r2][c1];
    Some([
        inv * (b[0] * cof(1, 1, 2, 2) - b[1] * cof(0, 1, 2, 2) + b[2] * cof(0, 1, 1, 2)),
        inv * (-b[0] * cof(1, 0, 2, 2) + b[1] * cof(0, 0, 2, 2) - b[2] * cof(0, 0, 1, 2)),
        inv * (b[0] * cof(1, 0, 2, 1) - b[1] * cof(0, 0, 2, 1) + b[2] * cof(0, 0, 1, 1)),
    ])
}

fn triangle_area(points: &[Vec3], t: [usize; 3]) -> f64 {
    0.5 * norm(cross(
        sub(points[t[1]], points[t[0]]),
        sub(points[t[2]], points[t[0]]),
    ))
}

/// Bounded intersection of halfspaces `{x : x . normal_i <= offset_i}`
/// computed by polar duality. Requires every offset strictly positive
/// (origin interior); callers recenter first.
#[derive(Debug, Clone)]
pub struct Intersection {
    pub vertices: Vec<Vec3>,
    /// Per input plane: vertex indices in cyclic order (empty = inactive).
    pub facet_polygons: Vec<Vec<usize>>,
    pub facet_areas: Vec<f64>,
    /// (plane_i, plane_j, shared edge length), i < j.
    pub edges: Vec<(usize, usize, f64)>,
    pub volume: f64,
}

pub fn halfspace_intersection(normals: &[Vec3], offsets: &[f64]) -> Result<Intersection> {
    let m = normals.len();
    if m < 4 {
        return Err(Error::Infeasible(format!(
            "{m} halfspaces cannot bound a body"
        )));
    }
    let mut duals = Vec::with_capacity(m);
    for i in 0..m {
        if !(offsets[i] > 0.0) {
            return Err(Error::Numeric(format!(
                "support number {} not positive after recentering: {}",
                i, offsets[i]
            )));
        }
        duals.push(scale(normals[i], 1.0 / offsets[i]));
    }
    let hull = convex_hull_unfiltered(&duals)
        .map_err(|_| Error::Numeric("halfspace intersection is unbounded or empty".into()))?;

    // primal vertex per merged dual facet: least-squares intersection point
    // of all planes incident to the facet (robust against sliver groups,
    // whose fitted dual plane is unreliable)
    let mut vertices = Vec::with_capacity(hull.facets.len());
    for f in &hull.facets {
        if f.offset <= 1e-12 {
            return Err(Error::Numeric(
                "halfspace intersection is unbounded (dual facet through origin)".into(),
            ));
        }
        let mut planes: Vec<usize> = f.tris.iter().flatten().copied().collect();
        planes.sort_unstable();
        planes.dedup();
        let mut ata = [[0.0f64; 3]; 3];
        let mut atb = [0.0f64; 3];
        for &p in &planes {
            let u = normals[p];
            for r in 0..3 {
                for c in 0..3 {
                    ata[r][c] += u[r] * u[c];
                }
                atb[r] += u[r] * offsets[p];
            }
        }
        let v = solve3(ata, atb).ok_or_else(|| {
            Error::Numeric("ill-conditioned vertex in halfspace intersection".into())
        })?;
        vertices.push(v);
    }
    // dual triangle -> facet group, and half-edge -> (group, triangle)
    let mut tri_group: HashMap<[usize; 3], usize> = HashMap::new();
    for (g, f) in hull.facets.iter().enumerate() {
        for t in &f.tris {
            tri_group.insert(*t, g);
        }
    }
    let mut he: HashMap<(usize, usize), ([usize; 3], usize)> = HashMap::new();
    for (t, &g) in &tri_group {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            he.insert((a, b), (*t, g));
        }
    }
    // primal edges: one per dual edge whose incident triangles lie in
    // different merged facets
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for (&(a, b), &(_, g1)) in he.iter() {
        if a < b {
            if let Some(&(_, g2)) = he.get(&(b, a)) {
                if g1 != g2 {
                    edges.push((a, b, dist(vertices[g1], vertices[g2])));
                }
            }
        }
    }
    edges.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));

    // incident triangles per dual vertex (= active plane)
    let mut incident: HashMap<usize, Vec<[usize; 3]>> = HashMap::new();
    for t in tri_group.keys() {
        for &v in t {
            incident.entry(v).or_default().push(*t);
        }
    }
    let mut facet_polygons = vec![Vec::new(); m];
    let mut facet_areas = vec![0.0; m];
    for i in 0..m {
        let Some(tris) = incident.get(&i) else {
            continue; // inactive plane
        };
        let start = *tris.iter().min_by_key(|t| (t[0], t[1], t[2])).unwrap();
        let mut poly_groups: Vec<usize> = Vec::new();
        let mut cur = start;
        loop {
            poly_groups.push(tri_group[&cur]);
            let pos = cur.iter().position(|&v| v == i).unwrap();
            let next = cur[(pos + 1) % 3];
            let Some(&(t2, _)) = he.get(&(next, i)) else {
                break;
            };
            if t2 == start {
                break;
            }
            cur = t2;
            if poly_groups.len() > tris.len() + 1 {
                break; // topological guard
            }
        }
        let mut poly: Vec<usize> = Vec::new();
        for g in poly_groups {
            if poly.last() != Some(&g) {
                poly.push(g);
            }
        }
        while poly.len() > 1 && poly.first() == poly.last() {
            poly.pop();
        }
        if poly.len() < 3 {
            continue; // plane touches only at a vertex or edge
        }
        let c0 = vertices[poly[0]];
        let mut area2 = [0.0; 3];
        for w in 1..poly.len() - 1 {
            let e1 = sub(vertices[poly[w]], c0);
            let e2 = sub(vertices[poly[w + 1]], c0);
            let cr = cross(e1, e2);
            for k in 0..3 {
                area2[k] += cr[k];
            }
        }
        facet_areas[i] = 0.5 * dot(area2, normals[i]).abs();
        facet_polygons[i] = poly;
    }
    let volume = (0..m).map(|i| offsets[i] * facet_areas[i]).sum::<f64>() / 3.0;
    Ok(Intersection {
        vertices,
        facet_polygons,
        facet_areas,
        edges,
        volume,
    })
}
