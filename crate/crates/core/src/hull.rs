//! 3D convex hull by incremental insertion with conflict lists.
//!
//! Visibility is decided with exact orientation predicates, so the facet
//! structure is combinatorially valid for any input in general position and
//! for coplanar groups (which end up triangulated). Facet planes used by the
//! width computation are recomputed in floating point afterwards.

use std::collections::HashMap;

use robust::{orient3d, Coord3D};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geom::{Point3, Vec3};

/// Minimum thickness of a point set for a full-dimensional hull.
pub const COPLANAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Facet {
    /// Counter-clockwise seen from outside.
    pub vertices: [usize; 3],
    /// Outward unit normal.
    pub normal: Vec3,
    /// `normal . x` on the facet plane.
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Edge {
    /// Sorted vertex indices.
    pub vertices: [usize; 2],
    pub facets: [usize; 2],
}

#[derive(Debug, Clone)]
pub struct Polytope {
    vertices: Vec<Point3>,
    facets: Vec<Facet>,
    edges: Vec<Edge>,
    neighbors: Vec<Vec<usize>>,
}

impl Polytope {
    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Vertices adjacent to `v` along hull edges.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// `V - E + F`; 2 for a closed triangulated sphere.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.facets.len() as i64
    }

    /// Largest signed distance of any of `points` outside any facet plane.
    pub fn max_outside_distance(&self, points: &[Point3], exec: Execution) -> f64 {
        exec.map(points, |p| {
            self.facets
                .iter()
                .map(|f| f.normal.dot(*p) - f.offset)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Vertex minimizing `dir . x`, by descent along hull edges from `start`.
    pub fn lowest_vertex_from(&self, dir: Vec3, start: usize) -> usize {
        let mut v = start;
        let mut best = dir.dot(self.vertices[v]);
        loop {
            let mut next = v;
            for &w in &self.neighbors[v] {
                let h = dir.dot(self.vertices[w]);
                if h < best {
                    best = h;
                    next = w;
                }
            }
            if next == v {
                return v;
            }
            v = next;
        }
    }
}

#[inline]
fn coord(p: Point3) -> Coord3D<f64> {
    Coord3D {
        x: p.x,
        y: p.y,
        z: p.z,
    }
}

/// Negative when `p` is strictly on the outer side of triangle `(a, b, c)`.
#[inline]
fn orientation(a: Point3, b: Point3, c: Point3, p: Point3) -> f64 {
    orient3d(coord(a), coord(b), coord(c), coord(p))
}

struct Face {
    v: [usize; 3],
    normal: Vec3,
    outside: Vec<usize>,
    alive: bool,
}

fn plane_of(pts: &[Point3], v: [usize; 3]) -> (Vec3, f64) {
    let (a, b, c) = (pts[v[0]], pts[v[1]], pts[v[2]]);
    let n = (b - a).cross(c - a).try_normalize().unwrap_or(Vec3::ZERO);
    (n, n.dot(a))
}

struct Builder<'a> {
    pts: &'a [Point3],
    faces: Vec<Face>,
    edge_face: HashMap<(usize, usize), usize>,
    stamp: Vec<usize>,
}

impl<'a> Builder<'a> {
    fn sees(&self, f: usize, p: usize) -> f64 {
        let [a, b, c] = self.faces[f].v;
        orientation(self.pts[a], self.pts[b], self.pts[c], self.pts[p])
    }

    fn add_face(&mut self, v: [usize; 3]) -> usize {
        let (normal, _) = plane_of(self.pts, v);
        let id = self.faces.len();
        self.faces.push(Face {
            v,
            normal,
            outside: Vec::new(),
            alive: true,
        });
        self.stamp.push(usize::MAX);
        for k in 0..3 {
            let prev = self.edge_face.insert((v[k], v[(k + 1) % 3]), id);
            debug_assert!(prev.is_none(), "directed edge used twice");
        }
        id
    }

    fn kill_face(&mut self, f: usize) -> Vec<usize> {
        let v = self.faces[f].v;
        for k in 0..3 {
            self.edge_face.remove(&(v[k], v[(k + 1) % 3]));
        }
        self.faces[f].alive = false;
        std::mem::take(&mut self.faces[f].outside)
    }

    fn twin(&self, u: usize, v: usize) -> usize {
        self.edge_face[&(v, u)]
    }

    /// Inserts the farthest outside point of face `fi`, returning new faces.
    fn expand(&mut self, fi: usize, round: usize) -> Vec<usize> {
        let face = &self.faces[fi];
        let apex = *face
            .outside
            .iter()
            .max_by(|&&i, &&j| {
                let di = face.normal.dot(self.pts[i]);
                let dj = face.normal.dot(self.pts[j]);
                di.total_cmp(&dj).then(j.cmp(&i))
            })
            .expect("nonempty outside set");

        // faces on or above the apex plane, connected to fi
        let mut visible = vec![fi];
        self.stamp[fi] = round;
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head];
            head += 1;
            let v = self.faces[f].v;
            for k in 0..3 {
                let g = self.twin(v[k], v[(k + 1) % 3]);
                if self.stamp[g] != round && self.sees(g, apex) <= 0.0 {
                    self.stamp[g] = round;
                    visible.push(g);
                }
            }
        }

        let mut horizon = Vec::new();
        for &f in &visible {
            let v = self.faces[f].v;
            for k in 0..3 {
                let (a, b) = (v[k], v[(k + 1) % 3]);
                if self.stamp[self.twin(a, b)] != round {
                    horizon.push((a, b));
                }
            }
        }

        let mut orphans = Vec::new();
        for &f in &visible {
            orphans.extend(self.kill_face(f));
        }
        let new_faces: Vec<usize> = horizon
            .into_iter()
            .map(|(a, b)| self.add_face([a, b, apex]))
            .collect();
        for q in orphans {
            if q == apex {
                continue;
            }
            if let Some(&f) = new_faces.iter().find(|&&f| self.sees(f, q) < 0.0) {
                self.faces[f].outside.push(q);
            }
        }
        new_faces
    }
}

fn initial_simplex(pts: &[Point3]) -> Result<[usize; 4]> {
    let mut extremes = Vec::with_capacity(6);
    for axis in 0..3 {
        let key = |i: &usize| pts[*i][axis];
        let idx = 0..pts.len();
        extremes.push(idx.clone().min_by(|a, b| key(a).total_cmp(&key(b))).unwrap());
        extremes.push(idx.max_by(|a, b| key(a).total_cmp(&key(b))).unwrap());
    }
    let mut best = (0.0, 0, 0);
    for &i in &extremes {
        for &j in &extremes {
            let d = pts[i].distance(pts[j]);
            if d > best.0 {
                best = (d, i, j);
            }
        }
    }
    let (span, i0, i1) = best;
    if span <= COPLANAR_TOL {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    let dir = (pts[i1] - pts[i0]) / span;
    let (i2, line_dist) = (0..pts.len())
        .map(|i| (i, (pts[i] - pts[i0]).cross(dir).norm()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    if line_dist <= COPLANAR_TOL {
        return Err(Error::Degenerate("points are collinear".into()));
    }
    let n = (pts[i1] - pts[i0])
        .cross(pts[i2] - pts[i0])
        .try_normalize()
        .ok_or_else(|| Error::Degenerate("points are collinear".into()))?;
    let (i3, thickness) = (0..pts.len())
        .map(|i| (i, n.dot(pts[i] - pts[i0]).abs()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    if thickness <= COPLANAR_TOL {
        return Err(Error::Degenerate(format!(
            "points are coplanar (thickness {thickness:e})"
        )));
    }
    Ok([i0, i1, i2, i3])
}

pub fn convex_hull(points: &[Point3]) -> Result<Polytope> {
    if points.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: points.len(),
        });
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    let simplex = initial_simplex(points)?;
    let mut b = Builder {
        pts: points,
        faces: Vec::new(),
        edge_face: HashMap::new(),
        stamp: Vec::new(),
    };
    for skip in 0..4 {
        let mut v: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| simplex[k]).collect();
        let opposite = points[simplex[skip]];
        if orientation(points[v[0]], points[v[1]], points[v[2]], opposite) < 0.0 {
            v.swap(1, 2);
        }
        b.add_face([v[0], v[1], v[2]]);
    }
    for i in 0..points.len() {
        if simplex.contains(&i) {
            continue;
        }
        if let Some(f) = (0..4).find(|&f| b.sees(f, i) < 0.0) {
            b.faces[f].outside.push(i);
        }
    }

    let mut stack: Vec<usize> = (0..4).filter(|&f| !b.faces[f].outside.is_empty()).collect();
    let mut round = 0;
    while let Some(f) = stack.pop() {
        if !b.faces[f].alive || b.faces[f].outside.is_empty() {
            continue;
        }
        for nf in b.expand(f, round) {
            if !b.faces[nf].outside.is_empty() {
                stack.push(nf);
            }
        }
        round += 1;
    }
    Ok(finish(points, b))
}

fn finish(points: &[Point3], b: Builder<'_>) -> Polytope {
    let alive: Vec<&Face> = b.faces.iter().filter(|f| f.alive).collect();
    let mut remap = vec![usize::MAX; points.len()];
    let mut used: Vec<usize> = alive.iter().flat_map(|f| f.v).collect();
    used.sort_unstable();
    used.dedup();
    for (new, &old) in used.iter().enumerate() {
        remap[old] = new;
    }
    let vertices: Vec<Point3> = used.iter().map(|&i| points[i]).collect();

    let facets: Vec<Facet> = alive
        .iter()
        .map(|f| {
            let v = f.v.map(|i| remap[i]);
            let (normal, offset) = plane_of(&vertices, v);
            Facet {
                vertices: v,
                normal,
                offset,
            }
        })
        .collect();

    let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * facets.len());
    for (k, f) in facets.iter().enumerate() {
        for j in 0..3 {
            directed.insert((f.vertices[j], f.vertices[(j + 1) % 3]), k);
        }
    }
    let mut edges: Vec<Edge> = directed
        .iter()
        .filter(|((u, v), _)| u < v)
        .map(|(&(u, v), &f)| Edge {
            vertices: [u, v],
            facets: [f, directed[&(v, u)]],
        })
        .collect();
    edges.sort_unstable_by_key(|e| e.vertices);

    let mut neighbors = vec![Vec::new(); vertices.len()];
    for e in &edges {
        neighbors[e.vertices[0]].push(e.vertices[1]);
        neighbors[e.vertices[1]].push(e.vertices[0]);
    }
    Polytope {
        vertices,
        facets,
        edges,
        neighbors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cube() -> Vec<Point3> {
        let mut v = Vec::new();
        for i in 0..8 {
            v.push(Vec3::new(
                (i & 1) as f64,
                ((i >> 1) & 1) as f64,
                ((i >> 2) & 1) as f64,
            ));
        }
        v
    }

    #[test]
    fn orientation_sign_convention() {
        let o = orientation(Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::Z);
        assert!(o < 0.0);
    }

    #[test]
    fn cube_hull() {
        let h = convex_hull(&cube()).unwrap();
        assert_eq!(h.vertices().len(), 8);
        assert_eq!(h.facets().len(), 12);
        assert_eq!(h.edges().len(), 18);
        assert_eq!(h.euler_characteristic(), 2);
        // outward normals
        let c = Vec3::new(0.5, 0.5, 0.5);
        for f in h.facets() {
            assert!(f.normal.dot(c) < f.offset);
        }
    }

    #[test]
    fn tetrahedron_hull() {
        let h = convex_hull(&crate::family::cube_tetrahedron()).unwrap();
        assert_eq!(h.facets().len(), 4);
        assert_eq!(h.edges().len(), 6);
    }

    #[test]
    fn interior_points_dropped() {
        let mut pts = cube();
        pts.push(Vec3::new(0.5, 0.5, 0.5));
        pts.push(Vec3::new(0.2, 0.9, 0.1));
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.vertices().len(), 8);
    }

    #[test]
    fn degenerate_inputs() {
        let square = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ];
        assert!(matches!(convex_hull(&square), Err(Error::Degenerate(_))));
        let line: Vec<_> = (0..5).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        assert!(matches!(convex_hull(&line), Err(Error::Degenerate(_))));
        assert!(matches!(
            convex_hull(&square[..3]),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn random_clouds_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [5usize, 20, 200, 2000] {
            let pts: Vec<Point3> = (0..n)
                .map(|_| Vec3::new(rng.gen(), rng.gen(), rng.gen()))
                .collect();
            let h = convex_hull(&pts).unwrap();
            assert_eq!(h.euler_characteristic(), 2);
            assert!(h.max_outside_distance(&pts, Execution::default()) < 1e-12);
            for e in h.edges() {
                assert_ne!(e.facets[0], e.facets[1]);
            }
        }
    }

    #[test]
    fn points_on_sphere_all_kept() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<Point3> = (0..500)
            .map(|_| {
                Vec3::new(
                    rng.gen::<f64>() - 0.5,
                    rng.gen::<f64>() - 0.5,
                    rng.gen::<f64>() - 0.5,
                )
                .try_normalize()
                .unwrap()
            })
            .collect();
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.vertices().len(), 500);
        assert_eq!(h.facets().len(), 2 * 500 - 4);
    }
}
