//! Width of a point set: the minimum distance between parallel support planes.
//!
//! The minimum over directions is attained where the two support planes touch
//! a facet and a vertex, or two skew edges. Facet antipodes are found by
//! descent on the vertex graph. Edge pairs come from walking each edge's arc
//! on the Gauss sphere and recording every change of the opposite support
//! vertex, which keeps the work close to linear in the hull size.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geom::{any_orthogonal, Point3, Polyline3, Vec3};
use crate::hull::{convex_hull, Polytope};
use crate::optim::{nelder_mead, NelderMeadConfig};

/// Pass tolerance for curves whose samples are their exact vertices.
pub const POLYGONAL_TOL: f64 = 1e-9;
/// Pass tolerance for sampled smooth curves.
pub const SAMPLED_TOL: f64 = 1e-3;

/// Slack allowed when checking that a candidate slab really supports the hull.
const SLAB_TOL: f64 = 1e-9;
/// Directions sampled for the initial upper bound used in pruning.
const BOUND_DIRECTIONS: usize = 1024;
const PRUNE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AntipodalPair {
    FacetVertex { facet: [Point3; 3], vertex: Point3 },
    EdgeEdge { first: [Point3; 2], second: [Point3; 2] },
    /// The input spans less than three dimensions.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WidthReport {
    pub width: f64,
    /// Unit normal of the width slab, pointing from `near_point` to `far_point`.
    pub direction: Vec3,
    pub achieving_pair: AntipodalPair,
    pub passes_unit: bool,
    pub tol: f64,
    pub degenerate: bool,
    pub near_point: Point3,
    /// Point at distance `width` from the lower support plane.
    pub far_point: Point3,
}

impl WidthReport {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.passes_unit = self.width >= 1.0 - tol;
        self
    }
}

/// Indices and values of the lowest and highest projections onto `dir`.
fn extent(points: &[Point3], dir: Vec3) -> (usize, usize, f64, f64) {
    let mut lo = (0, f64::INFINITY);
    let mut hi = (0, f64::NEG_INFINITY);
    for (i, p) in points.iter().enumerate() {
        let h = dir.dot(*p);
        if h < lo.1 {
            lo = (i, h);
        }
        if h > hi.1 {
            hi = (i, h);
        }
    }
    (lo.0, hi.0, lo.1, hi.1)
}

/// Extent of `points` along `dir` (normalized internally).
pub fn support_width(points: &[Point3], dir: Vec3) -> Result<f64> {
    let dir = dir.try_normalize().ok_or(Error::ZeroVector("direction"))?;
    if points.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    let (_, _, lo, hi) = extent(points, dir);
    Ok(hi - lo)
}

#[derive(Debug, Clone, Copy)]
enum Feature {
    Facet { facet: usize, vertex: usize },
    Edges { edge: usize, v: usize, w: usize },
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    local: f64,
    dir: Vec3,
    feature: Feature,
}

/// Lowest vertices for a latitude-longitude grid of directions, used as
/// starting points for descents on the vertex graph.
struct SupportIndex {
    rows: usize,
    cols: usize,
    lowest: Vec<usize>,
}

impl SupportIndex {
    const ROWS: usize = 32;

    fn new(poly: &Polytope) -> Self {
        let rows = Self::ROWS;
        let cols = 2 * rows;
        let mut lowest = vec![0; rows * cols];
        let mut v = 0;
        // serpentine sweep so that consecutive cells are neighbors
        for i in 0..rows {
            for jj in 0..cols {
                let j = if i % 2 == 0 { jj } else { cols - 1 - jj };
                v = poly.lowest_vertex_from(Self::center(rows, cols, i, j), v);
                lowest[i * cols + j] = v;
            }
        }
        Self { rows, cols, lowest }
    }

    fn center(rows: usize, cols: usize, i: usize, j: usize) -> Vec3 {
        let theta = PI * (i as f64 + 0.5) / rows as f64;
        let phi = TAU * (j as f64 + 0.5) / cols as f64;
        Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
    }

    fn start(&self, d: Vec3) -> usize {
        let theta = d.z.clamp(-1.0, 1.0).acos();
        let phi = d.y.atan2(d.x).rem_euclid(TAU);
        let i = ((theta / PI * self.rows as f64) as usize).min(self.rows - 1);
        let j = ((phi / TAU * self.cols as f64) as usize).min(self.cols - 1);
        self.lowest[i * self.cols + j]
    }

    /// Vertex minimizing `d . x`.
    fn lowest(&self, poly: &Polytope, d: Vec3) -> usize {
        poly.lowest_vertex_from(d, self.start(d))
    }
}

/// Support width in a near-optimal direction: best of a coarse direction
/// sample, polished by a short simplex search.
fn sampled_upper_bound(verts: &[Point3]) -> f64 {
    let sw = |d: Vec3| {
        let (_, _, lo, hi) = extent(verts, d);
        hi - lo
    };
    let (mut best, d0) = fibonacci_hemisphere(BOUND_DIRECTIONS)
        .into_iter()
        .map(|d| (sw(d), d))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("directions");
    let t1 = any_orthogonal(d0);
    let t2 = d0.cross(t1);
    let f = |x: &[f64]| sw((d0 + t1 * x[0] + t2 * x[1]).try_normalize().unwrap_or(d0));
    let step = (TAU / BOUND_DIRECTIONS as f64).sqrt();
    let cfg = NelderMeadConfig {
        max_evals: 200,
        x_tol: 1e-9,
    };
    best = best.min(nelder_mead(f, &[0.0, 0.0], &[step, step], &cfg).f);
    best
}

/// Great-circle arc of outward directions at which edge `ei` supports the hull.
struct EdgeArc {
    na: Vec3,
    k: Vec3,
    span: f64,
    p0: Point3,
    e1: Vec3,
}

impl EdgeArc {
    fn new(poly: &Polytope, ei: usize) -> Option<Self> {
        let edge = poly.edges()[ei];
        let na = poly.facets()[edge.facets[0]].normal;
        let nb = poly.facets()[edge.facets[1]].normal;
        let cos = na.dot(nb).clamp(-1.0, 1.0);
        let span = cos.acos();
        let k = (nb - na * cos).try_normalize()?;
        if span < 1e-15 {
            return None;
        }
        let [p0, p1] = edge.vertices.map(|i| poly.vertices()[i]);
        Some(Self {
            na,
            k,
            span,
            p0,
            e1: p1 - p0,
        })
    }

    fn at(&self, s: f64) -> Vec3 {
        self.na * s.cos() + self.k * s.sin()
    }

    /// Coefficients of `s -> d(s) . (p0 - x)`.
    fn slab(&self, x: Point3) -> (f64, f64) {
        let r = self.p0 - x;
        (self.na.dot(r), self.k.dot(r))
    }
}

/// `x + 2 pi m` in `[lo, lo + 2 pi)`.
fn wrap_from(x: f64, lo: f64) -> f64 {
    lo + (x - lo).rem_euclid(TAU)
}

/// Minimum over `[s0, s1]` of the upper envelope of two sinusoids
/// `A cos s + B sin s`.
fn envelope_min(g: [(f64, f64); 2], s0: f64, s1: f64) -> f64 {
    let eval = |s: f64| {
        let (sn, cs) = s.sin_cos();
        (g[0].0 * cs + g[0].1 * sn).max(g[1].0 * cs + g[1].1 * sn)
    };
    let mut best = eval(s0).min(eval(s1));
    let (da, db) = (g[0].0 - g[1].0, g[0].1 - g[1].1);
    let mut critical = vec![
        wrap_from(g[0].1.atan2(g[0].0) + PI, s0),
        wrap_from(g[1].1.atan2(g[1].0) + PI, s0),
    ];
    if da != 0.0 || db != 0.0 {
        let base = db.atan2(da);
        critical.push(wrap_from(base + FRAC_PI_2, s0));
        critical.push(wrap_from(base - FRAC_PI_2, s0));
    }
    for s in critical {
        if s <= s1 {
            best = best.min(eval(s));
        }
    }
    best
}

/// Follows the lowest vertex along the arc from `(s, v)` up to `end`, keeping
/// the narrowest edge-edge slab met on the way.
fn walk_arc(
    poly: &Polytope,
    arc: &EdgeArc,
    ei: usize,
    mut s: f64,
    mut v: usize,
    end: f64,
    best: &mut Option<Candidate>,
) {
    let verts = poly.vertices();
    let mut prev = usize::MAX;
    for _ in 0..verts.len() + 8 {
        let mut exit: Option<(f64, usize)> = None;
        for &w in poly.neighbors(v) {
            if w == prev {
                continue;
            }
            let dx = verts[w] - verts[v];
            let (alpha, beta) = (arc.na.dot(dx), arc.k.dot(dx));
            if alpha == 0.0 && beta == 0.0 {
                continue;
            }
            // g(s) = alpha cos s + beta sin s turns negative at delta + pi/2
            let sx = wrap_from(beta.atan2(alpha) + FRAC_PI_2, s - 1e-10);
            if sx <= end && exit.is_none_or(|(b, _)| sx < b) {
                exit = Some((sx, w));
            }
        }
        let Some((sx, w)) = exit else { break };
        if let Some(n) = arc.e1.cross(verts[w] - verts[v]).try_normalize() {
            let n = if n.dot(arc.at(sx)) < 0.0 { -n } else { n };
            let local = n.dot(arc.p0 - verts[v]);
            if best.is_none_or(|b| local < b.local) {
                *best = Some(Candidate {
                    local,
                    dir: n,
                    feature: Feature::Edges { edge: ei, v, w },
                });
            }
        }
        prev = v;
        v = w;
        s = s.max(sx);
    }
}

/// Narrowest edge-edge slab on the arc of edge `ei`, ignoring parts of the
/// arc where the width provably stays at or above `bound`.
///
/// On an interval with lowest vertices `v0`, `v1` at its ends the width is at
/// least the envelope of the slabs through `v0` and `v1`. Intervals whose
/// ends share a lowest vertex contain no vertex change at all.
fn edge_candidate(
    poly: &Polytope,
    index: &SupportIndex,
    antipode: &[usize],
    ei: usize,
    bound: f64,
) -> Option<Candidate> {
    const MIN_SPLIT: f64 = 1e-3;
    let verts = poly.vertices();
    let edge = poly.edges()[ei];
    let arc = EdgeArc::new(poly, ei)?;
    let mut best = None;
    let mut stack = vec![(0.0, antipode[edge.facets[0]], arc.span, antipode[edge.facets[1]])];
    while let Some((s0, v0, s1, v1)) = stack.pop() {
        if v0 == v1 {
            continue;
        }
        let cutoff = best.map_or(bound, |b: Candidate| b.local.min(bound));
        let lower = envelope_min([arc.slab(verts[v0]), arc.slab(verts[v1])], s0, s1);
        if lower >= cutoff {
            continue;
        }
        if s1 - s0 < MIN_SPLIT || poly.neighbors(v0).contains(&v1) {
            walk_arc(poly, &arc, ei, s0, v0, s1, &mut best);
            continue;
        }
        let sm = 0.5 * (s0 + s1);
        let vm = index.lowest(poly, arc.at(sm));
        stack.push((sm, vm, s1, v1));
        stack.push((s0, v0, sm, vm));
    }
    best
}

fn report_for(poly: &Polytope, dir: Vec3, feature: Feature) -> WidthReport {
    let verts = poly.vertices();
    let (lo, hi, min, max) = extent(verts, dir);
    let achieving_pair = match feature {
        Feature::Facet { facet, vertex } => AntipodalPair::FacetVertex {
            facet: poly.facets()[facet].vertices.map(|i| verts[i]),
            vertex: verts[vertex],
        },
        Feature::Edges { edge, v, w } => AntipodalPair::EdgeEdge {
            first: poly.edges()[edge].vertices.map(|i| verts[i]),
            second: [verts[v], verts[w]],
        },
    };
    WidthReport {
        width: max - min,
        direction: dir,
        achieving_pair,
        passes_unit: false,
        tol: POLYGONAL_TOL,
        degenerate: false,
        near_point: verts[lo],
        far_point: verts[hi],
    }
    .with_tol(POLYGONAL_TOL)
}

pub fn polytope_width(poly: &Polytope) -> WidthReport {
    polytope_width_with(poly, Execution::default())
}

pub fn polytope_width_with(poly: &Polytope, exec: Execution) -> WidthReport {
    let verts = poly.vertices();
    let index = SupportIndex::new(poly);
    let antipode = exec.map(poly.facets(), |f| index.lowest(poly, f.normal));
    let sampled = sampled_upper_bound(verts);
    let mut candidates: Vec<Candidate> = poly
        .facets()
        .iter()
        .enumerate()
        .map(|(fi, f)| Candidate {
            local: f.offset - f.normal.dot(verts[antipode[fi]]),
            dir: f.normal,
            feature: Feature::Facet {
                facet: fi,
                vertex: antipode[fi],
            },
        })
        .collect();
    let bound = candidates
        .iter()
        .map(|c| c.local)
        .fold(sampled + PRUNE_MARGIN, f64::min);
    candidates.extend(
        exec.map_range(poly.edges().len(), |ei| {
            edge_candidate(poly, &index, &antipode, ei, bound)
        })
            .into_iter()
            .flatten(),
    );
    // stable: ties keep facets before edges, then index order
    candidates.sort_by(|a, b| a.local.total_cmp(&b.local));

    let mut fallback: Option<(f64, &Candidate)> = None;
    for c in &candidates {
        let (_, _, lo, hi) = extent(verts, c.dir);
        let sw = hi - lo;
        if sw <= c.local + SLAB_TOL {
            return report_for(poly, c.dir, c.feature);
        }
        if fallback.is_none_or(|(best, _)| sw < best) {
            fallback = Some((sw, c));
        }
    }
    // every candidate failed the slab test; use the best verified extent
    let (_, c) = fallback.expect("a hull has facets");
    report_for(poly, c.dir, c.feature)
}

/// Reference width by exhaustive search over facets and all edge pairs.
/// Quadratic in the number of edges; meant for small hulls.
pub fn polytope_width_brute_force(poly: &Polytope) -> (f64, Vec3) {
    let verts = poly.vertices();
    let sw = |d: Vec3| {
        let (_, _, lo, hi) = extent(verts, d);
        hi - lo
    };
    let mut best = (f64::INFINITY, Vec3::ZERO);
    let mut consider = |d: Vec3| {
        let w = sw(d);
        if w < best.0 {
            best = (w, d);
        }
    };
    for f in poly.facets() {
        consider(f.normal);
    }
    let edges = poly.edges();
    for (i, a) in edges.iter().enumerate() {
        let ea = verts[a.vertices[1]] - verts[a.vertices[0]];
        for b in &edges[i + 1..] {
            let eb = verts[b.vertices[1]] - verts[b.vertices[0]];
            if let Some(n) = ea.cross(eb).try_normalize() {
                consider(n);
            }
        }
    }
    best
}

/// Quasi-uniform directions on the upper unit hemisphere.
pub fn fibonacci_hemisphere(n: usize) -> Vec<Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Width estimate independent of any hull: minimum support width over
/// `n_dirs` sampled directions, refined locally from the best few.
pub fn direction_sampling_width(points: &[Point3], n_dirs: usize, exec: Execution) -> (f64, Vec3) {
    const KEEP: usize = 16;
    let sw = |d: Vec3| {
        let (_, _, lo, hi) = extent(points, d);
        hi - lo
    };
    let dirs = fibonacci_hemisphere(n_dirs);
    let mut scored: Vec<(f64, usize)> = exec
        .map_range(dirs.len(), |i| (sw(dirs[i]), i))
        .into_iter()
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    scored.truncate(KEEP);

    let spacing = (TAU / n_dirs.max(1) as f64).sqrt();
    let refined = exec.map(&scored, |&(_, i)| {
        let d0 = dirs[i];
        let t1 = any_orthogonal(d0);
        let t2 = d0.cross(t1);
        let at = |x: &[f64]| (d0 + t1 * x[0] + t2 * x[1]).try_normalize().unwrap_or(d0);
        let f = |x: &[f64]| sw(at(x));
        let cfg = NelderMeadConfig {
            max_evals: 3000,
            x_tol: 1e-13,
        };
        let mut x = vec![0.0, 0.0];
        let mut step = spacing;
        let mut value = f(&x);
        for _ in 0..6 {
            let out = nelder_mead(f, &x, &[step, step], &cfg);
            if out.f < value {
                value = out.f;
                x = out.x;
            }
            step *= 0.1;
        }
        (value, at(&x))
    });
    refined
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((f64::INFINITY, Vec3::ZERO))
}

/// Width of the polygon's vertex set with the given pass tolerance. Inputs
/// spanning less than three dimensions give a zero-width degenerate report.
pub fn curve_width(curve: &Polyline3, tol: f64) -> WidthReport {
    curve_width_with(curve, tol, Execution::default())
}

pub fn curve_width_with(curve: &Polyline3, tol: f64, exec: Execution) -> WidthReport {
    let pts = curve.points();
    match convex_hull(pts) {
        Ok(poly) => {
            let r = polytope_width_with(&poly, exec);
            let (lo, hi, _, _) = extent(pts, r.direction);
            WidthReport {
                near_point: pts[lo],
                far_point: pts[hi],
                ..r
            }
            .with_tol(tol)
        }
        Err(_) => degenerate_report(pts, tol),
    }
}

fn degenerate_report(pts: &[Point3], tol: f64) -> WidthReport {
    let p0 = pts[0];
    let far = |from: &dyn Fn(Point3) -> f64| {
        pts.iter()
            .copied()
            .max_by(|a, b| from(*a).total_cmp(&from(*b)))
            .unwrap_or(p0)
    };
    let p1 = far(&|p| p.distance(p0));
    let axis = (p1 - p0).try_normalize();
    let direction = match axis {
        Some(u) => {
            let p2 = far(&|p| (p - p0).cross(u).norm());
            (p2 - p0)
                .cross(u)
                .try_normalize()
                .unwrap_or_else(|| any_orthogonal(u))
        }
        None => Vec3::new(0.0, 0.0, 1.0),
    };
    let (lo, hi, min, max) = extent(pts, direction);
    WidthReport {
        width: max - min,
        direction,
        achieving_pair: AntipodalPair::Degenerate,
        passes_unit: false,
        tol,
        degenerate: true,
        near_point: pts[lo],
        far_point: pts[hi],
    }
    .with_tol(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::cube_tetrahedron;
    use crate::geom::rotate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cube() -> Vec<Point3> {
        let mut v = Vec::new();
        for i in 0..8 {
            v.push(Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64));
        }
        v
    }

    fn random_cloud(seed: u64, n: usize) -> Vec<Point3> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                Vec3::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.3..0.3),
                )
            })
            .collect()
    }

    #[test]
    fn support_width_examples() {
        let c = cube();
        assert!((support_width(&c, Vec3::new(0.0, 0.0, 1.0)).unwrap() - 1.0).abs() < 1e-15);
        let w = support_width(&c, Vec3::new(1.0, 1.0, 1.0)).unwrap();
        assert!((w - 3f64.sqrt()).abs() < 1e-15);
        assert!(support_width(&c, Vec3::ZERO).is_err());
    }

    #[test]
    fn cube_has_width_one_along_an_axis() {
        let r = polytope_width(&convex_hull(&cube()).unwrap());
        assert!((r.width - 1.0).abs() < 1e-12);
        let d = r.direction;
        assert!((d.x.abs().max(d.y.abs()).max(d.z.abs()) - 1.0).abs() < 1e-12);
        assert!(r.passes_unit);
    }

    #[test]
    fn tetrahedron_width_is_attained_by_opposite_edges() {
        let r = polytope_width(&convex_hull(&cube_tetrahedron()).unwrap());
        assert!((r.width - 1.0).abs() < 1e-12, "{}", r.width);
        assert!(matches!(r.achieving_pair, AntipodalPair::EdgeEdge { .. }));
    }

    #[test]
    fn matches_brute_force_on_random_hulls() {
        for seed in 0..30 {
            let pts = random_cloud(seed, 40);
            let poly = convex_hull(&pts).unwrap();
            let fast = polytope_width(&poly);
            let (slow, _) = polytope_width_brute_force(&poly);
            assert!((fast.width - slow).abs() < 1e-12, "seed {seed}: {} vs {slow}", fast.width);
            let check = support_width(poly.vertices(), fast.direction).unwrap();
            assert!((check - fast.width).abs() < 1e-12);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let poly = convex_hull(&random_cloud(7, 3000)).unwrap();
        let a = polytope_width_with(&poly, Execution::Sequential);
        let b = polytope_width_with(&poly, Execution::Parallel);
        assert_eq!(a, b);
    }

    #[test]
    fn random_directions_never_beat_the_width() {
        let pts = random_cloud(3, 200);
        let w = polytope_width(&convex_hull(&pts).unwrap()).width;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10_000 {
            let d = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if d.norm() < 1e-3 {
                continue;
            }
            assert!(support_width(&pts, d).unwrap() >= w - 1e-12);
        }
    }

    #[test]
    fn direction_oracle_agrees() {
        let pts = random_cloud(11, 300);
        let poly = convex_hull(&pts).unwrap();
        let exact = polytope_width(&poly).width;
        let (approx, _) = direction_sampling_width(poly.vertices(), 20_000, Execution::default());
        assert!(approx >= exact - 1e-12);
        assert!(approx - exact < 1e-6, "{approx} vs {exact}");
    }

    #[test]
    fn rotation_invariance() {
        let pts = random_cloud(5, 100);
        let w = polytope_width(&convex_hull(&pts).unwrap()).width;
        let axis = Vec3::new(1.0, 2.0, -0.5).try_normalize().unwrap();
        let rotated: Vec<Point3> = pts
            .iter()
            .map(|p| rotate(*p, axis, 0.7) + Vec3::new(3.0, -1.0, 2.0))
            .collect();
        let w2 = polytope_width(&convex_hull(&rotated).unwrap()).width;
        assert!((w - w2).abs() < 1e-12, "{w} vs {w2}");
    }

    #[test]
    fn planar_square_is_degenerate_with_zero_width() {
        let sq = Polyline3::closed(vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ])
        .unwrap();
        let r = curve_width(&sq, POLYGONAL_TOL);
        assert!(r.degenerate);
        assert_eq!(r.width, 0.0);
        assert!(!r.passes_unit);
        assert!((r.direction.z.abs() - 1.0).abs() < 1e-15);
    }
}


