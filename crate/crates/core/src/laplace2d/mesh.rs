//! Triangulation of geodesic polygons in the conformal chart.

use crate::convexbody::ConvexBody;
use crate::prelude::*;
use crate::spaceform::{ChartKind, Curvature};
use crate::{Error, Result};
use alloc::collections::{BTreeMap, BinaryHeap};
use spade::{ConstrainedDelaunayTriangulation, Point2, RefinementParameters, Triangulation};

type Cdt = ConstrainedDelaunayTriangulation<Point2<f64>>;

/// Domain handed to the mesher: a convex body, or a convex body with a second
/// one removed. Both are stored in the straight chart of their geometry.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Body(ConvexBody),
    Difference(ConvexBody, ConvexBody),
}

impl Region {
    pub fn delta(&self) -> Curvature {
        match self {
            Region::Body(b) | Region::Difference(b, _) => b.delta,
        }
    }

    fn outer(&self) -> &ConvexBody {
        match self {
            Region::Body(b) | Region::Difference(b, _) => b,
        }
    }

    /// True when nothing is left, i.e. the removed body covers the outer one.
    pub fn is_empty(&self) -> bool {
        match self {
            Region::Body(_) => false,
            Region::Difference(a, b) => a.vertices.iter().all(|&v| b.contains(v)),
        }
    }

    fn contains_straight(&self, c: [f64; 2]) -> bool {
        match self {
            Region::Body(a) => a.contains(c),
            Region::Difference(a, b) => a.contains(c) && !b.contains(c),
        }
    }
}

/// Triangle mesh in a conformal chart.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    pub delta: Curvature,
    pub chart: ChartKind,
    pub vertices: Vec<[f64; 2]>,
    /// Counter-clockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_mask: Vec<bool>,
    /// Target maximal edge length in chart units.
    pub h: f64,
}

impl TriMesh {
    pub fn interior_count(&self) -> usize {
        self.boundary_mask.iter().filter(|b| !**b).count()
    }

    /// Image under `x ↦ c + λ(x − c)`. Only similarities of the flat
    /// plane act on a mesh this way.
    pub fn dilated_flat(&self, c: [f64; 2], lambda: f64) -> Result<TriMesh> {
        if self.delta != Curvature::FLAT {
            return Err(Error::InvalidInput("mesh dilation needs a flat mesh".into()));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidInput(format!("bad dilation factor {lambda}")));
        }
        let mut out = self.clone();
        for v in &mut out.vertices {
            *v = [c[0] + lambda * (v[0] - c[0]), c[1] + lambda * (v[1] - c[1])];
        }
        out.h *= lambda;
        Ok(out)
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.vertices[i]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    }

    pub fn max_edge(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(a, b)| dist(self.vertices[a], self.vertices[b]))
            .fold(0.0, f64::max)
    }

    /// Chart area (flat measure of the triangulated polygon).
    pub fn chart_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

pub fn to_conformal(delta: Curvature, c: [f64; 2]) -> Result<[f64; 2]> {
    if delta == Curvature::FLAT {
        return Ok(c);
    }
    delta.conformal_chart().from_ambient(delta.straight_chart().to_ambient(c))
}

pub fn to_straight(delta: Curvature, c: [f64; 2]) -> Result<[f64; 2]> {
    if delta == Curvature::FLAT {
        return Ok(c);
    }
    delta.straight_chart().from_ambient(delta.conformal_chart().to_ambient(c))
}

/// Midpoint of the geodesic between two conformal-chart points.
pub fn geodesic_midpoint(delta: Curvature, p: [f64; 2], q: [f64; 2]) -> [f64; 2] {
    let chord = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
    if delta == Curvature::FLAT {
        return chord;
    }
    let chart = delta.conformal_chart();
    let (a, b) = (chart.to_ambient(p), chart.to_ambient(q));
    let s = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
    let nn = if delta == Curvature::HYPERBOLIC {
        s[0] * s[0] - s[1] * s[1] - s[2] * s[2]
    } else {
        s[0] * s[0] + s[1] * s[1] + s[2] * s[2]
    };
    if !(nn > 0.0) {
        return chord;
    }
    let k = 1.0 / nn.sqrt();
    chart.from_ambient([s[0] * k, s[1] * k, s[2] * k]).unwrap_or(chord)
}

/// Closed boundary loop of a body in the conformal chart, with every chord
/// at most `h` long.
fn boundary_loop(body: &ConvexBody, h: f64) -> Result<Vec<[f64; 2]>> {
    let corners: Vec<[f64; 2]> = body.vertices.iter().map(|&v| to_conformal(body.delta, v)).collect::<Result<_>>()?;
    let n = corners.len();
    let mut out = Vec::new();
    for i in 0..n {
        out.push(corners[i]);
        subdivide(body.delta, corners[i], corners[(i + 1) % n], h, 0, &mut out);
    }
    Ok(out)
}

fn subdivide(delta: Curvature, p: [f64; 2], q: [f64; 2], h: f64, depth: usize, out: &mut Vec<[f64; 2]>) {
    if dist(p, q) <= h || depth > 40 {
        return;
    }
    let m = geodesic_midpoint(delta, p, q);
    subdivide(delta, p, m, h, depth + 1, out);
    out.push(m);
    subdivide(delta, m, q, h, depth + 1, out);
}

fn point(c: [f64; 2]) -> Point2<f64> {
    Point2::new(c[0], c[1])
}

fn mesh_err(e: impl core::fmt::Debug) -> Error {
    Error::Mesh(format!("{e:?}"))
}

/// Boundary points and edges of the region, closed loops with consistent
/// parity.
fn region_boundary(region: &Region, hb: f64) -> Result<(Vec<[f64; 2]>, Vec<[usize; 2]>)> {
    match region {
        Region::Body(b) => {
            let pts = boundary_loop(b, hb)?;
            let n = pts.len();
            let edges = (0..n).map(|i| [i, (i + 1) % n]).collect();
            Ok((pts, edges))
        }
        Region::Difference(a, b) => {
            if a.chart != b.chart {
                return Err(Error::ChartMismatch(a.chart.name(), b.chart.name()));
            }
            // overlay both loops, split at crossings, keep faces of the region
            let mut cdt = Cdt::new();
            for lp in [boundary_loop(a, hb)?, boundary_loop(b, hb)?] {
                let hs: Vec<_> = lp.iter().map(|&p| cdt.insert(point(p)).map_err(mesh_err)).collect::<Result<_>>()?;
                for i in 0..hs.len() {
                    let (u, v) = (hs[i], hs[(i + 1) % hs.len()]);
                    if u != v {
                        cdt.add_constraint_and_split(u, v, |p| p);
                    }
                }
            }
            let delta = region.delta();
            let nf = cdt.num_all_faces();
            let mut keep = vec![false; nf];
            for f in cdt.inner_faces() {
                let [p, q, r] = f.positions();
                let c = [(p.x + q.x + r.x) / 3.0, (p.y + q.y + r.y) / 3.0];
                keep[f.fix().index()] = to_straight(delta, c).map(|s| region.contains_straight(s)).unwrap_or(false);
            }
            let mut index = BTreeMap::new();
            let mut pts = Vec::new();
            let mut edges = Vec::new();
            for e in cdt.directed_edges() {
                let inside = e.face().as_inner().map(|f| keep[f.fix().index()]).unwrap_or(false);
                let outside = !e.rev().face().as_inner().map(|f| keep[f.fix().index()]).unwrap_or(false);
                if inside && outside {
                    let mut id = |v: spade::handles::FixedVertexHandle, p: Point2<f64>| {
                        *index.entry(v.index()).or_insert_with(|| {
                            pts.push([p.x, p.y]);
                            pts.len() - 1
                        })
                    };
                    let [u, v] = e.vertices();
                    let a = id(u.fix(), u.position());
                    let b = id(v.fix(), v.position());
                    edges.push([a, b]);
                }
            }
            if edges.is_empty() {
                return Err(Error::Mesh("region is empty".into()));
            }
            Ok((pts, edges))
        }
    }
}

/// Conforming triangulation of a convex body with maximal edge length `h` in
/// its conformal chart.
pub fn triangulate(body: &ConvexBody, h: f64) -> Result<TriMesh> {
    triangulate_region(&Region::Body(body.clone()), h)
}

/// Conforming triangulation of a region with maximal edge length `h` in the
/// conformal chart of its geometry.
pub fn triangulate_region(region: &Region, h: f64) -> Result<TriMesh> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidInput(format!("mesh size must be positive, got {h}")));
    }
    let delta = region.delta();
    region.outer().validate()?;
    if region.is_empty() {
        return Err(Error::Mesh("region is empty".into()));
    }
    let (pts, edges) = region_boundary(region, 0.8 * h)?;
    let area_est = {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &pts {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        ((hi[0] - lo[0]) * (hi[1] - lo[1])).max(h * h)
    };
    let mut cdt = Cdt::bulk_load_cdt(pts.iter().map(|&p| point(p)).collect(), edges).map_err(mesh_err)?;
    let tri_area = 0.25 * 3f64.sqrt() * (0.85 * h) * (0.85 * h);
    let budget = (4.0 * area_est / tri_area) as usize + 10 * pts.len() + 1000;
    let res = cdt.refine(
        RefinementParameters::<f64>::new()
            .exclude_outer_faces(true)
            .keep_constraint_edges()
            .with_max_allowed_area(tri_area)
            .with_max_additional_vertices(budget),
    );
    let mut excluded = vec![false; cdt.num_all_faces()];
    for f in &res.excluded_faces {
        excluded[f.index()] = true;
    }
    let mut index = vec![usize::MAX; cdt.num_vertices()];
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for f in cdt.inner_faces() {
        if excluded[f.fix().index()] {
            continue;
        }
        let t = f.vertices().map(|v| {
            let i = v.fix().index();
            if index[i] == usize::MAX {
                let p = v.position();
                vertices.push([p.x, p.y]);
                index[i] = vertices.len() - 1;
            }
            index[i]
        });
        triangles.push(t);
    }
    if triangles.is_empty() {
        return Err(Error::Mesh("no triangles inside the region".into()));
    }
    bisect_long_edges(delta, &mut vertices, &mut triangles, h);
    let mesh = finish(delta, vertices, triangles, h)?;
    if mesh.interior_count() < 3 {
        return Err(Error::Mesh(format!("h = {h} is too large: {} interior vertices", mesh.interior_count())));
    }
    Ok(mesh)
}

/// Uniform refinement: every triangle split into four at its edge
/// midpoints, boundary midpoints placed on the geodesic sides. Meshes of a
/// halving sequence built this way are nested.
pub fn refine_uniform(mesh: &TriMesh) -> Result<TriMesh> {
    let map = edge_map(&mesh.triangles);
    let mut verts = mesh.vertices.clone();
    let mut mid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&(a, b), ts) in &map {
        let (p, q) = (verts[a], verts[b]);
        let m = if ts[1] == NO_TRI {
            geodesic_midpoint(mesh.delta, p, q)
        } else {
            [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]
        };
        verts.push(m);
        mid.insert((a, b), verts.len() - 1);
    }
    let mut tris = Vec::with_capacity(4 * mesh.triangles.len());
    for &[a, b, c] in &mesh.triangles {
        let (ab, bc, ca) = (mid[&edge_key(a, b)], mid[&edge_key(b, c)], mid[&edge_key(c, a)]);
        tris.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
    }
    let h = 0.5 * mesh.h;
    bisect_long_edges(mesh.delta, &mut verts, &mut tris, h * (1.0 + 1e-9));
    finish(mesh.delta, verts, tris, h)
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

const NO_TRI: usize = usize::MAX;

fn edge_map(tris: &[[usize; 3]]) -> BTreeMap<(usize, usize), [usize; 2]> {
    let mut map: BTreeMap<(usize, usize), [usize; 2]> = BTreeMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for k in 0..3 {
            attach(&mut map, edge_key(tri[k], tri[(k + 1) % 3]), t);
        }
    }
    map
}

fn attach(map: &mut BTreeMap<(usize, usize), [usize; 2]>, key: (usize, usize), t: usize) {
    let e = map.entry(key).or_insert([NO_TRI, NO_TRI]);
    if e[0] == NO_TRI {
        e[0] = t;
    } else {
        e[1] = t;
    }
}

fn reattach(map: &mut BTreeMap<(usize, usize), [usize; 2]>, key: (usize, usize), from: usize, to: usize) {
    if let Some(e) = map.get_mut(&key) {
        for s in e.iter_mut() {
            if *s == from {
                *s = to;
                return;
            }
        }
    }
}

/// Longest-edge bisection until every edge is at most `h`. Boundary edges
/// are split at their geodesic midpoint so boundary vertices stay on the
/// geodesic sides.
fn bisect_long_edges(delta: Curvature, verts: &mut Vec<[f64; 2]>, tris: &mut Vec<[usize; 3]>, h: f64) {
    let mut map = edge_map(tris);
    let mut heap: BinaryHeap<(u64, usize, usize)> = BinaryHeap::new();
    for &(a, b) in map.keys() {
        let l = dist(verts[a], verts[b]);
        if l > h {
            heap.push((l.to_bits(), a, b));
        }
    }
    while let Some((_, a, b)) = heap.pop() {
        let Some(ts) = map.remove(&(a, b)) else { continue };
        let boundary = ts[1] == NO_TRI;
        let m = if boundary {
            geodesic_midpoint(delta, verts[a], verts[b])
        } else {
            [0.5 * (verts[a][0] + verts[b][0]), 0.5 * (verts[a][1] + verts[b][1])]
        };
        verts.push(m);
        let k = verts.len() - 1;
        for &t in ts.iter().filter(|&&t| t != NO_TRI) {
            let tri = tris[t];
            let c = tri.into_iter().find(|&v| v != a && v != b).expect("triangle has the split edge");
            let t2 = tris.len();
            tris[t] = tri.map(|v| if v == b { k } else { v });
            tris.push(tri.map(|v| if v == a { k } else { v }));
            reattach(&mut map, edge_key(b, c), t, t2);
            attach(&mut map, edge_key(k, c), t);
            attach(&mut map, edge_key(k, c), t2);
            attach(&mut map, edge_key(a, k), t);
            attach(&mut map, edge_key(k, b), t2);
        }
        for (u, v) in [(a, k), (k, b)] {
            let l = dist(verts[u], verts[v]);
            if l > h {
                let key = edge_key(u, v);
                heap.push((l.to_bits(), key.0, key.1));
            }
        }
        for &t in ts.iter().filter(|&&t| t != NO_TRI) {
            let tri = tris[t];
            let c = tri.into_iter().find(|&v| v != a && v != k).expect("split triangle");
            let l = dist(verts[k], verts[c]);
            if l > h {
                let key = edge_key(k, c);
                heap.push((l.to_bits(), key.0, key.1));
            }
        }
    }
}

fn finish(delta: Curvature, vertices: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>, h: f64) -> Result<TriMesh> {
    let map = edge_map(&triangles);
    let mut boundary_mask = vec![false; vertices.len()];
    for (&(a, b), ts) in &map {
        if ts[1] == NO_TRI {
            boundary_mask[a] = true;
            boundary_mask[b] = true;
        }
    }
    let mesh = TriMesh { delta, chart: delta.conformal_chart(), vertices, triangles, boundary_mask, h };
    for t in 0..mesh.triangles.len() {
        let a = mesh.triangle_area(t);
        if !(a > 1e-14) {
            return Err(Error::Mesh(format!("triangle {t} has area {a:e}")));
        }
    }
    Ok(mesh)
}
