//! Sampling grid on the punctured sphere: geometric annuli around the three
//! ends, a triangulated core, and a spanning tree of straight edges.

use std::collections::VecDeque;
use std::f64::consts::PI;

use delaunator::{triangulate, Point};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fuchsian::{default_clearance, PathPiece};
use crate::trinoid_data::TrinoidData;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    pub rings: usize,
    pub sectors: usize,
    /// innermost ring radius as a fraction of the annulus outer radius
    pub inner_ratio: f64,
    /// outer/inner radius ratio of the annulus around `∞`
    pub infinity_ratio: f64,
    /// cap on the growth `|F| ~ (r/R)^{−(β+1)}` across an end annulus; ends
    /// with large cone angles get a larger inner radius so that the ball
    /// points stay resolvable in double precision
    pub max_frame_growth: f64,
    /// spacing of the Cartesian core lattice as a fraction of the core radius
    pub core_step: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self { rings: 8, sectors: 48, inner_ratio: 1e-3, infinity_ratio: 1e3, max_frame_growth: 1e6, core_step: 1.0 / 20.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Core,
    /// end index (0 ↔ z=0, 1 ↔ z=1, 2 ↔ ∞) and ring, ring 0 innermost
    /// towards the end
    End { end: usize, ring: usize, sector: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    pub base_point: Complex64,
    pub vertices: Vec<Complex64>,
    pub region: Vec<Region>,
    pub faces: Vec<[usize; 3]>,
    /// tree parent; `None` only for `root`, which hangs off the base point
    pub parent: Vec<Option<usize>>,
    pub root: usize,
    /// vertices in breadth-first order from the root
    pub order: Vec<usize>,
    pub depth: Vec<usize>,
    /// outer radii of the annuli around `0` and `1`, inner radius around `∞`
    pub end_radii: [f64; 3],
}

/// Finite points other than the punctures that edges must clear.
fn avoid_points(data: &TrinoidData) -> [Complex64; 3] {
    let s = data.singular_points();
    [s[2], s[3], s[4]]
}

/// Whether the straight edge `a → b` is an admissible transport path.
pub fn edge_is_valid(data: &TrinoidData, a: Complex64, b: Complex64, clearance: f64) -> bool {
    let seg = PathPiece::Segment { from: a, to: b };
    if avoid_points(data).iter().any(|&p| seg.distance_to(p) < clearance) {
        return false;
    }
    for p in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] {
        let near = (a - p).norm().min((b - p).norm());
        if seg.distance_to(p) < 0.5 * near {
            return false;
        }
    }
    true
}

impl SampleGrid {
    pub fn new(data: &TrinoidData, base_point: Complex64, opts: &GridOptions) -> Result<Self> {
        if opts.rings < 2 || opts.sectors < 3 {
            return Err(Error::InvalidAngles(format!(
                "grid needs at least 2 rings and 3 sectors, got {} × {}",
                opts.rings, opts.sectors
            )));
        }
        let sing = data.singular_points();
        let clearance = default_clearance(data);
        let punct = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let nearest_other = |p: Complex64| {
            sing.iter().filter(|&&q| q != p).map(|q| (q - p).norm()).fold(f64::INFINITY, f64::min)
        };
        let r_out = [0.4 * nearest_other(punct[0]), 0.4 * nearest_other(punct[1])];
        let r_inf = 2.5 * sing.iter().map(|p| p.norm()).fold(1.0, f64::max).max(base_point.norm());

        let mut vertices = Vec::new();
        let mut region = Vec::new();
        let mut faces = Vec::new();
        let m = opts.sectors;
        let n = opts.rings;
        let beta = data.angles.beta();
        let ratio: [f64; 3] = std::array::from_fn(|j| {
            let grow = beta[j] + 1.0;
            let cap = if grow > 0.0 { opts.max_frame_growth.powf(-1.0 / grow) } else { 0.0 };
            let r = if j < 2 { opts.inner_ratio } else { 1.0 / opts.infinity_ratio };
            r.max(cap)
        });
        // ring radii, index 0 nearest to the end
        let mut ring_start = [0usize; 3];
        for end in 0..3 {
            ring_start[end] = vertices.len();
            for k in 0..n {
                let f = k as f64 / (n - 1) as f64;
                let (center, radius) = if end < 2 {
                    (punct[end], r_out[end] * ratio[end].powf(1.0 - f))
                } else {
                    (Complex64::new(0.0, 0.0), r_inf * ratio[2].powf(f - 1.0))
                };
                for j in 0..m {
                    let theta = 2.0 * PI * (j as f64 + 0.5 * (k % 2) as f64) / m as f64;
                    vertices.push(center + Complex64::from_polar(radius, theta));
                    region.push(Region::End { end, ring: k, sector: j });
                }
            }
            for k in 0..n - 1 {
                for j in 0..m {
                    let a = ring_start[end] + k * m + j;
                    let b = ring_start[end] + k * m + (j + 1) % m;
                    let c = ring_start[end] + (k + 1) * m + j;
                    let d = ring_start[end] + (k + 1) * m + (j + 1) % m;
                    // odd rings are rotated by half a sector
                    if k % 2 == 0 {
                        faces.push([a, b, c]);
                        faces.push([b, d, c]);
                    } else {
                        faces.push([a, b, d]);
                        faces.push([a, d, c]);
                    }
                }
            }
        }

        // core lattice plus the three boundary rings, triangulated together
        let boundary: Vec<usize> = (0..3).flat_map(|e| (0..m).map(move |j| ring_start[e] + (n - 1) * m + j)).collect();
        let step = opts.core_step * r_inf;
        let steps = (r_inf / step).ceil() as i64;
        let core_start = vertices.len();
        for i in -steps..=steps {
            for j in -steps..=steps {
                let z = Complex64::new(i as f64 * step + 0.5, j as f64 * step + 0.5 * step);
                if z.norm() > r_inf - 0.5 * step {
                    continue;
                }
                if punct.iter().zip(&r_out).any(|(&p, &r)| (z - p).norm() < r + 0.5 * step.min(r)) {
                    continue;
                }
                if avoid_points(data).iter().any(|&p| (z - p).norm() < 2.0 * clearance) {
                    continue;
                }
                vertices.push(z);
                region.push(Region::Core);
            }
        }
        let core_ids: Vec<usize> = boundary.iter().copied().chain(core_start..vertices.len()).collect();
        let pts: Vec<Point> = core_ids.iter().map(|&i| Point { x: vertices[i].re, y: vertices[i].im }).collect();
        let tri = triangulate(&pts);
        for t in tri.triangles.chunks_exact(3) {
            let ids = [core_ids[t[0]], core_ids[t[1]], core_ids[t[2]]];
            let centroid = (vertices[ids[0]] + vertices[ids[1]] + vertices[ids[2]]) / 3.0;
            if centroid.norm() > r_inf {
                continue;
            }
            if punct.iter().zip(&r_out).any(|(&p, &r)| (centroid - p).norm() < r) {
                continue;
            }
            faces.push(ids);
        }
        for f in &mut faces {
            let (a, b, c) = (vertices[f[0]], vertices[f[1]], vertices[f[2]]);
            if ((b - a).conj() * (c - a)).im < 0.0 {
                f.swap(1, 2);
            }
        }

        let mut grid = SampleGrid {
            base_point,
            vertices,
            region,
            faces,
            parent: Vec::new(),
            root: 0,
            order: Vec::new(),
            depth: Vec::new(),
            end_radii: [r_out[0], r_out[1], r_inf],
        };
        grid.drop_unused_vertices();
        grid.build_tree(data, clearance)?;
        Ok(grid)
    }

    fn drop_unused_vertices(&mut self) {
        let mut used = vec![false; self.vertices.len()];
        for f in &self.faces {
            for &i in f {
                used[i] = true;
            }
        }
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut verts = Vec::new();
        let mut reg = Vec::new();
        for (i, &u) in used.iter().enumerate() {
            if u {
                map[i] = verts.len();
                verts.push(self.vertices[i]);
                reg.push(self.region[i]);
            }
        }
        for f in &mut self.faces {
            for i in f.iter_mut() {
                *i = map[*i];
            }
        }
        self.vertices = verts;
        self.region = reg;
    }

    /// Undirected edges of the triangulation, each once.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|f| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    fn build_tree(&mut self, data: &TrinoidData, clearance: f64) -> Result<()> {
        let nv = self.vertices.len();
        let mut adj = vec![Vec::new(); nv];
        for (a, b) in self.edges() {
            if edge_is_valid(data, self.vertices[a], self.vertices[b], clearance) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let root = (0..nv)
            .filter(|&i| edge_is_valid(data, self.base_point, self.vertices[i], clearance))
            .min_by(|&i, &j| {
                (self.vertices[i] - self.base_point).norm().total_cmp(&(self.vertices[j] - self.base_point).norm())
            })
            .ok_or(Error::NoPathPlan)?;
        let mut parent = vec![None; nv];
        let mut depth = vec![usize::MAX; nv];
        let mut order = Vec::with_capacity(nv);
        let mut queue = VecDeque::from([root]);
        depth[root] = 0;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        if let Some(u) = (0..nv).find(|&i| depth[i] == usize::MAX) {
            return Err(Error::Unreachable(u));
        }
        self.parent = parent;
        self.root = root;
        self.order = order;
        self.depth = depth;
        Ok(())
    }

    /// Tree path from the base point to vertex `v`, as segments.
    pub fn tree_path(&self, v: usize) -> Vec<PathPiece> {
        let mut chain = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        let mut pieces = vec![PathPiece::Segment { from: self.base_point, to: self.vertices[chain[0]] }];
        for w in chain.windows(2) {
            pieces.push(PathPiece::Segment { from: self.vertices[w[0]], to: self.vertices[w[1]] });
        }
        pieces
    }

    /// Vertex count per ring of each end annulus.
    pub fn ring_counts(&self) -> Vec<usize> {
        let mut counts = std::collections::BTreeMap::new();
        for r in &self.region {
            if let Region::End { end, ring, .. } = r {
                *counts.entry((*end, *ring)).or_insert(0usize) += 1;
            }
        }
        counts.into_values().collect()
    }
}
