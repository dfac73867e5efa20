//! 3D convex hull volume via incremental quickhull at double precision.
//!
//! Degenerate inputs (fewer than four points, or all points coplanar to
//! within a scale-relative epsilon) report zero volume.

use nalgebra::Vector3;

#[derive(Debug, Clone)]
struct Face {
    verts: [usize; 3],
    normal: Vector3<f64>,
    offset: f64,
}

impl Face {
    fn new(pts: &[Vector3<f64>], a: usize, b: usize, c: usize) -> Self {
        let normal = (pts[b] - pts[a]).cross(&(pts[c] - pts[a]));
        let offset = normal.dot(&pts[a]);
        Face { verts: [a, b, c], normal, offset }
    }

    fn dist(&self, p: &Vector3<f64>) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

fn scale_of(pts: &[Vector3<f64>]) -> f64 {
    pts.iter()
        .map(|p| p.x.abs().max(p.y.abs()).max(p.z.abs()))
        .fold(1.0, f64::max)
}

/// Finds a non-degenerate initial tetrahedron, or None if the cloud is flat.
fn initial_tetrahedron(pts: &[Vector3<f64>], eps: f64) -> Option<[usize; 4]> {
    // Extremes along x, then farthest point from that pair, then from the
    // resulting plane.
    let (mut i0, mut i1) = (0, 0);
    for (i, p) in pts.iter().enumerate() {
        if p.x < pts[i0].x {
            i0 = i;
        }
        if p.x > pts[i1].x {
            i1 = i;
        }
    }
    if i0 == i1 || (pts[i1] - pts[i0]).norm() < eps {
        // Fall back to any separated pair.
        let mut found = false;
        'outer: for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                if (pts[b] - pts[a]).norm() >= eps {
                    i0 = a;
                    i1 = b;
                    found = true;
                    break 'outer;
                }
            }
        }
        if !found {
            return None;
        }
    }
    let dir = (pts[i1] - pts[i0]).normalize();
    let mut i2 = usize::MAX;
    let mut best = eps;
    for (i, p) in pts.iter().enumerate() {
        let v = p - pts[i0];
        let d = (v - dir * v.dot(&dir)).norm();
        if d > best {
            best = d;
            i2 = i;
        }
    }
    if i2 == usize::MAX {
        return None;
    }
    let n = (pts[i1] - pts[i0]).cross(&(pts[i2] - pts[i0]));
    let nn = n.norm();
    if nn < eps * eps {
        return None;
    }
    let n = n / nn;
    let mut i3 = usize::MAX;
    let mut best = eps;
    for (i, p) in pts.iter().enumerate() {
        let d = n.dot(&(p - pts[i0])).abs();
        if d > best {
            best = d;
            i3 = i;
        }
    }
    if i3 == usize::MAX {
        return None;
    }
    Some([i0, i1, i2, i3])
}

/// Convex hull volume of a point cloud, mm^3. Zero for degenerate clouds.
pub fn convex_hull_volume(pts: &[Vector3<f64>]) -> f64 {
    if pts.len() < 4 {
        return 0.0;
    }
    let eps = 1e-9 * scale_of(pts);
    let Some([a, b, c, d]) = initial_tetrahedron(pts, eps) else {
        return 0.0;
    };

    // Orient the initial faces outward from the tetra centroid.
    let centroid = (pts[a] + pts[b] + pts[c] + pts[d]) / 4.0;
    let mut faces: Vec<Face> = vec![[a, b, c], [a, b, d], [a, c, d], [b, c, d]]
        .into_iter()
        .map(|[x, y, z]| {
            let f = Face::new(pts, x, y, z);
            if f.dist(&centroid) > 0.0 {
                Face::new(pts, x, z, y)
            } else {
                f
            }
        })
        .collect();

    // Incremental insertion: repeatedly take the point farthest outside any
    // face, remove visible faces, and stitch the horizon. Points that fall
    // inside the current hull are dropped from further consideration.
    let mut remaining: Vec<usize> = (0..pts.len()).collect();
    loop {
        let mut best: Option<(usize, f64)> = None;
        let mut outside = Vec::new();
        for &i in &remaining {
            let p = &pts[i];
            let mut max_d = 0.0;
            for f in &faces {
                let d = f.dist(p) / f.normal.norm().max(1e-300);
                if d > max_d {
                    max_d = d;
                }
            }
            if max_d > eps {
                outside.push(i);
                match best {
                    Some((_, bd)) if bd >= max_d => {}
                    _ => best = Some((i, max_d)),
                }
            }
        }
        remaining = outside;
        let Some((pi, _)) = best else { break };
        let p = pts[pi];

        let (visible, kept): (Vec<Face>, Vec<Face>) =
            faces.into_iter().partition(|f| f.dist(&p) > 0.0);
        // Horizon edges: edges of visible faces not shared by two visible
        // faces.
        let mut edge_count: std::collections::HashMap<(usize, usize), (usize, usize)> =
            std::collections::HashMap::new();
        for f in &visible {
            let [x, y, z] = f.verts;
            for (u, v) in [(x, y), (y, z), (z, x)] {
                let key = (u.min(v), u.max(v));
                let e = edge_count.entry(key).or_insert((0, 0));
                e.0 += 1;
                e.1 = if u < v { 0 } else { 1 };
            }
        }
        let mut new_faces = kept;
        for f in &visible {
            let [x, y, z] = f.verts;
            for (u, v) in [(x, y), (y, z), (z, x)] {
                let key = (u.min(v), u.max(v));
                if edge_count[&key].0 == 1 {
                    // Horizon edge (u, v) oriented as in the visible face;
                    // the new face (u, v, p) faces outward.
                    let nf = Face::new(pts, u, v, pi);
                    if nf.normal.norm() > eps * eps {
                        new_faces.push(nf);
                    }
                }
            }
        }
        faces = new_faces;
        if faces.is_empty() {
            return 0.0;
        }
    }

    // Volume via signed tetrahedra against the hull centroid.
    let centroid: Vector3<f64> = faces
        .iter()
        .flat_map(|f| f.verts.iter().map(|&i| pts[i]))
        .sum::<Vector3<f64>>()
        / (3.0 * faces.len() as f64);
    faces
        .iter()
        .map(|f| {
            let [x, y, z] = f.verts;
            (pts[x] - centroid)
                .dot(&(pts[y] - centroid).cross(&(pts[z] - centroid)))
                .abs()
                / 6.0
        })
        .sum()
}
