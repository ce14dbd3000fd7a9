//! Convex geometry of small point sets: hulls with exact affine-hull
//! handling, supported faces, the full face lattice, hull equality, and
//! orbit polytopes of reflection groups.

use crate::error::{Error, Result};
use crate::liealg::WeylGroup;
use crate::matkernel::{dot, norm, nullspace, orthonormalize_vecs, sym_eigen, Matrix};

/// Points closer than this collapse to one representative.
pub const DEDUP_TOL: f64 = 1e-8;
/// Distance from a supporting hyperplane below which a point counts as tight.
pub const TIGHT_TOL: f64 = 1e-9;
/// Largest ambient dimension handled by the facet enumeration.
pub const AMBIENT_CAP: usize = 6;
/// Largest number of deduplicated points handled.
pub const POINT_CAP: usize = 64;

/// Supporting halfspace `<x, normal> <= offset` in ambient coordinates.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// A face of a hull: the vertices it contains, a supporting normal, and its
/// affine dimension. The whole polytope appears with the zero normal.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceDescriptor {
    pub vertex_indices: Vec<usize>,
    pub normal: Vec<f64>,
    pub dim: usize,
}

/// Convex hull of a finite point set. Vertices are in ambient coordinates;
/// facet data lives in the affine hull, whose defining equations are listed
/// separately when the set is degenerate.
#[derive(Debug, Clone)]
pub struct Polytope {
    pub ambient_dim: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Facet>,
    /// Equations `<x, normal> = value` cutting out the affine hull.
    pub affine_equations: Vec<(Vec<f64>, f64)>,
}

impl Polytope {
    /// Support value: the maximum of the direction over the hull.
    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether an ambient point lies in the hull within tolerance.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        for (n, c) in &self.affine_equations {
            if (dot(x, n) - c).abs() > tol {
                return false;
            }
        }
        self.facets.iter().all(|f| dot(x, &f.normal) <= f.offset + tol)
    }
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=(m - need) {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= m {
        rec(0, m, k, &mut Vec::new(), &mut out);
    }
    out
}

fn affine_rank(points: &[Vec<f64>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    orthonormalize_vecs(&diffs, 1e-8).len()
}

/// Convex hull by supporting-hyperplane enumeration. Handles degenerate
/// input by first computing the affine hull and working inside it.
pub fn hull(points: &[Vec<f64>]) -> Result<Polytope> {
    if points.is_empty() {
        return Err(Error::InvalidInput("hull of an empty point set".into()));
    }
    let ambient = points[0].len();
    if ambient == 0 || ambient > AMBIENT_CAP {
        return Err(Error::Unsupported(format!(
            "ambient dimension {} outside 1..={}",
            ambient, AMBIENT_CAP
        )));
    }
    for p in points {
        if p.len() != ambient {
            return Err(Error::Dimension("points of mixed dimension".into()));
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite point".into()));
        }
    }
    let mut pts: Vec<Vec<f64>> = Vec::new();
    'dedup: for p in points {
        for q in &pts {
            let d: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            if d <= DEDUP_TOL {
                continue 'dedup;
            }
        }
        pts.push(p.clone());
    }
    if pts.len() > POINT_CAP {
        return Err(Error::Unsupported(format!("{} points exceed the cap {}", pts.len(), POINT_CAP)));
    }

    let m = pts.len();
    let mut origin = vec![0.0; ambient];
    for p in &pts {
        for (o, c) in origin.iter_mut().zip(p) {
            *o += c / m as f64;
        }
    }
    let mut cov = Matrix::zeros(ambient, ambient);
    for p in &pts {
        let c: Vec<f64> = p.iter().zip(&origin).map(|(a, b)| a - b).collect();
        for i in 0..ambient {
            for j in 0..ambient {
                cov[(i, j)] += c[i] * c[j];
            }
        }
    }
    let eig = sym_eigen(&cov, 1e-12)?;
    let full = eig.basis();
    let per_col = eig.value_per_column();
    let top = per_col.first().copied().unwrap_or(0.0).max(0.0);
    let mut local_basis: Vec<Vec<f64>> = Vec::new();
    let mut affine_equations: Vec<(Vec<f64>, f64)> = Vec::new();
    for j in 0..ambient {
        let col = full.col(j);
        if per_col[j] > 1e-12 * top.max(1.0) {
            local_basis.push(col);
        } else {
            let c = dot(&col, &origin);
            affine_equations.push((col, c));
        }
    }
    let d = local_basis.len();

    if d == 0 {
        return Ok(Polytope {
            ambient_dim: ambient,
            dim: 0,
            vertices: vec![pts[0].clone()],
            facets: Vec::new(),
            affine_equations,
        });
    }

    let local: Vec<Vec<f64>> = pts
        .iter()
        .map(|p| {
            local_basis
                .iter()
                .map(|b| b.iter().zip(p).zip(&origin).map(|((bi, pi), oi)| bi * (pi - oi)).sum())
                .collect()
        })
        .collect();

    // Enumerate candidate hyperplanes through d-point subsets and keep the
    // supporting ones.
    let mut local_facets: Vec<(Vec<f64>, f64)> = Vec::new();
    for subset in combinations(m, d) {
        let candidates: Vec<Vec<f64>> = if d == 1 {
            vec![vec![1.0]]
        } else {
            let rows: Vec<Vec<f64>> = subset[1..]
                .iter()
                .map(|&i| local[i].iter().zip(&local[subset[0]]).map(|(a, b)| a - b).collect())
                .collect();
            let ns = nullspace(&Matrix::from_rows(&rows), 1e-9)?;
            if ns.len() != 1 {
                continue;
            }
            ns
        };
        let n0 = &candidates[0];
        let base = dot(n0, &local[subset[0]]);
        let mut above = false;
        let mut below = false;
        for p in &local {
            let s = dot(n0, p) - base;
            if s > TIGHT_TOL {
                above = true;
            }
            if s < -TIGHT_TOL {
                below = true;
            }
            if above && below {
                break;
            }
        }
        if above && below {
            continue;
        }
        let (n, off) = if above {
            (n0.iter().map(|c| -c).collect::<Vec<f64>>(), -base)
        } else {
            (n0.clone(), base)
        };
        let dup = local_facets.iter().any(|(en, eo)| {
            (eo - off).abs() <= DEDUP_TOL && en.iter().zip(&n).all(|(a, b)| (a - b).abs() <= DEDUP_TOL)
        });
        if !dup {
            local_facets.push((n, off));
        }
    }
    if local_facets.is_empty() {
        return Err(Error::Degenerate("no supporting hyperplanes found".into()));
    }

    // A point is a vertex exactly when its tight facet normals span the
    // affine hull.
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for (i, p) in local.iter().enumerate() {
        let tight: Vec<Vec<f64>> = local_facets
            .iter()
            .filter(|(n, off)| (dot(n, p) - off).abs() <= TIGHT_TOL)
            .map(|(n, _)| n.clone())
            .collect();
        if orthonormalize_vecs(&tight, 1e-8).len() == d {
            vertices.push(pts[i].clone());
        }
    }
    if vertices.is_empty() {
        return Err(Error::Degenerate("hull has no vertices".into()));
    }

    let facets: Vec<Facet> = local_facets
        .iter()
        .map(|(n, off)| {
            let mut amb = vec![0.0; ambient];
            for (nk, b) in n.iter().zip(&local_basis) {
                for (a, bi) in amb.iter_mut().zip(b) {
                    *a += nk * bi;
                }
            }
            let offset = off + dot(&amb, &origin);
            Facet { normal: amb, offset }
        })
        .collect();

    let poly = Polytope { ambient_dim: ambient, dim: d, vertices, facets, affine_equations };
    for v in &poly.vertices {
        if !poly.contains(v, 1e-8) {
            return Err(Error::Verification("vertex violates its own hull".into()));
        }
    }
    Ok(poly)
}

/// Face of the hull supported by a direction: the vertices maximizing it.
pub fn support_face(p: &Polytope, u: &[f64]) -> Result<FaceDescriptor> {
    if u.len() != p.ambient_dim {
        return Err(Error::Dimension("direction dimension mismatch".into()));
    }
    if norm(u) < 1e-12 {
        return Err(Error::InvalidInput("zero direction has no supported face".into()));
    }
    let h = p.support(u);
    let vertex_indices: Vec<usize> = p
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| (dot(v, u) - h).abs() <= TIGHT_TOL * norm(u).max(1.0))
        .map(|(i, _)| i)
        .collect();
    let points: Vec<Vec<f64>> = vertex_indices.iter().map(|&i| p.vertices[i].clone()).collect();
    Ok(FaceDescriptor { vertex_indices, normal: u.to_vec(), dim: affine_rank(&points) })
}

/// All faces of the hull: closure of the facet tight sets under
/// intersection, plus the polytope itself, sorted by dimension then by
/// vertex indices. The empty face is not listed.
pub fn face_lattice(p: &Polytope) -> Vec<FaceDescriptor> {
    let tight_sets: Vec<Vec<usize>> = p
        .facets
        .iter()
        .map(|f| {
            p.vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| (dot(v, &f.normal) - f.offset).abs() <= TIGHT_TOL)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let full: Vec<usize> = (0..p.vertices.len()).collect();
    let mut sets: Vec<Vec<usize>> = vec![full];
    let mut queue = vec![0usize];
    while let Some(idx) = queue.pop() {
        let current = sets[idx].clone();
        for t in &tight_sets {
            let inter: Vec<usize> = current.iter().copied().filter(|i| t.contains(i)).collect();
            if inter.is_empty() || sets.iter().any(|s| *s == inter) {
                continue;
            }
            sets.push(inter);
            queue.push(sets.len() - 1);
        }
    }
    let mut faces: Vec<FaceDescriptor> = sets
        .into_iter()
        .map(|s| {
            let mut normal = vec![0.0; p.ambient_dim];
            for (f, t) in p.facets.iter().zip(&tight_sets) {
                if s.iter().all(|i| t.contains(i)) {
                    for (nk, fk) in normal.iter_mut().zip(&f.normal) {
                        *nk += fk;
                    }
                }
            }
            let points: Vec<Vec<f64>> = s.iter().map(|&i| p.vertices[i].clone()).collect();
            FaceDescriptor { dim: affine_rank(&points), vertex_indices: s, normal }
        })
        .collect();
    faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertex_indices.cmp(&b.vertex_indices)));
    faces
}

/// Whether two hulls coincide as subsets of the ambient space, up to 1e-8:
/// mutual vertex containment plus agreement of support values along every
/// facet normal and affine equation of either side.
pub fn polytope_equal(a: &Polytope, b: &Polytope) -> bool {
    if a.ambient_dim != b.ambient_dim {
        return false;
    }
    let tol = 1e-8;
    for v in &a.vertices {
        if !b.contains(v, tol) {
            return false;
        }
    }
    for v in &b.vertices {
        if !a.contains(v, tol) {
            return false;
        }
    }
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for f in a.facets.iter().chain(&b.facets) {
        dirs.push(f.normal.clone());
    }
    for (n, _) in a.affine_equations.iter().chain(&b.affine_equations) {
        dirs.push(n.clone());
        dirs.push(n.iter().map(|c| -c).collect());
    }
    dirs.iter().all(|u| (a.support(u) - b.support(u)).abs() <= tol)
}

/// Hull of the orbit of a slice-coordinate vector under a reflection group.
pub fn weyl_orbit_polytope(w: &WeylGroup, v: &[f64]) -> Result<Polytope> {
    let orbit: Vec<Vec<f64>> = w.elements.iter().map(|e| e.matvec(v)).collect();
    hull(&orbit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{cartan_split, families, maximal_abelian, restricted_roots, weyl_group, LieAlgebraRep};

    #[test]
    fn segment_faces() {
        let p = hull(&[vec![0.0], vec![1.0], vec![0.25]]).unwrap();
        assert_eq!(p.dim, 1);
        assert_eq!(p.vertices.len(), 2);
        assert_eq!(p.facets.len(), 2);
        assert_eq!(face_lattice(&p).len(), 3);
    }

    #[test]
    fn triangle_faces_and_support() {
        let p = hull(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(p.dim, 2);
        assert_eq!(p.vertices.len(), 3);
        assert_eq!(p.facets.len(), 3);
        assert_eq!(face_lattice(&p).len(), 7);
        let vertex_face = support_face(&p, &[1.0, -0.2]).unwrap();
        assert_eq!(vertex_face.vertex_indices.len(), 1);
        assert_eq!(vertex_face.dim, 0);
        let edge_face = support_face(&p, &[1.0, 1.0]).unwrap();
        assert_eq!(edge_face.vertex_indices.len(), 2);
        assert_eq!(edge_face.dim, 1);
    }

    #[test]
    fn hexagon_face_count() {
        let pts: Vec<Vec<f64>> = (0..6)
            .map(|k| {
                let t = std::f64::consts::PI / 3.0 * k as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let p = hull(&pts).unwrap();
        assert_eq!(p.vertices.len(), 6);
        assert_eq!(p.facets.len(), 6);
        assert_eq!(face_lattice(&p).len(), 13);
    }

    #[test]
    fn embedded_triangle_keeps_affine_equation() {
        let p = hull(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(p.dim, 2);
        assert_eq!(p.affine_equations.len(), 1);
        assert_eq!(p.facets.len(), 3);
        let (n, c) = &p.affine_equations[0];
        for v in &p.vertices {
            assert!((dot(v, n) - c).abs() < 1e-10);
        }
        assert_eq!(face_lattice(&p).len(), 7);
    }

    #[test]
    fn collinear_points_collapse_to_segment() {
        let p = hull(&[vec![0.0, 0.0], vec![0.5, 0.0], vec![1.0, 0.0], vec![1.0, 1e-12]]).unwrap();
        assert_eq!(p.dim, 1);
        assert_eq!(p.vertices.len(), 2);
        assert_eq!(p.affine_equations.len(), 1);
    }

    #[test]
    fn point_hull() {
        let p = hull(&[vec![2.0, -1.0]]).unwrap();
        assert_eq!(p.dim, 0);
        assert_eq!(p.vertices.len(), 1);
        assert_eq!(face_lattice(&p).len(), 1);
    }

    #[test]
    fn square_interior_point_is_not_a_vertex() {
        let p = hull(&[
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
            vec![0.0, 0.0],
            vec![0.3, -0.2],
        ])
        .unwrap();
        assert_eq!(p.vertices.len(), 4);
        assert_eq!(p.facets.len(), 4);
        assert!(p.contains(&[0.0, 0.0], 1e-9));
        assert!(!p.contains(&[1.5, 0.0], 1e-9));
    }

    #[test]
    fn equality_is_order_free_and_strict() {
        let t1 = hull(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let t2 = hull(&[vec![0.0, 1.0], vec![0.0, 0.0], vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
        assert!(polytope_equal(&t1, &t2));
        let shifted = hull(&[vec![0.1, 0.0], vec![1.1, 0.0], vec![0.1, 1.0]]).unwrap();
        assert!(!polytope_equal(&t1, &shifted));
        let bigger = hull(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert!(!polytope_equal(&t1, &bigger));
    }

    #[test]
    fn three_d_simplex() {
        let p = hull(&[
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(p.dim, 3);
        assert_eq!(p.vertices.len(), 4);
        assert_eq!(p.facets.len(), 4);
        // 4 vertices + 6 edges + 4 facets + the solid.
        assert_eq!(face_lattice(&p).len(), 15);
    }

    #[test]
    fn weyl_orbit_of_rank_one_is_a_segment() {
        let alg = LieAlgebraRep::new(2, families::sl(2)).unwrap();
        let split = cartan_split(&alg).unwrap();
        let a = maximal_abelian(&split, 1).unwrap();
        let rs = restricted_roots(&alg, &a, 1e-8).unwrap();
        let w = weyl_group(&rs).unwrap();
        let p = weyl_orbit_polytope(&w, &[0.7]).unwrap();
        assert_eq!(p.vertices.len(), 2);
        assert!((p.support(&[1.0]) - 0.7).abs() < 1e-12);
        assert!((p.support(&[-1.0]) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn weyl_orbit_of_sl3_regular_point_is_a_hexagon() {
        let alg = LieAlgebraRep::new(3, families::sl(3)).unwrap();
        let split = cartan_split(&alg).unwrap();
        let a = maximal_abelian(&split, 1).unwrap();
        let rs = restricted_roots(&alg, &a, 1e-8).unwrap();
        let w = weyl_group(&rs).unwrap();
        // A regular slice vector: not fixed by any reflection.
        let p = weyl_orbit_polytope(&w, &[0.9, 0.37]).unwrap();
        assert_eq!(p.vertices.len(), 6);
        assert_eq!(p.facets.len(), 6);
        assert_eq!(face_lattice(&p).len(), 13);
    }
}
