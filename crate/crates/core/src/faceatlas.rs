//! Face atlas machinery: invariant-subspace probing, connected subsets of the
//! base, polytope faces attached to them, and the stabilizer sandwich.
//!
//! A subset of the base is connected to the highest dual vector when every
//! component of its pairing graph touches it; such subsets index the faces of
//! the momentum hull up to the reflection group, and the stabilizer of the
//! top eigenspace of their distinguished direction is pinched between two
//! standard parabolic subalgebras.

use crate::convgeo::{face_lattice, hull, polytope_equal, weyl_orbit_polytope, FaceDescriptor, Polytope};
use crate::error::{Error, Result};
use crate::gradmap::beta_profile;
use crate::liealg::{
    beta_for_subset, cartan_split, parabolic_from_subset, reflection, verify_bracket_closed, LieAlgebraRep,
    RestrictedRootSystem, WeylGroup,
};
use crate::matkernel::{dot, norm, nullspace, orthonormalize, orthonormalize_vecs, sym_eigen, Matrix};
use crate::repspace::WeightData;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const INVARIANT_TOL: f64 = 1e-8;
/// Relative threshold deciding orthogonality of pairings.
pub const ORTHO_TOL: f64 = 1e-9;
/// Geometric tolerance when matching face vertices of the momentum hull.
pub const FACE_MATCH_TOL: f64 = 1e-7;

/// Whether the algebra spanned by `gens` acts irreducibly on the column span
/// of `v1`. The span must be invariant. Probes cyclic closures of seeded
/// random vectors, the basis vectors of the span, and eigenvectors of any
/// compressed generator that is symmetric; returns false exactly when some
/// probe generates a proper invariant subspace.
pub fn irreducible_on(gens: &[Matrix], v1: &Matrix) -> Result<bool> {
    let n = v1.rows();
    for g in gens {
        if g.rows() != n || g.cols() != n {
            return Err(Error::Dimension("generator size does not match the subspace ambient".into()));
        }
    }
    let cols: Vec<Vec<f64>> = (0..v1.cols()).map(|j| v1.col(j)).collect();
    let basis = orthonormalize_vecs(&cols, 1e-10);
    let d = basis.len();
    if d == 0 {
        return Err(Error::InvalidInput("cannot test irreducibility on the zero subspace".into()));
    }
    // Invariance check: each generator must map the span into itself.
    for g in gens {
        for b in &basis {
            let image = g.matvec(b);
            let mut residual = image.clone();
            for c in &basis {
                let coeff = crate::matkernel::dot(&image, c);
                for (r, ci) in residual.iter_mut().zip(c) {
                    *r -= coeff * ci;
                }
            }
            let scale = crate::matkernel::norm(&image).max(1.0);
            if crate::matkernel::norm(&residual) > INVARIANT_TOL * scale {
                return Err(Error::InvalidInput("subspace is not invariant under the generators".into()));
            }
        }
    }
    if d == 1 {
        return Ok(true);
    }
    let compressed: Vec<Matrix> = gens
        .iter()
        .map(|g| {
            let mut m = Matrix::zeros(d, d);
            for j in 0..d {
                let image = g.matvec(&basis[j]);
                for i in 0..d {
                    m[(i, j)] = crate::matkernel::dot(&image, &basis[i]);
                }
            }
            m
        })
        .collect();

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6972_7265);
    for _ in 0..3 {
        candidates.push((0..d).map(|_| rng.random_range(-1.0..1.0)).collect());
    }
    for j in 0..d {
        let mut e = vec![0.0; d];
        e[j] = 1.0;
        candidates.push(e);
    }
    for m in &compressed {
        let sym = m.sym_part();
        if m.sub(&sym).max_abs() <= 1e-8 * m.max_abs().max(1.0) {
            let eig = sym_eigen(&sym, 1e-10)?;
            let vecs = eig.basis();
            for j in 0..d {
                candidates.push(vecs.col(j));
            }
        }
    }

    for c in &candidates {
        if crate::matkernel::norm(c) < 1e-12 {
            continue;
        }
        let dim = cyclic_closure_dim(&compressed, c);
        if dim < d {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimension of the smallest invariant subspace containing `seed` under
/// repeated application of the generators.
fn cyclic_closure_dim(gens: &[Matrix], seed: &[f64]) -> usize {
    let d = seed.len();
    let mut span = orthonormalize_vecs(&[seed.to_vec()], 1e-10);
    loop {
        let mut images: Vec<Vec<f64>> = span.clone();
        for g in gens {
            for v in &span {
                images.push(g.matvec(v));
            }
        }
        let next = orthonormalize_vecs(&images, 1e-9);
        if next.len() == span.len() || next.len() == d {
            return next.len();
        }
        span = next;
    }
}

/// A subset of the base connected to the highest dual vector, together with
/// its saturation and the orthogonal split of the dual vector across the
/// subset span and its complement in the slice.
#[derive(Debug, Clone, PartialEq)]
pub struct MuConnectedSubset {
    /// Positions into the base.
    pub subset: Vec<usize>,
    /// Subset plus every base root orthogonal to the dual vector and to the
    /// whole subset.
    pub saturation: Vec<usize>,
    /// Component of the dual vector orthogonal to the subset span.
    pub y0: Vec<f64>,
    /// Component of the dual vector inside the subset span.
    pub y1: Vec<f64>,
}

fn orthogonal(u: &[f64], v: &[f64]) -> bool {
    dot(u, v).abs() <= ORTHO_TOL * norm(u).max(1e-12) * norm(v).max(1e-12)
}

/// All subsets of the base whose pairing-graph components each touch the
/// dual vector `mu_rho`. The empty set always qualifies.
pub fn enumerate_mu_connected(rs: &RestrictedRootSystem, mu_rho: &[f64]) -> Result<Vec<MuConnectedSubset>> {
    let base = rs.base_functionals();
    if mu_rho.len() != rs.rank() {
        return Err(Error::Dimension("dual vector does not live in the slice coordinates".into()));
    }
    for alpha in &base {
        if dot(alpha, mu_rho) < -ORTHO_TOL * norm(alpha) * norm(mu_rho) {
            return Err(Error::InvalidInput("dual vector is not dominant".into()));
        }
    }
    let k = base.len();
    let touches: Vec<bool> = base.iter().map(|alpha| !orthogonal(alpha, mu_rho)).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << k) {
        let subset: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        if !subset_is_connected_to_mu(&subset, &base, &touches) {
            continue;
        }
        out.push(build_subset(&base, mu_rho, subset));
    }
    out.sort_by(|a, b| a.subset.len().cmp(&b.subset.len()).then_with(|| a.subset.cmp(&b.subset)));
    Ok(out)
}

fn subset_is_connected_to_mu(subset: &[usize], base: &[Vec<f64>], touches: &[bool]) -> bool {
    // Each component of the pairing graph on the subset must contain a root
    // with nonzero pairing against the dual vector.
    let mut seen = vec![false; subset.len()];
    for start in 0..subset.len() {
        if seen[start] {
            continue;
        }
        let mut component = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < component.len() {
            let cur = component[head];
            head += 1;
            for next in 0..subset.len() {
                if !seen[next] && !orthogonal(&base[subset[cur]], &base[subset[next]]) {
                    seen[next] = true;
                    component.push(next);
                }
            }
        }
        if !component.iter().any(|&i| touches[subset[i]]) {
            return false;
        }
    }
    true
}

fn build_subset(
    base: &[Vec<f64>],
    mu_rho: &[f64],
    subset: Vec<usize>,
) -> MuConnectedSubset {
    let span: Vec<Vec<f64>> = subset.iter().map(|&i| base[i].clone()).collect();
    let ortho = orthonormalize_vecs(&span, 1e-10);
    let mut y1 = vec![0.0; mu_rho.len()];
    for b in &ortho {
        let c = dot(b, mu_rho);
        for (y, bi) in y1.iter_mut().zip(b) {
            *y += c * bi;
        }
    }
    let y0: Vec<f64> = mu_rho.iter().zip(&y1).map(|(m, y)| m - y).collect();
    let mut saturation = subset.clone();
    for i in 0..base.len() {
        if subset.contains(&i) {
            continue;
        }
        let alpha = &base[i];
        if orthogonal(alpha, mu_rho) && subset.iter().all(|&j| orthogonal(alpha, &base[j])) {
            saturation.push(i);
        }
    }
    saturation.sort_unstable();
    MuConnectedSubset { subset, saturation, y0, y1 }
}

/// Orbit of a slice vector under the reflections of the given base roots.
fn reflection_orbit(functionals: &[Vec<f64>], v: &[f64]) -> Vec<Vec<f64>> {
    let refl: Vec<Matrix> = functionals.iter().map(|f| reflection(f)).collect();
    let mut orbit: Vec<Vec<f64>> = vec![v.to_vec()];
    let mut head = 0;
    while head < orbit.len() {
        let cur = orbit[head].clone();
        head += 1;
        for r in &refl {
            let image = r.matvec(&cur);
            let fresh = orbit.iter().all(|p| {
                p.iter().zip(&image).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() > 1e-8
            });
            if fresh {
                orbit.push(image);
            }
        }
    }
    orbit
}

/// Face of the momentum hull attached to a connected subset: the translate
/// by `y0` of the hull of the subset-reflection orbit of `y1`. Verified to
/// be an actual face of the full hull.
pub fn face_from_subset(ms: &MuConnectedSubset, w: &WeylGroup, rs: &RestrictedRootSystem) -> Result<Polytope> {
    let base = rs.base_functionals();
    let functionals: Vec<Vec<f64>> = ms.subset.iter().map(|&i| base[i].clone()).collect();
    let orbit = reflection_orbit(&functionals, &ms.y1);
    let pts: Vec<Vec<f64>> = orbit
        .iter()
        .map(|p| p.iter().zip(&ms.y0).map(|(a, b)| a + b).collect())
        .collect();
    let face = hull(&pts)?;
    let mu_rho: Vec<f64> = ms.y0.iter().zip(&ms.y1).map(|(a, b)| a + b).collect();
    let momentum = weyl_orbit_polytope(w, &mu_rho)?;
    face_index_set(&face, &momentum)?;
    Ok(face)
}

/// Vertex indices of `face` inside the vertex list of `p`, after checking
/// they form the tight set of some face of `p`.
fn face_index_set(face: &Polytope, p: &Polytope) -> Result<Vec<usize>> {
    let mut indices = Vec::new();
    for v in &face.vertices {
        let hit = p.vertices.iter().position(|u| {
            u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() <= FACE_MATCH_TOL
        });
        match hit {
            Some(i) => indices.push(i),
            None => {
                return Err(Error::Verification(
                    "candidate face has a vertex outside the momentum hull vertex set".into(),
                ))
            }
        }
    }
    indices.sort_unstable();
    indices.dedup();
    if indices.len() != face.vertices.len() {
        return Err(Error::Verification("candidate face vertices collide in the momentum hull".into()));
    }
    let lattice = face_lattice(p);
    if lattice.iter().any(|f| f.vertex_indices == indices) {
        Ok(indices)
    } else {
        Err(Error::Verification(
            "candidate vertex set is not the tight set of any face of the momentum hull".into(),
        ))
    }
}

/// One matched class of the correspondence: a connected subset, the
/// representative face of the momentum hull, and the size of the face orbit
/// under the reflection group.
#[derive(Debug, Clone)]
pub struct AtlasClass {
    pub subset: MuConnectedSubset,
    pub face: FaceDescriptor,
    pub orbit_size: usize,
}

/// Outcome of matching connected subsets against face classes.
#[derive(Debug, Clone)]
pub struct AtlasReport {
    pub classes: Vec<AtlasClass>,
    pub matched: bool,
    /// Human-readable mismatches when the matching is imperfect.
    pub diff: Vec<String>,
}

/// Vertex-index permutations induced by the reflection group on the hull.
fn vertex_permutations(w: &WeylGroup, p: &Polytope) -> Result<Vec<Vec<usize>>> {
    let mut perms = Vec::with_capacity(w.elements.len());
    for e in &w.elements {
        let mut perm = Vec::with_capacity(p.vertices.len());
        for v in &p.vertices {
            let image = e.matvec(v);
            let hit = p.vertices.iter().position(|u| {
                u.iter().zip(&image).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() <= FACE_MATCH_TOL
            });
            match hit {
                Some(i) => perm.push(i),
                None => {
                    return Err(Error::Verification(
                        "reflection group does not permute the hull vertices".into(),
                    ))
                }
            }
        }
        let mut check = perm.clone();
        check.sort_unstable();
        check.dedup();
        if check.len() != p.vertices.len() {
            return Err(Error::Verification("group element is not a vertex permutation".into()));
        }
        perms.push(perm);
    }
    Ok(perms)
}

fn canonical_index_set(indices: &[usize], perms: &[Vec<usize>]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for perm in perms {
        let mut image: Vec<usize> = indices.iter().map(|&i| perm[i]).collect();
        image.sort_unstable();
        if best.as_ref().map_or(true, |b| image < *b) {
            best = Some(image);
        }
    }
    best.unwrap_or_else(|| indices.to_vec())
}

/// Match connected subsets against the face classes of the momentum hull
/// modulo the reflection group. Both sides are computed independently; the
/// report records the pairing and whether it is a bijection.
pub fn casselman_correspondence(
    rs: &RestrictedRootSystem,
    w: &WeylGroup,
    mu_rho: &[f64],
    p: &Polytope,
) -> Result<AtlasReport> {
    let direct = weyl_orbit_polytope(w, mu_rho)?;
    if !polytope_equal(p, &direct) {
        return Err(Error::InvalidInput("supplied hull is not the orbit hull of the dual vector".into()));
    }
    let perms = vertex_permutations(w, p)?;
    let lattice = face_lattice(p);

    // Right side: face classes of the hull under the induced permutations.
    let mut face_classes: Vec<(Vec<usize>, FaceDescriptor, usize)> = Vec::new();
    for f in &lattice {
        let canon = canonical_index_set(&f.vertex_indices, &perms);
        if let Some(pos) = face_classes.iter().position(|(c, _, _)| *c == canon) {
            face_classes[pos].2 += 1;
        } else {
            let rep = lattice
                .iter()
                .find(|g| {
                    let mut sorted = g.vertex_indices.clone();
                    sorted.sort_unstable();
                    sorted == canon
                })
                .cloned()
                .unwrap_or_else(|| f.clone());
            face_classes.push((canon, rep, 1));
        }
    }

    // Left side: connected subsets with their faces, reduced the same way.
    let subsets = enumerate_mu_connected(rs, mu_rho)?;
    let mut classes = Vec::new();
    let mut diff = Vec::new();
    let mut used: Vec<usize> = Vec::new();
    for ms in subsets {
        let face = face_from_subset(&ms, w, rs)?;
        let indices = face_index_set(&face, p)?;
        let canon = canonical_index_set(&indices, &perms);
        match face_classes.iter().position(|(c, _, _)| *c == canon) {
            Some(pos) => {
                if used.contains(&pos) {
                    diff.push(format!(
                        "subsets collide on the face class with vertices {:?}",
                        face_classes[pos].0
                    ));
                } else {
                    used.push(pos);
                }
                classes.push(AtlasClass {
                    subset: ms,
                    face: face_classes[pos].1.clone(),
                    orbit_size: face_classes[pos].2,
                });
            }
            None => {
                diff.push(format!("subset {:?} produced a face outside every class", ms.subset));
            }
        }
    }
    for (pos, (canon, _, _)) in face_classes.iter().enumerate() {
        if !used.contains(&pos) {
            diff.push(format!("face class with vertices {:?} has no subset", canon));
        }
    }
    let matched = diff.is_empty() && classes.len() == face_classes.len();
    Ok(AtlasReport { classes, matched, diff })
}

/// Basis of the subalgebra preserving the column span of `v1`, found as the
/// kernel of the compress-to-complement map. Verified bracket-closed.
pub fn stabilizer_subalgebra(alg: &LieAlgebraRep, v1: &Matrix) -> Result<Vec<Matrix>> {
    let n = alg.n;
    if v1.rows() != n {
        return Err(Error::Dimension("subspace ambient dimension mismatch".into()));
    }
    let cols: Vec<Vec<f64>> = (0..v1.cols()).map(|j| v1.col(j)).collect();
    let basis = orthonormalize_vecs(&cols, 1e-10);
    let m = basis.len();
    if m == 0 {
        return Err(Error::InvalidInput("stabilizer of the zero subspace".into()));
    }
    let mut extended = basis.clone();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        extended.push(e);
    }
    let full = orthonormalize_vecs(&extended, 1e-10);
    let complement = &full[m..];
    let gens = alg.ortho_basis();
    if complement.is_empty() {
        return Ok(gens.to_vec());
    }
    let d = gens.len();
    let mut rows = Vec::with_capacity(m * complement.len());
    for b in &basis {
        for wl in complement {
            let row: Vec<f64> = gens.iter().map(|g| dot(wl, &g.matvec(b))).collect();
            rows.push(row);
        }
    }
    let kernel = nullspace(&Matrix::from_rows(&rows), 1e-10)?;
    let mut out = Vec::with_capacity(kernel.len());
    for c in &kernel {
        let mut x = Matrix::zeros(n, n);
        for k in 0..d {
            x.axpy(c[k], &gens[k]);
        }
        out.push(x);
    }
    verify_bracket_closed(&out, "stabilizer subalgebra")?;
    Ok(out)
}

/// Outcome of pinching the top-eigenspace stabilizer between the parabolic
/// subalgebras of a subset and of its saturation.
#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub subset: Vec<usize>,
    pub saturation: Vec<usize>,
    pub dim_lower: usize,
    pub dim_stab: usize,
    pub dim_upper: usize,
    /// Worst unit-normalized residual of a lower-parabolic element against
    /// the stabilizer span.
    pub lower_residual: f64,
    /// Worst unit-normalized residual of a stabilizer element against the
    /// upper-parabolic span.
    pub upper_residual: f64,
    /// Whether the lower parabolic acts irreducibly on the top eigenspace.
    pub irreducible: bool,
    /// Whether the highest weight vector lies in the top eigenspace.
    pub contains_highest: bool,
    pub ok: bool,
}

fn span_residual(items: &[Matrix], span: &[Matrix]) -> f64 {
    let ortho = orthonormalize(span, 1e-10);
    let mut worst: f64 = 0.0;
    for x in items {
        let len = x.frob_norm();
        if len < 1e-14 {
            continue;
        }
        let unit = x.scale(1.0 / len);
        worst = worst.max(crate::matkernel::frob_project(&unit, &ortho).residual);
    }
    worst
}

/// Verify the parabolic sandwich for one connected subset: the stabilizer of
/// the top eigenspace of the subset direction sits between the subset
/// parabolic and the saturation parabolic, acts irreducibly below, and the
/// top eigenspace contains the highest weight vector.
pub fn sandwich_check(
    alg: &LieAlgebraRep,
    rs: &RestrictedRootSystem,
    ms: &MuConnectedSubset,
    wd: &WeightData,
) -> Result<SandwichReport> {
    let (_, beta) = beta_for_subset(rs, &ms.subset)?;
    let split = cartan_split(alg)?;
    let bp = beta_profile(&split, &beta, 1e-8)?;
    let v1 = bp.top_space().clone();

    let coords: Vec<f64> = (0..v1.cols()).map(|j| dot(&v1.col(j), &wd.v_rho)).collect();
    let mut residual = wd.v_rho.clone();
    for (j, c) in coords.iter().enumerate() {
        let col = v1.col(j);
        for (r, ck) in residual.iter_mut().zip(&col) {
            *r -= c * ck;
        }
    }
    let contains_highest = norm(&residual) <= 1e-8;

    let lower = parabolic_from_subset(alg, rs, &ms.subset)?;
    let upper = parabolic_from_subset(alg, rs, &ms.saturation)?;
    let stab = stabilizer_subalgebra(alg, &v1)?;

    let lower_residual = span_residual(&lower.q_basis, &stab);
    let upper_residual = span_residual(&stab, &upper.q_basis);
    let irreducible = irreducible_on(&lower.q_basis, &v1)?;
    let ok = lower_residual <= 1e-8 && upper_residual <= 1e-8 && irreducible && contains_highest;
    Ok(SandwichReport {
        subset: ms.subset.clone(),
        saturation: ms.saturation.clone(),
        dim_lower: lower.q_basis.len(),
        dim_stab: stab.len(),
        dim_upper: upper.q_basis.len(),
        lower_residual,
        upper_residual,
        irreducible,
        contains_highest,
        ok,
    })
}
