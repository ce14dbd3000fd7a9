//! Structure theory for compatible matrix Lie algebras: Cartan splits,
//! maximal abelian slices of `p`, restricted root systems, Weyl groups and
//! parabolic subalgebras.
//!
//! An algebra is handed over as a list of generator matrices inside
//! `sl(n,R)`; compatibility means the span is stable under transpose. All
//! root data lives in coordinates with respect to an orthonormalized basis
//! of the abelian slice, where the trace form restricts to the standard dot
//! product, so a root functional and its dual vector share one coordinate
//! vector.

use crate::error::{Error, Result};
use crate::matkernel::{
    bracket, dot, frob_project, nullspace, orthonormalize, orthonormalize_vecs, simultaneous_eigen, solve,
    sym_eigen, Matrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Residual bound for membership of a bracket in the generating span.
pub const CLOSURE_TOL: f64 = 1e-8;

/// Bound under which a slice counts as abelian.
pub const ABELIAN_TOL: f64 = 1e-9;

/// Components of a root functional below this size count as zero.
pub const ROOT_ZERO_TOL: f64 = 1e-7;

/// A Lie algebra of traceless matrices given by a closed set of generators.
#[derive(Debug, Clone)]
pub struct LieAlgebraRep {
    pub n: usize,
    pub generators: Vec<Matrix>,
    ortho: Vec<Matrix>,
}

impl LieAlgebraRep {
    /// Validate and wrap a generating set: square of size `n`, traceless,
    /// linearly independent, finite, and closed under bracket.
    pub fn new(n: usize, generators: Vec<Matrix>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("empty generator list".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if !g.is_square() || g.rows() != n {
                return Err(Error::Dimension(format!("generator {} is {}x{}, expected {}x{}", i, g.rows(), g.cols(), n, n)));
            }
            if !g.all_finite() {
                return Err(Error::InvalidInput(format!("generator {} has non-finite entries", i)));
            }
            if g.trace().abs() > 1e-10 * g.max_abs().max(1.0) {
                return Err(Error::InvalidInput(format!("generator {} has trace {:.3e}, not traceless", i, g.trace())));
            }
        }
        let ortho = orthonormalize(&generators, 1e-8);
        if ortho.len() != generators.len() {
            return Err(Error::InvalidInput(format!(
                "generators dependent: span has dimension {} from {} generators",
                ortho.len(),
                generators.len()
            )));
        }
        for i in 0..generators.len() {
            for j in (i + 1)..generators.len() {
                let br = bracket(&generators[i], &generators[j]);
                let p = frob_project(&br, &ortho);
                if p.residual > CLOSURE_TOL * br.frob_norm().max(1.0) {
                    return Err(Error::NotClosed(format!(
                        "[g{}, g{}] leaves the span (residual {:.3e})",
                        i, j, p.residual
                    )));
                }
            }
        }
        Ok(LieAlgebraRep { n, generators, ortho })
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Orthonormalized basis of the algebra under the compatible inner product.
    pub fn ortho_basis(&self) -> &[Matrix] {
        &self.ortho
    }
}

/// Cartan decomposition `g = k + p` into antisymmetric and symmetric parts,
/// each orthonormalized under the compatible inner product.
#[derive(Debug, Clone)]
pub struct CartanSplit {
    pub k_basis: Vec<Matrix>,
    pub p_basis: Vec<Matrix>,
}

impl CartanSplit {
    pub fn dim_k(&self) -> usize {
        self.k_basis.len()
    }
    pub fn dim_p(&self) -> usize {
        self.p_basis.len()
    }
}

/// Split the algebra along transpose symmetry. Fails when some generator's
/// symmetric or antisymmetric part falls outside the algebra, i.e. the span
/// is not theta-stable.
pub fn cartan_split(alg: &LieAlgebraRep) -> Result<CartanSplit> {
    let mut k_parts = Vec::new();
    let mut p_parts = Vec::new();
    for (i, g) in alg.generators.iter().enumerate() {
        let anti = g.antisym_part();
        let sym = g.sym_part();
        for (part, name) in [(&anti, "antisymmetric"), (&sym, "symmetric")] {
            if part.frob_norm() > 1e-12 {
                let p = frob_project(part, alg.ortho_basis());
                if p.residual > CLOSURE_TOL * part.frob_norm().max(1.0) {
                    return Err(Error::NotCompatible(format!(
                        "{} part of generator {} leaves the algebra (residual {:.3e})",
                        name, i, p.residual
                    )));
                }
            }
        }
        k_parts.push(anti);
        p_parts.push(sym);
    }
    let k_basis = orthonormalize(&k_parts, 1e-10);
    let p_basis = orthonormalize(&p_parts, 1e-10);
    if k_basis.len() + p_basis.len() != alg.dim() {
        return Err(Error::NotCompatible(format!(
            "split dimensions {} + {} do not add to dim g = {}",
            k_basis.len(),
            p_basis.len(),
            alg.dim()
        )));
    }
    Ok(CartanSplit { k_basis, p_basis })
}

/// Maximal abelian subspace of `p`, orthonormalized; the rank of the data.
#[derive(Debug, Clone)]
pub struct AbelianSlice {
    pub basis: Vec<Matrix>,
}

impl AbelianSlice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Matrix with the given coordinates in the slice basis.
    pub fn embed(&self, coords: &[f64]) -> Matrix {
        assert_eq!(coords.len(), self.basis.len());
        let n = self.basis[0].rows();
        let mut out = Matrix::zeros(n, n);
        for (c, b) in coords.iter().zip(&self.basis) {
            out.axpy(*c, b);
        }
        out
    }

    /// Coordinates of a symmetric matrix lying in the slice.
    pub fn coords(&self, m: &Matrix) -> Vec<f64> {
        self.basis.iter().map(|b| m.dot(b)).collect()
    }
}

/// Coefficient vectors (over `p_basis`) spanning the centralizer of the
/// given matrices inside `p`.
fn centralizer_in_p(p_basis: &[Matrix], against: &[Matrix]) -> Result<Vec<Vec<f64>>> {
    let n = p_basis[0].rows();
    let rows = against.len() * n * n;
    let mut sys = Matrix::zeros(rows, p_basis.len());
    for (ai, a) in against.iter().enumerate() {
        for (pj, p) in p_basis.iter().enumerate() {
            let br = bracket(p, a);
            for r in 0..n {
                for c in 0..n {
                    sys[(ai * n * n + r * n + c, pj)] = br[(r, c)];
                }
            }
        }
    }
    nullspace(&sys, 1e-10)
}

/// Greedy construction of a maximal abelian subspace of `p`: start from a
/// seeded random element and adjoin centralizer directions until the
/// centralizer inside `p` stabilizes at the slice itself.
pub fn maximal_abelian(split: &CartanSplit, seed: u64) -> Result<AbelianSlice> {
    if split.p_basis.is_empty() {
        return Err(Error::InvalidInput("p is trivial; no abelian slice exists".into()));
    }
    let n = split.p_basis[0].rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first = Matrix::zeros(n, n);
    for b in &split.p_basis {
        first.axpy(rng.random_range(-1.0..1.0), b);
    }
    if first.frob_norm() < 1e-12 {
        first = split.p_basis[0].clone();
    }
    let mut slice = vec![first.scale(1.0 / first.frob_norm())];

    for _round in 0..=split.p_basis.len() {
        let cent = centralizer_in_p(&split.p_basis, &slice)?;
        if cent.len() < slice.len() {
            return Err(Error::Degenerate(format!(
                "centralizer dimension {} below current slice dimension {}",
                cent.len(),
                slice.len()
            )));
        }
        if cent.len() == slice.len() {
            let basis = orthonormalize(&slice, 1e-10);
            for i in 0..basis.len() {
                for j in (i + 1)..basis.len() {
                    let resid = bracket(&basis[i], &basis[j]).max_abs();
                    if resid > ABELIAN_TOL {
                        return Err(Error::Degenerate(format!("slice not abelian: residual {:.3e}", resid)));
                    }
                }
            }
            return Ok(AbelianSlice { basis });
        }
        // Adjoin the centralizer direction most independent of the slice.
        let mut best: Option<Matrix> = None;
        let mut best_resid = 0.0;
        for coeffs in &cent {
            let mut cand = Matrix::zeros(n, n);
            for (c, b) in coeffs.iter().zip(&split.p_basis) {
                cand.axpy(*c, b);
            }
            let mut resid = cand.clone();
            for s in orthonormalize(&slice, 1e-10) {
                let c = resid.dot(&s);
                resid.axpy(-c, &s);
            }
            let r = resid.frob_norm();
            if r > best_resid {
                best_resid = r;
                best = Some(resid);
            }
        }
        match best {
            Some(extra) if best_resid > 1e-8 => slice.push(extra.scale(1.0 / best_resid)),
            _ => return Err(Error::Degenerate("centralizer exceeds slice but adds no new direction".into())),
        }
    }
    Err(Error::Degenerate("abelian slice construction did not stabilize".into()))
}

/// One restricted root: its functional in slice coordinates and an
/// orthonormal basis of its root space inside `g`.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub functional: Vec<f64>,
    pub space: Vec<Matrix>,
}

/// Restricted root system of `(g, a)` with a fixed notion of positivity.
#[derive(Debug, Clone)]
pub struct RestrictedRootSystem {
    pub slice: AbelianSlice,
    pub roots: Vec<RootDatum>,
    /// Orthonormal basis of the centralizer of `a` in `g`.
    pub zero_space: Vec<Matrix>,
    /// Indices into `roots` of the positive roots.
    pub positive: Vec<usize>,
    /// Indices into `roots` of the base of indecomposable positive roots.
    pub base: Vec<usize>,
    /// The lexicographic functional fixing positivity.
    pub regular_functional: Vec<f64>,
    /// Integer coordinates of each root over the base.
    pub base_coords: Vec<Vec<i64>>,
}

impl RestrictedRootSystem {
    pub fn rank(&self) -> usize {
        self.slice.rank()
    }

    pub fn root_space_dims(&self) -> Vec<usize> {
        self.roots.iter().map(|r| r.space.len()).collect()
    }

    pub fn zero_space_dim(&self) -> usize {
        self.zero_space.len()
    }

    /// Pairing of root `i` with the regular functional.
    pub fn reg_pairing(&self, i: usize) -> f64 {
        dot(&self.roots[i].functional, &self.regular_functional)
    }

    pub fn base_functionals(&self) -> Vec<Vec<f64>> {
        self.base.iter().map(|&i| self.roots[i].functional.clone()).collect()
    }

    /// Indices of roots lying in the span of the base subset `i_set`
    /// (positions into `self.base`).
    pub fn roots_in_span(&self, i_set: &[usize]) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&r| {
                self.base_coords[r]
                    .iter()
                    .enumerate()
                    .all(|(b, &c)| c == 0 || i_set.contains(&b))
            })
            .collect()
    }
}

/// Decompose `g` under the adjoint action of the slice. The ad operators are
/// expressed in an orthonormalized basis of `g`, where they are symmetric,
/// and jointly diagonalized; joint eigenvalue vectors cluster into root
/// functionals within `tol`.
pub fn restricted_roots(alg: &LieAlgebraRep, a: &AbelianSlice, tol: f64) -> Result<RestrictedRootSystem> {
    let rank = a.rank();
    let ortho = alg.ortho_basis();
    let d = ortho.len();
    let mut ads = Vec::with_capacity(rank);
    for h in &a.basis {
        let mut m = Matrix::zeros(d, d);
        for (j, gj) in ortho.iter().enumerate() {
            let br = bracket(h, gj);
            let p = frob_project(&br, ortho);
            if p.residual > CLOSURE_TOL * br.frob_norm().max(1.0) {
                return Err(Error::NotClosed(format!("[a, g] leaves the algebra (residual {:.3e})", p.residual)));
            }
            for (k, c) in p.coords.iter().enumerate() {
                m[(k, j)] = *c;
            }
        }
        // Self-adjointness of ad(H) in the compatible inner product; average
        // out the rounding noise.
        if m.asymmetry() > 1e-8 {
            return Err(Error::NotCompatible(format!("ad(H) asymmetry {:.3e}", m.asymmetry())));
        }
        ads.push(m.sym_part());
    }

    let (basis, joint_values) = simultaneous_eigen(&ads, tol)?;

    // Cluster the joint value vectors into root groups.
    let mut groups: Vec<(Vec<f64>, Vec<usize>)> = Vec::new();
    'cols: for (j, vals) in joint_values.iter().enumerate() {
        for (center, members) in groups.iter_mut() {
            if vals.iter().zip(center.iter()).all(|(x, y)| (x - y).abs() <= tol.max(1e-9)) {
                members.push(j);
                continue 'cols;
            }
        }
        groups.push((vals.clone(), vec![j]));
    }
    for (center, members) in groups.iter_mut() {
        for k in 0..rank {
            *center = center.clone();
            center[k] = members.iter().map(|&j| joint_values[j][k]).sum::<f64>() / members.len() as f64;
        }
    }

    let to_matrices = |members: &[usize]| -> Vec<Matrix> {
        members
            .iter()
            .map(|&j| {
                let coords = basis.col(j);
                let n = alg.n;
                let mut m = Matrix::zeros(n, n);
                for (c, b) in coords.iter().zip(ortho) {
                    m.axpy(*c, b);
                }
                m
            })
            .collect()
    };

    let mut zero_space = Vec::new();
    let mut roots = Vec::new();
    for (center, members) in &groups {
        if center.iter().all(|c| c.abs() <= ROOT_ZERO_TOL) {
            zero_space.extend(to_matrices(members));
        } else {
            roots.push(RootDatum { functional: center.clone(), space: to_matrices(members) });
        }
    }
    if zero_space.len() < rank {
        return Err(Error::Degenerate(format!(
            "centralizer of a has dimension {} below rank {}",
            zero_space.len(),
            rank
        )));
    }
    // Deterministic order: lexicographically descending functionals.
    roots.sort_by(|x, y| {
        for (a, b) in x.functional.iter().zip(&y.functional) {
            match b.partial_cmp(a).unwrap() {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    });

    // Roots come in opposite pairs with equal multiplicities.
    for (i, r) in roots.iter().enumerate() {
        let neg: Vec<f64> = r.functional.iter().map(|x| -x).collect();
        let partner = roots.iter().position(|s| {
            s.functional.iter().zip(&neg).all(|(x, y)| (x - y).abs() <= ROOT_ZERO_TOL)
        });
        match partner {
            Some(j) if roots[j].space.len() == r.space.len() => {}
            _ => {
                return Err(Error::Degenerate(format!(
                    "root {} has no opposite of equal multiplicity",
                    i
                )))
            }
        }
    }
    let total: usize = roots.iter().map(|r| r.space.len()).sum::<usize>() + zero_space.len();
    if total != alg.dim() {
        return Err(Error::Degenerate(format!("root space dimensions add to {} but dim g = {}", total, alg.dim())));
    }

    // Positivity by a lexicographic functional; epsilon spreads the digits
    // enough that no desk-scale root lands on the wall.
    let eps: f64 = 1e-3;
    let regular_functional: Vec<f64> = (0..rank).map(|k| eps.powi(k as i32)).collect();
    for (i, r) in roots.iter().enumerate() {
        if dot(&r.functional, &regular_functional).abs() <= 1e-9 {
            return Err(Error::Degenerate(format!("root {} lies on the wall of the positivity functional", i)));
        }
    }
    let positive: Vec<usize> =
        (0..roots.len()).filter(|&i| dot(&roots[i].functional, &regular_functional) > 0.0).collect();
    if positive.len() * 2 != roots.len() {
        return Err(Error::Degenerate("positive roots are not half of all roots".into()));
    }

    // Base: positive roots that are not sums of two positive roots.
    let is_sum = |target: &[f64]| -> bool {
        for &i in &positive {
            for &j in &positive {
                let sum: Vec<f64> = roots[i]
                    .functional
                    .iter()
                    .zip(&roots[j].functional)
                    .map(|(x, y)| x + y)
                    .collect();
                if sum.iter().zip(target).all(|(x, y)| (x - y).abs() <= ROOT_ZERO_TOL) {
                    return true;
                }
            }
        }
        false
    };
    let base: Vec<usize> = positive.iter().copied().filter(|&i| !is_sum(&roots[i].functional)).collect();
    if base.is_empty() {
        return Err(Error::Degenerate("empty base".into()));
    }

    // Every root must be an integer combination of the base with uniform sign.
    let nb = base.len();
    let mut gram = Matrix::zeros(nb, nb);
    for x in 0..nb {
        for y in 0..nb {
            gram[(x, y)] = dot(&roots[base[x]].functional, &roots[base[y]].functional);
        }
    }
    let mut base_coords = Vec::with_capacity(roots.len());
    for (i, r) in roots.iter().enumerate() {
        let rhs: Vec<f64> = base.iter().map(|&b| dot(&r.functional, &roots[b].functional)).collect();
        let c = solve(&gram, &rhs)?;
        let mut recon = vec![0.0; rank];
        for (cb, &b) in c.iter().zip(&base) {
            for k in 0..rank {
                recon[k] += cb * roots[b].functional[k];
            }
        }
        let recon_err: f64 =
            recon.iter().zip(&r.functional).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        let ints: Vec<i64> = c.iter().map(|x| x.round() as i64).collect();
        let int_err = c.iter().zip(&ints).fold(0.0_f64, |m, (x, &k)| m.max((x - k as f64).abs()));
        let uniform = ints.iter().all(|&k| k >= 0) || ints.iter().all(|&k| k <= 0);
        if recon_err > 1e-6 || int_err > 1e-6 || !uniform {
            return Err(Error::Degenerate(format!(
                "root {} is not a uniform-sign integer combination of the base (errors {:.2e}/{:.2e})",
                i, recon_err, int_err
            )));
        }
        base_coords.push(ints);
    }

    Ok(RestrictedRootSystem {
        slice: a.clone(),
        roots,
        zero_space,
        positive,
        base,
        regular_functional,
        base_coords,
    })
}

/// The Weyl group as orthogonal matrices on slice coordinates, generated by
/// the reflections in the base roots and closed off by breadth-first search.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub elements: Vec<Matrix>,
    pub generators: Vec<Matrix>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn apply(&self, w: usize, v: &[f64]) -> Vec<f64> {
        self.elements[w].matvec(v)
    }
}

/// Reflection in the hyperplane orthogonal to `alpha` (slice coordinates).
pub fn reflection(alpha: &[f64]) -> Matrix {
    let r = alpha.len();
    let aa = dot(alpha, alpha);
    Matrix::from_fn(r, r, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - 2.0 * alpha[i] * alpha[j] / aa
    })
}

const WEYL_ORDER_BOUND: usize = 1_000_000;
const WEYL_DEDUP_TOL: f64 = 1e-8;

/// Generate the group closure of a set of orthogonal matrices.
pub fn matrix_group_closure(gens: &[Matrix], bound: usize, dedup_tol: f64) -> Result<Vec<Matrix>> {
    let r = if gens.is_empty() { 0 } else { gens[0].rows() };
    let mut elements = vec![Matrix::identity(r)];
    let mut queue = vec![0usize];
    while let Some(idx) = queue.pop() {
        let w = elements[idx].clone();
        for s in gens {
            let u = s.matmul(&w);
            let known = elements.iter().any(|e| e.sub(&u).max_abs() <= dedup_tol);
            if !known {
                elements.push(u);
                queue.push(elements.len() - 1);
                if elements.len() > bound {
                    return Err(Error::Convergence(format!("group closure exceeded bound {}", bound)));
                }
            }
        }
    }
    Ok(elements)
}

/// Weyl group of the root system; every element is checked to permute the
/// roots.
pub fn weyl_group(rs: &RestrictedRootSystem) -> Result<WeylGroup> {
    let generators: Vec<Matrix> = rs.base.iter().map(|&b| reflection(&rs.roots[b].functional)).collect();
    let elements = matrix_group_closure(&generators, WEYL_ORDER_BOUND, WEYL_DEDUP_TOL)?;
    for (wi, w) in elements.iter().enumerate() {
        for (ri, r) in rs.roots.iter().enumerate() {
            let image = w.matvec(&r.functional);
            let hit = rs
                .roots
                .iter()
                .any(|s| s.functional.iter().zip(&image).all(|(x, y)| (x - y).abs() <= ROOT_ZERO_TOL));
            if !hit {
                return Err(Error::Verification(format!(
                    "Weyl element {} does not permute the roots (image of root {} missing)",
                    wi, ri
                )));
            }
        }
    }
    Ok(WeylGroup { elements, generators })
}

/// Parabolic subalgebra attached to a subset of the base, with its Langlands
/// pieces: `q = m + a_I + n` where `a_I` is the joint kernel of the subset,
/// `n` collects the root spaces positive outside the subset, and `m`
/// collects the centralizer part together with the subset's root spaces and
/// the orthogonal complement of `a_I` inside `a`.
#[derive(Debug, Clone)]
pub struct ParabolicData {
    /// Positions into the base.
    pub subset: Vec<usize>,
    pub q_basis: Vec<Matrix>,
    pub m_basis: Vec<Matrix>,
    pub n_basis: Vec<Matrix>,
    /// Orthonormal coordinate vectors spanning `a_I` inside the slice.
    pub a_i_dirs: Vec<Vec<f64>>,
    /// Orthonormal coordinate vectors spanning the complement `a^I`.
    pub a_upper_dirs: Vec<Vec<f64>>,
}

impl ParabolicData {
    pub fn dim_q(&self) -> usize {
        self.q_basis.len()
    }
}

fn check_subset(rs: &RestrictedRootSystem, subset: &[usize]) -> Result<Vec<usize>> {
    let mut s: Vec<usize> = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != subset.len() {
        return Err(Error::InvalidInput("subset contains duplicates".into()));
    }
    if s.iter().any(|&i| i >= rs.base.len()) {
        return Err(Error::InvalidInput(format!(
            "subset index out of range (base has {} elements)",
            rs.base.len()
        )));
    }
    Ok(s)
}

/// Split the centralizer of `a` into its antisymmetric part `m` and check
/// the symmetric part recovers exactly `a`.
pub fn centralizer_m_basis(rs: &RestrictedRootSystem) -> Result<Vec<Matrix>> {
    let anti: Vec<Matrix> = rs.zero_space.iter().map(|z| z.antisym_part()).collect();
    let sym: Vec<Matrix> = rs.zero_space.iter().map(|z| z.sym_part()).collect();
    let m_basis = orthonormalize(&anti, 1e-8);
    let sym_basis = orthonormalize(&sym, 1e-8);
    if sym_basis.len() != rs.rank() {
        return Err(Error::Degenerate(format!(
            "symmetric part of the centralizer has dimension {}, expected rank {}",
            sym_basis.len(),
            rs.rank()
        )));
    }
    for s in &sym_basis {
        let p = frob_project(s, &rs.slice.basis);
        if p.residual > 1e-8 {
            return Err(Error::Degenerate("symmetric part of the centralizer leaves the slice".into()));
        }
    }
    if m_basis.len() + sym_basis.len() != rs.zero_space.len() {
        return Err(Error::Degenerate("centralizer does not split cleanly into m + a".into()));
    }
    Ok(m_basis)
}

pub(crate) fn verify_bracket_closed(basis: &[Matrix], label: &str) -> Result<()> {
    let ortho = orthonormalize(basis, 1e-10);
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let br = bracket(&basis[i], &basis[j]);
            if br.frob_norm() < 1e-14 {
                continue;
            }
            let p = frob_project(&br, &ortho);
            if p.residual > CLOSURE_TOL * br.frob_norm().max(1.0) {
                return Err(Error::NotClosed(format!("{}: residual {:.3e} at pair ({}, {})", label, p.residual, i, j)));
            }
        }
    }
    Ok(())
}

pub fn parabolic_from_subset(alg: &LieAlgebraRep, rs: &RestrictedRootSystem, subset: &[usize]) -> Result<ParabolicData> {
    let subset = check_subset(rs, subset)?;
    let rank = rs.rank();

    let span_roots = rs.roots_in_span(&subset);
    let mut q_basis: Vec<Matrix> = rs.zero_space.clone();
    let mut n_basis: Vec<Matrix> = Vec::new();
    let mut m_extra: Vec<Matrix> = Vec::new();
    for (i, r) in rs.roots.iter().enumerate() {
        let in_span = span_roots.contains(&i);
        let is_positive = rs.positive.contains(&i);
        if in_span || is_positive {
            q_basis.extend(r.space.iter().cloned());
        }
        if is_positive && !in_span {
            n_basis.extend(r.space.iter().cloned());
        }
        if in_span {
            m_extra.extend(r.space.iter().cloned());
        }
    }

    // a_I: joint kernel of the subset functionals in slice coordinates.
    let a_i_dirs = if subset.is_empty() {
        (0..rank)
            .map(|i| {
                let mut v = vec![0.0; rank];
                v[i] = 1.0;
                v
            })
            .collect()
    } else {
        let rows: Vec<Vec<f64>> = subset.iter().map(|&b| rs.roots[rs.base[b]].functional.clone()).collect();
        nullspace(&Matrix::from_rows(&rows), 1e-10)?
    };
    let a_upper_dirs =
        orthonormalize_vecs(&subset.iter().map(|&b| rs.roots[rs.base[b]].functional.clone()).collect::<Vec<_>>(), 1e-10);
    if a_i_dirs.len() + a_upper_dirs.len() != rank {
        return Err(Error::Degenerate("slice does not split into a_I and its complement".into()));
    }

    let m_centralizer = centralizer_m_basis(rs)?;
    let mut m_parts = m_centralizer;
    for d in &a_upper_dirs {
        m_parts.push(rs.slice.embed(d));
    }
    m_parts.extend(m_extra);
    let m_basis = orthonormalize(&m_parts, 1e-8);

    let expected = m_basis.len() + a_i_dirs.len() + n_basis.len();
    if q_basis.len() != expected {
        return Err(Error::Degenerate(format!(
            "parabolic pieces do not add up: dim q = {} but m + a_I + n = {}",
            q_basis.len(),
            expected
        )));
    }
    verify_bracket_closed(&q_basis, "q_I")?;
    let _ = alg;
    Ok(ParabolicData { subset, q_basis, m_basis, n_basis, a_i_dirs, a_upper_dirs })
}

/// Nonnegative and strictly positive eigenspace sums of `ad(beta)`:
/// the parabolic `q` defined by `beta` and its nilpotent ideal `r`.
pub fn parabolic_from_beta(alg: &LieAlgebraRep, beta: &Matrix) -> Result<(Vec<Matrix>, Vec<Matrix>)> {
    let split = cartan_split(alg)?;
    if !split.p_basis.is_empty() {
        let p = frob_project(beta, &split.p_basis);
        if p.residual > 1e-9 * beta.frob_norm().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "beta leaves p (residual {:.3e})",
                p.residual
            )));
        }
    } else if beta.frob_norm() > 1e-12 {
        return Err(Error::InvalidInput("beta nonzero but p is trivial".into()));
    }

    let ortho = alg.ortho_basis();
    let d = ortho.len();
    let mut ad = Matrix::zeros(d, d);
    for (j, gj) in ortho.iter().enumerate() {
        let br = bracket(beta, gj);
        let p = frob_project(&br, ortho);
        if p.residual > CLOSURE_TOL * br.frob_norm().max(1.0) {
            return Err(Error::NotClosed(format!("[beta, g] leaves the algebra (residual {:.3e})", p.residual)));
        }
        for (k, c) in p.coords.iter().enumerate() {
            ad[(k, j)] = *c;
        }
    }
    if ad.asymmetry() > 1e-8 {
        return Err(Error::NotCompatible(format!("ad(beta) asymmetry {:.3e}", ad.asymmetry())));
    }
    let ed = sym_eigen(&ad.sym_part(), 1e-8)?;
    let mut q = Vec::new();
    let mut r = Vec::new();
    for (val, block) in ed.values.iter().zip(&ed.vectors) {
        let zero = val.abs() <= ROOT_ZERO_TOL;
        for j in 0..block.cols() {
            let coords = block.col(j);
            let n = alg.n;
            let mut m = Matrix::zeros(n, n);
            for (c, b) in coords.iter().zip(ortho) {
                m.axpy(*c, b);
            }
            if *val > 0.0 && !zero {
                q.push(m.clone());
                r.push(m);
            } else if zero {
                q.push(m);
            }
        }
    }
    verify_bracket_closed(&q, "q(beta)")?;
    verify_bracket_closed(&r, "r(beta)")?;
    Ok((q, r))
}

/// Element of the slice vanishing on the subset and strictly positive on the
/// remaining positive roots: the defining direction of the parabolic
/// attached to the subset. The full base yields zero.
pub fn beta_for_subset(rs: &RestrictedRootSystem, subset: &[usize]) -> Result<(Vec<f64>, Matrix)> {
    let subset = check_subset(rs, subset)?;
    let rank = rs.rank();
    let n = rs.slice.basis[0].rows();
    if subset.len() == rs.base.len() {
        return Ok((vec![0.0; rank], Matrix::zeros(n, n)));
    }
    // Solve pairing conditions over the base: 0 on the subset, 1 elsewhere.
    let nb = rs.base.len();
    let rows: Vec<Vec<f64>> = rs.base.iter().map(|&b| rs.roots[b].functional.clone()).collect();
    let rhs: Vec<f64> = (0..nb).map(|b| if subset.contains(&b) { 0.0 } else { 1.0 }).collect();
    let coords = if nb == rank {
        solve(&Matrix::from_rows(&rows), &rhs)?
    } else {
        // Least squares through the normal equations; the base always spans
        // the root directions.
        let a = Matrix::from_rows(&rows);
        let at = a.transpose();
        let gram = at.matmul(&a);
        let rhs_n = at.matvec(&rhs);
        solve(&gram, &rhs_n)?
    };
    let span_roots = rs.roots_in_span(&subset);
    for &i in &rs.positive {
        let pairing = dot(&rs.roots[i].functional, &coords);
        if span_roots.contains(&i) {
            if pairing.abs() > 1e-9 {
                return Err(Error::Verification(format!(
                    "beta does not vanish on subset-span root {} (pairing {:.3e})",
                    i, pairing
                )));
            }
        } else if pairing <= 1e-9 {
            return Err(Error::Verification(format!(
                "beta not strictly positive on root {} (pairing {:.3e})",
                i, pairing
            )));
        }
    }
    let mat = rs.slice.embed(&coords);
    Ok((coords, mat))
}

/// Standard generator sets for the shipped families.
pub mod families {
    use super::Matrix;

    fn e(n: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        m[(i, j)] = 1.0;
        m
    }

    /// sl(n,R): elementary matrices plus traceless diagonals.
    pub fn sl(n: usize) -> Vec<Matrix> {
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    gens.push(e(n, i, j));
                }
            }
        }
        for i in 0..(n - 1) {
            let mut m = Matrix::zeros(n, n);
            m[(i, i)] = 1.0;
            m[(i + 1, i + 1)] = -1.0;
            gens.push(m);
        }
        gens
    }

    /// so(2,1) embedded with the compact rotation in the first two
    /// coordinates and symmetric boosts into the third.
    pub fn so21() -> Vec<Matrix> {
        let mut r = Matrix::zeros(3, 3);
        r[(0, 1)] = 1.0;
        r[(1, 0)] = -1.0;
        let mut b1 = Matrix::zeros(3, 3);
        b1[(0, 2)] = 1.0;
        b1[(2, 0)] = 1.0;
        let mut b2 = Matrix::zeros(3, 3);
        b2[(1, 2)] = 1.0;
        b2[(2, 1)] = 1.0;
        vec![r, b1, b2]
    }

    /// sp(4,R) in the block realization [[A, B], [C, -A^T]] with B, C
    /// symmetric; the generator set is transpose-stable.
    pub fn sp4() -> Vec<Matrix> {
        let mut gens = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let mut m = Matrix::zeros(4, 4);
                m[(i, j)] = 1.0;
                m[(2 + j, 2 + i)] = -1.0;
                gens.push(m);
            }
        }
        let sym_pairs = [(0, 0), (1, 1), (0, 1)];
        for &(i, j) in &sym_pairs {
            let mut b = Matrix::zeros(4, 4);
            b[(i, 2 + j)] = 1.0;
            b[(j, 2 + i)] = 1.0;
            gens.push(b);
            let mut c = Matrix::zeros(4, 4);
            c[(2 + i, j)] = 1.0;
            c[(2 + j, i)] = 1.0;
            gens.push(c);
        }
        gens
    }
}
