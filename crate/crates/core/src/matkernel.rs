//! Dense real matrix kernel: brackets, the trace form, a cyclic Jacobi
//! eigensolver with eigenvalue clustering, simultaneous diagonalization of
//! commuting symmetric families, and projections onto matrix spans.
//!
//! All instances are desk scale, so every routine favors a simple exhaustive
//! formulation with explicit tolerances over asymptotic efficiency.

use crate::error::{Error, Result};

/// Eigenvalues below this relative size count as zero when ranks and kernels
/// are read off a spectrum.
pub const RANK_EIG_TOL: f64 = 1e-12;

/// Default gap under which adjacent eigenvalues merge into one cluster.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Matrix with the given columns.
    pub fn from_cols(cols: &[Vec<f64>]) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        Matrix::from_fn(r, c, |i, j| cols[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[f64]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut s = 0.0;
            for j in 0..self.cols {
                s += self[(i, j)] * v[j];
            }
            out[i] = s;
        }
        out
    }

    /// v^T M w for column vectors v, w.
    pub fn quad(&self, v: &[f64], w: &[f64]) -> f64 {
        dot(v, &self.matvec(w))
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Matrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn axpy(&mut self, s: f64, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn trace(&self) -> f64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Frobenius inner product Tr(A B^T); this is the compatible inner
    /// product -Tr(A theta(B)) with theta(B) = -B^T.
    pub fn dot(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn sym_part(&self) -> Matrix {
        self.add(&self.transpose()).scale(0.5)
    }

    pub fn antisym_part(&self) -> Matrix {
        self.sub(&self.transpose()).scale(0.5)
    }

    pub fn asymmetry(&self) -> f64 {
        self.sub(&self.transpose()).max_abs()
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Display for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{:>12.6} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Commutator [X, Y] = XY - YX.
pub fn bracket(x: &Matrix, y: &Matrix) -> Matrix {
    assert!(x.is_square() && y.is_square() && x.rows() == y.rows(), "bracket needs equal square matrices");
    x.matmul(y).sub(&y.matmul(x))
}

/// Trace form B(X, Y) = Tr(XY). Symmetric and ad-invariant.
pub fn trace_form(x: &Matrix, y: &Matrix) -> f64 {
    assert!(x.is_square() && y.is_square() && x.rows() == y.rows(), "trace_form needs equal square matrices");
    let n = x.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += x[(i, j)] * y[(j, i)];
        }
    }
    s
}

/// Spectrum of a symmetric matrix after clustering: values strictly
/// descending, eigenvector blocks orthonormal, one block per cluster.
#[derive(Debug, Clone)]
pub struct EigenData {
    pub values: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// One n x multiplicity block of orthonormal columns per value.
    pub vectors: Vec<Matrix>,
}

impl EigenData {
    /// All eigenvectors as columns, cluster blocks concatenated in order.
    pub fn basis(&self) -> Matrix {
        let n = self.vectors[0].rows();
        let total: usize = self.multiplicities.iter().sum();
        let mut out = Matrix::zeros(n, total);
        let mut col = 0;
        for block in &self.vectors {
            for j in 0..block.cols() {
                out.set_col(col, &block.col(j));
                col += 1;
            }
        }
        out
    }

    /// Eigenvalue repeated per column of `basis()`.
    pub fn value_per_column(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (v, m) in self.values.iter().zip(&self.multiplicities) {
            out.extend(std::iter::repeat(*v).take(*m));
        }
        out
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver for symmetric matrices. Eigenvalues closer than
/// `cluster_tol` merge into one cluster reported at their mean.
pub fn sym_eigen(s: &Matrix, cluster_tol: f64) -> Result<EigenData> {
    if !s.is_square() {
        return Err(Error::Dimension(format!("sym_eigen needs square input, got {}x{}", s.rows(), s.cols())));
    }
    if !s.all_finite() {
        return Err(Error::InvalidInput("sym_eigen: non-finite entries".into()));
    }
    let scale = s.max_abs().max(1.0);
    if s.asymmetry() > 1e-10 * scale {
        return Err(Error::NotSymmetric(format!("asymmetry {:.3e} exceeds 1e-10 * scale", s.asymmetry())));
    }
    let n = s.rows();
    if n == 0 {
        return Err(Error::Dimension("sym_eigen on empty matrix".into()));
    }

    let mut a = s.sym_part();
    let mut v = Matrix::identity(n);
    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * scale * (n as f64) {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                // Classic two-sided rotation choosing the smaller angle.
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e15 {
                    1.0 / (2.0 * theta)
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                let tau = sn / (1.0 + c);
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[(r, p)];
                        let arq = a[(r, q)];
                        a[(r, p)] = arp - sn * (arq + tau * arp);
                        a[(r, q)] = arq + sn * (arp - tau * arq);
                        a[(p, r)] = a[(r, p)];
                        a[(q, r)] = a[(r, q)];
                    }
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp - sn * (vrq + tau * vrp);
                    v[(r, q)] = vrq + sn * (vrp - tau * vrq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::Convergence(format!("Jacobi did not converge in {} sweeps", JACOBI_MAX_SWEEPS)));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap());

    // Chain-merge clustering on the descending sequence.
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        match clusters.last_mut() {
            Some(cl) if (a[(*cl.last().unwrap(), *cl.last().unwrap())] - a[(idx, idx)]).abs() < cluster_tol => {
                cl.push(idx)
            }
            _ => clusters.push(vec![idx]),
        }
    }

    let mut values = Vec::with_capacity(clusters.len());
    let mut mults = Vec::with_capacity(clusters.len());
    let mut vectors = Vec::with_capacity(clusters.len());
    for cl in &clusters {
        let mean = cl.iter().map(|&i| a[(i, i)]).sum::<f64>() / cl.len() as f64;
        values.push(mean);
        mults.push(cl.len());
        let mut block = Matrix::zeros(n, cl.len());
        for (bj, &i) in cl.iter().enumerate() {
            block.set_col(bj, &v.col(i));
        }
        vectors.push(block);
    }
    Ok(EigenData { values, multiplicities: mults, vectors })
}

/// Residual bound accepted for a joint diagonalization.
pub const JOINT_DIAG_TOL: f64 = 1e-7;

/// Commutator bound under which a family counts as commuting.
pub const COMMUTE_TOL: f64 = 1e-8;

/// Simultaneously diagonalize a family of commuting symmetric matrices.
///
/// Returns an orthonormal basis (as columns) and, per column, the vector of
/// eigenvalue readings across the family. Strategy: diagonalize a seeded
/// generic linear combination, then refine every residual cluster member by
/// member; verified to be diagonal within `JOINT_DIAG_TOL` at the end.
pub fn simultaneous_eigen(family: &[Matrix], cluster_tol: f64) -> Result<(Matrix, Vec<Vec<f64>>)> {
    if family.is_empty() {
        return Err(Error::InvalidInput("simultaneous_eigen: empty family".into()));
    }
    let n = family[0].rows();
    for (i, x) in family.iter().enumerate() {
        if !x.is_square() || x.rows() != n {
            return Err(Error::Dimension(format!("family member {} is {}x{}, expected {}x{}", i, x.rows(), x.cols(), n, n)));
        }
        if !x.all_finite() {
            return Err(Error::InvalidInput(format!("family member {} has non-finite entries", i)));
        }
        let scale = x.max_abs().max(1.0);
        if x.asymmetry() > 1e-10 * scale {
            return Err(Error::NotSymmetric(format!("family member {} asymmetry {:.3e}", i, x.asymmetry())));
        }
    }
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let resid = bracket(&family[i], &family[j]).max_abs();
            if resid > COMMUTE_TOL {
                return Err(Error::NotCommuting(i, j, resid));
            }
        }
    }

    // Seeded generic combination; refinement below repairs unlucky draws.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6a6f696e74);
    let mut combo = Matrix::zeros(n, n);
    for x in family {
        let c: f64 = rng.random_range(0.25..1.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        combo.axpy(c, x);
    }
    let seed_ed = sym_eigen(&combo.sym_part(), cluster_tol)?;

    fn refine(block: Matrix, family: &[Matrix], k: usize, cluster_tol: f64) -> Result<Vec<Matrix>> {
        if k == family.len() || block.cols() <= 1 {
            return Ok(vec![block]);
        }
        let compressed = block.transpose().matmul(&family[k]).matmul(&block).sym_part();
        let ed = sym_eigen(&compressed, cluster_tol)?;
        let mut out = Vec::new();
        for sub in &ed.vectors {
            out.extend(refine(block.matmul(sub), family, k + 1, cluster_tol)?);
        }
        Ok(out)
    }

    let mut blocks = Vec::new();
    for b in seed_ed.vectors {
        blocks.extend(refine(b, family, 0, cluster_tol)?);
    }

    let mut cols: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for b in &blocks {
        for j in 0..b.cols() {
            let col = b.col(j);
            let vals: Vec<f64> = family.iter().map(|x| x.quad(&col, &col)).collect();
            cols.push((col, vals));
        }
    }
    // Canonical deterministic order: lexicographically descending joint values.
    cols.sort_by(|a, b| {
        for (x, y) in a.1.iter().zip(&b.1) {
            match y.partial_cmp(x).unwrap() {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    });

    let basis = Matrix::from_cols(&cols.iter().map(|c| c.0.clone()).collect::<Vec<_>>());
    let values: Vec<Vec<f64>> = cols.into_iter().map(|c| c.1).collect();

    for (i, x) in family.iter().enumerate() {
        let d = basis.transpose().matmul(x).matmul(&basis);
        let mut off = 0.0_f64;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    off = off.max(d[(r, c)].abs());
                }
            }
        }
        if off > JOINT_DIAG_TOL {
            return Err(Error::Verification(format!(
                "joint decomposition residual {:.3e} for member {} exceeds {:.1e}",
                off, i, JOINT_DIAG_TOL
            )));
        }
    }
    Ok((basis, values))
}

/// Result of projecting a matrix onto the span of a basis under the trace form.
#[derive(Debug, Clone)]
pub struct Projection {
    pub coords: Vec<f64>,
    pub projection: Matrix,
    pub residual: f64,
}

/// Project `x` onto span(basis) orthogonally with respect to the trace form.
/// The Gram system must be solvable; a tiny pivot signals a dependent or
/// degenerate basis.
pub fn project_span(x: &Matrix, basis: &[Matrix]) -> Result<Projection> {
    if basis.is_empty() {
        return Ok(Projection { coords: vec![], projection: Matrix::zeros(x.rows(), x.cols()), residual: x.frob_norm() });
    }
    let d = basis.len();
    let mut gram = Matrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let g = trace_form(&basis[i], &basis[j]);
            gram[(i, j)] = g;
            gram[(j, i)] = g;
        }
    }
    let rhs: Vec<f64> = basis.iter().map(|b| trace_form(x, b)).collect();
    let coords = solve(&gram, &rhs).map_err(|e| match e {
        Error::SingularGram(m) => Error::SingularGram(format!("project_span basis dependent: {}", m)),
        other => other,
    })?;
    let mut projection = Matrix::zeros(x.rows(), x.cols());
    for (c, b) in coords.iter().zip(basis) {
        projection.axpy(*c, b);
    }
    let residual = x.sub(&projection).frob_norm();
    Ok(Projection { coords, projection, residual })
}

/// Coordinates, projection and residual of `x` against a Frobenius
/// orthonormal basis. Unlike the trace form, the Frobenius product is
/// definite on every span, so this is the membership test of choice for
/// spans on which the trace form degenerates (nilpotent pieces, parabolics).
pub fn frob_project(x: &Matrix, ortho: &[Matrix]) -> Projection {
    let coords: Vec<f64> = ortho.iter().map(|b| x.dot(b)).collect();
    let mut projection = Matrix::zeros(x.rows(), x.cols());
    for (c, b) in coords.iter().zip(ortho) {
        projection.axpy(*c, b);
    }
    let residual = x.sub(&projection).frob_norm();
    Projection { coords, projection, residual }
}

/// Solve a square linear system by Gaussian elimination with partial pivoting.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    assert!(a.is_square() && a.rows() == b.len());
    let n = a.rows();
    let scale = a.max_abs().max(1.0);
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (pivot_row, pivot_val) = (col..n)
            .map(|r| (r, m[(perm[r], col)].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if pivot_val < 1e-12 * scale {
            return Err(Error::SingularGram(format!("pivot {:.3e} at column {}", pivot_val, col)));
        }
        perm.swap(col, pivot_row);
        let p = perm[col];
        for r in (col + 1)..n {
            let q = perm[r];
            let f = m[(q, col)] / m[(p, col)];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                let v = m[(p, c)];
                m[(q, c)] -= f * v;
            }
            rhs[q] -= f * rhs[p];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let p = perm[col];
        let mut s = rhs[p];
        for c in (col + 1)..n {
            s -= m[(p, c)] * x[c];
        }
        x[col] = s / m[(p, col)];
    }
    Ok(x)
}

/// Orthonormal basis of the kernel of `a` (viewed as a map on column
/// vectors), via the spectrum of a^T a. `rel_tol` is relative to the largest
/// eigenvalue of a^T a.
pub fn nullspace(a: &Matrix, rel_tol: f64) -> Result<Vec<Vec<f64>>> {
    let ata = a.transpose().matmul(a).sym_part();
    let ed = sym_eigen(&ata, 0.0_f64.max(rel_tol * 0.1))?;
    let lam_max = ed.values.first().copied().unwrap_or(0.0).max(0.0);
    let thresh = rel_tol * lam_max.max(1.0);
    let mut kernel = Vec::new();
    for (val, block) in ed.values.iter().zip(&ed.vectors) {
        if *val <= thresh {
            for j in 0..block.cols() {
                kernel.push(block.col(j));
            }
        }
    }
    Ok(kernel)
}

/// Rank of `a` with eigenvalues of a^T a below `RANK_EIG_TOL` (relative)
/// counting as zero.
pub fn rank(a: &Matrix) -> Result<usize> {
    let cols = a.cols();
    Ok(cols - nullspace(a, RANK_EIG_TOL)?.len())
}

/// Gram-Schmidt under the Frobenius inner product with re-orthogonalization.
/// Elements whose residual drops below `drop_tol` (relative to their norm)
/// are discarded as dependent.
pub fn orthonormalize(mats: &[Matrix], drop_tol: f64) -> Vec<Matrix> {
    let mut basis: Vec<Matrix> = Vec::new();
    for m in mats {
        let original = m.frob_norm();
        if original == 0.0 {
            continue;
        }
        let mut r = m.clone();
        for _pass in 0..2 {
            for b in &basis {
                let c = r.dot(b);
                r.axpy(-c, b);
            }
        }
        let nrm = r.frob_norm();
        if nrm > drop_tol * original.max(1.0) {
            basis.push(r.scale(1.0 / nrm));
        }
    }
    basis
}

/// Orthonormalize plain vectors under the dot product, dropping dependents.
pub fn orthonormalize_vecs(vecs: &[Vec<f64>], drop_tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vecs {
        let original = norm(v);
        if original == 0.0 {
            continue;
        }
        let mut r = v.clone();
        for _pass in 0..2 {
            for b in &basis {
                let c = dot(&r, b);
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= c * bi;
                }
            }
        }
        let nrm = norm(&r);
        if nrm > drop_tol * original.max(1.0) {
            basis.push(r.iter().map(|x| x / nrm).collect());
        }
    }
    basis
}

/// Matrix exponential by scaling and squaring with a Taylor series summed to
/// machine-level accuracy. Fine at desk scale; no Pade machinery needed.
pub fn expm(a: &Matrix) -> Matrix {
    assert!(a.is_square());
    let n = a.rows();
    let nrm = a.frob_norm();
    let s = if nrm > 0.5 { (nrm / 0.5).log2().ceil() as u32 } else { 0 };
    let b = a.scale(1.0 / (2.0_f64).powi(s as i32));
    let mut acc = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=40 {
        term = term.matmul(&b).scale(1.0 / k as f64);
        acc = acc.add(&term);
        if term.frob_norm() <= 1e-16 * acc.frob_norm().max(1.0) {
            break;
        }
    }
    for _ in 0..s {
        acc = acc.matmul(&acc);
    }
    acc
}
