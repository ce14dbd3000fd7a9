//! Representation constructors and weight data: symmetric powers of the
//! standard action, the adjoint realization, joint weights of the abelian
//! slice, and the highest weight with its dual vector.
//!
//! Symmetric powers use the monomial basis scaled by multinomial weights
//! `sqrt(k!/prod m_i!)`, which makes the induced inner product standard, so
//! antisymmetric matrices induce antisymmetric matrices and compatibility is
//! preserved.

use crate::error::{Error, Result};
use crate::liealg::{AbelianSlice, LieAlgebraRep, RestrictedRootSystem};
use crate::matkernel::{bracket, dot, simultaneous_eigen, Matrix};

/// Hard cap on the dimension of a constructed representation space.
pub const DIM_CAP: usize = 512;

/// Exponent vectors of degree `k` in `n` variables, lexicographically
/// descending, so `x^2, xy, y^2` for n = k = 2.
pub fn multi_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(vars: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if vars == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=left).rev() {
            prefix.push(first);
            rec(vars - 1, left - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
        if acc > (usize::MAX as u128) {
            return None;
        }
    }
    Some(acc as usize)
}

/// Induced action on the k-th symmetric power. The generator `X` acts as a
/// derivation on monomials; in the normalized basis the entry moving one
/// exponent from variable `i` to variable `a` is `X[a,i] sqrt(m_i (m_a+1))`.
pub fn sym_power_rep(alg: &LieAlgebraRep, k: usize) -> Result<LieAlgebraRep> {
    if k == 0 {
        return Err(Error::InvalidInput("symmetric power requires k >= 1".into()));
    }
    let n = alg.n;
    let dim = binomial(n + k - 1, k)
        .ok_or_else(|| Error::Unsupported(format!("symmetric power dimension overflows for n={}, k={}", n, k)))?;
    if dim > DIM_CAP {
        return Err(Error::Unsupported(format!(
            "symmetric power dimension {} exceeds the cap {}",
            dim, DIM_CAP
        )));
    }
    let indices = multi_indices(n, k);
    let mut position = std::collections::HashMap::new();
    for (i, m) in indices.iter().enumerate() {
        position.insert(m.clone(), i);
    }

    let mut gens = Vec::with_capacity(alg.dim());
    for x in &alg.generators {
        let mut d = Matrix::zeros(dim, dim);
        for (col, m) in indices.iter().enumerate() {
            for i in 0..n {
                if m[i] == 0 {
                    continue;
                }
                for a in 0..n {
                    let xai = x[(a, i)];
                    if xai == 0.0 {
                        continue;
                    }
                    if a == i {
                        d[(col, col)] += m[i] as f64 * xai;
                    } else {
                        let mut target = m.clone();
                        target[i] -= 1;
                        target[a] += 1;
                        let row = position[&target];
                        d[(row, col)] += xai * ((m[i] * (m[a] + 1)) as f64).sqrt();
                    }
                }
            }
        }
        // The induced matrix of a traceless generator is traceless up to
        // rounding; subtract the drift so the invariant holds exactly.
        let drift = d.trace();
        if drift.abs() > 1e-8 * d.max_abs().max(1.0) {
            return Err(Error::InvalidInput(format!("induced generator has trace {:.3e}", drift)));
        }
        if drift != 0.0 {
            let shift = drift / dim as f64;
            for i in 0..dim {
                d[(i, i)] -= shift;
            }
        }
        gens.push(d);
    }
    LieAlgebraRep::new(dim, gens)
}

/// Adjoint realization: each orthonormal basis element acting on the algebra
/// itself in that basis. Compatible whenever the source algebra is.
pub fn adjoint_rep(alg: &LieAlgebraRep) -> Result<LieAlgebraRep> {
    let ortho = alg.ortho_basis();
    let d = ortho.len();
    if d > DIM_CAP {
        return Err(Error::Unsupported(format!("adjoint dimension {} exceeds the cap {}", d, DIM_CAP)));
    }
    let mut gens = Vec::with_capacity(d);
    for b in ortho {
        let mut m = Matrix::zeros(d, d);
        for (j, gj) in ortho.iter().enumerate() {
            let br = bracket(b, gj);
            for (k, gk) in ortho.iter().enumerate() {
                m[(k, j)] = br.dot(gk);
            }
        }
        gens.push(m);
    }
    LieAlgebraRep::new(d, gens)
}

/// Joint weight data of the slice action on the representation space.
#[derive(Debug, Clone)]
pub struct WeightData {
    /// Weight functionals in slice coordinates, sorted by descending pairing
    /// with the regular functional.
    pub weights: Vec<Vec<f64>>,
    /// Orthonormal basis of each weight space as columns.
    pub spaces: Vec<Matrix>,
    /// Index of the highest weight.
    pub highest: usize,
    /// Dual vector of the highest weight in slice coordinates.
    pub mu_rho: Vec<f64>,
    /// Unit highest weight vector with canonical sign.
    pub v_rho: Vec<f64>,
}

impl WeightData {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.spaces.iter().map(|s| s.cols()).collect()
    }
}

/// Index of the unique weight maximizing the pairing with the regular
/// functional; errors on a tie or when the winner fails dominance.
pub fn highest_weight(weights: &[Vec<f64>], rs: &RestrictedRootSystem) -> Result<usize> {
    if weights.is_empty() {
        return Err(Error::InvalidInput("empty weight list".into()));
    }
    let pairings: Vec<f64> = weights.iter().map(|w| dot(w, &rs.regular_functional)).collect();
    let mut best = 0;
    for i in 1..weights.len() {
        if pairings[i] > pairings[best] {
            best = i;
        }
    }
    for i in 0..weights.len() {
        if i != best && (pairings[best] - pairings[i]).abs() <= 1e-9 {
            return Err(Error::Degenerate(format!(
                "weights {} and {} tie against the regular functional",
                best, i
            )));
        }
    }
    for &b in &rs.base {
        let pairing = dot(&weights[best], &rs.roots[b].functional);
        if pairing < -1e-9 {
            return Err(Error::Reducible(format!(
                "candidate highest weight pairs negatively ({:.3e}) with a base root",
                pairing
            )));
        }
    }
    Ok(best)
}

/// Diagonalize the slice action on the representation space and assemble the
/// weight data. The representation must act irreducibly.
pub fn weights(alg: &LieAlgebraRep, a: &AbelianSlice, rs: &RestrictedRootSystem) -> Result<WeightData> {
    if !crate::faceatlas::irreducible_on(&alg.generators, &Matrix::identity(alg.n))? {
        return Err(Error::Reducible("representation space splits under the algebra".into()));
    }
    let (basis, joint) = simultaneous_eigen(&a.basis, 1e-8)?;
    let n = alg.n;

    let mut groups: Vec<(Vec<f64>, Vec<usize>)> = Vec::new();
    'cols: for j in 0..n {
        for (center, members) in groups.iter_mut() {
            if joint[j].iter().zip(center.iter()).all(|(x, y)| (x - y).abs() <= 1e-8) {
                members.push(j);
                continue 'cols;
            }
        }
        groups.push((joint[j].clone(), vec![j]));
    }
    for (center, members) in groups.iter_mut() {
        for k in 0..center.len() {
            center[k] = members.iter().map(|&j| joint[j][k]).sum::<f64>() / members.len() as f64;
        }
    }
    groups.sort_by(|x, y| {
        let px = dot(&x.0, &rs.regular_functional);
        let py = dot(&y.0, &rs.regular_functional);
        py.partial_cmp(&px).unwrap().then_with(|| {
            for (a, b) in x.0.iter().zip(&y.0) {
                match b.partial_cmp(a).unwrap() {
                    std::cmp::Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    let weight_list: Vec<Vec<f64>> = groups.iter().map(|g| g.0.clone()).collect();
    let spaces: Vec<Matrix> = groups
        .iter()
        .map(|(_, members)| {
            let mut m = Matrix::zeros(n, members.len());
            for (c, &j) in members.iter().enumerate() {
                m.set_col(c, &basis.col(j));
            }
            m
        })
        .collect();

    let highest = highest_weight(&weight_list, rs)?;
    if spaces[highest].cols() != 1 {
        return Err(Error::Reducible(format!(
            "highest weight space has dimension {}; reducible or wrong positivity",
            spaces[highest].cols()
        )));
    }
    let mut v_rho = spaces[highest].col(0);
    if let Some(first) = v_rho.iter().find(|c| c.abs() > 1e-9) {
        if *first < 0.0 {
            for c in v_rho.iter_mut() {
                *c = -*c;
            }
        }
    }
    let mu_rho = weight_list[highest].clone();
    Ok(WeightData { weights: weight_list, spaces, highest, mu_rho, v_rho })
}
