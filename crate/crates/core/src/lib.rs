//! Numerical machinery for gradient maps of real projective representations.
//!
//! A compatible subgroup `G` of `SL(n,R)` is one closed under transpose; its
//! Lie algebra splits as `g = k + p` into antisymmetric and symmetric parts.
//! This crate computes, for such an algebra acting on `R^n` (or a symmetric
//! power of it), the restricted root system of a maximal abelian slice
//! `a` of `p`, the Weyl group, the weights, the gradient map
//! `mu_p([z]) = pi_p(z z^T - Id/n)` on projective space, the momentum
//! polytope `conv(W . mu_rho)`, parabolic subalgebras, the atlas of polytope
//! faces indexed by connected subsets of the simple roots, and the gradient
//! flows of `mu^beta` and of the norm-square `nu_p = |mu_p|^2 / 2`.
//!
//! Everything is dense `f64` linear algebra at desk scale (`n <= 512`,
//! algebra dimension in the tens); correctness and determinism are favored
//! over speed throughout.

pub mod convgeo;
pub mod error;
pub mod faceatlas;
pub mod flowlab;
pub mod gradmap;
pub mod liealg;
pub mod matkernel;
pub mod repspace;
pub mod scenario;

pub use error::{Error, Result};
