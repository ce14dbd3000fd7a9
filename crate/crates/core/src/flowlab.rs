//! Norm-square machinery: the half squared norm of the gradient map, its
//! induced tangent field, descent integration to the limit point, the
//! orbit-infimum property, and the empirical stratification probe.

use crate::error::{Error, Result};
use crate::gradmap::{gradient_map, orbit_sample, FlowTrace, ProjectivePoint};
use crate::liealg::CartanSplit;
use crate::matkernel::{dot, norm, trace_form, Matrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_STEP: f64 = 0.01;
pub const DEFAULT_GRAD_TOL: f64 = 1e-9;
pub const DEFAULT_T_MAX: f64 = 200.0;

fn mu_of(split: &CartanSplit, coords: &[f64]) -> Matrix {
    let n = coords.len();
    let len = norm(coords);
    let mut s = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = coords[i] * coords[j] / (len * len);
        }
        s[(i, i)] -= 1.0 / n as f64;
    }
    let mut out = Matrix::zeros(n, n);
    for b in &split.p_basis {
        out.axpy(s.dot(b), b);
    }
    out
}

fn field_of(split: &CartanSplit, coords: &[f64]) -> Vec<f64> {
    let len = norm(coords);
    let unit: Vec<f64> = coords.iter().map(|c| c / len).collect();
    let mu = mu_of(split, &unit);
    let mx = mu.matvec(&unit);
    let reading = dot(&unit, &mx);
    mx.iter().zip(&unit).map(|(m, x)| m - reading * x).collect()
}

/// Half the squared norm of the gradient map at the point.
pub fn nu_p(split: &CartanSplit, x: &ProjectivePoint) -> f64 {
    let mu = gradient_map(split, x);
    0.5 * trace_form(&mu, &mu)
}

/// Tangent field induced by the gradient map at its own value: the
/// derivative of the norm-square function is twice this vector.
pub fn grad_nu_field(split: &CartanSplit, x: &ProjectivePoint) -> Vec<f64> {
    field_of(split, x.coords())
}

/// Outcome of descending the norm-square function from one start point.
#[derive(Debug, Clone)]
pub struct NormFlowResult {
    pub trace: FlowTrace,
    pub x_inf: ProjectivePoint,
    /// False when the time horizon ran out with the gradient above
    /// tolerance.
    pub converged: bool,
    pub t_final: f64,
}

/// Fixed-step fourth-order Runge-Kutta descent of the norm-square function
/// on the sphere, renormalizing every step, stopping at gradient tolerance
/// or at the time horizon.
pub fn integrate_norm_flow(
    split: &CartanSplit,
    x0: &ProjectivePoint,
    step: f64,
    grad_tol: f64,
    t_max: f64,
) -> Result<NormFlowResult> {
    if step <= 0.0 || !step.is_finite() {
        return Err(Error::InvalidInput("step must be positive".into()));
    }
    if grad_tol < 0.0 || t_max < 0.0 || !grad_tol.is_finite() || !t_max.is_finite() {
        return Err(Error::InvalidInput("tolerances must be finite and nonnegative".into()));
    }
    let field = |u: &[f64]| -> Vec<f64> { field_of(split, u).iter().map(|c| -c).collect() };
    let mut x: Vec<f64> = x0.coords().to_vec();
    let mut t = 0.0;
    let nu = |u: &[f64]| -> f64 {
        let mu = mu_of(split, u);
        0.5 * trace_form(&mu, &mu)
    };
    let mut trace = FlowTrace { times: vec![0.0], points: vec![x.clone()], values: vec![nu(&x)] };
    let mut converged = norm(&field_of(split, &x)) <= grad_tol;
    while !converged && t < t_max {
        let h = step.min(t_max - t);
        let k1 = field(&x);
        let x2: Vec<f64> = x.iter().zip(&k1).map(|(a, b)| a + 0.5 * h * b).collect();
        let k2 = field(&x2);
        let x3: Vec<f64> = x.iter().zip(&k2).map(|(a, b)| a + 0.5 * h * b).collect();
        let k3 = field(&x3);
        let x4: Vec<f64> = x.iter().zip(&k3).map(|(a, b)| a + h * b).collect();
        let k4 = field(&x4);
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let len = norm(&x);
        if len < 1e-12 || !len.is_finite() {
            return Err(Error::Convergence("norm flow lost normalization".into()));
        }
        for c in x.iter_mut() {
            *c /= len;
        }
        t += h;
        trace.times.push(t);
        trace.points.push(x.clone());
        trace.values.push(nu(&x));
        converged = norm(&field_of(split, &x)) <= grad_tol;
    }
    let x_inf = ProjectivePoint::new(&x)?;
    Ok(NormFlowResult { trace, x_inf, converged, t_final: t })
}

/// Sampled check of the infimum property of the limit norm over the orbit.
#[derive(Debug, Clone)]
pub struct OrbitInfReport {
    pub samples: usize,
    /// Norm of the gradient map at the limit of the base point.
    pub limit_norm: f64,
    /// Largest deviation of a sampled limit norm from the base limit norm.
    pub spread: f64,
    /// Smallest unflowed norm among the samples.
    pub min_sampled_norm: f64,
    /// Samples whose unflowed norm undercuts the limit norm beyond slack.
    pub violations: usize,
}

/// Flow the base point and a deterministic orbit sample to their limits and
/// compare norms: sampled points never undercut the limit norm, and the
/// limit norm itself is an orbit invariant up to sampling error.
pub fn orbit_inf_check(
    gens: &[Matrix],
    split: &CartanSplit,
    x0: &ProjectivePoint,
    g_samples: usize,
    seed: u64,
) -> Result<OrbitInfReport> {
    let base = integrate_norm_flow(split, x0, DEFAULT_STEP, DEFAULT_GRAD_TOL, DEFAULT_T_MAX)?;
    let limit_norm = gradient_map(split, &base.x_inf).frob_norm();
    let samples = orbit_sample(gens, x0, g_samples, 1.0, seed)?;
    let mut spread: f64 = 0.0;
    let mut min_sampled_norm = f64::INFINITY;
    let mut violations = 0;
    for p in &samples {
        let unflowed = gradient_map(split, p).frob_norm();
        min_sampled_norm = min_sampled_norm.min(unflowed);
        if unflowed < limit_norm - 1e-8 {
            violations += 1;
        }
        let flowed = integrate_norm_flow(split, p, DEFAULT_STEP, DEFAULT_GRAD_TOL, DEFAULT_T_MAX)?;
        let sampled_limit = gradient_map(split, &flowed.x_inf).frob_norm();
        spread = spread.max((sampled_limit - limit_norm).abs());
    }
    if samples.is_empty() {
        min_sampled_norm = limit_norm;
    }
    Ok(OrbitInfReport { samples: samples.len(), limit_norm, spread, min_sampled_norm, violations })
}

/// Empirical stratification of limit norms over uniform random starts.
#[derive(Debug, Clone)]
pub struct StratumReport {
    pub samples: usize,
    pub limit_norms: Vec<f64>,
    /// Cluster centers with their counts, ascending by value.
    pub histogram: Vec<(f64, usize)>,
    pub min_value: f64,
    /// Fraction of samples within the cluster tolerance of the minimum.
    pub min_fraction: f64,
    pub non_converged: usize,
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let mut u1: f64 = rng.random();
    while u1 <= 1e-300 {
        u1 = rng.random();
    }
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Flow uniformly random projective starts to their limits and cluster the
/// limit norms; a unique open minimal stratum shows up as a dominant bottom
/// cluster.
pub fn stratification_probe(
    split: &CartanSplit,
    n_samples: usize,
    seed: u64,
    cluster_tol: f64,
) -> Result<StratumReport> {
    if n_samples < 100 {
        return Err(Error::InvalidInput("stratification probe needs at least 100 samples".into()));
    }
    if cluster_tol <= 0.0 || !cluster_tol.is_finite() {
        return Err(Error::InvalidInput("cluster tolerance must be positive".into()));
    }
    let n = split.p_basis[0].rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut limit_norms = Vec::with_capacity(n_samples);
    let mut non_converged = 0;
    for _ in 0..n_samples {
        let v: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();
        let x0 = ProjectivePoint::new(&v)?;
        let flow = integrate_norm_flow(split, &x0, DEFAULT_STEP, DEFAULT_GRAD_TOL, DEFAULT_T_MAX)?;
        if !flow.converged {
            non_converged += 1;
        }
        limit_norms.push(gradient_map(split, &flow.x_inf).frob_norm());
    }
    let mut sorted = limit_norms.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut histogram: Vec<(f64, usize)> = Vec::new();
    for v in &sorted {
        match histogram.last_mut() {
            Some((center, count)) if (*v - *center).abs() <= cluster_tol => {
                *center = (*center * *count as f64 + v) / (*count as f64 + 1.0);
                *count += 1;
            }
            _ => histogram.push((*v, 1)),
        }
    }
    let min_value = sorted[0];
    let in_min = limit_norms.iter().filter(|v| (*v - min_value).abs() <= cluster_tol).count();
    let min_fraction = in_min as f64 / n_samples as f64;
    Ok(StratumReport { samples: n_samples, limit_norms, histogram, min_value, min_fraction, non_converged })
}
