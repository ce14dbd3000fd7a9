//! Acceptance gate: ten end-to-end criteria, one test each, every test
//! printing its own pass line. Tolerances and sample counts are part of the
//! contract; oracles here are computed independently of the code under test
//! wherever the criterion asks for it.

use orbitope::convgeo::weyl_orbit_polytope;
use orbitope::faceatlas::{casselman_correspondence, enumerate_mu_connected, sandwich_check};
use orbitope::flowlab::{orbit_inf_check, stratification_probe};
use orbitope::gradmap::{
    beta_profile, flow_limit, gradient_map, integrate_beta_flow, mu_a, mu_beta, orbit_sample, ProjectivePoint,
};
use orbitope::liealg::{
    cartan_split, maximal_abelian, restricted_roots, weyl_group, AbelianSlice, CartanSplit, LieAlgebraRep,
    RestrictedRootSystem, WeylGroup,
};
use orbitope::matkernel::{dot, norm, sym_eigen, trace_form, Matrix};
use orbitope::repspace::{weights, WeightData};
use orbitope::scenario::{preset_algebra, PRESETS};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

struct Setup {
    alg: LieAlgebraRep,
    split: CartanSplit,
    a: AbelianSlice,
    rs: RestrictedRootSystem,
    w: WeylGroup,
}

fn setup(preset: &str) -> Setup {
    let alg = preset_algebra(preset).unwrap();
    let split = cartan_split(&alg).unwrap();
    let a = maximal_abelian(&split, 11).unwrap();
    let rs = restricted_roots(&alg, &a, 1e-8).unwrap();
    let w = weyl_group(&rs).unwrap();
    Setup { alg, split, a, rs, w }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(1e-12..1.0);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        let s = norm(&v);
        if s > 1e-6 {
            return v.iter().map(|c| c / s).collect();
        }
    }
}

fn random_combo(rng: &mut ChaCha8Rng, basis: &[Matrix]) -> Matrix {
    let n = basis[0].rows();
    let mut out = Matrix::zeros(n, n);
    for b in basis {
        out.axpy(gaussian(rng), b);
    }
    out
}

fn embed(a: &AbelianSlice, coords: &[f64]) -> Matrix {
    let n = a.basis[0].rows();
    let mut out = Matrix::zeros(n, n);
    for (c, h) in coords.iter().zip(&a.basis) {
        out.axpy(*c, h);
    }
    out
}

/// Move coordinates into the closed dominant chamber with a Weyl element.
fn dominate(w: &WeylGroup, rs: &RestrictedRootSystem, coords: &[f64]) -> Vec<f64> {
    for el in &w.elements {
        let c = el.matvec(coords);
        if rs.base_functionals().iter().all(|f| dot(f, &c) >= -1e-12) {
            return c;
        }
    }
    panic!("no Weyl element reaches the dominant chamber");
}

#[test]
fn criterion_01_gradient_formula_equivalence() {
    for (preset, _) in PRESETS {
        let s = setup(preset);
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0xac01);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let z = ProjectivePoint::new(&random_unit(&mut rng, s.alg.n)).unwrap();
            let beta = random_combo(&mut rng, &s.split.p_basis);
            let lhs = trace_form(&gradient_map(&s.split, &z), &beta);
            let bp = beta_profile(&s.split, &beta, 1e-8).unwrap();
            let rhs = mu_beta(&bp, &z);
            worst = worst.max((lhs - rhs).abs());
        }
        assert!(worst <= 1e-10, "{}: pairing mismatch {:.3e}", preset, worst);
        let dt = started.elapsed().as_secs_f64();
        assert!(dt < 1.0, "{}: took {:.2}s", preset, dt);
    }
    println!("[PASS] criterion 1: gradient-formula equivalence on all presets, 100 pairs each");
}

#[test]
fn criterion_02_highest_weight_maximum() {
    let started = Instant::now();
    for (preset, _) in PRESETS {
        let s = setup(preset);
        let wd = weights(&s.alg, &s.a, &s.rs).unwrap();
        let x_rho = ProjectivePoint::new(&wd.v_rho).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0xac02);
        let mut profiles = Vec::new();
        for _ in 0..20 {
            let raw: Vec<f64> = (0..s.a.rank()).map(|_| gaussian(&mut rng)).collect();
            let coords = dominate(&s.w, &s.rs, &raw);
            let bp = beta_profile(&s.split, &embed(&s.a, &coords), 1e-8).unwrap();
            let top = bp.values[0];
            let at_rho = mu_beta(&bp, &x_rho);
            assert!(
                (at_rho - top).abs() <= 1e-10,
                "{}: highest weight line reads {:.3e} off the top eigenvalue",
                preset,
                (at_rho - top).abs()
            );
            profiles.push(bp);
        }
        let orbit = orbit_sample(&s.split.k_basis, &x_rho, 10_000, 1.0, 0xac02).unwrap();
        for bp in &profiles {
            let top = bp.values[0];
            for x in &orbit {
                assert!(
                    mu_beta(bp, x) <= top + 1e-10,
                    "{}: an orbit sample exceeds the top eigenvalue",
                    preset
                );
            }
        }
    }
    let dt = started.elapsed().as_secs_f64();
    assert!(dt < 5.0, "criterion took {:.2}s", dt);
    println!("[PASS] criterion 2: compact-orbit maximum attained at the highest weight line ({:.2}s)", dt);
}

#[test]
fn criterion_03_kostant_containment() {
    let started = Instant::now();
    for (preset, _) in PRESETS {
        let s = setup(preset);
        let wd = weights(&s.alg, &s.a, &s.rs).unwrap();
        let p = weyl_orbit_polytope(&s.w, &wd.mu_rho).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0xac03);
        for _ in 0..10_000 {
            let x = ProjectivePoint::new(&random_unit(&mut rng, s.alg.n)).unwrap();
            assert!(p.contains(&mu_a(&s.a, &x), 1e-8), "{}: uniform reading escapes the hull", preset);
        }
        let x_rho = ProjectivePoint::new(&wd.v_rho).unwrap();
        for x in orbit_sample(&s.split.k_basis, &x_rho, 10_000, 1.0, 0xac03).unwrap() {
            assert!(p.contains(&mu_a(&s.a, &x), 1e-8), "{}: orbit reading escapes the hull", preset);
        }
        // Vertices: exact readings at the matching weight lines, approached by
        // aligned perturbations.
        let per_vertex = 100_000 / p.vertices.len();
        for v in &p.vertices {
            let j = (0..wd.weights.len())
                .find(|&j| norm(&wd.weights[j].iter().zip(v).map(|(a, b)| a - b).collect::<Vec<_>>()) <= 1e-8)
                .unwrap_or_else(|| panic!("{}: vertex is not a weight", preset));
            assert_eq!(wd.spaces[j].cols(), 1, "{}: extreme weight with multiplicity", preset);
            let line = ProjectivePoint::new(&wd.spaces[j].col(0)).unwrap();
            let exact = mu_a(&s.a, &line);
            let err = norm(&exact.iter().zip(v).map(|(a, b)| a - b).collect::<Vec<_>>());
            assert!(err <= 1e-10, "{}: weight line reads {:.3e} away from its vertex", preset, err);
            let mut best = f64::INFINITY;
            for _ in 0..per_vertex {
                let mut y = wd.spaces[j].col(0);
                for c in y.iter_mut() {
                    *c += 5e-4 * gaussian(&mut rng);
                }
                let reading = mu_a(&s.a, &ProjectivePoint::new(&y).unwrap());
                best = best.min(norm(&reading.iter().zip(v).map(|(a, b)| a - b).collect::<Vec<_>>()));
            }
            assert!(best <= 1e-3, "{}: best aligned sample sits {:.3e} from the vertex", preset, best);
        }
    }
    let dt = started.elapsed().as_secs_f64();
    assert!(dt < 30.0, "criterion took {:.2}s", dt);
    println!("[PASS] criterion 3: momentum-slice readings stay inside the orbit hull ({:.2}s)", dt);
}

#[test]
fn criterion_04_flow_limit_is_projection() {
    let started = Instant::now();
    let s = setup("sl3-std");
    let n = s.alg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(0xac04);
    let mut profiles = Vec::new();
    while profiles.len() < 20 {
        let mut beta = random_combo(&mut rng, &s.split.p_basis);
        let scale = 2.0 / beta.frob_norm();
        beta = beta.scale(scale);
        let eig = sym_eigen(&beta, 1e-8).unwrap();
        let min_gap = eig
            .values
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min);
        if eig.values.len() < 2 || min_gap < 0.25 {
            continue;
        }
        // Unit spectral gap makes the t = 40 endpoint test well conditioned.
        profiles.push(beta_profile(&s.split, &beta.scale(1.0 / min_gap), 1e-8).unwrap());
    }
    for i in 0..1000 {
        let x = ProjectivePoint::new(&random_unit(&mut rng, n)).unwrap();
        let bp = &profiles[i % profiles.len()];
        let limit = flow_limit(bp, &x).unwrap();

        // Independent oracle: eigendecompose afresh, project onto the top
        // eigenblock carrying mass, renormalize.
        let eig = sym_eigen(&bp.beta, 1e-8).unwrap();
        let mut order: Vec<usize> = (0..eig.values.len()).collect();
        order.sort_by(|&p, &q| eig.values[q].partial_cmp(&eig.values[p]).unwrap());
        let mut oracle = None;
        for &b in &order {
            let block = &eig.vectors[b];
            let mut proj = vec![0.0; n];
            for j in 0..block.cols() {
                let col = block.col(j);
                let c = dot(&col, x.coords());
                for (pi, ci) in proj.iter_mut().zip(&col) {
                    *pi += c * ci;
                }
            }
            if norm(&proj) > 1e-9 {
                oracle = Some(ProjectivePoint::new(&proj).unwrap());
                break;
            }
        }
        let oracle = oracle.expect("a supported block exists");
        assert!(
            limit.dist(&oracle) <= 1e-9,
            "flow limit is {:.3e} away from the spectral projection",
            limit.dist(&oracle)
        );

        let trace = integrate_beta_flow(&bp.beta, &x, 0.005, 40.0).unwrap();
        let endpoint = ProjectivePoint::new(trace.points.last().unwrap()).unwrap();
        assert!(
            endpoint.dist(&limit) <= 1e-6,
            "integrated endpoint is {:.3e} away from the limit",
            endpoint.dist(&limit)
        );
    }
    let dt = started.elapsed().as_secs_f64();
    assert!(dt < 10.0, "criterion took {:.2}s", dt);
    println!("[PASS] criterion 4: flow limits equal spectral projections, integration concurs ({:.2}s)", dt);
}

/// Brute-force face-class count: hull faces built from scratch (interval or
/// angular-sorted polygon), Weyl action reduced to vertex permutations,
/// classes counted as distinct canonical index sets.
fn brute_force_face_classes(orbit: &[Vec<f64>], welts: &[Matrix]) -> usize {
    let m = orbit.len();
    let d = orbit[0].len();
    let perms: Vec<Vec<usize>> = welts
        .iter()
        .map(|el| {
            (0..m)
                .map(|i| {
                    let img = el.matvec(&orbit[i]);
                    (0..m)
                        .find(|&j| norm(&img.iter().zip(&orbit[j]).map(|(a, b)| a - b).collect::<Vec<_>>()) <= 1e-7)
                        .expect("Weyl image missing from the orbit")
                })
                .collect()
        })
        .collect();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    match d {
        1 => {
            let mut idx: Vec<usize> = (0..m).collect();
            idx.sort_by(|&i, &j| orbit[i][0].partial_cmp(&orbit[j][0]).unwrap());
            faces.push(vec![idx[0]]);
            faces.push(vec![idx[m - 1]]);
        }
        2 => {
            // same-norm orbit points all lie on a circle, so every point is a
            // hull vertex and edges join angular neighbors
            let mut idx: Vec<usize> = (0..m).collect();
            idx.sort_by(|&i, &j| {
                let ai = orbit[i][1].atan2(orbit[i][0]);
                let aj = orbit[j][1].atan2(orbit[j][0]);
                ai.partial_cmp(&aj).unwrap()
            });
            for k in 0..m {
                faces.push(vec![idx[k]]);
                let mut edge = vec![idx[k], idx[(k + 1) % m]];
                edge.sort();
                faces.push(edge);
            }
        }
        _ => panic!("brute-force enumeration written for ranks 1 and 2"),
    }
    faces.push((0..m).collect());
    let mut canon: Vec<Vec<usize>> = faces
        .iter()
        .map(|f| {
            perms
                .iter()
                .map(|p| {
                    let mut mapped: Vec<usize> = f.iter().map(|&i| p[i]).collect();
                    mapped.sort();
                    mapped
                })
                .min()
                .unwrap()
        })
        .collect();
    canon.sort();
    canon.dedup();
    canon.len()
}

#[test]
fn criterion_05_casselman_bijection() {
    let started = Instant::now();
    for (preset, expected) in [("sl2-std", 2), ("sl3-std", 3), ("sl3-adj", 4)] {
        let s = setup(preset);
        let wd = weights(&s.alg, &s.a, &s.rs).unwrap();
        let p = weyl_orbit_polytope(&s.w, &wd.mu_rho).unwrap();
        let atlas = casselman_correspondence(&s.rs, &s.w, &wd.mu_rho, &p).unwrap();
        assert!(atlas.matched, "{}: correspondence mismatch: {:?}", preset, atlas.diff);
        assert_eq!(atlas.classes.len(), expected, "{}: class count", preset);

        let mut orbit: Vec<Vec<f64>> = Vec::new();
        for el in &s.w.elements {
            let img = el.matvec(&wd.mu_rho);
            if !orbit
                .iter()
                .any(|q| norm(&img.iter().zip(q).map(|(a, b)| a - b).collect::<Vec<_>>()) <= 1e-8)
            {
                orbit.push(img);
            }
        }
        let brute = brute_force_face_classes(&orbit, &s.w.elements);
        assert_eq!(brute, expected, "{}: brute-force class count", preset);
    }
    let dt = started.elapsed().as_secs_f64();
    assert!(dt < 5.0, "criterion took {:.2}s", dt);
    println!("[PASS] criterion 5: connected-subset/face-class bijection with counts 2, 3, 4 ({:.2}s)", dt);
}

#[test]
fn criterion_06_parabolic_sandwich() {
    let started = Instant::now();
    for preset in ["sl3-std", "sl2-sym2"] {
        let s = setup(preset);
        let wd = weights(&s.alg, &s.a, &s.rs).unwrap();
        let subsets = enumerate_mu_connected(&s.rs, &wd.mu_rho).unwrap();
        assert!(!subsets.is_empty());
        for ms in &subsets {
            let sw = sandwich_check(&s.alg, &s.rs, ms, &wd).unwrap();
            assert!(
                sw.lower_residual <= 1e-8 && sw.upper_residual <= 1e-8,
                "{} {:?}: residuals {:.3e} / {:.3e}",
                preset,
                ms.subset,
                sw.lower_residual,
                sw.upper_residual
            );
            assert!(sw.irreducible, "{} {:?}: top eigenspace not irreducible", preset, ms.subset);
            assert!(sw.ok, "{} {:?}: sandwich failed", preset, ms.subset);
        }
    }
    let dt = started.elapsed().as_secs_f64();
    assert!(dt < 5.0, "criterion took {:.2}s", dt);
    println!("[PASS] criterion 6: parabolic sandwich holds on every connected subset ({:.2}s)", dt);
}

#[test]
fn criterion_07_norm_square_orbit_invariance() {
    let started = Instant::now();
    let s = setup("sl2-sym2");
    let mut rng = ChaCha8Rng::seed_from_u64(0xac07);
    let x0 = ProjectivePoint::new(&random_unit(&mut rng, s.alg.n)).unwrap();
    let report = orbit_inf_check(&s.alg.ortho_basis(), &s.split, &x0, 20, 0xac07).unwrap();
    assert!(report.spread <= 1e-5, "limit norms spread {:.3e}", report.spread);
    assert_eq!(report.violations, 0, "a sampled point undercut the limit norm");
    let dt = started.elapsed().as_secs_f64();
    assert!(dt < 20.0, "criterion took {:.2}s", dt);
    println!("[PASS] criterion 7: norm-square limit is a full-orbit invariant ({:.2}s)", dt);
}

#[test]
fn criterion_08_minimal_stratum_dominance() {
    let started = Instant::now();
    for preset in ["sl2-sym2", "sl3-std"] {
        let s = setup(preset);
        let report = stratification_probe(&s.split, 1000, 0xac08, 1e-4).unwrap();
        assert!(
            report.min_fraction >= 0.95,
            "{}: minimal stratum fraction {:.3}",
            preset,
            report.min_fraction
        );
    }
    let dt = started.elapsed().as_secs_f64();
    assert!(dt < 60.0, "criterion took {:.2}s", dt);
    println!("[PASS] criterion 8: minimal stratum captures at least 95% of samples ({:.2}s)", dt);
}

/// Closed-form weight Gram oracle. The slice readings of the standard basis
/// diagonal directions are projections of coordinate functionals, so every
/// pairwise product is a rational number independent of the slice basis.
fn gram_multiset(wd: &WeightData) -> Vec<f64> {
    let mut out = Vec::new();
    for u in &wd.weights {
        for v in &wd.weights {
            out.push(dot(u, v));
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

fn assert_multiset(preset: &str, got: &[f64], want: &[f64]) {
    assert_eq!(got.len(), want.len(), "{}: weight count", preset);
    let mut w = want.to_vec();
    w.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (g, e) in got.iter().zip(&w) {
        assert!((g - e).abs() <= 1e-8, "{}: Gram value {:.12} vs oracle {:.12}", preset, g, e);
    }
}

#[test]
fn criterion_09_structure_counts() {
    let started = Instant::now();
    let expectations = [("sl2-std", 2usize, 2usize), ("sl3-std", 6, 6), ("sp4-std", 8, 8)];
    for (preset, root_count, weyl_order) in expectations {
        let s = setup(preset);
        assert_eq!(s.rs.roots.len(), root_count, "{}: root count", preset);
        assert_eq!(s.w.elements.len(), weyl_order, "{}: Weyl order", preset);
    }

    // Projection of coordinate functionals onto the diagonal slice gives
    // every Gram entry in closed form.
    let g2 = |i: usize, j: usize| if i == j { 1.0 - 0.5 } else { -0.5 };
    let g3 = |i: usize, j: usize| if i == j { 1.0 - 1.0 / 3.0 } else { -1.0 / 3.0 };

    let s = setup("sl2-std");
    let wd = weights(&s.alg, &s.a, &s.rs).unwrap();
    let mut want = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            want.push(g2(i, j));
        }
    }
    assert_multiset("sl2-std", &gram_multiset(&wd), &want);

    let s = setup("sl3-std");
    let wd = weights(&s.alg, &s.a, &s.rs).unwrap();
    let mut want = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            want.push(g3(i, j));
        }
    }
    assert_multiset("sl3-std", &gram_multiset(&wd), &want);

    // sp4 diagonal model: slice directions diag(t1, t2, -t1, -t2), so the
    // coordinate functional projections pair to +-1/2 and 0.
    let s = setup("sp4-std");
    let wd = weights(&s.alg, &s.a, &s.rs).unwrap();
    let mut want = vec![0.5, 0.5, 0.5, 0.5, -0.5, -0.5, -0.5, -0.5];
    want.extend(std::iter::repeat(0.0).take(8));
    assert_multiset("sp4-std", &gram_multiset(&wd), &want);

    // Symmetric squares: weights are pairwise sums of the base weights, but
    // the square pulls the trace form back with the uniform factor n + 2, so
    // slice functionals shrink by its square root and Gram entries by n + 2.
    let s = setup("sl2-sym2");
    let wd = weights(&s.alg, &s.a, &s.rs).unwrap();
    let pairs2 = [(0, 0), (0, 1), (1, 1)];
    let mut want = Vec::new();
    for &(i, j) in &pairs2 {
        for &(k, l) in &pairs2 {
            want.push((g2(i, k) + g2(i, l) + g2(j, k) + g2(j, l)) / 4.0);
        }
    }
    assert_multiset("sl2-sym2", &gram_multiset(&wd), &want);

    let s = setup("sl3-sym2");
    let wd = weights(&s.alg, &s.a, &s.rs).unwrap();
    let pairs3 = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let mut want = Vec::new();
    for &(i, j) in &pairs3 {
        for &(k, l) in &pairs3 {
            want.push((g3(i, k) + g3(i, l) + g3(j, k) + g3(j, l)) / 5.0);
        }
    }
    assert_multiset("sl3-sym2", &gram_multiset(&wd), &want);

    let dt = started.elapsed().as_secs_f64();
    assert!(dt < 5.0, "criterion took {:.2}s", dt);
    println!("[PASS] criterion 9: root counts, Weyl orders, and weight Gram multisets match oracles ({:.2}s)", dt);
}

#[test]
fn criterion_10_determinism_golden() {
    let started = Instant::now();
    let bin = env!("CARGO_BIN_EXE_orbitope");
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut ran = 0;
    for entry in std::fs::read_dir(&root).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().map(|e| e != "json").unwrap_or(true) {
            continue;
        }
        let dir = tempfile::tempdir().unwrap();
        let mut reports = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("run{}", run));
            let status = std::process::Command::new(bin)
                .arg("run")
                .arg(&path)
                .arg("--out")
                .arg(&out)
                .output()
                .unwrap();
            assert!(
                status.status.success(),
                "{}: exit {:?}\n{}",
                path.display(),
                status.status.code(),
                String::from_utf8_lossy(&status.stderr)
            );
            reports.push(std::fs::read(out.join("report.json")).unwrap());
        }
        assert_eq!(reports[0], reports[1], "{}: reports differ between runs", path.display());
        ran += 1;
    }
    assert!(ran >= 7, "expected the shipped scenario set, found {}", ran);
    let dt = started.elapsed().as_secs_f64();
    assert!(dt < 120.0, "criterion took {:.2}s", dt);
    println!("[PASS] criterion 10: byte-identical reports for {} shipped scenarios ({:.2}s)", ran, dt);
}
