//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `cargo test -p convexcal-cli --test acceptance -- --nocapture`).
//! Every tolerance is pinned in code next to the check it gates.

use std::time::Instant;

use convexcal_core::bmh::{
    adjoint_pair, adjoint_pair_dirac, commutation_check, quermass_chain, v1_symmetry,
    BmHomomorphism,
};
use convexcal_core::body::{blaschke_sum, Polytope3};
use convexcal_core::ellipsoid::Ellipsoid;
use convexcal_core::minkowski::{solve, MinkowskiInstance};
use convexcal_core::quad::{support_grid, SphereRule};
use convexcal_core::sample;
use convexcal_core::sphharm::SpectralBody;
use convexcal_core::verify::mc_shadow_area;
use convexcal_core::zonal::{
    is_support_profile, legendre_coefficients, weakly_positive, ZonalProfile,
};
use convexcal_core::KAPPA_3;

fn report(criterion: &str, pass: bool, detail: String) {
    println!(
        "[{}] criterion {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

/// 1. Projection-body golden case on the cube: exact support values at 1000
/// random directions (<= 1e-12) and agreement with the Monte-Carlo
/// shadow-area oracle within 1% at 50 directions, in under 5 seconds.
#[test]
fn criterion_01_projection_golden_case() {
    let start = Instant::now();
    let phi = BmHomomorphism::projection_body(12);
    let cube = Polytope3::cube(1.0);
    let mu = cube.surface_measure().unwrap();
    let mut rng = sample::rng(1);
    let mut max_err = 0.0f64;
    for _ in 0..1000 {
        let u = sample::unit_vector(&mut rng);
        let expect = 4.0 * (u[0].abs() + u[1].abs() + u[2].abs());
        max_err = max_err.max((phi.support_at(&mu, u) - expect).abs());
    }
    let mut max_mc_rel = 0.0f64;
    for seed in 0..50u64 {
        let u = sample::unit_vector(&mut rng);
        let conv = phi.support_at(&mu, u);
        let mc = mc_shadow_area(&cube, u, 400_000, seed);
        max_mc_rel = max_mc_rel.max((mc - conv).abs() / conv);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = max_err <= 1e-12 && max_mc_rel <= 0.01 && elapsed < 5.0;
    report(
        "1 (projection golden case)",
        pass,
        format!(
            "max support error {max_err:.2e} (tol 1e-12), max MC deviation {:.3}% (tol 1%), {elapsed:.2}s (< 5s)",
            100.0 * max_mc_rel
        ),
    );
}

/// 2. Mean-width identity W_2(Phi K) = r_Phi W_1(K) for 100 seeded random
/// polytopes and three kernels, relative error <= 1e-8, under 60 seconds.
#[test]
fn criterion_02_mean_width_identity() {
    let start = Instant::now();
    let kernels = [
        BmHomomorphism::projection_body(8),
        BmHomomorphism::mean_section(8),
        BmHomomorphism::new(ZonalProfile::cap(0.5).unwrap(), 8).unwrap(),
    ];
    let mut rng = sample::rng(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let k = sample::random_polytope(&mut rng, None);
        let mu = k.surface_measure().unwrap();
        let w1 = k.surface_area() / 3.0;
        for op in &kernels {
            let lhs = op.w2_of_image(&mu);
            let rhs = op.r_phi() * w1;
            worst = worst.max((lhs - rhs).abs() / rhs.abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-8 && elapsed < 60.0;
    report(
        "2 (mean-width identity)",
        pass,
        format!("max rel error {worst:.2e} (tol 1e-8), {elapsed:.2}s (< 60s)"),
    );
}

/// 3. Multiplier property pi_k h(Phi K) = c_k pi_k S(K) band-wise for
/// k <= 8 on 20 random polytopes, max band-coefficient error <= 1e-6,
/// under 120 seconds.
#[test]
fn criterion_03_multiplier_property() {
    let start = Instant::now();
    let phi = BmHomomorphism::projection_body(12);
    let rule = SphereRule::product(512, 1024);
    let mut rng = sample::rng(3);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let k = sample::random_polytope(&mut rng, None);
        worst = worst.max(phi.multiplier_property_residual(&k, 8, &rule).unwrap());
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-6 && elapsed < 120.0;
    report(
        "3 (multiplier property)",
        pass,
        format!("max band error {worst:.2e} (tol 1e-6), {elapsed:.2}s (< 120s)"),
    );
}

/// 4. Funk-Hecke residuals <= 1e-8 for k <= 6 on both builtin kernels;
/// c_1(projection) = 0 and c_0(projection) = 1/4 to 1e-12.
#[test]
fn criterion_04_funk_hecke() {
    let proj = BmHomomorphism::projection_body(8);
    let msec = BmHomomorphism::mean_section(8);
    let mut worst = 0.0f64;
    for op in [&proj, &msec] {
        for k in 0..=6usize {
            worst = worst.max(convexcal_core::sphharm::funk_hecke_residual(
                op.profile(),
                k,
                op.multipliers().value(k),
            ));
        }
    }
    let c = legendre_coefficients(&ZonalProfile::projection(), 3, 1).unwrap();
    let c0_err = (c.value(0) - 0.25).abs();
    let c1_err = c.value(1).abs();
    let pass = worst <= 1e-8 && c0_err <= 1e-12 && c1_err <= 1e-12;
    report(
        "4 (Funk-Hecke)",
        pass,
        format!("max residual {worst:.2e} (tol 1e-8), |c0 - 1/4| = {c0_err:.2e}, |c1| = {c1_err:.2e} (tol 1e-12)"),
    );
}

/// 5. Commutation of homomorphisms with adjoint endomorphism pairs:
/// max grid deviation <= 1e-9 over 3 pairs x 2 homomorphisms x 20 random
/// polytopes; a deliberately non-adjoint pair composed with a
/// bandlimited-injective operator deviates by more than 1e-3.
#[test]
fn criterion_05_commutation() {
    let homs = [
        BmHomomorphism::projection_body(12),
        BmHomomorphism::mean_section(12),
    ];
    let pairs = [
        adjoint_pair_dirac(),
        adjoint_pair(&ZonalProfile::constant(1.0)).unwrap(),
        adjoint_pair(&ZonalProfile::legendre_combination(
            vec![1.0, 1.5, 0.5],
            "poly_a",
        ))
        .unwrap(),
    ];
    let dirs = support_grid(64);
    let mut rng = sample::rng(5);
    let bodies: Vec<Polytope3> = (0..20)
        .map(|_| sample::random_polytope(&mut rng, None))
        .collect();
    let mut worst = 0.0f64;
    for phi in &homs {
        for (psi, psi_star) in &pairs {
            for k in &bodies {
                worst = worst.max(commutation_check(phi, psi, psi_star, k, &dirs).unwrap());
            }
        }
    }
    // non-adjoint pair: different degree-2 multipliers, injective operator
    let (psi_a, _) = adjoint_pair(&ZonalProfile::legendre_combination(
        vec![1.0, 1.5, 0.5],
        "poly_a",
    ))
    .unwrap();
    let (_, psi_star_b) = adjoint_pair(&ZonalProfile::legendre_combination(
        vec![1.0, 1.5, 0.25],
        "poly_b",
    ))
    .unwrap();
    assert!(homs[1].bandlimited_injective(1e-6));
    let mut detect = 0.0f64;
    for k in &bodies {
        detect = detect.max(commutation_check(&homs[1], &psi_a, &psi_star_b, k, &dirs).unwrap());
    }
    let pass = worst <= 1e-9 && detect > 1e-3;
    report(
        "5 (commutation)",
        pass,
        format!("adjoint max deviation {worst:.2e} (tol 1e-9); non-adjoint deviation {detect:.2e} (> 1e-3, reported)"),
    );
}

/// 6. Strengthened quermassintegral chain with the projection operator on
/// 20 spectral ellipsoids at K = 12: both inequalities hold with slack
/// >= -1e-8; the unit ball attains equality within 1e-6. Under 60 seconds.
#[test]
fn criterion_06_quermassintegral_chain() {
    let start = Instant::now();
    let phi = BmHomomorphism::projection_body(12);
    let rule = SphereRule::default_rule();
    let ball = SpectralBody::from_ball(1.0, 12);
    let (w2sq, mid, right) = quermass_chain(&phi, &ball).unwrap();
    let ball_left = (w2sq - mid).abs();
    let ball_right = (mid - right).abs();
    let mut min_left = f64::INFINITY;
    let mut min_right = f64::INFINITY;
    let mut rng = sample::rng(6);
    for _ in 0..20 {
        let a = 0.6 + 1.2 * sample::uniform(&mut rng);
        let b = 0.6 + 1.2 * sample::uniform(&mut rng);
        let c = 0.6 + 1.2 * sample::uniform(&mut rng);
        let sb = SpectralBody::from_ellipsoid(&Ellipsoid::new(a, b, c).unwrap(), 12, &rule);
        let (w2sq, mid, right) = quermass_chain(&phi, &sb).unwrap();
        min_left = min_left.min(w2sq - mid);
        min_right = min_right.min(mid - right);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = min_left >= -1e-8
        && min_right >= -1e-8
        && ball_left <= 1e-6
        && ball_right <= 1e-6
        && elapsed < 60.0;
    report(
        "6 (strengthened chain)",
        pass,
        format!(
            "min slacks ({min_left:.2e}, {min_right:.2e}) >= -1e-8; ball equality defects ({ball_left:.2e}, {ball_right:.2e}) <= 1e-6; {elapsed:.2}s (< 60s)"
        ),
    );
}

/// 7. Mixed-volume symmetry V_1(K, Phi L) = V_1(L, Phi K) for 100 random
/// pairs, relative tolerance 1e-9 (exact atom sums).
#[test]
fn criterion_07_v1_symmetry() {
    let phi = BmHomomorphism::projection_body(8);
    let mut rng = sample::rng(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let k = sample::random_polytope(&mut rng, None);
        let l = sample::random_polytope(&mut rng, None);
        let (lhs, rhs) = v1_symmetry(&phi, &k, &l).unwrap();
        worst = worst.max((lhs - rhs).abs() / rhs.abs());
    }
    let pass = worst <= 1e-9;
    report(
        "7 (V1 symmetry)",
        pass,
        format!("max rel deviation {worst:.2e} (tol 1e-9)"),
    );
}

/// 8. Minkowski round-trip for 20 random polytopes with 4-20 facets:
/// relative area residual <= 1e-6, support numbers match after Steiner
/// alignment within 1e-5, each solve under 10 seconds.
#[test]
fn criterion_08_minkowski_roundtrip() {
    let rule = SphereRule::default_rule();
    let mut rng = sample::rng(8);
    let mut worst_area = 0.0f64;
    let mut worst_support = 0.0f64;
    let mut worst_time = 0.0f64;
    for _ in 0..20 {
        let p = sample::random_polytope_with_facets(&mut rng, 4, 20);
        let s = p.steiner_point(&rule);
        let centered = p.translate([-s[0], -s[1], -s[2]]);
        let mu = centered.surface_measure().unwrap();
        let t0 = Instant::now();
        let sol = solve(&MinkowskiInstance::new(mu.clone())).unwrap();
        worst_time = worst_time.max(t0.elapsed().as_secs_f64());
        for (r, &(_, a)) in sol.residual.iter().zip(mu.atoms()) {
            worst_area = worst_area.max(r.abs() / a);
        }
        for (h, &(u, _)) in sol.support_numbers.iter().zip(mu.atoms()) {
            worst_support = worst_support.max((h - centered.support_raw(u)).abs());
        }
    }
    let pass = worst_area <= 1e-6 && worst_support <= 1e-5 && worst_time < 10.0;
    report(
        "8 (Minkowski round-trip)",
        pass,
        format!(
            "max rel area residual {worst_area:.2e} (tol 1e-6), max support error {worst_support:.2e} (tol 1e-5), slowest solve {worst_time:.2}s (< 10s)"
        ),
    );
}

/// 9. Blaschke additivity pointwise to 1e-12 on 50 random pairs;
/// homogeneity Phi(lambda K) = lambda^2 Phi K to relative 1e-12.
#[test]
fn criterion_09_additivity_homogeneity() {
    let phi = BmHomomorphism::projection_body(8);
    let dirs = support_grid(64);
    let mut rng = sample::rng(9);
    let mut add_dev = 0.0f64;
    let mut hom_dev = 0.0f64;
    let mut scale = 0.0f64;
    for _ in 0..50 {
        let k = sample::random_polytope(&mut rng, None);
        let l = sample::random_polytope(&mut rng, None);
        let mk = k.surface_measure().unwrap();
        let ml = l.surface_measure().unwrap();
        let msum = blaschke_sum(&mk, &ml, 1.0, 1.0).unwrap();
        for &u in &dirs {
            let rhs = phi.support_at(&mk, u) + phi.support_at(&ml, u);
            add_dev = add_dev.max((phi.support_at(&msum, u) - rhs).abs());
            scale = scale.max(rhs.abs());
        }
        let lambda = 0.5 + 2.0 * sample::uniform(&mut rng);
        let ms = k.scale_by(lambda).surface_measure().unwrap();
        for &u in &dirs[..8] {
            let rhs = lambda * lambda * phi.support_at(&mk, u);
            hom_dev = hom_dev.max((phi.support_at(&ms, u) - rhs).abs() / rhs.abs());
        }
    }
    // pointwise additivity tolerance 1e-12 on values of order `scale`
    let pass = add_dev <= 1e-12 * scale.max(1.0) && hom_dev <= 1e-12;
    report(
        "9 (additivity & homogeneity)",
        pass,
        format!("additivity deviation {add_dev:.2e} (tol {:.1e}), homogeneity rel {hom_dev:.2e} (tol 1e-12)", 1e-12 * scale.max(1.0)),
    );
}

/// 10. Mean-section kernel qualitative checks: weakly positive, yet not a
/// support function (a sublinearity violation is found); the segment
/// kernel passes the screen.
#[test]
fn criterion_10_mean_section_qualitative() {
    let g2 = ZonalProfile::mean_section_g2();
    let wp = weakly_positive(&g2);
    let g2_check = is_support_profile(&g2, 0, 10_000);
    let seg_check = is_support_profile(&ZonalProfile::segment_support(), 0, 10_000);
    let pass = wp.weakly_positive && g2_check.violation.is_some() && seg_check.pass;
    let gap = g2_check.violation.map(|v| v.gap).unwrap_or(0.0);
    report(
        "10 (mean-section qualitative)",
        pass,
        format!(
            "weakly positive: {}; sublinearity violation gap {gap:.3e}; segment kernel passes: {}",
            wp.weakly_positive, seg_check.pass
        ),
    );
}

/// 11. Determinism: the check suites produce byte-identical reports across
/// two consecutive runs with the same seed and flags.
#[test]
fn criterion_11_determinism() {
    let exe = env!("CARGO_BIN_EXE_convexcal");
    let dir = std::env::temp_dir();
    let mut all_identical = true;
    for suite in ["identities", "inequalities", "endomorphisms", "roundtrip"] {
        let out1 = dir.join(format!("det_{suite}_1.json"));
        let out2 = dir.join(format!("det_{suite}_2.json"));
        for out in [&out1, &out2] {
            let status = std::process::Command::new(exe)
                .args([
                    "check", "--suite", suite, "--seed", "3", "--count", "5", "--out",
                ])
                .arg(out)
                .output()
                .expect("run convexcal");
            assert!(status.status.success(), "suite {suite} failed");
        }
        let b1 = std::fs::read(&out1).unwrap();
        let b2 = std::fs::read(&out2).unwrap();
        all_identical &= b1 == b2;
    }
    report(
        "11 (determinism)",
        all_identical,
        "reports byte-identical across consecutive runs".into(),
    );
    let _ = KAPPA_3;
}
