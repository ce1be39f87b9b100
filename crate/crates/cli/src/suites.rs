//! The four verification suites behind `convexcal check`. Every suite is a
//! pure function of (seed, count, grids), producing deterministic rows.

use crate::io::CheckRow;

use convexcal_core::bmh::{
    adjoint_pair, adjoint_pair_dirac, adjointness_identity, commutation_check, psi0_ratios,
    psi1_ratios, quermass_chain, upbound_i0, v1_symmetry, BmHomomorphism,
};
use convexcal_core::body::{blaschke_sum, mixed_volume_v1, Polytope3};
use convexcal_core::ellipsoid::Ellipsoid;
use convexcal_core::geom::scale;
use convexcal_core::minkowski::{solve, MinkowskiInstance};
use convexcal_core::quad::{support_grid, SphereRule};
use convexcal_core::sample;
use convexcal_core::sphharm::SpectralBody;
use convexcal_core::zonal::{
    is_support_profile, legendre_coefficients, weakly_positive, ZonalProfile,
};
use convexcal_core::KAPPA_3;

pub struct SuiteConfig {
    pub seed: u64,
    pub count: usize,
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub max_degree: usize,
    pub tol_override: Option<f64>,
}

impl SuiteConfig {
    fn rule(&self) -> SphereRule {
        SphereRule::product(self.grid_theta, self.grid_phi)
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol_override.unwrap_or(default)
    }
}

/// Canned instances mixed into every random pool: cube, simplex, and
/// cross-polytope.
fn canned_bodies() -> Vec<Polytope3> {
    vec![
        Polytope3::cube(1.0),
        Polytope3::tetrahedron(),
        Polytope3::octahedron(1.0),
    ]
}

fn poly_kernel_a() -> ZonalProfile {
    ZonalProfile::legendre_combination(vec![1.0, 1.5, 0.5], "poly_a")
}

fn poly_kernel_b() -> ZonalProfile {
    ZonalProfile::legendre_combination(vec![1.0, 1.5, 0.25], "poly_b")
}

/// Structural identities: additivity, homogeneity, equivariance, the
/// multiplier property, the mean-width identity, Funk-Hecke, the
/// mixed-volume symmetry and the Steiner decomposition.
pub fn identities(cfg: &SuiteConfig) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    let mut rng = sample::rng(cfg.seed);
    let phi = BmHomomorphism::projection_body(cfg.max_degree.max(12));
    let dirs = support_grid(64);

    // Blaschke additivity and homogeneity over canned plus random pairs
    let mut add_dev = 0.0f64;
    let mut hom_dev = 0.0f64;
    let mut scale_ref = 0.0f64;
    let mut pool = canned_bodies();
    for _ in 0..cfg.count.max(1) {
        pool.push(sample::random_polytope(&mut rng, None));
    }
    for w in pool.windows(2) {
        let (k, l) = (&w[0], &w[1]);
        let mk = k.surface_measure().unwrap();
        let ml = l.surface_measure().unwrap();
        let msum = blaschke_sum(&mk, &ml, 1.0, 1.0).unwrap();
        for &u in &dirs {
            let lhs = phi.support_at(&msum, u);
            let rhs = phi.support_at(&mk, u) + phi.support_at(&ml, u);
            add_dev = add_dev.max((lhs - rhs).abs());
            scale_ref = scale_ref.max(rhs.abs());
        }
        let lambda = 1.5;
        let ms = k.scale_by(lambda).surface_measure().unwrap();
        for &u in &dirs[..16] {
            let lhs = phi.support_at(&ms, u);
            let rhs = lambda * lambda * phi.support_at(&mk, u);
            hom_dev = hom_dev.max((lhs - rhs).abs() / rhs.abs().max(1e-300));
        }
    }
    rows.push(CheckRow::identity(
        "blaschke_additivity_max_dev",
        add_dev,
        0.0,
        cfg.tol(1e-12 * scale_ref.max(1.0)),
    ));
    rows.push(CheckRow::identity(
        "homogeneity_rel_dev",
        hom_dev,
        0.0,
        cfg.tol(1e-12),
    ));

    // rotation intertwining and translation invariance
    let mut rot_dev = 0.0f64;
    let mut tr_dev = 0.0f64;
    for _ in 0..cfg.count.min(10).max(1) {
        let k = sample::random_polytope(&mut rng, None);
        let rot = sample::rotation(&mut rng);
        let mu = k.surface_measure().unwrap();
        let mu_rot = k.rotate(&rot).surface_measure().unwrap();
        let mu_tr = k.translate([0.4, -0.9, 0.3]).surface_measure().unwrap();
        for _ in 0..10 {
            let u = sample::unit_vector(&mut rng);
            let rel = phi.support_at(&mu, u).abs().max(1.0);
            rot_dev = rot_dev
                .max((phi.support_at(&mu_rot, rot.apply(u)) - phi.support_at(&mu, u)).abs() / rel);
            tr_dev = tr_dev.max((phi.support_at(&mu_tr, u) - phi.support_at(&mu, u)).abs() / rel);
        }
    }
    rows.push(CheckRow::identity(
        "rotation_intertwining_rel_dev",
        rot_dev,
        0.0,
        cfg.tol(1e-10),
    ));
    rows.push(CheckRow::identity(
        "translation_invariance_rel_dev",
        tr_dev,
        0.0,
        cfg.tol(1e-11),
    ));

    // mean-width identity for three kernels
    let kernels = [
        BmHomomorphism::projection_body(8),
        BmHomomorphism::mean_section(8),
        BmHomomorphism::new(ZonalProfile::cap(0.5).unwrap(), 8).unwrap(),
    ];
    for op in &kernels {
        let mut worst = 0.0f64;
        for _ in 0..cfg.count.max(1) {
            let k = sample::random_polytope(&mut rng, None);
            let mu = k.surface_measure().unwrap();
            let lhs = op.w2_of_image(&mu);
            let rhs = op.r_phi() * k.surface_area() / 3.0;
            worst = worst.max((lhs - rhs).abs() / rhs.abs());
        }
        rows.push(CheckRow::identity(
            format!("mean_width_identity[{}]_rel_dev", op.label()),
            worst,
            0.0,
            cfg.tol(1e-8),
        ));
    }

    // multiplier property (grid-quadrature limited; capped body count)
    let fine = SphereRule::product(384, 768);
    let mut worst = 0.0f64;
    for _ in 0..cfg.count.min(5).max(1) {
        let k = sample::random_polytope(&mut rng, Some(14));
        worst = worst.max(phi.multiplier_property_residual(&k, 8, &fine).unwrap());
    }
    rows.push(CheckRow::identity(
        "multiplier_property_max_band_dev",
        worst,
        0.0,
        cfg.tol(1e-6),
    ));

    // Funk-Hecke residuals for both builtin kernels, k <= 6
    for op in [&kernels[0], &kernels[1]] {
        let mut worst = 0.0f64;
        for k in 0..=6usize {
            worst = worst.max(convexcal_core::sphharm::funk_hecke_residual(
                op.profile(),
                k,
                op.multipliers().value(k),
            ));
        }
        rows.push(CheckRow::identity(
            format!("funk_hecke[{}]_max_residual", op.label()),
            worst,
            0.0,
            cfg.tol(1e-8),
        ));
    }
    let c = legendre_coefficients(&ZonalProfile::projection(), 3, 1).unwrap();
    rows.push(CheckRow::identity(
        "projection_c0",
        c.value(0),
        0.25,
        cfg.tol(1e-12),
    ));
    rows.push(CheckRow::identity(
        "projection_c1",
        c.value(1),
        0.0,
        cfg.tol(1e-12),
    ));

    // evenness of even operators
    let mut even_dev = 0.0f64;
    for _ in 0..cfg.count.min(10).max(1) {
        let k = sample::random_polytope(&mut rng, None);
        let mu = k.surface_measure().unwrap();
        let mu_neg = k.reflect().surface_measure().unwrap();
        for &u in &dirs[..16] {
            even_dev = even_dev.max((phi.support_at(&mu, u) - phi.support_at(&mu_neg, u)).abs());
        }
    }
    rows.push(CheckRow::identity(
        "even_operator_reflection_dev",
        even_dev,
        0.0,
        cfg.tol(1e-12 * scale_ref.max(1.0)),
    ));

    // V1 symmetry of the operator (mixed volumes at i = 0)
    let mut v1_dev = 0.0f64;
    for _ in 0..cfg.count.max(1) {
        let k = sample::random_polytope(&mut rng, None);
        let l = sample::random_polytope(&mut rng, None);
        let (lhs, rhs) = v1_symmetry(&phi, &k, &l).unwrap();
        v1_dev = v1_dev.max((lhs - rhs).abs() / rhs.abs().max(1e-300));
    }
    rows.push(CheckRow::identity(
        "v1_symmetry_rel_dev",
        v1_dev,
        0.0,
        cfg.tol(1e-9),
    ));

    // Steiner decomposition on the ellipsoid (1, 1, 2)
    let rule = cfg.rule();
    let ell = Ellipsoid::new(1.0, 1.0, 2.0).unwrap();
    let res = phi
        .steiner_decomposition_check(&ell, &[0.1, 0.2], cfg.max_degree.min(12), &rule)
        .unwrap();
    rows.push(CheckRow::identity(
        "steiner_decomposition_residual",
        res,
        0.0,
        cfg.tol(1e-5),
    ));
    rows
}

/// Quermassintegral inequalities: the classical chain, the strengthened
/// chain through the operator, the image upper bound, the psi ratios, and
/// the Shephard-type implication.
pub fn inequalities(cfg: &SuiteConfig) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    let mut rng = sample::rng(cfg.seed);
    let rule = cfg.rule();
    let phi = BmHomomorphism::projection_body(cfg.max_degree.max(12));

    // classical chain on random polytopes
    let mut slack0 = f64::INFINITY;
    let mut slack1 = f64::INFINITY;
    for _ in 0..cfg.count.max(1) {
        let p = sample::random_polytope(&mut rng, None);
        let w = p.quermassintegrals(&rule).unwrap();
        slack0 = slack0.min(w[1].powi(3) / (KAPPA_3 * w[0].powi(2)) - 1.0);
        slack1 = slack1.min(w[2].powi(2) / (KAPPA_3 * w[1]) - 1.0);
    }
    rows.push(CheckRow::inequality(
        "classical_chain_i0_min_rel_slack",
        slack0,
        0.0,
        cfg.tol(1e-9),
        false,
    ));
    rows.push(CheckRow::inequality(
        "classical_chain_i1_min_rel_slack",
        slack1,
        0.0,
        cfg.tol(1e-9),
        false,
    ));

    // strengthened chain on the ball (equality) and random ellipsoids
    let ball = SpectralBody::from_ball(1.0, cfg.max_degree.min(12));
    let (w2sq, mid, right) = quermass_chain(&phi, &ball).unwrap();
    rows.push(CheckRow::inequality(
        "strengthened_chain_left[ball]",
        w2sq,
        mid,
        cfg.tol(1e-6),
        true,
    ));
    rows.push(CheckRow::inequality(
        "strengthened_chain_right[ball]",
        mid,
        right,
        cfg.tol(1e-6),
        true,
    ));
    let mut left_slack = f64::INFINITY;
    let mut right_slack = f64::INFINITY;
    for _ in 0..cfg.count.min(20).max(1) {
        let a = 0.6 + 1.2 * sample::uniform(&mut rng);
        let b = 0.6 + 1.2 * sample::uniform(&mut rng);
        let c = 0.6 + 1.2 * sample::uniform(&mut rng);
        let sb = SpectralBody::from_ellipsoid(
            &Ellipsoid::new(a, b, c).unwrap(),
            cfg.max_degree.min(12),
            &rule,
        );
        let (w2sq, mid, right) = quermass_chain(&phi, &sb).unwrap();
        left_slack = left_slack.min(w2sq - mid);
        right_slack = right_slack.min(mid - right);
    }
    rows.push(CheckRow::inequality(
        "strengthened_chain_left[ellipsoids]_min_slack",
        left_slack,
        0.0,
        cfg.tol(1e-8),
        false,
    ));
    rows.push(CheckRow::inequality(
        "strengthened_chain_right[ellipsoids]_min_slack",
        right_slack,
        0.0,
        cfg.tol(1e-8),
        false,
    ));

    // image upper bound at i = 0 (realized volumes)
    let dirs = support_grid(302);
    let mut ub_slack = f64::INFINITY;
    for _ in 0..cfg.count.min(8).max(1) {
        let p = sample::random_polytope(&mut rng, Some(12));
        let (lhs, rhs) = upbound_i0(&phi, &p, &dirs).unwrap();
        ub_slack = ub_slack.min(lhs / rhs - 1.0);
    }
    rows.push(CheckRow::inequality(
        "image_volume_upper_bound_i0_min_rel_slack",
        ub_slack,
        0.0,
        cfg.tol(1e-9),
        false,
    ));

    // psi ratios
    let mut psi1_slack = f64::INFINITY;
    for _ in 0..cfg.count.min(8).max(1) {
        let a = 0.7 + sample::uniform(&mut rng);
        let c = 0.7 + sample::uniform(&mut rng);
        let sb = SpectralBody::from_ellipsoid(
            &Ellipsoid::new(a, a, c).unwrap(),
            cfg.max_degree.min(12),
            &rule,
        );
        let (pk, pi) = psi1_ratios(&phi, &sb).unwrap();
        psi1_slack = psi1_slack.min(pk - pi);
    }
    rows.push(CheckRow::inequality(
        "psi1_monotonicity_min_slack",
        psi1_slack,
        0.0,
        cfg.tol(1e-6),
        false,
    ));
    let mut psi0_slack = f64::INFINITY;
    for _ in 0..cfg.count.min(4).max(1) {
        let p = sample::random_polytope(&mut rng, Some(10));
        let (pk, pi) = psi0_ratios(&phi, &p, &dirs).unwrap();
        psi0_slack = psi0_slack.min(pk - pi);
    }
    rows.push(CheckRow::inequality(
        "psi0_monotonicity_min_slack",
        psi0_slack,
        0.0,
        cfg.tol(1e-6),
        false,
    ));

    // Shephard-type implication on generated inclusion cases
    let mut shephard_ok = true;
    for _ in 0..cfg.count.min(4).max(1) {
        let k0 = sample::random_polytope(&mut rng, Some(12));
        let l0 = sample::random_polytope(&mut rng, Some(12));
        let l = phi.realize(&l0, &dirs).unwrap().polytope;
        let mu_l = l0.surface_measure().unwrap();
        let mu_k = k0.surface_measure().unwrap();
        let ratio = dirs
            .iter()
            .map(|&u| phi.support_at(&mu_l, u) / phi.support_at(&mu_k, u))
            .fold(f64::INFINITY, f64::min);
        let k = k0.scale_by((0.98 * ratio).sqrt());
        shephard_ok &= k.volume() <= l.volume() + 1e-9;
    }
    rows.push(CheckRow::expect(
        "shephard_type_implication",
        shephard_ok,
        true,
    ));

    // monotone operators from support-function kernels
    let seg = BmHomomorphism::new(ZonalProfile::segment_support(), 8).unwrap();
    let mut mono_ok = true;
    for _ in 0..cfg.count.min(5).max(1) {
        let k = sample::random_polytope(&mut rng, Some(10));
        let mut pts = k.vertices().to_vec();
        for _ in 0..4 {
            pts.push(scale(sample::unit_vector(&mut rng), 1.2));
        }
        let l = Polytope3::from_points(&pts).unwrap();
        let mu_k = k.surface_measure().unwrap();
        let mu_l = l.surface_measure().unwrap();
        for &u in &dirs[..32] {
            mono_ok &= seg.support_at(&mu_k, u) <= seg.support_at(&mu_l, u) + 1e-10;
        }
    }
    rows.push(CheckRow::expect(
        "support_kernel_monotonicity",
        mono_ok,
        true,
    ));

    // V1 monotone in the second argument
    let mut v1_ok = true;
    for _ in 0..cfg.count.min(10).max(1) {
        let k = sample::random_polytope(&mut rng, None);
        let mu = k.surface_measure().unwrap();
        let l = sample::random_polytope(&mut rng, None);
        v1_ok &= mixed_volume_v1(&mu, &l.scale_by(0.7)) <= mixed_volume_v1(&mu, &l) + 1e-12;
    }
    rows.push(CheckRow::expect(
        "v1_monotunicity_second_argument",
        v1_ok,
        true,
    ));
    rows
}

/// Endomorphism algebra: adjoint pairs, commutation with homomorphisms,
/// non-adjoint detection, positivity certificates and the support screen.
pub fn endomorphisms(cfg: &SuiteConfig) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    let mut rng = sample::rng(cfg.seed);
    let rule = cfg.rule();
    let dirs = support_grid(64);
    let homs = [
        BmHomomorphism::projection_body(cfg.max_degree.max(12)),
        BmHomomorphism::mean_section(cfg.max_degree.max(12)),
    ];
    let pairs: Vec<(String, _, _)> = vec![
        (
            "dirac".to_string(),
            adjoint_pair_dirac().0,
            adjoint_pair_dirac().1,
        ),
        (
            "uniform".to_string(),
            adjoint_pair(&ZonalProfile::constant(1.0)).unwrap().0,
            adjoint_pair(&ZonalProfile::constant(1.0)).unwrap().1,
        ),
        (
            "poly_a".to_string(),
            adjoint_pair(&poly_kernel_a()).unwrap().0,
            adjoint_pair(&poly_kernel_a()).unwrap().1,
        ),
    ];
    let mut bodies = canned_bodies();
    for _ in 0..cfg.count.min(20).max(1) {
        bodies.push(sample::random_polytope(&mut rng, None));
    }
    for phi in &homs {
        for (name, psi, psi_star) in &pairs {
            let mut worst = 0.0f64;
            for k in &bodies {
                worst = worst.max(commutation_check(phi, psi, psi_star, k, &dirs).unwrap());
            }
            rows.push(CheckRow::identity(
                format!("commutation[{}][{}]_max_dev", phi.label(), name),
                worst,
                0.0,
                cfg.tol(1e-9),
            ));
        }
    }
    // cap pair against the projection operator: dual quadrature routes
    let (psi_c, psi_star_c) = adjoint_pair(&ZonalProfile::cap(0.5).unwrap()).unwrap();
    let small_dirs = support_grid(26);
    let mut worst = 0.0f64;
    for k in bodies.iter().take(3) {
        worst =
            worst.max(commutation_check(&homs[0], &psi_c, &psi_star_c, k, &small_dirs).unwrap());
    }
    rows.push(CheckRow::identity(
        "commutation[projection][cap(0.5)]_max_dev",
        worst,
        0.0,
        cfg.tol(1e-9),
    ));

    // deliberately non-adjoint pair with the injective mean-section operator
    let (psi_a, _) = adjoint_pair(&poly_kernel_a()).unwrap();
    let (_, psi_star_b) = adjoint_pair(&poly_kernel_b()).unwrap();
    let mut detect = 0.0f64;
    for k in &bodies {
        detect = detect.max(commutation_check(&homs[1], &psi_a, &psi_star_b, k, &dirs).unwrap());
    }
    rows.push(CheckRow::exceeds(
        "non_adjoint_detection_max_dev",
        detect,
        1e-3,
    ));

    // adjointness identity
    for (name, kernel) in [
        ("cap(0.5)", ZonalProfile::cap(0.5).unwrap()),
        ("poly_a", poly_kernel_a()),
    ] {
        let (psi, psi_star) = adjoint_pair(&kernel).unwrap();
        let mut worst = 0.0f64;
        for pair in bodies.chunks(2) {
            if pair.len() == 2 {
                let (lhs, rhs) =
                    adjointness_identity(&psi, &psi_star, &pair[0], &pair[1], &rule).unwrap();
                worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1e-300));
            }
        }
        rows.push(CheckRow::identity(
            format!("adjointness_identity[{name}]_rel_dev"),
            worst,
            0.0,
            cfg.tol(1e-9),
        ));
    }

    // weak positivity certificates
    let wp = weakly_positive(&ZonalProfile::projection());
    rows.push(CheckRow::expect(
        "weakly_positive[projection]",
        wp.weakly_positive && wp.shift == Some(0.0),
        true,
    ));
    let wp = weakly_positive(&ZonalProfile::mean_section_g2());
    rows.push(CheckRow::expect(
        "weakly_positive[mean_section_g2]",
        wp.weakly_positive && wp.shift == Some(0.0),
        true,
    ));
    rows.push(CheckRow::expect(
        "weakly_positive[const(-1)]",
        weakly_positive(&ZonalProfile::constant(-1.0)).weakly_positive,
        false,
    ));

    // support-function screening
    rows.push(CheckRow::expect(
        "is_support_profile[segment_support]",
        is_support_profile(&ZonalProfile::segment_support(), cfg.seed, 10_000).pass,
        true,
    ));
    let g2_check = is_support_profile(&ZonalProfile::mean_section_g2(), cfg.seed, 10_000);
    rows.push(CheckRow::expect(
        "is_support_profile[mean_section_g2]_violation_found",
        g2_check.violation.is_some(),
        true,
    ));

    // bandlimited injectivity report
    rows.push(CheckRow::expect(
        "bandlimited_injective[mean_section_g2]",
        homs[1].bandlimited_injective(1e-6),
        true,
    ));
    rows.push(CheckRow::expect(
        "bandlimited_injective[projection]",
        homs[0].bandlimited_injective(1e-10),
        false,
    ));
    rows
}

/// Minkowski-problem round trips and related equivariances.
pub fn roundtrip(cfg: &SuiteConfig) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    let mut rng = sample::rng(cfg.seed);
    let mut worst_area = 0.0f64;
    let mut worst_support = 0.0f64;
    // the solver canonicalizes with the default rule; use the same gauge
    let rule = SphereRule::default_rule();
    for _ in 0..cfg.count.max(1) {
        let p = sample::random_polytope_with_facets(&mut rng, 4, 20);
        let s = p.steiner_point(&rule);
        let centered = p.translate([-s[0], -s[1], -s[2]]);
        let mu = centered.surface_measure().unwrap();
        let sol = solve(&MinkowskiInstance::new(mu.clone())).unwrap();
        // area residual
        for (r, &(_, a)) in sol.residual.iter().zip(mu.atoms()) {
            worst_area = worst_area.max(r.abs() / a);
        }
        // support numbers after Steiner alignment
        for (h, &(u, _)) in sol.support_numbers.iter().zip(mu.atoms()) {
            worst_support = worst_support.max((h - centered.support_raw(u)).abs());
        }
    }
    rows.push(CheckRow::identity(
        "roundtrip_max_rel_area_residual",
        worst_area,
        0.0,
        cfg.tol(1e-6),
    ));
    rows.push(CheckRow::identity(
        "roundtrip_max_support_error",
        worst_support,
        0.0,
        cfg.tol(1e-5),
    ));

    // Blaschke body of the cube: sqrt(2)-scaled cube
    let nabla = convexcal_core::minkowski::blaschke_body(&Polytope3::cube(1.0)).unwrap();
    rows.push(CheckRow::identity(
        "blaschke_body_cube_volume",
        nabla.volume(),
        8.0 * 2.0f64.sqrt().powi(3),
        cfg.tol(1e-6),
    ));

    // scaling equivariance
    let p = sample::random_polytope_with_facets(&mut rng, 6, 14);
    let mu = p.surface_measure().unwrap();
    let lambda = 1.7f64;
    let scaled = convexcal_core::body::DiscreteSurfaceMeasure::new(
        mu.atoms()
            .iter()
            .map(|&(u, a)| (u, lambda * lambda * a))
            .collect(),
    )
    .unwrap();
    let sol1 = solve(&MinkowskiInstance::new(mu.clone())).unwrap();
    let sol2 = solve(&MinkowskiInstance::new(scaled)).unwrap();
    rows.push(CheckRow::identity(
        "scaling_equivariance_rel_dev",
        sol2.polytope.volume() / (lambda.powi(3) * sol1.polytope.volume()),
        1.0,
        cfg.tol(1e-8),
    ));

    // rotation equivariance up to translation, measured as the sup-norm
    // support gap after fitting the translation
    let rot = sample::rotation(&mut rng);
    let solr = solve(&MinkowskiInstance::new(mu.rotate(&rot))).unwrap();
    let reference = sol1.polytope.rotate(&rot);
    let gap = convexcal_core::verify::support_translation_gap(
        &solr.polytope,
        &reference,
        &support_grid(146),
    );
    rows.push(CheckRow::identity(
        "rotation_equivariance_support_gap",
        gap,
        0.0,
        cfg.tol(1e-7),
    ));
    rows
}
