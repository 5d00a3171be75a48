use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector4};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spincmv::geometry::*;
use spincmv::spin::{CorrelationMatrix, CorrelationTensorN, Pseudovector};
use spincmv::Error;

fn random_rotation(rng: &mut impl Rng) -> Matrix3<f64> {
    let q = Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0));
    UnitQuaternion::from_quaternion(Quaternion::from_vector(q))
        .to_rotation_matrix()
        .into_inner()
}

fn random_symmetric(rng: &mut impl Rng) -> CorrelationMatrix {
    CorrelationMatrix::from_fn(|_, _| rng.random_range(-1.0..1.0)).symmetrized()
}

fn rotate(r: &Matrix3<f64>, p: Point) -> Point {
    let v = r * nalgebra::Vector3::from(p);
    [v.x, v.y, v.z]
}

fn small_grid() -> GridSpec {
    GridSpec::new(4.0, 48).unwrap()
}

#[test]
fn form_examples() {
    assert_eq!(quad_form(&CorrelationMatrix::diag(1.0, -1.0, 0.0), [1.0, 0.0, 0.0]), 1.0);
    assert_eq!(quad_form(&CorrelationMatrix::identity(), [1.0, 1.0, 1.0]), 3.0);
    assert_eq!(quad_form(&CorrelationMatrix::diag(0.3, 0.2, 0.1), [0.0; 3]), 0.0);
    assert_eq!(compactified(&CorrelationMatrix::identity(), [0.0; 3]), 0.0);
    // Q_f decays like C(ê)/r.
    let c = CorrelationMatrix::diag(0.5, 0.0, 0.0);
    let far = compactified(&c, [1e6, 0.0, 0.0]);
    assert!((far * 1e6 - 0.5).abs() < 1e-6);
}

#[test]
fn correlation_along_examples() {
    let bell = CorrelationMatrix::diag(1.0, -1.0, 1.0);
    assert_eq!(correlation_along(&bell, [0.0, 1.0, 0.0]).unwrap(), -1.0);
    let c = CorrelationMatrix([[0.5, 0.2, 0.0], [0.2, 0.5, 0.0], [0.0, 0.0, 0.1]]);
    let e = [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0];
    assert!((correlation_along(&c, e).unwrap() - 0.7).abs() < 1e-15);
    assert!(matches!(
        correlation_along(&c, [1.0, 1.0, 0.0]),
        Err(Error::NotUnit { .. })
    ));
}

#[test]
fn trace_identity_over_random_triads() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let c = CorrelationMatrix::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let r = random_rotation(&mut rng);
        let sum: f64 = (0..3)
            .map(|k| correlation_along(&c, [r[(0, k)], r[(1, k)], r[(2, k)]]).unwrap())
            .sum();
        assert!((sum - c.trace()).abs() < 1e-12);
    }
}

#[test]
fn largest_eigenvector_maximizes_directional_correlation() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let c = random_symmetric(&mut rng);
        let shape = spincmv::spin::classify_shape(&c, 1e-8).unwrap();
        let best = correlation_along(&c, shape.principal_axes[0]).unwrap().abs();
        for _ in 0..1000 {
            let v: Point = [0, 1, 2].map(|_| rng.random_range(-1.0..1.0));
            let n = norm(v);
            if n < 1e-3 {
                continue;
            }
            let e = v.map(|x| x / n);
            assert!(correlation_along(&c, e).unwrap().abs() <= best + 1e-12);
        }
    }
}

#[test]
fn size_analysis_roots_at_the_default_level() {
    // Q_f(r) = 0.1 r²/(1 + r²)^{3/2} = 0.01 along x: two roots, found here by
    // an independent scan plus bisection.
    let c = CorrelationMatrix::diag(0.1, 0.0, 0.0);
    let ext = cmv_extent(&c, [1.0, 0.0, 0.0], 0.01).unwrap();
    let h = |r: f64| 0.1 * r * r / (1.0 + r * r).powf(1.5) - 0.01;
    assert!(h(ext.r_in).abs() < 1e-12 && h(ext.r_out).abs() < 1e-12);
    assert!(ext.r_in < 2f64.sqrt() && ext.r_out > 2f64.sqrt());
    assert!((ext.r_out - 10.0).abs() / 10.0 < 0.05);
    let rel = (ext.size - extent_asymptote(0.1, 0.01)).abs() / extent_asymptote(0.1, 0.01);
    assert!(rel < 0.05, "{rel}");
    assert!((ext.size - (ext.r_out - ext.r_in)).abs() < 1e-15);
}

#[test]
fn level_sets_need_the_profile_peak_to_reach_the_level() {
    // The peak of r²/(1 + r²)^{3/2} is 2/(3√3) ≈ 0.385, so C(ê) = 0.1 has no
    // level set at P = 0.1, nor does C(ê) = 2.5 P.
    let e = [0.0, 0.0, 1.0];
    for c in [0.1, 0.2] {
        assert!(matches!(
            cmv_extent(&CorrelationMatrix::diag(0.0, 0.0, c), e, 0.1),
            Err(Error::NoLevelSet { .. })
        ));
    }
    assert!(cmv_extent(&CorrelationMatrix::diag(0.0, 0.0, 0.025), e, 0.01).is_err());
    assert!(cmv_extent(&CorrelationMatrix::diag(0.0, 0.0, 0.026), e, 0.01).is_ok());
    // Negative lobes are measured with their own sign.
    let neg = cmv_extent(&CorrelationMatrix::diag(0.0, 0.0, -0.1), e, 0.01).unwrap();
    let pos = cmv_extent(&CorrelationMatrix::diag(0.0, 0.0, 0.1), e, 0.01).unwrap();
    assert!((neg.size - pos.size).abs() < 1e-9);
}

#[test]
fn extent_grows_with_correlation() {
    let e = [0.0, 1.0, 0.0];
    let mut last = 0.0;
    for k in 0..12 {
        let c = 0.03 * 2f64.powi(k);
        let size = cmv_extent(&CorrelationMatrix::diag(0.0, c, 0.0), e, 0.01).unwrap().size;
        assert!(size > last);
        last = size;
    }
}

#[test]
fn extent_approaches_asymptote_for_large_ratios() {
    for ratio in [10.0, 20.0, 50.0, 100.0, 1000.0] {
        let c = ratio * 0.01;
        let ext = cmv_extent(&CorrelationMatrix::diag(c, 0.0, 0.0), [1.0, 0.0, 0.0], 0.01).unwrap();
        let asym = extent_asymptote(c, 0.01);
        assert!((ext.size - asym).abs() / asym < 0.05, "ratio {ratio}");
    }
}

#[test]
fn multilinear_examples() {
    let id = CorrelationTensorN::from_matrix(&CorrelationMatrix::identity());
    assert_eq!(multilinear_form(&id, [0.0, 0.0, 1.0]), 1.0);
    let mut ghz = CorrelationTensorN::zeros(3);
    ghz.entries[0] = 1.0;
    assert_eq!(multilinear_form(&ghz, [1.0, 0.0, 0.0]), 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = CorrelationTensorN::new(3, (0..27).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
    let r = [0.3, -0.7, 1.1];
    assert!((multilinear_form(&t, r) + multilinear_form(&t, r.map(|x| -x))).abs() < 1e-15);
    // Brute-force contraction.
    let mut brute = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                brute += t.get(&[a, b, c]) * r[a] * r[b] * r[c];
            }
        }
    }
    assert!((multilinear_form(&t, r) - brute).abs() < 1e-14);
}

#[test]
fn pseudovector_examples() {
    let a = Pseudovector::new(0.0, 0.0, 1.0);
    assert_eq!(pseudovector_form(&a, [0.0, 0.0, 1.0]), 1.0);
    assert_eq!(pseudovector_form(&a, [0.4, -0.2, 0.0]), 0.0);
    let sets = extract_pseudovector_level_sets(&a, 0.2, &small_grid()).unwrap();
    assert!(!sets.positive.is_empty() && !sets.negative.is_empty());
    assert!(sets.positive.vertices.iter().all(|v| v[2] > 0.0));
    assert!(sets.negative.vertices.iter().all(|v| v[2] < 0.0));
}

#[test]
fn zero_matrix_gives_empty_meshes() {
    let sets = extract_level_sets(&CorrelationMatrix::zero(), 0.01, &small_grid()).unwrap();
    assert!(sets.positive.is_empty() && sets.negative.is_empty() && !sets.clipped);
    let sets = extract_level_sets_multilinear(&CorrelationTensorN::zeros(3), 0.01, &small_grid()).unwrap();
    assert!(sets.positive.is_empty() && sets.negative.is_empty());
}

#[test]
fn dumbbell_mesh_is_closed_and_mirror_symmetric() {
    let c = CorrelationMatrix::diag(0.03, 0.0, 0.0);
    let grid = GridSpec::new(4.0, 64).unwrap();
    let sets = extract_level_sets(&c, 0.01, &grid).unwrap();
    assert!(sets.negative.is_empty());
    let mesh = &sets.positive;
    assert!(!mesh.is_empty() && !sets.clipped && mesh.indices_valid());
    assert!(mesh.open_edges().is_empty(), "mesh has open edges");
    assert!(mesh.signed_volume() > 0.0);
    // The grid is symmetric about the origin, so the mirror image of every
    // vertex is itself a vertex.
    let mirrored: Vec<Point> = mesh.vertices.iter().map(|v| [-v[0], v[1], v[2]]).collect();
    let d = vertex_hausdorff(&mesh.vertices, &mirrored, f64::INFINITY, grid.spacing());
    assert!(d < 1e-12, "{d}");
}

#[test]
fn clover_lobes_point_along_their_axes() {
    let c = CorrelationMatrix::diag(0.05, -0.05, 0.0);
    let grid = GridSpec::new(6.0, 64).unwrap();
    let sets = extract_level_sets(&c, 0.01, &grid).unwrap();
    assert!(!sets.clipped);
    for (mesh, axis) in [(&sets.positive, 0), (&sets.negative, 1)] {
        assert!(mesh.open_edges().is_empty());
        assert!(mesh.signed_volume() > 0.0);
        let other = 1 - axis;
        for v in &mesh.vertices {
            // Each lobe sits in the wedge around its own axis.
            assert!(v[axis].abs() > v[other].abs(), "{v:?}");
        }
        // Two lobes, on either side of the origin.
        assert!(mesh.vertices.iter().any(|v| v[axis] > 1.0));
        assert!(mesh.vertices.iter().any(|v| v[axis] < -1.0));
    }
}

#[test]
fn vertices_lie_on_the_level_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let c = random_symmetric(&mut rng);
        let sets = extract_level_sets(&c, 0.01, &small_grid()).unwrap();
        for mesh in [&sets.positive, &sets.negative] {
            assert!(mesh.indices_valid());
            for v in &mesh.vertices {
                let q = mesh.sign.factor() * compactified(&c, *v);
                assert!((q - 0.01).abs() <= 0.0005, "{q}");
            }
        }
    }
}

#[test]
fn large_correlations_are_clipped() {
    let sets = extract_level_sets(&CorrelationMatrix::diag(1.0, 0.0, 0.0), 0.01, &small_grid()).unwrap();
    assert!(sets.clipped);
    // Cut open only where the lobe leaves the grid.
    let h = small_grid().half_extent;
    let grid = small_grid();
    for [a, b] in sets.positive.open_edges() {
        for v in [a, b] {
            let p = sets.positive.vertices[v as usize];
            assert!(p.iter().any(|x| (x.abs() - h).abs() < grid.spacing() * 1e-9));
        }
    }
}

#[test]
fn odd_tensor_level_sets_swap_under_inversion() {
    let mut ghz = CorrelationTensorN::zeros(3);
    ghz.entries[0] = 0.2;
    let grid = GridSpec::new(4.0, 48).unwrap();
    let sets = extract_level_sets_multilinear(&ghz, 0.01, &grid).unwrap();
    assert!(!sets.positive.is_empty());
    let inverted: Vec<Point> = sets.positive.vertices.iter().map(|v| v.map(|x| -x)).collect();
    let d = vertex_hausdorff(&inverted, &sets.negative.vertices, f64::INFINITY, grid.spacing());
    assert!(d < 1e-12, "{d}");
}

#[test]
fn order_two_tensor_matches_quadratic_extraction() {
    let c = CorrelationMatrix([[0.04, 0.01, 0.0], [0.01, -0.02, 0.005], [0.0, 0.005, 0.03]]);
    let a = extract_level_sets(&c, 0.01, &small_grid()).unwrap();
    let b = extract_level_sets_multilinear(&CorrelationTensorN::from_matrix(&c), 0.01, &small_grid()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn extraction_is_deterministic() {
    let c = CorrelationMatrix([[0.04, 0.02, 0.0], [0.02, -0.03, 0.01], [0.0, 0.01, 0.02]]);
    let a = extract_level_sets(&c, 0.01, &small_grid()).unwrap();
    let b = extract_level_sets(&c, 0.01, &small_grid()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn rotated_matrices_give_rotated_meshes() {
    // Q(RᵀCR, r) = Q(C, Rr), so the level sets of RᵀCR are Rᵀ applied to
    // those of C. Compared inside the inscribed ball, away from clipping.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let grid = GridSpec::new(4.0, 64).unwrap();
    let radius = grid.half_extent - 2.0 * grid.spacing();
    for _ in 0..5 {
        let c = random_symmetric(&mut rng);
        let r = random_rotation(&mut rng);
        let base = extract_level_sets(&c, 0.01, &grid).unwrap();
        let rotated = extract_level_sets(&c.rotated(&r), 0.01, &grid).unwrap();
        for sign in [Sign::Positive, Sign::Negative] {
            let moved: Vec<Point> = base.mesh(sign).vertices.iter().map(|v| rotate(&r.transpose(), *v)).collect();
            let d = vertex_hausdorff(&moved, &rotated.mesh(sign).vertices, radius, 2.0 * grid.spacing());
            assert!(d < 2.0 * grid.spacing(), "{d}");
        }
    }
}

#[test]
fn extent_matches_mesh_reach() {
    let c = CorrelationMatrix::diag(0.03, -0.02, 0.01);
    let grid = GridSpec::new(4.0, 96).unwrap();
    let sets = extract_level_sets(&c, 0.01, &grid).unwrap();
    assert!(!sets.clipped);
    let ext = cmv_extent(&c, [1.0, 0.0, 0.0], 0.01).unwrap();
    let reach = sets.positive.vertices.iter().map(|v| v[0].abs()).fold(0.0, f64::max);
    assert!((reach - ext.r_out).abs() < 2.0 * grid.spacing(), "{reach} vs {}", ext.r_out);
}

#[test]
fn grid_refinement_report() {
    let c = CorrelationMatrix::diag(0.03, -0.02, 0.0);
    let report = check_grid_refinement(&c, 0.01, &GridSpec::new(4.0, 48).unwrap()).unwrap();
    assert!(!report.too_coarse, "{report:?}");
    // A lobe thinner than a cell shows up only after refinement.
    let tiny = CorrelationMatrix::diag(0.0272, 0.0, 0.0);
    let report = check_grid_refinement(&tiny, 0.01, &GridSpec::new(4.0, 16).unwrap()).unwrap();
    assert!(report.too_coarse, "{report:?}");
    assert_eq!(report.coarse_vertices, [0, 0]);
}

#[test]
fn grid_and_level_validation() {
    assert!(GridSpec::new(4.0, 15).is_err());
    assert!(GridSpec::new(0.0, 32).is_err());
    assert!(extract_level_sets(&CorrelationMatrix::identity(), 0.0, &small_grid()).is_err());
    let g = GridSpec::default();
    assert_eq!((g.half_extent, g.resolution), (DEFAULT_HALF_EXTENT, DEFAULT_RESOLUTION));
    assert_eq!(g.coord(0), -4.0);
    assert_eq!(g.coord(g.resolution - 1), 4.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn compactified_is_bounded_by_the_profile_peak(
        c in prop::array::uniform3(prop::array::uniform3(-1.0..1.0f64)),
        r in prop::array::uniform3(-50.0..50.0f64),
    ) {
        let c = CorrelationMatrix(c).symmetrized();
        let n = norm(r);
        prop_assume!(n > 1e-6);
        let e = r.map(|x| x / n);
        let along = correlation_along(&c, e).unwrap();
        prop_assert!(compactified(&c, r).abs() <= along.abs() * PROFILE_PEAK + 1e-12);
    }

    #[test]
    fn directional_correlation_is_quadratic(
        c in prop::array::uniform3(prop::array::uniform3(-1.0..1.0f64)),
        theta in 0.0..PI, phi in -PI..PI, s in 0.1..10.0f64,
    ) {
        let c = CorrelationMatrix(c);
        let e = spincmv::spin::direction(theta, phi);
        let q = quad_form(&c, e.map(|x| s * x));
        prop_assert!((q - s * s * correlation_along(&c, e).unwrap()).abs() < 1e-10 * s * s);
    }
}

#[test]
fn visible_shape_drops_lobes_below_the_level() {
    use spincmv::spin::ShapeLabel;
    // 0.02·0.385 < 0.01: the y lobe is never drawn.
    let c = CorrelationMatrix::diag(0.3, -0.02, 0.0);
    assert_eq!(spincmv::spin::classify_shape(&c, 1e-8).unwrap().label, ShapeLabel::Clover);
    assert_eq!(visible_shape(&c, 0.01).unwrap().label, ShapeLabel::Dumbbell);
    let sets = extract_level_sets(&c, 0.01, &small_grid()).unwrap();
    assert!(sets.negative.is_empty() && !sets.positive.is_empty());
    // Just above the threshold both lobes are drawn.
    let c = CorrelationMatrix::diag(0.3, -0.027, 0.0);
    assert_eq!(visible_shape(&c, 0.01).unwrap().label, ShapeLabel::Clover);
}
