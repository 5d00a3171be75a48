use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use nalgebra::{Matrix3, Matrix4, UnitQuaternion, Vector4};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spincmv::spin::*;
use spincmv::states::StatePreset;
use spincmv::Error;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn random_density(rng: &mut impl Rng) -> TwoSpinDensityMatrix {
    // G G† with G of random rank, normalized.
    let rank = rng.random_range(1..=4);
    let g = Matrix4::<Complex64>::from_fn(|_, k| {
        if k < rank {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        } else {
            C0
        }
    });
    let m = g * g.adjoint();
    let tr = m.trace();
    TwoSpinDensityMatrix::new(m / tr).unwrap()
}

fn rotation(q: [f64; 4]) -> Matrix3<f64> {
    UnitQuaternion::from_quaternion(nalgebra::Quaternion::from_vector(Vector4::from(q)))
        .to_rotation_matrix()
        .into_inner()
}

#[test]
fn bell_phi_plus_observables() {
    let s = FRAC_1_SQRT_2;
    let rho = TwoSpinDensityMatrix::pure([re(s), C0, C0, re(s)]).unwrap();
    let obs = pair_observables_from_density(&rho);
    assert_eq!(obs.b_i.norm(), 0.0);
    assert_eq!(obs.b_j.norm(), 0.0);
    assert!(obs.c_connected.max_abs_diff(&CorrelationMatrix::diag(1.0, -1.0, 1.0)) < 1e-15);
}

#[test]
fn aligned_product_state_has_no_connected_part() {
    let rho = TwoSpinDensityMatrix::pure([C1, C0, C0, C0]).unwrap();
    let obs = pair_observables_from_density(&rho);
    assert_eq!(obs.b_i, BlochVector::new(0.0, 0.0, 1.0));
    assert_eq!(obs.b_j, BlochVector::new(0.0, 0.0, 1.0));
    assert_eq!(obs.c_connected.max_abs(), 0.0);
}

#[test]
fn classical_mixture_is_a_z_dumbbell() {
    let mut m = Matrix4::zeros();
    m[(0, 0)] = re(0.5);
    m[(3, 3)] = re(0.5);
    let obs = pair_observables_from_density(&TwoSpinDensityMatrix::new(m).unwrap());
    assert_eq!(obs.c_connected, CorrelationMatrix::diag(0.0, 0.0, 1.0));
    let shape = classify_shape(&obs.c_connected, DEFAULT_SHAPE_TOL).unwrap();
    assert_eq!(shape.label, ShapeLabel::Dumbbell);
    assert!((shape.principal_axes[0][2] - 1.0).abs() < 1e-15);
}

#[test]
fn density_rejects_unphysical_input() {
    let mut m = Matrix4::identity() * re(0.25);
    m[(0, 0)] = re(0.15);
    assert!(matches!(TwoSpinDensityMatrix::new(m), Err(Error::NonPhysicalDensity(_))));
    let mut m = Matrix4::identity() * re(0.25);
    m[(0, 1)] = Complex64::new(0.0, 0.1);
    assert!(matches!(TwoSpinDensityMatrix::new(m), Err(Error::NonPhysicalDensity(_))));
    let m = Matrix4::from_diagonal(&nalgebra::Vector4::new(re(0.7), re(0.4), re(-0.1), C0));
    assert!(matches!(TwoSpinDensityMatrix::new(m), Err(Error::NonPhysicalDensity(_))));
}

#[test]
fn inverse_of_bell_and_product_examples() {
    let bell = PairObservables::from_raw(
        BlochVector::zero(),
        BlochVector::zero(),
        CorrelationMatrix::diag(1.0, -1.0, 1.0),
        1,
    );
    let rho = density_from_pair_observables(&bell).unwrap();
    let s = FRAC_1_SQRT_2;
    let phi = TwoSpinDensityMatrix::pure([re(s), C0, C0, re(s)]).unwrap();
    assert!((rho.matrix() - phi.matrix()).norm() < 1e-15);

    let up = BlochVector::new(0.0, 0.0, 1.0);
    let product = PairObservables::from_raw(up, up, CorrelationMatrix::outer(up, up), 1);
    let rho = density_from_pair_observables(&product).unwrap();
    assert!((rho.matrix()[(0, 0)] - C1).norm() < 1e-15);
    assert!((rho.matrix().trace() - C1).norm() < 1e-15);
}

#[test]
fn positive_identity_correlations_are_unphysical() {
    // C = +I with zero Bloch vectors gives ρ eigenvalues {1/2, 1/2, 1/2, −1/2}.
    let obs = PairObservables::from_raw(
        BlochVector::zero(),
        BlochVector::zero(),
        CorrelationMatrix::identity(),
        1,
    );
    match density_from_pair_observables(&obs) {
        Err(Error::NonPhysicalObservables { min_eigenvalue }) => {
            assert!((min_eigenvalue + 0.5).abs() < 1e-12)
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn connected_examples() {
    let z = BlochVector::zero();
    assert_eq!(connected(&CorrelationMatrix::identity(), z, z), CorrelationMatrix::identity());
    let up = BlochVector::new(0.0, 0.0, 1.0);
    assert_eq!(connected(&CorrelationMatrix::diag(0.0, 0.0, 1.0), up, up).max_abs(), 0.0);
    let c = connected(
        &CorrelationMatrix::zero(),
        BlochVector::new(1.0, 0.0, 0.0),
        BlochVector::new(0.0, 1.0, 0.0),
    );
    let mut expected = CorrelationMatrix::zero();
    expected[(0, 1)] = -1.0;
    assert_eq!(c, expected);
}

#[test]
fn split_examples() {
    let sym = CorrelationMatrix([[1.0, 0.3, 0.2], [0.3, 2.0, 0.1], [0.2, 0.1, 3.0]]);
    let (s, a) = split_symmetric_antisymmetric(&sym);
    assert_eq!(s, sym);
    assert_eq!(a.norm(), 0.0);

    let mut c = CorrelationMatrix::zero();
    c[(0, 1)] = 1.0;
    c[(1, 0)] = -1.0;
    let (s, a) = split_symmetric_antisymmetric(&c);
    assert_eq!(s.max_abs(), 0.0);
    assert_eq!(a, Pseudovector::new(0.0, 0.0, 1.0));

    let mut c = CorrelationMatrix::diag(1.0, 2.0, 3.0);
    c[(0, 2)] = 4.0;
    let (s, a) = split_symmetric_antisymmetric(&c);
    assert_eq!(s[(0, 2)], 2.0);
    assert_eq!(s[(2, 0)], 2.0);
    assert_eq!(a, Pseudovector::new(0.0, -2.0, 0.0));
}

#[test]
fn shape_archetypes() {
    let label = |x, y, z| {
        classify_shape(&CorrelationMatrix::diag(x, y, z), DEFAULT_SHAPE_TOL)
            .unwrap()
            .label
    };
    assert_eq!(label(0.0, 0.0, 0.0), ShapeLabel::Zero);
    assert_eq!(label(1.0, 0.0, 0.0), ShapeLabel::Dumbbell);
    assert_eq!(label(1.0, -1.0, 0.0), ShapeLabel::Clover);
    assert_eq!(label(1.0, 1.0, 0.0), ShapeLabel::Disk);
    assert_eq!(label(1.0, 1.0, 1.0), ShapeLabel::Ellipsoid);
    assert_eq!(label(-0.2, -0.5, -1.0), ShapeLabel::Ellipsoid);
    assert_eq!(label(1.0, 1.0, -1.0), ShapeLabel::WheelAndAxle);
}

#[test]
fn shape_rejects_asymmetric_input() {
    let mut c = CorrelationMatrix::zero();
    c[(0, 1)] = 1e-6;
    assert!(matches!(
        classify_shape(&c, DEFAULT_SHAPE_TOL),
        Err(Error::NotSymmetric { .. })
    ));
}

#[test]
fn shape_threshold_is_relative_to_the_largest_eigenvalue() {
    let c = CorrelationMatrix::diag(100.0, 5e-7, 0.0);
    assert_eq!(classify_shape(&c, DEFAULT_SHAPE_TOL).unwrap().label, ShapeLabel::Dumbbell);
    let c = CorrelationMatrix::diag(0.5, 5e-7, 0.0);
    assert_eq!(classify_shape(&c, DEFAULT_SHAPE_TOL).unwrap().label, ShapeLabel::Disk);
}

#[test]
fn principal_axes_are_deterministic() {
    let c = CorrelationMatrix::diag(-1.0, 0.5, 0.0);
    let shape = classify_shape(&c, DEFAULT_SHAPE_TOL).unwrap();
    assert_eq!(shape.eigenvalues, [0.5, 0.0, -1.0]);
    assert_eq!(shape.axis_eigenvalues, [-1.0, 0.5, 0.0]);
    assert_eq!(shape.principal_axes[0], [1.0, 0.0, 0.0]);
    assert_eq!(shape.principal_axes[1], [0.0, 1.0, 0.0]);
    assert_eq!(shape.plane_normal(), [0.0, 0.0, 1.0]);
}

#[test]
fn irreducible_examples() {
    let p = irreducible_decompose(&CorrelationMatrix::identity());
    assert_eq!(p.c0, 1.0);
    assert_eq!(p.c1.norm(), 0.0);
    assert_eq!(p.c2.max_abs(), 0.0);

    let c = CorrelationMatrix::diag(1.0, -1.0, 0.0);
    let p = irreducible_decompose(&c);
    assert_eq!(p.c0, 0.0);
    assert_eq!(p.c1.norm(), 0.0);
    assert_eq!(p.c2, c);

    let c = CorrelationMatrix::diag(2.0, 2.0, 2.0) + Pseudovector::new(0.0, 0.0, 1.0).antisymmetric();
    let p = irreducible_decompose(&c);
    assert_eq!(p.c0, 2.0);
    assert_eq!(p.c1, Pseudovector::new(0.0, 0.0, 1.0));
    assert!(p.c2.max_abs() < 1e-15);
}

#[test]
fn spherical_profile_examples() {
    let iso = irreducible_decompose(&CorrelationMatrix::identity());
    let v0 = spherical_profile(&iso, &[0], 0.3, 1.1);
    for &(t, f) in &[(0.0, 0.0), (1.0, 2.0), (2.5, -1.0), (PI, 0.4)] {
        assert!((spherical_profile(&iso, &[0], t, f) - v0).abs() < 1e-15);
    }
    assert!((v0 - 1.0).abs() < 1e-14);

    let clover = irreducible_decompose(&CorrelationMatrix::diag(1.0, -1.0, 0.0));
    let ex = spherical_profile(&clover, &[2], FRAC_PI_2, 0.0);
    let ey = spherical_profile(&clover, &[2], FRAC_PI_2, FRAC_PI_2);
    assert!(ex > 0.0 && (ex + ey).abs() < 1e-14);

    let sym = irreducible_decompose(&CorrelationMatrix([[0.3, 0.1, -0.4], [0.1, 0.2, 0.5], [-0.4, 0.5, -0.9]]));
    for &(t, f) in &[(0.2, 0.0), (1.0, 2.0), (2.5, -1.0)] {
        assert_eq!(spherical_profile(&sym, &[1], t, f), 0.0);
    }
}

/// Midpoint quadrature over the sphere of Q(C, ê)·Y_lm(ê). The uniform φ
/// grid is exact for these degree ≤ 4 trigonometric polynomials.
fn project(c: &CorrelationMatrix, l: u8, m: i8) -> f64 {
    let (nt, np) = (4000, 16);
    let mut acc = 0.0;
    for a in 0..nt {
        let theta = PI * (a as f64 + 0.5) / nt as f64;
        for b in 0..np {
            let phi = 2.0 * PI * (b as f64 + 0.5) / np as f64;
            let e = direction(theta, phi);
            let q: f64 = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| e[i] * c[(i, j)] * e[j]).sum();
            acc += q * real_spherical_harmonic(l, m, e) * theta.sin();
        }
    }
    acc * (PI / nt as f64) * (2.0 * PI / np as f64)
}

#[test]
fn symmetric_coefficients_are_projections_of_the_quadratic_form() {
    // The quadratic form of the symmetric part carries the l = 0 and l = 2
    // sectors; its sphere projections must reproduce the stored a_lm.
    let c = CorrelationMatrix([[0.3, 0.1, -0.4], [0.1, 0.2, 0.5], [-0.4, 0.5, -0.9]]);
    let parts = irreducible_decompose(&c);
    for (l, m) in LM_ORDER {
        if l == 1 {
            continue;
        }
        let projected = project(&c, l, m);
        let stored = parts.coefficient(l, m).unwrap();
        assert!((projected - stored).abs() < 1e-6, "({l},{m}): {projected} vs {stored}");
    }
}

#[test]
fn spherical_harmonics_are_orthonormal() {
    let (nt, np) = (120, 240);
    let mut gram = [[0.0; 9]; 9];
    for a in 0..nt {
        let theta = PI * (a as f64 + 0.5) / nt as f64;
        for b in 0..np {
            let phi = 2.0 * PI * (b as f64 + 0.5) / np as f64;
            let e = direction(theta, phi);
            let y: Vec<f64> = LM_ORDER.iter().map(|&(l, m)| real_spherical_harmonic(l, m, e)).collect();
            let w = theta.sin() * (PI / nt as f64) * (2.0 * PI / np as f64);
            for i in 0..9 {
                for k in 0..9 {
                    gram[i][k] += y[i] * y[k] * w;
                }
            }
        }
    }
    for (i, row) in gram.iter().enumerate() {
        for (k, g) in row.iter().enumerate() {
            let expected = if i == k { 1.0 } else { 0.0 };
            assert!((g - expected).abs() < 1e-3, "({i},{k}) {g}");
        }
    }
}

#[test]
fn round_trip_over_random_densities() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let rho = random_density(&mut rng);
        let obs = pair_observables_from_density(&rho);
        assert!(obs.c_raw.max_abs() <= 1.0 + 1e-12);
        assert!(obs.b_i.norm() <= 1.0 + 1e-12 && obs.b_j.norm() <= 1.0 + 1e-12);
        let back = density_from_pair_observables(&obs).unwrap();
        assert!((back.matrix() - rho.matrix()).camax() < 1e-12);
    }
}

#[test]
fn bell_states_share_a_spectrum_up_to_global_sign_of_the_singlet() {
    let spectrum = |p: StatePreset| {
        let c = pair_observables_from_density(&p.density()).c_connected;
        classify_shape(&c, DEFAULT_SHAPE_TOL).unwrap().eigenvalues
    };
    let triplet = [1.0, 1.0, -1.0];
    for p in [StatePreset::BellPhiPlus, StatePreset::BellPhiMinus, StatePreset::BellPsiPlus] {
        let e = spectrum(p);
        assert!((0..3).all(|k| (e[k] - triplet[k]).abs() < 1e-12), "{p}: {e:?}");
    }
    // The singlet is rotation invariant: C = −I.
    let c = pair_observables_from_density(&StatePreset::BellPsiMinus.density()).c_connected;
    assert!(c.max_abs_diff(&CorrelationMatrix::identity().scale(-1.0)) < 1e-12);
}

#[test]
fn three_spin_cumulant_of_product_state_vanishes() {
    let (a, b, c) = (
        BlochVector::new(0.3, -0.2, 0.5),
        BlochVector::new(0.0, 0.6, -0.1),
        BlochVector::new(-0.7, 0.1, 0.2),
    );
    let mut c_abc = [[[0.0; 3]; 3]; 3];
    let (va, vb, vc) = (a.to_array(), b.to_array(), c.to_array());
    for (i, plane) in c_abc.iter_mut().enumerate() {
        for (j, row) in plane.iter_mut().enumerate() {
            for (k, x) in row.iter_mut().enumerate() {
                *x = va[i] * vb[j] * vc[k];
            }
        }
    }
    let m = ThreeSpinMoments {
        b_a: a,
        b_b: b,
        b_c: c,
        c_ab: CorrelationMatrix::outer(a, b),
        c_ac: CorrelationMatrix::outer(a, c),
        c_bc: CorrelationMatrix::outer(b, c),
        c_abc,
    };
    let t = connected_three_spin(&m);
    assert_eq!(t.order, 3);
    assert!(t.entries.iter().all(|x| x.abs() < 1e-15));
}

/// Brute-force moments of a three-qubit pure state (site a is the most
/// significant bit, bit value 1 = ↓).
fn three_qubit_moments(psi: &[Complex64; 8]) -> ThreeSpinMoments {
    let paulis: Vec<_> = (0..4).map(pauli).collect();
    let expect = |ops: [usize; 3]| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for row in 0..8 {
            for col in 0..8 {
                let mut el = C1;
                for (site, &op) in ops.iter().enumerate() {
                    let shift = 2 - site;
                    el *= paulis[op][((row >> shift) & 1, (col >> shift) & 1)];
                }
                acc += psi[row].conj() * el * psi[col];
            }
        }
        acc.re
    };
    let bloch = |site: usize| {
        BlochVector::from_array([1, 2, 3].map(|a| {
            let mut ops = [0; 3];
            ops[site] = a;
            expect(ops)
        }))
    };
    let pair = |s: usize, t: usize| {
        CorrelationMatrix::from_fn(|i, j| {
            let mut ops = [0; 3];
            ops[s] = i + 1;
            ops[t] = j + 1;
            expect(ops)
        })
    };
    let mut c_abc = [[[0.0; 3]; 3]; 3];
    for (i, plane) in c_abc.iter_mut().enumerate() {
        for (j, row) in plane.iter_mut().enumerate() {
            for (k, x) in row.iter_mut().enumerate() {
                *x = expect([i + 1, j + 1, k + 1]);
            }
        }
    }
    ThreeSpinMoments {
        b_a: bloch(0),
        b_b: bloch(1),
        b_c: bloch(2),
        c_ab: pair(0, 1),
        c_ac: pair(0, 2),
        c_bc: pair(1, 2),
        c_abc,
    }
}

#[test]
fn ghz_three_spin_cumulant() {
    let s = FRAC_1_SQRT_2;
    let mut psi = [C0; 8];
    psi[0] = re(s);
    psi[7] = re(s);
    let m = three_qubit_moments(&psi);
    assert!(m.b_a.norm() < 1e-15 && m.b_b.norm() < 1e-15 && m.b_c.norm() < 1e-15);
    let t = connected_three_spin(&m);
    assert!((t.get(&[0, 0, 0]) - 1.0).abs() < 1e-15);
    assert!((t.get(&[2, 2, 2])).abs() < 1e-15);
}

#[test]
fn w_three_spin_cumulant() {
    // One ↓ shared among three sites: ⟨σzσzσz⟩ = −1, b_z = 1/3,
    // raw zz = −1/3, so κ_zzz = −1 − 3·(1/3)(−1/3 − 1/9) − 1/27 = −16/27.
    let a = 1.0 / 3f64.sqrt();
    let mut psi = [C0; 8];
    psi[1] = re(a);
    psi[2] = re(a);
    psi[4] = re(a);
    let m = three_qubit_moments(&psi);
    assert!((m.b_a.bz - 1.0 / 3.0).abs() < 1e-15);
    let t = connected_three_spin(&m);
    assert!((t.get(&[2, 2, 2]) + 16.0 / 27.0).abs() < 1e-14);
}

#[test]
fn correlation_tensor_indexing() {
    let c = CorrelationMatrix([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]);
    let t = CorrelationTensorN::from_matrix(&c);
    assert_eq!(t.get(&[1, 2]), 6.0);
    assert_eq!(t.as_matrix(), Some(c));
    assert!(CorrelationTensorN::new(3, vec![0.0; 26]).is_err());
    assert!(CorrelationTensorN::new(1, vec![0.0; 3]).is_err());
    assert!(CorrelationTensorN::new(2, vec![f64::NAN; 9]).is_err());
}

fn matrix_strategy() -> impl Strategy<Value = CorrelationMatrix> {
    prop::array::uniform3(prop::array::uniform3(-2.0..2.0f64)).prop_map(CorrelationMatrix)
}

fn quaternion_strategy() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.0..1.0f64).prop_filter("nondegenerate", |q| {
        q.iter().map(|x| x * x).sum::<f64>() > 1e-2
    })
}

proptest! {
    #[test]
    fn classification_is_rotation_invariant(c in matrix_strategy(), q in quaternion_strategy()) {
        let c = c.symmetrized();
        let r = rotation(q);
        let a = classify_shape(&c, DEFAULT_SHAPE_TOL).unwrap();
        let b = classify_shape(&c.rotated(&r).symmetrized(), DEFAULT_SHAPE_TOL).unwrap();
        prop_assert_eq!(a.label, b.label);
        for k in 0..3 {
            prop_assert!((a.eigenvalues[k] - b.eigenvalues[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn principal_axes_are_orthonormal(c in matrix_strategy()) {
        let s = classify_shape(&c.symmetrized(), DEFAULT_SHAPE_TOL).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| s.principal_axes[i][k] * s.principal_axes[j][k]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn label_rank_matches_nonzero_eigenvalue_count(c in matrix_strategy(), zeros in 0usize..3) {
        // Zero out some spectrum to reach every rank.
        let s = classify_shape(&c.symmetrized(), DEFAULT_SHAPE_TOL).unwrap();
        let mut lambda = s.axis_eigenvalues;
        for l in lambda.iter_mut().rev().take(zeros) {
            *l = 0.0;
        }
        let axes = Matrix3::from_fn(|i, k| s.principal_axes[k][i]);
        let rebuilt = axes * Matrix3::from_diagonal(&lambda.into()) * axes.transpose();
        let t = classify_shape(&CorrelationMatrix::from_matrix3(&rebuilt).symmetrized(), DEFAULT_SHAPE_TOL).unwrap();
        let max = lambda.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let expected = lambda.iter().filter(|x| x.abs() > 1e-6 * max.max(1.0)).count();
        prop_assert_eq!(t.label.rank(), expected);
    }

    #[test]
    fn irreducible_parts_reconstruct(c in matrix_strategy()) {
        let p = irreducible_decompose(&c);
        prop_assert!(p.reconstruct().max_abs_diff(&c) < 1e-15);
        prop_assert!(p.c2.trace().abs() < 1e-15);
        prop_assert!(p.c2.asymmetry() == 0.0);
    }

    #[test]
    fn split_reassembles_exactly(c in matrix_strategy()) {
        let (s, a) = split_symmetric_antisymmetric(&c);
        prop_assert!((s + a.antisymmetric()).max_abs_diff(&c) < 1e-15);
    }

    #[test]
    fn profile_sectors_add_up(c in matrix_strategy(), theta in 0.0..PI, phi in -PI..PI) {
        let p = irreducible_decompose(&c);
        let total = spherical_profile(&p, &[0, 1, 2], theta, phi);
        let parts: f64 = [0u8, 1, 2].iter().map(|&l| spherical_profile(&p, &[l], theta, phi)).sum();
        prop_assert!((total - parts).abs() < 1e-12);
    }
}
