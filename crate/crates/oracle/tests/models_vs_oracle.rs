use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

use num_complex::Complex64;
use spincmv::models::*;
use spincmv::spin::{CorrelationMatrix, PairObservables};
use spincmv_oracle::*;

fn spinors_from(state: &InitialState, first_site: i64, l: usize) -> Vec<[Complex64; 2]> {
    (0..l as i64)
        .map(|k| {
            let [u, d] = state.spinor(first_site + k);
            [Complex64::new(u, 0.0), Complex64::new(d, 0.0)]
        })
        .collect()
}

#[test]
fn coherent_ising_matches_state_vector_evolution() {
    let mut worst: f64 = 0.0;
    for &theta in &[FRAC_PI_6, FRAC_PI_4, FRAC_PI_2] {
        for &jt in &[0.1, 0.5, 1.0, 2.0] {
            for n in 1..=3u32 {
                let len = 2 * n as usize + 6;
                let i = (len - n as usize) / 2;
                let psi = ed_ising_evolve(len, theta, 1.0, jt, Boundary::Open);
                let reference = psi.pair_observables(i, i + n as usize);
                let model = ising_coherent(&IsingParams::coherent(1.0, theta, jt), n).unwrap();
                worst = worst.max(model.max_abs_diff(&reference));
            }
        }
    }
    assert!(worst < 1e-10, "max |Δ| = {worst:e}");
}

#[test]
fn coherent_ising_is_time_scale_invariant() {
    // Only the product Jt enters.
    let a = ising_coherent(&IsingParams::coherent(2.0, 1.0, 0.35), 2).unwrap();
    let b = ising_coherent(&IsingParams::coherent(1.0, 1.0, 0.7), 2).unwrap();
    assert!(a.max_abs_diff(&b) < 1e-14);
}

#[test]
fn dissipative_ising_matches_master_equation() {
    let mut worst: f64 = 0.0;
    for &gamma in &[0.1, 0.5, 1.0] {
        for &jt in &[0.25, 0.5, 1.0, 1.5] {
            let rho = lindblad_rk4(5, FRAC_PI_2, 1.0, gamma, jt, 1e-3).unwrap();
            for n in 1..=2u32 {
                let reference = rho.pair_observables(1, 1 + n as usize);
                let params = IsingParams {
                    j: 1.0,
                    theta: FRAC_PI_2,
                    gamma,
                    t: jt,
                };
                let model = ising_dissipative(&params, n).unwrap();
                assert!(!model.unvalidated_regime);
                worst = worst.max(model.observables.max_abs_diff(&reference));
            }
        }
    }
    assert!(worst < 1e-6, "max |Δ| = {worst:e}");
}

#[test]
fn dissipative_ising_reference_point() {
    // Γ/J = 0.5, Jt = 0.5, θ = π/2, nearest neighbours.
    let rho = lindblad_rk4(5, FRAC_PI_2, 1.0, 0.5, 0.5, 1e-3).unwrap();
    let reference = rho.pair_observables(2, 3);
    let model = ising_dissipative(
        &IsingParams {
            j: 1.0,
            theta: FRAC_PI_2,
            gamma: 0.5,
            t: 0.5,
        },
        1,
    )
    .unwrap();
    assert!(model.observables.max_abs_diff(&reference) < 1e-9);
}

#[test]
fn hubbard_quench_matches_wick_oracle_on_long_chain() {
    // 60 sites keep the Bessel weight past the edges far below 1e−12.
    let state = InitialState::canted_afm();
    let l = 60usize;
    let first = -30i64;
    let spinors = spinors_from(&state, first, l);
    let mut worst: f64 = 0.0;
    for &jt in &[0.0, 0.2, 0.4, 0.6, 1.5, 3.0] {
        let evo = SlaterEvolution::new(&spinors, 1.0, jt);
        for (q, r) in [(0i64, 1i64), (1, 2), (0, 2), (-1, 2), (3, 0)] {
            let params = HubbardParams {
                hopping: 1.0,
                t: jt,
                q,
                r,
                initial_state: state.clone(),
                bessel_cutoff: None,
            };
            let model = hubbard_quench(&params).unwrap();
            let reference = evo.pair_observables((q - first) as usize, (r - first) as usize);
            worst = worst.max(model.max_abs_diff(&reference));
        }
    }
    assert!(worst < 1e-10, "max |Δ| = {worst:e}");
}

#[test]
fn hubbard_quench_reference_point() {
    // 𝒥t = 0.4, pair (0, 1), canted antiferromagnet.
    let params = HubbardParams {
        hopping: 1.0,
        t: 0.4,
        q: 0,
        r: 1,
        initial_state: InitialState::canted_afm(),
        bessel_cutoff: None,
    };
    let obs = hubbard_quench(&params).unwrap();
    let expected_c = CorrelationMatrix([
        [0.58119534, 0.0, -0.22770108],
        [0.0, 0.08119534, 0.0],
        [0.22770108, 0.0, -0.18489091],
    ]);
    assert!(obs.c_raw.max_abs_diff(&expected_c) < 1e-8);
    assert!((obs.b_i.bx - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8 && (obs.b_i.bz - 0.32201796).abs() < 1e-8);
    assert!((obs.b_j.bx - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8 && (obs.b_j.bz + 0.32201796).abs() < 1e-8);
}

/// Signed axis permutations: physical axis k reads printed axis perm[k] with
/// sign signs[k].
fn signed_permutations() -> Vec<([usize; 3], [f64; 3])> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::new();
    for p in perms {
        for bits in 0..8 {
            let s = [0, 1, 2].map(|k| if bits >> k & 1 == 1 { -1.0 } else { 1.0 });
            out.push((p, s));
        }
    }
    out
}

/// The determinant formulas in their own frame: Bloch (0, 0, D_0) and
/// diag(−D_{−n}D_n, det[D_{j−i−1}], −det[D_{j−i+1}]).
fn printed_frame(g: f64, temperature: f64, n: u32) -> ([f64; 3], [f64; 3]) {
    let p = TfimParams::new(g, temperature, n);
    let d = |m: i64| tfim_dn(m, &p).unwrap().re;
    let obs = tfim_correlations(&p).unwrap();
    let c = obs.c_connected;
    // Undo the documented map to recover the printed-frame values.
    ([0.0, 0.0, d(0)], [c[(0, 0)], c[(1, 1)], -c[(2, 2)]])
}

type Candidate = (f64, [usize; 3], [f64; 3]);

/// Every signed permutation scored against 12-spin ED, best first. The Bloch
/// vector and the correlation diagonal are scored separately: the printed
/// frame is not a rotation of the physical one.
fn score_axis_maps(g: f64, temperature: f64) -> (Vec<Candidate>, Vec<Candidate>) {
    let ed = ed_thermal_tfim(12, g, temperature, 1.0);
    let frames: Vec<_> = (1..=2u32).map(|n| printed_frame(g, temperature, n)).collect();
    let refs: Vec<_> = (1..=2usize).map(|n| ed.connected(n)).collect();
    let ed_b = ed.bloch.to_array();
    let mut bloch_scores = Vec::new();
    let mut corr_scores = Vec::new();
    for (perm, signs) in signed_permutations() {
        let b = frames[0].0;
        let bloch_err = (0..3)
            .map(|k| (signs[k] * b[perm[k]] - ed_b[k]).abs())
            .fold(0.0, f64::max);
        bloch_scores.push((bloch_err, perm, signs));
        let corr_err = (0..2)
            .flat_map(|i| (0..3).map(move |k| (i, k)))
            .map(|(i, k)| (signs[k] * frames[i].1[perm[k]] - refs[i][(k, k)]).abs())
            .fold(0.0, f64::max);
        corr_scores.push((corr_err, perm, signs));
    }
    bloch_scores.sort_by(|a, b| a.0.total_cmp(&b.0));
    corr_scores.sort_by(|a, b| a.0.total_cmp(&b.0));
    (bloch_scores, corr_scores)
}

const DOCUMENTED_CORR: ([usize; 3], [f64; 3]) = ([0, 1, 2], [1.0, 1.0, -1.0]);

fn assert_bloch_slot(scores: &[Candidate], tol: f64) {
    // Two Bloch components vanish, so only the x slot is pinned: printed z
    // with a minus sign. Every candidate near the best must agree on it.
    let best = scores[0].0;
    assert!(best < tol, "{best:e}");
    for (err, perm, signs) in scores {
        if *err < tol.max(10.0 * best) {
            assert!(perm[0] == 2 && signs[0] == -1.0, "{perm:?} {signs:?}");
        }
    }
}

#[test]
fn tfim_axis_map_is_the_unique_signed_permutation_matching_ed() {
    // At T/J = 4 the 12-site ring matches the infinite chain to ~1e−5, which
    // makes the choice sharp.
    let (bloch, corr) = score_axis_maps(0.5, 4.0);
    assert_eq!((corr[0].1, corr[0].2), DOCUMENTED_CORR);
    assert!(corr[0].0 < 1e-4 && corr[1].0 > 100.0 * corr[0].0, "{:?}", &corr[..2]);
    assert_bloch_slot(&bloch, 1e-4);
}

#[test]
fn tfim_axis_map_is_optimal_at_the_calibration_point() {
    // At (g, T/J) = (0.5, 1) finite size blurs the scores (C^xx ≈ −C^yy at
    // n = 1 ties an x↔y swap), but nothing beats the documented map.
    let (bloch, corr) = score_axis_maps(0.5, 1.0);
    let documented = corr.iter().find(|c| (c.1, c.2) == DOCUMENTED_CORR).unwrap();
    assert_eq!(documented.0, corr[0].0);
    assert_bloch_slot(&bloch, 5e-3);
}

#[test]
fn tfim_zero_field_nearest_neighbour() {
    // g = 0: D_n = δ_{n,1} tanh(J/T), so C^zz = tanh(J/T) and nothing else.
    for &temperature in &[0.5, 1.0, 3.0] {
        let p = TfimParams::new(0.0, temperature, 1);
        let obs = tfim_correlations(&p).unwrap();
        let expected = CorrelationMatrix::diag(0.0, 0.0, (1.0 / temperature).tanh());
        assert!(obs.c_connected.max_abs_diff(&expected) < 1e-12);
        assert!(obs.b_i.norm() < 1e-12);
        assert!((tfim_dn(1, &p).unwrap().re - (1.0 / temperature).tanh()).abs() < 1e-12);
        assert!(tfim_dn(0, &p).unwrap().norm() < 1e-12);
    }
}

#[test]
fn tfim_far_separation_matches_ring_at_high_temperature() {
    // At T/J = 4 the correlation length is short and 12 sites suffice.
    let ed = ed_thermal_tfim(12, 0.5, 4.0, 1.0);
    for n in 1..=3u32 {
        let model = tfim_correlations(&TfimParams::new(0.5, 4.0, n)).unwrap();
        let d = model.c_connected.max_abs_diff(&ed.connected(n as usize));
        assert!(d < 1e-5, "n = {n}: {d:e}");
        assert!((model.b_i.bx - ed.bloch.bx).abs() < 1e-5);
    }
}

fn assert_physical(obs: &PairObservables) {
    let rho = spincmv::spin::density_from_pair_observables(obs);
    assert!(rho.is_ok(), "{rho:?}");
}

#[test]
fn model_outputs_are_physical_states() {
    for &jt in &[0.0, 0.3, 1.1, 2.7] {
        for n in 1..=3 {
            assert_physical(&ising_coherent(&IsingParams::coherent(1.0, 1.0, jt), n).unwrap());
            let p = IsingParams {
                j: 1.0,
                theta: FRAC_PI_2,
                gamma: 0.4,
                t: jt,
            };
            assert_physical(&ising_dissipative(&p, n).unwrap().observables);
        }
        let h = HubbardParams {
            hopping: 1.0,
            t: jt,
            q: 0,
            r: 1,
            initial_state: InitialState::canted_afm(),
            bessel_cutoff: None,
        };
        assert_physical(&hubbard_quench(&h).unwrap());
    }
    for &(g, temperature) in &[(0.5, 1.0), (1.0, 1.0), (2.0, 0.5)] {
        for n in 1..=3 {
            assert_physical(&tfim_correlations(&TfimParams::new(g, temperature, n)).unwrap());
        }
    }
}
