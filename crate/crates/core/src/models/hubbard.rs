//! Spin-1/2 fermions hopping on an infinite chain at U = 0, released from a
//! product state with one particle per site.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bessel::bessel_j_sequence;
use crate::error::{Error, Result};
use crate::spin::{pauli, BlochVector, CorrelationMatrix, PairObservables};

/// Largest unitarity deficit 1 − Σ_l |A_jl|² accepted from the truncated
/// propagator.
pub const TRUNCATION_TOL: f64 = 1e-8;

/// Default order cutoff |j − l| ≤ ceil(2𝒥t) + 30.
pub fn default_bessel_cutoff(hopping: f64, t: f64) -> usize {
    (2.0 * hopping * t).abs().ceil() as usize + 30
}

/// Site-wise spinors cos(θ_j/2)|↑⟩ + sin(θ_j/2)|↓⟩ repeating with the
/// period of `angles` (site j uses angles[j mod len]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub angles: Vec<f64>,
}

impl InitialState {
    /// Staggered state with θ = π/4 on even and 3π/4 on odd sites.
    pub fn canted_afm() -> Self {
        Self {
            angles: vec![PI / 4.0, 3.0 * PI / 4.0],
        }
    }

    pub fn uniform(theta: f64) -> Self {
        Self { angles: vec![theta] }
    }

    pub fn angle(&self, site: i64) -> f64 {
        self.angles[site.rem_euclid(self.angles.len() as i64) as usize]
    }

    pub fn spinor(&self, site: i64) -> [f64; 2] {
        let (s, c) = (self.angle(site) / 2.0).sin_cos();
        [c, s]
    }

    /// f_j(ab) = ⟨c†_{ja} c_{jb}⟩ in the initial state.
    pub fn one_body(&self, site: i64) -> Matrix2<Complex64> {
        let chi = self.spinor(site);
        Matrix2::from_fn(|a, b| Complex64::new(chi[a] * chi[b], 0.0))
    }

    /// g_j(abcd) = ⟨c†_{ja} c_{jb} c†_{jc} c_{jd}⟩ = δ_bc f_j(ad) for a singly
    /// occupied site.
    pub fn two_body(&self, site: i64, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        if b == c {
            self.one_body(site)[(a, d)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HubbardParams {
    /// Tunneling 𝒥.
    pub hopping: f64,
    pub t: f64,
    pub q: i64,
    pub r: i64,
    pub initial_state: InitialState,
    /// Truncation |j − l| ≤ cutoff; `None` selects [`default_bessel_cutoff`].
    pub bessel_cutoff: Option<usize>,
}

/// A_jl(t) = (−i)^{|j−l|} J_{|j−l|}(2𝒥t).
pub fn hubbard_propagator(j: i64, l: i64, hopping: f64, t: f64) -> Complex64 {
    let m = (j - l).unsigned_abs() as usize;
    let jm = bessel_j_sequence(m, 2.0 * hopping * t)[m];
    minus_i_pow(m) * jm
}

fn minus_i_pow(m: usize) -> Complex64 {
    match m % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Truncated propagator row A_{q,·} covering sites q − cutoff ..= q + cutoff.
struct PropagatorRow {
    centre: i64,
    values: Vec<Complex64>,
    cutoff: usize,
}

impl PropagatorRow {
    fn new(centre: i64, bessel: &[f64], cutoff: usize) -> Self {
        let values = (0..=2 * cutoff)
            .map(|k| {
                let m = (k as i64 - cutoff as i64).unsigned_abs() as usize;
                minus_i_pow(m) * bessel[m]
            })
            .collect();
        Self { centre, values, cutoff }
    }

    fn at(&self, site: i64) -> Complex64 {
        let k = site - self.centre + self.cutoff as i64;
        if k < 0 || k as usize >= self.values.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[k as usize]
        }
    }
}

/// Pair observables of spins q and r at time t after the quench.
pub fn hubbard_quench(params: &HubbardParams) -> Result<PairObservables> {
    let (q, r) = (params.q, params.r);
    if q == r {
        return Err(Error::InvalidParameter("sites q and r must differ".into()));
    }
    if params.initial_state.angles.is_empty() {
        return Err(Error::InvalidParameter("initial state needs at least one angle".into()));
    }
    if !(params.t >= 0.0) || !params.hopping.is_finite() {
        return Err(Error::InvalidParameter("time must be ≥ 0 and hopping finite".into()));
    }
    let cutoff = params
        .bessel_cutoff
        .unwrap_or_else(|| default_bessel_cutoff(params.hopping, params.t));
    let bessel = bessel_j_sequence(cutoff, 2.0 * params.hopping * params.t);
    let weight = bessel[0] * bessel[0] + 2.0 * bessel[1..].iter().map(|v| v * v).sum::<f64>();
    let deficit = (1.0 - weight).abs();
    if deficit > TRUNCATION_TOL {
        return Err(Error::TruncationError { deficit });
    }

    let row_q = PropagatorRow::new(q, &bessel, cutoff);
    let row_r = PropagatorRow::new(r, &bessel, cutoff);
    let sites: Vec<i64> = (q.min(r) - cutoff as i64..=q.max(r) + cutoff as i64).collect();
    let state = &params.initial_state;
    let f: Vec<Matrix2<Complex64>> = sites.iter().map(|&j| state.one_body(j)).collect();
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };

    // Site sums that factor out of the Pauli contraction.
    let mut fq = Matrix2::<Complex64>::zeros(); // Σ_i |A_qi|² f_i
    let mut fr = Matrix2::<Complex64>::zeros(); // Σ_i |A_ri|² f_i
    let mut cross = Matrix2::<Complex64>::zeros(); // Σ_i A*_qi A_ri f_i
    let mut cross_hole = Matrix2::<Complex64>::zeros(); // [b][c]: Σ_j A_qj A*_rj (δ_bc − f_j(cb))
    let mut overlap = vec![0.0; sites.len()]; // |A_qi|² |A_ri|²
    for (k, &site) in sites.iter().enumerate() {
        let (aq, ar) = (row_q.at(site), row_r.at(site));
        fq += f[k] * Complex64::new(aq.norm_sqr(), 0.0);
        fr += f[k] * Complex64::new(ar.norm_sqr(), 0.0);
        cross += f[k] * (aq.conj() * ar);
        let hole = Matrix2::from_fn(|b, c| delta(b, c) - f[k][(c, b)]);
        cross_hole += hole * (aq * ar.conj());
        overlap[k] = aq.norm_sqr() * ar.norm_sqr();
    }

    let sigma: [Matrix2<Complex64>; 3] = [pauli(1), pauli(2), pauli(3)];
    let bloch = |m: &Matrix2<Complex64>| {
        let v: Vec<f64> = sigma.iter().map(|s| contract2(s, m).re).collect();
        BlochVector::new(v[0], v[1], v[2])
    };

    let mut c = CorrelationMatrix::zero();
    for mu in 0..3 {
        for nu in 0..3 {
            let mut total = Complex64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    let smu = sigma[mu][(a, b)];
                    if smu == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for cc in 0..2 {
                        for d in 0..2 {
                            let snu = sigma[nu][(cc, d)];
                            if snu == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            let mut same_site = Complex64::new(0.0, 0.0);
                            for (k, &site) in sites.iter().enumerate() {
                                if overlap[k] == 0.0 {
                                    continue;
                                }
                                let fk = &f[k];
                                let bracket = state.two_body(site, a, b, cc, d)
                                    - fk[(a, b)] * fk[(cc, d)]
                                    - fk[(a, d)] * (delta(b, cc) - fk[(cc, b)]);
                                same_site += bracket * overlap[k];
                            }
                            let disconnected = fq[(a, b)] * fr[(cc, d)];
                            let exchange = cross[(a, d)] * cross_hole[(b, cc)];
                            total += smu * snu * (same_site + disconnected + exchange);
                        }
                    }
                }
            }
            c[(mu, nu)] = total.re;
        }
    }

    Ok(PairObservables::from_raw(
        bloch(&fq),
        bloch(&fr),
        c,
        (q - r).unsigned_abs() as u32,
    ))
}

/// Σ_ab s_ab m_ab.
fn contract2(s: &Matrix2<Complex64>, m: &Matrix2<Complex64>) -> Complex64 {
    s.component_mul(m).sum()
}
