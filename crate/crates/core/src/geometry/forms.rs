use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{classify_shape, CorrelationMatrix, CorrelationTensorN, Pseudovector, ShapeClass};

pub type Point = [f64; 3];

pub fn norm(r: Point) -> f64 {
    (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt()
}

/// Q(r) = rᵀ C r.
pub fn quad_form(c: &CorrelationMatrix, r: Point) -> f64 {
    let mut q = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            q += r[i] * c[(i, j)] * r[j];
        }
    }
    q
}

/// Q_f(r) = Q(r) / (1 + |r|²)^{3/2}.
pub fn compactified(c: &CorrelationMatrix, r: Point) -> f64 {
    let s = 1.0 + r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    quad_form(c, r) / (s * s.sqrt())
}

/// Correlation along a unit direction, eᵀ C e.
pub fn correlation_along(c: &CorrelationMatrix, e: Point) -> Result<f64> {
    let n = norm(e);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit { norm: n });
    }
    Ok(quad_form(c, e))
}

/// F(r) = Σ C^{μν…γ} r^μ r^ν … r^γ.
pub fn multilinear_form(tensor: &CorrelationTensorN, r: Point) -> f64 {
    // Contract the last index first: each pass folds groups of three entries.
    let mut level: Vec<f64> = tensor.entries.clone();
    while level.len() > 1 {
        level = level
            .chunks_exact(3)
            .map(|c| c[0] * r[0] + c[1] * r[1] + c[2] * r[2])
            .collect();
    }
    level[0]
}

/// F(r) / (1 + |r|²)^{(N+1)/2} for an order-N tensor.
pub fn compactified_multilinear(tensor: &CorrelationTensorN, r: Point) -> f64 {
    let s = 1.0 + r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    multilinear_form(tensor, r) / s.powf(0.5 * (tensor.order as f64 + 1.0))
}

/// L(r) = a·r.
pub fn pseudovector_form(a: &Pseudovector, r: Point) -> f64 {
    a.ax * r[0] + a.ay * r[1] + a.az * r[2]
}

/// a·r / (1 + |r|²), the display variant of [`pseudovector_form`].
pub fn compactified_pseudovector(a: &Pseudovector, r: Point) -> f64 {
    pseudovector_form(a, r) / (1.0 + r[0] * r[0] + r[1] * r[1] + r[2] * r[2])
}

/// Where the compactified form crosses the level ±P along a ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extent {
    pub r_in: f64,
    pub r_out: f64,
    pub size: f64,
}

/// Peak of r²/(1 + r²)^{3/2}, reached at r = √2.
pub const PROFILE_PEAK: f64 = 0.384_900_179_459_750_5; // 2/(3√3)
const PEAK_RADIUS: f64 = std::f64::consts::SQRT_2;

/// Inner and outer radii at which |Q_f(r·e)| = P along the unit direction e,
/// for the lobe whose sign matches eᵀCe. Roots are bracketed and bisected to
/// 1e−10.
pub fn cmv_extent(c: &CorrelationMatrix, e: Point, level: f64) -> Result<Extent> {
    if !(level > 0.0) {
        return Err(Error::InvalidParameter(format!("level {level} must be positive")));
    }
    let along = correlation_along(c, e)?;
    let peak = along.abs() * PROFILE_PEAK;
    if peak < level {
        return Err(Error::NoLevelSet { peak, level });
    }
    let sign = along.signum();
    let h = |r: f64| sign * compactified(c, [r * e[0], r * e[1], r * e[2]]) - level;

    let r_in = bisect(&h, 0.0, PEAK_RADIUS);
    // Q_f ≤ |C(ê)|/r, so the outer root lies below |C(ê)|/P.
    let mut hi = (along.abs() / level).max(2.0 * PEAK_RADIUS);
    while h(hi) > 0.0 {
        hi *= 2.0;
    }
    let r_out = bisect(&h, PEAK_RADIUS, hi);
    Ok(Extent {
        r_in,
        r_out,
        size: r_out - r_in,
    })
}

/// Shape of the level sets drawn at `level`: an eigenvalue counts only if its
/// lobe reaches the level, |λ|·2/(3√3) ≥ P.
pub fn visible_shape(c_sym: &CorrelationMatrix, level: f64) -> Result<ShapeClass> {
    if !(level > 0.0) {
        return Err(Error::InvalidParameter(format!("level {level} must be positive")));
    }
    let exact = classify_shape(c_sym, f64::MIN_POSITIVE)?;
    let largest = exact.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    classify_shape(c_sym, level / PROFILE_PEAK / largest.max(1.0))
}

/// Large-ratio approximation of the lobe size, C(ê)/P − √(P/C(ê)).
pub fn extent_asymptote(correlation: f64, level: f64) -> f64 {
    let ratio = correlation.abs() / level;
    ratio - (1.0 / ratio).sqrt()
}

/// Root of `h` in [lo, hi], where h changes sign between the endpoints.
fn bisect(h: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let lo_sign = h(lo) > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (h(mid) > 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-10 * hi.max(1.0) * 1e-2 {
            break;
        }
    }
    0.5 * (lo + hi)
}
