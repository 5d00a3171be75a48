//! Integer-order Bessel functions of the first kind for real argument.

/// J_0(x), …, J_{m_max}(x) by Miller's downward recurrence normalized with
/// J_0 + 2 Σ J_{2k} = 1. Absolute error is at the 1e−15 level for
/// |x| ≲ 1e3.
pub fn bessel_j_sequence(m_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; m_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    // Start well above both the requested order and the turning point so the
    // minimal solution dominates.
    let top = {
        let base = (m_max as f64).max(ax);
        let n = (base + 30.0 + 10.0 * base.sqrt()) as usize;
        n + (n & 1)
    };
    let mut next = 0.0_f64;
    let mut cur = 1e-300_f64;
    let mut norm = 0.0_f64;
    for k in (1..=top).rev() {
        // cur = J_k (unnormalized), next = J_{k+1}
        let prev = (2.0 * k as f64 / ax) * cur - next;
        next = cur;
        cur = prev;
        if k - 1 <= m_max {
            out[k - 1] = cur;
        }
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    norm += cur;
    for (m, v) in out.iter_mut().enumerate() {
        *v /= norm;
        // J_m(−x) = (−1)^m J_m(x)
        if x < 0.0 && m % 2 == 1 {
            *v = -*v;
        }
    }
    out
}

/// J_m(x) for integer m (negative orders via J_{−m} = (−1)^m J_m).
pub fn bessel_j(m: i64, x: f64) -> f64 {
    let k = m.unsigned_abs() as usize;
    let v = bessel_j_sequence(k, x)[k];
    if m < 0 && k % 2 == 1 {
        -v
    } else {
        v
    }
}
