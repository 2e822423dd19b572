//! Bessel functions of the first kind and integer order.

/// `J_0(x), …, J_{n_max}(x)` by Miller's backward recurrence, normalised
/// with `J_0 + 2Σ_k J_{2k} = 1`.
pub fn bessel_j_all(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    // start well above both the requested order and the turning point
    let mut start = n_max.max(ax as usize) + 30 + (40.0 * (n_max.max(ax as usize) as f64 + 1.0)).sqrt() as usize;
    start += start % 2;
    let mut next = 0.0f64; // J_{k+1}
    let mut cur = 1e-300f64; // J_k, arbitrary seed
    let mut norm = 0.0f64;
    let mut vals = vec![0.0f64; start + 1];
    vals[start] = cur;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        vals[k - 1] = cur;
        if cur.abs() > 1e250 {
            // rescale the tail computed so far
            let f = 1e-250;
            for v in vals[k - 1..].iter_mut() {
                *v *= f;
            }
            cur *= f;
            next *= f;
        }
    }
    for (k, v) in vals.iter().enumerate() {
        if k == 0 {
            norm += v;
        } else if k % 2 == 0 {
            norm += 2.0 * v;
        }
    }
    for (n, o) in out.iter_mut().enumerate() {
        let mut v = vals[n] / norm;
        if x < 0.0 && n % 2 == 1 {
            v = -v;
        }
        *o = v;
    }
    out
}

/// `J_n(x)` for any integer `n`, using `J_{−n} = (−1)^n J_n`.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let m = n.unsigned_abs() as usize;
    let v = bessel_j_all(m, x)[m];
    if n < 0 && m % 2 == 1 {
        -v
    } else {
        v
    }
}
