//! Laguerre polynomials and closed-form displacement matrix elements.

use crate::linalg::{CMatrix, C64};

pub fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// `L_0^{(k)}(x) .. L_{n-1}^{(k)}(x)` by the three-term recurrence.
pub fn laguerre_table(n: usize, k: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    let k = k as f64;
    out[0] = 1.0;
    if n > 1 {
        out[1] = 1.0 + k - x;
    }
    for m in 1..n.saturating_sub(1) {
        let mf = m as f64;
        out[m + 1] = ((2.0 * mf + 1.0 + k - x) * out[m] - (mf + k) * out[m - 1]) / (mf + 1.0);
    }
    out
}

/// `<m|D(β)|n>` of the untruncated displacement operator, for `m, n < dim`.
///
/// For `m >= n`: `√(n!/m!) β^{m-n} e^{-|β|²/2} L_n^{(m-n)}(|β|²)`;
/// the other triangle follows from `<m|D(β)|n> = (-1)^{n-m} conj(<n|D(β)|m>)`
/// evaluated with `m` and `n` swapped.
pub fn displacement_elements(beta: C64, dim: usize) -> CMatrix {
    let x = beta.norm_sqr();
    let r = beta.norm();
    let phase = if r > 0.0 { beta / r } else { C64::new(1.0, 0.0) };
    let mut d = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        let lag = laguerre_table(dim - k, k, x);
        for n in 0..dim - k {
            let m = n + k;
            let mag = if k == 0 {
                (-x / 2.0).exp()
            } else if r == 0.0 {
                0.0
            } else {
                (0.5 * (ln_factorial(n) - ln_factorial(m)) + k as f64 * r.ln() - x / 2.0).exp()
            };
            let v = phase.powu(k as u32) * (mag * lag[n]);
            d[(m, n)] = v;
            if k > 0 {
                // <n|D(β)|m> = <m|D(-β)|n>^* = (-1)^k conj(v)
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                d[(n, m)] = v.conj() * sign;
            }
        }
    }
    d
}
