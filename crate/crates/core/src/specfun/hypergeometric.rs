use crate::{Error, Result, C64};

use super::poly_eval3;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Coefficients of the terminating series 2F1(-n, b; c; x) in powers of x.
pub fn hyp2f1_poly_coefficients(n: usize, b: C64, c: C64) -> Result<Vec<C64>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut t = one();
    out.push(t);
    for k in 0..n {
        let k_f = k as f64;
        let den = (c + k_f) * (k_f + 1.0);
        if den.norm() == 0.0 {
            return Err(Error::PochhammerPole { c: format!("{c}"), k });
        }
        t = t * (k_f - n as f64) * (b + k_f) / den;
        out.push(t);
    }
    Ok(out)
}

/// 2F1(-n, b; c; x) as an exactly terminating sum.
pub fn hyp2f1_poly(n: usize, b: C64, c: C64, x: C64) -> Result<C64> {
    Ok(hyp2f1_poly_jet(n, b, c, x)?[0])
}

/// Value and first two x-derivatives of 2F1(-n, b; c; x).
pub fn hyp2f1_poly_jet(n: usize, b: C64, c: C64, x: C64) -> Result<[C64; 3]> {
    let coeffs = hyp2f1_poly_coefficients(n, b, c)?;
    Ok(poly_eval3(&coeffs, x))
}

const SERIES_CAP: usize = 20_000;

/// Value and first two derivatives of the convergent Gauss series 2F1(a, b; c; x), |x| < 1.
pub fn hyp2f1_series_jet(a: C64, b: C64, c: C64, x: C64) -> Result<[C64; 3]> {
    if x.norm() >= 1.0 {
        return Err(Error::DomainError(format!("Gauss series needs |x| < 1, got |x| = {}", x.norm())));
    }
    let zero = C64::new(0.0, 0.0);
    let mut sums = [zero; 3];
    // term_k = (a)_k (b)_k / ((c)_k k!) x^k, with the derivative series built from the same coefficients
    let mut coef = one();
    let mut xp = [one(), zero, zero]; // x^k, x^(k-1), x^(k-2)
    for k in 0..SERIES_CAP {
        let k_f = k as f64;
        let t0 = coef * xp[0];
        let t1 = coef * k_f * xp[1];
        let t2 = coef * k_f * (k_f - 1.0) * xp[2];
        sums[0] += t0;
        sums[1] += t1;
        sums[2] += t2;
        let small = |t: C64, s: C64| t.norm() <= f64::EPSILON * s.norm().max(f64::MIN_POSITIVE);
        if k > 2 && small(t0, sums[0]) && small(t1, sums[1]) && small(t2, sums[2]) {
            return Ok(sums);
        }
        let den = (c + k_f) * (k_f + 1.0);
        if den.norm() == 0.0 {
            return Err(Error::PochhammerPole { c: format!("{c}"), k });
        }
        coef = coef * (a + k_f) * (b + k_f) / den;
        if coef.norm() == 0.0 {
            return Ok(sums);
        }
        xp = [xp[0] * x, xp[0], xp[1]];
    }
    Err(Error::NoConvergence { what: "Gauss hypergeometric series", iterations: SERIES_CAP })
}
