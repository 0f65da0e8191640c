use crate::{Error, Result, C64};

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Generalized Laguerre polynomial L_n^alpha(x) by forward recurrence in n.
pub fn laguerre(n: usize, alpha: C64, x: C64) -> C64 {
    let mut prev = one();
    if n == 0 {
        return prev;
    }
    let mut cur = one() + alpha - x;
    for k in 1..n {
        let k_f = k as f64;
        let next = ((2.0 * k_f + 1.0 + alpha - x) * cur - (k_f + alpha) * prev) / (k_f + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// L_n^alpha with its first two x-derivatives.
pub fn laguerre_jet(n: usize, alpha: C64, x: C64) -> [C64; 3] {
    let zero = C64::new(0.0, 0.0);
    let d1 = if n >= 1 { -laguerre(n - 1, alpha + 1.0, x) } else { zero };
    let d2 = if n >= 2 { laguerre(n - 2, alpha + 2.0, x) } else { zero };
    [laguerre(n, alpha, x), d1, d2]
}

/// Jacobi polynomial P_n^(alpha, beta)(x) by the three-term recurrence.
pub fn jacobi_poly(n: usize, alpha: C64, beta: C64, x: C64) -> Result<C64> {
    let mut prev = one();
    if n == 0 {
        return Ok(prev);
    }
    let ab = alpha + beta;
    let mut cur = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) * 0.5;
    for k in 2..=n {
        let k_f = k as f64;
        let s = 2.0 * k_f + ab;
        let den = 2.0 * k_f * (k_f + ab) * (s - 2.0);
        if den.norm() == 0.0 {
            return Err(Error::RecurrenceBreakdown { degree: k });
        }
        let a1 = (s - 1.0) * (s * (s - 2.0) * x + alpha * alpha - beta * beta);
        let a2 = 2.0 * (k_f + alpha - 1.0) * (k_f + beta - 1.0) * s;
        let next = (a1 * cur - a2 * prev) / den;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// P_n^(alpha, beta) with its first two x-derivatives.
pub fn jacobi_poly_jet(n: usize, alpha: C64, beta: C64, x: C64) -> Result<[C64; 3]> {
    let zero = C64::new(0.0, 0.0);
    let lead = alpha + beta + n as f64 + 1.0;
    let d1 = if n >= 1 { lead * 0.5 * jacobi_poly(n - 1, alpha + 1.0, beta + 1.0, x)? } else { zero };
    let d2 = if n >= 2 { lead * (lead + 1.0) * 0.25 * jacobi_poly(n - 2, alpha + 2.0, beta + 2.0, x)? } else { zero };
    Ok([jacobi_poly(n, alpha, beta, x)?, d1, d2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::hyp2f1_poly;
    use crate::{c, re};

    #[test]
    fn laguerre_low_degrees() {
        assert_eq!(laguerre(0, c(3.0, 2.0), c(1.0, 1.0)), re(1.0));
        assert!((laguerre(1, re(2.0), re(1.0)) - re(2.0)).norm() < 1e-15);
        assert!((laguerre(2, re(0.0), re(0.0)) - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn laguerre_at_origin_is_binomial() {
        // L_n^a(0) = (a+1)_n / n!
        let a = c(0.7, -0.4);
        let mut expect = re(1.0);
        for k in 0..6 {
            expect = expect * (a + 1.0 + k as f64) / (k as f64 + 1.0);
        }
        assert!((laguerre(6, a, re(0.0)) - expect).norm() < 1e-12);
    }

    #[test]
    fn laguerre_ode() {
        let (n, a) = (5usize, c(1.3, 0.6));
        for &x in &[0.2, 1.1, 3.7] {
            let [y, y1, y2] = laguerre_jet(n, a, re(x));
            let r = re(x) * y2 + (a + 1.0 - x) * y1 + re(n as f64) * y;
            assert!(r.norm() < 1e-10 * y.norm().max(1.0), "residual {r}");
        }
    }

    #[test]
    fn jacobi_low_degrees() {
        let (a, b, x) = (c(0.5, 1.0), c(-0.3, 0.2), c(0.4, -0.1));
        assert_eq!(jacobi_poly(0, a, b, x).unwrap(), re(1.0));
        let p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
        assert!((jacobi_poly(1, a, b, x).unwrap() - p1).norm() < 1e-15);
        assert!((jacobi_poly(2, re(0.0), re(0.0), re(1.0)).unwrap() - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn jacobi_matches_hypergeometric_form() {
        let (a, b, x) = (c(0.5, 1.0), c(-0.3, 0.2), c(0.4, -0.1));
        for n in 0..7usize {
            let mut poch = re(1.0);
            for k in 0..n {
                poch = poch * (a + 1.0 + k as f64) / (k as f64 + 1.0);
            }
            let f = poch * hyp2f1_poly(n, a + b + n as f64 + 1.0, a + 1.0, (re(1.0) - x) / 2.0).unwrap();
            let p = jacobi_poly(n, a, b, x).unwrap();
            assert!((p - f).norm() < 1e-12 * f.norm().max(1.0), "n={n}");
        }
    }

    #[test]
    fn jacobi_ode() {
        let (n, a, b) = (4usize, c(0.5, 1.0), c(1.3, -0.2));
        let x = c(0.2, 0.3);
        let [y, y1, y2] = jacobi_poly_jet(n, a, b, x).unwrap();
        let r = (re(1.0) - x * x) * y2 + (b - a - (a + b + 2.0) * x) * y1 + re(n as f64) * (a + b + n as f64 + 1.0) * y;
        assert!(r.norm() < 1e-10 * y.norm().max(1.0));
    }

    #[test]
    fn jacobi_breakdown() {
        // alpha + beta = -2 makes the degree-2 denominator vanish
        let e = jacobi_poly(2, re(-1.0), re(-1.0), re(0.3)).unwrap_err();
        assert_eq!(e, Error::RecurrenceBreakdown { degree: 2 });
    }
}
