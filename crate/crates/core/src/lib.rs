//! Geometry, closed-form Dirac spectra and residual verification for
//! neutral fermions on constant-curvature wormhole surfaces.
// `!(a <= b)` is used on purpose so that NaN falls into the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod jet;
pub mod nu;
pub mod specfun;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Principal square root with a signed-zero imaginary part treated as +0.
pub fn csqrt(z: C64) -> C64 {
    canon(z).sqrt()
}

/// Principal logarithm, same signed-zero convention as [`csqrt`].
pub fn cln(z: C64) -> C64 {
    canon(z).ln()
}

/// Principal power `z^w`. `0^w` is 0 for Re w > 0 and 1 for w = 0.
pub fn cpow(z: C64, w: C64) -> C64 {
    if z == C64::new(0.0, 0.0) {
        return if w == C64::new(0.0, 0.0) { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    }
    (w * cln(z)).exp()
}

/// Shortest decimal that parses back to the same f64; integers carry no ".0" and zero is unsigned.
pub fn fmt_shortest(x: f64) -> String {
    let s = format!("{:?}", x + 0.0);
    match s.strip_suffix(".0") {
        Some(t) => t.to_string(),
        None => s,
    }
}

#[inline]
pub(crate) fn canon(z: C64) -> C64 {
    C64::new(z.re + 0.0, z.im + 0.0)
}

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_formatting() {
        assert_eq!(fmt_shortest(0.0), "0");
        assert_eq!(fmt_shortest(-0.0), "0");
        assert_eq!(fmt_shortest(1.0), "1");
        assert_eq!(fmt_shortest(-0.5), "-0.5");
        assert_eq!(fmt_shortest(1e-10), "1e-10");
        assert_eq!(fmt_shortest(4.032021265456149e-20), "4.032021265456149e-20");
        assert_eq!(fmt_shortest(1e20), "1e20");
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 123456.789] {
            assert_eq!(fmt_shortest(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn negative_zero_imag_lands_on_upper_side() {
        let z = C64::new(-4.0, -0.0);
        assert_eq!(csqrt(z), C64::new(0.0, 2.0));
        assert!((cln(z).im - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn power_of_zero() {
        assert_eq!(cpow(re(0.0), re(0.5)), re(0.0));
        assert_eq!(cpow(re(0.0), re(0.0)), re(1.0));
        let v = cpow(re(-2.0), re(0.5));
        assert!((v - c(0.0, 2f64.sqrt())).norm() < 1e-15);
    }
}
