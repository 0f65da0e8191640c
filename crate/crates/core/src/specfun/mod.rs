//! Special functions used by the spectra and the geometry.

pub mod elliptic;
pub mod hypergeometric;
pub mod orthopoly;
pub mod quadrature;

pub use elliptic::{carlson_rd, carlson_rf, ellip_e_inc, ellip_f_inc};
pub use hypergeometric::{hyp2f1_poly, hyp2f1_poly_coefficients, hyp2f1_poly_jet, hyp2f1_series_jet};
pub use orthopoly::{jacobi_poly, jacobi_poly_jet, laguerre, laguerre_jet};
pub use quadrature::{adaptive_quad, adaptive_quad_with_nodes, QuadResult};

use crate::C64;

/// Evaluate a polynomial with its first two derivatives (Horner).
pub(crate) fn poly_eval3(coeffs: &[C64], x: C64) -> [C64; 3] {
    let zero = C64::new(0.0, 0.0);
    let (mut p, mut d, mut dd) = (zero, zero, zero);
    for &a in coeffs.iter().rev() {
        dd = dd * x + 2.0 * d;
        d = d * x + p;
        p = p * x + a;
    }
    [p, d, dd]
}
