//! k^2 from series termination, without touching the closed-form energies.
//!
//! In x = sinh(u/r) (hyperbolic) or x = cosh(u/r) (elliptic) the radial equation reads
//!   s(x) psi'' + (2 tau + 2) x psi' + [lambda + tau + 1/2 + N(x)/s(x)] psi = 0,
//! with s = x^2 + s0, N = c x - c^2 + (tau^2 - 1/4) x^2, c = m r / scale and lambda = k^2 r^2.
//! The class exponents peel off p = f1^alpha f2^beta with f1 f2 = kappa s; what is left is a
//! hypergeometric-type equation for Q whose power series is built and forced to stop at degree n.

use crate::geometry::Family;
use crate::spectra::{SolutionClass, TauSector};
use crate::{c, re, Error, Result, C64};

struct Reduced {
    /// s(x) = (x - x1)(x - x2)
    x1: C64,
    x2: C64,
    p11: C64,
    p10: C64,
    p0: C64,
}

fn reduce(class: &SolutionClass, m: f64, r: f64, scale: f64) -> Result<Reduced> {
    let tau = match class.tau_sector {
        TauSector::Minus => -0.5,
        TauSector::Plus => 0.5,
    };
    // f1 = a0 + a1 x carries alpha, f2 = b0 + b1 x carries beta
    let (a0, a1, b0, b1, kappa, s0) = match class.family {
        Family::Hyperbolic => (re(1.0), c(0.0, 1.0), re(1.0), c(0.0, -1.0), 1.0, 1.0),
        Family::Elliptic => (re(1.0), re(1.0), re(1.0), re(-1.0), -1.0, -1.0),
        f => return Err(Error::UnsupportedFamily(format!("no series reduction on {f}"))),
    };
    let (al, be) = (class.alpha_bar, class.beta_bar);
    let cc = m * r / scale;
    // p'/p = A / s with A = A0 + A1 x
    let big_a0 = (al * a1 * b0 + be * b1 * a0) * kappa;
    let big_a1 = (al * a1 * b1 + be * b1 * a1) * kappa;
    // D = A^2 + 2 tau x A + N must be a constant multiple of s
    let d2 = big_a1 * big_a1 + 2.0 * tau * big_a1 + (tau * tau - 0.25);
    let d1 = 2.0 * big_a0 * big_a1 + 2.0 * tau * big_a0 + cc;
    let d0 = big_a0 * big_a0 - cc * cc;
    let rem = d1.norm().max((d0 - s0 * d2).norm());
    let size = 1.0 + cc * cc + big_a0.norm_sqr() + big_a1.norm_sqr();
    if rem > 1e-10 * size {
        return Err(Error::NoTermination {
            degree: 0,
            reason: format!("the exponents do not reduce the equation (remainder {rem:e})"),
        });
    }
    // x1 is the zero of f2, so t = 0 there
    Ok(Reduced {
        x1: -b0 / b1,
        x2: -a0 / a1,
        p11: 2.0 * big_a1 + (2.0 * tau + 2.0),
        p10: 2.0 * big_a0,
        p0: big_a1 + (tau + 0.5) + d2,
    })
}

/// k^2 for which the reduced equation has a polynomial solution of degree n.
///
/// With t = (x - x1)/(x2 - x1) the equation for Q is hypergeometric and its series
/// c_{k+1} = c_k d_k(lambda) / ((k + 1)(k + C)) stops after degree n exactly when the
/// degree-(n+1) coefficient vanishes, d_n(lambda) = 0. The mass does not enter.
pub fn termination_oracle(
    family: Family,
    class: &SolutionClass,
    n: usize,
    m: f64,
    _mass: f64,
    r: f64,
    scale: f64,
) -> Result<C64> {
    if class.family != family {
        return Err(Error::InvalidParameter(format!("class belongs to {}, not {family}", class.family)));
    }
    if !(r > 0.0 && scale > 0.0) {
        return Err(Error::InvalidParameter(format!("r and scale must be positive, got {r}, {scale}")));
    }
    let red = reduce(class, m, r, scale)?;
    let lower_c = -(red.p11 * red.x1 + red.p10) / (red.x2 - red.x1);
    let d = |k: usize, lambda: C64| {
        let kf = k as f64;
        re(kf * (kf - 1.0)) + red.p11 * kf + red.p0 + lambda
    };
    // d_n is linear in lambda with unit slope
    let lambda = -d(n, re(0.0));
    let mut coef = re(1.0);
    let mut size = 1.0f64;
    for k in 0..=n {
        let den = (k as f64 + 1.0) * (lower_c + k as f64);
        if den.norm() <= 1e-14 * (1.0 + lower_c.norm()) {
            return Err(Error::NoTermination { degree: n, reason: format!("series pole at term {}", k + 1) });
        }
        coef = coef * d(k, lambda) / den;
        size = size.max(coef.norm());
    }
    if coef.norm() > 1e-12 * size {
        return Err(Error::NoTermination { degree: n, reason: format!("degree-{} coefficient is {coef}", n + 1) });
    }
    Ok(lambda / (r * r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{ansatz_classes, energy_elliptic, energy_hyperbolic, QuantumNumbers};

    fn k(family: Family, sector: TauSector, j: usize, m: f64, r: f64, s: f64) -> SolutionClass {
        ansatz_classes(family, sector, m, r, s).unwrap()[j]
    }

    #[test]
    fn published_examples() {
        let c1 = k(Family::Hyperbolic, TauSector::Minus, 0, 0.5, 1.0, 1.0);
        assert!(
            (termination_oracle(Family::Hyperbolic, &c1, 1, 0.5, 0.0, 1.0, 1.0).unwrap() - re(-1.0)).norm() < 1e-14
        );
        let c4 = k(Family::Hyperbolic, TauSector::Minus, 3, 0.5, 1.0, 1.0);
        assert!(
            (termination_oracle(Family::Hyperbolic, &c4, 1, 0.5, 0.0, 1.0, 1.0).unwrap() - re(-4.0)).norm() < 1e-14
        );
        // class 2 with mr/b = 1: alpha + beta = 1/2 - i
        let c2 = k(Family::Hyperbolic, TauSector::Minus, 1, 1.0, 1.0, 1.0);
        let want = -(re(1.5) - c(0.0, 1.0)).powi(2);
        assert!((termination_oracle(Family::Hyperbolic, &c2, 1, 1.0, 0.0, 1.0, 1.0).unwrap() - want).norm() < 1e-13);
    }

    #[test]
    fn matches_closed_forms() {
        for family in [Family::Hyperbolic, Family::Elliptic] {
            for sector in TauSector::BOTH {
                for j in 0..4 {
                    for n in 0..9 {
                        for m in [-0.5, 0.5, 1.5] {
                            let (r, s) = (2.0, 0.5);
                            let cl = k(family, sector, j, m, r, s);
                            let qn = QuantumNumbers::from_m(n, m).unwrap();
                            let e = match family {
                                Family::Hyperbolic => energy_hyperbolic(qn, &cl, 0.0, r, s).0.value,
                                _ => energy_elliptic(qn, &cl, 0.0, r, s).0.value,
                            };
                            let got = termination_oracle(family, &cl, n, m, 0.0, r, s).unwrap();
                            assert!(
                                (got - e * e).norm() <= 1e-10 * (e * e).norm().max(1.0 / (r * r)),
                                "{family} {sector} {j} {n} {m}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lower_parameter_agrees_with_wavefunction() {
        for family in [Family::Hyperbolic, Family::Elliptic] {
            for sector in TauSector::BOTH {
                for j in 0..4 {
                    let cl = k(family, sector, j, 1.5, 2.0, 0.5);
                    let red = reduce(&cl, 1.5, 2.0, 0.5).unwrap();
                    let lower_c = -(red.p11 * red.x1 + red.p10) / (red.x2 - red.x1);
                    assert!((lower_c - cl.hyp_c()).norm() < 1e-13, "{family} {sector} {j}");
                }
            }
        }
    }

    #[test]
    fn rejects_exponents_that_do_not_reduce() {
        let mut cl = k(Family::Hyperbolic, TauSector::Minus, 0, 0.5, 1.0, 1.0);
        cl.alpha_bar += 0.3;
        assert!(matches!(
            termination_oracle(Family::Hyperbolic, &cl, 2, 0.5, 0.0, 1.0, 1.0),
            Err(Error::NoTermination { .. })
        ));
        assert!(termination_oracle(Family::Elliptic, &cl, 2, 0.5, 0.0, 1.0, 1.0).is_err());
    }
}
