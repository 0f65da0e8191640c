//! Closed-form spectra of the reduced Dirac equation on the wormhole families.

mod wavefunction;

pub use wavefunction::{
    psi1, psi1_beltrami, psi1_elliptic, psi1_hyperbolic, psi2_from_psi1, psi2_jet, LowerComponent, WavefunctionSpec,
};

use std::fmt;

use serde::Serialize;

use crate::geometry::{Family, MeridianProfile};
use crate::nu::{nu_solve_energy, Axis, NuProblem, SearchSegment, SqrtBranch};
use crate::{c, canon, csqrt, re, Error, Result, C64};

/// Non-minimal coupling constants; only their product enters through tau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LsvCoupling {
    pub lambda: C64,
    pub kdb21: C64,
    pub b0: C64,
}

impl LsvCoupling {
    pub fn tau(&self) -> C64 {
        tau_from_coupling(self)
    }
}

pub fn tau_from_coupling(cp: &LsvCoupling) -> C64 {
    canon(c(0.0, -1.0) * cp.lambda * cp.kdb21 * cp.b0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TauSector {
    #[serde(rename = "-1/2")]
    Minus,
    #[serde(rename = "+1/2")]
    Plus,
}

impl TauSector {
    pub const BOTH: [TauSector; 2] = [TauSector::Minus, TauSector::Plus];

    pub fn value(self) -> f64 {
        match self {
            TauSector::Minus => -0.5,
            TauSector::Plus => 0.5,
        }
    }

    pub fn tau(self) -> C64 {
        re(self.value())
    }

    /// The closed forms exist only within 1e-12 of tau = -1/2 or +1/2.
    pub fn from_tau(tau: C64) -> Result<Self> {
        if (tau - 0.5).norm() < 1e-12 {
            Ok(TauSector::Plus)
        } else if (tau + 0.5).norm() < 1e-12 {
            Ok(TauSector::Minus)
        } else {
            Err(Error::TauOutOfSector(format!("{tau}")))
        }
    }
}

impl fmt::Display for TauSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TauSector::Minus => "-0.5",
            TauSector::Plus => "0.5",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuantumNumbers {
    pub n: usize,
    pub ell: i64,
}

impl QuantumNumbers {
    pub fn new(n: usize, ell: i64) -> Self {
        Self { n, ell }
    }

    /// From a half-integer m.
    pub fn from_m(n: usize, m: f64) -> Result<Self> {
        let ell = m - 0.5;
        if ell.fract() != 0.0 || !ell.is_finite() {
            return Err(Error::InvalidParameter(format!("m = {m} is not a half-integer")));
        }
        Ok(Self { n, ell: ell as i64 })
    }

    pub fn m(&self) -> f64 {
        self.ell as f64 + 0.5
    }
}

/// One of the four ansatz exponent pairs of a tau-sector.
///
/// Every exponent has the form `a0 + s h` with `h = i m r / (2 scale)` (hyperbolic)
/// or `h = m r / (2 scale)` (elliptic); keeping that form lets the exponent sum be
/// computed the same way for classes that share it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolutionClass {
    pub jmath: u8,
    pub tau_sector: TauSector,
    pub family: Family,
    pub alpha_bar: C64,
    pub beta_bar: C64,
    #[serde(skip)]
    sigma_eff: C64,
}

impl SolutionClass {
    /// alpha + beta for tau = -1/2, 1 + alpha + beta for tau = +1/2.
    pub fn sigma_eff(&self) -> C64 {
        self.sigma_eff
    }

    /// Lower parameter of the regular hypergeometric factor.
    pub fn hyp_c(&self) -> C64 {
        let shift = match self.tau_sector {
            TauSector::Minus => 0.5,
            TauSector::Plus => 1.5,
        };
        re(shift) + 2.0 * self.beta_bar
    }
}

// (a0, s_a, b0, s_b) per class
const MINUS_TABLE: [(f64, f64, f64, f64); 4] =
    [(0.0, -1.0, 0.0, 1.0), (0.0, -1.0, 0.5, -1.0), (0.5, 1.0, 0.0, 1.0), (0.5, 1.0, 0.5, -1.0)];
const PLUS_TABLE: [(f64, f64, f64, f64); 4] =
    [(0.0, 1.0, 0.0, -1.0), (0.0, 1.0, -0.5, 1.0), (-0.5, -1.0, 0.0, -1.0), (-0.5, -1.0, -0.5, 1.0)];

fn closed_form_family(family: Family) -> Result<()> {
    match family {
        Family::Hyperbolic | Family::Elliptic => Ok(()),
        f => Err(Error::UnsupportedFamily(format!("ansatz classes exist for hyperbolic and elliptic, not {f}"))),
    }
}

/// The four exponent pairs for a family and tau-sector.
pub fn ansatz_classes(family: Family, sector: TauSector, m: f64, r: f64, scale: f64) -> Result<[SolutionClass; 4]> {
    closed_form_family(family)?;
    let half = m * r / (2.0 * scale);
    let h = match family {
        Family::Hyperbolic => c(0.0, half),
        _ => re(half),
    };
    let (table, shift) = match sector {
        TauSector::Minus => (MINUS_TABLE, 0.0),
        TauSector::Plus => (PLUS_TABLE, 1.0),
    };
    let mut out = [SolutionClass {
        jmath: 0,
        tau_sector: sector,
        family,
        alpha_bar: re(0.0),
        beta_bar: re(0.0),
        sigma_eff: re(0.0),
    }; 4];
    for (j, &(a0, sa, b0, sb)) in table.iter().enumerate() {
        let s = sa + sb;
        let rational = re(shift + a0 + b0);
        out[j] = SolutionClass {
            jmath: j as u8 + 1,
            tau_sector: sector,
            family,
            alpha_bar: canon(re(a0) + h * sa),
            beta_bar: canon(re(b0) + h * sb),
            sigma_eff: if s == 0.0 { rational } else { canon(rational + h * s) },
        };
    }
    Ok(out)
}

/// Residuals of the two quadratic conditions that make the ansatz reduce to a hypergeometric equation.
pub fn ansatz_residual(class: &SolutionClass, m: f64, r: f64, scale: f64) -> [C64; 2] {
    let cc = re(m * r / scale);
    let (a, b) = (class.alpha_bar, class.beta_bar);
    let i = c(0.0, 1.0);
    let (a2, b2) = (a * a, b * b);
    match (class.family, class.tau_sector) {
        (Family::Elliptic, TauSector::Minus) => [cc + a - 2.0 * a2 - b + 2.0 * b2, 2.0 * (a2 + b2) - a - b - cc * cc],
        (Family::Elliptic, TauSector::Plus) => [cc - a - 2.0 * a2 + b + 2.0 * b2, 2.0 * (a2 + b2) + a + b - cc * cc],
        (_, TauSector::Minus) => [cc - i * a + 2.0 * i * a2 + i * b - 2.0 * i * b2, -cc * cc - 2.0 * (a2 + b2) + a + b],
        (_, TauSector::Plus) => [cc + i * a + 2.0 * i * a2 - i * b - 2.0 * i * b2, -cc * cc - 2.0 * (a2 + b2) - a - b],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyLevel {
    pub value: C64,
    pub branch: Branch,
    pub family: Family,
    pub class: Option<SolutionClass>,
    pub qn: QuantumNumbers,
    pub annotations: Vec<String>,
}

fn level_pair(
    plus: C64,
    family: Family,
    class: Option<SolutionClass>,
    qn: QuantumNumbers,
) -> (EnergyLevel, EnergyLevel) {
    let mut notes = Vec::new();
    if qn.n == 0 && class.is_some() {
        notes.push("n = 0 lies below the published range n = 1, 2, 3, ...".to_string());
    }
    let mk = |value: C64, branch| EnergyLevel { value, branch, family, class, qn, annotations: notes.clone() };
    (mk(canon(plus), Branch::Plus), mk(canon(-plus), Branch::Minus))
}

fn closed_form_energy(
    family: Family,
    qn: QuantumNumbers,
    class: &SolutionClass,
    mass: f64,
    r: f64,
) -> (EnergyLevel, EnergyLevel) {
    let n = qn.n as f64;
    let s = class.sigma_eff();
    let radicand = re(n * n - mass * mass * r * r) + 2.0 * n * s + s * s;
    let e = c(0.0, 1.0 / r) * csqrt(radicand);
    level_pair(e, family, Some(*class), qn)
}

/// E = +-(i/r) sqrt(n^2 - M^2 r^2 + 2 n s + s^2) with s the class exponent sum.
pub fn energy_hyperbolic(
    qn: QuantumNumbers,
    class: &SolutionClass,
    mass: f64,
    r: f64,
    _b2: f64,
) -> (EnergyLevel, EnergyLevel) {
    closed_form_energy(Family::Hyperbolic, qn, class, mass, r)
}

pub fn energy_elliptic(
    qn: QuantumNumbers,
    class: &SolutionClass,
    mass: f64,
    r: f64,
    _b1: f64,
) -> (EnergyLevel, EnergyLevel) {
    closed_form_energy(Family::Elliptic, qn, class, mass, r)
}

/// The published Beltrami energy formula, evaluated literally on principal branches.
pub fn energy_beltrami_paper(qn: QuantumNumbers, mass: f64, r: f64) -> (EnergyLevel, EnergyLevel) {
    let n = qn.n as f64;
    let m = qn.m();
    let num = (1.0 + 2.0 * n) * m.abs() * r - m * r * (1.0 + 2.0 * n + 2.0 * n * n - 2.0 * mass * mass * r * r);
    let den = csqrt(re(2.0 * m)) * r.powf(1.5);
    let e = csqrt(re(num) / den);
    level_pair(e, Family::Beltrami, None, qn)
}

/// NU form of the Beltrami equation in q = exp(-u/r) at trial energy E.
pub fn beltrami_nu_problem(energy: C64, m: f64, mass: f64, r: f64, b: f64, tau: C64) -> NuProblem {
    let k2r2 = (energy * energy - mass * mass) * (r * r);
    let g = m * r / b;
    let t = tau + 0.5;
    NuProblem { d1: -2.0 * tau, d2: re(0.0), d3: re(0.0), z1: re(g * g), z2: re(g), z3: -k2r2 - t * t }
}

/// Energy search window for the Beltrami NU condition.
pub fn beltrami_search_bound(n: usize, mass: f64, r: f64) -> f64 {
    2.0 * (mass.abs() + (2.0 * n as f64 + 2.0) / r) + 1.0
}

/// Beltrami energies from the NU quantization condition, solved numerically.
///
/// The decaying Laguerre solution requires the negated root of Delta_8, which is
/// the branch used here.
pub fn energy_beltrami_nu(
    qn: QuantumNumbers,
    mass: f64,
    r: f64,
    b: f64,
    sector: TauSector,
) -> Result<(EnergyLevel, EnergyLevel)> {
    let m = qn.m();
    if m == 0.0 {
        return Err(Error::InvalidParameter("m must be nonzero".into()));
    }
    let tau = sector.tau();
    let bound = beltrami_search_bound(qn.n, mass, r);
    let segments = [
        SearchSegment { axis: Axis::Real, lo: -bound, hi: bound, nodes: 401 },
        SearchSegment { axis: Axis::Imaginary, lo: -bound, hi: bound, nodes: 401 },
    ];
    let roots = nu_solve_energy(|e| beltrami_nu_problem(e, m, mass, r, b, tau), qn.n, &segments, SqrtBranch::Negated)?;
    let best = roots
        .iter()
        .copied()
        .max_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
        .ok_or_else(|| Error::RootNotBracketed("no Beltrami root".into()))?;
    Ok(level_pair(best, Family::Beltrami, None, qn))
}

/// B(u) = B0 R'(u) / R(u).
pub fn magnetic_profile(profile: &MeridianProfile, b0: f64, u: f64) -> Result<f64> {
    let mer = profile.eval(u);
    if mer.r.abs() < 1e-14 {
        return Err(Error::ThroatSingularity { u, radius: mer.r });
    }
    Ok(b0 * mer.r1 / mer.r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn classes(f: Family, s: TauSector, m: f64, r: f64, b: f64) -> [SolutionClass; 4] {
        ansatz_classes(f, s, m, r, b).unwrap()
    }

    #[test]
    fn tau_examples() {
        let cp = |p: C64| LsvCoupling { lambda: p, kdb21: re(1.0), b0: re(1.0) };
        assert_eq!(cp(re(0.0)).tau(), re(0.0));
        assert_eq!(cp(c(0.0, 0.5)).tau(), re(0.5));
        assert_eq!(cp(c(0.0, -0.5)).tau(), re(-0.5));
        assert_eq!(TauSector::from_tau(cp(c(0.0, 0.5)).tau()).unwrap(), TauSector::Plus);
        assert!(matches!(TauSector::from_tau(re(0.3)), Err(Error::TauOutOfSector(_))));
    }

    #[test]
    fn class_examples() {
        let h = classes(Family::Hyperbolic, TauSector::Minus, 0.5, 1.0, 1.0);
        assert_eq!(h[0].alpha_bar, c(0.0, -0.25));
        assert_eq!(h[0].beta_bar, c(0.0, 0.25));
        assert_eq!(h[0].alpha_bar + h[0].beta_bar, re(0.0));
        assert_eq!(h[3].alpha_bar + h[3].beta_bar, re(1.0));
        let e = classes(Family::Elliptic, TauSector::Minus, 0.5, 1.0, 0.5);
        assert_eq!((e[0].alpha_bar, e[0].beta_bar), (re(-0.5), re(0.5)));
        assert!(ansatz_classes(Family::Beltrami, TauSector::Minus, 0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn hyperbolic_energy_examples() {
        let qn = QuantumNumbers::new(1, 0);
        let k = classes(Family::Hyperbolic, TauSector::Minus, qn.m(), 1.0, 1.0);
        let (p, m) = energy_hyperbolic(qn, &k[0], 0.0, 1.0, 1.0);
        assert_eq!((p.value, m.value), (c(0.0, 1.0), c(0.0, -1.0)));
        let (p, _) = energy_hyperbolic(QuantumNumbers::new(2, 0), &k[0], 2.0, 1.0, 1.0);
        assert_eq!(p.value, re(0.0));
        let k = classes(Family::Hyperbolic, TauSector::Minus, 0.5, 1.0, 0.5);
        let (p, _) = energy_hyperbolic(qn, &k[1], 0.0, 1.0, 0.5);
        let expect = c(0.0, 0.5) * csqrt(c(5.0, -12.0));
        assert!((p.value - expect).norm() < 1e-15);
    }

    #[test]
    fn elliptic_energy_examples() {
        let qn = QuantumNumbers::new(1, 0);
        let k = classes(Family::Elliptic, TauSector::Minus, 0.5, 1.0, 0.5);
        assert_eq!(energy_elliptic(qn, &k[0], 0.0, 1.0, 0.5).0.value, c(0.0, 1.0));
        let e = energy_elliptic(qn, &k[1], 0.0, 1.0, 0.5).0.value;
        assert!((e - c(0.0, 0.5)).norm() < 1e-15);
        let kp = classes(Family::Elliptic, TauSector::Plus, 0.5, 1.0, 0.5);
        for n in 0..5 {
            let q = QuantumNumbers::new(n, 0);
            assert_eq!(
                energy_elliptic(q, &kp[0], 1.0, 1.0, 0.5).0.value,
                energy_elliptic(q, &k[3], 1.0, 1.0, 0.5).0.value
            );
        }
    }

    #[test]
    fn n_zero_is_flagged() {
        let k = classes(Family::Hyperbolic, TauSector::Minus, 0.5, 1.0, 1.0);
        let (p, _) = energy_hyperbolic(QuantumNumbers::new(0, 0), &k[0], 1.0, 1.0, 1.0);
        assert_eq!(p.annotations.len(), 1);
        let (p, _) = energy_hyperbolic(QuantumNumbers::new(1, 0), &k[0], 1.0, 1.0, 1.0);
        assert!(p.annotations.is_empty());
    }

    #[test]
    fn beltrami_printed_formula_examples() {
        let qn = QuantumNumbers::new(0, 0);
        assert_eq!(energy_beltrami_paper(qn, 0.0, 1.0).0.value, re(0.0));
        // direct substitution: numerator 1/2 + 1/2 = 1, denominator 1
        let (p, m) = energy_beltrami_paper(qn, 1.0, 1.0);
        assert_eq!((p.value, m.value), (re(1.0), re(-1.0)));
        // m < 0: numerator -3 over sqrt(-1) = i gives sqrt(3i)
        let (p, _) = energy_beltrami_paper(QuantumNumbers::new(0, -1), 2.0, 1.0);
        assert!((p.value - csqrt(c(0.0, 3.0))).norm() < 1e-15, "{}", p.value);
    }

    #[test]
    fn beltrami_nu_examples() {
        let (p, m) = energy_beltrami_nu(QuantumNumbers::new(1, 0), 2.0, 1.0, 1.0, TauSector::Minus).unwrap();
        assert!((p.value - re(3f64.sqrt())).norm() < 1e-12, "{}", p.value);
        assert_eq!(m.value, -p.value);
        let (p, _) = energy_beltrami_nu(QuantumNumbers::new(0, 0), 1.0, 1.0, 1.0, TauSector::Minus).unwrap();
        assert!((p.value - re(1.0)).norm() < 1e-12);
        // m < 0 shifts the level by one: (M^2 - E^2) r^2 = (n + 1)^2
        let (p, _) = energy_beltrami_nu(QuantumNumbers::new(1, -1), 3.0, 1.0, 0.5, TauSector::Plus).unwrap();
        assert!((p.value - re(5f64.sqrt())).norm() < 1e-12);
        // levels above the mass gap turn imaginary
        let (p, _) = energy_beltrami_nu(QuantumNumbers::new(3, 0), 1.0, 1.0, 1.0, TauSector::Minus).unwrap();
        assert!((p.value - c(0.0, 8f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn magnetic_examples() {
        let h = MeridianProfile::hyperbolic(1.0, 1.0).unwrap();
        assert_eq!(magnetic_profile(&h, 3.0, 0.0).unwrap(), 0.0);
        let b = MeridianProfile::beltrami(1.3, 1.0).unwrap();
        assert!((magnetic_profile(&b, 2.0, -0.7).unwrap() - 2.0).abs() < 1e-15);
        let e = MeridianProfile::elliptic(0.5, 1.0).unwrap();
        assert!(matches!(magnetic_profile(&e, 1.0, 0.0), Err(Error::ThroatSingularity { .. })));
    }

    fn half_integer() -> impl Strategy<Value = f64> {
        (-4i64..4).prop_map(|l| l as f64 + 0.5)
    }

    proptest! {
        #[test]
        fn classes_solve_their_quadratics(fi in 0usize..2, si in 0usize..2, m in half_integer(), r in 0.5f64..3.0, frac in 0.1f64..0.95) {
            let family = [Family::Hyperbolic, Family::Elliptic][fi];
            let scale = frac * r;
            for k in classes(family, TauSector::BOTH[si], m, r, scale) {
                for res in ansatz_residual(&k, m, r, scale) {
                    prop_assert!(res.norm() < 1e-12, "{family} {:?} class {} residual {res}", k.tau_sector, k.jmath);
                }
            }
        }

        #[test]
        fn branches_cancel(n in 0usize..9, m in half_integer(), mass in 0.0f64..3.0, r in 0.5f64..3.0, j in 0usize..4) {
            let k = classes(Family::Hyperbolic, TauSector::Plus, m, r, 0.7);
            let (p, q) = energy_hyperbolic(QuantumNumbers::from_m(n, m).unwrap(), &k[j], mass, r, 0.7);
            prop_assert_eq!(p.value + q.value, re(0.0));
        }

        #[test]
        fn classes_one_and_four_ignore_m(n in 0usize..9, mass in 0.0f64..3.0, r in 0.5f64..3.0, fi in 0usize..2, si in 0usize..2) {
            let family = [Family::Hyperbolic, Family::Elliptic][fi];
            let sector = TauSector::BOTH[si];
            let e = |m: f64, j: usize| {
                let k = classes(family, sector, m, r, 0.4 * r);
                closed_form_energy(family, QuantumNumbers::from_m(n, m).unwrap(), &k[j], mass, r).0.value
            };
            for j in [0usize, 3] {
                let base = e(0.5, j);
                for m in [-0.5, 1.5, -1.5, 2.5] {
                    prop_assert_eq!(e(m, j), base);
                }
            }
        }

        #[test]
        fn beltrami_printed_formula_real_iff_condition(n in 0usize..6, l in 0i64..4, mass in 0.0f64..3.0, r in 0.3f64..3.0) {
            let qn = QuantumNumbers::new(n, l);
            let (m, nf) = (qn.m(), n as f64);
            let lhs = (1.0 + 2.0 * nf) * m.abs() * r + 2.0 * mass * mass * m * r.powi(3);
            let rhs = m * r * (1.0 + 2.0 * nf + 2.0 * nf * nf);
            prop_assume!((lhs - rhs).abs() > 1e-9 * lhs.abs().max(1.0));
            let e = energy_beltrami_paper(qn, mass, r).0.value;
            prop_assert_eq!(e.im == 0.0, lhs >= rhs);
        }
    }
}
