use crate::geometry::{Family, MeridianProfile};
use crate::jet::{Jet, RadialFunction};
use crate::specfun::{hyp2f1_poly_jet, hyp2f1_series_jet, laguerre_jet};
use crate::{csqrt, re, Error, Result, C64};

use super::{QuantumNumbers, SolutionClass, TauSector};

/// Everything needed to evaluate the upper spinor component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionSpec {
    pub profile: MeridianProfile,
    /// Required for hyperbolic and elliptic, ignored for Beltrami.
    pub class: Option<SolutionClass>,
    pub qn: QuantumNumbers,
    pub tau: C64,
    pub mass: f64,
    pub energy: C64,
    pub c1: C64,
    pub c2: C64,
}

impl WavefunctionSpec {
    pub fn new(
        profile: MeridianProfile,
        class: Option<SolutionClass>,
        qn: QuantumNumbers,
        tau: C64,
        mass: f64,
        energy: C64,
    ) -> Self {
        Self { profile, class, qn, tau, mass, energy, c1: re(1.0), c2: re(0.0) }
    }

    pub fn with_coefficients(mut self, c1: C64, c2: C64) -> Self {
        self.c1 = c1;
        self.c2 = c2;
        self
    }

    fn class_for(&self, family: Family) -> Result<SolutionClass> {
        if self.profile.family != family {
            return Err(Error::UnsupportedFamily(format!(
                "{} wavefunction on a {} profile",
                family, self.profile.family
            )));
        }
        let k = self
            .class
            .ok_or_else(|| Error::InvalidParameter(format!("{family} wavefunction needs a solution class")))?;
        if k.family != family {
            return Err(Error::InvalidParameter(format!("class belongs to {}, profile is {family}", k.family)));
        }
        let sector = TauSector::from_tau(self.tau)?;
        if sector != k.tau_sector {
            return Err(Error::InvalidParameter(format!(
                "tau = {} does not match the class sector {}",
                self.tau, k.tau_sector
            )));
        }
        Ok(k)
    }
}

fn is_integer(w: C64) -> bool {
    w.im == 0.0 && w.re.fract() == 0.0
}

/// Principal power of a jet, refusing a base on the closed negative real axis.
fn guarded_pow(base: Jet, w: C64) -> Result<Jet> {
    let b = base.v;
    if b.im == 0.0 && b.re <= 0.0 && !is_integer(w) {
        return Err(Error::BranchCutHit { base: format!("{b}"), exponent: format!("{w}") });
    }
    Ok(base.powc(w))
}

/// Q(t) = c1 2F1(-n, n + 2s; C; t) + c2 t^(1-C) 2F1(-n - C + 1, n + 2s - C + 1; 2 - C; t).
fn hyp_combination(class: &SolutionClass, n: usize, c1: C64, c2: C64, t: Jet) -> Result<Jet> {
    let b = re(n as f64) + 2.0 * class.sigma_eff();
    let cc = class.hyp_c();
    let mut q = Jet::zero();
    if c1 != re(0.0) {
        q = t.compose(hyp2f1_poly_jet(n, b, cc, t.v)?).scale(c1);
    }
    if c2 != re(0.0) {
        let a = re(-(n as f64));
        let f2 = t.compose(hyp2f1_series_jet(a - cc + 1.0, b - cc + 1.0, re(2.0) - cc, t.v)?);
        let pre = t.powc(re(1.0) - cc);
        q = q + (pre * f2).scale(c2);
    }
    Ok(q)
}

fn hyperbolic_jet(spec: &WavefunctionSpec, u: f64) -> Result<Jet> {
    let k = spec.class_for(Family::Hyperbolic)?;
    let r = spec.profile.r;
    let (sh, ch) = ((u / r).sinh(), (u / r).cosh());
    // S = iX with X = sinh(u/r)
    let s = Jet::new(C64::new(0.0, sh), C64::new(0.0, ch / r), C64::new(0.0, sh / (r * r)));
    let one = Jet::constant(re(1.0));
    let pre = guarded_pow(one + s, k.alpha_bar)? * guarded_pow(one - s, k.beta_bar)?;
    let t = (one - s).scale(re(0.5));
    Ok(pre * hyp_combination(&k, spec.qn.n, spec.c1, spec.c2, t)?)
}

fn elliptic_jet(spec: &WavefunctionSpec, u: f64) -> Result<Jet> {
    let k = spec.class_for(Family::Elliptic)?;
    let r = spec.profile.r;
    let (sh, ch) = ((u / r).sinh(), (u / r).cosh());
    if ch == 1.0 {
        return Err(Error::ThroatSingularity { u, radius: spec.profile.eval(u).r });
    }
    // 1 -+ chi through half-angle forms; 1 - cosh loses all digits near the throat
    let half = (u / (2.0 * r)).sinh();
    let opc = Jet::new(re(2.0 + 2.0 * half * half), re(sh / r), re(ch / (r * r)));
    let omc = Jet::new(re(-2.0 * half * half), re(-sh / r), re(-ch / (r * r)));
    // 1 - chi < 0 here: the principal branch is the documented choice
    let pre = opc.powc(k.alpha_bar) * omc.powc(k.beta_bar);
    let t = omc.scale(re(0.5));
    Ok(pre * hyp_combination(&k, spec.qn.n, spec.c1, spec.c2, t)?)
}

/// Laguerre-index root for the Beltrami solution: minus the principal root of (M^2 - E^2) r^2.
pub(crate) fn beltrami_s(energy: C64, mass: f64, r: f64) -> C64 {
    -csqrt((re(mass * mass) - energy * energy) * (r * r))
}

fn beltrami_jet(spec: &WavefunctionSpec, u: f64) -> Result<Jet> {
    let p = &spec.profile;
    if p.family != Family::Beltrami {
        return Err(Error::UnsupportedFamily(format!("beltrami wavefunction on a {} profile", p.family)));
    }
    if spec.c2 != re(0.0) {
        return Err(Error::InvalidParameter("the Beltrami solution has a single coefficient; c2 must be 0".into()));
    }
    let m = spec.qn.m();
    let r = p.r;
    let kappa = m.abs() * r / p.scale;
    let s = beltrami_s(spec.energy, spec.mass, r);
    let qv = (-u / r).exp();
    let q = Jet::new(re(qv), re(-qv / r), re(qv / (r * r)));
    let pw = q.powc(spec.tau + 0.5 + s);
    let ex = q.scale(re(-kappa)).exp();
    let x = q.scale(re(2.0 * kappa));
    let lag = x.compose(laguerre_jet(spec.qn.n, 2.0 * s, x.v));
    Ok((pw * ex * lag).scale(spec.c1))
}

pub fn psi1_hyperbolic(spec: &WavefunctionSpec, u: f64) -> Result<C64> {
    Ok(hyperbolic_jet(spec, u)?.v)
}

/// Upper component on the elliptic wormhole. At the throat u = 0 only the limit value is given.
pub fn psi1_elliptic(spec: &WavefunctionSpec, u: f64) -> Result<C64> {
    if u == 0.0 {
        let k = spec.class_for(Family::Elliptic)?;
        if k.beta_bar == re(0.0) {
            let q = hyp_combination(&k, spec.qn.n, spec.c1, spec.c2, Jet::constant(re(0.0)))?;
            return Ok(crate::cpow(re(2.0), k.alpha_bar) * q.v);
        }
        if k.beta_bar.re > 0.0 && spec.c2 == re(0.0) {
            return Ok(re(0.0));
        }
        return Err(Error::ThroatSingularity { u, radius: 0.0 });
    }
    Ok(elliptic_jet(spec, u)?.v)
}

pub fn psi1_beltrami(spec: &WavefunctionSpec, u: f64) -> Result<C64> {
    Ok(beltrami_jet(spec, u)?.v)
}

pub fn psi1(spec: &WavefunctionSpec, u: f64) -> Result<C64> {
    Ok(spec.jet2(u)?.v)
}

impl RadialFunction for WavefunctionSpec {
    fn jet2(&self, u: f64) -> Result<Jet> {
        match self.profile.family {
            Family::Hyperbolic => hyperbolic_jet(self, u),
            Family::Elliptic => elliptic_jet(self, u),
            Family::Beltrami => beltrami_jet(self, u),
            Family::SphericalCosine => Err(Error::UnsupportedFamily("no spectrum on the spherical profile".into())),
        }
    }
}

/// psi2 and its derivative from the psi1 jet through the second first-order equation.
///
/// At E = -M the lower component is undetermined by that equation; when also M = 0 and
/// psi1 is annihilated by the operator, psi2 = 0 is the consistent choice.
pub fn psi2_jet(
    profile: &MeridianProfile,
    energy: C64,
    mass: f64,
    m: f64,
    tau: C64,
    psi1: &dyn RadialFunction,
    u: f64,
) -> Result<(C64, C64)> {
    let mer = profile.eval(u);
    if mer.r.abs() < 1e-14 {
        return Err(Error::ThroatSingularity { u, radius: mer.r });
    }
    let j = psi1.jet2(u)?;
    let (rr, r1, r2) = (mer.r, mer.r1, mer.r2);
    let g = (tau + 0.5) * (r1 / rr);
    let g1 = (tau + 0.5) * (r2 / rr - r1 * r1 / (rr * rr));
    let op = j.d1 + (g - m / rr) * j.v;
    let op1 = j.d2 + (g1 + m * r1 / (rr * rr)) * j.v + (g - m / rr) * j.d1;
    let den = energy + mass;
    if den.norm() < 1e-14 {
        let zero_mode = op.norm() <= 1e-10 * j.v.norm().max(j.d1.norm()).max(f64::MIN_POSITIVE)
            || (j.v == re(0.0) && j.d1 == re(0.0));
        if zero_mode && (energy - mass).norm() < 1e-14 {
            return Ok((re(0.0), re(0.0)));
        }
        return Err(Error::MassShellSingularity(den.norm()));
    }
    Ok((-op / den, -op1 / den))
}

pub fn psi2_from_psi1(
    profile: &MeridianProfile,
    energy: C64,
    mass: f64,
    qn: QuantumNumbers,
    tau: C64,
    psi1: &dyn RadialFunction,
    u: f64,
) -> Result<C64> {
    Ok(psi2_jet(profile, energy, mass, qn.m(), tau, psi1, u)?.0)
}

/// The lower component as a radial function; the second derivative comes from a central difference.
pub struct LowerComponent<'a> {
    pub profile: MeridianProfile,
    pub energy: C64,
    pub mass: f64,
    pub m: f64,
    pub tau: C64,
    pub psi1: &'a dyn RadialFunction,
}

impl RadialFunction for LowerComponent<'_> {
    fn jet1(&self, u: f64) -> Result<(C64, C64)> {
        psi2_jet(&self.profile, self.energy, self.mass, self.m, self.tau, self.psi1, u)
    }

    fn jet2(&self, u: f64) -> Result<Jet> {
        let (v, d1) = self.jet1(u)?;
        let h = 1e-6 * u.abs().max(1.0);
        let d2 = (self.jet1(u + h)?.1 - self.jet1(u - h)?.1) / (2.0 * h);
        Ok(Jet::new(v, d1, d2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::FiniteDiff;
    use crate::spectra::{ansatz_classes, energy_hyperbolic};
    use crate::{c, cpow};

    fn hyper_spec(j: usize, n: usize, m: f64, b: f64, sector: TauSector) -> WavefunctionSpec {
        let p = MeridianProfile::hyperbolic(b, 1.0).unwrap();
        let k = ansatz_classes(Family::Hyperbolic, sector, m, 1.0, b).unwrap()[j];
        let qn = QuantumNumbers::from_m(n, m).unwrap();
        let e = energy_hyperbolic(qn, &k, 0.0, 1.0, b).0.value;
        WavefunctionSpec::new(p, Some(k), qn, sector.tau(), 0.0, e)
    }

    #[test]
    fn ground_state_at_throat() {
        let s = hyper_spec(0, 0, 0.5, 1.0, TauSector::Minus);
        assert_eq!(psi1_hyperbolic(&s, 0.0).unwrap(), re(1.0));
    }

    #[test]
    fn first_excited_value_at_throat() {
        // 2F1(-1, 1; 1/2 + i m r / b; t) at t = 1/2
        let (m, b) = (0.5, 1.0);
        let s = hyper_spec(0, 1, m, b, TauSector::Minus);
        let expect = re(1.0) - re(0.5) / c(0.5, m / b);
        assert!((psi1_hyperbolic(&s, 0.0).unwrap() - expect).norm() < 1e-15);
    }

    #[test]
    fn jets_match_finite_differences() {
        let s = hyper_spec(1, 3, 1.5, 0.7, TauSector::Plus).with_coefficients(c(0.3, 1.0), c(0.2, -0.1));
        let fd = FiniteDiff(|u: f64| psi1(&s, u)).jet2(0.31).unwrap();
        let ex = s.jet2(0.31).unwrap();
        assert!((fd.d1 - ex.d1).norm() < 1e-7 * ex.d1.norm().max(1.0));
        assert!((fd.d2 - ex.d2).norm() < 1e-3 * ex.d2.norm().max(1.0));
    }

    #[test]
    fn elliptic_prefactor_and_throat_limit() {
        let (m, b1) = (0.5, 0.5);
        let p = MeridianProfile::elliptic(b1, 1.0).unwrap();
        let k = ansatz_classes(Family::Elliptic, TauSector::Minus, m, 1.0, b1).unwrap()[0];
        let qn = QuantumNumbers::from_m(1, m).unwrap();
        let s = WavefunctionSpec::new(p, Some(k), qn, re(-0.5), 0.0, re(0.0));
        let u = 3f64.acosh();
        let h = m / (2.0 * b1);
        let f = re(1.0) - re(1.0) / re(0.5 + 2.0 * h) * re((1.0 - 3.0) / 2.0);
        let expect = cpow(re(4.0), re(-h)) * cpow(re(-2.0), re(h)) * f;
        assert!((psi1_elliptic(&s, u).unwrap() - expect).norm() < 1e-13);
        assert_eq!(psi1_elliptic(&s, 0.0).unwrap(), re(0.0));
        assert!(psi1_elliptic(&s, 1e-4).unwrap().norm() < 1e-3);
    }

    #[test]
    fn beltrami_pure_exponential() {
        let p = MeridianProfile::beltrami(1.0, 1.0).unwrap();
        let qn = QuantumNumbers::new(0, 0);
        let s = WavefunctionSpec::new(p, None, qn, re(-0.5), 1.0, re(1.0));
        for u in [-1.0f64, -0.3, 0.0] {
            let q = (-u).exp();
            assert!((psi1_beltrami(&s, u).unwrap() - re((-0.5 * q).exp())).norm() < 1e-15);
        }
        let far = WavefunctionSpec::new(p, None, qn, re(0.5), 1.0, re(1.0));
        assert!(psi1_beltrami(&far, 40.0).unwrap().norm() < 1e-15);
    }

    #[test]
    fn psi2_guards() {
        let s = hyper_spec(1, 1, 0.5, 1.0, TauSector::Minus);
        let p = s.profile;
        let zero = FiniteDiff(|_u: f64| Ok(re(0.0)));
        assert_eq!(psi2_from_psi1(&p, re(1.0), 0.5, s.qn, s.tau, &zero, 0.2).unwrap(), re(0.0));
        let e = psi2_from_psi1(&p, re(-2.0), 2.0, s.qn, s.tau, &s, 0.2).unwrap_err();
        assert!(matches!(e, Error::MassShellSingularity(_)));
    }

    #[test]
    fn wrong_sector_is_refused() {
        let mut s = hyper_spec(0, 1, 0.5, 1.0, TauSector::Minus);
        s.tau = re(0.5);
        assert!(psi1(&s, 0.1).is_err());
        s.tau = re(0.2);
        assert!(matches!(psi1(&s, 0.1), Err(Error::TauOutOfSector(_))));
    }
}
