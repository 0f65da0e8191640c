//! Nikiforov-Uvarov parametric method for
//! psi'' + (d1 - d2 x)/(x (1 - d3 x)) psi' + (-z1 x^2 + z2 x - z3)/(x^2 (1 - d3 x)^2) psi = 0.

use serde::Serialize;

use crate::jet::Jet;
use crate::specfun::{jacobi_poly_jet, laguerre_jet};
use crate::{canon, csqrt, re, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuProblem {
    pub d1: C64,
    pub d2: C64,
    pub d3: C64,
    pub z1: C64,
    pub z2: C64,
    pub z3: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuDerived {
    pub d4: C64,
    pub d5: C64,
    pub d6: C64,
    pub d7: C64,
    pub d8: C64,
    pub d9: C64,
    pub d10: C64,
    pub d11: C64,
    pub d12: C64,
    pub d13: C64,
}

impl NuDerived {
    pub fn named(&self) -> [(&'static str, C64); 10] {
        [
            ("d4", self.d4),
            ("d5", self.d5),
            ("d6", self.d6),
            ("d7", self.d7),
            ("d8", self.d8),
            ("d9", self.d9),
            ("d10", self.d10),
            ("d11", self.d11),
            ("d12", self.d12),
            ("d13", self.d13),
        ]
    }
}

/// Which root of Delta_8 enters the derived parameters and the condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SqrtBranch {
    Principal,
    Negated,
}

impl std::str::FromStr for SqrtBranch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "principal" => Ok(SqrtBranch::Principal),
            "negated" => Ok(SqrtBranch::Negated),
            _ => Err(Error::InvalidParameter(format!("unknown branch '{s}' (expected principal or negated)"))),
        }
    }
}

fn sqrt8(d8: C64, branch: SqrtBranch) -> C64 {
    match branch {
        SqrtBranch::Principal => csqrt(d8),
        SqrtBranch::Negated => -csqrt(d8),
    }
}

pub fn nu_derive(p: &NuProblem) -> NuDerived {
    nu_derive_branch(p, SqrtBranch::Principal)
}

pub fn nu_derive_branch(p: &NuProblem, branch: SqrtBranch) -> NuDerived {
    let d4 = (re(1.0) - p.d1) / 2.0;
    let d5 = (p.d2 - 2.0 * p.d3) / 2.0;
    let d6 = d5 * d5 + p.z1;
    let d7 = 2.0 * d4 * d5 - p.z2;
    let d8 = d4 * d4 + p.z3;
    let d9 = p.d3 * d7 + p.d3 * p.d3 * d8 + d6;
    let s8 = sqrt8(d8, branch);
    let s9 = csqrt(d9);
    NuDerived {
        d4,
        d5,
        d6,
        d7,
        d8,
        d9,
        d10: p.d1 + 2.0 * d4 + 2.0 * s8,
        d11: p.d2 - 2.0 * d5 + 2.0 * (s9 + p.d3 * s8),
        d12: d4 + s8,
        d13: d5 - s9 - p.d3 * s8,
    }
}

pub fn nu_energy_residual(p: &NuProblem, n: usize) -> C64 {
    nu_energy_residual_branch(p, n, SqrtBranch::Principal)
}

/// The quantization condition; it vanishes when the equation has a degree-n polynomial solution.
pub fn nu_energy_residual_branch(p: &NuProblem, n: usize, branch: SqrtBranch) -> C64 {
    let d = nu_derive_branch(p, branch);
    let nf = n as f64;
    let s8 = sqrt8(d.d8, branch);
    let s89 = match branch {
        SqrtBranch::Principal => csqrt(d.d8 * d.d9),
        SqrtBranch::Negated => -csqrt(d.d8 * d.d9),
    };
    nf * p.d2 - (2.0 * nf + 1.0) * d.d5
        + (2.0 * nf + 1.0) * (csqrt(d.d9) + p.d3 * s8)
        + nf * (nf - 1.0) * p.d3
        + d.d7
        + 2.0 * p.d3 * d.d8
        + 2.0 * s89
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Real,
    Imaginary,
}

/// A scan line in the complex energy plane: E = t (real) or E = i t (imaginary), t in [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchSegment {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub nodes: usize,
}

impl SearchSegment {
    fn point(&self, t: f64) -> C64 {
        match self.axis {
            Axis::Real => re(t),
            Axis::Imaginary => C64::new(0.0, t),
        }
    }

    fn node(&self, i: usize) -> f64 {
        let s = i as f64 / (self.nodes - 1) as f64;
        self.lo * (1.0 - s) + self.hi * s
    }
}

// double roots are only resolved to about sqrt(eps), so closer candidates are one root
const DEDUP: f64 = 1e-7;

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Shrink [a, b] to adjacent floats keeping sign(g(a)) on the left; returns the better end.
fn bisect<G: Fn(f64) -> f64, F: Fn(f64) -> C64>(g: G, f: &F, mut a: f64, mut b: f64) -> f64 {
    let sa = sign(g(a));
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        if sign(g(mid)) == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    if f(a).norm() <= f(b).norm() {
        a
    } else {
        b
    }
}

/// Golden-section minimisation of |f| on [a, b].
fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

/// All roots of the quantization condition along the given scan lines.
///
/// Sign changes of the real and imaginary parts are bisected; touching roots are
/// caught by minimising |f| around grid-local minima. A candidate is kept when
/// |f| <= 1e-10 max(1, max |f| on the grid); roots closer than 1e-7 (relative) are merged.
pub fn nu_solve_energy<B>(builder: B, n: usize, segments: &[SearchSegment], branch: SqrtBranch) -> Result<Vec<C64>>
where
    B: Fn(C64) -> NuProblem,
{
    if segments.is_empty() || segments.iter().any(|s| s.nodes < 2 || !(s.lo < s.hi)) {
        return Err(Error::RootNotBracketed("empty search region".into()));
    }
    let mut found: Vec<(C64, f64)> = Vec::new();
    for seg in segments {
        let f = |t: f64| nu_energy_residual_branch(&builder(seg.point(t)), n, branch);
        let ts: Vec<f64> = (0..seg.nodes).map(|i| seg.node(i)).collect();
        let fs: Vec<C64> = ts.iter().map(|&t| f(t)).collect();
        let scale = fs.iter().map(|z| z.norm()).filter(|x| x.is_finite()).fold(1.0, f64::max);
        let tol = 1e-10 * scale;
        let mut cands: Vec<f64> = Vec::new();
        for i in 0..ts.len() {
            if fs[i].norm() <= tol {
                cands.push(ts[i]);
            }
        }
        for i in 0..ts.len() - 1 {
            for part in [|z: C64| z.re, |z: C64| z.im] {
                let (sa, sb) = (sign(part(fs[i])), sign(part(fs[i + 1])));
                if sa != sb && sa != 0 && sb != 0 || (sa == 0) != (sb == 0) {
                    cands.push(bisect(|t| part(f(t)), &f, ts[i], ts[i + 1]));
                }
            }
        }
        for i in 1..ts.len() - 1 {
            let (l, c, r) = (fs[i - 1].norm(), fs[i].norm(), fs[i + 1].norm());
            if c < l && c <= r {
                cands.push(golden(|t| f(t).norm(), ts[i - 1], ts[i + 1]));
            }
        }
        for t in cands {
            let r = f(t).norm();
            if r <= tol {
                found.push((seg.point(t), r));
            }
        }
    }
    found.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.norm().total_cmp(&b.0.norm())));
    let mut roots: Vec<C64> = Vec::new();
    for (z, _) in found {
        if roots.iter().all(|w| (w - z).norm() > DEDUP * w.norm().max(1.0)) {
            roots.push(canon(z));
        }
    }
    if roots.is_empty() {
        return Err(Error::RootNotBracketed(format!("no root of the degree-{n} condition on the scanned lines")));
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// Eigenfunction jet in x for degree n.
pub fn nu_wavefunction_jet(p: &NuProblem, n: usize, x: Jet, branch: SqrtBranch) -> Result<Jet> {
    let d = nu_derive_branch(p, branch);
    let lead = x.powc(d.d12);
    if p.d3 == re(0.0) {
        let ex = x.scale(d.d13).exp();
        let arg = x.scale(d.d11);
        let lag = arg.compose(laguerre_jet(n, d.d10 - 1.0, arg.v));
        return Ok(lead * ex * lag);
    }
    let one = Jet::constant(re(1.0));
    let w = (one - x.scale(p.d3)).powc(-d.d12 - d.d13 / p.d3);
    let y = one - x.scale(2.0 * p.d3);
    let jac = y.compose(jacobi_poly_jet(n, d.d10 - 1.0, d.d11 / p.d3 - d.d10 - 1.0, y.v)?);
    Ok(lead * w * jac)
}

pub fn nu_wavefunction(p: &NuProblem, n: usize, x: C64) -> Result<C64> {
    Ok(nu_wavefunction_jet(p, n, Jet::var(x), SqrtBranch::Principal)?.v)
}

/// Left-hand side of the NU equation at x for the degree-n eigenfunction, with |psi(x)|.
pub fn nu_equation_residual(p: &NuProblem, n: usize, x: C64, branch: SqrtBranch) -> Result<(C64, f64)> {
    let j = nu_wavefunction_jet(p, n, Jet::var(x), branch)?;
    let w = re(1.0) - p.d3 * x;
    let lhs = j.d2 + (p.d1 - p.d2 * x) / (x * w) * j.d1 + (-p.z1 * x * x + p.z2 * x - p.z3) / (x * x * w * w) * j.v;
    Ok((lhs, j.v.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use proptest::prelude::*;

    fn zero_problem(d1: f64) -> NuProblem {
        let z = re(0.0);
        NuProblem { d1: re(d1), d2: z, d3: z, z1: z, z2: z, z3: z }
    }

    #[test]
    fn trivial_problem() {
        let d = nu_derive(&zero_problem(1.0));
        let z = re(0.0);
        assert_eq!(d.d4, z);
        for (name, v) in d.named() {
            if name == "d10" {
                assert_eq!(v, re(1.0));
            } else {
                assert_eq!(v, z, "{name}");
            }
        }
        assert_eq!(nu_energy_residual(&zero_problem(1.0), 0), z);
        assert_eq!(nu_wavefunction(&zero_problem(1.0), 0, c(0.7, 0.2)).unwrap(), re(1.0));
    }

    fn beltrami(e: f64, n_m: f64, mass: f64) -> NuProblem {
        crate::spectra::beltrami_nu_problem(re(e), n_m, mass, 1.0, 1.0, re(-0.5))
    }

    #[test]
    fn beltrami_instance_by_hand() {
        let p = beltrami(0.3, 0.5, 1.0);
        let d = nu_derive(&p);
        assert_eq!(d.d5, re(0.0));
        assert_eq!(d.d6, p.z1);
        assert_eq!(d.d7, -p.z2);
        assert_eq!(d.d9, p.z1);
        assert_eq!(d.d8, re(1.0 - 0.09));
    }

    #[test]
    fn beltrami_condition_vanishes_at_quantized_energy() {
        for (n, m) in [(0usize, 0.5f64), (1, 0.5), (3, 0.5), (0, -0.5), (2, -0.5)] {
            let s = (2.0 * n as f64 + 1.0 - m.signum()) / 2.0;
            let mass = s + 0.5;
            let e = (mass * mass - s * s).sqrt();
            let r = nu_energy_residual_branch(&beltrami(e, m, mass), n, SqrtBranch::Negated);
            assert!(r.norm() < 1e-12, "n={n} m={m}: {r}");
            let off = nu_energy_residual_branch(&beltrami(e + 0.1, m, mass), n, SqrtBranch::Negated);
            assert!(off.norm() > 1e-3);
        }
    }

    #[test]
    fn solve_examples() {
        let seg = [SearchSegment { axis: Axis::Real, lo: 0.0, hi: 5.0, nodes: 401 }];
        let b = |mass: f64, m: f64| move |e: C64| crate::spectra::beltrami_nu_problem(e, m, mass, 1.0, 1.0, re(-0.5));
        let roots = nu_solve_energy(b(2.0, 0.5), 1, &seg, SqrtBranch::Negated).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - re(3f64.sqrt())).norm() < 1e-12);
        let roots = nu_solve_energy(b(1.0, 0.5), 0, &seg, SqrtBranch::Negated).unwrap();
        assert_eq!(roots, vec![re(1.0)]);
        assert!(nu_solve_energy(b(1.0, 0.5), 0, &[], SqrtBranch::Negated).is_err());
        let flat = [SearchSegment { axis: Axis::Real, lo: 1.0, hi: 1.0, nodes: 10 }];
        assert!(nu_solve_energy(b(1.0, 0.5), 0, &flat, SqrtBranch::Negated).is_err());
    }

    #[test]
    fn principal_branch_misses_excited_beltrami_levels() {
        let seg = [SearchSegment { axis: Axis::Real, lo: 0.0, hi: 5.0, nodes: 401 }];
        let b = |e: C64| crate::spectra::beltrami_nu_problem(e, 0.5, 2.0, 1.0, 1.0, re(-0.5));
        assert!(matches!(nu_solve_energy(b, 1, &seg, SqrtBranch::Principal), Err(Error::RootNotBracketed(_))));
    }

    #[test]
    fn laguerre_branch_solves_the_equation() {
        for (n, m) in [(0usize, 0.5f64), (2, 0.5), (1, -0.5), (4, -0.5)] {
            let s = (2.0 * n as f64 + 1.0 - m.signum()) / 2.0;
            let mass = s + 0.25;
            let e = (mass * mass - s * s).sqrt();
            let p = beltrami(e, m, mass);
            for i in 1..=20 {
                let x = re(0.1 * i as f64);
                let (lhs, v) = nu_equation_residual(&p, n, x, SqrtBranch::Negated).unwrap();
                assert!(lhs.norm() < 1e-9 * v.max(1e-300), "n={n} x={x}: {lhs} vs {v}");
            }
        }
    }

    #[test]
    fn jacobi_branch_solves_the_equation() {
        // scan z3 as the unknown for a fixed d3 != 0 problem
        let base = NuProblem { d1: re(1.5), d2: re(0.4), d3: re(0.3), z1: re(2.0), z2: re(0.7), z3: re(0.0) };
        let seg = [SearchSegment { axis: Axis::Real, lo: -30.0, hi: 30.0, nodes: 600 }];
        let mut checked = 0;
        for n in 0..4usize {
            for branch in [SqrtBranch::Principal, SqrtBranch::Negated] {
                let Ok(roots) = nu_solve_energy(|z| NuProblem { z3: z, ..base }, n, &seg, branch) else { continue };
                for z3 in roots {
                    let p = NuProblem { z3, ..base };
                    for i in 1..=20 {
                        let x = re(0.15 * i as f64);
                        let (lhs, v) = nu_equation_residual(&p, n, x, branch).unwrap();
                        assert!(lhs.norm() < 1e-9 * v.max(1e-300), "n={n} {branch:?} z3={z3} x={x}: {lhs}");
                    }
                    checked += 1;
                }
            }
        }
        assert!(checked >= 2, "only {checked} roots checked");
    }

    fn cplx() -> impl Strategy<Value = C64> {
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| c(a, b))
    }

    proptest! {
        #[test]
        fn closure_identity(d1 in cplx(), d2 in cplx(), d3 in cplx(), z1 in cplx(), z2 in cplx(), z3 in cplx()) {
            let p = NuProblem { d1, d2, d3, z1, z2, z3 };
            let d = nu_derive(&p);
            let r = d.d9 - d3 * d.d7 - d3 * d3 * d.d8 - d.d6;
            prop_assert!(r.norm() < 1e-12 * (1.0 + d.d9.norm()));
            prop_assert_eq!(nu_derive(&p), d);
        }

        #[test]
        fn solver_roots_match_closed_form(n in 0usize..4, l in -2i64..2, mass in 0.5f64..3.0, r in 0.5f64..2.0) {
            let m = l as f64 + 0.5;
            let seg = [
                SearchSegment { axis: Axis::Real, lo: -12.0, hi: 12.0, nodes: 401 },
                SearchSegment { axis: Axis::Imaginary, lo: -12.0, hi: 12.0, nodes: 401 },
            ];
            let b = |e: C64| crate::spectra::beltrami_nu_problem(e, m, mass, r, 1.0, re(-0.5));
            let s = if m > 0.0 { n as f64 } else { n as f64 + 1.0 };
            let want = csqrt(re(mass * mass - s * s / (r * r)));
            let roots = nu_solve_energy(b, n, &seg, SqrtBranch::Negated).unwrap();
            prop_assert!(roots.iter().any(|z| (z - want).norm() < 1e-7), "{:?} vs {}", roots, want);
            prop_assert!(roots.iter().any(|z| (z + want).norm() < 1e-7), "{:?} vs {}", roots, -want);
        }
    }
}
