//! Residual checks for the analytic eigenpairs, an independent eigenvalue oracle, and the suites built on them.

mod oracle;
mod suites;

pub use oracle::termination_oracle;
pub use suites::{
    run_suite, suite_beltrami, suite_curvature, suite_elliptic, suite_hyperbolic, BeltramiPoint, Check, Suite,
    SuiteReport, BELTRAMI_B, BELTRAMI_M, BELTRAMI_MASS, BELTRAMI_N_MAX, BELTRAMI_R, CURVATURE_GRID, CURVATURE_SAMPLES,
    ODE_SAMPLES, SPECTRUM_M, SPECTRUM_MASS, SPECTRUM_N_MAX, SPECTRUM_R, SPECTRUM_SCALE,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::MeridianProfile;
use crate::jet::RadialFunction;
use crate::{Error, Result, C64};

/// Relative distance kept from singular points and domain ends when sampling.
pub const GRID_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub rms: f64,
    pub sample_count: usize,
    pub scale: f64,
    pub verdict: Verdict,
    pub annotations: Vec<String>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Build from raw residual magnitudes; pass iff max <= tol * max(scale, 1e-30).
    pub fn from_samples(residuals: &[f64], scale: f64, tol: f64) -> Self {
        let mut annotations = vec![format!("tol={tol:e}")];
        let n = residuals.len();
        let finite = residuals.iter().all(|x| x.is_finite()) && scale.is_finite();
        let max_abs = residuals.iter().copied().fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) });
        let rms = if n == 0 { 0.0 } else { (residuals.iter().map(|x| x * x).sum::<f64>() / n as f64).sqrt() };
        let mut pass = finite && n > 0 && max_abs <= tol * scale.max(1e-30);
        if !finite {
            annotations.push("NonFinite: a residual or the scale is not finite".into());
        }
        if n == 0 {
            annotations.push("EmptyGrid: no samples".into());
        }
        if scale == 0.0 {
            pass = false;
            annotations.push("DegenerateFunction: the function vanishes on every sample".into());
        }
        ResidualReport {
            max_abs,
            rms: rms.min(max_abs),
            sample_count: n,
            scale,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            annotations,
        }
    }

    pub fn annotate(mut self, note: impl Into<String>) -> Self {
        self.annotations.push(note.into());
        self
    }
}

/// The data that fixes the second-order radial equation apart from the energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialProblem {
    pub profile: MeridianProfile,
    pub mass: f64,
    pub m: f64,
    pub tau: C64,
}

/// `count` evenly spaced points strictly inside the truncated domain.
pub fn sample_grid(profile: &MeridianProfile, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    let (lo, hi) = profile.truncated_domain(crate::geometry::BELTRAMI_CUTOFF)?;
    let pad = GRID_MARGIN * (hi - lo);
    let (a, b) = (lo + pad, hi - pad);
    if !(a < b) {
        return Err(Error::EmptyDomain(format!("no interior left in [{lo}, {hi}]")));
    }
    if count == 1 {
        return Ok(vec![0.5 * (a + b)]);
    }
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            a * (1.0 - t) + b * t
        })
        .collect())
}

fn radius_at(profile: &MeridianProfile, u: f64) -> Result<crate::geometry::Meridian> {
    let mer = profile.eval(u);
    if mer.r == 0.0 || !mer.r.is_finite() {
        return Err(Error::SingularSample(u));
    }
    Ok(mer)
}

/// Left-hand side of the second-order equation for psi1 at one point.
pub fn ode_lhs(p: &RadialProblem, energy: C64, psi: &dyn RadialFunction, u: f64) -> Result<(C64, C64)> {
    let mer = radius_at(&p.profile, u)?;
    let j = psi.jet2(u)?;
    let (rr, r1, r2) = (mer.r, mer.r1, mer.r2);
    let k2 = energy * energy - p.mass * p.mass;
    let (m, tau) = (p.m, p.tau);
    let pot = k2 - m * m / (rr * rr)
        + m * r1 / (rr * rr)
        + (tau * tau - 0.25) * (r1 * r1 / (rr * rr))
        + (tau + 0.5) * (r2 / rr);
    Ok((j.d2 + (2.0 * tau + 1.0) * (r1 / rr) * j.d1 + pot * j.v, j.v))
}

pub fn ode_residual(
    p: &RadialProblem,
    energy: C64,
    psi: &dyn RadialFunction,
    grid: &[f64],
    tol: f64,
) -> Result<ResidualReport> {
    let vals: Vec<(C64, C64)> = grid.par_iter().map(|&u| ode_lhs(p, energy, psi, u)).collect::<Result<_>>()?;
    let res: Vec<f64> = vals.iter().map(|v| v.0.norm()).collect();
    let scale = vals.iter().map(|v| v.1.norm()).fold(0.0, f64::max);
    Ok(ResidualReport::from_samples(&res, scale, tol))
}

/// Both first-order equations at one point: (E+M) psi2 + (d + g - m/R) psi1 and (E-M) psi1 - (d + g + m/R) psi2.
pub fn coupled_lhs(
    p: &RadialProblem,
    energy: C64,
    psi1: &dyn RadialFunction,
    psi2: &dyn RadialFunction,
    u: f64,
) -> Result<([C64; 2], f64)> {
    let mer = radius_at(&p.profile, u)?;
    let (a, a1) = psi1.jet1(u)?;
    let (b, b1) = psi2.jet1(u)?;
    let g = (p.tau + 0.5) * (mer.r1 / mer.r);
    let mr = p.m / mer.r;
    let e1 = (energy + p.mass) * b + a1 + (g - mr) * a;
    let e2 = (energy - p.mass) * a - (b1 + (g + mr) * b);
    Ok(([e1, e2], a.norm().max(b.norm())))
}

pub fn coupled_residual(
    p: &RadialProblem,
    energy: C64,
    psi1: &dyn RadialFunction,
    psi2: &dyn RadialFunction,
    grid: &[f64],
    tol: f64,
) -> Result<ResidualReport> {
    let vals: Vec<([C64; 2], f64)> =
        grid.par_iter().map(|&u| coupled_lhs(p, energy, psi1, psi2, u)).collect::<Result<_>>()?;
    let res: Vec<f64> = vals.iter().map(|(e, _)| e[0].norm().max(e[1].norm())).collect();
    let scale = vals.iter().map(|v| v.1).fold(0.0, f64::max);
    Ok(ResidualReport::from_samples(&res, scale, tol))
}

/// max |-R''/R - K| over interior samples with |R| > 1e-8; the scale is |K|.
pub fn curvature_scan(profile: &MeridianProfile, samples: usize, tol: f64) -> Result<ResidualReport> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!("curvature scan needs at least 2 samples, got {samples}")));
    }
    let k = profile.gaussian_curvature();
    let res: Vec<f64> = sample_grid(profile, samples)?
        .into_iter()
        .filter_map(|u| {
            let mer = profile.eval(u);
            (mer.r.abs() > 1e-8).then(|| (-mer.r2 / mer.r - k).abs())
        })
        .collect();
    Ok(ResidualReport::from_samples(&res, k.abs(), tol))
}
