//! Meridian profiles of the wormhole surfaces and their embedding in R^3.

mod mesh;

pub use mesh::{build_mesh, discrete_curvature, export_mesh, MeshFormat, MeshMeta, SurfaceMesh};

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::specfun::{adaptive_quad, adaptive_quad_with_nodes, ellip_e_inc, ellip_f_inc};
use crate::{Error, Result};

/// Relative cutoff R(u) = cutoff * scale where the half-infinite Beltrami domain is truncated.
pub const BELTRAMI_CUTOFF: f64 = 1e-3;

/// Default absolute tolerance for the z(u) quadrature.
pub const Z_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Hyperbolic,
    Elliptic,
    Beltrami,
    #[serde(rename = "spherical")]
    SphericalCosine,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Hyperbolic, Family::Elliptic, Family::Beltrami, Family::SphericalCosine];

    pub fn name(self) -> &'static str {
        match self {
            Family::Hyperbolic => "hyperbolic",
            Family::Elliptic => "elliptic",
            Family::Beltrami => "beltrami",
            Family::SphericalCosine => "spherical",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hyperbolic" => Ok(Family::Hyperbolic),
            "elliptic" => Ok(Family::Elliptic),
            "beltrami" => Ok(Family::Beltrami),
            "spherical" | "sphericalcosine" | "spherical-cosine" => Ok(Family::SphericalCosine),
            _ => Err(Error::InvalidParameter(format!(
                "unknown family '{s}' (expected hyperbolic, elliptic, beltrami or spherical)"
            ))),
        }
    }
}

/// R(u) and its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Meridian {
    pub r: f64,
    pub r1: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeridianProfile {
    pub family: Family,
    pub r: f64,
    pub scale: f64,
    pub phase: f64,
}

/// A closed u-interval; infinite ends carry an explicit flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UInterval {
    pub lo: f64,
    pub hi: f64,
    pub unbounded_below: bool,
    pub unbounded_above: bool,
}

impl UInterval {
    pub fn contains(&self, u: f64) -> bool {
        (self.unbounded_below || u >= self.lo) && (self.unbounded_above || u <= self.hi)
    }

    pub fn clamp(&self, u: f64) -> f64 {
        let u = if self.unbounded_below { u } else { u.max(self.lo) };
        if self.unbounded_above {
            u
        } else {
            u.min(self.hi)
        }
    }
}

impl MeridianProfile {
    pub fn new(family: Family, r: f64, scale: f64, phase: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidParameter(format!("r must be finite and > 0, got {r}")));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!("scale must be finite and > 0, got {scale}")));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidParameter(format!("phase must be finite, got {phase}")));
        }
        if family == Family::Elliptic && scale >= r {
            return Err(Error::InvalidParameter(format!(
                "elliptic wormhole needs scale < r, got scale = {scale}, r = {r}"
            )));
        }
        if family != Family::SphericalCosine && phase != 0.0 {
            return Err(Error::InvalidParameter(format!("phase only applies to the spherical family, got {phase}")));
        }
        Ok(Self { family, r, scale, phase })
    }

    pub fn hyperbolic(b2: f64, r: f64) -> Result<Self> {
        Self::new(Family::Hyperbolic, r, b2, 0.0)
    }

    pub fn elliptic(b1: f64, r: f64) -> Result<Self> {
        Self::new(Family::Elliptic, r, b1, 0.0)
    }

    /// Elliptic profile with b1 = r cos(phi).
    pub fn elliptic_from_angle(phi: f64, r: f64) -> Result<Self> {
        Self::elliptic(r * phi.cos(), r)
    }

    pub fn beltrami(b: f64, r: f64) -> Result<Self> {
        Self::new(Family::Beltrami, r, b, 0.0)
    }

    pub fn spherical_cosine(d: f64, r: f64, phase: f64) -> Result<Self> {
        Self::new(Family::SphericalCosine, r, d, phase)
    }

    pub fn eval(&self, u: f64) -> Meridian {
        let (r, s) = (self.r, self.scale);
        let t = u / r;
        match self.family {
            Family::Hyperbolic => Meridian { r: s * t.cosh(), r1: s / r * t.sinh(), r2: s / (r * r) * t.cosh() },
            Family::Elliptic => Meridian { r: s * t.sinh(), r1: s / r * t.cosh(), r2: s / (r * r) * t.sinh() },
            Family::Beltrami => {
                let e = t.exp();
                Meridian { r: s * e, r1: s / r * e, r2: s / (r * r) * e }
            }
            Family::SphericalCosine => {
                let (sn, cs) = (t + self.phase).sin_cos();
                Meridian { r: s * cs, r1: -s / r * sn, r2: -s / (r * r) * cs }
            }
        }
    }

    pub fn gaussian_curvature(&self) -> f64 {
        let k = 1.0 / (self.r * self.r);
        match self.family {
            Family::SphericalCosine => k,
            _ => -k,
        }
    }

    /// Maximal interval around the throat on which R >= 0 and R'^2 <= 1.
    pub fn embedding_domain(&self) -> Result<UInterval> {
        let (r, s) = (self.r, self.scale);
        let bounded = |lo: f64, hi: f64| UInterval { lo, hi, unbounded_below: false, unbounded_above: false };
        let dom = match self.family {
            Family::Hyperbolic => {
                let h = r * (r / s).asinh();
                bounded(-h, h)
            }
            Family::Elliptic => {
                if s > r {
                    return Err(Error::EmptyDomain(format!("elliptic R'(0) = {} > 1", s / r)));
                }
                bounded(0.0, r * (r / s).acosh())
            }
            Family::Beltrami => {
                UInterval { lo: f64::NEG_INFINITY, hi: r * (r / s).ln(), unbounded_below: true, unbounded_above: false }
            }
            Family::SphericalCosine => {
                let w = if s <= r { FRAC_PI_2 } else { (r / s).asin() };
                bounded(r * (-w - self.phase), r * (w - self.phase))
            }
        };
        if !(dom.lo <= dom.hi) {
            return Err(Error::EmptyDomain(format!("{self:?}")));
        }
        Ok(dom)
    }

    /// Finite interval used for meshes and sampling grids: Beltrami is cut where R = cutoff * scale.
    pub fn truncated_domain(&self, cutoff: f64) -> Result<(f64, f64)> {
        let d = self.embedding_domain()?;
        let lo = if d.unbounded_below { (self.r * cutoff.ln()).min(d.hi) } else { d.lo };
        Ok((lo, d.hi))
    }

    /// Integrand of z(u): sqrt(1 - R'^2), clipped at the domain edge.
    pub fn z_derivative(&self, u: f64) -> f64 {
        let r1 = self.eval(u).r1;
        (1.0 - r1 * r1).max(0.0).sqrt()
    }

    fn z_base(&self) -> Result<f64> {
        Ok(self.embedding_domain()?.clamp(0.0))
    }

    fn check_in_domain(&self, u: f64) -> Result<UInterval> {
        let d = self.embedding_domain()?;
        let slack = 1e-12 * u.abs().max(self.r);
        let inside = (d.unbounded_below || u >= d.lo - slack) && (d.unbounded_above || u <= d.hi + slack);
        if !u.is_finite() || !inside {
            return Err(Error::OutOfDomain { u, lo: d.lo, hi: d.hi });
        }
        Ok(d)
    }

    /// z(u) on the + sheet, integrated from the throat-side base point.
    pub fn z_profile(&self, u: f64, tol: f64) -> Result<f64> {
        self.check_in_domain(u)?;
        let base = self.z_base()?;
        Ok(adaptive_quad(|s| self.z_derivative(s), base, u, tol)?.value)
    }

    /// z(u) together with the abscissae the quadrature visited.
    pub fn z_profile_nodes(&self, u: f64, tol: f64) -> Result<(f64, Vec<f64>)> {
        self.check_in_domain(u)?;
        let base = self.z_base()?;
        let (q, nodes) = adaptive_quad_with_nodes(|s| self.z_derivative(s), base, u, tol)?;
        Ok((q.value, nodes))
    }

    /// Hyperbolic z(u) in closed form through incomplete elliptic integrals.
    pub fn z_hyperbolic_elliptic(&self, u: f64) -> Result<f64> {
        if self.family != Family::Hyperbolic {
            return Err(Error::UnsupportedFamily(format!(
                "elliptic-integral z(u) needs hyperbolic, got {}",
                self.family
            )));
        }
        self.check_in_domain(u)?;
        let k = self.scale / self.r;
        let kk = (1.0 + k * k).sqrt();
        let m = 1.0 / (kk * kk);
        let sin_phi = (k * (u.abs() / self.r).sinh()).min(1.0);
        let psi = FRAC_PI_2 - sin_phi.asin();
        let f = ellip_f_inc(FRAC_PI_2, m)? - ellip_f_inc(psi, m)?;
        let e = ellip_e_inc(FRAC_PI_2, m)? - ellip_e_inc(psi, m)?;
        Ok(u.signum() * self.r * kk * (f - e))
    }

    pub fn embed(&self, u: f64, v: f64) -> Result<[f64; 3]> {
        let z = self.z_profile(u, Z_TOL)?;
        let rr = self.eval(u).r;
        Ok([rr * v.cos(), rr * v.sin(), z])
    }
}

pub fn eval_meridian(profile: &MeridianProfile, u: f64) -> Meridian {
    profile.eval(u)
}

pub fn gaussian_curvature(profile: &MeridianProfile) -> f64 {
    profile.gaussian_curvature()
}

pub fn embedding_domain(profile: &MeridianProfile) -> Result<UInterval> {
    profile.embedding_domain()
}

pub fn z_profile(profile: &MeridianProfile, u: f64, tol: f64) -> Result<f64> {
    profile.z_profile(u, tol)
}

pub fn embed(profile: &MeridianProfile, u: f64, v: f64) -> Result<[f64; 3]> {
    profile.embed(u, v)
}
