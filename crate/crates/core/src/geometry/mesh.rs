use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{MeridianProfile, BELTRAMI_CUTOFF, Z_TOL};
use crate::{fmt_shortest as num, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Csv,
}

impl FromStr for MeshFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(MeshFormat::Obj),
            "csv" => Ok(MeshFormat::Csv),
            _ => Err(Error::InvalidParameter(format!("unknown mesh format '{s}' (expected obj or csv)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshMeta {
    pub profile: MeridianProfile,
    pub u_lo: f64,
    pub u_hi: f64,
    pub cutoff: f64,
    pub z_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub nu: usize,
    pub nv: usize,
    /// (u, v) of every vertex, row-major in u.
    pub params: Vec<(f64, f64)>,
    pub vertices: Vec<[f64; 3]>,
    pub quads: Vec<[usize; 4]>,
    pub meta: MeshMeta,
}

fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    let t = i as f64 / (n - 1) as f64;
    lo * (1.0 - t) + hi * t
}

/// Uniform (u, v) grid over the truncated embedding domain and the full turn in v.
pub fn build_mesh(profile: &MeridianProfile, nu: usize, nv: usize) -> Result<SurfaceMesh> {
    if nu < 2 || nv < 3 {
        return Err(Error::InvalidParameter(format!("mesh needs nu >= 2 and nv >= 3, got {nu} x {nv}")));
    }
    let (u_lo, u_hi) = profile.truncated_domain(BELTRAMI_CUTOFF)?;
    let rows: Vec<(f64, f64, f64)> = (0..nu)
        .into_par_iter()
        .map(|i| {
            let u = lerp(u_lo, u_hi, i, nu);
            Ok((u, profile.eval(u).r, profile.z_profile(u, Z_TOL)?))
        })
        .collect::<Result<_>>()?;

    let mut params = Vec::with_capacity(nu * nv);
    let mut vertices = Vec::with_capacity(nu * nv);
    for &(u, rr, z) in &rows {
        for j in 0..nv {
            let v = TAU * j as f64 / (nv - 1) as f64;
            params.push((u, v));
            // adding 0.0 turns -0.0 into +0.0 so files never carry a signed zero
            vertices.push([rr * v.cos() + 0.0, rr * v.sin() + 0.0, z + 0.0]);
        }
    }
    let mut quads = Vec::with_capacity((nu - 1) * (nv - 1));
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let a = i * nv + j;
            quads.push([a, a + nv, a + nv + 1, a + 1]);
        }
    }
    Ok(SurfaceMesh {
        nu,
        nv,
        params,
        vertices,
        quads,
        meta: MeshMeta { profile: *profile, u_lo, u_hi, cutoff: BELTRAMI_CUTOFF, z_tol: Z_TOL },
    })
}

/// Serialize as OBJ (17 significant digits) or CSV (shortest round-trip decimals).
pub fn export_mesh(mesh: &SurfaceMesh, format: MeshFormat, with_meta: bool) -> Vec<u8> {
    let mut out = String::new();
    match format {
        MeshFormat::Obj => {
            if with_meta {
                let m = &mesh.meta;
                let p = &m.profile;
                let _ = writeln!(out, "# wormhole-dirac {}", env!("CARGO_PKG_VERSION"));
                let _ =
                    writeln!(out, "# family={} r={} scale={} phase={}", p.family, num(p.r), num(p.scale), num(p.phase));
                let _ = writeln!(
                    out,
                    "# nu={} nv={} u_lo={} u_hi={} cutoff={} z_tol={}",
                    mesh.nu,
                    mesh.nv,
                    num(m.u_lo),
                    num(m.u_hi),
                    num(m.cutoff),
                    num(m.z_tol)
                );
            }
            for v in &mesh.vertices {
                let _ = writeln!(out, "v {:.16e} {:.16e} {:.16e}", v[0] + 0.0, v[1] + 0.0, v[2] + 0.0);
            }
            for q in &mesh.quads {
                let _ = writeln!(out, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1);
            }
        }
        MeshFormat::Csv => {
            out.push_str("u,v,x,y,z\n");
            for (&(u, v), p) in mesh.params.iter().zip(&mesh.vertices) {
                let _ = writeln!(out, "{},{},{},{},{}", num(u), num(v), num(p[0]), num(p[1]), num(p[2]));
            }
        }
    }
    out.into_bytes()
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn angle(a: [f64; 3], b: [f64; 3]) -> f64 {
    cross(a, b).iter().map(|x| x * x).sum::<f64>().sqrt().atan2(dot(a, b))
}

/// Angle-deficit Gaussian curvature at interior vertices (rows 1..nu-1, seam identified).
/// Boundary rows and seam duplicates yield `None`.
pub fn discrete_curvature(mesh: &SurfaceMesh) -> Vec<Option<f64>> {
    let (nu, nv) = (mesh.nu, mesh.nv);
    let canon = |k: usize| if k % nv == nv - 1 { k - (nv - 1) } else { k };
    let mut angles = vec![0.0; mesh.vertices.len()];
    let mut areas = vec![0.0; mesh.vertices.len()];
    let extent = mesh.vertices.iter().map(|p| dot(*p, *p)).fold(0.0, f64::max);
    for q in &mesh.quads {
        for tri in [[q[0], q[1], q[2]], [q[0], q[2], q[3]]] {
            let p = tri.map(|k| mesh.vertices[k]);
            let area =
                0.5 * dot(cross(sub(p[1], p[0]), sub(p[2], p[0])), cross(sub(p[1], p[0]), sub(p[2], p[0]))).sqrt();
            if area <= 1e-14 * extent {
                continue;
            }
            for c in 0..3 {
                let (a, b, o) = (p[(c + 1) % 3], p[(c + 2) % 3], p[c]);
                let k = canon(tri[c]);
                angles[k] += angle(sub(a, o), sub(b, o));
                areas[k] += area / 3.0;
            }
        }
    }
    (0..mesh.vertices.len())
        .map(|k| {
            let (i, j) = (k / nv, k % nv);
            if i == 0 || i == nu - 1 || j == nv - 1 || areas[k] == 0.0 {
                None
            } else {
                Some((2.0 * PI - angles[k]) / areas[k])
            }
        })
        .collect()
}
