use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;
use wormhole_dirac::geometry::{build_mesh, export_mesh, Family, MeridianProfile};
use wormhole_dirac::jet::RadialFunction;
use wormhole_dirac::nu::{nu_derive_branch, nu_energy_residual_branch, NuProblem};
use wormhole_dirac::spectra::{
    ansatz_classes, energy_beltrami_nu, energy_beltrami_paper, energy_elliptic, energy_hyperbolic, EnergyLevel,
    LowerComponent, QuantumNumbers, SolutionClass, TauSector, WavefunctionSpec,
};
use wormhole_dirac::verify::{run_suite, sample_grid};
use wormhole_dirac::{Error, C64};

use super::output::{num, print_stdout, write_atomic};
use super::{
    EnergySign, Failure, MeshArgs, NuArgs, ProfileArgs, SpectrumArgs, TableFormat, VerifyArgs, WavefunctionArgs,
    EXIT_OK, EXIT_VERIFICATION,
};

fn build_profile(p: &ProfileArgs) -> Result<MeridianProfile, Failure> {
    let scale = match (p.scale, p.phi) {
        (Some(s), None) => s,
        (None, Some(phi)) if p.family == Family::Elliptic => p.r * phi.cos(),
        (None, Some(_)) => return Err(Failure::validation("--phi applies only to --family elliptic")),
        _ => return Err(Failure::validation("give exactly one of --scale and --phi")),
    };
    Ok(MeridianProfile::new(p.family, p.r, scale, p.phase.unwrap_or(0.0))?)
}

fn finite(name: &str, x: f64) -> Result<f64, Failure> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Failure::validation(format!("{name} must be finite, got {x}")))
    }
}

pub fn mesh(a: MeshArgs) -> Result<i32, Failure> {
    let profile = build_profile(&a.profile)?;
    let mesh = build_mesh(&profile, a.nu, a.nv)?;
    write_atomic(&a.output, &export_mesh(&mesh, a.format, !a.no_meta))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SpectrumRow {
    family: Family,
    tau: f64,
    class: String,
    n: usize,
    ell: i64,
    m: f64,
    e_plus: C64,
    e_minus: C64,
    annotations: Vec<String>,
}

impl SpectrumRow {
    fn new(sector: TauSector, class: String, pair: (EnergyLevel, EnergyLevel)) -> Self {
        let (p, m) = pair;
        SpectrumRow {
            family: p.family,
            tau: sector.value(),
            class,
            n: p.qn.n,
            ell: p.qn.ell,
            m: p.qn.m(),
            e_plus: p.value,
            e_minus: m.value,
            annotations: p.annotations,
        }
    }
}

fn closed_form_classes(spec: &str) -> Result<Vec<usize>, Failure> {
    match spec {
        "all" => Ok(vec![0, 1, 2, 3]),
        s => match s.parse::<usize>() {
            Ok(j @ 1..=4) => Ok(vec![j - 1]),
            _ => Err(Failure::validation(format!("--class must be 1, 2, 3, 4 or all, got '{s}'"))),
        },
    }
}

#[derive(Clone, Copy, PartialEq)]
enum BeltramiKind {
    Paper,
    Nu,
}

fn beltrami_kinds(spec: &str) -> Result<Vec<BeltramiKind>, Failure> {
    match spec {
        "all" => Ok(vec![BeltramiKind::Paper, BeltramiKind::Nu]),
        "paper" => Ok(vec![BeltramiKind::Paper]),
        "nu" => Ok(vec![BeltramiKind::Nu]),
        s => Err(Failure::validation(format!("--class for beltrami must be paper, nu or all, got '{s}'"))),
    }
}

fn closed_form_pair(
    profile: &MeridianProfile,
    qn: QuantumNumbers,
    class: &SolutionClass,
    mass: f64,
) -> (EnergyLevel, EnergyLevel) {
    match profile.family {
        Family::Hyperbolic => energy_hyperbolic(qn, class, mass, profile.r, profile.scale),
        _ => energy_elliptic(qn, class, mass, profile.r, profile.scale),
    }
}

fn unsupported(family: Family) -> Failure {
    Error::UnsupportedFamily(format!("no spectrum on the {family} profile")).into()
}

pub fn spectrum(a: SpectrumArgs) -> Result<i32, Failure> {
    let profile = build_profile(&a.profile)?;
    let sector = a.coupling.sector()?;
    let mass = finite("--M", a.mass)?;
    let mut rows = Vec::new();
    match profile.family {
        Family::Hyperbolic | Family::Elliptic => {
            let which = closed_form_classes(&a.class)?;
            for &ell in &a.ell_list {
                let m = ell as f64 + 0.5;
                let classes = ansatz_classes(profile.family, sector, m, profile.r, profile.scale)?;
                for &j in &which {
                    for n in 0..=a.n_max {
                        let qn = QuantumNumbers::new(n, ell);
                        rows.push(SpectrumRow::new(
                            sector,
                            (j + 1).to_string(),
                            closed_form_pair(&profile, qn, &classes[j], mass),
                        ));
                    }
                }
            }
        }
        Family::Beltrami => {
            let kinds = beltrami_kinds(&a.class)?;
            for &ell in &a.ell_list {
                for n in 0..=a.n_max {
                    let qn = QuantumNumbers::new(n, ell);
                    for &k in &kinds {
                        let (name, pair) = match k {
                            BeltramiKind::Paper => ("paper", energy_beltrami_paper(qn, mass, profile.r)),
                            BeltramiKind::Nu => ("nu", energy_beltrami_nu(qn, mass, profile.r, profile.scale, sector)?),
                        };
                        rows.push(SpectrumRow::new(sector, name.into(), pair));
                    }
                }
            }
        }
        f => return Err(unsupported(f)),
    }
    let bytes = match a.format {
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| Failure::validation(e.to_string()))?;
            s.push('\n');
            s.into_bytes()
        }
        TableFormat::Csv => {
            let mut s = String::from("family,tau,class,n,ell,m,Re(E+),Im(E+),Re(E-),Im(E-)\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.family,
                    num(r.tau),
                    r.class,
                    r.n,
                    r.ell,
                    num(r.m),
                    num(r.e_plus.re),
                    num(r.e_plus.im),
                    num(r.e_minus.re),
                    num(r.e_minus.im)
                );
            }
            s.into_bytes()
        }
    };
    write_atomic(&a.output, &bytes)?;
    Ok(EXIT_OK)
}

pub fn wavefunction(a: WavefunctionArgs) -> Result<i32, Failure> {
    let profile = build_profile(&a.profile)?;
    let sector = a.coupling.sector()?;
    let mass = finite("--M", a.mass)?;
    if a.samples == 0 {
        return Err(Failure::validation("--samples must be positive"));
    }
    let qn = QuantumNumbers::new(a.n, a.ell);
    let (class, pair) = match profile.family {
        Family::Hyperbolic | Family::Elliptic => {
            let spec =
                a.class.as_deref().ok_or_else(|| Failure::validation("--class 1..4 is required for this family"))?;
            let j = match closed_form_classes(spec)?.as_slice() {
                [j] => *j,
                _ => return Err(Failure::validation("--class must name a single class")),
            };
            let k = ansatz_classes(profile.family, sector, qn.m(), profile.r, profile.scale)?[j];
            (Some(k), None)
        }
        Family::Beltrami => {
            if a.c2 != C64::new(0.0, 0.0) {
                return Err(Failure::validation("the Beltrami solution has a single coefficient; --c2 must be 0"));
            }
            match beltrami_kinds(a.class.as_deref().unwrap_or("nu"))?.as_slice() {
                [BeltramiKind::Paper] => (None, Some(energy_beltrami_paper(qn, mass, profile.r))),
                [BeltramiKind::Nu] => (None, None),
                _ => return Err(Failure::validation("--class must be paper or nu for beltrami")),
            }
        }
        f => return Err(unsupported(f)),
    };
    let grid = sample_grid(&profile, a.samples)?;

    let pair = match (class, pair) {
        (Some(k), _) => closed_form_pair(&profile, qn, &k, mass),
        (None, Some(p)) => p,
        (None, None) => energy_beltrami_nu(qn, mass, profile.r, profile.scale, sector)?,
    };
    let energy = match a.sign {
        EnergySign::Plus => pair.0.value,
        EnergySign::Minus => pair.1.value,
    };
    let tau = sector.tau();
    let spec = WavefunctionSpec::new(profile, class, qn, tau, mass, energy).with_coefficients(a.c1, a.c2);
    let lower = LowerComponent { profile, energy, mass, m: qn.m(), tau, psi1: &spec };
    let mut s = String::from("u,Re(psi1),Im(psi1),Re(psi2),Im(psi2)\n");
    for &u in &grid {
        let p1 = spec.value(u)?;
        let p2 = lower.jet1(u)?.0;
        let _ = writeln!(s, "{},{},{},{},{}", num(u), num(p1.re), num(p1.im), num(p2.re), num(p2.im));
    }
    write_atomic(&a.output, s.as_bytes())?;
    Ok(EXIT_OK)
}

pub fn verify(a: VerifyArgs) -> Result<i32, Failure> {
    if let Some(t) = a.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure::validation(format!("--tol must be finite and > 0, got {t}")));
        }
    }
    let mut reports = run_suite(a.suite, a.tol);
    let passed = reports.iter().all(|r| r.passed);
    if a.failures_only {
        for r in &mut reports {
            r.checks.retain(|c| !c.passed);
        }
    }
    let doc = json!({ "passed": passed, "suites": reports });
    print_stdout(&(serde_json::to_string_pretty(&doc).map_err(|e| Failure::validation(e.to_string()))? + "\n"))?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFICATION })
}

pub fn nu(a: NuArgs) -> Result<i32, Failure> {
    let p = NuProblem { d1: a.d1, d2: a.d2, d3: a.d3, z1: a.z1, z2: a.z2, z3: a.z3 };
    let all = [p.d1, p.d2, p.d3, p.z1, p.z2, p.z3];
    if all.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Failure::validation("NU parameters must be finite"));
    }
    let derived = nu_derive_branch(&p, a.branch);
    let residual = nu_energy_residual_branch(&p, a.n, a.branch);
    let doc = json!({ "n": a.n, "branch": a.branch, "problem": p, "derived": derived, "residual": residual });
    print_stdout(&(serde_json::to_string_pretty(&doc).map_err(|e| Failure::validation(e.to_string()))? + "\n"))?;
    Ok(EXIT_OK)
}
