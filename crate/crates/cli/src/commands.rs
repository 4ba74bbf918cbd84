use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use orliczkit::functionals::{
    self, certify, cnp_constant, degeneracy_schedule, fmt_num, probe_continuity, probe_degeneracy, CertifyInputs,
    Family, Inequality, ProbeReport,
};
use orliczkit::io::{body_to_json, read_body};
use orliczkit::mixed_vol::{hom_mixed_volume, hom_mixed_volume_polar, nonhom_mixed_volume, segment_mixed_volume};
use orliczkit::orlicz_add::{default_schedule, variational_mixed_volume};
use orliczkit::orlicz_fn::parse_real;
use orliczkit::petty::{solve_petty, Cone, Mode, PettyOptions, PettyResult};
use orliczkit::{Body, Dir, OrliczFn, SphereGrid};

use crate::svg;
use crate::{BodyCommand, Cli, Command, ConeArg, FamilyKind, Format, FunctionalKind, ModeArg, ProbeKind};

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<u8> {
    let config = serde_json::to_value(cli)?;
    let g = &cli.global;
    match &cli.command {
        Command::Body(BodyCommand::Info { path }) => {
            let k = load(path)?;
            emit_json(&config, body_info(&k))?;
        }
        Command::Body(BodyCommand::Render { path, petty_phi, out }) => {
            let k = load(path)?;
            let mut layers = vec![("K", svg::outline(&k)?), ("polar", svg::outline(&k.polar()?)?)];
            if let Some(spec) = petty_phi {
                let phi = phi_for(spec, &k)?;
                let r = solve_petty(&k, &phi, Mode::Homogeneous, Cone::Full, &petty_opts(g.tol, g.seed, 8, 4000))?;
                layers.push(("petty", svg::outline(&r.m)?));
            }
            let text = svg::render(&layers);
            match out {
                Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
        }
        Command::Mv(a) => {
            let k = load(&a.k)?;
            let phi = phi_for(&a.phi, &k)?;
            let body = if let Some(v) = &a.segment {
                let v = parse_vector(v, k.dim())?;
                json!({"variant": "segment", "value": segment_mixed_volume(&k, &v, &phi)?})
            } else {
                let lp = a.l.as_ref().ok_or_else(|| anyhow!("--L is required"))?;
                let l = load(lp)?;
                if a.homogeneous {
                    let r = hom_mixed_volume(&k, &l, &phi)?;
                    merge(json!({"variant": "homogeneous"}), serde_json::to_value(r)?)
                } else if a.polar_star {
                    let r = hom_mixed_volume_polar(&k, &l, &phi)?;
                    merge(json!({"variant": "polar-star"}), serde_json::to_value(r)?)
                } else {
                    json!({"variant": "nonhomogeneous", "value": nonhom_mixed_volume(&k, &l, &phi)?})
                }
            };
            emit_json(&config, body)?;
        }
        Command::Petty(a) => {
            let k = load(&a.k)?;
            let phi = phi_for(&a.phi, &k)?;
            let r = solve_petty(&k, &phi, mode(a.mode), cone(a.cone), &petty_opts(g.tol, g.seed, a.starts, a.max_iter))?;
            if let Some(p) = &a.out {
                write_json(p, &body_to_json(&r.m))?;
            }
            match g.format {
                Format::Json => emit_json(&config, petty_json(&r)?)?,
                Format::Csv => print!("{}", petty_csv(&config, &r)),
                Format::Svg => print!(
                    "{}",
                    svg::render(&[("K", svg::outline(&k)?), ("polar", svg::outline(&k.polar()?)?), ("petty", svg::outline(&r.m)?)])
                ),
            }
        }
        Command::Functional(a) => {
            let k = load(&a.k)?;
            let phi = phi_for(&a.phi, &k)?;
            let opts = petty_opts(g.tol, g.seed, a.starts, a.max_iter);
            let r = match a.which {
                FunctionalKind::Geominimal => functionals::geominimal(&k, &phi, mode(a.mode), cone(a.cone), &opts)?,
                FunctionalKind::Affine => {
                    let grid = grid_for(g.grid.as_deref(), k.dim())?;
                    functionals::affine(&k, &phi, Some(&grid), &opts)?
                }
            };
            emit_json(&config, merge(json!({"which": a.which}), petty_json(&r)?))?;
        }
        Command::Certify(a) => {
            let which: Inequality = a.which.parse()?;
            let k = load(&a.k)?;
            let phi = phi_for(&a.phi, &k)?;
            let psi = a.psi.as_deref().map(|s| phi_for(s, &k)).transpose()?;
            let l = a.l.as_deref().map(load).transpose()?;
            let inputs = CertifyInputs {
                k: &k,
                phi: &phi,
                psi: psi.as_ref(),
                l: l.as_ref(),
                opts: petty_opts(g.tol, g.seed, a.starts, 4000),
                rel_tol: a.rel_tol,
            };
            let cert = certify(which, &inputs)?;
            emit_json(&config, serde_json::to_value(&cert)?)?;
            if !cert.holds {
                return Ok(2);
            }
        }
        Command::Interpret(a) => {
            let k = load(&a.k)?;
            let l = load(&a.l)?;
            let phi1 = phi_for(&a.phi1, &k)?;
            let phi2 = phi_for(&a.phi2, &k)?;
            let schedule = match &a.eps_schedule {
                Some(s) => parse_list(s)?,
                None => default_schedule(),
            };
            let est = variational_mixed_volume(&k, &l, &phi1, &phi2, &schedule)?;
            match g.format {
                Format::Csv => {
                    let mut out = config_line(&config);
                    out.push_str("epsilon,volume,quotient,pointwise_error,max_residual\n");
                    for r in &est.rows {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{}",
                            fmt_num(r.epsilon),
                            fmt_num(r.volume),
                            fmt_num(r.quotient),
                            fmt_num(r.pointwise_error),
                            fmt_num(r.max_residual)
                        );
                    }
                    print!("{out}");
                }
                _ => emit_json(&config, serde_json::to_value(&est)?)?,
            }
        }
        Command::Probe(a) => {
            let report = match a.which {
                ProbeKind::Continuity => {
                    let phi = OrliczFn::parse(&a.phi, 2)?;
                    let family = match a.family {
                        FamilyKind::Mgons => Family::RegularPolygons(
                            parse_list(&a.ms)?.into_iter().map(|m| m as usize).collect(),
                        ),
                        FamilyKind::Constant => Family::Constant(required_body(a.k.as_deref())?, a.count),
                        FamilyKind::Perturbed => Family::Perturbed {
                            base: required_body(a.k.as_deref())?,
                            deltas: parse_list(&a.deltas)?,
                            seed: g.seed,
                        },
                    };
                    probe_continuity(&family, &phi, &petty_opts(g.tol, g.seed, a.starts, 4000), a.tolerance)?
                }
                ProbeKind::Degeneracy => {
                    let k = required_body(a.k.as_deref())?;
                    let phi = phi_for(&a.phi, &k)?;
                    let eps = match &a.eps {
                        Some(s) => parse_list(s)?,
                        None => degeneracy_schedule(),
                    };
                    probe_degeneracy(&k, &phi, &eps)?
                }
                ProbeKind::Cnp => {
                    let p = parse_real(&a.p).ok_or_else(|| anyhow!("bad exponent '{}'", a.p))?;
                    let grid = grid_for(g.grid.as_deref(), 2)?;
                    cnp_constant(p, &grid, a.trials, g.seed)?
                }
            };
            emit_report(&config, &report, g.format)?;
        }
    }
    Ok(0)
}

fn load(path: &Path) -> Result<Body> {
    Ok(read_body(path)?)
}

fn required_body(path: Option<&Path>) -> Result<Body> {
    load(path.ok_or_else(|| anyhow!("--K is required"))?)
}

fn phi_for(spec: &str, k: &Body) -> Result<OrliczFn> {
    Ok(OrliczFn::parse(spec, k.dim())?)
}

fn grid_for(spec: Option<&str>, dim: usize) -> Result<SphereGrid> {
    match spec {
        Some(s) => Ok(SphereGrid::from_spec(s)?),
        None => Ok((*SphereGrid::default_for(dim)?).clone()),
    }
}

fn petty_opts(tol: f64, seed: u64, starts: usize, max_iter: usize) -> PettyOptions {
    PettyOptions { starts, max_iter, tol, seed }
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Hom => Mode::Homogeneous,
        ModeArg::Nonhom => Mode::Nonhomogeneous,
    }
}

fn cone(c: ConeArg) -> Cone {
    match c {
        ConeArg::Full => Cone::Full,
        ConeArg::Sym => Cone::Symmetric,
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| parse_real(t.trim()).ok_or_else(|| anyhow!("bad number '{t}'")))
        .collect()
}

fn parse_vector(s: &str, dim: usize) -> Result<Dir> {
    let v = parse_list(s)?;
    if v.len() != dim {
        bail!("vector '{s}' has {} components, expected {dim}", v.len());
    }
    let d = Dir::new(v[0], v[1], v.get(2).copied().unwrap_or(0.0));
    let r = d.norm();
    if !(r > 0.0 && r.is_finite()) {
        bail!("vector '{s}' has no direction");
    }
    Ok(d / r)
}

fn body_info(k: &Body) -> Value {
    let (r, big_r) = k.inner_outer_radii();
    let n = k.dim();
    json!({
        "kind": k.kind(),
        "dim": n,
        "volume": k.volume().ok(),
        "polar_volume": k.polar_volume().ok(),
        "vrad": k.vrad().ok(),
        "inner_radius": r,
        "outer_radius": big_r,
        "centroid": k.centroid().ok().map(|c| c.iter().take(n).copied().collect::<Vec<_>>()),
        "surface_area": k.surface_measure().ok().map(|s| s.total_mass()),
    })
}

fn petty_json(r: &PettyResult) -> Result<Value> {
    let dirs: Vec<[f64; 2]> = r.directions.iter().map(|u| [u.x, u.y]).collect();
    Ok(merge(
        serde_json::to_value(r)?,
        json!({"directions": dirs, "M": body_to_json(&r.m)}),
    ))
}

fn petty_csv(config: &Value, r: &PettyResult) -> String {
    let mut out = config_line(config);
    out.push_str("azimuth,mass,support,slack\n");
    for (i, u) in r.directions.iter().enumerate() {
        let mass = r.masses.get(i).copied().unwrap_or(f64::NAN);
        let slack = r.tightness.get(i).copied().unwrap_or(f64::NAN);
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_num(u.y.atan2(u.x)),
            fmt_num(mass),
            fmt_num(r.support[i]),
            fmt_num(slack)
        );
    }
    out
}

fn emit_report(config: &Value, report: &ProbeReport, format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            print!("{}{}", config_line(config), report.to_csv());
            Ok(())
        }
        Format::Json => emit_json(config, serde_json::to_value(report)?),
        Format::Svg => bail!("probe reports have no SVG form"),
    }
}

fn config_line(config: &Value) -> String {
    format!("# config {config}\n")
}

/// Adds the object fields of `b` to `a`.
fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(ao), Value::Object(bo)) = (a.as_object_mut(), b) {
        ao.extend(bo);
    }
    a
}

fn emit_json(config: &Value, body: Value) -> Result<()> {
    let out = merge(json!({"config": config}), body);
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(v)? + "\n").with_context(|| format!("writing {}", path.display()))
}
