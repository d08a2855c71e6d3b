use serde_json::{json, Value};
use toralpha_core::divisor::ToricDivisor;
use toralpha_core::exact::{IntVector, Rat};
use toralpha_core::fan::{Fan, Smoothness};
use toralpha_core::invariant::{alpha_fano, newton_body_of_sections, NefBigDivisor};
use toralpha_core::symmetry::SymmetryGroup;
use toralpha_core::Error;

use crate::document::{build_group, group_from_flag, load_sections, parse_point, JobDocument};

/// Outcome of a command: the JSON report and whether every check passed.
pub struct Report {
    pub value: Value,
    pub ok: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, ok: true }
    }
}

fn divisor<'a>(job: &'a JobDocument) -> Result<ToricDivisor<'a>, Error> {
    match job.divisor_coefficients() {
        Some(a) => ToricDivisor::new(&job.fan, a.clone()),
        None => Ok(ToricDivisor::anticanonical(&job.fan)),
    }
}

pub fn validate(job: &JobDocument) -> Result<Report, Error> {
    let fan = &job.fan;
    let diagnostics = fan.validate();
    let mut report = json!({ "valid": diagnostics.is_empty(), "diagnostics": diagnostics });
    let mut ok = diagnostics.is_empty();
    if ok {
        let smooth = fan.smoothness();
        report["smooth"] = json!(smooth.is_smooth());
        if let Smoothness::Singular { cone, determinant } = &smooth {
            report["singular_cone"] = json!({ "cone": cone, "determinant": determinant.to_string() });
        }
        let complete = fan.is_complete();
        report["complete"] = json!(complete);
        ok = smooth.is_smooth() && complete;
        if ok {
            if let Some(a) = job.divisor_coefficients() {
                let (d, pass) = divisor_checks(fan, a)?;
                report["divisor"] = d;
                ok = pass;
            }
        }
    }
    report["ok"] = json!(ok);
    Ok(Report { value: report, ok })
}

fn divisor_checks(fan: &Fan, a: &IntVector) -> Result<(Value, bool), Error> {
    if a.len() != fan.rays().len() {
        return Ok((
            json!({ "error": format!("{} coefficients for {} rays", a.len(), fan.rays().len()) }),
            false,
        ));
    }
    let d = ToricDivisor::new(fan, a.clone())?;
    let violations = d.nef_violations()?;
    let nef = violations.is_empty();
    let big = d.is_big()?;
    let mut v = json!({ "nef": nef, "big": big });
    if let Some((cone, ray)) = violations.first() {
        v["nef_witness"] = json!({ "cone": cone, "ray": ray });
    }
    Ok((v, nef && big))
}

pub fn info(job: &JobDocument) -> Result<Report, Error> {
    job.fan.require_smooth_complete()?;
    let d = divisor(job)?;
    let support = d.support_function()?;
    let polytope = d.polytope();
    let vertices = polytope.vertices()?.to_vec();
    let mut report = json!({
        "divisor": int_json(d.coefficients()),
        "nef": d.is_nef()?,
        "big": d.is_big()?,
        "ample": d.is_ample()?,
        "support": support.slopes(),
        "vertices": vertices,
        "volume": Value::Null,
        "barycenter": Value::Null,
    });
    match polytope.volume_and_barycenter() {
        Ok((volume, barycenter)) => {
            report["volume"] = json!(volume);
            report["barycenter"] = json!(barycenter);
        }
        Err(Error::LowerDimensional { .. } | Error::EmptyPolytope) => {}
        Err(e) => return Err(e),
    }
    Ok(Report::ok(report))
}

pub struct LctInput<'a> {
    pub point: Option<&'a str>,
    pub sections: Option<&'a std::path::Path>,
    pub level: Option<u32>,
}

pub fn lct(job: &JobDocument, input: &LctInput) -> Result<Report, Error> {
    let d = NefBigDivisor::new(divisor(job)?)?;
    let value = if let Some(text) = input.point {
        d.lct_point(&parse_point(text)?)?
    } else if let Some(path) = input.sections {
        let (sections, file_level) = load_sections(path)?;
        let level = input.level.or(file_level).unwrap_or(1);
        let body = newton_body_of_sections(&sections, level, Some(d.divisor()))?;
        d.lct_newton_body(&body)?
    } else if let Some(p) = &job.extras.point {
        d.lct_point(&p.resolve()?)?
    } else if let Some(sections) = &job.extras.sections {
        let sections: Vec<IntVector> = sections.iter().map(|s| s.0.clone()).collect();
        let level = input.level.or(job.extras.level).unwrap_or(1);
        let body = newton_body_of_sections(&sections, level, Some(d.divisor()))?;
        d.lct_newton_body(&body)?
    } else {
        return Err(Error::Parse(
            "lct needs --point, --sections, or a point/sections entry in the document".into(),
        ));
    };
    Ok(Report::ok(json!(value)))
}

pub struct AlphaInput<'a> {
    pub group: Option<&'a str>,
    pub fano: bool,
    pub oracle: Option<u32>,
}

pub fn alpha(job: &JobDocument, input: &AlphaInput) -> Result<Report, Error> {
    let spec = match input.group {
        Some(flag) => Some(group_from_flag(flag)?),
        None => job.extras.group.clone(),
    };
    let group = build_group(&job.fan, spec.as_ref())?;
    let d = NefBigDivisor::new(divisor(job)?)?;
    let result = d.alpha(&group)?;
    let mut report = json!(result);
    report["group_order"] = json!(group.order());
    if input.fano {
        if !d.divisor().is_anticanonical() {
            return Err(Error::Parse(
                "--fano applies to the anticanonical divisor only; the document sets another".into(),
            ));
        }
        let fano = alpha_fano(&job.fan, &group)?;
        report["fano"] = json!({ "alpha": fano, "agrees": fano == result.alpha });
    }
    if let Some(max_den) = input.oracle {
        let grid = d.grid_oracle(&group, max_den)?;
        if grid.gap < Rat::zero() {
            return Err(Error::CrossCheck(format!(
                "grid minimum {} lies below alpha {}",
                grid.grid_min, grid.alpha
            )));
        }
        report["oracle"] = json!(grid);
    }
    Ok(Report::ok(report))
}

pub fn autos(job: &JobDocument) -> Result<Report, Error> {
    job.fan.require_smooth_complete()?;
    let group = SymmetryGroup::automorphism_group(&job.fan)?;
    Ok(Report::ok(group_json(&group)))
}

fn group_json(group: &SymmetryGroup) -> Value {
    let elements: Vec<Value> = group
        .elements()
        .iter()
        .map(|g| {
            let rows: Vec<Value> = g.matrix().to_rows().iter().map(|r| int_json(r)).collect();
            json!({ "matrix": rows, "ray_permutation": g.ray_permutation() })
        })
        .collect();
    json!({ "order": group.order(), "elements": elements })
}

/// Integers as JSON numbers, falling back to strings beyond `i64`.
pub fn int_json<T: ToString>(v: &[T]) -> Value {
    Value::Array(
        v.iter()
            .map(|x| {
                let text = x.to_string();
                text.parse::<i64>().map_or_else(|_| json!(text), |small| json!(small))
            })
            .collect(),
    )
}
