//! JSON encodings of points, reports, map specifications and verdicts.
//!
//! Complex numbers are `[re, im]`; matrices are arrays of rows.

use std::fs;
use std::path::Path;

use crtool_core::classify::Verdict;
use crtool_core::crframe::LeviReport;
use crtool_core::domains::{BoundaryPoint, DomainModel, ModelKind};
use crtool_core::maps::{MapSpec, Phi};
use crtool_core::nu::NuReport;
use crtool_core::numerics::{hermitian_eigen, ComplexMatrix, TolerancePolicy, C64};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("format: {0}")]
    Format(String),
    #[error("{0}")]
    Core(#[from] crtool_core::Error),
}

pub type IoResult<T> = std::result::Result<T, IoError>;

fn bad(msg: impl Into<String>) -> IoError {
    IoError::Format(msg.into())
}

pub fn complex_to_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_from_json(v: &Value) -> IoResult<C64> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(bad("complex entries must be numbers")),
        },
        _ => v.as_f64().map(|re| C64::new(re, 0.0)).ok_or_else(|| bad("expected [re, im]")),
    }
}

pub fn vector_to_json(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|z| complex_to_json(*z)).collect())
}

pub fn vector_from_json(v: &Value) -> IoResult<Vec<C64>> {
    v.as_array().ok_or_else(|| bad("expected an array"))?.iter().map(complex_from_json).collect()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(m.row(i))).collect())
}

pub fn matrix_from_json(v: &Value) -> IoResult<ComplexMatrix> {
    let rows = v.as_array().ok_or_else(|| bad("expected an array of rows"))?;
    let rows: Vec<Vec<C64>> = rows.iter().map(vector_from_json).collect::<IoResult<_>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(bad("ragged matrix"));
    }
    Ok(ComplexMatrix::from_row_major(rows.len(), cols, rows.concat())?)
}

pub fn model_to_json(model: &DomainModel) -> Value {
    let mut v = json!({"kind": model.kind().name(), "m": model.m(), "n": model.n()});
    if model.has_flat_line() {
        v["flat_line"] = json!(true);
    }
    v
}

pub fn model_from_json(v: &Value) -> IoResult<DomainModel> {
    let kind = v["kind"].as_str().ok_or_else(|| bad("missing kind"))?;
    let kind = ModelKind::parse(kind).ok_or_else(|| bad(format!("unknown kind {kind}")))?;
    let m = v["m"].as_u64().ok_or_else(|| bad("missing m"))? as usize;
    let n = v["n"].as_u64().unwrap_or(0) as usize;
    let model = if kind == ModelKind::I && m == 1 { DomainModel::sphere(n)? } else { DomainModel::new(kind, m, n)? };
    Ok(if v["flat_line"].as_bool() == Some(true) { model.product_with_line() } else { model })
}

pub fn point_to_json(p: &BoundaryPoint) -> Value {
    let mut v = model_to_json(p.model());
    v["ambient"] = matrix_to_json(p.ambient());
    if let Some(e) = p.extra() {
        v["extra"] = complex_to_json(e);
    }
    v
}

pub fn point_from_json(v: &Value) -> IoResult<BoundaryPoint> {
    let model = model_from_json(v)?;
    let ambient = matrix_from_json(&v["ambient"])?;
    let extra = match &v["extra"] {
        Value::Null => None,
        e => Some(complex_from_json(e)?),
    };
    Ok(BoundaryPoint::from_ambient(&model, ambient, extra, &TolerancePolicy::default())?)
}

pub fn read_point(path: &Path) -> IoResult<BoundaryPoint> {
    point_from_json(&serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn levi_to_json(r: &LeviReport) -> IoResult<Value> {
    let eig = hermitian_eigen(&r.matrix, &TolerancePolicy::default())?;
    let mut v = model_to_json(r.frame.base.model());
    v["signature"] = json!({"pos": r.signature.pos, "zero": r.signature.zero, "neg": r.signature.neg});
    v["stable"] = json!(r.stable);
    v["eigenvalues"] = json!(eig.values);
    v["point"] = point_to_json(&r.frame.base);
    Ok(v)
}

pub fn nu_to_json(r: &NuReport) -> Value {
    json!({
        "nu": r.nu,
        "method": r.method.name(),
        "kernel_dim": r.kernel_dim_at_max,
        "V": vector_to_json(&r.maximizer),
        "stable": r.stable,
        "samples_used": r.samples_used,
    })
}

pub fn verdict_to_json(v: &Verdict) -> Value {
    json!({"verdict": v.value.name(), "citation": v.citation})
}

pub fn phi_to_json(phi: &Phi) -> Value {
    match phi {
        Phi::Constant(c) => json!({"constant": complex_to_json(*c)}),
        Phi::Polynomial(terms) => json!({
            "polynomial": terms
                .iter()
                .map(|(e, c)| json!({"exponents": e, "coefficient": complex_to_json(*c)}))
                .collect::<Vec<_>>()
        }),
    }
}

pub fn phi_from_json(v: &Value) -> IoResult<Phi> {
    if let Some(c) = v.get("constant") {
        return Ok(Phi::Constant(complex_from_json(c)?));
    }
    let terms = v.get("polynomial").and_then(Value::as_array).ok_or_else(|| bad("phi needs constant or polynomial"))?;
    let terms = terms
        .iter()
        .map(|t| {
            let e = t["exponents"]
                .as_array()
                .ok_or_else(|| bad("missing exponents"))?
                .iter()
                .map(|x| x.as_u64().map(|k| k as u32).ok_or_else(|| bad("exponents must be integers")))
                .collect::<IoResult<Vec<u32>>>()?;
            Ok((e, complex_from_json(&t["coefficient"])?))
        })
        .collect::<IoResult<_>>()?;
    Ok(Phi::Polynomial(terms))
}

fn usize_field(v: &Value, key: &str) -> IoResult<usize> {
    v[key].as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("missing {key}")))
}

pub fn map_to_json(spec: &MapSpec) -> Value {
    match spec {
        MapSpec::UnitaryI { u, v } => json!({"kind": "UnitaryI", "u": matrix_to_json(u), "v": matrix_to_json(v)}),
        MapSpec::UnitaryII { u } => json!({"kind": "UnitaryII", "u": matrix_to_json(u)}),
        MapSpec::UnitaryIII { u } => json!({"kind": "UnitaryIII", "u": matrix_to_json(u)}),
        MapSpec::PermutationPhaseIV { perm, phase } => {
            json!({"kind": "PermutationPhaseIV", "perm": perm, "phase": complex_to_json(*phase)})
        }
        MapSpec::CayleyTubeToIV { m } => json!({"kind": "CayleyTubeToIV", "m": m}),
        MapSpec::BlockEmbedI { m, n, phi } => json!({"kind": "BlockEmbedI", "m": m, "n": n, "phi": phi_to_json(phi)}),
        MapSpec::BlockEmbedII { m, phi } => json!({"kind": "BlockEmbedII", "m": m, "phi": phi_to_json(phi)}),
        MapSpec::SphereEmbedIII { m, phi } => json!({"kind": "SphereEmbedIII", "m": m, "phi": phi_to_json(phi)}),
        MapSpec::Constant { source, target } => {
            json!({"kind": "Constant", "source": model_to_json(source), "target": point_to_json(target)})
        }
    }
}

pub fn map_from_json(v: &Value) -> IoResult<MapSpec> {
    let kind = v["kind"].as_str().ok_or_else(|| bad("missing kind"))?;
    let spec = match kind {
        "UnitaryI" => MapSpec::UnitaryI { u: matrix_from_json(&v["u"])?, v: matrix_from_json(&v["v"])? },
        "UnitaryII" => MapSpec::UnitaryII { u: matrix_from_json(&v["u"])? },
        "UnitaryIII" => MapSpec::UnitaryIII { u: matrix_from_json(&v["u"])? },
        "PermutationPhaseIV" => MapSpec::PermutationPhaseIV {
            perm: v["perm"]
                .as_array()
                .ok_or_else(|| bad("missing perm"))?
                .iter()
                .map(|x| x.as_u64().map(|k| k as usize).ok_or_else(|| bad("perm entries must be integers")))
                .collect::<IoResult<_>>()?,
            phase: complex_from_json(&v["phase"])?,
        },
        "CayleyTubeToIV" => MapSpec::CayleyTubeToIV { m: usize_field(v, "m")? },
        "BlockEmbedI" => {
            MapSpec::BlockEmbedI { m: usize_field(v, "m")?, n: usize_field(v, "n")?, phi: phi_from_json(&v["phi"])? }
        }
        "BlockEmbedII" => MapSpec::BlockEmbedII { m: usize_field(v, "m")?, phi: phi_from_json(&v["phi"])? },
        "SphereEmbedIII" => MapSpec::SphereEmbedIII { m: usize_field(v, "m")?, phi: phi_from_json(&v["phi"])? },
        "Constant" => {
            MapSpec::Constant { source: model_from_json(&v["source"])?, target: point_from_json(&v["target"])? }
        }
        other => return Err(bad(format!("unknown map kind {other}"))),
    };
    spec.validate()?;
    Ok(spec)
}

/// Writes pretty JSON to `out`, or to stdout when `out` is `None`.
pub fn emit(value: &Value, out: Option<&Path>) -> IoResult<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
