use orbifold_core::cyclo::make_field;
use orbifold_core::duval::{build_in, formula_order, group_order, required_conductor, tuple_of, FamilySpec, ProductGroup};
use orbifold_core::expected;
use orbifold_core::fibration::{base_orbifold, fibration_isometries, list_fibrations, FibrationError};
use orbifold_core::groups3::classify;
use orbifold_core::isometry::{isom_plus_of, or_exists_of, verify_witness};
use orbifold_core::singular::{complement_seifert_hint, singular_locus};
use serde_json::{json, Map, Value};

use crate::cache::{cached, Cache};
use crate::error::CliError;
use crate::SpecArgs;

pub const SCHEMA: &str = "1";

impl SpecArgs {
    fn spec(&self) -> Result<FamilySpec, CliError> {
        Ok(FamilySpec::new(&self.family, self.m, self.n, self.r, self.s)?)
    }
}

/// Match flag: "match", "mismatch" with both values, or "not_applicable".
pub fn compare(computed: &Value, expected: Option<Value>) -> Value {
    match expected {
        None => json!({"status": "not_applicable"}),
        Some(e) if &e == computed => json!({"status": "match", "value": e}),
        Some(e) => json!({"status": "mismatch", "computed": computed, "expected": e}),
    }
}

fn not_applicable(reason: &str) -> Value {
    json!({"status": "not_applicable", "reason": reason})
}

fn envelope(command: &str, spec: &FamilySpec, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("command".into(), json!(command));
    out.insert("spec".into(), spec.to_json());
    out.insert("label".into(), json!(spec.label()));
    if let Value::Object(fields) = body {
        out.extend(fields);
    }
    Value::Object(out)
}

fn conductor(spec: &FamilySpec, over: Option<u32>) -> Result<u32, CliError> {
    let need = required_conductor(spec);
    match over {
        None => Ok(need),
        Some(c) if c > 0 && c % need == 0 => Ok(c),
        Some(c) => Err(CliError::InvalidSpec(format!("conductor {c} is not a multiple of the required conductor {need}"))),
    }
}

fn group(spec: &FamilySpec, conductor: u32) -> Result<ProductGroup, CliError> {
    Ok(build_in(spec, &make_field(conductor))?)
}

fn tag(g: &orbifold_core::groups3::FinSubgroupS3) -> Result<String, CliError> {
    classify(g).map(|t| t.to_string()).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn build_record(spec: &FamilySpec, conductor: u32) -> Result<Value, CliError> {
    let g = group(spec, conductor)?;
    let t = tuple_of(&g);
    Ok(json!({
        "order": group_order(&g)?,
        "conductor": conductor,
        "kernel": g.contains_kernel(),
        "round_trip": t.rebuild().same_set(&g),
        "tuple": {
            "l": tag(&t.l)?,
            "l_k": tag(&t.l_k_group())?,
            "r": tag(&t.r)?,
            "r_k": tag(&t.r_k_group())?,
            "quotient_order": t.quotient_order(),
            "phi_isomorphism": t.phi_is_isomorphism(),
        },
    }))
}

pub fn isom_plus_record(spec: &FamilySpec, conductor: u32) -> Result<Value, CliError> {
    let d = isom_plus_of(&group(spec, conductor)?)?;
    Ok(json!({"isom_plus": d.to_json(), "recognized": d.is_recognized()}))
}

pub fn or_record(spec: &FamilySpec, conductor: u32) -> Result<Value, CliError> {
    let g = group(spec, conductor)?;
    let w = or_exists_of(&g)?;
    let verified = match &w.witness {
        Some(f) => Some(verify_witness(&g, f)?),
        None => None,
    };
    let mut v = w.to_json();
    v["witness_verified"] = json!(verified);
    Ok(v)
}

pub fn fibrations_record(spec: &FamilySpec) -> Result<Value, CliError> {
    let list = list_fibrations(spec)?;
    Ok(json!({"fibrations": list.iter().map(|e| e.to_json()).collect::<Vec<_>>()}))
}

pub fn base_record(spec: &FamilySpec) -> Result<Value, CliError> {
    let sig = match base_orbifold(spec) {
        Ok(sig) => sig,
        Err(FibrationError::NotHopf { group, preserved }) => {
            let message = FibrationError::NotHopf { group, preserved }.to_string();
            let fibrations = envelope("fibrations", spec, fibrations_record(spec)?);
            return Err(CliError::NotHopf { message, fibrations });
        }
        Err(e) => return Err(e.into()),
    };
    let iso = fibration_isometries(spec)?;
    let mut v = sig.to_json();
    v["signature"] = json!(sig.to_string());
    v["euler_characteristic"] = json!(sig.orbifold_euler_characteristic().to_string());
    v["isometries"] = iso.to_json();
    Ok(v)
}

pub fn singular_record(spec: &FamilySpec, conductor: u32) -> Result<Value, CliError> {
    let graph = singular_locus(&group(spec, conductor)?)?;
    Ok(json!({
        "free": graph.is_empty(),
        "singular_locus": graph.to_json(),
        "complement_seifert": complement_seifert_hint(spec),
    }))
}

pub fn expected_order(spec: &FamilySpec, record: &Value) -> Value {
    compare(&record["order"], Some(json!(formula_order(spec))))
}

pub fn expected_isom_plus(spec: &FamilySpec, record: &Value) -> (Value, Option<u8>) {
    match expected::isom_plus(spec) {
        Some((d, _, table)) => (compare(&record["isom_plus"], Some(d.to_json())), Some(table)),
        None => (not_applicable(expected::outside(spec, 2).unwrap_or("no table row")), None),
    }
}

pub fn expected_or(spec: &FamilySpec, record: &Value) -> Value {
    match expected::or_exists(spec) {
        Some(b) => compare(&record["or_isometry"], Some(json!(b))),
        None => not_applicable(expected::outside(spec, 5).unwrap_or("no table row")),
    }
}

/// Comparison with the first matching Table 4 row, keyed by quantity.
pub fn expected_base(spec: &FamilySpec, record: &Value) -> Option<Map<String, Value>> {
    let row = *expected::base_rows(spec).first()?;
    let iso = &record["isometries"];
    let mut out = Map::new();
    out.insert("signature".into(), compare(&record["signature"], Some(json!(row.signature(spec).to_string()))));
    for (key, entry) in [("isom_p", &row.isom_p), ("isom_f", &row.isom_f), ("action", &row.action)] {
        out.insert(key.into(), compare(&iso[key], Some(entry.descriptor().to_json())));
    }
    let annotation = match &row.annotation {
        Some(a) => compare(&iso["annotation"], Some(json!(a))),
        None => not_applicable("not annotated"),
    };
    out.insert("annotation".into(), annotation);
    if let Some(g) = &row.group {
        out.insert("row".into(), json!(g));
    }
    Some(out)
}

pub fn build(a: &SpecArgs, cache: Option<&Cache>) -> Result<Value, CliError> {
    let spec = a.spec()?;
    let c = conductor(&spec, a.conductor_override)?;
    let mut v = cached(cache, "build", &spec, c, || build_record(&spec, c))?;
    if a.expected {
        v["expected"] = json!({"order": expected_order(&spec, &v)});
    }
    Ok(envelope("build", &spec, v))
}

pub fn isom(a: &SpecArgs, cache: Option<&Cache>) -> Result<Value, CliError> {
    let spec = a.spec()?;
    let c = conductor(&spec, a.conductor_override)?;
    let plus = cached(cache, "isom_plus", &spec, c, || isom_plus_record(&spec, c))?;
    let or = cached(cache, "or", &spec, c, || or_record(&spec, c))?;
    let mut v = json!({"isom_plus": plus["isom_plus"], "recognized": plus["recognized"], "orientation_reversing": or});
    if a.expected {
        let (m, table) = expected_isom_plus(&spec, &plus);
        v["expected"] = json!({"isom_plus": m, "table": table, "or_isometry": expected_or(&spec, &or)});
    }
    Ok(envelope("isom", &spec, v))
}

pub fn fibrations(a: &SpecArgs, cache: Option<&Cache>) -> Result<Value, CliError> {
    let spec = a.spec()?;
    let v = cached(cache, "fibrations", &spec, required_conductor(&spec), || fibrations_record(&spec))?;
    Ok(envelope("fibrations", &spec, v))
}

pub fn base(a: &SpecArgs, cache: Option<&Cache>) -> Result<Value, CliError> {
    let spec = a.spec()?;
    let mut v = cached(cache, "base", &spec, required_conductor(&spec), || base_record(&spec))?;
    if a.expected {
        v["expected"] = match expected_base(&spec, &v) {
            Some(m) => Value::Object(m),
            None => not_applicable("no table row"),
        };
    }
    Ok(envelope("base", &spec, v))
}

pub fn singular(a: &SpecArgs, cache: Option<&Cache>) -> Result<Value, CliError> {
    let spec = a.spec()?;
    let c = conductor(&spec, a.conductor_override)?;
    let mut v = cached(cache, "singular", &spec, c, || singular_record(&spec, c))?;
    if a.expected {
        v["expected"] = not_applicable("singular loci are not tabulated");
    }
    Ok(envelope("singular", &spec, v))
}
