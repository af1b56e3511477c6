use orbifold_core::duval::{required_conductor, specs_up_to, FamilyId, FamilySpec};
use orbifold_core::expected;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::cache::{cached, Cache};
use crate::error::CliError;
use crate::report::{self, SCHEMA};
use crate::VerifyArgs;

#[derive(Clone, Copy)]
struct Task {
    table: u8,
    spec: FamilySpec,
}

fn tasks(tables: &[u8], max_param: u32) -> Vec<Task> {
    let mut out = Vec::new();
    for &table in tables {
        for family in FamilyId::all() {
            for spec in specs_up_to(family, max_param, max_param + 2) {
                let wanted = match table {
                    1 => true,
                    2 | 3 => matches!(expected::isom_plus(&spec), Some((_, _, t)) if t == table),
                    4 => !expected::base_rows(&spec).is_empty(),
                    _ => expected::or_exists(&spec).is_some(),
                };
                if wanted {
                    out.push(Task { table, spec });
                }
            }
        }
    }
    out
}

fn checks(task: Task, cache: Option<&Cache>) -> Result<Map<String, Value>, CliError> {
    let spec = &task.spec;
    let c = required_conductor(spec);
    let mut out = Map::new();
    match task.table {
        1 => {
            let v = cached(cache, "build", spec, c, || report::build_record(spec, c))?;
            out.insert("order".into(), report::expected_order(spec, &v));
        }
        2 | 3 => {
            let v = cached(cache, "isom_plus", spec, c, || report::isom_plus_record(spec, c))?;
            out.insert("isom_plus".into(), report::expected_isom_plus(spec, &v).0);
        }
        4 => match cached(cache, "base", spec, c, || report::base_record(spec)) {
            Ok(v) => out.extend(report::expected_base(spec, &v).unwrap_or_default()),
            Err(CliError::NotHopf { message, .. }) => {
                out.insert("signature".into(), json!({"status": "mismatch", "computed": message, "expected": "Hopf-preserving"}));
            }
            Err(e) => return Err(e),
        },
        _ => {
            let v = cached(cache, "or", spec, c, || report::or_record(spec, c))?;
            out.insert("or_isometry".into(), report::expected_or(spec, &v));
            if v["or_isometry"] == json!(true) {
                out.insert("witness".into(), report::compare(&v["witness_verified"], Some(json!(true))));
            }
        }
    }
    Ok(out)
}

fn status(checks: &Map<String, Value>) -> &'static str {
    let statuses: Vec<&Value> = checks.values().filter_map(|c| c.get("status")).collect();
    if statuses.iter().any(|s| *s == "mismatch") {
        "mismatch"
    } else if statuses.iter().any(|s| *s == "match") {
        "match"
    } else {
        "not_applicable"
    }
}

fn row(task: Task, cache: Option<&Cache>) -> Value {
    let mut v = json!({"table": task.table, "label": task.spec.label(), "spec": task.spec.to_json()});
    match checks(task, cache) {
        Ok(c) => {
            v["status"] = json!(status(&c));
            v["checks"] = Value::Object(c);
        }
        Err(e) => {
            v["status"] = json!("error");
            v["error"] = json!(e.to_string());
        }
    }
    v
}

fn diff_lines(row: &Value) -> Vec<String> {
    let head = format!("table {} {}", row["table"], row["label"].as_str().unwrap_or(""));
    if let Some(e) = row.get("error") {
        return vec![format!("{head}: error {e}")];
    }
    let mut out = Vec::new();
    if let Some(Value::Object(checks)) = row.get("checks") {
        for (key, c) in checks {
            if c["status"] == "mismatch" {
                out.push(format!("{head}: {key} computed {} expected {}", c["computed"], c["expected"]));
            }
        }
    }
    out
}

pub fn run(a: &VerifyArgs, cache: Option<&Cache>) -> Result<Value, CliError> {
    let mut tables = a.tables.clone();
    tables.sort_unstable();
    tables.dedup();
    let work = tasks(&tables, a.max_param);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let rows: Vec<Value> = pool.install(|| work.par_iter().map(|&t| row(t, cache)).collect());
    let mut counts = Map::new();
    for key in ["match", "mismatch", "not_applicable", "error"] {
        counts.insert(key.into(), json!(rows.iter().filter(|r| r["status"] == key).count()));
    }
    let diff: Vec<String> = rows.iter().flat_map(diff_lines).collect();
    let failed = rows.iter().filter(|r| r["status"] == "mismatch" || r["status"] == "error").count();
    let report = json!({
        "schema": SCHEMA,
        "command": "verify",
        "tables": tables,
        "max_param": a.max_param,
        "summary": counts,
        "rows": rows,
    });
    if failed > 0 {
        return Err(CliError::Mismatch { count: failed, diff: diff.join("\n"), report });
    }
    Ok(report)
}
