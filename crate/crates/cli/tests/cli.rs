use std::process::{Command, Output};

use serde_json::Value;

const SCHEMA: &str = include_str!("../schema/report.schema.json");

fn hypleaf(args: &[&str]) -> Output {
    hypleaf_env(args, &[])
}

fn hypleaf_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hypleaf"));
    cmd.args(args)
        .env_remove("HYPLEAF_SEED")
        .env_remove("HYPLEAF_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = hypleaf(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    let errors = validate(&schema(), &v, "$");
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    v
}

fn schema() -> Value {
    serde_json::from_str(SCHEMA).unwrap()
}

/// The subset of JSON Schema used by the report schema.
fn validate(schema: &Value, v: &Value, path: &str) -> Vec<String> {
    let mut errs = Vec::new();
    if let Some(t) = schema.get("type") {
        let types: Vec<&str> = match t {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        let ok = types.iter().any(|t| match *t {
            "object" => v.is_object(),
            "string" => v.is_string(),
            "boolean" => v.is_boolean(),
            "integer" => v.is_i64() || v.is_u64(),
            "number" => v.is_number(),
            "null" => v.is_null(),
            "array" => v.is_array(),
            _ => false,
        });
        if !ok {
            errs.push(format!("{path}: expected {types:?}, got {v}"));
            return errs;
        }
    }
    if let Some(c) = schema.get("const") {
        if c != v {
            errs.push(format!("{path}: expected {c}, got {v}"));
        }
    }
    if let (Some(min), Some(s)) = (schema.get("minLength").and_then(Value::as_u64), v.as_str()) {
        if (s.chars().count() as u64) < min {
            errs.push(format!("{path}: shorter than {min}"));
        }
    }
    if let (Some(min), Some(x)) = (schema.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            errs.push(format!("{path}: {x} < {min}"));
        }
    }
    if let (Some(min), Some(x)) = (
        schema.get("exclusiveMinimum").and_then(Value::as_f64),
        v.as_f64(),
    ) {
        if x <= min {
            errs.push(format!("{path}: {x} <= {min}"));
        }
    }
    if let Some(obj) = v.as_object() {
        for key in schema
            .get("required")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
        {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                errs.push(format!("{path}: missing {key}"));
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (k, x) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(sub) => errs.extend(validate(sub, x, &format!("{path}.{k}"))),
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    errs.push(format!("{path}: unexpected key {k}"))
                }
                None => {}
            }
        }
    }
    errs
}

#[test]
fn schema_validator_rejects_bad_reports() {
    let mut v = report(&["cover", "double", "--n", "4"]);
    v["provenance"]["tool"] = Value::from("other");
    v.as_object_mut().unwrap().remove("results");
    assert_eq!(validate(&schema(), &v, "$").len(), 2);
}

#[test]
fn classify_cat_map() {
    let v = report(&["classify", "--matrix", "2 1 1 1", "--periodic", "2"]);
    let c = &v["results"]["classification"];
    assert_eq!(c["kind"], "Anosov");
    assert_eq!(c["lambda"]["text"], "(3+√5)/2");
    assert_eq!(v["results"]["periodic_points"]["count"], 5);
    assert_eq!(v["numerics"]["exact"], true);
}

#[test]
fn frw_pipeline_on_wollmilchsau() {
    let v = report(&[
        "pipeline",
        "frw",
        "--matrix",
        "2 1 1 1",
        "--origami",
        "wollmilchsau",
    ]);
    let r = &v["results"];
    assert_eq!(r["origami"]["genus"], 3);
    assert_eq!(r["lift_verified"], true);
    let k = r["torelli"]["k"].as_u64().unwrap();
    assert!(k <= 4);
    assert_eq!(r["torelli"]["b1"].as_u64().unwrap(), k + 1);
    assert_eq!(r["torelli"]["symplectic"], true);
    assert_eq!(r["torelli"]["fixed_in_projection_kernel"], true);
    assert_eq!(r["geometry"]["geometry"], "H3");
    assert_eq!(r["leaf_growth"]["certificate"]["certified"], true);
}

#[test]
fn frw_pipeline_on_the_torus_is_sol() {
    let v = report(&[
        "pipeline",
        "frw",
        "--matrix",
        "2 1 1 1",
        "--origami",
        "torus",
    ]);
    assert_eq!(v["results"]["geometry"]["geometry"], "Sol");
    assert_eq!(v["results"]["torelli"]["b1"], 1);
}

#[test]
fn pillowcase_report() {
    let v = report(&[
        "cover",
        "pillowcase",
        "--d",
        "4",
        "--a",
        "1,1,1,1",
        "--model",
    ]);
    let r = &v["results"];
    assert_eq!(r["genus"], 3);
    assert_eq!(r["torus_profile"]["degree"], 8);
    assert_eq!(
        r["torus_profile"]["branch_points"][0]["fibre"],
        serde_json::json!([2, 2, 2, 2])
    );
    assert_eq!(r["square_tiled_model"]["genus"], 3);
}

#[test]
fn assorted_reports_validate() {
    let runs: &[&[&str]] = &[
        &["origami", "build", "--h", "(1 2)", "--v", "()"],
        &[
            "origami",
            "act",
            "--named",
            "wollmilchsau",
            "--word",
            "S T T^-1 -I",
        ],
        &[
            "origami",
            "lift",
            "--named",
            "wollmilchsau",
            "--matrix",
            "2 1 1 1",
        ],
        &[
            "cover", "rh", "--base", "torus", "--degree", "2", "--fibres", "2;2",
        ],
        &["cover", "growth", "--d", "2", "--k", "50"],
        &["homology", "basis", "--named", "wollmilchsau"],
        &[
            "homology", "action", "--named", "torus", "--matrix", "2 1 1 1",
        ],
        &["homology", "torelli", "--m", "[[2,1],[1,1]]"],
        &["torus3", "geometry", "--matrix", "2 1 1 1"],
        &["torus3", "euler", "--genus", "2", "--e", "-2"],
        &[
            "torus3", "periods", "--period", "1,0", "--period", "0,1", "--period", "1,1",
        ],
        &[
            "torus3",
            "report",
            "--genus",
            "2",
            "--class",
            "periodic",
            "--euler",
            "3",
            "--base-genus",
            "2",
        ],
        &[
            "holonomy", "orbit", "--gens", "rot:0.25", "--steps", "100", "--eps", "0.2",
        ],
        &[
            "holonomy",
            "stabilizer",
            "--gens",
            "aff:k=0,b=1",
            "--x",
            "0.37",
            "--max-len",
            "5",
        ],
        &["holonomy", "rotnum", "--gens", "rot:0.3", "--steps", "1000"],
        &["holonomy", "commutator", "--target", "0"],
    ];
    for args in runs {
        report(args);
    }
}

#[test]
fn specific_values() {
    let v = report(&[
        "homology", "action", "--named", "torus", "--matrix", "2 1 1 1",
    ]);
    assert_eq!(
        v["results"]["action"]["matrix"],
        serde_json::json!([[2, 1], [1, 1]])
    );
    let v = report(&["torus3", "euler", "--genus", "2", "--e", "3"]);
    assert_eq!(v["results"]["geometry"], "SL2R~");
    assert_eq!(v["results"]["transverse_to_fibration_possible"], false);
    let v = report(&[
        "holonomy",
        "stabilizer",
        "--gens",
        "dbl;aff:k=0,b=1",
        "--x",
        "-1",
        "--max-len",
        "4",
    ]);
    assert_eq!(
        v["results"]["report"]["structure"]["kind"],
        "CyclicEvidence"
    );
    assert_eq!(
        v["results"]["report"]["structure"]["generator"]["text"],
        "g1 g2"
    );
    let v = report(&[
        "holonomy", "orbit", "--gens", "rot:0.25", "--steps", "1000", "--eps", "0.1",
    ]);
    assert_eq!(v["results"]["max_gap"], 0.25);
    assert_eq!(v["results"]["epsilon_dense"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(hypleaf(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        hypleaf(&["origami", "build", "--h", "(1 2", "--v", "()"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        hypleaf(&["classify", "--matrix", "1 2 3"]).status.code(),
        Some(1)
    );
    assert_eq!(hypleaf(&["--help"]).status.code(), Some(0));

    let out = hypleaf(&["classify", "--matrix", "2 1 1 2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("determinant"));
    let out = hypleaf(&["origami", "build", "--h", "(1 2)", "--v", "(3 4)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disconnected"));
    assert_eq!(
        hypleaf(&["cover", "double", "--n", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hypleaf(&["cover", "pillowcase", "--d", "4", "--a", "1,1,1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hypleaf(&["torus3", "euler", "--genus", "1", "--e", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hypleaf(&[
            "pipeline",
            "frw",
            "--matrix",
            "1 1 0 1",
            "--origami",
            "wollmilchsau"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        hypleaf(&["holonomy", "rotnum", "--gens", "dbl", "--steps", "1000"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let runs: &[&[&str]] = &[
        &[
            "pipeline",
            "frw",
            "--matrix",
            "2 1 1 1",
            "--origami",
            "wollmilchsau",
        ],
        &[
            "holonomy",
            "orbit",
            "--gens",
            "dbl;rot:0.4142135",
            "--start",
            "0.3",
            "--steps",
            "20000",
            "--eps",
            "0.001",
            "--cells",
            "4",
        ],
        &["cover", "pillowcase", "--d", "6", "--a", "1,1,1,3", "--tsv"],
    ];
    for args in runs {
        let a = hypleaf(args);
        let b = hypleaf_env(args, &[("HYPLEAF_THREADS", "1")]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_sources() {
    let args = [
        "holonomy",
        "orbit",
        "--gens",
        "dbl;rot:0.4142135",
        "--steps",
        "500",
        "--eps",
        "0.1",
    ];
    let from_env = hypleaf_env(&args, &[("HYPLEAF_SEED", "17")]);
    let v: Value = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(v["provenance"]["seed"], 17);
    let mut explicit = args.to_vec();
    explicit.extend(["--seed", "17"]);
    assert_eq!(hypleaf(&explicit).stdout, from_env.stdout);
    let mut other = args.to_vec();
    other.extend(["--seed", "18"]);
    let w: Value =
        serde_json::from_slice(&hypleaf_env(&other, &[("HYPLEAF_SEED", "17")]).stdout).unwrap();
    assert_eq!(w["provenance"]["seed"], 18);
    assert_eq!(
        hypleaf_env(&args, &[("HYPLEAF_SEED", "x")]).status.code(),
        Some(1)
    );
}

#[test]
fn tsv_output() {
    let out = hypleaf(&["cover", "double", "--n", "4", "--tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key\tvalue\n"));
    assert!(text.lines().any(|l| l == "results.genus\t3"));
}

#[test]
fn schema_subcommand_prints_schema() {
    let out = hypleaf(&["schema"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), SCHEMA);
}
