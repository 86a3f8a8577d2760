// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

use binary_theta::classgroup::ClassGroup;
use binary_theta::scalartheta::theta_ideal;
use serde_json::Value;

fn btheta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btheta")).args(args).output().expect("run btheta")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn strings_to_ints(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse().unwrap()).collect()
}

#[test]
fn classgroup_outputs() {
    let v = json_of(&btheta(&["classgroup", "--disc", "-23"]));
    assert_eq!(v["h"], 3);
    assert_eq!(v["forms"].as_array().unwrap().len(), 3);
    assert_eq!(v["characters"][0]["exponents"], serde_json::json!([0]));
    let v = json_of(&btheta(&["classgroup", "--disc", "-7"]));
    assert_eq!(v["h"], 1);
    for bad in ["-4", "-8", "5", "-27"] {
        assert_eq!(btheta(&["classgroup", "--disc", bad]).status.code(), Some(2), "D = {bad}");
    }
}

#[test]
fn theta_matches_enumeration() {
    let v = json_of(&btheta(&["theta", "--disc", "-7", "--class", "0", "--nmax", "5"]));
    // x^2 + xy + 2y^2
    let mut want = vec![0i64; 6];
    for x in -10i64..=10 {
        for y in -10i64..=10 {
            let q = x * x + x * y + 2 * y * y;
            if q <= 5 {
                want[q as usize] += 1;
            }
        }
    }
    assert_eq!(strings_to_ints(&v["coeffs"]), want);
    assert_eq!(btheta(&["theta", "--disc", "-7", "--class", "3"]).status.code(), Some(2));
}

#[test]
fn theta_json_round_trip() {
    let out = btheta(&["theta", "--disc", "-47", "--class", "2", "--nmax", "40", "--pretty"]);
    let v = json_of(&out);
    let cg = ClassGroup::new(-47).unwrap();
    let th = theta_ideal(&cg, 2, 40).unwrap();
    let want: Vec<i64> = (0..=40).map(|n| th.int_coeff(n).unwrap()).collect();
    assert_eq!(strings_to_ints(&v["coeffs"]), want);
}

#[test]
fn vvtheta_component_zero_is_theta_of_acted_class() {
    let v = json_of(&btheta(&["vvtheta", "--disc", "-23", "--a", "0", "--h", "1", "--nmax", "10"]));
    let acted = v["acted_class"].as_u64().unwrap().to_string();
    let th = json_of(&btheta(&["theta", "--disc", "-23", "--class", &acted, "--nmax", "10"]));
    assert_eq!(v["component_zero"], th["coeffs"]);
}

#[test]
fn lift_support_rule() {
    let v = json_of(&btheta(&["lift", "--disc", "-23", "--class", "0", "--nmax", "3"]));
    let n = 23i64;
    let a = v["A"].as_i64().unwrap();
    let comps = v["components"].as_object().unwrap();
    assert!(!comps.is_empty());
    for (r, list) in comps {
        let r: i64 = r.parse().unwrap();
        for entry in list.as_array().unwrap() {
            let idx = entry[0].as_i64().unwrap();
            assert_eq!(idx % n, (a * r * r).rem_euclid(n), "component {r}, n = {idx}");
        }
    }
}

#[test]
fn petersson_methods_agree() {
    let v = json_of(&btheta(&["petersson", "--disc", "-47", "--psi", "1", "--chi", "4", "--method", "both"]));
    assert_eq!(v["agree"], true);
    let vals = v["values"].as_array().unwrap();
    assert_eq!(vals[0]["method"], "quadrature");
    assert_eq!(vals[1]["method"], "closed_form");
    let re: f64 = vals[1]["value"][0].as_str().unwrap().parse().unwrap();
    assert!(re > 0.0);
    let out = btheta(&["petersson", "--disc", "-23", "--psi", "0", "--chi", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("btheta-{}.json", std::process::id()));
    let out = btheta(&["classgroup", "--disc", "-15", "--output", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["h"], 2);
    std::fs::remove_file(path).ok();
}
