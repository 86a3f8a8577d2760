// SPDX-License-Identifier: Apache-2.0

//! The twelve acceptance criteria, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

use binary_theta::numerics::PrecisionContext;
use binary_theta::verify::{self, Check};

const DISCS: [i64; 5] = [-7, -15, -23, -47, -71];

fn ctx() -> PrecisionContext {
    PrecisionContext::default().with_nodes(32, 32)
}

fn criterion(id: u32, title: &str, run: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let c = run();
    println!("[{id:>2}] {} ({}, {:.1}s)", c.line(), title, start.elapsed().as_secs_f64());
    c.passed
}

fn main() -> ExitCode {
    let ctx = ctx();
    let mut results = vec![];
    results.push(criterion(1, "class numbers", || {
        verify::class_group_oracle(&[(-7, 1), (-15, 2), (-23, 3), (-47, 5), (-71, 7)])
    }));
    results.push(criterion(2, "dimension of the theta space", || {
        let parts = [(-23, 2), (-15, 2), (-47, 3)].iter().map(|&(d, k)| verify::dimension_formula(d, k, 50)).collect();
        Check::merge("dimension formula", parts)
    }));
    results.push(criterion(3, "cuspidality", || {
        Check::merge("cuspidality", DISCS.iter().map(|&d| verify::cuspidality(d)).collect())
    }));
    results.push(criterion(4, "orthogonality", || verify::orthogonality(-47, 1e-6, &ctx)));
    results.push(criterion(5, "closed form against quadrature", || {
        let parts = [-23, -47].iter().map(|&d| verify::closed_form_agreement(d, 1e-5, &ctx)).collect();
        Check::merge("closed form", parts)
    }));
    results.push(criterion(6, "lift of theta", || verify::lift_of_theta(-23, 10, 30, 1e-8, &ctx)));
    results.push(criterion(7, "component zero of the lift", || verify::lift_component_zero(-23, 50, 1e-8, &ctx)));
    results.push(criterion(8, "adjointness", || verify::adjointness(-23, 1e-5, &ctx)));
    results.push(criterion(9, "scalar norm chain", || verify::scalar_norm_chain(-23, 1e-5, &ctx)));
    results.push(criterion(10, "Weil representation", || {
        let parts = [-7, -15, -23].iter().map(|&d| verify::weil_integrity(d, 20, 1e-20, 128)).collect();
        Check::merge("Weil representation", parts)
    }));
    results.push(criterion(11, "eta", || verify::eta_consistency(&DISCS, 1e-30, &ctx)));
    results.push(criterion(12, "exactness", || {
        Check::merge("exactness", DISCS.iter().map(|&d| verify::exactness(d, 50)).collect())
    }));
    // even class number: the only discriminant here with a real nontrivial character
    let extra = verify::closed_form_agreement(-15, 1e-5, &ctx);
    println!("[ +] {} (real character pairing)", extra.line());
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    let passed = results.len() - failed.len();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if failed.is_empty() && extra.passed {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}, extra check passed: {}", extra.passed);
        ExitCode::FAILURE
    }
}
