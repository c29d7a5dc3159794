//! Batch verification of the bundled solution records.
//!
//! Every bundled scenario is loaded, instantiated once per sign of `eps`,
//! and pushed through its compatibility system. Residuals are reduced
//! modulo the record's rewrite rules; a record passes when every reduced
//! residual is exactly zero. Declared expectations (verdict, residual
//! values, curvature values) are checked against the computed canonical
//! forms.
//!
//! Run with: cargo run --example verify_solutions

use supergc::data::{load_scenario, scenario_names};

fn main() {
    let mut all_ok = true;

    for name in scenario_names() {
        let scenario = load_scenario(name).expect("bundled scenario loads");
        let run = scenario.run().expect("scenario runs");
        println!("== {name} ==");
        for note in &scenario.notes {
            println!("   {note}");
        }
        for case in &run.cases {
            let eps = match case.report.epsilon {
                Some(s) => format!("eps = {s:+}"),
                None => "no eps".to_string(),
            };
            let verdict = if case.report.pass { "PASS" } else { "FAIL" };
            let expected = match case.expected_pass {
                Some(true) => " (expected PASS)",
                Some(false) => " (expected FAIL)",
                None => " (no declared verdict)",
            };
            println!("   [{verdict}] {} | {eps}{expected}", case.report.system);
            for row in &case.report.residuals {
                if !row.zero {
                    println!("      residual {} = {}", row.name, row.reduced);
                }
            }
            for check in &case.values {
                let mark = if check.ok { "ok" } else { "MISMATCH" };
                println!("      value {}: {} [{mark}]", check.key, check.actual);
                if !check.ok {
                    println!("         expected {}", check.expected);
                }
            }
            if !case.ok {
                all_ok = false;
            }
        }
        println!();
    }

    println!(
        "overall: {}",
        if all_ok {
            "every record met its declared expectations"
        } else {
            "some record missed its declared expectations"
        }
    );
}
