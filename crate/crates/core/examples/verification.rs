//! Run the randomized verification battery from code.

use coneq::pseudoherm::Signature;
use coneq::suites::{run_all, run_suite};

fn main() -> coneq::Result<()> {
    let report = run_suite("lemma1", Signature::new(2, 2)?, 7, 100)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("serializable")
    );

    for sig in Signature::test_battery() {
        let reports = run_all(sig, 1, 20);
        let failed: Vec<&str> = reports
            .iter()
            .filter(|r| !r.ok())
            .map(|r| r.suite.as_str())
            .collect();
        println!("{sig}: {} suites, failed {:?}", reports.len(), failed);
    }
    Ok(())
}
