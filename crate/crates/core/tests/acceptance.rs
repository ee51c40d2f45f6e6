//! Runs every acceptance criterion, printing one line per criterion, and
//! exits nonzero if any fails.

use std::process::ExitCode;

use tnomial::verify::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let ids: Vec<u8> = CRITERIA.iter().map(|c| c.0).collect();
    assert_eq!(ids, (1..=7).collect::<Vec<_>>(), "criteria list is incomplete");
    let mut failed = 0;
    for id in ids {
        let outcome = run_criterion(id).expect("known criterion");
        println!("{outcome}");
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
