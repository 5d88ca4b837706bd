//! One PASS/FAIL line per acceptance criterion.
//!
//! Two criteria fail for reasons analysed in the README: the block-structure
//! picky test is only sound for p = 2 (criterion 6), and the top 2-part
//! count at k = 4 is 16, not 4 (criterion 12). The test asserts every other
//! criterion passes and that these two fail for exactly those reasons, so a
//! change in either direction is noticed.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::time::Instant;

use pickychar::criteria::{run, SuiteConfig, CRITERIA};

const KNOWN_FAILURES: [u8; 2] = [6, 12];

fn main() {
    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let mut unexpected = Vec::new();
    for (id, title) in CRITERIA {
        let r = run(id, &cfg).unwrap_or_else(|e| panic!("criterion {id} errored: {e}"));
        println!(
            "{} criterion {id:>2} ({title}): {} checks, {} failed, {} ms",
            if r.pass { "PASS" } else { "FAIL" },
            r.checked,
            r.failed,
            r.millis
        );
        for w in &r.failures {
            println!("       {w}");
        }
        for n in &r.notes {
            println!("       note: {n}");
        }
        match (r.pass, KNOWN_FAILURES.contains(&id)) {
            (true, false) => {}
            (false, true) => assert_known(id, &r.failures),
            (pass, _) => unexpected.push(format!("criterion {id}: pass = {pass}")),
        }
    }
    println!("total {:.1} s", start.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        eprintln!("unexpected results: {unexpected:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} criteria as expected", CRITERIA.len());
}

fn assert_known(id: u8, failures: &[String]) {
    match id {
        // Only odd primes disagree, and only where p >= 5 or 9 divides a block.
        6 => assert!(failures.iter().all(|f| !f.starts_with("p = 2,")), "{failures:?}"),
        // Only the k = 4 top count is off.
        12 => assert_eq!(failures, ["k = 4: 16 characters with 2-part 4, expected 4"]),
        _ => unreachable!(),
    }
}
