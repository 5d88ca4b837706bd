//! `pickychar suite`: every criterion, one JSON report each plus a summary
//! CSV.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use pickychar::criteria::{run, CriterionResult, SuiteConfig, CRITERIA};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::output::{criterion_json, envelope, Output};

#[derive(Serialize)]
struct SummaryRow<'a> {
    id: u8,
    title: &'a str,
    pass: bool,
    checked: usize,
    failed: usize,
}

pub fn run_suite(cfg: &SuiteConfig, only: &[u8], out: &Path) -> Result<Output> {
    let ids: Vec<u8> = CRITERIA.iter().map(|&(id, _)| id).filter(|id| only.is_empty() || only.contains(id)).collect();
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let results: Vec<CriterionResult> = ids
        .par_iter()
        .map(|&id| run(id, cfg).with_context(|| format!("criterion {id}")))
        .collect::<Result<_>>()?;

    let mut text = String::new();
    for r in &results {
        let path = out.join(format!("criterion-{:02}.json", r.id));
        let doc = envelope("criterion", criterion_json(r));
        fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
        text.push_str(&format!("{} {:>2} {}\n", if r.pass { "PASS" } else { "FAIL" }, r.id, r.title));
        for w in &r.failures {
            text.push_str(&format!("        {w}\n"));
        }
        eprintln!("criterion {:>2}: {} ms", r.id, r.millis);
    }

    let path = out.join("summary.csv");
    let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
    for r in &results {
        w.serialize(SummaryRow { id: r.id, title: &r.title, pass: r.pass, checked: r.checked, failed: r.failed })
            .with_context(|| format!("writing {}", path.display()))?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;

    let passed = results.iter().filter(|r| r.pass).count();
    text.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
    let body = json!({
        "out": out.display().to_string(),
        "passed": passed,
        "total": results.len(),
        "criteria": results.iter().map(criterion_json).collect::<Vec<_>>(),
    });
    Ok(Output::new("suite", body, text).failing(passed != results.len()))
}
