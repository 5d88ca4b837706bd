//! Character columns, optionally spilled to `PICKYCHAR_CACHE_DIR`.

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use num_bigint::BigInt;
use pickychar::characters::column;
use pickychar::{CycleType, Partition};
use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "PICKYCHAR_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    lambda: Partition,
    value: String,
}

fn cache_file(t: &CycleType) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    let name = t.lengths().iter().map(|l| l.to_string()).collect::<Vec<_>>().join("_");
    Some(PathBuf::from(dir).join(format!("column-{name}.json")))
}

/// `χ^λ(t)` for every `λ ⊢ n`, read from or written to the cache directory
/// when one is configured.
pub fn cached_column(t: &CycleType) -> Result<Vec<(Partition, BigInt)>> {
    let Some(path) = cache_file(t) else {
        return Ok(column(t));
    };
    if path.exists() {
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let entries: Vec<Entry> =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        return entries
            .into_iter()
            .map(|e| {
                let v: BigInt = e.value.parse().with_context(|| format!("bad value in {}", path.display()))?;
                Ok((e.lambda, v))
            })
            .collect();
    }
    let col = column(t);
    let entries: Vec<Entry> = col.iter().map(|(l, v)| Entry { lambda: l.clone(), value: v.to_string() }).collect();
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(&path, serde_json::to_string(&entries)?).with_context(|| format!("writing {}", path.display()))?;
    Ok(col)
}
