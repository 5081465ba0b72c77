//! Newline-delimited JSON: one record per line.

use std::io::{BufRead, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{FragmentError, Result};

pub fn write_ndjson<W: Write, T: Serialize>(w: &mut W, items: &[T]) -> std::io::Result<()> {
    for it in items {
        serde_json::to_writer(&mut *w, it)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Blank lines are skipped; errors name the offending line.
pub fn read_ndjson<R: BufRead, T: DeserializeOwned>(r: R) -> Result<Vec<T>> {
    let mut out = vec![];
    for (k, line) in r.lines().enumerate() {
        let line = line.map_err(|e| FragmentError::Format(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| FragmentError::Format(format!("line {}: {e}", k + 1)))?);
    }
    Ok(out)
}
