//! Input parsing and deterministic output writing.

use coshtrans::error::{Error, Result};
use coshtrans::json::psi_from_json_str;
use coshtrans::{AffineMap, PsiFunction};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

/// Load a transform from `catalog:NAME` (with `--param` pairs) or from a
/// JSON file path.
pub fn load_psi(spec: &str, params: &[(String, f64)]) -> Result<PsiFunction> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        let map: BTreeMap<String, f64> = params.iter().cloned().collect();
        coshtrans::catalog_get(name, &map)
    } else {
        let text = fs::read_to_string(spec)
            .map_err(|e| Error::InvalidInput(format!("cannot read {spec}: {e}")))?;
        psi_from_json_str(&text)
    }
}

pub fn load_operator(path: &Path) -> Result<AffineMap> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("operator JSON: {e}")))
}

/// Moments from a JSON array or CSV/whitespace-separated text.
pub fn load_moments(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed)
            .map_err(|e| Error::InvalidInput(format!("moments JSON: {e}")));
    }
    let mut values = vec![];
    for token in trimmed.split(|c: char| c == ',' || c.is_whitespace()) {
        if token.is_empty() {
            continue;
        }
        values.push(
            token
                .parse::<f64>()
                .map_err(|e| Error::InvalidInput(format!("bad moment `{token}`: {e}")))?,
        );
    }
    Ok(values)
}

/// clap value parser for `--param key=value`.
pub fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let value: f64 = value
        .parse()
        .map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((key.to_string(), value))
}

pub fn ensure_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", dir.display())))
}

pub fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("serialization: {e}")))?;
    fs::write(path, text + "\n")
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

/// Two-column CSV with 17-significant-digit floats.
pub fn write_csv(path: &Path, header: (&str, &str), rows: &[(f64, f64)]) -> Result<()> {
    let mut text = format!("{},{}\n", header.0, header.1);
    for (a, b) in rows {
        text.push_str(&format!("{a:.16e},{b:.16e}\n"));
    }
    fs::write(path, text)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

pub fn out_file(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

/// Exit-code mapping: 2 for input/schema problems, 3 for numerical
/// failures.
pub fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidInput(_) | Error::UnknownCatalogEntry(_) | Error::BadParams { .. } => 2,
        Error::DivergentMoment { .. }
        | Error::Overflow { .. }
        | Error::NegativeCoefficient { .. }
        | Error::NonFiniteEntry { .. }
        | Error::IllConditioned(_) => 3,
    }
}
