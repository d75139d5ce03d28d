//! Plain `key = value` configuration files.
//!
//! One assignment per line; `#` starts a comment (full-line or trailing);
//! blank lines are ignored. Keys match the long CLI flags with underscores:
//!
//! ```text
//! # reference operating point
//! m_elems   = 32
//! n_elems   = 32
//! nb1       = 3
//! nb2       = 3
//! snr_sr_db = 30
//! snr_rd_db = 30
//! snr_re_db = 40
//! snr_je_db = 10        # or `none` to disable jamming
//! setup     = dual      # dual | first | second
//! ```
//!
//! `nb` assigns both register widths at once; `snr_db` assigns both
//! legitimate-hop SNRs at once.

use anyhow::{bail, Context, Result};
use ris_secrecy::{Setup, SystemConfig};

use crate::args::parse_jammer_db;

/// Apply the assignments in `text` on top of `cfg`.
///
/// The result is not re-validated here; callers validate once after all
/// layers (defaults, file, flags) are applied.
pub fn apply(cfg: &mut SystemConfig, text: &str) -> Result<()> {
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = match raw_line.split_once('#') {
            Some((before, _)) => before,
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`, got '{raw_line}'", lineno + 1);
        };
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            bail!("line {}: empty value for key '{key}'", lineno + 1);
        }
        assign(cfg, key, value).with_context(|| format!("line {}", lineno + 1))?;
    }
    Ok(())
}

fn parse_count(key: &str, value: &str) -> Result<u32> {
    value
        .parse::<u32>()
        .with_context(|| format!("key '{key}': expected a non-negative integer, got '{value}'"))
}

fn parse_db(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .with_context(|| format!("key '{key}': expected a dB value, got '{value}'"))
}

fn assign(cfg: &mut SystemConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "m_elems" | "M" => cfg.m_elems = parse_count(key, value)?,
        "n_elems" | "N" => cfg.n_elems = parse_count(key, value)?,
        "elems" => {
            let k = parse_count(key, value)?;
            cfg.m_elems = k;
            cfg.n_elems = k;
        }
        "nb1" => cfg.nb1 = parse_count(key, value)?,
        "nb2" => cfg.nb2 = parse_count(key, value)?,
        "nb" => {
            let b = parse_count(key, value)?;
            cfg.nb1 = b;
            cfg.nb2 = b;
        }
        "snr_sr_db" => cfg.snr_sr_db = parse_db(key, value)?,
        "snr_rd_db" => cfg.snr_rd_db = parse_db(key, value)?,
        "snr_db" => {
            let v = parse_db(key, value)?;
            cfg.snr_sr_db = v;
            cfg.snr_rd_db = v;
        }
        "snr_re_db" => cfg.snr_re_db = parse_db(key, value)?,
        "snr_je_db" => cfg.snr_je_db = parse_jammer_db(value)?,
        "setup" => {
            cfg.setup = value
                .parse::<Setup>()
                .map_err(|e| anyhow::anyhow!("key 'setup': {e}"))?
        }
        other => bail!(
            "unknown key '{other}' (valid: m_elems/M, n_elems/N, elems, nb1, nb2, nb, \
             snr_sr_db, snr_rd_db, snr_db, snr_re_db, snr_je_db, setup)"
        ),
    }
    Ok(())
}
