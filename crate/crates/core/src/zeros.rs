//! Ingestion of zeta-zero ordinate tables.
//!
//! The on-disk format is one decimal ordinate per line, strictly ascending
//! (the layout of the classical published tables). Ordinates loaded from a
//! file are zeros on the critical line; synthetic off-line entries can be
//! added programmatically for counterexample experiments.

use std::path::Path;

use crate::error::{Error, Result};

/// One zero `beta + i gamma`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Zero {
    pub beta: f64,
    pub gamma: f64,
}

/// Ascending table of zeros, with a label recording where it came from.
#[derive(Clone, Debug)]
pub struct ZeroTable {
    entries: Vec<Zero>,
    source: String,
}

impl ZeroTable {
    /// Builds a table from entries, sorting by ordinate.
    pub fn from_entries(mut entries: Vec<Zero>, source: impl Into<String>) -> Result<ZeroTable> {
        entries.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
        for e in &entries {
            if !(e.gamma > 0.0) {
                return Err(Error::BadParameter(format!(
                    "zero ordinates must be positive, got {}",
                    e.gamma
                )));
            }
        }
        Ok(ZeroTable {
            entries,
            source: source.into(),
        })
    }

    pub fn entries(&self) -> &[Zero] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn max_ordinate(&self) -> f64 {
        self.entries.last().map_or(0.0, |z| z.gamma)
    }

    /// Ordinates only (every entry), ascending.
    pub fn ordinates(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|z| z.gamma)
    }
}

/// Loads a critical-line ordinate table from a plain-text file.
///
/// Each line holds one decimal ordinate; lines must be strictly ascending.
/// Blank lines and `#` comments are permitted.
pub fn load_zero_table(path: impl AsRef<Path>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_zero_table(&text, &path.display().to_string())
}

/// Parses the table format from a string; `name` labels parse errors.
pub fn parse_zero_table(text: &str, name: &str) -> Result<ZeroTable> {
    let mut entries = Vec::new();
    let mut prev = 0.0f64;
    for (line_idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let gamma: f64 = line.parse().map_err(|_| Error::ZeroTableParse {
            path: name.to_string(),
            line: line_idx + 1,
            message: format!("malformed ordinate '{line}'"),
        })?;
        if !(gamma > prev) {
            return Err(Error::ZeroTableParse {
                path: name.to_string(),
                line: line_idx + 1,
                message: format!("ordinates must be strictly ascending ({gamma} after {prev})"),
            });
        }
        prev = gamma;
        entries.push(Zero { beta: 0.5, gamma });
    }
    Ok(ZeroTable {
        entries,
        source: name.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_ordinates() {
        let t = parse_zero_table("14.134725\n21.022040\n", "inline").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.entries()[0].beta, 0.5);
        assert!((t.max_ordinate() - 21.022040).abs() < 1e-12);
    }

    #[test]
    fn empty_file_is_empty_table() {
        let t = parse_zero_table("", "inline").unwrap();
        assert!(t.is_empty());
        assert_eq!(t.max_ordinate(), 0.0);
    }

    #[test]
    fn descending_lines_fail_with_line_number() {
        match parse_zero_table("21.0\n14.1\n", "inline") {
            Err(Error::ZeroTableParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_line_fails_with_line_number() {
        match parse_zero_table("14.1\nnot-a-number\n", "inline") {
            Err(Error::ZeroTableParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let t = parse_zero_table("# header\n\n14.1\n# mid\n21.0\n", "inline").unwrap();
        assert_eq!(t.len(), 2);
    }
}
