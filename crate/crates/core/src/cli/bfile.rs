//! OEIS b-file reader: one `n a(n)` pair per line, `#` comments.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BFileError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: index {n} does not increase")]
    NotIncreasing { line: usize, n: i64 },
    #[error("no entries")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    /// Taken from the file name (`b053141.txt` → `A053141`) when possible.
    pub id: Option<String>,
    pub entries: Vec<(i64, BigInt)>,
}

impl BFile {
    pub fn read(path: &Path) -> Result<Self, BFileError> {
        let text = std::fs::read_to_string(path).map_err(|e| BFileError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        let mut b: BFile = text.parse()?;
        b.id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .and_then(id_from_stem);
        Ok(b)
    }

    pub fn first_index(&self) -> i64 {
        self.entries[0].0
    }
}

fn id_from_stem(stem: &str) -> Option<String> {
    let digits = stem.strip_prefix('b').or_else(|| stem.strip_prefix('A'))?;
    (digits.len() == 6 && digits.bytes().all(|c| c.is_ascii_digit())).then(|| format!("A{digits}"))
}

impl FromStr for BFile {
    type Err = BFileError;

    fn from_str(text: &str) -> Result<Self, BFileError> {
        let mut entries: Vec<(i64, BigInt)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let mut fields = body.split_whitespace();
            let (Some(n), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(BFileError::Syntax {
                    line,
                    reason: format!("expected two fields, got {body:?}"),
                });
            };
            let n: i64 = n.parse().map_err(|_| BFileError::Syntax {
                line,
                reason: format!("bad index {n:?}"),
            })?;
            let v: BigInt = v.parse().map_err(|_| BFileError::Syntax {
                line,
                reason: format!("bad value {v:?}"),
            })?;
            if entries.last().is_some_and(|&(prev, _)| n <= prev) {
                return Err(BFileError::NotIncreasing { line, n });
            }
            entries.push((n, v));
        }
        if entries.is_empty() {
            return Err(BFileError::Empty);
        }
        Ok(BFile { id: None, entries })
    }
}

impl fmt::Display for BFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(id) = &self.id {
            writeln!(f, "# {id}")?;
        }
        for (n, v) in &self.entries {
            writeln!(f, "{n} {v}")?;
        }
        Ok(())
    }
}

/// Outcome of aligning a b-file against a generated sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Alignment {
    /// Entry `n` of the file equals `seq[n + shift]` for every entry.
    Match { shift: i64, compared: usize },
    /// No shift matched; details of the shift whose agreement ran longest.
    Mismatch {
        shift: i64,
        n: i64,
        expected: Option<BigInt>,
        found: BigInt,
    },
}

/// Shifts tried, smallest magnitude first.
pub const SHIFTS: [i64; 5] = [0, -1, 1, -2, 2];

/// Compares the whole file against `seq` (indexed from 0) under each shift.
/// Entries mapping before `seq[0]` or past its end count as mismatches, so a
/// match always covers every entry.
pub fn align(b: &BFile, seq: &[BigInt]) -> Alignment {
    let mut best: Option<(usize, Alignment)> = None;
    for shift in SHIFTS {
        let mut agreed = 0;
        let mut failure = None;
        for (n, v) in &b.entries {
            let idx = n + shift;
            let want = usize::try_from(idx).ok().and_then(|i| seq.get(i));
            if want == Some(v) {
                agreed += 1;
            } else {
                failure = Some(Alignment::Mismatch {
                    shift,
                    n: *n,
                    expected: want.cloned(),
                    found: v.clone(),
                });
                break;
            }
        }
        match failure {
            None => {
                return Alignment::Match {
                    shift,
                    compared: agreed,
                }
            }
            Some(m) => {
                if best.as_ref().is_none_or(|(a, _)| agreed > *a) {
                    best = Some((agreed, m));
                }
            }
        }
    }
    best.expect("SHIFTS is non-empty").1
}
