//! Output helpers shared by the report producers and the command line.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Version stamped into every JSON document written by the tools.
pub const SCHEMA_VERSION: u32 = 1;

/// A report wrapped with its schema version and producing command.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    #[serde(flatten)]
    pub body: &'a T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'a str, body: &'a T) -> Self {
        Envelope {
            schema_version: SCHEMA_VERSION,
            command,
            body,
        }
    }
}

/// Pretty JSON with a trailing newline. Floats use the shortest
/// representation that parses back to the same value; non-finite values
/// become `null`.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so readers never observe a partial report.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.flush().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Serializes infinities as the strings `"inf"` and `"-inf"` instead of
/// `null`, for fields where an unbounded value is meaningful.
pub fn extended_f64<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*x)
    }
}

/// Formats a float with 17 significant digits for CSV output.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt17_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 123456.789, 0.0] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
    }
}
