//! JSON representation specs: `{"dim": n, "generators": [{"target": [...], "sign": [...]}, ...]}`.

use serde::{Deserialize, Serialize};

use super::{GenPerm, GroupError};

/// Generator images of one representation, as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepSpec {
    pub dim: usize,
    pub generators: Vec<GenPerm>,
}

#[derive(Deserialize)]
struct RawGenerator {
    target: Vec<usize>,
    sign: Option<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawRepSpec {
    dim: usize,
    generators: Vec<RawGenerator>,
}

impl RepSpec {
    /// Parses and validates a representation spec. Invalid generators are
    /// reported with the 1-based line their object starts on.
    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let raw: RawRepSpec = serde_json::from_str(text)
            .map_err(|e| GroupError::Parse { line: e.line(), message: e.to_string() })?;
        Self::from_raw(raw, |index| generator_line(text, "generators", index))
    }

    /// Same as [`RepSpec::from_json`] for an already-parsed value, e.g. a rep
    /// embedded in a larger document. Lines are then unavailable.
    pub fn from_value(value: serde_json::Value) -> Result<Self, GroupError> {
        let raw: RawRepSpec =
            serde_json::from_value(value).map_err(|e| GroupError::Parse { line: 0, message: e.to_string() })?;
        Self::from_raw(raw, |_| None)
    }

    fn from_raw(raw: RawRepSpec, line_of: impl Fn(usize) -> Option<usize>) -> Result<Self, GroupError> {
        if raw.dim == 0 {
            return Err(GroupError::EmptyDimension);
        }
        let mut generators = Vec::with_capacity(raw.generators.len());
        for (index, g) in raw.generators.into_iter().enumerate() {
            let fail = |reason: String| GroupError::InvalidGenerator { index, line: line_of(index), reason };
            if g.target.len() != raw.dim {
                return Err(fail(format!("target has length {}, expected dim {}", g.target.len(), raw.dim)));
            }
            let sign = match g.sign {
                None => vec![1; raw.dim],
                Some(s) if s.len() != raw.dim => {
                    return Err(fail(format!("sign has length {}, expected dim {}", s.len(), raw.dim)))
                }
                Some(s) => s
                    .into_iter()
                    .map(|v| match v {
                        1 => Ok(1i8),
                        -1 => Ok(-1i8),
                        other => Err(fail(format!("sign entry {other} is not +1 or -1"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            };
            generators.push(GenPerm::new(g.target, sign).map_err(|e| fail(e.to_string()))?);
        }
        if generators.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        Ok(RepSpec { dim: raw.dim, generators })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("RepSpec serializes")
    }
}

/// Line (1-based) on which the `index`-th object of the top-level array `key`
/// opens. String contents are skipped so braces inside strings do not count.
pub(crate) fn generator_line(text: &str, key: &str, index: usize) -> Option<usize> {
    let needle = format!("\"{key}\"");
    let start = text.find(&needle)? + needle.len();
    let bytes = text.as_bytes();
    let mut line = 1 + text[..start].matches('\n').count();
    let mut depth = 0i32;
    let mut in_string = false;
    let mut escaped = false;
    let mut seen = 0usize;
    let mut entered = false;
    for &b in &bytes[start..] {
        if b == b'\n' {
            line += 1;
        }
        if in_string {
            match (escaped, b) {
                (true, _) => escaped = false,
                (false, b'\\') => escaped = true,
                (false, b'"') => in_string = false,
                _ => {}
            }
            continue;
        }
        match b {
            b'"' => in_string = true,
            b'[' | b'{' => {
                if b == b'[' && !entered {
                    entered = true;
                    depth = 1;
                    continue;
                }
                if entered && depth == 1 && b == b'{' {
                    if seen == index {
                        return Some(line);
                    }
                    seen += 1;
                }
                depth += 1;
            }
            b']' | b'}' => {
                depth -= 1;
                if entered && depth == 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}
