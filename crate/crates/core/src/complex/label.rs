use std::fmt;

use serde::{Deserialize, Serialize};

/// Which family of printable labels a complex carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKind {
    /// Sorted vertex tuples, vertices numbered from 1.
    Simplicial,
    /// Strings over `{0,1,*}`; the number of stars is the cell dimension.
    Cube,
    /// Sets of signed coordinates `±i` with distinct `i`, sorted by `i`.
    Cross,
    /// Free-form text, for complexes loaded from files.
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Simplex(Vec<u32>),
    Cube(String),
    Signed(Vec<i32>),
    Text(String),
}

impl Label {
    pub fn kind(&self) -> LabelKind {
        match self {
            Label::Simplex(_) => LabelKind::Simplicial,
            Label::Cube(_) => LabelKind::Cube,
            Label::Signed(_) => LabelKind::Cross,
            Label::Text(_) => LabelKind::Generic,
        }
    }

    pub fn vertices(&self) -> Option<&[u32]> {
        match self {
            Label::Simplex(v) => Some(v),
            _ => None,
        }
    }

    /// Parses the printed form of a label, e.g. `(1,2,3)`, `01*` or `(+1,-3)`.
    pub fn parse(kind: LabelKind, text: &str) -> Option<Label> {
        let inner = text.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let items = || inner.split(',').map(str::trim).filter(|t| !t.is_empty());
        match kind {
            LabelKind::Simplicial => {
                let mut v: Vec<u32> = items().map(|t| t.parse().ok()).collect::<Option<_>>()?;
                v.sort_unstable();
                (!v.is_empty()).then_some(Label::Simplex(v))
            }
            LabelKind::Cross => {
                let mut v: Vec<i32> = items().map(|t| t.trim_start_matches('+').parse().ok()).collect::<Option<_>>()?;
                v.sort_by_key(|c| c.unsigned_abs());
                (!v.is_empty() && !v.contains(&0)).then_some(Label::Signed(v))
            }
            LabelKind::Cube => {
                let s = text.trim();
                (!s.is_empty() && s.chars().all(|c| matches!(c, '0' | '1' | '*'))).then(|| Label::Cube(s.to_string()))
            }
            LabelKind::Generic => Some(Label::Text(text.trim().to_string())),
        }
    }

    pub(crate) fn to_json(&self) -> serde_json::Value {
        match self {
            Label::Simplex(v) => serde_json::json!(v),
            Label::Signed(v) => serde_json::json!(v),
            Label::Cube(s) | Label::Text(s) => serde_json::json!(s),
        }
    }

    pub(crate) fn from_json(kind: LabelKind, value: &serde_json::Value) -> Option<Label> {
        match kind {
            LabelKind::Simplicial => serde_json::from_value::<Vec<u32>>(value.clone()).ok().map(Label::Simplex),
            LabelKind::Cross => serde_json::from_value::<Vec<i32>>(value.clone()).ok().map(Label::Signed),
            LabelKind::Cube => {
                let s = value.as_str()?;
                s.chars().all(|c| matches!(c, '0' | '1' | '*')).then(|| Label::Cube(s.to_string()))
            }
            LabelKind::Generic => Some(Label::Text(match value.as_str() {
                Some(s) => s.to_string(),
                None => value.to_string(),
            })),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Simplex(v) => {
                let parts: Vec<String> = v.iter().map(u32::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Label::Signed(v) => {
                let parts: Vec<String> = v.iter().map(|c| format!("{c:+}")).collect();
                write!(f, "({})", parts.join(","))
            }
            Label::Cube(s) | Label::Text(s) => f.write_str(s),
        }
    }
}
