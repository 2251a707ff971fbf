//! JSON file format.
//!
//! Full form: `{"kind": ..., "top_dim": d, "cells": [[labels of dim 0], ...],
//! "boundary": [[[faces], ...] for each dim >= 1]}`. Simplicial shorthand:
//! `{"maximal_faces": [[v, ...], ...]}`, closed downward on load.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Complex, Label, LabelKind};
use crate::error::{CobexError, Result};

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<LabelKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    top_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cells: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundary: Option<Vec<Vec<Vec<u32>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    maximal_faces: Option<Vec<Vec<u32>>>,
}

fn infer_kind(cells: &[Vec<Value>]) -> LabelKind {
    let mut values = cells.iter().flatten().peekable();
    match values.peek() {
        Some(Value::Array(_)) => {
            let negative = cells.iter().flatten().any(|v| {
                v.as_array().is_some_and(|a| a.iter().any(|x| x.as_i64().is_some_and(|i| i < 0)))
            });
            if negative {
                LabelKind::Cross
            } else {
                LabelKind::Simplicial
            }
        }
        _ => {
            let cube = cells
                .iter()
                .enumerate()
                .all(|(d, ls)| ls.iter().all(|v| v.as_str().is_some_and(|s| is_cube_label(s, d))));
            if cube {
                LabelKind::Cube
            } else {
                LabelKind::Generic
            }
        }
    }
}

fn is_cube_label(s: &str, dim: usize) -> bool {
    s.chars().all(|c| matches!(c, '0' | '1' | '*')) && s.chars().filter(|&c| c == '*').count() == dim
}

impl Complex {
    pub fn to_json_value(&self) -> Value {
        let file = ComplexFile {
            kind: Some(self.kind),
            top_dim: Some(self.top_dim()),
            cells: Some(self.labels.iter().map(|ls| ls.iter().map(Label::to_json).collect()).collect()),
            boundary: Some(self.boundary[1..].to_vec()),
            maximal_faces: None,
        };
        serde_json::to_value(file).expect("complex serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("complex serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Complex> {
        let file: ComplexFile = serde_json::from_str(text)?;
        if let Some(faces) = file.maximal_faces {
            if file.cells.is_some() {
                return Err(CobexError::MalformedComplex("give either cells or maximal_faces, not both".into()));
            }
            return Complex::from_maximal_faces(&faces);
        }
        let cells = file.cells.ok_or_else(|| CobexError::MalformedComplex("missing \"cells\"".into()))?;
        if cells.is_empty() {
            return Err(CobexError::MalformedComplex("\"cells\" is empty".into()));
        }
        if let Some(top) = file.top_dim {
            if top + 1 != cells.len() {
                return Err(CobexError::MalformedComplex(format!(
                    "top_dim {top} disagrees with {} cell lists",
                    cells.len()
                )));
            }
        }
        let kind = file.kind.unwrap_or_else(|| infer_kind(&cells));
        let mut labels = Vec::with_capacity(cells.len());
        for (d, ls) in cells.iter().enumerate() {
            let mut out = Vec::with_capacity(ls.len());
            for v in ls {
                let label = Label::from_json(kind, v)
                    .ok_or_else(|| CobexError::MalformedComplex(format!("dimension {d}: bad {kind:?} label {v}")))?;
                check_label(&label, d)?;
                out.push(label);
            }
            labels.push(out);
        }
        let mut boundary = vec![vec![Vec::new(); labels[0].len()]];
        boundary.extend(file.boundary.unwrap_or_default());
        if boundary.len() != labels.len() {
            return Err(CobexError::MalformedComplex(format!(
                "expected {} boundary lists, found {}",
                labels.len() - 1,
                boundary.len() - 1
            )));
        }
        Complex::from_parts(kind, labels, boundary)
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Complex> {
        Complex::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }
}

fn check_label(label: &Label, dim: usize) -> Result<()> {
    let ok = match label {
        Label::Simplex(v) => v.len() == dim + 1 && v.windows(2).all(|w| w[0] < w[1]),
        Label::Signed(v) => {
            v.len() == dim + 1 && v.iter().all(|&c| c != 0) && v.windows(2).all(|w| w[0].abs() < w[1].abs())
        }
        Label::Cube(s) => is_cube_label(s, dim),
        Label::Text(_) => true,
    };
    if ok {
        Ok(())
    } else {
        Err(CobexError::MalformedComplex(format!("label {label} does not describe a {dim}-cell")))
    }
}
