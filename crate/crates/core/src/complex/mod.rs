//! Finite regular cell complexes with mod-2 incidence.
//!
//! Cells are addressed by dimension and a dense per-dimension index. Each
//! cell of dimension `d >= 1` stores the sorted indices of the `(d-1)`-cells
//! that appear an odd number of times in its boundary. Labels are kept only
//! for input/output.

mod builders;
mod io;
mod label;

use std::collections::HashMap;

use crate::error::{invalid, CobexError, Result};
use crate::rational::{ratio, Rational};

pub use label::{Label, LabelKind};

/// A cell address.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId {
    pub dim: usize,
    pub index: usize,
}

/// Immutable cell complex. Safe to share between threads.
#[derive(Clone, Debug)]
pub struct Complex {
    kind: LabelKind,
    labels: Vec<Vec<Label>>,
    /// `boundary[d][i]`: faces of cell `i` of dimension `d`; empty for `d = 0`.
    boundary: Vec<Vec<Vec<u32>>>,
    /// `cofaces[d][i]`: `(d+1)`-cells whose boundary contains cell `i` of dimension `d`.
    cofaces: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Label, u32>>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.labels == other.labels && self.boundary == other.boundary
    }
}

impl Eq for Complex {}

/// Incidence statistics of k-cells against (k+1)-cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub k: usize,
    /// `D_k`: the largest number of (k+1)-cells containing one k-cell.
    pub max_degree: usize,
    pub min_degree: usize,
    pub mean_degree: Rational,
}

impl Complex {
    /// Builds and validates a complex from labels and boundary lists.
    ///
    /// Boundary lists are reduced mod 2 first: an index listed an even number
    /// of times drops out.
    pub fn from_parts(kind: LabelKind, labels: Vec<Vec<Label>>, boundary: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        if labels.is_empty() {
            return Err(CobexError::MalformedComplex("a complex needs a dimension-0 cell list".into()));
        }
        if boundary.len() != labels.len() {
            return Err(CobexError::MalformedComplex(format!(
                "{} label lists but {} boundary lists",
                labels.len(),
                boundary.len()
            )));
        }
        let mut boundary = boundary;
        for (d, cells) in boundary.iter_mut().enumerate() {
            if cells.len() != labels[d].len() {
                return Err(CobexError::MalformedComplex(format!(
                    "dimension {d}: {} labels but {} boundary entries",
                    labels[d].len(),
                    cells.len()
                )));
            }
            for b in cells.iter_mut() {
                b.sort_unstable();
                let mut reduced: Vec<u32> = Vec::with_capacity(b.len());
                for &f in b.iter() {
                    if reduced.last() == Some(&f) {
                        reduced.pop();
                    } else {
                        reduced.push(f);
                    }
                }
                *b = reduced;
                if d == 0 && !b.is_empty() {
                    return Err(CobexError::MalformedComplex("vertices cannot have faces".into()));
                }
                if d > 0 && b.iter().any(|&f| f as usize >= labels[d - 1].len()) {
                    return Err(CobexError::MalformedComplex(format!("dimension {d}: face index out of range")));
                }
            }
        }
        for ls in &labels {
            if ls.iter().any(|l| l.kind() != kind) {
                return Err(CobexError::MalformedComplex(format!("labels must all be of kind {kind:?}")));
            }
        }
        let complex = Self::assemble(kind, labels, boundary);
        complex.validate()?;
        Ok(complex)
    }

    /// Trusted constructor: boundary lists must already be sorted and duplicate-free.
    pub(crate) fn assemble(kind: LabelKind, labels: Vec<Vec<Label>>, boundary: Vec<Vec<Vec<u32>>>) -> Self {
        let top = labels.len() - 1;
        let mut cofaces: Vec<Vec<Vec<u32>>> = (0..top).map(|d| vec![Vec::new(); labels[d].len()]).collect();
        for d in 1..=top {
            for (i, faces) in boundary[d].iter().enumerate() {
                for &f in faces {
                    cofaces[d - 1][f as usize].push(i as u32);
                }
            }
        }
        let index = labels
            .iter()
            .map(|ls| ls.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect())
            .collect();
        Self { kind, labels, boundary, cofaces, index }
    }

    /// Checks the structural invariants: unique labels per dimension, sorted
    /// duplicate-free boundary lists in range, and vanishing boundary of a
    /// boundary mod 2 for every cell.
    pub fn validate(&self) -> Result<()> {
        for (d, ls) in self.labels.iter().enumerate() {
            if self.index[d].len() != ls.len() {
                return Err(CobexError::MalformedComplex(format!("dimension {d}: duplicate labels")));
            }
        }
        for d in 1..=self.top_dim() {
            let below = self.cell_count(d - 1);
            for (i, b) in self.boundary[d].iter().enumerate() {
                if b.windows(2).any(|w| w[0] >= w[1]) || b.iter().any(|&f| f as usize >= below) {
                    return Err(CobexError::MalformedComplex(format!("cell ({d},{i}): bad boundary list")));
                }
            }
        }
        for d in 2..=self.top_dim() {
            let mut parity = vec![false; self.cell_count(d - 2)];
            for (i, b) in self.boundary[d].iter().enumerate() {
                for &f in b {
                    for &g in &self.boundary[d - 1][f as usize] {
                        parity[g as usize] ^= true;
                    }
                }
                if let Some(g) = parity.iter().position(|&p| p) {
                    return Err(CobexError::MalformedComplex(format!(
                        "boundary of boundary of cell ({d},{i}) contains ({},{g})",
                        d - 2
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> LabelKind {
        self.kind
    }

    pub fn is_simplicial(&self) -> bool {
        self.kind == LabelKind::Simplicial
    }

    /// Highest dimension with a cell list (which may be empty after deletions).
    pub fn top_dim(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn cell_count(&self, dim: usize) -> usize {
        self.labels.get(dim).map_or(0, Vec::len)
    }

    pub fn cells_per_dim(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, dim: usize) -> &[Label] {
        &self.labels[dim]
    }

    pub fn label(&self, cell: CellId) -> &Label {
        &self.labels[cell.dim][cell.index]
    }

    pub fn find(&self, dim: usize, label: &Label) -> Option<usize> {
        self.index.get(dim)?.get(label).map(|&i| i as usize)
    }

    /// Boundary faces of a cell.
    pub fn boundary(&self, dim: usize, index: usize) -> &[u32] {
        &self.boundary[dim][index]
    }

    pub fn boundaries(&self, dim: usize) -> &[Vec<u32>] {
        &self.boundary[dim]
    }

    /// Cells of dimension `dim + 1` containing the given cell.
    pub fn cofaces(&self, dim: usize, index: usize) -> &[u32] {
        match self.cofaces.get(dim) {
            Some(c) => &c[index],
            None => &[],
        }
    }

    pub fn degree_profile(&self, k: usize) -> Result<DegreeProfile> {
        if k >= self.top_dim() {
            return Err(invalid(format!("degree profile needs k < top_dim = {}", self.top_dim())));
        }
        let degrees: Vec<usize> = self.cofaces[k].iter().map(Vec::len).collect();
        if degrees.is_empty() {
            return Err(invalid(format!("complex has no {k}-cells")));
        }
        let total: usize = degrees.iter().sum();
        Ok(DegreeProfile {
            k,
            max_degree: *degrees.iter().max().unwrap(),
            min_degree: *degrees.iter().min().unwrap(),
            mean_degree: ratio(total as u64, degrees.len() as u64),
        })
    }

    /// Removes top-dimensional cells. Lower dimensions are untouched, so the
    /// result is always a valid complex; the (possibly empty) top dimension is kept.
    pub fn delete_cells(&self, dim: usize, drop: &[usize]) -> Result<Complex> {
        let top = self.top_dim();
        if dim != top {
            return Err(CobexError::WouldBreakClosure { dim, top_dim: top });
        }
        let n = self.cell_count(top);
        let mut keep = vec![true; n];
        for &i in drop {
            if i >= n {
                return Err(invalid(format!("cell index {i} out of range for dimension {top} ({n} cells)")));
            }
            keep[i] = false;
        }
        Ok(self.keep_top_cells(&keep))
    }

    /// Complex with only the top cells whose flag is set.
    pub(crate) fn keep_top_cells(&self, keep: &[bool]) -> Complex {
        let top = self.top_dim();
        let mut labels = self.labels.clone();
        let mut boundary = self.boundary.clone();
        labels[top] = self.labels[top].iter().zip(keep).filter(|(_, &k)| k).map(|(l, _)| l.clone()).collect();
        boundary[top] = self.boundary[top].iter().zip(keep).filter(|(_, &k)| k).map(|(b, _)| b.clone()).collect();
        Self::assemble(self.kind, labels, boundary)
    }

    /// The subcomplex of cells of dimension at most `d`.
    pub fn skeleton(&self, d: usize) -> Complex {
        let d = d.min(self.top_dim());
        Self::assemble(self.kind, self.labels[..=d].to_vec(), self.boundary[..=d].to_vec())
    }

    /// Drops trailing empty dimensions (keeping at least dimension 0).
    pub fn trimmed(&self) -> Complex {
        let mut d = self.top_dim();
        while d > 0 && self.labels[d].is_empty() {
            d -= 1;
        }
        self.skeleton(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex(n: usize, d: usize) -> Complex {
        Complex::simplex_skeleton(n, d).unwrap()
    }

    #[test]
    fn degree_profiles() {
        let p = simplex(5, 2).degree_profile(1).unwrap();
        assert_eq!((p.max_degree, p.min_degree), (3, 3));
        let q3 = Complex::cube(3).unwrap();
        assert_eq!(q3.degree_profile(0).unwrap().max_degree, 3);
        let l = Complex::multipartite(2, 1).unwrap();
        let p = l.degree_profile(1).unwrap();
        assert_eq!(p.max_degree, 2);
        assert!(p.min_degree as i64 <= p.mean_degree.to_integer() && p.mean_degree <= Rational::from_integer(2));
    }

    #[test]
    fn degree_profile_range() {
        assert!(matches!(simplex(4, 1).degree_profile(1), Err(CobexError::InvalidParameter(_))));
    }

    #[test]
    fn delete_nothing_is_identity() {
        let x = simplex(4, 2);
        assert_eq!(x.delete_cells(2, &[]).unwrap(), x);
    }

    #[test]
    fn delete_all_triangles_leaves_k4() {
        let x = simplex(4, 2);
        let y = x.delete_cells(2, &[0, 1, 2, 3]).unwrap();
        assert_eq!(y.cells_per_dim(), vec![4, 6, 0]);
        assert_eq!(y.trimmed(), simplex(4, 1));
    }

    #[test]
    fn delete_lower_dimension_rejected() {
        let x = simplex(4, 2);
        assert!(matches!(x.delete_cells(1, &[0]), Err(CobexError::WouldBreakClosure { .. })));
        assert!(matches!(x.delete_cells(2, &[9]), Err(CobexError::InvalidParameter(_))));
    }

    #[test]
    fn even_multiplicity_collapses() {
        let labels = vec![
            vec![Label::Text("a".into()), Label::Text("b".into())],
            vec![Label::Text("loop".into())],
        ];
        let x = Complex::from_parts(LabelKind::Generic, labels, vec![vec![vec![], vec![]], vec![vec![0, 0]]]).unwrap();
        assert!(x.boundary(1, 0).is_empty());
    }

    #[test]
    fn rejects_nonzero_boundary_of_boundary() {
        let t = |s: &str| Label::Text(s.into());
        let labels = vec![vec![t("a"), t("b"), t("c")], vec![t("ab"), t("bc")], vec![t("f")]];
        let boundary = vec![vec![vec![], vec![], vec![]], vec![vec![0, 1], vec![1, 2]], vec![vec![0, 1]]];
        assert!(matches!(
            Complex::from_parts(LabelKind::Generic, labels, boundary),
            Err(CobexError::MalformedComplex(_))
        ));
    }

    #[test]
    fn rejects_duplicate_labels() {
        let t = |s: &str| Label::Text(s.into());
        let r = Complex::from_parts(LabelKind::Generic, vec![vec![t("a"), t("a")]], vec![vec![vec![], vec![]]]);
        assert!(r.is_err());
    }
}
