//! Coboundary operators, support and quotient norms, and cohomology
//! dimensions over GF(2).
//!
//! Quotient norms are computed by syndrome decoding: the subspace being
//! quotiented by (coboundaries, or cocycles for filling problems) is treated
//! as a linear code, and a table indexed by syndrome stores the minimum
//! weight in each coset.

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{invalid, CobexError, Result};
use crate::gf2::{Basis, Echelon, GF2Matrix, GF2Vector};

/// A k-cochain: one bit per k-cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    pub k: usize,
    pub vec: GF2Vector,
}

impl Cochain {
    pub fn zeros(x: &Complex, k: usize) -> Self {
        Self { k, vec: GF2Vector::zeros(x.cell_count(k)) }
    }

    pub fn from_cells(x: &Complex, k: usize, cells: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = x.cell_count(k);
        let cells: Vec<usize> = cells.into_iter().collect();
        if let Some(&c) = cells.iter().find(|&&c| c >= n) {
            return Err(invalid(format!("cell {c} out of range for dimension {k} ({n} cells)")));
        }
        Ok(Self { k, vec: GF2Vector::from_indices(n, cells) })
    }

    pub fn new(x: &Complex, k: usize, vec: GF2Vector) -> Result<Self> {
        if vec.len() != x.cell_count(k) {
            return Err(invalid(format!(
                "cochain length {} does not match {} cells of dimension {k}",
                vec.len(),
                x.cell_count(k)
            )));
        }
        Ok(Self { k, vec })
    }

    /// Support size.
    pub fn norm(&self) -> usize {
        self.vec.weight()
    }
}

/// Matrix of `d: C^k -> C^{k+1}` with one row per (k+1)-cell. In reduced mode
/// `k = -1` is the augmentation, a single all-ones column.
#[derive(Clone, Debug)]
pub struct CoboundaryOperator {
    pub k: isize,
    pub reduced: bool,
    pub matrix: GF2Matrix,
}

impl CoboundaryOperator {
    pub fn apply(&self, beta: &GF2Vector) -> GF2Vector {
        self.matrix.mul_vec(beta)
    }
}

pub fn coboundary(x: &Complex, k: isize, reduced: bool) -> Result<CoboundaryOperator> {
    if k == -1 {
        if !reduced {
            return Err(invalid("d_{-1} exists only in the reduced complex"));
        }
        let rows = vec![GF2Vector::ones(1); x.cell_count(0)];
        return Ok(CoboundaryOperator { k, reduced, matrix: GF2Matrix::from_rows(1, rows) });
    }
    if k < -1 || k as usize > x.top_dim() {
        return Err(invalid(format!("coboundary degree {k} out of range for top dimension {}", x.top_dim())));
    }
    let k = k as usize;
    let matrix = if k == x.top_dim() {
        GF2Matrix::zeros(0, x.cell_count(k))
    } else {
        GF2Matrix::from_row_supports(x.cell_count(k), x.boundaries(k + 1).iter().map(Vec::as_slice))
    };
    Ok(CoboundaryOperator { k: k as isize, reduced, matrix })
}

/// `dβ` evaluated directly from boundary lists.
pub fn apply_coboundary(x: &Complex, k: usize, beta: &GF2Vector) -> GF2Vector {
    assert_eq!(beta.len(), x.cell_count(k), "cochain length mismatch");
    if k >= x.top_dim() {
        return GF2Vector::zeros(0);
    }
    let bits: Vec<bool> =
        x.boundaries(k + 1).iter().map(|faces| faces.iter().filter(|&&f| beta.get(f as usize)).count() % 2 == 1).collect();
    GF2Vector::from_bools(&bits)
}

/// `d e_j`: the (k+1)-cells containing k-cell `j`.
pub fn coboundary_of_cell(x: &Complex, k: usize, j: usize) -> GF2Vector {
    GF2Vector::from_indices(x.cell_count(k + 1), x.cofaces(k, j).iter().map(|&c| c as usize))
}

/// Basis of the coboundaries `B^k` inside `C^k`.
pub fn coboundary_space(x: &Complex, k: usize, reduced: bool) -> Basis {
    let n = x.cell_count(k);
    if k == 0 {
        return if reduced && n > 0 { Basis::from_vectors(n, [GF2Vector::ones(n)]) } else { Basis::empty(n) };
    }
    Basis::from_vectors(n, (0..x.cell_count(k - 1)).map(|j| coboundary_of_cell(x, k - 1, j)))
}

/// Basis of the cocycles `Z^k = ker d_k`.
pub fn cocycle_space(x: &Complex, k: usize) -> Basis {
    if k >= x.top_dim() {
        let n = x.cell_count(k);
        return Basis::from_vectors(n, (0..n).map(|i| GF2Vector::from_indices(n, [i])));
    }
    coboundary(x, k as isize, true).expect("k in range").matrix.kernel_basis()
}

/// Rank of `d_k` restricted to the given (k+1)-cells, stopping early once `target` is hit.
pub(crate) fn coboundary_rank(x: &Complex, k: usize, rows: impl Iterator<Item = usize>, target: usize) -> usize {
    let n = x.cell_count(k);
    let mut e = Echelon::new(n);
    for r in rows {
        if e.rank() >= target {
            break;
        }
        e.insert(GF2Vector::from_indices(n, x.boundary(k + 1, r).iter().map(|&f| f as usize)));
    }
    e.rank()
}

/// `dim B^k`, reduced at k = 0.
pub fn coboundary_rank_below(x: &Complex, k: usize) -> usize {
    if k == 0 {
        usize::from(x.cell_count(0) > 0)
    } else {
        coboundary_rank(x, k - 1, 0..x.cell_count(k), usize::MAX)
    }
}

/// Reduced cohomology dimension `dim ker d_k - rank d_{k-1}`.
pub fn cohomology_dim(x: &Complex, k: usize) -> Result<usize> {
    if k > x.top_dim() {
        return Err(invalid(format!("k = {k} exceeds top dimension {}", x.top_dim())));
    }
    let n = x.cell_count(k);
    let rank_dk = if k < x.top_dim() { coboundary_rank(x, k, 0..x.cell_count(k + 1), usize::MAX) } else { 0 };
    Ok(n - rank_dk - coboundary_rank_below(x, k))
}

/// Limits for coset-table construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableLimits {
    /// Largest quotient dimension for which a table of `2^q` bytes is built.
    pub q_max: usize,
    /// Largest leader weight resolved exactly; heavier cosets get the lower bound `w_cap + 1`.
    pub w_cap: usize,
}

impl Default for TableLimits {
    fn default() -> Self {
        Self { q_max: 28, w_cap: 64 }
    }
}

/// Minimum coset weight as recorded in a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeaderWeight {
    Exact(u32),
    AtLeast(u32),
}

/// Coset-leader weights for every coset of a code in GF(2)^length.
///
/// Syndromes are `q`-bit integers: bit `i` is the coefficient of the `i`-th
/// complement column after reducing by the code's echelon basis, so the unit
/// vector of the `i`-th complement column has syndrome `1 << i`.
#[derive(Clone, Debug)]
pub struct CosetTable {
    code: Basis,
    complement: Vec<usize>,
    column_syndromes: Vec<u64>,
    leader_weight: Vec<u8>,
    w_cap: u32,
    unresolved: u64,
}

const UNSEEN: u8 = u8::MAX;

impl CosetTable {
    /// Fills leader weights in order of increasing weight, starting from the
    /// zero syndrome and adding one unit vector per layer. Layer `w` holds
    /// exactly the syndromes whose lightest vector has weight `w`. Stops when
    /// every syndrome is reached or `w_cap` layers are done.
    pub fn build(code: Basis, limits: &TableLimits) -> Result<Self> {
        let length = code.len();
        let q = length - code.dim();
        if q > limits.q_max || q >= 48 {
            return Err(CobexError::BudgetExceeded {
                what: format!("coset table needs 2^{q} entries (q_max = {})", limits.q_max),
                q,
            });
        }
        let w_cap = limits.w_cap.min(254) as u32;
        let complement = code.complement_columns();
        let mut position = vec![usize::MAX; length];
        for (i, &c) in complement.iter().enumerate() {
            position[c] = i;
        }
        let mut column_syndromes = vec![0u64; length];
        for (i, &c) in complement.iter().enumerate() {
            column_syndromes[c] = 1 << i;
        }
        for (b, &p) in code.vectors().iter().zip(code.pivot_columns()) {
            column_syndromes[p] = b.iter_ones().filter(|&c| c != p).fold(0, |s, c| s | 1 << position[c]);
        }

        let total = 1usize << q;
        let mut table = vec![UNSEEN; total];
        table[0] = 0;
        let mut generators: Vec<u64> = column_syndromes.iter().copied().filter(|&s| s != 0).collect();
        generators.sort_unstable();
        generators.dedup();
        let mut seen = 1usize;
        let mut w = 0u32;
        while seen < total && w < w_cap {
            let layer = w as u8;
            for s in 0..total {
                if table[s] != layer {
                    continue;
                }
                for &g in &generators {
                    let t = s ^ g as usize;
                    if table[t] == UNSEEN {
                        table[t] = layer + 1;
                        seen += 1;
                    }
                }
            }
            w += 1;
        }
        let unresolved = (total - seen) as u64;
        if unresolved > 0 {
            for e in table.iter_mut().filter(|e| **e == UNSEEN) {
                *e = (w_cap + 1) as u8;
            }
        }
        Ok(Self { code, complement, column_syndromes, leader_weight: table, w_cap, unresolved })
    }

    pub fn code(&self) -> &Basis {
        &self.code
    }

    /// Ambient length of the vectors.
    pub fn length(&self) -> usize {
        self.code.len()
    }

    /// Quotient dimension.
    pub fn q(&self) -> usize {
        self.complement.len()
    }

    pub fn complement_columns(&self) -> &[usize] {
        &self.complement
    }

    pub fn column_syndrome(&self, c: usize) -> u64 {
        self.column_syndromes[c]
    }

    pub fn w_cap(&self) -> u32 {
        self.w_cap
    }

    /// Number of cosets whose leader weight exceeds `w_cap`.
    pub fn unresolved(&self) -> u64 {
        self.unresolved
    }

    pub fn is_complete(&self) -> bool {
        self.unresolved == 0
    }

    pub fn syndrome(&self, v: &GF2Vector) -> u64 {
        assert_eq!(v.len(), self.length(), "length mismatch");
        v.iter_ones().fold(0, |s, c| s ^ self.column_syndromes[c])
    }

    #[inline]
    pub(crate) fn raw_weight(&self, s: u64) -> u32 {
        self.leader_weight[s as usize] as u32
    }

    pub fn leader_weight(&self, s: u64) -> LeaderWeight {
        let w = self.raw_weight(s);
        if w > self.w_cap {
            LeaderWeight::AtLeast(w)
        } else {
            LeaderWeight::Exact(w)
        }
    }

    /// Exact minimum weight over the coset of `v`.
    pub fn norm(&self, v: &GF2Vector) -> Result<usize> {
        match self.leader_weight(self.syndrome(v)) {
            LeaderWeight::Exact(w) => Ok(w as usize),
            LeaderWeight::AtLeast(w) => Err(CobexError::BudgetExceeded {
                what: format!("coset leader weight exceeds w_cap (at least {w})"),
                q: self.q(),
            }),
        }
    }

    /// The canonical vector with a given syndrome: sum of complement unit vectors.
    pub fn representative(&self, s: u64) -> GF2Vector {
        GF2Vector::from_indices(self.length(), (0..self.q()).filter(|i| s >> i & 1 == 1).map(|i| self.complement[i]))
    }

    /// A minimum-weight vector with syndrome `s`, lexicographically first among
    /// those of that weight. `None` when the weight is beyond `w_cap`.
    pub fn leader(&self, s: u64) -> Option<GF2Vector> {
        let LeaderWeight::Exact(mut w) = self.leader_weight(s) else {
            return None;
        };
        let mut cur = s;
        let mut support = Vec::with_capacity(w as usize);
        while w > 0 {
            let c = (0..self.length())
                .find(|&c| self.raw_weight(cur ^ self.column_syndromes[c]) == w - 1)
                .expect("a lighter neighbour exists in every non-zero layer");
            support.push(c);
            cur ^= self.column_syndromes[c];
            w -= 1;
        }
        Some(GF2Vector::from_indices(self.length(), support))
    }
}

/// Table of `C^k / B^k` (reduced at k = 0).
pub fn coboundary_table(x: &Complex, k: usize, limits: &TableLimits) -> Result<CosetTable> {
    if k > x.top_dim() {
        return Err(invalid(format!("k = {k} exceeds top dimension {}", x.top_dim())));
    }
    CosetTable::build(coboundary_space(x, k, true), limits)
}

/// Build a table from an explicit code basis.
pub fn build_coset_table(code: Basis, limits: &TableLimits) -> Result<CosetTable> {
    CosetTable::build(code, limits)
}

/// `‖[β]‖ = min_α ‖β + dα‖`.
pub fn quotient_norm(x: &Complex, beta: &Cochain, limits: &TableLimits) -> Result<usize> {
    if beta.vec.len() != x.cell_count(beta.k) {
        return Err(invalid("cochain does not match the complex"));
    }
    coboundary_table(x, beta.k, limits)?.norm(&beta.vec)
}
