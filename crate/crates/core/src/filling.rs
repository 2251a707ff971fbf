//! Filling cycles in the cube `Q_n` and the duality between the
//! cross-polytope boundary and the cube.
//!
//! A cube cell is a pair `(star, value)` of coordinate masks: coordinates in
//! `star` are free, the rest are fixed to the matching bit of `value`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::cochain::{apply_coboundary, CosetTable, TableLimits};
use crate::complex::{Complex, Label};
use crate::error::{invalid, CobexError, Result};
use crate::gf2::{GF2Matrix, GF2Vector};
use crate::rational::{ratio, Rational};

pub const EXHAUSTIVE_MAX_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FillStrategy {
    Exhaustive,
    Greedy,
}

impl std::str::FromStr for FillStrategy {
    type Err = CobexError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(FillStrategy::Exhaustive),
            "greedy" => Ok(FillStrategy::Greedy),
            other => Err(invalid(format!("unknown fill strategy {other:?}"))),
        }
    }
}

/// A filling `y` of a j-cycle `z` in `Q_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainFill {
    pub n: usize,
    pub j: usize,
    pub strategy: FillStrategy,
    pub z: GF2Vector,
    pub y: GF2Vector,
    /// `vol(y) / vol(z)`; `None` when `z = 0`.
    pub achieved_ratio: Option<Rational>,
    /// `(n - j) / (2(j + 1))`.
    pub bound: Rational,
    pub within_bound: bool,
}

/// `(n - j) / (2(j + 1))`.
pub fn cube_fill_bound(n: usize, j: usize) -> Rational {
    ratio((n - j) as u64, 2 * (j as u64 + 1))
}

type Cell = u64;

fn cell(star: u32, value: u32) -> Cell {
    (star as u64) << 32 | (value & !star) as u64
}

fn star(c: Cell) -> u32 {
    (c >> 32) as u32
}

fn value(c: Cell) -> u32 {
    c as u32
}

/// Symmetric-difference normal form: sorted, pairs cancelled.
fn reduce(mut cells: Vec<Cell>) -> Vec<Cell> {
    cells.sort_unstable();
    let mut out = Vec::with_capacity(cells.len());
    for c in cells {
        if out.last() == Some(&c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

/// Parses a cube label such as `"0*1"`.
fn parse_cube_label(label: &Label) -> Cell {
    let Label::Cube(s) = label else { panic!("not a cube label") };
    let (mut st, mut val) = (0u32, 0u32);
    for (i, ch) in s.bytes().enumerate() {
        match ch {
            b'*' => st |= 1 << i,
            b'1' => val |= 1 << i,
            _ => {}
        }
    }
    cell(st, val)
}

/// Cell coordinates of `Q_n` by dimension, with the reverse lookup.
struct CubeCells {
    complex: Complex,
    cells: Vec<Vec<Cell>>,
    index: Vec<HashMap<Cell, usize>>,
}

impl CubeCells {
    fn new(n: usize) -> Result<Self> {
        let complex = Complex::cube(n)?;
        let cells: Vec<Vec<Cell>> = (0..=n).map(|d| complex.labels(d).iter().map(parse_cube_label).collect()).collect();
        let index = cells.iter().map(|v| v.iter().enumerate().map(|(i, &c)| (c, i)).collect()).collect();
        Ok(Self { complex, cells, index })
    }

    fn to_cells(&self, dim: usize, v: &GF2Vector) -> Vec<Cell> {
        v.iter_ones().map(|i| self.cells[dim][i]).collect()
    }

    fn to_vector(&self, dim: usize, cells: &[Cell]) -> GF2Vector {
        GF2Vector::from_indices(self.cells[dim].len(), cells.iter().map(|c| self.index[dim][c]))
    }
}

/// Restricts `z` to the facet `x_i = s`, returning `(z ∩ H_+, z')` where
/// `z' = z ∩ H_- + π(z ∩ H_+)` lies in the opposite facet.
fn split(z: &[Cell], i: usize, s: u32) -> (Vec<Cell>, Vec<Cell>) {
    let bit = 1u32 << i;
    let mut inside = Vec::new();
    let mut rest = Vec::with_capacity(z.len());
    for &c in z {
        if star(c) & bit != 0 {
            continue;
        }
        if (value(c) & bit != 0) as u32 == s {
            inside.push(c);
            rest.push(cell(star(c), value(c) ^ bit));
        } else {
            rest.push(c);
        }
    }
    (inside, reduce(rest))
}

fn prism(inside: &[Cell], i: usize) -> impl Iterator<Item = Cell> + '_ {
    inside.iter().map(move |&c| cell(star(c) | 1 << i, value(c)))
}

fn facets(free: u32) -> Vec<(usize, u32)> {
    (0..32).filter(|&i| free >> i & 1 == 1).flat_map(|i| [(i, 0), (i, 1)]).collect()
}

/// Fills the j-cycle `z` inside the face of `Q_n` whose free coordinates are `free`.
fn fill_rec(z: Vec<Cell>, free: u32, j: usize, strategy: FillStrategy, parallel: bool) -> Vec<Cell> {
    if z.is_empty() {
        return Vec::new();
    }
    if free.count_ones() as usize == j + 1 {
        return vec![cell(free, value(z[0]))];
    }
    let step = |(i, s): (usize, u32)| {
        let (inside, rest) = split(&z, i, s);
        let mut y = fill_rec(rest, free & !(1 << i), j, strategy, false);
        y.extend(prism(&inside, i));
        y
    };
    match strategy {
        FillStrategy::Greedy => {
            let mut best = (0usize, (0usize, 0u32));
            for (t, f) in facets(free).into_iter().enumerate() {
                let bit = 1u32 << f.0;
                let count = z.iter().filter(|&&c| star(c) & bit == 0 && (value(c) & bit != 0) as u32 == f.1).count();
                if t == 0 || count > best.0 {
                    best = (count, f);
                }
            }
            step(best.1)
        }
        FillStrategy::Exhaustive => {
            let choices = facets(free);
            let candidates: Vec<Vec<Cell>> =
                if parallel { choices.into_par_iter().map(step).collect() } else { choices.into_iter().map(step).collect() };
            candidates.into_iter().min_by_key(Vec::len).expect("at least one facet")
        }
    }
}

fn boundary_chain(x: &Complex, j: usize, z: &GF2Vector) -> GF2Vector {
    let mut out = GF2Vector::zeros(if j == 0 { 1 } else { x.cell_count(j - 1) });
    for c in z.iter_ones() {
        if j == 0 {
            out.flip(0);
        } else {
            for &f in x.boundary(j, c) {
                out.flip(f as usize);
            }
        }
    }
    out
}

/// Constructs `y` with `∂y = z` by repeatedly pushing `z` across a facet.
/// The exhaustive strategy keeps the smallest result over every facet choice
/// at every level and is limited to `n <= 6`; greedy takes the facet holding
/// the most cells of `z`.
pub fn cube_fill(n: usize, j: usize, z: &GF2Vector, strategy: FillStrategy) -> Result<ChainFill> {
    if j >= n {
        return Err(invalid(format!("need j < n, got j = {j}, n = {n}")));
    }
    if strategy == FillStrategy::Exhaustive && n > EXHAUSTIVE_MAX_N {
        return Err(CobexError::BudgetExceeded { what: format!("exhaustive filling for n > {EXHAUSTIVE_MAX_N}"), q: n });
    }
    let cube = CubeCells::new(n)?;
    if z.len() != cube.cells[j].len() {
        return Err(invalid(format!("chain length {} does not match {} cells", z.len(), cube.cells[j].len())));
    }
    if !boundary_chain(&cube.complex, j, z).is_zero() {
        return Err(CobexError::NotACycle);
    }
    let free = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let cells = reduce(cube.to_cells(j, z));
    let y_cells = reduce(fill_rec(cells, free, j, strategy, true));
    let y = cube.to_vector(j + 1, &y_cells);
    debug_assert_eq!(&boundary_chain(&cube.complex, j + 1, &y), z);
    let bound = cube_fill_bound(n, j);
    let achieved = (!z.is_zero()).then(|| ratio(y.weight() as u64, z.weight() as u64));
    let within_bound = achieved.is_none_or(|r| r <= bound);
    Ok(ChainFill { n, j, strategy, z: z.clone(), y, achieved_ratio: achieved, bound, within_bound })
}

/// `∂ y` for a (j+1)-chain of `Q_n`.
pub fn cube_boundary(n: usize, j: usize, y: &GF2Vector) -> Result<GF2Vector> {
    let cube = Complex::cube(n)?;
    if j + 1 > n || y.len() != cube.cell_count(j + 1) {
        return Err(invalid("chain does not match the cube"));
    }
    Ok(boundary_chain(&cube, j + 1, y))
}

/// Smallest `vol(y)` with `∂y = z`, by syndrome decoding modulo the
/// (j+1)-cycles of `Q_n`.
pub fn min_fill_oracle(n: usize, j: usize, z: &GF2Vector, limits: &TableLimits) -> Result<usize> {
    if j >= n {
        return Err(invalid(format!("need j < n, got j = {j}, n = {n}")));
    }
    let cube = Complex::cube(n)?;
    if z.len() != cube.cell_count(j) {
        return Err(invalid("chain does not match the cube"));
    }
    if z.is_zero() {
        return Ok(0);
    }
    // rows of d_j are (j+1)-cells, so its transpose is the boundary map
    let d = GF2Matrix::from_row_supports(cube.cell_count(j), cube.boundaries(j + 1).iter().map(Vec::as_slice));
    let del = d.transpose();
    let y = del.solve(z).ok_or(CobexError::NotACycle)?;
    let table = CosetTable::build(del.kernel_basis(), limits)?;
    table.norm(&y)
}

/// The cell bijection `ι` between k-cells of the cross-polytope boundary
/// `Q̂_n` and (n-k-1)-cells of `Q_n`: the cell `{σ_i e_i : i ∈ S}` goes to the
/// cube cell with coordinate `i ∈ S` fixed to `(1 + σ_i)/2`.
#[derive(Clone, Debug)]
pub struct Duality {
    pub n: usize,
    pub k: usize,
    to_cube: Vec<usize>,
    to_cross: Vec<usize>,
}

impl Duality {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(invalid(format!("need k < n, got k = {k}, n = {n}")));
        }
        let cross = Complex::cross_polytope(n)?;
        let cube = CubeCells::new(n)?;
        let dim = n - k - 1;
        let to_cube: Vec<usize> = cross
            .labels(k)
            .iter()
            .map(|label| {
                let Label::Signed(coords) = label else { unreachable!("cross-polytope labels are signed") };
                let fixed: u32 = coords.iter().map(|&c| 1u32 << (c.unsigned_abs() - 1)).sum();
                let ones: u32 = coords.iter().filter(|&&c| c > 0).map(|&c| 1u32 << (c - 1)).sum();
                let full = (1u32 << n) - 1;
                cube.index[dim][&cell(full & !fixed, ones)]
            })
            .collect();
        let mut to_cross = vec![0; to_cube.len()];
        for (a, &b) in to_cube.iter().enumerate() {
            to_cross[b] = a;
        }
        Ok(Self { n, k, to_cube, to_cross })
    }

    pub fn len(&self) -> usize {
        self.to_cube.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_cube.is_empty()
    }

    /// `ι β`, an (n-k-1)-chain of `Q_n`.
    pub fn apply(&self, beta: &GF2Vector) -> GF2Vector {
        GF2Vector::from_indices(self.len(), beta.iter_ones().map(|i| self.to_cube[i]))
    }

    pub fn inverse(&self, chain: &GF2Vector) -> GF2Vector {
        GF2Vector::from_indices(self.len(), chain.iter_ones().map(|i| self.to_cross[i]))
    }
}

pub fn cross_dual(n: usize, k: usize, beta: &GF2Vector) -> Result<GF2Vector> {
    let map = Duality::new(n, k)?;
    if beta.len() != map.len() {
        return Err(invalid("cochain does not match the cross-polytope"));
    }
    Ok(map.apply(beta))
}

pub fn cross_dual_inverse(n: usize, k: usize, chain: &GF2Vector) -> Result<GF2Vector> {
    let map = Duality::new(n, k)?;
    if chain.len() != map.len() {
        return Err(invalid("chain does not match the cube"));
    }
    Ok(map.inverse(chain))
}

/// Compares `ι(dβ)` with `∂(ιβ)` for cochains of `Q̂_n`.
pub struct DualityCheck {
    cross: Complex,
    cube: Complex,
    maps: Vec<Duality>,
}

impl DualityCheck {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            cross: Complex::cross_polytope(n)?,
            cube: Complex::cube(n)?,
            maps: (0..n).map(|k| Duality::new(n, k)).collect::<Result<_>>()?,
        })
    }

    /// Whether the square commutes on the k-cochain `beta`, for `k <= n - 2`.
    pub fn commutes(&self, k: usize, beta: &GF2Vector) -> bool {
        let n = self.maps.len();
        assert!(k + 2 <= n, "need k <= n - 2");
        let left = self.maps[k + 1].apply(&apply_coboundary(&self.cross, k, beta));
        let right = boundary_chain(&self.cube, n - k - 1, &self.maps[k].apply(beta));
        left == right
    }
}

/// Result of pushing every k-cochain of `Q̂_n` through `ι`, filling in the
/// cube, and pulling back.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FillingCertificate {
    pub n: usize,
    pub k: usize,
    pub checked: u64,
    /// Cochains whose pulled-back filling `β'` fails `dβ' = dβ` or the bound.
    pub violations: u64,
    /// `(k+2) / (2(n-k-1))`.
    #[serde(with = "crate::rational::string")]
    pub bound: Rational,
    /// Largest `‖β'‖ / ‖dβ‖` seen.
    #[serde(with = "crate::rational::opt_string")]
    pub max_ratio: Option<Rational>,
    /// `1 / bound`, the expansion lower bound the certificate implies.
    #[serde(with = "crate::rational::string")]
    pub implied_expansion: Rational,
}

/// Exhaustive certificate over all of `C^k(Q̂_n)`; needs `|X^(k)| <= 20`.
pub fn cross_filling_certificate(n: usize, k: usize) -> Result<FillingCertificate> {
    if n < k + 2 {
        return Err(invalid(format!("need k <= n - 2, got k = {k}, n = {n}")));
    }
    let cross = Complex::cross_polytope(n)?;
    let lower = Duality::new(n, k)?;
    let upper = Duality::new(n, k + 1)?;
    let cells = lower.len();
    if cells > 20 {
        return Err(CobexError::BudgetExceeded { what: "certificate enumeration".into(), q: cells });
    }
    let j = n - k - 2;
    let bound = cube_fill_bound(n, j);
    let mut violations = 0;
    let mut max_ratio: Option<Rational> = None;
    for mask in 0u64..1 << cells {
        let beta = GF2Vector::from_words(cells, vec![mask]);
        let dbeta = apply_coboundary(&cross, k, &beta);
        let z = upper.apply(&dbeta);
        let fill = cube_fill(n, j, &z, FillStrategy::Exhaustive)?;
        let pulled = lower.inverse(&fill.y);
        if apply_coboundary(&cross, k, &pulled) != dbeta {
            violations += 1;
            continue;
        }
        if let Some(r) = fill.achieved_ratio {
            if r > bound {
                violations += 1;
            }
            max_ratio = Some(max_ratio.map_or(r, |m| m.max(r)));
        }
    }
    Ok(FillingCertificate {
        n,
        k,
        checked: 1 << cells,
        violations,
        bound,
        max_ratio,
        implied_expansion: bound.recip(),
    })
}
