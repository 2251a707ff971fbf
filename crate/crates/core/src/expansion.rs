//! Exact coboundary expansion, graph edge expansion and the filling norm.
//!
//! `h^k(X) = min ‖dβ‖ / ‖[β]‖` over k-cochains that are not coboundaries.
//! Both the numerator and the denominator are constant on cosets of `B^k`,
//! so one representative per coset suffices. Cosets are visited in Gray-code
//! order over a complement basis, which makes each step a single XOR of a
//! precomputed coboundary image; denominators come from a [`CosetTable`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::cochain::{
    apply_coboundary, coboundary_space, cocycle_space, cohomology_dim, Cochain, CosetTable,
    TableLimits,
};
use crate::complex::Complex;
use crate::error::{invalid, CobexError, Result};
use crate::gf2::{Basis, GF2Vector};
use crate::rational::{less, ratio, Rational};

/// Knobs bounding the work of exact solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub limits: TableLimits,
    /// Largest number of cosets enumerated for an exact answer.
    pub max_coset_visits: u64,
    /// Random cosets drawn for the upper bound when no exact answer is possible.
    pub bound_samples: u64,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { limits: TableLimits::default(), max_coset_visits: 100_000_000, bound_samples: 1_000_000, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpansionStatus {
    Exact,
    Bounds,
    /// Every cochain is a coboundary, so the minimum ranges over an empty set.
    UndefinedEmptyDomain,
}

#[derive(Clone, Debug)]
pub struct ExpansionReport {
    pub k: usize,
    pub status: ExpansionStatus,
    /// Exact value; `None` unless `status` is `Exact`.
    pub value: Option<Rational>,
    /// Certified interval; equal to `value` when exact.
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
    /// A cochain attaining the minimum, chosen as its coset's first lightest vector.
    pub witness: Option<Cochain>,
    pub cosets_enumerated: u64,
    pub quotient_dim: usize,
}

impl ExpansionReport {
    fn undefined(k: usize) -> Self {
        Self {
            k,
            status: ExpansionStatus::UndefinedEmptyDomain,
            value: None,
            lower: None,
            upper: None,
            witness: None,
            cosets_enumerated: 0,
            quotient_dim: 0,
        }
    }

    fn exact(k: usize, value: Rational, witness: Option<Cochain>, visited: u64, q: usize) -> Self {
        Self {
            k,
            status: ExpansionStatus::Exact,
            value: Some(value),
            lower: Some(value),
            upper: Some(value),
            witness,
            cosets_enumerated: visited,
            quotient_dim: q,
        }
    }
}

/// Running minimum of `num/den`, ties broken by the smaller syndrome.
#[derive(Clone, Copy, Debug)]
struct MinRatio {
    num: u64,
    den: u64,
    syndrome: u64,
}

impl MinRatio {
    const NONE: MinRatio = MinRatio { num: 1, den: 0, syndrome: u64::MAX };

    #[inline]
    fn offer(&mut self, num: u64, den: u64, syndrome: u64) {
        if self.den == 0 || less(num, den, self.num, self.den) || (!less(self.num, self.den, num, den) && syndrome < self.syndrome) {
            *self = MinRatio { num, den, syndrome };
        }
    }

    fn merge(mut self, other: MinRatio) -> MinRatio {
        if other.den != 0 {
            self.offer(other.num, other.den, other.syndrome);
        }
        self
    }

    fn is_set(&self) -> bool {
        self.den != 0
    }

    fn value(&self) -> Rational {
        ratio(self.num, self.den)
    }
}

#[derive(Clone, Copy, Debug)]
struct SweepResult {
    /// Over cosets with an exactly known leader weight.
    resolved: MinRatio,
    /// Over truncated cosets, using the representative's weight as an upper bound on the leader.
    unresolved_lower: MinRatio,
    /// Over truncated cosets, using `w_cap + 1` as a lower bound on the leader.
    unresolved_upper: MinRatio,
}

impl SweepResult {
    const EMPTY: SweepResult =
        SweepResult { resolved: MinRatio::NONE, unresolved_lower: MinRatio::NONE, unresolved_upper: MinRatio::NONE };

    fn merge(self, o: SweepResult) -> SweepResult {
        SweepResult {
            resolved: self.resolved.merge(o.resolved),
            unresolved_lower: self.unresolved_lower.merge(o.unresolved_lower),
            unresolved_upper: self.unresolved_upper.merge(o.unresolved_upper),
        }
    }
}

/// Minimizes `‖d rep(s)‖ / leader(s)` over all non-zero syndromes of `table`,
/// where `d` is `d_k` of `x` and the table lives in `C^k`.
fn sweep(x: &Complex, k: usize, table: &CosetTable) -> SweepResult {
    let q = table.q();
    if q == 0 {
        return SweepResult::EMPTY;
    }
    let rows = if k < x.top_dim() { x.cell_count(k + 1) } else { 0 };
    let words = rows.div_ceil(64).max(1);
    let mut images = vec![0u64; q * words];
    if k < x.top_dim() {
        for (i, &c) in table.complement_columns().iter().enumerate() {
            for &r in x.cofaces(k, c) {
                images[i * words + r as usize / 64] ^= 1 << (r % 64);
            }
        }
    }
    let total = 1u64 << q;
    let chunk = (total / 256).max(1 << 14);
    let starts: Vec<u64> = (1..total).step_by(chunk as usize).collect();
    starts
        .into_par_iter()
        .map(|a| sweep_range(table, &images, words, a, (a + chunk).min(total)))
        .reduce(|| SweepResult::EMPTY, SweepResult::merge)
}

fn sweep_range(table: &CosetTable, images: &[u64], words: usize, a: u64, b: u64) -> SweepResult {
    let w_cap = table.w_cap();
    let mut out = SweepResult::EMPTY;
    let mut s = a ^ (a >> 1);
    let mut cur = vec![0u64; words];
    for i in 0..table.q() {
        if s >> i & 1 == 1 {
            for (c, img) in cur.iter_mut().zip(&images[i * words..(i + 1) * words]) {
                *c ^= img;
            }
        }
    }
    let mut t = a;
    loop {
        let num: u64 = cur.iter().map(|w| w.count_ones() as u64).sum();
        let den = table.raw_weight(s);
        if den <= w_cap {
            out.resolved.offer(num, den as u64, s);
        } else {
            out.unresolved_lower.offer(num, s.count_ones() as u64, s);
            out.unresolved_upper.offer(num, (w_cap + 1) as u64, s);
        }
        t += 1;
        if t >= b {
            break;
        }
        let g = t.trailing_zeros() as usize;
        s ^= 1 << g;
        if words == 1 {
            cur[0] ^= images[g];
        } else {
            for (c, img) in cur.iter_mut().zip(&images[g * words..(g + 1) * words]) {
                *c ^= img;
            }
        }
    }
    out
}

/// A k-cocycle outside `B^k`, if reduced `H^k` is non-zero.
fn nontrivial_cocycle(x: &Complex, k: usize, coboundaries: &Basis) -> Option<GF2Vector> {
    cocycle_space(x, k).vectors().iter().find(|z| !coboundaries.contains(z)).cloned()
}

/// Exact `h^k`, or a certified interval when the budget does not allow
/// enumerating every coset.
pub fn coboundary_expansion(x: &Complex, k: usize, budget: &Budget) -> Result<ExpansionReport> {
    if k > x.top_dim() {
        return Err(invalid(format!("k = {k} exceeds top dimension {}", x.top_dim())));
    }
    let code = coboundary_space(x, k, true);
    let q = code.len() - code.dim();
    if q == 0 {
        return Ok(ExpansionReport::undefined(k));
    }
    let table = if q <= budget.limits.q_max && (1u64 << q) - 1 <= budget.max_coset_visits {
        Some(CosetTable::build(code.clone(), &budget.limits)?)
    } else {
        None
    };
    expansion_inner(x, k, &code, table.as_ref(), budget)
}

/// Same as [`coboundary_expansion`] with a prebuilt table for `B^k`. The table
/// depends only on the k-skeleton, so it can be shared by every subcomplex that
/// differs in (k+1)-cells only.
pub fn coboundary_expansion_with_table(x: &Complex, k: usize, table: &CosetTable, budget: &Budget) -> Result<ExpansionReport> {
    if table.length() != x.cell_count(k) {
        return Err(invalid("coset table does not match the complex"));
    }
    if table.q() == 0 {
        return Ok(ExpansionReport::undefined(k));
    }
    let code = table.code().clone();
    let table = ((1u64 << table.q()) - 1 <= budget.max_coset_visits).then_some(table);
    expansion_inner(x, k, &code, table, budget)
}

fn expansion_inner(
    x: &Complex,
    k: usize,
    code: &Basis,
    table: Option<&CosetTable>,
    budget: &Budget,
) -> Result<ExpansionReport> {
    let q = code.len() - code.dim();
    if cohomology_dim(x, k)? > 0 {
        let z = nontrivial_cocycle(x, k, code).expect("non-zero cohomology has a representative");
        let witness = match table {
            Some(t) => t.leader(t.syndrome(&z)).unwrap_or(z),
            None => z,
        };
        return Ok(ExpansionReport::exact(k, Rational::from_integer(0), Some(Cochain { k, vec: witness }), 0, q));
    }
    let Some(table) = table else {
        return Ok(bounds_without_table(x, k, code, None, budget));
    };
    let visited = (1u64 << q) - 1;
    let r = sweep(x, k, table);
    let best = r.resolved;
    let exact = !r.unresolved_lower.is_set() || (best.is_set() && !less(r.unresolved_lower.num, r.unresolved_lower.den, best.num, best.den));
    if exact {
        let witness = table.leader(best.syndrome).map(|vec| Cochain { k, vec });
        return Ok(ExpansionReport::exact(k, best.value(), witness, visited, q));
    }
    let lower = best.merge(r.unresolved_lower);
    let upper = best.merge(r.unresolved_upper);
    Ok(ExpansionReport {
        k,
        status: ExpansionStatus::Bounds,
        value: None,
        lower: Some(lower.value()),
        upper: Some(upper.value()),
        witness: None,
        cosets_enumerated: visited,
        quotient_dim: q,
    })
}

/// Interval for `h^k` when cosets cannot all be visited. Requires `H^k = 0`.
///
/// Upper bound: weight-1 and weight-2 vectors whose coset provably has that
/// leader weight, plus random cosets whose leader weight is bounded below by
/// `⌈‖dβ‖ / D_k⌉` and by the absence of lighter syndromes. Lower bound: every
/// non-trivial coset has `‖dβ‖ >= 1` and a representative of weight at most `q`.
fn bounds_without_table(x: &Complex, k: usize, code: &Basis, table: Option<&CosetTable>, budget: &Budget) -> ExpansionReport {
    let n = x.cell_count(k);
    let q = n - code.dim();
    let mut visits = 0u64;
    let mut upper = MinRatio::NONE;
    let reduced: Vec<GF2Vector> = (0..n).map(|c| code.reduce(&GF2Vector::from_indices(n, [c]))).collect();
    let weight_one: HashSet<&GF2Vector> = reduced.iter().filter(|r| !r.is_zero()).collect();
    for c in 0..n {
        if !reduced[c].is_zero() {
            upper.offer(x.cofaces(k, c).len() as u64, 1, c as u64);
            visits += 1;
        }
    }
    let mut weight_two: HashSet<GF2Vector> = HashSet::new();
    'pairs: for a in 0..n {
        for b in a + 1..n {
            if visits >= budget.max_coset_visits {
                break 'pairs;
            }
            visits += 1;
            let r = reduced[a].xor(&reduced[b]);
            if r.is_zero() || weight_one.contains(&r) {
                continue;
            }
            let beta = GF2Vector::from_indices(n, [a, b]);
            upper.offer(apply_coboundary(x, k, &beta).weight() as u64, 2, (a * n + b) as u64);
            weight_two.insert(r);
        }
    }
    let max_degree = (0..n).map(|c| x.cofaces(k, c).len()).max().unwrap_or(0).max(1) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let samples = budget.bound_samples.min(budget.max_coset_visits.saturating_sub(visits));
    for i in 0..samples {
        let beta = GF2Vector::from_bools(&(0..n).map(|_| rng.gen::<bool>()).collect::<Vec<_>>());
        let r = code.reduce(&beta);
        if r.is_zero() {
            continue;
        }
        let num = apply_coboundary(x, k, &beta).weight() as u64;
        let den = match table.map(|t| t.leader_weight(t.syndrome(&beta))) {
            Some(crate::cochain::LeaderWeight::Exact(w)) => w as u64,
            _ => {
                let mut lb = num.div_ceil(max_degree).max(1);
                if !weight_one.contains(&r) {
                    lb = lb.max(2);
                    if !weight_two.contains(&r) {
                        lb = lb.max(3);
                    }
                }
                lb
            }
        };
        upper.offer(num, den, u64::MAX - i);
        visits += 1;
    }
    ExpansionReport {
        k,
        status: ExpansionStatus::Bounds,
        value: None,
        lower: Some(ratio(1, q as u64)),
        upper: upper.is_set().then(|| upper.value()),
        witness: None,
        cosets_enumerated: visits,
        quotient_dim: q,
    }
}

/// Edge expansion of the 1-skeleton by enumerating vertex subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeExpansionReport {
    pub status: ExpansionStatus,
    pub value: Option<Rational>,
    /// Vertex indices of a minimizing set `A` containing vertex 0.
    pub witness: Vec<usize>,
}

pub const EDGE_EXPANSION_MAX_VERTICES: usize = 24;

/// `min #E(A, B) / min(|A|, |B|)` over proper non-empty vertex sets `A`.
/// Among minimizers, reports the set containing vertex 0 with the smallest
/// bitmask.
pub fn edge_expansion_sets(g: &Complex) -> Result<EdgeExpansionReport> {
    let n = g.cell_count(0);
    if n > EDGE_EXPANSION_MAX_VERTICES {
        return Err(CobexError::BudgetExceeded {
            what: format!("subset enumeration over {n} vertices (limit {EDGE_EXPANSION_MAX_VERTICES})"),
            q: n,
        });
    }
    if n < 2 {
        return Ok(EdgeExpansionReport { status: ExpansionStatus::UndefinedEmptyDomain, value: None, witness: Vec::new() });
    }
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n];
    if g.top_dim() >= 1 {
        for b in g.boundaries(1) {
            if let [u, v] = b[..] {
                neighbours[u as usize].push(v as usize);
                neighbours[v as usize].push(u as usize);
            }
        }
    }
    // A always contains vertex 0; bit i of the Gray code toggles vertex i + 1.
    let mut mask: u32 = 1;
    let mut cut = neighbours[0].len() as u64;
    let mut best = MinRatio::NONE;
    let limit = 1u64 << (n - 1);
    for t in 1..=limit {
        let size = mask.count_ones() as u64;
        let other = n as u64 - size;
        if other > 0 {
            best.offer(cut, size.min(other), mask as u64);
        }
        if t == limit {
            break;
        }
        let v = t.trailing_zeros() as usize + 1;
        let inside = neighbours[v].iter().filter(|&&u| mask >> u & 1 == 1).count() as u64;
        let degree = neighbours[v].len() as u64;
        if mask >> v & 1 == 1 {
            cut = cut + 2 * inside - degree;
        } else {
            cut = cut + degree - 2 * inside;
        }
        mask ^= 1 << v;
    }
    let witness = (0..n).filter(|&v| best.syndrome >> v & 1 == 1).collect();
    Ok(EdgeExpansionReport { status: ExpansionStatus::Exact, value: Some(best.value()), witness })
}

#[derive(Clone, Debug)]
pub struct FillingNormReport {
    pub k: usize,
    pub status: ExpansionStatus,
    /// `‖d⁻¹_k‖`.
    pub value: Option<Rational>,
    /// The coboundary `dβ` whose cheapest filling is relatively largest.
    pub witness_coboundary: Option<Cochain>,
    /// A cheapest `α` with `dα = dβ`.
    pub witness_fill: Option<Cochain>,
    pub quotient_dim: usize,
}

/// Smallest `c` with `‖α‖/|X^(k)| <= c ‖dβ‖/|X^(k+1)|` for some `α` with
/// `dα = dβ`, for every coboundary `dβ`. The cheapest `α` is the leader of
/// `β`'s coset modulo the cocycles `Z^k`.
pub fn filling_norm(x: &Complex, k: usize, budget: &Budget) -> Result<FillingNormReport> {
    if k >= x.top_dim() {
        return Err(invalid(format!("filling norm needs k < top dimension {}", x.top_dim())));
    }
    let code = cocycle_space(x, k);
    let q = code.len() - code.dim();
    if q == 0 {
        return Ok(FillingNormReport {
            k,
            status: ExpansionStatus::UndefinedEmptyDomain,
            value: None,
            witness_coboundary: None,
            witness_fill: None,
            quotient_dim: 0,
        });
    }
    if (1u64 << q.min(63)) - 1 > budget.max_coset_visits {
        return Err(CobexError::BudgetExceeded { what: "filling-norm coset enumeration".into(), q });
    }
    let table = CosetTable::build(code, &budget.limits)?;
    let r = sweep(x, k, &table);
    if r.unresolved_lower.is_set() {
        return Err(CobexError::BudgetExceeded { what: "filling-norm leader weights exceed w_cap".into(), q });
    }
    let best = r.resolved;
    let value = ratio(best.den * x.cell_count(k + 1) as u64, best.num * x.cell_count(k) as u64);
    let fill = table.leader(best.syndrome).expect("resolved");
    let gamma = apply_coboundary(x, k, &fill);
    Ok(FillingNormReport {
        k,
        status: ExpansionStatus::Exact,
        value: Some(value),
        witness_coboundary: Some(Cochain { k: k + 1, vec: gamma }),
        witness_fill: Some(Cochain { k, vec: fill }),
        quotient_dim: q,
    })
}

/// Families with closed-form expansion values or bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Simplex,
    Cross,
    Multipartite,
    Cube,
}

impl std::str::FromStr for Family {
    type Err = CobexError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simplex" => Ok(Family::Simplex),
            "cross" | "cross-polytope" => Ok(Family::Cross),
            "multipartite" => Ok(Family::Multipartite),
            "cube" => Ok(Family::Cube),
            other => Err(invalid(format!("unknown family {other:?}"))),
        }
    }
}

/// Closed-form comparison value: `n/(k+2)` for the simplex, the lower bounds
/// `2(n-k-1)/(k+2)` for the cross-polytope and `n/(2^(k+1)-1)` for the
/// multipartite complex, and `1` for the cube.
pub fn predicted_bounds(family: Family, n: usize, k: usize) -> Rational {
    let (n, k) = (n as i64, k as i64);
    match family {
        Family::Simplex => Rational::new(n, k + 2),
        Family::Cross => Rational::new(2 * (n - k - 1), k + 2),
        Family::Multipartite => Rational::new(n, (1i64 << (k + 1)) - 1),
        Family::Cube => Rational::from_integer(1),
    }
}

/// Runs `c_k = n c_{k-1} / (c_{k-1} + 2n - 2)` for `k` steps from `c0`.
pub fn multipartite_recursion(n: usize, c0: Rational, k: usize) -> Rational {
    let n = Rational::from_integer(n as i64);
    let step = Rational::from_integer(2) * n - Rational::from_integer(2);
    (0..k).fold(c0, |c, _| if c == Rational::from_integer(0) { c } else { n * c / (c + step) })
}

/// `ln |X^(k)| / h`.
pub fn face_relative_ratio(x: &Complex, k: usize, h: &Rational) -> Result<f64> {
    if *h <= Rational::from_integer(0) {
        return Err(CobexError::Undefined("face-relative ratio needs h > 0".into()));
    }
    let cells = x.cell_count(k);
    if cells == 0 {
        return Err(invalid(format!("complex has no {k}-cells")));
    }
    Ok((cells as f64).ln() / crate::rational::to_f64(h))
}

/// `h / D_k`.
pub fn degree_relative_ratio(x: &Complex, k: usize, h: &Rational) -> Result<Rational> {
    let d = x.degree_profile(k)?.max_degree;
    if d == 0 {
        return Err(CobexError::Undefined("maximum degree is zero".into()));
    }
    Ok(*h / Rational::from_integer(d as i64))
}

/// Outcome of deleting (k+1)-cells and measuring the cohomology classes created.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionCheck {
    pub deleted: usize,
    /// Largest quotient norm of a class in `H^k` of the smaller complex (0 if none).
    pub largest_class_norm: usize,
    /// `deleted >= h * largest_class_norm`.
    pub holds: bool,
}

/// Deletes top cells `drop` from `x` and checks that every new class `[β]`
/// needed at least `h · ‖[β]‖` deletions. Enumerates the cocycle space of the
/// result, so it is meant for small complexes.
pub fn deletion_check(x: &Complex, k: usize, h: &Rational, drop: &[usize], limits: &TableLimits) -> Result<DeletionCheck> {
    if x.top_dim() != k + 1 {
        return Err(invalid("deletion check needs a complex of dimension k + 1"));
    }
    let y = x.delete_cells(k + 1, drop)?;
    let table = crate::cochain::coboundary_table(&y, k, limits)?;
    let cocycles = cocycle_space(&y, k);
    if cocycles.dim() > 24 {
        return Err(CobexError::BudgetExceeded { what: "cocycle enumeration".into(), q: cocycles.dim() });
    }
    let mut largest = 0;
    for z in cocycles.span() {
        largest = largest.max(table.norm(&z)?);
    }
    let deleted = drop.iter().collect::<HashSet<_>>().len();
    let holds = Rational::from_integer(deleted as i64) >= *h * Rational::from_integer(largest as i64);
    Ok(DeletionCheck { deleted, largest_class_norm: largest, holds })
}
