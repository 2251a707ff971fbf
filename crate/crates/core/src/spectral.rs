//! Real spectral quantities: graph Laplacians, a dense Jacobi eigensolver,
//! the Cheeger/Buser sandwich and the up-down Laplacian gap of a complex.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{Complex, Label};
use crate::error::{invalid, CobexError, Result};
use crate::expansion::{coboundary_expansion, Budget, ExpansionStatus};
use crate::rational::{to_f64, Rational};

pub const EIGEN_TOL: f64 = 1e-10;
pub const COMPARE_TOL: f64 = 1e-8;
const MAX_SWEEPS: usize = 100;

/// Dense symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(order: usize) -> Self {
        Self { order, data: vec![0.0; order * order] }
    }

    /// Rejects rows that are ragged or not exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(invalid("matrix is not square"));
        }
        for i in 0..order {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(invalid(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { order, data: rows.concat() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.order + j] = v;
        self.data[j * self.order + i] = v;
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.order + j] += v;
        if i != j {
            self.data[j * self.order + i] += v;
        }
    }

    /// `xᵀ M x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        (0..self.order).map(|i| x[i] * (0..self.order).map(|j| self.get(i, j) * x[j]).sum::<f64>()).sum()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.order {
            for j in 0..self.order {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s.sqrt()
    }
}

/// Eigenvalues in ascending order with unit eigenvectors `vectors[i]`.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below `tol`.
pub fn eigen_sym(m: &SymmetricMatrix, tol: f64) -> Result<Eigen> {
    let n = m.order;
    let mut a = m.clone();
    let mut v = SymmetricMatrix::zeros(n);
    for i in 0..n {
        v.data[i * n + i] = 1.0;
    }
    let mut sweeps = 0;
    while a.off_diagonal_norm() >= tol {
        if sweeps == MAX_SWEEPS {
            return Err(CobexError::NumericFailure(format!("Jacobi did not converge in {MAX_SWEEPS} sweeps")));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a.data[k * n + p], a.data[k * n + q]);
                    a.data[k * n + p] = c * akp - s * akq;
                    a.data[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a.data[p * n + k], a.data[q * n + k]);
                    a.data[p * n + k] = c * apk - s * aqk;
                    a.data[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v.data[k * n + p], v.data[k * n + q]);
                    v.data[k * n + p] = c * vkp - s * vkq;
                    v.data[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = order.iter().map(|&i| (0..n).map(|k| v.get(k, i)).collect()).collect();
    Ok(Eigen { values, vectors })
}

pub fn eigenvalues_sym(m: &SymmetricMatrix, tol: f64) -> Result<Vec<f64>> {
    Ok(eigen_sym(m, tol)?.values)
}

/// Degree matrix minus adjacency matrix of the 1-skeleton.
pub fn graph_laplacian(g: &Complex) -> SymmetricMatrix {
    let mut l = SymmetricMatrix::zeros(g.cell_count(0));
    if g.top_dim() >= 1 {
        for e in g.boundaries(1) {
            if let [u, v] = e[..] {
                let (u, v) = (u as usize, v as usize);
                l.add(u, u, 1.0);
                l.add(v, v, 1.0);
                l.add(u, v, -1.0);
            }
        }
    }
    l
}

fn lambda1(g: &Complex) -> Result<(f64, Vec<f64>)> {
    if g.cell_count(0) < 2 {
        return Err(CobexError::Undefined("spectral gap needs at least two vertices".into()));
    }
    let e = eigen_sym(&graph_laplacian(g), EIGEN_TOL)?;
    Ok((e.values[1].max(0.0), e.vectors[1].clone()))
}

/// `‖dβ‖₂ / min_c ‖β + c·1‖₂`; `None` for constant `β`.
pub fn real_quotient(laplacian: &SymmetricMatrix, beta: &[f64]) -> Option<f64> {
    let mean = beta.iter().sum::<f64>() / beta.len() as f64;
    let spread = beta.iter().map(|b| (b - mean).powi(2)).sum::<f64>().sqrt();
    if spread <= 1e-12 * beta.iter().map(|b| b.abs()).fold(1.0, f64::max) {
        return None;
    }
    Some(laplacian.quadratic_form(beta).max(0.0).sqrt() / spread)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub lambda1: f64,
    pub sqrt_lambda1: f64,
    /// Quotient at the `λ₁` eigenvector.
    pub eigenvector_quotient: f64,
    /// Smallest quotient among the random probes.
    pub min_probe_quotient: f64,
    pub probes: usize,
    pub eigenvector_matches: bool,
    pub probes_above: bool,
}

/// Evaluates the real expansion quotient at the Fiedler vector and at random
/// Gaussian vectors.
pub fn real_expansion_probe(g: &Complex, probes: usize, seed: u64) -> Result<ProbeReport> {
    let (l1, fiedler) = lambda1(g)?;
    if l1 <= COMPARE_TOL {
        return Err(CobexError::Undefined("graph is disconnected".into()));
    }
    let lap = graph_laplacian(g);
    let root = l1.sqrt();
    let at_vector = real_quotient(&lap, &fiedler).ok_or_else(|| CobexError::NumericFailure("constant eigenvector".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_probe = f64::INFINITY;
    for _ in 0..probes {
        let beta: Vec<f64> = (0..g.cell_count(0)).map(|_| gaussian(&mut rng)).collect();
        if let Some(qv) = real_quotient(&lap, &beta) {
            min_probe = min_probe.min(qv);
        }
    }
    Ok(ProbeReport {
        lambda1: l1,
        sqrt_lambda1: root,
        eigenvector_quotient: at_vector,
        min_probe_quotient: min_probe,
        probes,
        eigenvector_matches: (at_vector - root).abs() <= 1e-6 * root,
        probes_above: min_probe >= root - COMPARE_TOL,
    })
}

/// Standard normal draw by Box-Muller.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub lambda1: f64,
    pub max_degree: usize,
    #[serde(with = "crate::rational::string")]
    pub h_z2: Rational,
    pub cheeger_lower: f64,
    pub buser_upper: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl SpectralReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// `λ₁/2 <= h⁰ <= sqrt(2 D λ₁)` with the exact `h⁰` from the expansion solver.
pub fn cheeger_buser_check(g: &Complex, budget: &Budget) -> Result<SpectralReport> {
    let graph = g.skeleton(1);
    let (l1, _) = lambda1(&graph)?;
    let report = coboundary_expansion(&graph, 0, budget)?;
    let h = match (report.status, report.value) {
        (ExpansionStatus::Exact, Some(v)) => v,
        _ => return Err(CobexError::BudgetExceeded { what: "exact h0 for the Cheeger check".into(), q: report.quotient_dim }),
    };
    let max_degree = if graph.top_dim() >= 1 { graph.degree_profile(0)?.max_degree } else { 0 };
    let hf = to_f64(&h);
    let cheeger_lower = l1 / 2.0;
    let buser_upper = (2.0 * max_degree as f64 * l1).sqrt();
    Ok(SpectralReport {
        lambda1: l1,
        max_degree,
        h_z2: h,
        cheeger_lower,
        buser_upper,
        lower_holds: cheeger_lower <= hf + COMPARE_TOL,
        upper_holds: hf <= buser_upper + COMPARE_TOL,
    })
}

/// Signed incidence of `δ_k: C^k -> C^(k+1)` as `(row, column, sign)` triples.
/// Simplices and cross-polytope cells are oriented by their label order; a
/// cube face fixing the t-th free coordinate to `b` has sign `(-1)^t (2b - 1)`.
fn signed_coboundary(x: &Complex, k: usize) -> Result<Vec<(usize, usize, f64)>> {
    let mut out = Vec::new();
    if k >= x.top_dim() {
        return Ok(out);
    }
    for (r, faces) in x.boundaries(k + 1).iter().enumerate() {
        for &f in faces {
            let sign = match (&x.labels(k + 1)[r], &x.labels(k)[f as usize]) {
                (Label::Simplex(a), Label::Simplex(b)) => position_sign(a, b),
                (Label::Signed(a), Label::Signed(b)) => position_sign(a, b),
                (Label::Cube(a), Label::Cube(b)) => {
                    let (pos, bit) = a.bytes().zip(b.bytes()).enumerate().find(|(_, (p, q))| p != q).map(|(i, (_, q))| (i, q)).unwrap();
                    let t = a.bytes().take(pos).filter(|&c| c == b'*').count();
                    let s = if t % 2 == 0 { 1.0 } else { -1.0 };
                    if bit == b'1' { s } else { -s }
                }
                _ => return Err(CobexError::UnsupportedOperation("real coboundary needs oriented labels".into())),
            };
            out.push((r, f as usize, sign));
        }
    }
    Ok(out)
}

/// `(-1)^i` where `i` is the position in `cell` of the entry missing from `face`.
fn position_sign<T: PartialEq>(cell: &[T], face: &[T]) -> f64 {
    let i = cell.iter().position(|v| !face.contains(v)).expect("face is a subset");
    if i % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn gram(entries: &[(usize, usize, f64)], rows: usize, order: usize, by_row: bool) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(order);
    let mut groups: Vec<Vec<(usize, f64)>> = vec![Vec::new(); rows];
    for &(r, c, s) in entries {
        if by_row {
            groups[r].push((c, s));
        } else {
            groups[c].push((r, s));
        }
    }
    for g in &groups {
        for &(i, si) in g {
            for &(j, sj) in g {
                if i <= j {
                    m.add(i, j, si * sj);
                }
            }
        }
    }
    m
}

#[derive(Clone, Debug, Serialize)]
pub struct UpDownReport {
    pub k: usize,
    /// Smallest eigenvalue of `δ_kᵀ δ_k` on the orthogonal complement of the coboundaries.
    pub gap: f64,
    /// Real rank of `δ_(k-1)`.
    pub coboundary_rank: usize,
    pub up_spectrum: Vec<f64>,
}

/// Gap of the k-th up-down Laplacian `δ_kᵀδ_k + δ_(k-1)δ_(k-1)ᵀ` on `(B^k)^⊥`,
/// in the reduced complex.
pub fn up_down_laplacian_gap(x: &Complex, k: usize) -> Result<UpDownReport> {
    if k > x.top_dim() {
        return Err(invalid(format!("k = {k} exceeds top dimension {}", x.top_dim())));
    }
    let n = x.cell_count(k);
    if n == 0 {
        return Err(CobexError::Undefined(format!("no {k}-cells")));
    }
    let up_entries = signed_coboundary(x, k)?;
    let rows_up = if k < x.top_dim() { x.cell_count(k + 1) } else { 0 };
    let up = gram(&up_entries, rows_up, n, true);
    let rank = if k == 0 {
        1
    } else {
        let down_entries = signed_coboundary(x, k - 1)?;
        let down = gram(&down_entries, x.cell_count(k - 1), n, false);
        let values = eigenvalues_sym(&down, EIGEN_TOL)?;
        let scale = values.last().copied().unwrap_or(0.0).max(1.0);
        values.iter().filter(|&&v| v > COMPARE_TOL * scale).count()
    };
    let spectrum = eigenvalues_sym(&up, EIGEN_TOL)?;
    if rank >= n {
        return Err(CobexError::Undefined("every cochain is a coboundary".into()));
    }
    Ok(UpDownReport { k, gap: spectrum[rank].max(0.0), coboundary_rank: rank, up_spectrum: spectrum })
}
