//! Seeded random subcomplexes and Monte Carlo experiments.
//!
//! Every sampled complex keeps the full k-skeleton of its ambient complex and
//! each (k+1)-cell independently with probability `p`. Trial `t` of grid point
//! `i` draws from the ChaCha stream `(seed, i·2^32 + t)`, one value per cell in
//! index order, so results do not depend on how trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

use crate::cochain::{coboundary_rank, coboundary_rank_below, coboundary_space, coboundary_table, Cochain};
use crate::complex::Complex;
use crate::error::{invalid, CobexError, Result};
use crate::expansion::{coboundary_expansion, coboundary_expansion_with_table, Budget, ExpansionStatus};
use crate::rational::{to_f64, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// `G(n, p)`.
    #[serde(alias = "er")]
    ErdosRenyi,
    /// `Y_k(n, p)`.
    #[serde(alias = "lm")]
    LinialMeshulam,
    /// Random `p`-subcomplex of a given ambient complex.
    #[serde(alias = "subcomplex")]
    PSubcomplex,
}

impl std::str::FromStr for Model {
    type Err = CobexError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "er" | "erdos-renyi" => Ok(Model::ErdosRenyi),
            "lm" | "linial-meshulam" => Ok(Model::LinialMeshulam),
            "subcomplex" | "p-subcomplex" => Ok(Model::PSubcomplex),
            other => Err(invalid(format!("unknown model {other:?}"))),
        }
    }
}

// Distinct stream domains; G(n,p) and Y_0(n,p) have equal laws but independent draws.
const DOMAIN_GRAPH: u64 = 0x4552_0000_0000_0001;
const DOMAIN_COMPLEX: u64 = 0x4c4d_0000_0000_0002;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub model: Model,
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub seed: u64,
}

/// The ambient complex for a model: `K_n` for `G(n,p)`, `Δ_n^(k+1)` for `Y_k(n,p)`.
pub fn ambient_for(model: Model, n: usize, k: usize) -> Result<Complex> {
    match model {
        Model::ErdosRenyi if k != 0 => Err(invalid("G(n, p) has k = 0")),
        Model::ErdosRenyi => Complex::simplex_skeleton(n, 1),
        Model::LinialMeshulam => Complex::simplex_skeleton(n, k + 1),
        Model::PSubcomplex => Err(invalid("a p-subcomplex needs an explicit ambient complex")),
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn stream(model: Model, seed: u64, id: u64) -> ChaCha8Rng {
    let domain = if model == Model::ErdosRenyi { DOMAIN_GRAPH } else { DOMAIN_COMPLEX };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ domain);
    rng.set_stream(id);
    rng
}

/// Inclusion flags for the top cells of `ambient`.
pub fn sample_mask(model: Model, ambient: &Complex, p: f64, seed: u64, stream_id: u64) -> Vec<bool> {
    let mut rng = stream(model, seed, stream_id);
    (0..ambient.cell_count(ambient.top_dim())).map(|_| rng.gen::<f64>() < p).collect()
}

/// Samples trial 0 of `spec`. `ambient` is required for p-subcomplexes and
/// must then have dimension `k + 1`.
pub fn sample(spec: &SampleSpec, ambient: Option<&Complex>) -> Result<Complex> {
    sample_trial(spec, ambient, 0)
}

pub fn sample_trial(spec: &SampleSpec, ambient: Option<&Complex>, stream_id: u64) -> Result<Complex> {
    check_p(spec.p)?;
    let owned;
    let ambient = match (spec.model, ambient) {
        (Model::PSubcomplex, Some(a)) => a,
        (Model::PSubcomplex, None) => return Err(invalid("a p-subcomplex needs an ambient complex")),
        (model, _) => {
            owned = ambient_for(model, spec.n, spec.k)?;
            &owned
        }
    };
    if ambient.top_dim() != spec.k + 1 {
        return Err(invalid(format!("ambient dimension {} is not k + 1 = {}", ambient.top_dim(), spec.k + 1)));
    }
    Ok(ambient.keep_top_cells(&sample_mask(spec.model, ambient, spec.p, spec.seed, stream_id)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    CohomologyVanishing,
    Connectivity,
    ExactExpansion,
    CoboundaryConcentration,
}

/// A Monte Carlo experiment over a grid of probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: Model,
    pub n: usize,
    pub k: usize,
    pub p_grid: Vec<f64>,
    pub trials_per_point: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub omega: f64,
    pub measure: Measure,
    #[serde(default)]
    pub seed: u64,
    /// Thread count; `None` uses the current pool.
    #[serde(default)]
    pub worker_count: Option<usize>,
    /// JSON complex file for p-subcomplex experiments.
    #[serde(default)]
    pub ambient_path: Option<String>,
}

fn default_epsilon() -> f64 {
    0.5
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials_per_point == 0 {
            return Err(invalid("trials_per_point must be at least 1"));
        }
        if self.p_grid.is_empty() {
            return Err(invalid("p_grid is empty"));
        }
        for &p in &self.p_grid {
            check_p(p)?;
        }
        if self.p_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("p_grid must be strictly increasing"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(invalid(format!("epsilon {} outside (0, 1)", self.epsilon)));
        }
        Ok(())
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let cfg: Self = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// The ambient complex, from `ambient_path` for p-subcomplexes.
    pub fn ambient(&self) -> Result<Complex> {
        match (&self.ambient_path, self.model) {
            (Some(path), _) => Complex::read_json(path),
            (None, model) => ambient_for(model, self.n, self.k),
        }
    }

    /// Runs `f` on a pool with `worker_count` threads, or on the current pool.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.worker_count {
            Some(w) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(w.max(1))
                    .build()
                    .map_err(|e| invalid(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
            None => Ok(f()),
        }
    }
}

/// Parses `start:stop:step`, inclusive of `stop` up to rounding.
pub fn parse_p_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|t| t.trim().parse::<f64>().map_err(|_| invalid(format!("bad p-grid {s:?}"))))
        .collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(invalid(format!("p-grid must be start:stop:step, got {s:?}")));
    };
    if !(step > 0.0) || stop < start {
        return Err(invalid(format!("bad p-grid {s:?}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect();
    for &p in &grid {
        check_p(p)?;
    }
    Ok(grid)
}

/// Aggregated trials at one probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: f64,
    /// Trials with a definite outcome.
    pub trials: usize,
    pub successes: usize,
    pub mean_value: f64,
    /// Binomial standard error of the success fraction.
    pub std_err: f64,
    /// Standard error of `mean_value`.
    pub mean_std_err: f64,
    /// Trials the solver could not settle within budget.
    pub indeterminate: usize,
}

impl CurvePoint {
    pub fn fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    fn from_outcomes(p: f64, outcomes: &[Option<(bool, f64)>]) -> Self {
        let settled: Vec<(bool, f64)> = outcomes.iter().flatten().copied().collect();
        let trials = settled.len();
        let successes = settled.iter().filter(|o| o.0).count();
        let (mean, mean_se) = mean_and_se(settled.iter().map(|o| o.1));
        let f = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        let std_err = if trials == 0 { 0.0 } else { (f * (1.0 - f) / trials as f64).sqrt() };
        CurvePoint {
            p,
            trials,
            successes,
            mean_value: mean,
            std_err,
            mean_std_err: mean_se,
            indeterminate: outcomes.len() - trials,
        }
    }
}

fn mean_and_se(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

pub const CSV_HEADER: [&str; 7] = ["p", "trials", "successes", "fraction", "std_err", "mean_value", "indeterminate"];

pub fn write_curve_csv<W: Write>(points: &[CurvePoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for pt in points {
        w.write_record([
            format!("{}", pt.p),
            pt.trials.to_string(),
            pt.successes.to_string(),
            format!("{:.6}", pt.fraction()),
            format!("{:.6}", pt.std_err),
            format!("{:.6}", pt.mean_value),
            pt.indeterminate.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `(p, trials, successes, mean_value)` rows back from a curve CSV.
pub fn read_curve_csv(path: impl AsRef<Path>) -> Result<Vec<(f64, usize, usize, f64)>> {
    #[derive(Deserialize)]
    struct Row {
        p: f64,
        trials: usize,
        successes: usize,
        mean_value: f64,
    }
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize::<Row>()
        .map(|row| Ok(row.map(|x| (x.p, x.trials, x.successes, x.mean_value))?))
        .collect()
}

/// Precomputed facts about an ambient complex for fast `H^k = 0` tests on
/// its random subcomplexes.
struct VanishingTest {
    k: usize,
    /// `|X^(k)| - rank d_{k-1}`: the rank `d_k` must reach.
    target: usize,
    /// k-cells whose indicator is not a coboundary; losing all their cofaces creates cohomology.
    isolated_witness: Vec<bool>,
}

impl VanishingTest {
    fn new(ambient: &Complex, k: usize) -> Self {
        let cells = ambient.cell_count(k);
        let target = cells - coboundary_rank_below(ambient, k);
        let isolated_witness = if k == 0 {
            vec![cells > 1; cells]
        } else {
            let b = coboundary_space(ambient, k, true);
            (0..cells).map(|c| !b.contains(&crate::gf2::GF2Vector::from_indices(cells, [c]))).collect()
        };
        Self { k, target, isolated_witness }
    }

    fn vanishes(&self, ambient: &Complex, keep: &[bool]) -> bool {
        let k = self.k;
        let kept = keep.iter().filter(|&&b| b).count();
        if kept < self.target {
            return false;
        }
        let cells = ambient.cell_count(k);
        for c in 0..cells {
            if self.isolated_witness[c] && !ambient.cofaces(k, c).iter().any(|&f| keep[f as usize]) {
                return false;
            }
        }
        if k == 0 {
            return connected(cells, keep.iter().enumerate().filter(|(_, &b)| b).map(|(e, _)| ambient.boundary(1, e)));
        }
        let rows = (0..keep.len()).filter(|&r| keep[r]);
        coboundary_rank(ambient, k, rows, self.target) == self.target
    }
}

fn connected<'a>(n: usize, edges: impl Iterator<Item = &'a [u32]>) -> bool {
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut components = n;
    for e in edges {
        if let [u, v] = e[..] {
            let (a, b) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
    }
    components <= 1
}

fn stream_id(point: usize, trial: usize) -> u64 {
    (point as u64) << 32 | trial as u64
}

/// Fraction of trials with vanishing `H^k` (connectivity for `k = 0`) at each
/// grid point. `mean_value` is the mean number of (k+1)-cells kept.
pub fn threshold_sweep(cfg: &ExperimentConfig, ambient: &Complex) -> Result<Vec<CurvePoint>> {
    cfg.validate()?;
    match cfg.measure {
        Measure::CohomologyVanishing | Measure::Connectivity => {}
        Measure::ExactExpansion => return expansion_inheritance_mc(ambient, cfg.k, cfg, &Budget::default()),
        Measure::CoboundaryConcentration => {
            return Err(invalid("coboundary concentration is run per cochain, not as a sweep"));
        }
    }
    let k = if cfg.measure == Measure::Connectivity { 0 } else { cfg.k };
    if ambient.top_dim() != k + 1 {
        return Err(invalid(format!("ambient dimension {} is not k + 1 = {}", ambient.top_dim(), k + 1)));
    }
    let test = VanishingTest::new(ambient, k);
    cfg.install(|| {
        cfg.p_grid
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let outcomes: Vec<Option<(bool, f64)>> = (0..cfg.trials_per_point)
                    .into_par_iter()
                    .map(|t| {
                        let keep = sample_mask(cfg.model, ambient, p, cfg.seed, stream_id(i, t));
                        let kept = keep.iter().filter(|&&b| b).count() as f64;
                        Some((test.vanishes(ambient, &keep), kept))
                    })
                    .collect();
                CurvePoint::from_outcomes(p, &outcomes)
            })
            .collect()
    })
}

/// Per grid point: the fraction of trials with `h^k(Y) >= (1 - ε) p h^k(X)` and
/// the mean of `h^k(Y) / (p h^k(X))`. Trials whose exact value is out of budget
/// are counted as indeterminate.
pub fn expansion_inheritance_mc(ambient: &Complex, k: usize, cfg: &ExperimentConfig, budget: &Budget) -> Result<Vec<CurvePoint>> {
    cfg.validate()?;
    if ambient.top_dim() != k + 1 {
        return Err(invalid(format!("ambient dimension {} is not k + 1 = {}", ambient.top_dim(), k + 1)));
    }
    let hx = coboundary_expansion(ambient, k, budget)?;
    let hx = match (hx.status, hx.value) {
        (ExpansionStatus::Exact, Some(v)) if v > Rational::from_integer(0) => to_f64(&v),
        _ => return Err(invalid("ambient expansion must be exact and positive")),
    };
    let table = coboundary_table(ambient, k, &budget.limits)?;
    let test = VanishingTest::new(ambient, k);
    cfg.install(|| {
        cfg.p_grid
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let outcomes: Vec<Option<(bool, f64)>> = (0..cfg.trials_per_point)
                    .into_par_iter()
                    .map(|t| {
                        let keep = sample_mask(cfg.model, ambient, p, cfg.seed, stream_id(i, t));
                        let hy = if !test.vanishes(ambient, &keep) {
                            0.0
                        } else {
                            let y = ambient.keep_top_cells(&keep);
                            match coboundary_expansion_with_table(&y, k, &table, budget) {
                                Ok(r) if r.status == ExpansionStatus::Exact => to_f64(&r.value?),
                                _ => return None,
                            }
                        };
                        let scale = p * hx;
                        let value = if scale > 0.0 { hy / scale } else { 0.0 };
                        Some((hy >= (1.0 - cfg.epsilon) * scale - 1e-12, value))
                    })
                    .collect();
                CurvePoint::from_outcomes(p, &outcomes)
            })
            .collect()
    })
}

/// One tail comparison `P[‖dβ‖_Y <= (1-ε) p ‖dβ‖]` against `exp(-ε² p ‖dβ‖ / 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCheck {
    pub epsilon: f64,
    pub tail_count: usize,
    pub tail_frequency: f64,
    pub chernoff_bound: f64,
    /// Binomial standard error at the bound, `sqrt(b(1-b)/T)`.
    pub sigma: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationStats {
    pub p: f64,
    pub trials: usize,
    /// `‖dβ‖` in the ambient complex.
    pub norm: usize,
    pub mean: f64,
    pub std_err: f64,
    /// Frequency of each value `0..=norm` of `‖dβ‖_Y`.
    pub histogram: Vec<usize>,
    pub tails: Vec<TailCheck>,
}

/// Empirical distribution of `‖dβ‖_Y` over random p-subcomplexes `Y`.
pub fn coboundary_concentration(
    ambient: &Complex,
    beta: &Cochain,
    p: f64,
    trials: usize,
    seed: u64,
    epsilons: &[f64],
) -> Result<ConcentrationStats> {
    check_p(p)?;
    let k = beta.k;
    if ambient.top_dim() != k + 1 {
        return Err(invalid(format!("ambient dimension {} is not k + 1 = {}", ambient.top_dim(), k + 1)));
    }
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    let dbeta = crate::cochain::apply_coboundary(ambient, k, &beta.vec);
    let norm = dbeta.weight();
    if norm == 0 {
        return Err(invalid("‖dβ‖ must be positive"));
    }
    let support = dbeta.support();
    let values: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let keep = sample_mask(Model::PSubcomplex, ambient, p, seed, t as u64);
            support.iter().filter(|&&c| keep[c]).count()
        })
        .collect();
    let mut histogram = vec![0; norm + 1];
    for &v in &values {
        histogram[v] += 1;
    }
    let (mean, std_err) = mean_and_se(values.iter().map(|&v| v as f64));
    let tails = epsilons
        .iter()
        .map(|&eps| {
            let threshold = (1.0 - eps) * p * norm as f64;
            let tail_count = values.iter().filter(|&&v| v as f64 <= threshold + 1e-12).count();
            let tail_frequency = tail_count as f64 / trials as f64;
            let chernoff_bound = (-eps * eps * p * norm as f64 / 2.0).exp();
            let b = chernoff_bound.min(1.0);
            let sigma = (b * (1.0 - b) / trials as f64).sqrt();
            TailCheck { epsilon: eps, tail_count, tail_frequency, chernoff_bound, sigma, holds: tail_frequency <= chernoff_bound + 3.0 * sigma }
        })
        .collect();
    Ok(ConcentrationStats { p, trials, norm, mean, std_err, histogram, tails })
}

pub const CONCENTRATION_CSV_HEADER: [&str; 9] =
    ["p", "epsilon", "trials", "norm", "mean", "std_err", "tail_count", "tail_frequency", "chernoff_bound"];

pub fn write_concentration_csv<W: Write>(rows: &[ConcentrationStats], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CONCENTRATION_CSV_HEADER)?;
    for s in rows {
        for t in &s.tails {
            w.write_record([
                format!("{}", s.p),
                format!("{}", t.epsilon),
                s.trials.to_string(),
                s.norm.to_string(),
                format!("{:.6}", s.mean),
                format!("{:.6}", s.std_err),
                t.tail_count.to_string(),
                format!("{:.6}", t.tail_frequency),
                format!("{:.6}", t.chernoff_bound),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Linear interpolation of the first grid interval where the fraction rises
/// through `level`. `None` if the curve never crosses.
pub fn crossing(points: &[CurvePoint], level: f64) -> Option<f64> {
    if let Some(first) = points.first() {
        if first.fraction() >= level {
            return Some(first.p);
        }
    }
    points.windows(2).find_map(|w| {
        let (a, b) = (w[0].fraction(), w[1].fraction());
        (a < level && b >= level).then(|| w[0].p + (level - a) / (b - a) * (w[1].p - w[0].p))
    })
}

/// Success-fraction standard error with add-one-half smoothing, so that
/// points at 0 or 1 still carry noise.
pub fn smoothed_std_err(successes: usize, trials: usize) -> f64 {
    let f = (successes as f64 + 0.5) / (trials as f64 + 1.0);
    (f * (1.0 - f) / trials.max(1) as f64).sqrt()
}

/// Whether `values` never drops between consecutive entries by more than
/// `sigmas · sqrt(se_i² + se_{i+1}²)`.
pub fn monotone_within_noise(values: &[f64], std_errs: &[f64], sigmas: f64) -> bool {
    values.windows(2).zip(std_errs.windows(2)).all(|(v, s)| v[0] - v[1] <= sigmas * (s[0] * s[0] + s[1] * s[1]).sqrt())
}

/// The fraction curve of `points` is non-decreasing up to noise.
pub fn fractions_monotone(points: &[CurvePoint], sigmas: f64) -> bool {
    let values: Vec<f64> = points.iter().map(CurvePoint::fraction).collect();
    let ses: Vec<f64> = points.iter().map(|p| smoothed_std_err(p.successes, p.trials)).collect();
    monotone_within_noise(&values, &ses, sigmas)
}

/// `(2 ln|X^(k)| + ω) / (ε² h)`, the probability above which expansion is
/// inherited.
pub fn inheritance_threshold(cells: usize, h: f64, epsilon: f64, omega: f64) -> f64 {
    (2.0 * (cells as f64).ln() + omega) / (epsilon * epsilon * h)
}
