use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cobex::cochain::{cohomology_dim, TableLimits};
use cobex::expansion::{
    coboundary_expansion, degree_relative_ratio, edge_expansion_sets, face_relative_ratio, filling_norm,
    predicted_bounds, Budget, ExpansionStatus, Family, EDGE_EXPANSION_MAX_VERTICES,
};
use cobex::filling::{cube_fill, min_fill_oracle, Duality, DualityCheck, FillStrategy, EXHAUSTIVE_MAX_N};
use cobex::random::{
    coboundary_concentration, crossing, expansion_inheritance_mc, parse_p_grid, sample_trial, threshold_sweep,
    write_concentration_csv, write_curve_csv, CurvePoint, ExperimentConfig, Measure, Model, SampleSpec,
};
use cobex::rational::format;
use cobex::spectral::{cheeger_buser_check, eigenvalues_sym, graph_laplacian, real_expansion_probe, up_down_laplacian_gap, EIGEN_TOL};
use cobex::{Cochain, CobexError, Complex, GF2Vector, Label, Rational};

#[derive(Parser)]
#[command(name = "cobex", version, about = "Exact Z2 coboundary expansion and random-subcomplex experiments")]
struct Cli {
    /// Worker threads for enumeration and Monte Carlo.
    #[arg(long, global = true, env = "COBEX_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a standard complex and write it as JSON.
    Gen {
        #[command(flatten)]
        source: Source,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cell counts and degree profile.
    Info {
        #[command(flatten)]
        source: Source,
    },
    /// Dimensions of reduced cohomology groups.
    Cohomology {
        #[command(flatten)]
        source: Source,
        /// Only this degree.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Exact coboundary expansion h^k, or certified bounds when over budget.
    Expansion {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Also run subset enumeration (k = 0 only).
        #[arg(long)]
        sets: bool,
    },
    /// Exact filling norm of d_k.
    FillingNorm {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Fill a j-cycle of the cube Q_n.
    FillCube {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        /// Cycle cells as cube labels separated by ';', e.g. "000;111".
        #[arg(long, allow_hyphen_values = true)]
        labels: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Also report the minimum filling volume.
        #[arg(long)]
        oracle: bool,
    },
    /// Map cross-polytope k-cells to cube (n-k-1)-cells, or back.
    Dual {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Cells separated by ';': signed coordinates such as "(+1,-2)", or cube labels with --inverse.
        #[arg(long, allow_hyphen_values = true)]
        labels: Option<String>,
        #[arg(long)]
        inverse: bool,
        /// Check the commuting square on every basis cochain.
        #[arg(long)]
        check: bool,
    },
    /// Spectral gap against exact edge expansion.
    Cheeger {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Random vectors for the real expansion probe.
        #[arg(long, default_value_t = 100)]
        probes: usize,
    },
    /// Laplacian spectrum (k = 0) and the up-down Laplacian gap.
    Spectral {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long)]
        eigenvalues: bool,
    },
    /// Draw one random complex.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trial index within the seed.
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Success fraction of H^k = 0 (connectivity for k = 0) over a p grid.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Experiment config JSON; replaces the other experiment flags.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Monte Carlo of h^k(Y) / (p h^k(X)) over random p-subcomplexes.
    InheritMc {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        experiment: ExperimentArgs,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Distribution of ||d beta|| on random p-subcomplexes against the Chernoff tail.
    Concentration {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        k: usize,
        /// Cells of beta as labels separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        labels: String,
        /// Probabilities separated by ','.
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        p: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.5")]
        epsilon: Vec<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// A complex read from a JSON file or built from a named family.
#[derive(Args)]
struct Source {
    /// Complex JSON file.
    file: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "file")]
    family: Option<FamilyArg>,
    /// Size parameter: vertices (simplex), dimension (cube, cross), part size (multipartite).
    #[arg(long)]
    n: Option<usize>,
    /// Top dimension for simplex and multipartite families (default k + 1).
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Simplex,
    Cube,
    Cross,
    Multipartite,
}

impl FamilyArg {
    fn family(self) -> Family {
        match self {
            FamilyArg::Simplex => Family::Simplex,
            FamilyArg::Cube => Family::Cube,
            FamilyArg::Cross => Family::Cross,
            FamilyArg::Multipartite => Family::Multipartite,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Greedy,
    /// Exhaustive up to the size limit, greedy above.
    Auto,
}

#[derive(Args)]
struct BudgetArgs {
    /// Largest quotient dimension for a coset table.
    #[arg(long, default_value_t = 28)]
    q_max: usize,
    /// Largest coset-leader weight resolved exactly.
    #[arg(long, default_value_t = 64)]
    w_cap: usize,
    /// Largest number of cosets visited.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    /// Random cosets sampled for upper bounds when over budget.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            limits: TableLimits { q_max: self.q_max, w_cap: self.w_cap },
            max_coset_visits: self.budget,
            bound_samples: self.samples,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    /// er, lm or subcomplex.
    #[arg(long, default_value = "lm")]
    model: String,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Ambient complex JSON for the subcomplex model.
    #[arg(long)]
    ambient: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// start:stop:step, inclusive.
    #[arg(long)]
    p_grid: Option<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
}

type Res<T> = Result<T, CobexError>;

fn usage(msg: impl Into<String>) -> CobexError {
    CobexError::InvalidParameter(msg.into())
}

impl Source {
    fn load(&self, k: Option<usize>) -> Res<Complex> {
        if let Some(path) = &self.file {
            return Complex::read_json(path);
        }
        let family = self.family.ok_or_else(|| usage("give a complex file or --family"))?;
        let n = self.n.ok_or_else(|| usage("--family needs --n"))?;
        let dim = self.dim.or(k.map(|k| k + 1));
        match family {
            FamilyArg::Simplex => Complex::simplex_skeleton(n, dim.unwrap_or(2)),
            FamilyArg::Cube => Complex::cube(n),
            FamilyArg::Cross => Complex::cross_polytope(n),
            FamilyArg::Multipartite => {
                let d = dim.unwrap_or(1);
                if d == 0 {
                    return Err(usage("multipartite complexes have dimension at least 1"));
                }
                Complex::multipartite(n, d - 1)
            }
        }
    }
}

fn parse_labels(x: &Complex, dim: usize, text: &str) -> Res<Vec<usize>> {
    text.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let label = Label::parse(x.kind(), t).ok_or_else(|| usage(format!("cannot parse label {t:?}")))?;
            x.find(dim, &label).ok_or_else(|| usage(format!("no {dim}-cell labelled {t:?}")))
        })
        .collect()
}

fn labels_of(x: &Complex, dim: usize, v: &GF2Vector) -> Vec<String> {
    v.iter_ones().map(|i| x.labels(dim)[i].to_string()).collect()
}

fn rational(r: Option<Rational>) -> Value {
    r.map_or(Value::Null, |v| Value::String(format(&v)))
}

fn status(s: ExpansionStatus) -> &'static str {
    match s {
        ExpansionStatus::Exact => "exact",
        ExpansionStatus::Bounds => "bounds",
        ExpansionStatus::UndefinedEmptyDomain => "undefined-empty-domain",
    }
}

fn print_json(v: &Value) -> Res<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn create(path: &PathBuf) -> Res<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_complex(x: &Complex, path: &PathBuf) -> Res<()> {
    x.write_json(path)?;
    print_json(&json!({"written": path.display().to_string(), "cells": x.cells_per_dim()}))
}

fn curve_json(points: &[CurvePoint]) -> Value {
    json!(points
        .iter()
        .map(|p| json!({
            "p": p.p,
            "trials": p.trials,
            "successes": p.successes,
            "fraction": p.fraction(),
            "std_err": p.std_err,
            "mean_value": p.mean_value,
            "indeterminate": p.indeterminate,
        }))
        .collect::<Vec<_>>())
}

fn write_curve(points: &[CurvePoint], csv: &Option<PathBuf>) -> Res<()> {
    match csv {
        Some(path) => write_curve_csv(points, create(path)?),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Res<()> {
    match cli.command {
        Command::Gen { source, out } => {
            let x = source.load(None)?;
            match out {
                Some(path) => write_complex(&x, &path),
                None => {
                    println!("{}", x.to_json_string());
                    Ok(())
                }
            }
        }
        Command::Info { source } => {
            let x = source.load(None)?;
            let degrees: Vec<Value> = (0..x.top_dim())
                .filter_map(|k| x.degree_profile(k).ok())
                .map(|d| json!({"k": d.k, "max": d.max_degree, "min": d.min_degree, "mean": format(&d.mean_degree)}))
                .collect();
            let euler: i64 = x.cells_per_dim().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
            print_json(&json!({
                "kind": x.kind(),
                "top_dim": x.top_dim(),
                "cells": x.cells_per_dim(),
                "euler_characteristic": euler,
                "degrees": degrees,
            }))
        }
        Command::Cohomology { source, k } => {
            let x = source.load(k)?;
            let degrees: Vec<usize> = match k {
                Some(k) => vec![k],
                None => (0..=x.top_dim()).collect(),
            };
            let dims = degrees.iter().map(|&k| Ok(json!({"k": k, "dim": cohomology_dim(&x, k)?}))).collect::<Res<Vec<_>>>()?;
            print_json(&json!({ "reduced_cohomology": dims }))
        }
        Command::Expansion { source, k, budget, sets } => {
            let x = source.load(Some(k))?;
            let r = coboundary_expansion(&x, k, &budget.budget())?;
            let mut out = json!({
                "k": k,
                "h": rational(r.value),
                "status": status(r.status),
                "lower": rational(r.lower),
                "upper": rational(r.upper),
                "witness": r.witness.as_ref().map(|w| labels_of(&x, k, &w.vec)),
                "cosets_enumerated": r.cosets_enumerated,
                "quotient_dim": r.quotient_dim,
            });
            if let (Some(f), Some(n)) = (source.family, source.n) {
                out["predicted"] = json!(format(&predicted_bounds(f.family(), n, k)));
            }
            if let Some(h) = r.value.filter(|h| *h > Rational::from_integer(0)) {
                out["face_relative_ratio"] = json!(face_relative_ratio(&x, k, &h)?);
                if k < x.top_dim() {
                    out["degree_relative"] = json!(format(&degree_relative_ratio(&x, k, &h)?));
                }
            }
            if sets {
                if k != 0 {
                    return Err(usage("--sets applies to k = 0"));
                }
                if x.cell_count(0) > EDGE_EXPANSION_MAX_VERTICES {
                    return Err(CobexError::BudgetExceeded { what: "subset enumeration".into(), q: x.cell_count(0) });
                }
                let s = edge_expansion_sets(&x)?;
                out["set_enumeration"] = json!({"h": rational(s.value), "witness": s.witness.iter().map(|&v| x.labels(0)[v].to_string()).collect::<Vec<_>>()});
            }
            print_json(&out)
        }
        Command::FillingNorm { source, k, budget } => {
            let x = source.load(Some(k))?;
            let r = filling_norm(&x, k, &budget.budget())?;
            print_json(&json!({
                "k": k,
                "filling_norm": rational(r.value),
                "status": status(r.status),
                "witness_coboundary": r.witness_coboundary.as_ref().map(|w| labels_of(&x, k + 1, &w.vec)),
                "witness_fill": r.witness_fill.as_ref().map(|w| labels_of(&x, k, &w.vec)),
                "quotient_dim": r.quotient_dim,
            }))
        }
        Command::FillCube { n, j, labels, strategy, oracle } => {
            let cube = Complex::cube(n)?;
            if j >= n {
                return Err(usage(format!("need j < n, got j = {j}, n = {n}")));
            }
            let cells = parse_labels(&cube, j, &labels)?;
            let z = GF2Vector::from_indices(cube.cell_count(j), cells);
            let strategy = match strategy {
                StrategyArg::Exhaustive => FillStrategy::Exhaustive,
                StrategyArg::Greedy => FillStrategy::Greedy,
                StrategyArg::Auto if n <= EXHAUSTIVE_MAX_N => FillStrategy::Exhaustive,
                StrategyArg::Auto => FillStrategy::Greedy,
            };
            let fill = cube_fill(n, j, &z, strategy)?;
            let mut out = json!({
                "n": n,
                "j": j,
                "strategy": fill.strategy,
                "fill": labels_of(&cube, j + 1, &fill.y),
                "volume": fill.y.weight(),
                "cycle_volume": fill.z.weight(),
                "achieved_ratio": rational(fill.achieved_ratio),
                "bound": format(&fill.bound),
                "within_bound": fill.within_bound,
            });
            if oracle {
                out["min_volume"] = json!(min_fill_oracle(n, j, &z, &TableLimits::default())?);
            }
            print_json(&out)
        }
        Command::Dual { n, k, labels, inverse, check } => {
            let map = Duality::new(n, k)?;
            let cross = Complex::cross_polytope(n)?;
            let cube = Complex::cube(n)?;
            let mut out = json!({"n": n, "k": k, "cells": map.len()});
            if let Some(text) = labels {
                let (from, to, dim_from, dim_to) = if inverse { (&cube, &cross, n - k - 1, k) } else { (&cross, &cube, k, n - k - 1) };
                let v = GF2Vector::from_indices(map.len(), parse_labels(from, dim_from, &text)?);
                let image = if inverse { map.inverse(&v) } else { map.apply(&v) };
                out["image"] = json!(labels_of(to, dim_to, &image));
            }
            if check {
                if k + 2 > n {
                    return Err(usage("the commuting square needs k <= n - 2"));
                }
                let square = DualityCheck::new(n)?;
                let mismatches =
                    (0..map.len()).filter(|&i| !square.commutes(k, &GF2Vector::from_indices(map.len(), [i]))).count();
                out["commuting_square_mismatches"] = json!(mismatches);
            }
            print_json(&out)
        }
        Command::Cheeger { source, budget, probes } => {
            let g = source.load(Some(0))?;
            let r = cheeger_buser_check(&g, &budget.budget())?;
            let mut out = serde_json::to_value(&r)?;
            out["holds"] = json!(r.holds());
            if r.lambda1 > cobex::spectral::COMPARE_TOL {
                out["probe"] = serde_json::to_value(real_expansion_probe(&g, probes, budget.seed)?)?;
            }
            print_json(&out)
        }
        Command::Spectral { source, k, eigenvalues } => {
            let x = source.load(Some(k))?;
            let r = up_down_laplacian_gap(&x, k)?;
            let mut out = json!({"k": k, "up_down_gap": r.gap, "coboundary_rank": r.coboundary_rank});
            if k == 0 {
                out["lambda1"] = json!(r.gap);
            }
            if eigenvalues {
                out["up_spectrum"] = json!(r.up_spectrum);
                if k == 0 {
                    out["laplacian_spectrum"] = json!(eigenvalues_sym(&graph_laplacian(&x), EIGEN_TOL)?);
                }
            }
            print_json(&out)
        }
        Command::Sample { model, p, seed, trial, out } => {
            let m: Model = model.model.parse()?;
            let ambient = model.ambient.as_ref().map(Complex::read_json).transpose()?;
            let spec = SampleSpec { model: m, n: model.n, k: if m == Model::ErdosRenyi { 0 } else { model.k }, p, seed };
            let y = sample_trial(&spec, ambient.as_ref(), trial)?;
            match out {
                Some(path) => write_complex(&y, &path),
                None => {
                    println!("{}", y.to_json_string());
                    Ok(())
                }
            }
        }
        Command::Sweep { model, experiment, seed, config } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::from_json_file(path)?,
                None => {
                    let m: Model = model.model.parse()?;
                    let k = if m == Model::ErdosRenyi { 0 } else { model.k };
                    ExperimentConfig {
                        model: m,
                        n: model.n,
                        k,
                        p_grid: parse_p_grid(experiment.p_grid.as_deref().ok_or_else(|| usage("--p-grid is required"))?)?,
                        trials_per_point: experiment.trials,
                        epsilon: 0.5,
                        omega: 0.0,
                        measure: if k == 0 { Measure::Connectivity } else { Measure::CohomologyVanishing },
                        seed: seed,
                        worker_count: None,
                        ambient_path: model.ambient.as_ref().map(|p| p.display().to_string()),
                    }
                }
            };
            cfg.worker_count = cfg.worker_count.or(cli.workers);
            cfg.validate()?;
            let ambient = cfg.ambient()?;
            let points = threshold_sweep(&cfg, &ambient)?;
            write_curve(&points, &experiment.csv)?;
            print_json(&json!({
                "model": cfg.model,
                "n": cfg.n,
                "k": cfg.k,
                "crossing": crossing(&points, 0.5),
                "points": curve_json(&points),
            }))
        }
        Command::InheritMc { source, k, experiment, epsilon, budget } => {
            let ambient = source.load(Some(k))?;
            let cfg = ExperimentConfig {
                model: Model::PSubcomplex,
                n: ambient.cell_count(0),
                k,
                p_grid: parse_p_grid(experiment.p_grid.as_deref().ok_or_else(|| usage("--p-grid is required"))?)?,
                trials_per_point: experiment.trials,
                epsilon,
                omega: 0.0,
                measure: Measure::ExactExpansion,
                seed: budget.seed,
                worker_count: cli.workers,
                ambient_path: None,
            };
            cfg.validate()?;
            let points = expansion_inheritance_mc(&ambient, k, &cfg, &budget.budget())?;
            write_curve(&points, &experiment.csv)?;
            print_json(&json!({ "k": k, "epsilon": epsilon, "points": curve_json(&points) }))
        }
        Command::Concentration { source, k, labels, p, trials, seed, epsilon, csv } => {
            let ambient = source.load(Some(k))?;
            let beta = Cochain::from_cells(&ambient, k, parse_labels(&ambient, k, &labels)?)?;
            let stats = p
                .iter()
                .map(|&p| coboundary_concentration(&ambient, &beta, p, trials, seed, &epsilon))
                .collect::<Res<Vec<_>>>()?;
            if let Some(path) = csv {
                write_concentration_csv(&stats, create(&path)?)?;
            }
            print_json(&serde_json::to_value(&stats)?)
        }
    }
}

fn exit_code(e: &CobexError) -> u8 {
    match e {
        CobexError::BudgetExceeded { .. } => 3,
        CobexError::NumericFailure(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon_pool(w) {
            eprintln!("cobex: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cobex: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn rayon_pool(workers: usize) -> Result<(), String> {
    if workers == 0 {
        return Err("--workers must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(workers).build_global().map_err(|e| e.to_string())
}
