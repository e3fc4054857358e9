//! Batch front end: every lab as a subcommand with reproducible seeds and
//! CSV/JSON outputs plus a rerunnable manifest.
//!
//! Exit codes: 0 success, 1 a check ran and failed, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lampwalk::distortion::{exact_distortion_small, pairwise_report};
use lampwalk::embed::{
    compression_composition_rat, embed_line_l1, embed_z2, gaussian_lift_check, iterated_line_alpha,
    lift_bernoulli, parse_rational, tree_distance, tree_embedding, CycleEmbedding,
};
use lampwalk::error::Error;
use lampwalk::group::{group_from_name, parse_element, Element, GroupSpec};
use lampwalk::metric::{check_metric_equivalence, poincare_j};
use lampwalk::report::{write_csv, write_json, RunManifest};
use lampwalk::smooth::{
    cocycle_growth_check, cocycle_identity_check, enflo_ratio, hilbert_doubling_check,
    markov_ratio, pisier_martingale_check, two_point_smoothness, SmoothnessParams, Verdict,
};
use lampwalk::walk::{
    estimate_return, estimate_speed, estimate_speed_doubled, visits_and_range,
    wreath_lamp_statistics, WalkConfig,
};

#[derive(Parser)]
#[command(name = "lampwalk", version, about = "word metrics, embeddings, and random-walk labs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// master seed for all randomness in the run
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// output path prefix; files are <out>.csv / <out>.json / <out>.manifest.json
    #[arg(long)]
    out: Option<PathBuf>,
    /// primary data format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// worker threads (default: all available); outputs do not depend on it
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Mean displacement of the simple random walk and its fitted exponent
    WalkSpeed {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long, default_value_t = 1 << 14)]
        t_max: u64,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        /// comma-separated checkpoints (default: powers of two)
        #[arg(long)]
        t_grid: Option<String>,
        /// walk a wreath product with the doubled-lamp generating multiset
        #[arg(long, default_value_t = false)]
        doubled: bool,
    },
    /// Return probabilities with lazy pairing and the fitted slope
    ReturnProb {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long, default_value_t = 1 << 10)]
        t_max: u64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long)]
        t_grid: Option<String>,
    },
    /// Visit counts at the identity and the range of the walk
    VisitsRange {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long, default_value_t = 1 << 10)]
        n: u64,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
    },
    /// Wreath walk lamp/local-time structure against its predicted laws
    LampStats {
        #[command(flatten)]
        common: Common,
        /// base group of the wreath product
        #[arg(long, default_value = "z")]
        base: String,
        /// shape group (z or cn:<n>)
        #[arg(long, default_value = "z")]
        shape: String,
        #[arg(long, default_value_t = 1 << 12)]
        n: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Evaluate an embedding on one element (or the distance for a pair)
    Embed {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        embedding: EmbeddingId,
        /// cycle length for the cycle embeddings
        #[arg(long, default_value_t = 6)]
        n: u32,
        /// exponent parameter for cycle-l2
        #[arg(long, default_value_t = 0.75)]
        s: f64,
        /// compression parameter for the plane embedding
        #[arg(long, default_value_t = 0.4)]
        alpha: f64,
        /// element in the textual syntax of its group
        #[arg(long)]
        element: String,
        /// optional second element; the output then includes the distance
        #[arg(long)]
        element2: Option<String>,
        /// norm exponent for the report
        #[arg(long)]
        p: Option<f64>,
    },
    /// Distortion reports: exact on full cyclic lamplighters, sampled on trees
    Distortion {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        embedding: EmbeddingId,
        #[arg(long, default_value_t = 6)]
        n: u32,
        #[arg(long, default_value_t = 0.75)]
        s: f64,
        /// word length cap for the tree embedding sample
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Exact-vs-formula comparison of the lamp metric over a full ball
    MetricCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "lcnwrz:2")]
        group: String,
        #[arg(long, default_value_t = 8)]
        radius: u64,
        #[arg(long, default_value_t = 20_000_000)]
        budget: usize,
    },
    /// Dirichlet-Poincare constants J(r) and the fitted exponent
    Poincare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "z")]
        group: String,
        #[arg(long, default_value = "4,8,16,32")]
        radii: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: usize,
    },
    /// Enflo cube ratios with exact wreath distances
    Enflo {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "2,4,8")]
        n_grid: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Markov-type ratio experiment for the lazy cube walk in Z wr Z
    Markov {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 1.25)]
        p: f64,
        #[arg(long, default_value_t = 256)]
        t_max: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Two-point smoothness, Pisier, cocycle, doubling, and Gaussian checks
    SmoothnessSuite {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Wreath compression-exponent composition (exact rational arithmetic)
    ComposeAlpha {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value = "1")]
        b: String,
        #[arg(long, default_value = "2")]
        p: String,
        /// print the iterated table alpha*(Z_(1..k)) instead
        #[arg(long)]
        iterate: Option<u32>,
    },
    /// Bernoulli lift of a cycle embedding over a finite-base lamp group
    BernoulliLift {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "lcnwrcn:3:9")]
        group: String,
        #[arg(long, default_value_t = 0.75)]
        s: f64,
        #[arg(long, default_value_t = 0.45)]
        alpha: f64,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long, default_value_t = 4000)]
        trials: u64,
    },
    /// Re-run a previously written manifest
    Rerun {
        /// path to a .manifest.json file
        #[arg(long)]
        manifest: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EmbeddingId {
    CycleFirst,
    CycleSecond,
    CycleL2,
    Line,
    Z2,
    Tree,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, std::env::args().collect()) {
        Ok(checks_passed) => {
            if checks_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::InvalidParams(_) | Error::OutOfRange(_) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}

fn init_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        // ignore failure if a pool already exists (e.g. under rerun)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn parse_grid(s: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad grid entry {p:?}: {e}")))
        })
        .collect()
}

struct OutPaths {
    csv: PathBuf,
    json: PathBuf,
    manifest: PathBuf,
}

fn out_paths(common: &Common, subcommand: &str) -> OutPaths {
    let prefix = common
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{subcommand}-out")));
    let with_ext = |ext: &str| -> PathBuf {
        let mut p = prefix.clone().into_os_string();
        p.push(ext);
        PathBuf::from(p)
    };
    OutPaths {
        csv: with_ext(".csv"),
        json: with_ext(".json"),
        manifest: with_ext(".manifest.json"),
    }
}

/// Write the data in the selected format plus the manifest; returns outputs.
fn emit(
    common: &Common,
    subcommand: &str,
    argv: &[String],
    header: &[&str],
    rows: &[Vec<String>],
    summary: serde_json::Value,
) -> Result<(), Error> {
    let paths = out_paths(common, subcommand);
    let mut outputs = Vec::new();
    match common.format {
        Format::Csv => {
            write_csv(&paths.csv, header, rows)?;
            outputs.push(paths.csv.clone());
            write_json(&paths.json, &summary)?;
            outputs.push(paths.json.clone());
        }
        Format::Json => {
            let rows_json: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let mut obj = serde_json::Map::new();
                    for (k, v) in header.iter().zip(r) {
                        obj.insert((*k).to_string(), json!(v));
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            let combined = json!({"summary": summary, "rows": rows_json});
            write_json(&paths.json, &combined)?;
            outputs.push(paths.json.clone());
        }
    }
    let mut manifest = RunManifest::begin(subcommand, argv, common.seed);
    manifest.finish(outputs);
    manifest.write(&paths.manifest)?;
    Ok(())
}

fn run(command: Command, argv: Vec<String>) -> Result<bool, Error> {
    match command {
        Command::WalkSpeed {
            common,
            group,
            t_max,
            trials,
            t_grid,
            doubled,
        } => {
            init_threads(common.threads);
            let g = group_from_name(&group)?;
            let mut cfg = WalkConfig::new(g.clone(), t_max, trials, common.seed);
            if let Some(grid) = &t_grid {
                cfg = cfg.with_checkpoints(parse_grid(grid)?);
            }
            let est = if doubled {
                let (base, shape) = g
                    .wreath_parts()
                    .ok_or_else(|| Error::InvalidParams("--doubled needs a wreath group".into()))?;
                estimate_speed_doubled(base, shape, &cfg)?
            } else {
                estimate_speed(&cfg)?
            };
            println!("beta_hat = {}", est.beta_hat);
            let summary = json!({
                "group": group, "t_max": t_max, "trials": trials,
                "doubled": doubled,
                "beta_hat": est.beta_hat, "residual": est.residual,
            });
            emit(
                &common,
                "walk-speed",
                &argv,
                &["t", "mean", "stderr", "n_trials"],
                &est.csv_rows(),
                summary,
            )?;
            Ok(true)
        }
        Command::ReturnProb {
            common,
            group,
            t_max,
            trials,
            t_grid,
        } => {
            init_threads(common.threads);
            let g = group_from_name(&group)?;
            let mut cfg = WalkConfig::new(g, t_max, trials, common.seed);
            if let Some(grid) = &t_grid {
                cfg = cfg.with_checkpoints(parse_grid(grid)?);
            }
            let curve = estimate_return(&cfg)?;
            println!("slope = {}", curve.slope);
            let summary = json!({
                "group": group, "t_max": t_max, "trials": trials,
                "slope": curve.slope, "slope_residual": curve.slope_residual,
            });
            emit(
                &common,
                "return-prob",
                &argv,
                &["t", "p_t", "p_t_next", "paired", "stderr", "reliable"],
                &curve.csv_rows(),
                summary,
            )?;
            Ok(true)
        }
        Command::VisitsRange {
            common,
            group,
            n,
            trials,
            beta,
        } => {
            init_threads(common.threads);
            let g = group_from_name(&group)?;
            let cfg = WalkConfig::new(g, n, trials, common.seed);
            let stats = visits_and_range(&cfg, beta)?;
            println!(
                "E[X_n] = {}, E[X_n^beta] = {}, E[range] = {}, psi = {}",
                stats.visits.mean, stats.visits_pow.mean, stats.range.mean, stats.psi
            );
            let rows = vec![
                vec!["visits".into(), format!("{}", stats.visits.mean), format!("{}", stats.visits.stderr)],
                vec!["visits_pow".into(), format!("{}", stats.visits_pow.mean), format!("{}", stats.visits_pow.stderr)],
                vec!["range".into(), format!("{}", stats.range.mean), format!("{}", stats.range.stderr)],
                vec!["psi".into(), format!("{}", stats.psi), "0".into()],
            ];
            let summary = serde_json::to_value(&stats)?;
            emit(
                &common,
                "visits-range",
                &argv,
                &["stat", "mean", "stderr"],
                &rows,
                summary,
            )?;
            Ok(true)
        }
        Command::LampStats {
            common,
            base,
            shape,
            n,
            trials,
        } => {
            init_threads(common.threads);
            let base_g = group_from_name(&base)?;
            let shape_g = group_from_name(&shape)?;
            let stats = wreath_lamp_statistics(&base_g, &shape_g, n, trials, common.seed)?;
            println!(
                "cursor {} vs direct {}; lamp {} vs resampled {} (gap {})",
                stats.cursor_mean_dist.mean,
                stats.direct_mean_dist.mean,
                stats.lamp_mean_dist.mean,
                stats.resampled_mean_dist.mean,
                stats.relative_gap
            );
            let rows = vec![
                vec!["cursor_mean_dist".into(), format!("{}", stats.cursor_mean_dist.mean), format!("{}", stats.cursor_mean_dist.stderr)],
                vec!["direct_mean_dist".into(), format!("{}", stats.direct_mean_dist.mean), format!("{}", stats.direct_mean_dist.stderr)],
                vec!["chi_square".into(), format!("{}", stats.chi_square), format!("{}", stats.chi_square_bins)],
                vec!["lamp_mean_dist".into(), format!("{}", stats.lamp_mean_dist.mean), format!("{}", stats.lamp_mean_dist.stderr)],
                vec!["resampled_mean_dist".into(), format!("{}", stats.resampled_mean_dist.mean), format!("{}", stats.resampled_mean_dist.stderr)],
                vec!["relative_gap".into(), format!("{}", stats.relative_gap), "0".into()],
            ];
            let summary = serde_json::to_value(&stats)?;
            emit(
                &common,
                "lamp-stats",
                &argv,
                &["stat", "value", "aux"],
                &rows,
                summary,
            )?;
            Ok(true)
        }
        Command::Embed {
            common,
            embedding,
            n,
            s,
            alpha,
            element,
            element2,
            p,
        } => {
            init_threads(common.threads);
            let (vec1, vec2, natural_p, group_desc) = embed_dispatch(
                embedding, n, s, alpha, &element, element2.as_deref(),
            )?;
            let p = p.unwrap_or(natural_p);
            let mut summary = json!({
                "embedding": embedding_name(embedding),
                "group": group_desc,
                "p": p,
                "norm": vec1.norm_p(p),
                "coordinates": vec1.len(),
            });
            if let Some(v2) = &vec2 {
                summary["distance"] = json!(vec1.dist_p(v2, p));
            }
            let rows: Vec<Vec<String>> = vec1
                .iter()
                .map(|(k, v)| vec![k.to_string(), format!("{v}")])
                .collect();
            summary["vector"] = vec1.to_json();
            emit(&common, "embed", &argv, &["key", "value"], &rows, summary)?;
            Ok(true)
        }
        Command::Distortion {
            common,
            embedding,
            n,
            s,
            max_len,
            p,
        } => {
            init_threads(common.threads);
            let report = match embedding {
                EmbeddingId::CycleFirst => exact_distortion_small(n, &CycleEmbedding::First)?,
                EmbeddingId::CycleSecond => exact_distortion_small(n, &CycleEmbedding::Second)?,
                EmbeddingId::CycleL2 => {
                    exact_distortion_small(n, &CycleEmbedding::L2 { s })?
                }
                EmbeddingId::Tree => {
                    let words = all_reduced_words(max_len);
                    let points: Vec<Element> = words.into_iter().map(Element::Word).collect();
                    pairwise_report(
                        &points,
                        &|a, b| match (a, b) {
                            (Element::Word(x), Element::Word(y)) => Ok(tree_distance(x, y) as f64),
                            _ => Err(Error::KindMismatch("words expected".into())),
                        },
                        &|e| match e {
                            Element::Word(w) => Ok(tree_embedding(w)),
                            _ => Err(Error::KindMismatch("words expected".into())),
                        },
                        p,
                        common.seed,
                    )
?
                }
                _ => {
                    return Err(Error::InvalidParams(
                        "distortion supports cycle-first, cycle-second, cycle-l2, tree".into(),
                    ))
                }
            };
            println!(
                "pairs {} lipschitz {} compression {} distortion {} alpha_hat {}",
                report.pair_count,
                report.lipschitz,
                report.compression,
                report.distortion,
                report.alpha_hat
            );
            let summary = serde_json::to_value(&report)?;
            emit(
                &common,
                "distortion",
                &argv,
                &["pair", "distance", "embedded"],
                &report.csv_rows(),
                summary,
            )?;
            Ok(true)
        }
        Command::MetricCheck {
            common,
            group,
            radius,
            budget,
        } => {
            init_threads(common.threads);
            let g = group_from_name(&group)?;
            let report = check_metric_equivalence(&g, radius, budget)?;
            println!(
                "pairs {} min_ratio {} max_ratio {} support_bound_ok {}",
                report.sample_size, report.min_ratio, report.max_ratio, report.support_bound_ok
            );
            let summary = json!({
                "group": group, "radius": radius,
                "sample_size": report.sample_size,
                "min_ratio": report.min_ratio,
                "max_ratio": report.max_ratio,
                "window": report.max_ratio / report.min_ratio,
                "support_bound_ok": report.support_bound_ok,
            });
            emit(
                &common,
                "metric-check",
                &argv,
                &["pair", "exact", "formula", "ratio"],
                &report.csv_rows(),
                summary,
            )?;
            Ok(report.support_bound_ok)
        }
        Command::Poincare {
            common,
            group,
            radii,
            tol,
            budget,
        } => {
            init_threads(common.threads);
            let g = group_from_name(&group)?;
            let radii = parse_grid(&radii)?;
            let report = poincare_j(&g, &radii, tol, budget)?;
            println!("alpha_hat = {}", report.alpha_hat);
            let summary = serde_json::to_value(&report)?;
            emit(
                &common,
                "poincare",
                &argv,
                &["r", "j"],
                &report.csv_rows(),
                summary,
            )?;
            Ok(true)
        }
        Command::Enflo { common, n_grid, p } => {
            init_threads(common.threads);
            let grid: Vec<usize> = parse_grid(&n_grid)?.into_iter().map(|v| v as usize).collect();
            let points = enflo_ratio(&grid, p)?;
            for pt in &points {
                println!("n={} ratio={} diagonal={}", pt.n, pt.ratio, pt.diagonal);
            }
            let rows: Vec<Vec<String>> = points
                .iter()
                .map(|pt| {
                    vec![
                        pt.n.to_string(),
                        format!("{}", pt.ratio),
                        pt.diagonal.to_string(),
                    ]
                })
                .collect();
            let summary = serde_json::to_value(&points)?;
            emit(&common, "enflo", &argv, &["n", "ratio", "diagonal"], &rows, summary)?;
            Ok(true)
        }
        Command::Markov {
            common,
            n,
            p,
            t_max,
            trials,
        } => {
            init_threads(common.threads);
            let grid = lampwalk::walk::default_checkpoints(t_max);
            let report = markov_ratio(n, p, &grid, trials, common.seed)?;
            println!("sup K^p = {}", report.sup_ratio);
            let rows: Vec<Vec<String>> = report
                .points
                .iter()
                .map(|pt| {
                    vec![
                        pt.t.to_string(),
                        format!("{}", pt.ratio),
                        format!("{}", pt.ratio_stderr),
                    ]
                })
                .collect();
            let summary = serde_json::to_value(&report)?;
            emit(&common, "markov", &argv, &["t", "ratio", "stderr"], &rows, summary)?;
            Ok(true)
        }
        Command::SmoothnessSuite { common, trials } => {
            init_threads(common.threads);
            let verdicts = smoothness_suite(trials, common.seed)?;
            let mut pass = true;
            for v in &verdicts {
                println!(
                    "{}: max_violation = {} (tolerance {}) -> {}",
                    v.name,
                    v.max_violation,
                    v.tolerance,
                    if v.pass { "pass" } else { "FAIL" }
                );
                pass &= v.pass;
            }
            let rows: Vec<Vec<String>> = verdicts
                .iter()
                .map(|v| {
                    vec![
                        v.name.clone(),
                        format!("{}", v.max_violation),
                        format!("{}", v.tolerance),
                        v.pass.to_string(),
                    ]
                })
                .collect();
            let summary = serde_json::to_value(&verdicts)?;
            emit(
                &common,
                "smoothness-suite",
                &argv,
                &["name", "max_violation", "tolerance", "pass"],
                &rows,
                summary,
            )?;
            Ok(pass)
        }
        Command::ComposeAlpha {
            common,
            a,
            b,
            p,
            iterate,
        } => {
            let rows: Vec<Vec<String>>;
            let summary;
            if let Some(k) = iterate {
                let mut table = Vec::new();
                for depth in 1..=k {
                    let alpha = iterated_line_alpha(depth)?;
                    println!("alpha*(Z_({depth})) = {alpha} = {}", rat_to_f64(alpha));
                    table.push((depth, alpha));
                }
                rows = table
                    .iter()
                    .map(|(d, alpha)| {
                        vec![d.to_string(), alpha.to_string(), format!("{}", rat_to_f64(*alpha))]
                    })
                    .collect();
                summary = json!({
                    "iterate": k,
                    "table": table.iter().map(|(d, a)| json!({"k": d, "alpha": a.to_string()})).collect::<Vec<_>>(),
                });
                emit(
                    &common,
                    "compose-alpha",
                    &argv,
                    &["k", "alpha", "alpha_float"],
                    &rows,
                    summary,
                )?;
            } else {
                let a = parse_rational(&a)?;
                let b = parse_rational(&b)?;
                let p = parse_rational(&p)?;
                let alpha = compression_composition_rat(a, b, p);
                println!("{}", rat_to_f64(alpha));
                rows = vec![vec![alpha.to_string(), format!("{}", rat_to_f64(alpha))]];
                summary = json!({
                    "a": a.to_string(), "b": b.to_string(), "p": p.to_string(),
                    "alpha": alpha.to_string(), "alpha_float": rat_to_f64(alpha),
                });
                emit(
                    &common,
                    "compose-alpha",
                    &argv,
                    &["alpha", "alpha_float"],
                    &rows,
                    summary,
                )?;
            }
            Ok(true)
        }
        Command::BernoulliLift {
            common,
            group,
            s,
            alpha,
            u,
            v,
            trials,
        } => {
            init_threads(common.threads);
            let g = group_from_name(&group)?;
            let ue = parse_element(&g, &u)?;
            let ve = parse_element(&g, &v)?;
            let theta = CycleEmbedding::L2 { s };
            let rep = lift_bernoulli(&theta, alpha, &g, &ue, &ve, trials, common.seed)?;
            println!(
                "estimate {} (se {}), rho {}, proxies [{}, {}]",
                rep.estimate, rep.stderr, rep.rho, rep.lower_proxy, rep.upper_proxy
            );
            let rows = vec![vec![
                format!("{}", rep.estimate),
                format!("{}", rep.stderr),
                rep.rho.to_string(),
                format!("{}", rep.lower_proxy),
                format!("{}", rep.upper_proxy),
            ]];
            let summary = serde_json::to_value(&rep)?;
            emit(
                &common,
                "bernoulli-lift",
                &argv,
                &["estimate", "stderr", "rho", "lower_proxy", "upper_proxy"],
                &rows,
                summary,
            )?;
            Ok(true)
        }
        Command::Rerun { manifest } => {
            let m = RunManifest::read(&manifest)?;
            let mut argv = m.argv.clone();
            if argv.is_empty() {
                return Err(Error::InvalidParams("manifest has no argv".into()));
            }
            // argv[0] is the binary name; re-parse the rest
            argv[0] = "lampwalk".to_string();
            let cli = Cli::try_parse_from(&argv)
                .map_err(|e| Error::Parse(format!("manifest argv does not parse: {e}")))?;
            run(cli.command, argv)
        }
    }
}

fn rat_to_f64(r: lampwalk::embed::Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn embedding_name(id: EmbeddingId) -> &'static str {
    match id {
        EmbeddingId::CycleFirst => "cycle-first",
        EmbeddingId::CycleSecond => "cycle-second",
        EmbeddingId::CycleL2 => "cycle-l2",
        EmbeddingId::Line => "line",
        EmbeddingId::Z2 => "z2",
        EmbeddingId::Tree => "tree",
    }
}

fn embed_dispatch(
    id: EmbeddingId,
    n: u32,
    s: f64,
    alpha: f64,
    element: &str,
    element2: Option<&str>,
) -> Result<(lampwalk::SparseVec, Option<lampwalk::SparseVec>, f64, String), Error> {
    match id {
        EmbeddingId::CycleFirst | EmbeddingId::CycleSecond | EmbeddingId::CycleL2 => {
            let emb = match id {
                EmbeddingId::CycleFirst => CycleEmbedding::First,
                EmbeddingId::CycleSecond => CycleEmbedding::Second,
                _ => CycleEmbedding::L2 { s },
            };
            let g = GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::cyclic(n));
            let e1 = parse_element(&g, element)?;
            let v1 = emb.eval_element(&g, &e1)?;
            let v2 = element2
                .map(|e| -> Result<_, Error> {
                    let e2 = parse_element(&g, e)?;
                    emb.eval_element(&g, &e2)
                })
                .transpose()?;
            Ok((v1, v2, emb.p(), g.name()))
        }
        EmbeddingId::Line => {
            let g = GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::Integers);
            let to_vec = |text: &str| -> Result<lampwalk::SparseVec, Error> {
                let e = parse_element(&g, text)?;
                match &e {
                    Element::Wreath(w) => {
                        let lamps: Vec<i64> = w
                            .lamps
                            .iter()
                            .map(|(k, _)| match k {
                                Element::Int(v) => *v,
                                _ => unreachable!(),
                            })
                            .collect();
                        let j = match &w.cursor {
                            Element::Int(v) => *v,
                            _ => unreachable!(),
                        };
                        Ok(embed_line_l1(&lamps, j))
                    }
                    _ => unreachable!(),
                }
            };
            let v1 = to_vec(element)?;
            let v2 = element2.map(to_vec).transpose()?;
            Ok((v1, v2, 1.0, g.name()))
        }
        EmbeddingId::Z2 => {
            let g = GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::lattice(2));
            let to_vec = |text: &str| -> Result<lampwalk::SparseVec, Error> {
                let e = parse_element(&g, text)?;
                match &e {
                    Element::Wreath(w) => {
                        let lamps: Vec<(i64, i64)> = w
                            .lamps
                            .iter()
                            .map(|(k, _)| match k {
                                Element::Lattice(v) => (v[0], v[1]),
                                _ => unreachable!(),
                            })
                            .collect();
                        let x = match &w.cursor {
                            Element::Lattice(v) => (v[0], v[1]),
                            _ => unreachable!(),
                        };
                        embed_z2(&lamps, x, alpha)
                    }
                    _ => unreachable!(),
                }
            };
            let v1 = to_vec(element)?;
            let v2 = element2.map(to_vec).transpose()?;
            Ok((v1, v2, 2.0, g.name()))
        }
        EmbeddingId::Tree => {
            let g = GroupSpec::free(2);
            let to_vec = |text: &str| -> Result<lampwalk::SparseVec, Error> {
                let e = parse_element(&g, text)?;
                match &e {
                    Element::Word(w) => Ok(tree_embedding(w)),
                    _ => unreachable!(),
                }
            };
            let v1 = to_vec(element)?;
            let v2 = element2.map(to_vec).transpose()?;
            Ok((v1, v2, 2.0, g.name()))
        }
    }
}

fn all_reduced_words(max_len: usize) -> Vec<Vec<i8>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::<i8>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in [1i8, -1, 2, -2] {
                if w.last() == Some(&-l) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(l);
                next.push(nw);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// The named inequality checks with their tolerances.
fn smoothness_suite(trials: u64, seed: u64) -> Result<Vec<Verdict>, Error> {
    let mut verdicts = Vec::new();

    let p15 = SmoothnessParams::new(1.5, 1.5)?;
    let rep = two_point_smoothness(&p15, 8, trials, seed)?;
    verdicts.push(Verdict::new("two-point p=q=1.5", rep.max_violation, 1e-9));

    let p22 = SmoothnessParams::new(2.0, 2.0)?;
    let rep = two_point_smoothness(&p22, 8, trials, seed + 1)?;
    verdicts.push(Verdict::new("two-point p=q=2", rep.max_violation, 1e-9));

    let p24 = SmoothnessParams::new(2.0, 4.0)?;
    let rep = two_point_smoothness(&p24, 8, trials, seed + 2)?;
    verdicts.push(Verdict::new("two-point p=2 q=4", rep.max_violation, 1e-9));

    let pisier_trials = (trials / 10).max(1_000);
    let rep = pisier_martingale_check(&p15, 16, 8, pisier_trials, 8, seed + 3)?;
    verdicts.push(Verdict::new(
        "pisier p=1.5 n=16",
        rep.max_ratio - 1.0,
        3.0 * rep.max_ratio_stderr,
    ));

    let rep = cocycle_identity_check(20, 100, seed + 4)?;
    verdicts.push(Verdict::new("cocycle identity t<=20", rep.max_discrepancy, 0.0));

    let grid: Vec<u64> = (1..=10).map(|k| 1 << k).collect();
    let growth_trials = (trials / 10).max(1_000);
    let rep = cocycle_growth_check(&p22, &grid, growth_trials, seed + 5)?;
    let worst = rep
        .points
        .iter()
        .map(|pt| pt.ratio - (1.0 + 3.0 * pt.ratio_stderr))
        .fold(f64::NEG_INFINITY, f64::max);
    verdicts.push(Verdict::new("cocycle growth p=2", worst, 0.0));

    let doubling_grid: Vec<u64> = (0..=9).map(|k| 1 << k).collect();
    let rep = hilbert_doubling_check(&doubling_grid, growth_trials, seed + 6)?;
    let worst = rep
        .points
        .iter()
        .map(|pt| pt.ratio - (1.0 + 3.0 * pt.ratio_stderr))
        .fold(f64::NEG_INFINITY, f64::max);
    verdicts.push(Verdict::new("hilbert doubling", worst, 0.0));

    let rep = gaussian_lift_check(&[3.0, 4.0], 1.0, trials, seed + 7)?;
    let expect = (2.0 / std::f64::consts::PI).sqrt();
    verdicts.push(Verdict::new(
        "gaussian lift p=1",
        (rep.ratio - expect).abs(),
        3.0 * rep.stderr,
    ));

    Ok(verdicts)
}
