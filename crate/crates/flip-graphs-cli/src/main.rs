//! Command line front end: reproducible experiments over flip-graphs with
//! machine-readable CSV/JSON reports.
//!
//! Exit codes: 0 success, 1 usage or data error, 2 resource budget exceeded.

mod report;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use flip_graphs::audit::{convexity_probe, strong_convexity_exhaustive};
use flip_graphs::blowup::{self, CheckOutcome};
use flip_graphs::constructions::{
    build_family6, build_family8, perturb_flats_to_punctures, InnerChoice,
};
use flip_graphs::engine::{
    diameter, distance, geodesic_dag, reachable_set, ExecMode, SearchLimits,
};
use flip_graphs::geometry::io;
use flip_graphs::heuristics::{crossing_number, greedy_path, TieRule};
use flip_graphs::{ArcSet, Error as FlipError, PointConfig, Triangulation};
use report::{Format, Report};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "flipgraph",
    about = "Exact search, heuristics and audits over flip-graphs of polygon triangulations",
    version
)]
struct Cli {
    /// Report format written to stdout.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Seed for every randomized selection.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for searches over the implicit graph.
    #[arg(long, global = true, default_value_t = 20_000_000)]
    cap: usize,
    /// Force sequential execution of parallelizable stages.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count all triangulations reachable from some triangulation.
    Enumerate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Exact flip distance between two triangulations.
    Distance {
        #[arg(long)]
        config: PathBuf,
        /// Triangulation file or inline arc list `a-b,c-d,...`.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Arcs that must stay present along the path (`a-b,c-d,...`).
        #[arg(long)]
        require: Option<String>,
    },
    /// Exact diameter of the flip-graph.
    Diameter {
        #[arg(long)]
        config: PathBuf,
    },
    /// Crossings-based greedy distance estimate.
    Heuristic {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Tie rule: lex-removed, lex-inserted or first-found.
        #[arg(long, default_value = "lex-removed")]
        tie: TieRule,
        /// Also write the full flip path to this file.
        #[arg(long)]
        emit_path: Option<PathBuf>,
    },
    /// Flag and whole-triangle checks over geodesics.
    FlagAudit {
        #[arg(long)]
        config: PathBuf,
        /// `all` pairs or `sample N` random pairs.
        #[arg(long, num_args = 1..=2, default_values_t = [String::from("all")])]
        pairs: Vec<String>,
        /// Geodesic enumeration cap per pair.
        #[arg(long, default_value_t = 1_000_000)]
        max_paths: usize,
    },
    /// Compare constrained and unconstrained distances.
    ConvexityAudit {
        #[arg(long)]
        config: PathBuf,
        /// `all` or one arc `a-b`; exhaustive over the enumerated graph.
        #[arg(long, default_value = "all")]
        eps: String,
        /// Probe a single pair instead of enumerating (bounds on truncation).
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
    },
    /// Generate a benchmark family instance into a directory.
    Construct {
        #[arg(long)]
        family: u8,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Two-flat family only: number of flat vertices to keep (0..=2);
        /// the rest are moved into the interior.
        #[arg(long)]
        punctures: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Heuristic-overestimate sweep over the mirror family, n = m(7m + 5).
    Ratio {
        #[arg(long, default_value_t = 8)]
        family: u8,
        /// Comma-separated m values.
        #[arg(long, default_value = "2,3,4,5")]
        m_list: String,
        #[arg(long, default_value = "lex-removed")]
        tie: TieRule,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Lcg(u64);

impl Lcg {
    fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(0x9e3779b97f4a7c15) | 1)
    }

    fn below(&mut self, n: usize) -> usize {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) % n as u64) as usize
    }
}

fn main() {
    let cli = Cli::parse();
    let t0 = Instant::now();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            eprintln!("# runtime: {:?}", t0.elapsed());
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e
                .downcast_ref::<FlipError>()
                .is_some_and(|fe| matches!(fe, FlipError::ResourceExceeded { .. }))
            {
                2
            } else {
                1
            };
            std::process::exit(code);
        }
    }
}

fn load_config(path: &Path) -> anyhow::Result<PointConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    Ok(io::config_from_text(&text)?)
}

/// A triangulation argument: a readable file or an inline arc list.
fn load_triangulation(config: &PointConfig, arg: &str) -> anyhow::Result<Triangulation> {
    let text = if Path::new(arg).exists() {
        std::fs::read_to_string(arg)?
    } else {
        arg.to_string()
    };
    Ok(io::triangulation_from_text(config, text.trim())?)
}

fn parse_arc(config: &PointConfig, text: &str) -> anyhow::Result<usize> {
    let pairs = io::parse_arc_list(text)?;
    if pairs.len() != 1 {
        bail!("expected a single arc, got {text:?}");
    }
    Ok(config.require_arc(pairs[0].0, pairs[0].1)?)
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let limits = SearchLimits::states(cli.cap);
    let mode = if cli.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::default()
    };
    match &cli.command {
        Command::Enumerate { config } => {
            let cfg = load_config(config)?;
            let start = flip_graphs::geometry::shapes::any_triangulation(&cfg);
            let reach = reachable_set(&cfg, &start, None, limits)?;
            let mut report = Report::new("enumerate");
            report.param("config", config.display());
            report.columns(&["points", "boundary", "valid_arcs", "triangulations"]);
            report.row(strings![
                cfg.len(),
                cfg.boundary_len(),
                cfg.arc_count(),
                reach.count()
            ]);
            Ok(report)
        }
        Command::Distance { config, from, to, require } => {
            let cfg = load_config(config)?;
            let t1 = load_triangulation(&cfg, from)?;
            let t2 = load_triangulation(&cfg, to)?;
            let constraint = match require {
                Some(text) => {
                    let mut set = ArcSet::empty(cfg.arc_count());
                    for (a, b) in io::parse_arc_list(text)? {
                        set.insert(cfg.require_arc(a, b)?);
                    }
                    Some(set)
                }
                None => None,
            };
            let d = distance(&cfg, &t1, &t2, constraint.as_ref(), limits)?;
            let mut report = Report::new("distance");
            report.param("config", config.display());
            report.param("require", require.clone().unwrap_or_default());
            report.columns(&["distance", "arc_difference_lower_bound"]);
            report.row(strings![d, t1.arcs.diff_count(&t2.arcs)]);
            Ok(report)
        }
        Command::Diameter { config } => {
            let cfg = load_config(config)?;
            let d = diameter(&cfg, limits, mode)?;
            let mut report = Report::new("diameter");
            report.param("config", config.display());
            report.columns(&["diameter"]);
            report.row(strings![d]);
            Ok(report)
        }
        Command::Heuristic { config, from, to, tie, emit_path } => {
            let cfg = load_config(config)?;
            let t1 = load_triangulation(&cfg, from)?;
            let t2 = load_triangulation(&cfg, to)?;
            let crossings = crossing_number(&cfg, &t1, &t2);
            let path = greedy_path(&cfg, &t1, &t2, *tie)?;
            if let Some(out) = emit_path {
                std::fs::write(out, io::path_to_text(&cfg, &path))?;
            }
            let mut report = Report::new("heuristic");
            report.param("config", config.display());
            report.param("tie_rule", tie);
            report.columns(&["estimate", "initial_crossings", "arc_difference_lower_bound"]);
            report.row(strings![path.len(), crossings, t1.arcs.diff_count(&t2.arcs)]);
            Ok(report)
        }
        Command::FlagAudit { config, pairs, max_paths } => {
            let cfg = load_config(config)?;
            flag_audit(cli, &cfg, pairs, *max_paths, limits)
        }
        Command::ConvexityAudit { config, eps, from, to } => {
            let cfg = load_config(config)?;
            convexity_audit(cli, &cfg, eps, from.as_deref(), to.as_deref(), limits, mode)
        }
        Command::Construct { family, n, m, punctures, out } => {
            construct(*family, *n, *m, *punctures, out)
        }
        Command::Ratio { family, m_list, tie, out } => {
            if *family != 8 {
                bail!("the ratio sweep runs on family 8");
            }
            let report = ratio_sweep(m_list, *tie)?;
            if let Some(path) = out {
                std::fs::write(path, report.render(Format::Csv))?;
            }
            Ok(report)
        }
    }
}

fn flag_audit(
    cli: &Cli,
    cfg: &PointConfig,
    pairs: &[String],
    max_paths: usize,
    limits: SearchLimits,
) -> anyhow::Result<Report> {
    let start = flip_graphs::geometry::shapes::any_triangulation(cfg);
    let reach = reachable_set(cfg, &start, None, limits)?;
    let n = reach.count();
    let pair_list: Vec<(usize, usize)> = match pairs[0].as_str() {
        "all" => {
            let mut v = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    v.push((i, j));
                }
            }
            v
        }
        "sample" => {
            let count: usize = pairs
                .get(1)
                .ok_or_else(|| anyhow!("--pairs sample needs a count"))?
                .parse()?;
            let mut rng = Lcg::new(cli.seed);
            let mut v = Vec::new();
            while v.len() < count {
                let i = rng.below(n);
                let j = rng.below(n);
                if i != j {
                    v.push((i.min(j), i.max(j)));
                }
            }
            v
        }
        other => bail!("--pairs must be `all` or `sample N`, got {other:?}"),
    };
    let mut geodesics = 0usize;
    let mut flag_bad = 0usize;
    let mut triangle_bad = 0usize;
    let mut truncated = false;
    for &(i, j) in &pair_list {
        let dag = geodesic_dag(cfg, &reach.states[i], &reach.states[j], None, limits)?;
        let mut iter = dag.enumerate(max_paths);
        for path in iter.by_ref() {
            let complex = blowup::build(cfg, &path)?;
            if complex.flag_check().is_some() {
                flag_bad += 1;
            }
            match blowup::theorem1_check(cfg, &path, limits)? {
                CheckOutcome::Pass => {}
                CheckOutcome::MissingTriangle(_) => triangle_bad += 1,
            }
            geodesics += 1;
        }
        truncated |= iter.truncated();
    }
    let mut report = Report::new("flag-audit");
    report.param("pairs", pairs.join(" "));
    report.param("max_paths", max_paths);
    report.param("seed", cli.seed);
    report.columns(&[
        "pairs_checked",
        "geodesics_checked",
        "flag_counterexamples",
        "triangle_counterexamples",
    ]);
    report.row(strings![pair_list.len(), geodesics, flag_bad, triangle_bad]);
    report.truncated = truncated;
    Ok(report)
}

fn convexity_audit(
    _cli: &Cli,
    cfg: &PointConfig,
    eps: &str,
    from: Option<&str>,
    to: Option<&str>,
    limits: SearchLimits,
    mode: ExecMode,
) -> anyhow::Result<Report> {
    let mut report = Report::new("convexity-audit");
    report.param("eps", eps);
    if let (Some(from), Some(to)) = (from, to) {
        // Single-pair probe; reports bounds when the budget is hit.
        let t1 = load_triangulation(cfg, from)?;
        let t2 = load_triangulation(cfg, to)?;
        let eps_id = if eps == "all" {
            None
        } else {
            let id = parse_arc(cfg, eps)?;
            if !t1.contains(id) || !t2.contains(id) {
                bail!("probe arc must be present in both endpoint triangulations");
            }
            Some(id)
        };
        let probe = convexity_probe(cfg, &t1, &t2, eps_id, limits)?;
        report.param("mode", "probe");
        report.columns(&[
            "lower_bound",
            "distance",
            "constrained_distance",
            "truncated",
        ]);
        let fmt = |v: Option<usize>| v.map_or_else(|| "unknown".into(), |d| d.to_string());
        report.row(strings![
            probe.lower_bound,
            fmt(probe.distance),
            fmt(probe.constrained_distance),
            probe.truncated
        ]);
        report.truncated = probe.truncated;
        return Ok(report);
    }
    let filter = if eps == "all" {
        None
    } else {
        Some(vec![parse_arc(cfg, eps)?])
    };
    let violations = strong_convexity_exhaustive(cfg, filter.as_deref(), limits, mode)?;
    report.param("mode", "exhaustive");
    report.columns(&["eps", "constrained", "unconstrained", "t1", "t2"]);
    for v in &violations {
        report.row(strings![
            cfg.arc(v.eps),
            v.constrained,
            v.unconstrained,
            io::triangulation_to_text(cfg, &v.t1),
            io::triangulation_to_text(cfg, &v.t2)
        ]);
    }
    if violations.is_empty() {
        report.param("violations", "0");
    }
    Ok(report)
}

fn construct(
    family: u8,
    n: usize,
    m: usize,
    punctures: Option<usize>,
    out: &Path,
) -> anyhow::Result<Report> {
    std::fs::create_dir_all(out)?;
    let mut report = Report::new("construct");
    report.param("family", family);
    report.param("n", n);
    report.param("m", m);
    let write = |name: &str, text: String| -> anyhow::Result<()> {
        std::fs::write(out.join(name), text)?;
        Ok(())
    };
    match family {
        8 => {
            if punctures.is_some() {
                bail!("--punctures applies to family 6 only");
            }
            let inst = build_family8(n, m, InnerChoice::Comb, InnerChoice::Comb)?;
            write("config.txt", io::config_to_text(&inst.config))?;
            write("t_minus.txt", io::triangulation_to_text(&inst.config, &inst.t_minus))?;
            write("t_plus.txt", io::triangulation_to_text(&inst.config, &inst.t_plus))?;
            report.columns(&["points", "distance_bound", "initial_crossings"]);
            report.row(strings![
                inst.config.len(),
                inst.distance_bound(),
                crossing_number(&inst.config, &inst.t_minus, &inst.t_plus)
            ]);
        }
        6 => {
            let inst = build_family6(n, m)?;
            let keep = punctures.unwrap_or(2);
            if keep == 2 {
                write("config.txt", io::config_to_text(&inst.config))?;
                write("t_minus.txt", io::triangulation_to_text(&inst.config, &inst.t_minus))?;
                write("t_plus.txt", io::triangulation_to_text(&inst.config, &inst.t_plus))?;
                let eta = inst.config.arc(inst.eta);
                write("eta.txt", format!("{eta}\n"))?;
                write("path_half1.txt", io::path_to_text(&inst.config, &inst.half1))?;
                write("path_half2.txt", io::path_to_text(&inst.config, &inst.half2))?;
                write("path_full.txt", io::path_to_text(&inst.config, &inst.full_path()))?;
                report.columns(&["points", "flats", "path_length", "distance_bound"]);
                report.row(strings![
                    inst.config.len(),
                    2,
                    inst.full_path().len(),
                    inst.distance_bound()
                ]);
            } else {
                let p = perturb_flats_to_punctures(&inst, keep)?;
                write("config.txt", io::config_to_text(&p.config))?;
                write("t_minus.txt", io::triangulation_to_text(&p.config, &p.t_minus))?;
                write("t_plus.txt", io::triangulation_to_text(&p.config, &p.t_plus))?;
                write("eta.txt", format!("{}\n", p.config.arc(p.eta)))?;
                report.columns(&["points", "flats", "punctures", "sealed_edges"]);
                report.row(strings![
                    p.config.len(),
                    keep,
                    2 - keep,
                    p.sealed_edges.len()
                ]);
            }
        }
        other => bail!("unknown family {other}; expected 6 or 8"),
    }
    report.param("out", out.display());
    Ok(report)
}

fn ratio_sweep(m_list: &str, tie: TieRule) -> anyhow::Result<Report> {
    let mut report = Report::new("ratio");
    report.param("tie_rule", tie);
    report.columns(&[
        "m",
        "n",
        "N",
        "D_formula",
        "H",
        "ratio",
        "paper_lower_bound_ratio",
        "tie_rule",
    ]);
    for tok in m_list.split(',') {
        let m: usize = tok.trim().parse().context("parsing --m-list")?;
        let n = m * (7 * m + 5);
        let inst = build_family8(n, m, InnerChoice::Comb, InnerChoice::Comb)?;
        let d_formula = inst.distance_bound();
        let path = greedy_path(&inst.config, &inst.t_minus, &inst.t_plus, tie)?;
        let h = path.len();
        // Consistency check emitted alongside: the estimate dominates the
        // arc-difference lower bound.
        if h < inst.t_minus.arcs.diff_count(&inst.t_plus.arcs) {
            bail!("estimate below the arc-difference lower bound");
        }
        let ratio = h as f64 / d_formula as f64;
        let bound = 1.0 + (n as f64 - 7.0 * m as f64 - 5.0) / d_formula as f64;
        report.row(strings![
            m,
            n,
            inst.config.len(),
            d_formula,
            h,
            format!("{ratio:.6}"),
            format!("{bound:.6}"),
            tie
        ]);
    }
    Ok(report)
}
