use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde_json::{json, Value};

use hfree_core::analysis::{
    classify_regime, degree_stats, exponent_fit, subgraph_census, CENSUS_LARGE_N_MAX_VERTICES, CENSUS_SMALL_N,
};
use hfree_core::extension::{catalogue, trackability, Anchor, CatalogueEntry, ExtensionPattern, Tracker};
use hfree_core::graph::automorphism_count;
use hfree_core::process::{checkpoint_steps, run_with, RunOptions, Stop};
use hfree_core::scaling::{classify_pair, extension_series, is_strictly_two_balanced, p_exponent, pair_scaling_exponent};
use hfree_core::trajectory::{c_of_t, envelope, q_of_t, x_of_t, TrajectoryParams};
use hfree_core::{ForbiddenGraph, ProcessState, RootedPattern, ScalingExponent};

use crate::config::{join, load_graph, RunArgs, RunConfig};
use crate::CliError;

fn stop_of(cfg: &RunConfig) -> Stop {
    match cfg.stop_steps() {
        Some(k) => Stop::MaxSteps(k),
        None => Stop::UntilTermination,
    }
}

/// Explicit checkpoints, or `points` evenly spaced times from 0 to the stop
/// time (`t_max` when running to termination).
fn checkpoint_times(cfg: &RunConfig, points: usize) -> Vec<f64> {
    if !cfg.checkpoints.is_empty() {
        return cfg.checkpoints.clone();
    }
    let p = cfg.params();
    let t_end = cfg.stop_steps().map_or(p.t_max, |k| k as f64 / p.s);
    (0..points).map(|k| t_end * k as f64 / (points - 1) as f64).collect()
}

fn new_state(cfg: &RunConfig, seed: u64) -> Result<ProcessState, CliError> {
    let mut state = ProcessState::new(cfg.h.clone(), cfg.n, seed)?;
    state.set_log_closures(cfg.log_closures);
    Ok(state)
}

// ---------------------------------------------------------------- analyze

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Preset name or graph file.
    pub graph: String,
    /// Rooted pair `gamma=<preset or file>,A=<v0>,<v1>,...`.
    #[arg(long)]
    pub pair: Option<String>,
}

fn parse_pair(spec: &str) -> Result<RootedPattern, CliError> {
    let bad = || CliError::Invalid(format!("--pair expects gamma=<graph>,A=<vertices>, got {spec:?}"));
    let (g, a) = match spec.rsplit_once(",A=") {
        Some((g, a)) => (g, a),
        None => (spec.strip_suffix(",A=").unwrap_or(spec), ""),
    };
    let g = g.strip_prefix("gamma=").ok_or_else(bad)?;
    let gamma = load_graph(g)?;
    let anchor: Vec<usize> = a
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    Ok(RootedPattern::new(gamma, anchor)?)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let g = load_graph(&args.graph)?;
    let mut out = String::new();
    let _ = writeln!(out, "graph: {g}");
    let _ = writeln!(out, "vertices: {}", g.vertex_count());
    let _ = writeln!(out, "edges: {}", g.edge_count());
    match automorphism_count(&g) {
        Ok(a) => {
            let _ = writeln!(out, "automorphisms: {a}");
        }
        Err(e) => {
            let _ = writeln!(out, "automorphisms: unavailable ({e})");
        }
    }
    let balanced = is_strictly_two_balanced(&g)?;
    let _ = writeln!(out, "strictly 2-balanced: {}", yes_no(balanced));
    match p_exponent(&g) {
        Ok(rho) => {
            let _ = writeln!(out, "p-exponent: {rho}");
        }
        Err(e) => {
            let _ = writeln!(out, "p-exponent: undefined ({e})");
        }
    }
    if let Some(spec) = &args.pair {
        let pattern = parse_pair(spec)?;
        if !balanced {
            return Err(CliError::Invalid(
                "pair analysis needs a strictly 2-balanced forbidden graph".into(),
            ));
        }
        let h = ForbiddenGraph::new(g)?;
        let _ = writeln!(out, "pair gamma: {}", pattern.gamma());
        let _ = writeln!(out, "pair anchor: {:?}", pattern.anchor());
        let _ = writeln!(out, "S_(A,gamma) exponent: {}", pair_scaling_exponent(&h, &pattern));
        if pattern.is_anchor_independent() {
            let class = classify_pair(&h, &pattern)?;
            let _ = writeln!(out, "strictly balanced: {}", yes_no(class.strictly_balanced));
            let _ = writeln!(out, "dense: {}", yes_no(class.dense));
            let _ = writeln!(out, "strictly dense: {}", yes_no(class.strictly_dense));
        } else {
            let _ = writeln!(out, "classification: skipped, anchor is not independent");
        }
        let series = extension_series(&h, &pattern)?;
        let sets: Vec<String> = series.sets().iter().map(|s| format!("{s:?}")).collect();
        let exps: Vec<String> = series.step_exponents().iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "extension series sets: {}", sets.join(" "));
        let _ = writeln!(out, "extension series exponents: [{}]", exps.join(", "));
    }
    print!("{out}");
    Ok(())
}

// -------------------------------------------------------------------- run

#[derive(Args, Debug)]
pub struct RunCmdArgs {
    #[command(flatten)]
    pub run: RunArgs,
}

struct SeedRun {
    seed: u64,
    trace: String,
    closures: Option<String>,
    summary: Value,
}

fn run_seed(cfg: &RunConfig, seed: u64, times: &[f64]) -> Result<SeedRun, CliError> {
    let params = cfg.params();
    let mut state = new_state(cfg, seed)?;
    let n2 = (cfg.n * cfg.n) as f64;
    let mut trace = cfg.header("run", seed);
    trace.push_str("i,t,open_pairs,newly_closed,edge_u,edge_v\n");
    let mut closures = cfg.log_closures.then(|| {
        let mut s = cfg.header("run", seed);
        s.push_str("i,x,y\n");
        s
    });
    let opts = RunOptions::new(stop_of(cfg))
        .with_checkpoints(checkpoint_steps(times, state.time_scale()))
        .without_step_rows();
    let result = run_with(&mut state, &opts, &mut [], |r| {
        let _ = writeln!(
            trace,
            "{},{:?},{},{},{},{}",
            r.i, r.t, r.open_after, r.newly_closed, r.chosen_edge.0, r.chosen_edge.1
        );
        if let Some(c) = closures.as_mut() {
            for (x, y) in &r.closed_pairs {
                let _ = writeln!(c, "{},{x},{y}", r.i);
            }
        }
    })?;
    let residuals: Vec<Value> = result
        .checkpoints
        .iter()
        .map(|c| {
            let observed = 2.0 * c.open_count as f64;
            let predicted = q_of_t(&params, c.t) * n2;
            json!({
                "i": c.i,
                "t": c.t,
                "open_ordered": observed,
                "predicted": predicted,
                "relative_residual": observed / predicted - 1.0,
            })
        })
        .collect();
    let d = degree_stats(&state);
    let summary = json!({
        "seed": seed,
        "final_i": state.i(),
        "final_t": state.t(),
        "terminated": result.terminated || state.is_terminated(),
        "open_pairs": state.open_count(),
        "q_residuals": residuals,
        "degree": {
            "min": d.min,
            "max": d.max,
            "mean": d.mean,
            "median": d.median,
            "predicted_mean": d.predicted_mean,
        },
    });
    Ok(SeedRun {
        seed,
        trace,
        closures,
        summary,
    })
}

fn config_json(cfg: &RunConfig, command: &str) -> Value {
    let p = cfg.params();
    json!({
        "command": command,
        "config_sha256": cfg.hash(command),
        "h": cfg.h_spec,
        "h_graph": cfg.h.graph().to_string(),
        "n": cfg.n,
        "seeds": cfg.seeds,
        "mu": cfg.constants.mu,
        "epsilon": cfg.constants.epsilon,
        "W": cfg.constants.w,
        "V": cfg.constants.v,
        "rho": cfg.h.rho().to_string(),
        "p": p.p(),
        "s": p.s,
        "t_max": p.t_max,
        "m": p.m,
        "stop": cfg.stop_label(),
        "checkpoints": cfg.checkpoints,
        "log_closures": cfg.log_closures,
        "extra": cfg.extra,
    })
}

fn write_json(cfg: &RunConfig, name: &str, v: &Value) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(v).map_err(|e| CliError::Runtime(e.to_string()))?;
    text.push('\n');
    cfg.write_file(name, &text)
}

pub fn run(args: &RunCmdArgs) -> Result<(), CliError> {
    let cfg = args.run.resolve(&[], "hfree-out")?;
    cfg.ensure_out_dir()?;
    let times = checkpoint_times(&cfg, 11);
    let started = std::time::Instant::now();
    let runs: Vec<SeedRun> = cfg
        .seeds
        .par_iter()
        .map(|&seed| run_seed(&cfg, seed, &times))
        .collect::<Result<_, _>>()?;
    for r in &runs {
        cfg.write_file(&format!("trace_seed{}.csv", r.seed), &r.trace)?;
        if let Some(c) = &r.closures {
            cfg.write_file(&format!("closures_seed{}.csv", r.seed), c)?;
        }
    }
    let summary = json!({
        "config": config_json(&cfg, "run"),
        "checkpoint_times": times,
        "replicates": runs.iter().map(|r| r.summary.clone()).collect::<Vec<_>>(),
    });
    let path = write_json(&cfg, "summary.json", &summary)?;
    for r in &runs {
        println!(
            "seed {}: final i = {}, terminated = {}",
            r.seed, r.summary["final_i"], r.summary["terminated"]
        );
    }
    println!("summary: {}", path.display());
    eprintln!("wall time: {:.3}s", started.elapsed().as_secs_f64());
    Ok(())
}

// ------------------------------------------------------------------ track

#[derive(Args, Debug)]
pub struct TrackArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Catalogue ids to track (default: all).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub patterns: Vec<String>,
    /// Extra pattern file (graph format plus `J` and `A` lines).
    #[arg(long)]
    pub pattern_file: Option<PathBuf>,
    /// Random anchors per anchored pattern.
    #[arg(long)]
    pub panel: Option<usize>,
}

const DEFAULT_PANEL: usize = 5;

fn track_entries(cfg: &RunConfig) -> Result<Vec<CatalogueEntry>, CliError> {
    let all = catalogue(&cfg.h);
    let mut entries = match cfg.extra.get("patterns") {
        None => all,
        Some(list) => {
            let wanted: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            for w in &wanted {
                if !all.iter().any(|e| e.id == *w) {
                    let ids: Vec<&str> = all.iter().map(|e| e.id.as_str()).collect();
                    return Err(CliError::Invalid(format!(
                        "unknown pattern {w:?}; catalogue has {}",
                        ids.join(", ")
                    )));
                }
            }
            all.into_iter().filter(|e| wanted.contains(&e.id.as_str())).collect()
        }
    };
    if let Some(path) = cfg.extra.get("pattern_file") {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.as_ref(), e))?;
        let pattern = ExtensionPattern::parse_text(&text).map_err(|e| CliError::Invalid(format!("{path}: {e}")))?;
        let probe = ProcessState::new(cfg.h.clone(), cfg.n, 0)?;
        let anchor = Anchor((0..pattern.anchor().len()).collect());
        if let hfree_core::extension::Trackability::Not(why) = trackability(&cfg.h, &pattern, &anchor, &probe)? {
            return Err(CliError::Invalid(format!("pattern {path} is not trackable: {why}")));
        }
        entries.push(CatalogueEntry {
            id: "user".into(),
            pattern,
        });
    }
    Ok(entries)
}

pub fn track(args: &TrackArgs) -> Result<(), CliError> {
    let mut run_args = args.run.clone();
    let mut cfg_extra = BTreeMap::new();
    if !args.patterns.is_empty() {
        cfg_extra.insert("patterns", args.patterns.join(","));
    }
    if let Some(p) = &args.pattern_file {
        cfg_extra.insert("pattern_file", p.display().to_string());
    }
    if let Some(k) = args.panel {
        cfg_extra.insert("panel", k.to_string());
    }
    run_args.log_closures = false;
    let mut cfg = run_args.resolve(&["patterns", "pattern_file", "panel"], "hfree-out")?;
    for (k, v) in cfg_extra {
        cfg.extra.insert(k.to_string(), v);
    }
    let panel = match cfg.extra.get("panel") {
        Some(v) => v
            .parse()
            .map_err(|_| CliError::Invalid(format!("panel: cannot parse {v:?}")))?,
        None => DEFAULT_PANEL,
    };
    cfg.extra.insert("panel".into(), panel.to_string());
    let entries = track_entries(&cfg)?;
    cfg.ensure_out_dir()?;
    let times = checkpoint_times(&cfg, 11);
    let params = cfg.params();
    let outputs: Vec<(u64, String)> = cfg
        .seeds
        .par_iter()
        .map(|&seed| -> Result<(u64, String), CliError> {
            let mut tracker = Tracker::new(&cfg.h, params.clone(), entries.clone(), panel, seed)?;
            let mut state = new_state(&cfg, seed)?;
            let opts = RunOptions::new(stop_of(&cfg))
                .with_checkpoints(checkpoint_steps(&times, state.time_scale()))
                .without_step_rows();
            run_with(&mut state, &opts, &mut [&mut tracker], |_| {})?;
            let mut csv = cfg.header("track", seed);
            csv.push_str("i,t,pattern,anchor,observed,predicted,env_lo,env_hi,trackable\n");
            for s in tracker.samples() {
                let _ = writeln!(
                    csv,
                    "{},{:?},{},{},{},{:?},{:?},{:?},{}",
                    s.i, s.t, s.pattern, s.anchor, s.observed, s.predicted, s.envelope_lo, s.envelope_hi, s.trackable_now
                );
            }
            Ok((seed, csv))
        })
        .collect::<Result<_, _>>()?;
    for (seed, csv) in &outputs {
        let path = cfg.write_file(&format!("track_seed{seed}.csv"), csv)?;
        println!("{}", path.display());
    }
    Ok(())
}

// ----------------------------------------------------------------- census

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Graphs to count (presets or files); default: the cherry P3 and H.
    #[arg(long = "gamma", value_delimiter = ';', num_args = 1..)]
    pub gammas: Vec<String>,
}

pub fn census(args: &CensusArgs) -> Result<(), CliError> {
    let mut run_args = args.run.clone();
    run_args.log_closures = false;
    let mut cfg = run_args.resolve(&["gammas"], "hfree-out")?;
    if !args.gammas.is_empty() {
        cfg.extra.insert("gammas".into(), args.gammas.join(";"));
    }
    let names: Vec<String> = match cfg.extra.get("gammas") {
        Some(list) => list.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => vec!["P3".to_string(), cfg.h_spec.clone()],
    };
    cfg.extra.insert("gammas".into(), names.join(";"));
    let mut gammas = Vec::new();
    for name in &names {
        let g = load_graph(name)?;
        if cfg.n > CENSUS_SMALL_N && g.vertex_count() > CENSUS_LARGE_N_MAX_VERTICES {
            return Err(CliError::Invalid(format!(
                "census of {name} ({} vertices) at n = {} exceeds the cost cap of {CENSUS_LARGE_N_MAX_VERTICES} vertices",
                g.vertex_count(),
                cfg.n
            )));
        }
        classify_regime(&cfg.h, &g)?;
        gammas.push((name.clone(), g));
    }
    cfg.ensure_out_dir()?;
    let times = checkpoint_times(&cfg, 6);
    let outputs: Vec<(u64, String)> = cfg
        .seeds
        .par_iter()
        .map(|&seed| -> Result<(u64, String), CliError> {
            let mut csv = cfg.header("census", seed);
            csv.push_str("i,t,gamma,observed,predicted,regime\n");
            let mut state = new_state(&cfg, seed)?;
            let mut obs = |st: &ProcessState| -> Result<(), String> {
                for (name, g) in &gammas {
                    let r = subgraph_census(st, g).map_err(|e| e.to_string())?;
                    let _ = writeln!(csv, "{},{:?},{name},{},{:?},{}", st.i(), st.t(), r.observed, r.predicted, r.regime);
                }
                Ok(())
            };
            let opts = RunOptions::new(stop_of(&cfg))
                .with_checkpoints(checkpoint_steps(&times, state.time_scale()))
                .without_step_rows();
            run_with(&mut state, &opts, &mut [&mut obs], |_| {})?;
            Ok((seed, csv))
        })
        .collect::<Result<_, _>>()?;
    for (seed, csv) in &outputs {
        let path = cfg.write_file(&format!("census_seed{seed}.csv"), csv)?;
        println!("{}", path.display());
    }
    Ok(())
}

// -------------------------------------------------------------------- fit

#[derive(Args, Debug)]
pub struct FitArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// CSV with columns `n,value`; when absent, a sweep over `--ns` is run.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Sweep sizes for the process runs.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub ns: Vec<usize>,
    /// Quantity measured at the stop step of each run.
    #[arg(long, value_enum, default_value_t = Quantity::Edges)]
    pub quantity: Quantity,
    /// Divide each value by (ln n)^c before fitting.
    #[arg(long)]
    pub polylog: Option<f64>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Edges,
    MinDegree,
    MaxDegree,
    OpenPairs,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::Edges => "edges",
            Quantity::MinDegree => "min_degree",
            Quantity::MaxDegree => "max_degree",
            Quantity::OpenPairs => "open_pairs",
        }
    }

    fn measure(self, state: &ProcessState) -> f64 {
        match self {
            Quantity::Edges => state.i() as f64,
            Quantity::OpenPairs => state.open_count() as f64,
            Quantity::MinDegree => degree_stats(state).min as f64,
            Quantity::MaxDegree => degree_stats(state).max as f64,
        }
    }
}

pub fn parse_fit_csv(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let mut points = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || (points.is_empty() && line.starts_with('n')) {
            continue;
        }
        let bad = || CliError::Invalid(format!("fit input line {}: expected `n,value`", k + 1));
        let (n, v) = line.split_once(',').ok_or_else(bad)?;
        let n: f64 = n.trim().parse().map_err(|_| bad())?;
        let v: f64 = v.trim().parse().map_err(|_| bad())?;
        points.push((n, v));
    }
    Ok(points)
}

fn fit_report(points: &[(f64, f64)], polylog: Option<f64>) -> Result<Value, CliError> {
    let fit = exponent_fit(points, polylog)?;
    println!("points: {}", points.len());
    println!("slope: {:.6}", fit.slope);
    println!("intercept: {:.6}", fit.intercept);
    println!("r_squared: {:.6}", fit.r_squared);
    Ok(json!({
        "points": points.iter().map(|&(n, v)| json!({"n": n, "value": v})).collect::<Vec<_>>(),
        "polylog": polylog,
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
    }))
}

pub fn fit(args: &FitArgs) -> Result<(), CliError> {
    if let Some(path) = &args.input {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let points = parse_fit_csv(&text)?;
        let report = fit_report(&points, args.polylog)?;
        if let Some(out) = &args.run.out {
            std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
            let file = out.join("fit.json");
            let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Runtime(e.to_string()))? + "\n";
            std::fs::write(&file, text).map_err(|e| CliError::io(&file, e))?;
        }
        return Ok(());
    }
    if args.ns.len() < 3 {
        return Err(CliError::Invalid("fit needs --input or at least three sizes in --ns".into()));
    }
    let mut run_args = args.run.clone();
    run_args.log_closures = false;
    if run_args.n.is_none() {
        run_args.n = Some(*args.ns.iter().min().unwrap());
    }
    let mut cfg = run_args.resolve(&[], "hfree-out")?;
    cfg.extra.insert("ns".into(), join(&args.ns));
    cfg.extra.insert("quantity".into(), args.quantity.name().into());
    if let Some(c) = args.polylog {
        cfg.extra.insert("polylog".into(), format!("{c:?}"));
    }
    cfg.ensure_out_dir()?;
    let mut points = Vec::new();
    for &n in &args.ns {
        let mut sized = cfg.clone();
        sized.n = n;
        if n < sized.h.vertex_count() {
            return Err(CliError::Invalid(format!("n = {n} is smaller than v_H")));
        }
        let values: Vec<f64> = sized
            .seeds
            .par_iter()
            .map(|&seed| -> Result<f64, CliError> {
                let mut state = new_state(&sized, seed)?;
                run_with(&mut state, &RunOptions::new(stop_of(&sized)).without_step_rows(), &mut [], |_| {})?;
                Ok(args.quantity.measure(&state))
            })
            .collect::<Result<_, _>>()?;
        points.push((n as f64, values.iter().sum::<f64>() / values.len() as f64));
    }
    let mut csv = cfg.header("fit", cfg.seeds[0]);
    csv.push_str("n,value\n");
    for (n, v) in &points {
        let _ = writeln!(csv, "{n},{v:?}");
    }
    cfg.write_file("fit_input.csv", &csv)?;
    let mut report = fit_report(&points, args.polylog)?;
    report["config"] = config_json(&cfg, "fit");
    report["quantity"] = json!(args.quantity.name());
    write_json(&cfg, "fit.json", &report)?;
    Ok(())
}

// ------------------------------------------------------------------- traj

#[derive(Args, Debug)]
pub struct TrajArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Grid points from 0 to `--t-end`.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Last grid time (default: t_max).
    #[arg(long)]
    pub t_end: Option<f64>,
}

pub fn traj_csv(cfg: &RunConfig, params: &TrajectoryParams, points: usize, t_end: f64) -> String {
    let entries = catalogue(&cfg.h);
    let mut csv = cfg.header("traj", cfg.seeds[0]);
    csv.push_str("t,q,c");
    for e in &entries {
        let _ = write!(csv, ",x_{}", e.id);
    }
    csv.push_str(",env_lo,env_hi\n");
    for k in 0..points {
        let t = if points == 1 { 0.0 } else { t_end * k as f64 / (points - 1) as f64 };
        let q = q_of_t(params, t);
        let _ = write!(csv, "{t:?},{q:?},{:?}", c_of_t(params, t));
        for e in &entries {
            let _ = write!(csv, ",{:?}", x_of_t(params, e.pattern.e_gamma(), e.pattern.e_j(), t));
        }
        // the open-pair envelope relative to n^2
        let (lo, hi) = envelope(params, t, ScalingExponent::integer(0), q);
        let _ = writeln!(csv, ",{lo:?},{hi:?}");
    }
    csv
}

pub fn traj(args: &TrajArgs) -> Result<(), CliError> {
    if args.points == 0 {
        return Err(CliError::Invalid("--points must be positive".into()));
    }
    let mut cfg = args.run.resolve(&[], "hfree-out")?;
    let params = cfg.params();
    let t_end = args.t_end.unwrap_or(params.t_max);
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(CliError::Invalid("--t-end must be finite and non-negative".into()));
    }
    cfg.extra.insert("points".into(), args.points.to_string());
    cfg.extra.insert("t_end".into(), format!("{t_end:?}"));
    let csv = traj_csv(&cfg, &params, args.points, t_end);
    if args.run.out.is_some() || cfg.extra.contains_key("out") {
        cfg.ensure_out_dir()?;
        let path = cfg.write_file("traj.csv", &csv)?;
        println!("{}", path.display());
    } else {
        print!("{csv}");
    }
    Ok(())
}
