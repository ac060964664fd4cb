//! End-to-end acceptance checks. Each test writes one `PASS`/`FAIL` line to
//! stderr (bypassing the test harness capture) before asserting.

use std::io::Write;
use std::sync::{Mutex, MutexGuard, OnceLock};

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::Rng;

use hfree_core::analysis::{classify_regime, common_neighbors, degree_stats, exponent_fit, open_pairs_within, subgraph_census, Regime};
use hfree_core::extension::{catalogue, default_v_constant, random_non_edge, ClosureIdentityChecker};
use hfree_core::graph::GraphSpec;
use hfree_core::process::{checkpoint_steps, recompute_status_oracle, run, run_with, split_rng, RunOptions, Stop};
use hfree_core::scaling::{extension_series, is_strictly_two_balanced, pair_scaling_exponent};
use hfree_core::trajectory::{alpha_bound, martingale_tail, ode_residual, q_of_t, x_of_t, Constants, TailVariant, TrajectoryParams};
use hfree_core::{ForbiddenGraph, ProcessState, RootedPattern, ScalingExponent, StepOutcome};

fn report(name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "acceptance [{verdict}] {name}: {detail}");
}

/// Large runs hold this lock so at most one big state is alive at a time.
fn heavy() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn h(name: &str) -> ForbiddenGraph {
    ForbiddenGraph::preset(name).unwrap()
}

fn median(mut xs: Vec<f64>) -> f64 {
    assert!(!xs.is_empty());
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

fn grid(to: f64) -> Vec<f64> {
    (1..=(to * 10.0).round() as usize).map(|k| k as f64 / 10.0).collect()
}

/// Max over the grid of `|Q / (q n^2) - 1|`, where a grid time past
/// termination counts with `Q = 0`, and the same max over reached times only.
fn q_deviation(h: &ForbiddenGraph, n: usize, samples: &[(f64, u64)], times: &[f64]) -> (f64, f64) {
    let params = TrajectoryParams::new(h, n, Constants::defaults(5.0));
    let nn = (n * n) as f64;
    let mut all = 0.0f64;
    let mut reached = 0.0f64;
    for &t in times {
        let hit = samples.iter().find(|(st, _)| (st - t).abs() < 1e-9);
        let open = hit.map_or(0, |s| s.1);
        let dev = (2.0 * open as f64 / (q_of_t(&params, t) * nn) - 1.0).abs();
        all = all.max(dev);
        if hit.is_some() {
            reached = reached.max(dev);
        }
    }
    (all, reached)
}

struct TriangleRun {
    /// `(t, open pairs)` at each grid time reached.
    samples: Vec<(f64, u64)>,
    cherry_observed: u64,
    cherry_predicted: f64,
    triangles: u64,
    median_degree: f64,
    predicted_degree: f64,
    q_i_ratios: Vec<f64>,
    /// Time at which the run stopped (termination or the last grid point).
    final_t: f64,
    secs: f64,
}

const BIG_N: usize = 20_000;
const BIG_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

fn triangle_runs() -> &'static [TriangleRun] {
    static RUNS: OnceLock<Vec<TriangleRun>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let _g = heavy();
        let k3 = h("K3");
        let params = TrajectoryParams::new(&k3, BIG_N, Constants::defaults(default_v_constant(&k3)));
        let set_size = alpha_bound(&params).round() as usize;
        BIG_SEEDS
            .iter()
            .map(|&seed| {
                let started = std::time::Instant::now();
                let mut state = ProcessState::new(k3.clone(), BIG_N, seed).unwrap();
                let s = state.time_scale();
                let times = grid(1.4);
                let cps = checkpoint_steps(&times, s);
                let half = (0.5 * s).round() as u64;
                let one = (1.0 * s).round() as u64;
                let mut run_data = TriangleRun {
                    samples: Vec::new(),
                    cherry_observed: 0,
                    cherry_predicted: 0.0,
                    triangles: 0,
                    median_degree: 0.0,
                    predicted_degree: 0.0,
                    q_i_ratios: Vec::new(),
                    final_t: 0.0,
                    secs: 0.0,
                };
                let mut aux = split_rng(seed, 2);
                {
                    let mut obs = |st: &ProcessState| -> Result<(), String> {
                        let t = times[cps.iter().position(|&c| c == st.i()).unwrap()];
                        run_data.samples.push((t, st.open_count()));
                        if st.i() == half {
                            let cherry = subgraph_census(st, &GraphSpec::path(3)).map_err(|e| e.to_string())?;
                            let tri = subgraph_census(st, &GraphSpec::complete(3)).map_err(|e| e.to_string())?;
                            run_data.cherry_observed = cherry.observed;
                            run_data.cherry_predicted = cherry.predicted;
                            run_data.triangles = tri.observed;
                        }
                        if st.i() == one {
                            let d = degree_stats(st);
                            run_data.median_degree = d.median;
                            run_data.predicted_degree = 2.0 * st.t() * params.p() * BIG_N as f64;
                            let q = q_of_t(&params, st.t());
                            for _ in 0..5 {
                                let set = sample(&mut aux, BIG_N, set_size).into_vec();
                                let qi = open_pairs_within(st, &set) as f64;
                                run_data.q_i_ratios.push(qi / (q * (set_size * set_size) as f64));
                            }
                        }
                        Ok(())
                    };
                    let opts = RunOptions::new(Stop::MaxSteps(*cps.last().unwrap()))
                        .with_checkpoints(cps.clone())
                        .without_step_rows();
                    run(&mut state, &opts, &mut [&mut obs]).unwrap();
                }
                run_data.final_t = state.t();
                run_data.secs = started.elapsed().as_secs_f64();
                run_data
            })
            .collect()
    })
}

#[test]
fn oracle_equivalence() {
    let _g = heavy();
    let start = std::time::Instant::now();
    let mut checked = 0u64;
    let mut mismatches = Vec::new();
    for name in ["K3", "K4", "C4", "C5"] {
        let hh = h(name);
        for n in [15, 25, 40] {
            for seed in 0..20u64 {
                let mut state = ProcessState::new(hh.clone(), n, seed).unwrap();
                loop {
                    let oracle = recompute_status_oracle(&state).unwrap();
                    checked += 1;
                    if oracle != state.status_table() {
                        mismatches.push(format!("{name} n={n} seed={seed} i={}", state.i()));
                        break;
                    }
                    if state.step() == StepOutcome::Terminated {
                        break;
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = mismatches.is_empty() && secs < 120.0;
    report(
        "oracle equivalence",
        pass,
        &format!("{checked} states compared, {} mismatches, {secs:.1}s", mismatches.len()),
    );
    assert!(pass, "mismatches: {mismatches:?}, elapsed {secs:.1}s");
}

#[test]
fn q_trajectory() {
    let k3 = h("K3");
    let runs = triangle_runs();
    let k3_devs: Vec<(f64, f64)> = runs.iter().map(|r| q_deviation(&k3, BIG_N, &r.samples, &grid(1.4))).collect();
    let k3_dev = median(k3_devs.iter().map(|d| d.0).collect());
    let k3_reached = median(k3_devs.iter().map(|d| d.1).collect());
    let k3_end = median(runs.iter().map(|r| r.final_t).collect());
    let k3_slowest = runs.iter().map(|r| r.secs).fold(0.0, f64::max);

    let c4 = h("C4");
    let n = 10_000;
    let times = grid(1.0);
    let mut devs = Vec::new();
    let mut ends = Vec::new();
    let mut slowest = 0.0f64;
    {
        let _g = heavy();
        for seed in BIG_SEEDS {
            let started = std::time::Instant::now();
            let mut state = ProcessState::new(c4.clone(), n, seed).unwrap();
            let cps = checkpoint_steps(&times, state.time_scale());
            let opts = RunOptions::new(Stop::MaxSteps(*cps.last().unwrap()))
                .with_checkpoints(cps)
                .without_step_rows();
            let trace = run(&mut state, &opts, &mut []).unwrap();
            let samples: Vec<(f64, u64)> = trace
                .checkpoints
                .iter()
                .map(|c| (times[((c.t * 10.0).round() as usize).saturating_sub(1)], c.open_count))
                .collect();
            devs.push(q_deviation(&c4, n, &samples, &times));
            ends.push(state.t());
            slowest = slowest.max(started.elapsed().as_secs_f64());
        }
    }
    let c4_dev = median(devs.iter().map(|d| d.0).collect());
    let c4_reached = median(devs.iter().map(|d| d.1).collect());
    let c4_end = median(ends);
    let k3_pass = k3_dev <= 0.05 && k3_slowest < 120.0;
    let c4_pass = c4_dev <= 0.07 && slowest < 120.0;
    report(
        "Q trajectory (K3, n=20000, t<=1.4)",
        k3_pass,
        &format!(
            "median max |Q/(q n^2) - 1| = {k3_dev:.4} (tolerance 0.05); median stop time {k3_end:.3}; \
             over reached grid times only {k3_reached:.4}; slowest seed {k3_slowest:.1}s"
        ),
    );
    report(
        "Q trajectory (C4, n=10000, t<=1.0)",
        c4_pass,
        &format!(
            "median max |Q/(q n^2) - 1| = {c4_dev:.4} (tolerance 0.07); median stop time {c4_end:.3}; \
             over reached grid times only {c4_reached:.4}; slowest seed {slowest:.1}s"
        ),
    );
    assert!(k3_pass && c4_pass, "K3 deviation {k3_dev}, C4 deviation {c4_dev}");
}

#[test]
fn degree_and_common_neighbour_trajectories() {
    let runs = triangle_runs();
    let deg_err = median(
        runs.iter()
            .map(|r| (r.median_degree / r.predicted_degree - 1.0).abs())
            .collect(),
    );

    let k4 = h("K4");
    let n = 10_000;
    let mut errs = Vec::new();
    {
        let _g = heavy();
        for seed in [1u64, 2, 3] {
            let mut state = ProcessState::new(k4.clone(), n, seed).unwrap();
            let steps = state.time_scale().round() as u64;
            run(&mut state, &RunOptions::new(Stop::MaxSteps(steps)).without_step_rows(), &mut []).unwrap();
            let mut rng = split_rng(seed, 2);
            let pairs = 4000;
            let total: u64 = (0..pairs)
                .map(|_| common_neighbors(&state, &sample(&mut rng, n, 2).into_vec()).unwrap())
                .sum();
            let observed = total as f64 / pairs as f64;
            let nf = n as f64;
            let predicted = (2.0 * state.i() as f64 / (nf * nf)).powi(2) * nf;
            errs.push((observed / predicted - 1.0).abs());
        }
    }
    let cn_err = median(errs);
    let pass = deg_err <= 0.10 && cn_err <= 0.15;
    report(
        "degree and common-neighbour trajectories",
        pass,
        &format!("K3 median-degree error {deg_err:.4} (<= 0.10), K4 common-neighbour error {cn_err:.4} (<= 0.15)"),
    );
    assert!(pass, "degree error {deg_err}, common-neighbour error {cn_err}");
}

#[test]
fn closure_identity() {
    let mut violations = 0u64;
    let mut window_samples = 0u64;
    let mut window_equal = 0u64;
    let mut total = 0u64;
    for name in ["K3", "K4"] {
        let hh = h(name);
        let checker = ClosureIdentityChecker::new(&hh);
        let n = 30;
        let params = TrajectoryParams::new(&hh, n, Constants::defaults(default_v_constant(&hh)));
        for seed in 0..10u64 {
            let mut state = ProcessState::new(hh.clone(), n, seed).unwrap();
            let mut rng = split_rng(seed, 3);
            loop {
                if state.step() == StepOutcome::Terminated {
                    break;
                }
                let in_window = state.t() <= params.t_max;
                for _ in 0..50 {
                    let Some((u, v)) = random_non_edge(&state, &mut rng) else { break };
                    let r = checker.check(&state, u, v).unwrap();
                    total += 1;
                    if r.formula < Ratio::from_integer(r.direct) {
                        violations += 1;
                    }
                    if in_window {
                        window_samples += 1;
                        if r.formula == Ratio::from_integer(r.direct) {
                            window_equal += 1;
                        }
                    }
                }
            }
        }
    }
    let frac = window_equal as f64 / window_samples.max(1) as f64;
    let pass = violations == 0 && window_samples > 0 && frac >= 0.90;
    report(
        "closure identity",
        pass,
        &format!("{total} samples, {violations} with formula < direct, equality {frac:.4} over {window_samples} in-window samples"),
    );
    assert!(pass);
}

fn supported_forbidden_graphs() -> Vec<ForbiddenGraph> {
    ["K3", "K4", "K5", "K6", "K7", "C4", "C5", "C6", "C7", "C8", "K3,3", "K4,4"]
        .iter()
        .map(|s| h(s))
        .collect()
}

#[test]
fn closed_form_self_consistency() {
    let (mut worst_q, mut worst_ode, mut worst_z) = (0.0f64, 0.0f64, 0.0f64);
    for hh in supported_forbidden_graphs() {
        let params = TrajectoryParams::new(&hh, 10_000, Constants::defaults(default_v_constant(&hh)));
        let dt = 1e-6;
        let ts: Vec<f64> = (0..100).map(|k| params.t_max * k as f64 / 99.0).collect();
        for &t in &ts {
            let dq = (q_of_t(&params, t + dt) - q_of_t(&params, t - dt)) / (2.0 * dt);
            worst_q = worst_q.max((dq + params.c(t)).abs());
        }
        for entry in catalogue(&hh) {
            let (eg, ej) = (entry.pattern.e_gamma(), entry.pattern.e_j());
            for &t in &ts {
                worst_ode = worst_ode.max(ode_residual(&params, eg, ej, t, dt));
                if t > 0.0 {
                    let z = x_of_t(&params, eg, ej, t) / q_of_t(&params, t).powi((eg - ej) as i32);
                    let want = (2.0 * t).powi(ej as i32);
                    worst_z = worst_z.max(((z - want) / want).abs());
                }
            }
        }
    }
    let pass = worst_q < 1e-6 && worst_ode < 1e-6 && worst_z <= 1e-12;
    report(
        "closed-form self-consistency",
        pass,
        &format!("max |q' + c| = {worst_q:.2e}, max ODE residual = {worst_ode:.2e}, max z-identity error = {worst_z:.2e}"),
    );
    assert!(pass);
}

#[test]
fn scaling_algebra_vectors() {
    let e = ScalingExponent::new;
    let k7 = h("K7");
    let pat = RootedPattern::new(GraphSpec::complete(4), [0, 1]).unwrap();
    let s1 = extension_series(&k7, &pat).unwrap();
    let c5 = h("C5");
    let pat2 = RootedPattern::new(GraphSpec::preset("K4+1").unwrap(), [0, 1]).unwrap();
    let s2 = extension_series(&c5, &pat2).unwrap();
    let total = pair_scaling_exponent(&c5, &pat2);
    let pass = s1.step_exponents() == [e(1, 2), e(1, 4)]
        && s2.step_exponents() == [e(-7, 4), e(1, 1)]
        && total == e(-3, 4)
        && s2.total() == total;
    report(
        "scaling algebra vectors",
        pass,
        &format!(
            "K7/K4 series {:?}, C5/K4+1 series {:?}, S = {total}",
            s1.step_exponents().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            s2.step_exponents().iter().map(|x| x.to_string()).collect::<Vec<_>>()
        ),
    );
    assert!(pass);
}

/// Reference strict 2-balancedness straight from the definition: every
/// proper subgraph (vertex subset plus edge subset) on at least 3 vertices.
fn reference_strictly_two_balanced(g: &GraphSpec) -> bool {
    let v = g.vertex_count();
    let e = g.edge_count();
    if v < 3 || e < 3 {
        return false;
    }
    for vmask in 0u32..(1 << v) {
        let vk = vmask.count_ones() as usize;
        if vk < 3 {
            continue;
        }
        let inside: Vec<usize> = (0..e)
            .filter(|&k| {
                let (a, b) = g.edges()[k];
                vmask >> a & 1 == 1 && vmask >> b & 1 == 1
            })
            .collect();
        for emask in 0u64..(1u64 << inside.len()) {
            let ek = emask.count_ones() as usize;
            if vk == v && ek == e {
                continue;
            }
            // (e-1)/(v-2) > (ek-1)/(vk-2), cross-multiplied
            if (e as i64 - 1) * (vk as i64 - 2) <= (ek as i64 - 1) * (v as i64 - 2) {
                return false;
            }
        }
    }
    true
}

fn graph_from_mask(v: usize, mask: u32) -> GraphSpec {
    let mut edges = Vec::new();
    let mut k = 0;
    for b in 1..v {
        for a in 0..b {
            if mask >> k & 1 == 1 {
                edges.push((a, b));
            }
            k += 1;
        }
    }
    GraphSpec::new(v, edges).unwrap()
}

fn trees(v: usize) -> Vec<GraphSpec> {
    if v == 1 {
        return vec![GraphSpec::empty(1)];
    }
    if v == 2 {
        return vec![GraphSpec::complete(2)];
    }
    // decode every Prüfer sequence
    let mut out = Vec::new();
    let len = v - 2;
    let total = v.pow(len as u32);
    for code in 0..total {
        let mut seq = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            seq.push(c % v);
            c /= v;
        }
        let mut degree = vec![1usize; v];
        for &x in &seq {
            degree[x] += 1;
        }
        let mut edges = Vec::new();
        for &x in &seq {
            let leaf = (0..v).find(|&y| degree[y] == 1).unwrap();
            edges.push((leaf.min(x), leaf.max(x)));
            degree[leaf] -= 1;
            degree[x] -= 1;
        }
        let rest: Vec<usize> = (0..v).filter(|&y| degree[y] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(GraphSpec::new(v, edges).unwrap());
    }
    out
}

#[test]
fn balancedness_suite() {
    let mut failures = Vec::new();
    let mut positives = Vec::new();
    for s in 3..=7 {
        positives.push(GraphSpec::complete(s));
    }
    for l in 3..=8 {
        positives.push(GraphSpec::cycle(l));
    }
    for r in 2..=4 {
        positives.push(GraphSpec::complete_bipartite(r, r));
    }
    for g in &positives {
        let got = is_strictly_two_balanced(g).unwrap();
        if !got || !reference_strictly_two_balanced(g) {
            failures.push(format!("expected balanced: {g}"));
        }
    }
    let mut tree_count = 0;
    for v in 1..=7 {
        for t in trees(v) {
            tree_count += 1;
            if is_strictly_two_balanced(&t).unwrap() || reference_strictly_two_balanced(&t) {
                failures.push(format!("tree reported balanced: {t}"));
            }
        }
    }
    let mut pendant_count = 0u64;
    let mut cross_checked = 0u64;
    let mut rng = split_rng(7, 0);
    for v in 1..=7usize {
        let pairs = v * (v - 1) / 2;
        for mask in 0u32..(1u32 << pairs) {
            let g = graph_from_mask(v, mask);
            if !(0..v).any(|x| g.degree(x) == 1) {
                continue;
            }
            pendant_count += 1;
            if is_strictly_two_balanced(&g).unwrap() {
                failures.push(format!("graph with a degree-1 vertex reported balanced: {g}"));
            }
            // the reference is exponential in the edge count; check all small
            // graphs and a random sample of the rest
            if v <= 5 || rng.gen_ratio(1, 500) {
                cross_checked += 1;
                if reference_strictly_two_balanced(&g) {
                    failures.push(format!("reference disagrees on {g}"));
                }
            }
        }
    }
    let pass = failures.is_empty();
    report(
        "balancedness suite",
        pass,
        &format!(
            "{} positive families, {tree_count} labelled trees, {pendant_count} graphs with a degree-1 vertex ({cross_checked} cross-checked against the reference)",
            positives.len()
        ),
    );
    assert!(pass, "{failures:?}");
}

#[test]
fn census() {
    let runs = triangle_runs();
    let cherry_err = median(
        runs.iter()
            .map(|r| (r.cherry_observed as f64 / r.cherry_predicted - 1.0).abs())
            .collect(),
    );
    let max_cherry_err = runs
        .iter()
        .map(|r| (r.cherry_observed as f64 / r.cherry_predicted - 1.0).abs())
        .fold(0.0, f64::max);
    let triangles: u64 = runs.iter().map(|r| r.triangles).sum();
    let k3 = h("K3");
    let regimes = [
        classify_regime(&k3, &GraphSpec::cycle(5)).unwrap(),
        classify_regime(&k3, &GraphSpec::complete_bipartite(4, 4)).unwrap(),
        classify_regime(&k3, &GraphSpec::complete_bipartite(4, 5)).unwrap(),
    ];
    let pass = max_cherry_err <= 0.10
        && triangles == 0
        && regimes == [Regime::Supercritical, Regime::Critical, Regime::Subcritical];
    report(
        "census",
        pass,
        &format!(
            "cherry error median {cherry_err:.4} max {max_cherry_err:.4} (<= 0.10), triangles {triangles}, regimes {:?}",
            regimes
        ),
    );
    assert!(pass);
}

#[test]
fn exponent_fit_edges_at_m() {
    let k3 = h("K3");
    let started = std::time::Instant::now();
    let mut points = Vec::new();
    {
        let _g = heavy();
        for k in 10..=14 {
            let n = 1usize << k;
            let params = TrajectoryParams::new(&k3, n, Constants::defaults(default_v_constant(&k3)));
            let mut edges = 0.0;
            for seed in [1u64, 2, 3] {
                let mut state = ProcessState::new(k3.clone(), n, seed).unwrap();
                run(&mut state, &RunOptions::new(Stop::MaxSteps(params.m)).without_step_rows(), &mut []).unwrap();
                edges += state.i() as f64 / 3.0;
            }
            points.push((n as f64, edges));
        }
    }
    let fit = exponent_fit(&points, Some(0.5)).unwrap();
    let secs = started.elapsed().as_secs_f64();
    let pass = (fit.slope - 1.5).abs() <= 0.1 && secs < 900.0;
    report(
        "exponent fit",
        pass,
        &format!("slope {:.4} (1.5 +/- 0.1), r^2 {:.6}, {secs:.1}s", fit.slope, fit.r_squared),
    );
    assert!(pass);
}

#[test]
fn open_pairs_in_independent_size_sets() {
    let runs = triangle_runs();
    let ratios: Vec<f64> = runs.iter().flat_map(|r| r.q_i_ratios.iter().copied()).collect();
    let m = median(ratios.clone());
    let pass = (0.9..=1.1).contains(&m);
    report(
        "Q_I tracking",
        pass,
        &format!("median Q_I/(q |I|^2) = {m:.4} over {} sets (range [0.9, 1.1])", ratios.len()),
    );
    assert!(pass);
}

fn trace_bytes(seed: u64) -> Vec<u8> {
    let mut state = ProcessState::new(h("K3"), 1000, seed).unwrap();
    state.set_log_closures(true);
    let mut out = Vec::new();
    run_with(&mut state, &RunOptions::new(Stop::UntilTermination).without_step_rows(), &mut [], |r| {
        writeln!(out, "{},{:.17e},{},{},{},{}", r.i, r.t, r.open_after, r.newly_closed, r.chosen_edge.0, r.chosen_edge.1).unwrap();
        for (x, y) in &r.closed_pairs {
            writeln!(out, "#{x},{y}").unwrap();
        }
    })
    .unwrap();
    out
}

#[test]
fn determinism_and_tail_arithmetic() {
    let a = trace_bytes(11);
    let b = trace_bytes(11);
    let c = trace_bytes(12);
    let reproducible = a == b && a != c;

    let (eta, big_n, m) = (0.5, 40.0, 1000u64);
    let a1 = (3.0 * eta * m as f64 * big_n).sqrt();
    let t1 = martingale_tail(eta, big_n, m, a1, TailVariant::Submartingale).unwrap();
    let t2 = martingale_tail(eta, big_n, m, 2.0 * a1, TailVariant::Submartingale).unwrap();
    let e_err = (t1 - (-1.0f64).exp()).abs() / (-1.0f64).exp();
    let fourth_err = (t2 - t1.powi(4)).abs() / t2;
    let tail_ok = e_err <= 4.0 * f64::EPSILON && fourth_err <= 16.0 * f64::EPSILON;
    let pass = reproducible && tail_ok;
    report(
        "determinism and tail arithmetic",
        pass,
        &format!(
            "trace of {} bytes reproduced: {reproducible}; tail e^-1 rel err {e_err:.1e}, fourth-power rel err {fourth_err:.1e}",
            a.len()
        ),
    );
    assert!(pass);
}
