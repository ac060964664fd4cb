//! Statistics over process states: degrees, common neighbourhoods, labelled
//! subgraph counts and their regimes, independence numbers, open pairs inside
//! a vertex set, and log-log exponent fits.

use std::collections::HashSet;

use crate::embed::{Constraint, EmbeddingPlan};
use crate::error::{Error, Result};
use crate::exponent::ScalingExponent;
use crate::graph::{automorphism_count, contains_subgraph, BitAdjacency, GraphSpec};
use crate::pairs::PairStatus;
use crate::process::{ProcessState, StepRecord};
use crate::scaling::{scaling_exponent, ForbiddenGraph};

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub median: f64,
    /// `histogram[d]` vertices of degree `d`.
    pub histogram: Vec<u64>,
    /// `2i/n`.
    pub predicted_mean: f64,
}

pub fn degree_stats(state: &ProcessState) -> DegreeStats {
    let n = state.n();
    let mut degs: Vec<usize> = (0..n).map(|v| state.degree(v)).collect();
    degs.sort_unstable();
    let max = *degs.last().unwrap_or(&0);
    let mut histogram = vec![0u64; max + 1];
    for &d in &degs {
        histogram[d] += 1;
    }
    let median = if n == 0 {
        0.0
    } else if n % 2 == 1 {
        degs[n / 2] as f64
    } else {
        (degs[n / 2 - 1] + degs[n / 2]) as f64 / 2.0
    };
    DegreeStats {
        min: degs.first().copied().unwrap_or(0),
        max,
        mean: degs.iter().sum::<usize>() as f64 / n.max(1) as f64,
        median,
        histogram,
        predicted_mean: 2.0 * state.i() as f64 / n.max(1) as f64,
    }
}

/// `|∩ N(v)|` over the given vertices, by word-wise intersection.
pub fn common_neighbors(state: &ProcessState, vertices: &[usize]) -> Result<u64> {
    let n = state.n();
    let distinct: HashSet<usize> = vertices.iter().copied().collect();
    if vertices.is_empty() || distinct.len() != vertices.len() || vertices.iter().any(|&v| v >= n) {
        return Err(Error::InvalidAnchor(format!("need distinct vertices below {n}")));
    }
    let adj = state.adjacency();
    let mut acc = adj.row(vertices[0]).to_vec();
    for &v in &vertices[1..] {
        for (a, b) in acc.iter_mut().zip(adj.row(v)) {
            *a &= b;
        }
    }
    Ok(acc.iter().map(|w| w.count_ones() as u64).sum())
}

/// Whether `p^d n > 1`, the range in which common neighbourhoods of `d`
/// vertices concentrate.
pub fn common_neighbors_in_regime(h: &ForbiddenGraph, d: usize) -> bool {
    (h.rho() * d as i64) < ScalingExponent::integer(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    Subcritical,
    Supercritical,
    Critical,
    ContainsH,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Subcritical => "subcritical",
            Regime::Supercritical => "supercritical",
            Regime::Critical => "critical",
            Regime::ContainsH => "contains_h",
        })
    }
}

pub const REGIME_SCAN_CAP: usize = 12;

/// Compares `S_{Γ[B]}` with 1 over every non-empty `B ⊆ V_Γ`, exactly.
pub fn classify_regime(h: &ForbiddenGraph, gamma: &GraphSpec) -> Result<Regime> {
    let v = gamma.vertex_count();
    if v > REGIME_SCAN_CAP {
        return Err(Error::SizeCap {
            what: "vertices of a census graph",
            limit: REGIME_SCAN_CAP,
            actual: v,
        });
    }
    if contains_subgraph(gamma, h.graph()) {
        return Ok(Regime::ContainsH);
    }
    let (mut any_negative, mut any_zero) = (false, false);
    for mask in 1u64..(1u64 << v) {
        let s = ScalingExponent::integer(mask.count_ones() as i64) - h.rho() * gamma.edges_within_mask(mask) as i64;
        any_negative |= s.is_negative();
        any_zero |= s.is_zero();
    }
    Ok(if any_negative {
        Regime::Subcritical
    } else if any_zero {
        Regime::Critical
    } else {
        Regime::Supercritical
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusReport {
    pub gamma: GraphSpec,
    /// Labelled copies: injective maps sending edges to edges.
    pub observed: u64,
    /// `(2i/n²)^{e_Γ} n^{v_Γ}`.
    pub predicted: f64,
    pub regime: Regime,
    /// `observed / aut(Γ)` when the automorphism count is available.
    pub unlabeled: Option<f64>,
}

/// Above this many host vertices the census only accepts graphs on at most
/// [`CENSUS_LARGE_N_MAX_VERTICES`] vertices.
pub const CENSUS_SMALL_N: usize = 100;
pub const CENSUS_LARGE_N_MAX_VERTICES: usize = 5;

/// Labelled copies of `gamma` by anchored backtracking.
pub fn count_labeled(state: &ProcessState, gamma: &GraphSpec) -> u64 {
    let cons: Vec<_> = gamma.edges().iter().map(|&(a, b)| (a, b, Constraint::Edge)).collect();
    EmbeddingPlan::new(gamma.vertex_count(), &cons, &[]).count(state, &[])
}

fn falling(d: u64, k: u64) -> u64 {
    (0..k).map(|j| d.saturating_sub(j)).product()
}

/// Closed forms for stars: `Σ_v d(v)(d(v)-1)...(d(v)-k+1)`, with the single
/// edge giving `2i`.
fn star_count(state: &ProcessState, gamma: &GraphSpec) -> Option<u64> {
    let v = gamma.vertex_count();
    if v < 2 || gamma.edge_count() != v - 1 {
        return None;
    }
    let k = v - 1;
    (0..v).find(|&c| gamma.degree(c) == k)?;
    if k == 1 {
        return Some(2 * state.i());
    }
    Some((0..state.n()).map(|x| falling(state.degree(x) as u64, k as u64)).sum())
}

pub fn subgraph_census(state: &ProcessState, gamma: &GraphSpec) -> Result<CensusReport> {
    let n = state.n();
    let v = gamma.vertex_count();
    if n > CENSUS_SMALL_N && v > CENSUS_LARGE_N_MAX_VERTICES {
        return Err(Error::CostCap(format!(
            "census of a {v}-vertex graph at n = {n}; use at most {CENSUS_LARGE_N_MAX_VERTICES} vertices or n <= {CENSUS_SMALL_N}"
        )));
    }
    let regime = classify_regime(state.forbidden(), gamma)?;
    let observed = match star_count(state, gamma) {
        Some(c) => c,
        None => count_labeled(state, gamma),
    };
    let nf = n as f64;
    let predicted = (2.0 * state.i() as f64 / (nf * nf)).powi(gamma.edge_count() as i32) * nf.powi(v as i32);
    let unlabeled = automorphism_count(gamma).ok().map(|a| observed as f64 / a as f64);
    Ok(CensusReport {
        gamma: gamma.clone(),
        observed,
        predicted,
        regime,
        unlabeled,
    })
}

/// `log_n` of the expected copy count of `gamma` under `p`, i.e. `S_Γ`.
pub fn census_scaling(h: &ForbiddenGraph, gamma: &GraphSpec) -> ScalingExponent {
    scaling_exponent(h, gamma)
}

pub const EXACT_INDEPENDENCE_CAP: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndependenceMode {
    Exact { cap: usize },
    Greedy,
}

impl Default for IndependenceMode {
    fn default() -> Self {
        IndependenceMode::Exact {
            cap: EXACT_INDEPENDENCE_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Independence {
    pub value: usize,
    /// False when `value` is only a greedy lower bound.
    pub exact: bool,
}

pub fn independence_number(state: &ProcessState, mode: IndependenceMode) -> Result<Independence> {
    independence_number_of(state.adjacency(), mode)
}

pub fn independence_number_of(adj: &BitAdjacency, mode: IndependenceMode) -> Result<Independence> {
    let n = adj.vertex_count();
    match mode {
        IndependenceMode::Greedy => Ok(Independence {
            value: greedy_independent_set(adj).len(),
            exact: false,
        }),
        IndependenceMode::Exact { cap } => {
            if n > cap {
                return Err(Error::SizeCap {
                    what: "vertices for exact independence number",
                    limit: cap,
                    actual: n,
                });
            }
            let mut solver = MisSolver {
                adj,
                words: n.div_ceil(64),
                best: greedy_independent_set(adj).len(),
            };
            let mut all = vec![0u64; solver.words];
            for v in 0..n {
                all[v / 64] |= 1 << (v % 64);
            }
            solver.search(all, 0);
            Ok(Independence {
                value: solver.best,
                exact: true,
            })
        }
    }
}

/// Repeatedly takes a vertex of least remaining degree and discards its
/// neighbourhood.
pub fn greedy_independent_set(adj: &BitAdjacency) -> Vec<usize> {
    let n = adj.vertex_count();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|v| ones(adj.row(v)).collect()).collect();
    let mut deg: Vec<usize> = nbrs.iter().map(Vec::len).collect();
    let mut alive = vec![true; n];
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n.max(1)];
    for v in 0..n {
        buckets[deg[v]].push(v);
    }
    let mut out = Vec::new();
    let mut low = 0;
    loop {
        // lazy buckets: skip stale entries
        let mut pick = None;
        while low < buckets.len() {
            match buckets[low].pop() {
                Some(v) if alive[v] && deg[v] == low => {
                    pick = Some(v);
                    break;
                }
                Some(_) => {}
                None => low += 1,
            }
        }
        let Some(v) = pick else { break };
        out.push(v);
        alive[v] = false;
        for &u in &nbrs[v] {
            if !alive[u] {
                continue;
            }
            alive[u] = false;
            for &w in &nbrs[u] {
                if alive[w] {
                    deg[w] -= 1;
                    buckets[deg[w]].push(w);
                    low = low.min(deg[w]);
                }
            }
        }
    }
    out
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(k * 64 + b)
        })
    })
}

fn first_one(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .position(|&w| w != 0)
        .map(|k| k * 64 + words[k].trailing_zeros() as usize)
}

struct MisSolver<'a> {
    adj: &'a BitAdjacency,
    words: usize,
    best: usize,
}

impl MisSolver<'_> {
    /// Clique cover of `p` by greedy extension; its size bounds α from above.
    fn clique_cover_bound(&self, p: &[u64]) -> usize {
        let mut rest = p.to_vec();
        let mut cliques = 0;
        while let Some(v) = first_one(&rest) {
            cliques += 1;
            let mut cand: Vec<u64> = rest.iter().zip(self.adj.row(v)).map(|(r, a)| r & a).collect();
            rest[v / 64] &= !(1 << (v % 64));
            while let Some(u) = first_one(&cand) {
                rest[u / 64] &= !(1 << (u % 64));
                for (c, a) in cand.iter_mut().zip(self.adj.row(u)) {
                    *c &= a;
                }
            }
        }
        cliques
    }

    fn search(&mut self, p: Vec<u64>, size: usize) {
        let count: usize = p.iter().map(|w| w.count_ones() as usize).sum();
        if count == 0 {
            self.best = self.best.max(size);
            return;
        }
        if size + count <= self.best || size + self.clique_cover_bound(&p) <= self.best {
            return;
        }
        // branch on the vertex with most neighbours inside p
        let mut pick = 0;
        let mut pick_deg = 0;
        for v in ones(&p) {
            let d: usize = p.iter().zip(self.adj.row(v)).map(|(a, b)| (a & b).count_ones() as usize).sum();
            if d <= 1 {
                // some maximum independent set contains a vertex of degree <= 1
                let mut q = p.clone();
                q[v / 64] &= !(1 << (v % 64));
                for (x, a) in q.iter_mut().zip(self.adj.row(v)) {
                    *x &= !a;
                }
                self.search(q, size + 1);
                return;
            }
            if d > pick_deg {
                pick = v;
                pick_deg = d;
            }
        }
        let mut with = p.clone();
        with[pick / 64] &= !(1 << (pick % 64));
        let without = with.clone();
        for (x, a) in with.iter_mut().zip(self.adj.row(pick)) {
            *x &= !a;
        }
        debug_assert_eq!(with.len(), self.words);
        self.search(with, size + 1);
        self.search(without, size);
    }
}

/// Ordered count of open pairs inside `set`.
pub fn open_pairs_within(state: &ProcessState, set: &[usize]) -> u64 {
    let mut vs: Vec<usize> = set.iter().copied().filter(|&v| v < state.n()).collect();
    vs.sort_unstable();
    vs.dedup();
    let mut total = 0;
    for (k, &x) in vs.iter().enumerate() {
        for &y in &vs[..k] {
            if state.status(x, y) == PairStatus::Open {
                total += 2;
            }
        }
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ProbeReport {
    /// Steps that closed more than the threshold of ordered pairs inside the set.
    pub bad_edge_count: u64,
    pub max_closed_in_set: u64,
}

/// Scans per-step closure logs for steps closing many ordered pairs inside
/// `set`. Needs rows recorded with closure logging on.
pub fn smooth_independence_probe(rows: &[StepRecord], set: &[usize], threshold: f64) -> Result<ProbeReport> {
    let members: HashSet<usize> = set.iter().copied().collect();
    if members.len() < 2 {
        return Ok(ProbeReport::default());
    }
    let mut report = ProbeReport::default();
    for row in rows {
        if row.newly_closed as usize != row.closed_pairs.len() {
            return Err(Error::Precondition(format!(
                "step {} lacks per-step closure detail; rerun with closure logging",
                row.i
            )));
        }
        let inside = 2 * row
            .closed_pairs
            .iter()
            .filter(|&&(x, y)| members.contains(&(x as usize)) && members.contains(&(y as usize)))
            .count() as u64;
        report.max_closed_in_set = report.max_closed_in_set.max(inside);
        if inside as f64 > threshold {
            report.bad_edge_count += 1;
        }
    }
    Ok(report)
}

/// `n^{-5ε} p^{-1}`.
pub fn default_probe_threshold(n: usize, p: f64, epsilon: f64) -> f64 {
    (n as f64).powf(-5.0 * epsilon) / p
}

/// Edges with one end in `a` and the other in `b`, each edge once.
pub fn edges_between(state: &ProcessState, a: &[usize], b: &[usize]) -> u64 {
    let n = state.n();
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    for &x in a.iter().filter(|&&x| x < n) {
        in_a[x] = true;
    }
    for &y in b.iter().filter(|&&y| y < n) {
        in_b[y] = true;
    }
    let adj = state.adjacency();
    let mut total = 0;
    for x in 0..n {
        if !(in_a[x] || in_b[x]) {
            continue;
        }
        for y in ones(adj.row(x)).filter(|&y| y > x) {
            if (in_a[x] && in_b[y]) || (in_b[x] && in_a[y]) {
                total += 1;
            }
        }
    }
    total
}

/// `max{4ε⁻¹(|A|+|B|), p|A||B|n^{2ε}}`, the level above which `e(A, B)` is
/// expected to be reached by all large enough pairs of sets.
pub fn edges_between_threshold(n: usize, p: f64, epsilon: f64, a: usize, b: usize) -> f64 {
    let left = 4.0 / epsilon * (a + b) as f64;
    let right = p * a as f64 * b as f64 * (n as f64).powf(2.0 * epsilon);
    left.max(right)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(ln n, ln value)` after any correction.
    pub points: Vec<(f64, f64)>,
}

/// Least squares of `ln value` on `ln n`. With `polylog = Some(c)` each
/// value is first divided by `(ln n)^c`.
pub fn exponent_fit(points: &[(f64, f64)], polylog: Option<f64>) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::Precondition(format!("need at least 3 points, got {}", points.len())));
    }
    let mut ns: Vec<f64> = points.iter().map(|p| p.0).collect();
    ns.sort_by(f64::total_cmp);
    if ns.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("fit points need distinct n".into()));
    }
    if points.iter().any(|&(n, v)| !(n > 1.0 && v > 0.0 && n.is_finite() && v.is_finite())) {
        return Err(Error::Precondition("fit needs n > 1 and positive finite values".into()));
    }
    let logged: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, v)| {
            let ln_n = n.ln();
            let corr = polylog.map_or(0.0, |c| c * ln_n.ln());
            (ln_n, v.ln() - corr)
        })
        .collect();
    let k = logged.len() as f64;
    let mx = logged.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logged.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logged.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logged.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logged.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = logged.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy <= f64::EPSILON * k * my.abs().max(1.0) {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        points: logged,
    })
}
