//! Extension variables: patterns `(Γ, J, A)`, trackability, exact counts by
//! anchored backtracking, the closure identity, one-step decompositions and
//! the catalogue of tracked patterns.

use std::collections::HashSet;
use std::ops::ControlFlow;

use num_rational::Ratio;
use rand::Rng;

use crate::embed::{Constraint, EmbeddingPlan, Host};
use crate::error::{Error, Result};
use crate::exponent::ScalingExponent;
use crate::graph::{contains_subgraph, GraphSpec};
use crate::process::{split_rng, Observer, ProcessState};
use crate::scaling::{classify_pair, pair_scaling_exponent, ForbiddenGraph, RootedPattern};
use crate::trajectory::{envelope, x_of_t, TrajectoryParams};

/// `(Γ, J, A)`: a graph `Γ`, a spanning subgraph `J` given by a subset of
/// `Γ`'s edges, and an independent anchor list `A`. The order of `A` is the
/// order in which an [`Anchor`] lists images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionPattern {
    gamma: GraphSpec,
    j_edges: Vec<usize>,
    anchor: Vec<usize>,
}

impl ExtensionPattern {
    /// `j_edges` indexes into `gamma.edges()`.
    pub fn new(gamma: GraphSpec, j_edges: impl IntoIterator<Item = usize>, anchor: Vec<usize>) -> Result<Self> {
        let mut j: Vec<usize> = j_edges.into_iter().collect();
        j.sort_unstable();
        j.dedup();
        if let Some(&bad) = j.iter().find(|&&k| k >= gamma.edge_count()) {
            return Err(Error::InvalidGraph(format!(
                "J edge index {bad} out of range for {} edges",
                gamma.edge_count()
            )));
        }
        let mut seen = HashSet::new();
        for &a in &anchor {
            if a >= gamma.vertex_count() || !seen.insert(a) {
                return Err(Error::InvalidAnchor(format!("bad anchor vertex {a}")));
            }
        }
        if anchor.iter().any(|&a| anchor.iter().any(|&b| gamma.has_edge(a, b))) {
            return Err(Error::InvalidAnchor("anchor is not an independent set".into()));
        }
        Ok(ExtensionPattern {
            gamma,
            j_edges: j,
            anchor,
        })
    }

    /// Builds the pattern from `Γ` and a subgraph `J` on the same vertex set.
    pub fn from_graphs(gamma: GraphSpec, j: &GraphSpec, anchor: Vec<usize>) -> Result<Self> {
        if j.vertex_count() != gamma.vertex_count() {
            return Err(Error::InvalidGraph("J must span Γ".into()));
        }
        let idx = j
            .edges()
            .iter()
            .map(|&(a, b)| {
                gamma
                    .edge_index(a, b)
                    .ok_or_else(|| Error::InvalidGraph(format!("J edge ({a}, {b}) not in Γ")))
            })
            .collect::<Result<Vec<_>>>()?;
        ExtensionPattern::new(gamma, idx, anchor)
    }

    /// The open-pair pattern: Γ a single edge, J empty, no anchor.
    pub fn open_pairs() -> Self {
        ExtensionPattern::new(GraphSpec::complete(2), [], vec![]).expect("valid")
    }

    /// Degree of the anchored vertex.
    pub fn degree() -> Self {
        ExtensionPattern::new(GraphSpec::complete(2), [0], vec![0]).expect("valid")
    }

    /// Common neighbourhood of `d` anchored vertices.
    pub fn common_neighbours(d: usize) -> Self {
        let star = GraphSpec::star(d);
        ExtensionPattern::new(star, 0..d, (1..=d).collect()).expect("valid")
    }

    pub fn gamma(&self) -> &GraphSpec {
        &self.gamma
    }

    pub fn anchor(&self) -> &[usize] {
        &self.anchor
    }

    pub fn e_gamma(&self) -> usize {
        self.gamma.edge_count()
    }

    pub fn e_j(&self) -> usize {
        self.j_edges.len()
    }

    pub fn j_edge_indices(&self) -> &[usize] {
        &self.j_edges
    }

    pub fn j_graph(&self) -> GraphSpec {
        let edges = self.j_edges.iter().map(|&k| self.gamma.edges()[k]);
        GraphSpec::new(self.gamma.vertex_count(), edges).expect("subgraph of a valid graph")
    }

    pub fn rooted(&self) -> RootedPattern {
        RootedPattern::new(self.gamma.clone(), self.anchor.iter().copied()).expect("anchor validated")
    }

    /// `log_n S_{A,J}`, the scaling the variable is measured in.
    pub fn scaling(&self, h: &ForbiddenGraph) -> ScalingExponent {
        let rooted = RootedPattern::new(self.j_graph(), self.anchor.iter().copied()).expect("anchor validated");
        pair_scaling_exponent(h, &rooted)
    }

    /// Search plan: J edges must be edges, the remaining Γ edges open pairs.
    pub fn plan(&self) -> EmbeddingPlan {
        let cons: Vec<(usize, usize, Constraint)> = self
            .gamma
            .edges()
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| {
                let c = if self.j_edges.binary_search(&k).is_ok() {
                    Constraint::Edge
                } else {
                    Constraint::Open
                };
                (a, b, c)
            })
            .collect();
        EmbeddingPlan::new(self.gamma.vertex_count(), &cons, &self.anchor)
    }

    /// Checks `v_Γ, e_Γ < V`.
    pub fn fits(&self, v_const: f64) -> bool {
        (self.gamma.vertex_count() as f64) < v_const && (self.gamma.edge_count() as f64) < v_const
    }

    /// Pattern-file format: the graph text format plus `J <edge indices>` and
    /// `A <vertex list>` lines.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut graph_lines = Vec::new();
        let mut j: Option<Vec<usize>> = None;
        let mut a: Option<Vec<usize>> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            let list = |rest: &str| {
                rest.split_whitespace()
                    .map(|p| {
                        p.parse::<usize>().map_err(|e| Error::Parse {
                            line,
                            msg: format!("bad integer {p:?}: {e}"),
                        })
                    })
                    .collect::<Result<Vec<usize>>>()
            };
            if let Some(rest) = body.strip_prefix("J ").or(if body == "J" { Some("") } else { None }) {
                j = Some(list(rest)?);
            } else if let Some(rest) = body.strip_prefix("A ").or(if body == "A" { Some("") } else { None }) {
                a = Some(list(rest)?);
            } else {
                graph_lines.push((line, raw));
            }
        }
        let gamma = GraphSpec::parse_lines(graph_lines)?;
        ExtensionPattern::new(gamma, j.unwrap_or_default(), a.unwrap_or_default())
    }

    pub fn to_text(&self) -> String {
        let mut s = self.gamma.to_text();
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        s.push_str(&format!("J {}\n", join(&self.j_edges)));
        s.push_str(&format!("A {}\n", join(&self.anchor)));
        s
    }
}

/// Images of the anchor vertices, in the pattern's anchor order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Anchor(pub Vec<usize>);

impl Anchor {
    pub fn empty() -> Self {
        Anchor(Vec::new())
    }

    fn validate(&self, len: usize, n: usize) -> Result<()> {
        if self.0.len() != len {
            return Err(Error::InvalidAnchor(format!(
                "expected {len} anchor images, got {}",
                self.0.len()
            )));
        }
        let mut seen = HashSet::new();
        for &x in &self.0 {
            if x >= n || !seen.insert(x) {
                return Err(Error::InvalidAnchor(format!("anchor image {x} repeated or out of range")));
            }
        }
        Ok(())
    }
}

/// Which trackability condition holds, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trackability {
    /// `(A, Γ)` strictly dense and `H ⊄ Γ`.
    Dense,
    /// `S_{A,Γ} = 1`, `(A, Γ)` strictly balanced, `E_J ⊊ E_Γ`, and `H ⊄ Γ'`.
    Balanced,
    Not(String),
}

impl Trackability {
    pub fn is_trackable(&self) -> bool {
        !matches!(self, Trackability::Not(_))
    }
}

/// Evaluates both trackability conditions. The second depends on the current
/// edge set through `Γ'`, which gains `ab` whenever `φ(a)φ(b)` is an edge.
pub fn trackability(
    h: &ForbiddenGraph,
    pattern: &ExtensionPattern,
    anchor: &Anchor,
    state: &ProcessState,
) -> Result<Trackability> {
    anchor.validate(pattern.anchor().len(), state.n())?;
    let rooted = pattern.rooted();
    let class = classify_pair(h, &rooted)?;
    let gamma_has_h = contains_subgraph(pattern.gamma(), h.graph());
    if class.strictly_dense && !gamma_has_h {
        return Ok(Trackability::Dense);
    }
    let s = pair_scaling_exponent(h, &rooted);
    let mut reasons = Vec::new();
    if !class.strictly_dense {
        reasons.push("(A,Γ) not strictly dense");
    }
    if gamma_has_h {
        reasons.push("Γ contains H");
    }
    if !s.is_zero() {
        reasons.push("S_{A,Γ} != 1");
    }
    if !class.strictly_balanced {
        reasons.push("(A,Γ) not strictly balanced");
    }
    if pattern.e_j() == pattern.e_gamma() {
        reasons.push("E_J = E_Γ");
    }
    if s.is_zero() && class.strictly_balanced && pattern.e_j() < pattern.e_gamma() {
        let a = pattern.anchor();
        let mut extra = Vec::new();
        for x in 0..a.len() {
            for y in x + 1..a.len() {
                if state.is_edge(anchor.0[x], anchor.0[y]) {
                    extra.push((a[x], a[y]));
                }
            }
        }
        let gamma_prime = pattern.gamma().with_edges(&extra)?;
        if !contains_subgraph(&gamma_prime, h.graph()) {
            return Ok(Trackability::Balanced);
        }
        reasons.push("Γ' contains H");
    }
    Ok(Trackability::Not(reasons.join("; ")))
}

pub fn is_trackable(h: &ForbiddenGraph, pattern: &ExtensionPattern, anchor: &Anchor, state: &ProcessState) -> Result<bool> {
    Ok(trackability(h, pattern, anchor, state)?.is_trackable())
}

/// `X_{φ,J,Γ}(i)`: injective maps extending `φ` sending J edges to edges and
/// the other Γ edges to open pairs.
pub fn count_extensions(state: &ProcessState, pattern: &ExtensionPattern, anchor: &Anchor) -> Result<u64> {
    anchor.validate(pattern.anchor().len(), state.n())?;
    Ok(pattern.plan().count(state, &anchor.0))
}

/// `N_{φ,J}`: embeddings of `j` into `G(i)` extending `φ`, with no open-pair constraints.
pub fn count_embeddings(state: &ProcessState, j: &GraphSpec, anchorset: &[usize], anchor: &Anchor) -> Result<u64> {
    let pattern = ExtensionPattern::new(j.clone(), 0..j.edge_count(), anchorset.to_vec())?;
    count_extensions(state, &pattern, anchor)
}

/// Materialises the set of extensions as image vectors.
pub fn enumerate_extensions(
    state: &ProcessState,
    pattern: &ExtensionPattern,
    anchor: &Anchor,
) -> Result<HashSet<Vec<usize>>> {
    anchor.validate(pattern.anchor().len(), state.n())?;
    let mut out = HashSet::new();
    let _ = pattern.plan().for_each(state, &anchor.0, |img| {
        out.insert(img.to_vec());
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// `T = (a, b, c, d)` with `ab != cd` edges of `H`, plus `Γ_T = H∖ab` and
/// `J_T = H∖{ab, cd}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureQuadruple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub gamma: GraphSpec,
    pub j: GraphSpec,
}

impl ClosureQuadruple {
    pub fn pattern(&self) -> ExtensionPattern {
        ExtensionPattern::from_graphs(self.gamma.clone(), &self.j, vec![self.a, self.b])
            .expect("closure pattern is valid")
    }
}

pub fn closure_quadruples(h: &ForbiddenGraph) -> Vec<ClosureQuadruple> {
    let g = h.graph();
    let ordered: Vec<(usize, usize)> = g.edges().iter().flat_map(|&(x, y)| [(x, y), (y, x)]).collect();
    let mut out = Vec::new();
    for &(a, b) in &ordered {
        for &(c, d) in &ordered {
            if (a.min(b), a.max(b)) == (c.min(d), c.max(d)) {
                continue;
            }
            out.push(ClosureQuadruple {
                a,
                b,
                c,
                d,
                gamma: g.without_edges(&[(a, b)]),
                j: g.without_edges(&[(a, b), (c, d)]),
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureIdentity {
    /// Ordered count `2 |C_uv ∩ O(i)|`.
    pub direct: u64,
    /// `aut(H)^{-1} Σ_T X_{φ_T, J_T, Γ_T}(i)`.
    pub formula: Ratio<u64>,
}

impl ClosureIdentity {
    pub fn gap(&self) -> Ratio<u64> {
        self.formula - Ratio::from_integer(self.direct)
    }
}

/// Precompiled plans for repeated closure-identity checks against one `H`.
#[derive(Debug)]
pub struct ClosureIdentityChecker {
    aut: u64,
    plans: Vec<EmbeddingPlan>,
}

impl ClosureIdentityChecker {
    pub fn new(h: &ForbiddenGraph) -> Self {
        let plans = closure_quadruples(h).iter().map(|q| q.pattern().plan()).collect();
        ClosureIdentityChecker {
            aut: h.aut_count(),
            plans,
        }
    }

    pub fn check(&self, state: &ProcessState, u: usize, v: usize) -> Result<ClosureIdentity> {
        let closing = state.closing_set(u, v)?;
        let direct = 2 * closing.iter().filter(|&&(x, y)| state.is_open(x, y)).count() as u64;
        let sum: u64 = self.plans.iter().map(|p| p.count(state, &[u, v])).sum();
        Ok(ClosureIdentity {
            direct,
            formula: Ratio::new(sum, self.aut),
        })
    }
}

/// Compares the direct closing count for `uv` with the extension-variable formula.
pub fn closure_identity_check(state: &ProcessState, u: usize, v: usize) -> Result<ClosureIdentity> {
    ClosureIdentityChecker::new(state.forbidden()).check(state, u, v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Delta {
    pub y_plus: u64,
    pub y_minus: u64,
}

/// Splits the one-step change of an extension variable into created and
/// destroyed extensions. `after` must be `before` plus exactly one step.
pub fn delta_decomposition(
    before: &ProcessState,
    after: &ProcessState,
    pattern: &ExtensionPattern,
    anchor: &Anchor,
) -> Result<Delta> {
    let eb = before.edges();
    let ea = after.edges();
    let adjacent = after.i() == before.i() + 1
        && after.n() == before.n()
        && ea.len() == eb.len() + 1
        && eb.iter().all(|e| ea.binary_search(e).is_ok());
    if !adjacent {
        return Err(Error::Precondition("states are not one step apart".into()));
    }
    let xb = enumerate_extensions(before, pattern, anchor)?;
    let xa = enumerate_extensions(after, pattern, anchor)?;
    Ok(Delta {
        y_plus: xa.difference(&xb).count() as u64,
        y_minus: xb.difference(&xa).count() as u64,
    })
}

/// `|C_uv ∩ C_u'v'|` in unordered pairs.
pub fn closed_overlap(state: &ProcessState, uv: (usize, usize), other: (usize, usize)) -> Result<u64> {
    let norm = |(a, b): (usize, usize)| (a.min(b), a.max(b));
    if norm(uv) == norm(other) {
        return Err(Error::InvalidPair("overlap needs two distinct pairs".into()));
    }
    let a: HashSet<(usize, usize)> = state.closing_set(uv.0, uv.1)?.into_iter().collect();
    let b = state.closing_set(other.0, other.1)?;
    Ok(b.iter().filter(|p| a.contains(p)).count() as u64)
}

/// A named pattern in the tracked catalogue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogueEntry {
    pub id: String,
    pub pattern: ExtensionPattern,
}

/// Tracked patterns for `H`: open pairs, degree, common neighbourhoods of
/// every `d >= 2` with `p^d n > 1`, and every closure pattern up to the
/// symmetry of `H` on its anchored edge.
pub fn catalogue(h: &ForbiddenGraph) -> Vec<CatalogueEntry> {
    let mut out = vec![
        CatalogueEntry {
            id: "Q".into(),
            pattern: ExtensionPattern::open_pairs(),
        },
        CatalogueEntry {
            id: "deg".into(),
            pattern: ExtensionPattern::degree(),
        },
    ];
    let mut d = 2;
    // p^d n > 1  <=>  d * rho < 1
    while (h.rho() * d as i64) < ScalingExponent::integer(1) {
        out.push(CatalogueEntry {
            id: format!("common{d}"),
            pattern: ExtensionPattern::common_neighbours(d),
        });
        d += 1;
    }
    let g = h.graph();
    for (a, b) in h.ordered_edge_orbit_representatives() {
        let ab = (a.min(b), a.max(b));
        for &(c, d) in g.edges() {
            if (c, d) == ab {
                continue;
            }
            let gamma = g.without_edges(&[ab]);
            let j = g.without_edges(&[ab, (c, d)]);
            out.push(CatalogueEntry {
                id: format!("closure_{a}{b}_{c}{d}"),
                pattern: ExtensionPattern::from_graphs(gamma, &j, vec![a, b]).expect("valid closure pattern"),
            });
        }
    }
    out
}

/// One more than the largest vertex or edge count in the catalogue.
pub fn default_v_constant(h: &ForbiddenGraph) -> f64 {
    catalogue(h)
        .iter()
        .map(|e| e.pattern.gamma().vertex_count().max(e.pattern.e_gamma()))
        .max()
        .unwrap_or(1) as f64
        + 1.0
}

/// Observed and predicted value of one (pattern, anchor) pair at a checkpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct TrackSample {
    pub i: u64,
    pub t: f64,
    pub pattern: String,
    pub anchor: usize,
    pub observed: u64,
    pub predicted: f64,
    pub envelope_lo: f64,
    pub envelope_hi: f64,
    pub trackable_now: bool,
}

struct PanelEntry {
    id: String,
    pattern: ExtensionPattern,
    plan: EmbeddingPlan,
    scaling: ScalingExponent,
    anchors: Vec<Anchor>,
}

/// Checkpoint observer that recounts every catalogued pattern on a fixed
/// panel of anchors drawn once at the start.
pub struct Tracker {
    h: ForbiddenGraph,
    params: TrajectoryParams,
    entries: Vec<PanelEntry>,
    samples: Vec<TrackSample>,
}

impl Tracker {
    /// Anchors are drawn from stream 1 of `seed`, so the process trajectory is
    /// unaffected by the panel.
    pub fn new(
        h: &ForbiddenGraph,
        params: TrajectoryParams,
        entries: Vec<CatalogueEntry>,
        panel_size: usize,
        seed: u64,
    ) -> Result<Self> {
        let n = params.n;
        let mut rng = split_rng(seed, 1);
        let mut panel = Vec::with_capacity(entries.len());
        for e in entries {
            let k = e.pattern.anchor().len();
            if k > n {
                return Err(Error::InvalidAnchor(format!("pattern {} needs {k} anchors", e.id)));
            }
            let anchors = if k == 0 {
                vec![Anchor::empty()]
            } else {
                (0..panel_size)
                    .map(|_| Anchor(rand::seq::index::sample(&mut rng, n, k).into_vec()))
                    .collect()
            };
            panel.push(PanelEntry {
                plan: e.pattern.plan(),
                scaling: e.pattern.scaling(h),
                id: e.id,
                pattern: e.pattern,
                anchors,
            });
        }
        Ok(Tracker {
            h: h.clone(),
            params,
            entries: panel,
            samples: Vec::new(),
        })
    }

    pub fn samples(&self) -> &[TrackSample] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<TrackSample> {
        self.samples
    }

    pub fn record(&mut self, state: &ProcessState) -> Result<()> {
        let t = state.t();
        for entry in &self.entries {
            let x = x_of_t(&self.params, entry.pattern.e_gamma(), entry.pattern.e_j(), t);
            let predicted = x * self.params.scale(entry.scaling);
            let (lo, hi) = envelope(&self.params, t, entry.scaling, x);
            for (k, anchor) in entry.anchors.iter().enumerate() {
                let observed = entry.plan.count(state, &anchor.0);
                let trackable_now = trackability(&self.h, &entry.pattern, anchor, state)?.is_trackable();
                self.samples.push(TrackSample {
                    i: state.i(),
                    t,
                    pattern: entry.id.clone(),
                    anchor: k,
                    observed,
                    predicted,
                    envelope_lo: lo,
                    envelope_hi: hi,
                    trackable_now,
                });
            }
        }
        Ok(())
    }
}

impl Observer for Tracker {
    fn observe(&mut self, state: &ProcessState) -> std::result::Result<(), String> {
        self.record(state).map_err(|e| e.to_string())
    }
}

/// A uniformly random non-edge pair, if any exists.
pub fn random_non_edge<R: Rng>(state: &ProcessState, rng: &mut R) -> Option<(usize, usize)> {
    let n = state.n();
    if state.i() as usize >= n * (n - 1) / 2 {
        return None;
    }
    loop {
        let x = rng.gen_range(0..n);
        let y = rng.gen_range(0..n);
        if x != y && !state.is_edge(x, y) {
            return Some((x.min(y), x.max(y)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{run, RunOptions, Stop};

    fn k3() -> ForbiddenGraph {
        ForbiddenGraph::preset("K3").unwrap()
    }

    /// E = {01, 12} on 5 vertices (the 1-based example shifted down).
    fn path_state() -> ProcessState {
        let mut s = ProcessState::new(k3(), 5, 0).unwrap();
        s.add_edge(0, 1).unwrap();
        s.add_edge(1, 2).unwrap();
        s
    }

    fn brute_force_extensions(state: &ProcessState, p: &ExtensionPattern, a: &Anchor) -> u64 {
        // all injective maps, checked against the definition
        let n = state.n();
        let k = p.gamma().vertex_count();
        let j: Vec<(usize, usize)> = p.j_edge_indices().iter().map(|&i| p.gamma().edges()[i]).collect();
        let mut count = 0;
        let mut img = vec![0usize; k];
        fn rec(
            depth: usize,
            k: usize,
            n: usize,
            img: &mut Vec<usize>,
            f: &mut dyn FnMut(&[usize]),
        ) {
            if depth == k {
                f(img);
                return;
            }
            for x in 0..n {
                if img[..depth].contains(&x) {
                    continue;
                }
                img[depth] = x;
                rec(depth + 1, k, n, img, f);
            }
        }
        rec(0, k, n, &mut img, &mut |f: &[usize]| {
            let anchored = p.anchor().iter().zip(&a.0).all(|(&v, &x)| f[v] == x);
            let ok = p.gamma().edges().iter().all(|&(u, v)| {
                if j.contains(&(u, v)) {
                    state.is_edge(f[u], f[v])
                } else {
                    state.is_open(f[u], f[v])
                }
            });
            if anchored && ok {
                count += 1;
            }
        });
        count
    }

    #[test]
    fn extension_count_examples() {
        let fresh = ProcessState::new(k3(), 6, 1).unwrap();
        assert_eq!(count_extensions(&fresh, &ExtensionPattern::degree(), &Anchor(vec![2])).unwrap(), 0);
        assert_eq!(count_extensions(&fresh, &ExtensionPattern::open_pairs(), &Anchor::empty()).unwrap(), 30);

        let mut s = ProcessState::new(k3(), 4, 0).unwrap();
        s.add_edge(0, 1).unwrap();
        let deg = ExtensionPattern::degree();
        assert_eq!(count_extensions(&s, &deg, &Anchor(vec![0])).unwrap(), 1);
        assert_eq!(brute_force_extensions(&s, &deg, &Anchor(vec![0])), 1);
        assert!(count_extensions(&s, &deg, &Anchor(vec![0, 1])).is_err());
        assert!(count_extensions(&s, &deg, &Anchor(vec![9])).is_err());
    }

    #[test]
    fn extension_counts_match_brute_force_on_random_states() {
        let c4 = ForbiddenGraph::preset("C4").unwrap();
        for seed in 0..4 {
            let mut s = ProcessState::new(c4.clone(), 7, seed).unwrap();
            run(&mut s, &RunOptions::new(Stop::MaxSteps(6)), &mut []).unwrap();
            for entry in catalogue(&c4) {
                let k = entry.pattern.anchor().len();
                let anchor = Anchor((0..k).map(|x| (x * 3 + seed as usize) % 7).collect());
                assert_eq!(
                    count_extensions(&s, &entry.pattern, &anchor).unwrap(),
                    brute_force_extensions(&s, &entry.pattern, &anchor),
                    "{} seed {seed}",
                    entry.id
                );
            }
        }
    }

    #[test]
    fn embeddings_basics() {
        let s = path_state();
        let edge = GraphSpec::complete(2);
        assert_eq!(count_embeddings(&s, &edge, &[0], &Anchor(vec![1])).unwrap(), 2);
        // empty J: falling factorial (5-1)(5-2)
        let empty = GraphSpec::empty(3);
        assert_eq!(count_embeddings(&s, &empty, &[0], &Anchor(vec![4])).unwrap(), 12);
        let cherry = GraphSpec::path(3);
        let n_j = count_embeddings(&s, &cherry, &[], &Anchor::empty()).unwrap();
        assert_eq!(n_j, 2);
    }

    #[test]
    fn quadruple_counts() {
        let q = closure_quadruples(&k3());
        assert_eq!(q.len(), 24);
        assert_eq!(closure_quadruples(&ForbiddenGraph::preset("C4").unwrap()).len(), 48);
        let k4 = ForbiddenGraph::preset("K4").unwrap();
        for t in closure_quadruples(&k4) {
            assert_eq!(t.gamma.edge_count(), 5);
            assert_eq!(t.j.edge_count(), 4);
        }
    }

    #[test]
    fn closure_identity_example() {
        let s = path_state();
        let r = closure_identity_check(&s, 1, 3).unwrap();
        assert_eq!(r.direct, 4);
        assert_eq!(r.formula, Ratio::from_integer(4));
        let fresh = ProcessState::new(ForbiddenGraph::preset("C5").unwrap(), 9, 0).unwrap();
        let r = closure_identity_check(&fresh, 0, 1).unwrap();
        assert_eq!((r.direct, r.formula), (0, Ratio::from_integer(0)));
        assert!(closure_identity_check(&s, 0, 1).is_err());
    }

    #[test]
    fn trackability_examples() {
        let h = k3();
        let s = ProcessState::new(h.clone(), 6, 0).unwrap();
        assert_eq!(
            trackability(&h, &ExtensionPattern::open_pairs(), &Anchor::empty(), &s).unwrap(),
            Trackability::Dense
        );
        for name in ["K3", "K4", "C4", "C5"] {
            let h = ForbiddenGraph::preset(name).unwrap();
            let s = ProcessState::new(h.clone(), 8, 0).unwrap();
            for q in closure_quadruples(&h) {
                let got = trackability(&h, &q.pattern(), &Anchor(vec![2, 5]), &s).unwrap();
                assert_eq!(got, Trackability::Balanced, "{name}");
            }
        }
        // Γ = H itself anchored at nothing: strictly dense but contains H
        let h = k3();
        let p = ExtensionPattern::new(GraphSpec::complete(3), [], vec![]).unwrap();
        assert!(!is_trackable(&h, &p, &Anchor::empty(), &s).unwrap());
    }

    #[test]
    fn closure_pattern_untrackable_once_anchor_pair_is_an_edge() {
        let h = k3();
        let mut s = ProcessState::new(h.clone(), 6, 0).unwrap();
        s.add_edge(2, 5).unwrap();
        let q = &closure_quadruples(&h)[0];
        assert!(!is_trackable(&h, &q.pattern(), &Anchor(vec![2, 5]), &s).unwrap());
        assert!(is_trackable(&h, &q.pattern(), &Anchor(vec![2, 4]), &s).unwrap());
    }

    #[test]
    fn delta_examples() {
        let h = ForbiddenGraph::preset("C4").unwrap();
        let mut s = ProcessState::new(h, 9, 5).unwrap();
        for _ in 0..12 {
            let before = s.clone();
            if s.step() == crate::StepOutcome::Terminated {
                break;
            }
            for (p, a) in [
                (ExtensionPattern::open_pairs(), Anchor::empty()),
                (ExtensionPattern::degree(), Anchor(vec![3])),
                (ExtensionPattern::common_neighbours(2), Anchor(vec![0, 4])),
            ] {
                let d = delta_decomposition(&before, &s, &p, &a).unwrap();
                let xb = count_extensions(&before, &p, &a).unwrap() as i64;
                let xa = count_extensions(&s, &p, &a).unwrap() as i64;
                assert_eq!(xa - xb, d.y_plus as i64 - d.y_minus as i64);
                if p.e_j() == 0 {
                    assert_eq!(d.y_plus, 0);
                }
                if p.e_j() == p.e_gamma() {
                    assert_eq!(d.y_minus, 0);
                }
            }
        }
        let a = ProcessState::new(ForbiddenGraph::preset("C4").unwrap(), 9, 5).unwrap();
        assert!(delta_decomposition(&a, &a, &ExtensionPattern::degree(), &Anchor(vec![0])).is_err());
    }

    #[test]
    fn overlap_examples() {
        let fresh = ProcessState::new(k3(), 6, 0).unwrap();
        assert_eq!(closed_overlap(&fresh, (0, 1), (2, 3)).unwrap(), 0);
        // 1-based E = {12, 23, 34} -> 0-based {01, 12, 23}
        let mut s = ProcessState::new(k3(), 5, 0).unwrap();
        for (a, b) in [(0, 1), (1, 2), (2, 3)] {
            s.add_edge(a, b).unwrap();
        }
        let c1: HashSet<_> = s.closing_set(0, 3).unwrap().into_iter().collect();
        let c2: HashSet<_> = s.closing_set(1, 3).unwrap().into_iter().collect();
        let want = c1.intersection(&c2).count() as u64;
        assert_eq!(closed_overlap(&s, (0, 3), (1, 3)).unwrap(), want);
        assert!(closed_overlap(&s, (0, 3), (3, 0)).is_err());
        assert!(closed_overlap(&s, (0, 1), (0, 3)).is_err());
    }

    #[test]
    fn catalogue_contents() {
        let k3c = catalogue(&k3());
        let ids: Vec<&str> = k3c.iter().map(|e| e.id.as_str()).collect();
        // rho = 1/2 for K3, so no d >= 2 is in range
        assert_eq!(ids, vec!["Q", "deg", "closure_01_02", "closure_01_12"]);
        let k4 = ForbiddenGraph::preset("K4").unwrap();
        assert!(catalogue(&k4).iter().any(|e| e.id == "common2"));
        assert!(!catalogue(&k4).iter().any(|e| e.id == "common3"));
        assert_eq!(default_v_constant(&k4), 6.0);
    }

    #[test]
    fn pattern_text_round_trip() {
        let q = &closure_quadruples(&ForbiddenGraph::preset("C5").unwrap())[3];
        let p = q.pattern();
        assert_eq!(ExtensionPattern::parse_text(&p.to_text()).unwrap(), p);
        let err = ExtensionPattern::parse_text("v 3\ne 0 1\nJ 0 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(ExtensionPattern::parse_text("v 3\ne 0 1\nA 0 1\n").is_err());
    }

    #[test]
    fn scaling_of_catalogue_patterns() {
        let h = ForbiddenGraph::preset("K4").unwrap();
        for e in catalogue(&h) {
            let s = e.pattern.scaling(&h);
            let want = match e.id.as_str() {
                "Q" => ScalingExponent::integer(2),
                "deg" => ScalingExponent::integer(1) - h.rho(),
                "common2" => ScalingExponent::integer(1) - h.rho() * 2,
                _ => h.rho(),
            };
            assert_eq!(s, want, "{}", e.id);
        }
    }
}
