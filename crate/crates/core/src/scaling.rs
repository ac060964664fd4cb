//! Scaling arithmetic for a fixed forbidden graph `H`: the density exponent,
//! `S_Γ` and `S_{A,Γ}` exponents, strict 2-balancedness, pair classification
//! and extension series.
//!
//! Vertex subsets of pattern graphs are `u64` masks; all scans here are
//! exhaustive and capped at [`SUBGRAPH_SCAN_CAP`] vertices.

use crate::error::{Error, Result};
use crate::exponent::ScalingExponent;
use crate::graph::{automorphisms, contains_subgraph, GraphSpec};

/// Largest pattern for exhaustive subset scans.
pub const SUBGRAPH_SCAN_CAP: usize = 12;

fn check_scan_cap(what: &'static str, g: &GraphSpec) -> Result<()> {
    if g.vertex_count() > SUBGRAPH_SCAN_CAP {
        return Err(Error::SizeCap {
            what,
            limit: SUBGRAPH_SCAN_CAP,
            actual: g.vertex_count(),
        });
    }
    Ok(())
}

fn full_mask(k: usize) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn mask_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

fn mask_of(vertices: &[usize]) -> u64 {
    vertices.iter().fold(0, |m, &v| m | 1 << v)
}

/// Supersets `C` of `base` within `universe`, excluding `base` itself.
fn strict_supersets(base: u64, universe: u64) -> impl Iterator<Item = u64> {
    let free = universe & !base;
    // enumerate non-empty submasks of `free`
    let mut sub = free;
    let mut done = free == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = base | sub;
        if sub == 0 {
            done = true;
            return None;
        }
        sub = (sub - 1) & free;
        if sub == 0 {
            done = true;
        }
        Some(out)
    })
}

/// `rho = (v_h - 2) / (e_h - 1)`, so that `p = n^{-rho}`.
pub fn p_exponent(h: &GraphSpec) -> Result<ScalingExponent> {
    if h.vertex_count() < 3 {
        return Err(Error::Degenerate(format!(
            "forbidden graph needs at least 3 vertices, got {}",
            h.vertex_count()
        )));
    }
    if h.edge_count() <= 1 {
        return Err(Error::Degenerate(format!(
            "forbidden graph needs at least 2 edges, got {}",
            h.edge_count()
        )));
    }
    Ok(ScalingExponent::new(
        h.vertex_count() as i64 - 2,
        h.edge_count() as i64 - 1,
    ))
}

/// Exhaustive check that `(e_g - 1)/(v_g - 2)` strictly exceeds the same ratio
/// for every proper subgraph on at least three vertices.
pub fn is_strictly_two_balanced(g: &GraphSpec) -> Result<bool> {
    check_scan_cap("strict 2-balancedness scan", g)?;
    let v = g.vertex_count() as i64;
    let e = g.edge_count() as i64;
    if v < 3 || e < 3 {
        return Ok(false);
    }
    let all = full_mask(g.vertex_count());
    // spanning proper subgraphs lose edges and so have smaller ratio; only
    // induced subgraphs on proper vertex subsets can compete
    for mask in 0..all {
        let size = mask.count_ones() as i64;
        if size < 3 {
            continue;
        }
        let ek = g.edges_within_mask(mask) as i64;
        // (e-1)/(v-2) > (ek-1)/(size-2)
        if (e - 1) * (size - 2) <= (ek - 1) * (v - 2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The forbidden graph `H`, validated strictly 2-balanced, with its
/// automorphism group and density exponent.
#[derive(Clone, Debug)]
pub struct ForbiddenGraph {
    graph: GraphSpec,
    automorphisms: Vec<Vec<usize>>,
    rho: ScalingExponent,
}

impl ForbiddenGraph {
    pub fn new(graph: GraphSpec) -> Result<Self> {
        if graph.vertex_count() < 3 || graph.edge_count() < 3 {
            return Err(Error::NotStrictlyTwoBalanced(format!(
                "needs at least 3 vertices and 3 edges ({graph})"
            )));
        }
        if !is_strictly_two_balanced(&graph)? {
            return Err(Error::NotStrictlyTwoBalanced(graph.to_string()));
        }
        assert!(graph.min_degree() >= 2, "strictly 2-balanced graph with a vertex of degree < 2");
        assert!(graph.is_two_connected(), "strictly 2-balanced graph that is not 2-connected");
        let automorphisms = automorphisms(&graph)?;
        let rho = p_exponent(&graph)?;
        Ok(ForbiddenGraph {
            graph,
            automorphisms,
            rho,
        })
    }

    pub fn preset(name: &str) -> Result<Self> {
        ForbiddenGraph::new(GraphSpec::preset(name)?)
    }

    pub fn graph(&self) -> &GraphSpec {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn aut_count(&self) -> u64 {
        self.automorphisms.len() as u64
    }

    pub fn automorphisms(&self) -> &[Vec<usize>] {
        &self.automorphisms
    }

    /// `p = n^{-rho}`.
    pub fn rho(&self) -> ScalingExponent {
        self.rho
    }

    /// Numeric edge density `p` at `n`.
    pub fn p(&self, n: usize) -> f64 {
        (-self.rho).eval(n as f64)
    }

    /// Time scale `s = p n^2`.
    pub fn time_scale(&self, n: usize) -> f64 {
        (ScalingExponent::integer(2) - self.rho).eval(n as f64)
    }

    /// One representative ordered edge `(a, b)` per orbit of the automorphism
    /// group acting on ordered edges.
    pub fn ordered_edge_orbit_representatives(&self) -> Vec<(usize, usize)> {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let mut reps = Vec::new();
        for &(x, y) in self.graph.edges() {
            for (a, b) in [(x, y), (y, x)] {
                if seen.contains(&(a, b)) {
                    continue;
                }
                reps.push((a, b));
                for sigma in &self.automorphisms {
                    let img = (sigma[a], sigma[b]);
                    if !seen.contains(&img) {
                        seen.push(img);
                    }
                }
            }
        }
        reps
    }
}

/// `log_n S_g = v_g - e_g * rho`.
pub fn scaling_exponent(h: &ForbiddenGraph, g: &GraphSpec) -> ScalingExponent {
    ScalingExponent::integer(g.vertex_count() as i64) - h.rho() * g.edge_count() as i64
}

/// A pattern graph with a distinguished anchor vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedPattern {
    gamma: GraphSpec,
    anchor: Vec<usize>,
}

impl RootedPattern {
    /// The anchor is sorted and deduplicated; it must lie inside `V_Γ`.
    pub fn new(gamma: GraphSpec, anchor: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut anchor: Vec<usize> = anchor.into_iter().collect();
        anchor.sort_unstable();
        anchor.dedup();
        if let Some(&bad) = anchor.iter().find(|&&a| a >= gamma.vertex_count()) {
            return Err(Error::InvalidAnchor(format!(
                "anchor vertex {bad} outside a graph on {} vertices",
                gamma.vertex_count()
            )));
        }
        if gamma.vertex_count() > 64 {
            return Err(Error::SizeCap {
                what: "rooted pattern",
                limit: 64,
                actual: gamma.vertex_count(),
            });
        }
        Ok(RootedPattern { gamma, anchor })
    }

    pub fn gamma(&self) -> &GraphSpec {
        &self.gamma
    }

    pub fn anchor(&self) -> &[usize] {
        &self.anchor
    }

    pub fn anchor_mask(&self) -> u64 {
        mask_of(&self.anchor)
    }

    pub fn is_anchor_independent(&self) -> bool {
        self.gamma.edges_within_mask(self.anchor_mask()) == 0
    }
}

/// `log_n S_{B,Γ[C]}` for vertex masks `B ⊆ C`.
fn rel_exponent(h: &ForbiddenGraph, g: &GraphSpec, b: u64, c: u64) -> ScalingExponent {
    debug_assert_eq!(b & !c, 0);
    let dv = (c.count_ones() - b.count_ones()) as i64;
    let de = (g.edges_within_mask(c) - g.edges_within_mask(b)) as i64;
    ScalingExponent::integer(dv) - h.rho() * de
}

/// `log_n S_{A,Γ} = (v_Γ - |A|) - (e_Γ - e_{Γ[A]}) rho`. The anchor need not be
/// independent here.
pub fn pair_scaling_exponent(h: &ForbiddenGraph, pattern: &RootedPattern) -> ScalingExponent {
    let g = pattern.gamma();
    rel_exponent(h, g, pattern.anchor_mask(), full_mask(g.vertex_count()))
}

/// `(B, Γ)` strictly balanced: `S_{C,Γ} < 1` for every `B ⊊ C ⊊ V_Γ`.
fn strictly_balanced_from(h: &ForbiddenGraph, g: &GraphSpec, base: u64) -> bool {
    let all = full_mask(g.vertex_count());
    strict_supersets(base, all)
        .filter(|&c| c != all)
        .all(|c| rel_exponent(h, g, c, all).is_negative())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub strictly_balanced: bool,
    pub dense: bool,
    pub strictly_dense: bool,
}

/// Classifies `(A, Γ)`; the anchor must be independent.
pub fn classify_pair(h: &ForbiddenGraph, pattern: &RootedPattern) -> Result<PairClass> {
    let g = pattern.gamma();
    check_scan_cap("pair classification", g)?;
    if !pattern.is_anchor_independent() {
        return Err(Error::InvalidAnchor("anchor is not an independent set".into()));
    }
    let a = pattern.anchor_mask();
    let all = full_mask(g.vertex_count());
    let strictly_balanced = strictly_balanced_from(h, g, a);
    let strictly_dense = strict_supersets(a, all).all(|b| rel_exponent(h, g, a, b).is_positive());
    let series = extension_series(h, pattern)?;
    let dense = series
        .step_exponents()
        .first()
        .is_none_or(|s| !s.is_negative());
    Ok(PairClass {
        strictly_balanced,
        dense,
        strictly_dense,
    })
}

/// Nested decomposition `A = B_0 ⊊ B_1 ⊊ … ⊊ B_d = V_Γ` into strictly balanced
/// steps, with `step_exponents[i] = log_n S_{B_i, Γ[B_{i+1}]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSeries {
    sets: Vec<u64>,
    step_exponents: Vec<ScalingExponent>,
}

impl ExtensionSeries {
    pub fn len(&self) -> usize {
        self.step_exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.step_exponents.is_empty()
    }

    pub fn sets(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|&m| mask_vertices(m)).collect()
    }

    pub fn set_masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn step_exponents(&self) -> &[ScalingExponent] {
        &self.step_exponents
    }

    pub fn total(&self) -> ScalingExponent {
        self.step_exponents.iter().copied().sum()
    }
}

/// Builds the extension series. When `(B_i, Γ)` is not strictly balanced the
/// next set minimises `S_{B_i,Γ[C]}` over `B_i ⊊ C ⊊ V_Γ`; among inclusion-minimal
/// minimisers the lexicographically smallest vertex list wins.
pub fn extension_series(h: &ForbiddenGraph, pattern: &RootedPattern) -> Result<ExtensionSeries> {
    let g = pattern.gamma();
    check_scan_cap("extension series", g)?;
    let all = full_mask(g.vertex_count());
    let mut sets = vec![pattern.anchor_mask()];
    let mut steps = Vec::new();
    loop {
        let cur = *sets.last().expect("non-empty");
        if cur == all {
            break;
        }
        let next = if strictly_balanced_from(h, g, cur) {
            all
        } else {
            let candidates: Vec<u64> = strict_supersets(cur, all).filter(|&c| c != all).collect();
            let best = candidates
                .iter()
                .map(|&c| rel_exponent(h, g, cur, c))
                .min()
                .expect("a set that is not strictly balanced has intermediate sets");
            let minimisers: Vec<u64> = candidates
                .into_iter()
                .filter(|&c| rel_exponent(h, g, cur, c) == best)
                .collect();
            minimisers
                .iter()
                .copied()
                .filter(|&c| !minimisers.iter().any(|&d| d != c && d & !c == 0))
                .min_by_key(|&c| mask_vertices(c))
                .expect("some minimiser is inclusion-minimal")
        };
        steps.push(rel_exponent(h, g, cur, next));
        sets.push(next);
    }
    Ok(ExtensionSeries {
        sets,
        step_exponents: steps,
    })
}

/// Convenience: whether `g` contains the forbidden graph.
pub fn contains_forbidden(h: &ForbiddenGraph, g: &GraphSpec) -> bool {
    contains_subgraph(g, h.graph())
}
