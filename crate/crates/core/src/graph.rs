//! Small simple graphs: representation, text format, presets, automorphisms
//! and (non-induced) subgraph containment.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest vertex count for which automorphisms are enumerated.
pub const AUTOMORPHISM_CAP: usize = 10;

/// A finite simple graph on vertices `0..vertex_count`.
///
/// Edges are stored with the smaller endpoint first and the list is sorted,
/// so two specs describing the same labelled graph compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphSpec {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphSpec {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("vertex count must be positive".into()));
        }
        let mut out = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {vertex_count} vertices"
                )));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge {:?}", w[0])));
        }
        Ok(GraphSpec {
            vertex_count,
            edges: out,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        GraphSpec::new(vertex_count, []).expect("positive vertex count")
    }

    pub fn complete(s: usize) -> Self {
        let edges = (0..s).flat_map(|v| (0..v).map(move |u| (u, v)));
        GraphSpec::new(s, edges).expect("valid complete graph")
    }

    pub fn cycle(l: usize) -> Self {
        assert!(l >= 3, "cycle needs at least 3 vertices");
        GraphSpec::new(l, (0..l).map(|i| (i, (i + 1) % l))).expect("valid cycle")
    }

    pub fn path(k: usize) -> Self {
        GraphSpec::new(k, (1..k).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn complete_bipartite(r: usize, s: usize) -> Self {
        let edges = (0..r).flat_map(|a| (0..s).map(move |b| (a, r + b)));
        GraphSpec::new(r + s, edges).expect("valid complete bipartite graph")
    }

    /// Star with one centre (vertex 0) and `d` leaves.
    pub fn star(d: usize) -> Self {
        GraphSpec::new(d + 1, (1..=d).map(|v| (0, v))).expect("valid star")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// Neighbour sets as bitmasks. Requires at most 64 vertices.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.vertex_count <= 64, "mask adjacency needs at most 64 vertices");
        let mut adj = vec![0u64; self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    /// Number of edges with both endpoints in the vertex mask.
    pub fn edges_within_mask(&self, mask: u64) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .count()
    }

    /// Same vertex set, with the listed edges removed.
    pub fn without_edges(&self, removed: &[(usize, usize)]) -> GraphSpec {
        let removed: Vec<(usize, usize)> = removed.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        GraphSpec {
            vertex_count: self.vertex_count,
            edges: self.edges.iter().copied().filter(|e| !removed.contains(e)).collect(),
        }
    }

    /// Same vertex set, with extra edges added (duplicates are merged).
    pub fn with_edges(&self, added: &[(usize, usize)]) -> Result<GraphSpec> {
        let mut all = self.edges.clone();
        for &(a, b) in added {
            let e = (a.min(b), a.max(b));
            if !all.contains(&e) {
                all.push(e);
            }
        }
        GraphSpec::new(self.vertex_count, all)
    }

    /// Disjoint union with `k` isolated vertices.
    pub fn with_isolated(&self, k: usize) -> GraphSpec {
        GraphSpec {
            vertex_count: self.vertex_count + k,
            edges: self.edges.clone(),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_without(None)
    }

    fn is_connected_without(&self, skip: Option<usize>) -> bool {
        let n = self.vertex_count;
        let start = match (0..n).find(|&v| Some(v) != skip) {
            Some(s) => s,
            None => return true,
        };
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            if Some(a) != skip && Some(b) != skip {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..n).all(|v| seen[v] || Some(v) == skip)
    }

    /// Connected with at least three vertices and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        self.vertex_count >= 3
            && self.is_connected()
            && (0..self.vertex_count).all(|v| self.is_connected_without(Some(v)))
    }

    /// Parses the line-oriented text format: `v <count>` then `e <u> <v>` per edge.
    /// Blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        Self::parse_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }

    pub(crate) fn parse_lines<'a>(lines: impl IntoIterator<Item = (usize, &'a str)>) -> Result<Self> {
        let mut count: Option<usize> = None;
        let mut edges = Vec::new();
        let mut last_line = 0;
        for (line, raw) in lines {
            last_line = line;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line, msg };
            let mut parts = text.split_whitespace();
            let tag = parts.next().unwrap_or_default();
            let nums: Vec<usize> = parts
                .map(|p| p.parse::<usize>().map_err(|e| err(format!("bad integer {p:?}: {e}"))))
                .collect::<Result<_>>()?;
            match tag {
                "v" => {
                    if count.is_some() {
                        return Err(err("duplicate `v` line".into()));
                    }
                    if nums.len() != 1 || nums[0] == 0 {
                        return Err(err("expected `v <positive count>`".into()));
                    }
                    count = Some(nums[0]);
                }
                "e" => {
                    let n = count.ok_or_else(|| err("`e` before `v`".into()))?;
                    if nums.len() != 2 {
                        return Err(err("expected `e <u> <v>`".into()));
                    }
                    let (a, b) = (nums[0], nums[1]);
                    if a == b || a >= n || b >= n {
                        return Err(err(format!("invalid edge ({a}, {b}) for {n} vertices")));
                    }
                    let e = (a.min(b), a.max(b));
                    if edges.contains(&e) {
                        return Err(err(format!("duplicate edge ({a}, {b})")));
                    }
                    edges.push(e);
                }
                other => return Err(err(format!("unknown directive {other:?}"))),
            }
        }
        let n = count.ok_or(Error::Parse {
            line: last_line.max(1),
            msg: "missing `v <count>` line".into(),
        })?;
        GraphSpec::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("v {}\n", self.vertex_count);
        for &(a, b) in &self.edges {
            s.push_str(&format!("e {a} {b}\n"));
        }
        s
    }

    /// Parses a named preset: `K<s>`, `C<l>`, `K<r>,<s>`, `P<k>` (path on k
    /// vertices), optionally followed by `+<k>` for k isolated vertices.
    pub fn preset(name: &str) -> Result<Self> {
        let bad = || Error::InvalidGraph(format!("unknown preset {name:?}"));
        let (base, extra) = match name.trim().split_once('+') {
            Some((b, k)) => (b, k.parse::<usize>().map_err(|_| bad())?),
            None => (name.trim(), 0),
        };
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let g = if let Some(rest) = base.strip_prefix('K') {
            match rest.split_once(',') {
                Some((r, s)) => {
                    let (r, s) = (num(r)?, num(s)?);
                    if r == 0 || s == 0 {
                        return Err(bad());
                    }
                    GraphSpec::complete_bipartite(r, s)
                }
                None => {
                    let s = num(rest)?;
                    if s == 0 {
                        return Err(bad());
                    }
                    GraphSpec::complete(s)
                }
            }
        } else if let Some(rest) = base.strip_prefix('C') {
            let l = num(rest)?;
            if l < 3 {
                return Err(bad());
            }
            GraphSpec::cycle(l)
        } else if let Some(rest) = base.strip_prefix('P') {
            let k = num(rest)?;
            if k == 0 {
                return Err(bad());
            }
            GraphSpec::path(k)
        } else {
            return Err(bad());
        };
        Ok(g.with_isolated(extra))
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v={} e=[", self.vertex_count)?;
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    /// Accepts either a preset name or the full text format.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('v') || s.contains('\n') {
            GraphSpec::parse_text(s)
        } else {
            GraphSpec::preset(s)
        }
    }
}

/// All automorphisms of `g` as vertex permutations.
pub fn automorphisms(g: &GraphSpec) -> Result<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    if n > AUTOMORPHISM_CAP {
        return Err(Error::SizeCap {
            what: "automorphism enumeration",
            limit: AUTOMORPHISM_CAP,
            actual: n,
        });
    }
    let adj = g.adjacency_masks();
    let deg = g.degrees();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = 0u64;
    extend_automorphism(&adj, &deg, 0, &mut perm, &mut used, &mut out);
    Ok(out)
}

fn extend_automorphism(
    adj: &[u64],
    deg: &[usize],
    v: usize,
    perm: &mut [usize],
    used: &mut u64,
    out: &mut Vec<Vec<usize>>,
) {
    let n = adj.len();
    if v == n {
        out.push(perm.to_vec());
        return;
    }
    for img in 0..n {
        if *used >> img & 1 == 1 || deg[img] != deg[v] {
            continue;
        }
        // adjacency to earlier vertices must be preserved both ways
        let ok = (0..v).all(|w| (adj[v] >> w & 1) == (adj[img] >> perm[w] & 1));
        if !ok {
            continue;
        }
        perm[v] = img;
        *used |= 1 << img;
        extend_automorphism(adj, deg, v + 1, perm, used, out);
        *used &= !(1 << img);
        perm[v] = usize::MAX;
    }
}

/// Number of edge-preserving bijections of `g` onto itself.
pub fn automorphism_count(g: &GraphSpec) -> Result<u64> {
    Ok(automorphisms(g)?.len() as u64)
}

/// Dense bitset adjacency for host graphs of arbitrary size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitAdjacency {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    degree: Vec<u32>,
}

impl BitAdjacency {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitAdjacency {
            n,
            words,
            bits: vec![0; n * words],
            degree: vec![0; n],
        }
    }

    pub fn from_graph(g: &GraphSpec) -> Self {
        let mut b = BitAdjacency::new(g.vertex_count());
        for &(u, v) in g.edges() {
            b.add_edge(u, v);
        }
        b
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v] as usize
    }

    /// Returns false if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if self.has_edge(u, v) {
            return false;
        }
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
        self.degree[u] += 1;
        self.degree[v] += 1;
        true
    }

    /// Returns false if the edge was absent.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        self.bits[u * self.words + v / 64] &= !(1 << (v % 64));
        self.bits[v * self.words + u / 64] &= !(1 << (u % 64));
        self.degree[u] -= 1;
        self.degree[v] -= 1;
        true
    }
}

/// True iff `g` contains `h` as a (not necessarily induced) subgraph.
pub fn contains_subgraph(g: &GraphSpec, h: &GraphSpec) -> bool {
    contains_in_host(&BitAdjacency::from_graph(g), h)
}

/// Same as [`contains_subgraph`] against a bitset host.
///
/// Plain backtracking over injective maps, with degree pruning and a vertex
/// order that places neighbours of already-mapped vertices first.
pub fn contains_in_host(host: &BitAdjacency, h: &GraphSpec) -> bool {
    if h.vertex_count() > host.vertex_count() {
        return false;
    }
    if h.edge_count() == 0 {
        return true;
    }
    let m = Matcher::new(h, &[]);
    let mut image = vec![usize::MAX; h.vertex_count()];
    let mut used = vec![false; host.vertex_count()];
    m.search(host, 0, &mut image, &mut used)
}

/// Finds copies of `h` that use a given host edge, by pinning each ordered
/// edge of `h` onto it in turn.
#[derive(Clone, Debug)]
pub struct EdgeRootedMatcher {
    k: usize,
    rooted: Vec<(usize, usize, Matcher)>,
}

impl EdgeRootedMatcher {
    pub fn new(h: &GraphSpec) -> Self {
        let rooted = h
            .edges()
            .iter()
            .flat_map(|&(a, b)| [(a, b), (b, a)])
            .map(|(a, b)| (a, b, Matcher::new(h, &[a, b])))
            .collect();
        EdgeRootedMatcher {
            k: h.vertex_count(),
            rooted,
        }
    }

    /// True iff some copy of `h` in `host` maps an edge onto `xy`, which must
    /// be an edge of `host`.
    pub fn contains_through(&self, host: &BitAdjacency, x: usize, y: usize) -> bool {
        debug_assert!(host.has_edge(x, y));
        if self.k > host.vertex_count() {
            return false;
        }
        let mut image = vec![usize::MAX; self.k];
        let mut used = vec![false; host.vertex_count()];
        used[x] = true;
        used[y] = true;
        self.rooted.iter().any(|(a, b, m)| {
            if host.degree(x) < m.hdeg[*a] || host.degree(y) < m.hdeg[*b] {
                return false;
            }
            image[*a] = x;
            image[*b] = y;
            let found = m.search(host, 2, &mut image, &mut used);
            image[*a] = usize::MAX;
            image[*b] = usize::MAX;
            found
        })
    }
}

#[derive(Clone, Debug)]
struct Matcher {
    order: Vec<usize>,
    /// Earlier neighbours of each vertex in the order.
    back: Vec<Vec<usize>>,
    hdeg: Vec<usize>,
}

impl Matcher {
    fn new(h: &GraphSpec, prefix: &[usize]) -> Self {
        let order = order_from(h, prefix);
        let hadj = adjacency_lists(h);
        let mut pos = vec![usize::MAX; h.vertex_count()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let back = order
            .iter()
            .map(|&v| hadj[v].iter().copied().filter(|&w| pos[w] < pos[v]).collect())
            .collect();
        Matcher {
            order,
            back,
            hdeg: h.degrees(),
        }
    }

    fn search(&self, host: &BitAdjacency, depth: usize, image: &mut [usize], used: &mut [bool]) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        let need = self.hdeg[v];
        let back = &self.back[depth];
        let try_candidate = |x: usize, image: &mut [usize], used: &mut [bool]| -> bool {
            if used[x] || host.degree(x) < need {
                return false;
            }
            if !back.iter().all(|&w| host.has_edge(image[w], x)) {
                return false;
            }
            image[v] = x;
            used[x] = true;
            let found = self.search(host, depth + 1, image, used);
            used[x] = false;
            image[v] = usize::MAX;
            found
        };
        if let Some(&anchor) = back.first() {
            let row = host.row(image[anchor]);
            for (wi, &word) in row.iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let x = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    if try_candidate(x, image, used) {
                        return true;
                    }
                }
            }
            false
        } else {
            (0..host.vertex_count()).any(|x| try_candidate(x, image, used))
        }
    }
}

fn adjacency_lists(h: &GraphSpec) -> Vec<Vec<usize>> {
    let mut a = vec![Vec::new(); h.vertex_count()];
    for &(x, y) in h.edges() {
        a[x].push(y);
        a[y].push(x);
    }
    a
}

/// Vertex order in which each vertex, where possible, has a neighbour among its
/// predecessors; ties go to the vertex with most earlier neighbours, then
/// highest degree, then smallest index.
pub fn connectivity_order(h: &GraphSpec) -> Vec<usize> {
    order_from(h, &[])
}

/// [`connectivity_order`] continued from a fixed prefix.
fn order_from(h: &GraphSpec, prefix: &[usize]) -> Vec<usize> {
    let k = h.vertex_count();
    let adj = adjacency_lists(h);
    let deg = h.degrees();
    let mut placed = vec![false; k];
    let mut order = Vec::with_capacity(k);
    for &v in prefix {
        placed[v] = true;
        order.push(v);
    }
    while order.len() < k {
        let best = (0..k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let back = adj[v].iter().filter(|&&w| placed[w]).count();
                (back, deg[v], std::cmp::Reverse(v))
            })
            .expect("unplaced vertex exists");
        placed[best] = true;
        order.push(best);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_storage() {
        let g = GraphSpec::new(3, [(2, 1), (0, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (1, 2)]);
        assert!(GraphSpec::new(3, [(1, 1)]).is_err());
        assert!(GraphSpec::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(GraphSpec::new(3, [(0, 3)]).is_err());
        assert!(GraphSpec::new(0, []).is_err());
    }

    #[test]
    fn text_format_round_trip_and_errors() {
        let g = GraphSpec::cycle(5);
        assert_eq!(GraphSpec::parse_text(&g.to_text()).unwrap(), g);
        let err = GraphSpec::parse_text("v 3\ne 0 1\ne 0 7\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = GraphSpec::parse_text("e 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(GraphSpec::parse_text("# nothing\n").is_err());
        let g = GraphSpec::parse_text("# triangle\nv 3\n\ne 0 1 # first\ne 1 2\ne 2 0\n").unwrap();
        assert_eq!(g, GraphSpec::complete(3));
    }

    #[test]
    fn presets() {
        assert_eq!(GraphSpec::preset("K5").unwrap().edge_count(), 10);
        assert_eq!(GraphSpec::preset("C7").unwrap().edge_count(), 7);
        let k23 = GraphSpec::preset("K2,3").unwrap();
        assert_eq!((k23.vertex_count(), k23.edge_count()), (5, 6));
        let k4i = GraphSpec::preset("K4+1").unwrap();
        assert_eq!((k4i.vertex_count(), k4i.edge_count()), (5, 6));
        assert_eq!(GraphSpec::preset("P4").unwrap().edge_count(), 3);
        for bad in ["X3", "C2", "K", "K0", "K3,x", ""] {
            assert!(GraphSpec::preset(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphism_count(&GraphSpec::complete(3)).unwrap(), 6);
        assert_eq!(automorphism_count(&GraphSpec::cycle(5)).unwrap(), 10);
        assert_eq!(automorphism_count(&GraphSpec::complete_bipartite(2, 3)).unwrap(), 12);
        assert_eq!(automorphism_count(&GraphSpec::cycle(4)).unwrap(), 8);
        assert_eq!(automorphism_count(&GraphSpec::path(4)).unwrap(), 2);
        assert!(matches!(
            automorphism_count(&GraphSpec::complete(11)),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn containment_examples() {
        assert!(!contains_subgraph(&GraphSpec::cycle(5), &GraphSpec::complete(3)));
        assert!(contains_subgraph(&GraphSpec::complete(4), &GraphSpec::cycle(4)));
        let edge = GraphSpec::complete(2);
        assert!(!contains_subgraph(&GraphSpec::empty(5), &edge));
        assert!(contains_subgraph(&GraphSpec::path(2).with_isolated(3), &edge));
        assert!(!contains_subgraph(&GraphSpec::complete(3), &GraphSpec::complete(4)));
        assert!(contains_subgraph(&GraphSpec::complete(6), &GraphSpec::complete_bipartite(3, 3)));
    }

    #[test]
    fn connectivity() {
        assert!(GraphSpec::cycle(5).is_two_connected());
        assert!(!GraphSpec::path(4).is_two_connected());
        let bowtie = GraphSpec::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(bowtie.is_connected() && !bowtie.is_two_connected());
        assert!(!GraphSpec::complete(2).with_isolated(1).is_connected());
    }

    #[test]
    fn edge_rooted_matcher_agrees_with_full_search() {
        let h = GraphSpec::cycle(4);
        let m = EdgeRootedMatcher::new(&h);
        // all graphs on 6 vertices with every 7th edge mask
        let pairs: Vec<(usize, usize)> = (1..6).flat_map(|b| (0..b).map(move |a| (a, b))).collect();
        for mask in (0u32..1 << pairs.len()).step_by(7) {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            let g = GraphSpec::new(6, edges.clone()).unwrap();
            let host = BitAdjacency::from_graph(&g);
            for &(x, y) in &edges {
                let without = BitAdjacency::from_graph(&g.without_edges(&[(x, y)]));
                let expected = contains_in_host(&host, &h) && !contains_in_host(&without, &h);
                if !contains_in_host(&without, &h) {
                    assert_eq!(m.contains_through(&host, x, y), expected, "{g} via {x}-{y}");
                }
            }
        }
    }
}
