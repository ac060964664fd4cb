//! Anchored backtracking search for injective maps of a small pattern into a
//! host graph, where each pattern edge carries a constraint on the image pair.

use std::ops::ControlFlow;

/// Read access to a host graph with pair statuses.
pub trait Host {
    fn vertex_count(&self) -> usize;
    fn is_edge(&self, x: usize, y: usize) -> bool;
    fn is_open(&self, x: usize, y: usize) -> bool;
    fn neighbors(&self, x: usize) -> &[u32];

    /// Adjacency row of `x` as a bitset over all vertices, when available.
    fn edge_row(&self, _x: usize) -> Option<&[u64]> {
        None
    }

    /// Open-pair row of `x` as a bitset, when available.
    fn open_row(&self, _x: usize) -> Option<&[u64]> {
        None
    }
}

/// What the image of a pattern edge must be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    Edge,
    Open,
    NonEdge,
}

impl Constraint {
    #[inline]
    fn holds<H: Host + ?Sized>(self, host: &H, x: usize, y: usize) -> bool {
        match self {
            Constraint::Edge => host.is_edge(x, y),
            Constraint::Open => host.is_open(x, y),
            Constraint::NonEdge => !host.is_edge(x, y),
        }
    }
}

#[derive(Clone, Debug)]
struct Slot {
    vertex: usize,
    /// positions of earlier slots joined by an `Edge` constraint
    edge_back: Vec<usize>,
    /// other constraints to earlier slots
    other_back: Vec<(usize, Constraint)>,
}

/// A compiled search plan: anchored vertices first, then the remaining
/// vertices in an order that front-loads edge constraints.
#[derive(Clone, Debug)]
pub struct EmbeddingPlan {
    pattern_vertices: usize,
    anchors: Vec<usize>,
    slots: Vec<Slot>,
    /// constraints among anchors, checked once per search
    anchor_checks: Vec<(usize, usize, Constraint)>,
}

impl EmbeddingPlan {
    /// `constraints` lists pattern edges `(a, b, kind)`; pairs not listed are
    /// unconstrained apart from injectivity.
    pub fn new(pattern_vertices: usize, constraints: &[(usize, usize, Constraint)], anchors: &[usize]) -> Self {
        let k = pattern_vertices;
        let mut placed_at = vec![usize::MAX; k];
        let mut order: Vec<usize> = Vec::with_capacity(k);
        for &a in anchors {
            assert!(a < k && placed_at[a] == usize::MAX, "bad anchor list");
            placed_at[a] = order.len();
            order.push(a);
        }
        let touching = |v: usize, placed: &[usize]| {
            let mut edges = 0;
            let mut any = 0;
            for &(a, b, c) in constraints {
                let other = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if placed[other] != usize::MAX {
                    any += 1;
                    if c == Constraint::Edge {
                        edges += 1;
                    }
                }
            }
            (edges, any)
        };
        while order.len() < k {
            let v = (0..k)
                .filter(|&v| placed_at[v] == usize::MAX)
                .max_by_key(|&v| {
                    let (e, a) = touching(v, &placed_at);
                    (e, a, std::cmp::Reverse(v))
                })
                .expect("unplaced vertex");
            placed_at[v] = order.len();
            order.push(v);
        }
        let mut anchor_checks = Vec::new();
        let mut slots: Vec<Slot> = order
            .iter()
            .map(|&v| Slot {
                vertex: v,
                edge_back: Vec::new(),
                other_back: Vec::new(),
            })
            .collect();
        for &(a, b, c) in constraints {
            let (pa, pb) = (placed_at[a], placed_at[b]);
            let (early, late) = if pa < pb { (pa, pb) } else { (pb, pa) };
            if late < anchors.len() {
                anchor_checks.push((early, late, c));
            } else if c == Constraint::Edge {
                slots[late].edge_back.push(early);
            } else {
                slots[late].other_back.push((early, c));
            }
        }
        EmbeddingPlan {
            pattern_vertices: k,
            anchors: anchors.to_vec(),
            slots,
            anchor_checks,
        }
    }

    pub fn pattern_vertices(&self) -> usize {
        self.pattern_vertices
    }

    /// Calls `visit` with each embedding as `image[pattern_vertex]`.
    /// `anchor_images` follows the anchor order given at construction.
    pub fn for_each<H, F>(&self, host: &H, anchor_images: &[usize], mut visit: F) -> ControlFlow<()>
    where
        H: Host + ?Sized,
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        assert_eq!(anchor_images.len(), self.anchors.len(), "anchor image count mismatch");
        if self.pattern_vertices > host.vertex_count() {
            return ControlFlow::Continue(());
        }
        let mut by_slot = vec![usize::MAX; self.pattern_vertices];
        for (i, &x) in anchor_images.iter().enumerate() {
            if x >= host.vertex_count() || by_slot[..i].contains(&x) {
                return ControlFlow::Continue(());
            }
            by_slot[i] = x;
        }
        for &(p, q, c) in &self.anchor_checks {
            if !c.holds(host, by_slot[p], by_slot[q]) {
                return ControlFlow::Continue(());
            }
        }
        let mut image = vec![usize::MAX; self.pattern_vertices];
        for (i, &a) in self.anchors.iter().enumerate() {
            image[a] = by_slot[i];
        }
        let depth = self.anchors.len();
        if depth < self.slots.len() && host.edge_row(0).is_some() && host.open_row(0).is_some() {
            let words = host.vertex_count().div_ceil(64);
            let mut scratch = vec![0u64; words * (self.slots.len() - depth)];
            return self.extend_bits(host, depth, words, &mut scratch, &mut by_slot, &mut image, &mut visit);
        }
        self.extend(host, depth, &mut by_slot, &mut image, &mut visit)
    }

    /// Same search as `extend`, but each slot's candidates come from word-wise
    /// operations on the rows of its already-placed neighbours.
    #[allow(clippy::too_many_arguments)]
    fn extend_bits<H, F>(
        &self,
        host: &H,
        depth: usize,
        words: usize,
        scratch: &mut [u64],
        by_slot: &mut [usize],
        image: &mut [usize],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        H: Host + ?Sized,
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if depth == self.slots.len() {
            return visit(image);
        }
        let slot = &self.slots[depth];
        let (mask, rest) = scratch.split_at_mut(words);
        let row = |x: usize| host.edge_row(x).expect("bit rows");
        match slot.edge_back.split_first() {
            Some((&first, others)) => {
                mask.copy_from_slice(row(by_slot[first]));
                for &p in others {
                    for (m, r) in mask.iter_mut().zip(row(by_slot[p])) {
                        *m &= r;
                    }
                }
            }
            None => {
                mask.fill(u64::MAX);
                let n = host.vertex_count();
                if !n.is_multiple_of(64) {
                    mask[words - 1] = (1u64 << (n % 64)) - 1;
                }
            }
        }
        for &(p, c) in &slot.other_back {
            let y = by_slot[p];
            match c {
                Constraint::Edge => unreachable!("edge constraints live in edge_back"),
                Constraint::Open => {
                    for (m, r) in mask.iter_mut().zip(host.open_row(y).expect("bit rows")) {
                        *m &= r;
                    }
                }
                Constraint::NonEdge => {
                    for (m, r) in mask.iter_mut().zip(row(y)) {
                        *m &= !r;
                    }
                }
            }
        }
        for k in 0..words {
            let mut w = mask[k];
            while w != 0 {
                let x = k * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                if by_slot[..depth].contains(&x) {
                    continue;
                }
                by_slot[depth] = x;
                image[slot.vertex] = x;
                let r = self.extend_bits(host, depth + 1, words, rest, by_slot, image, visit);
                by_slot[depth] = usize::MAX;
                image[slot.vertex] = usize::MAX;
                r?;
            }
        }
        ControlFlow::Continue(())
    }

    fn extend<H, F>(
        &self,
        host: &H,
        depth: usize,
        by_slot: &mut [usize],
        image: &mut [usize],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        H: Host + ?Sized,
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if depth == self.slots.len() {
            return visit(image);
        }
        let slot = &self.slots[depth];
        let mut attempt = |x: usize, by_slot: &mut [usize], image: &mut [usize]| -> ControlFlow<()> {
            if by_slot[..depth].contains(&x) {
                return ControlFlow::Continue(());
            }
            if !slot.edge_back.iter().all(|&p| host.is_edge(by_slot[p], x)) {
                return ControlFlow::Continue(());
            }
            if !slot.other_back.iter().all(|&(p, c)| c.holds(host, by_slot[p], x)) {
                return ControlFlow::Continue(());
            }
            by_slot[depth] = x;
            image[slot.vertex] = x;
            let r = self.extend(host, depth + 1, by_slot, image, visit);
            by_slot[depth] = usize::MAX;
            image[slot.vertex] = usize::MAX;
            r
        };
        if slot.edge_back.is_empty() {
            for x in 0..host.vertex_count() {
                attempt(x, by_slot, image)?;
            }
        } else {
            // walk the shortest neighbour list among edge-constrained predecessors
            let pivot = slot
                .edge_back
                .iter()
                .map(|&p| by_slot[p])
                .min_by_key(|&y| host.neighbors(y).len())
                .expect("non-empty");
            for &x in host.neighbors(pivot) {
                attempt(x as usize, by_slot, image)?;
            }
        }
        ControlFlow::Continue(())
    }

    pub fn count<H: Host + ?Sized>(&self, host: &H, anchor_images: &[usize]) -> u64 {
        let mut total = 0u64;
        let _ = self.for_each(host, anchor_images, |_| {
            total += 1;
            ControlFlow::Continue(())
        });
        total
    }

    pub fn exists<H: Host + ?Sized>(&self, host: &H, anchor_images: &[usize]) -> bool {
        self.for_each(host, anchor_images, |_| ControlFlow::Break(())).is_break()
    }
}

/// A small standalone host: a simple graph whose non-edges are all open,
/// unless listed as closed.
#[derive(Clone, Debug)]
pub struct SimpleHost {
    n: usize,
    adj: Vec<Vec<u32>>,
    closed: std::collections::HashSet<(usize, usize)>,
}

impl SimpleHost {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
        SimpleHost {
            n,
            adj,
            closed: Default::default(),
        }
    }

    pub fn close(&mut self, a: usize, b: usize) {
        self.closed.insert((a.min(b), a.max(b)));
    }
}

impl Host for SimpleHost {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn is_edge(&self, x: usize, y: usize) -> bool {
        self.adj[x].contains(&(y as u32))
    }
    fn is_open(&self, x: usize, y: usize) -> bool {
        x != y && !self.is_edge(x, y) && !self.closed.contains(&(x.min(y), x.max(y)))
    }
    fn neighbors(&self, x: usize) -> &[u32] {
        &self.adj[x]
    }
}
