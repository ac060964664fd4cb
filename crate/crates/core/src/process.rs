//! The H-free process: uniform insertion of open pairs with incremental
//! maintenance of the open/closed partition.

use std::ops::ControlFlow;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embed::{Constraint, EmbeddingPlan, Host};
use crate::error::{Error, Result};
use crate::graph::{contains_in_host, BitAdjacency, EdgeRootedMatcher, GraphSpec};
use crate::pairs::{pair_count, OpenMatrix, PairStatus, StatusTable};
use crate::sampler::{OpenSampler, SamplerKind};
use crate::scaling::ForbiddenGraph;

/// Seeded generator for stream `stream` of a run seeded with `seed`.
///
/// Stream 0 drives the process itself; other streams are for auxiliary draws
/// (anchor panels, vertex sets) so they never perturb the trajectory.
pub fn split_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Embedding plans that enumerate copies of `H` through a given pair `uv`
/// with exactly one further edge `cd` absent: one plan per ordered edge orbit
/// representative `(a, b)` and per other edge `cd`. A second set restricts
/// `cd` to open pairs, which is all that insertion needs.
#[derive(Debug)]
pub struct ClosurePlans {
    plans: Vec<(EmbeddingPlan, usize, usize)>,
    open_plans: Vec<(EmbeddingPlan, usize, usize)>,
}

impl ClosurePlans {
    pub fn new(h: &ForbiddenGraph) -> Self {
        let g = h.graph();
        let mut plans = Vec::new();
        let mut open_plans = Vec::new();
        for (a, b) in h.ordered_edge_orbit_representatives() {
            let ab = (a.min(b), a.max(b));
            for &cd in g.edges() {
                if cd == ab {
                    continue;
                }
                let cons: Vec<(usize, usize, Constraint)> = g
                    .edges()
                    .iter()
                    .filter(|&&e| e != ab && e != cd)
                    .map(|&(x, y)| (x, y, Constraint::Edge))
                    .collect();
                for (kind, out) in [(Constraint::NonEdge, &mut plans), (Constraint::Open, &mut open_plans)] {
                    let mut c = cons.clone();
                    c.push((cd.0, cd.1, kind));
                    out.push((EmbeddingPlan::new(g.vertex_count(), &c, &[a, b]), cd.0, cd.1));
                }
            }
        }
        ClosurePlans { plans, open_plans }
    }

    /// Visits every pair `xy` (possibly repeatedly) that closes `uv`.
    fn for_each_pair<H: Host + ?Sized>(&self, host: &H, u: usize, v: usize, f: impl FnMut(usize, usize)) {
        Self::visit(&self.plans, host, u, v, f)
    }

    /// As `for_each_pair`, restricted to pairs that are currently open.
    fn for_each_open_pair<H: Host + ?Sized>(&self, host: &H, u: usize, v: usize, f: impl FnMut(usize, usize)) {
        Self::visit(&self.open_plans, host, u, v, f)
    }

    fn visit<H: Host + ?Sized>(
        plans: &[(EmbeddingPlan, usize, usize)],
        host: &H,
        u: usize,
        v: usize,
        mut f: impl FnMut(usize, usize),
    ) {
        for (plan, c, d) in plans {
            let _ = plan.for_each(host, &[u, v], |img| {
                f(img[*c], img[*d]);
                ControlFlow::Continue(())
            });
        }
    }
}

/// One step of the process, in unordered-pair units.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    /// Step index after insertion (the new edge count).
    pub i: u64,
    pub chosen_edge: (usize, usize),
    pub newly_closed: u64,
    pub open_after: u64,
    pub t: f64,
    /// Pairs moved Open -> Closed; filled only when closure logging is on.
    pub closed_pairs: Vec<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome {
    Step(StepRecord),
    Terminated,
}

/// The evolving graph `G(i)` together with its pair statuses.
#[derive(Clone, Debug)]
pub struct ProcessState {
    h: Arc<ForbiddenGraph>,
    plans: Arc<ClosurePlans>,
    n: usize,
    seed: u64,
    i: u64,
    time_scale: f64,
    adjacency: BitAdjacency,
    neighbors: Vec<Vec<u32>>,
    open: OpenMatrix,
    open_count: u64,
    sampler: OpenSampler,
    rng: ChaCha8Rng,
    log_closures: bool,
}

impl ProcessState {
    pub fn new(h: ForbiddenGraph, n: usize, seed: u64) -> Result<Self> {
        Self::with_sampler(h, n, seed, SamplerKind::Auto)
    }

    pub fn with_sampler(h: ForbiddenGraph, n: usize, seed: u64, kind: SamplerKind) -> Result<Self> {
        Self::from_shared(Arc::new(h), n, seed, kind)
    }

    pub fn from_shared(h: Arc<ForbiddenGraph>, n: usize, seed: u64, kind: SamplerKind) -> Result<Self> {
        if n < h.vertex_count() {
            return Err(Error::Precondition(format!(
                "n = {n} must be at least v_H = {}",
                h.vertex_count()
            )));
        }
        let plans = Arc::new(ClosurePlans::new(&h));
        let time_scale = h.time_scale(n);
        Ok(ProcessState {
            plans,
            n,
            seed,
            i: 0,
            time_scale,
            adjacency: BitAdjacency::new(n),
            neighbors: vec![Vec::new(); n],
            open: OpenMatrix::full(n),
            open_count: pair_count(n),
            sampler: OpenSampler::new(kind, n),
            rng: split_rng(seed, 0),
            log_closures: false,
            h,
        })
    }

    pub fn set_log_closures(&mut self, on: bool) {
        self.log_closures = on;
    }

    pub fn forbidden(&self) -> &ForbiddenGraph {
        &self.h
    }

    pub fn shared_forbidden(&self) -> Arc<ForbiddenGraph> {
        self.h.clone()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of edges inserted so far.
    pub fn i(&self) -> u64 {
        self.i
    }

    /// `s = p n^2`.
    pub fn time_scale(&self) -> f64 {
        self.time_scale
    }

    /// `t = i / s`.
    pub fn t(&self) -> f64 {
        self.i as f64 / self.time_scale
    }

    /// Unordered open pairs, `Q(i) / 2`.
    pub fn open_count(&self) -> u64 {
        self.open_count
    }

    pub fn sampler_kind(&self) -> SamplerKind {
        self.sampler.kind()
    }

    pub fn status(&self, x: usize, y: usize) -> PairStatus {
        if self.adjacency.has_edge(x, y) {
            PairStatus::Edge
        } else if self.open.is_open(x, y) {
            PairStatus::Open
        } else {
            PairStatus::Closed
        }
    }

    /// Snapshot of every pair's status as a packed table.
    pub fn status_table(&self) -> StatusTable {
        let mut table = StatusTable::new(self.n);
        for y in 1..self.n {
            for x in 0..y {
                let s = self.status(x, y);
                if s != PairStatus::Open {
                    table.set(x, y, s);
                }
            }
        }
        table
    }

    /// Row `v` of the open-pair bit matrix.
    pub fn open_row(&self, v: usize) -> &[u64] {
        self.open.row(v)
    }

    pub fn adjacency(&self) -> &BitAdjacency {
        &self.adjacency
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.i as usize);
        for (x, nb) in self.neighbors.iter().enumerate() {
            out.extend(nb.iter().map(|&y| y as usize).filter(|&y| x < y).map(|y| (x, y)));
        }
        out.sort_unstable();
        out
    }

    pub fn graph(&self) -> GraphSpec {
        GraphSpec::new(self.n, self.edges()).expect("process graph is simple")
    }

    fn check_pair(&self, x: usize, y: usize) -> Result<()> {
        if x == y || x >= self.n || y >= self.n {
            return Err(Error::InvalidPair(format!("({x}, {y}) on {} vertices", self.n)));
        }
        Ok(())
    }

    /// Pairs `xy != uv`, not edges, such that `G(i) ∪ {uv, xy}` has a copy of
    /// `H` using both `uv` and `xy`. Sorted, deduplicated, each `(lo, hi)`.
    pub fn closing_set(&self, u: usize, v: usize) -> Result<Vec<(usize, usize)>> {
        self.check_pair(u, v)?;
        if self.is_edge(u, v) {
            return Err(Error::PairIsEdge(u, v));
        }
        let mut out = Vec::new();
        self.plans.for_each_pair(self, u, v, |x, y| out.push((x.min(y), x.max(y))));
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Inserts the open pair `{u, v}` as the next edge.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<StepRecord> {
        self.check_pair(u, v)?;
        match self.status(u, v) {
            PairStatus::Open => Ok(self.insert(u.min(v), u.max(v))),
            PairStatus::Edge => Err(Error::PairIsEdge(u, v)),
            PairStatus::Closed => Err(Error::InvalidPair(format!("({u}, {v}) is closed"))),
        }
    }

    fn insert(&mut self, u: usize, v: usize) -> StepRecord {
        let mut to_close = Vec::new();
        self.plans
            .for_each_open_pair(self, u, v, |x, y| to_close.push((x.min(y), x.max(y))));
        to_close.sort_unstable();
        to_close.dedup();

        self.open.clear(u, v);
        self.sampler.remove(u, v);
        self.adjacency.add_edge(u, v);
        self.neighbors[u].push(v as u32);
        self.neighbors[v].push(u as u32);
        self.open_count -= 1;

        let mut closed_pairs = Vec::new();
        for &(x, y) in &to_close {
            self.open.clear(x, y);
            self.sampler.remove(x, y);
            if self.log_closures {
                closed_pairs.push((x as u32, y as u32));
            }
        }
        self.open_count -= to_close.len() as u64;
        self.i += 1;
        let open = &self.open;
        self.sampler.maybe_fall_back(|| open.open_indices(), self.open_count);
        StepRecord {
            i: self.i,
            chosen_edge: (u, v),
            newly_closed: to_close.len() as u64,
            open_after: self.open_count,
            t: self.t(),
            closed_pairs,
        }
    }

    /// Chooses a uniformly random open pair and inserts it.
    pub fn step(&mut self) -> StepOutcome {
        let open = &self.open;
        match self.sampler.sample(|x, y| open.is_open(x, y), self.open_count, &mut self.rng) {
            None => StepOutcome::Terminated,
            Some((u, v)) => StepOutcome::Step(self.insert(u, v)),
        }
    }

    pub fn is_terminated(&self) -> bool {
        self.open_count == 0
    }
}

impl Host for ProcessState {
    fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    fn is_edge(&self, x: usize, y: usize) -> bool {
        self.adjacency.has_edge(x, y)
    }

    #[inline]
    fn is_open(&self, x: usize, y: usize) -> bool {
        self.open.is_open(x, y)
    }

    fn neighbors(&self, x: usize) -> &[u32] {
        &self.neighbors[x]
    }

    fn edge_row(&self, x: usize) -> Option<&[u64]> {
        Some(self.adjacency.row(x))
    }

    fn open_row(&self, x: usize) -> Option<&[u64]> {
        Some(self.open.row(x))
    }
}

/// Rebuilds the status table from the definition alone: a non-edge is closed
/// iff adding it creates a copy of `H`. Since the graph itself is checked to
/// be H-free, any such copy passes through the added pair.
pub fn recompute_status_oracle(state: &ProcessState) -> Result<StatusTable> {
    let h = state.forbidden().graph();
    let mut host = state.adjacency().clone();
    if contains_in_host(&host, h) {
        return Err(Error::ContainsForbidden);
    }
    let through = EdgeRootedMatcher::new(h);
    let n = state.n();
    let mut table = StatusTable::new(n);
    for y in 1..n {
        for x in 0..y {
            if host.has_edge(x, y) {
                table.set(x, y, PairStatus::Edge);
                continue;
            }
            host.add_edge(x, y);
            if through.contains_through(&host, x, y) {
                table.set(x, y, PairStatus::Closed);
            }
            host.remove_edge(x, y);
        }
    }
    Ok(table)
}

/// When a run stops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stop {
    MaxSteps(u64),
    UntilTermination,
}

/// Called at checkpoint steps with read-only access to the state.
pub trait Observer {
    fn observe(&mut self, state: &ProcessState) -> std::result::Result<(), String>;
}

impl<F: FnMut(&ProcessState) -> std::result::Result<(), String>> Observer for F {
    fn observe(&mut self, state: &ProcessState) -> std::result::Result<(), String> {
        self(state)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckpointSample {
    pub i: u64,
    pub t: f64,
    pub open_count: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    pub seed: u64,
    pub rows: Vec<StepRecord>,
    pub checkpoints: Vec<CheckpointSample>,
    pub terminated: bool,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub stop: Stop,
    /// Step indices (edge counts) at which observers fire; sorted on use.
    pub checkpoints: Vec<u64>,
    pub record_steps: bool,
}

impl RunOptions {
    pub fn new(stop: Stop) -> Self {
        RunOptions {
            stop,
            checkpoints: Vec::new(),
            record_steps: true,
        }
    }

    pub fn with_checkpoints(mut self, checkpoints: impl IntoIterator<Item = u64>) -> Self {
        self.checkpoints = checkpoints.into_iter().collect();
        self
    }

    pub fn without_step_rows(mut self) -> Self {
        self.record_steps = false;
        self
    }
}

/// Converts checkpoint times to step indices `round(t * s)`.
pub fn checkpoint_steps(times: &[f64], time_scale: f64) -> Vec<u64> {
    times.iter().map(|&t| (t * time_scale).round().max(0.0) as u64).collect()
}

/// Runs until the stop condition, firing observers at checkpoints and
/// passing every step to `on_step`.
pub fn run_with(
    state: &mut ProcessState,
    opts: &RunOptions,
    observers: &mut [&mut dyn Observer],
    mut on_step: impl FnMut(&StepRecord),
) -> Result<Trace> {
    let mut cps = opts.checkpoints.clone();
    cps.sort_unstable();
    cps.dedup();
    let mut next_cp = cps.iter().copied().peekable();
    let mut trace = Trace {
        seed: state.seed(),
        ..Trace::default()
    };
    let limit = match opts.stop {
        Stop::MaxSteps(m) => state.i().saturating_add(m),
        Stop::UntilTermination => u64::MAX,
    };
    let mut fire = |state: &ProcessState, trace: &mut Trace| -> Result<()> {
        for obs in observers.iter_mut() {
            obs.observe(state).map_err(|msg| Error::Observer { step: state.i(), msg })?;
        }
        trace.checkpoints.push(CheckpointSample {
            i: state.i(),
            t: state.t(),
            open_count: state.open_count(),
        });
        Ok(())
    };
    while next_cp.peek().is_some_and(|&c| c < state.i()) {
        next_cp.next();
    }
    loop {
        if next_cp.peek() == Some(&state.i()) {
            next_cp.next();
            fire(state, &mut trace)?;
        }
        if state.i() >= limit {
            break;
        }
        match state.step() {
            StepOutcome::Terminated => {
                trace.terminated = true;
                break;
            }
            StepOutcome::Step(rec) => {
                on_step(&rec);
                if opts.record_steps {
                    trace.rows.push(rec);
                }
            }
        }
    }
    Ok(trace)
}

pub fn run(state: &mut ProcessState, opts: &RunOptions, observers: &mut [&mut dyn Observer]) -> Result<Trace> {
    run_with(state, opts, observers, |_| {})
}
