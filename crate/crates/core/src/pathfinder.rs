//! Constructions of short universal words as covering paths in `H_n`.
//!
//! * [`greedy_cycle_path`] walks each 1-cycle with weight-1 edges and jumps to
//!   the nearest vertex of an unvisited 1-cycle. Its length is at most `B(n)`.
//! * [`nearest_neighbor_path`] always moves to the closest unvisited vertex.
//! * [`exact_min_word`] is a depth-first branch and bound over covering paths.
//!
//! Weights in `H_n` obey the triangle inequality (appending `u1` then `u2`
//! is one way of appending `|u1| + |u2|` letters), so any covering walk can be
//! shortcut to a path that visits each vertex once without getting heavier.
//! The exact search therefore only extends paths to unvisited vertices.
//!
//! Ties are always broken towards the lexicographically smallest canonical
//! representative, i.e. the smallest vertex index.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_graph, path_to_word, verify_universal_word, CoveringPath, GraphKind, TransitionGraph};
use crate::perm::{canonical_rank, IncClass};
use crate::toric::UniversalWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    GreedyCycle,
    NearestNeighbor,
    Exact,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub method: Method,
    #[serde(serialize_with = "ser_display")]
    pub word: UniversalWord,
    pub path: CoveringPath,
    pub length: usize,
    pub weight: usize,
    /// True only when an exhaustive search proved the length minimal.
    pub optimal: bool,
    /// Set when a node or time budget stopped the exact search early.
    pub budget_exhausted: bool,
    #[serde(serialize_with = "ser_secs")]
    pub elapsed: Duration,
    pub nodes_expanded: u64,
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

fn finish(
    graph: &TransitionGraph,
    method: Method,
    vertices: Vec<usize>,
    started: Instant,
    nodes_expanded: u64,
    optimal: bool,
    budget_exhausted: bool,
) -> Result<SearchResult> {
    let n = graph.n();
    let path = CoveringPath::new(n, GraphKind::H, vertices)?;
    let weight = graph.path_weight(&path);
    let word = path_to_word(&path)?;
    if word.len() != weight + n {
        return Err(Error::Internal(format!("word length {} != weight {weight} + {n}", word.len())));
    }
    let check = verify_universal_word(&word);
    if !check.ok {
        return Err(Error::NotUniversal { missing: check.missing.len() });
    }
    Ok(SearchResult {
        n,
        method,
        length: word.len(),
        word,
        path,
        weight,
        optimal,
        budget_exhausted,
        elapsed: started.elapsed(),
        nodes_expanded,
    })
}

/// The 1-cycles of a graph, with each vertex's neighbours along its cycle.
#[derive(Clone, Debug)]
pub struct CycleStructure {
    pub cycle_of: Vec<usize>,
    pub succ: Vec<usize>,
    pub pred: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl CycleStructure {
    pub fn new(graph: &TransitionGraph) -> Self {
        let v = graph.vertex_count();
        let succ: Vec<usize> = (0..v).map(|x| graph.successor(x).unwrap_or(x)).collect();
        let mut pred = vec![0; v];
        for (x, &s) in succ.iter().enumerate() {
            pred[s] = x;
        }
        let mut cycle_of = vec![usize::MAX; v];
        let mut members = Vec::new();
        for start in 0..v {
            if cycle_of[start] != usize::MAX {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while cycle_of[x] == usize::MAX {
                cycle_of[x] = members.len();
                cycle.push(x);
                x = succ[x];
            }
            members.push(cycle);
        }
        Self { cycle_of, succ, pred, members }
    }

    /// Maximal runs of unvisited vertices along cycle `c`.
    fn runs_in(&self, c: usize, visited: &[bool]) -> usize {
        let m = &self.members[c];
        let open = m.iter().filter(|&&x| !visited[x]).count();
        if open == 0 {
            0
        } else if open == m.len() {
            1
        } else {
            m.iter().filter(|&&x| !visited[x] && visited[self.pred[x]]).count()
        }
    }

    /// A lower bound on the weight still needed to cover every unvisited
    /// vertex by a path continuing from `current` without revisits.
    ///
    /// Each step lands on a new vertex at weight at least 1. A step has
    /// weight 1 only when it follows the 1-cycle edge from the previous
    /// vertex, so the first vertex reached in each unvisited run costs at least
    /// 2, except a run starting at `current`'s successor.
    pub fn lower_bound(&self, visited: &[bool], current: usize) -> usize {
        let open = visited.iter().filter(|&&v| !v).count();
        let runs: usize = (0..self.members.len()).map(|c| self.runs_in(c, visited)).sum();
        let s = self.succ[current];
        open + runs - usize::from(s != current && !visited[s])
    }
}

pub fn greedy_cycle_path(n: usize) -> Result<SearchResult> {
    greedy_cycle_path_in(&build_graph(n, GraphKind::H)?)
}

/// Walks the 1-cycle of the current vertex, then moves along a minimum-weight
/// edge from the vertex where the walk ended into any unvisited 1-cycle.
pub fn greedy_cycle_path_in(graph: &TransitionGraph) -> Result<SearchResult> {
    let started = Instant::now();
    let cycles = CycleStructure::new(graph);
    let mut done = vec![false; cycles.members.len()];
    let mut path = Vec::with_capacity(graph.vertex_count());
    let mut current = 0;
    loop {
        let c = cycles.cycle_of[current];
        done[c] = true;
        let mut x = current;
        loop {
            path.push(x);
            x = cycles.succ[x];
            if x == current {
                break;
            }
        }
        let last = *path.last().expect("nonempty");
        let next = (0..graph.vertex_count())
            .filter(|&v| !done[cycles.cycle_of[v]])
            .min_by_key(|&v| (graph.weight(last, v), v));
        match next {
            Some(v) => current = v,
            None => break,
        }
    }
    finish(graph, Method::GreedyCycle, path, started, 0, false, false)
}

pub fn nearest_neighbor_path(n: usize, start: &IncClass) -> Result<SearchResult> {
    let graph = build_graph(n, GraphKind::H)?;
    if start.n() != n {
        return Err(Error::SizeMismatch { left: start.n(), right: n });
    }
    nearest_neighbor_path_in(&graph, canonical_rank(start.rep()))
}

/// Repeatedly moves to the closest unvisited vertex.
pub fn nearest_neighbor_path_in(graph: &TransitionGraph, start: usize) -> Result<SearchResult> {
    let started = Instant::now();
    let v = graph.vertex_count();
    let mut visited = vec![false; v];
    visited[start] = true;
    let mut path = vec![start];
    let mut current = start;
    for _ in 1..v {
        let next = match graph.successor(current).filter(|&s| !visited[s]) {
            Some(s) => s,
            None => {
                let mut best = (usize::MAX, usize::MAX);
                for cand in (0..v).filter(|&c| !visited[c]) {
                    let w = graph.weight(current, cand);
                    if w < best.0 {
                        best = (w, cand);
                        // the weight-1 edge, if any, was handled above
                        if w <= 2 {
                            break;
                        }
                    }
                }
                best.1
            }
        };
        visited[next] = true;
        path.push(next);
        current = next;
    }
    finish(graph, Method::NearestNeighbor, path, started, 0, false, false)
}

/// Largest `n` for which an unbudgeted exact search is expected to finish.
pub const EXACT_GUARANTEED_MAX_N: usize = 5;
/// Time limit applied to exact searches above [`EXACT_GUARANTEED_MAX_N`]
/// when no budget is given.
pub const DEFAULT_ANYTIME_LIMIT: Duration = Duration::from_secs(60);
const MEMO_CAPACITY: usize = 1 << 22;

#[derive(Clone, Debug, Default)]
pub struct ExactConfig {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Worker threads; 0 and 1 both mean single-threaded.
    pub threads: usize,
}

/// A new best path found during the exact search.
#[derive(Clone, Debug)]
pub struct Improvement {
    pub length: usize,
    pub elapsed: Duration,
    pub nodes: u64,
}

pub fn exact_min_word(n: usize, config: &ExactConfig) -> Result<SearchResult> {
    exact_min_word_observed(n, config, &|_| {})
}

/// Branch and bound for the shortest universal word.
///
/// The incumbent starts from [`greedy_cycle_path`]. Every start vertex is
/// tried; successors are expanded in increasing weight, then index.
/// A node is pruned when its weight plus [`CycleStructure::lower_bound`] can
/// not beat the incumbent, or when the same visited set was already reached
/// at the same vertex with no more weight. `on_improve` sees each new
/// incumbent.
pub fn exact_min_word_observed(
    n: usize,
    config: &ExactConfig,
    on_improve: &(dyn Fn(&Improvement) + Sync),
) -> Result<SearchResult> {
    let started = Instant::now();
    let graph = build_graph(n, GraphKind::H)?;
    let seed = greedy_cycle_path_in(&graph)?;
    let v = graph.vertex_count();
    if v == 1 {
        return finish(&graph, Method::Exact, vec![0], started, 1, true, false);
    }

    let mut config = config.clone();
    if n > EXACT_GUARANTEED_MAX_N && config.node_limit.is_none() && config.time_limit.is_none() {
        config.time_limit = Some(DEFAULT_ANYTIME_LIMIT);
    }

    let cycles = CycleStructure::new(&graph);
    let order: Vec<Vec<(usize, usize)>> = (0..v)
        .map(|a| {
            let mut out: Vec<(usize, usize)> = (0..v).filter(|&b| b != a).map(|b| (graph.weight(a, b), b)).collect();
            out.sort_unstable();
            out
        })
        .collect();

    let shared = Shared {
        best: AtomicUsize::new(seed.weight),
        best_path: Mutex::new(seed.path.vertices.clone()),
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        next_start: AtomicUsize::new(0),
        started,
        config: &config,
        on_improve,
    };
    let ctx = Context { n, cycles: &cycles, order: &order, vertices: v };

    let threads = config.threads.max(1).min(v);
    if threads == 1 {
        worker(&ctx, &shared);
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(|| worker(&ctx, &shared));
            }
        });
    }

    let exhausted = shared.stop.load(Ordering::Relaxed);
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let path = shared.best_path.into_inner().expect("no worker panicked");
    finish(&graph, Method::Exact, path, started, nodes, !exhausted, exhausted)
}

struct Shared<'a> {
    best: AtomicUsize,
    best_path: Mutex<Vec<usize>>,
    nodes: AtomicU64,
    stop: AtomicBool,
    next_start: AtomicUsize,
    started: Instant,
    config: &'a ExactConfig,
    on_improve: &'a (dyn Fn(&Improvement) + Sync),
}

struct Context<'a> {
    n: usize,
    cycles: &'a CycleStructure,
    order: &'a [Vec<(usize, usize)>],
    vertices: usize,
}

fn worker(ctx: &Context<'_>, shared: &Shared<'_>) {
    loop {
        let start = shared.next_start.fetch_add(1, Ordering::Relaxed);
        if start >= ctx.vertices || shared.stop.load(Ordering::Relaxed) {
            return;
        }
        let mut search = Search::new(ctx, shared, start);
        search.dfs(0);
        shared.nodes.fetch_add(search.nodes, Ordering::Relaxed);
    }
}

struct Search<'a, 'b> {
    ctx: &'a Context<'a>,
    shared: &'a Shared<'b>,
    visited: Vec<bool>,
    path: Vec<usize>,
    open: usize,
    runs: usize,
    nodes: u64,
    memo: HashMap<(u128, u16), u16>,
}

impl<'a, 'b> Search<'a, 'b> {
    fn new(ctx: &'a Context<'a>, shared: &'a Shared<'b>, start: usize) -> Self {
        let mut s = Search {
            ctx,
            shared,
            visited: vec![false; ctx.vertices],
            path: vec![start],
            open: ctx.vertices,
            runs: ctx.cycles.members.len(),
            nodes: 0,
            memo: HashMap::new(),
        };
        s.mark(start);
        s
    }

    fn mark(&mut self, x: usize) {
        let c = self.ctx.cycles.cycle_of[x];
        let before = self.ctx.cycles.runs_in(c, &self.visited);
        self.visited[x] = true;
        let after = self.ctx.cycles.runs_in(c, &self.visited);
        self.runs = self.runs + after - before;
        self.open -= 1;
    }

    fn unmark(&mut self, x: usize) {
        let c = self.ctx.cycles.cycle_of[x];
        let before = self.ctx.cycles.runs_in(c, &self.visited);
        self.visited[x] = false;
        let after = self.ctx.cycles.runs_in(c, &self.visited);
        self.runs = self.runs + after - before;
        self.open += 1;
    }

    fn bound_here(&self, current: usize) -> usize {
        let s = self.ctx.cycles.succ[current];
        self.open + self.runs - usize::from(s != current && !self.visited[s])
    }

    fn memo_key(&self, current: usize) -> Option<(u128, u16)> {
        if self.ctx.vertices > 128 {
            return None;
        }
        let mask = self.visited.iter().enumerate().filter(|(_, &b)| b).fold(0u128, |m, (i, _)| m | 1 << i);
        Some((mask, current as u16))
    }

    fn out_of_budget(&self) -> bool {
        let cfg = self.shared.config;
        let nodes = self.shared.nodes.load(Ordering::Relaxed) + self.nodes;
        cfg.node_limit.is_some_and(|l| nodes >= l) || cfg.time_limit.is_some_and(|l| self.shared.started.elapsed() >= l)
    }

    fn dfs(&mut self, weight: usize) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && self.out_of_budget() {
            self.shared.stop.store(true, Ordering::Relaxed);
        }
        if self.shared.stop.load(Ordering::Relaxed) {
            return;
        }
        let current = *self.path.last().expect("path is never empty");
        if self.open == 0 {
            self.record(weight);
            return;
        }
        let order = &self.ctx.order[current];
        for &(w, next) in order {
            let best = self.shared.best.load(Ordering::Relaxed);
            // every completion still needs at least one step per open vertex
            if weight + w + self.open > best {
                break;
            }
            if self.visited[next] {
                continue;
            }
            let reached = weight + w;
            self.mark(next);
            if reached + self.bound_here(next) < best && self.fresh(next, reached) {
                self.path.push(next);
                self.dfs(reached);
                self.path.pop();
            }
            self.unmark(next);
            if self.shared.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    /// False when this visited set was already reached at `current` with no
    /// more weight.
    fn fresh(&mut self, current: usize, weight: usize) -> bool {
        let Some(key) = self.memo_key(current) else { return true };
        match self.memo.get_mut(&key) {
            Some(seen) if (*seen as usize) <= weight => false,
            Some(seen) => {
                *seen = weight as u16;
                true
            }
            None => {
                if self.memo.len() < MEMO_CAPACITY {
                    self.memo.insert(key, weight as u16);
                }
                true
            }
        }
    }

    /// Every prefix of a complete path must satisfy
    /// `prefix weight + lower bound <= total weight`.
    fn bound_holds_along_path(&self, total: usize) -> bool {
        let mut visited = vec![false; self.ctx.vertices];
        let mut so_far = 0;
        for (i, &x) in self.path.iter().enumerate() {
            if i > 0 {
                so_far += self.ctx.order[self.path[i - 1]].iter().find(|e| e.1 == x).map_or(0, |e| e.0);
            }
            visited[x] = true;
            if so_far + self.ctx.cycles.lower_bound(&visited, x) > total {
                return false;
            }
        }
        true
    }

    fn record(&self, weight: usize) {
        let mut best_path = self.shared.best_path.lock().expect("no worker panicked");
        if weight < self.shared.best.load(Ordering::Relaxed) {
            debug_assert!(self.bound_holds_along_path(weight));
            self.shared.best.store(weight, Ordering::Relaxed);
            *best_path = self.path.clone();
            (self.shared.on_improve)(&Improvement {
                length: weight + self.ctx.n,
                elapsed: self.shared.started.elapsed(),
                nodes: self.shared.nodes.load(Ordering::Relaxed) + self.nodes,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{bound_b, bound_c, bound_s};
    use crate::perm::{next_permutation, Permutation};

    fn check(r: &SearchResult) {
        assert!(verify_universal_word(&r.word).ok);
        assert_eq!(r.length, r.weight + r.n);
        assert!(bound_c(r.n) <= r.length.into());
    }

    #[test]
    fn greedy_examples() {
        let r = greedy_cycle_path(3).unwrap();
        check(&r);
        assert_eq!(r.length, 5);
        let r = greedy_cycle_path(4).unwrap();
        check(&r);
        assert!(bound_b(4) >= r.length.into());
        let r = greedy_cycle_path(1).unwrap();
        assert_eq!(r.word.to_string(), "1");
        assert_eq!(r.length, 1);
    }

    #[test]
    fn nearest_neighbor_examples() {
        let id = |n| Permutation::identity(n).inc_class();
        let r = nearest_neighbor_path(4, &id(4)).unwrap();
        check(&r);
        assert!(r.length <= 13);
        let r = nearest_neighbor_path(2, &id(2)).unwrap();
        assert_eq!(r.word.to_string(), "12");
        let r = nearest_neighbor_path(5, &id(5)).unwrap();
        check(&r);
        assert!(bound_s(5) >= r.length.into());
        assert!(r.length >= 35 && r.length <= 49, "{}", r.length);
    }

    /// Minimum covering-path weight over every visiting order.
    fn brute_force_min_weight(graph: &TransitionGraph) -> usize {
        let mut order: Vec<u8> = (0..graph.vertex_count() as u8).collect();
        let mut best = usize::MAX;
        loop {
            let w = order.windows(2).map(|e| graph.weight(e[0] as usize, e[1] as usize)).sum();
            best = best.min(w);
            if !next_permutation(&mut order) {
                return best;
            }
        }
    }

    #[test]
    fn exact_matches_brute_force() {
        for n in 1..=4 {
            let graph = build_graph(n, GraphKind::H).unwrap();
            let r = exact_min_word(n, &ExactConfig::default()).unwrap();
            check(&r);
            assert!(r.optimal);
            assert_eq!(r.weight, brute_force_min_weight(&graph), "n = {n}");
        }
        assert_eq!(exact_min_word(3, &ExactConfig::default()).unwrap().length, 5);
        assert_eq!(exact_min_word(4, &ExactConfig::default()).unwrap().length, 12);
    }

    #[test]
    fn lower_bound_is_admissible_on_optimal_paths() {
        for n in 3..=4 {
            let graph = build_graph(n, GraphKind::H).unwrap();
            let cycles = CycleStructure::new(&graph);
            let r = exact_min_word(n, &ExactConfig::default()).unwrap();
            let mut visited = vec![false; graph.vertex_count()];
            let mut so_far = 0;
            for (i, &x) in r.path.vertices.iter().enumerate() {
                if i > 0 {
                    so_far += graph.weight(r.path.vertices[i - 1], x);
                }
                visited[x] = true;
                assert!(so_far + cycles.lower_bound(&visited, x) <= r.weight);
            }
        }
    }

    #[test]
    fn incremental_runs_match_recount() {
        let graph = build_graph(5, GraphKind::H).unwrap();
        let cycles = CycleStructure::new(&graph);
        let r = greedy_cycle_path_in(&graph).unwrap();
        let shared_cfg = ExactConfig::default();
        let shared = Shared {
            best: AtomicUsize::new(usize::MAX),
            best_path: Mutex::new(Vec::new()),
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            next_start: AtomicUsize::new(0),
            started: Instant::now(),
            config: &shared_cfg,
            on_improve: &|_| {},
        };
        let order = vec![Vec::new(); graph.vertex_count()];
        let ctx = Context { n: 5, cycles: &cycles, order: &order, vertices: graph.vertex_count() };
        let mut s = Search::new(&ctx, &shared, r.path.vertices[0]);
        for &x in &r.path.vertices[1..] {
            s.mark(x);
            assert_eq!(s.bound_here(x), cycles.lower_bound(&s.visited, x));
        }
    }

    #[test]
    fn budgeted_search_reports_exhaustion() {
        let cfg = ExactConfig { node_limit: Some(10_000), ..Default::default() };
        let r = exact_min_word(6, &cfg).unwrap();
        check(&r);
        assert!(!r.optimal && r.budget_exhausted);
        assert!(bound_b(6) >= r.length.into());
    }

    #[test]
    fn methods_are_deterministic() {
        let a = greedy_cycle_path(6).unwrap();
        let b = greedy_cycle_path(6).unwrap();
        assert_eq!(a.word, b.word);
        let s = Permutation::identity(6).inc_class();
        assert_eq!(nearest_neighbor_path(6, &s).unwrap().word, nearest_neighbor_path(6, &s).unwrap().word);
    }
}
