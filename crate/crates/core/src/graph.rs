//! Transition graphs on equivalence classes of permutations.
//!
//! `H_n` has the `(n-1)!` value-shift classes as vertices; the weight of
//! `inc(a) → inc(b)` is the least number of letters appended to a word ending
//! in a member of `inc(a)` until a member of `inc(b)` ends it. `K_n` is the
//! same construction on rotation classes with rows of the permutation matrix
//! playing the role of letters. Vertices are indexed by the lexicographic rank
//! of their canonical representative.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{add_mod, canonical_rank, canonical_reps, factorial, sub_mod, IncClass, Permutation, RotClass};
use crate::toric::{word_to_matrix, ToricBinaryMatrix, UniversalWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphKind {
    /// Value-shift classes, columns appended.
    H,
    /// Rotation classes, rows appended.
    K,
}

/// Least `k` such that the last `n - k` letters of `current` are a prefix of
/// some value shift of `target`, together with that shifted member.
///
/// `current` may be any concrete permutation; `target` any member of the
/// destination class. Returns `k = 0` when both lie in the same class.
pub fn transition(current: &Permutation, target: &Permutation) -> (usize, Permutation) {
    let (k, s) = overlap(current.letters(), target.letters());
    if k == 0 {
        return (0, current.clone());
    }
    (k, target.shift_values(s as i64))
}

/// Weight and value shift of a transition between 0-based words.
#[inline]
pub(crate) fn overlap(cur: &[u8], tgt: &[u8]) -> (usize, u8) {
    let n = cur.len();
    let nn = n as u8;
    for k in 0..n {
        let s = sub_mod(cur[k], tgt[0], nn);
        if (1..n - k).all(|j| cur[k + j] == add_mod(tgt[j], s, nn)) {
            return (k, s);
        }
    }
    unreachable!("a single overlapping letter always matches")
}

fn check_sizes(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::SizeMismatch { left: a, right: b });
    }
    Ok(())
}

/// Weight of `a → b` in `H_n`.
pub fn edge_weight_h(a: &IncClass, b: &IncClass) -> Result<usize> {
    check_sizes(a.n(), b.n())?;
    Ok(transition(a.rep(), b.rep()).0)
}

/// Weight of `a → b` in `K_n`, by reduction to `H_n`: the rows of `M(π)` read
/// top to bottom spell `π⁻¹`, and rotating the columns of `M(π)` shifts the
/// values of `π⁻¹`.
pub fn edge_weight_k(a: &RotClass, b: &RotClass) -> Result<usize> {
    check_sizes(a.n(), b.n())?;
    let (ia, ib) = (a.rep().inverse().inc_class(), b.rep().inverse().inc_class());
    Ok(transition(ia.rep(), ib.rep()).0)
}

/// Weight of `a → b` in `K_n` computed directly on matrix rows: the least `k`
/// such that dropping the first `k` rows of `M(a)` leaves a prefix of the rows
/// of `M(b')` for some rotation `b'` of `b`.
pub fn edge_weight_k_rows(a: &RotClass, b: &RotClass) -> Result<usize> {
    check_sizes(a.n(), b.n())?;
    if a == b {
        return Ok(0);
    }
    let n = a.n();
    let ma = a.rep().perm_matrix().rows();
    let targets: Vec<Vec<Vec<u8>>> = b.members().iter().map(|m| m.perm_matrix().rows()).collect();
    for k in 1..=n {
        if targets.iter().any(|mb| ma[k..] == mb[..n - k]) {
            return Ok(k);
        }
    }
    Err(Error::Internal("no row overlap found".into()))
}

/// The class reached from `a` along its unique weight-1 edge: `inc(a·σ)`.
/// Equal to `a` when `a` is a fixed point.
pub fn weight1_successor(a: &IncClass) -> IncClass {
    a.rep().rotate_word(1).inc_class()
}

/// Default largest `n` for which graphs are built.
pub const DEFAULT_MAX_N: usize = 9;
/// Default largest `n` for which the weight matrix is stored.
pub const DEFAULT_DENSE_MAX_N: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphConfig {
    pub max_n: usize,
    pub dense_max_n: usize,
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self { max_n: DEFAULT_MAX_N, dense_max_n: DEFAULT_DENSE_MAX_N }
    }
}

/// `H_n` or `K_n`. Weights are stored for small `n` and recomputed from the
/// representatives otherwise; both modes answer identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionGraph {
    n: usize,
    kind: GraphKind,
    vertices: Vec<Permutation>,
    /// Row-major weights, present in dense mode.
    dense: Option<Vec<u8>>,
    /// For `K_n`, inverse representatives (as `H_n` members); empty for `H_n`.
    inverses: Vec<Permutation>,
}

pub fn build_graph(n: usize, kind: GraphKind) -> Result<TransitionGraph> {
    build_graph_with(n, kind, GraphConfig::default())
}

pub fn build_graph_with(n: usize, kind: GraphKind, config: GraphConfig) -> Result<TransitionGraph> {
    if n == 0 || n > config.max_n {
        return Err(Error::BudgetExceeded { n, limit: config.max_n });
    }
    let vertices = canonical_reps(n);
    let inverses = match kind {
        GraphKind::H => Vec::new(),
        GraphKind::K => vertices.iter().map(Permutation::inverse).collect(),
    };
    let mut g = TransitionGraph { n, kind, vertices, dense: None, inverses };
    if n <= config.dense_max_n {
        let v = g.vertex_count();
        let mut dense = vec![0u8; v * v];
        for a in 0..v {
            for b in 0..v {
                dense[a * v + b] = g.compute_weight(a, b) as u8;
            }
        }
        g.dense = Some(dense);
    }
    Ok(g)
}

impl TransitionGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    /// Canonical representative of vertex `v`.
    pub fn vertex(&self, v: usize) -> &Permutation {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[Permutation] {
        &self.vertices
    }

    /// Index of the vertex holding `p`'s class.
    pub fn index_of(&self, p: &Permutation) -> usize {
        match self.kind {
            GraphKind::H => canonical_rank(p.inc_class().rep()),
            GraphKind::K => canonical_rank(p.rot_class().rep()),
        }
    }

    fn compute_weight(&self, a: usize, b: usize) -> usize {
        if a == b {
            return 0;
        }
        match self.kind {
            GraphKind::H => overlap(self.vertices[a].letters(), self.vertices[b].letters()).0,
            GraphKind::K => overlap(self.inverses[a].letters(), self.inverses[b].letters()).0,
        }
    }

    pub fn weight(&self, a: usize, b: usize) -> usize {
        match &self.dense {
            Some(d) => d[a * self.vertex_count() + b] as usize,
            None => self.compute_weight(a, b),
        }
    }

    pub fn weight_matrix(&self) -> Vec<Vec<usize>> {
        let v = self.vertex_count();
        (0..v).map(|a| (0..v).map(|b| self.weight(a, b)).collect()).collect()
    }

    /// The weight-1 out-neighbour of `v`, or `None` for a fixed point.
    pub fn successor(&self, v: usize) -> Option<usize> {
        let next = match self.kind {
            GraphKind::H => canonical_rank(self.vertices[v].rotate_word(1).inc_class().rep()),
            GraphKind::K => {
                let inv = self.inverses[v].rotate_word(1).inc_class();
                canonical_rank(inv.rep().inverse().rot_class().rep())
            }
        };
        (next != v).then_some(next)
    }

    pub fn path_weight(&self, path: &CoveringPath) -> usize {
        path.vertices.windows(2).map(|e| self.weight(e[0], e[1])).sum()
    }

    /// CSV weight matrix: a header of vertex labels, then one row per vertex.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("vertex");
        for v in &self.vertices {
            let _ = write!(s, ",{v}");
        }
        s.push('\n');
        for a in 0..self.vertex_count() {
            let _ = write!(s, "{}", self.vertices[a]);
            for b in 0..self.vertex_count() {
                let _ = write!(s, ",{}", self.weight(a, b));
            }
            s.push('\n');
        }
        s
    }

    /// DOT digraph with every edge of weight at most `cutoff`.
    pub fn to_dot(&self, cutoff: usize) -> String {
        let name = match self.kind {
            GraphKind::H => "inc",
            GraphKind::K => "rot",
        };
        let mut s = format!("digraph {}{} {{\n", if self.kind == GraphKind::H { "H" } else { "K" }, self.n);
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{name}({v})\"];");
        }
        for a in 0..self.vertex_count() {
            for b in 0..self.vertex_count() {
                let w = self.weight(a, b);
                if a != b && w <= cutoff {
                    let _ = writeln!(s, "  v{a} -> v{b} [label=\"{w}\"];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// A walk visiting every vertex at least once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringPath {
    pub n: usize,
    pub kind: GraphKind,
    pub vertices: Vec<usize>,
}

impl CoveringPath {
    pub fn new(n: usize, kind: GraphKind, vertices: Vec<usize>) -> Result<Self> {
        let path = Self { n, kind, vertices };
        path.validate()?;
        Ok(path)
    }

    fn validate(&self) -> Result<()> {
        let count = factorial(self.n.saturating_sub(1));
        if self.n == 0 || self.vertices.is_empty() {
            return Err(Error::MalformedPath("empty path".into()));
        }
        if let Some(&v) = self.vertices.iter().find(|&&v| v >= count) {
            return Err(Error::MalformedPath(format!("vertex index {v} out of range")));
        }
        if self.vertices.windows(2).any(|e| e[0] == e[1]) {
            return Err(Error::MalformedPath("consecutive vertices repeat".into()));
        }
        let mut seen = vec![false; count];
        self.vertices.iter().for_each(|&v| seen[v] = true);
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedPath(format!("vertex {v} is never visited")));
        }
        Ok(())
    }

    /// Total weight, recomputed from the canonical representatives.
    pub fn weight(&self) -> usize {
        let reps = canonical_reps(self.n);
        let key = |v: usize| match self.kind {
            GraphKind::H => reps[v].clone(),
            GraphKind::K => reps[v].inverse(),
        };
        self.vertices.windows(2).map(|e| transition(&key(e[0]), &key(e[1])).0).sum()
    }
}

/// Spells the word of an `H_n` covering path: the first representative, then
/// for each edge of weight `k` the last `k` letters of the class member that
/// the transition lands on.
pub fn path_to_word(path: &CoveringPath) -> Result<UniversalWord> {
    path.validate()?;
    let reps = canonical_reps(path.n);
    let key = |v: usize| match path.kind {
        GraphKind::H => reps[v].clone(),
        GraphKind::K => reps[v].inverse(),
    };
    let mut current = key(path.vertices[0]);
    let mut letters = current.letters().to_vec();
    for &v in &path.vertices[1..] {
        let (k, landed) = transition(&current, &key(v));
        letters.extend_from_slice(&landed.letters()[path.n - k..]);
        current = landed;
    }
    Ok(UniversalWord::from_zero_based(path.n, letters))
}

/// The superpermutation matrix built from a covering path: `n` rows for an
/// `H_n` path, `n` columns for a `K_n` path.
pub fn path_to_matrix(path: &CoveringPath) -> Result<ToricBinaryMatrix> {
    let t = word_to_matrix(&path_to_word(path)?);
    Ok(match path.kind {
        GraphKind::H => t,
        GraphKind::K => t.transpose(),
    })
}

/// Reads the `H_n` path of a universal word: every length-`n` window that is a
/// permutation, in order, with consecutive repeats of one class merged.
pub fn word_to_path(u: &UniversalWord) -> Result<CoveringPath> {
    let report = verify_universal_word(u);
    if !report.ok {
        return Err(Error::NotUniversal { missing: report.missing.len() });
    }
    let mut vertices: Vec<usize> = Vec::new();
    for (_, p) in u.permutation_windows() {
        let v = canonical_rank(p.inc_class().rep());
        if vertices.last() != Some(&v) {
            vertices.push(v);
        }
    }
    CoveringPath::new(u.n(), GraphKind::H, vertices)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalityReport {
    pub n: usize,
    pub ok: bool,
    pub classes: usize,
    pub missing: Vec<Permutation>,
}

/// Whether every value-shift class has a member among the length-`n`
/// factors of `u`; `missing` lists the canonical representatives absent.
pub fn verify_universal_word(u: &UniversalWord) -> UniversalityReport {
    let n = u.n();
    let classes = factorial(n - 1);
    let mut seen = vec![false; classes];
    for (_, p) in u.permutation_windows() {
        seen[canonical_rank(p.inc_class().rep())] = true;
    }
    let missing: Vec<Permutation> =
        canonical_reps(n).into_iter().zip(&seen).filter(|(_, &s)| !s).map(|(r, _)| r).collect();
    UniversalityReport { n, ok: missing.is_empty(), classes, missing }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn inc(s: &str) -> IncClass {
        p(s).inc_class()
    }

    fn rot(s: &str) -> RotClass {
        p(s).rot_class()
    }

    #[test]
    fn edge_weight_h_examples() {
        assert_eq!(edge_weight_h(&inc("123"), &inc("132")).unwrap(), 2);
        assert_eq!(edge_weight_h(&inc("1243"), &inc("1324")).unwrap(), 1);
        assert_eq!(edge_weight_h(&inc("1342"), &inc("1342")).unwrap(), 0);
        assert!(edge_weight_h(&inc("12"), &inc("123")).is_err());
    }

    #[test]
    fn edge_weight_k_examples() {
        assert_eq!(edge_weight_k(&rot("1234"), &rot("1243")).unwrap(), 2);
        assert_eq!(edge_weight_k(&rot("1243"), &rot("1324")).unwrap(), 1);
        assert_eq!(edge_weight_k(&rot("1423"), &rot("1423")).unwrap(), 0);
        assert_eq!(edge_weight_k_rows(&rot("1234"), &rot("1243")).unwrap(), 2);
    }

    #[test]
    fn weight1_successor_examples() {
        assert_eq!(weight1_successor(&inc("1234")), inc("1234"));
        assert_eq!(weight1_successor(&inc("1243")), inc("1324"));
        assert_eq!(weight1_successor(&inc("1423")), inc("1342"));
    }

    #[test]
    fn small_graphs() {
        let g = build_graph(2, GraphKind::H).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.weight_matrix(), vec![vec![0]]);
        let g = build_graph(1, GraphKind::K).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(build_graph(10, GraphKind::H).unwrap_err(), Error::BudgetExceeded { n: 10, limit: 9 });
    }

    #[test]
    fn lazy_and_dense_agree() {
        for kind in [GraphKind::H, GraphKind::K] {
            let dense = build_graph(5, kind).unwrap();
            let lazy = build_graph_with(5, kind, GraphConfig { max_n: 9, dense_max_n: 0 }).unwrap();
            assert!(dense.is_dense() && !lazy.is_dense());
            assert_eq!(dense.weight_matrix(), lazy.weight_matrix());
        }
    }

    #[test]
    fn path_word_examples() {
        let single = CoveringPath::new(3, GraphKind::H, vec![0]).unwrap_err();
        assert!(matches!(single, Error::MalformedPath(_)));
        let one = CoveringPath::new(2, GraphKind::H, vec![0]).unwrap();
        assert_eq!(path_to_word(&one).unwrap().to_string(), "12");

        let u = UniversalWord::parse("12321", 3).unwrap();
        let path = word_to_path(&u).unwrap();
        assert_eq!(path.vertices, vec![0, 1]);
        assert_eq!(path.weight(), 2);

        let not_universal = UniversalWord::parse("123", 3).unwrap();
        assert_eq!(word_to_path(&not_universal), Err(Error::NotUniversal { missing: 1 }));
    }

    #[test]
    fn verify_word_examples() {
        assert!(verify_universal_word(&UniversalWord::parse("123421342143", 4).unwrap()).ok);
        let r = verify_universal_word(&UniversalWord::parse("12312", 3).unwrap());
        assert!(!r.ok);
        assert_eq!(r.missing, vec![p("132")]);
        assert!(verify_universal_word(&UniversalWord::parse("123121321", 3).unwrap()).ok);
        assert!(!verify_universal_word(&UniversalWord::parse("12", 3).unwrap()).ok);
    }

    #[test]
    fn dot_export_keeps_weight_one_edges() {
        let g = build_graph(4, GraphKind::H).unwrap();
        let dot = g.to_dot(1);
        assert!(dot.starts_with("digraph H4 {"));
        assert!(dot.contains("v1 -> v2 [label=\"1\"]"));
        assert_eq!(dot.matches("->").count(), 4);
    }
}
