//! Library results against independent brute-force recomputations.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use superperm::census::census_formula;
use superperm::graph::{build_graph, GraphKind, TransitionGraph};
use superperm::pathfinder::{exact_min_word, ExactConfig};
use superperm::perm::canonical_reps;
use superperm::Permutation;

/// Lexicographic permutations of `0..n` as plain vectors.
fn perms(n: usize) -> Vec<Vec<u8>> {
    fn go(prefix: &mut Vec<u8>, n: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in 0..n as u8 {
            if !prefix.contains(&x) {
                prefix.push(x);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

fn shift(w: &[u8], s: u8, n: usize) -> Vec<u8> {
    w.iter().map(|&x| (x + s) % n as u8).collect()
}

/// Columns appended to `a` until some value shift of `b` ends the word.
fn h_weight_oracle(a: &[u8], b: &[u8]) -> usize {
    let n = a.len();
    (0..=n)
        .find(|&k| perms(n).iter().any(|q| q[..n - k] == a[k..] && (0..n as u8).any(|s| shift(b, s, n) == *q)))
        .unwrap()
}

/// Rows of a permutation matrix, each as the column holding its 1.
fn matrix_rows(p: &[u8]) -> Vec<u8> {
    let mut rows = vec![0; p.len()];
    for (j, &i) in p.iter().enumerate() {
        rows[i as usize] = j as u8;
    }
    rows
}

/// Rows appended below `M(a)` until a rotation of `M(b)` sits at the bottom.
fn k_weight_oracle(a: &[u8], b: &[u8]) -> usize {
    let n = a.len();
    let ra = matrix_rows(a);
    let targets: Vec<Vec<u8>> = (0..n).map(|r| matrix_rows(&[&b[r..], &b[..r]].concat())).collect();
    (0..=n).find(|&k| targets.iter().any(|t| t[..n - k] == ra[k..])).unwrap()
}

fn reps(n: usize) -> Vec<Vec<u8>> {
    canonical_reps(n).iter().map(|p| p.letters().to_vec()).collect()
}

#[test]
fn h_weights_match_brute_force() {
    for n in 2..=6 {
        let g = build_graph(n, GraphKind::H).unwrap();
        let r = reps(n);
        for a in 0..r.len() {
            for b in 0..r.len() {
                assert_eq!(g.weight(a, b), h_weight_oracle(&r[a], &r[b]), "n={n} {a}->{b}");
            }
        }
    }
}

#[test]
fn k_weights_match_brute_force() {
    for n in 2..=5 {
        let g = build_graph(n, GraphKind::K).unwrap();
        let r = reps(n);
        for a in 0..r.len() {
            for b in 0..r.len() {
                assert_eq!(g.weight(a, b), k_weight_oracle(&r[a], &r[b]), "n={n} {a}->{b}");
            }
        }
    }
}

#[test]
fn four_letter_graphs() {
    let h = [
        [0, 2, 3, 3, 3, 3],
        [3, 0, 1, 3, 2, 2],
        [3, 3, 0, 2, 1, 3],
        [3, 1, 2, 0, 3, 3],
        [2, 2, 3, 1, 0, 3],
        [3, 3, 3, 3, 2, 0],
    ];
    let k = [
        [0, 2, 3, 3, 3, 3],
        [3, 0, 1, 2, 3, 2],
        [3, 3, 0, 1, 2, 3],
        [2, 2, 3, 0, 1, 3],
        [3, 1, 2, 3, 0, 3],
        [3, 3, 3, 2, 3, 0],
    ];
    for (kind, want) in [(GraphKind::H, h), (GraphKind::K, k)] {
        let got = build_graph(4, kind).unwrap().weight_matrix();
        let want: Vec<Vec<usize>> = want.iter().map(|r| r.to_vec()).collect();
        assert_eq!(got, want, "{kind:?}");
    }
}

#[test]
fn h_weights_obey_triangle_inequality() {
    for n in 3..=5 {
        let g = build_graph(n, GraphKind::H).unwrap();
        let v = g.vertex_count();
        for a in 0..v {
            for b in 0..v {
                for c in 0..v {
                    assert!(g.weight(a, c) <= g.weight(a, b) + g.weight(b, c), "n={n} {a} {b} {c}");
                }
            }
        }
    }
}

/// Held-Karp over visiting orders: the least weight of a path through every
/// vertex exactly once.
fn held_karp(g: &TransitionGraph) -> usize {
    let v = g.vertex_count();
    let full = 1usize << v;
    let mut dp = vec![u8::MAX; full * v];
    for s in 0..v {
        dp[(1 << s) * v + s] = 0;
    }
    for mask in 1..full {
        for last in 0..v {
            let c = dp[mask * v + last];
            if c == u8::MAX {
                continue;
            }
            for next in (0..v).filter(|&x| mask & (1 << x) == 0) {
                let slot = &mut dp[(mask | 1 << next) * v + next];
                *slot = (*slot).min(c + g.weight(last, next) as u8);
            }
        }
    }
    (0..v).map(|l| dp[(full - 1) * v + l] as usize).min().unwrap()
}

#[test]
fn exact_search_matches_held_karp() {
    for n in 1..=4 {
        let g = build_graph(n, GraphKind::H).unwrap();
        let r = exact_min_word(n, &ExactConfig::default()).unwrap();
        assert!(r.optimal);
        assert_eq!(r.weight, held_karp(&g), "n = {n}");
    }
}

/// About 25 s and 400 MB in an optimized build.
#[test]
#[ignore]
fn exact_search_matches_held_karp_five() {
    let g = build_graph(5, GraphKind::H).unwrap();
    let r = exact_min_word(5, &ExactConfig::default()).unwrap();
    assert!(r.optimal);
    assert_eq!(r.weight, held_karp(&g));
    assert_eq!(r.length, 38);
}

#[test]
fn parallel_exact_search_agrees() {
    let cfg = ExactConfig { threads: 4, ..Default::default() };
    for n in 3..=5 {
        let a = exact_min_word(n, &cfg).unwrap();
        let b = exact_min_word(n, &ExactConfig::default()).unwrap();
        assert!(a.optimal && b.optimal);
        assert_eq!(a.length, b.length);
    }
}

#[test]
fn censuses_of_composite_sizes() {
    let expect: [(usize, &[(usize, u32)]); 3] =
        [(6, &[(1, 2), (2, 2), (3, 2), (6, 18)]), (7, &[(1, 6), (7, 102)]), (8, &[(1, 4), (2, 2), (4, 10), (8, 624)])];
    for (n, counts) in expect {
        let want: BTreeMap<usize, BigUint> = counts.iter().map(|&(d, c)| (d, BigUint::from(c))).collect();
        assert_eq!(census_formula(n).unwrap().counts, want, "n = {n}");
    }
}

#[test]
fn weight_one_successor_is_a_rotation() {
    for p in canonical_reps(6) {
        let next = superperm::graph::weight1_successor(&p.inc_class());
        let rotated: Permutation = p.rotate_word(1);
        assert!(next.contains(&rotated));
    }
}
