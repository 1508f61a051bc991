//! Classical superpermutations over `S_n`: verification, the recursive
//! doubling construction, the overlap weight between permutations and the
//! known length bounds.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::census::big_factorial;
use crate::error::{Error, Result};
use crate::perm::{factorial, Permutation};
use crate::toric::UniversalWord;

/// Largest `n` accepted by the exhaustive verifier (one bit per permutation).
pub const VERIFY_MAX_N: usize = 10;

/// A word containing every permutation of `S_n` as a factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superpermutation {
    word: UniversalWord,
}

impl Superpermutation {
    pub fn new(word: UniversalWord) -> Result<Self> {
        let report = is_superpermutation(&word)?;
        if !report.ok {
            return Err(Error::NotUniversal { missing: report.missing.len() });
        }
        Ok(Self { word })
    }

    pub fn n(&self) -> usize {
        self.word.n()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &UniversalWord {
        &self.word
    }
}

impl fmt::Display for Superpermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuperpermutationReport {
    pub n: usize,
    pub ok: bool,
    pub found: usize,
    pub missing: Vec<Permutation>,
}

/// Lehmer rank of a 0-based permutation word.
fn lehmer_rank(w: &[u8]) -> usize {
    let n = w.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = w[i + 1..].iter().filter(|&&x| x < w[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

/// Checks every length-`n` factor against all `n!` permutations.
pub fn is_superpermutation(w: &UniversalWord) -> Result<SuperpermutationReport> {
    let n = w.n();
    if n > VERIFY_MAX_N {
        return Err(Error::BudgetExceeded { n, limit: VERIFY_MAX_N });
    }
    let mut seen = vec![false; factorial(n)];
    for (_, p) in w.permutation_windows() {
        seen[lehmer_rank(p.letters())] = true;
    }
    let missing: Vec<Permutation> =
        crate::perm::all_permutations(n).into_iter().zip(&seen).filter(|(_, &s)| !s).map(|(p, _)| p).collect();
    Ok(SuperpermutationReport { n, ok: missing.is_empty(), found: seen.len() - missing.len(), missing })
}

/// The doubling construction. From a superpermutation on `n-1` letters, each
/// permutation `π` in order of first appearance becomes `π n π`, and the
/// blocks are joined with their longest suffix/prefix overlap.
pub fn ashlock_tillotson(n: usize) -> Result<Superpermutation> {
    if n == 0 {
        return Err(Error::OutOfDomain { n, min: 1 });
    }
    if n > VERIFY_MAX_N {
        return Err(Error::BudgetExceeded { n, limit: VERIFY_MAX_N });
    }
    let mut word: Vec<u8> = vec![0];
    for k in 2..=n {
        let prev = UniversalWord::from_zero_based(k - 1, word);
        let mut seen = std::collections::HashSet::new();
        let mut next: Vec<u8> = Vec::new();
        for (_, p) in prev.permutation_windows() {
            if !seen.insert(p.clone()) {
                continue;
            }
            let mut block = p.letters().to_vec();
            block.push((k - 1) as u8);
            block.extend_from_slice(p.letters());
            let ov = longest_overlap(&next, &block);
            next.extend_from_slice(&block[ov..]);
        }
        word = next;
    }
    Superpermutation::new(UniversalWord::from_zero_based(n, word))
}

/// Length of the longest suffix of `a` that is a prefix of `b`.
fn longest_overlap(a: &[u8], b: &[u8]) -> usize {
    (0..=a.len().min(b.len())).rev().find(|&k| a[a.len() - k..] == b[..k]).unwrap_or(0)
}

/// Fewest letters `u` such that `b` is a suffix of `a·u`.
pub fn g_weight(a: &Permutation, b: &Permutation) -> Result<usize> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch { left: a.n(), right: b.n() });
    }
    let n = a.n();
    Ok(n - longest_overlap(a.letters(), b.letters()))
}

/// A walk through permutations of `S_n`, joined with minimal overlaps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationPath {
    pub n: usize,
    pub vertices: Vec<Permutation>,
}

impl PermutationPath {
    pub fn new(vertices: Vec<Permutation>) -> Result<Self> {
        let n = vertices.first().map(Permutation::n).ok_or_else(|| Error::MalformedPath("empty path".into()))?;
        if let Some(bad) = vertices.iter().find(|p| p.n() != n) {
            return Err(Error::SizeMismatch { left: n, right: bad.n() });
        }
        Ok(Self { n, vertices })
    }

    pub fn weight(&self) -> usize {
        self.vertices.windows(2).map(|e| g_weight(&e[0], &e[1]).expect("sizes checked")).sum()
    }
}

/// Spells a path: the first permutation, then the `g_weight` new letters of
/// each following one. The result has length `weight + n`.
pub fn perm_path_to_word(path: &PermutationPath) -> UniversalWord {
    let mut letters = path.vertices[0].letters().to_vec();
    for e in path.vertices.windows(2) {
        let w = g_weight(&e[0], &e[1]).expect("sizes checked");
        letters.extend_from_slice(&e[1].letters()[path.n - w..]);
    }
    UniversalWord::from_zero_based(path.n, letters)
}

/// The permutation factors of `u` in order of position.
///
/// The word must start and end with a permutation and consecutive
/// permutation factors must be joined by a maximal overlap, so that the path
/// weight is exactly `|u| - n`.
pub fn word_to_perm_path(u: &UniversalWord) -> Result<PermutationPath> {
    let n = u.n();
    let windows: Vec<(usize, Permutation)> = u.permutation_windows().collect();
    let (Some(first), Some(last)) = (windows.first(), windows.last()) else {
        return Err(Error::MalformedPath("word has no permutation factor".into()));
    };
    if first.0 != 0 || last.0 + n != u.len() {
        return Err(Error::MalformedPath("word must start and end with a permutation".into()));
    }
    for e in windows.windows(2) {
        let gap = e[1].0 - e[0].0;
        if g_weight(&e[0].1, &e[1].1)? != gap {
            return Err(Error::MalformedPath(format!("{} and {} overlap more than in the word", e[0].1, e[1].1)));
        }
    }
    PermutationPath::new(windows.into_iter().map(|(_, p)| p).collect())
}

/// Published lower and upper bounds on the minimal superpermutation length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicBounds {
    pub n: usize,
    #[serde(serialize_with = "ser_big")]
    pub lower: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub upper: BigUint,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `n! + (n-1)! + (n-2)! + n - 3`, for `n ≥ 3`.
pub fn classic_lower_bound(n: usize) -> Result<BigUint> {
    if n < 3 {
        return Err(Error::OutOfDomain { n, min: 3 });
    }
    Ok(big_factorial(n) + big_factorial(n - 1) + big_factorial(n - 2) + (n - 3))
}

/// `n! + (n-1)! + (n-2)! + (n-3)! + n - 3`, for `n ≥ 4`.
pub fn classic_upper_bound(n: usize) -> Result<BigUint> {
    if n < 4 {
        return Err(Error::OutOfDomain { n, min: 4 });
    }
    Ok(big_factorial(n) + big_factorial(n - 1) + big_factorial(n - 2) + big_factorial(n - 3) + (n - 3))
}

pub fn classic_bounds(n: usize) -> Result<ClassicBounds> {
    Ok(ClassicBounds { n, lower: classic_lower_bound(n)?, upper: classic_upper_bound(n)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str, n: usize) -> UniversalWord {
        UniversalWord::parse(s, n).unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn verification_examples() {
        assert!(is_superpermutation(&word("121", 2)).unwrap().ok);
        assert!(is_superpermutation(&word("123121321", 3)).unwrap().ok);
        let r = is_superpermutation(&word("1232", 3)).unwrap();
        assert!(!r.ok);
        assert!(r.missing.contains(&perm("213")));
        assert_eq!(r.found, 1);
    }

    #[test]
    fn lehmer_rank_matches_lex_order() {
        for (i, p) in crate::perm::all_permutations(5).iter().enumerate() {
            assert_eq!(lehmer_rank(p.letters()), i);
        }
    }

    #[test]
    fn doubling_construction() {
        let lens: Vec<usize> = (1..=6).map(|n| ashlock_tillotson(n).unwrap().len()).collect();
        assert_eq!(lens, vec![1, 3, 9, 33, 153, 873]);
        assert_eq!(ashlock_tillotson(1).unwrap().to_string(), "1");
        assert_eq!(ashlock_tillotson(2).unwrap().to_string(), "121");
        assert_eq!(ashlock_tillotson(3).unwrap().to_string(), "123121321");
    }

    #[test]
    fn g_weight_examples() {
        assert_eq!(g_weight(&perm("123"), &perm("231")).unwrap(), 1);
        // only the last letter 3 carries over
        assert_eq!(g_weight(&perm("123"), &perm("321")).unwrap(), 2);
        assert_eq!(g_weight(&perm("123"), &perm("123")).unwrap(), 0);
        assert_eq!(g_weight(&perm("123"), &perm("213")).unwrap(), 3);
        assert_eq!(g_weight(&perm("12"), &perm("123")), Err(Error::SizeMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn path_word_examples() {
        let path = PermutationPath::new(vec![perm("123"), perm("231"), perm("312")]).unwrap();
        assert_eq!(path.weight(), 2);
        let w = perm_path_to_word(&path);
        assert_eq!(w.to_string(), "12312");
        assert_eq!(is_superpermutation(&w).unwrap().found, 3);

        let p = word_to_perm_path(&word("123121321", 3)).unwrap();
        assert_eq!(p.weight(), 6);
        assert_eq!(p.vertices.len(), 6);

        let at4 = ashlock_tillotson(4).unwrap();
        let p4 = word_to_perm_path(at4.word()).unwrap();
        assert_eq!(p4.weight(), 29);
        assert_eq!(&perm_path_to_word(&p4), at4.word());

        assert!(word_to_perm_path(&word("1123", 3)).is_err());
    }

    #[test]
    fn bounds_examples() {
        let b = classic_bounds(6).unwrap();
        assert_eq!((b.lower, b.upper), (867u32.into(), 873u32.into()));
        assert_eq!(classic_lower_bound(4).unwrap(), 33u32.into());
        assert_eq!(classic_upper_bound(5).unwrap(), 154u32.into());
        assert_eq!(classic_lower_bound(2), Err(Error::OutOfDomain { n: 2, min: 3 }));
        assert_eq!(classic_upper_bound(3), Err(Error::OutOfDomain { n: 3, min: 4 }));
        for n in 3..=6 {
            assert!(classic_lower_bound(n).unwrap() <= BigUint::from(ashlock_tillotson(n).unwrap().len()));
        }
    }
}
