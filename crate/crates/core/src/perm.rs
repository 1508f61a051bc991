//! Permutations in one-line form and the two cyclic actions on them.
//!
//! A permutation of `1..=n` is stored as its one-line word `π(1) … π(n)`.
//! Internally the letters are 0-based; every public constructor, accessor
//! and text format is 1-based.
//!
//! Two actions of the cyclic shift `σ = 2 3 … n 1` matter here:
//!
//! * value shift `π ↦ σ^k π` adds `k` (mod `n`) to every letter. Its orbits
//!   are the [`IncClass`]es, the vertices of the column graph.
//! * word rotation `π ↦ π σ^k` rotates the word left by `k`. Its orbits are
//!   the [`RotClass`]es, the vertices of the row graph.
//!
//! Both class types use the member whose first letter is 1 as canonical
//! representative, and order classes lexicographically by that word.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    word: Vec<u8>,
}

impl Permutation {
    /// Builds a permutation from its 1-based one-line word.
    pub fn from_word(word: &[usize]) -> Result<Self> {
        let n = word.len();
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::NotAPermutation(format!("length {n}")));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &v in word {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::NotAPermutation(format!("{word:?}")));
            }
            seen[v - 1] = true;
            out.push((v - 1) as u8);
        }
        Ok(Self { word: out })
    }

    /// Builds a permutation from 0-based letters without validation.
    pub(crate) fn from_zero_based_unchecked(word: Vec<u8>) -> Self {
        debug_assert!(is_bijection(&word));
        Self { word }
    }

    /// Builds a permutation from 0-based letters.
    pub fn from_zero_based(word: Vec<u8>) -> Result<Self> {
        if word.is_empty() || !is_bijection(&word) {
            return Err(Error::NotAPermutation(format!("{word:?}")));
        }
        Ok(Self { word })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1 && n <= u8::MAX as usize);
        Self { word: (0..n as u8).collect() }
    }

    /// The cyclic shift `σ(i) = i + 1 (mod n)`, i.e. the word `2 3 … n 1`.
    pub fn sigma(n: usize) -> Self {
        assert!(n >= 1 && n <= u8::MAX as usize);
        Self { word: (0..n).map(|i| ((i + 1) % n) as u8).collect() }
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    /// 0-based letters.
    pub fn letters(&self) -> &[u8] {
        &self.word
    }

    /// 1-based one-line word.
    pub fn word(&self) -> Vec<usize> {
        self.word.iter().map(|&v| v as usize + 1).collect()
    }

    /// `π(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.word[i - 1] as usize + 1
    }

    /// `(a ∘ b)(i) = a(b(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch { left: self.n(), right: other.n() });
        }
        let word = other.word.iter().map(|&b| self.word[b as usize]).collect();
        Ok(Self { word })
    }

    pub fn inverse(&self) -> Permutation {
        let mut word = vec![0u8; self.n()];
        for (i, &v) in self.word.iter().enumerate() {
            word[v as usize] = i as u8;
        }
        Self { word }
    }

    /// `σ^k ∘ π`: adds `k` to every letter, modulo `n`.
    pub fn shift_values(&self, k: i64) -> Permutation {
        let n = self.n() as i64;
        let k = k.rem_euclid(n) as u8;
        let n = n as u8;
        Self { word: self.word.iter().map(|&v| add_mod(v, k, n)).collect() }
    }

    /// `π ∘ σ^k`: rotates the word left by `k`.
    pub fn rotate_word(&self, k: i64) -> Permutation {
        let k = k.rem_euclid(self.n() as i64) as usize;
        let mut word = self.word.clone();
        word.rotate_left(k);
        Self { word }
    }

    pub fn inc_class(&self) -> IncClass {
        let k = self.word[0];
        let n = self.n() as u8;
        let word = self.word.iter().map(|&v| sub_mod(v, k, n)).collect();
        IncClass { rep: Self { word } }
    }

    pub fn rot_class(&self) -> RotClass {
        let pos = self.word.iter().position(|&v| v == 0).expect("bijection contains 0");
        RotClass { rep: self.rotate_word(pos as i64) }
    }

    /// `M(π)`: column `j` is the basis vector `e_{π(j)}`.
    pub fn perm_matrix(&self) -> PermMatrix {
        let n = self.n();
        let mut entries = vec![0u8; n * n];
        for (j, &v) in self.word.iter().enumerate() {
            entries[v as usize * n + j] = 1;
        }
        PermMatrix { n, entries }
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(i, &v)| i == v as usize)
    }
}

#[inline]
pub(crate) fn add_mod(v: u8, k: u8, n: u8) -> u8 {
    let s = v as u16 + k as u16;
    (s % n as u16) as u8
}

#[inline]
pub(crate) fn sub_mod(v: u8, k: u8, n: u8) -> u8 {
    ((v as u16 + n as u16 - k as u16) % n as u16) as u8
}

fn is_bijection(word: &[u8]) -> bool {
    let n = word.len();
    let mut seen = vec![false; n];
    for &v in word {
        let v = v as usize;
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Writes a 1-based word: digits when every letter is a single digit,
/// comma-separated integers otherwise.
pub(crate) fn write_letters(f: &mut impl fmt::Write, letters: &[u8], n: usize) -> fmt::Result {
    if n <= 9 {
        for &v in letters {
            write!(f, "{}", v + 1)?;
        }
    } else {
        for (i, &v) in letters.iter().enumerate() {
            if i > 0 {
                f.write_char(',')?;
            }
            write!(f, "{}", v + 1)?;
        }
    }
    Ok(())
}

/// Parses a 1-based word in either text format.
pub(crate) fn parse_letters(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty word".into()));
    }
    if s.contains(',') {
        s.split(',').map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}")))).collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Parse(format!("unexpected character {c:?}")))
            })
            .collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.word, self.n())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::from_word(&parse_letters(s)?)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Class of `π` under value shift; `rep` starts with 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IncClass {
    rep: Permutation,
}

impl IncClass {
    pub fn rep(&self) -> &Permutation {
        &self.rep
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    /// The `n` members `σ^k rep`, `k = 0..n`.
    pub fn members(&self) -> Vec<Permutation> {
        (0..self.n() as i64).map(|k| self.rep.shift_values(k)).collect()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.n() == self.n() && p.inc_class() == *self
    }
}

impl fmt::Display for IncClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inc({})", self.rep)
    }
}

/// Class of `π` under word rotation; `rep` starts with 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RotClass {
    rep: Permutation,
}

impl RotClass {
    pub fn rep(&self) -> &Permutation {
        &self.rep
    }

    pub fn n(&self) -> usize {
        self.rep.n()
    }

    pub fn members(&self) -> Vec<Permutation> {
        (0..self.n() as i64).map(|k| self.rep.rotate_word(k)).collect()
    }
}

impl fmt::Display for RotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rot({})", self.rep)
    }
}

/// An `n×n` 0/1 matrix with exactly one 1 per row and column.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PermMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl PermMatrix {
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotAPermutationMatrix("matrix is not square".into()));
        }
        let entries: Vec<u8> = rows.iter().flatten().copied().collect();
        if entries.iter().any(|&e| e > 1) {
            return Err(Error::NotAPermutationMatrix("entries must be 0 or 1".into()));
        }
        for i in 0..n {
            let row: u32 = (0..n).map(|j| entries[i * n + j] as u32).sum();
            let col: u32 = (0..n).map(|j| entries[j * n + i] as u32).sum();
            if row != 1 {
                return Err(Error::NotAPermutationMatrix(format!("row {} sums to {row}", i + 1)));
            }
            if col != 1 {
                return Err(Error::NotAPermutationMatrix(format!("column {} sums to {col}", i + 1)));
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.entries.chunks(self.n).map(<[u8]>::to_vec).collect()
    }

    pub fn transpose(&self) -> PermMatrix {
        let n = self.n;
        let mut entries = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j];
            }
        }
        PermMatrix { n, entries }
    }

    /// Reads the permutation back: `π(j)` is the row holding column `j`'s 1.
    pub fn to_permutation(&self) -> Permutation {
        let n = self.n;
        let word = (0..n).map(|j| (0..n).find(|&i| self.entries[i * n + j] == 1).expect("validated") as u8).collect();
        Permutation::from_zero_based_unchecked(word)
    }
}

/// Inverse of [`Permutation::perm_matrix`].
pub fn matrix_to_perm(m: &PermMatrix) -> Permutation {
    m.to_permutation()
}

/// Advances `word` to the next permutation in lexicographic order.
pub(crate) fn next_permutation(word: &mut [u8]) -> bool {
    if word.len() < 2 {
        return false;
    }
    let mut i = word.len() - 1;
    while i > 0 && word[i - 1] >= word[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = word.len() - 1;
    while word[j] <= word[i - 1] {
        j -= 1;
    }
    word.swap(i - 1, j);
    word[i..].reverse();
    true
}

/// All of `S_n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut word: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::new();
    loop {
        out.push(Permutation::from_zero_based_unchecked(word.clone()));
        if !next_permutation(&mut word) {
            break;
        }
    }
    out
}

/// Canonical representatives (first letter 1) in lexicographic order. The
/// same list serves both class types.
pub fn canonical_reps(n: usize) -> Vec<Permutation> {
    let mut word: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::new();
    loop {
        out.push(Permutation::from_zero_based_unchecked(word.clone()));
        if !next_permutation(&mut word[1..]) {
            break;
        }
    }
    out
}

/// Position of a canonical representative in [`canonical_reps`] order.
pub fn canonical_rank(rep: &Permutation) -> usize {
    let w = rep.letters();
    debug_assert_eq!(w[0], 0);
    let tail = &w[1..];
    let mut rank = 0usize;
    for i in 0..tail.len() {
        let smaller = tail[i + 1..].iter().filter(|&&v| v < tail[i]).count();
        rank = rank * (tail.len() - i) + smaller;
    }
    rank
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}
