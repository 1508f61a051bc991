//! Toric 0/1 matrices and universal words.
//!
//! A [`ToricBinaryMatrix`] identifies its top and bottom rows and its left and
//! right columns, so a square block may start at any of the `m·p` anchors and
//! wrap around either edge. Rows are stored as packed `u64` bit vectors; a
//! block row is read out as an `n`-bit window and compared as one integer.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{
    all_permutations, canonical_rank, canonical_reps, factorial, parse_letters, write_letters, PermMatrix, Permutation,
};

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ToricBinaryMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<Vec<u64>>,
}

impl ToricBinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "torus dimensions must be positive");
        let words = cols.div_ceil(WORD_BITS);
        Self { rows, cols, bits: vec![vec![0; words]; rows] }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let m = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if m == 0 || p == 0 || rows.iter().any(|r| r.len() != p) {
            return Err(Error::Parse("rows must be nonempty and of equal length".into()));
        }
        let mut t = Self::zeros(m, p);
        for (i, row) in rows.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => t.set(i, j, true),
                    _ => return Err(Error::Parse(format!("entry ({}, {}) is {e}", i + 1, j + 1))),
                }
            }
        }
        Ok(t)
    }

    /// Parses rows written as strings of '0'/'1'.
    pub fn from_strings(rows: &[&str]) -> Result<Self> {
        let rows: Vec<Vec<u8>> = rows
            .iter()
            .map(|r| {
                r.trim()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        _ => Err(Error::Parse(format!("unexpected character {c:?}"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based `(i, j)`, indices taken modulo the torus size.
    pub fn get(&self, i: usize, j: usize) -> bool {
        let (i, j) = (i % self.rows, j % self.cols);
        self.bits[i][j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let (i, j) = (i % self.rows, j % self.cols);
        let mask = 1u64 << (j % WORD_BITS);
        if value {
            self.bits[i][j / WORD_BITS] |= mask;
        } else {
            self.bits[i][j / WORD_BITS] &= !mask;
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect()).collect()
    }

    /// `len` bits of row `i` starting at column `start`, wrapping around;
    /// bit `k` of the result is entry `(i, start + k)`.
    fn window(&self, i: usize, start: usize, len: usize) -> u64 {
        debug_assert!(len <= WORD_BITS && len <= self.cols);
        let row = &self.bits[i % self.rows];
        let start = start % self.cols;
        let first = len.min(self.cols - start);
        let mut out = extract(row, start, first);
        if first < len {
            out |= extract(row, 0, len - first) << first;
        }
        out
    }

    fn check_block_fits(&self, n: usize) -> Result<()> {
        if n > self.rows || n > self.cols || n > WORD_BITS {
            return Err(Error::BlockTooLarge { block: n, rows: self.rows, cols: self.cols });
        }
        Ok(())
    }

    /// Whether `m` appears as a block anchored anywhere on the torus.
    pub fn contains_block(&self, m: &PermMatrix) -> Result<bool> {
        let n = m.n();
        self.check_block_fits(n)?;
        let masks = block_masks(m);
        for i0 in 0..self.rows {
            for j0 in 0..self.cols {
                if (0..n).all(|r| self.window(i0 + r, j0, n) == masks[r]) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// The permutation whose matrix sits at anchor `(i0, j0)`, if any.
    fn permutation_at(&self, i0: usize, j0: usize, n: usize) -> Option<Permutation> {
        let mut word = vec![0u8; n];
        let mut seen = 0u64;
        for r in 0..n {
            let w = self.window(i0 + r, j0, n);
            if w.count_ones() != 1 {
                return None;
            }
            let col = w.trailing_zeros() as usize;
            if seen >> col & 1 == 1 {
                return None;
            }
            seen |= 1 << col;
            word[col] = r as u8;
        }
        Some(Permutation::from_zero_based_unchecked(word))
    }

    /// Checks `S_n ⊂ T` and lists every permutation whose matrix is absent.
    ///
    /// With exactly `n` rows, every block spans whole columns and the blocks
    /// present are closed under value shift, so one scan over column windows
    /// decides each value-shift class at once. With exactly `n` columns the
    /// same holds for rotation classes on the transpose. Other shapes decode
    /// the block at every anchor.
    pub fn is_superpermutation_matrix(&self, n: usize) -> Result<MatrixReport> {
        self.check_block_fits(n)?;
        if self.rows == n {
            Ok(self.inc_class_scan(n))
        } else if self.cols == n {
            let mut report = self.transpose().inc_class_scan(n);
            for p in &mut report.missing {
                *p = p.inverse();
            }
            report.missing.sort();
            report.strategy = ScanStrategy::RotClassRows;
            Ok(report)
        } else {
            Ok(self.full_scan(n))
        }
    }

    fn inc_class_scan(&self, n: usize) -> MatrixReport {
        let letters: Vec<Option<u8>> = (0..self.cols).map(|j| self.column_letter(j)).collect();
        let mut found = vec![false; factorial(n - 1)];
        let mut window = vec![0u8; n];
        for j0 in 0..self.cols {
            let mut ok = true;
            for k in 0..n {
                match letters[(j0 + k) % self.cols] {
                    Some(v) => window[k] = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                if let Ok(p) = Permutation::from_zero_based(window.clone()) {
                    found[canonical_rank(p.inc_class().rep())] = true;
                }
            }
        }
        let missing = canonical_reps(n)
            .into_iter()
            .zip(&found)
            .filter(|(_, &f)| !f)
            .flat_map(|(rep, _)| rep.inc_class().members())
            .collect::<Vec<_>>();
        MatrixReport::new(n, missing, ScanStrategy::IncClassColumns)
    }

    fn full_scan(&self, n: usize) -> MatrixReport {
        let mut found = HashSet::new();
        for i0 in 0..self.rows {
            for j0 in 0..self.cols {
                if let Some(p) = self.permutation_at(i0, j0, n) {
                    found.insert(p);
                }
            }
        }
        let missing = all_permutations(n).into_iter().filter(|p| !found.contains(p)).collect();
        MatrixReport::new(n, missing, ScanStrategy::AllAnchors)
    }

    /// The basis index of column `j` when it has exactly one 1.
    fn column_letter(&self, j: usize) -> Option<u8> {
        let mut hit = None;
        for i in 0..self.rows {
            if self.get(i, j) {
                if hit.is_some() {
                    return None;
                }
                hit = Some(i as u8);
            }
        }
        hit
    }

    pub fn transpose(&self) -> ToricBinaryMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Text format: a header line `m p n`, then `m` lines of `p` characters.
    pub fn to_text(&self, n: usize) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses the text format, returning the torus and the block size `n`.
    pub fn from_text(text: &str) -> Result<(Self, usize)> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| Error::Parse(format!("header {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        let [m, p, n] = fields[..] else {
            return Err(Error::Parse(format!("header must be `m p n`, got {header:?}")));
        };
        let rows: Vec<&str> = lines.collect();
        if rows.len() != m {
            return Err(Error::Parse(format!("expected {m} rows, found {}", rows.len())));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != p) {
            return Err(Error::Parse(format!("row {r:?} does not have {p} columns")));
        }
        Ok((Self::from_strings(&rows)?, n))
    }
}

fn extract(row: &[u64], start: usize, len: usize) -> u64 {
    if len == 0 {
        return 0;
    }
    let (w, b) = (start / WORD_BITS, start % WORD_BITS);
    let mut out = row[w] >> b;
    if b + len > WORD_BITS {
        out |= row[w + 1] << (WORD_BITS - b);
    }
    if len < WORD_BITS {
        out &= (1u64 << len) - 1;
    }
    out
}

fn block_masks(m: &PermMatrix) -> Vec<u64> {
    (0..m.n()).map(|i| (0..m.n()).filter(|&j| m.get(i, j) == 1).fold(0u64, |acc, j| acc | 1 << j)).collect()
}

impl fmt::Debug for ToricBinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ToricBinaryMatrix {}x{}", self.rows, self.cols)?;
        for row in self.to_rows() {
            let line: String = row.iter().map(|&e| if e == 1 { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanStrategy {
    IncClassColumns,
    RotClassRows,
    AllAnchors,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub n: usize,
    pub ok: bool,
    pub missing: Vec<Permutation>,
    pub strategy: ScanStrategy,
}

impl MatrixReport {
    fn new(n: usize, mut missing: Vec<Permutation>, strategy: ScanStrategy) -> Self {
        missing.sort();
        Self { n, ok: missing.is_empty(), missing, strategy }
    }
}

/// A word over `1..=n`. Stored 0-based.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniversalWord {
    n: usize,
    letters: Vec<u8>,
}

impl UniversalWord {
    pub fn new(n: usize, word: &[usize]) -> Result<Self> {
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::Parse(format!("unsupported alphabet size {n}")));
        }
        let letters =
            word.iter()
                .map(|&v| {
                    if (1..=n).contains(&v) {
                        Ok((v - 1) as u8)
                    } else {
                        Err(Error::LetterOutOfRange { letter: v, n })
                    }
                })
                .collect::<Result<_>>()?;
        Ok(Self { n, letters })
    }

    pub(crate) fn from_zero_based(n: usize, letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&v| (v as usize) < n));
        Self { n, letters }
    }

    pub fn parse(s: &str, n: usize) -> Result<Self> {
        Self::new(n, &parse_letters(s)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// The 1-based letters.
    pub fn word(&self) -> Vec<usize> {
        self.letters.iter().map(|&v| v as usize + 1).collect()
    }

    /// Each length-`n` factor that is a permutation, with its start offset.
    pub fn permutation_windows(&self) -> impl Iterator<Item = (usize, Permutation)> + '_ {
        let n = self.n;
        self.letters
            .windows(n)
            .enumerate()
            .filter_map(|(i, w)| Permutation::from_zero_based(w.to_vec()).ok().map(|p| (i, p)))
    }
}

impl fmt::Display for UniversalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters, self.n)
    }
}

impl fmt::Debug for UniversalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniversalWord(n={}, {self})", self.n)
    }
}

/// The `n×|w|` matrix whose column `i` is `e_{w(i)}`.
pub fn word_to_matrix(w: &UniversalWord) -> ToricBinaryMatrix {
    assert!(!w.is_empty(), "word must be nonempty");
    let mut t = ToricBinaryMatrix::zeros(w.n(), w.len());
    for (j, &v) in w.letters().iter().enumerate() {
        t.set(v as usize, j, true);
    }
    t
}

/// Reads a word off a torus whose columns are all basis vectors.
pub fn matrix_to_word(t: &ToricBinaryMatrix) -> Result<UniversalWord> {
    let letters =
        (0..t.cols()).map(|j| t.column_letter(j).ok_or(Error::ColumnNotBasisVector(j + 1))).collect::<Result<_>>()?;
    Ok(UniversalWord::from_zero_based(t.rows(), letters))
}

/// Pads an `n`-row torus to a `p×p` square: rows `L1..Ln, L1..L(n-1)` and
/// then zero rows. Blocks that wrapped vertically in the input appear
/// unwrapped in the output, so superpermutation matrices stay so.
pub fn square_pad(t: &ToricBinaryMatrix, n: usize) -> Result<ToricBinaryMatrix> {
    if t.rows() != n {
        return Err(Error::RowCountMismatch { expected: n, found: t.rows() });
    }
    let needed = 2 * n - 1;
    if t.cols() < needed {
        return Err(Error::TooFewColumns { cols: t.cols(), needed });
    }
    let side = t.cols();
    let mut out = ToricBinaryMatrix::zeros(side, side);
    for i in 0..needed {
        out.bits[i] = t.bits[i % n].clone();
    }
    Ok(out)
}

/// Outcome of the exhaustive search for the narrowest `n`-row matrix.
#[derive(Clone, Debug)]
pub struct BruteForceResult {
    pub n: usize,
    pub columns: usize,
    pub witness: ToricBinaryMatrix,
    pub witness_word: UniversalWord,
    pub candidates_checked: u64,
    pub reduction: &'static str,
}

pub const BASIS_COLUMN_REDUCTION: &str = "only tori whose columns are basis vectors are searched: \
with exactly n rows every block spans whole columns, so a column that is not a basis vector \
lies in no permutation block and can be dropped without losing any block";

/// Largest `n` accepted by [`brute_min_columns`].
pub const BRUTE_FORCE_MAX_N: usize = 3;

/// Smallest `p ≤ max_cols` admitting an `n×p` superpermutation matrix.
///
/// Candidates are cyclic words of length `p`, one per rotation class
/// (the lexicographically least rotation), in lexicographic order.
pub fn brute_min_columns(n: usize, max_cols: usize) -> Result<BruteForceResult> {
    if n == 0 || n > BRUTE_FORCE_MAX_N {
        return Err(Error::BudgetExceeded { n, limit: BRUTE_FORCE_MAX_N });
    }
    let mut checked = 0u64;
    for p in n..=max_cols {
        let mut word = vec![0u8; p];
        loop {
            if is_least_rotation(&word) {
                checked += 1;
                let w = UniversalWord::from_zero_based(n, word.clone());
                let t = word_to_matrix(&w);
                if t.is_superpermutation_matrix(n)?.ok {
                    return Ok(BruteForceResult {
                        n,
                        columns: p,
                        witness: t,
                        witness_word: w,
                        candidates_checked: checked,
                        reduction: BASIS_COLUMN_REDUCTION,
                    });
                }
            }
            if !increment(&mut word, n as u8) {
                break;
            }
        }
    }
    Err(Error::NotFound(max_cols))
}

fn increment(word: &mut [u8], base: u8) -> bool {
    for d in word.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn is_least_rotation(word: &[u8]) -> bool {
    let p = word.len();
    (1..p).all(|k| word.iter().cycle().skip(k).take(p).cmp(word.iter()) != std::cmp::Ordering::Less)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn identity(n: usize) -> ToricBinaryMatrix {
        word_to_matrix(&UniversalWord::new(n, &(1..=n).collect::<Vec<_>>()).unwrap())
    }

    #[test]
    fn contains_block_examples() {
        let id2 = identity(2);
        assert!(id2.contains_block(&perm("12").perm_matrix()).unwrap());
        assert!(id2.contains_block(&perm("21").perm_matrix()).unwrap());
        let zeros = ToricBinaryMatrix::zeros(3, 3);
        assert!(!zeros.contains_block(&perm("123").perm_matrix()).unwrap());
        assert_eq!(
            id2.contains_block(&perm("123").perm_matrix()),
            Err(Error::BlockTooLarge { block: 3, rows: 2, cols: 2 })
        );
    }

    #[test]
    fn wide_rows_wrap_across_word_boundaries() {
        let mut t = ToricBinaryMatrix::zeros(2, 130);
        t.set(0, 129, true);
        t.set(1, 0, true);
        assert!(t.contains_block(&perm("12").perm_matrix()).unwrap());
        t.set(1, 63, true);
        t.set(0, 64, true);
        assert!(t.contains_block(&perm("21").perm_matrix()).unwrap());
        assert_eq!(t.window(1, 63, 2), 0b01);
    }

    #[test]
    fn transpose_examples() {
        let one = ToricBinaryMatrix::from_strings(&["1"]).unwrap();
        assert_eq!(one.transpose(), one);
        let t = ToricBinaryMatrix::from_strings(&["1000", "0101", "0010"]).unwrap();
        let tt = t.transpose();
        assert_eq!(tt, ToricBinaryMatrix::from_strings(&["100", "010", "001", "010"]).unwrap());
        assert!(tt.is_superpermutation_matrix(3).unwrap().ok);
    }

    #[test]
    fn word_matrix_examples() {
        let w = UniversalWord::parse("1231", 3).unwrap();
        let t = word_to_matrix(&w);
        assert_eq!(t.to_rows(), vec![vec![1, 0, 0, 1], vec![0, 1, 0, 0], vec![0, 0, 1, 0]]);
        assert_eq!(matrix_to_word(&t).unwrap(), w);
        assert_eq!(matrix_to_word(&identity(2)).unwrap().to_string(), "12");
        let bad = ToricBinaryMatrix::from_strings(&["10", "00"]).unwrap();
        assert_eq!(matrix_to_word(&bad), Err(Error::ColumnNotBasisVector(2)));
    }

    #[test]
    fn square_pad_rejects_narrow_torus() {
        let t = ToricBinaryMatrix::from_strings(&["1000", "0101", "0010"]).unwrap();
        assert_eq!(square_pad(&t, 3), Err(Error::TooFewColumns { cols: 4, needed: 5 }));
        assert_eq!(square_pad(&t, 4), Err(Error::RowCountMismatch { expected: 4, found: 3 }));
    }

    #[test]
    fn square_pad_layout() {
        let t = word_to_matrix(&UniversalWord::parse("123132", 3).unwrap());
        let sq = square_pad(&t, 3).unwrap();
        assert_eq!((sq.rows(), sq.cols()), (6, 6));
        let rows = sq.to_rows();
        let src = t.to_rows();
        assert_eq!(&rows[0..3], &src[..]);
        assert_eq!(&rows[3..5], &src[0..2]);
        assert!(rows[5].iter().all(|&e| e == 0));
    }

    #[test]
    fn scan_strategies_agree() {
        let wide = ToricBinaryMatrix::from_strings(&["1000", "0101", "0010"]).unwrap();
        let tall = wide.transpose();
        let a = wide.is_superpermutation_matrix(3).unwrap();
        let b = tall.is_superpermutation_matrix(3).unwrap();
        assert_eq!(a.strategy, ScanStrategy::IncClassColumns);
        assert_eq!(b.strategy, ScanStrategy::RotClassRows);
        assert_eq!(wide.full_scan(3).missing, a.missing);
        assert_eq!(tall.full_scan(3).missing, b.missing);

        let partial = word_to_matrix(&UniversalWord::parse("12341", 4).unwrap());
        let r = partial.is_superpermutation_matrix(4).unwrap();
        assert!(!r.ok);
        assert_eq!(r.missing, partial.full_scan(4).missing);
        assert_eq!(r.missing.len(), 24 - 4);
    }

    #[test]
    fn brute_min_columns_examples() {
        assert_eq!(brute_min_columns(1, 4).unwrap().columns, 1);
        assert_eq!(brute_min_columns(2, 4).unwrap().columns, 2);
        let r3 = brute_min_columns(3, 6).unwrap();
        assert_eq!(r3.columns, 4);
        assert!(r3.witness.is_superpermutation_matrix(3).unwrap().ok);
        assert_eq!(brute_min_columns(3, 3).unwrap_err(), Error::NotFound(3));
        assert_eq!(brute_min_columns(4, 30).unwrap_err(), Error::BudgetExceeded { n: 4, limit: 3 });
    }

    #[test]
    fn text_format_round_trip() {
        let t = ToricBinaryMatrix::from_strings(&["10001", "01010", "00100", "10001", "01010"]).unwrap();
        let (back, n) = ToricBinaryMatrix::from_text(&t.to_text(3)).unwrap();
        assert_eq!((back, n), (t, 3));
        assert!(ToricBinaryMatrix::from_text("2 2 2\n10\n").is_err());
        assert!(ToricBinaryMatrix::from_text("1 2\n10\n").is_err());
        assert!(ToricBinaryMatrix::from_text("1 2 1\n12\n").is_err());
    }
}
