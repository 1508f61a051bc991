//! Closed-form bounds on `m(n)`, the shortest universal word for value-shift
//! classes.
//!
//! | bound | value |
//! |-------|-------|
//! | `I(n)`  | `(n-1)! + n - 1` |
//! | `S(n)`  | `(n-1)(n-1)! + 1` |
//! | `C(n)`  | `(n-1)! + n - 2 + L(n)` |
//! | `B(n)`  | `1 + Σ_{d|n} c_d (d + n - 2) = 1 + (n-1)! + L(n)(n-2)` |
//! | `B'(n)` | `1 + (n-1)! + (n-2) Σ_{d|n} φ(n/d) n^(d-1) (d-1)! / d^d` |
//!
//! where `c_d` counts the 1-cycles of length `d` and `L(n) = Σ c_d`.
//!
//! `C(n)` carries `n - 2`. Counting `w ≥ p + c - 2` over a covering path and
//! adding the `n` letters of the first permutation gives `n - 2`, and this is
//! the constant that reproduces the published values `C(3) = 5`, `C(4) = 11`,
//! `C(5) = 35`; the `n - 1` variant overshoots each by one.
//!
//! All arithmetic is exact. Floats appear only in [`approx`].

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::census::{big_factorial, census_formula, divisors, euler_phi};
use crate::error::{Error, Result};

fn int(v: &BigUint) -> BigInt {
    BigInt::from(v.clone())
}

fn uint(v: BigInt) -> BigUint {
    v.to_biguint().expect("bound is non-negative")
}

pub fn bound_i(n: usize) -> BigUint {
    assert!(n >= 1);
    big_factorial(n - 1) + (n - 1)
}

pub fn bound_s(n: usize) -> BigUint {
    assert!(n >= 1);
    big_factorial(n - 1) * (n - 1) + 1u32
}

/// Total number of 1-cycles.
pub fn bound_l(n: usize) -> BigUint {
    census_formula(n).expect("n >= 1").total()
}

pub fn bound_b(n: usize) -> BigUint {
    let census = census_formula(n).expect("n >= 1");
    census.counts.iter().fold(BigUint::one(), |acc, (&d, c)| acc + c * (d + n - 2))
}

/// `B(n)` through the rewritten form `1 + (n-1)! + L(n)(n-2)`.
pub fn bound_b_rewritten(n: usize) -> BigInt {
    assert!(n >= 1);
    BigInt::one() + int(&big_factorial(n - 1)) + int(&bound_l(n)) * (n as i64 - 2)
}

pub fn bound_c(n: usize) -> BigUint {
    assert!(n >= 1);
    uint(int(&big_factorial(n - 1)) + (n as i64 - 2) + int(&bound_l(n)))
}

/// `Σ_{d|n} φ(n/d) n^(d-1) (d-1)! / d^d`, an upper bound on `L(n)`.
pub fn bprime_sum(n: usize) -> BigRational {
    assert!(n >= 1);
    divisors(n)
        .into_iter()
        .map(|d| {
            let num =
                BigUint::from(euler_phi((n / d) as u64)) * BigUint::from(n).pow((d - 1) as u32) * big_factorial(d - 1);
            let den = BigUint::from(d).pow(d as u32);
            BigRational::new(num.into(), den.into())
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

pub fn bound_bprime(n: usize) -> BigRational {
    let base = BigRational::from_integer(BigInt::one() + int(&big_factorial(n - 1)));
    base + bprime_sum(n) * BigRational::from_integer(BigInt::from(n as i64 - 2))
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `B(p) = 1 + (p-1)² (2((p-2)! - 1)/p + 1)` for prime `p`.
pub fn prime_b_closed_form(p: usize) -> Result<BigUint> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = BigRational::from_integer(BigInt::from(p - 1));
    let fact = BigRational::from_integer(int(&big_factorial(p - 2)));
    let two = BigRational::from_integer(2.into());
    let pr = BigRational::from_integer(p.into());
    let v = BigRational::one() + &q * &q * (two * (fact - BigRational::one()) / pr + BigRational::one());
    exact_uint(v)
}

/// `B(p) = 1 + (p-1)² + 2(p-1)((p-1)! - (p-1))/p` for prime `p`.
pub fn prime_b_expanded(p: usize) -> Result<BigUint> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = BigRational::from_integer(BigInt::from(p - 1));
    let fact = BigRational::from_integer(int(&big_factorial(p - 1)));
    let pr = BigRational::from_integer(p.into());
    let two = BigRational::from_integer(2.into());
    let v = BigRational::one() + &q * &q + two * &q * (fact - &q) / pr;
    exact_uint(v)
}

fn exact_uint(v: BigRational) -> Result<BigUint> {
    if !v.is_integer() || v.is_negative() {
        return Err(Error::Internal(format!("{v} is not a non-negative integer")));
    }
    Ok(uint(v.to_integer()))
}

pub fn approx(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioEntry {
    pub n: usize,
    /// `B(n) / (n-1)!`
    #[serde(serialize_with = "ser_ratio")]
    pub b: BigRational,
    /// `B'(n) / (n-1)!`
    #[serde(serialize_with = "ser_ratio")]
    pub bprime: BigRational,
    /// `L(n) / (n-2)!`
    #[serde(serialize_with = "ser_ratio")]
    pub l: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioReport {
    pub entries: Vec<RatioEntry>,
}

fn ser_ratio<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_args!("{}/{}", v.numer(), v.denom()))
}

fn ratio(num: BigRational, den: &BigUint) -> BigRational {
    num / BigRational::from_integer(int(den))
}

pub fn ratio_entry(n: usize) -> RatioEntry {
    assert!(n >= 2);
    let f1 = big_factorial(n - 1);
    let f2 = big_factorial(n - 2);
    RatioEntry {
        n,
        b: ratio(BigRational::from_integer(int(&bound_b(n))), &f1),
        bprime: ratio(bound_bprime(n), &f1),
        l: ratio(BigRational::from_integer(int(&bound_l(n))), &f2),
    }
}

/// Ratio entries for `3 ≤ n ≤ n_max`.
pub fn ratio_report(n_max: usize) -> RatioReport {
    RatioReport { entries: (3..=n_max).map(ratio_entry).collect() }
}

/// Values printed in the published table of bounds for `n = 1..=8`:
/// `(n, I, C, best found, B, S)`.
pub const PUBLISHED_TABLE: [(usize, u64, u64, u64, u64, u64); 8] = [
    (1, 1, 1, 1, 1, 1),
    (2, 2, 2, 2, 3, 2),
    (3, 4, 5, 5, 5, 5),
    (4, 9, 11, 12, 13, 19),
    (5, 28, 35, 39, 49, 97),
    (6, 125, 148, 164, 217, 601),
    (7, 726, 823, 915, 1261, 4321),
    (8, 5047, 5686, 6118, 8881, 35280),
];

/// The published best-found lengths by `n`.
pub fn published_best() -> BTreeMap<usize, u64> {
    PUBLISHED_TABLE.iter().map(|r| (r.0, r.3)).collect()
}

/// A cell where the formula disagrees with the published table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub n: usize,
    pub column: &'static str,
    pub computed: u64,
    pub published: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsRow {
    pub n: usize,
    #[serde(serialize_with = "ser_big")]
    pub i: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub c: BigUint,
    pub best_found: Option<u64>,
    #[serde(serialize_with = "ser_big")]
    pub b: BigUint,
    #[serde(serialize_with = "ser_ratio")]
    pub bprime: BigRational,
    #[serde(serialize_with = "ser_big")]
    pub s: BigUint,
    /// Published values that differ from the computed ones.
    pub discrepancies: Vec<Discrepancy>,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.collect_str(v),
    }
}

impl BoundsRow {
    pub fn compute(n: usize, best_found: Option<u64>) -> Self {
        let mut row = BoundsRow {
            n,
            i: bound_i(n),
            c: bound_c(n),
            best_found,
            b: bound_b(n),
            bprime: bound_bprime(n),
            s: bound_s(n),
            discrepancies: Vec::new(),
        };
        row.discrepancies = row.compare_published();
        row
    }

    fn compare_published(&self) -> Vec<Discrepancy> {
        let Some(&(_, i, c, _, b, s)) = PUBLISHED_TABLE.iter().find(|r| r.0 == self.n) else {
            return Vec::new();
        };
        [("I", &self.i, i), ("C", &self.c, c), ("B", &self.b, b), ("S", &self.s, s)]
            .into_iter()
            .filter_map(|(column, computed, published)| {
                let computed = computed.to_u64()?;
                (computed != published).then_some(Discrepancy { n: self.n, column, computed, published })
            })
            .collect()
    }
}

/// Rows `1..=n_max`; `best` supplies the best-found column where known.
pub fn bounds_table(n_max: usize, best: &BTreeMap<usize, u64>) -> Vec<BoundsRow> {
    (1..=n_max).map(|n| BoundsRow::compute(n, best.get(&n).copied())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn trivial_bounds() {
        assert_eq!(bound_i(4), u(9));
        assert_eq!(bound_i(1), u(1));
        assert_eq!(bound_i(8), u(5047));
        assert_eq!(bound_s(5), u(97));
        assert_eq!(bound_s(1), u(1));
        assert_eq!(bound_s(8), u(35281));
    }

    #[test]
    fn cycle_bounds() {
        assert_eq!(bound_b(4), u(13));
        assert_eq!(bound_b(5), u(49));
        assert_eq!(bound_b(8), u(8881));
        assert_eq!(bound_c(4), u(11));
        assert_eq!(bound_c(5), u(35));
        assert_eq!(bound_c(3), u(5));
        assert_eq!(bound_l(4), u(3));
        assert_eq!(bound_l(5), u(8));
        assert_eq!(bound_l(1), u(1));
    }

    #[test]
    fn bprime_examples() {
        assert_eq!(bprime_sum(4), BigRational::new(9.into(), 2.into()));
        assert_eq!(bound_bprime(4), BigRational::from_integer(16.into()));
        assert_eq!(bound_bprime(1), BigRational::from_integer(1.into()));
    }

    #[test]
    fn prime_forms() {
        assert_eq!(prime_b_closed_form(5).unwrap(), u(49));
        assert_eq!(prime_b_closed_form(7).unwrap(), u(1261));
        assert_eq!(prime_b_closed_form(3).unwrap(), u(5));
        assert_eq!(prime_b_closed_form(9), Err(Error::NotPrime(9)));
        for p in (2..=23).filter(|&p| is_prime(p)) {
            assert_eq!(prime_b_closed_form(p).unwrap(), bound_b(p), "p = {p}");
            assert_eq!(prime_b_expanded(p).unwrap(), bound_b(p), "p = {p}");
        }
    }

    #[test]
    fn ratio_examples() {
        let r = ratio_report(11);
        assert_eq!(r.entries[1].b, BigRational::new(13.into(), 6.into()));
        let e11 = r.entries.last().unwrap();
        let l11 = BigInt::from(10) + (BigInt::from(3628800) - 10) / 11;
        let expected = (BigInt::one() + 3628800 + l11 * 9) / BigInt::one();
        assert_eq!(e11.b, BigRational::new(expected, 3628800.into()));
        assert!((approx(&e11.b) - 1.818).abs() < 1e-3);

        let primes = [13, 17, 19, 23];
        let mut last = ratio_entry(11).b;
        for p in primes {
            let next = ratio_entry(p).b;
            assert!(next > last, "p = {p}");
            last = next;
        }
    }

    #[test]
    fn table_rows() {
        let rows = bounds_table(8, &BTreeMap::new());
        let r6 = &rows[5];
        assert_eq!((r6.i.clone(), r6.c.clone(), r6.b.clone(), r6.s.clone()), (u(125), u(148), u(217), u(601)));
        assert!(r6.discrepancies.is_empty());
        let r2 = &rows[1];
        assert_eq!((r2.i.clone(), r2.c.clone(), r2.s.clone()), (u(2), u(2), u(2)));
        let flagged: Vec<(usize, &str, u64, u64)> = rows
            .iter()
            .flat_map(|r| r.discrepancies.iter().map(|d| (d.n, d.column, d.computed, d.published)))
            .collect();
        assert_eq!(flagged, vec![(2, "B", 2, 3), (7, "C", 833, 823), (8, "S", 35281, 35280)]);
    }
}
