//! 1-cycles of `H_n`: enumeration and exact counting.
//!
//! Following weight-1 edges from `inc(π)` visits `inc(πσ), inc(πσ²), …`, so
//! the weight-1 edges split the vertices into disjoint cycles whose lengths
//! divide `n`. The number of cycles of each length follows from the sizes of
//! the sets
//!
//! ```text
//! E(d, n) = { inc(π) : ∃k ∀i  π(i + d) = π(i) + k  (mod n) },
//! |E(d, n)| = φ(p) · p^(d-1) · (d-1)!   with p = n / d,
//! ```
//!
//! since `E(d, n)` is exactly the union of the cycles whose length divides
//! `d`. Counts are arbitrary-precision integers.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DEFAULT_MAX_N;
use crate::perm::{canonical_rank, canonical_reps, IncClass, Permutation};

/// Euler's totient by trial-division factorization.
pub fn euler_phi(k: u64) -> u64 {
    assert!(k >= 1, "phi is defined for positive integers");
    let (mut rest, mut phi) = (k, k);
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if rest > 1 {
        phi -= phi / rest;
    }
    phi
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub(crate) fn big_factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of 1-cycles of each length `d | n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleCensus {
    pub n: usize,
    /// One entry per divisor of `n`, zero counts included.
    #[serde(serialize_with = "ser_counts")]
    pub counts: BTreeMap<usize, BigUint>,
}

fn ser_counts<S: serde::Serializer>(m: &BTreeMap<usize, BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(d, c)| (d.to_string(), c.to_string())))
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl CycleCensus {
    pub fn count(&self, d: usize) -> BigUint {
        self.counts.get(&d).cloned().unwrap_or_default()
    }

    /// Total number of 1-cycles.
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// `Σ d · counts[d]`, which must equal `(n-1)!`.
    pub fn vertices_covered(&self) -> BigUint {
        self.counts.iter().map(|(&d, c)| c * d).sum()
    }
}

fn check_budget(n: usize) -> Result<()> {
    if n == 0 || n > DEFAULT_MAX_N {
        return Err(Error::BudgetExceeded { n, limit: DEFAULT_MAX_N });
    }
    Ok(())
}

/// Orbits of the weight-1 successor map as vertex indices, each orbit listed
/// from its smallest index in successor order; orbits sorted by first index.
pub fn one_cycle_orbits(n: usize) -> Result<Vec<Vec<usize>>> {
    check_budget(n)?;
    let reps = canonical_reps(n);
    let next: Vec<usize> = reps.iter().map(|r| canonical_rank(r.rotate_word(1).inc_class().rep())).collect();
    let mut seen = vec![false; reps.len()];
    let mut orbits = Vec::new();
    for start in 0..reps.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            orbit.push(v);
            v = next[v];
        }
        if v != start {
            return Err(Error::Internal(format!("successor map is not a permutation at {v}")));
        }
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// The 1-cycles of `H_n`, each as its classes in successor order.
pub fn enumerate_one_cycles(n: usize) -> Result<Vec<Vec<IncClass>>> {
    let reps = canonical_reps(n);
    Ok(one_cycle_orbits(n)?.into_iter().map(|orbit| orbit.into_iter().map(|v| reps[v].inc_class()).collect()).collect())
}

pub fn census_enumerated(n: usize) -> Result<CycleCensus> {
    let orbits = one_cycle_orbits(n)?;
    let mut counts: BTreeMap<usize, BigUint> = divisors(n).into_iter().map(|d| (d, BigUint::zero())).collect();
    for orbit in orbits {
        let slot = counts
            .get_mut(&orbit.len())
            .ok_or_else(|| Error::Internal(format!("orbit of length {} does not divide {n}", orbit.len())))?;
        *slot += 1u32;
    }
    Ok(CycleCensus { n, counts })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ECount {
    pub d: usize,
    pub n: usize,
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
}

/// `|E(d, n)| = φ(p) p^(d-1) (d-1)!` with `p = n/d`.
pub fn e_count(d: usize, n: usize) -> Result<ECount> {
    if d == 0 || n == 0 || !n.is_multiple_of(d) {
        return Err(Error::NotADivisor { d, n });
    }
    let p = n / d;
    let value = BigUint::from(euler_phi(p as u64)) * BigUint::from(p).pow((d - 1) as u32) * big_factorial(d - 1);
    Ok(ECount { d, n, value })
}

/// Counts from the divisor recursion
/// `|cycles(d)| = (|E(d,n)| - Σ_{k | d, k < d} k |cycles(k)|) / d`.
pub fn census_formula(n: usize) -> Result<CycleCensus> {
    if n == 0 {
        return Err(Error::OutOfDomain { n, min: 1 });
    }
    let mut counts: BTreeMap<usize, BigUint> = BTreeMap::new();
    for d in divisors(n) {
        let e = e_count(d, n)?.value;
        let below: BigUint = counts.iter().filter(|(&k, _)| d % k == 0).map(|(&k, c)| c * k).sum();
        if below > e {
            return Err(Error::Internal(format!("E({d},{n}) smaller than its proper part")));
        }
        let rest = e - below;
        if !(&rest % d).is_zero() {
            return Err(Error::Internal(format!("cycle count for d = {d}, n = {n} is not integral")));
        }
        counts.insert(d, rest / d);
    }
    Ok(CycleCensus { n, counts })
}

/// Whether `π(i + d) = π(i) + k (mod n)` holds for some `k` and every `i`.
pub fn has_period_shift(p: &Permutation, d: usize) -> bool {
    let w = p.letters();
    let n = w.len();
    let nn = n as u8;
    let k = crate::perm::sub_mod(w[d % n], w[0], nn);
    (0..n).all(|i| w[(i + d) % n] == crate::perm::add_mod(w[i], k, nn))
}

/// `E(d, n)` by direct predicate scan over the canonical representatives,
/// as sorted vertex indices. Exhaustive; meant for small `n`.
pub fn e_set_enumerated(d: usize, n: usize) -> Result<Vec<usize>> {
    if d == 0 || n == 0 || !n.is_multiple_of(d) {
        return Err(Error::NotADivisor { d, n });
    }
    check_budget(n)?;
    Ok(canonical_reps(n).iter().enumerate().filter(|(_, r)| has_period_shift(r, d)).map(|(i, _)| i).collect())
}

/// Sorted vertex indices lying on 1-cycles whose length divides `d`.
pub fn union_of_cycles_dividing(n: usize, d: usize) -> Result<Vec<usize>> {
    let mut out: Vec<usize> =
        one_cycle_orbits(n)?.into_iter().filter(|o| d.is_multiple_of(o.len())).flatten().collect();
    out.sort_unstable();
    Ok(out)
}

/// `(n-1)!` as a `BigUint`, for checks against `vertices_covered`.
pub fn vertex_count(n: usize) -> BigUint {
    big_factorial(n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn to_u64(v: &BigUint) -> Option<u64> {
        v.to_u64()
    }

    fn counts(c: &CycleCensus) -> Vec<(usize, u64)> {
        c.counts.iter().map(|(&d, v)| (d, to_u64(v).unwrap())).collect()
    }

    /// Totient by direct gcd count.
    fn phi_oracle(k: u64) -> u64 {
        (1..=k).filter(|&j| num_integer::gcd(j, k) == 1).count() as u64
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(4), 2);
        assert_eq!(euler_phi(12), 4);
        for k in 1..500 {
            assert_eq!(euler_phi(k), phi_oracle(k), "k = {k}");
        }
    }

    #[test]
    fn enumerated_cycles() {
        let cycles = enumerate_one_cycles(4).unwrap();
        let mut lens: Vec<usize> = cycles.iter().map(Vec::len).collect();
        lens.sort();
        assert_eq!(lens, vec![1, 1, 4]);
        let four = cycles.iter().find(|c| c.len() == 4).unwrap();
        let labels: Vec<String> = four.iter().map(|c| c.rep().to_string()).collect();
        assert_eq!(labels, ["1243", "1324", "1423", "1342"]);

        assert_eq!(counts(&census_enumerated(3).unwrap()), vec![(1, 2), (3, 0)]);
        assert_eq!(counts(&census_enumerated(1).unwrap()), vec![(1, 1)]);
    }

    #[test]
    fn census_examples() {
        assert_eq!(counts(&census_enumerated(4).unwrap()), vec![(1, 2), (2, 0), (4, 1)]);
        assert_eq!(counts(&census_enumerated(5).unwrap()), vec![(1, 4), (5, 4)]);
        assert_eq!(counts(&census_enumerated(2).unwrap()), vec![(1, 1), (2, 0)]);

        assert_eq!(counts(&census_formula(4).unwrap()), vec![(1, 2), (2, 0), (4, 1)]);
        assert_eq!(counts(&census_formula(7).unwrap()), vec![(1, 6), (7, 102)]);
        let six = census_formula(6).unwrap();
        assert_eq!(six.vertices_covered(), BigUint::from(120u32));
    }

    #[test]
    fn e_count_examples() {
        for n in 1..=12 {
            assert_eq!(e_count(1, n).unwrap().value, BigUint::from(euler_phi(n as u64)));
        }
        assert_eq!(e_count(4, 4).unwrap().value, BigUint::from(6u32));
        assert_eq!(e_count(2, 4).unwrap().value, BigUint::from(2u32));
        assert_eq!(e_count(3, 4), Err(Error::NotADivisor { d: 3, n: 4 }));
        for n in 1..=15 {
            assert_eq!(e_count(n, n).unwrap().value, big_factorial(n - 1));
        }
    }

    #[test]
    fn prime_counts_follow_wilson() {
        for p in [2usize, 3, 5, 7, 11, 13] {
            let c = census_formula(p).unwrap();
            assert_eq!(c.count(1), BigUint::from(p - 1));
            let rest = (big_factorial(p - 1) - BigUint::from(p - 1)) / p;
            assert_eq!(c.count(p), rest);
        }
    }

    #[test]
    fn e_set_is_union_of_short_cycles() {
        for n in 1..=6 {
            for d in divisors(n) {
                let e = e_set_enumerated(d, n).unwrap();
                assert_eq!(e, union_of_cycles_dividing(n, d).unwrap(), "d={d} n={n}");
                assert_eq!(BigUint::from(e.len()), e_count(d, n).unwrap().value);
            }
        }
    }

    #[test]
    fn census_budget() {
        assert_eq!(census_enumerated(10), Err(Error::BudgetExceeded { n: 10, limit: 9 }));
        assert!(census_formula(23).is_ok());
    }
}
