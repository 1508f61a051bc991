//! The acceptance suite: ten end-to-end checks against published values and
//! independent recomputations. Each check reports pass or fail with a detail
//! line and its running time; time limits are part of the check.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bounds::{bound_b, bound_bprime, bound_c, bound_l, bound_s, bounds_table, is_prime};
use crate::census::{
    census_enumerated, census_formula, divisors, e_count, e_set_enumerated, euler_phi, one_cycle_orbits,
    union_of_cycles_dividing, vertex_count,
};
use crate::classic::{ashlock_tillotson, classic_bounds, is_superpermutation};
use crate::graph::{build_graph, verify_universal_word, GraphKind};
use crate::pathfinder::{exact_min_word, greedy_cycle_path, nearest_neighbor_path, ExactConfig};
use crate::perm::Permutation;
use crate::report::bounds_markdown;
use crate::toric::{brute_min_columns, word_to_matrix, ToricBinaryMatrix, UniversalWord};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    #[serde(serialize_with = "ser_secs")]
    pub elapsed: Duration,
}

fn ser_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{:>2}] {} ({:.2}s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub const CRITERIA: [(usize, &str); 10] = [
    (1, "bounds table reproduction"),
    (2, "census oracle equivalence"),
    (3, "graph golden matrices"),
    (4, "word and matrix verification"),
    (5, "exact search"),
    (6, "construction bounds"),
    (7, "brute-force matrix oracle"),
    (8, "asymptotic ratio checks"),
    (9, "classic superpermutations"),
    (10, "period-shift set identity"),
];

pub fn run(id: usize) -> Option<CriterionResult> {
    let name = CRITERIA.iter().find(|c| c.0 == id)?.1;
    let started = Instant::now();
    let outcome = match id {
        1 => bounds_table_check(),
        2 => census_check(),
        3 => graph_check(),
        4 => matrix_check(),
        5 => exact_check(),
        6 => construction_check(),
        7 => brute_force_check(),
        8 => asymptotic_check(),
        9 => classic_check(),
        _ => e_set_check(),
    };
    let elapsed = started.elapsed();
    let limit = time_limit(id);
    let (pass, detail) = match outcome {
        Ok(d) if elapsed > limit => {
            (false, format!("{d}; took {:.1}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs()))
        }
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionResult { id, name, pass, detail, elapsed })
}

fn time_limit(id: usize) -> Duration {
    Duration::from_secs(match id {
        1 | 10 => 5,
        7 | 8 => 10,
        // the n = 5 anytime run gets 60 s on top of the two small exact runs
        5 => 80,
        6 => 600,
        _ => 60,
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run(c.0)).collect()
}

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn bounds_table_check() -> Check {
    const I: [u64; 8] = [1, 2, 4, 9, 28, 125, 726, 5047];
    const C: [u64; 8] = [1, 2, 5, 11, 35, 148, 823, 5686];
    const B: [u64; 8] = [1, 3, 5, 13, 49, 217, 1261, 8881];
    const S: [u64; 7] = [1, 2, 5, 19, 97, 601, 4321];
    let rows = bounds_table(8, &BTreeMap::new());
    let mut wrong = Vec::new();
    for (k, r) in rows.iter().enumerate() {
        let n = k + 1;
        for (col, got, want) in [("I", &r.i, I[k]), ("C", &r.c, C[k]), ("B", &r.b, B[k])] {
            if *got != big(want) {
                wrong.push(format!("{col}({n}) = {got}, expected {want}"));
            }
        }
        if n <= 7 && r.s != big(S[k]) {
            wrong.push(format!("S({n}) = {}, expected {}", r.s, S[k]));
        }
    }
    if rows[7].s != big(35281) {
        wrong.push(format!("S(8) = {}, expected 35281", rows[7].s));
    }
    if !bounds_markdown(&rows).contains("S(8) computes to 35281; the published table prints 35280.") {
        wrong.push("S(8) annotation missing".into());
    }
    ensure(wrong.is_empty(), || wrong.join("; "))?;
    Ok("I, C, B, S match for n = 1..8".into())
}

fn census_check() -> Check {
    for n in 1..=9 {
        let formula = census_formula(n).map_err(|e| e.to_string())?;
        let enumerated = census_enumerated(n).map_err(|e| e.to_string())?;
        ensure(formula == enumerated, || {
            format!("n = {n}: formula {:?} vs enumeration {:?}", formula.counts, enumerated.counts)
        })?;
        ensure(formula.count(1) == big(euler_phi(n as u64)), || format!("n = {n}: counts[1] != phi(n)"))?;
        ensure(formula.vertices_covered() == vertex_count(n), || format!("n = {n}: cycles do not cover (n-1)!"))?;
        let orbits = one_cycle_orbits(n).map_err(|e| e.to_string())?;
        ensure(orbits.iter().all(|o| n % o.len() == 0), || format!("n = {n}: orbit length not dividing n"))?;
    }
    Ok("formula = enumeration for n = 1..9".into())
}

pub const H4_WEIGHTS: [[usize; 6]; 6] = [
    [0, 2, 3, 3, 3, 3],
    [3, 0, 1, 3, 2, 2],
    [3, 3, 0, 2, 1, 3],
    [3, 1, 3, 0, 2, 3],
    [2, 2, 3, 1, 0, 3],
    [3, 3, 3, 3, 2, 0],
];

pub const K4_WEIGHTS: [[usize; 6]; 6] = [
    [0, 2, 3, 3, 3, 3],
    [3, 0, 1, 2, 2, 3],
    [3, 3, 0, 1, 2, 3],
    [2, 2, 3, 0, 1, 3],
    [3, 1, 2, 3, 0, 3],
    [3, 3, 3, 2, 3, 0],
];

fn graph_check() -> Check {
    let mut diffs = Vec::new();
    for (kind, want) in [(GraphKind::H, H4_WEIGHTS), (GraphKind::K, K4_WEIGHTS)] {
        let g = build_graph(4, kind).map_err(|e| e.to_string())?;
        let got = g.weight_matrix();
        for (a, row) in want.iter().enumerate() {
            for (b, &w) in row.iter().enumerate() {
                if got[a][b] != w {
                    diffs.push(format!("{kind:?}_4 {}->{} = {}, printed {w}", g.vertex(a), g.vertex(b), got[a][b]));
                }
            }
        }
    }
    ensure(diffs.is_empty(), || diffs.join("; "))?;
    Ok("H_4 and K_4 match".into())
}

pub const FOUR_BY_TWELVE: [&str; 4] = ["100001000100", "010010001000", "001000100001", "000100010010"];
pub const FOUR_BY_THREE: [&str; 4] = ["100", "010", "001", "010"];
pub const THREE_BY_FOUR: [&str; 3] = ["1000", "0101", "0010"];
pub const FIVE_BY_FIVE: [&str; 5] = ["10001", "01010", "00100", "10001", "01010"];

fn matrix_check() -> Check {
    let word = UniversalWord::parse("123421342143", 4).map_err(|e| e.to_string())?;
    ensure(verify_universal_word(&word).ok, || "word 123421342143 is not universal".into())?;
    let expected = ToricBinaryMatrix::from_strings(&FOUR_BY_TWELVE).map_err(|e| e.to_string())?;
    ensure(word_to_matrix(&word) == expected, || "word_to_matrix differs from the 4x12 matrix".into())?;
    let mut checked = vec![(expected, 4)];
    for rows in [&FOUR_BY_THREE[..], &THREE_BY_FOUR[..], &FIVE_BY_FIVE[..]] {
        checked.push((ToricBinaryMatrix::from_strings(rows).map_err(|e| e.to_string())?, 3));
    }
    for (m, n) in &checked {
        for t in [m.clone(), m.transpose()] {
            let r = t.is_superpermutation_matrix(*n).map_err(|e| e.to_string())?;
            ensure(r.ok, || format!("{}x{} matrix misses {:?}", t.rows(), t.cols(), r.missing))?;
        }
    }
    Ok("word, 4x12, 4x3, 3x4, 5x5 and transposes verified".into())
}

fn exact_check() -> Check {
    let mut parts = Vec::new();
    for (n, want) in [(3, 5), (4, 12)] {
        let started = Instant::now();
        let r = exact_min_word(n, &ExactConfig::default()).map_err(|e| e.to_string())?;
        let t = started.elapsed();
        ensure(r.length == want && r.optimal, || format!("n = {n}: length {} optimal {}", r.length, r.optimal))?;
        ensure(t < Duration::from_secs(10), || format!("n = {n} took {:.1}s", t.as_secs_f64()))?;
        parts.push(format!("m({n}) = {want}"));
    }
    let cfg = ExactConfig { time_limit: Some(Duration::from_secs(60)), ..Default::default() };
    let started = Instant::now();
    let r = exact_min_word(5, &cfg).map_err(|e| e.to_string())?;
    let t = started.elapsed();
    ensure(r.length <= 49, || format!("n = 5: length {} > 49", r.length))?;
    ensure(t <= Duration::from_secs(61), || format!("n = 5 took {:.1}s", t.as_secs_f64()))?;
    parts.push(format!("n = 5: length {} (optimal: {})", r.length, r.optimal));
    Ok(parts.join(", "))
}

fn construction_check() -> Check {
    let mut parts = Vec::new();
    for n in 3..=8 {
        let g = greedy_cycle_path(n).map_err(|e| e.to_string())?;
        let nn = nearest_neighbor_path(n, &Permutation::identity(n).inc_class()).map_err(|e| e.to_string())?;
        let (b, c, s) = (bound_b(n), bound_c(n), bound_s(n));
        let (gl, nl) = (big(g.length as u64), big(nn.length as u64));
        ensure(gl <= b && gl >= c, || format!("n = {n}: greedy {} outside [{c}, {b}]", g.length))?;
        ensure(nl <= s && nl >= c, || format!("n = {n}: nearest neighbour {} outside [{c}, {s}]", nn.length))?;
        for r in [&g, &nn] {
            ensure(verify_universal_word(&r.word).ok, || format!("n = {n}: {:?} word not universal", r.method))?;
        }
        parts.push(format!("{n}: {}/{}", g.length, nn.length));
    }
    Ok(format!("greedy/nearest lengths {}", parts.join(", ")))
}

fn brute_force_check() -> Check {
    let r = brute_min_columns(3, 6).map_err(|e| e.to_string())?;
    ensure(r.columns == 4, || format!("m_2(3) = {}", r.columns))?;
    let ok = r.witness.is_superpermutation_matrix(3).map_err(|e| e.to_string())?.ok;
    ensure(ok, || "witness does not verify".into())?;
    let m3 = exact_min_word(3, &ExactConfig::default()).map_err(|e| e.to_string())?;
    ensure(m3.length == 5 && m3.optimal, || format!("m(3) = {}", m3.length))?;
    Ok(format!("m_2(3) = 4 with witness {}, m(3) = 5", r.witness_word))
}

fn rational(v: &BigUint) -> BigRational {
    BigRational::from_integer(v.clone().into())
}

fn factorial_q(n: usize) -> BigRational {
    rational(&(1..=n).fold(BigUint::one(), |a, k| a * k))
}

/// The ratio clauses collect every failure instead of stopping at the first.
fn asymptotic_check() -> Check {
    let mut failures = Vec::new();
    let primes: Vec<usize> = [5, 7, 11, 13, 17, 19, 23].into_iter().filter(|&p| is_prime(p)).collect();
    let ratios: Vec<BigRational> = primes.iter().map(|&p| rational(&bound_b(p)) / factorial_q(p - 1)).collect();
    let (lo, hi) = (BigRational::new(3.into(), 2.into()), BigRational::new(11.into(), 5.into()));
    for (k, r) in ratios.iter().enumerate() {
        if !(r > &lo && r < &hi) {
            failures.push(format!("B({})/{}! = {r} outside (1.5, 2.2)", primes[k], primes[k] - 1));
        }
        if k > 0 && r <= &ratios[k - 1] {
            failures.push(format!(
                "B({})/{}! = {:.4} is not above B({})/{}! = {:.4}",
                primes[k],
                primes[k] - 1,
                crate::bounds::approx(r),
                primes[k - 1],
                primes[k - 1] - 1,
                crate::bounds::approx(&ratios[k - 1]),
            ));
        }
    }
    for n in 1..=20 {
        if rational(&bound_b(n)) > bound_bprime(n) {
            failures.push(format!("B({n}) > B'({n})"));
        }
    }
    for n in 3..=20 {
        let l = rational(&bound_l(n)) / factorial_q(n - 2);
        let lower = BigRational::new((n as i64 - 1).into(), (n as i64).into());
        let upper = divisors(n).into_iter().fold(BigRational::zero(), |acc, d| {
            let num = BigUint::from(euler_phi((n / d) as u64))
                * BigUint::from(n).pow(d as u32 - 1)
                * (1..d).fold(BigUint::one(), |a, k| a * k);
            acc + rational(&num) / (rational(&BigUint::from(d).pow(d as u32)) * factorial_q(n - 2))
        });
        if l < lower || l > upper {
            failures.push(format!("L({n})/{}! = {l} outside [{lower}, {upper}]", n - 2));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok("ratio monotonicity, B <= B', and the L squeeze hold".into())
}

fn classic_check() -> Check {
    let want = [1, 3, 9, 33, 153, 873];
    for (k, &len) in want.iter().enumerate() {
        let n = k + 1;
        let w = ashlock_tillotson(n).map_err(|e| e.to_string())?;
        ensure(w.len() == len, || format!("n = {n}: length {}", w.len()))?;
        let ok = is_superpermutation(w.word()).map_err(|e| e.to_string())?.ok;
        ensure(ok, || format!("n = {n}: not a superpermutation"))?;
    }
    let b = classic_bounds(6).map_err(|e| e.to_string())?;
    ensure(b.lower == big(867) && b.upper == big(873), || format!("bounds ({}, {})", b.lower, b.upper))?;
    ensure(b.lower <= big(872) && big(872) <= b.upper, || "872 not bracketed".into())?;
    Ok("lengths 1, 3, 9, 33, 153, 873; bounds (867, 873)".into())
}

fn e_set_check() -> Check {
    for n in [4, 6] {
        for d in divisors(n) {
            let e = e_set_enumerated(d, n).map_err(|e| e.to_string())?;
            let u = union_of_cycles_dividing(n, d).map_err(|e| e.to_string())?;
            ensure(e == u, || format!("E({d},{n}) differs from the union of short cycles"))?;
            let count = e_count(d, n).map_err(|e| e.to_string())?.value;
            ensure(BigUint::from(e.len()) == count, || format!("|E({d},{n})| = {} vs {count}", e.len()))?;
        }
    }
    Ok("E(d,n) identity holds for n = 4, 6".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        for id in [4, 7, 9, 10] {
            let r = run(id).unwrap();
            assert!(r.pass, "{r}");
        }
        assert!(run(11).is_none());
    }

    #[test]
    fn display_format() {
        let r = CriterionResult { id: 3, name: "x", pass: true, detail: "ok".into(), elapsed: Duration::ZERO };
        assert_eq!(r.to_string(), "PASS [ 3] x (0.00s): ok");
    }
}
