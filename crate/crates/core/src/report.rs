//! Text renderings of bounds tables and cycle censuses.

use std::fmt::Write;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bounds::{approx, BoundsRow, RatioReport};
use crate::census::{census_enumerated, census_formula, euler_phi, vertex_count, CycleCensus};
use crate::error::Result;

fn ratio_text(r: &num_rational::BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Columns `n,I,C,best,B,Bprime,S`; `best` is empty where unknown.
pub fn bounds_csv(rows: &[BoundsRow]) -> String {
    let mut s = String::from("n,I,C,best,B,Bprime,S\n");
    for r in rows {
        let best = r.best_found.map(|b| b.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{},{},{},{}", r.n, r.i, r.c, best, r.b, ratio_text(&r.bprime), r.s);
    }
    s
}

/// A markdown table followed by one note per value that differs from the
/// published table.
pub fn bounds_markdown(rows: &[BoundsRow]) -> String {
    let mut s = String::from("| n | I | C | best | B | B' | S |\n|---|---|---|---|---|---|---|\n");
    for r in rows {
        let best = r.best_found.map(|b| b.to_string()).unwrap_or_else(|| "-".into());
        let marks = |col: &str| if r.discrepancies.iter().any(|d| d.column == col) { "*" } else { "" };
        let _ = writeln!(
            s,
            "| {} | {}{} | {}{} | {} | {}{} | {:.4} | {}{} |",
            r.n,
            r.i,
            marks("I"),
            r.c,
            marks("C"),
            best,
            r.b,
            marks("B"),
            approx(&r.bprime),
            r.s,
            marks("S"),
        );
    }
    let notes: Vec<_> = rows.iter().flat_map(|r| &r.discrepancies).collect();
    if !notes.is_empty() {
        s.push('\n');
        for d in notes {
            let _ = writeln!(
                s,
                "\\* {}({}) computes to {}; the published table prints {}.",
                d.column, d.n, d.computed, d.published
            );
        }
    }
    s
}

pub fn bounds_json(rows: &[BoundsRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

/// `n,B/(n-1)!,B'/(n-1)!,L/(n-2)!` as decimals, for plotting.
pub fn ratios_csv(report: &RatioReport) -> String {
    let mut s = String::from("n,B_over_fact,Bprime_over_fact,L_over_fact\n");
    for e in &report.entries {
        let _ = writeln!(s, "{},{:.6},{:.6},{:.6}", e.n, approx(&e.b), approx(&e.bprime), approx(&e.l));
    }
    s
}

/// A census together with its consistency checks.
#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub census: CycleCensus,
    #[serde(serialize_with = "ser_big")]
    pub total_cycles: BigUint,
    /// `counts[1] = φ(n)`
    pub fixed_points_match_phi: bool,
    /// `Σ d·counts[d] = (n-1)!`
    pub covers_all_vertices: bool,
    /// Whether an enumeration of the graph was run and agreed.
    pub enumeration_agrees: Option<bool>,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Census from the closed formula, checked against enumeration when
/// `enumerate` is set.
pub fn census_report(n: usize, enumerate: bool) -> Result<CensusReport> {
    let census = census_formula(n)?;
    let enumeration_agrees = if enumerate { Some(census_enumerated(n)? == census) } else { None };
    Ok(CensusReport {
        total_cycles: census.total(),
        fixed_points_match_phi: census.count(1) == BigUint::from(euler_phi(n as u64)),
        covers_all_vertices: census.vertices_covered() == vertex_count(n),
        enumeration_agrees,
        census,
    })
}

pub fn census_json(r: &CensusReport) -> String {
    serde_json::to_string_pretty(r).expect("census serializes")
}

pub fn census_table(r: &CensusReport) -> String {
    let mut s = format!("n = {}\n  d  cycles\n", r.census.n);
    for (d, c) in &r.census.counts {
        let _ = writeln!(s, "{d:>3}  {c}");
    }
    let yes_no = |b: bool| if b { "ok" } else { "FAILED" };
    let _ = writeln!(s, "total 1-cycles: {}", r.total_cycles);
    let _ = writeln!(s, "counts[1] = phi(n): {}", yes_no(r.fixed_points_match_phi));
    let _ = writeln!(s, "sum d*counts[d] = (n-1)!: {}", yes_no(r.covers_all_vertices));
    if let Some(agrees) = r.enumeration_agrees {
        let _ = writeln!(s, "enumeration agrees: {}", yes_no(agrees));
    }
    s
}
