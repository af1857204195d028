//! Property suites over all type C partitions within size bounds.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::error::Result;
use crate::euler::{chi_fixed_pair, euler_characteristic, euler_two_row_closed};
use crate::interval_orbits::generate_se;
use crate::invariants::{left_cell_count, two_sided_cell_size, two_sided_cell_size_trace, ChiTable};
use crate::partitions::{LieType, Partition, SubsetIndex};
use crate::solver::{
    check_four_row_equations, l_count_mismatches, possible_orbits_from_dims, solve_even_c, solve_general_sp,
};
use crate::springer_symbols::springer_characters_quotient;

const MAX_REPORTED: usize = 10;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    /// The first few failures.
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, checked: 0, failed: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: std::result::Result<(), String>) {
        self.checked += 1;
        if let Err(msg) = ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(msg);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct VerifyReport {
    pub max_part: u32,
    pub max_rows: usize,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

/// Type C partitions with at most `max_rows` parts, each at most `max_part`, in a fixed order.
pub fn type_c_partitions(max_part: u32, max_rows: usize) -> Vec<Partition> {
    fn rec(rows: usize, min: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == rows {
            return;
        }
        for v in min..=max {
            cur.push(v);
            rec(rows, v, max, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(max_rows, 1, max_part, &mut Vec::new(), &mut raw);
    raw.into_iter().filter_map(|p| Partition::validate(&p, LieType::C).ok()).collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn wrap<T>(r: Result<T>, p: &Partition) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{p}: {e}"))
}

fn two_row_closed(p: &Partition) -> std::result::Result<(), String> {
    let h = p.half_parts();
    let closed = wrap(euler_two_row_closed(h[1], h[0]), p)?;
    let rec = wrap(euler_characteristic(p), p)?;
    check(closed == rec, || format!("{p}: closed {closed} vs recursion {rec}"))
}

fn three_row_identity(p: &Partition) -> std::result::Result<(), String> {
    let chi = |m: usize| -> std::result::Result<BigInt, String> {
        let a = wrap(SubsetIndex::from_indices(&[m], 3), p)?;
        Ok(BigInt::from(wrap(chi_fixed_pair(p, &a, &a), p)?))
    };
    let alt = chi(1)? - chi(2)? + chi(3)?;
    let ec = BigInt::from(wrap(euler_characteristic(p), p)?);
    check(alt == ec, || format!("{p}: χ(z1)-χ(z2)+χ(z3) = {alt}, EC = {ec}"))
}

fn shoji(p: &Partition) -> std::result::Result<(), String> {
    let t = wrap(ChiTable::new(p), p)?;
    let from_symbol: BTreeSet<u32> = wrap(springer_characters_quotient(p), p)?.into_iter().collect();
    let mut from_k = BTreeSet::new();
    for rho in 0..(1u32 << t.k_prime()) {
        if wrap(t.character_multiplicity(rho), p)? > BigUint::from(0u32) {
            from_k.insert(rho);
        }
    }
    check(from_symbol == from_k, || format!("{p}: symbol {from_symbol:?} vs multiplicities {from_k:?}"))
}

fn mass_rule(p: &Partition) -> std::result::Result<(), String> {
    let mass = if p.all_even() {
        wrap(solve_even_c(p), p)?.mass()
    } else {
        wrap(solve_general_sp(p), p)?.multiplicities.mass()
    };
    let ec = wrap(euler_characteristic(p), p)?;
    check(mass == ec, || format!("{p}: Σ m|O| = {mass}, EC = {ec}"))
}

fn orbit_count(p: &Partition) -> std::result::Result<(), String> {
    let n = wrap(solve_even_c(p), p)?.orbit_count();
    let cells = wrap(left_cell_count(p), p)?;
    check(n == cells, || format!("{p}: Σ m = {n}, left cells = {cells}"))
}

fn l_count(p: &Partition) -> std::result::Result<(), String> {
    let mv = wrap(solve_even_c(p), p)?;
    let dims = wrap(ChiTable::new(p).and_then(|t| t.dim_table()), p)?;
    let bad = l_count_mismatches(&mv, &dims);
    check(bad.is_empty(), || format!("{p}: L-count differs at {bad:?}"))
}

fn four_row_equations(p: &Partition) -> std::result::Result<(), String> {
    let mv = wrap(solve_even_c(p), p)?;
    let dims = wrap(ChiTable::new(p).and_then(|t| t.dim_table()), p)?;
    let bad = wrap(check_four_row_equations(&mv, &dims), p)?;
    check(bad.is_empty(), || format!("{p}: {}", bad.join("; ")))
}

fn support(p: &Partition) -> std::result::Result<(), String> {
    let mv = wrap(solve_even_c(p), p)?;
    let dims = wrap(ChiTable::new(p).and_then(|t| t.dim_table()), p)?;
    let possible = wrap(possible_orbits_from_dims(&dims), p)?;
    let outside: Vec<String> = mv.nonzero().filter(|(o, _)| !possible.contains(o)).map(|(o, _)| o.to_string()).collect();
    check(outside.is_empty(), || format!("{p}: not possible: {}", outside.join(", ")))
}

fn trace_square(p: &Partition) -> std::result::Result<(), String> {
    let a = wrap(two_sided_cell_size(p), p)?;
    let b = wrap(two_sided_cell_size_trace(p), p)?;
    check(a == b, || format!("{p}: Σ dim² = {a}, trace path = {b}"))
}

fn se_possible(p: &Partition) -> std::result::Result<(), String> {
    let dims = wrap(ChiTable::new(p).and_then(|t| t.dim_table()), p)?;
    let possible = wrap(possible_orbits_from_dims(&dims), p)?;
    let se = wrap(generate_se(p), p)?;
    check(se.iter().all(|o| possible.contains(o)), || format!("{p}: S_e has a type outside the possible set"))
}

/// Runs every suite on the partitions within the bounds.
pub fn run(max_part: u32, max_rows: usize) -> VerifyReport {
    let all = type_c_partitions(max_part, max_rows);
    let even: Vec<&Partition> = all.iter().filter(|p| p.all_even()).collect();
    let rows = |lo: usize, hi: usize| even.iter().copied().filter(move |p| p.k() >= lo && p.k() <= hi);
    let mut suites = Vec::new();
    let mut run_suite = |name: &'static str, ps: Vec<&Partition>, f: fn(&Partition) -> std::result::Result<(), String>| {
        let mut s = SuiteResult::new(name);
        for p in ps {
            s.record(f(p));
        }
        suites.push(s);
    };
    run_suite("two_row_closed_formula", rows(2, 2).collect(), two_row_closed);
    run_suite("three_row_identity", rows(3, 3).collect(), three_row_identity);
    run_suite("shoji_support", rows(1, 4).collect(), shoji);
    let mixed: Vec<&Partition> = all.iter().filter(|p| p.odd_even_split().0.k() <= 4).collect();
    run_suite("mass_rule", mixed, mass_rule);
    run_suite("orbit_count_rule", rows(1, 4).collect(), orbit_count);
    run_suite("l_count_rule", rows(2, 4).collect(), l_count);
    run_suite("four_row_equations", rows(4, 4).collect(), four_row_equations);
    run_suite("support_rule", rows(2, 4).collect(), support);
    run_suite("trace_square_identity", rows(1, 4).filter(|p| p.is_distinguished()).collect(), trace_square);
    run_suite("se_inside_possible", rows(2, 5).filter(|p| p.is_distinguished()).collect(), se_possible);
    let passed = suites.iter().all(SuiteResult::passed);
    VerifyReport { max_part, max_rows, suites, passed }
}
