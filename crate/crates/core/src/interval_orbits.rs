//! Orbits built from decorated intervals [i,j], ±[i,j], [i,j]^± and their good products.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{CellError, Result};
use crate::f2alg::{
    even_interval_stabilizer, good_multiply, interval_form, orbit_to_quotient, AltFormF2, OrbitType,
};
use crate::invariants::{ChiTable, DimTable};
use crate::partitions::{LieType, Partition};
use crate::solver::possible_orbits_from_dims;

/// Largest k accepted by the interval enumerations.
pub const MAX_INTERVAL_K: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Flavor {
    /// [i,j] with j − i even.
    Even,
    /// ±[i,j] with j − i odd.
    Plain,
    /// [i,j]^± with j − i odd and at least 3.
    Spin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DecoratedInterval {
    pub i: usize,
    pub j: usize,
    pub flavor: Flavor,
}

impl DecoratedInterval {
    pub fn new(i: usize, j: usize, flavor: Flavor) -> Result<Self> {
        if i == 0 || i > j {
            return Err(CellError::RangeError(format!("need 1 <= i <= j, got [{i},{j}]")));
        }
        let odd = (j - i) % 2 == 1;
        let ok = match flavor {
            Flavor::Even => !odd,
            Flavor::Plain => odd,
            Flavor::Spin => odd && j - i >= 3,
        };
        if !ok {
            return Err(CellError::FlavorParityMismatch(format!("{flavor:?} on [{i},{j}]")));
        }
        Ok(DecoratedInterval { i, j, flavor })
    }

    pub fn len(&self) -> usize {
        self.j - self.i + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn same_interval(&self, o: &DecoratedInterval) -> bool {
        self.i == o.i && self.j == o.j
    }

    /// Interval containment (not strict).
    pub fn contains(&self, o: &DecoratedInterval) -> bool {
        self.i <= o.i && o.j <= self.j
    }

    pub fn disjoint(&self, o: &DecoratedInterval) -> bool {
        self.j < o.i || o.j < self.i
    }

    /// Disjoint or nested.
    pub fn is_good_with(&self, o: &DecoratedInterval) -> bool {
        self.disjoint(o) || self.contains(o) || o.contains(self)
    }

    pub fn orbit(&self, k: usize) -> Result<OrbitType> {
        if self.j > k {
            return Err(CellError::RangeError(format!("{self} outside k = {k}")));
        }
        match self.flavor {
            Flavor::Even if self.i == self.j => Ok(OrbitType::point(k)),
            Flavor::Even => OrbitType::from_form(crate::f2alg::SubgroupF2::full(k), &interval_form(self.i, self.j, k)?),
            Flavor::Plain => OrbitType::from_form(even_interval_stabilizer(self.i, self.j, k)?, &AltFormF2::zero(k)),
            Flavor::Spin => {
                OrbitType::from_form(even_interval_stabilizer(self.i, self.j, k)?, &interval_form(self.i, self.j, k)?)
            }
        }
    }
}

impl fmt::Display for DecoratedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.flavor {
            Flavor::Even => write!(f, "[{},{}]", self.i, self.j),
            Flavor::Plain => write!(f, "±[{},{}]", self.i, self.j),
            Flavor::Spin => write!(f, "[{},{}]^±", self.i, self.j),
        }
    }
}

pub fn orbit_of_generator(d: &DecoratedInterval, k: usize) -> Result<OrbitType> {
    DecoratedInterval::new(d.i, d.j, d.flavor)?.orbit(k)
}

/// A product of decorated intervals, any two disjoint or nested. Empty means pt.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalExpression {
    items: Vec<DecoratedInterval>,
}

impl IntervalExpression {
    pub fn new(mut items: Vec<DecoratedInterval>) -> Result<Self> {
        for a in 0..items.len() {
            for b in (a + 1)..items.len() {
                if !items[a].is_good_with(&items[b]) {
                    return Err(CellError::NotGoodExpression(format!("{} and {} overlap", items[a], items[b])));
                }
            }
        }
        items.sort();
        Ok(IntervalExpression { items })
    }

    pub fn pt() -> Self {
        IntervalExpression { items: Vec::new() }
    }

    pub fn items(&self) -> &[DecoratedInterval] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Number of ordered pairs of distinct positions (a, b) with interval a ⊆ interval b.
    pub fn p(&self) -> usize {
        let mut n = 0;
        for (a, x) in self.items.iter().enumerate() {
            for (b, y) in self.items.iter().enumerate() {
                if a != b && y.contains(x) {
                    n += 1;
                }
            }
        }
        n
    }

    pub fn max_index(&self) -> usize {
        self.items.iter().map(|d| d.j).max().unwrap_or(0)
    }

    /// The orbit type in A_e of rank k.
    pub fn orbit(&self, k: usize) -> Result<OrbitType> {
        let mut o = OrbitType::point(k);
        for d in &self.items {
            o = good_multiply(&o, &d.orbit(k)?)?;
        }
        Ok(o)
    }

    /// The orbit type in A'_e of rank k − 1.
    pub fn quotient_orbit(&self, k: usize) -> Result<OrbitType> {
        orbit_to_quotient(&self.orbit(k)?)
    }

    fn with(&self, remove: &[usize], add: &[DecoratedInterval]) -> Option<IntervalExpression> {
        let mut items: Vec<DecoratedInterval> =
            self.items.iter().enumerate().filter(|(n, _)| !remove.contains(n)).map(|(_, d)| *d).collect();
        items.extend_from_slice(add);
        IntervalExpression::new(items).ok()
    }

    /// The three structural properties of reduced forms.
    pub fn satisfies_reduced_bullets(&self) -> bool {
        let items = &self.items;
        let unique = items.iter().collect::<BTreeSet<_>>().len() == items.len();
        let no_degenerate = items.iter().all(|d| d.i < d.j);
        let no_mixed = !items.iter().any(|a| {
            items.iter().any(|b| a.same_interval(b) && a.flavor == Flavor::Plain && b.flavor == Flavor::Spin)
        });
        unique && no_degenerate && no_mixed && items.iter().all(|top| self.longest_chain_under(top) * 2 <= top.len())
    }

    fn longest_chain_under(&self, top: &DecoratedInterval) -> usize {
        let inner: Vec<&DecoratedInterval> =
            self.items.iter().filter(|d| top.contains(d) && !d.same_interval(top)).collect();
        1 + inner.iter().map(|d| self.longest_chain_under(d)).max().unwrap_or(0)
    }
}

impl fmt::Display for IntervalExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.items.is_empty() {
            return f.write_str("pt");
        }
        for d in &self.items {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for IntervalExpression {
    type Err = CellError;

    /// Parses "pt", "[1,3]", "±[1,2][3,5]", "+-[1,2]", "[1,4]^+-" and concatenations.
    fn from_str(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*' && *c != 'x').collect();
        if s.is_empty() || s == "pt" {
            return Ok(IntervalExpression::pt());
        }
        let s = s.replace("+-", "±");
        let chars: Vec<char> = s.chars().collect();
        let mut pos = 0;
        let mut items = Vec::new();
        let bad = || CellError::Usage(format!("cannot parse interval expression '{text}'"));
        while pos < chars.len() {
            let plain = chars[pos] == '±';
            if plain {
                pos += 1;
            }
            if chars.get(pos) != Some(&'[') {
                return Err(bad());
            }
            let close = chars[pos..].iter().position(|&c| c == ']').ok_or_else(bad)? + pos;
            let inner: String = chars[pos + 1..close].iter().collect();
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            let i: usize = a.parse().map_err(|_| bad())?;
            let j: usize = b.parse().map_err(|_| bad())?;
            pos = close + 1;
            let spin = chars.get(pos) == Some(&'^') && chars.get(pos + 1) == Some(&'±');
            if spin {
                pos += 2;
            }
            let flavor = match (plain, spin) {
                (false, false) => Flavor::Even,
                (true, false) => Flavor::Plain,
                (false, true) => Flavor::Spin,
                (true, true) => return Err(bad()),
            };
            items.push(DecoratedInterval::new(i, j, flavor)?);
        }
        IntervalExpression::new(items)
    }
}

/// Disjoint sets of at most `max` decorated intervals whose endpoints are cut
/// points of `group`.
fn cut_replacements(group: &[DecoratedInterval], max: usize) -> Vec<Vec<DecoratedInterval>> {
    let mut cuts: Vec<usize> = group.iter().flat_map(|d| [d.i, d.j + 1]).collect();
    cuts.sort_unstable();
    cuts.dedup();
    let mut pieces = Vec::new();
    for (n, &a) in cuts.iter().enumerate() {
        for &b in &cuts[n + 1..] {
            for f in [Flavor::Even, Flavor::Plain, Flavor::Spin] {
                if let Ok(d) = DecoratedInterval::new(a, b - 1, f) {
                    if d.i < d.j {
                        pieces.push(d);
                    }
                }
            }
        }
    }
    let mut out = vec![vec![]];
    let mut frontier: Vec<(usize, Vec<DecoratedInterval>)> = vec![(0, vec![])];
    for _ in 0..max {
        let mut next = Vec::new();
        for (start, set) in &frontier {
            for (n, p) in pieces.iter().enumerate().skip(*start) {
                if set.iter().all(|q| q.disjoint(p)) {
                    let mut s = set.clone();
                    s.push(*p);
                    out.push(s.clone());
                    next.push((n + 1, s));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Local rewrites: dropping an implied factor, merging repeats of one interval,
/// and replacing a nested group of two or three intervals by disjoint pieces
/// cut at the group's endpoints. The relations among generators are instances.
fn rewrite_candidates(w: &IntervalExpression) -> Vec<IntervalExpression> {
    use Flavor::*;
    let items = w.items();
    let n = items.len();
    let mut out = Vec::new();
    for a in 0..n {
        out.extend(w.with(&[a], &[]));
    }
    for a in 0..n {
        for b in (a + 1)..n {
            let (x, y) = (items[a], items[b]);
            if x.same_interval(&y) {
                let merged: Vec<DecoratedInterval> = match (x.flavor, y.flavor) {
                    (Even, Even) => vec![],
                    (Plain, Plain) | (Spin, Spin) => vec![DecoratedInterval { flavor: Plain, ..x }],
                    _ => vec![DecoratedInterval { flavor: Spin, ..x }],
                };
                out.extend(w.with(&[a, b], &merged));
                continue;
            }
            if x.contains(&y) || y.contains(&x) {
                for repl in cut_replacements(&[x, y], 2) {
                    out.extend(w.with(&[a, b], &repl));
                }
            }
            #[allow(clippy::needless_range_loop)]
            for c in (b + 1)..n {
                let z = items[c];
                let group = [x, y, z];
                let top = *group.iter().max_by_key(|d| d.len()).expect("three items");
                if group.iter().all(|d| top.contains(d)) {
                    for repl in cut_replacements(&group, 3) {
                        out.extend(w.with(&[a, b, c], &repl));
                    }
                }
            }
        }
    }
    out
}

/// Rewrites until no relation lowers (p, length); each step keeps the orbit type.
pub fn reduce(e: &IntervalExpression, k: usize) -> Result<IntervalExpression> {
    IntervalExpression::new(e.items().to_vec())?;
    if e.max_index() > k {
        return Err(CellError::RangeError(format!("{e} uses indices beyond k = {k}")));
    }
    let target = e.orbit(k)?;
    let mut cur = e.clone();
    loop {
        let key = (cur.p(), cur.len());
        let mut best: Option<((usize, usize, String), IntervalExpression)> = None;
        for cand in rewrite_candidates(&cur) {
            let ck = (cand.p(), cand.len(), cand.to_string());
            if (ck.0, ck.1) >= key {
                continue;
            }
            if best.as_ref().is_some_and(|(bk, _)| *bk <= ck) {
                continue;
            }
            if cand.orbit(k)? == target {
                best = Some((ck, cand));
            }
        }
        match best {
            Some((_, next)) => cur = next,
            None => return Ok(cur),
        }
    }
}

/// Intervals of length ≥ 2 whose endpoints are block boundaries of `blocks` (sizes, in index order).
fn allowed_intervals(blocks: &[usize]) -> Vec<(usize, usize)> {
    let mut starts = Vec::new();
    let mut ends = Vec::new();
    let mut pos = 0;
    for &b in blocks {
        starts.push(pos + 1);
        pos += b;
        ends.push(pos);
    }
    let mut out = Vec::new();
    for &i in &starts {
        for &j in &ends {
            if j > i {
                out.push((i, j));
            }
        }
    }
    out.sort();
    out
}

/// Every decorated laminar set over the given intervals, each interval used at most once.
pub fn laminar_expressions(intervals: &[(usize, usize)]) -> Vec<IntervalExpression> {
    fn rec(
        idx: usize,
        intervals: &[(usize, usize)],
        cur: &mut Vec<DecoratedInterval>,
        out: &mut Vec<IntervalExpression>,
    ) {
        if idx == intervals.len() {
            out.push(IntervalExpression::new(cur.clone()).expect("laminar by construction"));
            return;
        }
        rec(idx + 1, intervals, cur, out);
        let (i, j) = intervals[idx];
        let tmp = DecoratedInterval { i, j, flavor: Flavor::Even };
        if cur.iter().all(|d| d.is_good_with(&tmp)) {
            for f in [Flavor::Even, Flavor::Plain, Flavor::Spin] {
                if let Ok(d) = DecoratedInterval::new(i, j, f) {
                    cur.push(d);
                    rec(idx + 1, intervals, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(0, intervals, &mut Vec::new(), &mut out);
    out
}

/// For each A_e orbit type, the expressions of minimal p producing it.
pub fn minimal_expressions(k: usize, blocks: &[usize]) -> Result<BTreeMap<OrbitType, Vec<IntervalExpression>>> {
    if k > MAX_INTERVAL_K {
        return Err(CellError::DimensionTooLarge(format!("k = {k} exceeds {MAX_INTERVAL_K}")));
    }
    let mut best: BTreeMap<OrbitType, (usize, Vec<IntervalExpression>)> = BTreeMap::new();
    for e in laminar_expressions(&allowed_intervals(blocks)) {
        let o = e.orbit(k)?;
        let p = e.p();
        let slot = best.entry(o).or_insert((usize::MAX, Vec::new()));
        if p < slot.0 {
            *slot = (p, vec![e]);
        } else if p == slot.0 {
            slot.1.push(e);
        }
    }
    Ok(best.into_iter().map(|(o, (_, v))| (o, v)).collect())
}

fn block_sizes(p: &Partition) -> Vec<usize> {
    p.blocks().iter().map(|r| r.len()).collect()
}

fn check_k(p: &Partition) -> Result<usize> {
    let k = p.k();
    if k == 0 {
        return Err(CellError::EmptyInput);
    }
    if k > MAX_INTERVAL_K {
        return Err(CellError::TooManyRows(format!("{k} rows exceeds {MAX_INTERVAL_K}")));
    }
    Ok(k)
}

/// S_e as A'_e orbit types with one minimal expression each, for even type C λ.
pub fn generate_se_with_expressions(p: &Partition) -> Result<Vec<(OrbitType, IntervalExpression)>> {
    if p.lie_type() != LieType::C {
        return Err(CellError::InvalidPartition(format!("{p} is type {}, use the B/D variant", p.lie_type())));
    }
    let k = check_k(p)?;
    let mut out: BTreeMap<OrbitType, IntervalExpression> = BTreeMap::new();
    for (o, exprs) in minimal_expressions(k, &block_sizes(p))? {
        let q = orbit_to_quotient(&o)?;
        let e = exprs.into_iter().min_by_key(|e| e.to_string()).expect("nonempty");
        match out.get(&q) {
            Some(prev) if (prev.p(), prev.to_string()) <= (e.p(), e.to_string()) => {}
            _ => {
                out.insert(q, e);
            }
        }
    }
    Ok(out.into_iter().collect())
}

pub fn generate_se(p: &Partition) -> Result<Vec<OrbitType>> {
    Ok(generate_se_with_expressions(p)?.into_iter().map(|(o, _)| o).collect())
}

/// S_e for types B and D, as A_e orbit types. Even k keeps only types with a
/// minimal expression containing ±[1,k] or [1,k]^±.
pub fn generate_se_bd_with_expressions(p: &Partition) -> Result<Vec<(OrbitType, IntervalExpression)>> {
    if p.lie_type() == LieType::C {
        return Err(CellError::InvalidPartition(format!("{p} is type C, use generate_se")));
    }
    let k = check_k(p)?;
    let mut out = Vec::new();
    for (o, exprs) in minimal_expressions(k, &block_sizes(p))? {
        let keep: Vec<IntervalExpression> = if k % 2 == 0 {
            exprs
                .into_iter()
                .filter(|e| e.items().iter().any(|d| d.i == 1 && d.j == k && d.flavor != Flavor::Even))
                .collect()
        } else {
            exprs
        };
        if let Some(e) = keep.into_iter().min_by_key(|e| e.to_string()) {
            out.push((o, e));
        }
    }
    Ok(out)
}

pub fn generate_se_bd(p: &Partition) -> Result<Vec<OrbitType>> {
    Ok(generate_se_bd_with_expressions(p)?.into_iter().map(|(o, _)| o).collect())
}

/// Pairs (s, ρ) with dim V_{(s,ρ)} > 0, in table order.
pub fn positive_pairs(dims: &DimTable) -> Vec<(u32, u32)> {
    dims.entries().filter(|(_, _, d)| !d.is_zero()).map(|(s, r, _)| (s, r)).collect()
}

/// 0/1 vector over `pairs`: 1 iff (s, ρ) ∈ L(o).
pub fn class_vector(o: &OrbitType, pairs: &[(u32, u32)]) -> Vec<u8> {
    pairs.iter().map(|&(s, r)| u8::from(o.is_associated(s, r))).collect()
}

/// Exact rank over Q by fraction-free elimination.
pub fn rational_rank(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in (rank + 1)..nrows {
            for c in (col + 1)..ncols {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub pairs: usize,
    pub possible_count: usize,
    pub possible_rank: usize,
    pub possible_independent: bool,
    pub se_count: usize,
    pub se_rank: usize,
    pub se_independent: bool,
    /// span(S_e) = span(possible types).
    pub se_spans_possible: bool,
    /// S_e is a basis of the span of the possible types.
    pub se_basis_of_possible: bool,
}

pub fn independence_report(p: &Partition) -> Result<IndependenceReport> {
    if p.k() > 5 {
        return Err(CellError::TooManyRows(format!("{} rows exceeds 5", p.k())));
    }
    let dims = ChiTable::new(p)?.dim_table()?;
    let pairs = positive_pairs(&dims);
    let possible = possible_orbits_from_dims(&dims)?;
    let se = generate_se(p)?;
    let pv: Vec<Vec<u8>> = possible.iter().map(|o| class_vector(o, &pairs)).collect();
    let sv: Vec<Vec<u8>> = se.iter().map(|o| class_vector(o, &pairs)).collect();
    let possible_rank = rational_rank(&pv);
    let se_rank = rational_rank(&sv);
    let mut both = pv.clone();
    both.extend(sv.iter().cloned());
    let joint = rational_rank(&both);
    let spans = joint == possible_rank && se_rank == possible_rank;
    Ok(IndependenceReport {
        pairs: pairs.len(),
        possible_count: possible.len(),
        possible_rank,
        possible_independent: possible_rank == possible.len(),
        se_count: se.len(),
        se_rank,
        se_independent: se_rank == se.len(),
        se_spans_possible: spans,
        se_basis_of_possible: spans && se_rank == se.len(),
    })
}
