//! Euler characteristics of type C Springer fibers and of their fixed loci.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::{binomial, multinomial};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{CellError, Result};
use crate::partitions::{LieType, Partition, SubsetIndex};

/// Memo table from canonical ascending parts to EC.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EulerCache {
    map: HashMap<Vec<u32>, BigUint>,
}

/// One step of the domino recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominoMove {
    /// 'h' removes a horizontal domino from a part, 'v' a vertical one from two equal parts.
    pub kind: char,
    pub part: u32,
    pub coeff: u64,
    pub result: Vec<u32>,
}

/// Moves of the recursion EC(λ) = Σ EC(λ^{h,i}) + Σ 2⌊r_i/2⌋ EC(λ^{v,i}).
pub fn domino_moves(parts: &[u32]) -> Vec<DominoMove> {
    let mut mults: Vec<(u32, usize)> = Vec::new();
    for &p in parts {
        match mults.last_mut() {
            Some((v, m)) if *v == p => *m += 1,
            _ => mults.push((p, 1)),
        }
    }
    let mut out = Vec::new();
    for &(i, r) in &mults {
        if i >= 2 && r % 2 == 1 {
            let mut next = parts.to_vec();
            let pos = next.iter().position(|&p| p == i).unwrap();
            next[pos] = i - 2;
            out.push(DominoMove { kind: 'h', part: i, coeff: 1, result: canonical(next) });
        }
        if r >= 2 {
            let mut next = parts.to_vec();
            let pos = next.iter().position(|&p| p == i).unwrap();
            next[pos] = i - 1;
            next[pos + 1] = i - 1;
            out.push(DominoMove {
                kind: 'v',
                part: i,
                coeff: 2 * (r as u64 / 2),
                result: canonical(next),
            });
        }
    }
    out
}

fn canonical(mut parts: Vec<u32>) -> Vec<u32> {
    parts.retain(|&p| p > 0);
    parts.sort_unstable();
    parts
}

impl EulerCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, parts: &[u32]) -> Option<&BigUint> {
        self.map.get(parts)
    }

    pub fn insert(&mut self, parts: Vec<u32>, value: BigUint) {
        self.map.insert(canonical(parts), value);
    }

    /// Entries sorted by key, for deterministic serialization.
    pub fn entries(&self) -> Vec<(Vec<u32>, BigUint)> {
        let mut v: Vec<_> = self.map.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        v.sort();
        v
    }

    /// EC of canonical ascending parts (no parity check).
    pub fn ec(&mut self, parts: &[u32]) -> BigUint {
        if parts.is_empty() {
            return BigUint::one();
        }
        if let Some(v) = self.map.get(parts) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for m in domino_moves(parts) {
            total += self.ec(&m.result) * m.coeff;
        }
        self.map.insert(parts.to_vec(), total.clone());
        total
    }
}

fn global() -> &'static Mutex<EulerCache> {
    static CACHE: OnceLock<Mutex<EulerCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(EulerCache::new()))
}

/// EC of canonical parts using the process-wide memo table.
pub fn ec_parts(parts: &[u32]) -> BigUint {
    let parts = canonical(parts.to_vec());
    let mut guard = global().lock().unwrap_or_else(|e| e.into_inner());
    guard.ec(&parts)
}

/// Copies the process-wide memo table.
pub fn global_cache_snapshot() -> EulerCache {
    global().lock().unwrap_or_else(|e| e.into_inner()).clone()
}

/// Merges entries into the process-wide memo table.
pub fn seed_global_cache(cache: &EulerCache) {
    let mut guard = global().lock().unwrap_or_else(|e| e.into_inner());
    for (k, v) in cache.entries() {
        guard.map.insert(k, v);
    }
}

fn require_c(p: &Partition) -> Result<()> {
    if p.lie_type() != LieType::C {
        return Err(CellError::InvalidPartition(format!(
            "{p} has type {}, the recursion is for type C",
            p.lie_type()
        )));
    }
    Ok(())
}

pub fn euler_characteristic(p: &Partition) -> Result<BigUint> {
    require_c(p)?;
    Ok(ec_parts(p.parts()))
}

/// Recursion tree as JSON; repeated subtrees are marked `"memo": true`.
pub fn euler_trace(p: &Partition) -> Result<Value> {
    require_c(p)?;
    let mut seen = std::collections::HashSet::new();
    Ok(trace_node(p.parts(), &mut seen))
}

fn trace_node(parts: &[u32], seen: &mut std::collections::HashSet<Vec<u32>>) -> Value {
    let ec = ec_parts(parts);
    let ec_json: Value = serde_json::from_str(&ec.to_string()).expect("integer literal");
    if parts.is_empty() {
        return json!({"partition": [], "euler": ec_json});
    }
    if !seen.insert(parts.to_vec()) {
        return json!({"partition": parts, "euler": ec_json, "memo": true});
    }
    let terms: Vec<Value> = domino_moves(parts)
        .into_iter()
        .map(|m| {
            json!({
                "move": m.kind.to_string(),
                "part": m.part,
                "coeff": m.coeff,
                "child": trace_node(&m.result, seen),
            })
        })
        .collect();
    json!({"partition": parts, "euler": ec_json, "terms": terms})
}

/// EC(2k, 2j) = 2 Σ_{i<j} C(j+k, i) + C(j+k, j).
pub fn euler_two_row_closed(k: u64, j: u64) -> Result<BigUint> {
    if j > k {
        return Err(CellError::OrderViolation(format!("need k >= j, got k={k}, j={j}")));
    }
    let n = BigUint::from(j + k);
    let mut s = BigUint::zero();
    for i in 0..j {
        s += binomial(n.clone(), BigUint::from(i));
    }
    Ok(s * 2u32 + binomial(n, BigUint::from(j)))
}

/// Shape of the fixed locus B^a: copies of B_{λ_a} × B_{λ_{complement}}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedLocusShape {
    pub copy_count: BigUint,
    pub factors: Vec<Partition>,
}

impl FixedLocusShape {
    pub fn chi(&self) -> BigUint {
        let mut v = self.copy_count.clone();
        for f in &self.factors {
            v *= ec_parts(f.parts());
        }
        v
    }
}

fn require_even(p: &Partition) -> Result<()> {
    require_c(p)?;
    if !p.all_even() {
        return Err(CellError::OddPartPresent(format!("{p}")));
    }
    Ok(())
}

pub fn fixed_locus(p: &Partition, a: &SubsetIndex) -> Result<FixedLocusShape> {
    require_even(p)?;
    let (pa, na) = p.sub_partition(a)?;
    let (pc, _) = p.sub_partition(&a.complement())?;
    let copy_count = binomial(BigUint::from(p.n()), BigUint::from(na));
    Ok(FixedLocusShape { copy_count, factors: vec![pa, pc] })
}

/// χ(B^a ∩ B^{a'}) as a multinomial times the four factor ECs.
pub fn chi_fixed_pair(p: &Partition, a: &SubsetIndex, b: &SubsetIndex) -> Result<BigUint> {
    require_even(p)?;
    if a.k() != p.k() || b.k() != p.k() {
        return Err(CellError::IndexOutOfRange("subset length differs from part count".into()));
    }
    chi_fixed_pair_bits(p, a.bits(), b.bits())
}

pub(crate) fn chi_fixed_pair_bits(p: &Partition, a: u64, b: u64) -> Result<BigUint> {
    let k = p.k();
    let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let pieces = [a & b, a & !b & mask, b & !a & mask, !(a | b) & mask];
    let mut sizes = Vec::with_capacity(4);
    let mut product = BigUint::one();
    for bits in pieces {
        let sub = SubsetIndex::new(bits, k)?;
        let (sp, size) = p.sub_partition(&sub)?;
        sizes.push(BigUint::from(size));
        product *= ec_parts(sp.parts());
    }
    Ok(multinomial(&sizes) * product)
}

/// 2^{Σb} (Σb)! / Π b! for the odd half (b1,b1,...,bk,bk).
pub fn chi_odd_only(odd: &Partition) -> Result<BigUint> {
    let bs = odd.odd_pair_values()?;
    let total: u64 = bs.iter().map(|&b| b as u64).sum();
    let sizes: Vec<BigUint> = bs.iter().map(|&b| BigUint::from(b)).collect();
    let pow = BigUint::one() << total;
    Ok(pow * multinomial(&sizes))
}
