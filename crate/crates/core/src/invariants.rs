//! F-invariants, character multiplicities and dimensions of irreducible J_c-modules.
//!
//! Group elements and characters live in A'_e = ⟨z_1,…,z_{k−1}⟩ and are `u32`
//! masks of width k' = k − 1. An element is lifted to a subset of [1,k] by
//! taking the lift that avoids k.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{CellError, Result};
use crate::euler::chi_fixed_pair_bits;
use crate::f2alg::{bitstring, char_value, parse_bitstring, SubgroupF2, MAX_K};
use crate::partitions::{LieType, Partition};

/// Largest part count accepted by the table computations.
pub const MAX_ROWS: usize = 12;

fn require_even_c(p: &Partition) -> Result<()> {
    if p.lie_type() != LieType::C {
        return Err(CellError::InvalidPartition(format!("{p} is type {}, expected C", p.lie_type())));
    }
    if p.is_empty() {
        return Err(CellError::EmptyInput);
    }
    if !p.all_even() {
        return Err(CellError::OddPartPresent(format!("{p}")));
    }
    if p.k() > MAX_ROWS {
        return Err(CellError::TooManyRows(format!("{} rows exceeds {MAX_ROWS}", p.k())));
    }
    Ok(())
}

fn exact_div(num: BigUint, den: u64, what: &str) -> Result<BigUint> {
    let (q, r) = num.div_rem(&BigUint::from(den));
    if !r.is_zero() {
        return Err(CellError::NonIntegralAverage(format!("{what}: {num} / {den}")));
    }
    Ok(q)
}

/// Memoised χ(B^a ∩ B^b) for a fixed even type C partition.
#[derive(Debug)]
pub struct ChiTable {
    partition: Partition,
    cache: Mutex<HashMap<(u32, u32), BigUint>>,
}

impl ChiTable {
    pub fn new(p: &Partition) -> Result<Self> {
        require_even_c(p)?;
        Ok(ChiTable { partition: p.clone(), cache: Mutex::new(HashMap::new()) })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// k' = k − 1.
    pub fn k_prime(&self) -> usize {
        self.partition.k() - 1
    }

    fn check_element(&self, x: u32) -> Result<()> {
        let kp = self.k_prime();
        if kp < 32 && x >> kp != 0 {
            return Err(CellError::RangeError(format!("element {x:b} outside A'_e of rank {kp}")));
        }
        Ok(())
    }

    /// χ(B^a ∩ B^b) for a, b in A'_e.
    pub fn chi(&self, a: u32, b: u32) -> Result<BigUint> {
        self.check_element(a)?;
        self.check_element(b)?;
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(v) = self.cache.lock().expect("chi cache").get(&key) {
            return Ok(v.clone());
        }
        let v = chi_fixed_pair_bits(&self.partition, key.0 as u64, key.1 as u64)?;
        self.cache.lock().expect("chi cache").insert(key, v.clone());
        Ok(v)
    }

    /// χ(B^a).
    pub fn chi_single(&self, a: u32) -> Result<BigUint> {
        self.chi(a, 0)
    }

    pub fn full_group(&self) -> SubgroupF2 {
        SubgroupF2::full(self.k_prime())
    }

    /// F_a^{A'}(B) = (1/|A'|) Σ_{a'∈A'} χ(B^a ∩ B^{a'}).
    pub fn f_invariant(&self, sub: &SubgroupF2, a: u32) -> Result<BigUint> {
        if sub.k() != self.k_prime() {
            return Err(CellError::DimensionMismatch(format!(
                "subgroup rank {} vs A'_e rank {}",
                sub.k(),
                self.k_prime()
            )));
        }
        if !sub.contains(a) {
            return Err(CellError::ElementNotInSubgroup(format!("{} not in {sub}", bitstring(a, sub.k()))));
        }
        let mut total = BigUint::zero();
        for b in sub.elements() {
            total += self.chi(a, b)?;
        }
        exact_div(total, sub.order(), "F-invariant")
    }

    /// (1/|A'_e|) Σ_a ρ(a) χ(B^a).
    pub fn character_multiplicity(&self, rho: u32) -> Result<BigUint> {
        self.check_element(rho)?;
        let mut plus = BigUint::zero();
        let mut minus = BigUint::zero();
        for a in 0..(1u32 << self.k_prime()) {
            let c = self.chi_single(a)?;
            if char_value(rho, a) == 0 {
                plus += c;
            } else {
                minus += c;
            }
        }
        if minus > plus {
            return Err(CellError::NonIntegralAverage(format!("negative multiplicity for rho {rho:b}")));
        }
        exact_div(plus - minus, 1u64 << self.k_prime(), "character multiplicity")
    }

    /// dim V_{(s,ρ)}.
    pub fn dim_irreducible(&self, s: u32, rho: u32) -> Result<BigUint> {
        self.check_element(s)?;
        self.check_element(rho)?;
        let kp = self.k_prime();
        if char_value(rho, s) == 1 {
            return Err(CellError::IncompatiblePair(format!(
                "rho {} is -1 on s {}",
                bitstring(rho, kp),
                bitstring(s, kp)
            )));
        }
        let full = self.full_group();
        let base = self.f_invariant(&full, s)?;
        if rho == 0 {
            return Ok(base);
        }
        let ker = SubgroupF2::kernel_of(kp, rho)?;
        let on_kernel = self.f_invariant(&ker, s)?;
        if on_kernel < base {
            return Err(CellError::NonIntegralAverage(format!(
                "F over ker rho below F over A'_e for s {}",
                bitstring(s, kp)
            )));
        }
        Ok(on_kernel - base)
    }

    pub fn dim_table(&self) -> Result<DimTable> {
        let kp = self.k_prime();
        let mut t = DimTable::new(kp);
        for s in 0..(1u32 << kp) {
            for rho in 0..(1u32 << kp) {
                if char_value(rho, s) == 0 {
                    t.insert(s, rho, self.dim_irreducible(s, rho)?)?;
                }
            }
        }
        Ok(t)
    }

    /// Σ_s (1/|A'_e|) Σ_a χ(B^s ∩ B^a)².
    pub fn trace_square_sum(&self) -> Result<BigUint> {
        let n = 1u32 << self.k_prime();
        let mut total = BigUint::zero();
        for s in 0..n {
            let mut acc = BigUint::zero();
            for a in 0..n {
                let c = self.chi(s, a)?;
                acc += &c * &c;
            }
            total += exact_div(acc, n as u64, "trace square")?;
        }
        Ok(total)
    }
}

pub fn f_invariant(p: &Partition, sub: &SubgroupF2, a: u32) -> Result<BigUint> {
    ChiTable::new(p)?.f_invariant(sub, a)
}

pub fn character_multiplicity(p: &Partition, rho: u32) -> Result<BigUint> {
    ChiTable::new(p)?.character_multiplicity(rho)
}

pub fn dim_irreducible(p: &Partition, s: u32, rho: u32) -> Result<BigUint> {
    ChiTable::new(p)?.dim_irreducible(s, rho)
}

pub fn dim_table(p: &Partition) -> Result<DimTable> {
    ChiTable::new(p)?.dim_table()
}

pub fn left_cell_count(p: &Partition) -> Result<BigUint> {
    let t = ChiTable::new(p)?;
    t.f_invariant(&t.full_group(), 0)
}

/// Σ dim V_{(s,ρ)}² for distinguished λ.
pub fn two_sided_cell_size(p: &Partition) -> Result<BigUint> {
    require_even_c(p)?;
    if !p.is_distinguished() {
        return Err(CellError::NotDistinguished(format!("{p} has repeated parts")));
    }
    let t = dim_table(p)?;
    Ok(t.entries().map(|(_, _, d)| d * d).sum())
}

/// The same cardinality from Σ_s (1/|A'_e|) Σ_a χ(B^s ∩ B^a)².
pub fn two_sided_cell_size_trace(p: &Partition) -> Result<BigUint> {
    require_even_c(p)?;
    if !p.is_distinguished() {
        return Err(CellError::NotDistinguished(format!("{p} has repeated parts")));
    }
    ChiTable::new(p)?.trace_square_sum()
}

/// dim V_{(s,ρ)} for compatible pairs over A'_e of rank k'.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DimTable {
    k_prime: usize,
    entries: BTreeMap<(u32, u32), BigUint>,
}

#[derive(Deserialize)]
struct DimRow {
    s: String,
    rho: String,
    dim: Value,
}

impl DimTable {
    pub fn new(k_prime: usize) -> Self {
        DimTable { k_prime, entries: BTreeMap::new() }
    }

    pub fn k_prime(&self) -> usize {
        self.k_prime
    }

    pub fn insert(&mut self, s: u32, rho: u32, dim: BigUint) -> Result<()> {
        if self.k_prime > MAX_K || (s | rho) >> self.k_prime != 0 {
            return Err(CellError::RangeError(format!("pair ({s:b},{rho:b}) outside rank {}", self.k_prime)));
        }
        if char_value(rho, s) == 1 {
            return Err(CellError::IncompatiblePair(format!(
                "rho {} is -1 on s {}",
                bitstring(rho, self.k_prime),
                bitstring(s, self.k_prime)
            )));
        }
        self.entries.insert((s, rho), dim);
        Ok(())
    }

    pub fn get(&self, s: u32, rho: u32) -> Option<&BigUint> {
        self.entries.get(&(s, rho))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, &BigUint)> {
        self.entries.iter().map(|(&(s, r), d)| (s, r, d))
    }

    /// Rows {"s": bitstring, "rho": bitstring, "dim": n}.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries()
                .map(|(s, r, d)| {
                    let dim: Value = serde_json::from_str(&d.to_string()).expect("integer literal");
                    json!({"s": bitstring(s, self.k_prime), "rho": bitstring(r, self.k_prime), "dim": dim})
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let rows: Vec<DimRow> =
            serde_json::from_value(v.clone()).map_err(|e| CellError::Usage(format!("dims table: {e}")))?;
        let k_prime = rows.first().map(|r| r.s.len()).unwrap_or(0);
        let mut t = DimTable::new(k_prime);
        for r in rows {
            if r.s.len() != k_prime || r.rho.len() != k_prime {
                return Err(CellError::DimensionMismatch("dims rows have different lengths".into()));
            }
            let dim_text = r.dim.to_string();
            let dim: BigUint = dim_text
                .trim_matches('"')
                .parse()
                .map_err(|_| CellError::Usage(format!("dims table: bad dim {dim_text}")))?;
            t.insert(parse_bitstring(&r.s)?, parse_bitstring(&r.rho)?, dim)?;
        }
        Ok(t)
    }
}
