//! Nilpotent-orbit partitions for types B, C and D.
//!
//! Parts are stored in weakly ascending order, so index `m` (1-based) refers
//! to the m-th smallest part and to the generator `z_m` of `A_e`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CellError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LieType {
    B,
    C,
    D,
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LieType::B => "B",
            LieType::C => "C",
            LieType::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for LieType {
    type Err = CellError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "B" | "b" => Ok(LieType::B),
            "C" | "c" => Ok(LieType::C),
            "D" | "d" => Ok(LieType::D),
            other => Err(CellError::Usage(format!("unknown lie type '{other}', expected C, B or D"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
    lie_type: LieType,
}

impl Partition {
    /// Checks the parity rule of `lie_type` and returns the canonical form.
    pub fn validate(parts: &[u32], lie_type: LieType) -> Result<Self> {
        if parts.is_empty() {
            return Err(CellError::EmptyInput);
        }
        if parts.contains(&0) {
            return Err(CellError::InvalidPartition("parts must be positive".into()));
        }
        let mut sorted = parts.to_vec();
        sorted.sort_unstable();
        let p = Partition { parts: sorted, lie_type };
        p.check_parity()?;
        Ok(p)
    }

    /// The empty partition (Euler base case).
    pub fn empty(lie_type: LieType) -> Self {
        Partition { parts: Vec::new(), lie_type }
    }

    /// Builds a partition from parts without checking parity. Zero parts are dropped.
    pub(crate) fn from_parts_unchecked(parts: &[u32], lie_type: LieType) -> Self {
        let mut sorted: Vec<u32> = parts.iter().copied().filter(|&p| p > 0).collect();
        sorted.sort_unstable();
        Partition { parts: sorted, lie_type }
    }

    /// Parses "2,4,6,6" (any order, spaces allowed).
    pub fn parse(text: &str, lie_type: LieType) -> Result<Self> {
        let trimmed = text.trim().trim_start_matches('(').trim_end_matches(')');
        if trimmed.is_empty() {
            return Err(CellError::EmptyInput);
        }
        let mut parts = Vec::new();
        for tok in trimmed.split(',') {
            let tok = tok.trim();
            let v: u32 = tok
                .parse()
                .map_err(|_| CellError::Usage(format!("cannot parse part '{tok}' in '{text}'")))?;
            parts.push(v);
        }
        Partition::validate(&parts, lie_type)
    }

    fn check_parity(&self) -> Result<()> {
        let sum: u64 = self.parts.iter().map(|&p| p as u64).sum();
        let (bad_parity, sum_even) = match self.lie_type {
            LieType::C => (1, true),
            LieType::B => (0, false),
            LieType::D => (0, true),
        };
        for (value, mult) in self.multiplicities() {
            if value % 2 == bad_parity && mult % 2 == 1 {
                return Err(CellError::ParityViolation(format!(
                    "part {value} has odd multiplicity {mult} in type {}",
                    self.lie_type
                )));
            }
        }
        if sum.is_multiple_of(2) != sum_even {
            return Err(CellError::ParityViolation(format!(
                "sum {sum} has the wrong parity for type {}",
                self.lie_type
            )));
        }
        Ok(())
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    /// Number of parts.
    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Half the sum of the parts (rounded down for type B).
    pub fn n(&self) -> u64 {
        self.sum() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn all_even(&self) -> bool {
        self.parts.iter().all(|p| p % 2 == 0)
    }

    /// Pairwise distinct parts.
    pub fn is_distinguished(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] != w[1])
    }

    /// Distinct values with multiplicities, ascending.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Maximal runs of equal parts as 0-based index ranges.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.parts.len() {
            if i == self.parts.len() || self.parts[i] != self.parts[start] {
                out.push(start..i);
                start = i;
            }
        }
        out
    }

    /// Half-sizes x_i = λ_i / 2 (only meaningful for even parts).
    pub fn half_parts(&self) -> Vec<u64> {
        self.parts.iter().map(|&p| (p / 2) as u64).collect()
    }

    pub fn transpose(&self) -> TransposeProfile {
        let max = self.parts.last().copied().unwrap_or(0);
        let transpose: Vec<u32> = (1..=max)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        let mut distinct = self.multiplicities();
        distinct.reverse();
        TransposeProfile { transpose, distinct }
    }

    pub fn from_transpose(profile: &TransposeProfile, lie_type: LieType) -> Self {
        let t = Partition::from_parts_unchecked(&profile.transpose, lie_type);
        let back = t.transpose();
        Partition::from_parts_unchecked(&back.transpose, lie_type)
    }

    /// The parts indexed by `a`, with half-size Σ_{i∈a} λ_i / 2.
    pub fn sub_partition(&self, a: &SubsetIndex) -> Result<(Partition, u64)> {
        if a.k() != self.k() {
            return Err(CellError::IndexOutOfRange(format!(
                "subset has length {} but the partition has {} parts",
                a.k(),
                self.k()
            )));
        }
        let parts: Vec<u32> = a.indices().map(|i| self.parts[i]).collect();
        let size: u64 = parts.iter().map(|&p| p as u64).sum::<u64>() / 2;
        Ok((Partition::from_parts_unchecked(&parts, self.lie_type), size))
    }

    /// Splits a type C partition into its even parts and its odd parts.
    pub fn odd_even_split(&self) -> (Partition, Partition) {
        let even: Vec<u32> = self.parts.iter().copied().filter(|p| p % 2 == 0).collect();
        let odd: Vec<u32> = self.parts.iter().copied().filter(|p| p % 2 == 1).collect();
        (
            Partition::from_parts_unchecked(&even, self.lie_type),
            Partition::from_parts_unchecked(&odd, self.lie_type),
        )
    }

    /// For an odd half (b1,b1,...,bk,bk): the list b1..bk.
    pub fn odd_pair_values(&self) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        for (v, m) in self.multiplicities() {
            if v % 2 == 0 || m % 2 == 1 {
                return Err(CellError::InvalidPartition(format!(
                    "{self} is not of the form (b1,b1,...,bk,bk) with odd b"
                )));
            }
            out.extend(std::iter::repeat_n(v, m / 2));
        }
        Ok(out)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// A subset of part indices, bit `m-1` standing for index `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex {
    bits: u64,
    k: usize,
}

impl SubsetIndex {
    pub fn new(bits: u64, k: usize) -> Result<Self> {
        if k > 64 || (k < 64 && bits >> k != 0) {
            return Err(CellError::IndexOutOfRange(format!("bits {bits:b} exceed length {k}")));
        }
        Ok(SubsetIndex { bits, k })
    }

    /// From 1-based indices.
    pub fn from_indices(indices: &[usize], k: usize) -> Result<Self> {
        let mut bits = 0u64;
        for &i in indices {
            if i == 0 || i > k {
                return Err(CellError::IndexOutOfRange(format!("index {i} not in 1..={k}")));
            }
            bits |= 1 << (i - 1);
        }
        Ok(SubsetIndex { bits, k })
    }

    pub fn empty(k: usize) -> Self {
        SubsetIndex { bits: 0, k }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// 0-based members.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.k).filter(move |i| self.bits >> i & 1 == 1)
    }

    pub fn complement(&self) -> Self {
        let mask = if self.k == 64 { u64::MAX } else { (1u64 << self.k) - 1 };
        SubsetIndex { bits: !self.bits & mask, k: self.k }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        SubsetIndex { bits: self.bits & other.bits, k: self.k }
    }

    pub fn minus(&self, other: &Self) -> Self {
        SubsetIndex { bits: self.bits & !other.bits, k: self.k }
    }

    pub fn union(&self, other: &Self) -> Self {
        SubsetIndex { bits: self.bits | other.bits, k: self.k }
    }
}

/// The transpose partition (descending) and the distinct parts of the original.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransposeProfile {
    pub transpose: Vec<u32>,
    /// Distinct parts of the original partition, descending, with multiplicities.
    pub distinct: Vec<(u32, usize)>,
}

impl TransposeProfile {
    /// Number of distinct parts.
    pub fn ell(&self) -> usize {
        self.distinct.len()
    }
}
