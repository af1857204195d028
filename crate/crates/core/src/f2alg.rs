//! Linear algebra over GF(2) for A_e ≅ (Z/2)^k.
//!
//! Elements, characters and form rows are `u32` bit masks: bit `m-1` is the
//! coordinate of `z_m`. A character ρ takes the value −1 on `a` iff
//! `parity(ρ & a) = 1`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CellError, Result};

pub const MAX_K: usize = 31;

#[inline]
pub fn parity(x: u32) -> u32 {
    x.count_ones() & 1
}

#[inline]
pub fn full_mask(k: usize) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

/// Character value in additive form: 1 means −1.
#[inline]
pub fn char_value(rho: u32, a: u32) -> u32 {
    parity(rho & a)
}

/// Bit string with z1 first, e.g. z1*z3 in k=4 is "1010".
pub fn bitstring(x: u32, k: usize) -> String {
    (0..k).map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bitstring(s: &str) -> Result<u32> {
    let mut x = 0u32;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => x |= 1 << i,
            _ => return Err(CellError::Usage(format!("bad bit string '{s}'"))),
        }
    }
    Ok(x)
}

/// Word such as "z1*z3" or "1" for the identity.
pub fn element_word(x: u32, k: usize) -> String {
    if x == 0 {
        return "1".to_string();
    }
    let parts: Vec<String> = (0..k).filter(|i| x >> i & 1 == 1).map(|i| format!("z{}", i + 1)).collect();
    parts.join("*")
}

/// Sign pattern such as "(+,-,+)".
pub fn sign_pattern(rho: u32, k: usize) -> String {
    let s: Vec<&str> = (0..k).map(|i| if rho >> i & 1 == 1 { "-" } else { "+" }).collect();
    format!("({})", s.join(","))
}

fn check_k(k: usize) -> Result<()> {
    if k > MAX_K {
        return Err(CellError::DimensionTooLarge(format!("k = {k} exceeds {MAX_K}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub bits: u32,
    pub k: usize,
}

impl GroupElement {
    pub fn new(bits: u32, k: usize) -> Result<Self> {
        check_k(k)?;
        if bits & !full_mask(k) != 0 {
            return Err(CellError::RangeError(format!("element {bits:b} outside k = {k}")));
        }
        Ok(GroupElement { bits, k })
    }

    pub fn generator(m: usize, k: usize) -> Result<Self> {
        if m == 0 || m > k {
            return Err(CellError::RangeError(format!("z{m} not in 1..={k}")));
        }
        GroupElement::new(1 << (m - 1), k)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&element_word(self.bits, self.k))
    }
}

/// Subgroup of (Z/2)^k stored as a reduced row echelon basis.
///
/// Pivot of a row is its lowest set bit; rows are sorted by pivot and each
/// pivot bit is cleared in every other row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubgroupF2 {
    k: usize,
    basis: Vec<u32>,
}

impl SubgroupF2 {
    pub fn span(k: usize, gens: &[u32]) -> Result<Self> {
        check_k(k)?;
        let mask = full_mask(k);
        let mut rows: Vec<u32> = Vec::new();
        for &g in gens {
            if g & !mask != 0 {
                return Err(CellError::RangeError(format!("generator {g:b} outside k = {k}")));
            }
            let mut x = g;
            for &r in &rows {
                if x & (r & r.wrapping_neg()) != 0 {
                    x ^= r;
                }
            }
            if x != 0 {
                let piv = x & x.wrapping_neg();
                for r in rows.iter_mut() {
                    if *r & piv != 0 {
                        *r ^= x;
                    }
                }
                rows.push(x);
            }
        }
        rows.sort_by_key(|r| r.trailing_zeros());
        Ok(SubgroupF2 { k, basis: rows })
    }

    pub fn trivial(k: usize) -> Self {
        SubgroupF2 { k, basis: Vec::new() }
    }

    pub fn full(k: usize) -> Self {
        SubgroupF2 { k, basis: (0..k).map(|i| 1u32 << i).collect() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn order(&self) -> u64 {
        1u64 << self.dim()
    }

    /// Coordinates of `x` on the echelon basis, if `x` is a member.
    pub fn coords(&self, x: u32) -> Option<u32> {
        let mut rem = x;
        let mut c = 0u32;
        for (i, &r) in self.basis.iter().enumerate() {
            let piv = r & r.wrapping_neg();
            if x & piv != 0 {
                c |= 1 << i;
                rem ^= r;
            }
        }
        if rem == 0 {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, x: u32) -> bool {
        self.coords(x).is_some()
    }

    /// Element with the given coordinates.
    pub fn combine(&self, coords: u32) -> u32 {
        let mut x = 0;
        for (i, &r) in self.basis.iter().enumerate() {
            if coords >> i & 1 == 1 {
                x ^= r;
            }
        }
        x
    }

    /// All elements, indexed by their coordinate vector.
    pub fn elements(&self) -> Vec<u32> {
        (0..(1u32 << self.dim())).map(|c| self.combine(c)).collect()
    }

    pub fn is_subgroup_of(&self, other: &SubgroupF2) -> bool {
        self.basis.iter().all(|&b| other.contains(b))
    }

    pub fn intersect(&self, other: &SubgroupF2) -> Result<SubgroupF2> {
        if self.k != other.k {
            return Err(CellError::DimensionMismatch(format!("k = {} vs {}", self.k, other.k)));
        }
        let (small, big) = if self.dim() <= other.dim() { (self, other) } else { (other, self) };
        let members: Vec<u32> = small.elements().into_iter().filter(|&x| big.contains(x)).collect();
        SubgroupF2::span(self.k, &members)
    }

    pub fn sum(&self, other: &SubgroupF2) -> Result<SubgroupF2> {
        if self.k != other.k {
            return Err(CellError::DimensionMismatch(format!("k = {} vs {}", self.k, other.k)));
        }
        let mut gens = self.basis.clone();
        gens.extend_from_slice(&other.basis);
        SubgroupF2::span(self.k, &gens)
    }

    /// Kernel of a character.
    pub fn kernel_of(k: usize, rho: u32) -> Result<SubgroupF2> {
        check_k(k)?;
        let gens: Vec<u32> = (0..(1u32 << k)).filter(|&a| char_value(rho, a) == 0).collect();
        SubgroupF2::span(k, &gens)
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        self.basis.iter().map(|&b| bitstring(b, self.k)).collect()
    }

    pub fn words(&self) -> Vec<String> {
        self.basis.iter().map(|&b| element_word(b, self.k)).collect()
    }
}

impl fmt::Display for SubgroupF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.words().join(","))
    }
}

/// Alternating bilinear form on (Z/2)^k; `rows[i]` bit j is ψ(z_{i+1}, z_{j+1}).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AltFormF2 {
    k: usize,
    rows: Vec<u32>,
}

impl AltFormF2 {
    pub fn zero(k: usize) -> Self {
        AltFormF2 { k, rows: vec![0; k] }
    }

    pub fn from_rows(k: usize, rows: Vec<u32>) -> Result<Self> {
        check_k(k)?;
        if rows.len() != k {
            return Err(CellError::DimensionMismatch(format!("{} rows for k = {k}", rows.len())));
        }
        let f = AltFormF2 { k, rows };
        if !f.is_alternating() {
            return Err(CellError::RangeError("form is not alternating".into()));
        }
        Ok(f)
    }

    /// The form with ψ(z_h, z_l) = 1 for listed index pairs (1-based).
    pub fn from_pairs(k: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![0u32; k];
        for &(h, l) in pairs {
            if h == 0 || l == 0 || h > k || l > k || h == l {
                return Err(CellError::RangeError(format!("bad pair ({h},{l})")));
            }
            rows[h - 1] ^= 1 << (l - 1);
            rows[l - 1] ^= 1 << (h - 1);
        }
        AltFormF2::from_rows(k, rows)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn is_alternating(&self) -> bool {
        (0..self.k).all(|i| {
            self.rows[i] >> i & 1 == 0
                && (0..self.k).all(|j| (self.rows[i] >> j & 1) == (self.rows[j] >> i & 1))
        })
    }

    pub fn eval(&self, x: u32, y: u32) -> u32 {
        let mut acc = 0u32;
        for i in 0..self.k {
            if x >> i & 1 == 1 {
                acc ^= parity(self.rows[i] & y);
            }
        }
        acc
    }

    pub fn add(&self, other: &AltFormF2) -> Result<AltFormF2> {
        if self.k != other.k {
            return Err(CellError::DimensionMismatch(format!("k = {} vs {}", self.k, other.k)));
        }
        Ok(AltFormF2 { k: self.k, rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a ^ b).collect() })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Radical {x : ψ(x, ·) = 0}.
    pub fn radical(&self) -> SubgroupF2 {
        let members: Vec<u32> =
            (0..(1u32 << self.k)).filter(|&x| (0..self.k).all(|j| self.eval(x, 1 << j) == 0)).collect();
        SubgroupF2::span(self.k, &members).expect("k already checked")
    }
}

/// ω_{[i,j]}: ψ(z_h, z_l) = 1 iff i ≤ h ≠ l ≤ j.
pub fn interval_form(i: usize, j: usize, k: usize) -> Result<AltFormF2> {
    check_k(k)?;
    if i == 0 || i > j || j > k {
        return Err(CellError::RangeError(format!("need 1 <= i <= j <= k, got [{i},{j}] with k = {k}")));
    }
    let mut pairs = Vec::new();
    for h in i..=j {
        for l in (h + 1)..=j {
            pairs.push((h, l));
        }
    }
    AltFormF2::from_pairs(k, &pairs)
}

/// {a : Σ_{m∈[i,j]} a_m = 0}.
pub fn even_interval_stabilizer(i: usize, j: usize, k: usize) -> Result<SubgroupF2> {
    check_k(k)?;
    if i == 0 || i >= j || j > k {
        return Err(CellError::RangeError(format!("need 1 <= i < j <= k, got [{i},{j}] with k = {k}")));
    }
    let interval = interval_mask(i, j);
    let gens: Vec<u32> = (0..(1u32 << k)).filter(|&a| parity(a & interval) == 0).collect();
    SubgroupF2::span(k, &gens)
}

/// Bit mask of the indices i..=j (1-based).
pub fn interval_mask(i: usize, j: usize) -> u32 {
    full_mask(j) & !full_mask(i - 1)
}

/// Gram matrix of ψ on the echelon basis of `h`.
pub fn restrict_form(psi: &AltFormF2, h: &SubgroupF2) -> Result<Vec<u32>> {
    if psi.k() != h.k() {
        return Err(CellError::DimensionMismatch(format!("form k = {} vs subgroup k = {}", psi.k(), h.k())));
    }
    let b = h.basis();
    Ok(b.iter()
        .map(|&x| {
            let mut row = 0u32;
            for (j, &y) in b.iter().enumerate() {
                if psi.eval(x, y) == 1 {
                    row |= 1 << j;
                }
            }
            row
        })
        .collect())
}

fn gram_is_alternating(g: &[u32]) -> bool {
    let d = g.len();
    (0..d).all(|i| g[i] >> i & 1 == 0 && (0..d).all(|j| (g[i] >> j & 1) == (g[j] >> i & 1)) && g[i] >> d == 0)
}

/// A centrally extended orbit type: stabilizer plus alternating form on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitType {
    stabilizer: SubgroupF2,
    gram: Vec<u32>,
}

impl OrbitType {
    pub fn new(stabilizer: SubgroupF2, gram: Vec<u32>) -> Result<Self> {
        if gram.len() != stabilizer.dim() || !gram_is_alternating(&gram) {
            return Err(CellError::RangeError("gram is not an alternating form on the stabilizer".into()));
        }
        Ok(OrbitType { stabilizer, gram })
    }

    pub fn from_form(stabilizer: SubgroupF2, psi: &AltFormF2) -> Result<Self> {
        let gram = restrict_form(psi, &stabilizer)?;
        OrbitType::new(stabilizer, gram)
    }

    /// Full stabilizer, zero form.
    pub fn point(k: usize) -> Self {
        let s = SubgroupF2::full(k);
        let d = s.dim();
        OrbitType { stabilizer: s, gram: vec![0; d] }
    }

    pub fn k(&self) -> usize {
        self.stabilizer.k()
    }

    pub fn stabilizer(&self) -> &SubgroupF2 {
        &self.stabilizer
    }

    pub fn gram(&self) -> &[u32] {
        &self.gram
    }

    pub fn cardinality(&self) -> u64 {
        1u64 << (self.k() - self.stabilizer.dim())
    }

    /// Special means the form is nonzero.
    pub fn is_special(&self) -> bool {
        self.gram.iter().any(|&r| r != 0)
    }

    /// ψ(x, y) for stabilizer members.
    pub fn psi(&self, x: u32, y: u32) -> Option<u32> {
        let cx = self.stabilizer.coords(x)?;
        let cy = self.stabilizer.coords(y)?;
        let mut acc = 0u32;
        for (i, &row) in self.gram.iter().enumerate() {
            if cx >> i & 1 == 1 {
                acc ^= parity(row & cy);
            }
        }
        Some(acc)
    }

    /// The form extended by zero on a complement of the stabilizer's pivots.
    pub fn ambient_form(&self) -> AltFormF2 {
        let k = self.k();
        let b = self.stabilizer.basis();
        let mut rows = vec![0u32; k];
        // dual basis: pivot coordinate of basis row i
        let pivots: Vec<usize> = b.iter().map(|r| r.trailing_zeros() as usize).collect();
        for (i, &gi) in self.gram.iter().enumerate() {
            for (j, &pj) in pivots.iter().enumerate() {
                if gi >> j & 1 == 1 {
                    rows[pivots[i]] |= 1 << pj;
                }
            }
        }
        AltFormF2 { k, rows }
    }

    /// Whether (x, ρ) lies in L(o).
    pub fn is_associated(&self, x: u32, rho: u32) -> bool {
        if !self.stabilizer.contains(x) {
            return false;
        }
        self.stabilizer.basis().iter().all(|&b| char_value(rho, b) == self.psi(x, b).unwrap())
    }

    /// Number of special orbits when the action is restricted to `sub`.
    pub fn special_count_under(&self, sub: &SubgroupF2) -> Result<u64> {
        let meet = self.stabilizer.intersect(sub)?;
        let join = self.stabilizer.sum(sub)?;
        let special = meet.basis().iter().any(|&x| meet.basis().iter().any(|&y| self.psi(x, y) == Some(1)));
        Ok(if special { 1u64 << (self.k() - join.dim()) } else { 0 })
    }

    pub fn form_bitstrings(&self) -> Vec<String> {
        let d = self.gram.len();
        self.gram.iter().map(|&r| bitstring(r, d)).collect()
    }
}

impl fmt::Display for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.stabilizer)?;
        if self.is_special() {
            write!(f, "+")?;
        }
        Ok(())
    }
}

/// L(o) = {(x, ρ) : x ∈ stabilizer, ρ restricted to the stabilizer equals ψ(x, ·)}.
pub fn lagrangian(o: &OrbitType) -> Vec<(u32, u32)> {
    let k = o.k();
    let basis = o.stabilizer().basis().to_vec();
    let mut out = Vec::with_capacity(1 << k);
    for x in o.stabilizer().elements() {
        let target: Vec<u32> = basis.iter().map(|&b| o.psi(x, b).unwrap()).collect();
        for rho in 0..(1u32 << k) {
            if basis.iter().zip(&target).all(|(&b, &t)| char_value(rho, b) == t) {
                out.push((x, rho));
            }
        }
    }
    out.sort_unstable();
    out
}

/// All subgroups of (Z/2)^k.
pub fn enumerate_subgroups(k: usize) -> Result<Vec<SubgroupF2>> {
    check_k(k)?;
    if k > 8 {
        return Err(CellError::DimensionTooLarge(format!("subgroup enumeration limited to k <= 8, got {k}")));
    }
    let mut all: BTreeSet<SubgroupF2> = BTreeSet::new();
    let mut layer: BTreeSet<SubgroupF2> = BTreeSet::new();
    layer.insert(SubgroupF2::trivial(k));
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for h in &layer {
            for x in 1..(1u32 << k) {
                if !h.contains(x) {
                    let mut gens = h.basis().to_vec();
                    gens.push(x);
                    next.insert(SubgroupF2::span(k, &gens)?);
                }
            }
        }
        all.extend(layer);
        layer = next;
    }
    let mut v: Vec<SubgroupF2> = all.into_iter().collect();
    v.sort_by(|a, b| a.dim().cmp(&b.dim()).then(a.cmp(b)));
    Ok(v)
}

/// Every alternating gram of size d.
pub fn enumerate_grams(d: usize) -> Vec<Vec<u32>> {
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| ((i + 1)..d).map(move |j| (i, j))).collect();
    (0..(1u64 << pairs.len()))
        .map(|mask| {
            let mut g = vec![0u32; d];
            for (t, &(i, j)) in pairs.iter().enumerate() {
                if mask >> t & 1 == 1 {
                    g[i] |= 1 << j;
                    g[j] |= 1 << i;
                }
            }
            g
        })
        .collect()
}

/// One representative per (subgroup, gram) pair of (Z/2)^k.
pub fn enumerate_orbit_types(k: usize) -> Result<Vec<OrbitType>> {
    if k > 5 {
        return Err(CellError::DimensionTooLarge(format!("k' = {k} exceeds 5")));
    }
    let mut out = Vec::new();
    for h in enumerate_subgroups(k)? {
        for g in enumerate_grams(h.dim()) {
            out.push(OrbitType::new(h.clone(), g)?);
        }
    }
    Ok(out)
}

/// dim M(Q_y) = ℓ + p(p−1)/2 − ℓ'.
pub fn schur_multiplier_dim(ell: u64, p: u64, ell_prime: u64) -> Result<u64> {
    if ell_prime > ell || p > ell {
        return Err(CellError::RangeError(format!("need 0 <= l' <= l and 0 <= p <= l, got l={ell}, p={p}, l'={ell_prime}")));
    }
    Ok(ell + p * p.saturating_sub(1) / 2 - ell_prime)
}

/// A_e → A'_e = A_e/⟨z_{1..k}⟩, represented on ⟨z_1..z_{k−1}⟩.
pub fn to_quotient(x: u32, k: usize) -> u32 {
    if k == 0 {
        return 0;
    }
    if x >> (k - 1) & 1 == 1 {
        x ^ full_mask(k)
    } else {
        x
    }
}

pub fn subgroup_to_quotient(h: &SubgroupF2) -> Result<SubgroupF2> {
    let k = h.k();
    if k == 0 {
        return Err(CellError::RangeError("no quotient of the trivial ambient group".into()));
    }
    let gens: Vec<u32> = h.basis().iter().map(|&b| to_quotient(b, k)).collect();
    SubgroupF2::span(k - 1, &gens)
}

/// Pushes an A_e orbit type whose stabilizer and radical contain z_{1..k} down to A'_e.
pub fn orbit_to_quotient(o: &OrbitType) -> Result<OrbitType> {
    let k = o.k();
    let all = full_mask(k);
    if !o.stabilizer().contains(all) {
        return Err(CellError::RangeError(format!("stabilizer {} does not contain z_1..z_{k}", o.stabilizer())));
    }
    for &b in o.stabilizer().basis() {
        if o.psi(all, b) != Some(0) {
            return Err(CellError::RangeError("z_1..z_k is not in the radical".into()));
        }
    }
    let q = subgroup_to_quotient(o.stabilizer())?;
    let basis = q.basis().to_vec();
    let gram: Vec<u32> = basis
        .iter()
        .map(|&x| {
            let mut row = 0u32;
            for (j, &y) in basis.iter().enumerate() {
                if o.psi(x, y) == Some(1) {
                    row |= 1 << j;
                }
            }
            row
        })
        .collect();
    OrbitType::new(q, gram)
}

/// Good multiplication: intersect stabilizers and add the restricted forms.
pub fn good_multiply(o1: &OrbitType, o2: &OrbitType) -> Result<OrbitType> {
    let h = o1.stabilizer().intersect(o2.stabilizer())?;
    let basis = h.basis().to_vec();
    let gram: Vec<u32> = basis
        .iter()
        .map(|&x| {
            let mut row = 0u32;
            for (j, &y) in basis.iter().enumerate() {
                if o1.psi(x, y).unwrap() ^ o2.psi(x, y).unwrap() == 1 {
                    row |= 1 << j;
                }
            }
            row
        })
        .collect();
    OrbitType::new(h, gram)
}
