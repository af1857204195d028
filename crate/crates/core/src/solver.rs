//! Multiplicities of centrally extended orbit types in Y_e.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::binomial;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{CellError, Result};
use crate::euler::ec_parts;
use crate::f2alg::{
    bitstring, enumerate_orbit_types, interval_form, AltFormF2, OrbitType, SubgroupF2,
};
use crate::invariants::{ChiTable, DimTable};
use crate::partitions::{LieType, Partition};

const Z1: u32 = 0b001;
const Z2: u32 = 0b010;
const Z3: u32 = 0b100;
const Z12: u32 = 0b011;
const Z13: u32 = 0b101;
const Z23: u32 = 0b110;

/// Multiplicity of each orbit type in Y_e, over A'_e of rank k'.
#[derive(Debug, Clone)]
pub struct MultiplicityVector {
    k_prime: usize,
    entries: BTreeMap<OrbitType, BigUint>,
}

impl MultiplicityVector {
    pub fn new(k_prime: usize) -> Self {
        MultiplicityVector { k_prime, entries: BTreeMap::new() }
    }

    pub fn k_prime(&self) -> usize {
        self.k_prime
    }

    pub fn add(&mut self, o: OrbitType, m: BigUint) -> Result<()> {
        if o.k() != self.k_prime {
            return Err(CellError::DimensionMismatch(format!("orbit rank {} vs {}", o.k(), self.k_prime)));
        }
        *self.entries.entry(o).or_default() += m;
        Ok(())
    }

    pub fn get(&self, o: &OrbitType) -> BigUint {
        self.entries.get(o).cloned().unwrap_or_default()
    }

    /// Entries with nonzero multiplicity.
    pub fn nonzero(&self) -> impl Iterator<Item = (&OrbitType, &BigUint)> {
        self.entries.iter().filter(|(_, m)| !m.is_zero())
    }

    /// All stored entries, zeros included.
    pub fn entries(&self) -> impl Iterator<Item = (&OrbitType, &BigUint)> {
        self.entries.iter()
    }

    /// Σ m(O)·|O|.
    pub fn mass(&self) -> BigUint {
        self.entries.iter().map(|(o, m)| m * BigUint::from(o.cardinality())).sum()
    }

    /// Σ m(O).
    pub fn orbit_count(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn scale(&self, factor: &BigUint) -> MultiplicityVector {
        MultiplicityVector {
            k_prime: self.k_prime,
            entries: self.entries.iter().map(|(o, m)| (o.clone(), m * factor)).collect(),
        }
    }

    /// Σ_O m(O)·[(s,ρ) ∈ L(O)].
    pub fn l_count(&self, s: u32, rho: u32) -> BigUint {
        self.entries.iter().filter(|(o, _)| o.is_associated(s, rho)).map(|(_, m)| m.clone()).sum()
    }

    /// Σ_O m(O)·(number of special orbits of O under `sub`).
    pub fn special_count_under(&self, sub: &SubgroupF2) -> Result<BigUint> {
        let mut total = BigUint::zero();
        for (o, m) in &self.entries {
            total += m * BigUint::from(o.special_count_under(sub)?);
        }
        Ok(total)
    }

    /// Rows {"label", "stabilizer", "form", "cardinality", "multiplicity"}.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(o, m)| {
                    let mult: Value = serde_json::from_str(&m.to_string()).expect("integer literal");
                    json!({
                        "label": orbit_label(o),
                        "stabilizer": o.stabilizer().to_bitstrings(),
                        "form": o.form_bitstrings(),
                        "cardinality": o.cardinality(),
                        "multiplicity": mult,
                    })
                })
                .collect(),
        )
    }
}

/// Multiset equality: entries stored with multiplicity zero are ignored.
impl PartialEq for MultiplicityVector {
    fn eq(&self, other: &Self) -> bool {
        self.k_prime == other.k_prime && self.nonzero().eq(other.nonzero())
    }
}

impl Eq for MultiplicityVector {}

fn to_nonneg(v: BigInt, what: &str) -> Result<BigUint> {
    match v.sign() {
        Sign::Minus => Err(CellError::NegativeResult(format!("{what} = {v}"))),
        _ => Ok(v.magnitude().clone()),
    }
}

fn span(k: usize, gens: &[u32]) -> SubgroupF2 {
    SubgroupF2::span(k, gens).expect("small rank")
}

fn ordinary(k: usize, gens: &[u32]) -> OrbitType {
    OrbitType::from_form(span(k, gens), &AltFormF2::zero(k)).expect("zero form")
}

fn special(k: usize, gens: &[u32], pairs: &[(usize, usize)]) -> OrbitType {
    let psi = AltFormF2::from_pairs(k, pairs).expect("valid pairs");
    OrbitType::from_form(span(k, gens), &psi).expect("restriction")
}

/// Orbit types of the 2-row case (k' = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoRowType {
    Point,
    TwoPoint,
}

impl TwoRowType {
    pub const ALL: [TwoRowType; 2] = [TwoRowType::Point, TwoRowType::TwoPoint];

    pub fn orbit(self) -> OrbitType {
        match self {
            TwoRowType::Point => OrbitType::point(1),
            TwoRowType::TwoPoint => ordinary(1, &[]),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TwoRowType::Point => "O_0",
            TwoRowType::TwoPoint => "O_free",
        }
    }
}

/// Orbit types of the 3-row case (k' = 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThreeRowType {
    /// Full stabilizer, zero form.
    A0,
    /// Stabilizer ⟨z1⟩ (⟨z1, z23⟩ in A_e).
    A1,
    /// Stabilizer ⟨z12⟩ (⟨z3, z12⟩ in A_e).
    A12,
    /// Full stabilizer, nonzero form.
    Special,
}

impl ThreeRowType {
    pub const ALL: [ThreeRowType; 4] = [ThreeRowType::A0, ThreeRowType::A1, ThreeRowType::A12, ThreeRowType::Special];

    pub fn orbit(self) -> OrbitType {
        match self {
            ThreeRowType::A0 => OrbitType::point(2),
            ThreeRowType::A1 => ordinary(2, &[Z1]),
            ThreeRowType::A12 => ordinary(2, &[Z12]),
            ThreeRowType::Special => special(2, &[Z1, Z2], &[(1, 2)]),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ThreeRowType::A0 => "O_0",
            ThreeRowType::A1 => "O_1",
            ThreeRowType::A12 => "O_12",
            ThreeRowType::Special => "O_0^+",
        }
    }
}

/// The twelve orbit types that may occur for 4 rows (k' = 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FourRowType {
    O0,
    O12,
    O23,
    O1_2,
    O1_23,
    O3_12,
    O12_23,
    O0Rad1,
    O0Rad12,
    O0Rad123,
    Plus2_3,
    Plus12_23,
}

impl FourRowType {
    pub const ALL: [FourRowType; 12] = [
        FourRowType::O0,
        FourRowType::O12,
        FourRowType::O23,
        FourRowType::O1_2,
        FourRowType::O1_23,
        FourRowType::O3_12,
        FourRowType::O12_23,
        FourRowType::O0Rad1,
        FourRowType::O0Rad12,
        FourRowType::O0Rad123,
        FourRowType::Plus2_3,
        FourRowType::Plus12_23,
    ];

    pub fn orbit(self) -> OrbitType {
        let all = [Z1, Z2, Z3];
        match self {
            FourRowType::O0 => OrbitType::point(3),
            FourRowType::O12 => ordinary(3, &[Z12]),
            FourRowType::O23 => ordinary(3, &[Z23]),
            FourRowType::O1_2 => ordinary(3, &[Z1, Z2]),
            FourRowType::O1_23 => ordinary(3, &[Z1, Z23]),
            FourRowType::O3_12 => ordinary(3, &[Z3, Z12]),
            FourRowType::O12_23 => ordinary(3, &[Z12, Z23]),
            // z2* ∧ z3*
            FourRowType::O0Rad1 => special(3, &all, &[(2, 3)]),
            // z3* ∧ (z1* + z2*)
            FourRowType::O0Rad12 => special(3, &all, &[(1, 3), (2, 3)]),
            FourRowType::O0Rad123 => {
                OrbitType::from_form(SubgroupF2::full(3), &interval_form(1, 3, 3).expect("valid")).expect("full")
            }
            FourRowType::Plus2_3 => special(3, &[Z2, Z3], &[(2, 3)]),
            FourRowType::Plus12_23 => special(3, &[Z12, Z23], &[(1, 2)]),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FourRowType::O0 => "O_0",
            FourRowType::O12 => "O_12",
            FourRowType::O23 => "O_23",
            FourRowType::O1_2 => "O_{1,2}",
            FourRowType::O1_23 => "O_{1,23}",
            FourRowType::O3_12 => "O_{3,12}",
            FourRowType::O12_23 => "O_{12,23}",
            FourRowType::O0Rad1 => "O_0^1",
            FourRowType::O0Rad12 => "O_0^12",
            FourRowType::O0Rad123 => "O_0^123",
            FourRowType::Plus2_3 => "O^+_{2,3}",
            FourRowType::Plus12_23 => "O^+_{12,23}",
        }
    }

    pub fn from_orbit(o: &OrbitType) -> Option<FourRowType> {
        FourRowType::ALL.into_iter().find(|t| &t.orbit() == o)
    }
}

impl fmt::Display for FourRowType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Name of an orbit type when it has one in the 1- to 4-row vocabulary.
pub fn orbit_label(o: &OrbitType) -> Option<&'static str> {
    match o.k() {
        0 => Some("O_0"),
        1 => TwoRowType::ALL.into_iter().find(|t| &t.orbit() == o).map(|t| t.label()),
        2 => ThreeRowType::ALL.into_iter().find(|t| &t.orbit() == o).map(|t| t.label()),
        3 => FourRowType::from_orbit(o).map(|t| t.label()),
        _ => None,
    }
}

fn n_choose(n: u64, r: u64) -> BigUint {
    if r > n {
        BigUint::zero()
    } else {
        binomial(BigUint::from(n), BigUint::from(r))
    }
}

/// λ = (2j, 2k) with k ≥ j ≥ 0.
pub fn solve_two_row(k: u64, j: u64) -> Result<MultiplicityVector> {
    if j > k {
        return Err(CellError::OrderViolation(format!("need k >= j, got k={k}, j={j}")));
    }
    let n = k + j;
    let point = n_choose(n, j);
    let free: BigUint = (0..j).map(|i| n_choose(n, i)).sum();
    let mut mv = MultiplicityVector::new(1);
    mv.add(TwoRowType::Point.orbit(), point)?;
    mv.add(TwoRowType::TwoPoint.orbit(), free)?;
    Ok(mv)
}

/// The four closed-form multiplicities for λ = (2i, 2j, 2k), k ≥ j ≥ i ≥ 0.
pub fn three_row_values(k: u64, j: u64, i: u64) -> Result<BTreeMap<ThreeRowType, BigUint>> {
    if !(k >= j && j >= i) {
        return Err(CellError::OrderViolation(format!("need k >= j >= i, got ({k},{j},{i})")));
    }
    let n = i + j + k;
    let ec2 = |a: u64, b: u64| -> BigInt { BigInt::from(ec_parts(&[2 * a as u32, 2 * b as u32])) };
    let cnj = n_choose(n, j);
    let s: BigUint = &cnj * (0..i).map(|l| n_choose(i + k, l)).sum::<BigUint>();
    let a0: BigUint = &cnj * (0..=i).map(|l| n_choose(i + k, l)).sum::<BigUint>();
    let two = BigInt::from(2);
    let a1_num = BigInt::from(n_choose(n, i)) * ec2(j, k) - BigInt::from(cnj.clone()) * ec2(i, k);
    let a12_num = BigInt::from(n_choose(n, k)) * ec2(i, j) - BigInt::from(cnj) * ec2(i, k);
    if &a1_num % &two != BigInt::zero() || &a12_num % &two != BigInt::zero() {
        return Err(CellError::NonIntegralAverage(format!("odd numerator for ({k},{j},{i})")));
    }
    let mut out = BTreeMap::new();
    out.insert(ThreeRowType::A0, a0);
    out.insert(ThreeRowType::A1, to_nonneg(a1_num / &two, "a_1")?);
    out.insert(ThreeRowType::A12, to_nonneg(a12_num / &two, "a_12")?);
    out.insert(ThreeRowType::Special, s);
    Ok(out)
}

pub fn solve_three_row(k: u64, j: u64, i: u64) -> Result<MultiplicityVector> {
    let vals = three_row_values(k, j, i)?;
    let mut mv = MultiplicityVector::new(2);
    for (t, m) in vals {
        mv.add(t.orbit(), m)?;
    }
    Ok(mv)
}

fn dim_of(dims: &DimTable, s: u32, rho: u32) -> Result<BigInt> {
    dims.get(s, rho).map(|d| BigInt::from(d.clone())).ok_or_else(|| {
        CellError::MissingDim(format!("dim V({}, {})", bitstring(s, dims.k_prime()), bitstring(rho, dims.k_prime())))
    })
}

/// Choice of the two free parameters a⁺_{2,3} and a₀^{12} of the 4-row type C systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FourRowConstraint {
    /// a⁺_{2,3} = a₀^{12} = 0.
    Geometric,
    /// Explicit values of a⁺_{2,3} and a₀^{12}.
    Free { plus_2_3: BigUint, rad_12: BigUint },
    /// Derived from S₁^{⟨z12,z3⟩} and S₁^{⟨z1,z23⟩}.
    FromS1 { s1_12_3: BigUint, s1_1_23: BigUint },
}

/// Solves the two 6-variable systems given the dims and the free parameters.
pub fn solve_four_row_c_from_dims(dims: &DimTable, constraint: &FourRowConstraint) -> Result<MultiplicityVector> {
    if dims.k_prime() != 3 {
        return Err(CellError::DimensionMismatch(format!("need a rank 3 dims table, got {}", dims.k_prime())));
    }
    let v = |s: u32, rho: u32| dim_of(dims, s, rho);
    let (t, u) = match constraint {
        FourRowConstraint::Geometric => (BigInt::zero(), BigInt::zero()),
        FourRowConstraint::Free { plus_2_3, rad_12 } => (BigInt::from(plus_2_3.clone()), BigInt::from(rad_12.clone())),
        FourRowConstraint::FromS1 { s1_12_3, s1_1_23 } => {
            (v(Z3, Z2)? - BigInt::from(s1_12_3.clone()), BigInt::from(s1_1_23.clone()))
        }
    };
    let a_1_2 = v(Z1, Z3)? - &u;
    let a0_123 = v(Z2, Z13)? - &t;
    let a0_1 = v(Z3, Z2)? - &t;
    let a0 = v(Z2, 0)? - &a_1_2;
    let a_3_12 = v(Z3, 0)? - &a0;
    let a_12_23 = v(Z13, 0)? - &a0;
    let a_1_23 = v(Z1, Z23)? - &a0_123;
    let a23 = v(Z23, 0)? - &a0 - &a_12_23 - &a_1_23;
    let a12 = v(Z12, 0)? - &a0 - &a_1_2 - &a_12_23 - &a_3_12 - &u;
    let a_plus_12_23 = v(Z12, Z12)? - &a12 - &a_3_12 - &a0_123;
    let values = [
        (FourRowType::O0, a0),
        (FourRowType::O12, a12),
        (FourRowType::O23, a23),
        (FourRowType::O1_2, a_1_2),
        (FourRowType::O1_23, a_1_23),
        (FourRowType::O3_12, a_3_12),
        (FourRowType::O12_23, a_12_23),
        (FourRowType::O0Rad1, a0_1),
        (FourRowType::O0Rad12, u),
        (FourRowType::O0Rad123, a0_123),
        (FourRowType::Plus2_3, t),
        (FourRowType::Plus12_23, a_plus_12_23),
    ];
    let mut mv = MultiplicityVector::new(3);
    for (ty, val) in values {
        mv.add(ty.orbit(), to_nonneg(val, ty.label())?)?;
    }
    let failures = check_four_row_equations(&mv, dims)?;
    if let Some(f) = failures.first() {
        return Err(CellError::NegativeResult(format!("equation at {f} is not satisfied")));
    }
    Ok(mv)
}

fn require_even_c_rows(p: &Partition, rows: usize) -> Result<()> {
    if p.lie_type() != LieType::C {
        return Err(CellError::InvalidPartition(format!("{p} is type {}, expected C", p.lie_type())));
    }
    if !p.all_even() {
        return Err(CellError::OddPartPresent(format!("{p}")));
    }
    if p.k() != rows {
        return Err(CellError::InvalidPartition(format!("{p} has {} rows, expected {rows}", p.k())));
    }
    Ok(())
}

/// 4-row type C multiplicities with a⁺_{2,3} = a₀^{12} = 0.
pub fn solve_four_row_c(p: &Partition) -> Result<MultiplicityVector> {
    require_even_c_rows(p, 4)?;
    let dims = ChiTable::new(p)?.dim_table()?;
    solve_four_row_c_from_dims(&dims, &FourRowConstraint::Geometric)
}

/// 4-row types B and D from externally supplied dims.
pub fn solve_four_row_bd(dims: &DimTable) -> Result<MultiplicityVector> {
    if dims.k_prime() != 3 {
        return Err(CellError::DimensionMismatch(format!("need a rank 3 dims table, got {}", dims.k_prime())));
    }
    let v = |s: u32, rho: u32| dim_of(dims, s, rho);
    let d13 = v(Z13, 0)?;
    let d12 = v(Z12, 0)?;
    let d23 = v(Z23, 0)?;
    let d12m = v(Z12, Z12)?;
    let values = [
        (FourRowType::O12_23, d13.clone()),
        (FourRowType::O12, &d12 - &d13),
        (FourRowType::O23, &d23 - &d13),
        (FourRowType::Plus12_23, &d12m + &d13 - &d12),
    ];
    let mut mv = MultiplicityVector::new(3);
    for ty in FourRowType::ALL {
        mv.add(ty.orbit(), BigUint::zero())?;
    }
    for (ty, val) in values {
        mv.add(ty.orbit(), to_nonneg(val, ty.label())?)?;
    }
    Ok(mv)
}

/// The thirteen (s, ρ) pairs whose dims determine the 4-row systems, in display order.
pub const FOUR_ROW_EQUATION_PAIRS: [(u32, u32); 13] = [
    (Z1, 0),
    (Z1, Z3),
    (Z1, Z23),
    (Z2, 0),
    (Z2, Z3),
    (Z2, Z13),
    (Z3, 0),
    (Z3, Z2),
    (Z3, Z12),
    (Z12, Z12),
    (Z13, 0),
    (Z23, 0),
    (Z12, 0),
];

/// For each pair, the types among the twelve whose Lagrangian contains it.
pub fn four_row_equations() -> Vec<((u32, u32), Vec<FourRowType>)> {
    FOUR_ROW_EQUATION_PAIRS
        .iter()
        .map(|&(s, rho)| ((s, rho), FourRowType::ALL.into_iter().filter(|t| t.orbit().is_associated(s, rho)).collect()))
        .collect()
}

/// Pairs among the thirteen at which the L-count differs from the dim, rendered as "(s,rho)".
pub fn check_four_row_equations(mv: &MultiplicityVector, dims: &DimTable) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for &(s, rho) in &FOUR_ROW_EQUATION_PAIRS {
        let want = dim_of(dims, s, rho)?;
        if BigInt::from(mv.l_count(s, rho)) != want {
            bad.push(format!("({},{})", bitstring(s, 3), bitstring(rho, 3)));
        }
    }
    Ok(bad)
}

/// Pairs (s, ρ) of the table at which the L-count differs from dim V_{(s,ρ)}.
pub fn l_count_mismatches(mv: &MultiplicityVector, dims: &DimTable) -> Vec<(u32, u32)> {
    dims.entries()
        .filter(|(s, rho, d)| &mv.l_count(*s, *rho) != *d)
        .map(|(s, rho, _)| (s, rho))
        .collect()
}

/// The seven subgroups carrying an S₁ relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum S1Subgroup {
    Full,
    G1_2,
    G1_3,
    G2_3,
    G12_3,
    G1_23,
    G2_13,
}

impl S1Subgroup {
    pub const ALL: [S1Subgroup; 7] = [
        S1Subgroup::Full,
        S1Subgroup::G1_2,
        S1Subgroup::G1_3,
        S1Subgroup::G2_3,
        S1Subgroup::G12_3,
        S1Subgroup::G1_23,
        S1Subgroup::G2_13,
    ];

    pub fn subgroup(self) -> SubgroupF2 {
        match self {
            S1Subgroup::Full => SubgroupF2::full(3),
            S1Subgroup::G1_2 => span(3, &[Z1, Z2]),
            S1Subgroup::G1_3 => span(3, &[Z1, Z3]),
            S1Subgroup::G2_3 => span(3, &[Z2, Z3]),
            S1Subgroup::G12_3 => span(3, &[Z12, Z3]),
            S1Subgroup::G1_23 => span(3, &[Z1, Z23]),
            S1Subgroup::G2_13 => span(3, &[Z2, Z13]),
        }
    }

    pub fn from_subgroup(h: &SubgroupF2) -> Result<S1Subgroup> {
        S1Subgroup::ALL
            .into_iter()
            .find(|g| &g.subgroup() == h)
            .ok_or_else(|| CellError::UnsupportedSubgroup(format!("{h}")))
    }

    /// Types and coefficients of the displayed relation.
    pub fn relation(self) -> Vec<(FourRowType, u32)> {
        use FourRowType::*;
        match self {
            S1Subgroup::Full => vec![(Plus12_23, 1), (Plus2_3, 1), (O0Rad1, 1), (O0Rad12, 1), (O0Rad123, 1)],
            S1Subgroup::G1_2 => vec![(O0Rad1, 1), (O0Rad12, 1), (O0Rad123, 1)],
            S1Subgroup::G1_3 => vec![(O0Rad12, 1), (O0Rad123, 1)],
            S1Subgroup::G2_3 => vec![(Plus2_3, 2), (O0Rad1, 1), (O0Rad12, 1), (O0Rad123, 1)],
            S1Subgroup::G12_3 => vec![(O0Rad1, 1)],
            S1Subgroup::G1_23 => vec![(O0Rad12, 1)],
            S1Subgroup::G2_13 => vec![(O0Rad1, 1), (O0Rad12, 1)],
        }
    }
}

/// S₁^{A'} from the displayed relation for one of the seven subgroups.
pub fn predict_s1(mv: &MultiplicityVector, sub: &SubgroupF2) -> Result<BigUint> {
    if mv.k_prime() != 3 || sub.k() != 3 {
        return Err(CellError::UnsupportedSubgroup(format!("rank {} vectors have no S1 relations", mv.k_prime())));
    }
    let g = S1Subgroup::from_subgroup(sub)?;
    Ok(g.relation().into_iter().map(|(t, c)| mv.get(&t.orbit()) * BigUint::from(c)).sum())
}

/// enumerate_orbit_types(k−1) filtered by dim V > 0 on every Lagrangian pair.
pub fn possible_orbits(p: &Partition) -> Result<Vec<OrbitType>> {
    if p.k() > 5 {
        return Err(CellError::TooManyRows(format!("{} rows exceeds 5", p.k())));
    }
    let table = ChiTable::new(p)?;
    let dims = table.dim_table()?;
    possible_orbits_from_dims(&dims)
}

pub fn possible_orbits_from_dims(dims: &DimTable) -> Result<Vec<OrbitType>> {
    let positive = |s: u32, rho: u32| dims.get(s, rho).is_some_and(|d| !d.is_zero());
    Ok(enumerate_orbit_types(dims.k_prime())?
        .into_iter()
        .filter(|o| crate::f2alg::lagrangian(o).into_iter().all(|(s, rho)| positive(s, rho)))
        .collect())
}

/// Multiplicities for an all-even type C partition with 1 to 4 rows.
pub fn solve_even_c(p: &Partition) -> Result<MultiplicityVector> {
    if p.lie_type() != LieType::C {
        return Err(CellError::InvalidPartition(format!("{p} is type {}, expected C", p.lie_type())));
    }
    if !p.all_even() {
        return Err(CellError::OddPartPresent(format!("{p}")));
    }
    let h: Vec<u64> = p.half_parts();
    match h.len() {
        0 => {
            let mut mv = MultiplicityVector::new(0);
            mv.add(OrbitType::point(0), BigUint::one())?;
            Ok(mv)
        }
        1 => {
            let mut mv = MultiplicityVector::new(0);
            mv.add(OrbitType::point(0), BigUint::one())?;
            Ok(mv)
        }
        2 => solve_two_row(h[1], h[0]),
        3 => solve_three_row(h[2], h[1], h[0]),
        4 => solve_four_row_c(p),
        n => Err(CellError::EvenPartTooLarge(format!("{n} even rows, at most 4 are solved"))),
    }
}

/// Solution for a mixed type C partition and the copy count N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralSolution {
    pub even_part: Partition,
    pub copies: BigUint,
    pub even_solution: MultiplicityVector,
    pub multiplicities: MultiplicityVector,
}

/// N = 2^{Σb} · n! / (b₁!···b_r!·(n − Σb)!).
pub fn copy_count(p: &Partition) -> Result<BigUint> {
    let (_, odd) = p.odd_even_split();
    let bs = odd.odd_pair_values()?;
    let total: u64 = bs.iter().map(|&b| b as u64).sum();
    let n = p.n();
    if total > n {
        return Err(CellError::InvalidPartition(format!("{p}: odd half exceeds n")));
    }
    let mut sizes: Vec<BigUint> = bs.iter().map(|&b| BigUint::from(b)).collect();
    sizes.push(BigUint::from(n - total));
    Ok((BigUint::one() << total) * num_integer::multinomial(&sizes))
}

pub fn solve_general_sp(p: &Partition) -> Result<GeneralSolution> {
    if p.lie_type() != LieType::C {
        return Err(CellError::InvalidPartition(format!("{p} is type {}, expected C", p.lie_type())));
    }
    let (even, _) = p.odd_even_split();
    if even.k() > 4 {
        return Err(CellError::EvenPartTooLarge(format!("even part {even} has {} rows", even.k())));
    }
    let copies = copy_count(p)?;
    let even_solution = solve_even_c(&even)?;
    let multiplicities = even_solution.scale(&copies);
    Ok(GeneralSolution { even_part: even, copies, even_solution, multiplicities })
}

/// Types allowed for a 4-row partition by its pattern of equal parts.
pub fn remark_types(p: &Partition) -> Result<Vec<FourRowType>> {
    if p.k() != 4 {
        return Err(CellError::InvalidPartition(format!("{p} does not have 4 rows")));
    }
    use FourRowType::*;
    let sizes: Vec<usize> = p.blocks().iter().map(|b| b.len()).collect();
    let mut out = vec![O0, Plus12_23, O12_23];
    let extra: &[FourRowType] = match sizes.as_slice() {
        [4] => &[],
        [3, 1] => &[O0Rad123],
        [2, 2] => &[O3_12, O1_2, O12],
        [1, 3] => &[O0Rad1],
        [2, 1, 1] => &[O3_12, O1_2, O12, O0Rad123],
        [1, 2, 1] => &[O1_23, O0Rad1, O0Rad123, O23],
        [1, 1, 2] => &[O3_12, O1_2, O12, O0Rad1],
        _ => &[O1_23, O0Rad1, O0Rad123, O3_12, O23, O1_2, O12],
    };
    out.extend_from_slice(extra);
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(parts: &[u32]) -> Partition {
        Partition::validate(parts, LieType::C).unwrap()
    }

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn two_row_examples() {
        let mv = solve_two_row(1, 1).unwrap();
        assert_eq!(mv.get(&TwoRowType::Point.orbit()), u(2));
        assert_eq!(mv.get(&TwoRowType::TwoPoint.orbit()), u(1));
        assert_eq!(mv.mass(), u(4));
        let mv = solve_two_row(3, 0).unwrap();
        assert_eq!(mv.get(&TwoRowType::Point.orbit()), u(1));
        assert!(mv.get(&TwoRowType::TwoPoint.orbit()).is_zero());
        let mv = solve_two_row(2, 1).unwrap();
        assert_eq!(mv.get(&TwoRowType::Point.orbit()), u(3));
        assert_eq!(mv.get(&TwoRowType::TwoPoint.orbit()), u(1));
        assert!(matches!(solve_two_row(1, 2), Err(CellError::OrderViolation(_))));
    }

    #[test]
    fn three_row_examples() {
        let v = three_row_values(2, 2, 1).unwrap();
        assert_eq!(
            [ThreeRowType::A0, ThreeRowType::A1, ThreeRowType::A12, ThreeRowType::Special].map(|t| v[&t].clone()),
            [u(40), u(15), u(0), u(10)]
        );
        let v = three_row_values(1, 1, 1).unwrap();
        assert_eq!(
            [ThreeRowType::A0, ThreeRowType::A1, ThreeRowType::A12, ThreeRowType::Special].map(|t| v[&t].clone()),
            [u(9), u(0), u(0), u(3)]
        );
        let v = three_row_values(3, 2, 0).unwrap();
        assert!(v[&ThreeRowType::Special].is_zero());
        assert!(matches!(three_row_values(1, 2, 0), Err(CellError::OrderViolation(_))));
    }

    #[test]
    fn four_row_2222() {
        let mv = solve_four_row_c(&c(&[2, 2, 2, 2])).unwrap();
        let nz: Vec<(Option<&str>, BigUint)> = mv.nonzero().map(|(o, m)| (orbit_label(o), m.clone())).collect();
        assert_eq!(nz.len(), 3);
        assert_eq!(mv.get(&FourRowType::O0.orbit()), u(48));
        assert_eq!(mv.get(&FourRowType::O12_23.orbit()), u(6));
        assert_eq!(mv.get(&FourRowType::Plus12_23.orbit()), u(18));
        assert_eq!(mv.mass(), u(96));
        assert_eq!(predict_s1(&mv, &SubgroupF2::full(3)).unwrap(), u(18));
        assert_eq!(predict_s1(&mv, &S1Subgroup::G1_2.subgroup()).unwrap(), u(0));
    }

    #[test]
    fn bd_examples() {
        let mut dims = DimTable::new(3);
        for (s, r, d) in [(Z13, 0, 2u32), (Z12, 0, 5), (Z23, 0, 7), (Z12, Z12, 4)] {
            dims.insert(s, r, BigUint::from(d)).unwrap();
        }
        let mv = solve_four_row_bd(&dims).unwrap();
        let got: Vec<BigUint> = [FourRowType::O12_23, FourRowType::O12, FourRowType::O23, FourRowType::Plus12_23]
            .map(|t| mv.get(&t.orbit()))
            .to_vec();
        assert_eq!(got, vec![u(2), u(3), u(5), u(1)]);
        for (s, r, d) in dims.entries() {
            assert_eq!(&mv.l_count(s, r), d);
        }
        let mut zero = DimTable::new(3);
        for (s, r) in [(Z13, 0), (Z12, 0), (Z23, 0), (Z12, Z12)] {
            zero.insert(s, r, BigUint::zero()).unwrap();
        }
        assert!(solve_four_row_bd(&zero).unwrap().nonzero().next().is_none());
        let mut neg = DimTable::new(3);
        for (s, r, d) in [(Z13, 0, 3u32), (Z12, 0, 1), (Z23, 0, 1), (Z12, Z12, 0)] {
            neg.insert(s, r, BigUint::from(d)).unwrap();
        }
        assert!(matches!(solve_four_row_bd(&neg), Err(CellError::NegativeResult(_))));
        assert!(matches!(solve_four_row_bd(&DimTable::new(3)), Err(CellError::MissingDim(_))));
    }

    #[test]
    fn mixed_examples() {
        let p = Partition::validate(&[3, 3, 2], LieType::C).unwrap();
        let g = solve_general_sp(&p).unwrap();
        assert_eq!(g.copies, u(32));
        assert_eq!(g.multiplicities.mass(), u(32));
        let g = solve_general_sp(&Partition::validate(&[1, 1], LieType::C).unwrap()).unwrap();
        assert_eq!(g.copies, u(2));
        let g = solve_general_sp(&c(&[2, 4, 4])).unwrap();
        assert_eq!(g.copies, u(1));
        assert_eq!(g.multiplicities, solve_three_row(2, 2, 1).unwrap());
    }

    #[test]
    fn s1_unsupported() {
        let mv = solve_four_row_c(&c(&[2, 2, 2, 2])).unwrap();
        assert!(matches!(predict_s1(&mv, &span(3, &[Z1])), Err(CellError::UnsupportedSubgroup(_))));
    }
}
