//! Symbols of type C nilpotent orbits and the A_e-characters in the Springer correspondence.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CellError, Result};
use crate::partitions::{LieType, Partition};

/// Two-row symbol; `xi` and `eta` keep the intermediate sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub top: Vec<u32>,
    pub bottom: Vec<u32>,
    pub xi: Vec<u32>,
    pub eta: Vec<u32>,
}

/// One admissible redistribution of a symbol's entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolPermutation {
    pub top: Vec<u32>,
    pub bottom: Vec<u32>,
}

fn gaps_ok(row: &[u32]) -> bool {
    row.windows(2).all(|w| w[1] >= w[0] + 2)
}

impl Symbol {
    /// A symbol given by its rows; each row must be increasing with gaps of at least 2.
    pub fn from_rows(top: &[u32], bottom: &[u32]) -> Result<Self> {
        if !gaps_ok(top) || !gaps_ok(bottom) {
            return Err(CellError::InvalidPartition("symbol rows need increasing entries with gaps >= 2".into()));
        }
        let nonzero: Vec<u32> = top.iter().chain(bottom).copied().filter(|&x| x != 0).collect();
        let distinct: BTreeSet<u32> = nonzero.iter().copied().collect();
        if distinct.len() != nonzero.len() {
            return Err(CellError::InvalidPartition("nonzero symbol entries must be distinct".into()));
        }
        if bottom.contains(&0) {
            return Err(CellError::InvalidPartition("0 must be in the top row".into()));
        }
        Ok(Symbol { top: top.to_vec(), bottom: bottom.to_vec(), xi: Vec::new(), eta: Vec::new() })
    }

    /// Sorted nonzero entries a_1 < … < a_k.
    pub fn nonzero_entries(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.top.iter().chain(&self.bottom).copied().filter(|&x| x != 0).collect();
        v.sort_unstable();
        v
    }

    pub fn rank(&self) -> usize {
        self.nonzero_entries().len()
    }

    /// Character of a permutation: bit m−1 is set when a_m changed row.
    pub fn character_of(&self, perm: &SymbolPermutation) -> u32 {
        let mut rho = 0u32;
        for (m, a) in self.nonzero_entries().into_iter().enumerate() {
            if self.top.contains(&a) != perm.top.contains(&a) {
                rho |= 1 << m;
            }
        }
        rho
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[u32]| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "({} / {})", row(&self.top), row(&self.bottom))
    }
}

/// Builds the symbol of an even type C partition.
pub fn symbol_of(p: &Partition) -> Result<Symbol> {
    if p.lie_type() != LieType::C {
        return Err(CellError::InvalidPartition(format!("{p} is type {}, symbols are built for type C", p.lie_type())));
    }
    if p.is_empty() {
        return Err(CellError::EmptyInput);
    }
    if !p.all_even() {
        return Err(CellError::OddPartPresent(format!("{p}")));
    }
    let mut parts: Vec<u32> = p.parts().to_vec();
    if parts.len() % 2 == 1 {
        parts.insert(0, 0);
    }
    let mut xi_star = Vec::new();
    let mut eta_star = Vec::new();
    for (i, &l) in parts.iter().enumerate() {
        let s = l + i as u32;
        if s % 2 == 1 {
            xi_star.push((s - 1) / 2);
        } else {
            eta_star.push(s / 2);
        }
    }
    if xi_star.len() != eta_star.len() {
        return Err(CellError::InvalidPartition(format!("{p}: unbalanced odd and even entries")));
    }
    let shift = |v: &[u32]| -> Vec<u32> { v.iter().enumerate().map(|(i, &x)| x - i as u32).collect() };
    let mut xi = shift(&xi_star);
    let mut eta = shift(&eta_star);
    if eta.first() == Some(&0) {
        eta.remove(0);
    } else {
        xi.insert(0, 0);
    }
    let top: Vec<u32> = xi.iter().enumerate().map(|(i, &x)| x + 2 * i as u32).collect();
    let bottom: Vec<u32> = eta.iter().enumerate().map(|(i, &x)| x + 2 * i as u32 + 1).collect();
    Ok(Symbol { top, bottom, xi, eta })
}

/// Redistributions with the same row sizes, 0 kept on top and same-row gaps ≥ 2,
/// ordered lexicographically on the bottom row.
pub fn admissible_permutations(s: &Symbol) -> Vec<SymbolPermutation> {
    let has_zero = s.top.contains(&0);
    let movable: Vec<u32> = {
        let mut v: Vec<u32> = s.top.iter().chain(&s.bottom).copied().collect();
        v.sort_unstable();
        if has_zero {
            let pos = v.iter().position(|&x| x == 0).expect("zero present");
            v.remove(pos);
        }
        v
    };
    let nb = s.bottom.len();
    let n = movable.len();
    let mut out = BTreeSet::new();
    if nb <= n {
        for mask in 0u64..(1u64 << n) {
            if mask.count_ones() as usize != nb {
                continue;
            }
            let mut top: Vec<u32> = if has_zero { vec![0] } else { Vec::new() };
            let mut bottom = Vec::with_capacity(nb);
            for (i, &x) in movable.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    bottom.push(x);
                } else {
                    top.push(x);
                }
            }
            if gaps_ok(&top) && gaps_ok(&bottom) {
                out.insert((bottom.clone(), top.clone()));
            }
        }
    }
    out.into_iter().map(|(bottom, top)| SymbolPermutation { top, bottom }).collect()
}

/// Characters of A_e (width k) appearing for λ, sorted.
pub fn springer_characters(p: &Partition) -> Result<Vec<u32>> {
    let s = symbol_of(p)?;
    let set: BTreeSet<u32> = admissible_permutations(&s).iter().map(|perm| s.character_of(perm)).collect();
    Ok(set.into_iter().collect())
}

/// The same characters restricted to A'_e = ⟨z_1,…,z_{k−1}⟩.
pub fn springer_characters_quotient(p: &Partition) -> Result<Vec<u32>> {
    let k = p.k();
    let mask = if k == 0 { 0 } else { (1u32 << (k - 1)) - 1 };
    let set: BTreeSet<u32> = springer_characters(p)?.into_iter().map(|c| c & mask).collect();
    Ok(set.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(parts: &[u32]) -> Partition {
        Partition::validate(parts, LieType::C).unwrap()
    }

    #[test]
    fn symbols() {
        let s = symbol_of(&c(&[2, 2])).unwrap();
        assert_eq!((s.top.as_slice(), s.bottom.as_slice()), (&[0, 3][..], &[2][..]));
        let s = symbol_of(&c(&[2, 4, 4])).unwrap();
        assert_eq!((s.top.as_slice(), s.bottom.as_slice()), (&[1, 4][..], &[3][..]));
        let s = symbol_of(&c(&[2, 4, 6, 6])).unwrap();
        assert_eq!((s.top.as_slice(), s.bottom.as_slice()), (&[0, 4, 7][..], &[2, 6][..]));
        assert!(matches!(symbol_of(&c(&[1, 1])), Err(CellError::OddPartPresent(_))));
    }

    #[test]
    fn three_row_symbol_shape() {
        for i in 1..4u32 {
            for j in i..5 {
                for k in j..6 {
                    let s = symbol_of(&c(&[2 * i, 2 * j, 2 * k])).unwrap();
                    assert_eq!(s.top, vec![i, k + 2]);
                    assert_eq!(s.bottom, vec![j + 1]);
                }
            }
        }
    }

    #[test]
    fn permutation_counts() {
        let printed = Symbol::from_rows(&[0, 4, 8], &[2, 7]).unwrap();
        assert_eq!(admissible_permutations(&printed).len(), 4);
        let s = symbol_of(&c(&[2, 4, 6])).unwrap();
        assert_eq!(admissible_permutations(&s).len(), 3);
        let s = symbol_of(&c(&[2, 2])).unwrap();
        assert_eq!(admissible_permutations(&s).len(), 2);
    }

    #[test]
    fn characters() {
        // bits: z1 is the lowest
        let got = springer_characters(&c(&[2, 4, 6, 6])).unwrap();
        assert_eq!(got, vec![0b0000, 0b0011, 0b1100, 0b1111]);
        let printed = Symbol::from_rows(&[0, 4, 8], &[2, 7]).unwrap();
        let mut from_printed: Vec<u32> =
            admissible_permutations(&printed).iter().map(|q| printed.character_of(q)).collect();
        from_printed.sort_unstable();
        assert_eq!(from_printed, got);
        let got = springer_characters(&c(&[2, 4, 6])).unwrap();
        assert_eq!(got, vec![0b000, 0b011, 0b110]);
        assert_eq!(springer_characters_quotient(&c(&[2, 4, 6, 8])).unwrap().len(), 6);
    }
}
