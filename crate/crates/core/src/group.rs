//! Arithmetic in the group of N-bit strings modulo global complement,
//! subgroup spans, coset decompositions, and the correspondence between
//! bipartitions and group elements.
//!
//! An element is the pair `{b, complement(b)}`; the canonical representative
//! is the lift whose first bit is 0. With that choice the canonical
//! representatives form a plain F2-linear space under XOR, so spans and
//! cosets reduce to bitmask arithmetic. Party `p` (1-indexed) occupies bit
//! `n - p`, so the displayed bit string reads left to right as parties
//! A, B, C, ...

use std::collections::HashSet;
use std::fmt;

use crate::error::Error;
use crate::Result;

/// Largest party count for exhaustive enumeration helpers.
const MAX_ENUM_PARTIES: u32 = 26;

/// An element of the quotient group: an N-bit string modulo complement,
/// stored canonically with first bit 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    n: u32,
    bits: u64,
}

impl GroupElement {
    /// Canonicalize an N-bit string: flip to the complement when the first
    /// (highest) bit is set.
    pub fn canonicalize(n: u32, bits: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArity(format!("need n >= 2 parties, got {n}")));
        }
        if n > 62 {
            return Err(Error::InvalidArity(format!("n = {n} exceeds bitmask range")));
        }
        let mask = (1u64 << n) - 1;
        let bits = bits & mask;
        let canonical = if bits & (1 << (n - 1)) != 0 {
            !bits & mask
        } else {
            bits
        };
        Ok(GroupElement { n, bits: canonical })
    }

    /// Parse a bit string such as `"1000"`.
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.len() as u32;
        let mut bits = 0u64;
        for ch in s.chars() {
            bits <<= 1;
            match ch {
                '0' => {}
                '1' => bits |= 1,
                _ => {
                    return Err(Error::ParseError {
                        line: 0,
                        column: 0,
                        message: format!("invalid bit character {ch:?}"),
                    })
                }
            }
        }
        GroupElement::canonicalize(n, bits)
    }

    pub fn identity(n: u32) -> Result<Self> {
        GroupElement::canonicalize(n, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.bits == 0
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Canonical bitmask (first bit always 0).
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// The two lifts of this element as raw N-bit strings.
    pub fn lifts(&self) -> (u64, u64) {
        let mask = (1u64 << self.n) - 1;
        (self.bits, !self.bits & mask)
    }

    /// Bit of party `p` (1-indexed) in the canonical lift.
    pub fn party_bit(&self, p: u32) -> u64 {
        (self.bits >> (self.n - p)) & 1
    }

    /// XOR then canonicalize. Every element is self-inverse.
    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.n != other.n {
            return Err(Error::InvalidArity(format!(
                "arity mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        // XOR of two canonical strings already has first bit 0.
        Ok(GroupElement {
            n: self.n,
            bits: self.bits ^ other.bits,
        })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", bits_to_string(self.n, self.bits))
    }
}

/// Render a raw lift as an N-character bit string.
pub fn bits_to_string(n: u32, bits: u64) -> String {
    (0..n)
        .map(|i| {
            if bits & (1 << (n - 1 - i)) != 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// A subgroup given by an independent basis.
#[derive(Debug, Clone)]
pub struct Subgroup {
    n: u32,
    basis: Vec<GroupElement>,
}

impl Subgroup {
    /// Build from a basis; fails if the elements are dependent over F2.
    pub fn new(n: u32, basis: Vec<GroupElement>) -> Result<Self> {
        if basis.iter().any(|b| b.n != n) {
            return Err(Error::InvalidArity("basis arity mismatch".into()));
        }
        check_independent(&basis)?;
        Ok(Subgroup { n, basis })
    }

    pub fn trivial(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArity(format!("need n >= 2, got {n}")));
        }
        Ok(Subgroup { n, basis: vec![] })
    }

    /// Span of the last `t - 1` unit vectors: parties N, N-1, ...
    pub fn default_for(n: u32, t: u32) -> Result<Self> {
        if n < 2 || t < 1 || t > n - 1 {
            return Err(Error::InvalidArity(format!(
                "need 1 <= t <= n-1, got t = {t}, n = {n}"
            )));
        }
        let basis = (0..t - 1)
            .map(|i| GroupElement::canonicalize(n, 1 << i))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::new(n, basis)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn basis(&self) -> &[GroupElement] {
        &self.basis
    }

    pub fn order(&self) -> usize {
        1usize << self.basis.len()
    }

    /// All elements, ascending by canonical bitmask.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = (0..self.order())
            .map(|combo| {
                let mut bits = 0u64;
                for (i, b) in self.basis.iter().enumerate() {
                    if combo & (1 << i) != 0 {
                        bits ^= b.bits;
                    }
                }
                GroupElement { n: self.n, bits }
            })
            .collect();
        out.sort();
        out
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        // Gaussian elimination of e against the basis.
        let mut rows: Vec<u64> = self.basis.iter().map(|b| b.bits).collect();
        let mut x = e.bits;
        reduce_rows(&mut rows);
        for row in rows {
            let pivot = 63 - row.leading_zeros();
            if x & (1 << pivot) != 0 {
                x ^= row;
            }
        }
        x == 0
    }
}

fn reduce_rows(rows: &mut Vec<u64>) {
    rows.retain(|&r| r != 0);
    rows.sort_unstable_by(|a, b| b.cmp(a));
    let mut i = 0;
    while i < rows.len() {
        let pivot = 63 - rows[i].leading_zeros();
        let mut j = i + 1;
        while j < rows.len() {
            if rows[j] & (1 << pivot) != 0 {
                rows[j] ^= rows[i];
            }
            j += 1;
        }
        rows.retain(|&r| r != 0);
        rows.sort_unstable_by(|a, b| b.cmp(a));
        i += 1;
    }
}

fn check_independent(basis: &[GroupElement]) -> Result<()> {
    let mut rows: Vec<u64> = basis.iter().map(|b| b.bits).collect();
    let len = rows.len();
    reduce_rows(&mut rows);
    if rows.len() != len {
        return Err(Error::DependentBasis(format!(
            "rank {} < basis size {len}",
            rows.len()
        )));
    }
    Ok(())
}

/// All F2-combinations of a basis; errors on a dependent input basis.
pub fn span(basis: &[GroupElement]) -> Result<Vec<GroupElement>> {
    if basis.is_empty() {
        return Err(Error::InvalidArity(
            "span of an empty slice needs an arity; use Subgroup::trivial".into(),
        ));
    }
    let n = basis[0].n;
    Subgroup::new(n, basis.to_vec()).map(|s| s.elements())
}

/// Coset decomposition of the whole group by a proper subgroup.
#[derive(Debug, Clone)]
pub struct CosetDecomposition {
    subgroup: Subgroup,
    representatives: Vec<GroupElement>,
}

impl CosetDecomposition {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// Representatives of the proper cosets (the subgroup itself excluded),
    /// each the lexicographically smallest lifted N-bit string in its coset.
    pub fn representatives(&self) -> &[GroupElement] {
        &self.representatives
    }

    pub fn coset_count(&self) -> usize {
        self.representatives.len()
    }

    /// Locate `p`: either inside the subgroup (`coset_index` absent) or in
    /// coset `l` with `p = g_l + h`. Total on valid inputs.
    pub fn locate(&self, p: &GroupElement) -> Result<(GroupElement, Option<usize>)> {
        if p.n != self.subgroup.n {
            return Err(Error::InvalidArity(format!(
                "arity mismatch: {} vs {}",
                p.n, self.subgroup.n
            )));
        }
        if self.subgroup.contains(p) {
            return Ok((*p, None));
        }
        for (l, g) in self.representatives.iter().enumerate() {
            let h = p.add(g)?;
            if self.subgroup.contains(&h) {
                return Ok((h, Some(l)));
            }
        }
        unreachable!("cosets cover the group");
    }
}

/// Decompose the group into cosets of `subgroup`.
pub fn coset_decomposition(subgroup: &Subgroup) -> Result<CosetDecomposition> {
    let n = subgroup.n;
    let group_order = 1u64 << (n - 1);
    if subgroup.order() as u64 >= group_order {
        return Err(Error::NotProperSubgroup(format!(
            "subgroup of order {} is the whole group of order {group_order}",
            subgroup.order()
        )));
    }
    if n > MAX_ENUM_PARTIES {
        return Err(Error::BudgetExceeded(format!(
            "coset enumeration for n = {n} exceeds the exhaustive budget"
        )));
    }
    let members: HashSet<u64> = subgroup.elements().iter().map(|e| e.bits).collect();
    let mut covered = vec![false; group_order as usize];
    for &b in &members {
        covered[b as usize] = true;
    }
    let mut representatives = Vec::new();
    // Ascending canonical bitmask = lexicographically smallest lift.
    for g in 0..group_order {
        if covered[g as usize] {
            continue;
        }
        representatives.push(GroupElement { n, bits: g });
        for &h in &members {
            covered[(g ^ h) as usize] = true;
        }
    }
    Ok(CosetDecomposition {
        subgroup: subgroup.clone(),
        representatives,
    })
}

/// An unordered split of the N parties into two nonempty groups.
///
/// The mask marks the side not containing party 1, so the canonical mask
/// always has first bit 0 and the complement maps to the same value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    n: u32,
    mask: u64,
}

impl Bipartition {
    pub fn from_mask(n: u32, mask: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArity(format!("need n >= 2, got {n}")));
        }
        let full = (1u64 << n) - 1;
        let mask = mask & full;
        if mask == 0 || mask == full {
            return Err(Error::InvalidState(
                "bipartition sides must both be nonempty".into(),
            ));
        }
        let canonical = if mask & (1 << (n - 1)) != 0 {
            !mask & full
        } else {
            mask
        };
        Ok(Bipartition { n, mask: canonical })
    }

    /// Build from the 1-indexed list of parties on one side.
    pub fn from_parties(n: u32, parties: &[u32]) -> Result<Self> {
        let mut mask = 0u64;
        for &p in parties {
            if p == 0 || p > n {
                return Err(Error::InvalidIndex(format!("party {p} out of 1..={n}")));
            }
            mask |= 1 << (n - p);
        }
        Bipartition::from_mask(n, mask)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Canonical mask (bit set = party on the side away from party 1).
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn mask_string(&self) -> String {
        bits_to_string(self.n, self.mask)
    }

    /// Parties on the side containing party 1 (bit clear), 1-indexed.
    pub fn left_parties(&self) -> Vec<u32> {
        (1..=self.n)
            .filter(|&p| self.mask & (1 << (self.n - p)) == 0)
            .collect()
    }

    pub fn right_parties(&self) -> Vec<u32> {
        (1..=self.n)
            .filter(|&p| self.mask & (1 << (self.n - p)) != 0)
            .collect()
    }

    /// Indicator string of one side, canonicalized; S and its complement map
    /// to the same element.
    pub fn to_group_element(&self) -> GroupElement {
        GroupElement {
            n: self.n,
            bits: self.mask,
        }
    }

    /// Human-readable split such as `"ABD|C"` (letters by party index).
    pub fn display(&self) -> String {
        display_split(self.n, self.mask)
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// Render a raw (possibly uncanonical) mask as `left|right` party letters.
pub fn display_split(n: u32, raw_mask: u64) -> String {
    let name = |p: u32| -> String {
        if n <= 26 {
            char::from(b'A' + (p - 1) as u8).to_string()
        } else {
            format!("P{p}")
        }
    };
    let left: String = (1..=n)
        .filter(|&p| raw_mask & (1 << (n - p)) == 0)
        .map(name)
        .collect();
    let right: String = (1..=n)
        .filter(|&p| raw_mask & (1 << (n - p)) != 0)
        .map(name)
        .collect();
    format!("{left}|{right}")
}

/// All `2^(n-1) - 1` canonical bipartitions, ascending by mask.
pub fn enumerate_bipartitions(n: u32) -> Result<Vec<Bipartition>> {
    if n < 2 {
        return Err(Error::InvalidArity(format!("need n >= 2, got {n}")));
    }
    if n > MAX_ENUM_PARTIES {
        return Err(Error::BudgetExceeded(format!(
            "bipartition enumeration for n = {n} exceeds the exhaustive budget"
        )));
    }
    Ok((1..(1u64 << (n - 1)))
        .map(|mask| Bipartition { n, mask })
        .collect())
}
