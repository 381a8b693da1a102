//! Generators for the genuinely nonlocal families: the straightforward
//! diagonal construction, the subgroup/coset qubit construction with its
//! minimal cardinality, the even-d qudit generalization, and the
//! "Fourier states plus stopper" sets backed by a backtracking search.

mod fixtures;
mod stopper;

pub use fixtures::{
    alpha, beta, bipartite_fixtures, chi, delta, eta, fixtures, gamma, n11_5, n15_6, n19_6, n7_4,
    s11_5, s19_6, TermVector,
};
pub use stopper::{
    stopper_search, validate_arrangement, ArrangementReport, StopperArrangement,
    DEFAULT_SEARCH_BUDGET,
};

use serde_json::json;

use crate::error::Error;
use crate::group::{coset_decomposition, GroupElement, Subgroup};
use crate::states::{canonical_state, GhzState, PhaseFraction, ProductTerm, Provenance, StateSet};
use crate::Result;

/// Construction families exposed by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionKind {
    Prop1,
    Thm1,
    Mdn,
    Dplus1,
}

/// The diagonal-subspace construction: `d` Fourier states on the global
/// diagonal plus one shifted diagonal state per small party subset.
///
/// Cardinality `d + 2^(n-1) - 1`; every bipartition hosts `d + 1` maximally
/// entangled states in a common d (x) d subspace.
pub fn prop1_set(d: usize, n: usize) -> Result<StateSet> {
    if d < 2 || n < 2 {
        return Err(Error::InvalidArity(format!(
            "need d >= 2 and n >= 2, got d = {d}, n = {n}"
        )));
    }
    let mut states = Vec::new();
    // Fourier states on the diagonal.
    let zero_offsets = vec![0u8; n - 1];
    for k in 1..=d {
        states.push(canonical_state(d, n, k, &zero_offsets)?);
    }
    // One state per subset S with 1 <= |S| < n/2: parties in S keep j, the
    // complement advances to j + 1.
    let subset_state = |mask: u64| -> Result<GhzState> {
        let terms = (0..d)
            .map(|j| {
                let symbols = (0..n)
                    .map(|p| {
                        let in_s = mask & (1 << (n - 1 - p)) != 0;
                        if in_s {
                            j as u8
                        } else {
                            ((j + 1) % d) as u8
                        }
                    })
                    .collect();
                Ok(ProductTerm {
                    symbols,
                    phase: PhaseFraction::one(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GhzState::new(n, d, terms)
    };
    for mask in 1..(1u64 << n) - 1 {
        let size = mask.count_ones() as usize;
        if 2 * size < n {
            states.push(subset_state(mask)?);
        } else if n % 2 == 0 && 2 * size == n && mask & (1 << (n - 1)) != 0 {
            // even n: equator subsets containing party 1 only
            states.push(subset_state(mask)?);
        }
    }
    StateSet::new(
        n,
        d,
        states,
        Provenance::new("prop1", json!({ "d": d, "n": n })),
    )
}

/// Subgroup/coset construction over the N-qubit basis: the full conjugate
/// pair for every subgroup element plus one plus-signed state per proper
/// coset. Cardinality `2^t + 2^(n-t) - 1`.
pub fn thm1_set(n: usize, t: usize, subgroup: Option<Subgroup>) -> Result<StateSet> {
    build_group_set(2, n, t, subgroup, "thm1")
}

/// Minimal qubit cardinality over `t`: `2^(M+1) - 1` for `n = 2M`,
/// `3 * 2^M - 1` for `n = 2M + 1`.
pub fn m2(n: usize) -> Result<u128> {
    if n < 2 {
        return Err(Error::InvalidArity(format!("need n >= 2, got {n}")));
    }
    let m = n / 2;
    Ok(if n % 2 == 0 {
        (1u128 << (m + 1)) - 1
    } else {
        3 * (1u128 << m) - 1
    })
}

/// Even-d generalization: subgroup elements index `d/2`-shift offset
/// patterns carrying full Fourier multiplets, coset representatives carry a
/// single plus state. Uses the cardinality-minimizing `t`, clamped to the
/// valid range.
pub fn mdn_set(d: usize, n: usize) -> Result<StateSet> {
    if d % 2 != 0 {
        return Err(Error::UnsupportedDimensionParity { d });
    }
    if d < 2 || n < 2 {
        return Err(Error::InvalidArity(format!(
            "need even d >= 2 and n >= 2, got d = {d}, n = {n}"
        )));
    }
    let t = optimal_t(d, n);
    build_group_set(d, n, t, None, "mdn")
}

/// Cardinality of [`mdn_set`] without building it.
pub fn md(d: usize, n: usize) -> Result<u128> {
    if d % 2 != 0 {
        return Err(Error::UnsupportedDimensionParity { d });
    }
    if d < 2 || n < 2 {
        return Err(Error::InvalidArity(format!(
            "need even d >= 2 and n >= 2, got d = {d}, n = {n}"
        )));
    }
    let t = optimal_t(d, n) as u32;
    Ok((1u128 << (t - 1)) * d as u128 + (1u128 << (n as u32 - t)) - 1)
}

/// The closed-form minimum on the formula's own domain (no clamping): two
/// parity branches on `n + floor(log2(d/2))`. Returns `None` when the
/// minimizing `t` falls outside `1..=n-1`, where only the clamped
/// construction of [`md`] applies.
pub fn md_closed_form(d: usize, n: usize) -> Result<Option<u128>> {
    if d % 2 != 0 {
        return Err(Error::UnsupportedDimensionParity { d });
    }
    let l = ((d / 2) as u32).ilog2() as usize;
    let tm = (n - l) / 2;
    if tm < 1 || tm > n - 1 {
        return Ok(None);
    }
    let m = ((n + l) / 2) as u32;
    let f = (d as u32).ilog2(); // d / 2^f = lambda in [1, 2)
    let lambda_term = (d as u128) << m; // 2^m * d, divided by 2^f below
    if lambda_term % (1u128 << f) != 0 {
        return Ok(None); // formula value is not an integer here
    }
    let lambda_term = lambda_term >> f;
    let base = if (n + l) % 2 == 0 {
        (1u128 << m) + lambda_term // 2^m (1 + lambda) - 1
    } else {
        (2u128 << m) + lambda_term // 2^m (2 + lambda) - 1
    };
    Ok(Some(base - 1))
}

/// t minimizing `2^(t-1) d + 2^(n-t) - 1`, clamped into `[1, n-1]`.
fn optimal_t(d: usize, n: usize) -> usize {
    let l = ((d / 2) as u32).ilog2() as usize;
    let tm = n.saturating_sub(l) / 2;
    tm.clamp(1, n - 1)
}

fn build_group_set(
    d: usize,
    n: usize,
    t: usize,
    subgroup: Option<Subgroup>,
    tag: &str,
) -> Result<StateSet> {
    if n < 2 || t < 1 || t > n - 1 {
        return Err(Error::InvalidArity(format!(
            "need 1 <= t <= n-1, got t = {t}, n = {n}"
        )));
    }
    let subgroup = match subgroup {
        Some(s) => {
            if s.n() as usize != n {
                return Err(Error::InvalidArity("subgroup arity mismatch".into()));
            }
            if s.order() != 1usize << (t - 1) {
                return Err(Error::SubgroupOrderMismatch {
                    expected_log2: (t - 1) as u32,
                    got: s.order(),
                });
            }
            s
        }
        None => Subgroup::default_for(n as u32, t as u32)?,
    };
    let dec = coset_decomposition(&subgroup)?;
    let half = (d / 2) as u8;

    let offsets_for = |e: &GroupElement| -> Vec<u8> {
        (2..=n as u32).map(|p| e.party_bit(p) as u8 * half).collect()
    };

    let mut states = Vec::new();
    for h in subgroup.elements() {
        let offs = offsets_for(&h);
        for k in 1..=d {
            states.push(canonical_state(d, n, k, &offs)?);
        }
    }
    for g in dec.representatives() {
        states.push(canonical_state(d, n, 1, &offsets_for(g))?);
    }

    let basis_strings: Vec<String> = subgroup.basis().iter().map(|b| b.to_string()).collect();
    StateSet::new(
        n,
        d,
        states,
        Provenance::new(
            tag,
            json!({ "d": d, "n": n, "t": t, "subgroup_basis": basis_strings }),
        ),
    )
}

/// `d` Fourier states plus `m` stopper states found by [`stopper_search`].
pub fn dplus1_set(d: usize, n: usize, stoppers: usize, budget: u64) -> Result<StateSet> {
    if d < 2 || n < 3 || stoppers < 1 {
        return Err(Error::InvalidArity(format!(
            "need d >= 2, n >= 3, stoppers >= 1, got d = {d}, n = {n}, m = {stoppers}"
        )));
    }
    let arrangements = stopper_search(d, n, stoppers, budget)?;
    let zero_offsets = vec![0u8; n - 1];
    let mut states = Vec::new();
    for k in 1..=d {
        states.push(canonical_state(d, n, k, &zero_offsets)?);
    }
    for arr in &arrangements {
        states.push(arr.to_state()?);
    }
    let grids: Vec<Vec<String>> = arrangements
        .iter()
        .map(|a| a.rows().iter().map(|r| symbols_to_string(r)).collect())
        .collect();
    StateSet::new(
        n,
        d,
        states,
        Provenance::new(
            "dplus1",
            json!({ "d": d, "n": n, "stoppers": stoppers, "stopper_grid": grids }),
        ),
    )
}

pub(crate) fn symbols_to_string(row: &[u8]) -> String {
    row.iter()
        .map(|&s| {
            if s < 10 {
                (b'0' + s) as char
            } else {
                // letters from 'z' for 10 onward, matching base-11+ digit naming
                (b'a' + (s - 10)) as char
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::validate_ghz;

    #[test]
    fn prop1_cardinalities() {
        assert_eq!(prop1_set(2, 4).unwrap().len(), 9);
        assert_eq!(prop1_set(3, 3).unwrap().len(), 6);
        assert_eq!(prop1_set(2, 2).unwrap().len(), 3);
        for (d, n) in [(2usize, 5usize), (3, 4), (4, 4)] {
            let set = prop1_set(d, n).unwrap();
            assert_eq!(set.len(), d + (1 << (n - 1)) - 1, "d={d} n={n}");
            for s in set.states() {
                assert!(validate_ghz(s).valid);
            }
        }
    }

    #[test]
    fn thm1_cardinalities_and_classes() {
        for n in 2..=10usize {
            for t in 1..n {
                let set = thm1_set(n, t, None).unwrap();
                assert_eq!(set.len(), (1 << t) + (1 << (n - t)) - 1, "n={n} t={t}");
            }
        }
        // n=4, t=2: pair classes {0000, 0001}, singles in 3 distinct cosets
        let set = thm1_set(4, 2, None).unwrap();
        assert_eq!(set.len(), 7);
        let mut pairs = std::collections::HashMap::new();
        for s in set.states() {
            let (_, offs) = s.canonical_params().unwrap();
            *pairs.entry(offs).or_insert(0usize) += 1;
        }
        let pair_classes: Vec<_> = pairs.iter().filter(|(_, &c)| c == 2).collect();
        let singles: Vec<_> = pairs.iter().filter(|(_, &c)| c == 1).collect();
        assert_eq!(pair_classes.len(), 2);
        assert_eq!(singles.len(), 3);
    }

    #[test]
    fn thm1_smallest_case_is_three_bell_states() {
        let set = thm1_set(2, 1, None).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set.n(), 2);
    }

    #[test]
    fn thm1_subgroup_order_checked() {
        let wrong = Subgroup::default_for(4, 3).unwrap(); // order 4
        assert!(matches!(
            thm1_set(4, 2, Some(wrong)),
            Err(Error::SubgroupOrderMismatch { .. })
        ));
    }

    #[test]
    fn m2_values() {
        assert_eq!(m2(4).unwrap(), 7);
        assert_eq!(m2(5).unwrap(), 11);
        assert_eq!(m2(6).unwrap(), 15);
        // m2(n) = min over t of |thm1_set|
        for n in 2..=10usize {
            let min_t = (1..n)
                .map(|t| ((1u128 << t) + (1u128 << (n - t)) - 1, t))
                .min()
                .unwrap()
                .0;
            assert_eq!(m2(n).unwrap(), min_t, "n = {n}");
        }
    }

    #[test]
    fn mdn_examples() {
        assert_eq!(mdn_set(2, 6).unwrap().len(), 15);
        assert_eq!(mdn_set(4, 5).unwrap().len(), 15);
        assert_eq!(mdn_set(4, 3).unwrap().len(), 7);
        assert_eq!(prop1_set(4, 3).unwrap().len(), 7);
        assert!(matches!(
            mdn_set(3, 4),
            Err(Error::UnsupportedDimensionParity { d: 3 })
        ));
    }

    #[test]
    fn mdn_matches_md_and_closed_form() {
        for d in [2usize, 4, 6, 8] {
            for n in 2..=10usize {
                let count = mdn_set(d, n).unwrap().len() as u128;
                assert_eq!(count, md(d, n).unwrap(), "d={d} n={n}");
                if let Some(closed) = md_closed_form(d, n).unwrap() {
                    assert_eq!(count, closed, "closed form at d={d} n={n}");
                }
            }
        }
        // at d=2 the closed form coincides with m2 everywhere
        for n in 2..=10usize {
            assert_eq!(md(2, n).unwrap(), m2(n).unwrap());
        }
    }

    #[test]
    fn dplus1_smallest_case() {
        let set = dplus1_set(4, 3, 1, 1_000_000).unwrap();
        assert_eq!(set.len(), 5);
        for s in set.states() {
            assert!(validate_ghz(s).valid);
        }
    }
}
