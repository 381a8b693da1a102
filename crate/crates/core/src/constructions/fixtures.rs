//! Named reference sets used throughout the test suites: the small qubit
//! families with their printed labels, the d = 4 and d = 11 stopper sets,
//! and the bipartite three-state / Fourier-plus-stopper families.

use num_complex::Complex64;
use serde_json::json;

use crate::error::Error;
use crate::states::{canonical_state, GhzState, PhaseFraction, ProductTerm, Provenance, StateSet};
use crate::tensor::BipartiteShape;
use crate::Result;

/// A bipartite vector given as weighted product terms `(a, b, phase)` with
/// uniform amplitude `1/sqrt(#terms)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TermVector {
    pub shape: BipartiteShape,
    pub terms: Vec<(usize, usize, PhaseFraction)>,
}

impl TermVector {
    pub fn new(dim_a: usize, dim_b: usize, terms: Vec<(usize, usize, PhaseFraction)>) -> Result<Self> {
        let shape = BipartiteShape::new(dim_a, dim_b)?;
        if terms.is_empty() {
            return Err(Error::InvalidState("term vector with no terms".into()));
        }
        for &(a, b, _) in &terms {
            if a >= dim_a || b >= dim_b {
                return Err(Error::InvalidIndex(format!(
                    "term ({a}, {b}) outside {dim_a} x {dim_b}"
                )));
            }
        }
        Ok(TermVector { shape, terms })
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.shape.side()];
        let amp = 1.0 / (self.terms.len() as f64).sqrt();
        for &(a, b, phase) in &self.terms {
            v[self.shape.index(a, b)] += phase.value() * amp;
        }
        v
    }
}

fn offsets_from_label(label: &str) -> Vec<u8> {
    let bits: Vec<u8> = label.bytes().map(|b| b - b'0').collect();
    bits[1..].iter().map(|&b| b ^ bits[0]).collect()
}

/// The conjugate pair (both signs) for a printed index label.
fn pair(n: usize, label: &str) -> Result<Vec<GhzState>> {
    let offs = offsets_from_label(label);
    Ok(vec![
        canonical_state(2, n, 1, &offs)?,
        canonical_state(2, n, 2, &offs)?,
    ])
}

/// The plus-signed state for a printed index label.
fn single(n: usize, label: &str) -> Result<GhzState> {
    canonical_state(2, n, 1, &offsets_from_label(label))
}

fn qubit_fixture(
    name: &str,
    n: usize,
    pairs: &[&str],
    singles: &[&str],
) -> Result<StateSet> {
    let mut states = Vec::new();
    for p in pairs {
        states.extend(pair(n, p)?);
    }
    for s in singles {
        states.push(single(n, s)?);
    }
    StateSet::new(
        n,
        2,
        states,
        Provenance::new(
            name,
            json!({ "n": n, "pair_labels": pairs, "single_labels": singles }),
        ),
    )
}

/// 7-state four-qubit set: two conjugate pairs plus three singles.
pub fn n7_4() -> Result<StateSet> {
    qubit_fixture("fixture:n7_4", 4, &["0000", "0001"], &["0010", "0100", "1000"])
}

/// 11-state five-qubit set with two conjugate pairs.
pub fn n11_5() -> Result<StateSet> {
    qubit_fixture(
        "fixture:n11_5",
        5,
        &["00000", "00001"],
        &[
            "00010", "00100", "01000", "10000", "00110", "01010", "10010",
        ],
    )
}

/// 11-state five-qubit set with four conjugate pairs.
pub fn s11_5() -> Result<StateSet> {
    qubit_fixture(
        "fixture:s11_5",
        5,
        &["00000", "00001", "00010", "00011"],
        &["00100", "01000", "10000"],
    )
}

/// 15-state six-qubit set with four conjugate pairs.
pub fn n15_6() -> Result<StateSet> {
    qubit_fixture(
        "fixture:n15_6",
        6,
        &["000000", "000001", "000010", "000011"],
        &[
            "000100", "001000", "010000", "100000", "001100", "010100", "100100",
        ],
    )
}

/// 19-state six-qubit set with two conjugate pairs.
pub fn s19_6() -> Result<StateSet> {
    qubit_fixture(
        "fixture:s19_6",
        6,
        &["000000", "000001"],
        &[
            "000010", "000100", "001000", "010000", "100000", "000110", "001010", "010010",
            "100010", "001100", "010100", "100100", "011000", "101000", "110000",
        ],
    )
}

/// 19-state six-qubit set with eight conjugate pairs.
pub fn n19_6() -> Result<StateSet> {
    qubit_fixture(
        "fixture:n19_6",
        6,
        &[
            "000000", "000001", "000010", "000100", "000011", "000110", "000101", "000111",
        ],
        &["001000", "010000", "100000"],
    )
}

/// Five orthogonal states in 4 (x) 4 (x) 4: four Fourier states plus the
/// `{011, 202, 330, 123}` stopper.
pub fn eta() -> Result<StateSet> {
    let mut states = Vec::new();
    for k in 1..=4 {
        states.push(canonical_state(4, 3, k, &[0, 0])?);
    }
    let stopper_rows: [[u8; 3]; 4] = [[0, 1, 1], [2, 0, 2], [3, 3, 0], [1, 2, 3]];
    states.push(GhzState::new(
        3,
        4,
        stopper_rows
            .iter()
            .map(|r| ProductTerm {
                symbols: r.to_vec(),
                phase: PhaseFraction::one(),
            })
            .collect(),
    )?);
    StateSet::new(
        3,
        4,
        states,
        Provenance::new("fixture:eta", json!({ "d": 4, "n": 3 })),
    )
}

/// Twelve orthogonal states in (C^11)^(x4): eleven Fourier states plus the
/// eleven-row stopper (symbol `z` stands for 10).
pub fn delta() -> Result<StateSet> {
    let mut states = Vec::new();
    for k in 1..=11 {
        states.push(canonical_state(11, 4, k, &[0, 0, 0])?);
    }
    let z = 10u8;
    let stopper_rows: [[u8; 4]; 11] = [
        [0, 1, 1, 1],
        [2, 0, 2, 2],
        [3, 3, 0, 3],
        [4, 4, 4, 0],
        [5, 5, 6, 6],
        [7, 8, 7, 8],
        [9, z, z, 9],
        [1, 2, 3, 4],
        [6, 7, 8, z],
        [8, 6, 9, 5],
        [z, 9, 5, 7],
    ];
    states.push(GhzState::new(
        4,
        11,
        stopper_rows
            .iter()
            .map(|r| ProductTerm {
                symbols: r.to_vec(),
                phase: PhaseFraction::one(),
            })
            .collect(),
    )?);
    StateSet::new(
        4,
        11,
        states,
        Provenance::new("fixture:delta", json!({ "d": 11, "n": 4 })),
    )
}

fn plus() -> PhaseFraction {
    PhaseFraction::one()
}

fn minus() -> PhaseFraction {
    PhaseFraction::new(1, 2).expect("1/2 is a valid fraction")
}

/// Two Bell-type states plus the bare product stopper `|01>` in 2 (x) 2.
pub fn alpha() -> Result<Vec<TermVector>> {
    Ok(vec![
        TermVector::new(2, 2, vec![(0, 0, plus()), (1, 1, plus())])?,
        TermVector::new(2, 2, vec![(0, 0, plus()), (1, 1, minus())])?,
        TermVector::new(2, 2, vec![(0, 1, plus())])?,
    ])
}

/// Two Bell-type states plus `(|01> + |12>)/sqrt(2)` in 2 (x) 3.
pub fn beta() -> Result<Vec<TermVector>> {
    Ok(vec![
        TermVector::new(2, 3, vec![(0, 0, plus()), (1, 1, plus())])?,
        TermVector::new(2, 3, vec![(0, 0, plus()), (1, 1, minus())])?,
        TermVector::new(2, 3, vec![(0, 1, plus()), (1, 2, plus())])?,
    ])
}

/// Two Bell-type states plus `(|01> + |22>)/sqrt(2)` in 3 (x) 3.
pub fn gamma() -> Result<Vec<TermVector>> {
    Ok(vec![
        TermVector::new(3, 3, vec![(0, 0, plus()), (1, 1, plus())])?,
        TermVector::new(3, 3, vec![(0, 0, plus()), (1, 1, minus())])?,
        TermVector::new(3, 3, vec![(0, 1, plus()), (2, 2, plus())])?,
    ])
}

/// The `d + 1` states in `d (x) (2d - 1)`: the Fourier multiplet on the
/// diagonal plus the shifted stopper `sum_j |j, j + d - 1>`.
pub fn chi(d: usize) -> Result<Vec<TermVector>> {
    if d < 2 {
        return Err(Error::InvalidArity(format!("need d >= 2, got {d}")));
    }
    let dim_b = 2 * d - 1;
    let mut out = Vec::new();
    for k in 1..=d {
        let terms = (0..d)
            .map(|j| {
                Ok((
                    j,
                    j,
                    PhaseFraction::root_of_unity(d, (j * (k - 1)) as i64)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(TermVector::new(d, dim_b, terms)?);
    }
    let stopper = (0..d).map(|j| (j, j + d - 1, plus())).collect();
    out.push(TermVector::new(d, dim_b, stopper)?);
    Ok(out)
}

/// Every named GHZ-typed fixture set.
pub fn fixtures() -> Result<Vec<(&'static str, StateSet)>> {
    Ok(vec![
        ("n7_4", n7_4()?),
        ("n11_5", n11_5()?),
        ("s11_5", s11_5()?),
        ("n15_6", n15_6()?),
        ("s19_6", s19_6()?),
        ("n19_6", n19_6()?),
        ("eta", eta()?),
        ("delta", delta()?),
    ])
}

/// Every named bipartite fixture family.
pub fn bipartite_fixtures() -> Result<Vec<(String, Vec<TermVector>)>> {
    let mut out = vec![
        ("alpha".to_string(), alpha()?),
        ("beta".to_string(), beta()?),
        ("gamma".to_string(), gamma()?),
    ];
    for d in 2..=6 {
        out.push((format!("chi{d}"), chi(d)?));
    }
    Ok(out)
}
