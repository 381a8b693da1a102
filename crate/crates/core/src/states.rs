//! Exact symbolic representation of the state families: computational-basis
//! product terms with root-of-unity phases, canonical basis generation,
//! orthogonality checking and JSON serialization.
//!
//! Every state handled here is a uniform superposition of exactly `d`
//! product terms with amplitude `1/sqrt(d)` and phases that are exact
//! roots of unity, so orthogonality of same-support states reduces to
//! "does this sum of roots of unity vanish" — decided exactly by reducing
//! the exponent polynomial modulo a cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::policy::NumericPolicy;
use crate::Result;

/// Default cap on `d^n` for dense expansions and full-basis generation.
pub const BASIS_SIZE_CAP: usize = 4096;

/// The root of unity `exp(2 pi i num / den)`, kept reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseFraction {
    num: u32,
    den: u32,
}

impl PhaseFraction {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(Error::InvalidIndex(format!(
                "phase denominator must be positive, got {den}"
            )));
        }
        let num = num.rem_euclid(den) as u64;
        let den = den as u64;
        let g = num.gcd(&den);
        let (num, den) = if num == 0 { (0, 1) } else { (num / g, den / g) };
        Ok(PhaseFraction {
            num: num as u32,
            den: den as u32,
        })
    }

    pub fn one() -> Self {
        PhaseFraction { num: 0, den: 1 }
    }

    /// `omega_d^e` for the primitive d-th root of unity.
    pub fn root_of_unity(d: usize, e: i64) -> Result<Self> {
        PhaseFraction::new(e, d as i64)
    }

    pub fn num(&self) -> u32 {
        self.num
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn conj(&self) -> Self {
        if self.num == 0 {
            *self
        } else {
            PhaseFraction {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }

    pub fn mul(&self, other: &PhaseFraction) -> Self {
        let den = (self.den as u64).lcm(&(other.den as u64));
        let num =
            (self.num as u64 * (den / self.den as u64) + other.num as u64 * (den / other.den as u64))
                % den;
        PhaseFraction::new(num as i64, den as i64).expect("den > 0")
    }

    pub fn value(&self) -> Complex64 {
        let angle = 2.0 * std::f64::consts::PI * self.num as f64 / self.den as f64;
        let (s, c) = angle.sin_cos();
        Complex64::new(c, s)
    }
}

impl fmt::Display for PhaseFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(2*pi*i*{}/{})", self.num, self.den)
    }
}

/// One computational-basis product term with its phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductTerm {
    pub symbols: Vec<u8>,
    pub phase: PhaseFraction,
}

/// A generalized GHZ state: exactly `d` distinct product terms over `n`
/// parties, implicit uniform amplitude `1/sqrt(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhzState {
    n: usize,
    d: usize,
    terms: Vec<ProductTerm>,
}

impl GhzState {
    /// Build from terms; enforces the shape invariants (term count, symbol
    /// ranges, distinct tuples). The per-party column condition is checked
    /// separately by [`validate_ghz`].
    pub fn new(n: usize, d: usize, mut terms: Vec<ProductTerm>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArity(format!("need n >= 2 parties, got {n}")));
        }
        if d < 2 {
            return Err(Error::InvalidState(format!("need d >= 2, got {d}")));
        }
        if terms.len() != d {
            return Err(Error::InvalidState(format!(
                "expected exactly {d} terms, got {}",
                terms.len()
            )));
        }
        for t in &terms {
            if t.symbols.len() != n {
                return Err(Error::InvalidState(format!(
                    "term has {} symbols, expected {n}",
                    t.symbols.len()
                )));
            }
            if t.symbols.iter().any(|&s| s as usize >= d) {
                return Err(Error::InvalidIndex(format!(
                    "symbol out of range [0, {d}) in term {:?}",
                    t.symbols
                )));
            }
        }
        terms.sort_by(|a, b| a.symbols.cmp(&b.symbols));
        if terms.windows(2).any(|w| w[0].symbols == w[1].symbols) {
            return Err(Error::InvalidState("duplicate term tuples".into()));
        }
        Ok(GhzState { n, d, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    /// Amplitude shared by every term.
    pub fn amplitude(&self) -> f64 {
        1.0 / (self.d as f64).sqrt()
    }

    /// Dense state vector in the `d^n` computational basis (party 1 most
    /// significant).
    pub fn to_dense(&self) -> Result<Vec<Complex64>> {
        let dim = (self.d as u64).checked_pow(self.n as u32).ok_or_else(|| {
            Error::BudgetExceeded("dense dimension overflows".into())
        })? as usize;
        if dim > BASIS_SIZE_CAP * 16 {
            return Err(Error::BudgetExceeded(format!(
                "dense dimension {dim} exceeds the expansion cap"
            )));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        let amp = self.amplitude();
        for t in &self.terms {
            let mut idx = 0usize;
            for &s in &t.symbols {
                idx = idx * self.d + s as usize;
            }
            v[idx] = t.phase.value() * amp;
        }
        Ok(v)
    }

    /// Recognize the canonical form `sum_j w_d^{j(k-1)} |j, j+i2, ..., j+iN>`
    /// up to a global phase; returns `(k, offsets)` on success.
    pub fn canonical_params(&self) -> Option<(usize, Vec<u8>)> {
        // Terms are sorted, so a canonical state has first symbols 0..d-1.
        for (j, t) in self.terms.iter().enumerate() {
            if t.symbols[0] as usize != j {
                return None;
            }
        }
        let offsets: Vec<u8> = self.terms[0].symbols[1..].to_vec();
        for (j, t) in self.terms.iter().enumerate() {
            for (p, &off) in offsets.iter().enumerate() {
                let expected = ((j + off as usize) % self.d) as u8;
                if t.symbols[p + 1] != expected {
                    return None;
                }
            }
        }
        // Phase pattern: ratio of consecutive terms must be a fixed d-th root.
        let step = self.terms[1].phase.mul(&self.terms[0].phase.conj());
        if self.d as u32 % step.den != 0 {
            return None;
        }
        let k_minus_1 = (step.num as usize * (self.d / step.den as usize)) % self.d;
        for (j, t) in self.terms.iter().enumerate() {
            let expected = self.terms[0]
                .phase
                .mul(&PhaseFraction::root_of_unity(self.d, (j * k_minus_1) as i64).ok()?);
            if t.phase != expected {
                return None;
            }
        }
        Some((k_minus_1 + 1, offsets))
    }
}

/// Canonical generalized GHZ basis state.
pub fn canonical_state(d: usize, n: usize, k: usize, offsets: &[u8]) -> Result<GhzState> {
    if k < 1 || k > d {
        return Err(Error::InvalidIndex(format!("k = {k} outside 1..={d}")));
    }
    if offsets.len() != n - 1 {
        return Err(Error::InvalidIndex(format!(
            "expected {} offsets, got {}",
            n - 1,
            offsets.len()
        )));
    }
    if offsets.iter().any(|&o| o as usize >= d) {
        return Err(Error::InvalidIndex("offset out of range".into()));
    }
    let terms = (0..d)
        .map(|j| {
            let mut symbols = Vec::with_capacity(n);
            symbols.push(j as u8);
            for &off in offsets {
                symbols.push(((j + off as usize) % d) as u8);
            }
            Ok(ProductTerm {
                symbols,
                phase: PhaseFraction::root_of_unity(d, (j * (k - 1)) as i64)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GhzState::new(n, d, terms)
}

/// The full `d^n` canonical basis.
pub fn canonical_basis(d: usize, n: usize) -> Result<StateSet> {
    if d < 2 || n < 2 {
        return Err(Error::InvalidArity(format!(
            "need d >= 2 and n >= 2, got d = {d}, n = {n}"
        )));
    }
    let size = (d as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if size > BASIS_SIZE_CAP as u64 {
        return Err(Error::BudgetExceeded(format!(
            "basis size {size} exceeds cap {BASIS_SIZE_CAP}"
        )));
    }
    let mut states = Vec::with_capacity(size as usize);
    let mut offsets = vec![0u8; n - 1];
    loop {
        for k in 1..=d {
            states.push(canonical_state(d, n, k, &offsets)?);
        }
        // increment the offset tuple lexicographically
        let mut pos = n - 1;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            offsets[pos] += 1;
            if (offsets[pos] as usize) < d {
                break;
            }
            offsets[pos] = 0;
        }
        if offsets.iter().all(|&o| o == 0) {
            break;
        }
    }
    StateSet::new(
        n,
        d,
        states,
        Provenance::new("canonical_basis", serde_json::json!({ "d": d, "n": n })),
    )
}

/// Per-party column report for the generalized-GHZ condition.
#[derive(Debug, Clone, Serialize)]
pub struct GhzValidation {
    pub valid: bool,
    /// Parties whose symbol column repeats a value.
    pub offending_parties: Vec<usize>,
}

/// True iff every party column carries `d` pairwise distinct symbols.
pub fn validate_ghz(s: &GhzState) -> GhzValidation {
    let mut offending = Vec::new();
    for p in 0..s.n {
        let mut seen = [false; 256];
        let mut ok = true;
        for t in &s.terms {
            let sym = t.symbols[p] as usize;
            if seen[sym] {
                ok = false;
                break;
            }
            seen[sym] = true;
        }
        if !ok {
            offending.push(p);
        }
    }
    GhzValidation {
        valid: offending.is_empty(),
        offending_parties: offending,
    }
}

/// Exact-or-numeric inner product `<u|v>`.
///
/// Disjoint supports give an exact zero; matched supports whose phase-ratio
/// sum is a vanishing sum of roots of unity are detected exactly via
/// cyclotomic reduction; everything else is evaluated numerically with
/// error below 1e-12.
pub fn inner_product(u: &GhzState, v: &GhzState) -> Result<Complex64> {
    if u.n != v.n || u.d != v.d {
        return Err(Error::ShapeError(format!(
            "inner product between ({}, {}) and ({}, {}) states",
            u.n, u.d, v.n, v.d
        )));
    }
    let index: HashMap<&[u8], &PhaseFraction> = u
        .terms
        .iter()
        .map(|t| (t.symbols.as_slice(), &t.phase))
        .collect();
    let mut matched = Vec::new();
    for t in &v.terms {
        if let Some(pu) = index.get(t.symbols.as_slice()) {
            matched.push(pu.conj().mul(&t.phase));
        }
    }
    if matched.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if root_sum_is_zero(&matched) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let sum: Complex64 = matched.iter().map(PhaseFraction::value).sum();
    Ok(sum / u.d as f64)
}

/// Exact test: does `sum_i exp(2 pi i f_i)` vanish?
///
/// Lift all fractions to a common order L and reduce the exponent-count
/// polynomial modulo the L-th cyclotomic polynomial; the sum vanishes iff
/// the remainder is identically zero.
fn root_sum_is_zero(fractions: &[PhaseFraction]) -> bool {
    let mut l: u64 = 1;
    for f in fractions {
        l = l.lcm(&(f.den() as u64));
        if l > 1024 {
            return false; // fall back to numeric evaluation
        }
    }
    let l = l as usize;
    let mut counts = vec![0i128; l];
    for f in fractions {
        let e = f.num() as usize * (l / f.den() as usize);
        counts[e] += 1;
    }
    let phi = cyclotomic(l);
    let rem = poly_rem(counts, &phi);
    rem.iter().all(|&c| c == 0)
}

/// Coefficients of the n-th cyclotomic polynomial (ascending powers).
fn cyclotomic(n: usize) -> Vec<i128> {
    // x^n - 1 divided by the cyclotomic polynomials of all proper divisors.
    let mut p = vec![0i128; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            let q = cyclotomic(d);
            p = poly_div_exact(&p, &q);
        }
    }
    p
}

/// Exact division of integer polynomials (divisor monic-leading).
fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    debug_assert!(lead == 1 || lead == -1);
    let mut quot = vec![0i128; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i] / lead;
        quot[i - dd] = c;
        if c != 0 {
            for (j, &dc) in den.iter().enumerate() {
                rem[i - dd + j] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Remainder of an integer polynomial modulo a monic divisor.
fn poly_rem(mut p: Vec<i128>, den: &[i128]) -> Vec<i128> {
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    for i in (dd..p.len()).rev() {
        let c = p[i];
        if c != 0 {
            for (j, &dc) in den.iter().enumerate() {
                p[i - dd + j] -= c * dc;
            }
        }
    }
    p.truncate(dd.max(1));
    p
}

/// Construction metadata carried by a state set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub params: serde_json::Value,
}

impl Provenance {
    pub fn new(construction: &str, params: serde_json::Value) -> Self {
        Provenance {
            construction: construction.to_string(),
            params,
        }
    }
}

/// Ordered collection of mutually orthogonal GHZ-type states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSet {
    n: usize,
    d: usize,
    states: Vec<GhzState>,
    provenance: Provenance,
}

impl StateSet {
    /// Validates shared `(n, d)` and pairwise orthogonality (exact where the
    /// symbolic shortcut applies, otherwise within the numeric policy).
    pub fn new(
        n: usize,
        d: usize,
        states: Vec<GhzState>,
        provenance: Provenance,
    ) -> Result<Self> {
        let policy = NumericPolicy::default();
        for s in &states {
            if s.n != n || s.d != d {
                return Err(Error::ShapeError(format!(
                    "state with (n, d) = ({}, {}) in a ({n}, {d}) set",
                    s.n, s.d
                )));
            }
        }
        for i in 0..states.len() {
            for j in (i + 1)..states.len() {
                let ip = inner_product(&states[i], &states[j])?;
                if ip.norm() > policy.structural {
                    return Err(Error::InvalidState(format!(
                        "states {i} and {j} are not orthogonal: |<u|v>| = {}",
                        ip.norm()
                    )));
                }
            }
        }
        Ok(StateSet {
            n,
            d,
            states,
            provenance,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[GhzState] {
        &self.states
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Serialize to the published JSON document format.
    pub fn to_json(&self) -> String {
        let doc = StateSetDoc {
            n: self.n,
            d: self.d,
            states: self
                .states
                .iter()
                .map(|s| StateDoc {
                    terms: s.terms.clone(),
                })
                .collect(),
            provenance: self.provenance.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("document serialization is infallible")
    }

    /// Parse and re-validate a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StateSetDoc = serde_json::from_str(text)?;
        let states = doc
            .states
            .into_iter()
            .map(|s| GhzState::new(doc.n, doc.d, s.terms))
            .collect::<Result<Vec<_>>>()?;
        StateSet::new(doc.n, doc.d, states, doc.provenance)
    }
}

#[derive(Serialize, Deserialize)]
struct StateSetDoc {
    n: usize,
    d: usize,
    states: Vec<StateDoc>,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    terms: Vec<ProductTerm>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_arithmetic() {
        let a = PhaseFraction::new(1, 4).unwrap();
        let b = PhaseFraction::new(3, 4).unwrap();
        assert!(a.mul(&b).is_one());
        assert_eq!(a.conj(), b);
        assert_eq!(PhaseFraction::new(6, 4).unwrap(), PhaseFraction::new(1, 2).unwrap());
        assert_eq!(PhaseFraction::new(-1, 4).unwrap(), b);
        let v = PhaseFraction::new(1, 2).unwrap().value();
        assert!((v.re + 1.0).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn canonical_state_examples() {
        // (|0000> + |1111>)/sqrt(2)
        let s = canonical_state(2, 4, 1, &[0, 0, 0]).unwrap();
        assert_eq!(s.terms()[0].symbols, vec![0, 0, 0, 0]);
        assert_eq!(s.terms()[1].symbols, vec![1, 1, 1, 1]);
        assert!(s.terms()[1].phase.is_one());

        // (|0001> - |1110>)/sqrt(2)
        let s = canonical_state(2, 4, 2, &[0, 0, 1]).unwrap();
        assert_eq!(s.terms()[0].symbols, vec![0, 0, 0, 1]);
        assert_eq!(s.terms()[1].symbols, vec![1, 1, 1, 0]);
        assert_eq!(s.terms()[1].phase, PhaseFraction::new(1, 2).unwrap());

        // (|000> + i|111> - |222> - i|333>)/2
        let s = canonical_state(4, 3, 2, &[0, 0]).unwrap();
        let phases: Vec<PhaseFraction> = s.terms().iter().map(|t| t.phase).collect();
        assert_eq!(
            phases,
            vec![
                PhaseFraction::new(0, 1).unwrap(),
                PhaseFraction::new(1, 4).unwrap(),
                PhaseFraction::new(1, 2).unwrap(),
                PhaseFraction::new(3, 4).unwrap(),
            ]
        );

        assert!(canonical_state(2, 4, 3, &[0, 0, 0]).is_err());
        assert!(canonical_state(2, 4, 1, &[0, 2, 0]).is_err());
    }

    #[test]
    fn canonical_params_roundtrip() {
        for d in 2..=5usize {
            for k in 1..=d {
                let offsets: Vec<u8> = (0..2).map(|i| ((i + k) % d) as u8).collect();
                let s = canonical_state(d, 3, k, &offsets).unwrap();
                assert_eq!(s.canonical_params(), Some((k, offsets)));
            }
        }
        // a stopper-style state is not canonical
        let s = GhzState::new(
            3,
            4,
            vec![
                ProductTerm { symbols: vec![0, 1, 1], phase: PhaseFraction::one() },
                ProductTerm { symbols: vec![2, 0, 2], phase: PhaseFraction::one() },
                ProductTerm { symbols: vec![3, 3, 0], phase: PhaseFraction::one() },
                ProductTerm { symbols: vec![1, 2, 3], phase: PhaseFraction::one() },
            ],
        )
        .unwrap();
        assert_eq!(s.canonical_params(), None);
    }

    #[test]
    fn inner_product_cases() {
        // same offsets, different k: exact geometric-sum zero
        for d in [2usize, 3, 4, 6] {
            let u = canonical_state(d, 3, 1, &[0, 0]).unwrap();
            for k in 2..=d {
                let v = canonical_state(d, 3, k, &[0, 0]).unwrap();
                assert_eq!(inner_product(&u, &v).unwrap(), Complex64::new(0.0, 0.0));
            }
            let self_ip = inner_product(&u, &u).unwrap();
            assert!((self_ip.re - 1.0).abs() < 1e-15);
        }
        // disjoint supports
        let u = canonical_state(3, 3, 1, &[0, 0]).unwrap();
        let v = canonical_state(3, 3, 1, &[1, 2]).unwrap();
        assert_eq!(inner_product(&u, &v).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn validate_ghz_columns() {
        let eta5 = GhzState::new(
            3,
            4,
            vec![
                ProductTerm { symbols: vec![0, 1, 1], phase: PhaseFraction::one() },
                ProductTerm { symbols: vec![2, 0, 2], phase: PhaseFraction::one() },
                ProductTerm { symbols: vec![3, 3, 0], phase: PhaseFraction::one() },
                ProductTerm { symbols: vec![1, 2, 3], phase: PhaseFraction::one() },
            ],
        )
        .unwrap();
        assert!(validate_ghz(&eta5).valid);

        let bad = GhzState::new(
            3,
            4,
            vec![
                ProductTerm { symbols: vec![0, 1, 1], phase: PhaseFraction::one() },
                ProductTerm { symbols: vec![2, 0, 2], phase: PhaseFraction::one() },
                ProductTerm { symbols: vec![3, 3, 0], phase: PhaseFraction::one() },
                ProductTerm { symbols: vec![1, 3, 3], phase: PhaseFraction::one() },
            ],
        )
        .unwrap();
        let report = validate_ghz(&bad);
        assert!(!report.valid);
        assert_eq!(report.offending_parties, vec![1]);
    }

    #[test]
    fn canonical_basis_gram_identity() {
        for (d, n) in [(2usize, 2usize), (2, 4), (3, 3)] {
            let basis = canonical_basis(d, n).unwrap();
            assert_eq!(basis.len(), d.pow(n as u32));
            for i in 0..basis.len() {
                for j in (i + 1)..basis.len() {
                    let ip = inner_product(&basis.states()[i], &basis.states()[j]).unwrap();
                    assert_eq!(ip, Complex64::new(0.0, 0.0), "structural orthogonality");
                }
            }
        }
    }

    #[test]
    fn four_qubit_basis_is_the_conjugate_pair_list() {
        // 16 states: both signs over the eight first-bit-zero index strings
        let basis = canonical_basis(2, 4).unwrap();
        let mut seen = std::collections::HashSet::new();
        for s in basis.states() {
            let (k, offs) = s.canonical_params().unwrap();
            assert!(s.terms()[0].symbols[0] == 0 && s.terms()[1].symbols[0] == 1);
            seen.insert((k, offs));
        }
        assert_eq!(seen.len(), 16);
        // e.g. the pair on {0111, 1000}
        assert!(seen.contains(&(1, vec![1, 1, 1])));
        assert!(seen.contains(&(2, vec![1, 1, 1])));
    }

    #[test]
    fn basis_cap_enforced() {
        assert!(matches!(
            canonical_basis(4, 7),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn json_roundtrip_byte_identical() {
        let set = canonical_basis(2, 3).unwrap();
        let doc = set.to_json();
        let parsed = StateSet::from_json(&doc).unwrap();
        assert_eq!(parsed, set);
        assert_eq!(parsed.to_json(), doc);
    }

    #[test]
    fn malformed_documents_rejected() {
        let err = StateSet::from_json("{ not json").unwrap_err();
        assert!(matches!(err, Error::ParseError { .. }));
        // orthogonality violation caught on load
        let bad = r#"{
          "n": 2, "d": 2,
          "states": [
            { "terms": [ {"symbols": [0,0], "phase": {"num":0,"den":1}},
                          {"symbols": [1,1], "phase": {"num":0,"den":1}} ] },
            { "terms": [ {"symbols": [0,0], "phase": {"num":0,"den":1}},
                          {"symbols": [1,0], "phase": {"num":0,"den":1}} ] }
          ],
          "provenance": { "construction": "manual", "params": {} }
        }"#;
        assert!(StateSet::from_json(bad).is_err());
    }

    #[test]
    fn cyclotomic_zero_detection() {
        // full set of d-th roots sums to zero for every d
        for d in 2..=12usize {
            let f: Vec<PhaseFraction> = (0..d)
                .map(|e| PhaseFraction::root_of_unity(d, e as i64).unwrap())
                .collect();
            assert!(root_sum_is_zero(&f), "d = {d}");
        }
        // 1 + w3 is not zero
        let f = vec![
            PhaseFraction::one(),
            PhaseFraction::root_of_unity(3, 1).unwrap(),
        ];
        assert!(!root_sum_is_zero(&f));
        // mixed-order vanishing sum: 1 + w3 + w3^2 + w2 + w2 (the two -1's cancel... no)
        // 1 + (-1) = 0
        let f = vec![
            PhaseFraction::one(),
            PhaseFraction::root_of_unity(2, 1).unwrap(),
        ];
        assert!(root_sum_is_zero(&f));
    }
}
