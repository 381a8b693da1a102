//! Property suites: reconstruction and involution laws for the tensor
//! layer, group/coset laws, Gram preservation under bipartite reduction,
//! witness-search agreement with a brute-force oracle, and solver
//! consistency against the analytic MES bound.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ghz_nonlocal::constructions::{delta, eta, thm1_set};
use ghz_nonlocal::group::{
    coset_decomposition, enumerate_bipartitions, Bipartition, GroupElement, Subgroup,
};
use ghz_nonlocal::sdp::{mes_ppt_bound, solve_ppt, DiscriminationInstance, SdpParams};
use ghz_nonlocal::states::{canonical_basis, canonical_state, inner_product, Provenance, StateSet};
use ghz_nonlocal::tensor::{
    hermitian_eig, partial_transpose, psd_project, schmidt, BipartiteShape, ComplexMatrix, Side,
};
use ghz_nonlocal::verifier::{ghz_basis_witness, reduce_to_bipartite};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::from_fn(n, n, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    m.hermitianize();
    m
}

/// Unitary matrix from the eigenvectors of a random Hermitian matrix.
fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let m = random_hermitian(n, rng);
    let (_, v) = hermitian_eig(&m).unwrap();
    v
}

#[test]
fn eig_reconstruction_up_to_side_400() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &n in &[3usize, 40, 150, 400] {
        let m = random_hermitian(n, &mut rng);
        let (vals, vecs) = hermitian_eig(&m).unwrap();
        // residual of M V - V D column by column (avoids an n^3 rebuild)
        let mut worst = 0.0f64;
        for j in 0..n {
            let col: Vec<Complex64> = (0..n).map(|i| vecs[(i, j)]).collect();
            let mv = m.apply(&col).unwrap();
            let dev: f64 = mv
                .iter()
                .zip(&col)
                .map(|(a, b)| (a - b * vals[j]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(dev);
        }
        assert!(
            worst <= 1e-10 * m.frobenius_norm().max(1.0),
            "side {n}: residual {worst}"
        );
    }
}

#[test]
fn psd_projection_is_the_nearest_psd_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let m = random_hermitian(50, &mut rng);
    let p = psd_project(&m).unwrap();
    // feasibility
    let (pvals, _) = hermitian_eig(&p).unwrap();
    assert!(pvals.last().copied().unwrap() >= -1e-10);
    // distance equals the eigen-clipped reference distance
    let (mvals, _) = hermitian_eig(&m).unwrap();
    let clip_dist = mvals
        .iter()
        .map(|&l| l.min(0.0).powi(2))
        .sum::<f64>()
        .sqrt();
    let dist = m.sub(&p).unwrap().frobenius_norm();
    assert!(
        (dist - clip_dist).abs() <= 1e-9,
        "distance {dist} vs clipped reference {clip_dist}"
    );
    // minimality against random PSD candidates
    for _ in 0..20 {
        let w = ComplexMatrix::from_fn(50, 50, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let q = w.mul(&w.dagger()).unwrap();
        let other = m.sub(&q).unwrap().frobenius_norm();
        assert!(dist <= other + 1e-9);
    }
}

#[test]
fn schmidt_coefficients_invariant_under_local_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let shape = BipartiteShape::new(4, 5).unwrap();
    for _ in 0..5 {
        let mut v: Vec<Complex64> = (0..shape.side())
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= norm;
        }
        let base = schmidt(&v, shape).unwrap();

        let u = random_unitary(shape.dim_a, &mut rng);
        let w = random_unitary(shape.dim_b, &mut rng);
        let mut rotated = vec![c(0.0, 0.0); shape.side()];
        for a in 0..shape.dim_a {
            for b in 0..shape.dim_b {
                let mut acc = c(0.0, 0.0);
                for ap in 0..shape.dim_a {
                    for bp in 0..shape.dim_b {
                        acc += u[(a, ap)] * w[(b, bp)] * v[shape.index(ap, bp)];
                    }
                }
                rotated[shape.index(a, b)] = acc;
            }
        }
        let rot = schmidt(&rotated, shape).unwrap();
        assert_eq!(base.rank(), rot.rank());
        for (x, y) in base.coefficients.iter().zip(&rot.coefficients) {
            assert!((x - y).abs() <= 1e-9, "{x} vs {y}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_involution_and_trace(
        seed in 0u64..1000,
        da in 2usize..4,
        db in 2usize..4,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = BipartiteShape::new(da, db).unwrap();
        let m = random_hermitian(shape.side(), &mut rng);
        let pt = partial_transpose(&m, shape, Side::A).unwrap();
        prop_assert_eq!(pt.trace(), m.trace());
        prop_assert!(pt.is_hermitian(1e-14));
        let back = partial_transpose(&pt, shape, Side::A).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn group_addition_laws(a in 0u64..512, b in 0u64..512, n in 4u32..11) {
        let x = GroupElement::canonicalize(n, a).unwrap();
        let y = GroupElement::canonicalize(n, b).unwrap();
        // commutative, self-inverse, complement-invariant
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert!(x.add(&x).unwrap().is_identity());
        let mask = (1u64 << n) - 1;
        let complemented = GroupElement::canonicalize(n, !a & mask).unwrap();
        prop_assert_eq!(x, complemented);
    }

    #[test]
    fn bipartition_complement_invariance(mask in 1u64..255, n in 4u32..9) {
        let full = (1u64 << n) - 1;
        let mask = mask & full;
        prop_assume!(mask != 0 && mask != full);
        let b1 = Bipartition::from_mask(n, mask).unwrap();
        let b2 = Bipartition::from_mask(n, !mask & full).unwrap();
        prop_assert_eq!(b1, b2);
        prop_assert_eq!(b1.to_group_element(), b2.to_group_element());
    }
}

#[test]
fn coset_partition_exhaustive_up_to_n10() {
    for n in 3..=10u32 {
        for t in 1..n.min(5) {
            let h = Subgroup::default_for(n, t).unwrap();
            if h.order() as u64 >= 1u64 << (n - 1) {
                continue;
            }
            let dec = coset_decomposition(&h).unwrap();
            let mut seen = std::collections::HashSet::new();
            for e in h.elements() {
                assert!(seen.insert(e.bits()));
            }
            for g in dec.representatives() {
                for e in h.elements() {
                    assert!(seen.insert(g.add(&e).unwrap().bits()), "overlap at n={n} t={t}");
                }
            }
            assert_eq!(seen.len() as u64, 1u64 << (n - 1), "cover at n={n} t={t}");
        }
    }
}

#[test]
fn canonical_basis_gram_is_identity() {
    for (d, n) in [(2usize, 8usize), (3, 5), (4, 4), (2, 10)] {
        let basis = canonical_basis(d, n).unwrap();
        assert_eq!(basis.len(), d.pow(n as u32));
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let ip = inner_product(&basis.states()[i], &basis.states()[j]).unwrap();
                assert!(
                    ip.norm() <= 1e-12,
                    "(d={d}, n={n}) states {i},{j}: |<u|v>| = {}",
                    ip.norm()
                );
            }
        }
    }
}

#[test]
fn thm1_cardinalities_up_to_n12() {
    for n in 2..=12usize {
        for t in 1..n {
            let set = thm1_set(n, t, None).unwrap();
            assert_eq!(set.len(), (1 << t) + (1 << (n - t)) - 1, "n={n} t={t}");
        }
    }
}

#[test]
fn thm1_classes_match_subgroup_and_cosets() {
    for (n, t) in [(4usize, 2usize), (5, 3), (6, 3), (8, 4)] {
        let set = thm1_set(n, t, None).unwrap();
        let subgroup = Subgroup::default_for(n as u32, t as u32).unwrap();
        let dec = coset_decomposition(&subgroup).unwrap();

        let mut pair_classes = std::collections::BTreeMap::new();
        for s in set.states() {
            let (_, offs) = s.canonical_params().unwrap();
            *pair_classes.entry(offs).or_insert(0usize) += 1;
        }
        let mut pairs = Vec::new();
        let mut singles = Vec::new();
        for (offs, count) in pair_classes {
            let bits = offs
                .iter()
                .fold(0u64, |acc, &b| (acc << 1) | u64::from(b != 0));
            let elem = GroupElement::canonicalize(n as u32, bits).unwrap();
            match count {
                2 => pairs.push(elem),
                1 => singles.push(elem),
                other => panic!("class of size {other}"),
            }
        }
        // pair classes = the subgroup span
        let span: Vec<GroupElement> = subgroup.elements();
        pairs.sort();
        assert_eq!(pairs, span, "n={n} t={t}: pair classes");
        // singles occupy all proper cosets, one each
        let mut indices = std::collections::HashSet::new();
        for s in &singles {
            let (_, idx) = dec.locate(s).unwrap();
            assert!(indices.insert(idx.expect("single outside the subgroup")));
        }
        assert_eq!(indices.len(), dec.coset_count(), "n={n} t={t}: coset cover");
    }
}

/// Random orthogonal canonical subsets: the reduced Gram matrix must match
/// the symbolic one entrywise to 1e-10 across every bipartition.
#[test]
fn gram_preserved_for_random_sets_all_bipartitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (d, n) in [(2usize, 4usize), (2, 6), (3, 4), (4, 3), (5, 3), (3, 5)] {
        // sample distinct (k, offsets) combinations
        let mut states = Vec::new();
        let mut used = std::collections::HashSet::new();
        while states.len() < 6.min(d * 3) {
            let k = rng.gen_range(1..=d);
            let offs: Vec<u8> = (0..n - 1).map(|_| rng.gen_range(0..d as u8)).collect();
            if used.insert((k, offs.clone())) {
                states.push(canonical_state(d, n, k, &offs).unwrap());
            }
        }
        let set = StateSet::new(n, d, states, Provenance::new("random", serde_json::json!({})))
            .unwrap();
        let mut symbolic = vec![vec![c(0.0, 0.0); set.len()]; set.len()];
        for i in 0..set.len() {
            for j in 0..set.len() {
                symbolic[i][j] = inner_product(&set.states()[i], &set.states()[j]).unwrap();
            }
        }
        for b in enumerate_bipartitions(n as u32).unwrap() {
            let inst = reduce_to_bipartite(&set, &b).unwrap();
            for i in 0..set.len() {
                for j in 0..set.len() {
                    let reduced: Complex64 = inst.vectors[i]
                        .iter()
                        .zip(&inst.vectors[j])
                        .map(|(&u, &v)| u.conj() * v)
                        .sum();
                    let dev = (reduced - symbolic[i][j]).norm();
                    assert!(
                        dev <= 1e-10,
                        "(d={d}, n={n}) {} entry ({i},{j}): deviation {dev}",
                        b.display()
                    );
                }
            }
        }
    }
    // the stopper fixtures exercise non-canonical terms
    for set in [eta().unwrap(), delta().unwrap()] {
        for b in enumerate_bipartitions(set.n() as u32).unwrap() {
            let inst = reduce_to_bipartite(&set, &b).unwrap();
            for i in 0..set.len() {
                for j in 0..set.len() {
                    let reduced: Complex64 = inst.vectors[i]
                        .iter()
                        .zip(&inst.vectors[j])
                        .map(|(&u, &v)| u.conj() * v)
                        .sum();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((reduced - c(expected, 0.0)).norm() <= 1e-10);
                }
            }
        }
    }
}

/// Brute-force oracle: two offset classes share a d (x) d subspace across a
/// bipartition exactly when their merged supports coincide on both sides.
fn brute_force_witness(set: &StateSet, b: &Bipartition) -> bool {
    let d = set.d();
    let left: Vec<u32> = b.left_parties();
    let right: Vec<u32> = b.right_parties();
    let support = |idx: usize, parties: &[u32]| -> std::collections::BTreeSet<Vec<u8>> {
        set.states()[idx]
            .terms()
            .iter()
            .map(|t| {
                parties
                    .iter()
                    .map(|&p| t.symbols[(p - 1) as usize])
                    .collect()
            })
            .collect()
    };
    // group states by identical (left, right) supports
    let mut groups: std::collections::BTreeMap<_, Vec<usize>> = Default::default();
    for i in 0..set.len() {
        groups
            .entry((support(i, &left), support(i, &right)))
            .or_default()
            .push(i);
    }
    // witness: some family of states sharing both merged supports (hence
    // maximally entangled on one common subspace) with more than d members
    groups.values().any(|members| members.len() > d)
}

#[test]
fn group_witness_agrees_with_brute_force() {
    for n in 2..=8usize {
        for t in 1..n {
            let set = thm1_set(n, t, None).unwrap();
            for b in enumerate_bipartitions(n as u32).unwrap() {
                let fast = ghz_basis_witness(&set, &b).unwrap().is_some();
                let brute = brute_force_witness(&set, &b);
                assert_eq!(fast, brute, "n={n} t={t} {}", b.display());
            }
        }
    }
}

#[test]
fn solver_consistent_with_analytic_mes_bound() {
    // (n_states, d) pairs: Bell triples/quadruples and five MES in 4 (x) 4
    let params = SdpParams::default();

    for count in [3usize, 4] {
        let states: Vec<_> = [(1, 0u8), (2, 0), (1, 1), (2, 1)]
            .iter()
            .take(count)
            .map(|&(k, off)| canonical_state(2, 2, k, &[off]).unwrap())
            .collect();
        let set = StateSet::new(2, 2, states, Provenance::new("mes", serde_json::json!({})))
            .unwrap();
        let b = Bipartition::from_parties(2, &[2]).unwrap();
        let inst = reduce_to_bipartite(&set, &b).unwrap();
        let di = DiscriminationInstance::from_bipartite(&inst).unwrap();
        let cert = solve_ppt(&di, &params).unwrap();
        let analytic = mes_ppt_bound(count, 2).unwrap();
        assert!(
            cert.dual_bound <= analytic + 1e-3,
            "({count}, 2): {} vs {analytic}",
            cert.dual_bound
        );
    }

    // five maximally entangled states in 4 (x) 4
    let mut states = Vec::new();
    for k in 1..=4 {
        states.push(canonical_state(4, 2, k, &[0]).unwrap());
    }
    states.push(canonical_state(4, 2, 1, &[1]).unwrap());
    let set = StateSet::new(2, 4, states, Provenance::new("mes", serde_json::json!({}))).unwrap();
    let b = Bipartition::from_parties(2, &[2]).unwrap();
    let inst = reduce_to_bipartite(&set, &b).unwrap();
    let di = DiscriminationInstance::from_bipartite(&inst).unwrap();
    let cert = solve_ppt(&di, &params).unwrap();
    let analytic = mes_ppt_bound(5, 4).unwrap();
    assert!(
        cert.dual_bound <= analytic + 1e-3,
        "(5, 4): {} vs {analytic}",
        cert.dual_bound
    );
}
