//! Fourier-plus-stopper witness recovery.
//!
//! Given `d + 1` vectors whose first `d` members are suspected to be a
//! Fourier multiplet `(1/sqrt(d)) sum_j w_d^{j(k-1)} |a_j b_j>` on a common
//! diagonal frame, recover the frame from the cross operator
//! `R = Tr_right(|v2><v1|) = (1/d) sum_j w_d^j |a_j><a_j|`, verify the phase
//! pattern of all `d` states, and check the stopper's structure against the
//! diagonal subspace:
//!
//! * (i) each local dimension is at most `2d - 1`;
//! * (ii) the stopper keeps weight at least `1/d` inside the diagonal
//!   subspace `span{a_j} (x) span{b_j}`;
//! * (iii) the stopper has no component along any matched-diagonal
//!   direction `|a_j b_j>` (such a term would need equal left and right
//!   diagonal indices).
//!
//! `R` is not Hermitian; its commuting Hermitian and skew parts share the
//! `a_j` eigenbasis, so a generic real combination of them is eigensolved
//! instead, with the mixing angle chosen so the predicted eigenvalues
//! `cos(2 pi j / d - theta) / d` stay separated from one another and from
//! the null space.

use num_complex::Complex64;

use super::BipartiteInstance;
use crate::error::Error;
use crate::tensor::{hermitian_eig, partial_trace, vec_inner, ComplexMatrix, TraceSide};
use crate::NumericPolicy;
use crate::Result;

/// Recovered diagonal frame and stopper data.
#[derive(Debug, Clone)]
pub struct StopperWitnessForm {
    pub d: usize,
    /// Diagonal left basis a_j (column vectors).
    pub left_basis: Vec<Vec<Complex64>>,
    /// Diagonal right basis b_j.
    pub right_basis: Vec<Vec<Complex64>>,
    /// Phase index (k - 1) recovered for each of the first d vectors.
    pub fourier_exponents: Vec<usize>,
    /// A diagonal-subspace product direction `(e, f)` carrying stopper
    /// weight at least 1/d, with e != f.
    pub witness_pair: (usize, usize),
    /// Total stopper weight inside the diagonal subspace.
    pub diagonal_overlap: f64,
    /// The stopper's terms as extended-frame index pairs, when the instance
    /// carries exact term structure: diagonal coordinates map to `0..d-1`,
    /// the remaining coordinates to `d..` per side.
    pub stopper_pairs: Option<Vec<(usize, usize)>>,
}

/// Try to accept the instance as `d` Fourier states plus one stopper, the
/// stopper being the last vector.
pub fn stopper_witness(inst: &BipartiteInstance) -> Result<StopperWitnessForm> {
    let policy = NumericPolicy::default();
    let total = inst.vectors.len();
    if total < 3 {
        return Err(Error::InvalidState(format!(
            "need at least 3 vectors (d >= 2), got {total}"
        )));
    }
    let d = total - 1;

    // condition (i): the ambient after support compression
    if inst.shape.dim_a > 2 * d - 1 || inst.shape.dim_b > 2 * d - 1 {
        return Err(Error::StopperCondition {
            condition: "i".into(),
            detail: format!(
                "local dimensions {} x {} exceed {} = 2d - 1",
                inst.shape.dim_a,
                inst.shape.dim_b,
                2 * d - 1
            ),
        });
    }
    if inst.shape.dim_a < d || inst.shape.dim_b < d {
        return Err(Error::FrameAmbiguous(format!(
            "local dimensions {} x {} cannot hold a {d}-term diagonal",
            inst.shape.dim_a, inst.shape.dim_b
        )));
    }

    let frame = recover_frame(inst, d, &policy)?;
    check_stopper(inst, d, frame, &policy)
}

struct Frame {
    left: Vec<Vec<Complex64>>,
    right: Vec<Vec<Complex64>>,
    exponents: Vec<usize>,
}

fn recover_frame(inst: &BipartiteInstance, d: usize, policy: &NumericPolicy) -> Result<Frame> {
    // ordered pairs, (0, 1) first
    let mut pairs = vec![(0usize, 1usize)];
    for i in 0..d {
        for j in 0..d {
            if i != j && !(i == 0 && j == 1) {
                pairs.push((i, j));
            }
        }
    }
    let mut last_failure = String::new();
    for (i, j) in pairs {
        match try_pair(inst, d, i, j, policy) {
            Ok(frame) => return Ok(frame),
            Err(e) => last_failure = e.to_string(),
        }
    }
    Err(Error::FrameAmbiguous(format!(
        "no ordered pair of the first {d} vectors yields a Fourier frame; last failure: {last_failure}"
    )))
}

/// Mixing angle for which the predicted spectrum is well separated.
fn pick_theta(d: usize) -> Option<(f64, f64)> {
    let candidates = [
        std::f64::consts::PI / (4.0 * d as f64),
        std::f64::consts::PI / (3.0 * d as f64),
        1.0 / d as f64,
        0.7390851332151607,
        0.3,
    ];
    for theta in candidates {
        let pred: Vec<f64> = (0..d)
            .map(|l| (2.0 * std::f64::consts::PI * l as f64 / d as f64 - theta).cos() / d as f64)
            .collect();
        let mut min_gap = f64::INFINITY;
        for l in 0..d {
            min_gap = min_gap.min(pred[l].abs()); // gap to the null space
            for m in (l + 1)..d {
                min_gap = min_gap.min((pred[l] - pred[m]).abs());
            }
        }
        if min_gap > 1e-3 / d as f64 {
            return Some((theta, min_gap));
        }
    }
    None
}

fn try_pair(
    inst: &BipartiteInstance,
    d: usize,
    i: usize,
    j: usize,
    policy: &NumericPolicy,
) -> Result<Frame> {
    let dim_a = inst.shape.dim_a;
    let dim_b = inst.shape.dim_b;
    let vi = &inst.vectors[i];
    let vj = &inst.vectors[j];

    // R = Tr_right(|vj><vi|)
    let cross = ComplexMatrix::outer(vj, vi);
    let r = partial_trace(&cross, inst.shape, TraceSide::B)?;
    let (theta, gap) = pick_theta(d)
        .ok_or_else(|| Error::FrameAmbiguous(format!("no usable mixing angle for d = {d}")))?;
    let (ct, st) = (theta.cos(), theta.sin());
    // K = cos(theta) (R + R^dag)/2 + sin(theta) (R - R^dag)/(2i)
    let rdag = r.dagger();
    let mut k = ComplexMatrix::zeros(dim_a, dim_a);
    for row in 0..dim_a {
        for col in 0..dim_a {
            let h1 = (r[(row, col)] + rdag[(row, col)]) * 0.5;
            let h2 = (r[(row, col)] - rdag[(row, col)]) * Complex64::new(0.0, -0.5);
            k[(row, col)] = h1 * ct + h2 * st;
        }
    }
    k.hermitianize();
    let (vals, vecs) = hermitian_eig(&k)?;

    // match predicted eigenvalues to labels
    let pred: Vec<f64> = (0..d)
        .map(|l| (2.0 * std::f64::consts::PI * l as f64 / d as f64 - theta).cos() / d as f64)
        .collect();
    let mut assignment = vec![usize::MAX; d];
    for (l, &p) in pred.iter().enumerate() {
        let (best, dev) = vals
            .iter()
            .enumerate()
            .map(|(idx, &v)| (idx, (v - p).abs()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if dev > gap / 3.0 {
            return Err(Error::FrameAmbiguous(format!(
                "eigenvalue for label {l} deviates by {dev:.2e}"
            )));
        }
        if assignment.contains(&best) {
            return Err(Error::FrameAmbiguous("eigenvalue assignment collides".into()));
        }
        assignment[l] = best;
    }

    // a_l columns, b_l from contraction with v_i
    let left: Vec<Vec<Complex64>> = assignment
        .iter()
        .map(|&col| (0..dim_a).map(|row| vecs[(row, col)]).collect())
        .collect();
    let sqrt_d = (d as f64).sqrt();
    let mut right = Vec::with_capacity(d);
    for a in &left {
        let mut b = vec![Complex64::new(0.0, 0.0); dim_b];
        for (bi, bv) in b.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (ai, av) in a.iter().enumerate() {
                acc += av.conj() * vi[inst.shape.index(ai, bi)];
            }
            *bv = acc * sqrt_d;
        }
        let norm = vec_inner(&b, &b).re.sqrt();
        if (norm - 1.0).abs() > 100.0 * policy.frame {
            return Err(Error::FrameAmbiguous(format!(
                "right frame vector has norm {norm}, expected 1"
            )));
        }
        right.push(b);
    }
    for l in 0..d {
        for m in (l + 1)..d {
            if vec_inner(&right[l], &right[m]).norm() > 100.0 * policy.frame {
                return Err(Error::FrameAmbiguous(
                    "right frame vectors are not orthogonal".into(),
                ));
            }
        }
    }

    // verify the Fourier phase pattern of all d vectors in this frame
    let mut exponents = vec![0usize; d];
    let mut seen = vec![false; d];
    for (k_idx, vk) in inst.vectors.iter().take(d).enumerate() {
        let z: Vec<Complex64> = (0..d)
            .map(|l| frame_component(inst, &left[l], &right[l], vk) * sqrt_d)
            .collect();
        for (l, zl) in z.iter().enumerate() {
            if (zl.norm() - 1.0).abs() > 100.0 * policy.frame {
                return Err(Error::FrameAmbiguous(format!(
                    "vector {k_idx} has |component| {} at diagonal {l}",
                    zl.norm()
                )));
            }
        }
        let ratio = z[1] / z[0];
        let kappa =
            ((ratio.arg() * d as f64 / (2.0 * std::f64::consts::PI)).round() as i64).rem_euclid(d as i64)
                as usize;
        for (l, zl) in z.iter().enumerate() {
            let expected = z[0]
                * Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * (l * kappa % d) as f64 / d as f64,
                );
            if (zl - expected).norm() > 1000.0 * policy.frame {
                return Err(Error::FrameAmbiguous(format!(
                    "vector {k_idx} deviates from the Fourier pattern at diagonal {l}"
                )));
            }
        }
        if seen[kappa] {
            return Err(Error::FrameAmbiguous(format!(
                "two vectors share the phase exponent {kappa}"
            )));
        }
        seen[kappa] = true;
        exponents[k_idx] = kappa;
    }
    let _ = j;
    Ok(Frame {
        left,
        right,
        exponents,
    })
}

fn frame_component(
    inst: &BipartiteInstance,
    a: &[Complex64],
    b: &[Complex64],
    v: &[Complex64],
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (ai, av) in a.iter().enumerate() {
        for (bi, bv) in b.iter().enumerate() {
            acc += (av * bv).conj() * v[inst.shape.index(ai, bi)];
        }
    }
    acc
}

fn check_stopper(
    inst: &BipartiteInstance,
    d: usize,
    frame: Frame,
    policy: &NumericPolicy,
) -> Result<StopperWitnessForm> {
    let stopper = &inst.vectors[d];

    // components T[e][f] = <a_e b_f | w>
    let mut t = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for e in 0..d {
        for f in 0..d {
            t[e][f] = frame_component(inst, &frame.left[e], &frame.right[f], stopper);
        }
    }

    // (iii): no matched-diagonal component
    for (e, row) in t.iter().enumerate() {
        if row[e].norm() > 1000.0 * policy.frame {
            return Err(Error::StopperCondition {
                condition: "iii".into(),
                detail: format!(
                    "stopper has weight {:.3e} on the matched-diagonal direction {e}",
                    row[e].norm_sqr()
                ),
            });
        }
    }

    // (ii): diagonal-subspace overlap at least 1/d, witnessed by some (e, f)
    let overlap: f64 = t.iter().flatten().map(|z| z.norm_sqr()).sum();
    if overlap + policy.frame < 1.0 / d as f64 {
        return Err(Error::StopperCondition {
            condition: "ii".into(),
            detail: format!(
                "diagonal-subspace overlap {overlap:.6} is below 1/d = {:.6}",
                1.0 / d as f64
            ),
        });
    }
    let mut witness_pair = (0usize, 0usize);
    let mut best = -1.0f64;
    for (e, row) in t.iter().enumerate() {
        for (f, z) in row.iter().enumerate() {
            if e != f && z.norm_sqr() > best {
                best = z.norm_sqr();
                witness_pair = (e, f);
            }
        }
    }

    let stopper_pairs = inst
        .terms
        .as_ref()
        .map(|terms| extended_frame_pairs(d, &frame, &terms[d]));

    Ok(StopperWitnessForm {
        d,
        left_basis: frame.left,
        right_basis: frame.right,
        fourier_exponents: frame.exponents,
        witness_pair,
        diagonal_overlap: overlap,
        stopper_pairs,
    })
}

/// Map the stopper's exact terms into extended-frame indices: coordinates
/// dominated by a diagonal frame vector get its label in `0..d`, the rest
/// get fresh labels from `d` upward per side.
fn extended_frame_pairs(
    d: usize,
    frame: &Frame,
    terms: &[(usize, usize, crate::states::PhaseFraction)],
) -> Vec<(usize, usize)> {
    let label = |basis: &[Vec<Complex64>], coord: usize| -> Option<usize> {
        (0..d).find(|&l| basis[l][coord].norm_sqr() > 0.5)
    };
    let mut next_left = d;
    let mut next_right = d;
    let mut left_map = std::collections::HashMap::new();
    let mut right_map = std::collections::HashMap::new();
    terms
        .iter()
        .map(|&(lc, rc, _)| {
            let e = label(&frame.left, lc).unwrap_or_else(|| {
                *left_map.entry(lc).or_insert_with(|| {
                    let v = next_left;
                    next_left += 1;
                    v
                })
            });
            let f = label(&frame.right, rc).unwrap_or_else(|| {
                *right_map.entry(rc).or_insert_with(|| {
                    let v = next_right;
                    next_right += 1;
                    v
                })
            });
            (e, f)
        })
        .collect()
}
