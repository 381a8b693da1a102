//! Schmidt decomposition of a bipartite pure state.

use num_complex::Complex64;

use super::{hermitian_eig, vec_norm, BipartiteShape, ComplexMatrix};
use crate::error::Error;
use crate::policy::NumericPolicy;
use crate::Result;

/// Result of [`schmidt`]: coefficients descending, with matching left and
/// right orthonormal vectors so that `v = sum_j c_j |l_j> (x) |r_j>`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<Vec<Complex64>>,
    pub right: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    /// Rank after trimming coefficients below the policy threshold.
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// True when all coefficients equal `1/sqrt(d)` within `tol`.
    pub fn is_maximally_entangled(&self, d: usize, tol: f64) -> bool {
        self.coefficients.len() == d
            && self
                .coefficients
                .iter()
                .all(|c| (c - 1.0 / (d as f64).sqrt()).abs() <= tol)
    }
}

/// Schmidt decomposition via the right Gram matrix.
///
/// The coefficient matrix `Psi[a][b] = v[a*dim_b + b]` has SVD
/// `Psi = sum_j c_j |l_j><r_j*|`; we eigendecompose `Psi^dag Psi` (Hermitian
/// PSD) for the right vectors and recover the left ones by application.
pub fn schmidt(v: &[Complex64], shape: BipartiteShape) -> Result<SchmidtDecomposition> {
    let policy = NumericPolicy::default();
    if v.len() != shape.side() {
        return Err(Error::ShapeError(format!(
            "vector length {} does not match shape {}x{}",
            v.len(),
            shape.dim_a,
            shape.dim_b
        )));
    }
    let norm = vec_norm(v);
    if norm < policy.schmidt_trim {
        return Err(Error::InvalidState("zero vector".into()));
    }
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!(
            "vector not normalized: |v| = {norm}"
        )));
    }

    let psi = ComplexMatrix::from_fn(shape.dim_a, shape.dim_b, |a, b| v[shape.index(a, b)]);
    let gram = psi.dagger().mul(&psi)?;
    let (vals, vecs) = hermitian_eig(&gram)?;

    let mut coefficients = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (j, &lam) in vals.iter().enumerate() {
        if lam <= policy.schmidt_trim {
            break;
        }
        let c = lam.sqrt();
        let r: Vec<Complex64> = (0..shape.dim_b).map(|b| vecs[(b, j)]).collect();
        let mut l = psi.apply(&r)?;
        for z in l.iter_mut() {
            *z /= c;
        }
        coefficients.push(c);
        left.push(l);
        right.push(r.iter().map(|z| z.conj()).collect());
    }
    // right vectors are conjugated so that v = sum c_j l_j (x) r_j holds
    // with plain (unconjugated) tensor components.
    Ok(SchmidtDecomposition {
        coefficients,
        left,
        right,
    })
}
