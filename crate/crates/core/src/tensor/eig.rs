//! Hermitian eigendecomposition and PSD cone projection.
//!
//! Two pure-Rust paths sit behind [`hermitian_eig`]:
//!
//! * cyclic Jacobi with complex rotations — the reference algorithm, used
//!   for sides up to [`JACOBI_MAX_SIDE`];
//! * Householder tridiagonalization followed by implicit-shift QL (the
//!   classic EISPACK `tql2` recurrence, with real Givens coefficients acting
//!   on complex eigenvector columns) for larger sides, where Jacobi's
//!   O(n^3)-per-sweep cost would dominate the SDP iteration loop.
//!
//! Both return eigenvalues sorted descending with matching eigenvector
//! columns, and agree to ~1e-12 on random Hermitian inputs (cross-checked in
//! the test suite).

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::Error;
use crate::policy::NumericPolicy;
use crate::Result;

/// Largest side handled by the Jacobi path.
pub const JACOBI_MAX_SIDE: usize = 80;

const MAX_JACOBI_SWEEPS: usize = 60;

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns `(eigenvalues, V)` with eigenvalues descending and `M = V D V^dag`.
/// Fails with [`Error::InvalidOperator`] when `M` is not square or not
/// Hermitian within the policy tolerance.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let policy = NumericPolicy::default();
    if !m.is_square() {
        return Err(Error::InvalidOperator(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_hermitian(policy.hermiticity) {
        return Err(Error::InvalidOperator(
            "matrix is not Hermitian within tolerance".into(),
        ));
    }
    let n = m.rows();
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }
    let mut a = m.clone();
    a.hermitianize();
    if n == 1 {
        return Ok((vec![a[(0, 0)].re], ComplexMatrix::identity(1)));
    }
    let (mut vals, mut vecs) = if n <= JACOBI_MAX_SIDE {
        jacobi_eig(a)
    } else {
        householder_ql_eig(a)?
    };
    sort_descending(&mut vals, &mut vecs);
    Ok((vals, vecs))
}

/// Eigenvalues only (descending), skipping eigenvector accumulation — the
/// QL recurrence without rotation bookkeeping is roughly three times
/// cheaper at the sizes the SDP touches.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let policy = NumericPolicy::default();
    if !m.is_square() {
        return Err(Error::InvalidOperator(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_hermitian(policy.hermiticity) {
        return Err(Error::InvalidOperator(
            "matrix is not Hermitian within tolerance".into(),
        ));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n <= JACOBI_MAX_SIDE {
        return hermitian_eig(m).map(|(vals, _)| vals);
    }
    let mut a = m.clone();
    a.hermitianize();

    // Householder reduction without accumulating the transform.
    for k in 0..n.saturating_sub(2) {
        let xnorm_sqr: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum();
        let xnorm = xnorm_sqr.sqrt();
        if xnorm <= 1e-300 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() > 1e-300 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm <= 1e-300 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        let vc: Vec<Complex64> = v.iter().map(Complex64::conj).collect();
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
            a[(k, i)] = Complex64::new(0.0, 0.0);
        }
        let m_len = n - k - 1;
        let mut w = vec![Complex64::new(0.0, 0.0); m_len];
        for (i, wi) in w.iter_mut().enumerate() {
            let row = &a.row(k + 1 + i)[k + 1..n];
            *wi = row.iter().zip(&v).map(|(&b, &vj)| b * vj).sum();
        }
        let kappa: Complex64 = v.iter().zip(&w).map(|(&vi, &wi)| vi.conj() * wi).sum();
        let z: Vec<Complex64> = w
            .iter()
            .zip(&v)
            .map(|(&wi, &vi)| (wi - vi * kappa) * 2.0)
            .collect();
        let zc: Vec<Complex64> = z.iter().map(Complex64::conj).collect();
        for i in 0..m_len {
            let (vi, zi) = (v[i], z[i]);
            let row = &mut a.row_mut(k + 1 + i)[k + 1..n];
            for ((r, &zcj), &vcj) in row.iter_mut().zip(&zc).zip(&vc) {
                *r -= vi * zcj + zi * vcj;
            }
        }
    }

    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![0.0f64; n];
    for k in 0..n - 1 {
        e[k] = a[(k + 1, k)].norm();
    }
    let mut no_vectors: [Vec<Complex64>; 0] = [];
    tql2(&mut d, &mut e, &mut no_vectors)?;
    d.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(d)
}

/// Nearest (Frobenius) positive semidefinite matrix: clip negative
/// eigenvalues to zero and reassemble.
pub fn psd_project(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (vals, vecs) = hermitian_eig(m)?;
    let n = m.rows();
    let positive = vals.iter().take_while(|&&l| l > 0.0).count();
    if positive == 0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    // rows of W are sqrt(lambda_j)-scaled eigenvector coordinates; the
    // projection is the row-wise Gram matrix W_i . conj(W_j).
    let w: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..positive)
                .map(|j| vecs[(i, j)] * vals[j].sqrt())
                .collect()
        })
        .collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let wi = &w[i];
        for j in i..n {
            let acc: Complex64 = wi
                .iter()
                .zip(&w[j])
                .map(|(&a, &b)| a * b.conj())
                .sum();
            out[(i, j)] = acc;
            out[(j, i)] = acc.conj();
        }
        let dii = out[(i, i)];
        out[(i, i)] = Complex64::new(dii.re, 0.0);
    }
    Ok(out)
}

fn sort_descending(vals: &mut [f64], vecs: &mut ComplexMatrix) {
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let old = vecs.clone();
    for (newc, &oldc) in order.iter().enumerate() {
        for r in 0..n {
            vecs[(r, newc)] = old[(r, oldc)];
        }
    }
    vals.copy_from_slice(&sorted_vals);
}

/// Cyclic Jacobi with complex plane rotations.
fn jacobi_eig(mut a: ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = 1e-15 * scale;

    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (app - aqq) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (tau * tau + 1.0).sqrt())
                } else {
                    -1.0 / (-tau + (tau * tau + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let s_conj_phase = phase.conj() * s;
                let s_phase = phase * s;

                // Columns p and q, rows kept Hermitian-consistent.
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    let new_ip = aip * c + aiq * s_conj_phase;
                    let new_iq = aiq * c - aip * s_phase;
                    a[(i, p)] = new_ip;
                    a[(p, i)] = new_ip.conj();
                    a[(i, q)] = new_iq;
                    a[(q, i)] = new_iq.conj();
                }
                let new_pp = c * c * app + 2.0 * c * s * r + s * s * aqq;
                let new_qq = s * s * app - 2.0 * c * s * r + c * c * aqq;
                a[(p, p)] = Complex64::new(new_pp, 0.0);
                a[(q, q)] = Complex64::new(new_qq, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);

                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * s_conj_phase;
                    v[(i, q)] = viq * c - vip * s_phase;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[(i, i)].re).collect();
    (vals, v)
}

/// Householder reduction to real tridiagonal form plus implicit-shift QL.
///
/// The transformation is accumulated in transposed layout (`qt[j]` is the
/// j-th eigenvector) so every update runs over contiguous rows; the result
/// is transposed back into column convention at the end.
fn householder_ql_eig(mut a: ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = a.rows();
    let mut qt: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            row[j] = Complex64::new(1.0, 0.0);
            row
        })
        .collect();

    // Householder reflections clearing column k below the first subdiagonal.
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1; // trailing block size
        let xnorm_sqr: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum();
        let xnorm = xnorm_sqr.sqrt();
        if xnorm <= 1e-300 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() > 1e-300 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        // v = (x - alpha e1) / ||..||
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm <= 1e-300 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        let vc: Vec<Complex64> = v.iter().map(Complex64::conj).collect();

        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
            a[(k, i)] = Complex64::new(0.0, 0.0);
        }

        // Trailing block B <- B - v z^dag - z v^dag with z = 2(Bv - (v^dag B v) v).
        let mut w = vec![Complex64::new(0.0, 0.0); m];
        for (i, wi) in w.iter_mut().enumerate() {
            let row = &a.row(k + 1 + i)[k + 1..n];
            *wi = row.iter().zip(&v).map(|(&b, &vj)| b * vj).sum();
        }
        let kappa: Complex64 = v.iter().zip(&w).map(|(&vi, &wi)| vi.conj() * wi).sum();
        let z: Vec<Complex64> = w
            .iter()
            .zip(&v)
            .map(|(&wi, &vi)| (wi - vi * kappa) * 2.0)
            .collect();
        let zc: Vec<Complex64> = z.iter().map(Complex64::conj).collect();
        for i in 0..m {
            let (vi, zi) = (v[i], z[i]);
            let row = &mut a.row_mut(k + 1 + i)[k + 1..n];
            for ((r, &zcj), &vcj) in row.iter_mut().zip(&zc).zip(&vc) {
                *r -= vi * zcj + zi * vcj;
            }
        }

        // Q <- Q (I - 2 v v^dag): in transposed layout,
        // w[i] = sum_l v_l qt[l][i], then qt[j] -= 2 conj(v_j) w.
        let mut acc = vec![Complex64::new(0.0, 0.0); n];
        for (l, &vl) in v.iter().enumerate() {
            let row = &qt[k + 1 + l];
            for (a_i, &q_i) in acc.iter_mut().zip(row) {
                *a_i += q_i * vl;
            }
        }
        for (j, &vcj) in vc.iter().enumerate() {
            let s = vcj * 2.0;
            let row = &mut qt[k + 1 + j];
            for (q_i, &a_i) in row.iter_mut().zip(&acc) {
                *q_i -= a_i * s;
            }
        }
    }

    // Absorb off-diagonal phases so the tridiagonal matrix is real.
    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![0.0f64; n];
    let mut phi = Complex64::new(1.0, 0.0);
    for k in 0..n - 1 {
        let sub = a[(k + 1, k)];
        let r = sub.norm();
        e[k] = r;
        let u = if r > 1e-300 {
            sub / r
        } else {
            Complex64::new(1.0, 0.0)
        };
        phi *= u;
        let ph = phi;
        for q in qt[k + 1].iter_mut() {
            *q *= ph;
        }
    }

    tql2(&mut d, &mut e, &mut qt)?;

    let mut q = ComplexMatrix::zeros(n, n);
    for (j, row) in qt.iter().enumerate() {
        for (i, &val) in row.iter().enumerate() {
            q[(i, j)] = val;
        }
    }
    Ok((d, q))
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix, accumulating
/// the (complex) eigenvectors stored as rows of `v`. EISPACK `tql2`
/// recurrence; `e[i]` is the subdiagonal between `i` and `i+1`, `e[n-1]`
/// is a sentinel zero.
fn tql2(d: &mut [f64], e: &mut [f64], v: &mut [Vec<Complex64>]) -> Result<()> {
    let n = d.len();
    let eps = 2.0_f64.powi(-52);
    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 64 {
                    return Err(Error::InvalidOperator(
                        "QL iteration failed to converge".into(),
                    ));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gg = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gg;
                    d[i + 1] = h + s * (c * gg + s * d[i]);

                    // plane rotation of eigenvector rows i and i+1
                    if !v.is_empty() {
                        let (lo, hi) = v.split_at_mut(i + 1);
                        let row_i = &mut lo[i];
                        let row_i1 = &mut hi[0];
                        for (a, b) in row_i.iter_mut().zip(row_i1.iter_mut()) {
                            let hv = *b;
                            *b = *a * s + hv * c;
                            *a = *a * c - hv * s;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::BipartiteShape;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruction_residual(m: &ComplexMatrix, vals: &[f64], vecs: &ComplexMatrix) -> f64 {
        let n = m.rows();
        let mut rec = ComplexMatrix::zeros(n, n);
        for (j, &lam) in vals.iter().enumerate() {
            for r in 0..n {
                for s in 0..n {
                    rec[(r, s)] += vecs[(r, j)] * vecs[(s, j)].conj() * lam;
                }
            }
        }
        rec.sub(m).unwrap().frobenius_norm()
    }

    #[test]
    fn identity_eigenvalues() {
        let (vals, _) = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn already_diagonal() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(3.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        let (vals, vecs) = hermitian_eig(&m).unwrap();
        assert_eq!(vals, vec![3.0, -1.0]);
        assert!((vecs[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((vecs[(1, 1)].norm() - 1.0).abs() < 1e-14);
        assert!(vecs[(1, 0)].norm() < 1e-14);
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        // Density operator of (|00> + |11>)/sqrt(2), partially transposed.
        let amp = 1.0 / 2.0_f64.sqrt();
        let v = vec![c(amp, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(amp, 0.0)];
        let rho = ComplexMatrix::outer(&v, &v);
        let shape = BipartiteShape::new(2, 2).unwrap();
        let pt = super::super::partial_transpose(&rho, shape, super::super::Side::A).unwrap();
        let (vals, _) = hermitian_eig(&pt).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (got, want) in vals.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{vals:?}");
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            hermitian_eig(&m),
            Err(Error::InvalidOperator(_))
        ));
    }

    #[test]
    fn psd_project_examples() {
        // diag(2, -3) -> diag(2, 0)
        let m = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-3.0, 0.0)],
        ])
        .unwrap();
        let p = psd_project(&m).unwrap();
        assert!((p[(0, 0)].re - 2.0).abs() < 1e-12);
        assert!(p[(1, 1)].norm() < 1e-12);

        // -I -> 0
        let neg = ComplexMatrix::identity(3).scale(c(-1.0, 0.0));
        let p = psd_project(&neg).unwrap();
        assert!(p.frobenius_norm() < 1e-12);

        // PSD fixed point
        let v = vec![c(0.6, 0.0), c(0.0, 0.8)];
        let rho = ComplexMatrix::outer(&v, &v);
        let p = psd_project(&rho).unwrap();
        assert!(p.sub(&rho).unwrap().frobenius_norm() < 1e-10);
    }

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = ComplexMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        m.hermitianize();
        m
    }

    #[test]
    fn reconstruction_small_and_large() {
        for &(n, seed) in &[(5usize, 1u64), (24, 2), (81, 3), (120, 4)] {
            let m = random_hermitian(n, seed);
            let (vals, vecs) = hermitian_eig(&m).unwrap();
            let res = reconstruction_residual(&m, &vals, &vecs);
            assert!(
                res <= 1e-10 * m.frobenius_norm().max(1.0),
                "side {n}: residual {res}"
            );
            // descending order
            for w in vals.windows(2) {
                assert!(w[0] >= w[1] - 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_and_ql_agree() {
        // Same matrix through both paths: eigenvalues must match closely.
        for seed in 0..3u64 {
            let m = random_hermitian(60, 100 + seed);
            let (jv, _) = {
                let mut a = m.clone();
                a.hermitianize();
                jacobi_eig(a)
            };
            let (qv, _) = {
                let mut a = m.clone();
                a.hermitianize();
                householder_ql_eig(a).unwrap()
            };
            let mut jv = jv;
            let mut qv = qv;
            jv.sort_by(|a, b| b.partial_cmp(a).unwrap());
            qv.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (a, b) in jv.iter().zip(&qv) {
                assert!((a - b).abs() < 1e-11, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn unitary_eigenvectors() {
        let m = random_hermitian(90, 7);
        let (_, v) = hermitian_eig(&m).unwrap();
        let gram = v.dagger().mul(&v).unwrap();
        let dev = gram
            .sub(&ComplexMatrix::identity(90))
            .unwrap()
            .frobenius_norm();
        assert!(dev < 1e-10, "unitarity deviation {dev}");
    }
}
