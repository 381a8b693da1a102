//! Partial transpose and partial trace over one tensor factor.

use num_complex::Complex64;

use super::{BipartiteShape, ComplexMatrix};
use crate::error::Error;
use crate::Result;

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSide {
    A,
    B,
}

/// Partial transpose about one subsystem.
///
/// For `side = A`: entry `((a,b),(a',b'))` of the output equals entry
/// `((a',b),(a,b'))` of the input. Exact entry moves — the operation is an
/// involution and preserves the trace and Hermiticity exactly.
pub fn partial_transpose(
    m: &ComplexMatrix,
    shape: BipartiteShape,
    side: Side,
) -> Result<ComplexMatrix> {
    let n = shape.side();
    if m.rows() != n || m.cols() != n {
        return Err(Error::ShapeError(format!(
            "partial transpose: matrix is {}x{}, shape wants {n}x{n}",
            m.rows(),
            m.cols()
        )));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..shape.dim_a {
        for b in 0..shape.dim_b {
            for ap in 0..shape.dim_a {
                for bp in 0..shape.dim_b {
                    let (src_r, src_c) = match side {
                        Side::A => (shape.index(ap, b), shape.index(a, bp)),
                        Side::B => (shape.index(a, bp), shape.index(ap, b)),
                    };
                    out[(shape.index(a, b), shape.index(ap, bp))] = m[(src_r, src_c)];
                }
            }
        }
    }
    Ok(out)
}

/// Partial trace removing one factor: `Tr_B` keeps an `dim_a x dim_a`
/// operator, `Tr_A` keeps `dim_b x dim_b`.
pub fn partial_trace(
    m: &ComplexMatrix,
    shape: BipartiteShape,
    traced: TraceSide,
) -> Result<ComplexMatrix> {
    let n = shape.side();
    if m.rows() != n || m.cols() != n {
        return Err(Error::ShapeError(format!(
            "partial trace: matrix is {}x{}, shape wants {n}x{n}",
            m.rows(),
            m.cols()
        )));
    }
    match traced {
        TraceSide::B => {
            let mut out = ComplexMatrix::zeros(shape.dim_a, shape.dim_a);
            for a in 0..shape.dim_a {
                for ap in 0..shape.dim_a {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..shape.dim_b {
                        acc += m[(shape.index(a, b), shape.index(ap, b))];
                    }
                    out[(a, ap)] = acc;
                }
            }
            Ok(out)
        }
        TraceSide::A => {
            let mut out = ComplexMatrix::zeros(shape.dim_b, shape.dim_b);
            for b in 0..shape.dim_b {
                for bp in 0..shape.dim_b {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..shape.dim_a {
                        acc += m[(shape.index(a, b), shape.index(a, bp))];
                    }
                    out[(b, bp)] = acc;
                }
            }
            Ok(out)
        }
    }
}
