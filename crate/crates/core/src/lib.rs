//! Construction and certification of small genuinely nonlocal sets of
//! generalized GHZ states in N-party, dimension-d systems.
//!
//! A set of orthogonal multipartite states is *genuinely nonlocal* if it is
//! locally indistinguishable across every bipartition of the parties. This
//! crate builds such sets out of generalized GHZ states and certifies them
//! two ways:
//!
//! * structural witnesses — maximally-entangled subsets sharing a common
//!   d⊗d subspace, or a Fourier-multiplet-plus-stopper form — found per
//!   bipartition by [`verifier`];
//! * a numerical semidefinite program for optimal discrimination under PPT
//!   measurements, with a rigorously validated dual upper bound, in [`sdp`].
//!
//! The supporting layers are [`tensor`] (dense complex linear algebra),
//! [`group`] (N-bit strings modulo global complement, subgroups and cosets),
//! [`states`] (exact product-term representation with root-of-unity phases)
//! and [`constructions`] (the set generators themselves).

pub mod constructions;
pub mod error;
pub mod group;
pub mod policy;
pub mod sdp;
pub mod states;
pub mod tables;
pub mod tensor;
pub mod verifier;

pub use error::Error;
pub use policy::NumericPolicy;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
