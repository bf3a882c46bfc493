//! Exact arithmetic for hyperbolic integer lattices and their isometry groups.
//!
//! The crate is organised bottom-up:
//!
//! - [`polyarith`]: integer polynomials, Sturm counting, cyclotomic stripping and
//!   the Salem polynomial test.
//! - [`lattice`]: Gram matrices, signatures, saturation, orthogonal complements
//!   and positive-cone references.
//! - [`isometry`]: verified isometries, characteristic polynomials and the
//!   elliptic / parabolic / Salem-type trichotomy.
//! - [`groupdyn`]: finitely generated subgroups, ping-pong certificates and the
//!   free-versus-almost-abelian verdict.
//!
//! Everything is exact. Floating point never enters a decision.

pub mod corpus;
pub mod error;
pub mod groupdyn;
pub mod isometry;
pub mod lattice;
pub mod linalg;
pub mod polyarith;

pub use error::{Error, Result};
pub use groupdyn::{
    analyze, burnside_check, common_fixed_ray, invariant_sublattice, minimal_full_analysis,
    ping_pong_search, verify_certificate, AlmostAbelianEvidence, BurnsideOutcome, Budget,
    GeneratorSet, PingPongCertificate, Verdict, Word,
};
pub use isometry::{
    char_poly, classify, eigen_rays, express_in_powers, fixed_isotropic_ray, order,
    preserves_cone, verify_isometry, EigenRays, Isometry, PowerExpansion, SpectralClass,
};
pub use lattice::{
    cone_contains, lattice_kind, orth_complement, saturation, signature, ConeReference, Lattice,
    LatticeKind, Signature, Sublattice,
};
pub use linalg::{IntMatrix, RatMatrix};
pub use polyarith::{
    cyclotomic_poly, is_reciprocal, is_salem, poly_gcd, salem_number_interval, squarefree_part,
    strip_cyclotomic, sturm_count, unit_circle_root_count, CyclotomicMultiset, IntPolynomial,
    RationalInterval, RealInterval,
};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
