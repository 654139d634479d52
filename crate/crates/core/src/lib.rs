//! Capra conjugacy for the ℓ0 pseudonorm under ℓp source norms.
//!
//! The Capra coupling replaces the scalar product of Fenchel conjugacy with
//!
//! ```text
//! ¢(x, y) = ⟨x, y⟩ / ‖x‖_p   if x ≠ 0,      ¢(0, y) = 0,
//! ```
//!
//! which is constant along primal rays. Under this coupling the ℓ0
//! pseudonorm (number of nonzero coordinates) has explicit conjugates,
//! biconjugates and subdifferentials. This crate evaluates all of them in
//! closed form and ships brute-force oracles that recompute each one
//! independently.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`norms`] | ℓp and top-(k,q) norms, sorting, normal cones, monotonicity falsifier |
//! | [`capra`] | coupling, ℓ0, conjugate, biconjugate, admissible-dual sets |
//! | [`subdiff`] | exact subdifferential membership, domains, witnesses |
//! | [`region`] | 2-D membership sweeps |
//! | [`bounds`] | max-of-Capra-affine lower bounds of ℓ0 |
//! | [`oracle`] | grid and enumeration oracles |
//!
//! ```
//! use capra_l0::{capra_conjugate, subdiff_member, PExponent, DEFAULT_TOL};
//!
//! let p = PExponent::new(2.0).unwrap();
//! assert_eq!(capra_conjugate(&[2.0, 0.0], p), 1.0);
//! assert!(subdiff_member(&[1.0, 0.0], &[1.0, 0.5], p, DEFAULT_TOL).member);
//! ```

pub mod bounds;
pub mod capra;
mod error;
pub mod norms;
pub mod oracle;
pub mod region;
pub mod subdiff;

pub use bounds::{build_model, eval_model, CapraAffineModel, CapraAffinePiece};
pub use capra::{
    capra_biconjugate, capra_conjugate, capra_coupling, classical_subdiff, frechet_family_subdiff_member,
    in_admissible_dual, l0, ClassicalSubdiff, ExtendedReal, SupportSet,
};
pub use error::{Error, Result};
pub use norms::{
    lp_norm, normal_cone_member_lp, osm_falsify, sort_abs, top_norm, top_norms, PExponent, SortPermutation,
    Vector,
};
pub use region::{region_sweep, region_sweep_all_classes, RegionGrid, Window};
pub use subdiff::{
    in_subdiff_domain, subdiff_member, subdiff_witness, Condition, ConditionId, SubdiffVerdict,
};

/// Default relative tolerance for equality and boundary tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `|lhs - rhs| <= tol * max(1, |rhs|)`.
#[inline]
pub(crate) fn approx_eq(lhs: f64, rhs: f64, tol: f64) -> bool {
    (lhs - rhs).abs() <= tol * rhs.abs().max(1.0)
}

/// `lhs <= rhs` up to the relative tolerance.
#[inline]
pub(crate) fn approx_le(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs + tol * rhs.abs().max(1.0)
}

/// `lhs >= rhs` up to the relative tolerance.
#[inline]
pub(crate) fn approx_ge(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs >= rhs - tol * rhs.abs().max(1.0)
}
