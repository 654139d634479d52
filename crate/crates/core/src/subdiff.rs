//! Exact Capra-subdifferential of ℓ0 for ℓp source norms.
//!
//! At `x = 0` the subdifferential is the unit ℓ∞ ball for every `p`. At
//! `x ≠ 0` with `l = ℓ0(x)`, `L = supp(x)` and `q` the conjugate exponent,
//! membership of `y` is decided by the rows
//!
//! ```text
//! y_L ∈ N_{B_p}(x / ‖x‖_p)                                  normal cone
//! |y_j| ≤ min_{i ∈ L} |y_i|            for j ∉ L              off-support
//! |y_ν(k+1)|^q ≥ (‖y‖_{k,q} + 1)^q − ‖y‖_{k,q}^q   k < l     lower chain
//! |y_ν(l+1)|^q ≤ (‖y‖_{l,q} + 1)^q − ‖y‖_{l,q}^q   l < d     upper
//! ```
//!
//! For `p = ∞` the same rows apply with `q = 1` (thresholds equal to 1) on
//! the domain `⋃_{λ>0} {−λ, 0, λ}^d`. For `p = 1` the domain is `ℓ0(x) ≤ 1`
//! and the rows reduce to a normal cone of the ℓ1 ball plus `‖y‖_∞ ≥ 1`.

use std::fmt;

use crate::capra::{is_zero, l0, level_rows, LevelRow, SupportSet};
use crate::error::{Error, Result};
use crate::norms::{lp_norm, normal_cone_member_lp, normal_cone_sides, sort_abs, PExponent};
use crate::{approx_ge, approx_le, DEFAULT_TOL};

/// Doubling budget for the witness scale search.
pub const MAX_WITNESS_DOUBLINGS: u32 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionId {
    /// `x = 0`: `‖y‖_∞ ≤ 1`.
    ZeroBall,
    /// `ℓ0(x) ≤ 1` for `p = 1`; equal nonzero magnitudes for `p = ∞`.
    Domain,
    NormalCone,
    OffSupport,
    /// `p = 1`: `‖y‖_∞ ≥ 1`.
    DualNormFloor,
    /// Lower-chain row for `k` (0-based, `k < l`).
    LowerChain(usize),
    Upper,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionId::ZeroBall => f.write_str("zero-ball"),
            ConditionId::Domain => f.write_str("domain"),
            ConditionId::NormalCone => f.write_str("normal-cone"),
            ConditionId::OffSupport => f.write_str("off-support"),
            ConditionId::DualNormFloor => f.write_str("dual-norm-floor"),
            ConditionId::LowerChain(k) => write!(f, "lower-chain[k={k}]"),
            ConditionId::Upper => f.write_str("upper"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Condition {
    pub id: ConditionId,
    pub satisfied: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// Membership decision together with every row of the active case.
#[derive(Clone, Debug, PartialEq)]
pub struct SubdiffVerdict {
    pub member: bool,
    pub conditions: Vec<Condition>,
}

impl SubdiffVerdict {
    fn from_rows(conditions: Vec<Condition>) -> Self {
        SubdiffVerdict { member: conditions.iter().all(|c| c.satisfied), conditions }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.satisfied)
    }
}

// Nonzero magnitudes (max, min); relative comparison keeps the test ray invariant.
fn linf_lattice_row(x: &[f64], tol: f64) -> Condition {
    let mags = x.iter().filter(|&&v| v != 0.0).map(|v| v.abs());
    let (max, min) = mags.fold((0.0f64, f64::INFINITY), |(a, b), v| (a.max(v), b.min(v)));
    let min = if min.is_finite() { min } else { 0.0 };
    Condition { id: ConditionId::Domain, satisfied: max - min <= tol * max, lhs: max, rhs: min }
}

fn l1_domain_row(l: usize) -> Condition {
    Condition { id: ConditionId::Domain, satisfied: l <= 1, lhs: l as f64, rhs: 1.0 }
}

pub fn in_subdiff_domain(x: &[f64], p: PExponent) -> bool {
    if p.is_one() {
        l0(x) <= 1
    } else if p.is_infinite() {
        linf_lattice_row(x, DEFAULT_TOL).satisfied
    } else {
        true
    }
}

fn normal_cone_row(x: &[f64], y: &[f64], p: PExponent, tol: f64) -> Condition {
    let (lhs, rhs) = normal_cone_sides(x, y, p);
    let satisfied = normal_cone_member_lp(x, y, p, tol).expect("x is nonzero with matching dims");
    Condition { id: ConditionId::NormalCone, satisfied, lhs, rhs }
}

fn off_support_row(y: &[f64], support: &SupportSet, tol: f64) -> Condition {
    let (mut off_max, mut on_min) = (0.0f64, f64::INFINITY);
    for (j, v) in y.iter().enumerate() {
        if support.contains(j) {
            on_min = on_min.min(v.abs());
        } else {
            off_max = off_max.max(v.abs());
        }
    }
    Condition {
        id: ConditionId::OffSupport,
        satisfied: approx_le(off_max, on_min, tol),
        lhs: off_max,
        rhs: on_min,
    }
}

/// Decides `y ∈ ∂_¢ ℓ0(x)` and reports every row of the active case.
///
/// # Panics
/// If `x` and `y` differ in length.
pub fn subdiff_member(x: &[f64], y: &[f64], p: PExponent, tol: f64) -> SubdiffVerdict {
    assert_eq!(x.len(), y.len(), "subdifferential test needs equal dimensions");
    if is_zero(x) {
        let m = lp_norm(y, PExponent::INFINITY);
        return SubdiffVerdict::from_rows(vec![Condition {
            id: ConditionId::ZeroBall,
            satisfied: approx_le(m, 1.0, tol),
            lhs: m,
            rhs: 1.0,
        }]);
    }
    let l = l0(x);
    let mut rows = Vec::with_capacity(l + 4);

    if p.is_one() {
        rows.push(l1_domain_row(l));
        if l > 1 {
            return SubdiffVerdict::from_rows(rows);
        }
        rows.push(normal_cone_row(x, y, p, tol));
        let m = lp_norm(y, PExponent::INFINITY);
        rows.push(Condition {
            id: ConditionId::DualNormFloor,
            satisfied: approx_ge(m, 1.0, tol),
            lhs: m,
            rhs: 1.0,
        });
        return SubdiffVerdict::from_rows(rows);
    }

    if p.is_infinite() {
        let domain = linf_lattice_row(x, tol);
        let inside = domain.satisfied;
        rows.push(domain);
        if !inside {
            return SubdiffVerdict::from_rows(rows);
        }
    }

    let support = SupportSet::of(x);
    rows.push(normal_cone_row(x, &support.restrict(y), p, tol));
    rows.push(off_support_row(y, &support, tol));
    rows.extend(level_rows(y, l, p, tol).into_iter().map(|r| Condition {
        id: match r.row {
            LevelRow::Lower(k) => ConditionId::LowerChain(k),
            LevelRow::Upper => ConditionId::Upper,
        },
        satisfied: r.satisfied,
        lhs: r.lhs,
        rhs: r.rhs,
    }));
    SubdiffVerdict::from_rows(rows)
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A canonical subgradient `y ∈ ∂_¢ ℓ0(x)`.
///
/// For `p ∈ (1, ∞)` this is `λ g` where `g` is the unit-dual supporting
/// functional of `x` (zero off the support) and `λ` the first power of two
/// satisfying the lower-chain rows.
pub fn subdiff_witness(x: &[f64], p: PExponent) -> Result<Vec<f64>> {
    if !in_subdiff_domain(x, p) {
        return Err(Error::OutOfDomain { p: p.to_string() });
    }
    if is_zero(x) {
        return Ok(vec![0.0; x.len()]);
    }
    if p.is_one() || p.is_infinite() {
        return Ok(x.iter().map(|&v| sign(v)).collect());
    }

    let pv = p.value();
    let norm = lp_norm(x, p);
    let g: Vec<f64> = x.iter().map(|&v| sign(v) * (v.abs() / norm).powf(pv - 1.0)).collect();
    let l = l0(x);
    let mut lambda = 1.0;
    for _ in 0..=MAX_WITNESS_DOUBLINGS {
        let y: Vec<f64> = g.iter().map(|v| lambda * v).collect();
        let chain_ok = level_rows(&y, l, p, 0.0)
            .iter()
            .filter(|r| matches!(r.row, LevelRow::Lower(_)))
            .all(|r| r.satisfied);
        if chain_ok {
            return Ok(y);
        }
        lambda *= 2.0;
    }
    Err(Error::WitnessDiverged { doublings: MAX_WITNESS_DOUBLINGS })
}

/// A primal point `x` with `ℓ0(x) = l` such that `y ∈ ∂_¢ ℓ0(x)` for some
/// primal point of that sparsity iff it holds at the returned one.
///
/// The support is placed on the `l` largest magnitudes of `y` and the
/// direction is chosen so that the normal-cone row holds whenever it can.
/// Returns `None` when no primal point of sparsity `l` can admit `y`
/// (a zero among the `l` largest magnitudes, or `l ≥ 2` at `p = 1`).
pub fn class_representative(y: &[f64], l: usize, p: PExponent) -> Option<Vec<f64>> {
    if l > y.len() {
        return None;
    }
    let mut x = vec![0.0; y.len()];
    if l == 0 {
        return Some(x);
    }
    if p.is_one() && l > 1 {
        return None;
    }
    let nu = sort_abs(y);
    let top = &nu.indices()[..l];
    if top.iter().any(|&i| y[i] == 0.0) {
        return None;
    }
    for &i in top {
        x[i] = match p.interior() {
            // Dual map of y_L: x_i ∝ sign(y_i) |y_i|^(q−1).
            Some(_) => sign(y[i]) * y[i].abs().powf(p.conjugate().value() - 1.0),
            None => sign(y[i]),
        };
    }
    Some(x)
}
