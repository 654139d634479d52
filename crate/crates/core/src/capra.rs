//! The Capra coupling and the conjugacy objects it attaches to ℓ0.
//!
//! With `q` the Hölder conjugate of the source exponent `p`:
//!
//! ```text
//! ℓ0^¢(y)   = max_{j ∈ [1,d]} (‖y‖_{j,q} − j)^+
//! ℓ0^¢¢(x)  = 1[x ≠ 0]          p = 1
//!           = ℓ0(x)             p ∈ (1, ∞)
//!           = ‖x‖_1 / ‖x‖_∞     p = ∞   (0 at x = 0)
//! D_l       = { y : l ∈ argmax_{j ∈ [0,d]} (‖y‖_{j,q} − j) }
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg};

use crate::error::{Error, Result};
use crate::norms::{dot, lp_norm, sort_abs, top_norms, PExponent};
use crate::{approx_ge, approx_le};

/// Extended real line `ℝ ∪ {−∞, +∞}`.
///
/// Addition uses the upper convention `+∞ + (−∞) = +∞`, so sums never
/// produce NaN. Variant order gives the natural ordering.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    pub fn max(self, other: Self) -> Self {
        match self.partial_cmp(&other) {
            Some(Ordering::Less) => other,
            _ => self,
        }
    }

    /// Supremum of a sequence; `−∞` when empty.
    pub fn sup<I: IntoIterator<Item = ExtendedReal>>(values: I) -> Self {
        values.into_iter().fold(ExtendedReal::NegInfinity, ExtendedReal::max)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInfinity => f64::NEG_INFINITY,
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInfinity => f64::INFINITY,
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtendedReal::PosInfinity
        } else if v == f64::NEG_INFINITY {
            ExtendedReal::NegInfinity
        } else {
            ExtendedReal::Finite(v)
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: Self) -> Self {
        use ExtendedReal::*;
        match (self, rhs) {
            (PosInfinity, _) | (_, PosInfinity) => PosInfinity,
            (NegInfinity, _) | (_, NegInfinity) => NegInfinity,
            (Finite(a), Finite(b)) => ExtendedReal::from(a + b),
        }
    }
}

impl Neg for ExtendedReal {
    type Output = ExtendedReal;

    fn neg(self) -> Self {
        match self {
            ExtendedReal::NegInfinity => ExtendedReal::PosInfinity,
            ExtendedReal::Finite(v) => ExtendedReal::Finite(-v),
            ExtendedReal::PosInfinity => ExtendedReal::NegInfinity,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInfinity => f.write_str("-inf"),
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInfinity => f.write_str("+inf"),
        }
    }
}

/// `supp(x) = { j : x_j ≠ 0 }`, exact-zero based, 0-based sorted indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    pub fn of(x: &[f64]) -> Self {
        SupportSet((0..x.len()).filter(|&i| x[i] != 0.0).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    /// `y_L`: `y` with the coordinates outside the support zeroed.
    pub fn restrict(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; y.len()];
        for &i in &self.0 {
            out[i] = y[i];
        }
        out
    }
}

pub fn l0(x: &[f64]) -> usize {
    x.iter().filter(|&&v| v != 0.0).count()
}

pub(crate) fn is_zero(x: &[f64]) -> bool {
    x.iter().all(|&v| v == 0.0)
}

/// `¢(x, y) = ⟨x, y⟩ / ‖x‖_p`, and 0 at `x = 0`.
///
/// # Panics
/// If `x` and `y` differ in length.
pub fn capra_coupling(x: &[f64], y: &[f64], p: PExponent) -> f64 {
    assert_eq!(x.len(), y.len(), "coupling needs equal dimensions");
    if is_zero(x) {
        return 0.0;
    }
    dot(x, y) / lp_norm(x, p)
}

fn conjugate_l1_closed(y: &[f64]) -> f64 {
    (lp_norm(y, PExponent::INFINITY) - 1.0).max(0.0)
}

fn conjugate_linf_closed(y: &[f64]) -> f64 {
    y.iter().map(|v| v.abs()).filter(|&a| a >= 1.0).map(|a| a - 1.0).sum()
}

/// `ℓ0^¢(y) = max_{j ∈ [1,d]} (‖y‖_{j,q} − j)^+`.
pub fn capra_conjugate(y: &[f64], p: PExponent) -> f64 {
    let tops = top_norms(y, p.conjugate());
    let value = tops.iter().enumerate().skip(1).map(|(j, t)| (t - j as f64).max(0.0)).fold(0.0, f64::max);
    if cfg!(debug_assertions) {
        let collapsed = if p.is_one() {
            Some(conjugate_l1_closed(y))
        } else if p.is_infinite() {
            Some(conjugate_linf_closed(y))
        } else {
            None
        };
        if let Some(c) = collapsed {
            debug_assert!(
                crate::approx_eq(value, c, 1e-9),
                "conjugate {value} disagrees with collapsed form {c} at p = {p}"
            );
        }
    }
    value
}

pub fn capra_biconjugate(x: &[f64], p: PExponent) -> f64 {
    if is_zero(x) {
        return 0.0;
    }
    if p.is_one() {
        1.0
    } else if p.is_infinite() {
        lp_norm(x, PExponent::ONE) / lp_norm(x, PExponent::INFINITY)
    } else {
        l0(x) as f64
    }
}

/// Which inequality of the level-set characterization a row encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LevelRow {
    /// `|y_ν(k+1)|^q ≥ (‖y‖_{k,q} + 1)^q − ‖y‖_{k,q}^q`, `k < l`.
    Lower(usize),
    /// `|y_ν(l+1)|^q ≤ (‖y‖_{l,q} + 1)^q − ‖y‖_{l,q}^q`, only when `l < d`.
    Upper,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct LevelCheck {
    pub row: LevelRow,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

fn pow_q(v: f64, q: f64) -> f64 {
    if q == 1.0 {
        v
    } else if q == 2.0 {
        v * v
    } else {
        v.powf(q)
    }
}

// (T + 1)^q − T^q; exactly 1 for q = 1.
fn increment_threshold(top: f64, q: f64) -> f64 {
    if q == 1.0 {
        1.0
    } else if q == 2.0 {
        2.0 * top + 1.0
    } else {
        (top + 1.0).powf(q) - top.powf(q)
    }
}

/// Rows characterizing `y ∈ D_l` for `p ∈ (1, ∞]` (finite conjugate `q`).
pub(crate) fn level_rows(y: &[f64], l: usize, p: PExponent, tol: f64) -> Vec<LevelCheck> {
    debug_assert!(!p.is_one());
    let q = p.conjugate().value();
    let qexp = p.conjugate();
    let sorted = sort_abs(y).sorted_abs(y);
    let tops = top_norms(y, qexp);
    let mut rows = Vec::with_capacity(l + 1);
    for k in 0..l {
        let lhs = pow_q(sorted[k], q);
        let rhs = increment_threshold(tops[k], q);
        rows.push(LevelCheck { row: LevelRow::Lower(k), lhs, rhs, satisfied: approx_ge(lhs, rhs, tol) });
    }
    if l < y.len() {
        let lhs = pow_q(sorted[l], q);
        let rhs = increment_threshold(tops[l], q);
        rows.push(LevelCheck { row: LevelRow::Upper, lhs, rhs, satisfied: approx_le(lhs, rhs, tol) });
    }
    rows
}

/// Membership `y ∈ D_l`.
pub fn in_admissible_dual(y: &[f64], l: usize, p: PExponent, tol: f64) -> Result<bool> {
    if l > y.len() {
        return Err(Error::RankOutOfRange { k: l, d: y.len() });
    }
    if p.is_one() {
        let m = lp_norm(y, PExponent::INFINITY);
        return Ok(match l {
            0 => approx_le(m, 1.0, tol),
            1 => approx_ge(m, 1.0, tol),
            _ => false,
        });
    }
    Ok(level_rows(y, l, p, tol).iter().all(|r| r.satisfied))
}

/// The ordinary convex subdifferential of ℓ0, which degenerates to `{0}` or `∅`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassicalSubdiff {
    ZeroSingleton,
    Empty,
}

impl fmt::Display for ClassicalSubdiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassicalSubdiff::ZeroSingleton => "{0}",
            ClassicalSubdiff::Empty => "∅",
        })
    }
}

pub fn classical_subdiff(x: &[f64]) -> ClassicalSubdiff {
    if is_zero(x) {
        ClassicalSubdiff::ZeroSingleton
    } else {
        ClassicalSubdiff::Empty
    }
}

/// Membership in the Fréchet / limiting / Clarke subdifferential of ℓ0 at `x`,
/// which all equal `{ y : y_j = 0 for j ∈ supp(x) }`.
pub fn frechet_family_subdiff_member(x: &[f64], y: &[f64]) -> bool {
    assert_eq!(x.len(), y.len(), "subdifferential test needs equal dimensions");
    x.iter().zip(y).all(|(&a, &b)| a == 0.0 || b == 0.0)
}
