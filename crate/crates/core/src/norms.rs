//! ℓp norms, their Hölder duals and the top-(k,q) norms.
//!
//! For a dual vector `y` sorted so that `|y_ν(1)| ≥ … ≥ |y_ν(d)|`, the top-(k,q)
//! norm is the ℓq norm of the `k` largest magnitudes,
//!
//! ```text
//! ‖y‖_{k,q} = (Σ_{i ≤ k} |y_ν(i)|^q)^(1/q)      q ∈ [1, ∞)
//! ‖y‖_{k,∞} = ‖y‖_∞
//! ```
//!
//! and `‖y‖_{0,q} = 0` by convention. These are the dual coordinate-k norms
//! of the ℓp source norm, and every closed form in the crate is phrased in
//! terms of them.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Regime {
    One,
    Interior(f64),
    Infinity,
}

/// An exponent in `[1, ∞]`, kept symbolic at the endpoints.
///
/// The same type serves for the source exponent `p` and for its Hölder
/// conjugate `q` (`1/p + 1/q = 1`, with `1 ↔ ∞`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PExponent(Regime);

impl PExponent {
    pub const ONE: PExponent = PExponent(Regime::One);
    pub const TWO: PExponent = PExponent(Regime::Interior(2.0));
    pub const INFINITY: PExponent = PExponent(Regime::Infinity);

    /// Accepts any `p >= 1`, including `f64::INFINITY`.
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        Ok(if p == 1.0 {
            Self::ONE
        } else if p == f64::INFINITY {
            Self::INFINITY
        } else {
            PExponent(Regime::Interior(p))
        })
    }

    pub fn value(self) -> f64 {
        match self.0 {
            Regime::One => 1.0,
            Regime::Interior(p) => p,
            Regime::Infinity => f64::INFINITY,
        }
    }

    /// The Hölder conjugate exponent.
    pub fn conjugate(self) -> Self {
        match self.0 {
            Regime::One => Self::INFINITY,
            Regime::Infinity => Self::ONE,
            Regime::Interior(p) => Self::new(p / (p - 1.0)).expect("conjugate of p > 1 is at least 1"),
        }
    }

    pub fn is_one(self) -> bool {
        self.0 == Regime::One
    }

    pub fn is_infinite(self) -> bool {
        self.0 == Regime::Infinity
    }

    /// `true` for `p ∈ (1, ∞)`, where ℓ0 is Capra-convex.
    pub fn is_interior(self) -> bool {
        matches!(self.0, Regime::Interior(_))
    }

    /// The finite value `p ∈ (1, ∞)`, if any.
    pub fn interior(self) -> Option<f64> {
        match self.0 {
            Regime::Interior(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Regime::One => f.write_str("1"),
            Regime::Interior(p) => write!(f, "{p}"),
            Regime::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for PExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if ["inf", "infinity", "∞"].iter().any(|w| t.eq_ignore_ascii_case(w)) {
            return Ok(Self::INFINITY);
        }
        let p: f64 = t.parse().map_err(|_| Error::ExponentSyntax(s.to_string()))?;
        Self::new(p)
    }
}

impl Serialize for PExponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PExponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A dense real vector with `d >= 1` finite entries.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Vector(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(deserializer)?;
        Vector::new(v).map_err(serde::de::Error::custom)
    }
}

/// Parses comma-separated reals, e.g. `"1,-0.5,2e3"`.
impl FromStr for Vector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("not a real number: {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Vector::new(entries)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Permutation `ν` listing coordinates by nonincreasing magnitude.
///
/// Indices are 0-based. Ties keep ascending original index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortPermutation(Vec<usize>);

impl SortPermutation {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// 1-based indices, as usually written.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// `|y_ν(1)|, …, |y_ν(d)|`.
    pub fn sorted_abs(&self, y: &[f64]) -> Vec<f64> {
        self.0.iter().map(|&i| y[i].abs()).collect()
    }
}

pub fn sort_abs(y: &[f64]) -> SortPermutation {
    let mut idx: Vec<usize> = (0..y.len()).collect();
    idx.sort_by(|&a, &b| y[b].abs().total_cmp(&y[a].abs()).then(a.cmp(&b)));
    SortPermutation(idx)
}

pub fn lp_norm(y: &[f64], p: PExponent) -> f64 {
    match p.0 {
        Regime::One => y.iter().map(|v| v.abs()).sum(),
        Regime::Infinity => y.iter().fold(0.0, |m, v| m.max(v.abs())),
        Regime::Interior(2.0) => y.iter().map(|v| v * v).sum::<f64>().sqrt(),
        Regime::Interior(e) => y.iter().map(|v| v.abs().powf(e)).sum::<f64>().powf(1.0 / e),
    }
}

/// All top-(k,q) norms at once: entry `k` holds `‖y‖_{k,q}` for `k ∈ [0, d]`.
pub fn top_norms(y: &[f64], q: PExponent) -> Vec<f64> {
    let sorted = sort_abs(y).sorted_abs(y);
    let mut out = Vec::with_capacity(y.len() + 1);
    out.push(0.0);
    match q.0 {
        Regime::Infinity => {
            let m = sorted.first().copied().unwrap_or(0.0);
            out.extend(std::iter::repeat_n(m, y.len()));
        }
        Regime::One => {
            let mut s = 0.0;
            for v in sorted {
                s += v;
                out.push(s);
            }
        }
        Regime::Interior(e) => {
            let mut s = 0.0;
            for v in sorted {
                if e == 2.0 {
                    s += v * v;
                    out.push(s.sqrt());
                } else {
                    s += v.powf(e);
                    out.push(s.powf(1.0 / e));
                }
            }
        }
    }
    out
}

/// `‖y‖_{k,q}`; `k = 0` yields 0.
pub fn top_norm(y: &[f64], k: usize, q: PExponent) -> Result<f64> {
    if k > y.len() {
        return Err(Error::RankOutOfRange { k, d: y.len() });
    }
    Ok(top_norms(y, q)[k])
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Both sides of the normal-cone equality `⟨u, y⟩ = ‖u‖_p ‖y‖_q`.
pub(crate) fn normal_cone_sides(u_base: &[f64], y: &[f64], p: PExponent) -> (f64, f64) {
    (dot(u_base, y), lp_norm(u_base, p) * lp_norm(y, p.conjugate()))
}

/// Decides `y ∈ N_{B_p}(u / ‖u‖_p)`.
///
/// The equality `⟨u, y⟩ = ‖u‖_p ‖y‖_q` is tested on the normalized ratio,
/// so the verdict does not change when either argument is scaled by a
/// positive factor. `y = 0` is always a member.
pub fn normal_cone_member_lp(u_base: &[f64], y: &[f64], p: PExponent, tol: f64) -> Result<bool> {
    check_dims(u_base.len(), y.len())?;
    if u_base.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroBasePoint);
    }
    let (inner, bound) = normal_cone_sides(u_base, y, p);
    if bound == 0.0 {
        return Ok(true);
    }
    Ok(crate::approx_eq(inner / bound, 1.0, tol))
}

/// A pair violating orthant-strict monotonicity: `|x| ≤ |x′|` componentwise
/// with one strict inequality, same orthant, yet `‖x‖ ≥ ‖x′‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct OsmCounterexample {
    pub x: Vec<f64>,
    pub x_prime: Vec<f64>,
}

// Sign of ‖x′‖_p − ‖x‖_p without cancellation. The pairs differ in a single
// coordinate, so summing per-coordinate differences of p-th powers keeps
// perturbations below the rounding level of the full norm visible.
fn norm_increase(x: &[f64], x_prime: &[f64], p: PExponent) -> f64 {
    match p.0 {
        Regime::Infinity => lp_norm(x_prime, p) - lp_norm(x, p),
        _ => {
            let e = p.value();
            x.iter().zip(x_prime).map(|(a, b)| b.abs().powf(e) - a.abs().powf(e)).sum()
        }
    }
}

/// Randomized search for a violation of orthant-strict monotonicity of `‖·‖_p`.
///
/// Each trial draws `x′` from a standard Gaussian and shrinks the magnitude
/// of one random coordinate by a uniform factor in `[0, 1)` to obtain `x`.
pub fn osm_falsify(
    p: PExponent,
    d: usize,
    trials: usize,
    rng_seed: u64,
) -> Result<Option<OsmCounterexample>> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {d}")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..trials {
        let x_prime: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let k = rng.random_range(0..d);
        let shrink: f64 = rng.random();
        let mut x = x_prime.clone();
        x[k] *= shrink;
        if x[k].abs() >= x_prime[k].abs() {
            continue;
        }
        if norm_increase(&x, &x_prime, p) <= 0.0 {
            return Ok(Some(OsmCounterexample { x, x_prime }));
        }
    }
    Ok(None)
}
