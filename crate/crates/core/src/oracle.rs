//! Brute-force recomputation of the closed forms.
//!
//! Nothing here calls the closed-form conjugate to check itself: the
//! conjugate oracle maximizes the defining supremum over a lattice, the
//! admissible-dual oracle takes the argmax over levels using dual
//! coordinate norms obtained by subset enumeration, and the coordinate-norm
//! oracle enumerates subsets instead of sorting. The biconjugate oracle does
//! use the closed-form conjugate, which is itself checked by
//! [`conjugate_by_sup`].
//!
//! Grid sups are lower estimates of the true sups and converge as the step
//! shrinks.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::capra::{capra_conjugate, capra_coupling, l0, ExtendedReal};
use crate::error::{Error, Result};
use crate::norms::{check_dims, PExponent};
use crate::DEFAULT_TOL;

/// Default cap on the number of lattice points in one sweep.
pub const DEFAULT_GRID_BUDGET: u128 = 50_000_000;

/// Largest dimension accepted by subset enumeration.
pub const MAX_ENUMERATION_DIM: usize = 20;

/// Box lattice `{lo + i·step}^dim ∩ [lo, hi]^dim`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    lo: f64,
    hi: f64,
    step: f64,
    dim: usize,
    budget: u128,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, step: f64, dim: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidGrid(format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be >= 1".into()));
        }
        Ok(GridSpec { lo, hi, step, dim, budget: DEFAULT_GRID_BUDGET })
    }

    /// Symmetric box `[−radius, radius]^dim`.
    pub fn centered(radius: f64, step: f64, dim: usize) -> Result<Self> {
        Self::new(-radius, radius, step, dim)
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn points_per_axis(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn cell_count(&self) -> u128 {
        (self.points_per_axis() as u128).saturating_pow(self.dim as u32)
    }

    fn check_budget(&self) -> Result<()> {
        let cells = self.cell_count();
        if cells > self.budget {
            return Err(Error::BudgetExceeded { cells, budget: self.budget });
        }
        Ok(())
    }

    // Axis values; values within rounding of zero are snapped so the
    // coordinate axes (the sparse points) are on the lattice.
    fn axis(&self) -> Vec<f64> {
        (0..self.points_per_axis())
            .map(|i| {
                let v = self.lo + i as f64 * self.step;
                if v.abs() < 1e-9 * self.step {
                    0.0
                } else {
                    v
                }
            })
            .collect()
    }

    /// Maximum of `f` over all lattice points.
    fn par_max<F>(&self, f: F) -> Result<ExtendedReal>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        self.check_budget()?;
        let axis = self.axis();
        let n = axis.len();
        let total = self.cell_count() as u64;
        let dim = self.dim;
        let best = (0..total)
            .into_par_iter()
            .fold(
                || (vec![0.0; dim], ExtendedReal::NegInfinity),
                |(mut point, best), mut idx| {
                    for c in point.iter_mut() {
                        *c = axis[(idx % n as u64) as usize];
                        idx /= n as u64;
                    }
                    let v = ExtendedReal::from(f(&point));
                    (point, best.max(v))
                },
            )
            .map(|(_, best)| best)
            .reduce(|| ExtendedReal::NegInfinity, ExtendedReal::max);
        Ok(best)
    }
}

/// `sup_x ( ¢(x, y) − ℓ0(x) )` over `{0}` and the lattice, i.e. over the
/// lattice points projected onto the unit p-sphere (the coupling is
/// invariant along rays).
pub fn conjugate_by_sup(y: &[f64], p: PExponent, grid: &GridSpec) -> Result<f64> {
    check_dims(grid.dim, y.len())?;
    let best = grid.par_max(|x| capra_coupling(x, y, p) - l0(x) as f64)?;
    // x = 0 contributes ¢(0, y) − ℓ0(0) = 0.
    Ok(best.max(ExtendedReal::Finite(0.0)).to_f64())
}

/// `sup_y ( ¢(x, y) − ℓ0^¢(y) )` over the lattice and `y = 0`.
pub fn biconjugate_by_sup(x: &[f64], p: PExponent, grid: &GridSpec) -> Result<f64> {
    check_dims(grid.dim, x.len())?;
    let best = grid.par_max(|y| capra_coupling(x, y, p) - capra_conjugate(y, p))?;
    Ok(best.max(ExtendedReal::Finite(0.0)).to_f64())
}

/// `max_{|K| ≤ k} ‖y_K‖_q` by enumerating subsets; `k = 0` gives 0.
pub fn coordinate_dual_norm_by_subsets(y: &[f64], k: usize, p: PExponent) -> Result<f64> {
    let d = y.len();
    if d > MAX_ENUMERATION_DIM {
        return Err(Error::BudgetExceeded { cells: 1u128 << d, budget: 1u128 << MAX_ENUMERATION_DIM });
    }
    if k > d {
        return Err(Error::RankOutOfRange { k, d });
    }
    let q = p.conjugate();
    let mut best = 0.0f64;
    for mask in 0u32..(1u32 << d) {
        if mask.count_ones() as usize > k {
            continue;
        }
        let members = (0..d).filter(|i| mask >> i & 1 == 1).map(|i| y[i].abs());
        let norm = if q.is_infinite() {
            members.fold(0.0, f64::max)
        } else {
            let e = q.value();
            members.map(|a| a.powf(e)).sum::<f64>().powf(1.0 / e)
        };
        best = best.max(norm);
    }
    Ok(best)
}

/// `{ l ∈ [0, d] : l ∈ argmax_j (‖y‖_{(j),⋆} − j) }`, ties resolved with
/// [`DEFAULT_TOL`].
pub fn admissible_dual_by_argmax(y: &[f64], p: PExponent) -> Result<BTreeSet<usize>> {
    let values = (0..=y.len())
        .map(|j| Ok(coordinate_dual_norm_by_subsets(y, j, p)? - j as f64))
        .collect::<Result<Vec<f64>>>()?;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = DEFAULT_TOL * max.abs().max(1.0);
    Ok(values.iter().enumerate().filter(|(_, &v)| v >= max - slack).map(|(j, _)| j).collect())
}
