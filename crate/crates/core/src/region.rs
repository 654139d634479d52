//! Two-dimensional sweeps of the Capra-subdifferential over a lattice of dual points.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::norms::PExponent;
use crate::subdiff::{class_representative, subdiff_member};

/// Largest number of lattice cells a single sweep may evaluate.
pub const MAX_REGION_CELLS: usize = 25_000_000;

/// Axis-aligned rectangle `[lo1, hi1] × [lo2, hi2]` in the dual plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub lo1: f64,
    pub hi1: f64,
    pub lo2: f64,
    pub hi2: f64,
}

impl Window {
    pub fn square(lo: f64, hi: f64) -> Self {
        Window { lo1: lo, hi1: hi, lo2: lo, hi2: hi }
    }
}

/// Number of lattice points `lo + i·step` lying in `[lo, hi]`.
fn axis_len(lo: f64, hi: f64, step: f64) -> usize {
    ((hi - lo) / step + 1e-9).floor() as usize + 1
}

/// Membership flags on the lattice `(lo1 + i·step, lo2 + j·step)`.
///
/// Storage is row-major with `j` (the `y2` axis) as the outer index, both
/// axes ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionGrid {
    pub window: Window,
    pub step: f64,
    pub n1: usize,
    pub n2: usize,
    pub member: Vec<bool>,
    /// Bit `l` is set when the cell lies in `∂ℓ0(x)` for some `x` with `ℓ0(x) = l`.
    pub classes: Option<Vec<u8>>,
}

impl RegionGrid {
    pub fn coord(&self, i: usize, j: usize) -> (f64, f64) {
        (self.window.lo1 + i as f64 * self.step, self.window.lo2 + j as f64 * self.step)
    }

    pub fn is_member(&self, i: usize, j: usize) -> bool {
        self.member[j * self.n1 + i]
    }

    pub fn cell_count(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn member_count(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    /// `(i, j, y1, y2, flag)` for every cell, in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, f64, f64, bool)> + '_ {
        (0..self.n2).flat_map(move |j| {
            (0..self.n1).map(move |i| {
                let (a, b) = self.coord(i, j);
                (i, j, a, b, self.is_member(i, j))
            })
        })
    }
}

fn lattice(window: Window, step: f64) -> Result<(usize, usize)> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
    }
    let ok = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && lo < hi;
    if !ok(window.lo1, window.hi1) || !ok(window.lo2, window.hi2) {
        return Err(Error::InvalidGrid("window bounds must satisfy lo < hi".into()));
    }
    let n1 = axis_len(window.lo1, window.hi1, step);
    let n2 = axis_len(window.lo2, window.hi2, step);
    let cells = n1 as u128 * n2 as u128;
    if cells > MAX_REGION_CELLS as u128 {
        return Err(Error::BudgetExceeded { cells, budget: MAX_REGION_CELLS as u128 });
    }
    Ok((n1, n2))
}

fn sweep<T, F>(window: Window, step: f64, n1: usize, n2: usize, f: F) -> Vec<T>
where
    T: Send + Default + Clone,
    F: Fn(&[f64; 2]) -> T + Sync,
{
    let mut out = vec![T::default(); n1 * n2];
    out.par_chunks_mut(n1).enumerate().for_each(|(j, row)| {
        let y2 = window.lo2 + j as f64 * step;
        for (i, cell) in row.iter_mut().enumerate() {
            *cell = f(&[window.lo1 + i as f64 * step, y2]);
        }
    });
    out
}

/// Evaluates `y ∈ ∂_¢ ℓ0(x)` on every lattice point of `window`.
pub fn region_sweep(x: &[f64], p: PExponent, window: Window, step: f64, tol: f64) -> Result<RegionGrid> {
    if x.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: x.len() });
    }
    let (n1, n2) = lattice(window, step)?;
    let member = sweep(window, step, n1, n2, |y| subdiff_member(x, y, p, tol).member);
    Ok(RegionGrid { window, step, n1, n2, member, classes: None })
}

/// Union of `∂_¢ ℓ0(x)` over all `x ∈ ℝ²`, labelled by `ℓ0(x) ∈ {0, 1, 2}`.
///
/// Each class is decided exactly through its canonical primal point rather
/// than by sampling primal directions.
pub fn region_sweep_all_classes(p: PExponent, window: Window, step: f64, tol: f64) -> Result<RegionGrid> {
    let (n1, n2) = lattice(window, step)?;
    let classes = sweep(window, step, n1, n2, |y| {
        (0..=2usize).fold(0u8, |mask, l| match class_representative(y, l, p) {
            Some(x) if subdiff_member(&x, y, p, tol).member => mask | (1 << l),
            _ => mask,
        })
    });
    let member = classes.iter().map(|&m| m != 0).collect();
    Ok(RegionGrid { window, step, n1, n2, member, classes: Some(classes) })
}
