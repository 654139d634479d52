//! `capra verify`: closed forms against brute-force oracles on seeded random
//! inputs.
//!
//! Every trial draws from its own ChaCha stream `(suite, trial)`, so reports
//! do not depend on the number of worker threads.

use std::process::ExitCode;

use capra_l0::oracle::{
    admissible_dual_by_argmax, biconjugate_by_sup, conjugate_by_sup, coordinate_dual_norm_by_subsets,
    GridSpec, DEFAULT_GRID_BUDGET, MAX_ENUMERATION_DIM,
};
use capra_l0::{
    capra_biconjugate, capra_conjugate, capra_coupling, in_admissible_dual, in_subdiff_domain, l0, lp_norm,
    subdiff_member, subdiff_witness, top_norm, PExponent, DEFAULT_TOL,
};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::output::{header, num};
use crate::{usage, Failure, PArg};

/// Radius of the primal box searched by the conjugate oracle.
const CONJ_RADIUS: f64 = 1.0;
/// Radius of the dual box searched by the biconjugate oracle; the suite
/// checks an upper bound only, so any radius is sound.
const BICONJ_RADIUS: f64 = 2.0;
/// One biconjugate trial per this many trials (at least one).
const BICONJ_RATIO: usize = 100;

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    p: PArg,
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lattice step of the grid oracles.
    #[arg(long, default_value_t = 0.05)]
    step: f64,
}

struct Outcome {
    name: &'static str,
    passed: usize,
    total: usize,
    first_failure: Option<String>,
}

type Check = Result<Option<String>, capra_l0::Error>;

fn rng(seed: u64, suite: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite << 32 | trial as u64);
    rng
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let m = rng.random_range(lo..hi);
    if rng.random_bool(0.5) {
        m
    } else {
        -m
    }
}

fn uniform(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-radius..radius)).collect()
}

/// Quarter-lattice entries, so ties and exact zeros occur.
fn lattice(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-12i32..=12) as f64 * 0.25).collect()
}

fn random_primal(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let mut x: Vec<f64> =
        (0..d).map(|_| if rng.random_bool(0.7) { signed(rng, 0.1, 3.0) } else { 0.0 }).collect();
    if rng.random_bool(0.1) {
        x.fill(0.0);
    }
    x
}

/// Primal point inside the subdifferential domain of `p`.
fn domain_primal(rng: &mut ChaCha8Rng, d: usize, p: PExponent) -> Vec<f64> {
    let mut x = vec![0.0; d];
    if p.is_one() {
        if rng.random_bool(0.9) {
            x[rng.random_range(0..d)] = signed(rng, 0.1, 3.0);
        }
    } else if p.is_infinite() {
        let lambda = rng.random_range(0.2..5.0);
        for v in x.iter_mut() {
            *v = [-lambda, 0.0, lambda][rng.random_range(0..3)];
        }
    } else {
        x = random_primal(rng, d);
    }
    x
}

/// Dual point either independent of `x` or a perturbed multiple of a
/// subgradient, so both verdicts are common.
fn dual_for(rng: &mut ChaCha8Rng, x: &[f64], p: PExponent) -> Vec<f64> {
    let d = x.len();
    match subdiff_witness(x, p) {
        Ok(w) if l0(x) > 0 && rng.random_bool(0.6) => {
            let s = rng.random_range(0.3..3.0);
            let floor = x
                .iter()
                .zip(&w)
                .filter(|(a, _)| **a != 0.0)
                .map(|(_, b)| s * b.abs())
                .fold(f64::INFINITY, f64::min);
            let c = rng.random_range(0.0..1.4);
            x.iter()
                .zip(&w)
                .map(|(&a, &b)| if a != 0.0 { s * b } else { rng.random_range(-1.0..1.0) * c * floor })
                .collect()
        }
        _ => (0..d).map(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random_range(-4.0..4.0) }).collect(),
    }
}

fn young_equality(x: &[f64], y: &[f64], p: PExponent) -> bool {
    let conj = capra_conjugate(y, p);
    let young = capra_coupling(x, y, p) - l0(x) as f64;
    (young - conj).abs() <= DEFAULT_TOL * conj.abs().max(1.0)
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|&a| num(a)).collect::<Vec<_>>().join(",")
}

fn suite<F>(
    name: &'static str,
    id: u64,
    trials: usize,
    seed: u64,
    parallel: bool,
    f: F,
) -> Result<Outcome, Failure>
where
    F: Fn(&mut ChaCha8Rng) -> Check + Sync,
{
    let run = |t: usize| f(&mut rng(seed, id, t));
    let results: Vec<Check> = if parallel {
        (0..trials).into_par_iter().map(run).collect()
    } else {
        (0..trials).map(run).collect()
    };
    let mut outcome = Outcome { name, passed: 0, total: trials, first_failure: None };
    for r in results {
        match r? {
            None => outcome.passed += 1,
            Some(msg) => {
                outcome.first_failure.get_or_insert(msg);
            }
        }
    }
    Ok(outcome)
}

pub fn run(args: &VerifyArgs) -> Result<ExitCode, Failure> {
    let p = args.p.get()?;
    let (d, trials, seed, step) = (args.dim, args.trials, args.seed, args.step);
    if d == 0 || trials == 0 {
        return Err(usage("--dim and --trials must be at least 1".into()));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(usage(format!("--step must be positive, got {step}")));
    }
    let conj_grid = GridSpec::centered(CONJ_RADIUS, step, d)?;
    let biconj_grid = GridSpec::centered(BICONJ_RADIUS, step, d)?;
    // Fail on budget before any work is done.
    for grid in [&conj_grid, &biconj_grid] {
        if grid.cell_count() > DEFAULT_GRID_BUDGET {
            return Err(capra_l0::Error::BudgetExceeded {
                cells: grid.cell_count(),
                budget: DEFAULT_GRID_BUDGET,
            }
            .into());
        }
    }
    if d > MAX_ENUMERATION_DIM {
        return Err(
            capra_l0::Error::BudgetExceeded { cells: 1 << d, budget: 1 << MAX_ENUMERATION_DIM }.into()
        );
    }
    let q = p.conjugate();

    let mut outcomes = vec![
        suite("top-norm-subsets", 1, trials, seed, true, |rng| {
            let y = uniform(rng, d, 5.0);
            for k in 0..=d {
                let sorted = top_norm(&y, k, q)?;
                let brute = coordinate_dual_norm_by_subsets(&y, k, p)?;
                if (sorted - brute).abs() > 1e-12 * brute.max(1.0) {
                    return Ok(Some(format!("y={} k={k}: {sorted} vs {brute}", fmt_vec(&y))));
                }
            }
            Ok(None)
        })?,
        suite("admissible-dual-argmax", 2, trials, seed, true, |rng| {
            let y = if rng.random_bool(0.2) { lattice(rng, d) } else { uniform(rng, d, 3.0) };
            let oracle = admissible_dual_by_argmax(&y, p)?;
            let closed = (0..=d)
                .map(|l| Ok((l, in_admissible_dual(&y, l, p, DEFAULT_TOL)?)))
                .collect::<Result<Vec<_>, capra_l0::Error>>()?;
            let closed: std::collections::BTreeSet<usize> =
                closed.into_iter().filter(|c| c.1).map(|c| c.0).collect();
            Ok((closed != oracle).then(|| format!("y={}: {closed:?} vs {oracle:?}", fmt_vec(&y))))
        })?,
        suite("conjugate-grid-oracle", 3, trials, seed, false, |rng| {
            let y = uniform(rng, d, 4.0);
            let closed = capra_conjugate(&y, p);
            let sup = conjugate_by_sup(&y, p, &conj_grid)?;
            // The lattice misses the maximizer by at most a step per axis.
            let gap_bound = step * d as f64 * lp_norm(&y, PExponent::INFINITY).max(1.0);
            let ok = sup <= closed + 1e-12 * closed.max(1.0) && closed - sup <= gap_bound;
            Ok((!ok).then(|| format!("y={}: sup {sup} vs closed {closed}", fmt_vec(&y))))
        })?,
        suite("subdiff-definition", 4, trials, seed, true, |rng| {
            let x = if rng.random_bool(0.5) { domain_primal(rng, d, p) } else { random_primal(rng, d) };
            let y = dual_for(rng, &x, p);
            let verdict = subdiff_member(&x, &y, p, DEFAULT_TOL).member;
            Ok((verdict != young_equality(&x, &y, p))
                .then(|| format!("x={} y={}: verdict {verdict}", fmt_vec(&x), fmt_vec(&y))))
        })?,
        suite("witness-certificate", 5, trials, seed, true, |rng| {
            let x = domain_primal(rng, d, p);
            let y = subdiff_witness(&x, p)?;
            let ok = subdiff_member(&x, &y, p, DEFAULT_TOL).member && young_equality(&x, &y, p);
            Ok((!ok).then(|| format!("x={} y*={}", fmt_vec(&x), fmt_vec(&y))))
        })?,
        suite("biconjugate-grid-oracle", 6, trials.div_ceil(BICONJ_RATIO), seed, false, |rng| {
            let x = random_primal(rng, d);
            let closed = capra_biconjugate(&x, p);
            let sup = biconjugate_by_sup(&x, p, &biconj_grid)?;
            let ok = sup <= closed + 1e-12 && closed <= l0(&x) as f64 + 1e-12;
            Ok((!ok).then(|| format!("x={}: sup {sup} vs closed {closed}", fmt_vec(&x))))
        })?,
    ];

    if p.is_one() && d >= 2 {
        outcomes.push(suite("l1-empty-subdifferential", 7, trials, seed, true, |rng| {
            let mut x = random_primal(rng, d);
            x[0] = signed(rng, 0.1, 3.0);
            x[1] = signed(rng, 0.1, 3.0);
            let y = uniform(rng, d, 4.0);
            let gap = capra_conjugate(&y, p) - (capra_coupling(&x, &y, p) - l0(&x) as f64);
            let ok = !in_subdiff_domain(&x, p)
                && subdiff_witness(&x, p).is_err()
                && !subdiff_member(&x, &y, p, DEFAULT_TOL).member
                && gap >= 1.0 - DEFAULT_TOL;
            Ok((!ok).then(|| format!("x={} y={}", fmt_vec(&x), fmt_vec(&y))))
        })?);
    }
    if p.is_infinite() && d >= 2 {
        outcomes.push(suite("linf-domain-lattice", 8, trials, seed, true, |rng| {
            let lambda = rng.random_range(0.2..5.0);
            let mut x: Vec<f64> = (0..d).map(|_| [-lambda, 0.0, lambda][rng.random_range(0..3)]).collect();
            x[0] = lambda;
            let on = in_subdiff_domain(&x, p) && subdiff_witness(&x, p).is_ok();
            x[1] = signed(rng, 1.1, 2.0) * lambda;
            let y = dual_for(rng, &x, p);
            let off = !in_subdiff_domain(&x, p)
                && !subdiff_member(&x, &y, p, DEFAULT_TOL).member
                && !young_equality(&x, &y, p);
            Ok((!(on && off)).then(|| format!("x={} y={}", fmt_vec(&x), fmt_vec(&y))))
        })?);
    }

    println!(
        "# {}",
        header(&[
            ("command", "verify".into()),
            ("p", p.to_string()),
            ("dim", d.to_string()),
            ("trials", trials.to_string()),
            ("seed", seed.to_string()),
            ("step", num(step)),
            ("tol", num(DEFAULT_TOL)),
        ])
    );
    let mut all = true;
    for o in &outcomes {
        let ok = o.passed == o.total;
        all &= ok;
        println!("{:<26} {:>7}/{:<7} {}", o.name, o.passed, o.total, if ok { "PASS" } else { "FAIL" });
        if let Some(msg) = &o.first_failure {
            println!("  first failure: {msg}");
        }
    }
    println!("{}", if all { "ALL PASS" } else { "FAILURES" });
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(3) })
}
