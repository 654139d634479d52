//! Acceptance criteria. Runs without the libtest harness so that the single
//! `[PASS]`/`[FAIL]` line per criterion is always printed; exits nonzero if
//! any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use capra_l0::oracle::{
    admissible_dual_by_argmax, biconjugate_by_sup, conjugate_by_sup, coordinate_dual_norm_by_subsets,
    GridSpec,
};
use capra_l0::{
    build_model, capra_conjugate, capra_coupling, eval_model, in_admissible_dual, l0, lp_norm, osm_falsify,
    region_sweep, sort_abs, subdiff_member, subdiff_witness, top_norm, top_norms, PExponent, Window,
    DEFAULT_TOL,
};
use common::{dual_for, lattice_vec, p, primal, regimes, rng, uniform_vec};
use rand::Rng;

fn report(id: &str, what: &str, ok: bool, detail: String) -> bool {
    println!("[{}] {id} {what}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn ac01_conjugate_matches_grid_oracle() -> bool {
    let start = Instant::now();
    let grid = GridSpec::centered(1.0, 0.01, 2).unwrap();
    let mut rng = rng(101);
    let (mut worst_gap, mut worst_excess, mut cases) = (0.0f64, f64::NEG_INFINITY, 0);
    for pe in [PExponent::ONE, p(1.5), p(2.0), p(3.0), PExponent::INFINITY] {
        for _ in 0..50 {
            let y = uniform_vec(&mut rng, 2, 4.0);
            let closed = capra_conjugate(&y, pe);
            let sup = conjugate_by_sup(&y, pe, &grid).unwrap();
            worst_excess = worst_excess.max(sup - closed);
            worst_gap = worst_gap.max(closed - sup);
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    // The grid sup may touch the closed form exactly; 1e-12 absorbs rounding only.
    let ok = worst_excess <= 1e-12 && worst_gap < 0.02 && elapsed < Duration::from_secs(30);
    report(
        "AC1",
        "closed-form conjugate vs grid sup",
        ok,
        format!("{cases} cases, max gap {worst_gap:.3e}, max excess {worst_excess:.3e}, {elapsed:.2?}"),
    )
}

fn ac02_subdifferential_matches_definition() -> bool {
    let start = Instant::now();
    let mut rng = rng(102);
    let (mut pairs, mut members, mut disagreements) = (0usize, 0usize, Vec::new());
    for pe in regimes() {
        for d in [2usize, 3, 5] {
            for _ in 0..10_000 {
                let x = primal(&mut rng, d, pe);
                let y = dual_for(&mut rng, &x, pe);
                let verdict = subdiff_member(&x, &y, pe, DEFAULT_TOL).member;
                let conj = capra_conjugate(&y, pe);
                let young = capra_coupling(&x, &y, pe) - l0(&x) as f64;
                if verdict != rel_close(young, conj, 1e-9) {
                    disagreements.push((pe, x, y));
                }
                pairs += 1;
                members += usize::from(verdict);
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = disagreements.is_empty() && elapsed < Duration::from_secs(10);
    report(
        "AC2",
        "membership <=> Young equality",
        ok,
        format!(
            "{pairs} pairs ({members} members), {} disagreements {:?}, {elapsed:.2?}",
            disagreements.len(),
            disagreements.first()
        ),
    )
}

fn ac03_biconjugate_closed_forms() -> bool {
    let step = 0.05;
    // p = 1 at (7, −7, 7): maximizer (1, −1, 1); p = ∞ at (2, 1): maximizer (1, 1).
    let cases: [(PExponent, Vec<f64>, f64, Vec<f64>); 2] = [
        (PExponent::ONE, vec![7.0, -7.0, 7.0], 1.0, vec![1.0, -1.0, 1.0]),
        (PExponent::INFINITY, vec![2.0, 1.0], 1.5, vec![1.0, 1.0]),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (pe, x, expected, maximizer) in cases {
        let grid = GridSpec::centered(6.0, step, x.len()).unwrap();
        assert!(maximizer.iter().all(|v| v.abs() <= 6.0));
        assert!(
            (capra_coupling(&x, &maximizer, pe) - capra_conjugate(&maximizer, pe) - expected).abs() < 1e-12
        );
        let sup = biconjugate_by_sup(&x, pe, &grid).unwrap();
        let case_ok = (sup - expected).abs() < 0.05 && sup <= l0(&x) as f64 && sup <= expected + 1e-12;
        ok &= case_ok;
        lines.push(format!("p={pe} x={x:?}: sup {sup:.6} vs {expected}"));
    }
    report("AC3", "biconjugate closed forms", ok, lines.join("; "))
}

fn ac04_capra_convexity_certificate() -> bool {
    let mut rng = rng(104);
    let (mut worst, mut count) = (0.0f64, 0);
    for pe in [p(1.5), p(2.0), p(3.0)] {
        for _ in 0..1000 {
            let x = primal(&mut rng, 4, pe);
            let y = subdiff_witness(&x, pe).unwrap();
            let value = capra_coupling(&x, &y, pe) - capra_conjugate(&y, pe);
            worst = worst.max((value - l0(&x) as f64).abs());
            count += 1;
        }
    }
    report(
        "AC4",
        "witness chain certifies biconjugate = l0",
        worst <= 1e-9,
        format!("{count} points, max |¢(x,y*) − conj(y*) − ℓ0(x)| = {worst:.3e}"),
    )
}

fn ac05_admissible_dual_sets() -> bool {
    let mut rng = rng(105);
    let mut mismatches = Vec::new();
    let mut total = 0;
    for pe in [p(1.5), p(2.0), p(3.0), PExponent::INFINITY, PExponent::ONE] {
        for trial in 0..10_000 {
            let y = if trial % 5 == 0 { lattice_vec(&mut rng, 5) } else { uniform_vec(&mut rng, 5, 3.0) };
            let closed: BTreeSet<usize> =
                (0..=5).filter(|&l| in_admissible_dual(&y, l, pe, DEFAULT_TOL).unwrap()).collect();
            let oracle = admissible_dual_by_argmax(&y, pe).unwrap();
            let mut agree = closed == oracle;
            if pe.is_one() {
                let m = lp_norm(&y, PExponent::INFINITY);
                let rows: BTreeSet<usize> =
                    [(0, m <= 1.0), (1, m >= 1.0)].into_iter().filter(|r| r.1).map(|r| r.0).collect();
                agree &= closed == rows;
            }
            if !agree {
                mismatches.push((pe, y, closed, oracle));
            }
            total += 1;
        }
    }
    report(
        "AC5",
        "D_l closed form vs argmax",
        mismatches.is_empty(),
        format!("{total} vectors, {} mismatches {:?}", mismatches.len(), mismatches.first()),
    )
}

fn ac06_top_norm_subset_oracle() -> bool {
    let mut rng = rng(106);
    let mut worst = 0.0f64;
    for qv in [1.25, 2.0, 4.0] {
        let q = p(qv);
        for _ in 0..1000 {
            let y = uniform_vec(&mut rng, 8, 5.0);
            for k in 0..=8 {
                let sorted = top_norm(&y, k, q).unwrap();
                let brute = coordinate_dual_norm_by_subsets(&y, k, q.conjugate()).unwrap();
                worst = worst.max((sorted - brute).abs());
            }
        }
    }
    report("AC6", "top-(k,q) norm vs subset enumeration", worst <= 1e-12, format!("max |diff| = {worst:.3e}"))
}

fn ac07_planar_region_sweep() -> bool {
    let start = Instant::now();
    let step = 0.05;
    let window = Window::square(-12.0, 12.0);
    let grid = region_sweep(&[1.0, 0.0], PExponent::TWO, window, step, DEFAULT_TOL).unwrap();
    let knee = 1.0 + 2f64.sqrt();
    let (mut checked, mut wrong) = (0, 0);
    for (_, _, y1, y2, member) in grid.cells() {
        if y1 < knee {
            continue;
        }
        let boundary = (2.0 * y1 + 1.0).sqrt();
        if (y2.abs() - boundary).abs() <= step {
            continue;
        }
        checked += 1;
        if member != (y2.abs() <= boundary) {
            wrong += 1;
        }
    }
    // Full-window check against the closed region y1 ≥ 1, |y2| ≤ min(y1, √(2 y1 + 1)).
    let mut wrong_full = 0;
    for (_, _, y1, y2, member) in grid.cells() {
        let bound = y1.min((2.0 * y1 + 1.0).max(0.0).sqrt());
        if (y1 - 1.0).abs() <= step || (y2.abs() - bound).abs() <= step {
            continue;
        }
        if member != (y1 >= 1.0 && y2.abs() <= bound) {
            wrong_full += 1;
        }
    }

    // At x = 0 the region is the closed unit square; decide it on lattice indices.
    let origin = region_sweep(&[0.0, 0.0], PExponent::TWO, window, step, DEFAULT_TOL).unwrap();
    let square_wrong = origin
        .cells()
        .filter(|&(i, j, _, _, member)| {
            let inside = |k: usize| (k as i64 - 240).abs() <= 20;
            member != (inside(i) && inside(j))
        })
        .count();
    let elapsed = start.elapsed();
    let ok = wrong == 0 && wrong_full == 0 && square_wrong == 0 && elapsed < Duration::from_secs(5);
    report(
        "AC7",
        "x=(1,0) parabola region and x=0 square",
        ok,
        format!(
            "{checked} cells beyond the knee, {wrong} wrong; {wrong_full} wrong in full window; \
             {square_wrong} wrong at x=0 ({} members); {elapsed:.2?}",
            origin.member_count()
        ),
    )
}

fn ac08_top_norm_increment_properties() -> bool {
    let mut rng = rng(108);
    let tol = 1e-9;
    let (mut chain, mut forward, mut backward, mut equality) = (0, 0, 0, 0);
    let mut premise_true = 0;
    for _ in 0..100_000 {
        let d = rng.random_range(2..=8);
        let q = p(rng.random_range(1.01..6.0));
        let scale = rng.random_range(0.2..4.0);
        let y = uniform_vec(&mut rng, d, scale);
        let k = rng.random_range(0..d);
        let tops = top_norms(&y, q);
        let next = sort_abs(&y).sorted_abs(&y)[k];
        let qv = q.value();

        let premise = tops[k + 1] - 1.0 <= tops[k];
        premise_true += usize::from(premise);
        if premise && !(1..=d - k).all(|j| tops[k + j] - j as f64 <= tops[k] + tol * tops[k].max(1.0)) {
            chain += 1;
        }
        let lhs = next.powf(qv);
        let rhs = (tops[k] + 1.0).powf(qv) - tops[k].powf(qv);
        if premise && lhs > rhs + tol * rhs.max(1.0) {
            forward += 1;
        }
        if lhs <= rhs && tops[k + 1] - 1.0 > tops[k] + tol * tops[k].max(1.0) {
            backward += 1;
        }
    }

    // Equality case: set |y_ν(k+1)|^q to the threshold exactly.
    let mut equality_cases = 0;
    while equality_cases < 10_000 {
        let d = rng.random_range(2..=8);
        let q = p(rng.random_range(1.01..6.0));
        let k = rng.random_range(0..d);
        let head: Vec<f64> = (0..k).map(|_| rng.random_range(1.01..6.0)).collect();
        let t = top_norm(&head, k, q).unwrap_or(0.0);
        let qv = q.value();
        let v = ((t + 1.0).powf(qv) - t.powf(qv)).powf(1.0 / qv);
        if head.iter().any(|&h| h < v) {
            continue;
        }
        let mut y = head.clone();
        y.push(v);
        y.extend((k + 1..d).map(|_| rng.random_range(0.0..v)));
        let tops = top_norms(&y, q);
        if !rel_close(tops[k + 1] - 1.0, tops[k], 1e-9) {
            equality += 1;
        }
        equality_cases += 1;
    }
    let ok = chain == 0 && forward == 0 && backward == 0 && equality == 0;
    report(
        "AC8",
        "top-norm increment chain and threshold equivalence",
        ok,
        format!(
            "100000 instances ({premise_true} with premise), violations: chain {chain}, \
             threshold => {forward}, threshold <= {backward}, equality {equality}/{equality_cases}"
        ),
    )
}

fn ac09_lower_bound_model() -> bool {
    let pe = PExponent::TWO;
    let snap = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
    let samples: Vec<Vec<f64>> = (0..16)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / 16.0;
            vec![snap(t.cos()), snap(t.sin())]
        })
        .collect();
    let model = build_model(&samples, pe).unwrap();

    let n = 500;
    let (lo, hi) = (-3.0, 3.0);
    let mut above = 0;
    let mut ray_err = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let x = [lo + (hi - lo) * i as f64 / (n - 1) as f64, lo + (hi - lo) * j as f64 / (n - 1) as f64];
            let v = eval_model(&model, &x).unwrap();
            if v > l0(&x) as f64 + 1e-9 {
                above += 1;
            }
            for alpha in [0.5, 2.0, 10.0] {
                let xa = [alpha * x[0], alpha * x[1]];
                ray_err = ray_err.max((eval_model(&model, &xa).unwrap() - v).abs());
            }
        }
    }
    let sample_err =
        samples.iter().map(|x| (eval_model(&model, x).unwrap() - l0(x) as f64).abs()).fold(0.0, f64::max);
    let ok = above == 0 && sample_err <= 1e-9 && ray_err <= 1e-12;
    report(
        "AC9",
        "max-of-Capra-affine lower bound",
        ok,
        format!("{above} grid points above l0, sample error {sample_err:.3e}, ray error {ray_err:.3e}"),
    )
}

fn ac10_orthant_strict_monotonicity_falsifier() -> bool {
    let linf = osm_falsify(PExponent::INFINITY, 2, 1000, 110).unwrap();
    let mut finite = Vec::new();
    for pe in [PExponent::ONE, p(1.5), p(2.0), p(4.0)] {
        for d in [2, 3] {
            finite.push((pe, d, osm_falsify(pe, d, 100_000, 111).unwrap()));
        }
    }
    let ok = linf.is_some() && finite.iter().all(|(_, _, c)| c.is_none());
    report(
        "AC10",
        "OSM falsifier",
        ok,
        format!(
            "l_inf counterexample {:?}; finite-p counterexamples {:?}",
            linf,
            finite.iter().filter(|c| c.2.is_some()).collect::<Vec<_>>()
        ),
    )
}

fn main() {
    let criteria: [fn() -> bool; 10] = [
        ac01_conjugate_matches_grid_oracle,
        ac02_subdifferential_matches_definition,
        ac03_biconjugate_closed_forms,
        ac04_capra_convexity_certificate,
        ac05_admissible_dual_sets,
        ac06_top_norm_subset_oracle,
        ac07_planar_region_sweep,
        ac08_top_norm_increment_properties,
        ac09_lower_bound_model,
        ac10_orthant_strict_monotonicity_falsifier,
    ];
    let failed = criteria.iter().filter(|criterion| !criterion()).count();
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
