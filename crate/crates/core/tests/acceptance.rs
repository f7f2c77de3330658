//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use uncertainty_core::bounds::{
    hr_bound, mp_combined_bound, mp_sum_bound_aplusb, mp_sum_bound_perp, schroedinger_bound, two_state_sum_bound_signed,
};
use uncertainty_core::experiments::{
    run_figure1, run_saturation, run_verification, write_curves_csv, write_samples_csv, CampaignConfig, Execution,
};
use uncertainty_core::linalg::{inner, lincomb, norm};
use uncertainty_core::perp::{prescribed_perp, random_perp, select_sign};
use uncertainty_core::quantum::{deviation_vector, variance, HermitianOperator, StateVector};
use uncertainty_core::random::{haar_unitary, random_hermitian, random_state, SeededRng};
use uncertainty_core::{CMatrix, C64};

const PHI_STEPS: usize = 200;
const PERP_SAMPLES: usize = 20;
const FIGURE1_SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let data = run_figure1(PHI_STEPS, PERP_SAMPLES, FIGURE1_SEED).expect("figure1 runs");
    let elapsed = start.elapsed();
    let worst = data.rows.iter().map(|r| (r.sum_var - 1.0).abs()).fold(0.0, f64::max);
    outcome(
        worst < 1e-12 && elapsed < Duration::from_secs(5) && data.rows.len() == PHI_STEPS,
        format!("max |sum_var - 1| = {worst:.3e} over {} rows, {:.2} s", data.rows.len(), secs(elapsed)),
    )
}

fn criterion_2() -> Outcome {
    let trivial = |phi: f64| {
        let data = run_figure1_point(phi);
        (data.0, data.1)
    };
    let (hr_a, prod_a) = trivial(PI / 4.0);
    let (hr_b, prod_b) = trivial(3.0 * PI / 4.0);
    let data = run_figure1(PHI_STEPS, 1, FIGURE1_SEED).expect("figure1 runs");
    let coincide = data.rows.iter().map(|r| (r.hr - r.prod_var).abs()).fold(0.0, f64::max);
    let worst_trivial = [hr_a, prod_a, hr_b, prod_b].into_iter().fold(0.0, f64::max);
    outcome(
        worst_trivial < 1e-12 && coincide < 1e-12,
        format!("hr, prod_var at pi/4 and 3pi/4 <= {worst_trivial:.3e}; max |hr - prod_var| = {coincide:.3e}"),
    )
}

/// `(hr, prod_var)` for `J_x, J_y` on `cos φ|+⟩ + sin φ|−⟩`.
fn run_figure1_point(phi: f64) -> (f64, f64) {
    let s = uncertainty_core::spin::spin_operators(2).unwrap();
    let psi = uncertainty_core::spin::figure1_state(phi);
    let prod = variance(&s.jx, &psi).unwrap() * variance(&s.jy, &psi).unwrap();
    (hr_bound(&s.jx, &s.jy, &psi).unwrap(), prod)
}

fn criterion_3() -> Outcome {
    let data = run_figure1(PHI_STEPS, 1, FIGURE1_SEED).expect("figure1 runs");
    let mut worst: f64 = 0.0;
    for r in &data.rows {
        let s2 = (2.0 * r.phi).sin();
        let c2 = (2.0 * r.phi).cos();
        worst = worst
            .max((r.var_jx - (1.0 + s2) / 2.0).abs())
            .max((r.var_jy - (1.0 - s2) / 2.0).abs())
            .max((r.hr - c2 * c2 / 4.0).abs())
            .max((r.eq4 - 0.5).abs());
    }
    outcome(worst < 1e-12, format!("max deviation from closed forms = {worst:.3e}"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let data = run_figure1(PHI_STEPS, PERP_SAMPLES, FIGURE1_SEED).expect("figure1 runs");
    let elapsed = start.elapsed();
    let total = data.samples.len();
    let above = data.samples.iter().filter(|s| s.eq3_value > s.weak_sum + 1e-9).count();
    let fraction = above as f64 / total as f64;
    outcome(
        total == 4000 && fraction >= 0.99 && elapsed < Duration::from_secs(10),
        format!("{above}/{total} samples above the weak bound (fraction {fraction:.4}), {:.2} s", secs(elapsed)),
    )
}

const REQUIRED_CHECKS: &[&str] = &[
    "eq1_hr",
    "eq2_schroedinger",
    "eq3",
    "eq4",
    "eq5",
    "eq6_amended_hr",
    "a3_triple_max",
    "d4_two_state",
    "holevo",
    "weak_sum",
    "parallelogram",
    "p3_identity",
    "d9_mixed",
];

fn criterion_5() -> Outcome {
    let cfg = CampaignConfig::default();
    let start = Instant::now();
    let report = run_verification(&cfg, Execution::Parallel);
    let elapsed = start.elapsed();
    let missing: Vec<&str> = REQUIRED_CHECKS.iter().copied().filter(|n| report.check(n).is_none()).collect();
    let expected_trials = (cfg.dims.len() * cfg.trials) as u64;
    let short: Vec<String> = REQUIRED_CHECKS
        .iter()
        .filter_map(|n| report.check(n))
        .filter(|c| c.trials < expected_trials * 9 / 10)
        .map(|c| format!("{}={}", c.name, c.trials))
        .collect();
    let violations = report.total_violations();
    let skipped: u64 = report.skipped.values().sum();
    outcome(
        missing.is_empty() && short.is_empty() && violations == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{} checks, {violations} violations, {skipped} skips, missing {missing:?}, under-sampled {short:?}, {:.2} s",
            report.checks.len(),
            secs(elapsed)
        ),
    )
}

fn criterion_6() -> Outcome {
    let cfg = CampaignConfig::default();
    let report = run_saturation(&cfg, Execution::Parallel);
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["eq3_saturation", "eq6_saturation"] {
        match report.check(name) {
            Some(c) => {
                let max = c.max_violation.unwrap_or(f64::INFINITY);
                pass &= max < 1e-9 && c.trials >= 1000 * cfg.dims.len() as u64 * 9 / 10 && c.passes == c.trials;
                parts.push(format!("{name}: max residual {max:.3e} over {} trials", c.trials));
            }
            None => {
                pass = false;
                parts.push(format!("{name}: missing"));
            }
        }
    }
    parts.push(format!("skipped {:?}", report.skipped));
    outcome(pass, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let mut rng = SeededRng::new(2718);
    let mut worst_eq4: f64 = 0.0;
    let mut worst_eq3: f64 = 0.0;
    let mut cases = 0;
    for dim in [2usize, 3, 4, 8] {
        for _ in 0..25 {
            let a = random_hermitian(dim, &mut rng).unwrap();
            let b = random_hermitian(dim, &mut rng).unwrap();
            let diff = a.sub(&b).unwrap();
            let eig = diff.eigen();
            for k in 0..dim {
                let psi = StateVector::normalize(eig.vectors[k].clone()).unwrap();
                let sum = variance(&a, &psi).unwrap() + variance(&b, &psi).unwrap();
                worst_eq4 = worst_eq4.max((sum - mp_sum_bound_aplusb(&a, &b, &psi).unwrap()).abs());
            }

            let psi = random_state(dim, &mut rng).unwrap();
            let sum = variance(&a, &psi).unwrap() + variance(&b, &psi).unwrap();
            let sign = select_sign(&a, &b, &psi).unwrap();
            let (_, cv) = deviation_vector(&a, &psi).unwrap();
            let (_, dv) = deviation_vector(&b, &psi).unwrap();
            // (A − s·iB − ⟨A − s·iB⟩)|ψ⟩ is already orthogonal to |ψ⟩
            let v = lincomb(C64::new(1.0, 0.0), &cv, C64::new(0.0, -sign.value()), &dv);
            let perp = StateVector::normalize(v).unwrap();
            worst_eq3 = worst_eq3.max((sum - mp_sum_bound_perp(&a, &b, &psi, &perp, sign).unwrap()).abs());
            cases += 1;
        }
    }
    outcome(
        worst_eq4 < 1e-9 && worst_eq3 < 1e-9,
        format!("{cases} instances: max eq4 residual on eigenstates of A-B {worst_eq4:.3e}, max eq3 residual {worst_eq3:.3e}"),
    )
}

/// Observable with `U e₀` as an eigenvector.
fn observable_with_eigenvector(dim: usize, rng: &mut SeededRng) -> (HermitianOperator, StateVector) {
    let u = haar_unitary(dim, rng).unwrap();
    let diag: Vec<f64> = (0..dim).map(|_| 4.0 * rng.uniform() - 2.0).collect();
    let m = u.matmul(&CMatrix::from_real_diagonal(&diag)).unwrap().matmul(&u.adjoint()).unwrap();
    // symmetrize away rounding
    let h = m.add(&m.adjoint()).unwrap().scale(C64::new(0.5, 0.0));
    (HermitianOperator::new(h).unwrap(), StateVector::normalize(u.column(0)).unwrap())
}

fn criterion_8() -> Outcome {
    let mut rng = SeededRng::new(31415);
    let mut worst_product: f64 = 0.0;
    let mut min_combined = f64::INFINITY;
    for case in 0..100 {
        let dim = [2usize, 3, 4, 8][case % 4];
        let (eigen_op, psi) = observable_with_eigenvector(dim, &mut rng);
        let other = random_hermitian(dim, &mut rng).unwrap();
        let (a, b) = if case < 50 { (eigen_op, other) } else { (other, eigen_op) };
        let perp = prescribed_perp(&a, &b, &psi).unwrap();
        let sign = select_sign(&a, &b, &psi).unwrap();
        worst_product =
            worst_product.max(hr_bound(&a, &b, &psi).unwrap()).max(schroedinger_bound(&a, &b, &psi).unwrap());
        min_combined = min_combined.min(mp_combined_bound(&a, &b, &psi, &perp, sign).unwrap().0);
    }
    outcome(
        worst_product < 1e-12 && min_combined > 1e-6,
        format!("100 cases: max(hr, schroedinger) = {worst_product:.3e}, min combined bound = {min_combined:.3e}"),
    )
}

fn criterion_9() -> Outcome {
    let alphas = [1e-2, 1e-3, 1e-4];
    let mut rng = SeededRng::new(1618);
    let mut pass = true;
    let mut worst_ratio: f64 = 0.0;
    let mut last_errors = Vec::new();
    for dim in [2usize, 3, 4, 8] {
        for _ in 0..5 {
            let a = random_hermitian(dim, &mut rng).unwrap();
            let b = random_hermitian(dim, &mut rng).unwrap();
            let psi = random_state(dim, &mut rng).unwrap();
            let sign = select_sign(&a, &b, &psi).unwrap();
            let raw = random_perp(&psi, &mut rng).unwrap();
            // rotate ψ⊥ so that ⟨ψ|A + s·iB|ψ⊥⟩ is real; the limit of the
            // two-state bound only sees the real part of this element
            let ap = a.apply(raw.amplitudes()).unwrap();
            let bp = b.apply(raw.amplitudes()).unwrap();
            let m = inner(psi.amplitudes(), &lincomb(C64::new(1.0, 0.0), &ap, C64::new(0.0, sign.value()), &bp));
            let perp = raw.with_phase(-m.arg());
            let target = mp_sum_bound_perp(&a, &b, &psi, &perp, sign).unwrap();

            let errors: Vec<f64> = alphas
                .iter()
                .map(|&alpha| {
                    let v = lincomb(C64::new(1.0, 0.0), psi.amplitudes(), C64::new(alpha, 0.0), perp.amplitudes());
                    let psi_prime = StateVector::normalize(v).unwrap();
                    (two_state_sum_bound_signed(&a, &b, &psi, &psi_prime, sign).unwrap() - target).abs()
                })
                .collect();
            for w in errors.windows(2) {
                let ratio = w[1] / w[0];
                worst_ratio = worst_ratio.max(ratio);
                // α shrinks tenfold per step; allow slack on the constant
                pass &= ratio <= 0.15;
            }
            debug_assert!(norm(perp.amplitudes()) > 0.0);
            last_errors = errors;
        }
    }
    outcome(
        pass,
        format!(
            "20 instances, worst error ratio per tenfold alpha step {worst_ratio:.4}; last errors {}",
            fmt_errors(&last_errors)
        ),
    )
}

fn fmt_errors(errors: &[f64]) -> String {
    errors.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", ")
}

fn criterion_10() -> Outcome {
    let csv_bytes = || {
        let data = run_figure1(PHI_STEPS, PERP_SAMPLES, FIGURE1_SEED).unwrap();
        let mut curves = Vec::new();
        write_curves_csv(&data.rows, &mut curves).unwrap();
        let mut samples = Vec::new();
        write_samples_csv(&data.samples, &mut samples).unwrap();
        (curves, samples)
    };
    let identical_csv = csv_bytes() == csv_bytes();

    let cfg = CampaignConfig { trials: 200, ..Default::default() };
    let serial = run_verification(&cfg, Execution::Serial).to_json_string();
    let parallel = run_verification(&cfg, Execution::Parallel).to_json_string();
    let identical_reports = serial == parallel;
    outcome(
        identical_csv && identical_reports,
        format!("figure1 CSV byte-identical: {identical_csv}; serial and parallel verify reports identical: {identical_reports}"),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "sum of variances constant on the spin-1 family", criterion_1),
        (2, "trivial product bound at pi/4 and 3pi/4", criterion_2),
        (3, "closed forms along the sweep", criterion_3),
        (4, "random-perp sum bound dominates the weak bound", criterion_4),
        (5, "inequality fuzz campaign", criterion_5),
        (6, "saturation campaign", criterion_6),
        (7, "equality conditions", criterion_7),
        (8, "nontrivial bounds on eigenstates", criterion_8),
        (9, "two-state bound limit", criterion_9),
        (10, "determinism", criterion_10),
    ];
    let mut failures = 0;
    for (n, title, run) in criteria {
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {status}  {title}: {}", o.detail);
        if !o.pass {
            failures += 1;
        }
    }
    println!("acceptance: {}/10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
