//! Spin-1 φ sweep, randomized verification and saturation campaigns, and
//! their file formats.
//!
//! The sweep evaluates `A = J_x`, `B = J_y` (spin 1) on
//! `|ψ(φ)⟩ = cos φ|+⟩ + sin φ|−⟩` at `φ_k = kπ/(N−1)`, `k = 0..N−1`, i.e.
//! the closed interval `[0, π]`, plus a number of sum-bound evaluations per
//! `φ` at Haar-random `|ψ⊥⟩`. Sample `(k, j)` draws from
//! `SeededRng::new(seed).substream(k).substream(j)`.
//!
//! Campaign trial `t` at dimension `d` draws from
//! `SeededRng::new(seed).substream(d).substream(t)`, so the serial and the
//! parallel executions produce the same report.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::bounds::{
    amended_hr_bound, amended_hr_denominator, holevo_bound, hr_bound, mixed_sum_bound, mixed_sum_of_variances,
    mp_combined_bound, mp_sum_bound_aplusb, mp_sum_bound_perp, mp_triple_max_bound, parallelogram_sides,
    schroedinger_bound, skew_deviation_sides, two_state_sum_bound, weak_sum_bound,
};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::perp::{optimal_perp_product, optimal_perp_sum, random_perp, select_sign, SignChoice, SignMode};
use crate::quantum::{commutator_mean, project_out, variance, DensityMatrix};
use crate::random::{random_hermitian, random_state, SeededRng};
use crate::spin::{figure1_state, spin_operators};

/// One `φ` of the deterministic sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure1Row {
    pub phi: f64,
    pub var_jx: f64,
    pub var_jy: f64,
    pub sum_var: f64,
    pub prod_var: f64,
    pub hr: f64,
    pub schroedinger: f64,
    pub eq4: f64,
    pub triple_max: f64,
}

/// One sum-bound evaluation at a random `|ψ⊥⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eq3SampleRow {
    pub phi: f64,
    pub sample_index: usize,
    pub eq3_value: f64,
    pub sign: SignChoice,
    /// `|⟨[J_x, J_y]⟩|` at this `φ`; not written to CSV.
    #[serde(skip)]
    pub weak_sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Data {
    pub rows: Vec<Figure1Row>,
    pub samples: Vec<Eq3SampleRow>,
}

pub fn sweep_angle(k: usize, phi_steps: usize) -> f64 {
    k as f64 * PI / (phi_steps - 1) as f64
}

pub fn run_figure1(phi_steps: usize, perp_samples: usize, seed: u64) -> Result<Figure1Data> {
    if phi_steps < 2 {
        return Err(Error::InvalidArgument(format!("phi_steps = {phi_steps}, need at least 2")));
    }
    if perp_samples < 1 {
        return Err(Error::InvalidArgument("perp_samples must be at least 1".into()));
    }
    let spin = spin_operators(2)?;
    let (jx, jy) = (&spin.jx, &spin.jy);
    let root = SeededRng::new(seed);
    let mut rows = Vec::with_capacity(phi_steps);
    let mut samples = Vec::with_capacity(phi_steps * perp_samples);

    for k in 0..phi_steps {
        let phi = sweep_angle(k, phi_steps);
        let psi = figure1_state(phi);
        let var_jx = variance(jx, &psi)?;
        let var_jy = variance(jy, &psi)?;
        rows.push(Figure1Row {
            phi,
            var_jx,
            var_jy,
            sum_var: var_jx + var_jy,
            prod_var: var_jx * var_jy,
            hr: hr_bound(jx, jy, &psi)?,
            schroedinger: schroedinger_bound(jx, jy, &psi)?,
            eq4: mp_sum_bound_aplusb(jx, jy, &psi)?,
            triple_max: mp_triple_max_bound(jx, jy, &psi)?,
        });

        let sign = select_sign(jx, jy, &psi)?;
        let weak_sum = weak_sum_bound(jx, jy, &psi)?;
        let phi_rng = root.substream(k as u64);
        for j in 0..perp_samples {
            let mut rng = phi_rng.substream(j as u64);
            let perp = random_perp(&psi, &mut rng)?;
            samples.push(Eq3SampleRow {
                phi,
                sample_index: j,
                eq3_value: mp_sum_bound_perp(jx, jy, &psi, &perp, sign)?,
                sign,
                weak_sum,
            });
        }
    }
    Ok(Figure1Data { rows, samples })
}

/// C-style `%.17g`: 17 significant digits, trailing zeros removed,
/// exponent form outside `[1e-4, 1e17)`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CURVES_HEADER: &str = "phi,var_jx,var_jy,sum_var,prod_var,hr,schroedinger,eq4,triple_max";
pub const SAMPLES_HEADER: &str = "phi,sample_index,eq3_value,sign";

pub fn write_curves_csv<W: Write>(rows: &[Figure1Row], mut out: W) -> io::Result<()> {
    writeln!(out, "{CURVES_HEADER}")?;
    for r in rows {
        let fields = [r.phi, r.var_jx, r.var_jy, r.sum_var, r.prod_var, r.hr, r.schroedinger, r.eq4, r.triple_max];
        let line: Vec<String> = fields.iter().map(|&v| format_g17(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_samples_csv<W: Write>(samples: &[Eq3SampleRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SAMPLES_HEADER}")?;
    for s in samples {
        writeln!(out, "{},{},{},{}", format_g17(s.phi), s.sample_index, format_g17(s.eq3_value), s.sign.symbol())?;
    }
    Ok(())
}

/// gnuplot script drawing `curves.csv` and `eq3_samples.csv` from the same
/// directory.
pub fn plot_script(phi_steps: usize, perp_samples: usize, seed: u64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# J_x, J_y for spin 1 on cos(phi)|+> + sin(phi)|->");
    let _ = writeln!(s, "# phi sweep: {phi_steps} points uniformly on [0, pi] inclusive; {perp_samples} random perp states per point; seed {seed}");
    let _ = writeln!(s, "# usage: gnuplot plot.gp   (writes figure1.png)");
    s.push_str(
        r#"set datafile separator ','
set terminal pngcairo size 900,600
set output 'figure1.png'
set xlabel 'phi'
set ylabel 'uncertainty'
set xrange [0:pi]
set yrange [-0.05:1.1]
set key top right
plot 'eq3_samples.csv' using 1:3 every ::1 with points pt 7 ps 0.3 lc rgb 'black' title 'sum bound at random perp', \
     'curves.csv' using 1:4 every ::1 with lines lw 2 lc rgb 'blue' title 'Var(Jx) + Var(Jy)', \
     'curves.csv' using 1:5 every ::1 with lines lw 2 lc rgb 'red' title 'Var(Jx) Var(Jy)', \
     'curves.csv' using 1:6 every ::1 with points pt 6 ps 0.5 lc rgb 'orange' title '|<[Jx,Jy]>/2|^2', \
     'curves.csv' using 1:8 every ::1 with lines dt 4 lw 2 lc rgb 'dark-green' title 'Var(Jx+Jy)/2'
"#,
    );
    s
}

/// Writes `curves.csv`, `eq3_samples.csv` and `plot.gp` into `dir`.
pub fn write_figure1(
    data: &Figure1Data,
    dir: &Path,
    phi_steps: usize,
    perp_samples: usize,
    seed: u64,
) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut curves = Vec::new();
    write_curves_csv(&data.rows, &mut curves)?;
    std::fs::write(dir.join("curves.csv"), curves)?;
    let mut samples = Vec::new();
    write_samples_csv(&data.samples, &mut samples)?;
    std::fs::write(dir.join("eq3_samples.csv"), samples)?;
    std::fs::write(dir.join("plot.gp"), plot_script(phi_steps, perp_samples, seed))?;
    Ok(())
}

/// Campaign parameters, echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self { dims: vec![2, 3, 4, 8], trials: 1000, seed: 7, tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Excess is `RHS − LHS` of `LHS ≥ RHS`; judged against the campaign tolerance.
    Inequality,
    /// Excess is `|LHS − RHS|`; judged against `min(tol, identity tolerance)`
    /// in verification and against `tol` in saturation.
    Identity,
}

/// Aggregate over all trials of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckStats {
    pub name: String,
    pub kind: CheckKind,
    pub trials: u64,
    pub passes: u64,
    pub max_violation: Option<f64>,
    pub worst_case_seed: Option<u64>,
    pub worst_case_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub campaign: String,
    pub config: CampaignConfig,
    pub checks: Vec<CheckStats>,
    /// Trials or checks not evaluated, by reason code.
    pub skipped: BTreeMap<String, u64>,
}

impl CampaignReport {
    pub fn total_violations(&self) -> u64 {
        self.checks.iter().map(|c| c.trials - c.passes).sum()
    }

    pub fn check(&self, name: &str) -> Option<&CheckStats> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Flat JSON object; keys are `config.*`, `<check>.<field>`,
    /// `skipped.<reason>`, `campaign` and `total_violations`, sorted.
    pub fn to_flat_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("campaign".into(), Value::from(self.campaign.clone()));
        m.insert("config.dims".into(), Value::from(self.config.dims.clone()));
        m.insert("config.trials".into(), Value::from(self.config.trials));
        m.insert("config.seed".into(), Value::from(self.config.seed));
        m.insert("config.tol".into(), Value::from(self.config.tol));
        m.insert("total_violations".into(), Value::from(self.total_violations()));
        for c in &self.checks {
            let key = |field: &str| format!("{}.{field}", c.name);
            m.insert(key("kind"), serde_json::to_value(c.kind).expect("enum serializes"));
            m.insert(key("trials"), Value::from(c.trials));
            m.insert(key("passes"), Value::from(c.passes));
            m.insert(key("max_violation"), c.max_violation.map_or(Value::Null, Value::from));
            m.insert(key("worst_case_seed"), c.worst_case_seed.map_or(Value::Null, Value::from));
            m.insert(key("worst_case_dim"), c.worst_case_dim.map_or(Value::Null, Value::from));
        }
        for (reason, n) in &self.skipped {
            m.insert(format!("skipped.{reason}"), Value::from(*n));
        }
        Value::Object(m)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_flat_json()).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Default)]
struct TrialOutcome {
    seed: u64,
    dim: usize,
    checks: Vec<(&'static str, CheckKind, f64)>,
    skipped: Vec<&'static str>,
}

impl TrialOutcome {
    fn inequality(&mut self, name: &'static str, lhs: f64, rhs: f64) {
        self.checks.push((name, CheckKind::Inequality, rhs - lhs));
    }

    fn identity(&mut self, name: &'static str, lhs: f64, rhs: f64) {
        self.checks.push((name, CheckKind::Identity, (lhs - rhs).abs()));
    }
}

fn aggregate(
    campaign: &str,
    config: &CampaignConfig,
    identity_tol: f64,
    outcomes: Vec<TrialOutcome>,
) -> CampaignReport {
    let mut checks: Vec<CheckStats> = Vec::new();
    let mut skipped = BTreeMap::new();
    for o in outcomes {
        for reason in &o.skipped {
            *skipped.entry(reason.to_string()).or_insert(0) += 1;
        }
        for (name, kind, excess) in o.checks {
            let idx = match checks.iter().position(|c| c.name == name) {
                Some(i) => i,
                None => {
                    checks.push(CheckStats {
                        name: name.to_string(),
                        kind,
                        trials: 0,
                        passes: 0,
                        max_violation: None,
                        worst_case_seed: None,
                        worst_case_dim: None,
                    });
                    checks.len() - 1
                }
            };
            let stats = &mut checks[idx];
            let limit = match kind {
                CheckKind::Inequality => config.tol,
                CheckKind::Identity => identity_tol,
            };
            stats.trials += 1;
            if excess <= limit {
                stats.passes += 1;
            }
            if stats.max_violation.is_none_or(|m| excess > m) {
                stats.max_violation = Some(excess);
                stats.worst_case_seed = Some(o.seed);
                stats.worst_case_dim = Some(o.dim);
            }
        }
    }
    CampaignReport { campaign: campaign.into(), config: config.clone(), checks, skipped }
}

fn run_trials(
    config: &CampaignConfig,
    exec: Execution,
    trial: impl Fn(usize, SeededRng) -> TrialOutcome + Sync,
) -> Vec<TrialOutcome> {
    let root = SeededRng::new(config.seed);
    let jobs: Vec<(usize, SeededRng)> = config
        .dims
        .iter()
        .flat_map(|&d| {
            let dim_rng = root.substream(d as u64);
            (0..config.trials).map(move |t| (d, dim_rng.substream(t as u64)))
        })
        .collect();
    let run = |(d, rng): (usize, SeededRng)| {
        let seed = rng.seed();
        let mut o = trial(d, rng);
        o.seed = seed;
        o.dim = d;
        o
    };
    match exec {
        Execution::Serial => jobs.into_iter().map(run).collect(),
        Execution::Parallel => jobs.into_par_iter().map(run).collect(),
    }
}

fn skip_reason(e: &Error) -> &'static str {
    match e {
        Error::JointEigenstate => "joint_eigenstate",
        Error::ZeroVariance => "zero_variance",
        Error::DegenerateDenominator(_) => "degenerate_denominator",
        Error::NullProjection => "null_projection",
        Error::RandomPerpFailed(_) => "random_perp_failed",
        Error::DegenerateDraw(_) => "degenerate_draw",
        Error::StatesCoincide => "states_coincide",
        Error::StatesOrthogonal => "states_orthogonal",
        Error::InvalidDimension(_) => "invalid_dimension",
        _ => "other_error",
    }
}

/// Draws a random instance and evaluates every inequality and identity.
fn verification_trial(dim: usize, mut rng: SeededRng) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    if let Err(e) = verification_checks(dim, &mut rng, &mut out) {
        out.skipped.push(skip_reason(&e));
    }
    out
}

fn verification_checks(dim: usize, rng: &mut SeededRng, out: &mut TrialOutcome) -> Result<()> {
    let a = random_hermitian(dim, rng)?;
    let b = random_hermitian(dim, rng)?;
    let psi = random_state(dim, rng)?;
    let perp = random_perp(&psi, rng)?;
    let psi_prime = random_state(dim, rng)?;
    let alpha = rng.unit_complex();

    let var_a = variance(&a, &psi)?;
    let var_b = variance(&b, &psi)?;
    let sum = var_a + var_b;
    let product = var_a * var_b;
    let sd_product = product.sqrt();

    let hr = hr_bound(&a, &b, &psi)?;
    let schroedinger = schroedinger_bound(&a, &b, &psi)?;
    let weak = weak_sum_bound(&a, &b, &psi)?;
    out.inequality("eq1_hr", product, hr);
    out.inequality("eq2_schroedinger", product, schroedinger);
    out.inequality("eq2_dominates_eq1", schroedinger, hr);
    out.inequality("weak_sum", sum, weak);
    out.inequality("sum_exceeds_twice_product", sum, 2.0 * sd_product);
    out.inequality("twice_product_exceeds_weak", 2.0 * sd_product, weak);

    let sign = select_sign(&a, &b, &psi)?;
    let eq3 = mp_sum_bound_perp(&a, &b, &psi, &perp, sign)?;
    out.inequality("eq3", sum, eq3);
    out.inequality("eq3_dominates_weak", eq3, weak);
    let eq3_other = mp_sum_bound_perp(&a, &b, &psi, &perp, sign.flipped())?;
    out.inequality("eq3_either_sign", sum, eq3_other);
    out.inequality("eq4", sum, mp_sum_bound_aplusb(&a, &b, &psi)?);
    out.inequality("eq5", sum, mp_combined_bound(&a, &b, &psi, &perp, sign)?.0);
    out.inequality("a3_triple_max", sum, mp_triple_max_bound(&a, &b, &psi)?);

    match amended_hr_denominator(&a, &b, &psi, &perp, sign) {
        Ok((denominator, s)) => {
            let c = commutator_mean(&a, &b, &psi)?;
            out.inequality("eq6_denominator", denominator, -s.value() * c / (2.0 * sd_product));
            match amended_hr_bound(&a, &b, &psi, &perp, sign) {
                Ok(v) => out.inequality("eq6_amended_hr", sd_product, v),
                Err(e) => out.skipped.push(skip_reason(&e)),
            }
        }
        Err(e) => out.skipped.push(skip_reason(&e)),
    }

    let var_b_prime = variance(&b, &psi_prime)?;
    match two_state_sum_bound(&a, &b, &psi, &psi_prime) {
        Ok(v) => out.inequality("d4_two_state", var_a + var_b_prime, v),
        Err(e) => out.skipped.push(skip_reason(&e)),
    }
    match holevo_bound(&a, &psi, &psi_prime) {
        Ok(v) => out.inequality("holevo", var_a.sqrt() + variance(&a, &psi_prime)?.sqrt(), v),
        Err(e) => out.skipped.push(skip_reason(&e)),
    }

    let (l, r) = parallelogram_sides(&a, &b, &psi, alpha)?;
    out.identity("parallelogram", l, r);
    for s in [SignChoice::Plus, SignChoice::Minus] {
        let (l, r) = skew_deviation_sides(&a, &b, &psi, s)?;
        out.identity("p3_identity", l, r);
    }

    let theta = 2.0 * PI * rng.uniform();
    let mu = 2.0 * PI * rng.uniform();
    let phased = mp_sum_bound_perp(&a, &b, &psi.with_phase(theta), &perp.with_phase(mu), sign)?;
    out.identity("phase_invariance", eq3, phased);

    // explicitly decomposed mixture supported on the complement of ψ⊥
    let components = 1 + (rng.next_u64() % (dim as u64 - 1).min(3)) as usize;
    let mut weights: Vec<f64> = (0..components).map(|_| 0.05 + rng.uniform()).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let mut ensemble = Vec::with_capacity(components);
    for &w in &weights {
        let raw = random_state(dim, rng)?;
        ensemble.push((w, project_out(&perp, raw.amplitudes())?));
    }
    let rho = DensityMatrix::from_ensemble(&ensemble)?;
    let (mixed, s) = mixed_sum_bound(&a, &b, &rho, &perp, SignMode::Auto)?;
    out.inequality("d9_mixed", mixed_sum_of_variances(&a, &b, &rho)?, mixed);
    let mut convex = 0.0;
    for (w, state) in &ensemble {
        convex += w * mp_sum_bound_perp(&a, &b, state, &perp, s)?;
    }
    out.identity("d9_convexity", mixed, convex);
    Ok(())
}

pub fn run_verification(config: &CampaignConfig, exec: Execution) -> CampaignReport {
    let outcomes = if config.dims.iter().any(|&d| d < 2) {
        vec![TrialOutcome { skipped: vec!["invalid_dimension"], ..Default::default() }]
    } else {
        run_trials(config, exec, verification_trial)
    };
    aggregate("verify", config, config.tol.min(Tolerances::default().identity), outcomes)
}

fn saturation_trial(dim: usize, mut rng: SeededRng) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    if let Err(e) = saturation_checks(dim, &mut rng, &mut out) {
        out.skipped.push(skip_reason(&e));
    }
    out
}

fn saturation_checks(dim: usize, rng: &mut SeededRng, out: &mut TrialOutcome) -> Result<()> {
    let a = random_hermitian(dim, rng)?;
    let b = random_hermitian(dim, rng)?;
    let psi = random_state(dim, rng)?;
    let sign = select_sign(&a, &b, &psi)?;
    let var_a = variance(&a, &psi)?;
    let var_b = variance(&b, &psi)?;

    match optimal_perp_sum(&a, &b, &psi, sign) {
        Ok(p) => out.identity("eq3_saturation", var_a + var_b, mp_sum_bound_perp(&a, &b, &psi, &p, sign)?),
        Err(e) => out.skipped.push(skip_reason(&e)),
    }
    match optimal_perp_product(&a, &b, &psi, sign).and_then(|p| amended_hr_bound(&a, &b, &psi, &p, sign)) {
        Ok(v) => out.identity("eq6_saturation", (var_a * var_b).sqrt(), v),
        Err(e) => out.skipped.push(skip_reason(&e)),
    }
    Ok(())
}

/// `|LHS − RHS|` of the sum bound and the amended product bound at their
/// saturating `|ψ⊥⟩`; the report's identity checks use `config.tol`.
pub fn run_saturation(config: &CampaignConfig, exec: Execution) -> CampaignReport {
    let outcomes = if config.dims.iter().any(|&d| d < 2) {
        vec![TrialOutcome { skipped: vec!["invalid_dimension"], ..Default::default() }]
    } else {
        run_trials(config, exec, saturation_trial)
    };
    aggregate("saturate", config, config.tol, outcomes)
}
