//! Subcommand implementations. Each returns a [`Report`]; failed checks
//! turn into exit code 3 in `main`.

use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use kpair::asymptotics::chow_sweep;
use kpair::balancing::{balance, chow_monotonicity_scan};
use kpair::exact::{int, parse_rational, rat, Rational};
use kpair::futaki::{beta_to_lambda, classify, futaki_pair, lambda_to_beta};
use kpair::models::{
    chain_pair, log_log_slope, pair_center_of_mass_exact, rational_normal_curve,
    xk_model_n1, xk_pair_deviation, xk_pair_deviation_upper_blocks,
};
use kpair::normal_cone::{
    closed_form_coefficients, fitted_coefficients, futaki_normal_cone, hilbert_pn_anticanonical,
    weight_sequences, NormalConeConfig,
};
use kpair::projective::{
    center_of_mass, fs_volume, integrate_cycle, lemma31_coefficients, lemma32_coefficients,
    pair_center_of_mass, pair_integrals, quadrature_check_lemma32, Complex, HermitianForm,
    HermitianMatrix, MatrixDocument, ProjectiveCycle, ProjectivePoint,
};
use kpair::sampling::{random_curve, random_hermitian, random_traceless_hermitian, rng};
use kpair::Error;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::output::{float, fmt_float, rational, rational_text, Report, Rows};

/// Failure of a command, with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Invalid(String),
    /// Exit code 3.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Invalid(_) => 2,
            Self::Failure(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Self::Invalid(m) | Self::Failure(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::DegreeMismatch { .. } => Self::Invalid(e.to_string()),
            _ => Self::Failure(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn params_rational(r: &mut Report, key: &str, v: &Rational) {
    r.param(key, rational(v));
}

// ---------------------------------------------------------------- futaki

#[derive(Debug, Args)]
pub struct FutakiArgs {
    /// Dimension of X = P^n.
    #[arg(long)]
    pub n: i64,
    /// Deformation parameter in (0, 1), as p/q.
    #[arg(long, value_parser = rational_arg)]
    pub c: Rational,
    /// Cone angle parameter.
    #[arg(long, value_parser = rational_arg)]
    pub beta: Rational,
    /// Leading volume coefficient; defaults to that of P^n with -K.
    #[arg(long, value_parser = rational_arg)]
    pub a0: Option<Rational>,
}

pub fn futaki(args: &FutakiArgs) -> CliResult<Report> {
    let model = hilbert_pn_anticanonical(args.n)?;
    let a0 = args.a0.clone().unwrap_or_else(|| model.a0().clone());
    if !a0.is_positive() {
        return Err(CliError::Invalid("a0 must be positive".into()));
    }
    let scale = &a0 / model.a0();
    let config = NormalConeConfig::new(model, args.c.clone())?;
    let value = futaki_normal_cone(args.n, &args.c, &args.beta, &a0)?;
    let closed = closed_form_coefficients(args.n, &args.c, &a0)?;
    let fitted = fitted_coefficients(&config)?.scaled(&scale);
    let fitted_value = futaki_pair(&fitted, &args.beta)?;

    let mut r = Report::new("futaki");
    r.param("n", json!(args.n));
    params_rational(&mut r, "c", &args.c);
    params_rational(&mut r, "beta", &args.beta);
    params_rational(&mut r, "a0", &a0);
    r.result("futaki", rational(&value));
    r.result("classification", json!(classify(&value).label()));
    r.result(
        "lambda",
        beta_to_lambda(&args.beta).map_or(Value::Null, |l| rational(&l)),
    );

    let mut coeffs = Vec::new();
    let mut rows = Rows {
        header: vec!["coefficient".into(), "closed_form".into(), "fitted".into()],
        rows: Vec::new(),
    };
    for ((name, c), (_, f)) in closed.named().into_iter().zip(fitted.named()) {
        let has_closed = !matches!(name, "a1_t" | "b1_t");
        coeffs.push(json!({
            "name": name,
            "closed_form": if has_closed { rational(c) } else { Value::Null },
            "fitted": rational(f),
        }));
        rows.rows.push(vec![
            name.to_string(),
            if has_closed { rational_text(c) } else { "-".into() },
            rational_text(f),
        ]);
    }
    r.result("coefficients", Value::Array(coeffs));
    r.rows = Some(rows);
    r.check(
        "fitted_coefficients_match_closed_forms",
        fitted.leading_eq(&closed),
        "a0, a1, b0, b1, a0_t, b0_t compared exactly",
    );
    r.check(
        "fitted_futaki_matches_closed_form",
        fitted_value == value,
        format!("fitted {} vs closed {}", rational_text(&fitted_value), rational_text(&value)),
    );
    if !r.passed() {
        return Err(CliError::Failure(format!(
            "internal cross-check failed: fitted {} vs closed form {}",
            rational_text(&fitted_value),
            rational_text(&value)
        )));
    }
    Ok(r)
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemmas,
    Chain,
    Rnc,
    XkDecay,
    Monotonicity,
    Flatness,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Largest dimension checked (lemmas: 6, flatness: 3).
    #[arg(long)]
    pub n_max: Option<i64>,
    /// Largest k checked (chain: 20, rnc: 12).
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Values of k for the decay fit.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    pub ks: Vec<usize>,
    /// Numerical tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Base seed for randomized suites.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random instances for the monotonicity suite.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
}

pub fn verify(args: &VerifyArgs) -> CliResult<Report> {
    if !(args.tol > 0.0) {
        return Err(CliError::Invalid("tolerance must be positive".into()));
    }
    let mut r = Report::new("verify");
    let name = args.suite.to_possible_value().expect("named suite");
    r.param("suite", json!(name.get_name()));
    r.param("tol", float(args.tol));
    match args.suite {
        Suite::Lemmas => verify_lemmas(args, &mut r)?,
        Suite::Chain => verify_chain(args, &mut r)?,
        Suite::Rnc => verify_rnc(args, &mut r)?,
        Suite::XkDecay => verify_xk(args, &mut r)?,
        Suite::Monotonicity => verify_monotonicity(args, &mut r)?,
        Suite::Flatness => verify_flatness(args, &mut r)?,
    }
    Ok(r)
}

fn verify_lemmas(args: &VerifyArgs, r: &mut Report) -> CliResult<()> {
    let n_max = args.n_max.unwrap_or(6);
    r.param("n_max", json!(n_max));
    let mut exact_ok = true;
    for n in 1..=n_max {
        exact_ok &= lemma31_coefficients(n)?.iter().all(One::is_one);
        for (i, (a, b)) in lemma32_coefficients(n)?.into_iter().enumerate() {
            let i = i as i64;
            exact_ok &= a == rat(i + 1, n + 1) && b == rat(n - i, n + 1);
        }
    }
    r.check(
        "exact_coefficients",
        exact_ok,
        "1, (i+1)/(n+1), (n-i)/(n+1) for all i < n",
    );
    match quadrature_check_lemma32(n_max, args.tol) {
        Ok(rep) => {
            r.result("checked", json!(rep.checked));
            r.result("max_deviation", float(rep.max_deviation));
            r.check(
                "quadrature_agrees",
                true,
                format!("max deviation {}", fmt_float(rep.max_deviation)),
            );
        }
        Err(Error::VerificationFailure(msg)) => {
            r.check("quadrature_agrees", false, msg);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn verify_chain(args: &VerifyArgs, r: &mut Report) -> CliResult<()> {
    let k_max = args.k_max.unwrap_or(20);
    if k_max < 1 {
        return Err(CliError::Invalid("k-max must be >= 1".into()));
    }
    r.param("k_max", json!(k_max));
    let lambda = rat(2, 3);
    let mut max_exact = Rational::zero();
    for k in 1..=k_max {
        let (chain, ends) = chain_pair(k)?;
        for x in pair_center_of_mass_exact(&chain.torus, &ends, &lambda)? {
            if x.abs() > max_exact {
                max_exact = x.abs();
            }
        }
    }
    let quad_k = k_max.min(12);
    let mut max_quad: f64 = 0.0;
    for k in 1..=quad_k {
        let (chain, ends) = chain_pair(k)?;
        let mu = pair_center_of_mass(
            &chain.cycle,
            &ends.to_cycle()?,
            &lambda,
            &HermitianForm::identity(k + 1),
        )?;
        max_quad = max_quad.max(mu.max_abs());
    }
    r.result("max_abs_mu_exact", rational(&max_exact));
    r.result("max_abs_mu_quadrature", float(max_quad));
    r.result("quadrature_k_max", json!(quad_k));
    r.check(
        "exactly_balanced",
        max_exact.is_zero(),
        format!("max |mu| = {} over k <= {k_max}", rational_text(&max_exact)),
    );
    r.check(
        "quadrature_balanced",
        max_quad < args.tol,
        format!("max |mu| = {} over k <= {quad_k}", fmt_float(max_quad)),
    );
    Ok(())
}

fn verify_rnc(args: &VerifyArgs, r: &mut Report) -> CliResult<()> {
    let k_max = args.k_max.unwrap_or(12);
    if k_max < 1 {
        return Err(CliError::Invalid("k-max must be >= 1".into()));
    }
    r.param("k_max", json!(k_max));
    let mut norms = Vec::new();
    let mut rows = Rows {
        header: vec!["k".into(), "mu_norm".into()],
        rows: Vec::new(),
    };
    let mut worst: f64 = 0.0;
    for k in 1..=k_max {
        let mu = center_of_mass(&rational_normal_curve(k)?, &HermitianForm::identity(k + 1))?;
        let n = mu.norm();
        worst = worst.max(n);
        norms.push(json!({"k": k, "mu_norm": float(n)}));
        rows.rows.push(vec![k.to_string(), fmt_float(n)]);
    }
    r.result("norms", Value::Array(norms));
    r.result("max_mu_norm", float(worst));
    r.rows = Some(rows);
    r.check(
        "balanced",
        worst < args.tol,
        format!("max |mu|_2 = {}", fmt_float(worst)),
    );
    Ok(())
}

fn verify_xk(args: &VerifyArgs, r: &mut Report) -> CliResult<()> {
    if args.ks.len() < 2 || args.ks.iter().any(|&k| k < 3) {
        return Err(CliError::Invalid("--ks needs at least two values, each >= 3".into()));
    }
    r.param("ks", json!(args.ks));
    let mut rows = Rows {
        header: vec![
            "k".into(),
            "deviation".into(),
            "upper_block_deviation".into(),
            "volume".into(),
        ],
        rows: Vec::new(),
    };
    let mut devs = Vec::new();
    let mut entries = Vec::new();
    let mut worst_volume: f64 = 0.0;
    for &k in &args.ks {
        let dev = xk_pair_deviation(k)?;
        let upper = xk_pair_deviation_upper_blocks(k)?;
        let (x, _) = xk_model_n1(k)?.cycles()?;
        let vol = fs_volume(&x, &HermitianForm::identity(2 * k + 1))?;
        worst_volume = worst_volume.max((vol / (2 * k) as f64 - 1.0).abs());
        devs.push(dev);
        entries.push(json!({
            "k": k,
            "deviation": float(dev),
            "upper_block_deviation": float(upper),
            "volume": float(vol),
        }));
        rows.rows.push(vec![k.to_string(), fmt_float(dev), fmt_float(upper), fmt_float(vol)]);
    }
    let xs: Vec<f64> = args.ks.iter().map(|&k| k as f64).collect();
    let slope = log_log_slope(&xs, &devs)?;
    r.result("samples", Value::Array(entries));
    r.result("slope", float(slope));
    r.rows = Some(rows);
    r.check(
        "volume_identity",
        worst_volume < args.tol,
        format!("max relative error {}", fmt_float(worst_volume)),
    );
    r.check(
        "decay_slope",
        (-1.3..=-0.7).contains(&slope),
        format!("slope {} (required [-1.3, -0.7])", fmt_float(slope)),
    );
    Ok(())
}

fn verify_monotonicity(args: &VerifyArgs, r: &mut Report) -> CliResult<()> {
    if args.seeds == 0 {
        return Err(CliError::Invalid("--seeds must be positive".into()));
    }
    r.param("seed", json!(args.seed));
    r.param("seeds", json!(args.seeds));
    let grid: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * f64::from(i)).collect();
    let mut violations = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..args.seeds {
        let s = args.seed.wrapping_add(i);
        let cyc = random_curve(3, 3, &mut rng(s))?;
        let a = random_traceless_hermitian(4, &mut rng(s.wrapping_add(1 << 32)));
        match chow_monotonicity_scan(&cyc, &a, &grid, &HermitianForm::identity(4)) {
            Ok(rep) => worst = worst.max(rep.max_increase),
            Err(Error::VerificationFailure(msg)) => violations.push(format!("seed {s}: {msg}")),
            Err(e) => return Err(e.into()),
        }
    }
    r.result("largest_step", float(worst));
    r.result("violations", json!(violations));
    r.check(
        "nonincreasing",
        violations.is_empty(),
        format!("{} of {} instances increase", violations.len(), args.seeds),
    );
    Ok(())
}

fn verify_flatness(args: &VerifyArgs, r: &mut Report) -> CliResult<()> {
    let n_max = args.n_max.unwrap_or(3);
    if n_max < 1 {
        return Err(CliError::Invalid("n-max must be >= 1".into()));
    }
    r.param("n_max", json!(n_max));
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 1..=n_max {
        for c in [rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3)] {
            let model = hilbert_pn_anticanonical(n)?;
            let config = NormalConeConfig::new(model.clone(), c.clone())?;
            let ks = config.sample_ks(8);
            match weight_sequences(&config, &ks) {
                Ok(seq) => {
                    for (k, d) in ks.iter().zip(&seq.d) {
                        checked += 1;
                        if *d != Rational::from_integer(model.dim_x(*k)) {
                            failures.push(format!("n={n} c={} k={k}", rational_text(&c)));
                        }
                    }
                }
                Err(Error::InternalInconsistency(msg)) => failures.push(msg),
                Err(e) => return Err(e.into()),
            }
        }
    }
    r.result("samples", json!(checked));
    r.result("failures", json!(failures));
    r.check(
        "flat",
        failures.is_empty(),
        format!("{checked} samples, {} mismatches", failures.len()),
    );
    Ok(())
}

// ---------------------------------------------------------------- balance

#[derive(Debug, Args)]
pub struct BalanceArgs {
    /// `rnc:K`, `chain:K` or `point`.
    pub model: String,
    #[arg(long, value_parser = rational_arg, default_value = "1")]
    pub lambda: Rational,
    /// Size of the seeded Hermitian perturbation of the identity metric.
    #[arg(long, default_value_t = 0.0)]
    pub perturb: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
}

fn model_pair(spec: &str) -> CliResult<(ProjectiveCycle, ProjectiveCycle)> {
    let bad = || CliError::Invalid(format!("unknown model '{spec}' (use rnc:K, chain:K or point)"));
    if spec == "point" {
        let p = ProjectivePoint::coordinate(1, 0)?;
        return Ok((
            ProjectiveCycle::new(1, vec![], vec![(p, 1)])?,
            ProjectiveCycle::empty(1),
        ));
    }
    let (kind, k) = spec.split_once(':').ok_or_else(bad)?;
    let k: usize = k.parse().map_err(|_| bad())?;
    match kind {
        "rnc" => Ok((rational_normal_curve(k)?, ProjectiveCycle::empty(k))),
        "chain" => {
            let (chain, ends) = chain_pair(k)?;
            Ok((chain.cycle, ends.to_cycle()?))
        }
        _ => Err(bad()),
    }
}

pub fn balance_cmd(args: &BalanceArgs) -> CliResult<Report> {
    if !args.perturb.is_finite() || args.perturb < 0.0 {
        return Err(CliError::Invalid("--perturb must be a nonnegative number".into()));
    }
    let (v, w) = model_pair(&args.model)?;
    let dim = v.ambient_dim() + 1;
    let h = random_hermitian(dim, &mut rng(args.seed));
    let g0 = HermitianMatrix::identity(dim).into_entries()
        + h.into_entries() * Complex::new(args.perturb, 0.0);
    let g0 = HermitianMatrix::new(g0)
        .and_then(HermitianForm::new)
        .map_err(|e| CliError::Invalid(format!("perturbed start metric: {e}")))?;
    let state = balance(&v, &w, &args.lambda, &g0, args.tol, args.max_iter)?;

    let mut r = Report::new("balance");
    r.param("model", json!(args.model));
    params_rational(&mut r, "lambda", &args.lambda);
    r.param("perturb", float(args.perturb));
    r.param("seed", json!(args.seed));
    r.param("tol", float(args.tol));
    r.param("max_iter", json!(args.max_iter));
    r.result("converged", json!(state.converged));
    r.result("iterations", json!(state.iteration));
    r.result("mu_norm", float(state.mu_norm));
    r.result("condition_number", float(state.g.condition_number()));
    let trace: Vec<Value> = state
        .history
        .iter()
        .map(|t| {
            json!({
                "iteration": t.iteration,
                "mu_norm": float(t.mu_norm),
                "condition_number": float(t.condition_number),
            })
        })
        .collect();
    r.result("trace", Value::Array(trace));
    r.rows = Some(Rows {
        header: vec!["iteration".into(), "mu_norm".into(), "condition_number".into()],
        rows: state
            .history
            .iter()
            .map(|t| {
                vec![
                    t.iteration.to_string(),
                    fmt_float(t.mu_norm),
                    fmt_float(t.condition_number),
                ]
            })
            .collect(),
    });
    r.check(
        "converged",
        state.converged,
        format!(
            "|mu|_2 = {} after {} iterations",
            fmt_float(state.mu_norm),
            state.iteration
        ),
    );
    Ok(r)
}

// ---------------------------------------------------------------- sweep

#[derive(Debug, Subcommand)]
pub enum SweepCommand {
    /// k^{-1} CH_k on the central fiber of the deformation to the normal cone.
    Chow(SweepChowArgs),
}

#[derive(Debug, Args)]
pub struct SweepChowArgs {
    #[arg(long, value_parser = rational_arg, default_value = "1/2")]
    pub c: Rational,
    #[arg(long, value_parser = rational_arg, default_value = "2/3")]
    pub lambda: Rational,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    pub ks: Vec<usize>,
    /// Evaluate by quadrature instead of the exact diagonal assembly.
    #[arg(long)]
    pub quadrature: bool,
}

pub fn sweep(cmd: &SweepCommand) -> CliResult<Report> {
    let SweepCommand::Chow(args) = cmd;
    let rows = chow_sweep(&args.ks, &args.c, &args.lambda, args.quadrature)?;
    let beta = lambda_to_beta(&args.lambda)?;
    let target = futaki_normal_cone(1, &args.c, &beta, &int(2))?;

    let mut r = Report::new("sweep chow");
    params_rational(&mut r, "c", &args.c);
    params_rational(&mut r, "lambda", &args.lambda);
    r.param("ks", json!(args.ks));
    r.param("method", json!(if args.quadrature { "quadrature" } else { "exact" }));
    r.result("futaki_target", rational(&target));
    r.result(
        "rows",
        Value::Array(
            rows.iter()
                .map(|row| {
                    json!({
                        "k": row.k,
                        "c": rational(&args.c),
                        "lambda": rational(&args.lambda),
                        "chow_over_kn": float(row.chow_over_kn),
                        "futaki_target": rational(&target),
                    })
                })
                .collect(),
        ),
    );
    r.rows = Some(Rows {
        header: ["k", "c", "lambda", "chow_over_kn", "futaki_target"]
            .map(String::from)
            .to_vec(),
        rows: rows
            .iter()
            .map(|row| {
                vec![
                    row.k.to_string(),
                    row.c.clone(),
                    row.lambda.clone(),
                    fmt_float(row.chow_over_kn),
                    row.futaki_target.clone(),
                ]
            })
            .collect(),
    });
    Ok(r)
}

// ---------------------------------------------------------------- chow

#[derive(Debug, Args)]
pub struct ChowArgs {
    /// Cycle V as a JSON cycle document.
    #[arg(long)]
    pub cycle: PathBuf,
    /// Optional divisor W for pair quantities.
    #[arg(long)]
    pub divisor: Option<PathBuf>,
    #[arg(long, value_parser = rational_arg, default_value = "1")]
    pub lambda: Rational,
    /// Generator A as a JSON matrix (rows of [re, im] pairs).
    #[arg(long, conflicts_with = "diag")]
    pub generator: Option<PathBuf>,
    /// Diagonal generator, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub diag: Option<Vec<f64>>,
    /// Metric G as a JSON matrix; identity when omitted.
    #[arg(long)]
    pub metric: Option<PathBuf>,
    #[arg(long, default_value_t = kpair::projective::DEFAULT_TOL)]
    pub tol: f64,
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> CliResult<HermitianMatrix> {
    let doc: MatrixDocument = serde_json::from_str(&read_file(path)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    Ok(HermitianMatrix::from_document(&doc)?)
}

fn matrix_value(m: &HermitianMatrix) -> Value {
    Value::Array(
        m.to_document()
            .into_iter()
            .map(|row| {
                Value::Array(
                    row.into_iter()
                        .map(|[re, im]| json!([float(re), float(im)]))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn chow(args: &ChowArgs) -> CliResult<Report> {
    let v = ProjectiveCycle::from_json(&read_file(&args.cycle)?)?;
    let dim = v.ambient_dim() + 1;
    let w = match &args.divisor {
        Some(p) => ProjectiveCycle::from_json(&read_file(p)?)?,
        None => ProjectiveCycle::empty(v.ambient_dim()),
    };
    let g = match &args.metric {
        Some(p) => HermitianForm::new(read_matrix(p)?)
            .map_err(|e| CliError::Invalid(format!("metric: {e}")))?,
        None => HermitianForm::identity(dim),
    };
    let a = match (&args.generator, &args.diag) {
        (Some(p), _) => Some(read_matrix(p)?),
        (None, Some(d)) => Some(HermitianMatrix::from_real_diagonal(d)),
        (None, None) => None,
    };
    let lambda = if args.divisor.is_some() {
        args.lambda.clone()
    } else {
        Rational::one()
    };
    let ints = if args.divisor.is_some() {
        pair_integrals(&v, &w, &lambda, &g, args.tol)?
    } else {
        integrate_cycle(&v, &g, args.tol)?
    };
    let mu = ints.center_of_mass();

    let mut r = Report::new("chow");
    r.param("cycle", json!(args.cycle.display().to_string()));
    if let Some(p) = &args.divisor {
        r.param("divisor", json!(p.display().to_string()));
    }
    params_rational(&mut r, "lambda", &lambda);
    r.param("tol", float(args.tol));
    r.result("volume", float(ints.volume));
    r.result("nominal_volume", float(v.nominal_volume()));
    r.result("quadrature_error", float(ints.error));
    r.result("mu_norm", float(mu.norm()));
    r.result("center_of_mass", matrix_value(&mu));
    if let Some(a) = a {
        if a.dim() != dim {
            return Err(CliError::Invalid(format!(
                "generator has dimension {}, cycle lives in C^{dim}",
                a.dim()
            )));
        }
        r.result("chow_weight", float(-mu.trace_product(&a)));
    }
    Ok(r)
}
