use clap::Args;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use ideal_core::multfunc::{dirichlet_convolve, dirichlet_inverse, ArithTable, IdealDomain};
use ideal_core::numberfield::{parse_field, FieldSpec};
use ideal_core::orthogonality::{
    corollary_sides, prop2_sides, theorem1_difference, BoundedSequenceFn, IdealSet,
};
use ideal_core::primebounds::{self, DEFAULT_K_SLACK};
use ideal_core::richter::{self, ConstructionParams};
use ideal_core::sieve::{cache, IdealSieve};
use ideal_core::stats::{self, AbelFunction, SummaryKind};

use crate::report::{Format, Report};
use crate::{parse_norm, CliError, Command, Common};

type Res<T> = std::result::Result<T, CliError>;

#[derive(Args, Debug)]
pub struct SieveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Norm bound X
    #[arg(long, value_parser = parse_norm)]
    pub x: u64,
    /// List prime ideals (p, e, f, norm, ordinal, generator) instead of ideals
    #[arg(long)]
    pub primes: bool,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub common: Common,
    /// Norm bound X
    #[arg(long, value_parser = parse_norm)]
    pub x: u64,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Norm bound X (at least 1024)
    #[arg(long, value_parser = parse_norm)]
    pub x: u64,
}

#[derive(Args, Debug)]
pub struct SummatoryArgs {
    #[command(flatten)]
    pub common: Common,
    /// Norm bound X
    #[arg(long, value_parser = parse_norm)]
    pub x: u64,
    /// count, L, M or pi_K
    #[arg(long, default_value = "L")]
    pub kind: String,
}

#[derive(Args, Debug)]
pub struct EquidistArgs {
    #[command(flatten)]
    pub common: Common,
    /// Norm bound X
    #[arg(long, value_parser = parse_norm)]
    pub x: u64,
    /// Modulus q
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub q: u64,
}

#[derive(Args, Debug)]
pub struct WeylArgs {
    #[command(flatten)]
    pub common: Common,
    /// Norm bound X
    #[arg(long, value_parser = parse_norm)]
    pub x: u64,
    /// Frequency alpha
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
}

#[derive(Args, Debug)]
pub struct Theorem1Args {
    #[command(flatten)]
    pub common: Common,
    /// Norm bound X
    #[arg(long, value_parser = parse_norm)]
    pub x: u64,
    /// Bounded function g: one, parity, exp:a/q or weyl:alpha
    #[arg(long, default_value = "parity")]
    pub g: String,
    #[arg(long, default_value_t = 0)]
    pub k1: u32,
    #[arg(long, default_value_t = 1)]
    pub k2: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Prop2Form {
    Raw,
    Corollary,
}

#[derive(Args, Debug)]
pub struct Prop2Args {
    #[command(flatten)]
    pub common: Common,
    /// Norm bound X (at least 1024)
    #[arg(long, value_parser = parse_norm)]
    pub x: u64,
    /// Number of random sets S
    #[arg(long, default_value_t = 20)]
    pub sets: usize,
    /// Largest |S|
    #[arg(long, default_value_t = 50)]
    pub size: usize,
    /// Largest member norm
    #[arg(long, default_value_t = 100)]
    pub max_norm: u64,
    #[arg(long, default_value_t = DEFAULT_K_SLACK)]
    pub k_slack: f64,
    #[arg(long, value_enum, default_value = "corollary")]
    pub form: Prop2Form,
}

#[derive(Args, Debug)]
pub struct ChebyshevArgs {
    #[command(flatten)]
    pub common: Common,
    /// Largest y for the pi_K(y) check; x runs over powers of ten below X/max(alpha)
    #[arg(long, value_parser = parse_norm)]
    pub x: u64,
    /// Comma-separated alpha values
    #[arg(long, default_value = "1.5,2,4")]
    pub alpha: String,
    #[arg(long, default_value_t = DEFAULT_K_SLACK)]
    pub k_slack: f64,
}

#[derive(Args, Debug)]
pub struct Prop4Args {
    #[command(flatten)]
    pub common: Common,
    /// Exponent x of the annulus (b^x, b^(x+1)]
    #[arg(long)]
    pub x: f64,
    #[arg(long, default_value_t = primebounds::DEFAULT_BASE)]
    pub base: f64,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
}

#[derive(Args, Debug)]
pub struct RichterArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    /// Number of prime factors of the members of S2
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 2.0)]
    pub base: f64,
    #[arg(long, default_value_t = 0.24)]
    pub epsilon: f64,
    /// Harmonic mass of each A-set
    #[arg(long, default_value_t = 0.0)]
    pub mass: f64,
    /// Fixed density constant D instead of the search
    #[arg(long)]
    pub d: Option<f64>,
    /// Sieve capacity
    #[arg(long, value_parser = parse_norm, default_value_t = 1 << 24)]
    pub capacity: u64,
}

#[derive(Args, Debug)]
pub struct ConvolutionArgs {
    #[command(flatten)]
    pub common: Common,
    /// Norm bound X
    #[arg(long, value_parser = parse_norm)]
    pub x: u64,
    /// delta, one, lambda, mu or square; prefix `inv:` for the Dirichlet inverse
    #[arg(long)]
    pub f: String,
    /// Same grammar as --f
    #[arg(long)]
    pub g: String,
}

#[derive(Args, Debug)]
pub struct AbelArgs {
    #[command(flatten)]
    pub common: Common,
    /// Norm bound X (at least 1024)
    #[arg(long, value_parser = parse_norm)]
    pub x: u64,
    /// 1, 1/t, inv_pow or log
    #[arg(long, default_value = "1")]
    pub g: String,
}

pub fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Sieve(a) => &a.common,
        Command::Count(a) => &a.common,
        Command::Density(a) => &a.common,
        Command::Summatory(a) => &a.common,
        Command::Equidist(a) => &a.common,
        Command::Weyl(a) => &a.common,
        Command::Theorem1(a) => &a.common,
        Command::Prop2(a) => &a.common,
        Command::Chebyshev(a) => &a.common,
        Command::Prop4(a) => &a.common,
        Command::Richter(a) => &a.common,
        Command::Convolution(a) => &a.common,
        Command::Abel(a) => &a.common,
    }
}

pub fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Density(_) | Command::Richter(_) => Format::Json,
        _ => Format::Csv,
    }
}

pub fn dispatch(cmd: &Command) -> Res<Report> {
    match cmd {
        Command::Sieve(a) => sieve(a),
        Command::Count(a) => count(a),
        Command::Density(a) => density(a),
        Command::Summatory(a) => summatory(a),
        Command::Equidist(a) => equidist(a),
        Command::Weyl(a) => weyl(a),
        Command::Theorem1(a) => theorem1(a),
        Command::Prop2(a) => prop2(a),
        Command::Chebyshev(a) => chebyshev(a),
        Command::Prop4(a) => prop4(a),
        Command::Richter(a) => richter_cmd(a),
        Command::Convolution(a) => convolution(a),
        Command::Abel(a) => abel(a),
    }
}

fn field_of(c: &Common) -> Res<FieldSpec> {
    parse_field(&c.field.0).map_err(|e| CliError::Usage(format!("--field: {e}")))
}

fn open_sieve(c: &Common, field: &FieldSpec, capacity: u64) -> Res<IdealSieve> {
    match &c.cache {
        None => Ok(IdealSieve::new(field, capacity)?),
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("{:016x}-{capacity}.pidt", field.tag()));
            let table = cache::load_or_build(&path, field, capacity)?;
            Ok(IdealSieve::from_table(field, table))
        }
    }
}

fn setup(c: &Common, capacity: u64) -> Res<(FieldSpec, IdealSieve)> {
    let field = field_of(c)?;
    let sieve = open_sieve(c, &field, capacity)?;
    Ok((field, sieve))
}

fn fmt_f(v: f64) -> String {
    format!("{v}")
}

fn sieve(a: &SieveArgs) -> Res<Report> {
    let (field, s) = setup(&a.common, a.x)?;
    let mut r = Report::new("sieve", field.coeff_string())
        .param("x", a.x)
        .param("primes", a.primes);
    if a.primes {
        r = r.columns(&["p", "e", "f", "norm", "ordinal", "gen_tag"]);
        for p in &s.table().entries {
            let tag = p
                .gen_tag
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            r.row(vec![
                p.p.to_string(),
                p.e.to_string(),
                p.f.to_string(),
                p.norm.to_string(),
                p.ordinal.to_string(),
                tag,
            ]);
        }
    } else {
        r = r.columns(&["norm", "omega", "mu", "lambda", "ideal"]);
        for rec in s.records(a.x, true)? {
            let ideal = rec
                .factors
                .as_ref()
                .map(|m| m.to_string())
                .unwrap_or_default();
            r.row(vec![
                rec.norm.to_string(),
                rec.omega.to_string(),
                rec.mu.to_string(),
                rec.lambda.to_string(),
                ideal,
            ]);
        }
    }
    Ok(r)
}

fn count(a: &CountArgs) -> Res<Report> {
    let (field, s) = setup(&a.common, a.x)?;
    let n = stats::count_ideals(&s, a.x)?;
    let l = stats::liouville_sum(&s, a.x)?;
    let m = stats::mertens(&s, a.x)?;
    let pi = s.prime_count(a.x)?;
    let mut r = Report::new("count", field.coeff_string())
        .param("x", a.x)
        .columns(&["x", "N", "L", "M", "pi_K"]);
    r.row(vec![
        a.x.to_string(),
        n.to_string(),
        l.to_string(),
        m.to_string(),
        pi.to_string(),
    ]);
    Ok(r)
}

fn density(a: &DensityArgs) -> Res<Report> {
    let (field, s) = setup(&a.common, a.x)?;
    let fit = stats::estimate_density(&s, a.x)?;
    let mut r = Report::new("density", field.coeff_string())
        .param("x", a.x)
        .columns(&["x", "count", "scaled_residual"]);
    for (&(x, n), (_, res)) in fit.grid.iter().zip(fit.scaled_residuals()) {
        r.row(vec![fmt_f(x), n.to_string(), fmt_f(res)]);
    }
    Ok(r.summary(&fit))
}

fn summatory(a: &SummatoryArgs) -> Res<Report> {
    let kind: SummaryKind = a.kind.parse()?;
    let (field, s) = setup(&a.common, a.x)?;
    let series = stats::summatory(&s, a.x, kind)?;
    let mut r = Report::new("summatory", field.coeff_string())
        .param("x", a.x)
        .param("kind", kind.name())
        .columns(&["x", kind.name()]);
    for (x, v) in series.xs.iter().zip(&series.values) {
        r.row(vec![x.to_string(), (*v as i64).to_string()]);
    }
    Ok(r)
}

fn equidist(a: &EquidistArgs) -> Res<Report> {
    let (field, s) = setup(&a.common, a.x)?;
    let profile = stats::omega_profile(&s, a.x)?;
    let hist = stats::histogram_from_profile(&profile, a.q);
    let n = profile.total() as f64;
    let mut r = Report::new("equidist", field.coeff_string())
        .param("x", a.x)
        .param("q", a.q)
        .columns(&[
            "residue",
            "count",
            "share",
            "exp_sum_re",
            "exp_sum_im",
            "exp_sum_ratio",
        ]);
    let mut max_ratio = 0.0f64;
    for (res, &c) in hist.counts.iter().enumerate() {
        let z = profile.character_sum(res as i64, a.q);
        if res > 0 {
            max_ratio = max_ratio.max(z.norm() / n);
        }
        r.row(vec![
            res.to_string(),
            c.to_string(),
            fmt_f(c as f64 / n),
            fmt_f(z.re),
            fmt_f(z.im),
            fmt_f(z.norm() / n),
        ]);
    }
    Ok(r.summary(json!({
        "total": hist.total,
        "max_deviation": hist.max_deviation(),
        "max_exp_sum_ratio": max_ratio,
        "parseval_gap": hist.parseval_gap,
    })))
}

fn weyl(a: &WeylArgs) -> Res<Report> {
    let (field, s) = setup(&a.common, a.x)?;
    let mut r = Report::new("weyl", field.coeff_string())
        .param("x", a.x)
        .param("alpha", a.alpha)
        .columns(&["x", "re", "im", "ratio"]);
    for x in stats::dyadic_points(a.x) {
        let p = stats::omega_profile(&s, x)?;
        let z = p.weyl(a.alpha);
        r.row(vec![
            x.to_string(),
            fmt_f(z.re),
            fmt_f(z.im),
            fmt_f(z.norm() / p.total() as f64),
        ]);
    }
    Ok(r)
}

fn theorem1(a: &Theorem1Args) -> Res<Report> {
    let mut g = BoundedSequenceFn::parse(&a.g)?;
    let (field, s) = setup(&a.common, a.x)?;
    let mut r = Report::new("theorem1", field.coeff_string())
        .param("x", a.x)
        .param("g", g.id())
        .param("k1", a.k1)
        .param("k2", a.k2)
        .columns(&["x", "re", "im", "discrepancy"]);
    for x in stats::dyadic_points(a.x) {
        let z: Complex64 = theorem1_difference(&s, &mut g, a.k1, a.k2, x)?;
        r.row(vec![
            x.to_string(),
            fmt_f(z.re),
            fmt_f(z.im),
            fmt_f(z.norm()),
        ]);
    }
    Ok(r)
}

/// Seeded random sets of distinct ideals with norm at most `max_norm`.
pub fn sample_sets(
    sieve: &IdealSieve,
    count: usize,
    size: usize,
    max_norm: u64,
    seed: u64,
) -> Res<Vec<IdealSet>> {
    let pool = sieve.ideals(max_norm)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=size.min(pool.len()).max(1));
            let members: Vec<_> = pool.choose_multiple(&mut rng, n).cloned().collect();
            Ok(IdealSet::new(sieve.field(), members)?)
        })
        .collect()
}

fn prop2(a: &Prop2Args) -> Res<Report> {
    if a.size == 0 || a.max_norm > a.x {
        return Err(CliError::Usage(
            "need --size >= 1 and --max-norm <= --x".into(),
        ));
    }
    let (field, s) = setup(&a.common, a.x)?;
    let c_hat = stats::estimate_density(&s, a.x)?.c_hat;
    let sets = sample_sets(&s, a.sets, a.size, a.max_norm, a.common.seed)?;
    let form = match a.form {
        Prop2Form::Raw => "raw",
        Prop2Form::Corollary => "corollary",
    };
    let mut r = Report::new("prop2", field.coeff_string())
        .param("x", a.x)
        .param("sets", a.sets)
        .param("size", a.size)
        .param("max_norm", a.max_norm)
        .param("k_slack", a.k_slack)
        .param("seed", a.common.seed)
        .param("form", form)
        .columns(&["set", "size", "lhs", "rhs", "bound", "gap", "pass"]);
    for (i, set) in sets.iter().enumerate() {
        let sides = match a.form {
            Prop2Form::Raw => prop2_sides(&s, set, a.x, c_hat, a.k_slack)?,
            Prop2Form::Corollary => corollary_sides(&s, set, a.x, c_hat, a.k_slack)?,
        };
        r.row(vec![
            i.to_string(),
            set.len().to_string(),
            fmt_f(sides.lhs),
            fmt_f(sides.rhs),
            fmt_f(sides.bound),
            fmt_f(sides.gap()),
            sides.within_bound().to_string(),
        ]);
    }
    Ok(r.summary(json!({ "c_hat": c_hat })))
}

fn parse_list(s: &str, flag: &str) -> Res<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("{flag}: '{t}' is not a number")))
        })
        .collect()
}

fn chebyshev(a: &ChebyshevArgs) -> Res<Report> {
    let alphas = parse_list(&a.alpha, "--alpha")?;
    if alphas.iter().any(|&al| !(al >= 1.0)) {
        return Err(CliError::Usage("--alpha values must be >= 1".into()));
    }
    let (field, s) = setup(&a.common, a.x)?;
    let mut r = Report::new("chebyshev", field.coeff_string())
        .param("x", a.x)
        .param("alpha", &a.alpha)
        .param("k_slack", a.k_slack)
        .columns(&[
            "check",
            "x",
            "alpha",
            "observed",
            "main_term",
            "slack",
            "pass",
        ]);
    let max_alpha = alphas.iter().cloned().fold(1.0, f64::max);
    let mut y = 1000u64;
    while y <= a.x {
        let c = primebounds::lemma4_check(&s, y as f64, a.k_slack)?;
        r.row(vec![
            "lemma4".into(),
            y.to_string(),
            String::new(),
            c.observed.to_string(),
            fmt_f(c.main_term),
            fmt_f(c.slack),
            c.pass.to_string(),
        ]);
        y *= 10;
    }
    let mut x = 1000u64;
    while x as f64 * max_alpha <= a.x as f64 {
        for &al in &alphas {
            let c = primebounds::lemma3_check(&s, x as f64, al, a.k_slack)?;
            r.row(vec![
                "lemma3".into(),
                x.to_string(),
                fmt_f(al),
                c.observed.to_string(),
                fmt_f(c.main_term),
                fmt_f(c.slack),
                c.pass.to_string(),
            ]);
        }
        x *= 10;
    }
    Ok(r)
}

fn prop4(a: &Prop4Args) -> Res<Report> {
    if !(a.base > 1.0) || !(a.x > 0.0) {
        return Err(CliError::Usage("need --base > 1 and --x > 0".into()));
    }
    let top = primebounds::power(a.base, a.x + 1.0).floor();
    if top > crate::MAX_X as f64 {
        return Err(CliError::Usage(format!(
            "b^(x+1) = {top} exceeds the norm limit {}",
            crate::MAX_X
        )));
    }
    let (field, s) = setup(&a.common, top as u64)?;
    let c = primebounds::prop4_check(&s, a.base, a.x, a.epsilon)?;
    let mut r = Report::new("prop4", field.coeff_string())
        .param("base", a.base)
        .param("x", a.x)
        .param("epsilon", a.epsilon)
        .columns(&[
            "base",
            "x",
            "epsilon",
            "full_count",
            "thin_count",
            "threshold",
            "cond_i",
            "cond_ii",
        ]);
    r.row(vec![
        fmt_f(c.base),
        fmt_f(c.x),
        fmt_f(c.eps),
        c.full_count.to_string(),
        c.thin_count.to_string(),
        fmt_f(c.threshold),
        c.cond_i.to_string(),
        c.cond_ii.to_string(),
    ]);
    Ok(r)
}

fn richter_cmd(a: &RichterArgs) -> Res<Report> {
    let mut params = ConstructionParams::new(a.eta, a.k, a.base, a.epsilon)?
        .with_mass(a.mass)
        .with_capacity(a.capacity);
    if let Some(d) = a.d {
        params = params.with_d(d);
    }
    params.validate()?;
    let (field, s) = setup(&a.common, a.capacity)?;
    let pair = richter::construct_richter_pair(&s, &params)?;
    let rep = richter::report(&pair, a.eta);
    let mut r = Report::new("richter", field.coeff_string())
        .param("eta", a.eta)
        .param("k", a.k)
        .param("base", a.base)
        .param("epsilon", a.epsilon)
        .param("mass", a.mass)
        .param("capacity", a.capacity)
        .columns(&["i", "s1", "s1_norm", "s2", "s2_norm"]);
    for (i, (p, m)) in rep.s1.iter().zip(&rep.s2).enumerate() {
        r.row(vec![
            i.to_string(),
            p.ideal.clone(),
            p.norm.to_string(),
            m.ideal.clone(),
            m.norm.to_string(),
        ]);
    }
    Ok(r.summary(&rep))
}

fn named_table(domain: &std::sync::Arc<IdealDomain>, name: &str) -> Res<ArithTable> {
    if let Some(inner) = name.strip_prefix("inv:") {
        return Ok(dirichlet_inverse(&named_table(domain, inner)?)?);
    }
    Ok(match name {
        "delta" => ArithTable::delta(domain),
        "one" | "1" => ArithTable::one(domain),
        "lambda" | "liouville" => ArithTable::liouville(domain),
        "mu" | "moebius" => ArithTable::moebius(domain),
        "square" => ArithTable::indicator_square(domain),
        other => {
            return Err(CliError::Usage(format!(
                "unknown function '{other}' (expected delta, one, lambda, mu, square or inv:<name>)"
            )))
        }
    })
}

fn convolution(a: &ConvolutionArgs) -> Res<Report> {
    let (field, s) = setup(&a.common, a.x)?;
    let domain = IdealDomain::from_sieve(&s, a.x)?;
    let f = named_table(&domain, &a.f)?;
    let g = named_table(&domain, &a.g)?;
    let h = dirichlet_convolve(&f, &g)?;
    let mut r = Report::new("convolution", field.coeff_string())
        .param("x", a.x)
        .param("f", &a.f)
        .param("g", &a.g)
        .columns(&["norm", "factorization", "numerator", "denominator"]);
    for (m, v) in h.iter() {
        r.row(vec![
            m.norm().to_string(),
            m.to_string(),
            v.numer().to_string(),
            v.denom().to_string(),
        ]);
    }
    Ok(r)
}

fn abel(a: &AbelArgs) -> Res<Report> {
    let g: AbelFunction = a.g.parse()?;
    let (field, s) = setup(&a.common, a.x)?;
    let est = stats::abel_estimate(&s, a.x, g)?;
    let mut r = Report::new("abel", field.coeff_string())
        .param("x", a.x)
        .param("g", &a.g)
        .columns(&["x", "direct", "formula", "bound", "pass"]);
    r.row(vec![
        a.x.to_string(),
        fmt_f(est.direct),
        fmt_f(est.formula),
        fmt_f(est.bound),
        ((est.direct - est.formula).abs() <= est.bound).to_string(),
    ]);
    Ok(r.summary(&est))
}
