//! Counting and summatory statistics over the ideals of norm at most `X`.
//!
//! Everything here is a fold over the enumeration in [`IdealSieve`]. Sums of
//! unimodular terms `e(t) = exp(2 pi i t)` are taken over the histogram of
//! `Omega` values rather than ideal by ideal, which keeps them deterministic
//! and lets `e(0)`, `e(1/2)`, `e(1/4)`, `e(3/4)` be exact.

use std::f64::consts::TAU;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numberfield::FieldSpec;
use crate::sieve::IdealSieve;

/// `e(t) = exp(2 pi i t)`, exact at quarter turns.
pub fn e(t: f64) -> Complex64 {
    let frac = t - t.floor();
    if frac == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if frac == 0.5 {
        Complex64::new(-1.0, 0.0)
    } else if frac == 0.25 {
        Complex64::new(0.0, 1.0)
    } else if frac == 0.75 {
        Complex64::new(0.0, -1.0)
    } else {
        let (s, c) = (TAU * frac).sin_cos();
        Complex64::new(c, s)
    }
}

/// `e(num / den)` with the reduction done in integers.
pub fn e_rational(num: i64, den: u64) -> Complex64 {
    let r = num.rem_euclid(den as i64) as u64;
    if r == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * r == den {
        Complex64::new(-1.0, 0.0)
    } else if 4 * r == den {
        Complex64::new(0.0, 1.0)
    } else if 4 * r == 3 * den {
        Complex64::new(0.0, -1.0)
    } else {
        let (s, c) = (TAU * r as f64 / den as f64).sin_cos();
        Complex64::new(c, s)
    }
}

/// Number of ideals of norm at most `x`, by `Omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaProfile {
    pub x: u64,
    pub counts: Vec<u64>,
}

impl OmegaProfile {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `sum over ideals of e(alpha * Omega)`.
    pub fn weyl(&self, alpha: f64) -> Complex64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| e(alpha * k as f64) * c as f64)
            .sum()
    }

    /// `sum over ideals of e(a * Omega / q)`.
    pub fn character_sum(&self, a: i64, q: u64) -> Complex64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| e_rational(a * k as i64, q) * c as f64)
            .sum()
    }

    /// `sum over ideals of g(Omega + shift)`.
    pub fn shifted_sum(&self, g: &mut impl FnMut(u32) -> Complex64, shift: u32) -> Complex64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| g(k as u32 + shift) * c as f64)
            .sum()
    }
}

pub fn omega_profile(sieve: &IdealSieve, x: u64) -> Result<OmegaProfile> {
    let counts = sieve.fold(
        x,
        Vec::new,
        |acc: &mut Vec<u64>, v| {
            let k = v.omega as usize;
            if acc.len() <= k {
                acc.resize(k + 1, 0);
            }
            acc[k] += 1;
        },
        |mut a, b| {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (i, c) in b.into_iter().enumerate() {
                a[i] += c;
            }
            a
        },
    )?;
    Ok(OmegaProfile { x, counts })
}

/// `N(x)`.
pub fn count_ideals(sieve: &IdealSieve, x: u64) -> Result<u64> {
    sieve.count(x)
}

/// `L(x)`: sum of `(-1)^Omega` over norms `<= x`.
pub fn liouville_sum(sieve: &IdealSieve, x: u64) -> Result<i64> {
    sieve.fold(x, || 0i64, |a, v| *a += v.lambda() as i64, |a, b| a + b)
}

/// `M(x)`: sum of `mu` over norms `<= x`.
pub fn mertens(sieve: &IdealSieve, x: u64) -> Result<i64> {
    sieve.fold(x, || 0i64, |a, v| *a += v.mu() as i64, |a, b| a + b)
}

/// Sum of `mu` over norms strictly below `x`.
pub fn mertens_strict(sieve: &IdealSieve, x: u64) -> Result<i64> {
    if x <= 1 {
        return Ok(0);
    }
    mertens(sieve, x - 1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityFit {
    pub x: u64,
    pub c_hat: f64,
    /// `(x, N(x))` at `x = X / 2^j`, increasing in `x`.
    pub grid: Vec<(f64, u64)>,
    /// Error exponent `1 - 1/d`.
    pub exponent: f64,
    /// `max |N(x) - c_hat x| / x^(1-1/d)` over the lower half of the grid.
    pub fitted_constant: f64,
    pub residual_exponent_ok: bool,
}

impl DensityFit {
    pub fn residual(&self, x: f64, count: u64) -> f64 {
        (count as f64 - self.c_hat * x).abs()
    }

    /// Grid points in the validation half, with residuals scaled by
    /// `x^(1-1/d)`.
    pub fn scaled_residuals(&self) -> Vec<(f64, f64)> {
        self.grid
            .iter()
            .map(|&(x, n)| (x, self.residual(x, n) / x.powf(self.exponent)))
            .collect()
    }
}

pub const DENSITY_GRID_STEPS: u32 = 10;

/// Estimates the ideal density from `N(X)/X` and checks the residual shape
/// `|N(x) - c x| <= C x^(1-1/d)` on the dyadic grid `X / 2^j`, `j = 0..=10`:
/// `C` is fitted on the six smallest points and validated on the rest.
pub fn estimate_density(sieve: &IdealSieve, x: u64) -> Result<DensityFit> {
    if x < 1 << DENSITY_GRID_STEPS {
        return Err(Error::InvalidParams(format!(
            "density estimation needs X >= {}",
            1u64 << DENSITY_GRID_STEPS
        )));
    }
    let points: Vec<f64> = (0..=DENSITY_GRID_STEPS)
        .rev()
        .map(|j| x as f64 / (1u64 << j) as f64)
        .collect();
    let cutoffs: Vec<u64> = points.iter().map(|p| p.floor() as u64).collect();
    let counts = bucket_counts(sieve, x, &cutoffs, |_| 1)?;
    let grid: Vec<(f64, u64)> = points
        .iter()
        .zip(&counts)
        .map(|(&p, &c)| (p, c as u64))
        .collect();
    let n_x = grid.last().expect("grid is nonempty").1;
    let c_hat = n_x as f64 / x as f64;
    let exponent = 1.0 - 1.0 / sieve.degree() as f64;
    let split = grid.len().div_ceil(2);
    let scaled = |&(p, n): &(f64, u64)| (n as f64 - c_hat * p).abs() / p.powf(exponent);
    let fitted_constant = grid[..split].iter().map(scaled).fold(0.0, f64::max);
    let residual_exponent_ok = grid[split..].iter().all(|pt| scaled(pt) <= fitted_constant);
    Ok(DensityFit {
        x,
        c_hat,
        grid,
        exponent,
        fitted_constant,
        residual_exponent_ok,
    })
}

/// Cumulative sums of `weight(view)` at each cutoff (cutoffs increasing).
fn bucket_counts(
    sieve: &IdealSieve,
    x: u64,
    cutoffs: &[u64],
    weight: impl Fn(&crate::sieve::IdealView) -> i64 + Sync,
) -> Result<Vec<i64>> {
    let buckets = sieve.fold(
        x,
        || vec![0i64; cutoffs.len()],
        |acc, v| {
            let b = cutoffs.partition_point(|&c| c < v.norm);
            if b < acc.len() {
                acc[b] += weight(v);
            }
        },
        |mut a, b| {
            for (s, t) in a.iter_mut().zip(b) {
                *s += t;
            }
            a
        },
    )?;
    let mut run = 0;
    Ok(buckets
        .into_iter()
        .map(|b| {
            run += b;
            run
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SummaryKind {
    Count,
    L,
    M,
    PiK,
    ExpSumReal,
    ExpSumImag,
    Weyl,
}

impl FromStr for SummaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "count" | "N" => SummaryKind::Count,
            "L" => SummaryKind::L,
            "M" => SummaryKind::M,
            "pi_K" | "pi" => SummaryKind::PiK,
            "exp_sum_real" => SummaryKind::ExpSumReal,
            "exp_sum_imag" => SummaryKind::ExpSumImag,
            "weyl" => SummaryKind::Weyl,
            other => {
                return Err(Error::InvalidParams(format!(
                    "unknown series kind '{other}'"
                )))
            }
        })
    }
}

impl SummaryKind {
    pub fn name(&self) -> &'static str {
        match self {
            SummaryKind::Count => "count",
            SummaryKind::L => "L",
            SummaryKind::M => "M",
            SummaryKind::PiK => "pi_K",
            SummaryKind::ExpSumReal => "exp_sum_real",
            SummaryKind::ExpSumImag => "exp_sum_imag",
            SummaryKind::Weyl => "weyl",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummarySeries {
    pub kind: SummaryKind,
    pub xs: Vec<u64>,
    pub values: Vec<f64>,
}

/// `2, 4, 8, ...` up to `x`, with `x` itself appended when it is not a power
/// of two.
pub fn dyadic_points(x: u64) -> Vec<u64> {
    let mut pts = Vec::new();
    let mut p = 2u64;
    while p <= x {
        pts.push(p);
        p *= 2;
    }
    if pts.last() != Some(&x) && x >= 2 {
        pts.push(x);
    }
    pts
}

/// `N`, `L`, `M` or `pi_K` at the dyadic points up to `x` (exact integers).
pub fn summatory(sieve: &IdealSieve, x: u64, kind: SummaryKind) -> Result<SummarySeries> {
    if x < 2 {
        return Err(Error::InvalidParams("summatory needs X >= 2".into()));
    }
    let xs = dyadic_points(x);
    let values: Vec<i64> = match kind {
        SummaryKind::Count => bucket_counts(sieve, x, &xs, |_| 1)?,
        SummaryKind::L => bucket_counts(sieve, x, &xs, |v| v.lambda() as i64)?,
        SummaryKind::M => bucket_counts(sieve, x, &xs, |v| v.mu() as i64)?,
        SummaryKind::PiK => xs
            .iter()
            .map(|&p| sieve.prime_count(p).map(|c| c as i64))
            .collect::<Result<_>>()?,
        other => {
            return Err(Error::InvalidParams(format!(
                "'{}' is not an integer summatory series",
                other.name()
            )))
        }
    };
    Ok(SummarySeries {
        kind,
        xs,
        values: values.into_iter().map(|v| v as f64).collect(),
    })
}

/// `sum over N(m) <= x of e(a Omega(m) / q)`.
pub fn exp_sum(sieve: &IdealSieve, x: u64, a: u64, q: u64) -> Result<Complex64> {
    if q == 0 || a >= q {
        return Err(Error::InvalidParams("need q >= 1 and 0 <= a < q".into()));
    }
    Ok(omega_profile(sieve, x)?.character_sum(a as i64, q))
}

/// `sum over N(m) <= x of e(alpha Omega(m))`.
pub fn weyl_sum(sieve: &IdealSieve, x: u64, alpha: f64) -> Result<Complex64> {
    Ok(omega_profile(sieve, x)?.weyl(alpha))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueHistogram {
    pub q: u64,
    pub counts: Vec<u64>,
    pub total: u64,
    pub parseval_gap: f64,
}

impl ResidueHistogram {
    /// Largest `|count / N - 1/q|` over the residue classes.
    pub fn max_deviation(&self) -> f64 {
        let uniform = 1.0 / self.q as f64;
        self.counts
            .iter()
            .map(|&c| (c as f64 / self.total as f64 - uniform).abs())
            .fold(0.0, f64::max)
    }
}

/// Counts of `Omega mod q`, with the gap in the Parseval identity
/// `sum_l |count_l / N - 1/q|^2 = (1/q) sum_{j=1}^{q-1} |(1/N) sum e(j Omega / q)|^2`.
pub fn residue_histogram(sieve: &IdealSieve, x: u64, q: u64) -> Result<ResidueHistogram> {
    if q == 0 {
        return Err(Error::InvalidParams("q must be positive".into()));
    }
    let profile = omega_profile(sieve, x)?;
    Ok(histogram_from_profile(&profile, q))
}

pub fn histogram_from_profile(profile: &OmegaProfile, q: u64) -> ResidueHistogram {
    let mut counts = vec![0u64; q as usize];
    for (k, &c) in profile.counts.iter().enumerate() {
        counts[k % q as usize] += c;
    }
    let total = profile.total();
    let n = total as f64;
    let qf = q as f64;
    let lhs: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 / n - 1.0 / qf;
            d * d
        })
        .sum();
    let rhs: f64 = (1..q)
        .map(|j| (profile.character_sum(j as i64, q) / n).norm_sqr())
        .sum::<f64>()
        / qf;
    ResidueHistogram {
        q,
        counts,
        total,
        parseval_gap: (lhs - rhs).abs(),
    }
}

/// Built-in test functions for the Abel summation estimator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbelFunction {
    /// `g(t) = 1`
    One,
    /// `g(t) = 1/t`
    Inverse,
    /// `g(t) = t^(-(1 - 1/d))`
    InversePower,
    /// `g(t) = log t`
    Log,
}

impl FromStr for AbelFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "1" | "one" => AbelFunction::One,
            "1/t" | "inv" => AbelFunction::Inverse,
            "inv_pow" | "1/t^(1-1/d)" => AbelFunction::InversePower,
            "log" | "log t" => AbelFunction::Log,
            other => return Err(Error::UnknownFunctionId(other.to_string())),
        })
    }
}

impl AbelFunction {
    /// `beta = 1 - 1/d`.
    fn eval(&self, t: f64, beta: f64) -> f64 {
        match self {
            AbelFunction::One => 1.0,
            AbelFunction::Inverse => 1.0 / t,
            AbelFunction::InversePower => t.powf(-beta),
            AbelFunction::Log => t.ln(),
        }
    }

    /// `int_1^x g(t) dt`.
    fn integral(&self, x: f64, beta: f64) -> f64 {
        match self {
            AbelFunction::One => x - 1.0,
            AbelFunction::Inverse => x.ln(),
            AbelFunction::InversePower => (x.powf(1.0 - beta) - 1.0) / (1.0 - beta),
            AbelFunction::Log => x * x.ln() - x + 1.0,
        }
    }

    /// `int_1^x |g'(t)| t^beta dt`.
    fn derivative_weight(&self, x: f64, beta: f64) -> f64 {
        match self {
            AbelFunction::One => 0.0,
            AbelFunction::Inverse => {
                if beta == 1.0 {
                    x.ln()
                } else {
                    (1.0 - x.powf(beta - 1.0)) / (1.0 - beta)
                }
            }
            AbelFunction::InversePower => beta * x.ln(),
            AbelFunction::Log => {
                if beta == 0.0 {
                    x.ln()
                } else {
                    (x.powf(beta) - 1.0) / beta
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbelEstimate {
    pub direct: f64,
    pub formula: f64,
    pub bound: f64,
}

/// Compares `sum over N(m) <= X of g(N(m))` with `c g(1) + c int_1^X g`,
/// against the bound `C (|g(X)| X^(1-1/d) + int_1^X |g'(t)| t^(1-1/d) dt)`.
pub fn abel_estimate(sieve: &IdealSieve, x: u64, g: AbelFunction) -> Result<AbelEstimate> {
    let fit = estimate_density(sieve, x)?;
    let beta = fit.exponent;
    let direct = sieve.fold(
        x,
        || 0.0f64,
        |acc, v| *acc += g.eval(v.norm as f64, beta),
        |a, b| a + b,
    )?;
    let xf = x as f64;
    let formula = fit.c_hat * g.eval(1.0, beta) + fit.c_hat * g.integral(xf, beta);
    let bound = fit.fitted_constant
        * (g.eval(xf, beta).abs() * xf.powf(beta) + g.derivative_weight(xf, beta));
    Ok(AbelEstimate {
        direct,
        formula,
        bound,
    })
}

/// `sum over N(p) <= x of 1/N(p)`.
pub fn prime_reciprocal_sum(sieve: &IdealSieve, x: u64) -> Result<f64> {
    let primes = sieve.primes_in(0.0, x as f64)?;
    Ok(primes.iter().map(|p| 1.0 / p.norm as f64).sum())
}

/// `estimate_density` for a field directly.
pub fn estimate_density_for(field: &FieldSpec, x: u64) -> Result<DensityFit> {
    estimate_density(&IdealSieve::new(field, x)?, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(field: FieldSpec, x: u64) -> IdealSieve {
        IdealSieve::new(&field, x).unwrap()
    }

    #[test]
    fn exact_quarter_turns() {
        assert_eq!(e(0.0), Complex64::new(1.0, 0.0));
        assert_eq!(e(2.5), Complex64::new(-1.0, 0.0));
        assert_eq!(e_rational(3, 4), Complex64::new(0.0, -1.0));
        assert_eq!(e_rational(-1, 2), Complex64::new(-1.0, 0.0));
        assert!((e(1.0 / 3.0) - Complex64::new(-0.5, 0.75f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn counts_and_summatory_at_ten() {
        let q = sieve(FieldSpec::rationals(), 10);
        assert_eq!(count_ideals(&q, 10).unwrap(), 10);
        assert_eq!(count_ideals(&q, 1).unwrap(), 1);
        let l = summatory(&q, 10, SummaryKind::L).unwrap();
        assert_eq!(l.xs, vec![2, 4, 8, 10]);
        assert_eq!(*l.values.last().unwrap(), 0.0);
        let m = summatory(&q, 10, SummaryKind::M).unwrap();
        assert_eq!(*m.values.last().unwrap(), -1.0);
        assert_eq!(mertens_strict(&q, 10).unwrap(), -2);
        let g = sieve(FieldSpec::gaussian(), 10);
        assert_eq!(count_ideals(&g, 10).unwrap(), 9);
        let pi = summatory(&g, 10, SummaryKind::PiK).unwrap();
        assert_eq!(*pi.values.last().unwrap(), 4.0);
    }

    #[test]
    fn exp_sum_special_cases() {
        let g = sieve(FieldSpec::gaussian(), 5000);
        let n = count_ideals(&g, 5000).unwrap() as f64;
        assert_eq!(exp_sum(&g, 5000, 0, 7).unwrap(), Complex64::new(n, 0.0));
        let l = liouville_sum(&g, 5000).unwrap() as f64;
        assert_eq!(exp_sum(&g, 5000, 1, 2).unwrap(), Complex64::new(l, 0.0));
        assert_eq!(weyl_sum(&g, 5000, 0.5).unwrap(), Complex64::new(l, 0.0));
        assert_eq!(weyl_sum(&g, 5000, 0.0).unwrap(), Complex64::new(n, 0.0));
        assert!(exp_sum(&g, 5000, 3, 3).is_err());
    }

    #[test]
    fn gaussian_exp_sum_at_ten() {
        // Omega over the nine ideals of norm <= 10: {0,1,2,1,1,3,2,1,2}
        let g = sieve(FieldSpec::gaussian(), 10);
        let s = exp_sum(&g, 10, 1, 3).unwrap();
        let expected: Complex64 = [0, 1, 2, 1, 1, 3, 2, 1, 2]
            .iter()
            .map(|&k: &i32| Complex64::from_polar(1.0, TAU * k as f64 / 3.0))
            .sum();
        assert!((s - expected).norm() < 1e-12);
    }

    #[test]
    fn histogram_basics() {
        let q = sieve(FieldSpec::rationals(), 10);
        let h = residue_histogram(&q, 10, 2).unwrap();
        assert_eq!(h.counts, vec![5, 5]);
        let one = residue_histogram(&q, 10, 1).unwrap();
        assert_eq!(one.counts, vec![10]);
        assert_eq!(one.parseval_gap, 0.0);
        for qq in 2..8 {
            assert!(residue_histogram(&q, 10, qq).unwrap().parseval_gap < 1e-12);
        }
    }

    #[test]
    fn density_of_rationals_is_exact() {
        let q = sieve(FieldSpec::rationals(), 4096);
        let fit = estimate_density(&q, 4096).unwrap();
        assert_eq!(fit.c_hat, 1.0);
        assert_eq!(fit.grid.len(), 11);
        assert!(fit.grid.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(estimate_density(&q, 1000).is_err());
    }

    #[test]
    fn abel_on_rationals() {
        let q = sieve(FieldSpec::rationals(), 10_000);
        let one = abel_estimate(&q, 10_000, AbelFunction::One).unwrap();
        assert_eq!(one.direct, 10_000.0);
        assert!((one.formula - 10_000.0).abs() < 1e-9);
        let inv = abel_estimate(&q, 10_000, AbelFunction::Inverse).unwrap();
        assert!((inv.formula - (1.0 + 10_000f64.ln())).abs() < 1e-12);
        assert!((inv.direct - inv.formula).abs() <= 1.0);
        assert!("sin".parse::<AbelFunction>().is_err());
    }

    #[test]
    fn prime_reciprocals() {
        let q = sieve(FieldSpec::rationals(), 10);
        let s = prime_reciprocal_sum(&q, 10).unwrap();
        assert!((s - (0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0)).abs() < 1e-15);
        assert_eq!(prime_reciprocal_sum(&q, 1).unwrap(), 0.0);
        let g = sieve(FieldSpec::gaussian(), 10);
        let s = prime_reciprocal_sum(&g, 10).unwrap();
        assert!((s - (0.5 + 0.2 + 0.2 + 1.0 / 9.0)).abs() < 1e-15);
    }
}
