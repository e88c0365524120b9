//! Chebyshev-type checks on prime ideals: annulus counts, upper and lower
//! bounds for `pi_K`, and the multiplicity of a prime in the product of all
//! ideals up to a bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numberfield::PrimeIdeal;
use crate::sieve::IdealSieve;
use crate::stats::count_ideals;

pub const DEFAULT_K_SLACK: f64 = 5.0;
pub const DEFAULT_BASE: f64 = 16.0;

/// `base^exp`, exact when `exp` is a small integer.
pub fn power(base: f64, exp: f64) -> f64 {
    if exp.fract() == 0.0 && exp.abs() <= 64.0 {
        base.powi(exp as i32)
    } else {
        base.powf(exp)
    }
}

fn bound_to_u64(y: f64, sieve: &IdealSieve) -> Result<u64> {
    let f = y.floor();
    if !(f <= sieve.capacity() as f64) {
        return Err(Error::CapacityExceeded {
            needed: y,
            capacity: sieve.capacity(),
        });
    }
    Ok(f.max(0.0) as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusCensus {
    pub base: f64,
    pub lo_exp: f64,
    pub hi_exp: f64,
    pub prime_count: u64,
    pub ideal_count: u64,
}

/// Prime ideals and ideals with norm in `(base^lo, base^hi]`.
pub fn annulus_census(
    sieve: &IdealSieve,
    base: f64,
    lo_exp: f64,
    hi_exp: f64,
) -> Result<AnnulusCensus> {
    if !(base > 1.0) || lo_exp > hi_exp {
        return Err(Error::InvalidParams(
            "annulus needs base > 1 and lo <= hi".into(),
        ));
    }
    let lo = power(base, lo_exp);
    let hi = power(base, hi_exp);
    let hi_n = bound_to_u64(hi, sieve)?;
    let lo_n = bound_to_u64(lo, sieve)?;
    let prime_count = sieve.primes_in(lo, hi)?.len() as u64;
    let ideal_count = if hi_n > lo_n {
        count_ideals(sieve, hi_n)? - count_ideals(sieve, lo_n)?
    } else {
        0
    };
    Ok(AnnulusCensus {
        base,
        lo_exp,
        hi_exp,
        prime_count,
        ideal_count,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub observed: u64,
    pub main_term: f64,
    pub slack: f64,
    pub pass: bool,
}

/// `K x^(-1/d) log^2 x`.
pub fn slack(k_slack: f64, x: f64, degree: usize) -> f64 {
    let l = x.ln();
    k_slack * x.powf(-1.0 / degree as f64) * l * l
}

/// Prime ideals in `(x, alpha x]` against `(alpha log alpha) x / log x`.
pub fn lemma3_check(sieve: &IdealSieve, x: f64, alpha: f64, k_slack: f64) -> Result<BoundCheck> {
    if alpha < 1.0 || x < std::f64::consts::E {
        return Err(Error::InvalidParams("need alpha >= 1 and x >= e".into()));
    }
    bound_to_u64(alpha * x, sieve)?;
    let observed = sieve.primes_in(x, alpha * x)?.len() as u64;
    let main_term = alpha * alpha.ln() * x / x.ln();
    let slack = slack(k_slack, x, sieve.degree());
    Ok(BoundCheck {
        observed,
        main_term,
        slack,
        pass: observed as f64 <= main_term * (1.0 + slack),
    })
}

/// `pi_K(y)` against `y / (e log y)`.
pub fn lemma4_check(sieve: &IdealSieve, y: f64, k_slack: f64) -> Result<BoundCheck> {
    if y < 3.0 {
        return Err(Error::InvalidParams("need y >= 3".into()));
    }
    let observed = sieve.prime_count(bound_to_u64(y, sieve)?)?;
    let main_term = y / (std::f64::consts::E * y.ln());
    let slack = slack(k_slack, y, sieve.degree());
    Ok(BoundCheck {
        observed,
        main_term,
        slack,
        pass: observed as f64 >= main_term * (1.0 - slack),
    })
}

/// Exponent of `p` in the product of all ideals of norm at most `x`.
pub fn multiplicity_census(sieve: &IdealSieve, x: u64, p: &PrimeIdeal) -> Result<u64> {
    let idx = sieve
        .table()
        .index_of(&p.key())
        .ok_or_else(|| Error::InvalidParams(format!("prime {} not in the table", p.key())))?
        as u32;
    sieve.fold(
        x,
        || 0u64,
        |acc, v| {
            if let Ok(i) = v.factors.binary_search_by_key(&idx, |f| f.0) {
                *acc += v.factors[i].1 as u64;
            }
        },
        |a, b| a + b,
    )
}

/// `sum_{c >= 1} N(x / N(p)^c)`, the same multiplicity counted by divisibility.
pub fn multiplicity_by_divisibility(sieve: &IdealSieve, x: u64, p: &PrimeIdeal) -> Result<u64> {
    let mut total = 0;
    let mut q = p.norm;
    while q <= x {
        total += count_ideals(sieve, x / q)?;
        match q.checked_mul(p.norm) {
            Some(n) => q = n,
            None => break,
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop4Check {
    pub base: f64,
    pub x: f64,
    pub eps: f64,
    /// Primes in `(b^x, b^(x+1)]`.
    pub full_count: u64,
    /// Primes in `(b^x, b^(x+eps)]`.
    pub thin_count: u64,
    /// `b^x / x`
    pub threshold: f64,
    pub cond_i: bool,
    pub cond_ii: bool,
}

/// `|P ∩ A(b^x, b^(x+1))| >= b^x/x` and `|P ∩ A(b^x, b^(x+eps))| <= sqrt(eps) b^x/x`.
pub fn prop4_check(sieve: &IdealSieve, base: f64, x: f64, eps: f64) -> Result<Prop4Check> {
    if !(eps > 0.0 && eps <= 0.25) || !(x > 0.0) {
        return Err(Error::InvalidParams("need x > 0 and 0 < eps <= 1/4".into()));
    }
    let full = annulus_census(sieve, base, x, x + 1.0)?;
    let thin = annulus_census(sieve, base, x, x + eps)?;
    let threshold = power(base, x) / x;
    Ok(Prop4Check {
        base,
        x,
        eps,
        full_count: full.prime_count,
        thin_count: thin.prime_count,
        threshold,
        cond_i: full.prime_count as f64 >= threshold,
        cond_ii: thin.prime_count as f64 <= eps.sqrt() * threshold,
    })
}

/// Smallest integer `x >= 1` with `base^(x+1)` inside the sieve capacity at
/// which both conditions hold, if any.
pub fn prop4_smallest_x(sieve: &IdealSieve, base: f64, eps: f64) -> Result<Option<u32>> {
    let mut x = 1u32;
    while power(base, x as f64 + 1.0).floor() <= sieve.capacity() as f64 {
        let c = prop4_check(sieve, base, x as f64, eps)?;
        if c.cond_i && c.cond_ii {
            return Ok(Some(x));
        }
        x += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::FieldSpec;

    #[test]
    fn census_examples() {
        let g = IdealSieve::new(&FieldSpec::gaussian(), 1000).unwrap();
        let c = annulus_census(&g, 16.0, 0.0, 1.0).unwrap();
        assert_eq!(c.prime_count, 6);
        let e = annulus_census(&g, 16.0, 1.5, 1.5).unwrap();
        assert_eq!((e.prime_count, e.ideal_count), (0, 0));
        let q = IdealSieve::new(&FieldSpec::rationals(), 256).unwrap();
        let c = annulus_census(&q, 16.0, 1.0, 2.0).unwrap();
        assert_eq!(c.prime_count, 48);
        assert_eq!(c.ideal_count, 240);
        assert!(matches!(
            annulus_census(&q, 16.0, 1.0, 2.5),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn lemma_checks() {
        let q = IdealSieve::new(&FieldSpec::rationals(), 200_000).unwrap();
        let c = lemma3_check(&q, 1e5, 2.0, DEFAULT_K_SLACK).unwrap();
        assert_eq!(c.observed, 17_984 - 9_592);
        assert!(c.pass);
        assert!((c.main_term - 12041.0).abs() < 2.0);
        let one = lemma3_check(&q, 1e5, 1.0, DEFAULT_K_SLACK).unwrap();
        assert_eq!(one.observed, 0);
        assert!(one.pass);
        let c = lemma4_check(&q, 10.0, DEFAULT_K_SLACK).unwrap();
        assert_eq!(c.observed, 4);
        assert!((c.main_term - 1.598).abs() < 1e-3);
        assert!(c.pass);
    }

    #[test]
    fn legendre_multiplicity() {
        let q = IdealSieve::new(&FieldSpec::rationals(), 100).unwrap();
        let two = q.prime(0).clone();
        assert_eq!(multiplicity_census(&q, 10, &two).unwrap(), 8);
        assert_eq!(multiplicity_census(&q, 1, &two).unwrap(), 0);
        assert_eq!(multiplicity_by_divisibility(&q, 10, &two).unwrap(), 8);
        let g = IdealSieve::new(&FieldSpec::gaussian(), 100).unwrap();
        let q2 = g.prime(0).clone();
        // norms 2, 4, 8, 10, 10 carry exponents 1, 2, 3, 1, 1
        assert_eq!(multiplicity_census(&g, 10, &q2).unwrap(), 8);
        assert_eq!(multiplicity_by_divisibility(&g, 10, &q2).unwrap(), 8);
    }

    #[test]
    fn prop4_rationals() {
        let q = IdealSieve::new(&FieldSpec::rationals(), 1 << 20).unwrap();
        let c = prop4_check(&q, 16.0, 4.0, 0.25).unwrap();
        assert_eq!(c.full_count, 75_483);
        assert!(c.cond_i);
        assert!(prop4_check(&q, 16.0, 4.0, 0.3).is_err());
    }
}
