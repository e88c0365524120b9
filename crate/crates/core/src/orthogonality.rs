//! Logarithmic averages over finite sets of ideals, the two sides of the
//! variance estimate for divisor indicators, and the discrepancy between
//! shifted averages of `g(Omega)`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numberfield::{FieldSpec, Ideal};
use crate::sieve::{IdealSieve, IdealView};
use crate::stats::{e, e_rational, omega_profile};

/// A finite nonempty set of ideals of one field.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealSet {
    field: FieldSpec,
    members: Vec<Ideal>,
    log_weight_total: f64,
}

impl IdealSet {
    pub fn new(field: &FieldSpec, members: Vec<Ideal>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidParams("ideal set must be nonempty".into()));
        }
        if members.iter().any(|m| m.field_tag() != field.tag()) {
            return Err(Error::FieldMismatch);
        }
        let mut seen = HashSet::with_capacity(members.len());
        if let Some(dup) = members.iter().find(|m| !seen.insert(*m)) {
            return Err(Error::InvalidParams(format!("duplicate member {dup}")));
        }
        let log_weight_total = members.iter().map(|m| 1.0 / m.norm() as f64).sum();
        Ok(IdealSet {
            field: field.clone(),
            members,
            log_weight_total,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn members(&self) -> &[Ideal] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `sum over members of 1/N(n)`.
    pub fn log_weight_total(&self) -> f64 {
        self.log_weight_total
    }

    pub fn max_norm(&self) -> u64 {
        self.members.iter().map(Ideal::norm).max().unwrap_or(1)
    }
}

/// Logarithmic average `(sum h(s)/N(s)) / (sum 1/N(s))`.
pub fn log_average(set: &IdealSet, mut h: impl FnMut(&Ideal) -> Complex64) -> Complex64 {
    let s: Complex64 = set.members.iter().map(|m| h(m) / m.norm() as f64).sum();
    s / set.log_weight_total
}

/// A function `N_0 -> C` bounded by 1 in modulus, memoized on first use.
pub struct BoundedSequenceFn {
    id: String,
    f: Box<dyn Fn(u32) -> Complex64 + Send + Sync>,
    memo: Vec<Complex64>,
}

impl fmt::Debug for BoundedSequenceFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundedSequenceFn")
            .field("id", &self.id)
            .finish()
    }
}

impl BoundedSequenceFn {
    pub fn custom(id: &str, f: impl Fn(u32) -> Complex64 + Send + Sync + 'static) -> Self {
        BoundedSequenceFn {
            id: id.to_string(),
            f: Box::new(f),
            memo: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::custom("one", |_| Complex64::new(1.0, 0.0))
    }

    /// `(-1)^n`
    pub fn parity() -> Self {
        Self::custom("parity", |n| {
            Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        })
    }

    /// `e(a n / q)`
    pub fn character(a: i64, q: u64) -> Self {
        Self::custom(&format!("exp:{a}/{q}"), move |n| {
            e_rational(a * n as i64, q)
        })
    }

    /// `e(alpha n)`
    pub fn weyl(alpha: f64) -> Self {
        Self::custom(&format!("weyl:{alpha}"), move |n| e(alpha * n as f64))
    }

    /// Parses `one`, `parity`, `exp:a/q` or `weyl:alpha`.
    pub fn parse(id: &str) -> Result<Self> {
        if id == "one" {
            return Ok(Self::one());
        }
        if id == "parity" {
            return Ok(Self::parity());
        }
        if let Some(rest) = id.strip_prefix("exp:") {
            let bad = || Error::UnknownFunctionId(id.to_string());
            let (a, q) = rest.split_once('/').ok_or_else(bad)?;
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            return Ok(Self::character(a, q));
        }
        if let Some(rest) = id.strip_prefix("weyl:") {
            let alpha: f64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::UnknownFunctionId(id.to_string()))?;
            return Ok(Self::weyl(alpha));
        }
        Err(Error::UnknownFunctionId(id.to_string()))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn eval(&mut self, n: u32) -> Result<Complex64> {
        let n = n as usize;
        while self.memo.len() <= n {
            let k = self.memo.len() as u32;
            let v = (self.f)(k);
            if !(v.norm() <= 1.0 + 1e-12) {
                return Err(Error::InvalidParams(format!(
                    "{}({k}) has modulus {} > 1",
                    self.id,
                    v.norm()
                )));
            }
            self.memo.push(v);
        }
        Ok(self.memo[n])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
    pub bound: f64,
    /// `N(X)`
    pub ideal_count: u64,
    /// `sum over members of 1/N(n)`
    pub weight_total: f64,
}

impl Sides {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn within_bound(&self) -> bool {
        self.gap() <= self.bound
    }
}

/// Members of a set in prime-table index form.
struct IndexedSet {
    members: Vec<Vec<(u32, u32)>>,
    lookup: HashSet<Vec<(u32, u32)>>,
    /// Largest exponent of each relevant prime index among the members.
    caps: HashMap<u32, u32>,
}

impl IndexedSet {
    fn new(sieve: &IdealSieve, set: &IdealSet) -> Result<Self> {
        let mut members = Vec::with_capacity(set.len());
        let mut caps: HashMap<u32, u32> = HashMap::new();
        for m in &set.members {
            let mut idx = Vec::with_capacity(m.factors().len());
            for &(key, exp) in m.factors() {
                let i = sieve.table().index_of(&key).ok_or_else(|| {
                    Error::InvalidParams(format!("prime {key} is outside the sieve"))
                })? as u32;
                idx.push((i, exp));
                let c = caps.entry(i).or_insert(0);
                *c = (*c).max(exp);
            }
            members.push(idx);
        }
        let lookup = members.iter().cloned().collect();
        Ok(IndexedSet {
            members,
            lookup,
            caps,
        })
    }

    /// Number of members dividing the visited ideal.
    fn divisor_count(
        &self,
        v: &IdealView,
        rel: &mut Vec<(u32, u32)>,
        buf: &mut Vec<(u32, u32)>,
    ) -> u64 {
        rel.clear();
        for &(i, e) in v.factors {
            if let Some(&cap) = self.caps.get(&i) {
                rel.push((i, e.min(cap)));
            }
        }
        buf.clear();
        self.count_rec(rel, 0, buf)
    }

    fn count_rec(&self, rel: &[(u32, u32)], pos: usize, buf: &mut Vec<(u32, u32)>) -> u64 {
        if pos == rel.len() {
            return self.lookup.contains(buf.as_slice()) as u64;
        }
        let (i, cap) = rel[pos];
        let mut total = self.count_rec(rel, pos + 1, buf);
        for e in 1..=cap {
            buf.push((i, e));
            total += self.count_rec(rel, pos + 1, buf);
            buf.pop();
        }
        total
    }
}

/// `N(gcd(a, b))` for index-form factorizations.
fn gcd_norm(sieve: &IdealSieve, a: &[(u32, u32)], b: &[(u32, u32)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut n = 1.0;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let e = a[i].1.min(b[j].1);
                n *= (sieve.prime(a[i].0).norm as f64).powi(e as i32);
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn check_members(set: &IdealSet, sieve: &IdealSieve, x: u64) -> Result<()> {
    if set.field.tag() != sieve.field().tag() {
        return Err(Error::FieldMismatch);
    }
    if let Some(m) = set.members.iter().find(|m| m.norm() > x) {
        return Err(Error::MemberNormExceedsX { norm: m.norm(), x });
    }
    Ok(())
}

/// Both sides of the variance estimate
/// `(1/X) sum_{N(m) <= X} |sum_{n in S} 1_{n|m} - sum_{n in S} 1/N(n)|^2
///  ~ c sum_{n, n'} Phi(n, n') / (N(n) N(n'))`,
/// with error shape `K |S|^(1+1/d) X^(-1/d)`.
pub fn prop2_sides(
    sieve: &IdealSieve,
    set: &IdealSet,
    x: u64,
    c_hat: f64,
    k_slack: f64,
) -> Result<Sides> {
    check_members(set, sieve, x)?;
    let idx = IndexedSet::new(sieve, set)?;
    let a = set.log_weight_total;
    let (sq_sum, count) = sieve
        .fold(
            x,
            || (0.0f64, 0u64, Vec::new(), Vec::new()),
            |acc, v| {
                let (s, c, rel, buf) = acc;
                let d = idx.divisor_count(v, rel, buf) as f64 - a;
                *s += d * d;
                *c += 1;
            },
            |l, r| (l.0 + r.0, l.1 + r.1, l.2, l.3),
        )
        .map(|(s, c, _, _)| (s, c))?;
    let norms: Vec<f64> = set.members.iter().map(|m| m.norm() as f64).collect();
    let rows: Vec<f64> = (0..idx.members.len())
        .into_par_iter()
        .map(|i| {
            (0..idx.members.len())
                .map(|j| {
                    let phi = gcd_norm(sieve, &idx.members[i], &idx.members[j]) - 1.0;
                    phi / (norms[i] * norms[j])
                })
                .sum::<f64>()
        })
        .collect();
    let phi_sum: f64 = rows.iter().sum();
    let d = sieve.degree() as f64;
    let xf = x as f64;
    Ok(Sides {
        lhs: sq_sum / xf,
        rhs: c_hat * phi_sum,
        bound: k_slack * (set.len() as f64).powf(1.0 + 1.0 / d) * xf.powf(-1.0 / d),
        ideal_count: count,
        weight_total: a,
    })
}

/// The same estimate in averaged form:
/// `E_{N(m) <= X} |E^log_{n in S}(N(n) 1_{n|m} - 1)|^2 ~ E^log E^log Phi`.
pub fn corollary_sides(
    sieve: &IdealSieve,
    set: &IdealSet,
    x: u64,
    c_hat: f64,
    k_slack: f64,
) -> Result<Sides> {
    let p = prop2_sides(sieve, set, x, c_hat, k_slack)?;
    Ok(renormalize(&p, x, c_hat))
}

/// Converts `prop2_sides` output to the averaged normalization.
pub fn renormalize(p: &Sides, x: u64, c_hat: f64) -> Sides {
    let a2 = p.weight_total * p.weight_total;
    Sides {
        lhs: p.lhs * x as f64 / (p.ideal_count as f64 * a2),
        rhs: p.rhs / (c_hat * a2),
        bound: p.bound,
        ideal_count: p.ideal_count,
        weight_total: p.weight_total,
    }
}

/// `N(gcd(a, b))` from the factorizations.
pub fn gcd_norm_of(a: &Ideal, b: &Ideal) -> u64 {
    let (fa, fb) = (a.factors(), b.factors());
    let (mut i, mut j) = (0, 0);
    let mut n = 1u64;
    while i < fa.len() && j < fb.len() {
        match fa[i].0.cmp(&fb[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n *= fa[i].0.norm.pow(fa[i].1.min(fb[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// `E^log_{n in S} E^log_{n' in S} Phi(n, n')`.
pub fn phi_log_average(set: &IdealSet) -> f64 {
    let members = &set.members;
    let rows: Vec<f64> = members
        .par_iter()
        .map(|a| {
            let na = a.norm() as f64;
            members
                .iter()
                .map(|b| (gcd_norm_of(a, b) - 1) as f64 / (na * b.norm() as f64))
                .sum::<f64>()
        })
        .collect();
    let a = set.log_weight_total;
    rows.iter().sum::<f64>() / (a * a)
}

/// `(sum g(Omega + k1) - sum g(Omega + k2)) / N(X)` over norms `<= X`.
pub fn theorem1_difference(
    sieve: &IdealSieve,
    g: &mut BoundedSequenceFn,
    k1: u32,
    k2: u32,
    x: u64,
) -> Result<Complex64> {
    let profile = omega_profile(sieve, x)?;
    let n = profile.total() as f64;
    let mut diff = Complex64::new(0.0, 0.0);
    for (k, &c) in profile.counts.iter().enumerate() {
        let k = k as u32;
        diff += (g.eval(k + k1)? - g.eval(k + k2)?) * c as f64;
    }
    Ok(diff / n)
}

/// `|sum g(Omega + k1) - sum g(Omega + k2)| / N(X)`.
pub fn theorem1_discrepancy(
    sieve: &IdealSieve,
    g: &mut BoundedSequenceFn,
    k1: u32,
    k2: u32,
    x: u64,
) -> Result<f64> {
    Ok(theorem1_difference(sieve, g, k1, k2, x)?.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::PrimeIdeal;

    fn gauss(x: u64) -> IdealSieve {
        IdealSieve::new(&FieldSpec::gaussian(), x).unwrap()
    }

    fn prime(s: &IdealSieve, i: u32) -> Ideal {
        let p: &PrimeIdeal = s.prime(i);
        Ideal::prime(s.field(), p)
    }

    #[test]
    fn log_average_examples() {
        let s = gauss(100);
        let g = s.field().clone();
        let set = IdealSet::new(&g, vec![Ideal::unit(&g), prime(&s, 0)]).unwrap();
        let avg = log_average(&set, |m| Complex64::new(m.norm() as f64, 0.0));
        assert!((avg.re - 4.0 / 3.0).abs() < 1e-15);
        let one = log_average(&set, |_| Complex64::new(1.0, 0.0));
        assert!((one.re - 1.0).abs() < 1e-15);
        let single = IdealSet::new(&g, vec![prime(&s, 2)]).unwrap();
        let v = log_average(&single, |m| Complex64::new(m.omega() as f64 + 0.5, 0.0));
        assert!((v.re - 1.5).abs() < 1e-15);
    }

    #[test]
    fn set_validation() {
        let s = gauss(100);
        let g = s.field().clone();
        assert!(IdealSet::new(&g, vec![]).is_err());
        assert!(IdealSet::new(&g, vec![prime(&s, 0), prime(&s, 0)]).is_err());
        let q = FieldSpec::rationals();
        assert_eq!(
            IdealSet::new(&q, vec![prime(&s, 0)]),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn prop2_examples() {
        let s = gauss(100);
        let g = s.field().clone();
        let c = std::f64::consts::FRAC_PI_4;
        let unit = IdealSet::new(&g, vec![Ideal::unit(&g)]).unwrap();
        let p = prop2_sides(&s, &unit, 10, c, 5.0).unwrap();
        assert_eq!((p.lhs, p.rhs), (0.0, 0.0));
        let q2 = IdealSet::new(&g, vec![prime(&s, 0)]).unwrap();
        let p = prop2_sides(&s, &q2, 10, c, 5.0).unwrap();
        assert!((p.lhs - 9.0 / 40.0).abs() < 1e-15);
        assert!((p.rhs - c / 4.0).abs() < 1e-15);
        assert_eq!(p.ideal_count, 9);
        let big = IdealSet::new(&g, vec![prime(&s, 5)]).unwrap();
        assert!(matches!(
            prop2_sides(&s, &big, 10, c, 5.0),
            Err(Error::MemberNormExceedsX { .. })
        ));
    }

    #[test]
    fn coprime_set_has_diagonal_rhs() {
        let s = gauss(1000);
        let g = s.field().clone();
        let members: Vec<Ideal> = (0..4).map(|i| prime(&s, i)).collect();
        let diag: f64 = members
            .iter()
            .map(|m| (m.norm() as f64 - 1.0) / (m.norm() as f64).powi(2))
            .sum();
        let set = IdealSet::new(&g, members).unwrap();
        let p = prop2_sides(&s, &set, 1000, 1.0, 5.0).unwrap();
        assert!((p.rhs - diag).abs() < 1e-15);
        let c = corollary_sides(&s, &set, 1000, 1.0, 5.0).unwrap();
        let a = set.log_weight_total();
        assert!((c.lhs - p.lhs * 1000.0 / (p.ideal_count as f64 * a * a)).abs() < 1e-12);
    }

    #[test]
    fn phi_average_of_primes_is_diagonal() {
        let s = gauss(1000);
        let g = s.field().clone();
        let members: Vec<Ideal> = (0..30).map(|i| prime(&s, i)).collect();
        let a: f64 = members.iter().map(|m| 1.0 / m.norm() as f64).sum();
        let diag: f64 = members
            .iter()
            .map(|m| (m.norm() as f64 - 1.0) / (m.norm() as f64).powi(2))
            .sum();
        let set = IdealSet::new(&g, members).unwrap();
        assert!((phi_log_average(&set) - diag / (a * a)).abs() < 1e-12);
        let p = prop2_sides(&s, &set, 1000, 1.0, 5.0).unwrap();
        assert!((phi_log_average(&set) - p.rhs / (a * a)).abs() < 1e-12);
    }

    #[test]
    fn theorem1_examples() {
        let q = IdealSieve::new(&FieldSpec::rationals(), 1000).unwrap();
        let mut one = BoundedSequenceFn::one();
        assert_eq!(theorem1_discrepancy(&q, &mut one, 0, 3, 1000).unwrap(), 0.0);
        let mut par = BoundedSequenceFn::parity();
        assert_eq!(theorem1_discrepancy(&q, &mut par, 2, 2, 1000).unwrap(), 0.0);
        assert_eq!(theorem1_discrepancy(&q, &mut par, 0, 1, 10).unwrap(), 0.0);
        let mut bad = BoundedSequenceFn::custom("big", |n| Complex64::new(n as f64, 0.0));
        assert!(theorem1_discrepancy(&q, &mut bad, 0, 1, 10).is_err());
        assert!(BoundedSequenceFn::parse("exp:1/3").is_ok());
        assert!(matches!(
            BoundedSequenceFn::parse("cos"),
            Err(Error::UnknownFunctionId(_))
        ));
    }
}
