//! Arithmetic functions on ideals and exact Dirichlet convolution.
//!
//! An [`ArithTable`] assigns an exact rational to every ideal of norm at most
//! `X`. Convolution walks each ideal's divisor lattice (from its exponent
//! vector), so identities such as `lambda * 1 = 1_square` are checked with
//! equality rather than a tolerance.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numberfield::{FieldSpec, Ideal, PrimeKey};
use crate::sieve::IdealSieve;

pub fn omega(m: &Ideal) -> u32 {
    m.omega()
}

pub fn liouville(m: &Ideal) -> i8 {
    if m.omega() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn moebius(m: &Ideal) -> i8 {
    if m.is_squarefree() {
        liouville(m)
    } else {
        0
    }
}

pub fn indicator_square(m: &Ideal) -> i8 {
    m.factors().iter().all(|&(_, e)| e % 2 == 0) as i8
}

/// The ideals of norm at most `x`, sorted, with a reverse index.
#[derive(Debug)]
pub struct IdealDomain {
    field: FieldSpec,
    x: u64,
    ideals: Vec<Ideal>,
    index: HashMap<Ideal, usize>,
}

impl IdealDomain {
    pub fn new(field: &FieldSpec, x: u64) -> Result<Arc<Self>> {
        let sieve = IdealSieve::new(field, x.max(1))?;
        Self::from_sieve(&sieve, x)
    }

    pub fn from_sieve(sieve: &IdealSieve, x: u64) -> Result<Arc<Self>> {
        let ideals = sieve.ideals(x)?;
        let index = ideals
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(Arc::new(IdealDomain {
            field: sieve.field().clone(),
            x,
            ideals,
            index,
        }))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn position(&self, m: &Ideal) -> Option<usize> {
        self.index.get(m).copied()
    }

    fn same_as(&self, other: &IdealDomain) -> bool {
        self.field.tag() == other.field.tag() && self.x == other.x
    }

    /// Ordered factorizations `m = d1 * d2`, as index pairs.
    fn divisor_pairs(&self, m: &Ideal) -> Vec<(usize, usize)> {
        let fs = m.factors();
        let mut exps = vec![0u32; fs.len()];
        let mut out = Vec::new();
        loop {
            let d1: Vec<(PrimeKey, u32)> =
                fs.iter().zip(&exps).map(|(&(k, _), &b)| (k, b)).collect();
            let d2: Vec<(PrimeKey, u32)> = fs
                .iter()
                .zip(&exps)
                .map(|(&(k, a), &b)| (k, a - b))
                .collect();
            let tag = self.field.tag();
            let i1 = Ideal::from_factors_tagged(tag, d1).expect("divisor norm is bounded");
            let i2 = Ideal::from_factors_tagged(tag, d2).expect("divisor norm is bounded");
            out.push((self.index[&i1], self.index[&i2]));
            // odometer over exponent vectors
            let mut i = 0;
            loop {
                if i == fs.len() {
                    return out;
                }
                if exps[i] < fs[i].1 {
                    exps[i] += 1;
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }
}

/// Exact rational values on every ideal of an [`IdealDomain`].
#[derive(Clone, Debug)]
pub struct ArithTable {
    domain: Arc<IdealDomain>,
    values: Vec<BigRational>,
}

impl PartialEq for ArithTable {
    fn eq(&self, other: &Self) -> bool {
        self.domain.same_as(&other.domain) && self.values == other.values
    }
}

impl ArithTable {
    pub fn from_fn(domain: &Arc<IdealDomain>, f: impl Fn(&Ideal) -> BigRational) -> Self {
        let values = domain.ideals.iter().map(f).collect();
        ArithTable {
            domain: Arc::clone(domain),
            values,
        }
    }

    pub fn from_int_fn(domain: &Arc<IdealDomain>, f: impl Fn(&Ideal) -> i64) -> Self {
        Self::from_fn(domain, |m| BigRational::from_integer(BigInt::from(f(m))))
    }

    /// Identity for convolution: 1 at the unit ideal, 0 elsewhere.
    pub fn delta(domain: &Arc<IdealDomain>) -> Self {
        Self::from_int_fn(domain, |m| m.is_unit() as i64)
    }

    pub fn one(domain: &Arc<IdealDomain>) -> Self {
        Self::from_int_fn(domain, |_| 1)
    }

    pub fn liouville(domain: &Arc<IdealDomain>) -> Self {
        Self::from_int_fn(domain, |m| liouville(m) as i64)
    }

    pub fn moebius(domain: &Arc<IdealDomain>) -> Self {
        Self::from_int_fn(domain, |m| moebius(m) as i64)
    }

    pub fn indicator_square(domain: &Arc<IdealDomain>) -> Self {
        Self::from_int_fn(domain, |m| indicator_square(m) as i64)
    }

    pub fn domain(&self) -> &Arc<IdealDomain> {
        &self.domain
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, m: &Ideal) -> Option<&BigRational> {
        self.domain.position(m).map(|i| &self.values[i])
    }

    /// Iterates `(ideal, value)` in norm order.
    pub fn iter(&self) -> impl Iterator<Item = (&Ideal, &BigRational)> {
        self.domain.ideals.iter().zip(self.values.iter())
    }

    /// CSV with columns `norm,factorization,numerator,denominator`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("norm,factorization,numerator,denominator\n");
        for (m, v) in self.iter() {
            let _ = writeln!(out, "{},{},{},{}", m.norm(), m, v.numer(), v.denom());
        }
        out
    }
}

/// `(F * G)(m) = sum over d1 d2 = m of F(d1) G(d2)`.
pub fn dirichlet_convolve(f: &ArithTable, g: &ArithTable) -> Result<ArithTable> {
    if !f.domain.same_as(&g.domain) {
        return Err(Error::DomainMismatch);
    }
    let domain = &f.domain;
    let values = domain
        .ideals
        .par_iter()
        .map(|m| {
            domain
                .divisor_pairs(m)
                .into_iter()
                .fold(BigRational::zero(), |acc, (i, j)| {
                    acc + &f.values[i] * &g.values[j]
                })
        })
        .collect();
    Ok(ArithTable {
        domain: Arc::clone(domain),
        values,
    })
}

/// Dirichlet inverse by the recursion over the divisor lattice, processing
/// ideals in increasing norm.
pub fn dirichlet_inverse(f: &ArithTable) -> Result<ArithTable> {
    let domain = &f.domain;
    let unit_pos = domain
        .position(&Ideal::unit(&domain.field))
        .expect("the unit ideal is always enumerated");
    if !f.values[unit_pos].is_one() {
        return Err(Error::NonUnitLeadingValue);
    }
    let mut inv: Vec<BigRational> = vec![BigRational::zero(); domain.len()];
    for (pos, m) in domain.ideals.iter().enumerate() {
        if m.is_unit() {
            inv[pos] = BigRational::one();
            continue;
        }
        let mut acc = BigRational::zero();
        for (d, rest) in domain.divisor_pairs(m) {
            if d != unit_pos {
                acc += &f.values[d] * &inv[rest];
            }
        }
        inv[pos] = -acc;
    }
    Ok(ArithTable {
        domain: Arc::clone(domain),
        values: inv,
    })
}

/// Both sides of `M(x) = sum over ideals a of g(a) L(x / N(a))` with
/// `g = 1_square^{-1}`, evaluated for every `x` up to a fixed maximum.
#[derive(Debug)]
pub struct MobiusFromLiouville {
    liouville_prefix: Vec<i64>,
    mobius_prefix: Vec<i64>,
    /// `(N(a), g(a))` for square ideals `a` with `g(a) != 0`.
    square_terms: Vec<(u64, i64)>,
}

impl MobiusFromLiouville {
    pub fn new(sieve: &IdealSieve, x_max: u64) -> Result<Self> {
        let domain = IdealDomain::from_sieve(sieve, x_max)?;
        let g = dirichlet_inverse(&ArithTable::indicator_square(&domain))?;
        let mut square_terms = Vec::new();
        for (m, v) in g.iter() {
            if indicator_square(m) == 1 && !v.is_zero() {
                let value = v
                    .to_integer()
                    .to_i64()
                    .expect("inverse of an integer table with unit lead is integral");
                square_terms.push((m.norm(), value));
            }
        }
        let mut lam = vec![0i64; x_max as usize + 1];
        let mut mu = vec![0i64; x_max as usize + 1];
        for m in domain.ideals() {
            lam[m.norm() as usize] += liouville(m) as i64;
            mu[m.norm() as usize] += moebius(m) as i64;
        }
        for n in 1..lam.len() {
            lam[n] += lam[n - 1];
            mu[n] += mu[n - 1];
        }
        Ok(MobiusFromLiouville {
            liouville_prefix: lam,
            mobius_prefix: mu,
            square_terms,
        })
    }

    /// `(M(x), sum over squares a of g(a) L(x / N(a)))`.
    pub fn evaluate(&self, x: u64) -> (i64, i64) {
        let left = self.mobius_prefix[x as usize];
        let right = self
            .square_terms
            .iter()
            .filter(|(n, _)| *n <= x)
            .map(|&(n, g)| g * self.liouville_prefix[(x / n) as usize])
            .sum();
        (left, right)
    }
}

pub fn m_from_l_expansion(field: &FieldSpec, x: u64) -> Result<(i64, i64)> {
    let sieve = IdealSieve::new(field, x.max(1))?;
    Ok(MobiusFromLiouville::new(&sieve, x)?.evaluate(x))
}

/// True when every value is an integer of absolute value at most 1.
pub fn is_one_bounded(t: &ArithTable) -> bool {
    t.values
        .iter()
        .all(|v| v.is_integer() && v.abs() <= BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::IdealSieve;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn gaussian_domain(x: u64) -> (IdealSieve, Arc<IdealDomain>) {
        let s = IdealSieve::new(&FieldSpec::gaussian(), x).unwrap();
        let d = IdealDomain::from_sieve(&s, x).unwrap();
        (s, d)
    }

    #[test]
    fn pointwise_functions() {
        let (s, _) = gaussian_domain(100);
        let k = s.field();
        let q2 = Ideal::prime(k, s.prime(0));
        let p = Ideal::prime(k, s.prime(1));
        let pbar = Ideal::prime(k, s.prime(2));
        let unit = Ideal::unit(k);
        assert_eq!(omega(&unit), 0);
        assert_eq!(omega(&p.pow(3).unwrap()), 3);
        let m = p.mul(&pbar).unwrap().mul(&q2.pow(2).unwrap()).unwrap();
        assert_eq!(omega(&m), 4);
        assert_eq!((liouville(&unit), liouville(&p)), (1, -1));
        assert_eq!(liouville(&p.mul(&pbar).unwrap()), 1);
        assert_eq!(moebius(&unit), 1);
        assert_eq!(moebius(&p.pow(2).unwrap()), 0);
        assert_eq!(moebius(&p.mul(&q2).unwrap()), 1);
        assert_eq!(indicator_square(&unit), 1);
        assert_eq!(indicator_square(&p), 0);
        let sq = p.pow(2).unwrap().mul(&q2.pow(4).unwrap()).unwrap();
        assert_eq!(indicator_square(&sq), 1);
    }

    #[test]
    fn delta_is_the_identity() {
        let (_, d) = gaussian_domain(200);
        let lam = ArithTable::liouville(&d);
        assert_eq!(
            dirichlet_convolve(&ArithTable::delta(&d), &lam).unwrap(),
            lam
        );
        let delta = ArithTable::delta(&d);
        assert_eq!(dirichlet_inverse(&delta).unwrap(), delta);
    }

    #[test]
    fn prime_power_values() {
        let (s, d) = gaussian_domain(700);
        let p = Ideal::prime(s.field(), s.prime(1));
        let lam_one = dirichlet_convolve(&ArithTable::liouville(&d), &ArithTable::one(&d)).unwrap();
        assert_eq!(lam_one.get(&p.pow(2).unwrap()), Some(&int(1)));
        let sq_mu = dirichlet_convolve(&ArithTable::indicator_square(&d), &ArithTable::moebius(&d))
            .unwrap();
        assert_eq!(sq_mu.get(&p), Some(&int(-1)));
        let g = dirichlet_inverse(&ArithTable::indicator_square(&d)).unwrap();
        assert_eq!(g.get(&p.pow(2).unwrap()), Some(&int(-1)));
        assert_eq!(g.get(&p.pow(4).unwrap()), Some(&int(0)));
        assert_eq!(g.get(&p), Some(&int(0)));
    }

    #[test]
    fn inverse_requires_unit_lead() {
        let (_, d) = gaussian_domain(50);
        let t = ArithTable::from_int_fn(&d, |_| 2);
        assert_eq!(dirichlet_inverse(&t), Err(Error::NonUnitLeadingValue));
    }

    #[test]
    fn domain_mismatch() {
        let (_, d1) = gaussian_domain(50);
        let (_, d2) = gaussian_domain(60);
        let r = dirichlet_convolve(&ArithTable::one(&d1), &ArithTable::one(&d2));
        assert_eq!(r, Err(Error::DomainMismatch));
    }

    #[test]
    fn m_from_l_small_cases() {
        assert_eq!(
            m_from_l_expansion(&FieldSpec::rationals(), 10).unwrap(),
            (-1, -1)
        );
        assert_eq!(
            m_from_l_expansion(&FieldSpec::gaussian(), 1).unwrap(),
            (1, 1)
        );
        let (l, r) = m_from_l_expansion(&FieldSpec::gaussian(), 100).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn csv_export() {
        let (_, d) = gaussian_domain(5);
        let csv = ArithTable::moebius(&d).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "norm,factorization,numerator,denominator");
        assert_eq!(lines[1], "1,1,1,1");
        assert_eq!(lines[2], "2,2.0,-1,1");
        assert_eq!(lines.len(), 1 + 5);
    }
}
