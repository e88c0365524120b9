//! Monogenic number fields `K = Q[x]/(f)` and the splitting of rational primes.
//!
//! A field is presented by a monic integer polynomial `f`. Prime ideals above a
//! rational prime `p` are read off from the factorization of `f` modulo `p`
//! (Dedekind–Kummer); this is only valid when `Z[x]/(f)` is maximal at `p`,
//! which [`is_regular_prime`] certifies with Dedekind's criterion.

pub mod polymod;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use polymod::Poly;

/// Largest supported field degree.
pub const MAX_DEGREE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    coeffs: Vec<i64>,
    degree: usize,
    poly_disc: BigInt,
    /// A prime below 100 modulo which `f` is irreducible, if one was found.
    certificate: Option<u64>,
    tag: u64,
}

impl FieldSpec {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn poly_disc(&self) -> &BigInt {
        &self.poly_disc
    }

    pub fn irreducibility_certificate(&self) -> Option<u64> {
        self.certificate
    }

    /// Set when no small prime certified irreducibility over Q; the field is
    /// still accepted.
    pub fn irreducibility_warning(&self) -> bool {
        self.certificate.is_none() && self.degree > 1
    }

    /// Stable identifier of the defining polynomial, used to tag ideals.
    pub fn tag(&self) -> u64 {
        self.tag
    }

    /// Comma separated coefficients, constant term first.
    pub fn coeff_string(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn rationals() -> Self {
        parse_field(&[0, 1]).expect("x is a valid defining polynomial")
    }

    pub fn gaussian() -> Self {
        parse_field(&[1, 0, 1]).expect("x^2+1 is a valid defining polynomial")
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;

    /// Parses `"1,0,1"` (constant term first).
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::InvalidParams(format!("bad coefficient '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        parse_field(&coeffs)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.coeff_string())
    }
}

/// Identity of a prime ideal inside a fixed field. Orders by norm, then the
/// rational prime, then the ordinal among primes above `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeKey {
    pub norm: u64,
    pub p: u64,
    pub ordinal: u32,
}

impl fmt::Display for PrimeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.p, self.ordinal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    /// Ramification index.
    pub e: u32,
    /// Residue degree.
    pub f: u32,
    pub norm: u64,
    /// Monic irreducible factor of the defining polynomial modulo `p`.
    pub gen_tag: Vec<u64>,
    pub ordinal: u32,
}

impl PrimeIdeal {
    pub fn key(&self) -> PrimeKey {
        PrimeKey {
            norm: self.norm,
            p: self.p,
            ordinal: self.ordinal,
        }
    }
}

/// A nonzero integral ideal in factored form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    field: u64,
    factors: Vec<(PrimeKey, u32)>,
    norm: u64,
}

impl Ideal {
    pub fn unit(field: &FieldSpec) -> Self {
        Self::unit_tagged(field.tag())
    }

    pub(crate) fn unit_tagged(field: u64) -> Self {
        Ideal {
            field,
            factors: Vec::new(),
            norm: 1,
        }
    }

    pub fn prime(field: &FieldSpec, prime: &PrimeIdeal) -> Self {
        Ideal {
            field: field.tag(),
            factors: vec![(prime.key(), 1)],
            norm: prime.norm,
        }
    }

    /// Builds an ideal from `(prime, exponent)` pairs; zero exponents are
    /// dropped and repeated primes are merged.
    pub fn from_factors(
        field: &FieldSpec,
        factors: impl IntoIterator<Item = (PrimeKey, u32)>,
    ) -> Result<Self> {
        Self::from_factors_tagged(field.tag(), factors)
    }

    pub(crate) fn from_factors_tagged(
        field: u64,
        factors: impl IntoIterator<Item = (PrimeKey, u32)>,
    ) -> Result<Self> {
        let mut fs: Vec<(PrimeKey, u32)> = factors.into_iter().filter(|f| f.1 > 0).collect();
        fs.sort();
        let mut merged: Vec<(PrimeKey, u32)> = Vec::with_capacity(fs.len());
        for (k, e) in fs {
            match merged.last_mut() {
                Some(last) if last.0 == k => last.1 += e,
                _ => merged.push((k, e)),
            }
        }
        let mut norm = 1u64;
        for (k, e) in &merged {
            let pe = checked_pow(k.norm, *e).ok_or(Error::NormOverflow)?;
            norm = norm.checked_mul(pe).ok_or(Error::NormOverflow)?;
        }
        Ok(Ideal {
            field,
            factors: merged,
            norm,
        })
    }

    pub fn field_tag(&self) -> u64 {
        self.field
    }

    pub fn factors(&self) -> &[(PrimeKey, u32)] {
        &self.factors
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn omega(&self) -> u32 {
        self.factors.iter().map(|f| f.1).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|f| f.1 == 1)
    }

    pub fn exponent_of(&self, key: &PrimeKey) -> u32 {
        self.factors
            .binary_search_by(|f| f.0.cmp(key))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// `self | other`, i.e. exponent dominance.
    pub fn divides(&self, other: &Ideal) -> bool {
        self.field == other.field && self.factors.iter().all(|(k, e)| other.exponent_of(k) >= *e)
    }

    pub fn mul(&self, other: &Ideal) -> Result<Ideal> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ideal::from_factors_tagged(
            self.field,
            self.factors.iter().chain(other.factors.iter()).copied(),
        )
    }

    pub fn pow(&self, e: u32) -> Result<Ideal> {
        Ideal::from_factors_tagged(self.field, self.factors.iter().map(|&(k, a)| (k, a * e)))
    }

    /// `self / other`, provided `other | self`.
    pub fn quotient(&self, other: &Ideal) -> Option<Ideal> {
        if !other.divides(self) {
            return None;
        }
        let factors = self
            .factors
            .iter()
            .map(|&(k, e)| (k, e - other.exponent_of(&k)));
        Ideal::from_factors_tagged(self.field, factors).ok()
    }
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ideal {
    /// Norm first, then the prime factors listed with multiplicity, compared
    /// lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        let expand = |i: &Ideal| {
            i.factors
                .iter()
                .flat_map(|&(k, e)| std::iter::repeat_n(k, e as usize))
                .collect::<Vec<_>>()
        };
        self.norm
            .cmp(&other.norm)
            .then_with(|| {
                if self.factors == other.factors {
                    Ordering::Equal
                } else {
                    expand(self).cmp(&expand(other))
                }
            })
            .then_with(|| self.field.cmp(&other.field))
    }
}

impl fmt::Display for Ideal {
    /// `1` for the unit ideal, otherwise e.g. `5.0^2*2.0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (k, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{k}")?;
            } else {
                write!(f, "{k}^{e}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = polymod::pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = polymod::mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Validates a defining polynomial and computes its discriminant.
pub fn parse_field(coeffs: &[i64]) -> Result<FieldSpec> {
    let lead = *coeffs.last().ok_or(Error::EmptyPolynomial)?;
    if lead != 1 {
        return Err(Error::NonMonic(lead));
    }
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(degree));
    }
    let poly_disc = discriminant(coeffs);
    if poly_disc.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    if degree >= 2 {
        if let Some(r) = rational_root(coeffs) {
            return Err(Error::RationalRootFound(r));
        }
    }
    let certificate = if degree == 1 {
        None
    } else {
        (2u64..100)
            .filter(|&q| is_prime_u64(q))
            .find(|&q| polymod::is_irreducible(&polymod::reduce(coeffs, q), q))
    };
    Ok(FieldSpec {
        coeffs: coeffs.to_vec(),
        degree,
        poly_disc,
        certificate,
        tag: coeff_hash(coeffs),
    })
}

fn coeff_hash(coeffs: &[i64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in coeffs {
        for byte in c.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// Discriminant of a monic polynomial: `(-1)^(n(n-1)/2) Res(f, f')`.
pub fn discriminant(coeffs: &[i64]) -> BigInt {
    let n = coeffs.len() - 1;
    if n <= 1 {
        return BigInt::one();
    }
    let f: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let res = resultant(&f, &df);
    if (n * (n - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Resultant via the Sylvester determinant; inputs are constant-term first.
fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = a.len() - 1;
    let l = b.len() - 1;
    let size = m + l;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for r in 0..l {
        for (j, c) in a.iter().rev().enumerate() {
            mat[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[l + r][r + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * mat[n - 1][n - 1].clone()
}

fn rational_root(coeffs: &[i64]) -> Option<i64> {
    let a0 = coeffs[0];
    if a0 == 0 {
        return Some(0);
    }
    let target = a0.unsigned_abs();
    let mut d = 1u64;
    while d.saturating_mul(d) <= target {
        if target % d == 0 {
            for cand in [d, target / d] {
                for r in [cand as i128, -(cand as i128)] {
                    if eval_big(coeffs, r).is_zero() {
                        return r.to_i64();
                    }
                }
            }
        }
        d += 1;
    }
    None
}

fn eval_big(coeffs: &[i64], x: i128) -> BigInt {
    let x = BigInt::from(x);
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, &c| acc * &x + BigInt::from(c))
}

/// Factorization of an integer polynomial modulo `p` into monic irreducibles
/// with multiplicities, sorted by degree and then coefficient sequence.
pub fn factor_poly_mod_p(coeffs: &[i64], p: u64) -> Result<Vec<(Poly, u32)>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let f = polymod::reduce(coeffs, p);
    if f.is_empty() {
        return Err(Error::InvalidParams(format!(
            "polynomial vanishes modulo {p}"
        )));
    }
    Ok(polymod::factor(&f, p))
}

/// Dedekind's criterion: true iff `Z[x]/(f)` is maximal at `p`, so the
/// Dedekind–Kummer factorization of `p` is valid.
pub fn is_regular_prime(field: &FieldSpec, p: u64) -> bool {
    if !(field.poly_disc() % BigInt::from(p)).is_zero() {
        return true;
    }
    let factors = polymod::factor(&polymod::reduce(field.coeffs(), p), p);
    dedekind_test(field.coeffs(), p, &factors)
}

fn dedekind_test(coeffs: &[i64], p: u64, factors: &[(Poly, u32)]) -> bool {
    if factors.iter().all(|f| f.1 == 1) {
        return true;
    }
    let p2 = (p as u128 * p as u128) as u64;
    let mut g: Poly = vec![1];
    let mut h: Poly = vec![1];
    for (fac, e) in factors {
        g = mul_mod_p2(&g, fac, p2);
        for _ in 1..*e {
            h = mul_mod_p2(&h, fac, p2);
        }
    }
    let gh = mul_mod_p2(&g, &h, p2);
    let n = coeffs.len().max(gh.len());
    let mut big_f: Poly = Vec::with_capacity(n);
    for i in 0..n {
        let fi = coeffs
            .get(i)
            .map(|&c| c.rem_euclid(p2 as i64) as u64)
            .unwrap_or(0);
        let gi = gh.get(i).copied().unwrap_or(0);
        let diff = (fi + p2 - gi) % p2;
        debug_assert_eq!(diff % p, 0);
        big_f.push((diff / p) % p);
    }
    polymod::trim(&mut big_f);
    let g_bar: Poly = {
        let mut t: Poly = g.iter().map(|c| c % p).collect();
        polymod::trim(&mut t);
        t
    };
    let h_bar: Poly = {
        let mut t: Poly = h.iter().map(|c| c % p).collect();
        polymod::trim(&mut t);
        t
    };
    let d = polymod::gcd(&polymod::gcd(&big_f, &g_bar, p), &h_bar, p);
    polymod::is_one(&d)
}

fn mul_mod_p2(a: &[u64], b: &[u64], m: u64) -> Poly {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % m as u128) as u64;
        }
    }
    out
}

/// Prime ideals above `p`, sorted by residue degree and generator.
pub fn factor_prime(field: &FieldSpec, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let factors = polymod::factor(&polymod::reduce(field.coeffs(), p), p);
    let divides_disc = (field.poly_disc() % BigInt::from(p)).is_zero();
    if divides_disc && !dedekind_test(field.coeffs(), p, &factors) {
        return Err(Error::IrregularPrime(p));
    }
    factors
        .into_iter()
        .enumerate()
        .map(|(i, (g, e))| {
            let f = (g.len() - 1) as u32;
            let norm = checked_pow(p, f).ok_or(Error::NormOverflow)?;
            Ok(PrimeIdeal {
                p,
                e,
                f,
                norm,
                gen_tag: g,
                ordinal: i as u32,
            })
        })
        .collect()
}

/// The defining polynomial's discriminant modulo `p`, up to sign.
pub(crate) fn disc_mod(field: &FieldSpec, p: u64) -> u64 {
    field
        .poly_disc()
        .magnitude()
        .iter_u64_digits()
        .rev()
        .fold(0u64, |acc, d| {
            (((acc as u128) << 64 | d as u128) % p as u128) as u64
        })
}

/// Prime ideals above the prime `p` of norm at most `max_norm`, or
/// `IrregularPrime`. `p` is assumed prime.
pub(crate) fn prime_ideals_above(
    field: &FieldSpec,
    p: u64,
    max_norm: u64,
) -> Result<Vec<PrimeIdeal>> {
    let divides_disc = disc_mod(field, p) == 0;
    let f = polymod::reduce(field.coeffs(), p);
    let factors: Vec<(Poly, u32)> =
        if !divides_disc && p.checked_mul(p).map_or(true, |q| q > max_norm) {
            polymod::linear_factors(&f, p)
                .into_iter()
                .map(|g| (g, 1))
                .collect()
        } else {
            let factors = polymod::factor(&f, p);
            if divides_disc && !dedekind_test(field.coeffs(), p, &factors) {
                return Err(Error::IrregularPrime(p));
            }
            factors
        };
    factors
        .into_iter()
        .enumerate()
        .filter_map(|(i, (g, e))| {
            let f = (g.len() - 1) as u32;
            let norm = checked_pow(p, f).filter(|&n| n <= max_norm)?;
            Some(PrimeIdeal {
                p,
                e,
                f,
                norm,
                gen_tag: g,
                ordinal: i as u32,
            })
        })
        .map(Ok)
        .collect()
}

/// `|disc|` as `u64` when it fits; convenient for logging.
pub fn abs_disc_u64(field: &FieldSpec) -> Option<u64> {
    field.poly_disc().abs().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        let k = parse_field(&[0, 1]).unwrap();
        assert_eq!(k.degree(), 1);
        assert!(!k.irreducibility_warning());
    }

    #[test]
    fn gaussian_disc() {
        let k = parse_field(&[1, 0, 1]).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(*k.poly_disc(), BigInt::from(-4));
        assert_eq!(k.irreducibility_certificate(), Some(3));
    }

    #[test]
    fn x2_plus_4_accepted_square_rejected() {
        let k = parse_field(&[4, 0, 1]).unwrap();
        assert_eq!(*k.poly_disc(), BigInt::from(-16));
        assert_eq!(parse_field(&[1, 2, 1]), Err(Error::ZeroDiscriminant));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_field(&[]), Err(Error::EmptyPolynomial));
        assert_eq!(parse_field(&[1, 2]), Err(Error::NonMonic(2)));
        assert_eq!(parse_field(&[1]), Err(Error::ConstantPolynomial));
        assert_eq!(parse_field(&[-2, -1, 1]), Err(Error::RationalRootFound(-1)));
        assert!(matches!(
            parse_field(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
            Err(Error::DegreeTooLarge(9))
        ));
    }

    #[test]
    fn cubic_and_quartic_discriminants() {
        // x^3 - 2: -27 * 4 = -108 ; x^4 + 1: 256
        assert_eq!(discriminant(&[-2, 0, 0, 1]), BigInt::from(-108));
        assert_eq!(discriminant(&[1, 0, 0, 0, 1]), BigInt::from(256));
        // x^2 + x + 1: -3
        assert_eq!(discriminant(&[1, 1, 1]), BigInt::from(-3));
    }

    #[test]
    fn from_str_roundtrip() {
        let k: FieldSpec = "1, 0, 1".parse().unwrap();
        assert_eq!(k.coeff_string(), "1,0,1");
        assert!("1,x,1".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn regularity() {
        let gauss = FieldSpec::gaussian();
        assert!(is_regular_prime(&gauss, 7));
        assert!(is_regular_prime(&gauss, 2));
        let sqrt5 = parse_field(&[-5, 0, 1]).unwrap();
        assert!(!is_regular_prime(&sqrt5, 2));
        assert!(is_regular_prime(&sqrt5, 5));
        assert_eq!(factor_prime(&sqrt5, 2), Err(Error::IrregularPrime(2)));
        // Z[sqrt(-3)] is not maximal at 2 either
        let m3 = parse_field(&[3, 0, 1]).unwrap();
        assert!(!is_regular_prime(&m3, 2));
        let eis = parse_field(&[1, 1, 1]).unwrap();
        assert!(is_regular_prime(&eis, 2) && is_regular_prime(&eis, 3));
    }

    #[test]
    fn gaussian_splitting() {
        let k = FieldSpec::gaussian();
        let five = factor_prime(&k, 5).unwrap();
        assert_eq!(five.len(), 2);
        assert!(five.iter().all(|q| q.e == 1 && q.f == 1 && q.norm == 5));
        assert_eq!(five[0].gen_tag, vec![2, 1]);
        assert_eq!(five[1].ordinal, 1);
        let three = factor_prime(&k, 3).unwrap();
        assert_eq!(three.len(), 1);
        assert_eq!((three[0].e, three[0].f, three[0].norm), (1, 2, 9));
        let two = factor_prime(&k, 2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!((two[0].e, two[0].f, two[0].norm), (2, 1, 2));
    }

    #[test]
    fn ideal_arithmetic() {
        let k = FieldSpec::gaussian();
        let five = factor_prime(&k, 5).unwrap();
        let two = factor_prime(&k, 2).unwrap();
        let p = Ideal::prime(&k, &five[0]);
        let pbar = Ideal::prime(&k, &five[1]);
        let q2 = Ideal::prime(&k, &two[0]);
        let m = p.mul(&pbar).unwrap().mul(&q2.pow(2).unwrap()).unwrap();
        assert_eq!(m.norm(), 100);
        assert_eq!(m.omega(), 4);
        assert!(q2.divides(&m));
        assert_eq!(m.quotient(&q2).unwrap().norm(), 50);
        assert_eq!(m.to_string(), "2.0^2*5.0*5.1");
        assert_eq!(Ideal::unit(&k).to_string(), "1");
        assert!(Ideal::unit(&k).divides(&m));
        let other = Ideal::unit(&FieldSpec::rationals());
        assert_eq!(other.mul(&m), Err(Error::FieldMismatch));
    }

    #[test]
    fn norm_overflow_is_an_error() {
        let k = FieldSpec::rationals();
        let big = factor_prime(&k, 1_000_000_007).unwrap();
        let q = Ideal::prime(&k, &big[0]);
        assert_eq!(q.pow(3), Err(Error::NormOverflow));
    }
}
