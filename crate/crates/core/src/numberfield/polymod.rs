//! Dense univariate polynomials over the prime field F_p and their factorization.
//!
//! Polynomials are `Vec<u64>` with the constant term first and no trailing
//! zero coefficients; the zero polynomial is the empty vector.
//!
//! Factorization runs the classic three stages: squarefree decomposition,
//! distinct-degree splitting and Cantor–Zassenhaus equal-degree splitting. The
//! random elements used by the last stage come from a ChaCha stream seeded by
//! `(p, hash of the input)`, so repeated calls give identical output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Poly = Vec<u64>;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        (a * b) % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Reduces integer coefficients modulo `p` and trims.
pub fn reduce(coeffs: &[i64], p: u64) -> Poly {
    let mut out: Poly = coeffs
        .iter()
        .map(|&c| c.rem_euclid(p as i64) as u64)
        .collect();
    trim(&mut out);
    out
}

pub fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Degree of `a`; the zero polynomial reports `None`.
pub fn degree(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn is_one(a: &[u64]) -> bool {
    a.len() == 1 && a[0] == 1
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + y) % p;
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by a nonzero `b`.
pub fn div_rem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut rem: Poly = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let db = b.len() - 1;
    let lead_inv = if b[db] == 1 { 1 } else { inv_mod(b[db], p) };
    let mut quot = vec![0u64; rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = mul_mod(rem[i + db], lead_inv, p);
        quot[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p - mul_mod(c, bj, p)) % p;
            }
        }
    }
    rem.truncate(db);
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    div_rem(a, b, p).1
}

pub fn make_monic(a: &[u64], p: u64) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => {
            let inv = inv_mod(lead, p);
            a.iter().map(|&c| mul_mod(c, inv, p)).collect()
        }
    }
}

/// Monic gcd; `gcd(0, 0)` is the zero polynomial.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&x, p)
}

pub fn derivative(a: &[u64], p: u64) -> Poly {
    let mut out: Poly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
        .collect();
    trim(&mut out);
    out
}

pub fn mul_rem(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), modulus, p)
}

const SMALL: usize = 8;

/// `a * b mod m` for a monic `m` of degree `d <= SMALL`, on fixed arrays.
fn mul_rem_small(a: &[u64; SMALL], b: &[u64; SMALL], m: &[u64], d: usize, p: u64) -> [u64; SMALL] {
    let mut t = [0u64; 2 * SMALL];
    for i in 0..d {
        if a[i] == 0 {
            continue;
        }
        for j in 0..d {
            t[i + j] = (t[i + j] + mul_mod(a[i], b[j], p)) % p;
        }
    }
    for k in (d..2 * d - 1).rev() {
        let c = t[k];
        if c != 0 {
            for j in 0..d {
                t[k - d + j] = (t[k - d + j] + p - mul_mod(c, m[j], p)) % p;
            }
        }
    }
    let mut out = [0u64; SMALL];
    out[..d].copy_from_slice(&t[..d]);
    out
}

/// `base^exp mod modulus`.
pub fn pow_rem(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Poly {
    let d = modulus.len().saturating_sub(1);
    if modulus.last() == Some(&1) && (1..=SMALL).contains(&d) {
        let mut b = [0u64; SMALL];
        for (i, &c) in rem(base, modulus, p).iter().enumerate() {
            b[i] = c;
        }
        let mut acc = [0u64; SMALL];
        acc[0] = 1 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_rem_small(&acc, &b, modulus, d, p);
            }
            b = mul_rem_small(&b, &b, modulus, d, p);
            exp >>= 1;
        }
        let mut out = acc[..d].to_vec();
        trim(&mut out);
        return out;
    }
    let mut acc = rem(&[1 % p], modulus, p);
    let mut b = rem(base, modulus, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_rem(&acc, &b, modulus, p);
        }
        b = mul_rem(&b, &b, modulus, p);
        exp >>= 1;
    }
    acc
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// Factors a nonzero polynomial over F_p into monic irreducibles.
///
/// The result is sorted by `(degree, coefficient sequence)` and each distinct
/// irreducible appears once with its multiplicity. The leading coefficient is
/// dropped.
pub fn factor(a: &[u64], p: u64) -> Vec<(Poly, u32)> {
    let mut f: Poly = a.to_vec();
    trim(&mut f);
    assert!(!f.is_empty(), "cannot factor the zero polynomial");
    let f = make_monic(&f, p);
    if f.len() <= 1 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(&f, p));
    let mut out = Vec::new();
    for (part, mult) in squarefree(&f, p) {
        for (block, d) in distinct_degree(&part, p) {
            let mut pieces = Vec::new();
            equal_degree(&block, d, p, &mut rng, &mut pieces);
            out.extend(pieces.into_iter().map(|g| (g, mult)));
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Monic linear factors of the monic polynomial `f` with distinct roots,
/// sorted by coefficients. They agree with the degree-one entries of
/// [`factor`].
pub fn linear_factors(f: &[u64], p: u64) -> Vec<Poly> {
    match f.len() {
        0 | 1 => return Vec::new(),
        2 => return vec![f.to_vec()],
        _ => {}
    }
    if f.len() == 3 && f[2] == 1 && p > 2 {
        return quadratic_roots(f[1], f[0], p)
            .into_iter()
            .map(|r| vec![(p - r) % p, 1])
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
    }
    let xp = pow_rem(&[0, 1], p, f, p);
    let g = gcd(f, &sub(&xp, &[0, 1], p), p);
    if g.len() < 2 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(f, p));
    let mut out = Vec::with_capacity(g.len() - 1);
    equal_degree(&g, 1, p, &mut rng, &mut out);
    out.sort();
    out
}

/// Roots of `x^2 + b x + c` over F_p, p odd.
fn quadratic_roots(b: u64, c: u64, p: u64) -> Vec<u64> {
    let disc = (mul_mod(b, b, p) + p - mul_mod(4 % p, c, p)) % p;
    let Some(s) = sqrt_mod(disc, p) else {
        return Vec::new();
    };
    let half = inv_mod(2, p);
    let nb = (p - b) % p;
    vec![
        mul_mod((nb + s) % p, half, p),
        mul_mod((nb + p - s) % p, half, p),
    ]
}

/// A square root of `a` modulo the odd prime `p` (Tonelli–Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// True when `a` (nonconstant) is irreducible over F_p.
pub fn is_irreducible(a: &[u64], p: u64) -> bool {
    let f = factor(a, p);
    f.len() == 1 && f[0].1 == 1
}

fn seed_for(f: &[u64], p: u64) -> u64 {
    // FNV-1a over p and the coefficients
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for word in std::iter::once(p).chain(f.iter().copied()) {
        for byte in word.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with `g`
/// squarefree, pairwise coprime, and `f = prod g^m`.
fn squarefree(f: &[u64], p: u64) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    let df = derivative(f, p);
    if df.is_empty() {
        // f is a p-th power
        for (g, m) in squarefree(&pth_root(f, p), p) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = gcd(f, &df, p);
    let mut w = div_rem(f, &c, p).0;
    let mut i = 1u32;
    while !is_one(&w) {
        let y = gcd(&w, &c, p);
        let fac = div_rem(&w, &y, p).0;
        if !is_one(&fac) {
            out.push((fac, i));
        }
        i += 1;
        w = y;
        c = div_rem(&c, &w, p).0;
    }
    if !is_one(&c) {
        for (g, m) in squarefree(&pth_root(&c, p), p) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn pth_root(f: &[u64], p: u64) -> Poly {
    let step = p as usize;
    f.iter().step_by(step).copied().collect()
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree: pairs `(product, degree)`.
fn distinct_degree(f: &[u64], p: u64) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest: Poly = f.to_vec();
    let x: Poly = vec![0, 1];
    let mut h = rem(&x, &rest, p);
    let mut d = 1;
    while rest.len() > 2 * d {
        h = pow_rem(&h, p, &rest, p);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        if !is_one(&g) {
            rest = div_rem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.len() > 1 {
        let deg = rest.len() - 1;
        out.push((rest, deg));
    }
    out
}

fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = f.len() - 1;
    if n == d {
        out.push(f.to_vec());
        return;
    }
    loop {
        let mut a: Poly = (0..n).map(|_| rng.gen_range(0..p)).collect();
        trim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let candidate = if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = mul_rem(&t, &t, f, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            // norm down to F_p, then the quadratic character
            let mut frob = rem(&a, f, p);
            let mut norm = frob.clone();
            for _ in 1..d {
                frob = pow_rem(&frob, p, f, p);
                norm = mul_rem(&norm, &frob, f, p);
            }
            let b = pow_rem(&norm, (p - 1) / 2, f, p);
            sub(&b, &[1], p)
        };
        let g = gcd(&candidate, f, p);
        if !g.is_empty() && g.len() > 1 && g.len() < f.len() {
            let q = div_rem(f, &g, p).0;
            equal_degree(&g, d, p, rng, out);
            equal_degree(&q, d, p, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(factors: &[(Poly, u32)], p: u64) -> Poly {
        let mut acc = vec![1];
        for (g, m) in factors {
            for _ in 0..*m {
                acc = mul(&acc, g, p);
            }
        }
        acc
    }

    #[test]
    fn square_roots() {
        for p in [3u64, 5, 13, 17, 41, 97, 65_537, 1_000_000_007] {
            for a in 0..50u64 {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mul_mod(r, r, p), a % p);
                } else {
                    assert_eq!(pow_mod(a, (p - 1) / 2, p), p - 1);
                }
            }
        }
    }

    #[test]
    fn linear_factors_match_full_factorization() {
        for p in [3u64, 5, 13, 17, 101, 1009] {
            for f in [
                vec![1i64, 0, 1],
                vec![-2, 0, 0, 1],
                vec![1, -1, 0, 0, 1],
                vec![-1, 1, 1],
                vec![3, 5, 1],
                vec![7, 0, 1],
            ] {
                let r = reduce(&f, p);
                let full = factor(&r, p);
                if full.iter().any(|x| x.1 > 1) {
                    continue;
                }
                let lin: Vec<Poly> = full
                    .into_iter()
                    .filter(|x| x.0.len() == 2)
                    .map(|x| x.0)
                    .collect();
                assert_eq!(linear_factors(&r, p), lin, "p = {p}, f = {f:?}");
            }
        }
    }

    #[test]
    fn x2_plus_1_mod_5_splits() {
        let f = factor(&[1, 0, 1], 5);
        assert_eq!(f, vec![(vec![2, 1], 1), (vec![3, 1], 1)]);
    }

    #[test]
    fn x2_plus_1_mod_3_is_inert() {
        assert_eq!(factor(&[1, 0, 1], 3), vec![(vec![1, 0, 1], 1)]);
    }

    #[test]
    fn x2_plus_1_mod_2_is_a_square() {
        assert_eq!(factor(&[1, 0, 1], 2), vec![(vec![1, 1], 2)]);
    }

    #[test]
    fn pth_power_inputs() {
        // (x+1)^4 over F_2 and (x^3 - x) ^ 3 over F_3
        let f = mul(&mul(&[1, 1], &[1, 1], 2), &mul(&[1, 1], &[1, 1], 2), 2);
        assert_eq!(factor(&f, 2), vec![(vec![1, 1], 4)]);
        let g = reduce(&[0, -1, 0, 1], 3);
        let g3 = mul(&mul(&g, &g, 3), &g, 3);
        let fs = factor(&g3, 3);
        assert_eq!(fs, vec![(vec![0, 1], 3), (vec![1, 1], 3), (vec![2, 1], 3)]);
    }

    #[test]
    fn cyclotomic_twelve_mod_13() {
        // x^4 - x^2 + 1 splits completely mod 13
        let f = reduce(&[1, 0, -1, 0, 1], 13);
        let fs = factor(&f, 13);
        assert_eq!(fs.len(), 4);
        assert_eq!(product(&fs, 13), f);
    }

    #[test]
    fn high_degree_equal_degree_split_mod_2() {
        // x^15 - 1 over F_2: (x+1)(x^2+x+1)(x^4+x+1)(x^4+x^3+1)(x^4+x^3+x^2+x+1)
        let mut f = vec![0u64; 16];
        f[0] = 1;
        f[15] = 1;
        let fs = factor(&f, 2);
        let degs: Vec<usize> = fs.iter().map(|(g, _)| g.len() - 1).collect();
        assert_eq!(degs, vec![1, 2, 4, 4, 4]);
        assert_eq!(product(&fs, 2), f);
        for (g, _) in &fs {
            assert!(is_irreducible(g, 2));
        }
    }

    #[test]
    fn deterministic_output() {
        let f = reduce(&[5, 3, 0, 7, 1, 1], 1_000_003);
        assert_eq!(factor(&f, 1_000_003), factor(&f, 1_000_003));
    }
}
