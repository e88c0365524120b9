//! Independent oracles: classical integer arithmetic only, no ideal code.
#![allow(dead_code)]

/// Smallest prime factor table for `0..=n`.
pub fn spf(n: usize) -> Vec<u32> {
    let mut s = vec![0u32; n + 1];
    for i in 2..=n {
        if s[i] == 0 {
            let mut j = i;
            while j <= n {
                if s[j] == 0 {
                    s[j] = i as u32;
                }
                j += i;
            }
        }
    }
    s
}

/// `(Omega(n), mu(n))` for every `n <= max`.
pub struct IntegerSieve {
    pub omega: Vec<u32>,
    pub mu: Vec<i8>,
    pub is_prime: Vec<bool>,
}

impl IntegerSieve {
    pub fn new(max: usize) -> Self {
        let s = spf(max);
        let mut omega = vec![0u32; max + 1];
        let mut mu = vec![0i8; max + 1];
        let mut is_prime = vec![false; max + 1];
        if max >= 1 {
            mu[1] = 1;
        }
        for n in 2..=max {
            let p = s[n] as usize;
            let m = n / p;
            omega[n] = omega[m] + 1;
            mu[n] = if m % p == 0 { 0 } else { -mu[m] };
            is_prime[n] = p == n;
        }
        IntegerSieve {
            omega,
            mu,
            is_prime,
        }
    }

    pub fn lambda(&self, n: usize) -> i8 {
        if self.omega[n] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn liouville_sum(&self, x: usize) -> i64 {
        (1..=x).map(|n| self.lambda(n) as i64).sum()
    }

    pub fn mertens(&self, x: usize) -> i64 {
        (1..=x).map(|n| self.mu[n] as i64).sum()
    }

    pub fn pi(&self, x: usize) -> u64 {
        self.is_prime[..=x].iter().filter(|&&b| b).count() as u64
    }
}

/// Kronecker symbol `(D / n)` for a fundamental discriminant `D` and `n >= 1`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut n = n;
    let mut result = 1i32;
    while n % 2 == 0 {
        n /= 2;
        match d.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    result * jacobi(d, n)
}

/// Jacobi symbol `(a / n)` for odd `n >= 1`.
pub fn jacobi(a: i64, n: u64) -> i32 {
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut r = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                r = -r;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            r = -r;
        }
        a %= n;
    }
    if n == 1 {
        r
    } else {
        0
    }
}

/// Ideals of norm exactly `n` in the quadratic field of discriminant `d`:
/// `sum over k | n of (d / k)`, for `0 <= n <= max`.
pub fn quadratic_counts(d: i64, max: usize) -> Vec<i64> {
    let chi: Vec<i64> = (0..=max as u64)
        .map(|k| if k == 0 { 0 } else { kronecker(d, k) as i64 })
        .collect();
    let mut out = vec![0i64; max + 1];
    for k in 1..=max {
        if chi[k] == 0 {
            continue;
        }
        let mut m = k;
        while m <= max {
            out[m] += chi[k];
            m += k;
        }
    }
    out
}

/// Prime ideals of norm at most `x` in the quadratic field of discriminant
/// `d`: two above each split `p`, one above a ramified `p`, one of norm `p^2`
/// above an inert `p`.
pub fn quadratic_pi(d: i64, x: u64) -> u64 {
    let sieve = IntegerSieve::new(x as usize);
    let mut count = 0;
    for p in 2..=x {
        if !sieve.is_prime[p as usize] {
            continue;
        }
        match kronecker(d, p) {
            1 => count += 2,
            0 => count += 1,
            _ => {
                if p * p <= x {
                    count += 1
                }
            }
        }
    }
    count
}

/// `sum over n <= x of counts[n]`.
pub fn prefix(counts: &[i64], x: usize) -> i64 {
    counts[..=x].iter().sum()
}

/// Exponent of `p` in `x!`.
pub fn legendre(x: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = p;
    while q <= x {
        total += x / q;
        match q.checked_mul(p) {
            Some(n) => q = n,
            None => break,
        }
    }
    total
}
