//! Enumeration of prime ideals and integral ideals of bounded norm.
//!
//! [`IdealSieve`] owns the prime-ideal table of a field up to a capacity and
//! enumerates every ideal of norm at most `x` as a multiset of prime ideals
//! (depth-first over primes sorted by norm, with a running norm bound).
//! Statistics are computed as folds over that enumeration; the fold is split
//! into a fixed list of tasks that does not depend on the thread count, and
//! partial results are combined in task order, so parallel and sequential runs
//! agree bit for bit.

pub mod cache;
mod stream;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numberfield::{self, FieldSpec, Ideal, PrimeIdeal, PrimeKey};

pub use stream::IdealStream;

/// Largest norm bound the enumeration accepts.
pub const MAX_NORM_BOUND: u64 = 100_000_000;

/// Prime ideals of norm at most `max_norm`, sorted by `(norm, p, ordinal)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeIdealTable {
    pub entries: Vec<PrimeIdeal>,
    pub max_norm: u64,
    /// Rational primes at which Dedekind's criterion failed.
    pub skipped_primes: Vec<u64>,
}

impl PrimeIdealTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norms(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.norm).collect()
    }

    /// Index of the prime ideal with the given key.
    pub fn index_of(&self, key: &PrimeKey) -> Option<usize> {
        self.entries.binary_search_by(|e| e.key().cmp(key)).ok()
    }
}

/// Rational primes up to `n` by the sieve of Eratosthenes over odd numbers.
pub fn rational_primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    // index i stands for 2i + 1
    let half = (n - 1) / 2 + 1;
    let mut composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = vec![2u64];
    out.extend(
        composite
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| !c)
            .map(|(i, _)| (2 * i + 1) as u64),
    );
    out
}

/// All prime ideals of norm at most `x`.
///
/// An irregular rational prime is a hard error unless `allow_skip` is set, in
/// which case it is listed in `skipped_primes` and its prime ideals omitted.
pub fn prime_ideals_up_to(field: &FieldSpec, x: u64, allow_skip: bool) -> Result<PrimeIdealTable> {
    if x == 0 {
        return Err(Error::InvalidParams("norm bound must be at least 1".into()));
    }
    if x > MAX_NORM_BOUND {
        return Err(Error::CapacityExceeded {
            needed: x as f64,
            capacity: MAX_NORM_BOUND,
        });
    }
    let primes = rational_primes_up_to(x);
    let per_prime: Vec<std::result::Result<Vec<PrimeIdeal>, u64>> = primes
        .par_chunks(2048)
        .flat_map_iter(|chunk| {
            chunk
                .iter()
                .map(|&p| match numberfield::prime_ideals_above(field, p, x) {
                    Ok(list) => Ok(list),
                    Err(Error::IrregularPrime(p)) => Err(p),
                    Err(e) => panic!("factoring a rational prime cannot fail: {e}"),
                })
        })
        .collect();
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for r in per_prime {
        match r {
            Ok(list) => entries.extend(list),
            Err(p) => skipped.push(p),
        }
    }
    if let (Some(&p), false) = (skipped.first(), allow_skip) {
        return Err(Error::IrregularPrime(p));
    }
    entries.sort_by_key(|e| e.key());
    Ok(PrimeIdealTable {
        entries,
        max_norm: x,
        skipped_primes: skipped,
    })
}

/// One enumerated ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealRecord {
    pub norm: u64,
    pub omega: u32,
    pub mu: i8,
    pub lambda: i8,
    /// Present in full mode only.
    pub factors: Option<Box<Ideal>>,
}

/// The ideal currently visited by an enumeration.
#[derive(Clone, Copy, Debug)]
pub struct IdealView<'a> {
    pub norm: u64,
    pub omega: u32,
    pub squarefree: bool,
    /// `(index into the prime table, exponent)` with increasing indices.
    pub factors: &'a [(u32, u32)],
}

impl IdealView<'_> {
    pub fn lambda(&self) -> i8 {
        if self.omega % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn mu(&self) -> i8 {
        if self.squarefree {
            self.lambda()
        } else {
            0
        }
    }
}

/// A field together with its prime-ideal table up to a capacity.
#[derive(Clone, Debug)]
pub struct IdealSieve {
    field: FieldSpec,
    table: PrimeIdealTable,
    norms: Vec<u64>,
}

impl IdealSieve {
    pub fn new(field: &FieldSpec, capacity: u64) -> Result<Self> {
        let table = prime_ideals_up_to(field, capacity, false)?;
        Ok(Self::from_table(field, table))
    }

    pub fn from_table(field: &FieldSpec, table: PrimeIdealTable) -> Self {
        let norms = table.norms();
        IdealSieve {
            field: field.clone(),
            table,
            norms,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn table(&self) -> &PrimeIdealTable {
        &self.table
    }

    pub fn capacity(&self) -> u64 {
        self.table.max_norm
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn prime(&self, index: u32) -> &PrimeIdeal {
        &self.table.entries[index as usize]
    }

    fn check(&self, x: u64) -> Result<()> {
        if x > self.capacity() {
            Err(Error::CapacityExceeded {
                needed: x as f64,
                capacity: self.capacity(),
            })
        } else {
            Ok(())
        }
    }

    /// `pi_K(x)`: number of prime ideals of norm at most `x`.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        self.check(x)?;
        Ok(self.norms.partition_point(|&n| n <= x) as u64)
    }

    /// Prime ideals with norm in the real interval `(lo, hi]`.
    pub fn primes_in(&self, lo: f64, hi: f64) -> Result<&[PrimeIdeal]> {
        if hi.floor() > self.capacity() as f64 {
            return Err(Error::CapacityExceeded {
                needed: hi,
                capacity: self.capacity(),
            });
        }
        let a = self.norms.partition_point(|&n| (n as f64) <= lo);
        let b = self.norms.partition_point(|&n| (n as f64) <= hi);
        Ok(&self.table.entries[a..b.max(a)])
    }

    /// Converts the table-index form of a visited ideal to an [`Ideal`].
    pub fn to_ideal(&self, factors: &[(u32, u32)]) -> Ideal {
        let fs: Vec<(PrimeKey, u32)> = factors
            .iter()
            .map(|&(i, e)| (self.table.entries[i as usize].key(), e))
            .collect();
        Ideal::from_factors_tagged(self.field.tag(), fs).expect("norm bounded by the capacity")
    }

    /// Visits every ideal of norm at most `x` (unit ideal first, then depth
    /// first). The order is deterministic but not sorted by norm.
    pub fn visit<F: FnMut(&IdealView)>(&self, x: u64, mut f: F) -> Result<()> {
        self.check(x)?;
        let mut stack = Vec::with_capacity(32);
        f(&IdealView {
            norm: 1,
            omega: 0,
            squarefree: true,
            factors: &[],
        });
        self.dfs(0, self.norms.len(), 1, 0, true, x, &mut stack, &mut f);
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs<F: FnMut(&IdealView)>(
        &self,
        start: usize,
        end: usize,
        norm: u64,
        omega: u32,
        squarefree: bool,
        x: u64,
        stack: &mut Vec<(u32, u32)>,
        f: &mut F,
    ) {
        let bound = x / norm;
        for j in start..end {
            let q = self.norms[j];
            if q > bound {
                break;
            }
            let mut nn = norm * q;
            let mut e = 1;
            loop {
                stack.push((j as u32, e));
                let sf = squarefree && e == 1;
                f(&IdealView {
                    norm: nn,
                    omega: omega + e,
                    squarefree: sf,
                    factors: stack,
                });
                self.dfs(j + 1, self.norms.len(), nn, omega + e, sf, x, stack, f);
                stack.pop();
                if nn > x / q {
                    break;
                }
                nn *= q;
                e += 1;
            }
        }
    }

    /// Partition of the enumeration into independent tasks: each task is a
    /// range of "smallest prime" indices. The list depends only on `x`.
    fn tasks(&self, x: u64) -> Vec<std::ops::Range<usize>> {
        let live = self.norms.partition_point(|&n| n <= x);
        let mut tasks = Vec::new();
        let mut j = 0;
        while j < live {
            // primes whose square exceeds x only contribute small subtrees
            let width = if self.norms[j].saturating_mul(self.norms[j]) <= x {
                1
            } else {
                4096
            };
            let end = (j + width).min(live);
            tasks.push(j..end);
            j = end;
        }
        tasks
    }

    /// Deterministic parallel fold over all ideals of norm at most `x`.
    pub fn fold<T, I, F, R>(&self, x: u64, identity: I, fold: F, reduce: R) -> Result<T>
    where
        T: Send,
        I: Fn() -> T + Sync,
        F: Fn(&mut T, &IdealView) + Sync,
        R: Fn(T, T) -> T,
    {
        self.check(x)?;
        let tasks = self.tasks(x);
        let partials: Vec<T> = tasks
            .par_iter()
            .map(|range| {
                let mut acc = identity();
                let mut stack = Vec::with_capacity(32);
                for j in range.clone() {
                    let q = self.norms[j];
                    let mut nn = q;
                    let mut e = 1;
                    loop {
                        stack.push((j as u32, e));
                        let view = IdealView {
                            norm: nn,
                            omega: e,
                            squarefree: e == 1,
                            factors: &stack,
                        };
                        fold(&mut acc, &view);
                        self.dfs(
                            j + 1,
                            self.norms.len(),
                            nn,
                            e,
                            e == 1,
                            x,
                            &mut stack,
                            &mut |v: &IdealView| fold(&mut acc, v),
                        );
                        stack.pop();
                        if nn > x / q {
                            break;
                        }
                        nn *= q;
                        e += 1;
                    }
                }
                acc
            })
            .collect();
        let mut acc = identity();
        fold(
            &mut acc,
            &IdealView {
                norm: 1,
                omega: 0,
                squarefree: true,
                factors: &[],
            },
        );
        Ok(partials.into_iter().fold(acc, reduce))
    }

    /// `N(x)`: number of ideals of norm at most `x`.
    pub fn count(&self, x: u64) -> Result<u64> {
        self.fold(x, || 0u64, |acc, _| *acc += 1, |a, b| a + b)
    }

    /// `phi[n]` = number of ideals of norm exactly `n`, for `0 <= n <= x`
    /// (`phi[0] = 0`).
    pub fn count_by_norm(&self, x: u64) -> Result<Vec<u32>> {
        let mut phi = vec![0u32; x as usize + 1];
        self.visit(x, |v| phi[v.norm as usize] += 1)?;
        Ok(phi)
    }

    /// All ideals of norm at most `x` in nondecreasing norm order. In full
    /// mode ties are ordered by factorization; in light mode by visit order.
    pub fn records(&self, x: u64, full: bool) -> Result<Vec<IdealRecord>> {
        let mut out = Vec::new();
        self.visit(x, |v| {
            out.push(IdealRecord {
                norm: v.norm,
                omega: v.omega,
                mu: v.mu(),
                lambda: v.lambda(),
                factors: full.then(|| Box::new(self.to_ideal(v.factors))),
            })
        })?;
        if full {
            out.sort_by(|a, b| a.factors.cmp(&b.factors));
        } else {
            out.sort_by_key(|r| r.norm);
        }
        Ok(out)
    }

    /// All ideals of norm at most `x`, factored, sorted.
    pub fn ideals(&self, x: u64) -> Result<Vec<Ideal>> {
        let mut out = Vec::new();
        self.visit(x, |v| out.push(self.to_ideal(v.factors)))?;
        out.sort();
        Ok(out)
    }

    /// Lazy norm-ordered stream backed by a priority queue.
    pub fn stream(&self, x: u64) -> Result<IdealStream<'_>> {
        self.check(x)?;
        Ok(IdealStream::new(self, x))
    }
}

/// Records for every ideal of norm at most `x`, in nondecreasing norm order.
pub fn ideals_up_to(field: &FieldSpec, x: u64, full: bool) -> Result<Vec<IdealRecord>> {
    IdealSieve::new(field, x)?.records(x, full)
}

/// `phi[n]`, the number of ideals of norm `n`, for `n <= x`.
pub fn ideal_count_by_norm(field: &FieldSpec, x: u64) -> Result<Vec<u32>> {
    IdealSieve::new(field, x)?.count_by_norm(x)
}

/// Exponent-wise minimum.
pub fn ideal_gcd(a: &Ideal, b: &Ideal) -> Result<Ideal> {
    if a.field_tag() != b.field_tag() {
        return Err(Error::FieldMismatch);
    }
    let factors = a
        .factors()
        .iter()
        .map(|&(k, e)| (k, e.min(b.exponent_of(&k))));
    Ideal::from_factors_tagged(a.field_tag(), factors)
}

/// `N(gcd(a, b)) - 1`.
pub fn phi_pair(a: &Ideal, b: &Ideal) -> Result<u64> {
    Ok(ideal_gcd(a, b)?.norm() - 1)
}
