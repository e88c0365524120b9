//! Construction of a pair `(S1, S2)` of equinumerous ideal sets, primes
//! against products of exactly `k` primes, with matched norms and small
//! double logarithmic averages of `Phi`.
//!
//! The pipeline is: find well-populated prime windows `A(b^x, b^(x+delta))`
//! near each integer exponent, build separated integer sets `A_1..A_k`, steer
//! exponent choices so that `zeta_1 + ... + zeta_k` lands just above an
//! admissible `zeta`, then take the smallest primes in each window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numberfield::{FieldSpec, Ideal, PrimeIdeal};
use crate::orthogonality::{phi_log_average, IdealSet};
use crate::primebounds::power;
use crate::sieve::IdealSieve;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Above this many tuples, property (A) is checked by the gap certificate.
pub const EXHAUSTIVE_TUPLE_LIMIT: u128 = 1_000_000;
/// Largest number of tuples `A_1 x ... x A_k` the construction will expand.
pub const MAX_CONSTRUCTION_TUPLES: u128 = 10_000;
const DEFAULT_CAPACITY: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub eta: f64,
    pub k: usize,
    pub base: f64,
    pub epsilon: f64,
    /// `epsilon / k`
    pub delta: f64,
    /// Target for `sum over A_i of 1/n`.
    pub mass: f64,
    /// Minimal distance between distinct tuple sums, at least `2k + 3`.
    pub separation: f64,
    /// Smallest admissible window exponent.
    pub x0: f64,
    pub capacity: u64,
    /// Fixes `D` instead of deriving it from the window search.
    pub d_override: Option<f64>,
}

/// Upper limit for `epsilon` coming from the annulus lemma.
pub const EPSILON_0: f64 = 0.25;

impl ConstructionParams {
    pub fn new(eta: f64, k: usize, base: f64, epsilon: f64) -> Result<Self> {
        let p = ConstructionParams {
            eta,
            k,
            base,
            epsilon,
            delta: epsilon / k.max(1) as f64,
            mass: 0.0,
            separation: 2.0 * k as f64 + 3.0,
            x0: 1.0,
            capacity: DEFAULT_CAPACITY,
            d_override: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// The desk-scale defaults: base 2, `epsilon = 0.24`.
    pub fn desk(eta: f64, k: usize) -> Result<Self> {
        Self::new(eta, k, 2.0, 0.24)
    }

    pub fn with_mass(mut self, mass: f64) -> Self {
        self.mass = mass;
        self
    }

    pub fn with_capacity(mut self, capacity: u64) -> Self {
        self.capacity = capacity;
        self
    }

    pub fn with_d(mut self, d: f64) -> Self {
        self.d_override = Some(d);
        self
    }

    pub fn with_x0(mut self, x0: f64) -> Self {
        self.x0 = x0;
        self
    }

    /// `log(1 + eta) / (2 log b)`
    pub fn epsilon_limit(&self) -> f64 {
        (1.0 + self.eta).ln() / (2.0 * self.base.ln())
    }

    /// `ceil(2 / epsilon^4)`, the tuple length the selection lemma asks for.
    pub fn k_bound(&self) -> u64 {
        (2.0 / self.epsilon.powi(4)).ceil() as u64
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidParams(s));
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return bad(format!("eta = {} must lie in (0, 1)", self.eta));
        }
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if !(self.base > 1.0) {
            return bad(format!("base = {} must exceed 1", self.base));
        }
        let limit = EPSILON_0.min(self.epsilon_limit());
        if !(self.epsilon > 0.0 && self.epsilon < limit) {
            return bad(format!(
                "epsilon = {} must lie in (0, {limit}) for eta = {} and base {}",
                self.epsilon, self.eta, self.base
            ));
        }
        if self.delta != self.epsilon / self.k as f64 {
            return bad("delta must equal epsilon / k".into());
        }
        if !(self.mass >= 0.0) || !(self.separation >= 2.0 * self.k as f64 + 3.0) {
            return bad("need mass >= 0 and separation >= 2k + 3".into());
        }
        if let Some(d) = self.d_override {
            if !(d > 0.0 && d < 1.0) {
                return bad(format!("D = {d} must lie in (0, 1)"));
            }
        }
        Ok(())
    }
}

/// Primes with norm in `(b^x, b^(x+delta)]`, in table order.
pub fn window<'a>(
    sieve: &'a IdealSieve,
    base: f64,
    x: f64,
    delta: f64,
) -> Result<&'a [PrimeIdeal]> {
    let hi = power(base, x + delta);
    if hi.floor() > sieve.capacity() as f64 {
        return Err(Error::CapacityExceeded {
            needed: hi,
            capacity: sieve.capacity(),
        });
    }
    sieve.primes_in(power(base, x), hi)
}

/// `floor(D b^floor(x) / floor(x))`, the size of the prime set taken from the
/// window at `x`.
pub fn window_quota(d: f64, base: f64, x: f64) -> u64 {
    let n = x.floor();
    (d * power(base, n) / n + 1e-9).floor() as u64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaFiveResult {
    pub n: u64,
    pub x: f64,
    pub y: f64,
    pub d: f64,
    pub count_x: u64,
    pub count_y: u64,
}

/// Scans window starts `n + j epsilon^4/4` in `[n, n+1)` and returns the pair
/// with `epsilon^4 < y - x < epsilon` maximizing the smaller prime count
/// (earliest pair on ties), with `D = min count * n / b^n`.
pub fn lemma5_search(
    sieve: &IdealSieve,
    n: u64,
    epsilon: f64,
    delta: f64,
    base: f64,
) -> Result<LemmaFiveResult> {
    if n == 0 || !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParams(
            "need n >= 1, 0 < epsilon < 1, 0 < delta < 1".into(),
        ));
    }
    let step = epsilon.powi(4) / 4.0;
    let nf = n as f64;
    let grid: Vec<f64> = (0u64..)
        .map(|j| nf + j as f64 * step)
        .take_while(|&x| x < nf + 1.0)
        .collect();
    let counts: Vec<u64> = grid
        .iter()
        .map(|&x| window(sieve, base, x, delta).map(|w| w.len() as u64))
        .collect::<Result<_>>()?;
    // admissible offsets: 4 < j - i and (j - i) step < epsilon
    let lo_gap = 5usize;
    let hi_gap = {
        let mut g = lo_gap;
        while ((g + 1) as f64) * step < epsilon {
            g += 1;
        }
        g
    };
    let mut best: Option<(u64, usize, usize)> = None;
    if (lo_gap as f64) * step < epsilon {
        for i in 0..grid.len() {
            let lo = i + lo_gap;
            if lo >= grid.len() {
                break;
            }
            let hi = (i + hi_gap).min(grid.len() - 1);
            let mut j_best = lo;
            for j in lo..=hi {
                if counts[j] > counts[j_best] {
                    j_best = j;
                }
            }
            let v = counts[i].min(counts[j_best]);
            if best.map_or(true, |b| v > b.0) {
                let j = (lo..=hi)
                    .find(|&j| counts[j] >= v)
                    .expect("j_best qualifies");
                best = Some((v, i, j));
            }
        }
    }
    match best {
        Some((v, i, j)) if v > 0 => Ok(LemmaFiveResult {
            n,
            x: grid[i],
            y: grid[j],
            d: (v as f64 * nf / power(base, nf)).min(1.0 - 1e-9),
            count_x: counts[i],
            count_y: counts[j],
        }),
        _ => Err(Error::NoPairFound {
            n,
            profile: counts.iter().map(|&c| c as usize).collect(),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub z: f64,
    pub zs: Vec<f64>,
}

impl Selection {
    /// `z_i in [n_i, n_i + 1)`.
    pub fn satisfies_windows(&self, targets: &[u64]) -> bool {
        self.zs.len() == targets.len()
            && self
                .zs
                .iter()
                .zip(targets)
                .all(|(&z, &n)| z >= n as f64 && z < n as f64 + 1.0)
    }

    /// `z_1 + ... + z_k in [z, z + epsilon)`.
    pub fn satisfies_sum(&self, epsilon: f64) -> bool {
        let s: f64 = self.zs.iter().sum();
        s >= self.z && s < self.z + epsilon
    }
}

/// Chooses `z_i in X ∩ [n_i, n_i+1)` and `z in X` with `sum z_i in [z, z+epsilon)`.
///
/// Each window contributes a pair `x < y` with `epsilon^4 < y - x < epsilon`.
/// Switching windows from `x` to `y` one at a time walks the sum upward in
/// steps shorter than `epsilon`; the first partial sum at or above the
/// smallest admissible `z` is taken.
pub fn lemma6_select(xset: &[f64], epsilon: f64, targets: &[u64]) -> Result<Selection> {
    let mut pts: Vec<f64> = xset.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let fail = || Error::SelectionFailed {
        n: targets.len() as u64,
    };
    if targets.is_empty() || !(epsilon > 0.0) {
        return Err(fail());
    }
    let e4 = epsilon.powi(4);
    let mut lows = Vec::with_capacity(targets.len());
    let mut highs = Vec::with_capacity(targets.len());
    for &n in targets {
        let lo = pts.partition_point(|&x| x < n as f64);
        let hi = pts.partition_point(|&x| x < n as f64 + 1.0);
        let w = &pts[lo..hi];
        if w.is_empty() {
            return Err(fail());
        }
        let pair = w.iter().enumerate().find_map(|(a, &x)| {
            w[a + 1..]
                .iter()
                .find(|&&y| y - x > e4 && y - x < epsilon)
                .map(|&y| (x, y))
        });
        let (x, y) = pair.unwrap_or((w[0], w[0]));
        lows.push(x);
        highs.push(y);
    }
    let mut partial = Vec::with_capacity(targets.len() + 1);
    let mut s: f64 = lows.iter().sum();
    partial.push(s);
    for i in 0..targets.len() {
        s += highs[i] - lows[i];
        partial.push(s);
    }
    let (s0, sk) = (partial[0], partial[targets.len()]);
    let choose = |j: usize, z: f64| {
        let zs = (0..targets.len())
            .map(|i| if i < j { highs[i] } else { lows[i] })
            .collect();
        Selection { z, zs }
    };
    let first = pts.partition_point(|&x| x < s0);
    if let Some(&z) = pts.get(first).filter(|&&z| z <= sk) {
        let j = partial.iter().position(|&p| p >= z).expect("z <= s_k");
        let sel = choose(j, z);
        if sel.satisfies_sum(epsilon) {
            return Ok(sel);
        }
    }
    if first > 0 {
        let z = pts[first - 1];
        if s0 < z + epsilon {
            return Ok(choose(0, z));
        }
    }
    Err(fail())
}

/// A finite set of positive integers, either explicit or the progression
/// `{s, 2s, ..., len*s}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ASet {
    Progression { step: u64, len: u64 },
    Explicit(Vec<u64>),
}

impl ASet {
    pub fn explicit(mut v: Vec<u64>) -> Self {
        v.sort_unstable();
        v.dedup();
        ASet::Explicit(v)
    }

    pub fn len(&self) -> u64 {
        match self {
            ASet::Progression { len, .. } => *len,
            ASet::Explicit(v) => v.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn min(&self) -> u64 {
        match self {
            ASet::Progression { step, .. } => *step,
            ASet::Explicit(v) => v.first().copied().unwrap_or(0),
        }
    }

    pub fn max(&self) -> u64 {
        match self {
            ASet::Progression { step, len } => step * len,
            ASet::Explicit(v) => v.last().copied().unwrap_or(0),
        }
    }

    /// Smallest distance between two distinct members.
    pub fn min_gap(&self) -> Option<u64> {
        match self {
            ASet::Progression { step, len } => (*len >= 2).then_some(*step),
            ASet::Explicit(v) => v.windows(2).map(|w| w[1] - w[0]).min(),
        }
    }

    /// `sum over members of 1/n`.
    pub fn mass(&self) -> f64 {
        match self {
            ASet::Progression { step, len } => harmonic(*len) / *step as f64,
            ASet::Explicit(v) => v.iter().map(|&n| 1.0 / n as f64).sum(),
        }
    }

    pub fn elements(&self) -> Vec<u64> {
        match self {
            ASet::Progression { step, len } => (1..=*len).map(|i| i * step).collect(),
            ASet::Explicit(v) => v.clone(),
        }
    }
}

/// `H_t = 1 + 1/2 + ... + 1/t`.
pub fn harmonic(t: u64) -> f64 {
    if t <= 1_000_000 {
        (1..=t).rev().map(|i| 1.0 / i as f64).sum()
    } else {
        let x = t as f64;
        let x2 = x * x;
        x.ln() + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x2) + 1.0 / (120.0 * x2 * x2)
    }
}

/// Smallest `t >= 1` with `H_t >= target`.
fn harmonic_len(target: f64) -> Result<u64> {
    if target <= 1.0 {
        return Ok(1);
    }
    if target < 14.0 {
        let mut h = 0.0;
        let mut t = 0u64;
        while h < target {
            t += 1;
            h += 1.0 / t as f64;
        }
        return Ok(t);
    }
    let guess = (target - EULER_GAMMA).exp();
    if !(guess < 1e18) {
        return Err(Error::ConstructionInfeasible(format!(
            "a harmonic mass of {target} needs about {guess:e} terms"
        )));
    }
    let mut t = guess as u64;
    while t > 1 && harmonic(t - 1) >= target {
        t -= 1;
    }
    while harmonic(t) < target {
        t += 1;
    }
    Ok(t)
}

/// `A_1, ..., A_k` with mass at least `m` each and separation `m`.
pub fn build_a_sets(k: usize, m: f64, x0: f64) -> Result<Vec<ASet>> {
    build_a_sets_with(k, m, m, x0)
}

/// `A_i ⊂ s_i N` with `sum over A_i of 1/n >= mass`, where
/// `s_1 > max(x0, 2k)`, `s_1 >= separation` and
/// `s_(i+1) > separation + max A_1 + ... + max A_i`.
pub fn build_a_sets_with(k: usize, mass: f64, separation: f64, x0: f64) -> Result<Vec<ASet>> {
    if k == 0 || !(mass >= 0.0) || !(separation >= 0.0) {
        return Err(Error::InvalidParams(
            "need k >= 1, mass >= 0, separation >= 0".into(),
        ));
    }
    let overflow = || Error::ConstructionInfeasible("A-set elements exceed 64 bits".into());
    let mut sets = Vec::with_capacity(k);
    let mut max_sum: u64 = 0;
    for i in 0..k {
        let s = if i == 0 {
            ((x0.max(2.0 * k as f64)).floor() as u64 + 1).max(separation.ceil() as u64)
        } else {
            let lower = separation + max_sum as f64;
            if lower >= u64::MAX as f64 {
                return Err(overflow());
            }
            lower.floor() as u64 + 1
        };
        let len = harmonic_len(mass * s as f64)?;
        let top = s.checked_mul(len).ok_or_else(overflow)?;
        max_sum = max_sum.checked_add(top).ok_or_else(overflow)?;
        sets.push(ASet::Progression { step: s, len });
    }
    Ok(sets)
}

fn tuple_count(sets: &[ASet]) -> u128 {
    sets.iter()
        .map(|a| a.len() as u128)
        .try_fold(1u128, |acc, l| acc.checked_mul(l))
        .unwrap_or(u128::MAX)
}

/// Exhaustive check that distinct tuples have sums at least `m` apart.
/// `None` when there are more than [`EXHAUSTIVE_TUPLE_LIMIT`] tuples.
pub fn property_a_exhaustive(sets: &[ASet], m: f64) -> Option<bool> {
    if tuple_count(sets) > EXHAUSTIVE_TUPLE_LIMIT {
        return None;
    }
    let mut sums: Vec<u128> = vec![0];
    for a in sets {
        let el = a.elements();
        sums = sums
            .iter()
            .flat_map(|&s| el.iter().map(move |&e| s + e as u128))
            .collect();
    }
    sums.sort_unstable();
    Some(sums.windows(2).all(|w| (w[1] - w[0]) as f64 >= m))
}

/// The gap certificate: if `min_gap(A_i) - sum_(j<i) (max A_j - min A_j) >= m`
/// for every `A_i` with two or more members, distinct tuple sums differ by at
/// least `m`.
pub fn property_a_certificate(sets: &[ASet], m: f64) -> bool {
    let mut spread = 0u128;
    for a in sets {
        if let Some(gap) = a.min_gap() {
            if (gap as f64) - (spread as f64) < m {
                return false;
            }
        }
        spread += (a.max() - a.min()) as u128;
    }
    true
}

/// Property (A), exhaustively when small and by the certificate otherwise.
pub fn check_property_a(sets: &[ASet], m: f64) -> bool {
    property_a_exhaustive(sets, m).unwrap_or_else(|| property_a_certificate(sets, m))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleRecord {
    pub m: Vec<u64>,
    pub zetas: Vec<f64>,
    pub zeta: f64,
    /// Positions `start..end` of this tuple's members in both sets.
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug)]
pub struct RichterPair {
    pub params: ConstructionParams,
    pub d: f64,
    pub a_sets: Vec<ASet>,
    pub s1: IdealSet,
    pub s2: IdealSet,
    pub tuples: Vec<TupleRecord>,
}

impl RichterPair {
    /// `(p_i, m_i)` by position.
    pub fn pairs(&self) -> impl Iterator<Item = (&Ideal, &Ideal)> {
        self.s1.members().iter().zip(self.s2.members())
    }
}

/// Admissible window starts: grid points `n + j epsilon^4/4` whose window
/// holds at least `D b^n / n` primes, over the given integers `n`.
pub fn admissible_points(
    sieve: &IdealSieve,
    ns: &[u64],
    d: f64,
    epsilon: f64,
    delta: f64,
    base: f64,
) -> Vec<f64> {
    let step = epsilon.powi(4) / 4.0;
    let mut out = Vec::new();
    for &n in ns {
        let nf = n as f64;
        let need = d * power(base, nf) / nf;
        for x in (0u64..)
            .map(|j| nf + j as f64 * step)
            .take_while(|&x| x < nf + 1.0)
        {
            match window(sieve, base, x, delta) {
                Ok(w) if w.len() as f64 >= need && need > 0.0 => out.push(x),
                Ok(_) => {}
                Err(_) => break,
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Builds `S1` and `S2` from the prime table of `sieve`.
pub fn construct_richter_pair(
    sieve: &IdealSieve,
    params: &ConstructionParams,
) -> Result<RichterPair> {
    params.validate()?;
    let k = params.k;
    let a_sets = build_a_sets_with(k, params.mass, params.separation, params.x0)?;
    if tuple_count(&a_sets) > MAX_CONSTRUCTION_TUPLES {
        return Err(Error::ConstructionInfeasible(format!(
            "{} tuples in A_1 x ... x A_k",
            tuple_count(&a_sets)
        )));
    }
    let elements: Vec<Vec<u64>> = a_sets.iter().map(ASet::elements).collect();
    let mut targets: Vec<u64> = elements.iter().flatten().copied().collect();
    targets.sort_unstable();
    targets.dedup();
    let top: u64 = elements
        .iter()
        .map(|e| *e.last().expect("nonempty"))
        .sum::<u64>()
        + k as u64
        + 1;
    let needed = power(params.base, top as f64);
    if needed > 1e18 {
        return Err(Error::CapacityExceeded {
            needed,
            capacity: sieve.capacity(),
        });
    }
    for &n in &targets {
        if power(params.base, n as f64 + 1.0).floor() > sieve.capacity() as f64 {
            return Err(Error::CapacityExceeded {
                needed: power(params.base, n as f64 + 1.0),
                capacity: sieve.capacity(),
            });
        }
    }
    let low_sum: u64 = elements.iter().map(|e| e[0]).sum();
    let mut ns: Vec<u64> = targets.clone();
    ns.extend(low_sum.saturating_sub(1)..top);
    ns.sort_unstable();
    ns.dedup();
    let ctx = Context {
        sieve,
        params,
        a_sets: &a_sets,
        elements: &elements,
        ns: &ns,
    };
    if let Some(d) = params.d_override {
        return ctx.build(d);
    }
    let d0 = targets
        .iter()
        .map(|&n| lemma5_search(sieve, n, params.epsilon, params.delta, params.base).map(|r| r.d))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(1.0 - 1e-9, f64::min);
    let m_min = targets[0] as f64;
    let mut d = d0;
    let mut last = None;
    while window_quota(d, params.base, m_min) >= 1 {
        match ctx.build(d) {
            Ok(pair) => return Ok(pair),
            Err(e @ (Error::SelectionFailed { .. } | Error::ConstructionInfeasible(_))) => {
                last = Some(e)
            }
            Err(e) => return Err(e),
        }
        d /= 2.0;
    }
    Err(last.unwrap_or_else(|| {
        Error::ConstructionInfeasible(format!("D = {d0} leaves the window at {m_min} empty"))
    }))
}

struct Context<'a> {
    sieve: &'a IdealSieve,
    params: &'a ConstructionParams,
    a_sets: &'a [ASet],
    elements: &'a [Vec<u64>],
    ns: &'a [u64],
}

impl Context<'_> {
    fn build(&self, d: f64) -> Result<RichterPair> {
        let Context {
            sieve,
            params,
            a_sets,
            elements,
            ns,
        } = *self;
        let field = sieve.field();
        let k = params.k;
        let xset = admissible_points(sieve, ns, d, params.epsilon, params.delta, params.base);
        let mut s1: Vec<Ideal> = Vec::new();
        let mut s2: Vec<Ideal> = Vec::new();
        let mut tuples = Vec::new();
        let mut m = vec![0usize; k];
        loop {
            let tuple: Vec<u64> = (0..k).map(|i| elements[i][m[i]]).collect();
            let sel = lemma6_select(&xset, params.epsilon, &tuple)?;
            let mut products = vec![Ideal::unit(field)];
            for &z in &sel.zs {
                let quota = window_quota(d, params.base, z) as usize;
                let w = window(sieve, params.base, z, params.delta)?;
                if quota == 0 || w.len() < quota {
                    return Err(Error::ConstructionInfeasible(format!(
                        "window at {z} holds {} primes, needs {quota} (D = {d})",
                        w.len()
                    )));
                }
                let primes: Vec<Ideal> =
                    w[..quota].iter().map(|p| Ideal::prime(field, p)).collect();
                products = products
                    .iter()
                    .flat_map(|a| primes.iter().map(move |p| a.mul(p)))
                    .collect::<Result<_>>()?;
            }
            products.sort();
            let quota = window_quota(d, params.base, sel.z) as usize;
            let w = window(sieve, params.base, sel.z, params.delta)?;
            if products.len() > quota.min(w.len()) {
                return Err(Error::ConstructionInfeasible(format!(
                    "window at {} offers {} primes for {} products",
                    sel.z,
                    quota.min(w.len()),
                    products.len()
                )));
            }
            let start = s1.len();
            s1.extend(w[..products.len()].iter().map(|p| Ideal::prime(field, p)));
            s2.extend(products);
            tuples.push(TupleRecord {
                m: tuple,
                zetas: sel.zs,
                zeta: sel.z,
                start,
                end: s1.len(),
            });
            // next tuple, last coordinate fastest
            let mut i = k;
            let done = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                m[i] += 1;
                if m[i] < elements[i].len() {
                    break false;
                }
                m[i] = 0;
            };
            if done {
                break;
            }
        }
        let wrap = |e: Error| match e {
            Error::InvalidParams(s) => Error::ConstructionInfeasible(s),
            other => other,
        };
        Ok(RichterPair {
            params: params.clone(),
            d,
            a_sets: a_sets.to_vec(),
            s1: IdealSet::new(field, s1).map_err(wrap)?,
            s2: IdealSet::new(field, s2).map_err(wrap)?,
            tuples,
        })
    }
}

/// Builds the sieve at `params.capacity` and runs the construction.
pub fn construct_richter_pair_for(
    field: &FieldSpec,
    params: &ConstructionParams,
) -> Result<RichterPair> {
    params.validate()?;
    let sieve = IdealSieve::new(field, params.capacity)?;
    construct_richter_pair(&sieve, params)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub cond_i: bool,
    pub cond_ii: bool,
    pub iii_s1: f64,
    pub iii_s2: f64,
    pub eta: f64,
}

impl Verification {
    pub fn cond_iii(&self) -> bool {
        self.iii_s1 <= self.eta && self.iii_s2 <= self.eta
    }
}

/// (i) `S1` prime and `S2` of `Omega = k`; (ii) equal sizes and
/// `(1-eta) N(p_i) <= N(m_i) <= (1+eta) N(p_i)`; (iii) both double
/// logarithmic averages of `Phi`.
pub fn verify_conditions(pair: &RichterPair, eta: f64) -> Verification {
    let k = pair.params.k as u32;
    let cond_i = pair.s1.members().iter().all(|p| p.omega() == 1)
        && pair.s2.members().iter().all(|m| m.omega() == k);
    let cond_ii = pair.s1.len() == pair.s2.len()
        && pair.pairs().all(|(p, m)| {
            let (np, nm) = (p.norm() as f64, m.norm() as f64);
            (1.0 - eta) * np <= nm && nm <= (1.0 + eta) * np
        });
    Verification {
        cond_i,
        cond_ii,
        iii_s1: phi_log_average(&pair.s1),
        iii_s2: phi_log_average(&pair.s2),
        eta,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MemberRecord {
    pub ideal: String,
    pub norm: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RichterReport {
    pub field: String,
    pub params: ConstructionParams,
    pub d: f64,
    pub a_sets: Vec<ASet>,
    pub tuples: Vec<TupleRecord>,
    pub s1: Vec<MemberRecord>,
    pub s2: Vec<MemberRecord>,
    /// `(i, i)`: position in `S1` paired with position in `S2`.
    pub pairing: Vec<(usize, usize)>,
    pub verification: Verification,
}

pub fn report(pair: &RichterPair, eta: f64) -> RichterReport {
    let rec = |s: &IdealSet| {
        s.members()
            .iter()
            .map(|m| MemberRecord {
                ideal: m.to_string(),
                norm: m.norm(),
            })
            .collect()
    };
    RichterReport {
        field: pair.s1.field().coeff_string(),
        params: pair.params.clone(),
        d: pair.d,
        a_sets: pair.a_sets.clone(),
        tuples: pair.tuples.clone(),
        s1: rec(&pair.s1),
        s2: rec(&pair.s2),
        pairing: (0..pair.s1.len()).map(|i| (i, i)).collect(),
        verification: verify_conditions(pair, eta),
    }
}
