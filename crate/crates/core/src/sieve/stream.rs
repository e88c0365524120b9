use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{IdealRecord, IdealSieve};
use crate::numberfield::Ideal;

#[derive(PartialEq, Eq)]
struct Node {
    ideal: Ideal,
    /// Nondecreasing prime-table indices, one per prime factor.
    indices: Vec<u32>,
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.ideal.cmp(&other.ideal)
    }
}

/// Norm-ordered ideal stream.
///
/// Every ideal is a nondecreasing sequence of prime indices. Each sequence has
/// two successors, "repeat the last prime" and "replace the last prime by the
/// next one", both of norm at least its own, so popping the heap minimum and
/// pushing its successors yields every ideal exactly once in sorted order.
pub struct IdealStream<'a> {
    sieve: &'a IdealSieve,
    x: u64,
    heap: BinaryHeap<Reverse<Node>>,
}

impl<'a> IdealStream<'a> {
    pub(super) fn new(sieve: &'a IdealSieve, x: u64) -> Self {
        let mut heap = BinaryHeap::new();
        heap.push(Reverse(Node {
            ideal: Ideal::unit(sieve.field()),
            indices: Vec::new(),
        }));
        IdealStream { sieve, x, heap }
    }

    fn node(&self, indices: Vec<u32>) -> Option<Node> {
        let mut norm = 1u64;
        for &i in &indices {
            norm = norm.checked_mul(self.sieve.norms[i as usize])?;
            if norm > self.x {
                return None;
            }
        }
        let mut factors: Vec<(u32, u32)> = Vec::new();
        for &i in &indices {
            match factors.last_mut() {
                Some(last) if last.0 == i => last.1 += 1,
                _ => factors.push((i, 1)),
            }
        }
        Some(Node {
            ideal: self.sieve.to_ideal(&factors),
            indices,
        })
    }
}

impl Iterator for IdealStream<'_> {
    type Item = IdealRecord;

    fn next(&mut self) -> Option<IdealRecord> {
        let Reverse(node) = self.heap.pop()?;
        let n_primes = self.sieve.norms.len() as u32;
        match node.indices.last() {
            None => {
                if n_primes > 0 {
                    if let Some(child) = self.node(vec![0]) {
                        self.heap.push(Reverse(child));
                    }
                }
            }
            Some(&last) => {
                let mut repeat = node.indices.clone();
                repeat.push(last);
                if let Some(child) = self.node(repeat) {
                    self.heap.push(Reverse(child));
                }
                if last + 1 < n_primes {
                    let mut bump = node.indices.clone();
                    *bump.last_mut().unwrap() = last + 1;
                    if let Some(child) = self.node(bump) {
                        self.heap.push(Reverse(child));
                    }
                }
            }
        }
        let omega = node.ideal.omega();
        let lambda = if omega % 2 == 0 { 1 } else { -1 };
        let mu = if node.ideal.is_squarefree() {
            lambda
        } else {
            0
        };
        Some(IdealRecord {
            norm: node.ideal.norm(),
            omega,
            mu,
            lambda,
            factors: Some(Box::new(node.ideal)),
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::numberfield::FieldSpec;
    use crate::sieve::IdealSieve;

    #[test]
    fn stream_equals_sorted_enumeration() {
        for field in [FieldSpec::rationals(), FieldSpec::gaussian()] {
            let s = IdealSieve::new(&field, 3000).unwrap();
            let streamed: Vec<_> = s.stream(3000).unwrap().collect();
            assert_eq!(streamed, s.records(3000, true).unwrap());
        }
    }
}
