//! Linear extensions of small posets (at most 64 elements).

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Clone, Debug)]
pub struct Poset {
    /// `preds[x]` has bit `y` set when `y ≺ x`.
    preds: Vec<u64>,
}

impl Poset {
    pub fn new(n: usize) -> Self {
        assert!(n <= 64, "poset too large: {n} elements");
        Poset { preds: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    /// Adds the relation `a ≺ b`.
    pub fn add_relation(&mut self, a: usize, b: usize) {
        self.preds[b] |= 1 << a;
    }

    /// Direct predecessors of `x`, as a bitmask.
    pub fn predecessors(&self, x: usize) -> u64 {
        self.preds[x]
    }

    /// Number of linear extensions, by dynamic programming over downsets.
    pub fn linear_extensions(&self) -> BigUint {
        let full = if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        };
        let mut memo = HashMap::new();
        self.count_from(0, full, &mut memo)
    }

    fn count_from(&self, placed: u64, full: u64, memo: &mut HashMap<u64, BigUint>) -> BigUint {
        if placed == full {
            return BigUint::one();
        }
        if let Some(v) = memo.get(&placed) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        let mut free = full & !placed;
        while free != 0 {
            let x = free.trailing_zeros() as usize;
            free &= free - 1;
            if self.preds[x] & !placed == 0 {
                total += self.count_from(placed | (1 << x), full, memo);
            }
        }
        memo.insert(placed, total.clone());
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(p: &Poset) -> u64 {
        fn go(p: &Poset, placed: u64, depth: usize) -> u64 {
            if depth == p.len() {
                return 1;
            }
            (0..p.len())
                .filter(|&x| placed & (1 << x) == 0 && p.predecessors(x) & !placed == 0)
                .map(|x| go(p, placed | (1 << x), depth + 1))
                .sum()
        }
        go(p, 0, 0)
    }

    #[test]
    fn antichain_and_chain() {
        let anti = Poset::new(5);
        assert_eq!(anti.linear_extensions(), BigUint::from(120u32));
        let mut chain = Poset::new(5);
        for i in 0..4 {
            chain.add_relation(i, i + 1);
        }
        assert_eq!(chain.linear_extensions(), BigUint::one());
        assert_eq!(Poset::new(0).linear_extensions(), BigUint::one());
    }

    #[test]
    fn matches_recursive_enumeration() {
        // a ≺ c, b ≺ c, c ≺ e, d free, b ≺ f
        let mut p = Poset::new(6);
        for (a, b) in [(0, 2), (1, 2), (2, 4), (1, 5)] {
            p.add_relation(a, b);
        }
        assert_eq!(p.linear_extensions(), BigUint::from(brute_force(&p)));
    }
}
