//! Dense element sets over `0..order`.
//!
//! Every set of group elements in this crate is a bitset indexed by the
//! parent group's element indices, so membership tests are O(1) and the
//! exhaustive checks that dominate the workload stay cheap.

use fixedbitset::FixedBitSet;
use std::cmp::Ordering;

/// Set of element indices of one finite group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    bits: FixedBitSet,
}

impl ElemSet {
    pub fn empty(universe: usize) -> Self {
        ElemSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        ElemSet { bits }
    }

    pub fn singleton(universe: usize, elem: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(elem);
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(universe: usize, iter: I) -> Self {
        let mut s = Self::empty(universe);
        for e in iter {
            s.insert(e);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, elem: usize) {
        self.bits.insert(elem);
    }

    pub fn contains(&self, elem: usize) -> bool {
        self.bits.contains(elem)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Ascending iteration over member indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    /// Smallest member, if any.
    pub fn min(&self) -> Option<usize> {
        self.bits.ones().next()
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        ElemSet { bits }
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Lexicographic order on the sorted member lists. For two distinct
    /// sets of equal size this is decided by the smallest index where the
    /// sets differ; the set containing it comes first.
    pub fn lex_cmp(&self, other: &ElemSet) -> Ordering {
        let mut a = self.iter();
        let mut b = other.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(&y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_ops() {
        let a = ElemSet::from_iter(8, [0, 2, 4]);
        let b = ElemSet::from_iter(8, [2, 4, 6]);
        assert_eq!(a.len(), 3);
        assert!(a.contains(2));
        assert!(!a.contains(1));
        assert_eq!(a.intersection(&b).to_vec(), vec![2, 4]);
        let mut u = a.clone();
        u.union_with(&b);
        assert_eq!(u.to_vec(), vec![0, 2, 4, 6]);
        assert!(a.intersection(&b).is_subset(&a));
    }

    #[test]
    fn lex_order_picks_smallest_first_difference() {
        let a = ElemSet::from_iter(8, [0, 5]);
        let b = ElemSet::from_iter(8, [1, 2]);
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        let c = ElemSet::from_iter(8, [0, 1]);
        assert_eq!(a.lex_cmp(&c), Ordering::Greater);
        assert_eq!(c.lex_cmp(&c.clone()), Ordering::Equal);
    }
}
