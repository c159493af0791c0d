use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Elem;

/// A subset of a universe of at most 64 elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetMask {
    bits: u64,
    size: u8,
}

impl SubsetMask {
    pub fn empty(size: usize) -> Self {
        debug_assert!(size <= 64);
        SubsetMask {
            bits: 0,
            size: size as u8,
        }
    }

    pub fn full(size: usize) -> Self {
        let bits = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
        SubsetMask {
            bits,
            size: size as u8,
        }
    }

    /// Builds a mask from raw bits, dropping bits outside the universe.
    pub fn from_bits(size: usize, bits: u64) -> Self {
        SubsetMask {
            bits: bits & Self::full(size).bits,
            size: size as u8,
        }
    }

    pub fn from_elems(size: usize, elems: impl IntoIterator<Item = Elem>) -> Self {
        let mut m = Self::empty(size);
        for e in elems {
            m.insert(e);
        }
        m
    }

    pub fn singleton(size: usize, e: Elem) -> Self {
        Self::from_elems(size, [e])
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn universe_size(self) -> usize {
        self.size as usize
    }

    #[inline]
    pub fn contains(self, e: Elem) -> bool {
        e < 64 && self.bits >> e & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: Elem) -> bool {
        debug_assert!(e < self.universe_size());
        let fresh = !self.contains(e);
        self.bits |= 1 << e;
        fresh
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask {
            bits: self.bits | other.bits,
            size: self.size,
        }
    }

    pub fn intersection(self, other: Self) -> Self {
        SubsetMask {
            bits: self.bits & other.bits,
            size: self.size,
        }
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Elem> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(e)
        })
    }

    pub fn to_vec(self) -> Vec<Elem> {
        self.iter().collect()
    }

    /// Every subset of a universe of `size` elements, in increasing bit order.
    pub fn all_subsets(size: usize) -> impl Iterator<Item = SubsetMask> {
        assert!(size < 64, "cannot enumerate all subsets of a 64-element universe");
        (0..1u64 << size).map(move |bits| SubsetMask::from_bits(size, bits))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn elems_round_trip(size in 1usize..64, bits in any::<u64>()) {
            let m = SubsetMask::from_bits(size, bits);
            prop_assert_eq!(SubsetMask::from_elems(size, m.iter()), m);
            prop_assert_eq!(m.len(), m.to_vec().len());
            prop_assert!(m.iter().all(|e| e < size));
        }
    }

    #[test]
    fn full_and_empty() {
        assert_eq!(SubsetMask::full(3).to_vec(), vec![0, 1, 2]);
        assert!(SubsetMask::empty(3).is_empty());
        assert_eq!(SubsetMask::full(64).len(), 64);
        assert_eq!(SubsetMask::all_subsets(3).count(), 8);
    }
}
