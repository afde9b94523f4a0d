use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

/// Largest number of points a space may carry.
pub const MAX_POINTS: usize = 64;

/// A subset of `{0..n-1}` packed into a machine word.
///
/// The set does not know `n`; complements are taken relative to an explicit
/// point count. Ordering is the canonical one used everywhere as the
/// tie-breaker: by cardinality first, then lexicographically on the sorted
/// index lists.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    /// The set `{0..n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_POINTS);
        PointSet(1u64 << i)
    }

    pub const fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_POINTS && self.0 & (1u64 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < MAX_POINTS);
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        if i < MAX_POINTS {
            self.0 &= !(1u64 << i);
        }
    }

    pub fn union(self, other: Self) -> Self {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        PointSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        PointSet(self.0 & !other.0)
    }

    /// Complement relative to `{0..n-1}`.
    pub fn complement(self, n: usize) -> Self {
        PointSet::full(n).difference(self)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_superset(self, other: Self) -> bool {
        other.is_subset(self)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        !self.is_disjoint(other)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Whether every member is `< n`.
    pub fn fits(self, n: usize) -> bool {
        self.is_subset(PointSet::full(n))
    }

    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> Points {
        Points(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Builds a set from indices, rejecting any index `>= MAX_POINTS`.
    pub fn try_from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Option<Self> {
        let mut s = PointSet::EMPTY;
        for i in indices {
            if i >= MAX_POINTS {
                return None;
            }
            s.insert(i);
        }
        Some(s)
    }

    /// Union of an iterator of sets.
    pub fn union_all<I: IntoIterator<Item = PointSet>>(sets: I) -> Self {
        sets.into_iter().fold(PointSet::EMPTY, PointSet::union)
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // Equal cardinality: the first differing position of the sorted lists
        // is decided by the lowest differing bit.
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitOr for PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl BitAnd for PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

impl Sub for PointSet {
    type Output = PointSet;
    fn sub(self, rhs: Self) -> Self {
        self.difference(rhs)
    }
}

impl FromIterator<usize> for PointSet {
    /// Panics on indices `>= MAX_POINTS`; use [`PointSet::try_from_indices`]
    /// for untrusted input.
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PointSet::try_from_indices(iter).expect("point index out of range")
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Iterator over the members of a [`PointSet`] in increasing order.
#[derive(Clone)]
pub struct Points(u64);

impl Iterator for Points {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Points {}

/// Shorthand for building sets in tests and examples: `set![0, 2]`.
#[macro_export]
macro_rules! set {
    () => { $crate::topo::PointSet::EMPTY };
    ($($i:expr),+ $(,)?) => {
        $crate::topo::PointSet::try_from_indices([$($i),+]).expect("index out of range")
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_order_is_cardinality_then_lexicographic() {
        let mut sets = vec![set![0, 2], set![1], set![], set![0, 1], set![0], set![1, 2]];
        sets.sort();
        assert_eq!(sets, vec![set![], set![0], set![1], set![0, 1], set![0, 2], set![1, 2]]);
    }

    #[test]
    fn complement_and_display() {
        assert_eq!(set![1].complement(3), set![0, 2]);
        assert_eq!(set![0, 3].to_string(), "{0,3}");
        assert_eq!(PointSet::full(64).len(), 64);
    }

    proptest! {
        #[test]
        fn order_matches_sorted_index_lists(a in 0u64..4096, b in 0u64..4096) {
            let (x, y) = (PointSet::from_bits(a), PointSet::from_bits(b));
            let key = |s: PointSet| (s.len(), s.to_vec());
            prop_assert_eq!(x.cmp(&y), key(x).cmp(&key(y)));
        }
    }
}
