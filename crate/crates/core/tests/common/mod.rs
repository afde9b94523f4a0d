#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use fnlab::topo::{FiniteSpace, PointSet};
use fnlab::workbench::enumerate_topologies;
use proptest::prelude::*;
use proptest::sample::Index;

pub fn set(points: &[usize]) -> PointSet {
    points.iter().copied().collect()
}

pub fn sets(lists: &[&[usize]]) -> Vec<PointSet> {
    lists.iter().map(|l| set(l)).collect()
}

pub fn space(points: usize, opens: &[&[usize]]) -> Arc<FiniteSpace> {
    Arc::new(FiniteSpace::new(points, sets(opens)).unwrap())
}

/// Opens ∅, {0}, {2}, {0,2}, {0,1}, X.
pub fn x3() -> Arc<FiniteSpace> {
    space(3, &[&[], &[0], &[2], &[0, 2], &[0, 1], &[0, 1, 2]])
}

/// Two clusters {0,1} and {2,3}.
pub fn clusters() -> Arc<FiniteSpace> {
    space(4, &[&[], &[0, 1], &[2, 3], &[0, 1, 2, 3]])
}

pub fn topologies(n: usize) -> &'static [FiniteSpace] {
    static ALL: OnceLock<Vec<Vec<FiniteSpace>>> = OnceLock::new();
    &ALL.get_or_init(|| (0..=4).map(|n| enumerate_topologies(n).unwrap()).collect())[n]
}

pub fn all_spaces(max_points: usize) -> impl Iterator<Item = Arc<FiniteSpace>> {
    (1..=max_points).flat_map(|n| topologies(n).iter().map(|s| Arc::new(s.clone())))
}

/// A uniformly chosen topology on 1..=max_points points.
pub fn any_space(max_points: usize) -> impl Strategy<Value = Arc<FiniteSpace>> {
    (1..=max_points, any::<Index>()).prop_map(|(n, i)| Arc::new(i.get(topologies(n)).clone()))
}

pub fn any_subset(space: &FiniteSpace, bits: u64) -> PointSet {
    PointSet::from_bits(bits).intersection(space.full())
}
