use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::topo::pointset::{PointSet, MAX_POINTS};

/// A topology on `{0..n-1}` given by the explicit list of its open sets.
///
/// Opens are kept in canonical order, so two equal topologies compare and
/// hash equal and "the first open with property P" is well defined.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteSpace {
    points: usize,
    opens: Vec<PointSet>,
}

/// What [`FiniteSpace::generated_by`] had to add to the generating family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub generators: usize,
    pub added: usize,
}

impl FiniteSpace {
    /// Validates an explicit open family. Duplicates and non-closure are
    /// errors that name the offending sets.
    pub fn new<I: IntoIterator<Item = PointSet>>(points: usize, opens: I) -> Result<Self> {
        check_point_count(points)?;
        let mut seen = BTreeSet::new();
        for s in opens {
            if !s.fits(points) {
                return Err(Error::SetOutOfRange { set: s, points });
            }
            if !seen.insert(s) {
                return Err(Error::DuplicateMember(s));
            }
        }
        if !seen.contains(&PointSet::EMPTY) {
            return Err(Error::MissingBound("empty"));
        }
        if !seen.contains(&PointSet::full(points)) {
            return Err(Error::MissingBound("full"));
        }
        let opens: Vec<PointSet> = seen.into_iter().collect();
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                if opens.binary_search(&(a | b)).is_err() {
                    return Err(Error::NotUnionClosed { a, b, result: a | b });
                }
                if opens.binary_search(&(a & b)).is_err() {
                    return Err(Error::NotIntersectionClosed { a, b, result: a & b });
                }
            }
        }
        Ok(FiniteSpace { points, opens })
    }

    /// The coarsest topology containing `generators`: closes the family
    /// under pairwise union and intersection and adds ∅ and the full set.
    pub fn generated_by<I: IntoIterator<Item = PointSet>>(
        points: usize,
        generators: I,
    ) -> Result<(Self, ClosureReport)> {
        check_point_count(points)?;
        let mut set = BTreeSet::new();
        let mut generator_count = 0;
        for s in generators {
            if !s.fits(points) {
                return Err(Error::SetOutOfRange { set: s, points });
            }
            if set.insert(s) {
                generator_count += 1;
            }
        }
        let original = set.clone();
        set.insert(PointSet::EMPTY);
        set.insert(PointSet::full(points));
        let mut frontier: Vec<PointSet> = set.iter().copied().collect();
        while !frontier.is_empty() {
            let snapshot: Vec<PointSet> = set.iter().copied().collect();
            let mut next = Vec::new();
            for &a in &frontier {
                for &b in &snapshot {
                    for c in [a | b, a & b] {
                        if set.insert(c) {
                            next.push(c);
                        }
                    }
                }
            }
            frontier = next;
        }
        let added = set.difference(&original).count();
        let space = FiniteSpace { points, opens: set.into_iter().collect() };
        Ok((space, ClosureReport { generators: generator_count, added }))
    }

    pub fn discrete(n: usize) -> Self {
        assert!(n <= 16, "discrete space too large to list extensionally");
        let mut opens: Vec<PointSet> = (0..1u64 << n).map(PointSet::from_bits).collect();
        opens.sort();
        FiniteSpace { points: n, opens }
    }

    pub fn indiscrete(n: usize) -> Self {
        let mut opens = vec![PointSet::EMPTY, PointSet::full(n)];
        opens.dedup();
        FiniteSpace { points: n, opens }
    }

    /// Two points, opens `∅, {1}, {0,1}`.
    pub fn sierpinski() -> Self {
        FiniteSpace {
            points: 2,
            opens: vec![PointSet::EMPTY, PointSet::singleton(1), PointSet::full(2)],
        }
    }

    /// Caller guarantees a valid topology; opens are sorted here.
    pub(crate) fn from_opens_unchecked(points: usize, mut opens: Vec<PointSet>) -> Self {
        opens.sort();
        debug_assert!(FiniteSpace::new(points, opens.iter().copied()).is_ok());
        FiniteSpace { points, opens }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.points)
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn nonempty_opens(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.opens.iter().copied().filter(|s| !s.is_empty())
    }

    /// Closed sets in the canonical order of their complements.
    pub fn closed_sets(&self) -> impl Iterator<Item = PointSet> + '_ {
        let n = self.points;
        self.opens.iter().map(move |u| u.complement(n))
    }

    pub fn is_open(&self, s: PointSet) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: PointSet) -> bool {
        s.fits(self.points) && self.is_open(s.complement(self.points))
    }

    pub fn check_set(&self, s: PointSet) -> Result<()> {
        if s.fits(self.points) {
            Ok(())
        } else {
            Err(Error::SetOutOfRange { set: s, points: self.points })
        }
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x < self.points {
            Ok(())
        } else {
            Err(Error::PointOutOfRange { point: x, points: self.points })
        }
    }

    /// Largest open subset of `s`.
    pub fn interior(&self, s: PointSet) -> Result<PointSet> {
        self.check_set(s)?;
        Ok(self.interior_of(s))
    }

    /// Smallest closed superset of `s`.
    pub fn closure(&self, s: PointSet) -> Result<PointSet> {
        self.check_set(s)?;
        Ok(self.closure_of(s))
    }

    /// `interior(closure(s))`.
    pub fn regular_part(&self, s: PointSet) -> Result<PointSet> {
        self.check_set(s)?;
        Ok(self.regular_part_of(s))
    }

    pub(crate) fn interior_of(&self, s: PointSet) -> PointSet {
        // The opens are union-closed, so the union of those inside `s` is open.
        PointSet::union_all(self.opens.iter().copied().filter(|u| u.is_subset(s)))
    }

    pub(crate) fn closure_of(&self, s: PointSet) -> PointSet {
        let n = self.points;
        self.interior_of(s.complement(n)).complement(n)
    }

    pub(crate) fn regular_part_of(&self, s: PointSet) -> PointSet {
        self.interior_of(self.closure_of(s))
    }

    pub fn is_regular_open(&self, s: PointSet) -> bool {
        s.fits(self.points) && self.regular_part_of(s) == s
    }

    /// Smallest open set containing `x`.
    pub fn neighbourhood(&self, x: usize) -> PointSet {
        self.opens
            .iter()
            .copied()
            .filter(|u| u.contains(x))
            .fold(self.full(), PointSet::intersection)
    }

    pub fn is_dense(&self, s: PointSet) -> bool {
        self.closure_of(s) == self.full()
    }
}

fn check_point_count(points: usize) -> Result<()> {
    if points > MAX_POINTS {
        Err(Error::TooManyPoints { points, max: MAX_POINTS })
    } else {
        Ok(())
    }
}

impl PartialOrd for FiniteSpace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteSpace {
    /// Point count, then number of opens, then the canonical open lists.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.points
            .cmp(&other.points)
            .then(self.opens.len().cmp(&other.opens.len()))
            .then_with(|| self.opens.cmp(&other.opens))
    }
}
