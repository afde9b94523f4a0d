use crate::error::{Error, Result};
use crate::topo::{FiniteSpace, PointSet};

/// Largest point count [`enumerate_topologies`] accepts.
pub const MAX_ENUMERATION_POINTS: usize = 4;

/// Every topology on `n` labelled points, in canonical order.
///
/// Topologies on a finite set correspond to preorders: the opens are the
/// up-sets of `x ≤ y ⟺ every open containing x contains y`. So the
/// enumeration runs over transitive reflexive relations instead of families.
pub fn enumerate_topologies(n: usize) -> Result<Vec<FiniteSpace>> {
    if n > MAX_ENUMERATION_POINTS {
        return Err(Error::TooManyPoints { points: n, max: MAX_ENUMERATION_POINTS });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for bits in 0u64..1 << pairs.len() {
        // up[a] = points above a, including a.
        let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if bits >> k & 1 == 1 {
                up[a].insert(b);
            }
        }
        let transitive = (0..n).all(|a| up[a].iter().all(|b| up[b].is_subset(up[a])));
        if transitive {
            out.push(up_set_topology(n, &up));
        }
    }
    out.sort();
    Ok(out)
}

/// The same list found the slow way: every family of subsets containing ∅
/// and the full set is tested for closure under pairwise ∪ and ∩.
pub fn enumerate_by_closure_filter(n: usize) -> Result<Vec<FiniteSpace>> {
    if n > MAX_ENUMERATION_POINTS {
        return Err(Error::TooManyPoints { points: n, max: MAX_ENUMERATION_POINTS });
    }
    let full = PointSet::full(n);
    let middle: Vec<PointSet> = (0..1u64 << n).map(PointSet::from_bits).filter(|&s| !s.is_empty() && s != full).collect();
    let mut out = Vec::new();
    for pick in 0u64..1 << middle.len() {
        let mut family = vec![PointSet::EMPTY, full];
        family.extend((0..middle.len()).filter(|i| pick >> i & 1 == 1).map(|i| middle[i]));
        family.dedup();
        if let Ok(space) = FiniteSpace::new(n, family) {
            out.push(space);
        }
    }
    out.sort();
    Ok(out)
}

/// Opens of a preorder given by the up-closure of each point.
pub(crate) fn up_set_topology(n: usize, up: &[PointSet]) -> FiniteSpace {
    let opens = (0..1u64 << n)
        .map(PointSet::from_bits)
        .filter(|s| s.iter().all(|x| up[x].is_subset(*s)))
        .collect();
    FiniteSpace::from_opens_unchecked(n, opens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (0..=3).map(|n| enumerate_topologies(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29]);
    }

    #[test]
    fn two_points_in_canonical_order() {
        let tops = enumerate_topologies(2).unwrap();
        let sizes: Vec<usize> = tops.iter().map(|t| t.opens().len()).collect();
        assert_eq!(sizes, vec![2, 3, 3, 4]);
        assert!(tops.contains(&FiniteSpace::sierpinski()));
    }

    #[test]
    fn agrees_with_closure_filter() {
        for n in 0..=3 {
            assert_eq!(enumerate_topologies(n).unwrap(), enumerate_by_closure_filter(n).unwrap());
        }
    }

    #[test]
    fn guard() {
        assert!(matches!(enumerate_topologies(5), Err(Error::TooManyPoints { .. })));
    }
}
