//! Quotients by the relation "same membership pattern across a family of
//! open sets", the weakly-completely-regular and completely-regular family
//! conditions, and separation axioms.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::topo::{same_space, FiniteSpace, PointSet, Role, SetFamily, SpaceMap};

/// Equivalence classes of points, ordered by their least point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub classes: Vec<PointSet>,
    pub class_of: Vec<usize>,
}

fn check_open_members(space: &Arc<FiniteSpace>, family: &SetFamily) -> Result<()> {
    if !same_space(space, family.space()) {
        return Err(Error::SpaceMismatch);
    }
    match family.members().iter().find(|&&m| !space.is_open(m)) {
        Some(&m) => Err(Error::NotOpen(m)),
        None => Ok(()),
    }
}

/// `x ~ y` iff every member of `family` contains both or neither.
pub fn partition(space: &Arc<FiniteSpace>, family: &SetFamily) -> Result<Partition> {
    check_open_members(space, family)?;
    let mut by_signature: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    let mut classes: Vec<PointSet> = Vec::new();
    let mut class_of = Vec::with_capacity(space.points());
    for x in 0..space.points() {
        let signature: Vec<bool> = family.members().iter().map(|m| m.contains(x)).collect();
        let next = classes.len();
        let c = *by_signature.entry(signature).or_insert(next);
        if c == next {
            classes.push(PointSet::EMPTY);
        }
        classes[c].insert(x);
        class_of.push(c);
    }
    Ok(Partition { classes, class_of })
}

/// The quotient space, the quotient map, and the images of the family.
#[derive(Clone, Debug)]
pub struct QuotientResult {
    pub partition: Partition,
    pub quotient: Arc<FiniteSpace>,
    pub q: SpaceMap,
    /// `{q[V] : V ∈ P}` with duplicates removed, in family order.
    pub base_image: SetFamily,
}

/// Builds the quotient topology extensionally: a set of classes is open iff
/// its preimage is open. Checks `q⁻¹(q[V]) = V` and `q[V∩W] = q[V]∩q[W]`
/// for all members of the family.
pub fn build_quotient(space: &Arc<FiniteSpace>, family: &SetFamily) -> Result<QuotientResult> {
    let partition = partition(space, family)?;
    let k = partition.classes.len();
    let to_classes = |s: PointSet| -> PointSet { s.iter().map(|x| partition.class_of[x]).collect() };

    let saturated = space
        .opens()
        .iter()
        .copied()
        .filter(|&u| u.iter().all(|x| partition.classes[partition.class_of[x]].is_subset(u)));
    let quotient = Arc::new(FiniteSpace::new(k, saturated.map(to_classes))?);
    let q = SpaceMap::new(space.clone(), quotient.clone(), partition.class_of.clone())?;

    let m = family.members();
    for &v in m {
        if q.preimage(q.image_of(v)) != v {
            return Err(Error::Postcondition(format!("q⁻¹(q[{v}]) differs from {v}")));
        }
        for &w in m {
            if q.image_of(v & w) != q.image_of(v) & q.image_of(w) {
                return Err(Error::Postcondition(format!("q[{v} ∩ {w}] differs from q[{v}] ∩ q[{w}]")));
            }
        }
    }

    let mut images: Vec<PointSet> = Vec::new();
    for &v in m {
        let img = q.image_of(v);
        if !images.contains(&img) {
            images.push(img);
        }
    }
    let base_image = SetFamily::new(quotient.clone(), images, Role::Plain)?;
    Ok(QuotientResult { partition, quotient, q, base_image })
}

/// How to treat tuples whose intersection is empty.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EmptyTargets {
    /// An empty sequence of pairs represents `∅`; such tuples pass.
    #[default]
    Vacuous,
    /// At least one pair is required, so some subfamily must cover the space.
    Strict,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WcrOptions {
    /// Largest tuple size tried; `None` means the size of the family.
    pub k_cap: Option<usize>,
    pub empty_targets: EmptyTargets,
}

/// One `(A, B)` pair for a point of a target intersection: as member
/// indices, with `x ∈ ⋃A ⊆ X ∖ ⋃B ⊆ target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCertificate {
    pub point: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleCertificate {
    /// The first tuple (in enumeration order) with this intersection.
    pub tuple: Vec<usize>,
    pub target: PointSet,
    pub points: Vec<PointCertificate>,
    /// For strict empty targets: a covering subfamily.
    pub cover: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WcrCertificate {
    pub tuples: Vec<TupleCertificate>,
}

impl WcrCertificate {
    /// Re-evaluates every inclusion chain literally.
    pub fn recheck(&self, space: &FiniteSpace, family: &SetFamily) -> bool {
        let m = family.members();
        let union = |idx: &[usize]| PointSet::union_all(idx.iter().map(|&i| m[i]));
        self.tuples.iter().all(|t| {
            let meet = t.tuple.iter().fold(space.full(), |acc, &i| acc & m[i]);
            let cover_ok = t.cover.as_ref().is_none_or(|c| union(c) == space.full());
            let points_ok = t.points.iter().all(|p| {
                let (ua, outside_b) = (union(&p.a), space.full() - union(&p.b));
                ua.contains(p.point) && ua.is_subset(outside_b) && outside_b.is_subset(t.target)
            });
            let covered = PointSet::union_all(t.points.iter().map(|p| PointSet::singleton(p.point)));
            meet == t.target && cover_ok && points_ok && covered == t.target
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WcrVerdict {
    pub holds: bool,
    pub certificate: Option<WcrCertificate>,
    /// First failing tuple and, for nonempty targets, the unservable point.
    pub failure: Option<(Vec<usize>, Option<usize>)>,
}

/// Decides the weakly-completely-regular condition for all tuples of up to
/// `k_cap` members, in its pointwise form: for every point `x` of a tuple's
/// intersection `T` there are finite `A, B ⊆ P` with
/// `x ∈ ⋃A ⊆ X ∖ ⋃B ⊆ T`. The empty tuple (intersection `X`) is included.
pub fn is_wcr(space: &Arc<FiniteSpace>, family: &SetFamily, options: WcrOptions) -> Result<WcrVerdict> {
    check_open_members(space, family)?;
    let m = family.members();
    let cap = options.k_cap.unwrap_or(m.len()).min(m.len());

    let mut seen: Vec<PointSet> = Vec::new();
    let mut tuples = Vec::new();
    for tuple in tuples_up_to(m.len(), cap) {
        let target = tuple.iter().fold(space.full(), |acc, &i| acc & m[i]);
        if seen.contains(&target) {
            continue;
        }
        seen.push(target);

        let cover = if target.is_empty() && options.empty_targets == EmptyTargets::Strict {
            // Any covering B works with A = ∅; all of P covers if anything does.
            if family.union() != space.full() {
                return Ok(WcrVerdict { holds: false, certificate: None, failure: Some((tuple, None)) });
            }
            Some((0..m.len()).collect())
        } else {
            None
        };

        let mut points = Vec::new();
        for x in target.iter() {
            match serve_point(space, m, x, target) {
                Some(cert) => points.push(cert),
                None => {
                    return Ok(WcrVerdict { holds: false, certificate: None, failure: Some((tuple, Some(x))) })
                }
            }
        }
        tuples.push(TupleCertificate { tuple, target, points, cover });
    }
    Ok(WcrVerdict { holds: true, certificate: Some(WcrCertificate { tuples }), failure: None })
}

/// A single member `G ∋ x` suffices for `A` whenever any `A` works; given
/// `G`, the best `B` is every member disjoint from `G`, trimmed to those that
/// meet the complement of the target.
fn serve_point(space: &FiniteSpace, m: &[PointSet], x: usize, target: PointSet) -> Option<PointCertificate> {
    let outside = space.full() - target;
    m.iter().enumerate().filter(|(_, g)| g.contains(x) && g.is_subset(target)).find_map(|(gi, &g)| {
        let b: Vec<usize> = (0..m.len()).filter(|&j| m[j].is_disjoint(g) && m[j].intersects(outside)).collect();
        let covered = PointSet::union_all(b.iter().map(|&j| m[j]));
        outside.is_subset(covered).then(|| PointCertificate { point: x, a: vec![gi], b })
    })
}

/// All index tuples `i_1 < … < i_k` with `k ≤ cap`, by size then
/// lexicographically. Starts with the empty tuple.
fn tuples_up_to(n: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..cap {
        let mut next = Vec::new();
        for t in &layer {
            let start = t.last().map_or(0, |&l| l + 1);
            for i in start..n {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Pointwise completely-regular condition: for each `U ∈ P` and `x ∈ U`
/// there are `U′, V′ ∈ P` with `x ∈ U′ ⊆ X ∖ V′ ⊆ U`.
pub fn is_cr_family(space: &Arc<FiniteSpace>, family: &SetFamily) -> Result<bool> {
    check_open_members(space, family)?;
    let m = family.members();
    let full = space.full();
    Ok(m.iter().all(|&u| {
        u.iter().all(|x| {
            m.iter().any(|&inner| {
                inner.contains(x) && m.iter().any(|&v| inner.is_subset(full - v) && (full - v).is_subset(u))
            })
        })
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SeparationReport {
    pub t0: bool,
    pub t1: bool,
    pub t2: bool,
    /// Points and closed sets not containing them have disjoint
    /// neighbourhoods; T1 is not implied.
    pub regular: bool,
}

pub fn separation_report(space: &FiniteSpace) -> SeparationReport {
    let n = space.points();
    let opens = space.opens();
    let pairs = || (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)));
    let t0 = pairs().all(|(x, y)| opens.iter().any(|u| u.contains(x) != u.contains(y)));
    let t1 = pairs().all(|(x, y)| opens.iter().any(|u| u.contains(x) && !u.contains(y)));
    let disjoint_nbhds = |a: PointSet, b: PointSet| {
        opens
            .iter()
            .any(|&u| a.is_subset(u) && opens.iter().any(|&v| b.is_subset(v) && u.is_disjoint(v)))
    };
    let t2 = pairs().all(|(x, y)| disjoint_nbhds(PointSet::singleton(x), PointSet::singleton(y)));
    let regular = space.closed_sets().all(|f| {
        (0..n).filter(|&x| !f.contains(x)).all(|x| disjoint_nbhds(PointSet::singleton(x), f))
    });
    SeparationReport { t0, t1, t2, regular }
}
