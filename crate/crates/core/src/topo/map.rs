use std::sync::Arc;

use crate::error::{Error, Result};
use crate::topo::family::{same_space, Role, SetFamily};
use crate::topo::pointset::PointSet;
use crate::topo::space::FiniteSpace;

/// A total function from the points of one finite space to another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMap {
    source: Arc<FiniteSpace>,
    target: Arc<FiniteSpace>,
    image: Vec<usize>,
}

impl SpaceMap {
    pub fn new(source: Arc<FiniteSpace>, target: Arc<FiniteSpace>, image: Vec<usize>) -> Result<Self> {
        if image.len() != source.points() {
            return Err(Error::MapLength { got: image.len(), expected: source.points() });
        }
        for &y in &image {
            target.check_point(y)?;
        }
        Ok(SpaceMap { source, target, image })
    }

    pub fn identity(space: Arc<FiniteSpace>) -> Self {
        let image = (0..space.points()).collect();
        SpaceMap { source: space.clone(), target: space, image }
    }

    /// Every map from `source` to `target`, ordered by image vector with the
    /// first point varying slowest.
    pub fn all(source: &Arc<FiniteSpace>, target: &Arc<FiniteSpace>) -> Vec<SpaceMap> {
        let (n, m) = (source.points(), target.points());
        if m == 0 {
            let empty = SpaceMap { source: source.clone(), target: target.clone(), image: Vec::new() };
            return if n == 0 { vec![empty] } else { Vec::new() };
        }
        let total = m.pow(n as u32);
        (0..total)
            .map(|mut code| {
                let mut image = vec![0; n];
                for slot in image.iter_mut().rev() {
                    *slot = code % m;
                    code /= m;
                }
                SpaceMap { source: source.clone(), target: target.clone(), image }
            })
            .collect()
    }

    pub fn source(&self) -> &Arc<FiniteSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteSpace> {
        &self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// `f(s)` for a subset of the source.
    pub fn image_of(&self, s: PointSet) -> PointSet {
        s.iter().fold(PointSet::EMPTY, |mut acc, x| {
            acc.insert(self.image[x]);
            acc
        })
    }

    /// `f⁻¹(t)` for a subset of the target.
    pub fn preimage(&self, t: PointSet) -> PointSet {
        self.image
            .iter()
            .enumerate()
            .filter(|(_, &y)| t.contains(y))
            .fold(PointSet::EMPTY, |mut acc, (x, _)| {
                acc.insert(x);
                acc
            })
    }

    pub fn is_onto(&self) -> bool {
        self.image_of(self.source.full()) == self.target.full()
    }

    pub fn is_continuous(&self) -> bool {
        self.target.opens().iter().all(|&v| self.source.is_open(self.preimage(v)))
    }

    pub fn is_closed_map(&self) -> bool {
        self.source.closed_sets().all(|f| self.target.is_closed(self.image_of(f)))
    }

    pub fn is_open_map(&self) -> bool {
        self.source.opens().iter().all(|&u| self.target.is_open(self.image_of(u)))
    }

    pub fn is_skeletal(&self) -> bool {
        self.source
            .nonempty_opens()
            .all(|u| !self.target.regular_part_of(self.image_of(u)).is_empty())
    }

    pub fn is_d_open(&self) -> bool {
        self.source.opens().iter().all(|&u| {
            let fu = self.image_of(u);
            fu.is_subset(self.target.regular_part_of(fu))
        })
    }

    /// Continuous closed surjection such that no proper closed subset of the
    /// source already maps onto the target.
    pub fn is_irreducible(&self) -> bool {
        self.is_onto()
            && self.is_continuous()
            && self.is_closed_map()
            && self.has_no_proper_closed_cover()
    }

    fn has_no_proper_closed_cover(&self) -> bool {
        let full = self.source.full();
        let target = self.target.full();
        self.source.closed_sets().filter(|&f| f != full).all(|f| self.image_of(f) != target)
    }

    /// `Y ∖ f(X ∖ U)`.
    pub fn small_image(&self, u: PointSet) -> Result<PointSet> {
        self.source.check_set(u)?;
        Ok(self.small_image_of(u))
    }

    pub(crate) fn small_image_of(&self, u: PointSet) -> PointSet {
        let outside = u.complement(self.source.points());
        self.target.full() - self.image_of(outside)
    }

    /// `{y : f⁻¹(y) ⊆ U}`, evaluated fibre by fibre.
    pub fn small_image_by_fibres(&self, u: PointSet) -> PointSet {
        (0..self.target.points())
            .filter(|&y| self.preimage(PointSet::singleton(y)).is_subset(u))
            .collect()
    }

    pub fn report(&self) -> MapReport {
        map_report(self)
    }
}

/// The classification flags of a map, each decided from its definition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct MapReport {
    pub onto: bool,
    pub continuous: bool,
    pub closed_map: bool,
    pub open_map: bool,
    pub skeletal: bool,
    pub d_open: bool,
    pub irreducible: bool,
}

pub fn map_report(f: &SpaceMap) -> MapReport {
    let onto = f.is_onto();
    let continuous = f.is_continuous();
    let closed_map = f.is_closed_map();
    MapReport {
        onto,
        continuous,
        closed_map,
        open_map: f.is_open_map(),
        skeletal: f.is_skeletal(),
        d_open: f.is_d_open(),
        irreducible: onto && continuous && closed_map && f.has_no_proper_closed_cover(),
    }
}

pub fn small_image(f: &SpaceMap, u: PointSet) -> Result<PointSet> {
    f.small_image(u)
}

/// The preimage-family separation condition for a base of the target.
///
/// With `P = {f⁻¹(V) : V ∈ base_y}`: for every `S ⊆ P` and every point
/// `x ∉ cl ⋃S` some member of `P` contains `x` and misses `⋃S`. Only the
/// distinct unions of subfamilies are visited.
pub fn kpv_condition(f: &SpaceMap, base_y: &SetFamily) -> Result<bool> {
    if !same_space(f.target(), base_y.space()) {
        return Err(Error::SpaceMismatch);
    }
    if !base_y.satisfies(Role::Base) {
        return Err(Error::RoleViolation { role: "base", reason: "family is not a base of the target".into() });
    }
    let mut pre: Vec<PointSet> = base_y.members().iter().map(|&v| f.preimage(v)).collect();
    pre.sort();
    pre.dedup();

    let mut unions = vec![PointSet::EMPTY];
    let mut i = 0;
    while i < unions.len() {
        let u = unions[i];
        for &p in &pre {
            let w = u | p;
            if !unions.contains(&w) {
                unions.push(w);
            }
        }
        i += 1;
    }

    let source = f.source();
    Ok(unions.iter().all(|&u| {
        let outside = source.full() - source.closure_of(u);
        outside.iter().all(|x| pre.iter().any(|w| w.contains(x) && w.is_disjoint(u)))
    }))
}
