use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topo::pointset::PointSet;
use crate::topo::space::FiniteSpace;

/// What a family claims to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Base,
    PiBase,
    Cover,
    Plain,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Base => "base",
            Role::PiBase => "pi_base",
            Role::Cover => "cover",
            Role::Plain => "plain",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "base" => Ok(Role::Base),
            "pi_base" | "pi-base" => Ok(Role::PiBase),
            "cover" => Ok(Role::Cover),
            "plain" => Ok(Role::Plain),
            other => Err(Error::Document(format!("unknown role `{other}`"))),
        }
    }
}

/// An ordered family of distinct point-sets over a space, tagged with a role
/// whose invariants were checked at construction.
#[derive(Clone, Debug)]
pub struct SetFamily {
    space: Arc<FiniteSpace>,
    members: Vec<PointSet>,
    role: Role,
}

impl PartialEq for SetFamily {
    fn eq(&self, other: &Self) -> bool {
        self.role == other.role && self.members == other.members && same_space(&self.space, &other.space)
    }
}

impl Eq for SetFamily {}

pub(crate) fn same_space(a: &Arc<FiniteSpace>, b: &Arc<FiniteSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl SetFamily {
    pub fn new(space: Arc<FiniteSpace>, members: Vec<PointSet>, role: Role) -> Result<Self> {
        let mut seen = HashSet::with_capacity(members.len());
        for &m in &members {
            space.check_set(m)?;
            if !seen.insert(m) {
                return Err(Error::DuplicateMember(m));
            }
        }
        let family = SetFamily { space, members, role };
        family.role_violation(role).map_or(Ok(family), Err)
    }

    pub fn plain(space: Arc<FiniteSpace>, members: Vec<PointSet>) -> Result<Self> {
        SetFamily::new(space, members, Role::Plain)
    }

    /// The whole topology as a base, canonically ordered.
    pub fn all_opens(space: Arc<FiniteSpace>) -> Self {
        let members = space.opens().to_vec();
        SetFamily { space, members, role: Role::Base }
    }

    /// Every nonempty open set, as a π-base.
    pub fn nonempty_opens(space: Arc<FiniteSpace>) -> Self {
        let members = space.nonempty_opens().collect();
        SetFamily { space, members, role: Role::PiBase }
    }

    pub(crate) fn from_parts_unchecked(space: Arc<FiniteSpace>, members: Vec<PointSet>, role: Role) -> Self {
        SetFamily { space, members, role }
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, s: PointSet) -> Option<usize> {
        self.members.iter().position(|&m| m == s)
    }

    pub fn union(&self) -> PointSet {
        PointSet::union_all(self.members.iter().copied())
    }

    /// Re-tags the family, checking the new role's invariants.
    pub fn with_role(mut self, role: Role) -> Result<Self> {
        if let Some(err) = self.role_violation(role) {
            return Err(err);
        }
        self.role = role;
        Ok(self)
    }

    /// Same members sorted canonically.
    pub fn canonicalized(&self) -> Self {
        let mut members = self.members.clone();
        members.sort();
        SetFamily { space: self.space.clone(), members, role: self.role }
    }

    /// Decides the invariants of `role` for this family.
    pub fn satisfies(&self, role: Role) -> bool {
        self.role_violation(role).is_none()
    }

    fn role_violation(&self, role: Role) -> Option<Error> {
        let violation = |reason: String| Some(Error::RoleViolation { role: role.name(), reason });
        let sp = &self.space;
        match role {
            Role::Plain => None,
            Role::Cover => {
                let missing = sp.full() - self.union();
                if missing.is_empty() {
                    None
                } else {
                    violation(format!("points {missing} are not covered"))
                }
            }
            Role::Base => {
                if let Some(&m) = self.members.iter().find(|&&m| !sp.is_open(m)) {
                    return violation(format!("member {m} is not open"));
                }
                for &u in sp.opens() {
                    let inside = PointSet::union_all(self.members.iter().copied().filter(|m| m.is_subset(u)));
                    if inside != u {
                        return violation(format!("open set {u} is not a union of members"));
                    }
                }
                None
            }
            Role::PiBase => {
                if let Some(&m) = self.members.iter().find(|&&m| !sp.is_open(m) || m.is_empty()) {
                    return violation(format!("member {m} is not a nonempty open set"));
                }
                for u in sp.nonempty_opens() {
                    if !self.members.iter().any(|m| m.is_subset(u)) {
                        return violation(format!("open set {u} contains no member"));
                    }
                }
                None
            }
        }
    }
}

/// Decides whether `family` satisfies the invariants of `role`.
pub fn family_role_check(family: &SetFamily, role: Role) -> bool {
    family.satisfies(role)
}

/// Union of the members of `cover` that contain `x`.
pub fn star(cover: &SetFamily, x: usize) -> Result<PointSet> {
    cover.space().check_point(x)?;
    if !cover.satisfies(Role::Cover) {
        return Err(Error::RoleViolation { role: "cover", reason: "family does not cover the space".into() });
    }
    Ok(star_of(cover.members(), x))
}

pub(crate) fn star_of(members: &[PointSet], x: usize) -> PointSet {
    PointSet::union_all(members.iter().copied().filter(|m| m.contains(x)))
}

/// Members not strictly contained in another member, in their original order.
pub fn maximal_subfamily(family: &SetFamily) -> SetFamily {
    let members = maximal_members(family.members());
    // Only the cover tag survives: the maximal members of a base are rarely a base.
    let role = match family.role() {
        Role::Cover => Role::Cover,
        _ => Role::Plain,
    };
    SetFamily::from_parts_unchecked(family.space().clone(), members, role)
}

pub(crate) fn maximal_members(members: &[PointSet]) -> Vec<PointSet> {
    members
        .iter()
        .copied()
        .filter(|&a| !members.iter().any(|&b| a != b && a.is_subset(b)))
        .collect()
}

/// Membership statistics for a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointFiniteness {
    /// Always true for a finite family.
    pub point_finite: bool,
    pub max_multiplicity: usize,
    /// Lowest point attaining `max_multiplicity`, when it is positive.
    pub attained_at: Option<usize>,
}

pub fn is_point_finite(family: &SetFamily) -> PointFiniteness {
    let mut best = (0, None);
    for x in 0..family.space().points() {
        let count = family.members().iter().filter(|m| m.contains(x)).count();
        if count > best.0 {
            best = (count, Some(x));
        }
    }
    PointFiniteness { point_finite: true, max_multiplicity: best.0, attained_at: best.1 }
}

/// Whether every member of `fine` lies inside some member of `coarse`.
pub fn is_refinement(fine: &SetFamily, coarse: &SetFamily) -> Result<bool> {
    if !same_space(fine.space(), coarse.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(refines(fine.members(), coarse.members()))
}

pub(crate) fn refines(fine: &[PointSet], coarse: &[PointSet]) -> bool {
    fine.iter().all(|f| coarse.iter().any(|c| f.is_subset(*c)))
}

/// A nonempty finite sequence of open covers, read as repeating its last
/// cover forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSequence {
    space: Arc<FiniteSpace>,
    covers: Vec<SetFamily>,
}

impl CoverSequence {
    pub fn new(space: Arc<FiniteSpace>, covers: Vec<SetFamily>) -> Result<Self> {
        if covers.is_empty() {
            return Err(Error::EmptySequence);
        }
        for (i, c) in covers.iter().enumerate() {
            if !same_space(&space, c.space()) {
                return Err(Error::SpaceMismatch);
            }
            if let Some(&m) = c.members().iter().find(|&&m| !space.is_open(m)) {
                return Err(Error::NotOpen(m));
            }
            if !c.satisfies(Role::Cover) {
                return Err(Error::RoleViolation { role: "cover", reason: format!("cover {i} misses points") });
            }
        }
        let covers = covers.into_iter().map(|c| SetFamily { role: Role::Cover, ..c }).collect();
        Ok(CoverSequence { space, covers })
    }

    /// Convenience constructor from raw member lists.
    pub fn from_sets(space: Arc<FiniteSpace>, covers: Vec<Vec<PointSet>>) -> Result<Self> {
        let families = covers
            .into_iter()
            .map(|c| SetFamily::new(space.clone(), c, Role::Plain))
            .collect::<Result<Vec<_>>>()?;
        CoverSequence::new(space, families)
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn covers(&self) -> &[SetFamily] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the first cover that does not refine its predecessor.
    pub fn first_non_refining(&self) -> Option<usize> {
        (1..self.covers.len()).find(|&i| !refines(self.covers[i].members(), self.covers[i - 1].members()))
    }
}

/// Whether the stars of every point eventually shrink into each of its
/// neighbourhoods. Only stored indices are tried: the repeated tail adds
/// nothing new.
pub fn is_development(seq: &CoverSequence) -> bool {
    let space = seq.space();
    (0..space.points()).all(|x| {
        // Every open set containing x contains its minimal neighbourhood, so
        // that one is the binding constraint.
        let nbhd = space.neighbourhood(x);
        seq.covers().iter().any(|c| star_of(c.members(), x).is_subset(nbhd))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set;

    fn d3() -> Arc<FiniteSpace> {
        Arc::new(FiniteSpace::discrete(3))
    }

    fn fam(space: &Arc<FiniteSpace>, members: &[PointSet], role: Role) -> SetFamily {
        SetFamily::new(space.clone(), members.to_vec(), role).unwrap()
    }

    #[test]
    fn star_examples() {
        let sp = d3();
        assert_eq!(star(&fam(&sp, &[set![0], set![1], set![2]], Role::Cover), 0).unwrap(), set![0]);
        assert_eq!(star(&fam(&sp, &[set![0, 1], set![0, 2]], Role::Cover), 0).unwrap(), set![0, 1, 2]);
        assert_eq!(star(&fam(&sp, &[sp.full()], Role::Cover), 2).unwrap(), sp.full());
        assert!(star(&fam(&sp, &[sp.full()], Role::Cover), 3).is_err());
    }

    #[test]
    fn maximal_subfamily_examples() {
        let sp = d3();
        let f = fam(&sp, &[set![0], set![0, 1], set![2]], Role::Cover);
        let m = maximal_subfamily(&f);
        assert_eq!(m.members(), &[set![0, 1], set![2]]);
        assert!(m.satisfies(Role::Cover));
        let anti = fam(&sp, &[set![0, 1], set![1, 2]], Role::Plain);
        assert_eq!(maximal_subfamily(&anti).members(), anti.members());
        assert_eq!(maximal_subfamily(&fam(&sp, &[sp.full()], Role::Plain)).members(), &[sp.full()]);
    }

    #[test]
    fn point_finiteness_reports_multiplicity() {
        let d2 = Arc::new(FiniteSpace::discrete(2));
        let r = is_point_finite(&fam(&d2, &[set![0], set![0, 1]], Role::Plain));
        assert_eq!(r, PointFiniteness { point_finite: true, max_multiplicity: 2, attained_at: Some(0) });
        let e = is_point_finite(&fam(&d2, &[], Role::Plain));
        assert_eq!(e.max_multiplicity, 0);
        assert!(e.point_finite);
    }

    #[test]
    fn refinement_examples() {
        let sp = d3();
        let a = fam(&sp, &[set![0], set![1], set![2]], Role::Plain);
        let b = fam(&sp, &[set![0, 1], set![2]], Role::Plain);
        assert!(is_refinement(&a, &b).unwrap());
        assert!(is_refinement(&a, &a).unwrap());
        let c = fam(&sp, &[set![0, 1]], Role::Plain);
        let d = fam(&sp, &[set![0], set![1]], Role::Plain);
        assert!(!is_refinement(&c, &d).unwrap());
        let other = fam(&Arc::new(FiniteSpace::discrete(2)), &[set![0]], Role::Plain);
        assert_eq!(is_refinement(&other, &a), Err(Error::SpaceMismatch));
    }

    #[test]
    fn development_examples() {
        let sp = d3();
        let seq = CoverSequence::from_sets(sp.clone(), vec![vec![set![0], set![1], set![2]]]).unwrap();
        assert!(is_development(&seq));
        let seq = CoverSequence::from_sets(sp.clone(), vec![vec![set![0, 1], set![0, 2]]]).unwrap();
        assert!(!is_development(&seq));

        let s = Arc::new(FiniteSpace::sierpinski());
        // Point 0 is only in X, so every open cover contains X.
        for covers in [vec![vec![set![0, 1]]], vec![vec![set![0, 1], set![1]], vec![set![1], set![0, 1]]]] {
            assert!(!is_development(&CoverSequence::from_sets(s.clone(), covers).unwrap()));
        }
        assert_eq!(CoverSequence::from_sets(sp, vec![]), Err(Error::EmptySequence));
    }

    #[test]
    fn role_checks() {
        let s = Arc::new(FiniteSpace::sierpinski());
        assert!(SetFamily::all_opens(s.clone()).satisfies(Role::Base));
        let one = fam(&s, &[set![1]], Role::Plain);
        assert!(family_role_check(&one, Role::PiBase));
        assert!(!family_role_check(&one, Role::Base));
        assert!(!family_role_check(&one, Role::Cover));
        assert!(SetFamily::new(s, vec![set![0]], Role::Base).is_err());
    }
}
