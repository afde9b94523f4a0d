use std::sync::Arc;

use crate::topo::family::{Role, SetFamily};
use crate::topo::pointset::PointSet;
use crate::topo::space::FiniteSpace;

/// All regular open sets (fixed points of `int ∘ cl`), canonically ordered.
pub fn ro_family(space: &Arc<FiniteSpace>) -> SetFamily {
    let members = space.opens().iter().copied().filter(|&u| space.is_regular_open(u)).collect();
    SetFamily::from_parts_unchecked(space.clone(), members, Role::Plain)
}

/// The Boolean algebra of regular open sets of a finite space.
#[derive(Clone, Debug)]
pub struct RegularOpenAlgebra {
    space: Arc<FiniteSpace>,
    members: Vec<PointSet>,
    atoms: Vec<PointSet>,
}

impl RegularOpenAlgebra {
    pub fn new(space: Arc<FiniteSpace>) -> Self {
        let members = ro_family(&space).members().to_vec();
        let atoms = members
            .iter()
            .copied()
            .filter(|a| !a.is_empty() && !members.iter().any(|b| !b.is_empty() && b != a && b.is_subset(*a)))
            .collect();
        RegularOpenAlgebra { space, members, atoms }
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    /// Minimal nonzero elements, canonically ordered.
    pub fn atoms(&self) -> &[PointSet] {
        &self.atoms
    }

    pub fn zero(&self) -> PointSet {
        PointSet::EMPTY
    }

    pub fn one(&self) -> PointSet {
        self.space.full()
    }

    pub fn meet(&self, a: PointSet, b: PointSet) -> PointSet {
        a & b
    }

    pub fn join(&self, a: PointSet, b: PointSet) -> PointSet {
        self.space.regular_part_of(a | b)
    }

    pub fn complement(&self, a: PointSet) -> PointSet {
        self.space.interior_of(a.complement(self.space.points()))
    }

    /// Indices of the atoms lying below `a`.
    pub fn atoms_below(&self, a: PointSet) -> PointSet {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, atom)| atom.is_subset(a))
            .map(|(i, _)| i)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set;

    fn x3() -> Arc<FiniteSpace> {
        Arc::new(
            FiniteSpace::new(3, [set![], set![0], set![2], set![0, 2], set![0, 1], set![0, 1, 2]]).unwrap(),
        )
    }

    #[test]
    fn ro_examples() {
        assert_eq!(ro_family(&Arc::new(FiniteSpace::discrete(3))).len(), 8);
        assert_eq!(ro_family(&Arc::new(FiniteSpace::sierpinski())).members(), &[set![], set![0, 1]]);
        assert_eq!(ro_family(&x3()).members(), &[set![], set![2], set![0, 1], set![0, 1, 2]]);
    }

    #[test]
    fn atoms_of_x3() {
        let ro = RegularOpenAlgebra::new(x3());
        assert_eq!(ro.atoms(), &[set![2], set![0, 1]]);
        assert_eq!(ro.atoms_below(ro.one()), set![0, 1]);
        assert_eq!(ro.complement(set![2]), set![0, 1]);
        assert_eq!(ro.join(set![2], set![0, 1]), ro.one());
    }
}
