use std::sync::Arc;

use crate::error::{Error, Result};
use crate::topo::{ro_family, FiniteSpace, PointSet, RegularOpenAlgebra, Role, SetFamily};
use crate::witness::{verify_fns, FnWitness, FnsWitness};

/// The Stone space of a finite regular-open algebra together with the lifted
/// witness.
#[derive(Clone, Debug)]
pub struct StoneLift {
    /// Discrete space whose points are the atoms of the algebra.
    pub stone: Arc<FiniteSpace>,
    pub atoms: Vec<PointSet>,
    /// `Ū` for each member `U` of the input family, in the same order.
    pub base: SetFamily,
    pub witness: FnsWitness,
}

/// Lifts a witness on the regular open sets to the Stone space: each `U`
/// becomes the set of atoms below it and `s̄(Ū) = {W̄ : W ∈ s(U)}`.
pub fn stone_lift(space: &Arc<FiniteSpace>, s_ro: &FnsWitness) -> Result<StoneLift> {
    let algebra = RegularOpenAlgebra::new(space.clone());
    let family = s_ro.family();
    let mut given = family.members().to_vec();
    given.sort();
    if given != algebra.members() || !crate::topo::same_space(family.space(), space) {
        return Err(Error::Precondition("witness is not defined on the regular open sets".into()));
    }

    let atoms = algebra.atoms().to_vec();
    let stone = Arc::new(FiniteSpace::discrete(atoms.len()));
    let lifted: Vec<PointSet> = family.members().iter().map(|&u| algebra.atoms_below(u)).collect();
    let base = SetFamily::new(stone.clone(), lifted, Role::Base)
        .map_err(|e| Error::Postcondition(format!("lifted family is not a base: {e}")))?;
    let witness = FnsWitness::new(base.clone(), s_ro.images().to_vec())?;

    if verify_fns(s_ro).ok && !verify_fns(&witness).ok {
        return Err(Error::Postcondition("lift of a verifying witness does not verify".into()));
    }
    Ok(StoneLift { stone, atoms, base, witness })
}

/// Projects an FN witness on the whole topology to the regular open sets via
/// `W ↦ int cl W`, dropping any image that would break a side condition.
pub fn project_fn_to_ro(space: &Arc<FiniteSpace>, w: &FnWitness) -> Result<FnWitness> {
    let base = w.base();
    let mut members = base.members().to_vec();
    members.sort();
    if members != space.opens() {
        return Err(Error::Precondition("witness base is not the full topology".into()));
    }
    let ro = ro_family(space);
    let bm = base.members();
    let index_in_ro = |s: PointSet| ro.index_of(s).expect("int cl of an open set is regular open");

    let mut up = Vec::with_capacity(ro.len());
    let mut down = Vec::with_capacity(ro.len());
    for &u in ro.members() {
        let at = base.index_of(u).expect("regular open sets are open");
        let project = |imgs: &[usize], keep: &dyn Fn(PointSet) -> bool| {
            let mut out: Vec<usize> = imgs
                .iter()
                .map(|&i| space.regular_part_of(bm[i]))
                .filter(|&r| keep(r))
                .map(index_in_ro)
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        };
        up.push(project(&w.up()[at], &|r| u.is_subset(r)));
        down.push(project(&w.down()[at], &|r| r.is_subset(u)));
    }
    FnWitness::new(ro, up, down)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set;
    use crate::witness::{trivial_fns, verify_fn};

    fn x3() -> Arc<FiniteSpace> {
        Arc::new(
            FiniteSpace::new(3, [set![], set![0], set![2], set![0, 2], set![0, 1], set![0, 1, 2]]).unwrap(),
        )
    }

    #[test]
    fn stone_lift_of_x3() {
        let sp = x3();
        let lift = stone_lift(&sp, &trivial_fns(&ro_family(&sp))).unwrap();
        assert_eq!(lift.stone.points(), 2);
        assert_eq!(lift.atoms, vec![set![2], set![0, 1]]);
        assert_eq!(lift.base.len(), 4);
        assert!(verify_fns(&lift.witness).ok);
    }

    #[test]
    fn stone_lift_degenerate_and_discrete() {
        let ind = Arc::new(FiniteSpace::indiscrete(2));
        let lift = stone_lift(&ind, &trivial_fns(&ro_family(&ind))).unwrap();
        assert_eq!(lift.stone.points(), 1);

        let d3 = Arc::new(FiniteSpace::discrete(3));
        let lift = stone_lift(&d3, &trivial_fns(&ro_family(&d3))).unwrap();
        // Atoms are the singletons in order, so the lift is the identity relabelling.
        assert_eq!(lift.base.members(), ro_family(&d3).members());
    }

    #[test]
    fn stone_lift_rejects_foreign_family() {
        let sp = x3();
        let opens = SetFamily::all_opens(sp.clone());
        assert!(stone_lift(&sp, &trivial_fns(&opens)).is_err());
    }

    #[test]
    fn projection_examples() {
        let sp = x3();
        let projected = project_fn_to_ro(&sp, &FnWitness::trivial(&SetFamily::all_opens(sp.clone()))).unwrap();
        assert_eq!(projected.base().members(), &[set![], set![2], set![0, 1], set![0, 1, 2]]);
        assert!(verify_fn(&projected).ok);

        let d2 = Arc::new(FiniteSpace::discrete(2));
        let w = FnWitness::trivial(&SetFamily::all_opens(d2.clone()));
        let projected = project_fn_to_ro(&d2, &w).unwrap();
        assert_eq!(projected.up(), w.up());
        assert_eq!(projected.down(), w.down());

        let ind = Arc::new(FiniteSpace::indiscrete(2));
        let projected = project_fn_to_ro(&ind, &FnWitness::trivial(&SetFamily::all_opens(ind.clone()))).unwrap();
        assert_eq!(projected.base().members(), &[set![], set![0, 1]]);
        assert!(verify_fn(&projected).ok);
    }
}
