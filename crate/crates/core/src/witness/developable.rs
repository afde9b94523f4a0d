use crate::error::{Error, Result};
use crate::topo::{is_development, maximal_members, CoverSequence, PointSet, Role, SetFamily};
use crate::witness::{verify_fn, FnWitness};

/// Output of [`developable_fn`].
#[derive(Clone, Debug)]
pub struct DevelopableFn {
    /// Union of the maximal subfamilies, ordered by first level and then as
    /// listed within that level.
    pub base: SetFamily,
    /// First level at which each base member appears.
    pub levels: Vec<usize>,
    pub witness: FnWitness,
    /// The sequence of maximal subfamilies, itself a development.
    pub maximal: CoverSequence,
}

/// Builds an FN witness from a refining development of point-finite covers:
/// `l(U) = {U}` and `u(U)` collects the maximal members containing `U` at
/// levels up to the first level where `U` appears.
pub fn developable_fn(seq: &CoverSequence) -> Result<DevelopableFn> {
    if !is_development(seq) {
        return Err(Error::Precondition("the cover sequence is not a development".into()));
    }
    if let Some(i) = seq.first_non_refining() {
        return Err(Error::Precondition(format!("cover {i} does not refine cover {}", i - 1)));
    }
    // Point-finiteness holds for every finite cover; nothing to reject.

    let space = seq.space().clone();
    let maximal: Vec<Vec<PointSet>> = seq
        .covers()
        .iter()
        .map(|c| maximal_members(c.members()))
        .collect();

    let mut members: Vec<PointSet> = Vec::new();
    let mut levels = Vec::new();
    for (n, level) in maximal.iter().enumerate() {
        for &w in level {
            if !members.contains(&w) {
                members.push(w);
                levels.push(n);
            }
        }
    }

    let base = SetFamily::new(space.clone(), members.clone(), Role::Base)
        .map_err(|e| Error::Postcondition(format!("maximal members do not form a base: {e}")))?;

    let index = |s: PointSet| members.iter().position(|&m| m == s).expect("member of some level");
    let up = members
        .iter()
        .zip(&levels)
        .map(|(&u, &first)| {
            let mut img: Vec<usize> = maximal[..=first]
                .iter()
                .flatten()
                .filter(|w| u.is_subset(**w))
                .map(|&w| index(w))
                .collect();
            img.sort_unstable();
            img.dedup();
            img
        })
        .collect();
    let down = (0..members.len()).map(|i| vec![i]).collect();
    let witness = FnWitness::new(base.clone(), up, down)?;

    let verdict = verify_fn(&witness);
    if !verdict.ok {
        return Err(Error::Postcondition(format!(
            "constructed witness fails on pair {:?}",
            verdict.counterexample
        )));
    }
    let maximal = CoverSequence::from_sets(space, maximal)?;
    if !is_development(&maximal) {
        return Err(Error::Postcondition("maximal subfamilies are not a development".into()));
    }
    Ok(DevelopableFn { base, levels, witness, maximal })
}
