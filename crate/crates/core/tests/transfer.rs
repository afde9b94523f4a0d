mod common;

use std::sync::Arc;

use common::*;
use fnlab::topo::{FiniteSpace, Role, SetFamily, SpaceMap};
use fnlab::transfer::{lemma_harness, pullback_pi_base, representatives_agree, transfer_witness, AbsoluteTriple};
use fnlab::witness::{search_fns, trivial_fns, verify_fns};
use fnlab::Error;
use proptest::prelude::*;

fn collapse() -> SpaceMap {
    SpaceMap::new(clusters(), Arc::new(FiniteSpace::discrete(2)), vec![0, 0, 1, 1]).unwrap()
}

fn singletons(space: &Arc<FiniteSpace>) -> SetFamily {
    SetFamily::new(space.clone(), (0..space.points()).map(fnlab::topo::PointSet::singleton).collect(), Role::PiBase)
        .unwrap()
}

#[test]
fn pullbacks() {
    let f = collapse();
    let pulled = pullback_pi_base(&f, &singletons(f.target())).unwrap();
    assert_eq!(pulled.members(), &sets(&[&[0, 1], &[2, 3]])[..]);
    assert!(pulled.satisfies(Role::PiBase));

    for sp in all_spaces(3) {
        let base = SetFamily::nonempty_opens(sp.clone());
        let same = pullback_pi_base(&SpaceMap::identity(sp.clone()), &base).unwrap();
        assert_eq!(same.members(), base.members());
    }

    let d2 = Arc::new(FiniteSpace::discrete(2));
    let point = Arc::new(FiniteSpace::discrete(1));
    let squash = SpaceMap::new(d2, point.clone(), vec![0, 0]).unwrap();
    assert!(matches!(pullback_pi_base(&squash, &singletons(&point)), Err(Error::Precondition(_))));
}

#[test]
fn transfers() {
    for sp in all_spaces(3) {
        let t = AbsoluteTriple::identity(sp.clone());
        let base = SetFamily::nonempty_opens(sp.clone());
        let s = trivial_fns(&base);
        let out = transfer_witness(&t, &base, &s).unwrap();
        assert_eq!(out.family_y.members(), base.members());
        assert_eq!(out.s_z.images(), s.images());
    }

    let t = AbsoluteTriple::new(collapse(), collapse()).unwrap();
    let base = singletons(t.x());
    let found = search_fns(&base, 2).unwrap();
    let out = transfer_witness(&t, &base, &found.witness).unwrap();
    assert_eq!(out.family_y.members(), base.members());
    assert!(verify_fns(&out.s_z).ok);
    assert_eq!(representatives_agree(&t, &base, &found.witness, 16).unwrap(), Some(true));
}

#[test]
fn triples_need_irreducible_maps() {
    let d2 = Arc::new(FiniteSpace::discrete(2));
    let point = Arc::new(FiniteSpace::discrete(1));
    let squash = SpaceMap::new(d2.clone(), point, vec![0, 0]).unwrap();
    let err = AbsoluteTriple::new(squash, SpaceMap::identity(d2)).unwrap_err();
    assert!(err.to_string().contains("irreducible"), "{err}");
}

#[test]
fn small_harness_runs() {
    let r = lemma_harness(2).unwrap();
    assert!(r.failures.is_empty());
    assert!(r.expected_failures_found);
    let ce = r.counterexample.unwrap();
    assert!(ce.recheck());
    assert!(!ce.map.is_irreducible());

    let r = lemma_harness(1).unwrap();
    assert!(r.failures.is_empty());
    assert!(!r.expected_failures_found);
}

/// Irreducible maps out of `z` onto spaces with at most as many points.
fn irreducible_from(z: &Arc<FiniteSpace>) -> Vec<SpaceMap> {
    all_spaces(z.points())
        .flat_map(|y| SpaceMap::all(z, &y))
        .filter(SpaceMap::is_irreducible)
        .collect()
}

proptest! {
    #[test]
    fn transferred_witnesses_verify(z in any_space(4), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let maps = irreducible_from(&z);
        let f = a.get(&maps).clone();
        let g = b.get(&maps).clone();
        let t = AbsoluteTriple::new(f, g).unwrap();
        let base_x = SetFamily::nonempty_opens(t.x().clone());
        for s in [trivial_fns(&base_x)].into_iter().chain(search_fns(&base_x, 3).map(|f| f.witness)) {
            let out = transfer_witness(&t, &base_x, &s).unwrap();
            prop_assert!(out.family_y.satisfies(Role::PiBase));
            prop_assert!(verify_fns(&out.s_z).ok);
            prop_assert!(pullback_pi_base(t.g(), &base_x).unwrap().satisfies(Role::PiBase));
        }
    }
}
