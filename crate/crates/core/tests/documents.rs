mod common;

use std::sync::Arc;

use common::*;
use fnlab::game::{make_adversary, play, sigma_strategy, AdversaryKind};
use fnlab::topo::{CoverSequence, FiniteSpace, SetFamily, SpaceMap};
use fnlab::transfer::{lemma_harness, AbsoluteTriple};
use fnlab::witness::{search_fns, trivial_fns, FnWitness};
use fnlab::workbench::doc::{
    parse, render, space_hash, CoversDoc, Document, FamilyDoc, FnWitnessDoc, FnsWitnessDoc, LemmaReportDoc,
    SpaceDoc, Strictness, TranscriptDoc, TripleDoc,
};
use fnlab::workbench::sweep::{run_sweep, SweepKind};
use fnlab::workbench::{generate, GenSpec};
use fnlab::Error;
use proptest::prelude::*;

fn round_trip<D: Document + PartialEq + std::fmt::Debug>(doc: &D) -> Result<(), TestCaseError> {
    let text = render(doc);
    let back: D = parse(&text, Strictness::Strict).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&back, doc);
    prop_assert_eq!(render(&back), text);
    Ok(())
}

#[test]
fn generators() {
    assert_eq!(generate(&GenSpec::Discrete(3)).unwrap().opens().len(), 8);
    let chain = generate(&GenSpec::Alexandrov { points: 2, edges: vec![(0, 1)] }).unwrap();
    assert_eq!(chain, FiniteSpace::sierpinski());
    let blocks = generate(&GenSpec::Cluster(vec![vec![0, 1], vec![2, 3]])).unwrap();
    assert_eq!(blocks.opens(), clusters().opens());
    assert!(matches!(
        generate(&GenSpec::Alexandrov { points: 2, edges: vec![(0, 1), (1, 0)] }),
        Err(Error::InvalidGenerator(_))
    ));
    let spec = GenSpec::Random { points: 6, density: 0.2, seed: 7 };
    assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
}

#[test]
fn loading_rejects_bad_spaces() {
    let text = "format = \"fnlab-space-1\"\npoints = 3\nopens = [[], [0], [1], [0, 1, 2]]\n";
    let doc: SpaceDoc = parse(text, Strictness::Strict).unwrap();
    let err = doc.to_space(false).unwrap_err().to_string();
    assert!(err.contains("{0}") && err.contains("{1}"), "{err}");
    let (space, report) = doc.to_space(true).unwrap();
    assert!(space.is_open(set(&[0, 1])));
    assert!(report.is_some());

    let x = x3();
    let mut fam = FamilyDoc::from_family(&SetFamily::all_opens(x.clone()));
    fam.space_hash = space_hash(&FiniteSpace::discrete(3));
    assert!(fam.to_family(&x).is_err());
}

#[test]
fn lax_documents_keep_unknown_keys() {
    let text = "format = \"fnlab-space-1\"\npoints = 1\nopens = [[], [0]]\nnote = \"kept\"\n";
    assert!(parse::<SpaceDoc>(text, Strictness::Strict).is_err());
    let doc: SpaceDoc = parse(text, Strictness::Lax).unwrap();
    assert_eq!(doc.unknown_keys(), vec!["note".to_string()]);
    assert!(render(&doc).contains("note = \"kept\""));
}

#[test]
fn reports_round_trip() {
    let doc = LemmaReportDoc::from_report(&lemma_harness(2).unwrap());
    round_trip(&doc).unwrap();
    assert_eq!(doc.to_report().unwrap().counterexample.is_some(), doc.counterexample.is_some());
    round_trip(&run_sweep(SweepKind::Game, 2, 1).unwrap()).unwrap();
}

proptest! {
    #[test]
    fn spaces_round_trip(sp in any_space(4)) {
        let doc = SpaceDoc::from_space(&sp, Some("s"));
        round_trip(&doc)?;
        prop_assert_eq!(&doc.to_space(false).unwrap().0, &*sp);
    }

    #[test]
    fn families_and_witnesses_round_trip(sp in any_space(4)) {
        let all = SetFamily::all_opens(sp.clone());
        round_trip(&FamilyDoc::from_family(&all))?;
        let back = FamilyDoc::from_family(&all).to_family(&sp).unwrap();
        prop_assert_eq!(back.members(), all.members());

        let nonempty = SetFamily::nonempty_opens(sp.clone());
        let w = if nonempty.len() <= 6 { search_fns(&nonempty, nonempty.len()).unwrap().witness } else { trivial_fns(&nonempty) };
        let doc = FnsWitnessDoc::from_witness(&w);
        round_trip(&doc)?;
        prop_assert_eq!(doc.to_witness(&sp).unwrap(), w);

        let fw = FnWitness::trivial(&all);
        let doc = FnWitnessDoc::from_witness(&fw);
        round_trip(&doc)?;
        let back = doc.to_witness(&sp).unwrap();
        prop_assert_eq!(back.up(), fw.up());
    }

    #[test]
    fn covers_and_transcripts_round_trip(sp in any_space(4)) {
        let seq = CoverSequence::from_sets(sp.clone(), vec![vec![sp.full()], sp.nonempty_opens().collect()]).unwrap();
        let doc = CoversDoc::from_sequence(&seq);
        round_trip(&doc)?;
        prop_assert_eq!(doc.to_sequence(&sp).unwrap().len(), 2);

        let base = SetFamily::all_opens(sp.clone());
        let sigma = sigma_strategy(&trivial_fns(&base)).unwrap();
        let t = play(&sp, &sigma, &make_adversary(AdversaryKind::MaxAvoider, &base), 6).unwrap();
        let doc = TranscriptDoc::from_transcript(&t);
        round_trip(&doc)?;
        prop_assert_eq!(doc.to_transcript(&sp).unwrap(), t);
    }

    #[test]
    fn triples_round_trip(z in any_space(3), i in any::<prop::sample::Index>()) {
        let maps: Vec<SpaceMap> = all_spaces(z.points()).flat_map(|y| SpaceMap::all(&z, &y)).filter(SpaceMap::is_irreducible).collect();
        let f = i.get(&maps).clone();
        let t = AbsoluteTriple::new(f.clone(), SpaceMap::identity(z.clone())).unwrap();
        let doc = TripleDoc::from_triple(&t);
        round_trip(&doc)?;
        let back = doc.to_triple().unwrap();
        prop_assert_eq!(back.f().image(), f.image());
        prop_assert_eq!(&**back.y(), &**f.target());
    }
}

#[test]
fn hashes_ignore_names() {
    let s = Arc::new(FiniteSpace::sierpinski());
    let named = render(&SpaceDoc::from_space(&s, Some("S")));
    assert_eq!(named, "format = \"fnlab-space-1\"\nname = \"S\"\npoints = 2\nopens = [[], [1], [0, 1]]\n");
    assert_eq!(space_hash(&s).len(), 64);
    assert_ne!(space_hash(&s), space_hash(&FiniteSpace::discrete(2)));
}
