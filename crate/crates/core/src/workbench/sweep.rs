//! The acceptance sweeps. Each sweep returns a [`SweepReport`] whose bytes
//! depend only on its inputs: work is spread over a pool of the requested
//! size and merged back in enumeration order.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{exhaustive_win, make_adversary, play, sigma_strategy, AdversaryKind};
use crate::quotient::{build_quotient, is_wcr, separation_report, WcrOptions};
use crate::topo::{
    kpv_condition, ro_family, CoverSequence, FiniteSpace, PointSet, RegularOpenAlgebra, Role, SetFamily, SpaceMap,
};
use crate::transfer::{lemma_harness_with, representatives_agree, transfer_witness, AbsoluteTriple, LemmaOptions};
use crate::witness::{
    developable_fn, fns_exists_within, project_fn_to_ro, search_fns, search_fns_within, stone_lift, trivial_fns, verify_fn, verify_fns,
    FnWitness, FnsWitness,
};
use crate::workbench::doc::{CheckLine, SweepReport};
use crate::workbench::{enumerate_by_closure_filter, enumerate_topologies, MAX_ENUMERATION_POINTS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKind {
    Lemmas,
    Quotient,
    Game,
    Witness,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Lemmas => "lemmas",
            SweepKind::Quotient => "quotient",
            SweepKind::Game => "game",
            SweepKind::Witness => "witness",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [SweepKind::Lemmas, SweepKind::Quotient, SweepKind::Game, SweepKind::Witness]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

/// Node budget for each exhaustive game search.
pub const GAME_NODE_BUDGET: u64 = 5_000_000;
/// Node budget for each minimal-witness search inside a sweep. Families
/// whose search runs past it keep only the trivial witness.
pub const SEARCH_NODE_BUDGET: u64 = 200_000;
/// Seed for every randomised part of the sweeps.
pub const SWEEP_SEED: u64 = 0x5eed;

pub fn run_sweep(kind: SweepKind, max_points: usize, workers: usize) -> Result<SweepReport> {
    if max_points > MAX_ENUMERATION_POINTS {
        return Err(Error::TooManyPoints { points: max_points, max: MAX_ENUMERATION_POINTS });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    let checks = pool.install(|| match kind {
        SweepKind::Lemmas => lemmas(max_points),
        SweepKind::Quotient => quotient(max_points),
        SweepKind::Game => game(max_points),
        SweepKind::Witness => witness(max_points),
    })?;
    Ok(SweepReport::new(kind.name(), max_points, checks))
}

fn spaces_up_to(max_points: usize) -> Result<Vec<Arc<FiniteSpace>>> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        out.extend(enumerate_topologies(n)?.into_iter().map(Arc::new));
    }
    Ok(out)
}

/// Sums per-instance `(instances, failures)` and keeps the first failure
/// description in enumeration order.
#[derive(Default)]
struct Tally {
    instances: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        self.failures += other.failures;
        if self.first.is_none() {
            self.first = other.first;
        }
        self
    }

    fn line(self, criterion: u32, name: &str, extra: &str) -> CheckLine {
        let detail = match (self.first, extra.is_empty()) {
            (Some(f), true) => format!("first failure: {f}"),
            (Some(f), false) => format!("{extra}; first failure: {f}"),
            (None, _) => extra.to_string(),
        };
        CheckLine::new(criterion, name, self.instances, self.failures, detail)
    }
}

fn merge_all(parts: Vec<Tally>) -> Tally {
    parts.into_iter().fold(Tally::default(), Tally::merge)
}

fn describe_space(s: &FiniteSpace) -> String {
    let opens: Vec<String> = s.opens().iter().map(|o| o.to_string()).collect();
    format!("space on {} points with opens [{}]", s.points(), opens.join(", "))
}

/// All bases of a space, as subfamilies of its opens in canonical order.
fn all_bases(space: &Arc<FiniteSpace>) -> Vec<SetFamily> {
    let opens = space.opens();
    (0..1u64 << opens.len())
        .filter_map(|mask| {
            let members = (0..opens.len()).filter(|i| mask >> i & 1 == 1).map(|i| opens[i]).collect();
            SetFamily::new(space.clone(), members, Role::Base).ok()
        })
        .collect()
}

fn witness(max_points: usize) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();

    let mut t = Tally::default();
    let mut counts = Vec::new();
    for n in 1..=max_points {
        let fast = enumerate_topologies(n)?;
        let slow = enumerate_by_closure_filter(n)?;
        counts.push(fast.len().to_string());
        t.check(fast == slow, || format!("enumerations differ on {n} points"));
    }
    lines.push(t.line(1, "topology enumeration matches closure filter", &format!("counts {}", counts.join("/"))));

    let spaces = spaces_up_to(max_points)?;
    let parts = spaces
        .par_iter()
        .map(|s| {
            let mut t = Tally::default();
            let base = SetFamily::all_opens(s.clone());
            t.check(verify_fns(&trivial_fns(&base)).ok, || describe_space(s));
            t
        })
        .collect();
    lines.push(merge_all(parts).line(2, "trivial FNS witness on the full topology", ""));

    let mut t = Tally::default();
    let d2 = Arc::new(FiniteSpace::discrete(2));
    let d2_base = SetFamily::new(d2, vec![PointSet::singleton(0), PointSet::singleton(1), PointSet::full(2)], Role::Base)?;
    let d3 = Arc::new(FiniteSpace::discrete(3));
    let mut d3_members: Vec<PointSet> = (0..3).map(PointSet::singleton).collect();
    d3_members.push(PointSet::full(3));
    let d3_base = SetFamily::new(d3, d3_members, Role::Base)?;
    let mut found = Vec::new();
    for (family, expected) in [(&d2_base, 2), (&d3_base, 3)] {
        let k = search_fns(family, family.len()).map(|s| s.k_min);
        found.push(format!("{k:?}"));
        let refuted = expected == 0 || !fns_exists_within(family, expected - 1);
        t.check(k == Some(expected) && refuted, || format!("expected k_min {expected}, found {k:?}"));
    }
    lines.push(t.line(3, "minimal FNS bounds", &format!("k_min {}", found.join(", "))));

    let mut t = Tally::default();
    for n in 1..=6 {
        let space = Arc::new(FiniteSpace::discrete(n));
        let singles = SetFamily::new(space, (0..n).map(PointSet::singleton).collect(), Role::Base)?;
        let same: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let w = FnWitness::new(singles, same.clone(), same)?;
        t.check(verify_fn(&w).ok, || format!("discrete space on {n} points"));
    }
    lines.push(t.line(4, "singleton FN witness on discrete spaces", ""));

    lines.push(developments()?);

    let parts = spaces
        .par_iter()
        .map(|s| {
            let mut t = Tally::default();
            let ro = ro_family(s);
            let atoms = RegularOpenAlgebra::new(s.clone()).atoms().len();
            let mut inputs = vec![trivial_fns(&ro)];
            if let Ok(Some(found)) = search_fns_within(&ro, ro.len(), SEARCH_NODE_BUDGET) {
                inputs.push(found.witness);
            }
            for w in &inputs {
                let ok = match stone_lift(s, w) {
                    Ok(lift) => verify_fns(&lift.witness).ok && lift.stone.points() == atoms,
                    Err(_) => false,
                };
                t.check(ok, || describe_space(s));
            }
            t
        })
        .collect();
    lines.push(merge_all(parts).line(10, "Stone lift of regular-open witnesses", ""));

    let parts = spaces
        .par_iter()
        .map(|s| {
            let mut t = Tally::default();
            let w = FnWitness::trivial(&SetFamily::all_opens(s.clone()));
            let ok = project_fn_to_ro(s, &w).map(|p| verify_fn(&p).ok).unwrap_or(false);
            t.check(ok, || describe_space(s));
            t
        })
        .collect();
    lines.push(merge_all(parts).line(0, "FN projection to regular open sets", ""));
    Ok(lines)
}

/// Every family of nonempty subsets of `{0..n-1}` that covers it.
fn covers_of(n: usize) -> Vec<Vec<PointSet>> {
    let subsets: Vec<PointSet> = (1..1u64 << n).map(PointSet::from_bits).collect();
    (1..1u64 << subsets.len())
        .map(|mask| (0..subsets.len()).filter(|i| mask >> i & 1 == 1).map(|i| subsets[i]).collect::<Vec<_>>())
        .filter(|c| PointSet::union_all(c.iter().copied()) == PointSet::full(n))
        .collect()
}

fn refines(fine: &[PointSet], coarse: &[PointSet]) -> bool {
    fine.iter().all(|f| coarse.iter().any(|c| f.is_subset(*c)))
}

/// A random cover refining `coarse`: each member is split into random
/// blocks, and with some probability kept whole as well.
fn random_refinement(rng: &mut ChaCha8Rng, coarse: &[PointSet]) -> Vec<PointSet> {
    let mut out = Vec::new();
    for &m in coarse {
        if rng.gen_bool(0.3) {
            out.push(m);
        }
        let pts = m.to_vec();
        let blocks = rng.gen_range(1..=pts.len());
        let mut parts = vec![PointSet::EMPTY; blocks];
        for x in pts {
            parts[rng.gen_range(0..blocks)].insert(x);
        }
        out.extend(parts.into_iter().filter(|p| !p.is_empty()));
    }
    out.sort();
    out.dedup();
    out
}

fn random_cover(rng: &mut ChaCha8Rng, n: usize) -> Vec<PointSet> {
    let mut out: Vec<PointSet> = (1..1u64 << n).map(PointSet::from_bits).filter(|_| rng.gen_bool(0.15)).collect();
    let covered = PointSet::union_all(out.iter().copied());
    out.extend((0..n).filter(|&x| !covered.contains(x)).map(PointSet::singleton));
    out.sort();
    out.dedup();
    out
}

/// Refining sequences of covers on discrete spaces: exhaustive up to two
/// points (length ≤ 3) and three points (length ≤ 2), seeded random
/// sequences of length ≤ 3 on three to five points.
fn developments() -> Result<CheckLine> {
    const RANDOM_PER_SIZE: usize = 300;
    let mut sequences: Vec<(usize, Vec<Vec<PointSet>>)> = Vec::new();
    for (n, max_len) in [(1, 3), (2, 3), (3, 2)] {
        let covers = covers_of(n);
        let mut frontier: Vec<Vec<Vec<PointSet>>> = covers.iter().map(|c| vec![c.clone()]).collect();
        for len in 1..=max_len {
            sequences.extend(frontier.iter().map(|s| (n, s.clone())));
            if len == max_len {
                break;
            }
            frontier = frontier
                .iter()
                .flat_map(|s| {
                    let last = s.last().expect("nonempty");
                    covers.iter().filter(|c| refines(c, last)).map(|c| {
                        let mut next = s.clone();
                        next.push(c.clone());
                        next
                    })
                })
                .collect();
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    for n in 3..=5 {
        for _ in 0..RANDOM_PER_SIZE {
            let len = rng.gen_range(1..=3);
            let mut seq = vec![random_cover(&mut rng, n)];
            while seq.len() < len {
                let next = random_refinement(&mut rng, seq.last().expect("nonempty"));
                seq.push(next);
            }
            if rng.gen_bool(0.5) {
                *seq.last_mut().expect("nonempty") = (0..n).map(PointSet::singleton).collect();
            }
            sequences.push((n, seq));
        }
    }

    let spaces: BTreeMap<usize, Arc<FiniteSpace>> = (1..=5).map(|n| (n, Arc::new(FiniteSpace::discrete(n)))).collect();
    let outcomes: Vec<Result<Option<bool>>> = sequences
        .par_iter()
        .map(|(n, covers)| {
            let seq = CoverSequence::from_sets(spaces[n].clone(), covers.clone())?;
            if !crate::topo::is_development(&seq) {
                return Ok(None);
            }
            Ok(Some(match developable_fn(&seq) {
                Ok(out) => verify_fn(&out.witness).ok && crate::topo::is_development(&out.maximal),
                Err(_) => false,
            }))
        })
        .collect();
    let mut t = Tally::default();
    let mut skipped = 0;
    for ((n, covers), outcome) in sequences.iter().zip(outcomes) {
        match outcome? {
            None => skipped += 1,
            Some(ok) => t.check(ok, || format!("{n} points, covers {covers:?}")),
        }
    }
    Ok(t.line(5, "developable FN construction", &format!("{skipped} generated sequences were not developments")))
}

/// Every open family with at most three members.
fn small_open_families(space: &Arc<FiniteSpace>) -> Vec<Vec<PointSet>> {
    let opens = space.opens();
    let n = opens.len();
    let mut out = vec![Vec::new()];
    for a in 0..n {
        out.push(vec![opens[a]]);
        for b in a + 1..n {
            out.push(vec![opens[a], opens[b]]);
            for c in b + 1..n {
                out.push(vec![opens[a], opens[b], opens[c]]);
            }
        }
    }
    out
}

fn quotient(max_points: usize) -> Result<Vec<CheckLine>> {
    let spaces = spaces_up_to(max_points)?;
    let parts: Vec<Result<(Tally, Tally, u64)>> = spaces
        .par_iter()
        .map(|s| {
            let mut identities = Tally::default();
            let mut consequences = Tally::default();
            let mut wcr_count = 0;
            for members in small_open_families(s) {
                let family = SetFamily::plain(s.clone(), members.clone())?;
                let describe = || format!("{} with P = {:?}", describe_space(s), members);
                let q = match build_quotient(s, &family) {
                    Ok(q) => {
                        identities.check(true, String::new);
                        q
                    }
                    Err(e) => {
                        identities.check(false, || format!("{}: {e}", describe()));
                        continue;
                    }
                };
                if is_wcr(s, &family, WcrOptions::default())?.holds {
                    wcr_count += 1;
                    let sep = separation_report(&q.quotient);
                    let ok = q.base_image.satisfies(Role::Base) && sep.t2 && sep.regular;
                    consequences.check(ok, describe);
                }
            }
            Ok((identities, consequences, wcr_count))
        })
        .collect();
    let mut identities = Tally::default();
    let mut consequences = Tally::default();
    let mut wcr_total = 0;
    for part in parts {
        let (a, b, c) = part?;
        identities = identities.merge(a);
        consequences = consequences.merge(b);
        wcr_total += c;
    }
    let families = identities.instances;
    Ok(vec![
        identities.line(6, "quotient map identities", ""),
        consequences.line(
            6,
            "wcr families give a T2 regular quotient with a base image",
            &format!("{wcr_total} of {families} families are wcr"),
        ),
    ])
}

fn game(max_points: usize) -> Result<Vec<CheckLine>> {
    let spaces = spaces_up_to(max_points)?;
    let parts: Vec<Result<(Tally, Tally, usize)>> = spaces
        .par_iter()
        .map(|s| {
            let base = SetFamily::all_opens(s.clone());
            let sigma = sigma_strategy(&trivial_fns(&base))?;
            let mut oracle = Tally::default();
            let out = exhaustive_win(s, &base, &sigma, base.len(), GAME_NODE_BUDGET)?;
            let needed = out.required_horizon().unwrap_or(0);
            oracle.check(out.wins_all && out.worst_line.validate().is_ok(), || describe_space(s));

            let mut plays = Tally::default();
            for kind in [AdversaryKind::FirstFit, AdversaryKind::MaxAvoider, AdversaryKind::Repeater] {
                let adversary = make_adversary(kind.clone(), &base);
                let first = play(s, &sigma, &adversary, base.len())?;
                let again = play(s, &sigma, &adversary, base.len())?;
                let covered = first.covered_by_round();
                let monotone = covered.windows(2).all(|w| w[0].is_subset(w[1]));
                let ok = first == again && first.dense && monotone && first.validate().is_ok();
                plays.check(ok, || format!("{} against {}", describe_space(s), kind.name()));
            }
            Ok((oracle, plays, needed))
        })
        .collect();
    let mut oracle = Tally::default();
    let mut plays = Tally::default();
    let mut max_needed = 0;
    for part in parts {
        let (a, b, needed) = part?;
        oracle = oracle.merge(a);
        plays = plays.merge(b);
        max_needed = max_needed.max(needed);
    }
    Ok(vec![
        oracle.line(9, "sigma wins every line at horizon |base|", &format!("max required horizon {max_needed}")),
        plays.line(9, "sigma against the adversary suite", ""),
    ])
}

fn lemmas(max_points: usize) -> Result<Vec<CheckLine>> {
    let mut lines = Vec::new();

    let report = lemma_harness_with(&LemmaOptions { seed: SWEEP_SEED, ..LemmaOptions::new(max_points) })?;
    let mut by_lemma: BTreeMap<&str, u64> = BTreeMap::new();
    for f in &report.failures {
        *by_lemma.entry(f.lemma.as_str()).or_default() += 1;
    }
    let detail = format!("f1 counterexample for a non-irreducible map found: {}", report.expected_failures_found);
    let mut t = Tally { instances: report.instances_checked, failures: report.failures.len() as u64, first: None };
    if let Some(f) = report.failures.first() {
        t.first = Some(format!("{} on map {:?}", f.lemma, f.map.image()));
    }
    if !report.expected_failures_found {
        t.failures += 1;
        t.first.get_or_insert_with(|| "no non-irreducible counterexample found".into());
    }
    lines.push(t.line(7, "small-image lemmas", &detail));

    let small = spaces_up_to(max_points.min(3))?;
    let parts: Vec<(Tally, Tally, u64)> = small
        .par_iter()
        .map(|x| {
            let mut kpv = Tally::default();
            let mut dopen = Tally::default();
            let mut non_onto = 0;
            let regular = separation_report(x).regular;
            let source_bases = all_bases(x);
            for y in &small {
                let target_bases = all_bases(y);
                for f in SpaceMap::all(x, y) {
                    let d = f.is_d_open();
                    if f.is_onto() {
                        for b in &target_bases {
                            let k = kpv_condition(&f, b).unwrap_or(!d);
                            kpv.check(k == d, || format!("map {:?} from {}", f.image(), describe_space(x)));
                        }
                    } else {
                        non_onto += target_bases.iter().filter(|b| kpv_condition(&f, b).ok() != Some(d)).count() as u64;
                    }
                    if regular && f.is_closed_map() {
                        for b in &source_bases {
                            let hyp = b.members().iter().all(|&u| {
                                let fu = f.image_of(u);
                                fu.is_subset(y.regular_part(fu).unwrap_or(PointSet::EMPTY))
                            });
                            if hyp {
                                dopen.check(f.is_open_map(), || format!("map {:?} from {}", f.image(), describe_space(x)));
                            }
                        }
                    }
                }
            }
            (kpv, dopen, non_onto)
        })
        .collect();
    let mut kpv = Tally::default();
    let mut dopen = Tally::default();
    let mut non_onto = 0;
    for (a, b, c) in parts {
        kpv = kpv.merge(a);
        dopen = dopen.merge(b);
        non_onto += c;
    }
    lines.push(kpv.line(
        11,
        "kpv condition agrees with d-open on onto maps, every target base",
        &format!("non-onto (map, base) pairs where they disagree: {non_onto}"),
    ));
    lines.push(dopen.line(11, "closed maps open under the d-open base condition", ""));

    lines.extend(transfers(max_points)?);
    Ok(lines)
}

/// π-bases of a space used for the transfer sweep: all nonempty opens and
/// the minimal nonempty opens, each with the trivial and a minimal witness.
fn prepared_witnesses(x: &Arc<FiniteSpace>) -> Vec<(SetFamily, FnsWitness)> {
    let all = SetFamily::nonempty_opens(x.clone());
    let minimal: Vec<PointSet> = all
        .members()
        .iter()
        .copied()
        .filter(|u| !all.members().iter().any(|v| v != u && v.is_subset(*u)))
        .collect();
    let mut bases = vec![all.clone()];
    if minimal.len() != all.len() {
        bases.push(SetFamily::new(x.clone(), minimal, Role::PiBase).expect("minimal opens form a pi-base"));
    }
    let mut out = Vec::new();
    for b in bases {
        out.push((b.clone(), trivial_fns(&b)));
        if let Ok(Some(found)) = search_fns_within(&b, b.len(), SEARCH_NODE_BUDGET) {
            out.push((b, found.witness));
        }
    }
    out
}

fn transfers(max_points: usize) -> Result<Vec<CheckLine>> {
    let spaces = spaces_up_to(max_points)?;
    let prepared: Vec<Vec<(SetFamily, FnsWitness)>> = spaces.par_iter().map(prepared_witnesses).collect();
    let index_of = |s: &Arc<FiniteSpace>| spaces.iter().position(|t| Arc::ptr_eq(t, s)).expect("listed space");

    let parts: Vec<(Tally, Tally, Tally)> = spaces
        .par_iter()
        .map(|z| {
            let irreducible: Vec<SpaceMap> = spaces
                .iter()
                .filter(|y| y.points() <= z.points())
                .flat_map(|y| SpaceMap::all(z, y))
                .filter(SpaceMap::is_irreducible)
                .collect();
            let mut transfer = Tally::default();
            let mut pullback = Tally::default();
            let mut reps = Tally::default();
            for g in &irreducible {
                let x = g.target();
                let mut last: Option<&SetFamily> = None;
                for (base_x, _) in &prepared[index_of(x)] {
                    if last.is_some_and(|l| l.members() == base_x.members()) {
                        continue;
                    }
                    last = Some(base_x);
                    let ok = crate::transfer::pullback_pi_base(g, base_x).is_ok();
                    pullback.check(ok, || format!("map {:?} from {}", g.image(), describe_space(z)));
                }
                for f in &irreducible {
                    let t = AbsoluteTriple::new(f.clone(), g.clone()).expect("both maps are irreducible");
                    for (base_x, s) in &prepared[index_of(x)] {
                        let describe = || format!("f {:?}, g {:?} from {}", f.image(), g.image(), describe_space(z));
                        transfer.check(transfer_witness(&t, base_x, s).is_ok(), describe);
                        if z.points() <= 3 {
                            let agree = representatives_agree(&t, base_x, s, 256).ok().flatten();
                            if let Some(agree) = agree {
                                reps.check(agree, describe);
                            }
                        }
                    }
                }
            }
            (transfer, pullback, reps)
        })
        .collect();
    let mut transfer = Tally::default();
    let mut pullback = Tally::default();
    let mut reps = Tally::default();
    for (a, b, c) in parts {
        transfer = transfer.merge(a);
        pullback = pullback.merge(b);
        reps = reps.merge(c);
    }
    Ok(vec![
        transfer.line(8, "witness transfer along co-absolute triples", ""),
        pullback.line(8, "pi-base pullback along irreducible maps", ""),
        reps.line(8, "transfer verdict independent of representatives", "triples with at most 3 points"),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweeps_pass_at_two_points() {
        for kind in [SweepKind::Witness, SweepKind::Quotient, SweepKind::Game, SweepKind::Lemmas] {
            let r = run_sweep(kind, 2, 2).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn cover_enumeration() {
        assert_eq!(covers_of(1).len(), 1);
        assert_eq!(covers_of(2).len(), 5);
    }

    #[test]
    fn guards() {
        assert!(run_sweep(SweepKind::Game, 5, 1).is_err());
        assert!(run_sweep(SweepKind::Lemmas, 5, 1).is_err());
        assert_eq!(SweepKind::parse("game"), Some(SweepKind::Game));
        assert_eq!(SweepKind::parse("everything"), None);
    }
}
