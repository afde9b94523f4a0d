//! Small images along irreducible maps, π-base pullback and the transfer of
//! FNS witnesses between co-absolute spaces, plus an exhaustive harness for
//! the small-image lemmas.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::topo::{same_space, FiniteSpace, PointSet, Role, SetFamily, SpaceMap};
use crate::witness::{verify_fns, FnsWitness};
use crate::workbench::enumerate_topologies;

/// Names the first defining property of an irreducible map that `f` lacks.
fn irreducibility_gap(f: &SpaceMap) -> Option<&'static str> {
    if !f.is_onto() {
        Some("not onto")
    } else if !f.is_continuous() {
        Some("not continuous")
    } else if !f.is_closed_map() {
        Some("not closed")
    } else if !f.is_irreducible() {
        Some("a proper closed subset maps onto the target")
    } else {
        None
    }
}

fn require_irreducible(name: &str, f: &SpaceMap) -> Result<()> {
    match irreducibility_gap(f) {
        Some(why) => Err(Error::Precondition(format!("{name} is not irreducible: {why}"))),
        None => Ok(()),
    }
}

/// Irreducible onto maps `f: Z → Y` and `g: Z → X` from a common source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsoluteTriple {
    f: SpaceMap,
    g: SpaceMap,
}

impl AbsoluteTriple {
    pub fn new(f: SpaceMap, g: SpaceMap) -> Result<Self> {
        if !same_space(f.source(), g.source()) {
            return Err(Error::SpaceMismatch);
        }
        require_irreducible("f", &f)?;
        require_irreducible("g", &g)?;
        Ok(AbsoluteTriple { f, g })
    }

    pub fn identity(space: Arc<FiniteSpace>) -> Self {
        let id = SpaceMap::identity(space);
        AbsoluteTriple { f: id.clone(), g: id }
    }

    pub fn z(&self) -> &Arc<FiniteSpace> {
        self.f.source()
    }

    pub fn y(&self) -> &Arc<FiniteSpace> {
        self.f.target()
    }

    pub fn x(&self) -> &Arc<FiniteSpace> {
        self.g.target()
    }

    pub fn f(&self) -> &SpaceMap {
        &self.f
    }

    pub fn g(&self) -> &SpaceMap {
        &self.g
    }
}

/// `{f⁻¹(B) : B ∈ base_x}` for an irreducible `f: Z → X`; a π-base of `Z`.
pub fn pullback_pi_base(f: &SpaceMap, base_x: &SetFamily) -> Result<SetFamily> {
    require_irreducible("f", f)?;
    if !same_space(f.target(), base_x.space()) {
        return Err(Error::SpaceMismatch);
    }
    if !base_x.satisfies(Role::PiBase) {
        return Err(Error::Precondition("family is not a pi-base of the target".into()));
    }
    let members = base_x.members().iter().map(|&b| f.preimage(b)).collect();
    SetFamily::new(f.source().clone(), members, Role::PiBase)
        .map_err(|e| Error::Postcondition(format!("pulled back family is not a pi-base: {e}")))
}

#[derive(Clone, Debug)]
pub struct Transferred {
    /// Distinct sets `f#(g⁻¹(V))` in order of first appearance.
    pub family_y: SetFamily,
    /// For each member of `base_x`, the index of its image in `family_y`.
    pub class_of: Vec<usize>,
    /// For each member of `family_y`, the `base_x` index it was built from.
    pub representative: Vec<usize>,
    pub s_z: FnsWitness,
}

fn check_transfer_inputs(t: &AbsoluteTriple, base_x: &SetFamily, s: &FnsWitness) -> Result<()> {
    if !same_space(t.x(), base_x.space()) || !same_space(s.family().space(), base_x.space()) {
        return Err(Error::SpaceMismatch);
    }
    if s.family().members() != base_x.members() {
        return Err(Error::Precondition("witness is not defined on the given pi-base".into()));
    }
    if !base_x.satisfies(Role::PiBase) {
        return Err(Error::Precondition("family is not a pi-base of X".into()));
    }
    if let Some((a, b)) = verify_fns(s).counterexample {
        return Err(Error::WitnessRejected(a, b));
    }
    Ok(())
}

fn classes(t: &AbsoluteTriple, base_x: &SetFamily) -> (Vec<PointSet>, Vec<usize>, Vec<usize>) {
    let mut members: Vec<PointSet> = Vec::new();
    let mut class_of = Vec::with_capacity(base_x.len());
    let mut representative = Vec::new();
    for (i, &v) in base_x.members().iter().enumerate() {
        let img = t.f.small_image_of(t.g.preimage(v));
        match members.iter().position(|&m| m == img) {
            Some(c) => class_of.push(c),
            None => {
                class_of.push(members.len());
                members.push(img);
                representative.push(i);
            }
        }
    }
    (members, class_of, representative)
}

fn witness_for(family_y: &SetFamily, class_of: &[usize], reps: &[usize], s: &FnsWitness) -> Result<FnsWitness> {
    let images = reps
        .iter()
        .map(|&r| {
            let mut img: Vec<usize> = s.image(r).iter().map(|&w| class_of[w]).collect();
            img.sort_unstable();
            img.dedup();
            img
        })
        .collect();
    FnsWitness::new(family_y.clone(), images)
}

/// Moves an FNS witness on a π-base of `X` to the π-base
/// `{f#(g⁻¹(V))}` of `Y`: `s_Z(f#g⁻¹(U)) = {f#g⁻¹(W) : W ∈ s(U)}`.
/// Members of `base_x` with the same image are represented by the first one.
pub fn transfer_witness(t: &AbsoluteTriple, base_x: &SetFamily, s: &FnsWitness) -> Result<Transferred> {
    check_transfer_inputs(t, base_x, s)?;
    let (members, class_of, representative) = classes(t, base_x);
    let family_y = SetFamily::new(t.y().clone(), members, Role::PiBase)
        .map_err(|e| Error::Postcondition(format!("transferred family is not a pi-base of Y: {e}")))?;
    let s_z = witness_for(&family_y, &class_of, &representative, s)?;
    if let Some((a, b)) = verify_fns(&s_z).counterexample {
        return Err(Error::Postcondition(format!("transferred witness fails on pair ({a}, {b})")));
    }
    Ok(Transferred { family_y, class_of, representative, s_z })
}

/// Tries every choice of representatives and reports whether the
/// transferred witness verifies for all of them. `None` when there are more
/// than `cap` choices.
pub fn representatives_agree(t: &AbsoluteTriple, base_x: &SetFamily, s: &FnsWitness, cap: usize) -> Result<Option<bool>> {
    let out = transfer_witness(t, base_x, s)?;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); out.family_y.len()];
    for (i, &c) in out.class_of.iter().enumerate() {
        groups[c].push(i);
    }
    let total = groups.iter().try_fold(1usize, |acc, g| acc.checked_mul(g.len()).filter(|&p| p <= cap));
    let Some(total) = total else { return Ok(None) };
    for mut code in 0..total {
        let reps: Vec<usize> = groups
            .iter()
            .map(|g| {
                let r = g[code % g.len()];
                code /= g.len();
                r
            })
            .collect();
        let w = witness_for(&out.family_y, &out.class_of, &reps, s)?;
        if !verify_fns(&w).ok {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

/// One lemma instance that went the wrong way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaFailure {
    /// `frd`, `f2` or `f1`.
    pub lemma: String,
    pub map: SpaceMap,
    pub sets: Vec<PointSet>,
}

impl LemmaFailure {
    /// Re-evaluates the instance; true when it still fails.
    pub fn recheck(&self) -> bool {
        let f = &self.map;
        match (self.lemma.as_str(), self.sets.as_slice()) {
            ("frd", &[u]) => f.small_image_of(u) != f.small_image_by_fibres(u),
            ("f2", &[u]) => !f.small_image_of(u).is_subset(f.image_of(u)),
            ("f1", &[u, v]) => u.is_disjoint(v) != f.small_image_of(u).is_disjoint(f.small_image_of(v)),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    /// Maps examined.
    pub instances_checked: u64,
    pub failures: Vec<LemmaFailure>,
    /// Whether a non-irreducible onto map was found where intersecting opens
    /// have disjoint small images.
    pub expected_failures_found: bool,
    pub counterexample: Option<LemmaFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaOptions {
    pub max_points: usize,
    /// Number of topology pairs sampled among those involving a space on
    /// four points. Smaller spaces are always covered exhaustively.
    pub sample_at_four: usize,
    pub seed: u64,
}

impl LemmaOptions {
    pub fn new(max_points: usize) -> Self {
        LemmaOptions { max_points, sample_at_four: 200, seed: 0 }
    }
}

pub fn lemma_harness(max_points: usize) -> Result<LemmaReport> {
    lemma_harness_with(&LemmaOptions::new(max_points))
}

pub fn lemma_harness_with(opts: &LemmaOptions) -> Result<LemmaReport> {
    if opts.max_points > 4 {
        return Err(Error::TooManyPoints { points: opts.max_points, max: 4 });
    }
    let mut spaces: Vec<Arc<FiniteSpace>> = Vec::new();
    for n in 1..=opts.max_points {
        spaces.extend(enumerate_topologies(n)?.into_iter().map(Arc::new));
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    for x in &spaces {
        for y in &spaces {
            if x.points() == 4 || y.points() == 4 {
                large.push((x.clone(), y.clone()));
            } else {
                small.push((x.clone(), y.clone()));
            }
        }
    }
    if large.len() > opts.sample_at_four {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        large = large.choose_multiple(&mut rng, opts.sample_at_four).cloned().collect();
    }
    small.extend(large);

    let shards: Vec<LemmaReport> = small.par_iter().map(|(x, y)| check_pair(x, y)).collect();
    let mut report = LemmaReport { instances_checked: 0, failures: Vec::new(), expected_failures_found: false, counterexample: None };
    for shard in shards {
        report.instances_checked += shard.instances_checked;
        report.failures.extend(shard.failures);
        if report.counterexample.is_none() {
            report.counterexample = shard.counterexample;
        }
    }
    report.expected_failures_found = report.counterexample.is_some();
    Ok(report)
}

fn check_pair(x: &Arc<FiniteSpace>, y: &Arc<FiniteSpace>) -> LemmaReport {
    let mut failures = Vec::new();
    let mut counterexample = None;
    let maps = SpaceMap::all(x, y);
    let subsets: Vec<PointSet> = (0..1u64 << x.points()).map(PointSet::from_bits).collect();
    for f in &maps {
        let onto = f.is_onto();
        for &u in &subsets {
            if f.small_image_of(u) != f.small_image_by_fibres(u) {
                failures.push(LemmaFailure { lemma: "frd".into(), map: f.clone(), sets: vec![u] });
            }
            if onto && !f.small_image_of(u).is_subset(f.image_of(u)) {
                failures.push(LemmaFailure { lemma: "f2".into(), map: f.clone(), sets: vec![u] });
            }
        }
        if !onto {
            continue;
        }
        let irreducible = f.is_irreducible();
        for &u in x.opens() {
            for &v in x.opens() {
                let small_disjoint = f.small_image_of(u).is_disjoint(f.small_image_of(v));
                if u.is_disjoint(v) == small_disjoint {
                    continue;
                }
                let failure = LemmaFailure { lemma: "f1".into(), map: f.clone(), sets: vec![u, v] };
                if irreducible {
                    failures.push(failure);
                } else if counterexample.is_none() && !u.is_disjoint(v) {
                    counterexample = Some(failure);
                }
            }
        }
    }
    LemmaReport {
        instances_checked: maps.len() as u64,
        failures,
        expected_failures_found: counterexample.is_some(),
        counterexample,
    }
}
