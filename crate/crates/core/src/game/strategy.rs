use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::Round;
use crate::topo::{FiniteSpace, PointSet, SetFamily};
use crate::witness::{verify_fns, FnsWitness};

/// Player I: maps the replies so far to the next finite family of nonempty
/// open sets. An empty history asks for the opening move.
pub trait StrategyI {
    fn offer(&self, replies: &[Vec<PointSet>]) -> Vec<PointSet>;

    /// True when the offer depends only on the set of sets played so far,
    /// which lets the exhaustive oracle merge transpositions.
    fn depends_only_on_played(&self) -> bool {
        false
    }
}

/// The strategy built from an FNS witness on a (π-)base.
///
/// After replies `D_0..D_n`, `A_n` is the union of `s(W)` over every base
/// member `W` played so far. For every subfamily `R ⊆ A_n` with nonempty
/// intersection the offer contains the canonically first nonempty base
/// member inside `⋂R`. Only the distinct intersections matter, so those are
/// enumerated instead of the subfamilies. The empty subfamily (intersection
/// `X`) yields the opening set `U_0`.
#[derive(Clone, Debug)]
pub struct SigmaStrategy {
    space: Arc<FiniteSpace>,
    /// Nonempty base members in canonical order.
    ordered: Vec<PointSet>,
    images: HashMap<PointSet, Vec<PointSet>>,
}

impl SigmaStrategy {
    pub fn new(witness: &FnsWitness) -> Result<Self> {
        let verdict = verify_fns(witness);
        if let Some((a, b)) = verdict.counterexample {
            return Err(Error::WitnessRejected(a, b));
        }
        let base = witness.family();
        let m = base.members();
        let mut ordered: Vec<PointSet> = m.iter().copied().filter(|s| !s.is_empty()).collect();
        ordered.sort();
        let space = base.space();
        if let Some(u) = space.nonempty_opens().find(|u| !ordered.iter().any(|b| b.is_subset(*u))) {
            return Err(Error::Precondition(format!("family is not a pi-base: nothing inside {u}")));
        }
        let images = m
            .iter()
            .enumerate()
            .map(|(i, &u)| (u, witness.image(i).iter().map(|&j| m[j]).collect()))
            .collect();
        Ok(SigmaStrategy { space: base.space().clone(), ordered, images })
    }

    fn first_inside(&self, t: PointSet) -> Option<PointSet> {
        self.ordered.iter().copied().find(|b| b.is_subset(t))
    }

    /// The offer for a given set of played sets.
    pub fn offer_for(&self, played: &BTreeSet<PointSet>) -> Vec<PointSet> {
        let pool: BTreeSet<PointSet> = played
            .iter()
            .filter_map(|w| self.images.get(w))
            .flatten()
            .copied()
            .collect();
        let mut meets: BTreeSet<PointSet> = BTreeSet::from([self.space.full()]);
        for &a in &pool {
            let new: Vec<PointSet> = meets.iter().map(|&t| t & a).collect();
            meets.extend(new);
        }
        let offer: BTreeSet<PointSet> = meets
            .into_iter()
            .filter(|t| !t.is_empty())
            .filter_map(|t| self.first_inside(t))
            .collect();
        offer.into_iter().collect()
    }
}

impl StrategyI for SigmaStrategy {
    fn offer(&self, replies: &[Vec<PointSet>]) -> Vec<PointSet> {
        if replies.is_empty() {
            return self.ordered.first().map(|&u| vec![u]).unwrap_or_default();
        }
        let played = replies.iter().flatten().copied().collect();
        self.offer_for(&played)
    }

    fn depends_only_on_played(&self) -> bool {
        true
    }
}

/// Offers the same family every round.
#[derive(Clone, Debug)]
pub struct ConstantStrategy(pub Vec<PointSet>);

impl StrategyI for ConstantStrategy {
    fn offer(&self, _: &[Vec<PointSet>]) -> Vec<PointSet> {
        self.0.clone()
    }

    fn depends_only_on_played(&self) -> bool {
        true
    }
}

pub fn sigma_strategy(witness: &FnsWitness) -> Result<SigmaStrategy> {
    SigmaStrategy::new(witness)
}

/// Which Player II behaviour to use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdversaryKind {
    /// For each offered set, the canonically first base member inside it.
    FirstFit,
    /// For each offered set, the base member inside it that adds the fewest
    /// new points to everything covered so far.
    MaxAvoider,
    /// Repeats the previous reply while it stays legal, else first fit.
    Repeater,
    /// Replays a fixed list of replies.
    Scripted(Vec<Vec<PointSet>>),
}

impl AdversaryKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "first_fit" | "first-fit" => Ok(AdversaryKind::FirstFit),
            "max_avoider" | "max-avoider" => Ok(AdversaryKind::MaxAvoider),
            "repeater" => Ok(AdversaryKind::Repeater),
            other => Err(Error::UnknownAdversary(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AdversaryKind::FirstFit => "first_fit",
            AdversaryKind::MaxAvoider => "max_avoider",
            AdversaryKind::Repeater => "repeater",
            AdversaryKind::Scripted(_) => "scripted",
        }
    }
}

/// A Player II strategy drawing its replies from base members.
#[derive(Clone, Debug)]
pub struct StrategyII {
    kind: AdversaryKind,
    /// Nonempty base members in canonical order.
    moves: Vec<PointSet>,
}

pub fn make_adversary(kind: AdversaryKind, base: &SetFamily) -> StrategyII {
    let mut moves: Vec<PointSet> = base.members().iter().copied().filter(|s| !s.is_empty()).collect();
    moves.sort();
    StrategyII { kind, moves }
}

impl StrategyII {
    pub fn kind(&self) -> &AdversaryKind {
        &self.kind
    }

    /// Reply to `offer` after `history`. Scripted replies are returned as
    /// given; legality is checked by the caller.
    pub fn reply(&self, history: &[Round], offer: &[PointSet]) -> Result<Vec<PointSet>> {
        let round = history.len();
        match &self.kind {
            AdversaryKind::FirstFit => self.first_fit(round, offer),
            AdversaryKind::MaxAvoider => {
                let mut covered = PointSet::union_all(history.iter().flat_map(|r| r.reply.iter().copied()));
                let mut out = BTreeSet::new();
                for &u in offer {
                    let best = self
                        .moves
                        .iter()
                        .copied()
                        .filter(|m| m.is_subset(u))
                        .min_by_key(|m| ((*m - covered).len(), *m))
                        .ok_or_else(|| no_move(round, u))?;
                    covered = covered | best;
                    out.insert(best);
                }
                Ok(out.into_iter().collect())
            }
            AdversaryKind::Repeater => match history.last() {
                Some(prev) if is_legal_reply(offer, &prev.reply) => Ok(prev.reply.clone()),
                _ => self.first_fit(round, offer),
            },
            AdversaryKind::Scripted(script) => script.get(round).cloned().ok_or_else(|| Error::IllegalMove {
                round,
                reason: "script has no reply for this round".into(),
            }),
        }
    }

    fn first_fit(&self, round: usize, offer: &[PointSet]) -> Result<Vec<PointSet>> {
        let mut out = BTreeSet::new();
        for &u in offer {
            let m = self.moves.iter().copied().find(|m| m.is_subset(u)).ok_or_else(|| no_move(round, u))?;
            out.insert(m);
        }
        Ok(out.into_iter().collect())
    }
}

fn no_move(round: usize, u: PointSet) -> Error {
    Error::IllegalMove { round, reason: format!("no base member fits inside {u}") }
}

/// Every offered set contains some member of the reply.
pub fn is_legal_reply(offer: &[PointSet], reply: &[PointSet]) -> bool {
    offer.iter().all(|u| reply.iter().any(|v| v.is_subset(*u)))
}
