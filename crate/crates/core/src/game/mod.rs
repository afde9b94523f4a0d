//! The open-open game: Player I offers finite families of nonempty open
//! sets, Player II answers with open sets hitting every offered set, and I
//! wins once the union of II's sets is dense.

mod oracle;
mod strategy;

pub use oracle::{exhaustive_win, OracleOutcome};
pub use strategy::{
    is_legal_reply, make_adversary, sigma_strategy, AdversaryKind, ConstantStrategy, SigmaStrategy, StrategyI,
    StrategyII,
};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::topo::{FiniteSpace, PointSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub offer: Vec<PointSet>,
    pub reply: Vec<PointSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTranscript {
    pub space: Arc<FiniteSpace>,
    pub rounds: Vec<Round>,
    pub dense: bool,
    /// Density was reached before the horizon.
    pub early_stop: bool,
}

impl GameTranscript {
    /// Points covered by II after each round.
    pub fn covered_by_round(&self) -> Vec<PointSet> {
        let mut acc = PointSet::EMPTY;
        self.rounds
            .iter()
            .map(|r| {
                acc = acc | PointSet::union_all(r.reply.iter().copied());
                acc
            })
            .collect()
    }

    /// Rechecks legality of every round and the recorded density flag.
    pub fn validate(&self) -> Result<()> {
        for (n, r) in self.rounds.iter().enumerate() {
            check_round(&self.space, n, r)?;
        }
        let covered = self.covered_by_round().last().copied().unwrap_or(PointSet::EMPTY);
        if is_dense(&self.space, covered) != self.dense {
            return Err(Error::Postcondition("recorded density flag is wrong".into()));
        }
        Ok(())
    }
}

pub(crate) fn is_dense(space: &FiniteSpace, covered: PointSet) -> bool {
    space.closure_of(covered) == space.full()
}

fn check_family(space: &FiniteSpace, round: usize, who: &str, family: &[PointSet]) -> Result<()> {
    for &u in family {
        if u.is_empty() || !u.fits(space.points()) || !space.is_open(u) {
            return Err(Error::IllegalMove { round, reason: format!("{who} played {u}, not a nonempty open set") });
        }
    }
    Ok(())
}

fn check_round(space: &FiniteSpace, round: usize, r: &Round) -> Result<()> {
    check_family(space, round, "player I", &r.offer)?;
    check_family(space, round, "player II", &r.reply)?;
    if let Some(u) = r.offer.iter().find(|u| !r.reply.iter().any(|v| v.is_subset(**u))) {
        return Err(Error::IllegalMove { round, reason: format!("no reply set inside {u}") });
    }
    Ok(())
}

/// Plays up to `horizon` rounds, stopping as soon as II's sets are dense.
pub fn play(space: &Arc<FiniteSpace>, one: &dyn StrategyI, two: &StrategyII, horizon: usize) -> Result<GameTranscript> {
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    let mut rounds: Vec<Round> = Vec::new();
    let mut replies: Vec<Vec<PointSet>> = Vec::new();
    let mut covered = PointSet::EMPTY;
    let mut dense = is_dense(space, covered);
    for n in 0..horizon {
        let offer = one.offer(&replies);
        let reply = two.reply(&rounds, &offer)?;
        let round = Round { offer, reply };
        check_round(space, n, &round)?;
        covered = covered | PointSet::union_all(round.reply.iter().copied());
        replies.push(round.reply.clone());
        rounds.push(round);
        dense = is_dense(space, covered);
        if dense {
            break;
        }
    }
    let early_stop = dense && rounds.len() < horizon;
    Ok(GameTranscript { space: space.clone(), rounds, dense, early_stop })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set;
    use crate::topo::{Role, SetFamily};
    use crate::witness::trivial_fns;

    fn d2_base() -> SetFamily {
        let sp = Arc::new(FiniteSpace::discrete(2));
        SetFamily::new(sp, vec![set![0], set![1], set![0, 1]], Role::Base).unwrap()
    }

    #[test]
    fn sigma_beats_first_fit_on_d2() {
        let base = d2_base();
        let sigma = sigma_strategy(&trivial_fns(&base)).unwrap();
        let ff = make_adversary(AdversaryKind::FirstFit, &base);
        let t = play(base.space(), &sigma, &ff, 4).unwrap();
        assert!(t.dense && t.early_stop);
        assert_eq!(t.rounds.len(), 2);
        assert_eq!(t.rounds[0].offer, vec![set![0]]);
        assert_eq!(t.rounds[0].reply, vec![set![0]]);
        t.validate().unwrap();
    }

    #[test]
    fn one_point_space_is_dense_after_one_round() {
        let sp = Arc::new(FiniteSpace::discrete(1));
        let base = SetFamily::all_opens(sp.clone());
        let sigma = sigma_strategy(&trivial_fns(&base)).unwrap();
        let t = play(&sp, &sigma, &make_adversary(AdversaryKind::Repeater, &base), 1).unwrap();
        assert_eq!(t.rounds.len(), 1);
        assert_eq!(t.rounds[0].offer, vec![sp.full()]);
        assert!(t.dense && !t.early_stop);
    }

    #[test]
    fn repeater_on_d3_loses_within_three_rounds() {
        let sp = Arc::new(FiniteSpace::discrete(3));
        let base = SetFamily::all_opens(sp.clone());
        let sigma = sigma_strategy(&trivial_fns(&base)).unwrap();
        let t = play(&sp, &sigma, &make_adversary(AdversaryKind::Repeater, &base), 8).unwrap();
        assert!(t.dense);
        assert!(t.rounds.len() <= 3);
    }

    #[test]
    fn illegal_script_is_reported_at_its_round() {
        let base = d2_base();
        let sigma = sigma_strategy(&trivial_fns(&base)).unwrap();
        let script = AdversaryKind::Scripted(vec![vec![set![0]], vec![set![0]]]);
        let err = play(base.space(), &sigma, &make_adversary(script, &base), 4).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { round: 1, .. }));

        let short = AdversaryKind::Scripted(vec![vec![set![0]]]);
        let err = play(base.space(), &sigma, &make_adversary(short, &base), 4).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { round: 1, .. }));
    }

    #[test]
    fn zero_horizon_is_rejected() {
        let base = d2_base();
        let sigma = sigma_strategy(&trivial_fns(&base)).unwrap();
        let ff = make_adversary(AdversaryKind::FirstFit, &base);
        assert!(matches!(play(base.space(), &sigma, &ff, 0), Err(Error::Precondition(_))));
    }
}
