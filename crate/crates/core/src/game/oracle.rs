use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{is_dense, GameTranscript, Round, StrategyI};
use crate::topo::{FiniteSpace, PointSet, SetFamily};

/// Largest number of nonempty base members the oracle will branch over.
const MAX_MOVES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutcome {
    pub wins_all: bool,
    /// A line II survives if there is one, otherwise a longest line.
    pub worst_line: GameTranscript,
    /// Game-tree nodes expanded.
    pub nodes: u64,
}

impl OracleOutcome {
    /// Rounds needed to win against every reply sequence, when I wins.
    pub fn required_horizon(&self) -> Option<usize> {
        self.wins_all.then_some(self.worst_line.rounds.len())
    }
}

/// The worst continuation from a node: a losing line beats any winning
/// line, and among winning lines the longer one is worse for I.
#[derive(Clone, Debug)]
struct Line {
    lost: bool,
    rounds: Vec<Round>,
}

impl Line {
    fn worse_than(&self, other: &Line) -> bool {
        (self.lost, self.rounds.len()) > (other.lost, other.rounds.len())
    }
}

struct Search<'a> {
    space: &'a FiniteSpace,
    one: &'a dyn StrategyI,
    moves: Vec<PointSet>,
    horizon: usize,
    budget: u64,
    counter: &'a AtomicU64,
    memo: HashMap<(u64, usize), Line>,
}

impl Search<'_> {
    fn tick(&self) -> Result<()> {
        if self.counter.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        Ok(())
    }

    fn covered(&self, played: u64) -> PointSet {
        PointSet::union_all(self.moves.iter().enumerate().filter(|(i, _)| played >> i & 1 == 1).map(|(_, &m)| m))
    }

    fn decode(&self, mask: u64) -> Vec<PointSet> {
        (0..self.moves.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.moves[i]).collect()
    }

    /// All reply masks legal against `offer`, in increasing order.
    fn legal_replies(&self, offer: &[PointSet]) -> Result<Vec<u64>> {
        let mut needs = Vec::with_capacity(offer.len());
        for &u in offer {
            if u.is_empty() || !u.fits(self.space.points()) || !self.space.is_open(u) {
                return Err(Error::IllegalMove { round: 0, reason: format!("player I offered {u}") });
            }
            let cand = self
                .moves
                .iter()
                .enumerate()
                .filter(|(_, m)| m.is_subset(u))
                .fold(0u64, |acc, (i, _)| acc | 1 << i);
            if cand == 0 {
                return Err(Error::IllegalMove { round: 0, reason: format!("no base member inside {u}") });
            }
            needs.push(cand);
        }
        let all = 1u64 << self.moves.len();
        Ok((0..all).filter(|d| needs.iter().all(|c| c & d != 0)).collect())
    }

    /// Worst line from a position after `history`, with `played` the mask of
    /// base members played so far.
    fn worst(&mut self, history: &mut Vec<Vec<PointSet>>, played: u64) -> Result<Line> {
        let depth = history.len();
        if is_dense(self.space, self.covered(played)) {
            return Ok(Line { lost: false, rounds: Vec::new() });
        }
        if depth == self.horizon {
            return Ok(Line { lost: true, rounds: Vec::new() });
        }
        let markov = self.one.depends_only_on_played();
        if markov {
            if let Some(hit) = self.memo.get(&(played, depth)) {
                return Ok(hit.clone());
            }
        }
        self.tick()?;
        let offer = self.one.offer(history);
        let replies = self.legal_replies(&offer).map_err(|e| at_round(e, depth))?;
        let mut best: Option<(u64, Line)> = None;
        let mut seen = Vec::new();
        for d in replies {
            let next = played | d;
            // For a Markov strategy only the new state matters, so replies
            // leading to the same state are equivalent.
            if markov {
                if seen.contains(&next) {
                    continue;
                }
                seen.push(next);
            }
            history.push(self.decode(d));
            let sub = self.worst(history, next);
            history.pop();
            let sub = sub?;
            if best.as_ref().is_none_or(|(_, b)| sub.worse_than(b)) {
                best = Some((d, sub));
            }
        }
        let (d, sub) = best.expect("a legal reply always exists");
        let mut rounds = Vec::with_capacity(sub.rounds.len() + 1);
        rounds.push(Round { offer, reply: self.decode(d) });
        rounds.extend(sub.rounds);
        let line = Line { lost: sub.lost, rounds };
        if markov {
            self.memo.insert((played, depth), line.clone());
        }
        Ok(line)
    }
}

fn at_round(e: Error, round: usize) -> Error {
    match e {
        Error::IllegalMove { reason, .. } => Error::IllegalMove { round, reason },
        other => other,
    }
}

/// Enumerates every legal sequence of II replies drawn from the nonempty
/// members of `base`, up to `horizon` rounds, and reports whether I reaches
/// density on all of them.
///
/// First-move branches are searched in parallel; `budget` bounds the total
/// number of expanded nodes and exceeding it is an error.
pub fn exhaustive_win(
    space: &Arc<FiniteSpace>,
    base: &SetFamily,
    one: &(dyn StrategyI + Sync),
    horizon: usize,
    budget: u64,
) -> Result<OracleOutcome> {
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    if !crate::topo::same_space(base.space(), space) {
        return Err(Error::SpaceMismatch);
    }
    let mut moves: Vec<PointSet> = base.members().iter().copied().filter(|s| !s.is_empty()).collect();
    moves.sort();
    if moves.len() > MAX_MOVES {
        return Err(Error::BudgetExceeded { budget });
    }
    let counter = AtomicU64::new(0);
    let new_search = || Search {
        space,
        one,
        moves: moves.clone(),
        horizon,
        budget,
        counter: &counter,
        memo: HashMap::new(),
    };

    let root = new_search();
    let finish = |line: Line, counter: &AtomicU64| OracleOutcome {
        wins_all: !line.lost,
        worst_line: GameTranscript {
            space: space.clone(),
            dense: !line.lost,
            early_stop: !line.lost && line.rounds.len() < horizon,
            rounds: line.rounds,
        },
        nodes: counter.load(Ordering::Relaxed),
    };
    if is_dense(space, PointSet::EMPTY) {
        return Ok(finish(Line { lost: false, rounds: Vec::new() }, &counter));
    }
    root.tick()?;
    let offer = one.offer(&[]);
    let replies = root.legal_replies(&offer)?;

    let branches: Vec<Result<Line>> = replies
        .par_iter()
        .map(|&d| {
            let mut search = new_search();
            let mut history = vec![search.decode(d)];
            search.worst(&mut history, d)
        })
        .collect();
    let mut best: Option<(u64, Line)> = None;
    for (&d, sub) in replies.iter().zip(branches) {
        let sub = sub?;
        if best.as_ref().is_none_or(|(_, b)| sub.worse_than(b)) {
            best = Some((d, sub));
        }
    }
    let (d, sub) = best.expect("a legal reply always exists");
    let mut rounds = vec![Round { offer, reply: root.decode(d) }];
    rounds.extend(sub.rounds);
    Ok(finish(Line { lost: sub.lost, rounds }, &counter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{sigma_strategy, ConstantStrategy};
    use crate::set;
    use crate::topo::Role;
    use crate::witness::trivial_fns;

    fn d2_base() -> SetFamily {
        let sp = Arc::new(FiniteSpace::discrete(2));
        SetFamily::new(sp, vec![set![0], set![1], set![0, 1]], Role::Base).unwrap()
    }

    #[test]
    fn sigma_wins_on_d2() {
        let base = d2_base();
        let sigma = sigma_strategy(&trivial_fns(&base)).unwrap();
        let out = exhaustive_win(base.space(), &base, &sigma, 3, 10_000).unwrap();
        assert!(out.wins_all);
        assert_eq!(out.required_horizon(), Some(2));
        out.worst_line.validate().unwrap();
    }

    #[test]
    fn constant_singleton_loses_on_d2() {
        let base = d2_base();
        let out = exhaustive_win(base.space(), &base, &ConstantStrategy(vec![set![0]]), 5, 10_000).unwrap();
        assert!(!out.wins_all);
        assert_eq!(out.worst_line.rounds.len(), 5);
        assert!(out.worst_line.rounds.iter().all(|r| r.reply == vec![set![0]]));
        assert!(!out.worst_line.dense);
    }

    #[test]
    fn constant_full_set_wins_on_sierpinski() {
        let sp = Arc::new(FiniteSpace::sierpinski());
        let base = SetFamily::all_opens(sp.clone());
        for h in 1..4 {
            let out = exhaustive_win(&sp, &base, &ConstantStrategy(vec![sp.full()]), h, 1_000).unwrap();
            assert!(out.wins_all);
            assert_eq!(out.required_horizon(), Some(1));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let sp = Arc::new(FiniteSpace::discrete(3));
        let base = SetFamily::all_opens(sp.clone());
        let sigma = sigma_strategy(&trivial_fns(&base)).unwrap();
        assert_eq!(exhaustive_win(&sp, &base, &sigma, 8, 3), Err(Error::BudgetExceeded { budget: 3 }));
        assert!(exhaustive_win(&sp, &base, &sigma, 8, 1_000_000).unwrap().wins_all);
    }
}
