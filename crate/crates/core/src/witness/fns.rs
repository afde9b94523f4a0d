use crate::error::{Error, Result};
use crate::topo::{PointSet, SetFamily};
use crate::witness::WitnessVerdict;

/// An operator `s` from a family to finite subfamilies, stored as sorted
/// member-index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnsWitness {
    family: SetFamily,
    images: Vec<Vec<usize>>,
}

impl FnsWitness {
    /// Sorts each image; rejects out-of-range and repeated indices.
    pub fn new(family: SetFamily, mut images: Vec<Vec<usize>>) -> Result<Self> {
        if images.len() != family.len() {
            return Err(Error::MalformedWitness(format!(
                "{} images for a family of {} members",
                images.len(),
                family.len()
            )));
        }
        for (i, img) in images.iter_mut().enumerate() {
            img.sort_unstable();
            if let Some(&bad) = img.iter().find(|&&j| j >= family.len()) {
                return Err(Error::MalformedWitness(format!("s({i}) mentions member {bad}")));
            }
            if img.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedWitness(format!("s({i}) repeats a member")));
            }
        }
        Ok(FnsWitness { family, images })
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &[usize] {
        &self.images[i]
    }

    /// Largest `|s(U)|`.
    pub fn bound(&self) -> usize {
        self.images.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Whether members `i` and `j` are either intersecting or separated by
    /// disjoint supersets drawn from `s(i) ∩ s(j)`.
    pub fn separates(&self, i: usize, j: usize) -> bool {
        let m = self.family.members();
        let (u, v) = (m[i], m[j]);
        if u.intersects(v) {
            return true;
        }
        let common: Vec<PointSet> = intersect_sorted(&self.images[i], &self.images[j]).map(|k| m[k]).collect();
        common
            .iter()
            .any(|&wu| u.is_subset(wu) && common.iter().any(|&wv| v.is_subset(wv) && wu.is_disjoint(wv)))
    }
}

fn intersect_sorted<'a>(a: &'a [usize], b: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
    a.iter().copied().filter(move |x| b.binary_search(x).is_ok())
}

/// `s(U)` is the whole family for every member.
pub fn trivial_fns(family: &SetFamily) -> FnsWitness {
    let all: Vec<usize> = (0..family.len()).collect();
    FnsWitness { family: family.clone(), images: vec![all; family.len()] }
}

/// Checks every disjoint pair, including a member paired with itself (which
/// only matters for `∅`). The first failing pair in index order is reported.
pub fn verify_fns(w: &FnsWitness) -> WitnessVerdict {
    let n = w.family.len();
    for i in 0..n {
        for j in i..n {
            if !w.separates(i, j) {
                return WitnessVerdict::fail(i, j);
            }
        }
    }
    WitnessVerdict::pass()
}

/// Result of [`search_fns`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnsSearch {
    pub k_min: usize,
    pub witness: FnsWitness,
    /// Number of pair-assignment nodes visited across all bounds tried.
    pub nodes: u64,
}

/// Smallest uniform bound `k ≤ k_max` such that some witness has
/// `|s(U)| ≤ k` everywhere, together with the first such witness in
/// canonical search order. Every bound below `k_min` was refuted by an
/// exhaustive search.
pub fn search_fns(family: &SetFamily, k_max: usize) -> Option<FnsSearch> {
    search_fns_within(family, k_max, u64::MAX).expect("unbounded search cannot run out of budget")
}

/// [`search_fns`] that gives up with [`Error::BudgetExceeded`] once more
/// than `budget` search nodes have been visited.
pub fn search_fns_within(family: &SetFamily, k_max: usize, budget: u64) -> Result<Option<FnsSearch>> {
    let problem = SeparationProblem::new(family);
    let mut nodes = 0;
    for k in 0..=k_max {
        let found = problem.solve(k, budget, &mut nodes).ok_or(Error::BudgetExceeded { budget })?;
        if let Some(images) = found {
            let witness = FnsWitness::new(family.clone(), images).expect("search produced a malformed witness");
            assert!(verify_fns(&witness).ok, "search produced a non-verifying witness");
            return Ok(Some(FnsSearch { k_min: k, witness, nodes }));
        }
    }
    Ok(None)
}

/// Whether a witness with `|s(U)| ≤ k` exists.
pub fn fns_exists_within(family: &SetFamily, k: usize) -> bool {
    let mut nodes = 0;
    SeparationProblem::new(family).solve(k, u64::MAX, &mut nodes).flatten().is_some()
}

/// Each disjoint pair must receive one separating pair of members placed in
/// both images. Since enlarging images never breaks a witness, it is enough
/// to branch on the separating pair for every pair not already separated.
/// A disjoint pair `(i, j)` with its candidate separators `(W_i, W_j)`.
type PairOptions = (usize, usize, Vec<(usize, usize)>);

struct SeparationProblem {
    size: usize,
    pairs: Vec<PairOptions>,
}

impl SeparationProblem {
    fn new(family: &SetFamily) -> Self {
        let m = family.members();
        let mut pairs = Vec::new();
        for i in 0..m.len() {
            for j in i..m.len() {
                if m[i].intersects(m[j]) {
                    continue;
                }
                let mut options = Vec::new();
                for a in (0..m.len()).filter(|&a| m[i].is_subset(m[a])) {
                    for b in (0..m.len()).filter(|&b| m[j].is_subset(m[b])) {
                        if m[a].is_disjoint(m[b]) {
                            options.push((a, b));
                        }
                    }
                }
                // Cheapest options first: fewer new indices.
                options.sort_by_key(|&(a, b)| (usize::from(a != b), a, b));
                pairs.push((i, j, options));
            }
        }
        SeparationProblem { size: m.len(), pairs }
    }

    /// `None` when the node budget ran out.
    fn solve(&self, k: usize, budget: u64, nodes: &mut u64) -> Option<Option<Vec<Vec<usize>>>> {
        let mut images = vec![Vec::new(); self.size];
        let found = self.descend(0, k, &mut images, nodes, budget)?;
        Some(found.then_some(images))
    }

    fn satisfied(&self, images: &[Vec<usize>], i: usize, j: usize, options: &[(usize, usize)]) -> bool {
        options
            .iter()
            .any(|&(a, b)| [a, b].iter().all(|x| images[i].contains(x) && images[j].contains(x)))
    }

    fn descend(&self, at: usize, k: usize, images: &mut [Vec<usize>], nodes: &mut u64, budget: u64) -> Option<bool> {
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        let Some((i, j, options)) = self.pairs.get(at) else {
            for img in images.iter_mut() {
                img.sort_unstable();
            }
            return Some(true);
        };
        let (i, j) = (*i, *j);
        if self.satisfied(images, i, j, options) {
            return self.descend(at + 1, k, images, nodes, budget);
        }
        for &(a, b) in options {
            let before = (images[i].len(), images[j].len());
            for owner in [i, j] {
                for x in [a, b] {
                    if !images[owner].contains(&x) {
                        images[owner].push(x);
                    }
                }
            }
            if images[i].len() <= k && images[j].len() <= k && self.descend(at + 1, k, images, nodes, budget)? {
                return Some(true);
            }
            images[i].truncate(before.0);
            if i != j {
                images[j].truncate(before.1);
            }
        }
        Some(false)
    }
}
