use crate::error::{Error, Result};
use crate::topo::SetFamily;
use crate::witness::WitnessVerdict;

/// A pair of finite operators `(u, l)` on a base: `u(V)` lists supersets of
/// `V` and `l(V)` lists subsets of `V`, all as member indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnWitness {
    base: SetFamily,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

impl FnWitness {
    /// Normalises images to sorted lists. Side-condition violations are
    /// structural errors, not verdicts.
    pub fn new(base: SetFamily, mut up: Vec<Vec<usize>>, mut down: Vec<Vec<usize>>) -> Result<Self> {
        let n = base.len();
        if up.len() != n || down.len() != n {
            return Err(Error::MalformedWitness(format!(
                "expected {n} up and down images, got {} and {}",
                up.len(),
                down.len()
            )));
        }
        let m = base.members();
        for (side, images) in [("u", &mut up), ("l", &mut down)] {
            for (v, img) in images.iter_mut().enumerate() {
                img.sort_unstable();
                if img.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::MalformedWitness(format!("{side}({v}) repeats a member")));
                }
                for &w in img.iter() {
                    if w >= n {
                        return Err(Error::MalformedWitness(format!("{side}({v}) mentions member {w}")));
                    }
                    let fits = if side == "u" { m[v].is_subset(m[w]) } else { m[w].is_subset(m[v]) };
                    if !fits {
                        let rel = if side == "u" { "superset" } else { "subset" };
                        return Err(Error::SideCondition(format!(
                            "{side}({}) contains {}, which is not a {rel}",
                            m[v], m[w]
                        )));
                    }
                }
            }
        }
        Ok(FnWitness { base, up, down })
    }

    /// `u(V)` = every superset of `V` in the base, `l(V) = {V}`.
    pub fn trivial(base: &SetFamily) -> Self {
        let m = base.members();
        let up = m
            .iter()
            .map(|&v| (0..m.len()).filter(|&w| v.is_subset(m[w])).collect())
            .collect();
        let down = (0..m.len()).map(|v| vec![v]).collect();
        FnWitness { base: base.clone(), up, down }
    }

    pub fn base(&self) -> &SetFamily {
        &self.base
    }

    pub fn up(&self) -> &[Vec<usize>] {
        &self.up
    }

    pub fn down(&self) -> &[Vec<usize>] {
        &self.down
    }

    /// For `V ⊆ W`: whether `u(V) ∩ l(W)` is nonempty. Pairs that are not
    /// nested hold vacuously.
    pub fn meets(&self, v: usize, w: usize) -> bool {
        let m = self.base.members();
        if !m[v].is_subset(m[w]) {
            return true;
        }
        self.up[v].iter().any(|x| self.down[w].binary_search(x).is_ok())
    }
}

/// Checks `u(V) ∩ l(W) ≠ ∅` for every nested pair `V ⊆ W` of base members,
/// including `V = W`.
pub fn verify_fn(w: &FnWitness) -> WitnessVerdict {
    let n = w.base.len();
    for v in 0..n {
        for x in 0..n {
            if !w.meets(v, x) {
                return WitnessVerdict::fail(v, x);
            }
        }
    }
    WitnessVerdict::pass()
}
