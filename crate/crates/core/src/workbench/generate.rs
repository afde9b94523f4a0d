use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::topo::{FiniteSpace, PointSet};
use crate::workbench::enumerate::up_set_topology;

/// Largest point count for generators that list every subset.
pub const MAX_GENERATED_POINTS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum GenSpec {
    Discrete(usize),
    Indiscrete(usize),
    Sierpinski,
    /// Up-set topology of the order generated by edges `a < b`.
    Alexandrov { points: usize, edges: Vec<(usize, usize)> },
    /// Topology generated by a random family: each nonempty proper subset
    /// is a generator with probability `density`.
    Random { points: usize, density: f64, seed: u64 },
    /// Unions of the given blocks, which must partition the points.
    Cluster(Vec<Vec<usize>>),
}

pub fn generate(spec: &GenSpec) -> Result<FiniteSpace> {
    match spec {
        GenSpec::Discrete(n) => {
            check_size(*n)?;
            Ok(FiniteSpace::discrete(*n))
        }
        GenSpec::Indiscrete(n) => {
            check_size(*n)?;
            Ok(FiniteSpace::indiscrete(*n))
        }
        GenSpec::Sierpinski => Ok(FiniteSpace::sierpinski()),
        GenSpec::Alexandrov { points, edges } => alexandrov(*points, edges),
        GenSpec::Random { points, density, seed } => random(*points, *density, *seed),
        GenSpec::Cluster(blocks) => cluster(blocks),
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_GENERATED_POINTS {
        return Err(Error::TooManyPoints { points: n, max: MAX_GENERATED_POINTS });
    }
    Ok(())
}

fn alexandrov(n: usize, edges: &[(usize, usize)]) -> Result<FiniteSpace> {
    check_size(n)?;
    let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(Error::InvalidGenerator(format!("edge {a} < {b} leaves the {n} points")));
        }
        up[a].insert(b);
    }
    // Transitive closure by repeated propagation.
    loop {
        let mut changed = false;
        for a in 0..n {
            let reach = PointSet::union_all(up[a].iter().map(|b| up[b]));
            if reach != up[a] {
                up[a] = reach;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for a in 0..n {
        if let Some(b) = up[a].iter().find(|&b| b != a && up[b].contains(a)) {
            return Err(Error::InvalidGenerator(format!("edges form a cycle through {a} and {b}")));
        }
    }
    Ok(up_set_topology(n, &up))
}

fn random(n: usize, density: f64, seed: u64) -> Result<FiniteSpace> {
    check_size(n)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidGenerator(format!("density {density} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = PointSet::full(n);
    let gens: Vec<PointSet> = (1..full.bits())
        .map(PointSet::from_bits)
        .filter(|_| rng.gen_bool(density))
        .collect();
    Ok(FiniteSpace::generated_by(n, gens)?.0)
}

fn cluster(blocks: &[Vec<usize>]) -> Result<FiniteSpace> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    check_size(n)?;
    let mut seen = PointSet::EMPTY;
    let mut sets = Vec::with_capacity(blocks.len());
    for block in blocks {
        if block.is_empty() {
            return Err(Error::InvalidGenerator("empty block".into()));
        }
        let mut b = PointSet::EMPTY;
        for &x in block {
            if x >= n || seen.contains(x) {
                return Err(Error::InvalidGenerator(format!("blocks do not partition 0..{n} (point {x})")));
            }
            seen.insert(x);
            b.insert(x);
        }
        sets.push(b);
    }
    let opens = (0..1u64 << sets.len())
        .map(|mask| PointSet::union_all((0..sets.len()).filter(|i| mask >> i & 1 == 1).map(|i| sets[i])))
        .collect();
    Ok(FiniteSpace::from_opens_unchecked(n, opens))
}
