//! Permutation move and variation operators shared by both solvers.

use rand::Rng;

use crate::budget::Objective;
use crate::encoding::Permutation;
use crate::error::{Error, Result};
use crate::tsplib::TspInstance;

/// Elementary move used by the inclination mechanism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// Segment reversal; the short move.
    TwoOpt,
    /// Single-city relocation; the long move.
    Insertion,
}

/// Number of positions at which two permutations differ.
pub fn hamming(a: &Permutation, b: &Permutation) -> Result<usize> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            actual: b.dimension(),
        });
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .filter(|(x, y)| x != y)
        .count())
}

/// Reverses the inclusive 0-based range `i..=j` in place.
pub fn reverse_segment(order: &mut [u32], i: usize, j: usize) {
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    order[lo..=hi].reverse();
}

/// Removes the element at `from` and reinserts it so that it ends up at
/// index `to` of the result (both 0-based).
pub fn relocate(order: &mut [u32], from: usize, to: usize) {
    if from < to {
        order[from..=to].rotate_left(1);
    } else if to < from {
        order[to..=from].rotate_right(1);
    }
}

/// Two distinct positions in `0..n`, drawn uniformly over ordered pairs.
fn distinct_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

fn two_opt_in_place<R: Rng + ?Sized>(order: &mut [u32], rng: &mut R) {
    let (i, j) = distinct_pair(order.len(), rng);
    reverse_segment(order, i, j);
}

fn insertion_in_place<R: Rng + ?Sized>(order: &mut [u32], rng: &mut R) {
    let (from, to) = distinct_pair(order.len(), rng);
    relocate(order, from, to);
}

/// Reverses one uniformly chosen segment of length at least two.
pub fn two_opt_step<R: Rng + ?Sized>(p: &Permutation, rng: &mut R) -> Permutation {
    let mut out = p.clone();
    if out.dimension() >= 2 {
        two_opt_in_place(out.as_mut_slice(), rng);
    }
    out
}

/// Moves one uniformly chosen city to a different uniformly chosen position.
pub fn insertion_step<R: Rng + ?Sized>(p: &Permutation, rng: &mut R) -> Permutation {
    let mut out = p.clone();
    if out.dimension() >= 2 {
        insertion_in_place(out.as_mut_slice(), rng);
    }
    out
}

/// Applies `steps` elementary moves of the given kind in sequence.
///
/// # Panics
///
/// If `steps` is zero.
pub fn apply_move<R: Rng + ?Sized>(
    p: &Permutation,
    kind: MoveKind,
    steps: usize,
    rng: &mut R,
) -> Permutation {
    assert!(steps >= 1, "move velocity must be at least 1");
    let mut out = p.clone();
    if out.dimension() < 2 {
        return out;
    }
    let order = out.as_mut_slice();
    for _ in 0..steps {
        match kind {
            MoveKind::TwoOpt => two_opt_in_place(order, rng),
            MoveKind::Insertion => insertion_in_place(order, rng),
        }
    }
    out
}

/// Samples `n_samples` 2-opt neighbours of `p` and returns the fittest one
/// with its cost. The first-drawn wins ties. The result is not compared with
/// `p` itself and may be worse.
///
/// Returns `None` when the objective's budget ran out before any sample was
/// evaluated; otherwise the best of the samples that were evaluated.
pub fn best_sampled_neighbor<O, R>(
    p: &Permutation,
    n_samples: usize,
    objective: &mut O,
    rng: &mut R,
) -> Option<(Permutation, u64)>
where
    O: Objective + ?Sized,
    R: Rng + ?Sized,
{
    let mut best: Option<(Permutation, u64)> = None;
    for _ in 0..n_samples.max(1) {
        let candidate = two_opt_step(p, rng);
        let Some(cost) = objective.evaluate(&candidate) else {
            break;
        };
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((candidate, cost));
        }
    }
    best
}

/// Order crossover with random cut points.
pub fn order_crossover<R: Rng + ?Sized>(
    a: &Permutation,
    b: &Permutation,
    rng: &mut R,
) -> Result<(Permutation, Permutation)> {
    check_crossover_dims(a, b)?;
    let n = a.dimension();
    // Two distinct cut points in 0..=n delimit the kept segment.
    let (x, y) = distinct_pair(n + 1, rng);
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    order_crossover_at(a, b, lo, hi)
}

/// Order crossover that keeps the 0-based segment `lo..hi` of each parent.
///
/// The child copies its segment parent's slice, then fills the remaining
/// positions, left to right, with the other parent's values read cyclically
/// from index `hi` and skipping those already present.
pub fn order_crossover_at(
    a: &Permutation,
    b: &Permutation,
    lo: usize,
    hi: usize,
) -> Result<(Permutation, Permutation)> {
    check_crossover_dims(a, b)?;
    let n = a.dimension();
    if lo > hi || hi > n {
        return Err(Error::Config(format!(
            "invalid crossover cuts {lo}..{hi} for dimension {n}"
        )));
    }
    Ok((ox_child(a, b, lo, hi), ox_child(b, a, lo, hi)))
}

fn ox_child(keep: &Permutation, donor: &Permutation, lo: usize, hi: usize) -> Permutation {
    let n = keep.dimension();
    let keep = keep.as_slice();
    let donor = donor.as_slice();
    let mut in_segment = vec![false; n + 1];
    for &v in &keep[lo..hi] {
        in_segment[v as usize] = true;
    }
    let mut fill = (0..n)
        .map(|k| donor[(hi + k) % n])
        .filter(|&v| !in_segment[v as usize]);
    let mut child = vec![0u32; n];
    for (pos, slot) in child.iter_mut().enumerate() {
        *slot = if (lo..hi).contains(&pos) {
            keep[pos]
        } else {
            fill.next().expect("donor supplies every missing value")
        };
    }
    Permutation::from_vec_unchecked(child)
}

fn check_crossover_dims(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            actual: b.dimension(),
        });
    }
    if a.dimension() < 2 {
        return Err(Error::Config("crossover needs dimension >= 2".into()));
    }
    Ok(())
}

/// Change in closed-tour length from reversing the inclusive 0-based range
/// `i..=j` of `tour`.
pub fn two_opt_delta(instance: &TspInstance, tour: &[u32], i: usize, j: usize) -> i64 {
    let n = tour.len();
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    if j - i + 1 >= n - 1 {
        // Reversing all (or all but one) of a cycle yields the same cycle.
        return 0;
    }
    let city = |k: usize| tour[k] as usize - 1;
    let a = city((i + n - 1) % n);
    let b = city(i);
    let c = city(j);
    let d = city((j + 1) % n);
    let dist = |x: usize, y: usize| i64::from(instance.dist0(x, y));
    dist(a, c) + dist(b, d) - dist(a, b) - dist(c, d)
}
