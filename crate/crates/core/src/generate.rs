//! Random finite spaces for tests and experiments.
//!
//! Ultrametric spaces are grown as dendrograms: clusters are merged a few at
//! a time at non-decreasing heights, and two points end up at the height of
//! the merge that first joined them.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::metric::{MetricSpace, UltrametricSpace};
use crate::rational::{int, ratio, Rational};

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Merge heights are chosen from the increasing list `heights`; the next merge
/// uses a height at least as large as its parts, so repeated values (and
/// therefore ties among distances) are common.
pub fn random_ultrametric_over<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    heights: &[Rational],
) -> UltrametricSpace {
    assert!(n >= 1, "spaces are nonempty");
    assert!(
        !heights.is_empty() && heights[0] > Rational::zero(),
        "heights must be positive"
    );
    let mut matrix = vec![vec![Rational::zero(); n]; n];
    let mut clusters: Vec<(Vec<usize>, Option<usize>)> = (0..n).map(|i| (vec![i], None)).collect();
    while clusters.len() > 1 {
        clusters.shuffle(rng);
        let k = rng.gen_range(2..=clusters.len().min(4));
        let merged: Vec<(Vec<usize>, Option<usize>)> = clusters.drain(..k).collect();
        let floor = merged.iter().filter_map(|(_, h)| *h).max().unwrap_or(0);
        let level = rng.gen_range(floor..heights.len());
        for a in 0..merged.len() {
            for b in a + 1..merged.len() {
                for &x in &merged[a].0 {
                    for &y in &merged[b].0 {
                        matrix[x][y] = heights[level].clone();
                        matrix[y][x] = heights[level].clone();
                    }
                }
            }
        }
        let members = merged.into_iter().flat_map(|(m, _)| m).collect();
        clusters.push((members, Some(level)));
    }
    UltrametricSpace::from_fn_unchecked(default_names(n), |i, j| matrix[i][j].clone())
}

/// Merge heights drawn from a random nonempty subset of `1/4, 1/2, ..., 4`.
pub fn random_ultrametric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UltrametricSpace {
    let mut heights: Vec<Rational> = (1..=16).map(|k| ratio(k, 4)).collect();
    heights.shuffle(rng);
    heights.truncate(rng.gen_range(1..=16));
    heights.sort();
    random_ultrametric_over(rng, n, &heights)
}

/// A symmetric matrix with zero diagonal and off-diagonal entries in
/// `[1, 2]`, so the triangle inequality always holds. Two thirds start from an
/// ultrametric and the rest from arbitrary entries; half of all matrices then
/// get one entry changed.
pub fn random_metric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> MetricSpace {
    let alphabet: Vec<Rational> = (0..=4).map(|k| int(1) + ratio(k, 4)).collect();
    let mut matrix = match rng.gen_range(0..3) {
        0 | 1 => random_ultrametric_over(rng, n, &alphabet).matrix(),
        _ => {
            let mut m = vec![vec![Rational::zero(); n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let t = alphabet.choose(rng).expect("nonempty").clone();
                    m[i][j] = t.clone();
                    m[j][i] = t;
                }
            }
            m
        }
    };
    if n >= 2 && rng.gen_bool(0.5) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let t = alphabet.choose(rng).expect("nonempty").clone();
        matrix[i][j] = t.clone();
        matrix[j][i] = t;
    }
    MetricSpace::new(default_names(n), matrix).expect("entries in [1, 2] satisfy the metric axioms")
}

/// A uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}
