//! p-adic valuations on the rationals, finite p-adic sample spaces and the
//! Bethe-lattice trees describing p-adic balls and spheres.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::{DistanceSet, UltrametricSpace};
use crate::morphisms::canonical_code;
use crate::rational::{self, Rational};
use crate::tree::{build_representing_tree, LabeledTree};

/// Bethe trees larger than this many vertices are refused.
pub const MAX_TREE_VERTICES: usize = 1 << 20;

/// `t = p^gamma * m/n` with `m, n` prime to `p`; `gamma` is `None` for `t = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicValuation {
    pub prime: u64,
    pub gamma: Option<i64>,
    pub norm: Rational,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while (k as u128) * (k as u128) <= p as u128 {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn multiplicity(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut k = 0;
    while (&n % p).is_zero() {
        n /= p;
        k += 1;
    }
    k
}

/// `p^(-gamma)` as an exact rational.
pub fn prime_power_norm(p: u64, gamma: i64) -> Rational {
    let base = BigInt::from(p);
    let power = num_traits::pow(base, gamma.unsigned_abs() as usize);
    if gamma >= 0 {
        Rational::new(BigInt::one(), power)
    } else {
        Rational::from_integer(power)
    }
}

pub fn p_valuation(t: &Rational, p: u64) -> Result<PAdicValuation> {
    check_prime(p)?;
    if t.is_zero() {
        return Ok(PAdicValuation {
            prime: p,
            gamma: None,
            norm: Rational::zero(),
        });
    }
    let big_p = BigInt::from(p);
    let gamma = multiplicity(t.numer(), &big_p) - multiplicity(t.denom(), &big_p);
    Ok(PAdicValuation {
        prime: p,
        gamma: Some(gamma),
        norm: prime_power_norm(p, gamma),
    })
}

pub fn padic_norm(t: &Rational, p: u64) -> Result<Rational> {
    p_valuation(t, p).map(|v| v.norm)
}

/// The finite space `(points, |t - w|_p)`. Point names are the rationals
/// themselves.
pub fn padic_space(points: &[Rational], p: u64) -> Result<UltrametricSpace> {
    check_prime(p)?;
    if points.is_empty() {
        return Err(Error::Empty);
    }
    let mut seen = BTreeSet::new();
    for t in points {
        if !seen.insert(t) {
            return Err(Error::DuplicatePoint(rational::format(t)));
        }
    }
    let names = points.iter().map(|t| t.to_string()).collect();
    let matrix: Vec<Vec<Rational>> = points
        .iter()
        .map(|a| {
            points
                .iter()
                .map(|b| padic_norm(&(a - b), p))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    Ok(UltrametricSpace::from_fn_unchecked(names, |i, j| {
        matrix[i][j].clone()
    }))
}

/// Whether every positive value of `dset` is an integer power of `p`.
pub fn is_prime_power_set(dset: &DistanceSet, p: u64) -> bool {
    dset.values().iter().filter(|t| t.is_positive()).all(|t| {
        let big_p = BigInt::from(p);
        let gamma = multiplicity(t.numer(), &big_p) - multiplicity(t.denom(), &big_p);
        &prime_power_norm(p, -gamma) == t
    })
}

/// Residue classes mod `p` of `points`, as sorted index lists ordered by their
/// least index.
pub fn residue_classes(points: &[i64], p: u64) -> Vec<Vec<usize>> {
    let modulus = p as i128;
    let mut keys: Vec<i128> = points
        .iter()
        .map(|&x| (x as i128).rem_euclid(modulus))
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..points.len() {
        if keys[i] < 0 {
            continue;
        }
        let k = keys[i];
        let class: Vec<usize> = (i..points.len()).filter(|&j| keys[j] == k).collect();
        for &j in &class {
            keys[j] = -1;
        }
        classes.push(class);
    }
    classes
}

/// Whether the diametrical partition of the p-adic sample coincides with its
/// residue classes mod `p`.
pub fn residue_partition_check(points: &[i64], p: u64) -> Result<bool> {
    let rationals: Vec<Rational> = points.iter().map(|&x| rational::int(x)).collect();
    let space = padic_space(&rationals, p)?;
    let all: Vec<usize> = space.points().collect();
    let Some(partition) = space.diametrical_partition(&all)? else {
        return Ok(false);
    };
    Ok(partition.parts == residue_classes(points, p))
}

/// Full tree in BFS numbering: the root has `root_children` children, every
/// other vertex above `depth` has `p`, and labels shrink by `1/p` per level.
fn layered_tree(p: u64, root_children: u64, depth: u32, top: &Rational) -> Result<LabeledTree> {
    if !top.is_positive() {
        return Err(Error::NonPositiveThreshold(rational::format(top)));
    }
    let shrink = Rational::new(BigInt::one(), BigInt::from(p));
    let mut labels = vec![top.clone()];
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    let mut label = top.clone();
    for d in 0..depth {
        label = &label * &shrink;
        let fanout = if d == 0 { root_children } else { p } as usize;
        let next_len = level.len().saturating_mul(fanout);
        if labels.len().saturating_add(next_len) > MAX_TREE_VERTICES {
            return Err(Error::SizeCap {
                size: labels.len().saturating_add(next_len),
                cap: MAX_TREE_VERTICES,
            });
        }
        let mut next = Vec::with_capacity(next_len);
        for &v in &level {
            for _ in 0..fanout {
                let c = labels.len();
                labels.push(label.clone());
                edges.push((v, c));
                next.push(c);
            }
        }
        level = next;
    }
    Ok(LabeledTree::new(labels, &edges, Some(0))?.with_truncation(true))
}

/// Depth-`depth` prefix of the tree of balls inside a p-adic ball labeled
/// `top`: each ball splits into `p` balls of `1/p` its diameter. Leaves keep
/// their positive labels and the tree is flagged as truncated.
pub fn bethe_ball_tree(p: u64, depth: u32, top: &Rational) -> Result<LabeledTree> {
    check_prime(p)?;
    layered_tree(p, p, depth, top)
}

/// Tree of balls inside a p-adic sphere of radius `top`. For `p >= 3` this is
/// the ball tree with the root child containing the center removed; for
/// `p = 2` the sphere is itself a ball of half the radius.
pub fn sphere_tree(p: u64, depth: u32, top: &Rational) -> Result<LabeledTree> {
    check_prime(p)?;
    if p == 2 {
        return layered_tree(2, 2, depth, &(top / rational::int(2)));
    }
    if depth == 0 {
        return Err(Error::Invalid("sphere trees need depth at least 1".into()));
    }
    layered_tree(p, p - 1, depth, top)
}

/// Compares the representing tree of `{0, ..., p^depth - 1}` under the p-adic
/// metric with the Bethe ball tree of that depth, scaled to the sample
/// diameter and with its leaves relabeled 0.
pub fn padic_ball_tree_vs_sample(p: u64, depth: u32) -> Result<bool> {
    check_prime(p)?;
    let size = (p as u128)
        .checked_pow(depth)
        .filter(|&s| s <= MAX_TREE_VERTICES as u128);
    let Some(size) = size else {
        return Err(Error::SizeCap {
            size: usize::MAX,
            cap: MAX_TREE_VERTICES,
        });
    };
    let sample: Vec<Rational> = (0..size as i64).map(rational::int).collect();
    let space = padic_space(&sample, p)?;
    let all: Vec<usize> = space.points().collect();
    let diam = space.diam(&all)?;
    let top = if diam.is_zero() {
        Rational::one()
    } else {
        diam
    };
    let bethe = bethe_ball_tree(p, depth, &top)?;
    let rooted = bethe.rooted()?;
    let labels = bethe
        .labels()
        .iter()
        .enumerate()
        .map(|(v, l)| {
            if rooted.is_leaf(v) {
                Rational::zero()
            } else {
                l.clone()
            }
        })
        .collect();
    let expected = bethe.clone().with_labels(labels)?;
    let actual = build_representing_tree(&space)?;
    Ok(canonical_code(&expected)? == canonical_code(&actual)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::tree_metric::check_representable;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert_eq!(p_valuation(&int(3), 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn valuations() {
        let v = p_valuation(&int(0), 2).unwrap();
        assert_eq!((v.gamma, v.norm), (None, int(0)));
        let v = p_valuation(&int(12), 2).unwrap();
        assert_eq!((v.gamma, v.norm), (Some(2), ratio(1, 4)));
        let v = p_valuation(&ratio(9, 2), 3).unwrap();
        assert_eq!((v.gamma, v.norm), (Some(2), ratio(1, 9)));
        let v = p_valuation(&ratio(-5, 24), 2).unwrap();
        assert_eq!((v.gamma, v.norm), (Some(-3), int(8)));
    }

    #[test]
    fn sample_spaces() {
        let digits: Vec<Rational> = (0..10).map(int).collect();
        let x = padic_space(&digits, 3).unwrap();
        assert_eq!(
            x.distance_set().values(),
            &[int(0), ratio(1, 9), ratio(1, 3), int(1)]
        );
        assert!(x.is_ultrametric_triangle());
        assert!(is_prime_power_set(&x.distance_set(), 3));
        assert!(!is_prime_power_set(&x.distance_set(), 2));
        assert_eq!(padic_space(&[int(0), int(1)], 2).unwrap().d(0, 1), &int(1));
        assert_eq!(
            padic_space(&[int(0), int(8)], 2).unwrap().d(0, 1),
            &ratio(1, 8)
        );
        assert!(matches!(
            padic_space(&[int(1), int(1)], 2),
            Err(Error::DuplicatePoint(_))
        ));
        assert_eq!(x.name(9), "9");
    }

    #[test]
    fn residues() {
        let digits: Vec<i64> = (0..10).collect();
        assert_eq!(
            residue_classes(&digits, 3),
            vec![vec![0, 3, 6, 9], vec![1, 4, 7], vec![2, 5, 8]]
        );
        assert!(residue_partition_check(&digits, 3).unwrap());
        assert!(residue_partition_check(&digits, 5).unwrap());
        assert_eq!(residue_classes(&digits, 5).len(), 5);
        assert!(residue_partition_check(&[0, 1], 2).unwrap());
        assert!(residue_partition_check(&[-1, 2, 4], 3).unwrap());
        assert!(!residue_partition_check(&[0, 3, 6], 3).unwrap());
    }

    #[test]
    fn bethe_trees() {
        let t = bethe_ball_tree(2, 2, &int(1)).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(
            t.labels(),
            &[
                int(1),
                ratio(1, 2),
                ratio(1, 2),
                ratio(1, 4),
                ratio(1, 4),
                ratio(1, 4),
                ratio(1, 4)
            ]
        );
        assert!(t.is_truncated());
        assert!(!check_representable(&t).is_accepted());
        let single = bethe_ball_tree(5, 0, &int(3)).unwrap();
        assert_eq!((single.len(), single.label(0)), (1, &int(3)));
        let t = bethe_ball_tree(3, 1, &int(1)).unwrap();
        assert_eq!(t.labels(), &[int(1), ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        assert!(bethe_ball_tree(6, 1, &int(1)).is_err());
        assert!(bethe_ball_tree(2, 1, &int(0)).is_err());
        assert!(matches!(
            bethe_ball_tree(2, 40, &int(1)),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn sphere_trees() {
        let t = sphere_tree(3, 1, &int(1)).unwrap();
        assert_eq!(t.labels(), &[int(1), ratio(1, 3), ratio(1, 3)]);
        let t = sphere_tree(2, 2, &int(1)).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.label(0), &ratio(1, 2));
        assert_eq!(t.label(6), &ratio(1, 8));
        assert_eq!(sphere_tree(5, 1, &int(1)).unwrap().degree(0), 4);
        assert_eq!(sphere_tree(5, 2, &int(1)).unwrap().len(), 1 + 4 + 20);
        assert!(sphere_tree(3, 0, &int(1)).is_err());
    }

    #[test]
    fn samples_match_bethe_trees() {
        for (p, depth) in [
            (2, 0),
            (2, 1),
            (2, 2),
            (2, 3),
            (3, 1),
            (3, 2),
            (5, 1),
            (7, 1),
        ] {
            assert!(
                padic_ball_tree_vs_sample(p, depth).unwrap(),
                "p={p} depth={depth}"
            );
        }
    }
}
