//! Balls of a finite ultrametric space, the ballean ordered by inclusion, and
//! the Hausdorff distance between balls.

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{PointId, UltrametricSpace};
use crate::poset;
use crate::rational::{self, Rational};

/// A closed ball. Identity is the point set; the center and radius are one
/// witness among many, since every member is a center.
#[derive(Debug, Clone)]
pub struct Ball {
    points: Vec<PointId>,
    diameter: Rational,
    center: PointId,
    radius: Rational,
}

impl Ball {
    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn diameter(&self) -> &Rational {
        &self.diameter
    }

    pub fn center(&self) -> PointId {
        self.center
    }

    /// Canonical radius, equal to the diameter.
    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: PointId) -> bool {
        self.points.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &Ball) -> bool {
        self.points.iter().all(|&x| other.contains(x))
    }

    pub fn intersects(&self, other: &Ball) -> bool {
        self.points.iter().any(|&x| other.contains(x))
    }

    pub fn min_point(&self) -> PointId {
        self.points[0]
    }
}

impl PartialEq for Ball {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for Ball {}

impl Hash for Ball {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.points.hash(state);
    }
}

/// `{x : d(c, x) <= r}`, recorded with its diameter as canonical radius.
pub fn closed_ball(space: &UltrametricSpace, c: PointId, r: &Rational) -> Result<Ball> {
    if c >= space.len() {
        return Err(Error::PointOutOfRange {
            index: c,
            len: space.len(),
        });
    }
    if r.is_negative() {
        return Err(Error::Invalid(format!(
            "negative radius {}",
            rational::format(r)
        )));
    }
    let points: Vec<PointId> = space.points().filter(|&x| space.d(c, x) <= r).collect();
    Ok(ball_from_points(space, points, c))
}

fn ball_from_points(space: &UltrametricSpace, points: Vec<PointId>, center: PointId) -> Ball {
    let diameter = space.diam(&points).expect("ball contains its center");
    Ball {
        points,
        radius: diameter.clone(),
        diameter,
        center,
    }
}

/// Every distinct ball of a finite space, sorted by decreasing diameter and
/// then by least member. The whole space comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ballean {
    balls: Vec<Ball>,
    index: BTreeMap<Vec<PointId>, usize>,
}

impl Ballean {
    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn get(&self, i: usize) -> &Ball {
        &self.balls[i]
    }

    /// Index of the ball with exactly these (sorted) points.
    pub fn position(&self, points: &[PointId]) -> Option<usize> {
        self.index.get(points).copied()
    }

    /// The point sets, for set comparisons.
    pub fn point_sets(&self) -> impl Iterator<Item = &[PointId]> {
        self.balls.iter().map(|b| b.points())
    }

    fn from_balls(mut balls: Vec<Ball>) -> Self {
        balls.sort_by(|a, b| {
            b.diameter
                .cmp(&a.diameter)
                .then(a.min_point().cmp(&b.min_point()))
        });
        let index = balls
            .iter()
            .enumerate()
            .map(|(i, b)| (b.points.clone(), i))
            .collect();
        Ballean { balls, index }
    }
}

/// All closed balls `B(c, t)` with `c` in `X` and `t` in the distance set,
/// deduplicated by point set. In a finite space these are also exactly the
/// open balls.
pub fn ballean(space: &UltrametricSpace) -> Ballean {
    let n = space.len();
    let mut seen: BTreeMap<Vec<PointId>, Ball> = BTreeMap::new();
    let mut by_rank: Vec<PointId> = Vec::with_capacity(n);
    for c in space.points() {
        by_rank.clear();
        by_rank.extend(space.points());
        by_rank.sort_by_key(|&x| space.rank(c, x));
        // closed balls around c are the prefixes ending at a rank change
        for end in 1..=n {
            if end < n && space.rank(c, by_rank[end]) == space.rank(c, by_rank[end - 1]) {
                continue;
            }
            let mut points = by_rank[..end].to_vec();
            points.sort_unstable();
            if !seen.contains_key(&points) {
                let ball = ball_from_points(space, points.clone(), c);
                seen.insert(points, ball);
            }
        }
    }
    Ballean::from_balls(seen.into_values().collect())
}

/// The least ball containing `subset`: the closed ball of radius `diam A`
/// around any point of `A`.
pub fn smallest_enclosing_ball(space: &UltrametricSpace, subset: &[PointId]) -> Result<Ball> {
    let diam = space.diam(subset)?;
    let ball = closed_ball(space, subset[0], &diam)?;
    debug_assert!(subset.iter().all(|&a| closed_ball(space, a, &diam)
        .map(|b| b == ball)
        .unwrap_or(false)));
    Ok(ball)
}

/// The ballean ordered by inclusion.
#[derive(Debug, Clone)]
pub struct BallPoset {
    ballean: Ballean,
    leq: Vec<Vec<bool>>,
}

impl BallPoset {
    pub fn ballean(&self) -> &Ballean {
        &self.ballean
    }

    pub fn len(&self) -> usize {
        self.ballean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ballean.is_empty()
    }

    /// `balls[i]` is contained in `balls[j]`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Index of the whole space.
    pub fn top(&self) -> usize {
        0
    }

    /// Least upper bound: the smallest ball containing both.
    pub fn join(&self, space: &UltrametricSpace, i: usize, j: usize) -> usize {
        let mut union: Vec<PointId> = self.ballean.get(i).points().to_vec();
        union.extend_from_slice(self.ballean.get(j).points());
        union.sort_unstable();
        union.dedup();
        let ball = smallest_enclosing_ball(space, &union).expect("balls are nonempty");
        self.ballean
            .position(ball.points())
            .expect("enclosing ball belongs to the ballean")
    }

    /// Greatest lower bound. Two balls are nested or disjoint, so the meet is
    /// the smaller ball, or `None` when they are disjoint.
    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        if self.leq[i][j] {
            Some(i)
        } else if self.leq[j][i] {
            Some(j)
        } else {
            None
        }
    }

    /// Covering pairs `(lower, upper)`: strict inclusion with no ball between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        poset::covering_pairs(&self.leq)
    }

    pub fn relation(&self) -> &[Vec<bool>] {
        &self.leq
    }
}

pub fn ball_poset(space: &UltrametricSpace) -> BallPoset {
    let ballean = ballean(space);
    let balls = ballean.balls();
    let leq = balls
        .iter()
        .map(|a| balls.iter().map(|b| a.is_subset(b)).collect())
        .collect();
    BallPoset { ballean, leq }
}

/// Hausdorff distance between two balls, which in an ultrametric space is
/// `diam(B1 ∪ B2)` for distinct balls and 0 otherwise.
pub fn hausdorff_distance(space: &UltrametricSpace, b1: &Ball, b2: &Ball) -> Rational {
    if b1 == b2 {
        return Rational::zero();
    }
    let mut union = b1.points().to_vec();
    union.extend_from_slice(b2.points());
    space.values()[space.diam_rank(&union)].clone()
}

/// Hausdorff distance straight from its definition:
/// `max(sup_{x in A} dist(x, B), sup_{y in B} dist(y, A))`.
pub fn hausdorff_distance_direct(
    space: &UltrametricSpace,
    a: &[PointId],
    b: &[PointId],
) -> Rational {
    let one_sided = |from: &[PointId], to: &[PointId]| {
        from.iter()
            .map(|&x| to.iter().map(|&y| space.rank(x, y)).min().unwrap_or(0))
            .max()
            .unwrap_or(0)
    };
    space.values()[one_sided(a, b).max(one_sided(b, a))].clone()
}

/// Distance between sets, `inf { d(x, y) : x in A, y in B }`.
pub fn set_distance(space: &UltrametricSpace, a: &[PointId], b: &[PointId]) -> Rational {
    let r = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| space.rank(x, y)))
        .min()
        .unwrap_or(0);
    space.values()[r].clone()
}

/// The ballean as an ultrametric space under the Hausdorff distance.
#[derive(Debug, Clone)]
pub struct HausdorffBallSpace {
    pub space: UltrametricSpace,
    pub ballean: Ballean,
}

impl HausdorffBallSpace {
    /// Index of the singleton `{x}`; `x -> {x}` is an isometric embedding.
    pub fn singleton(&self, x: PointId) -> usize {
        self.ballean.position(&[x]).expect("singletons are balls")
    }
}

pub fn hausdorff_ball_space(space: &UltrametricSpace) -> HausdorffBallSpace {
    let ballean = ballean(space);
    let names = ballean
        .balls()
        .iter()
        .map(|b| format_point_set(b.points()))
        .collect();
    let balls = ballean.balls();
    let hs = UltrametricSpace::from_fn_unchecked(names, |i, j| {
        hausdorff_distance(space, &balls[i], &balls[j])
    });
    HausdorffBallSpace { space: hs, ballean }
}

fn format_point_set(points: &[PointId]) -> String {
    let inner: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Ballean JSON: `{"balls": [{"points": [int], "diameter": "p/q"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalleanJson {
    pub balls: Vec<BallJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallJson {
    pub points: Vec<PointId>,
    #[serde(with = "rational::serde_pq")]
    pub diameter: Rational,
}

impl From<&Ballean> for BalleanJson {
    fn from(b: &Ballean) -> Self {
        BalleanJson {
            balls: b
                .balls()
                .iter()
                .map(|ball| BallJson {
                    points: ball.points().to_vec(),
                    diameter: ball.diameter().clone(),
                })
                .collect(),
        }
    }
}
