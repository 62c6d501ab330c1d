//! Finite metric and ultrametric spaces over exact rationals.
//!
//! A space stores its sorted distance set once and keeps, for every pair of
//! points, the rank of their distance inside that set. All equality-driven
//! constructions (diametrical partitions, threshold graphs, balls) work on
//! ranks, which compare exactly the way the underlying rationals do.

use std::ops::Deref;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Index of a point in its space.
pub type PointId = usize;

/// The set `{d(x, y) : x, y in X}`, strictly increasing and starting at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceSet(Vec<Rational>);

impl DistanceSet {
    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position of `t` in the set, if present.
    pub fn rank_of(&self, t: &Rational) -> Option<usize> {
        self.0.binary_search(t).ok()
    }

    pub fn max(&self) -> &Rational {
        self.0.last().expect("distance set always contains 0")
    }
}

/// Parts of a complete multipartite graph together with the threshold that
/// defined its edges (pairs at distance `>= threshold` are adjacent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipartitePartition {
    pub parts: Vec<Vec<PointId>>,
    pub threshold: Rational,
}

impl MultipartitePartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn has_singleton_part(&self) -> bool {
        self.parts.iter().any(|p| p.len() == 1)
    }
}

/// A validated finite metric space: symmetric, zero diagonal, positive off the
/// diagonal, triangle inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSpace {
    names: Vec<String>,
    values: Vec<Rational>,
    ranks: Vec<u32>,
}

impl MetricSpace {
    pub fn new(names: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if names.len() != n {
            return Err(Error::NameCount {
                names: names.len(),
                size: n,
            });
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row,
                    len: r.len(),
                });
            }
        }
        for i in 0..n {
            if !matrix[i][i].is_zero() {
                return Err(Error::NonzeroDiagonal { i });
            }
            for j in i + 1..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::Asymmetric { i, j });
                }
                if !matrix[i][j].is_positive() {
                    return Err(Error::NonPositive { i, j });
                }
            }
        }
        if let Some((x, y, z)) = triangle_violation(&matrix) {
            return Err(Error::Triangle { x, y, z });
        }
        Ok(Self::from_matrix_unchecked(names, &matrix))
    }

    /// Builds the rank representation without validating the axioms.
    pub(crate) fn from_matrix_unchecked(names: Vec<String>, matrix: &[Vec<Rational>]) -> Self {
        let mut values: Vec<Rational> = matrix.iter().flatten().cloned().collect();
        values.sort();
        values.dedup();
        let ranks = matrix
            .iter()
            .flatten()
            .map(|t| values.binary_search(t).expect("value collected above") as u32)
            .collect();
        MetricSpace {
            names,
            values,
            ranks,
        }
    }

    /// Builds a space from a distance function on `0..n`, with generated names.
    pub(crate) fn from_fn_unchecked(
        names: Vec<String>,
        mut f: impl FnMut(usize, usize) -> Rational,
    ) -> Self {
        let n = names.len();
        let matrix: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::zero() } else { f(i, j) })
                    .collect()
            })
            .collect();
        Self::from_matrix_unchecked(names, &matrix)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: PointId) -> &str {
        &self.names[x]
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        0..self.len()
    }

    pub fn d(&self, x: PointId, y: PointId) -> &Rational {
        &self.values[self.rank(x, y)]
    }

    /// Rank of `d(x, y)` inside the distance set; 0 exactly when `x == y`.
    #[inline]
    pub fn rank(&self, x: PointId, y: PointId) -> usize {
        self.ranks[x * self.len() + y] as usize
    }

    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        self.points()
            .map(|x| self.points().map(|y| self.d(x, y).clone()).collect())
            .collect()
    }

    pub fn distance_set(&self) -> DistanceSet {
        DistanceSet(self.values.clone())
    }

    pub(crate) fn values(&self) -> &[Rational] {
        &self.values
    }

    fn check_subset(&self, subset: &[PointId]) -> Result<()> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        match subset.iter().find(|&&x| x >= self.len()) {
            Some(&index) => Err(Error::PointOutOfRange {
                index,
                len: self.len(),
            }),
            None => Ok(()),
        }
    }

    pub(crate) fn diam_rank(&self, subset: &[PointId]) -> usize {
        let mut best = 0;
        for (k, &x) in subset.iter().enumerate() {
            for &y in &subset[k + 1..] {
                best = best.max(self.rank(x, y));
            }
        }
        best
    }

    /// `sup { d(x, y) : x, y in A }`.
    pub fn diam(&self, subset: &[PointId]) -> Result<Rational> {
        self.check_subset(subset)?;
        Ok(self.values[self.diam_rank(subset)].clone())
    }

    /// `sup { d(x, a) : x in A }` for a fixed `a`. Equals [`diam`](Self::diam)
    /// in an ultrametric space whenever `a` belongs to `A`.
    pub fn diam_from(&self, a: PointId, subset: &[PointId]) -> Result<Rational> {
        self.check_subset(subset)?;
        self.check_subset(&[a])?;
        let r = subset.iter().map(|&x| self.rank(x, a)).max().unwrap_or(0);
        Ok(self.values[r].clone())
    }

    /// A triple `(x, y, z)` with `d(x, y) > max(d(x, z), d(z, y))`, if any.
    pub fn strong_triangle_witness(&self) -> Option<(PointId, PointId, PointId)> {
        let n = self.len();
        for x in 0..n {
            for y in x + 1..n {
                let dxy = self.rank(x, y);
                for z in 0..n {
                    if dxy > self.rank(x, z).max(self.rank(z, y)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_ultrametric_triangle(&self) -> bool {
        self.strong_triangle_witness().is_none()
    }

    /// Threshold-graph test: for every positive `r` in the distance set the
    /// relation `d(u, v) < r` must be an equivalence, i.e. every graph joining
    /// pairs at distance `>= r` is empty or complete multipartite.
    pub fn is_ultrametric_multipartite(&self) -> bool {
        let all: Vec<PointId> = self.points().collect();
        (1..self.values.len()).all(|k| self.classes_below(&all, k).is_ok())
    }

    /// Classes of the relation `rank(u, v) < k` on `subset`, ordered by least
    /// member. Fails with a transitivity witness when the relation is not an
    /// equivalence.
    pub(crate) fn classes_below(&self, subset: &[PointId], k: usize) -> Result<Vec<Vec<PointId>>> {
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut class_of = vec![usize::MAX; self.len()];
        let mut classes: Vec<Vec<PointId>> = Vec::new();
        let mut reps = Vec::new();
        for &u in &sorted {
            if class_of[u] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let members: Vec<PointId> = sorted
                .iter()
                .copied()
                .filter(|&v| class_of[v] == usize::MAX && self.rank(u, v) < k)
                .collect();
            for &v in &members {
                class_of[v] = id;
            }
            classes.push(members);
            reps.push(u);
        }
        let threshold = || rational::format(&self.values[k]);
        for (id, class) in classes.iter().enumerate() {
            let rep = reps[id];
            for (i, &a) in class.iter().enumerate() {
                for &b in &class[i + 1..] {
                    if self.rank(a, b) >= k {
                        return Err(Error::NotEquivalence {
                            u: a,
                            v: rep,
                            w: b,
                            threshold: threshold(),
                        });
                    }
                }
            }
        }
        for (i, &a) in sorted.iter().enumerate() {
            for &b in &sorted[i + 1..] {
                if class_of[a] != class_of[b] && self.rank(a, b) < k {
                    // b sits in a later class than a's representative would allow
                    let (first, other) = if class_of[a] < class_of[b] {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    let rep = reps[class_of[first]];
                    return Err(Error::NotEquivalence {
                        u: rep,
                        v: first,
                        w: other,
                        threshold: threshold(),
                    });
                }
            }
        }
        Ok(classes)
    }

    /// Parts of the diametrical graph of `subset` (pairs at distance exactly
    /// `diam subset` are adjacent). `None` for a single point.
    pub fn diametrical_partition(
        &self,
        subset: &[PointId],
    ) -> Result<Option<MultipartitePartition>> {
        self.check_subset(subset)?;
        let k = self.diam_rank(subset);
        if k == 0 {
            return Ok(None);
        }
        let parts = self.classes_below(subset, k)?;
        Ok(Some(MultipartitePartition {
            parts,
            threshold: self.values[k].clone(),
        }))
    }

    /// Parts of the graph joining pairs at distance `>= r`. `None` when the
    /// graph has no edges (`r > diam X`).
    pub fn threshold_partition(&self, r: &Rational) -> Result<Option<MultipartitePartition>> {
        if !r.is_positive() {
            return Err(Error::NonPositiveThreshold(rational::format(r)));
        }
        if r > self.values.last().expect("nonempty") {
            return Ok(None);
        }
        let k = self.values.partition_point(|v| v < r);
        let all: Vec<PointId> = self.points().collect();
        let parts = self.classes_below(&all, k)?;
        Ok(Some(MultipartitePartition {
            parts,
            threshold: r.clone(),
        }))
    }
}

fn triangle_violation(m: &[Vec<Rational>]) -> Option<(PointId, PointId, PointId)> {
    let n = m.len();
    let off = || (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    let (Some(min), Some(max)) = (
        off().map(|(i, j)| &m[i][j]).min(),
        off().map(|(i, j)| &m[i][j]).max(),
    ) else {
        return None;
    };
    // every sum of two entries is at least 2*min
    if max <= &(min + min) {
        return None;
    }
    for x in 0..n {
        for y in x + 1..n {
            for z in 0..n {
                if z != x && z != y && m[x][y] > &m[x][z] + &m[z][y] {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// A finite metric space that satisfies the strong triangle inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltrametricSpace(MetricSpace);

impl UltrametricSpace {
    pub fn new(names: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<Self> {
        Self::try_from(MetricSpace::new(names, matrix)?)
    }

    /// Points named `0, 1, ...`.
    pub fn from_matrix(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let names = (0..matrix.len()).map(|i| i.to_string()).collect();
        Self::new(names, matrix)
    }

    pub(crate) fn from_fn_unchecked(
        names: Vec<String>,
        f: impl FnMut(usize, usize) -> Rational,
    ) -> Self {
        let space = UltrametricSpace(MetricSpace::from_fn_unchecked(names, f));
        debug_assert!(space.0.is_ultrametric_triangle());
        space
    }

    pub fn metric(&self) -> &MetricSpace {
        &self.0
    }

    pub fn into_metric(self) -> MetricSpace {
        self.0
    }

    /// Restriction to a subset of points, keeping their order.
    pub fn subspace(&self, subset: &[PointId]) -> UltrametricSpace {
        let names = subset.iter().map(|&x| self.name(x).to_string()).collect();
        Self::from_fn_unchecked(names, |i, j| self.d(subset[i], subset[j]).clone())
    }

    /// Same space with points reordered so that new point `i` is old point
    /// `perm[i]`.
    pub fn permuted(&self, perm: &[PointId]) -> UltrametricSpace {
        self.subspace(perm)
    }
}

impl TryFrom<MetricSpace> for UltrametricSpace {
    type Error = Error;

    fn try_from(space: MetricSpace) -> Result<Self> {
        match space.strong_triangle_witness() {
            Some((x, y, z)) => Err(Error::StrongTriangle { x, y, z }),
            None => Ok(UltrametricSpace(space)),
        }
    }
}

impl Deref for UltrametricSpace {
    type Target = MetricSpace;

    fn deref(&self) -> &MetricSpace {
        &self.0
    }
}

/// The space `{0, s_1, ..., s_n}` with `d(x, y) = max(x, y)` for `x != y`,
/// whose distance set is `{0, s_n, ..., s_1}`.
pub fn space_from_sequence(seq: &[Rational]) -> Result<UltrametricSpace> {
    for (i, s) in seq.iter().enumerate() {
        if !s.is_positive() || (i > 0 && s >= &seq[i - 1]) {
            return Err(Error::BadSequence(i));
        }
    }
    let mut points = vec![Rational::zero()];
    points.extend(seq.iter().cloned());
    let names = points.iter().map(rational::format).collect();
    Ok(UltrametricSpace::from_fn_unchecked(names, |i, j| {
        points[i].clone().max(points[j].clone())
    }))
}

/// Space JSON: `{"points": [string], "matrix": [["p/q" | decimal]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub points: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

impl SpaceJson {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("space JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("strings always serialize")
    }

    pub fn to_metric(&self) -> Result<MetricSpace> {
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| rational::parse(t))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MetricSpace::new(self.points.clone(), matrix)
    }

    pub fn to_ultrametric(&self) -> Result<UltrametricSpace> {
        UltrametricSpace::try_from(self.to_metric()?)
    }
}

impl From<&MetricSpace> for SpaceJson {
    fn from(space: &MetricSpace) -> Self {
        SpaceJson {
            points: space.names().to_vec(),
            matrix: space
                .points()
                .map(|i| {
                    space
                        .points()
                        .map(|j| rational::format(space.d(i, j)))
                        .collect()
                })
                .collect(),
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::rational::int;

    /// Four points, `x1` at distance 2 from the rest, the rest pairwise at 1.
    pub fn four_point() -> UltrametricSpace {
        let names = ["x1", "x2", "x3", "x4"].map(String::from).to_vec();
        let m = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| match (i, j) {
                        _ if i == j => int(0),
                        (0, _) | (_, 0) => int(2),
                        _ => int(1),
                    })
                    .collect()
            })
            .collect();
        UltrametricSpace::new(names, m).unwrap()
    }

    /// Two pairs at distance 1, cross distances 2.
    pub fn two_pairs() -> UltrametricSpace {
        let m = (0..4)
            .map(|i: usize| {
                (0..4)
                    .map(|j: usize| {
                        if i == j {
                            int(0)
                        } else if i / 2 == j / 2 {
                            int(1)
                        } else {
                            int(2)
                        }
                    })
                    .collect()
            })
            .collect();
        UltrametricSpace::new(["v1", "v2", "v3", "v4"].map(String::from).to_vec(), m).unwrap()
    }

    pub fn from_ints(m: &[&[i64]]) -> Vec<Vec<Rational>> {
        m.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::rational::{int, ratio};

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn four_point_space_is_ultrametric() {
        let x = four_point();
        assert!(x.is_ultrametric_triangle());
        assert!(x.is_ultrametric_multipartite());
        assert_eq!(x.distance_set().values(), &[int(0), int(1), int(2)]);
    }

    #[test]
    fn one_point_space() {
        let x = UltrametricSpace::new(names(1), vec![vec![int(0)]]).unwrap();
        assert_eq!(x.distance_set().values(), &[int(0)]);
        assert_eq!(x.diametrical_partition(&[0]).unwrap(), None);
        assert!(x.is_ultrametric_multipartite());
    }

    #[test]
    fn rejects_axiom_violations() {
        let m = from_ints(&[&[0, 1, 3], &[1, 0, 1], &[3, 1, 0]]);
        assert_eq!(
            MetricSpace::new(names(3), m.clone()),
            Err(Error::Triangle { x: 0, y: 2, z: 1 })
        );
        let m = from_ints(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        assert_eq!(
            UltrametricSpace::new(names(3), m.clone()),
            Err(Error::StrongTriangle { x: 0, y: 2, z: 1 })
        );
        let metric = MetricSpace::new(names(3), m).unwrap();
        assert_eq!(metric.strong_triangle_witness(), Some((0, 2, 1)));
        assert!(!metric.is_ultrametric_multipartite());

        let m = from_ints(&[&[0, 1], &[2, 0]]);
        assert_eq!(
            MetricSpace::new(names(2), m),
            Err(Error::Asymmetric { i: 0, j: 1 })
        );
        let m = from_ints(&[&[1, 1], &[1, 0]]);
        assert_eq!(
            MetricSpace::new(names(2), m),
            Err(Error::NonzeroDiagonal { i: 0 })
        );
        let m = from_ints(&[&[0, 0], &[0, 0]]);
        assert_eq!(
            MetricSpace::new(names(2), m),
            Err(Error::NonPositive { i: 0, j: 1 })
        );
        let m = from_ints(&[&[0, 1], &[1]]);
        assert!(matches!(
            MetricSpace::new(names(2), m),
            Err(Error::NotSquare { .. })
        ));
        assert_eq!(MetricSpace::new(vec![], vec![]), Err(Error::Empty));
    }

    #[test]
    fn strong_triangle_failure_on_one_one_three() {
        // 1, 1, 3 breaks even the ordinary triangle inequality, so check the
        // rank-level test directly on an unchecked space.
        let m = from_ints(&[&[0, 1, 3], &[1, 0, 1], &[3, 1, 0]]);
        let s = MetricSpace::from_matrix_unchecked(names(3), &m);
        assert_eq!(s.strong_triangle_witness(), Some((0, 2, 1)));
        assert!(!s.is_ultrametric_multipartite());
    }

    #[test]
    fn max_metric_on_points_of_unit_interval() {
        let x = space_from_sequence(&[int(1), ratio(1, 2)]).unwrap();
        assert_eq!(x.len(), 3);
        assert!(x.is_ultrametric_triangle());
        assert_eq!(x.d(1, 2), &int(1));
        assert_eq!(x.d(0, 2), &ratio(1, 2));
    }

    #[test]
    fn diameters() {
        let x = four_point();
        assert_eq!(x.diam(&[1, 2]).unwrap(), int(1));
        assert_eq!(x.diam(&[3]).unwrap(), int(0));
        assert_eq!(x.diam(&[0, 1, 2, 3]).unwrap(), int(2));
        assert_eq!(x.diam(&[]), Err(Error::EmptySubset));
        assert_eq!(
            x.diam(&[7]),
            Err(Error::PointOutOfRange { index: 7, len: 4 })
        );
        for a in 0..4 {
            assert_eq!(x.diam_from(a, &[0, 1, 2, 3]).unwrap(), int(2));
        }
    }

    #[test]
    fn diametrical_partitions() {
        let x = four_point();
        let p = x.diametrical_partition(&[0, 1, 2, 3]).unwrap().unwrap();
        assert_eq!(p.parts, vec![vec![0], vec![1, 2, 3]]);
        assert_eq!(p.threshold, int(2));
        let p = x.diametrical_partition(&[3, 1, 2]).unwrap().unwrap();
        assert_eq!(p.parts, vec![vec![1], vec![2], vec![3]]);
        assert_eq!(x.diametrical_partition(&[2]).unwrap(), None);
    }

    #[test]
    fn threshold_partitions() {
        let x = four_point();
        let p = x.threshold_partition(&int(2)).unwrap().unwrap();
        assert_eq!(p.parts, vec![vec![0], vec![1, 2, 3]]);
        let p = x.threshold_partition(&int(1)).unwrap().unwrap();
        assert_eq!(p.parts, vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(x.threshold_partition(&int(3)).unwrap(), None);
        let p = x.threshold_partition(&ratio(3, 2)).unwrap().unwrap();
        assert_eq!(p.parts.len(), 2);
        assert!(x.threshold_partition(&int(0)).is_err());
    }

    #[test]
    fn partition_failure_reports_transitivity_witness() {
        let m = from_ints(&[&[0, 1, 2], &[1, 0, 1], &[2, 1, 0]]);
        let s = MetricSpace::new(names(3), m).unwrap();
        match s.threshold_partition(&int(2)) {
            Err(Error::NotEquivalence { u, v, w, .. }) => {
                assert!(s.rank(u, v) < 2 && s.rank(v, w) < 2 && s.rank(u, w) >= 2);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn sequences() {
        let x = space_from_sequence(&[int(1), ratio(1, 2), ratio(1, 4)]).unwrap();
        assert_eq!(x.len(), 4);
        assert_eq!(
            x.distance_set().values(),
            &[int(0), ratio(1, 4), ratio(1, 2), int(1)]
        );
        assert_eq!(
            space_from_sequence(&[]).unwrap().distance_set().values(),
            &[int(0)]
        );
        let x = space_from_sequence(&[int(1)]).unwrap();
        assert_eq!(x.d(0, 1), &int(1));
        assert_eq!(
            space_from_sequence(&[int(1), int(1)]),
            Err(Error::BadSequence(1))
        );
        assert_eq!(space_from_sequence(&[int(0)]), Err(Error::BadSequence(0)));
    }

    #[test]
    fn decimal_matrix_via_parse() {
        let m = vec![
            vec![
                rational::parse("0").unwrap(),
                rational::parse("0.5").unwrap(),
            ],
            vec![
                rational::parse("1/2").unwrap(),
                rational::parse("0").unwrap(),
            ],
        ];
        assert!(UltrametricSpace::new(names(2), m).is_ok());
    }

    #[test]
    fn space_json_round_trip() {
        let text = r#"{"points":["a","b","c"],"matrix":[["0","0.5","1"],["1/2","0","1"],["1","1.0","0"]]}"#;
        let json = SpaceJson::parse(text).unwrap();
        let x = json.to_ultrametric().unwrap();
        assert_eq!(x.d(0, 1), &ratio(1, 2));
        let out = SpaceJson::from(x.metric()).to_json();
        assert_eq!(
            out,
            r#"{"points":["a","b","c"],"matrix":[["0/1","1/2","1/1"],["1/2","0/1","1/1"],["1/1","1/1","0/1"]]}"#
        );
        assert_eq!(SpaceJson::parse(&out).unwrap().to_ultrametric().unwrap(), x);
        assert!(matches!(
            SpaceJson::parse("{\"points\":1}"),
            Err(Error::Parse(_))
        ));
        let bad = r#"{"points":["a","b"],"matrix":[["0","x"],["1","0"]]}"#;
        assert!(SpaceJson::parse(bad).unwrap().to_metric().is_err());
    }
}
