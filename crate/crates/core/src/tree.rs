//! Labeled trees and the representing tree of a finite ultrametric space.
//!
//! The representing tree has the balls of the space as vertices. It is built
//! top-down: the root is the whole space, and the children of a ball with
//! positive diameter are the parts of its diametrical graph. Each vertex is
//! labeled with the diameter of its ball.
//!
//! Vertices are numbered in breadth-first order with siblings sorted by their
//! least point, so the same space always yields the same tree.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::balls::ballean;
use crate::error::{Error, Result};
use crate::metric::{PointId, UltrametricSpace};
use crate::poset;
use crate::rational::{self, Rational};

/// A finite tree with nonnegative rational vertex labels and an optional root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    labels: Vec<Rational>,
    adjacency: Vec<Vec<usize>>,
    root: Option<usize>,
    balls: Option<Vec<Vec<PointId>>>,
    truncated: bool,
}

impl LabeledTree {
    /// Validates that `edges` form a tree on `0..labels.len()`.
    pub fn new(
        labels: Vec<Rational>,
        edges: &[(usize, usize)],
        root: Option<usize>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if let Some(v) = labels.iter().position(|l| l.is_negative()) {
            return Err(Error::NegativeLabel(v));
        }
        if let Some(r) = root.filter(|&r| r >= n) {
            return Err(Error::VertexOutOfRange(r));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange(u.max(v)));
            }
            if u == v {
                return Err(Error::NotATree(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::NotATree(format!("repeated edge {{{u}, {v}}}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let tree = LabeledTree {
            labels,
            adjacency,
            root,
            balls: None,
            truncated: false,
        };
        if tree.component_size(0) != n {
            return Err(Error::Disconnected);
        }
        if edges.len() != n - 1 {
            return Err(Error::NotATree(format!(
                "{} edges on {} vertices",
                edges.len(),
                n
            )));
        }
        Ok(tree)
    }

    fn component_size(&self, start: usize) -> usize {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        count
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Rational] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &Rational {
        &self.labels[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    /// Point sets of the balls behind each vertex, for representing trees.
    pub fn balls(&self) -> Option<&[Vec<PointId>]> {
        self.balls.as_deref()
    }

    /// Set for finite prefixes of infinite trees, whose leaves keep positive
    /// labels.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn with_root(mut self, root: Option<usize>) -> Result<Self> {
        if let Some(r) = root.filter(|&r| r >= self.len()) {
            return Err(Error::VertexOutOfRange(r));
        }
        self.root = root;
        Ok(self)
    }

    pub fn with_balls(mut self, balls: Vec<Vec<PointId>>) -> Result<Self> {
        if balls.len() != self.len() {
            return Err(Error::Invalid(format!(
                "{} balls for {} vertices",
                balls.len(),
                self.len()
            )));
        }
        self.balls = Some(balls);
        Ok(self)
    }

    pub fn with_truncation(mut self, truncated: bool) -> Self {
        self.truncated = truncated;
        self
    }

    pub fn with_labels(mut self, labels: Vec<Rational>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::Invalid(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.len()
            )));
        }
        if let Some(v) = labels.iter().position(|l| l.is_negative()) {
            return Err(Error::NegativeLabel(v));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Undirected edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.len().saturating_sub(1));
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Parent/child structure seen from the stored root.
    pub fn rooted(&self) -> Result<Rooted<'_>> {
        let root = self.root.ok_or(Error::RootRequired)?;
        Ok(self.rooted_at(root))
    }

    /// Parent/child structure seen from an arbitrary vertex.
    pub fn rooted_at(&self, root: usize) -> Rooted<'_> {
        let n = self.len();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut children = vec![Vec::new(); n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    depth[w] = depth[v] + 1;
                    children[v].push(w);
                    queue.push_back(w);
                }
            }
        }
        Rooted {
            tree: self,
            root,
            parent,
            depth,
            children,
            order,
        }
    }
}

/// A tree viewed from a chosen root.
#[derive(Debug, Clone)]
pub struct Rooted<'a> {
    pub tree: &'a LabeledTree,
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    pub children: Vec<Vec<usize>>,
    /// Breadth-first order from the root.
    pub order: Vec<usize>,
}

impl Rooted<'_> {
    /// Number of direct successors.
    pub fn out_degree(&self, v: usize) -> usize {
        self.children[v].len()
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.tree.len()).filter(|&v| self.is_leaf(v)).collect()
    }

    /// Vertices from `v` up to the root, inclusive.
    pub fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path
    }

    /// Deepest common vertex of the two root paths.
    pub fn lca(&self, u: usize, v: usize) -> usize {
        let above_u: BTreeSet<usize> = self.path_to_root(u).into_iter().collect();
        self.path_to_root(v)
            .into_iter()
            .find(|w| above_u.contains(w))
            .expect("root is common")
    }
}

/// The representing tree of `space`, rooted at the whole space and labeled by
/// ball diameters.
pub fn build_representing_tree(space: &UltrametricSpace) -> Result<LabeledTree> {
    let mut balls: Vec<Vec<PointId>> = vec![space.points().collect()];
    let mut labels = vec![space.diam(&balls[0])?];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let Some(partition) = space.diametrical_partition(&balls[v])? else {
            continue;
        };
        for part in partition.parts {
            let child = balls.len();
            labels.push(space.diam(&part)?);
            balls.push(part);
            edges.push((v, child));
            queue.push_back(child);
        }
    }
    LabeledTree::new(labels, &edges, Some(0))?.with_balls(balls)
}

/// Something wrong with a representing tree, with the vertex at fault.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeViolation {
    NotATree,
    NotRooted,
    MissingBalls,
    /// Vertex sets and ballean differ; the listed ball is in one but not the other.
    BalleanMismatch(Vec<PointId>),
    TwoVertices,
    SeveralDegreeTwo(Vec<usize>),
    SingleChild(usize),
    DegreeFormula {
        vertex: usize,
        expected: usize,
        actual: usize,
    },
    LeafLabel(usize),
    LabelNotDiameter(usize),
    LevelMismatch {
        vertex: usize,
        depth: usize,
        level: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TreeReport {
    pub violations: Vec<TreeViolation>,
}

impl TreeReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structural facts every representing tree satisfies: it is a
/// tree on the ballean, degree 2 occurs at most once, no vertex has exactly
/// one child, the degree of a ball is fixed by the number of parts of its
/// diametrical graph, leaves are exactly the 0-labeled vertices, labels are
/// diameters and depth equals the number of balls strictly above.
pub fn verify_tree_invariants(tree: &LabeledTree, space: &UltrametricSpace) -> TreeReport {
    let mut violations = Vec::new();
    let n = tree.len();
    if tree.edges().len() + 1 != n || tree.component_size(0) != n {
        violations.push(TreeViolation::NotATree);
    }
    if n == 2 {
        violations.push(TreeViolation::TwoVertices);
    }
    let degree_two: Vec<usize> = (0..n).filter(|&v| tree.degree(v) == 2).collect();
    if degree_two.len() > 1 {
        violations.push(TreeViolation::SeveralDegreeTwo(degree_two));
    }
    let Ok(rooted) = tree.rooted() else {
        violations.push(TreeViolation::NotRooted);
        return TreeReport { violations };
    };
    for v in 0..n {
        if rooted.out_degree(v) == 1 {
            violations.push(TreeViolation::SingleChild(v));
        }
        if rooted.is_leaf(v) != tree.label(v).is_zero() {
            violations.push(TreeViolation::LeafLabel(v));
        }
    }
    let Some(balls) = tree.balls() else {
        violations.push(TreeViolation::MissingBalls);
        return TreeReport { violations };
    };
    let expected = ballean(space);
    let ours: BTreeSet<&[PointId]> = balls.iter().map(Vec::as_slice).collect();
    let theirs: BTreeSet<&[PointId]> = expected.point_sets().collect();
    if let Some(b) = ours.symmetric_difference(&theirs).next() {
        violations.push(TreeViolation::BalleanMismatch(b.to_vec()));
    }
    if ours.len() != n {
        violations.push(TreeViolation::BalleanMismatch(Vec::new()));
    }
    for (v, ball) in balls.iter().enumerate() {
        let Ok(diam) = space.diam(ball) else {
            violations.push(TreeViolation::LabelNotDiameter(v));
            continue;
        };
        if &diam != tree.label(v) {
            violations.push(TreeViolation::LabelNotDiameter(v));
        }
        let parts = match space.diametrical_partition(ball) {
            Ok(p) => p.map_or(0, |p| p.len()),
            Err(_) => 0,
        };
        let is_root = v == rooted.root;
        let expected_degree = match (is_root, diam.is_zero()) {
            (true, true) => 0,
            (true, false) => parts,
            (false, false) => parts + 1,
            (false, true) => 1,
        };
        if expected_degree != tree.degree(v) {
            violations.push(TreeViolation::DegreeFormula {
                vertex: v,
                expected: expected_degree,
                actual: tree.degree(v),
            });
        }
        let level = expected
            .point_sets()
            .filter(|b| b.len() > ball.len() && ball.iter().all(|x| b.binary_search(x).is_ok()))
            .count();
        if level != rooted.depth[v] {
            violations.push(TreeViolation::LevelMismatch {
                vertex: v,
                depth: rooted.depth[v],
                level,
            });
        }
    }
    TreeReport { violations }
}

/// Adjacency in the tree coincides with "strictly nested with no ball in
/// between", checked over every pair of balls.
pub fn edge_characterization_check(space: &UltrametricSpace, tree: &LabeledTree) -> bool {
    let Some(balls) = tree.balls() else {
        return false;
    };
    let all = ballean(space);
    let subset = |a: &[PointId], b: &[PointId]| a.iter().all(|x| b.binary_search(x).is_ok());
    let covered = |lo: &[PointId], up: &[PointId]| {
        lo.len() < up.len()
            && subset(lo, up)
            && !all
                .point_sets()
                .any(|m| m.len() > lo.len() && m.len() < up.len() && subset(lo, m) && subset(m, up))
    };
    for (u, bu) in balls.iter().enumerate() {
        for (v, bv) in balls.iter().enumerate() {
            let adjacent = tree.is_adjacent(u, v);
            let expected = u != v && (covered(bu, bv) || covered(bv, bu));
            if adjacent != expected {
                return false;
            }
        }
    }
    true
}

/// Depth of each vertex of a rooted tree.
pub fn levels(tree: &LabeledTree) -> Result<Vec<usize>> {
    Ok(tree.rooted()?.depth)
}

/// The order `v1 <= v2` iff the root path of `v2` is contained in the root
/// path of `v1`, i.e. `v2` lies on the way from `v1` to the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeOrder {
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
}

impl TreeOrder {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn incomparable(&self, a: usize, b: usize) -> bool {
        !self.leq[a][b] && !self.leq[b][a]
    }

    /// Covering pairs `(lower, upper)`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn relation(&self) -> &[Vec<bool>] {
        &self.leq
    }
}

pub fn tree_order(tree: &LabeledTree) -> Result<TreeOrder> {
    let rooted = tree.rooted()?;
    let n = tree.len();
    let paths: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| rooted.path_to_root(v).into_iter().collect())
        .collect();
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| paths[b].is_subset(&paths[a])).collect())
        .collect();
    let covers = poset::covering_pairs(&leq);
    Ok(TreeOrder { leq, covers })
}

/// Which structural property of a rooted-tree order failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderViolation {
    RootNotLargest,
    UpperCovers { vertex: usize, count: usize },
    NotClosureOfCovers,
    CoverWithoutEdge(usize, usize),
    EdgeWithoutCover(usize, usize),
    DiffersFromInclusion(usize, usize),
}

/// Checks that the root is the largest element, that every other vertex has a
/// unique upper cover, that the order is the transitive closure of its
/// covering relation, and that covering pairs are exactly the edges. When the
/// tree carries balls, the order must also agree with ball inclusion.
pub fn verify_tree_order(tree: &LabeledTree, order: &TreeOrder) -> Result<Vec<OrderViolation>> {
    let rooted = tree.rooted()?;
    let n = tree.len();
    let mut out = Vec::new();
    if !(0..n).all(|v| order.leq(v, rooted.root)) {
        out.push(OrderViolation::RootNotLargest);
    }
    for v in (0..n).filter(|&v| v != rooted.root) {
        let count = order.covers().iter().filter(|&&(lo, _)| lo == v).count();
        if count != 1 {
            out.push(OrderViolation::UpperCovers { vertex: v, count });
        }
    }
    if poset::reflexive_closure(n, order.covers()) != order.leq {
        out.push(OrderViolation::NotClosureOfCovers);
    }
    for &(lo, up) in order.covers() {
        if !tree.is_adjacent(lo, up) {
            out.push(OrderViolation::CoverWithoutEdge(lo, up));
        }
    }
    for (u, v) in tree.edges() {
        if !order.covers().contains(&(u, v)) && !order.covers().contains(&(v, u)) {
            out.push(OrderViolation::EdgeWithoutCover(u, v));
        }
    }
    if let Some(balls) = tree.balls() {
        for a in 0..n {
            for b in 0..n {
                let included = balls[a].iter().all(|x| balls[b].binary_search(x).is_ok());
                if included != order.leq(a, b) {
                    out.push(OrderViolation::DiffersFromInclusion(a, b));
                }
            }
        }
    }
    Ok(out)
}

/// Tree JSON:
/// `{"root": int|null, "labels": ["p/q"], "edges": [[int,int]], "ball_points": [[int]]|null}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub root: Option<usize>,
    #[serde(with = "rational::serde_pq_vec")]
    pub labels: Vec<Rational>,
    pub edges: Vec<(usize, usize)>,
    pub ball_points: Option<Vec<Vec<PointId>>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub truncated: bool,
}

impl From<&LabeledTree> for TreeJson {
    fn from(tree: &LabeledTree) -> Self {
        let edges = match tree.rooted() {
            Ok(rooted) => {
                let mut e: Vec<(usize, usize)> = (0..tree.len())
                    .filter_map(|v| rooted.parent[v].map(|p| (p, v)))
                    .collect();
                e.sort_by_key(|&(_, child)| child);
                e
            }
            Err(_) => tree.edges(),
        };
        TreeJson {
            root: tree.root(),
            labels: tree.labels().to_vec(),
            edges,
            ball_points: tree.balls().map(<[_]>::to_vec),
            truncated: tree.is_truncated(),
        }
    }
}

impl TryFrom<TreeJson> for LabeledTree {
    type Error = Error;

    fn try_from(json: TreeJson) -> Result<Self> {
        let tree =
            LabeledTree::new(json.labels, &json.edges, json.root)?.with_truncation(json.truncated);
        match json.ball_points {
            Some(balls) => tree.with_balls(balls),
            None => Ok(tree),
        }
    }
}

/// Graphviz rendering: labels on nodes, leaves drawn as boxes.
pub fn to_dot(tree: &LabeledTree) -> String {
    let leaf = |v: usize| match tree.rooted() {
        Ok(r) => r.is_leaf(v),
        Err(_) => tree.degree(v) <= 1,
    };
    let mut out = String::from("graph T {\n  node [shape=circle];\n");
    for v in 0..tree.len() {
        let shape = if leaf(v) { ", shape=box" } else { "" };
        let _ = writeln!(
            out,
            "  {v} [label=\"{}\"{shape}];",
            rational::format(tree.label(v))
        );
    }
    for (u, v) in TreeJson::from(tree).edges {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::fixtures::{four_point, two_pairs};
    use crate::rational::int;

    #[test]
    fn four_point_tree_shape() {
        let t = build_representing_tree(&four_point()).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(
            t.labels(),
            &[int(2), int(0), int(1), int(0), int(0), int(0)]
        );
        assert_eq!(levels(&t).unwrap(), vec![0, 1, 1, 2, 2, 2]);
        assert_eq!(t.edges(), vec![(0, 1), (0, 2), (2, 3), (2, 4), (2, 5)]);
        assert_eq!(t.balls().unwrap()[2], vec![1, 2, 3]);
        assert!(verify_tree_invariants(&t, &four_point()).is_ok());
        assert!(edge_characterization_check(&four_point(), &t));
    }

    #[test]
    fn single_point_tree() {
        let x = UltrametricSpace::from_matrix(vec![vec![int(0)]]).unwrap();
        let t = build_representing_tree(&x).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.labels(), &[int(0)]);
        assert!(t.edges().is_empty());
        assert!(verify_tree_invariants(&t, &x).is_ok());
    }

    #[test]
    fn single_child_is_reported() {
        // root -> middle -> {leaf a, leaf b}, plus a vertex with one child.
        let labels = vec![int(2), int(1), int(0), int(0), int(0)];
        let t = LabeledTree::new(labels, &[(0, 1), (1, 2), (1, 3), (0, 4)], Some(0)).unwrap();
        let report = verify_tree_invariants(&t, &two_pairs());
        assert!(!report
            .violations
            .iter()
            .any(|v| matches!(v, TreeViolation::SingleChild(_))));
        let labels = vec![int(2), int(1), int(0), int(0), int(1), int(0)];
        let t =
            LabeledTree::new(labels, &[(0, 1), (1, 2), (1, 3), (0, 4), (4, 5)], Some(0)).unwrap();
        let report = verify_tree_invariants(&t, &two_pairs());
        assert!(report.violations.contains(&TreeViolation::SingleChild(4)));
    }

    #[test]
    fn rejects_non_trees() {
        assert_eq!(
            LabeledTree::new(vec![int(0); 3], &[(0, 1)], None),
            Err(Error::Disconnected)
        );
        assert!(matches!(
            LabeledTree::new(vec![int(0); 3], &[(0, 1), (1, 2), (2, 0)], None),
            Err(Error::NotATree(_))
        ));
        assert_eq!(
            LabeledTree::new(vec![int(-1)], &[], None),
            Err(Error::NegativeLabel(0))
        );
        assert_eq!(
            LabeledTree::new(vec![int(0)], &[], None)
                .unwrap()
                .rooted()
                .unwrap_err(),
            Error::RootRequired
        );
    }

    #[test]
    fn order_of_four_point_tree() {
        let t = build_representing_tree(&four_point()).unwrap();
        let order = tree_order(&t).unwrap();
        // vertex 3 is {x2}, 2 is {x2,x3,x4}, 1 is {x1}
        assert!(order.leq(3, 2) && order.leq(2, 0) && order.leq(3, 0));
        assert!(order.incomparable(1, 3));
        assert!((0..6).all(|v| order.leq(v, 0)));
        assert!(verify_tree_order(&t, &order).unwrap().is_empty());
    }

    #[test]
    fn two_pairs_tree() {
        let x = two_pairs();
        let t = build_representing_tree(&x).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.degree(0), 2);
        assert!(verify_tree_invariants(&t, &x).is_ok());
    }

    #[test]
    fn json_and_dot() {
        let t = build_representing_tree(&four_point()).unwrap();
        let json = serde_json::to_string(&TreeJson::from(&t)).unwrap();
        assert_eq!(
            json,
            r#"{"root":0,"labels":["2/1","0/1","1/1","0/1","0/1","0/1"],"edges":[[0,1],[0,2],[2,3],[2,4],[2,5]],"ball_points":[[0,1,2,3],[0],[1,2,3],[1],[2],[3]]}"#
        );
        let back = LabeledTree::try_from(serde_json::from_str::<TreeJson>(&json).unwrap()).unwrap();
        assert_eq!(back, t);
        let dot = to_dot(&t);
        assert!(dot.contains("0 [label=\"2/1\"];"));
        assert!(dot.contains("1 [label=\"0/1\", shape=box];"));
        assert_eq!(dot.matches(" -- ").count(), 5);
    }
}
