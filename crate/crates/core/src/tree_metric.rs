//! Metrics generated by labeled trees, and the checks that decide when a
//! labeled tree or a poset comes from a finite ultrametric space.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::balls::{ballean, Ball, BallPoset};
use crate::error::{Error, Result};
use crate::metric::UltrametricSpace;
use crate::poset;
use crate::rational::Rational;
use crate::tree::{LabeledTree, Rooted};

/// `d_l(u, v)`: the largest label on the path from `u` to `v`, endpoints
/// included, and 0 on the diagonal.
pub fn path_max_matrix(tree: &LabeledTree) -> Vec<Vec<Rational>> {
    let n = tree.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for (s, row) in out.iter_mut().enumerate() {
        let mut stack = vec![(s, usize::MAX, tree.label(s).clone())];
        while let Some((v, from, best)) = stack.pop() {
            if v != s {
                row[v] = best.clone();
            }
            for &w in tree.neighbors(v) {
                if w != from {
                    let next = if tree.label(w) > &best {
                        tree.label(w).clone()
                    } else {
                        best.clone()
                    };
                    stack.push((w, v, next));
                }
            }
        }
    }
    out
}

/// Result of evaluating the path-max function of a labeled tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathMaxMetric {
    Ultrametric(UltrametricSpace),
    /// Some edge has both endpoints labeled 0, so two distinct vertices sit at
    /// distance 0.
    Pseudo {
        matrix: Vec<Vec<Rational>>,
        zero_pair: (usize, usize),
    },
}

pub fn path_max_metric(tree: &LabeledTree) -> PathMaxMetric {
    let matrix = path_max_matrix(tree);
    let zero_edge = tree
        .edges()
        .into_iter()
        .find(|&(u, v)| tree.label(u).is_zero() && tree.label(v).is_zero());
    match zero_edge {
        Some(zero_pair) => PathMaxMetric::Pseudo { matrix, zero_pair },
        None => {
            let names = (0..tree.len()).map(|v| v.to_string()).collect();
            let space = UltrametricSpace::new(names, matrix)
                .expect("path-max with a positive endpoint on every edge");
            PathMaxMetric::Ultrametric(space)
        }
    }
}

/// Why a labeling fails to be monotone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonotoneViolation {
    NotDecreasing { parent: usize, child: usize },
    PositiveLeaf(usize),
}

fn monotone_violation_at(rooted: &Rooted<'_>) -> Option<MonotoneViolation> {
    let tree = rooted.tree;
    for &v in &rooted.order {
        for &c in &rooted.children[v] {
            if tree.label(c) >= tree.label(v) {
                return Some(MonotoneViolation::NotDecreasing {
                    parent: v,
                    child: c,
                });
            }
        }
        if rooted.is_leaf(v) && tree.label(v).is_positive() {
            return Some(MonotoneViolation::PositiveLeaf(v));
        }
    }
    None
}

/// Labels strictly decrease from parent to child and every leaf is labeled 0.
/// For finite trees this is the same as every maximal chain having labels
/// that decrease to 0.
pub fn monotone_violation(tree: &LabeledTree) -> Result<Option<MonotoneViolation>> {
    Ok(monotone_violation_at(&tree.rooted()?))
}

pub fn is_monotone_labeling(tree: &LabeledTree) -> Result<bool> {
    Ok(monotone_violation(tree)?.is_none())
}

/// Why a particular root does not make the tree a labeled representing tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootRejection {
    SingleChild(usize),
    Labeling(MonotoneViolation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representability {
    Accepted {
        root: usize,
    },
    /// One reason per candidate root, in vertex order.
    Rejected {
        reasons: Vec<(usize, RootRejection)>,
    },
}

impl Representability {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Representability::Accepted { .. })
    }
}

/// Decides whether a free labeled tree is, for some root, isomorphic to the
/// labeled representing tree of a finite ultrametric space: no vertex may
/// have exactly one direct successor and the labeling must be monotone. The
/// smallest such root is returned.
pub fn check_representable(tree: &LabeledTree) -> Representability {
    let mut reasons = Vec::new();
    for root in 0..tree.len() {
        let rooted = tree.rooted_at(root);
        if let Some(v) = (0..tree.len()).find(|&v| rooted.out_degree(v) == 1) {
            reasons.push((root, RootRejection::SingleChild(v)));
            continue;
        }
        match monotone_violation_at(&rooted) {
            Some(m) => reasons.push((root, RootRejection::Labeling(m))),
            None => return Representability::Accepted { root },
        }
    }
    Representability::Rejected { reasons }
}

/// A root-to-leaf vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MaxChain(pub Vec<usize>);

impl MaxChain {
    pub fn leaf(&self) -> usize {
        *self.0.last().expect("chains are nonempty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One chain per leaf, ordered by leaf index.
pub fn maximal_chains(tree: &LabeledTree) -> Result<Vec<MaxChain>> {
    let rooted = tree.rooted()?;
    Ok(rooted
        .leaves()
        .into_iter()
        .map(|leaf| {
            let mut path = rooted.path_to_root(leaf);
            path.reverse();
            MaxChain(path)
        })
        .collect())
}

/// Maximal chains with `d(C1, C2)` the label of the deepest common vertex.
#[derive(Debug, Clone)]
pub struct MaxChainSpace {
    pub chains: Vec<MaxChain>,
    pub space: UltrametricSpace,
}

pub fn reconstruct_space(tree: &LabeledTree) -> Result<MaxChainSpace> {
    let rooted = tree.rooted()?;
    if let Some(m) = monotone_violation_at(&rooted) {
        return Err(Error::NonMonotone(format!("{m:?}")));
    }
    let chains = maximal_chains(tree)?;
    let leaves: Vec<usize> = chains.iter().map(MaxChain::leaf).collect();
    let names = leaves.iter().map(|v| format!("c{v}")).collect();
    let matrix = leaves
        .iter()
        .map(|&a| {
            leaves
                .iter()
                .map(|&b| {
                    if a == b {
                        Rational::zero()
                    } else {
                        tree.label(rooted.lca(a, b)).clone()
                    }
                })
                .collect()
        })
        .collect();
    let space = UltrametricSpace::new(names, matrix)?;
    Ok(MaxChainSpace { chains, space })
}

/// Poset JSON: `{"elements": [string], "covers": [[lower, upper]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(usize, usize)>,
}

impl From<&BallPoset> for PosetJson {
    fn from(p: &BallPoset) -> Self {
        let elements = p
            .ballean()
            .balls()
            .iter()
            .map(|b| {
                let pts: Vec<String> = b.points().iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", pts.join(","))
            })
            .collect();
        PosetJson {
            elements,
            covers: p.covers(),
        }
    }
}

/// Outcome of each condition characterizing ballean posets of finite
/// ultrametric spaces, with the elements that break it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetCheckReport {
    pub largest: Option<usize>,
    /// Elements other than the largest whose number of upper covers is not 1.
    pub upper_cover_failures: Vec<usize>,
    /// Non-minimal elements with fewer than two lower covers.
    pub lower_cover_failures: Vec<usize>,
    /// The order equals the transitive closure of its covering relation.
    pub closure_of_covers: bool,
}

impl PosetCheckReport {
    pub fn has_largest(&self) -> bool {
        self.largest.is_some()
    }

    pub fn unique_upper_covers(&self) -> bool {
        self.upper_cover_failures.is_empty()
    }

    pub fn enough_lower_covers(&self) -> bool {
        self.lower_cover_failures.is_empty()
    }

    /// Order-isomorphic to the ballean of some finite ultrametric space.
    pub fn is_ballean_poset(&self) -> bool {
        self.unique_upper_covers() && self.enough_lower_covers()
    }
}

/// Checks a finite poset given by (not necessarily minimal) cover pairs.
pub fn check_ballean_poset(poset: &PosetJson) -> Result<PosetCheckReport> {
    let n = poset.elements.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    if let Some(&(a, b)) = poset.covers.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(Error::VertexOutOfRange(a.max(b)));
    }
    let leq = poset::reflexive_closure(n, &poset.covers);
    if let Some((a, b)) = poset::antisymmetry_witness(&leq) {
        return Err(Error::NotPartialOrder { a, b });
    }
    let covers = poset::covering_pairs(&leq);
    let largest = (0..n).find(|&l| (0..n).all(|p| leq[p][l]));
    let upper_cover_failures = (0..n)
        .filter(|&p| Some(p) != largest)
        .filter(|&p| covers.iter().filter(|&&(lo, _)| lo == p).count() != 1)
        .collect();
    let lower_cover_failures = (0..n)
        .filter(|&b| (0..n).any(|p| p != b && leq[p][b]))
        .filter(|&b| covers.iter().filter(|&&(_, up)| up == b).count() < 2)
        .collect();
    let closure_of_covers = poset::reflexive_closure(n, &covers) == leq;
    Ok(PosetCheckReport {
        largest,
        upper_cover_failures,
        lower_cover_failures,
        closure_of_covers,
    })
}

/// Every ball of positive diameter has a one-point part in its diametrical
/// graph, i.e. it is a sphere together with its center. Returns the first
/// ball that fails.
pub fn sphere_plus_center_witness(space: &UltrametricSpace) -> Option<Ball> {
    ballean(space).balls().iter().find_map(|b| {
        let partition = space
            .diametrical_partition(b.points())
            .expect("balls of an ultrametric space")?;
        (!partition.has_singleton_part()).then(|| b.clone())
    })
}

pub fn sphere_plus_center_condition(space: &UltrametricSpace) -> bool {
    sphere_plus_center_witness(space).is_none()
}

/// Largest space accepted by [`find_path_max_realization`].
pub const REALIZATION_CAP: usize = 7;

/// Exhaustive search for a labeled tree on the points of `space` whose
/// path-max metric equals `d`. Trees are enumerated through Prüfer sequences;
/// each vertex label ranges over 0 and the distances not exceeding its
/// nearest-neighbour distance, which loses no solutions.
pub fn find_path_max_realization(space: &UltrametricSpace) -> Result<Option<LabeledTree>> {
    let n = space.len();
    if n > REALIZATION_CAP {
        return Err(Error::SizeCap {
            size: n,
            cap: REALIZATION_CAP,
        });
    }
    let values = space.distance_set();
    if n == 1 {
        return Ok(Some(LabeledTree::new(vec![Rational::zero()], &[], None)?));
    }
    let candidates: Vec<Vec<usize>> = space
        .points()
        .map(|v| {
            let nearest = space
                .points()
                .filter(|&u| u != v)
                .map(|u| space.rank(u, v))
                .min()
                .unwrap_or(0);
            (0..=nearest).collect()
        })
        .collect();
    for edges in labeled_trees(n) {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let paths = all_paths(&adjacency);
        let mut labels = vec![0usize; n];
        if search_labels(space, &edges, &paths, &candidates, &mut labels, 0) {
            let labels = labels.iter().map(|&r| values.values()[r].clone()).collect();
            return Ok(Some(LabeledTree::new(labels, &edges, None)?));
        }
    }
    Ok(None)
}

fn search_labels(
    space: &UltrametricSpace,
    edges: &[(usize, usize)],
    paths: &[Vec<Vec<usize>>],
    candidates: &[Vec<usize>],
    labels: &mut Vec<usize>,
    v: usize,
) -> bool {
    let n = labels.len();
    if v == n {
        return (0..n).all(|a| {
            (a + 1..n)
                .all(|b| paths[a][b].iter().map(|&w| labels[w]).max() == Some(space.rank(a, b)))
        });
    }
    for &c in &candidates[v] {
        labels[v] = c;
        // on an edge the path is just its endpoints
        let edges_ok = edges
            .iter()
            .filter(|&&(a, b)| a.max(b) == v)
            .all(|&(a, b)| labels[a].max(labels[b]) == space.rank(a, b));
        if edges_ok && search_labels(space, edges, paths, candidates, labels, v + 1) {
            return true;
        }
    }
    false
}

fn all_paths(adjacency: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let n = adjacency.len();
    let mut out = vec![vec![Vec::new(); n]; n];
    for s in 0..n {
        let mut parent = vec![usize::MAX; n];
        let mut stack = vec![s];
        parent[s] = s;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        for t in 0..n {
            let mut path = vec![t];
            let mut cur = t;
            while cur != s {
                cur = parent[cur];
                path.push(cur);
            }
            out[s][t] = path;
        }
    }
    out
}

/// All `n^(n-2)` labeled trees on `0..n` (for `n >= 2`) as edge lists.
pub fn labeled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n < 2 {
        return vec![Vec::new()];
    }
    if n == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut out = Vec::new();
    let mut seq = vec![0usize; n - 2];
    loop {
        out.push(prufer_decode(&seq, n));
        // odometer increment
        let mut i = 0;
        loop {
            if i == seq.len() {
                return out;
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = *leaves.iter().next().expect("a leaf always exists");
        leaves.remove(&leaf);
        edges.push((leaf.min(s), leaf.max(s)));
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    edges
}
