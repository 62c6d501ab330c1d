//! Isometry and weak similarity of finite ultrametric spaces, and maps on
//! distances that keep a space ultrametric.
//!
//! Two finite ultrametric spaces are isometric exactly when their labeled
//! representing trees are isomorphic, which is decided here by comparing
//! canonical codes. A brute-force permutation search is kept alongside as an
//! independent check for small spaces.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::metric::{PointId, UltrametricSpace};
use crate::rational::{self, Rational};
use crate::tree::{build_representing_tree, LabeledTree};

/// Canonical string of a rooted labeled tree: `(label child child ...)` with
/// children sorted, so equal codes mean isomorphic trees.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// SHA-256 of the code, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.0.as_bytes()))
    }
}

pub fn canonical_code(tree: &LabeledTree) -> Result<CanonicalCode> {
    let rooted = tree.rooted()?;
    let mut codes: Vec<String> = vec![String::new(); tree.len()];
    for &v in rooted.order.iter().rev() {
        let mut kids: Vec<String> = rooted.children[v]
            .iter()
            .map(|&c| std::mem::take(&mut codes[c]))
            .collect();
        kids.sort_unstable();
        let mut code = format!("({}", rational::format(tree.label(v)));
        for k in kids {
            code.push(' ');
            code.push_str(&k);
        }
        code.push(')');
        codes[v] = code;
    }
    Ok(CanonicalCode(std::mem::take(&mut codes[rooted.root])))
}

/// Canonical code of the labeled representing tree of `space`.
pub fn space_code(space: &UltrametricSpace) -> CanonicalCode {
    let tree = build_representing_tree(space).expect("ultrametric spaces always partition");
    canonical_code(&tree).expect("representing trees are rooted")
}

pub fn spaces_isometric(x: &UltrametricSpace, y: &UltrametricSpace) -> bool {
    x.len() == y.len() && space_code(x) == space_code(y)
}

/// Interned subtree shapes: two vertices get the same id exactly when their
/// labeled subtrees are isomorphic.
fn subtree_ids(
    tree: &LabeledTree,
    interner: &mut BTreeMap<(Rational, Vec<usize>), usize>,
) -> Result<Vec<usize>> {
    let rooted = tree.rooted()?;
    let mut ids = vec![0; tree.len()];
    for &v in rooted.order.iter().rev() {
        let mut kids: Vec<usize> = rooted.children[v].iter().map(|&c| ids[c]).collect();
        kids.sort_unstable();
        let next = interner.len();
        ids[v] = *interner
            .entry((tree.label(v).clone(), kids))
            .or_insert(next);
    }
    Ok(ids)
}

/// An isometry `x -> y` read off matching subtrees of the two representing
/// trees, or `None` when the spaces are not isometric.
pub fn find_isometry(x: &UltrametricSpace, y: &UltrametricSpace) -> Option<Vec<PointId>> {
    if x.len() != y.len() {
        return None;
    }
    let tx = build_representing_tree(x).expect("ultrametric spaces always partition");
    let ty = build_representing_tree(y).expect("ultrametric spaces always partition");
    let mut interner = BTreeMap::new();
    let ix = subtree_ids(&tx, &mut interner).expect("representing trees are rooted");
    let iy = subtree_ids(&ty, &mut interner).expect("representing trees are rooted");
    let (rx, ry) = (tx.rooted().expect("rooted"), ty.rooted().expect("rooted"));
    if ix[rx.root] != iy[ry.root] {
        return None;
    }
    let (bx, by) = (
        tx.balls().expect("balls attached"),
        ty.balls().expect("balls attached"),
    );
    let mut map = vec![0; x.len()];
    let mut stack = vec![(rx.root, ry.root)];
    while let Some((u, v)) = stack.pop() {
        if rx.children[u].is_empty() {
            map[bx[u][0]] = by[v][0];
            continue;
        }
        let mut cu = rx.children[u].clone();
        let mut cv = ry.children[v].clone();
        cu.sort_by_key(|&c| ix[c]);
        cv.sort_by_key(|&c| iy[c]);
        stack.extend(cu.into_iter().zip(cv));
    }
    Some(map)
}

/// Largest size accepted by [`brute_force_isometry`].
pub const BRUTE_FORCE_CAP: usize = 8;

/// Exhaustive search for a distance-preserving bijection; `map[x]` is the
/// image of `x`.
pub fn brute_force_isometry(
    x: &UltrametricSpace,
    y: &UltrametricSpace,
) -> Result<Option<Vec<PointId>>> {
    let n = x.len();
    if n > BRUTE_FORCE_CAP || y.len() > BRUTE_FORCE_CAP {
        return Err(Error::SizeCap {
            size: n.max(y.len()),
            cap: BRUTE_FORCE_CAP,
        });
    }
    if n != y.len() || distance_multiset(x) != distance_multiset(y) {
        return Ok(None);
    }
    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    Ok(extend_isometry(x, y, &mut map, &mut used).then_some(map))
}

fn distance_multiset(x: &UltrametricSpace) -> Vec<&Rational> {
    let mut all: Vec<&Rational> = x
        .points()
        .flat_map(|a| (a + 1..x.len()).map(move |b| (a, b)))
        .map(|(a, b)| x.d(a, b))
        .collect();
    all.sort();
    all
}

fn extend_isometry(
    x: &UltrametricSpace,
    y: &UltrametricSpace,
    map: &mut Vec<PointId>,
    used: &mut [bool],
) -> bool {
    let next = map.len();
    if next == x.len() {
        return true;
    }
    for cand in 0..y.len() {
        if used[cand] || !(0..next).all(|a| x.d(a, next) == y.d(map[a], cand)) {
            continue;
        }
        used[cand] = true;
        map.push(cand);
        if extend_isometry(x, y, map, used) {
            return true;
        }
        map.pop();
        used[cand] = false;
    }
    false
}

/// A strictly increasing map between finite distance sets, fixing 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingFunction {
    domain: Vec<Rational>,
    values: Vec<Rational>,
}

impl ScalingFunction {
    pub fn new(domain: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if domain.len() != values.len() {
            return Err(Error::Invalid(format!(
                "{} domain points, {} values",
                domain.len(),
                values.len()
            )));
        }
        if domain.first().map_or(true, |t| !t.is_zero()) || !values[0].is_zero() {
            return Err(Error::NotPreserving(
                "domain must start at 0 with value 0".into(),
            ));
        }
        for i in 1..domain.len() {
            if domain[i] <= domain[i - 1] {
                return Err(Error::Invalid(format!(
                    "domain not increasing at {}",
                    rational::format(&domain[i])
                )));
            }
            if values[i] <= values[i - 1] {
                return Err(Error::NotPreserving(format!(
                    "not strictly increasing between {} and {}",
                    rational::format(&domain[i - 1]),
                    rational::format(&domain[i])
                )));
            }
        }
        Ok(ScalingFunction { domain, values })
    }

    pub fn domain(&self) -> &[Rational] {
        &self.domain
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn eval(&self, t: &Rational) -> Option<&Rational> {
        self.domain.binary_search(t).ok().map(|i| &self.values[i])
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.values
    }
}

/// Checks that `map` is a weak similarity from `x` to `y`: comparisons between
/// distances are preserved in both directions. On success returns the
/// scaling function `psi: D(Y) -> D(X)` with `d(a, b) = psi(rho(map a, map b))`.
pub fn weak_similarity_check(
    x: &UltrametricSpace,
    y: &UltrametricSpace,
    map: &[PointId],
) -> Result<Option<ScalingFunction>> {
    let n = x.len();
    if map.len() != n || y.len() != n {
        return Err(Error::NotBijection(format!(
            "{} points mapped into {}",
            map.len(),
            y.len()
        )));
    }
    let mut hit = vec![false; n];
    for &m in map {
        if m >= n || std::mem::replace(&mut hit[m], true) {
            return Err(Error::NotBijection(format!(
                "image {m} repeated or out of range"
            )));
        }
    }
    let mut pairs: Vec<(PointId, PointId)> = vec![(0, 0)];
    pairs.extend((0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))));
    for &(a, b) in &pairs {
        for &(c, e) in &pairs {
            let left = x.rank(a, b) <= x.rank(c, e);
            let right = y.rank(map[a], map[b]) <= y.rank(map[c], map[e]);
            if left != right {
                return Ok(None);
            }
        }
    }
    let y_values = y.distance_set();
    let x_values = x.distance_set();
    let mut psi = vec![usize::MAX; y_values.len()];
    for &(a, b) in &pairs {
        psi[y.rank(map[a], map[b])] = x.rank(a, b);
    }
    let values = psi.iter().map(|&r| x_values.values()[r].clone()).collect();
    let f = ScalingFunction::new(y_values.values().to_vec(), values)?;
    debug_assert_eq!(f.values().len(), x_values.len());
    Ok(Some(f))
}

/// Replaces every distance by its position in the sorted distance set.
pub fn rank_transform(x: &UltrametricSpace) -> UltrametricSpace {
    UltrametricSpace::from_fn_unchecked(x.names().to_vec(), |a, b| {
        rational::int(x.rank(a, b) as i64)
    })
}

/// Weak similarity decided as isometry of the rank-transformed spaces.
pub fn weakly_similar(x: &UltrametricSpace, y: &UltrametricSpace) -> bool {
    spaces_isometric(&rank_transform(x), &rank_transform(y))
}

/// Applies `f` to every distance after checking, on the distance set, that
/// `f` is increasing and vanishes only at 0, which makes `f ∘ d` ultrametric.
pub fn apply_preserving<F>(space: &UltrametricSpace, f: F) -> Result<UltrametricSpace>
where
    F: Fn(&Rational) -> Result<Rational>,
{
    let values = space.distance_set();
    let images: Vec<Rational> = values.values().iter().map(&f).collect::<Result<_>>()?;
    if !images[0].is_zero() {
        return Err(Error::NotPreserving(format!(
            "f(0) = {}",
            rational::format(&images[0])
        )));
    }
    for i in 1..images.len() {
        let t = rational::format(&values.values()[i]);
        if !images[i].is_positive() {
            return Err(Error::NotPreserving(format!(
                "f({t}) = {} is not positive",
                rational::format(&images[i])
            )));
        }
        if images[i] < images[i - 1] {
            return Err(Error::NotPreserving(format!(
                "f decreases between {} and {t}",
                rational::format(&values.values()[i - 1])
            )));
        }
    }
    Ok(UltrametricSpace::from_fn_unchecked(
        space.names().to_vec(),
        |a, b| images[space.rank(a, b)].clone(),
    ))
}

/// `min(r, t)`: every distance at or above `r` collapses to `r`.
pub fn threshold_fn(r: &Rational) -> impl Fn(&Rational) -> Result<Rational> + '_ {
    move |t| Ok(t.clone().min(r.clone()))
}

/// `t -> d* t / (1 + t)`, mapping any ultrametric into one bounded by `d*`.
pub fn bound_transform(space: &UltrametricSpace, d_star: &Rational) -> Result<UltrametricSpace> {
    check_positive(d_star)?;
    apply_preserving(space, |t| Ok(d_star * t / (Rational::one() + t)))
}

/// Inverse of [`bound_transform`]: `s -> s / (d* - s)`. Every distance must be
/// below `d*`.
pub fn unbound_transform(space: &UltrametricSpace, d_star: &Rational) -> Result<UltrametricSpace> {
    check_positive(d_star)?;
    for i in space.points() {
        for j in i + 1..space.len() {
            if space.d(i, j) >= d_star {
                return Err(Error::OutOfBound {
                    i,
                    j,
                    bound: rational::format(d_star),
                });
            }
        }
    }
    apply_preserving(space, |s| Ok(s / (d_star - s)))
}

fn check_positive(r: &Rational) -> Result<()> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveThreshold(rational::format(r)))
    }
}

/// A continuous piecewise-linear function on `[0, inf)` through the given
/// breakpoints, continued beyond the last one by a line through the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinearFn {
    breakpoints: Vec<(Rational, Rational)>,
    tail_slope: Rational,
}

impl PiecewiseLinearFn {
    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.breakpoints
    }

    pub fn tail_slope(&self) -> &Rational {
        &self.tail_slope
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        if t.is_negative() {
            return Err(Error::Invalid(format!(
                "negative argument {}",
                rational::format(t)
            )));
        }
        let (last_x, _) = self.breakpoints.last().expect("contains the origin");
        if t >= last_x {
            return Ok(&self.tail_slope * t);
        }
        let i = self.breakpoints.partition_point(|(x, _)| x <= t);
        let (a, fa) = &self.breakpoints[i - 1];
        let (b, fb) = &self.breakpoints[i];
        Ok(fa + (fb - fa) / (b - a) * (t - a))
    }
}

/// Extends a scaling function on a finite distance set to a strictly
/// increasing, ultrametric preserving function on all of `[0, inf)`:
/// linear between consecutive domain points (the first segment starts at the
/// origin) and proportional, `t * psi(max) / max`, past the largest point.
pub fn extend_scaling_function(psi: &ScalingFunction) -> PiecewiseLinearFn {
    let breakpoints: Vec<(Rational, Rational)> = psi
        .domain()
        .iter()
        .cloned()
        .zip(psi.values().iter().cloned())
        .collect();
    let (a, fa) = breakpoints.last().expect("domain contains 0");
    let tail_slope = if a.is_zero() { Rational::one() } else { fa / a };
    PiecewiseLinearFn {
        breakpoints,
        tail_slope,
    }
}

/// The geometric ladder `eps_n = ratio^n` used by [`quantize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ladder {
    ratio: Rational,
}

impl Ladder {
    pub fn new(ratio: Rational) -> Result<Self> {
        if !ratio.is_positive() || ratio >= Rational::one() {
            return Err(Error::Invalid(format!(
                "ladder ratio {} must lie in (0, 1)",
                rational::format(&ratio)
            )));
        }
        Ok(Ladder { ratio })
    }

    pub fn binary() -> Self {
        Ladder {
            ratio: rational::ratio(1, 2),
        }
    }

    /// `0` at 0, `eps_1` for `t >= eps_1`, otherwise `eps_{n+1}` for
    /// `eps_{n+1} <= t < eps_n`.
    pub fn snap(&self, t: &Rational) -> Rational {
        if t.is_zero() {
            return Rational::zero();
        }
        let mut eps = self.ratio.clone();
        while &eps > t {
            eps *= &self.ratio;
        }
        eps
    }
}

impl Default for Ladder {
    fn default() -> Self {
        Self::binary()
    }
}

pub fn quantize(space: &UltrametricSpace, ladder: &Ladder) -> Result<UltrametricSpace> {
    apply_preserving(space, |t| Ok(ladder.snap(t)))
}

/// Snaps every distance down to a power of 1/2, capped at 1/2.
pub fn quantize_binary(space: &UltrametricSpace) -> UltrametricSpace {
    quantize(space, &Ladder::binary()).expect("the ladder map is increasing and positive")
}

/// A table `t -> f(t)` used as a distance transform; lookups outside the table
/// fail.
pub fn tabulated(
    table: &BTreeMap<Rational, Rational>,
) -> impl Fn(&Rational) -> Result<Rational> + '_ {
    move |t| {
        table.get(t).cloned().ok_or_else(|| {
            Error::NotPreserving(format!("no table entry for {}", rational::format(t)))
        })
    }
}
