//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string, either `{"view": ...}` with a laid-out
//! tree ready for drawing or `{"error": "..."}`.

use num_traits::ToPrimitive;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use ultrametric::morphisms::{apply_preserving, bound_transform, quantize, threshold_fn, Ladder};
use ultrametric::padic::{bethe_ball_tree, sphere_tree};
use ultrametric::rational::{self, Rational};
use ultrametric::tree::build_representing_tree;
use ultrametric::{LabeledTree, MetricSpace, SpaceJson, UltrametricSpace};

#[derive(Debug, Serialize)]
pub struct Node {
    pub label: String,
    /// Horizontal position in `[0, 1]`.
    pub x: f64,
    pub depth: usize,
    /// Label divided by the root label.
    pub height: f64,
    pub leaf: bool,
    pub members: Vec<String>,
}

#[derive(Debug, Default, Serialize)]
pub struct View {
    pub points: Vec<String>,
    pub distances: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub nodes: Vec<Node>,
    pub edges: Vec<(usize, usize)>,
    pub truncated: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
enum Response {
    View(View),
    Error(String),
}

fn respond(result: Result<View, String>) -> String {
    let r = match result {
        Ok(v) => Response::View(v),
        Err(e) => Response::Error(e),
    };
    serde_json::to_string(&r).expect("views serialize")
}

/// Space JSON, or one matrix row per line with entries separated by spaces
/// or commas.
pub fn parse_space(text: &str) -> Result<UltrametricSpace, String> {
    let metric = if text.trim_start().starts_with('{') {
        SpaceJson::parse(text)
            .and_then(|j| j.to_metric())
            .map_err(|e| e.to_string())?
    } else {
        let rows: Vec<Vec<Rational>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| rational::parse(t).map_err(|e| e.to_string()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let names = (1..=rows.len()).map(|i| format!("x{i}")).collect();
        MetricSpace::new(names, rows).map_err(|e| e.to_string())?
    };
    UltrametricSpace::try_from(metric).map_err(|e| e.to_string())
}

fn layout(
    tree: &LabeledTree,
    names: &[String],
) -> Result<(Vec<Node>, Vec<(usize, usize)>), String> {
    let rooted = tree.rooted().map_err(|e| e.to_string())?;
    let n = tree.len();
    let mut x = vec![0.0; n];
    let leaves = rooted.leaves().len().max(1);
    let mut next_leaf = 0usize;
    // depth-first so that leaves come out left to right
    let mut stack = vec![(rooted.root, false)];
    while let Some((v, done)) = stack.pop() {
        let kids = &rooted.children[v];
        if kids.is_empty() {
            x[v] = if leaves == 1 {
                0.5
            } else {
                next_leaf as f64 / (leaves - 1) as f64
            };
            next_leaf += 1;
        } else if done {
            x[v] = (x[kids[0]] + x[kids[kids.len() - 1]]) / 2.0;
        } else {
            stack.push((v, true));
            stack.extend(kids.iter().rev().map(|&c| (c, false)));
        }
    }
    let top = tree.label(rooted.root).to_f64().unwrap_or(0.0);
    let nodes = (0..n)
        .map(|v| Node {
            label: rational::format(tree.label(v)),
            x: x[v],
            depth: rooted.depth[v],
            height: if top > 0.0 {
                tree.label(v).to_f64().unwrap_or(0.0) / top
            } else {
                0.0
            },
            leaf: rooted.is_leaf(v),
            members: tree
                .balls()
                .map(|b| b[v].iter().map(|&p| names[p].clone()).collect())
                .unwrap_or_default(),
        })
        .collect();
    let edges = (0..n)
        .filter_map(|v| rooted.parent[v].map(|p| (p, v)))
        .collect();
    Ok((nodes, edges))
}

pub fn space_view(space: &UltrametricSpace) -> Result<View, String> {
    let tree = build_representing_tree(space).map_err(|e| e.to_string())?;
    let (nodes, edges) = layout(&tree, space.names())?;
    let json = SpaceJson::from(space.metric());
    Ok(View {
        points: json.points,
        distances: space
            .distance_set()
            .values()
            .iter()
            .map(rational::format)
            .collect(),
        matrix: json.matrix,
        nodes,
        edges,
        truncated: false,
    })
}

pub fn bethe(prime: u32, depth: u32, sphere: bool) -> Result<View, String> {
    if depth > 8 {
        return Err("depth is limited to 8 in the demo".into());
    }
    let top = rational::int(1);
    let tree = if sphere {
        sphere_tree(prime as u64, depth, &top)
    } else {
        bethe_ball_tree(prime as u64, depth, &top)
    }
    .map_err(|e| e.to_string())?;
    if tree.len() > 2000 {
        return Err(format!("{} vertices is too many to draw", tree.len()));
    }
    let (nodes, edges) = layout(&tree, &[])?;
    Ok(View {
        nodes,
        edges,
        truncated: tree.is_truncated(),
        ..View::default()
    })
}

/// `bound:D`, `quantize`, `quantize:RATIO` or `threshold:R`.
pub fn apply_transform(text: &str, spec: &str) -> Result<View, String> {
    let x = parse_space(text)?;
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (
            k.trim(),
            Some(rational::parse(a).map_err(|e| e.to_string())?),
        ),
        None => (spec.trim(), None),
    };
    let need =
        |a: Option<Rational>| a.ok_or_else(|| format!("{kind} needs a value, e.g. {kind}:1"));
    let y = match kind {
        "bound" => bound_transform(&x, &need(arg)?),
        "threshold" => apply_preserving(&x, threshold_fn(&need(arg)?)),
        "quantize" => match arg {
            Some(r) => Ladder::new(r).and_then(|l| quantize(&x, &l)),
            None => quantize(&x, &Ladder::binary()),
        },
        other => return Err(format!("unknown transform {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    space_view(&y)
}

#[wasm_bindgen]
pub fn tree_view(text: &str) -> String {
    respond(parse_space(text).and_then(|x| space_view(&x)))
}

#[wasm_bindgen]
pub fn bethe_view(prime: u32, depth: u32, sphere: bool) -> String {
    respond(bethe(prime, depth, sphere))
}

#[wasm_bindgen]
pub fn transform_view(text: &str, spec: &str) -> String {
    respond(apply_transform(text, spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR: &str = "0 2 2 2\n2 0 1 1\n2 1 0 1\n2 1 1 0\n";

    #[test]
    fn four_point_layout() {
        let v = space_view(&parse_space(FOUR).unwrap()).unwrap();
        assert_eq!(v.nodes.len(), 6);
        assert_eq!(v.edges.len(), 5);
        assert_eq!(v.distances, ["0/1", "1/1", "2/1"]);
        assert_eq!(v.nodes[0].height, 1.0);
        assert_eq!(v.nodes[2].height, 0.5);
        assert_eq!(v.nodes[2].members, ["x2", "x3", "x4"]);
        let leaf_x: Vec<f64> = v.nodes.iter().filter(|n| n.leaf).map(|n| n.x).collect();
        assert_eq!(leaf_x.len(), 4);
        assert!(leaf_x.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn responses_are_tagged() {
        assert!(tree_view(FOUR).starts_with(r#"{"view":"#));
        let bad = tree_view("0 1 2\n1 0 1\n2 1 0");
        assert!(bad.starts_with(r#"{"error":"strong triangle"#), "{bad}");
        assert!(tree_view("0 1\n1 x").contains("error"));
    }

    #[test]
    fn bethe_and_transforms() {
        let v = bethe(2, 2, false).unwrap();
        assert_eq!(v.nodes.len(), 7);
        assert!(v.truncated);
        assert_eq!(bethe(3, 1, true).unwrap().nodes.len(), 3);
        assert!(bethe(4, 1, false).is_err());
        let q = apply_transform(FOUR, "quantize").unwrap();
        assert_eq!(q.distances, ["0/1", "1/2"]);
        let b = apply_transform(FOUR, "bound:1").unwrap();
        assert_eq!(b.distances, ["0/1", "1/2", "2/3"]);
        assert!(apply_transform(FOUR, "cube").is_err());
        let json = r#"{"points":["a","b"],"matrix":[["0","0.25"],["1/4","0"]]}"#;
        assert_eq!(
            space_view(&parse_space(json).unwrap()).unwrap().points,
            ["a", "b"]
        );
    }
}
