//! The `ultra` command line tool.
//!
//! Exit codes: 0 for success or a positive decision, 1 for a negative
//! decision, 2 for unreadable or invalid input.

use std::io::{Read, Write};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ultrametric::balls::{ballean, BalleanJson};
use ultrametric::generate::random_ultrametric;
use ultrametric::morphisms::{
    apply_preserving, bound_transform, find_isometry, quantize, rank_transform, threshold_fn,
    unbound_transform, weak_similarity_check, Ladder,
};
use ultrametric::padic::{bethe_ball_tree, padic_space, sphere_tree};
use ultrametric::rational::{self, Rational};
use ultrametric::tree::{build_representing_tree, to_dot, LabeledTree, TreeJson};
use ultrametric::tree_metric::{
    check_ballean_poset, check_representable, reconstruct_space, MonotoneViolation, PosetJson,
    Representability, RootRejection,
};
use ultrametric::{MetricSpace, SpaceJson, UltrametricSpace};

#[derive(Parser, Debug)]
#[command(
    name = "ultra",
    version,
    about = "Finite ultrametric spaces and their representing trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a distance matrix for ultrametricity with both tests
    Check { space: String },
    /// Print the distance set
    Dset { space: String },
    /// Print all balls as Ballean JSON
    Balls { space: String },
    /// Build the labeled representing tree
    Tree {
        space: String,
        /// Emit Graphviz DOT instead of Tree JSON
        #[arg(long)]
        dot: bool,
    },
    /// Decide whether two spaces are isometric
    Iso { a: String, b: String },
    /// Decide whether two spaces are weakly similar
    Weaksim { a: String, b: String },
    /// Rebuild a space from a labeled tree via its maximal chains
    Reconstruct { tree: String },
    /// Decide whether a labeled tree is the representing tree of some space
    Representable { tree: String },
    /// Check whether a poset is the ballean of a finite ultrametric space
    Posetcheck { poset: String },
    /// Apply an ultrametric-preserving function to all distances
    Transform {
        /// bound:D, unbound:D, quantize[:RATIO] or threshold:R
        #[arg(long = "fn")]
        function: String,
        space: String,
    },
    /// Finite space of rationals under the p-adic metric
    Padic {
        #[arg(long)]
        prime: u64,
        /// JSON array of rational strings
        #[arg(long)]
        points: String,
    },
    /// Truncated Bethe tree of p-adic balls
    Bethe {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        depth: u32,
        /// Tree of a sphere instead of a ball
        #[arg(long)]
        sphere: bool,
        /// Label of the root
        #[arg(long, default_value = "1")]
        top: String,
        #[arg(long)]
        dot: bool,
    },
    /// Build the tree, reconstruct the space from it and compare
    Roundtrip { space: String },
    /// Random ultrametric space
    Random {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Verdict {
    Yes,
    No,
}

type Outcome = Result<Verdict, String>;

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn load_metric(path: &str) -> Result<MetricSpace, String> {
    let json = SpaceJson::parse(&read_input(path)?).map_err(|e| format!("{path}: {e}"))?;
    json.to_metric().map_err(|e| format!("{path}: {e}"))
}

fn load_space(path: &str) -> Result<UltrametricSpace, String> {
    UltrametricSpace::try_from(load_metric(path)?).map_err(|e| format!("{path}: {e}"))
}

fn load_tree(path: &str) -> Result<LabeledTree, String> {
    let json: TreeJson =
        serde_json::from_str(&read_input(path)?).map_err(|e| format!("{path}: tree JSON: {e}"))?;
    LabeledTree::try_from(json).map_err(|e| format!("{path}: {e}"))
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    rational::parse(text).map_err(|e| e.to_string())
}

fn emit_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), String> {
    let text = serde_json::to_string(value).map_err(|e| e.to_string())?;
    writeln!(out, "{text}").map_err(|e| e.to_string())
}

fn line(out: &mut dyn Write, text: impl AsRef<str>) -> Result<(), String> {
    writeln!(out, "{}", text.as_ref()).map_err(|e| e.to_string())
}

fn verdict(yes: bool) -> Verdict {
    if yes {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn check(out: &mut dyn Write, path: &str) -> Outcome {
    let x = load_metric(path)?;
    let name = |i: usize| x.name(i).to_string();
    let pq = |i: usize, j: usize| rational::format(x.d(i, j));
    line(out, format!("points: {}", x.len()))?;
    let triangle = x.is_ultrametric_triangle();
    line(out, format!("strong triangle test: {triangle}"))?;
    if let Some((a, b, c)) = x.strong_triangle_witness() {
        line(
            out,
            format!(
                "  d({},{}) = {} > max(d({},{}) = {}, d({},{}) = {})",
                name(a),
                name(b),
                pq(a, b),
                name(a),
                name(c),
                pq(a, c),
                name(c),
                name(b),
                pq(c, b)
            ),
        )?;
    }
    let multipartite = x.is_ultrametric_multipartite();
    line(out, format!("threshold graph test: {multipartite}"))?;
    for r in x.distance_set().values().iter().skip(1) {
        if let Err(e) = x.threshold_partition(r) {
            line(out, format!("  {e}"))?;
            break;
        }
    }
    line(out, format!("ultrametric: {}", triangle && multipartite))?;
    Ok(verdict(triangle && multipartite))
}

fn describe_rejection(names: &dyn Fn(usize) -> String, r: &RootRejection) -> String {
    match r {
        RootRejection::SingleChild(v) => format!("vertex {} has a single child", names(*v)),
        RootRejection::Labeling(MonotoneViolation::NotDecreasing { parent, child }) => {
            format!(
                "label does not decrease from {} to {}",
                names(*parent),
                names(*child)
            )
        }
        RootRejection::Labeling(MonotoneViolation::PositiveLeaf(v)) => {
            format!("leaf {} has a positive label", names(*v))
        }
    }
}

fn representable(out: &mut dyn Write, path: &str) -> Outcome {
    let tree = load_tree(path)?;
    let names = |v: usize| v.to_string();
    match check_representable(&tree) {
        Representability::Accepted { root } => {
            line(out, format!("representable: true (root {root})"))?;
            Ok(Verdict::Yes)
        }
        Representability::Rejected { reasons } => {
            line(out, "representable: false")?;
            for (root, why) in reasons {
                line(
                    out,
                    format!("  root {root}: {}", describe_rejection(&names, &why)),
                )?;
            }
            Ok(Verdict::No)
        }
    }
}

fn posetcheck(out: &mut dyn Write, path: &str) -> Outcome {
    let poset: PosetJson =
        serde_json::from_str(&read_input(path)?).map_err(|e| format!("{path}: poset JSON: {e}"))?;
    let report = check_ballean_poset(&poset).map_err(|e| format!("{path}: {e}"))?;
    let names = |ids: &[usize]| -> String {
        ids.iter()
            .map(|&i| poset.elements[i].as_str())
            .collect::<Vec<_>>()
            .join(", ")
    };
    match report.largest {
        Some(l) => line(out, format!("largest element: {}", poset.elements[l]))?,
        None => line(out, "largest element: none")?,
    }
    line(
        out,
        format!("unique upper covers: {}", report.unique_upper_covers()),
    )?;
    if !report.unique_upper_covers() {
        line(
            out,
            format!("  fails at: {}", names(&report.upper_cover_failures)),
        )?;
    }
    line(
        out,
        format!(
            "at least two lower covers: {}",
            report.enough_lower_covers()
        ),
    )?;
    if !report.enough_lower_covers() {
        line(
            out,
            format!("  fails at: {}", names(&report.lower_cover_failures)),
        )?;
    }
    line(
        out,
        format!("order generated by covers: {}", report.closure_of_covers),
    )?;
    line(out, format!("ballean poset: {}", report.is_ballean_poset()))?;
    Ok(verdict(report.is_ballean_poset()))
}

fn transform(out: &mut dyn Write, spec: &str, path: &str) -> Outcome {
    let x = load_space(path)?;
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(parse_rational(a)?)),
        None => (spec, None),
    };
    let need = |arg: Option<Rational>| {
        arg.ok_or_else(|| format!("--fn {kind} needs a value, e.g. {kind}:1"))
    };
    let y = match kind {
        "bound" => bound_transform(&x, &need(arg)?),
        "unbound" => unbound_transform(&x, &need(arg)?),
        "threshold" => {
            let r = need(arg)?;
            if r <= Rational::from_integer(0.into()) {
                return Err(format!(
                    "threshold must be positive, got {}",
                    rational::format(&r)
                ));
            }
            apply_preserving(&x, threshold_fn(&r))
        }
        "quantize" => {
            let ladder = match arg {
                Some(ratio) => Ladder::new(ratio).map_err(|e| e.to_string())?,
                None => Ladder::binary(),
            };
            quantize(&x, &ladder)
        }
        other => {
            return Err(format!(
                "unknown function {other:?}; use bound, unbound, quantize or threshold"
            ))
        }
    }
    .map_err(|e| e.to_string())?;
    emit_json(out, &SpaceJson::from(y.metric()))?;
    Ok(Verdict::Yes)
}

fn iso(out: &mut dyn Write, a: &str, b: &str) -> Outcome {
    let (x, y) = (load_space(a)?, load_space(b)?);
    match find_isometry(&x, &y) {
        Some(map) => {
            line(out, "isometric: true")?;
            for (p, &q) in map.iter().enumerate() {
                line(out, format!("  {} -> {}", x.name(p), y.name(q)))?;
            }
            Ok(Verdict::Yes)
        }
        None => {
            line(out, "isometric: false")?;
            Ok(Verdict::No)
        }
    }
}

fn weaksim(out: &mut dyn Write, a: &str, b: &str) -> Outcome {
    let (x, y) = (load_space(a)?, load_space(b)?);
    let Some(map) = find_isometry(&rank_transform(&x), &rank_transform(&y)) else {
        line(out, "weakly similar: false")?;
        return Ok(Verdict::No);
    };
    let psi = weak_similarity_check(&x, &y, &map)
        .map_err(|e| e.to_string())?
        .ok_or("rank isometry is not a weak similarity")?;
    line(out, "weakly similar: true")?;
    for (p, &q) in map.iter().enumerate() {
        line(out, format!("  {} -> {}", x.name(p), y.name(q)))?;
    }
    let pairs: Vec<String> = psi
        .domain()
        .iter()
        .zip(psi.values())
        .map(|(s, t)| format!("{} -> {}", rational::format(s), rational::format(t)))
        .collect();
    line(out, format!("scaling function: {}", pairs.join(", ")))?;
    Ok(Verdict::Yes)
}

fn roundtrip(out: &mut dyn Write, path: &str) -> Outcome {
    let x = load_space(path)?;
    let tree = build_representing_tree(&x).map_err(|e| e.to_string())?;
    let y = reconstruct_space(&tree).map_err(|e| e.to_string())?.space;
    line(out, format!("points: {}", x.len()))?;
    line(out, format!("tree vertices: {}", tree.len()))?;
    let ok = find_isometry(&x, &y).is_some();
    line(out, format!("isometric: {ok}"))?;
    Ok(verdict(ok))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Check { space } => check(out, &space),
        Command::Dset { space } => {
            let x = load_metric(&space)?;
            let values: Vec<String> = x
                .distance_set()
                .values()
                .iter()
                .map(rational::format)
                .collect();
            emit_json(out, &values)?;
            Ok(Verdict::Yes)
        }
        Command::Balls { space } => {
            emit_json(out, &BalleanJson::from(&ballean(&load_space(&space)?)))?;
            Ok(Verdict::Yes)
        }
        Command::Tree { space, dot } => {
            let tree = build_representing_tree(&load_space(&space)?).map_err(|e| e.to_string())?;
            if dot {
                write!(out, "{}", to_dot(&tree)).map_err(|e| e.to_string())?;
            } else {
                emit_json(out, &TreeJson::from(&tree))?;
            }
            Ok(Verdict::Yes)
        }
        Command::Iso { a, b } => iso(out, &a, &b),
        Command::Weaksim { a, b } => weaksim(out, &a, &b),
        Command::Reconstruct { tree } => {
            let chains =
                reconstruct_space(&load_tree(&tree)?).map_err(|e| format!("{tree}: {e}"))?;
            emit_json(out, &SpaceJson::from(chains.space.metric()))?;
            Ok(Verdict::Yes)
        }
        Command::Representable { tree } => representable(out, &tree),
        Command::Posetcheck { poset } => posetcheck(out, &poset),
        Command::Transform { function, space } => transform(out, &function, &space),
        Command::Padic { prime, points } => {
            let raw: Vec<String> = serde_json::from_str(&read_input(&points)?)
                .map_err(|e| format!("{points}: expected a JSON array of strings: {e}"))?;
            let values = raw
                .iter()
                .map(|t| parse_rational(t))
                .collect::<Result<Vec<_>, _>>()?;
            let x = padic_space(&values, prime).map_err(|e| e.to_string())?;
            emit_json(out, &SpaceJson::from(x.metric()))?;
            Ok(Verdict::Yes)
        }
        Command::Bethe {
            prime,
            depth,
            sphere,
            top,
            dot,
        } => {
            let top = parse_rational(&top)?;
            let tree = if sphere {
                sphere_tree(prime, depth, &top)
            } else {
                bethe_ball_tree(prime, depth, &top)
            }
            .map_err(|e| e.to_string())?;
            if dot {
                write!(out, "{}", to_dot(&tree)).map_err(|e| e.to_string())?;
            } else {
                emit_json(out, &TreeJson::from(&tree))?;
            }
            Ok(Verdict::Yes)
        }
        Command::Roundtrip { space } => roundtrip(out, &space),
        Command::Random { size, seed } => {
            if size == 0 {
                return Err("--size must be at least 1".into());
            }
            let x = random_ultrametric(&mut ChaCha8Rng::seed_from_u64(seed), size);
            emit_json(out, &SpaceJson::from(x.metric()))?;
            Ok(Verdict::Yes)
        }
    }
}

/// Runs one command; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(Verdict::Yes) => 0,
        Ok(Verdict::No) => 1,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("ultra").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn transform_needs_a_value() {
        let (code, text) = run_args(&["transform", "--fn", "bound", "missing.json"]);
        assert_eq!(code, 2);
        assert!(text.contains("missing.json"));
    }

    #[test]
    fn random_spaces_are_reproducible() {
        let a = run_args(&["random", "--size", "6", "--seed", "3"]);
        let b = run_args(&["random", "--size", "6", "--seed", "3"]);
        assert_eq!(a, b);
        assert_eq!(a.0, 0);
        assert_eq!(run_args(&["random", "--size", "0"]).0, 2);
    }

    #[test]
    fn rejection_messages() {
        let names = |v: usize| format!("v{v}");
        let r = RootRejection::Labeling(MonotoneViolation::NotDecreasing {
            parent: 1,
            child: 2,
        });
        assert_eq!(
            describe_rejection(&names, &r),
            "label does not decrease from v1 to v2"
        );
    }
}
