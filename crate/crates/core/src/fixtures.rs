//! Named example graphs used by tests, benches and the command line.

use crate::graph::{dedge, dstar, edge, linear, star, DGraph, Graph, UGraph};

/// Four vertices, nine edges: a floating edge, a loop at `w`, loose legs.
pub fn fig2() -> UGraph {
    let names: Vec<String> = (1..=9).map(|n| n.to_string()).collect();
    let dag: Vec<String> = names.iter().map(|n| format!("{n}†")).collect();
    let pairs: Vec<(&str, &str)> = names.iter().zip(&dag).map(|(a, b)| (a.as_str(), b.as_str())).collect();
    UGraph::from_names(
        "fig2",
        &pairs,
        &[
            ("u", &["1†"]),
            ("v", &["3†", "4", "6†", "8", "7"]),
            ("w", &["4†", "5", "5†", "6"]),
            ("x", &["8†", "9"]),
        ],
    )
    .expect("fig2")
}

/// Two vertices joined by two parallel edges, each with one loose leg.
pub fn fig8() -> UGraph {
    UGraph::from_names(
        "fig8",
        &[("a", "a†"), ("b", "b†"), ("l", "l†"), ("r", "r†")],
        &[("left", &["a", "b", "l†"]), ("right", &["a†", "b†", "r†"])],
    )
    .expect("fig8")
}

/// One vertex carrying two loops and a leg.
pub fn fig9() -> UGraph {
    UGraph::from_names(
        "fig9",
        &[("p", "p†"), ("q", "q†"), ("l", "l†")],
        &[("v", &["p", "p†", "q", "q†", "l†"])],
    )
    .expect("fig9")
}

/// One vertex with one loop and two legs.
pub fn loop_two_legs() -> UGraph {
    UGraph::from_names(
        "loop2",
        &[("p", "p†"), ("l", "l†"), ("m", "m†")],
        &[("v", &["p", "p†", "l†", "m†"])],
    )
    .expect("loop2")
}

/// `u -> v` along two parallel edges, with one input into `u` and one
/// output out of `v`.
pub fn diamond() -> DGraph {
    DGraph::from_names(
        "diamond",
        &["in", "p", "q", "out"],
        &[("u", &["in"], &["p", "q"]), ("v", &["p", "q"], &["out"])],
    )
    .expect("diamond")
}

/// A path of three vertices with legs, a tree.
pub fn path3() -> UGraph {
    UGraph::from_names(
        "path3",
        &[("a", "a†"), ("b", "b†"), ("c", "c†"), ("d", "d†")],
        &[("x", &["a†", "b"]), ("y", &["b†", "c"]), ("z", &["c†", "d"])],
    )
    .expect("path3")
}

/// A named example or builder: `fig2`, `fig8`, `fig9`, `loop2`, `diamond`,
/// `path3`, `fork`, `edge`, `dedge`, `star<n>`, `dstar<i>-<o>`, `linear<n>`.
pub fn named(name: &str) -> Option<Graph> {
    let num = |p: &str| name.strip_prefix(p).and_then(|r| r.parse::<usize>().ok());
    let g: Graph = match name {
        "fig2" => fig2().into(),
        "fig8" => fig8().into(),
        "fig9" => fig9().into(),
        "loop2" => loop_two_legs().into(),
        "diamond" => diamond().into(),
        "path3" => path3().into(),
        "fork" => crate::operad::fork().into(),
        "edge" => edge().into(),
        "dedge" => dedge().into(),
        _ => {
            if let Some(n) = num("star") {
                star(n).into()
            } else if let Some(n) = num("linear") {
                linear(n).into()
            } else {
                let (i, o) = name.strip_prefix("dstar")?.split_once('-')?;
                dstar(i.parse().ok()?, o.parse().ok()?).into()
            }
        }
    };
    Some(g.with_name(name))
}
