use super::{DGraph, UGraph};

/// The undirected edge: two arcs, no vertices.
pub fn edge() -> UGraph {
    UGraph::from_names("edge", &[("0", "0†")], &[]).expect("edge")
}

/// The directed edge.
pub fn dedge() -> DGraph {
    DGraph::from_names("dedge", &["0"], &[]).expect("dedge")
}

/// The undirected star with `n` legs; its boundary arcs are named `0..n`.
pub fn star(n: usize) -> UGraph {
    let arc_names = (0..n)
        .flat_map(|k| [format!("{k}"), format!("{k}†")])
        .collect();
    let nbhd = vec![(0..n).map(|k| 2 * k + 1).collect()];
    UGraph::new(format!("star{n}"), arc_names, vec!["v".into()], nbhd).expect("star")
}

/// The directed star with `n` inputs `i0..` and `m` outputs `o0..`.
pub fn dstar(n: usize, m: usize) -> DGraph {
    let names = (0..n)
        .map(|k| format!("i{k}"))
        .chain((0..m).map(|k| format!("o{k}")))
        .collect();
    DGraph::new(
        format!("star{n}_{m}"),
        names,
        vec!["v".into()],
        vec![(0..n).collect()],
        vec![(n..n + m).collect()],
    )
    .expect("dstar")
}

/// The linear graph with edges `0..=n`; vertex `k` has input `k-1`, output `k`.
pub fn linear(n: usize) -> DGraph {
    DGraph::new(
        format!("L{n}"),
        (0..=n).map(|k| k.to_string()).collect(),
        (1..=n).map(|k| format!("v{k}")).collect(),
        (1..=n).map(|k| vec![k - 1]).collect(),
        (1..=n).map(|k| vec![k]).collect(),
    )
    .expect("linear")
}
