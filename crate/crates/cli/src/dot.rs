//! Graphviz output for Hasse diagrams.

use std::collections::BTreeMap;
use std::fmt::Write;

use reslat::{FilterLattice, Structure};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected Hasse diagram, bottom at the bottom, one rank per height.
fn hasse(title: &str, labels: &[String], heights: &[usize], covers: &[(usize, usize)]) -> String {
    let mut out = String::new();
    writeln!(out, "graph {} {{", quote(title)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for (i, l) in labels.iter().enumerate() {
        writeln!(out, "  n{i} [label={}];", quote(l)).unwrap();
    }
    let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &h) in heights.iter().enumerate() {
        ranks.entry(h).or_default().push(i);
    }
    for nodes in ranks.values() {
        let ids: Vec<String> = nodes.iter().map(|i| format!("n{i};")).collect();
        writeln!(out, "  {{ rank=same; {} }}", ids.join(" ")).unwrap();
    }
    for &(x, y) in covers {
        writeln!(out, "  n{x} -- n{y};").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn lattice_dot(name: &str, s: &Structure) -> String {
    let heights: Vec<usize> = s.elems().map(|x| s.height(x)).collect();
    let covers: Vec<(usize, usize)> = s.covers().into_iter().map(|(x, y)| (x.0, y.0)).collect();
    hasse(name, s.names(), &heights, &covers)
}

pub fn filters_dot(name: &str, s: &Structure, lat: &FilterLattice) -> String {
    let n = lat.len();
    let labels: Vec<String> = lat
        .filters()
        .iter()
        .map(|f| s.format_set(f.mask()))
        .collect();
    let below = |i: usize, j: usize| i != j && lat.leq(i, j);
    let covers: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| below(i, j) && !(0..n).any(|k| below(i, k) && below(k, j)))
        .collect();
    // filters are in ascending size order, so heights can be filled left to right
    let mut heights = vec![0usize; n];
    for j in 0..n {
        heights[j] = covers
            .iter()
            .filter(|&&(_, b)| b == j)
            .map(|&(a, _)| heights[a] + 1)
            .max()
            .unwrap_or(0);
    }
    hasse(&format!("{name} filters"), &labels, &heights, &covers)
}
