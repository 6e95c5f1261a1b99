#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use raag::genset::ls_generators;
use raag::graph::Graph;
use raag::symplectic::SymplecticStructure;
use raag::{Automorphism, Factor, Letter};

pub const COUNTEREXAMPLE_GRAPH: &str = include_str!("../../../../data/counterexample14.txt");
pub const COUNTEREXAMPLE_PAIRS: &str = include_str!("../../../../data/counterexample14.json");

pub fn graph(text: &str) -> Graph {
    Graph::parse(text).unwrap()
}

pub fn structure(g: &Graph, pairs: &[(&str, &str)]) -> SymplecticStructure {
    let p: Vec<(Letter, Letter)> =
        pairs.iter().map(|(a, b)| (g.parse_letter(a).unwrap(), g.parse_letter(b).unwrap())).collect();
    SymplecticStructure::new(g, &p).unwrap()
}

pub fn counterexample() -> (Graph, SymplecticStructure) {
    let g = graph(COUNTEREXAMPLE_GRAPH);
    let s = SymplecticStructure::from_json(&g, COUNTEREXAMPLE_PAIRS).unwrap();
    (g, s)
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(&names(n), &edges).unwrap()
}

/// Random graph on `2·genus` vertices paired as `(v0,v1), (v2,v3), …`, with
/// exactly the first `k` pairs non-adjacent.
pub fn random_structure<R: Rng>(rng: &mut R, genus: usize, k: usize, p: f64) -> (Graph, SymplecticStructure) {
    let n = 2 * genus;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let paired = i % 2 == 0 && j == i + 1;
            let edge = if paired { i / 2 >= k } else { rng.gen_bool(p) };
            if edge {
                edges.push((i, j));
            }
        }
    }
    let g = Graph::new(&names(n), &edges).unwrap();
    let pairs: Vec<(Letter, Letter)> = (0..genus).map(|i| (Letter::pos(2 * i), Letter::pos(2 * i + 1))).collect();
    let s = SymplecticStructure::new(&g, &pairs).unwrap();
    (g, s)
}

/// Named structures covering the extreme cases and a few mixed ones.
pub fn corpus() -> Vec<(&'static str, Graph, SymplecticStructure)> {
    let mut out = Vec::new();
    let mut add = |name: &'static str, text: &str, pairs: &[(&str, &str)]| {
        let g = graph(text);
        let s = structure(&g, pairs);
        out.push((name, g, s));
    };
    add("K2", "vertices: a b\nedges: a-b", &[("a", "b")]);
    add("K4", "vertices: a b c d\nedges: a-b a-c a-d b-c b-d c-d", &[("a", "b"), ("c", "d")]);
    add(
        "K6",
        "vertices: a b c d e f\nedges: a-b a-c a-d a-e a-f b-c b-d b-e b-f c-d c-e c-f d-e d-f e-f",
        &[("a", "b"), ("c", "d"), ("e", "f")],
    );
    add("edgeless-2", "vertices: a b\nedges:", &[("a", "b")]);
    add("edgeless-4", "vertices: a b c d\nedges:", &[("a", "b"), ("c", "d")]);
    add("join K2*E2", "vertices: a b c d\nedges: a-c a-d b-c b-d c-d", &[("a", "b"), ("c", "d")]);
    add("disjoint K2+E2", "vertices: a b c d\nedges: c-d", &[("a", "b"), ("c", "d")]);
    add(
        "join K4*E2",
        "vertices: a b c d e f\nedges: c-d c-e c-f d-e d-f e-f a-c a-d a-e a-f b-c b-d b-e b-f",
        &[("a", "b"), ("c", "d"), ("e", "f")],
    );
    add("K2+E2 plus bridge", "vertices: a b c d\nedges: c-d a-c", &[("a", "b"), ("c", "d")]);
    add(
        "square with pendant pair",
        "vertices: a b c d e f\nedges: a-b b-c c-d d-a a-e e-f",
        &[("a", "b"), ("c", "d"), ("e", "f")],
    );
    add(
        "signed pairing",
        "vertices: a b c d e f\nedges: a-b c-d a-c b-d e-a e-b e-c",
        &[("a^-1", "b"), ("c", "d^-1"), ("e", "f")],
    );
    add("path P6", "vertices: a b c d e f\nedges: a-b b-c c-d d-e e-f", &[("a", "b"), ("c", "d"), ("e", "f")]);
    let (g, s) = counterexample();
    out.push(("counterexample", g, s));
    out
}

/// Random product of at most `max_len` pure Laurence–Servatius generators.
pub fn random_pure_automorphism<R: Rng>(rng: &mut R, g: &Graph, max_len: usize) -> Automorphism {
    let gens: Vec<Factor> = ls_generators(g, g.n().max(12))
        .unwrap()
        .elements
        .into_iter()
        .filter(|e| e.pure)
        .flat_map(|e| e.auto.factors().to_vec())
        .collect();
    let len = rng.gen_range(0..=max_len);
    let mut factors = Vec::new();
    for _ in 0..len {
        let f = gens.choose(rng).unwrap().clone();
        factors.push(if rng.gen_bool(0.5) { f } else { f.inverse() });
    }
    Automorphism::from_factors(g, factors)
}
