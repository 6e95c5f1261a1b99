//! Small graphs up to isomorphism and a few named families.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

const NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One graph from each isomorphism class on exactly `n ≤ 7` vertices, named
/// `a, b, …`, ordered by their canonical edge masks.
pub fn graphs_up_to_iso(n: usize) -> Result<Vec<Graph>> {
    if n > 7 {
        return Err(Error::Resource("isomorphism catalog limited to 7 vertices".into()));
    }
    let pairs = pair_index(n);
    let mut slot = vec![vec![0usize; n]; n];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        slot[i][j] = k;
        slot[j][i] = k;
    }
    let perms = permutations(n);
    let mut canon = BTreeSet::new();
    for mask in 0u32..(1 << pairs.len()) {
        let best = perms
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| mask >> k & 1 == 1)
                    .fold(0u32, |acc, (_, &(i, j))| acc | 1 << slot[p[i]][p[j]])
            })
            .min()
            .unwrap();
        canon.insert(best);
    }
    canon
        .into_iter()
        .map(|mask| {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|&(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            Graph::new(&NAMES[..n], &edges)
        })
        .collect()
}

/// All isomorphism classes on `1..=n` vertices.
pub fn graphs_up_to(n: usize) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(graphs_up_to_iso(k)?);
    }
    Ok(out)
}
