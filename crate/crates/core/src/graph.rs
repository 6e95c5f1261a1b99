//! Defining graphs, letters, and the combinatorics built on adjacency.

use std::collections::HashMap;
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// A generator or inverse generator, packed as `2 * vertex + sign_bit`.
///
/// The derived order is the global letter order: vertex order first, then
/// the positive letter before its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(u8);

impl Letter {
    pub fn new(vertex: usize, inverse: bool) -> Letter {
        debug_assert!(vertex < MAX_VERTICES);
        Letter((vertex as u8) << 1 | inverse as u8)
    }

    pub fn pos(vertex: usize) -> Letter {
        Letter::new(vertex, false)
    }

    pub fn neg(vertex: usize) -> Letter {
        Letter::new(vertex, true)
    }

    pub fn from_code(code: usize) -> Letter {
        Letter(code as u8)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// The underlying vertex, `pg` in the usual notation.
    pub fn vertex(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// `self` if `flip` is false, otherwise the inverse letter.
    pub fn signed(self, flip: bool) -> Letter {
        Letter(self.0 ^ flip as u8)
    }
}

/// Set of vertices as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn single(v: usize) -> VertexSet {
        VertexSet(1 << v)
    }

    pub fn full(n: usize) -> VertexSet {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn union(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 | o.0)
    }

    pub fn intersect(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 & o.0)
    }

    pub fn minus(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: VertexSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }

    /// Both signed letters over every vertex of the set.
    pub fn letters(self) -> LetterSet {
        let mut s = LetterSet::EMPTY;
        for v in self.iter() {
            s.insert(Letter::pos(v));
            s.insert(Letter::neg(v));
        }
        s
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// Set of letters as a bitmask indexed by letter code.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct LetterSet(pub u128);

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet(0);

    pub fn contains(self, l: Letter) -> bool {
        self.0 >> l.code() & 1 == 1
    }

    pub fn insert(&mut self, l: Letter) {
        self.0 |= 1 << l.code();
    }

    pub fn remove(&mut self, l: Letter) {
        self.0 &= !(1 << l.code());
    }

    pub fn with(mut self, l: Letter) -> LetterSet {
        self.insert(l);
        self
    }

    pub fn without(mut self, l: Letter) -> LetterSet {
        self.remove(l);
        self
    }

    pub fn union(self, o: LetterSet) -> LetterSet {
        LetterSet(self.0 | o.0)
    }

    pub fn intersect(self, o: LetterSet) -> LetterSet {
        LetterSet(self.0 & o.0)
    }

    pub fn is_subset(self, o: LetterSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Letter> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let c = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(Letter::from_code(c))
        })
    }

    pub fn vertices(self) -> VertexSet {
        self.iter().map(Letter::vertex).collect()
    }
}

impl FromIterator<Letter> for LetterSet {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        let mut s = LetterSet::EMPTY;
        for l in iter {
            s.insert(l);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationClass {
    pub members: VertexSet,
    pub adjacent: bool,
    pub nonadjacent: bool,
}

/// A finite simplicial graph. Vertex order is the input order and is the
/// tie-breaking order for everything downstream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    adj: Vec<u64>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || matches!(c, '^' | '-' | ',' | '[' | ']'))
}

impl Graph {
    pub fn new<S: AsRef<str>>(names: &[S], edges: &[(usize, usize)]) -> Result<Graph> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Input("graph has no vertices".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::Input(format!("at most {MAX_VERTICES} vertices are supported")));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref();
            if !valid_name(name) {
                return Err(Error::Input(format!("invalid vertex name {name:?}")));
            }
            if seen.insert(name.to_string(), i).is_some() {
                return Err(Error::Input(format!("duplicate vertex name {name:?}")));
            }
        }
        let mut adj = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at {}", names[u].as_ref())));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Graph { names: names.iter().map(|s| s.as_ref().to_string()).collect(), adj })
    }

    /// Graph with no edges on the given vertex names.
    pub fn edgeless<S: AsRef<str>>(names: &[S]) -> Result<Graph> {
        Graph::new(names, &[])
    }

    /// Complete graph on the given vertex names.
    pub fn complete<S: AsRef<str>>(names: &[S]) -> Result<Graph> {
        let n = names.len();
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::new(names, &edges)
    }

    /// Parse either the text format or the JSON format (detected by a
    /// leading `{`).
    pub fn parse(text: &str) -> Result<Graph> {
        if text.trim_start().starts_with('{') {
            Graph::parse_json(text)
        } else {
            Graph::parse_text(text)
        }
    }

    pub fn parse_json(text: &str) -> Result<Graph> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            vertices: Vec<String>,
            #[serde(default)]
            edges: Vec<(String, String)>,
        }
        let raw: Raw = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("graph JSON at line {} column {}: {e}", e.line(), e.column())))?;
        let index: HashMap<&str, usize> = raw.vertices.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut edges = Vec::new();
        for (a, b) in &raw.edges {
            let u = *index.get(a.as_str()).ok_or_else(|| Error::Input(format!("unknown endpoint {a:?}")))?;
            let v = *index.get(b.as_str()).ok_or_else(|| Error::Input(format!("unknown endpoint {b:?}")))?;
            edges.push((u, v));
        }
        Graph::new(&raw.vertices, &edges)
    }

    pub fn parse_text(text: &str) -> Result<Graph> {
        let err = |line: usize, msg: String| Error::Input(format!("line {line}: {msg}"));
        let mut names: Option<Vec<String>> = None;
        let mut edge_tokens: Vec<(usize, String)> = Vec::new();
        let mut in_edges = false;
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vertices:") {
                if names.is_some() {
                    return Err(err(lineno, "repeated vertices line".into()));
                }
                let list: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                let mut seen = HashMap::new();
                for name in &list {
                    if !valid_name(name) {
                        return Err(err(lineno, format!("invalid vertex name {name:?}")));
                    }
                    if seen.insert(name.clone(), ()).is_some() {
                        return Err(err(lineno, format!("duplicate vertex name {name:?}")));
                    }
                }
                names = Some(list);
                in_edges = false;
            } else if let Some(rest) = line.strip_prefix("edges:") {
                if names.is_none() {
                    return Err(err(lineno, "edges before vertices".into()));
                }
                in_edges = true;
                for tok in rest.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                    edge_tokens.push((lineno, tok.to_string()));
                }
            } else if in_edges {
                for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
                    edge_tokens.push((lineno, tok.to_string()));
                }
            } else {
                return Err(err(lineno, format!("expected `vertices:` or `edges:`, found {line:?}")));
            }
        }
        let names = names.ok_or_else(|| Error::Input("missing `vertices:` line".into()))?;
        if names.is_empty() {
            return Err(Error::Input("graph has no vertices".into()));
        }
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut edges = Vec::new();
        for (lineno, tok) in edge_tokens {
            let (a, b) = tok.split_once('-').ok_or_else(|| err(lineno, format!("malformed edge {tok:?}")))?;
            let u = *index.get(a).ok_or_else(|| err(lineno, format!("unknown endpoint {a:?}")))?;
            let v = *index.get(b).ok_or_else(|| err(lineno, format!("unknown endpoint {b:?}")))?;
            if u == v {
                return Err(err(lineno, format!("self-loop at {a}")));
            }
            edges.push((u, v));
        }
        Graph::new(&names, &edges)
    }

    /// Text serialization accepted by [`Graph::parse`].
    pub fn to_text(&self) -> String {
        let edges: Vec<String> =
            self.edges().into_iter().map(|(u, v)| format!("{}-{}", self.names[u], self.names[v])).collect();
        format!("vertices: {}\nedges: {}\n", self.names.join(" "), edges.join(", "))
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|s| s == name).ok_or_else(|| Error::Input(format!("unknown vertex {name:?}")))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::Input(format!("vertex id {v} not in graph")))
        }
    }

    pub fn check_letter(&self, l: Letter) -> Result<()> {
        self.check_vertex(l.vertex())
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in VertexSet(self.adj[u]).iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    /// Adjacency bitmask of `v`.
    pub fn adj_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    /// Distinct letters whose vertices are adjacent, so they commute.
    pub fn independent(&self, a: Letter, b: Letter) -> bool {
        self.adjacent(a.vertex(), b.vertex())
    }

    pub fn link(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn star(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v] | 1 << v)
    }

    pub fn neighborhood(&self, v: usize) -> Result<(VertexSet, VertexSet)> {
        self.check_vertex(v)?;
        Ok((self.link(v), self.star(v)))
    }

    /// `lk(y) ⊆ st(x)`.
    pub fn dominates(&self, x: usize, y: usize) -> bool {
        self.link(y).is_subset(self.star(x))
    }

    pub fn dominates_checked(&self, x: usize, y: usize) -> Result<bool> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        Ok(self.dominates(x, y))
    }

    pub fn equivalent(&self, x: usize, y: usize) -> bool {
        self.dominates(x, y) && self.dominates(y, x)
    }

    pub fn domination_classes(&self) -> Result<Vec<DominationClass>> {
        let n = self.n();
        let mut assigned = VertexSet::EMPTY;
        let mut out = Vec::new();
        for v in 0..n {
            if assigned.contains(v) {
                continue;
            }
            let members: VertexSet = (v..n).filter(|&u| self.equivalent(v, u)).collect();
            assigned = assigned.union(members);
            let list: Vec<usize> = members.iter().collect();
            let mut any_adj = false;
            let mut any_non = false;
            for (i, &a) in list.iter().enumerate() {
                for &b in &list[i + 1..] {
                    if self.adjacent(a, b) {
                        any_adj = true;
                    } else {
                        any_non = true;
                    }
                }
            }
            if any_adj && any_non {
                return Err(Error::Invariant(format!(
                    "domination class of {} mixes adjacent and non-adjacent pairs",
                    self.names[v]
                )));
            }
            out.push(DominationClass { members, adjacent: !any_non, nonadjacent: !any_adj });
        }
        Ok(out)
    }

    /// Connected components of the subgraph induced on `set`, ordered by
    /// least vertex.
    pub fn components_of(&self, set: VertexSet) -> Vec<VertexSet> {
        let mut rest = set;
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = VertexSet::single(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = 0u64;
                for v in frontier.iter() {
                    next |= self.adj[v];
                }
                let next = VertexSet(next).intersect(set).minus(comp);
                comp = comp.union(next);
                frontier = next;
            }
            rest = rest.minus(comp);
            out.push(comp);
        }
        out
    }

    /// Components of `Γ − st(v)`.
    pub fn components_minus_star(&self, v: usize) -> Vec<VertexSet> {
        self.components_of(self.all().minus(self.star(v)))
    }

    pub fn components_minus_star_checked(&self, v: usize) -> Result<Vec<VertexSet>> {
        self.check_vertex(v)?;
        Ok(self.components_minus_star(v))
    }

    /// True when the induced subgraph on `set` splits as a join, i.e. its
    /// complement graph is disconnected. Sets of size ≤ 1 are not joins.
    pub fn is_join(&self, set: VertexSet) -> bool {
        if set.len() <= 1 {
            return false;
        }
        let start = set.first().unwrap();
        let mut comp = VertexSet::single(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier.iter() {
                next = next.union(set.minus(self.star(v)));
            }
            let next = next.minus(comp);
            comp = comp.union(next);
            frontier = next;
        }
        comp != set
    }

    /// All adjacency-preserving vertex permutations, identity first, in
    /// lexicographic order of the image vectors.
    pub fn graph_automorphisms(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        let n = self.n();
        if n > cap {
            return Err(Error::Resource(format!(
                "graph automorphism enumeration limited to {cap} vertices, graph has {n}"
            )));
        }
        let deg: Vec<u32> = self.adj.iter().map(|m| m.count_ones()).collect();
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = 0u64;
        self.extend_automorphism(0, &deg, &mut perm, &mut used, &mut out);
        Ok(out)
    }

    fn extend_automorphism(
        &self,
        v: usize,
        deg: &[u32],
        perm: &mut Vec<usize>,
        used: &mut u64,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = self.n();
        if v == n {
            out.push(perm.clone());
            return;
        }
        for t in 0..n {
            if *used >> t & 1 == 1 || deg[t] != deg[v] {
                continue;
            }
            if (0..v).any(|u| self.adjacent(u, v) != self.adjacent(perm[u], t)) {
                continue;
            }
            perm[v] = t;
            *used |= 1 << t;
            self.extend_automorphism(v + 1, deg, perm, used, out);
            *used &= !(1 << t);
        }
        perm[v] = usize::MAX;
    }

    pub fn letter_name(&self, l: Letter) -> String {
        if l.is_inverse() {
            format!("{}^-1", self.names[l.vertex()])
        } else {
            self.names[l.vertex()].clone()
        }
    }

    pub fn parse_letter(&self, tok: &str) -> Result<Letter> {
        let tok = tok.trim();
        let (name, inverse) = match tok.split_once('^') {
            Some((name, "-1")) => (name, true),
            Some((name, "1")) => (name, false),
            Some(_) => return Err(Error::Input(format!("malformed letter {tok:?}"))),
            None => (tok, false),
        };
        Ok(Letter::new(self.vertex(name)?, inverse))
    }

    pub fn format_vertex_set(&self, s: VertexSet) -> String {
        let names: Vec<&str> = s.iter().map(|v| self.name(v)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Display helper for a sequence of letters.
pub struct LettersDisplay<'a> {
    pub graph: &'a Graph,
    pub letters: &'a [Letter],
}

impl fmt::Display for LettersDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, &l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.graph.letter_name(l))?;
        }
        Ok(())
    }
}
