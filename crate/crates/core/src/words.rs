//! Word calculus in the right-angled Artin group.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Letter, LettersDisplay, VertexSet};

/// Default cap on the number of states visited by the rotation closure.
pub const CLOSURE_CAP: usize = 1_000_000;

/// Free reduction up to commutation. Each incoming letter either cancels
/// against an inverse that can be commuted to the end, or is appended.
pub fn reduce(g: &Graph, word: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        let inv = l.inverse();
        let mut hit = None;
        for i in (0..out.len()).rev() {
            let m = out[i];
            if m == inv {
                hit = Some(i);
                break;
            }
            if !g.independent(m, l) {
                break;
            }
        }
        match hit {
            Some(i) => {
                out.remove(i);
            }
            None => out.push(l),
        }
    }
    out
}

/// Lex-least representative of the commutation class of a reduced word:
/// repeatedly emit the least letter that commutes to the front.
pub fn lex_normal(g: &Graph, word: &[Letter]) -> Vec<Letter> {
    let mut rest = word.to_vec();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let j = least_first(g, &rest);
        out.push(rest.remove(j));
    }
    out
}

/// Index of the least letter among those that can be commuted to the front.
fn least_first(g: &Graph, w: &[Letter]) -> usize {
    let mut seen = 0u64;
    let mut best = 0;
    for (j, &l) in w.iter().enumerate() {
        let v = l.vertex();
        if seen & !g.adj_mask(v) == 0 && l < w[best] {
            best = j;
        }
        seen |= 1 << v;
    }
    best
}

/// Positions of letters that can be commuted to the front.
fn first_positions(g: &Graph, w: &[Letter]) -> Vec<usize> {
    let mut seen = 0u64;
    let mut out = Vec::new();
    for (j, &l) in w.iter().enumerate() {
        let v = l.vertex();
        if seen & !g.adj_mask(v) == 0 {
            out.push(j);
        }
        seen |= 1 << v;
    }
    out
}

/// Positions of letters that can be commuted to the end.
fn last_positions(g: &Graph, w: &[Letter]) -> Vec<usize> {
    let mut seen = 0u64;
    let mut out = Vec::new();
    for (j, &l) in w.iter().enumerate().rev() {
        let v = l.vertex();
        if seen & !g.adj_mask(v) == 0 {
            out.push(j);
        }
        seen |= 1 << v;
    }
    out
}

pub fn normalize(g: &Graph, word: &[Letter]) -> GroupElement {
    GroupElement(lex_normal(g, &reduce(g, word)))
}

/// A group element stored in its canonical normal form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct GroupElement(Vec<Letter>);

impl GroupElement {
    pub fn identity() -> GroupElement {
        GroupElement(Vec::new())
    }

    pub fn new(g: &Graph, word: &[Letter]) -> GroupElement {
        normalize(g, word)
    }

    /// Like [`GroupElement::new`] but rejects letters outside the graph.
    pub fn checked(g: &Graph, word: &[Letter]) -> Result<GroupElement> {
        for &l in word {
            g.check_letter(l)?;
        }
        Ok(normalize(g, word))
    }

    pub fn letter(l: Letter) -> GroupElement {
        GroupElement(vec![l])
    }

    /// Wrap letters already known to be in normal form.
    pub(crate) fn from_normal(letters: Vec<Letter>) -> GroupElement {
        GroupElement(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, g: &Graph, other: &GroupElement) -> GroupElement {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        normalize(g, &w)
    }

    pub fn inverse(&self, g: &Graph) -> GroupElement {
        GroupElement(lex_normal(g, &invert_word(&self.0)))
    }

    /// `u⁻¹ · self · u`.
    pub fn conjugate(&self, g: &Graph, u: &GroupElement) -> GroupElement {
        let mut w = invert_word(&u.0);
        w.extend_from_slice(&self.0);
        w.extend_from_slice(&u.0);
        normalize(g, &w)
    }

    pub fn support(&self) -> VertexSet {
        self.0.iter().map(|l| l.vertex()).collect()
    }

    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        exponent_sums(&self.0, n)
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> LettersDisplay<'a> {
        LettersDisplay { graph: g, letters: &self.0 }
    }
}

pub fn invert_word(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inverse()).collect()
}

pub fn exponent_sums(w: &[Letter], n: usize) -> Vec<i64> {
    let mut out = vec![0i64; n];
    for l in w {
        out[l.vertex()] += l.sign();
    }
    out
}

/// `[a,b] = a b a⁻¹ b⁻¹`.
pub fn commutator(a: &[Letter], b: &[Letter]) -> Vec<Letter> {
    let mut w = a.to_vec();
    w.extend_from_slice(b);
    w.extend(invert_word(a));
    w.extend(invert_word(b));
    w
}

/// Support of a word, computed after normalization.
pub fn support(g: &Graph, word: &[Letter]) -> VertexSet {
    normalize(g, word).support()
}

/// Canonical representative of a conjugacy class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct CyclicWord(Vec<Letter>);

impl CyclicWord {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> VertexSet {
        self.0.iter().map(|l| l.vertex()).collect()
    }

    /// The canonical letters read as a group element.
    pub fn to_element(&self) -> GroupElement {
        GroupElement(self.0.clone())
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> LettersDisplay<'a> {
        LettersDisplay { graph: g, letters: &self.0 }
    }
}

/// Cancel `x … x⁻¹` across the seam while some first letter has its inverse
/// among the last letters. Returns `(t, core)` with `word = t · core · t⁻¹`.
pub fn cyclic_reduce_tracked(g: &Graph, word: &[Letter]) -> (Vec<Letter>, Vec<Letter>) {
    let mut w = reduce(g, word);
    let mut t = Vec::new();
    'outer: loop {
        let lasts = last_positions(g, &w);
        for i in first_positions(g, &w) {
            let x = w[i];
            if let Some(&j) = lasts.iter().find(|&&j| w[j] == x.inverse()) {
                // j > i since x⁻¹ cannot commute past x
                w.remove(j);
                w.remove(i);
                t.push(x);
                continue 'outer;
            }
        }
        return (t, w);
    }
}

pub fn cyclic_reduce(g: &Graph, word: &[Letter]) -> Vec<Letter> {
    cyclic_reduce_tracked(g, word).1
}

fn rotate_at(g: &Graph, w: &[Letter], j: usize) -> Vec<Letter> {
    let mut r = Vec::with_capacity(w.len());
    r.extend_from_slice(&w[..j]);
    r.extend_from_slice(&w[j + 1..]);
    r.push(w[j]);
    lex_normal(g, &reduce(g, &r))
}

/// Canonical cyclic form: cyclic reduction followed by the lex-least element
/// of the closure under one-letter rotation and renormalization.
pub fn cyclic_canonical(g: &Graph, word: &[Letter]) -> Result<CyclicWord> {
    cyclic_canonical_capped(g, word, CLOSURE_CAP)
}

pub fn cyclic_canonical_capped(g: &Graph, word: &[Letter], cap: usize) -> Result<CyclicWord> {
    let start = lex_normal(g, &cyclic_reduce(g, word));
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::new();
    let mut best = start.clone();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(w) = queue.pop_front() {
        let mut firsts = first_positions(g, &w);
        firsts.dedup_by_key(|&mut j| w[j]);
        for j in firsts {
            let r = rotate_at(g, &w, j);
            if r.len() != w.len() {
                return Err(Error::Invariant(format!(
                    "rotation shortened a cyclically reduced word: {}",
                    LettersDisplay { graph: g, letters: &w }
                )));
            }
            if seen.contains(&r) {
                continue;
            }
            if seen.len() >= cap {
                return Err(Error::Resource(format!("cyclic closure exceeded {cap} states")));
            }
            if r < best {
                best = r.clone();
            }
            seen.insert(r.clone());
            queue.push_back(r);
        }
    }
    Ok(CyclicWord(best))
}

/// Canonical cyclic form together with a conjugator `t` such that
/// `word = t · canonical · t⁻¹` in the group.
pub fn cyclic_canonical_tracked(g: &Graph, word: &[Letter], cap: usize) -> Result<(CyclicWord, Vec<Letter>)> {
    let (t0, core) = cyclic_reduce_tracked(g, word);
    let start = lex_normal(g, &core);
    let mut seen: HashMap<Vec<Letter>, Vec<Letter>> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut best = start.clone();
    seen.insert(start.clone(), Vec::new());
    queue.push_back(start);
    while let Some(w) = queue.pop_front() {
        let t = seen[&w].clone();
        let mut firsts = first_positions(g, &w);
        firsts.dedup_by_key(|&mut j| w[j]);
        for j in firsts {
            let r = rotate_at(g, &w, j);
            if seen.contains_key(&r) {
                continue;
            }
            if seen.len() >= cap {
                return Err(Error::Resource(format!("cyclic closure exceeded {cap} states")));
            }
            if r < best {
                best = r.clone();
            }
            let mut t2 = t.clone();
            t2.push(w[j]);
            seen.insert(r.clone(), t2);
            queue.push_back(r);
        }
    }
    let mut t = t0;
    t.extend_from_slice(&seen[&best]);
    Ok((CyclicWord(best), reduce(g, &t)))
}

pub fn conjugacy_length(g: &Graph, word: &[Letter]) -> usize {
    cyclic_reduce(g, word).len()
}

/// Search for `[a₁,b₁]⋯[a_k,b_k]` over pairwise distinct letters with
/// distinct underlying vertices whose product is `w`.
pub fn is_surface_relator(g: &Graph, w: &GroupElement) -> Option<Vec<(Letter, Letter)>> {
    let letters = w.letters();
    if letters.is_empty() {
        return Some(Vec::new());
    }
    if !letters.len().is_multiple_of(4) {
        return None;
    }
    let k = letters.len() / 4;
    if k > g.n() / 2 {
        return None;
    }
    // each vertex must occur exactly once with each sign
    let mut count = vec![[0usize; 2]; g.n()];
    for l in letters {
        count[l.vertex()][l.is_inverse() as usize] += 1;
    }
    let supp = w.support();
    if supp.len() != 2 * k || supp.iter().any(|v| count[v] != [1, 1]) {
        return None;
    }
    let mut pairs = Vec::new();
    if relator_search(g, letters.to_vec(), supp, &mut pairs) {
        Some(pairs)
    } else {
        None
    }
}

fn relator_search(g: &Graph, rest: Vec<Letter>, free: VertexSet, pairs: &mut Vec<(Letter, Letter)>) -> bool {
    if rest.is_empty() {
        return true;
    }
    let mut firsts = first_positions(g, &rest);
    firsts.dedup_by_key(|&mut j| rest[j]);
    for j in firsts {
        let a = rest[j];
        for bv in free.iter().filter(|&v| v != a.vertex()) {
            if g.adjacent(a.vertex(), bv) {
                continue;
            }
            for b in [Letter::pos(bv), Letter::neg(bv)] {
                let c = commutator(&[a], &[b]);
                let mut probe = invert_word(&c);
                probe.extend_from_slice(&rest);
                let remainder = reduce(g, &probe);
                if remainder.len() + 4 != rest.len() {
                    continue;
                }
                pairs.push((a, b));
                let mut nfree = free;
                nfree.remove(a.vertex());
                nfree.remove(bv);
                if relator_search(g, remainder, nfree, pairs) {
                    return true;
                }
                pairs.pop();
            }
        }
    }
    false
}

/// Parse whitespace-separated letters with commutator sugar `[u,v]`, where
/// `u` and `v` are themselves words. `1` denotes the empty word unless it
/// names a vertex.
pub fn parse_word(g: &Graph, text: &str) -> Result<Vec<Letter>> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let w = parse_seq(g, &chars, &mut pos, false)?;
    if pos != chars.len() {
        return Err(Error::Input(format!("unexpected {:?} at offset {pos} in word", chars[pos])));
    }
    Ok(w)
}

fn parse_seq(g: &Graph, s: &[char], pos: &mut usize, nested: bool) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    loop {
        while *pos < s.len() && s[*pos].is_whitespace() {
            *pos += 1;
        }
        if *pos >= s.len() {
            return Ok(out);
        }
        match s[*pos] {
            ',' | ']' if nested => return Ok(out),
            '[' => {
                *pos += 1;
                let u = parse_seq(g, s, pos, true)?;
                if *pos >= s.len() || s[*pos] != ',' {
                    return Err(Error::Input(format!("expected ',' in commutator at offset {pos}")));
                }
                *pos += 1;
                let v = parse_seq(g, s, pos, true)?;
                if *pos >= s.len() || s[*pos] != ']' {
                    return Err(Error::Input(format!("expected ']' at offset {pos}")));
                }
                *pos += 1;
                out.extend(commutator(&u, &v));
            }
            c if c == ',' || c == ']' => {
                return Err(Error::Input(format!("unexpected {c:?} at offset {pos} in word")));
            }
            _ => {
                let start = *pos;
                while *pos < s.len() && !s[*pos].is_whitespace() && !matches!(s[*pos], '[' | ']' | ',') {
                    *pos += 1;
                }
                let tok: String = s[start..*pos].iter().collect();
                if tok == "1" && g.vertex("1").is_err() {
                    continue;
                }
                out.push(g.parse_letter(&tok)?);
            }
        }
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.iter().map(|l| l.code()).collect::<Vec<_>>())
    }
}
