//! Tagged generating sets and the Laurence–Servatius generators.

use std::collections::HashSet;
use std::fmt;

use crate::automorphism::{Automorphism, Factor};
use crate::error::{Error, Result};
use crate::graph::{Graph, Letter, VertexSet};
use crate::words::GroupElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Transvection,
    PartialConjugation,
    Inversion,
    Graphic,
    IAut,
    KZ,
    GZ,
    Se,
    Si,
    Sq,
    Sk,
    Coset,
    Centralizer,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Transvection => "transvection",
            Tag::PartialConjugation => "partial-conjugation",
            Tag::Inversion => "inversion",
            Tag::Graphic => "graphic",
            Tag::IAut => "IAut",
            Tag::KZ => "K_Z",
            Tag::GZ => "G_Z",
            Tag::Se => "S_e",
            Tag::Si => "S_i",
            Tag::Sq => "S_Q",
            Tag::Sk => "S_k",
            Tag::Coset => "coset",
            Tag::Centralizer => "centralizer",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorEntry {
    pub auto: Automorphism,
    pub tag: Tag,
    pub label: String,
    /// Whether the element lies in the pure automorphism group.
    pub pure: bool,
}

#[derive(Clone, Debug, Default)]
pub struct GeneratorSet {
    pub name: String,
    pub elements: Vec<GeneratorEntry>,
}

impl GeneratorSet {
    pub fn new(name: impl Into<String>) -> GeneratorSet {
        GeneratorSet { name: name.into(), elements: Vec::new() }
    }

    pub fn push(&mut self, auto: Automorphism, tag: Tag, label: impl Into<String>, pure: bool) {
        self.elements.push(GeneratorEntry { auto, tag, label: label.into(), pure });
    }

    /// Push unless the images repeat an element already present or are the
    /// identity. Returns whether the element was added.
    pub fn push_new(
        &mut self,
        seen: &mut HashSet<Vec<GroupElement>>,
        auto: Automorphism,
        tag: Tag,
        label: impl Into<String>,
        pure: bool,
    ) -> bool {
        if auto.is_identity() || !seen.insert(auto.images().to_vec()) {
            return false;
        }
        self.push(auto, tag, label, pure);
        true
    }

    pub fn extend(&mut self, other: GeneratorSet) {
        self.elements.extend(other.elements);
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GeneratorEntry> {
        self.elements.iter()
    }

    pub fn with_tag(&self, tag: Tag) -> impl Iterator<Item = &GeneratorEntry> {
        self.elements.iter().filter(move |e| e.tag == tag)
    }

    pub fn count(&self, tag: Tag) -> usize {
        self.with_tag(tag).count()
    }
}

/// A graphic automorphism is pure exactly when it fixes every domination
/// class setwise, i.e. `π(v) ∼ v` for all `v`.
pub fn graphic_is_pure(g: &Graph, perm: &[usize]) -> bool {
    perm.iter().enumerate().all(|(v, &p)| g.equivalent(v, p))
}

/// Dominated transvections, partial conjugations by single components,
/// inversions and nontrivial graphic automorphisms.
pub fn ls_generators(g: &Graph, vertex_cap: usize) -> Result<GeneratorSet> {
    let n = g.n();
    if n > vertex_cap {
        return Err(Error::Resource(format!("generator enumeration limited to {vertex_cap} vertices")));
    }
    let mut out = GeneratorSet::new("Laurence–Servatius generators");
    for m in 0..2 * n {
        let mult = Letter::from_code(m);
        for t in 0..2 * n {
            let target = Letter::from_code(t);
            if mult.vertex() != target.vertex() && g.dominates(mult.vertex(), target.vertex()) {
                let f = Factor::Transvection { mult, target };
                let label = f.label(g);
                out.push(Automorphism::from_factor(g, f), Tag::Transvection, label, true);
            }
        }
    }
    for m in 0..2 * n {
        let mult = Letter::from_code(m);
        for comp in g.components_minus_star(mult.vertex()) {
            let f = Factor::PartialConj { mult, set: comp };
            let label = f.label(g);
            out.push(Automorphism::from_factor(g, f), Tag::PartialConjugation, label, true);
        }
    }
    for v in 0..n {
        let f = Factor::Inversion(v);
        let label = f.label(g);
        out.push(Automorphism::from_factor(g, f), Tag::Inversion, label, true);
    }
    for perm in g.graph_automorphisms(vertex_cap)?.into_iter().skip(1) {
        let pure = graphic_is_pure(g, &perm);
        let f = Factor::Permutation { perm, flips: VertexSet::EMPTY };
        let label = f.label(g);
        out.push(Automorphism::from_factor(g, f), Tag::Graphic, label, pure);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgeless_pair() {
        let g = Graph::edgeless(&["a", "b"]).unwrap();
        let s = ls_generators(&g, 12).unwrap();
        assert_eq!(s.count(Tag::Transvection), 8);
        assert_eq!(s.count(Tag::Inversion), 2);
        assert_eq!(s.count(Tag::Graphic), 1);
        assert_eq!(s.count(Tag::PartialConjugation), 4);
        // the swap is pure since a ∼ b
        assert!(s.with_tag(Tag::Graphic).all(|e| e.pure));
    }

    #[test]
    fn complete_graph() {
        let g = Graph::complete(&["a", "b", "c", "d"]).unwrap();
        let s = ls_generators(&g, 12).unwrap();
        assert_eq!(s.count(Tag::PartialConjugation), 0);
        assert_eq!(s.count(Tag::Transvection), 12 * 4);
        for e in s.iter() {
            assert_eq!(e.auto.homology_matrix().det().abs(), 1);
        }
    }

    #[test]
    fn path_swap_is_pure() {
        let g = Graph::parse("vertices: a b c\nedges: a-b b-c").unwrap();
        let s = ls_generators(&g, 12).unwrap();
        assert!(s.with_tag(Tag::Graphic).all(|e| e.pure));
        let g = Graph::parse("vertices: a b c d\nedges: a-b b-c c-d").unwrap();
        let s = ls_generators(&g, 12).unwrap();
        // reversing P4 swaps a with d, which are not equivalent
        assert!(s.with_tag(Tag::Graphic).all(|e| !e.pure));
    }
}
