//! Automorphisms as factorizations into elementary generators, with cached
//! images of the generators.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, Letter, LetterSet, VertexSet};
use crate::matrix::IntMatrix;
use crate::whitehead::whitehead_valid;
use crate::words::{commutator, cyclic_canonical, invert_word, normalize, CyclicWord, GroupElement};

/// One elementary generator. Each has a closed-form inverse of the same kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// `τ_{m,t}`: `t ↦ t m`, where `t` may be an inverse letter.
    Transvection {
        mult: Letter,
        target: Letter,
    },
    /// `c_{m,Y}`: `y ↦ m⁻¹ y m` for `y ∈ Y`.
    PartialConj {
        mult: Letter,
        set: VertexSet,
    },
    Inversion(usize),
    /// `x ↦ π(x)^{±1}`, inverted exactly on `flips`.
    Permutation {
        perm: Vec<usize>,
        flips: VertexSet,
    },
    /// Whitehead automorphism `(A, a)`.
    Whitehead {
        set: LetterSet,
        mult: Letter,
    },
    /// `τ_{[x,y],c}`: `c ↦ c [x,y]`.
    CommTransvection {
        x: Letter,
        y: Letter,
        target: Letter,
    },
    /// `y ↦ u⁻¹ y u`.
    Inner(Vec<Letter>),
}

impl Factor {
    /// Image of the positive generator `x` as an unreduced word.
    pub fn image(&self, x: usize) -> Vec<Letter> {
        let gen = Letter::pos(x);
        match self {
            Factor::Transvection { mult, target } => {
                if target.vertex() != x {
                    vec![gen]
                } else if target.is_inverse() {
                    vec![mult.inverse(), gen]
                } else {
                    vec![gen, *mult]
                }
            }
            Factor::PartialConj { mult, set } => {
                if set.contains(x) {
                    vec![mult.inverse(), gen, *mult]
                } else {
                    vec![gen]
                }
            }
            Factor::Inversion(v) => vec![gen.signed(*v == x)],
            Factor::Permutation { perm, flips } => vec![Letter::new(perm[x], flips.contains(x))],
            Factor::Whitehead { set, mult } => whitehead_image(*set, *mult, x),
            Factor::CommTransvection { x: a, y: b, target } => {
                if target.vertex() != x {
                    return vec![gen];
                }
                let c = commutator(&[*a], &[*b]);
                if target.is_inverse() {
                    let mut w = invert_word(&c);
                    w.push(gen);
                    w
                } else {
                    let mut w = vec![gen];
                    w.extend(c);
                    w
                }
            }
            Factor::Inner(u) => {
                let mut w = invert_word(u);
                w.push(gen);
                w.extend_from_slice(u);
                w
            }
        }
    }

    pub fn inverse(&self) -> Factor {
        match self {
            Factor::Transvection { mult, target } => Factor::Transvection { mult: mult.inverse(), target: *target },
            Factor::PartialConj { mult, set } => Factor::PartialConj { mult: mult.inverse(), set: *set },
            Factor::Inversion(v) => Factor::Inversion(*v),
            Factor::Permutation { perm, flips } => {
                let mut inv = vec![0; perm.len()];
                let mut iflips = VertexSet::EMPTY;
                for (x, &p) in perm.iter().enumerate() {
                    inv[p] = x;
                    if flips.contains(x) {
                        iflips.insert(p);
                    }
                }
                Factor::Permutation { perm: inv, flips: iflips }
            }
            Factor::Whitehead { set, mult } => {
                Factor::Whitehead { set: set.without(*mult).with(mult.inverse()), mult: mult.inverse() }
            }
            Factor::CommTransvection { x, y, target } => Factor::CommTransvection { x: *y, y: *x, target: *target },
            Factor::Inner(u) => Factor::Inner(invert_word(u)),
        }
    }

    /// Check that the token denotes an automorphism of `A_Γ`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.n();
        let bad = |m: String| Err(Error::Input(m));
        match self {
            Factor::Transvection { mult, target } => {
                g.check_letter(*mult)?;
                g.check_letter(*target)?;
                if mult.vertex() == target.vertex() {
                    return bad("transvection needs distinct vertices".into());
                }
                if !g.dominates(mult.vertex(), target.vertex()) {
                    return bad(format!(
                        "transvection τ({},{}) needs {} ≥ {}",
                        g.letter_name(*mult),
                        g.letter_name(*target),
                        g.name(mult.vertex()),
                        g.name(target.vertex())
                    ));
                }
            }
            Factor::PartialConj { mult, set } => {
                g.check_letter(*mult)?;
                if !set.is_subset(g.all()) {
                    return bad("partial conjugation set outside the graph".into());
                }
                let comps = g.components_minus_star(mult.vertex());
                let covered = comps.iter().filter(|c| c.is_subset(*set)).fold(VertexSet::EMPTY, |a, c| a.union(*c));
                if covered != *set {
                    return bad(format!(
                        "{} is not a union of components of Γ − st({})",
                        g.format_vertex_set(*set),
                        g.name(mult.vertex())
                    ));
                }
            }
            Factor::Inversion(v) => g.check_vertex(*v)?,
            Factor::Permutation { perm, flips } => {
                if perm.len() != n || !flips.is_subset(g.all()) {
                    return bad("permutation has wrong size".into());
                }
                let mut seen = VertexSet::EMPTY;
                for &p in perm {
                    if p >= n || seen.contains(p) {
                        return bad("not a permutation".into());
                    }
                    seen.insert(p);
                }
                for u in 0..n {
                    for v in 0..n {
                        if g.adjacent(u, v) != g.adjacent(perm[u], perm[v]) {
                            return bad("permutation is not a graph automorphism".into());
                        }
                    }
                }
            }
            Factor::Whitehead { set, mult } => {
                g.check_letter(*mult)?;
                if !set.is_subset(g.all().letters()) {
                    return bad("Whitehead set outside the graph".into());
                }
                if !whitehead_valid(g, *set, *mult)? {
                    return bad("Whitehead pair does not define an automorphism".into());
                }
            }
            Factor::CommTransvection { x, y, target } => {
                for l in [x, y, target] {
                    g.check_letter(*l)?;
                }
                let (a, b, c) = (x.vertex(), y.vertex(), target.vertex());
                if a == b || a == c || b == c {
                    return bad("commutator transvection needs distinct vertices".into());
                }
                if !(g.dominates(a, c) && g.dominates(b, c)) {
                    return bad("commutator transvection needs x, y ≥ c".into());
                }
            }
            Factor::Inner(u) => {
                for l in u {
                    g.check_letter(*l)?;
                }
            }
        }
        Ok(())
    }

    pub fn label(&self, g: &Graph) -> String {
        let l = |x: &Letter| g.letter_name(*x);
        match self {
            Factor::Transvection { mult, target } => format!("tv({},{})", l(mult), l(target)),
            Factor::PartialConj { mult, set } => format!("pc({};{})", l(mult), g.format_vertex_set(*set)),
            Factor::Inversion(v) => format!("inv({})", g.name(*v)),
            Factor::Permutation { perm, flips } => {
                let mut s = String::from("perm(");
                for (x, &p) in perm.iter().enumerate() {
                    if x > 0 {
                        s.push(' ');
                    }
                    let _ = write!(s, "{}>{}", g.name(x), g.letter_name(Letter::new(p, flips.contains(x))));
                }
                s.push(')');
                s
            }
            Factor::Whitehead { set, mult } => {
                let names: Vec<String> = set.iter().map(|x| g.letter_name(x)).collect();
                format!("wh({{{}}},{})", names.join(","), l(mult))
            }
            Factor::CommTransvection { x, y, target } => format!("ctv([{},{}],{})", l(x), l(y), l(target)),
            Factor::Inner(u) => {
                let names: Vec<String> = u.iter().map(|x| g.letter_name(*x)).collect();
                format!("conj({})", names.join(" "))
            }
        }
    }
}

/// Image of generator `x` under the Whitehead automorphism `(A, a)`.
pub fn whitehead_image(set: LetterSet, mult: Letter, x: usize) -> Vec<Letter> {
    let gen = Letter::pos(x);
    if x == mult.vertex() {
        return vec![gen];
    }
    match (set.contains(gen), set.contains(gen.inverse())) {
        (true, true) => vec![mult.inverse(), gen, mult],
        (true, false) => vec![gen, mult],
        (false, true) => vec![mult.inverse(), gen],
        (false, false) => vec![gen],
    }
}

/// Per-letter image table: entry `code` holds the image of that letter.
pub fn letter_table(images: &[Vec<Letter>]) -> Vec<Vec<Letter>> {
    let mut t = Vec::with_capacity(images.len() * 2);
    for img in images {
        t.push(img.clone());
        t.push(invert_word(img));
    }
    t
}

pub fn substitute(table: &[Vec<Letter>], word: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(word.len() * 3);
    for l in word {
        out.extend_from_slice(&table[l.code()]);
    }
    out
}

/// An automorphism of `A_Γ`, kept as a factorization. The rightmost factor
/// acts first. Equality compares the cached images.
#[derive(Clone, Debug)]
pub struct Automorphism {
    factors: Vec<Factor>,
    images: Vec<GroupElement>,
}

impl PartialEq for Automorphism {
    fn eq(&self, o: &Self) -> bool {
        self.images == o.images
    }
}

impl Eq for Automorphism {}

impl Automorphism {
    pub fn identity(g: &Graph) -> Automorphism {
        Automorphism { factors: Vec::new(), images: (0..g.n()).map(|x| GroupElement::letter(Letter::pos(x))).collect() }
    }

    pub fn from_factor(g: &Graph, f: Factor) -> Automorphism {
        let images = (0..g.n()).map(|x| normalize(g, &f.image(x))).collect();
        Automorphism { factors: vec![f], images }
    }

    /// Product `f₁ ∘ f₂ ∘ ⋯ ∘ f_k` (so `f_k` acts first). No validation.
    pub fn from_factors(g: &Graph, factors: Vec<Factor>) -> Automorphism {
        let mut cur: Vec<Vec<Letter>> = (0..g.n()).map(|x| vec![Letter::pos(x)]).collect();
        for f in factors.iter().rev() {
            let table = letter_table(&(0..g.n()).map(|x| f.image(x)).collect::<Vec<_>>());
            for img in cur.iter_mut() {
                *img = normalize(g, &substitute(&table, img)).into_letters();
            }
        }
        let images = cur.into_iter().map(GroupElement::from_normal).collect();
        Automorphism { factors, images }
    }

    /// Validating constructor for untrusted factor lists.
    pub fn checked(g: &Graph, factors: Vec<Factor>) -> Result<Automorphism> {
        for f in &factors {
            f.validate(g)?;
        }
        Ok(Automorphism::from_factors(g, factors))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn image(&self, x: usize) -> &GroupElement {
        &self.images[x]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, img)| img.letters() == [Letter::pos(x)])
    }

    pub fn table(&self) -> Vec<Vec<Letter>> {
        letter_table(&self.images.iter().map(|e| e.letters().to_vec()).collect::<Vec<_>>())
    }

    pub fn apply(&self, g: &Graph, word: &[Letter]) -> GroupElement {
        normalize(g, &substitute(&self.table(), word))
    }

    pub fn apply_checked(&self, g: &Graph, word: &[Letter]) -> Result<GroupElement> {
        if self.images.len() != g.n() {
            return Err(Error::Input("automorphism belongs to a different graph".into()));
        }
        for &l in word {
            g.check_letter(l)?;
        }
        Ok(self.apply(g, word))
    }

    pub fn apply_cyclic(&self, g: &Graph, w: &CyclicWord) -> Result<CyclicWord> {
        cyclic_canonical(g, &substitute(&self.table(), w.letters()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, g: &Graph, other: &Automorphism) -> Automorphism {
        let table = self.table();
        let images = other.images.iter().map(|img| normalize(g, &substitute(&table, img.letters()))).collect();
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Automorphism { factors, images }
    }

    pub fn inverse(&self, g: &Graph) -> Automorphism {
        Automorphism::from_factors(g, self.factors.iter().rev().map(Factor::inverse).collect())
    }

    /// `c_u ∘ self`, where `c_u(y) = u⁻¹ y u`.
    pub fn then_conjugate(&self, g: &Graph, u: &[Letter]) -> Automorphism {
        if u.is_empty() {
            return self.clone();
        }
        Automorphism::from_factor(g, Factor::Inner(u.to_vec())).compose(g, self)
    }

    /// Column `x` holds the exponent sums of the image of `x`.
    pub fn homology_matrix(&self) -> IntMatrix {
        let n = self.images.len();
        IntMatrix::from_columns(&self.images.iter().map(|img| img.exponent_sums(n)).collect::<Vec<_>>())
    }

    pub fn label(&self, g: &Graph) -> String {
        if self.factors.is_empty() {
            return "id".into();
        }
        self.factors.iter().map(|f| f.label(g)).collect::<Vec<_>>().join(" ")
    }
}
