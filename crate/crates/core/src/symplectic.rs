//! Alternating forms on `H_Γ`, symplectic structures `(w, Q)` and the
//! integral generators preserving `Q`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Deserialize;

use crate::automorphism::{Automorphism, Factor};
use crate::error::{Error, Result};
use crate::graph::{Graph, Letter, VertexSet};
use crate::matrix::IntMatrix;
use crate::words::{commutator, is_surface_relator, normalize, GroupElement};

/// Element of `Λ²H_Γ`, keyed by `(i, j)` with `i < j`; zero entries are never
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WedgeForm {
    terms: BTreeMap<(usize, usize), i64>,
}

impl WedgeForm {
    pub fn zero() -> WedgeForm {
        WedgeForm::default()
    }

    /// `[a] ∧ [b]` for signed letters.
    pub fn wedge(a: Letter, b: Letter) -> WedgeForm {
        let mut w = WedgeForm::zero();
        w.add_term(a.vertex(), b.vertex(), a.sign() * b.sign());
        w
    }

    /// Add `c · e_i ∧ e_j`.
    pub fn add_term(&mut self, i: usize, j: usize, c: i64) {
        if i == j || c == 0 {
            return;
        }
        let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
        let e = self.terms.entry(key).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &WedgeForm) -> WedgeForm {
        let mut r = self.clone();
        for (&(i, j), &c) in &o.terms {
            r.add_term(i, j, c);
        }
        r
    }

    pub fn coeff(&self, i: usize, j: usize) -> i64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => *self.terms.get(&(i, j)).unwrap_or(&0),
            std::cmp::Ordering::Greater => -*self.terms.get(&(j, i)).unwrap_or(&0),
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support(&self) -> VertexSet {
        self.terms.keys().flat_map(|&(i, j)| [i, j]).collect()
    }

    /// Parse `{"a^b": 1, ...}`.
    pub fn from_json(g: &Graph, text: &str) -> Result<WedgeForm> {
        let raw: BTreeMap<String, i64> = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("wedge form JSON at line {} column {}: {e}", e.line(), e.column())))?;
        let mut w = WedgeForm::zero();
        for (key, c) in raw {
            let (a, b) = key.split_once('^').ok_or_else(|| Error::Input(format!("malformed wedge key {key:?}")))?;
            let (i, j) = (g.vertex(a)?, g.vertex(b)?);
            if i == j {
                return Err(Error::Input(format!("degenerate wedge key {key:?}")));
            }
            w.add_term(i, j, c);
        }
        Ok(w)
    }

    pub fn to_json(&self, g: &Graph) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for ((i, j), c) in self.terms() {
            m.insert(format!("{}^{}", g.name(i), g.name(j)), c.into());
        }
        serde_json::Value::Object(m)
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> WedgeDisplay<'a> {
        WedgeDisplay { form: self, graph: g }
    }
}

pub struct WedgeDisplay<'a> {
    form: &'a WedgeForm,
    graph: &'a Graph,
}

impl fmt::Display for WedgeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.form.is_zero() {
            return write!(f, "0");
        }
        for (k, ((i, j), c)) in self.form.terms().enumerate() {
            let sign = match (c < 0, k > 0) {
                (true, true) => "- ",
                (true, false) => "-",
                (false, true) => "+ ",
                (false, false) => "",
            };
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{sign}")?;
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "{}∧{}", self.graph.name(i), self.graph.name(j))?;
        }
        Ok(())
    }
}

/// `[x] ∧ [y] ↦ M[x] ∧ M[y]`, extended bilinearly.
pub fn wedge_act(m: &IntMatrix, form: &WedgeForm) -> WedgeForm {
    let n = m.n();
    let mut out = WedgeForm::zero();
    for ((i, j), c) in form.terms() {
        for r in 0..n {
            let a = m.get(r, i);
            if a == 0 {
                continue;
            }
            for s in 0..n {
                let b = m.get(s, j);
                if b != 0 {
                    out.add_term(r, s, c * a * b);
                }
            }
        }
    }
    out
}

/// Split into the part on adjacent pairs and the part on non-adjacent pairs.
pub fn decompose_v_vperp(g: &Graph, form: &WedgeForm) -> (WedgeForm, WedgeForm) {
    let mut v = WedgeForm::zero();
    let mut vp = WedgeForm::zero();
    for ((i, j), c) in form.terms() {
        if g.adjacent(i, j) {
            v.add_term(i, j, c);
        } else {
            vp.add_term(i, j, c);
        }
    }
    (v, vp)
}

/// `f([a₁,b₁]⋯[a_k,b_k]) = Σ [a_i] ∧ [b_i]` over non-commuting pairs.
pub fn f_of_surface_relator(g: &Graph, w: &GroupElement) -> Result<WedgeForm> {
    let pairs = is_surface_relator(g, w).ok_or_else(|| Error::Input("not a surface relator".into()))?;
    let mut out = WedgeForm::zero();
    for (a, b) in pairs {
        if !g.independent(a, b) {
            out = out.add(&WedgeForm::wedge(a, b));
        }
    }
    Ok(out)
}

/// A symplectic structure `(w, Q)` with its pairing and star bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticStructure {
    /// Non-commuting pairs first (input order), then commuting pairs.
    pairs: Vec<(Letter, Letter)>,
    k: usize,
    w: GroupElement,
    q: WedgeForm,
    star: Vec<Letter>,
}

impl SymplecticStructure {
    /// Validate a pairing covering every vertex exactly once up to sign.
    pub fn new(g: &Graph, pairing: &[(Letter, Letter)]) -> Result<SymplecticStructure> {
        let n = g.n();
        if !n.is_multiple_of(2) {
            return Err(Error::Input(format!("a symplectic structure needs an even vertex count, got {n}")));
        }
        let mut seen = VertexSet::EMPTY;
        for &(a, b) in pairing {
            for l in [a, b] {
                g.check_letter(l)?;
                if seen.contains(l.vertex()) {
                    return Err(Error::Input(format!("vertex {} paired twice", g.name(l.vertex()))));
                }
                seen.insert(l.vertex());
            }
        }
        if seen != g.all() {
            let missing = g.all().minus(seen);
            return Err(Error::Input(format!("pairing misses {}", g.format_vertex_set(missing))));
        }
        let (mut pairs, commuting): (Vec<_>, Vec<_>) = pairing.iter().partition(|(a, b)| !g.independent(*a, *b));
        let k = pairs.len();
        pairs.extend(commuting);
        let mut word = Vec::new();
        for &(a, b) in &pairs[..k] {
            word.extend(commutator(&[a], &[b]));
        }
        let w = normalize(g, &word);
        let mut q = WedgeForm::zero();
        for &(a, b) in &pairs[k..] {
            q = q.add(&WedgeForm::wedge(a, b));
        }
        let mut star = vec![Letter::pos(0); 2 * n];
        for &(a, b) in &pairs {
            star[a.code()] = b;
            star[a.inverse().code()] = b.inverse();
            star[b.code()] = a.inverse();
            star[b.inverse().code()] = a;
        }
        for c in 0..2 * n {
            let l = Letter::from_code(c);
            if star[star[c].code()] != l.inverse() {
                return Err(Error::Invariant("star bijection fails (a*)* = a⁻¹".into()));
            }
        }
        Ok(SymplecticStructure { pairs, k, w, q, star })
    }

    /// Parse `{"pairs":[["a1","b1"],...]}`; entries may carry `^-1`.
    pub fn from_json(g: &Graph, text: &str) -> Result<SymplecticStructure> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            pairs: Vec<(String, String)>,
        }
        let raw: Raw = serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("structure JSON at line {} column {}: {e}", e.line(), e.column())))?;
        let mut pairs = Vec::new();
        for (a, b) in raw.pairs {
            pairs.push((g.parse_letter(&a)?, g.parse_letter(&b)?));
        }
        SymplecticStructure::new(g, &pairs)
    }

    pub fn to_json(&self, g: &Graph) -> serde_json::Value {
        let pairs: Vec<serde_json::Value> =
            self.pairs.iter().map(|&(a, b)| serde_json::json!([g.letter_name(a), g.letter_name(b)])).collect();
        serde_json::json!({ "pairs": pairs })
    }

    pub fn pairs(&self) -> &[(Letter, Letter)] {
        &self.pairs
    }

    /// Number of non-commuting pairs.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn genus(&self) -> usize {
        self.pairs.len()
    }

    pub fn w(&self) -> &GroupElement {
        &self.w
    }

    pub fn q(&self) -> &WedgeForm {
        &self.q
    }

    pub fn star(&self, a: Letter) -> Letter {
        self.star[a.code()]
    }

    pub fn supp_w(&self) -> VertexSet {
        self.pairs[..self.k].iter().flat_map(|&(a, b)| [a.vertex(), b.vertex()]).collect()
    }

    pub fn supp_q(&self) -> VertexSet {
        self.pairs[self.k..].iter().flat_map(|&(a, b)| [a.vertex(), b.vertex()]).collect()
    }

    /// `Q + f(w)`, the full standard symplectic form of the pairing.
    pub fn full_form(&self) -> WedgeForm {
        self.pairs.iter().fold(WedgeForm::zero(), |acc, &(a, b)| acc.add(&WedgeForm::wedge(a, b)))
    }
}

/// `J = Σ (v_b v_aᵀ − v_a v_bᵀ)` over the commuting pairs, so `Ja = a*`.
pub fn j_matrix(g: &Graph, s: &SymplecticStructure) -> IntMatrix {
    let mut j = IntMatrix::zeros(g.n());
    for &(a, b) in &s.pairs()[s.k()..] {
        let sab = a.sign() * b.sign();
        j.set(b.vertex(), a.vertex(), j.get(b.vertex(), a.vertex()) + sab);
        j.set(a.vertex(), b.vertex(), j.get(a.vertex(), b.vertex()) - sab);
    }
    j
}

pub fn preserves_j(g: &Graph, s: &SymplecticStructure, m: &IntMatrix) -> bool {
    let j = j_matrix(g, s);
    m.mul(&j).mul(&m.transpose()) == j
}

/// Membership in the image of the automorphisms fixing `supp w` pointwise:
/// columns outside `supp Q` are standard, and nonzero entries `(a, b)` with
/// `b ∈ supp Q` satisfy `a = b` or `a ≥ b`.
pub fn in_g(g: &Graph, s: &SymplecticStructure, m: &IntMatrix) -> bool {
    let sq = s.supp_q();
    for b in 0..g.n() {
        for a in 0..g.n() {
            let v = m.get(a, b);
            if !sq.contains(b) {
                if v != (a == b) as i64 {
                    return false;
                }
            } else if v != 0 && a != b && !g.dominates(a, b) {
                return false;
            }
        }
    }
    true
}

pub fn q_dominates(g: &Graph, s: &SymplecticStructure, a: Letter, b: Letter) -> Result<bool> {
    let sq = s.supp_q();
    for l in [a, b] {
        g.check_letter(l)?;
        if !sq.contains(l.vertex()) {
            return Err(Error::Input(format!("{} is not over supp Q", g.letter_name(l))));
        }
    }
    Ok(q_dominates_unchecked(g, s, a, b))
}

pub(crate) fn q_dominates_unchecked(g: &Graph, s: &SymplecticStructure, a: Letter, b: Letter) -> bool {
    let bs = s.star(b);
    let as_ = s.star(a);
    if a.vertex() != bs.vertex() {
        g.dominates(a.vertex(), b.vertex()) && g.dominates(bs.vertex(), as_.vertex())
    } else {
        g.dominates(a.vertex(), b.vertex())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QGenKind {
    /// `E_{a,a*}`.
    Single(Letter),
    /// `E_{a,b} E_{b*,a*}⁻¹`.
    Pair(Letter, Letter),
    /// `N_a N_{a*}`.
    Inversion(Letter),
}

impl QGenKind {
    pub fn tag(&self) -> &'static str {
        match self {
            QGenKind::Single(_) => "Qtransvection-single",
            QGenKind::Pair(..) => "Qtransvection-pair",
            QGenKind::Inversion(_) => "Qinversion",
        }
    }

    /// Matrix of the `power`-th power, in closed form.
    pub fn matrix_pow(&self, g: &Graph, s: &SymplecticStructure, power: i64) -> IntMatrix {
        let n = g.n();
        match *self {
            QGenKind::Single(a) => {
                let b = s.star(a);
                IntMatrix::elementary(n, a.vertex(), b.vertex(), power * a.sign() * b.sign())
            }
            QGenKind::Pair(a, b) => {
                let (bs, as_) = (s.star(b), s.star(a));
                let mut m = IntMatrix::elementary(n, a.vertex(), b.vertex(), power * a.sign() * b.sign());
                let (r, c) = (bs.vertex(), as_.vertex());
                m.set(r, c, m.get(r, c) - power * bs.sign() * as_.sign());
                m
            }
            QGenKind::Inversion(a) => {
                let mut m = IntMatrix::identity(n);
                if power % 2 != 0 {
                    m.set(a.vertex(), a.vertex(), -1);
                    let b = s.star(a).vertex();
                    m.set(b, b, -1);
                }
                m
            }
        }
    }

    pub fn matrix(&self, g: &Graph, s: &SymplecticStructure) -> IntMatrix {
        self.matrix_pow(g, s, 1)
    }

    /// Factors of a lift to `Aut A_Γ` built from dominated transvections and
    /// inversions.
    pub fn lift_factors(&self, s: &SymplecticStructure) -> Vec<Factor> {
        match *self {
            QGenKind::Single(a) => vec![Factor::Transvection { mult: a, target: s.star(a) }],
            QGenKind::Pair(a, b) => vec![
                Factor::Transvection { mult: a, target: b },
                Factor::Transvection { mult: s.star(b).inverse(), target: s.star(a) },
            ],
            QGenKind::Inversion(a) => vec![Factor::Inversion(a.vertex()), Factor::Inversion(s.star(a).vertex())],
        }
    }

    pub fn lift(&self, g: &Graph, s: &SymplecticStructure) -> Automorphism {
        Automorphism::from_factors(g, self.lift_factors(s))
    }

    /// The standard-form conditions for this kind.
    pub fn is_standard(&self, g: &Graph, s: &SymplecticStructure) -> bool {
        let sq = s.supp_q();
        match *self {
            QGenKind::Single(a) => {
                let b = s.star(a);
                sq.contains(a.vertex()) && g.dominates(a.vertex(), b.vertex())
            }
            QGenKind::Pair(a, b) => {
                sq.contains(a.vertex())
                    && sq.contains(b.vertex())
                    && a.vertex() != b.vertex()
                    && s.star(a).vertex() != b.vertex()
                    && g.dominates(a.vertex(), b.vertex())
                    && g.dominates(s.star(b).vertex(), s.star(a).vertex())
            }
            QGenKind::Inversion(a) => sq.contains(a.vertex()),
        }
    }

    pub fn label(&self, g: &Graph) -> String {
        let l = |x: Letter| g.letter_name(x);
        match *self {
            QGenKind::Single(a) => format!("E({a},{a}*)", a = l(a)),
            QGenKind::Pair(a, b) => format!("E({},{})E({}*,{}*)^-1", l(a), l(b), l(b), l(a)),
            QGenKind::Inversion(a) => format!("N({a})N({a}*)", a = l(a)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QGenerator {
    pub kind: QGenKind,
    pub matrix: IntMatrix,
    pub lift: Automorphism,
}

/// All standard dominated Q-transvections and Q-inversions, deduplicated by
/// matrix, each with a lift whose homology matrix is checked.
pub fn enumerate_q_generators(g: &Graph, s: &SymplecticStructure) -> Result<Vec<QGenerator>> {
    let sq = s.supp_q();
    let letters: Vec<Letter> = sq.letters().iter().collect();
    let mut kinds = Vec::new();
    for &a in &letters {
        kinds.push(QGenKind::Single(a));
    }
    for &a in &letters {
        for &b in &letters {
            kinds.push(QGenKind::Pair(a, b));
        }
    }
    for &(a, _) in &s.pairs()[s.k()..] {
        kinds.push(QGenKind::Inversion(a));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for kind in kinds {
        if !kind.is_standard(g, s) {
            continue;
        }
        let matrix = kind.matrix(g, s);
        if !seen.insert(matrix.clone()) {
            continue;
        }
        let lift = kind.lift(g, s);
        if lift.homology_matrix() != matrix {
            return Err(Error::Invariant(format!("lift of {} has the wrong homology image", kind.label(g))));
        }
        if wedge_act(&matrix, s.q()) != *s.q() {
            return Err(Error::Invariant(format!("{} does not preserve Q", kind.label(g))));
        }
        out.push(QGenerator { kind, matrix, lift });
    }
    Ok(out)
}

/// `α(w) = w` as elements and `α_*` fixes `Q`.
pub fn preserves_structure(g: &Graph, alpha: &Automorphism, s: &SymplecticStructure) -> bool {
    alpha.apply(g, s.w().letters()) == *s.w() && wedge_act(&alpha.homology_matrix(), s.q()) == *s.q()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn structure(g: &Graph, pairs: &[(&str, &str)]) -> SymplecticStructure {
        let p: Vec<_> = pairs.iter().map(|(a, b)| (g.parse_letter(a).unwrap(), g.parse_letter(b).unwrap())).collect();
        SymplecticStructure::new(g, &p).unwrap()
    }

    #[test]
    fn extremes() {
        let e = Graph::edgeless(&["a1", "b1", "a2", "b2"]).unwrap();
        let s = structure(&e, &[("a1", "b1"), ("a2", "b2")]);
        assert!(s.q().is_zero());
        assert_eq!(s.w().len(), 8);
        let k = Graph::complete(&["a1", "b1", "a2", "b2"]).unwrap();
        let s = structure(&k, &[("a1", "b1"), ("a2", "b2")]);
        assert!(s.w().is_identity());
        assert_eq!(s.q().terms().count(), 2);
    }

    #[test]
    fn join_mixed() {
        // K₂ {u,v} joined with edgeless {a,b}
        let g = Graph::parse("vertices: a b u v\nedges: u-v a-u a-v b-u b-v").unwrap();
        let s = structure(&g, &[("u", "v"), ("a", "b")]);
        assert_eq!(s.k(), 1);
        assert_eq!(s.q().terms().count(), 1);
        assert_eq!(s.supp_w().union(s.supp_q()), g.all());
        assert!(s.supp_w().intersect(s.supp_q()).is_empty());
    }

    #[test]
    fn bad_pairings() {
        let g = Graph::edgeless(&["a", "b", "c"]).unwrap();
        assert!(SymplecticStructure::new(&g, &[(Letter::pos(0), Letter::pos(1))]).is_err());
        let g = Graph::edgeless(&["a", "b", "c", "d"]).unwrap();
        assert!(SymplecticStructure::new(&g, &[(Letter::pos(0), Letter::pos(1))]).is_err());
        assert!(SymplecticStructure::new(&g, &[(Letter::pos(0), Letter::pos(1)), (Letter::neg(1), Letter::pos(2))])
            .is_err());
    }

    #[test]
    fn j_sends_a_to_star() {
        let g = Graph::complete(&["a", "b", "c", "d"]).unwrap();
        let s = structure(&g, &[("a", "b^-1"), ("c", "d")]);
        let j = j_matrix(&g, &s);
        for a in s.supp_q().letters().iter() {
            let mut v = [0; 4];
            v[a.vertex()] = a.sign();
            let jv: Vec<i64> = (0..4).map(|r| (0..4).map(|c| j.get(r, c) * v[c]).sum()).collect();
            let st = s.star(a);
            let mut expect = vec![0; 4];
            expect[st.vertex()] = st.sign();
            assert_eq!(jv, expect);
        }
    }

    #[test]
    fn q_generators_fix_q() {
        let g = Graph::complete(&["a", "b"]).unwrap();
        let s = structure(&g, &[("a", "b")]);
        let a = Letter::pos(0);
        assert_eq!(wedge_act(&QGenKind::Inversion(a).matrix(&g, &s), s.q()), *s.q());
        assert_eq!(wedge_act(&QGenKind::Single(a).matrix(&g, &s), s.q()), *s.q());
        assert_eq!(wedge_act(&IntMatrix::identity(2), s.q()), *s.q());
        let gens = enumerate_q_generators(&g, &s).unwrap();
        assert!(gens.iter().any(|q| q.matrix == IntMatrix::elementary(2, 0, 1, 1)));
        let e = Graph::edgeless(&["a", "b"]).unwrap();
        assert!(enumerate_q_generators(&e, &structure(&e, &[("a", "b")])).unwrap().is_empty());
    }

    #[test]
    fn decomposition_and_f() {
        let g = Graph::parse("vertices: a b c\nedges: a-b b-c").unwrap();
        let mut w = WedgeForm::zero();
        w.add_term(0, 1, 1);
        w.add_term(0, 2, 1);
        let (v, vp) = decompose_v_vperp(&g, &w);
        assert_eq!(v, WedgeForm::wedge(Letter::pos(0), Letter::pos(1)));
        assert_eq!(vp, WedgeForm::wedge(Letter::pos(0), Letter::pos(2)));
        let e = Graph::edgeless(&["a", "b"]).unwrap();
        let rel = normalize(&e, &commutator(&[Letter::pos(0)], &[Letter::pos(1)]));
        assert_eq!(f_of_surface_relator(&e, &rel).unwrap(), WedgeForm::wedge(Letter::pos(0), Letter::pos(1)));
        assert!(f_of_surface_relator(&e, &GroupElement::identity()).unwrap().is_zero());
        assert!(f_of_surface_relator(&e, &normalize(&e, &[Letter::pos(0)])).is_err());
    }

    #[test]
    fn wedge_json_roundtrip() {
        let g = Graph::edgeless(&["a", "b", "c"]).unwrap();
        let w = WedgeForm::from_json(&g, r#"{"b^a": 2, "a^c": -1}"#).unwrap();
        assert_eq!(w.coeff(0, 1), -2);
        assert_eq!(WedgeForm::from_json(&g, &w.to_json(&g).to_string()).unwrap(), w);
        assert!(WedgeForm::from_json(&g, "{").is_err());
    }
}
