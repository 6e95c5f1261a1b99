//! Whitehead automorphisms, their validity predicate, the sets Ω, Ω_ℓ, Ω_s
//! and the peak-reduction test.

use rayon::prelude::*;

use crate::automorphism::{letter_table, substitute, whitehead_image, Automorphism, Factor};
use crate::error::{Error, Result};
use crate::graph::{Graph, Letter, LetterSet, VertexSet};
use crate::words::{commutator, cyclic_reduce, normalize, CyclicWord};

/// Type-1 enumeration is refused beyond this many elements.
pub const TYPE1_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WhiteheadAuto {
    /// `x ↦ π(x)^{±1}`, inverted on `flips`.
    Type1 { perm: Vec<usize>, flips: VertexSet },
    /// `(A, a)` with multiplier `a ∈ A`, `a⁻¹ ∉ A`.
    Type2 { set: LetterSet, mult: Letter },
}

impl WhiteheadAuto {
    pub fn to_factor(&self) -> Factor {
        match self {
            WhiteheadAuto::Type1 { perm, flips } => Factor::Permutation { perm: perm.clone(), flips: *flips },
            WhiteheadAuto::Type2 { set, mult } => Factor::Whitehead { set: *set, mult: *mult },
        }
    }

    pub fn to_automorphism(&self, g: &Graph) -> Automorphism {
        Automorphism::from_factor(g, self.to_factor())
    }

    pub fn inverse(&self) -> WhiteheadAuto {
        match self.to_factor().inverse() {
            Factor::Permutation { perm, flips } => WhiteheadAuto::Type1 { perm, flips },
            Factor::Whitehead { set, mult } => WhiteheadAuto::Type2 { set, mult },
            _ => unreachable!(),
        }
    }

    pub fn is_permutation(&self) -> bool {
        matches!(self, WhiteheadAuto::Type1 { .. })
    }

    /// Images of the positive generators as unreduced words.
    pub fn images(&self, n: usize) -> Vec<Vec<Letter>> {
        match self {
            WhiteheadAuto::Type1 { perm, flips } => {
                (0..n).map(|x| vec![Letter::new(perm[x], flips.contains(x))]).collect()
            }
            WhiteheadAuto::Type2 { set, mult } => (0..n).map(|x| whitehead_image(*set, *mult, x)).collect(),
        }
    }

    pub fn table(&self, n: usize) -> Vec<Vec<Letter>> {
        letter_table(&self.images(n))
    }

    pub fn label(&self, g: &Graph) -> String {
        self.to_factor().label(g)
    }
}

/// `trans(A, a)`: vertices other than `pg a` included with exactly one sign.
pub fn trans_set(set: LetterSet, mult: Letter) -> VertexSet {
    let pos = LetterSet(set.0 & 0x5555_5555_5555_5555_5555_5555_5555_5555);
    let neg = LetterSet((set.0 >> 1) & 0x5555_5555_5555_5555_5555_5555_5555_5555);
    let mut t = LetterSet(pos.0 ^ neg.0).vertices();
    t.remove(mult.vertex());
    t
}

/// Whether `(A, a)` defines an automorphism. Requires `a ∈ A`, `a⁻¹ ∉ A`.
///
/// (i) every letter included with one sign only is dominated by `a`;
/// (ii) each component of `Γ − st(a)` is untouched, fully included with both
/// signs, or a singleton dominated by `a`.
pub fn whitehead_valid(g: &Graph, set: LetterSet, mult: Letter) -> Result<bool> {
    if !set.contains(mult) || set.contains(mult.inverse()) {
        return Err(Error::Input("Whitehead pair needs a ∈ A and a⁻¹ ∉ A".into()));
    }
    Ok(whitehead_valid_unchecked(g, set, mult))
}

pub(crate) fn whitehead_valid_unchecked(g: &Graph, set: LetterSet, mult: Letter) -> bool {
    let a = mult.vertex();
    if trans_set(set, mult).iter().any(|x| !g.dominates(a, x)) {
        return false;
    }
    for comp in g.components_minus_star(a) {
        let touched = set.intersect(comp.letters());
        if touched.is_empty() || touched == comp.letters() {
            continue;
        }
        if comp.len() == 1 && g.dominates(a, comp.first().unwrap()) {
            continue;
        }
        return false;
    }
    true
}

/// Independent check by evaluation: the prescribed images must respect every
/// commutation relation, and the candidate inverse must be a two-sided
/// inverse that also respects them.
pub fn whitehead_valid_oracle(g: &Graph, set: LetterSet, mult: Letter) -> bool {
    let n = g.n();
    let fwd: Vec<Vec<Letter>> = (0..n).map(|x| whitehead_image(set, mult, x)).collect();
    let inv_set = set.without(mult).with(mult.inverse());
    let bwd: Vec<Vec<Letter>> = (0..n).map(|x| whitehead_image(inv_set, mult.inverse(), x)).collect();
    let respects = |imgs: &Vec<Vec<Letter>>| {
        g.edges().iter().all(|&(u, v)| normalize(g, &commutator(&imgs[u], &imgs[v])).is_identity())
    };
    if !respects(&fwd) || !respects(&bwd) {
        return false;
    }
    let ft = letter_table(&fwd);
    let bt = letter_table(&bwd);
    (0..n).all(|x| {
        let gen = [Letter::pos(x)];
        normalize(g, &substitute(&ft, &bwd[x])).letters() == gen
            && normalize(g, &substitute(&bt, &fwd[x])).letters() == gen
    })
}

/// All valid type-2 pairs in deterministic order (multiplier, then set bits).
pub fn type2_all(g: &Graph) -> Vec<WhiteheadAuto> {
    let n = g.n();
    (0..2 * n)
        .into_par_iter()
        .flat_map_iter(|code| {
            let mult = Letter::from_code(code);
            let others: Vec<usize> = (0..n).filter(|&v| v != mult.vertex()).collect();
            let mut out = Vec::new();
            // each other vertex: none, +, −, both
            let total = 1usize << (2 * others.len());
            for mask in 0..total {
                let mut set = LetterSet::EMPTY.with(mult);
                for (i, &v) in others.iter().enumerate() {
                    if mask >> (2 * i) & 1 == 1 {
                        set.insert(Letter::pos(v));
                    }
                    if mask >> (2 * i + 1) & 1 == 1 {
                        set.insert(Letter::neg(v));
                    }
                }
                if whitehead_valid_unchecked(g, set, mult) {
                    out.push(set);
                }
            }
            out.sort();
            out.into_iter().map(move |set| WhiteheadAuto::Type2 { set, mult })
        })
        .collect()
}

/// All `π ∘ ε` for `π ∈ Aut Γ` and sign changes `ε`.
pub fn type1_all(g: &Graph, vertex_cap: usize) -> Result<Vec<WhiteheadAuto>> {
    let n = g.n();
    let perms = g.graph_automorphisms(vertex_cap)?;
    let count = perms.len().saturating_mul(1usize << n.min(40));
    if n >= 40 || count > TYPE1_CAP {
        return Err(Error::Resource(format!("type-1 Whitehead set has {count} elements, cap {TYPE1_CAP}")));
    }
    let mut out = Vec::with_capacity(count);
    for perm in perms {
        for mask in 0..(1u64 << n) {
            out.push(WhiteheadAuto::Type1 { perm: perm.clone(), flips: VertexSet(mask) });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct OmegaSets {
    pub omega: Vec<WhiteheadAuto>,
    pub long_range: Vec<WhiteheadAuto>,
    pub short_range: Vec<WhiteheadAuto>,
}

/// `Ω`, `Ω_ℓ = Type1 ∪ {A ∩ lkl(a) = ∅}` and `Ω_s = {A ⊆ stl(a)}`.
pub fn enumerate_omega(g: &Graph, caps: &crate::Caps) -> Result<OmegaSets> {
    if g.n() > caps.omega_vertices {
        return Err(Error::Resource(format!(
            "Ω enumeration limited to {} vertices, graph has {}",
            caps.omega_vertices,
            g.n()
        )));
    }
    let type1 = type1_all(g, caps.vertices)?;
    let type2 = type2_all(g);
    let mut long_range = type1.clone();
    let mut short_range = Vec::new();
    for w in &type2 {
        if let WhiteheadAuto::Type2 { set, mult } = w {
            let lkl = g.link(mult.vertex()).letters();
            let stl = g.star(mult.vertex()).letters();
            if set.intersect(lkl).is_empty() {
                long_range.push(w.clone());
            }
            if set.is_subset(stl) {
                short_range.push(w.clone());
            }
        }
    }
    let mut omega = type1;
    omega.extend(type2);
    Ok(OmegaSets { omega, long_range, short_range })
}

/// Peak-reduction test for `β_k ⋯ β_1`, with `factors[0] = β_1` acting
/// first. Interior index `i` fails when `L_{i+1} ≤ L_i` and `L_{i−1} ≤ L_i`
/// unless all three lengths are equal.
pub fn is_peak_reduced(g: &Graph, factors: &[WhiteheadAuto], w: &CyclicWord) -> bool {
    let lengths = orbit_lengths(g, factors, w);
    peak_reduced_lengths(&lengths)
}

pub fn orbit_lengths(g: &Graph, factors: &[WhiteheadAuto], w: &CyclicWord) -> Vec<usize> {
    let n = g.n();
    let mut cur = w.letters().to_vec();
    let mut lengths = vec![cur.len()];
    for f in factors {
        cur = substitute(&f.table(n), &cur);
        cur = cyclic_reduce(g, &cur);
        lengths.push(cur.len());
    }
    lengths
}

pub fn peak_reduced_lengths(lengths: &[usize]) -> bool {
    lengths.windows(3).all(|t| {
        let (prev, mid, next) = (t[0], t[1], t[2]);
        let all_equal = prev == mid && mid == next;
        all_equal || !(next <= mid && prev <= mid)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{cyclic_canonical, parse_word};

    fn set(g: &Graph, letters: &[&str]) -> LetterSet {
        letters.iter().map(|s| g.parse_letter(s).unwrap()).collect()
    }

    #[test]
    fn validity_examples() {
        let e = Graph::edgeless(&["a", "b"]).unwrap();
        let a = Letter::pos(0);
        assert!(whitehead_valid(&e, set(&e, &["a"]), a).unwrap());
        assert!(whitehead_valid(&e, set(&e, &["a", "b"]), a).unwrap());
        let p = Graph::parse("vertices: a b c d\nedges: a-b b-c c-d").unwrap();
        assert!(!whitehead_valid(&p, set(&p, &["a", "d"]), a).unwrap());
        assert!(!whitehead_valid_oracle(&p, set(&p, &["a", "d"]), a));
        assert!(whitehead_valid(&e, set(&e, &["a^-1"]), a).is_err());
    }

    #[test]
    fn k2_has_sixteen_type2() {
        let k2 = Graph::complete(&["a", "b"]).unwrap();
        let t2 = type2_all(&k2);
        assert_eq!(t2.len(), 16);
        for code in 0..4 {
            let m = Letter::from_code(code);
            assert_eq!(t2.iter().filter(|w| matches!(w, WhiteheadAuto::Type2 { mult, .. } if *mult == m)).count(), 4);
        }
    }

    #[test]
    fn omega_splits() {
        let caps = crate::Caps::default();
        let e = Graph::edgeless(&["a", "b"]).unwrap();
        let om = enumerate_omega(&e, &caps).unwrap();
        for w in &om.short_range {
            let WhiteheadAuto::Type2 { set, mult } = w else { panic!() };
            assert_eq!(*set, LetterSet::EMPTY.with(*mult));
        }
        let k3 = Graph::complete(&["a", "b", "c"]).unwrap();
        let om = enumerate_omega(&k3, &caps).unwrap();
        for w in &om.long_range {
            if let WhiteheadAuto::Type2 { set, mult } = w {
                assert_eq!(*set, LetterSet::EMPTY.with(*mult));
            }
        }
        assert_eq!(om.long_range.len(), 6 * 8 + 6);
    }

    #[test]
    fn trans_sets() {
        let g = Graph::edgeless(&["a", "b", "c"]).unwrap();
        let a = Letter::pos(0);
        assert!(trans_set(set(&g, &["a"]), a).is_empty());
        assert_eq!(trans_set(set(&g, &["a", "b", "c", "c^-1"]), a), VertexSet::single(1));
    }

    #[test]
    fn peaks() {
        let g = Graph::edgeless(&["a", "b"]).unwrap();
        let w = cyclic_canonical(&g, &parse_word(&g, "a b").unwrap()).unwrap();
        let up = WhiteheadAuto::Type2 { set: set(&g, &["b", "a"]), mult: Letter::pos(1) };
        assert!(is_peak_reduced(&g, std::slice::from_ref(&up), &w));
        // a ↦ ab raises [ab] to [abb]; the inverse lowers it again
        assert_eq!(orbit_lengths(&g, &[up.clone(), up.inverse()], &w), vec![2, 3, 2]);
        assert!(!is_peak_reduced(&g, &[up.clone(), up.inverse()], &w));
        assert!(peak_reduced_lengths(&[4, 4, 4, 4]));
        assert!(!peak_reduced_lengths(&[4, 6, 6]));
        assert!(peak_reduced_lengths(&[6, 4, 6]));
    }

    #[test]
    fn inverse_pairs_compose_to_identity() {
        let g = Graph::parse("vertices: a b c d\nedges: a-b b-c").unwrap();
        for w in type2_all(&g) {
            let a = w.to_automorphism(&g);
            assert!(a.compose(&g, &w.inverse().to_automorphism(&g)).is_identity());
        }
    }
}
