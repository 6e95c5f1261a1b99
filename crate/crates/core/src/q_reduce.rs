//! Factorization of `Q`-preserving matrices into standard dominated
//! Q-transvections and Q-inversions by symplectic row reduction.

use crate::error::{Error, Result};
use crate::graph::{Graph, Letter};
use crate::matrix::IntMatrix;
use crate::symplectic::{in_g, preserves_j, q_dominates_unchecked, QGenKind, SymplecticStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QFactor {
    pub kind: QGenKind,
    pub power: i64,
}

impl QFactor {
    pub fn matrix(&self, g: &Graph, s: &SymplecticStructure) -> IntMatrix {
        self.kind.matrix_pow(g, s, self.power)
    }

    fn inverse(self) -> QFactor {
        match self.kind {
            QGenKind::Inversion(_) => self,
            _ => QFactor { kind: self.kind, power: -self.power },
        }
    }
}

#[derive(Clone, Debug)]
pub struct QFactorization {
    /// `M = F₁ · F₂ ⋯ F_m` as a matrix product.
    pub factors: Vec<QFactor>,
    pub euclid_iterations: usize,
}

impl QFactorization {
    pub fn product(&self, g: &Graph, s: &SymplecticStructure) -> Result<IntMatrix> {
        self.factors.iter().try_fold(IntMatrix::identity(g.n()), |acc, f| acc.try_mul(&f.matrix(g, s)))
    }
}

/// Greedy relabelling: `x_{i+1}` is a Q-domination maximal unlabelled letter
/// (first in letter order), `y_{i+1} = x_{i+1}*`.
pub fn relabel_basis(g: &Graph, s: &SymplecticStructure) -> Vec<(Letter, Letter)> {
    let mut unlabelled = s.supp_q();
    let mut out = Vec::new();
    while !unlabelled.is_empty() {
        let letters: Vec<Letter> = unlabelled.letters().iter().collect();
        let x = *letters
            .iter()
            .find(|&&a| {
                letters.iter().all(|&b| !q_dominates_unchecked(g, s, b, a) || q_dominates_unchecked(g, s, a, b))
            })
            .expect("Q-domination is a preorder, so a maximal element exists");
        let y = s.star(x);
        unlabelled.remove(x.vertex());
        unlabelled.remove(y.vertex());
        out.push((x, y));
    }
    out
}

struct Reducer<'a> {
    g: &'a Graph,
    s: &'a SymplecticStructure,
    a: IntMatrix,
    applied: Vec<QFactor>,
    euclid: usize,
}

impl Reducer<'_> {
    /// `⟨A col, row⟩` for signed basis letters.
    fn coord(&self, col: Letter, row: Letter) -> i64 {
        col.sign() * row.sign() * self.a.get(row.vertex(), col.vertex())
    }

    fn apply(&mut self, kind: QGenKind, power: i64) -> Result<()> {
        if power == 0 {
            return Ok(());
        }
        if !kind.is_standard(self.g, self.s) {
            return Err(Error::Invariant(format!(
                "required Q-domination fails for {} during reduction",
                kind.label(self.g)
            )));
        }
        let f = QFactor { kind, power };
        self.a = f.matrix(self.g, self.s).try_mul(&self.a)?;
        self.applied.push(f);
        Ok(())
    }
}

fn round_div(p: i64, q: i64) -> i64 {
    // nearest integer to p / q
    let (p, q) = if q < 0 { (-(p as i128), -(q as i128)) } else { (p as i128, q as i128) };
    (2 * p + q).div_euclid(2 * q) as i64
}

/// Factor `m` into standard Q-generators; the product of the returned factors
/// equals `m` exactly.
pub fn q_reduce(g: &Graph, s: &SymplecticStructure, m: &IntMatrix) -> Result<QFactorization> {
    let n = g.n();
    if m.n() != n {
        return Err(Error::Input(format!("matrix is {}×{}, graph has {n} vertices", m.n(), m.n())));
    }
    if s.q().is_zero() {
        return if m.is_identity() {
            Ok(QFactorization { factors: Vec::new(), euclid_iterations: 0 })
        } else {
            Err(Error::Precondition("Q = 0, so only the identity lies in G".into()))
        };
    }
    if !in_g(g, s, m) {
        return Err(Error::Precondition("matrix is not in G".into()));
    }
    if !preserves_j(g, s, m) {
        return Err(Error::Precondition("matrix does not preserve Q".into()));
    }
    let sq = s.supp_q();
    for b in sq.iter() {
        for a in g.all().minus(sq).iter() {
            if m.get(a, b) != 0 {
                return Err(Error::Invariant(format!(
                    "H_Q is not invariant: entry ({}, {}) is nonzero",
                    g.name(a),
                    g.name(b)
                )));
            }
        }
    }

    let basis = relabel_basis(g, s);
    let mut r = Reducer { g, s, a: m.clone(), applied: Vec::new(), euclid: 0 };
    for i in 0..basis.len() {
        let (xi, yi) = basis[i];
        let later: Vec<Letter> = basis[i..].iter().flat_map(|&(x, y)| [x, y]).collect();

        // Step 1: per pair, clear one of the two coordinates
        for &(xj, yj) in &basis[i..] {
            loop {
                let (p, q) = (r.coord(xi, xj), r.coord(xi, yj));
                if p == 0 || q == 0 {
                    break;
                }
                r.euclid += 1;
                if p.abs() >= q.abs() {
                    // E_{x_j,y_j}^t adds t·q to p
                    r.apply(QGenKind::Single(xj), -round_div(p, q))?;
                } else {
                    // E_{y_j,y_j*}^t subtracts t·p from q
                    r.apply(QGenKind::Single(yj), round_div(q, p))?;
                }
            }
        }

        // Step 2: shrink until a single coordinate among later letters survives
        let measure = |r: &Reducer| {
            let vals: Vec<i64> = later.iter().map(|&a| r.coord(xi, a).abs()).collect();
            let max = *vals.iter().max().unwrap();
            (max, vals.iter().filter(|&&v| v == max).count())
        };
        loop {
            let nonzero: Vec<Letter> = later.iter().copied().filter(|&a| r.coord(xi, a) != 0).collect();
            if nonzero.is_empty() {
                return Err(Error::Invariant("column became zero during reduction".into()));
            }
            if nonzero.len() == 1 {
                break;
            }
            let before = measure(&r);
            let a = *nonzero.iter().max_by_key(|&&a| (r.coord(xi, a).abs(), std::cmp::Reverse(a))).unwrap();
            let b = *nonzero.iter().filter(|&&b| b != a).min_by_key(|&&b| (r.coord(xi, b).abs(), b)).unwrap();
            r.euclid += 1;
            r.apply(QGenKind::Pair(a, b), -round_div(r.coord(xi, a), r.coord(xi, b)))?;
            let after = measure(&r);
            if after >= before {
                return Err(Error::Invariant(format!("Step 2 made no progress: {before:?} → {after:?}")));
            }
        }

        // Step 3: move the surviving coordinate onto x_i with value 1
        let a = *later.iter().find(|&&a| r.coord(xi, a) != 0).unwrap();
        if r.coord(xi, a).abs() != 1 {
            return Err(Error::Invariant(format!("surviving entry is {}, expected ±1", r.coord(xi, a))));
        }
        if a.vertex() == yi.vertex() {
            r.apply(QGenKind::Single(yi), -1)?;
            r.apply(QGenKind::Single(xi), -1)?;
            r.apply(QGenKind::Single(yi), -1)?;
        } else if a.vertex() != xi.vertex() {
            // P = Pair(a,x_i) Pair(x_i,a)⁻¹ Pair(a,x_i), applied right to left
            r.apply(QGenKind::Pair(a, xi), 1)?;
            r.apply(QGenKind::Pair(xi, a), -1)?;
            r.apply(QGenKind::Pair(a, xi), 1)?;
        }
        if r.coord(xi, xi) == -1 {
            r.apply(QGenKind::Inversion(xi), 1)?;
        }
        for &b in &later {
            let expect = (b == xi) as i64;
            if r.coord(xi, b) != expect {
                return Err(Error::Invariant(format!(
                    "Step 3 left coordinate {} = {}",
                    g.letter_name(b),
                    r.coord(xi, b)
                )));
            }
        }

        // Step 4: clear the earlier x_j coordinates
        for &(xj, _) in &basis[..i] {
            let c = r.coord(xi, xj);
            r.apply(QGenKind::Pair(xj, xi), -c)?;
        }
        for &(xj, yj) in &basis[..i] {
            if r.coord(xi, xj) != 0 || r.coord(xi, yj) != 0 {
                return Err(Error::Invariant("Step 4 left an earlier coordinate nonzero".into()));
            }
        }
    }

    // Every x_i is now fixed, so A = [[I, B], [0, I]] with B symmetric in the
    // (x, y) basis. Clear B.
    for i in 0..basis.len() {
        let (xi, yi) = basis[i];
        let d = r.coord(yi, xi);
        r.apply(QGenKind::Single(xi), -d)?;
        for &(xj, _) in &basis[..i] {
            let c = r.coord(yi, xj);
            r.apply(QGenKind::Pair(xj, yi), -c)?;
        }
    }
    if !r.a.is_identity() {
        return Err(Error::Invariant("reduction did not terminate at the identity".into()));
    }
    let factors = r.applied.iter().map(|f| f.inverse()).collect();
    Ok(QFactorization { factors, euclid_iterations: r.euclid })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> (Graph, SymplecticStructure) {
        let g = Graph::complete(&["a", "b"]).unwrap();
        let s = SymplecticStructure::new(&g, &[(Letter::pos(0), Letter::pos(1))]).unwrap();
        (g, s)
    }

    #[test]
    fn rounding() {
        for p in -20..=20 {
            for q in (-7..=7).filter(|&q| q != 0) {
                let t = round_div(p, q);
                assert!(2 * (p - t * q).abs() <= q.abs(), "{p} / {q}");
            }
        }
    }

    #[test]
    fn identity_is_empty() {
        let (g, s) = k2();
        assert!(q_reduce(&g, &s, &IntMatrix::identity(2)).unwrap().factors.is_empty());
    }

    #[test]
    fn single_transvection() {
        let (g, s) = k2();
        let m = IntMatrix::elementary(2, 0, 1, 1);
        let f = q_reduce(&g, &s, &m).unwrap();
        assert_eq!(f.product(&g, &s).unwrap(), m);
        assert_eq!(f.factors.len(), 1);
    }

    #[test]
    fn rotation() {
        let (g, s) = k2();
        // x ↦ y, y ↦ −x
        let m = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        let f = q_reduce(&g, &s, &m).unwrap();
        assert_eq!(f.product(&g, &s).unwrap(), m);
        assert!(f.factors.iter().all(|x| x.kind.is_standard(&g, &s)));
    }

    #[test]
    fn relabel_k4() {
        let g = Graph::complete(&["a", "b", "c", "d"]).unwrap();
        let s = SymplecticStructure::new(&g, &[(Letter::pos(0), Letter::pos(1)), (Letter::pos(2), Letter::pos(3))])
            .unwrap();
        assert_eq!(relabel_basis(&g, &s), vec![(Letter::pos(0), Letter::pos(1)), (Letter::pos(2), Letter::pos(3))]);
    }

    #[test]
    fn rejects_outside_g() {
        let (g, s) = k2();
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(q_reduce(&g, &s, &m).unwrap().product(&g, &s).unwrap(), m);
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(matches!(q_reduce(&g, &s, &m), Err(Error::Precondition(_))));
        let e = Graph::edgeless(&["a", "b"]).unwrap();
        let s0 = SymplecticStructure::new(&e, &[(Letter::pos(0), Letter::pos(1))]).unwrap();
        assert!(matches!(q_reduce(&e, &s0, &IntMatrix::elementary(2, 0, 1, 1)), Err(Error::Precondition(_))));
    }

    #[test]
    fn symmetric_residual_is_cleared() {
        let g = Graph::complete(&["a", "b", "c", "d"]).unwrap();
        let s = SymplecticStructure::new(&g, &[(Letter::pos(0), Letter::pos(1)), (Letter::pos(2), Letter::pos(3))])
            .unwrap();
        let m = QGenKind::Pair(Letter::pos(0), Letter::pos(3)).matrix(&g, &s);
        let f = q_reduce(&g, &s, &m).unwrap();
        assert_eq!(f.product(&g, &s).unwrap(), m);
    }
}
