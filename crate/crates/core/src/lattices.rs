//! Finite lattices, join-morphisms, products and the Möbius function.
//!
//! Elements are indices `0..size`. A product `T × T'` indexes the pair `(a, b)`
//! as `a·|T'| + b`.

use std::fmt;
use std::sync::Arc;

use crate::kernel::{Matrix, Scalar, SparseVec};
use crate::text::{parse_header, Lines, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("not a lattice: elements {0} and {1} have no {2}")]
    NotALattice(usize, usize, &'static str),
    #[error("cycle detected through element {0}")]
    Cycle(usize),
    #[error("cover ({0}, {1}) is out of range for a lattice of size {2}")]
    OutOfRange(usize, usize, usize),
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("not a join-morphism: {0}")]
    NotJoinMorphism(String),
    #[error("unknown lattice `{0}`")]
    Unknown(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    size: usize,
    leq: Vec<bool>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl Lattice {
    /// Builds a lattice from its Hasse diagram. Redundant (non-covering) pairs are harmless.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Lattice, LatticeError> {
        if size == 0 {
            return Err(LatticeError::Empty);
        }
        let mut leq = vec![false; size * size];
        for i in 0..size {
            leq[i * size + i] = true;
        }
        for &(a, b) in covers {
            if a >= size || b >= size {
                return Err(LatticeError::OutOfRange(a, b, size));
            }
            if a == b {
                return Err(LatticeError::Cycle(a));
            }
            leq[a * size + b] = true;
        }
        // Warshall closure.
        for k in 0..size {
            for i in 0..size {
                if leq[i * size + k] {
                    for j in 0..size {
                        if leq[k * size + j] {
                            leq[i * size + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..size {
            for j in 0..size {
                if i != j && leq[i * size + j] && leq[j * size + i] {
                    return Err(LatticeError::Cycle(i));
                }
            }
        }
        Self::from_order(size, leq)
    }

    /// Builds a lattice from a full order matrix, row-major `leq[a·size + b] = (a ≤ b)`.
    /// The relation must already be a partial order.
    pub fn from_order(size: usize, leq: Vec<bool>) -> Result<Lattice, LatticeError> {
        if size == 0 {
            return Err(LatticeError::Empty);
        }
        assert_eq!(leq.len(), size * size);
        let le = |a: usize, b: usize| leq[a * size + b];
        let mut join = vec![0; size * size];
        let mut meet = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                let uppers: Vec<usize> = (0..size).filter(|&c| le(a, c) && le(b, c)).collect();
                let j = uppers
                    .iter()
                    .copied()
                    .find(|&c| uppers.iter().all(|&d| le(c, d)))
                    .ok_or(LatticeError::NotALattice(a, b, "join"))?;
                let lowers: Vec<usize> = (0..size).filter(|&c| le(c, a) && le(c, b)).collect();
                let m = lowers
                    .iter()
                    .copied()
                    .find(|&c| lowers.iter().all(|&d| le(d, c)))
                    .ok_or(LatticeError::NotALattice(a, b, "meet"))?;
                join[a * size + b] = j;
                meet[a * size + b] = m;
            }
        }
        let bottom = (0..size).fold(0, |acc, t| meet[acc * size + t]);
        let top = (0..size).fold(0, |acc, t| join[acc * size + t]);
        Ok(Lattice {
            size,
            leq,
            join,
            meet,
            bottom,
            top,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    /// `⋁A`, with `⋁∅ = 0̂`.
    pub fn join_of_subset<I: IntoIterator<Item = usize>>(&self, a: I) -> usize {
        a.into_iter().fold(self.bottom, |acc, t| self.join(acc, t))
    }

    /// Covering pairs `(a, b)` with `a ⋖ b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.lt(a, b) && !self.elements().any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Elements sorted so that `a < b` implies `a` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.elements().collect();
        let below = |t: usize| self.elements().filter(|&s| self.leq(s, t)).count();
        order.sort_by_key(|&t| (below(t), t));
        order
    }

    pub fn product(&self, other: &Lattice) -> Lattice {
        let n = self.size * other.size;
        let m = other.size;
        let mut leq = vec![false; n * n];
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for p in 0..n {
            for q in 0..n {
                let (a, b) = (p / m, p % m);
                let (c, d) = (q / m, q % m);
                leq[p * n + q] = self.leq(a, c) && other.leq(b, d);
                join[p * n + q] = self.join(a, c) * m + other.join(b, d);
                meet[p * n + q] = self.meet(a, c) * m + other.meet(b, d);
            }
        }
        Lattice {
            size: n,
            leq,
            join,
            meet,
            bottom: self.bottom * m + other.bottom,
            top: self.top * m + other.top,
        }
    }

    pub fn is_distributive(&self) -> bool {
        self.elements().all(|a| {
            self.elements().all(|b| {
                self.elements()
                    .all(|c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c)))
            })
        })
    }

    /// Möbius function `χ(t, s)`; zero unless `t ≤ s`.
    pub fn mobius(&self, t: usize, s: usize) -> i64 {
        self.mobius_row(t)[s]
    }

    /// `χ(t, ·)` for every element.
    pub fn mobius_row(&self, t: usize) -> Vec<i64> {
        let mut chi = vec![0i64; self.size];
        for s in self.linear_extension() {
            if s == t {
                chi[s] = 1;
            } else if self.leq(t, s) {
                chi[s] = -self
                    .elements()
                    .filter(|&r| self.leq(t, r) && self.lt(r, s))
                    .map(|r| chi[r])
                    .sum::<i64>();
            }
        }
        chi
    }

    /// Change of basis between `g_t` and `f_t = Σ_{s≥t} χ(t,s) g_s`.
    ///
    /// Column `t` of `f_in_g` holds the `g`-coordinates of `f_t`; column `t` of
    /// `g_in_f` holds the `f`-coordinates of `g_t = Σ_{s≥t} f_s`.
    pub fn idempotent_basis(&self) -> IdempotentBasis {
        let f_cols = self
            .elements()
            .map(|t| {
                let row = self.mobius_row(t);
                SparseVec::from_pairs(
                    row.iter()
                        .enumerate()
                        .filter(|(_, c)| **c != 0)
                        .map(|(s, c)| (s, Scalar::from(*c))),
                )
            })
            .collect();
        let g_cols = self
            .elements()
            .map(|t| {
                SparseVec::from_pairs(
                    self.elements()
                        .filter(|&s| self.leq(t, s))
                        .map(|s| (s, Scalar::ONE)),
                )
            })
            .collect();
        IdempotentBasis {
            f_in_g: Matrix::from_columns(self.size, f_cols),
            g_in_f: Matrix::from_columns(self.size, g_cols),
        }
    }

    /// An order isomorphism `self → other`, if one exists.
    pub fn find_isomorphism(&self, other: &Lattice) -> Option<Vec<usize>> {
        if self.size != other.size {
            return None;
        }
        let below = |l: &Lattice, t: usize| l.elements().filter(|&s| l.leq(s, t)).count();
        let sig_a: Vec<usize> = self.elements().map(|t| below(self, t)).collect();
        let sig_b: Vec<usize> = other.elements().map(|t| below(other, t)).collect();
        let order = self.linear_extension();
        let mut image = vec![usize::MAX; self.size];
        let mut used = vec![false; self.size];
        fn go(
            a: &Lattice,
            b: &Lattice,
            order: &[usize],
            k: usize,
            sig_a: &[usize],
            sig_b: &[usize],
            image: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let t = order[k];
            for c in b.elements() {
                if used[c] || sig_a[t] != sig_b[c] {
                    continue;
                }
                let consistent = order[..k]
                    .iter()
                    .all(|&s| a.leq(s, t) == b.leq(image[s], c) && a.leq(t, s) == b.leq(c, image[s]));
                if consistent {
                    image[t] = c;
                    used[c] = true;
                    if go(a, b, order, k + 1, sig_a, sig_b, image, used) {
                        return true;
                    }
                    used[c] = false;
                }
            }
            false
        }
        go(self, other, &order, 0, &sig_a, &sig_b, &mut image, &mut used).then_some(image)
    }

    pub fn is_isomorphic(&self, other: &Lattice) -> bool {
        self.find_isomorphism(other).is_some()
    }

    /// Writes the `lattice` text form using covering pairs.
    pub fn to_text(&self) -> String {
        let mut s = format!("lattice {}\n", self.size);
        for (a, b) in self.covers() {
            s.push_str(&format!("cover {a} {b}\n"));
        }
        s
    }

    pub fn parse(src: &str) -> Result<Lattice, ParseError> {
        let mut lines = Lines::new(src);
        let (no, header) = lines.expect_line("`lattice <size>` header")?;
        let size = parse_header(no, header, "lattice", 1)?[0];
        let mut covers = Vec::new();
        while let Some((no, line)) = lines.next_line() {
            let v = parse_header(no, line, "cover", 2)?;
            if v[0] >= size || v[1] >= size {
                return Err(ParseError::new(no, format!("element out of range for size {size}")));
            }
            covers.push((v[0], v[1]));
        }
        Lattice::from_covers(size, &covers).map_err(|e| ParseError::new(0, e.to_string()))
    }

    /// Human-readable join and meet tables.
    pub fn tables_text(&self) -> String {
        let mut s = String::new();
        for (name, f) in [("join", Lattice::join as fn(&Lattice, usize, usize) -> usize), ("meet", Lattice::meet)] {
            s.push_str(&format!("{name}\n"));
            for a in self.elements() {
                let row: Vec<String> = self.elements().map(|b| f(self, a, b).to_string()).collect();
                s.push_str(&row.join(" "));
                s.push('\n');
            }
        }
        s.push_str(&format!("bottom {}\ntop {}\n", self.bottom, self.top));
        s
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice[{}]{:?}", self.size, self.covers())
    }
}

/// The pair of mutually inverse integer matrices relating the `g` and `f` bases.
#[derive(Clone, Debug)]
pub struct IdempotentBasis {
    pub f_in_g: Matrix,
    pub g_in_f: Matrix,
}

/// A map of lattices preserving all joins, including the empty one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinMorphismMap {
    source: Arc<Lattice>,
    target: Arc<Lattice>,
    image: Vec<usize>,
}

impl JoinMorphismMap {
    /// Validates via "preserves binary joins and `0̂`".
    pub fn new(source: Arc<Lattice>, target: Arc<Lattice>, image: Vec<usize>) -> Result<Self, LatticeError> {
        if image.len() != source.size() || image.iter().any(|&t| t >= target.size()) {
            return Err(LatticeError::NotJoinMorphism("image has the wrong shape".into()));
        }
        if image[source.bottom()] != target.bottom() {
            return Err(LatticeError::NotJoinMorphism("bottom is not preserved".into()));
        }
        for a in source.elements() {
            for b in source.elements() {
                if image[source.join(a, b)] != target.join(image[a], image[b]) {
                    return Err(LatticeError::NotJoinMorphism(format!("join of {a} and {b} is not preserved")));
                }
            }
        }
        Ok(JoinMorphismMap { source, target, image })
    }

    pub fn identity(t: Arc<Lattice>) -> Self {
        let image = t.elements().collect();
        JoinMorphismMap {
            source: t.clone(),
            target: t,
            image,
        }
    }

    /// The map sending everything to `0̂`.
    pub fn zero(source: Arc<Lattice>, target: Arc<Lattice>) -> Self {
        let image = vec![target.bottom(); source.size()];
        JoinMorphismMap { source, target, image }
    }

    pub fn apply(&self, t: usize) -> usize {
        self.image[t]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn source(&self) -> &Arc<Lattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Lattice> {
        &self.target
    }

    /// `f × f'` on product lattices.
    pub fn product(&self, other: &JoinMorphismMap) -> Result<JoinMorphismMap, LatticeError> {
        let src = Arc::new(self.source.product(&other.source));
        let tgt = Arc::new(self.target.product(&other.target));
        let m_src = other.source.size();
        let m_tgt = other.target.size();
        let image = (0..src.size())
            .map(|p| self.image[p / m_src] * m_tgt + other.image[p % m_src])
            .collect();
        JoinMorphismMap::new(src, tgt, image)
    }
}

/// Checks the all-subsets definition `f(⋁A) = ⋁f(A)` directly.
pub fn preserves_all_joins(source: &Lattice, target: &Lattice, image: &[usize]) -> bool {
    let n = source.size();
    assert!(n <= 20, "exhaustive subset check is limited to 20 elements");
    (0u32..1 << n).all(|mask| {
        let a = (0..n).filter(|i| mask >> i & 1 == 1);
        let lhs = image[source.join_of_subset(a.clone())];
        let rhs = target.join_of_subset(a.map(|t| image[t]));
        lhs == rhs
    })
}

/// The chain `n̲ = {0 < 1 < … < n}` with `n + 1` elements.
pub fn chain(n: usize) -> Lattice {
    let covers: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
    Lattice::from_covers(n + 1, &covers).expect("chains are lattices")
}

/// Subsets of `{0, …, n-1}` ordered by inclusion; element `s` is the bitmask.
pub fn powerset(n: usize) -> Lattice {
    let size = 1usize << n;
    let mut leq = vec![false; size * size];
    for a in 0..size {
        for b in 0..size {
            leq[a * size + b] = a & !b == 0;
        }
    }
    Lattice::from_order(size, leq).expect("powersets are lattices")
}

/// `M3`: three pairwise incomparable atoms between `0̂` and `1̂`.
pub fn m3() -> Lattice {
    Lattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).expect("M3")
}

/// `N5`: the pentagon `0 < 1 < 2 < 4`, `0 < 3 < 4`.
pub fn n5() -> Lattice {
    Lattice::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).expect("N5")
}

/// Named lattices: `chain0`..`chain4`, `powerset1`..`powerset3`, `m3`, `n5`.
pub fn corpus() -> Vec<(String, Lattice)> {
    let mut out: Vec<(String, Lattice)> = (0..=4).map(|n| (format!("chain{n}"), chain(n))).collect();
    out.extend((1..=3).map(|n| (format!("powerset{n}"), powerset(n))));
    out.push(("m3".into(), m3()));
    out.push(("n5".into(), n5()));
    out
}

/// Looks up a corpus lattice by name; `diamond` is `powerset2`.
pub fn named(name: &str) -> Result<Lattice, LatticeError> {
    if name == "diamond" {
        return Ok(powerset(2));
    }
    corpus()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, l)| l)
        .ok_or_else(|| LatticeError::Unknown(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond_from_covers() -> Lattice {
        Lattice::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn from_covers_examples() {
        let c = Lattice::from_covers(2, &[(0, 1)]).unwrap();
        assert!(c.is_isomorphic(&chain(1)));
        assert_eq!((c.bottom(), c.top()), (0, 1));
        let d = diamond_from_covers();
        assert!(d.is_isomorphic(&powerset(2)));
        assert_eq!(d.join(1, 2), 3);
        assert_eq!(d.meet(1, 2), 0);
        let m = m3();
        assert_eq!(m.size(), 5);
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            assert_eq!(m.join(a, b), 4);
            assert_eq!(m.meet(a, b), 0);
        }
    }

    #[test]
    fn from_covers_errors() {
        assert_eq!(Lattice::from_covers(2, &[(0, 1), (1, 0)]), Err(LatticeError::Cycle(0)));
        // two minimal elements
        assert!(matches!(
            Lattice::from_covers(3, &[(0, 2), (1, 2)]),
            Err(LatticeError::NotALattice(_, _, "meet"))
        ));
        // two incomparable upper bounds of 0 and 1
        assert!(matches!(
            Lattice::from_covers(6, &[(5, 0), (5, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 4), (3, 4)]),
            Err(LatticeError::NotALattice(0, 1, "join"))
        ));
    }

    #[test]
    fn join_of_subset_examples() {
        let d = powerset(2);
        assert_eq!(d.join_of_subset([]), d.bottom());
        assert_eq!(d.join_of_subset([2]), 2);
        assert_eq!(d.join_of_subset([1, 2]), d.top());
    }

    #[test]
    fn corpus_laws() {
        for (name, t) in corpus() {
            for a in t.elements() {
                assert_eq!(t.join(a, a), a, "{name}");
                assert_eq!(t.meet(a, a), a, "{name}");
                assert!(t.leq(t.bottom(), a) && t.leq(a, t.top()));
                for b in t.elements() {
                    assert_eq!(t.join(a, b), t.join(b, a));
                    assert_eq!(t.meet(a, b), t.meet(b, a));
                    assert_eq!(t.join(a, t.meet(a, b)), a);
                    assert_eq!(t.meet(a, t.join(a, b)), a);
                    for c in t.elements() {
                        assert_eq!(t.join(a, t.join(b, c)), t.join(t.join(a, b), c));
                        assert_eq!(t.meet(a, t.meet(b, c)), t.meet(t.meet(a, b), c));
                    }
                }
            }
        }
        assert_eq!(chain(2).size(), 3);
        assert!(chain(2).elements().all(|a| chain(2).elements().all(|b| chain(2).leq(a, b) || chain(2).leq(b, a))));
        assert!(!n5().is_distributive());
        assert!(!m3().is_distributive());
        assert!(powerset(3).is_distributive());
    }

    #[test]
    fn product_examples() {
        let one = chain(1);
        assert!(one.product(&one).is_isomorphic(&powerset(2)));
        let t = n5();
        assert!(t.product(&chain(0)).is_isomorphic(&t));
        assert_eq!(m3().product(&chain(2)).size(), 15);
    }

    #[test]
    fn mobius_examples() {
        let c = chain(1);
        assert_eq!(c.mobius(0, 0), 1);
        assert_eq!(c.mobius(0, 1), -1);
        assert_eq!(c.mobius(1, 0), 0);
        let d = powerset(2);
        assert_eq!(d.mobius(0, 3), 1);
        assert_eq!(m3().mobius(0, 4), 2);
        for (_, t) in corpus() {
            for a in t.elements() {
                for u in t.elements() {
                    if t.lt(a, u) {
                        let s: i64 = t.elements().filter(|&s| t.leq(a, s) && t.leq(s, u)).map(|s| t.mobius(s, u)).sum();
                        assert_eq!(s, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn idempotent_basis_examples() {
        let b = chain(0).idempotent_basis();
        assert_eq!(b.f_in_g, Matrix::identity(1));
        assert_eq!(b.g_in_f, Matrix::identity(1));
        let b = chain(1).idempotent_basis();
        assert_eq!(b.f_in_g, Matrix::from_i64_rows(&[&[1, 0], &[-1, 1]]));
        assert_eq!(b.g_in_f, Matrix::from_i64_rows(&[&[1, 0], &[1, 1]]));
        for (_, t) in corpus() {
            let b = t.idempotent_basis();
            assert!(b.g_in_f.mul(&b.f_in_g).is_identity());
            assert!(b.f_in_g.mul(&b.g_in_f).is_identity());
        }
    }

    #[test]
    fn join_morphism_criterion_matches_definition() {
        let lats: Vec<Lattice> = corpus().into_iter().map(|(_, l)| l).filter(|l| l.size() <= 4).collect();
        for s in &lats {
            for t in &lats {
                let n = s.size();
                let total = t.size().pow(n as u32);
                for code in 0..total {
                    let image: Vec<usize> = (0..n).map(|i| code / t.size().pow(i as u32) % t.size()).collect();
                    let fast = JoinMorphismMap::new(Arc::new(s.clone()), Arc::new(t.clone()), image.clone()).is_ok();
                    assert_eq!(fast, preserves_all_joins(s, t, &image));
                }
            }
        }
    }

    #[test]
    fn product_of_morphisms_validates() {
        let lats: Vec<Arc<Lattice>> = [chain(0), chain(1), chain(2), powerset(1)].into_iter().map(Arc::new).collect();
        let morphisms = |s: &Arc<Lattice>, t: &Arc<Lattice>| -> Vec<JoinMorphismMap> {
            let n = s.size();
            (0..t.size().pow(n as u32))
                .filter_map(|code| {
                    let image = (0..n).map(|i| code / t.size().pow(i as u32) % t.size()).collect();
                    JoinMorphismMap::new(s.clone(), t.clone(), image).ok()
                })
                .collect()
        };
        for s in &lats {
            for t in &lats {
                for f in morphisms(s, t) {
                    for f2 in morphisms(t, s) {
                        let p = f.product(&f2).expect("product of join-morphisms");
                        assert!(preserves_all_joins(p.source(), p.target(), p.image()));
                    }
                }
            }
        }
        let t = Arc::new(chain(2));
        let id = JoinMorphismMap::identity(t.clone());
        let idp = id.product(&id).unwrap();
        assert!(idp.image().iter().enumerate().all(|(i, &j)| i == j));
        let z = JoinMorphismMap::zero(t.clone(), t.clone());
        let zp = z.product(&z).unwrap();
        assert!(zp.image().iter().all(|&j| j == zp.target().bottom()));
    }

    #[test]
    fn text_roundtrip() {
        for (_, t) in corpus() {
            assert_eq!(Lattice::parse(&t.to_text()).unwrap(), t);
        }
        let e = Lattice::parse("lattice 2\ncover 0 1\ncover 0 5\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = Lattice::parse("lattice 2\ncover 0 1\ncover 1 0\n").unwrap_err();
        assert!(e.message.contains("cycle"));
        assert!(named("diamond").unwrap().is_isomorphic(&powerset(2)));
        assert!(named("chain9").is_err());
    }
}
