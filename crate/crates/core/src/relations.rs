//! Finite sets, correspondences between them, and relation algebras.
//!
//! A correspondence from `X` to `Y` is a subset of `Y × X`, stored as one
//! bitset per target element. Sets are canonical: a set of size `n` has
//! elements `0..n`, and a disjoint union `X ⊔ Y` lists `X` first.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::kernel::Scalar;
use crate::text::{parse_header, Lines, ParseError};

/// Largest source size representable by a row bitset.
pub const MAX_SOURCE: usize = 64;

/// Upper limit on `|Y|·|X|` for exhaustive enumeration.
pub const ENUMERATION_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },
    #[error("cannot enumerate 2^{cells} correspondences (limit is 2^{ENUMERATION_LIMIT})")]
    TooLarge { cells: usize },
    #[error("ground sets differ: {0} vs {1}")]
    GroundMismatch(usize, usize),
}

/// A finite set, identified with `{0, …, size-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSet(pub usize);

impl FiniteSet {
    pub fn size(self) -> usize {
        self.0
    }

    pub fn disjoint_union(self, other: FiniteSet) -> FiniteSet {
        FiniteSet(self.0 + other.0)
    }
}

/// A correspondence `U ⊆ Y × X`, read as a morphism from `X` to `Y`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Correspondence {
    target: usize,
    source: usize,
    rows: Vec<u64>,
}

fn row_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Correspondence {
    /// The empty correspondence in `𝒞(Y, X)`.
    pub fn empty(target: usize, source: usize) -> Self {
        assert!(source <= MAX_SOURCE, "source size {source} exceeds {MAX_SOURCE}");
        Correspondence {
            target,
            source,
            rows: vec![0; target],
        }
    }

    /// `Δ_X`.
    pub fn identity(n: usize) -> Self {
        let mut c = Self::empty(n, n);
        for i in 0..n {
            c.rows[i] = 1 << i;
        }
        c
    }

    pub fn full(target: usize, source: usize) -> Self {
        let mut c = Self::empty(target, source);
        for r in &mut c.rows {
            *r = row_mask(source);
        }
        c
    }

    /// Builds from `(y, x)` pairs; panics on out-of-range pairs.
    pub fn from_pairs(target: usize, source: usize, pairs: &[(usize, usize)]) -> Self {
        let mut c = Self::empty(target, source);
        for &(y, x) in pairs {
            c.insert(y, x);
        }
        c
    }

    pub fn from_rows(target: usize, source: usize, rows: Vec<u64>) -> Self {
        assert!(source <= MAX_SOURCE);
        assert_eq!(rows.len(), target);
        assert!(rows.iter().all(|r| r & !row_mask(source) == 0), "row bits out of range");
        Correspondence { target, source, rows }
    }

    /// Decodes the enumeration code: bit `y·|X| + x` is the pair `(y, x)`.
    pub fn from_code(target: usize, source: usize, code: u64) -> Self {
        assert!(target * source <= 64);
        let mut c = Self::empty(target, source);
        let m = row_mask(source);
        for y in 0..target {
            c.rows[y] = (code >> (y * source)) & m;
        }
        c
    }

    /// Inverse of [`Correspondence::from_code`]; needs `|Y|·|X| ≤ 64`.
    pub fn code(&self) -> u64 {
        assert!(self.target * self.source <= 64);
        self.rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (y, r)| acc | (r << (y * self.source)))
    }

    pub fn random<R: Rng + ?Sized>(target: usize, source: usize, rng: &mut R) -> Self {
        let mut c = Self::empty(target, source);
        for r in &mut c.rows {
            *r = rng.gen::<u64>() & row_mask(source);
        }
        c
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn row(&self, y: usize) -> u64 {
        self.rows[y]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn contains(&self, y: usize, x: usize) -> bool {
        (self.rows[y] >> x) & 1 == 1
    }

    pub fn insert(&mut self, y: usize, x: usize) {
        assert!(y < self.target && x < self.source, "pair ({y},{x}) out of range");
        self.rows[y] |= 1 << x;
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| *r == 0)
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(y, &r)| {
            (0..self.source).filter(move |x| (r >> x) & 1 == 1).map(move |x| (y, x))
        })
    }

    /// Elements of `X` related to `y`.
    pub fn related_to(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        let r = self.rows[y];
        (0..self.source).filter(move |x| (r >> x) & 1 == 1)
    }

    /// `self ∘ u`: first `u`, then `self`.
    pub fn compose(&self, u: &Correspondence) -> Result<Correspondence, RelationError> {
        if self.source != u.target {
            return Err(RelationError::Dimension {
                op: "compose",
                detail: format!(
                    "{}x{} after {}x{}",
                    self.target, self.source, u.target, u.source
                ),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let y = bits.trailing_zeros() as usize;
                    acc |= u.rows[y];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        Ok(Correspondence {
            target: self.target,
            source: u.source,
            rows,
        })
    }

    /// `self ∪ other` for correspondences of the same shape.
    pub fn union(&self, other: &Correspondence) -> Result<Correspondence, RelationError> {
        if self.target != other.target || self.source != other.source {
            return Err(RelationError::Dimension {
                op: "union",
                detail: format!(
                    "{}x{} vs {}x{}",
                    self.target, self.source, other.target, other.source
                ),
            });
        }
        Ok(Correspondence {
            target: self.target,
            source: self.source,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        })
    }

    /// The opposite correspondence in `𝒞(X, Y)`.
    pub fn transpose(&self) -> Correspondence {
        let mut t = Correspondence::empty(self.source, self.target);
        for (y, x) in self.pairs() {
            t.insert(x, y);
        }
        t
    }

    /// `U ⊔ V = [[U, ∅], [∅, V]]`.
    pub fn block_diag(u: &Correspondence, v: &Correspondence) -> Correspondence {
        let source = u.source + v.source;
        assert!(source <= MAX_SOURCE);
        let mut rows = u.rows.clone();
        rows.extend(v.rows.iter().map(|r| r << u.source));
        Correspondence {
            target: u.target + v.target,
            source,
            rows,
        }
    }

    /// Vertical concatenation `(U; V) ∈ 𝒞(X' ⊔ X'', X)`.
    pub fn stack(u: &Correspondence, v: &Correspondence) -> Result<Correspondence, RelationError> {
        if u.source != v.source {
            return Err(RelationError::Dimension {
                op: "stack",
                detail: format!("sources {} and {}", u.source, v.source),
            });
        }
        let mut rows = u.rows.clone();
        rows.extend_from_slice(&v.rows);
        Ok(Correspondence {
            target: u.target + v.target,
            source: u.source,
            rows,
        })
    }

    /// Horizontal concatenation `(U, V) ∈ 𝒞(X, X' ⊔ X'')`.
    pub fn concat(u: &Correspondence, v: &Correspondence) -> Result<Correspondence, RelationError> {
        if u.target != v.target {
            return Err(RelationError::Dimension {
                op: "concat",
                detail: format!("targets {} and {}", u.target, v.target),
            });
        }
        let source = u.source + v.source;
        assert!(source <= MAX_SOURCE);
        Ok(Correspondence {
            target: u.target,
            source,
            rows: u
                .rows
                .iter()
                .zip(&v.rows)
                .map(|(a, b)| a | (b << u.source))
                .collect(),
        })
    }

    /// `(Δ_X ; ∅) ∈ 𝒞(X ⊔ Y, X)`: includes `X` as the first block.
    pub fn left_inclusion(x: usize, y: usize) -> Correspondence {
        Correspondence::stack(&Correspondence::identity(x), &Correspondence::empty(y, x))
            .expect("shapes agree")
    }

    /// `(∅ ; Δ_Y) ∈ 𝒞(X ⊔ Y, Y)`: includes `Y` as the second block.
    pub fn right_inclusion(x: usize, y: usize) -> Correspondence {
        Correspondence::stack(&Correspondence::empty(x, y), &Correspondence::identity(y))
            .expect("shapes agree")
    }

    /// `(Δ_X, Δ_X) ∈ 𝒞(X, X ⊔ X)`: folds two copies of `X` together.
    pub fn fold(x: usize) -> Correspondence {
        Correspondence::concat(&Correspondence::identity(x), &Correspondence::identity(x))
            .expect("shapes agree")
    }

    /// The swap `X ⊔ Y → Y ⊔ X` as a correspondence in `𝒞(Y ⊔ X, X ⊔ Y)`.
    pub fn swap(x: usize, y: usize) -> Correspondence {
        let mut c = Correspondence::empty(y + x, x + y);
        for i in 0..x {
            c.insert(y + i, i);
        }
        for j in 0..y {
            c.insert(j, x + j);
        }
        c
    }

    /// Writes the `corr` text form.
    pub fn to_text(&self) -> String {
        let mut s = format!("corr {} {}\n", self.target, self.source);
        if self.source > 0 {
            for y in 0..self.target {
                for x in 0..self.source {
                    s.push(if self.contains(y, x) { '1' } else { '0' });
                }
                s.push('\n');
            }
        }
        s
    }

    /// Parses one `corr` block from a line stream.
    pub fn read(lines: &mut Lines<'_>) -> Result<Correspondence, ParseError> {
        let (no, header) = lines.expect_line("`corr <rows> <cols>` header")?;
        let dims = parse_header(no, header, "corr", 2)?;
        let (target, source) = (dims[0], dims[1]);
        if source > MAX_SOURCE {
            return Err(ParseError::new(no, format!("at most {MAX_SOURCE} columns are supported")));
        }
        let mut c = Correspondence::empty(target, source);
        if source == 0 {
            return Ok(c);
        }
        for y in 0..target {
            let (no, row) = lines.expect_line("a row of 0/1 characters")?;
            if row.chars().count() != source {
                return Err(ParseError::new(
                    no,
                    format!("row {y} has length {}, expected {source}", row.chars().count()),
                ));
            }
            for (x, ch) in row.chars().enumerate() {
                match ch {
                    '1' => c.insert(y, x),
                    '0' => {}
                    other => {
                        return Err(ParseError::new(no, format!("invalid character `{other}` in row")))
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn parse(src: &str) -> Result<Correspondence, ParseError> {
        let mut lines = Lines::new(src);
        let c = Self::read(&mut lines)?;
        if let Some((no, _)) = lines.next_line() {
            return Err(ParseError::new(no, "trailing content after correspondence"));
        }
        Ok(c)
    }
}

impl fmt::Debug for Correspondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Corr[{}x{}]{{", self.target, self.source)?;
        for (i, (y, x)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({y},{x})")?;
        }
        write!(f, "}}")
    }
}

/// All correspondences in `𝒞(Y, X)`, in ascending code order.
pub fn enumerate_correspondences(
    target: usize,
    source: usize,
) -> Result<impl Iterator<Item = Correspondence> + Clone, RelationError> {
    let cells = target * source;
    if cells > ENUMERATION_LIMIT {
        return Err(RelationError::TooLarge { cells });
    }
    Ok((0..1u64 << cells).map(move |code| Correspondence::from_code(target, source, code)))
}

/// An element of the relation algebra `k𝒞(X, X)`: a finite formal sum of relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelAlgElement {
    ground: usize,
    coeffs: BTreeMap<Correspondence, Scalar>,
}

impl RelAlgElement {
    pub fn zero(ground: usize) -> Self {
        RelAlgElement {
            ground,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(u: Correspondence) -> Self {
        assert_eq!(u.target, u.source, "relation algebra elements are relations on one set");
        let ground = u.source;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(u, Scalar::ONE);
        RelAlgElement { ground, coeffs }
    }

    pub fn one(ground: usize) -> Self {
        Self::basis(Correspondence::identity(ground))
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn coeff(&self, u: &Correspondence) -> Scalar {
        self.coeffs.get(u).cloned().unwrap_or(Scalar::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Correspondence, &Scalar)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, u: Correspondence, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(u.clone()).or_insert(Scalar::ZERO);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&u);
        }
    }

    pub fn add(&self, other: &RelAlgElement) -> Result<RelAlgElement, RelationError> {
        if self.ground != other.ground {
            return Err(RelationError::GroundMismatch(self.ground, other.ground));
        }
        let mut out = self.clone();
        for (u, c) in &other.coeffs {
            out.add_term(u.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> RelAlgElement {
        let mut out = RelAlgElement::zero(self.ground);
        for (u, v) in &self.coeffs {
            out.add_term(u.clone(), &(v * c));
        }
        out
    }

    /// Convolution product: the coefficient of `W` is `Σ_{U∘V = W} a(U)·b(V)`.
    pub fn multiply(&self, other: &RelAlgElement) -> Result<RelAlgElement, RelationError> {
        if self.ground != other.ground {
            return Err(RelationError::GroundMismatch(self.ground, other.ground));
        }
        let mut out = RelAlgElement::zero(self.ground);
        for (u, a) in &self.coeffs {
            for (v, b) in &other.coeffs {
                out.add_term(u.compose(v)?, &(a * b));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Composition straight from the existential definition.
    fn compose_oracle(v: &Correspondence, u: &Correspondence) -> Correspondence {
        let mut out = Correspondence::empty(v.target(), u.source());
        for z in 0..v.target() {
            for x in 0..u.source() {
                if (0..u.target()).any(|y| v.contains(z, y) && u.contains(y, x)) {
                    out.insert(z, x);
                }
            }
        }
        out
    }

    #[test]
    fn compose_matches_definition() {
        let v = Correspondence::from_pairs(1, 1, &[(0, 0)]);
        let u = Correspondence::from_pairs(1, 2, &[(0, 1)]);
        assert_eq!(v.compose(&u).unwrap(), Correspondence::from_pairs(1, 2, &[(0, 1)]));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (z, y, x) = (rng.gen_range(0..5), rng.gen_range(0..5), rng.gen_range(0..5));
            let v = Correspondence::random(z, y, &mut rng);
            let u = Correspondence::random(y, x, &mut rng);
            assert_eq!(v.compose(&u).unwrap(), compose_oracle(&v, &u));
        }
    }

    #[test]
    fn compose_full_is_full() {
        let v = Correspondence::full(3, 2);
        let u = Correspondence::full(2, 4);
        assert_eq!(v.compose(&u).unwrap(), Correspondence::full(3, 4));
    }

    #[test]
    fn compose_shape_error() {
        let v = Correspondence::empty(2, 3);
        let u = Correspondence::empty(2, 2);
        assert!(matches!(v.compose(&u), Err(RelationError::Dimension { .. })));
    }

    #[test]
    fn identity_examples() {
        assert_eq!(Correspondence::identity(0).rows().len(), 0);
        let d = Correspondence::identity(2);
        assert_eq!(d, Correspondence::from_pairs(2, 2, &[(0, 0), (1, 1)]));
        assert_eq!(d.compose(&d).unwrap(), d);
    }

    #[test]
    fn block_identities() {
        let (x, y) = (2, 1);
        assert_eq!(
            Correspondence::block_diag(&Correspondence::identity(x), &Correspondence::identity(y)),
            Correspondence::identity(x + y)
        );
        let u = Correspondence::from_pairs(2, 2, &[(0, 1), (1, 1)]);
        assert_eq!(Correspondence::block_diag(&u, &Correspondence::empty(0, 0)), u);
        // diag(U, V) (Δ_X; ∅) = (U; ∅)
        let v = Correspondence::from_pairs(1, 1, &[(0, 0)]);
        let lhs = Correspondence::block_diag(&u, &v)
            .compose(&Correspondence::left_inclusion(x, y))
            .unwrap();
        let rhs = Correspondence::stack(&u, &Correspondence::empty(y, x)).unwrap();
        assert_eq!(lhs, rhs);
        // (Δ_X, Δ_X)(Δ_X; ∅) = Δ_X
        assert_eq!(
            Correspondence::fold(x)
                .compose(&Correspondence::left_inclusion(x, x))
                .unwrap(),
            Correspondence::identity(x)
        );
        assert_eq!(
            Correspondence::fold(x)
                .compose(&Correspondence::right_inclusion(x, x))
                .unwrap(),
            Correspondence::identity(x)
        );
    }

    #[test]
    fn stack_and_concat_shapes() {
        let s = Correspondence::stack(&Correspondence::empty(2, 3), &Correspondence::empty(1, 3)).unwrap();
        assert_eq!((s.target(), s.source()), (3, 3));
        assert!(s.is_empty());
        assert!(Correspondence::concat(&Correspondence::empty(0, 0), &Correspondence::empty(0, 0))
            .unwrap()
            .is_empty());
        assert!(Correspondence::stack(&Correspondence::empty(1, 1), &Correspondence::empty(1, 2)).is_err());
        assert!(Correspondence::concat(&Correspondence::empty(1, 1), &Correspondence::empty(2, 1)).is_err());
    }

    #[test]
    fn concat_distributes_over_composition() {
        // U ∘ (A, B) = (U∘A, U∘B)
        for u in enumerate_correspondences(2, 2).unwrap() {
            for a in enumerate_correspondences(2, 1).unwrap() {
                for b in enumerate_correspondences(2, 2).unwrap() {
                    let lhs = u.compose(&Correspondence::concat(&a, &b).unwrap()).unwrap();
                    let rhs = Correspondence::concat(&u.compose(&a).unwrap(), &u.compose(&b).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_correspondences(1, 1).unwrap().count(), 2);
        assert_eq!(enumerate_correspondences(2, 1).unwrap().count(), 4);
        let all: Vec<_> = enumerate_correspondences(2, 2).unwrap().collect();
        assert_eq!(all.len(), 16);
        assert!(all.iter().enumerate().all(|(i, c)| c.code() == i as u64));
        assert!(matches!(enumerate_correspondences(5, 6), Err(RelationError::TooLarge { cells: 30 })));
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let u = Correspondence::from_pairs(2, 3, &[(0, 0), (1, 2)]);
        assert_eq!(u.to_text(), "corr 2 3\n100\n001\n");
        assert_eq!(Correspondence::parse(&u.to_text()).unwrap(), u);
        let e = Correspondence::parse("corr 2 2\n10\n1x\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = Correspondence::parse("corr 2 2\n10\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = Correspondence::parse("lattice 2\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert_eq!(Correspondence::parse("corr 3 0\n").unwrap(), Correspondence::empty(3, 0));
    }

    #[test]
    fn relalg_examples() {
        let u = Correspondence::from_pairs(2, 2, &[(0, 1)]);
        let b = RelAlgElement::basis(u.clone())
            .add(&RelAlgElement::basis(Correspondence::full(2, 2)).scale(&Scalar::from(3)))
            .unwrap();
        assert_eq!(RelAlgElement::one(2).multiply(&b).unwrap(), b);
        assert_eq!(
            RelAlgElement::basis(u.clone()).multiply(&RelAlgElement::basis(u.clone())).unwrap(),
            RelAlgElement::basis(u.compose(&u).unwrap())
        );
        // (Δ + U)^2 = Δ + 2U + U², with U strictly upper triangular so U² = ∅.
        let d_plus_u = RelAlgElement::one(2).add(&RelAlgElement::basis(u.clone())).unwrap();
        let sq = d_plus_u.multiply(&d_plus_u).unwrap();
        assert_eq!(sq.coeff(&Correspondence::identity(2)), Scalar::ONE);
        assert_eq!(sq.coeff(&u), Scalar::from(2));
        assert_eq!(sq.coeff(&Correspondence::empty(2, 2)), Scalar::ONE);
        assert_eq!(sq.terms().count(), 3);
        assert!(RelAlgElement::one(1).multiply(&RelAlgElement::one(2)).is_err());
    }
}
