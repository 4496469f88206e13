//! Gröbner bases of homogeneous ideals and the ideal operations built on them.

pub(crate) mod engine;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::FieldElement;
use crate::polyring::{Monomial, MonomialOrder, PolyRing, Polynomial};

pub use engine::GbOptions;
use engine::{poly_to_terms, FreeSpace, MTerm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("generator `{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("polynomial belongs to a different ring")]
    RingMismatch,
    #[error("polynomial of degree {got} does not lie in the degree-{expected} strand")]
    DegreeMismatch { expected: u64, got: u64 },
}

/// An ideal given by homogeneous generators. Zero generators are dropped;
/// an empty generator list is the zero ideal.
#[derive(Clone)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    generators: Vec<Polynomial>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, generators: Vec<Polynomial>) -> Result<Ideal, GroebnerError> {
        for g in &generators {
            if g.ring() != ring {
                return Err(GroebnerError::RingMismatch);
            }
            if !g.is_homogeneous() {
                return Err(GroebnerError::NotHomogeneous(g.to_string()));
            }
        }
        Ok(Self::new_unchecked(ring, generators))
    }

    /// No homogeneity requirement; used for auxiliary elimination ideals.
    pub(crate) fn new_unchecked(ring: &Arc<PolyRing>, generators: Vec<Polynomial>) -> Ideal {
        Ideal { ring: ring.clone(), generators: generators.into_iter().filter(|g| !g.is_zero()).collect() }
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Ideal {
        Ideal { ring: ring.clone(), generators: Vec::new() }
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Ideal {
        Ideal { ring: ring.clone(), generators: vec![Polynomial::one(ring)] }
    }

    /// The homogeneous maximal ideal `(x_1, ..., x_n)`.
    pub fn irrelevant(ring: &Arc<PolyRing>) -> Ideal {
        Ideal { ring: ring.clone(), generators: (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect() }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ideal { ring: self.ring.clone(), generators: gens }
    }

    pub fn with_generator(&self, f: &Polynomial) -> Ideal {
        self.sum(&Ideal::new_unchecked(&self.ring, vec![f.clone()]))
    }

    pub fn groebner(&self) -> GroebnerBasis {
        GroebnerBasis::compute(self, GbOptions::default())
    }

    /// Equality of ideals via reduced Gröbner bases.
    pub fn same_ideal(&self, other: &Ideal) -> bool {
        self.groebner().elements == other.groebner().elements
    }
}

/// Reduced Gröbner basis with monic elements sorted ascending by leading monomial.
#[derive(Clone)]
pub struct GroebnerBasis {
    ideal: Ideal,
    elements: Vec<Polynomial>,
    reducers: Vec<Vec<MTerm>>,
}

impl fmt::Debug for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.elements.iter()).finish()
    }
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for GroebnerBasis {}

/// Reduced Gröbner basis of `ideal` under the order `order`.
pub fn buchberger(ideal: &Ideal, order: MonomialOrder) -> GroebnerBasis {
    if ideal.ring.order() == order {
        return ideal.groebner();
    }
    let ring = ideal.ring.with_order(order);
    let gens = ideal.generators.iter().map(|g| g.to_ring(&ring)).collect();
    Ideal::new_unchecked(&ring, gens).groebner()
}

impl GroebnerBasis {
    pub fn compute(ideal: &Ideal, opts: GbOptions) -> GroebnerBasis {
        let ring = &ideal.ring;
        let space = FreeSpace::ideal(ring);
        let gens = ideal.generators.iter().map(poly_to_terms).collect();
        let reducers = engine::groebner(&space, gens, opts);
        let elements = reducers
            .iter()
            .map(|v| Polynomial::from_sorted_terms(ring, v.iter().map(|(_, m, c)| (m.clone(), *c)).collect()))
            .collect();
        GroebnerBasis { ideal: ideal.clone(), elements, reducers }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ideal.ring
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    /// The ideal generated by the basis itself (same ideal, tidier generators).
    pub fn to_ideal(&self) -> Ideal {
        Ideal::new_unchecked(self.ring(), self.elements.clone())
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.elements.iter().filter_map(|g| g.lead_monomial())
    }

    pub fn is_unit(&self) -> bool {
        self.elements.iter().any(|g| g.is_constant())
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.elements.is_empty()
    }

    /// Unique remainder of `f` modulo the basis.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        assert!(f.ring() == self.ring(), "normal form across rings");
        let space = FreeSpace::ideal(self.ring());
        let reducers: Vec<&[MTerm]> = self.reducers.iter().map(|v| v.as_slice()).collect();
        let r = space.reduce(poly_to_terms(f), &reducers);
        Polynomial::from_sorted_terms(self.ring(), r.into_iter().map(|(_, m, c)| (m, c)).collect())
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading_monomials().any(|l| l.divides(m))
    }

    /// Krull dimension of `A/I`: the largest set of variables containing the
    /// support of no leading monomial. The unit ideal reports `-1`.
    pub fn krull_dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        let n = self.ring().nvars();
        let leads: Vec<u64> = self
            .leading_monomials()
            .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
            .collect();
        fn best(i: usize, n: usize, set: u64, size: i64, leads: &[u64], acc: &mut i64) {
            if size + (n - i) as i64 <= *acc {
                return;
            }
            if i == n {
                *acc = size;
                return;
            }
            let with = set | (1 << i);
            if !leads.iter().any(|&l| l & !with == 0) {
                best(i + 1, n, with, size + 1, leads, acc);
            }
            best(i + 1, n, set, size, leads, acc);
        }
        let mut acc = 0;
        best(0, n, 0, 0, &leads, &mut acc);
        acc
    }

    /// Standard monomials of weighted degree `m`, a basis of `[A/I]_m`.
    pub fn strand_basis(&self, degree: u64) -> StrandBasis {
        let monomials: Vec<Monomial> =
            self.ring().monomials_of_degree(degree).into_iter().filter(|m| self.is_standard(m)).collect();
        StrandBasis::new(degree, monomials)
    }

    /// `dim_K [A/I]_m`.
    pub fn hilbert_function(&self, degree: u64) -> usize {
        self.ring().monomials_of_degree(degree).iter().filter(|m| self.is_standard(m)).count()
    }

    /// Coefficients of the normal form of `f` in the strand basis.
    pub fn coords_in_strand(&self, f: &Polynomial, strand: &StrandBasis) -> Result<Vec<FieldElement>, GroebnerError> {
        if f.ring() != self.ring() {
            return Err(GroebnerError::RingMismatch);
        }
        if let Some(got) = f.max_degree() {
            let homogeneous = f.homogeneous_degree();
            if homogeneous != Some(strand.degree) {
                return Err(GroebnerError::DegreeMismatch { expected: strand.degree, got });
            }
        }
        let nf = self.normal_form(f);
        let mut v = vec![FieldElement::ZERO; strand.len()];
        for (m, c) in nf.terms() {
            let i = strand.index_of(m).expect("normal forms consist of standard monomials");
            v[i] = *c;
        }
        Ok(v)
    }
}

/// Ordered monomial basis of one graded piece `[A/I]_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandBasis {
    degree: u64,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl StrandBasis {
    pub fn new(degree: u64, monomials: Vec<Monomial>) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        StrandBasis { degree, monomials, index }
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Polynomial with the given coordinates.
    pub fn combine(&self, ring: &Arc<PolyRing>, coords: &[FieldElement]) -> Polynomial {
        let terms = self.monomials.iter().zip(coords).map(|(m, &c)| (m.clone(), c)).collect();
        Polynomial::from_terms(ring, terms)
    }
}

/// `I ∩ J` through `T·I + (1-T)·J` and elimination of `T`.
pub fn intersect(i: &Ideal, j: &Ideal) -> Ideal {
    let ring = i.ring();
    if i.is_zero() || j.is_zero() {
        return Ideal::zero(ring);
    }
    let aux = ring.with_eliminated_prefix(&["_T"]);
    let t = Polynomial::var(&aux, 0);
    let one_minus_t = &Polynomial::one(&aux) - &t;
    let mut gens: Vec<Polynomial> = i.generators().iter().map(|g| &t * &g.embed_after(&aux, 1)).collect();
    gens.extend(j.generators().iter().map(|g| &one_minus_t * &g.embed_after(&aux, 1)));
    let gb = Ideal::new_unchecked(&aux, gens).groebner();
    let eliminated = gb.elements().iter().filter_map(|g| g.restrict_dropping(ring, 1)).collect();
    Ideal::new_unchecked(ring, eliminated)
}

/// `(I : f) = {g : g f ∈ I}`, from the generators of `I ∩ (f)` divided by `f`.
pub fn ideal_quotient(ideal: &Ideal, f: &Polynomial) -> Ideal {
    assert!(!f.is_zero(), "quotient by zero");
    let ring = ideal.ring();
    if f.is_constant() {
        return ideal.clone();
    }
    let principal = Ideal::new_unchecked(ring, vec![f.clone()]);
    let meet = intersect(ideal, &principal);
    let gens = meet
        .generators()
        .iter()
        .map(|g| g.divide_exact(f).expect("elements of I ∩ (f) are multiples of f"))
        .collect();
    Ideal::new_unchecked(ring, gens).groebner().to_ideal()
}

/// `(I : 𝔐^∞)` by iterating `J ← ∩_i (J : x_i)` until it stabilizes.
pub fn saturate_irrelevant(ideal: &Ideal) -> Ideal {
    let ring = ideal.ring();
    let mut current = ideal.groebner();
    loop {
        if current.is_unit() || current.is_zero_ideal() {
            return current.to_ideal();
        }
        let j = current.to_ideal();
        let mut colon = ideal_quotient(&j, &Polynomial::var(ring, 0));
        for i in 1..ring.nvars() {
            let next = ideal_quotient(&j, &Polynomial::var(ring, i));
            colon = intersect(&colon, &next);
        }
        let next = colon.groebner();
        if next == current {
            return current.to_ideal();
        }
        current = next;
    }
}
