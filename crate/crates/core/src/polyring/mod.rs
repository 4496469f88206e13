//! Graded polynomial rings `F_q[x_1..x_n]` and their elements.

mod monomial;
mod parse;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Field, FieldElement};

pub use monomial::{monomials_of_degree, Monomial, MonomialOrder};
pub use parse::parse_polynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at offset {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("exponent overflow at offset {pos}")]
    ExponentOverflow { pos: usize },
    #[error("polynomials belong to different rings")]
    ContextMismatch,
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
}

/// A graded polynomial ring together with the monomial order used to sort terms.
#[derive(Clone)]
pub struct PolyRing {
    field: Arc<Field>,
    vars: Vec<String>,
    weights: Vec<u32>,
    order: MonomialOrder,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec() == other.field.spec()
            && self.vars == other.vars
            && self.weights == other.weights
            && self.order == other.order
    }
}

impl Eq for PolyRing {}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}] {:?} weights {:?}", self.field, self.vars.join(","), self.order, self.weights)
    }
}

impl PolyRing {
    /// Standard-graded ring with the grevlex order.
    pub fn new(field: Arc<Field>, vars: &[&str]) -> Result<Arc<PolyRing>, PolyError> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let weights = vec![1; names.len()];
        Self::with_weights(field, names, weights, MonomialOrder::Grevlex)
    }

    pub fn with_weights(
        field: Arc<Field>,
        vars: Vec<String>,
        weights: Vec<u32>,
        order: MonomialOrder,
    ) -> Result<Arc<PolyRing>, PolyError> {
        if vars.is_empty() {
            return Err(PolyError::InvalidRing("at least one variable is required".into()));
        }
        if weights.len() != vars.len() {
            return Err(PolyError::InvalidRing(format!("{} weights for {} variables", weights.len(), vars.len())));
        }
        if weights.contains(&0) {
            return Err(PolyError::InvalidRing("weights must be positive".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            let valid = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(PolyError::InvalidRing(format!("`{v}` is not a valid variable name")));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::InvalidRing(format!("duplicate variable `{v}`")));
            }
            if v == "t" && field.degree() > 1 {
                return Err(PolyError::InvalidRing("`t` is reserved for the field generator".into()));
            }
        }
        Ok(Arc::new(PolyRing { field, vars, weights, order }))
    }

    /// Same variables and weights, different term order.
    pub fn with_order(&self, order: MonomialOrder) -> Arc<PolyRing> {
        Arc::new(PolyRing { order, ..self.clone() })
    }

    /// The ring with `count` fresh variables prepended, ordered by an
    /// elimination order for them. Fresh variables get weight 1.
    pub fn with_eliminated_prefix(&self, names: &[&str]) -> Arc<PolyRing> {
        let mut vars: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        vars.extend(self.vars.iter().cloned());
        let mut weights = vec![1; names.len()];
        weights.extend(&self.weights);
        Arc::new(PolyRing {
            field: self.field.clone(),
            vars,
            weights,
            order: MonomialOrder::Elimination(names.len()),
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Sum of the variable weights, the degree of `x_1 ... x_n`.
    pub fn weight_sum(&self) -> u64 {
        self.weights.iter().map(|&w| w as u64).sum()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.compare(&self.weights, a, b)
    }

    pub fn degree_of(&self, m: &Monomial) -> u64 {
        m.weighted_degree(&self.weights)
    }

    pub fn monomials_of_degree(&self, degree: u64) -> Vec<Monomial> {
        let mut ms = monomials_of_degree(&self.weights, degree);
        ms.sort_by(|a, b| self.cmp(b, a));
        ms
    }
}

pub type Term = (Monomial, FieldElement);

/// A polynomial with terms sorted descending in its ring's monomial order.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: FieldElement) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, FieldElement::ONE)
    }

    pub fn term(ring: &Arc<PolyRing>, m: Monomial, c: FieldElement) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial has the wrong number of variables");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial) -> Self {
        Self::term(ring, m, FieldElement::ONE)
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i, 1))
    }

    /// Collects like terms, drops zeros and sorts.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: Vec<Term>) -> Self {
        let field = ring.field();
        let mut acc: HashMap<Monomial, FieldElement> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial has the wrong number of variables");
            let e = acc.entry(m).or_insert(FieldElement::ZERO);
            *e = field.add(*e, c);
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Terms already sorted descending with distinct monomials and nonzero coefficients.
    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing>, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero` plays that role
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn lead_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lead_coeff(&self) -> Option<FieldElement> {
        self.terms.first().map(|t| t.1)
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.iter().find(|(t, _)| t == m).map_or(FieldElement::ZERO, |t| t.1)
    }

    fn same_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let field = self.ring.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let sign = |c: FieldElement| if negate_other { field.neg(c) } else { c };
        while i < a.len() && j < b.len() {
            match self.ring.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), sign(b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = field.add(a[i].1, sign(b[j].1));
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(*c))));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.same_ring(other)?;
        let field = self.ring.field();
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return Ok(other.mul_term(m, *c));
        }
        let mut prods = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                prods.push((m1.mul(m2), field.mul(*c1, *c2)));
            }
        }
        Ok(Polynomial::from_terms(&self.ring, prods))
    }

    pub fn neg(&self) -> Polynomial {
        let field = self.ring.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(*c))).collect(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let field = self.ring.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, d)| (m.clone(), field.mul(c, *d))).collect(),
        }
    }

    /// `c * m * self`; term order is preserved because orders are multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let field = self.ring.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, d)| (t.mul(m), field.mul(c, *d))).collect(),
        }
    }

    pub fn make_monic(&self) -> Polynomial {
        match self.lead_coeff() {
            None => self.clone(),
            Some(c) => self.scale(self.field().inv(c).expect("lead coefficient is nonzero")),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `f^p` via the characteristic-`p` identity `(Σ c m)^p = Σ c^p m^p`.
    pub fn pth_power(&self) -> Polynomial {
        let field = self.ring.field();
        let p = field.characteristic();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.pow(p), field.frobenius(*c))).collect(),
        }
    }

    /// Weighted degree if homogeneous (`None` otherwise), and the homogeneity flag.
    pub fn degree_and_homogeneity(&self) -> Result<(Option<u64>, bool), PolyError> {
        let mut degrees = self.terms.iter().map(|(m, _)| self.ring.degree_of(m));
        let first = degrees.next().ok_or(PolyError::ZeroPolynomial)?;
        if degrees.all(|d| d == first) {
            Ok((Some(first), true))
        } else {
            Ok((None, false))
        }
    }

    /// Zero counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        self.degree_and_homogeneity().map_or(true, |(_, h)| h)
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<u64> {
        self.degree_and_homogeneity().ok().and_then(|(d, _)| d)
    }

    /// Largest weighted degree of a term.
    pub fn max_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| self.ring.degree_of(m)).max()
    }

    /// Reinterprets the polynomial in a ring with the same variables, e.g.
    /// under a different monomial order.
    pub fn to_ring(&self, ring: &Arc<PolyRing>) -> Polynomial {
        assert_eq!(ring.nvars(), self.ring.nvars());
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Embeds into `ring`, whose variables are `prefix` fresh ones followed by ours.
    pub fn embed_after(&self, ring: &Arc<PolyRing>, prefix: usize) -> Polynomial {
        assert_eq!(ring.nvars(), self.ring.nvars() + prefix);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; prefix];
                e.extend_from_slice(m.exponents());
                (Monomial::new(e), *c)
            })
            .collect();
        Polynomial::from_terms(ring, terms)
    }

    /// Inverse of [`Polynomial::embed_after`]; `None` if a dropped variable occurs.
    pub fn restrict_dropping(&self, ring: &Arc<PolyRing>, prefix: usize) -> Option<Polynomial> {
        assert_eq!(ring.nvars() + prefix, self.ring.nvars());
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.exponents()[..prefix].iter().any(|&e| e > 0) {
                return None;
            }
            terms.push((Monomial::new(m.exponents()[prefix..].to_vec()), *c));
        }
        Some(Polynomial::from_terms(ring, terms))
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide `self`.
    pub fn divide_exact(&self, g: &Polynomial) -> Option<Polynomial> {
        self.same_ring(g).ok()?;
        let (lm, lc) = g.lead_term()?.clone();
        let field = self.ring.field();
        let inv = field.inv(lc).ok()?;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.lead_term().cloned() {
            let q = lm.quotient_of(&m)?;
            let qc = field.mul(c, inv);
            rem = &rem - &g.mul_term(&q, qc);
            quot.push((q, qc));
        }
        Some(Polynomial::from_terms(&self.ring, quot))
    }

    /// Coefficients mapped through `f`, e.g. the Frobenius on scalars.
    pub fn map_coefficients(&self, f: impl Fn(FieldElement) -> FieldElement) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), f(*c))).collect();
        Polynomial::from_terms(&self.ring, terms)
    }
}

impl<'a> std::ops::Add for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl<'a> std::ops::Sub for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch")
    }
}

impl<'a> std::ops::Mul for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text form, readable back by [`parse_polynomial`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.ring.field();
        let mut first = true;
        for (m, c) in &self.terms {
            let mut mono = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => mono.push(self.ring.vars[i].clone()),
                    e => mono.push(format!("{}^{e}", self.ring.vars[i])),
                }
            }
            // extension coefficients are split into one term per power of t
            let pieces: Vec<(u32, usize)> = field
                .coefficients(*c)
                .into_iter()
                .enumerate()
                .rev()
                .filter(|&(_, d)| d != 0)
                .map(|(i, d)| (d, i))
                .collect();
            for (digit, tpow) in pieces {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                let mut factors = Vec::new();
                if digit != 1 || (tpow == 0 && mono.is_empty()) {
                    factors.push(digit.to_string());
                }
                match tpow {
                    0 => {}
                    1 => factors.push("t".into()),
                    k => factors.push(format!("t^{k}")),
                }
                factors.extend(mono.iter().cloned());
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u32, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(Arc::new(Field::prime(p).unwrap()), vars).unwrap()
    }

    fn parse(r: &Arc<PolyRing>, s: &str) -> Polynomial {
        parse_polynomial(s, r).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let r = ring(5, &["x", "y"]);
        let (x, y) = (parse(&r, "x"), parse(&r, "y"));
        assert_eq!(&(&x + &y) * &(&x - &y), parse(&r, "x^2 + 4*y^2"));
        let f = parse(&r, "3*x*y + y^2");
        assert_eq!(&f + &Polynomial::zero(&r), f);
        let r2 = ring(2, &["x", "y"]);
        let g = parse(&r2, "x + y");
        assert!((&g + &g).is_zero());
        assert_eq!(f.checked_add(&g), Err(PolyError::ContextMismatch));
    }

    #[test]
    fn pth_power_examples() {
        let r = ring(3, &["x", "y"]);
        assert_eq!(parse(&r, "x + y").pth_power(), parse(&r, "x^3 + y^3"));
        assert_eq!(parse(&r, "2").pth_power(), parse(&r, "2"));
        let f = parse(&r, "2*x + y");
        assert_eq!(f.pth_power(), &(&f * &f) * &f);
        assert_eq!(f.pth_power(), parse(&r, "2*x^3 + y^3"));
    }

    #[test]
    fn degree_examples() {
        let r = ring(3, &["x", "y"]);
        assert_eq!(parse(&r, "x^2*y").degree_and_homogeneity(), Ok((Some(3), true)));
        assert_eq!(parse(&r, "x^2 + y").degree_and_homogeneity(), Ok((None, false)));
        assert_eq!(Polynomial::zero(&r).degree_and_homogeneity(), Err(PolyError::ZeroPolynomial));
        let w = PolyRing::with_weights(
            Arc::new(Field::prime(3).unwrap()),
            vec!["x".into(), "y".into()],
            vec![1, 2],
            MonomialOrder::Grevlex,
        )
        .unwrap();
        assert_eq!(parse(&w, "x^2 + y").degree_and_homogeneity(), Ok((Some(2), true)));
    }

    #[test]
    fn exact_division() {
        let r = ring(3, &["x", "y"]);
        let f = parse(&r, "x^2 - y^2");
        assert_eq!(f.divide_exact(&parse(&r, "x + y")), Some(parse(&r, "x - y")));
        assert_eq!(f.divide_exact(&parse(&r, "x")), None);
    }

    #[test]
    fn ring_validation() {
        let f = Arc::new(Field::prime(3).unwrap());
        assert!(PolyRing::new(f.clone(), &["x", "x"]).is_err());
        assert!(PolyRing::new(f.clone(), &[]).is_err());
        assert!(PolyRing::new(f, &["t"]).is_ok());
        let f9 = Arc::new(Field::extension(3, 2).unwrap());
        assert!(PolyRing::new(f9, &["t", "x"]).is_err());
    }

    fn random_poly(r: &Arc<PolyRing>, p: i64) -> impl Strategy<Value = Polynomial> {
        let n = r.nvars();
        let r = r.clone();
        proptest::collection::vec((proptest::collection::vec(0u32..4, n), 0..p), 0..6).prop_map(move |ts| {
            let field = r.field().clone();
            Polynomial::from_terms(&r, ts.into_iter().map(|(e, c)| (Monomial::new(e), field.from_int(c))).collect())
        })
    }

    fn poly_in(p: u32) -> impl Strategy<Value = Polynomial> {
        random_poly(&ring(p, &["x", "y", "z"]), p as i64)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn freshman_dream(f in prop_oneof![poly_in(2), poly_in(3), poly_in(5)]) {
            let p = f.field().characteristic();
            let mut prod = Polynomial::one(f.ring());
            for _ in 0..p {
                prod = &prod * &f;
            }
            prop_assert_eq!(f.pth_power(), prod);
        }

        #[test]
        fn print_parse_roundtrip(f in poly_in(5)) {
            let printed = f.to_string();
            prop_assert_eq!(parse_polynomial(&printed, f.ring()).unwrap(), f);
        }
    }

    #[test]
    fn print_parse_roundtrip_extension() {
        let f9 = Arc::new(Field::extension(3, 2).unwrap());
        let r = PolyRing::new(f9, &["x", "y"]).unwrap();
        let f = parse(&r, "2*t*x^2 + t*x*y + x*y + 2 + t");
        assert_eq!(parse(&r, &f.to_string()), f);
        assert_eq!(parse(&r, "t*t*x"), parse(&r, "2*x"));
    }
}
