//! The Frobenius action on the stabilized Koszul cohomology and its
//! decomposition into a stable part and a nilpotent part.
//!
//! Frobenius is `p`-semilinear: in a basis it acts as `v ↦ M·v^[p]`, where
//! `v^[p]` raises every coordinate to the `p`-th power. Its image chain
//! `V ⊇ F(V) ⊇ F²(V) ⊇ ..` stabilizes at the stable part `V_st`, on which
//! `F` is bijective.

use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::groebner::GroebnerBasis;
use crate::koszul::KoszulClasses;
use crate::linalg::{span_basis, ExactMatrix};
use crate::polyring::Polynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrobeniusError {
    #[error("the Frobenius matrix needs the class basis at t = 1 (got t = {0})")]
    NotLevelOne(u32),
    #[error("the Frobenius image of class {0} is not in the span of the limit classes")]
    Inconsistent(usize),
}

/// A `p`-semilinear endomorphism `v ↦ M·v^[p]` of `F_q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearMap {
    matrix: ExactMatrix,
}

impl SemilinearMap {
    pub fn new(matrix: ExactMatrix) -> Self {
        assert_eq!(matrix.rows(), matrix.cols(), "Frobenius matrix must be square");
        SemilinearMap { matrix }
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, field: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        let twisted: Vec<FieldElement> = v.iter().map(|&c| field.frobenius(c)).collect();
        self.matrix.mul_vec(field, &twisted)
    }

    /// Matrix of `F^e`: `M · M^[p] · .. · M^[p^(e-1)]`, so that `F^e(v) = M_e·v^[p^e]`.
    pub fn iterate_matrix(&self, field: &Field, e: usize) -> ExactMatrix {
        let mut acc = ExactMatrix::identity(self.dim());
        let mut twisted = self.matrix.clone();
        for _ in 0..e {
            acc = acc.mul(field, &twisted);
            twisted = twisted.map(|c| field.frobenius(c));
        }
        acc
    }
}

/// `V = V_st ⊕ V_nil` for a semilinear map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableDecomposition {
    /// Dimensions of `V, F(V), F²(V), ..` up to the first repetition.
    pub image_chain: Vec<usize>,
    /// Echelon basis of `V_st = F^{e0}(V)`.
    pub stable_basis: Vec<Vec<FieldElement>>,
    /// Echelon basis of `V_nil = ker F^{e0}`.
    pub nilpotent_basis: Vec<Vec<FieldElement>>,
    /// `e0`: the number of steps before the chain stabilizes.
    pub nilpotency_index: usize,
    /// `F` maps `V_st` onto itself.
    pub bijective_on_stable: bool,
}

impl StableDecomposition {
    pub fn stable_dim(&self) -> usize {
        self.stable_basis.len()
    }
}

pub fn stable_part(field: &Field, f: &SemilinearMap) -> StableDecomposition {
    let n = f.dim();
    let mut current: Vec<Vec<FieldElement>> = span_basis(
        field,
        &(0..n)
            .map(|i| (0..n).map(|j| if i == j { FieldElement::ONE } else { FieldElement::ZERO }).collect())
            .collect::<Vec<_>>(),
        n,
    );
    let mut image_chain = vec![current.len()];
    loop {
        let images: Vec<Vec<FieldElement>> = current.iter().map(|v| f.apply(field, v)).collect();
        let next = span_basis(field, &images, n);
        if next.len() == current.len() {
            break;
        }
        image_chain.push(next.len());
        current = next;
    }
    let nilpotency_index = image_chain.len() - 1;

    let kernel = f.iterate_matrix(field, nilpotency_index).nullspace_basis(field);
    let rooted: Vec<Vec<FieldElement>> = kernel
        .iter()
        .map(|w| {
            w.iter()
                .map(|&c| (0..nilpotency_index).fold(c, |acc, _| field.pth_root(acc)))
                .collect()
        })
        .collect();
    let nilpotent_basis = span_basis(field, &rooted, n);

    let images: Vec<Vec<FieldElement>> = current.iter().map(|v| f.apply(field, v)).collect();
    let mut both = current.clone();
    both.extend(images.iter().cloned());
    let bijective_on_stable =
        span_basis(field, &images, n).len() == current.len() && span_basis(field, &both, n).len() == current.len();

    StableDecomposition { image_chain, stable_basis: current, nilpotent_basis, nilpotency_index, bijective_on_stable }
}

/// `F` is nilpotent, i.e. the stable part vanishes.
pub fn is_f_torsion(field: &Field, f: &SemilinearMap) -> bool {
    stable_part(field, f).stable_dim() == 0
}

/// Number of geometrically connected components: `1 + dim V_st`.
pub fn component_count(field: &Field, f: &SemilinearMap) -> usize {
    1 + stable_part(field, f).stable_dim()
}

/// Frobenius on the class basis at `t = 1` for the forms `y_i` (usually the
/// `N`-th powers of a parameter system). The class of `(a_i^p)` lives at level
/// `p`; it is matched against the limit images `(a_{k,i} y_i^{p-1})` plus a
/// multiple of the coboundary `(y_i^p)`.
pub fn frobenius_matrix(gsat: &GroebnerBasis, classes: &KoszulClasses) -> Result<SemilinearMap, FrobeniusError> {
    if classes.t() != 1 {
        return Err(FrobeniusError::NotLevelOne(classes.t()));
    }
    let ring = gsat.ring();
    let field = ring.field();
    let p = field.characteristic();
    let forms = classes.forms();
    let tuples = classes.class_tuples();
    let dim = tuples.len();

    let lifted: Vec<Vec<Polynomial>> = tuples
        .iter()
        .map(|tuple| tuple.iter().zip(forms).map(|(a, y)| gsat.normal_form(&(a * &y.pow(p - 1)))).collect())
        .collect();
    let coboundary: Vec<Polynomial> = forms.iter().map(|y| gsat.normal_form(&y.pow(p))).collect();
    let targets: Vec<Vec<Polynomial>> =
        tuples.iter().map(|tuple| tuple.iter().map(|a| gsat.normal_form(&a.pth_power())).collect()).collect();

    // row index over (component, standard monomial)
    let mut index = std::collections::HashMap::new();
    let all = lifted.iter().chain(std::iter::once(&coboundary)).chain(targets.iter());
    for tuple in all {
        for (i, f) in tuple.iter().enumerate() {
            for (m, _) in f.terms() {
                let next = index.len();
                index.entry((i, m.clone())).or_insert(next);
            }
        }
    }
    let to_vector = |tuple: &[Polynomial]| {
        let mut v = vec![FieldElement::ZERO; index.len()];
        for (i, f) in tuple.iter().enumerate() {
            for (m, c) in f.terms() {
                v[index[&(i, m.clone())]] = *c;
            }
        }
        v
    };
    let mut columns: Vec<Vec<FieldElement>> = lifted.iter().map(|t| to_vector(t)).collect();
    columns.push(to_vector(&coboundary));
    let system = ExactMatrix::from_columns(&columns, index.len());

    let mut out = Vec::with_capacity(dim);
    for (j, target) in targets.iter().enumerate() {
        let mut sol = system.solve(field, &to_vector(target)).ok_or(FrobeniusError::Inconsistent(j))?;
        sol.truncate(dim);
        out.push(sol);
    }
    Ok(SemilinearMap::new(ExactMatrix::from_columns(&out, dim)))
}

/// Independent construction through division in `R`: find `b_i` with
/// `b_i y_i^{p-1} = a_i^p` in `R` and take the class of `(b_i)` at level one.
/// Returns `None` when some division has no solution.
pub fn frobenius_by_division(gsat: &GroebnerBasis, classes: &KoszulClasses) -> Option<SemilinearMap> {
    let ring = gsat.ring();
    let field = ring.field();
    let p = field.characteristic();
    let forms = classes.forms();
    let mut out = Vec::with_capacity(classes.dim());
    for tuple in classes.class_tuples() {
        let mut quotients = Vec::with_capacity(tuple.len());
        for (a, y) in tuple.iter().zip(forms) {
            let divisor = y.pow(p - 1);
            let target = gsat.normal_form(&a.pth_power());
            let degree = a.homogeneous_degree().or_else(|| y.homogeneous_degree())?;
            let strand = gsat.strand_basis(degree);
            let images: Vec<Polynomial> = strand
                .monomials()
                .iter()
                .map(|m| gsat.normal_form(&(&Polynomial::monomial(ring, m.clone()) * &divisor)))
                .collect();
            let mut index = std::collections::HashMap::new();
            for f in images.iter().chain(std::iter::once(&target)) {
                for (m, _) in f.terms() {
                    let next = index.len();
                    index.entry(m.clone()).or_insert(next);
                }
            }
            let to_vector = |f: &Polynomial| {
                let mut v = vec![FieldElement::ZERO; index.len()];
                for (m, c) in f.terms() {
                    v[index[m]] = *c;
                }
                v
            };
            let columns: Vec<Vec<FieldElement>> = images.iter().map(to_vector).collect();
            let coeffs = ExactMatrix::from_columns(&columns, index.len()).solve(field, &to_vector(&target))?;
            quotients.push(strand.combine(ring, &coeffs));
        }
        out.push(classes.class_coordinates(gsat, &quotients)?);
    }
    Some(SemilinearMap::new(ExactMatrix::from_columns(&out, classes.dim())))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::groebner::Ideal;
    use crate::koszul::h1_degree_zero;
    use crate::polyring::{parse_polynomial, PolyRing};

    fn fp(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn map(field: &Field, rows: &[&[i64]]) -> SemilinearMap {
        SemilinearMap::new(ExactMatrix::from_ints(field, rows))
    }

    #[test]
    fn image_chains() {
        let f = fp(3);
        assert_eq!(stable_part(&f, &map(&f, &[&[0, 0], &[0, 0]])).image_chain, vec![2, 0]);
        assert_eq!(stable_part(&f, &map(&f, &[&[1, 2], &[0, 1]])).image_chain, vec![2]);
        let d = stable_part(&f, &map(&f, &[&[0, 1], &[0, 0]]));
        assert_eq!(d.image_chain, vec![2, 1, 0]);
        assert_eq!(d.nilpotency_index, 2);
        assert_eq!(d.nilpotent_basis.len(), 2);
        let d = stable_part(&f, &map(&f, &[&[1, 1], &[0, 0]]));
        assert_eq!((d.stable_dim(), d.nilpotent_basis.len()), (1, 1));
        assert!(d.bijective_on_stable);
        assert_eq!(component_count(&f, &map(&f, &[&[2]])), 2);
        assert!(is_f_torsion(&f, &map(&f, &[&[0]])));
        assert!(is_f_torsion(&f, &SemilinearMap::new(ExactMatrix::zeros(0, 0))));
    }

    #[test]
    fn semilinearity_over_extension() {
        let f = Field::extension(3, 2).unwrap();
        let t = f.generator().unwrap();
        let m = SemilinearMap::new(ExactMatrix::from_rows(vec![vec![t, FieldElement::ONE], vec![FieldElement::ZERO, t]], 2));
        let v = vec![t, f.from_int(2)];
        let c = f.add(t, FieldElement::ONE);
        let lhs = m.apply(&f, &v.iter().map(|&x| f.mul(c, x)).collect::<Vec<_>>());
        let rhs: Vec<FieldElement> = m.apply(&f, &v).iter().map(|&x| f.mul(f.frobenius(c), x)).collect();
        assert_eq!(lhs, rhs);
        // F² through the iterated matrix
        let twice = m.apply(&f, &m.apply(&f, &v));
        let pp: Vec<FieldElement> = v.iter().map(|&x| f.frobenius(f.frobenius(x))).collect();
        assert_eq!(twice, m.iterate_matrix(&f, 2).mul_vec(&f, &pp));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn decomposition_is_complementary(p in prop::sample::select(vec![2u32, 3, 5]), n in 1usize..5, seed in any::<u64>()) {
            let f = fp(p);
            let mut rng = seed;
            let entries: Vec<FieldElement> = (0..n * n).map(|_| {
                rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                f.from_int(((rng >> 33) % p as u64) as i64)
            }).collect();
            let rows = entries.chunks(n).map(|c| c.to_vec()).collect();
            let m = SemilinearMap::new(ExactMatrix::from_rows(rows, n));
            let d = stable_part(&f, &m);
            prop_assert_eq!(d.stable_dim() + d.nilpotent_basis.len(), n);
            let mut both = d.stable_basis.clone();
            both.extend(d.nilpotent_basis.iter().cloned());
            prop_assert_eq!(span_basis(&f, &both, n).len(), n);
            prop_assert!(d.bijective_on_stable);
            prop_assert!(d.image_chain.windows(2).all(|w| w[0] > w[1]));
            for v in &d.nilpotent_basis {
                let mut w = v.clone();
                for _ in 0..d.nilpotency_index { w = m.apply(&f, &w); }
                prop_assert!(w.iter().all(|c| c.is_zero()));
            }
        }
    }

    fn example(p: u32, gens: &[&str], vars: &[&str], forms: &[&str]) -> (Field, SemilinearMap, Option<SemilinearMap>) {
        let field = fp(p);
        let r = PolyRing::new(Arc::new(field.clone()), vars).unwrap();
        let gb = Ideal::new(&r, gens.iter().map(|g| parse_polynomial(g, &r).unwrap()).collect()).unwrap().groebner();
        let xs: Vec<Polynomial> = forms.iter().map(|f| parse_polynomial(f, &r).unwrap()).collect();
        let k = h1_degree_zero(&gb, &xs, 1);
        (field, frobenius_matrix(&gb, &k).unwrap(), frobenius_by_division(&gb, &k))
    }

    const EXAMPLE: [&str; 4] = ["u^2 - 2*x^2", "v^2 - 2*y^2", "u*v - 2*x*y", "v*x - u*y"];

    #[test]
    fn example_over_f3_and_f5() {
        let (f, m, div) = example(3, &EXAMPLE, &["x", "y", "u", "v"], &["x", "y"]);
        assert_eq!(m.matrix(), &ExactMatrix::from_ints(&f, &[&[2]]));
        assert_eq!(div.as_ref(), Some(&m));
        assert_eq!(component_count(&f, &m), 2);
        let (f, m, div) = example(5, &EXAMPLE, &["x", "y", "u", "v"], &["x", "y"]);
        assert_eq!(m.matrix(), &ExactMatrix::from_ints(&f, &[&[4]]));
        assert_eq!(div.as_ref(), Some(&m));
        assert_eq!(component_count(&f, &m), 2);
    }

    #[test]
    fn conics_and_lines() {
        for p in [3, 5] {
            let (f, m, div) = example(p, &["x^2 + y^2"], &["x", "y"], &["x"]);
            assert_eq!(component_count(&f, &m), 2, "p = {p}");
            assert_eq!(div, Some(m));
        }
        let (f, m, _) = example(2, &["x*u", "x*v", "y*u", "y*v"], &["x", "y", "u", "v"], &["x + u", "y + v"]);
        assert_eq!(component_count(&f, &m), 2);
    }

    #[test]
    fn requires_level_one() {
        let field = fp(3);
        let r = PolyRing::new(Arc::new(field), &["x", "y"]).unwrap();
        let gb = Ideal::zero(&r).groebner();
        let xs = vec![parse_polynomial("x", &r).unwrap(), parse_polynomial("y", &r).unwrap()];
        let k = h1_degree_zero(&gb, &xs, 2);
        assert_eq!(frobenius_matrix(&gb, &k), Err(FrobeniusError::NotLevelOne(2)));
    }
}
