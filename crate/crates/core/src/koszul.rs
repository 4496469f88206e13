//! Degree-zero first Koszul cohomology `[H¹(x_1^t..x_d^t; R)]_0` and its
//! stabilization along the limit maps `(a_i) ↦ (a_i x_i)`.
//!
//! A 1-cochain is a tuple `(a_i)` with `a_i ∈ [R]_{t·deg x_i}`; it is a cocycle
//! when `a_i x_j^t = a_j x_i^t` in `R` for all `i < j`. Coboundaries are the
//! multiples of `(x_i^t)` by constants, `[R]_0` being the field.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::groebner::{GroebnerBasis, StrandBasis};
use crate::linalg::{span_basis, ExactMatrix};
use crate::polyring::{PolyRing, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KoszulError {
    #[error("Koszul dimensions {dims:?} for t = 1..{t_max} never reached {target}; raise --t-max")]
    TMaxExceeded { t_max: u32, target: usize, dims: Vec<usize> },
    #[error("Koszul dimension {dim} at t = {t} exceeds the bound {ell}")]
    AboveBound { t: u32, dim: usize, ell: usize },
    #[error("limit map from t = {t} is not well defined on class {class}")]
    LimitMap { t: u32, class: usize },
    #[error("cohomology pieces belong to different parameter systems")]
    Mismatch,
}

/// A basis of `[H¹(x_1^t..x_d^t; R)]_0` given by cocycle representatives.
#[derive(Debug, Clone)]
pub struct KoszulClasses {
    ring: Arc<PolyRing>,
    forms: Vec<Polynomial>,
    t: u32,
    blocks: Vec<StrandBasis>,
    offsets: Vec<usize>,
    coboundary: Vec<FieldElement>,
    classes: Vec<Vec<FieldElement>>,
}

impl KoszulClasses {
    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn forms(&self) -> &[Polynomial] {
        &self.forms
    }

    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    /// Length of a cochain coordinate vector.
    pub fn cochain_len(&self) -> usize {
        self.offsets.last().copied().unwrap_or(0)
    }

    /// Cochain coordinates of each class representative.
    pub fn class_vectors(&self) -> &[Vec<FieldElement>] {
        &self.classes
    }

    pub fn coboundary_vector(&self) -> &[FieldElement] {
        &self.coboundary
    }

    /// The cochain tuple with the given coordinates.
    pub fn tuple(&self, coords: &[FieldElement]) -> Vec<Polynomial> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, b)| b.combine(&self.ring, &coords[self.offsets[i]..self.offsets[i + 1]]))
            .collect()
    }

    /// Representative tuples `(a_{k,1}, .., a_{k,d})`, one per class.
    pub fn class_tuples(&self) -> Vec<Vec<Polynomial>> {
        self.classes.iter().map(|c| self.tuple(c)).collect()
    }

    /// Cochain coordinates of a tuple, or `None` if some entry has the wrong degree.
    pub fn cochain_coordinates(&self, gsat: &GroebnerBasis, tuple: &[Polynomial]) -> Option<Vec<FieldElement>> {
        if tuple.len() != self.blocks.len() {
            return None;
        }
        let mut v = vec![FieldElement::ZERO; self.cochain_len()];
        for (i, a) in tuple.iter().enumerate() {
            for (m, c) in gsat.normal_form(a).terms() {
                v[self.offsets[i] + self.blocks[i].index_of(m)?] = *c;
            }
        }
        Some(v)
    }

    /// `a_i x_j^t - a_j x_i^t ∈ I` for all pairs.
    pub fn is_cocycle(&self, gsat: &GroebnerBasis, tuple: &[Polynomial]) -> bool {
        let powers: Vec<Polynomial> = self.forms.iter().map(|x| x.pow(self.t)).collect();
        (0..tuple.len()).all(|i| {
            (i + 1..tuple.len()).all(|j| gsat.contains(&(&(&tuple[i] * &powers[j]) - &(&tuple[j] * &powers[i]))))
        })
    }

    /// Coordinates of the class of a cocycle in the class basis. `None` if
    /// the tuple is not a degree-zero cocycle for this `t`.
    pub fn class_coordinates(&self, gsat: &GroebnerBasis, tuple: &[Polynomial]) -> Option<Vec<FieldElement>> {
        if !self.is_cocycle(gsat, tuple) {
            return None;
        }
        let v = self.cochain_coordinates(gsat, tuple)?;
        let field = self.ring.field();
        let mut columns = self.classes.clone();
        columns.push(self.coboundary.clone());
        let m = ExactMatrix::from_columns(&columns, self.cochain_len());
        let mut sol = m.solve(field, &v)?;
        sol.truncate(self.dim());
        Some(sol)
    }
}

/// A basis of `[H¹(x_1^t..x_d^t; R)]_0` for the forms `x_i`.
pub fn h1_degree_zero(gsat: &GroebnerBasis, forms: &[Polynomial], t: u32) -> KoszulClasses {
    let ring = gsat.ring().clone();
    let field: &Field = ring.field();
    let d = forms.len();
    let degrees: Vec<u64> = forms.iter().map(|x| x.homogeneous_degree().expect("homogeneous parameter")).collect();
    let blocks: Vec<StrandBasis> = degrees.iter().map(|&deg| gsat.strand_basis(t as u64 * deg)).collect();
    let mut offsets = vec![0];
    for b in &blocks {
        offsets.push(offsets.last().unwrap() + b.len());
    }
    let cols = *offsets.last().unwrap();
    let powers: Vec<Polynomial> = forms.iter().map(|x| x.pow(t)).collect();

    // one equation per (pair, standard monomial) that actually occurs
    let mut row_of: HashMap<(usize, usize, crate::polyring::Monomial), usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, FieldElement)> = Vec::new();
    for i in 0..d {
        for (k, m) in blocks[i].monomials().iter().enumerate() {
            let col = offsets[i] + k;
            let mono = Polynomial::monomial(&ring, m.clone());
            for (j, power) in powers.iter().enumerate() {
                if j == i {
                    continue;
                }
                // +a_i x_j^t in equation (i, j) when i < j, -a_i x_j^t in (j, i) otherwise
                let (pair, sign) = if i < j { ((i, j), false) } else { ((j, i), true) };
                for (mm, c) in gsat.normal_form(&(&mono * power)).terms() {
                    let next = row_of.len();
                    let row = *row_of.entry((pair.0, pair.1, mm.clone())).or_insert(next);
                    entries.push((row, col, if sign { field.neg(*c) } else { *c }));
                }
            }
        }
    }
    let mut system = ExactMatrix::zeros(row_of.len(), cols);
    for (r, c, v) in entries {
        system[(r, c)] = field.add(system[(r, c)], v);
    }
    let cocycles = if row_of.is_empty() {
        (0..cols)
            .map(|c| {
                let mut v = vec![FieldElement::ZERO; cols];
                v[c] = FieldElement::ONE;
                v
            })
            .collect()
    } else {
        system.nullspace_basis(field)
    };

    let mut coboundary = vec![FieldElement::ZERO; cols];
    for (i, p) in powers.iter().enumerate() {
        for (m, c) in gsat.normal_form(p).terms() {
            coboundary[offsets[i] + blocks[i].index_of(m).expect("x_i^t has degree t·deg x_i")] = *c;
        }
    }

    // complement of the coboundary line inside the cocycles
    let classes = match coboundary.iter().position(|c| !c.is_zero()) {
        None => span_basis(field, &cocycles, cols),
        Some(pi) => {
            let inv = field.inv(coboundary[pi]).expect("nonzero");
            let reduced: Vec<Vec<FieldElement>> = cocycles
                .iter()
                .map(|z| {
                    let s = field.mul(z[pi], inv);
                    z.iter().zip(&coboundary).map(|(&a, &b)| field.sub(a, field.mul(s, b))).collect()
                })
                .collect();
            span_basis(field, &reduced, cols)
        }
    };
    log::debug!("t = {t}: {} cochain coordinates, {} cocycles, {} classes", cols, cocycles.len(), classes.len());
    KoszulClasses { ring, forms: forms.to_vec(), t, blocks, offsets, coboundary, classes }
}

/// Matrix of `(a_i) ↦ (a_i x_i)` from level `t` to level `t + 1`, in the class bases.
pub fn limit_map(gsat: &GroebnerBasis, from: &KoszulClasses, to: &KoszulClasses) -> Result<ExactMatrix, KoszulError> {
    if from.forms != to.forms || to.t != from.t + 1 {
        return Err(KoszulError::Mismatch);
    }
    let columns = from
        .class_tuples()
        .into_iter()
        .enumerate()
        .map(|(k, tuple)| {
            let image: Vec<Polynomial> = tuple.iter().zip(&from.forms).map(|(a, x)| a * x).collect();
            to.class_coordinates(gsat, &image).ok_or(KoszulError::LimitMap { t: from.t, class: k })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExactMatrix::from_columns(&columns, to.dim()))
}

/// Result of the stabilization loop.
#[derive(Debug, Clone)]
pub struct Stabilization {
    /// The stabilization index `N`.
    pub n: u32,
    /// `dim [H¹(x^t)]_0` for `t = 1, 2, ..` as far as computed.
    pub dims: Vec<usize>,
    /// The class basis at `t = N`.
    pub classes: KoszulClasses,
}

/// Smallest `t ≤ t_max` with `dim [H¹(x^t)]_0 = ℓ`.
pub fn stabilize(gsat: &GroebnerBasis, forms: &[Polynomial], ell: usize, t_max: u32) -> Result<Stabilization, KoszulError> {
    let mut dims = Vec::new();
    for t in 1..=t_max {
        let classes = h1_degree_zero(gsat, forms, t);
        let dim = classes.dim();
        dims.push(dim);
        if dim > ell {
            return Err(KoszulError::AboveBound { t, dim, ell });
        }
        if dim == ell {
            return Ok(Stabilization { n: t, dims, classes });
        }
    }
    Err(KoszulError::TMaxExceeded { t_max, target: ell, dims })
}

/// Uncertified variant: stops once the dimension has stayed constant for
/// `plateau` consecutive steps and reports the start of the plateau.
pub fn stabilize_heuristic(
    gsat: &GroebnerBasis,
    forms: &[Polynomial],
    plateau: u32,
    t_max: u32,
) -> Result<Stabilization, KoszulError> {
    let plateau = plateau.max(1) as usize;
    let mut dims = Vec::new();
    let mut history: Vec<KoszulClasses> = Vec::new();
    for t in 1..=t_max {
        let classes = h1_degree_zero(gsat, forms, t);
        dims.push(classes.dim());
        history.push(classes);
        let len = dims.len();
        if len > plateau && dims[len - plateau - 1..].iter().all(|&x| x == dims[len - 1]) {
            let start = len - plateau - 1;
            return Ok(Stabilization { n: start as u32 + 1, dims, classes: history.swap_remove(start) });
        }
    }
    let target = dims.last().copied().unwrap_or(0);
    Err(KoszulError::TMaxExceeded { t_max, target, dims })
}
