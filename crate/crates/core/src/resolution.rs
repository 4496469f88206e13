//! Graded free resolutions of `A/I` and degree strands of `Ext_A(A/I, A(s))`.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::field::FieldElement;
use crate::groebner::engine::{self, FreeSpace, GbOptions, MTerm};
use crate::groebner::Ideal;
use crate::linalg::ExactMatrix;
use crate::polyring::{Monomial, PolyRing, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("resolution computed to homological degree {computed}, degree {needed} is required")]
    TooShort { computed: usize, needed: usize },
}

/// `⊕_j A(-d_j)`, stored by the generator degrees `d_j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedFreeModule {
    pub degrees: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(degrees: Vec<i64>) -> Self {
        GradedFreeModule { degrees }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// The shifts `-d_j`, as in `A(-2)`.
    pub fn twists(&self) -> Vec<i64> {
        self.degrees.iter().map(|d| -d).collect()
    }

    /// `dim_K` of the degree-`m` piece.
    pub fn strand_dim(&self, ring: &PolyRing, m: i64) -> usize {
        self.degrees
            .iter()
            .filter(|&&d| m >= d)
            .map(|&d| ring.monomials_of_degree((m - d) as u64).len())
            .sum()
    }
}

/// Homogeneous map of free modules; column `j` is the image of source generator `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedFreeModule,
    pub target: GradedFreeModule,
    /// `entries[i][j]`, row `i` indexes target generators.
    pub entries: Vec<Vec<Polynomial>>,
}

impl GradedMap {
    pub fn new(ring: &Arc<PolyRing>, source: GradedFreeModule, target: GradedFreeModule, columns: Vec<Vec<Polynomial>>) -> Self {
        let mut entries = vec![vec![Polynomial::zero(ring); source.rank()]; target.rank()];
        for (j, col) in columns.into_iter().enumerate() {
            for (i, f) in col.into_iter().enumerate() {
                entries[i][j] = f;
            }
        }
        GradedMap { source, target, entries }
    }

    /// The `1 × k` map `A^k → A` given by a list of homogeneous forms.
    pub fn row(ring: &Arc<PolyRing>, forms: &[Polynomial]) -> Self {
        let degrees = forms.iter().map(|f| f.homogeneous_degree().unwrap_or(0) as i64).collect();
        let columns = forms.iter().map(|f| vec![f.clone()]).collect();
        Self::new(ring, GradedFreeModule::new(degrees), GradedFreeModule::new(vec![0]), columns)
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    /// Entries are zero or homogeneous of degree `source_j - target_i`.
    pub fn is_homogeneous(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, f)| {
                f.is_zero()
                    || f.homogeneous_degree().map(|d| d as i64) == Some(self.source.degrees[j] - self.target.degrees[i])
            })
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Vec<Vec<Polynomial>> {
        assert_eq!(self.source.rank(), other.target.rank());
        let mut out = Vec::with_capacity(self.target.rank());
        for row in &self.entries {
            let mut out_row = Vec::with_capacity(other.source.rank());
            for j in 0..other.source.rank() {
                let mut acc: Option<Polynomial> = None;
                for (k, f) in row.iter().enumerate() {
                    let prod = f * &other.entries[k][j];
                    acc = Some(match acc {
                        None => prod,
                        Some(a) => &a + &prod,
                    });
                }
                out_row.push(acc.expect("nonempty composition"));
            }
            out.push(out_row);
        }
        out
    }
}

/// Generators of `ker M`, as the columns of a map into `M.source`.
pub fn syzygy_basis(ring: &Arc<PolyRing>, map: &GradedMap) -> GradedMap {
    let r = map.target.rank();
    let k = map.source.rank();
    let mut twists = map.target.degrees.clone();
    twists.extend(&map.source.degrees);
    let space = FreeSpace { ring, twists };
    let gens: Vec<Vec<MTerm>> = (0..k)
        .map(|j| {
            let mut v: Vec<MTerm> = Vec::new();
            for i in 0..r {
                v.extend(map.entries[i][j].terms().iter().map(|(m, c)| (i, m.clone(), *c)));
            }
            v.push((r + j, Monomial::one(ring.nvars()), FieldElement::ONE));
            v
        })
        .collect();
    let gb = engine::groebner(&space, gens, GbOptions::default());
    let mut degrees = Vec::new();
    let mut columns = Vec::new();
    for g in gb.into_iter().filter(|g| g[0].0 >= r) {
        degrees.push(space.degree(g[0].0, &g[0].1));
        let mut col: Vec<Vec<(Monomial, FieldElement)>> = vec![Vec::new(); k];
        for (comp, m, c) in g {
            col[comp - r].push((m, c));
        }
        columns.push(col.into_iter().map(|ts| Polynomial::from_terms(ring, ts)).collect());
    }
    GradedMap::new(ring, GradedFreeModule::new(degrees), map.source.clone(), columns)
}

/// `F_0 ← F_1 ← ... ← F_L` resolving `A/I`.
#[derive(Debug, Clone)]
pub struct FreeResolution {
    ring: Arc<PolyRing>,
    modules: Vec<GradedFreeModule>,
    /// `maps[i]` is `d_{i+1} : F_{i+1} → F_i`.
    maps: Vec<GradedMap>,
    /// Every module past the last one is zero.
    complete: bool,
}

impl FreeResolution {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn modules(&self) -> &[GradedFreeModule] {
        &self.modules
    }

    pub fn maps(&self) -> &[GradedMap] {
        &self.maps
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    /// Highest homological degree whose module is known (zero past the end
    /// of a complete resolution).
    pub fn known_through(&self) -> usize {
        if self.complete {
            usize::MAX
        } else {
            self.modules.len() - 1
        }
    }

    pub fn module(&self, i: usize) -> GradedFreeModule {
        self.modules.get(i).cloned().unwrap_or_default()
    }

    /// `d_i : F_i → F_{i-1}`; `None` when either side is zero or unknown.
    pub fn map(&self, i: usize) -> Option<&GradedMap> {
        if i == 0 {
            None
        } else {
            self.maps.get(i - 1)
        }
    }
}

/// Graded free resolution of `A/I` through homological degree `length`.
/// Constant entries of the differentials are cancelled, which makes the
/// result minimal.
pub fn free_resolution(ideal: &Ideal, length: usize) -> FreeResolution {
    let ring = ideal.ring().clone();
    let mut modules = vec![GradedFreeModule::new(vec![0])];
    let mut maps: Vec<GradedMap> = Vec::new();
    let mut complete = false;
    if ideal.is_zero() {
        return FreeResolution { ring, modules, maps, complete: true };
    }
    if length == 0 {
        return FreeResolution { ring, modules, maps, complete: false };
    }
    let first = GradedMap::row(&ring, ideal.generators());
    modules.push(first.source.clone());
    maps.push(first);
    prune_last(&ring, &mut modules, &mut maps);

    // one step past `length` so that the last module is pruned too
    while maps.len() <= length {
        let last = maps.last().expect("at least one map");
        if last.source.rank() == 0 {
            complete = true;
            break;
        }
        let syz = syzygy_basis(&ring, last);
        log::debug!("syzygies at homological degree {}: {}", maps.len() + 1, syz.source.rank());
        modules.push(syz.source.clone());
        maps.push(syz);
        prune_last(&ring, &mut modules, &mut maps);
    }
    // drop the trailing zero module(s)
    while modules.len() > 1 && modules.last().is_some_and(|m| m.rank() == 0) {
        modules.pop();
        maps.pop();
        complete = true;
    }
    if !complete && modules.len() > length + 1 {
        modules.truncate(length + 1);
        maps.truncate(length);
    }
    FreeResolution { ring, modules, maps, complete }
}

fn unit_entry(map: &GradedMap) -> Option<(usize, usize, FieldElement)> {
    for (i, row) in map.entries.iter().enumerate() {
        for (j, f) in row.iter().enumerate() {
            if !f.is_zero() && f.is_constant() {
                return Some((i, j, f.lead_coeff().expect("nonzero")));
            }
        }
    }
    None
}

/// Cancels unit entries of the newest differential `d_L` one at a time: a
/// unit at `(r, c)` splits off `A e_c → A e_r`, leaving the Schur complement
/// in `d_L` and dropping column `r` of `d_{L-1}`.
fn prune_last(ring: &Arc<PolyRing>, modules: &mut [GradedFreeModule], maps: &mut [GradedMap]) {
    let l = maps.len();
    let field = ring.field().clone();
    while let Some((r, c, u)) = unit_entry(&maps[l - 1]) {
        let d = &maps[l - 1];
        let inv = field.inv(u).expect("unit");
        let rows = d.target.rank();
        let cols = d.source.rank();
        let mut columns = Vec::with_capacity(cols - 1);
        for j in (0..cols).filter(|&j| j != c) {
            let factor = d.entries[r][j].scale(inv);
            let col: Vec<Polynomial> = (0..rows)
                .filter(|&i| i != r)
                .map(|i| &d.entries[i][j] - &(&d.entries[i][c] * &factor))
                .collect();
            columns.push(col);
        }
        let mut source = d.source.clone();
        source.degrees.remove(c);
        let mut target = d.target.clone();
        target.degrees.remove(r);
        maps[l - 1] = GradedMap::new(ring, source.clone(), target.clone(), columns);
        modules[l] = source;
        modules[l - 1] = target.clone();
        if l >= 2 {
            let prev = &mut maps[l - 2];
            for row in prev.entries.iter_mut() {
                row.remove(r);
            }
            prev.source = target;
        }
    }
}

/// `dim_K [Ext^i_A(A/I, A(twist))]_degree`, computed from the degree strands
/// of the dual complex `Hom(F_•, A(twist))`.
pub fn ext_strand_length(res: &FreeResolution, index: usize, twist: i64, degree: i64) -> Result<usize, ResolutionError> {
    if res.known_through() < index + 1 {
        return Err(ResolutionError::TooShort { computed: res.known_through(), needed: index + 1 });
    }
    let ring = res.ring();
    let field = ring.field();
    // Hom(A(-d), A(twist))_degree = A_{d + twist + degree}
    let strand = |i: usize| -> Vec<(usize, Monomial)> {
        let module = res.module(i);
        let mut basis = Vec::new();
        for (j, &d) in module.degrees.iter().enumerate() {
            let m = d + twist + degree;
            if m >= 0 {
                basis.extend(ring.monomials_of_degree(m as u64).into_iter().map(|mono| (j, mono)));
            }
        }
        basis
    };
    // rank of d_i^* : Hom(F_{i-1}) → Hom(F_i) on the strands
    let dual_rank = |i: usize, from: &[(usize, Monomial)], to: &[(usize, Monomial)]| -> usize {
        let Some(map) = res.map(i) else { return 0 };
        if from.is_empty() || to.is_empty() {
            return 0;
        }
        let index: HashMap<(usize, &Monomial), usize> = to.iter().enumerate().map(|(k, (j, m))| ((*j, m), k)).collect();
        let mut mat = ExactMatrix::zeros(to.len(), from.len());
        for (col, (r, mono)) in from.iter().enumerate() {
            for (c, entry) in map.entries[*r].iter().enumerate() {
                for (m, coef) in entry.terms() {
                    let prod = m.mul(mono);
                    let row = index[&(c, &prod)];
                    mat[(row, col)] = field.add(mat[(row, col)], *coef);
                }
            }
        }
        mat.rank(field)
    };
    let here = strand(index);
    let next = strand(index + 1);
    let outgoing = dual_rank(index + 1, &here, &next);
    let incoming = if index == 0 { 0 } else { dual_rank(index, &strand(index - 1), &here) };
    Ok(here.len() - outgoing - incoming)
}

/// `ℓ = dim_K [Ext^{n-1}_A(A/I, A(-σ))]_0` with `σ` the sum of the variable weights.
pub fn ell(res: &FreeResolution) -> Result<usize, ResolutionError> {
    let ring = res.ring();
    ext_strand_length(res, ring.nvars() - 1, -(ring.weight_sum() as i64), 0)
}
