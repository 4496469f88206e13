//! Dense exact linear algebra over a [`Field`].

use std::fmt;

use crate::field::{Field, FieldElement};

/// Row-major dense matrix of field elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<u32> = self.row(r).iter().map(|c| c.code()).collect();
            write!(f, "{row:?}")?;
        }
        write!(f, "]")
    }
}

/// Output of [`ExactMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElement::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        ExactMatrix { rows: n, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<FieldElement>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Convenience constructor from integer codes reduced into the prime subfield.
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&v| field.from_int(v)).collect()).collect();
        Self::from_rows(rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn mul_vec(&self, field: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }

    pub fn mul(&self, field: &Field, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = field.add(out[(i, j)], field.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(FieldElement) -> FieldElement) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&c| f(c)).collect() }
    }

    /// Reduced row-echelon form. Pivots are chosen in the leftmost column
    /// that still has a nonzero entry, taking the first such row.
    pub fn rref(&self, field: &Field) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = field.inv(m[(row, col)]).expect("pivot is nonzero");
            m.scale_row(field, row, inv);
            for r in 0..m.rows {
                if r != row {
                    let factor = m[(r, col)];
                    if !factor.is_zero() {
                        m.add_row_multiple(field, r, row, field.neg(factor), col);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let rank = pivots.len();
        Rref { matrix: m, pivots, rank }
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).rank
    }

    /// Basis of `{v : M v = 0}`, one vector per free column, with that free
    /// coordinate equal to one and the other free coordinates zero.
    pub fn nullspace_basis(&self, field: &Field) -> Vec<Vec<FieldElement>> {
        let Rref { matrix, pivots, .. } = self.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[free] = FieldElement::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(matrix[(r, free)]);
                }
                v
            })
            .collect()
    }

    /// One solution of `M v = b`, free variables set to zero; `None` if the
    /// system is inconsistent.
    pub fn solve(&self, field: &Field, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.rows, "right-hand side has the wrong length");
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)];
            }
            aug[(r, self.cols)] = b[r];
        }
        let Rref { matrix, pivots, .. } = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut v = vec![FieldElement::ZERO; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = matrix[(r, self.cols)];
        }
        Some(v)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, field: &Field, r: usize, s: FieldElement) {
        for c in 0..self.cols {
            let v = self[(r, c)];
            self[(r, c)] = field.mul(v, s);
        }
    }

    /// row[dst] += s * row[src], only touching columns `from..`.
    fn add_row_multiple(&mut self, field: &Field, dst: usize, src: usize, s: FieldElement, from: usize) {
        for c in from..self.cols {
            let v = self[(src, c)];
            if !v.is_zero() {
                let cur = self[(dst, c)];
                self[(dst, c)] = field.add(cur, field.mul(s, v));
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = FieldElement;

    fn index(&self, (r, c): (usize, usize)) -> &FieldElement {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElement {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Echelon basis (rref rows) of the span of `vectors`, all of length `len`.
pub fn span_basis(field: &Field, vectors: &[Vec<FieldElement>], len: usize) -> Vec<Vec<FieldElement>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = ExactMatrix::from_rows(vectors.to_vec(), len);
    let r = m.rref(field);
    (0..r.rank).map(|i| r.matrix.row(i).to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = f3();
        let id = ExactMatrix::identity(2);
        let r = id.rref(&f);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 2);

        let z = ExactMatrix::zeros(3, 3);
        let r = z.rref(&f);
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);

        let m = ExactMatrix::from_ints(&f, &[&[1, 2], &[2, 1]]);
        let r = m.rref(&f);
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.matrix, ExactMatrix::from_ints(&f, &[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn nullspace_examples() {
        let f = f3();
        assert!(ExactMatrix::identity(3).nullspace_basis(&f).is_empty());
        assert_eq!(ExactMatrix::zeros(2, 2).nullspace_basis(&f).len(), 2);
        let f2 = Field::prime(2).unwrap();
        let m = ExactMatrix::from_ints(&f2, &[&[1, 1]]);
        assert_eq!(m.nullspace_basis(&f2), vec![vec![f2.one(), f2.one()]]);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = f3();
        let m = ExactMatrix::from_ints(&f, &[&[1, 2], &[2, 1]]);
        let b = vec![f.from_int(1), f.from_int(2)];
        let v = m.solve(&f, &b).unwrap();
        assert_eq!(v, vec![f.from_int(1), f.zero()]);
        assert_eq!(m.mul_vec(&f, &v), b);
        assert!(m.solve(&f, &[f.from_int(1), f.from_int(1)]).is_none());
    }

    fn matrix_strategy(p: i64) -> impl Strategy<Value = (Vec<i64>, usize, usize)> {
        (1usize..6, 1usize..6).prop_flat_map(move |(r, c)| (proptest::collection::vec(0..p, r * c), Just(r), Just(c)))
    }

    fn build(field: &Field, (data, _, c): &(Vec<i64>, usize, usize)) -> ExactMatrix {
        let rows = data.chunks(*c).map(|ch| ch.iter().map(|&v| field.from_int(v)).collect()).collect();
        ExactMatrix::from_rows(rows, *c)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rref_is_idempotent(m in matrix_strategy(3)) {
            let f = f3();
            let m = build(&f, &m);
            let once = m.rref(&f).matrix;
            prop_assert_eq!(once.rref(&f).matrix, once);
        }

        #[test]
        fn rank_nullity(m in matrix_strategy(5)) {
            let f = Field::prime(5).unwrap();
            let m = build(&f, &m);
            let ns = m.nullspace_basis(&f);
            prop_assert_eq!(m.rank(&f) + ns.len(), m.cols());
            for v in &ns {
                prop_assert!(m.mul_vec(&f, v).iter().all(|c| c.is_zero()));
            }
        }

        #[test]
        fn solutions_satisfy_system(m in matrix_strategy(3), x in proptest::collection::vec(0i64..3, 6)) {
            let f = f3();
            let m = build(&f, &m);
            let x: Vec<_> = x[..m.cols()].iter().map(|&v| f.from_int(v)).collect();
            let b = m.mul_vec(&f, &x);
            let v = m.solve(&f, &b).expect("constructed consistent");
            prop_assert_eq!(m.mul_vec(&f, &v), b);
        }
    }
}
