//! Dense exact linear algebra over the scalar field.
//!
//! Gaussian elimination with first-nonzero pivoting: arithmetic is exact, so
//! no numerical pivoting is needed, and desk-scale matrices (a few thousand
//! columns) are best served by cache-friendly dense rows.  [`RowSpace`] is the
//! incremental echelon basis every certificate in the crate bottoms out in.

use crate::scalar::{FieldSpec, Scalar};
use crate::{Error, Result};

/// A dense row-major matrix over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, field: FieldSpec, entries: Vec<Scalar>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        DenseMatrix { rows, cols, field, entries }
    }

    pub fn zeros(rows: usize, cols: usize, field: FieldSpec) -> Self {
        DenseMatrix { rows, cols, field, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = DenseMatrix::zeros(n, n, field);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    /// Build from integer entries (test convenience).
    pub fn from_i64(rows: usize, cols: usize, field: FieldSpec, entries: &[i64]) -> Self {
        DenseMatrix::new(rows, cols, field, entries.iter().map(|&n| field.from_i64(n)).collect())
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r);
        }
        DenseMatrix { rows: n, cols, field, entries }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Reduced row-echelon form, pivot column indices, and rank.
    /// The row space is preserved.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>, usize) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0; // next pivot row
        for c in 0..m.cols {
            // First nonzero entry in column c at or below row r.
            let Some(pr) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.at(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                *m.at_mut(r, j) = &*m.at(r, j) * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let factor = m.at(i, c).clone();
                    for j in c..m.cols {
                        let sub = &factor * m.at(r, j);
                        *m.at_mut(i, j) = &*m.at(i, j) - &sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots.clone(), pivots.len())
    }

    pub fn rank(&self) -> usize {
        self.rref().2
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// True iff v lies in the row space.
    pub fn span_contains(&self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::Mismatch(format!(
                "vector length {} does not match column count {}",
                v.len(),
                self.cols
            )));
        }
        let mut space = RowSpace::new(self.cols, self.field);
        for i in 0..self.rows {
            space.insert(self.row(i).to_vec());
        }
        Ok(space.contains(v))
    }

    /// Rows form a basis of the right null space: rank + kernel rows = cols.
    pub fn kernel_basis(&self) -> DenseMatrix {
        let (r, pivots, rank) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = DenseMatrix::zeros(free.len(), self.cols, self.field);
        for (k, &fc) in free.iter().enumerate() {
            *out.at_mut(k, fc) = self.field.one();
            for (i, &pc) in pivots.iter().enumerate().take(rank) {
                // x_pc = −rref[i][fc] when x_fc = 1.
                *out.at_mut(k, pc) = -r.at(i, fc);
            }
        }
        out
    }
}

/// Incrementally built echelon basis of a subspace of k^width.
///
/// Rows are kept normalized (leading coefficient 1) and sorted by leading
/// index; inserting reduces against existing pivots only, which is all that
/// rank and membership need.
#[derive(Clone, Debug)]
pub struct RowSpace {
    width: usize,
    field: FieldSpec,
    rows: Vec<Vec<Scalar>>,
    leads: Vec<usize>,
}

impl RowSpace {
    pub fn new(width: usize, field: FieldSpec) -> Self {
        RowSpace { width, field, rows: Vec::new(), leads: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce v against the current pivots, in place.
    fn reduce(&self, v: &mut [Scalar]) {
        for (idx, &l) in self.leads.iter().enumerate() {
            if v[l].is_zero() {
                continue;
            }
            let c = v[l].clone();
            let row = &self.rows[idx];
            for j in l..self.width {
                if !row[j].is_zero() {
                    let sub = &c * &row[j];
                    v[j] = &v[j] - &sub;
                }
            }
        }
    }

    /// Insert a vector; returns true iff it enlarged the space.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.width);
        self.reduce(&mut v);
        let Some(lead) = v.iter().position(|s| !s.is_zero()) else {
            return false;
        };
        let inv = v[lead].inv().expect("nonzero lead");
        for s in v.iter_mut().skip(lead) {
            if !s.is_zero() {
                *s = &*s * &inv;
            }
        }
        let pos = self.leads.partition_point(|&l| l < lead);
        self.leads.insert(pos, lead);
        self.rows.insert(pos, v);
        true
    }

    /// Membership in the span.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.width);
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Scalar::is_zero)
    }

    /// The normal form of v modulo the span (v minus its projection).
    pub fn residue(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        assert_eq!(v.len(), self.width);
        self.reduce(&mut v);
        v
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> FieldSpec {
        FieldSpec::default()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = DenseMatrix::identity(2, fp());
        let (r, pivots, rank) = id.rref();
        assert_eq!(r, id);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rank, 2);

        let z = DenseMatrix::zeros(3, 4, fp());
        let (r, pivots, rank) = z.rref();
        assert_eq!(r, z);
        assert!(pivots.is_empty());
        assert_eq!(rank, 0);
    }

    #[test]
    fn rref_rank_one_over_q() {
        let a = DenseMatrix::from_i64(2, 2, FieldSpec::Q, &[1, 2, 2, 4]);
        let (r, _, rank) = a.rref();
        assert_eq!(rank, 1);
        assert_eq!(r, DenseMatrix::from_i64(2, 2, FieldSpec::Q, &[1, 2, 0, 0]));
    }

    #[test]
    fn rref_is_idempotent() {
        let a = DenseMatrix::from_i64(3, 4, fp(), &[2, 0, 1, 5, 4, 1, 0, 3, 6, 1, 1, 8]);
        let (r1, _, _) = a.rref();
        let (r2, _, _) = r1.rref();
        assert_eq!(r1, r2);
    }

    #[test]
    fn span_membership() {
        let id = DenseMatrix::identity(3, fp());
        assert!(id.span_contains(&[fp().from_i64(5), fp().from_i64(0), fp().from_i64(9)]).unwrap());

        let z = DenseMatrix::zeros(1, 2, fp());
        assert!(!z.span_contains(&[fp().one(), fp().zero()]).unwrap());

        // rows {(1,1,0),(0,1,1)} contain (1,0,−1) = row0 − row1.
        let b = DenseMatrix::from_i64(2, 3, fp(), &[1, 1, 0, 0, 1, 1]);
        assert!(b.span_contains(&[fp().one(), fp().zero(), fp().from_i64(-1)]).unwrap());
        assert!(!b.span_contains(&[fp().one(), fp().zero(), fp().zero()]).unwrap());

        assert!(b.span_contains(&[fp().one()]).is_err());
    }

    #[test]
    fn kernels() {
        let id = DenseMatrix::identity(4, fp());
        assert_eq!(id.kernel_basis().shape(), (0, 4));

        let z = DenseMatrix::zeros(3, 3, fp());
        let k = z.kernel_basis();
        assert_eq!(k.rank(), 3);

        let a = DenseMatrix::from_i64(1, 2, fp(), &[1, 1]);
        let k = a.kernel_basis();
        assert_eq!(k.shape(), (1, 2));
        // The kernel row must satisfy A·v = 0, i.e. v0 + v1 = 0.
        let s = &*k.at(0, 0) + k.at(0, 1);
        assert!(s.is_zero());
    }

    #[test]
    fn rank_nullity_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let e: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-50..=50)).collect();
            let a = DenseMatrix::from_i64(rows, cols, fp(), &e);
            let q = DenseMatrix::from_i64(rows, cols, FieldSpec::Q, &e);
            assert_eq!(a.rank() + a.kernel_basis().shape().0, cols);
            // F_p and Q agree on rank for small integer matrices.
            assert_eq!(a.rank(), q.rank());
        }
    }

    #[test]
    fn row_space_incremental() {
        let k = fp();
        let mut s = RowSpace::new(3, k);
        assert!(s.insert(vec![k.from_i64(1), k.from_i64(1), k.zero()]));
        assert!(s.insert(vec![k.zero(), k.from_i64(1), k.from_i64(1)]));
        assert!(!s.insert(vec![k.from_i64(1), k.from_i64(2), k.from_i64(1)]));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&[k.from_i64(1), k.zero(), k.from_i64(-1)]));
        assert!(!s.contains(&[k.one(), k.zero(), k.zero()]));
    }
}
