//! Tensor-product Koszul complexes of endomorphisms φ_k : F_k → F_k.
//!
//! The 0th homology of the tensored complex is
//! F₁/im(φ₁) ⊗ ⋯ ⊗ F_q/im(φ_q), so its length is the colength in
//! F₁⊗⋯⊗F_q of the layer sum Σ_k F₁⊗⋯⊗im(φ_k)⊗⋯⊗F_q.  When q = d and the
//! determinant ideal (det φ₁,…,det φ_d) has finite colength, both the tensor
//! complex and the Koszul complex on the determinants are acyclic, so the two
//! Euler characteristics reduce to λ(H₀) and λ(R/(det φ₁,…,det φ_d)); the
//! comparison verifier checks these two independently computed lengths agree.

use std::sync::OnceLock;

use serde::Serialize;

use crate::localring::{MIdeal, Poly};
use crate::submod::{poly_det, Submodule};
use crate::{Bounds, Error, Result};

/// An R-linear endomorphism of F = R^r, with its exact determinant.
#[derive(Clone, Debug)]
pub struct Endo {
    d: usize,
    field: crate::scalar::FieldSpec,
    r: usize,
    /// Row-major matrix in the standard basis: column j is the image of e_j.
    rows: Vec<Vec<Poly>>,
    det: OnceLock<Poly>,
}

impl Endo {
    pub fn new(d: usize, field: crate::scalar::FieldSpec, rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        assert!(r >= 1, "endomorphism of a rank-zero module");
        for row in &rows {
            assert_eq!(row.len(), r, "matrix must be square");
            for e in row {
                assert_eq!(e.d(), d);
                assert_eq!(e.field(), field);
            }
        }
        Endo { d, field, r, rows, det: OnceLock::new() }
    }

    pub fn identity(d: usize, field: crate::scalar::FieldSpec, r: usize) -> Self {
        let rows = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { Poly::one(d, field) } else { Poly::zero(d, field) })
                    .collect()
            })
            .collect();
        Endo::new(d, field, rows)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> crate::scalar::FieldSpec {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    /// Column j = φ(e_j).
    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.r).map(|i| self.rows[i][j].clone()).collect()
    }

    pub fn det(&self) -> &Poly {
        self.det.get_or_init(|| poly_det(self.d, self.field, &self.rows))
    }

    /// The image im(φ) ⊆ F as a submodule generated by the columns.
    pub fn image(&self) -> Submodule {
        let cols = (0..self.r).map(|j| self.column(j)).collect();
        Submodule::new(self.d, self.field, self.r, cols)
    }
}

/// φ whose matrix is the generator matrix of B — requires B to have exactly
/// rank-many generator columns, as a joint-reduction entry does.
pub fn endo_from_joint_reduction(b: &Submodule) -> Result<Endo> {
    let r = b.ambient_rank();
    if b.num_gens() != r {
        return Err(Error::WrongGeneratorCount { rank: r, gens: b.num_gens() });
    }
    let rows = (0..r)
        .map(|i| (0..r).map(|j| b.gens()[j][i].clone()).collect())
        .collect();
    Ok(Endo::new(b.d(), b.field(), rows))
}

fn det_ideal(phis: &[Endo]) -> MIdeal {
    let (d, field) = (phis[0].d, phis[0].field);
    MIdeal::new(d, field, phis.iter().map(|p| p.det().clone()).collect())
}

/// Flat index into F₁⊗⋯⊗F_q (first factor slowest).
fn tensor_index(ranks: &[usize], idx: &[usize]) -> usize {
    idx.iter().zip(ranks).fold(0, |acc, (&i, &r)| {
        debug_assert!(i < r);
        acc * r + i
    })
}

/// The layer sum Σ_k F₁⊗⋯⊗im(φ_k)⊗⋯⊗F_q as a submodule of F₁⊗⋯⊗F_q.
fn layer_sum(phis: &[Endo]) -> Submodule {
    let (d, field) = (phis[0].d, phis[0].field);
    let ranks: Vec<usize> = phis.iter().map(|p| p.r).collect();
    let ambient: usize = ranks.iter().product();
    let mut columns = Vec::new();
    for (k, phi) in phis.iter().enumerate() {
        // Basis tuples over all factors except k.
        let mut others = vec![Vec::<usize>::new()];
        for (j, &r) in ranks.iter().enumerate() {
            if j == k {
                continue;
            }
            others = others
                .into_iter()
                .flat_map(|p| {
                    (0..r).map(move |i| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    })
                })
                .collect();
        }
        for j in 0..phi.r {
            let col_k = phi.column(j);
            for tuple in &others {
                let mut col = vec![Poly::zero(d, field); ambient];
                for (slot, entry) in col_k.iter().enumerate() {
                    if entry.is_zero() {
                        continue;
                    }
                    let mut idx = Vec::with_capacity(ranks.len());
                    let mut t = tuple.iter();
                    for jj in 0..ranks.len() {
                        idx.push(if jj == k { slot } else { *t.next().unwrap() });
                    }
                    col[tensor_index(&ranks, &idx)] = entry.clone();
                }
                columns.push(col);
            }
        }
    }
    Submodule::new(d, field, ambient, columns)
}

/// λ(H₀) = λ((F₁⊗⋯⊗F_q) / Σ_k F₁⊗⋯⊗im(φ_k)⊗⋯⊗F_q).  Requires the
/// determinant ideal to be m-primary (certified first).
pub fn h0_length(phis: &[Endo], bounds: Bounds) -> Result<usize> {
    assert!(!phis.is_empty());
    det_ideal(phis).mprimary_exponent(bounds.s_max)?;
    layer_sum(phis).colength(bounds.s_max)
}

/// λ(R/(det φ₁,…,det φ_d)); requires exactly d endomorphisms so that the
/// determinants form a system of parameters when the ideal is m-primary.
pub fn det_koszul_colength(phis: &[Endo], bounds: Bounds) -> Result<usize> {
    let d = phis[0].d;
    if phis.len() != d {
        return Err(Error::Mismatch(format!(
            "determinant comparison needs exactly d = {} endomorphisms, got {}",
            d,
            phis.len()
        )));
    }
    det_ideal(phis).colength(bounds.s_max)
}

/// Both sides of the Euler-characteristic comparison, computed independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub h0: usize,
    pub det_colength: usize,
    pub equal: bool,
}

pub fn verify_comparison(phis: &[Endo], bounds: Bounds) -> Result<ComparisonReport> {
    let h0 = h0_length(phis, bounds)?;
    let det_colength = det_koszul_colength(phis, bounds)?;
    Ok(ComparisonReport { h0, det_colength, equal: h0 == det_colength })
}
