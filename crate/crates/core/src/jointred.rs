//! Joint reductions (B₁,…,B_q) of tuples of finite-colength submodules
//! (M₁,…,M_q): each B_k is spanned by r_k generic scalar combinations of
//! M_k's generators, and the defining equation
//!
//!   S_{n+1}(M₁)⋯S_{n+1}(M_q) = Σ_k S_{n+1}(M₁)⋯B_k·S_n(M_k)⋯S_{n+1}(M_q)
//!
//! is tested by certified colength equality (the right side is contained in
//! the left by construction).  The determinantal criterion replaces each B_k
//! by det(B_k) and checks that Σ_k det(B_k)·∏_{j≠k} I(M_j) is a reduction of
//! ∏_j I(M_j); the two are equivalent, which the verifiers exercise as a
//! cross-check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::localring::{monomials_of_degree, MIdeal, Poly};
use crate::scalar::FieldSpec;
use crate::submod::{poly_det, Submodule};
use crate::symprod::{graded_product, sym_generators, sym_mult_vectors, tensor_combine};
use crate::{Bounds, Error, Result};

/// A candidate joint reduction: per factor, an m_k × r_k scalar coefficient
/// matrix A_k and the resulting columns B_k = M_k·A_k.
#[derive(Clone, Debug)]
pub struct JointReduction {
    d: usize,
    field: FieldSpec,
    seed: Option<u64>,
    /// Per-factor coefficient matrices, row i = coefficients of generator i.
    coeffs: Vec<Vec<Vec<crate::scalar::Scalar>>>,
    /// Per-factor candidate columns (exactly r_k of them, kept verbatim —
    /// degenerate draws may repeat a column, which the checks must see).
    columns: Vec<Vec<Vec<Poly>>>,
}

impl JointReduction {
    /// Draw A_k uniformly over the scalar field with a seeded generator;
    /// deterministic for a fixed seed.
    pub fn random_candidate(ms: &[Submodule], seed: u64) -> Self {
        assert!(!ms.is_empty());
        let (d, field) = (ms[0].d(), ms[0].field());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = Vec::with_capacity(ms.len());
        let mut columns = Vec::with_capacity(ms.len());
        for m in ms {
            assert_eq!(m.d(), d);
            assert_eq!(m.field(), field);
            let (rows, cols) = (m.num_gens(), m.ambient_rank());
            let a: Vec<Vec<crate::scalar::Scalar>> = (0..rows)
                .map(|_| (0..cols).map(|_| field.random(&mut rng)).collect())
                .collect();
            columns.push(combine_columns(m, &a));
            coeffs.push(a);
        }
        JointReduction { d, field, seed: Some(seed), coeffs, columns }
    }

    /// Wrap explicitly given columns (each inner list: exactly rank-many
    /// columns in the corresponding ambient).
    pub fn from_columns(d: usize, field: FieldSpec, columns: Vec<Vec<Vec<Poly>>>) -> Self {
        JointReduction { d, field, seed: None, coeffs: Vec::new(), columns }
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn coeffs(&self) -> &[Vec<Vec<crate::scalar::Scalar>>] {
        &self.coeffs
    }

    pub fn factors(&self) -> usize {
        self.columns.len()
    }

    /// The raw columns of B_k.
    pub fn columns(&self, k: usize) -> &[Vec<Poly>] {
        &self.columns[k]
    }

    /// B_k as a submodule of F_k.
    pub fn submodule(&self, k: usize) -> Submodule {
        let r = self.columns[k][0].len();
        Submodule::new(self.d, self.field, r, self.columns[k].clone())
    }

    /// det of the square matrix whose columns are B_k's columns.
    pub fn det(&self, k: usize) -> Poly {
        let cols = &self.columns[k];
        let r = cols[0].len();
        assert_eq!(cols.len(), r, "joint-reduction entry must be square");
        let rows: Vec<Vec<Poly>> = (0..r)
            .map(|i| (0..r).map(|j| cols[j][i].clone()).collect())
            .collect();
        poly_det(self.d, self.field, &rows)
    }
}

/// B_k = M_k·A_k: column j is Σ_i a[i][j]·(generator i).
fn combine_columns(m: &Submodule, a: &[Vec<crate::scalar::Scalar>]) -> Vec<Vec<Poly>> {
    let (d, field, r) = (m.d(), m.field(), m.ambient_rank());
    let width = if a.is_empty() { r } else { a[0].len() };
    (0..width)
        .map(|j| {
            let mut col = vec![Poly::zero(d, field); r];
            for (i, g) in m.gens().iter().enumerate() {
                let c = &a[i][j];
                if c.is_zero() {
                    continue;
                }
                for (slot, entry) in g.iter().enumerate() {
                    col[slot] = col[slot].add(&entry.scale(c));
                }
            }
            col
        })
        .collect()
}

/// Outcome of one equational check at a fixed n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EquationalCheck {
    pub holds: bool,
    /// True when the right side failed its finite-colength certificate, so
    /// the failure is a bound artifact rather than a certified inequality.
    pub indeterminate: bool,
    pub lhs_colength: usize,
    pub rhs_colength: Option<usize>,
}

/// Test the joint reduction equation at index n by colength equality.
pub fn verify_equational(
    ms: &[Submodule],
    b: &JointReduction,
    n: usize,
    bounds: Bounds,
) -> Result<EquationalCheck> {
    assert_eq!(ms.len(), b.factors());
    let (d, field) = (ms[0].d(), ms[0].field());
    let q = ms.len();
    let degrees = vec![n + 1; q];
    let lhs = graded_product(ms, &degrees, bounds.gen_cap)?;
    let lhs_colength = lhs.colength(bounds.s_max)?;

    let factor_dims: Vec<usize> = ms
        .iter()
        .map(|m| monomials_of_degree(m.ambient_rank(), n + 1).len())
        .collect();
    let mut rhs: Option<Submodule> = None;
    for k in 0..q {
        let mut factor_gens = Vec::with_capacity(q);
        for (j, m) in ms.iter().enumerate() {
            if j == k {
                let ws = sym_generators(m, n, bounds.gen_cap)?;
                factor_gens.push(sym_mult_vectors(b.columns(k), &ws, m.ambient_rank(), n));
            } else {
                factor_gens.push(sym_generators(m, n + 1, bounds.gen_cap)?);
            }
        }
        let term = tensor_combine(d, field, &factor_gens, &factor_dims, bounds.gen_cap)?;
        rhs = Some(match rhs {
            None => term,
            Some(acc) => acc.plus(&term),
        });
    }
    let rhs = rhs.expect("at least one factor");

    match rhs.colength(bounds.s_max) {
        Ok(c) => Ok(EquationalCheck {
            holds: c == lhs_colength,
            indeterminate: false,
            lhs_colength,
            rhs_colength: Some(c),
        }),
        Err(Error::NotFiniteColength { .. }) => Ok(EquationalCheck {
            holds: false,
            indeterminate: true,
            lhs_colength,
            rhs_colength: None,
        }),
        Err(e) => Err(e),
    }
}

/// Result of the joint-reduction-number sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Jrn {
    Found { n: usize },
    NotFound { n_max: usize },
}

/// Smallest n ≤ n_max with the equation holding; NotFound is a value, not an
/// error, and never means "not a joint reduction."
pub fn joint_reduction_number(
    ms: &[Submodule],
    b: &JointReduction,
    bounds: Bounds,
) -> Result<Jrn> {
    for n in 0..=bounds.n_max {
        if verify_equational(ms, b, n, bounds)?.holds {
            return Ok(Jrn::Found { n });
        }
    }
    Ok(Jrn::NotFound { n_max: bounds.n_max })
}

/// Outcome of the determinantal criterion sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeterminantalCheck {
    pub holds: bool,
    /// The first n with (∏I)^{n+1} = J·(∏I)^n, when one exists within n_max.
    pub witness_n: Option<usize>,
}

/// Thm-style determinantal criterion: J = Σ_k det(B_k)·∏_{j≠k} I(M_j) must
/// be a reduction of ∏_j I(M_j), checked by a certified ideal-level sweep.
pub fn verify_determinantal(
    ms: &[Submodule],
    b: &JointReduction,
    bounds: Bounds,
) -> Result<DeterminantalCheck> {
    assert_eq!(ms.len(), b.factors());
    let (d, field) = (ms[0].d(), ms[0].field());
    let ideals: Vec<MIdeal> = ms.iter().map(Submodule::fitting_ideal).collect();
    let product = ideals
        .iter()
        .fold(MIdeal::unit(d, field), |acc, i| acc.product(i));

    let mut j_gens: Vec<Poly> = Vec::new();
    for k in 0..ms.len() {
        let det = b.det(k);
        if det.is_zero() {
            continue;
        }
        let others = ideals
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .fold(MIdeal::unit(d, field), |acc, (_, i)| acc.product(i));
        for g in others.gens() {
            j_gens.push(det.mul(g));
        }
    }
    let j = MIdeal::new(d, field, j_gens);

    for n in 0..=bounds.n_max {
        let lhs = Submodule::from_ideal(&product.power(n + 1));
        let rhs = Submodule::from_ideal(&j.product(&product.power(n)));
        // rhs ⊆ lhs holds since J ⊆ ∏I (Cauchy–Binet); verify both ways all
        // the same so the report never rests on an unchecked inclusion.
        match (lhs.leq(&rhs, bounds.s_max), rhs.leq(&lhs, bounds.s_max)) {
            (Ok(true), Ok(true)) => {
                return Ok(DeterminantalCheck { holds: true, witness_n: Some(n) })
            }
            (Err(Error::NotFiniteColength { .. }), _)
            | (_, Err(Error::NotFiniteColength { .. })) => continue,
            (Ok(_), Ok(_)) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(DeterminantalCheck { holds: false, witness_n: None })
}

/// Per-factor freeness (nonzero determinant) and minimal-generator extension
/// (B_k's columns stay independent in M_k/m·M_k).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub det_nonzero: Vec<bool>,
    pub extends_mingen: Vec<bool>,
}

pub fn freeness_and_minimality_check(
    ms: &[Submodule],
    b: &JointReduction,
    bounds: Bounds,
) -> Result<FreenessReport> {
    assert_eq!(ms.len(), b.factors());
    let maximal = MIdeal::maximal(ms[0].d(), ms[0].field());
    let mut det_nonzero = Vec::with_capacity(ms.len());
    let mut extends_mingen = Vec::with_capacity(ms.len());
    for (k, m) in ms.iter().enumerate() {
        det_nonzero.push(!b.det(k).is_zero());
        let mm = m.scalar_extend(&maximal);
        let rank = mm.residue_rank(b.columns(k), bounds.s_max)?;
        extends_mingen.push(rank == b.columns(k).len());
    }
    Ok(FreenessReport { det_nonzero, extends_mingen })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::{default_var_names, parse_poly};

    fn k() -> FieldSpec {
        FieldSpec::default()
    }

    fn p(src: &str) -> Poly {
        parse_poly(src, &default_var_names(2), k()).unwrap()
    }

    fn b() -> Bounds {
        Bounds::default()
    }

    fn m_ideal() -> Submodule {
        Submodule::from_ideal(&MIdeal::maximal(2, k()))
    }

    #[test]
    fn candidates_are_deterministic_and_contained() {
        let ms = [m_ideal(), m_ideal()];
        let jr1 = JointReduction::random_candidate(&ms, 42);
        let jr2 = JointReduction::random_candidate(&ms, 42);
        assert_eq!(jr1.coeffs(), jr2.coeffs());
        assert_eq!(jr1.columns(0), jr2.columns(0));
        let jr3 = JointReduction::random_candidate(&ms, 43);
        assert_ne!(jr1.coeffs(), jr3.coeffs());
        for k in 0..2 {
            assert_eq!(jr1.columns(k).len(), 1);
            for col in jr1.columns(k) {
                assert!(ms[k].contains(col, b().s_max).unwrap());
            }
        }
    }

    #[test]
    fn full_modules_draw_spanning_candidates() {
        let ms = [Submodule::free(2, k(), 2)];
        let jr = JointReduction::random_candidate(&ms, 7);
        let bsub = jr.submodule(0);
        assert!(bsub.fitting_ideal().gens().iter().any(|g| g.is_local_unit()));
    }

    #[test]
    fn explicit_maximal_pair_has_reduction_number_zero() {
        // I = J = m, B = ((x), (y)): m·m = x·m + y·m.
        let ms = [m_ideal(), m_ideal()];
        let jr = JointReduction::from_columns(
            2,
            k(),
            vec![vec![vec![p("x")]], vec![vec![p("y")]]],
        );
        let check = verify_equational(&ms, &jr, 0, b()).unwrap();
        assert!(check.holds);
        assert!(!check.indeterminate);
        assert_eq!(check.lhs_colength, 3, "λ(R/m²) = 3");
        assert_eq!(joint_reduction_number(&ms, &jr, b()).unwrap(), Jrn::Found { n: 0 });
    }

    #[test]
    fn degenerate_entries_never_reduce() {
        // B = ((x), (x)): Σ = x·m, and m^{n+1}m^{n+1} ⊋ x·m^{2n+1} for all n.
        let ms = [m_ideal(), m_ideal()];
        let jr = JointReduction::from_columns(
            2,
            k(),
            vec![vec![vec![p("x")]], vec![vec![p("x")]]],
        );
        let swept = joint_reduction_number(&ms, &jr, Bounds { n_max: 2, ..b() }).unwrap();
        assert_eq!(swept, Jrn::NotFound { n_max: 2 });
        let det = verify_determinantal(&ms, &jr, Bounds { n_max: 2, ..b() }).unwrap();
        assert!(!det.holds);
    }

    #[test]
    fn random_candidates_reduce_generic_pairs() {
        let ms = [m_ideal(), m_ideal()];
        for seed in 0..10u64 {
            let jr = JointReduction::random_candidate(&ms, seed);
            let check = verify_equational(&ms, &jr, 0, b()).unwrap();
            assert!(check.holds, "seed {seed} failed: {check:?}");
            // Generic (a, b) has λ(R/(a,b)) = e(m|m) = 1.
            let pair = MIdeal::new(2, k(), vec![jr.columns(0)[0][0].clone(), jr.columns(1)[0][0].clone()]);
            assert_eq!(pair.colength(b().s_max).unwrap(), 1, "seed {seed}");
        }
    }

    #[test]
    fn equational_holds_upward_once_it_holds() {
        let ms = [m_ideal(), m_ideal()];
        let jr = JointReduction::random_candidate(&ms, 3);
        let at0 = verify_equational(&ms, &jr, 0, b()).unwrap().holds;
        let at1 = verify_equational(&ms, &jr, 1, b()).unwrap().holds;
        assert!(at0);
        assert!(at1, "equation must persist at larger n");
    }

    #[test]
    fn module_pair_with_rank_two_factor() {
        // (m⊕m, m): generic candidate has jrn 0 and passes both criteria.
        let mm = m_ideal().direct_sum(&m_ideal());
        let ms = [mm, m_ideal()];
        let jr = JointReduction::random_candidate(&ms, 5);
        assert_eq!(jr.columns(0).len(), 2);
        let eq = verify_equational(&ms, &jr, 0, b()).unwrap();
        assert!(eq.holds, "{eq:?}");
        let det = verify_determinantal(&ms, &jr, b()).unwrap();
        assert!(det.holds);
        assert_eq!(det.witness_n, Some(0));
        let free = freeness_and_minimality_check(&ms, &jr, b()).unwrap();
        assert_eq!(free.det_nonzero, vec![true, true]);
        assert_eq!(free.extends_mingen, vec![true, true]);
    }

    #[test]
    fn determinantal_matches_equational_on_samples() {
        let square = Submodule::from_ideal(&MIdeal::new(2, k(), vec![p("x^2"), p("y^2")]));
        let pairs = [
            [m_ideal(), m_ideal()],
            [square.clone(), m_ideal()],
            [square.clone(), square.clone()],
        ];
        for (i, ms) in pairs.iter().enumerate() {
            let jr = JointReduction::random_candidate(ms, 100 + i as u64);
            let eq = joint_reduction_number(ms, &jr, b()).unwrap();
            let det = verify_determinantal(ms, &jr, b()).unwrap();
            assert_eq!(
                matches!(eq, Jrn::Found { .. }),
                det.holds,
                "criteria disagree on pair {i}: {eq:?} vs {det:?}"
            );
        }
    }

    #[test]
    fn minimality_fails_for_columns_inside_m_times_module() {
        let ms = [m_ideal(), m_ideal()];
        // First column x² ∈ m·m, so it cannot extend a minimal generating set.
        let jr = JointReduction::from_columns(
            2,
            k(),
            vec![vec![vec![p("x^2")]], vec![vec![p("y")]]],
        );
        let free = freeness_and_minimality_check(&ms, &jr, b()).unwrap();
        assert_eq!(free.extends_mingen, vec![false, true]);
        assert_eq!(free.det_nonzero, vec![true, true]);
    }

    #[test]
    fn zero_column_is_flagged_by_freeness() {
        let ms = [m_ideal(), m_ideal()];
        let jr = JointReduction::from_columns(
            2,
            k(),
            vec![vec![vec![p("0")]], vec![vec![p("y")]]],
        );
        let free = freeness_and_minimality_check(&ms, &jr, b()).unwrap();
        assert_eq!(free.det_nonzero, vec![false, true]);
        assert_eq!(free.extends_mingen, vec![false, true]);
    }
}
