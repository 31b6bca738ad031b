//! Finite-colength submodules M ⊆ F = R^r, presented by generator columns.
//!
//! Two certificates coexist.  The internal one is the minimal s with
//! m^s F ⊆ M, found directly by the module-level truncated-span search; it
//! powers membership, colength and μ.  The classical route goes through the
//! Fitting ideal I(M) of maximal minors: the adjugate identity gives
//! I(M)·F ⊆ M, so any s with m^s ⊆ I(M) also certifies — that exponent is
//! exposed as [`Submodule::cramer_exponent`].  Both certify the same module;
//! the minimal one is cheaper when generator matrices are wide (minors grow
//! combinatorially, truncated spans don't).

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use itertools::Itertools;

use crate::cert::{self, ModuleCert};
use crate::localring::{MIdeal, Poly};
use crate::scalar::FieldSpec;
use crate::{Error, Result};

/// Determinant of a square matrix of polynomials (rows of entries), by
/// cofactor expansion along the first row; exact, no truncation.
pub fn poly_det(d: usize, field: FieldSpec, rows: &[Vec<Poly>]) -> Poly {
    let n = rows.len();
    for row in rows {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
    }
    match n {
        0 => Poly::one(d, field),
        1 => rows[0][0].clone(),
        _ => {
            let mut det = Poly::zero(d, field);
            for j in 0..n {
                if rows[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = rows[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let cof = rows[0][j].mul(&poly_det(d, field, &minor));
                det = if j % 2 == 0 { det.add(&cof) } else { det.sub(&cof) };
            }
            det
        }
    }
}

/// A submodule of R^r by generator columns; immutable, with lazily filled
/// certificate caches.
#[derive(Clone, Debug)]
pub struct Submodule {
    d: usize,
    field: FieldSpec,
    r: usize,
    gens: Vec<Vec<Poly>>,
    cert: OnceLock<(usize, Result<Arc<ModuleCert>>)>,
    fitting: OnceLock<MIdeal>,
    cramer: OnceLock<(usize, Result<usize>)>,
}

impl Submodule {
    /// Build from generator columns (each of length r); zero and duplicate
    /// columns are dropped.
    pub fn new(d: usize, field: FieldSpec, r: usize, columns: Vec<Vec<Poly>>) -> Self {
        assert!(r >= 1, "ambient rank must be positive");
        let mut seen = HashSet::new();
        let mut gens = Vec::new();
        for col in columns {
            assert_eq!(col.len(), r, "generator column length must equal ambient rank");
            for p in &col {
                assert_eq!(p.d(), d, "variable-count mismatch");
            }
            if col.iter().all(Poly::is_zero) {
                continue;
            }
            if seen.insert(col.clone()) {
                gens.push(col);
            }
        }
        Submodule {
            d,
            field,
            r,
            gens,
            cert: OnceLock::new(),
            fitting: OnceLock::new(),
            cramer: OnceLock::new(),
        }
    }

    /// The full module F = R^r (identity columns).
    pub fn free(d: usize, field: FieldSpec, r: usize) -> Self {
        let columns = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { Poly::one(d, field) } else { Poly::zero(d, field) })
                    .collect()
            })
            .collect();
        Submodule::new(d, field, r, columns)
    }

    /// An ideal as a rank-1 submodule.
    pub fn from_ideal(i: &MIdeal) -> Self {
        Submodule::new(i.d(), i.field(), 1, i.gens().iter().map(|g| vec![g.clone()]).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_rank(&self) -> usize {
        self.r
    }

    pub fn gens(&self) -> &[Vec<Poly>] {
        &self.gens
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    /// The internal certificate (minimal s with m^s F ⊆ M), cached.
    pub(crate) fn cert(&self, s_max: usize) -> Result<Arc<ModuleCert>> {
        let (cached_bound, outcome) = self.cert.get_or_init(|| {
            (s_max, cert::certify(self.d, self.field, self.r, &self.gens, s_max).map(Arc::new))
        });
        match outcome {
            Ok(c) if c.exponent() <= s_max => Ok(c.clone()),
            Ok(_) => Err(Error::NotFiniteColength { s_max }),
            Err(_) if *cached_bound >= s_max => Err(Error::NotFiniteColength { s_max }),
            Err(_) => {
                // A larger bound than the cached failure: recompute (uncached).
                cert::certify(self.d, self.field, self.r, &self.gens, s_max).map(Arc::new)
            }
        }
    }

    /// The smallest s with m^s F ⊆ M.
    pub fn cert_exponent(&self, s_max: usize) -> Result<usize> {
        self.cert(s_max).map(|c| c.exponent())
    }

    /// The Fitting ideal I(M): all r×r minors of the generator matrix;
    /// the zero ideal when there are fewer than r generators.
    pub fn fitting_ideal(&self) -> MIdeal {
        self.fitting
            .get_or_init(|| {
                if self.gens.len() < self.r {
                    return MIdeal::zero(self.d, self.field);
                }
                let minors = (0..self.gens.len())
                    .combinations(self.r)
                    .map(|cols| {
                        let rows: Vec<Vec<Poly>> = (0..self.r)
                            .map(|i| cols.iter().map(|&c| self.gens[c][i].clone()).collect())
                            .collect();
                        poly_det(self.d, self.field, &rows)
                    })
                    .collect();
                MIdeal::new(self.d, self.field, minors)
            })
            .clone()
    }

    /// The Fitting-ideal certificate exponent: the smallest s with
    /// m^s ⊆ I(M), which certifies m^s F ⊆ M via I(M)·F ⊆ M (Cramer).
    pub fn cramer_exponent(&self, s_max: usize) -> Result<usize> {
        let (cached_bound, outcome) = self
            .cramer
            .get_or_init(|| (s_max, self.fitting_ideal().mprimary_exponent(s_max)));
        match outcome {
            Ok(s) if *s <= s_max => Ok(*s),
            Ok(_) => Err(Error::NotFiniteColength { s_max }),
            Err(_) if *cached_bound >= s_max => Err(Error::NotFiniteColength { s_max }),
            Err(_) => self.fitting_ideal().mprimary_exponent(s_max),
        }
    }

    /// ord(M) = ord(I(M)); None when the Fitting ideal is zero.
    pub fn ord(&self) -> Option<usize> {
        self.fitting_ideal().ord()
    }

    /// λ(F/M).
    pub fn colength(&self, s_max: usize) -> Result<usize> {
        self.cert(s_max).map(|c| c.colength())
    }

    /// Exact membership v ∈ M.
    pub fn contains(&self, v: &[Poly], s_max: usize) -> Result<bool> {
        if v.len() != self.r {
            return Err(Error::Mismatch(format!(
                "vector of rank {} probed against a submodule of ambient rank {}",
                v.len(),
                self.r
            )));
        }
        Ok(self.cert(s_max)?.contains(v))
    }

    /// Certified containment self ⊆ other (every generator of self in other).
    pub fn leq(&self, other: &Submodule, s_max: usize) -> Result<bool> {
        if self.r != other.r {
            return Err(Error::Mismatch(format!(
                "ambient ranks differ: {} vs {}",
                self.r, other.r
            )));
        }
        let c = other.cert(s_max)?;
        Ok(self.gens.iter().all(|g| c.contains(g)))
    }

    /// Certified submodule equality, by mutual containment.
    pub fn eq_submodule(&self, other: &Submodule, s_max: usize) -> Result<bool> {
        Ok(self.leq(other, s_max)? && other.leq(self, s_max)?)
    }

    /// μ(M), the minimal number of generators: the rank of the generator
    /// residues modulo mM (Nakayama).
    pub fn min_generators(&self, s_max: usize) -> Result<usize> {
        let mm = self.scalar_extend(&MIdeal::maximal(self.d, self.field));
        mm.residue_rank(&self.gens, s_max)
    }

    /// Rank of the images of `vectors` in F/M — the number of them that
    /// survive in a basis modulo this submodule.
    pub fn residue_rank(&self, vectors: &[Vec<Poly>], s_max: usize) -> Result<usize> {
        Ok(self.cert(s_max)?.residue_rank(vectors))
    }

    /// The product I·M (generators: ideal generator × module generator).
    pub fn scalar_extend(&self, ideal: &MIdeal) -> Submodule {
        assert_eq!(ideal.d(), self.d, "variable-count mismatch");
        let columns = ideal
            .gens()
            .iter()
            .cartesian_product(&self.gens)
            .map(|(f, col)| col.iter().map(|e| e.mul(f)).collect())
            .collect();
        Submodule::new(self.d, self.field, self.r, columns)
    }

    /// M₁ ⊕ M₂ ⊆ R^{r₁+r₂} with the block generator matrix.
    pub fn direct_sum(&self, other: &Submodule) -> Submodule {
        assert_eq!(self.d, other.d, "variable-count mismatch");
        assert_eq!(self.field, other.field, "field mismatch");
        let r = self.r + other.r;
        let zero = Poly::zero(self.d, self.field);
        let mut columns = Vec::with_capacity(self.gens.len() + other.gens.len());
        for g in &self.gens {
            let mut col = g.clone();
            col.extend(std::iter::repeat(zero.clone()).take(other.r));
            columns.push(col);
        }
        for g in &other.gens {
            let mut col: Vec<Poly> = std::iter::repeat(zero.clone()).take(self.r).collect();
            col.extend(g.iter().cloned());
            columns.push(col);
        }
        Submodule::new(self.d, self.field, r, columns)
    }

    /// Sum of submodules of the same ambient module.
    pub fn plus(&self, other: &Submodule) -> Submodule {
        assert_eq!(self.r, other.r, "ambient rank mismatch");
        assert_eq!(self.d, other.d, "variable-count mismatch");
        let mut columns = self.gens.clone();
        columns.extend(other.gens.iter().cloned());
        Submodule::new(self.d, self.field, self.r, columns)
    }

    /// Is this all of F?  (Certified: colength 0.)
    pub fn is_full(&self, s_max: usize) -> Result<bool> {
        Ok(self.colength(s_max)? == 0)
    }

    /// A proper submodule: M ⊆ mF, detected by a nonunit Fitting ideal.
    pub fn is_proper(&self) -> bool {
        self.ord().map_or(true, |o| o > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::{default_var_names, parse_poly};
    use crate::DEFAULT_S_MAX;

    fn k() -> FieldSpec {
        FieldSpec::default()
    }

    fn p(src: &str) -> Poly {
        parse_poly(src, &default_var_names(2), k()).unwrap()
    }

    fn col(entries: &[&str]) -> Vec<Poly> {
        entries.iter().map(|s| p(s)).collect()
    }

    /// m ⊕ m ⊆ R².
    fn mm() -> Submodule {
        Submodule::new(
            2,
            k(),
            2,
            vec![col(&["x", "0"]), col(&["y", "0"]), col(&["0", "x"]), col(&["0", "y"])],
        )
    }

    #[test]
    fn determinants() {
        let a = vec![col(&["y", "x"]), col(&["x", "y"])];
        assert_eq!(poly_det(2, k(), &a), p("y^2 - x^2"));
        let id = vec![col(&["1", "0"]), col(&["0", "1"])];
        assert_eq!(poly_det(2, k(), &id), p("1"));
        assert_eq!(poly_det(2, k(), &[]), p("1"));
        let m3 = vec![col(&["x", "0", "0"]), col(&["0", "y", "0"]), col(&["1", "0", "x*y"])];
        assert_eq!(poly_det(2, k(), &m3), p("x^2*y^2"));
    }

    #[test]
    fn fitting_ideals() {
        let i = mm().fitting_ideal();
        assert!(i.equals(&MIdeal::maximal_power(2, k(), 2), DEFAULT_S_MAX).unwrap());

        let f = Submodule::free(2, k(), 2);
        assert_eq!(f.fitting_ideal().colength(DEFAULT_S_MAX).unwrap(), 0);

        let xr = Submodule::new(2, k(), 1, vec![col(&["x"])]);
        assert_eq!(xr.fitting_ideal().gens(), &[p("x")]);

        // Fewer generators than the rank: zero Fitting ideal.
        let thin = Submodule::new(2, k(), 2, vec![col(&["x", "y"])]);
        assert!(thin.fitting_ideal().gens().is_empty());
    }

    #[test]
    fn cramer_exponents() {
        assert_eq!(mm().cramer_exponent(DEFAULT_S_MAX).unwrap(), 2);
        assert_eq!(Submodule::free(2, k(), 2).cramer_exponent(DEFAULT_S_MAX).unwrap(), 0);
        let m2r = Submodule::new(2, k(), 1, vec![col(&["x^2"]), col(&["x*y"]), col(&["y^2"])]);
        assert_eq!(m2r.cramer_exponent(DEFAULT_S_MAX).unwrap(), 2);
        // The internal exponent can be strictly smaller: m F ⊆ m ⊕ m.
        assert_eq!(mm().cert_exponent(DEFAULT_S_MAX).unwrap(), 1);
    }

    #[test]
    fn membership_and_equality() {
        let m = mm();
        assert!(m.contains(&col(&["x*y", "y^2"]), DEFAULT_S_MAX).unwrap());
        assert!(!m.contains(&col(&["1", "0"]), DEFAULT_S_MAX).unwrap());
        assert!(m.contains(&col(&["0", "0"]), DEFAULT_S_MAX).unwrap());
        assert!(m.contains(&col(&["x", "1"]), DEFAULT_S_MAX).is_ok());
        assert!(m.contains(&col(&["x"]), DEFAULT_S_MAX).is_err());

        let a = Submodule::new(2, k(), 1, vec![col(&["x"]), col(&["y"]), col(&["x + y"])]);
        let b = Submodule::new(2, k(), 1, vec![col(&["x"]), col(&["y"])]);
        assert!(a.eq_submodule(&b, DEFAULT_S_MAX).unwrap());
        let c = Submodule::new(2, k(), 1, vec![col(&["x"])]);
        assert!(c.leq(&b, DEFAULT_S_MAX).unwrap());
        // The superset side carries the certificate; (x) alone cannot certify.
        assert!(b.leq(&c, 6).is_err());
    }

    #[test]
    fn colengths() {
        assert_eq!(mm().colength(DEFAULT_S_MAX).unwrap(), 2);
        assert_eq!(Submodule::free(2, k(), 2).colength(DEFAULT_S_MAX).unwrap(), 0);
        // Hand-reduced: F/(x,0),(0,y),(y,x) has basis e₁, e₂, y·e₁.
        let m = Submodule::new(2, k(), 2, vec![col(&["x", "0"]), col(&["0", "y"]), col(&["y", "x"])]);
        assert_eq!(m.colength(DEFAULT_S_MAX).unwrap(), 3);
    }

    #[test]
    fn minimal_generator_counts() {
        assert_eq!(mm().min_generators(DEFAULT_S_MAX).unwrap(), 4);
        assert_eq!(Submodule::free(2, k(), 2).min_generators(DEFAULT_S_MAX).unwrap(), 2);
        let a = Submodule::new(2, k(), 1, vec![col(&["x"]), col(&["y"]), col(&["x + y"])]);
        assert_eq!(a.min_generators(DEFAULT_S_MAX).unwrap(), 2);
    }

    #[test]
    fn ord_and_sums() {
        assert_eq!(mm().ord(), Some(2));
        assert_eq!(Submodule::free(2, k(), 2).ord(), Some(0));
        let m1 = Submodule::from_ideal(&MIdeal::maximal(2, k()));
        let ds = m1.direct_sum(&m1);
        assert_eq!(ds.colength(DEFAULT_S_MAX).unwrap(), 2);
        assert!(ds.eq_submodule(&mm(), DEFAULT_S_MAX).unwrap());
    }

    #[test]
    fn scalar_extension() {
        let f = Submodule::free(2, k(), 2);
        let mf = f.scalar_extend(&MIdeal::maximal(2, k()));
        assert!(mf.eq_submodule(&mm(), DEFAULT_S_MAX).unwrap());
        assert_eq!(mf.colength(DEFAULT_S_MAX).unwrap(), 2);
    }

    #[test]
    fn colength_is_presentation_invariant() {
        let m = mm();
        let mut columns = m.gens().to_vec();
        // Append R-combinations of existing generators.
        columns.push(vec![p("x + y"), p("0")]);
        columns.push(vec![p("x*y"), p("x^2 + y^2")]);
        let enlarged = Submodule::new(2, k(), 2, columns);
        assert_eq!(
            enlarged.colength(DEFAULT_S_MAX).unwrap(),
            m.colength(DEFAULT_S_MAX).unwrap()
        );
    }

    #[test]
    fn cramer_soundness_on_random_combinations() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let m = mm();
        for _ in 0..10 {
            // Random R-combination of generators stays inside.
            let mut v = vec![Poly::zero(2, k()); 2];
            for g in m.gens() {
                let c = k().random(&mut rng);
                let f = Poly::term(
                    2,
                    k(),
                    crate::localring::Monomial::new(vec![rng.gen_range(0..3), rng.gen_range(0..3)]),
                    c,
                );
                for i in 0..2 {
                    v[i] = v[i].add(&g[i].mul(&f));
                }
            }
            assert!(m.contains(&v, DEFAULT_S_MAX).unwrap());
        }
        // Unit vectors lie outside a proper submodule.
        assert!(!m.contains(&col(&["1", "0"]), DEFAULT_S_MAX).unwrap());
        assert!(!m.contains(&col(&["0", "1"]), DEFAULT_S_MAX).unwrap());
    }

    #[test]
    fn mu_bounded_by_ord_plus_rank() {
        // Integrally closed instances meet the bound with equality; others stay below.
        for (m, expect_contracted) in [
            (mm(), true),
            (Submodule::new(2, k(), 1, vec![col(&["x^2"]), col(&["y^2"])]), false),
        ] {
            let mu = m.min_generators(DEFAULT_S_MAX).unwrap();
            let bound = m.ord().unwrap() + m.ambient_rank();
            assert!(mu <= bound);
            assert_eq!(mu == bound, expect_contracted);
        }
    }

    #[test]
    fn fitting_of_direct_sum_is_product() {
        let a = Submodule::new(2, k(), 1, vec![col(&["x"]), col(&["y^2"])]);
        let b = Submodule::new(2, k(), 2, vec![col(&["x", "0"]), col(&["0", "y"]), col(&["y", "x"])]);
        let ds = a.direct_sum(&b);
        let prod = a.fitting_ideal().product(&b.fitting_ideal());
        assert!(ds.fitting_ideal().equals(&prod, DEFAULT_S_MAX).unwrap());
    }

    #[test]
    fn direct_sum_colength_is_additive() {
        let a = Submodule::new(2, k(), 1, vec![col(&["x"]), col(&["y^3"])]);
        let b = Submodule::new(2, k(), 2, vec![col(&["x", "0"]), col(&["0", "y"]), col(&["y", "x"])]);
        let (la, lb) = (a.colength(DEFAULT_S_MAX).unwrap(), b.colength(DEFAULT_S_MAX).unwrap());
        assert_eq!(a.direct_sum(&b).colength(DEFAULT_S_MAX).unwrap(), la + lb);
    }
}
