//! Symmetric powers S_n(M) ⊆ S_n(F), multigraded products
//! S_{n₁}(M₁)⋯S_{n_q}(M_q), the joint Buchsbaum–Rim length function
//! f(n₁,…,n_q) = λ(S_{n₁}(F₁)⋯S_{n_q}(F_q) / S_{n₁}(M₁)⋯S_{n_q}(M_q)),
//! its finite differences, and the mixed Buchsbaum–Rim multiplicity.
//!
//! S_n(R^r) is free on the degree-n monomials in r symbols T₁,…,T_r; an
//! element is a coefficient vector indexed by exponent multisets.  A product
//! g·w with g ∈ F lands in the next degree by the convolution
//! (g·w)_γ = Σ_{i: γ_i ≥ 1} g_i · w_{γ−e_i}, so generators of S_n(M) — the
//! n-fold multiset products of M's generator columns — are built without ever
//! materializing the symmetric algebra.  Bases are ordered deterministically
//! (per factor: degree-n exponent vectors in descending lex; across factors:
//! first factor slowest), making every generator matrix reproducible.

use itertools::Itertools;
use serde::Serialize;

use crate::localring::{monomials_of_degree, Monomial, Poly};
use crate::submod::Submodule;
use crate::{binom, Bounds, Error, Result};

/// The ordered monomial basis of S_{n₁}(F₁)⊗⋯⊗S_{n_q}(F_q).
#[derive(Clone, Debug)]
pub struct SymBasis {
    ranks: Vec<usize>,
    degrees: Vec<usize>,
    /// Per-factor list of exponent multisets (degree-n_k monomials in r_k
    /// symbols), descending lex.
    factors: Vec<Vec<Monomial>>,
}

impl SymBasis {
    pub fn new(ranks: &[usize], degrees: &[usize]) -> Self {
        assert_eq!(ranks.len(), degrees.len());
        let factors = ranks
            .iter()
            .zip(degrees)
            .map(|(&r, &n)| monomials_of_degree(r, n))
            .collect();
        SymBasis { ranks: ranks.to_vec(), degrees: degrees.to_vec(), factors }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn factor(&self, k: usize) -> &[Monomial] {
        &self.factors[k]
    }

    /// Total rank: ∏ binom(n_k + r_k − 1, r_k − 1).
    pub fn ambient_rank(&self) -> usize {
        self.factors.iter().map(Vec::len).product()
    }

    /// Flat index of a tuple of per-factor basis positions (factor-major:
    /// the first factor varies slowest).
    pub fn flat_index(&self, positions: &[usize]) -> usize {
        assert_eq!(positions.len(), self.factors.len());
        positions
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&p, basis)| acc * basis.len() + p)
    }
}

/// Multiply w ∈ S_t(F) (coefficients on `from` = degree-t basis) by a column
/// g ∈ F, landing in S_{t+1}(F) (coefficients on `to`).
fn sym_multiply(g: &[Poly], w: &[Poly], from: &[Monomial], to: &[Monomial]) -> Vec<Poly> {
    let r = g.len();
    let (d, field) = (g[0].d(), g[0].field());
    let index: std::collections::HashMap<&Monomial, usize> =
        from.iter().enumerate().map(|(i, m)| (m, i)).collect();
    to.iter()
        .map(|gamma| {
            let mut acc = Poly::zero(d, field);
            for i in 0..r {
                if gamma.exponents[i] == 0 || g[i].is_zero() {
                    continue;
                }
                let mut beta = gamma.clone();
                beta.exponents[i] -= 1;
                let w_beta = &w[index[&beta]];
                if !w_beta.is_zero() {
                    acc = acc.add(&g[i].mul(w_beta));
                }
            }
            acc
        })
        .collect()
}

/// Generators of S_n(M) as coefficient vectors on the degree-n basis:
/// all n-fold multiset products of M's generator columns.
/// Number of n-element multisets from m generators.
fn multiset_count(m: usize, n: usize) -> usize {
    if n == 0 {
        1
    } else {
        binom(m + n - 1, n).max(0) as usize
    }
}

/// All products of one column from `cols` (⊆ F = R^r) with one vector from
/// `ws` (⊆ S_n(F)), as coefficient vectors on the degree-(n+1) basis.
pub fn sym_mult_vectors(cols: &[Vec<Poly>], ws: &[Vec<Poly>], r: usize, n: usize) -> Vec<Vec<Poly>> {
    let from = monomials_of_degree(r, n);
    let to = monomials_of_degree(r, n + 1);
    let mut out = Vec::with_capacity(cols.len() * ws.len());
    for g in cols {
        assert_eq!(g.len(), r);
        for w in ws {
            assert_eq!(w.len(), from.len());
            out.push(sym_multiply(g, w, &from, &to));
        }
    }
    out
}

/// Generator-list pruning that preserves the span.  Zero columns are
/// dropped, and a column supported on a single coordinate by a single term
/// is dropped when a kept such column on the same coordinate divides it
/// (the quotient is then a scalar times a monomial).  Symmetric powers and
/// tensor products of monomial modules collapse from multiset-many columns
/// to the divisibility-minimal ones; columns with several terms or several
/// nonzero coordinates always survive.
fn prune_columns(columns: Vec<Vec<Poly>>) -> Vec<Vec<Poly>> {
    enum Shape {
        Zero,
        Monomial { slot: usize, exponents: Vec<u32> },
        General,
    }
    let shape = |col: &[Poly]| {
        let mut found: Option<(usize, Vec<u32>)> = None;
        for (slot, entry) in col.iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            let mut terms = entry.terms();
            let mono = terms.next().expect("nonzero polynomial has a term").0;
            if terms.next().is_some() || found.is_some() {
                return Shape::General;
            }
            found = Some((slot, mono.exponents.clone()));
        }
        match found {
            None => Shape::Zero,
            Some((slot, exponents)) => Shape::Monomial { slot, exponents },
        }
    };
    let shapes: Vec<Shape> = columns.iter().map(|c| shape(c)).collect();

    // Divisibility-minimal monomial columns, scanned by ascending total
    // degree (stable, so ties keep the earliest column).
    let mut order: Vec<usize> = (0..columns.len())
        .filter(|&i| matches!(shapes[i], Shape::Monomial { .. }))
        .collect();
    order.sort_by_key(|&i| match &shapes[i] {
        Shape::Monomial { exponents, .. } => exponents.iter().map(|&e| u64::from(e)).sum::<u64>(),
        _ => unreachable!(),
    });
    let mut keep = vec![false; columns.len()];
    let mut minimal: Vec<(usize, &Vec<u32>)> = Vec::new();
    for i in order {
        let Shape::Monomial { slot, exponents } = &shapes[i] else { unreachable!() };
        let divisible = minimal
            .iter()
            .any(|(s, e)| s == slot && e.iter().zip(exponents.iter()).all(|(a, b)| a <= b));
        if !divisible {
            minimal.push((*slot, exponents));
            keep[i] = true;
        }
    }
    columns
        .into_iter()
        .enumerate()
        .filter(|(i, _)| match &shapes[*i] {
            Shape::General => true,
            Shape::Zero => false,
            Shape::Monomial { .. } => keep[*i],
        })
        .map(|(_, col)| col)
        .collect()
}

/// Generators of S_n(M) as coefficient vectors on the degree-n basis of
/// S_n(F): the n-fold multiset products of M's generator columns, with
/// span-redundant columns pruned.
pub fn sym_generators(m: &Submodule, n: usize, gen_cap: usize) -> Result<Vec<Vec<Poly>>> {
    let (d, field, r) = (m.d(), m.field(), m.ambient_rank());
    let count = multiset_count(m.num_gens(), n);
    if count > gen_cap {
        return Err(Error::GeneratorCapExceeded { cols: count, cap: gen_cap });
    }
    let bases: Vec<Vec<Monomial>> = (0..=n).map(|t| monomials_of_degree(r, t)).collect();
    let mut out = Vec::with_capacity(count);
    for multiset in (0..m.num_gens()).combinations_with_replacement(n) {
        let mut w = vec![Poly::one(d, field)];
        for (t, &j) in multiset.iter().enumerate() {
            w = sym_multiply(&m.gens()[j], &w, &bases[t], &bases[t + 1]);
        }
        out.push(w);
    }
    if n == 0 {
        // The empty product: S_0(M) = R, generated by 1.
        assert_eq!(out.len(), 1);
    }
    Ok(prune_columns(out))
}

/// S_n(M) as a submodule of S_n(F) ≅ R^{binom(n+r−1, r−1)}.
pub fn sym_power(m: &Submodule, n: usize, gen_cap: usize) -> Result<Submodule> {
    let vectors = sym_generators(m, n, gen_cap)?;
    let ambient = monomials_of_degree(m.ambient_rank(), n).len();
    Ok(Submodule::new(m.d(), m.field(), ambient, vectors))
}

/// The span of all tensors v₁⊗⋯⊗v_q of one vector per factor, inside the
/// tensor product of the factor coordinate spaces (first factor slowest).
/// `factor_dims` gives each factor's coordinate length, needed when a factor
/// has no generators.
pub fn tensor_combine(
    d: usize,
    field: crate::scalar::FieldSpec,
    factor_gens: &[Vec<Vec<Poly>>],
    factor_dims: &[usize],
    gen_cap: usize,
) -> Result<Submodule> {
    assert!(!factor_gens.is_empty());
    assert_eq!(factor_gens.len(), factor_dims.len());
    let ambient: usize = factor_dims.iter().product();
    let mut total_cols: usize = 1;
    for (gens, &dim) in factor_gens.iter().zip(factor_dims) {
        for g in gens {
            assert_eq!(g.len(), dim);
        }
        total_cols = total_cols
            .checked_mul(gens.len())
            .ok_or(Error::GeneratorCapExceeded { cols: usize::MAX, cap: gen_cap })?;
    }
    if total_cols > gen_cap {
        return Err(Error::GeneratorCapExceeded { cols: total_cols, cap: gen_cap });
    }
    let mut columns = Vec::with_capacity(total_cols);
    if factor_gens.iter().all(|g| !g.is_empty()) {
        for choice in factor_gens.iter().map(|g| g.iter()).multi_cartesian_product() {
            let mut col = vec![Poly::one(d, field)];
            for w in choice {
                let mut next = Vec::with_capacity(col.len() * w.len());
                for a in &col {
                    for b in w {
                        next.push(if a.is_zero() || b.is_zero() {
                            Poly::zero(d, field)
                        } else {
                            a.mul(b)
                        });
                    }
                }
                col = next;
            }
            assert_eq!(col.len(), ambient);
            columns.push(col);
        }
    }
    Ok(Submodule::new(d, field, ambient, prune_columns(columns)))
}

/// S_{n₁}(M₁)⋯S_{n_q}(M_q) inside the tensor product of the S_{n_k}(F_k):
/// generators are all products of one sym-power generator per factor, the
/// coefficient at a basis tuple being the product of factor coefficients.
pub fn graded_product(ms: &[Submodule], degrees: &[usize], gen_cap: usize) -> Result<Submodule> {
    assert!(!ms.is_empty(), "at least one factor");
    assert_eq!(ms.len(), degrees.len());
    let (d, field) = (ms[0].d(), ms[0].field());
    for m in ms {
        assert_eq!(m.d(), d, "variable-count mismatch");
        assert_eq!(m.field(), field, "field mismatch");
    }
    let factor_gens: Vec<Vec<Vec<Poly>>> = ms
        .iter()
        .zip(degrees)
        .map(|(m, &n)| sym_generators(m, n, gen_cap))
        .collect::<Result<_>>()?;
    let factor_dims: Vec<usize> = ms
        .iter()
        .zip(degrees)
        .map(|(m, &n)| monomials_of_degree(m.ambient_rank(), n).len())
        .collect();
    tensor_combine(d, field, &factor_gens, &factor_dims, gen_cap)
}

/// The joint Buchsbaum–Rim length f(n₁,…,n_q).
pub fn br_function(ms: &[Submodule], degrees: &[usize], bounds: Bounds) -> Result<usize> {
    graded_product(ms, degrees, bounds.gen_cap)?.colength(bounds.s_max)
}

/// Values of f on a rectangular window of N^q, with finite-difference views.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BRTable {
    /// Lowest corner (inclusive), one entry per factor.
    pub origin: Vec<usize>,
    /// Points per axis.
    pub extents: Vec<usize>,
    /// Row-major values (last axis fastest).
    pub values: Vec<i64>,
    /// Variable count of the base ring.
    pub d: usize,
    /// Ambient ranks (r₁,…,r_q).
    pub ranks: Vec<usize>,
}

/// All offset tuples of a box, row-major (last axis fastest).
fn box_offsets(extents: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &e in extents {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..e).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

impl BRTable {
    pub fn q(&self) -> usize {
        self.extents.len()
    }

    fn flat(&self, offset: &[usize]) -> usize {
        offset
            .iter()
            .zip(&self.extents)
            .fold(0, |acc, (&o, &e)| {
                debug_assert!(o < e);
                acc * e + o
            })
    }

    /// Value at an offset from the origin.
    pub fn at_offset(&self, offset: &[usize]) -> i64 {
        self.values[self.flat(offset)]
    }

    /// Value at absolute coordinates.
    pub fn at(&self, point: &[usize]) -> i64 {
        let off: Vec<usize> = point.iter().zip(&self.origin).map(|(&p, &o)| p - o).collect();
        self.at_offset(&off)
    }

    /// Top corner, absolute coordinates.
    pub fn top_corner(&self) -> Vec<usize> {
        self.origin
            .iter()
            .zip(&self.extents)
            .map(|(&o, &e)| o + e - 1)
            .collect()
    }

    pub fn top_value(&self) -> i64 {
        self.at_offset(&self.extents.iter().map(|&e| e - 1).collect::<Vec<_>>())
    }

    fn diff_axis(&self, axis: usize) -> BRTable {
        assert!(self.extents[axis] >= 2);
        let mut extents = self.extents.clone();
        extents[axis] -= 1;
        let mut origin = self.origin.clone();
        origin[axis] += 1;
        let values = box_offsets(&extents)
            .into_iter()
            .map(|off| {
                let mut hi = off.clone();
                hi[axis] += 1;
                self.at_offset(&hi) - self.at_offset(&off)
            })
            .collect();
        BRTable { origin, extents, values, d: self.d, ranks: self.ranks.clone() }
    }

    /// The box of the last (up to) 2 points per axis.
    fn last_block(&self) -> Vec<i64> {
        let lows: Vec<usize> = self.extents.iter().map(|&e| e.saturating_sub(2)).collect();
        let block: Vec<usize> = self.extents.iter().zip(&lows).map(|(&e, &l)| e - l).collect();
        box_offsets(&block)
            .into_iter()
            .map(|off| {
                let abs: Vec<usize> = off.iter().zip(&lows).map(|(&o, &l)| o + l).collect();
                self.at_offset(&abs)
            })
            .collect()
    }

    /// Constant on the last-2-per-axis block (the stabilization criterion).
    pub fn stabilized(&self) -> bool {
        let block = self.last_block();
        block.iter().all(|&v| v == block[0])
    }

    /// Zero on the last-2-per-axis block.
    pub fn vanishes_when_stable(&self) -> bool {
        self.last_block().iter().all(|&v| v == 0)
    }

    /// CSV: header `n1,…,nq,length`, one row per point, RFC-4180 (all fields
    /// numeric, so no quoting is ever needed).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for k in 0..self.q() {
            out.push_str(&format!("n{},", k + 1));
        }
        out.push_str("length\r\n");
        for off in box_offsets(&self.extents) {
            for (o, b) in off.iter().zip(&self.origin) {
                out.push_str(&format!("{},", o + b));
            }
            out.push_str(&format!("{}\r\n", self.at_offset(&off)));
        }
        out
    }
}

/// Fill f over the box [0, window_k] per axis (inclusive upper corners).
pub fn br_table(ms: &[Submodule], window: &[usize], bounds: Bounds) -> Result<BRTable> {
    assert_eq!(ms.len(), window.len());
    let extents: Vec<usize> = window.iter().map(|&w| w + 1).collect();
    let values = box_offsets(&extents)
        .into_iter()
        .map(|point| br_function(ms, &point, bounds).map(|v| v as i64))
        .collect::<Result<Vec<i64>>>()?;
    Ok(BRTable {
        origin: vec![0; ms.len()],
        extents,
        values,
        d: ms[0].d(),
        ranks: ms.iter().map(Submodule::ambient_rank).collect(),
    })
}

/// Iterated backward differences Δ₁^{a₁}⋯Δ_q^{a_q}; the window shrinks by
/// a_k at the low end of axis k.
pub fn finite_difference(table: &BRTable, orders: &[usize]) -> Result<BRTable> {
    assert_eq!(orders.len(), table.q());
    if table
        .extents
        .iter()
        .zip(orders)
        .any(|(&e, &a)| e <= a)
    {
        return Err(Error::WindowTooSmall {
            needed: orders.iter().map(|&a| a + 1).collect(),
            got: table.extents.clone(),
        });
    }
    let mut cur = table.clone();
    for (axis, &a) in orders.iter().enumerate() {
        for _ in 0..a {
            cur = cur.diff_axis(axis);
        }
    }
    Ok(cur)
}

/// A mixed Buchsbaum–Rim multiplicity with its stabilization report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MixedBr {
    /// Δ₁^{r₁}⋯Δ_d^{r_d} f at the window's top corner.
    pub value: i64,
    /// Whether the fully differenced table was constant on its last-2 block;
    /// an unstabilized value should be recomputed on a larger window.
    pub stabilized: bool,
}

/// br(M₁|…|M_d): the top-corner value of Δ₁^{r₁}⋯Δ_d^{r_d} f, with the
/// stabilization flag.  Requires exactly d modules and window_k ≥ r_k + 2.
pub fn mixed_br(ms: &[Submodule], window: &[usize], bounds: Bounds) -> Result<MixedBr> {
    let d = ms[0].d();
    if ms.len() != d {
        return Err(Error::Mismatch(format!(
            "mixed multiplicity needs exactly d = {} modules, got {}",
            d,
            ms.len()
        )));
    }
    let ranks: Vec<usize> = ms.iter().map(Submodule::ambient_rank).collect();
    if window.iter().zip(&ranks).any(|(&w, &r)| w < r + 2) {
        return Err(Error::WindowTooSmall {
            needed: ranks.iter().map(|&r| r + 2).collect(),
            got: window.to_vec(),
        });
    }
    let table = br_table(ms, window, bounds)?;
    let diffed = finite_difference(&table, &ranks)?;
    Ok(MixedBr { value: diffed.top_value(), stabilized: diffed.stabilized() })
}

/// All q-tuples of non-negative integers summing to t.
fn compositions(q: usize, t: usize) -> Vec<Vec<usize>> {
    if q == 1 {
        return vec![vec![t]];
    }
    let mut out = Vec::new();
    for first in 0..=t {
        for mut rest in compositions(q - 1, t - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Confirm the total degree d + Σr_k − q of the eventual polynomial: every
/// difference of total order deg+1 vanishes on its stabilized block, and
/// some difference of total order deg is nonzero at the top corner.
pub fn degree_check(table: &BRTable) -> Result<bool> {
    let q = table.q();
    let rank_sum: usize = table.ranks.iter().sum();
    let degree = table.d + rank_sum - q;
    let side = degree + 2;
    if table.extents.iter().any(|&e| e < side) {
        return Err(Error::WindowTooSmall {
            needed: vec![side; q],
            got: table.extents.clone(),
        });
    }
    for orders in compositions(q, degree + 1) {
        if !finite_difference(table, &orders)?.vanishes_when_stable() {
            return Ok(false);
        }
    }
    let some_nonzero = compositions(q, degree)
        .into_iter()
        .any(|orders| {
            finite_difference(table, &orders)
                .map(|t| t.top_value() != 0)
                .unwrap_or(false)
        });
    Ok(some_nonzero)
}

/// Raw values μ(S_n(M₁)⋯S_n(M_q)) for n = 0..=n_max, with the largest D
/// whose D-th difference is nonvanishing — an empirical degree estimate, not
/// a certified one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuTable {
    pub values: Vec<usize>,
    pub fitted_degree: Option<usize>,
}

pub fn mu_table(ms: &[Submodule], n_max: usize, bounds: Bounds) -> Result<MuTable> {
    let mut values = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let degrees = vec![n; ms.len()];
        let prod = graded_product(ms, &degrees, bounds.gen_cap)?;
        values.push(prod.min_generators(bounds.s_max)?);
    }
    let seq: Vec<i64> = values.iter().map(|&v| v as i64).collect();
    let mut fitted = None;
    for order in (0..=n_max).rev() {
        let mut cur = seq.clone();
        for _ in 0..order {
            cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
        }
        if cur.iter().any(|&v| v != 0) {
            fitted = Some(order);
            break;
        }
    }
    Ok(MuTable { values, fitted_degree: fitted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::{default_var_names, parse_poly, MIdeal};
    use crate::scalar::FieldSpec;

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

    /// m ⊕ m ⊆ R².
    fn mm() -> Submodule {
        m_ideal().direct_sum(&m_ideal())
    }

    #[test]
    fn bases_are_ordered_and_sized() {
        let basis = SymBasis::new(&[2, 1], &[2, 3]);
        assert_eq!(basis.ambient_rank(), 3);
        let exps: Vec<Vec<u32>> = basis.factor(0).iter().map(|m| m.exponents.clone()).collect();
        // T₁², T₁T₂, T₂² in descending lex.
        assert_eq!(exps, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(basis.flat_index(&[1, 0]), 1);
        assert_eq!(
            basis.ambient_rank() as i64,
            binom(2 + 2 - 1, 1) * binom(3 + 1 - 1, 0)
        );
    }

    #[test]
    fn sym_power_degenerate_cases() {
        let m = mm();
        let s0 = sym_power(&m, 0, 20000).unwrap();
        assert_eq!(s0.ambient_rank(), 1);
        assert_eq!(s0.colength(b().s_max).unwrap(), 0);

        let s1 = sym_power(&m, 1, 20000).unwrap();
        assert!(s1.eq_submodule(&m, b().s_max).unwrap());
    }

    #[test]
    fn sym_square_of_maximal_ideal() {
        // m ⊆ R¹: S_2(m) = m² with colength 3.
        let s2 = sym_power(&m_ideal(), 2, 20000).unwrap();
        assert_eq!(s2.ambient_rank(), 1);
        assert_eq!(s2.colength(b().s_max).unwrap(), 3);
    }

    #[test]
    fn sym_powers_mix_coordinates_correctly() {
        // M ⊆ R² generated by (x,0),(0,y),(y,x); S_2(M) generators include
        // (y,x)·(y,x) = (y², 2xy, x²) on the basis T₁², T₁T₂, T₂².
        let m = Submodule::new(
            2,
            k(),
            2,
            vec![
                vec![p("x"), p("0")],
                vec![p("0"), p("y")],
                vec![p("y"), p("x")],
            ],
        );
        let s2 = sym_power(&m, 2, 20000).unwrap();
        assert_eq!(s2.ambient_rank(), 3);
        let sq = vec![p("y^2"), p("2*x*y"), p("x^2")];
        assert!(s2.gens().contains(&sq));
        assert!(s2.contains(&sq, b().s_max).unwrap());
    }

    #[test]
    fn generator_cap_guards_products() {
        let m = mm();
        let err = sym_power(&m, 9, 50).unwrap_err();
        assert!(matches!(err, Error::GeneratorCapExceeded { cols: 220, cap: 50 }));
    }

    #[test]
    fn br_values_for_rank_two_maximal_pair() {
        // M = m⊕m ⊆ R²: S_n(M) = m^n·S_n(F) splits into n+1 blocks of m^n,
        // so f(n) = (n+1)·binom(n+1, 2).
        let m = mm();
        for n in 0..=3usize {
            let f = br_function(&[m.clone()], &[n], b()).unwrap();
            assert_eq!(f, (n + 1) * binom(n + 1, 2) as usize);
        }
        // Same values through the one-module closed form
        // br·binom(n+2, 3) − (br−λ)·binom(n+1, 2), with br = 3, λ = 2.
        for n in 0..=3usize {
            let f = br_function(&[m.clone()], &[n], b()).unwrap() as i64;
            assert_eq!(f, 3 * binom(n + 2, 3) - 1 * binom(n + 1, 2));
        }
    }

    #[test]
    fn free_factor_multiplies_by_rank_count() {
        let m = mm();
        let f2 = Submodule::free(2, k(), 2);
        for n in [(1usize, 2usize), (2, 1), (2, 2)] {
            let joint = br_function(&[m.clone(), f2.clone()], &[n.0, n.1], b()).unwrap();
            let single = br_function(&[m.clone()], &[n.0], b()).unwrap();
            assert_eq!(joint as i64, binom(n.1 + 2 - 1, 2 - 1) * single as i64);
        }
    }

    #[test]
    fn tables_and_differences() {
        let m = m_ideal();
        let t = br_table(&[m.clone()], &[4], b()).unwrap();
        // f(n) = λ(R/m^n) = binom(n+1, 2).
        assert_eq!(t.values, vec![0, 1, 3, 6, 10]);
        assert_eq!(t.at(&[3]), 6);
        let d2 = finite_difference(&t, &[2]).unwrap();
        assert_eq!(d2.values, vec![1, 1, 1]);
        assert!(d2.stabilized());
        let d3 = finite_difference(&t, &[3]).unwrap();
        assert!(d3.vanishes_when_stable());
        assert!(finite_difference(&t, &[5]).is_err());

        // Bhattacharya table of (m, m): f = binom(n₁+n₂+1, 2), Δ₁Δ₂ ≡ 1.
        let t2 = br_table(&[m.clone(), m.clone()], &[3, 3], b()).unwrap();
        for n1 in 0..=3usize {
            for n2 in 0..=3usize {
                assert_eq!(t2.at(&[n1, n2]), binom(n1 + n2 + 1, 2));
            }
        }
        let d11 = finite_difference(&t2, &[1, 1]).unwrap();
        assert!(d11.values.iter().all(|&v| v == 1));
    }

    #[test]
    fn table_monotone_and_zero_at_origin() {
        let t = br_table(&[mm(), m_ideal()], &[2, 2], b()).unwrap();
        assert_eq!(t.at(&[0, 0]), 0);
        for off in super::box_offsets(&t.extents) {
            for axis in 0..2 {
                if off[axis] + 1 < t.extents[axis] {
                    let mut up = off.clone();
                    up[axis] += 1;
                    assert!(t.at_offset(&up) >= t.at_offset(&off));
                }
            }
        }
    }

    #[test]
    fn mixed_br_values() {
        let m = m_ideal();
        let e = mixed_br(&[m.clone(), m.clone()], &[3, 3], b()).unwrap();
        assert_eq!(e.value, 1, "e(m|m) = 1");
        assert!(e.stabilized);

        let e2 = mixed_br(&[m.clone(), mm()], &[3, 4], b()).unwrap();
        assert_eq!(e2.value, 2);
        assert!(e2.stabilized);

        // Symmetric under permuting the factors.
        let e2t = mixed_br(&[mm(), m.clone()], &[4, 3], b()).unwrap();
        assert_eq!(e2t.value, 2);

        let f1 = Submodule::free(2, k(), 1);
        let ef = mixed_br(&[f1.clone(), f1.clone()], &[3, 3], b()).unwrap();
        assert_eq!(ef.value, 0);

        assert!(matches!(
            mixed_br(&[m.clone(), m.clone()], &[2, 3], b()),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn degree_checks() {
        // Single ideal m: degree 2 = d + 1 − 1.
        let t = br_table(&[m_ideal()], &[4], b()).unwrap();
        assert!(degree_check(&t).unwrap());

        // Single module m⊕m: degree 3 = d + 2 − 1; needs 5 points.
        let t = br_table(&[mm()], &[4], b()).unwrap();
        assert!(degree_check(&t).unwrap());

        // Pair (m, m): degree 2 = d + 2 − 2.
        let t = br_table(&[m_ideal(), m_ideal()], &[3, 3], b()).unwrap();
        assert!(degree_check(&t).unwrap());

        // Window too small to test degree+1 differences.
        let t = br_table(&[mm()], &[3], b()).unwrap();
        assert!(matches!(degree_check(&t), Err(Error::WindowTooSmall { .. })));
    }

    #[test]
    fn mu_tables() {
        // μ(m^n) = n+1: fitted degree 1.
        let t = mu_table(&[m_ideal()], 3, b()).unwrap();
        assert_eq!(t.values, vec![1, 2, 3, 4]);
        assert_eq!(t.fitted_degree, Some(1));

        // q = 2, both m: μ(m^n·m^n) = 2n+1.
        let t = mu_table(&[m_ideal(), m_ideal()], 3, b()).unwrap();
        assert_eq!(t.values, vec![1, 3, 5, 7]);
        assert_eq!(t.fitted_degree, Some(1));
    }

    #[test]
    fn csv_serialization() {
        let t = br_table(&[m_ideal()], &[2], b()).unwrap();
        assert_eq!(t.to_csv(), "n1,length\r\n0,0\r\n1,1\r\n2,3\r\n");
    }
}
