//! Two-variable specialization: integrally closed (complete) monomial
//! ideals via Newton polyhedra, constructors for integrally closed modules
//! (direct sums of complete monomial ideals and free summands), mixed
//! multiplicities of m-primary ideal pairs, and the batch verifiers for the
//! length identities that hold over k[x,y] localized at (x,y):
//!
//! * joint-reduction-number zero: M₁M₂ = B₁M₂ + M₁B₂ for integrally closed
//!   pairs and generic candidates;
//! * λ(F₁⋯F_q/M₁⋯M_q) = Σ s_iλ(F_i/M_i) + Σ_{i<j} t_{ij}e(I_i|I_j) with
//!   s_i = ∏_{j≠i}r_j and t_{ij} = ∏_{l∉{i,j}}r_l;
//! * the local-module identity λ(F₁F₂/M₁M₂) = r₂λ₁ + r₁λ₂ + n₁n₂;
//! * r₁λ₂ + r₂λ₁ = λ((B₁F₂+F₁B₂)/(B₁M₂+M₁B₂));
//! * the closed-form joint length function (binomial coefficients against
//!   br(M_i), λ_i and e(I_i|I_j));
//! * multiplicativity of minor ideals, I(M₁M₂) = I₁^{r₂}I₂^{r₁}.
//!
//! A monomial ideal is integrally closed exactly when its exponent set
//! contains every lattice point of its Newton polyhedron conv(E) + R²≥0,
//! which in two variables reduces to half-plane tests against the lower
//! convex hull of the exponents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::jointred::{joint_reduction_number, JointReduction, Jrn};
use crate::localring::{MIdeal, Poly};
use crate::scalar::FieldSpec;
use crate::submod::Submodule;
use crate::symprod::{br_table, finite_difference, graded_product, tensor_combine, BRTable};
use crate::{Bounds, Error, Result};

/// Exponent pairs of the generators of a two-variable monomial ideal.
fn exponent_pairs(ideal: &MIdeal) -> Result<Vec<(i64, i64)>> {
    if ideal.d() != 2 {
        return Err(Error::Mismatch(format!(
            "Newton-polyhedron closure is implemented for 2 variables, got {}",
            ideal.d()
        )));
    }
    if !ideal.is_monomial_ideal() {
        return Err(Error::Mismatch(
            "integral-closure test requires a monomial ideal".into(),
        ));
    }
    Ok(ideal
        .gens()
        .iter()
        .map(|g| {
            let (mono, _) = g.terms().next().expect("nonzero generator");
            (mono.exponents[0] as i64, mono.exponents[1] as i64)
        })
        .collect())
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Lower convex hull of the exponent set, left to right; the Newton
/// polyhedron is everything on or above it.
fn lower_hull(mut points: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    points.sort_unstable();
    points.dedup();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

fn in_polyhedron(hull: &[(i64, i64)], z: (i64, i64)) -> bool {
    if z.0 < hull[0].0 || z.1 < hull[hull.len() - 1].1 {
        return false;
    }
    hull.windows(2).all(|e| cross(e[0], e[1], z) >= 0)
}

/// The integral closure of an m-primary monomial ideal: the ideal of all
/// lattice points in conv(exponents) + N².
pub fn monomial_closure(ideal: &MIdeal, s_max: usize) -> Result<MIdeal> {
    ideal.mprimary_exponent(s_max)?;
    let hull = lower_hull(exponent_pairs(ideal)?);
    let (xmax, ymax) = (hull[hull.len() - 1].0, hull[0].1);
    let mut inside = Vec::new();
    for u in 0..=xmax {
        for v in 0..=ymax {
            if in_polyhedron(&hull, (u, v)) {
                inside.push((u, v));
            }
        }
    }
    let minimal: Vec<Vec<u32>> = inside
        .iter()
        .filter(|&&p| {
            !inside
                .iter()
                .any(|&q| q != p && q.0 <= p.0 && q.1 <= p.1)
        })
        .map(|&(u, v)| vec![u as u32, v as u32])
        .collect();
    Ok(MIdeal::monomial(2, ideal.field(), &minimal))
}

/// Whether an m-primary monomial ideal equals its integral closure.
pub fn is_integrally_closed_monomial(ideal: &MIdeal, s_max: usize) -> Result<bool> {
    let closure = monomial_closure(ideal, s_max)?;
    for g in closure.gens() {
        if !ideal.contains(g, s_max)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The numerical contractedness criterion: μ(M) = ord(M) + rank(F).
pub fn contracted_numerical_test(m: &Submodule, s_max: usize) -> Result<bool> {
    let ord = m.ord().ok_or(Error::NotFiniteColength { s_max })?;
    Ok(m.min_generators(s_max)? == ord + m.ambient_rank())
}

/// A module built as a direct sum of integrally closed pieces: free rank-one
/// summands and complete (integrally closed) m-primary monomial ideals.
/// Direct sums of integrally closed modules are integrally closed, so the
/// realized module carries the property by construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Summand {
    Free,
    /// Minimal generator exponents (a, b) ↦ xᵃyᵇ.
    Ideal(Vec<(u32, u32)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ICModuleSpec {
    summands: Vec<Summand>,
}

impl ICModuleSpec {
    /// Validates every ideal summand: monomial, m-primary, and integrally
    /// closed.
    pub fn new(summands: Vec<Summand>) -> Result<Self> {
        assert!(!summands.is_empty());
        for s in &summands {
            if let Summand::Ideal(exps) = s {
                let probe = MIdeal::monomial(
                    2,
                    FieldSpec::default(),
                    &exps.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
                );
                if !is_integrally_closed_monomial(&probe, crate::DEFAULT_S_MAX)? {
                    return Err(Error::Mismatch(format!(
                        "summand {:?} is not integrally closed",
                        exps
                    )));
                }
            }
        }
        Ok(ICModuleSpec { summands })
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn realize(&self, field: FieldSpec) -> Submodule {
        let mut acc: Option<Submodule> = None;
        for s in &self.summands {
            let piece = match s {
                Summand::Free => Submodule::free(2, field, 1),
                Summand::Ideal(exps) => Submodule::from_ideal(&MIdeal::monomial(
                    2,
                    field,
                    &exps.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
                )),
            };
            acc = Some(match acc {
                None => piece,
                Some(prev) => prev.direct_sum(&piece),
            });
        }
        acc.expect("at least one summand")
    }

    /// A seeded random spec: each summand is free with small probability,
    /// otherwise a random staircase closed up to its Newton polyhedron.
    pub fn random<R: Rng>(rng: &mut R, max_summands: usize, max_order: u32) -> Self {
        let count = rng.gen_range(1..=max_summands);
        let summands = (0..count)
            .map(|_| {
                if rng.gen_bool(0.15) {
                    return Summand::Free;
                }
                let a = rng.gen_range(1..=max_order);
                let b = rng.gen_range(1..=max_order);
                let mut exps = vec![vec![a, 0], vec![0, b]];
                if a > 1 && b > 1 {
                    for _ in 0..rng.gen_range(0..=2u32) {
                        exps.push(vec![rng.gen_range(1..a), rng.gen_range(1..b)]);
                    }
                }
                let raw = MIdeal::monomial(2, FieldSpec::default(), &exps);
                let closed = monomial_closure(&raw, crate::DEFAULT_S_MAX)
                    .expect("staircase ideals are m-primary");
                let pairs = closed
                    .gens()
                    .iter()
                    .map(|g| {
                        let (mono, _) = g.terms().next().unwrap();
                        (mono.exponents[0], mono.exponents[1])
                    })
                    .collect();
                Summand::Ideal(pairs)
            })
            .collect();
        ICModuleSpec { summands }
    }

    /// Human-readable form for reports, e.g. `(x^2, x*y, y^2) (+) R`.
    pub fn describe(&self) -> String {
        self.summands
            .iter()
            .map(|s| match s {
                Summand::Free => "R".to_string(),
                Summand::Ideal(exps) => {
                    let terms: Vec<String> = exps
                        .iter()
                        .map(|&(a, b)| match (a, b) {
                            (0, 0) => "1".into(),
                            _ => {
                                let mut f = Vec::new();
                                if a == 1 {
                                    f.push("x".to_string());
                                } else if a > 1 {
                                    f.push(format!("x^{a}"));
                                }
                                if b == 1 {
                                    f.push("y".to_string());
                                } else if b > 1 {
                                    f.push(format!("y^{b}"));
                                }
                                f.join("*")
                            }
                        })
                        .collect();
                    format!("({})", terms.join(", "))
                }
            })
            .collect::<Vec<_>>()
            .join(" (+) ")
    }
}

/// Both routes to the mixed multiplicity e(I|J) of an m-primary pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedMultReport {
    /// Δ₁Δ₂ of λ(R/IᵐJⁿ) at the window's top corner.
    pub route_a: i64,
    /// Whether the differenced table was constant on its last-2 block.
    pub stabilized: bool,
    /// min over seeded trials of λ(R/(a,b)) for random combinations a ∈ I,
    /// b ∈ J; absent when no trial was requested or none certified.
    pub route_b: Option<i64>,
    pub equal: Option<bool>,
    pub window: (usize, usize),
    pub trials: usize,
    pub seed: u64,
}

pub fn mixed_mult_ideals(
    i: &MIdeal,
    j: &MIdeal,
    window: (usize, usize),
    trials: usize,
    seed: u64,
    bounds: Bounds,
) -> Result<MixedMultReport> {
    assert_eq!(i.d(), 2, "mixed multiplicities are computed over k[x,y]");
    assert_eq!(j.d(), 2);
    assert_eq!(i.field(), j.field());
    let mut ipows = vec![MIdeal::unit(2, i.field())];
    for _ in 0..window.0 {
        ipows.push(ipows.last().unwrap().product(i));
    }
    let mut jpows = vec![MIdeal::unit(2, j.field())];
    for _ in 0..window.1 {
        jpows.push(jpows.last().unwrap().product(j));
    }
    let mut values = Vec::with_capacity((window.0 + 1) * (window.1 + 1));
    for a in 0..=window.0 {
        for b in 0..=window.1 {
            values.push(ipows[a].product(&jpows[b]).colength(bounds.s_max)? as i64);
        }
    }
    let table = BRTable {
        origin: vec![0, 0],
        extents: vec![window.0 + 1, window.1 + 1],
        values,
        d: 2,
        ranks: vec![1, 1],
    };
    let diffed = finite_difference(&table, &[1, 1])?;
    let route_a = diffed.top_value();
    let stabilized = diffed.stabilized();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut route_b: Option<i64> = None;
    for _ in 0..trials {
        let a = random_combination(i, &mut rng);
        let b = random_combination(j, &mut rng);
        match MIdeal::new(2, i.field(), vec![a, b]).colength(bounds.s_max) {
            Ok(c) => {
                let c = c as i64;
                route_b = Some(route_b.map_or(c, |best| best.min(c)));
            }
            // A degenerate draw (e.g. a common factor): skip the trial.
            Err(Error::NotFiniteColength { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let equal = route_b.map(|b| b == route_a);
    Ok(MixedMultReport { route_a, stabilized, route_b, equal, window, trials, seed })
}

fn random_combination<R: Rng>(i: &MIdeal, rng: &mut R) -> Poly {
    let mut acc = Poly::zero(i.d(), i.field());
    for g in i.gens() {
        acc = acc.add(&g.scale(&i.field().random(rng)));
    }
    acc
}

/// Route A with automatic window enlargement, for use as a verified
/// ingredient in the length identities.
pub fn stabilized_mixed_mult(i: &MIdeal, j: &MIdeal, bounds: Bounds) -> Result<i64> {
    for w in [3usize, 5, 7, 9] {
        let report = mixed_mult_ideals(i, j, (w, w), 0, 0, bounds)?;
        if report.stabilized {
            return Ok(report.route_a);
        }
    }
    Err(Error::Mismatch(
        "mixed multiplicity did not stabilize by window (9, 9)".into(),
    ))
}

/// The Buchsbaum–Rim multiplicity of a single module via the Δ-route:
/// Δ^{r+1} of λ(S_n(F)/S_n(M)), with window enlargement until stable.
pub fn br_multiplicity(m: &Submodule, bounds: Bounds) -> Result<i64> {
    let r = m.ambient_rank();
    for attempt in 0..3 {
        let w = r + 3 + 2 * attempt;
        let table = br_table(std::slice::from_ref(m), &[w], bounds)?;
        let diffed = finite_difference(&table, &[r + 1])?;
        if diffed.stabilized() {
            return Ok(diffed.top_value());
        }
    }
    Err(Error::Mismatch(
        "Buchsbaum–Rim multiplicity did not stabilize".into(),
    ))
}

/// Joint-reduction-number-zero verdict for a seeded random candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Jrn0Report {
    pub jrn: Jrn,
    /// True exactly for joint reduction number 0, i.e. the certified
    /// equality M₁M₂ = B₁M₂ + M₁B₂.
    pub holds: bool,
    pub seed: u64,
}

pub fn verify_jrn0(m1: &Submodule, m2: &Submodule, seed: u64, bounds: Bounds) -> Result<Jrn0Report> {
    let ms = [m1.clone(), m2.clone()];
    let b = JointReduction::random_candidate(&ms, seed);
    let jrn = joint_reduction_number(&ms, &b, bounds)?;
    if let Jrn::NotFound { n_max } = jrn {
        return Err(Error::CandidateNotJointReduction { n_max });
    }
    Ok(Jrn0Report { jrn, holds: jrn == Jrn::Found { n: 0 }, seed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
}

/// λ(F₁⋯F_q/M₁⋯M_q) against Σ s_iλ(F_i/M_i) + Σ t_{ij}e(I_i|I_j) with
/// s_i = ∏_{j≠i} r_j and t_{ij} = ∏_{l∉{i,j}} r_l.  Both sides are computed
/// by independent routes (certified product colength vs. single colengths
/// plus mixed multiplicities of the minor ideals).
pub fn verify_prodlength(ms: &[Submodule], bounds: Bounds) -> Result<IdentityReport> {
    assert!(ms.len() >= 2);
    let degrees = vec![1; ms.len()];
    let lhs = graded_product(ms, &degrees, bounds.gen_cap)?.colength(bounds.s_max)? as i64;

    let ranks: Vec<i64> = ms.iter().map(|m| m.ambient_rank() as i64).collect();
    let all: i64 = ranks.iter().product();
    let mut rhs = 0i64;
    for (i, m) in ms.iter().enumerate() {
        rhs += (all / ranks[i]) * m.colength(bounds.s_max)? as i64;
    }
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            let t = all / (ranks[i] * ranks[j]);
            let e = stabilized_mixed_mult(&ms[i].fitting_ideal(), &ms[j].fitting_ideal(), bounds)?;
            rhs += t * e;
        }
    }
    Ok(IdentityReport { lhs, rhs, equal: lhs == rhs })
}

/// Whether I(M) is a power of the maximal ideal (certified mutual
/// containment with m^{ord}).
pub fn is_local_module(m: &Submodule, bounds: Bounds) -> Result<bool> {
    let fit = m.fitting_ideal();
    let ord = match fit.ord() {
        None => return Err(Error::NotFiniteColength { s_max: bounds.s_max }),
        Some(o) => o,
    };
    fit.equals(&MIdeal::maximal_power(m.d(), m.field(), ord), bounds.s_max)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalIdentityReport {
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
    pub orders: (usize, usize),
}

/// λ(F₁F₂/M₁M₂) = r₂λ(F₁/M₁) + r₁λ(F₂/M₂) + n₁n₂ for local modules (those
/// with I(M) a power of m), n_k = ord(M_k).
pub fn verify_local_identity(
    m1: &Submodule,
    m2: &Submodule,
    bounds: Bounds,
) -> Result<LocalIdentityReport> {
    if !is_local_module(m1, bounds)? || !is_local_module(m2, bounds)? {
        return Err(Error::NotLocal);
    }
    let n1 = m1.ord().expect("local module has an order");
    let n2 = m2.ord().expect("local module has an order");
    let lhs =
        graded_product(&[m1.clone(), m2.clone()], &[1, 1], bounds.gen_cap)?
            .colength(bounds.s_max)? as i64;
    let rhs = (m2.ambient_rank() * m1.colength(bounds.s_max)?
        + m1.ambient_rank() * m2.colength(bounds.s_max)?
        + n1 * n2) as i64;
    Ok(LocalIdentityReport { lhs, rhs, equal: lhs == rhs, orders: (n1, n2) })
}

/// r₁λ(F₂/M₂) + r₂λ(F₁/M₁) = λ((B₁F₂+F₁B₂)/(B₁M₂+M₁B₂)), the right side
/// computed as a difference of certified colengths in F₁F₂.  The candidate
/// must first confirm as a joint reduction.
pub fn verify_step1(
    m1: &Submodule,
    m2: &Submodule,
    b: &JointReduction,
    bounds: Bounds,
) -> Result<IdentityReport> {
    let ms = [m1.clone(), m2.clone()];
    if let Jrn::NotFound { n_max } = joint_reduction_number(&ms, b, bounds)? {
        return Err(Error::CandidateNotJointReduction { n_max });
    }
    let (d, field) = (m1.d(), m1.field());
    let (r1, r2) = (m1.ambient_rank(), m2.ambient_rank());
    let lhs = (r1 * m2.colength(bounds.s_max)? + r2 * m1.colength(bounds.s_max)?) as i64;

    let dims = [r1, r2];
    let f1 = Submodule::free(d, field, r1);
    let f2 = Submodule::free(d, field, r2);
    let mixed = |left: &[Vec<Poly>], right: &[Vec<Poly>]| -> Result<Submodule> {
        tensor_combine(d, field, &[left.to_vec(), right.to_vec()], &dims, bounds.gen_cap)
    };
    let small = mixed(b.columns(0), m2.gens())?.plus(&mixed(m1.gens(), b.columns(1))?);
    let large = mixed(b.columns(0), f2.gens())?.plus(&mixed(f1.gens(), b.columns(1))?);
    let rhs = small.colength(bounds.s_max)? as i64 - large.colength(bounds.s_max)? as i64;
    Ok(IdentityReport { lhs, rhs, equal: lhs == rhs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrPolyaReport {
    pub window: Vec<usize>,
    pub max_abs_deviation: i64,
    pub brs: Vec<i64>,
    pub colengths: Vec<i64>,
    /// e(I_i|I_j) for i < j, row-major.
    pub mixed: Vec<i64>,
    pub equal: bool,
}

/// The closed form of the joint length function for integrally closed
/// modules, checked against the directly computed lengths at every window
/// point:
///
///   f(n) = Σ_i s_i(n)·[br_i·C(n_i+r_i, r_i+1) − (br_i−λ_i)·C(n_i+r_i−1, r_i)]
///        + Σ_{i<j} v_{ij}(n)·e(I_i|I_j),
///
/// where s_i(n) = ∏_{k≠i} C(n_k+r_k−1, r_k−1) and v_{ij}(n) carries
/// C(n_i+r_i−1, r_i)·C(n_j+r_j−1, r_j) in place of the i, j factors.
pub fn verify_brpolya(ms: &[Submodule], window: &[usize], bounds: Bounds) -> Result<BrPolyaReport> {
    assert!(ms.len() >= 2);
    assert_eq!(ms.len(), window.len());
    let q = ms.len();
    let ranks: Vec<usize> = ms.iter().map(Submodule::ambient_rank).collect();
    let colengths: Vec<i64> = ms
        .iter()
        .map(|m| m.colength(bounds.s_max).map(|c| c as i64))
        .collect::<Result<_>>()?;
    let brs: Vec<i64> = ms.iter().map(|m| br_multiplicity(m, bounds)).collect::<Result<_>>()?;
    let mut mixed = Vec::new();
    for i in 0..q {
        for j in i + 1..q {
            mixed.push(stabilized_mixed_mult(
                &ms[i].fitting_ideal(),
                &ms[j].fitting_ideal(),
                bounds,
            )?);
        }
    }

    let c = |n: usize, k: usize| crate::binom(n, k);
    let closed_form = |n: &[usize]| -> i64 {
        let factor = |k: usize| c(n[k] + ranks[k] - 1, ranks[k] - 1);
        let mut total = 0i64;
        for i in 0..q {
            let s_i: i64 = (0..q).filter(|&k| k != i).map(factor).product();
            let bracket = brs[i] * c(n[i] + ranks[i], ranks[i] + 1)
                - (brs[i] - colengths[i]) * c(n[i] + ranks[i] - 1, ranks[i]);
            total += s_i * bracket;
        }
        let mut idx = 0;
        for i in 0..q {
            for j in i + 1..q {
                let v: i64 = (0..q)
                    .map(|k| {
                        if k == i || k == j {
                            c(n[k] + ranks[k] - 1, ranks[k])
                        } else {
                            factor(k)
                        }
                    })
                    .product();
                total += v * mixed[idx];
                idx += 1;
            }
        }
        total
    };

    let mut max_abs_deviation = 0i64;
    let mut point = vec![0usize; q];
    loop {
        let direct =
            graded_product(ms, &point, bounds.gen_cap)?.colength(bounds.s_max)? as i64;
        max_abs_deviation = max_abs_deviation.max((direct - closed_form(&point)).abs());
        // Advance the odometer over the window box.
        let mut axis = q;
        while axis > 0 {
            axis -= 1;
            if point[axis] < window[axis] {
                point[axis] += 1;
                break;
            }
            point[axis] = 0;
            if axis == 0 {
                return Ok(BrPolyaReport {
                    window: window.to_vec(),
                    max_abs_deviation,
                    brs,
                    colengths,
                    mixed,
                    equal: max_abs_deviation == 0,
                });
            }
        }
    }
}

/// Certified equality I(M₁M₂) = I(M₁)^{r₂}·I(M₂)^{r₁}.
pub fn minors_multiplicativity_check(
    m1: &Submodule,
    m2: &Submodule,
    bounds: Bounds,
) -> Result<bool> {
    let product = graded_product(&[m1.clone(), m2.clone()], &[1, 1], bounds.gen_cap)?;
    let lhs = Submodule::from_ideal(&product.fitting_ideal());
    let rhs = Submodule::from_ideal(
        &m1.fitting_ideal()
            .power(m2.ambient_rank())
            .product(&m2.fitting_ideal().power(m1.ambient_rank())),
    );
    lhs.eq_submodule(&rhs, bounds.s_max)
}
