//! The finite certificate engine behind every membership and length claim.
//!
//! For a submodule M ⊆ F = R^r with generator columns g_j, the containment
//! m^s F ⊆ M is equivalent to the finite statement m^s F ⊆ M + m^{s+1} F:
//! one direction is trivial, and the other follows by multiplying through by
//! m (giving m^s F ⊆ M + m^{s+k} F for every k) and applying the Krull
//! intersection theorem in the local ring.  The finite statement is a linear
//! algebra question in F/m^{s+1}F, whose k-basis is indexed by pairs
//! (monomial of degree ≤ s, ambient coordinate).
//!
//! Once the smallest such s is found, everything else is free:
//!   • λ(F/M) = dim F/m^s F − dim(image of M), the image being the span of
//!     all x^a·g_j truncated to degree < s — exactly the span built by the
//!     failed trial at s−1;
//!   • v ∈ M ⇔ the truncation of v to degree < s lies in that span.
//!
//! The engine also splits the ambient coordinates into connected components
//! under "some generator touches both", since the module, its colength and
//! its certificates decompose as direct sums over components.  This is what
//! makes direct sums of ideals (the integrally-closed test family) cheap.

use std::collections::{HashMap, VecDeque};

use crate::exactla::RowSpace;
use crate::localring::{monomials_below, monomials_of_degree, Monomial, Poly};
use crate::scalar::{FieldSpec, Scalar};
use crate::{Error, Result};

/// Coordinate system for F/m^{t+1}F: basis (monomial of degree ≤ t) × (coord).
#[derive(Debug)]
struct Workspace {
    d: usize,
    r: usize,
    field: FieldSpec,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// shifts[var][mono index] = index of mono·x_var, or None past degree t.
    shifts: Vec<Vec<Option<usize>>>,
}

impl Workspace {
    /// Workspace at truncation degree t; `degree_bound = t + 1` monomial
    /// degrees 0..=t are kept, so `new(.., 0)` keeps nothing (width 0).
    fn new(d: usize, field: FieldSpec, r: usize, degree_bound: usize) -> Self {
        let monos = monomials_below(d, degree_bound);
        let index: HashMap<Monomial, usize> =
            monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let shifts = (0..d)
            .map(|v| {
                let xv = Monomial::var(d, v);
                monos.iter().map(|m| index.get(&m.mul(&xv)).copied()).collect()
            })
            .collect();
        Workspace { d, r, field, monos, index, shifts }
    }

    fn width(&self) -> usize {
        self.monos.len() * self.r
    }

    /// Coefficient vector of a polynomial column, truncated to the workspace.
    fn vectorize(&self, col: &[Poly]) -> Vec<Scalar> {
        assert_eq!(col.len(), self.r);
        let mut out = vec![self.field.zero(); self.width()];
        for (i, p) in col.iter().enumerate() {
            for (m, c) in p.terms() {
                if let Some(&j) = self.index.get(m) {
                    out[j * self.r + i] = c.clone();
                }
            }
        }
        out
    }

    /// Multiply a coefficient vector by x_var (truncating past degree t).
    fn shift(&self, v: &[Scalar], var: usize) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.width()];
        for (j, target) in self.shifts[var].iter().enumerate() {
            let Some(tj) = target else { continue };
            for i in 0..self.r {
                let s = &v[j * self.r + i];
                if !s.is_zero() {
                    out[tj * self.r + i] = s.clone();
                }
            }
        }
        out
    }

    fn unit(&self, mono: &Monomial, coord: usize) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.width()];
        out[self.index[mono] * self.r + coord] = self.field.one();
        out
    }
}

/// Span of all x^a·g_j in the workspace: close the generator span under
/// multiplication by each variable.  Only vectors that enlarged the span are
/// multiplied further; anything dependent is a combination of earlier kept
/// vectors, whose shifts are already queued.
fn saturate(ws: &Workspace, gens: &[Vec<Poly>]) -> RowSpace {
    let mut space = RowSpace::new(ws.width(), ws.field);
    let mut queue: VecDeque<Vec<Scalar>> = gens.iter().map(|g| ws.vectorize(g)).collect();
    while let Some(v) = queue.pop_front() {
        if space.insert(v.clone()) {
            for var in 0..ws.d {
                queue.push_back(ws.shift(&v, var));
            }
        }
    }
    space
}

/// Certificate for one support component, on its restricted coordinates.
#[derive(Debug)]
struct Component {
    coords: Vec<usize>,
    s: usize,
    colength: usize,
    /// Image of M in F/m^s F (the membership space), with its workspace.
    space: RowSpace,
    ws: Workspace,
}

impl Component {
    fn restrict(&self, v: &[Poly]) -> Vec<Poly> {
        self.coords.iter().map(|&i| v[i].clone()).collect()
    }

    fn contains(&self, v: &[Poly]) -> bool {
        self.space.contains(&self.ws.vectorize(&self.restrict(v)))
    }
}

/// A certified finite-colength presentation of M ⊆ R^r.
#[derive(Debug)]
pub struct ModuleCert {
    r: usize,
    field: FieldSpec,
    s: usize,
    colength: usize,
    comps: Vec<Component>,
}

impl ModuleCert {
    /// The smallest s with m^s F ⊆ M.
    pub fn exponent(&self) -> usize {
        self.s
    }

    pub fn colength(&self) -> usize {
        self.colength
    }

    /// Exact membership v ∈ M.
    pub fn contains(&self, v: &[Poly]) -> bool {
        assert_eq!(v.len(), self.r, "ambient rank mismatch");
        self.comps.iter().all(|c| c.contains(v))
    }

    /// dim_k of the span of the given vectors in F/M — e.g. with M = mN and
    /// the generators of N, this is the minimal generator count μ(N).
    pub fn residue_rank(&self, vectors: &[Vec<Poly>]) -> usize {
        let total: usize = self.comps.iter().map(|c| c.ws.width()).sum();
        let mut span = RowSpace::new(total, self.field);
        for v in vectors {
            assert_eq!(v.len(), self.r, "ambient rank mismatch");
            let mut row = Vec::with_capacity(total);
            for c in &self.comps {
                row.extend(c.space.residue(c.ws.vectorize(&c.restrict(v))));
            }
            span.insert(row);
        }
        span.rank()
    }
}

/// Certify the smallest s with m^s F ⊆ M for one (already connected) block,
/// and collect the colength and membership span along the way.
fn certify_block(
    d: usize,
    field: FieldSpec,
    r: usize,
    gens: &[Vec<Poly>],
    s_max: usize,
    coords: Vec<usize>,
) -> Result<Component> {
    let mut prev: Option<(RowSpace, Workspace)> = None;
    for s in 0..=s_max {
        let ws = Workspace::new(d, field, r, s + 1);
        let space = saturate(&ws, gens);
        let certified = monomials_of_degree(d, s)
            .iter()
            .all(|mu| (0..r).all(|i| space.contains(&ws.unit(mu, i))));
        if certified {
            let (pspace, pws) = prev.unwrap_or_else(|| {
                let w = Workspace::new(d, field, r, 0);
                (RowSpace::new(0, field), w)
            });
            let colength = if s == 0 { 0 } else { r * monomials_below(d, s).len() - pspace.rank() };
            return Ok(Component { coords, s, colength, space: pspace, ws: pws });
        }
        prev = Some((space, ws));
    }
    Err(Error::NotFiniteColength { s_max })
}

/// Certify M ⊆ R^r given by generator columns (each of length r), finding
/// the smallest s with m^s F ⊆ M; errors with NotFiniteColength if no
/// s ≤ s_max certifies.
pub fn certify(
    d: usize,
    field: FieldSpec,
    r: usize,
    gens: &[Vec<Poly>],
    s_max: usize,
) -> Result<ModuleCert> {
    assert!(d >= 1 && r >= 1);
    for g in gens {
        assert_eq!(g.len(), r, "generator column length must equal ambient rank");
    }
    // Union-find on coordinates: a generator glues its support together.
    let mut parent: Vec<usize> = (0..r).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let supports: Vec<Vec<usize>> = gens
        .iter()
        .map(|g| (0..r).filter(|&i| !g[i].is_zero()).collect())
        .collect();
    for sup in &supports {
        for w in sup.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    // A coordinate no generator touches makes the colength infinite.
    let mut touched = vec![false; r];
    for sup in &supports {
        for &i in sup {
            touched[i] = true;
        }
    }
    if !touched.iter().all(|&t| t) {
        return Err(Error::NotFiniteColength { s_max });
    }
    // Components in order of their smallest coordinate.
    let mut comp_of_root: HashMap<usize, usize> = HashMap::new();
    let mut coord_sets: Vec<Vec<usize>> = Vec::new();
    for i in 0..r {
        let root = find(&mut parent, i);
        let ci = *comp_of_root.entry(root).or_insert_with(|| {
            coord_sets.push(Vec::new());
            coord_sets.len() - 1
        });
        coord_sets[ci].push(i);
    }
    let mut comps = Vec::with_capacity(coord_sets.len());
    for coords in coord_sets {
        let pos: HashMap<usize, usize> =
            coords.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let sub_gens: Vec<Vec<Poly>> = gens
            .iter()
            .zip(&supports)
            .filter(|(_, sup)| sup.first().is_some_and(|i| pos.contains_key(i)))
            .map(|(g, _)| coords.iter().map(|&i| g[i].clone()).collect())
            .collect();
        comps.push(certify_block(d, field, coords.len(), &sub_gens, s_max, coords)?);
    }
    let s = comps.iter().map(|c| c.s).max().unwrap_or(0);
    let colength = comps.iter().map(|c| c.colength).sum();
    Ok(ModuleCert { r, field, s, colength, comps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localring::{default_var_names, parse_poly};
    use crate::DEFAULT_S_MAX;

    fn k() -> FieldSpec {
        FieldSpec::default()
    }

    fn col(entries: &[&str]) -> Vec<Poly> {
        let vars = default_var_names(2);
        entries.iter().map(|s| parse_poly(s, &vars, k()).unwrap()).collect()
    }

    #[test]
    fn full_module_certifies_at_zero() {
        let gens = vec![col(&["1", "0"]), col(&["0", "1"])];
        let c = certify(2, k(), 2, &gens, DEFAULT_S_MAX).unwrap();
        assert_eq!(c.exponent(), 0);
        assert_eq!(c.colength(), 0);
        assert!(c.contains(&col(&["x^5", "y"])));
    }

    #[test]
    fn maximal_ideal_pair_in_rank_two() {
        // M = m ⊕ m ⊆ R²: mF ⊆ M already, so the minimal exponent is 1.
        let gens = vec![col(&["x", "0"]), col(&["y", "0"]), col(&["0", "x"]), col(&["0", "y"])];
        let c = certify(2, k(), 2, &gens, DEFAULT_S_MAX).unwrap();
        assert_eq!(c.exponent(), 1);
        assert_eq!(c.colength(), 2);
        assert_eq!(c.comps.len(), 2, "splits into two rank-one blocks");
        assert!(c.contains(&col(&["x*y", "y^2"])));
        assert!(!c.contains(&col(&["1", "0"])));
        assert!(!c.contains(&col(&["x", "1"])));
    }

    #[test]
    fn binomial_ideal_exponent_is_minimal() {
        let gens = vec![col(&["x"]), col(&["y^2 - x^2"])];
        let c = certify(2, k(), 1, &gens, DEFAULT_S_MAX).unwrap();
        assert_eq!(c.exponent(), 2);
        assert_eq!(c.colength(), 2);
        assert!(c.contains(&col(&["y^2"])));
        assert!(!c.contains(&col(&["y"])));
    }

    #[test]
    fn direct_sum_of_staircases_decomposes() {
        let gens = vec![
            col(&["x", "0"]),
            col(&["y^2", "0"]),
            col(&["0", "x^3"]),
            col(&["0", "y"]),
        ];
        let c = certify(2, k(), 2, &gens, DEFAULT_S_MAX).unwrap();
        assert_eq!(c.comps.len(), 2);
        assert_eq!(c.colength(), 2 + 3);
        assert_eq!(c.exponent(), 3);
    }

    #[test]
    fn mixing_generator_joins_components() {
        let gens = vec![
            col(&["x", "0"]),
            col(&["y", "0"]),
            col(&["0", "x"]),
            col(&["0", "y"]),
            col(&["y", "x"]),
        ];
        let c = certify(2, k(), 2, &gens, DEFAULT_S_MAX).unwrap();
        assert_eq!(c.comps.len(), 1);
        assert_eq!(c.colength(), 2, "extra generator inside m⊕m changes nothing");
    }

    #[test]
    fn infinite_colength_is_reported() {
        // Untouched coordinate.
        let gens = vec![col(&["x", "0"]), col(&["y", "0"])];
        assert!(matches!(
            certify(2, k(), 2, &gens, 6),
            Err(Error::NotFiniteColength { s_max: 6 })
        ));
        // Principal ideal in two variables.
        let gens = vec![col(&["x + y^2"])];
        assert!(certify(2, k(), 1, &gens, 6).is_err());
        // Empty generator list.
        let gens: Vec<Vec<Poly>> = Vec::new();
        assert!(certify(2, k(), 1, &gens, 6).is_err());
    }

    #[test]
    fn residue_rank_counts_minimal_generators() {
        // N = m ⊆ R; vectors = generators of N, modulo M = mN = m².
        let m2 = vec![col(&["x^2"]), col(&["x*y"]), col(&["y^2"])];
        let c = certify(2, k(), 1, &m2, DEFAULT_S_MAX).unwrap();
        let n_gens = vec![col(&["x"]), col(&["y"]), col(&["x + y"])];
        assert_eq!(c.residue_rank(&n_gens), 2, "μ(m) = 2");
    }

    #[test]
    fn rational_backend_matches() {
        let vars = default_var_names(2);
        let gens_over = |field: FieldSpec| -> Vec<Vec<Poly>> {
            ["x + y^2", "y^3 - x^2"]
                .iter()
                .map(|s| vec![parse_poly(s, &vars, field).unwrap()])
                .collect()
        };
        let cp = certify(2, k(), 1, &gens_over(k()), DEFAULT_S_MAX).unwrap();
        let cq = certify(2, FieldSpec::Q, 1, &gens_over(FieldSpec::Q), DEFAULT_S_MAX).unwrap();
        assert_eq!(cp.exponent(), cq.exponent());
        assert_eq!(cp.colength(), cq.colength());
    }
}
