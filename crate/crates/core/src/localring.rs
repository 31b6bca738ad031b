//! Arithmetic in R = k[x₁,…,x_d] localized at m = (x₁,…,x_d), and ideals of R.
//!
//! Elements are honest polynomials; localization only matters for membership
//! questions, and those are settled by the m-primary certificate: if every
//! degree-s monomial lies in I modulo m^{s+1} (a finite linear-algebra check),
//! then m^s ⊆ I + m^{s+k} for every k by induction, hence m^s ⊆ I by the
//! Krull intersection theorem.  The check is also necessary, so the smallest
//! certified s is exactly the smallest s with m^s ⊆ I.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::cert;
use crate::scalar::{FieldSpec, Scalar};
use crate::{Error, Result};

/// A monomial x^a in d variables, by exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    pub fn one(d: usize) -> Self {
        Monomial { exponents: vec![0; d] }
    }

    /// The i-th variable.
    pub fn var(d: usize, i: usize) -> Self {
        assert!(i < d);
        let mut e = vec![0; d];
        e[i] = 1;
        Monomial { exponents: e }
    }

    pub fn d(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> usize {
        self.exponents.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.d(), other.d());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        assert_eq!(self.d(), other.d());
        self.exponents.iter().zip(&other.exponents).all(|(a, b)| a <= b)
    }
}

/// Graded lexicographic order: by total degree, then lex on exponents.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials in d variables of total degree exactly s, in lex order.
pub fn monomials_of_degree(d: usize, s: usize) -> Vec<Monomial> {
    assert!(d >= 1);
    let mut out = Vec::new();
    let mut current = vec![0u32; d];
    fill(&mut out, &mut current, 0, s);
    fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, rest: usize) {
        if pos + 1 == current.len() {
            current[pos] = rest as u32;
            out.push(Monomial::new(current.clone()));
            return;
        }
        for e in (0..=rest).rev() {
            current[pos] = e as u32;
            fill(out, current, pos + 1, rest - e);
        }
        current[pos] = 0;
    }
    out
}

/// All monomials of total degree < s, ordered by degree then lex.
pub fn monomials_below(d: usize, s: usize) -> Vec<Monomial> {
    (0..s).flat_map(|t| monomials_of_degree(d, t)).collect()
}

/// A sparse multivariate polynomial over one field; no zero terms stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    d: usize,
    field: FieldSpec,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(d: usize, field: FieldSpec) -> Self {
        Poly { d, field, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, field: FieldSpec, c: i64) -> Self {
        Poly::term(d, field, Monomial::one(d), field.from_i64(c))
    }

    pub fn one(d: usize, field: FieldSpec) -> Self {
        Poly::constant(d, field, 1)
    }

    /// The i-th variable as a polynomial.
    pub fn var(d: usize, field: FieldSpec, i: usize) -> Self {
        Poly::term(d, field, Monomial::var(d, i), field.one())
    }

    pub fn term(d: usize, field: FieldSpec, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.d(), d);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { d, field, terms }
    }

    pub fn from_terms(d: usize, field: FieldSpec, list: Vec<(Monomial, Scalar)>) -> Self {
        let mut p = Poly::zero(d, field);
        for (m, c) in list {
            p.add_term(m, c);
        }
        p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// A single-term polynomial (a scalar multiple of a monomial).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The order valuation: minimum total degree of a term; None for 0.
    pub fn ord(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Constant term (value at the origin); zero scalar if absent.
    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&Monomial::one(self.d)).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// A unit of the local ring: nonzero constant term.
    pub fn is_local_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        assert_eq!(m.d(), self.d);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.d, other.d, "variable-count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.d, self.field);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        let terms = self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect();
        Poly { d: self.d, field: self.field, terms }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.d, other.d, "variable-count mismatch");
        let mut out = Poly::zero(self.d, self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// Drop all terms of total degree > max_deg (the image in R/m^{max_deg+1}
    /// on polynomial representatives).
    pub fn truncate(&self, max_deg: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() <= max_deg)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly { d: self.d, field: self.field, terms }
    }

    pub fn pow(&self, n: usize) -> Poly {
        let mut out = Poly::one(self.d, self.field);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = default_var_names(self.d);
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            let mut parts = Vec::new();
            if mag != "1" || m.degree() == 0 {
                parts.push(mag);
            }
            for (j, &e) in m.exponents.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(names[j].clone()),
                    _ => parts.push(format!("{}^{}", names[j], e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Fallback variable names for display: x, y, z, w, then x5, x6, …
pub fn default_var_names(d: usize) -> Vec<String> {
    (0..d)
        .map(|i| match i {
            0 => "x".to_string(),
            1 => "y".to_string(),
            2 => "z".to_string(),
            3 => "w".to_string(),
            _ => format!("x{}", i + 1),
        })
        .collect()
}

/// An ideal of R by generator list; zero generators are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MIdeal {
    d: usize,
    field: FieldSpec,
    gens: Vec<Poly>,
}

impl MIdeal {
    pub fn new(d: usize, field: FieldSpec, gens: Vec<Poly>) -> Self {
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for g in gens {
            assert_eq!(g.d(), d, "variable-count mismatch");
            if !g.is_zero() && seen.insert(g.clone()) {
                kept.push(g);
            }
        }
        MIdeal { d, field, gens: kept }
    }

    pub fn zero(d: usize, field: FieldSpec) -> Self {
        MIdeal { d, field, gens: Vec::new() }
    }

    pub fn unit(d: usize, field: FieldSpec) -> Self {
        MIdeal::new(d, field, vec![Poly::one(d, field)])
    }

    /// The maximal ideal m = (x₁,…,x_d).
    pub fn maximal(d: usize, field: FieldSpec) -> Self {
        MIdeal::new(d, field, (0..d).map(|i| Poly::var(d, field, i)).collect())
    }

    /// m^s by monomial generators.
    pub fn maximal_power(d: usize, field: FieldSpec, s: usize) -> Self {
        MIdeal::new(
            d,
            field,
            monomials_of_degree(d, s)
                .into_iter()
                .map(|m| Poly::term(d, field, m, field.one()))
                .collect(),
        )
    }

    /// A monomial ideal from exponent vectors.
    pub fn monomial(d: usize, field: FieldSpec, exps: &[Vec<u32>]) -> Self {
        MIdeal::new(
            d,
            field,
            exps.iter()
                .map(|e| Poly::term(d, field, Monomial::new(e.clone()), field.one()))
                .collect(),
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_monomial_ideal(&self) -> bool {
        self.gens.iter().all(Poly::is_monomial)
    }

    /// ord(I) = min over generators of ord.
    pub fn ord(&self) -> Option<usize> {
        self.gens.iter().filter_map(Poly::ord).min()
    }

    /// Exponent vectors of a monomial ideal's generators.
    fn monomial_exponents(&self) -> Vec<Monomial> {
        self.gens
            .iter()
            .map(|g| g.terms().next().expect("nonzero").0.clone())
            .collect()
    }

    /// The smallest s with m^s ⊆ I, certified; Err(NotFiniteColength) if no
    /// s ≤ s_max certifies.
    pub fn mprimary_exponent(&self, s_max: usize) -> Result<usize> {
        if self.gens.iter().any(Poly::is_local_unit) {
            return Ok(0);
        }
        if self.is_monomial_ideal() {
            let gens = self.monomial_exponents();
            for s in 1..=s_max {
                if monomials_of_degree(self.d, s)
                    .iter()
                    .all(|mu| gens.iter().any(|g| g.divides(mu)))
                {
                    return Ok(s);
                }
            }
            return Err(Error::NotFiniteColength { s_max });
        }
        cert::certify(self.d, self.field, 1, &self.columns(), s_max).map(|c| c.exponent())
    }

    /// λ(R/I); requires the certificate.
    pub fn colength(&self, s_max: usize) -> Result<usize> {
        if self.gens.iter().any(Poly::is_local_unit) {
            return Ok(0);
        }
        if self.is_monomial_ideal() {
            let s = self.mprimary_exponent(s_max)?;
            let gens = self.monomial_exponents();
            // Basis of R/I: monomials outside I; all of degree < s.
            return Ok(monomials_below(self.d, s)
                .iter()
                .filter(|mu| !gens.iter().any(|g| g.divides(mu)))
                .count());
        }
        cert::certify(self.d, self.field, 1, &self.columns(), s_max).map(|c| c.colength())
    }

    /// Exact membership f ∈ I, decided through the certificate.
    pub fn contains(&self, f: &Poly, s_max: usize) -> Result<bool> {
        assert_eq!(f.d(), self.d, "variable-count mismatch");
        if f.is_zero() {
            return Ok(true);
        }
        if self.is_monomial_ideal() && !self.gens.iter().any(Poly::is_local_unit) {
            // Monomial ideals contain f iff they contain every term of f.
            let gens = self.monomial_exponents();
            return Ok(f.terms().all(|(m, _)| gens.iter().any(|g| g.divides(m))));
        }
        let c = cert::certify(self.d, self.field, 1, &self.columns(), s_max)?;
        Ok(c.contains(&[f.clone()]))
    }

    /// Certified I ⊇ J (every generator of J lies in I).
    pub fn contains_ideal(&self, other: &MIdeal, s_max: usize) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g, s_max)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Certified ideal equality by mutual containment.
    pub fn equals(&self, other: &MIdeal, s_max: usize) -> Result<bool> {
        Ok(self.contains_ideal(other, s_max)? && other.contains_ideal(self, s_max)?)
    }

    pub fn product(&self, other: &MIdeal) -> MIdeal {
        assert_eq!(self.d, other.d, "variable-count mismatch");
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        MIdeal::new(self.d, self.field, gens)
    }

    pub fn power(&self, n: usize) -> MIdeal {
        let mut out = MIdeal::unit(self.d, self.field);
        for _ in 0..n {
            out = out.product(self);
        }
        out
    }

    pub fn sum(&self, other: &MIdeal) -> MIdeal {
        assert_eq!(self.d, other.d, "variable-count mismatch");
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        MIdeal::new(self.d, self.field, gens)
    }

    /// Generators as rank-1 module columns (for the certificate engine).
    fn columns(&self) -> Vec<Vec<Poly>> {
        self.gens.iter().map(|g| vec![g.clone()]).collect()
    }
}

/// Parse error for polynomial text, with a byte offset into the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for PolyParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.offset + 1, self.message)
    }
}

/// Parse `3*x^2*y - y^3` style polynomial text over the named variables.
///
/// Grammar: sum of terms, each a `*`-separated product of integer literals
/// and powers `var^nat`; no parentheses, no juxtaposition.
pub fn parse_poly(src: &str, vars: &[String], field: FieldSpec) -> std::result::Result<Poly, PolyParseError> {
    let d = vars.len();
    let b = src.as_bytes();
    let mut pos = 0usize;

    fn skip_ws(b: &[u8], pos: &mut usize) {
        while *pos < b.len() && (b[*pos] == b' ' || b[*pos] == b'\t') {
            *pos += 1;
        }
    }

    fn err<T>(offset: usize, message: impl Into<String>) -> std::result::Result<T, PolyParseError> {
        Err(PolyParseError { offset, message: message.into() })
    }

    fn integer(b: &[u8], pos: &mut usize) -> std::result::Result<i64, PolyParseError> {
        let start = *pos;
        while *pos < b.len() && b[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == start {
            return err(start, "expected a digit");
        }
        std::str::from_utf8(&b[start..*pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| PolyParseError { offset: start, message: "integer too large".into() })
    }

    fn identifier(b: &[u8], pos: &mut usize) -> String {
        let start = *pos;
        while *pos < b.len() && (b[*pos].is_ascii_alphanumeric() || b[*pos] == b'_') {
            *pos += 1;
        }
        String::from_utf8_lossy(&b[start..*pos]).into_owned()
    }

    let mut result = Poly::zero(d, field);
    skip_ws(b, &mut pos);
    if pos == b.len() {
        return err(pos, "empty polynomial");
    }
    loop {
        // Sign of the term.
        let mut negative = false;
        if pos < b.len() && (b[pos] == b'+' || b[pos] == b'-') {
            negative = b[pos] == b'-';
            pos += 1;
            skip_ws(b, &mut pos);
        }
        // Product of factors.
        let mut coeff = field.from_i64(if negative { -1 } else { 1 });
        let mut mono = Monomial::one(d);
        loop {
            skip_ws(b, &mut pos);
            if pos >= b.len() {
                return err(pos, "expected a factor");
            }
            if b[pos].is_ascii_digit() {
                let n = integer(b, &mut pos)?;
                coeff = &coeff * &field.from_i64(n);
            } else if b[pos].is_ascii_alphabetic() || b[pos] == b'_' {
                let at = pos;
                let name = identifier(b, &mut pos);
                let Some(i) = vars.iter().position(|v| *v == name) else {
                    return err(at, format!("unknown variable `{}`", name));
                };
                let mut e = 1u32;
                skip_ws(b, &mut pos);
                if pos < b.len() && b[pos] == b'^' {
                    pos += 1;
                    skip_ws(b, &mut pos);
                    if pos >= b.len() || !b[pos].is_ascii_digit() {
                        return err(pos, "expected an exponent after `^`");
                    }
                    let n = integer(b, &mut pos)?;
                    e = u32::try_from(n)
                        .map_err(|_| PolyParseError { offset: pos, message: "exponent too large".into() })?;
                }
                mono.exponents[i] += e;
            } else {
                return err(pos, format!("unexpected character `{}`", b[pos] as char));
            }
            skip_ws(b, &mut pos);
            if pos < b.len() && b[pos] == b'*' {
                pos += 1;
                continue;
            }
            break;
        }
        result.add_term(mono, coeff);
        skip_ws(b, &mut pos);
        if pos == b.len() {
            break;
        }
        if b[pos] != b'+' && b[pos] != b'-' {
            return err(pos, format!("expected `+`, `-`, or end, found `{}`", b[pos] as char));
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binom;
    use crate::DEFAULT_S_MAX;

    fn k() -> FieldSpec {
        FieldSpec::default()
    }

    fn p(src: &str) -> Poly {
        parse_poly(src, &default_var_names(2), k()).unwrap()
    }

    #[test]
    fn monomial_enumeration() {
        let deg2 = monomials_of_degree(2, 2);
        let exps: Vec<Vec<u32>> = deg2.iter().map(|m| m.exponents.clone()).collect();
        assert_eq!(exps, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials_below(2, 3).len(), 6);
        assert_eq!(monomials_of_degree(3, 4).len(), binom(6, 2) as usize);
    }

    #[test]
    fn poly_arithmetic() {
        assert_eq!(p("x + y").mul(&p("x - y")), p("x^2 - y^2"));
        assert_eq!(p("x^2 + x^5").truncate(3), p("x^2"));
        assert_eq!(p("x + y").pow(3), p("x^3 + 3*x^2*y + 3*x*y^2 + y^3"));
        assert_eq!(p("x - x"), Poly::zero(2, k()));
        assert_eq!(p("x + y").sub(&p("y")), p("x"));
    }

    #[test]
    fn poly_ord_and_units() {
        assert_eq!(p("x^2 + y^3").ord(), Some(2));
        assert_eq!(p("1 + x").ord(), Some(0));
        assert_eq!(Poly::zero(2, k()).ord(), None);
        assert!(p("2 + x").is_local_unit());
        assert!(!p("x + y^5").is_local_unit());
    }

    #[test]
    fn poly_display_roundtrip() {
        for src in ["x^3 + 3*x^2*y - y^3", "-x + 2*y", "5", "x*y"] {
            let q = p(src);
            assert_eq!(p(&q.to_string()), q, "display of {}", src);
        }
        assert_eq!(Poly::zero(2, k()).to_string(), "0");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let vars = default_var_names(2);
        let e = parse_poly("y^", &vars, k()).unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse_poly("x + z", &vars, k()).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.message.contains('z'));
        assert!(parse_poly("", &vars, k()).is_err());
        assert!(parse_poly("x y", &vars, k()).is_err(), "juxtaposition is not allowed");
    }

    #[test]
    fn mprimary_exponents() {
        let m = MIdeal::maximal(2, k());
        assert_eq!(m.mprimary_exponent(DEFAULT_S_MAX).unwrap(), 1);
        let m2 = MIdeal::maximal_power(2, k(), 2);
        assert_eq!(m2.mprimary_exponent(DEFAULT_S_MAX).unwrap(), 2);
        let i = MIdeal::new(2, k(), vec![p("x"), p("y^2 - x^2")]);
        assert_eq!(i.mprimary_exponent(DEFAULT_S_MAX).unwrap(), 2);
        // (x) alone has infinite colength.
        let principal = MIdeal::new(2, k(), vec![p("x")]);
        assert!(matches!(
            principal.mprimary_exponent(6),
            Err(Error::NotFiniteColength { s_max: 6 })
        ));
        assert_eq!(MIdeal::unit(2, k()).mprimary_exponent(DEFAULT_S_MAX).unwrap(), 0);
    }

    #[test]
    fn colengths() {
        assert_eq!(MIdeal::maximal(2, k()).colength(DEFAULT_S_MAX).unwrap(), 1);
        let i = MIdeal::new(2, k(), vec![p("x"), p("y^2 - x^2")]);
        assert_eq!(i.colength(DEFAULT_S_MAX).unwrap(), 2);
        let stair = MIdeal::new(2, k(), vec![p("x^3"), p("y^4")]);
        assert_eq!(stair.colength(DEFAULT_S_MAX).unwrap(), 12);
        assert_eq!(MIdeal::unit(2, k()).colength(DEFAULT_S_MAX).unwrap(), 0);
    }

    #[test]
    fn maximal_power_colengths_match_binomials() {
        for d in 1..=3usize {
            for s in 0..=6usize {
                let lhs = MIdeal::maximal_power(d, k(), s).colength(DEFAULT_S_MAX).unwrap();
                assert_eq!(lhs as i64, binom(s + d - 1, d), "d={} s={}", d, s);
            }
        }
    }

    #[test]
    fn membership() {
        let m2 = MIdeal::maximal_power(2, k(), 2);
        assert!(m2.contains(&p("x*y"), DEFAULT_S_MAX).unwrap());
        assert!(!m2.contains(&p("x"), DEFAULT_S_MAX).unwrap());
        let i = MIdeal::new(2, k(), vec![p("x^2"), p("y^2")]);
        assert!(!i.contains(&p("x*y"), DEFAULT_S_MAX).unwrap());
        // Non-monomial membership: y^2 = (y^2 - x^2) + x·x.
        let j = MIdeal::new(2, k(), vec![p("x"), p("y^2 - x^2")]);
        assert!(j.contains(&p("y^2"), DEFAULT_S_MAX).unwrap());
        assert!(!j.contains(&p("y"), DEFAULT_S_MAX).unwrap());
    }

    #[test]
    fn products_powers_sums() {
        let m = MIdeal::maximal(2, k());
        let m2 = m.product(&m);
        assert_eq!(m2.colength(DEFAULT_S_MAX).unwrap(), 3);
        assert!(m2.equals(&MIdeal::maximal_power(2, k(), 2), DEFAULT_S_MAX).unwrap());
        assert_eq!(m.power(0).gens().len(), 1);
        assert_eq!(m.power(0).colength(DEFAULT_S_MAX).unwrap(), 0);
        let a = MIdeal::new(2, k(), vec![p("x"), p("y^2")]);
        let b = MIdeal::new(2, k(), vec![p("x^2"), p("y")]);
        assert_eq!(a.product(&b).colength(DEFAULT_S_MAX).unwrap(), 5);
        let s = a.sum(&b);
        assert_eq!(s.colength(DEFAULT_S_MAX).unwrap(), 1);
    }

    #[test]
    fn exponent_certificate_roundtrip() {
        let i = MIdeal::new(2, k(), vec![p("x^2 + y"), p("y^3")]);
        let s = i.mprimary_exponent(DEFAULT_S_MAX).unwrap();
        for mu in monomials_of_degree(2, s) {
            let f = Poly::term(2, k(), mu, k().one());
            assert!(i.contains(&f, DEFAULT_S_MAX).unwrap());
        }
        assert!(monomials_of_degree(2, s - 1).iter().any(|mu| {
            let f = Poly::term(2, k(), mu.clone(), k().one());
            !i.contains(&f, DEFAULT_S_MAX).unwrap()
        }));
    }

    #[test]
    fn colength_presentation_invariance() {
        let i = MIdeal::new(2, k(), vec![p("x^2"), p("x*y + y^3")]);
        let base = i.colength(DEFAULT_S_MAX).unwrap();
        // Appending redundant generators changes nothing.
        let j = MIdeal::new(
            2,
            k(),
            vec![p("x^2"), p("x*y + y^3"), p("x^2").mul(&p("y")), p("x*y + y^3").mul(&p("x + 1"))],
        );
        assert_eq!(j.colength(DEFAULT_S_MAX).unwrap(), base);
    }

    #[test]
    fn superadditivity_on_random_monomial_ideals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let a = rng.gen_range(1..=3u32);
                let b = rng.gen_range(1..=3u32);
                let mut exps = vec![vec![a, 0], vec![0, b]];
                if rng.gen_bool(0.5) {
                    exps.push(vec![rng.gen_range(0..=a), rng.gen_range(0..=b)]);
                }
                MIdeal::monomial(2, FieldSpec::default(), &exps)
            };
            let i = mk(&mut rng);
            let j = mk(&mut rng);
            let li = i.colength(DEFAULT_S_MAX).unwrap();
            let lj = j.colength(DEFAULT_S_MAX).unwrap();
            let lij = i.product(&j).colength(DEFAULT_S_MAX).unwrap();
            assert!(lij >= li + lj, "superadditivity failed: {} < {} + {}", lij, li, lj);
        }
    }

    #[test]
    fn rational_backend_agrees() {
        let vars = default_var_names(2);
        for gens in [vec!["x", "y^2 - x^2"], vec!["x^2 - y^3", "x*y"]] {
            let over = |field: FieldSpec| {
                let gs = gens.iter().map(|s| parse_poly(s, &vars, field).unwrap()).collect();
                MIdeal::new(2, field, gs).colength(DEFAULT_S_MAX).unwrap()
            };
            assert_eq!(over(FieldSpec::default()), over(FieldSpec::Q));
        }
    }
}
