//! Shared seeded generators for the integration test suites.  Everything is
//! deterministic in the provided RNG, so failures reproduce from the seed.

use brmult_core::localring::{MIdeal, Poly};
use brmult_core::scalar::FieldSpec;
use brmult_core::submod::Submodule;
use rand::Rng;

pub fn k() -> FieldSpec {
    FieldSpec::default()
}

/// A random m-primary monomial ideal in k[x, y]: pure powers x^a, y^b plus a
/// few interior staircase points.  Not necessarily integrally closed.
pub fn random_monomial_ideal<R: Rng>(rng: &mut R, field: FieldSpec, max_order: u32) -> MIdeal {
    let a = rng.gen_range(1..=max_order);
    let b = rng.gen_range(1..=max_order);
    let mut exps = vec![vec![a, 0], vec![0, b]];
    if a > 1 && b > 1 {
        for _ in 0..rng.gen_range(0..=2u32) {
            exps.push(vec![rng.gen_range(1..a), rng.gen_range(1..b)]);
        }
    }
    MIdeal::monomial(2, field, &exps)
}

/// A random m-primary ideal with monomial and binomial generators: the pure
/// powers keep it m-primary, the binomial leaves the monomial world.
pub fn random_binomial_ideal<R: Rng>(rng: &mut R, field: FieldSpec, max_order: u32) -> MIdeal {
    let base = random_monomial_ideal(rng, field, max_order);
    let mut gens: Vec<Poly> = base.gens().to_vec();
    let (i, j) = (rng.gen_range(1..=max_order), rng.gen_range(1..=max_order));
    let (l, m) = (rng.gen_range(0..=max_order), rng.gen_range(1..=max_order));
    let c = field.from_i64(rng.gen_range(1..=5));
    let mono = |e1: u32, e2: u32| {
        Poly::one(2, field).mul_monomial(&brmult_core::localring::Monomial::new(vec![e1, e2]))
    };
    gens.push(mono(i, j).add(&mono(l, m).scale(&c)));
    MIdeal::new(2, field, gens)
}

/// A random finite-colength submodule of R^rank over k[x, y]: block-diagonal
/// monomial-ideal columns (guaranteeing finite colength) plus a few dense
/// mixing columns.
pub fn random_module<R: Rng>(rng: &mut R, field: FieldSpec, rank: usize, max_order: u32) -> Submodule {
    let mut columns: Vec<Vec<Poly>> = Vec::new();
    for slot in 0..rank {
        let ideal = random_monomial_ideal(rng, field, max_order);
        for g in ideal.gens() {
            let mut col = vec![Poly::zero(2, field); rank];
            col[slot] = g.clone();
            columns.push(col);
        }
    }
    for _ in 0..rng.gen_range(0..=2usize) {
        columns.push((0..rank).map(|_| random_poly(rng, field, 2)).collect());
    }
    Submodule::new(2, field, rank, columns)
}

/// A random polynomial in m of the given max degree (no constant term).
pub fn random_poly<R: Rng>(rng: &mut R, field: FieldSpec, max_deg: u32) -> Poly {
    let mut p = Poly::zero(2, field);
    for e1 in 0..=max_deg {
        for e2 in 0..=max_deg - e1 {
            if e1 + e2 == 0 || rng.gen_bool(0.5) {
                continue;
            }
            let c = field.from_i64(rng.gen_range(-3..=3));
            p = p.add(
                &Poly::one(2, field)
                    .mul_monomial(&brmult_core::localring::Monomial::new(vec![e1, e2]))
                    .scale(&c),
            );
        }
    }
    p
}
