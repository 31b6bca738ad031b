//! The coefficient field: a prime field F_p (default p = 32003) or Q.
//!
//! Scalars are exact.  F_p elements are canonical residues in [0, p) with the
//! prime carried alongside the value so arithmetic never needs a ring context;
//! rationals are arbitrary-precision and kept in lowest terms by `num`.
//! A large prime (p > 10⁴ required) stands in for the "infinite residue
//! field" genericity the theory assumes: a random draw lands outside any fixed
//! low-degree hypersurface with probability 1 − O(deg/p).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Which field the artifact is working over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// Prime field F_p.
    Fp(u64),
    /// The rational numbers.
    Q,
}

/// The default prime, large enough for genericity and small enough that
/// products of residues stay inside u64.
pub const DEFAULT_PRIME: u64 = 32003;

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Fp(DEFAULT_PRIME)
    }
}

impl FieldSpec {
    /// Validated prime-field constructor: p must be prime, exceed 10⁴
    /// (genericity floor) and fit in 31 bits (so products fit in u64).
    pub fn fp(p: u64) -> Result<FieldSpec, String> {
        if p <= 10_000 {
            return Err(format!("prime {p} too small: the field must have more than 10^4 elements"));
        }
        if p >= 1 << 31 {
            return Err(format!("prime {p} too large: must fit in 31 bits"));
        }
        if !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        Ok(FieldSpec::Fp(p))
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Fp(p) => Scalar::Fp { v: 0, p },
            FieldSpec::Q => Scalar::Rat(Box::new(BigRational::zero())),
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Fp(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { v: r, p }
            }
            FieldSpec::Q => Scalar::Rat(Box::new(BigRational::from_integer(BigInt::from(n)))),
        }
    }

    /// Uniform draw from F_p; over Q, a uniform integer in [0, 32003)
    /// (uniform sampling of Q is impossible and genericity only needs a
    /// large finite sample set).
    pub fn random<R: Rng>(self, rng: &mut R) -> Scalar {
        match self {
            FieldSpec::Fp(p) => Scalar::Fp { v: rng.gen_range(0..p), p },
            FieldSpec::Q => self.from_i64(rng.gen_range(0..DEFAULT_PRIME as i64)),
        }
    }

    /// A nonzero uniform draw.
    pub fn random_nonzero<R: Rng>(self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { v: u64, p: u64 },
    Rat(Box<BigRational>),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Fp { p, .. } => FieldSpec::Fp(*p),
            Scalar::Rat(_) => FieldSpec::Q,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    /// Multiplicative inverse; None for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Fp { v, p } => {
                if *v == 0 {
                    None
                } else {
                    Some(Scalar::Fp { v: pow_mod(*v, *p - 2, *p), p: *p })
                }
            }
            Scalar::Rat(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(Box::new(r.recip())))
                }
            }
        }
    }

    /// Exact division; panics on division by zero (internal contract).
    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

fn same_prime(a: u64, b: u64) -> u64 {
    debug_assert_eq!(a, b, "mixed prime fields");
    a
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                let p = same_prime(*p, *q);
                let s = a + b;
                Scalar::Fp { v: if s >= p { s - p } else { s }, p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(&**a + &**b)),
            _ => panic!("mixed scalar fields"),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Fp { v: if a >= b { a - b } else { a + p - b }, p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(&**a - &**b)),
            _ => panic!("mixed scalar fields"),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                let p = same_prime(*p, *q);
                Scalar::Fp { v: a * b % p, p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(&**a * &**b)),
            _ => panic!("mixed scalar fields"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Fp { v, p } => Scalar::Fp { v: if *v == 0 { 0 } else { p - v }, p: *p },
            Scalar::Rat(r) => Scalar::Rat(Box::new(-&**r)),
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { v, .. } => write!(f, "{v}"),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else if r.is_negative() {
                    write!(f, "-{}/{}", r.numer().abs(), r.denom())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3u64;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_axioms_fp() {
        let k = FieldSpec::default();
        let a = k.from_i64(-7);
        assert_eq!(a, k.from_i64(DEFAULT_PRIME as i64 - 7));
        let b = k.from_i64(11);
        assert_eq!(&(&a + &b) - &b, a);
        let inv = b.inv().unwrap();
        assert!((&b * &inv).is_one());
        assert!(k.zero().inv().is_none());
    }

    #[test]
    fn field_axioms_q() {
        let k = FieldSpec::Q;
        let a = k.from_i64(3);
        let half = k.from_i64(1).div(&k.from_i64(2));
        assert_eq!(&half + &half, k.one());
        assert_eq!(&a * &half.inv().unwrap(), k.from_i64(6));
    }

    #[test]
    fn prime_validation() {
        assert!(FieldSpec::fp(32003).is_ok());
        assert!(FieldSpec::fp(32004).is_err()); // composite
        assert!(FieldSpec::fp(101).is_err()); // too small
    }

    #[test]
    fn seeded_draws_are_deterministic() {
        let k = FieldSpec::default();
        let mut r1 = ChaCha8Rng::seed_from_u64(42);
        let mut r2 = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            assert_eq!(k.random(&mut r1), k.random(&mut r2));
        }
    }
}
