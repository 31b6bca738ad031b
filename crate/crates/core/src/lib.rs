//! Exact commutative-algebra kernel for joint Buchsbaum–Rim multiplicities.
//!
//! Everything here works over R = k[x₁,…,x_d] localized at the maximal ideal
//! m = (x₁,…,x_d), with k either a large prime field F_p (default p = 32003)
//! or the rationals.  The central trick is a certificate that converts every
//! local-ring question into finite linear algebra: if every degree-s monomial
//! multiple of the ambient basis lies in the truncated span of a submodule's
//! generators, then m^s·F ⊆ M exactly (Krull intersection theorem), and from
//! that point on membership, colength, and minimal-generator counts are plain
//! rank computations over k.  No Gröbner bases, no floating point.
//!
//! Module map:
//! - [`scalar`]: the coefficient field (F_p or Q), exact arithmetic.
//! - [`exactla`]: dense row reduction, rank, kernel, span membership.
//! - [`localring`]: polynomials, monomials, m-primary ideals, colengths.
//! - [`submod`]: finite-colength submodules of free modules, Fitting ideals.
//! - [`symprod`]: symmetric powers, multigraded products, length tables,
//!   finite differences, mixed Buchsbaum–Rim multiplicities.
//! - [`koszul`]: tensor-Koszul H₀ lengths and the determinant comparison.
//! - [`jointred`]: random joint-reduction candidates and their verifiers.
//! - [`icmod`]: the d = 2 integrally closed world: monomial closures,
//!   mixed multiplicities of ideals, and the batch identity verifiers.

pub mod exactla;
pub mod icmod;
pub mod jointred;
pub mod koszul;
pub mod localring;
pub mod scalar;
pub mod submod;
pub mod symprod;

mod cert;

use std::fmt;

/// Default cap for the m-power certificate search (`m^s ⊆ …`).
pub const DEFAULT_S_MAX: usize = 24;
/// Default cap for equational joint-reduction sweeps.
pub const DEFAULT_N_MAX: usize = 6;
/// Default cap on generator columns of constructed products.
pub const DEFAULT_GEN_CAP: usize = 20_000;

/// Search bounds threaded through certificate-backed computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest exponent tried when certifying `m^s ⊆ I` or `m^s F ⊆ M`.
    pub s_max: usize,
    /// Largest n tried in joint-reduction equation sweeps.
    pub n_max: usize,
    /// Hard cap on generator columns of products (guards blow-ups).
    pub gen_cap: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { s_max: DEFAULT_S_MAX, n_max: DEFAULT_N_MAX, gen_cap: DEFAULT_GEN_CAP }
    }
}

impl Bounds {
    /// Bounds with a specific certificate cap, defaults elsewhere.
    pub fn with_s_max(s_max: usize) -> Self {
        Bounds { s_max, ..Bounds::default() }
    }
}

/// Errors shared across the kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// No s ≤ s_max certifies m^s ⊆ I (resp. m^s F ⊆ M); the quotient may
    /// genuinely have infinite length, or the bound may be too small.
    NotFiniteColength { s_max: usize },
    /// A difference/stabilization window is too small for the requested orders.
    WindowTooSmall { needed: Vec<usize>, got: Vec<usize> },
    /// A constructed product would exceed the generator-column cap.
    GeneratorCapExceeded { cols: usize, cap: usize },
    /// The random candidate failed to verify as a joint reduction.
    CandidateNotJointReduction { n_max: usize },
    /// A module required to be local (Fitting ideal a power of m) is not.
    NotLocal,
    /// An endomorphism was requested from a submodule whose generator count
    /// differs from its ambient rank.
    WrongGeneratorCount { rank: usize, gens: usize },
    /// Mixed variable counts or ambient ranks.
    Mismatch(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotFiniteColength { s_max } => {
                write!(f, "no power of the maximal ideal certified inside the target up to s_max = {s_max}; colength may be infinite")
            }
            Error::WindowTooSmall { needed, got } => {
                write!(f, "window too small: need extents at least {needed:?}, got {got:?}")
            }
            Error::GeneratorCapExceeded { cols, cap } => {
                write!(f, "product would have {cols} generator columns, exceeding the cap {cap}")
            }
            Error::CandidateNotJointReduction { n_max } => {
                write!(f, "candidate failed the joint reduction equation for every n ≤ {n_max}")
            }
            Error::NotLocal => write!(f, "module is not local: its Fitting ideal is not a power of the maximal ideal"),
            Error::WrongGeneratorCount { rank, gens } => {
                write!(f, "endomorphism needs exactly {rank} generator columns, found {gens}")
            }
            Error::Mismatch(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Kernel-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Binomial coefficient as i64; zero when k > n.  Panics on overflow,
/// which desk-scale windows never approach.
pub fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as i64)
            .expect("binomial overflow")
            / (i as i64 + 1);
    }
    acc
}
