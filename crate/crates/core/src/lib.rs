//! Core of the sunsieve workbench: exact integer arithmetic, the sifted
//! polynomial sequences with their local/global densities and sifting
//! counts, the linear-sieve function pair, and Richert's weighted sieve.

pub mod arith;
pub mod polyseq;
pub mod sievefn;
pub mod weighted;

pub use arith::{factorize, is_prime, mobius, primes_up_to, FactoredInteger, PrimeTable};
pub use polyseq::{DensityProfile, RemainderSample, SiftedSequence, Variant, MAX_N};
pub use sievefn::{
    d_closed, e_gamma, main_term_constant, make_weight_config, richert_integral,
    SieveFunctionTable, WeightConfig,
};
pub use weighted::{
    almost_prime_census, selberg_bound_check, weighted_count, WeightedSieveReport,
};

/// Rejected input for an operation with a stated precondition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    BadArgument(String),
    NotSquarefree(u64),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::BadArgument(msg) => write!(f, "{msg}"),
            Error::NotSquarefree(d) => write!(f, "{d} is not squarefree"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
