//! Integer arithmetic primitives: prime enumeration, deterministic
//! primality, complete factorization, and the Mobius function.

mod factor;
mod primality;

pub use factor::{factorize, factorize_with, FactoredInteger, DEFAULT_TRIAL_BOUND};
pub use primality::is_prime;

pub(crate) use primality::{mulmod64, powmod64};

/// All primes strictly below `bound`, ascending.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    pub bound: u64,
    pub primes: Vec<u64>,
}

impl PrimeTable {
    pub fn up_to(bound: u64) -> PrimeTable {
        assert!(bound >= 2, "prime table bound must be at least 2");
        let mut composite = vec![false; bound as usize];
        let mut primes = Vec::new();
        for m in 2..bound as usize {
            if composite[m] {
                continue;
            }
            primes.push(m as u64);
            let mut k = m * m;
            while k < bound as usize {
                composite[k] = true;
                k += m;
            }
        }
        PrimeTable { bound, primes }
    }

    pub fn contains(&self, m: u64) -> bool {
        m < self.bound && self.primes.binary_search(&m).is_ok()
    }
}

pub fn primes_up_to(bound: u64) -> PrimeTable {
    PrimeTable::up_to(bound)
}

/// 0 for non-squarefree d, otherwise (-1)^(number of prime divisors).
pub fn mobius(d: u64) -> i32 {
    assert!(d >= 1, "mobius is defined for positive integers");
    let f = factorize(d as u128);
    if !f.is_squarefree() {
        return 0;
    }
    if f.small_omega() % 2 == 0 {
        1
    } else {
        -1
    }
}
