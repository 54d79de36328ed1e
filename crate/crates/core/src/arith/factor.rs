//! Complete factorization: trial division by a shared prime table with
//! periodic cofactor primality checks, then Brent's cycle finder with a
//! deterministic retry schedule for whatever survives.

use std::sync::OnceLock;

use super::primality::is_prime;
use super::PrimeTable;

/// Default trial-division ceiling; elements reach n^3 at the default
/// scan scale, and factors past this are cheap for the cycle finder.
pub const DEFAULT_TRIAL_BOUND: u64 = 100_000;

fn trial_table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| PrimeTable::up_to(DEFAULT_TRIAL_BOUND))
}

/// An integer with its full prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    pub value: u128,
    /// Ascending (prime, exponent) pairs.
    pub factors: Vec<(u128, u32)>,
}

impl FactoredInteger {
    /// Prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Distinct prime factors.
    pub fn small_omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn recompose(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product()
    }
}

pub fn factorize(m: u128) -> FactoredInteger {
    factorize_with(m, trial_table())
}

// Cofactor primality is re-checked at these table positions so that a
// large prime cofactor ends the trial pass early.
const CHECK_AFTER: [usize; 3] = [25, 168, 1229];

pub fn factorize_with(m: u128, table: &PrimeTable) -> FactoredInteger {
    assert!(m >= 1, "factorize is defined for positive integers");
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut rest = m;
    let primes = &table.primes;
    let mut idx = 0;

    // 128-bit lane until the cofactor fits a machine word.
    while rest > u64::MAX as u128 && idx < primes.len() {
        let p = primes[idx] as u128;
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        idx += 1;
    }

    if rest <= u64::MAX as u128 {
        let mut r = rest as u64;
        let mut next_check = CHECK_AFTER.iter().position(|&c| c > idx).unwrap_or(CHECK_AFTER.len());
        while idx < primes.len() && r > 1 {
            let p = primes[idx];
            if p * p > r {
                break;
            }
            if r % p == 0 {
                let mut e = 0;
                while r % p == 0 {
                    r /= p;
                    e += 1;
                }
                factors.push((p as u128, e));
            }
            idx += 1;
            if next_check < CHECK_AFTER.len() && idx == CHECK_AFTER[next_check] {
                next_check += 1;
                if r > 1 && is_prime(r as u128) {
                    break;
                }
            }
        }
        rest = r as u128;
    }

    if rest > 1 {
        // The trial pass leaves a cofactor that is prime or has every
        // factor past the point where the loop stopped.
        if is_prime(rest) {
            push_factor(&mut factors, rest);
        } else {
            let mut stack = vec![rest];
            while let Some(c) = stack.pop() {
                if is_prime(c) {
                    push_factor(&mut factors, c);
                    continue;
                }
                let d = split(c);
                stack.push(d);
                stack.push(c / d);
            }
        }
    }

    factors.sort_unstable();
    merge_equal(&mut factors);
    FactoredInteger { value: m, factors }
}

fn push_factor(factors: &mut Vec<(u128, u32)>, p: u128) {
    factors.push((p, 1));
}

fn merge_equal(factors: &mut Vec<(u128, u32)>) {
    let mut merged: Vec<(u128, u32)> = Vec::with_capacity(factors.len());
    for &(p, e) in factors.iter() {
        match merged.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => merged.push((p, e)),
        }
    }
    *factors = merged;
}

/// One nontrivial factor of an odd composite with no small prime factors.
/// The polynomial parameter steps deterministically until a split lands.
fn split(n: u128) -> u128 {
    for c in 1..=200u128 {
        if let Some(d) = brent(n, c) {
            return d;
        }
    }
    panic!("cycle finder exhausted its retry schedule on {n}");
}

fn brent(n: u128, c: u128) -> Option<u128> {
    if n <= u64::MAX as u128 {
        return brent64(n as u64, c as u64).map(u128::from);
    }
    brent_wide(n, c)
}

fn gcd64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_wide(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

const BATCH: u64 = 128;

fn brent64(n: u64, c: u64) -> Option<u64> {
    use super::primality::mulmod64;
    let f = |x: u64| (mulmod64(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mulmod64(q, x.abs_diff(y), n);
            }
            g = gcd64(q, n);
            k += BATCH;
        }
        r <<= 1;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_wide(n: u128, c: u128) -> Option<u128> {
    let sq = |x: u128| {
        // Same shift-add scheme as the primality lane.
        let mut acc = 0u128;
        let mut bit = if x == 0 { 0 } else { 1u128 << (127 - x.leading_zeros()) };
        while bit > 0 {
            acc = (acc << 1) % n;
            if x & bit != 0 {
                acc = (acc + x) % n;
            }
            bit >>= 1;
        }
        acc
    };
    let f = |x: u128| (sq(x) + c) % n;
    let mulmod = |a: u128, b: u128| -> u128 {
        let mut acc = 0u128;
        let mut bit = if b == 0 { return 0 } else { 1u128 << (127 - b.leading_zeros()) };
        let a = a % n;
        while bit > 0 {
            acc = (acc << 1) % n;
            if b & bit != 0 {
                acc = (acc + a) % n;
            }
            bit >>= 1;
        }
        acc
    };
    let mut y = 2u128;
    let mut r = 1u64;
    let mut q = 1u128;
    let mut g = 1u128;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mulmod(q, x.abs_diff(y));
            }
            g = gcd_wide(q, n);
            k += BATCH;
        }
        r <<= 1;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_wide(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn small_examples() {
        let f = factorize(12);
        assert_eq!(f.factors, vec![(2, 2), (3, 1)]);
        assert_eq!(f.big_omega(), 3);
        assert_eq!(f.small_omega(), 2);

        let f = factorize(139);
        assert_eq!(f.factors, vec![(139, 1)]);
        assert_eq!(f.big_omega(), 1);

        let f = factorize(1);
        assert!(f.factors.is_empty());
        assert_eq!(f.big_omega(), 0);
    }

    #[test]
    fn recompose_exhaustive_small() {
        for m in 1..=5000u128 {
            let f = factorize(m);
            assert_eq!(f.recompose(), m);
            for &(p, _) in &f.factors {
                assert!(is_prime(p), "listed factor {p} of {m}");
            }
        }
    }

    #[test]
    fn recompose_random_and_structured() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
        for _ in 0..300 {
            let m: u64 = rng.gen_range(2..u64::MAX);
            let f = factorize(m as u128);
            assert_eq!(f.recompose(), m as u128);
        }
        // Past the 64-bit boundary and squares of large primes.
        for m in [
            (1u128 << 64) + 13,
            ((1u128 << 61) - 1) * 179,
            1_000_000_000_039u128 * 1_000_000_000_061,
            1_000_000_007u128 * 1_000_000_007,
        ] {
            let f = factorize(m);
            assert_eq!(f.recompose(), m, "m = {m}");
            for &(p, _) in &f.factors {
                assert!(is_prime(p));
            }
        }
    }

    #[test]
    fn omega_additive_on_coprime_pairs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(31);
        let mut done = 0;
        while done < 200 {
            let a: u64 = rng.gen_range(2..1_000_000_000);
            let b: u64 = rng.gen_range(2..1_000_000_000);
            if gcd64(a, b) != 1 {
                continue;
            }
            let fa = factorize(a as u128);
            let fb = factorize(b as u128);
            let fab = factorize(a as u128 * b as u128);
            assert_eq!(fab.big_omega(), fa.big_omega() + fb.big_omega());
            assert_eq!(fab.small_omega(), fa.small_omega() + fb.small_omega());
            done += 1;
        }
    }

    #[test]
    fn squarefree_flag() {
        assert!(factorize(30).is_squarefree());
        assert!(!factorize(12).is_squarefree());
        assert!(factorize(1).is_squarefree());
    }
}
