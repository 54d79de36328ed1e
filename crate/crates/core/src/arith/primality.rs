//! Deterministic Miller-Rabin primality testing.
//!
//! Witness records are published as ground truth, so every answer must be
//! proven, never probabilistic. Two exhaustively verified witness sets
//! cover the supported range: seven bases for 64-bit inputs, and the first
//! thirteen primes below `PROVEN_BOUND` (Sorenson and Webster's
//! verification limit). Values past that bound are refused outright.

/// Exclusive limit of the proven 13-base witness set, about 3.3e24.
pub(crate) const PROVEN_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

const BASES_64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];
const BASES_WIDE: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

const SMALL_PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub(crate) fn mulmod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod64(acc, b, m);
        }
        b = mulmod64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Shift-add product mod m for operands past 64 bits. The modulus stays
/// below 2^82 here, so the doubling step cannot overflow.
fn mulmod_wide(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let a = a % m;
    let b = b % m;
    if b == 0 {
        return 0;
    }
    let mut acc = 0u128;
    let mut bit = 1u128 << (127 - b.leading_zeros());
    while bit > 0 {
        acc = (acc << 1) % m;
        if b & bit != 0 {
            acc = (acc + a) % m;
        }
        bit >>= 1;
    }
    acc
}

fn powmod_wide(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1u128;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_wide(acc, b, m);
        }
        b = mulmod_wide(b, b, m);
        e >>= 1;
    }
    acc
}

fn strong_probable_prime64(m: u64, base: u64) -> bool {
    let a = base % m;
    if a == 0 {
        return true;
    }
    let s = (m - 1).trailing_zeros();
    let d = (m - 1) >> s;
    let mut x = powmod64(a, d, m);
    if x == 1 || x == m - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod64(x, x, m);
        if x == m - 1 {
            return true;
        }
    }
    false
}

fn strong_probable_prime_wide(m: u128, base: u128) -> bool {
    let a = base % m;
    if a == 0 {
        return true;
    }
    let s = (m - 1).trailing_zeros();
    let d = (m - 1) >> s;
    let mut x = powmod_wide(a, d, m);
    if x == 1 || x == m - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod_wide(x, x, m);
        if x == m - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for the supported magnitude range.
///
/// Panics for values at or past the proven witness bound (~3.3e24); the
/// workbench caps n so that no sequence element gets there.
pub fn is_prime(m: u128) -> bool {
    if m < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = p as u128;
        if m == p {
            return true;
        }
        if m % p == 0 {
            return false;
        }
    }
    if m <= u64::MAX as u128 {
        let m = m as u64;
        return BASES_64.iter().all(|&b| strong_probable_prime64(m, b));
    }
    assert!(
        m < PROVEN_BOUND,
        "is_prime: {m} is past the proven deterministic witness range"
    );
    BASES_WIDE.iter().all(|&b| strong_probable_prime_wide(m, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_is_prime(m: u64) -> bool {
        if m < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn unit_and_small_examples() {
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(is_prime(37));
        assert!(!is_prime(91));
        assert!(is_prime(139));
    }

    #[test]
    fn agrees_with_trial_division_below_a_million() {
        for m in 0..1_000_000u64 {
            assert_eq!(is_prime(m as u128), naive_is_prime(m), "m = {m}");
        }
    }

    #[test]
    fn known_pseudoprime_traps() {
        // Carmichael numbers and strong-pseudoprime records.
        for m in [561u128, 1105, 1729, 2047, 25326001, 3215031751, 341550071728321] {
            assert!(!is_prime(m), "{m} is composite");
        }
        // Strong pseudoprime to the first nine prime bases.
        assert!(!is_prime(3825123056546413051));
    }

    #[test]
    fn large_primes_across_the_width_switch() {
        assert!(is_prime((1u128 << 61) - 1));
        assert!(is_prime(18446744073709551557)); // largest 64-bit prime
        assert!(is_prime(18446744073709551629)); // first prime past 2^64
        assert!(!is_prime(18446744073709551630));
        assert!(is_prime(1_000_000_000_000_000_000_000_007)); // 10^24 + 7
        assert!(is_prime(3_317_044_064_679_887_385_961_813)); // last prime in range
    }

    #[test]
    fn wide_semiprime_rejected() {
        let p = 1_000_000_000_039u128;
        let q = 1_000_000_000_061u128;
        assert!(is_prime(p) && is_prime(q));
        assert!(!is_prime(p * q));
    }

    #[test]
    #[should_panic(expected = "proven deterministic witness range")]
    fn refuses_values_past_the_proven_bound() {
        is_prime(PROVEN_BOUND);
    }

    #[test]
    fn wide_mulmod_matches_narrow() {
        let m = (1u128 << 64) + 13;
        for a in [3u128, 1 << 40, (1 << 64) + 5] {
            for b in [7u128, 1 << 50, (1 << 64) + 9] {
                let slow = {
                    let mut acc = 0u128;
                    for _ in 0..(b % 1000) {
                        acc = (acc + a) % m;
                    }
                    acc
                };
                assert_eq!(mulmod_wide(a, b % 1000, m), slow);
            }
        }
    }
}
