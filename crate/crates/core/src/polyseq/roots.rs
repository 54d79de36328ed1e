//! Roots of the sequence polynomials modulo primes, prime powers, and
//! composite moduli.

use crate::arith::{factorize, mulmod64, powmod64};

use super::Variant;

/// F(y) mod m without overflow; m must fit a machine word.
pub(crate) fn eval_mod(n: u64, variant: Variant, y: u64, m: u64) -> u64 {
    debug_assert!(m >= 1);
    let y = y % m;
    match variant {
        Variant::Linear => {
            (((n % m) as u128 + ((n - 1) % m) as u128 * y as u128) % m as u128) as u64
        }
        Variant::Quadratic => {
            let a = (n + 1) % m;
            let b = ((2 * (n as u128 % m as u128)) % m as u128) as u64;
            let c = mulmod64(n % m, n % m, m);
            let ay2 = mulmod64(mulmod64(a, y, m), y, m);
            let by = mulmod64(b, y, m);
            // a y^2 - b y + c, kept nonnegative
            ((ay2 + c) % m + (m - by)) % m
        }
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    powmod64(a, p - 2, p)
}

pub(crate) fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if powmod64(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root mod an odd prime by Tonelli-Shanks; None for non-residues.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod64(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..)
        .find(|&z| legendre(z, p) == -1)
        .expect("a quadratic non-residue exists below p");
    let mut m = s;
    let mut c = powmod64(z, q, p);
    let mut t = powmod64(a, q, p);
    let mut r = powmod64(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod64(t2, t2, p);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mulmod64(b, b, p);
        }
        m = i;
        c = mulmod64(b, b, p);
        t = mulmod64(t, c, p);
        r = mulmod64(r, b, p);
    }
    Some(r)
}

/// Roots of F mod p, ascending. Degenerate cases (p = 2, and p dividing
/// the quadratic's leading coefficient) fall back to residue enumeration.
pub(crate) fn roots_mod_p(n: u64, variant: Variant, p: u64) -> Vec<u64> {
    match variant {
        Variant::Linear => {
            if (n - 1) % p == 0 {
                return Vec::new();
            }
            let a = n % p;
            let b = (n - 1) % p;
            vec![mulmod64((p - a) % p, inv_mod(b, p), p)]
        }
        Variant::Quadratic => {
            if p == 2 || (n + 1) % p == 0 {
                return (0..p).filter(|&y| eval_mod(n, variant, y, p) == 0).collect();
            }
            if n % p == 0 {
                return vec![0];
            }
            // discriminant of (n+1)y^2 - 2ny + n^2 is -4n^3
            let n3 = mulmod64(mulmod64(n % p, n % p, p), n % p, p);
            let disc = (p - mulmod64(4 % p, n3, p)) % p;
            debug_assert_ne!(disc, 0);
            let Some(s) = sqrt_mod(disc, p) else {
                return Vec::new();
            };
            let inv2a = inv_mod(mulmod64(2 % p, (n + 1) % p, p), p);
            let tn = mulmod64(2 % p, n % p, p);
            let mut rs = vec![
                mulmod64((tn + s) % p, inv2a, p),
                mulmod64((tn + p - s) % p, inv2a, p),
            ];
            rs.sort_unstable();
            rs.dedup();
            rs
        }
    }
}

/// Roots mod p^e, lifted level by level by direct candidate checking.
pub(crate) fn roots_mod_pe(n: u64, variant: Variant, p: u64, e: u32) -> Vec<u64> {
    let mut roots = roots_mod_p(n, variant, p);
    let mut pk = p;
    for _ in 1..e {
        let pk1 = pk * p;
        let mut next = Vec::new();
        for &r in &roots {
            for t in 0..p {
                let cand = r + t * pk;
                if eval_mod(n, variant, cand, pk1) == 0 {
                    next.push(cand);
                }
            }
        }
        next.sort_unstable();
        roots = next;
        pk = pk1;
    }
    roots
}

/// Roots mod d via CRT over the prime-power parts of d, ascending.
pub(crate) fn roots_mod_d(n: u64, variant: Variant, d: u64) -> Vec<u64> {
    if d == 1 {
        return vec![0];
    }
    let mut combined: Vec<u64> = vec![0];
    let mut modulus: u64 = 1;
    for &(p, e) in &factorize(d as u128).factors {
        let p = p as u64;
        let pe = p.pow(e);
        let part = roots_mod_pe(n, variant, p, e);
        if part.is_empty() {
            return Vec::new();
        }
        let inv = {
            // modulus^{-1} mod pe by extended Euclid; pe need not be prime
            let (mut a, mut b) = (modulus as i128 % pe as i128, pe as i128);
            let (mut x0, mut x1) = (1i128, 0i128);
            while b != 0 {
                let q = a / b;
                (a, b) = (b, a - q * b);
                (x0, x1) = (x1, x0 - q * x1);
            }
            debug_assert_eq!(a, 1);
            x0.rem_euclid(pe as i128) as u64
        };
        let mut next = Vec::with_capacity(combined.len() * part.len());
        for &r0 in &combined {
            for &r in &part {
                let diff = (r + pe - (r0 % pe)) % pe;
                let add = mulmod64(diff, inv, pe);
                next.push(r0 + modulus * add);
            }
        }
        modulus *= pe;
        combined = next;
    }
    combined.sort_unstable();
    combined
}
