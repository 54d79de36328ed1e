//! Segmented sifting of the index range 1..n by the residue classes the
//! sequence polynomial vanishes on.

use rayon::prelude::*;

use crate::arith::primes_up_to;

use super::{roots::roots_mod_p, Variant};

const SEGMENT: u64 = 1 << 20;

/// Vanishing residues mod every prime p < z.
pub(crate) fn prime_roots(n: u64, variant: Variant, z: f64) -> Vec<(u64, Vec<u64>)> {
    if z <= 2.0 {
        return Vec::new();
    }
    let bound = z.ceil() as u64;
    primes_up_to(bound)
        .primes
        .iter()
        .copied()
        .filter(|&p| (p as f64) < z)
        .map(|p| (p, roots_mod_p(n, variant, p)))
        .collect()
}

fn segment_survivors(lo: u64, hi: u64, roots: &[(u64, Vec<u64>)]) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut alive = vec![true; len];
    for (p, rs) in roots {
        for &r in rs {
            let mut y = lo + ((r + p - lo % p) % p);
            while y < hi {
                alive[(y - lo) as usize] = false;
                y += p;
            }
        }
    }
    alive
        .iter()
        .enumerate()
        .filter(|(_, &a)| a)
        .map(|(i, _)| lo + i as u64)
        .collect()
}

fn segments(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = 1;
    while lo < n {
        let hi = (lo + SEGMENT).min(n);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// y in 1..n avoiding every vanishing class mod p < z, in order.
pub(crate) fn survivors(n: u64, variant: Variant, z: f64) -> Vec<u64> {
    let roots = prime_roots(n, variant, z);
    segments(n)
        .into_par_iter()
        .map(|(lo, hi)| segment_survivors(lo, hi, &roots))
        .collect::<Vec<_>>()
        .concat()
}

/// #survivors without materializing them.
pub(crate) fn count(n: u64, variant: Variant, z: f64) -> u64 {
    let roots = prime_roots(n, variant, z);
    segments(n)
        .into_par_iter()
        .map(|(lo, hi)| segment_survivors(lo, hi, &roots).len() as u64)
        .sum()
}
