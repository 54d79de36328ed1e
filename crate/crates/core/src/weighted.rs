//! Richert's weighted sifting function evaluated exactly on a sequence,
//! the almost-prime census it lower-bounds, and the Selberg-style
//! main-term comparison.

use rayon::prelude::*;

use crate::arith::factorize;
use crate::polyseq::SiftedSequence;
use crate::sievefn::{main_term_constant, SieveFunctionTable, WeightConfig};

/// Fixed partition width for the parallel folds, so the f64 summation
/// order never depends on the worker count.
const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug)]
pub struct WeightedSieveReport {
    pub n: u64,
    pub variant: crate::polyseq::Variant,
    pub cfg: WeightConfig,
    /// sieving limit X^{1/4}
    pub z: f64,
    /// weight cutoff X^{1/u}
    pub y_bound: f64,
    pub w_value: f64,
    /// elements with at most cfg.r prime factors, multiplicity counted
    pub almost_prime_count: u64,
    /// S(A, z)
    pub sifted_count: u64,
    /// survivors dropped for a squared prime in [z, y_bound)
    pub excluded_square: u64,
    /// X G(z) times the weight-calculus constant
    pub main_term: f64,
    /// false when the config is inadmissible or n is too small to sieve
    pub comparable: bool,
}

/// W(A, u, lambda): every survivor of the sieve below z = X^{1/4} counts
/// 1 - lambda * sum over its prime divisors p in [z, X^{1/u}) of
/// (1 - u log p / log X); survivors with p^2 | a for such p are excluded
/// outright. Each prime divisor counts once.
pub fn weighted_count(seq: &SiftedSequence, cfg: &WeightConfig) -> WeightedSieveReport {
    let xf = seq.x() as f64;
    let z = xf.powf(0.25);
    let y_bound = xf.powf(1.0 / cfg.u);
    let log_x = xf.ln();
    let almost_prime_count = almost_prime_census(seq, cfg.r);
    let main = |g: f64| xf * g * main_term_constant(cfg);
    if z < 2.0 {
        return WeightedSieveReport {
            n: seq.n(),
            variant: seq.variant(),
            cfg: *cfg,
            z,
            y_bound,
            w_value: xf,
            almost_prime_count,
            sifted_count: seq.x(),
            excluded_square: 0,
            main_term: main(1.0),
            comparable: false,
        };
    }
    let survivors = seq.sifted_indices(z);
    let parts: Vec<(f64, u64)> = survivors
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut w = 0.0;
            let mut excluded = 0u64;
            for &y in chunk {
                let value = seq.eval_element(y).expect("survivor index is in range");
                let mut penalty = 0.0;
                let mut squared = false;
                for &(p, e) in &factorize(value).factors {
                    let pf = p as f64;
                    if pf >= z && pf < y_bound {
                        if e >= 2 {
                            squared = true;
                            break;
                        }
                        penalty += 1.0 - cfg.u * pf.ln() / log_x;
                    }
                }
                if squared {
                    excluded += 1;
                } else {
                    w += 1.0 - cfg.lambda * penalty;
                }
            }
            (w, excluded)
        })
        .collect();
    let mut w_value = 0.0;
    let mut excluded_square = 0;
    for (w, e) in parts {
        w_value += w;
        excluded_square += e;
    }
    WeightedSieveReport {
        n: seq.n(),
        variant: seq.variant(),
        cfg: *cfg,
        z,
        y_bound,
        w_value,
        almost_prime_count,
        sifted_count: survivors.len() as u64,
        excluded_square,
        main_term: main(seq.global_density(z)),
        comparable: cfg.admissible,
    }
}

/// How many elements have at most r prime factors counted with
/// multiplicity, by factoring every element.
pub fn almost_prime_census(seq: &SiftedSequence, r: u32) -> u64 {
    assert!(r >= 1, "r must be positive");
    (1..seq.n())
        .into_par_iter()
        .filter(|&y| {
            let value = seq.eval_element(y).expect("y is in range");
            factorize(value).big_omega() <= r
        })
        .count() as u64
}

/// The two linear-sieve main terms X G(z) f(s) and X G(z) F(s) around the
/// exact S(A, z), with s = log X / log z. No inequality is asserted; the
/// lemma behind the bounds carries error terms this finite check omits.
pub fn selberg_bound_check(seq: &SiftedSequence, z: f64) -> (f64, u64, f64) {
    let xf = seq.x() as f64;
    assert!((2.0..=xf).contains(&z), "z must lie in [2, X]");
    let exact = seq.sift_count(z);
    let s = xf.ln() / z.ln();
    let table = SieveFunctionTable::new(s.max(6.0)).expect("s is within table range");
    let g = seq.global_density(z);
    let lower = xf * g * table.lower(s).expect("s is in domain");
    let upper = xf * g * table.upper(s).expect("s is in domain");
    (lower, exact, upper)
}
