//! The sifted sequences and their exact finite statistics: element values,
//! local densities, the global density product, divisibility counts,
//! remainders, and sifting counts.
//!
//! Everything here is exact or a deterministic f64 fold in a fixed order;
//! nothing samples or estimates.

mod roots;
mod sift;

use crate::arith::{factorize, primes_up_to};
use crate::{Error, Result};

pub(crate) use roots::{eval_mod, roots_mod_d};

/// Which of the two polynomial families the sequence is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// n + (n-1)y
    Linear,
    /// (n+1)y^2 - 2ny + n^2
    Quadratic,
}

impl Variant {
    pub fn degree(self) -> u32 {
        match self {
            Variant::Linear => 1,
            Variant::Quadratic => 2,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Variant::Linear => 1,
            Variant::Quadratic => 2,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Variant::Linear),
            2 => Ok(Variant::Quadratic),
            _ => Err(Error::BadArgument(format!("variant must be 1 or 2, got {i}"))),
        }
    }
}

/// Largest supported n; keeps every element value inside the range where
/// primality testing is deterministic.
pub const MAX_N: u64 = 100_000_000;

/// The finite sequence {F_n(y) : 1 <= y < n} for one n and variant.
#[derive(Clone, Copy, Debug)]
pub struct SiftedSequence {
    n: u64,
    variant: Variant,
}

/// Local densities for every prime below z, with their product G(z).
#[derive(Clone, Debug)]
pub struct DensityProfile {
    pub n: u64,
    pub variant: Variant,
    pub z: f64,
    /// (p, rho(p)) ascending in p
    pub rho: Vec<(u64, u64)>,
    pub g_z: f64,
}

/// Exact divisibility count against its density prediction.
#[derive(Clone, Copy, Debug)]
pub struct RemainderSample {
    pub d: u64,
    pub exact_count: u64,
    pub expected: f64,
    pub eta: f64,
}

impl SiftedSequence {
    pub fn new(n: u64, variant: Variant) -> Result<Self> {
        if n < 2 || n > MAX_N {
            return Err(Error::BadArgument(format!(
                "n must lie in [2, {MAX_N}], got {n}"
            )));
        }
        Ok(SiftedSequence { n, variant })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Cardinality of the sequence.
    pub fn x(&self) -> u64 {
        self.n - 1
    }

    /// F_n(y). The quadratic is evaluated as (n-y)^2 + n*y^2, which is the
    /// same polynomial and never goes negative on the way.
    pub fn eval_element(&self, y: u64) -> Result<u128> {
        if y < 1 || y >= self.n {
            return Err(Error::BadArgument(format!(
                "y must lie in [1, {}), got {y}",
                self.n
            )));
        }
        let (n, y) = (self.n as u128, y as u128);
        Ok(match self.variant {
            Variant::Linear => n + (n - 1) * y,
            Variant::Quadratic => (n - y) * (n - y) + n * y * y,
        })
    }

    /// rho(p): residues y mod p with F_n(y) = 0, by closed form.
    pub fn local_density(&self, p: u64) -> u64 {
        let n = self.n;
        match self.variant {
            Variant::Linear => {
                if (n - 1) % p == 0 {
                    0
                } else {
                    1
                }
            }
            Variant::Quadratic => {
                if p == 2 || (n + 1) % p == 0 {
                    return (0..p)
                        .filter(|&y| eval_mod(n, self.variant, y, p) == 0)
                        .count() as u64;
                }
                if n % p == 0 {
                    return 1;
                }
                // two roots or none as -4n^3 is a residue or not
                let np = n % p;
                let n3 = crate::arith::mulmod64(crate::arith::mulmod64(np, np, p), np, p);
                let disc = (p - crate::arith::mulmod64(4 % p, n3, p)) % p;
                (1 + roots::legendre(disc, p)) as u64
            }
        }
    }

    /// rho extended to squarefree d as the product over p | d.
    pub fn local_density_squarefree(&self, d: u64) -> Result<u64> {
        let f = factorize(d as u128);
        if !f.is_squarefree() {
            return Err(Error::NotSquarefree(d));
        }
        Ok(f.factors
            .iter()
            .map(|&(p, _)| self.local_density(p as u64))
            .product())
    }

    /// G(z), the finite product over p < z.
    pub fn global_density(&self, z: f64) -> f64 {
        if z <= 2.0 {
            return 1.0;
        }
        let mut g = 1.0;
        for &p in &primes_up_to(z.ceil() as u64).primes {
            if (p as f64) < z {
                g *= 1.0 - self.local_density(p) as f64 / p as f64;
            }
        }
        g
    }

    pub fn density_profile(&self, z: f64) -> DensityProfile {
        let mut rho = Vec::new();
        let mut g = 1.0;
        if z > 2.0 {
            for &p in &primes_up_to(z.ceil() as u64).primes {
                if (p as f64) < z {
                    let r = self.local_density(p);
                    g *= 1.0 - r as f64 / p as f64;
                    rho.push((p, r));
                }
            }
        }
        DensityProfile {
            n: self.n,
            variant: self.variant,
            z,
            rho,
            g_z: g,
        }
    }

    /// How many elements d divides, from the root structure mod d.
    pub fn divisible_count(&self, d: u64) -> u64 {
        if d == 1 {
            return self.x();
        }
        let top = self.n - 1;
        roots_mod_d(self.n, self.variant, d)
            .into_iter()
            .map(|r| {
                if r == 0 {
                    top / d
                } else if r <= top {
                    1 + (top - r) / d
                } else {
                    0
                }
            })
            .sum()
    }

    /// Scan fallback for divisible_count, for cross-validation.
    pub fn divisible_count_scan(&self, d: u64) -> u64 {
        (1..self.n)
            .filter(|&y| eval_mod(self.n, self.variant, y, d) == 0)
            .count() as u64
    }

    /// eta(d) = |exact count - rho(d) X / d| for squarefree d.
    pub fn remainder(&self, d: u64) -> Result<RemainderSample> {
        let rho = self.local_density_squarefree(d)?;
        let exact_count = self.divisible_count(d);
        let expected = rho as f64 * self.x() as f64 / d as f64;
        Ok(RemainderSample {
            d,
            exact_count,
            expected,
            eta: (exact_count as f64 - expected).abs(),
        })
    }

    /// S(A,z): elements coprime to every prime below z.
    pub fn sift_count(&self, z: f64) -> u64 {
        sift::count(self.n, self.variant, z)
    }

    /// The y surviving the sieve below z, ascending.
    pub fn sifted_indices(&self, z: f64) -> Vec<u64> {
        sift::survivors(self.n, self.variant, z)
    }

    /// S_q(A,z): survivors additionally divisible by q; every prime factor
    /// of q must sit at or above z.
    pub fn sift_count_q(&self, q: u64, z: f64) -> Result<u64> {
        if q == 0 {
            return Err(Error::BadArgument("q must be positive".into()));
        }
        let f = factorize(q as u128);
        if !f.is_squarefree() {
            return Err(Error::NotSquarefree(q));
        }
        if let Some(&(p, _)) = f.factors.iter().find(|&&(p, _)| (p as f64) < z) {
            return Err(Error::BadArgument(format!(
                "q = {q} has the prime factor {p} below z = {z}"
            )));
        }
        if q == 1 {
            return Ok(self.sift_count(z));
        }
        let sieve = sift::prime_roots(self.n, self.variant, z);
        let mut count = 0;
        for r in roots_mod_d(self.n, self.variant, q) {
            let mut y = if r == 0 { q } else { r };
            while y < self.n {
                if sieve
                    .iter()
                    .all(|&(p, ref rs)| !rs.contains(&(y % p)))
                {
                    count += 1;
                }
                y += q;
            }
        }
        Ok(count)
    }

    /// (sum of rho(p)/p, sum of rho(p) ln p / p) over z <= p < w.
    pub fn mertens_rho_sums(&self, z: f64, w: f64) -> (f64, f64) {
        if w <= z {
            return (0.0, 0.0);
        }
        let mut s1 = 0.0;
        let mut s2 = 0.0;
        for &p in &primes_up_to(w.ceil().max(2.0) as u64).primes {
            let pf = p as f64;
            if pf >= z && pf < w {
                let rho = self.local_density(p) as f64;
                s1 += rho / pf;
                s2 += rho * pf.ln() / pf;
            }
        }
        (s1, s2)
    }
}
