//! Smallest-witness searches for one n: the two-prime decomposition, the
//! almost-prime relaxations, and the combined Omega bound.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use sunsieve_core::{factorize, is_prime, Variant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum WitnessKind {
    #[serde(rename = "sun-prime")]
    #[value(name = "sun-prime")]
    SunPrime,
    #[serde(rename = "almost-3")]
    #[value(name = "almost-3")]
    Almost3,
    #[serde(rename = "almost-4")]
    #[value(name = "almost-4")]
    Almost4,
    #[serde(rename = "combined-11")]
    #[value(name = "combined-11")]
    Combined11,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::SunPrime => "sun-prime",
            WitnessKind::Almost3 => "almost-3",
            WitnessKind::Almost4 => "almost-4",
            WitnessKind::Combined11 => "combined-11",
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WitnessKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sun-prime" => Ok(WitnessKind::SunPrime),
            "almost-3" => Ok(WitnessKind::Almost3),
            "almost-4" => Ok(WitnessKind::Almost4),
            "combined-11" => Ok(WitnessKind::Combined11),
            other => Err(format!("unknown witness kind {other:?}")),
        }
    }
}

/// One decomposition n = x + y with both polynomial values and their
/// factor counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub n: u64,
    pub kind: WitnessKind,
    pub y: u64,
    pub x: u64,
    pub value1: u128,
    pub omega1: u32,
    pub value2: u128,
    pub omega2: u32,
}

fn element_values(n: u64, y: u64) -> (u128, u128) {
    let (nn, yy) = (n as u128, y as u128);
    let x = nn - yy;
    (x + nn * yy, x * x + nn * yy * yy)
}

fn record(kind: WitnessKind, n: u64, y: u64) -> WitnessRecord {
    let (value1, value2) = element_values(n, y);
    WitnessRecord {
        n,
        kind,
        y,
        x: n - y,
        value1,
        omega1: factorize(value1).big_omega(),
        value2,
        omega2: factorize(value2).big_omega(),
    }
}

/// Smallest y with x + ny and x^2 + ny^2 both prime; None is a
/// counterexample to the conjecture under test.
pub fn find_sun_witness(n: u64) -> Option<WitnessRecord> {
    for y in 1..n {
        let (v1, v2) = element_values(n, y);
        if is_prime(v1) && is_prime(v2) {
            return Some(record(WitnessKind::SunPrime, n, y));
        }
    }
    None
}

/// Smallest y whose variant-side value has at most r prime factors.
pub fn find_almost_prime_witness(n: u64, variant: Variant, r: u32) -> Option<WitnessRecord> {
    let kind = match variant {
        Variant::Linear => WitnessKind::Almost3,
        Variant::Quadratic => WitnessKind::Almost4,
    };
    for y in 1..n {
        let (v1, v2) = element_values(n, y);
        let value = match variant {
            Variant::Linear => v1,
            Variant::Quadratic => v2,
        };
        if factorize(value).big_omega() <= r {
            return Some(record(kind, n, y));
        }
    }
    None
}

/// Smallest y with Omega(value1) + Omega(value2) at most bound.
pub fn find_combined_witness(n: u64, bound: u32) -> Option<WitnessRecord> {
    for y in 1..n {
        let (v1, v2) = element_values(n, y);
        let omega1 = factorize(v1).big_omega();
        if omega1 + 1 > bound {
            continue;
        }
        if omega1 + factorize(v2).big_omega() <= bound {
            return Some(record(WitnessKind::Combined11, n, y));
        }
    }
    None
}

/// Re-derives every field of a record from (n, y) alone and checks the
/// record against the derivation and its kind's Omega constraint.
pub fn audit_record(rec: &WitnessRecord) -> bool {
    if rec.y == 0 || rec.y >= rec.n || rec.x != rec.n - rec.y {
        return false;
    }
    let fresh = record(rec.kind, rec.n, rec.y);
    if fresh != *rec {
        return false;
    }
    match rec.kind {
        WitnessKind::SunPrime => rec.omega1 == 1 && rec.omega2 == 1,
        WitnessKind::Almost3 => rec.omega1 <= 3,
        WitnessKind::Almost4 => rec.omega2 <= 4,
        WitnessKind::Combined11 => rec.omega1 + rec.omega2 <= 11,
    }
}
