//! The linear-sieve function pair (F, f), the closed form D(u), the Richert
//! weight integral, and the weight calculus around Lambda_r.
//!
//! F and f are closed-form for small argument and continued past u = 4 by
//! marching the coupled delay equations (uF)' = f(u-1), (uf)' = F(u-1) on a
//! fixed grid, once at the nominal step and once at half step, with a
//! Richardson combination of the two runs.

mod quad;

use crate::{Error, Result};

/// Euler-Mascheroni constant, 30 digits.
const GAMMA: f64 = 0.577215664901532860606512090082;

const QUAD_TOL: f64 = 1e-10;
const DDE_STEP: f64 = 1e-3;
pub const DEFAULT_U_MAX: f64 = 6.0;

pub fn e_gamma() -> f64 {
    GAMMA.exp()
}

fn upper_closed(u: f64, eg: f64) -> f64 {
    2.0 * eg / u
}

fn lower_closed(u: f64, eg: f64) -> f64 {
    if u <= 2.0 {
        0.0
    } else {
        2.0 * eg / u * (u - 1.0).ln()
    }
}

/// One march of the pair at step h over 3 <= u <= 3 + n_steps*h.
/// Up to u = 4 the values come from the closed forms (F via per-step
/// Simpson of its exact derivative); past 4 a trapezoid step with the
/// one-unit delay read off the grid itself.
fn march(h: f64, n_steps: usize) -> (Vec<f64>, Vec<f64>) {
    let lag = (1.0 / h).round() as usize;
    let eg = e_gamma();
    let f3 = upper_closed(3.0, eg);
    let g = |t: f64| lower_closed(t - 1.0, eg);
    let mut fu = Vec::with_capacity(n_steps + 1);
    let mut fl = Vec::with_capacity(n_steps + 1);
    fu.push(f3);
    fl.push(lower_closed(3.0, eg));
    let mut acc = 0.0;
    for i in 0..lag.min(n_steps) {
        let t0 = 3.0 + i as f64 * h;
        let t1 = 3.0 + (i + 1) as f64 * h;
        acc += h / 6.0 * (g(t0) + 4.0 * g(0.5 * (t0 + t1)) + g(t1));
        fu.push((3.0 * f3 + acc) / t1);
        fl.push(lower_closed(t1, eg));
    }
    for i in lag..n_steps {
        let u0 = 3.0 + i as f64 * h;
        let u1 = 3.0 + (i + 1) as f64 * h;
        let p = u0 * fu[i] + h / 2.0 * (fl[i - lag] + fl[i + 1 - lag]);
        let q = u0 * fl[i] + h / 2.0 * (fu[i - lag] + fu[i + 1 - lag]);
        fu.push(p / u1);
        fl.push(q / u1);
    }
    (fu, fl)
}

/// Tabulated continuation of the sieve-function pair past the closed-form
/// region, queryable anywhere in (0, u_max].
#[derive(Clone, Debug)]
pub struct SieveFunctionTable {
    u_max: f64,
    h: f64,
    upper_grid: Vec<f64>,
    lower_grid: Vec<f64>,
}

impl SieveFunctionTable {
    pub fn new(u_max: f64) -> Result<Self> {
        if !(6.0..=512.0).contains(&u_max) {
            return Err(Error::BadArgument(format!(
                "u_max must lie in [6, 512], got {u_max}"
            )));
        }
        let h = DDE_STEP;
        // two spare points so the interpolation stencil never runs off the end
        let n = ((u_max - 3.0) / h).ceil() as usize + 2;
        let (uc, lc) = march(h, n);
        let (uf, lf) = march(0.5 * h, 2 * n);
        let lag = (1.0 / h).round() as usize;
        let combine = |coarse: &[f64], fine: &[f64]| -> Vec<f64> {
            (0..=n)
                .map(|i| {
                    if i <= lag {
                        fine[2 * i]
                    } else {
                        (4.0 * fine[2 * i] - coarse[i]) / 3.0
                    }
                })
                .collect()
        };
        Ok(SieveFunctionTable {
            u_max,
            h,
            upper_grid: combine(&uc, &uf),
            lower_grid: combine(&lc, &lf),
        })
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    fn check_domain(&self, u: f64) -> Result<()> {
        if u <= 0.0 || u > self.u_max {
            return Err(Error::BadArgument(format!(
                "u must lie in (0, {}], got {u}",
                self.u_max
            )));
        }
        Ok(())
    }

    /// Catmull-Rom through the four grid points around u; below-grid stencil
    /// points come from the closed form.
    fn interp(&self, grid: &[f64], below: impl Fn(f64) -> f64, u: f64) -> f64 {
        let x = (u - 3.0) / self.h;
        let j = (x.floor() as usize).min(grid.len() - 3);
        let t = x - j as f64;
        let p0 = if j == 0 { below(3.0 - self.h) } else { grid[j - 1] };
        let (p1, p2, p3) = (grid[j], grid[j + 1], grid[j + 2]);
        0.5 * (2.0 * p1
            + t * (p2 - p0)
            + t * t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3)
            + t * t * t * (3.0 * (p1 - p2) + p3 - p0))
    }

    /// F(u), the upper-bound function.
    pub fn upper(&self, u: f64) -> Result<f64> {
        self.check_domain(u)?;
        let eg = e_gamma();
        if u <= 3.0 {
            return Ok(upper_closed(u, eg));
        }
        Ok(self.interp(&self.upper_grid, |v| upper_closed(v, eg), u))
    }

    /// f(u), the lower-bound function.
    pub fn lower(&self, u: f64) -> Result<f64> {
        self.check_domain(u)?;
        let eg = e_gamma();
        if u <= 4.0 {
            return Ok(lower_closed(u, eg));
        }
        Ok(self.interp(&self.lower_grid, |v| lower_closed(v, eg), u))
    }
}

/// D(u) = u log(4/u) - (u-1) log(3/(u-1)) on (1, 4].
pub fn d_closed(u: f64) -> Result<f64> {
    if !(1.0 < u && u <= 4.0) {
        return Err(Error::BadArgument(format!(
            "D is defined on (1, 4], got {u}"
        )));
    }
    Ok(u * (4.0 / u).ln() - (u - 1.0) * (3.0 / (u - 1.0)).ln())
}

/// The weight integral over [u, 4] of F(4(1-1/t))(1 - u/t)/t; the argument
/// of F stays at or below 3 there, so this must land on (e^gamma/2) D(u).
pub fn richert_integral(u: f64) -> Result<f64> {
    if !(1.0 < u && u <= 4.0) {
        return Err(Error::BadArgument(format!(
            "the weight integral needs u in (1, 4], got {u}"
        )));
    }
    let eg = e_gamma();
    let integrand = |t: f64| upper_closed(4.0 * (1.0 - 1.0 / t), eg) * (1.0 - u / t) / t;
    Ok(quad::integrate(&integrand, u, 4.0, QUAD_TOL))
}

/// Everything derived from one choice of (r, delta, degree).
#[derive(Clone, Copy, Debug)]
pub struct WeightConfig {
    pub r: u32,
    pub delta: f64,
    pub degree: u32,
    /// u = 1 + 3^{-r}
    pub u: f64,
    pub big_lambda: f64,
    pub lambda: f64,
    pub admissible: bool,
}

/// (e^gamma/2)(log 3 - lambda D(u)): the n-independent main-term factor.
pub fn main_term_constant(cfg: &WeightConfig) -> f64 {
    0.5 * e_gamma() * (3.0f64.ln() - cfg.lambda * d_closed(cfg.u).expect("u = 1 + 3^-r is interior"))
}

/// Builds the weight configuration: u = 1 + 3^{-r}, Lambda_r, lambda from
/// 1/lambda = r + 1 - u(Lambda_r - delta), and the admissibility flag
/// (element-growth exponent versus Lambda_r - delta, and positive main term).
pub fn make_weight_config(r: u32, delta: f64, degree: u32) -> Result<WeightConfig> {
    if r < 2 {
        return Err(Error::BadArgument(format!("r must be at least 2, got {r}")));
    }
    if !(delta > 0.0 && delta <= 2.0 / 3.0) {
        return Err(Error::BadArgument(format!(
            "delta must lie in (0, 2/3], got {delta}"
        )));
    }
    if !(1..=2).contains(&degree) {
        return Err(Error::BadArgument(format!(
            "degree must be 1 or 2, got {degree}"
        )));
    }
    let t = 3.0f64.powi(-(r as i32));
    let u = 1.0 + t;
    let big_lambda = (r + 1) as f64 - (4.0 / (1.0 + t)).ln() / 3.0f64.ln();
    let inv_lambda = (r + 1) as f64 - u * (big_lambda - delta);
    debug_assert!(inv_lambda > 0.0);
    let lambda = 1.0 / inv_lambda;
    let mut cfg = WeightConfig {
        r,
        delta,
        degree,
        u,
        big_lambda,
        lambda,
        admissible: false,
    };
    cfg.admissible =
        big_lambda - delta > (degree + 1) as f64 && main_term_constant(&cfg) > 0.0;
    Ok(cfg)
}
