//! Seedable random variates and the Student-t distribution function.
//!
//! The generator is ChaCha8 keyed from a 64-bit seed, so every stream is
//! reproducible across platforms. Independent streams for concurrent work
//! come from [`RngState::with_stream`] or from seeds produced by
//! [`derive_seed`].

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Stream `stream` of the generator keyed by `seed`. Distinct streams of
    /// the same seed never overlap.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform variate on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.sample(Open01)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn normal(&mut self, mean: f64, variance: f64) -> Result<f64> {
        if !(variance > 0.0) {
            return Err(Error::NonPositiveVariance(variance));
        }
        Ok(mean + variance.sqrt() * self.standard_normal())
    }

    /// Gamma variate with the given shape and unit scale.
    pub fn gamma(&mut self, shape: f64) -> Result<f64> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "shape",
                value: shape,
            });
        }
        Ok(self.ln_gamma_variate(shape).exp())
    }

    /// Inverse-gamma variate with density proportional to
    /// `x^(-shape-1) exp(-scale/x)`, i.e. `1/g` with `g ~ Gamma(shape, rate = scale)`.
    pub fn inverse_gamma(&mut self, shape: f64, scale: f64) -> Result<f64> {
        if !(shape > 0.0) || !shape.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "shape",
                value: shape,
            });
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "scale",
                value: scale,
            });
        }
        let ln_g = self.ln_gamma_variate(shape);
        Ok((scale.ln() - ln_g).exp())
    }

    /// Log of a unit-scale gamma variate (Marsaglia and Tsang, 2000).
    /// Shapes below one use the `Gamma(a + 1) * U^(1/a)` boost, carried out
    /// in log space so tiny shapes cannot underflow to zero.
    fn ln_gamma_variate(&mut self, shape: f64) -> f64 {
        let (a, boost) = if shape < 1.0 {
            (shape + 1.0, true)
        } else {
            (shape, false)
        };
        let d = a - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        let ln_g = loop {
            let (x, v) = loop {
                let x = self.standard_normal();
                let v = 1.0 + c * x;
                if v > 0.0 {
                    break (x, v * v * v);
                }
            };
            let u = self.uniform();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                break d.ln() + v.ln();
            }
        };
        if boost {
            ln_g + self.uniform().ln() / shape
        } else {
            ln_g
        }
    }
}

/// Mixes `(seed, index)` into a new seed (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `P(T <= t)` for a Student-t variable with `df` degrees of freedom.
pub fn student_t_cdf(t: f64, df: f64) -> Result<f64> {
    if !(df > 0.0) {
        return Err(Error::NonPositiveDf(df));
    }
    if t.is_nan() {
        return Ok(f64::NAN);
    }
    if t == f64::INFINITY {
        return Ok(1.0);
    }
    if t == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let t2 = t * t;
    // Lower tail mass P(T <= -|t|) = I_x(df/2, 1/2) / 2 with x = df / (df + t^2).
    // Evaluate I_x directly where the continued fraction converges (and the
    // tail may be tiny); elsewhere use 1 - I_{1-x}(1/2, df/2) with 1 - x formed
    // without cancellation.
    let (a, b) = (0.5 * df, 0.5);
    let x = df / (df + t2);
    let y = t2 / (df + t2);
    let tail = if x < (a + 1.0) / (a + b + 2.0) {
        0.5 * incomplete_beta(a, b, x, y)
    } else {
        0.5 * (1.0 - incomplete_beta(b, a, y, x))
    };
    Ok(if t > 0.0 { 1.0 - tail } else { tail })
}

/// Regularized incomplete beta `I_x(a, b)` with `y = 1 - x` supplied by the
/// caller. Only accurate for `x < (a + 1) / (a + b + 2)`.
fn incomplete_beta(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let front = (a * x.ln() + b * y.ln() - ln_beta(a, b)).exp() / a;
    front * beta_continued_fraction(a, b, x)
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let clamp = |v: f64| if v.abs() < TINY { TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - (a + b) * x / (a + 1.0));
    let mut h = d;
    for m in 1..=1000 {
        let m = f64::from(m);
        let m2 = 2.0 * m;
        let even = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 / clamp(1.0 + even * d);
        c = clamp(1.0 + even / c);
        h *= d * c;
        let odd = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 / clamp(1.0 + odd * d);
        c = clamp(1.0 + odd / c);
        let step = d * c;
        h *= step;
        if (step - 1.0).abs() <= EPS {
            break;
        }
    }
    h
}

/// Stirling remainder `ln Γ(x) - [(x - 1/2) ln x - x + ln(2π)/2]` for `x >= 10`.
fn stirling_remainder(x: f64) -> f64 {
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let r = 1.0 / (x * x);
    C.iter().rev().fold(0.0, |acc, &c| acc * r + c) / x
}

/// `ln Γ(x + s) - ln Γ(x)` without forming either log-gamma separately.
fn ln_gamma_ratio(x: f64, s: f64) -> f64 {
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift += (x / (x + s)).ln();
        x += 1.0;
    }
    (x - 0.5) * (s / x).ln_1p() + s * (x + s).ln() - s + stirling_remainder(x + s) - stirling_remainder(x)
        + shift
}

fn ln_beta(a: f64, b: f64) -> f64 {
    let (small, big) = if a < b { (a, b) } else { (b, a) };
    statrs::function::gamma::ln_gamma(small) - ln_gamma_ratio(big, small)
}
