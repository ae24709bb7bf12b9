use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Inputs and outputs of the critical transmission radius formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusParams {
    pub n: usize,
    pub k: usize,
    pub sigma: f64,
    /// Offset term of the radicand; depends only on `k` and `sigma`.
    pub xi: f64,
    /// Resulting radius, in unit-square lengths.
    pub r_n: f64,
}

fn ln_factorial(k: usize) -> f64 {
    if k <= 20 {
        ((1..=k as u64).product::<u64>() as f64).ln()
    } else {
        (2..=k).map(|i| (i as f64).ln()).sum()
    }
}

fn xi(k: usize, sigma: f64) -> f64 {
    if k == 1 {
        let inner = ((-sigma).exp() + PI / 4.0).sqrt() - PI.sqrt() / 2.0;
        -2.0 * inner.ln()
    } else {
        // 2 ln(√π / (2^(k-1) k!)) + 2σ, kept in log space for large k.
        2.0 * (0.5 * PI.ln() - (k - 1) as f64 * 2f64.ln() - ln_factorial(k)) + 2.0 * sigma
    }
}

/// Transmission radius for `n` uniform nodes:
///
/// `r_n = sqrt((ln n + (2k-1) ln ln n + ξ) / (π n))`
///
/// with `ξ = -2 ln(sqrt(e^-σ + π/4) - sqrt(π)/2)` for `k = 1` and
/// `ξ = 2 ln(sqrt(π) / (2^(k-1) k!)) + 2σ` for `k > 1`. Natural logarithms.
pub fn critical_radius(n: usize, k: usize, sigma: f64) -> Result<RadiusParams> {
    if n < 3 {
        return Err(invalid(format!("n must be at least 3, got {n}")));
    }
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    if !sigma.is_finite() {
        return Err(invalid(format!("sigma must be finite, got {sigma}")));
    }
    let xi = xi(k, sigma);
    let nf = n as f64;
    let radicand = (nf.ln() + (2 * k - 1) as f64 * nf.ln().ln() + xi) / (PI * nf);
    if radicand.is_nan() || radicand <= 0.0 || radicand.is_infinite() {
        return Err(Error::Domain(format!(
            "radius formula has non-positive radicand {radicand} for n = {n}, k = {k}, sigma = {sigma}"
        )));
    }
    Ok(RadiusParams {
        n,
        k,
        sigma,
        xi,
        r_n: radicand.sqrt(),
    })
}
