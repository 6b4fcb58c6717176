//! Standard normal distribution functions accurate to a few ulps.

use std::f64::consts::{PI, SQRT_2};

pub fn pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// `1 - Φ(x)` without cancellation.
pub fn sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// `Φ⁻¹(u)`: a rational initial guess refined by Halley steps.
pub fn quantile(u: f64) -> f64 {
    if u.is_nan() {
        return f64::NAN;
    }
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if u >= 1.0 {
        return f64::INFINITY;
    }
    if u > 0.5 {
        return -quantile(1.0 - u);
    }
    let mut x = initial_guess(u);
    for _ in 0..4 {
        let e = cdf(x) - u;
        let t = e / pdf(x);
        if !t.is_finite() {
            break;
        }
        let step = t / (1.0 + 0.5 * x * t);
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Two-sided critical value `Φ⁻¹(1 - α/2)`.
pub fn two_sided_z(alpha: f64) -> f64 {
    -quantile(0.5 * alpha)
}

// Rational approximation with relative error near 1e-9 on (0, 1/2].
fn initial_guess(u: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383_577_518_672_69e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996,
        3.754408661907416,
    ];
    if u < 0.02425 {
        let q = (-2.0 * u.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = u - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((cdf(1.0) - 0.8413447460685429).abs() < 1e-16);
        assert!((sf(1.0) - 0.15865525393145707).abs() < 1e-16);
        assert!((quantile(0.975) - 1.959963984540054).abs() < 1e-14);
        assert!((two_sided_z(0.05) - 1.959963984540054).abs() < 1e-14);
        assert!((quantile(0.95) - 1.6448536269514722).abs() < 1e-14);
        assert_eq!(quantile(0.5), 0.0);
    }

    #[test]
    fn quantile_inverts_cdf_deep_in_the_tail() {
        for u in [1e-300, 1e-100, 1e-20, 1e-8, 0.01, 0.3, 0.5] {
            let x = quantile(u);
            assert!(((cdf(x) - u) / u).abs() < 1e-13, "u={u}");
        }
    }
}
