//! Bessel functions J_ν for integer and half-integer ν ≥ −1/2.

use std::f64::consts::PI;

/// Argument at which integer orders switch from the power series to the
/// asymptotic expansion.
const SWITCH: f64 = 12.0;

/// Γ(z) for z > 0 with 2z an integer.
pub fn gamma_half(z: f64) -> f64 {
    let twice = (2.0 * z).round();
    assert!(twice >= 1.0 && (2.0 * z - twice).abs() < 1e-12, "Γ is only provided at positive half-integers");
    let (mut g, mut x) = if twice as i64 % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while x < z - 1e-12 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume of the unit ball in ℝⁿ.
pub fn unit_ball_volume(n: usize) -> f64 {
    PI.powf(n as f64 / 2.0) / gamma_half(n as f64 / 2.0 + 1.0)
}

/// Surface area of the unit sphere S^{n−1}.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

fn is_half_integer(nu: f64) -> bool {
    ((nu - 0.5).round() - (nu - 0.5)).abs() < 1e-12
}

fn check_order(nu: f64) {
    let ok = nu >= -0.5 - 1e-12 && ((nu.round() - nu).abs() < 1e-12 || is_half_integer(nu));
    assert!(ok, "order {nu} is not an integer or half-integer ≥ −1/2");
}

/// Λ_ν(x) = Γ(ν+1)(2/x)^ν J_ν(x) by its power series; Λ_ν(0) = 1.
fn normalized_series(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion of J_ν(x) for large x.
fn asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (0.0, 0.0);
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60 {
        if k > 0 {
            let j = (2 * k - 1) as f64;
            a *= (mu - j * j) / (k as f64 * 8.0 * x);
        }
        if a.abs() > prev {
            break;
        }
        prev = a.abs();
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let w = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * w.cos() - q * w.sin())
}

/// J_ν(x) for x ≥ 0.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    check_order(nu);
    assert!(x >= 0.0, "negative argument");
    if x == 0.0 {
        return if nu == 0.0 {
            1.0
        } else if nu < 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
    }
    if is_half_integer(nu) {
        if x >= (2.0 * nu).max(1.0) {
            return half_integer_closed(nu, x);
        }
    } else if x >= SWITCH {
        return integer_large(nu.round() as i64, x);
    }
    normalized_series(nu, x) * (0.5 * x).powf(nu) / gamma_half(nu + 1.0)
}

/// Λ_ν(x) = Γ(ν+1)(2/x)^ν J_ν(x), the radial Fourier kernel, with Λ_ν(0) = 1.
pub fn normalized_bessel(nu: f64, x: f64) -> f64 {
    check_order(nu);
    let direct = if is_half_integer(nu) { x >= (2.0 * nu).max(1.0) } else { x >= SWITCH };
    if !direct {
        return normalized_series(nu, x);
    }
    bessel_j(nu, x) * gamma_half(nu + 1.0) * (2.0 / x).powf(nu)
}

/// Trigonometric closed forms J_{−1/2}, J_{1/2} and upward recurrence.
fn half_integer_closed(nu: f64, x: f64) -> f64 {
    let c = (2.0 / (PI * x)).sqrt();
    let mut prev = c * x.cos();
    let mut cur = c * x.sin();
    if nu < 0.0 {
        return prev;
    }
    let mut order = 0.5;
    while order < nu - 1e-12 {
        let next = 2.0 * order / x * cur - prev;
        prev = cur;
        cur = next;
        order += 1.0;
    }
    cur
}

fn integer_large(n: i64, x: f64) -> f64 {
    let j0 = asymptotic(0.0, x);
    if n == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = asymptotic(1.0, x);
    for k in 1..n {
        let next = 2.0 * k as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Approximate positive zeros of J_ν(x) below `limit` (McMahon's leading
/// term), used as panel boundaries.
pub fn approximate_zeros(nu: f64, limit: f64) -> Vec<f64> {
    (1..)
        .map(|k| (k as f64 + 0.5 * nu - 0.25) * PI)
        .take_while(|&z| z < limit)
        .filter(|&z| z > 0.0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: J_n(x) = (1/π)∫₀^π cos(nτ − x sin τ) dτ. The integrand is
    /// smooth and periodic, so the trapezoid rule converges geometrically.
    fn integral_j(n: i64, x: f64) -> f64 {
        let m = 2000;
        let h = PI / m as f64;
        let mut s = 0.0;
        for k in 0..=m {
            let tau = k as f64 * h;
            let w = if k == 0 || k == m { 0.5 } else { 1.0 };
            s += w * (n as f64 * tau - x * tau.sin()).cos();
        }
        s * h / PI
    }

    #[test]
    fn tabulated_values() {
        let cases = [
            (0.0, 1.0, 0.765_197_686_557_966_6),
            (1.0, 1.0, 0.440_050_585_744_933_5),
            (0.0, 12.0, 0.047_689_310_796_833_54),
            (1.0, 12.0, -0.223_447_104_490_627_6),
            (2.0, 5.0, 0.046_565_116_277_752_22),
            (0.0, 50.0, 0.055_812_327_669_251_82),
        ];
        for (nu, x, v) in cases {
            assert!((bessel_j(nu, x) - v).abs() < 1e-12, "J_{nu}({x})");
        }
    }

    #[test]
    fn integer_orders_match_integral() {
        for n in 0..5 {
            for i in 0..200 {
                let x = 0.05 + i as f64 * 0.35;
                let (a, b) = (bessel_j(n as f64, x), integral_j(n, x));
                assert!((a - b).abs() < 1e-12, "n={n} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn half_integer_orders() {
        for i in 1..400 {
            let x = i as f64 * 0.1;
            let c = (2.0 / (PI * x)).sqrt();
            assert!((bessel_j(0.5, x) - c * x.sin()).abs() < 1e-13);
            assert!((bessel_j(-0.5, x) - c * x.cos()).abs() < 1e-13);
            let j32 = c * (x.sin() / x - x.cos());
            assert!((bessel_j(1.5, x) - j32).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn series_and_asymptotic_agree_at_switch() {
        for nu in [0.0, 1.0, 2.0] {
            let s = normalized_series(nu, SWITCH) * (0.5 * SWITCH).powf(nu) / gamma_half(nu + 1.0);
            let d = (s - integer_large(nu as i64, SWITCH)).abs();
            assert!(d < 2e-12, "nu={nu} diff={d:e}");
        }
    }

    #[test]
    fn normalized_kernel_is_continuous() {
        for nu in [-0.5, 0.0, 0.5, 1.0, 1.5, 2.0] {
            assert_eq!(normalized_bessel(nu, 0.0), 1.0);
            for x in [1e-8, 0.999_999, 1.000_001, 11.999_999, 12.000_001] {
                let a = normalized_bessel(nu, x);
                let b = normalized_series(nu, x);
                assert!((a - b).abs() < 1e-11, "nu={nu} x={x}");
            }
        }
    }

    #[test]
    fn ball_volumes_and_gamma() {
        assert!((gamma_half(0.5) - PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half(5.0), 24.0);
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-14);
    }
}
