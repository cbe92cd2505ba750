//! Hermite and Laguerre polynomials by three-term recurrence.

use num_complex::Complex64;

/// Physicists' Hermite polynomial `H_j(z)` at a complex argument.
pub fn hermite_complex(j: usize, z: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if j == 0 {
        return prev;
    }
    let mut cur = 2.0 * z;
    for m in 1..j {
        let next = 2.0 * z * cur - 2.0 * m as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Laguerre polynomial `L_l(x)`.
pub fn laguerre(l: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if l == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for m in 1..l {
        let mf = m as f64;
        let next = ((2.0 * mf + 1.0 - x) * cur - mf * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Iterator over `L_0(x), L_1(x), ...`.
pub fn laguerre_iter(x: f64) -> impl Iterator<Item = f64> {
    let mut state: (f64, f64, usize) = (0.0, 1.0, 0);
    std::iter::from_fn(move || {
        let (prev, cur, l) = state;
        let next = if l == 0 {
            1.0 - x
        } else {
            let lf = l as f64;
            ((2.0 * lf + 1.0 - x) * cur - lf * prev) / (lf + 1.0)
        };
        state = (cur, next, l + 1);
        Some(cur)
    })
}

/// Normalized even-order Hermite values
///
/// `f_m = c^m H_{2m}(z / √c) / (4^m m!)`,   m = 0..=m_max.
///
/// `c^{j/2} H_j(z/√c)` is a polynomial in `(z, c)`, so the sequence is built
/// from the rescaled recurrence without ever dividing by `√c`; `c` may be
/// zero or negative. The `4^m m!` normalization keeps the values bounded for
/// large `m`.
pub fn scaled_even_hermite(z: Complex64, c: f64, m_max: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(m_max + 1);
    // u_j = c^{j/2} H_j(z/√c) / s_j with s_{2m} = 4^m m!, s_{2m+1} = 2^{2m+1} m!
    let mut even = Complex64::new(1.0, 0.0);
    let mut odd_prev = Complex64::new(0.0, 0.0); // u_{-1}, multiplied by zero
    out.push(even);
    for m in 0..m_max {
        let mf = m as f64;
        let odd = z * even - c * odd_prev;
        let next_even = (z * odd - 0.5 * (2.0 * mf + 1.0) * c * even) / (mf + 1.0);
        odd_prev = odd;
        even = next_even;
        out.push(even);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }

    #[test]
    fn hermite_small_orders() {
        assert_eq!(hermite_complex(0, c(3.0, 1.0)), c(1.0, 0.0));
        assert_eq!(hermite_complex(2, c(0.0, 0.0)), c(-2.0, 0.0));
        assert_eq!(hermite_complex(3, c(1.0, 0.0)), c(-4.0, 0.0));
        // 16 z^4 - 48 z^2 + 12 at z^2 = -1/4
        let h4 = hermite_complex(4, c(0.0, 0.5));
        assert_relative_eq!(h4.re, 25.0, epsilon = 1e-12);
        assert_relative_eq!(h4.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hermite_matches_explicit_sum() {
        // H_n(z) = n! Σ_m (-1)^m (2z)^{n-2m} / (m! (n-2m)!)
        let z = c(0.37, -1.2);
        for n in 0..15 {
            let mut explicit = c(0.0, 0.0);
            for m in 0..=n / 2 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                explicit +=
                    sign * (2.0 * z).powu((n - 2 * m) as u32) * factorial(n) / (factorial(m) * factorial(n - 2 * m));
            }
            let h = hermite_complex(n, z);
            assert!((h - explicit).norm() <= 1e-10 * explicit.norm().max(1.0), "n = {n}");
        }
    }

    #[test]
    fn laguerre_small_orders() {
        assert_eq!(laguerre(0, 17.0), 1.0);
        assert_eq!(laguerre(1, 2.0), -1.0);
        // L_5(x) = Σ_m C(5,m) (-x)^m / m!
        let x: f64 = 0.7;
        let series: f64 = (0..=5)
            .map(|m| factorial(5) / (factorial(m) * factorial(5 - m)) * (-x).powi(m as i32) / factorial(m))
            .sum();
        assert_relative_eq!(laguerre(5, x), series, epsilon = 1e-14);
    }

    #[test]
    fn laguerre_iter_agrees_with_direct() {
        for (l, v) in laguerre_iter(3.3).take(40).enumerate() {
            assert_relative_eq!(v, laguerre(l, 3.3), epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn scaled_even_hermite_matches_unscaled() {
        for &cc in &[0.8, 0.05, -0.6] {
            let z = c(0.0, 0.9);
            let sqrt_c = Complex64::new(cc, 0.0).sqrt();
            let seq = scaled_even_hermite(z, cc, 12);
            for (m, f) in seq.iter().enumerate() {
                let direct = Complex64::new(cc, 0.0).powu(m as u32) * hermite_complex(2 * m, z / sqrt_c)
                    / (4f64.powi(m as i32) * factorial(m));
                assert!(
                    (f - direct).norm() <= 1e-11 * direct.norm().max(1e-3),
                    "c = {cc}, m = {m}"
                );
            }
        }
    }

    #[test]
    fn scaled_even_hermite_degenerate_c() {
        // c = 0 leaves only the leading monomial: (2z)^{2m} / (4^m m!) = z^{2m}/m!
        let z = c(0.0, 1.3);
        for (m, f) in scaled_even_hermite(z, 0.0, 10).iter().enumerate() {
            let expected = z.powu(2 * m as u32) / factorial(m);
            assert!((f - expected).norm() < 1e-12 * expected.norm().max(1.0));
        }
    }
}
