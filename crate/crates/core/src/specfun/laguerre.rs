//! Associated Laguerre polynomials `L_n^α(x)`.
//!
//! Values come from the three-term recurrence. Power-series coefficients
//! and coefficients of products of two polynomials are kept as exact
//! rationals; the products enter alternating sums that lose digits in
//! floating point.

use alloc::vec::Vec;

/// Exact rational with `i128` parts, always reduced with a positive
/// denominator. Arithmetic is checked and returns `None` on overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    num: i128,
    den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Option<Rational> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        let sign = if den < 0 { -1 } else { 1 };
        Some(Rational {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn integer(n: i128) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn checked_add(self, other: Rational) -> Option<Rational> {
        let g = gcd(self.den, other.den);
        let lhs = self.num.checked_mul(other.den / g)?;
        let rhs = other.num.checked_mul(self.den / g)?;
        Rational::new(lhs.checked_add(rhs)?, (self.den / g).checked_mul(other.den)?)
    }

    pub fn checked_mul(self, other: Rational) -> Option<Rational> {
        let g1 = gcd(self.num, other.den).max(1);
        let g2 = gcd(other.num, self.den).max(1);
        let num = (self.num / g1).checked_mul(other.num / g2)?;
        let den = (self.den / g2).checked_mul(other.den / g1)?;
        Rational::new(num, den)
    }

    pub fn to_f64(self) -> f64 {
        // Split to keep precision when both parts exceed 2^53.
        let whole = self.num / self.den;
        let rem = self.num % self.den;
        whole as f64 + rem as f64 / self.den as f64
    }
}

/// `L_n^α(x)` by the upward recurrence
/// `(k+1) L_{k+1} = (2k+1+α-x) L_k - (k+α) L_{k-1}`.
pub fn laguerre(n: u32, alpha: u32, x: f64) -> f64 {
    let alpha = alpha as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut curr = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * curr - (kf + alpha) * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

fn binomial(n: u32, k: u32) -> Option<i128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as i128)? / (i + 1) as i128;
    }
    Some(acc)
}

/// Coefficients `c_k` of `L_n^α(x) = Σ_k c_k x^k`,
/// `c_k = (-1)^k C(n+α, n-k) / k!`. `None` if an `i128` overflows.
pub fn laguerre_coefficients(n: u32, alpha: u32) -> Option<Vec<Rational>> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut factorial: i128 = 1;
    for k in 0..=n {
        if k > 0 {
            factorial = factorial.checked_mul(k as i128)?;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.push(Rational::new(sign * binomial(n + alpha, n - k)?, factorial)?);
    }
    Some(out)
}

/// Coefficients of `L_n^α(x) · L_m^β(x)` as a polynomial in `x`
/// (exact convolution).
pub fn laguerre_product_coefficients(n: u32, alpha: u32, m: u32, beta: u32) -> Option<Vec<Rational>> {
    let a = laguerre_coefficients(n, alpha)?;
    let b = laguerre_coefficients(m, beta)?;
    let mut out = alloc::vec![Rational::ZERO; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add(ai.checked_mul(*bj)?)?;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn low_orders() {
        for &alpha in &[0, 1, 4] {
            for &x in &[-2.0, 0.0, 0.7, 9.0] {
                assert_eq!(laguerre(0, alpha, x), 1.0);
                assert_eq!(laguerre(1, alpha, x), 1.0 + alpha as f64 - x);
            }
        }
        assert!((laguerre(2, 0, 2.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn coefficients_reproduce_values() {
        for n in 0..12 {
            for alpha in 0..6 {
                let c = laguerre_coefficients(n, alpha).unwrap();
                for &x in &[0.3, 1.7, 4.0] {
                    let horner = c.iter().rev().fold(0.0, |acc, ck| acc * x + ck.to_f64());
                    let rec = laguerre(n, alpha, x);
                    assert!((horner - rec).abs() < 1e-9 * rec.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn product_is_exact_convolution() {
        let p = laguerre_product_coefficients(3, 2, 2, 0).unwrap();
        for &x in &[0.5, 2.0, 3.3] {
            let val = p.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64());
            let want = laguerre(3, 2, x) * laguerre(2, 0, x);
            assert!((val - want).abs() < 1e-12 * want.abs().max(1.0));
        }
        // constant term: L_n^α(0) L_m^β(0) = C(n+α,n) C(m+β,m)
        assert_eq!(p[0], Rational::integer(10));
    }

    #[test]
    fn coefficients_fit_up_to_thirty() {
        for n in 0..=15 {
            for m in 0..=15 {
                assert!(laguerre_product_coefficients(n, 6, m, 6).is_some());
            }
        }
    }

    proptest! {
        #[test]
        fn recurrence_consistency(n in 1u32..20, alpha in 0u32..8, x in -50.0f64..50.0) {
            let a = alpha as f64;
            let nf = n as f64;
            let lhs = (nf + 1.0) * laguerre(n + 1, alpha, x);
            let rhs = (2.0 * nf + 1.0 + a - x) * laguerre(n, alpha, x)
                - (nf + a) * laguerre(n - 1, alpha, x);
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }
    }
}
