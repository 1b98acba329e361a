//! Small exact-arithmetic helpers used across the crate.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Binomial coefficient C(n, 2) = n(n-1)/2, defined for every integer n.
pub fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// Exact factorial.
pub fn factorial(n: usize) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= k;
    }
    f
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Falling factorial n^(k) = n(n-1)...(n-k+1); zero when k > n.
pub fn falling_factorial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut f = BigInt::one();
    for i in 0..k {
        f *= n - i;
    }
    f
}

/// Signed Stirling numbers of the first kind s(n, k) for n <= n_max,
/// so that x^(falling n) = sum_k s(n, k) x^k.
pub fn stirling_first(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n_max + 1]; n_max + 1];
    s[0][0] = BigInt::one();
    for n in 0..n_max {
        for k in 0..=n {
            let v = s[n][k].clone();
            s[n + 1][k + 1] += &v;
            s[n + 1][k] -= v * BigInt::from(n as i64);
        }
    }
    s
}

/// Base-2 logarithm of a positive rational, as a double. Diagnostic only.
pub fn log2_rational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "log2 of a non-positive rational");
    log2_bigint(r.numer()) - log2_bigint(r.denom())
}

fn log2_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 52;
    let top = (x.abs() >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// Parse "p/q" or "p" into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().ok()?;
        let den: BigInt = q.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    } else {
        let num: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(num))
    }
}

/// Render a rational as "p" or "p/q", always reduced.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact integer power of a rational (negative exponents allowed for nonzero base).
pub fn rational_pow(base: &BigRational, exp: i64) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    let mut acc = BigRational::one();
    let mut sq = if exp > 0 { base.clone() } else { base.recip() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    #[test]
    fn stirling_expands_falling_factorials() {
        let s = stirling_first(6);
        // n^(3) = n^3 - 3n^2 + 2n
        assert_eq!(s[3][3], BigInt::from(1));
        assert_eq!(s[3][2], BigInt::from(-3));
        assert_eq!(s[3][1], BigInt::from(2));
        let n = BigInt::from(7);
        let mut acc = BigInt::zero();
        for k in 0..=4 {
            acc += &s[4][k] * n.pow(k as u32);
        }
        assert_eq!(acc, falling_factorial(7, 4));
    }

    #[test]
    fn log2_matches_small_values() {
        let r = BigRational::from_f64(1024.0).unwrap();
        assert!((log2_rational(&r) - 10.0).abs() < 1e-9);
        let huge = BigRational::from_integer(BigInt::from(1) << 1000);
        assert!((log2_rational(&huge) - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn rational_pow_negative() {
        let r = parse_rational("4/3").unwrap();
        assert_eq!(rational_pow(&r, -2), parse_rational("9/16").unwrap());
    }
}
