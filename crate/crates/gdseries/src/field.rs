//! Exact arithmetic in Q(alpha^(1/D)).
//!
//! Elements are represented in the quotient ring Q[t]/(t^D - alpha) as
//! length-D vectors of big rationals, t standing for the positive real root
//! alpha^(1/D). Every scalar alpha^e with denominator of e dividing D lives
//! here, and sums of such scalars stay closed under ring operations. For
//! alpha = 2 the defining polynomial is irreducible (Eisenstein), so the
//! quotient is the genuine number field; for other rational alpha a nonzero
//! element can in principle be a zero divisor, in which case inversion
//! reports [`Error::DivisionByZero`].
//!
//! ```
//! use gdseries::field::{AlgNum, FieldSpec};
//! use num::BigRational;
//!
//! let spec = FieldSpec::shared(BigRational::from_integer(2.into()), 4).unwrap();
//! let e = BigRational::new(3.into(), 2.into());
//! let x = AlgNum::alpha_pow(&spec, &e).unwrap(); // 2^(3/2)
//! assert_eq!(&x * &x, AlgNum::from_int(&spec, 8));
//! ```

use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::util::{format_rational, rational_pow};

/// The ground field parameters: growth base alpha > 1 and the degree D of
/// the adjoined root t = alpha^(1/D).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    alpha: BigRational,
    root_degree: u32,
}

impl FieldSpec {
    pub fn new(alpha: BigRational, root_degree: u32) -> Result<FieldSpec> {
        if alpha <= BigRational::one() {
            return Err(Error::Invalid(format!(
                "alpha must exceed 1, got {}",
                format_rational(&alpha)
            )));
        }
        if root_degree == 0 {
            return Err(Error::Invalid("root degree must be positive".into()));
        }
        Ok(FieldSpec { alpha, root_degree })
    }

    pub fn shared(alpha: BigRational, root_degree: u32) -> Result<Arc<FieldSpec>> {
        Ok(Arc::new(FieldSpec::new(alpha, root_degree)?))
    }

    /// The standard spec used throughout the paper's families: alpha = 2, D = 24.
    pub fn alpha2() -> Arc<FieldSpec> {
        FieldSpec::shared(BigRational::from_integer(2.into()), 24).unwrap()
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn root_degree(&self) -> u32 {
        self.root_degree
    }

    /// alpha^k for integer k, as an exact rational.
    pub fn alpha_pow_int(&self, k: i64) -> BigRational {
        rational_pow(&self.alpha, k)
    }

    /// True when alpha is the integer 2.
    pub fn alpha_is_two(&self) -> bool {
        self.alpha == BigRational::from_integer(2.into())
    }
}

/// An element of Q[t]/(t^D - alpha): comps[i] is the coefficient of t^i.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgNum {
    spec: Arc<FieldSpec>,
    comps: Vec<BigRational>,
}

impl AlgNum {
    pub fn zero(spec: &Arc<FieldSpec>) -> AlgNum {
        AlgNum {
            spec: Arc::clone(spec),
            comps: vec![BigRational::zero(); spec.root_degree() as usize],
        }
    }

    pub fn one(spec: &Arc<FieldSpec>) -> AlgNum {
        AlgNum::from_rational(spec, BigRational::one())
    }

    pub fn from_rational(spec: &Arc<FieldSpec>, r: BigRational) -> AlgNum {
        let mut x = AlgNum::zero(spec);
        x.comps[0] = r;
        x
    }

    pub fn from_int(spec: &Arc<FieldSpec>, k: i64) -> AlgNum {
        AlgNum::from_rational(spec, BigRational::from_integer(k.into()))
    }

    /// alpha^e for a rational exponent whose denominator divides D.
    ///
    /// With k = e*D, the element is t^k reduced by t^D = alpha; negative k
    /// uses t^(-1) = t^(D-1)/alpha.
    pub fn alpha_pow(spec: &Arc<FieldSpec>, e: &BigRational) -> Result<AlgNum> {
        let d = BigInt::from(spec.root_degree());
        let scaled = e * BigRational::from_integer(d.clone());
        if !scaled.denom().is_one() {
            return Err(Error::ExponentDenominatorMismatch(e.clone()));
        }
        let k: BigInt = scaled.to_integer();
        let (q, r) = k.div_mod_floor(&d);
        let q: i64 = q.to_i64().ok_or_else(|| {
            Error::Invalid(format!("exponent {} out of range", format_rational(e)))
        })?;
        let r = r.to_usize().expect("0 <= r < D");
        let mut x = AlgNum::zero(spec);
        x.comps[r] = spec.alpha_pow_int(q);
        Ok(x)
    }

    /// alpha^k for an integer exponent; always a pure rational element.
    pub fn alpha_pow_int(spec: &Arc<FieldSpec>, k: i64) -> AlgNum {
        AlgNum::from_rational(spec, spec.alpha_pow_int(k))
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn comps(&self) -> &[BigRational] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// True when the element lies in Q (all components above t^0 vanish).
    pub fn is_rational(&self) -> bool {
        self.comps[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.is_rational() {
            Some(&self.comps[0])
        } else {
            None
        }
    }

    fn same_spec(&self, other: &AlgNum) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn checked_add(&self, other: &AlgNum) -> Result<AlgNum> {
        self.same_spec(other)?;
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&other.comps) {
            if !b.is_zero() {
                *a += b;
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &AlgNum) -> Result<AlgNum> {
        self.same_spec(other)?;
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&other.comps) {
            if !b.is_zero() {
                *a -= b;
            }
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &AlgNum) -> Result<AlgNum> {
        self.same_spec(other)?;
        let d = self.spec.root_degree() as usize;
        let mut out = AlgNum::zero(&self.spec);
        for (i, a) in self.comps.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.comps.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                let k = i + j;
                if k < d {
                    out.comps[k] += prod;
                } else {
                    out.comps[k - d] += prod * &self.spec.alpha;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, r: &BigRational) -> AlgNum {
        if r.is_zero() {
            return AlgNum::zero(&self.spec);
        }
        let mut out = self.clone();
        for c in out.comps.iter_mut() {
            if !c.is_zero() {
                *c *= r;
            }
        }
        out
    }

    /// Multiplicative inverse, via the extended Euclidean algorithm against
    /// t^D - alpha in Q[t].
    pub fn invert(&self) -> Result<AlgNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(AlgNum::from_rational(&self.spec, r.recip()));
        }
        let d = self.spec.root_degree() as usize;
        // modulus = t^D - alpha
        let mut modulus = vec![BigRational::zero(); d + 1];
        modulus[0] = -self.spec.alpha.clone();
        modulus[d] = BigRational::one();

        // Extended Euclid on (a, modulus): track s with s*a = r (mod modulus).
        let mut r0 = modulus;
        let mut r1 = poly_trim(self.comps.clone());
        let mut s0: Vec<BigRational> = vec![];
        let mut s1 = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, rem) = poly_divmod(&r0, &r1);
            let s_next = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s_next;
        }
        if r0.len() != 1 {
            // gcd has positive degree: zero divisor in the quotient ring.
            return Err(Error::DivisionByZero);
        }
        let lead = r0[0].recip();
        let mut comps = vec![BigRational::zero(); d];
        for (i, c) in s0.iter().enumerate() {
            comps[i] = c * &lead;
        }
        Ok(AlgNum {
            spec: Arc::clone(&self.spec),
            comps,
        })
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow_int(&self, k: i64) -> Result<AlgNum> {
        if k == 0 {
            return Ok(AlgNum::one(&self.spec));
        }
        let base = if k > 0 { self.clone() } else { self.invert()? };
        let mut acc = AlgNum::one(&self.spec);
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Floating-point value sum_i comps[i] * alpha^(i/D). Diagnostic only.
    pub fn to_f64(&self) -> f64 {
        let alpha = self.spec.alpha.to_f64().unwrap();
        let d = self.spec.root_degree() as f64;
        self.comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c.to_f64().unwrap() * alpha.powf(i as f64 / d))
            .sum()
    }

    /// JSON form used by the CLI dump format.
    pub fn to_json(&self) -> serde_json::Value {
        let pairs: Vec<serde_json::Value> = self
            .comps
            .iter()
            .map(|c| serde_json::json!([c.numer().to_string(), c.denom().to_string()]))
            .collect();
        serde_json::json!({
            "num_den_pairs": pairs,
            "alpha": format_rational(&self.spec.alpha),
            "D": self.spec.root_degree(),
        })
    }
}

impl fmt::Display for AlgNum {
    /// Terms are printed as reduced rationals times alpha^(i/D), the power
    /// reduced to lowest terms, e.g. `3/2*2^(1/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let d = self.spec.root_degree() as i64;
        let mut first = true;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            if i == 0 {
                write!(f, "{}", format_rational(&mag))?;
            } else {
                let g = (i as i64).gcd(&d);
                let (num, den) = (i as i64 / g, d / g);
                if !mag.is_one() {
                    write!(f, "{}*", format_rational(&mag))?;
                }
                if den == 1 {
                    write!(f, "{}^{}", format_rational(&self.spec.alpha), num)?;
                } else {
                    write!(
                        f,
                        "{}^({}/{})",
                        format_rational(&self.spec.alpha),
                        num,
                        den
                    )?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgNum({})", self)
    }
}

macro_rules! alg_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &AlgNum {
            type Output = AlgNum;
            fn $method(self, rhs: &AlgNum) -> AlgNum {
                self.$checked(rhs).expect("field spec mismatch")
            }
        }
        impl std::ops::$trait for AlgNum {
            type Output = AlgNum;
            fn $method(self, rhs: AlgNum) -> AlgNum {
                (&self).$method(&rhs)
            }
        }
    };
}

alg_binop!(Add, add, checked_add);
alg_binop!(Sub, sub, checked_sub);
alg_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        self.scale(&-BigRational::one())
    }
}

impl std::ops::Neg for AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        -&self
    }
}

// --- dense polynomial helpers over Q, used only by invert ---

fn poly_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    poly_trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.to_vec();
    if a.len() < b.len() {
        return (vec![], poly_trim(rem));
    }
    let mut quot = vec![BigRational::zero(); a.len() - b.len() + 1];
    let lead = b.last().unwrap();
    for k in (0..quot.len()).rev() {
        let idx = k + b.len() - 1;
        if rem[idx].is_zero() {
            continue;
        }
        let q = &rem[idx] / lead;
        for (j, c) in b.iter().enumerate() {
            if !c.is_zero() {
                let sub = c * &q;
                rem[k + j] -= sub;
            }
        }
        quot[k] = q;
    }
    (poly_trim(quot), poly_trim(rem))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::parse_rational;

    fn spec24() -> Arc<FieldSpec> {
        FieldSpec::alpha2()
    }

    fn spec(alpha: &str, d: u32) -> Arc<FieldSpec> {
        FieldSpec::shared(parse_rational(alpha).unwrap(), d).unwrap()
    }

    #[test]
    fn alpha_pow_defining_relation() {
        // (alpha=2, D=4), e = 3/2 -> 2*t^2 since t^6 = 2 t^2
        let s = spec("2", 4);
        let x = AlgNum::alpha_pow(&s, &parse_rational("3/2").unwrap()).unwrap();
        assert!(x.comps()[2] == parse_rational("2").unwrap());
        assert!(x.comps()[0].is_zero() && x.comps()[1].is_zero() && x.comps()[3].is_zero());
        // e = 0 -> 1
        let one = AlgNum::alpha_pow(&s, &parse_rational("0").unwrap()).unwrap();
        assert_eq!(one, AlgNum::one(&s));
        // e = -1/4 -> t^3 / 2, verified by multiplying with t
        let x = AlgNum::alpha_pow(&s, &parse_rational("-1/4").unwrap()).unwrap();
        let t = AlgNum::alpha_pow(&s, &parse_rational("1/4").unwrap()).unwrap();
        assert_eq!(&x * &t, AlgNum::one(&s));
        assert_eq!(x.comps()[3], parse_rational("1/2").unwrap());
    }

    #[test]
    fn alpha_pow_rejects_bad_denominator() {
        let s = spec("2", 4);
        let e = parse_rational("1/3").unwrap();
        assert!(matches!(
            AlgNum::alpha_pow(&s, &e),
            Err(Error::ExponentDenominatorMismatch(_))
        ));
    }

    #[test]
    fn quotient_ring_products() {
        // (1 + t)(1 - t) = 1 - t^2 = -1 at alpha = 2, D = 2
        let s = spec("2", 2);
        let t = AlgNum::alpha_pow(&s, &parse_rational("1/2").unwrap()).unwrap();
        let a = AlgNum::one(&s) + t.clone();
        let b = AlgNum::one(&s) - t;
        assert_eq!(&a * &b, AlgNum::from_int(&s, -1));
        // 2^(3/2) * 2^(3/2) = 8
        let s = spec24();
        let h = AlgNum::alpha_pow(&s, &parse_rational("3/2").unwrap()).unwrap();
        assert_eq!(&h * &h, AlgNum::from_int(&s, 8));
    }

    #[test]
    fn inversion() {
        let s = spec("2", 4);
        assert_eq!(
            AlgNum::from_int(&s, 2).invert().unwrap(),
            AlgNum::from_rational(&s, parse_rational("1/2").unwrap())
        );
        // invert(t) = t^3/2
        let t = AlgNum::alpha_pow(&s, &parse_rational("1/4").unwrap()).unwrap();
        let ti = t.invert().unwrap();
        assert_eq!(&t * &ti, AlgNum::one(&s));
        // invert(1 + t) at D=2: (1+t)(t-1) = 1
        let s = spec("2", 2);
        let t = AlgNum::alpha_pow(&s, &parse_rational("1/2").unwrap()).unwrap();
        let a = AlgNum::one(&s) + t.clone();
        let inv = a.invert().unwrap();
        assert_eq!(&a * &inv, AlgNum::one(&s));
        assert_eq!(inv, t - AlgNum::one(&s));
        assert!(matches!(
            AlgNum::zero(&s).invert(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn spec_mismatch_is_reported() {
        let a = AlgNum::one(&spec("2", 4));
        let b = AlgNum::one(&spec("3", 4));
        assert!(matches!(a.checked_add(&b), Err(Error::SpecMismatch)));
    }

    #[test]
    fn float_roundtrip_diagnostic() {
        let s = spec24();
        let e = parse_rational("5/2").unwrap();
        let x = AlgNum::alpha_pow(&s, &e).unwrap();
        assert!((x.to_f64() - 2f64.powf(2.5)).abs() < 1e-12);
    }

    #[test]
    fn display_is_reduced() {
        let s = spec24();
        let x = AlgNum::alpha_pow(&s, &parse_rational("1/2").unwrap()).unwrap();
        assert_eq!(x.to_string(), "2^(1/2)");
        let y = x.scale(&parse_rational("3/2").unwrap());
        assert_eq!(y.to_string(), "3/2*2^(1/2)");
        assert_eq!(AlgNum::from_int(&s, -7).to_string(), "-7");
    }
}
