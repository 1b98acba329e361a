//! Truncated univariate formal power series with [`MarkedScalar`] coefficients.
//!
//! An [`Egf`] stores `[z^n] A` for n = 0..=order, i.e. the counting sequence
//! divided by n!. Counts are recovered through [`Egf::count`]. Operations are
//! exact; the truncation order is explicit everywhere and operations never
//! silently extend precision (binary operations truncate to the shorter
//! operand).

use std::sync::Arc;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::field::{AlgNum, FieldSpec};
use crate::marked::{MarkedScalar, VarSet};
use crate::util::{binom2, factorial};

/// Which normalization the series carries relative to raw labeled counts.
///
/// * `Exponential`: `[z^n] = a_n / n!`
/// * `Graphic`: `[z^n] = a_n / (alpha^C(n,2) n!)`
/// * `Implication`: `[z^n] = a_n / (2^n alpha^{2 C(n,2)} n!)`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Exponential,
    Graphic,
    Implication,
    Plain,
}

/// A truncated series over the marked-scalar ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Egf {
    spec: Arc<FieldSpec>,
    vars: Arc<VarSet>,
    kind: SeriesKind,
    coeffs: Vec<MarkedScalar>,
}

impl Egf {
    pub fn zero(spec: &Arc<FieldSpec>, vars: &Arc<VarSet>, order: usize) -> Egf {
        Egf {
            spec: Arc::clone(spec),
            vars: Arc::clone(vars),
            kind: SeriesKind::Plain,
            coeffs: vec![MarkedScalar::zero(spec, vars); order + 1],
        }
    }

    pub fn constant(spec: &Arc<FieldSpec>, vars: &Arc<VarSet>, c: MarkedScalar, order: usize) -> Egf {
        let mut s = Egf::zero(spec, vars, order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(spec: &Arc<FieldSpec>, vars: &Arc<VarSet>, order: usize) -> Egf {
        Egf::constant(spec, vars, MarkedScalar::one(spec, vars), order)
    }

    /// The identity series z.
    pub fn z(spec: &Arc<FieldSpec>, vars: &Arc<VarSet>, order: usize) -> Egf {
        let mut s = Egf::zero(spec, vars, order);
        if order >= 1 {
            s.coeffs[1] = MarkedScalar::one(spec, vars);
        }
        s
    }

    /// e^z, the Hadamard identity.
    pub fn exp_z(spec: &Arc<FieldSpec>, vars: &Arc<VarSet>, order: usize) -> Egf {
        let mut s = Egf::zero(spec, vars, order);
        for n in 0..=order {
            let r = BigRational::new(BigInt::one(), factorial(n));
            s.coeffs[n] = MarkedScalar::from_rational(spec, vars, r);
        }
        s
    }

    pub fn from_coeffs(
        spec: &Arc<FieldSpec>,
        vars: &Arc<VarSet>,
        kind: SeriesKind,
        coeffs: Vec<MarkedScalar>,
    ) -> Egf {
        assert!(!coeffs.is_empty());
        Egf {
            spec: Arc::clone(spec),
            vars: Arc::clone(vars),
            kind,
            coeffs,
        }
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: SeriesKind) -> Egf {
        self.kind = kind;
        self
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &MarkedScalar {
        &self.coeffs[n]
    }

    /// n! [z^n], the raw counting coefficient of an exponential GF.
    pub fn count(&self, n: usize) -> MarkedScalar {
        self.coeffs[n].scale_rational(&BigRational::from_integer(factorial(n)))
    }

    pub fn truncated(&self, order: usize) -> Egf {
        assert!(order <= self.order(), "cannot extend a truncated series");
        Egf {
            spec: Arc::clone(&self.spec),
            vars: Arc::clone(&self.vars),
            kind: self.kind,
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    fn common_order(&self, other: &Egf) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Egf) -> Egf {
        let n = self.common_order(other);
        let coeffs = (0..=n)
            .map(|i| self.coeffs[i].checked_add(&other.coeffs[i]).expect("shape"))
            .collect();
        Egf::from_coeffs(&self.spec, &self.vars, self.kind_meet(other), coeffs)
    }

    pub fn sub(&self, other: &Egf) -> Egf {
        let n = self.common_order(other);
        let coeffs = (0..=n)
            .map(|i| self.coeffs[i].checked_sub(&other.coeffs[i]).expect("shape"))
            .collect();
        Egf::from_coeffs(&self.spec, &self.vars, self.kind_meet(other), coeffs)
    }

    fn kind_meet(&self, other: &Egf) -> SeriesKind {
        if self.kind == other.kind {
            self.kind
        } else {
            SeriesKind::Plain
        }
    }

    /// Exact Cauchy product to the shorter order.
    pub fn mul(&self, other: &Egf) -> Egf {
        let n = self.common_order(other);
        let mut coeffs = vec![MarkedScalar::zero(&self.spec, &self.vars); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = self.coeffs[i].checked_mul(&other.coeffs[j]).expect("shape");
                coeffs[i + j] = coeffs[i + j].checked_add(&prod).expect("shape");
            }
        }
        Egf::from_coeffs(&self.spec, &self.vars, self.kind_meet(other), coeffs)
    }

    pub fn scale(&self, c: &MarkedScalar) -> Egf {
        let coeffs = self.coeffs.iter().map(|x| x.checked_mul(c).expect("shape")).collect();
        Egf::from_coeffs(&self.spec, &self.vars, self.kind, coeffs)
    }

    pub fn scale_rational(&self, r: &BigRational) -> Egf {
        let coeffs = self.coeffs.iter().map(|x| x.scale_rational(r)).collect();
        Egf::from_coeffs(&self.spec, &self.vars, self.kind, coeffs)
    }

    pub fn neg(&self) -> Egf {
        self.scale_rational(&-BigRational::one())
    }

    /// F(A(z)) by Horner evaluation, `f` holding the power-series
    /// coefficients of F at the origin. Requires A(0) = 0.
    pub fn compose_analytic(&self, f: &[MarkedScalar]) -> Result<Egf> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order();
        let k_max = f.len().min(order + 1);
        let mut acc = Egf::zero(&self.spec, &self.vars, order);
        for k in (0..k_max).rev() {
            acc = acc.mul(self);
            acc.coeffs[0] = acc.coeffs[0].checked_add(&f[k]).expect("shape");
        }
        Ok(acc)
    }

    /// exp(A) for A(0) = 0, through the first-order recurrence
    /// n b_n = sum_k k a_k b_{n-k}.
    pub fn exp(&self) -> Result<Egf> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::BadConstantTerm { op: "exp", expected: "0" });
        }
        let order = self.order();
        let mut b = vec![MarkedScalar::zero(&self.spec, &self.vars); order + 1];
        b[0] = MarkedScalar::one(&self.spec, &self.vars);
        for n in 1..=order {
            let mut acc = MarkedScalar::zero(&self.spec, &self.vars);
            for k in 1..=n {
                if self.coeffs[k].is_zero() || b[n - k].is_zero() {
                    continue;
                }
                let term = self.coeffs[k]
                    .checked_mul(&b[n - k])
                    .expect("shape")
                    .scale_rational(&BigRational::from_integer(k.into()));
                acc = acc.checked_add(&term).expect("shape");
            }
            b[n] = acc.scale_rational(&BigRational::new(BigInt::one(), n.into()));
        }
        Ok(Egf::from_coeffs(&self.spec, &self.vars, SeriesKind::Plain, b))
    }

    /// log(A) for A(0) = 1, through n b_n = n a_n - sum k b_k a_{n-k}.
    pub fn log(&self) -> Result<Egf> {
        if self.coeffs[0] != MarkedScalar::one(&self.spec, &self.vars) {
            return Err(Error::BadConstantTerm { op: "log", expected: "1" });
        }
        let order = self.order();
        let mut b = vec![MarkedScalar::zero(&self.spec, &self.vars); order + 1];
        for n in 1..=order {
            let mut acc = self.coeffs[n].scale_rational(&BigRational::from_integer(n.into()));
            for k in 1..n {
                if b[k].is_zero() || self.coeffs[n - k].is_zero() {
                    continue;
                }
                let term = b[k]
                    .checked_mul(&self.coeffs[n - k])
                    .expect("shape")
                    .scale_rational(&BigRational::from_integer(k.into()));
                acc = acc.checked_sub(&term).expect("shape");
            }
            b[n] = acc.scale_rational(&BigRational::new(BigInt::one(), n.into()));
        }
        Ok(Egf::from_coeffs(&self.spec, &self.vars, SeriesKind::Plain, b))
    }

    /// A^r for rational r, requiring A(0) = 1; equal to exp(r log A).
    pub fn pow_rational(&self, r: &BigRational) -> Result<Egf> {
        if self.coeffs[0] != MarkedScalar::one(&self.spec, &self.vars) {
            return Err(Error::BadConstantTerm { op: "pow", expected: "1" });
        }
        let order = self.order();
        let mut b = vec![MarkedScalar::zero(&self.spec, &self.vars); order + 1];
        b[0] = MarkedScalar::one(&self.spec, &self.vars);
        // n b_n = sum_{k=1..n} ((r+1)k - n) a_k b_{n-k}
        for n in 1..=order {
            let mut acc = MarkedScalar::zero(&self.spec, &self.vars);
            for k in 1..=n {
                if self.coeffs[k].is_zero() || b[n - k].is_zero() {
                    continue;
                }
                let factor = (r + BigRational::one()) * BigRational::from_integer(k.into())
                    - BigRational::from_integer(n.into());
                if factor.is_zero() {
                    continue;
                }
                let term = self.coeffs[k]
                    .checked_mul(&b[n - k])
                    .expect("shape")
                    .scale_rational(&factor);
                acc = acc.checked_add(&term).expect("shape");
            }
            b[n] = acc.scale_rational(&BigRational::new(BigInt::one(), n.into()));
        }
        Ok(Egf::from_coeffs(&self.spec, &self.vars, SeriesKind::Plain, b))
    }

    /// Multiplicative inverse; the constant term must be invertible.
    pub fn inverse(&self) -> Result<Egf> {
        let a0 = self.coeffs[0]
            .as_alg()
            .ok_or_else(|| Error::Invalid("series inversion needs a mark-free constant term".into()))?;
        let a0_inv = MarkedScalar::from_alg(&self.vars, a0.invert()?);
        let order = self.order();
        let mut b = vec![MarkedScalar::zero(&self.spec, &self.vars); order + 1];
        b[0] = a0_inv.clone();
        for n in 1..=order {
            let mut acc = MarkedScalar::zero(&self.spec, &self.vars);
            for k in 1..=n {
                if self.coeffs[k].is_zero() || b[n - k].is_zero() {
                    continue;
                }
                let term = self.coeffs[k].checked_mul(&b[n - k]).expect("shape");
                acc = acc.checked_add(&term).expect("shape");
            }
            b[n] = acc.neg().checked_mul(&a0_inv).expect("shape");
        }
        Ok(Egf::from_coeffs(&self.spec, &self.vars, SeriesKind::Plain, b))
    }

    /// Integer power; negative exponents invert first.
    pub fn powi(&self, k: i64) -> Result<Egf> {
        if k == 0 {
            return Ok(Egf::one(&self.spec, &self.vars, self.order()));
        }
        let base = if k > 0 { self.clone() } else { self.inverse()? };
        let mut acc = Egf::one(&self.spec, &self.vars, self.order());
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Exponential Hadamard product: [z^n] result = n! ([z^n]A)([z^n]B).
    pub fn hadamard(&self, other: &Egf) -> Egf {
        let n = self.common_order(other);
        let coeffs = (0..=n)
            .map(|i| {
                self.coeffs[i]
                    .checked_mul(&other.coeffs[i])
                    .expect("shape")
                    .scale_rational(&BigRational::from_integer(factorial(i)))
            })
            .collect();
        Egf::from_coeffs(&self.spec, &self.vars, SeriesKind::Plain, coeffs)
    }

    /// The Robinson operator power: multiplies a_n by alpha^(-m C(n,2)).
    /// Negative m raises the growth grade; m = 0 is the identity.
    pub fn robin(&self, m: i64) -> Egf {
        if m == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let e = self.spec.alpha_pow_int(-m * binom2(n as i64));
                c.scale_rational(&e)
            })
            .collect();
        Egf::from_coeffs(&self.spec, &self.vars, SeriesKind::Plain, coeffs)
    }

    /// A(c z): multiplies [z^n] by c^n.
    pub fn scale_z(&self, c: &AlgNum) -> Egf {
        let mut power = AlgNum::one(&self.spec);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, x)| {
                if n > 0 {
                    power = power.checked_mul(c).expect("spec");
                }
                x.scale_alg(&power)
            })
            .collect();
        Egf::from_coeffs(&self.spec, &self.vars, self.kind, coeffs)
    }

    /// Formal d/dz; the truncation order drops by one.
    pub fn derivative(&self) -> Egf {
        if self.order() == 0 {
            return Egf::zero(&self.spec, &self.vars, 0);
        }
        let coeffs = (1..=self.order())
            .map(|n| self.coeffs[n].scale_rational(&BigRational::from_integer(n.into())))
            .collect();
        Egf::from_coeffs(&self.spec, &self.vars, SeriesKind::Plain, coeffs)
    }

    /// Formal integral from 0; the constant term of the result is 0.
    pub fn antiderivative(&self) -> Egf {
        let mut coeffs = vec![MarkedScalar::zero(&self.spec, &self.vars)];
        for n in 0..=self.order() {
            coeffs.push(
                self.coeffs[n].scale_rational(&BigRational::new(BigInt::one(), (n + 1).into())),
            );
        }
        Egf::from_coeffs(&self.spec, &self.vars, SeriesKind::Plain, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::parse_rational;

    fn ctx() -> (Arc<FieldSpec>, Arc<VarSet>) {
        (FieldSpec::alpha2(), VarSet::empty())
    }

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn exp_times_exp_is_exp_2z() {
        let (spec, vars) = ctx();
        let e = Egf::exp_z(&spec, &vars, 8);
        let p = e.mul(&e);
        for n in 0..=8 {
            let expected = BigRational::from_integer(BigInt::from(2).pow(n as u32))
                / BigRational::from_integer(factorial(n));
            assert_eq!(p.coeff(n).as_alg().unwrap().as_rational().unwrap(), &expected);
        }
    }

    #[test]
    fn add_zero_is_identity() {
        let (spec, vars) = ctx();
        let e = Egf::exp_z(&spec, &vars, 6);
        let z = Egf::zero(&spec, &vars, 6);
        assert_eq!(e.add(&z), e.clone().with_kind(SeriesKind::Plain));
    }

    #[test]
    fn exp_log_roundtrip() {
        let (spec, vars) = ctx();
        // A = z + z^2/2 + z^3/6 ... (e^z - 1), log(exp(A)) = A
        let a = Egf::exp_z(&spec, &vars, 8).sub(&Egf::one(&spec, &vars, 8));
        let b = a.exp().unwrap().log().unwrap();
        assert_eq!(a.coeffs, b.coeffs);
    }

    #[test]
    fn exp_matches_compose() {
        let (spec, vars) = ctx();
        let a = Egf::z(&spec, &vars, 7);
        let e = a.exp().unwrap();
        for n in 0..=7 {
            assert_eq!(
                e.coeff(n).as_alg().unwrap().as_rational().unwrap(),
                &BigRational::new(BigInt::one(), factorial(n))
            );
        }
        // Same through Horner composition with the coefficients of exp.
        let f: Vec<MarkedScalar> = (0..=7)
            .map(|k| {
                MarkedScalar::from_rational(
                    &spec,
                    &vars,
                    BigRational::new(BigInt::one(), factorial(k)),
                )
            })
            .collect();
        let g = a.compose_analytic(&f).unwrap();
        assert_eq!(e.coeffs, g.coeffs);
    }

    #[test]
    fn pow_is_exp_log() {
        let (spec, vars) = ctx();
        let a = Egf::exp_z(&spec, &vars, 8); // constant term 1
        let r = rat("-1/2");
        let p = a.pow_rational(&r).unwrap();
        let q = a.log().unwrap().scale_rational(&r).exp().unwrap();
        assert_eq!(p.coeffs, q.coeffs);
        // squaring pow(A, -1/2) recovers 1/A
        let sq = p.mul(&p);
        let inv = a.inverse().unwrap();
        assert_eq!(sq.coeffs, inv.coeffs);
    }

    #[test]
    fn hadamard_identity_and_units() {
        let (spec, vars) = ctx();
        let e = Egf::exp_z(&spec, &vars, 8);
        let mut a = Egf::zero(&spec, &vars, 8);
        for n in 0..=8 {
            a.coeffs[n] = MarkedScalar::from_rational(&spec, &vars, rat(&format!("{}/7", n + 1)));
        }
        assert_eq!(a.hadamard(&e).coeffs, a.coeffs);
        assert_eq!(e.hadamard(&a).coeffs, a.coeffs);
    }

    #[test]
    fn robin_inverse_pair() {
        let (spec, vars) = ctx();
        let mut a = Egf::zero(&spec, &vars, 8);
        for n in 0..=8 {
            a.coeffs[n] = MarkedScalar::from_rational(&spec, &vars, rat(&format!("{}", 2 * n + 1)));
        }
        let b = a.robin(2).robin(-2);
        assert_eq!(a.coeffs, b.coeffs);
    }

    #[test]
    fn scale_z_powers() {
        let (spec, vars) = ctx();
        let e = Egf::exp_z(&spec, &vars, 6);
        let c = AlgNum::from_int(&spec, 2);
        let s = e.scale_z(&c);
        for n in 0..=6 {
            let expected = BigRational::from_integer(BigInt::from(2).pow(n as u32))
                / BigRational::from_integer(factorial(n));
            assert_eq!(s.coeff(n).as_alg().unwrap().as_rational().unwrap(), &expected);
        }
        let roundtrip = s.scale_z(&c.invert().unwrap());
        assert_eq!(roundtrip.coeffs, e.coeffs);
    }

    #[test]
    fn calculus_inverse_pair() {
        let (spec, vars) = ctx();
        let e = Egf::exp_z(&spec, &vars, 6);
        let back = e.antiderivative().derivative();
        assert_eq!(back.coeffs, e.coeffs);
        // derivative of e^z is e^z up to truncation
        let d = e.derivative();
        for n in 0..=5 {
            assert_eq!(d.coeff(n), e.coeff(n));
        }
    }

    #[test]
    fn constant_term_guards() {
        let (spec, vars) = ctx();
        let one = Egf::one(&spec, &vars, 4);
        assert!(matches!(one.exp(), Err(Error::BadConstantTerm { .. })));
        let z = Egf::z(&spec, &vars, 4);
        assert!(matches!(z.log(), Err(Error::BadConstantTerm { .. })));
        assert!(matches!(
            one.compose_analytic(&[]),
            Err(Error::NonzeroConstantTerm)
        ));
    }
}
