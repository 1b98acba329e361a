//! Sparse multivariate polynomials in marking variables over an AlgNum field.
//!
//! A [`MarkedScalar`] is the coefficient domain of every series in the crate:
//! unmarked computations simply use an empty variable set, in which case each
//! scalar holds at most one term. No stored term has a zero value and
//! exponent vectors are componentwise non-negative; the variable set is fixed
//! for a whole computation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigRational, One};

use crate::error::{Error, Result};
use crate::field::{AlgNum, FieldSpec};

/// An ordered set of marking-variable names, fixed per computation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<VarSet> {
        Arc::new(VarSet {
            names: names.into_iter().map(Into::into).collect(),
        })
    }

    pub fn empty() -> Arc<VarSet> {
        Arc::new(VarSet::default())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Sparse polynomial: exponent vector over the variable set -> AlgNum.
#[derive(Clone, PartialEq, Eq)]
pub struct MarkedScalar {
    spec: Arc<FieldSpec>,
    vars: Arc<VarSet>,
    terms: BTreeMap<Vec<u32>, AlgNum>,
}

impl MarkedScalar {
    pub fn zero(spec: &Arc<FieldSpec>, vars: &Arc<VarSet>) -> MarkedScalar {
        MarkedScalar {
            spec: Arc::clone(spec),
            vars: Arc::clone(vars),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: &Arc<FieldSpec>, vars: &Arc<VarSet>) -> MarkedScalar {
        MarkedScalar::from_alg(vars, AlgNum::one(spec))
    }

    pub fn from_alg(vars: &Arc<VarSet>, value: AlgNum) -> MarkedScalar {
        let mut s = MarkedScalar {
            spec: Arc::clone(value.spec()),
            vars: Arc::clone(vars),
            terms: BTreeMap::new(),
        };
        if !value.is_zero() {
            s.terms.insert(vec![0; s.vars.len()], value);
        }
        s
    }

    pub fn from_rational(
        spec: &Arc<FieldSpec>,
        vars: &Arc<VarSet>,
        r: BigRational,
    ) -> MarkedScalar {
        MarkedScalar::from_alg(vars, AlgNum::from_rational(spec, r))
    }

    pub fn from_int(spec: &Arc<FieldSpec>, vars: &Arc<VarSet>, k: i64) -> MarkedScalar {
        MarkedScalar::from_alg(vars, AlgNum::from_int(spec, k))
    }

    /// The monomial `name` with coefficient 1.
    pub fn var(spec: &Arc<FieldSpec>, vars: &Arc<VarSet>, name: &str) -> Result<MarkedScalar> {
        let idx = vars
            .index_of(name)
            .ok_or_else(|| Error::Invalid(format!("unknown marking variable `{name}`")))?;
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut s = MarkedScalar::zero(spec, vars);
        s.terms.insert(exps, AlgNum::one(spec));
        Ok(s)
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &AlgNum)> {
        self.terms.iter()
    }

    fn same_shape(&self, other: &MarkedScalar) -> Result<()> {
        if !(Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars) {
            return Err(Error::VariableSetMismatch);
        }
        if !(Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec) {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    fn insert_add(&mut self, exps: Vec<u32>, value: AlgNum) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().checked_add(&value).expect("same spec");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn checked_add(&self, other: &MarkedScalar) -> Result<MarkedScalar> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.insert_add(e.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MarkedScalar) -> Result<MarkedScalar> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.insert_add(e.clone(), -v);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MarkedScalar) -> Result<MarkedScalar> {
        self.same_shape(other)?;
        let mut out = MarkedScalar::zero(&self.spec, &self.vars);
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_add(exps, va.checked_mul(vb)?);
            }
        }
        Ok(out)
    }

    pub fn scale_alg(&self, c: &AlgNum) -> MarkedScalar {
        if c.is_zero() {
            return MarkedScalar::zero(&self.spec, &self.vars);
        }
        let mut out = MarkedScalar::zero(&self.spec, &self.vars);
        for (e, v) in &self.terms {
            out.insert_add(e.clone(), v.checked_mul(c).expect("same spec"));
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> MarkedScalar {
        self.scale_alg(&AlgNum::from_rational(&self.spec, r.clone()))
    }

    /// The coefficient of the requested monomial (zero when absent).
    pub fn coeff(&self, exps: &[u32]) -> AlgNum {
        assert_eq!(exps.len(), self.vars.len(), "exponent vector length");
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| AlgNum::zero(&self.spec))
    }

    /// Extract the coefficient of `var^k`, keeping the remaining variables.
    pub fn slice_var(&self, var_idx: usize, k: u32) -> MarkedScalar {
        let mut out = MarkedScalar::zero(&self.spec, &self.vars);
        for (e, v) in &self.terms {
            if e[var_idx] == k {
                let mut e2 = e.clone();
                e2[var_idx] = 0;
                out.insert_add(e2, v.clone());
            }
        }
        out
    }

    /// Substitute every variable by the given values.
    pub fn eval(&self, values: &[AlgNum]) -> AlgNum {
        assert_eq!(values.len(), self.vars.len(), "value vector length");
        let mut acc = AlgNum::zero(&self.spec);
        for (e, v) in &self.terms {
            let mut term = v.clone();
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    let p = values[i].pow_int(exp as i64).expect("positive power");
                    term = term.checked_mul(&p).expect("same spec");
                }
            }
            acc = acc.checked_add(&term).expect("same spec");
        }
        acc
    }

    /// Substitute 1 for every marking variable.
    pub fn eval_at_ones(&self) -> AlgNum {
        let ones = vec![AlgNum::one(&self.spec); self.vars.len()];
        self.eval(&ones)
    }

    /// The value as a plain AlgNum, when no variable occurs.
    pub fn as_alg(&self) -> Option<AlgNum> {
        if self.terms.is_empty() {
            return Some(AlgNum::zero(&self.spec));
        }
        if self.terms.len() == 1 {
            let (e, v) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(v.clone());
            }
        }
        None
    }

    /// Inverse of a constant (variable-free) scalar.
    pub fn invert_const(&self) -> Result<MarkedScalar> {
        let v = self
            .as_alg()
            .ok_or_else(|| Error::Invalid("cannot invert a scalar containing marks".into()))?;
        Ok(MarkedScalar::from_alg(&self.vars, v.invert()?))
    }

    pub fn neg(&self) -> MarkedScalar {
        self.scale_rational(&-BigRational::one())
    }
}

impl fmt::Display for MarkedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &exp)| exp > 0)
                .map(|(i, &exp)| {
                    if exp == 1 {
                        self.vars.names()[i].clone()
                    } else {
                        format!("{}^{}", self.vars.names()[i], exp)
                    }
                })
                .collect();
            let coeff = v.to_string();
            if monomial.is_empty() {
                write!(f, "{}", coeff)?;
            } else if coeff == "1" {
                write!(f, "{}", monomial.join("*"))?;
            } else if coeff.contains(' ') {
                write!(f, "({})*{}", coeff, monomial.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MarkedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::parse_rational;

    fn setup() -> (Arc<FieldSpec>, Arc<VarSet>) {
        (FieldSpec::alpha2(), VarSet::new(["t", "u"]))
    }

    #[test]
    fn product_of_variables() {
        let (spec, vars) = setup();
        let t = MarkedScalar::var(&spec, &vars, "t").unwrap();
        let t2 = t.checked_mul(&t).unwrap();
        assert_eq!(t2.coeff(&[2, 0]), AlgNum::one(&spec));
        assert!(t2.coeff(&[1, 0]).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let (spec, vars) = setup();
        let one = MarkedScalar::one(&spec, &vars);
        let u = MarkedScalar::var(&spec, &vars, "u").unwrap();
        let a = one.checked_add(&u).unwrap();
        let b = one.checked_sub(&u).unwrap();
        let p = a.checked_mul(&b).unwrap();
        assert_eq!(p.coeff(&[0, 0]), AlgNum::one(&spec));
        assert!(p.coeff(&[0, 1]).is_zero());
        assert_eq!(p.coeff(&[0, 2]), AlgNum::from_int(&spec, -1));
    }

    #[test]
    fn binomial_extraction() {
        // extract((1+u)^5, u^2) = 10
        let (spec, vars) = setup();
        let one = MarkedScalar::one(&spec, &vars);
        let u = MarkedScalar::var(&spec, &vars, "u").unwrap();
        let a = one.checked_add(&u).unwrap();
        let mut p = MarkedScalar::one(&spec, &vars);
        for _ in 0..5 {
            p = p.checked_mul(&a).unwrap();
        }
        assert_eq!(p.coeff(&[0, 2]), AlgNum::from_int(&spec, 10));
        assert!(p.coeff(&[3, 3]).is_zero());
    }

    #[test]
    fn eval_substitutes_marks() {
        let (spec, vars) = setup();
        let t = MarkedScalar::var(&spec, &vars, "t").unwrap();
        let u = MarkedScalar::var(&spec, &vars, "u").unwrap();
        let expr = t
            .checked_mul(&t)
            .unwrap()
            .checked_add(&u.scale_rational(&parse_rational("3").unwrap()))
            .unwrap();
        // t = 2, u = 1/3 -> 4 + 1 = 5
        let v = expr.eval(&[
            AlgNum::from_int(&spec, 2),
            AlgNum::from_rational(&spec, parse_rational("1/3").unwrap()),
        ]);
        assert_eq!(v, AlgNum::from_int(&spec, 5));
        assert_eq!(expr.eval_at_ones(), AlgNum::from_int(&spec, 4));
    }

    #[test]
    fn variable_set_mismatch() {
        let spec = FieldSpec::alpha2();
        let a = MarkedScalar::one(&spec, &VarSet::new(["t"]));
        let b = MarkedScalar::one(&spec, &VarSet::new(["s"]));
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::VariableSetMismatch)
        ));
    }
}
