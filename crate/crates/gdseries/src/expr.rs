//! Expression DAG of series constructions.
//!
//! A [`SeriesExpr`] is the object the transfer operator recurses over: the
//! catalog stores every family as such an expression rather than a table of
//! numbers, so the same object feeds both numeric evaluation (to any
//! truncation order) and the structural transfer rules. Nodes are immutable
//! and shared through `Arc`; each node carries its inferred growth grade and
//! a write-once cache of the highest-order evaluation performed so far.
//!
//! The growth grade is the minimal beta with the series in the ring of
//! graphically divergent series of type (alpha, beta); grade 0 means
//! subcritical (convergent, exponential or factorial growth), for which every
//! transfer vanishes. Structural inference never underestimates the grade.

use std::sync::{Arc, Mutex};

use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{AlgNum, FieldSpec};
use crate::marked::{MarkedScalar, VarSet};
use crate::series::Egf;
use crate::util::binom2;

/// Shared parameters of a computation: the scalar field and the ordered
/// marking-variable set.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub spec: Arc<FieldSpec>,
    pub vars: Arc<VarSet>,
}

impl Ctx {
    pub fn new(spec: Arc<FieldSpec>, vars: Arc<VarSet>) -> Ctx {
        Ctx { spec, vars }
    }

    pub fn unmarked(spec: Arc<FieldSpec>) -> Ctx {
        Ctx {
            spec,
            vars: VarSet::empty(),
        }
    }

    pub fn one(&self) -> MarkedScalar {
        MarkedScalar::one(&self.spec, &self.vars)
    }

    pub fn rational(&self, r: BigRational) -> MarkedScalar {
        MarkedScalar::from_rational(&self.spec, &self.vars, r)
    }

    pub fn int(&self, k: i64) -> MarkedScalar {
        MarkedScalar::from_int(&self.spec, &self.vars, k)
    }

    pub fn var(&self, name: &str) -> Result<MarkedScalar> {
        MarkedScalar::var(&self.spec, &self.vars, name)
    }
}

/// An analytic function F(x) applied on top of a series with zero constant
/// term. Keeping the function symbolic (instead of a truncated coefficient
/// list) lets both evaluation and the chain rule produce F and F' to any
/// requested order.
#[derive(Debug, Clone)]
pub enum AnalyticFn {
    /// e^(c x)
    Exp { c: MarkedScalar },
    /// log(1 + c x)
    Log1p { c: MarkedScalar },
    /// (1 + c x)^r
    PowOnePlus { c: MarkedScalar, r: BigRational },
}

impl AnalyticFn {
    /// Power-series coefficients of F at the origin, up to `order`.
    pub fn coeffs(&self, ctx: &Ctx, order: usize) -> Vec<MarkedScalar> {
        let mut out = Vec::with_capacity(order + 1);
        match self {
            AnalyticFn::Exp { c } => {
                let mut cur = ctx.one();
                out.push(cur.clone());
                for k in 1..=order {
                    cur = cur
                        .checked_mul(c)
                        .expect("shape")
                        .scale_rational(&BigRational::new(1.into(), k.into()));
                    out.push(cur.clone());
                }
            }
            AnalyticFn::Log1p { c } => {
                out.push(MarkedScalar::zero(&ctx.spec, &ctx.vars));
                let mut cpow = ctx.one();
                for k in 1..=order {
                    cpow = cpow.checked_mul(c).expect("shape");
                    let sign = if k % 2 == 0 { -1 } else { 1 };
                    out.push(cpow.scale_rational(&BigRational::new(sign.into(), k.into())));
                }
            }
            AnalyticFn::PowOnePlus { c, r } => {
                // generalized binomial: C(r, k) c^k
                let mut cur = ctx.one();
                out.push(cur.clone());
                let mut falling = BigRational::one();
                for k in 1..=order {
                    falling *= r - BigRational::from_integer((k as i64 - 1).into());
                    cur = cur.checked_mul(c).expect("shape");
                    out.push(
                        cur.scale_rational(&(&falling / BigRational::from_integer(
                            crate::util::factorial(k),
                        ))),
                    );
                }
            }
        }
        out
    }

    /// F'(x) expressed as (prefactor, function of the same shape).
    pub fn derivative(&self) -> (MarkedScalar, AnalyticFn) {
        match self {
            AnalyticFn::Exp { c } => (c.clone(), AnalyticFn::Exp { c: c.clone() }),
            AnalyticFn::Log1p { c } => (
                c.clone(),
                AnalyticFn::PowOnePlus {
                    c: c.clone(),
                    r: -BigRational::one(),
                },
            ),
            AnalyticFn::PowOnePlus { c, r } => (
                c.scale_rational(r),
                AnalyticFn::PowOnePlus {
                    c: c.clone(),
                    r: r - BigRational::one(),
                },
            ),
        }
    }

    /// F(A(z)) for A with zero constant term, via the exact exp/log/pow
    /// recurrences of the series engine.
    pub fn apply(&self, a: &Egf) -> Result<Egf> {
        if !a.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        match self {
            AnalyticFn::Exp { c } => a.scale(c).exp(),
            AnalyticFn::Log1p { c } => {
                let one = Egf::one(a.spec(), a.vars(), a.order());
                one.add(&a.scale(c)).log()
            }
            AnalyticFn::PowOnePlus { c, r } => {
                let one = Egf::one(a.spec(), a.vars(), a.order());
                one.add(&a.scale(c)).pow_rational(r)
            }
        }
    }
}

#[derive(Debug)]
pub enum ExprOp {
    /// The generating atom of type beta: sum_n alpha^(beta C(n,2)) z^n / n!.
    GenAtom { beta: u32 },
    /// The identity series z (an auxiliary subcritical atom).
    Zed,
    /// A fixed truncated series with subcritical growth; evaluation beyond
    /// its stored order is an error rather than a silent extension.
    ConstSeries(Egf),
    /// A constant (the scalar as a degree-0 series).
    Scalar(MarkedScalar),
    Sum(SeriesExpr, SeriesExpr),
    Prod(SeriesExpr, SeriesExpr),
    ScalarMul(MarkedScalar, SeriesExpr),
    AnalyticComp { f: AnalyticFn, a: SeriesExpr },
    Pow(SeriesExpr, BigRational),
    /// The Robinson operator power Delta^m.
    Robin(SeriesExpr, i64),
    /// z -> c z. Transfers require c to be an integer power of alpha.
    ScaleZ(SeriesExpr, AlgNum),
    Deriv(SeriesExpr),
    Integ(SeriesExpr),
}

#[derive(Debug)]
pub struct ExprNode {
    pub op: ExprOp,
    grade: u32,
    spec: Arc<FieldSpec>,
    vars: Arc<VarSet>,
    cache: Mutex<Option<Egf>>,
}

/// A shared, immutable series expression.
#[derive(Debug, Clone)]
pub struct SeriesExpr(Arc<ExprNode>);

impl SeriesExpr {
    fn build(ctx_spec: &Arc<FieldSpec>, ctx_vars: &Arc<VarSet>, op: ExprOp, grade: u32) -> SeriesExpr {
        SeriesExpr(Arc::new(ExprNode {
            op,
            grade,
            spec: Arc::clone(ctx_spec),
            vars: Arc::clone(ctx_vars),
            cache: Mutex::new(None),
        }))
    }

    pub fn gen_atom(ctx: &Ctx, beta: u32) -> SeriesExpr {
        assert!(beta >= 1, "generating atoms have positive grade");
        SeriesExpr::build(&ctx.spec, &ctx.vars, ExprOp::GenAtom { beta }, beta)
    }

    pub fn z(ctx: &Ctx) -> SeriesExpr {
        SeriesExpr::build(&ctx.spec, &ctx.vars, ExprOp::Zed, 0)
    }

    pub fn const_series(egf: Egf) -> SeriesExpr {
        let spec = Arc::clone(egf.spec());
        let vars = Arc::clone(egf.vars());
        SeriesExpr::build(&spec, &vars, ExprOp::ConstSeries(egf), 0)
    }

    pub fn scalar(c: MarkedScalar) -> SeriesExpr {
        let spec = Arc::clone(c.spec());
        let vars = Arc::clone(c.vars());
        SeriesExpr::build(&spec, &vars, ExprOp::Scalar(c), 0)
    }

    pub fn one(ctx: &Ctx) -> SeriesExpr {
        SeriesExpr::scalar(ctx.one())
    }

    pub fn sum(&self, other: &SeriesExpr) -> SeriesExpr {
        let grade = self.grade().max(other.grade());
        SeriesExpr::build(
            &self.0.spec,
            &self.0.vars,
            ExprOp::Sum(self.clone(), other.clone()),
            grade,
        )
    }

    pub fn sub(&self, other: &SeriesExpr) -> SeriesExpr {
        let minus = other.scalar_mul(MarkedScalar::from_int(&self.0.spec, &self.0.vars, -1));
        self.sum(&minus)
    }

    pub fn prod(&self, other: &SeriesExpr) -> SeriesExpr {
        let grade = self.grade().max(other.grade());
        SeriesExpr::build(
            &self.0.spec,
            &self.0.vars,
            ExprOp::Prod(self.clone(), other.clone()),
            grade,
        )
    }

    pub fn scalar_mul(&self, c: MarkedScalar) -> SeriesExpr {
        let grade = self.grade();
        SeriesExpr::build(&self.0.spec, &self.0.vars, ExprOp::ScalarMul(c, self.clone()), grade)
    }

    pub fn compose(f: AnalyticFn, a: &SeriesExpr) -> SeriesExpr {
        let grade = a.grade();
        SeriesExpr::build(
            &a.0.spec,
            &a.0.vars,
            ExprOp::AnalyticComp { f, a: a.clone() },
            grade,
        )
    }

    pub fn pow(&self, r: BigRational) -> SeriesExpr {
        let grade = self.grade();
        SeriesExpr::build(&self.0.spec, &self.0.vars, ExprOp::Pow(self.clone(), r), grade)
    }

    pub fn powi(&self, k: i64) -> SeriesExpr {
        self.pow(BigRational::from_integer(k.into()))
    }

    /// grade(Robin(A, m)) = max(grade(A) - m, 0), 0 meaning subcritical.
    pub fn robin(&self, m: i64) -> SeriesExpr {
        let grade = (self.grade() as i64 - m).max(0) as u32;
        SeriesExpr::build(&self.0.spec, &self.0.vars, ExprOp::Robin(self.clone(), m), grade)
    }

    pub fn scale_z(&self, c: AlgNum) -> SeriesExpr {
        let grade = self.grade();
        SeriesExpr::build(&self.0.spec, &self.0.vars, ExprOp::ScaleZ(self.clone(), c), grade)
    }

    pub fn deriv(&self) -> SeriesExpr {
        let grade = self.grade();
        SeriesExpr::build(&self.0.spec, &self.0.vars, ExprOp::Deriv(self.clone()), grade)
    }

    pub fn integ(&self) -> SeriesExpr {
        let grade = self.grade();
        SeriesExpr::build(&self.0.spec, &self.0.vars, ExprOp::Integ(self.clone()), grade)
    }

    /// The inferred growth grade (sound upper bound; exact on the catalog).
    pub fn grade(&self) -> u32 {
        self.0.grade
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.0.spec
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.0.vars
    }

    pub fn node(&self) -> &ExprNode {
        &self.0
    }

    /// Stable identity for memoization: the shared node address.
    pub fn ptr_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Evaluate to the requested truncation order (exact, cached).
    pub fn eval(&self, order: usize) -> Result<Egf> {
        {
            let cache = self.0.cache.lock().unwrap();
            if let Some(e) = cache.as_ref() {
                if e.order() >= order {
                    return Ok(e.truncated(order));
                }
            }
        }
        let computed = self.eval_uncached(order)?;
        debug_assert!(computed.order() >= order);
        let result = computed.truncated(order);
        let mut cache = self.0.cache.lock().unwrap();
        let stale = cache.as_ref().map_or(true, |e| e.order() < computed.order());
        if stale {
            *cache = Some(computed);
        }
        Ok(result)
    }

    fn eval_uncached(&self, order: usize) -> Result<Egf> {
        let ctx = Ctx::new(Arc::clone(&self.0.spec), Arc::clone(&self.0.vars));
        match &self.0.op {
            ExprOp::GenAtom { beta } => {
                let mut coeffs = Vec::with_capacity(order + 1);
                for n in 0..=order {
                    let num = ctx.spec.alpha_pow_int(*beta as i64 * binom2(n as i64));
                    let r = num / BigRational::from_integer(crate::util::factorial(n));
                    coeffs.push(ctx.rational(r));
                }
                Ok(Egf::from_coeffs(
                    &ctx.spec,
                    &ctx.vars,
                    crate::series::SeriesKind::Exponential,
                    coeffs,
                ))
            }
            ExprOp::Zed => Ok(Egf::z(&ctx.spec, &ctx.vars, order)),
            ExprOp::ConstSeries(egf) => {
                if egf.order() < order {
                    return Err(Error::TruncationTooShort {
                        have: egf.order(),
                        want: order,
                    });
                }
                Ok(egf.truncated(order))
            }
            ExprOp::Scalar(c) => Ok(Egf::constant(&ctx.spec, &ctx.vars, c.clone(), order)),
            ExprOp::Sum(a, b) => Ok(a.eval(order)?.add(&b.eval(order)?)),
            ExprOp::Prod(a, b) => Ok(a.eval(order)?.mul(&b.eval(order)?)),
            ExprOp::ScalarMul(c, a) => Ok(a.eval(order)?.scale(c)),
            ExprOp::AnalyticComp { f, a } => f.apply(&a.eval(order)?),
            ExprOp::Pow(a, r) => {
                let base = a.eval(order)?;
                if r.denom().is_one() {
                    let k = r
                        .numer()
                        .try_into()
                        .map_err(|_| Error::Invalid("power exponent out of range".into()))?;
                    base.powi(k)
                } else {
                    base.pow_rational(r)
                }
            }
            ExprOp::Robin(a, m) => Ok(a.eval(order)?.robin(*m)),
            ExprOp::ScaleZ(a, c) => Ok(a.eval(order)?.scale_z(c)),
            ExprOp::Deriv(a) => Ok(a.eval(order + 1)?.derivative()),
            ExprOp::Integ(a) => {
                let inner = a.eval(order.saturating_sub(1))?;
                Ok(inner.antiderivative().truncated(order))
            }
        }
    }

    /// Counting coefficients n! [z^n] for n = 0..=order.
    pub fn counts(&self, order: usize) -> Result<Vec<MarkedScalar>> {
        let e = self.eval(order)?;
        Ok((0..=order).map(|n| e.count(n)).collect())
    }
}

/// Convenience: `c` as an integer power of alpha, or None.
pub fn as_alpha_power(spec: &Arc<FieldSpec>, c: &AlgNum) -> Option<i64> {
    let r = c.as_rational()?;
    if r.is_zero() || r.is_negative() {
        return None;
    }
    // Search small exponents: catalog uses |d| <= a handful.
    for d in -64..=64i64 {
        if &spec.alpha_pow_int(d) == r {
            return Some(d);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::parse_rational;
    use num::BigInt;

    fn ctx() -> Ctx {
        Ctx::unmarked(FieldSpec::alpha2())
    }

    #[test]
    fn gen_atom_counts_are_graph_counts() {
        let ctx = ctx();
        let g = SeriesExpr::gen_atom(&ctx, 1);
        let counts = g.counts(4).unwrap();
        let expected = [1i64, 1, 2, 8, 64];
        for (n, c) in counts.iter().enumerate() {
            assert_eq!(
                c.as_alg().unwrap().as_rational().unwrap(),
                &BigRational::from_integer(expected[n].into())
            );
        }
        assert_eq!(g.grade(), 1);
        let d = SeriesExpr::gen_atom(&ctx, 2);
        assert_eq!(
            d.counts(3).unwrap()[3].as_alg().unwrap().as_rational().unwrap(),
            &BigRational::from_integer(BigInt::from(64)) // 2^(2*3) = 64
        );
    }

    #[test]
    fn grade_rules() {
        let ctx = ctx();
        let g = SeriesExpr::gen_atom(&ctx, 1);
        let d = SeriesExpr::gen_atom(&ctx, 2);
        assert_eq!(g.prod(&d).grade(), 2);
        assert_eq!(d.robin(2).grade(), 0);
        assert_eq!(g.robin(-1).grade(), 2);
        assert_eq!(SeriesExpr::compose(AnalyticFn::Exp { c: ctx.one() }, &g).grade(), 1);
        assert_eq!(SeriesExpr::z(&ctx).grade(), 0);
    }

    #[test]
    fn shift_grade_and_eval() {
        let ctx = ctx();
        let g = SeriesExpr::gen_atom(&ctx, 1);
        let s = g.scale_z(AlgNum::from_int(&ctx.spec, 2));
        assert_eq!(s.grade(), 1);
        let c = s.counts(3).unwrap();
        // counts become 2^n 2^C(n,2)
        assert_eq!(
            c[3].as_alg().unwrap().as_rational().unwrap(),
            &BigRational::from_integer(BigInt::from(8 * 8))
        );
    }

    #[test]
    fn deriv_shifts_counts() {
        let ctx = ctx();
        let g = SeriesExpr::gen_atom(&ctx, 1);
        let d = g.deriv();
        // n! [z^n] G' = a_{n+1} = 2^C(n+1,2)
        let c = d.counts(3).unwrap();
        assert_eq!(
            c[3].as_alg().unwrap().as_rational().unwrap(),
            &parse_rational("64").unwrap()
        );
        let back = d.integ();
        let c2 = back.counts(4).unwrap();
        assert_eq!(
            c2[4].as_alg().unwrap().as_rational().unwrap(),
            &parse_rational("64").unwrap()
        );
        assert!(c2[0].is_zero());
    }

    #[test]
    fn alpha_power_detection() {
        let spec = FieldSpec::alpha2();
        assert_eq!(as_alpha_power(&spec, &AlgNum::from_int(&spec, 2)), Some(1));
        assert_eq!(
            as_alpha_power(
                &spec,
                &AlgNum::from_rational(&spec, parse_rational("1/2").unwrap())
            ),
            Some(-1)
        );
        assert_eq!(as_alpha_power(&spec, &AlgNum::from_int(&spec, 3)), None);
        assert_eq!(as_alpha_power(&spec, &AlgNum::from_int(&spec, 1)), Some(0));
    }
}
