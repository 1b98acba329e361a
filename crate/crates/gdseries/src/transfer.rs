//! The asymptotic-transfer calculus: Coefficient GFs computed structurally
//! from series expressions.
//!
//! A [`CoeffGf`] of type (alpha, beta) packages the two-dimensional array of
//! normalized expansion coefficients of a graphically divergent series: the
//! sequence a_n expands as
//!
//! ```text
//! a_n ~ alpha^(beta C(n,2)) * sum_{m >= M} alpha^(-m n)
//!        * sum_l n^(falling l) * table[(m, l)]
//! ```
//!
//! The table stores the entries a°_{m,l} directly; the alpha^(-C(m,2)/beta)
//! basis normalization is applied only when rendering or evaluating, which
//! keeps the basis change a pure retag and keeps catalog entries rational.
//!
//! [`transfer`] walks an expression DAG and applies one rule per node kind:
//! sum and product rules, the chain rule for analytic compositions, the power
//! rule, the kernel and inclusion rules (a grade strictly below the requested
//! beta transfers to zero), the commutative-diagram routing for Robinson
//! powers, the shift rule for z -> alpha^d z, and the derivative/integral
//! rules. Each rule is an exact finite table operation; nothing is fitted.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::expr::{as_alpha_power, ExprOp, SeriesExpr};
use crate::field::{AlgNum, FieldSpec};
use crate::marked::{MarkedScalar, VarSet};
use crate::util::{binom2, factorial, format_rational};

/// A truncated bivariate table of expansion coefficients, tagged with its
/// basis (alpha, beta) and complete for every m <= z_order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffGf {
    spec: Arc<FieldSpec>,
    vars: Arc<VarSet>,
    beta: u32,
    z_order: i64,
    table: BTreeMap<(i64, u32), MarkedScalar>,
}

impl CoeffGf {
    pub fn zero(spec: &Arc<FieldSpec>, vars: &Arc<VarSet>, beta: u32, z_order: i64) -> CoeffGf {
        CoeffGf {
            spec: Arc::clone(spec),
            vars: Arc::clone(vars),
            beta,
            z_order,
            table: BTreeMap::new(),
        }
    }

    /// The table of the generating atom: the single entry a°_{0,0} = 1.
    pub fn unit(spec: &Arc<FieldSpec>, vars: &Arc<VarSet>, beta: u32, z_order: i64) -> CoeffGf {
        let mut c = CoeffGf::zero(spec, vars, beta, z_order);
        c.insert_add(0, 0, MarkedScalar::one(spec, vars));
        c
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn z_order(&self) -> i64 {
        self.z_order
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    /// Smallest m with a nonzero entry, when the table is not empty.
    pub fn m_min(&self) -> Option<i64> {
        self.table.keys().map(|&(m, _)| m).min()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(i64, u32), &MarkedScalar)> {
        self.table.iter()
    }

    pub fn max_ell(&self) -> u32 {
        self.table.keys().map(|&(_, l)| l).max().unwrap_or(0)
    }

    fn insert_add(&mut self, m: i64, l: u32, v: MarkedScalar) {
        if v.is_zero() || m > self.z_order {
            return;
        }
        match self.table.entry((m, l)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().checked_add(&v).expect("shape");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// The exact entry a°_{m,l} at the given mark exponents (zero if absent).
    pub fn extract(&self, m: i64, l: u32, marks: &[u32]) -> AlgNum {
        match self.table.get(&(m, l)) {
            Some(v) => v.coeff(marks),
            None => AlgNum::zero(&self.spec),
        }
    }

    /// The full marked entry a°_{m,l}.
    pub fn entry(&self, m: i64, l: u32) -> MarkedScalar {
        self.table
            .get(&(m, l))
            .cloned()
            .unwrap_or_else(|| MarkedScalar::zero(&self.spec, &self.vars))
    }

    pub fn add(&self, other: &CoeffGf) -> CoeffGf {
        assert_eq!(self.beta, other.beta, "basis mismatch");
        let mut out = CoeffGf::zero(
            &self.spec,
            &self.vars,
            self.beta,
            self.z_order.min(other.z_order),
        );
        for (&(m, l), v) in &self.table {
            out.insert_add(m, l, v.clone());
        }
        for (&(m, l), v) in &other.table {
            out.insert_add(m, l, v.clone());
        }
        out
    }

    pub fn scale(&self, c: &MarkedScalar) -> CoeffGf {
        let mut out = CoeffGf::zero(&self.spec, &self.vars, self.beta, self.z_order);
        for (&(m, l), v) in &self.table {
            out.insert_add(m, l, v.checked_mul(c).expect("shape"));
        }
        out
    }

    /// Basis change B^{beta -> beta2}: identical table, re-tagged basis.
    pub fn retag(&self, beta2: u32) -> Result<CoeffGf> {
        check_beta_supported(&self.spec, beta2)?;
        let mut out = self.clone();
        out.beta = beta2;
        Ok(out)
    }

    /// The shift rule for B(z) = A(alpha^d z): a pure m-shift of the table.
    pub fn shift_m(&self, d: i64) -> CoeffGf {
        let mut out = CoeffGf::zero(&self.spec, &self.vars, self.beta, self.z_order - d);
        for (&(m, l), v) in &self.table {
            out.insert_add(m - d, l, v.clone());
        }
        out
    }

    /// Multiply by X(alpha^((beta+1)/2) z^beta w), X given by its counting
    /// coefficients x_k = k! [z^k] X. In extracted form the (m, l) entry of
    /// the product is
    ///   sum_k x_k alpha^(k m - beta C(k,2)) / k! * self[(m - beta k, l - k)].
    pub fn mul_insertion(&self, x_counts: &[MarkedScalar]) -> CoeffGf {
        let beta = self.beta as i64;
        let mut out = CoeffGf::zero(&self.spec, &self.vars, self.beta, self.z_order);
        for (k, xk) in x_counts.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            let k_i = k as i64;
            for (&(m0, l0), v) in &self.table {
                let m = m0 + beta * k_i;
                if m > self.z_order {
                    continue;
                }
                // alpha^(k m - beta C(k,2)) = alpha^(k m0 + beta C(k+1,2))
                let e = k_i * m0 + beta * binom2(k_i + 1);
                let factor = self.spec.alpha_pow_int(e)
                    / BigRational::from_integer(factorial(k));
                let term = v
                    .checked_mul(xk)
                    .expect("shape")
                    .scale_rational(&factor);
                out.insert_add(m, l0 + k as u32, term);
            }
        }
        out
    }

    /// The derivative rule: (Q A')(z,w) = (Q A + d/dw Q A) / (alpha^((beta+1)/2) z^beta),
    /// in table form b[(m - beta, l)] = alpha^(-m) (a[(m,l)] + (l+1) a[(m,l+1)]).
    pub fn deriv_rule(&self) -> CoeffGf {
        let beta = self.beta as i64;
        let mut out = CoeffGf::zero(&self.spec, &self.vars, self.beta, self.z_order - beta);
        for (&(m, l), v) in &self.table {
            let factor = self.spec.alpha_pow_int(-m);
            out.insert_add(m - beta, l, v.scale_rational(&factor));
            if l >= 1 {
                let w = v.scale_rational(&(factor * BigRational::from_integer(l.into())));
                out.insert_add(m - beta, l - 1, w);
            }
        }
        out
    }

    /// The integral rule: (Q int A)(z,w) = alpha^((beta+1)/2) z^beta
    /// sum_k (-1)^k d^k/dw^k (Q A), in table form
    /// b[(m + beta, l)] = alpha^(m + beta) sum_k (-1)^k ((l+k)!/l!) a[(m, l+k)].
    pub fn integ_rule(&self) -> CoeffGf {
        let beta = self.beta as i64;
        let mut out = CoeffGf::zero(&self.spec, &self.vars, self.beta, self.z_order + beta);
        for (&(m, l0), v) in &self.table {
            let factor = self.spec.alpha_pow_int(m + beta);
            // source (m, l0) contributes to every l <= l0 with sign (-1)^(l0-l)
            for l in 0..=l0 {
                let k = l0 - l;
                let mut c = BigRational::from_integer(factorial(l0 as usize))
                    / BigRational::from_integer(factorial(l as usize));
                if k % 2 == 1 {
                    c = -c;
                }
                out.insert_add(m + beta, l, v.scale_rational(&(c * &factor)));
            }
        }
        out
    }

    /// [u^k]-slice along one marking variable, keeping the variable set.
    pub fn slice_var(&self, var_idx: usize, k: u32) -> CoeffGf {
        let mut out = CoeffGf::zero(&self.spec, &self.vars, self.beta, self.z_order);
        for (&(m, l), v) in &self.table {
            out.insert_add(m, l, v.slice_var(var_idx, k));
        }
        out
    }

    /// Evaluate the Coefficient GF as a bivariate series coefficient:
    /// [z^m w^l] A°(z,w) = a°_{m,l} alpha^(-C(m,2)/beta).
    pub fn series_coeff(&self, m: i64, l: u32) -> Result<AlgNum> {
        let e = BigRational::new(BigInt::from(-binom2(m)), BigInt::from(self.beta));
        let norm = AlgNum::alpha_pow(&self.spec, &e)?;
        let entry = self
            .entry(m, l)
            .as_alg()
            .ok_or_else(|| Error::Invalid("series_coeff on a marked entry".into()))?;
        entry.checked_mul(&norm)
    }

    /// Render in the appendix layout: rows m, columns l, exact entries.
    pub fn render_table(&self) -> String {
        let m_lo = self.m_min().unwrap_or(0).min(0);
        let l_hi = self.max_ell();
        let mut rows: Vec<Vec<String>> = vec![];
        let mut header: Vec<String> = vec!["m\\l".to_string()];
        header.extend((0..=l_hi).map(|l| l.to_string()));
        rows.push(header);
        for m in m_lo..=self.z_order {
            let mut row = vec![m.to_string()];
            for l in 0..=l_hi {
                let v = self.entry(m, l);
                row.push(if v.is_zero() { ".".into() } else { v.to_string() });
            }
            rows.push(row);
        }
        let ncols = rows[0].len();
        let widths: Vec<usize> = (0..ncols)
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(1))
            .collect();
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .map(|(c, s)| format!("{:>width$}", s, width = widths[c]))
                    .collect::<Vec<_>>()
                    .join("  ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// JSON dump: {"alpha","beta","m_min","entries":[{"m","l","marks","value",...}]}.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .table
            .iter()
            .flat_map(|(&(m, l), v)| {
                v.terms().map(move |(exps, alg)| {
                    let marks: serde_json::Map<String, serde_json::Value> = self
                        .vars
                        .names()
                        .iter()
                        .zip(exps)
                        .filter(|(_, &e)| e > 0)
                        .map(|(n, &e)| (n.clone(), serde_json::json!(e)))
                        .collect();
                    serde_json::json!({
                        "m": m,
                        "l": l,
                        "marks": marks,
                        "value": alg.to_json(),
                        "value_str": alg.to_string(),
                    })
                })
            })
            .collect();
        serde_json::json!({
            "alpha": format_rational(self.spec.alpha()),
            "beta": self.beta,
            "m_min": self.m_min(),
            "z_order": self.z_order,
            "entries": entries,
        })
    }
}

fn check_beta_supported(spec: &Arc<FieldSpec>, beta: u32) -> Result<()> {
    if beta == 0 || spec.root_degree() % beta != 0 {
        return Err(Error::ExponentDenominatorMismatch(BigRational::new(
            1.into(),
            BigInt::from(beta.max(1)),
        )));
    }
    Ok(())
}

/// Number of multiplier coefficients needed so every product entry with
/// m <= z_order is complete.
fn needed_order(z_order: i64, m_min: Option<i64>, beta: u32) -> usize {
    match m_min {
        None => 0,
        Some(mm) => {
            if z_order < mm {
                0
            } else {
                ((z_order - mm) / beta as i64) as usize
            }
        }
    }
}

/// Compute the Coefficient GF of type (alpha, beta) of an expression, exact
/// and complete for all m <= z_order.
///
/// Errors with [`Error::GradeTooHigh`] when the expression's growth grade
/// exceeds beta, and with [`Error::ExponentDenominatorMismatch`] when the
/// field's root degree cannot represent the basis normalization.
pub fn transfer(e: &SeriesExpr, beta: u32, z_order: i64) -> Result<CoeffGf> {
    check_beta_supported(e.spec(), beta)?;
    if e.grade() > beta {
        return Err(Error::GradeTooHigh {
            grade: e.grade(),
            beta,
        });
    }
    let mut memo = HashMap::new();
    transfer_rec(e, beta, z_order, &mut memo)
}

type Memo = HashMap<(usize, u32, i64), CoeffGf>;

fn transfer_rec(e: &SeriesExpr, beta: u32, z_order: i64, memo: &mut Memo) -> Result<CoeffGf> {
    let key = (e.ptr_id(), beta, z_order);
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let result = transfer_node(e, beta, z_order, memo)?;
    memo.insert(key, result.clone());
    Ok(result)
}

fn transfer_node(e: &SeriesExpr, beta: u32, z_order: i64, memo: &mut Memo) -> Result<CoeffGf> {
    let spec = e.spec();
    let vars = e.vars();
    // Ring inclusion / conversion kernel: any strictly smaller grade
    // transfers to zero at this beta.
    if e.grade() < beta {
        return Ok(CoeffGf::zero(spec, vars, beta, z_order));
    }
    match &e.node().op {
        ExprOp::GenAtom { beta: b } => {
            debug_assert_eq!(*b, beta);
            Ok(CoeffGf::unit(spec, vars, beta, z_order))
        }
        // Subcritical atoms have grade 0 < beta and are caught above.
        ExprOp::Zed | ExprOp::ConstSeries(_) | ExprOp::Scalar(_) => {
            unreachable!("subcritical atoms transfer to zero")
        }
        ExprOp::Sum(a, b) => {
            let qa = transfer_rec(a, beta, z_order, memo)?;
            let qb = transfer_rec(b, beta, z_order, memo)?;
            Ok(qa.add(&qb))
        }
        ExprOp::ScalarMul(c, a) => Ok(transfer_rec(a, beta, z_order, memo)?.scale(c)),
        ExprOp::Prod(a, b) => {
            let qa = transfer_rec(a, beta, z_order, memo)?;
            let qb = transfer_rec(b, beta, z_order, memo)?;
            let mut out = CoeffGf::zero(spec, vars, beta, z_order);
            if !qb.is_zero() {
                let ka = needed_order(z_order, qb.m_min(), beta);
                let a_counts = a.counts(ka)?;
                out = out.add(&qb.mul_insertion(&a_counts));
            }
            if !qa.is_zero() {
                let kb = needed_order(z_order, qa.m_min(), beta);
                let b_counts = b.counts(kb)?;
                out = out.add(&qa.mul_insertion(&b_counts));
            }
            Ok(out)
        }
        ExprOp::AnalyticComp { f, a } => {
            let qa = transfer_rec(a, beta, z_order, memo)?;
            if qa.is_zero() {
                return Ok(CoeffGf::zero(spec, vars, beta, z_order));
            }
            let k = needed_order(z_order, qa.m_min(), beta);
            let (prefactor, fd) = f.derivative();
            let h = fd.apply(&a.eval(k)?)?.scale(&prefactor);
            let h_counts: Vec<MarkedScalar> = (0..=k).map(|i| h.count(i)).collect();
            Ok(qa.mul_insertion(&h_counts))
        }
        ExprOp::Pow(a, r) => {
            let qa = transfer_rec(a, beta, z_order, memo)?;
            if qa.is_zero() || r.is_zero() {
                return Ok(CoeffGf::zero(spec, vars, beta, z_order));
            }
            let k = needed_order(z_order, qa.m_min(), beta);
            let base = a.eval(k)?;
            let rm1 = r - BigRational::one();
            let pw = if rm1.denom().is_one() {
                let e: i64 = rm1
                    .numer()
                    .try_into()
                    .map_err(|_| Error::Invalid("power exponent out of range".into()))?;
                base.powi(e)?
            } else {
                base.pow_rational(&rm1)?
            };
            let counts: Vec<MarkedScalar> = (0..=k).map(|i| pw.count(i)).collect();
            Ok(qa
                .mul_insertion(&counts)
                .scale(&MarkedScalar::from_rational(spec, vars, r.clone())))
        }
        ExprOp::Robin(a, m) => {
            // grade(e) == beta here, so grade(a) == beta + m; route through
            // the commutative diagram Q^beta(Delta^m A) = B^(beta+m -> beta)(Q^(beta+m) A).
            if a.grade() == 0 {
                return Err(Error::Invalid(
                    "a negative Robinson power of a subcritical series is outside the ring"
                        .into(),
                ));
            }
            let beta1 = a.grade();
            debug_assert_eq!(beta1 as i64, beta as i64 + m);
            check_beta_supported(spec, beta1)?;
            let qa = transfer_rec(a, beta1, z_order, memo)?;
            qa.retag(beta)
        }
        ExprOp::ScaleZ(a, c) => {
            let d = as_alpha_power(spec, c).ok_or_else(|| {
                Error::Invalid(format!(
                    "transfer of a z-scaling requires an integer power of alpha, got {c}"
                ))
            })?;
            Ok(transfer_rec(a, beta, z_order + d, memo)?.shift_m(d))
        }
        ExprOp::Deriv(a) => {
            Ok(transfer_rec(a, beta, z_order + beta as i64, memo)?.deriv_rule())
        }
        ExprOp::Integ(a) => {
            Ok(transfer_rec(a, beta, z_order - beta as i64, memo)?.integ_rule())
        }
    }
}

/// The closed form for the strongly-connected-digraph coefficients:
///
/// scd°_{m,l} = 2^(m(m+1)/2 + l(l-m)) * ssd_{m-l}/(m-l)! * b_{2l-m}/(2l-m)!
/// with b_n = [n=0] - 2 it_n + it2_n, supported on ceil(m/2) <= l <= m.
///
/// The sequences are taken from the catalog at alpha = 2.
pub fn scd_closed_form(spec: &Arc<FieldSpec>, m: i64, l: u32) -> Result<AlgNum> {
    if !spec.alpha_is_two() {
        return Err(Error::UnsupportedAlpha("scd closed form".into()));
    }
    let l = l as i64;
    if m < 0 || l > m || 2 * l < m {
        return Ok(AlgNum::zero(spec));
    }
    let n_max = m as usize;
    let it_fam = crate::families::build_family("it", spec)?;
    let it = it_fam.integer_counts(n_max)?;
    let it2 = crate::families::square_counts(&it_fam, n_max)?;
    let ssd = crate::families::build_family("ssd", spec)?.integer_counts(n_max)?;
    let b = |n: usize| -> BigInt {
        let mut v = if n == 0 { BigInt::one() } else { BigInt::zero() };
        v -= 2 * &it[n];
        v += &it2[n];
        v
    };
    let e = m * (m + 1) / 2 + l * (l - m);
    let scale = spec.alpha_pow_int(e);
    let k1 = (m - l) as usize;
    let k2 = (2 * l - m) as usize;
    let value = scale * BigRational::new(ssd[k1].clone(), factorial(k1))
        * BigRational::new(b(k2), factorial(k2));
    Ok(AlgNum::from_rational(spec, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Ctx;
    use crate::families::build_family;
    use crate::util::parse_rational;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn alg(spec: &Arc<FieldSpec>, s: &str) -> AlgNum {
        AlgNum::from_rational(spec, rat(s))
    }

    #[test]
    fn graph_atom_transfers_to_one() {
        let spec = FieldSpec::alpha2();
        let g = build_family("g", &spec).unwrap();
        let q = transfer(&g.formula, 1, 6).unwrap();
        assert_eq!(q.extract(0, 0, &[]), AlgNum::one(&spec));
        assert_eq!(q.entries().count(), 1);
        let d = build_family("d", &spec).unwrap();
        let q2 = transfer(&d.formula, 2, 6).unwrap();
        assert_eq!(q2.extract(0, 0, &[]), AlgNum::one(&spec));
        assert_eq!(q2.entries().count(), 1);
    }

    #[test]
    fn ring_inclusion_gives_zero() {
        let spec = FieldSpec::alpha2();
        let cg = build_family("cg", &spec).unwrap();
        let q = transfer(&cg.formula, 2, 6).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn grade_too_high_is_reported() {
        let spec = FieldSpec::alpha2();
        let d = build_family("d", &spec).unwrap();
        assert!(matches!(
            transfer(&d.formula, 1, 4),
            Err(Error::GradeTooHigh { grade: 2, beta: 1 })
        ));
    }

    #[test]
    fn connected_graph_diagonal() {
        // (Q CG)(z,w) = 1 - IT(2zw): a°_{m,m} = -it_m 2^C(m+1,2) / m!
        let spec = FieldSpec::alpha2();
        let cg = build_family("cg", &spec).unwrap();
        let q = transfer(&cg.formula, 1, 7).unwrap();
        let expected = [
            "1",
            "-2",
            "0",
            "-64/3",
            "-1024",
            "-2228224/15",
            "-65011712",
            "-28143578513408/315",
        ];
        for (m, want) in expected.iter().enumerate() {
            assert_eq!(
                q.extract(m as i64, m as u32, &[]),
                alg(&spec, want),
                "cg diagonal at m = {m}"
            );
        }
        // strictly diagonal
        for (&(m, l), _) in q.entries() {
            assert_eq!(m, l as i64);
        }
    }

    #[test]
    fn irreducible_tournament_diagonal() {
        let spec = FieldSpec::alpha2();
        let it = build_family("it", &spec).unwrap();
        let q = transfer(&it.formula, 1, 7).unwrap();
        let expected = [
            "1",
            "-4",
            "8",
            "-128/3",
            "-4096/3",
            "-3473408/15",
            "-4984930304/45",
            "-50988241125376/315",
        ];
        for (m, want) in expected.iter().enumerate() {
            assert_eq!(
                q.extract(m as i64, m as u32, &[]),
                alg(&spec, want),
                "it diagonal at m = {m}"
            );
        }
    }

    #[test]
    fn scd_table_matches_closed_form() {
        let spec = FieldSpec::alpha2();
        let scd = build_family("scd", &spec).unwrap();
        let q = transfer(&scd.formula, 2, 6).unwrap();
        for m in 0..=6i64 {
            for l in 0..=6u32 {
                let closed = scd_closed_form(&spec, m, l).unwrap();
                assert_eq!(q.extract(m, l, &[]), closed, "scd table at ({m},{l})");
            }
        }
        // spot values from the printed table
        assert_eq!(q.extract(1, 1, &[]), alg(&spec, "-4"));
        assert_eq!(q.extract(2, 1, &[]), alg(&spec, "4"));
        assert_eq!(q.extract(2, 2, &[]), alg(&spec, "8"));
        assert_eq!(q.extract(3, 2, &[]), alg(&spec, "-32"));
        assert_eq!(q.extract(3, 3, &[]), alg(&spec, "-128/3"));
        assert_eq!(q.extract(4, 2, &[]), alg(&spec, "64"));
        assert_eq!(q.extract(6, 6, &[]), alg(&spec, "-4984930304/45"));
    }

    #[test]
    fn shift_rule_matches_derivative_route() {
        // G' = G(2z), so the derivative rule and the shift rule must agree.
        let spec = FieldSpec::alpha2();
        let ctx = Ctx::unmarked(Arc::clone(&spec));
        let g = SeriesExpr::gen_atom(&ctx, 1);
        let via_deriv = transfer(&g.deriv(), 1, 5).unwrap();
        let via_shift = transfer(&g.scale_z(AlgNum::from_int(&spec, 2)), 1, 5).unwrap();
        assert_eq!(via_deriv, via_shift);
        assert_eq!(via_deriv.m_min(), Some(-1));
        assert_eq!(via_deriv.extract(-1, 0, &[]), AlgNum::one(&spec));
    }

    #[test]
    fn integral_inverts_derivative_table() {
        let spec = FieldSpec::alpha2();
        let ctx = Ctx::unmarked(Arc::clone(&spec));
        let g = SeriesExpr::gen_atom(&ctx, 1);
        let roundtrip = transfer(&g.deriv().integ(), 1, 5).unwrap();
        let direct = transfer(&g, 1, 5).unwrap();
        assert_eq!(roundtrip, direct);
    }

    #[test]
    fn closed_form_confirms_sign_at_6_3() {
        // The printed table has a sign typo at (6,3); closed form and the
        // Wright polynomial w_6 both give +45056/3.
        let spec = FieldSpec::alpha2();
        assert_eq!(
            scd_closed_form(&spec, 6, 3).unwrap(),
            alg(&spec, "45056/3")
        );
    }
}
