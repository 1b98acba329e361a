//! Exact partial sums of the asymptotic expansion, Wright polynomials,
//! the satisfiable-2-CNF correction terms, and empirical error-decay
//! measurement against exact counts.
//!
//! Every quantity here is computed as an exact rational (or field element):
//! at n = 40 the counts have thousands of bits, and exactness removes any
//! tolerance question from equality checks. Floating point appears only in
//! the logged log2 diagnostics.

use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::families::{build_family, dag_pair_counts, square_counts, FamilySpec};
use crate::field::{AlgNum, FieldSpec};
use crate::transfer::{transfer, CoeffGf};
use crate::util::{
    binom2, binomial, factorial, falling_factorial, log2_rational, rational_pow, stirling_first,
};

/// One evaluation of the truncated expansion against the exact count.
#[derive(Debug, Clone)]
pub struct ExpansionEstimate {
    pub n: u64,
    /// Terms m <= terms_used were included.
    pub terms_used: i64,
    /// Exact partial sum of the expansion (same normalization as the series
    /// coefficients a_n = n! [z^n]).
    pub value: AlgNum,
    /// Exact a_n from the series, when evaluated.
    pub truth: Option<AlgNum>,
    /// |value - truth| / |truth| as an exact rational, when both sides are
    /// rational and truth is nonzero.
    pub rel_error: Option<BigRational>,
    /// log2 of rel_error; -inf when the error is exactly zero.
    pub rel_error_log2: Option<f64>,
}

/// The bracketed part of the expansion at a given n, truncated at m <= m_max:
/// sum_m alpha^(-m n) sum_l n^(falling l) a°_{m,l}(marks).
pub fn partial_sum_bracket(
    c: &CoeffGf,
    n: u64,
    m_max: i64,
    marks: &[AlgNum],
) -> AlgNum {
    let spec = c.spec();
    let mut acc = AlgNum::zero(spec);
    for (&(m, l), v) in c.entries() {
        if m > m_max {
            continue;
        }
        let ff = falling_factorial(n, l as u64);
        if ff.is_zero() {
            continue;
        }
        let scale = spec.alpha_pow_int(-m * n as i64) * BigRational::from_integer(ff);
        let term = v.eval(marks).scale(&scale);
        acc = acc.checked_add(&term).expect("spec");
    }
    acc
}

/// Exact partial sum of the full expansion: alpha^(beta C(n,2)) times the
/// bracket. Falling factorials vanish for l > n, which the formula relies on
/// at small n.
pub fn partial_sum(c: &CoeffGf, n: u64, m_max: i64, marks: &[AlgNum]) -> AlgNum {
    let spec = c.spec();
    let lead = spec.alpha_pow_int(c.beta() as i64 * binom2(n as i64));
    partial_sum_bracket(c, n, m_max, marks).scale(&lead)
}

/// Compare the truncated expansion with the exact series coefficient.
/// `truth_count` is a_n = n! [z^n] of the transferred series.
pub fn estimate(
    c: &CoeffGf,
    n: u64,
    m_max: i64,
    marks: &[AlgNum],
    truth_count: &AlgNum,
) -> ExpansionEstimate {
    let spec = c.spec();
    let bracket = partial_sum_bracket(c, n, m_max, marks);
    let lead = spec.alpha_pow_int(c.beta() as i64 * binom2(n as i64));
    let value = bracket.scale(&lead);
    // Compare after factoring out the leading power: truth / lead vs bracket.
    let scaled_truth = truth_count.scale(&lead.recip());
    let rel_error = match (bracket.as_rational(), scaled_truth.as_rational()) {
        (Some(v), Some(t)) if !t.is_zero() => Some(((v - t) / t).abs()),
        _ => None,
    };
    let rel_error_log2 = rel_error.as_ref().map(|r| {
        if r.is_zero() {
            f64::NEG_INFINITY
        } else {
            log2_rational(r)
        }
    });
    ExpansionEstimate {
        n,
        terms_used: m_max,
        value,
        truth: Some(truth_count.clone()),
        rel_error,
        rel_error_log2,
    }
}

/// Error profile of a family: exact relative error of the truncated
/// expansion for every (n, M) on the grid.
#[derive(Debug, Clone)]
pub struct ErrorProfile {
    pub family: String,
    pub beta: u32,
    pub m_min: i64,
    /// Rows (n, M, rel_error, log2 rel_error).
    pub rows: Vec<(u64, i64, Option<BigRational>, Option<f64>)>,
}

/// Evaluate the expansion error grid for an unmarked catalog family.
pub fn error_profile(
    fam: &FamilySpec,
    beta: u32,
    n_values: &[u64],
    m_values: &[i64],
    table_order: i64,
) -> Result<ErrorProfile> {
    let q = transfer(&fam.formula, beta, table_order)?;
    let n_max = *n_values.iter().max().unwrap_or(&0) as usize;
    let egf = fam.formula.eval(n_max)?;
    let mut rows = vec![];
    for &n in n_values {
        let truth = egf
            .count(n as usize)
            .as_alg()
            .ok_or_else(|| Error::Invalid("error profile needs an unmarked family".into()))?;
        for &m in m_values {
            let est = estimate(&q, n, m, &[], &truth);
            rows.push((n, m, est.rel_error, est.rel_error_log2));
        }
    }
    Ok(ErrorProfile {
        family: fam.name.clone(),
        beta,
        m_min: q.m_min().unwrap_or(0),
        rows,
    })
}

impl ErrorProfile {
    /// CSV with columns n, M, rel_error_log2.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,M,rel_error_log2\n");
        for (n, m, _, lg) in &self.rows {
            let lg = lg.map_or("nan".to_string(), |v| format!("{v:.6}"));
            out.push_str(&format!("{n},{m},{lg}\n"));
        }
        out
    }
}

/// A Wright polynomial w_m(n) = sum_l a°_{m,l} n^(falling l), expanded into
/// the monomial basis.
#[derive(Debug, Clone)]
pub struct WrightPoly {
    pub m: i64,
    /// coeffs[j] is the coefficient of n^j.
    pub coeffs: Vec<AlgNum>,
}

impl WrightPoly {
    pub fn eval_u64(&self, n: u64) -> AlgNum {
        let spec = self.coeffs[0].spec();
        let mut acc = AlgNum::zero(spec);
        let base = BigRational::from_integer(BigInt::from(n));
        let mut pw = BigRational::one();
        for c in &self.coeffs {
            acc = acc
                .checked_add(&c.scale(&pw))
                .expect("spec");
            pw *= &base;
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        let monomials: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(deg, c)| {
                serde_json::json!({
                    "deg": deg,
                    "coeff": c.to_string(),
                })
            })
            .collect();
        serde_json::json!({ "m": self.m, "monomials": monomials })
    }
}

/// Wright polynomials w_0..w_{m_max} of a beta = 2 Coefficient GF.
pub fn wright_polynomials(c: &CoeffGf, m_max: i64) -> Result<Vec<WrightPoly>> {
    if c.beta() != 2 {
        return Err(Error::Invalid(
            "Wright polynomials are defined for beta = 2 Coefficient GFs".into(),
        ));
    }
    let spec = c.spec();
    let max_l = c.max_ell() as usize;
    let stirling = stirling_first(max_l);
    let mut out = vec![];
    for m in 0..=m_max {
        let mut coeffs = vec![AlgNum::zero(spec); max_l + 1];
        for (&(mm, l), v) in c.entries() {
            if mm != m {
                continue;
            }
            let alg = v
                .as_alg()
                .ok_or_else(|| Error::Invalid("marked entries have no Wright polynomial".into()))?;
            for (j, coeff) in coeffs.iter_mut().enumerate().take(l as usize + 1) {
                let s = &stirling[l as usize][j];
                if s.is_zero() {
                    continue;
                }
                let term = alg.scale(&BigRational::from_integer(s.clone()));
                *coeff = coeff.checked_add(&term).expect("spec");
            }
        }
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        out.push(WrightPoly { m, coeffs });
    }
    Ok(out)
}

/// The closed-form correction terms for satisfiable 2-CNF counts:
///
/// s°_m = 2^(m(m+1)/2) [ sum_{k<m} C(m,k) sat_k it_{m-k} / 2^(k^2)
///                       - sat_m / 2^(m^2) ],
///
/// so that sat_n expands as 2^(n + 3 C(n,2)) [1 - sum_m 2^(-mn) C(n,m) s°_m].
/// The prefactor matches the 2^(C(m+1,2)) carried by the connected-graph and
/// irreducible-tournament expansions (numerically confirmed against exact
/// counts at n = 20..30).
pub fn sat_correction(spec: &Arc<FieldSpec>, m: usize) -> Result<AlgNum> {
    if !spec.alpha_is_two() {
        return Err(Error::UnsupportedAlpha("sat correction".into()));
    }
    if m == 0 {
        // The expansion's leading term is 1: no correction at order 0.
        return Ok(AlgNum::zero(spec));
    }
    let sat = build_family("sat", spec)?.integer_counts(m)?;
    let it = build_family("it", spec)?.integer_counts(m)?;
    let two = BigRational::from_integer(2.into());
    let mut acc = BigRational::zero();
    for k in 0..m {
        let denom = rational_pow(&two, (k * k) as i64);
        acc += BigRational::from_integer(binomial(m, k) * &sat[k] * &it[m - k]) / denom;
    }
    acc -= BigRational::from_integer(sat[m].clone()) / rational_pow(&two, (m * m) as i64);
    acc *= rational_pow(&two, (m * (m + 1) / 2) as i64);
    Ok(AlgNum::from_rational(spec, acc))
}

/// s°_m read off the transfer table: the SAT Coefficient GF is diagonal and
/// its expansion is 1 - sum_m 2^(-mn) C(n,m) s°_m, so s°_m = -m! sat°_{m,m}.
pub fn sat_correction_from_transfer(spec: &Arc<FieldSpec>, m_max: usize) -> Result<Vec<AlgNum>> {
    let sat = build_family("sat", spec)?;
    let q = transfer(&sat.formula, 1, m_max as i64)?;
    Ok((0..=m_max)
        .map(|m| {
            let e = q.extract(m as i64, m as u32, &[]);
            if m == 0 {
                // leading term is +1; no correction at order 0
                AlgNum::zero(spec)
            } else {
                e.scale(&-BigRational::from_integer(factorial(m)))
            }
        })
        .collect())
}

/// Leading term of the probability that a digraph has (m+1) strongly
/// connected components: C(n,m) 2^m dag2_m / 2^(mn).
#[derive(Debug, Clone)]
pub struct SccCountLeading {
    pub m: usize,
    /// dag2_m from the direct double sum.
    pub dag_pair: BigInt,
    /// The coefficient of C(n,m) / 2^(mn), i.e. 2^m dag2_m.
    pub binomial_coefficient: BigRational,
    /// The coefficient of n^(falling m) / 2^(mn), i.e. 2^m dag2_m / m!.
    pub falling_coefficient: BigRational,
}

pub fn scc_count_leading(spec: &Arc<FieldSpec>, m: usize) -> Result<SccCountLeading> {
    let dag2 = dag_pair_counts(spec, m)?;
    let scale = spec.alpha_pow_int(m as i64);
    let binomial_coefficient = &scale * BigRational::from_integer(dag2[m].clone());
    let falling_coefficient =
        &binomial_coefficient / BigRational::from_integer(factorial(m));
    Ok(SccCountLeading {
        m,
        dag_pair: dag2[m].clone(),
        binomial_coefficient,
        falling_coefficient,
    })
}

/// The sequences it_k, it2_k and ssd_k used by the appendix fixtures.
pub fn appendix_sequences(
    spec: &Arc<FieldSpec>,
    n_max: usize,
) -> Result<(Vec<BigInt>, Vec<BigInt>, Vec<BigInt>)> {
    let it_fam = build_family("it", spec)?;
    let it = it_fam.integer_counts(n_max)?;
    let it2 = square_counts(&it_fam, n_max)?;
    let ssd = build_family("ssd", spec)?.integer_counts(n_max)?;
    Ok((it, it2, ssd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::parse_rational;

    fn alg(spec: &Arc<FieldSpec>, s: &str) -> AlgNum {
        AlgNum::from_rational(spec, parse_rational(s).unwrap())
    }

    #[test]
    fn graph_expansion_is_exact_at_order_zero() {
        let spec = FieldSpec::alpha2();
        let g = build_family("g", &spec).unwrap();
        let q = transfer(&g.formula, 1, 4).unwrap();
        for n in [0u64, 3, 10, 15] {
            let v = partial_sum(&q, n, 0, &[]);
            let expected = spec.alpha_pow_int(binom2(n as i64));
            assert_eq!(v, AlgNum::from_rational(&spec, expected));
        }
        // with an empty table below m_min the sum is zero
        let cg = build_family("cg", &spec).unwrap();
        let zero_table = transfer(&cg.formula, 2, 4).unwrap();
        assert!(partial_sum(&zero_table, 7, 3, &[]).is_zero());
    }

    #[test]
    fn wright_polynomials_match_appendix() {
        let spec = FieldSpec::alpha2();
        let scd = build_family("scd", &spec).unwrap();
        let q = transfer(&scd.formula, 2, 6).unwrap();
        let w = wright_polynomials(&q, 6).unwrap();
        // w_0 = 1, w_1 = -4n, w_2 = 8n^2 - 4n
        assert_eq!(w[0].coeffs, vec![AlgNum::one(&spec)]);
        assert_eq!(w[1].coeffs, vec![AlgNum::zero(&spec), alg(&spec, "-4")]);
        assert_eq!(
            w[2].coeffs,
            vec![AlgNum::zero(&spec), alg(&spec, "-4"), alg(&spec, "8")]
        );
        // w_3 = -32/3 n(n-1)(4n-5) = -128/3 n^3 + 96 n^2 - 160/3 n
        assert_eq!(
            w[3].coeffs,
            vec![
                AlgNum::zero(&spec),
                alg(&spec, "-160/3"),
                alg(&spec, "96"),
                alg(&spec, "-128/3")
            ]
        );
        // w_5 evaluated at n = 3: -1024/15 * 3*2*1 * (3392*9 - 23724*3 + 40659)
        let expect = parse_rational("-1024/15").unwrap()
            * BigRational::from_integer(6.into())
            * BigRational::from_integer((3392 * 9 - 23724 * 3 + 40659).into());
        assert_eq!(w[5].eval_u64(3), AlgNum::from_rational(&spec, expect));
    }

    #[test]
    fn sat_corrections_agree_both_ways() {
        let spec = FieldSpec::alpha2();
        let from_table = sat_correction_from_transfer(&spec, 5).unwrap();
        for (m, got) in from_table.iter().enumerate() {
            let closed = sat_correction(&spec, m).unwrap();
            assert_eq!(got, &closed, "s°_{m}");
        }
        assert!(sat_correction(&spec, 0).unwrap().is_zero());
        assert_eq!(sat_correction(&spec, 1).unwrap(), alg(&spec, "1"));
    }

    #[test]
    fn scc_leading_terms() {
        let spec = FieldSpec::alpha2();
        let l0 = scc_count_leading(&spec, 0).unwrap();
        assert_eq!(l0.binomial_coefficient, parse_rational("1").unwrap());
        let l1 = scc_count_leading(&spec, 1).unwrap();
        assert_eq!(l1.dag_pair, BigInt::from(2));
        assert_eq!(l1.binomial_coefficient, parse_rational("4").unwrap());
        let l2 = scc_count_leading(&spec, 2).unwrap();
        assert_eq!(l2.dag_pair, BigInt::from(10));
        assert_eq!(l2.falling_coefficient, parse_rational("20").unwrap());
    }

    #[test]
    fn error_decreases_with_more_terms() {
        let spec = FieldSpec::alpha2();
        let cg = build_family("cg", &spec).unwrap();
        let profile = error_profile(&cg, 1, &[30], &[0, 1], 5).unwrap();
        let e0 = profile.rows[0].2.clone().unwrap();
        let e1 = profile.rows[1].2.clone().unwrap();
        assert!(e1 < e0);
    }
}
