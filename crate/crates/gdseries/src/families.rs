//! Catalog of named series expressions for the combinatorial families.
//!
//! Every family is stored as a [`SeriesExpr`] formula rather than a table of
//! numbers, so the same object drives numeric evaluation and the transfer
//! operator. Counting conventions:
//!
//! * `g`, `t` — graphs / tournaments, the grade-1 generating atom;
//! * `d` — digraphs, the grade-2 atom;
//! * `cg` — connected graphs, log G;
//! * `it` — irreducible tournaments, 1 - 1/T (formally 1 - 1/G for any alpha);
//! * `scd`, `ssd` — strongly connected / semi-strong digraphs;
//! * `dag`, `dag2` — the Graphic GF of directed acyclic graphs and its square;
//! * `ssd_t`, `dhat_t`, `dhat_st`, `d_uvyt` — marked digraph families;
//! * `sat`, `cscc`, `cnf_st` — the 2-SAT families (alpha = 2 only).
//!
//! The Graphic and Implication kinds record how raw labeled counts relate to
//! series coefficients; [`FamilySpec::counts`] reinflates accordingly.

use std::sync::Arc;

use num::{BigInt, BigRational, One};

use crate::error::{Error, Result};
use crate::expr::{AnalyticFn, Ctx, SeriesExpr};
use crate::field::{AlgNum, FieldSpec};
use crate::marked::{MarkedScalar, VarSet};
use crate::series::SeriesKind;
use crate::util::{binom2, binomial, rational_pow};

/// Names accepted by [`build_family`] and the CLI.
pub const FAMILY_NAMES: &[&str] = &[
    "g", "t", "d", "cg", "it", "scd", "ssd", "dag", "dag2", "ssd_t", "dhat_t", "dhat_st",
    "d_uvyt", "sat", "cscc", "cnf_st",
];

/// A catalog entry: formula, series kind and declared growth grade.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub name: String,
    pub ctx: Ctx,
    pub formula: SeriesExpr,
    pub kind: SeriesKind,
    pub grade: u32,
}

fn require_alpha2(spec: &Arc<FieldSpec>, name: &str) -> Result<()> {
    if spec.alpha_is_two() {
        Ok(())
    } else {
        Err(Error::UnsupportedAlpha(name.to_string()))
    }
}

/// The marking variables each family carries.
pub fn family_marks(name: &str) -> Result<&'static [&'static str]> {
    Ok(match name {
        "g" | "t" | "d" | "cg" | "it" | "scd" | "ssd" | "dag" | "dag2" | "sat" | "cscc" => &[],
        "ssd_t" | "dhat_t" => &["t"],
        "dhat_st" | "cnf_st" => &["s", "t"],
        "d_uvyt" => &["u", "v", "y", "t"],
        other => return Err(Error::UnknownFamily(other.to_string())),
    })
}

/// Build a family over the given field. Marked families fix their own
/// variable set (see [`family_marks`]).
pub fn build_family(name: &str, spec: &Arc<FieldSpec>) -> Result<FamilySpec> {
    let marks = family_marks(name)?;
    let vars = if marks.is_empty() {
        VarSet::empty()
    } else {
        VarSet::new(marks.iter().copied())
    };
    let ctx = Ctx::new(Arc::clone(spec), vars);
    let b = Builder::new(&ctx);
    let (formula, kind) = match name {
        "g" | "t" => (b.graph_atom(), SeriesKind::Exponential),
        "d" => (b.digraph_atom(), SeriesKind::Exponential),
        "cg" => (b.connected_graphs(), SeriesKind::Exponential),
        "it" => (b.irreducible_tournaments(), SeriesKind::Exponential),
        "scd" => (b.strongly_connected(), SeriesKind::Exponential),
        "ssd" => (b.semi_strong(), SeriesKind::Exponential),
        "dag" => (b.dag_graphic(), SeriesKind::Graphic),
        "dag2" => (b.dag_graphic().powi(2), SeriesKind::Graphic),
        "ssd_t" => (b.semi_strong_marked(&b.t()?)?, SeriesKind::Exponential),
        "dhat_t" => (b.digraphs_by_components(&b.t()?)?, SeriesKind::Graphic),
        "dhat_st" => (b.digraphs_by_source_components()?, SeriesKind::Graphic),
        "d_uvyt" => (b.digraphs_by_component_types()?, SeriesKind::Exponential),
        "sat" => {
            require_alpha2(spec, name)?;
            (b.satisfiable_cnf(), SeriesKind::Implication)
        }
        "cscc" => {
            require_alpha2(spec, name)?;
            (b.contradictory_strongly_connected(), SeriesKind::Exponential)
        }
        "cnf_st" => {
            require_alpha2(spec, name)?;
            (b.cnf_by_component_types()?, SeriesKind::Implication)
        }
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    Ok(FamilySpec {
        name: name.to_string(),
        grade: formula.grade(),
        kind,
        formula,
        ctx,
    })
}

/// Formula builder over a fixed context. Public so tests and the rule suite
/// can assemble auxiliary expressions (e.g. tournaments by parts).
pub struct Builder<'a> {
    pub ctx: &'a Ctx,
}

impl<'a> Builder<'a> {
    pub fn new(ctx: &'a Ctx) -> Builder<'a> {
        Builder { ctx }
    }

    fn one(&self) -> MarkedScalar {
        self.ctx.one()
    }

    pub fn t(&self) -> Result<MarkedScalar> {
        self.ctx.var("t")
    }

    /// G(z) (equally T(z)): the grade-1 atom with counts alpha^C(n,2).
    pub fn graph_atom(&self) -> SeriesExpr {
        SeriesExpr::gen_atom(self.ctx, 1)
    }

    /// D(z): the grade-2 atom with counts alpha^(2 C(n,2)).
    pub fn digraph_atom(&self) -> SeriesExpr {
        SeriesExpr::gen_atom(self.ctx, 2)
    }

    /// CG = log G.
    pub fn connected_graphs(&self) -> SeriesExpr {
        let g = self.graph_atom();
        let g_minus_1 = g.sum(&SeriesExpr::scalar(self.ctx.int(-1)));
        SeriesExpr::compose(AnalyticFn::Log1p { c: self.one() }, &g_minus_1)
    }

    /// IT = 1 - 1/T; for general alpha this is literally 1 - 1/G.
    pub fn irreducible_tournaments(&self) -> SeriesExpr {
        let t = self.graph_atom();
        let inv = t.powi(-1);
        SeriesExpr::one(self.ctx).sub(&inv)
    }

    /// SCD = log(1 / (1 - Delta^{-1} IT)) = -log(1 - IT (.) G).
    pub fn strongly_connected(&self) -> SeriesExpr {
        let inner = self.irreducible_tournaments().robin(-1);
        SeriesExpr::compose(
            AnalyticFn::Log1p {
                c: self.ctx.int(-1),
            },
            &inner,
        )
        .scalar_mul(self.ctx.int(-1))
    }

    /// SSD = 1 / (1 - Delta^{-1} IT).
    pub fn semi_strong(&self) -> SeriesExpr {
        let inner = self.irreducible_tournaments().robin(-1);
        SeriesExpr::compose(
            AnalyticFn::PowOnePlus {
                c: self.ctx.int(-1),
                r: -BigRational::one(),
            },
            &inner,
        )
    }

    /// The Graphic GF of DAGs: 1 / Delta(e^{-z}).
    pub fn dag_graphic(&self) -> SeriesExpr {
        let exp_neg_z = SeriesExpr::compose(
            AnalyticFn::Exp {
                c: self.ctx.int(-1),
            },
            &SeriesExpr::z(self.ctx),
        );
        exp_neg_z.robin(1).powi(-1)
    }

    /// SSD(z; m) = exp(m * SCD(z)) for an arbitrary mark polynomial m.
    pub fn semi_strong_marked(&self, mark: &MarkedScalar) -> Result<SeriesExpr> {
        Ok(SeriesExpr::compose(
            AnalyticFn::Exp { c: mark.clone() },
            &self.strongly_connected(),
        ))
    }

    /// Dhat(z; m) = 1 / Delta(SSD(z; -m)): Graphic GF of digraphs with the
    /// mark counting strongly connected components.
    pub fn digraphs_by_components(&self, mark: &MarkedScalar) -> Result<SeriesExpr> {
        let ssd_neg = self.semi_strong_marked(&mark.neg())?;
        Ok(ssd_neg.robin(1).powi(-1))
    }

    /// Dhat(z; s, t) = Delta(SSD(z; (s-1)t)) * Dhat(z; t): s marks
    /// source-like components (isolated included), t all components.
    pub fn digraphs_by_source_components(&self) -> Result<SeriesExpr> {
        let s = self.ctx.var("s")?;
        let t = self.t()?;
        let s_minus_1_t = s.checked_sub(&self.one())?.checked_mul(&t)?;
        let factor = self.semi_strong_marked(&s_minus_1_t)?.robin(1);
        Ok(factor.prod(&self.digraphs_by_components(&t)?))
    }

    /// The Exponential GF D(z; u, v, y, t): u purely source-like, v purely
    /// sink-like, y isolated, t all strongly connected components:
    /// SSD(z; (y-u-v+1)t) * Delta^{-1}( Delta(SSD(z;(u-1)t)) *
    /// Delta(SSD(z;(v-1)t)) * Dhat(z;t) ).
    pub fn digraphs_by_component_types(&self) -> Result<SeriesExpr> {
        let u = self.ctx.var("u")?;
        let v = self.ctx.var("v")?;
        let y = self.ctx.var("y")?;
        let t = self.t()?;
        let mix = y
            .checked_sub(&u)?
            .checked_sub(&v)?
            .checked_add(&self.one())?
            .checked_mul(&t)?;
        let head = self.semi_strong_marked(&mix)?;
        let a_u = self
            .semi_strong_marked(&u.checked_sub(&self.one())?.checked_mul(&t)?)?
            .robin(1);
        let a_v = self
            .semi_strong_marked(&v.checked_sub(&self.one())?.checked_mul(&t)?)?
            .robin(1);
        let tail = a_u.prod(&a_v).prod(&self.digraphs_by_components(&t)?);
        Ok(head.prod(&tail.robin(-1)))
    }

    /// ddot-SAT = G * Delta^2(SSD^{-1/2}) = G * Delta^2(e^{-SCD/2}).
    pub fn satisfiable_cnf(&self) -> SeriesExpr {
        let half_inv = self
            .semi_strong()
            .pow(BigRational::new((-1).into(), 2.into()));
        self.graph_atom().prod(&half_inv.robin(2))
    }

    /// CSCC = SCD(2z)/2 + log(Delta^{-2}(D(z) (1 - IT(2z)))).
    pub fn contradictory_strongly_connected(&self) -> SeriesExpr {
        let two = AlgNum::from_int(&self.ctx.spec, 2);
        let scd_2z = self.strongly_connected().scale_z(two.clone());
        let it_2z = self.irreducible_tournaments().scale_z(two);
        let inner = self
            .digraph_atom()
            .prod(&SeriesExpr::one(self.ctx).sub(&it_2z))
            .robin(-2);
        let log_part = SeriesExpr::compose(
            AnalyticFn::Log1p { c: self.one() },
            &inner.sum(&SeriesExpr::scalar(self.ctx.int(-1))),
        );
        scd_2z
            .scalar_mul(self.ctx.rational(BigRational::new(1.into(), 2.into())))
            .sum(&log_part)
    }

    /// ddot-CNF(z; s, t) = Dhat(z; t) * Delta^2(exp(s CSCC(z/2) - t SCD(z)/2)).
    pub fn cnf_by_component_types(&self) -> Result<SeriesExpr> {
        let s = self.ctx.var("s")?;
        let t = self.t()?;
        let half = AlgNum::from_rational(
            &self.ctx.spec,
            BigRational::new(1.into(), 2.into()),
        );
        let cscc_half = self.contradictory_strongly_connected().scale_z(half);
        let exponent = cscc_half.scalar_mul(s).sum(
            &self
                .strongly_connected()
                .scalar_mul(t.scale_rational(&BigRational::new((-1).into(), 2.into()))),
        );
        let expd = SeriesExpr::compose(AnalyticFn::Exp { c: self.one() }, &exponent);
        Ok(self.digraphs_by_components(&self.t()?)?.prod(&expd.robin(2)))
    }
}

impl FamilySpec {
    /// Counting coefficients a_n for n = 0..=n_max, reinflated from the
    /// series according to the family kind; a polynomial in the marks for
    /// marked families.
    pub fn counts(&self, n_max: usize) -> Result<Vec<MarkedScalar>> {
        let egf = self.formula.eval(n_max)?;
        let spec = &self.ctx.spec;
        Ok((0..=n_max)
            .map(|n| {
                let base = egf.count(n);
                match self.kind {
                    SeriesKind::Exponential | SeriesKind::Plain => base,
                    SeriesKind::Graphic => {
                        base.scale_rational(&spec.alpha_pow_int(binom2(n as i64)))
                    }
                    SeriesKind::Implication => {
                        let lit = rational_pow(&BigRational::from_integer(2.into()), n as i64);
                        base.scale_rational(&(spec.alpha_pow_int(2 * binom2(n as i64)) * lit))
                    }
                }
            })
            .collect())
    }

    /// Integer counts for an unmarked family; errors when a count carries
    /// marks or is not an integer.
    pub fn integer_counts(&self, n_max: usize) -> Result<Vec<BigInt>> {
        self.counts(n_max)?
            .into_iter()
            .map(|c| {
                let alg = c
                    .as_alg()
                    .ok_or_else(|| Error::NonIntegerCount(c.to_string()))?;
                let r = alg
                    .as_rational()
                    .ok_or_else(|| Error::NonIntegerCount(alg.to_string()))?
                    .clone();
                if r.denom().is_one() {
                    Ok(r.to_integer())
                } else {
                    Err(Error::NonIntegerCount(crate::util::format_rational(&r)))
                }
            })
            .collect()
    }
}

/// eta_n = alpha^C(n,2) it_n, together with a verification that Wright's
/// recurrence scd_n = eta_n + sum_t C(n-1, t-1) scd_t eta_{n-t} reproduces
/// the catalog SCD counts. Returns (eta, scd).
pub fn wright_recurrence_eta(
    spec: &Arc<FieldSpec>,
    n_max: usize,
) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let it = build_family("it", spec)?.integer_counts(n_max)?;
    let scd = build_family("scd", spec)?.integer_counts(n_max)?;
    let mut eta = vec![BigInt::from(0); n_max + 1];
    for n in 1..=n_max {
        let pw = spec.alpha_pow_int(binom2(n as i64));
        if !pw.denom().is_one() {
            return Err(Error::NonIntegerCount("eta scale".into()));
        }
        eta[n] = &it[n] * pw.to_integer();
    }
    for n in 1..=n_max {
        let mut rhs = eta[n].clone();
        for t in 1..n {
            rhs += binomial(n - 1, t - 1) * &scd[t] * &eta[n - t];
        }
        if rhs != scd[n] {
            return Err(Error::RecurrenceMismatch { n });
        }
    }
    Ok((eta, scd))
}

/// dag2_n by the direct double sum over pairs of DAGs:
/// sum_k C(n,k) alpha^{k(n-k)} dag_k dag_{n-k}.
pub fn dag_pair_counts(spec: &Arc<FieldSpec>, n_max: usize) -> Result<Vec<BigInt>> {
    let dag = build_family("dag", spec)?.integer_counts(n_max)?;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut acc = BigRational::from_integer(0.into());
        for k in 0..=n {
            let w = spec.alpha_pow_int((k * (n - k)) as i64);
            acc += BigRational::from_integer(binomial(n, k) * &dag[k] * &dag[n - k]) * w;
        }
        if !acc.denom().is_one() {
            return Err(Error::NonIntegerCount("dag pair count".into()));
        }
        out.push(acc.to_integer());
    }
    Ok(out)
}

/// n! [z^n] of the square of a family's series (used for the two-part
/// tournament sequence it2_n = n! [z^n] IT^2).
pub fn square_counts(fam: &FamilySpec, n_max: usize) -> Result<Vec<BigInt>> {
    let egf = fam.formula.eval(n_max)?;
    let sq = egf.mul(&egf);
    (0..=n_max)
        .map(|n| {
            let c = sq.count(n);
            let alg = c
                .as_alg()
                .ok_or_else(|| Error::NonIntegerCount(c.to_string()))?;
            let r = alg
                .as_rational()
                .ok_or_else(|| Error::NonIntegerCount(alg.to_string()))?;
            if r.denom().is_one() {
                Ok(r.to_integer())
            } else {
                Err(Error::NonIntegerCount(crate::util::format_rational(r)))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn graph_families_match_known_counts() {
        let spec = FieldSpec::alpha2();
        let g = build_family("g", &spec).unwrap();
        assert_eq!(g.integer_counts(4).unwrap(), ints(&[1, 1, 2, 8, 64]));
        let cg = build_family("cg", &spec).unwrap();
        assert_eq!(cg.integer_counts(5).unwrap(), ints(&[0, 1, 1, 4, 38, 728]));
    }

    #[test]
    fn tournament_families_match_appendix() {
        let spec = FieldSpec::alpha2();
        let it = build_family("it", &spec).unwrap();
        assert_eq!(
            it.integer_counts(6).unwrap(),
            ints(&[0, 1, 0, 2, 24, 544, 22320])
        );
        let it2 = square_counts(&it, 6).unwrap();
        assert_eq!(it2, ints(&[0, 0, 2, 0, 16, 240, 6608]));
    }

    #[test]
    fn digraph_families_match_appendix() {
        let spec = FieldSpec::alpha2();
        let scd = build_family("scd", &spec).unwrap();
        assert_eq!(
            scd.integer_counts(5).unwrap(),
            ints(&[0, 1, 1, 18, 1606, 565080])
        );
        let ssd = build_family("ssd", &spec).unwrap();
        assert_eq!(
            ssd.integer_counts(5).unwrap(),
            ints(&[1, 1, 2, 22, 1688, 573496])
        );
        let dag = build_family("dag", &spec).unwrap();
        assert_eq!(dag.integer_counts(4).unwrap(), ints(&[1, 1, 3, 25, 543]));
        let dag2 = build_family("dag2", &spec).unwrap();
        assert_eq!(dag2.integer_counts(3).unwrap(), ints(&[1, 2, 10, 122]));
        assert_eq!(dag_pair_counts(&spec, 3).unwrap(), ints(&[1, 2, 10, 122]));
    }

    #[test]
    fn sat_family_counts() {
        let spec = FieldSpec::alpha2();
        let sat = build_family("sat", &spec).unwrap();
        let counts = sat.integer_counts(2).unwrap();
        assert_eq!(counts, ints(&[1, 1, 15]));
        assert!(matches!(
            build_family("sat", &FieldSpec::shared(BigRational::new(4.into(), 3.into()), 24).unwrap()),
            Err(Error::UnsupportedAlpha(_))
        ));
    }

    #[test]
    fn cscc_family_counts() {
        let spec = FieldSpec::alpha2();
        let cscc = build_family("cscc", &spec).unwrap();
        let counts = cscc.integer_counts(2).unwrap();
        assert_eq!(counts, ints(&[0, 0, 1]));
    }

    #[test]
    fn wright_recurrence_holds() {
        let spec = FieldSpec::alpha2();
        let (eta, scd) = wright_recurrence_eta(&spec, 6).unwrap();
        assert_eq!(eta[1], BigInt::from(1));
        assert_eq!(eta[3], BigInt::from(16));
        assert_eq!(eta[4], BigInt::from(1536));
        assert_eq!(scd[1], BigInt::from(1));
    }

    #[test]
    fn unknown_family_is_reported() {
        let spec = FieldSpec::alpha2();
        assert!(matches!(
            build_family("nope", &spec),
            Err(Error::UnknownFamily(_))
        ));
    }
}
