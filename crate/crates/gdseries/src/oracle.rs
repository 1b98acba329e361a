//! Brute-force enumerators over labeled combinatorial objects at desk scale.
//!
//! Everything here is deliberately independent of the series machinery: these
//! counts are the ground truth that the catalog families are checked against.
//! Objects are encoded as bitmasks and classified with a tiny Tarjan SCC pass;
//! the mask space is partitioned into ranges that are processed in parallel
//! and merged by exact addition, so results do not depend on thread count.

use std::collections::BTreeMap;

use num::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};

const MAX_VERTICES: usize = 8;

/// Hard caps on enumeration sizes; the `allow_unsafe` escape hatch raises
/// them by one (documented as hours of work for digraphs).
const GRAPH_CAP: usize = 6;
const DIGRAPH_CAP: usize = 5;
const TOURNAMENT_CAP: usize = 6;
const CNF_CAP: usize = 3;

#[derive(Clone, Copy)]
struct TinyDigraph {
    n: usize,
    adj: [u8; MAX_VERTICES],
}

/// Tarjan strongly connected components on at most 8 vertices.
/// Returns (component id per vertex, component count).
fn tarjan(g: &TinyDigraph) -> ([u8; MAX_VERTICES], usize) {
    const UNSET: u8 = u8::MAX;
    struct State {
        index: [u8; MAX_VERTICES],
        lowlink: [u8; MAX_VERTICES],
        on_stack: u8,
        stack: [u8; MAX_VERTICES],
        sp: usize,
        next: u8,
        comp: [u8; MAX_VERTICES],
        ncomp: usize,
    }
    fn visit(g: &TinyDigraph, v: usize, st: &mut State) {
        st.index[v] = st.next;
        st.lowlink[v] = st.next;
        st.next += 1;
        st.stack[st.sp] = v as u8;
        st.sp += 1;
        st.on_stack |= 1 << v;
        let mut targets = g.adj[v];
        while targets != 0 {
            let w = targets.trailing_zeros() as usize;
            targets &= targets - 1;
            if st.index[w] == u8::MAX {
                visit(g, w, st);
                st.lowlink[v] = st.lowlink[v].min(st.lowlink[w]);
            } else if st.on_stack & (1 << w) != 0 {
                st.lowlink[v] = st.lowlink[v].min(st.index[w]);
            }
        }
        if st.lowlink[v] == st.index[v] {
            loop {
                st.sp -= 1;
                let w = st.stack[st.sp] as usize;
                st.on_stack &= !(1 << w);
                st.comp[w] = st.ncomp as u8;
                if w == v {
                    break;
                }
            }
            st.ncomp += 1;
        }
    }
    let mut st = State {
        index: [UNSET; MAX_VERTICES],
        lowlink: [0; MAX_VERTICES],
        on_stack: 0,
        stack: [0; MAX_VERTICES],
        sp: 0,
        next: 0,
        comp: [0; MAX_VERTICES],
        ncomp: 0,
    };
    for v in 0..g.n {
        if st.index[v] == UNSET {
            visit(g, v, &mut st);
        }
    }
    (st.comp, st.ncomp)
}

/// Per-digraph classification of strongly connected components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SccProfile {
    pub scc_count: usize,
    pub purely_source: usize,
    pub purely_sink: usize,
    pub isolated: usize,
    pub is_strongly_connected: bool,
    pub is_semi_strong: bool,
    pub is_dag: bool,
}

fn classify(g: &TinyDigraph) -> SccProfile {
    let (comp, ncomp) = tarjan(g);
    let mut has_in = [false; MAX_VERTICES];
    let mut has_out = [false; MAX_VERTICES];
    for v in 0..g.n {
        let mut targets = g.adj[v];
        while targets != 0 {
            let w = targets.trailing_zeros() as usize;
            targets &= targets - 1;
            if comp[v] != comp[w] {
                has_out[comp[v] as usize] = true;
                has_in[comp[w] as usize] = true;
            }
        }
    }
    let mut purely_source = 0;
    let mut purely_sink = 0;
    let mut isolated = 0;
    for c in 0..ncomp {
        match (has_in[c], has_out[c]) {
            (false, false) => isolated += 1,
            (false, true) => purely_source += 1,
            (true, false) => purely_sink += 1,
            (true, true) => {}
        }
    }
    SccProfile {
        scc_count: ncomp,
        purely_source,
        purely_sink,
        isolated,
        is_strongly_connected: ncomp == 1 && g.n >= 1,
        is_semi_strong: isolated == ncomp,
        is_dag: ncomp == g.n,
    }
}

fn check_cap(what: &'static str, n: usize, cap: usize, allow_unsafe: bool) -> Result<()> {
    let limit = if allow_unsafe { cap + 1 } else { cap };
    if n > limit {
        return Err(Error::SizeLimit { n, limit });
    }
    let _ = what;
    Ok(())
}

// ---------------------------------------------------------------- graphs --

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphAggregates {
    pub n: usize,
    pub total: u64,
    pub connected: u64,
    /// Index k: number of graphs with exactly k connected components.
    pub by_component_count: Vec<u64>,
}

/// Enumerate all 2^C(n,2) labeled graphs; count connected ones and the
/// histogram by number of connected components.
pub fn enumerate_graphs(n: usize, allow_unsafe: bool) -> Result<GraphAggregates> {
    check_cap("graphs", n, GRAPH_CAP, allow_unsafe)?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let total = 1u64 << pairs.len();
    let agg = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut hist, mask| {
                let mut parent: [u8; MAX_VERTICES] = [0; MAX_VERTICES];
                for (v, p) in parent.iter_mut().enumerate().take(n) {
                    *p = v as u8;
                }
                fn find(parent: &mut [u8; MAX_VERTICES], v: u8) -> u8 {
                    let mut v = v;
                    while parent[v as usize] != v {
                        parent[v as usize] = parent[parent[v as usize] as usize];
                        v = parent[v as usize];
                    }
                    v
                }
                let mut comps = n;
                for (b, &(i, j)) in pairs.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        let (ri, rj) = (find(&mut parent, i as u8), find(&mut parent, j as u8));
                        if ri != rj {
                            parent[ri as usize] = rj;
                            comps -= 1;
                        }
                    }
                }
                hist[comps] += 1;
                hist
            },
        )
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(GraphAggregates {
        n,
        total,
        connected: if n >= 1 { agg[1] } else { 0 },
        by_component_count: agg,
    })
}

// -------------------------------------------------------------- digraphs --

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigraphAggregates {
    pub n: usize,
    pub total: u64,
    pub strongly_connected: u64,
    pub semi_strong: u64,
    pub dag: u64,
    /// Index k: digraphs with exactly k strongly connected components.
    pub by_scc_count: Vec<u64>,
    /// (number of source-like components including isolated, total components) -> count.
    pub by_source_and_total: BTreeMap<(usize, usize), u64>,
    /// (purely source-like, purely sink-like, isolated, total components) -> count.
    pub by_component_types: BTreeMap<(usize, usize, usize, usize), u64>,
}

#[derive(Default, Clone)]
struct DigraphAcc {
    strongly_connected: u64,
    semi_strong: u64,
    dag: u64,
    by_scc_count: Vec<u64>,
    by_source_and_total: BTreeMap<(usize, usize), u64>,
    by_component_types: BTreeMap<(usize, usize, usize, usize), u64>,
}

/// Enumerate all 2^(n(n-1)) labeled digraphs with a Tarjan pass per instance.
pub fn enumerate_digraphs(n: usize, allow_unsafe: bool) -> Result<DigraphAggregates> {
    check_cap("digraphs", n, DIGRAPH_CAP, allow_unsafe)?;
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let total = 1u64 << arcs.len();
    let zero = || DigraphAcc {
        by_scc_count: vec![0; n + 1],
        ..DigraphAcc::default()
    };
    let acc = (0..total)
        .into_par_iter()
        .fold(zero, |mut acc, mask| {
            let mut g = TinyDigraph {
                n,
                adj: [0; MAX_VERTICES],
            };
            for (b, &(i, j)) in arcs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    g.adj[i] |= 1 << j;
                }
            }
            let p = classify(&g);
            if p.is_strongly_connected {
                acc.strongly_connected += 1;
            }
            if p.is_semi_strong {
                acc.semi_strong += 1;
            }
            if p.is_dag {
                acc.dag += 1;
            }
            acc.by_scc_count[p.scc_count] += 1;
            *acc
                .by_source_and_total
                .entry((p.purely_source + p.isolated, p.scc_count))
                .or_insert(0) += 1;
            *acc
                .by_component_types
                .entry((p.purely_source, p.purely_sink, p.isolated, p.scc_count))
                .or_insert(0) += 1;
            acc
        })
        .reduce(zero, |mut a, b| {
            a.strongly_connected += b.strongly_connected;
            a.semi_strong += b.semi_strong;
            a.dag += b.dag;
            for (x, y) in a.by_scc_count.iter_mut().zip(&b.by_scc_count) {
                *x += y;
            }
            for (k, v) in b.by_source_and_total {
                *a.by_source_and_total.entry(k).or_insert(0) += v;
            }
            for (k, v) in b.by_component_types {
                *a.by_component_types.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(DigraphAggregates {
        n,
        total,
        strongly_connected: acc.strongly_connected,
        semi_strong: acc.semi_strong,
        dag: acc.dag,
        by_scc_count: acc.by_scc_count,
        by_source_and_total: acc.by_source_and_total,
        by_component_types: acc.by_component_types,
    })
}

// ----------------------------------------------------------- tournaments --

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TournamentAggregates {
    pub n: usize,
    pub total: u64,
    pub irreducible: u64,
    /// Index k: tournaments decomposing into exactly k irreducible parts.
    pub by_part_count: Vec<u64>,
}

/// Enumerate all 2^C(n,2) tournaments. A tournament is irreducible iff it is
/// strongly connected; its parts are the strongly connected components.
pub fn enumerate_tournaments(n: usize, allow_unsafe: bool) -> Result<TournamentAggregates> {
    check_cap("tournaments", n, TOURNAMENT_CAP, allow_unsafe)?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let total = 1u64 << pairs.len();
    let hist = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut hist, mask| {
                let mut g = TinyDigraph {
                    n,
                    adj: [0; MAX_VERTICES],
                };
                for (b, &(i, j)) in pairs.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        g.adj[i] |= 1 << j;
                    } else {
                        g.adj[j] |= 1 << i;
                    }
                }
                let (_, ncomp) = tarjan(&g);
                hist[ncomp] += 1;
                hist
            },
        )
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(TournamentAggregates {
        n,
        total,
        irreducible: if n >= 1 { hist[1] } else { 0 },
        by_part_count: hist,
    })
}

// ------------------------------------------------------------------ 2-CNF --

/// Candidate clause universes for the 2-SAT model. `Full` admits every
/// 2-clause on two distinct variables (2n(n-1) clauses once the forbidden
/// (x or x) and (x or not-x) shapes are removed); `HalfSameSign` is the
/// n(n-1)-clause reading where the two literals must carry the same sign.
/// The calibration op decides which one matches the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseUniverse {
    Full,
    HalfSameSign,
}

impl ClauseUniverse {
    pub fn name(self) -> &'static str {
        match self {
            ClauseUniverse::Full => "full",
            ClauseUniverse::HalfSameSign => "half",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfAggregates {
    pub n: usize,
    pub universe: ClauseUniverse,
    pub clause_count: usize,
    pub total: u64,
    pub satisfiable: u64,
    /// Formulas whose implication digraph is strongly connected (for n >= 1
    /// such a digraph is automatically contradictory).
    pub contradictory_strongly_connected: u64,
    /// (contradictory components, ordinary component PAIRS under literal
    /// negation) -> count.
    pub by_contradictory_and_pairs: BTreeMap<(usize, usize), u64>,
    /// (contradictory components, raw ordinary component count) -> count.
    pub by_contradictory_and_raw: BTreeMap<(usize, usize), u64>,
}

/// Literal encoding: variable v gives literals 2v (positive), 2v+1 (negated).
fn clause_universe(n: usize, universe: ClauseUniverse) -> Vec<(usize, usize)> {
    let mut clauses = vec![];
    for a in 0..2 * n {
        for b in (a + 1)..2 * n {
            if a / 2 == b / 2 {
                continue; // same variable: (x or x), (x or not-x) are forbidden
            }
            if universe == ClauseUniverse::HalfSameSign && a % 2 != b % 2 {
                continue;
            }
            clauses.push((a, b));
        }
    }
    clauses
}

#[derive(Default, Clone)]
struct CnfAcc {
    satisfiable: u64,
    strongly_connected: u64,
    by_pairs: BTreeMap<(usize, usize), u64>,
    by_raw: BTreeMap<(usize, usize), u64>,
}

/// Enumerate every formula over the clause universe. Each clause u or v adds
/// the implication edges (not u -> v) and (not v -> u); a formula is
/// unsatisfiable iff some variable shares a strongly connected component
/// with its negation.
pub fn enumerate_2cnf(
    n: usize,
    universe: ClauseUniverse,
    allow_unsafe: bool,
) -> Result<CnfAggregates> {
    check_cap("2-CNF formulae", n, CNF_CAP, allow_unsafe)?;
    let clauses = clause_universe(n, universe);
    let total = 1u64 << clauses.len();
    let acc = (0..total)
        .into_par_iter()
        .fold(CnfAcc::default, |mut acc, mask| {
            let mut g = TinyDigraph {
                n: 2 * n,
                adj: [0; MAX_VERTICES],
            };
            for (b, &(u, v)) in clauses.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    g.adj[u ^ 1] |= 1 << v;
                    g.adj[v ^ 1] |= 1 << u;
                }
            }
            let (comp, ncomp) = tarjan(&g);
            let mut contradictory_mask = 0u16;
            for v in 0..n {
                if comp[2 * v] == comp[2 * v + 1] {
                    contradictory_mask |= 1 << comp[2 * v];
                }
            }
            let contradictory = contradictory_mask.count_ones() as usize;
            let ordinary = ncomp - contradictory;
            debug_assert!(ordinary % 2 == 0, "ordinary components come in mirror pairs");
            if contradictory == 0 {
                acc.satisfiable += 1;
            }
            if ncomp == 1 && n >= 1 {
                acc.strongly_connected += 1;
            }
            *acc.by_pairs.entry((contradictory, ordinary / 2)).or_insert(0) += 1;
            *acc.by_raw.entry((contradictory, ordinary)).or_insert(0) += 1;
            acc
        })
        .reduce(CnfAcc::default, |mut a, b| {
            a.satisfiable += b.satisfiable;
            a.strongly_connected += b.strongly_connected;
            for (k, v) in b.by_pairs {
                *a.by_pairs.entry(k).or_insert(0) += v;
            }
            for (k, v) in b.by_raw {
                *a.by_raw.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(CnfAggregates {
        n,
        universe,
        clause_count: clauses.len(),
        total,
        satisfiable: acc.satisfiable,
        contradictory_strongly_connected: acc.strongly_connected,
        by_contradictory_and_pairs: acc.by_pairs,
        by_contradictory_and_raw: acc.by_raw,
    })
}

// ------------------------------------------------------------ calibration --

#[derive(Debug, Clone)]
pub struct CalibrationReport {
    pub chosen: ClauseUniverse,
    /// (universe, n, oracle count, series count) for every comparison made.
    pub comparisons: Vec<(ClauseUniverse, usize, BigInt, BigInt)>,
}

/// Select the clause-universe convention under which the catalog ddot-SAT
/// counts equal the brute-force satisfiable counts for n = 1..=max_n.
/// `series_sat_counts[n]` must hold the catalog count for n variables.
pub fn calibrate_sat_model(
    series_sat_counts: &[BigInt],
    max_n: usize,
) -> Result<CalibrationReport> {
    assert!(series_sat_counts.len() > max_n);
    let mut comparisons = vec![];
    let mut matching = vec![];
    for universe in [ClauseUniverse::Full, ClauseUniverse::HalfSameSign] {
        let mut all_match = true;
        for n in 1..=max_n {
            let oracle = enumerate_2cnf(n, universe, false)?;
            let got = BigInt::from(oracle.satisfiable);
            let want = series_sat_counts[n].clone();
            all_match &= got == want;
            comparisons.push((universe, n, got, want));
        }
        if all_match {
            matching.push(universe);
        }
    }
    match matching.len() {
        0 => Err(Error::CalibrationFailed),
        1 => Ok(CalibrationReport {
            chosen: matching[0],
            comparisons,
        }),
        _ => Err(Error::CalibrationAmbiguous),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graphs_small() {
        let g3 = enumerate_graphs(3, false).unwrap();
        assert_eq!(g3.total, 8);
        assert_eq!(g3.connected, 4);
        let g1 = enumerate_graphs(1, false).unwrap();
        assert_eq!(g1.connected, 1);
        let g4 = enumerate_graphs(4, false).unwrap();
        assert_eq!(g4.connected, 38);
        assert_eq!(g4.by_component_count[1..].to_vec(), vec![38, 19, 6, 1]);
        assert_eq!(g4.by_component_count.iter().sum::<u64>(), 64);
    }

    #[test]
    fn digraphs_small() {
        let d2 = enumerate_digraphs(2, false).unwrap();
        assert_eq!(d2.total, 4);
        assert_eq!(d2.strongly_connected, 1);
        assert_eq!(d2.dag, 3);
        assert_eq!(d2.by_scc_count[1..].to_vec(), vec![1, 3]);
        let d1 = enumerate_digraphs(1, false).unwrap();
        assert_eq!(d1.strongly_connected, 1);
        assert_eq!(d1.semi_strong, 1);
        assert_eq!(d1.dag, 1);
        // n = 3: scd_3 = 18, dag_3 = 25, ssd_3 = 22 (appendix values)
        let d3 = enumerate_digraphs(3, false).unwrap();
        assert_eq!(d3.strongly_connected, 18);
        assert_eq!(d3.dag, 25);
        assert_eq!(d3.semi_strong, 22);
        assert_eq!(d3.by_scc_count.iter().sum::<u64>(), 64);
    }

    #[test]
    fn digraph_component_types_small() {
        // n = 2: empty digraph -> two isolated; single arc -> one purely
        // source, one purely sink; 2-cycle -> one isolated.
        let d2 = enumerate_digraphs(2, false).unwrap();
        let mut expected = BTreeMap::new();
        expected.insert((0, 0, 2, 2), 1u64);
        expected.insert((1, 1, 0, 2), 2u64);
        expected.insert((0, 0, 1, 1), 1u64);
        assert_eq!(d2.by_component_types, expected);
    }

    #[test]
    fn tournaments_small() {
        let t3 = enumerate_tournaments(3, false).unwrap();
        assert_eq!(t3.irreducible, 2);
        let t2 = enumerate_tournaments(2, false).unwrap();
        assert_eq!(t2.irreducible, 0);
        let t4 = enumerate_tournaments(4, false).unwrap();
        assert_eq!(t4.irreducible, 24);
        assert_eq!(t4.by_part_count[2], 16);
        assert_eq!(t4.by_part_count.iter().sum::<u64>(), 64);
    }

    #[test]
    fn cnf_small() {
        let c1 = enumerate_2cnf(1, ClauseUniverse::Full, false).unwrap();
        assert_eq!(c1.total, 1); // no admissible clauses
        assert_eq!(c1.satisfiable, 1);
        let c2 = enumerate_2cnf(2, ClauseUniverse::Full, false).unwrap();
        assert_eq!(c2.clause_count, 4);
        assert_eq!(c2.total, 16);
        assert_eq!(c2.satisfiable, 15);
        assert_eq!(c2.contradictory_strongly_connected, 1);
        let h2 = enumerate_2cnf(2, ClauseUniverse::HalfSameSign, false).unwrap();
        assert_eq!(h2.clause_count, 2);
        assert_eq!(h2.total, 4);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(
            enumerate_digraphs(6, false),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(
            enumerate_graphs(8, true),
            Err(Error::SizeLimit { .. })
        ));
    }
}
