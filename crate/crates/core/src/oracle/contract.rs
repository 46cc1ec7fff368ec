use std::collections::{BTreeMap, BTreeSet};

use crate::hashcore::{closed_neighborhood, reach, Dag, Determiner};
use crate::schemes::{ct_graph, hypercore_graph, SchemeGraph, TruncatedGraph};
use crate::vertex::{VertexId, VertexKind};

use super::OracleReport;

/// Largest length the pairwise checks accept.
pub const ORACLE_MAX_N: u64 = 512;

/// Lengths beyond `n` at which the pools are rechecked on the grown graph.
const GROWTH: [u64; 3] = [0, 1, 17];

fn sinks_upto(n: u64) -> BTreeSet<VertexId> {
    (1..=n).map(VertexId::sink).collect()
}

/// Checks acyclicity, sinks, tight commitment, docks, certify paths, and
/// identifiers for every `n <= n_max` and every pair `ls < lt <= n_max`.
/// Pool checks live in [`check_pools`].
pub fn check_tpag_contract<S: SchemeGraph + ?Sized>(scheme: &S, n_max: u64) -> OracleReport {
    assert!((1..=ORACLE_MAX_N).contains(&n_max), "n_max out of range");
    let mut report = OracleReport::new(scheme.name(), 1, n_max);
    let mut graph = TruncatedGraph::empty(scheme.id());
    for n in 1..=n_max {
        graph.grow(scheme);
        let sink = VertexId::sink(n);
        if !scheme.contains(sink) || !scheme.out_neighbors(sink).is_empty() {
            report.push("sinks", n, None, vec![sink]);
        }
        let commit = scheme.gcommit(n);
        let reached = reach(scheme, &[commit]);
        let reached_sinks: BTreeSet<VertexId> =
            reached.iter().filter(|v| v.is_sink()).copied().collect();
        if reached_sinks != sinks_upto(n) {
            let diff: Vec<VertexId> = reached_sinks
                .symmetric_difference(&sinks_upto(n))
                .copied()
                .collect();
            report.push("tight-commitment", n, None, diff);
        }
        let dock = scheme.dock(n);
        if !Determiner::new(scheme, &dock).determines(commit) {
            report.push("dock", n, None, dock.into_iter().collect());
        }
        let ident = scheme.identifier_paths(n);
        if ident.root() != commit
            || ident.check_edges(scheme).is_err()
            || !ident.closed_neighborhood(scheme).contains(&sink)
        {
            report.push(
                "identifier",
                n,
                None,
                ident.vertices().into_iter().collect(),
            );
        }
        if n >= 2 {
            let prefixes: Vec<u64> = (1..n).collect();
            for (ls, fam) in prefixes.iter().zip(scheme.gcertify_many(n, &prefixes)) {
                let closed = fam.closed_neighborhood(scheme);
                let dock_s = scheme.dock(*ls);
                if fam.root() != commit
                    || fam.check_edges(scheme).is_err()
                    || !dock_s.is_subset(&closed)
                {
                    report.push(
                        "gcertify",
                        n,
                        Some(*ls),
                        fam.vertices().into_iter().collect(),
                    );
                }
            }
        }
    }
    if let Some(cycle) = find_cycle_vertex(&graph) {
        report.push("acyclic", n_max, None, vec![cycle]);
    }
    report
}

fn find_cycle_vertex(graph: &TruncatedGraph) -> Option<VertexId> {
    if graph.is_acyclic() {
        return None;
    }
    // Any vertex that reaches itself.
    graph.dag().vertices().find(|v| {
        graph
            .out_neighbors(*v)
            .iter()
            .any(|w| reach(graph, &[*w]).contains(v))
    })
}

/// Checks the digest-pool recurrence for every `n <= n_max` and
/// certificate-pool sufficiency for every pair `ls < lt <= n_max`.
pub fn check_pools<S: SchemeGraph + ?Sized>(scheme: &S, n_max: u64) -> OracleReport {
    assert!((1..=ORACLE_MAX_N).contains(&n_max), "n_max out of range");
    let mut report = OracleReport::new(scheme.name(), 1, n_max);
    // Determination only looks at what a vertex reaches, which does not
    // change as the graph grows. Running the checks on graphs grown past
    // n confirms that no edge added later invalidates a pool.
    let mut graphs: Vec<TruncatedGraph> = Vec::new();
    for k in GROWTH {
        let mut g = TruncatedGraph::empty(scheme.id());
        g.grow_to(scheme, n_max + k);
        graphs.push(g);
    }
    let mut prev_pool: Vec<VertexId> = Vec::new();
    for n in 1..=n_max {
        let mut set: BTreeSet<VertexId> = prev_pool.iter().copied().collect();
        set.insert(VertexId::sink(n));
        let pool = scheme.digest_pool(n);
        let mut targets = vec![scheme.gcommit(n)];
        targets.extend(pool.iter().copied());
        // Tree vertices above the newest leaf only enter a truncation once a
        // later commit reaches them; each graph checks what it contains.
        let mut missing: Vec<VertexId> = {
            let mut det = Determiner::new(scheme, &set);
            targets
                .iter()
                .filter(|v| !det.determines(**v))
                .copied()
                .collect()
        };
        for g in &graphs {
            if !missing.is_empty() {
                break;
            }
            let mut det = Determiner::new(g, &set);
            missing = targets
                .iter()
                .filter(|v| g.contains(**v) && !det.determines(**v))
                .copied()
                .collect();
        }
        if !missing.is_empty() {
            report.push("digest-pool", n, None, missing);
        }
        prev_pool = pool;
    }

    let closed_pools: BTreeMap<u64, BTreeSet<VertexId>> = (1..=n_max)
        .map(|n| (n, closed_neighborhood(scheme, &scheme.certificate_pool(n))))
        .collect();
    let graph = &graphs[GROWTH.len() - 1];
    for lt in 2..=n_max {
        let prefixes: Vec<u64> = (1..lt).collect();
        for (ls, fam) in prefixes.iter().zip(scheme.gcertify_many(lt, &prefixes)) {
            let mut set = closed_pools[ls].clone();
            set.extend(closed_pools[&lt].iter().copied());
            let mut det = Determiner::new(graph, &set);
            let missing: Vec<VertexId> = fam
                .closed_neighborhood(scheme)
                .into_iter()
                .filter(|v| !det.determines(*v))
                .collect();
            if !missing.is_empty() {
                report.push("certificate-pool", lt, Some(*ls), missing);
            }
        }
    }
    report
}

/// Contracts each run of transparency-log internal vertices for one length
/// into a single digest vertex and compares the result with the hypercore
/// graph, length by length.
pub fn ct_contraction_check(n_max: u64) -> OracleReport {
    assert!((1..=ORACLE_MAX_N).contains(&n_max), "n_max out of range");
    let ct = ct_graph();
    let hyper = hypercore_graph();
    let mut report = OracleReport::new("ct-contraction", 1, n_max);
    let mut gc = TruncatedGraph::empty(ct.id());
    let mut gh = TruncatedGraph::empty(hyper.id());
    let contract = |v: VertexId| {
        if v.kind == VertexKind::CtInternal {
            VertexId::hyper_digest(v.a)
        } else {
            v
        }
    };
    for n in 1..=n_max {
        gc.grow(&ct);
        gh.grow(&hyper);
        let vc: BTreeSet<VertexId> = gc.dag().vertices().map(contract).collect();
        let vh: BTreeSet<VertexId> = gh.dag().vertices().collect();
        let ec: BTreeSet<(VertexId, VertexId)> = gc
            .dag()
            .edges()
            .map(|(u, w)| (contract(u), contract(w)))
            .filter(|(u, w)| u != w)
            .collect();
        let eh: BTreeSet<(VertexId, VertexId)> = gh.dag().edges().collect();
        if vc != vh {
            report.push(
                "contraction-vertices",
                n,
                None,
                vc.symmetric_difference(&vh).copied().collect(),
            );
        }
        if ec != eh {
            let witness = ec
                .symmetric_difference(&eh)
                .flat_map(|(u, w)| [*u, *w])
                .collect();
            report.push("contraction-edges", n, None, witness);
        }
    }
    report
}
