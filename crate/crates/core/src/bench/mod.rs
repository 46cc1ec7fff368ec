//! Size and cost measurements of every scheme, with deviations from the
//! closed-form expectations.

mod fit;
mod report;

use std::collections::HashSet;

use crate::hash::{HashConfig, Hasher};
use crate::hashcore::frontier;
use crate::pas::Pas;
use crate::schemes::{
    antimonotone_recursive_graph, ceil_log2, floor_log2, floor_log3, popcount, Arity, SchemeGraph,
    SchemeId,
};
use crate::vertex::VertexId;

pub use fit::{linear_fit, Fit};
pub use report::{table_report, AntimonotoneRow, AntimonotoneSizes, TableReport, CSV_HEADER};

/// Largest length [`measure`] accepts.
pub const MEASURE_MAX_N: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricRow {
    pub scheme: String,
    pub scheme_id: SchemeId,
    pub n: u64,
    pub positional_cert_labels: usize,
    /// Largest prefix certificate over all `ls < n`.
    pub prefix_cert_labels: usize,
    /// The prefix length attaining `prefix_cert_labels`.
    pub prefix_cert_argmax: u64,
    /// Hash calls made by one verification of the largest certificate.
    pub verify_hash_invocations: u64,
    pub edges_total: u64,
    pub edges_delta: u64,
    pub vertices_total: u64,
    pub vertices_delta: u64,
    /// Labels in an identifier, item hash included.
    pub identifier_labels: usize,
    pub digest_pool_size: usize,
}

/// Vertex and edge counts of the graph for every length, without
/// materializing edges. Out-neighborhoods never change, so the edges added
/// at step `n` are exactly the out-edges of the vertices added at step `n`.
pub struct Growth<'g> {
    graph: &'g dyn SchemeGraph,
    seen: HashSet<VertexId>,
    n: u64,
    pub vertices_total: u64,
    pub edges_total: u64,
    pub vertices_delta: u64,
    pub edges_delta: u64,
}

impl<'g> Growth<'g> {
    pub fn new(graph: &'g dyn SchemeGraph) -> Self {
        Growth {
            graph,
            seen: HashSet::new(),
            n: 0,
            vertices_total: 0,
            edges_total: 0,
            vertices_delta: 0,
            edges_delta: 0,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn step(&mut self) {
        self.n += 1;
        let (mut dv, mut de) = (0, 0);
        let mut stack = vec![self.graph.gcommit(self.n)];
        while let Some(v) = stack.pop() {
            if !self.seen.insert(v) {
                continue;
            }
            dv += 1;
            let out = self.graph.out_neighbors(v);
            de += out.len() as u64;
            stack.extend(out.into_iter().filter(|w| !self.seen.contains(w)));
        }
        self.vertices_delta = dv;
        self.edges_delta = de;
        self.vertices_total += dv;
        self.edges_total += de;
    }

    pub fn advance_to(&mut self, n: u64) {
        while self.n < n {
            self.step();
        }
    }
}

/// Number of labels in the positional certificate of `n`.
pub fn positional_size(graph: &dyn SchemeGraph, n: u64) -> usize {
    frontier(graph, &graph.certificate_pool(n)).len()
}

/// Number of labels in an identifier for position `n`, item hash included.
pub fn identifier_size(graph: &dyn SchemeGraph, n: u64) -> usize {
    graph.identifier_paths(n).open_neighborhood(graph).len()
}

fn items(n: u64) -> Vec<[u8; 8]> {
    (1..=n).map(u64::to_be_bytes).collect()
}

/// Measures every metric at each requested length.
pub fn measure(scheme: SchemeId, n_values: &[u64]) -> Vec<MetricRow> {
    measure_graph(scheme.graph(), n_values)
}

/// As [`measure`], for any graph implementing the contract.
pub fn measure_graph(graph: Box<dyn SchemeGraph>, n_values: &[u64]) -> Vec<MetricRow> {
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    assert!(
        ns.first().is_some_and(|&n| n >= 1) && ns.last().is_some_and(|&n| n <= MEASURE_MAX_N),
        "lengths must lie in 1..={MEASURE_MAX_N}"
    );
    let pas = Pas::from_graph(graph, Hasher::counting(HashConfig::default()));
    let g = pas.graph();
    let mut growth = Growth::new(g);
    let mut rows = Vec::with_capacity(ns.len());
    for n in ns {
        growth.advance_to(n);
        let (prefix_cert_labels, prefix_cert_argmax) = largest_certificate(g, n);
        let verify_hash_invocations = if n >= 2 {
            count_verify(&pas, prefix_cert_argmax, n)
        } else {
            0
        };
        rows.push(MetricRow {
            scheme: g.name(),
            scheme_id: g.id(),
            n,
            positional_cert_labels: positional_size(g, n),
            prefix_cert_labels,
            prefix_cert_argmax,
            verify_hash_invocations,
            edges_total: growth.edges_total,
            edges_delta: growth.edges_delta,
            vertices_total: growth.vertices_total,
            vertices_delta: growth.vertices_delta,
            identifier_labels: identifier_size(g, n),
            digest_pool_size: g.digest_pool(n).len(),
        });
    }
    rows
}

/// Largest prefix certificate for `lt`, and the smallest prefix attaining
/// it. `(0, 0)` for `lt = 1`.
pub fn largest_certificate(graph: &dyn SchemeGraph, lt: u64) -> (usize, u64) {
    let prefixes: Vec<u64> = (1..lt).collect();
    graph
        .gcertify_many(lt, &prefixes)
        .iter()
        .zip(&prefixes)
        .map(|(fam, &ls)| (fam.open_neighborhood(graph).len(), ls))
        .fold(
            (0, 0),
            |best, (size, ls)| if size > best.0 { (size, ls) } else { best },
        )
}

/// Hash calls spent verifying an honest certificate for `(ls, lt)`.
pub fn count_verify(pas: &Pas, ls: u64, lt: u64) -> u64 {
    let t = items(lt);
    let mut prover = pas.prover(&t);
    let cert = prover.certify(ls).expect("valid pair");
    let ds = prover.digest(ls).expect("valid prefix");
    let dt = prover.digest(lt).expect("valid length");
    pas.hasher().reset_invocations();
    let ok = pas
        .verify(&ds, &dt, &cert)
        .expect("well-formed certificate");
    assert!(ok, "honest certificate rejected");
    pas.hasher().invocations()
}

/// Closed-form positional certificate size in labels.
pub fn positional_closed_form(scheme: SchemeId, n: u64) -> i64 {
    let n_i = n as i64;
    match scheme {
        SchemeId::Linear | SchemeId::Full => n_i,
        SchemeId::SkipList => {
            let k = ceil_log2(n) as i64;
            k * (k + 1) / 2
        }
        SchemeId::AntimonotoneSimple => 5 * floor_log2(n) as i64 - 3,
        SchemeId::AntimonotoneOptimal => 7 * floor_log3(2 * n) as i64 - 4,
        SchemeId::ThreadedAuthTree | SchemeId::Hypercore | SchemeId::TransparencyLog => {
            2 * ceil_log2(n) as i64
        }
    }
}

/// Closed-form digest pool size.
pub fn digest_pool_closed_form(scheme: SchemeId, n: u64) -> i64 {
    match scheme {
        SchemeId::Linear => 1,
        SchemeId::Full => n as i64,
        SchemeId::SkipList | SchemeId::AntimonotoneSimple => floor_log2(n) as i64,
        SchemeId::AntimonotoneOptimal => floor_log3(2 * n) as i64,
        SchemeId::ThreadedAuthTree | SchemeId::Hypercore | SchemeId::TransparencyLog => {
            popcount(n) as i64
        }
    }
}

/// Largest positional certificate within each generation of an
/// antimonotone scheme, for the closed-form and the copy-construction
/// graphs, next to the closed-form size.
pub fn antimonotone_sizes(arity: Arity, generations: u32) -> AntimonotoneSizes {
    let (scheme, closed): (SchemeId, fn(u32) -> i64) = match arity {
        Arity::Binary => (SchemeId::AntimonotoneSimple, |t| 5 * t as i64 - 3),
        Arity::Ternary => (SchemeId::AntimonotoneOptimal, |t| 7 * t as i64 - 4),
    };
    let formula = scheme.graph();
    let recursive = antimonotone_recursive_graph(arity);
    let mut rows = Vec::new();
    for t in 1..=generations {
        let lo = arity.vertebra(t - 1) + 1;
        let hi = arity.vertebra(t);
        let max_of = |g: &dyn SchemeGraph| (lo..=hi).map(|n| positional_size(g, n)).max().unwrap();
        rows.push(AntimonotoneRow {
            generation: t,
            first: lo,
            last: hi,
            formula_max: max_of(formula.as_ref()),
            recursive_max: max_of(&recursive),
            closed_form: closed(t),
        });
    }
    AntimonotoneSizes { scheme, rows }
}
