//! Run the structural checks on every scheme and print the antimonotone
//! discrepancy report.

use pfxd::oracle::{
    antimonotone_discrepancies, check_pools, check_tpag_contract, ct_contraction_check,
};
use pfxd::schemes::{antimonotone_recursive_graph, Arity, SchemeGraph, SchemeId};

fn main() {
    let n_max = 64;
    let mut graphs: Vec<Box<dyn SchemeGraph>> = SchemeId::ALL.iter().map(|id| id.graph()).collect();
    graphs.push(Box::new(antimonotone_recursive_graph(Arity::Binary)));
    graphs.push(Box::new(antimonotone_recursive_graph(Arity::Ternary)));
    for g in &graphs {
        let mut report = check_tpag_contract(g.as_ref(), n_max);
        report.merge(check_pools(g.as_ref(), n_max));
        println!("{:<31} {} violation(s)", g.name(), report.violations.len());
    }
    println!(
        "ct contraction: {} violation(s)",
        ct_contraction_check(n_max).violations.len()
    );
    println!("\n{}", antimonotone_discrepancies(n_max));
}
