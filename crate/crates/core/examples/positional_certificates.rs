//! Precompute one positional certificate per length and assemble prefix
//! certificates from pairs of them without touching the items.

use pfxd::pas::Pas;
use pfxd::schemes::SchemeId;

fn main() {
    let items: Vec<String> = (1..=64).map(|i| format!("block {i}")).collect();
    for scheme in [
        SchemeId::SkipList,
        SchemeId::ThreadedAuthTree,
        SchemeId::Hypercore,
        SchemeId::TransparencyLog,
    ] {
        let pas = Pas::new(scheme);
        let mut prover = pas.prover(&items);
        let (ls, lt) = (21, 64);
        let pc_s = prover.positional_certificate(ls).unwrap();
        let pc_t = prover.positional_certificate(lt).unwrap();
        let cert = pas.certify_from_pools(&pc_s, &pc_t).unwrap();
        let direct = prover.certify(ls).unwrap();
        let ok = pas
            .verify(
                &prover.digest(ls).unwrap(),
                &prover.digest(lt).unwrap(),
                &cert,
            )
            .unwrap();
        println!(
            "{scheme:<10} positional {:>2} + {:>2} labels -> certificate of {:>2} labels, same as direct: {}, verified: {ok}",
            pc_s.labels.len(),
            pc_t.labels.len(),
            cert.labels.len(),
            cert == direct
        );
    }
}
