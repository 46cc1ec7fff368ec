//! Commit to a log and to one of its prefixes, prove the prefix relation,
//! and watch a forged log fail.

use pfxd::pas::{Pas, PrefixCertificate};
use pfxd::schemes::SchemeId;

fn main() {
    let items: Vec<String> = (1..=20).map(|i| format!("entry {i}")).collect();
    for scheme in SchemeId::ALL {
        let pas = Pas::new(scheme);
        let d_s = pas.commit(&items[..7]).unwrap();
        let d_t = pas.commit(&items).unwrap();
        let cert = pas.certify(&items, 7).unwrap();
        let wire = cert.encode();
        let back = PrefixCertificate::decode(&wire, pas.k()).unwrap();
        let ok = pas.verify(&d_s, &d_t, &back).unwrap();

        let mut forged = items.clone();
        forged[3] = "rewritten history".into();
        let d_forged = pas.commit(&forged).unwrap();
        let rejected = !pas.verify(&d_s, &d_forged, &cert).unwrap();

        println!(
            "{scheme:<21} certificate {:>2} labels, {:>4} bytes, verified {ok}, forgery rejected {rejected}",
            cert.labels.len(),
            wire.len()
        );
    }
}
