//! Prove that one log entry was recorded before another.

use pfxd::pas::Pas;
use pfxd::schemes::SchemeId;

fn main() {
    let items: Vec<String> = (1..=30).map(|i| format!("document {i}")).collect();
    let pas = Pas::new(SchemeId::TransparencyLog);
    let (i, j) = (9, 30);
    let d_i = pas.commit(&items[..i]).unwrap();
    let d_j = pas.commit(&items[..j]).unwrap();
    let tc = pas.timestamp_certify(&items[..i], &items[..j]).unwrap();
    println!(
        "item {i} precedes item {j}: {}",
        pas.timestamp_verify(&d_i, &d_j, &tc).unwrap()
    );
    println!("encoded certificate: {} bytes", tc.encode().len());

    let id = pas.identify(&items, 17).unwrap();
    let d = pas.commit(&items[..17]).unwrap();
    println!(
        "item 17 sits at position 17: {} ({} labels)",
        pas.verify_identifier(&d, &id).unwrap(),
        id.label_count()
    );

    let mut swapped = tc.clone();
    std::mem::swap(&mut swapped.id_s, &mut swapped.id_t);
    println!(
        "swapped identifiers accepted: {}",
        pas.timestamp_verify(&d_i, &d_j, &swapped).unwrap()
    );
}
