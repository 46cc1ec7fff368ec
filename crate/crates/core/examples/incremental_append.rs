//! Grow a digest one item at a time while keeping only the digest pool,
//! and compare with committing the whole sequence at once.

use pfxd::pas::Pas;
use pfxd::schemes::SchemeId;

fn main() {
    let items: Vec<Vec<u8>> = (0u32..100).map(|i| i.to_be_bytes().to_vec()).collect();
    for scheme in SchemeId::ALL {
        let pas = Pas::new(scheme);
        let mut state = pas.empty_state();
        let mut largest = 0;
        let mut digest = None;
        for item in &items {
            let (d, next) = pas.sparse_commit(&state, item).unwrap();
            largest = largest.max(next.pool.len());
            digest = Some(d);
            state = next;
        }
        let batch = pas.commit(&items).unwrap();
        println!(
            "{scheme:<21} state holds {:>3} labels now, at most {:>3}; matches batch commit: {}",
            state.pool.len(),
            largest,
            digest == Some(batch)
        );
    }
}
