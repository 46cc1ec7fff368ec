//! Write DOT renderings of small graphs; render with `dot -Tsvg`.

use pfxd::schemes::{to_dot, SchemeId};

fn main() {
    let dir = std::env::temp_dir().join("pfxd-dot");
    std::fs::create_dir_all(&dir).unwrap();
    for (scheme, n) in [
        (SchemeId::Linear, 7),
        (SchemeId::SkipList, 16),
        (SchemeId::AntimonotoneOptimal, 24),
        (SchemeId::ThreadedAuthTree, 8),
        (SchemeId::Hypercore, 8),
        (SchemeId::TransparencyLog, 6),
    ] {
        let path = dir.join(format!("{scheme}_{n}.dot"));
        std::fs::write(&path, to_dot(scheme.graph().as_ref(), n)).unwrap();
        println!("{}", path.display());
    }
}
