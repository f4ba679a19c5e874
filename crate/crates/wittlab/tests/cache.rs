//! Cache contract: WITTLAB_CACHE overrides the directory, entries are
//! byte-identical to recomputation, and concurrent fills are idempotent.

use std::sync::Arc;

use wittlab::nest::Nest;
use wittlab::univ::{family_to_bytes, structure_polys, Indexing, StructKind, UnivPolyFamily};

#[test]
fn cache_dir_override_and_byte_identity() {
    let dir = tempfile::tempdir().unwrap();
    // the env var is read per computation; this test binary owns the process
    std::env::set_var("WITTLAB_CACHE", dir.path());

    let idx = Indexing::Big(Nest::upto(7));
    let fam = structure_polys(StructKind::Mul, &idx).unwrap();
    let path = dir.path().join("struct-mul-big-1_2_3_4_5_6_7.json");
    assert!(path.exists(), "cache file written to the override directory");

    // the persisted bytes parse back to a family that serializes identically
    let bytes = std::fs::read(&path).unwrap();
    let parsed = UnivPolyFamily::from_json(&serde_json::from_slice(&bytes).unwrap()).unwrap();
    assert_eq!(parsed, *fam);
    assert_eq!(family_to_bytes(&parsed), bytes);
    assert_eq!(family_to_bytes(&fam), bytes);

    std::env::remove_var("WITTLAB_CACHE");
}

#[test]
fn concurrent_fills_agree() {
    let idx = Indexing::Big(Nest::upto(9));
    let handles: Vec<_> = (0..8)
        .map(|_| {
            let idx = idx.clone();
            std::thread::spawn(move || structure_polys(StructKind::Add, &idx).unwrap())
        })
        .collect();
    let results: Vec<Arc<UnivPolyFamily>> =
        handles.into_iter().map(|h| h.join().unwrap()).collect();
    for pair in results.windows(2) {
        assert_eq!(pair[0], pair[1]);
    }
}
