//! Regenerates the checked-in files under fixtures/. Run from the
//! workspace root:
//!
//!   cargo run -p coarsekit --example gen_fixtures

use std::path::Path;

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    std::fs::create_dir_all(&root).expect("create fixtures dir");
    for (name, body) in coarsekit::fixtures::shipped_files() {
        let path = root.join(name);
        std::fs::write(&path, body).expect("write fixture");
        println!("wrote {}", path.display());
    }
}
