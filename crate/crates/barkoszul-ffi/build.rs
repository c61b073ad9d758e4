//! Generates include/barkoszul.h from the extern "C" surface at build time,
//! so the header can never drift from the code.

use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("BARKOSZUL_H".to_string()),
        cpp_compat: true,
        documentation: true,
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            ..Default::default()
        },
        ..Default::default()
    };
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("the C header must generate")
        .write_to_file(crate_dir.join("include/barkoszul.h"));
    println!("cargo:rerun-if-changed=src/lib.rs");
}
