use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let header = crate_dir.join("include").join("v2x_coverage.h");

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("V2X_COVERAGE_H".into()),
        cpp_compat: true,
        header: Some("/* C ABI for the v2x-coverage library. Generated by cbindgen. */".into()),
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
        .expect("cbindgen header generation failed")
        .write_to_file(&header);

    println!("cargo:rerun-if-changed=src/lib.rs");
}
