//! Runs a scenario file (by default every file of the shipped catalog) and
//! prints its report.
//!
//! `cargo run --example run_scenario -- path/to/file.scn`

use prismdisp::cli::{builtin_catalog, catalog_files, report_emit, run_scenario_file, Format, RunOptions};

fn main() -> prismdisp::Result<()> {
    let files = match std::env::args().nth(1) {
        Some(f) => vec![f.into()],
        None => catalog_files(&builtin_catalog())?,
    };
    for f in files {
        let r = run_scenario_file(&f, &RunOptions::default())?;
        println!("# {} -> {:?} (expected {:?})", f.display(), r.status, r.expected);
        print!("{}", report_emit(&r, Format::Text));
    }
    Ok(())
}
