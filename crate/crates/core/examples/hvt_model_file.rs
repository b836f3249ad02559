//! Writes the toy-box model in the HVT model file format on stdout and
//! checks that it loads back to the same model.
//!
//! `cargo run --example hvt_model_file > fixtures/toybox_model.json`
//! regenerates the bundled fixture.

use ppslab::cli::HvtModelFile;
use ppslab::hvt::hvt_pps_probability;
use ppslab::toybox::build_box_model;

fn main() -> ppslab::Result<()> {
    let model = build_box_model()?.scenario;
    let file = HvtModelFile::from_scenario(&model);
    println!("{}", file.to_json());

    let loaded = HvtModelFile::parse(&file.to_json())
        .and_then(|f| f.load())
        .map_err(|e| ppslab::Error::Invalid(e.to_string()))?;
    assert_eq!(loaded, model);
    let m = loaded.measurement("check-left")?;
    eprintln!("reloaded: p(check-left found) = {}", hvt_pps_probability(&loaded, m, "found")?);
    Ok(())
}
