//! Loads a scenario file and prints the ABL profile of every PVM in it.
//!
//! Usage: `cargo run --example scenario_file [path]` (defaults to the
//! bundled three-box fixture).

use ppslab::abl::abl_profile;
use ppslab::cli::ScenarioFile;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/three_box.json").to_string());
    let text = std::fs::read_to_string(&path).expect("readable scenario file");
    let loaded = match ScenarioFile::parse(&text).and_then(|f| f.load()) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(2);
        }
    };
    println!("dimension {}", loaded.scenario.dim());
    println!("pre  {}", loaded.scenario.pre().describe());
    println!("post {}", loaded.scenario.post().describe());
    match abl_profile(&loaded.scenario, &loaded.pvms) {
        Ok(profile) => {
            for e in profile.entries {
                match e.value.probability() {
                    Some(p) => println!("  {}/{}  {p:.12}", e.measurement_name, e.outcome),
                    None => println!("  {}/{}  impossible", e.measurement_name, e.outcome),
                }
            }
        }
        Err(e) => eprintln!("{e}"),
    }
}
