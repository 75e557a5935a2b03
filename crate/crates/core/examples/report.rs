//! Runs a check through the command-line front end, writes the JSON report
//! and replays it.
//!
//! cargo run --example report -- crates/core/corpus

use std::error::Error;
use std::path::PathBuf;

use refinery::cli::{run, Report};

fn main() -> Result<(), Box<dyn Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/corpus").into()));
    let file = |name: &str| dir.join(name).display().to_string();
    let args = [
        "check".to_string(),
        "--abstract".into(),
        file("aqueue.mch"),
        "--concrete".into(),
        file("cqueue_guarded.mch"),
        "--mapping".into(),
        file("sort_skip.map"),
        "--retrieve".into(),
        "b = items(s)".into(),
        "--format".into(),
        "json".into(),
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&args, &mut out, &mut err);
    let report: Report = serde_json::from_slice(&out)?;
    println!("exit {code}, status {}", report.status);
    if let Some(w) = &report.witness {
        println!("violated {} by {:?} at {:?}", w.condition, w.operation, w.pair.concrete.state);
    }

    let path = std::env::temp_dir().join("refinery-report.json");
    std::fs::write(&path, &out)?;
    let (mut replay, mut err) = (Vec::new(), Vec::new());
    let code = run(["replay".to_string(), path.display().to_string()], &mut replay, &mut err);
    print!("replay exit {code}: {}", String::from_utf8_lossy(&replay));
    Ok(())
}
