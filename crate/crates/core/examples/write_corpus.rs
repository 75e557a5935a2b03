//! Writes the shipped corpus (machines and mapping files) into a directory.
//!
//! cargo run --example write_corpus -- crates/core/corpus

use std::path::PathBuf;

use refinery::corpus::shipped_files;

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "corpus".into()));
    std::fs::create_dir_all(&dir)?;
    for (name, text) in shipped_files() {
        std::fs::write(dir.join(&name), text)?;
        println!("wrote {}", dir.join(&name).display());
    }
    Ok(())
}
