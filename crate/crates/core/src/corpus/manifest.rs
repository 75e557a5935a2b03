//! Expected-verdict manifest: `[name]` sections of `key: value` lines, where
//! keys are `check` flags plus `expect` and an optional `violation`.

use std::path::Path;

use crate::refine::{RefineError, Status};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub fields: Vec<(String, String)>,
}

const PATH_KEYS: [&str; 3] = ["abstract", "concrete", "mapping"];
const META_KEYS: [&str; 2] = ["expect", "violation"];

impl ManifestEntry {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn expect(&self) -> Option<Status> {
        match self.get("expect")? {
            "pass" => Some(Status::Pass),
            "fail" => Some(Status::Fail),
            _ => None,
        }
    }

    /// Arguments for the `check` subcommand; file names resolve against `dir`.
    pub fn check_args(&self, dir: &Path) -> Vec<String> {
        let mut args = vec!["check".to_string()];
        for (k, v) in &self.fields {
            if META_KEYS.contains(&k.as_str()) {
                continue;
            }
            match v.as_str() {
                "true" => args.push(format!("--{k}")),
                "false" => {}
                _ if PATH_KEYS.contains(&k.as_str()) => {
                    args.push(format!("--{k}"));
                    args.push(dir.join(v).to_string_lossy().into_owned());
                }
                _ => {
                    args.push(format!("--{k}"));
                    args.push(v.clone());
                }
            }
        }
        args
    }
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>, RefineError> {
    let mut out: Vec<ManifestEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split(" --").next().unwrap_or("").trim();
        if body.is_empty() || body.starts_with("--") || body.starts_with('#') {
            continue;
        }
        if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            out.push(ManifestEntry { name: name.trim().to_string(), fields: Vec::new() });
            continue;
        }
        let Some((k, v)) = body.split_once(':') else {
            return Err(RefineError::MappingSyntax { line, message: "expected `[name]` or `key: value`".into() });
        };
        let Some(entry) = out.last_mut() else {
            return Err(RefineError::MappingSyntax { line, message: "entry field before the first `[name]`".into() });
        };
        entry.fields.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_become_check_arguments() {
        let m = parse_manifest(
            "-- header\n[sortout]\nrelation: sim\nabstract: a.mch\nretrieve: b = items(s)\nstrict: true\nexpect: pass\n",
        )
        .unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].expect(), Some(Status::Pass));
        let args = m[0].check_args(Path::new("dir"));
        assert_eq!(
            args,
            vec!["check", "--relation", "sim", "--abstract", "dir/a.mch", "--retrieve", "b = items(s)", "--strict"]
        );
        assert!(parse_manifest("relation: sim").is_err());
    }
}
