use std::path::{Path, PathBuf};

use refinery::cli::{run, Report};
use refinery::corpus::{parse_manifest, shipped_files, ManifestEntry};
use refinery::refine::Status;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn manifest() -> Vec<ManifestEntry> {
    let text = std::fs::read_to_string(corpus_dir().join("manifest.txt")).unwrap();
    parse_manifest(&text).unwrap()
}

fn invoke(args: &[String]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn shipped_files_match_the_generators() {
    for (name, text) in shipped_files() {
        let on_disk = std::fs::read_to_string(corpus_dir().join(&name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(on_disk, text, "{name} is stale; regenerate with the write_corpus example");
    }
}

#[test]
fn manifest_verdicts_hold() {
    let entries = manifest();
    assert!(entries.len() >= 30);
    let tmp = tempfile::tempdir().unwrap();
    for e in entries {
        let mut args = e.check_args(&corpus_dir());
        args.extend(["--format".into(), "json".into()]);
        let (code, out, err) = invoke(&args);
        let expect = e.expect().unwrap_or_else(|| panic!("{}: missing expect", e.name));
        let want = if expect == Status::Pass { 0 } else { 1 };
        assert_eq!(code, want, "{}: exit {code}\n{out}{err}", e.name);

        let report: Report = serde_json::from_str(&out).unwrap();
        assert_eq!(report.status, expect.to_string(), "{}", e.name);
        match (&report.witness, e.get("violation")) {
            (Some(w), Some(v)) => assert_eq!(w.condition, v, "{}", e.name),
            (None, None) => {}
            (w, v) => panic!("{}: witness {w:?}, expected violation {v:?}", e.name),
        }

        let (again, out2, _) = invoke(&args);
        assert_eq!((again, &out2), (code, &out), "{}: rerun differs", e.name);

        let path = tmp.path().join(format!("{}.json", e.name));
        std::fs::write(&path, &out).unwrap();
        let (rc, rout, rerr) = invoke(&["replay".into(), path.display().to_string()]);
        assert_eq!(rc, 0, "{}: replay failed\n{rout}{rerr}", e.name);
        assert!(rout.starts_with("replay ok"), "{}", e.name);
    }
}

#[test]
fn failing_witnesses_carry_reachable_traces() {
    for e in manifest().into_iter().filter(|e| e.expect() == Some(Status::Fail)) {
        let mut args = e.check_args(&corpus_dir());
        args.extend(["--format".into(), "json".into()]);
        let (_, out, _) = invoke(&args);
        let report: Report = serde_json::from_str(&out).unwrap();
        let w = report.witness.unwrap();
        assert!(w.trace.is_some(), "{}: witness state should be reachable", e.name);
    }
}
