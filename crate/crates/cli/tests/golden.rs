//! Machine output on the whole corpus, compared against `tests/golden`.
//! Set `FROBCAT_BLESS=1` to rewrite the files.

use std::fs;
use std::path::Path;
use std::process::Command;

use frobcat::corpus::standard_corpus;

fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_frobcat")).args(args).output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    format!("$ frobcat {}\nexit: {code}\n{}", args.join(" "), String::from_utf8(out.stdout).unwrap())
}

fn transcript(name: &str) -> String {
    let gen = format!("corpus:{name}");
    let commands: [&[&str]; 6] = [
        &["analyze"],
        &["decide", "set"],
        &["decide", "mod", "--ring", "fp:2"],
        &["decide", "mod", "--ring", "q"],
        &["oracle", "set", "--samples", "20", "--seed", "11"],
        &["oracle", "mod", "--p", "3", "--samples", "10", "--seed", "11"],
    ];
    commands
        .iter()
        .map(|c| {
            let mut args = vec!["--machine"];
            args.extend_from_slice(c);
            args.extend(["--gen", &gen]);
            run(&args)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn corpus_matches_golden_files() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let bless = std::env::var_os("FROBCAT_BLESS").is_some();
    let mut mismatches = Vec::new();
    for e in standard_corpus() {
        let path = dir.join(format!("{}.txt", e.name));
        let actual = transcript(&e.name);
        if bless {
            fs::write(&path, &actual).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&path).unwrap_or_default();
        if expected != actual {
            mismatches.push(e.name);
        }
    }
    assert!(mismatches.is_empty(), "golden output differs for {mismatches:?}");
}
