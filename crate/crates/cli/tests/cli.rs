use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use orthobasis::generators::apply_word;
use orthobasis::verify::random_isometry;
use orthobasis::{factor_full, OrthogonalBasis};
use orthobasis_cli::format;
use proptest::prelude::*;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthobasis")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    bin(args).status.code().unwrap()
}

struct Scratch(tempfile::TempDir);

impl Scratch {
    fn new() -> Self {
        Scratch(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn file(&self, name: &str, contents: &str) -> String {
        let p = self.path(name);
        std::fs::write(&p, contents).unwrap();
        s(&p)
    }

    fn entries(&self) -> usize {
        std::fs::read_dir(self.0.path()).unwrap().count()
    }
}

fn s(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

#[test]
fn check_basis_identity() {
    let dir = Scratch::new();
    let input = dir.file("id.txt", "orthobasis-basis v1\nn 2\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
    let out = bin(&["check-basis", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("n = 2"));
}

#[test]
fn check_basis_reports_violations() {
    let dir = Scratch::new();
    let input = dir.file("bad.txt", "orthobasis-basis v1\nn 1\n1 0\n0 2\n");
    let out = bin(&["check-basis", "--input", &input]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Gram violation"));
}

#[test]
fn missing_file_and_bad_arguments_exit_one() {
    let dir = Scratch::new();
    assert_eq!(code(&["check-basis", "--input", &s(&dir.path("absent.txt"))]), 1);
    assert_eq!(code(&["check-basis"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["generate", "--n", "0", "--length", "3", "--seed", "1", "--output", &s(&dir.path("g"))]), 1);
    assert_eq!(dir.entries(), 0);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn oversized_integer_is_malformed() {
    let dir = Scratch::new();
    let big = "1".repeat(60);
    let input = dir.file("big.txt", &format!("orthobasis-basis v1\nn 1\n{big} 0\n0 1\n"));
    let out = bin(&["reduce", "--input", &input, "--output", &s(&dir.path("cert.txt"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert!(!dir.path("cert.txt").exists());
}

#[test]
fn generate_is_deterministic_and_word_reproduces_basis() {
    let dir = Scratch::new();
    let (a, b, w) = (s(&dir.path("a.txt")), s(&dir.path("b.txt")), s(&dir.path("w.txt")));
    assert_eq!(code(&["generate", "--n", "4", "--length", "25", "--seed", "77", "--output", &a, "--with-word", &w]), 0);
    assert_eq!(code(&["generate", "--n", "4", "--length", "25", "--seed", "77", "--output", &b]), 0);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let basis = format::parse_basis(&text).unwrap();
    let (n, word) = format::parse_word(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(n, 4);
    assert_eq!(word.len(), 25);
    assert_eq!(apply_word(&word, &OrthogonalBasis::standard(n)).unwrap(), basis);
}

#[test]
fn reduce_output_is_canonical_and_deterministic() {
    let dir = Scratch::new();
    let basis = s(&dir.path("basis.txt"));
    let (c1, c2) = (s(&dir.path("c1.txt")), s(&dir.path("c2.txt")));
    assert_eq!(code(&["generate", "--n", "5", "--length", "40", "--seed", "3", "--output", &basis]), 0);
    assert_eq!(code(&["reduce", "--input", &basis, "--output", &c1]), 0);
    assert_eq!(code(&["reduce", "--input", &basis, "--output", &c2]), 0);
    let text = std::fs::read_to_string(&c1).unwrap();
    assert_eq!(text, std::fs::read_to_string(&c2).unwrap());
    let cert = format::parse_certificate(&text).unwrap();
    assert_eq!(format::write_certificate(&cert), text);
    assert_eq!(code(&["verify", "--cert", &c1]), 0);
}

#[test]
fn transform_maps_one_basis_to_another() {
    let dir = Scratch::new();
    let (from, to, cert) = (s(&dir.path("from.txt")), s(&dir.path("to.txt")), s(&dir.path("cert.txt")));
    assert_eq!(code(&["generate", "--n", "3", "--length", "20", "--seed", "1", "--output", &from]), 0);
    assert_eq!(code(&["generate", "--n", "3", "--length", "20", "--seed", "2", "--output", &to]), 0);
    assert_eq!(code(&["transform", "--from", &from, "--to", &to, "--output", &cert]), 0);
    let cert = format::parse_certificate(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let x = format::parse_basis(&std::fs::read_to_string(&from).unwrap()).unwrap();
    let y = format::parse_basis(&std::fs::read_to_string(&to).unwrap()).unwrap();
    assert_eq!(&cert.word().matrix(3).unwrap().mul(x.matrix()).unwrap(), y.matrix());

    let other = s(&dir.path("other.txt"));
    assert_eq!(code(&["generate", "--n", "2", "--length", "5", "--seed", "2", "--output", &other]), 0);
    let never = dir.path("never.txt");
    assert_eq!(code(&["transform", "--from", &from, "--to", &other, "--output", &s(&never)]), 1);
    assert!(!never.exists());
}

#[test]
fn verify_rejects_bad_reflection_with_two() {
    let dir = Scratch::new();
    // (1, 1) has self-pairing 2
    let text = "orthobasis-certificate v1\nn 1\nreflections 1\n1 1\nops 0\ntarget\n0 -1\n-1 0\n";
    let cert = dir.file("cert.txt", text);
    let out = bin(&["verify", "--cert", &cert]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("self-pairing -2"));
}

#[test]
fn verify_reports_wrong_target() {
    let dir = Scratch::new();
    let text = "orthobasis-certificate v1\nn 1\nreflections 0\nops 1\nI 1\ntarget\n1 0\n0 1\n";
    let out = bin(&["verify", "--cert", &dir.file("cert.txt", text)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column x_1"));
}

#[test]
fn failed_reduce_leaves_existing_output_untouched() {
    let dir = Scratch::new();
    let output = dir.file("cert.txt", "previous\n");
    let input = dir.file("bad.txt", "orthobasis-basis v1\nn 1\n1 0\n");
    assert_eq!(code(&["reduce", "--input", &input, "--output", &output]), 1);
    assert_eq!(std::fs::read_to_string(&output).unwrap(), "previous\n");
    assert_eq!(dir.entries(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn formats_round_trip(n in 1usize..=5, length in 0usize..30, seed: u64) {
        let (basis, word) = random_isometry(n, length, seed).unwrap();
        let text = format::write_basis(&basis);
        prop_assert_eq!(&format::parse_basis(&text).unwrap(), &basis);
        prop_assert_eq!(format::write_basis(&format::parse_basis(&text).unwrap()), text);

        let text = format::write_word(n, &word);
        let (m, parsed) = format::parse_word(&text).unwrap();
        prop_assert_eq!(m, n);
        prop_assert_eq!(&parsed, &word);
        prop_assert_eq!(format::write_word(n, &parsed), text);

        let cert = factor_full(&basis).unwrap();
        let text = format::write_certificate(&cert);
        let parsed = format::parse_certificate(&text).unwrap();
        prop_assert_eq!(&parsed, &cert);
        prop_assert_eq!(format::write_certificate(&parsed), text);
    }

    #[test]
    fn truncated_files_never_parse(n in 1usize..=3, seed: u64, cut in 0.0f64..1.0) {
        let (basis, _) = random_isometry(n, 10, seed).unwrap();
        let text = format::write_certificate(&factor_full(&basis).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        let keep = ((lines.len() as f64) * cut) as usize;
        prop_assume!(keep < lines.len());
        let truncated = lines[..keep].join("\n");
        prop_assert!(format::parse_certificate(&truncated).is_err());
    }
}
