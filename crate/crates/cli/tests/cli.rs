use std::path::PathBuf;
use std::process::{Command, Output};

use reslat_cli::format::StructureFile;
use reslat_cli::{CensusLine, ReportDocument};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(p).unwrap()
}

fn reslat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reslat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Value of a `key  value` row in a text report.
fn field(out: &str, key: &str) -> Option<String> {
    out.lines().find_map(|l| {
        let rest = l.strip_prefix(key)?;
        rest.starts_with(' ').then(|| rest.trim().to_string())
    })
}

fn a6() -> String {
    fixture("a6.json").display().to_string()
}

#[test]
fn golden_outputs_are_stable() {
    let a6 = a6();
    let cases: [(&[&str], &str); 8] = [
        (&["filters", &a6], "filters.txt"),
        (&["spectrum", &a6], "spectrum.txt"),
        (&["coann", &a6, "--base", "c,d,1"], "coann.txt"),
        (&["omega", &a6, "--base", "d,1"], "omega.txt"),
        (&["normality", &a6], "normality.txt"),
        (&["verify", &a6], "verify.txt"),
        (&["filters", &a6, "--format", "json"], "filters.json"),
        (&["export-dot", &a6, "--what", "hasse"], "hasse.dot"),
    ];
    for (args, file) in cases {
        let first = reslat(args);
        let second = reslat(args);
        assert_eq!(first.status.code(), Some(0), "{args:?}: {}", stderr(&first));
        assert_eq!(stdout(&first), golden(file), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn json_reports_round_trip_byte_for_byte() {
    let a6 = a6();
    let commands: [&[&str]; 7] = [
        &["validate", &a6],
        &["filters", &a6],
        &["spectrum", &a6, "--base", "d,1"],
        &["coann", &a6, "--base", "d,1", "--of", "b,c"],
        &["omega", &a6, "--base", "d,1"],
        &["normality", &a6, "--base", "d,1"],
        &["verify", &a6, "--battery", "omega"],
    ];
    for args in commands {
        let mut args = args.to_vec();
        args.extend(["--format", "json"]);
        let out = stdout(&reslat(&args));
        let doc: ReportDocument = serde_json::from_str(&out).unwrap();
        assert_eq!(doc.tool, "reslat");
        assert_eq!(doc.structure, "A6");
        assert_eq!(doc.command, args[0]);
        assert_eq!(doc.to_json(), out, "{args:?}");
    }
}

#[test]
fn fixtures_validate() {
    for f in [
        "a6.json",
        "chain2.json",
        "chain3-godel.json",
        "chain3-luk.json",
    ] {
        let o = reslat(&["validate", &fixture(f).display().to_string()]);
        assert_eq!(o.status.code(), Some(0), "{f}");
        assert_eq!(field(&stdout(&o), "valid").as_deref(), Some("yes"), "{f}");
    }
}

#[test]
fn invalid_structure_exits_one_with_witness() {
    let mut file = StructureFile::read(&fixture("a6.json")).unwrap();
    file.times.as_mut().unwrap()["a"][3] = "a".into();
    file.times.as_mut().unwrap()["c"][1] = "a".into();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, file.to_json()).unwrap();
    let p = p.display().to_string();

    let o = reslat(&["validate", &p]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(field(&stdout(&o), "valid").as_deref(), Some("no"));
    assert!(stdout(&o).contains("adjointness"));

    // other commands refuse the structure outright
    let o = reslat(&["filters", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a residuated lattice"));
}

#[test]
fn input_errors_exit_two() {
    let a6 = a6();
    let o = reslat(&["coann", &a6, "--base", "c,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`d`"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let o = reslat(&["coann", &a6, "--base", "c,zz,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`zz`"));

    let o = reslat(&["normality", &a6, "--base", "0,a,b,c,d,1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = reslat(&["filters", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));

    let o = reslat(&["verify", &a6, "--battery", "§7"]);
    assert_eq!(o.status.code(), Some(2));

    let o = reslat(&["search", "--size", "9"]);
    assert_eq!(o.status.code(), Some(2));

    let o = reslat(&["search", "--size", "5", "--base-lattice", &a6]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("6 elements"), "{}", stderr(&o));
}

#[test]
fn normality_assert_mode() {
    let a6 = a6();
    assert_eq!(
        reslat(&["normality", &a6, "--assert", "1"]).status.code(),
        Some(0)
    );
    assert_eq!(
        reslat(&["normality", &a6, "--base", "d,1", "--assert", "1"])
            .status
            .code(),
        Some(0)
    );
    // every 4-element structure is normal; some 5-element one is not
    let o = reslat(&["search", "--size", "4"]);
    for l in stdout(&o).lines().take(7) {
        let rec: CensusLine = serde_json::from_str(l).unwrap();
        assert_eq!(rec.stats.normality_index, 1);
    }
    let o = reslat(&["search", "--size", "5"]);
    let rec: CensusLine = stdout(&o)
        .lines()
        .filter_map(|l| serde_json::from_str(l).ok())
        .find(|r: &CensusLine| r.stats.normality_index == 2)
        .expect("a 2-normal, non-normal structure of size 5");
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.json");
    std::fs::write(&p, rec.structure.to_json()).unwrap();
    let p = p.display().to_string();
    assert_eq!(
        reslat(&["normality", &p, "--assert", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        reslat(&["normality", &p, "--assert", "2"]).status.code(),
        Some(0)
    );
}

#[test]
fn coann_listed_values() {
    let o = reslat(&["coann", &a6(), "--base", "c,d,1", "--of", "a"]);
    assert_eq!(stdout(&o).lines().last(), Some("{c,d,1}"));
    let o = reslat(&["coann", &a6(), "--base", "c", "--gen"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("generated {c,d,1}"));
}

#[test]
fn search_writes_census_and_summary() {
    let o = reslat(&["search", "--size", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    for l in &lines[..2] {
        let rec: CensusLine = serde_json::from_str(l).unwrap();
        let s = rec.structure.to_structure().unwrap();
        assert!(reslat::validate_structure(&s).valid);
    }
    let summary: serde_json::Value = serde_json::from_str(lines[2]).unwrap();
    assert_eq!(summary["summary"]["by_size"]["3"], 2);
    assert_eq!(field(&stderr(&o), "structures").as_deref(), Some("2"));

    let o = reslat(&["search", "--size", "4", "--limit", "3"]);
    assert_eq!(stdout(&o).lines().count(), 4);

    let o = reslat(&["search", "--size", "4", "--all-labelings"]);
    assert!(stdout(&o).lines().count() >= 8);
}

#[test]
fn dot_exports() {
    let o = reslat(&["export-dot", &a6(), "--what", "filters"]);
    let dot = stdout(&o);
    assert!(dot.contains("graph \"A6 filters\""));
    assert_eq!(dot.matches("[label=").count(), 5);
    assert_eq!(dot.matches(" -- ").count(), 5);
}
