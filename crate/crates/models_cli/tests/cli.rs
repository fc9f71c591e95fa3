use std::path::PathBuf;
use std::process::{Command, Output};

fn baut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_baut"))
        .args(args)
        .output()
        .expect("the baut binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("baut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn dims(machine: &str, table: &str) -> Vec<(i64, usize)> {
    machine
        .lines()
        .filter_map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            if f.len() == 3 && f[0] == format!("table={table}") {
                let d = f[1].strip_prefix("degree=")?.parse().ok()?;
                let h = f[2].strip_prefix("dim_H=")?.parse().ok()?;
                Some((d, h))
            } else {
                None
            }
        })
        .collect()
}

#[test]
fn homology_of_projective_plane() {
    let o = baut(&["--format", "machine", "--max-degree", "5", "homology", "cp:2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(dims(&out, "H(cp2)"), vec![(1, 1), (2, 0), (3, 0), (4, 1), (5, 0)]);
    assert!(out.starts_with("command=baut --format machine --max-degree 5 homology cp:2\n"));
    assert!(out.ends_with("result=pass\n"));
}

#[test]
fn relative_derivations_of_projective_pair() {
    let o = baut(&["--format", "machine", "--max-degree", "6", "baut-rel", "cp:1:2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let h = dims(&out, "H(Der(cp2‖cp1)⟨1⟩)");
    assert_eq!(h, vec![(1, 1), (2, 0), (3, 0), (4, 0), (5, 0), (6, 0)]);
    assert!(out.contains("valid_lo=1\tvalid_hi=6\n"));
    assert!(!out.contains("result=fail"));
}

#[test]
fn output_is_deterministic() {
    let args = ["--max-degree", "5", "verify", "zeta", "disk:1"];
    let a = baut(&args);
    let b = baut(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("PASS  ζ is a chain map"));
}

#[test]
fn corrupted_suite_exits_one_with_a_witness() {
    let o = baut(&["--max-degree", "4", "verify", "outer-axioms", "cp:1:2", "--corrupt"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("FAIL  Der-action: (I)"));
    assert!(out.contains("witness: "));
    assert!(out.contains("result: fail"));
}

#[test]
fn non_free_map_is_refused_unless_vanishing() {
    let o = baut(&["--max-degree", "3", "baut-rel", "disk:2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--vanishing"), "{}", stderr(&o));
    let o = baut(&["--format", "machine", "--max-degree", "3", "baut-rel", "disk:2", "--vanishing"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let h = dims(&stdout(&o), "H(Der(disk2_total‖i2(A))⟨1⟩)");
    assert_eq!(h[0], (1, 1));
}

#[test]
fn degree_guard_and_range_errors() {
    let o = baut(&["--max-degree", "30", "homology", "cp:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--force"));
    let o = baut(&["--max-degree", "0", "homology", "cp:1"]);
    assert_eq!(o.status.code(), Some(3));
    let o = baut(&["--max-degree", "3", "verify", "nonsense", "cp:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cone-homotopy"));
    let o = baut(&["homology", "sphere:2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = baut(&["homology", "no-such-model"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn examples_pass_their_own_parse_check() {
    for (kind, args) in [("cp", vec!["3"]), ("cp", vec!["1", "2"]), ("sphere", vec!["5"]), ("disk", vec![]), ("boundary", vec![])] {
        let mut argv = vec!["example", kind];
        argv.extend(args.iter().copied());
        let o = baut(&argv);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stderr(&o));
        let path = scratch(&format!("{kind}{}.model", args.join("_")));
        std::fs::write(&path, stdout(&o)).unwrap();
        let report = scratch(&format!("{kind}{}.report", args.join("_")));
        let o = baut(&[
            "--max-degree",
            "6",
            "--report",
            report.to_str().unwrap(),
            "parse-check",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stderr(&o));
        assert!(stdout(&o).contains("PASS  printing and reparsing gives the same file"));
        assert_eq!(std::fs::read_to_string(&report).unwrap(), stdout(&o));
    }
}

#[test]
fn parse_errors_name_the_line() {
    let path = scratch("broken.model");
    std::fs::write(&path, "model m\ngenerator x degree 1\nd x = [x,\n").unwrap();
    let o = baut(&["parse-check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let path = scratch("not-closed.model");
    std::fs::write(&path, "model m\ngenerator x degree 3\ngenerator y degree 1\nd x = y\n").unwrap();
    let o = baut(&["parse-check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn files_and_builtins_agree() {
    let o = baut(&["example", "cp", "1", "2"]);
    let path = scratch("pair.model");
    std::fs::write(&path, stdout(&o)).unwrap();
    let from_file = baut(&["--format", "machine", "--max-degree", "5", "baut-rel", path.to_str().unwrap()]);
    let builtin = baut(&["--format", "machine", "--max-degree", "5", "baut-rel", "cp:1:2"]);
    let strip = |o: &Output| stdout(o).lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&from_file), strip(&builtin));
}
