use std::path::PathBuf;
use std::process::{Command, Output};

use computon::parse;

fn testdata(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("testdata")
        .join(name)
        .display()
        .to_string()
}

fn computon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_computon"))
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

const CHAIN: &str = "
computon Chain {
  colours: 0;
  ports: p1:0, m:0, p2:0;
  units: u1, u2;
  edges: p1 -> u1, u1 -> m, m -> u2, u2 -> p2;
}
computon Glue {
  colours: 0;
  ports: p1:0, p2:0;
  units: u1;
  edges: p1 -> u1, u1 -> p2;
}
computon Point { colours: 0; ports: x:0; units: ; edges: ; }
morphism ToInner : Point -> Chain { ports: x => m; units: ; edges: ; }
morphism ToStart : Point -> Glue { ports: x => p1; units: ; edges: ; }
span Crossing { apex: Point; left: ToInner; right: ToStart; }
";

fn chain_file() -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".cmp").tempfile().unwrap();
    std::fs::write(f.path(), CHAIN).unwrap();
    f
}

#[test]
fn sequencing_the_example_is_partial() {
    let o = computon(&[
        "compose",
        "seq",
        &testdata("sequential.cmp"),
        "Lambda1",
        "Lambda2",
        "--pair",
        "q1=r0",
        "--pair",
        "o1=j1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("mode: partial"), "{out}");
    let doc = out.split_once("\n\n").unwrap().1;
    let golden = std::fs::read_to_string(testdata("sequential_composite.cmp")).unwrap();
    assert_eq!(doc, golden.replace("ExampleComposite", "Seq"));
}

#[test]
fn unit_operand_is_not_connected() {
    let o = computon(&["compose", "seq", &testdata("sequential.cmp"), "Unit", "Lambda1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("operand not connected"), "{}", stdout(&o));
}

#[test]
fn simulating_the_parallel_example_fires_four_times() {
    let o = computon(&[
        "simulate",
        &testdata("parallel.cmp"),
        "Par",
        "--marking",
        "allins",
        "--policy",
        "least-id",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("events: 4\n"));
    assert!(out.contains("termination: quiescent\n"));
    let trace = out.split_once("\n\n").unwrap().1;
    assert_eq!(trace.lines().count(), 4);
    assert!(trace.lines().zip(1..).all(|(l, i)| l.starts_with(&format!("{i} "))));
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let seq_file = testdata("sequential.cmp");
    let par_file = testdata("parallel.cmp");
    let commands: Vec<Vec<&str>> = vec![
        vec!["validate", &seq_file],
        vec!["classify", &par_file, "Par"],
        vec!["compose", "seq", &seq_file, "Lambda1", "Lambda2"],
        vec!["compose", "par", &seq_file, "Lambda1", "Lambda2", "--provenance"],
        vec!["pushout", &seq_file, "Example"],
        vec!["iso", &seq_file, "Lambda1", "Lambda2"],
        vec![
            "simulate",
            &par_file,
            "Par",
            "--marking",
            "allins",
            "--policy",
            "random",
            "--seed",
            "7",
        ],
        vec![
            "export",
            &par_file,
            "Par",
            "--syntax",
            "computon",
            "--marking",
            "allins",
        ],
    ];
    for mut args in commands {
        args.extend(["--format", "json"]);
        let (a, b) = (computon(&args), computon(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
        let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
        let obj = v.as_object().unwrap();
        assert!(obj.values().all(|v| !v.is_object()), "flat report for {args:?}");
        if a.status.code() == Some(1) {
            assert!(!obj["violations"].as_array().unwrap().is_empty());
        }
    }
}

#[test]
fn missing_inputs_exit_with_two() {
    let seq_file = testdata("sequential.cmp");
    for args in [
        vec!["validate", "/nonexistent/file.cmp"],
        vec!["classify", &seq_file, "Nobody"],
        vec!["compose", "seq", &seq_file, "Lambda1", "Lambda2", "--pair", "zz=r0"],
        vec!["simulate", &seq_file, "Lambda2", "--marking", "Start"],
        vec!["pushout", &seq_file, "Lambda1"],
        vec!["frobnicate"],
        vec!["compose", "seq", &seq_file, "Lambda1", "Lambda2", "--pair", "q1"],
    ] {
        let o = computon(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stdout(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn syntax_errors_exit_with_two_and_invalid_values_with_one() {
    let f = tempfile::Builder::new().suffix(".cmp").tempfile().unwrap();
    std::fs::write(f.path(), "computon X { colours: 0 ports: p:0; }").unwrap();
    let o = computon(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":1:"), "{}", stderr(&o));

    std::fs::write(
        f.path(),
        "computon X { colours: 0; ports: p:0; units: u; edges: u -> u; }",
    )
    .unwrap();
    let o = computon(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("edge must connect a port and a unit"));
}

#[test]
fn non_pushable_span_names_the_boundary_clause() {
    let f = chain_file();
    let o = computon(&["pushout", f.path().to_str().unwrap(), "Crossing"]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("left boundary"), "{}", stdout(&o));
}

#[test]
fn iso_reports_witness_or_refusal() {
    let seq_file = testdata("sequential.cmp");
    let o = computon(&["iso", &seq_file, "Lambda1", "Lambda1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o)
        .lines()
        .any(|l| l.starts_with("port_map: ") && l.contains("q0 => q0")));
    let o = computon(&["iso", &seq_file, "Lambda1", "Lambda2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not isomorphic"));
}

#[test]
fn classify_prints_class_and_interface() {
    let o = computon(&["classify", &testdata("sequential.cmp"), "Lambda1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in [
        "class: primitive-functional",
        "control_inports: q0",
        "data_inports: i1, i2",
        "control_outports: q1",
        "data_outports: o1, o2",
        "connected: true",
    ] {
        assert!(out.lines().any(|l| l == line), "missing `{line}` in\n{out}");
    }
}

#[test]
fn written_documents_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let seq_file = testdata("sequential.cmp");
    let out = dir.path().join("par.cmp");
    let o = computon(&[
        "compose",
        "par",
        &seq_file,
        "Lambda1",
        "Lambda2",
        "--provenance",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.declarations().len(), 17 + 1 + 26 + 1);
    assert_eq!(doc.computon("Par"), doc.computon("lambda16"));

    let out = dir.path().join("seq.cmp");
    let o = computon(&[
        "compose",
        "seq",
        &seq_file,
        "Lambda1",
        "Lambda2",
        "--provenance",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(doc.span("span").is_some());
    assert!(doc.morphism("inl").is_some() && doc.morphism("inr").is_some());
}

#[test]
fn trace_and_dot_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let par_file = testdata("parallel.cmp");
    let trc = dir.path().join("run.trc");
    let o = computon(&[
        "simulate",
        &par_file,
        "Par",
        "--marking",
        "allins",
        "--trace",
        trc.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&trc).unwrap().lines().count(), 4);

    let dot = dir.path().join("par.dot");
    let o = computon(&[
        "export",
        &par_file,
        "Par",
        "--syntax",
        "petri",
        "-o",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let g = computon::dot::validate_dot(&std::fs::read_to_string(&dot).unwrap()).unwrap();
    assert_eq!(g.nodes().count(), 13 + 4);
    assert_eq!(g.edges().count(), 17);
}
