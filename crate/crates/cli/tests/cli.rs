use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hausdorff-lab"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hausdorff-lab-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn borel_table() {
    let o = run(&["borel"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Sp,2,Sp4,6,10,3/5 (0.600000)"));
    assert!(text.contains("SL,3,SL3,5,8,5/8 (0.625000)"));
    assert!(text.contains("SOodd,3,SO7,12,21,4/7 (0.571429)"));
    let json = stdout(&run(&["borel", "--family", "Sp", "--n", "2", "--format", "jsonl"]));
    let v: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
    assert_eq!(v["dim_borel"], 6);
    assert_eq!(v["ratio"]["den"], 5);
}

#[test]
fn hdim_traces_and_exit_codes() {
    let unipotent = scratch(
        "unipotent.txt",
        "group family=SL n=2 p=3 k=5\ngen: [[1,t],[0,1]]\ngen: [[1,t^2],[0,1]]\ngen: [[1,t^3],[0,1]]\ngen: [[1,t^4],[0,1]]\n",
    );
    let path = unipotent.to_str().unwrap();
    let o = run(&["hdim", "--spec", path]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "level,num_exp,den_exp,ratio_num,ratio_den\n2,1,3,1,3\n3,2,6,1,3\n4,3,9,1,3\n5,4,12,1,3\n"
    );
    assert_eq!(run(&["hdim", "--spec", path, "--cap", "4"]).status.code(), Some(2));

    let empty = scratch("empty.txt", "group family=Sp n=2 p=3 k=3\n");
    let text = stdout(&run(&["hdim", "--spec", empty.to_str().unwrap()]));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",0,1")));

    let bad = scratch("bad.txt", "group family=SL n=2 p=3 k=3\ngen: [[1,1],[0,1]]\n");
    assert_eq!(run(&["hdim", "--spec", bad.to_str().unwrap()]).status.code(), Some(4));
    assert_eq!(run(&["hdim", "--spec", "/no/such/file"]).status.code(), Some(4));
}

#[test]
fn realize_and_abelian() {
    let o = run(&["realize", "--theta", "1/2", "--mmax", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("abelian d=1 p=2\nS1: prefix=[] period=[0,1] from=0\n"));
    assert!(text.trim_end().ends_with("10,5,10,1,2"));
    assert!(stdout(&run(&["realize", "--theta", "1"])).contains("period=[1]"));
    assert!(stdout(&run(&["realize", "--theta", "0"])).contains("period=[0]"));
    assert_eq!(run(&["realize", "--theta", "3/2"]).status.code(), Some(4));
    assert_eq!(run(&["realize", "--theta", "x"]).status.code(), Some(4));

    let spec = scratch("evens.txt", "abelian d=1 p=2\nS1: prefix=[] period=[1,0] from=0\n");
    let text = stdout(&run(&["abelian", "--spec", spec.to_str().unwrap(), "--mmax", "4"]));
    assert_eq!(text, "level,num_exp,den_exp,ratio_num,ratio_den\n1,1,1,1,1\n2,1,2,1,2\n3,2,3,2,3\n4,2,4,1,2\n");
}

#[test]
fn lie_reports() {
    let o = run(&["lie", "--family", "Sp", "--n", "2", "--p", "3", "--D", "12", "--dump"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("simplicity: simple (certified over 29524 classes)"));
    assert!(text.contains("density congruence q=3 D=12: 1/3 (0.333333)"));
    assert!(text.contains("bound 1-1/d: 9/10"));
    assert!(text.contains("lie family=Sp n=2 p=3 d=10"));
    let f2 = stdout(&run(&["lie", "--family", "Sp", "--n", "2", "--p", "2", "--D", "6"]));
    assert!(f2.contains("simplicity: not simple"));
}

#[test]
fn fgl_report() {
    let law = scratch(
        "mult.txt",
        "fgl d=1 D=4 p=3 k=5\n[1, 0] -> [1+0*t+0*t^2+0*t^3+0*t^4]\n[0, 1] -> [1]\n[1, 1] -> [1]\n",
    );
    let o = run(&["fgl", "--spec", law.to_str().unwrap(), "--n", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("axioms: unit, associativity and tail shape hold"));
    assert!(text.contains("\n4,4\n"));
    let bad = scratch("bad_fgl.txt", "fgl d=1 D=3 p=3 k=4\n[1, 0] -> [1]\n[0, 1] -> [1]\n[1, 2] -> [1]\n");
    assert_eq!(run(&["fgl", "--spec", bad.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn seeded_commands_are_reproducible() {
    let args = ["spectrum", "--family", "SL", "--n", "2", "--p", "3", "--mmax", "3", "--count", "20", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = std::env::temp_dir().join(format!("hausdorff-lab-spectrum-{}.jsonl", std::process::id()));
    let mut with_out = args.to_vec();
    with_out.extend(["--format", "jsonl", "--out", out.to_str().unwrap()]);
    assert_eq!(run(&with_out).status.code(), Some(0));
    let written = fs::read_to_string(&out).unwrap();
    assert_eq!(written.lines().count(), 20);
}

#[test]
fn verify_filter_and_bad_input() {
    let o = run(&["verify", "--filter", "borel"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("PASS  1 borel:"));
    assert!(text.contains("\"passed\":1,\"failed\":0"));
    assert_eq!(run(&["verify", "--filter", "nothing"]).status.code(), Some(4));
    assert_eq!(run(&["borel", "--family", "XX", "--n", "2"]).status.code(), Some(4));
    assert_eq!(run(&["bogus"]).status.code(), Some(4));
}
