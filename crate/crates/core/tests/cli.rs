use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewbrace")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_formats() {
    let o = run(&["enumerate", "--p", "2", "--q", "5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let total: usize = stdout(&o).lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 43);

    let o = run(&["enumerate", "--p", "2", "--q", "7", "--format", "md", "--strategy", "both", "--jobs", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), include_str!("golden/order28.md"));

    let o = run(&["enumerate", "--p", "2", "--q", "5", "--additive", "Zq:hZp2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["additive"].as_array().unwrap().len(), 1);
}

#[test]
fn enumerate_writes_out_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.md");
    let cache = dir.path().join("cache");
    let args = ["enumerate", "--p", "2", "--q", "7", "--out", out.to_str().unwrap(), "--cache", cache.to_str().unwrap()];
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), include_str!("golden/order28.md"));
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 4);
    // second run reads the cache
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), include_str!("golden/order28.md"));

    // a corrupted entry is a diff, not silently recomputed
    let entry = std::fs::read_dir(&cache).unwrap().next().unwrap().unwrap().path();
    std::fs::write(&entry, "{\"version\": 1").unwrap();
    assert_eq!(code(&run(&args)), 1);
}

#[test]
fn usage_and_budget_errors_exit_2() {
    assert_eq!(code(&run(&["enumerate", "--p", "2"])), 2);
    assert_eq!(code(&run(&["enumerate", "--p", "4", "--q", "5"])), 2);
    assert_eq!(code(&run(&["enumerate", "--p", "2", "--q", "5", "--additive", "G7"])), 2);
    assert_eq!(code(&run(&["enumerate", "--p", "2", "--q", "5", "--param-choice", "z=1"])), 2);
    let o = run(&["enumerate", "--p", "2", "--q", "5", "--budget", "200", "--format", "csv"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not computed"));
    assert_eq!(code(&run(&["verify-tables", "--p", "2", "--q", "5", "--budget", "200"])), 2);
}

#[test]
fn verify_tables_and_conjecture() {
    let o = run(&["verify-tables", "--p", "2", "--q", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).ends_with("0 differences\n"));
    let o = run(&["conjecture", "--p", "2", "--q", "7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("total 29"));
    let o = run(&["conjecture", "--p", "2", "--q", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("no closed form"));
}

#[test]
fn solutions_export_and_check() {
    let o = run(&["solutions", "--p", "2", "--q", "5", "--additive", "Zq:Zp2", "--orbit", "4", "--check"]);
    assert_eq!(code(&o), 0);
    let r = skewbrace::ybe::parse_text(&stdout(&o)).unwrap();
    assert_eq!(r.size(), 20);
    assert!(skewbrace::ybe::check_ybe(&r).is_ok());
    assert_eq!(code(&run(&["solutions", "--p", "2", "--q", "5", "--additive", "Zq:Zp2", "--orbit", "99"])), 2);
}

#[test]
fn catalog_command() {
    let o = run(&["catalog", "--p", "2", "--q", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("Failed"));
    let o = run(&["catalog", "--p", "2", "--q", "5", "--lemma", "zq-h-zp2/pi2=pq"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 1);
    assert_eq!(code(&run(&["catalog", "--p", "2", "--q", "5", "--lemma", "nope"])), 2);
}
