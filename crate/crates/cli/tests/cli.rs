use std::process::{Command, Output};

fn ramacf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramacf"))
        .args(args)
        .env_remove("RAMACF_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_by_step() {
    let o = ramacf(&["eval", "rr", "--x", "2*pi", "--prec", "256", "--digits", "30"]);
    assert_eq!(o.status.code(), Some(0));
    // sqrt((5 + sqrt 5)/2) - (sqrt 5 + 1)/2
    assert!(stdout(&o).starts_with("2.84079043840412296028291832393e-1"), "{}", stdout(&o));
}

#[test]
fn eval_errors_exit_2() {
    assert_eq!(ramacf(&["eval", "rr", "--q", "2"]).status.code(), Some(2));
    assert_eq!(ramacf(&["eval", "nope"]).status.code(), Some(2));
    assert_eq!(ramacf(&["eval", "rr", "--param", "z=1"]).status.code(), Some(2));
    assert_eq!(ramacf(&["eval"]).status.code(), Some(2));
}

#[test]
fn identity_json_report() {
    let dir = std::env::temp_dir().join(format!("ramacf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = ramacf(&["identity", "--category", "closed-form", "--prec", "256", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let reports: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_str(&text).unwrap();
    assert!(!reports.is_empty());
    for r in &reports {
        let keys: Vec<&str> = r.keys().map(String::as_str).collect();
        for k in ["case", "category", "lhs", "rhs", "abs_error", "rel_error", "precision_bits", "status", "notes"] {
            assert!(keys.contains(&k), "{k} missing");
        }
        assert!(r["lhs"].is_string() && r["abs_error"].is_string());
        assert_eq!(r["category"], "closed-form");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn identity_single_case_with_override() {
    let o = ramacf(&["identity", "eq4-functional", "--param", "a=pi/3", "--prec", "192"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("pass"));
    assert_eq!(ramacf(&["identity", "no-such-case"]).status.code(), Some(2));
    assert_eq!(ramacf(&["identity"]).status.code(), Some(2));
}

#[test]
fn minpoly_finds_rr_polynomial() {
    let o = ramacf(&["minpoly", "rr", "--x", "pi", "--max-degree", "8", "--prec", "512"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("x^8 + 14*x^7 + 22*x^6 + 22*x^5 + 30*x^4 - 22*x^3 + 22*x^2 - 14*x + 1"));
}

#[test]
fn minpoly_transcendental_not_found() {
    let o = ramacf(&["minpoly", "big-k", "--param", "r=1", "--max-degree", "4", "--prec", "256"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn integrate_eta4() {
    let o = ramacf(&["integrate", "eta4", "--a", "1", "--b", "2", "--prec", "128"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("2.17152017210010020661130088716"), "{}", stdout(&o));
    assert_eq!(ramacf(&["integrate", "eta4", "--a", "2", "--b", "1"]).status.code(), Some(2));
}

#[test]
fn config_file_sets_precision() {
    let dir = std::env::temp_dir().join(format!("ramacf-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    std::fs::write(&path, r#"{"precision_bits": 64}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ramacf"))
        .args(["eval", "golden"])
        .env("RAMACF_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    // 64 bits print 19 digits
    assert_eq!(stdout(&o).trim().len(), "1.618033988749894848".len());
    std::fs::write(&path, r#"{"precision": 64}"#).unwrap();
    assert_eq!(ramacf(&["--config", path.to_str().unwrap(), "eval", "golden"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
