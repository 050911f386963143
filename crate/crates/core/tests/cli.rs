use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperlattice"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let o = bin().args(args).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

#[test]
fn verify_and_exit_codes() {
    let (code, out, _) = run(&["verify", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("n=3 pass: 8 matrices over 4 angles"));
    let (code, out, _) = run(&["verify", "--upto", "500", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().skip(1).all(|l| l.split(',').nth(1) == Some("true")));
    let (code, _, err) = run(&["measure", "--n", "4"]);
    assert_eq!(code, 3);
    assert!(err.contains("4 ∉ 𝒩"));
    assert_eq!(run(&["measure", "--n", "2"]).0, 3);
    assert_eq!(run(&["scan", "--hi", "10", "--unknown"]).0, 2);
    assert_eq!(run(&["verify", "--n", "10002"]).0, 4);
}

#[test]
fn measure_csv_for_n6() {
    let (code, out, _) = run(&["measure", "--n", "6"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,y,weight_num,weight_den,angle_float");
    assert_eq!(lines.len(), 5);
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        let (x, y): (i64, i64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        assert_eq!(x * x + y * y, 32);
        assert_eq!((f[2], f[3]), ("1", "4"));
    }
}

#[test]
fn outputs_are_reproducible_and_out_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.jsonl");
    let p = path.to_str().unwrap();
    let (_, stdout, _) = run(&["scan", "--lo", "2", "--hi", "3000", "--workers", "4"]);
    assert_eq!(run(&["scan", "--lo", "2", "--hi", "3000", "--out", p]).0, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
    let (_, again, _) = run(&["scan", "--lo", "2", "--hi", "3000", "--workers", "2"]);
    assert_eq!(again, stdout);
    let first = stdout.lines().next().unwrap();
    assert_eq!(
        first,
        r#"{"n":2,"in_N":true,"r_star_m":1,"gamma_count":2,"discrepancy":null,"c2_abs":null,"W2_m":null,"omega1_m":null,"Omega1_m":null}"#
    );
    let (_, a, _) = run(&["density", "--grid", "11", "--timestamp"]);
    let (_, b, _) = run(&["density", "--grid", "11"]);
    assert_eq!(a, b);
}

#[test]
fn scan_resume_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.jsonl");
    let ck = dir.path().join("s.ckpt");
    let (o, c) = (out.to_str().unwrap(), ck.to_str().unwrap());
    assert_eq!(run(&["scan", "--hi", "9000", "--out", o, "--checkpoint", c]).0, 0);
    let full = std::fs::read(&out).unwrap();
    assert_eq!(run(&["scan", "--hi", "9000", "--out", o, "--checkpoint", c, "--resume"]).0, 0);
    assert_eq!(std::fs::read(&out).unwrap(), full);
    std::fs::write(&ck, "garbage").unwrap();
    assert_eq!(run(&["scan", "--hi", "9000", "--out", o, "--checkpoint", c, "--resume"]).0, 1);
}

#[test]
fn search_commands() {
    let (code, out, _) = run(&["hunt-asym", "--upto", "10", "--delta", "0.5"]);
    assert_eq!(code, 0);
    assert!(out.contains(r#""n":3,"#));
    let (_, out, _) = run(&["hunt-asym", "--upto", "100", "--delta", "2"]);
    assert!(out.is_empty());
    let (_, out, _) = run(&["primes", "--upto", "1000", "--eps", "0.1"]);
    assert!(out.lines().any(|l| l.starts_with("101,10,1,")));
    assert!(out.lines().any(|l| l.starts_with("197,14,1,")));
    let (code, _, _) = run(&["primes", "--upto", "1000000", "--eps", "0.1", "--lo", "100", "--hi", "700"]);
    assert_eq!(code, 0);
    let (code, out, _) = run(&["census", "--upto", "1000"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["count"].as_u64().unwrap() > 0);
    let (code, out, _) = run(&["hunt-singular", "--upto", "20000", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("n,in_N,r_star_m"));
}

#[test]
fn gamma_w2_realparts() {
    let (_, out, _) = run(&["gamma", "--n", "3"]);
    assert_eq!(out.lines().count(), 9);
    let (_, out, _) = run(&["w2", "--n", "3"]);
    assert_eq!(out, "m,W2\n5,-6/5\n");
    let (_, out, _) = run(&["realparts", "--n", "3"]);
    assert_eq!(out.lines().next(), Some("n,x3,x2,real_part_float"));
    assert_eq!(out.lines().count(), 9);
    let (code, out, _) = run(&["realparts", "--lo", "9990", "--hi", "10010", "--ks"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("count,ks\n"));
    let (_, out, _) = run(&["measure", "--n", "3", "--kmax", "8", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["discrepancy"].as_f64().unwrap() <= v["erdos_turan_bound"].as_f64().unwrap());
}
