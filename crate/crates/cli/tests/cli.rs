use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hurstlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurstlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_prices(path: &Path, n: usize) {
    let mut s = String::from("day,price\n");
    let mut p = 100.0f64;
    for i in 0..n {
        // deterministic wiggle, no RNG needed
        p *= 1.0 + 0.01 * ((i as f64 * 0.7).sin() + 0.5 * (i as f64 * 0.13).cos());
        s.push_str(&format!("{i},{p}\n"));
    }
    fs::write(path, s).unwrap();
}

const HEADER: &str = "table,generator,param_set,variable,q,stat,original_mean,original_std,shuffled_mean,shuffled_std,delta_h,delta_h_shuff,test_z,reject95";

#[test]
fn ghe_on_a_price_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("dow.csv");
    write_prices(&csv, 500);
    let out = hurstlab(&["ghe", csv.to_str().unwrap(), "--shuffles", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), HEADER);
    // three variables x (3 H + 3 spread + 1 delta)
    assert_eq!(lines.count(), 21);
}

#[test]
fn error_contracts_give_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.csv");
    fs::write(&short, "date,price\n1,100\n2,101\n3,99.5\n").unwrap();
    let out = hurstlab(&["ghe", short.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("too short"));

    let out = hurstlab(&["ghe", "/no/such/file.csv"]);
    assert!(!out.status.success());

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "date,price\n1,100\n2,x\n").unwrap();
    let out = hurstlab(&["ghe", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"));

    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "generator = fbm\nH = 0.5\nflavour = sweet\n").unwrap();
    let out = hurstlab(&["ensemble", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("flavour"));

    let cfg = dir.path().join("missing.cfg");
    fs::write(&cfg, "generator = stable\n").unwrap();
    assert!(!hurstlab(&["ensemble", cfg.to_str().unwrap()]).status.success());

    assert!(!hurstlab(&["table", "T1"]).status.success());
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "generator = arfima; alpha = 1.6; d = 0.1; ar1 = 0.4\nn_paths = 8\npath_length = 1024\nn_shuffles = 3\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out_dir = dir.path().join(format!("out{threads}"));
        let out = hurstlab(&[
            "ensemble",
            cfg.to_str().unwrap(),
            "--seed",
            "11",
            "--threads",
            threads,
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(fs::read(out_dir.join("ensemble.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.pop().unwrap()).unwrap();
    assert!(text.contains("arfima,alpha=1.6;d=0.1;ar1=0.4,price,1,H,"));

    let mut tables = Vec::new();
    for threads in ["1", "3"] {
        let out = hurstlab(&[
            "table", "T6", "--paths", "2", "--shuffles", "1", "--seed", "5", "--threads", threads,
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        tables.push(out.stdout);
    }
    assert_eq!(tables[0], tables[1]);
    assert_eq!(String::from_utf8_lossy(&tables[0]).lines().count(), 1 + 5 * 7);
}

#[test]
fn seed_changes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "generator = stable\nalpha = 1.5\nn_paths = 3\npath_length = 500\nn_shuffles = 1\n").unwrap();
    let a = hurstlab(&["ensemble", cfg.to_str().unwrap(), "--seed", "1"]).stdout;
    let b = hurstlab(&["ensemble", cfg.to_str().unwrap(), "--seed", "2"]).stdout;
    let a2 = hurstlab(&["ensemble", cfg.to_str().unwrap(), "--seed", "1"]).stdout;
    assert_ne!(a, b);
    assert_eq!(a, a2);
}

#[test]
fn simulate_and_plotdata() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fbm.cfg");
    fs::write(&cfg, "generator = fbm\nH = 0.5\npath_length = 1000\nplot = structure_functions\n").unwrap();

    let out = hurstlab(&["simulate", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,return,price");
    assert_eq!(lines[1], "0,,0");
    assert_eq!(lines.len(), 1 + 1001);

    let out = hurstlab(&["plotdata", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("q,tau,log_tau,log_Kq\n"));
    assert_eq!(text.lines().count(), 1 + 57);

    fs::write(&cfg, "generator = fbm\nH = 0.5\npath_length = 4000\nn_shuffles = 2\nq_grid = 1,2,3\n").unwrap();
    let out = hurstlab(&["plotdata", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "q,qHq,qHq_shuffled");
    assert_eq!(lines.len(), 4);
    for line in &lines[1..] {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((v[1] - 0.5 * v[0]).abs() < 0.1 * v[0], "{line}");
    }
}
