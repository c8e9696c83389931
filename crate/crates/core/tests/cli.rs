//! The installed binary: exit codes, output files and the documented examples.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secrecy-rci"))
        .args(args)
        .env_remove("SECRECY_RCI_THREADS")
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("secrecy-rci-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn rows(stdout: &[u8]) -> Vec<csv::StringRecord> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(stdout)
        .records()
        .map(Result::unwrap)
        .collect()
}

#[test]
fn deteq_example() {
    let o = bin(&["deteq", "--beta", "1", "--rho-db", "10", "--xi", "auto"]);
    assert!(o.status.success());
    let r = &rows(&o.stdout)[0];
    let xi: f64 = r[2].parse().unwrap();
    assert!((xi - 0.027347).abs() < 1e-6);
    let per_user: f64 = r[8].parse().unwrap();
    let per_antenna: f64 = r[9].parse().unwrap();
    assert!(per_user > 0.0 && (per_user - per_antenna).abs() < 1e-8);
}

#[test]
fn overloaded_mc_example_is_zero() {
    let o = bin(&["mc", "--M", "8", "--K", "20", "--rho-db", "10", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let header: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let values: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    for col in ["mc_per_user", "mc_per_antenna"] {
        let j = header.iter().position(|c| *c == col).unwrap();
        assert_eq!(values[j], "0");
    }
}

#[test]
fn figure_to_file_has_one_row_per_point() {
    let dir = scratch("fig2");
    let path = dir.join("fig2.csv");
    let o = bin(&[
        "figure", "fig2", "--M", "16", "--trials", "20", "--seed", "7", "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let text = std::fs::read(&path).unwrap();
    assert!(text.starts_with(b"# secrecy-rci "));
    let t = rows(&text);
    // three loads times seven SNRs
    assert_eq!(t.len(), 21);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["deteq", "--beta", "0"]).status.code(), Some(2));
    assert_eq!(bin(&["sweep", "--param", "speed"]).status.code(), Some(2));
    assert_eq!(bin(&["figure", "fig9"]).status.code(), Some(2));
    assert_eq!(bin(&["nonsense"]).status.code(), Some(2));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    let o = bin(&["--out", "/nonexistent-dir/x.csv", "deteq"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent-dir/x.csv"));
    // xi inside the excluded spectrum interval is a domain error
    let o = bin(&["deteq", "--beta", "1", "--xi", "-2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("excluded interval"));
}

#[test]
fn numerical_failure_exits_3() {
    // At vanishing SNR the load fixed point has no root in (0, 1).
    let o = bin(&["optimize", "load", "--rho-db", "-300"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_and_thread_variable() {
    let dir = scratch("cfg");
    let cfg = dir.join("run.toml");
    std::fs::write(
        &cfg,
        "[system]\nm = 8\nk = 6\ntrials = 30\nseed = 4\nxi = 0.1\n\n[sweep]\nparameter = \"rho_db\"\nvalues = [0.0, 10.0]\nseries = [\"mc\", \"deteq\"]\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let a = bin(&["--config", c, "sweep"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(rows(&a.stdout).len(), 2);
    let b = Command::new(env!("CARGO_BIN_EXE_secrecy-rci"))
        .args(["--config", c, "sweep"])
        .env("SECRECY_RCI_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_secrecy-rci"))
        .args(["deteq"])
        .env("SECRECY_RCI_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    std::fs::write(&cfg, "[system]\nmystery = 1\n").unwrap();
    assert_eq!(bin(&["--config", c, "deteq"]).status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn dump_channel_writes_trial_zero() {
    let dir = scratch("dump");
    let p = dir.join("h.txt");
    let o = bin(&["mc", "--M", "3", "--K", "2", "--trials", "2", "--dump-channel", p.to_str().unwrap()]);
    assert!(o.status.success());
    let h = secrecy_rci::mc::dump::read_matrix(std::io::BufReader::new(std::fs::File::open(&p).unwrap())).unwrap();
    assert_eq!(h.shape(), (2, 3));
    std::fs::remove_dir_all(dir).unwrap();
}
