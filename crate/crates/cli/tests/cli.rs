use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gfdm-spa"))
}

#[test]
fn prints_csv_to_stdout() {
    let out = bin()
        .args(["--ebn0", "4", "--tau", "1", "--min-errors", "20", "--no-timing"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "channel,ebn0_db,tau,mode,frames,bit_errors,ber,wall_seconds");
    assert!(lines[1].starts_with("awgn,4,1,combined,"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let out = dir.path().join("ber.csv");
    std::fs::write(
        &cfg,
        "# Rayleigh run\nchannel = rayleigh\nebn0 = 0:10:10\ntau = 7\nmin-errors = 30\n",
    )
    .unwrap();
    let status = bin()
        .arg("--config")
        .arg(&cfg)
        .args(["--ebn0", "10", "--emit-theory", "--emit-complexity", "--no-timing", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let ber = std::fs::read_to_string(&out).unwrap();
    assert_eq!(ber.lines().count(), 2);
    assert!(ber.lines().nth(1).unwrap().starts_with("rayleigh,10,7,"));
    assert!(dir.path().join("ber_theory.csv").exists());
    assert!(dir.path().join("ber_complexity.csv").exists());
}

#[test]
fn bad_arguments_exit_with_one() {
    for args in [
        vec!["-K", "3"],
        vec!["--channel", "rician"],
        vec!["--ebn0", "a:b:c"],
        vec!["--tau", "0"],
        vec!["--filter", "martin", "-M", "9"],
        vec!["--config", "/nonexistent.conf"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_exits_with_two() {
    let out = bin()
        .args(["--ebn0", "4", "--tau", "1", "--min-errors", "5", "--out", "/nonexistent/dir/ber.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
