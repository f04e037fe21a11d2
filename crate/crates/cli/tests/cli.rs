use std::process::Command;

fn tcofdm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tcofdm"))
}

#[test]
fn lists_scenarios() {
    let out = tcofdm().arg("--list-scenarios").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().any(|l| l == "awgn+rician_pa3+pn(2)"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "scenario=awgn\nebn0=0:1:1\nseed=3\nmax-bits=5000\niterations=2\n").unwrap();
    let csv = dir.path().join("ber.csv");
    let out = tcofdm()
        .arg("--config")
        .arg(&conf)
        .args(["--ebn0", "-1,2", "--iterations", "3"])
        .arg("--out")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scenario,ebn0_db,iterations,block_size,bits,errors,ber");
    // two points, three iteration counts
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("awgn,-1,1,512,"));
    assert!(lines[6].starts_with("awgn,2,3,512,"));
    assert!(dir.path().join("ber_awgn.gp").exists());
}

#[test]
fn uncoded_flag() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("u.csv");
    let out = tcofdm()
        .args(["--uncoded", "--ebn0", "4", "--max-bits", "20000", "--min-errors", "1000000"])
        .arg("--out")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("awgn,4,0,512,"));
}

#[test]
fn bad_input_is_reported() {
    for args in [
        &["--scenario", "awgn+nothing"][..],
        &["--ebn0", "2:1:1"][..],
        &["--fft", "1000"][..],
    ] {
        let out = tcofdm().args(args).arg("--out").arg("/nonexistent/x.csv").output().unwrap();
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let dir = tempfile::tempdir().unwrap();
    let out = tcofdm()
        .args(["--ebn0", "10", "--max-bits", "2000"])
        .arg("--out")
        .arg(dir.path().join("missing").join("x.csv"))
        .output()
        .unwrap();
    assert!(!out.status.success());
}
