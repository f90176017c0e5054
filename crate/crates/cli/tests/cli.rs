use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_landau-pacs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Column `name` of a `#`-headed CSV.
fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn fig2_unexcited_column_is_zero() {
    let o = run(&["fig2", "--beta-max", "5", "--steps", "200"]);
    assert!(o.status.success());
    let q0 = column(&stdout(&o), "Q_n0");
    assert_eq!(q0.len(), 200);
    assert!(q0.iter().all(|&v| v == 0.0));
    let q3 = column(&stdout(&o), "Q_n3");
    assert!(q3.iter().all(|&v| (-1.0..=0.0).contains(&v)));
}

#[test]
fn fig3a_unexcited_column_is_quarter() {
    let o = run(&["fig3a"]);
    assert!(o.status.success());
    let s0 = column(&stdout(&o), "sigma_pp_n0");
    assert!(s0.iter().all(|&v| (v - 0.25).abs() < 1e-12));
}

#[test]
fn fig3b_has_five_angles() {
    let o = run(&["fig3b", "--steps", "11"]);
    let csv = stdout(&o);
    for t in 0..5 {
        assert_eq!(column(&csv, &format!("sigma_pp_n2_t{t}")).len(), 11);
    }
}

#[test]
fn fig1_starts_away_from_origin_and_stays_finite() {
    let csv = stdout(&run(&["fig1", "--steps", "50"]));
    let x = column(&csv, "beta_abs");
    assert!((x[0] - 0.05).abs() < 1e-15);
    for n in 0..=5 {
        assert!(column(&csv, &format!("K_n{n}")).iter().all(|v| v.is_finite() && *v > 0.0));
    }
}

#[test]
fn output_is_deterministic() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("landau-pacs-det-a-{}.csv", std::process::id()));
    let b = dir.join(format!("landau-pacs-det-b-{}.csv", std::process::id()));
    for p in [&a, &b] {
        let o = run(&["fig3b", "--steps", "120", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(stdout(&run(&["fig2", "--steps", "77"])), stdout(&run(&["fig2", "--steps", "77"])));
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn verify_passes_with_many_checks() {
    let o = run(&["verify", "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let passed = text.lines().filter(|l| l.contains(",pass,")).count();
    assert!(passed >= 25, "{passed}");
    assert!(text.contains(&format!("# passed {passed}/{passed}")));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["fig2", "--steps", "many"][..],
        &["fig2", "--steps", "1"],
        &["state", "--beta", "1+i+2"],
        &["fig2", "--n", "4..2"],
        &["verify", "--tol", "0"],
        &["nonsense"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn state_dump_and_wavefunction() {
    let dump = stdout(&run(&["state", "--beta", "0.5-0.5i", "--alpha", "0.2", "--n", "2"]));
    assert!(dump.contains("# beta=0.5-0.5i alpha=0.2+0i n=2"));
    assert!(dump.lines().any(|l| l.starts_with("# cutoff_a=")));
    let psi = stdout(&run(&["state", "--psi", "0.5,1", "--psi", "1.5,-2"]));
    assert_eq!(psi.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn cavity_report() {
    let o = run(&["cavity", "--g", "30", "--t-add", "0.05"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let value = |k: &str| -> f64 {
        text.lines().find_map(|l| l.strip_prefix(&format!("{k},"))).unwrap().parse().unwrap()
    };
    assert!(value("effective_vs_closed_form_max_abs") < 1e-10);
    assert!(value("ground_branch_fidelity") >= 0.99);
}
