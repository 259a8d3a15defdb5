use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn numerov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numerov"))
        .args(args)
        .env_remove("NUMEROV_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const SMALL_WELL: &str = r#"
name = "small_well"

[grid]
x_min_nm = -10.0
x_max_nm = 10.0
n_points = 301

[potential]
kind = "infinite_well"

[mass]
kind = "constant"
m_rel = 0.067

[[barriers]]
center_nm = 0.0
alpha_ev_nm = 0.7

[solve]
n_modes = 4

[validate]
spectral_terms = 40
"#;

#[test]
fn list_presets_names_every_preset() {
    let o = numerov(&["list-presets"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for name in numerov_core::PRESET_NAMES {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn dumped_preset_reproduces_preset_energies() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.toml");
    assert_eq!(
        code(&numerov(&[
            "dump-preset",
            "infinite_well_delta",
            "--out",
            p(&cfg)
        ])),
        0
    );

    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let c = tmp.path().join("c");
    let small = ["--grid-points", "301", "--modes", "4"];
    for (dir, source) in [
        (&a, ["--config", p(&cfg)]),
        (&b, ["--preset", "infinite_well_delta"]),
        (&c, ["--preset", "infinite_well_delta"]),
    ] {
        let mut args = vec!["solve"];
        args.extend(source);
        args.extend(small);
        args.extend(["--out", p(dir)]);
        let o = numerov(&args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    for file in [
        "delta/energies.csv",
        "no_delta/energies.csv",
        "delta/wavefunction_2.csv",
    ] {
        let ea = fs::read(a.join(file)).unwrap();
        assert_eq!(
            ea,
            fs::read(b.join(file)).unwrap(),
            "{file}: config vs preset"
        );
        assert_eq!(ea, fs::read(c.join(file)).unwrap(), "{file}: repeated run");
    }
    let energies = fs::read_to_string(a.join("delta/energies.csv")).unwrap();
    let mut lines = energies.lines();
    assert_eq!(lines.next(), Some("mode_index_1based,energy_eV"));
    assert_eq!(lines.count(), 4);
    let wf = fs::read_to_string(a.join("delta/wavefunction_1.csv")).unwrap();
    assert_eq!(wf.lines().next(), Some("x_nm,psi,psi_sq,dpsi_dx"));
    assert_eq!(wf.lines().count(), 302);
    assert!(a.join("manifest.toml").is_file());
    assert!(a.join("comparison.csv").is_file());
}

#[test]
fn missing_grid_block_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    let text: String = SMALL_WELL
        .replace("[grid]", "")
        .replace("x_min_nm = -10.0\nx_max_nm = 10.0\nn_points = 301\n", "");
    fs::write(&cfg, text).unwrap();
    let o = numerov(&[
        "solve",
        "--config",
        p(&cfg),
        "--out",
        p(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("grid"), "{}", stderr(&o));
}

#[test]
fn config_and_preset_together_is_a_usage_error() {
    let o = numerov(&[
        "solve",
        "--config",
        "x.toml",
        "--preset",
        "infinite_well_delta",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unknown_preset_is_a_usage_error() {
    assert_eq!(code(&numerov(&["dump-preset", "no_such_thing"])), 2);
}

#[test]
fn too_many_modes_is_a_numerical_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let o = numerov(&[
        "solve",
        "--preset",
        "infinite_well_delta",
        "--grid-points",
        "21",
        "--modes",
        "25",
        "--out",
        p(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn coarse_validation_fails_with_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("small.toml");
    fs::write(&cfg, SMALL_WELL).unwrap();
    let out = tmp.path().join("o");
    let o = numerov(&["validate", "--config", p(&cfg), "--out", p(&out)]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("scenario = small_well"));
    assert!(report.lines().any(|l| l.starts_with("FAIL variant=delta")));
    assert!(report.lines().any(|l| l.starts_with("PASS variant=delta")));
    assert_eq!(report.lines().last(), Some("overall = FAIL"));
}

#[test]
fn validate_without_barriers_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("free.toml");
    let text = SMALL_WELL.replace("[[barriers]]\ncenter_nm = 0.0\nalpha_ev_nm = 0.7\n", "");
    fs::write(&cfg, text).unwrap();
    let o = numerov(&[
        "validate",
        "--config",
        p(&cfg),
        "--out",
        p(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("nothing to validate"), "{}", stderr(&o));
}

#[test]
fn empty_sweep_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("sweep.toml");
    fs::write(
        &cfg,
        format!("{SMALL_WELL}\n[sweep]\nparameter = \"alpha\"\nvalues = []\n"),
    )
    .unwrap();
    let o = numerov(&[
        "sweep",
        "--config",
        p(&cfg),
        "--out",
        p(&tmp.path().join("o")),
    ]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("sweep.values"), "{}", stderr(&o));
}

#[test]
fn sweep_writes_table_and_plot() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("sweep.toml");
    fs::write(
        &cfg,
        format!("{SMALL_WELL}\n[sweep]\nparameter = \"width_over_dx\"\nvalues = [8.0, 4.0, 2.0]\n"),
    )
    .unwrap();
    let out = tmp.path().join("o");
    let o = numerov(&["sweep", "--config", p(&cfg), "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(
        table.lines().next(),
        Some("width_over_dx,E_1_eV,E_2_eV,E_3_eV,E_4_eV")
    );
    assert_eq!(table.lines().count(), 4);
    assert!(out.join("sweep_summary.csv").is_file());
    assert_eq!(code(&numerov(&["plot", p(&out)])), 0);
    assert!(out.join("plots/sweep.svg").is_file());
}

#[test]
fn plot_renders_and_records_figures() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = numerov(&[
        "solve",
        "--preset",
        "harmonic_delta",
        "--grid-points",
        "241",
        "--modes",
        "3",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = numerov(&["plot", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for f in [
        "plots/energies.svg",
        "plots/delta/levels.svg",
        "plots/no_delta/mode_3.svg",
    ] {
        let svg = fs::read_to_string(out.join(f)).unwrap();
        assert!(svg.starts_with("<svg"), "{f}");
    }
    let manifest = fs::read_to_string(out.join("manifest.toml")).unwrap();
    assert!(manifest.contains("plots/delta/levels.svg"));
    assert!(manifest.contains("[[plot_scales]]"));
}

#[test]
fn plot_of_empty_directory_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = numerov(&["plot", p(tmp.path())]);
    assert_eq!(code(&o), 2);
}

#[test]
fn plot_of_corrupt_table_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = numerov(&[
        "solve",
        "--preset",
        "infinite_well_delta",
        "--grid-points",
        "101",
        "--modes",
        "2",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    fs::write(
        out.join("delta/energies.csv"),
        "mode_index_1based,energy_eV\n1,abc\n",
    )
    .unwrap();
    assert_eq!(code(&numerov(&["plot", p(&out)])), 2);
}

#[test]
fn out_dir_defaults_to_env_root() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_numerov"))
        .args([
            "solve",
            "--preset",
            "infinite_well_delta",
            "--grid-points",
            "101",
            "--modes",
            "2",
        ])
        .env("NUMEROV_OUT_DIR", tmp.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(tmp
        .path()
        .join("infinite_well_delta/delta/energies.csv")
        .is_file());
}
