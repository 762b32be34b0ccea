use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ffmwrc_cli::{NoiseSpec, OutputPaths, RunConfig};
use ffmwrc_core::channel::MwrcParams;
use ffmwrc_core::regions::{BinaryTwrc, CdfRegion, CutSetRegion, FdfSeparateRegion, Membership, RateRegion, DEFAULT_GRID_STEP};
use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

fn ffmwrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffmwrc")).args(args).output().expect("binary runs")
}

fn config(dir: &Path, name: &str, value: Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

fn binary(rho0: f64, rho: &[f64], rates: &[&str]) -> Value {
    serde_json::json!({
        "num_users": rho.len(), "field_order": 2,
        "uplink_noise": rho0, "downlink_noise": rho,
        "rates": rates, "n_base": 20, "trials": 50, "seed": 3
    })
}

fn read_csv(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn noiseless_capacity_boundary_is_the_unit_square() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "c.json", binary(0.0, &[0.0, 0.0], &["1", "1/2"]));
    let out = dir.path().join("cap.csv");
    let r = ffmwrc(&["region", "--config", s(&cfg), "--out", s(&out), "--region", "capacity", "--points", "50"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(header, "R1,R2");
    assert!(rows.len() >= 50);
    for row in rows {
        let m = row[0].max(row[1]);
        assert!((m - 1.0).abs() < 1e-9, "{row:?}");
    }
    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cap-membership.json")).unwrap()).unwrap();
    assert_eq!(sidecar["verdicts"]["capacity"], "boundary");
}

#[test]
fn all_regions_export_consistently() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "c.json", binary(0.1, &[0.05, 0.2], &["1/5", "1/5"]));
    let out = dir.path().join("twrc.csv");
    let r = ffmwrc(&["region", "--config", s(&cfg), "--out", s(&out), "--region", "all", "--points", "60"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));

    let twrc = BinaryTwrc::new(0.1, 0.05, 0.2).unwrap();
    let cap = CutSetRegion::new(&MwrcParams::binary(0.1, &[0.05, 0.2]).unwrap());
    let fdf = FdfSeparateRegion::new(&twrc, DEFAULT_GRID_STEP).unwrap();
    let cdf = CdfRegion::new(&twrc);
    let regions: [(&str, &dyn RateRegion); 3] = [("capacity", &cap), ("fdf-separate", &fdf), ("cdf", &cdf)];
    for (name, region) in regions {
        let (_, rows) = read_csv(&dir.path().join(format!("twrc-{name}.csv")));
        assert!(!rows.is_empty());
        for row in rows {
            // On the boundary of its own region, and inside capacity.
            let outward: Vec<f64> = row.iter().map(|x| x + 1e-6).collect();
            let inward: Vec<f64> = row.iter().map(|x| (x - 1e-6).max(0.0)).collect();
            assert!(region.membership(&inward).is_member(), "{name} {row:?}");
            assert!(!region.membership(&outward).is_member(), "{name} {row:?}");
            assert!(cap.membership(&inward).is_member(), "{name} {row:?}");
        }
    }
    let sidecar: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("twrc-membership.json")).unwrap()).unwrap();
    assert_eq!(sidecar["containment_violations"], 0);
    for name in ["capacity", "cdf", "fdf-separate"] {
        assert_eq!(sidecar["verdicts"][name], "inside");
    }
}

#[test]
fn comparison_regions_need_a_binary_two_way_channel() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "c.json", binary(0.1, &[0.1, 0.1, 0.1], &["1/5", "1/5", "1/5"]));
    let r = ffmwrc(&["region", "--config", s(&cfg), "--out", s(&dir.path().join("x.csv")), "--region", "cdf"]);
    assert_eq!(r.status.code(), Some(2));
    let r = ffmwrc(&["region", "--config", s(&cfg), "--out", s(&dir.path().join("x.csv"))]);
    assert!(r.status.success());
    let (header, _) = read_csv(&dir.path().join("x.csv"));
    assert_eq!(header, "R1,R2,R3");
}

#[test]
fn noiseless_simulation_has_no_errors_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "c.json", binary(0.0, &[0.0, 0.0], &["1/5", "1/5"]));
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert!(ffmwrc(&["simulate", "--config", s(&cfg), "--out", s(&a)]).status.success());
    assert!(ffmwrc(&["simulate", "--config", s(&cfg), "--out", s(&b), "--threads", "2"]).status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let v: Value = serde_json::from_str(&text).unwrap();
    for u in v["summary"]["users"].as_array().unwrap() {
        assert_eq!(u["failures"], 0);
        assert_eq!(u["error_rate"], 0.0);
    }
    assert_eq!(v["config"]["rates"][0], "1/5");
    assert_eq!(v["pipeline_blocks"], 1);

    let c = dir.path().join("c.json.out");
    assert!(ffmwrc(&["simulate", "--config", s(&cfg), "--out", s(&c), "--seed", "99"]).status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(v["summary"]["seed"], 99);
}

#[test]
fn infeasible_rates_exit_with_the_verdict() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "c.json", binary(0.5, &[0.0, 0.0], &["1/5", "1/5"]));
    let out = dir.path().join("sim.json");
    let r = ffmwrc(&["simulate", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(3));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["code_dims"]["verdict"]["feasible"], false);
    assert!(v.get("summary").is_none());

    let r = ffmwrc(&["simulate", "--config", s(&cfg), "--out", s(&out), "--force"]);
    assert!(r.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["summary"]["users"][0]["error_rate"].as_f64().unwrap() > 0.5);
}

#[test]
fn exhausted_budget_exits_with_code_4() {
    let dir = TempDir::new().unwrap();
    let mut v = binary(0.05, &[0.05, 0.05], &["3/10", "3/10"]);
    v["candidate_budget"] = 4.into();
    let cfg = config(dir.path(), "c.json", v);
    let r = ffmwrc(&["simulate", "--config", s(&cfg), "--out", s(&dir.path().join("o.json"))]);
    assert_eq!(r.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&r.stderr).contains("relay, pairwise block 1"));
}

#[test]
fn config_and_io_errors() {
    let dir = TempDir::new().unwrap();
    let mut v = binary(0.05, &[0.05, 0.05], &["1/5", "1/5"]);
    v["field_order"] = 6.into();
    let cfg = config(dir.path(), "bad.json", v);
    let r = ffmwrc(&["simulate", "--config", s(&cfg), "--out", s(&dir.path().join("o.json"))]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("order must be prime"));

    let r = ffmwrc(&["region", "--config", s(&dir.path().join("missing.json"))]);
    assert_eq!(r.status.code(), Some(1));
}

#[test]
fn codecheck_modes() {
    let r = ffmwrc(&["codecheck", "--k", "2", "--n", "4", "--field", "2", "--samples", "100000", "--seed", "5"]);
    assert!(r.status.success());
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["pass"], true);

    let r = ffmwrc(&["codecheck", "--k", "1", "--n", "1", "--mode", "exhaustive"]);
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["pass"], true);
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["statistic"], 0.0);
    }

    let r = ffmwrc(&["codecheck", "--k", "2", "--n", "4", "--mode", "adversarial", "--samples", "10000"]);
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["pass"], false);
    let zero = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "first_symbol_zero_message").unwrap();
    assert_eq!(zero["pass"], false);

    let r = ffmwrc(&["codecheck", "--k", "2", "--n", "4", "--samples", "10"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn compare_reports_every_strategy() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "c.json", binary(0.1, &[0.0, 0.0], &["7/20", "7/20"]));
    let out = dir.path().join("cmp.json");
    let r = ffmwrc(&["compare", "--config", s(&cfg), "--out", s(&out), "--points", "40"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let by_name = |n: &str| v["strategies"].as_array().unwrap().iter().find(|s| s["region"] == n).unwrap().clone();
    assert_eq!(by_name("capacity")["verdict"], "inside");
    assert_eq!(by_name("cdf")["verdict"], "outside");
    let cap = by_name("capacity")["max_common_rate"].as_f64().unwrap();
    let cdf = by_name("cdf")["max_common_rate"].as_f64().unwrap();
    assert!((cap - 0.531004).abs() < 1e-6);
    assert!((cdf - 0.531004 / 2.0).abs() < 1e-6);
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = RunConfig::load(&path).unwrap();
        cfg.validate().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        seen += 1;
    }
    assert!(seen >= 3);
}

fn noise() -> impl Strategy<Value = NoiseSpec> {
    prop_oneof![
        (0.0..1.0f64).prop_map(NoiseSpec::Crossover),
        proptest::collection::vec(0.0..1.0f64, 2..5).prop_map(NoiseSpec::Pmf),
    ]
}

prop_compose! {
    fn any_config()(
        users in 2usize..5,
        field_order in prop_oneof![Just(2u32), Just(3), Just(7)],
        up in noise(),
        down in proptest::collection::vec(noise(), 2..5),
        nums in proptest::collection::vec((1u32..20, 1u32..20), 2..5),
        n_base in 1usize..200,
        trials in 1u64..10_000,
        seed in any::<u64>(),
        margin in 0.0..1.0f64,
        budget in 1u64..u64::MAX,
        region in proptest::option::of("[a-z]{1,8}\\.csv"),
    ) -> RunConfig {
        RunConfig {
            num_users: users,
            field_order,
            uplink_noise: up,
            downlink_noise: down,
            rates: nums.iter().map(|(a, b)| format!("{a}/{b}")).collect(),
            n_base,
            trials,
            seed,
            safety_margin: margin,
            candidate_budget: budget,
            output: OutputPaths { region: region.map(PathBuf::from), ..OutputPaths::default() },
        }
    }
}

proptest! {
    #[test]
    fn config_round_trips(cfg in any_config()) {
        prop_assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }
}

#[test]
fn membership_sidecar_matches_library_for_strategy_gap_point() {
    let dir = TempDir::new().unwrap();
    let cfg = config(dir.path(), "c.json", binary(0.1, &[0.0, 0.0], &["7/20", "7/20"]));
    let out = dir.path().join("gap.csv");
    assert!(ffmwrc(&["region", "--config", s(&cfg), "--out", s(&out), "--region", "all", "--points", "20"]).status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("gap-membership.json")).unwrap()).unwrap();
    let twrc = BinaryTwrc::new(0.1, 0.0, 0.0).unwrap();
    assert_eq!(CdfRegion::new(&twrc).membership(&[0.35, 0.35]), Membership::Outside);
    assert_eq!(v["verdicts"]["cdf"], "outside");
    assert_eq!(v["verdicts"]["capacity"], "inside");
}
