//! Kept in its own binary: it mutates the process environment.

mod common;

use common::{run_cli, scenario_path};
use stopgame::oracle::CAPS_ENV;
use stopgame::GameValueReport;

fn values(extra: &[&str]) -> GameValueReport {
    let path = scenario_path("distance_T5.json");
    let mut args = vec!["values", path.to_str().unwrap(), "--output", "json"];
    args.extend_from_slice(extra);
    let (code, out, err) = run_cli(&args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn environment_caps_apply_and_flags_override_them() {
    std::env::set_var(CAPS_ENV, "stopping=3");
    assert!(values(&[]).a_bar.is_none());
    assert!(values(&["--caps", "stopping=100"]).a_bar.is_some());

    std::env::set_var(CAPS_ENV, "stopping=nope");
    let path = scenario_path("distance_T5.json");
    assert_eq!(run_cli(&["values", path.to_str().unwrap()]).0, 2);

    std::env::remove_var(CAPS_ENV);
    assert!(values(&[]).a_bar.is_some());
}
