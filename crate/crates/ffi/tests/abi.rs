use std::ffi::{CStr, CString};
use std::ptr;

use stopgame_ffi::*;

fn scenario_json(name: &str) -> CString {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/scenarios/").to_string() + name;
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    stopgame_string_free(s);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(stopgame_last_error()).to_str().unwrap().to_owned() }
}

#[test]
fn solves_the_mismatch_game() {
    unsafe {
        let mut sc = ptr::null_mut();
        assert_eq!(
            stopgame_scenario_from_json(scenario_json("mismatch_T1.json").as_ptr(), &mut sc),
            StopgameStatus::Ok
        );
        let (mut horizon, mut outcomes) = (0, 0);
        assert_eq!(
            stopgame_scenario_shape(sc, &mut horizon, &mut outcomes),
            StopgameStatus::Ok
        );
        assert_eq!((horizon, outcomes), (1, 1));

        let mut sol = ptr::null_mut();
        assert_eq!(stopgame_solve(sc, &mut sol), StopgameStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(stopgame_solution_value(sol, &mut s), StopgameStatus::Ok);
        assert_eq!(take(s), "0/1");
        let mut x = f64::NAN;
        assert_eq!(stopgame_solution_value_f64(sol, &mut x), StopgameStatus::Ok);
        assert_eq!(x, 0.0);

        let mut rho = [9usize; 1];
        let mut tau = [9usize; 1];
        assert_eq!(stopgame_solution_rho_d(sol, rho.as_mut_ptr(), 1), StopgameStatus::Ok);
        assert_eq!(stopgame_solution_tau_d(sol, tau.as_mut_ptr(), 1), StopgameStatus::Ok);
        assert_eq!((rho, tau), ([1], [0]));
        assert_eq!(
            stopgame_solution_rho_d(sol, rho.as_mut_ptr(), 0),
            StopgameStatus::BufferTooSmall
        );

        assert_eq!(stopgame_solution_report_json(sol, &mut s), StopgameStatus::Ok);
        let report = stopgame::report::SolutionReport::from_json(&take(s)).unwrap();
        assert_eq!(report.scenario, "mismatch_T1");

        assert_eq!(stopgame_verify_json(sc, 0, 0, 1e-9, &mut s), StopgameStatus::Ok);
        let report = stopgame::report::SolutionReport::from_json(&take(s)).unwrap();
        let gv = report.game_values.unwrap();
        assert_eq!(gv.b_bar.unwrap().to_string(), "1/1");
        assert_eq!(gv.c_bar.unwrap().to_string(), "0/1");

        stopgame_solution_free(sol);
        stopgame_scenario_free(sc);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut sc = ptr::null_mut();
        assert_eq!(
            stopgame_scenario_from_json(ptr::null(), &mut sc),
            StopgameStatus::NullPointer
        );
        let bad = CString::new("{\"name\": ").unwrap();
        assert_eq!(
            stopgame_scenario_from_json(bad.as_ptr(), &mut sc),
            StopgameStatus::Parse
        );
        assert!(sc.is_null());
        assert!(last_error().contains("line"));

        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/scenarios/invalid/mass.json");
        let mass = CString::new(std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(
            stopgame_scenario_from_json(mass.as_ptr(), &mut sc),
            StopgameStatus::Validation
        );
        assert!(last_error().starts_with("PROBABILITY_MASS"));

        let invalid_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(
            stopgame_scenario_from_json(invalid_utf8.as_ptr().cast(), &mut sc),
            StopgameStatus::InvalidUtf8
        );

        assert_eq!(stopgame_scenario_random(2, 0, 1, &mut sc), StopgameStatus::Validation);
        assert_eq!(
            stopgame_solve(ptr::null(), &mut ptr::null_mut()),
            StopgameStatus::NullPointer
        );

        assert_eq!(
            stopgame_scenario_from_json(scenario_json("distance_T5.json").as_ptr(), &mut sc),
            StopgameStatus::Ok
        );
        assert_eq!(last_error(), "");
        let mut s = ptr::null_mut();
        assert_eq!(stopgame_verify_json(sc, 2, 0, 1e-9, &mut s), StopgameStatus::Ok);
        let report = stopgame::report::SolutionReport::from_json(&take(s)).unwrap();
        assert!(report.game_values.unwrap().a_bar.is_none());
        stopgame_scenario_free(sc);

        stopgame_scenario_free(ptr::null_mut());
        stopgame_solution_free(ptr::null_mut());
        stopgame_string_free(ptr::null_mut());
    }
}

#[test]
fn random_scenarios_round_trip() {
    unsafe {
        let mut sc = ptr::null_mut();
        assert_eq!(stopgame_scenario_random(3, 5, 42, &mut sc), StopgameStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(stopgame_scenario_to_json(sc, &mut s), StopgameStatus::Ok);
        let json = take(s);
        let expected = stopgame::random::random_scenario(&"T=3,outcomes=5,seed=42".parse().unwrap());
        assert_eq!(json, expected.to_json());

        let mut again = ptr::null_mut();
        let c = CString::new(json).unwrap();
        assert_eq!(stopgame_scenario_from_json(c.as_ptr(), &mut again), StopgameStatus::Ok);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(stopgame_solve(sc, &mut a), StopgameStatus::Ok);
        assert_eq!(stopgame_solve(again, &mut b), StopgameStatus::Ok);
        let (mut x, mut y) = (ptr::null_mut(), ptr::null_mut());
        stopgame_solution_value(a, &mut x);
        stopgame_solution_value(b, &mut y);
        assert_eq!(take(x), take(y));
        for h in [a, b] {
            stopgame_solution_free(h);
        }
        stopgame_scenario_free(sc);
        stopgame_scenario_free(again);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/stopgame.h")).unwrap();
    let source = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15, "{exports:?}");
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("STOPGAME_STATUS_VERIFICATION_FAILED = 5"));
}
