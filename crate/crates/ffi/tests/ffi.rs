use std::ffi::{c_char, CStr, CString};
use std::ptr;

use quorumkit_ffi::*;

const FIG3: &str = r#"{
  "nodes": [
    {"name": "a", "read_cap": 200, "write_cap": 100, "latency_s": 4},
    {"name": "b", "read_cap": 200, "write_cap": 100, "latency_s": 4},
    {"name": "c", "read_cap": 100, "write_cap": 50, "latency_s": 1},
    {"name": "d", "read_cap": 100, "write_cap": 50, "latency_s": 1}
  ],
  "reads": "a*b + c*d",
  "read_fraction": 1
}"#;

fn c(text: &str) -> CString {
    CString::new(text).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qk_last_error()) }.to_str().unwrap().to_string()
}

unsafe fn take(text: *mut c_char) -> String {
    let s = CStr::from_ptr(text).to_str().unwrap().to_string();
    qk_string_free(text);
    s
}

fn system(config: &str) -> *mut QkSystem {
    let mut sys = ptr::null_mut();
    assert_eq!(
        unsafe { qk_system_new(c(config).as_ptr(), &mut sys) },
        QkStatus::Ok,
        "{}",
        last_error()
    );
    sys
}

#[test]
fn system_queries() {
    let sys = system(FIG3);
    unsafe {
        let mut ft = 99;
        assert_eq!(qk_system_fault_tolerance(sys, &mut ft), QkStatus::Ok);
        assert_eq!(ft, 1);
        assert_eq!(qk_system_read_fault_tolerance(sys, &mut ft), QkStatus::Ok);
        assert_eq!(ft, 1);
        assert_eq!(qk_system_write_fault_tolerance(sys, &mut ft), QkStatus::Ok);
        assert_eq!(ft, 1);
        let mut text = ptr::null_mut();
        assert_eq!(qk_system_reads(sys, &mut text), QkStatus::Ok);
        assert_eq!(take(text), "a*b + c*d");
        assert_eq!(qk_system_writes(sys, &mut text), QkStatus::Ok);
        assert_eq!(take(text), "(a + b)*(c + d)");
        qk_system_free(sys);
    }
}

#[test]
fn strategies_over_explicit_and_configured_workloads() {
    let sys = system(FIG3);
    unsafe {
        for (fr, expected) in [(1.0, 300.0), (0.5, 200.0), (0.0, 100.0)] {
            let point = QkWorkloadPoint {
                read_fraction: fr,
                weight: 1.0,
            };
            let mut strategy = ptr::null_mut();
            assert_eq!(
                qk_system_strategy(sys, &point, 1, ptr::null(), &mut strategy),
                QkStatus::Ok
            );
            let mut m = QkMetrics::default();
            assert_eq!(qk_strategy_metrics(strategy, &mut m), QkStatus::Ok);
            assert!((m.capacity - expected).abs() < 1e-6, "{fr}: {m:?}");
            qk_strategy_free(strategy);
        }

        let mut options = qk_strategy_options_default();
        options.objective = QkObjective::Latency as u32;
        options.capacity_limit = 150.0;
        options.network_limit = 2.0;
        let mut strategy = ptr::null_mut();
        assert_eq!(
            qk_system_strategy(sys, ptr::null(), 0, &options, &mut strategy),
            QkStatus::Ok
        );
        let mut m = QkMetrics::default();
        qk_strategy_metrics(strategy, &mut m);
        assert!((m.latency - 2.0).abs() < 1e-9);
        let mut json = ptr::null_mut();
        assert_eq!(qk_strategy_to_json(strategy, &mut json), QkStatus::Ok);
        let doc: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(doc["latency"], 2.0);
        qk_strategy_free(strategy);

        options.f = 1;
        options.objective = QkObjective::Load as u32;
        options.capacity_limit = 0.0;
        options.network_limit = 0.0;
        assert_eq!(
            qk_system_strategy(sys, ptr::null(), 0, &options, &mut strategy),
            QkStatus::Ok
        );
        qk_strategy_metrics(strategy, &mut m);
        assert!((m.capacity - 100.0).abs() < 1e-6);
        qk_strategy_free(strategy);
        qk_system_free(sys);
    }
}

#[test]
fn error_statuses() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(qk_system_new(ptr::null(), &mut sys), QkStatus::NullPointer);
        assert_eq!(qk_system_new(c("{").as_ptr(), &mut sys), QkStatus::Config);
        assert!(!last_error().is_empty());
        let bad = r#"{"nodes": [{"name": "a"}], "reads": "a*(b", "read_fraction": 1}"#;
        assert_eq!(qk_system_new(c(bad).as_ptr(), &mut sys), QkStatus::Parse);
        let unknown = r#"{"nodes": [{"name": "a"}], "reads": "a*b", "read_fraction": 1}"#;
        assert_eq!(qk_system_new(c(unknown).as_ptr(), &mut sys), QkStatus::UnknownNode);
        let disjoint =
            r#"{"nodes": [{"name": "a"}, {"name": "b"}], "reads": "a + b", "writes": "a + b", "read_fraction": 1}"#;
        assert_eq!(
            qk_system_new(c(disjoint).as_ptr(), &mut sys),
            QkStatus::IntersectionViolation
        );
        assert!(sys.is_null());

        let sys = system(FIG3);
        let mut options = qk_strategy_options_default();
        options.capacity_limit = 1000.0;
        let mut strategy = ptr::null_mut();
        assert_eq!(
            qk_system_strategy(sys, ptr::null(), 0, &options, &mut strategy),
            QkStatus::Infeasible
        );
        options.capacity_limit = 0.0;
        options.f = 2;
        assert_eq!(
            qk_system_strategy(sys, ptr::null(), 0, &options, &mut strategy),
            QkStatus::NoResilientQuorum
        );
        options.f = 0;
        options.objective = 7;
        assert_eq!(
            qk_system_strategy(sys, ptr::null(), 0, &options, &mut strategy),
            QkStatus::InvalidArgument
        );
        let point = QkWorkloadPoint {
            read_fraction: 0.5,
            weight: 0.5,
        };
        assert_eq!(
            qk_system_strategy(sys, &point, 1, ptr::null(), &mut strategy),
            QkStatus::Config
        );
        assert_eq!(
            qk_system_strategy(sys, ptr::null(), 0, ptr::null(), ptr::null_mut()),
            QkStatus::NullPointer
        );
        assert!(strategy.is_null());
        let mut ft = 0;
        assert_eq!(qk_system_fault_tolerance(ptr::null(), &mut ft), QkStatus::NullPointer);
        qk_system_free(sys);
        qk_system_free(ptr::null_mut());
        qk_strategy_free(ptr::null_mut());
        qk_string_free(ptr::null_mut());
    }
}

#[test]
fn search_and_dual() {
    let config = r#"{"nodes": [{"name": "a"}, {"name": "b"}, {"name": "c"}], "read_fraction": 1}"#;
    unsafe {
        let mut options = qk_search_options_default();
        options.min_fault_tolerance = 1;
        let mut json = ptr::null_mut();
        assert_eq!(
            qk_search(c(config).as_ptr(), &options, &mut json),
            QkStatus::Ok,
            "{}",
            last_error()
        );
        let doc: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(doc["reads"], "choose(2, [a, b, c])");
        assert_eq!(doc["candidates_examined"], 9);

        options.min_fault_tolerance = 3;
        assert_eq!(
            qk_search(c(config).as_ptr(), &options, &mut json),
            QkStatus::NoFeasibleCandidate
        );

        let mut dual = ptr::null_mut();
        assert_eq!(qk_expr_dual(c("a + b*c").as_ptr(), &mut dual), QkStatus::Ok);
        assert_eq!(take(dual), "a*(b + c)");
        assert_eq!(qk_expr_dual(c("a +").as_ptr(), &mut dual), QkStatus::Parse);
        assert!(last_error().contains("offset 3"), "{}", last_error());
        let invalid = [0xffu8, 0];
        assert_eq!(qk_expr_dual(invalid.as_ptr().cast(), &mut dual), QkStatus::InvalidUtf8);
    }
}
