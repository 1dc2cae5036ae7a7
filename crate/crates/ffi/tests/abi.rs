use std::ffi::{c_char, CStr, CString};
use std::ptr;

use preempt_inbox_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    pi_string_free(s);
    out
}

const FIG8: &str = "0 SETPRIO 5554 HIGH\n0 TASK fg 100 10\n4 SMS 5554 hello\n";

#[test]
fn simulate_and_inspect() {
    unsafe {
        let mut sim = ptr::null_mut();
        assert_eq!(pi_simulate(cs(FIG8).as_ptr(), &mut sim), PiStatus::Ok);
        assert!(pi_last_error_message().is_null());

        let mut report = ptr::null_mut();
        assert_eq!(pi_simulation_report(sim, &mut report), PiStatus::Ok);
        let report = take(report);
        let golden = include_str!("../../core/tests/golden/fig8_high_path.report");
        assert_eq!(report, golden);

        let mut store = ptr::null_mut();
        assert_eq!(pi_simulation_store(sim, &mut store), PiStatus::Ok);
        let mut n = 0usize;
        assert_eq!(pi_store_len(store, PiInbox::Default, &mut n), PiStatus::Ok);
        assert_eq!(n, 1);

        let mut view = ptr::null_mut();
        assert_eq!(pi_store_view(store, PiInbox::Priority, cs("555").as_ptr(), &mut view), PiStatus::Ok);
        assert_eq!(take(view), "VIEW Priority 1\n  1 5554 \"5554 :hello\"\n");
        assert_eq!(pi_store_view(store, PiInbox::Default, ptr::null(), &mut view), PiStatus::Ok);
        assert_eq!(take(view), "VIEW Default 1\n  1 5554 \"5554 :hello\"\n");

        let mut text = ptr::null_mut();
        assert_eq!(pi_store_read(store, PiInbox::Priority, 0, &mut text), PiStatus::Ok);
        assert_eq!(take(text), "5554 :hello");
        assert_eq!(pi_store_read(store, PiInbox::Priority, 1, &mut text), PiStatus::IndexOutOfRange);
        assert!(take(pi_last_error_message()).contains("out of range"));

        let mut reg = ptr::null_mut();
        assert_eq!(pi_simulation_registry(sim, &mut reg), PiStatus::Ok);
        let mut listing = ptr::null_mut();
        assert_eq!(pi_registry_list_high(reg, &mut listing), PiStatus::Ok);
        assert_eq!(take(listing), "5554\n");

        pi_registry_free(reg);
        pi_store_free(store);
        pi_simulation_free(sim);
    }
}

#[test]
fn registry_calls() {
    unsafe {
        let reg = pi_registry_new();
        for a in ["5556", "5554"] {
            assert_eq!(pi_registry_set(reg, cs(a).as_ptr(), PiLevel::High), PiStatus::Ok);
        }
        let mut level = PiLevel::Default;
        assert_eq!(pi_registry_get(reg, cs("5554").as_ptr(), &mut level), PiStatus::Ok);
        assert_eq!(level, PiLevel::High);
        assert_eq!(pi_registry_get(reg, cs("555").as_ptr(), &mut level), PiStatus::Ok);
        assert_eq!(level, PiLevel::Default);
        assert_eq!(pi_registry_set(reg, cs("5556").as_ptr(), PiLevel::Default), PiStatus::Ok);
        assert_eq!(pi_registry_set(reg, cs("").as_ptr(), PiLevel::High), PiStatus::InvalidAddress);

        let dir = tempfile::tempdir().unwrap();
        let path = cs(dir.path().join("reg.tsv").to_str().unwrap());
        assert_eq!(pi_registry_save(reg, path.as_ptr()), PiStatus::Ok);
        assert_eq!(std::fs::read_to_string(dir.path().join("reg.tsv")).unwrap(), "5554\tHIGH\n");

        let mut loaded = ptr::null_mut();
        assert_eq!(pi_registry_load(path.as_ptr(), &mut loaded), PiStatus::Ok);
        let mut listing = ptr::null_mut();
        assert_eq!(pi_registry_list_high(loaded, &mut listing), PiStatus::Ok);
        assert_eq!(take(listing), "5554\n");

        pi_registry_free(loaded);
        pi_registry_free(reg);
    }
}

#[test]
fn store_files() {
    unsafe {
        let mut sim = ptr::null_mut();
        assert_eq!(pi_simulate(cs(FIG8).as_ptr(), &mut sim), PiStatus::Ok);
        let mut store = ptr::null_mut();
        pi_simulation_store(sim, &mut store);

        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("inbox.jsonl");
        let path = cs(file.to_str().unwrap());
        assert_eq!(pi_store_save(store, path.as_ptr()), PiStatus::Ok);
        let mut loaded = ptr::null_mut();
        assert_eq!(pi_store_load(path.as_ptr(), &mut loaded), PiStatus::Ok);
        let mut n = 0;
        pi_store_len(loaded, PiInbox::Priority, &mut n);
        assert_eq!(n, 1);
        pi_store_free(loaded);

        // Priority record with no Default twin
        let text = std::fs::read_to_string(&file).unwrap();
        let priority_only = text.lines().nth(1).unwrap().to_owned() + "\n";
        std::fs::write(&file, priority_only).unwrap();
        let mut bad = ptr::null_mut();
        assert_eq!(pi_store_load(path.as_ptr(), &mut bad), PiStatus::InvariantViolation);
        assert!(bad.is_null());

        std::fs::write(&file, "not json\n").unwrap();
        assert_eq!(pi_store_load(path.as_ptr(), &mut bad), PiStatus::ParseFailure);
        let missing = cs(dir.path().join("missing").to_str().unwrap());
        assert_eq!(pi_store_load(missing.as_ptr(), &mut bad), PiStatus::IoFailure);

        pi_store_free(store);
        pi_simulation_free(sim);
        let empty = pi_store_new();
        let mut n = 9;
        pi_store_len(empty, PiInbox::Default, &mut n);
        assert_eq!(n, 0);
        pi_store_free(empty);
    }
}

#[test]
fn error_statuses() {
    unsafe {
        let mut sim = ptr::null_mut();
        assert_eq!(pi_simulate(ptr::null(), &mut sim), PiStatus::NullPointer);
        assert_eq!(pi_simulate(cs(FIG8).as_ptr(), ptr::null_mut()), PiStatus::NullPointer);
        assert_eq!(
            pi_simulate(cs("5 SMS 5554 hi\n3 TASK fg 100 10").as_ptr(), &mut sim),
            PiStatus::ParseFailure
        );
        assert!(take(pi_last_error_message()).contains("line 2"));
        let bad_utf8 = [0xffu8, 0];
        assert_eq!(pi_simulate(bad_utf8.as_ptr().cast(), &mut sim), PiStatus::InvalidUtf8);
        assert!(sim.is_null());

        let mut text = ptr::null_mut();
        assert_eq!(pi_store_read(ptr::null(), PiInbox::Default, 0, &mut text), PiStatus::NullPointer);

        // freeing NULL is a no-op
        pi_string_free(ptr::null_mut());
        pi_registry_free(ptr::null_mut());
        pi_store_free(ptr::null_mut());
        pi_simulation_free(ptr::null_mut());
    }
}
