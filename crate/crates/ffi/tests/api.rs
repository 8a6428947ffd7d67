use std::ffi::{c_char, CStr, CString};
use std::ptr;

use clusterkit_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    ck_string_free(p);
    s
}

unsafe fn parse(text: &str, rank: usize) -> *mut CkLaurent {
    let mut p = ptr::null_mut();
    assert_eq!(ck_laurent_parse(c(text).as_ptr(), rank, &mut p), CK_OK);
    p
}

unsafe fn render(p: *const CkLaurent) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(ck_laurent_to_string(p, &mut s), CK_OK);
    take_string(s)
}

unsafe fn last_error() -> String {
    let e = ck_last_error();
    assert!(!e.is_null());
    CStr::from_ptr(e).to_str().unwrap().to_owned()
}

#[test]
fn laurent_round_trip() {
    unsafe {
        let a = parse("x1 + 1", 2);
        let b = parse("x1 - 1", 2);
        let mut prod = ptr::null_mut();
        assert_eq!(ck_laurent_mul(a, b, &mut prod), CK_OK);
        let expected = parse("x1^2 - 1", 2);
        assert_eq!(render(prod), render(expected));

        let mut back = ptr::null_mut();
        assert_eq!(ck_laurent_divide_exact(prod, b, &mut back), CK_OK);
        assert_eq!(render(back), render(a));

        let mut n = 0;
        assert_eq!(ck_laurent_num_terms(prod, &mut n), CK_OK);
        assert_eq!(n, 2);
        let mut positive = true;
        assert_eq!(ck_laurent_is_positive(prod, &mut positive), CK_OK);
        assert!(!positive);

        let mut sum = ptr::null_mut();
        assert_eq!(ck_laurent_add(a, a, &mut sum), CK_OK);
        assert_eq!(render(sum), render(parse("2*x1 + 2", 2)));

        for p in [a, b, prod, expected, back, sum] {
            ck_laurent_free(p);
        }
    }
}

#[test]
fn laurent_errors() {
    unsafe {
        let a = parse("x1 + 1", 2);
        let b = parse("x2 + 1", 2);
        let mut q = ptr::null_mut();
        assert_eq!(ck_laurent_divide_exact(a, b, &mut q), CK_ERR_NOT_DIVISIBLE);
        assert!(q.is_null());
        assert!(last_error().contains("not divisible"));

        let wide = parse("x3", 3);
        assert_eq!(ck_laurent_mul(a, wide, &mut q), CK_ERR_INPUT);

        let mut bad = ptr::null_mut();
        assert_eq!(ck_laurent_parse(c("x1 +* 2").as_ptr(), 2, &mut bad), CK_ERR_INPUT);
        assert_eq!(ck_laurent_parse(ptr::null(), 2, &mut bad), CK_ERR_NULL);
        assert_eq!(ck_laurent_parse(c("x1").as_ptr(), 2, ptr::null_mut()), CK_ERR_NULL);
        let invalid = [0xffu8 as c_char, 0];
        assert_eq!(ck_laurent_parse(invalid.as_ptr(), 2, &mut bad), CK_ERR_UTF8);

        // a success clears the message
        let mut n = 0;
        assert_eq!(ck_laurent_num_terms(a, &mut n), CK_OK);
        assert!(ck_last_error().is_null());

        for p in [a, b, wide] {
            ck_laurent_free(p);
        }
        ck_laurent_free(ptr::null_mut());
        ck_string_free(ptr::null_mut());
    }
}

#[test]
fn a2_session() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ck_session_new(c(r#"{"preset":"A2"}"#).as_ptr(), &mut s), CK_OK);
        let mut rank = 0;
        assert_eq!(ck_session_rank(s, &mut rank), CK_OK);
        assert_eq!(rank, 2);

        assert_eq!(ck_session_mutate(s, 1), CK_OK);
        let mut x = ptr::null_mut();
        assert_eq!(ck_session_variable(s, 1, &mut x), CK_OK);
        // exchange relation x1 * x1' = 1 + x2
        let (num, den) = (parse("1 + x2", 2), parse("x1", 2));
        let mut expected = ptr::null_mut();
        assert_eq!(ck_laurent_divide_exact(num, den, &mut expected), CK_OK);
        assert_eq!(render(x), render(expected));

        let mut state = ptr::null_mut();
        assert_eq!(ck_session_state_json(s, &mut state), CK_OK);
        let state: serde_json::Value = serde_json::from_str(&take_string(state)).unwrap();
        assert_eq!(state["history"].as_array().unwrap().len(), 1);

        let (mut seeds, mut vars, mut truncated) = (0, 0, true);
        assert_eq!(ck_session_explore(s, 10_000, &mut seeds, &mut vars, &mut truncated), CK_OK);
        assert_eq!((seeds, vars, truncated), (5, 5, false));

        assert_eq!(ck_session_undo(s), CK_OK);
        assert_eq!(ck_session_undo(s), CK_ERR_STATE);
        assert_eq!(ck_session_mutate(s, 3), CK_ERR_RANGE);
        assert_eq!(ck_session_mutate(s, 0), CK_ERR_RANGE);
        assert_eq!(ck_session_flip(s, c("1-3").as_ptr()), CK_ERR_STATE);
        let mut none = ptr::null_mut();
        assert_eq!(ck_session_variable(s, 3, &mut none), CK_ERR_RANGE);

        for p in [x, num, den, expected] {
            ck_laurent_free(p);
        }
        ck_session_free(s);
    }
}

#[test]
fn hexagon_flip_and_explore() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ck_session_new(c(r#"{"preset":"hexagon"}"#).as_ptr(), &mut s), CK_OK);
        assert_eq!(ck_session_flip(s, c("1-3").as_ptr()), CK_OK);
        let mut state = ptr::null_mut();
        assert_eq!(ck_session_state_json(s, &mut state), CK_OK);
        let state: serde_json::Value = serde_json::from_str(&take_string(state)).unwrap();
        let arcs: Vec<&str> = state["arcs"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
        assert!(arcs.contains(&"2-4") && !arcs.contains(&"1-3"));
        assert_eq!(ck_session_flip(s, c("9-9").as_ptr()), CK_ERR_INPUT);

        let (mut seeds, mut vars, mut truncated) = (0, 0, true);
        assert_eq!(ck_session_explore(s, 10_000, &mut seeds, &mut vars, &mut truncated), CK_OK);
        assert_eq!((seeds, vars, truncated), (14, 9, false));
        ck_session_free(s);

        assert_eq!(ck_session_new(c(r#"{"preset":"kronecker"}"#).as_ptr(), &mut s), CK_OK);
        assert_eq!(ck_session_explore(s, 10, &mut seeds, &mut vars, &mut truncated), CK_OK);
        assert!(truncated);
        ck_session_free(s);
    }
}

#[test]
fn session_input_errors() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(ck_session_new(c("{").as_ptr(), &mut s), CK_ERR_INPUT);
        assert_eq!(ck_session_new(c(r#"{"preset":"E9"}"#).as_ptr(), &mut s), CK_ERR_INPUT);
        assert!(last_error().contains("E9"));
        assert!(s.is_null());
        assert_eq!(ck_session_mutate(ptr::null_mut(), 1), CK_ERR_NULL);
        let mut rank = 0;
        assert_eq!(ck_session_rank(ptr::null(), &mut rank), CK_ERR_NULL);
    }
}

#[test]
fn verify_reports() {
    unsafe {
        let (mut passed, mut report) = (false, ptr::null_mut());
        assert_eq!(ck_verify(c(r#"{"preset":"pentagon"}"#).as_ptr(), 1, &mut passed, &mut report), CK_OK);
        assert!(passed);
        let report: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
        assert!(names.contains(&"skein_identities") && names.contains(&"clusters_maximal"));

        let mut report = ptr::null_mut();
        assert_eq!(ck_verify(c(r#"{"preset":"markov"}"#).as_ptr(), 1, &mut passed, &mut report), CK_OK);
        let report: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(report["checks"][0]["status"], "skipped");
    }
}
