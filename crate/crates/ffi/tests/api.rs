use std::ffi::{CStr, CString};
use std::ptr;

use qfactor_ffi::*;

const R3: [usize; 9] = [0, 2, 1, 2, 1, 0, 1, 0, 2];

unsafe fn quandle(n: usize, table: &[usize]) -> *mut QfQuandle {
    let mut q = ptr::null_mut();
    assert_eq!(qf_quandle_from_table(n, table.as_ptr(), &mut q), QfStatus::Ok);
    q
}

unsafe fn hom(source: *const QfQuandle, target: *const QfQuandle, map: &[usize]) -> *mut QfHom {
    let mut h = ptr::null_mut();
    assert_eq!(
        qf_hom_new(source, target, map.as_ptr(), map.len(), &mut h),
        QfStatus::Ok
    );
    h
}

unsafe fn last_error() -> String {
    CStr::from_ptr(qf_last_error()).to_string_lossy().into_owned()
}

#[test]
fn quandle_queries() {
    unsafe {
        let q = quandle(3, &R3);
        assert_eq!(qf_quandle_size(q), 3);
        assert_eq!(qf_quandle_op(q, 0, 1), 2);
        assert_eq!(qf_quandle_op(q, 0, 3), usize::MAX);
        assert!(qf_quandle_is_connected(q));
        let mut order = 0;
        assert_eq!(qf_quandle_inn_order(q, &mut order), QfStatus::Ok);
        assert_eq!(order, 6);

        let mut text = ptr::null_mut();
        assert_eq!(qf_quandle_to_json(q, &mut text), QfStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(qf_quandle_from_json(text, &mut back), QfStatus::Ok);
        assert_eq!(qf_quandle_op(back, 1, 0), 2);
        qf_string_free(text);
        qf_quandle_free(back);
        qf_quandle_free(q);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut q = ptr::null_mut();
        assert_eq!(qf_quandle_from_table(2, [0, 0, 0, 1].as_ptr(), &mut q), QfStatus::Axiom);
        assert!(q.is_null());
        let msg = last_error();
        assert!(msg.contains("axiom ii") && msg.contains("column 0"), "{msg}");

        let bad = CString::new("{\"size\": 2").unwrap();
        assert_eq!(qf_quandle_from_json(bad.as_ptr(), &mut q), QfStatus::Parse);
        assert_eq!(
            qf_quandle_from_table(3, R3.as_ptr(), ptr::null_mut()),
            QfStatus::NullPointer
        );

        let r3 = quandle(3, &R3);
        let mut h = ptr::null_mut();
        assert_eq!(
            qf_hom_new(r3, r3, [0, 0, 1].as_ptr(), 3, &mut h),
            QfStatus::Precondition
        );
        qf_quandle_free(r3);
    }
}

#[test]
fn factoring() {
    unsafe {
        let r3 = quandle(3, &R3);
        let point = quandle(1, &[0]);
        let identity = hom(r3, r3, &[0, 1, 2]);
        let swap = hom(r3, r3, &[0, 2, 1]);
        let collapse = hom(r3, point, &[0, 0, 0]);

        let mut phi = [usize::MAX; 3];
        assert_eq!(qf_factor(swap, identity, phi.as_mut_ptr(), 3), QfStatus::Ok);
        assert_eq!(phi, [0, 2, 1]);
        assert_eq!(qf_factor(collapse, swap, phi.as_mut_ptr(), 3), QfStatus::Ok);
        assert_eq!(phi, [0, 0, 0]);

        assert_eq!(
            qf_factor(identity, collapse, phi.as_mut_ptr(), 3),
            QfStatus::NoFactorization
        );
        assert!(last_error().contains("KernelNotContained"), "{}", last_error());
        assert_eq!(qf_factor(swap, identity, phi.as_mut_ptr(), 2), QfStatus::Precondition);

        let t2 = quandle(2, &[0, 0, 1, 1]);
        let id2 = hom(t2, t2, &[0, 1]);
        assert_eq!(qf_factor(id2, id2, phi.as_mut_ptr(), 3), QfStatus::Precondition);

        for h in [identity, swap, collapse, id2] {
            qf_hom_free(h);
        }
        for q in [r3, point, t2] {
            qf_quandle_free(q);
        }
    }
}

#[test]
fn counts() {
    let mut out = 0;
    let expected = [1, 0, 1, 1, 3, 2, 5, 3];
    for (n, want) in (1..=8).zip(expected) {
        assert_eq!(unsafe { qf_connected_count(n, &mut out) }, QfStatus::Ok);
        assert_eq!(out, want, "n = {n}");
    }
}
