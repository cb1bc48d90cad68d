use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use wsvd_ffi::*;

fn last_error() -> String {
    let p = wsvd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn rule_basis_and_approximant_round_trip() {
    unsafe {
        let mut rule = ptr::null_mut();
        assert_eq!(
            wsvd_rule_new(c"disk".as_ptr(), ptr::null(), 100, &mut rule),
            WsvdStatus::Ok
        );
        let mut n = 0;
        assert_eq!(wsvd_rule_len(rule, &mut n), WsvdStatus::Ok);
        let mut weights = vec![0.0; n];
        assert_eq!(wsvd_rule_weights(rule, weights.as_mut_ptr(), n), WsvdStatus::Ok);
        assert!((weights.iter().sum::<f64>() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        let mut xy = vec![0.0; 2 * n];
        assert_eq!(wsvd_rule_nodes(rule, xy.as_mut_ptr(), n), WsvdStatus::BufferTooSmall);
        assert!(last_error().contains("buffer"));
        assert_eq!(wsvd_rule_nodes(rule, xy.as_mut_ptr(), 2 * n), WsvdStatus::Ok);

        let mut basis = ptr::null_mut();
        assert_eq!(wsvd_basis_new(c"mat2".as_ptr(), 5.0, rule, &mut basis), WsvdStatus::Ok);
        wsvd_rule_free(rule);
        let mut active = 0;
        assert_eq!(wsvd_basis_active(basis, &mut active), WsvdStatus::Ok);
        let mut sigma2 = vec![0.0; n];
        assert_eq!(wsvd_basis_sigma2(basis, sigma2.as_mut_ptr(), n), WsvdStatus::Ok);
        // Matérn-2 has phi(0) = 3
        assert!((sigma2.iter().sum::<f64>() - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        let mut u = vec![0.0; active];
        assert_eq!(wsvd_basis_eval(basis, 0.4, 0.6, u.as_mut_ptr(), active), WsvdStatus::Ok);
        let mut p = 0.0;
        assert_eq!(wsvd_basis_power_function(basis, 0.4, 0.6, 0, &mut p), WsvdStatus::Ok);
        assert!((p - 3f64.sqrt()).abs() < 1e-14);

        let f = |x: f64, y: f64| (x - y).sin() + x * y;
        let samples: Vec<f64> = xy.chunks(2).map(|c| f(c[0], c[1])).collect();
        let mut full = ptr::null_mut();
        assert_eq!(
            wsvd_approx_project(basis, samples.as_ptr(), n, &mut full),
            WsvdStatus::Ok
        );
        wsvd_basis_free(basis);
        let mut value = 0.0;
        assert_eq!(wsvd_approx_eval(full, xy[0], xy[1], &mut value), WsvdStatus::Ok);
        assert!((value - samples[0]).abs() < 1e-8);

        let mut trunc = ptr::null_mut();
        assert_eq!(wsvd_approx_truncate_order(full, 10, &mut trunc), WsvdStatus::Ok);
        let mut terms = 0;
        assert_eq!(wsvd_approx_terms(trunc, &mut terms), WsvdStatus::Ok);
        assert_eq!(terms, 10);
        let probe = [0.5, 0.5, 0.3, 0.6];
        let mut values = [0.0; 2];
        assert_eq!(
            wsvd_approx_eval_many(trunc, probe.as_ptr(), 2, values.as_mut_ptr()),
            WsvdStatus::Ok
        );
        let mut single = 0.0;
        wsvd_approx_eval(trunc, 0.3, 0.6, &mut single);
        assert!((values[1] - single).abs() < 1e-13);

        let mut bad = ptr::null_mut();
        assert_eq!(
            wsvd_approx_truncate_tol(full, -1.0, &mut bad),
            WsvdStatus::InvalidArgument
        );
        assert!(bad.is_null());
        wsvd_approx_free(trunc);
        wsvd_approx_free(full);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut rule = ptr::null_mut();
        assert_eq!(
            wsvd_rule_new(c"hexagon".as_ptr(), ptr::null(), 10, &mut rule),
            WsvdStatus::InvalidArgument
        );
        assert!(last_error().contains("hexagon"));
        assert_eq!(
            wsvd_rule_new(c"square".as_ptr(), c"polar".as_ptr(), 10, &mut rule),
            WsvdStatus::UnsupportedDomain
        );
        assert_eq!(
            wsvd_rule_new(ptr::null(), ptr::null(), 10, &mut rule),
            WsvdStatus::NullPointer
        );
        assert_eq!(wsvd_rule_len(ptr::null(), ptr::null_mut()), WsvdStatus::NullPointer);

        let xy = [0.2, 0.2, 0.2, 0.2];
        let w = [0.5, 0.5];
        assert_eq!(
            wsvd_rule_from_arrays(c"square".as_ptr(), xy.as_ptr(), w.as_ptr(), 2, &mut rule),
            WsvdStatus::Ok
        );
        let mut basis = ptr::null_mut();
        assert_eq!(
            wsvd_basis_new(c"gauss".as_ptr(), 1.0, rule, &mut basis),
            WsvdStatus::DuplicatePoints
        );
        assert_eq!(
            wsvd_basis_new(c"gauss".as_ptr(), -1.0, rule, &mut basis),
            WsvdStatus::InvalidArgument
        );
        wsvd_rule_free(rule);

        let w_bad = [0.5, 0.4];
        assert_eq!(
            wsvd_rule_from_arrays(
                c"square".as_ptr(),
                [0.1, 0.1, 0.9, 0.9].as_ptr(),
                w_bad.as_ptr(),
                2,
                &mut rule
            ),
            WsvdStatus::DegenerateRule
        );

        let mut rule = ptr::null_mut();
        wsvd_rule_new(c"square".as_ptr(), ptr::null(), 9, &mut rule);
        wsvd_basis_new(c"imq".as_ptr(), 2.0, rule, &mut basis);
        let mut approx = ptr::null_mut();
        let samples = [1.0; 4];
        assert_eq!(
            wsvd_approx_project(basis, samples.as_ptr(), 4, &mut approx),
            WsvdStatus::LengthMismatch
        );
        assert!(!wsvd_last_error().is_null());
        let mut n = 0;
        assert_eq!(wsvd_basis_len(basis, &mut n), WsvdStatus::Ok);
        assert!(wsvd_last_error().is_null());
        wsvd_basis_free(basis);
        wsvd_rule_free(rule);
        wsvd_rule_free(ptr::null_mut());
    }
}

/// Compiles a C client against the generated header and the static library.
#[test]
fn c_client_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libwsvd_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let out_dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let binary = out_dir.join("wsvd_c_client");
    let status = Command::new("cc")
        .arg(manifest.join("tests/client.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&binary)
        .status()
        .expect("run C compiler");
    assert!(status.success());
    let run = Command::new(&binary).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(run.status.success(), "{stdout}{}", String::from_utf8_lossy(&run.stderr));
    assert!(stdout.contains("ok"), "{stdout}");
}
