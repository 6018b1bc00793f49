use std::ffi::{CStr, CString};
use std::ptr;

use irslink_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(irslink_last_error_message()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn plan(name: &str) -> *mut IrslinkPlan {
    let name = CString::new(name).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { irslink_plan_from_preset(name.as_ptr(), &mut p) },
        IrslinkStatus::Ok
    );
    p
}

fn render(results: *const IrslinkResults, format: IrslinkFormat) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { irslink_results_render(results, format, &mut s) },
        IrslinkStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { irslink_string_free(s) };
    text
}

#[test]
fn preset_names_match_core() {
    assert_eq!(irslink_preset_count(), irslink::presets::NAMES.len());
    for (i, want) in irslink::presets::NAMES.iter().enumerate() {
        let got = unsafe { CStr::from_ptr(irslink_preset_name(i)) };
        assert_eq!(got.to_str().unwrap(), *want);
    }
    assert!(irslink_preset_name(irslink_preset_count()).is_null());
}

#[test]
fn pure_functions_match_core() {
    let mut lambda = 0.0;
    assert_eq!(
        unsafe { irslink_wavelength(3.5e9, &mut lambda) },
        IrslinkStatus::Ok
    );
    assert_eq!(lambda, irslink::wavelength(3.5e9).unwrap());

    let mut p = 0.0;
    let st = unsafe { irslink_conventional_rx_power(3.5e9, 1.0, 2.0, 10.0, 1.0, false, &mut p) };
    assert_eq!(st, IrslinkStatus::Ok);
    let ch = irslink::ChannelParams::new(3.5e9, 1.0, 2.0, 1e-12, 0.0).unwrap();
    assert_eq!(p, irslink::conventional_rx_power(&ch, 10.0, 1.0).unwrap());

    let panel = IrslinkPanel {
        element_length: 0.01,
        element_width: 0.01,
        tx_side_elements: 10,
        rx_side_elements: 10,
        reflection_coefficient: 1.0,
        tx_gain: 1.0,
        rx_gain: 1.0,
        theta_t: 0.0,
        theta_r: 0.0,
    };
    let mut a = 0.0;
    let mut b = 0.0;
    unsafe {
        assert_eq!(
            irslink_irs_rx_power(&panel, 3.5e9, 1.0, 10.0, 10.0, &mut a),
            IrslinkStatus::Ok
        );
        assert_eq!(
            irslink_irs_rx_power(&panel, 3.5e9, 1.0, 10.0, 20.0, &mut b),
            IrslinkStatus::Ok
        );
    }
    // (l w m n)^2 / (16 pi^2 (r1 r2)^2) with l w m n = 0.01
    let closed = 1e-4 / (16.0 * std::f64::consts::PI.powi(2) * 1e4);
    assert!(((a - closed) / closed).abs() < 1e-12);
    assert!((10.0 * (a / b).log10() - 6.020599913279624).abs() < 1e-9);

    let mut lb = IrslinkLinkBudget::default();
    assert_eq!(
        unsafe { irslink_sinr(1e-9, 1e-12, 1e-12, &mut lb) },
        IrslinkStatus::Ok
    );
    assert!((lb.sinr_linear - 500.0).abs() < 1e-9);
}

#[test]
fn errors_map_to_codes() {
    let mut v = 0.0;
    assert_eq!(
        unsafe { irslink_wavelength(0.0, &mut v) },
        IrslinkStatus::InvalidInput
    );
    assert!(last_error().contains("frequency"), "{}", last_error());

    assert_eq!(
        unsafe { irslink_wavelength(1e9, ptr::null_mut()) },
        IrslinkStatus::NullPointer
    );

    let panel = IrslinkPanel {
        element_length: 0.01,
        element_width: 0.01,
        tx_side_elements: 1,
        rx_side_elements: 1,
        reflection_coefficient: 1.0,
        tx_gain: 1.0,
        rx_gain: 1.0,
        theta_t: 90.0,
        theta_r: 0.0,
    };
    let st = unsafe { irslink_irs_rx_power(&panel, 1e9, 1.0, 1.0, 1.0, &mut v) };
    assert_eq!(st, IrslinkStatus::InvalidInput);
    assert!(last_error().contains("theta_t"));
    let ok = IrslinkPanel {
        theta_t: 0.0,
        ..panel
    };
    let st = unsafe { irslink_irs_rx_power(&ok, 1e9, 1.0, 0.0, 1.0, &mut v) };
    assert_eq!(st, IrslinkStatus::DegenerateGeometry);

    let cfg = CString::new("[scenario]\nlabel = 3\n").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { irslink_plan_from_config(cfg.as_ptr(), &mut p) },
        IrslinkStatus::Config
    );
    assert!(p.is_null());
    assert!(last_error().contains("scenario.label"), "{}", last_error());

    let name = CString::new("fig9").unwrap();
    let st = unsafe { irslink_plan_from_preset(name.as_ptr(), &mut p) };
    assert_ne!(st, IrslinkStatus::Ok);
    let bad = [0xffu8, 0];
    let st = unsafe { irslink_plan_from_preset(bad.as_ptr().cast(), &mut p) };
    assert_eq!(st, IrslinkStatus::InvalidUtf8);

    let name = unsafe { CStr::from_ptr(irslink_status_name(IrslinkStatus::DegenerateGeometry)) };
    assert_eq!(name.to_str().unwrap(), "degenerate_geometry");
}

#[test]
fn plan_run_matches_cli_output() {
    let p = plan("fig1");
    let mut n = 0;
    assert_eq!(unsafe { irslink_plan_points(p, &mut n) }, IrslinkStatus::Ok);
    assert_eq!(n, 20);

    let mut r = ptr::null_mut();
    assert_eq!(
        unsafe { irslink_plan_run(p, false, &mut r) },
        IrslinkStatus::Ok
    );
    assert_eq!(unsafe { irslink_results_count(r) }, 1);
    let label = unsafe { CStr::from_ptr(irslink_results_label(r, 0)) };
    assert_eq!(label.to_str().unwrap(), "fig1");
    assert_eq!(unsafe { irslink_results_row_count(r, 0) }, 20);

    let mut rows = vec![IrslinkRow::default(); 20];
    for (i, row) in rows.iter_mut().enumerate() {
        assert_eq!(
            unsafe { irslink_results_row(r, 0, i, row) },
            IrslinkStatus::Ok
        );
    }
    assert!(rows.windows(2).all(|w| w[1].sinr_db < w[0].sinr_db));
    let mut row = IrslinkRow::default();
    assert_eq!(
        unsafe { irslink_results_row(r, 0, 20, &mut row) },
        IrslinkStatus::OutOfRange
    );
    assert_eq!(
        unsafe { irslink_results_row(r, 1, 0, &mut row) },
        IrslinkStatus::OutOfRange
    );

    let csv = render(r, IrslinkFormat::Csv);
    let results = irslink::presets::preset("fig1")
        .unwrap()
        .run(irslink::Execution::Serial)
        .unwrap();
    let mut want = Vec::new();
    irslink::emit_results(&results, irslink::OutputFormat::Csv, &mut want).unwrap();
    let want = String::from_utf8(want).unwrap();
    assert_eq!(csv, want);
    assert!(render(r, IrslinkFormat::Json).trim_start().starts_with('['));

    unsafe {
        irslink_results_free(r);
        irslink_plan_free(p);
    }
}

#[test]
fn seeded_runs_reproducible() {
    let run = |serial: bool, seed: u64| {
        let p = plan("fig2c");
        unsafe {
            assert_eq!(irslink_plan_set_rayleigh(p, true), IrslinkStatus::Ok);
            assert_eq!(irslink_plan_set_trials(p, 100), IrslinkStatus::Ok);
            assert_eq!(irslink_plan_set_seed(p, seed), IrslinkStatus::Ok);
            let mut r = ptr::null_mut();
            assert_eq!(irslink_plan_run(p, serial, &mut r), IrslinkStatus::Ok);
            let text = render(r, IrslinkFormat::Csv);
            irslink_results_free(r);
            irslink_plan_free(p);
            text
        }
    };
    assert_eq!(run(true, 3), run(false, 3));
    assert_ne!(run(false, 3), run(false, 4));

    let p = plan("fig2c");
    assert_eq!(
        unsafe { irslink_plan_set_trials(p, 0) },
        IrslinkStatus::InvalidInput
    );
    unsafe { irslink_plan_free(p) };
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        irslink_plan_free(ptr::null_mut());
        irslink_results_free(ptr::null_mut());
        irslink_string_free(ptr::null_mut());
        assert_eq!(irslink_results_count(ptr::null()), 0);
        assert!(irslink_results_label(ptr::null(), 0).is_null());
        let mut out = ptr::null_mut();
        assert_eq!(
            irslink_plan_run(ptr::null(), true, &mut out),
            IrslinkStatus::NullPointer
        );
    }
}
