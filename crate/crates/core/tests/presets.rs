use ghzsim_core::scenario::{compare, parse_scenario, preset, render_csv, render_scenario, run_preset, PRESET_NAMES};

#[test]
fn presets_are_pure() {
    let a = run_preset("fig8").unwrap();
    let b = run_preset("fig8").unwrap();
    assert_eq!(render_csv(&a.series), render_csv(&b.series));
    assert_eq!(compare(&a.series, &b.series).unwrap().max_deviation(), 0.0);
}

#[test]
fn every_preset_run_round_trips() {
    for name in PRESET_NAMES {
        for (tag, s) in preset(name).unwrap().runs {
            let back = parse_scenario(&render_scenario(&s)).unwrap();
            assert_eq!(back, s, "{name}/{tag}");
        }
    }
}

#[test]
fn fig8_headlines_carry_references() {
    let r = run_preset("fig8").unwrap();
    assert_eq!(r.series.labels, vec!["P(GHZ-)", "P(GHZ+)"]);
    assert_eq!(*r.series.times.last().unwrap(), 600.0);
    for h in &r.headlines {
        assert!(h.within_tolerance(), "{h:?}");
    }
    let d = r.diagnostics[0];
    assert!(d.max_trace_drift <= 1e-6 && d.max_hermiticity <= 1e-8 && d.min_eigenvalue >= -1e-6);
}
