use proptest::prelude::*;
use tfcore::fixtures;
use tfcore::instfreq::{if_moment, if_phase_gradient, if_phase_gradient_with, Derivative, DEFAULT_THRESHOLD};
use tfcore::transforms::wigner::modulate_translate;
use tfcore::{gen_bandlimited, gen_chirp, Boundary, ChirpParams, Grid};

fn grid() -> Grid {
    Grid::centered(0.125, 128).unwrap()
}

#[test]
fn chirp_adds_its_rate_to_the_phase_gradient() {
    for seed in 0..8 {
        let g = fixtures::grid_512();
        let h = gen_bandlimited(g, [-2.0, 2.0], seed).unwrap();
        let rate = 0.25;
        let chirp = gen_chirp(g, ChirpParams::new(rate).unwrap(), None).unwrap();
        let f = chirp.multiply(&h).unwrap();
        let a = if_phase_gradient(&f).unwrap();
        let b = if_phase_gradient(&h).unwrap();
        let mut worst = 0.0f64;
        let mut n = 0;
        for k in 0..a.len() {
            if a.valid[k] && b.valid[k] {
                worst = worst.max((a.values[k] - b.values[k] - rate * a.time_axis[k]).abs());
                n += 1;
            }
        }
        assert!(n > 100, "seed {seed}: only {n} samples compared");
        assert!(worst <= 1e-9, "seed {seed}: deviation {worst}");
    }
}

#[test]
fn zero_signal_has_no_valid_samples() {
    let f = tfcore::Signal::new(grid(), vec![tfcore::Complex64::new(0.0, 0.0); 128]).unwrap();
    assert_eq!(if_phase_gradient(&f).unwrap().n_valid(), 0);
    assert_eq!(if_moment(&f, DEFAULT_THRESHOLD, Boundary::Zero).unwrap().n_valid(), 0);
}

#[test]
fn thresholds_outside_unit_interval_are_rejected() {
    let f = gen_bandlimited(grid(), [-1.0, 1.0], 0).unwrap();
    for thr in [0.0, 1.0, -0.5, f64::NAN] {
        assert!(if_phase_gradient_with(&f, thr, Derivative::Spectral).is_err());
        assert!(if_moment(&f, thr, Boundary::Zero).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn raising_the_threshold_never_adds_valid_samples(
        seed in any::<u64>(),
        lo in 1e-8f64..0.5,
        frac in 0.0f64..1.0,
        central in any::<bool>(),
    ) {
        let hi = lo + frac * (0.99 - lo);
        let f = gen_bandlimited(grid(), [-1.5, 1.5], seed).unwrap();
        let d = if central { Derivative::CentralDifference } else { Derivative::Spectral };
        let a = if_phase_gradient_with(&f, lo, d).unwrap();
        let b = if_phase_gradient_with(&f, hi, d).unwrap();
        prop_assert!(b.valid.iter().zip(&a.valid).all(|(&vb, &va)| !vb || va));
        let a = if_moment(&f, lo, Boundary::Zero).unwrap();
        let b = if_moment(&f, hi, Boundary::Zero).unwrap();
        prop_assert!(b.valid.iter().zip(&a.valid).all(|(&vb, &va)| !vb || va));
    }

    #[test]
    fn whole_bin_modulation_shifts_the_moment_if(seed in any::<u64>(), bins in -12i64..12) {
        let g = grid();
        let f = gen_bandlimited(g, [-1.0, 1.0], seed).unwrap();
        let moved = modulate_translate(&f, 0, bins).unwrap();
        let a = if_moment(&f, DEFAULT_THRESHOLD, Boundary::Periodized).unwrap();
        let b = if_moment(&moved, DEFAULT_THRESHOLD, Boundary::Periodized).unwrap();
        let delta = bins as f64 / g.duration();
        prop_assert_eq!(&a.valid, &b.valid);
        for k in 0..a.len() {
            if a.valid[k] {
                let dev = (b.values[k] - a.values[k] - delta).abs();
                prop_assert!(dev <= 1e-9, "row {}: deviation {}", k, dev);
            }
        }
    }
}
