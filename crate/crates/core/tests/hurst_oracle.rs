mod common;

use common::{fbm_path, fgn_cholesky, median, random_walk};
use fractal_parity::fractal::{estimate_hurst, minimal_cover_variation, HurstConfig};

#[test]
fn gaussian_random_walk_median_near_one_half() {
    let cfg = HurstConfig::default();
    let hs: Vec<f64> = (0..100)
        .map(|seed| estimate_hurst(&random_walk(1024, seed), &cfg).unwrap().h)
        .collect();
    let m = median(hs);
    assert!((0.45..=0.55).contains(&m), "median {m}");
}

#[test]
fn persistent_fbm_median_in_band() {
    let l = fgn_cholesky(1023, 0.7);
    let cfg = HurstConfig::default();
    let hs: Vec<f64> = (0..100)
        .map(|seed| estimate_hurst(&fbm_path(&l, seed), &cfg).unwrap().h)
        .collect();
    let m = median(hs);
    assert!((0.60..=0.80).contains(&m), "median {m}");
}

#[test]
fn variation_scales_with_self_affinity() {
    // Window amplitudes of an H-self-affine path scale like delta^H while the
    // window count scales like 1/delta, so V(2δ)/V(δ) ≈ 2^(H-1).
    let h = 0.7;
    let l = fgn_cholesky(1023, h);
    let ratios: Vec<f64> = (0..50)
        .map(|seed| {
            let p = fbm_path(&l, 1000 + seed);
            minimal_cover_variation(&p, 32).unwrap() / minimal_cover_variation(&p, 16).unwrap()
        })
        .collect();
    let m = median(ratios);
    let expected = 2f64.powf(h - 1.0);
    assert!(
        (m - expected).abs() < 0.08,
        "median ratio {m} vs {expected}"
    );
}

#[test]
fn short_window_estimates_stay_usable() {
    // 126-day lookbacks give 126-point paths; the fallback ladder still fits.
    let cfg = HurstConfig::default();
    let hs: Vec<f64> = (0..200)
        .map(|seed| {
            estimate_hurst(&random_walk(126, 500 + seed), &cfg)
                .unwrap()
                .h
        })
        .collect();
    let m = median(hs);
    assert!((0.40..=0.65).contains(&m), "median {m}");
}
