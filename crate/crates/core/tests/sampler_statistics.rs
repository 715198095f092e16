use num_complex::Complex64;
use polyginibre::dpp::{empirical_intensity, empirical_intensity_regions, sample_configuration, Region, Sampler};
use polyginibre::EnsembleParams;

#[test]
fn annulus_totals_match_cardinality() {
    let p = EnsembleParams::new(30.0, 30, 2).unwrap();
    let s = Sampler::new(&p).unwrap();
    let cs = s.sample_many(&(100..300).collect::<Vec<u64>>()).unwrap();
    let edges: Vec<f64> = (0..=30).map(|i| 0.1 * i as f64).collect();
    let bins = empirical_intensity(&cs, &edges).unwrap();
    let observed: f64 = bins.iter().map(|b| b.observed_mean).sum();
    let expected: f64 = bins.iter().map(|b| b.expected_mean).sum();
    assert_eq!(observed, 60.0);
    assert!((expected - 60.0).abs() < 1e-6, "{expected}");
    for b in &bins {
        assert!(b.z_score.abs() <= 5.0, "{b:?}");
    }
    // Bulk annulus: density close to m q per unit of dA.
    let bulk = &bins[3];
    let area = 0.4f64.powi(2) - 0.3f64.powi(2);
    assert!((bulk.expected_mean / (60.0 * area) - 1.0).abs() < 0.02);
}

#[test]
fn far_exterior_is_empty() {
    let p = EnsembleParams::new(30.0, 30, 2).unwrap();
    let cs = Sampler::new(&p).unwrap().sample_many(&(0..100).collect::<Vec<u64>>()).unwrap();
    let bins = empirical_intensity(&cs, &[2.0, 10.0]).unwrap();
    assert!(bins[0].expected_mean < 1e-20);
    let empty = cs.iter().filter(|c| c.points.iter().all(|z| z.norm() < 2.0)).count();
    assert!(empty >= 99);
}

#[test]
fn two_point_process_matches_intensity_on_cells() {
    let p = EnsembleParams::new(2.0, 2, 1).unwrap();
    let cs = Sampler::new(&p).unwrap().sample_many(&(0..2000).collect::<Vec<u64>>()).unwrap();
    let mut cells = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (-1.5 + i as f64, -1.5 + j as f64);
            cells.push(Region::Rect { re: (a, a + 1.0), im: (b, b + 1.0) });
        }
    }
    for b in empirical_intensity_regions(&cs, &cells).unwrap() {
        assert!(b.z_score.abs() <= 4.0, "{b:?}");
    }
}

#[test]
fn sampler_is_seed_deterministic_and_sized() {
    let p = EnsembleParams::new(5.0, 5, 2).unwrap();
    let a = sample_configuration(&p, 42).unwrap();
    let b = sample_configuration(&p, 42).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 10);
    assert!(a.points.iter().all(|z: &Complex64| z.re.is_finite() && z.im.is_finite()));
}

#[test]
fn sampler_rejects_oversized_spaces() {
    let p = EnsembleParams::new(100.0, 2600, 2).unwrap();
    assert!(Sampler::new(&p).is_err());
}
