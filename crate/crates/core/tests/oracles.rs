//! Closed-form evaluators against oracles written from scratch here.

use std::f64::consts::TAU;

use contractible::domains::{minkowski, DomainSpec, GaugeSpec};
use contractible::exact::{
    dmin_exact, green_disc, lempert_exact, liouville_countable_example, mobius_polydisc_product_poles,
};
use contractible::weights::WeightMap;
use contractible::{Complex64, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn m(a: Complex64, z: Complex64) -> f64 {
    ((z - a) / (one() - a.conj() * z)).norm()
}

fn disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

#[test]
fn disc_green_matches_the_blaschke_modulus() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let k = rng.gen_range(1..=5);
        let poles: Vec<(Complex64, f64)> = (0..k).map(|_| (disc(&mut rng, 0.95), rng.gen_range(0.1..4.0))).collect();
        let z = disc(&mut rng, 0.95);
        // |∏ ((z − a)/(1 − āz))^w| through the principal power of each factor
        let oracle: f64 = poles.iter().map(|&(a, w)| ((z - a) / (one() - a.conj() * z)).powf(w).norm()).product();
        let p = WeightMap::new(1, poles.iter().map(|&(a, w)| (Point::from(a), w))).unwrap();
        let v = green_disc(&p, &Point::from(z)).unwrap().value;
        assert!((v - oracle).abs() <= 1e-9, "{v} vs {oracle}");
    }
}

#[test]
fn product_pole_sets_on_the_polydisc() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let n = rng.gen_range(1..=3);
        let sets: Vec<Vec<Complex64>> =
            (0..n).map(|_| (0..rng.gen_range(1..=3)).map(|_| disc(&mut rng, 0.9)).collect()).collect();
        let z: Vec<Complex64> = (0..n).map(|_| disc(&mut rng, 0.9)).collect();
        let mut oracle = 0.0f64;
        for (set, &zj) in sets.iter().zip(&z) {
            oracle = oracle.max(set.iter().map(|&a| m(a, zj)).product());
        }
        let v = mobius_polydisc_product_poles(&sets, &Point::new(z).unwrap()).unwrap().value;
        assert!((v - oracle).abs() <= 1e-14);
    }
}

#[test]
fn sqrt_ball_gauge_matches_bisection() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let z = Point::new(vec![disc(&mut rng, 2.0), disc(&mut rng, 2.0)]).unwrap();
        let (a, b) = (z.coords()[0].norm(), z.coords()[1].norm());
        let inside = |t: f64| a / t + (b / t).sqrt() < 1.0;
        let (mut lo, mut hi) = (0.0, 1.0);
        while !inside(hi) {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if inside(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let h = minkowski(GaugeSpec::AbsPlusSqrtAbs, &z).unwrap();
        assert!((h - hi).abs() <= 1e-12 * (1.0 + hi), "{h} vs {hi}");
    }
}

#[test]
fn lempert_from_the_origin_is_the_gauge() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for gauge in [GaugeSpec::AbsSum, GaugeSpec::MaxAbs] {
        let dom = DomainSpec::gauge_ball(gauge, 3);
        for _ in 0..50 {
            let z: Vec<Complex64> = (0..3).map(|_| disc(&mut rng, 0.3)).collect();
            let oracle = match gauge {
                GaugeSpec::AbsSum => z.iter().map(|c| c.norm()).sum::<f64>(),
                _ => z.iter().map(|c| c.norm()).fold(0.0, f64::max),
            };
            let v = lempert_exact(&dom, &Point::origin(3), &Point::new(z).unwrap()).unwrap().value;
            assert!((v - oracle).abs() <= 1e-14);
        }
    }
}

#[test]
fn dmin_on_power_domains_factors_through_the_monomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alpha = [2u32, 1];
    let dom = DomainSpec::ReinhardtPower { alpha: alpha.to_vec() };
    let mono = |c: &[Complex64]| c[0] * c[0] * c[1];
    for _ in 0..50 {
        let a = [disc(&mut rng, 0.9), disc(&mut rng, 0.9)];
        let z = [disc(&mut rng, 0.9), disc(&mut rng, 0.9)];
        let w = rng.gen_range(0.5..3.0);
        let p = WeightMap::new(2, [(Point::new(a.to_vec()).unwrap(), w)]).unwrap();
        let v = dmin_exact(&dom, &p, &Point::new(z.to_vec()).unwrap()).unwrap().value;
        let oracle = m(mono(&a), mono(&z)).powf(w);
        assert!((v - oracle).abs() <= 1e-12, "{v} vs {oracle}");
    }
}

#[test]
fn countable_example_away_from_the_origin() {
    for z in [Complex64::new(0.3, 0.1), Complex64::new(-0.6, 0.0), Complex64::new(0.02, -0.05)] {
        let v = liouville_countable_example(z, 1e-10).unwrap().value;
        // direct sum of the logarithms; the tail beyond N is O(ln(1/|z|)/N)
        let n = 2_000_000u64;
        let log: f64 = (2..=n).rev().map(|k| m(Complex64::new(1.0 / k as f64, 0.0), z).ln() / (k * k) as f64).sum();
        let tail = z.norm().ln() / n as f64;
        let oracle = (log + tail).exp();
        assert!((v - oracle).abs() <= 1e-8, "{z}: {v} vs {oracle}");
    }
    assert_eq!(liouville_countable_example(Complex64::new(0.25, 0.0), 1e-10).unwrap().value, 0.0);
}
