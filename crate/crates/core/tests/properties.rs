//! Structural invariants checked on generated inputs.

use contractible::disc::{mobius_automorphism, mobius_distance, weighted_product_disc, DiscPoint, DiscWeight};
use contractible::domains::{minkowski, DomainSpec, GaugeSpec};
use contractible::exact::{dmax_eval, dmin_exact, green_disc, green_exact, green_polydisc_cw, lempert_polydisc};
use contractible::weights::{leq, WeightMap};
use contractible::{Complex64, Point};
use proptest::prelude::*;

fn disc(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn dp(radius: f64) -> impl Strategy<Value = DiscPoint> {
    disc(radius).prop_map(|c| DiscPoint::new(c).unwrap())
}

fn disc_weight() -> impl Strategy<Value = Vec<(Complex64, f64)>> {
    prop::collection::vec((disc(0.95), 0.1..4.0), 0..5)
}

/// Poles on the first axis of the bidisc.
fn axis_weight(n: usize) -> impl Strategy<Value = WeightMap> {
    prop::collection::vec((disc(0.9), 0.2..3.0), 1..4).prop_map(move |v| {
        let entries = v.into_iter().map(|(a, w)| {
            let mut c = vec![Complex64::new(0.0, 0.0); n];
            c[0] = a;
            (Point::new(c).unwrap(), w)
        });
        WeightMap::new(n, entries).unwrap()
    })
}

fn point(n: usize, radius: f64) -> impl Strategy<Value = Point> {
    prop::collection::vec(disc(radius), n).prop_map(|c| Point::new(c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mobius_is_symmetric_and_bounded(a in dp(0.999), z in dp(0.999)) {
        let d = mobius_distance(a, z);
        prop_assert!((0.0..1.0).contains(&d));
        prop_assert!((d - mobius_distance(z, a)).abs() <= 1e-12);
        prop_assert_eq!(mobius_distance(a, a), 0.0);
    }

    #[test]
    fn automorphisms_preserve_the_distance(a in dp(0.9), b in dp(0.9), c in dp(0.9), theta in 0.0..6.3f64) {
        let before = mobius_distance(b, c);
        let after = mobius_distance(mobius_automorphism(a, theta, b), mobius_automorphism(a, theta, c));
        prop_assert!((before - after).abs() <= 1e-10);
    }

    #[test]
    fn weighted_product_vanishes_exactly_at_poles(entries in disc_weight(), z in dp(0.95)) {
        let w = DiscWeight::new(entries.iter().map(|&(a, k)| (DiscPoint::new(a).unwrap(), k))).unwrap();
        let v = weighted_product_disc(&w, z);
        prop_assert!((0.0..=1.0).contains(&v));
        for (a, _) in w.entries() {
            prop_assert_eq!(weighted_product_disc(&w, *a), 0.0);
        }
    }

    #[test]
    fn weight_maps_are_canonical_and_round_trip(entries in disc_weight()) {
        let raw: Vec<(Point, f64)> = entries.iter().map(|&(a, k)| (Point::from(a), k)).collect();
        let p = WeightMap::new(1, raw.clone()).unwrap();
        let q = WeightMap::new(1, raw.into_iter().rev()).unwrap();
        prop_assert_eq!(&p, &q);
        let json = serde_json::to_string(&p).unwrap();
        let back: WeightMap = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
        for w in p.entries().windows(2) {
            prop_assert!(w[0].0.lex_cmp(&w[1].0).is_lt());
        }
    }

    #[test]
    fn green_decreases_as_weights_grow(p in axis_weight(2), z in point(2, 0.9), s in 1.0..3.0f64) {
        let q = p.map_weights(|w| w * s).unwrap();
        prop_assert!(leq(&p, &q));
        let gp = green_polydisc_cw(&p, &z).unwrap().value;
        let gq = green_polydisc_cw(&q, &z).unwrap().value;
        prop_assert!(gq <= gp + 1e-12);
        // homogeneity of the CW formula in the weights
        prop_assert!((gq - gp.powf(s)).abs() <= 1e-10);
    }

    #[test]
    fn chain_on_the_bidisc(p in axis_weight(2), z in point(2, 0.9)) {
        let dom = DomainSpec::polydisc(2);
        let g = green_exact(&dom, &p, &z).unwrap().value;
        let dmax = dmax_eval(&dom, &p, &z).unwrap().value;
        prop_assert!(g <= dmax + 1e-12);
        if let Ok(dmin) = dmin_exact(&dom, &p, &z) {
            prop_assert!(dmin.value <= g + 1e-12);
        }
    }

    #[test]
    fn single_pole_green_is_lempert_on_the_polydisc(a in point(3, 0.9), z in point(3, 0.9)) {
        let dom = DomainSpec::polydisc(3);
        let p = WeightMap::characteristic(3, [a.clone()]).unwrap();
        let g = green_exact(&dom, &p, &z).unwrap().value;
        let k = lempert_polydisc(&a, &z).unwrap().value;
        prop_assert!((g - k).abs() <= 1e-12);
    }

    #[test]
    fn gauges_are_homogeneous(z in point(2, 3.0), t in 0.01..10.0f64) {
        for gauge in [GaugeSpec::AbsSum, GaugeSpec::MaxAbs, GaugeSpec::AbsPlusSqrtAbs] {
            let h = minkowski(gauge, &z).unwrap();
            let ht = minkowski(gauge, &z.scale(t)).unwrap();
            prop_assert!((ht - t * h).abs() <= 1e-12 * (1.0 + t * h));
        }
    }

    #[test]
    fn disc_green_is_the_weighted_product(entries in disc_weight(), z in disc(0.95)) {
        let raw: Vec<(Point, f64)> = entries.iter().map(|&(a, k)| (Point::from(a), k)).collect();
        let p = WeightMap::new(1, raw).unwrap();
        let w = p.to_disc_weight().unwrap();
        let g = green_disc(&p, &Point::from(z)).unwrap().value;
        prop_assert_eq!(g, weighted_product_disc(&w, DiscPoint::new(z).unwrap()));
    }
}
