//! Determinism and soundness of the variational searches.

use contractible::domains::{disc_validity, DomainSpec, GaugeSpec};
use contractible::exact::green_exact;
use contractible::harness;
use contractible::variational::{
    coman_upper_bound, dmin_lower_bound, lempert_upper_bound, variational_interval, SearchConfig,
};
use contractible::weights::WeightMap;
use contractible::Point;

fn pt(xs: &[f64]) -> Point {
    Point::real(xs).unwrap()
}

fn example() -> (DomainSpec, WeightMap, Point) {
    let p = WeightMap::integer(2, [(pt(&[-0.5, 0.0]), 2.0), (pt(&[0.5, 0.0]), 1.0)]).unwrap();
    (DomainSpec::polydisc(2), p, pt(&[0.0, 1.0 / 3.0]))
}

fn off_axis() -> (DomainSpec, WeightMap, Point) {
    let p = WeightMap::new(2, [(pt(&[0.2, 0.1]), 1.5), (pt(&[-0.1, 0.3]), 0.7)]).unwrap();
    (DomainSpec::gauge_ball(GaugeSpec::AbsSum, 2), p, pt(&[0.05, -0.2]))
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let (dom, p, z) = off_axis();
    let cfg = SearchConfig { seed: 11, ..SearchConfig::default() };
    let one = in_pool(1, || variational_interval(&dom, &p, &z, &cfg).unwrap());
    let four = in_pool(4, || variational_interval(&dom, &p, &z, &cfg).unwrap());
    assert_eq!(one, four);
    let a = in_pool(1, || harness::run("axiom_H", 40, 5).unwrap());
    let b = in_pool(3, || harness::run("axiom_H", 40, 5).unwrap());
    assert_eq!(a, b);
}

#[test]
fn more_restarts_never_weaken_the_bounds() {
    let (dom, p, z) = off_axis();
    let mut last = f64::NEG_INFINITY;
    for restarts in [1, 4, 16] {
        let cfg = SearchConfig { seed: 3, restarts, ..SearchConfig::default() };
        let lo = dmin_lower_bound(&dom, &p, &z, &cfg).unwrap().lower;
        assert!(lo >= last, "restarts {restarts}: {lo} < {last}");
        last = lo;
    }
    let a = pt(&[0.3, 0.2]);
    let mut last = f64::INFINITY;
    for restarts in [1, 4, 16] {
        let cfg = SearchConfig { seed: 3, restarts, ..SearchConfig::default() };
        let hi = lempert_upper_bound(&dom, &a, &z, &cfg).unwrap().upper;
        assert!(hi <= last, "restarts {restarts}: {hi} > {last}");
        last = hi;
    }
}

#[test]
fn lower_witnesses_reproduce_their_scores() {
    for (dom, p, z) in [example(), off_axis()] {
        let b = dmin_lower_bound(&dom, &p, &z, &SearchConfig::default()).unwrap();
        let w = b.lower_witness.expect("a candidate map");
        assert_eq!(w.score(&p, &z).unwrap(), b.lower);
        // the map lands in the disc: sample the domain boundary from inside
        for k in 0..64 {
            let t = k as f64 / 64.0 * std::f64::consts::TAU;
            let x = Point::new(vec![
                contractible::Complex64::from_polar(0.4999, t),
                contractible::Complex64::from_polar(0.4999, 2.0 * t + 1.0),
            ])
            .unwrap();
            if dom.contains(&x).unwrap() {
                assert!(w.eval_at(&z, &x).norm() < 1.0);
            }
        }
    }
}

#[test]
fn upper_witnesses_are_admissible_discs() {
    let (dom, _, z) = off_axis();
    let a = pt(&[0.3, 0.2]);
    let b = lempert_upper_bound(&dom, &a, &z, &SearchConfig::default()).unwrap();
    let w = b.upper_witness.expect("a disc");
    assert!(w.verify(&dom, 1e-9));
    assert!(disc_validity(&w.disc, &dom, 0.0));
    let lambdas: Vec<f64> = w.nodes.iter().map(|(l, _)| l.norm()).collect();
    assert!(lambdas.iter().any(|&r| r == 0.0));
    assert!(lambdas.iter().all(|&r| r <= b.upper + 1e-12));

    let t: f64 = 0.04;
    let ball = DomainSpec::gauge_ball(GaugeSpec::AbsSum, 2);
    let (p1, p2) = (pt(&[t, t.sqrt()]), pt(&[t, -t.sqrt()]));
    let c = coman_upper_bound(&ball, [&p1, &p2], &Point::origin(2), &SearchConfig::default()).unwrap();
    let w = c.upper_witness.expect("a three-point disc");
    assert!(w.verify(&ball, 1e-9));
    assert_eq!(w.nodes.len(), 3);
}

#[test]
fn intervals_bracket_closed_forms() {
    let (dom, p, z) = example();
    let b = variational_interval(&dom, &p, &z, &SearchConfig::default()).unwrap();
    let g = green_exact(&dom, &p, &z).unwrap().value;
    assert!(b.lower <= g && g <= b.upper, "{b:?}");
    assert!(b.lower >= 0.125 - 1e-9, "the d^min bound is reached");
}
