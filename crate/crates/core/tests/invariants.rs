use std::f64::consts::PI;

use poncelet_core::circumellipse::{
    anticevian_blade_areas, circumconic_centered_fit, circumconic_fit_area,
    circumellipse_area_closed, sigma_sum,
};
use poncelet_core::family::CLOSURE_TOLERANCE;
use poncelet_core::lab::FamilySweep;
use poncelet_core::{AffineMap, ConcentricPair, Ellipse, Eq2Verdict, Point, Triangle, Trilinear};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn random_triangle(rng: &mut StdRng) -> Triangle {
    loop {
        let mut p = || Point::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        if let Ok(t) = Triangle::new(p(), p(), p()) {
            let longest = t.sidelengths().as_array().into_iter().fold(0.0, f64::max);
            if t.area() > 0.02 * longest * longest {
                return t;
            }
        }
    }
}

/// Interior point inside the medial triangle (every barycentric weight < 1/2).
fn random_center(rng: &mut StdRng, t: &Triangle) -> Trilinear {
    loop {
        let w: [f64; 3] = [0, 1, 2].map(|_| rng.random_range(0.05..1.0));
        let sum: f64 = w.iter().sum();
        if w.iter().all(|x| x / sum < 0.45) {
            let [p1, p2, p3] = t.vertices();
            let p = (p1 * w[0] + p2 * w[1] + p3 * w[2]) * (1.0 / sum);
            return t.cartesian_to_trilinear(p);
        }
    }
}

#[test]
fn affine_area_law_on_random_pairs() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..1000 {
        let a = rng.random_range(0.5..3.0);
        let e = Ellipse::new(
            Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            a,
            a * rng.random_range(0.2..1.0),
            rng.random_range(0.0..PI),
        )
        .unwrap();
        let map = loop {
            let m: [f64; 4] = [0, 1, 2, 3].map(|_| rng.random_range(-2.0..2.0));
            if let Ok(map) = AffineMap::new(
                [[m[0], m[1]], [m[2], m[3]]],
                [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)],
            ) {
                // coefficient-form area loses ~cond² relative digits; keep maps well conditioned
                let frob2: f64 = m.iter().map(|x| x * x).sum();
                if map.det().abs() > 0.2 * frob2 {
                    break map;
                }
            }
        };
        let c = e.to_conic();
        let image = c.transformed(&map).unwrap();
        let expect = map.det().abs() * c.area().unwrap();
        let err = rel(image.area().unwrap(), expect);
        assert!(err < 1e-10, "err={err:e} det={} a={a}", map.det());
        // zero set maps onto zero set
        for k in 0..4 {
            let p = map.apply(e.point_at(k as f64 * 1.3));
            let level = image.ellipse_level(p).unwrap();
            assert!((level - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn closed_form_matches_conic_fit() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..1000 {
        let t = random_triangle(&mut rng);
        let x = random_center(&mut rng, &t);
        let areas = anticevian_blade_areas(&t, &x).unwrap();
        let center = t.trilinear_to_cartesian(&x).unwrap();
        let fit = circumconic_centered_fit(&t, center).unwrap();
        for p in t.vertices() {
            assert!(fit.eval(p).abs() < 1e-10);
        }
        assert!(fit.center().unwrap().distance(center) < 1e-9);
        assert!(rel(fit.area().unwrap(), areas.delta_x) < 1e-8);
        assert!(rel(circumconic_fit_area(&t, center).unwrap(), areas.delta_x) < 1e-8);
        let anti = t.anticevian_vertices(&x).unwrap();
        for (c, closed) in anti.into_iter().zip(areas.blades()) {
            let area = circumconic_fit_area(&t, c).unwrap();
            assert!(rel(area, closed) < 1e-8);
        }
        assert!(areas.reciprocal_residual() < 1e-11);
    }
}

#[test]
fn printed_sum_formula_is_the_matching_reading() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..1000 {
        let t = random_triangle(&mut rng);
        let x = random_center(&mut rng, &t);
        let s = sigma_sum(&t, &x).unwrap();
        assert_eq!(s.verdict, Eq2Verdict::Printed);
        assert!(rel(s.printed, s.direct) < 1e-10);
    }
}

#[test]
fn incenter_sum_identity() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..1000 {
        let t = random_triangle(&mut rng);
        let s = sigma_sum(&t, &Trilinear::INCENTER).unwrap();
        let dx = circumellipse_area_closed(&t, &Trilinear::INCENTER).unwrap();
        assert!(rel(s.direct, (1.0 + 4.0 / t.metrics().rho) * dx) < 1e-10);
    }
}

#[test]
fn incircle_family_radii_and_incenter() {
    let pair = ConcentricPair::incircle(1.5, 1.0).unwrap();
    let sweep = FamilySweep::run(&pair, 360);
    for m in sweep.valid() {
        assert!(rel(m.inradius, 0.6) < 1e-10);
        assert!(rel(m.circumradius, 1.25) < 1e-10);
    }
    for s in pair.sweep(360) {
        let tri = s.valid().unwrap().triangle;
        assert!(tri.incenter().norm() < 1e-10);
    }
}

#[test]
fn confocal_rho_constant() {
    let pair = ConcentricPair::confocal(1.5, 1.0).unwrap();
    let rho = FamilySweep::run(&pair, 360).series("rho").unwrap();
    assert_eq!(rho.values.len(), 360);
    assert!(rho.relative_spread.unwrap() < 1e-9);
}

#[test]
fn every_kind_closes_and_is_tangent() {
    let inc = ConcentricPair::incircle(1.5, 1.0).unwrap();
    let pairs = vec![
        inc.clone(),
        ConcentricPair::axis_aligned(2.0, 1.2, 1.3).unwrap(),
        ConcentricPair::confocal(1.5, 1.0).unwrap(),
        ConcentricPair::homothetic(1.7, 1.1).unwrap(),
        ConcentricPair::affine_image(&inc, &AffineMap::shear(0.5)).unwrap(),
        ConcentricPair::continuum(1.5, 1.0, 0.5).unwrap(),
    ];
    for pair in pairs {
        let bound = CLOSURE_TOLERANCE * pair.outer().a;
        for s in pair.sweep(360) {
            let o = s.valid().expect("valid orbit");
            assert!(o.closure_residual < bound);
            for r in pair.side_tangency(o) {
                assert!(r < 1e-9);
            }
        }
    }
}

#[test]
fn ratio_sum_identity_every_kind() {
    let inc = ConcentricPair::incircle(1.5, 1.0).unwrap();
    for pair in [
        inc.clone(),
        ConcentricPair::confocal(1.5, 1.0).unwrap(),
        ConcentricPair::axis_aligned(2.0, 1.2, 0.7).unwrap(),
        ConcentricPair::affine_image(&inc, &AffineMap::rotation(1.1)).unwrap(),
    ] {
        let s = FamilySweep::run(&pair, 90)
            .series("ratio_identity")
            .unwrap();
        assert!(s.max_abs() < 1e-10);
    }
}
