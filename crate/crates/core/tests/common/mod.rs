//! Seeded random germs shared by the integration tests.
#![allow(dead_code)]

use axial_core::jet::germ_transform;
use axial_core::{MapGerm, ParabolaClass, SourceChange, TargetIsometry, TruncatedPoly2};
use nalgebra::{Matrix2, Matrix3, Quaternion, UnitQuaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ORDER: usize = 5;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn coef(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-1.0..1.0)
}

/// Random polynomial with terms of total degree in `lo..=hi`.
pub fn poly(rng: &mut ChaCha8Rng, order: usize, lo: usize, hi: usize, scale: f64) -> TruncatedPoly2 {
    let mut p = TruncatedPoly2::zero(order);
    for d in lo..=hi.min(order) {
        for j in 0..=d {
            p.set_coeff(d - j, j, scale * coef(rng));
        }
    }
    p
}

/// Monge 2-jet `[a20, a11, a02, b20, b11, b02]` of the requested class.
pub fn two_jet(rng: &mut ChaCha8Rng, class: ParabolaClass) -> [f64; 6] {
    let pick = |rng: &mut ChaCha8Rng, min: f64| loop {
        let x = 2.0 * coef(rng);
        if x.abs() >= min {
            return x;
        }
    };
    match class {
        ParabolaClass::NonDegenerate => loop {
            let j = [coef(rng), coef(rng), coef(rng), coef(rng), coef(rng), coef(rng)].map(|x| 2.0 * x);
            if (j[1] * j[5] - j[2] * j[4]).abs() > 0.2 {
                return j;
            }
        },
        ParabolaClass::HalfLine => {
            let (a02, b02) = (pick(rng, 0.3), 2.0 * coef(rng));
            let t = coef(rng);
            [2.0 * coef(rng), t * a02, a02, 2.0 * coef(rng), t * b02, b02]
        }
        ParabolaClass::Line => [2.0 * coef(rng), pick(rng, 0.3), 0.0, 2.0 * coef(rng), 2.0 * coef(rng), 0.0],
        ParabolaClass::PointNonOrigin => [pick(rng, 0.3), 0.0, 0.0, 2.0 * coef(rng), 0.0, 0.0],
        ParabolaClass::PointOrigin => [0.0; 6],
    }
}

/// `(u, ½(a20 u² + 2a11 uv + a02 v²) + h.o.t., ½(b20 u² + …) + h.o.t.)`.
pub fn monge_germ(rng: &mut ChaCha8Rng, order: usize, j: [f64; 6], hot: f64) -> MapGerm {
    let quad = |a20: f64, a11: f64, a02: f64| {
        TruncatedPoly2::from_terms(order, [(2, 0, a20 / 2.0), (1, 1, a11), (0, 2, a02 / 2.0)]).unwrap()
    };
    let g2 = &quad(j[0], j[1], j[2]) + &poly(rng, order, 3, order, hot);
    let g3 = &quad(j[3], j[4], j[5]) + &poly(rng, order, 3, order, hot);
    MapGerm::new([TruncatedPoly2::u(order), g2, g3]).unwrap()
}

pub fn isometry(rng: &mut ChaCha8Rng, allow_reflection: bool) -> TargetIsometry {
    let q = UnitQuaternion::from_quaternion(Quaternion::new(coef(rng), coef(rng), coef(rng), coef(rng)));
    let mut m: Matrix3<f64> = q.to_rotation_matrix().into_inner();
    if allow_reflection && rng.gen_bool(0.5) {
        m *= Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, -1.0));
    }
    TargetIsometry::new(m).unwrap()
}

/// Source change with invertible linear part; with `aligned` the line
/// `u = 0` stays the kernel direction `∂_v` of a Monge germ.
pub fn source_change(rng: &mut ChaCha8Rng, order: usize, aligned: bool) -> SourceChange {
    let lin = loop {
        let m = Matrix2::new(
            1.5 * coef(rng),
            if aligned { 0.0 } else { 1.5 * coef(rng) },
            1.5 * coef(rng),
            1.5 * coef(rng),
        );
        if m.determinant().abs() > 0.3 {
            break m;
        }
    };
    let x = &TruncatedPoly2::from_terms(order, [(1, 0, lin[(0, 0)]), (0, 1, lin[(0, 1)])]).unwrap()
        + &poly(rng, order, 2, order, 0.3);
    let y = &TruncatedPoly2::from_terms(order, [(1, 0, lin[(1, 0)]), (0, 1, lin[(1, 1)])]).unwrap()
        + &poly(rng, order, 2, order, 0.3);
    SourceChange::new(x, y).unwrap()
}

/// Monge germ of `class` moved by a random source change and isometry.
pub fn random_germ(rng: &mut ChaCha8Rng, class: ParabolaClass, aligned: bool) -> MapGerm {
    let j = two_jet(rng, class);
    let g = monge_germ(rng, ORDER, j, 0.5);
    let s = source_change(rng, ORDER, aligned);
    let r = isometry(rng, true);
    germ_transform(&g, &s, &r).unwrap()
}

/// Alternates between a non-degenerate parabola and a half-line.
pub fn vertex_class(i: usize) -> ParabolaClass {
    if i.is_multiple_of(2) {
        ParabolaClass::NonDegenerate
    } else {
        ParabolaClass::HalfLine
    }
}

/// Frontal of the first kind in adapted coordinates:
/// `(u, p(u) + v² q(u, v), r(u) + v² s(u, v))`, then rotated.
pub fn random_frontal(rng: &mut ChaCha8Rng) -> MapGerm {
    let order = ORDER;
    let mut comps = [TruncatedPoly2::u(order), TruncatedPoly2::zero(order), TruncatedPoly2::zero(order)];
    for c in comps.iter_mut().skip(1) {
        for i in 2..=order {
            c.set_coeff(i, 0, coef(rng));
        }
        for j in 2..=order {
            for i in 0..=(order - j) {
                c.set_coeff(i, j, coef(rng));
            }
        }
    }
    while comps[1].coeff(0, 2).hypot(comps[2].coeff(0, 2)) < 0.3 {
        comps[1].set_coeff(0, 2, coef(rng));
    }
    MapGerm::new(comps).unwrap().rotate(&isometry(rng, true))
}

/// Fold germ in normal-form shape with random coefficients and `|b1| >= b1_min`,
/// then moved by a random source change and isometry.
pub fn random_fold(rng: &mut ChaCha8Rng, b1_min: f64) -> MapGerm {
    let order = ORDER;
    let mut g2 = poly(rng, order, 3, order, 0.5);
    let mut g3 = poly(rng, order, 3, order, 0.5);
    g2.set_coeff(2, 0, coef(rng));
    g2.set_coeff(1, 1, 0.0);
    g2.set_coeff(0, 2, 0.5);
    g3.set_coeff(2, 0, coef(rng));
    g3.set_coeff(1, 1, 0.0);
    g3.set_coeff(0, 2, 0.0);
    let b1 = loop {
        let x = 2.0 * coef(rng);
        if x.abs() >= b1_min {
            break x;
        }
    };
    g3.set_coeff(2, 1, b1 / 2.0);
    let g = MapGerm::new([TruncatedPoly2::u(order), g2, g3]).unwrap();
    germ_transform(&g, &source_change(rng, order, false), &isometry(rng, true)).unwrap()
}

/// Sign oracle for the height function: samples `h` on circles of radius
/// `0.05 · 2^-k`, `k = 0..=40`, and reports whether `h` keeps one strict sign
/// on every circle from some radius inwards. The 1-jet of `h` vanishes in
/// exact arithmetic and is cleared of rounding residue first.
pub fn grid_one_side(h: &TruncatedPoly2) -> bool {
    const ANGLES: usize = 720;
    let mut h = h.clone();
    for (i, j) in [(0, 0), (1, 0), (0, 1)] {
        h.set_coeff(i, j, 0.0);
    }
    let mut inner_sign = 0i8;
    let mut circles = Vec::new();
    for k in 0..=40 {
        let r = 0.05 * 0.5f64.powi(k);
        let (mut pos, mut neg) = (false, false);
        for a in 0..ANGLES {
            let t = 2.0 * std::f64::consts::PI * a as f64 / ANGLES as f64;
            let x = h.eval(r * t.cos(), r * t.sin());
            pos |= x > 0.0;
            neg |= x <= 0.0;
        }
        circles.push(match (pos, neg) {
            (true, false) => 1i8,
            (false, true) => -1,
            _ => 0,
        });
    }
    // Verdict from the innermost circles, where the quadratic part dominates.
    for &c in circles.iter().rev().take(10) {
        if c == 0 || (inner_sign != 0 && c != inner_sign) {
            return false;
        }
        inner_sign = c;
    }
    true
}
