//! The curvature parabola `η(y) = η0 + 2 η1 y + η2 y²` in the normal plane,
//! its axial frame and its asymptotic directions.

use nalgebra::Vector2;

use crate::normalize::{classify_2jet, MongeData, ParabolaClass};

fn cross(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureParabola {
    pub eta0: Vector2<f64>,
    pub eta1: Vector2<f64>,
    pub eta2: Vector2<f64>,
    pub class: ParabolaClass,
    pub tau: f64,
}

impl CurvatureParabola {
    pub fn eval(&self, y: f64) -> Vector2<f64> {
        self.eta0 + self.eta1 * (2.0 * y) + self.eta2 * (y * y)
    }

    pub fn derivative(&self, y: f64) -> Vector2<f64> {
        (self.eta1 + self.eta2 * y) * 2.0
    }

    /// Parameter of the vertex, where `η'` is orthogonal to `η2`.
    pub fn vertex(&self) -> Option<f64> {
        let n2 = self.eta2.norm_squared();
        (n2 > 0.0 && self.class.has_vertex()).then(|| -self.eta1.dot(&self.eta2) / n2)
    }

    /// Distance from the origin to the line carrying a degenerate parabola.
    pub fn carrier_distance(&self) -> Option<f64> {
        let dir = match self.class {
            ParabolaClass::HalfLine => self.eta2,
            ParabolaClass::Line => self.eta1,
            _ => return None,
        };
        Some(cross(&self.eta0, &dir).abs() / dir.norm())
    }
}

pub fn curvature_parabola(m: &MongeData) -> CurvatureParabola {
    CurvatureParabola {
        eta0: m.eta0(),
        eta1: m.eta1(),
        eta2: m.eta2(),
        class: classify_2jet(m),
        tau: m.tau,
    }
}

/// Positively oriented orthonormal frame `{v_a, ν2}` of the normal plane.
/// When the parabola is the origin the frame is arbitrary and `defined` is
/// false.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxialFrame {
    pub v_a: Vector2<f64>,
    pub nu2: Vector2<f64>,
    pub defined: bool,
}

impl AxialFrame {
    fn from_axis(dir: Vector2<f64>) -> Self {
        let v_a = dir.normalize();
        Self {
            v_a,
            nu2: Vector2::new(-v_a.y, v_a.x),
            defined: true,
        }
    }
}

pub fn axial_vector(cp: &CurvatureParabola) -> AxialFrame {
    match cp.class {
        ParabolaClass::NonDegenerate | ParabolaClass::HalfLine => AxialFrame::from_axis(cp.eta2),
        ParabolaClass::Line => AxialFrame::from_axis(cp.eta1),
        ParabolaClass::PointNonOrigin => AxialFrame::from_axis(Vector2::new(-cp.eta0.y, cp.eta0.x)),
        ParabolaClass::PointOrigin => AxialFrame {
            v_a: Vector2::x(),
            nu2: Vector2::y(),
            defined: false,
        },
    }
}

/// Asymptotic directions as parameters `y`, with `y_∞` the null direction.
#[derive(Debug, Clone, PartialEq)]
pub enum AsymptoticSet {
    Finite(Vec<f64>),
    /// `y_∞` together with the listed finite parameters.
    IncludesInfinity(Vec<f64>),
    /// Every direction, including `y_∞`.
    All,
}

impl AsymptoticSet {
    /// Number of directions, or `None` for infinitely many.
    pub fn count(&self) -> Option<usize> {
        match self {
            AsymptoticSet::Finite(ys) => Some(ys.len()),
            AsymptoticSet::IncludesInfinity(ys) => Some(ys.len() + 1),
            AsymptoticSet::All => None,
        }
    }

    /// Finite parameters, empty for `All`.
    pub fn finite(&self) -> &[f64] {
        match self {
            AsymptoticSet::Finite(ys) | AsymptoticSet::IncludesInfinity(ys) => ys,
            AsymptoticSet::All => &[],
        }
    }
}

/// Roots of `η(y) × η'(y) = 2 (c01 + c02 y + c12 y²)` with `cij = ηi × ηj`,
/// plus `y_∞` for degenerate parabolas.
pub fn asymptotic_directions(cp: &CurvatureParabola) -> AsymptoticSet {
    let tau = cp.tau;
    match cp.class {
        ParabolaClass::NonDegenerate => {
            let c01 = cross(&cp.eta0, &cp.eta1);
            let c02 = cross(&cp.eta0, &cp.eta2);
            let c12 = cross(&cp.eta1, &cp.eta2);
            let disc = c02 * c02 - 4.0 * c12 * c01;
            let mid = -c02 / (2.0 * c12);
            if disc.abs() <= tau * tau {
                AsymptoticSet::Finite(vec![mid])
            } else if disc > 0.0 {
                let h = disc.sqrt() / (2.0 * c12.abs());
                AsymptoticSet::Finite(vec![mid - h, mid + h])
            } else {
                AsymptoticSet::Finite(Vec::new())
            }
        }
        ParabolaClass::HalfLine | ParabolaClass::Line => {
            let through_origin = cp.carrier_distance().is_some_and(|d| d <= tau);
            if through_origin {
                AsymptoticSet::All
            } else {
                AsymptoticSet::IncludesInfinity(cp.vertex().into_iter().collect())
            }
        }
        ParabolaClass::PointNonOrigin | ParabolaClass::PointOrigin => AsymptoticSet::All,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointType {
    Elliptic,
    Hyperbolic,
    Parabolic,
    Inflection,
}

impl PointType {
    pub fn name(self) -> &'static str {
        match self {
            PointType::Elliptic => "Elliptic",
            PointType::Hyperbolic => "Hyperbolic",
            PointType::Parabolic => "Parabolic",
            PointType::Inflection => "Inflection",
        }
    }
}

pub fn point_type(set: &AsymptoticSet) -> PointType {
    match set.count() {
        Some(0) => PointType::Elliptic,
        Some(1) => PointType::Parabolic,
        Some(_) => PointType::Hyperbolic,
        None => PointType::Inflection,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{MapGerm, TruncatedPoly2};
    use crate::normalize::to_monge_form;
    use crate::Tolerance;

    fn cp(comps: [&[(usize, usize, f64)]; 3]) -> CurvatureParabola {
        let p = |t: &[(usize, usize, f64)]| TruncatedPoly2::from_terms(5, t.iter().copied()).unwrap();
        let f = MapGerm::new([p(comps[0]), p(comps[1]), p(comps[2])]).unwrap();
        curvature_parabola(&to_monge_form(&f, &Tolerance::default()).unwrap())
    }

    const U: &[(usize, usize, f64)] = &[(1, 0, 1.0)];

    #[test]
    fn parabola_examples() {
        let c = cp([U, &[(2, 0, 1.0), (0, 2, 1.0)], &[(2, 0, 2.0), (1, 1, 1.0)]]);
        for y in [-2.0, 0.0, 0.5, 3.0] {
            assert!((c.eval(y) - Vector2::new(2.0 + 2.0 * y * y, 4.0 + 2.0 * y)).norm() < 1e-12);
        }
        let c = cp([U, &[(2, 0, 1.0), (0, 2, 1.0)], &[(0, 3, 1.0)]]);
        assert_eq!(c.class, ParabolaClass::HalfLine);
        for y in [-1.0, 0.0, 2.0] {
            assert!((c.eval(y) - Vector2::new(2.0 + 2.0 * y * y, 0.0)).norm() < 1e-12);
        }
        let c = cp([U, &[(0, 3, 1.0)], &[]]);
        assert_eq!(c.eval(1.7), Vector2::zeros());
    }

    #[test]
    fn axial_vector_examples() {
        let c = cp([U, &[(2, 0, 1.0), (0, 2, 1.0)], &[(2, 0, 2.0), (1, 1, 1.0)]]);
        assert!((axial_vector(&c).v_a - Vector2::x()).norm() < 1e-12);
        let c = cp([U, &[(2, 0, 1.5), (0, 2, 1.0)], &[(2, 0, 2.5), (0, 3, 1.0)]]);
        assert!((axial_vector(&c).v_a - Vector2::x()).norm() < 1e-12);
        let c = cp([U, &[(2, 0, 2.0)], &[(0, 3, 1.0)]]);
        assert_eq!(c.class, ParabolaClass::PointNonOrigin);
        assert!((c.eval(0.3) - Vector2::new(4.0, 0.0)).norm() < 1e-12);
        let fr = axial_vector(&c);
        assert!((fr.v_a - Vector2::y()).norm() < 1e-12);
        assert!(!axial_vector(&cp([U, &[], &[]])).defined);
    }

    #[test]
    fn asymptotic_examples() {
        let hyperbolic_cc = cp([U, &[(2, 0, -1.0), (0, 2, 1.0)], &[(1, 1, 1.0)]]);
        let set = asymptotic_directions(&hyperbolic_cc);
        assert_eq!(set, AsymptoticSet::Finite(vec![]));
        assert_eq!(point_type(&set), PointType::Elliptic);

        let elliptic_cc = cp([U, &[(2, 0, 1.0), (1, 1, -3.0), (0, 2, 1.0)], &[(1, 1, 1.0)]]);
        let set = asymptotic_directions(&elliptic_cc);
        assert_eq!(set.count(), Some(2));
        assert_eq!(point_type(&set), PointType::Hyperbolic);
        for &y in set.finite() {
            let (e, d) = (elliptic_cc.eval(y), elliptic_cc.derivative(y));
            assert!(cross(&e, &d).abs() < 1e-12);
        }

        let fold = cp([U, &[(0, 2, 1.0)], &[]]);
        assert_eq!(asymptotic_directions(&fold), AsymptoticSet::All);

        let ce = cp([U, &[(2, 0, -1.0), (0, 2, 1.0)], &[(0, 3, 1.0)]]);
        assert_eq!(point_type(&asymptotic_directions(&ce)), PointType::Inflection);

        let ce = cp([U, &[(2, 0, -1.0), (0, 2, 1.0)], &[(2, 0, 1.0), (0, 3, 1.0)]]);
        assert_eq!(asymptotic_directions(&ce), AsymptoticSet::IncludesInfinity(vec![0.0]));
        assert_eq!(point_type(&asymptotic_directions(&ce)), PointType::Hyperbolic);

        let line = cp([U, &[(2, 0, 1.0), (1, 1, 1.0)], &[(2, 0, 1.0)]]);
        assert_eq!(line.class, ParabolaClass::Line);
        assert_eq!(asymptotic_directions(&line), AsymptoticSet::IncludesInfinity(vec![]));
        assert_eq!(point_type(&asymptotic_directions(&line)), PointType::Parabolic);
    }

    #[test]
    fn parabolic_point_has_a_double_root() {
        // η0 on the parabola itself: η0 × η1 = 0 and η0 × η2 = 0 pin y = 0.
        let c = cp([U, &[(0, 2, 1.0)], &[(1, 1, 1.0)]]);
        let set = asymptotic_directions(&c);
        assert_eq!(set.count(), Some(1));
        assert_eq!(point_type(&set), PointType::Parabolic);
    }
}
