//! Corank detection, Monge form and the 2-jet classification of the
//! curvature parabola.

use std::fmt;

use nalgebra::{Matrix2, Matrix3, Rotation3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::jet::{implicit_v, MapGerm, SourceChange, TargetIsometry, TruncatedPoly2, Var};
use crate::Tolerance;

/// `2 − rank(df_0)`, with rank counted over singular values above `τ`.
pub fn corank_at_origin(f: &MapGerm, tol: &Tolerance) -> usize {
    let tau = tol.tau(f.two_jet_scale());
    let s = f.differential().singular_values();
    2 - s.iter().filter(|&&x| x > tau).count()
}

/// The germ `g = R · (f ∘ s) = (u, g_2, g_3)` together with its 2-jet
/// coefficients, so that
/// `j²g = (u, (a20 u² + 2 a11 uv + a02 v²)/2, (b20 u² + 2 b11 uv + b02 v²)/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MongeData {
    pub a20: f64,
    pub a11: f64,
    pub a02: f64,
    pub b20: f64,
    pub b11: f64,
    pub b02: f64,
    /// The normalized germ.
    pub germ: MapGerm,
    /// Source change `s` from Monge coordinates to input coordinates.
    pub source: SourceChange,
    /// Target rotation `R`.
    pub rotation: TargetIsometry,
    /// Degeneracy threshold for this germ.
    pub tau: f64,
}

impl MongeData {
    /// Builds the data of a germ that is already in Monge form.
    pub fn from_monge_germ(germ: MapGerm, tol: &Tolerance) -> Result<Self> {
        let first = germ.component(0);
        if first != &TruncatedPoly2::u(germ.order()) {
            return Err(Error::NotMonge);
        }
        let (g2, g3) = (germ.component(1), germ.component(2));
        let a = [2.0 * g2.coeff(2, 0), g2.coeff(1, 1), 2.0 * g2.coeff(0, 2)];
        let b = [2.0 * g3.coeff(2, 0), g3.coeff(1, 1), 2.0 * g3.coeff(0, 2)];
        let scale = a.iter().chain(&b).map(|c| c.abs()).fold(0.0, f64::max);
        let order = germ.order();
        Ok(Self {
            a20: a[0],
            a11: a[1],
            a02: a[2],
            b20: b[0],
            b11: b[1],
            b02: b[2],
            germ,
            source: SourceChange::identity(order),
            rotation: TargetIsometry::identity(),
            tau: tol.tau(scale),
        })
    }

    pub fn eta0(&self) -> Vector2<f64> {
        Vector2::new(self.a20, self.b20)
    }

    pub fn eta1(&self) -> Vector2<f64> {
        Vector2::new(self.a11, self.b11)
    }

    pub fn eta2(&self) -> Vector2<f64> {
        Vector2::new(self.a02, self.b02)
    }
}

/// Kernel of a rank-one `3×2` differential, oriented with `k_y >= 0`.
fn kernel_direction(f: &MapGerm) -> Vector2<f64> {
    let (a, b) = (f.partial(1, 0), f.partial(0, 1));
    let k = if a.norm_squared() >= b.norm_squared() {
        Vector2::new(-a.dot(&b) / a.norm_squared(), 1.0)
    } else {
        Vector2::new(1.0, -a.dot(&b) / b.norm_squared())
    };
    let k = k.normalize();
    if k.y < 0.0 || (k.y == 0.0 && k.x < 0.0) {
        -k
    } else {
        k
    }
}

fn rotation_to_x(t: &Vector3<f64>) -> Matrix3<f64> {
    if t.y == 0.0 && t.z == 0.0 && t.x > 0.0 {
        return Matrix3::identity();
    }
    Rotation3::rotation_between(t, &Vector3::x())
        .unwrap_or_else(|| Rotation3::from_axis_angle(&Vector3::z_axis(), std::f64::consts::PI))
        .into_inner()
}

/// Brings a corank-1 germ to Monge form.
///
/// The source is first rotated so the kernel of `df_0` becomes `∂_v`, the
/// target is rotated so `df_0(∂_u)` points along the positive x-axis, and
/// finally `(u, v) ↦ (g_1(u, v), v)` is inverted on jets so the first
/// component is exactly `u`.
pub fn to_monge_form(f: &MapGerm, tol: &Tolerance) -> Result<MongeData> {
    let corank = corank_at_origin(f, tol);
    if corank != 1 {
        return Err(Error::Corank(corank));
    }
    let n = f.order();
    let k = kernel_direction(f);
    let w = Vector2::new(k.y, -k.x);
    let lin = SourceChange::linear(n, Matrix2::new(w.x, k.x, w.y, k.y))?;
    let g = f.compose(&lin)?;
    let q = TargetIsometry::new(rotation_to_x(&g.partial(1, 0)))?;
    let h = g.rotate(&q);

    let flatten = SourceChange::new(h.component(0).clone(), TruncatedPoly2::v(n))?;
    let psi = flatten.inverse()?;
    let flat = h.compose(&psi)?;
    let [_, g2, g3] = flat.components().clone();
    let germ = MapGerm::new([TruncatedPoly2::u(n), g2, g3])?;

    let mut m = MongeData::from_monge_germ(germ, tol)?;
    m.source = lin.after(&psi)?;
    m.rotation = q;
    Ok(m)
}

/// Shape of the curvature parabola.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParabolaClass {
    NonDegenerate,
    HalfLine,
    Line,
    PointNonOrigin,
    PointOrigin,
}

impl ParabolaClass {
    pub fn name(self) -> &'static str {
        match self {
            ParabolaClass::NonDegenerate => "NonDegenerateParabola",
            ParabolaClass::HalfLine => "HalfLine",
            ParabolaClass::Line => "Line",
            ParabolaClass::PointNonOrigin => "PointNonOrigin",
            ParabolaClass::PointOrigin => "PointOrigin",
        }
    }

    pub fn is_degenerate(self) -> bool {
        self != ParabolaClass::NonDegenerate
    }

    pub fn is_point(self) -> bool {
        matches!(self, ParabolaClass::PointNonOrigin | ParabolaClass::PointOrigin)
    }

    /// Classes on which the axial curvature is a finite minimum.
    pub fn has_vertex(self) -> bool {
        matches!(self, ParabolaClass::NonDegenerate | ParabolaClass::HalfLine)
    }
}

impl fmt::Display for ParabolaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classifies the 2-jet.
pub fn classify_2jet(m: &MongeData) -> ParabolaClass {
    let tau = m.tau;
    let det = m.a11 * m.b02 - m.a02 * m.b11;
    if det.abs() > tau {
        ParabolaClass::NonDegenerate
    } else if m.a02.powi(2) + m.b02.powi(2) > tau * tau {
        ParabolaClass::HalfLine
    } else if m.a11.powi(2) + m.b11.powi(2) > tau * tau {
        ParabolaClass::Line
    } else if m.a20.powi(2) + m.b20.powi(2) <= tau * tau {
        ParabolaClass::PointOrigin
    } else {
        ParabolaClass::PointNonOrigin
    }
}

/// Coordinates with `f_u = e_1`, `f_v = 0`, `f_vv = e_2` at the origin, so
/// the axial vector is `e_2` and the height function along it is the second
/// component.
///
/// For a non-degenerate parabola the third component additionally has no
/// `u²` term. For a half-line every `u^k v` term of the second component
/// is removed, which makes the chart a fold normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedChart {
    pub class: ParabolaClass,
    pub germ: MapGerm,
    /// `|(a02, b02)|`; the chart's `v` equals `sqrt(normal_scale)` times the
    /// sheared Monge coordinate.
    pub normal_scale: f64,
    /// Source change from chart coordinates to input coordinates.
    pub source: SourceChange,
    /// Total target rotation: `chart = rotation · (f ∘ source)`.
    pub rotation: TargetIsometry,
    pub tau: f64,
}

impl AdaptedChart {
    /// Maps a point of the chart's target back to input coordinates.
    pub fn to_input(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.inverse().apply(p)
    }

    /// Factor converting chart `v` to the sheared Monge `v`.
    pub fn v_factor(&self) -> f64 {
        1.0 / self.normal_scale.sqrt()
    }
}

pub fn adapted_chart(m: &MongeData) -> Result<AdaptedChart> {
    let class = classify_2jet(m);
    if !class.has_vertex() {
        return Err(Error::ClassMismatch {
            operation: "adapted chart",
            expected: "a non-degenerate parabola or a half-line",
            found: class,
        });
    }
    let order = m.germ.order();
    let n = m.eta2().norm();
    let va = m.eta2() / n;
    let nu = Vector2::new(-va.y, va.x);
    let p = TargetIsometry::new(Matrix3::new(1.0, 0.0, 0.0, 0.0, va.x, va.y, 0.0, nu.x, nu.y))?;
    let g = m.germ.rotate(&p);

    let u = TruncatedPoly2::u(order);
    let v = TruncatedPoly2::v(order);
    let shear = match class {
        ParabolaClass::NonDegenerate => {
            let g3 = g.component(2);
            let beta = g3.coeff(2, 0) / g3.coeff(1, 1);
            SourceChange::new(u.clone(), &v - &u.scale(beta))?
        }
        _ => {
            let phi = implicit_v(&g.component(1).diff(Var::V))?.truncated(order.saturating_sub(1));
            SourceChange::new(u.clone(), &v + &phi)?
        }
    };
    let scale = SourceChange::linear(order, Matrix2::new(1.0, 0.0, 0.0, 1.0 / n.sqrt()))?;
    let local = shear.after(&scale)?;
    let germ = g.compose(&local)?;
    Ok(AdaptedChart {
        class,
        germ,
        normal_scale: n,
        source: m.source.after(&local)?,
        rotation: p.after(&m.rotation),
        tau: m.tau,
    })
}

/// Coefficients of the fold normal form
/// `(u, u² a_0/2 + v² a_2/2, u² b_0/2 + u² v b_1/2 + u v² b_3/2 + v³ b_4/6)`
/// at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldNormalForm {
    pub a0_0: f64,
    pub b0_0: f64,
    pub b1_0: f64,
    pub a2_00: f64,
    pub chart: AdaptedChart,
}

impl FoldNormalForm {
    pub fn germ(&self) -> &MapGerm {
        &self.chart.germ
    }
}

pub fn fold_normal_form(m: &MongeData) -> Result<FoldNormalForm> {
    let class = classify_2jet(m);
    if class != ParabolaClass::HalfLine {
        return Err(Error::ClassMismatch {
            operation: "fold normal form",
            expected: "a half-line",
            found: class,
        });
    }
    let order = m.germ.order();
    if order < 3 {
        return Err(Error::UnderResolved { needed: 3, have: order });
    }
    let chart = adapted_chart(m)?;
    let (g2, g3) = (chart.germ.component(1), chart.germ.component(2));
    Ok(FoldNormalForm {
        a0_0: 2.0 * g2.coeff(2, 0),
        b0_0: 2.0 * g3.coeff(2, 0),
        b1_0: 2.0 * g3.coeff(2, 1),
        a2_00: 2.0 * g2.coeff(0, 2),
        chart,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn germ(order: usize, comps: [&[(usize, usize, f64)]; 3]) -> MapGerm {
        let p = |t: &[(usize, usize, f64)]| TruncatedPoly2::from_terms(order, t.iter().copied()).unwrap();
        MapGerm::new([p(comps[0]), p(comps[1]), p(comps[2])]).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn corank_examples() {
        let tol = Tolerance::default();
        assert_eq!(corank_at_origin(&germ(3, [&[(1, 0, 1.0)], &[(0, 1, 1.0)], &[]]), &tol), 0);
        assert_eq!(corank_at_origin(&germ(3, [&[(1, 0, 1.0)], &[(0, 2, 1.0)], &[(1, 1, 1.0)]]), &tol), 1);
        assert_eq!(corank_at_origin(&germ(3, [&[(2, 0, 1.0)], &[(0, 2, 1.0)], &[(1, 1, 1.0)]]), &tol), 2);
    }

    #[test]
    fn monge_coefficients_of_examples() {
        let tol = Tolerance::default();
        let f = germ(5, [&[(1, 0, 1.0)], &[(2, 0, 1.0), (0, 2, 1.0)], &[(2, 0, 2.0), (1, 1, 1.0)]]);
        let m = to_monge_form(&f, &tol).unwrap();
        let got = [m.a20, m.a11, m.a02, m.b20, m.b11, m.b02];
        for (g, e) in got.iter().zip([2.0, 0.0, 2.0, 4.0, 1.0, 0.0]) {
            assert!(close(*g, e), "{got:?}");
        }

        let f = germ(5, [&[(1, 0, 1.0)], &[(2, 0, 1.5), (0, 2, 1.0)], &[(2, 0, 2.5), (0, 3, 1.0)]]);
        let m = to_monge_form(&f, &tol).unwrap();
        let got = [m.a20, m.a11, m.a02, m.b20, m.b11, m.b02];
        for (g, e) in got.iter().zip([3.0, 0.0, 2.0, 5.0, 0.0, 0.0]) {
            assert!(close(*g, e), "{got:?}");
        }
    }

    #[test]
    fn monge_rejects_wrong_corank() {
        let tol = Tolerance::default();
        let regular = germ(3, [&[(1, 0, 1.0)], &[(0, 1, 1.0)], &[]]);
        assert_eq!(to_monge_form(&regular, &tol), Err(Error::Corank(0)));
        let flat = germ(3, [&[(2, 0, 1.0)], &[(0, 2, 1.0)], &[]]);
        assert_eq!(to_monge_form(&flat, &tol), Err(Error::Corank(2)));
    }

    #[test]
    fn monge_of_tilted_germ() {
        // Kernel along (1, 1)/√2 and image of the other direction off-axis.
        let tol = Tolerance::default();
        let f = germ(
            4,
            [
                &[(1, 0, 1.0), (0, 1, -1.0), (2, 0, 0.3)],
                &[(1, 0, 2.0), (0, 1, -2.0), (0, 2, 1.0)],
                &[(1, 1, 1.0), (0, 3, 0.5)],
            ],
        );
        let m = to_monge_form(&f, &tol).unwrap();
        assert_eq!(m.germ.component(0), &TruncatedPoly2::u(4));
        for k in 1..3 {
            let c = m.germ.component(k);
            assert!(c.coeff(1, 0).abs() < 1e-10 && c.coeff(0, 1).abs() < 1e-10);
        }
        // g = R (f ∘ s) must hold on the retained jet.
        let back = f.compose(&m.source).unwrap().rotate(&m.rotation);
        for k in 0..3 {
            for d in 0..=4 {
                for j in 0..=d {
                    let (a, b) = (back.component(k).coeff(d - j, j), m.germ.component(k).coeff(d - j, j));
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn classification_examples() {
        let tol = Tolerance::default();
        let cls = |f: MapGerm| classify_2jet(&to_monge_form(&f, &tol).unwrap());
        let u: &[_] = &[(1, 0, 1.0)];
        assert_eq!(cls(germ(3, [u, &[(0, 2, 1.0)], &[(1, 1, 1.0)]])), ParabolaClass::NonDegenerate);
        assert_eq!(cls(germ(3, [u, &[(0, 2, 1.0)], &[]])), ParabolaClass::HalfLine);
        assert_eq!(cls(germ(3, [u, &[(1, 1, 1.0)], &[]])), ParabolaClass::Line);
        assert_eq!(cls(germ(3, [u, &[(2, 0, 1.0)], &[(0, 3, 1.0)]])), ParabolaClass::PointNonOrigin);
        assert_eq!(cls(germ(3, [u, &[], &[]])), ParabolaClass::PointOrigin);
    }

    #[test]
    fn fold_normal_form_of_model() {
        let tol = Tolerance::default();
        let f = germ(5, [&[(1, 0, 1.0)], &[(2, 0, 0.5), (0, 2, 0.5)], &[(2, 1, 0.5)]]);
        let fnf = fold_normal_form(&to_monge_form(&f, &tol).unwrap()).unwrap();
        assert!(close(fnf.a0_0, 1.0) && close(fnf.b0_0, 0.0) && close(fnf.b1_0, 1.0) && close(fnf.a2_00, 1.0));
    }

    #[test]
    fn fold_normal_form_of_cuspidal_edge() {
        let tol = Tolerance::default();
        let (a20, b20) = (3.0, 5.0);
        let f = germ(5, [&[(1, 0, 1.0)], &[(2, 0, a20 / 2.0), (0, 2, 1.0)], &[(2, 0, b20 / 2.0), (0, 3, 1.0)]]);
        let fnf = fold_normal_form(&to_monge_form(&f, &tol).unwrap()).unwrap();
        assert!(close(fnf.b1_0, 0.0));
        assert!(close(fnf.a0_0, a20) && close(fnf.b0_0, b20) && close(fnf.a2_00, 1.0));
        let g = fnf.germ();
        assert!(g.component(1).coeff(1, 1).abs() < 1e-12);
        assert!(g.component(2).coeff(0, 2).abs() < 1e-12);
    }

    #[test]
    fn fold_normal_form_preconditions() {
        let tol = Tolerance::default();
        let cc = germ(3, [&[(1, 0, 1.0)], &[(0, 2, 1.0)], &[(1, 1, 1.0)]]);
        let m = to_monge_form(&cc, &tol).unwrap();
        assert!(matches!(fold_normal_form(&m), Err(Error::ClassMismatch { .. })));
        let low = germ(2, [&[(1, 0, 1.0)], &[(0, 2, 1.0)], &[]]);
        let m = to_monge_form(&low, &tol).unwrap();
        assert_eq!(fold_normal_form(&m).unwrap_err(), Error::UnderResolved { needed: 3, have: 2 });
    }

    #[test]
    fn fold_chart_removes_mixed_terms() {
        let tol = Tolerance::default();
        let f = germ(
            5,
            [&[(1, 0, 1.0)], &[(2, 0, 0.7), (1, 1, 0.4), (0, 2, 1.3), (2, 1, -0.6), (3, 1, 0.2)], &[(2, 1, 0.9), (1, 2, 0.3)]],
        );
        let fnf = fold_normal_form(&to_monge_form(&f, &tol).unwrap()).unwrap();
        let g2 = fnf.germ().component(1);
        for k in 0..4 {
            assert!(g2.coeff(k, 1).abs() < 1e-12, "u^{k}v: {}", g2.coeff(k, 1));
        }
        assert!(close(fnf.a2_00, 1.0));
    }
}
