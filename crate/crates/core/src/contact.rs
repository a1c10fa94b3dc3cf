//! Contact of the surface with the plane orthogonal to the axial vector.
//!
//! Most quantities are read in the adapted chart of [`adapted_chart`], where
//! `f_u = e1`, `f_vv = e2 = v_a` and the height function `h = ⟨f, v_a⟩` is the
//! second component.

use nalgebra::{Matrix2, Vector3};

use crate::error::{Error, Result};
use crate::invariants::{frontality_of_monge, kappa_a_monge};
use crate::jet::{newton_v, MapGerm, TruncatedPoly2, Var};
use crate::normalize::{adapted_chart, classify_2jet, to_monge_form, AdaptedChart, MongeData, ParabolaClass};
use crate::parabola::{asymptotic_directions, AxialFrame, CurvatureParabola};
use crate::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightType {
    A1Plus,
    A1Minus,
    A2,
    AAtLeast3,
    Corank2,
}

impl HeightType {
    pub fn name(self) -> &'static str {
        match self {
            HeightType::A1Plus => "A1Plus",
            HeightType::A1Minus => "A1Minus",
            HeightType::A2 => "A2",
            HeightType::AAtLeast3 => "AAtLeast3",
            HeightType::Corank2 => "Corank2",
        }
    }
}

/// `h = ⟨g, v_a⟩` on the Monge germ `g`, with `v_a` lifted to `(0, v_a)`.
pub fn height_jet(m: &MongeData, frame: &AxialFrame) -> Result<TruncatedPoly2> {
    if !frame.defined {
        return Err(Error::FrameUndefined);
    }
    let g = &m.germ;
    Ok(&g.component(1).scale(frame.v_a.x) + &g.component(2).scale(frame.v_a.y))
}

/// Hessian of a jet at the origin.
pub fn hessian(h: &TruncatedPoly2) -> Matrix2<f64> {
    let huv = h.coeff(1, 1);
    Matrix2::new(2.0 * h.coeff(2, 0), huv, huv, 2.0 * h.coeff(0, 2))
}

/// Third-order quantity deciding `A2` once the Hessian is degenerate, read
/// in the adapted chart where `h_vv = 1`.
pub fn a2_quantity(chart: &AdaptedChart) -> f64 {
    let h = chart.germ.component(1);
    let m = h.coeff(1, 1);
    let (uuu, uuv, uvv, vvv) = (
        h.derivative_at_origin(3, 0),
        h.derivative_at_origin(2, 1),
        h.derivative_at_origin(1, 2),
        h.derivative_at_origin(0, 3),
    );
    -uuu + 3.0 * uuv * m - 3.0 * uvv * m * m + vvv * m.powi(3)
}

pub fn height_type(f: &MapGerm, tol: &Tolerance) -> Result<HeightType> {
    height_type_of_monge(&to_monge_form(f, tol)?)
}

pub fn height_type_of_monge(m: &MongeData) -> Result<HeightType> {
    let class = classify_2jet(m);
    match class {
        ParabolaClass::Line => Err(Error::ClassMismatch {
            operation: "height type",
            expected: "a parabola that is not a line",
            found: class,
        }),
        ParabolaClass::PointNonOrigin | ParabolaClass::PointOrigin => Ok(HeightType::Corank2),
        ParabolaClass::NonDegenerate | ParabolaClass::HalfLine => {
            let k = kappa_a_monge(m).value().expect("finite on classes with a vertex");
            if k > m.tau {
                return Ok(HeightType::A1Plus);
            }
            if k < -m.tau {
                return Ok(HeightType::A1Minus);
            }
            if m.germ.order() < 3 {
                return Err(Error::UnderResolved {
                    needed: 3,
                    have: m.germ.order(),
                });
            }
            let q = a2_quantity(&adapted_chart(m)?);
            Ok(if q.abs() > m.tau {
                HeightType::A2
            } else {
                HeightType::AAtLeast3
            })
        }
    }
}

/// Whether the surface lies locally on one side of `v_a^⊥`.
pub fn one_side_test(ht: HeightType) -> bool {
    ht == HeightType::A1Plus
}

/// Whether `v_a` is a binormal direction: some asymptotic direction `y`
/// has `η(y) ⟂ v_a` with `y` critical for `⟨η, v_a⟩`, or the parabola is a
/// point.
pub fn binormal_check(cp: &CurvatureParabola, frame: &AxialFrame) -> Result<bool> {
    match cp.class {
        ParabolaClass::Line => Err(Error::ClassMismatch {
            operation: "binormal check",
            expected: "a parabola that is not a line",
            found: cp.class,
        }),
        ParabolaClass::PointNonOrigin | ParabolaClass::PointOrigin => Ok(true),
        _ => {
            let set = asymptotic_directions(cp);
            let mut candidates: Vec<f64> = set.finite().to_vec();
            candidates.extend(cp.vertex());
            Ok(candidates.into_iter().any(|y| {
                let k = cp.eval(y).dot(&frame.v_a);
                let dk = cp.derivative(y).dot(&frame.v_a);
                k.abs() <= cp.tau && dk.abs() <= 1e3 * cp.tau * (1.0 + y.abs())
            }))
        }
    }
}

/// Position of the two intersection curves inside `v_a^⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchRelation {
    SameHalfPlane,
    OppositeHalfPlanes,
    ContainsLine,
    InflectionContact,
    TangentExtrema,
}

impl BranchRelation {
    pub fn name(self) -> &'static str {
        match self {
            BranchRelation::SameHalfPlane => "SameHalfPlane",
            BranchRelation::OppositeHalfPlanes => "OppositeHalfPlanes",
            BranchRelation::ContainsLine => "ContainsLine",
            BranchRelation::InflectionContact => "InflectionContact",
            BranchRelation::TangentExtrema => "TangentExtrema",
        }
    }
}

/// Side of the tangent line read from the leading terms of the curves
/// `z(x)` along each branch, for `x` of either sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideRelation {
    Same,
    Opposite,
    /// Same side for one sign of `x`, opposite for the other.
    Mixed,
    /// A branch is flat to the retained order or not a graph over the
    /// tangent line.
    Flat,
}

impl SideRelation {
    pub fn name(self) -> &'static str {
        match self {
            SideRelation::Same => "Same",
            SideRelation::Opposite => "Opposite",
            SideRelation::Mixed => "Mixed",
            SideRelation::Flat => "Flat",
        }
    }
}

/// How the branches of `h = 0` are parameterized in the chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchForm {
    /// `v = c(u)`.
    VOfU,
    /// `u = c(v)`.
    UOfV,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    /// Slope `c'(0)` in the chart with `v` measured in Monge units.
    pub slope: f64,
    /// `c(t)` in the chart's own coordinates, meaningful below the jet order.
    pub series: TruncatedPoly2,
    /// `z(t)`, the `ν2` coordinate of the image curve.
    pub normal_profile: TruncatedPoly2,
    /// Points `(t, f)` in the input's ambient coordinates, refined onto `h = 0`.
    pub samples: Vec<(f64, Vector3<f64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionBranches {
    pub form: BranchForm,
    /// Branch 1 carries the `+` root, branch 2 the `−` root.
    pub branches: [Branch; 2],
    pub relation: BranchRelation,
    pub side: SideRelation,
    pub class: ParabolaClass,
    pub kappa_a: f64,
}

impl IntersectionBranches {
    pub fn slopes(&self) -> [f64; 2] {
        [self.branches[0].slope, self.branches[1].slope]
    }
}

/// Drops the constant term and divides a series in `u` by `u`.
fn div_u(p: &TruncatedPoly2) -> TruncatedPoly2 {
    let n = p.order();
    let mut out = TruncatedPoly2::zero(n);
    for k in 1..=n {
        out.set_coeff(k - 1, 0, p.coeff(k, 0));
    }
    out
}

/// Solves `h(x, c(x)) = 0` for `c` with `c'(0) = slope`, a simple root of
/// the tangent-cone quadratic.
fn branch_series(h: &TruncatedPoly2, slope: f64) -> Result<TruncatedPoly2> {
    let n = h.order();
    let d = h.coeff(1, 1) + 2.0 * h.coeff(0, 2) * slope;
    if d == 0.0 {
        return Err(Error::Degenerate("tangent branches"));
    }
    let x = TruncatedPoly2::u(n);
    let mut c = x.scale(slope);
    for _ in 0..=n {
        let r = h.substitute(&x, &c)?;
        c = &c - &div_u(&r).scale(1.0 / d);
        c.set_coeff(0, 0, 0.0);
    }
    Ok(c.truncated(n.saturating_sub(1)))
}

/// Leading term `(degree, coefficient)` of a series in `u` above `eps`.
fn leading(p: &TruncatedPoly2, eps: f64) -> Option<(usize, f64)> {
    (1..=p.order()).map(|k| (k, p.coeff(k, 0))).find(|&(_, c)| c.abs() > eps)
}

fn side_relation(profiles: [(&TruncatedPoly2, f64); 2], eps: f64) -> SideRelation {
    // Each profile is z(t) with x(t) ≈ slope_x · t; sign of z at ±x.
    let mut signs = [[0i8; 2]; 2];
    for (b, (z, x_rate)) in profiles.iter().enumerate() {
        let Some((k, c)) = leading(z, eps) else {
            return SideRelation::Flat;
        };
        if x_rate.abs() <= eps {
            return SideRelation::Flat;
        }
        for (s, x_sign) in [1.0f64, -1.0].into_iter().enumerate() {
            let t_sign = x_sign * x_rate.signum();
            signs[b][s] = (c * t_sign.powi(k as i32)).signum() as i8;
        }
    }
    match (signs[0][0] == signs[1][0], signs[0][1] == signs[1][1]) {
        (true, true) => SideRelation::Same,
        (false, false) => SideRelation::Opposite,
        _ => SideRelation::Mixed,
    }
}

/// Determinant `det(f_u, f_uu, f_vv)` in the chart.
pub fn det_fu_fuu_fvv(chart: &AdaptedChart) -> f64 {
    let g = &chart.germ;
    g.partial(1, 0).dot(&g.partial(2, 0).cross(&g.partial(0, 2)))
}

/// Curves cut out of the surface by `v_a^⊥` when `h_{v_a}` is `A1⁻`.
pub fn intersection_branches(f: &MapGerm, n: usize, t_max: f64, tol: &Tolerance) -> Result<IntersectionBranches> {
    intersection_branches_of_monge(&to_monge_form(f, tol)?, n, t_max)
}

pub fn intersection_branches_of_monge(m: &MongeData, n: usize, t_max: f64) -> Result<IntersectionBranches> {
    let chart = adapted_chart(m)?;
    let kappa = kappa_a_monge(m).value().expect("finite on classes with a vertex");
    if kappa >= -m.tau {
        return Err(Error::NoTransversalZeroSet(kappa));
    }
    let h = chart.germ.component(1);
    let (huu, huv, hvv) = (2.0 * h.coeff(2, 0), h.coeff(1, 1), 2.0 * h.coeff(0, 2));
    let root = (huv * huv - huu * hvv).sqrt();
    let rt_n = chart.normal_scale.sqrt();

    let form = if hvv.abs() >= huu.abs() {
        BranchForm::VOfU
    } else {
        BranchForm::UOfV
    };
    // Equation in (parameter, dependent) order.
    let eq = match form {
        BranchForm::VOfU => h.clone(),
        BranchForm::UOfV => h.swap_vars(),
    };
    let order = h.order();
    let t = TruncatedPoly2::u(order);
    let eq_y = eq.diff(Var::V);
    let g3 = chart.germ.component(2);

    let mut branches = Vec::with_capacity(2);
    for sign in [1.0, -1.0] {
        let (slope_chart, param_scale, slope_report) = match form {
            BranchForm::VOfU => {
                let s = (-huv + sign * root) / hvv;
                (s, 1.0, s / rt_n)
            }
            BranchForm::UOfV => {
                let s = (-huv + sign * root) / huu;
                (s, rt_n, s * rt_n)
            }
        };
        let series = branch_series(&eq, slope_chart)?;
        let (us, vs) = match form {
            BranchForm::VOfU => (t.clone(), series.clone()),
            BranchForm::UOfV => (series.clone(), t.clone()),
        };
        let profile = g3.substitute(&us, &vs)?.truncated(order.saturating_sub(1));
        let samples = (0..n)
            .map(|i| {
                let tt = if n > 1 {
                    -t_max + 2.0 * t_max * i as f64 / (n - 1) as f64
                } else {
                    0.0
                };
                // The sample parameter is in Monge units; the chart's v is scaled.
                let p = tt * param_scale;
                let c = newton_v(&eq, &eq_y, p, series.eval(p, 0.0));
                let (u, v) = match form {
                    BranchForm::VOfU => (p, c),
                    BranchForm::UOfV => (c, p),
                };
                (tt, chart.to_input(&chart.germ.eval(u, v)))
            })
            .collect();
        branches.push(Branch {
            slope: slope_report,
            series,
            normal_profile: profile,
            samples,
        });
    }
    let branches: [Branch; 2] = branches.try_into().expect("two branches");

    let x_rates = match form {
        BranchForm::VOfU => [1.0, 1.0],
        BranchForm::UOfV => [branches[0].series.coeff(1, 0), branches[1].series.coeff(1, 0)],
    };
    let side = side_relation(
        [(&branches[0].normal_profile, x_rates[0]), (&branches[1].normal_profile, x_rates[1])],
        m.tau,
    );
    let class = chart.class;
    let relation = match class {
        ParabolaClass::NonDegenerate => {
            let s = huu * hvv;
            if huu.abs() <= m.tau {
                BranchRelation::ContainsLine
            } else if s > 0.0 {
                BranchRelation::SameHalfPlane
            } else {
                BranchRelation::OppositeHalfPlanes
            }
        }
        _ => {
            if det_fu_fuu_fvv(&chart).abs() > m.tau {
                BranchRelation::TangentExtrema
            } else {
                BranchRelation::InflectionContact
            }
        }
    };
    Ok(IntersectionBranches {
        form,
        branches,
        relation,
        side,
        class,
        kappa_a: kappa,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossCapType {
    EllipticCC,
    HyperbolicCC,
    ParabolicCC,
}

impl CrossCapType {
    pub fn name(self) -> &'static str {
        match self {
            CrossCapType::EllipticCC => "EllipticCC",
            CrossCapType::HyperbolicCC => "HyperbolicCC",
            CrossCapType::ParabolicCC => "ParabolicCC",
        }
    }
}

/// Sign of `⟨f_uu, f_vv⟩` in the chart where the third component is `uv`
/// plus terms of order three.
pub fn crosscap_type(f: &MapGerm, tol: &Tolerance) -> Result<CrossCapType> {
    crosscap_type_of_monge(&to_monge_form(f, tol)?)
}

pub fn crosscap_type_of_monge(m: &MongeData) -> Result<CrossCapType> {
    let class = classify_2jet(m);
    if class != ParabolaClass::NonDegenerate {
        return Err(Error::ClassMismatch {
            operation: "cross-cap type",
            expected: "a non-degenerate parabola",
            found: class,
        });
    }
    let chart = adapted_chart(m)?;
    let g = &chart.germ;
    let s = g.partial(2, 0).dot(&g.partial(0, 2));
    Ok(if s.abs() <= m.tau {
        CrossCapType::ParabolicCC
    } else if s > 0.0 {
        CrossCapType::EllipticCC
    } else {
        CrossCapType::HyperbolicCC
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuspidalContactKind {
    /// Hyperbolic point: both curves have an extremum at the origin.
    TangentExtrema,
    /// Inflection point.
    InflectionContact,
}

impl CuspidalContactKind {
    pub fn name(self) -> &'static str {
        match self {
            CuspidalContactKind::TangentExtrema => "TangentExtrema",
            CuspidalContactKind::InflectionContact => "InflectionContact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspidalContact {
    pub kind: CuspidalContactKind,
    /// `det(f_u, f_uu, f_vv)` in the chart.
    pub det: f64,
    /// `(a±)'''(0)` for the `+` and `−` branches.
    pub a_triple_prime: [f64; 2],
}

/// Contact of a frontal fold (e.g. a cuspidal edge) with `v_a^⊥`.
pub fn cuspidal_edge_contact(f: &MapGerm, tol: &Tolerance) -> Result<CuspidalContact> {
    cuspidal_edge_contact_of_monge(&to_monge_form(f, tol)?)
}

pub fn cuspidal_edge_contact_of_monge(m: &MongeData) -> Result<CuspidalContact> {
    let class = classify_2jet(m);
    if class != ParabolaClass::HalfLine {
        return Err(Error::ClassMismatch {
            operation: "cuspidal edge contact",
            expected: "a half-line",
            found: class,
        });
    }
    if m.germ.order() < 3 {
        return Err(Error::UnderResolved {
            needed: 3,
            have: m.germ.order(),
        });
    }
    if !frontality_of_monge(m)?.is_frontal {
        return Err(Error::NotFrontal);
    }
    let kappa = kappa_a_monge(m).value().expect("finite on half-lines");
    if kappa >= -m.tau {
        return Err(Error::NoTransversalZeroSet(kappa));
    }
    let chart = adapted_chart(m)?;
    let g = &chart.germ;
    let h = g.component(1);
    let (huu, huv) = (2.0 * h.coeff(2, 0), h.coeff(1, 1));
    let root = (huv * huv - huu).sqrt();
    let (fu, fvv) = (g.partial(1, 0), g.partial(0, 2));
    let third = |c: f64| {
        let x = g.partial(3, 0) + g.partial(2, 1) * (3.0 * c) + g.partial(1, 2) * (3.0 * c * c) + g.partial(0, 3) * c.powi(3);
        fu.dot(&x.cross(&fvv))
    };
    let det = det_fu_fuu_fvv(&chart);
    Ok(CuspidalContact {
        kind: if det.abs() > m.tau {
            CuspidalContactKind::TangentExtrema
        } else {
            CuspidalContactKind::InflectionContact
        },
        det,
        a_triple_prime: [third(-huv + root), third(-huv - root)],
    })
}
