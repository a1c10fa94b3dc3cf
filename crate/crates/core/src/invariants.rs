//! Axial, umbilic and singular curvature, and the frontality test for folds.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::jet::{implicit_v, MapGerm, TruncatedPoly2, Var};
use crate::normalize::{classify_2jet, fold_normal_form, to_monge_form, MongeData, ParabolaClass};
use crate::parabola::{AxialFrame, CurvatureParabola};
use crate::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurvatureValue {
    Finite(f64),
    /// The projection onto the axial vector has no minimum.
    Unbounded,
    /// The parabola is a point, where the axial curvature is 0 by definition.
    ZeroByDefinition,
    /// The quantity is not defined for this class.
    Undefined,
}

impl CurvatureValue {
    /// Numeric value, with `ZeroByDefinition` read as 0.
    pub fn value(self) -> Option<f64> {
        match self {
            CurvatureValue::Finite(x) => Some(x),
            CurvatureValue::ZeroByDefinition => Some(0.0),
            _ => None,
        }
    }

    pub fn kind(self) -> &'static str {
        match self {
            CurvatureValue::Finite(_) => "Finite",
            CurvatureValue::Unbounded => "Unbounded",
            CurvatureValue::ZeroByDefinition => "ZeroByDefinition",
            CurvatureValue::Undefined => "Undefined",
        }
    }
}

fn non_finite_value(class: ParabolaClass) -> CurvatureValue {
    match class {
        ParabolaClass::Line => CurvatureValue::Unbounded,
        _ => CurvatureValue::ZeroByDefinition,
    }
}

/// Closed form in the Monge coefficients.
pub fn kappa_a_monge(m: &MongeData) -> CurvatureValue {
    let class = classify_2jet(m);
    if !class.has_vertex() {
        return non_finite_value(class);
    }
    let n2 = m.a02 * m.a02 + m.b02 * m.b02;
    let p = m.a20 * m.a02 + m.b20 * m.b02;
    let q = m.a11 * m.a02 + m.b11 * m.b02;
    CurvatureValue::Finite((p - q * q / n2) / n2.sqrt())
}

/// Checks `f_v(0) = 0 ≠ f_u(0)` and returns `τ` for the germ.
fn kernel_aligned(f: &MapGerm, tol: &Tolerance) -> Result<f64> {
    let tau = tol.tau(f.two_jet_scale());
    if f.partial(0, 1).norm() > tau || f.partial(1, 0).norm() <= tau {
        return Err(Error::KernelNotAligned);
    }
    Ok(tau)
}

/// Class of the parabola read from `f_vv^⊥` and `f_uv^⊥` in coordinates
/// with `f_v(0) = 0`. Only the cases `has_vertex`, line and point matter.
fn local_class(f: &MapGerm, tau: f64) -> ParabolaClass {
    let fu = f.partial(1, 0).normalize();
    let perp = |x: Vector3<f64>| x - fu * fu.dot(&x);
    if perp(f.partial(0, 2)).norm() > tau {
        ParabolaClass::HalfLine
    } else if perp(f.partial(1, 1)).norm() > tau {
        ParabolaClass::Line
    } else {
        ParabolaClass::PointNonOrigin
    }
}

/// Coordinate-free formula in `f_u, f_uu, f_uv, f_vv` for any coordinates
/// with `f_v(0) = 0`.
pub fn kappa_a_general(f: &MapGerm, tol: &Tolerance) -> Result<CurvatureValue> {
    let tau = kernel_aligned(f, tol)?;
    let class = local_class(f, tau);
    if !class.has_vertex() {
        return Ok(non_finite_value(class));
    }
    let (fu, fuu, fuv, fvv) = (f.partial(1, 0), f.partial(2, 0), f.partial(1, 1), f.partial(0, 2));
    let e = fu.dot(&fu);
    let u_vv = fu.dot(&fvv);
    let first = (fu.dot(&fuu) * u_vv - e * fuu.dot(&fvv)) * (u_vv * u_vv - e * fvv.dot(&fvv));
    let second = fu.dot(&fuv) * u_vv - e * fuv.dot(&fvv);
    let denom = (e * (e * fvv.dot(&fvv) - u_vv * u_vv)).powf(1.5);
    Ok(CurvatureValue::Finite((first - second * second) / denom))
}

/// Formula in the first fundamental form `E, F, G` and its derivatives.
pub fn kappa_a_intrinsic(f: &MapGerm, tol: &Tolerance) -> Result<CurvatureValue> {
    let tau = kernel_aligned(f, tol)?;
    let jet = f.as_jet();
    let (fu, fv) = (jet.diff(Var::U), jet.diff(Var::V));
    let e = fu.dot(&fu);
    let ff = fu.dot(&fv);
    let g = fv.dot(&fv);
    let e0 = e.coeff(0, 0);
    let e_u = e.derivative_at_origin(1, 0);
    let e_v = e.derivative_at_origin(0, 1);
    let e_vv = e.derivative_at_origin(0, 2);
    let f_v = ff.derivative_at_origin(0, 1);
    let f_uv = ff.derivative_at_origin(1, 1);
    let g_uv = g.derivative_at_origin(1, 1);
    let g_vv = g.derivative_at_origin(0, 2);

    let inner = e0 * g_vv / 2.0 - f_v * f_v;
    if e0 * inner <= tau {
        return Err(Error::Degenerate("degenerate second-order data"));
    }
    let first = (e_u / 2.0 * f_v - e0 * (f_uv - e_vv / 2.0)) * (f_v * f_v - e0 * g_vv / 2.0);
    let second = e_v / 2.0 * f_v - e0 * g_uv / 2.0;
    Ok(CurvatureValue::Finite((first - second * second) / (e0 * inner).powf(1.5)))
}

/// Default half-width of the oracle's search window.
const ORACLE_WINDOW: f64 = 1e3;
const ORACLE_SAMPLES: usize = 20_001;
const GOLDEN_TOL: f64 = 1e-10;

/// Minimizes `K(y) = ⟨η(y), v_a⟩` numerically, independent of any closed form.
pub fn kappa_a_oracle(cp: &CurvatureParabola, frame: &AxialFrame) -> CurvatureValue {
    if !frame.defined {
        return CurvatureValue::ZeroByDefinition;
    }
    let k = |y: f64| cp.eval(y).dot(&frame.v_a);
    let mut half = ORACLE_WINDOW;
    if let Some(y0) = cp.vertex() {
        if y0.abs() > 1e2 {
            half = half.max(10.0 * y0.abs());
        }
    }
    let step = 2.0 * half / (ORACLE_SAMPLES - 1) as f64;
    let ys = |i: usize| -half + step * i as f64;
    let (imin, kmin) = (0..ORACLE_SAMPLES)
        .map(|i| (i, k(ys(i))))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });

    if imin == 0 || imin == ORACLE_SAMPLES - 1 {
        let edge = ys(imin);
        let beyond = k(2.0 * edge);
        if beyond < kmin - 1e-12 * (1.0 + kmin.abs()) {
            return CurvatureValue::Unbounded;
        }
    }
    let lo = ys(imin.saturating_sub(1));
    let hi = ys((imin + 1).min(ORACLE_SAMPLES - 1));
    CurvatureValue::Finite(k(golden_section(k, lo, hi, GOLDEN_TOL)))
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Signed projection `⟨η, ν2⟩`; constant along a degenerate parabola.
pub fn umbilic_signed(cp: &CurvatureParabola, frame: &AxialFrame) -> f64 {
    cp.eval(0.0).dot(&frame.nu2)
}

pub fn kappa_u(cp: &CurvatureParabola, frame: &AxialFrame) -> CurvatureValue {
    match cp.class {
        ParabolaClass::NonDegenerate => CurvatureValue::Undefined,
        ParabolaClass::PointOrigin => CurvatureValue::Finite(0.0),
        _ => {
            let base = umbilic_signed(cp, frame);
            debug_assert!([-1.0, 1.0, 2.0].iter().all(|&y| {
                let drift = (cp.eval(y).dot(&frame.nu2) - base).abs();
                drift <= 1e3 * cp.tau * (1.0 + y * y)
            }));
            CurvatureValue::Finite(base.abs())
        }
    }
}

/// Singular curvature at the origin of a frontal in adapted coordinates:
/// the `u`-axis is the singular curve and `∂_v` the null direction.
pub fn kappa_s_frontal(f: &MapGerm, tol: &Tolerance) -> Result<CurvatureValue> {
    let tau = kernel_aligned(f, tol)?;
    if !frontality(f, tol)?.is_frontal {
        return Err(Error::NotFrontal);
    }
    let order = f.order();
    for c in f.components() {
        if (0..order).any(|i| c.coeff(i, 1).abs() > tau) {
            return Err(Error::NotAdapted("the v-derivative must vanish along the u-axis"));
        }
    }
    let (fu, fuu, fvv) = (f.partial(1, 0), f.partial(2, 0), f.partial(0, 2));
    let normal = fu.cross(&fvv);
    if normal.norm() <= tau {
        return Err(Error::Degenerate("degenerate singular point"));
    }
    let nu = normal.normalize();
    let jet = f.as_jet();
    let lambda = jet.diff(Var::U).cross(&jet.diff(Var::V)).dot_const(&nu);
    let lambda_v = lambda.coeff(0, 1);
    if lambda_v.abs() <= tau {
        return Err(Error::Degenerate("degenerate singular point"));
    }
    let det = fu.dot(&fuu.cross(&nu));
    Ok(CurvatureValue::Finite(lambda_v.signum() * det / fu.norm().powi(3)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontalityReport {
    pub is_frontal: bool,
    /// `(f_d)_v(u, v(u))` as a series in `u`, meaningful through `certified_order`.
    pub obstruction_series: TruncatedPoly2,
    /// `b_1(0)` of the fold normal form.
    pub kappa_f: f64,
    pub certified_order: usize,
}

/// Decides frontality of a fold to the germ's jet order.
///
/// In Monge form one component `f_c` has `(f_c)_vv(0) ≠ 0`, so
/// `(f_c)_v(u, v(u)) = 0` defines `v(u)`; the germ is a frontal iff the other
/// component satisfies `(f_d)_v(u, v(u)) = 0` as well.
pub fn frontality(f: &MapGerm, tol: &Tolerance) -> Result<FrontalityReport> {
    let m = to_monge_form(f, tol)?;
    let class = classify_2jet(&m);
    if class != ParabolaClass::HalfLine {
        return Err(Error::ClassMismatch {
            operation: "frontality",
            expected: "a half-line (fold 2-jet)",
            found: class,
        });
    }
    frontality_of_monge(&m)
}

pub fn frontality_of_monge(m: &MongeData) -> Result<FrontalityReport> {
    let g = &m.germ;
    let order = g.order();
    let (c, d) = if m.a02.abs() >= m.b02.abs() { (1, 2) } else { (2, 1) };
    if g.component(c).coeff(0, 2).abs() <= m.tau {
        return Err(Error::NotAFold);
    }
    let certified = order.saturating_sub(1);
    let v_of_u = implicit_v(&g.component(c).diff(Var::V))?.truncated(certified);
    let u = TruncatedPoly2::u(order);
    let obstruction = g.component(d).diff(Var::V).substitute(&u, &v_of_u)?.truncated(certified);
    let is_frontal = obstruction.terms().all(|(_, _, x)| x.abs() <= m.tau);
    let kappa_f = fold_normal_form(m)?.b1_0;
    Ok(FrontalityReport {
        is_frontal,
        obstruction_series: obstruction,
        kappa_f,
        certified_order: certified,
    })
}
