//! Truncated bivariate Taylor polynomials and the germs built from them.
//!
//! A [`TruncatedPoly2`] of order `N` stores every coefficient `c_ij` with
//! `i + j <= N` and silently drops anything of higher total degree. All
//! coordinate changes, derivatives and substitutions in the crate are carried
//! out on these jets, so results are exact on the retained band up to
//! floating-point rounding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix2, Matrix3, Vector3};

use crate::error::{Error, Result};

/// Default truncation order for germs built by the parser and the tests.
pub const DEFAULT_ORDER: usize = 5;

/// Source variable selector for partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U,
    V,
}

fn band_len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

fn slot(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Bivariate polynomial in `(u, v)` truncated at total degree `order`.
#[derive(Clone, PartialEq)]
pub struct TruncatedPoly2 {
    order: usize,
    coeffs: Vec<f64>,
}

impl TruncatedPoly2 {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![0.0; band_len(order)],
        }
    }

    pub fn constant(order: usize, c: f64) -> Self {
        let mut p = Self::zero(order);
        p.coeffs[0] = c;
        p
    }

    /// The coordinate function `u`.
    pub fn u(order: usize) -> Self {
        Self::monomial(order, 1, 0, 1.0)
    }

    /// The coordinate function `v`.
    pub fn v(order: usize) -> Self {
        Self::monomial(order, 0, 1, 1.0)
    }

    /// `c u^i v^j`, or zero when `i + j` exceeds the order.
    pub fn monomial(order: usize, i: usize, j: usize, c: f64) -> Self {
        let mut p = Self::zero(order);
        if i + j <= order {
            p.coeffs[slot(i, j)] = c;
        }
        p
    }

    /// Builds a polynomial from `(i, j, c)` terms, summing repeated exponents.
    /// Unlike arithmetic, construction refuses terms above the order.
    pub fn from_terms<I>(order: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut p = Self::zero(order);
        for (i, j, c) in terms {
            if i + j > order {
                return Err(Error::DegreeAboveOrder {
                    monomial: monomial_name(i, j),
                    degree: i + j,
                    order,
                });
            }
            p.coeffs[slot(i, j)] += c;
        }
        Ok(p)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `u^i v^j`; exactly zero outside the retained band.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j <= self.order {
            self.coeffs[slot(i, j)]
        } else {
            0.0
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: f64) {
        assert!(i + j <= self.order, "u^{i}v^{j} is above order {}", self.order);
        self.coeffs[slot(i, j)] = c;
    }

    /// All `(i, j, c)` with `c != 0`, ordered by total degree then by `j`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.order)
            .flat_map(|d| (0..=d).map(move |j| (d - j, j)))
            .map(|(i, j)| (i, j, self.coeff(i, j)))
            .filter(|&(_, _, c)| c != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Largest coefficient magnitude among terms of total degree `<= degree`.
    pub fn max_abs_up_to(&self, degree: usize) -> f64 {
        (0..=degree.min(self.order))
            .flat_map(|d| (0..=d).map(move |j| (d - j, j)))
            .map(|(i, j)| self.coeff(i, j).abs())
            .fold(0.0, f64::max)
    }

    /// `d^(i+j) p / du^i dv^j` at the origin.
    pub fn derivative_at_origin(&self, i: usize, j: usize) -> f64 {
        factorial(i) * factorial(j) * self.coeff(i, j)
    }

    /// Re-truncates (or pads) to a new order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut p = Self::zero(order);
        for (i, j, c) in self.terms() {
            if i + j <= order {
                p.coeffs[slot(i, j)] = c;
            }
        }
        p
    }

    /// Zeroes every term of total degree above `degree`, keeping the order.
    pub fn truncated(&self, degree: usize) -> Self {
        let mut p = self.clone();
        for d in (degree + 1)..=self.order {
            for j in 0..=d {
                p.coeffs[slot(d - j, j)] = 0.0;
            }
        }
        p
    }

    /// Exchanges the roles of `u` and `v`.
    pub fn swap_vars(&self) -> Self {
        let mut p = Self::zero(self.order);
        for (i, j, c) in self.terms() {
            p.coeffs[slot(j, i)] = c;
        }
        p
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Product truncated at the shared order.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order;
        let mut out = Self::zero(n);
        for (i1, j1, a) in self.terms() {
            for d2 in 0..=(n - i1 - j1) {
                for j2 in 0..=d2 {
                    let b = other.coeffs[slot(d2 - j2, j2)];
                    if b != 0.0 {
                        out.coeffs[slot(i1 + d2 - j2, j1 + j2)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Formal partial derivative. The result keeps the same order; its top
    /// band is zero, so it is only meaningful through degree `order - 1`.
    pub fn diff(&self, var: Var) -> Self {
        let mut out = Self::zero(self.order);
        for (i, j, c) in self.terms() {
            match var {
                Var::U if i > 0 => out.coeffs[slot(i - 1, j)] = c * i as f64,
                Var::V if j > 0 => out.coeffs[slot(i, j - 1)] = c * j as f64,
                _ => {}
            }
        }
        out
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        let n = self.order;
        let mut up = vec![1.0; n + 1];
        let mut vp = vec![1.0; n + 1];
        for k in 1..=n {
            up[k] = up[k - 1] * u;
            vp[k] = vp[k - 1] * v;
        }
        let mut s = 0.0;
        for d in 0..=n {
            for j in 0..=d {
                s += self.coeffs[slot(d - j, j)] * up[d - j] * vp[j];
            }
        }
        s
    }

    /// `p(x(u,v), y(u,v))` for substitutes with zero constant term. The
    /// substitutes need not form an invertible change of coordinates, which
    /// makes this the workhorse for restricting to curves `v = c(u)`.
    pub fn substitute(&self, x: &Self, y: &Self) -> Result<Self> {
        self.check_order(x)?;
        self.check_order(y)?;
        if x.coeff(0, 0) != 0.0 || y.coeff(0, 0) != 0.0 {
            return Err(Error::NonZeroConstant);
        }
        let n = self.order;
        let mut xp = vec![Self::constant(n, 1.0)];
        let mut yp = vec![Self::constant(n, 1.0)];
        for k in 1..=n {
            xp.push(&xp[k - 1] * x);
            yp.push(&yp[k - 1] * y);
        }
        let mut out = Self::zero(n);
        for (i, j, c) in self.terms() {
            out = &out + &(&xp[i] * &yp[j]).scale(c);
        }
        Ok(out)
    }

    /// Composition with a source change, `p ∘ s`.
    pub fn compose(&self, s: &SourceChange) -> Result<Self> {
        self.substitute(&s.x, &s.y)
    }
}

impl fmt::Debug for TruncatedPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedPoly2[{}](", self.order)?;
        let mut first = true;
        for (i, j, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}{}", monomial_name(i, j))?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

/// Human-readable monomial in the parser's notation, e.g. `u^2v`.
pub fn monomial_name(i: usize, j: usize) -> String {
    let mut s = String::new();
    match i {
        0 => {}
        1 => s.push('u'),
        _ => s.push_str(&format!("u^{i}")),
    }
    match j {
        0 => {}
        1 => s.push('v'),
        _ => s.push_str(&format!("v^{j}")),
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

// Operator forms are for internal use where orders are known to agree; they
// panic on mismatch. The `try_*` methods are the checked API.
impl Add for &TruncatedPoly2 {
    type Output = TruncatedPoly2;
    fn add(self, rhs: Self) -> TruncatedPoly2 {
        self.try_add(rhs).expect("order mismatch in polynomial sum")
    }
}

impl Sub for &TruncatedPoly2 {
    type Output = TruncatedPoly2;
    fn sub(self, rhs: Self) -> TruncatedPoly2 {
        self.try_sub(rhs).expect("order mismatch in polynomial difference")
    }
}

impl Mul for &TruncatedPoly2 {
    type Output = TruncatedPoly2;
    fn mul(self, rhs: Self) -> TruncatedPoly2 {
        self.try_mul(rhs).expect("order mismatch in polynomial product")
    }
}

impl Neg for &TruncatedPoly2 {
    type Output = TruncatedPoly2;
    fn neg(self) -> TruncatedPoly2 {
        self.scale(-1.0)
    }
}

/// Three jets of a common order, i.e. a vector-valued jet. Derivatives of a
/// germ live here since they need not vanish at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct JetVector3(pub [TruncatedPoly2; 3]);

impl JetVector3 {
    pub fn order(&self) -> usize {
        self.0[0].order()
    }

    pub fn diff(&self, var: Var) -> Self {
        Self(self.0.clone().map(|p| p.diff(var)))
    }

    pub fn eval(&self, u: f64, v: f64) -> Vector3<f64> {
        Vector3::new(self.0[0].eval(u, v), self.0[1].eval(u, v), self.0[2].eval(u, v))
    }

    pub fn at_origin(&self) -> Vector3<f64> {
        Vector3::new(self.0[0].coeff(0, 0), self.0[1].coeff(0, 0), self.0[2].coeff(0, 0))
    }

    pub fn dot(&self, other: &Self) -> TruncatedPoly2 {
        let p = &(&self.0[0] * &other.0[0]) + &(&self.0[1] * &other.0[1]);
        &p + &(&self.0[2] * &other.0[2])
    }

    pub fn cross(&self, other: &Self) -> Self {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &other.0;
        Self([
            &(a1 * b2) - &(a2 * b1),
            &(a2 * b0) - &(a0 * b2),
            &(a0 * b1) - &(a1 * b0),
        ])
    }

    /// Inner product with a constant vector.
    pub fn dot_const(&self, w: &Vector3<f64>) -> TruncatedPoly2 {
        let p = &self.0[0].scale(w.x) + &self.0[1].scale(w.y);
        &p + &self.0[2].scale(w.z)
    }
}

/// A map germ `f: (R^2, 0) -> (R^3, 0)` given by three jets.
#[derive(Clone, Debug, PartialEq)]
pub struct MapGerm {
    components: JetVector3,
}

impl MapGerm {
    pub fn new(components: [TruncatedPoly2; 3]) -> Result<Self> {
        let order = components[0].order();
        for p in &components[1..] {
            if p.order() != order {
                return Err(Error::OrderMismatch {
                    left: order,
                    right: p.order(),
                });
            }
        }
        for (k, p) in components.iter().enumerate() {
            let c = p.coeff(0, 0);
            if c != 0.0 {
                return Err(Error::NotOriginBased {
                    component: k + 1,
                    value: c,
                });
            }
        }
        Ok(Self {
            components: JetVector3(components),
        })
    }

    pub fn order(&self) -> usize {
        self.components.order()
    }

    pub fn component(&self, k: usize) -> &TruncatedPoly2 {
        &self.components.0[k]
    }

    pub fn components(&self) -> &[TruncatedPoly2; 3] {
        &self.components.0
    }

    pub fn as_jet(&self) -> &JetVector3 {
        &self.components
    }

    pub fn eval(&self, u: f64, v: f64) -> Vector3<f64> {
        self.components.eval(u, v)
    }

    /// `∂^(i+j) f / ∂u^i ∂v^j` at the origin.
    pub fn partial(&self, i: usize, j: usize) -> Vector3<f64> {
        Vector3::from_fn(|k, _| self.components.0[k].derivative_at_origin(i, j))
    }

    /// The 3x2 differential at the origin, columns `f_u`, `f_v`.
    pub fn differential(&self) -> nalgebra::Matrix3x2<f64> {
        nalgebra::Matrix3x2::from_columns(&[self.partial(1, 0), self.partial(0, 1)])
    }

    /// Largest 2-jet coefficient magnitude; the scale for degeneracy tests.
    pub fn two_jet_scale(&self) -> f64 {
        self.components.0.iter().map(|p| p.max_abs_up_to(2)).fold(0.0, f64::max)
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self {
            components: JetVector3(self.components.0.clone().map(|p| p.with_order(order))),
        }
    }

    pub fn compose(&self, s: &SourceChange) -> Result<Self> {
        let [a, b, c] = self.components();
        Self::new([a.compose(s)?, b.compose(s)?, c.compose(s)?])
    }

    pub fn rotate(&self, r: &TargetIsometry) -> Self {
        let m = r.matrix();
        let c = self.components();
        let row = |k: usize| {
            let p = &c[0].scale(m[(k, 0)]) + &c[1].scale(m[(k, 1)]);
            &p + &c[2].scale(m[(k, 2)])
        };
        Self {
            components: JetVector3([row(0), row(1), row(2)]),
        }
    }
}

/// Invertible change of source coordinates `(u, v) ↦ (x(u,v), y(u,v))`.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceChange {
    x: TruncatedPoly2,
    y: TruncatedPoly2,
}

/// Jacobians below this determinant are treated as singular.
const JACOBIAN_FLOOR: f64 = 1e-12;

impl SourceChange {
    pub fn new(x: TruncatedPoly2, y: TruncatedPoly2) -> Result<Self> {
        x.check_order(&y)?;
        if x.coeff(0, 0) != 0.0 || y.coeff(0, 0) != 0.0 {
            return Err(Error::NonZeroConstant);
        }
        let s = Self { x, y };
        let det = s.jacobian().determinant();
        if det.abs() <= JACOBIAN_FLOOR {
            return Err(Error::SingularJacobian { det });
        }
        Ok(s)
    }

    pub fn identity(order: usize) -> Self {
        Self {
            x: TruncatedPoly2::u(order),
            y: TruncatedPoly2::v(order),
        }
    }

    /// The linear change `(u, v) ↦ m · (u, v)`.
    pub fn linear(order: usize, m: Matrix2<f64>) -> Result<Self> {
        let u = TruncatedPoly2::u(order);
        let v = TruncatedPoly2::v(order);
        Self::new(
            &u.scale(m[(0, 0)]) + &v.scale(m[(0, 1)]),
            &u.scale(m[(1, 0)]) + &v.scale(m[(1, 1)]),
        )
    }

    pub fn order(&self) -> usize {
        self.x.order()
    }

    pub fn x(&self) -> &TruncatedPoly2 {
        &self.x
    }

    pub fn y(&self) -> &TruncatedPoly2 {
        &self.y
    }

    pub fn jacobian(&self) -> Matrix2<f64> {
        Matrix2::new(self.x.coeff(1, 0), self.x.coeff(0, 1), self.y.coeff(1, 0), self.y.coeff(0, 1))
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn after(&self, inner: &SourceChange) -> Result<Self> {
        Self::new(self.x.compose(inner)?, self.y.compose(inner)?)
    }

    /// Formal inverse on the retained jet. Writing the map as `L + R` with
    /// `L` linear, the inverse is the fixed point of `ψ = L⁻¹(id − R∘ψ)`;
    /// each sweep fixes one more degree, so `order` sweeps suffice.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order();
        let l = self.jacobian();
        let linv = l.try_inverse().ok_or(Error::SingularJacobian { det: l.determinant() })?;
        let lin = |a: &TruncatedPoly2, b: &TruncatedPoly2, m: &Matrix2<f64>| {
            (
                &a.scale(m[(0, 0)]) + &b.scale(m[(0, 1)]),
                &a.scale(m[(1, 0)]) + &b.scale(m[(1, 1)]),
            )
        };
        let (lx, ly) = lin(&TruncatedPoly2::u(n), &TruncatedPoly2::v(n), &l);
        let rx = &self.x - &lx;
        let ry = &self.y - &ly;
        let (mut px, mut py) = lin(&TruncatedPoly2::u(n), &TruncatedPoly2::v(n), &linv);
        for _ in 0..n {
            let ex = &TruncatedPoly2::u(n) - &rx.substitute(&px, &py)?;
            let ey = &TruncatedPoly2::v(n) - &ry.substitute(&px, &py)?;
            (px, py) = lin(&ex, &ey, &linv);
        }
        Self::new(px, py)
    }
}

/// Orthogonal map of the target `R^3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TargetIsometry {
    rotation: Matrix3<f64>,
}

impl TargetIsometry {
    pub fn new(rotation: Matrix3<f64>) -> Result<Self> {
        let defect = (rotation.transpose() * rotation - Matrix3::identity()).abs().max();
        let det = rotation.determinant();
        if defect > 1e-12 || ((det.abs() - 1.0).abs() > 1e-12) {
            return Err(Error::NotOrthogonal);
        }
        Ok(Self { rotation })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn apply(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p
    }

    pub fn inverse(&self) -> Self {
        Self {
            rotation: self.rotation.transpose(),
        }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &TargetIsometry) -> Self {
        Self {
            rotation: self.rotation * inner.rotation,
        }
    }
}

/// Series `c(u)` with `c(0) = 0` and `p(u, c(u)) = 0`, for `p(0,0) = 0` and
/// `p_v(0,0) != 0`. Chord iteration `c ← c − p(u, c)/p_v(0,0)` gains one
/// degree per sweep. Only degrees below `order` are meaningful when `p` is
/// itself a derivative.
pub fn implicit_v(p: &TruncatedPoly2) -> Result<TruncatedPoly2> {
    let n = p.order();
    let mut p = p.clone();
    p.set_coeff(0, 0, 0.0);
    let slope = p.coeff(0, 1);
    if slope == 0.0 {
        return Err(Error::Degenerate("implicit equation has vanishing v-derivative"));
    }
    let u = TruncatedPoly2::u(n);
    let mut c = TruncatedPoly2::zero(n);
    for _ in 0..=n {
        let r = p.substitute(&u, &c)?;
        c = &c - &r.scale(1.0 / slope);
    }
    Ok(c)
}

/// Root of `y ↦ h(x, y)` by Newton iteration from `y0`, with `h_y` the
/// derivative in the second variable. Falls back to `y0` when the
/// iteration does not improve the residual.
pub fn newton_v(h: &TruncatedPoly2, h_y: &TruncatedPoly2, x: f64, y0: f64) -> f64 {
    let mut y = y0;
    for _ in 0..50 {
        let d = h_y.eval(x, y);
        if d == 0.0 {
            return y0;
        }
        let step = h.eval(x, y) / d;
        y -= step;
        if step.abs() <= 1e-15 * (1.0 + y.abs()) {
            return y;
        }
    }
    if h.eval(x, y).abs() < h.eval(x, y0).abs() {
        y
    } else {
        y0
    }
}

/// `R · (f ∘ s)`.
pub fn germ_transform(f: &MapGerm, s: &SourceChange, r: &TargetIsometry) -> Result<MapGerm> {
    Ok(f.compose(s)?.rotate(r))
}
