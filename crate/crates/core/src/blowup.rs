//! Gaussian curvature of fold germs on the blow-up
//! `Π(r, θ) = (r cos θ, r² cos θ sin θ / 2)` and the Koenderink profile.
//!
//! Everything is evaluated in the fold normal form chart, where the first
//! component is `u`, the second has no `u^k v` terms and `a₂(0,0) = 1`.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::jet::{implicit_v, newton_v, MapGerm, TruncatedPoly2, Var};
use crate::normalize::{fold_normal_form, to_monge_form, FoldNormalForm};
use crate::Tolerance;

pub const R_MAX: f64 = 0.1;
pub const COS_MARGIN: f64 = 0.1;
pub const MIN_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupSample {
    pub r: f64,
    pub theta: f64,
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KTildeValue {
    pub theta: f64,
    pub value: f64,
}

/// `b₁(0)·(κ_a·b₁(0)·cos θ − κ_u·sin θ)` with the signed umbilic curvature.
pub fn ktilde(fnf: &FoldNormalForm, kappa_a: f64, kappa_u: f64, theta: f64) -> KTildeValue {
    let b1 = fnf.b1_0;
    KTildeValue {
        theta,
        value: b1 * (kappa_a * b1 * theta.cos() - kappa_u * theta.sin()),
    }
}

/// Fold normal form with its derivative jets, ready for repeated sampling.
#[derive(Debug, Clone)]
pub struct FoldBlowup {
    pub fnf: FoldNormalForm,
    partials: [[TruncatedPoly2; 3]; 5],
}

impl FoldBlowup {
    pub fn new(f: &MapGerm, tol: &Tolerance) -> Result<Self> {
        let m = to_monge_form(f, tol)?;
        let fnf = fold_normal_form(&m)?;
        if fnf.b1_0.abs() <= m.tau {
            return Err(Error::Domain("the blow-up requires b1(0) != 0".into()));
        }
        Self::from_normal_form(fnf)
    }

    pub fn from_normal_form(fnf: FoldNormalForm) -> Result<Self> {
        let order = fnf.germ().order();
        if order < MIN_ORDER {
            return Err(Error::UnderResolved {
                needed: MIN_ORDER,
                have: order,
            });
        }
        let d = |i: usize, j: usize| -> [TruncatedPoly2; 3] {
            fnf.germ().components().clone().map(|mut c| {
                for _ in 0..i {
                    c = c.diff(Var::U);
                }
                for _ in 0..j {
                    c = c.diff(Var::V);
                }
                c
            })
        };
        let partials = [d(1, 0), d(0, 1), d(2, 0), d(1, 1), d(0, 2)];
        Ok(Self { fnf, partials })
    }

    /// `κ_a = a₀(0)`.
    pub fn kappa_a(&self) -> f64 {
        self.fnf.a0_0
    }

    /// Signed `κ_u = b₀(0)`.
    pub fn kappa_u_signed(&self) -> f64 {
        self.fnf.b0_0
    }

    pub fn ktilde(&self, theta: f64) -> KTildeValue {
        ktilde(&self.fnf, self.kappa_a(), self.kappa_u_signed(), theta)
    }

    fn eval(&self, k: usize, u: f64, v: f64) -> Vector3<f64> {
        let p = &self.partials[k];
        Vector3::new(p[0].eval(u, v), p[1].eval(u, v), p[2].eval(u, v))
    }

    /// Gaussian curvature at `Π(r, θ)` from the pulled-back fundamental forms.
    pub fn gauss(&self, r: f64, theta: f64) -> Result<BlowupSample> {
        if !(r > 0.0 && r <= R_MAX) {
            return Err(Error::Domain(format!("blow-up radius {r} outside (0, {R_MAX}]")));
        }
        let (s, c) = theta.sin_cos();
        if c.abs() < COS_MARGIN {
            return Err(Error::Domain(format!("|cos theta| = {} is below {COS_MARGIN}", c.abs())));
        }
        let (u, v) = (r * c, r * r * c * s / 2.0);
        let fu = self.eval(0, u, v);
        let fv = self.eval(1, u, v);
        let nu = (fu.cross(&fv) / (r * r * c)).normalize();
        let (e, f, g) = (fu.dot(&fu), fu.dot(&fv), fv.dot(&fv));
        let l = self.eval(2, u, v).dot(&nu);
        let m = self.eval(3, u, v).dot(&nu);
        let n = self.eval(4, u, v).dot(&nu);
        Ok(BlowupSample {
            r,
            theta,
            k: (l * n - m * m) / (e * g - f * f),
        })
    }

    /// `K · r⁴ cos θ (b₁² cos² θ + a₂² sin² θ)² / 4`, whose limit as `r → 0`
    /// is `a₂ · K̃(θ)`.
    pub fn normalized(&self, r: f64, theta: f64) -> Result<f64> {
        let k = self.gauss(r, theta)?.k;
        let (s, c) = theta.sin_cos();
        let (b1, a2) = (self.fnf.b1_0, self.fnf.a2_00);
        let w = b1 * b1 * c * c + a2 * a2 * s * s;
        Ok(k * r.powi(4) * c * w * w / 4.0)
    }

    /// Limit of [`Self::normalized`] from `r0`, `r0/10`, `r0/100`, assuming a
    /// first-order error term.
    pub fn limit(&self, r0: f64, theta: f64) -> Result<LimitFit> {
        let q = [
            self.normalized(r0, theta)?,
            self.normalized(r0 / 10.0, theta)?,
            self.normalized(r0 / 100.0, theta)?,
        ];
        let d1 = q[0] - q[1];
        let d2 = q[1] - q[2];
        Ok(LimitFit {
            values: q,
            limit: q[2] - d2 / 9.0,
            rate: d1 / d2,
        })
    }
}

/// Richardson-style fit over three radii a decade apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitFit {
    pub values: [f64; 3],
    pub limit: f64,
    /// Ratio of successive differences, about 10 for a first-order error.
    pub rate: f64,
}

pub fn blowup_gauss(f: &MapGerm, r: f64, theta: f64, tol: &Tolerance) -> Result<BlowupSample> {
    FoldBlowup::new(f, tol)?.gauss(r, theta)
}

/// Contour of the fold germ seen along `ξ = (0, cos φ, sin φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KoenderinkProfile {
    pub phi: f64,
    /// `(u, p1, p2)` with `p1 = ⟨c, e1⟩` and `p2 = ⟨c, ξ × e1⟩`.
    pub samples: Vec<(f64, f64, f64)>,
    pub kappa1: f64,
    /// `v₁(u)` solving `det(f_u, f_v, ξ) = 0`.
    pub v1: TruncatedPoly2,
}

impl KoenderinkProfile {
    pub fn v1_second(&self) -> f64 {
        2.0 * self.v1.coeff(2, 0)
    }
}

pub fn koenderink_profile(f: &MapGerm, phi: f64, n: usize, u_max: f64, tol: &Tolerance) -> Result<KoenderinkProfile> {
    let m = to_monge_form(f, tol)?;
    profile_of_normal_form(&fold_normal_form(&m)?, phi, n, u_max)
}

pub fn profile_of_normal_form(fnf: &FoldNormalForm, phi: f64, n: usize, u_max: f64) -> Result<KoenderinkProfile> {
    let (s, c) = phi.sin_cos();
    if s.abs() <= fnf.chart.tau {
        return Err(Error::Domain("sin phi vanishes: the view direction is tangent".into()));
    }
    let g = fnf.germ();
    let order = g.order();
    let xi = Vector3::new(0.0, c, s);
    let jet = g.as_jet();
    let a = jet.diff(Var::U).cross(&jet.diff(Var::V)).dot_const(&xi);
    let v1 = implicit_v(&a)?.truncated(order.saturating_sub(1));
    let u = TruncatedPoly2::u(order);
    let curve = g.components().clone().map(|p| p.substitute(&u, &v1).map(|q| q.truncated(order.saturating_sub(1))));
    let [c0, c1, c2] = curve;
    let (c0, c1, c2) = (c0?, c1?, c2?);
    let d1 = Vector3::new(c0.coeff(1, 0), c1.coeff(1, 0), c2.coeff(1, 0));
    let d2 = Vector3::new(c0.coeff(2, 0), c1.coeff(2, 0), c2.coeff(2, 0)) * 2.0;
    // Projection along ξ leaves det(c', c'', ξ) unchanged.
    let kappa1 = d1.cross(&d2).dot(&xi) / (d1 - xi * d1.dot(&xi)).norm().powi(3);

    let e1 = Vector3::x();
    let w = xi.cross(&e1);
    let a_v = a.diff(Var::V);
    let samples = (0..n)
        .map(|i| {
            let uu = if n > 1 {
                -u_max + 2.0 * u_max * i as f64 / (n - 1) as f64
            } else {
                0.0
            };
            let vv = newton_v(&a, &a_v, uu, v1.eval(uu, 0.0));
            let p = g.eval(uu, vv);
            let proj = p - xi * p.dot(&xi);
            (uu, proj.dot(&e1), proj.dot(&w))
        })
        .collect();
    Ok(KoenderinkProfile {
        phi,
        samples,
        kappa1,
        v1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    type Terms<'a> = &'a [(usize, usize, f64)];

    fn germ(order: usize, comps: [Terms; 3]) -> MapGerm {
        let p = |t: Terms| TruncatedPoly2::from_terms(order, t.iter().copied()).unwrap();
        MapGerm::new([p(comps[0]), p(comps[1]), p(comps[2])]).unwrap()
    }

    fn model() -> MapGerm {
        germ(5, [&[(1, 0, 1.0)], &[(2, 0, 0.5), (0, 2, 0.5)], &[(2, 1, 0.5)]])
    }

    fn generic() -> MapGerm {
        germ(
            5,
            [
                &[(1, 0, 1.0)],
                &[(2, 0, 0.65), (3, 0, 0.4), (0, 2, 0.5), (1, 2, 0.3), (0, 3, -0.2), (4, 0, 0.3)],
                &[(2, 0, -0.4), (2, 1, 0.45), (1, 2, 0.3), (0, 3, 1.1 / 6.0), (3, 0, 0.2), (3, 1, 0.3)],
            ],
        )
    }

    #[test]
    fn model_germ_limit() {
        let b = FoldBlowup::new(&model(), &Tolerance::default()).unwrap();
        assert_eq!((b.kappa_a(), b.kappa_u_signed(), b.fnf.b1_0), (1.0, 0.0, 1.0));
        for theta in [0.0, FRAC_PI_2 - 0.3] {
            let fit = b.limit(1e-2, theta).unwrap();
            assert!((fit.limit - theta.cos()).abs() < 1e-6, "{fit:?}");
            assert!((b.ktilde(theta).value - theta.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn generic_germ_first_order_convergence() {
        let b = FoldBlowup::new(&generic(), &Tolerance::default()).unwrap();
        for theta in [0.4, -1.2, 1.0, 2.5] {
            let fit = b.limit(1e-2, theta).unwrap();
            let target = b.ktilde(theta).value * b.fnf.a2_00;
            assert!((5.0..=20.0).contains(&fit.rate), "{fit:?}");
            assert!((fit.limit - target).abs() < 1e-5 * (1.0 + target.abs()), "{fit:?} {target}");
            assert!((fit.values[1] - target).abs() <= 0.05 * target.abs());
        }
    }

    #[test]
    fn ktilde_root() {
        let b = FoldBlowup::new(&generic(), &Tolerance::default()).unwrap();
        let theta = (b.kappa_a() * b.fnf.b1_0 / b.kappa_u_signed()).atan();
        assert!(b.ktilde(theta).value.abs() < 1e-14);
    }

    #[test]
    fn vanishing_a0_b0_gives_zero_limit() {
        let f = germ(5, [&[(1, 0, 1.0)], &[(0, 2, 0.5), (3, 0, 0.7)], &[(2, 1, 0.8), (0, 3, 0.2)]]);
        let b = FoldBlowup::new(&f, &Tolerance::default()).unwrap();
        for theta in [0.0, 0.5, -1.0, 2.0] {
            assert!(b.ktilde(theta).value == 0.0);
            assert!(b.limit(1e-2, theta).unwrap().limit.abs() < 1e-6);
        }
    }

    #[test]
    fn blowup_domain_errors() {
        let tol = Tolerance::default();
        let f = model();
        assert!(matches!(blowup_gauss(&f, 1e-2, FRAC_PI_2, &tol), Err(Error::Domain(_))));
        assert!(matches!(blowup_gauss(&f, 0.5, 0.0, &tol), Err(Error::Domain(_))));
        let frontal = germ(5, [&[(1, 0, 1.0)], &[(0, 2, 0.5)], &[(0, 3, 1.0)]]);
        assert!(matches!(blowup_gauss(&frontal, 1e-2, 0.0, &tol), Err(Error::Domain(_))));
        let cc = germ(5, [&[(1, 0, 1.0)], &[(0, 2, 1.0)], &[(1, 1, 1.0)]]);
        assert!(matches!(blowup_gauss(&cc, 1e-2, 0.0, &tol), Err(Error::ClassMismatch { .. })));
        let low = germ(3, [&[(1, 0, 1.0)], &[(2, 0, 0.5), (0, 2, 0.5)], &[(2, 1, 0.5)]]);
        assert!(matches!(blowup_gauss(&low, 1e-2, 0.0, &tol), Err(Error::UnderResolved { .. })));
    }

    #[test]
    fn koenderink_closed_form() {
        let tol = Tolerance::default();
        let p = koenderink_profile(&model(), FRAC_PI_2, 5, 0.1, &tol).unwrap();
        assert!((p.kappa1 - 1.0).abs() < 1e-12);
        let m = to_monge_form(&generic(), &tol).unwrap();
        let fnf = fold_normal_form(&m).unwrap();
        for phi in [0.3, 1.0, 2.0, -0.7, -2.5] {
            let p = profile_of_normal_form(&fnf, phi, 3, 0.1).unwrap();
            let expected = -fnf.b0_0 * phi.cos() + fnf.a0_0 * phi.sin();
            assert!((p.kappa1 - expected).abs() < 1e-12, "{phi}");
            let v1pp = fnf.b1_0 * phi.cos() / (fnf.a2_00 * phi.sin());
            assert!((p.v1_second() - v1pp).abs() < 1e-12);
        }
        assert!(matches!(koenderink_profile(&model(), 0.0, 3, 0.1, &tol), Err(Error::Domain(_))));
    }
}
