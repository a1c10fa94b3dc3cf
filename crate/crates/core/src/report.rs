//! Full analysis of a germ, serialized as JSON with 17 significant digits.

use std::str::FromStr;

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::contact::{
    binormal_check, crosscap_type_of_monge, cuspidal_edge_contact_of_monge, hessian, height_jet,
    height_type_of_monge, intersection_branches_of_monge, one_side_test,
};
use crate::error::{Error, Result};
use crate::invariants::{frontality_of_monge, kappa_a_monge, kappa_s_frontal, kappa_u, CurvatureValue};
use crate::jet::MapGerm;
use crate::normalize::{corank_at_origin, fold_normal_form, to_monge_form, ParabolaClass};
use crate::parabola::{asymptotic_directions, axial_vector, curvature_parabola, point_type, AsymptoticSet};
use crate::Tolerance;

/// A real printed with 17 significant digits; non-finite values print as null.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let n = serde_json::Number::from_str(&format_real(self.0)).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn reals<const N: usize>(v: impl IntoIterator<Item = f64>) -> [Real; N] {
    let v: Vec<Real> = v.into_iter().map(Real).collect();
    v.try_into().expect("length")
}

/// A value, or the reason it does not apply.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Entry<T> {
    Value(T),
    NotApplicable { not_applicable: String },
}

impl<T> Entry<T> {
    pub fn na(reason: impl Into<String>) -> Self {
        Entry::NotApplicable {
            not_applicable: reason.into(),
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Entry::Value(v) => Some(v),
            Entry::NotApplicable { .. } => None,
        }
    }
}

impl<T> From<Result<T>> for Entry<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Entry::Value(v),
            Err(e) => Entry::na(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MongeCoefficients {
    pub a20: Real,
    pub a11: Real,
    pub a02: Real,
    pub b20: Real,
    pub b11: Real,
    pub b02: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParabolaCoefficients {
    pub eta0: [Real; 2],
    pub eta1: [Real; 2],
    pub eta2: [Real; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curvature {
    pub kind: &'static str,
    pub value: Entry<Real>,
}

impl From<CurvatureValue> for Curvature {
    fn from(c: CurvatureValue) -> Self {
        Self {
            kind: c.kind(),
            value: match c.value() {
                Some(x) => Entry::Value(Real(x)),
                None => Entry::na(format!("curvature is {}", c.kind())),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Asymptotic {
    /// Number of directions, or "infinite".
    pub count: Entry<usize>,
    pub finite: Vec<Real>,
    pub includes_infinity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeightSummary {
    pub height_type: &'static str,
    pub hessian_determinant: Real,
    pub one_side: bool,
    pub binormal: Entry<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactSummary {
    pub crosscap_type: Entry<&'static str>,
    pub cuspidal_contact: Entry<CuspidalSummary>,
    pub branches: Entry<BranchSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspidalSummary {
    pub kind: &'static str,
    pub det_fu_fuu_fvv: Real,
    pub a_triple_prime: [Real; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchSummary {
    pub relation: &'static str,
    pub side: &'static str,
    pub slopes: [Real; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontalitySummary {
    pub is_frontal: bool,
    pub kappa_f: Real,
    pub certified_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldSummary {
    pub a0: Real,
    pub b0: Real,
    pub b1: Real,
    pub a2: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    /// SHA-256 of the canonical germ document.
    pub input_hash: String,
    pub order: usize,
    pub tolerance: Real,
    pub tau: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub parabola_class: &'static str,
    pub monge: MongeCoefficients,
    pub parabola: ParabolaCoefficients,
    pub v_a: Entry<[Real; 2]>,
    pub nu2: Entry<[Real; 2]>,
    /// `v_a` in the ambient coordinates of the input.
    pub v_a_ambient: Entry<[Real; 3]>,
    pub asymptotic_directions: Asymptotic,
    pub point_type: &'static str,
    pub kappa_a: Curvature,
    pub kappa_u: Curvature,
    pub kappa_s: Entry<Real>,
    pub height: Entry<HeightSummary>,
    pub contact: ContactSummary,
    pub frontality: Entry<FrontalitySummary>,
    pub fold: Entry<FoldSummary>,
    pub provenance: Provenance,
}

impl CurvatureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// SHA-256 of the germ's canonical JSON document: nonzero terms in slot
/// order with 17-digit coefficients, plus the order.
pub fn germ_hash(f: &MapGerm) -> String {
    let components: Vec<Vec<(usize, usize, Real)>> = f
        .components()
        .iter()
        .map(|c| c.terms().filter(|t| t.2 != 0.0).map(|(i, j, x)| (i, j, Real(x))).collect())
        .collect();
    let text = serde_json::to_string(&serde_json::json!({ "components": components, "order": f.order() }))
        .expect("canonical document serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn analyze(f: &MapGerm, tol: &Tolerance) -> Result<CurvatureReport> {
    let corank = corank_at_origin(f, tol);
    if corank != 1 {
        return Err(Error::Corank(corank));
    }
    let m = to_monge_form(f, tol)?;
    let cp = curvature_parabola(&m);
    let class = cp.class;
    let frame = axial_vector(&cp);
    let set = asymptotic_directions(&cp);

    let (v_a, nu2, v_a_ambient) = if frame.defined {
        let lift = m.rotation.inverse().apply(&nalgebra::Vector3::new(0.0, frame.v_a.x, frame.v_a.y));
        (
            Entry::Value(reals(frame.v_a.iter().copied())),
            Entry::Value(reals(frame.nu2.iter().copied())),
            Entry::Value(reals(lift.iter().copied())),
        )
    } else {
        let reason = Error::FrameUndefined.to_string();
        (Entry::na(&reason), Entry::na(&reason), Entry::na(reason))
    };

    let height = height_type_of_monge(&m).map(|ht| {
        let det = height_jet(&m, &frame).map(|h| hessian(&h).determinant()).unwrap_or(0.0);
        HeightSummary {
            height_type: ht.name(),
            hessian_determinant: Real(det),
            one_side: one_side_test(ht),
            binormal: binormal_check(&cp, &frame).into(),
        }
    });

    let frontality = frontality_of_monge(&m);
    let kappa_s = match &frontality {
        Ok(fr) if fr.is_frontal => kappa_s_frontal(f, tol).or_else(|_| {
            let fnf = fold_normal_form(&m)?;
            kappa_s_frontal(fnf.germ(), tol)
        }),
        Ok(_) => Err(Error::NotFrontal),
        Err(e) => Err(e.clone()),
    }
    .and_then(|k| k.value().map(Real).ok_or(Error::Degenerate("singular curvature is not finite")));

    let contact = ContactSummary {
        crosscap_type: crosscap_type_of_monge(&m).map(|t| t.name()).into(),
        cuspidal_contact: cuspidal_edge_contact_of_monge(&m)
            .map(|c| CuspidalSummary {
                kind: c.kind.name(),
                det_fu_fuu_fvv: Real(c.det),
                a_triple_prime: reals(c.a_triple_prime),
            })
            .into(),
        branches: intersection_branches_of_monge(&m, 0, 0.0)
            .map(|b| BranchSummary {
                relation: b.relation.name(),
                side: b.side.name(),
                slopes: reals(b.slopes()),
            })
            .into(),
    };

    let fold = if class == ParabolaClass::HalfLine {
        fold_normal_form(&m).map(|n| FoldSummary {
            a0: Real(n.a0_0),
            b0: Real(n.b0_0),
            b1: Real(n.b1_0),
            a2: Real(n.a2_00),
        })
    } else {
        Err(Error::ClassMismatch {
            operation: "fold normal form",
            expected: "a half-line",
            found: class,
        })
    };

    Ok(CurvatureReport {
        parabola_class: class.name(),
        monge: MongeCoefficients {
            a20: Real(m.a20),
            a11: Real(m.a11),
            a02: Real(m.a02),
            b20: Real(m.b20),
            b11: Real(m.b11),
            b02: Real(m.b02),
        },
        parabola: ParabolaCoefficients {
            eta0: reals(cp.eta0.iter().copied()),
            eta1: reals(cp.eta1.iter().copied()),
            eta2: reals(cp.eta2.iter().copied()),
        },
        v_a,
        nu2,
        v_a_ambient,
        asymptotic_directions: Asymptotic {
            count: match set.count() {
                Some(n) => Entry::Value(n),
                None => Entry::na("every direction is asymptotic"),
            },
            finite: set.finite().iter().copied().map(Real).collect(),
            includes_infinity: !matches!(set, AsymptoticSet::Finite(_)),
        },
        point_type: point_type(&set).name(),
        kappa_a: kappa_a_monge(&m).into(),
        kappa_u: kappa_u(&cp, &frame).into(),
        kappa_s: kappa_s.into(),
        height: height.into(),
        contact,
        frontality: frontality
            .map(|fr| FrontalitySummary {
                is_frontal: fr.is_frontal,
                kappa_f: Real(fr.kappa_f),
                certified_order: fr.certified_order,
            })
            .into(),
        fold: fold.into(),
        provenance: Provenance {
            input_hash: germ_hash(f),
            order: f.order(),
            tolerance: Real(tol.base),
            tau: Real(m.tau),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_germ;

    fn report(text: &str) -> CurvatureReport {
        analyze(&parse_germ(text, 5).unwrap(), &Tolerance::default()).unwrap()
    }

    fn val(c: &Curvature) -> f64 {
        c.value.value().unwrap().0
    }

    #[test]
    fn cross_cap_report() {
        let r = report("u; u^2+v^2; 2u^2+u v");
        assert_eq!(r.parabola_class, "NonDegenerateParabola");
        assert!((val(&r.kappa_a) - 2.0).abs() < 1e-12);
        assert_eq!(r.height.value().unwrap().height_type, "A1Plus");
        assert_eq!(r.kappa_u.kind, "Undefined");
        assert!(r.kappa_s.value().is_none());
        let va = r.v_a.value().unwrap();
        assert!((va[0].0 - 1.0).abs() < 1e-12 && va[1].0.abs() < 1e-12);
    }

    #[test]
    fn cuspidal_edge_report() {
        let r = report("u; u^2+v^2; v^3");
        assert!((val(&r.kappa_a) - 2.0).abs() < 1e-12);
        assert!(val(&r.kappa_u).abs() < 1e-12);
        let fr = r.frontality.value().unwrap();
        assert!(fr.is_frontal && fr.kappa_f.0 == 0.0);
        assert!((r.kappa_s.value().unwrap().0.abs() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn point_origin_report() {
        let r = report("u; 0; 0");
        assert_eq!(r.parabola_class, "PointOrigin");
        assert_eq!(r.kappa_a.kind, "ZeroByDefinition");
        assert_eq!(val(&r.kappa_a), 0.0);
        assert!(r.v_a.value().is_none());
    }

    #[test]
    fn corank_errors() {
        let tol = Tolerance::default();
        let regular = parse_germ("u; v; 0", 5).unwrap();
        let e = analyze(&regular, &tol).unwrap_err();
        assert_eq!(e, Error::Corank(0));
        assert!(e.to_string().contains("regular point"));
        assert_eq!(analyze(&parse_germ("u^2; v^2; u v", 5).unwrap(), &tol).unwrap_err(), Error::Corank(2));
    }

    #[test]
    fn json_is_deterministic_with_17_digits() {
        let a = report("u; u^2+v^2; 2u^2+u v").to_json();
        let b = report("u; u^2+v^2; 2u^2+u v").to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"a20\": 2.0000000000000000e+0"), "{a}");
        assert!(a.contains("\"not_applicable\""));
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["provenance"]["input_hash"].as_str().unwrap().len(), 64);
    }

    #[test]
    fn hash_ignores_presentation() {
        let f = parse_germ("u; u^2 + v^2; 2u^2 + uv", 5).unwrap();
        let g = parse_germ("u;v^2+u^2;u v+4/2u^2", 5).unwrap();
        assert_eq!(germ_hash(&f), germ_hash(&g));
        let h = parse_germ("u; u^2 + v^2; 2u^2 + uv", 4).unwrap();
        assert_ne!(germ_hash(&f), germ_hash(&h));
    }
}
