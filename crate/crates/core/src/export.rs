//! Tabular plot data with a single header row.

use std::f64::consts::PI;

use serde::Serialize;

use crate::blowup::{koenderink_profile, FoldBlowup, COS_MARGIN};
use crate::contact::intersection_branches;
use crate::error::{Error, Result};
use crate::jet::MapGerm;
use crate::normalize::{corank_at_origin, to_monge_form};
use crate::parabola::curvature_parabola;
use crate::report::{format_real, Real};
use crate::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    columns: &'a [&'static str],
    rows: Vec<Vec<Real>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_real(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = TableJson {
            columns: &self.columns,
            rows: self.rows.iter().map(|r| r.iter().copied().map(Real).collect()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("table serializes")
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if n > 1 { a + (b - a) * i as f64 / (n - 1) as f64 } else { a })
}

/// `branch, t, x, y, z` for the two curves in `v_a^⊥`.
pub fn branches(f: &MapGerm, n: usize, t_max: f64, tol: &Tolerance) -> Result<Table> {
    let b = intersection_branches(f, n, t_max, tol)?;
    let mut table = Table::new(&["branch", "t", "x", "y", "z"]);
    for (k, br) in b.branches.iter().enumerate() {
        for (t, p) in &br.samples {
            table.rows.push(vec![(k + 1) as f64, *t, p.x, p.y, p.z]);
        }
    }
    Ok(table)
}

/// `y, n1, n2`: the curvature parabola in the normal plane.
pub fn parabola(f: &MapGerm, n: usize, y_max: f64, tol: &Tolerance) -> Result<Table> {
    let cp = curvature_parabola(&to_monge_form(f, tol)?);
    let mut table = Table::new(&["y", "n1", "n2"]);
    for y in linspace(-y_max, y_max, n) {
        let p = cp.eval(y);
        table.rows.push(vec![y, p.x, p.y]);
    }
    Ok(table)
}

/// `u, v, x, y, z` on an `n × n` grid of half-width `radius`.
pub fn mesh(f: &MapGerm, n: usize, radius: f64, tol: &Tolerance) -> Result<Table> {
    let corank = corank_at_origin(f, tol);
    if corank != 1 {
        return Err(Error::Corank(corank));
    }
    let mut table = Table::new(&["u", "v", "x", "y", "z"]);
    for u in linspace(-radius, radius, n) {
        for v in linspace(-radius, radius, n) {
            let p = f.eval(u, v);
            table.rows.push(vec![u, v, p.x, p.y, p.z]);
        }
    }
    Ok(table)
}

/// `r, theta, K, Ktilde` over the given radii and `n_theta` angles spread
/// over the circle, skipping the band `|cos θ| < 0.1`.
pub fn blowup_grid(f: &MapGerm, radii: &[f64], n_theta: usize, tol: &Tolerance) -> Result<Table> {
    let b = FoldBlowup::new(f, tol)?;
    let mut table = Table::new(&["r", "theta", "K", "Ktilde"]);
    let thetas: Vec<f64> = (0..n_theta)
        .map(|i| -PI + 2.0 * PI * (i as f64 + 0.5) / n_theta as f64)
        .filter(|t| t.cos().abs() >= COS_MARGIN)
        .collect();
    for &r in radii {
        for &theta in &thetas {
            let s = b.gauss(r, theta)?;
            table.rows.push(vec![r, theta, s.k, b.ktilde(theta).value]);
        }
    }
    Ok(table)
}

/// `u, p1, p2`: the apparent contour seen along `(0, cos φ, sin φ)`.
pub fn contour(f: &MapGerm, phi: f64, n: usize, u_max: f64, tol: &Tolerance) -> Result<Table> {
    let p = koenderink_profile(f, phi, n, u_max, tol)?;
    let mut table = Table::new(&["u", "p1", "p2"]);
    table.rows.extend(p.samples.iter().map(|&(u, p1, p2)| vec![u, p1, p2]));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_germ;

    fn germ(text: &str) -> MapGerm {
        parse_germ(text, 5).unwrap()
    }

    #[test]
    fn elliptic_cross_cap_branch_rows() {
        let t = branches(&germ("u; u^2 - 3uv + v^2; uv"), 5, 0.1, &Tolerance::default()).unwrap();
        assert_eq!(t.columns, ["branch", "t", "x", "y", "z"]);
        assert_eq!(t.rows.len(), 10);
        let r5 = 5f64.sqrt();
        for row in &t.rows {
            let a = if row[0] == 1.0 { (3.0 + r5) / 2.0 } else { (3.0 - r5) / 2.0 };
            let tt = row[1];
            assert!((row[2] - a * tt).abs() < 1e-12 && row[3].abs() < 1e-12 && (row[4] - a * tt * tt).abs() < 1e-12);
        }
    }

    #[test]
    fn cross_cap_parabola_rows() {
        let t = parabola(&germ("u; u^2+v^2; 2u^2+u v"), 9, 2.0, &Tolerance::default()).unwrap();
        for row in &t.rows {
            let y = row[0];
            assert!((row[1] - (2.0 + 2.0 * y * y)).abs() < 1e-12);
            assert!((row[2] - (4.0 + 2.0 * y)).abs() < 1e-12);
        }
    }

    #[test]
    fn mesh_rejects_regular_points() {
        assert_eq!(mesh(&germ("u; v; 0"), 3, 0.1, &Tolerance::default()), Err(Error::Corank(0)));
        let t = mesh(&germ("u; v^2; u v"), 3, 0.1, &Tolerance::default()).unwrap();
        assert_eq!(t.rows.len(), 9);
        assert_eq!(t.rows[0], vec![-0.1, -0.1, -0.1, 0.1 * 0.1, 0.1 * 0.1]);
    }

    #[test]
    fn csv_layout() {
        let t = parabola(&germ("u; u^2+v^2; 2u^2+u v"), 2, 1.0, &Tolerance::default()).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "y,n1,n2");
        assert_eq!(lines[1], "-1.0000000000000000e0,4.0000000000000000e0,2.0000000000000000e0");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn blowup_and_contour_tables() {
        let f = germ("u; u^2/2 + v^2/2; u^2v/2");
        let tol = Tolerance::default();
        let t = blowup_grid(&f, &[1e-2, 1e-3], 16, &tol).unwrap();
        assert!(t.rows.iter().all(|r| r[1].cos().abs() >= COS_MARGIN));
        assert!(!t.rows.is_empty());
        let c = contour(&f, 1.0, 11, 0.1, &tol).unwrap();
        assert_eq!((c.columns.len(), c.rows.len()), (3, 11));
        assert!(c.to_json().contains("\"columns\""));
    }
}
