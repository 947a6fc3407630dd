//! Spaces of plane curves with prescribed base conditions.
//!
//! A divisor `D = dH - Σ c_i F_i - e1 E1 - m2 E2 - m3 E3` on `Y` pushes down to
//! plane curves of degree `d` passing through the base points of the cubic
//! pencil `⟨h1, h2⟩` and the two nodes with prescribed local conditions. The
//! conditions are expressed as an [`IdealExpr`] and evaluated in one of two ways:
//!
//! * [`graded_dim_literal`]: the degree-`d` piece of the ideal exactly as written.
//! * [`graded_dim`]: sections of the associated ideal sheaf, i.e. the saturation.
//!   This is what `h⁰(Y, D)` equals. See [`sheaf`] for how it is computed.

mod literal;
mod poly;
mod sheaf;

pub use literal::{graded_dim_literal, graded_piece_literal};
pub use poly::{mon_count, mon_index, monomials, parse_poly, HomPoly, Mon, PolyError};
pub use sheaf::{graded_dim, graded_dim_report, graded_piece, DimReport};

use crate::exactmath::{fmt_rat, rat, Rat};
use crate::surface::{DivY, SurfaceModel};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlaneError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("unsupported ideal: {0}")]
    Unsupported(String),
    #[error("the two forms do not cut out a complete intersection")]
    NotCompleteIntersection,
    #[error("invalid cubics: {0}")]
    InvalidCubics(String),
    #[error("F1..F7 must share one coefficient, got {0:?}")]
    UnequalBaseCoefficients(Vec<i64>),
    #[error("negative exponent for {0}")]
    NegativeExponent(String),
    #[error("plane conditions are only set up for the (3,1) model")]
    UnsupportedModel,
}

/// An ideal of `Q[x, y, z]` built from generators, products, powers and
/// quotients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IdealExpr {
    Gens(Vec<HomPoly>),
    Prod(Vec<IdealExpr>),
    Pow(Box<IdealExpr>, u32),
    Colon(Box<IdealExpr>, Box<IdealExpr>),
}

impl IdealExpr {
    pub fn gens(polys: &[&str]) -> Result<Self, PlaneError> {
        Ok(IdealExpr::Gens(polys.iter().map(|s| parse_poly(s)).collect::<Result<_, _>>()?))
    }

    pub fn unit() -> Self {
        IdealExpr::Prod(Vec::new())
    }

    /// Ideal of a rational point.
    pub fn point(p: &[Rat; 3]) -> Self {
        // two independent linear forms vanishing at p
        let w = (0..3).rev().find(|&i| !p[i].is_zero()).expect("point has a nonzero coordinate");
        let mut gens = Vec::new();
        for v in (0..3).filter(|&v| v != w) {
            // p_w X_v - p_v X_w
            let mut f = HomPoly::monomial(unit_mon(v), p[w].clone());
            f = f.add(&HomPoly::monomial(unit_mon(w), -p[v].clone()));
            gens.push(f);
        }
        IdealExpr::Gens(gens)
    }

    pub fn pow(self, k: u32) -> Self {
        IdealExpr::Pow(Box::new(self), k)
    }

    pub fn colon(self, by: IdealExpr) -> Self {
        IdealExpr::Colon(Box::new(self), Box::new(by))
    }
}

fn unit_mon(v: usize) -> Mon {
    let mut m = [0; 3];
    m[v] = 1;
    m
}

impl fmt::Display for IdealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealExpr::Gens(g) => {
                let parts: Vec<String> = g.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            IdealExpr::Prod(es) if es.is_empty() => write!(f, "(1)"),
            IdealExpr::Prod(es) => {
                let parts: Vec<String> = es.iter().map(|e| e.to_string()).collect();
                write!(f, "{}", parts.join("·"))
            }
            IdealExpr::Pow(e, k) => write!(f, "{e}^{k}"),
            IdealExpr::Colon(a, b) => write!(f, "[{a} : {b}]"),
        }
    }
}

/// The two cubics spanning the pencil, and the two rational base points `F8`, `F9`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cubics {
    pub h1: HomPoly,
    pub h2: HomPoly,
    pub f8: [Rat; 3],
    pub f9: [Rat; 3],
}

#[derive(Serialize, Deserialize)]
struct CubicsFile {
    schema: u32,
    h1: String,
    h2: String,
    #[serde(rename = "F8")]
    f8: [i64; 3],
    #[serde(rename = "F9")]
    f9: [i64; 3],
}

/// Node of `h1`, blown up to give `E1`.
pub const NODE1: [i64; 3] = [0, 1, 1];
/// Node of `h2`, blown up twice (`E2`, then `E3` along `y = 0`).
pub const NODE2: [i64; 3] = [0, 0, 1];

fn rat3(p: [i64; 3]) -> [Rat; 3] {
    p.map(rat)
}

impl Cubics {
    pub fn standard() -> Self {
        Cubics {
            h1: parse_poly("(y-z)^2z - x^3 - x^2z").expect("valid literal"),
            h2: parse_poly("x^3 - 2xy^2 + 2xyz + y^2z").expect("valid literal"),
            f8: rat3([-1, 1, 1]),
            f9: rat3([0, 1, 0]),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, PlaneError> {
        let f: CubicsFile =
            serde_json::from_str(text).map_err(|e| PlaneError::InvalidCubics(e.to_string()))?;
        if f.schema != 1 {
            return Err(PlaneError::InvalidCubics(format!("unknown schema {}", f.schema)));
        }
        let c = Cubics { h1: parse_poly(&f.h1)?, h2: parse_poly(&f.h2)?, f8: rat3(f.f8), f9: rat3(f.f9) };
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        let int3 = |p: &[Rat; 3]| {
            p.clone().map(|r| {
                assert!(r.is_integer(), "base points are stored with integer coordinates");
                i64::try_from(r.to_integer()).expect("small coordinate")
            })
        };
        let f = CubicsFile {
            schema: 1,
            h1: self.h1.to_string(),
            h2: self.h2.to_string(),
            f8: int3(&self.f8),
            f9: int3(&self.f9),
        };
        serde_json::to_string_pretty(&f).expect("plain data serializes")
    }

    /// Checks the geometry the condition ideals rely on: two cubics, nodes at
    /// the fixed points with `y = 0` a branch of the second node, and `F8`, `F9`
    /// simple base points.
    pub fn validate(&self) -> Result<(), PlaneError> {
        let bad = |m: &str| Err(PlaneError::InvalidCubics(m.to_string()));
        if self.h1.degree() != 3 || self.h2.degree() != 3 {
            return bad("h1 and h2 must be cubics");
        }
        let n1 = rat3(NODE1);
        let n2 = rat3(NODE2);
        let singular = |h: &HomPoly, p: &[Rat; 3]| h.eval(p).is_zero() && h.gradient_at(p).iter().all(Zero::is_zero);
        if !singular(&self.h1, &n1) {
            return bad("h1 must be singular at [0:1:1]");
        }
        if !singular(&self.h2, &n2) {
            return bad("h2 must be singular at [0:0:1]");
        }
        if !self.h2.coeff(&[2, 0, 1]).is_zero() {
            return bad("y = 0 must be a tangent of h2 at [0:0:1]");
        }
        for (name, p) in [("F8", &self.f8), ("F9", &self.f9)] {
            if !sheaf::is_simple_base_point(&self.h1, &self.h2, p) {
                return bad(&format!("{name} must be a simple base point of the pencil"));
            }
        }
        if self.f8 == self.f9 || proportional(&self.f8, &self.f9) {
            return bad("F8 and F9 must differ");
        }
        Ok(())
    }
}

fn proportional(a: &[Rat; 3], b: &[Rat; 3]) -> bool {
    (0..3).all(|i| (0..3).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

/// The ideal whose degree-`d` part pushes forward `D`, together with its
/// exponents.
#[derive(Debug, Clone)]
pub struct ConditionIdeal {
    pub degree: i64,
    pub expr: IdealExpr,
    /// `(name, exponent)` for `J7, P8, P9, I_E1, I_{E2+E3}, I_{E2+2E3}`.
    pub factors: Vec<(String, u32)>,
}

impl ConditionIdeal {
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .filter(|(_, k)| *k > 0)
            .map(|(n, k)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
            .collect();
        if parts.is_empty() {
            "(1)".into()
        } else {
            parts.join(" · ")
        }
    }
}

/// Builds the condition ideal of `D`. `F1..F7` are the irrational base points
/// and must carry one common coefficient.
pub fn condition_ideal(model: &SurfaceModel, d: &DivY, cubics: &Cubics) -> Result<ConditionIdeal, PlaneError> {
    if model.n() != 3 || model.rank() != 13 {
        return Err(PlaneError::UnsupportedModel);
    }
    let c = model.proper_coords(d);
    let deg = c[0];
    let f: Vec<i64> = c[1..10].iter().map(|v| -v).collect();
    if f[..7].iter().any(|&v| v != f[0]) {
        return Err(PlaneError::UnequalBaseCoefficients(f[..7].to_vec()));
    }
    let (e1, m2, m3) = (-c[10], -c[11], -c[12]);
    let beta = m3 - m2;
    let alpha = m2 - beta;
    let named = [
        ("J7", f[0]),
        ("P8", f[7]),
        ("P9", f[8]),
        ("I_E1", e1),
        ("I_{E2+E3}", alpha),
        ("I_{E2+2E3}", beta),
    ];
    for (name, k) in named {
        if k < 0 {
            return Err(PlaneError::NegativeExponent(name.into()));
        }
    }
    if deg < 0 {
        return Err(PlaneError::NegativeExponent("H".into()));
    }
    let p8 = IdealExpr::point(&cubics.f8);
    let p9 = IdealExpr::point(&cubics.f9);
    let j9 = IdealExpr::Gens(vec![cubics.h1.clone(), cubics.h2.clone()]);
    let j7 = j9.colon(IdealExpr::Prod(vec![p8.clone(), p9.clone()]));
    let ie1 = IdealExpr::point(&rat3(NODE1));
    let ie23 = IdealExpr::gens(&["x", "y"])?;
    let ie223 = IdealExpr::gens(&["x^2", "y"])?;
    let mut parts = Vec::new();
    for (e, (_, k)) in [j7, p8, p9, ie1, ie23, ie223].into_iter().zip(named) {
        if k > 0 {
            parts.push(e.pow(k as u32));
        }
    }
    Ok(ConditionIdeal {
        degree: deg,
        expr: IdealExpr::Prod(parts),
        factors: named.iter().map(|(n, k)| (n.to_string(), *k as u32)).collect(),
    })
}

/// `h⁰(Y, D)` for a divisor pushed down to the plane: the number of degree-`d`
/// sections of the condition sheaf.
pub fn plane_h0(model: &SurfaceModel, d: &DivY, cubics: &Cubics) -> Result<DimReport, PlaneError> {
    let ci = condition_ideal(model, d, cubics)?;
    graded_dim_report(&ci.expr, ci.degree as u32)
}

pub(crate) fn fmt_point(p: &[Rat; 3]) -> String {
    let parts: Vec<String> = p.iter().map(fmt_rat).collect();
    format!("[{}]", parts.join(":"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_cubics_validate() {
        let c = Cubics::standard();
        c.validate().unwrap();
        let back = Cubics::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn cubics_rejections() {
        let mut c = Cubics::standard();
        c.f9 = rat3([1, 1, 1]);
        assert!(matches!(c.validate(), Err(PlaneError::InvalidCubics(_))));
        let mut c = Cubics::standard();
        c.h2 = parse_poly("x^3 + y^3 + z^3").unwrap();
        assert!(matches!(c.validate(), Err(PlaneError::InvalidCubics(_))));
        let txt = r#"{"schema": 2, "h1": "x^3", "h2": "y^3", "F8": [0,0,1], "F9": [0,1,0]}"#;
        assert!(matches!(Cubics::from_json(txt), Err(PlaneError::InvalidCubics(_))));
        assert!(Cubics::from_json("{").is_err());
    }

    #[test]
    fn condition_ideal_exponents() {
        let m = SurfaceModel::default_model();
        let c = Cubics::standard();
        let d = m.parse("10H - 3F1 - ... - 3F8 - 8E1 - 6E2 - 11E3").unwrap();
        let ci = condition_ideal(&m, &d, &c).unwrap();
        assert_eq!(ci.degree, 10);
        let ks: Vec<u32> = ci.factors.iter().map(|f| f.1).collect();
        assert_eq!(ks, vec![3, 3, 0, 8, 1, 5]);
        assert_eq!(ci.describe(), "J7^3 · P8^3 · I_E1^8 · I_{E2+E3} · I_{E2+2E3}^5");

        let uneven = m.parse("3H - F1").unwrap();
        assert!(matches!(condition_ideal(&m, &uneven, &c), Err(PlaneError::UnequalBaseCoefficients(_))));
        let neg = m.parse("3H + E1").unwrap();
        assert!(matches!(condition_ideal(&m, &neg, &c), Err(PlaneError::NegativeExponent(_))));
        let other = SurfaceModel::build(5, 1).unwrap();
        assert!(matches!(
            condition_ideal(&other, &other.parse("H").unwrap(), &c),
            Err(PlaneError::UnsupportedModel)
        ));
    }
}
