//! Cohomology bounds on `Y` and on the smoothing, the Ext table of the
//! collection `G0..G11`, and the pseudoheight check.
//!
//! Every `h⁰` on `Y` is bounded from above: by subtracting curves one at a
//! time ([`h0_witness_bound`]), by the negativity lemma ([`rule_out`]), or by
//! counting plane curves. The smoothing only ever lowers `h⁰`
//! ([`h0_gen_bound`]), and the sign of `K·D` together with `χ` closes the gap.

mod ext;
mod height;

pub use ext::{ext_table, ext_triple, route_rep, ExtEntry, ExtOptions, ExtTable, ExtTriple, FixtureEntry, Fixtures, Route, Target};
pub use height::{pseudoheight_ac, relative_heights, PseudoheightBound};

use crate::defpic::DefPicError;
use crate::planecurves::PlaneError;
use crate::surface::{DivY, SurfaceError, SurfaceModel};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    DefPic(#[from] DefPicError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error("residual is {got}, but the claimed decomposition gives {claimed}")]
    ResidualMismatch { got: String, claimed: String },
    #[error("negative multiplicity {1} for {0} in a residual decomposition")]
    NegativeMultiplicity(String, i64),
    #[error("{0} is not admissible")]
    NotAdmissible(String),
    #[error("entry ({i},{j}) is not pinned down: {reason}")]
    UnboundedEntry { i: usize, j: usize, reason: String },
    #[error("fixture error: {0}")]
    Fixture(String),
}

/// Curves to subtract in order, and the claimed effective `E` with
/// `D - ΣA_i = -E`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WitnessSchedule {
    pub curves: Vec<String>,
    pub residual: Vec<(String, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessStep {
    pub curve: String,
    /// `(D - S_{i-1})·A_i`
    pub dot: i64,
    /// `max(0, dot + 1)`, the sections that may be lost on `A_i`
    pub contribution: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub steps: Vec<WitnessStep>,
    pub residual: String,
    pub residual_h0: i64,
    pub bound: i64,
}

/// Upper bound for `h⁰(D)` from restricting to smooth rational curves
/// `A_1, …, A_r` in turn:
/// `h⁰(D - S_{i-1}) ≤ h⁰(D - S_i) + max(0, (D - S_{i-1})·A_i + 1)`.
/// The last term `h⁰(D - S_r)` is 0 when the residual is minus a nonzero
/// effective divisor and 1 when it is zero.
pub fn h0_witness_bound(model: &SurfaceModel, d: &DivY, s: &WitnessSchedule) -> Result<WitnessReport, CohomError> {
    let mut cur = d.clone();
    let mut steps = Vec::with_capacity(s.curves.len());
    for name in &s.curves {
        let a = model.class(name)?;
        let dot = model.intersect(&cur, &a)?;
        steps.push(WitnessStep { curve: name.clone(), dot, contribution: (dot + 1).max(0) });
        cur -= &a;
    }
    let mut claimed = DivY::zero(model.rank());
    for (name, m) in &s.residual {
        if *m < 0 {
            return Err(CohomError::NegativeMultiplicity(name.clone(), *m));
        }
        claimed -= &(*m * &model.class(name)?);
    }
    if claimed != cur {
        return Err(CohomError::ResidualMismatch { got: model.fmt_div(&cur), claimed: model.fmt_div(&claimed) });
    }
    let residual_h0 = i64::from(cur.is_zero());
    let bound = steps.iter().map(|s| s.contribution).sum::<i64>() + residual_h0;
    Ok(WitnessReport { steps, residual: model.fmt_div(&cur), residual_h0, bound })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RuleOutcome {
    /// `h⁰ = 0`, because the divisor meets a curve of nonnegative square negatively.
    ZeroSections { curve: String },
    /// No registry curve meets the divisor negatively; `h⁰` is unchanged.
    Stable(DivY),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleOut {
    /// `(curve, m)`: `m·curve` was subtracted.
    pub steps: Vec<(String, i64)>,
    pub outcome: RuleOutcome,
}

impl RuleOut {
    pub fn vanishes(&self) -> bool {
        matches!(self.outcome, RuleOutcome::ZeroSections { .. })
    }
}

/// Removes fixed components: while some registry curve `C` has `D·C < 0`,
/// either `C² ≥ 0` and `h⁰(D) = 0`, or `h⁰(D) = h⁰(D - mC)` with
/// `m = ⌈(D·C)/(C²)⌉`. The pullback of a general line counts as a curve
/// with `H² = 1`.
pub fn rule_out(model: &SurfaceModel, d: &DivY) -> Result<RuleOut, CohomError> {
    let mut names = vec!["H".to_string()];
    names.extend(model.curve_names());
    let curves: Vec<(String, DivY, i64)> = names
        .into_iter()
        .map(|n| {
            let c = model.class(&n)?;
            let sq = model.intersect(&c, &c)?;
            Ok((n, c, sq))
        })
        .collect::<Result<_, SurfaceError>>()?;
    let mut cur = d.clone();
    let mut steps = Vec::new();
    // every subtraction lowers D·H or keeps it and lowers a negative curve's
    // multiplicity, so this terminates; the cap only guards against bugs
    for _ in 0..10_000 {
        let hit = curves
            .iter()
            .map(|(n, c, sq)| Ok((n, c, *sq, model.intersect(&cur, c)?)))
            .collect::<Result<Vec<_>, SurfaceError>>()?
            .into_iter()
            .find(|x| x.3 < 0);
        let Some((name, c, sq, dot)) = hit else {
            return Ok(RuleOut { steps, outcome: RuleOutcome::Stable(cur) });
        };
        if sq >= 0 {
            return Ok(RuleOut { steps, outcome: RuleOutcome::ZeroSections { curve: name.clone() } });
        }
        // both negative, so the ceiling is at least 1
        let m = (dot + sq + 1) / sq;
        cur -= &(m * c);
        steps.push((name.clone(), m));
    }
    unreachable!("rule_out did not stabilize")
}

/// The representative of `D`'s class on the smoothing with `(D·C1) ∈ {0, 2}`
/// and `(D·C2) ∈ {-3, 0, 3}`, obtained by adding multiples of `C1` and
/// `2C2 + E2`. Both deform to 0, so the class on `X^gen` is unchanged.
pub fn admissible_rep(model: &SurfaceModel, d: &DivY) -> Result<DivY, CohomError> {
    if !model.is_admissible(d)?.ok {
        return Err(CohomError::NotAdmissible(model.fmt_div(d)));
    }
    let c1 = model.class("C1")?;
    let shift2 = &(2 * &model.class("C2")?) + &model.class("E2")?;
    let a = model.dot_name(d, "C1")?;
    let b = model.dot_name(d, "C2")?;
    // C1² = -4 and (2C2+E2)·C2 = -9
    let k1 = a.div_euclid(4);
    let k2 = (2 * b + 9).div_euclid(18);
    let mut out = d + &(k1 * &c1);
    out += &(k2 * &shift2);
    debug_assert!(matches!(model.dot_name(&out, "C1")?, 0 | 2));
    debug_assert!(matches!(model.dot_name(&out, "C2")?, -3 | 0 | 3));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalizedRep {
    /// Output of [`admissible_rep`].
    pub admissible: DivY,
    /// Fixed components removed afterwards, e.g. `C2`, `E2`, `F9`.
    pub removed: Vec<String>,
    /// `admissible` minus the removed curves; same `h⁰` on `Y`.
    pub divisor: DivY,
}

/// [`admissible_rep`], then removal of `C2 + E2` when `(D·C2) = -3`, then of
/// `F9` when `(D·F9) = -1`. Each removal is a fixed-component step, so
/// `h⁰` on `Y` is preserved.
pub fn normalize_rep(model: &SurfaceModel, d: &DivY) -> Result<NormalizedRep, CohomError> {
    let admissible = admissible_rep(model, d)?;
    let mut cur = admissible.clone();
    let mut removed = Vec::new();
    let mut strip = |cur: &mut DivY, name: &str| -> Result<(), CohomError> {
        let c = model.class(name)?;
        let (dot, sq) = (model.intersect(cur, &c)?, model.intersect(&c, &c)?);
        assert!(dot < 0 && sq < 0, "{name} is not a fixed component");
        *cur -= &c;
        removed.push(name.to_string());
        Ok(())
    };
    if model.dot_name(&cur, "C2")? == -3 {
        strip(&mut cur, "C2")?;
        strip(&mut cur, "E2")?;
    }
    if model.dot_name(&cur, "F9")? == -1 {
        strip(&mut cur, "F9")?;
    }
    Ok(NormalizedRep { admissible, removed, divisor: cur })
}

/// `#{(i, j, k) ≥ 0 : i + 2j + k = m}`, sections of `O(m)` on `P(1,2,1)`.
pub fn h0_wp121(m: i64) -> i64 {
    if m < 0 {
        return 0;
    }
    (0..=m / 2).map(|j| m - 2 * j + 1).sum()
}

fn h0_p2(d: i64) -> i64 {
    if d < 0 {
        0
    } else {
        (d + 1) * (d + 2) / 2
    }
}

fn h0_p1(m: i64) -> i64 {
    (m + 1).max(0)
}

/// Upper bound for `h⁰(X^gen, D^gen)` given `h⁰(Y, D) ≤ y_bound`, for an
/// admissible `D` of degrees `(d1, d2)`.
pub fn h0_gen_bound(model: &SurfaceModel, d: &DivY, y_bound: i64) -> Result<i64, CohomError> {
    let (d1, d2) = model.degrees(d)?.ok_or_else(|| CohomError::NotAdmissible(model.fmt_div(d)))?;
    if d1 <= 1 && d2 <= 1 {
        // the restriction maps to the conics are isomorphisms
        return Ok(y_bound);
    }
    Ok(y_bound + h0_p2(d1) + h0_wp121(2 * d2) - h0_p1(2 * d1) - h0_p1(3 * d2))
}
