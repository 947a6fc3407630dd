//! The `12×12` table `Ext^p(G_i, G_j) = H^p(X^gen, -G_i + G_j)`.

use super::{h0_gen_bound, h0_witness_bound, normalize_rep, rule_out, CohomError, NormalizedRep, WitnessSchedule};
use crate::defpic::DefPic;
use crate::planecurves::{plane_h0, Cubics, DimReport};
use crate::surface::DivY;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

const SHIPPED: &str = include_str!("../../fixtures/ext.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Structure,
    Witness,
    Plane,
    Ruleout,
    Symmetry,
}

/// Which end of the triple a bound route pins down. `H2` routes work with
/// `K - D` through Serre duality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    H0,
    H2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub i: usize,
    pub j: usize,
    pub route: Route,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Target>,
    /// Representative on `Y` whose `h⁰` is bounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub schedule: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residual: Vec<(String, i64)>,
    /// Index `k` whose entry is copied, with `F_k` and the own `F` swapped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixtures {
    pub schema: u32,
    pub entries: Vec<FixtureEntry>,
}

impl Fixtures {
    pub fn shipped() -> Self {
        Self::from_json(SHIPPED).expect("shipped fixtures parse")
    }

    pub fn from_json(text: &str) -> Result<Self, CohomError> {
        let f: Fixtures = serde_json::from_str(text).map_err(|e| CohomError::Fixture(e.to_string()))?;
        if f.schema != 1 {
            return Err(CohomError::Fixture(format!("unknown schema {}", f.schema)));
        }
        Ok(f)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&FixtureEntry> {
        self.entries.iter().find(|e| e.i == i && e.j == j)
    }

    /// The five witness computations for base point `k ∈ 1..=8`, in the
    /// order `-G_k`, `K - G_k`, `K - G_9`, `K + G_k - G_10`, `K + G_9 - G_10`.
    pub fn dictionary(&self, k: usize) -> Vec<&FixtureEntry> {
        [(k, 0), (0, k), (0, 9), (k, 10), (9, 10)]
            .iter()
            .filter_map(|&(i, j)| self.get(i, j).filter(|e| e.route == Route::Witness))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtTriple {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
}

impl std::fmt::Display for ExtTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {}", self.h0, self.h1, self.h2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtEntry {
    pub i: usize,
    pub j: usize,
    pub route: Route,
    pub triple: ExtTriple,
    pub chi: i64,
    /// `(K·D)` on the smoothing.
    pub k_dot: i64,
    /// Divisor on `Y` the route worked with, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
    /// Upper bound the route produced for the pinned end.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub entries: Vec<Vec<ExtEntry>>,
}

impl ExtTable {
    pub fn triples(&self) -> Vec<Vec<ExtTriple>> {
        self.entries.iter().map(|r| r.iter().map(|e| e.triple).collect()).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtEntry {
        &self.entries[i][j]
    }

    pub fn to_markdown(&self) -> String {
        let n = self.entries.len();
        let mut s = String::from("|     |");
        for j in 0..n {
            s.push_str(&format!(" G{j} |"));
        }
        s.push_str("\n|---|");
        s.push_str(&"---|".repeat(n));
        s.push('\n');
        for (i, row) in self.entries.iter().enumerate() {
            s.push_str(&format!("| G{i} |"));
            for e in row {
                s.push_str(&format!(" {} |", e.triple));
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct ExtOptions {
    /// Fill `i ∈ 1..7` from the `i = 8` entries. The base points `F1..F8` are
    /// permuted by monodromy, so these cohomologies agree; that argument is
    /// assumed rather than checked.
    pub symmetry: bool,
    pub cubics: Cubics,
}

impl Default for ExtOptions {
    fn default() -> Self {
        ExtOptions { symmetry: true, cubics: Cubics::standard() }
    }
}

/// Shared state for one table run; plane-curve counts are cached by divisor.
struct Ctx<'a> {
    dp: &'a DefPic,
    fx: &'a Fixtures,
    opts: &'a ExtOptions,
    plane: HashMap<DivY, DimReport>,
    done: HashMap<(usize, usize), ExtEntry>,
}

fn unbounded(i: usize, j: usize, reason: impl Into<String>) -> CohomError {
    CohomError::UnboundedEntry { i, j, reason: reason.into() }
}

impl Ctx<'_> {
    fn class(&self, i: usize, j: usize) -> DivY {
        self.dp.g_rep(j) - self.dp.g_rep(i)
    }

    fn entry(&mut self, i: usize, j: usize) -> Result<ExtEntry, CohomError> {
        if let Some(e) = self.done.get(&(i, j)) {
            return Ok(e.clone());
        }
        let e = self.compute(i, j)?;
        self.done.insert((i, j), e.clone());
        Ok(e)
    }

    fn compute(&mut self, i: usize, j: usize) -> Result<ExtEntry, CohomError> {
        let m = &self.dp.model;
        let d = self.class(i, j);
        let k = self.dp.k_multiple_rep(1);
        let chi = self.dp.chi(&d)?;
        let k_dot = self.dp.pair_gen(&k, &d)?;
        let mut out = ExtEntry { i, j, route: Route::Structure, triple: ExtTriple { h0: 0, h1: 0, h2: 0 }, chi, k_dot, divisor: None, bound: None };
        if i == j {
            if chi != 1 {
                return Err(unbounded(i, j, format!("diagonal χ is {chi}")));
            }
            out.triple = ExtTriple { h0: 1, h1: 0, h2: 0 };
            return Ok(out);
        }
        let fx = self.fx.get(i, j).cloned().ok_or_else(|| unbounded(i, j, "no fixture entry"))?;
        out.route = fx.route;
        match fx.route {
            Route::Structure => return Err(unbounded(i, j, "structure route is only for the diagonal")),
            Route::Ruleout => {
                let serre = &k - &d;
                let h0_zero = k_dot < 0 || rule_out(m, &normalize_rep(m, &d)?.divisor)?.vanishes();
                let h2_zero = k_dot > 0 || rule_out(m, &normalize_rep(m, &serre)?.divisor)?.vanishes();
                if !(h0_zero && h2_zero) {
                    return Err(unbounded(i, j, "negative curves do not remove all sections"));
                }
                out.triple = ExtTriple { h0: 0, h1: -chi, h2: 0 };
            }
            Route::Witness | Route::Plane => {
                let target = fx.target.ok_or_else(|| CohomError::Fixture(format!("({i},{j}) has no target")))?;
                let (side, other_zero) = match target {
                    Target::H0 => (d.clone(), k_dot > 0),
                    Target::H2 => (&k - &d, k_dot < 0),
                };
                if !other_zero {
                    return Err(unbounded(i, j, "the sign of (K·D) does not kill the other end"));
                }
                let rep = normalize_rep(m, &side)?;
                let text = fx.divisor.clone().ok_or_else(|| CohomError::Fixture(format!("({i},{j}) has no divisor")))?;
                let claimed = m.parse(&text)?;
                if claimed != rep.divisor && claimed != rep.admissible {
                    return Err(CohomError::Fixture(format!(
                        "({i},{j}): {text} is not a normalized representative, expected {}",
                        m.fmt_div(&rep.divisor)
                    )));
                }
                let y_bound = if fx.route == Route::Witness {
                    let s = WitnessSchedule { curves: fx.schedule.clone(), residual: fx.residual.clone() };
                    h0_witness_bound(m, &claimed, &s)?.bound
                } else {
                    self.plane_dim(&claimed)? as i64
                };
                let bound = h0_gen_bound(m, &rep.admissible, y_bound)?;
                // h⁰ - h¹ = χ (or h² - h¹ = χ), so the pinned end is at least max(χ, 0)
                let floor = chi.max(0);
                if bound < floor {
                    return Err(unbounded(i, j, format!("bound {bound} is below χ = {chi}, inconsistent")));
                }
                if bound > floor {
                    return Err(unbounded(i, j, format!("bound {bound} leaves a gap above χ = {chi}")));
                }
                out.triple = match target {
                    Target::H0 => ExtTriple { h0: bound, h1: bound - chi, h2: 0 },
                    Target::H2 => ExtTriple { h0: 0, h1: bound - chi, h2: bound },
                };
                out.divisor = Some(m.fmt_div(&claimed));
                out.bound = Some(bound);
            }
            Route::Symmetry => {
                if !self.opts.symmetry {
                    return Err(unbounded(i, j, "base point symmetry is switched off"));
                }
                let src = fx.from.ok_or_else(|| CohomError::Fixture(format!("({i},{j}) has no source")))?;
                let own = if (1..=8).contains(&i) { i } else { j };
                if !(1..=8).contains(&own) || !(1..=8).contains(&src) {
                    return Err(CohomError::Fixture(format!("({i},{j}): symmetry needs base point indices")));
                }
                let (si, sj) = if own == i { (src, j) } else { (i, src) };
                let sd = self.class(si, sj);
                let mut swapped = sd.clone();
                swapped.coords.swap(own, src);
                if swapped != d {
                    return Err(unbounded(i, j, format!("class is not the F{src}↔F{own} image of ({si},{sj})")));
                }
                let base = self.entry(si, sj)?;
                out.triple = base.triple;
                out.bound = base.bound;
                out.divisor = base.divisor.map(|t| {
                    let mut v = m.parse(&t).expect("own output parses");
                    v.coords.swap(own, src);
                    m.fmt_div(&v)
                });
            }
        }
        let t = out.triple;
        debug_assert_eq!(t.h0 - t.h1 + t.h2, chi);
        if t.h1 < 0 {
            return Err(unbounded(i, j, format!("negative h¹ from χ = {chi}")));
        }
        Ok(out)
    }

    fn plane_dim(&mut self, d: &DivY) -> Result<usize, CohomError> {
        if let Some(r) = self.plane.get(d) {
            return Ok(r.dim);
        }
        let r = plane_h0(&self.dp.model, d, &self.opts.cubics)?;
        let dim = r.dim;
        self.plane.insert(d.clone(), r);
        Ok(dim)
    }
}

/// The triple for one entry.
pub fn ext_triple(dp: &DefPic, i: usize, j: usize, fx: &Fixtures, opts: &ExtOptions) -> Result<ExtEntry, CohomError> {
    if i > 11 || j > 11 {
        return Err(unbounded(i, j, "indices run over 0..=11"));
    }
    Ctx { dp, fx, opts, plane: HashMap::new(), done: HashMap::new() }.entry(i, j)
}

/// All 144 entries. Fails on the first entry no route pins down.
pub fn ext_table(dp: &DefPic, fx: &Fixtures, opts: &ExtOptions) -> Result<ExtTable, CohomError> {
    let mut ctx = Ctx { dp, fx, opts, plane: HashMap::new(), done: HashMap::new() };
    let entries = (0..12)
        .map(|i| (0..12).map(|j| ctx.entry(i, j)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExtTable { entries })
}

/// Normalized representative used by a route, for fixture generation and
/// inspection.
pub fn route_rep(dp: &DefPic, i: usize, j: usize, target: Target) -> Result<NormalizedRep, CohomError> {
    let d = dp.g_rep(j) - dp.g_rep(i);
    let side = match target {
        Target::H0 => d,
        Target::H2 => &dp.k_multiple_rep(1) - &d,
    };
    normalize_rep(&dp.model, &side)
}
