//! Sections of ideal sheaves on `P²`.
//!
//! Supported ideals are products of
//!
//! * a power `J^c` or `(J : P_1⋯P_r)^c` of a complete intersection `J = (h1, h2)`,
//!   where the `P_i` are simple base points of `J`;
//! * zero-dimensional ideals that are monomial in local coordinates at a
//!   rational point: ideals of points, and monomial ideals in two of the
//!   variables (supported at the third coordinate point).
//!
//! The local conditions are Taylor coefficients. For the quotient, pick a
//! form `ℓ` vanishing at the removed points whose zero set meets no other base
//! point. Then `f` is a section of `(J : P)^c` exactly when `f ℓ^c ∈ J^c`.
//! Powers of a complete intersection are saturated, and the degree-`D` part
//! of `J^c` has the dimension given by its Hilbert–Burch resolution.
//!
//! Every dimension lies between `C(d+2,2) - colength` and the dimension
//! of the solution space mod p. When the two bounds meet, the value is
//! certified. If they never meet, the computation is repeated over Q.
//! The mod-p bound is only trusted when the rank of `J^c` mod p equals the
//! resolution count. That count is also the rank over Q, so no information
//! is lost in reduction.

use super::poly::{mon_count, mon_index, monomials, HomPoly, Mon};
use super::{fmt_point, IdealExpr, PlaneError};
use crate::exactmath::{nullspace, rank_field, rank_q, rat, Fp31, Fp61, FpM, FromRat, MatQ, Rat};
use num_traits::Zero;
use serde::Serialize;

type Point = [Rat; 3];

/// Normalized point with `p[w] = 1` for the last nonzero coordinate `w`, and
/// chart coordinates `u = X_a - p_a X_w`, `v = X_b - p_b X_w`.
#[derive(Debug, Clone, PartialEq)]
struct Chart {
    p: Point,
    a: usize,
    b: usize,
    w: usize,
}

impl Chart {
    fn at(p: &Point) -> Chart {
        let w = (0..3).rev().find(|&i| !p[i].is_zero()).expect("nonzero point");
        let p = [&p[0] / &p[w], &p[1] / &p[w], &p[2] / &p[w]];
        let mut rest = (0..3).filter(|&i| i != w);
        let a = rest.next().unwrap();
        let b = rest.next().unwrap();
        Chart { p, a, b, w }
    }
}

/// Monomial ideal in `(u, v)`, stored by minimal generators.
type Mono = Vec<(u32, u32)>;

fn minimalize(mut g: Mono) -> Mono {
    g.sort();
    g.dedup();
    let all = g.clone();
    g.retain(|x| !all.iter().any(|y| y != x && y.0 <= x.0 && y.1 <= x.1));
    g
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push((x.0 + y.0, x.1 + y.1));
        }
    }
    minimalize(out)
}

fn mono_pow(a: &Mono, k: u32) -> Mono {
    let mut acc = vec![(0, 0)];
    for _ in 0..k {
        acc = mono_mul(&acc, a);
    }
    acc
}

/// Monomials outside the ideal. The ideal must contain powers of `u` and `v`.
fn standard_monomials(g: &Mono) -> Vec<(u32, u32)> {
    let bu = g.iter().filter(|x| x.1 == 0).map(|x| x.0).min().expect("m-primary");
    let bv = g.iter().filter(|x| x.0 == 0).map(|x| x.1).min().expect("m-primary");
    let mut out = Vec::new();
    for i in 0..bu {
        for j in 0..bv {
            if !g.iter().any(|x| x.0 <= i && x.1 <= j) {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
struct Local {
    chart: Chart,
    ideal: Mono,
}

#[derive(Debug, Clone, PartialEq)]
struct Ci {
    h1: HomPoly,
    h2: HomPoly,
    removed: Vec<Point>,
}

#[derive(Debug, Default)]
struct Scheme {
    ci: Option<(Ci, u32)>,
    locals: Vec<Local>,
}

enum Leaf {
    Unit,
    Local(Local),
    Ci(Ci),
}

fn unsupported<T>(msg: impl Into<String>) -> Result<T, PlaneError> {
    Err(PlaneError::Unsupported(msg.into()))
}

fn classify_gens(gs: &[HomPoly]) -> Result<Leaf, PlaneError> {
    let gs: Vec<&HomPoly> = gs.iter().filter(|g| !g.is_zero()).collect();
    if gs.is_empty() {
        return unsupported("the zero ideal");
    }
    if gs.iter().any(|g| g.degree() == 0) {
        return Ok(Leaf::Unit);
    }
    if gs.iter().all(|g| g.degree() == 1) {
        let rows: Vec<Vec<Rat>> = gs.iter().map(|g| g.dense()).collect();
        let m = MatQ::from_rows(rows.clone()).expect("rectangular");
        return match rank_q(&m) {
            3 => Ok(Leaf::Unit),
            2 => {
                let ns = nullspace(&rows, 3);
                let p = [ns[0][0].clone(), ns[0][1].clone(), ns[0][2].clone()];
                Ok(Leaf::Local(Local { chart: Chart::at(&p), ideal: vec![(0, 1), (1, 0)] }))
            }
            _ => unsupported("linear forms of rank 1 define a line"),
        };
    }
    if gs.iter().all(|g| g.terms().count() == 1) {
        let mut used = [false; 3];
        for g in &gs {
            for (v, u) in g.support_vars().iter().enumerate() {
                used[v] |= u;
            }
        }
        if let Some(c) = (0..3).find(|&v| !used[v]) {
            let mut e = [rat(0), rat(0), rat(0)];
            e[c] = rat(1);
            let chart = Chart::at(&e);
            let ideal = minimalize(
                gs.iter()
                    .map(|g| {
                        let m = g.terms().next().unwrap().0;
                        (m[chart.a], m[chart.b])
                    })
                    .collect(),
            );
            if !ideal.iter().any(|x| x.1 == 0) || !ideal.iter().any(|x| x.0 == 0) {
                return unsupported("monomial ideal is not zero-dimensional");
            }
            return Ok(Leaf::Local(Local { chart, ideal }));
        }
    }
    if gs.len() == 2 {
        return Ok(Leaf::Ci(Ci { h1: gs[0].clone(), h2: gs[1].clone(), removed: Vec::new() }));
    }
    unsupported("more than two generators that are neither linear nor monomial")
}

/// Points whose ideals multiply to the expression, each to the first power.
fn reduced_points(e: &IdealExpr, out: &mut Vec<Point>) -> Result<(), PlaneError> {
    match e {
        IdealExpr::Gens(gs) => match classify_gens(gs)? {
            Leaf::Local(l) if l.ideal == vec![(0, 1), (1, 0)] => {
                out.push(l.chart.p);
                Ok(())
            }
            Leaf::Unit => Ok(()),
            _ => unsupported("the divisor of a quotient must be a product of point ideals"),
        },
        IdealExpr::Prod(es) => es.iter().try_for_each(|x| reduced_points(x, out)),
        _ => unsupported("the divisor of a quotient must be a product of point ideals"),
    }
}

impl Scheme {
    fn add_local(&mut self, l: Local, k: u32) {
        let ideal = mono_pow(&l.ideal, k);
        if let Some(ex) = self.locals.iter_mut().find(|x| x.chart == l.chart) {
            ex.ideal = mono_mul(&ex.ideal, &ideal);
        } else {
            self.locals.push(Local { chart: l.chart, ideal });
        }
    }

    fn add_ci(&mut self, ci: Ci, k: u32) -> Result<(), PlaneError> {
        match &mut self.ci {
            None => self.ci = Some((ci, k)),
            Some((ex, e)) if *ex == ci => *e += k,
            Some(_) => return unsupported("two different complete intersections"),
        }
        Ok(())
    }

    fn collect(&mut self, e: &IdealExpr, k: u32) -> Result<(), PlaneError> {
        match e {
            IdealExpr::Gens(gs) => match classify_gens(gs)? {
                Leaf::Unit => Ok(()),
                Leaf::Local(l) => {
                    self.add_local(l, k);
                    Ok(())
                }
                Leaf::Ci(ci) => self.add_ci(ci, k),
            },
            IdealExpr::Prod(es) => es.iter().try_for_each(|x| self.collect(x, k)),
            IdealExpr::Pow(x, j) => self.collect(x, k * j),
            IdealExpr::Colon(num, den) => {
                let IdealExpr::Gens(gs) = num.as_ref() else {
                    return unsupported("a quotient must have two generators on the left");
                };
                let Leaf::Ci(mut ci) = classify_gens(gs)? else {
                    return unsupported("a quotient must have a complete intersection on the left");
                };
                let mut pts = Vec::new();
                reduced_points(den, &mut pts)?;
                for (i, p) in pts.iter().enumerate() {
                    if pts[..i].contains(p) {
                        return unsupported("repeated point in the divisor of a quotient");
                    }
                }
                ci.removed = pts;
                self.add_ci(ci, k)
            }
        }
    }
}

/// `h1(p) = h2(p) = 0` with independent gradients.
pub(crate) fn is_simple_base_point(h1: &HomPoly, h2: &HomPoly, p: &Point) -> bool {
    if !h1.eval(p).is_zero() || !h2.eval(p).is_zero() {
        return false;
    }
    let rows = vec![h1.gradient_at(p).to_vec(), h2.gradient_at(p).to_vec()];
    rank_q(&MatQ::from_rows(rows).expect("rectangular")) == 2
}

fn is_base_point(ci: &Ci, p: &Point) -> bool {
    ci.h1.eval(p).is_zero() && ci.h2.eval(p).is_zero()
}

// ---- univariate helpers for restricting forms to a line ---------------------

fn up_trim(mut a: Vec<Rat>) -> Vec<Rat> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn up_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    up_trim(out)
}

fn up_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let lb = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let q = r.last().unwrap() / lb;
        let shift = r.len() - b.len();
        for (i, y) in b.iter().enumerate() {
            r[shift + i] -= &q * y;
        }
        r = up_trim(r);
    }
    r
}

/// Degree of `gcd(a, b)`, or `None` when both vanish.
fn up_gcd_degree(a: Vec<Rat>, b: Vec<Rat>) -> Option<usize> {
    let (mut a, mut b) = (up_trim(a), up_trim(b));
    if a.is_empty() && b.is_empty() {
        return None;
    }
    while !b.is_empty() {
        let r = up_rem(&a, &b);
        a = b;
        b = r;
    }
    Some(a.len() - 1)
}

/// `h(s·A + B)` as a polynomial in `s`.
fn restrict(h: &HomPoly, a: &Point, b: &Point) -> Vec<Rat> {
    let mut out = Vec::new();
    for (m, c) in h.terms() {
        let mut t = vec![c.clone()];
        for v in 0..3 {
            for _ in 0..m[v] {
                t = up_mul(&t, &[b[v].clone(), a[v].clone()]);
            }
        }
        let n = out.len().max(t.len());
        out.resize(n, Rat::zero());
        for (i, x) in t.into_iter().enumerate() {
            out[i] += x;
        }
    }
    up_trim(out)
}

fn cross(a: &[Rat], b: &[Rat]) -> Point {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Two rational points spanning the line, on a line given by its coefficients.
fn points_on_line(l: &[Rat; 3]) -> (Point, Point) {
    let ns = nullspace(&[l.to_vec()], 3);
    let to_p = |v: &Vec<Rat>| [v[0].clone(), v[1].clone(), v[2].clone()];
    (to_p(&ns[0]), to_p(&ns[1]))
}

/// The base points of `ci` on the line are exactly the removed points on it,
/// each of multiplicity one.
fn line_is_clean(ci: &Ci, l: &[Rat; 3]) -> bool {
    let (v1, v2) = points_on_line(l);
    // two points of the line that are not base points
    let mut clean = Vec::new();
    for k in 0..40 {
        let p = [&v1[0] + &v2[0] * rat(k), &v1[1] + &v2[1] * rat(k), &v1[2] + &v2[2] * rat(k)];
        if !is_base_point(ci, &p) {
            clean.push(p);
        }
        if clean.len() == 2 {
            break;
        }
    }
    if clean.len() < 2 {
        return false;
    }
    let on_line = ci
        .removed
        .iter()
        .filter(|p| (0..3).map(|i| &l[i] * &p[i]).fold(Rat::zero(), |s, x| s + x).is_zero())
        .count();
    let g1 = restrict(&ci.h1, &clean[0], &clean[1]);
    let g2 = restrict(&ci.h2, &clean[0], &clean[1]);
    up_gcd_degree(g1, g2) == Some(on_line)
}

/// A form vanishing on the removed points whose zero set meets no other base
/// point. Prefers one line through all of them.
fn clearing_form(ci: &Ci) -> Result<HomPoly, PlaneError> {
    let as_form = |l: &Point| {
        let mut f = HomPoly::zero(1);
        for (v, c) in l.iter().enumerate() {
            let mut m = [0; 3];
            m[v] = 1;
            f = f.add(&HomPoly::monomial(m, c.clone()));
        }
        f
    };
    let r = &ci.removed;
    if r.len() >= 2 {
        let l = cross(&r[0], &r[1]);
        let through_all = r.iter().all(|p| (0..3).map(|i| &l[i] * &p[i]).fold(Rat::zero(), |s, x| s + x).is_zero());
        if through_all && line_is_clean(ci, &l) {
            return Ok(as_form(&l));
        }
    }
    let mut prod = HomPoly::one();
    for p in r {
        let (n1, n2) = points_on_line(p);
        let found = (0..40).map(|k| [&n1[0] + &n2[0] * rat(k), &n1[1] + &n2[1] * rat(k), &n1[2] + &n2[2] * rat(k)]).find(|l| line_is_clean(ci, l));
        let Some(l) = found else {
            return unsupported(format!("no clean line through {}", fmt_point(p)));
        };
        prod = prod.mul(&as_form(&l));
    }
    Ok(prod)
}

fn binom(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as i64;
    let n = n as i64;
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

fn sections_of_p2(k: i64) -> i64 {
    if k < 0 {
        0
    } else {
        (k + 1) * (k + 2) / 2
    }
}

/// `dim (J^c)_D` for a complete intersection of degrees `d1, d2`, read off the
/// resolution `0 → ⊕ S(-deg G_i - d2)_{i<c} → ⊕ S(-deg G_i)_{i≤c} → J^c → 0`
/// with `G_i = h1^{c-i} h2^i`.
pub(crate) fn ci_power_dim(d1: u32, d2: u32, c: u32, big_d: u32) -> i64 {
    let (d1, d2, c, big_d) = (d1 as i64, d2 as i64, c as i64, big_d as i64);
    let deg_g = |i: i64| (c - i) * d1 + i * d2;
    let gens: i64 = (0..=c).map(|i| sections_of_p2(big_d - deg_g(i))).sum();
    let syz: i64 = (0..c).map(|i| sections_of_p2(big_d - deg_g(i) - d2)).sum();
    gens - syz
}

/// Prepared conditions for one scheme in one degree.
struct Problem {
    d: u32,
    ci: Option<CiProblem>,
    /// Taylor conditions at the local points, over Q.
    point_rows: Vec<Vec<Rat>>,
    colength: i64,
}

struct CiProblem {
    big_d: u32,
    gens: Vec<HomPoly>,
    clear: HomPoly,
    expected_rank: i64,
}

fn prepare(e: &IdealExpr, d: u32) -> Result<Problem, PlaneError> {
    let mut s = Scheme::default();
    s.collect(e, 1)?;
    let mut colength = 0i64;
    let mut ci_problem = None;
    if let Some((ci, c)) = &s.ci {
        let (d1, d2) = (ci.h1.degree(), ci.h2.degree());
        for p in &ci.removed {
            if !is_simple_base_point(&ci.h1, &ci.h2, p) {
                return unsupported(format!("{} is not a simple base point", fmt_point(p)));
            }
        }
        for l in &s.locals {
            if is_base_point(ci, &l.chart.p) && !ci.removed.contains(&l.chart.p) {
                return unsupported(format!("local condition at the base point {}", fmt_point(&l.chart.p)));
            }
        }
        let length = (d1 * d2) as i64 - ci.removed.len() as i64;
        colength += length * (*c as i64) * (*c as i64 + 1) / 2;
        let clear = if ci.removed.is_empty() { HomPoly::one() } else { clearing_form(ci)? };
        if *c > 0 {
            let big_d = d + c * clear.degree();
            let gens = (0..=*c).map(|i| ci.h1.pow(c - i).mul(&ci.h2.pow(i))).collect();
            ci_problem = Some(CiProblem {
                big_d,
                gens,
                clear: clear.pow(*c),
                expected_rank: ci_power_dim(d1, d2, *c, big_d),
            });
        }
    }
    let mons = monomials(d);
    let mut point_rows = Vec::new();
    for l in &s.locals {
        let std = standard_monomials(&l.ideal);
        colength += std.len() as i64;
        let ch = &l.chart;
        let pw = |base: &Rat, k: u32| -> Rat { (0..k).fold(rat(1), |acc, _| acc * base) };
        for (i, j) in std {
            let row = mons
                .iter()
                .map(|m| {
                    let (ea, eb) = (m[ch.a], m[ch.b]);
                    if ea < i || eb < j {
                        return Rat::zero();
                    }
                    rat(binom(ea, i)) * pw(&ch.p[ch.a], ea - i) * rat(binom(eb, j)) * pw(&ch.p[ch.b], eb - j)
                })
                .collect();
            point_rows.push(row);
        }
    }
    Ok(Problem { d, ci: ci_problem, point_rows, colength })
}

/// Marker for a prime that reduces badly.
struct Unlucky;

/// Every condition row over `F`, or `Unlucky`.
fn condition_rows<F: FromRat>(pb: &Problem) -> Result<Vec<Vec<F>>, Unlucky> {
    let conv = |r: &Rat| F::from_rat(r).ok_or(Unlucky);
    let n = mon_count(pb.d);
    let mut rows: Vec<Vec<F>> = Vec::new();
    if let Some(ci) = &pb.ci {
        let nd = mon_count(ci.big_d);
        let mut b: Vec<Vec<F>> = Vec::new();
        for g in &ci.gens {
            if g.degree() > ci.big_d {
                continue;
            }
            let gt: Vec<(Mon, F)> = g.terms().map(|(m, c)| Ok((*m, conv(c)?))).collect::<Result<_, _>>()?;
            for m in monomials(ci.big_d - g.degree()) {
                let mut row = vec![F::fzero(); nd];
                for (t, c) in &gt {
                    row[mon_index([m[0] + t[0], m[1] + t[1], m[2] + t[2]])] = c.clone();
                }
                b.push(row);
            }
        }
        let ns = nullspace(&b, nd);
        if (nd - ns.len()) as i64 != ci.expected_rank {
            return Err(Unlucky);
        }
        let lt: Vec<(Mon, F)> = ci.clear.terms().map(|(m, c)| Ok((*m, conv(c)?))).collect::<Result<_, _>>()?;
        let mons = monomials(pb.d);
        for y in &ns {
            let row = mons
                .iter()
                .map(|m| {
                    lt.iter().fold(F::fzero(), |acc, (t, c)| {
                        acc.add(&y[mon_index([m[0] + t[0], m[1] + t[1], m[2] + t[2]])].mul(c))
                    })
                })
                .collect();
            rows.push(row);
        }
    }
    for r in &pb.point_rows {
        let row: Vec<F> = r.iter().map(conv).collect::<Result<_, _>>()?;
        debug_assert_eq!(row.len(), n);
        rows.push(row);
    }
    Ok(rows)
}

fn dim_over<F: FromRat>(pb: &Problem) -> Result<usize, Unlucky> {
    let n = mon_count(pb.d);
    let rows = condition_rows::<F>(pb)?;
    Ok(n - rank_field(rows, n))
}

/// How a dimension was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimReport {
    pub degree: u32,
    pub dim: usize,
    /// `C(d+2,2)` minus the colength of the scheme, clamped at zero.
    pub expected: usize,
    /// Prime whose bound met `expected`, or `None` for an exact computation.
    pub certified_mod: Option<u64>,
}

/// Dimension of the degree-`d` sections of the ideal sheaf of `e`.
pub fn graded_dim(e: &IdealExpr, d: u32) -> Result<usize, PlaneError> {
    graded_dim_report(e, d).map(|r| r.dim)
}

pub fn graded_dim_report(e: &IdealExpr, d: u32) -> Result<DimReport, PlaneError> {
    let pb = prepare(e, d)?;
    let n = mon_count(d) as i64;
    let expected = (n - pb.colength).max(0) as usize;
    let report = |dim, certified_mod| DimReport { degree: d, dim, expected, certified_mod };
    let tries: [(u64, fn(&Problem) -> Result<usize, Unlucky>); 3] = [
        (FpM::MODULUS, dim_over::<FpM>),
        (Fp31::MODULUS, dim_over::<Fp31>),
        (Fp61::MODULUS, dim_over::<Fp61>),
    ];
    for (p, f) in tries {
        if let Ok(upper) = f(&pb) {
            if upper == expected {
                return Ok(report(upper, Some(p)));
            }
        }
    }
    match dim_over::<Rat>(&pb) {
        Ok(dim) => Ok(report(dim, None)),
        Err(Unlucky) => Err(PlaneError::NotCompleteIntersection),
    }
}

/// A basis of the degree-`d` sections, computed over Q.
pub fn graded_piece(e: &IdealExpr, d: u32) -> Result<Vec<HomPoly>, PlaneError> {
    let pb = prepare(e, d)?;
    let rows = condition_rows::<Rat>(&pb).map_err(|_| PlaneError::NotCompleteIntersection)?;
    Ok(nullspace(&rows, mon_count(d)).iter().map(|v| HomPoly::from_dense(d, v)).collect())
}
