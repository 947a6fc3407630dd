//! The Picard lattice of the blown-up rational elliptic surface `Y`.
//!
//! `Y` is `P²` blown up at the nine base points of a cubic pencil (classes
//! `F1..F9`), then at a point of the nodal cubic `C1` (class `ex1`), then along
//! the chain of the cuspidal-side singularity (`ex2..ex{r+1}`). Coordinates are
//! total transforms, so the form is diagonal; proper transforms live in the
//! registry.

mod parse;

pub use parse::{parse_divisor, ParseError};

use crate::exactmath::{det_z, fmt_rat, floor_rat, solve_q, MatQ, Rat};
use crate::tsing::{blow_up_word, fiber_coefficients, hj_expand, End, TChain, TsingError};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Chain(#[from] TsingError),
    #[error("dimension mismatch: {0} against {1}")]
    DimensionMismatch(usize, usize),
    #[error("D·(D−K) = {0} is odd; the vector is not a divisor class")]
    ParityViolation(i64),
    #[error("the contracted curves {0:?} do not span a negative definite lattice")]
    NotNegativeDefinite(Vec<String>),
    #[error("unknown curve or class `{0}`")]
    UnknownName(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("congruence violation: {0}")]
    CongruenceViolation(String),
    #[error("postcondition failed: {0}")]
    Postcondition(String),
}

/// Integer divisor class in total-transform coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DivY {
    pub coords: Vec<i64>,
}

impl DivY {
    pub fn zero(rank: usize) -> Self {
        DivY { coords: vec![0; rank] }
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut d = Self::zero(rank);
        d.coords[i] = 1;
        d
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl AddAssign<&DivY> for DivY {
    fn add_assign(&mut self, o: &DivY) {
        assert_eq!(self.rank(), o.rank(), "divisors from different models");
        for (a, b) in self.coords.iter_mut().zip(&o.coords) {
            *a += b;
        }
    }
}

impl SubAssign<&DivY> for DivY {
    fn sub_assign(&mut self, o: &DivY) {
        assert_eq!(self.rank(), o.rank(), "divisors from different models");
        for (a, b) in self.coords.iter_mut().zip(&o.coords) {
            *a -= b;
        }
    }
}

impl Add<&DivY> for &DivY {
    type Output = DivY;
    fn add(self, o: &DivY) -> DivY {
        let mut s = self.clone();
        s += o;
        s
    }
}

impl Sub<&DivY> for &DivY {
    type Output = DivY;
    fn sub(self, o: &DivY) -> DivY {
        let mut s = self.clone();
        s -= o;
        s
    }
}

impl Add for DivY {
    type Output = DivY;
    fn add(mut self, o: DivY) -> DivY {
        self += &o;
        self
    }
}

impl Sub for DivY {
    type Output = DivY;
    fn sub(mut self, o: DivY) -> DivY {
        self -= &o;
        self
    }
}

impl Neg for &DivY {
    type Output = DivY;
    fn neg(self) -> DivY {
        DivY { coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for DivY {
    type Output = DivY;
    fn neg(self) -> DivY {
        -&self
    }
}

impl Mul<&DivY> for i64 {
    type Output = DivY;
    fn mul(self, d: &DivY) -> DivY {
        DivY { coords: d.coords.iter().map(|c| self * c).collect() }
    }
}

impl Mul<DivY> for i64 {
    type Output = DivY;
    fn mul(self, d: DivY) -> DivY {
        self * &d
    }
}

/// Rational class: an integral part plus rational multiples of named curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QDivY {
    pub base: DivY,
    pub parts: Vec<(String, Rat)>,
}

impl QDivY {
    pub fn coords(&self, m: &SurfaceModel) -> Result<Vec<Rat>, SurfaceError> {
        let mut out: Vec<Rat> = self.base.coords.iter().map(|&c| Rat::from_integer(c.into())).collect();
        for (name, c) in &self.parts {
            let v = m.class(name)?;
            for (o, &x) in out.iter_mut().zip(&v.coords) {
                *o += c * Rat::from_integer(x.into());
            }
        }
        Ok(out)
    }

    /// Rounds every curve coefficient down. The base is already integral, so
    /// this is the round-down of the whole Q-divisor.
    pub fn floor(&self, m: &SurfaceModel) -> Result<DivY, SurfaceError> {
        let mut d = self.base.clone();
        for (name, c) in &self.parts {
            let f = floor_rat(c).to_i64().expect("small coefficient");
            d += &(f * m.class(name)?);
        }
        Ok(d)
    }

    pub fn display(&self, m: &SurfaceModel) -> String {
        let mut s = m.fmt_div(&self.base);
        for (name, c) in &self.parts {
            if c.is_zero() {
                continue;
            }
            let (sign, abs) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            let coef = if abs == Rat::from_integer(1.into()) {
                String::new()
            } else if abs.is_integer() {
                fmt_rat(&abs)
            } else {
                format!("({})", fmt_rat(&abs))
            };
            if s == "0" {
                s = if sign == "-" { format!("-{coef}{name}") } else { format!("{coef}{name}") };
            } else {
                s = format!("{s} {sign} {coef}{name}");
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub ok: bool,
    /// `(D·C1)/2`
    pub d1: String,
    /// `(D·C2)/n`
    pub d2: String,
}

/// Picard lattice of `Y` for the `(n,a)` chain on the cuspidal side.
#[derive(Debug, Clone)]
pub struct SurfaceModel {
    pub chain: TChain,
    labels: Vec<String>,
    gram: Vec<i64>,
    registry: BTreeMap<String, DivY>,
    lookup: BTreeMap<String, String>,
    /// Chain curves `G1..Gr`; `G1` carries fiber coefficient `a`.
    chain_names: Vec<String>,
    minus_one: String,
    fiber: Vec<i64>,
    /// Proper exceptional curves: `E_k = ex_k − Σ t[k][j] ex_j`, indexed by `k-1`.
    proper_e: Vec<Vec<i64>>,
}

const H: usize = 0;
const E1: usize = 10;

fn f_idx(i: usize) -> usize {
    i
}

impl SurfaceModel {
    pub fn build(n: i64, a: i64) -> Result<Self, SurfaceError> {
        let target = hj_expand(n, a)?;
        let word = blow_up_word(&target)?;
        let r = target.len();
        let rank = 11 + r;
        let e = |k: usize| E1 + k - 1;
        let unit = |i| DivY::unit(rank, i);

        let mut c0 = 3 * unit(H);
        for i in 1..=9 {
            c0 -= &unit(f_idx(i));
        }
        let c1 = &c0 - &(2 * unit(e(1)));

        // start from the [4] chain: C2 meets E2 twice
        let mut chain: Vec<(String, DivY)> = vec![("C2".into(), &c0 - &(2 * unit(e(2))))];
        let mut minus = ("E2".to_string(), unit(e(2)));
        for (t, end) in word.iter().enumerate() {
            let k = t + 3;
            let ek = unit(e(k));
            let old = std::mem::replace(&mut minus, (format!("E{k}"), ek.clone()));
            let (name, mut v) = old;
            v -= &ek;
            match end {
                End::L => {
                    chain[0].1 -= &ek;
                    chain.push((name, v));
                }
                End::R => {
                    chain.last_mut().unwrap().1 -= &ek;
                    chain.insert(0, (name, v));
                }
            }
        }

        let mut labels = vec!["H".to_string()];
        labels.extend((1..=9).map(|i| format!("F{i}")));
        labels.extend((1..=r + 1).map(|k| format!("ex{k}")));
        let mut gram = vec![-1i64; rank];
        gram[H] = 1;

        let mut registry = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            registry.insert(l.clone(), unit(i));
        }
        registry.insert("E1".into(), unit(e(1)));
        for (name, v) in chain.iter().chain(std::iter::once(&minus)) {
            registry.insert(name.clone(), v.clone());
        }
        let mut k = -3 * unit(H);
        for i in 1..=9 {
            k += &unit(f_idx(i));
        }
        for j in 1..=r + 1 {
            k += &unit(e(j));
        }
        registry.insert("C0".into(), c0.clone());
        registry.insert("C1".into(), c1);
        registry.insert("K".into(), k);
        registry.insert("L0".into(), 2 * unit(H));
        if n == 3 {
            registry.insert("l".into(), &(&unit(H) - &unit(e(1))) - &unit(e(2)));
        }

        let mut proper_e = Vec::with_capacity(r + 1);
        for kk in 1..=r + 1 {
            let v = &registry[&format!("E{kk}")];
            proper_e.push((1..=r + 1).map(|j| if j == kk { 0 } else { -v.coords[e(j)] }).collect());
        }

        let mut lookup = BTreeMap::new();
        for name in registry.keys() {
            lookup.insert(name.to_lowercase(), name.clone());
        }
        lookup.insert("ell".into(), "l".into());

        let m = SurfaceModel {
            chain: target,
            labels,
            gram,
            registry,
            lookup,
            chain_names: chain.into_iter().map(|(n, _)| n).collect(),
            minus_one: minus.0,
            fiber: Vec::new(),
            proper_e,
        };
        m.finish(c0)
    }

    fn finish(mut self, c0: DivY) -> Result<Self, SurfaceError> {
        let ks: Vec<i64> = self
            .chain_names
            .iter()
            .map(|g| -self.self_int(&self.registry[g]))
            .collect();
        if ks != self.chain.ks {
            return Err(SurfaceError::Postcondition(format!(
                "replayed chain {ks:?} differs from {:?}",
                self.chain.ks
            )));
        }
        let fiber = fiber_coefficients(&self.chain)?;
        let mut sum = DivY::zero(self.rank());
        for (g, &m) in self.chain_names.iter().zip(&fiber) {
            sum += &(m * &self.registry[g]);
        }
        sum += &(fiber[fiber.len() - 1] * &self.registry[&self.minus_one]);
        if sum != c0 {
            return Err(SurfaceError::Postcondition("chain fiber is not C0".into()));
        }
        self.fiber = fiber;
        Ok(self)
    }

    /// The default `(2,3)` model.
    pub fn default_model() -> Self {
        Self::build(3, 1).expect("the (3,1) model builds")
    }

    pub fn n(&self) -> i64 {
        self.chain.n
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram_diagonal(&self) -> &[i64] {
        &self.gram
    }

    pub fn chain_names(&self) -> &[String] {
        &self.chain_names
    }

    /// The (-1)-curve closing the chain fiber, `E_{r+1}`.
    pub fn minus_one_curve(&self) -> &str {
        &self.minus_one
    }

    /// Multiplicities of `G1..Gr, E_{r+1}` in `C0`.
    pub fn fiber(&self) -> &[i64] {
        &self.fiber
    }

    pub fn registry(&self) -> &BTreeMap<String, DivY> {
        &self.registry
    }

    /// Case-insensitive lookup of a registry name.
    pub fn class(&self, name: &str) -> Result<DivY, SurfaceError> {
        self.lookup
            .get(&name.to_lowercase())
            .map(|k| self.registry[k].clone())
            .ok_or_else(|| SurfaceError::UnknownName(name.to_string()))
    }

    pub fn canonical(&self) -> &DivY {
        &self.registry["K"]
    }

    /// Irreducible curves of the registry. All are smooth rational except `C0`.
    pub fn curve_names(&self) -> Vec<String> {
        let mut v: Vec<String> = vec!["C0".into(), "C1".into()];
        v.extend(self.chain_names.iter().cloned());
        v.push("E1".into());
        v.push(self.minus_one.clone());
        v.extend((1..=9).map(|i| format!("F{i}")));
        if self.registry.contains_key("l") {
            v.push("l".into());
        }
        v.sort_by_key(|s| (s.chars().next(), s.len(), s.clone()));
        v.dedup();
        v
    }

    /// The curves contracted by `Y → X`: `C1` and the chain.
    pub fn contracted(&self) -> Vec<String> {
        let mut v = vec!["C1".to_string()];
        v.extend(self.chain_names.iter().cloned());
        v
    }

    pub fn intersect(&self, d: &DivY, e: &DivY) -> Result<i64, SurfaceError> {
        if d.rank() != self.rank() {
            return Err(SurfaceError::DimensionMismatch(d.rank(), self.rank()));
        }
        if e.rank() != self.rank() {
            return Err(SurfaceError::DimensionMismatch(e.rank(), self.rank()));
        }
        Ok(self.gram.iter().zip(&d.coords).zip(&e.coords).map(|((g, a), b)| g * a * b).sum())
    }

    fn dot(&self, d: &DivY, e: &DivY) -> i64 {
        self.intersect(d, e).expect("registry classes share the model rank")
    }

    fn self_int(&self, d: &DivY) -> i64 {
        self.dot(d, d)
    }

    /// Intersection with a named class.
    pub fn dot_name(&self, d: &DivY, name: &str) -> Result<i64, SurfaceError> {
        self.intersect(d, &self.class(name)?)
    }

    /// Riemann–Roch on `Y`: `D·(D−K)/2 + 1`.
    pub fn chi_y(&self, d: &DivY) -> Result<i64, SurfaceError> {
        let dk = d - self.canonical();
        let v = self.intersect(d, &dk)?;
        if v % 2 != 0 {
            return Err(SurfaceError::ParityViolation(v));
        }
        Ok(v / 2 + 1)
    }

    /// Whether `D` descends to a line bundle on the smoothing.
    pub fn is_admissible(&self, d: &DivY) -> Result<Admissibility, SurfaceError> {
        let c1 = self.dot_name(d, "C1")?;
        let c2 = self.dot_name(d, "C2")?;
        let n = self.n();
        let interior_ok = self
            .chain_names
            .iter()
            .filter(|g| g.as_str() != "C2")
            .all(|g| self.dot(d, &self.registry[g]) == 0);
        Ok(Admissibility {
            ok: c1 % 2 == 0 && c2 % n == 0 && interior_ok,
            d1: fmt_rat(&Rat::new(c1.into(), 2.into())),
            d2: fmt_rat(&Rat::new(c2.into(), n.into())),
        })
    }

    /// `(d1, d2)` of an admissible divisor.
    pub fn degrees(&self, d: &DivY) -> Result<Option<(i64, i64)>, SurfaceError> {
        let adm = self.is_admissible(d)?;
        if !adm.ok {
            return Ok(None);
        }
        Ok(Some((self.dot_name(d, "C1")? / 2, self.dot_name(d, "C2")? / self.n())))
    }

    /// `π^*π_* D` for the contraction of the named curves.
    pub fn pullback_pushforward(&self, d: &DivY, contracted: &[String]) -> Result<QDivY, SurfaceError> {
        let curves: Vec<DivY> = contracted.iter().map(|c| self.class(c)).collect::<Result<_, _>>()?;
        let m = curves.len();
        if m == 0 {
            return Ok(QDivY { base: d.clone(), parts: vec![] });
        }
        let g: Vec<Vec<i64>> = curves.iter().map(|a| curves.iter().map(|b| self.dot(a, b)).collect()).collect();
        // negative definite iff every leading minor of -G is positive
        for k in 1..=m {
            let minor: Vec<Vec<BigInt>> =
                (0..k).map(|i| (0..k).map(|j| BigInt::from(-g[i][j])).collect()).collect();
            if !det_z(&minor).expect("square").is_positive() {
                return Err(SurfaceError::NotNegativeDefinite(contracted.to_vec()));
            }
        }
        let mat = MatQ::from_i64(&g).expect("square");
        let rhs: Vec<Rat> = curves
            .iter()
            .map(|c| Rat::from_integer((-self.dot(d, c)).into()))
            .collect();
        let x = solve_q(&mat, &rhs).expect("definite lattices are nonsingular");
        let parts = contracted
            .iter()
            .map(|c| self.lookup[&c.to_lowercase()].clone())
            .zip(x)
            .collect();
        Ok(QDivY { base: d.clone(), parts })
    }

    /// `π^*K_X`, the canonical class corrected by the discrepancies.
    pub fn canonical_pullback(&self) -> Result<QDivY, SurfaceError> {
        self.pullback_pushforward(self.canonical(), &self.contracted())
    }

    /// Position of `C2` in the chain.
    fn c2_pos(&self) -> usize {
        self.chain_names.iter().position(|g| g == "C2").expect("C2 is a chain curve")
    }

    /// The residue `N'` mod `n²` whose multiple of `F1` rounds down to a class
    /// meeting `G1` once and the rest of the chain trivially.
    pub fn n_prime(&self) -> Result<i64, SurfaceError> {
        let nn = self.n() * self.n();
        let (sol_c, sol_1) = (self.chain_solution(self.c2_pos()), self.chain_solution(0));
        let frac = |x: &Rat| x - Rat::from_integer(floor_rat(x));
        for r in 0..nn {
            let rr = Rat::from_integer(r.into());
            if sol_c.iter().zip(&sol_1).all(|(c, t)| frac(&(&rr * c)) == frac(t)) {
                return Ok(r);
            }
        }
        Err(SurfaceError::CongruenceViolation(
            "C2 does not generate the local class group".into(),
        ))
    }

    /// `M⁻¹ e_i` for the positive chain matrix `M`.
    fn chain_solution(&self, i: usize) -> Vec<Rat> {
        let r = self.chain_names.len();
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|p| {
                (0..r)
                    .map(|q| -self.dot(&self.registry[&self.chain_names[p]], &self.registry[&self.chain_names[q]]))
                    .collect()
            })
            .collect();
        let mut b = vec![Rat::zero(); r];
        b[i] = Rat::from_integer(1.into());
        solve_q(&MatQ::from_i64(&rows).expect("square"), &b).expect("chain matrix is nonsingular")
    }

    /// `⌊Σ N_i π^*π_* F_i⌋`. `N = ΣN_i` must be 0 or 1 mod 4 and 0 or `N'` mod
    /// `n²`; the result meets `C1` in `[N ≡ 1 mod 4]`, `G1` in `[N ≡ N']` and
    /// the rest of the chain trivially, which is asserted.
    pub fn congruence_divisor(&self, ns: &[i64; 9]) -> Result<DivY, SurfaceError> {
        if ns.iter().any(|&x| x < 0) {
            return Err(SurfaceError::CongruenceViolation("negative multiplicity".into()));
        }
        let total: i64 = ns.iter().sum();
        let nn = self.n() * self.n();
        let np = self.n_prime()?;
        let c1_target = match total.rem_euclid(4) {
            0 => 0,
            1 => 1,
            k => return Err(SurfaceError::CongruenceViolation(format!("N = {total} ≡ {k} mod 4"))),
        };
        let g1_target = match total.rem_euclid(nn) {
            0 => 0,
            k if k == np => 1,
            k => {
                return Err(SurfaceError::CongruenceViolation(format!(
                    "N = {total} ≡ {k} mod {nn}, expected 0 or {np}"
                )))
            }
        };
        let mut base = DivY::zero(self.rank());
        for (i, &m) in ns.iter().enumerate() {
            base += &(m * &self.registry[&format!("F{}", i + 1)]);
        }
        let d = self.pullback_pushforward(&base, &self.contracted())?.floor(self)?;
        let got_c1 = self.dot_name(&d, "C1")?;
        if got_c1 != c1_target {
            return Err(SurfaceError::Postcondition(format!("(D·C1) = {got_c1}, expected {c1_target}")));
        }
        for (p, g) in self.chain_names.iter().enumerate() {
            let want = if p == 0 { g1_target } else { 0 };
            let got = self.dot(&d, &self.registry[g]);
            if got != want {
                return Err(SurfaceError::Postcondition(format!("(D·{g}) = {got}, expected {want}")));
            }
        }
        Ok(d)
    }

    /// `C·(C+K)` for every smooth rational registry curve; all should be -2.
    pub fn adjunction_values(&self) -> Vec<(String, i64)> {
        self.curve_names()
            .into_iter()
            .filter(|c| c != "C0")
            .map(|c| {
                let v = &self.registry[&c];
                let s = self.dot(v, &(v + self.canonical()));
                (c, s)
            })
            .collect()
    }

    /// Coefficients of `D` in the basis `H, F1..F9, E1..E{r+1}` (proper `E`).
    pub fn proper_coords(&self, d: &DivY) -> Vec<i64> {
        let r1 = self.rank() - E1;
        let mut x = vec![0i64; r1];
        for j in 0..r1 {
            let mut v = d.coords[E1 + j];
            for k in 0..j {
                v += x[k] * self.proper_e[k][j];
            }
            x[j] = v;
        }
        let mut out = d.coords[..E1].to_vec();
        out.extend(x);
        out
    }

    /// Human-readable form in the proper basis; runs of equal `F`
    /// coefficients are compressed with an ellipsis. Parses back to `d`.
    pub fn fmt_div(&self, d: &DivY) -> String {
        let c = self.proper_coords(d);
        let mut names = vec!["H".to_string()];
        names.extend((1..=9).map(|i| format!("F{i}")));
        names.extend((1..=self.rank() - E1).map(|k| format!("E{k}")));
        let mut terms: Vec<(i64, String)> = Vec::new();
        let mut i = 0;
        while i < c.len() {
            if c[i] == 0 {
                i += 1;
                continue;
            }
            let mut j = i;
            if (1..=9).contains(&i) {
                while j < 9 && c[j + 1] == c[i] {
                    j += 1;
                }
            }
            if j - i >= 2 {
                terms.push((c[i], names[i].clone()));
                terms.push((c[i], "...".into()));
                terms.push((c[j], names[j].clone()));
            } else {
                for k in i..=j {
                    terms.push((c[k], names[k].clone()));
                }
            }
            i = j + 1;
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (t, (coef, name)) in terms.iter().enumerate() {
            let abs = coef.abs();
            let body = if name == "..." || abs == 1 { name.clone() } else { format!("{abs}{name}") };
            if t == 0 {
                if *coef < 0 {
                    s.push('-');
                }
                s.push_str(&body);
            } else {
                s.push_str(if *coef < 0 { " - " } else { " + " });
                s.push_str(&body);
            }
        }
        s
    }

    pub fn parse(&self, text: &str) -> Result<DivY, SurfaceError> {
        Ok(parse_divisor(self, text)?)
    }
}

/// Full report of a model, as emitted by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceReport {
    pub n: i64,
    pub a: i64,
    pub chain: Vec<i64>,
    pub chain_curves: Vec<String>,
    pub fiber: Vec<i64>,
    pub labels: Vec<String>,
    pub gram_diagonal: Vec<i64>,
    pub registry: BTreeMap<String, Vec<i64>>,
    pub self_intersections: BTreeMap<String, i64>,
    pub adjunction: BTreeMap<String, i64>,
    pub canonical_check: bool,
    pub pullback_k: String,
    pub ell_row: Option<BTreeMap<String, i64>>,
}

impl SurfaceModel {
    pub fn report(&self) -> Result<SurfaceReport, SurfaceError> {
        let mut selfs = BTreeMap::new();
        for c in self.curve_names() {
            selfs.insert(c.clone(), self.self_int(&self.registry[&c]));
        }
        let mut k_alt = self.registry["E1"].clone();
        for g in self.chain_names.iter().filter(|g| g.as_str() == "C2") {
            k_alt -= &self.registry[g];
        }
        for kk in 2..=self.rank() - E1 {
            k_alt -= &self.registry[&format!("E{kk}")];
        }
        let ell_row = self.registry.get("l").map(|l| {
            ["H", "F1", "C0", "C1", "E1", "C2", "E2", "E3", "l"]
                .iter()
                .map(|c| (c.to_string(), self.dot(l, &self.registry[*c])))
                .collect()
        });
        Ok(SurfaceReport {
            n: self.chain.n,
            a: self.chain.a,
            chain: self.chain.ks.clone(),
            chain_curves: self.chain_names.clone(),
            fiber: self.fiber.clone(),
            labels: self.labels.clone(),
            gram_diagonal: self.gram.clone(),
            registry: self.registry.iter().map(|(k, v)| (k.clone(), v.coords.clone())).collect(),
            self_intersections: selfs,
            adjunction: self.adjunction_values().into_iter().collect(),
            canonical_check: &k_alt == self.canonical(),
            pullback_k: self.canonical_pullback()?.display(self),
            ell_row,
        })
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y({},{}) chain {:?}", self.chain.n, self.chain.a, self.chain.ks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ratio;

    fn y() -> SurfaceModel {
        SurfaceModel::default_model()
    }

    fn p(m: &SurfaceModel, s: &str) -> DivY {
        m.parse(s).unwrap()
    }

    #[test]
    fn default_registry() {
        let m = y();
        assert_eq!(m.rank(), 13);
        assert_eq!(m.class("C2").unwrap(), p(&m, "3H - F1 - ... - F9 - 2ex2 - ex3"));
        assert_eq!(m.class("E2").unwrap(), p(&m, "ex2 - ex3"));
        assert_eq!(m.class("K").unwrap(), p(&m, "-3H + F1 + ... + F9 + ex1 + ex2 + ex3"));
        let sq = |s| m.self_int(&m.class(s).unwrap());
        assert_eq!((sq("C1"), sq("C2"), sq("E2"), sq("E3"), sq("C0")), (-4, -5, -2, -1, 0));
        assert_eq!(m.chain_names(), ["C2", "E2"]);
        assert_eq!(m.fiber(), [1, 2, 3]);
    }

    #[test]
    fn canonical_as_curves() {
        for (n, a) in [(2, 1), (3, 1), (3, 2), (4, 1), (5, 2), (5, 3), (7, 4), (8, 3)] {
            let m = SurfaceModel::build(n, a).unwrap();
            let r = m.chain.len();
            let mut k = m.class("E1").unwrap() - m.class("C2").unwrap();
            for j in 2..=r + 1 {
                k -= &m.class(&format!("E{j}")).unwrap();
            }
            assert_eq!(&k, m.canonical(), "({n},{a})");
            assert!(m.adjunction_values().iter().all(|(_, v)| *v == -2), "({n},{a})");
        }
    }

    #[test]
    fn pullback_of_canonical() {
        for (n, a) in [(3, 1), (4, 1), (5, 3), (7, 2)] {
            let m = SurfaceModel::build(n, a).unwrap();
            let q = m.canonical_pullback().unwrap();
            let want: Vec<Rat> = m
                .class("C0")
                .unwrap()
                .coords
                .iter()
                .map(|&c| Rat::from_integer(c.into()) * (ratio(1, 2) - ratio(1, n)))
                .collect();
            assert_eq!(q.coords(&m).unwrap(), want);
            assert_eq!(q.parts[0], ("C1".to_string(), ratio(1, 2)));
            for ((name, c), mi) in q.parts[1..].iter().zip(m.fiber()) {
                assert_eq!(*c, ratio(1, 1) - ratio(*mi, n), "{name}");
            }
        }
    }

    #[test]
    fn intersections_and_chi() {
        let m = y();
        let l = m.class("l").unwrap();
        assert_eq!(m.dot_name(&l, "C2").unwrap(), 1);
        assert_eq!(m.self_int(&l), -1);
        assert_eq!(m.chi_y(&p(&m, "F1 - F2")).unwrap(), 0);
        assert_eq!(m.chi_y(&DivY::zero(13)).unwrap(), 1);
        assert_eq!(m.chi_y(&m.class("C0").unwrap()).unwrap(), 1);
        assert!(matches!(
            m.intersect(&l, &DivY::zero(3)),
            Err(SurfaceError::DimensionMismatch(3, 13))
        ));
        assert!(matches!(m.chi_y(&DivY::unit(13, 0)), Ok(_)));
    }

    #[test]
    fn admissibility() {
        let m = y();
        let a = m.is_admissible(&m.class("C1").unwrap()).unwrap();
        assert_eq!((a.ok, a.d1.as_str(), a.d2.as_str()), (true, "-2", "0"));
        let a = m.is_admissible(&p(&m, "F1 - F2")).unwrap();
        assert_eq!((a.ok, a.d1.as_str(), a.d2.as_str()), (true, "0", "0"));
        let a = m.is_admissible(&p(&m, "F1")).unwrap();
        assert!(!a.ok);
        assert_eq!(a.d2, "1/3");
    }

    #[test]
    fn pullbacks() {
        let m = y();
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let q = m.pullback_pushforward(&p(&m, "9F1"), &names(&["C1", "C2", "E2"])).unwrap();
        assert_eq!(q.parts.iter().map(|x| x.1.clone()).collect::<Vec<_>>(), vec![ratio(9, 4), ratio(2, 1), ratio(1, 1)]);
        assert_eq!(q.display(&m), "9F1 + (9/4)C1 + 2C2 + E2");
        let q = m.pullback_pushforward(&p(&m, "F1"), &names(&["C1"])).unwrap();
        assert_eq!(q.parts, vec![("C1".to_string(), ratio(1, 4))]);
        let c0 = m.class("C0").unwrap();
        let q = m.pullback_pushforward(&c0, &m.contracted()).unwrap();
        assert!(q.parts.iter().all(|(_, c)| c.is_zero()));
        assert!(matches!(
            m.pullback_pushforward(&c0, &names(&["C0"])),
            Err(SurfaceError::NotNegativeDefinite(_))
        ));
    }

    #[test]
    fn congruence_divisors() {
        let m = y();
        let d = m.congruence_divisor(&[9, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(d, p(&m, "9F1 + 2C1 + 2C2 + E2"));
        assert_eq!(m.n_prime().unwrap(), 1);
        let d = m.congruence_divisor(&[28, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(d, p(&m, "28F1 + 7C1 + 6C2 + 3E2"));
        assert_eq!(m.dot_name(&d, "C2").unwrap(), 1);
        assert!(m.congruence_divisor(&[0; 9]).unwrap().is_zero());
        // distributing N changes nothing but the F part
        let d = m.congruence_divisor(&[1, 1, 1, 1, 1, 1, 1, 1, 1]).unwrap();
        assert_eq!(d, p(&m, "F1 + ... + F9 + 2C1 + 2C2 + E2"));
        assert!(matches!(
            m.congruence_divisor(&[2, 0, 0, 0, 0, 0, 0, 0, 0]),
            Err(SurfaceError::CongruenceViolation(_))
        ));
        assert!(matches!(
            m.congruence_divisor(&[4, 0, 0, 0, 0, 0, 0, 0, 0]),
            Err(SurfaceError::CongruenceViolation(_))
        ));
    }

    #[test]
    fn congruence_divisors_other_chains() {
        for (n, a) in [(5, 1), (7, 1), (9, 1), (11, 1)] {
            let m = SurfaceModel::build(n, a).unwrap();
            let np = m.n_prime().unwrap();
            let nn = n * n;
            let total = (0..4 * nn).find(|t| t % 4 == 0 && t % nn == np).unwrap();
            m.congruence_divisor(&[total, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
            let total = (0..4 * nn).find(|t| t % 4 == 1 && t % nn == 0).unwrap();
            m.congruence_divisor(&[0, 0, total, 0, 0, 0, 0, 0, 0]).unwrap();
        }
    }

    #[test]
    fn printing_round_trips() {
        let m = y();
        for s in [
            "9H - 2F1 - ... - 2F8 - 5E1 - 4E2 - 7E3",
            "0",
            "-F1 + F9",
            "31H - 7F1 - ... - 7F8 - F9 - 17E1 - 12E2 - 23E3",
        ] {
            assert_eq!(m.fmt_div(&p(&m, s)), s);
        }
        let k = m.canonical().clone();
        assert_eq!(p(&m, &m.fmt_div(&k)), k);
    }
}
