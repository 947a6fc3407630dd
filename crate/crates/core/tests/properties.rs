//! Randomized identities with a fixed seed, 256 cases each.

use dolgachev::cohom::{admissible_rep, normalize_rep, rule_out, RuleOutcome};
use dolgachev::defpic::DefPic;
use dolgachev::exactmath::{nullspace, rank_field, rank_q, rat, solve_q, tridiag_det, Field, Fp61, FromRat, MatQ, Rat};
use dolgachev::planecurves::{parse_poly, HomPoly};
use dolgachev::surface::{DivY, SurfaceModel};
use dolgachev::tsing::{blow_up_chain, discrepancies, fiber_coefficients, hj_expand, End, TChain};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use std::sync::OnceLock;

fn runner(seed: u8) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases: 256, failure_persistence: None, ..Config::default() },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]),
    )
}

fn dp() -> &'static DefPic {
    static DP: OnceLock<DefPic> = OnceLock::new();
    DP.get_or_init(DefPic::default)
}

/// Generators of the admissible sublattice used for sampling: the `G`
/// representatives, the kernel `C1` and `2C2 + E2`, the fiber `C0`, a
/// canonical representative and differences of base points.
fn admissible_gens() -> Vec<DivY> {
    let dp = dp();
    let m = &dp.model;
    let c = |s: &str| m.parse(s).unwrap();
    let mut g: Vec<DivY> = (1..=10).map(|i| dp.g_rep(i).clone()).collect();
    g.extend([c("C1"), c("2C2 + E2"), c("C0"), dp.k_multiple_rep(1), c("F1 - F2"), c("F3 - F9"), c("L0")]);
    g
}

fn admissible() -> impl Strategy<Value = DivY> {
    let gens = admissible_gens();
    proptest::collection::vec(-3i64..=3, gens.len()).prop_map(move |cs| {
        let mut d = DivY::zero(gens[0].rank());
        for (k, g) in cs.iter().zip(&gens) {
            d += &(*k * g);
        }
        d
    })
}

fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
    (2i64..=50).prop_flat_map(|n| (Just(n), 1..n)).prop_filter("coprime", |(n, a)| n.gcd(a) == 1)
}

#[test]
fn tchain_invariants() {
    runner(1)
        .run(&coprime_pair(), |(n, a)| {
            let c = hj_expand(n, a).unwrap();
            prop_assert_eq!(tridiag_det(&c.ks).unwrap(), (n * n).into());
            let f = fiber_coefficients(&c).unwrap();
            prop_assert_eq!(f[0], a);
            prop_assert_eq!(f[c.len() - 1], n - a);
            prop_assert_eq!(*f.last().unwrap(), n);
            for q in discrepancies(&c).unwrap() {
                prop_assert!(q > Rat::zero() && q < Rat::one());
            }
            prop_assert_eq!(TChain::from_ks(c.ks.clone()).unwrap().ks, c.ks.clone());
            // blowing up either end stays a T-chain of the predicted type
            let l = blow_up_chain(&c, End::L).unwrap();
            prop_assert_eq!((l.n, l.a), (n + a, a));
            let r = blow_up_chain(&c, End::R).unwrap();
            prop_assert_eq!(r.n, 2 * n - a);
            prop_assert_eq!(tridiag_det(&r.ks).unwrap(), (r.n * r.n).into());
            Ok(())
        })
        .unwrap();
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-4i64..=4, c), r))
}

#[test]
fn linear_algebra() {
    runner(2)
        .run(&small_matrix(), |rows| {
            let cols = rows[0].len();
            let m = MatQ::from_i64(&rows).unwrap();
            let rank = rank_q(&m);
            let qrows: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
            let ns = nullspace(&qrows, cols);
            prop_assert_eq!(ns.len() + rank, cols);
            for v in &ns {
                let image = m.mul_vec(v).unwrap();
                prop_assert!(image.iter().all(|x| x.is_zero()));
            }
            let prows: Vec<Vec<Fp61>> = qrows.iter().map(|r| r.iter().map(|x| Fp61::from_rat(x).unwrap()).collect()).collect();
            let rank_p = rank_field(prows, cols);
            prop_assert!(rank_p <= rank);
            // square nonsingular systems are solved exactly, others refused
            let x: Vec<Rat> = (0..cols).map(|j| rat(j as i64 - 1)).collect();
            let b = m.mul_vec(&x).unwrap();
            match solve_q(&m, &b) {
                Ok(y) => prop_assert_eq!(y, x),
                Err(_) => prop_assert!(rows.len() != cols || rank < cols),
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn prime_field_axioms() {
    let strat = (any::<i64>(), any::<i64>(), any::<i64>());
    runner(3)
        .run(&strat, |(a, b, c)| {
            let (a, b, c) = (Fp61::from_i64(a), Fp61::from_i64(b), Fp61::from_i64(c));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.sub(&b).add(&b), a.clone());
            if let Some(inv) = a.inv() {
                prop_assert_eq!(a.mul(&inv), Fp61::fone());
            } else {
                prop_assert!(a.fis_zero());
            }
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn recipe_identity_and_fibers() {
    let dp = dp();
    let m = &dp.model;
    let c0 = m.class("C0").unwrap();
    runner(4)
        .run(&admissible(), |d| {
            let chi = dp.chi(&d).unwrap();
            let sq = dp.pair_gen(&d, &d).unwrap();
            let c0d = m.intersect(&c0, &d).unwrap();
            // (D^gen)² = (C0·D)/6 + 2χ - 2
            prop_assert_eq!(6 * sq, c0d + 12 * chi - 12);
            prop_assert_eq!(dp.pair_gen(&c0, &d).unwrap(), c0d);
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn bilinearity() {
    runner(5)
        .run(&(admissible(), admissible(), admissible()), |(a, b, e)| {
            let dp = dp();
            let p = |x: &DivY, y: &DivY| dp.pair_gen(x, y).unwrap();
            prop_assert_eq!(p(&(&a + &b), &e), p(&a, &e) + p(&b, &e));
            prop_assert_eq!(p(&a, &b), p(&b, &a));
            prop_assert_eq!(p(&(-&a), &e), -p(&a, &e));
            // coordinates are additive and determine the pairing
            let (ga, gb) = (dp.to_gen(&a).unwrap(), dp.to_gen(&b).unwrap());
            prop_assert_eq!(dp.to_gen(&(&a + &b)).unwrap(), ga + gb);
            prop_assert_eq!(ga.dot(&gb), p(&a, &b));
            prop_assert_eq!(ga.chi(&dp.k_gen()), dp.chi(&a).unwrap());
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn kernel_invariance() {
    let dp = dp();
    let m = &dp.model;
    let c1 = m.class("C1").unwrap();
    let t = m.parse("2C2 + E2").unwrap();
    runner(6)
        .run(&(admissible(), -3i64..=3, -3i64..=3), |(d, s, u)| {
            let e = &(&d + &(s * &c1)) + &(u * &t);
            prop_assert_eq!(dp.to_gen(&e).unwrap(), dp.to_gen(&d).unwrap());
            prop_assert_eq!(dp.chi(&e).unwrap(), dp.chi(&d).unwrap());
            let (a, b) = (admissible_rep(m, &d).unwrap(), admissible_rep(m, &e).unwrap());
            prop_assert_eq!(&a, &b);
            prop_assert!(matches!(m.dot_name(&a, "C1").unwrap(), 0 | 2));
            prop_assert!(matches!(m.dot_name(&a, "C2").unwrap(), -3 | 0 | 3));
            prop_assert_eq!(dp.to_gen(&a).unwrap(), dp.to_gen(&d).unwrap());
            // each removal in the normalization is a fixed component
            let n = normalize_rep(m, &d).unwrap();
            let r1 = rule_out(m, &n.admissible).unwrap();
            let r2 = rule_out(m, &n.divisor).unwrap();
            prop_assert_eq!(r1.vanishes(), r2.vanishes());
            if let (RuleOutcome::Stable(x), RuleOutcome::Stable(y)) = (&r1.outcome, &r2.outcome) {
                prop_assert_eq!(x, y);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn euler_characteristic_identities() {
    let dp = dp();
    let k = dp.k_multiple_rep(1);
    runner(7)
        .run(&(admissible(), admissible(), -4i64..=4), |(d1, d2, n)| {
            let chi = |x: &DivY| dp.chi(x).unwrap();
            let p = |x: &DivY, y: &DivY| dp.pair_gen(x, y).unwrap();
            // (a)
            prop_assert_eq!(chi(&(&d1 + &d2)), chi(&d1) + chi(&d2) + p(&d1, &d2) - 1);
            // (b)
            prop_assert_eq!(chi(&(-&d1)), -chi(&d1) + p(&d1, &d1) + 2);
            let nd = n * &d1;
            // (d)
            prop_assert_eq!(chi(&nd), n * chi(&d1) + n * (n - 1) / 2 * p(&d1, &d1) - n + 1);
            // (d′)
            prop_assert_eq!(chi(&nd), n * n * chi(&d1) + n * (n - 1) / 2 * p(&k, &d1) - n * n + 1);
            Ok(())
        })
        .unwrap();
}

#[test]
pub fn rational_curves_on_y() {
    let m = SurfaceModel::default_model();
    let curves: Vec<String> = m.curve_names().into_iter().filter(|c| c != "C0").collect();
    let idx = 0..curves.len();
    runner(8)
        .run(&(idx, -5i64..=5), |(i, n)| {
            let c = m.class(&curves[i]).unwrap();
            let sq = m.intersect(&c, &c).unwrap();
            // (f)
            prop_assert_eq!(m.chi_y(&c).unwrap(), sq + 2);
            prop_assert_eq!(m.chi_y(&(-&c)).unwrap(), 0);
            prop_assert_eq!(m.chi_y(&(n * &c)).unwrap(), n * (n + 1) / 2 * sq + n + 1);
            Ok(())
        })
        .unwrap();
}

#[test]
fn divisor_round_trip() {
    let m = SurfaceModel::default_model();
    let strat = proptest::collection::vec(-9i64..=9, m.rank());
    runner(9)
        .run(&strat, |coords| {
            let d = DivY { coords };
            let text = m.fmt_div(&d);
            prop_assert_eq!(m.parse(&text).unwrap(), d);
            Ok(())
        })
        .unwrap();
}

fn hom_poly() -> impl Strategy<Value = HomPoly> {
    (0u32..6).prop_flat_map(|deg| {
        let n = ((deg + 1) * (deg + 2) / 2) as usize;
        proptest::collection::vec((-5i64..=5, prop_oneof![Just(1i64), Just(2), Just(3)]), n).prop_map(move |cs| {
            let dense: Vec<Rat> = cs.iter().map(|&(a, b)| rat(a) / rat(b)).collect();
            HomPoly::from_dense(deg, &dense)
        })
    })
}

#[test]
fn polynomial_round_trip() {
    runner(10)
        .run(&hom_poly(), |p| {
            let q = parse_poly(&p.to_string()).unwrap();
            if p.is_zero() {
                prop_assert!(q.is_zero());
            } else {
                prop_assert_eq!(q, p);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn sampler_covers_nontrivial_classes() {
    // guard against a strategy that only produces zero
    let mut r = runner(11);
    let tree = admissible().new_tree(&mut r).unwrap();
    let d = tree.current();
    assert!(dp().model.is_admissible(&d).unwrap().ok);
}
