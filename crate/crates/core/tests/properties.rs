//! Randomized invariants across the library.

mod common;

use common::{ctx, rel, small_model};
use kcharge::branes::{eval_brane, geometric_basis_brane, lg_basis_brane, s_shift_factor, wall_cross, TorsionLabel};
use kcharge::glsm::{self, age, box_sectors, def_obs_weights, effective_classes, teardrop_euler, Sector};
use kcharge::integrals::{integrand, numeric_residue, RESIDUE_NODES};
use kcharge::qde::{s_shift_ratio, QDifferenceOperator};
use kcharge::qseries::{phi, pochhammer, theta, theta_shift_factor};
use kcharge::rat::{self, Rat};
use kcharge::{GlsmModel, Phase, QContext, C64};
use proptest::prelude::*;

fn nome() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.05, 0.1, 0.3])
}

fn annulus(lo: f64, hi: f64) -> impl Strategy<Value = C64> {
    (lo.ln()..hi.ln(), -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(lr, t)| C64::from_polar(lr.exp(), t))
}

fn unit_circle() -> impl Strategy<Value = C64> {
    (-std::f64::consts::PI..std::f64::consts::PI).prop_map(|t| C64::from_polar(1.0, t))
}

fn random_model() -> impl Strategy<Value = GlsmModel> {
    (prop::collection::vec(1i64..=3, 1..=3), prop::collection::vec(1i64..=3, 1..=3), 0i64..=2).prop_map(
        |(pos, neg, qr)| {
            let weights: Vec<i64> = pos.iter().copied().chain(neg.iter().map(|d| -d)).collect();
            let n = weights.len();
            let mut r = vec![rat::zero(); n];
            r[n - 1] = rat::int(qr);
            let eq = (0..n).map(|i| C64::from_polar(1.0, 0.37 + 1.29 * i as f64)).collect();
            GlsmModel::new(weights, r, eq, Phase::Plus).unwrap()
        },
    )
}

fn rational_q() -> impl Strategy<Value = f64> {
    0.05f64..0.9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn theta_quasi_periodicity(q in nome(), x in annulus(0.2, 5.0)) {
        let c = QContext::real(q).unwrap();
        let t = theta(x, &c).unwrap();
        let shifted = theta(c.q() * x, &c).unwrap();
        prop_assert!((shifted + t / x).norm() <= c.tol_rel * t.norm().max(1e-300));
    }

    #[test]
    fn theta_inversion(q in nome(), x in annulus(0.2, 5.0)) {
        let c = QContext::real(q).unwrap();
        let t = theta(x, &c).unwrap();
        prop_assert!((theta(c.q() / x, &c).unwrap() - t).norm() <= c.tol_rel * t.norm().max(1e-300));
    }

    #[test]
    fn theta_shift_closed_form(q in nome(), x in annulus(0.2, 5.0), n in -5i64..=5) {
        let c = QContext::real(q).unwrap();
        let ratio = theta(c.q_powi(n) * x, &c).unwrap() / theta(x, &c).unwrap();
        prop_assert!(rel(ratio, theta_shift_factor(x, n, &c).unwrap()) < 1e-10);
    }

    #[test]
    fn phi_recursion(q in nome(), x in annulus(0.01, 20.0), terms in 2usize..80) {
        let c = QContext::new(C64::new(q, 0.0), terms).unwrap();
        let shorter = QContext::new(C64::new(q, 0.0), terms - 1).unwrap();
        let lhs = phi(x, &c);
        let rhs = (1.0 - x) * phi(c.q() * x, &shorter);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn pochhammer_concatenation(q in nome(), x in annulus(0.1, 3.0), m in 0i64..=6, n in 0i64..=6) {
        let c = QContext::real(q).unwrap();
        let whole = pochhammer(x, m + n, &c).unwrap();
        let split = pochhammer(x, m, &c).unwrap() * pochhammer(c.q_powi(m) * x, n, &c).unwrap();
        prop_assert!((whole - split).norm() <= 1e-12 * whole.norm().max(1.0));
    }

    #[test]
    fn def_obs_match_euler_characteristic(num in -40i64..40, den in 1i64..=4, d_i in 1i64..=3, q in rational_q()) {
        let eq = vec![C64::new(1.0, 0.0); 2];
        let m = GlsmModel::new(vec![d_i, -1], vec![rat::zero(); 2], eq, Phase::Plus).unwrap();
        let beta = rat::rat(num.abs(), den);
        let c = QContext::real(q).unwrap();
        let w = def_obs_weights(&m, beta);
        for i in 0..2 {
            let d = glsm::d_of(&m, i, beta);
            let sum: C64 = w.def.iter().filter(|x| x.index == i).map(|x| c.q_pow(x.q_exp)).sum::<C64>()
                - w.obs.iter().filter(|x| x.index == i).map(|x| c.q_pow(x.q_exp)).sum::<C64>();
            let qq = c.q();
            let rational = c.q_pow(-d) / (1.0 - qq) + c.q_pow(-rat::frac(d)) / (1.0 - qq.inv());
            prop_assert!((sum - rational).norm() <= 1e-9 * rational.norm().max(1.0), "d={}", d);
        }
    }

    #[test]
    fn teardrop_rational_form(n in -12i64..=12, a in 1i64..=4, q in rational_q()) {
        let c = QContext::real(q).unwrap();
        let terms = teardrop_euler(n, a);
        let x = rat::rat(n, a);
        let value = glsm::eval_signed_exponents(&terms, &c);
        let qq = c.q();
        let rational = c.q_pow(-rat::frac(x)) / (1.0 - qq.inv()) + c.q_pow(-x) / (1.0 - qq);
        prop_assert!((value - rational).norm() <= 1e-12 * rational.norm().max(1.0));
        if (-a..=-1).contains(&n) {
            prop_assert!(terms.is_empty());
        }
    }

    #[test]
    fn ages_in_unit_interval(m in random_model(), num in 0i64..30, den in 1i64..=6) {
        let v = Sector::new(&m, rat::rat(num, den));
        for i in 0..m.len() {
            let a = age(&m, &v, i);
            prop_assert!(a >= rat::zero() && a < rat::one());
            prop_assert_eq!(a == rat::zero(), v.is_fixed(i));
        }
        for s in box_sectors(&m) {
            prop_assert!((s.c * rat::int(s.order as i64)).is_integer());
        }
    }

    #[test]
    fn effective_classes_closed_under_addition(m in random_model(), top in 1i64..=4) {
        let max_beta = rat::int(top);
        let classes = effective_classes(&m, max_beta);
        for k in m.side(Phase::Plus) {
            let d = rat::int(m.weights()[k]);
            let on_lattice: Vec<Rat> = classes.iter().copied().filter(|b| (b * d).is_integer()).collect();
            for b1 in &on_lattice {
                for b2 in &on_lattice {
                    if b1 + b2 <= max_beta {
                        prop_assert!(classes.binary_search(&(b1 + b2)).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn operator_order_formula(m in random_model()) {
        let pos: i64 = m.weights().iter().filter(|&&d| d > 0).map(|d| d * d).sum();
        let neg: i64 = m.weights().iter().filter(|&&d| d < 0).map(|d| d * d).sum();
        prop_assert_eq!(QDifferenceOperator::for_model(&m, Phase::Plus).order(), pos.max(neg));
        prop_assert_eq!(QDifferenceOperator::for_model(&m, Phase::Minus).order(), pos.max(neg));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn shipped_branes_obey_their_shift_factor(s in annulus(0.3, 3.0), z in annulus(0.05, 20.0), which in 0usize..7) {
        let c = ctx();
        let (m, b) = if which < 3 {
            let m = small_model(Phase::Plus);
            let b = geometric_basis_brane(&m, which).unwrap();
            (m, b)
        } else {
            let m = small_model(Phase::Minus);
            let label = TorsionLabel::all(2)[which - 3];
            let b = lg_basis_brane(&m, label).unwrap();
            (m, b)
        };
        let sh = s_shift_factor(&b).unwrap();
        let here = eval_brane(&b, m.equiv(), s, z, &c).unwrap();
        let there = eval_brane(&b, m.equiv(), c.q() * s, z, &c).unwrap();
        let want = sh.eval(m.equiv(), s, z, &c) * here;
        prop_assert!((there - want).norm() <= c.tol_rel * want.norm().max(1e-300));
    }

    #[test]
    fn wall_cross_then_inverse_is_identity(s in annulus(0.3, 3.0), z in annulus(0.05, 20.0), k in 0usize..3) {
        let c = ctx();
        let m = small_model(Phase::Plus);
        let b = geometric_basis_brane(&m, k).unwrap();
        let w = eval_brane(&wall_cross(&b), m.equiv(), s, z, &c).unwrap();
        let back = w * theta(z.inv(), &c).unwrap() / theta((s * z).inv(), &c).unwrap();
        prop_assert!(rel(back, eval_brane(&b, m.equiv(), s, z, &c).unwrap()) < 1e-10);
    }

    #[test]
    fn integrand_shift_matches_derivation(s in annulus(0.3, 3.0), z in annulus(0.01, 0.5), k in 0usize..3) {
        let c = ctx();
        let m = small_model(Phase::Plus);
        let b = geometric_basis_brane(&m, k).unwrap();
        let ratio = integrand(&m, &b, c.q() * s, z, &c).unwrap() / integrand(&m, &b, s, z, &c).unwrap();
        let want = s_shift_ratio(&m, s, z, &c).unwrap();
        prop_assert!((ratio - want).norm() <= 1e-9 * want.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn residues_are_local(k in 0usize..3, beta in 0i64..4, z in unit_circle()) {
        let c = ctx();
        let m = small_model(Phase::Plus);
        let b = geometric_basis_brane(&m, k).unwrap();
        let z = z * 0.05;
        let f = |s: C64| Ok(integrand(&m, &b, s, z, &c)? / s);
        let s0 = m.equiv()[k].inv() * c.q_powi(beta);
        let full = numeric_residue(&f, s0, 1e-2 * s0.norm(), RESIDUE_NODES, &c).unwrap();
        let half = numeric_residue(&f, s0, 5e-3 * s0.norm(), RESIDUE_NODES, &c).unwrap();
        prop_assert!(rel(half, full) < c.tol_rel);
    }
}
