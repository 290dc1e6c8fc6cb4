//! Structural invariants at random points, each checked against an
//! independent route.

use num_rational::BigRational;
use proptest::prelude::*;
use slchar_core::asymptotics::{leading_asym_ch, leading_asym_f};
use slchar_core::bernoulli::{bernoulli_number, bernoulli_poly, binomial, higher_bernoulli_poly};
use slchar_core::characters::{character_ch, f_ls_exact, CharacterParams};
use slchar_core::decomposition::{
    f_ls_multivar_quadrature, rel_log2, residue_by_contour, residue_closed, script_f_ell, MultivarPoint,
};
use slchar_core::modular::{eisenstein_g2k, theta, theta_product, two_pi_i_pow};
use slchar_core::modular_transform::root_of_unity;
use slchar_core::partial_theta::{partial_theta, PartialThetaParams};
use slchar_core::series::{rat, rat_int, ExactQSeries};
use slchar_core::{PrecComplex, PrecFloat};

const P: u32 = 256;

fn c(re: f64, im: f64) -> PrecComplex {
    PrecComplex::from_f64(re, im, P)
}

fn rel(a: &PrecComplex, b: &PrecComplex) -> f64 {
    a.dist_log2(b) - b.log2_abs()
}

fn small_series() -> impl Strategy<Value = ExactQSeries> {
    (prop::collection::vec(-5i64..6, 1..8), 1i64..4).prop_map(|(mut cs, lead)| {
        cs[0] = lead;
        ExactQSeries::from_int_coeffs(1, 0, 12, &cs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invert_is_involutive(a in small_series()) {
        let back = a.invert().unwrap().invert().unwrap();
        prop_assert_eq!(back, a.truncate(12));
    }

    #[test]
    fn constant_term_is_binomial(ell in 2u32..7, s in 0u32..6) {
        let f = f_ls_exact(&CharacterParams::new(ell, s, 2).unwrap()).unwrap();
        let want = binomial(u64::from(s + ell - 1), u64::from(ell - 1));
        prop_assert_eq!(f.coeff(0), BigRational::from_integer(want));
    }

    #[test]
    fn character_heads_are_nonnegative_integers(ell in 2u32..5, s in 0u32..4) {
        let ch = character_ch(&CharacterParams::new(ell, s, 12).unwrap()).unwrap();
        for (_, v) in ch.terms() {
            prop_assert!(v.is_integer() && *v >= rat_int(0), "coefficient {}", v);
        }
    }

    #[test]
    fn bernoulli_families(n in 0usize..31, p in -7i64..8, q in 1i64..6) {
        let x = rat(p, q);
        prop_assert_eq!(higher_bernoulli_poly(n, 1, &x), bernoulli_poly(n, &x));
        if n >= 3 && n % 2 == 1 {
            prop_assert_eq!(bernoulli_number(n), rat_int(0));
        }
    }

    #[test]
    fn roots_of_unity_reduce_mod_one(p in -50i64..50, q in 1i64..12, k in -5i64..5) {
        let x = rat(p, q);
        let a = root_of_unity(&x, P);
        let b = root_of_unity(&(&x + rat_int(k)), P);
        prop_assert!(a.dist_log2(&b) < -245.0);
    }

    #[test]
    fn leading_terms_do_not_depend_on_s(ell in 2u32..9, s in 1u32..6) {
        prop_assert_eq!(leading_asym_f(ell, 0), leading_asym_f(ell, s));
        prop_assert_eq!(leading_asym_ch(ell, 0), leading_asym_ch(ell, s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn theta_sum_matches_product(zr in -0.5f64..0.5, zi in -0.4f64..0.4, tr in -0.5f64..0.5, ti in 0.6f64..1.5) {
        let z = c(zr, zi);
        let tau = c(tr, ti);
        let a = theta(&z, &tau).unwrap();
        let b = theta_product(&z, &tau).unwrap();
        prop_assert!(rel(&a, &b) < -200.0);
    }

    #[test]
    fn eisenstein_s_law(k in 1u32..5, tr in -0.5f64..0.5, ti in 0.9f64..1.4) {
        // G_2k(-1/tau) = tau^2k G_2k(tau), plus 2 pi i tau when k = 1, both sides by q-expansion
        let tau = c(tr, ti);
        let s = (-&PrecComplex::one(P)) / &tau;
        let lhs = eisenstein_g2k(k, &s, 400).unwrap().value;
        let mut rhs = &eisenstein_g2k(k, &tau, 200).unwrap().value * &tau.powi(2 * i64::from(k));
        if k == 1 {
            rhs = &rhs - &(&two_pi_i_pow(1, P) * &tau);
        }
        prop_assert!(rel(&lhs, &rhs) < -150.0);
    }

    #[test]
    fn partial_theta_completion(p in 1i64..7, q in 1i64..4, m2 in 1i64..5, zr in -0.3f64..0.3, zi in 0.05f64..0.3, tr in -0.3f64..0.3, ti in 0.8f64..1.3) {
        // th+_(r,0,M)(z) + th+_(-r-2M,0,M)(-z) = e(tau (M-r)^2/(4M) + z (M-r)) theta(2Mz - 1/2 + (M-r) tau; 2M tau)
        let r = rat(p, q);
        let m = rat(m2, 2);
        let z = c(zr, zi);
        let tau = c(tr, ti);
        let p1 = PartialThetaParams::new(r.clone(), 0, m.clone()).unwrap();
        let p2 = PartialThetaParams::new(-&r - rat_int(2) * &m, 0, m.clone()).unwrap();
        let lhs = &partial_theta(&p1, &z, &tau).unwrap().value + &partial_theta(&p2, &(-&z), &tau).unwrap().value;
        let mr = PrecFloat::from_rational(&(&m - &r), P);
        let mf = PrecFloat::from_rational(&m, P);
        let pref = (&tau.scale(&(&mr.square() / &mf.ldexp(2))) + &z.scale(&mr)).exp_2pi_i();
        let arg = &(&z.scale(&mf.ldexp(1)) - &c(0.5, 0.0)) + &tau.scale(&mr);
        let rhs = &pref * &theta(&arg, &tau.scale(&mf.ldexp(1))).unwrap();
        prop_assert!(lhs.dist_log2(&rhs) - rhs.abs_f64().max(1.0).log2() < -180.0);
    }
}

fn multivar_point(ell: usize, seeds: &[(f64, f64)], tr: f64, ti: f64) -> Option<MultivarPoint> {
    let zs = seeds[..ell - 1]
        .iter()
        .map(|&(a, b)| c(a, b * ti / ell as f64))
        .collect();
    let p = MultivarPoint::new(zs, c(tr, ti)).ok()?;
    p.check_distinct().ok()?;
    let (lo, hi) = p.contour_strip();
    (hi - lo > 0.2 * ti).then_some(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn elliptic_shift_of_integrand(ell in 2usize..5, seeds in prop::collection::vec((-0.5f64..0.5, 0.15f64..0.85), 4), wr in -0.5f64..0.5, wi in 0.0f64..0.5, tr in -0.3f64..0.3, ti in 0.8f64..1.3) {
        let Some(pt) = multivar_point(ell, &seeds, tr, ti) else { return Ok(()) };
        let w = c(wr, wi);
        let a = script_f_ell(&w, pt.ws(), pt.tau()).unwrap();
        let b = script_f_ell(&(&w + &PrecComplex::one(P)), pt.ws(), pt.tau()).unwrap();
        let sign = if ell % 2 == 0 { 1 } else { -1 };
        prop_assert!(rel(&b, &a.mul_i64(sign)) < -200.0);
    }

    #[test]
    fn quadrature_is_contour_independent(ell in 2usize..4, seeds in prop::collection::vec((-0.5f64..0.5, 0.15f64..0.85), 3), s in 0i64..3, tr in -0.3f64..0.3, ti in 0.8f64..1.3) {
        let Some(pt) = multivar_point(ell, &seeds, tr, ti) else { return Ok(()) };
        let (lo, hi) = pt.contour_strip();
        let w = hi - lo;
        let a = f_ls_multivar_quadrature(s, &pt, lo + 0.3 * w, -120.0).unwrap();
        let b = f_ls_multivar_quadrature(s, &pt, lo + 0.7 * w, -120.0).unwrap();
        prop_assert!(rel_log2(&a, &b) < -100.0);
    }

    #[test]
    fn residues_match_contour_integrals(ell in 2usize..5, seeds in prop::collection::vec((-0.5f64..0.5, 0.15f64..0.85), 4), tr in -0.3f64..0.3, ti in 0.8f64..1.3) {
        let Some(pt) = multivar_point(ell, &seeds, tr, ti) else { return Ok(()) };
        for nu in 0..ell {
            let a = residue_by_contour(pt.ws(), nu, pt.tau(), 1e-3, 64).unwrap();
            let b = residue_closed(pt.ws(), nu, pt.tau()).unwrap();
            prop_assert!(rel_log2(&a, &b) < -60.0);
        }
    }
}
