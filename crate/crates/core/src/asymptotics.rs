//! Small-`t` behaviour of `F_(l,s)(e^-t)` and of the characters, the
//! constant `C_l` in its two closed forms, and the quantum dimension.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bernoulli::{binomial, binomial_rational, euler_poly, factorial, higher_bernoulli_poly};
use crate::characters::h_value;
use crate::complex::PrecComplex;
use crate::error::{Error, Result};
use crate::float::PrecFloat;
use crate::modular::{eta, Certified};
use crate::partial_theta::AsympExpansion;
use crate::pigraded::{IPower, PiGradedRational, PiPoly};
use crate::series::{rat, rat_int, ExactQSeries};

fn fact_rat(n: u64) -> BigRational {
    BigRational::from_integer(factorial(n))
}

/// `C_l = 2^(1-2l) (l-1)! / Gamma((l+1)/2)^2`.
pub fn c_ell(ell: u32) -> PiGradedRational {
    assert!(ell >= 1, "ell must be positive");
    let l = u64::from(ell);
    let two_pow = BigRational::new(BigInt::one(), BigInt::one() << (2 * l - 1));
    let num = two_pow * fact_rat(l - 1);
    if ell % 2 == 1 {
        let g = fact_rat((l - 1) / 2);
        PiGradedRational::new(num / (&g * &g), 0)
    } else {
        // Gamma(m + 1/2) = (2m)! sqrt(pi) / (4^m m!)
        let m = l / 2;
        let g = fact_rat(2 * m) / (BigRational::from_integer(BigInt::one() << (2 * m)) * fact_rat(m));
        PiGradedRational::new(num / (&g * &g), -1)
    }
}

/// The same constant from higher Bernoulli polynomials:
/// `(-1)^((l-1)/2) B^(l)_(l-1)(l/2) / (2 (l-1)!)` for odd `l`, and
/// `(-1)^(l/2+1) B^(l)_(l-2)(l/2) / (2 pi (l-2)!)` for even `l`.
pub fn c_ell_star(ell: u32) -> PiGradedRational {
    assert!(ell >= 1, "ell must be positive");
    let l = u64::from(ell);
    let x = rat(i64::from(ell), 2);
    if ell % 2 == 1 {
        let b = higher_bernoulli_poly((l - 1) as usize, i64::from(ell), &x);
        let sign = if ((l - 1) / 2) % 2 == 0 {
            rat_int(1)
        } else {
            rat_int(-1)
        };
        PiGradedRational::new(sign * b / (rat_int(2) * fact_rat(l - 1)), 0)
    } else {
        let b = higher_bernoulli_poly((l - 2) as usize, i64::from(ell), &x);
        let sign = if (l / 2 + 1) % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        PiGradedRational::new(sign * b / (rat_int(2) * fact_rat(l - 2)), -1)
    }
}

/// `sum_(k=0..n) C(n,k) (-1)^k / (k + c)`.
pub fn binomial_sum(n: u64, c: u64) -> BigRational {
    let mut acc = BigRational::zero();
    for k in 0..=n {
        let term = BigRational::new(binomial(n, k), BigInt::from(k + c));
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `n! (c-1)! / (n+c)!`.
pub fn binomial_sum_closed(n: u64, c: u64) -> BigRational {
    fact_rat(n) * fact_rat(c - 1) / fact_rat(n + c)
}

/// Laurent coefficient at `z^-1` of `z^k e^(l z/2) / (e^z - 1)^l`, by
/// multiplying out the exponential series.
pub fn residue_series(ell: u32, k: u32) -> BigRational {
    let l = i64::from(ell);
    // need the coefficient of z^(l-1-k) in e^(l z/2) (z/(e^z-1))^l
    if i64::from(k) > l - 1 {
        return BigRational::zero();
    }
    let len = (l - i64::from(k)) as usize;
    let expm1_over_z: Vec<BigRational> = (0..len)
        .map(|n| BigRational::new(BigInt::one(), factorial(n as u64 + 1)))
        .collect();
    let d = ExactQSeries::from_coeffs(1, 0, len as i64, expm1_over_z);
    let g = d
        .invert()
        .expect("unit constant term")
        .pow(l)
        .expect("nonnegative power");
    let half = rat(l, 2);
    let e: Vec<BigRational> = (0..len)
        .map(|n| num_traits::pow(half.clone(), n) / fact_rat(n as u64))
        .collect();
    let e = ExactQSeries::from_coeffs(1, 0, len as i64, e);
    g.mul(&e).coeff(len as i64 - 1)
}

/// `Res e^(l z/2)/(e^z-1)^l = C(l/2 - 1, l - 1)`.
pub fn residue_closed(ell: u32) -> BigRational {
    binomial_rational(&(rat(i64::from(ell), 2) - rat_int(1)), u64::from(ell) - 1)
}

/// `I_l = Res z e^(l z/2)/(e^z-1)^l = (-1)^(l/2+1) ((l/2-1)!)^2/(l-1)!` for even `l`.
pub fn i_ell_closed(ell: u32) -> BigRational {
    assert!(ell.is_multiple_of(2) && ell >= 2, "I_l is defined for even l");
    let m = u64::from(ell / 2);
    let v = fact_rat(m - 1) * fact_rat(m - 1) / fact_rat(u64::from(ell) - 1);
    if (m + 1) % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Outcome of the exact identity checks for the constant `C_l`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AppendixReport {
    pub ell_max: u32,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl AppendixReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check `C_l = C_l*` and the recurrence for `l <= ell_max`, the binomial sum
/// for `n, c <= 20`, and the residue evaluations.
pub fn verify_appendix(ell_max: u32) -> Result<AppendixReport> {
    if ell_max < 2 {
        return Err(Error::InvalidParameter("ell_max must be at least 2".into()));
    }
    let mut rep = AppendixReport {
        ell_max,
        ..Default::default()
    };
    let mut check = |ok: bool, what: String| {
        rep.checks += 1;
        if !ok {
            rep.failures.push(what);
        }
    };
    for ell in 1..=ell_max {
        let c = c_ell(ell);
        let cs = c_ell_star(ell);
        check(c == cs, format!("C_{ell} = {c} but C*_{ell} = {cs}"));
        if ell + 2 <= ell_max {
            let f = rat(i64::from(ell), 4 * (i64::from(ell) + 1));
            check(
                c_ell(ell + 2) == c.scale(&f),
                format!("recurrence C_{} from C_{ell}", ell + 2),
            );
            check(
                c_ell_star(ell + 2) == cs.scale(&f),
                format!("recurrence C*_{} from C*_{ell}", ell + 2),
            );
        }
        check(
            residue_series(ell, 0) == residue_closed(ell),
            format!("residue at l = {ell}"),
        );
        if ell % 2 == 0 {
            check(residue_series(ell, 1) == i_ell_closed(ell), format!("I_{ell}"));
        }
    }
    for n in 0..=20 {
        for c in 1..=20 {
            check(
                binomial_sum(n, c) == binomial_sum_closed(n, c),
                format!("binomial sum at n = {n}, c = {c}"),
            );
        }
    }
    Ok(rep)
}

/// Leading term `C_l (t/2pi)^(1-l^2/2) e^(-pi^2 (l^2-2l)/(6t))` of `F_(l,s)(e^-t)`.
/// The index `s` does not enter.
pub fn leading_asym_f(ell: u32, _s: u32) -> AsympExpansion {
    let l = i64::from(ell);
    AsympExpansion {
        rate: PiGradedRational::new(rat(-(l * l - 2 * l), 6), 2),
        scale: PiGradedRational::new(rat_int(2), 1),
        power: rat(2 - l * l, 2),
        lead: 0,
        coeffs: vec![PiPoly::from_graded(&c_ell(ell))],
        error_order: rat_int(1),
    }
}

/// Leading term `C_l (t/2pi)^(1/2) e^(pi^2 (2l-1)/(6t))` of `ch(e^-t)`.
pub fn leading_asym_ch(ell: u32, _s: u32) -> AsympExpansion {
    let l = i64::from(ell);
    AsympExpansion {
        rate: PiGradedRational::new(rat(2 * l - 1, 6), 2),
        scale: PiGradedRational::new(rat_int(2), 1),
        power: rat(1, 2),
        lead: 0,
        coeffs: vec![PiPoly::from_graded(&c_ell(ell))],
        error_order: rat_int(1),
    }
}

/// Expansion of the `l = 3` character at `q = e^-t` through `t^(N-2)` in
/// the bracket:
///
/// `ch = e^(5 pi^2/(6t)) (t/2pi)^(5/2) [(pi^2/(4t^2) - 3/(4t)) A + (9/4) B]`,
/// `A = sum_n E_2n(r) (-3t/2)^n/n!`, `B = sum_n E_(2n+2)(r) (-3t/2)^n/n!`,
/// `r = 1/2 - s/3`. The relative error is `O(t^(N+1))`.
pub fn full_expansion_sl3(s: u32, n: usize) -> AsympExpansion {
    let r = rat(1, 2) - rat(i64::from(s), 3);
    let m = rat(-3, 2);
    let a = |k: usize| euler_poly(2 * k, &r) * num_traits::pow(m.clone(), k) / fact_rat(k as u64);
    let b = |k: usize| euler_poly(2 * k + 2, &r) * num_traits::pow(m.clone(), k) / fact_rat(k as u64);
    let coeffs = (0..=n)
        .map(|k| {
            let mut c = PiPoly::zero();
            c.add_term(2, a(k) / rat_int(4));
            if k >= 1 {
                c.add_term(0, -a(k - 1) * rat(3, 4));
            }
            if k >= 2 {
                c.add_term(0, b(k - 2) * rat(9, 4));
            }
            c
        })
        .collect();
    AsympExpansion {
        rate: PiGradedRational::new(rat(5, 6), 2),
        scale: PiGradedRational::new(rat_int(2), 1),
        power: rat(5, 2),
        lead: -2,
        coeffs,
        error_order: rat_int(n as i64 - 1),
    }
}

/// Character value `ch(tau) = (-i)^l H_(s+l/2)(tau) / eta(tau)^(2l-1)`.
pub fn character_value(ell: u32, s: u32, tau: &PrecComplex) -> Result<PrecComplex> {
    let h = h_value(ell, s, tau)?;
    let e = eta(tau)?;
    let v = &h / &e.powi(2 * i64::from(ell) - 1);
    Ok(IPower::MINUS_I.pow(i64::from(ell)).apply(&v))
}

/// `ch(e^-t)` for real `t > 0`, i.e. at `tau = i t/(2 pi)`.
pub fn character_at_real_t(ell: u32, s: u32, t: &PrecFloat) -> Result<PrecFloat> {
    let tau = PrecComplex::new(PrecFloat::zero(t.prec()), t / &PrecFloat::pi(t.prec()).ldexp(1));
    Ok(character_value(ell, s, &tau)?.re)
}

/// Relative error of the truncated `l = 3` expansion at `t`.
pub fn sl3_relative_error(s: u32, n: usize, t: &PrecFloat) -> Result<PrecFloat> {
    let exact = character_at_real_t(3, s, t)?;
    let approx = full_expansion_sl3(s, n).eval(t);
    Ok((&(&exact - &approx) / &exact).abs())
}

/// `ch[V_s](it) / ch[V_0](it)`.
pub fn qdim_ratio(ell: u32, s: u32, t: &PrecFloat) -> Result<PrecComplex> {
    let tau = PrecComplex::new(PrecFloat::zero(t.prec()), t.clone());
    let hs = h_value(ell, s, &tau)?;
    if s == 0 {
        return Ok(PrecComplex::one(t.prec()));
    }
    let h0 = h_value(ell, 0, &tau)?;
    Ok(&hs / &h0)
}

/// First-order coefficient `k` in `ratio = 1 + k t + O(t^2)` at `tau = it`
/// for `l = 3`, read off from the full expansion:
/// `k = -3 pi (E_2(1/2 - s/3) - E_2(1/2))`.
pub fn qdim_slope_sl3(s: u32) -> PiGradedRational {
    let d = euler_poly(2, &(rat(1, 2) - rat(i64::from(s), 3))) - euler_poly(2, &rat(1, 2));
    PiGradedRational::new(d * rat_int(-3), 1)
}

/// The slope `-s^2 (pi^2 - 1)/(3 pi)` as a sum of pi-graded terms.
pub fn qdim_slope_stated(s: u32) -> PiPoly {
    let s2 = rat_int(i64::from(s) * i64::from(s));
    let mut p = PiPoly::zero();
    p.add_term(1, -&s2 / rat_int(3));
    p.add_term(-1, s2 / rat_int(3));
    p
}

/// Slope estimate from `(t, ratio)` samples with `t2 = t1/2`:
/// `2 g(t2) - g(t1)` with `g(t) = (ratio(t) - 1)/t`.
pub fn richardson_slope(t1: f64, r1: f64, t2: f64, r2: f64) -> f64 {
    let g1 = (r1 - 1.0) / t1;
    let g2 = (r2 - 1.0) / t2;
    (t1 * g2 - t2 * g1) / (t1 - t2)
}

/// `F_(l,s)(e^-t)` divided by its leading term, with an error bound.
pub fn leading_ratio_f(series: &ExactQSeries, ell: u32, s: u32, t: &PrecFloat) -> Result<Certified> {
    let f = crate::characters::f_ls_eval_real(series, ell, s, t)?;
    let lead = leading_asym_f(ell, s).eval(t);
    let v = &f.value.re / &lead;
    Ok(Certified {
        value: PrecComplex::from_real(v),
        err_log2: f.err_log2 - lead.log2_abs(),
    })
}

/// `F_(3,s)(e^-t)` over its leading term, predicted from the full character
/// expansion via `F = e^(t (h_s + 1/2)) (2 pi/t)^4 e^(-4 pi^2/(3t)) ch`,
/// which holds up to a relative `O(e^(-4 pi^2/t))`.
pub fn leading_ratio_sl3_predicted(s: u32, n: usize, t: &PrecFloat) -> PrecFloat {
    let prec = t.prec();
    let pi = PrecFloat::pi(prec);
    let h = PrecFloat::from_rational(&(crate::characters::h_s(3, s) + rat(1, 2)), prec);
    let log_pref = &(t * &h) - &(&pi.square().mul_i64(4) / &t.mul_i64(3));
    let pref = &log_pref.exp() * &(&pi.ldexp(1) / t).powi(4);
    &(&pref * &full_expansion_sl3(s, n).eval(t)) / &leading_asym_f(3, s).eval(t)
}

/// First-order coefficient `k` in `F_(3,s)(e^-t) / leading = 1 + k t + O(t^2)`:
/// `k = h_s + 1/2 - (3/2) E_2(1/2 - s/3) - 3/pi^2`.
pub fn leading_ratio_slope_sl3(s: u32) -> PiPoly {
    let r = rat(1, 2) - rat(i64::from(s), 3);
    let mut k = PiPoly::zero();
    k.add_term(
        0,
        crate::characters::h_s(3, s) + rat(1, 2) - euler_poly(2, &r) * rat(3, 2),
    );
    k.add_term(-2, rat_int(-3));
    k
}
