//! Partial theta functions, Euler-Maclaurin summation and the expansion
//! families `F_(j,r)(t)` and `G_(j,r)(t)`.
//!
//! `theta+_(r,eps,M)(z; tau) = sum_{n>=0} (-1)^(n eps) zeta^(2Mn - r) q^((2Mn - r)^2 / (4M))`.
//!
//! For `f(x) = x^k e^(-x^2)` Euler-Maclaurin gives
//! `sum_{n>=0} f((n + a) h) = I_f / h - sum_n B_(n+1)(a)/(n+1)! f^(n)(0) h^n + ..`,
//! and with `h = sqrt(t)` this produces the expansions in powers of `t`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bernoulli::{factorial, higher_bernoulli_polynomial};
use crate::complex::PrecComplex;
use crate::error::{Error, Result};
use crate::float::PrecFloat;
use crate::modular::{check_upper_half_plane, Certified};
use crate::pigraded::{PiGradedRational, PiPoly};
use crate::series::{rat, rat_int};

/// Index `(r, eps, M)` of a partial theta function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialThetaParams {
    pub r: BigRational,
    pub epsilon: u8,
    pub m: BigRational,
}

impl PartialThetaParams {
    pub fn new(r: BigRational, epsilon: u8, m: BigRational) -> Result<Self> {
        if epsilon > 1 {
            return Err(Error::InvalidParameter("epsilon must be 0 or 1".into()));
        }
        if !m.is_positive() {
            return Err(Error::InvalidParameter("M must be positive".into()));
        }
        Ok(PartialThetaParams { r, epsilon, m })
    }

    /// Whether `r - M` is an integer, as for all partial theta functions
    /// attached to characters.
    pub fn is_integral_shift(&self) -> bool {
        (&self.r - &self.m).is_integer()
    }

    /// Exponent `2Mn - r` of the `n`-th term.
    pub fn a(&self, n: u64) -> BigRational {
        rat_int(2) * &self.m * rat_int(n as i64) - &self.r
    }
}

/// `theta+_(r,eps,M)(z; tau)` with a bound on the neglected tail.
pub fn partial_theta(params: &PartialThetaParams, z: &PrecComplex, tau: &PrecComplex) -> Result<Certified> {
    check_upper_half_plane(tau)
        .map_err(|_| Error::OutsideDomain("partial theta diverges unless Im(tau) > 0".into()))?;
    let prec = z.prec().max(tau.prec());
    let wp = prec + 32;
    let z = z.with_prec(wp);
    let tau = tau.with_prec(wp);
    let m = PrecFloat::from_rational(&params.m, wp);
    let two_m = m.ldexp(1);
    let a0 = PrecFloat::from_rational(&(-params.r.clone()), wp);
    // term_0 = e^(2 pi i (a0 z + tau a0^2 / 4M)); ratio_n = e^(2 pi i (2M z + tau (a_n + M)))
    let e0 = &z.scale(&a0) + &tau.scale(&(&a0.square() / &m.ldexp(2)));
    let mut term = e0.exp_2pi_i();
    let mut ratio = (&z.scale(&two_m) + &tau.scale(&(&a0 + &m))).exp_2pi_i();
    let step = tau.scale(&two_m).exp_2pi_i();
    let sign_flip = params.epsilon == 1;
    let mut sum = PrecComplex::zero(wp);
    let mut scale_log2 = f64::NEG_INFINITY;
    let mut n = 0u64;
    loop {
        let t = if sign_flip && n % 2 == 1 { -&term } else { term.clone() };
        scale_log2 = scale_log2.max(t.log2_abs());
        sum = &sum + &t;
        term = &term * &ratio;
        let r_log2 = ratio.log2_abs();
        ratio = &ratio * &step;
        n += 1;
        // once the ratios stay below 1/2 the tail is at most twice the next term
        if r_log2 < -1.0 {
            let tail = term.log2_abs() + 1.0;
            if tail < scale_log2.min(0.0) - f64::from(wp) - 4.0 || term.is_zero() {
                return Ok(Certified {
                    value: sum.with_prec(prec),
                    err_log2: tail.max(scale_log2 - f64::from(prec) + 1.0),
                });
            }
        }
        if n > 10_000_000 {
            return Err(Error::TailTooLarge("partial theta did not converge".into()));
        }
    }
}

/// Asymptotic expansion
/// `exp(rate/t) (t/scale)^power sum_n coeffs[n] t^(lead + n)`,
/// with remainder `O(exp(rate/t) (t/scale)^power t^error_order)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsympExpansion {
    pub rate: PiGradedRational,
    pub scale: PiGradedRational,
    pub power: BigRational,
    pub lead: i64,
    pub coeffs: Vec<PiPoly>,
    pub error_order: BigRational,
}

impl AsympExpansion {
    /// Number of retained coefficients minus one.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Value of the retained terms at `t > 0`.
    pub fn eval(&self, t: &PrecFloat) -> PrecFloat {
        let prec = t.prec();
        let wp = prec + 16;
        let t = t.with_prec(wp);
        let mut acc = PrecFloat::zero(wp);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &t) + &c.to_float(wp);
        }
        acc = &acc * &t.powi(self.lead);
        let base = &t / &self.scale.to_float(wp);
        acc = &acc * &base.pow_rational(&self.power);
        if !self.rate.is_zero() {
            acc = &acc * &(&self.rate.to_float(wp) / &t).exp();
        }
        acc.with_prec(prec)
    }

    /// Same expansion with fewer coefficients; the error order drops accordingly.
    pub fn truncated(&self, n: usize) -> Self {
        let mut out = self.clone();
        let keep = (n + 1).min(self.coeffs.len());
        let dropped = self.coeffs.len() - keep;
        out.coeffs.truncate(keep);
        out.error_order = &self.error_order - rat_int(dropped as i64);
        out
    }
}

impl fmt::Display for AsympExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(({})/t) (t/({}))^({}) [", self.rate, self.scale, self.power)?;
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c}) t^{}", self.lead + n as i64)?;
        }
        write!(f, " + O(t^{})]", self.error_order)
    }
}

/// Derivatives at 0 of `x^k e^(-x^2)`, orders `0..=n_max`, from its Taylor series.
pub fn gaussian_moment_derivatives(k: u32, n_max: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n_max + 1];
    let mut m = 0u64;
    loop {
        let deg = k as usize + 2 * m as usize;
        if deg > n_max {
            break;
        }
        // coefficient (-1)^m / m! at x^deg, derivative = deg! * coefficient
        let c = BigRational::new(BigInt::one(), factorial(m));
        let c = if m % 2 == 1 { -c } else { c };
        out[deg] = c * BigRational::from_integer(factorial(deg as u64));
        m += 1;
    }
    out
}

/// `int_0^inf x^k e^(-x^2) dx` for odd `k = 2j - 1`, equal to `(j-1)!/2`.
pub fn odd_gaussian_integral(j: u32) -> BigRational {
    assert!(j >= 1, "need j >= 1");
    BigRational::new(factorial(u64::from(j) - 1), BigInt::from(2))
}

/// Correction terms `-B_(n+1)(alpha)/(n+1)! f^(n)(0)` for `n = 0..derivs.len()`.
pub fn euler_maclaurin_coefficients(derivs_at_0: &[BigRational], alpha: &BigRational) -> Vec<BigRational> {
    derivs_at_0
        .iter()
        .enumerate()
        .map(|(n, d)| {
            if d.is_zero() {
                return BigRational::zero();
            }
            let b = higher_bernoulli_polynomial(n + 1, 1).eval(alpha);
            -(b / BigRational::from_integer(factorial(n as u64 + 1))) * d
        })
        .collect()
}

/// Truncated Euler-Maclaurin approximation of `sum_{n>=0} f((n + alpha) t)`:
/// `I_f / t - sum_{n<=N} B_(n+1)(alpha)/(n+1)! f^(n)(0) t^n`.
pub fn euler_maclaurin_sum(
    derivs_at_0: &[BigRational],
    i_f: &PrecFloat,
    alpha: &BigRational,
    t: &PrecFloat,
    n: usize,
) -> PrecFloat {
    let prec = t.prec();
    let coeffs = euler_maclaurin_coefficients(&derivs_at_0[..(n + 1).min(derivs_at_0.len())], alpha);
    let mut acc = PrecFloat::zero(prec);
    for c in coeffs.iter().rev() {
        acc = &(&acc * t) + &PrecFloat::from_rational(c, prec);
    }
    &(i_f / t) + &acc
}

fn sum_cutoff_reached(log2_term: f64, scale_log2: f64, prec: u32) -> bool {
    log2_term < scale_log2.min(0.0) - f64::from(prec) - 8.0
}

/// `F_(j,r)(t) = 2^(-2j) t^j sum_{n>=0} (-1)^n (n + r)^(2j) e^(-(n+r)^2 t / 4)` by direct summation.
pub fn script_f(j: u32, r: &BigRational, t: &PrecFloat) -> Result<PrecFloat> {
    if !t.is_positive() {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    let prec = t.prec();
    let wp = prec + 32;
    let t = t.with_prec(wp);
    let rf = PrecFloat::from_rational(r, wp);
    let tf = t.to_f64();
    let mut sum = PrecFloat::zero(wp);
    let mut scale = f64::NEG_INFINITY;
    let mut n = 0i64;
    loop {
        let x = &PrecFloat::from_i64(n, wp) + &rf;
        let xsq = x.square();
        let e = (-(&(&xsq * &t).ldexp(-2))).exp();
        let term = &x.powi(2 * i64::from(j)) * &e;
        let lt = term.log2_abs();
        scale = scale.max(lt);
        sum = if n % 2 == 0 { &sum + &term } else { &sum - &term };
        let xf = x.to_f64();
        if xf > 0.0 && xf * xf * tf / 4.0 > f64::from(2 * j) && sum_cutoff_reached(lt, scale, wp) {
            break;
        }
        n += 1;
        if n > 100_000_000 {
            return Err(Error::TailTooLarge("F series did not converge".into()));
        }
    }
    let pref = &t.powi(i64::from(j)) * &PrecFloat::one(wp).ldexp(-2 * i64::from(j));
    Ok((&pref * &sum).with_prec(prec))
}

/// `G_(j,r)(t) = t^(j - 1/2) sum_{n>=0} (n + r)^(2j-1) e^(-(n+r)^2 t)` by direct summation.
pub fn script_g(j: u32, r: &BigRational, t: &PrecFloat) -> Result<PrecFloat> {
    if !t.is_positive() || j == 0 {
        return Err(Error::InvalidParameter("need t > 0 and j >= 1".into()));
    }
    let prec = t.prec();
    let wp = prec + 32;
    let t = t.with_prec(wp);
    let rf = PrecFloat::from_rational(r, wp);
    let tf = t.to_f64();
    let mut sum = PrecFloat::zero(wp);
    let mut scale = f64::NEG_INFINITY;
    let mut n = 0i64;
    loop {
        let x = &PrecFloat::from_i64(n, wp) + &rf;
        let e = (-(&x.square() * &t)).exp();
        let term = &x.powi(2 * i64::from(j) - 1) * &e;
        let lt = term.log2_abs();
        scale = scale.max(lt);
        sum = &sum + &term;
        let xf = x.to_f64();
        if xf > 0.0 && xf * xf * tf > f64::from(2 * j) && sum_cutoff_reached(lt, scale, wp) {
            break;
        }
        n += 1;
        if n > 100_000_000 {
            return Err(Error::TailTooLarge("G series did not converge".into()));
        }
    }
    let pref = t.pow_rational(&rat(2 * i64::from(j) - 1, 2));
    Ok((&pref * &sum).with_prec(prec))
}

/// Expansion of `F_(j,r)` in powers of `t` with `N + 1` terms:
/// `F_(j,r)(t) = sum_{n<=N} c_n t^(n+j) + O(t^(N+j+1))`.
pub fn script_f_expansion(j: u32, r: &BigRational, n: usize) -> AsympExpansion {
    // F = sum_m FF_j((m + r/2) h) - FF_j((m + (r+1)/2) h), h = sqrt(t), FF_j = x^(2j) e^(-x^2)
    let top = 2 * j as usize + 2 * n;
    let d = gaussian_moment_derivatives(2 * j, top);
    let a = euler_maclaurin_coefficients(&d, &(r / rat_int(2)));
    let b = euler_maclaurin_coefficients(&d, &((r + rat_int(1)) / rat_int(2)));
    let coeffs = (0..=n)
        .map(|k| {
            let idx = 2 * j as usize + 2 * k;
            PiPoly::rational(&a[idx] - &b[idx])
        })
        .collect();
    AsympExpansion {
        rate: PiGradedRational::zero(),
        scale: PiGradedRational::one(),
        power: BigRational::zero(),
        lead: i64::from(j),
        coeffs,
        error_order: rat_int(n as i64 + i64::from(j) + 1),
    }
}

/// Expansion of `G_(j,r)` with the Bernoulli terms `m = 0..=N`:
/// `G_(j,r)(t) = (j-1)!/(2 sqrt t) - sum_m B_(2j+2m)(r)/(2j+2m) (-1)^m/m! t^(j-1/2+m) + O(t^(j+N+1/2))`.
pub fn script_g_expansion(j: u32, r: &BigRational, n: usize) -> AsympExpansion {
    assert!(j >= 1, "need j >= 1");
    let top = 2 * j as usize - 1 + 2 * n;
    let d = gaussian_moment_derivatives(2 * j - 1, top);
    let em = euler_maclaurin_coefficients(&d, r);
    // overall t^(-1/2) (c_0 + c_1 t + ..), c_0 = I, c_(j+m) = em[2j-1+2m]
    let len = j as usize + n + 1;
    let mut coeffs = vec![PiPoly::zero(); len];
    coeffs[0] = PiPoly::rational(odd_gaussian_integral(j));
    for m in 0..=n {
        let idx = 2 * j as usize - 1 + 2 * m;
        coeffs[j as usize + m] = coeffs[j as usize + m].add(&PiPoly::rational(em[idx].clone()));
    }
    AsympExpansion {
        rate: PiGradedRational::zero(),
        scale: PiGradedRational::one(),
        power: rat(-1, 2),
        lead: 0,
        coeffs,
        error_order: rat_int(i64::from(j) + n as i64 + 1),
    }
}

/// Two-point convergence-order estimate `log2(err(t) / err(t/2))`.
pub fn halving_order(err_t: &PrecFloat, err_half: &PrecFloat) -> f64 {
    err_t.abs().log2_abs() - err_half.abs().log2_abs()
}

/// Observed error order of an expansion against a direct evaluator at `t` and `t/2`.
pub fn observed_order<F>(expansion: &AsympExpansion, direct: F, t: &PrecFloat) -> Result<f64>
where
    F: Fn(&PrecFloat) -> Result<PrecFloat>,
{
    let half = t.ldexp(-1);
    let e1 = &direct(t)? - &expansion.eval(t);
    let e2 = &direct(&half)? - &expansion.eval(&half);
    Ok(halving_order(&e1, &e2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernoulli::bernoulli_poly;
    use crate::modular::theta;

    const P: u32 = 256;

    fn c(re: f64, im: f64) -> PrecComplex {
        PrecComplex::from_f64(re, im, P)
    }

    #[test]
    fn completion_identity() {
        let r = rat_int(1);
        let m = rat(3, 2);
        let z = c(0.1, 0.2);
        let tau = c(0.0, 1.0);
        let p1 = PartialThetaParams::new(r.clone(), 0, m.clone()).unwrap();
        let p2 = PartialThetaParams::new(-&r - rat_int(2) * &m, 0, m.clone()).unwrap();
        let lhs = &partial_theta(&p1, &z, &tau).unwrap().value + &partial_theta(&p2, &(-&z), &tau).unwrap().value;
        let mr = PrecFloat::from_rational(&(&m - &r), P);
        let mf = PrecFloat::from_rational(&m, P);
        let pref = (&tau.scale(&(&mr.square() / &mf.ldexp(2))) + &z.scale(&mr)).exp_2pi_i();
        let arg = &(&z.scale(&mf.ldexp(1)) - &c(0.5, 0.0)) + &tau.scale(&mr);
        let rhs = &pref * &theta(&arg, &tau.scale(&mf.ldexp(1))).unwrap();
        assert!(lhs.dist_log2(&rhs) - rhs.log2_abs() < -230.0);
    }

    #[test]
    fn leading_monomial_dominates() {
        let p = PartialThetaParams::new(rat(1, 2), 1, rat(3, 2)).unwrap();
        let z = c(0.1, 0.05);
        let tau = c(0.0, 8.0);
        let v = partial_theta(&p, &z, &tau).unwrap();
        // zeta^(-r) q^(r^2/4M)
        let lead = (&z.scale(&PrecFloat::from_f64(-0.5, P)) + &tau.scale(&PrecFloat::from_rational(&rat(1, 24), P)))
            .exp_2pi_i();
        // next term is smaller by about exp(-2 pi 8.15), near 2^-74
        let rel = v.value.dist_log2(&lead) - lead.log2_abs();
        assert!(rel < -70.0 && rel > -78.0, "{rel}");
        assert!(partial_theta(&p, &z, &c(0.0, -1.0)).is_err());
    }

    #[test]
    fn periodicity_phase() {
        let p = PartialThetaParams::new(rat(1, 2), 0, rat(3, 2)).unwrap();
        let tau = c(0.2, 0.7);
        let z = c(0.13, 0.04);
        let a = partial_theta(&p, &z, &tau).unwrap().value;
        let b = partial_theta(&p, &(&z + &PrecComplex::one(P)), &tau).unwrap().value;
        let phase = c(-0.5, 0.0).exp_2pi_i();
        assert!(b.dist_log2(&(&a * &phase)) - a.log2_abs() < -230.0);
    }

    #[test]
    fn euler_maclaurin_gaussian() {
        let d = gaussian_moment_derivatives(0, 12);
        let i_f = PrecFloat::pi(P).sqrt().ldexp(-1);
        let h = PrecFloat::from_f64(0.5, P);
        let alpha = rat(1, 3);
        let mut direct = PrecFloat::zero(P);
        for n in 0..200 {
            let x = (n as f64 + 1.0 / 3.0) * 0.5;
            direct = &direct + &PrecFloat::from_f64(-x * x, P).exp();
        }
        let errs: Vec<f64> = [1usize, 3, 5, 9]
            .iter()
            .map(|&n| (&euler_maclaurin_sum(&d, &i_f, &alpha, &h, n) - &direct).abs().to_f64())
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2] && errs[2] > errs[3]);
        assert!(errs[3] < 1e-4);
        // all derivatives zero: only the integral term remains
        let zero = vec![BigRational::zero(); 4];
        let v = euler_maclaurin_sum(&zero, &PrecFloat::zero(P), &rat_int(0), &h, 3);
        assert!(v.is_zero());
    }

    #[test]
    fn derivative_parity() {
        for j in 0..5u32 {
            let d = gaussian_moment_derivatives(2 * j, 30);
            for (n, v) in d.iter().enumerate() {
                if n % 2 == 1 {
                    assert!(v.is_zero());
                }
            }
        }
        let d = gaussian_moment_derivatives(0, 4);
        assert_eq!(d[2], rat_int(-2));
        assert_eq!(d[4], rat_int(12));
    }

    #[test]
    fn f_expansion_matches_closed_form() {
        for j in 0..3u32 {
            for r in [rat(1, 6), rat(1, 2), rat(-2, 3), rat(5, 3)] {
                let e = script_f_expansion(j, &r, 5);
                for (n, coeff) in e.coeffs.iter().enumerate() {
                    let k = 2 * n + 2 * j as usize + 1;
                    let diff =
                        bernoulli_poly(k, &(&r / rat_int(2))) - bernoulli_poly(k, &((&r + rat_int(1)) / rat_int(2)));
                    let mut expect = -diff / (rat_int(k as i64) * BigRational::from_integer(factorial(n as u64)));
                    if n % 2 == 1 {
                        expect = -expect;
                    }
                    assert_eq!(coeff, &PiPoly::rational(expect));
                }
            }
        }
        assert_eq!(
            script_f_expansion(0, &rat(1, 3), 0).coeffs[0],
            PiPoly::rational(rat(1, 2))
        );
    }

    #[test]
    fn f_limit_and_g_leading() {
        let t = PrecFloat::from_f64(1e-3, P);
        let f0 = script_f(0, &rat(1, 3), &t).unwrap();
        assert!((f0.to_f64() - 0.5).abs() < 1e-3);
        let g = script_g(1, &rat(1, 2), &t).unwrap();
        assert!((g.to_f64() * t.to_f64().sqrt() - 0.5).abs() < 1e-3);
        assert_eq!(odd_gaussian_integral(3), rat_int(1));
        assert_eq!(
            script_g_expansion(3, &rat(1, 3), 1).coeffs[0],
            PiPoly::rational(rat_int(1))
        );
    }

    #[test]
    fn halving_orders() {
        let t = PrecFloat::from_f64(0.1, P);
        for n in 0..4usize {
            let e = script_f_expansion(1, &rat(1, 6), n);
            let o = observed_order(&e, |x| script_f(1, &rat(1, 6), x), &t).unwrap();
            let want = (n + 2) as f64;
            assert!((o - want).abs() < 0.3, "F n={n} order {o}");
            let e = script_g_expansion(2, &rat(1, 3), n);
            let o = observed_order(&e, |x| script_g(2, &rat(1, 3), x), &t).unwrap();
            let want = n as f64 + 2.5;
            assert!((o - want).abs() < 0.3, "G n={n} order {o}");
        }
    }
}
