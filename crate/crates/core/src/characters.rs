//! Characters of the simple affine vertex algebra of `sl_l` at level `-1`
//! and the numerators `F_(l,s)(q)`.
//!
//! `F_(l,s)(q) = (q)_inf^(l^2-1) [zeta^s] (q)_inf / ((zeta)_inf^l (zeta^-1 q)_inf^l)`
//! is computed two ways: by expanding the bivariate product, and from the
//! Laurent coefficients of `eta^(3l)/theta^l` paired with partial theta
//! functions,
//!
//! `F = (q)^(l^2-2l) q^(-h_s-l/8) sum_(j = l mod 2) e_(l-j)(Ghat)/(j-1)! sum_n (-1)^(nl) a_n^(j-1) q^(a_n^2/2l)`
//!
//! with `a_n = l n + l/2 - s`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::bernoulli::{binomial, factorial};
use crate::complex::PrecComplex;
use crate::error::{Error, Result};
use crate::float::PrecFloat;
use crate::modular::{
    check_upper_half_plane, eisenstein_g2k_auto, eta, exp_eisenstein_coefficients, g_ell_with_eta, guard,
    laurent_coefficients_d, Certified,
};
use crate::pigraded::IPower;
use crate::series::{pochhammer_inf, q_pochhammer, rat, rat_int, ExactQSeries};

/// Rank parameter `l`, highest-weight index `s` and truncation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharacterParams {
    pub ell: u32,
    pub s: u32,
    /// Coefficients of `q^n` are exact for `n < trunc`.
    pub trunc: i64,
}

impl CharacterParams {
    pub fn new(ell: u32, s: u32, trunc: i64) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidParameter(format!("ell must be at least 2, got {ell}")));
        }
        if trunc < 1 {
            return Err(Error::InvalidParameter(format!(
                "trunc must be at least 1, got {trunc}"
            )));
        }
        Ok(CharacterParams { ell, s, trunc })
    }
}

/// Conformal weight `h_s = s^2/(2l) + s/2`.
pub fn h_s(ell: u32, s: u32) -> BigRational {
    let s = i64::from(s);
    rat(s * s, 2 * i64::from(ell)) + rat(s, 2)
}

/// Central charge `-(l+1)`.
pub fn central_charge(ell: u32) -> i64 {
    -(i64::from(ell) + 1)
}

/// `F_(l,s)` for `s = 0..=s_max` from one expansion of the bivariate product.
pub fn f_ls_exact_all(ell: u32, s_max: u32, trunc: i64) -> Result<Vec<ExactQSeries>> {
    CharacterParams::new(ell, s_max, trunc)?;
    let l = i64::from(ell);
    let cap = i64::from(s_max) + trunc;
    // 1/(zeta)^l, then 1/(zeta^-1 q)^l and (q) factor by factor
    let mut z = pochhammer_inf(1, &rat_int(0), -l, trunc, cap)?;
    for j in 1..trunc {
        z.mul_binomial(-1, j, -l)?;
        z.mul_binomial(0, j, 1)?;
    }
    let outer = q_pochhammer(1, l * l - 1, trunc)?;
    let mut out = Vec::with_capacity(s_max as usize + 1);
    for s in 0..=s_max {
        let f = z.zeta_coeff(i64::from(s)).mul(&outer).truncate(trunc);
        assert!(f.is_integral(), "F_(l,s) must have integer coefficients");
        out.push(f);
    }
    Ok(out)
}

/// `F_(l,s)` by coefficient extraction.
pub fn f_ls_exact(params: &CharacterParams) -> Result<ExactQSeries> {
    let p = CharacterParams::new(params.ell, params.s, params.trunc)?;
    let mut all = f_ls_exact_all(p.ell, p.s, p.trunc)?;
    Ok(all.pop().expect("at least one series"))
}

/// `sum_(n>=0) (-1)^(n l) a_n^(j-1) q^(a_n^2/(2l) - h_s - l/8)` on the lattice
/// `q^(1/2)`, exact below `q^(trunc/2)`. The exponent equals `(ln - 2s)(n+1)/2`.
fn shifted_partial_theta_series(ell: u32, s: u32, j: u32, trunc_half: i64) -> ExactQSeries {
    let l = i64::from(ell);
    let s = i64::from(s);
    let mut terms = Vec::new();
    let mut n = 0i64;
    loop {
        let e = (l * n - 2 * s) * (n + 1);
        if e >= trunc_half && l * n > 2 * s {
            break;
        }
        if e < trunc_half {
            let a = rat(2 * l * n + l - 2 * s, 2);
            let mut c = num_traits::pow(a, (j - 1) as usize);
            if (n * l) % 2 == 1 {
                c = -c;
            }
            terms.push((e, c));
        }
        n += 1;
    }
    ExactQSeries::from_terms(2, trunc_half, &terms)
}

/// `F_(l,s)` from the Laurent coefficients of `eta^(3l)/theta^l` and partial
/// theta functions, with all phases resolved so the series stays rational.
pub fn f_ls_via_h(params: &CharacterParams) -> Result<ExactQSeries> {
    let p = CharacterParams::new(params.ell, params.s, params.trunc)?;
    let (ell, s, trunc) = (p.ell, p.s, p.trunc);
    let l = i64::from(ell);
    // the partial theta part starts at q^(-s)
    let inner_trunc = trunc + i64::from(s) + 1;
    let e = exp_eisenstein_coefficients(ell, ell);
    let mut acc = ExactQSeries::zero(2, 2 * inner_trunc);
    for j in (1..=ell).filter(|j| (ell - j) % 2 == 0) {
        let coeff = e[(ell - j) as usize]
            .eval_hat_series(inner_trunc)
            .scale(&BigRational::new(BigInt::from(1), factorial(u64::from(j - 1))));
        let theta = shifted_partial_theta_series(ell, s, j, 2 * inner_trunc);
        acc = acc.add(&coeff.with_den(2).mul(&theta));
    }
    let pref = q_pochhammer(1, l * l - 2 * l, inner_trunc)?;
    Ok(acc.mul(&pref.with_den(2)).simplify_den().truncate(trunc))
}

/// Lowest exponent where two series differ, if any, below the common
/// truncation order.
pub fn first_difference(a: &ExactQSeries, b: &ExactQSeries) -> Option<BigRational> {
    let l = a.den().max(b.den());
    let den = if l.is_multiple_of(a.den()) && l.is_multiple_of(b.den()) {
        l
    } else {
        a.den() * b.den()
    };
    let (a, b) = (a.with_den(den), b.with_den(den));
    let trunc = a.trunc().min(b.trunc());
    let lo = a.min_exp().min(b.min_exp());
    (lo..trunc)
        .find(|&e| a.coeff(e) != b.coeff(e))
        .map(|e| rat(e, den as i64))
}

/// Check that both routes agree; on failure the error names the first
/// differing exponent.
pub fn check_route_equivalence(params: &CharacterParams) -> Result<ExactQSeries> {
    let exact = f_ls_exact(params)?;
    let via_h = f_ls_via_h(params)?;
    match first_difference(&exact, &via_h) {
        None => Ok(exact),
        Some(e) => Err(Error::Mismatch(format!(
            "F_({},{}) routes differ at q^{e}: {} vs {}",
            params.ell,
            params.s,
            exact.coeff_at(&e).unwrap_or_default(),
            via_h.coeff_at(&e).unwrap_or_default()
        ))),
    }
}

/// `ch = q^(h_s - c/24) F_(l,s) / (q)^(l^2-1)`, with multiplicities checked
/// to be nonnegative integers.
pub fn character_ch(params: &CharacterParams) -> Result<ExactQSeries> {
    let f = f_ls_exact(params)?;
    character_from_f(params, &f)
}

/// The character built from a precomputed numerator.
pub fn character_from_f(params: &CharacterParams, f: &ExactQSeries) -> Result<ExactQSeries> {
    let l = i64::from(params.ell);
    let inv = q_pochhammer(1, -(l * l - 1), params.trunc)?;
    let body = f.mul(&inv);
    for (e, c) in body.terms() {
        if c.is_negative() || !c.is_integer() {
            return Err(Error::Mismatch(format!(
                "character multiplicity {c} at q^{e} is not a nonnegative integer"
            )));
        }
    }
    let lead = h_s(params.ell, params.s) - rat(central_charge(params.ell), 24);
    Ok(body.shift_q(&lead))
}

/// `F_(l,s)(0) = binomial(s+l-1, l-1)`.
pub fn constant_term(ell: u32, s: u32) -> BigInt {
    binomial(u64::from(s + ell - 1), u64::from(ell - 1))
}

/// `sum_(n>=0) (-1)^(n l) a_n^(j-1) q^(a_n^2/(2l))` at `q = e^(2 pi i tau)`.
fn partial_theta_moment(ell: u32, s: u32, j: u32, tau: &PrecComplex, wp: u32) -> Result<PrecComplex> {
    let l = i64::from(ell);
    let mut acc = PrecComplex::zero(wp);
    let mut peak = f64::NEG_INFINITY;
    let mut prev = f64::INFINITY;
    for n in 0..1_000_000i64 {
        let a = rat(2 * l * n + l - 2 * s as i64, 2);
        let expo = &a * &a / rat_int(2 * l);
        let mut term = tau.scale(&PrecFloat::from_rational(&expo, wp)).exp_2pi_i();
        if j > 1 {
            term = term.scale(&PrecFloat::from_rational(
                &num_traits::pow(a.clone(), (j - 1) as usize),
                wp,
            ));
        }
        if (n * l) % 2 == 1 {
            term = -term;
        }
        let m = term.log2_abs();
        acc = &acc + &term;
        peak = peak.max(m);
        // past the maximum the terms fall off like a Gaussian
        if a.is_positive() && m < prev - 1.0 && m < peak - f64::from(wp) - 16.0 {
            return Ok(acc);
        }
        prev = m;
    }
    Err(Error::TailTooLarge("partial theta moment did not converge".into()))
}

/// `H_(s+l/2)(tau) = (-1)^l sum_(j = l mod 2) D_(-j)(tau)/(j-1)! sum_n (-1)^(nl) a_n^(j-1) q^(a_n^2/(2l))`.
pub fn h_value(ell: u32, s: u32, tau: &PrecComplex) -> Result<PrecComplex> {
    check_upper_half_plane(tau)?;
    let prec = tau.prec();
    let wp = guard(prec) + 16;
    let t = tau.with_prec(wp);
    let d = laurent_coefficients_d(ell);
    let kmax = ell / 2;
    let values: Vec<PrecComplex> = (1..=kmax.max(1))
        .map(|k| eisenstein_g2k_auto(k, &t))
        .collect::<Result<_>>()?;
    let mut acc = PrecComplex::zero(wp);
    for dj in d.iter().filter(|dj| (ell - dj.j).is_multiple_of(2)) {
        let coeff = dj
            .eval_with(&values, wp)
            .div_i64(factorial(u64::from(dj.j - 1)).try_into().unwrap_or(i64::MAX));
        let sum = partial_theta_moment(ell, s, dj.j, &t, wp)?;
        acc = &acc + &(&coeff * &sum);
    }
    Ok(IPower::MINUS_ONE.pow(i64::from(ell)).apply(&acc).with_prec(prec))
}

/// Fourier coefficient `q^(r^2/(2l)) int_0^1 g_l(x + i y0) e^(-2 pi i r (x + i y0)) dx`
/// with `r = s + l/2`, by the trapezoid rule with node doubling. The
/// integrand is 1-periodic, so the rule converges geometrically.
pub fn fourier_coeff_by_quadrature(ell: u32, s: u32, tau: &PrecComplex, y0: f64) -> Result<PrecComplex> {
    check_upper_half_plane(tau)?;
    let v = tau.im.to_f64();
    if !(y0 > 0.0 && y0 < v) {
        return Err(Error::OutsideDomain(format!(
            "contour height {y0} must lie strictly between 0 and Im(tau) = {v}"
        )));
    }
    let margin = y0.min(v - y0);
    if margin < 1e-3 {
        return Err(Error::NearPole(format!(
            "contour at height {y0} passes within {margin:.1e} of a pole; move z0"
        )));
    }
    let prec = tau.prec();
    let wp = guard(prec);
    let t = tau.with_prec(wp);
    let eta_pow = eta(&t)?.powi(3 * i64::from(ell));
    let r = rat(2 * i64::from(s) + i64::from(ell), 2);
    let rf = PrecFloat::from_rational(&r, wp);
    let y = PrecFloat::from_f64(y0, wp);
    let sample = |x: PrecFloat| -> Result<PrecComplex> {
        let z = PrecComplex::new(x, y.clone());
        let g = g_ell_with_eta(&z, &t, ell, &eta_pow)?;
        Ok(&g * &(-z.scale(&rf)).exp_2pi_i())
    };
    let mut nodes = 16usize;
    let mut sum = PrecComplex::zero(wp);
    for m in 0..nodes {
        sum = &sum + &sample(PrecFloat::from_i64(m as i64, wp).div_i64(nodes as i64))?;
    }
    let mut prev = sum.div_i64(nodes as i64);
    while nodes < 1 << 16 {
        // the new nodes sit at the midpoints
        for m in 0..nodes {
            sum = &sum + &sample(PrecFloat::from_i64(2 * m as i64 + 1, wp).div_i64(2 * nodes as i64))?;
        }
        nodes *= 2;
        let cur = sum.div_i64(nodes as i64);
        let scale = cur.log2_abs().max(prev.log2_abs());
        let converged = cur.dist_log2(&prev) < scale - f64::from(prec) - 8.0;
        prev = cur;
        if converged {
            let pref = t
                .scale(&PrecFloat::from_rational(&(&r * &r / rat_int(2 * i64::from(ell))), wp))
                .exp_2pi_i();
            return Ok((&pref * &prev).with_prec(prec));
        }
    }
    Err(Error::QuadratureNotConverged(margin))
}

/// `F_(l,s)` from `H_(s+l/2)`: `(-i)^l (q)^(l^2-2l) q^(-h_s-l/8) H`.
pub fn f_from_h(ell: u32, s: u32, tau: &PrecComplex, h: &PrecComplex) -> Result<PrecComplex> {
    let prec = tau.prec();
    let wp = guard(prec);
    let t = tau.with_prec(wp);
    let l = i64::from(ell);
    let et = eta(&t)?;
    // (q)^(l^2-2l) = eta^(l^2-2l) q^(-(l^2-2l)/24)
    let expo = -(h_s(ell, s) + rat(l, 8)) - rat(l * l - 2 * l, 24);
    let q_part = t.scale(&PrecFloat::from_rational(&expo, wp)).exp_2pi_i();
    let v = &(&et.powi(l * l - 2 * l) * &q_part) * &h.with_prec(wp);
    Ok(IPower::MINUS_I.pow(l).apply(&v).with_prec(prec))
}

/// Upper bound for `log2 sum_(n>=N) |f_n| x^n` with `x = e^(-t)`, where `f_n`
/// are the coefficients of `F_(l,s)`.
///
/// Coefficientwise `|f_n|` is at most the coefficient of
/// `M(q) = (-q;q)^(l^2) [zeta^s] 1/((zeta)^l (zeta^-1 q)^l)`, whose
/// coefficients are nonnegative. For `x < y < 1` the tail is at most
/// `(x/y)^N M(y)`, and `M(y) <= rho^-s (-y;y)^(l^2) / ((rho;y)^l (y/rho;y)^l)`
/// for any `y < rho < 1`.
pub fn f_ls_tail_log2(ell: u32, s: u32, n: i64, t: f64) -> f64 {
    let l = f64::from(ell);
    let mut best = f64::INFINITY;
    for i in 1..40 {
        let theta = f64::from(i) / 40.0;
        let ty = theta * t;
        let y = libm::exp(-ty);
        let ln_rho = -ty / 2.0;
        let mut ln_m = -f64::from(s) * ln_rho;
        let mut k = 1.0;
        loop {
            let yk = libm::exp(-ty * k);
            ln_m += l * l * libm::log1p(yk);
            ln_m -= l * libm::log1p(-libm::exp(ln_rho - ty * (k - 1.0)));
            ln_m -= l * libm::log1p(-libm::exp(-ty * k - ln_rho));
            k += 1.0;
            if yk < 1e-20 {
                break;
            }
        }
        // omitted factors: each log term is at most about 3 y^k, summed geometrically
        ln_m += 3.0 * (l * l + 2.0 * l) * libm::exp(-ty * (k - 1.0)) / (1.0 - y) + 1e-9 * ln_m.abs();
        let bound = -(t - ty) * n as f64 + ln_m;
        best = best.min(bound);
    }
    best / core::f64::consts::LN_2 + 1.0
}

/// Smallest truncation whose tail at `q = e^(-t)` is below `2^tol_log2`.
pub fn f_ls_trunc_for(ell: u32, s: u32, t: f64, tol_log2: f64) -> i64 {
    let mut n = 16i64;
    while f_ls_tail_log2(ell, s, n, t) > tol_log2 {
        n += n / 4 + 1;
    }
    n
}

/// `F_(l,s)(e^(-t))` from an exact series with the tail bounded as in
/// [`f_ls_tail_log2`].
pub fn f_ls_eval_real(series: &ExactQSeries, ell: u32, s: u32, t: &PrecFloat) -> Result<Certified> {
    if !t.is_positive() || series.den() != 1 {
        return Err(Error::InvalidParameter("need t > 0 and an integral series".into()));
    }
    let v = series.eval_real_t(t);
    let tail = f_ls_tail_log2(ell, s, series.trunc(), t.to_f64());
    let rounding = v.log2_abs() - f64::from(t.prec()) + 8.0;
    let err = if tail > rounding { tail + 1.0 } else { rounding + 1.0 };
    Ok(Certified {
        value: PrecComplex::from_real(v),
        err_log2: err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn ints(f: &ExactQSeries, n: i64) -> Vec<i64> {
        (0..n).map(|e| f.coeff(e).to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn weights_and_charge() {
        assert_eq!(h_s(3, 0), rat(0, 1));
        assert_eq!(h_s(3, 1), rat(2, 3));
        assert_eq!(central_charge(3), -4);
        assert!(CharacterParams::new(1, 0, 5).is_err());
        assert!(CharacterParams::new(3, 0, 0).is_err());
    }

    #[test]
    fn golden_heads() {
        let all = f_ls_exact_all(3, 2, 25).unwrap();
        assert_eq!(
            ints(&all[0], 25),
            [1, 0, 0, -20, 27, 0, 0, 0, 0, 56, -162, 0, 125, 0, 0, 0, 0, 0, -110, 324, 0, -520, 0, 0, 343]
        );
        assert_eq!(
            ints(&all[1], 25),
            [3, -6, 0, 0, -15, 42, 21, -60, 0, 0, 0, 36, -105, 0, 120, 132, 0, -210, 0, 0, 0, -66, 195, 0, -315]
        );
        assert_eq!(ints(&all[2], 10), [6, -15, 0, 15, 0, -21, 60, 0, -90, 0]);
        let f4 = f_ls_exact(&CharacterParams::new(4, 0, 10).unwrap()).unwrap();
        assert_eq!(ints(&f4, 10), [1, 0, -20, 0, 245, -512, 300, 0, -735, 2560]);
    }

    #[test]
    fn routes_agree_small() {
        for ell in 2..=5 {
            for s in 0..=3 {
                let p = CharacterParams::new(ell, s, 20).unwrap();
                check_route_equivalence(&p).unwrap();
            }
        }
    }

    #[test]
    fn mismatch_names_exponent() {
        let a = ExactQSeries::from_int_coeffs(1, 0, 6, &[1, 2, 3, 4]);
        let b = ExactQSeries::from_int_coeffs(1, 0, 6, &[1, 2, 5, 4]);
        assert_eq!(first_difference(&a, &b), Some(rat(2, 1)));
        assert_eq!(first_difference(&a, &a), None);
    }

    #[test]
    fn character_head() {
        let p = CharacterParams::new(3, 0, 20).unwrap();
        let ch = character_ch(&p).unwrap();
        assert_eq!(rat(ch.min_exp(), ch.den() as i64), rat(1, 6));
        let body: Vec<BigRational> = ch.terms().map(|(_, c)| c.clone()).collect();
        assert_eq!(body[0], rat_int(1));
        // vacuum multiplicities: 1, dim sl_3, then growing
        assert_eq!(body[1], rat_int(8));
        assert!(body.windows(2).all(|w| w[0] <= w[1]));
        let p2 = CharacterParams::new(3, 2, 6).unwrap();
        let ch2 = character_ch(&p2).unwrap();
        assert_eq!(ch2.coeff(ch2.min_exp()), rat_int(6));
    }

    #[test]
    fn h_routes_agree() {
        let tau = PrecComplex::i(P);
        for s in 0..2 {
            let a = h_value(3, s, &tau).unwrap();
            let b = fourier_coeff_by_quadrature(3, s, &tau, 0.5).unwrap();
            assert!(a.dist_log2(&b) - a.log2_abs() < -200.0);
        }
        assert!(fourier_coeff_by_quadrature(3, 0, &tau, 1.2).is_err());
        assert!(fourier_coeff_by_quadrature(3, 0, &tau, 1e-5).is_err());
    }

    #[test]
    fn h_matches_series() {
        let tau = PrecComplex::from_f64(0.1, 0.8, P);
        for (ell, s) in [(3u32, 1u32), (4, 0), (4, 2)] {
            let h = h_value(ell, s, &tau).unwrap();
            let f = f_from_h(ell, s, &tau, &h).unwrap();
            let series = f_ls_exact(&CharacterParams::new(ell, s, 60).unwrap()).unwrap();
            let direct = series.eval_tau(&tau);
            assert!(f.dist_log2(&direct) - direct.log2_abs() < -100.0, "ell={ell} s={s}");
        }
    }

    #[test]
    fn tail_bound_is_an_upper_bound() {
        let t = 1.0;
        let f = f_ls_exact(&CharacterParams::new(3, 1, 80).unwrap()).unwrap();
        for n in [10i64, 20, 40] {
            let mut tail = 0.0;
            for e in n..80 {
                tail += f.coeff(e).to_integer().to_string().parse::<f64>().unwrap().abs() * libm::exp(-t * e as f64);
            }
            assert!(libm::log2(tail) < f_ls_tail_log2(3, 1, n, t));
        }
        let tf = PrecFloat::from_f64(t, P);
        let c = f_ls_eval_real(&f, 3, 1, &tf).unwrap();
        assert!(c.err_log2 < -10.0, "{}", c.err_log2);
        assert!(f_ls_trunc_for(3, 1, 0.4, -80.0) < 1500);
    }
}
