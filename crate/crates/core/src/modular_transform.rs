//! Transformation of partial theta functions under `SL_2(Z)`: the value at
//! `gamma tau` is a finite sum of Mordell-type integrals plus theta
//! corrections that appear only when `Im z < 0`.

use alloc::format;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::complex::PrecComplex;
use crate::error::{Error, Result};
use crate::float::PrecFloat;
use crate::modular::{check_upper_half_plane, guard, theta};
use crate::partial_theta::{partial_theta, PartialThetaParams};
use crate::series::{rat, rat_int};

/// Integer matrix `(a b; c d)` with determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SL2Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl SL2Matrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::InvalidParameter(format!("det of ({a} {b}; {c} {d}) is not 1")));
        }
        Ok(SL2Matrix { a, b, c, d })
    }

    pub const S: SL2Matrix = SL2Matrix {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };

    /// `(a tau + b)/(c tau + d)`.
    pub fn apply(&self, tau: &PrecComplex) -> PrecComplex {
        let num = &tau.mul_i64(self.a) + &PrecComplex::from_real(PrecFloat::from_i64(self.b, tau.prec()));
        &num / &self.denominator(tau)
    }

    /// `c tau + d`.
    pub fn denominator(&self, tau: &PrecComplex) -> PrecComplex {
        &tau.mul_i64(self.c) + &PrecComplex::from_real(PrecFloat::from_i64(self.d, tau.prec()))
    }
}

/// Which denominator the Mordell integral uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    /// `1 - zeta^(4cM) e^(4 pi i sqrt(cM) x)`.
    Full,
    /// Denominator replaced by 1, leaving a Gaussian integral.
    GaussianOnly,
}

/// `e^(2 pi i x)` for a rational `x`, reduced modulo 1 first.
pub fn root_of_unity(x: &BigRational, prec: u32) -> PrecComplex {
    let frac = x - BigRational::from_integer(x.floor().to_integer());
    PrecComplex::from_real(PrecFloat::from_rational(&frac, prec)).exp_2pi_i()
}

fn cos_c(w: &PrecComplex) -> PrecComplex {
    let iw = w.mul_i_pow(1);
    (&iw.exp() + &(-iw).exp()).ldexp(-1)
}

fn sin_c(w: &PrecComplex) -> PrecComplex {
    let iw = w.mul_i_pow(1);
    (&iw.exp() - &(-iw).exp()).ldexp(-1).mul_i_pow(-1)
}

/// `int_R f(x) dx` by the trapezoid rule on `[-x_max, x_max]`, halving the
/// step until two passes agree to `2^tol_log2` relative to `int |f|`.
pub fn trapezoid_real<F>(f: F, x_max: f64, tol_log2: f64, prec: u32) -> Result<PrecComplex>
where
    F: Fn(&PrecFloat) -> Result<PrecComplex>,
{
    let mut h = 0.25f64;
    let mut k_max = libm::ceil(x_max / h) as i64;
    let mut sum = PrecComplex::zero(prec);
    let mut abs_sum = 0.0f64;
    for k in -k_max..=k_max {
        let v = f(&PrecFloat::from_f64(k as f64 * h, prec))?;
        abs_sum += libm::exp2(v.log2_abs());
        sum = &sum + &v;
    }
    let mut prev = sum.scale(&PrecFloat::from_f64(h, prec));
    for _ in 0..14 {
        // add the midpoints
        for k in -k_max..k_max {
            let v = f(&PrecFloat::from_f64((k as f64 + 0.5) * h, prec))?;
            abs_sum += libm::exp2(v.log2_abs());
            sum = &sum + &v;
        }
        h /= 2.0;
        k_max *= 2;
        let cur = sum.scale(&PrecFloat::from_f64(h, prec));
        let scale = libm::log2(abs_sum * h).max(cur.log2_abs());
        let done = cur.dist_log2(&prev) < scale + tol_log2;
        prev = cur;
        if done {
            return Ok(prev);
        }
    }
    Err(Error::QuadratureNotConverged(h))
}

fn gaussian_cutoff(decay: f64, tol_log2: f64) -> f64 {
    // e^(-pi decay x^2) < 2^(tol - 16)
    libm::sqrt((-tol_log2 + 16.0) * core::f64::consts::LN_2 / (core::f64::consts::PI * decay)) + 1.0
}

fn check_z(z: &PrecComplex) -> Result<i32> {
    if z.im.is_zero() {
        return Err(Error::OutsideDomain("z must not be real".into()));
    }
    Ok(if z.im.is_positive() { 1 } else { -1 })
}

/// `int_R e^(pi i (c tau + d) x^2/2 - (pi i/sqrt(cM)) (r - 2Mj) x) / (1 - zeta^(4cM) e^(4 pi i sqrt(cM) x)) dx`.
pub fn mordell_integral(
    params: &PartialThetaParams,
    z: &PrecComplex,
    tau: &PrecComplex,
    j: i64,
    gamma: &SL2Matrix,
    kernel: Kernel,
    tol_log2: f64,
) -> Result<PrecComplex> {
    check_upper_half_plane(tau)?;
    check_z(z)?;
    if gamma.c <= 0 {
        return Err(Error::InvalidParameter("need c > 0".into()));
    }
    let prec = guard(tau.prec());
    let ct = gamma.denominator(&tau.with_prec(prec));
    let cm = rat_int(gamma.c) * &params.m;
    let sqrt_cm = PrecFloat::from_rational(&cm, prec).sqrt();
    let lin_r = &params.r - rat_int(2 * j) * &params.m;
    let lin = PrecFloat::from_rational(&lin_r, prec) / &sqrt_cm;
    let zq = z
        .with_prec(prec)
        .scale(&PrecFloat::from_rational(&(rat_int(4) * &cm), prec))
        .exp_2pi_i();
    if kernel == Kernel::Full {
        // zeros of the denominator: Im x = -2 sqrt(cM) Im z
        let dist = 2.0 * sqrt_cm.to_f64() * z.im.to_f64().abs();
        if dist < 0.02 {
            return Err(Error::NearPole(format!(
                "kernel pole at distance {dist:.3} from the real line; shift z"
            )));
        }
    }
    let half_ct = ct.ldexp(-1);
    let two_sqrt = sqrt_cm.ldexp(1);
    let f = |x: &PrecFloat| -> Result<PrecComplex> {
        // e(ct x^2/4 - lin x/2)
        let arg = &half_ct.scale(&x.square()).ldexp(-1) - &PrecComplex::from_real(&lin * x).ldexp(-1);
        let num = arg.exp_2pi_i();
        match kernel {
            Kernel::GaussianOnly => Ok(num),
            Kernel::Full => {
                let e = PrecComplex::from_real(&two_sqrt * x).exp_2pi_i();
                Ok(&num / &(&PrecComplex::one(prec) - &(&zq * &e)))
            }
        }
    };
    let x_max = gaussian_cutoff(ct.im.to_f64() / 2.0, tol_log2);
    Ok(trapezoid_real(f, x_max, tol_log2, prec)?.with_prec(tau.prec()))
}

/// `int_R e^(pi i A x^2 + B x) dx = sqrt(pi/(-pi i A)) e^(B^2/(-4 pi i A))`, `Im A > 0`.
pub fn gaussian_integral(a: &PrecComplex, b: &PrecComplex) -> PrecComplex {
    let prec = a.prec();
    let alpha = a.scale(&PrecFloat::pi(prec)).mul_i_pow(-1);
    let pref = (&PrecComplex::from_real(PrecFloat::pi(prec)) / &alpha).sqrt();
    &pref * &(&b.square() / &alpha.mul_i64(4)).exp()
}

/// Both sides of a transformation law.
#[derive(Clone, Debug)]
pub struct TransformReport {
    pub lhs: PrecComplex,
    pub rhs: PrecComplex,
}

impl TransformReport {
    /// `log2(|lhs - rhs| / |lhs|)`.
    pub fn rel_err_log2(&self) -> f64 {
        self.lhs.dist_log2(&self.rhs) - self.lhs.log2_abs()
    }

    pub fn rel_err(&self) -> f64 {
        libm::exp2(self.rel_err_log2())
    }
}

/// Right-hand side of the transformation of `theta+_(r,eps,M)(z; gamma tau)`:
///
/// `sqrt(-i(c tau+d)/2) sum_(j<2c) (-1)^(j eps) zeta_(4cM)^(a R^2)
///  [e(zR) I_j + (1 - sgn Im z)/(4 sqrt(cM)) zeta_(8cM)^R e^(2 pi i cM (c tau+d)(z - 1/(8cM))^2)
///   theta((c tau+d)/2 (z - 1/(8cM)) - 1/2 + (r - 2Mj)/(4cM); (c tau+d)/(8cM))]`
///
/// with `R = 2Mj - r` and `I_j` the Mordell integral.
pub fn general_transform_rhs(
    params: &PartialThetaParams,
    z: &PrecComplex,
    tau: &PrecComplex,
    gamma: &SL2Matrix,
    tol_log2: f64,
) -> Result<PrecComplex> {
    let sg = check_z(z)?;
    if gamma.c <= 0 {
        return Err(Error::InvalidParameter("need c > 0".into()));
    }
    let prec = guard(tau.prec());
    let tau_w = tau.with_prec(prec);
    let z = z.with_prec(prec);
    let ct = gamma.denominator(&tau_w);
    let cm = rat_int(gamma.c) * &params.m;
    let sqrt_cm = PrecFloat::from_rational(&cm, prec).sqrt();
    let shift = BigRational::new(BigInt::from(1), BigInt::from(8)) / &cm;
    let zs = &z - &PrecComplex::from_real(PrecFloat::from_rational(&shift, prec));
    let mut total = PrecComplex::zero(prec);
    for j in 0..2 * gamma.c {
        let big_r = rat_int(2 * j) * &params.m - &params.r;
        let mut term = &z.scale(&PrecFloat::from_rational(&big_r, prec)).exp_2pi_i()
            * &mordell_integral(params, &z, &tau_w, j, gamma, Kernel::Full, tol_log2)?;
        if sg < 0 {
            let g = root_of_unity(&(&big_r / (rat_int(8) * &cm)), prec);
            let ex = (&zs.square() * &ct)
                .scale(&PrecFloat::from_rational(&cm, prec))
                .exp_2pi_i();
            let arg = &(&ct.ldexp(-1) * &zs)
                - &PrecComplex::from_real(PrecFloat::from_rational(
                    &(rat(1, 2) + &big_r / (rat_int(4) * &cm)),
                    prec,
                ));
            let th = theta(
                &arg,
                &(&ct / &PrecComplex::from_real(PrecFloat::from_rational(&(rat_int(8) * &cm), prec))),
            )?;
            let corr = (&(&g * &ex) * &th).scale(&sqrt_cm.ldexp(2).recip()).mul_i64(2);
            term = &term + &corr;
        }
        let phase = root_of_unity(&(rat_int(gamma.a) * &big_r * &big_r / (rat_int(4) * &cm)), prec);
        term = &phase * &term;
        if params.epsilon == 1 && j.is_odd() {
            term = -term;
        }
        total = &total + &term;
    }
    let pref = ct.mul_i_pow(-1).ldexp(-1).sqrt();
    Ok((&pref * &total).with_prec(tau.prec()))
}

/// Compare `theta+_(r,eps,M)(z; gamma tau)` by direct summation with
/// [`general_transform_rhs`].
pub fn verify_general_transform(
    params: &PartialThetaParams,
    z: &PrecComplex,
    tau: &PrecComplex,
    gamma: &SL2Matrix,
    tol_log2: f64,
) -> Result<TransformReport> {
    let g_tau = gamma.apply(&tau.with_prec(guard(tau.prec())));
    let lhs = partial_theta(params, &z.with_prec(guard(tau.prec())), &g_tau)?
        .value
        .with_prec(tau.prec());
    let rhs = general_transform_rhs(params, z, tau, gamma, tol_log2)?;
    Ok(TransformReport { lhs, rhs })
}

/// `(-i tau)^(-1/2) theta+_(s+l/2, l mod 2, l/2)(z; -1/tau)`.
pub fn s_transform_lhs(ell: u32, s: u32, z: &PrecComplex, tau: &PrecComplex) -> Result<PrecComplex> {
    check_upper_half_plane(tau)?;
    let prec = guard(tau.prec());
    let t = tau.with_prec(prec);
    let params = PartialThetaParams::new(
        rat(2 * i64::from(s) + i64::from(ell), 2),
        (ell % 2) as u8,
        rat(i64::from(ell), 2),
    )?;
    let inv = (-PrecComplex::one(prec)) / &t;
    let pt = partial_theta(&params, &z.with_prec(prec), &inv)?.value;
    let w = t.mul_i_pow(-1).sqrt().recip();
    Ok((&w * &pt).with_prec(tau.prec()))
}

/// The integral plus the theta correction for the `S` transform. For odd `l`
///
/// `1/2 int e^(pi i tau x^2) e^((2 pi i/sqrt l)(s+l)(x - sqrt l z)) / cos(sqrt l pi (x - sqrt l z)) dx
///  + (1 - sgn Im z)/(2 sqrt l) e^(pi i l tau z^2) theta(tau z + s/l; tau/l)`,
///
/// and for even `l` the kernel is `sin`, the integral carries `-i/2`, and the
/// correction is
/// `(1 - sgn Im z)/(2 i sqrt l) e^(-pi i s/l) e^(pi i l tau (z - 1/(2l))^2) theta(tau z + s/l - tau/(2l); tau/l)`.
pub fn s_transform_rhs(ell: u32, s: u32, z: &PrecComplex, tau: &PrecComplex, tol_log2: f64) -> Result<PrecComplex> {
    check_upper_half_plane(tau)?;
    let sg = check_z(z)?;
    let prec = guard(tau.prec());
    let t = tau.with_prec(prec);
    let z = z.with_prec(prec);
    let l = i64::from(ell);
    let sqrt_l = PrecFloat::from_i64(l, prec).sqrt();
    let pi = PrecFloat::pi(prec);
    // kernel poles at Im x = sqrt(l) Im z
    let dist = sqrt_l.to_f64() * z.im.to_f64().abs();
    if dist < 0.02 {
        return Err(Error::NearPole(format!(
            "kernel pole at distance {dist:.3} from the real line; shift z"
        )));
    }
    let zl = z.scale(&sqrt_l);
    let freq = PrecFloat::from_i64(i64::from(s) + l, prec) / &sqrt_l;
    let odd = ell % 2 == 1;
    let f = |x: &PrecFloat| -> Result<PrecComplex> {
        let u = &PrecComplex::from_real(x.clone()) - &zl;
        let g = t.scale(&x.square()).ldexp(-1).exp_2pi_i();
        let osc = u.scale(&freq).exp_2pi_i();
        let k = u.scale(&(&sqrt_l * &pi));
        let den = if odd { cos_c(&k) } else { sin_c(&k) };
        Ok(&(&g * &osc) / &den)
    };
    let x_max = gaussian_cutoff(t.im.to_f64(), tol_log2) + dist;
    let integral = trapezoid_real(f, x_max, tol_log2, prec)?;
    let mut out = if odd {
        integral.ldexp(-1)
    } else {
        integral.ldexp(-1).mul_i_pow(-1)
    };
    if sg < 0 {
        let s_over_l = PrecFloat::from_rational(&rat(i64::from(s), l), prec);
        let t_over_l = t.div_i64(l);
        let corr = if odd {
            let ex = (&t * &z.square())
                .scale(&PrecFloat::from_rational(&rat(l, 2), prec))
                .exp_2pi_i();
            let th = theta(&(&(&t * &z) + &PrecComplex::from_real(s_over_l)), &t_over_l)?;
            (&ex * &th).scale(&sqrt_l.recip())
        } else {
            let zc = &z - &PrecComplex::from_real(PrecFloat::from_rational(&rat(1, 2 * l), prec));
            let ex = (&t * &zc.square())
                .scale(&PrecFloat::from_rational(&rat(l, 2), prec))
                .exp_2pi_i();
            let ph = root_of_unity(&rat(-i64::from(s), 2 * l), prec);
            let arg = &(&(&t * &z) + &PrecComplex::from_real(s_over_l)) - &t.div_i64(2 * l);
            let th = theta(&arg, &t_over_l)?;
            (&(&ex * &th) * &ph).scale(&sqrt_l.recip()).mul_i_pow(-1)
        };
        out = &out + &corr;
    }
    Ok(out.with_prec(tau.prec()))
}

/// Both sides of the `S` transform of `theta+_(s+l/2, l mod 2, l/2)`.
pub fn verify_s_transform(
    ell: u32,
    s: u32,
    z: &PrecComplex,
    tau: &PrecComplex,
    tol_log2: f64,
) -> Result<TransformReport> {
    if ell < 1 {
        return Err(Error::InvalidParameter("ell must be positive".into()));
    }
    Ok(TransformReport {
        lhs: s_transform_lhs(ell, s, z, tau)?,
        rhs: s_transform_rhs(ell, s, z, tau, tol_log2)?,
    })
}

/// `1/2 e^(-pi i z/2 - pi i/4 + pi i tau/16) (theta(z/2 - tau/8 - 1/4; tau/4) + i theta(z/2 - tau/8 + 1/4; tau/4))`
/// against `theta(z; tau)`.
pub fn half_index_identity(z: &PrecComplex, tau: &PrecComplex) -> Result<TransformReport> {
    check_upper_half_plane(tau)?;
    let prec = tau.prec();
    let wp = guard(prec);
    let (z, t) = (z.with_prec(wp), tau.with_prec(wp));
    let quarter = PrecComplex::from_real(PrecFloat::from_rational(&rat(1, 4), wp));
    let base = &z.ldexp(-1) - &t.ldexp(-3);
    let t4 = t.ldexp(-2);
    let a = theta(&(&base - &quarter), &t4)?;
    let b = theta(&(&base + &quarter), &t4)?.mul_i_pow(1);
    // e(-z/4 - 1/8 + tau/32)
    let ph = (&(&t.ldexp(-5) - &z.ldexp(-2)) - &PrecComplex::from_real(PrecFloat::from_rational(&rat(1, 8), wp)))
        .exp_2pi_i();
    let lhs = (&ph * &(&a + &b)).ldexp(-1);
    Ok(TransformReport {
        lhs: lhs.with_prec(prec),
        rhs: theta(&z, &t)?.with_prec(prec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn c(re: f64, im: f64) -> PrecComplex {
        PrecComplex::from_f64(re, im, P)
    }

    #[test]
    fn matrices() {
        assert!(SL2Matrix::new(1, 1, 1, 1).is_err());
        let g = SL2Matrix::new(1, 1, 1, 2).unwrap();
        let tau = c(0.1, 1.0);
        let v = g.apply(&tau);
        assert!(v.im.is_positive());
        let s = SL2Matrix::S.apply(&PrecComplex::i(P));
        assert!(s.dist_log2(&PrecComplex::i(P)) < -250.0);
    }

    #[test]
    fn gaussian_hook() {
        let p = PartialThetaParams::new(rat(3, 2), 1, rat(3, 2)).unwrap();
        let tau = c(0.2, 0.9);
        let z = c(0.1, 0.2);
        let g = SL2Matrix::new(1, 0, 1, 1).unwrap();
        let num = mordell_integral(&p, &z, &tau, 1, &g, Kernel::GaussianOnly, -200.0).unwrap();
        // e^(pi i ct x^2/2 - pi i lin x), lin = (r - 2M)/sqrt(cM)
        let ct = g.denominator(&tau);
        let lin = PrecFloat::from_rational(&rat(-3, 2), P) / &PrecFloat::from_rational(&rat(3, 2), P).sqrt();
        let b = PrecComplex::from_real(&lin * &PrecFloat::pi(P)).mul_i_pow(-1);
        let want = gaussian_integral(&ct.ldexp(-1), &b);
        assert!(num.dist_log2(&want) - want.log2_abs() < -190.0);
    }

    #[test]
    fn interval_doubling() {
        let p = PartialThetaParams::new(rat(5, 2), 0, rat(3, 2)).unwrap();
        let tau = c(0.0, 1.0);
        let z = c(0.1, 0.2);
        let a = mordell_integral(&p, &z, &tau, 0, &SL2Matrix::S, Kernel::Full, -120.0).unwrap();
        let b = mordell_integral(&p, &z, &tau, 0, &SL2Matrix::S, Kernel::Full, -200.0).unwrap();
        assert!(a.dist_log2(&b) - b.log2_abs() < -100.0);
        assert!(mordell_integral(&p, &c(0.1, 0.001), &tau, 0, &SL2Matrix::S, Kernel::Full, -100.0).is_err());
        assert!(mordell_integral(&p, &c(0.1, 0.0), &tau, 0, &SL2Matrix::S, Kernel::Full, -100.0).is_err());
    }

    #[test]
    fn even_integrand_is_symmetric() {
        // r = 2Mj: Gaussian part is even, so the integral of the odd part vanishes
        let p = PartialThetaParams::new(rat(3, 1), 0, rat(3, 2)).unwrap();
        let tau = c(0.0, 1.0);
        let v = mordell_integral(&p, &c(0.0, 0.2), &tau, 1, &SL2Matrix::S, Kernel::GaussianOnly, -200.0).unwrap();
        let want = gaussian_integral(&tau.ldexp(-1), &PrecComplex::zero(P));
        assert!(v.dist_log2(&want) - want.log2_abs() < -190.0);
    }

    #[test]
    fn s_transform_branches() {
        let tau = PrecComplex::i(P);
        for (ell, s, z) in [
            (3, 0, c(0.1, 0.2)),
            (3, 0, c(0.1, -0.2)),
            (4, 1, c(0.05, 0.15)),
            (4, 1, c(0.05, -0.15)),
            (3, 1, c(0.3, -0.1)),
        ] {
            let r = verify_s_transform(ell, s, &z, &tau, -100.0).unwrap();
            assert!(r.rel_err_log2() < -80.0, "ell={ell} s={s} err 2^{}", r.rel_err_log2());
        }
    }

    #[test]
    fn general_transforms() {
        let tau = c(0.1, 1.0);
        for g in [
            SL2Matrix::S,
            SL2Matrix::new(1, 0, 1, 1).unwrap(),
            SL2Matrix::new(1, 1, 1, 2).unwrap(),
        ] {
            for z in [c(0.1, 0.2), c(0.1, -0.2)] {
                for (r, eps, m) in [
                    (rat(3, 2), 1, rat(3, 2)),
                    (rat(5, 2), 0, rat(3, 2)),
                    (rat(2, 1), 0, rat(2, 1)),
                ] {
                    let p = PartialThetaParams::new(r, eps, m).unwrap();
                    let rep = verify_general_transform(&p, &z, &tau, &g, -100.0).unwrap();
                    assert!(
                        rep.rel_err_log2() < -80.0,
                        "{g:?} {:?} err 2^{}",
                        z.to_f64_pair(),
                        rep.rel_err_log2()
                    );
                }
            }
        }
    }

    #[test]
    fn half_index() {
        let r = half_index_identity(&c(0.13, 0.07), &c(0.2, 1.1)).unwrap();
        assert!(r.rel_err_log2() < -240.0);
    }

    #[test]
    fn roots_of_unity_reduce() {
        let a = root_of_unity(&rat(7, 4), P);
        let b = root_of_unity(&rat(-1, 4), P);
        assert!(a.dist_log2(&b) < -250.0);
    }
}
