//! Multivariable Fourier coefficients of
//! `F_l(zeta_1, .., zeta_l) = (q)_inf prod_j 1/((Z_j)_inf (Z_j^-1 q)_inf)`, `Z_j = zeta_j ... zeta_l`,
//! with respect to `zeta_l`, and their expression through theta and
//! partial theta functions.

use alloc::format;
use alloc::vec::Vec;

use crate::characters::{central_charge, h_s};
use crate::complex::PrecComplex;
use crate::error::{Error, Result};
use crate::float::PrecFloat;
use crate::modular::{check_upper_half_plane, eta, guard, theta, Certified};
use crate::partial_theta::{partial_theta, PartialThetaParams};
use crate::pigraded::IPower;
use crate::series::{rat, rat_int};

/// A point `(z_1, .., z_(l-1); tau)` with `0 < l Im z_j < Im tau`.
#[derive(Clone, Debug)]
pub struct MultivarPoint {
    zs: Vec<PrecComplex>,
    tau: PrecComplex,
    ws: Vec<PrecComplex>,
}

impl MultivarPoint {
    pub fn new(zs: Vec<PrecComplex>, tau: PrecComplex) -> Result<Self> {
        check_upper_half_plane(&tau)?;
        if zs.is_empty() {
            return Err(Error::InvalidParameter("need at least one variable (l >= 2)".into()));
        }
        let ell = zs.len() as f64 + 1.0;
        let v = tau.im.to_f64();
        for (j, z) in zs.iter().enumerate() {
            let y = z.im.to_f64() * ell;
            if !(y > 0.0 && y < v) {
                return Err(Error::OutsideDomain(format!("need |q| < |zeta_{}|^l < 1", j + 1)));
            }
        }
        let prec = tau.prec();
        // w_j = -(z_j + .. + z_(l-1)), w_l = 0
        let mut ws = Vec::with_capacity(zs.len() + 1);
        let mut acc = PrecComplex::zero(prec);
        for z in zs.iter().rev() {
            acc = &acc - z;
            ws.push(acc.clone());
        }
        ws.reverse();
        ws.push(PrecComplex::zero(prec));
        Ok(MultivarPoint { zs, tau, ws })
    }

    pub fn ell(&self) -> u32 {
        self.zs.len() as u32 + 1
    }

    pub fn zs(&self) -> &[PrecComplex] {
        &self.zs
    }

    pub fn tau(&self) -> &PrecComplex {
        &self.tau
    }

    /// `w_1, .., w_l`.
    pub fn ws(&self) -> &[PrecComplex] {
        &self.ws
    }

    /// Open interval of heights `Im z_l` on which the product converges:
    /// `0 < Im z_l` and `Im z_l + sum Im z_j < Im tau`.
    pub fn contour_strip(&self) -> (f64, f64) {
        let sum: f64 = self.zs.iter().map(|z| z.im.to_f64()).sum();
        (0.0, self.tau.im.to_f64() - sum)
    }

    /// The height farthest from both edges of the strip.
    pub fn default_contour(&self) -> f64 {
        let (lo, hi) = self.contour_strip();
        (lo + hi) / 2.0
    }

    /// Error unless all `w_j` are distinct modulo the lattice, measured by
    /// `|theta(w_j - w_k)| > 2^(-prec/4)`.
    pub fn check_distinct(&self) -> Result<()> {
        let bound = -f64::from(self.tau.prec()) / 4.0;
        for j in 0..self.ws.len() {
            for k in j + 1..self.ws.len() {
                let t = theta(&(&self.ws[j] - &self.ws[k]), &self.tau)?;
                if t.log2_abs() < bound {
                    return Err(Error::NearPole(format!(
                        "degenerate w-vector: w_{} and w_{} coincide",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The product `F_l` at `zeta_j = e^(2 pi i z_j)`, `j = 1..=l`, with a bound
/// on the neglected factors.
pub fn f_ell_product(zs: &[PrecComplex], tau: &PrecComplex) -> Result<Certified> {
    check_upper_half_plane(tau)?;
    let prec = tau.prec();
    let wp = guard(prec);
    let tau = tau.with_prec(wp);
    let q = tau.exp_2pi_i();
    let pole = -f64::from(prec) / 2.0;
    // Z_j = zeta_j .. zeta_l
    let mut big_z = Vec::with_capacity(zs.len());
    let mut acc = PrecComplex::zero(wp);
    for z in zs.iter().rev() {
        acc = &acc + &z.with_prec(wp);
        big_z.push(acc.exp_2pi_i());
    }
    let one = PrecComplex::one(wp);
    let mut num = PrecComplex::one(wp);
    let mut den = PrecComplex::one(wp);
    // a_j = Z_j q^(k-1), b_j = Z_j^-1 q^k, c = q^k
    let mut a: Vec<PrecComplex> = big_z.clone();
    let mut b: Vec<PrecComplex> = big_z.iter().map(|z| &q / z).collect();
    let mut c = q.clone();
    let target = -f64::from(wp) - 8.0;
    for _k in 1..100_000 {
        let mut biggest = c.log2_abs();
        num = &num * &(&one - &c);
        for (aj, bj) in a.iter_mut().zip(b.iter_mut()) {
            let fa = &one - &*aj;
            let fb = &one - &*bj;
            if fa.log2_abs() < pole || fb.log2_abs() < pole {
                return Err(Error::NearPole(
                    "pole proximity: a product factor nearly vanishes".into(),
                ));
            }
            den = &(&den * &fa) * &fb;
            biggest = biggest.max(aj.log2_abs()).max(bj.log2_abs());
            *aj = &*aj * &q;
            *bj = &*bj * &q;
        }
        c = &c * &q;
        // remaining factors are 1 + O(x) with x shrinking geometrically by |q|
        if biggest < target {
            let qn = q.log2_abs();
            let rest = biggest + qn - libm::log2(1.0 - libm::exp2(qn)) + libm::log2(2.0 * zs.len() as f64 + 1.0) + 2.0;
            let v = &num / &den;
            return Ok(Certified {
                err_log2: v.log2_abs() + rest,
                value: v.with_prec(prec),
            });
        }
    }
    Err(Error::TailTooLarge("product did not converge".into()))
}

/// `F_l` as a function of `w = z_l` written as `prod_j 1/theta(w - w_j)`.
pub fn script_f_ell(w: &PrecComplex, ws: &[PrecComplex], tau: &PrecComplex) -> Result<PrecComplex> {
    let mut den = PrecComplex::one(w.prec());
    for wj in ws {
        den = &den * &theta(&(w - wj), tau)?;
    }
    if den.log2_abs() < -f64::from(w.prec()) / 2.0 {
        return Err(Error::NearPole("w is at a pole".into()));
    }
    Ok(den.recip())
}

/// `s`-th Fourier coefficient in `zeta_l` of `F_l`, by the trapezoid rule on
/// `z_l = x + i y`, `0 <= x < 1`, doubling the nodes until two passes agree
/// to `2^tol_log2` relative.
pub fn f_ls_multivar_quadrature(
    s: i64,
    point: &MultivarPoint,
    contour_imag: f64,
    tol_log2: f64,
) -> Result<PrecComplex> {
    let (lo, hi) = point.contour_strip();
    if !(contour_imag > lo && contour_imag < hi) {
        return Err(Error::OutsideDomain(format!(
            "contour height {contour_imag} outside the strip ({lo}, {hi})"
        )));
    }
    let prec = point.tau.prec();
    let y = PrecFloat::from_f64(contour_imag, prec);
    let sample = |x: PrecFloat| -> Result<PrecComplex> {
        let zl = PrecComplex::new(x, y.clone());
        let mut all = point.zs.clone();
        all.push(zl.clone());
        let f = f_ell_product(&all, &point.tau)?.value;
        Ok(&f * &zl.mul_i64(-s).exp_2pi_i())
    };
    let mut nodes = 32usize;
    let mut sum = PrecComplex::zero(prec);
    for m in 0..nodes {
        sum = &sum + &sample(PrecFloat::from_i64(m as i64, prec).div_i64(nodes as i64))?;
    }
    let mut prev = sum.div_i64(nodes as i64);
    while nodes < 1 << 15 {
        for m in 0..nodes {
            sum = &sum + &sample(PrecFloat::from_i64(2 * m as i64 + 1, prec).div_i64(2 * nodes as i64))?;
        }
        nodes *= 2;
        let cur = sum.div_i64(nodes as i64);
        let diff = cur.dist_log2(&prev) - cur.log2_abs();
        prev = cur;
        if diff < tol_log2 {
            return Ok(prev);
        }
    }
    Err(Error::QuadratureNotConverged(contour_imag))
}

/// The theta / partial theta expression
/// `-i^(l+1) q^(-h_s+c/24) eta^(l-2) prod_j e^(2 pi i z_j j s/l)
///  sum_nu theta+_(s-l/2, l mod 2, l/2)(w_nu - wbar) / prod_(j != nu) theta(w_nu - w_j)`
/// with `wbar` the mean of the `w_j`.
pub fn f_ls_decomposed(s: u32, point: &MultivarPoint) -> Result<PrecComplex> {
    point.check_distinct()?;
    let ell = point.ell();
    let l = i64::from(ell);
    let prec = point.tau.prec();
    let wp = guard(prec);
    let tau = point.tau.with_prec(wp);
    let ws: Vec<PrecComplex> = point.ws.iter().map(|w| w.with_prec(wp)).collect();
    let expo = -h_s(ell, s) + rat(central_charge(ell), 24);
    let mut pref = tau.scale(&PrecFloat::from_rational(&expo, wp)).exp_2pi_i();
    pref = &pref * &eta(&tau)?.powi(l - 2);
    for (j, z) in point.zs.iter().enumerate() {
        let k = rat((j as i64 + 1) * i64::from(s), l);
        pref = &pref * &z.with_prec(wp).scale(&PrecFloat::from_rational(&k, wp)).exp_2pi_i();
    }
    pref = -IPower::I.pow(l + 1).apply(&pref);
    let mut wbar = PrecComplex::zero(wp);
    for w in &ws {
        wbar = &wbar + w;
    }
    let wbar = wbar.div_i64(l);
    let params = PartialThetaParams::new(rat_int(i64::from(s)) - rat(l, 2), (ell % 2) as u8, rat(l, 2))?;
    let mut total = PrecComplex::zero(wp);
    for (nu, wn) in ws.iter().enumerate() {
        let mut den = PrecComplex::one(wp);
        for (j, wj) in ws.iter().enumerate() {
            if j != nu {
                den = &den * &theta(&(wn - wj), &tau)?;
            }
        }
        let pt = partial_theta(&params, &(wn - &wbar), &tau)?.value;
        total = &total + &(&pt / &den);
    }
    Ok((&pref * &total).with_prec(prec))
}

/// Residue of [`script_f_ell`] at `w_nu` by the trapezoid rule on a small circle.
pub fn residue_by_contour(
    ws: &[PrecComplex],
    nu: usize,
    tau: &PrecComplex,
    radius: f64,
    nodes: usize,
) -> Result<PrecComplex> {
    let prec = tau.prec();
    let r = PrecFloat::from_f64(radius, prec);
    let mut acc = PrecComplex::zero(prec);
    for m in 0..nodes {
        let d = PrecComplex::from_real(PrecFloat::from_i64(m as i64, prec).div_i64(nodes as i64))
            .exp_2pi_i()
            .scale(&r);
        let f = script_f_ell(&(&ws[nu] + &d), ws, tau)?;
        acc = &acc + &(&f * &d);
    }
    Ok(acc.div_i64(nodes as i64))
}

/// Closed form `-(1/(2 pi eta^3)) / prod_(j != nu) theta(w_nu - w_j)`.
pub fn residue_closed(ws: &[PrecComplex], nu: usize, tau: &PrecComplex) -> Result<PrecComplex> {
    let prec = tau.prec();
    let mut den = eta(tau)?.powi(3).scale(&PrecFloat::pi(prec).ldexp(1));
    for (j, wj) in ws.iter().enumerate() {
        if j != nu {
            den = &den * &theta(&(&ws[nu] - wj), tau)?;
        }
    }
    if den.is_zero() {
        return Err(Error::NearPole("coinciding w".into()));
    }
    Ok(-den.recip())
}

/// Relative distance `log2(|a - b| / |b|)`.
pub fn rel_log2(a: &PrecComplex, b: &PrecComplex) -> f64 {
    if b.re.is_zero() && b.im.is_zero() {
        return a.log2_abs();
    }
    a.dist_log2(b) - b.log2_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn c(re: f64, im: f64) -> PrecComplex {
        PrecComplex::from_f64(re, im, P)
    }

    fn golden() -> MultivarPoint {
        MultivarPoint::new(vec![c(0.13, 0.21), c(-0.07, 0.18)], PrecComplex::i(P)).unwrap()
    }

    #[test]
    fn point_validation() {
        assert!(MultivarPoint::new(vec![c(0.1, 0.5)], PrecComplex::i(P)).is_err());
        assert!(MultivarPoint::new(vec![c(0.1, -0.1)], PrecComplex::i(P)).is_err());
        let p = golden();
        assert_eq!(p.ell(), 3);
        assert_eq!(p.ws()[2], PrecComplex::zero(P));
        let (lo, hi) = p.contour_strip();
        assert!(lo == 0.0 && (hi - 0.61).abs() < 1e-12);
        // w_1 - w_2 = -z_1 sits next to the lattice point -1
        let d = MultivarPoint::new(vec![c(1.0, 1e-30), c(0.2, 0.1)], PrecComplex::i(P)).unwrap();
        assert!(d.check_distinct().is_err());
        assert!(f_ls_decomposed(0, &d).is_err());
    }

    #[test]
    fn product_matches_theta_for_one_variable() {
        // F_1 = (q)^2 (-i) q^(1/8) zeta^(-1/2) / theta(z)
        let tau = c(0.1, 1.1);
        let z = c(0.2, 0.3);
        let f = f_ell_product(core::slice::from_ref(&z), &tau).unwrap();
        let q = tau.exp_2pi_i();
        let mut qp = PrecComplex::one(P);
        let mut qn = q.clone();
        for _ in 0..200 {
            qp = &qp * &(&PrecComplex::one(P) - &qn);
            qn = &qn * &q;
        }
        let pref = (&tau.div_i64(8) - &z.div_i64(2)).exp_2pi_i();
        let want = IPower::MINUS_I.apply(&(&(&qp.square() * &pref) / &theta(&z, &tau).unwrap()));
        assert!(rel_log2(&f.value, &want) < -200.0);
        assert!(f.err_log2 < f.value.log2_abs() - 250.0);
    }

    #[test]
    fn golden_product_value_is_stable() {
        let p = golden();
        let mut all = p.zs().to_vec();
        all.push(c(0.31, 0.2));
        let hi = f_ell_product(&all, p.tau()).unwrap().value;
        let lo = f_ell_product(&all, &p.tau().with_prec(128)).unwrap().value;
        assert!(rel_log2(&lo.with_prec(P), &hi) < -110.0);
        // same value from the theta quotient in w = z_3
        let w = &all[2];
        let prod = script_f_ell(w, p.ws(), p.tau()).unwrap();
        let q = p.tau().exp_2pi_i();
        let mut qp = PrecComplex::one(P);
        let mut qn = q.clone();
        for _ in 0..200 {
            qp = &qp * &(&PrecComplex::one(P) - &qn);
            qn = &qn * &q;
        }
        // F_3 = (q)^4 (-i)^3 q^(3/8) prod Z_j^(-1/2) / prod theta(u_j)
        let mut zsum = PrecComplex::zero(P);
        let mut half = PrecComplex::zero(P);
        for z in all.iter().rev() {
            zsum = &zsum + z;
            half = &half + &zsum;
        }
        let pref = (&p.tau().scale(&PrecFloat::from_rational(&rat(3, 8), P)) - &half.div_i64(2)).exp_2pi_i();
        let want = IPower::MINUS_I.pow(3).apply(&(&(&qp.powi(4) * &pref) * &prod));
        assert!(rel_log2(&hi, &want) < -200.0);
    }

    #[test]
    fn elliptic_shifts() {
        let p = golden();
        let tau = p.tau();
        let w = c(0.27, 0.33);
        let f = script_f_ell(&w, p.ws(), tau).unwrap();
        let f1 = script_f_ell(&(&w + &PrecComplex::one(P)), p.ws(), tau).unwrap();
        assert!(rel_log2(&f1, &-f.clone()).abs() > 0.0 && rel_log2(&f1, &(-&f)) < -200.0);
        let ft = script_f_ell(&(&w - tau), p.ws(), tau).unwrap();
        // (-1)^l q^(l/2) prod_(j<=l) zeta_j^(-j), zeta_l = e(w)
        let mut phase = &tau.scale(&PrecFloat::from_f64(1.5, P)) - &w.mul_i64(3);
        for (j, z) in p.zs().iter().enumerate() {
            phase = &phase - &z.mul_i64(j as i64 + 1);
        }
        let want = -&(&f * &phase.exp_2pi_i());
        assert!(rel_log2(&ft, &want) < -200.0);
    }

    #[test]
    fn residues() {
        let p = golden();
        for nu in 0..3 {
            let a = residue_by_contour(p.ws(), nu, p.tau(), 0.05, 128).unwrap();
            let b = residue_closed(p.ws(), nu, p.tau()).unwrap();
            assert!(rel_log2(&a, &b) < -100.0, "nu={nu}");
        }
    }

    #[test]
    fn quadrature_against_decomposition() {
        let p = golden();
        for s in 0..3 {
            let a = f_ls_multivar_quadrature(i64::from(s), &p, p.default_contour(), -200.0).unwrap();
            let b = f_ls_decomposed(s, &p).unwrap();
            assert!(rel_log2(&a, &b) < -150.0, "s={s}");
        }
        let p2 = MultivarPoint::new(vec![c(0.1, 0.2)], PrecComplex::i(P)).unwrap();
        let a = f_ls_multivar_quadrature(0, &p2, p2.default_contour(), -200.0).unwrap();
        assert!(rel_log2(&a, &f_ls_decomposed(0, &p2).unwrap()) < -150.0);
    }

    #[test]
    fn contour_independence() {
        let p = golden();
        let a = f_ls_multivar_quadrature(1, &p, 0.2, -150.0).unwrap();
        let b = f_ls_multivar_quadrature(1, &p, 0.4, -150.0).unwrap();
        assert!(rel_log2(&a, &b) < -140.0);
        assert!(f_ls_multivar_quadrature(1, &p, 0.7, -150.0).is_err());
    }
}
