//! Dedekind eta, the Jacobi theta function, Eisenstein series, the Jacobi
//! form `g_l = eta^(3l) / theta^l` and its Laurent coefficients at `z = 0`.
//!
//! Conventions: `q = e^(2 pi i tau)`, `zeta = e^(2 pi i z)`,
//! `theta(z; tau) = sum_{n in 1/2 + Z} q^(n^2/2) e^(2 pi i n (z + 1/2))`,
//! `G_2k(tau) = (2 pi i)^(2k) Ghat_2k(tau)` with
//! `Ghat_2k = -B_2k/(2k)! + 2/(2k-1)! sum sigma_(2k-1)(n) q^n`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bernoulli::{bernoulli_numbers, factorial};
use crate::complex::PrecComplex;
use crate::error::{Error, Result};
use crate::float::PrecFloat;
use crate::pigraded::IPower;
use crate::series::{rat_int, ExactQSeries};

const LOG2_E: f64 = core::f64::consts::LOG2_E;
const PI: f64 = core::f64::consts::PI;

/// A value together with a bound `|error| <= 2^err_log2`.
#[derive(Clone, Debug)]
pub struct Certified {
    pub value: PrecComplex,
    pub err_log2: f64,
}

pub fn check_upper_half_plane(tau: &PrecComplex) -> Result<()> {
    if tau.im.is_positive() {
        Ok(())
    } else {
        Err(Error::OutsideDomain("tau must lie in the upper half-plane".into()))
    }
}

/// Working precision for an evaluation requested at `prec` bits.
pub(crate) fn guard(prec: u32) -> u32 {
    prec + 32
}

/// `sigma_m(n)` for `1 <= n < limit`, index 0 unused.
pub fn divisor_sigmas(m: u32, limit: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); limit.max(1)];
    for d in 1..limit {
        let p = num_traits::pow(BigInt::from(d), m as usize);
        let mut n = d;
        while n < limit {
            out[n] += &p;
            n += d;
        }
    }
    out
}

/// `Ghat_2k` as an exact series in `q`, exact below `q^trunc`.
pub fn eisenstein_hat_series(k: u32, trunc: i64) -> ExactQSeries {
    assert!(k >= 1, "weight index must be positive");
    let b = bernoulli_numbers(2 * k as usize);
    let n = trunc.max(1) as usize;
    let sig = divisor_sigmas(2 * k - 1, n);
    let f2k = BigRational::from_integer(factorial(2 * u64::from(k)));
    let scale = BigRational::new(BigInt::from(2), factorial(2 * u64::from(k) - 1));
    let mut c = Vec::with_capacity(n);
    c.push(-(&b[2 * k as usize] / f2k));
    for s in sig.iter().skip(1) {
        c.push(&scale * BigRational::from_integer(s.clone()));
    }
    ExactQSeries::from_coeffs(1, 0, trunc, c)
}

/// `(2 pi i)^n`.
pub fn two_pi_i_pow(n: i64, prec: u32) -> PrecComplex {
    let tp = PrecFloat::pi(prec).ldexp(1).powi(n);
    IPower::new(n).apply(&PrecComplex::from_real(tp))
}

/// `G_2k(tau)` from the `q`-expansion truncated before `q^qtrunc`, with a
/// bound on the discarded tail.
pub fn eisenstein_g2k(k: u32, tau: &PrecComplex, qtrunc: usize) -> Result<Certified> {
    check_upper_half_plane(tau)?;
    if k == 0 {
        return Err(Error::InvalidParameter(
            "Eisenstein weight index must be positive".into(),
        ));
    }
    let prec = tau.prec();
    let wp = guard(prec);
    let tau_w = tau.with_prec(wp);
    let q = tau_w.exp_2pi_i();
    let sig = divisor_sigmas(2 * k - 1, qtrunc.max(1));
    let mut sum = PrecComplex::zero(wp);
    let mut qn = PrecComplex::one(wp);
    for s in sig.iter().skip(1) {
        qn = &qn * &q;
        sum = &sum + &qn.scale(&PrecFloat::from_bigint(s, wp));
    }
    let b = bernoulli_numbers(2 * k as usize);
    let k64 = u64::from(k);
    let c0 = PrecFloat::from_rational(
        &(-(&b[2 * k as usize] / BigRational::from_integer(factorial(2 * k64)))),
        wp,
    );
    let two = PrecFloat::from_ratio(&BigInt::from(2), &factorial(2 * k64 - 1), wp);
    let hat = &PrecComplex::from_real(c0) + &sum.scale(&two);
    let value = (&two_pi_i_pow(2 * i64::from(k), wp) * &hat).with_prec(prec);
    // sigma_(2k-1)(n) <= n^(2k); geometric domination of the tail
    let x_log2 = -2.0 * PI * tau.im.to_f64() * LOG2_E;
    let n0 = qtrunc.max(1) as f64;
    let ratio_log2 = 2.0 * k as f64 * libm::log2((n0 + 1.0) / n0) + x_log2;
    let err_log2 = if ratio_log2 >= -0.01 {
        f64::INFINITY
    } else {
        let head = 2.0 * k as f64 * libm::log2(n0) + n0 * x_log2;
        let geo = -libm::log2(1.0 - libm::exp2(ratio_log2));
        let pref = 2.0 * k as f64 * libm::log2(2.0 * PI) + 1.0
            - libm::log2(factorial(2 * k64 - 1).to_f64().unwrap_or(f64::MAX));
        head + geo + pref
    };
    let err_log2 = err_log2.max(-(f64::from(prec)) + 2.0 + value.log2_abs().min(0.0));
    Ok(Certified { value, err_log2 })
}

/// Number of `q`-terms for which the `G_2k` tail drops below `2^-bits`.
fn eisenstein_terms(k: u32, im_tau: f64, bits: f64) -> usize {
    let x_log2 = -2.0 * PI * im_tau * LOG2_E;
    let mut n = 4usize;
    loop {
        let nf = n as f64;
        let ratio = 2.0 * k as f64 * libm::log2((nf + 1.0) / nf) + x_log2;
        let head = 2.0 * k as f64 * libm::log2(nf) + nf * x_log2 + 2.0 * k as f64 * 2.65;
        if ratio < -0.5 && head < -bits {
            return n;
        }
        n += 1 + n / 4;
        if n > 1_000_000 {
            return n;
        }
    }
}

/// `G_2k(tau)` to the precision of `tau`. Points with `|tau| < 1` are first
/// moved by `tau -> -1/tau`, using `G_2k(tau) = tau^(-2k) G_2k(-1/tau)` plus
/// `2 pi i / tau` when `k = 1`.
pub fn eisenstein_g2k_auto(k: u32, tau: &PrecComplex) -> Result<PrecComplex> {
    check_upper_half_plane(tau)?;
    let prec = tau.prec();
    let wp = guard(prec);
    let t = tau.with_prec(wp);
    let shift = t.re.round_to_bigint();
    let t = &t - &PrecComplex::from_real(PrecFloat::from_bigint(&shift, wp));
    if t.abs_f64() < 0.99 {
        let s = (-&PrecComplex::one(wp)) / &t;
        let n = eisenstein_terms(
            k,
            s.im.to_f64(),
            f64::from(wp) + 8.0 + 2.0 * k as f64 * libm::log2(1.0 / t.abs_f64()),
        );
        let g = eisenstein_g2k(k, &s, n)?.value;
        let mut v = &g * &t.powi(-2 * i64::from(k));
        if k == 1 {
            v = &v + &(&two_pi_i_pow(1, wp) / &t);
        }
        return Ok(v.with_prec(prec));
    }
    let n = eisenstein_terms(k, t.im.to_f64(), f64::from(wp) + 8.0);
    Ok(eisenstein_g2k(k, &t, n)?.value.with_prec(prec))
}

/// Jacobi theta function by its defining sum.
pub fn theta(z: &PrecComplex, tau: &PrecComplex) -> Result<PrecComplex> {
    check_upper_half_plane(tau)?;
    let prec = z.prec().max(tau.prec());
    let wp = guard(prec);
    let z = z.with_prec(wp);
    let tau = tau.with_prec(wp);
    let half = PrecComplex::from_real(PrecFloat::one(wp).ldexp(-1));
    // x = e^(pi i tau), w = e^(2 pi i (z + 1/2))
    let x = tau.ldexp(-1).exp_2pi_i();
    let zs = &z + &half;
    let w = zs.exp_2pi_i();
    let w_inv = w.recip();
    let x2 = x.square();
    let v = tau.im.to_f64();
    let y = zs.im.to_f64();
    // term m >= 0: x^(m(m+1)) (w^m + w^(-m-1))
    let mut sum = PrecComplex::zero(wp);
    let mut xpow = PrecComplex::one(wp); // x^(m(m+1))
    let mut step = x2.clone(); // x^(2(m+1))
    let mut wp_pos = PrecComplex::one(wp); // w^m
    let mut wp_neg = w_inv.clone(); // w^(-m-1)
    let mut scale_log2 = f64::NEG_INFINITY;
    let mut m = 0u64;
    loop {
        let term = &xpow * &(&wp_pos + &wp_neg);
        let mf = m as f64;
        let bound_log2 = LOG2_E * (-PI * v * mf * (mf + 1.0) + 2.0 * PI * y.abs() * (mf + 1.0));
        scale_log2 = scale_log2.max(term.log2_abs());
        sum = &sum + &term;
        if mf * v > y.abs() + 1.0 && bound_log2 < scale_log2.min(0.0) - f64::from(wp) - 8.0 {
            break;
        }
        xpow = &xpow * &step;
        step = &step * &x2;
        wp_pos = &wp_pos * &w;
        wp_neg = &wp_neg * &w_inv;
        m += 1;
        if m > 1_000_000 {
            return Err(Error::QuadratureNotConverged(bound_log2));
        }
    }
    // prefactor x^(1/4) w^(1/2) = e^(pi i tau/4) e^(pi i (z + 1/2))
    let pref = (&tau.ldexp(-3) + &zs.ldexp(-1)).exp_2pi_i();
    Ok((&pref * &sum).with_prec(prec))
}

/// Jacobi theta function by the triple product
/// `-i q^(1/8) zeta^(-1/2) (q)_inf (zeta)_inf (zeta^(-1) q)_inf`.
pub fn theta_product(z: &PrecComplex, tau: &PrecComplex) -> Result<PrecComplex> {
    check_upper_half_plane(tau)?;
    let prec = z.prec().max(tau.prec());
    let wp = guard(prec);
    let z = z.with_prec(wp);
    let tau = tau.with_prec(wp);
    let q = tau.exp_2pi_i();
    let zeta = z.exp_2pi_i();
    let zeta_inv = zeta.recip();
    let one = PrecComplex::one(wp);
    let mut prod = &one - &zeta;
    let spread = zeta.log2_abs().abs();
    let q_log2 = q.log2_abs();
    let mut qn = one.clone();
    let mut n = 1u64;
    loop {
        qn = &qn * &q;
        let f = &(&(&one - &qn) * &(&one - &(&zeta * &qn))) * &(&one - &(&zeta_inv * &qn));
        prod = &prod * &f;
        if n as f64 * q_log2 + spread < -f64::from(wp) - 8.0 {
            break;
        }
        n += 1;
        if n > 10_000_000 {
            return Err(Error::QuadratureNotConverged(n as f64 * q_log2));
        }
    }
    let pref = (&tau.ldexp(-3) - &z.ldexp(-1)).exp_2pi_i();
    Ok(IPower::MINUS_I.apply(&(&pref * &prod)).with_prec(prec))
}

/// Theta by both routes, failing when they disagree beyond `tol_log2`
/// (relative to the larger of `|theta|` and 1). Returns the sum route.
pub fn theta_checked(z: &PrecComplex, tau: &PrecComplex, tol_log2: f64) -> Result<PrecComplex> {
    let a = theta(z, tau)?;
    let b = theta_product(z, tau)?;
    let d = a.dist_log2(&b) - a.log2_abs().max(0.0);
    if d > tol_log2 {
        return Err(Error::Mismatch(alloc::format!("theta routes differ by 2^{d:.1}")));
    }
    Ok(a)
}

/// `eta(tau) = q^(1/24) (q)_inf` from the product, without modular reduction.
pub fn eta_direct(tau: &PrecComplex) -> Result<PrecComplex> {
    check_upper_half_plane(tau)?;
    let prec = tau.prec();
    let wp = guard(prec);
    let tau = tau.with_prec(wp);
    let q = tau.exp_2pi_i();
    let q_log2 = q.log2_abs();
    let one = PrecComplex::one(wp);
    let mut prod = one.clone();
    let mut qn = one.clone();
    let mut n = 1u64;
    loop {
        qn = &qn * &q;
        prod = &prod * &(&one - &qn);
        if n as f64 * q_log2 < -f64::from(wp) - 8.0 {
            break;
        }
        n += 1;
    }
    let pref = tau.div_i64(24).exp_2pi_i();
    Ok((&pref * &prod).with_prec(prec))
}

/// `eta(tau)`, using `eta(tau + 1) = e^(pi i/12) eta(tau)` and
/// `eta(-1/tau) = sqrt(-i tau) eta(tau)` to speed up points near the real axis.
pub fn eta(tau: &PrecComplex) -> Result<PrecComplex> {
    check_upper_half_plane(tau)?;
    let prec = tau.prec();
    let wp = guard(prec);
    let t = tau.with_prec(wp);
    let shift = t.re.round_to_bigint();
    let t = &t - &PrecComplex::from_real(PrecFloat::from_bigint(&shift, wp));
    let shift_phase = {
        let s = PrecFloat::from_bigint(&shift, wp).div_i64(24);
        PrecComplex::from_real(s).exp_2pi_i()
    };
    let core = if t.abs_f64() < 0.99 {
        let s = (-&PrecComplex::one(wp)) / &t;
        let root = IPower::MINUS_I.apply(&t).sqrt();
        &eta_direct(&s)? / &root
    } else {
        eta_direct(&t)?
    };
    Ok((&shift_phase * &core).with_prec(prec))
}

/// Polynomial in `G_2, G_4, ..` with rational coefficients and a fixed weight.
///
/// Exponent vectors are indexed so that entry `i` is the power of `G_(2i+2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasimodularPoly {
    weight: u32,
    monomials: BTreeMap<Vec<u32>, BigRational>,
}

fn monomial_weight(powers: &[u32]) -> u32 {
    powers.iter().enumerate().map(|(i, &m)| 2 * (i as u32 + 1) * m).sum()
}

fn trim(mut powers: Vec<u32>) -> Vec<u32> {
    while powers.last() == Some(&0) {
        powers.pop();
    }
    powers
}

impl QuasimodularPoly {
    pub fn zero(weight: u32) -> Self {
        QuasimodularPoly {
            weight,
            monomials: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero(0);
        p.add_monomial(Vec::new(), c).expect("weight 0");
        p
    }

    /// `G_2k` itself.
    pub fn g(k: u32) -> Self {
        let mut powers = vec![0; k as usize];
        powers[k as usize - 1] = 1;
        let mut p = Self::zero(2 * k);
        p.add_monomial(powers, BigRational::one()).expect("consistent weight");
        p
    }

    /// Add `c * prod G^powers`; the monomial must have the declared weight.
    pub fn add_monomial(&mut self, powers: Vec<u32>, c: BigRational) -> Result<()> {
        let powers = trim(powers);
        if monomial_weight(&powers) != self.weight {
            return Err(Error::InvalidParameter(
                "monomial weight differs from the polynomial weight".into(),
            ));
        }
        let entry = self.monomials.entry(powers.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.monomials.remove(&powers);
        }
        Ok(())
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.monomials.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Whether every monomial has the declared weight.
    pub fn weights_consistent(&self) -> bool {
        self.monomials.keys().all(|p| monomial_weight(p) == self.weight)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.weight != other.weight {
            return Err(Error::InvalidParameter(
                "adding quasimodular polynomials of different weight".into(),
            ));
        }
        let mut out = self.clone();
        for (p, c) in &other.monomials {
            out.add_monomial(p.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut out = Self::zero(self.weight);
        if r.is_zero() {
            return out;
        }
        for (p, c) in &self.monomials {
            out.monomials.insert(p.clone(), c * r);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.weight + other.weight);
        for (p1, c1) in &self.monomials {
            for (p2, c2) in &other.monomials {
                let n = p1.len().max(p2.len());
                let p: Vec<u32> = (0..n)
                    .map(|i| p1.get(i).copied().unwrap_or(0) + p2.get(i).copied().unwrap_or(0))
                    .collect();
                out.add_monomial(p, c1 * c2).expect("weights add");
            }
        }
        out
    }

    /// Largest `k` such that `G_2k` occurs.
    pub fn max_index(&self) -> u32 {
        self.monomials.keys().map(|p| p.len() as u32).max().unwrap_or(0)
    }

    /// Evaluate given `values[i] = G_(2i+2)`.
    pub fn eval_with(&self, values: &[PrecComplex], prec: u32) -> PrecComplex {
        let mut acc = PrecComplex::zero(prec);
        for (p, c) in &self.monomials {
            let mut term = PrecComplex::from_real(PrecFloat::from_rational(c, prec));
            for (i, &m) in p.iter().enumerate() {
                if m > 0 {
                    term = &term * &values[i].powi(i64::from(m));
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    pub fn eval(&self, tau: &PrecComplex) -> Result<PrecComplex> {
        let prec = tau.prec();
        let values = (1..=self.max_index())
            .map(|k| eisenstein_g2k_auto(k, &guarded(tau)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.eval_with(&values, guard(prec)).with_prec(prec))
    }

    /// Substitute the exact series `Ghat_2k` for `G_2k`. Since every monomial
    /// has weight `w`, the result equals `(2 pi i)^(-w)` times the value.
    pub fn eval_hat_series(&self, trunc: i64) -> ExactQSeries {
        let hats: Vec<ExactQSeries> = (1..=self.max_index())
            .map(|k| eisenstein_hat_series(k, trunc))
            .collect();
        let mut acc = ExactQSeries::zero(1, trunc);
        for (p, c) in &self.monomials {
            let mut term = ExactQSeries::monomial(1, 0, c.clone(), trunc);
            for (i, &m) in p.iter().enumerate() {
                for _ in 0..m {
                    term = term.mul(&hats[i]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

fn guarded(tau: &PrecComplex) -> PrecComplex {
    tau.with_prec(guard(tau.prec()))
}

/// `D_(-j)(tau) = phase * (2 pi)^two_pi_power * poly(G_2, G_4, ..)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentCoefficient {
    pub j: u32,
    pub phase: IPower,
    pub two_pi_power: i32,
    pub poly: QuasimodularPoly,
}

impl LaurentCoefficient {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn eval(&self, tau: &PrecComplex) -> Result<PrecComplex> {
        let prec = tau.prec();
        let v = self.poly.eval(&guarded(tau))?;
        let tp = PrecFloat::pi(guard(prec)).ldexp(1).powi(i64::from(self.two_pi_power));
        Ok(self.phase.apply(&v.scale(&tp)).with_prec(prec))
    }

    /// Evaluate with precomputed Eisenstein values `values[i] = G_(2i+2)(tau)`.
    pub fn eval_with(&self, values: &[PrecComplex], prec: u32) -> PrecComplex {
        let v = self.poly.eval_with(values, prec);
        let tp = PrecFloat::pi(prec).ldexp(1).powi(i64::from(self.two_pi_power));
        self.phase.apply(&v.scale(&tp))
    }
}

/// Coefficients `e_m`, `m = 0..=max`, of `exp(l sum_k G_2k z^2k / (2k))`,
/// with the `G_2k` kept symbolic.
pub fn exp_eisenstein_coefficients(ell: u32, max: u32) -> Vec<QuasimodularPoly> {
    let mut e: Vec<QuasimodularPoly> = Vec::with_capacity(max as usize + 1);
    e.push(QuasimodularPoly::constant(BigRational::one()));
    for n in 1..=max {
        // n e_n = sum_{m>=1} m g_m e_(n-m), g_(2k) = l G_2k/(2k)
        let mut acc = QuasimodularPoly::zero(n);
        for k in 1..=n / 2 {
            let term = QuasimodularPoly::g(k)
                .scale(&rat_int(i64::from(ell)))
                .mul(&e[(n - 2 * k) as usize]);
            acc = acc.add(&term).expect("weights agree");
        }
        e.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(n))));
    }
    e
}

/// Laurent coefficients `D_(-1), .., D_(-l)` of `g_l` at `z = 0`, defined by
/// `g_l(z) = sum_j D_(-j) / (2 pi i z)^j + O(1)`.
///
/// From `theta(z) = -2 pi z eta^3 exp(-sum G_2k z^2k / (2k))` one gets
/// `D_(-j) = (-1)^l i^j (2 pi)^(j-l) e_(l-j)`.
pub fn laurent_coefficients_d(ell: u32) -> Vec<LaurentCoefficient> {
    assert!(ell >= 1, "ell must be positive");
    let e = exp_eisenstein_coefficients(ell, ell);
    (1..=ell)
        .map(|j| LaurentCoefficient {
            j,
            phase: IPower::MINUS_ONE.pow(i64::from(ell)) * IPower::I.pow(i64::from(j)),
            two_pi_power: j as i32 - ell as i32,
            poly: e[(ell - j) as usize].clone(),
        })
        .collect()
}

/// `g_l(z; tau) = eta^(3l) / theta^l`; errors near the lattice of poles.
pub fn g_ell(z: &PrecComplex, tau: &PrecComplex, ell: u32) -> Result<PrecComplex> {
    let prec = z.prec().max(tau.prec());
    let th = theta(&z.with_prec(guard(prec)), &guarded(tau))?;
    if th.log2_abs() < -f64::from(prec) / 2.0 {
        return Err(Error::NearPole(alloc::format!("|theta(z)| = 2^{:.1}", th.log2_abs())));
    }
    let et = eta(&guarded(tau))?;
    let v = &et.powi(3 * i64::from(ell)) / &th.powi(i64::from(ell));
    Ok(v.with_prec(prec))
}

/// `g_l` with `eta(tau)^(3l)` supplied by the caller.
pub fn g_ell_with_eta(z: &PrecComplex, tau: &PrecComplex, ell: u32, eta_pow: &PrecComplex) -> Result<PrecComplex> {
    let prec = z.prec().max(tau.prec());
    let th = theta(z, tau)?;
    if th.log2_abs() < -f64::from(prec) / 2.0 {
        return Err(Error::NearPole(alloc::format!("|theta(z)| = 2^{:.1}", th.log2_abs())));
    }
    Ok(eta_pow / &th.powi(i64::from(ell)))
}

/// `D_(-j)` extracted numerically: `(2 pi i)^j` times the coefficient of
/// `z^-j` of `g_l`, by the trapezoid rule on the circle `|z| = radius`.
pub fn laurent_coefficient_by_contour(
    ell: u32,
    j: u32,
    tau: &PrecComplex,
    radius: f64,
    nodes: usize,
) -> Result<PrecComplex> {
    let prec = tau.prec();
    let wp = guard(prec);
    let tau_w = tau.with_prec(wp);
    let eta_pow = eta(&tau_w)?.powi(3 * i64::from(ell));
    let r = PrecFloat::from_f64(radius, wp);
    let mut acc = PrecComplex::zero(wp);
    for m in 0..nodes {
        let phase = PrecComplex::from_real(PrecFloat::from_i64(m as i64, wp).div_i64(nodes as i64)).exp_2pi_i();
        let z = phase.scale(&r);
        let g = g_ell_with_eta(&z, &tau_w, ell, &eta_pow)?;
        acc = &acc + &(&g * &z.powi(i64::from(j)));
    }
    let coeff = acc.div_i64(nodes as i64);
    Ok((&coeff * &two_pi_i_pow(i64::from(j), wp)).with_prec(prec))
}

/// Numerical value of `(2 pi)^k` for an integer `k`.
pub fn two_pi_pow(k: i64, prec: u32) -> PrecFloat {
    PrecFloat::pi(prec).ldexp(1).powi(k)
}

/// Convert a rational to a complex number.
pub fn complex_from_rational(r: &BigRational, prec: u32) -> PrecComplex {
    PrecComplex::from_real(PrecFloat::from_rational(r, prec))
}

/// `|x|` for a rational as `f64`.
pub fn rational_abs_f64(r: &BigRational) -> f64 {
    r.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    const P: u32 = 256;

    fn c(re: f64, im: f64) -> PrecComplex {
        PrecComplex::from_f64(re, im, P)
    }

    fn rel(a: &PrecComplex, b: &PrecComplex) -> f64 {
        a.dist_log2(b) - b.log2_abs()
    }

    #[test]
    fn g2_constant_term() {
        let s = eisenstein_hat_series(1, 3);
        assert_eq!(s.coeff(0), rat(-1, 12));
        // (2 pi i)^2 (-1/12) = pi^2/3
        let tau = c(0.0, 6.0);
        let v = eisenstein_g2k(1, &tau, 40).unwrap().value;
        assert!((v.re.to_f64() - PI * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn eisenstein_modular_laws() {
        let tau = c(0.0, 2.0);
        let g = eisenstein_g2k(1, &tau, 80).unwrap();
        let s = (-&PrecComplex::one(P)) / &tau;
        let gs = eisenstein_g2k(1, &s, 400).unwrap();
        let lhs = &g.value - &(&gs.value / &tau.square());
        let rhs = &two_pi_i_pow(1, P) / &tau;
        assert!(lhs.dist_log2(&rhs) < -85.0);
        assert!(g.err_log2 < -200.0);
        let tau = c(1.0, 1.0);
        let s = (-&PrecComplex::one(P)) / &tau;
        let a = eisenstein_g2k(2, &s, 600).unwrap().value;
        let b = &eisenstein_g2k(2, &tau, 200).unwrap().value * &tau.powi(4);
        assert!(rel(&a, &b) < -85.0);
        for k in 1..=4 {
            let t = c(0.15, 0.4);
            let direct = eisenstein_g2k(k, &t, 3000).unwrap().value;
            let auto = eisenstein_g2k_auto(k, &t).unwrap();
            assert!(rel(&auto, &direct) < -200.0, "k={k}");
        }
    }

    #[test]
    fn theta_routes_and_laws() {
        let tau = c(0.0, 1.0);
        assert!(theta(&c(0.0, 0.0), &tau).unwrap().log2_abs() < -250.0);
        let z = c(0.1, 0.2);
        let a = theta(&z, &tau).unwrap();
        let b = theta_product(&z, &tau).unwrap();
        assert!(rel(&a, &b) < -240.0);
        let shifted = theta(&(&z + &PrecComplex::one(P)), &tau).unwrap();
        assert!(rel(&shifted, &(-&a)) < -240.0);
        // S-transform
        let z = c(0.3, 0.1);
        let tau = c(0.0, 2.0);
        let ti = (-&PrecComplex::one(P)) / &tau;
        let lhs = theta(&(&z / &tau), &ti).unwrap();
        let root = IPower::MINUS_I.apply(&tau).sqrt();
        let ex = (&z.square() / &tau).ldexp(-1).exp_2pi_i();
        let rhs = IPower::MINUS_I.apply(&(&(&root * &ex) * &theta(&z, &tau).unwrap()));
        assert!(rel(&lhs, &rhs) < -240.0);
    }

    #[test]
    fn eta_values() {
        let tau = c(0.5, 1.0);
        let s = (-&PrecComplex::one(P)) / &tau;
        let lhs = eta_direct(&s).unwrap();
        let rhs = &IPower::MINUS_I.apply(&tau).sqrt() * &eta_direct(&tau).unwrap();
        assert!(rel(&lhs, &rhs) < -240.0);
        let e = eta(&c(0.0, 1.0)).unwrap();
        assert!(e.re.is_positive() && e.im.log2_abs() < -250.0);
        // eta(i) = Gamma(1/4) / (2 pi^(3/4))
        assert!((e.re.to_f64() - 0.768_225_422_326_056_6).abs() < 1e-15);
        let small = c(0.1, 0.05);
        assert!(rel(&eta(&small).unwrap(), &eta_direct(&small).unwrap()) < -200.0);
        let head = eta_qseries_head();
        assert_eq!(head, vec![1, -1, -1, 0, 0, 1, 0, 1]);
    }

    fn eta_qseries_head() -> Vec<i64> {
        let s = crate::series::eta_qseries(8);
        (0..8)
            .map(|k| s.coeff(1 + 24 * k).to_integer().to_i64().unwrap())
            .collect()
    }

    #[test]
    fn laurent_coefficients_for_three() {
        let d = laurent_coefficients_d(3);
        assert_eq!(d[2].phase, IPower::I);
        assert_eq!(d[2].poly, QuasimodularPoly::constant(BigRational::one()));
        assert_eq!(d[2].two_pi_power, 0);
        assert!(d[1].is_zero());
        // D_-1 = -3i/(8 pi^2) G_2
        assert_eq!(d[0].phase, IPower::MINUS_I);
        assert_eq!(d[0].two_pi_power, -2);
        assert_eq!(d[0].poly, QuasimodularPoly::g(1).scale(&rat(3, 2)));
    }

    #[test]
    fn laurent_weights_and_parity() {
        for ell in 1..=8u32 {
            for d in laurent_coefficients_d(ell) {
                assert!(d.poly.weights_consistent());
                assert_eq!(d.poly.weight(), ell - d.j);
                if (ell - d.j) % 2 == 1 {
                    assert!(d.is_zero());
                }
            }
        }
    }

    #[test]
    fn laurent_matches_contour() {
        let tau = PrecComplex::from_f64(0.1, 1.1, 128);
        for ell in 1..=8u32 {
            for d in laurent_coefficients_d(ell) {
                let sym = d.eval(&tau).unwrap();
                let num = laurent_coefficient_by_contour(ell, d.j, &tau, 0.25, 96).unwrap();
                let scale = sym.log2_abs().max(num.log2_abs()).max(-20.0);
                assert!(sym.dist_log2(&num) - scale < -40.0, "ell={ell} j={}", d.j);
            }
        }
    }

    #[test]
    fn g_ell_elliptic_law() {
        let tau = c(0.0, 1.0);
        let z = c(0.2, 0.1);
        let g = g_ell(&z, &tau, 3).unwrap();
        let g1 = g_ell(&(&z + &PrecComplex::one(P)), &tau, 3).unwrap();
        assert!(rel(&g1, &(-&g)) < -240.0);
        let gt = g_ell(&(&z + &tau), &tau, 3).unwrap();
        // (-1)^l zeta^l q^(l/2)
        let f = (&z.mul_i64(3) + &tau.mul_i64(3).ldexp(-1)).exp_2pi_i();
        assert!(rel(&gt, &(-&(&f * &g))) < -240.0);
        assert!(matches!(g_ell(&c(1e-60, 0.0), &tau, 2), Err(Error::NearPole(_))));
        // residue of g_1 at 0 is D_-1 / (2 pi i) = -1/(2 pi)
        let d = laurent_coefficients_d(1);
        let v = d[0].eval(&tau).unwrap();
        let res = &v / &two_pi_i_pow(1, P);
        assert!((res.re.to_f64() + 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn growth_of_laurent_coefficients() {
        // |D_-j(it/2pi)| t^(l-j) stays bounded as t decreases
        let ell = 4;
        for d in laurent_coefficients_d(ell) {
            if d.is_zero() {
                continue;
            }
            let mut prev = f64::NAN;
            for t in [0.4, 0.2, 0.1, 0.05] {
                let tau = PrecComplex::from_f64(0.0, t / (2.0 * PI), 128);
                let v = d.eval(&tau).unwrap().abs_f64() * libm::pow(t, f64::from(ell - d.j));
                if !prev.is_nan() {
                    assert!(v < 2.0 * prev + 1.0, "j={} t={t}", d.j);
                }
                prev = v;
            }
        }
    }
}
