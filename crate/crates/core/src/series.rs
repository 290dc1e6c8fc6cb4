//! Truncated formal series with exact rational coefficients.
//!
//! [`ExactQSeries`] is a Laurent series in `x = q^(1/D)`; exponents are
//! stored as integers in units of `1/D`. Every value records the order
//! `trunc` below which its coefficients are guaranteed correct, and every
//! operation recomputes that order.
//!
//! [`ZetaQSeries`] is a bivariate series in `zeta` and `q` used for
//! coefficient extraction from products of Pochhammer symbols. It keeps a
//! term `zeta^k q^m` only while `k + m <= cap`; the truncation is exact for
//! products of factors `(1 - zeta^a q^b)^(+-1)` with `a + b >= 0`, since such
//! factors can never lower `k + m`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::PrecComplex;
use crate::error::{Error, Result};
use crate::float::PrecFloat;

/// Shorthand for building a rational from two integers.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactQSeries {
    den: u64,
    min_exp: i64,
    trunc: i64,
    coeffs: Vec<BigRational>,
}

impl ExactQSeries {
    /// Series with the given dense coefficients starting at `min_exp`.
    /// Coefficients at or beyond `trunc` are dropped.
    pub fn from_coeffs(den: u64, min_exp: i64, trunc: i64, coeffs: Vec<BigRational>) -> Self {
        assert!(den > 0, "lattice denominator must be positive");
        let mut out = ExactQSeries {
            den,
            min_exp,
            trunc,
            coeffs,
        };
        out.normalize();
        out
    }

    pub fn from_int_coeffs(den: u64, min_exp: i64, trunc: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(den, min_exp, trunc, coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn from_bigint_coeffs(den: u64, min_exp: i64, trunc: i64, coeffs: Vec<BigInt>) -> Self {
        Self::from_coeffs(
            den,
            min_exp,
            trunc,
            coeffs.into_iter().map(BigRational::from_integer).collect(),
        )
    }

    /// The zero series, known to vanish below `trunc`.
    pub fn zero(den: u64, trunc: i64) -> Self {
        Self::from_coeffs(den, trunc, trunc, Vec::new())
    }

    pub fn one(den: u64, trunc: i64) -> Self {
        Self::monomial(den, 0, BigRational::one(), trunc)
    }

    /// `c * x^exp` valid below `trunc`.
    pub fn monomial(den: u64, exp: i64, c: BigRational, trunc: i64) -> Self {
        Self::from_coeffs(den, exp, trunc, vec![c])
    }

    /// Series of a polynomial given as `(exponent, coefficient)` pairs,
    /// exact below `trunc`.
    pub fn from_terms(den: u64, trunc: i64, terms: &[(i64, BigRational)]) -> Self {
        if terms.is_empty() {
            return Self::zero(den, trunc);
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(0);
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_coeffs(den, lo, trunc, coeffs)
    }

    fn normalize(&mut self) {
        let keep = (self.trunc - self.min_exp).max(0) as usize;
        self.coeffs.truncate(keep);
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(i) => {
                self.coeffs.drain(..i);
                self.min_exp += i as i64;
            }
            None => {
                self.coeffs.clear();
                self.min_exp = self.trunc;
            }
        }
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Lowest exponent with a nonzero coefficient (in units of `1/D`);
    /// equals `trunc` for the zero series.
    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Coefficients are exact strictly below this exponent (units of `1/D`).
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn trunc_rational(&self) -> BigRational {
        rat(self.trunc, self.den as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at `x^e`.
    pub fn coeff(&self, e: i64) -> BigRational {
        assert!(
            e < self.trunc,
            "coefficient requested at or beyond the truncation order"
        );
        if e < self.min_exp {
            return BigRational::zero();
        }
        self.coeffs
            .get((e - self.min_exp) as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Coefficient at `q^e` for a rational exponent.
    pub fn coeff_at(&self, e: &BigRational) -> Result<BigRational> {
        let scaled = e * BigRational::from_integer(BigInt::from(self.den));
        if !scaled.is_integer() {
            return Ok(BigRational::zero());
        }
        let k = scaled
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::Truncation("exponent overflow".into()))?;
        if k >= self.trunc {
            return Err(Error::Truncation(alloc::format!(
                "coefficient at {e} is beyond the truncation order"
            )));
        }
        Ok(self.coeff(k))
    }

    /// Nonzero terms as `(exponent, coefficient)`, exponents in units of `1/D`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    /// Dense coefficients for exponents `start, start+1, .., trunc-1`.
    pub fn dense_from(&self, start: i64) -> Vec<BigRational> {
        (start..self.trunc).map(|e| self.coeff(e)).collect()
    }

    /// Integer coefficients, if every coefficient is an integer.
    pub fn integer_coeffs(&self, start: i64) -> Option<Vec<BigInt>> {
        self.dense_from(start)
            .into_iter()
            .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    /// Re-express on the lattice `1/new_den`; `new_den` must be a multiple of `D`.
    pub fn with_den(&self, new_den: u64) -> Self {
        assert!(
            new_den.is_multiple_of(self.den),
            "lattice refinement must be a multiple"
        );
        let f = (new_den / self.den) as i64;
        if f == 1 {
            return self.clone();
        }
        let mut coeffs = Vec::new();
        if !self.coeffs.is_empty() {
            coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * f as usize + 1];
            for (i, c) in self.coeffs.iter().enumerate() {
                coeffs[i * f as usize] = c.clone();
            }
        }
        ExactQSeries {
            den: new_den,
            min_exp: self.min_exp * f,
            trunc: self.trunc * f,
            coeffs,
        }
    }

    /// Re-express on the coarsest lattice that holds every nonzero term.
    pub fn simplify_den(&self) -> Self {
        let mut g = self.den;
        for (e, _) in self.terms() {
            g = g.gcd(&(e.unsigned_abs()));
        }
        g = g.gcd(&self.min_exp.unsigned_abs()).max(1);
        if self.is_zero() {
            g = self.den;
        }
        if g <= 1 {
            return self.clone();
        }
        let gi = g as i64;
        let terms: Vec<(i64, BigRational)> = self.terms().map(|(e, c)| (e / gi, c.clone())).collect();
        let trunc = (self.trunc + gi - 1).div_euclid(gi);
        Self::from_terms(self.den / g, trunc, &terms)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.den == b.den {
            return (a.clone(), b.clone());
        }
        let l = a.den.lcm(&b.den);
        (a.with_den(l), b.with_den(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den != other.den {
            let (a, b) = Self::common(self, other);
            return a.add(&b);
        }
        let trunc = self.trunc.min(other.trunc);
        let lo = self.min_exp.min(other.min_exp).min(trunc);
        let mut coeffs = vec![BigRational::zero(); (trunc - lo).max(0) as usize];
        for s in [self, other] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let e = s.min_exp + i as i64;
                if e < trunc {
                    coeffs[(e - lo) as usize] += c;
                }
            }
        }
        Self::from_coeffs(self.den, lo, trunc, coeffs)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::from_coeffs(
            self.den,
            self.min_exp,
            self.trunc,
            self.coeffs.iter().map(|c| c * k).collect(),
        )
    }

    /// Multiplication by `x^e` (units of `1/D`).
    pub fn shift(&self, e: i64) -> Self {
        ExactQSeries {
            den: self.den,
            min_exp: self.min_exp + e,
            trunc: self.trunc + e,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiplication by `q^e` for a rational exponent, refining the lattice if needed.
    pub fn shift_q(&self, e: &BigRational) -> Self {
        let d = e.denom().to_u64().expect("exponent denominator fits u64");
        let l = self.den.lcm(&d);
        let s = self.with_den(l);
        let k = (e * BigRational::from_integer(BigInt::from(l))).to_integer();
        s.shift(k.to_i64().expect("exponent fits i64"))
    }

    /// Lower the truncation order (never raises it).
    pub fn truncate(&self, trunc: i64) -> Self {
        Self::from_coeffs(self.den, self.min_exp, trunc.min(self.trunc), self.coeffs.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.den != other.den {
            let (a, b) = Self::common(self, other);
            return a.mul(&b);
        }
        let trunc = (self.trunc + other.min_exp).min(other.trunc + self.min_exp);
        let lo = self.min_exp + other.min_exp;
        let len = (trunc - lo).max(0) as usize;
        let mut coeffs = vec![BigRational::zero(); len];
        let nz_b: Vec<(usize, &BigRational)> = other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for &(j, b) in &nz_b {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(self.den, lo, trunc, coeffs)
    }

    /// Multiplicative inverse; fails when the series vanishes below its truncation.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidParameter(
                "non-invertible: series is zero below its truncation".into(),
            ));
        }
        let v = self.min_exp;
        let lead_inv = self.coeffs[0].recip();
        let n = (self.trunc - v) as usize;
        let a: Vec<BigRational> = (0..n)
            .map(|i| self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero))
            .collect();
        let nz: Vec<usize> = (1..n).filter(|&i| !a[i].is_zero()).collect();
        let mut b = vec![BigRational::zero(); n];
        if n > 0 {
            b[0] = lead_inv.clone();
        }
        for k in 1..n {
            let mut acc = BigRational::zero();
            for &i in &nz {
                if i > k {
                    break;
                }
                if !b[k - i].is_zero() {
                    acc += &a[i] * &b[k - i];
                }
            }
            b[k] = -(acc * &lead_inv);
        }
        Ok(Self::from_coeffs(self.den, -v, self.trunc - 2 * v, b))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let mut base = if n < 0 { self.invert()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Self::one(self.den, base.trunc - base.min_exp);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Formal derivative with respect to `x = q^(1/D)`, multiplied by `x`
    /// (the Euler operator `x d/dx`).
    pub fn euler_derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * rat_int(self.min_exp + i as i64))
            .collect();
        Self::from_coeffs(self.den, self.min_exp, self.trunc, coeffs)
    }

    /// `exp(g)` for a series with positive valuation.
    pub fn exp(&self) -> Result<Self> {
        if !self.is_zero() && self.min_exp <= 0 {
            return Err(Error::InvalidParameter(
                "exp needs a series without constant or polar part".into(),
            ));
        }
        let n = self.trunc.max(0) as usize;
        let g: Vec<BigRational> = (0..n as i64)
            .map(|e| {
                if e < self.trunc {
                    self.coeff(e)
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        let nz: Vec<usize> = (1..n).filter(|&i| !g[i].is_zero()).collect();
        let mut e = vec![BigRational::zero(); n];
        if n > 0 {
            e[0] = BigRational::one();
        }
        for m in 1..n {
            let mut acc = BigRational::zero();
            for &k in &nz {
                if k > m {
                    break;
                }
                if !e[m - k].is_zero() {
                    acc += &g[k] * rat_int(k as i64) * &e[m - k];
                }
            }
            e[m] = acc / rat_int(m as i64);
        }
        Ok(Self::from_coeffs(self.den, 0, self.trunc, e))
    }

    /// Logarithm of a series of the form `1 + (positive valuation)`.
    pub fn log(&self) -> Result<Self> {
        if self.is_zero() || self.min_exp != 0 || !self.coeffs[0].is_one() {
            return Err(Error::InvalidParameter("log needs a series with leading term 1".into()));
        }
        let inv = self.invert()?;
        let d = self.euler_derivative().mul(&inv);
        let coeffs = (1..self.trunc).map(|e| d.coeff(e) / rat_int(e)).collect();
        Ok(Self::from_coeffs(self.den, 1, self.trunc, coeffs))
    }

    /// Numeric value at the point where `q^(1/D) = x`.
    pub fn eval_x(&self, x: &PrecComplex) -> PrecComplex {
        let prec = x.prec();
        let mut acc = PrecComplex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &PrecComplex::from_real(PrecFloat::from_rational(c, prec));
        }
        &acc * &x.powi(self.min_exp)
    }

    /// Numeric value at `q = e^(2 pi i tau)`.
    pub fn eval_tau(&self, tau: &PrecComplex) -> PrecComplex {
        let x = tau.div_i64(self.den as i64).exp_2pi_i();
        self.eval_x(&x)
    }

    /// Numeric value at a real `q = e^(-t)`.
    pub fn eval_real_t(&self, t: &PrecFloat) -> PrecFloat {
        let prec = t.prec();
        let x = (-t.div_i64(self.den as i64)).exp();
        let mut acc = PrecFloat::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &x) + &PrecFloat::from_rational(c, prec);
        }
        &acc * &x.powi(self.min_exp)
    }
}

/// `(q^b; q)_inf^power` as a one-variable series, with `b >= 0` an integer.
pub fn q_pochhammer(b: i64, power: i64, trunc: i64) -> Result<ExactQSeries> {
    if b < 0 {
        return Err(Error::InvalidParameter("q-Pochhammer needs a nonnegative shift".into()));
    }
    if b == 0 {
        return Ok(ExactQSeries::zero(1, trunc));
    }
    let n = trunc.max(0) as usize;
    let mut c = vec![BigInt::zero(); n];
    if n > 0 {
        c[0] = BigInt::one();
    }
    let mut j = b;
    while (j as usize) < n.max(1) {
        let step = j as usize;
        let times = power.unsigned_abs();
        for _ in 0..times {
            if power > 0 {
                for e in (step..n).rev() {
                    let t = c[e - step].clone();
                    c[e] -= t;
                }
            } else {
                for e in step..n {
                    let t = c[e - step].clone();
                    c[e] += t;
                }
            }
        }
        j += 1;
    }
    Ok(ExactQSeries::from_bigint_coeffs(1, 0, trunc, c))
}

/// `eta(tau)` as the series `q^(1/24) (q)_inf`, on the lattice `1/24`.
pub fn eta_qseries(trunc: i64) -> ExactQSeries {
    q_pochhammer(1, 1, trunc).expect("valid shift").with_den(24).shift(1)
}

/// Bivariate series in `zeta` and `q` with integer coefficients.
///
/// Terms `zeta^k q^(e/D)` are stored for `0 <= e < q_trunc` and
/// `k*D + e <= cap*D`. All supported factors satisfy `k >= -e/D`, so the
/// table is finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaQSeries {
    den: u64,
    q_trunc: i64,
    cap: i64,
    kmin: i64,
    /// `rows[e][k - kmin]`
    rows: Vec<Vec<BigInt>>,
}

impl ZetaQSeries {
    /// The constant series 1.
    pub fn one(den: u64, q_trunc: i64, cap: i64) -> Self {
        assert!(den > 0 && q_trunc > 0, "bad bivariate series shape");
        let kmin = -((q_trunc - 1) / den as i64) - 1;
        let width = (cap - kmin + 1).max(0) as usize;
        let mut rows = vec![vec![BigInt::zero(); width]; q_trunc as usize];
        if cap >= 0 {
            rows[0][(-kmin) as usize] = BigInt::one();
        }
        ZetaQSeries {
            den,
            q_trunc,
            cap,
            kmin,
            rows,
        }
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn q_trunc(&self) -> i64 {
        self.q_trunc
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    fn in_range(&self, e: i64, k: i64) -> bool {
        e >= 0 && e < self.q_trunc && k >= self.kmin && k * self.den as i64 + e <= self.cap * self.den as i64
    }

    /// Multiply in place by `(1 - zeta^a q^(b/D))^power`.
    pub fn mul_binomial(&mut self, a: i64, b: i64, power: i64) -> Result<()> {
        if b < 0 || a * self.den as i64 + b < 0 || (a == 0 && b == 0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "factor (1 - zeta^{a} q^({b}/{})) breaks the zeta grading",
                self.den
            )));
        }
        let n = self.q_trunc;
        let width = self.rows.first().map_or(0, Vec::len) as i64;
        for _ in 0..power.unsigned_abs() {
            if power > 0 {
                // new[e][k] = old[e][k] - old[e-b][k-a]; read from lower (e, k+?) first
                let es: Vec<i64> = if b > 0 {
                    (b..n).rev().collect()
                } else {
                    (0..n).collect()
                };
                for e in es {
                    let ks: Vec<i64> = if a > 0 || b > 0 {
                        (0..width).rev().collect()
                    } else {
                        (0..width).collect()
                    };
                    for ki in ks {
                        let src = ki - a;
                        if src < 0 || src >= width {
                            continue;
                        }
                        let t = self.rows[(e - b) as usize][src as usize].clone();
                        if !t.is_zero() {
                            self.rows[e as usize][ki as usize] -= t;
                        }
                    }
                }
            } else {
                // new[e][k] = old[e][k] + new[e-b][k-a]
                let es: Vec<i64> = if b > 0 { (b..n).collect() } else { (0..n).collect() };
                for e in es {
                    for ki in 0..width {
                        let src = ki - a;
                        if src < 0 || src >= width {
                            continue;
                        }
                        let t = self.rows[(e - b) as usize][src as usize].clone();
                        if !t.is_zero() {
                            self.rows[e as usize][ki as usize] += t;
                        }
                    }
                }
            }
        }
        self.mask();
        Ok(())
    }

    fn mask(&mut self) {
        let kmin = self.kmin;
        for e in 0..self.q_trunc {
            let width = self.rows[e as usize].len() as i64;
            for ki in 0..width {
                if !self.in_range(e, ki + kmin) {
                    self.rows[e as usize][ki as usize] = BigInt::zero();
                }
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.den != other.den || self.q_trunc != other.q_trunc || self.cap != other.cap {
            return Err(Error::Truncation("bivariate series shapes differ".into()));
        }
        let mut out = Self::one(self.den, self.q_trunc, self.cap);
        for row in &mut out.rows {
            row.iter_mut().for_each(|c| *c = BigInt::zero());
        }
        let kmin = self.kmin;
        for (e1, r1) in self.rows.iter().enumerate() {
            for (i1, c1) in r1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (e2, r2) in other.rows.iter().enumerate().take(self.q_trunc as usize - e1) {
                    for (i2, c2) in r2.iter().enumerate() {
                        if c2.is_zero() {
                            continue;
                        }
                        let k = i1 as i64 + i2 as i64 + 2 * kmin;
                        let e = (e1 + e2) as i64;
                        if out.in_range(e, k) {
                            out.rows[e as usize][(k - kmin) as usize] += c1 * c2;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Coefficient of `zeta^k` as a series in `q`, exact below
    /// `min(q_trunc, (cap - k) * D + 1)`.
    pub fn zeta_coeff(&self, k: i64) -> ExactQSeries {
        let limit = self.q_trunc.min((self.cap - k) * self.den as i64 + 1).max(0);
        let coeffs = (0..limit)
            .map(|e| {
                if k >= self.kmin && k - self.kmin < self.rows[0].len() as i64 {
                    self.rows[e as usize][(k - self.kmin) as usize].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        ExactQSeries::from_bigint_coeffs(self.den, 0, limit, coeffs)
    }

    /// Range of zeta powers that carry a nonzero coefficient.
    pub fn zeta_support(&self) -> Option<(i64, i64)> {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    lo = lo.min(i as i64 + self.kmin);
                    hi = hi.max(i as i64 + self.kmin);
                }
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// `(zeta^a q^b; q)_inf^power` with `b = q_pow` rational, as a bivariate
/// series truncated at `q^trunc` and zeta-grading cap `cap`.
///
/// Negative powers are expanded geometrically, which is valid in the region
/// `|q| < |zeta| < 1`.
pub fn pochhammer_inf(zeta_pow: i64, q_pow: &BigRational, power: i64, trunc: i64, cap: i64) -> Result<ZetaQSeries> {
    if q_pow.is_negative() {
        return Err(Error::InvalidParameter("q exponent must be nonnegative".into()));
    }
    if q_pow.is_zero() && zeta_pow == 0 && power < 0 {
        return Err(Error::InvalidParameter("divergent product: 1/(1-1)".into()));
    }
    let den = q_pow
        .denom()
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter("q exponent denominator".into()))?;
    let b0 = q_pow
        .numer()
        .to_i64()
        .ok_or_else(|| Error::InvalidParameter("q exponent numerator".into()))?;
    if zeta_pow * den as i64 + b0 < 0 {
        return Err(Error::InvalidParameter(
            "factor breaks the zeta grading; expansion region not covered".into(),
        ));
    }
    let q_trunc = trunc * den as i64;
    let mut out = ZetaQSeries::one(den, q_trunc, cap);
    let mut b = b0;
    while b < q_trunc {
        if zeta_pow == 0 && b == 0 {
            if power > 0 {
                let width = out.rows[0].len();
                out.rows = vec![vec![BigInt::zero(); width]; q_trunc as usize];
                return Ok(out);
            }
        } else {
            out.mul_binomial(zeta_pow, b, power)?;
        }
        b += den as i64;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(s: &ExactQSeries) -> Vec<i64> {
        s.dense_from(0)
            .iter()
            .map(|c| c.to_integer().to_i64().unwrap())
            .collect()
    }

    #[test]
    fn difference_of_squares_and_geometric() {
        let a = ExactQSeries::from_int_coeffs(1, 0, 5, &[1, 1]);
        let b = ExactQSeries::from_int_coeffs(1, 0, 5, &[1, -1]);
        assert_eq!(ints(&a.mul(&b)), vec![1, 0, -1, 0, 0]);
        let g = ExactQSeries::from_int_coeffs(1, 0, 3, &[1, 1, 1]);
        let p = g.mul(&b);
        assert_eq!(p.trunc(), 3);
        assert_eq!(ints(&p), vec![1, 0, 0]);
    }

    #[test]
    fn inversion_examples() {
        let a = ExactQSeries::from_int_coeffs(1, 0, 6, &[1, -1]);
        assert_eq!(ints(&a.invert().unwrap()), vec![1; 6]);
        let m = ExactQSeries::monomial(24, 1, BigRational::one(), 100);
        let inv = m.invert().unwrap();
        assert_eq!(inv.min_exp(), -1);
        assert_eq!(inv.coeff(-1), BigRational::one());
        let euler = q_pochhammer(1, 1, 12).unwrap();
        let parts = euler.invert().unwrap();
        assert_eq!(ints(&parts), vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56]);
        assert!(ExactQSeries::zero(1, 4).invert().is_err());
    }

    #[test]
    fn pentagonal_and_eta_square() {
        let e = q_pochhammer(1, 1, 6).unwrap();
        assert_eq!(ints(&e), vec![1, -1, -1, 0, 0, 1]);
        // eta^2 against a brute-force product
        let mut brute = [0i64; 11];
        brute[0] = 1;
        for n in 1..11usize {
            for _ in 0..2 {
                for k in (n..11).rev() {
                    brute[k] -= brute[k - n];
                }
            }
        }
        let eta2 = eta_qseries(11).pow(2).unwrap();
        assert_eq!(eta2.min_exp(), 2);
        for (k, &c) in brute.iter().enumerate() {
            assert_eq!(eta2.coeff(2 + 24 * k as i64), rat_int(c));
        }
        assert_eq!(eta2.trunc(), 24 * 11 + 2);
    }

    #[test]
    fn exp_and_log_inverse() {
        let g = ExactQSeries::from_coeffs(1, 1, 12, vec![rat(1, 2), rat(-1, 3), rat(2, 7)]);
        let back = g.exp().unwrap().log().unwrap();
        for e in 1..12 {
            assert_eq!(back.coeff(e), g.coeff(e));
        }
    }

    #[test]
    fn pochhammer_bivariate_examples() {
        let inv = pochhammer_inf(1, &rat_int(0), -1, 4, 6).unwrap();
        let row0: Vec<i64> = (0..=6)
            .map(|k| inv.zeta_coeff(k).coeff(0).to_integer().to_i64().unwrap())
            .collect();
        assert_eq!(row0, vec![1; 7]);
        let neg = pochhammer_inf(-1, &rat_int(1), -1, 6, 4).unwrap();
        let (lo, hi) = neg.zeta_support().unwrap();
        assert!(lo <= -5 && hi == 0);
        assert!(pochhammer_inf(0, &rat_int(0), -1, 4, 4).is_err());
        let e = pochhammer_inf(0, &rat_int(1), 1, 6, 6).unwrap();
        assert_eq!(ints(&e.zeta_coeff(0)), vec![1, -1, -1, 0, 0, 1]);
    }

    #[test]
    fn bivariate_constant_term_is_binomial() {
        for ell in 1..5i64 {
            let smax = 5;
            let t = 3;
            let mut z = pochhammer_inf(0, &rat_int(1), 1, t, smax + t).unwrap();
            z = z
                .mul(&pochhammer_inf(1, &rat_int(0), -ell, t, smax + t).unwrap())
                .unwrap();
            z = z
                .mul(&pochhammer_inf(-1, &rat_int(1), -ell, t, smax + t).unwrap())
                .unwrap();
            for s in 0..=smax {
                let c = z.zeta_coeff(s).coeff(0);
                let mut b = BigInt::one();
                for i in 0..(ell - 1) {
                    b = b * BigInt::from(s + ell - 1 - i) / BigInt::from(i + 1);
                }
                assert_eq!(c, BigRational::from_integer(b));
            }
        }
    }

    fn small_series() -> impl Strategy<Value = ExactQSeries> {
        (prop::collection::vec((-5i64..6, 1i64..4), 1..6), 0i64..3).prop_map(|(cs, m)| {
            let coeffs = cs.into_iter().map(|(n, d)| rat(n, d)).collect();
            ExactQSeries::from_coeffs(1, m, m + 8, coeffs)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_series(), b in small_series(), c in small_series()) {
            let l = a.mul(&b).mul(&c);
            let r = a.mul(&b.mul(&c));
            prop_assert_eq!(l.trunc(), r.trunc());
            prop_assert_eq!(l, r);
            let d1 = a.mul(&b.add(&c));
            let d2 = a.mul(&b).add(&a.mul(&c));
            let t = d1.trunc().min(d2.trunc());
            prop_assert_eq!(d1.truncate(t), d2.truncate(t));
        }

        #[test]
        fn invert_twice_is_identity(a in small_series()) {
            prop_assume!(!a.is_zero());
            let back = a.invert().unwrap().invert().unwrap();
            prop_assert_eq!(back.trunc(), a.trunc());
            prop_assert_eq!(back, a.clone());
            let one = a.mul(&a.invert().unwrap());
            prop_assert_eq!(one.clone(), ExactQSeries::one(1, one.trunc()));
        }
    }
}
