//! Bernoulli and Euler numbers and polynomials, computed from their
//! generating functions by exact series arithmetic.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::series::{rat, rat_int, ExactQSeries};

/// Dense polynomial in `x` with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
        Self::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let mut out = alloc::vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Generalised binomial coefficient `x (x-1) .. (x-k+1) / k!` for rational `x`.
pub fn binomial_rational(x: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (x - rat_int(i as i64)) / rat_int(i as i64 + 1);
    }
    acc
}

/// `e^(x w)` truncated below `w^len`.
fn exp_linear(x: &BigRational, len: usize) -> ExactQSeries {
    let mut c = Vec::with_capacity(len);
    let mut term = BigRational::one();
    for k in 0..len {
        c.push(term.clone());
        term = term * x / rat_int(k as i64 + 1);
    }
    ExactQSeries::from_coeffs(1, 0, len as i64, c)
}

/// `(e^w - 1)/w` truncated below `w^len`.
fn expm1_over_w(len: usize) -> ExactQSeries {
    let c = (0..len)
        .map(|k| BigRational::new(BigInt::one(), factorial(k as u64 + 1)))
        .collect();
    ExactQSeries::from_coeffs(1, 0, len as i64, c)
}

/// `w/(e^w - 1)` truncated below `w^len`.
fn bernoulli_gf(len: usize) -> ExactQSeries {
    expm1_over_w(len).invert().expect("leading coefficient is 1")
}

/// Bernoulli numbers `B_0 .. B_n`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let g = bernoulli_gf(n + 1);
    (0..=n)
        .map(|k| g.coeff(k as i64) * BigRational::from_integer(factorial(k as u64)))
        .collect()
}

pub fn bernoulli_number(k: usize) -> BigRational {
    bernoulli_numbers(k).pop().expect("nonempty")
}

/// Coefficient of `w^n` in `(w/(e^w-1))^r e^(x w)`, times `n!`.
pub fn higher_bernoulli_poly(n: usize, r: i64, x: &BigRational) -> BigRational {
    let len = n + 1;
    let g = bernoulli_gf(len).pow(r).expect("invertible");
    let s = g.mul(&exp_linear(x, len));
    s.coeff(n as i64) * BigRational::from_integer(factorial(n as u64))
}

pub fn bernoulli_poly(n: usize, x: &BigRational) -> BigRational {
    higher_bernoulli_poly(n, 1, x)
}

/// `B_n^(r)(x)` as a polynomial in `x`.
pub fn higher_bernoulli_polynomial(n: usize, r: i64) -> RationalPoly {
    let g = bernoulli_gf(n + 1).pow(r).expect("invertible");
    let coeffs = (0..=n)
        .map(|k| {
            // C(n,k) B^(r)_{n-k} with B^(r)_m = m! [w^m] g
            let b = g.coeff((n - k) as i64) * BigRational::from_integer(factorial((n - k) as u64));
            b * BigRational::from_integer(binomial(n as u64, k as u64))
        })
        .collect();
    RationalPoly::new(coeffs)
}

/// `E_n(x)` from `2 e^(x w)/(e^w + 1)`.
pub fn euler_poly(n: usize, x: &BigRational) -> BigRational {
    let len = n + 1;
    let half_plus: Vec<BigRational> = (0..len)
        .map(|k| {
            let inv = BigRational::new(BigInt::one(), factorial(k as u64));
            if k == 0 {
                BigRational::one()
            } else {
                inv / rat_int(2)
            }
        })
        .collect();
    let den = ExactQSeries::from_coeffs(1, 0, len as i64, half_plus);
    let s = den.invert().expect("leading coefficient is 1").mul(&exp_linear(x, len));
    s.coeff(n as i64) * BigRational::from_integer(factorial(n as u64))
}

/// Euler numbers `E_n = 2^n E_n(1/2)`.
///
/// The value is also computed from the recurrence for the coefficients of
/// `sech w`, and the two must agree.
pub fn euler_number(n: usize) -> BigRational {
    let via_poly = euler_poly(n, &rat(1, 2)) * BigRational::from_integer(BigInt::one() << n);
    let via_sech = euler_number_sech(n);
    assert_eq!(via_poly, via_sech, "Euler number routes disagree at n = {n}");
    via_poly
}

fn euler_number_sech(n: usize) -> BigRational {
    let mut e: Vec<BigInt> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            e.push(BigInt::one());
        } else if m % 2 == 1 {
            e.push(BigInt::zero());
        } else {
            let s: BigInt = (0..m).step_by(2).map(|k| binomial(m as u64, k as u64) * &e[k]).sum();
            e.push(-s);
        }
    }
    BigRational::from_integer(e[n].clone())
}

/// `E_n(m x) = -(2/(n+1)) m^n sum_{k<m} (-1)^k B_{n+1}(x + k/m)` for even `m`.
pub fn check_euler_bernoulli_identity(n: usize, m: u64, x: &BigRational) -> bool {
    assert!(m.is_multiple_of(2) && m > 0, "m must be a positive even integer");
    let mi = m as i64;
    let lhs = euler_poly(n, &(x * rat_int(mi)));
    let poly = higher_bernoulli_polynomial(n + 1, 1);
    let mut sum = BigRational::zero();
    for k in 0..mi {
        let v = poly.eval(&(x + rat(k, mi)));
        if k % 2 == 0 {
            sum += v;
        } else {
            sum -= v;
        }
    }
    let mpow = BigRational::from_integer(num_traits::pow(BigInt::from(m), n));
    let rhs = -(rat(2, n as i64 + 1)) * mpow * sum;
    lhs == rhs
}

/// `S(w) = sum_{k>=1} B_{2k} w^(2k) / (2k (2k)!)`, exact below `w^trunc`.
pub fn s_coefficients(trunc: usize) -> ExactQSeries {
    let b = bernoulli_numbers(trunc);
    let c = (0..trunc)
        .map(|n| {
            if n >= 2 && n % 2 == 0 {
                &b[n] / (BigRational::from_integer(factorial(n as u64)) * rat_int(n as i64))
            } else {
                BigRational::zero()
            }
        })
        .collect();
    ExactQSeries::from_coeffs(1, 0, trunc as i64, c)
}

/// `Log((e^w - 1)/w) - w/2` as a series, exact below `w^trunc`.
pub fn s_series_from_log(trunc: usize) -> ExactQSeries {
    let l = expm1_over_w(trunc).log().expect("leading coefficient is 1");
    l.sub(&ExactQSeries::monomial(1, 1, rat(1, 2), trunc as i64))
}

/// Whether both forms of `S(w)` agree below `w^trunc`.
pub fn verify_s_identity(trunc: usize) -> bool {
    assert!(trunc >= 2, "need at least two coefficients");
    s_coefficients(trunc) == s_series_from_log(trunc)
}
