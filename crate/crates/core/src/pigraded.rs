//! Exact numbers of the form `rational * pi^k`, and powers of `i`.

use alloc::collections::BTreeMap;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::complex::PrecComplex;
use crate::error::{Error, Result};
use crate::float::PrecFloat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiGradedRational {
    pub rational: BigRational,
    pub pi_pow: i32,
}

impl PiGradedRational {
    pub fn new(rational: BigRational, pi_pow: i32) -> Self {
        let pi_pow = if rational.is_zero() { 0 } else { pi_pow };
        PiGradedRational { rational, pi_pow }
    }

    pub fn rational(r: BigRational) -> Self {
        Self::new(r, 0)
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), 0)
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.rational * &other.rational, self.pi_pow + other.pi_pow)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::InvalidParameter("division by zero".into()));
        }
        Ok(Self::new(&self.rational / &other.rational, self.pi_pow - other.pi_pow))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(&self.rational * r, self.pi_pow)
    }

    pub fn powi(&self, n: i32) -> Self {
        let r = if n >= 0 {
            num_traits::pow(self.rational.clone(), n as usize)
        } else {
            num_traits::pow(self.rational.recip(), n.unsigned_abs() as usize)
        };
        Self::new(r, self.pi_pow * n)
    }

    /// Sum of two values of the same pi-grade. Mixing grades is an error
    /// because the result would not be a pi-graded rational.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_pow != other.pi_pow {
            return Err(Error::InvalidParameter(
                "cannot add pi-graded rationals of different grade".into(),
            ));
        }
        Ok(Self::new(&self.rational + &other.rational, self.pi_pow))
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.rational.clone(), self.pi_pow)
    }

    pub fn to_float(&self, prec: u32) -> PrecFloat {
        let r = PrecFloat::from_rational(&self.rational, prec + 8);
        let p = PrecFloat::pi(prec + 8).powi(i64::from(self.pi_pow));
        (&r * &p).with_prec(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(64).to_f64()
    }
}

impl fmt::Display for PiGradedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_pow {
            0 => write!(f, "{}", self.rational),
            1 => write!(f, "{}*pi", self.rational),
            k => write!(f, "{}*pi^{}", self.rational, k),
        }
    }
}

/// `i^k` with `k` taken modulo 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IPower(u8);

impl IPower {
    pub const ONE: IPower = IPower(0);
    pub const I: IPower = IPower(1);
    pub const MINUS_ONE: IPower = IPower(2);
    pub const MINUS_I: IPower = IPower(3);

    pub fn new(k: i64) -> Self {
        IPower(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn pow(self, n: i64) -> Self {
        IPower::new(i64::from(self.0) * n)
    }

    pub fn inv(self) -> Self {
        IPower((4 - self.0) % 4)
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// `+1` or `-1` when real.
    pub fn real_sign(self) -> Option<i64> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn apply(self, z: &PrecComplex) -> PrecComplex {
        z.mul_i_pow(i64::from(self.0))
    }

    pub fn to_complex(self, prec: u32) -> PrecComplex {
        self.apply(&PrecComplex::one(prec))
    }

    /// Apply to a rational, failing when the phase is not real.
    pub fn apply_rational(self, r: &BigRational) -> Result<BigRational> {
        match self.real_sign() {
            Some(s) => Ok(r * BigRational::from_integer(BigInt::from(s))),
            None => Err(Error::InvalidParameter("phase is not real".into())),
        }
    }
}

impl core::ops::Mul for IPower {
    type Output = IPower;

    fn mul(self, other: Self) -> Self {
        IPower((self.0 + other.0) % 4)
    }
}

impl fmt::Display for IPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["1", "i", "-1", "-i"][self.0 as usize])
    }
}

/// Finite sum `sum_k c_k pi^k` of pi-graded rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PiPoly {
    terms: BTreeMap<i32, BigRational>,
}

impl PiPoly {
    pub fn zero() -> Self {
        PiPoly { terms: BTreeMap::new() }
    }

    pub fn from_graded(g: &PiGradedRational) -> Self {
        let mut p = Self::zero();
        p.add_term(g.pi_pow, g.rational.clone());
        p
    }

    pub fn rational(r: BigRational) -> Self {
        Self::from_graded(&PiGradedRational::rational(r))
    }

    pub fn add_term(&mut self, pi_pow: i32, c: BigRational) {
        let e = self.terms.entry(pi_pow).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&pi_pow);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, g: &PiGradedRational) -> Self {
        self.mul(&Self::from_graded(g))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single graded term, if there is at most one.
    pub fn as_graded(&self) -> Option<PiGradedRational> {
        match self.terms.len() {
            0 => Some(PiGradedRational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .map(|(k, c)| PiGradedRational::new(c.clone(), *k)),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = PiGradedRational> + '_ {
        self.terms.iter().map(|(k, c)| PiGradedRational::new(c.clone(), *k))
    }

    pub fn to_float(&self, prec: u32) -> PrecFloat {
        let mut acc = PrecFloat::zero(prec);
        for t in self.terms() {
            acc = &acc + &t.to_float(prec);
        }
        acc
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for t in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn grades_combine_and_mix_fails() {
        let a = PiGradedRational::new(rat(1, 2), -1);
        let b = PiGradedRational::new(rat(1, 3), -1);
        assert_eq!(a.add(&b).unwrap(), PiGradedRational::new(rat(5, 6), -1));
        assert!(a.add(&PiGradedRational::one()).is_err());
        assert_eq!(a.mul(&b).pi_pow, -2);
        assert!((a.to_f64() - 0.5 / core::f64::consts::PI).abs() < 1e-15);
        assert_eq!(PiGradedRational::new(rat(0, 1), 3), PiGradedRational::zero());
    }

    #[test]
    fn phases() {
        assert_eq!(IPower::I.pow(3), IPower::MINUS_I);
        assert_eq!(IPower::new(-1), IPower::MINUS_I);
        assert_eq!(IPower::MINUS_I * IPower::I, IPower::ONE);
        assert_eq!(IPower::new(6).real_sign(), Some(-1));
        let z = IPower::I.to_complex(64);
        assert_eq!(z.to_f64_pair(), (0.0, 1.0));
    }
}
