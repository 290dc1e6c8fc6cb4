//! Seeded sampling of admissible verification points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slchar_core::decomposition::MultivarPoint;
use slchar_core::{PrecComplex, PrecFloat};

pub const DEFAULT_SEED: u64 = 20_240_601;

pub struct Sampler {
    rng: ChaCha8Rng,
    prec: u32,
}

impl Sampler {
    pub fn new(seed: u64, prec: u32) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            prec,
        }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    fn complex(&self, re: f64, im: f64) -> PrecComplex {
        PrecComplex::new(PrecFloat::from_f64(re, self.prec), PrecFloat::from_f64(im, self.prec))
    }

    /// `tau` with `|Re tau| <= 0.3` and `0.8 <= Im tau <= 1.3`.
    pub fn tau(&mut self) -> PrecComplex {
        let re = self.uniform(-0.3, 0.3);
        let im = self.uniform(0.8, 1.3);
        self.complex(re, im)
    }

    /// `z` with `|Re z| <= 0.3` and `Im z` of the given sign, `0.08 <= |Im z| <= 0.3`.
    pub fn off_axis_z(&mut self, sign: i32) -> PrecComplex {
        let re = self.uniform(-0.3, 0.3);
        let im = self.uniform(0.08, 0.3) * f64::from(sign.signum());
        self.complex(re, im)
    }

    /// Admissible point for the `l`-variable decomposition, by rejection:
    /// `0 < l Im z_j < Im tau`, distinct `w_j`, and a contour strip of width
    /// at least `0.15 Im tau`.
    pub fn multivar_point(&mut self, ell: u32) -> MultivarPoint {
        loop {
            let tau = self.tau();
            let v = tau.im.to_f64();
            let zs: Vec<PrecComplex> = (1..ell)
                .map(|_| {
                    let re = self.uniform(-0.5, 0.5);
                    let im = self.uniform(0.15, 0.85) * v / f64::from(ell);
                    self.complex(re, im)
                })
                .collect();
            let Ok(p) = MultivarPoint::new(zs, tau) else { continue };
            let (lo, hi) = p.contour_strip();
            if hi - lo < 0.15 * v || p.check_distinct().is_err() {
                continue;
            }
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_admissible() {
        let mut a = Sampler::new(7, 128);
        let mut b = Sampler::new(7, 128);
        for ell in 2..5 {
            let p = a.multivar_point(ell);
            let q = b.multivar_point(ell);
            assert_eq!(p.zs(), q.zs());
            assert_eq!(p.ell(), ell);
        }
        assert!(a.off_axis_z(-1).im.is_negative());
    }
}
