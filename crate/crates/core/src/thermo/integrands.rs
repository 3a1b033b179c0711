//! Pointwise integrands of the cycle-averaged power and heat currents.
//!
//! Conventions: `J_nu > 0` is heat flowing from bath `nu` into the oscillator,
//! `P < 0` is work delivered by the engine, and `P + J1 + J2 = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::floquet::{ColumnTriple, FloquetError, KernelSet};
use crate::spectral::BathConfig;

pub(crate) const P_A: usize = 0;
pub(crate) const P_B1: usize = 1;
pub(crate) const P_B2: usize = 2;
pub(crate) const J2: usize = 3;
pub(crate) const J2_A: usize = 4;
pub(crate) const J1_GENERAL: usize = 5;
pub(crate) const P_GENERAL: usize = 6;
pub(crate) const P_C: usize = 7;
pub(crate) const N_COMPONENTS: usize = 8;

pub(crate) struct NodeIntegrand<'a> {
    pub kernels: &'a KernelSet,
    pub bath1: &'a BathConfig,
    pub bath2: &'a BathConfig,
    pub order: usize,
    pub cutoff: f64,
}

impl NodeIntegrand<'_> {
    pub fn eval(&self, w: f64) -> Result<[f64; N_COMPONENTS], FloquetError> {
        let om = self.kernels.drive();
        let m = self.order as i64;
        let g = ColumnTriple::solve(self.kernels, w, self.order)?;

        // J_nu(w + k Omega) for k in [-kmax, kmax]
        let kmax = 2 * m + 3;
        let shifted = |b: &BathConfig| -> Vec<f64> {
            (-kmax..=kmax).map(|k| b.spectral.j(w + k as f64 * om)).collect()
        };
        let j1s = shifted(self.bath1);
        let j2s = shifted(self.bath2);
        let j1 = |k: i64| j1s[(k + kmax) as usize];
        let j2 = |k: i64| j2s[(k + kmax) as usize];

        let jc1 = self.bath1.j_coth(w);
        let jc2 = self.bath2.j_coth(w);
        let mut out = [0.0; N_COMPONENTS];

        out[P_A] = -om / (4.0 * PI) * jc1 * g.plus(0, -1).im;

        let mut s = 0.0;
        for mu in (-m - 1..=m).map(|k| 2 * k) {
            s += j1(-mu) * (g.minus(mu, 1) + g.minus(mu + 2, -1)).norm_sqr();
        }
        out[P_B1] = om / (16.0 * PI) * jc1 * s;

        let mut s = 0.0;
        let mut sb = 0.0;
        for mu in (-m..=m).map(|k| 2 * k) {
            let n2 = g.plus(mu, 0).norm_sqr();
            s += n2 * (j1(mu + 1) - j1(mu - 1));
            let x = w + mu as f64 * om;
            sb += j2(mu) * x * n2;
        }
        out[P_B2] = om / (8.0 * PI) * jc2 * s;

        let a = w * jc2 * g.plus(0, 0).im;
        let mut sc = 0.0;
        for mu in (-m - 1..=m).map(|k| 2 * k + 1) {
            let x = w - mu as f64 * om;
            sc += x * j2(-mu) * (g.minus(mu - 1, 1) + g.minus(mu + 1, -1)).norm_sqr();
        }
        out[J2] = (a - jc2 * sb - 0.25 * jc1 * sc) / (2.0 * PI);
        out[J2_A] = if w.abs() < self.cutoff { a / (2.0 * PI) } else { 0.0 };

        // Unreduced harmonic sums for the modulated bath (coefficients
        // g_{+-1,1} = 1/2, g_{0,2} = 1), used as an independent route to J1
        // and P.
        let second: [(i64, i64, f64, f64); 5] = [
            (1, 1, 0.25, jc1),
            (1, -1, 0.25, jc1),
            (-1, 1, 0.25, jc1),
            (-1, -1, 0.25, jc1),
            (0, 0, 1.0, jc2),
        ];
        let mut j1g = 0.0;
        let mut pg = 0.0;
        for n1 in [1i64, -1] {
            for n2 in [1i64, -1] {
                let first = g.plus(-(n1 + n2), n2).im;
                j1g += 0.25 * w * jc1 * first;
                pg -= 0.25 * om * n1 as f64 * jc1 * first;
                for &(n3, n4, w34, jc) in &second {
                    let ntot = n1 + n2 + n3 + n4;
                    let mut sj = 0.0;
                    let mut sp = 0.0;
                    for mu in (-m..=m).map(|k| 2 * k) {
                        let idx = -(ntot + mu);
                        if idx % 2 != 0 || idx.abs() > 2 * m {
                            continue;
                        }
                        let prod = (g.minus(mu, n4) * g.plus(idx, n3)).re;
                        let k = n2 + n4 + mu;
                        let x = w - k as f64 * om;
                        let jx = j1(-k);
                        sj += x * jx * prod;
                        sp += jx * prod;
                    }
                    j1g -= 0.25 * w34 * jc * sj;
                    pg += om * n1 as f64 * 0.25 * w34 * jc * sp;
                }
            }
        }
        // Reactive part of the bath-1 force, -w Im g1(w), acting on the
        // modulated coordinate h = g1 x. It drops out of the heat currents but
        // not out of the power once x(t) is non-stationary.
        let i = Complex64::i();
        let mut pc = 0.0;
        for (nu1, jc) in [(1, jc1), (2, jc2)] {
            let x = |j: i64| -> Complex64 {
                if nu1 == 1 {
                    0.5 * (g.plus(j - 1, 1) + g.plus(j + 1, -1))
                } else {
                    g.plus(j, 0)
                }
            };
            for k in -2 * m - 3..=2 * m + 3 {
                let (lo, hi) = (x(k - 1), x(k + 1));
                let h = 0.5 * (lo + hi);
                let d = 0.5 * i * om * (hi - lo);
                let wk = w + k as f64 * om;
                let im = self.kernels.bath1().gamma_tilde(wk).im;
                if im != 0.0 {
                    pc += jc * wk * im * (d * h.conj()).re;
                }
            }
        }
        out[P_C] = pc / (2.0 * PI);
        out[J1_GENERAL] = j1g / (2.0 * PI);
        out[P_GENERAL] = pg / (2.0 * PI);
        Ok(out)
    }
}
