//! Local solutions of `psi'' = kappa^2 psi` on one constant-potential piece
//! and closed-form integrals of products of two such solutions.
//!
//! Two representations are used. For `|kappa| w >= 1` a sum of exponentials
//! whose anchors keep every term at most unit size inside the piece
//! (growing term anchored at the right edge, decaying term at the left).
//! For `|kappa| w < 1` the pair `cosh(kappa y)`, `sinh(kappa y)/kappa`
//! anchored at the left edge, which stays regular as `kappa -> 0`.

use num_complex::Complex64 as C64;

use crate::special::{sinhc, sinhc_excess};

/// Pieces with `|kappa| * width` below this use the entire-function basis.
pub(crate) const BASIS_SWITCH: f64 = 1.0;

/// `coef * exp(rate * (x - anchor))`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Wave {
    pub coef: C64,
    pub rate: C64,
    pub anchor: f64,
}

#[derive(Debug, Clone)]
pub(crate) enum Local {
    Waves(Vec<Wave>),
    /// `value * cosh(kappa (x - x0)) + slope * sinh(kappa (x - x0)) / kappa`
    /// with real `kappa_sq`.
    Entire { x0: f64, kappa: C64, value: C64, slope: C64 },
}

impl Local {
    pub fn eval(&self, x: f64) -> C64 {
        match self {
            Local::Waves(waves) => waves.iter().map(|w| w.coef * (w.rate * (x - w.anchor)).exp()).sum(),
            Local::Entire { x0, kappa, value, slope } => {
                let y = x - x0;
                let z = kappa * y;
                value * z.cosh() + slope * y * sinhc(z)
            }
        }
    }

    pub fn eval_deriv(&self, x: f64) -> C64 {
        match self {
            Local::Waves(waves) => waves.iter().map(|w| w.coef * w.rate * (w.rate * (x - w.anchor)).exp()).sum(),
            Local::Entire { x0, kappa, value, slope } => {
                let y = x - x0;
                let z = kappa * y;
                value * kappa * kappa * y * sinhc(z) + slope * z.cosh()
            }
        }
    }

    /// Complex conjugate of the function (not of its evaluation point).
    pub fn conj(&self) -> Local {
        match self {
            Local::Waves(waves) => Local::Waves(
                waves
                    .iter()
                    .map(|w| Wave { coef: w.coef.conj(), rate: w.rate.conj(), anchor: w.anchor })
                    .collect(),
            ),
            // cosh and sinh/kappa are real for real kappa^2
            Local::Entire { x0, kappa, value, slope } => {
                Local::Entire { x0: *x0, kappa: *kappa, value: value.conj(), slope: slope.conj() }
            }
        }
    }

    /// Build the representation for a piece `[xl, xr]` from the value and
    /// slope at both edges.
    #[cfg(test)]
    pub fn from_edges(xl: f64, xr: f64, kappa: C64, left: (C64, C64), right: (C64, C64)) -> Local {
        if kappa.norm() * (xr - xl) < BASIS_SWITCH {
            Local::Entire { x0: xl, kappa, value: left.0, slope: left.1 }
        } else {
            let grow = 0.5 * (right.0 + right.1 / kappa);
            let decay = 0.5 * (left.0 - left.1 / kappa);
            Local::Waves(vec![
                Wave { coef: grow, rate: kappa, anchor: xr },
                Wave { coef: decay, rate: -kappa, anchor: xl },
            ])
        }
    }
}

/// `int_a^b f(x) g(x) dx` for two local solutions on the same piece.
pub(crate) fn integrate_product(f: &Local, g: &Local, a: f64, b: f64) -> C64 {
    match (f, g) {
        (Local::Waves(fw), Local::Waves(gw)) => {
            let mut sum = C64::new(0.0, 0.0);
            for u in fw {
                for v in gw {
                    sum += u.coef * v.coef * integrate_wave_pair(u, v, a, b);
                }
            }
            sum
        }
        (
            Local::Entire { x0, kappa, value: v1, slope: p1 },
            Local::Entire { value: v2, slope: p2, .. },
        ) => {
            let anti = |y: f64| -> (C64, C64, C64) {
                let z = kappa * y;
                let s1 = sinhc(z);
                let cc = 0.5 * y * (1.0 + sinhc(2.0 * z));
                let cs = 0.5 * y * y * s1 * s1;
                let ss = 2.0 * y * y * y * sinhc_excess(2.0 * z);
                (cc, cs, ss)
            };
            let (cc_b, cs_b, ss_b) = anti(b - x0);
            let (cc_a, cs_a, ss_a) = anti(a - x0);
            v1 * v2 * (cc_b - cc_a) + (v1 * p2 + p1 * v2) * (cs_b - cs_a) + p1 * p2 * (ss_b - ss_a)
        }
        _ => unreachable!("both factors on one piece share a basis"),
    }
}

/// `int_a^b exp(u.rate (x - u.anchor)) exp(v.rate (x - v.anchor)) dx`
/// written around the midpoint so no factor overflows on its own.
fn integrate_wave_pair(u: &Wave, v: &Wave, a: f64, b: f64) -> C64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let rate = u.rate + v.rate;
    let centre = (u.rate * (mid - u.anchor) + v.rate * (mid - v.anchor)).exp();
    centre * (2.0 * half) * sinhc(rate * half)
}
