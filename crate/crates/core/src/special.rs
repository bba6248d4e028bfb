//! Entire functions of `kappa` used by the segment propagators. All of them
//! are even in `kappa`, so the branch of the square root never matters.

use num_complex::Complex64 as C64;

/// `sinh(z) / z`.
pub(crate) fn sinhc(z: C64) -> C64 {
    if z.norm() < 1e-3 {
        let z2 = z * z;
        C64::new(1.0, 0.0) + z2 / 6.0 * (C64::new(1.0, 0.0) + z2 / 20.0)
    } else {
        z.sinh() / z
    }
}

/// `(sinhc(z) - 1) / z^2 = sum_n z^(2n) / (2n + 3)!`.
pub(crate) fn sinhc_excess(z: C64) -> C64 {
    if z.norm() < 2.5 {
        let z2 = z * z;
        let mut term = C64::new(1.0 / 6.0, 0.0);
        let mut sum = term;
        for n in 1..30 {
            let a = (2 * n + 2) as f64;
            term = term * z2 / (a * (a + 1.0));
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (sinhc(z) - 1.0) / (z * z)
    }
}

/// Principal square root of a real `kappa^2`; imaginary above the barrier.
pub(crate) fn kappa_from_sq(q: f64) -> C64 {
    if q >= 0.0 {
        C64::new(q.sqrt(), 0.0)
    } else {
        C64::new(0.0, (-q).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinhc_matches_direct_evaluation_away_from_origin() {
        for z in [C64::new(0.5, 0.0), C64::new(0.0, 2.0), C64::new(3.0, 0.0), C64::new(2e-3, 0.0)] {
            let direct = z.sinh() / z;
            assert!((sinhc(z) - direct).norm() < 1e-14 * direct.norm());
        }
        assert_eq!(sinhc(C64::new(0.0, 0.0)), C64::new(1.0, 0.0));
    }

    #[test]
    fn sinhc_excess_series_and_closed_form_meet() {
        for z in [C64::new(2.49, 0.0), C64::new(0.0, 2.49), C64::new(2.51, 0.0)] {
            let direct = (z.sinh() / z - 1.0) / (z * z);
            assert!((sinhc_excess(z) - direct).norm() < 1e-13 * direct.norm(), "{z}");
        }
        assert!((sinhc_excess(C64::new(1e-6, 0.0)).re - 1.0 / 6.0).abs() < 1e-13);
    }
}
