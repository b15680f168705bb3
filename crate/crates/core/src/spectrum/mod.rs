//! Fourier analysis of indicator functions over F_p.
//!
//! Convention: f_hat(r) = (1/p) * sum_{x} f(x) e(-2 pi i r x / p), so the
//! coefficient at 0 is the density alpha.

mod diagnostics;
mod kloosterman;

pub use diagnostics::{
    build_report, check_cor33_full_sum, check_doubling_bounds, check_parseval,
    check_self_inverse_bound, check_self_inverse_bound_with, check_sum_of_cubes,
    check_sum_of_cubes_with, check_sumfree_alpha_bounds, check_tail_bound, AlphaBounds,
    DiagnosticsReport, DoublingBounds, InequalityRecord, ReportOptions, SelfInverseBound,
    TailBound,
};
pub use kloosterman::{kloosterman_char2, kloosterman_prime, weil_bound};

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::subsets::FieldSubset;

/// Field size up to which coefficients are computed by direct summation; a
/// length-p fast transform is used above. Both paths agree to 1e-10 on
/// overlap (tested).
const DIRECT_LIMIT: u64 = 1 << 14;

/// Absolute tolerance for float identities at modulus p, scaling with the
/// length of the cancellation sums involved.
pub fn float_tolerance(p: u64) -> f64 {
    1e-12 * p as f64
}

/// All Fourier coefficients of 1_A, the descending half-spectrum
/// (r_i, delta_i) over r in 1..=(p-1)/2, and the argument theta_1 of the
/// coefficient at r_1.
#[derive(Debug, Clone)]
pub struct Spectrum {
    p: u64,
    alpha: f64,
    coefficients: Vec<Complex64>,
    ordered: Vec<(u64, f64)>,
    theta1: f64,
}

impl Spectrum {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn coefficient(&self, r: u64) -> Complex64 {
        self.coefficients[(r % self.p) as usize]
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// (r_i, delta_i) pairs, delta descending, ties broken by smaller r.
    pub fn ordered(&self) -> &[(u64, f64)] {
        &self.ordered
    }

    /// delta_i for 1-based i.
    pub fn delta(&self, i: usize) -> f64 {
        self.ordered[i - 1].1
    }

    /// r_i for 1-based i.
    pub fn r(&self, i: usize) -> u64 {
        self.ordered[i - 1].0
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }
}

/// Single Fourier coefficient of 1_A at r, by direct summation.
pub fn fourier_coefficient(set: &FieldSubset, r: u64) -> Result<Complex64> {
    let p = set.field().as_prime()?.p();
    if r >= p {
        return Err(Error::ElementOutOfRange {
            element: r,
            order: p,
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for a in set.elements() {
        let k = (r as u128 * a as u128 % p as u128) as u64;
        let angle = -2.0 * std::f64::consts::PI * k as f64 / p as f64;
        acc += Complex64::new(angle.cos(), angle.sin());
    }
    Ok(acc / p as f64)
}

/// Full spectrum of a nonempty subset of a prime field.
pub fn full_spectrum(set: &FieldSubset) -> Result<Spectrum> {
    let p = set.field().as_prime()?.p();
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let coefficients = if p <= DIRECT_LIMIT {
        direct_transform(set, p)
    } else {
        fast_transform(set, p)
    };
    let alpha = set.alpha();
    let mut ordered: Vec<(u64, f64)> = (1..=(p - 1) / 2)
        .map(|r| (r, coefficients[r as usize].norm() / alpha))
        .collect();
    ordered.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let c1 = coefficients[ordered[0].0 as usize];
    let mut theta1 = c1.im.atan2(c1.re);
    if theta1 < 0.0 {
        theta1 += 2.0 * std::f64::consts::PI;
    }
    Ok(Spectrum {
        p,
        alpha,
        coefficients,
        ordered,
        theta1,
    })
}

fn direct_transform(set: &FieldSubset, p: u64) -> Vec<Complex64> {
    // e(-2 pi i k / p) table; each coefficient is a sum of |A| lookups.
    let roots: Vec<Complex64> = (0..p)
        .map(|k| {
            let angle = -2.0 * std::f64::consts::PI * k as f64 / p as f64;
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect();
    let elems = set.elements();
    let mut out = Vec::with_capacity(p as usize);
    for r in 0..p {
        let mut acc = Complex64::new(0.0, 0.0);
        for &a in &elems {
            acc += roots[(r as u128 * a as u128 % p as u128) as usize];
        }
        out.push(acc / p as f64);
    }
    out
}

fn fast_transform(set: &FieldSubset, p: u64) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); p as usize];
    for a in set.elements() {
        buf[a as usize].re = 1.0;
    }
    FftPlanner::new().plan_fft_forward(p as usize).process(&mut buf);
    for v in buf.iter_mut() {
        *v /= p as f64;
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use std::sync::Arc;

    fn set(p: u64, els: &[u64]) -> FieldSubset {
        FieldSubset::from_elements(Arc::new(FieldCtx::prime(p).unwrap()), els).unwrap()
    }

    #[test]
    fn coefficient_at_zero_is_alpha() {
        let a = set(13, &[5, 8]);
        let c = fourier_coefficient(&a, 0).unwrap();
        assert!((c.re - a.alpha()).abs() < 1e-14 && c.im.abs() < 1e-14);
    }

    #[test]
    fn whole_field_has_null_spectrum() {
        let all: Vec<u64> = (0..11).collect();
        let a = set(11, &all);
        for r in 1..11 {
            assert!(fourier_coefficient(&a, r).unwrap().norm() < 1e-14);
        }
    }

    #[test]
    fn hand_computed_coefficient() {
        // A = {1,4} in F_5 at r=1: (2/5) cos(2 pi / 5)
        let c = fourier_coefficient(&set(5, &[1, 4]), 1).unwrap();
        assert!((c.re - 0.123606797749979).abs() < 1e-14);
        assert!(c.im.abs() < 1e-14);
    }

    #[test]
    fn ordering_and_theta_for_reference_set() {
        let s = full_spectrum(&set(5, &[1, 4])).unwrap();
        assert_eq!(s.r(1), 2);
        assert!((s.delta(1) - 0.809016994374947).abs() < 1e-12);
        assert!((s.delta(2) - 0.309016994374947).abs() < 1e-12);
        assert!((s.theta1() - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn conjugate_symmetry() {
        let s = full_spectrum(&set(13, &[1, 2, 5, 8, 11])).unwrap();
        for r in 1..13u64 {
            let c = s.coefficient(r);
            let cm = s.coefficient(13 - r);
            assert!((c - cm.conj()).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_binary_and_empty() {
        let b = FieldSubset::from_elements(Arc::new(FieldCtx::binary(3).unwrap()), &[1]).unwrap();
        assert!(matches!(
            full_spectrum(&b),
            Err(Error::PrimeFieldRequired)
        ));
        let e = FieldSubset::empty(Arc::new(FieldCtx::prime(5).unwrap()));
        assert!(matches!(full_spectrum(&e), Err(Error::EmptySet)));
    }

    #[test]
    fn direct_and_fast_paths_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in [101u64, 419, 2003] {
            let field = Arc::new(FieldCtx::prime(p).unwrap());
            let s = FieldSubset::from_membership(field, |_| rng.gen_bool(0.3));
            let d = direct_transform(&s, p);
            let f = fast_transform(&s, p);
            for r in 0..p as usize {
                assert!((d[r] - f[r]).norm() < 1e-10, "p={p} r={r}");
            }
        }
    }
}
