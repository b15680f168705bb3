//! Kloosterman sums in both characteristics, with their square-root bounds
//! asserted on every evaluation.

use crate::error::{Error, Result};
use crate::field::{BinaryFieldCtx, PrimeFieldCtx};

/// 2 sqrt(|F|), the bound satisfied by every Kloosterman sum here.
pub fn weil_bound(order: u64) -> f64 {
    2.0 * (order as f64).sqrt()
}

/// K(a, b) = sum_{x in F_p^*} e(2 pi i (a x + b x^{-1}) / p). The sum is real
/// (x and -x pair into conjugates) and |K| <= 2 sqrt p.
pub fn kloosterman_prime(ctx: &PrimeFieldCtx, a: i64, b: i64) -> Result<f64> {
    let p = ctx.p();
    let ar = a.rem_euclid(p as i64) as u64;
    let br = b.rem_euclid(p as i64) as u64;
    if ar == 0 || br == 0 {
        return Err(Error::InvalidParameter(format!(
            "kloosterman sum needs a*b nonzero mod {p}"
        )));
    }
    let roots: Vec<(f64, f64)> = (0..p)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / p as f64;
            (angle.cos(), angle.sin())
        })
        .collect();
    let mut re = 0.0;
    let mut im = 0.0;
    for x in 1..p {
        let k = (ar as u128 * x as u128 + br as u128 * ctx.inverse(x) as u128) % p as u128;
        let (c, s) = roots[k as usize];
        re += c;
        im += s;
    }
    debug_assert!(im.abs() < 1e-9 * p as f64);
    assert!(
        re.abs() <= weil_bound(p) + 1e-9 * p as f64,
        "square-root cancellation bound violated: |{re}| > 2 sqrt {p}"
    );
    Ok(re)
}

/// sum_{x in F^*} (-1)^{Tr(x + a x^{-1})} over GF(2^n), exact integer;
/// |K| <= 2 sqrt q, checked exactly as K^2 <= 4q.
pub fn kloosterman_char2(ctx: &BinaryFieldCtx, a: u64) -> Result<i64> {
    let q = ctx.order();
    if a == 0 || a >= q {
        return Err(Error::InvalidParameter(format!(
            "kloosterman sum needs a nonzero element of GF(2^{})",
            ctx.n()
        )));
    }
    let mut sum = 0i64;
    for x in 1..q {
        let t = ctx.trace(ctx.add(x, ctx.mul(a, ctx.inverse(x))));
        sum += if t == 0 { 1 } else { -1 };
    }
    assert!(
        sum * sum <= 4 * q as i64,
        "square-root cancellation bound violated: {sum}^2 > 4 * {q}"
    );
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_reference_values() {
        let f5 = PrimeFieldCtx::new(5).unwrap();
        let k = kloosterman_prime(&f5, 1, 1).unwrap();
        assert!((k - 0.381966011250105).abs() < 1e-12);
        let f7 = PrimeFieldCtx::new(7).unwrap();
        let k7 = kloosterman_prime(&f7, 1, 1).unwrap();
        assert!((k7 - 2.048917339522305).abs() < 1e-12);
        assert!(k7.abs() <= weil_bound(7));
    }

    #[test]
    fn prime_rejects_zero_products() {
        let f5 = PrimeFieldCtx::new(5).unwrap();
        assert!(kloosterman_prime(&f5, 0, 1).is_err());
        assert!(kloosterman_prime(&f5, 5, 1).is_err());
        assert!(kloosterman_prime(&f5, 1, -5).is_err());
        // negative representatives are reduced
        assert!(kloosterman_prime(&f5, -4, 1).is_ok());
    }

    #[test]
    fn prime_exhaustive_bound_small() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let ctx = PrimeFieldCtx::new(p).unwrap();
            for a in 1..p {
                for b in 1..p {
                    let k = kloosterman_prime(&ctx, a as i64, b as i64).unwrap();
                    assert!(k.abs() <= weil_bound(p) + 1e-9, "p={p} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn char2_reference_values() {
        let g4 = BinaryFieldCtx::new(2).unwrap();
        assert_eq!(kloosterman_char2(&g4, 1).unwrap(), 3);
        let g8 = BinaryFieldCtx::new(3).unwrap();
        let k = kloosterman_char2(&g8, 1).unwrap();
        assert!((k * k) as f64 <= 4.0 * 8.0);
        assert!(kloosterman_char2(&g4, 0).is_err());
        assert!(kloosterman_char2(&g4, 4).is_err());
    }

    #[test]
    fn char2_exhaustive_bound_small() {
        for n in 2..=8u32 {
            let ctx = BinaryFieldCtx::new(n).unwrap();
            for a in 1..ctx.order() {
                let k = kloosterman_char2(&ctx, a).unwrap();
                assert!(k * k <= 4 * ctx.order() as i64, "n={n} a={a}");
            }
        }
    }
}
