use crate::error::{Error, Result};

/// Residues are plain `u64` in `0..p`; the context carries all structure.
///
/// Inverses follow the convention `0^{-1} = 0`. For moduli below 2^20 a full
/// inverse table is precomputed, since search workloads query inverses densely;
/// larger moduli fall back to the extended Euclidean algorithm per query.
#[derive(Debug, Clone)]
pub struct PrimeFieldCtx {
    p: u64,
    inv_table: Option<Vec<u32>>,
}

const INV_TABLE_LIMIT: u64 = 1 << 20;

impl PrimeFieldCtx {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let inv_table = (p < INV_TABLE_LIMIT).then(|| build_inverse_table(p));
        Ok(Self { p, inv_table })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.p);
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Multiplicative inverse with `inverse(0) = 0`.
    pub fn inverse(&self, x: u64) -> u64 {
        debug_assert!(x < self.p);
        if x == 0 {
            return 0;
        }
        match &self.inv_table {
            Some(t) => t[x as usize] as u64,
            None => inverse_euclid(x, self.p),
        }
    }

    /// Checked variant used by callers that take raw residue input.
    pub fn checked_inverse(&self, x: u64) -> Result<u64> {
        if x >= self.p {
            return Err(Error::ElementOutOfRange {
                element: x,
                order: self.p,
            });
        }
        Ok(self.inverse(x))
    }
}

fn build_inverse_table(p: u64) -> Vec<u32> {
    // inv[i] = -(p/i) * inv[p mod i] mod p, the standard linear-time recurrence.
    let mut t = vec![0u32; p as usize];
    if p > 1 {
        t[1] = 1;
    }
    for i in 2..p {
        let v = (p - (p / i) * t[(p % i) as usize] as u64 % p) % p;
        t[i as usize] = v as u32;
    }
    t
}

fn inverse_euclid(x: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, x as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Primes in the inclusive range `[lo, hi]`.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}
