use crate::error::{Error, Result};

/// Lexicographically smallest irreducible polynomial of each degree 1..=24,
/// encoded as a bitmask (bit i = coefficient of x^i). Fixed so that constructed
/// sets are reproducible across runs; every entry is re-validated on use.
pub const DEFAULT_MODULI: [u64; 25] = [
    0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b, 0x20009, 0x40009, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021, 0x100001b,
];

pub const MAX_DEGREE: u32 = 24;

/// GF(2^n) with elements encoded as bitmasks of polynomials of degree < n.
///
/// The trace is F_2-linear, so it is stored as the mask of basis traces;
/// `trace(x)` is the parity of `x & trace_mask`.
#[derive(Debug, Clone)]
pub struct BinaryFieldCtx {
    n: u32,
    modulus: u64,
    trace_mask: u64,
}

impl BinaryFieldCtx {
    /// Field with the default (lexicographically smallest) modulus for degree `n`.
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(n));
        }
        Self::with_modulus(n, DEFAULT_MODULI[n as usize])
    }

    /// Field with a caller-supplied irreducible modulus of degree `n`.
    pub fn with_modulus(n: u32, modulus: u64) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(n));
        }
        if !is_irreducible(modulus, n) {
            return Err(Error::NotIrreducible { modulus, degree: n });
        }
        let mut ctx = Self {
            n,
            modulus,
            trace_mask: 0,
        };
        let mut mask = 0u64;
        for i in 0..n {
            let t = ctx.trace_by_frobenius(1 << i);
            debug_assert!(t <= 1);
            mask |= t << i;
        }
        ctx.trace_mask = mask;
        Ok(ctx)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1 << self.n
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    /// Carry-less multiply with reduce-as-you-go; products stay below 2^(n+1).
    pub fn mul(&self, mut a: u64, mut b: u64) -> u64 {
        debug_assert!(a < self.order() && b < self.order());
        let mut r = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> self.n & 1 == 1 {
                a ^= self.modulus;
            }
        }
        r
    }

    pub fn square(&self, a: u64) -> u64 {
        self.mul(a, a)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse with `inverse(0) = 0`, via x^(2^n - 2).
    pub fn inverse(&self, x: u64) -> u64 {
        debug_assert!(x < self.order());
        if x == 0 {
            return 0;
        }
        self.pow(x, self.order() - 2)
    }

    pub fn checked_inverse(&self, x: u64) -> Result<u64> {
        if x >= self.order() {
            return Err(Error::ElementOutOfRange {
                element: x,
                order: self.order(),
            });
        }
        Ok(self.inverse(x))
    }

    /// Tr(x) = sum of x^(2^i) for i < n, always 0 or 1.
    pub fn trace(&self, x: u64) -> u64 {
        debug_assert!(x < self.order());
        ((x & self.trace_mask).count_ones() & 1) as u64
    }

    pub fn checked_trace(&self, x: u64) -> Result<u64> {
        if x >= self.order() {
            return Err(Error::ElementOutOfRange {
                element: x,
                order: self.order(),
            });
        }
        Ok(self.trace(x))
    }

    fn trace_by_frobenius(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        let mut y = x;
        for _ in 0..self.n {
            acc ^= y;
            y = self.mul(y, y);
        }
        acc
    }
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    debug_assert!(b != 0);
    let db = 63 - b.leading_zeros();
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, poly_rem(a, b));
    }
    a
}

fn poly_mulmod(a: u64, mut b: u64, modulus: u64) -> u64 {
    let n = 63 - modulus.leading_zeros();
    let mut a = poly_rem(a, modulus);
    let mut r = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> n & 1 == 1 {
            a ^= modulus;
        }
    }
    r
}

/// Degree-n irreducibility over GF(2): x^(2^n) = x mod f, and
/// gcd(x^(2^i) - x, f) = 1 for 1 <= i < n (no factor of smaller degree).
pub fn is_irreducible(f: u64, n: u32) -> bool {
    if f.leading_zeros() != 63 - n {
        return false;
    }
    let x = poly_rem(0b10, f);
    let mut t = x;
    for i in 1..=n {
        t = poly_mulmod(t, t, f);
        if i < n && poly_gcd(t ^ x, f) != 1 {
            return false;
        }
    }
    t == x
}
