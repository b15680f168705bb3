//! Exact arithmetic contexts for prime fields F_p and binary fields GF(2^n).
//!
//! Contexts are immutable after construction and safe to share across
//! threads; all operations are pure.

mod binary;
mod prime;

pub use binary::{is_irreducible, BinaryFieldCtx, DEFAULT_MODULI, MAX_DEGREE};
pub use prime::{is_prime, primes_in_range, PrimeFieldCtx};

use crate::error::{Error, Result};

/// Either field kind behind one interface; subsets and searches are generic
/// over this.
#[derive(Debug, Clone)]
pub enum FieldCtx {
    Prime(PrimeFieldCtx),
    Binary(BinaryFieldCtx),
}

impl FieldCtx {
    pub fn prime(p: u64) -> Result<Self> {
        Ok(Self::Prime(PrimeFieldCtx::new(p)?))
    }

    pub fn binary(n: u32) -> Result<Self> {
        Ok(Self::Binary(BinaryFieldCtx::new(n)?))
    }

    pub fn binary_with_modulus(n: u32, modulus: u64) -> Result<Self> {
        Ok(Self::Binary(BinaryFieldCtx::with_modulus(n, modulus)?))
    }

    pub fn order(&self) -> u64 {
        match self {
            Self::Prime(f) => f.order(),
            Self::Binary(f) => f.order(),
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self {
            Self::Prime(f) => f.add(a, b),
            Self::Binary(f) => f.add(a, b),
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        match self {
            Self::Prime(f) => f.neg(a),
            Self::Binary(_) => a,
        }
    }

    pub fn inverse(&self, x: u64) -> u64 {
        match self {
            Self::Prime(f) => f.inverse(x),
            Self::Binary(f) => f.inverse(x),
        }
    }

    pub fn as_prime(&self) -> Result<&PrimeFieldCtx> {
        match self {
            Self::Prime(f) => Ok(f),
            Self::Binary(_) => Err(Error::PrimeFieldRequired),
        }
    }

    pub fn as_binary(&self) -> Option<&BinaryFieldCtx> {
        match self {
            Self::Binary(f) => Some(f),
            Self::Prime(_) => None,
        }
    }

    pub fn check_element(&self, x: u64) -> Result<()> {
        if x >= self.order() {
            return Err(Error::ElementOutOfRange {
                element: x,
                order: self.order(),
            });
        }
        Ok(())
    }
}

/// x^{-1} in F_p with the convention 0^{-1} = 0; out-of-range input is a
/// usage error.
pub fn fp_inverse(ctx: &PrimeFieldCtx, x: u64) -> Result<u64> {
    ctx.checked_inverse(x)
}

/// Tr(x) over GF(2^n), in {0, 1}; degree-overflow encodings are usage errors.
pub fn gf2_trace(ctx: &BinaryFieldCtx, x: u64) -> Result<u64> {
    ctx.checked_trace(x)
}

/// x^{-1} in GF(2^n) with the convention 0^{-1} = 0.
pub fn gf2_inverse(ctx: &BinaryFieldCtx, x: u64) -> Result<u64> {
    ctx.checked_inverse(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn op_wrappers_validate_range() {
        let p = PrimeFieldCtx::new(7).unwrap();
        assert_eq!(fp_inverse(&p, 3).unwrap(), 5);
        assert_eq!(fp_inverse(&p, 0).unwrap(), 0);
        assert!(fp_inverse(&p, 7).is_err());

        let b = BinaryFieldCtx::new(2).unwrap();
        assert_eq!(gf2_trace(&b, 0).unwrap(), 0);
        assert_eq!(gf2_trace(&b, 2).unwrap(), 1);
        assert!(gf2_trace(&b, 4).is_err());
        assert_eq!(gf2_inverse(&b, 2).unwrap(), 3);
        assert!(gf2_inverse(&b, 5).is_err());
    }

    #[test]
    fn negation_is_identity_in_char2() {
        let f = FieldCtx::binary(3).unwrap();
        for x in 0..8 {
            assert_eq!(f.neg(x), x);
            assert_eq!(f.add(x, x), 0);
        }
    }
}
