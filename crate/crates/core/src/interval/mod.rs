//! Closed-interval arithmetic with outward rounding.
//!
//! Every operation returns an interval containing the exact real image of its
//! operands. Rounding is done by next-representable-float stepping after each
//! primitive operation, with no dependence on dynamic rounding-mode control.
//! NaN never escapes: any indeterminate step widens to the whole real line,
//! which is a sound (if useless) enclosure.

mod expr;
mod verify;

pub use expr::ExpressionId;
pub use verify::{
    emit_figure_data, parse_claims, theorem_claims, verify_claim, verify_claims,
    verify_theorem_certificates, Claim, ClaimKind, ClaimOutcome, RefutationPoint, Status,
    TheoremReport, VerifiedResult, DEFAULT_BUDGET, MAX_BISECTION_DEPTH,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

pub const ENTIRE: Interval = Interval {
    lo: f64::NEG_INFINITY,
    hi: f64::INFINITY,
};

pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
pub const HALF: Interval = Interval { lo: 0.5, hi: 0.5 };

#[inline]
fn guard(lo: f64, hi: f64) -> Interval {
    if lo.is_nan() || hi.is_nan() {
        return ENTIRE;
    }
    debug_assert!(lo <= hi);
    Interval { lo, hi }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidParameter(format!(
                "invalid interval [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(v: f64) -> Self {
        debug_assert!(!v.is_nan());
        Self { lo: v, hi: v }
    }

    /// Enclosure of an exact decimal literal. Integers below 2^53 convert
    /// exactly; anything else is widened one ulp outward from the nearest
    /// float, which always contains the exact value.
    pub fn from_decimal(s: &str) -> Result<Self> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|e| Error::InvalidParameter(format!("bad decimal {s:?}: {e}")))?;
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite decimal {s:?}")));
        }
        let integral = !s.contains(['.', 'e', 'E']);
        if integral && v.abs() < 9.007_199_254_740_992e15 {
            return Ok(Self::point(v));
        }
        Ok(Self {
            lo: v.next_down(),
            hi: v.next_up(),
        })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        if m.is_finite() {
            m
        } else {
            0.0
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn neg(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn add(self, o: Self) -> Self {
        guard((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }

    pub fn sub(self, o: Self) -> Self {
        guard((self.lo - o.hi).next_down(), (self.hi - o.lo).next_up())
    }

    pub fn mul(self, o: Self) -> Self {
        let c = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        if c.iter().any(|v| v.is_nan()) {
            return ENTIRE;
        }
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        guard(lo.next_down(), hi.next_up())
    }

    /// Division; the divisor must be bounded away from zero.
    pub fn div(self, o: Self) -> Result<Self> {
        if o.lo <= 0.0 && o.hi >= 0.0 {
            return Err(Error::IntervalDomain(format!(
                "divisor [{}, {}] is not sign-definite",
                o.lo, o.hi
            )));
        }
        let c = [
            self.lo / o.lo,
            self.lo / o.hi,
            self.hi / o.lo,
            self.hi / o.hi,
        ];
        if c.iter().any(|v| v.is_nan()) {
            return Ok(ENTIRE);
        }
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok(guard(lo.next_down(), hi.next_up()))
    }

    /// Tighter than `mul(self, self)`: the square of a straddling interval
    /// has exact lower bound 0.
    pub fn square(self) -> Self {
        if self.lo >= 0.0 {
            guard((self.lo * self.lo).next_down(), (self.hi * self.hi).next_up())
        } else if self.hi <= 0.0 {
            guard((self.hi * self.hi).next_down(), (self.lo * self.lo).next_up())
        } else {
            let m = (self.lo * self.lo).max(self.hi * self.hi);
            guard(0.0, m.next_up())
        }
    }

    /// Monotone cube via directed point cubes at the endpoints.
    pub fn cube(self) -> Self {
        guard(cube_down(self.lo), cube_up(self.hi))
    }

    pub fn sqrt(self) -> Result<Self> {
        if self.lo < 0.0 {
            return Err(Error::IntervalDomain(format!(
                "sqrt of interval reaching below zero: [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(guard(self.lo.sqrt().next_down().max(0.0), self.hi.sqrt().next_up()))
    }

    /// t^(2/3) = (cbrt t)^2, requiring the base enclosure to be nonnegative;
    /// a negative lower bound is a domain error, never silent.
    pub fn pow_two_thirds(self) -> Result<Self> {
        if self.lo < 0.0 {
            return Err(Error::IntervalDomain(format!(
                "base of 2/3 power reaches below zero: [{}, {}]",
                self.lo, self.hi
            )));
        }
        let lo = cbrt_down(self.lo).max(0.0);
        let hi = cbrt_up(self.hi);
        Ok(guard((lo * lo).next_down().max(0.0), (hi * hi).next_up()))
    }

    /// Exact scaling by 2^k (no rounding below overflow).
    pub fn scale_pow2(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        guard(self.lo * f, self.hi * f)
    }
}

/// Certified lower bound for x^3, for any finite x.
fn cube_down(x: f64) -> f64 {
    if x < 0.0 {
        return -cube_up(-x);
    }
    let m = (x * x).next_down().max(0.0);
    (m * x).next_down().max(0.0)
}

/// Certified upper bound for x^3, for any finite x.
fn cube_up(x: f64) -> f64 {
    if x < 0.0 {
        return -cube_down(-x);
    }
    ((x * x).next_up() * x).next_up()
}

/// Validated cube-root lower bound: result r satisfies r^3 <= x (x >= 0).
fn cbrt_down(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    let mut c = x.cbrt();
    while c > 0.0 && cube_up(c) > x {
        c = c.next_down();
    }
    c
}

/// Validated cube-root upper bound: result r satisfies r^3 >= x (x >= 0).
fn cbrt_up(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    let mut c = x.cbrt();
    while cube_down(c) < x {
        c = c.next_up();
    }
    c
}
