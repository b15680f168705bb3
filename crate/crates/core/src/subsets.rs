//! Subset representation over a finite field, the defining predicates
//! (sum-free, inverse-closed), the inverse-intersection ratio, and the two
//! explicit constructions (trace set in characteristic 2, middle-third
//! interval in prime order).

use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldCtx;

/// Field size above which sum-freeness switches from the O(|A|^2) pairwise
/// scan to a length-|F| convolution.
const CONVOLUTION_THRESHOLD: u64 = 1 << 16;

/// An immutable subset of a field, stored as a membership bitset with cached
/// cardinality. Cheap to clone and share across threads.
#[derive(Debug, Clone)]
pub struct FieldSubset {
    field: Arc<FieldCtx>,
    words: Vec<u64>,
    size: u64,
}

impl FieldSubset {
    pub fn empty(field: Arc<FieldCtx>) -> Self {
        let words = vec![0u64; field.order().div_ceil(64) as usize];
        Self {
            field,
            words,
            size: 0,
        }
    }

    /// Build from an element list; out-of-range elements and duplicates are
    /// rejected.
    pub fn from_elements(field: Arc<FieldCtx>, elements: &[u64]) -> Result<Self> {
        let mut s = Self::empty(field);
        for &x in elements {
            s.field.check_element(x)?;
            let (w, b) = (x / 64, x % 64);
            if s.words[w as usize] >> b & 1 == 1 {
                return Err(Error::SetFormat(format!("duplicate element {x}")));
            }
            s.words[w as usize] |= 1 << b;
            s.size += 1;
        }
        Ok(s)
    }

    pub fn from_membership(field: Arc<FieldCtx>, mut pred: impl FnMut(u64) -> bool) -> Self {
        let mut s = Self::empty(field.clone());
        for x in 0..field.order() {
            if pred(x) {
                s.words[(x / 64) as usize] |= 1 << (x % 64);
                s.size += 1;
            }
        }
        s
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn len(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, x: u64) -> bool {
        x < self.field.order() && self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    /// Density |A| / |F| as an exact rational.
    pub fn alpha_exact(&self) -> Ratio<u64> {
        Ratio::new(self.size, self.field.order())
    }

    pub fn alpha(&self) -> f64 {
        self.size as f64 / self.field.order() as f64
    }

    pub fn elements(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.size as usize);
        for (w, &word) in self.words.iter().enumerate() {
            let mut m = word;
            while m != 0 {
                out.push(w as u64 * 64 + m.trailing_zeros() as u64);
                m &= m - 1;
            }
        }
        out
    }

    /// A^{-1} under the convention 0^{-1} = 0.
    pub fn inverse_set(&self) -> Self {
        let mut s = Self::empty(self.field.clone());
        for x in self.elements() {
            let y = self.field.inverse(x);
            s.words[(y / 64) as usize] |= 1 << (y % 64);
        }
        s.size = s.words.iter().map(|w| w.count_ones() as u64).sum();
        s
    }

    pub fn intersect(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field.order(), other.field.order());
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        let size = words.iter().map(|w| w.count_ones() as u64).sum();
        Self {
            field: self.field.clone(),
            words,
            size,
        }
    }

    /// No a, b, c in A with a + b = c (a = b allowed). The empty set is
    /// vacuously sum-free.
    pub fn is_sum_free(&self) -> bool {
        if self.field.order() > CONVOLUTION_THRESHOLD {
            return self.sum_free_by_convolution();
        }
        self.sum_free_pairwise()
    }

    pub(crate) fn sum_free_pairwise(&self) -> bool {
        let elems = self.elements();
        for (i, &a) in elems.iter().enumerate() {
            for &b in &elems[i..] {
                if self.contains(self.field.add(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Counts representations c = a + b via a cyclic (prime) or dyadic
    /// (characteristic 2) self-convolution of the indicator, then checks that
    /// no element of A is represented.
    pub(crate) fn sum_free_by_convolution(&self) -> bool {
        match self.field.as_ref() {
            FieldCtx::Prime(f) => {
                use rustfft::{num_complex::Complex64, FftPlanner};
                let p = f.p() as usize;
                let mut planner = FftPlanner::new();
                let fwd = planner.plan_fft_forward(p);
                let inv = planner.plan_fft_inverse(p);
                let mut buf = vec![Complex64::new(0.0, 0.0); p];
                for x in self.elements() {
                    buf[x as usize].re = 1.0;
                }
                fwd.process(&mut buf);
                for v in buf.iter_mut() {
                    *v = *v * *v;
                }
                inv.process(&mut buf);
                // buf[c] = p * (number of ordered pairs a + b = c)
                let scale = 1.0 / p as f64;
                self.elements()
                    .into_iter()
                    .all(|c| buf[c as usize].re * scale < 0.5)
            }
            FieldCtx::Binary(f) => {
                let q = f.order() as usize;
                let mut buf: Vec<i128> = vec![0; q];
                for x in self.elements() {
                    buf[x as usize] = 1;
                }
                walsh_hadamard(&mut buf);
                for v in buf.iter_mut() {
                    *v *= *v;
                }
                walsh_hadamard(&mut buf);
                // buf[c] = q * (number of ordered pairs with a xor b = c)
                self.elements().into_iter().all(|c| buf[c as usize] == 0)
            }
        }
    }

    /// 0 not in A and A = A^{-1}.
    pub fn is_inverse_closed(&self) -> bool {
        if self.contains(0) {
            return false;
        }
        self.elements()
            .into_iter()
            .all(|a| self.contains(self.field.inverse(a)))
    }

    /// I(A) = |A intersect A^{-1}| / |A|, exact; requires A nonempty, 0 not in A.
    pub fn inverse_ratio(&self) -> Result<Ratio<u64>> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        if self.contains(0) {
            return Err(Error::ZeroInSet);
        }
        let both = self.intersect(&self.inverse_set()).len();
        Ok(Ratio::new(both, self.size))
    }
}

fn walsh_hadamard(buf: &mut [i128]) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (u, v) = (buf[i], buf[i + h]);
                buf[i] = u + v;
                buf[i + h] = u - v;
            }
        }
        h *= 2;
    }
}

/// A = I intersect I^{-1} for the strict middle third I = { x : p/3 < x < 2p/3 },
/// tested in integers as 3x > p and 3x < 2p. Sum-free and inverse-closed by
/// construction; both predicates are re-checked.
pub fn construct_interval_intersection(field: &Arc<FieldCtx>) -> Result<FieldSubset> {
    let p = field.as_prime()?.p();
    if p < 5 {
        return Err(Error::InvalidParameter(format!(
            "interval construction needs p >= 5, got {p}"
        )));
    }
    let interval = FieldSubset::from_membership(field.clone(), |x| 3 * x > p && 3 * x < 2 * p);
    let set = interval.intersect(&interval.inverse_set());
    assert!(set.is_sum_free());
    assert!(set.is_empty() || set.is_inverse_closed());
    Ok(set)
}

/// A = X intersect X^{-1} where X = { x : Tr(x) = 1 } in GF(2^n). The result
/// is sum-free and inverse-closed with density within (1 + 2 sqrt q) / (4q)
/// of 1/4; all three facts are re-checked.
pub fn construct_char2(field: &Arc<FieldCtx>) -> Result<FieldSubset> {
    let ctx = match field.as_ref() {
        FieldCtx::Binary(f) => f,
        FieldCtx::Prime(_) => {
            return Err(Error::InvalidParameter(
                "char-2 construction needs a binary field".into(),
            ))
        }
    };
    if ctx.n() < 2 {
        return Err(Error::InvalidParameter(format!(
            "char-2 construction needs n >= 2, got {}",
            ctx.n()
        )));
    }
    let trace_one = FieldSubset::from_membership(field.clone(), |x| ctx.trace(x) == 1);
    let set = trace_one.intersect(&trace_one.inverse_set());
    assert!(set.is_sum_free());
    assert!(set.is_inverse_closed());
    let q = ctx.order() as f64;
    assert!((set.alpha() - 0.25).abs() <= char2_density_bound(ctx.order()) + 1e-12);
    let _ = q;
    Ok(set)
}

/// (1 + 2 sqrt q) / (4q), the density deviation bound for the char-2
/// construction.
pub fn char2_density_bound(q: u64) -> f64 {
    let q = q as f64;
    (1.0 + 2.0 * q.sqrt()) / (4.0 * q)
}

/// On-disk set format: explicit element lists, human-auditable.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SetFile {
    Prime { p: u64, elements: Vec<u64> },
    Binary {
        n: u32,
        modulus: String,
        elements: Vec<String>,
    },
}

fn parse_hex(s: &str) -> Result<u64> {
    let t = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X"));
    let (digits, radix) = match t {
        Some(d) => (d, 16),
        None => (s, 10),
    };
    u64::from_str_radix(digits, radix).map_err(|e| Error::SetFormat(format!("bad element {s:?}: {e}")))
}

impl SetFile {
    pub fn from_subset(set: &FieldSubset) -> Self {
        let elements = set.elements();
        match set.field().as_ref() {
            FieldCtx::Prime(f) => SetFile::Prime {
                p: f.p(),
                elements,
            },
            FieldCtx::Binary(f) => SetFile::Binary {
                n: f.n(),
                modulus: format!("0x{:x}", f.modulus()),
                elements: elements.iter().map(|x| format!("0x{x:x}")).collect(),
            },
        }
    }

    /// Validate and materialize. Elements must be strictly increasing.
    pub fn into_subset(self) -> Result<FieldSubset> {
        let (field, elements) = match self {
            SetFile::Prime { p, elements } => (Arc::new(FieldCtx::prime(p)?), elements),
            SetFile::Binary {
                n,
                modulus,
                elements,
            } => {
                let m = parse_hex(&modulus)?;
                let els = elements
                    .iter()
                    .map(|s| parse_hex(s))
                    .collect::<Result<Vec<_>>>()?;
                (Arc::new(FieldCtx::binary_with_modulus(n, m)?), els)
            }
        };
        if !elements.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::SetFormat(
                "elements must be strictly increasing".into(),
            ));
        }
        FieldSubset::from_elements(field, &elements)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("set file serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::SetFormat(e.to_string()))
    }
}
