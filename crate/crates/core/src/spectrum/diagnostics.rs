//! Numeric verification of the explicit spectral identities and inequalities
//! for sum-free and inverse-closed sets: Parseval, the sum-of-cubes identity,
//! tail bounds, density bounds from the largest coefficients, the
//! self-inverse almost-orthogonality bound, and the coefficient-doubling
//! bounds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{float_tolerance, full_spectrum, Spectrum};
use crate::subsets::FieldSubset;

/// One checked inequality. `slack` is oriented so that the inequality holds
/// exactly when `slack >= 0`; `holds` allows float noise of the field's
/// tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityRecord {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl InequalityRecord {
    /// Record for `lhs >= rhs`.
    fn ge(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack,
            holds: slack >= -tol,
        }
    }

    /// Record for `lhs <= rhs`.
    fn le(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack,
            holds: slack >= -tol,
        }
    }
}

/// |alpha - sum_r |c(r)|^2|; exactly zero for indicator functions up to
/// float noise.
pub fn check_parseval(s: &Spectrum) -> f64 {
    let sum: f64 = s.coefficients().iter().map(|c| c.norm_sqr()).sum();
    (s.alpha() - sum).abs()
}

/// |alpha^3 + sum_{r != 0} |c(r)|^2 c(r)|, which vanishes for sum-free sets.
/// Checking the precondition costs an extra sum-freeness scan; use the
/// `_with` variant when a spectrum is already at hand.
pub fn check_sum_of_cubes(set: &FieldSubset) -> Result<f64> {
    let s = full_spectrum(set)?;
    check_sum_of_cubes_with(set, &s)
}

pub fn check_sum_of_cubes_with(set: &FieldSubset, s: &Spectrum) -> Result<f64> {
    if !set.is_sum_free() {
        return Err(Error::NotSumFree);
    }
    let mut acc = rustfft::num_complex::Complex64::new(s.alpha().powi(3), 0.0);
    for r in 1..s.p() {
        let c = s.coefficient(r);
        acc += c.norm_sqr() * c;
    }
    Ok(acc.norm())
}

/// Full-sum lower bound for sum-free sets:
/// delta_1^3 |cos theta_1| + sum_{i>=2} delta_i^3 >= 1/2, with no tail
/// truncation.
pub fn check_cor33_full_sum(s: &Spectrum) -> InequalityRecord {
    let lhs = s.delta(1).powi(3) * s.theta1().cos().abs()
        + s.ordered()[1..]
            .iter()
            .map(|&(_, d)| d.powi(3))
            .sum::<f64>();
    InequalityRecord::ge("cor33_full_sum", lhs, 0.5, float_tolerance(s.p()))
}

#[derive(Debug, Clone, Serialize)]
pub struct TailBound {
    pub delta_k: InequalityRecord,
    pub tail_sum: InequalityRecord,
}

/// The two finite-k inequalities behind the spectral tail bound:
/// delta_k^2 <= (1-alpha)/(2 k alpha) and
/// sum_{i>k} delta_i^3 <= k^{-1/2} ((1-alpha0)/(2 alpha0))^{3/2}.
pub fn check_tail_bound(s: &Spectrum, k: usize, alpha0: f64) -> Result<TailBound> {
    let half = s.ordered().len();
    if k == 0 || k >= half {
        return Err(Error::InvalidParameter(format!(
            "k must satisfy 1 <= k < (p-1)/2 = {half}, got {k}"
        )));
    }
    if alpha0 <= 0.0 || s.alpha() < alpha0 {
        return Err(Error::InvalidParameter(format!(
            "need 0 < alpha0 <= alpha = {}, got {alpha0}",
            s.alpha()
        )));
    }
    let tol = float_tolerance(s.p());
    let alpha = s.alpha();
    let delta_k = InequalityRecord::le(
        "tail_delta_k",
        s.delta(k).powi(2),
        (1.0 - alpha) / (2.0 * k as f64 * alpha),
        tol,
    );
    let tail: f64 = s.ordered()[k..].iter().map(|&(_, d)| d.powi(3)).sum();
    let tail_sum = InequalityRecord::le(
        "tail_sum_cubes",
        tail,
        ((1.0 - alpha0) / (2.0 * alpha0)).powf(1.5) / (k as f64).sqrt(),
        tol,
    );
    Ok(TailBound { delta_k, tail_sum })
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaBounds {
    pub first: InequalityRecord,
    /// Present only when the hypothesis 1 + d2 + 2 d1^2 d2 - 2 d1^3 > 0 holds.
    pub second: Option<InequalityRecord>,
    pub delta1: f64,
    pub delta2: f64,
    pub second_denominator: f64,
}

/// Density bounds for sum-free sets from the two largest coefficients:
/// alpha <= d1/(1+d1) always, and alpha <= d2/(1 + d2 + 2 d1^2 d2 - 2 d1^3)
/// when the denominator is positive.
pub fn check_sumfree_alpha_bounds(s: &Spectrum) -> AlphaBounds {
    let tol = float_tolerance(s.p());
    let (d1, d2) = (s.delta(1), s.delta(2));
    let first = InequalityRecord::le("cor34_first", s.alpha(), d1 / (1.0 + d1), tol);
    let den = 1.0 + d2 + 2.0 * d1 * d1 * d2 - 2.0 * d1.powi(3);
    let second =
        (den > 0.0).then(|| InequalityRecord::le("cor34_second", s.alpha(), d2 / den, tol));
    AlphaBounds {
        first,
        second,
        delta1: d1,
        delta2: d2,
        second_denominator: den,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfInverseBound {
    pub record: InequalityRecord,
    pub s: Vec<u64>,
    pub lambda: Vec<f64>,
}

/// Explicit pre-asymptotic form of the self-inverse bound: for A = A^{-1}
/// and distinct nonzero s_1..s_m with |c(s_i)| = lambda_i alpha,
/// alpha (1 + (m+1)(1 + 2 sqrt p)/p) >= alpha^2 (1 + 2 sum lambda_i^2).
pub fn check_self_inverse_bound(set: &FieldSubset, s: &[u64]) -> Result<SelfInverseBound> {
    let spec = full_spectrum(set)?;
    check_self_inverse_bound_with(set, &spec, s)
}

pub fn check_self_inverse_bound_with(
    set: &FieldSubset,
    spec: &Spectrum,
    s: &[u64],
) -> Result<SelfInverseBound> {
    let p = spec.p();
    let mut seen = std::collections::HashSet::new();
    for &si in s {
        if si == 0 || si >= p {
            return Err(Error::InvalidParameter(format!(
                "s elements must be distinct nonzero residues mod {p}, got {si}"
            )));
        }
        if !seen.insert(si) {
            return Err(Error::InvalidParameter(format!("duplicate s element {si}")));
        }
    }
    if !set.is_inverse_closed() {
        return Err(Error::NotInverseClosed);
    }
    let alpha = spec.alpha();
    let lambda: Vec<f64> = s
        .iter()
        .map(|&si| spec.coefficient(si).norm() / alpha)
        .collect();
    let m = s.len() as f64;
    let pf = p as f64;
    let lhs = alpha * (1.0 + (m + 1.0) * (1.0 + 2.0 * pf.sqrt()) / pf);
    let rhs = alpha * alpha * (1.0 + 2.0 * lambda.iter().map(|l| l * l).sum::<f64>());
    let record = InequalityRecord::ge("self_inverse_explicit", lhs, rhs, float_tolerance(p));
    Ok(SelfInverseBound {
        record,
        s: s.to_vec(),
        lambda,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DoublingBounds {
    pub halfplane: InequalityRecord,
    pub weak_yudin: InequalityRecord,
    pub delta: f64,
    pub theta: f64,
}

/// With delta, theta taken from the coefficient at r, both exact doubling
/// bounds: Re c(2r) >= alpha (2 delta^2 cos^2 theta - 1) and
/// |c(2r)| >= (2 delta^2 - 1) alpha.
pub fn check_doubling_bounds(s: &Spectrum, r: u64) -> Result<DoublingBounds> {
    let p = s.p();
    if r == 0 || r >= p {
        return Err(Error::InvalidParameter(format!(
            "r must be a nonzero residue mod {p}, got {r}"
        )));
    }
    let tol = float_tolerance(p);
    let alpha = s.alpha();
    let c = s.coefficient(r);
    let delta = c.norm() / alpha;
    let theta = c.im.atan2(c.re);
    let c2 = s.coefficient(2 * r % p);
    let halfplane = InequalityRecord::ge(
        "doubling_halfplane",
        c2.re,
        alpha * (2.0 * delta * delta * theta.cos().powi(2) - 1.0),
        tol,
    );
    let weak_yudin = InequalityRecord::ge(
        "doubling_weak_yudin",
        c2.norm(),
        (2.0 * delta * delta - 1.0) * alpha,
        tol,
    );
    Ok(DoublingBounds {
        halfplane,
        weak_yudin,
        delta,
        theta,
    })
}

/// Knobs for [`build_report`]: which parameterized checks to include.
#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    /// Tail bound at this k.
    pub k: Option<usize>,
    /// Self-inverse bound with the first m elements of (r_1, -r_1, r_2, ...).
    pub m: Option<usize>,
    /// Doubling bounds at this frequency.
    pub r: Option<u64>,
    /// Floor for the tail bound; defaults to the set's own density.
    pub alpha0: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lambda: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub p: u64,
    pub size: u64,
    pub alpha: f64,
    pub sum_free: bool,
    pub inverse_closed: bool,
    pub parseval_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum_of_cubes_residual: Option<f64>,
    pub records: Vec<InequalityRecord>,
    pub params: ReportParams,
}

impl DiagnosticsReport {
    pub fn all_hold(&self) -> bool {
        self.records.iter().all(|r| r.holds)
    }
}

/// Run every applicable diagnostic on one set: Parseval always; the
/// sum-of-cubes identity and both density bounds when the set is sum-free;
/// tail, self-inverse, and doubling records on request.
pub fn build_report(set: &FieldSubset, opts: &ReportOptions) -> Result<DiagnosticsReport> {
    let spec = full_spectrum(set)?;
    let p = spec.p();
    let tol = float_tolerance(p);
    let sum_free = set.is_sum_free();
    let inverse_closed = set.is_inverse_closed();

    let mut records = Vec::new();
    let parseval_residual = check_parseval(&spec);
    records.push(InequalityRecord::le(
        "parseval_residual",
        parseval_residual,
        tol,
        0.0,
    ));

    let mut sum_of_cubes_residual = None;
    if sum_free {
        let res = check_sum_of_cubes_with(set, &spec)?;
        records.push(InequalityRecord::le("sum_of_cubes_residual", res, tol, 0.0));
        sum_of_cubes_residual = Some(res);
        records.push(check_cor33_full_sum(&spec));
        let bounds = check_sumfree_alpha_bounds(&spec);
        records.push(bounds.first);
        if let Some(second) = bounds.second {
            records.push(second);
        }
    }

    let mut params = ReportParams {
        k: None,
        alpha0: None,
        m: None,
        s: vec![],
        lambda: vec![],
        r: None,
        delta: None,
        theta: None,
    };

    if let Some(k) = opts.k {
        let alpha0 = opts.alpha0.unwrap_or_else(|| spec.alpha());
        let tb = check_tail_bound(&spec, k, alpha0)?;
        records.push(tb.delta_k);
        records.push(tb.tail_sum);
        params.k = Some(k);
        params.alpha0 = Some(alpha0);
    }

    if let Some(m) = opts.m {
        let half = spec.ordered().len();
        if m > 2 * half {
            return Err(Error::InvalidParameter(format!(
                "m must be at most p - 1 = {}, got {m}",
                2 * half
            )));
        }
        let mut s = Vec::with_capacity(m);
        let mut i = 1;
        while s.len() < m {
            s.push(spec.r(i));
            if s.len() < m {
                s.push(p - spec.r(i));
            }
            i += 1;
        }
        let si = check_self_inverse_bound_with(set, &spec, &s)?;
        records.push(si.record);
        params.m = Some(m);
        params.s = si.s;
        params.lambda = si.lambda;
    }

    if let Some(r) = opts.r {
        let db = check_doubling_bounds(&spec, r)?;
        records.push(db.halfplane);
        records.push(db.weak_yudin);
        params.r = Some(r);
        params.delta = Some(db.delta);
        params.theta = Some(db.theta);
    }

    Ok(DiagnosticsReport {
        p,
        size: set.len(),
        alpha: set.alpha(),
        sum_free,
        inverse_closed,
        parseval_residual,
        sum_of_cubes_residual,
        records,
        params,
    })
}
