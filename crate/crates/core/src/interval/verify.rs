//! Declarative optimization claims over the expression catalog, proved or
//! refuted by branch-and-bound on rigorous enclosures, plus the fixed
//! certificate suite for the density bound's case analysis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{ExpressionId, Interval};

pub const DEFAULT_BUDGET: u64 = 1_000_000;
pub const MAX_BISECTION_DEPTH: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    /// Minimum over the box is strictly above the threshold.
    MinAbove,
    /// Maximum over the box is strictly below the threshold.
    MaxBelow,
    /// The expression is strictly negative on the whole box.
    AlwaysNegative,
    /// A constant (nullary) expression is strictly above the threshold.
    ValueAbove,
}

impl ClaimKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::MinAbove => "min_above",
            Self::MaxBelow => "max_below",
            Self::AlwaysNegative => "always_negative",
            Self::ValueAbove => "value_above",
        }
    }
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

fn default_threshold() -> String {
    "0".into()
}

/// A declarative assertion about one catalog expression on one box.
/// Thresholds are exact decimal strings, converted with outward rounding.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Claim {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub expr: ExpressionId,
    #[serde(rename = "box", default)]
    pub domain: Vec<[f64; 2]>,
    pub kind: ClaimKind,
    #[serde(default = "default_threshold")]
    pub threshold: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness_points: Vec<f64>,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

impl Claim {
    pub fn effective_name(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("{}_{}", self.expr, self.kind.name()))
    }
}

/// Parse a claims file: either a single claim object or an array of them.
pub fn parse_claims(json: &str) -> Result<Vec<Claim>> {
    let v: serde_json::Value =
        serde_json::from_str(json).map_err(|e| Error::BadClaim(e.to_string()))?;
    let res = if v.is_array() {
        serde_json::from_value::<Vec<Claim>>(v)
    } else {
        serde_json::from_value::<Claim>(v).map(|c| vec![c])
    };
    res.map_err(|e| Error::BadClaim(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct RefutationPoint {
    pub coords: Vec<f64>,
    pub value_lo: f64,
    pub value_hi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifiedResult {
    pub status: Status,
    pub boxes_processed: u64,
    pub max_depth: u32,
    /// For proved claims: the certified extremum bound over all leaves
    /// (lower bound of the min, upper bound of the max).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refutation_point: Option<RefutationPoint>,
}

struct WorkBox {
    dims: Vec<Interval>,
    depth: u32,
}

/// Branch-and-bound claim verification. Maintains a worklist seeded by the
/// witness subdivision (or the whole box), bisects the widest dimension of
/// any box whose rigorous bound does not clear the threshold, proves when
/// every leaf clears, refutes when a rigorous point enclosure violates the
/// claim, and goes inconclusive at budget exhaustion or at the depth cap.
pub fn verify_claim(claim: &Claim) -> Result<VerifiedResult> {
    if claim.budget == 0 {
        return Err(Error::InvalidParameter("claim budget must be positive".into()));
    }
    let threshold = Interval::from_decimal(&claim.threshold)
        .map_err(|e| Error::BadClaim(format!("threshold: {e}")))?;
    let arity = claim.expr.arity();
    if claim.domain.len() != arity {
        return Err(Error::BadClaim(format!(
            "{} takes {} variable(s), claim box has {}",
            claim.expr,
            arity,
            claim.domain.len()
        )));
    }
    if claim.kind == ClaimKind::ValueAbove && arity != 0 {
        return Err(Error::BadClaim(
            "value_above applies to constant expressions only".into(),
        ));
    }
    let mut root = Vec::with_capacity(arity);
    for &[lo, hi] in &claim.domain {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::BadClaim(format!("invalid box side [{lo}, {hi}]")));
        }
        root.push(Interval::new(lo, hi)?);
    }
    if !claim.witness_points.is_empty() {
        if arity != 1 {
            return Err(Error::BadClaim(
                "witness subdivision applies to one-dimensional boxes only".into(),
            ));
        }
        let inside = claim
            .witness_points
            .iter()
            .all(|&w| root[0].contains(w));
        let increasing = claim.witness_points.windows(2).all(|w| w[0] < w[1]);
        if !inside || !increasing {
            return Err(Error::BadClaim(
                "witness points must lie inside the box and be strictly increasing".into(),
            ));
        }
    }

    let mut stack: Vec<WorkBox> = Vec::new();
    if arity == 1 && !claim.witness_points.is_empty() {
        let (lo, hi) = (root[0].lo(), root[0].hi());
        let mut cuts = Vec::with_capacity(claim.witness_points.len() + 2);
        cuts.push(lo);
        for &w in &claim.witness_points {
            if w > *cuts.last().unwrap() && w < hi {
                cuts.push(w);
            }
        }
        cuts.push(hi);
        for w in cuts.windows(2) {
            stack.push(WorkBox {
                dims: vec![Interval::new(w[0], w[1])?],
                depth: 0,
            });
        }
        stack.reverse();
    } else {
        stack.push(WorkBox {
            dims: root,
            depth: 0,
        });
    }

    let mut processed = 0u64;
    let mut max_depth = 0u32;
    let mut bound: Option<f64> = None;
    let mut undecidable = false;

    let fold_bound = |bound: &mut Option<f64>, v: f64, take_min: bool| {
        *bound = Some(match *bound {
            None => v,
            Some(b) => {
                if take_min {
                    b.min(v)
                } else {
                    b.max(v)
                }
            }
        });
    };

    while let Some(wb) = stack.pop() {
        if processed >= claim.budget {
            return Ok(VerifiedResult {
                status: Status::Inconclusive,
                boxes_processed: processed,
                max_depth,
                bound: None,
                refutation_point: None,
            });
        }
        processed += 1;
        max_depth = max_depth.max(wb.depth);

        let enclosure = claim.expr.eval(&wb.dims);
        let cleared = match (&enclosure, claim.kind) {
            (Ok(enc), ClaimKind::MinAbove) => enc.lo() > threshold.hi(),
            (Ok(enc), ClaimKind::MaxBelow) => enc.hi() < threshold.lo(),
            (Ok(enc), ClaimKind::AlwaysNegative) => enc.hi() < 0.0,
            (Ok(enc), ClaimKind::ValueAbove) => enc.lo() > threshold.hi(),
            (Err(_), _) => false,
        };
        if cleared {
            let enc = enclosure.as_ref().unwrap();
            match claim.kind {
                ClaimKind::MinAbove | ClaimKind::ValueAbove => {
                    fold_bound(&mut bound, enc.lo(), true)
                }
                ClaimKind::MaxBelow | ClaimKind::AlwaysNegative => {
                    fold_bound(&mut bound, enc.hi(), false)
                }
            }
            continue;
        }

        // Not cleared: probe the midpoint for a rigorous counterexample.
        let mid: Vec<f64> = wb.dims.iter().map(|d| d.mid()).collect();
        let point_box: Vec<Interval> = mid.iter().map(|&m| Interval::point(m)).collect();
        if let Ok(pv) = claim.expr.eval(&point_box) {
            let refuted = match claim.kind {
                ClaimKind::MinAbove => pv.hi() < threshold.lo(),
                ClaimKind::MaxBelow => pv.lo() > threshold.hi(),
                ClaimKind::AlwaysNegative => pv.lo() >= 0.0,
                ClaimKind::ValueAbove => pv.hi() < threshold.lo(),
            };
            if refuted {
                return Ok(VerifiedResult {
                    status: Status::Refuted,
                    boxes_processed: processed,
                    max_depth,
                    bound: None,
                    refutation_point: Some(RefutationPoint {
                        coords: mid,
                        value_lo: pv.lo(),
                        value_hi: pv.hi(),
                    }),
                });
            }
        }

        // Bisect the widest dimension, unless the box is terminal (depth cap
        // or numerically unsplittable).
        let split = (arity > 0 && wb.depth < MAX_BISECTION_DEPTH)
            .then(|| {
                let (dim, side) = wb
                    .dims
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.width().partial_cmp(&b.1.width()).unwrap())
                    .map(|(dim, side)| (dim, *side))
                    .unwrap();
                let m = side.mid();
                (side.lo() < m && m < side.hi()).then_some((dim, side, m))
            })
            .flatten();
        let Some((dim, side, m)) = split else {
            if let Err(e) = enclosure {
                // A box this small that still cannot be evaluated means the
                // claim box leaves the expression's validity region.
                return Err(Error::IntervalDomain(format!(
                    "claim {} violates validity near {:?}: {e}",
                    claim.effective_name(),
                    mid
                )));
            }
            undecidable = true;
            continue;
        };
        let mut left = wb.dims.clone();
        let mut right = wb.dims;
        left[dim] = Interval::new(side.lo(), m)?;
        right[dim] = Interval::new(m, side.hi())?;
        stack.push(WorkBox {
            dims: right,
            depth: wb.depth + 1,
        });
        stack.push(WorkBox {
            dims: left,
            depth: wb.depth + 1,
        });
    }

    if undecidable {
        return Ok(VerifiedResult {
            status: Status::Inconclusive,
            boxes_processed: processed,
            max_depth,
            bound: None,
            refutation_point: None,
        });
    }
    Ok(VerifiedResult {
        status: Status::Proved,
        boxes_processed: processed,
        max_depth,
        bound,
        refutation_point: None,
    })
}

fn dec_lo(s: &str) -> f64 {
    Interval::from_decimal(s).expect("suite constant").lo()
}

fn dec_hi(s: &str) -> f64 {
    Interval::from_decimal(s).expect("suite constant").hi()
}

fn claim(
    name: &str,
    expr: ExpressionId,
    domain: &[(&str, &str)],
    kind: ClaimKind,
    threshold: &str,
    witnesses: &[&str],
    budget: u64,
) -> Claim {
    Claim {
        name: Some(name.into()),
        expr,
        domain: domain
            .iter()
            .map(|&(lo, hi)| [dec_lo(lo), dec_hi(hi)])
            .collect(),
        kind,
        threshold: threshold.into(),
        witness_points: witnesses
            .iter()
            .map(|w| w.parse::<f64>().expect("witness literal"))
            .collect(),
        budget,
    }
}

/// Subdivision certifying the E4a minimum despite the nearby singular point
/// of its radicand, densest toward the right endpoint.
const C4A_WITNESSES: [&str; 16] = [
    "0.751659", "0.757252", "0.762475", "0.767466", "0.772325", "0.777125", "0.781914",
    "0.786710", "0.791485", "0.796142", "0.800481", "0.804182", "0.806873", "0.808367",
    "0.808906", "0.809008",
];

/// The fixed certificate suite: every numeric inequality in the case
/// analysis behind the density bound, all of which must prove.
pub fn theorem_claims(budget: u64) -> Vec<Claim> {
    use ClaimKind::*;
    use ExpressionId::*;
    vec![
        claim("C1", E1, &[("0", "0.33")], MaxBelow, "0.2482", &[], budget),
        claim(
            "C2a",
            E2a,
            &[("0.33", "0.45"), ("0", "0.7")],
            MaxBelow,
            "0.24994",
            &[],
            budget,
        ),
        claim(
            "C2b",
            E2b,
            &[("0.33", "0.45"), ("0.7", "1")],
            MinAbove,
            "0.7510",
            &[],
            budget,
        ),
        claim("C3", E3, &[("0.45", "0.7455")], MinAbove, "0.7501", &[], budget),
        claim(
            "C4a",
            E4a,
            &[("0.7455", "0.809016")],
            MinAbove,
            "0.75001",
            &C4A_WITNESSES,
            budget,
        ),
        claim(
            "C4pos",
            E4pos,
            &[("0.7455", "0.809016")],
            MinAbove,
            "0.000001",
            &[],
            budget,
        ),
        claim(
            "C4vtx",
            E4vtx,
            &[("0.7455", "0.809016")],
            AlwaysNegative,
            "0",
            &[],
            budget,
        ),
        claim(
            "C4b",
            E4b,
            &[("0.7455", "0.809016")],
            MinAbove,
            "0.7659",
            &[],
            budget,
        ),
        claim("C5", E5, &[("0.809016", "1")], MinAbove, "0.7500001", &[], budget),
        claim("CEPS", Ceps, &[], ValueAbove, "0.0000061", &[], budget),
        claim(
            "C5final",
            E5final,
            &[("0.809016", "1")],
            MaxBelow,
            "0.249999975",
            &[],
            budget,
        ),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimOutcome {
    pub name: String,
    pub expr: ExpressionId,
    pub kind: ClaimKind,
    pub threshold: String,
    #[serde(flatten)]
    pub result: VerifiedResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub outcomes: Vec<ClaimOutcome>,
    pub proved: usize,
    pub refuted: usize,
    pub inconclusive: usize,
}

impl TheoremReport {
    pub fn all_proved(&self) -> bool {
        self.refuted == 0 && self.inconclusive == 0
    }
}

/// Verify a batch of claims; independent claims run concurrently and the
/// outcome order matches the input order.
pub fn verify_claims(claims: &[Claim]) -> Result<TheoremReport> {
    let results: Vec<Result<VerifiedResult>> =
        claims.par_iter().map(verify_claim).collect();
    let mut outcomes = Vec::with_capacity(claims.len());
    for (c, r) in claims.iter().zip(results) {
        outcomes.push(ClaimOutcome {
            name: c.effective_name(),
            expr: c.expr,
            kind: c.kind,
            threshold: c.threshold.clone(),
            result: r?,
        });
    }
    let count = |s: Status| outcomes.iter().filter(|o| o.result.status == s).count();
    Ok(TheoremReport {
        proved: count(Status::Proved),
        refuted: count(Status::Refuted),
        inconclusive: count(Status::Inconclusive),
        outcomes,
    })
}

/// Run the built-in certificate suite.
pub fn verify_theorem_certificates(budget: Option<u64>) -> Result<TheoremReport> {
    verify_claims(&theorem_claims(budget.unwrap_or(DEFAULT_BUDGET)))
}

/// Evenly spaced point samples of a one-variable expression, returned as
/// (x, enclosure midpoint), suitable for replotting the bound curves.
pub fn emit_figure_data(
    expr: ExpressionId,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if expr.arity() != 1 {
        return Err(Error::InvalidParameter(format!(
            "figure emission needs a one-variable expression, {expr} has arity {}",
            expr.arity()
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::InvalidParameter(format!("bad range [{lo}, {hi}]")));
    }
    let mut out = Vec::with_capacity(samples);
    for i in 0..samples {
        let x = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let v = expr.eval(&[Interval::point(x)])?;
        out.push((x, v.mid()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(expr: ExpressionId, domain: &[[f64; 2]], kind: ClaimKind, threshold: &str) -> Claim {
        Claim {
            name: None,
            expr,
            domain: domain.to_vec(),
            kind,
            threshold: threshold.into(),
            witness_points: vec![],
            budget: DEFAULT_BUDGET,
        }
    }

    #[test]
    fn proves_simple_monotone_claim() {
        let c = quick(ExpressionId::E1, &[[0.0, 0.33]], ClaimKind::MaxBelow, "0.2482");
        let r = verify_claim(&c).unwrap();
        assert_eq!(r.status, Status::Proved);
        let b = r.bound.unwrap();
        assert!(b < 0.2482 && b > 0.2481);
    }

    #[test]
    fn refutes_tightened_threshold_with_point() {
        let c = quick(ExpressionId::E3, &[[0.45, 0.7455]], ClaimKind::MinAbove, "0.7502");
        let r = verify_claim(&c).unwrap();
        assert_eq!(r.status, Status::Refuted);
        let rp = r.refutation_point.unwrap();
        assert!(rp.value_hi < 0.7502);
        assert!(rp.coords[0] > 0.74);
    }

    #[test]
    fn refutes_min_above_when_minimum_is_below() {
        // minimum over [0.45, 0.7455] is about 0.75011 < 0.76
        let c = quick(ExpressionId::E3, &[[0.45, 0.7455]], ClaimKind::MinAbove, "0.76");
        assert_eq!(verify_claim(&c).unwrap().status, Status::Refuted);
    }

    #[test]
    fn budget_one_goes_inconclusive() {
        let mut c = quick(ExpressionId::E1, &[[0.0, 0.33]], ClaimKind::MaxBelow, "0.2482");
        c.budget = 1;
        assert_eq!(verify_claim(&c).unwrap().status, Status::Inconclusive);
        c.budget = 0;
        assert!(verify_claim(&c).is_err());
    }

    #[test]
    fn claim_validation_errors() {
        // arity mismatch
        let c = quick(ExpressionId::E2a, &[[0.0, 0.33]], ClaimKind::MaxBelow, "1");
        assert!(verify_claim(&c).is_err());
        // witness points outside the box
        let mut c = quick(ExpressionId::E3, &[[0.45, 0.7455]], ClaimKind::MinAbove, "0.7501");
        c.witness_points = vec![0.9];
        assert!(verify_claim(&c).is_err());
        // non-increasing witnesses
        c.witness_points = vec![0.7, 0.6];
        assert!(verify_claim(&c).is_err());
        // bad threshold
        let c = quick(ExpressionId::E3, &[[0.45, 0.7455]], ClaimKind::MinAbove, "x");
        assert!(verify_claim(&c).is_err());
        // value_above on a non-constant expression
        let c = quick(ExpressionId::E3, &[[0.45, 0.7455]], ClaimKind::ValueAbove, "0.5");
        assert!(verify_claim(&c).is_err());
    }

    #[test]
    fn validity_violating_claim_errors_not_inconclusive() {
        // 1/2 - x^3 < 0 on part of [0.8, 1.0]
        let c = quick(ExpressionId::E3, &[[0.8, 1.0]], ClaimKind::MinAbove, "0.1");
        assert!(matches!(
            verify_claim(&c),
            Err(Error::IntervalDomain(_))
        ));
    }

    #[test]
    fn full_suite_proves() {
        let report = verify_theorem_certificates(None).unwrap();
        assert_eq!(report.outcomes.len(), 11);
        for o in &report.outcomes {
            assert_eq!(o.result.status, Status::Proved, "claim {}", o.name);
        }
        assert!(report.all_proved());
        assert_eq!(report.proved, 11);
    }

    #[test]
    fn suite_with_starved_budget_goes_inconclusive() {
        let claims = theorem_claims(1);
        let report = verify_claims(&claims).unwrap();
        assert!(report.inconclusive > 0);
        assert_eq!(report.refuted, 0);
    }

    #[test]
    fn c4a_with_witness_grid_needs_little_extra_depth() {
        let with: Vec<Claim> = theorem_claims(DEFAULT_BUDGET)
            .into_iter()
            .filter(|c| c.effective_name() == "C4a")
            .collect();
        let r = verify_claim(&with[0]).unwrap();
        assert_eq!(r.status, Status::Proved);
        assert!(r.max_depth <= 8, "witness grid should bound extra depth, got {}", r.max_depth);
        // the same claim without witnesses still proves, with deeper search
        let mut bare = with[0].clone();
        bare.witness_points.clear();
        let r2 = verify_claim(&bare).unwrap();
        assert_eq!(r2.status, Status::Proved);
        assert!(r2.max_depth >= r.max_depth);
    }

    #[test]
    fn certified_bounds_match_references() {
        let report = verify_theorem_certificates(None).unwrap();
        let bound = |name: &str| {
            report
                .outcomes
                .iter()
                .find(|o| o.name == name)
                .unwrap()
                .result
                .bound
                .unwrap()
        };
        // certified min lower bounds sit just under the true minima
        assert!(bound("C3") > 0.7501 && bound("C3") <= 0.750110873380991);
        assert!(bound("C4a") > 0.75001 && bound("C4a") <= 0.750098435500562);
        assert!(bound("C5") > 0.7500001 && bound("C5") <= 0.750000110531527);
        assert!(bound("C4pos") > 1e-6 && bound("C4pos") <= 1.030652050780912e-6);
        // certified max upper bounds sit just above the true maxima
        assert!(bound("C5final") < 0.249999975 && bound("C5final") >= 0.249999972367121);
        assert!(bound("C2a") < 0.24994 && bound("C2a") >= 0.249935532501537);
        assert!(bound("C4vtx") < 0.0);
    }

    #[test]
    fn parse_claims_single_and_array() {
        let single = r#"{"expr":"E3","box":[[0.45,0.7455]],"kind":"min_above","threshold":"0.7501","witness_points":[],"budget":1000000}"#;
        let cs = parse_claims(single).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].expr, ExpressionId::E3);
        assert_eq!(verify_claim(&cs[0]).unwrap().status, Status::Proved);

        let arr = r#"[{"expr":"E1","box":[[0,0.33]],"kind":"max_below","threshold":"0.2482"},
                      {"expr":"CEPS","box":[],"kind":"value_above","threshold":"0.0000061"}]"#;
        let cs = parse_claims(arr).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[1].budget, DEFAULT_BUDGET);
        assert!(parse_claims("{\"oops\":1}").is_err());
    }

    #[test]
    fn figure_data_endpoints_and_bounds() {
        let rows = emit_figure_data(ExpressionId::E1, 0.0, 0.33, 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].1.abs() < 1e-15);
        assert!((rows[1].1 - 0.248120300751880).abs() < 1e-12);

        let rows = emit_figure_data(ExpressionId::E3, 0.45, 0.7455, 3).unwrap();
        assert!((rows[1].0 - 0.59775).abs() < 1e-12);
        assert!((rows[1].1 - 0.791818423824899).abs() < 1e-12);

        assert!(emit_figure_data(ExpressionId::E2a, 0.0, 1.0, 10).is_err());
        assert!(emit_figure_data(ExpressionId::E3, 0.45, 0.7455, 1).is_err());
        assert!(emit_figure_data(ExpressionId::E3, 0.9, 1.0, 4).is_err());
    }

    #[test]
    fn bisection_children_enclosures_nest_in_parent() {
        use ExpressionId::*;
        // parent boxes chosen small enough that the enclosure evaluates
        for (e, lo, hi) in [
            (E3, 0.45, 0.60),
            (E4a, 0.7455, 0.76),
            (E4b, 0.7455, 0.809016),
            (E5, 0.809016, 1.0),
        ] {
            let parent = Interval::new(lo, hi).unwrap();
            let pe = e.eval(&[parent]).unwrap();
            let m = parent.mid();
            for child in [
                Interval::new(lo, m).unwrap(),
                Interval::new(m, hi).unwrap(),
            ] {
                let ce = e.eval(&[child]).unwrap();
                assert!(pe.contains_interval(&ce), "{e:?}");
            }
        }
    }
}
