//! Fixed catalog of the expressions appearing in the certified case analysis.
//! No generic parser: each expression is hand-vetted interval code with its
//! domain-of-validity constraints enforced during evaluation.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::{Interval, HALF, ONE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpressionId {
    /// x / (1 + x)
    E1,
    /// x y / (1 + x y + 2 x^3 y - 2 x^3); denominator must stay sign-definite.
    E2a,
    /// (1 + y^2) x^2 + (1/2 - (1 + y^3) x^3)^(2/3)
    E2b,
    /// 1.49 x^2 + (0.5 - 1.343 x^3)^(2/3), the y-reduced form of E2b with the
    /// exact decimal constants 1.49 = 1 + 0.7^2 and 1.343 = 1 + 0.7^3.
    E2bx,
    /// x^2 + (1/2 - x^3)^(2/3)
    E3,
    /// x^2 + (2x^2 - 1)^2 + (1/2 + (2x^2 - 1)^3 - x^3)^(2/3)
    E4a,
    /// 1/2 + (2x^2 - 1)^3 - x^3, the positivity part of E4a's radicand.
    E4pos,
    /// 4 (2x^2 - 1)^2 - x, negative exactly when the quadratic-in-cos(t)
    /// vertex falls outside [-1, 1].
    E4vtx,
    /// x^2 + (1/2 - (sqrt 2 / 2) x^2)^(2/3)
    E4b,
    /// x^2 + (2x^2 - 0.999994)^2
    E5,
    /// 1 / (1 + 4 E5(x)), the density bound implied by the large-coefficient
    /// case as a function of the leading coefficient ratio.
    E5final,
    /// 2^9 / (3^4 * 5^5) * 0.24^4, the constant epsilon gain at alpha_0 = 0.24.
    Ceps,
}

pub const ALL_EXPRESSIONS: [ExpressionId; 12] = [
    ExpressionId::E1,
    ExpressionId::E2a,
    ExpressionId::E2b,
    ExpressionId::E2bx,
    ExpressionId::E3,
    ExpressionId::E4a,
    ExpressionId::E4pos,
    ExpressionId::E4vtx,
    ExpressionId::E4b,
    ExpressionId::E5,
    ExpressionId::E5final,
    ExpressionId::Ceps,
];

fn dec(s: &str) -> Interval {
    Interval::from_decimal(s).expect("catalog constant parses")
}

fn c_149() -> Interval {
    static C: OnceLock<Interval> = OnceLock::new();
    *C.get_or_init(|| dec("1.49"))
}

fn c_1343() -> Interval {
    static C: OnceLock<Interval> = OnceLock::new();
    *C.get_or_init(|| dec("1.343"))
}

fn c_0999994() -> Interval {
    static C: OnceLock<Interval> = OnceLock::new();
    *C.get_or_init(|| dec("0.999994"))
}

fn sqrt2_over_2() -> Interval {
    static C: OnceLock<Interval> = OnceLock::new();
    *C.get_or_init(|| HALF.sqrt().expect("sqrt(1/2)"))
}

fn ceps_value() -> Interval {
    static C: OnceLock<Interval> = OnceLock::new();
    *C.get_or_init(|| {
        // 2^9 * 0.24^4 / (3^4 * 5^5)
        dec("0.24")
            .square()
            .square()
            .scale_pow2(9)
            .div(dec("253125"))
            .expect("positive constant divisor")
    })
}

impl ExpressionId {
    pub fn arity(&self) -> usize {
        match self {
            Self::E2a | Self::E2b => 2,
            Self::Ceps => 0,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::E1 => "E1",
            Self::E2a => "E2a",
            Self::E2b => "E2b",
            Self::E2bx => "E2bx",
            Self::E3 => "E3",
            Self::E4a => "E4a",
            Self::E4pos => "E4pos",
            Self::E4vtx => "E4vtx",
            Self::E4b => "E4b",
            Self::E5 => "E5",
            Self::E5final => "E5final",
            Self::Ceps => "CEPS",
        }
    }

    /// Rigorous enclosure of the expression's range over the box. Domain
    /// violations (negative base under a 2/3 power, sign-indefinite
    /// denominator) surface as errors, never silently.
    pub fn eval(&self, bx: &[Interval]) -> Result<Interval> {
        if bx.len() != self.arity() {
            return Err(Error::InvalidParameter(format!(
                "{} takes {} variable(s), got a box of dimension {}",
                self.name(),
                self.arity(),
                bx.len()
            )));
        }
        match self {
            Self::E1 => {
                let x = bx[0];
                x.div(ONE.add(x))
            }
            Self::E2a => {
                let (x, y) = (bx[0], bx[1]);
                let xy = x.mul(y);
                let x3 = x.cube();
                let den = ONE
                    .add(xy)
                    .add(x3.mul(y).scale_pow2(1))
                    .sub(x3.scale_pow2(1));
                xy.div(den)
            }
            Self::E2b => {
                let (x, y) = (bx[0], bx[1]);
                let lead = ONE.add(y.square()).mul(x.square());
                let rad = HALF.sub(ONE.add(y.cube()).mul(x.cube()));
                Ok(lead.add(rad.pow_two_thirds()?))
            }
            Self::E2bx => {
                let x = bx[0];
                let lead = c_149().mul(x.square());
                let rad = HALF.sub(c_1343().mul(x.cube()));
                Ok(lead.add(rad.pow_two_thirds()?))
            }
            Self::E3 => {
                let x = bx[0];
                let rad = HALF.sub(x.cube());
                Ok(x.square().add(rad.pow_two_thirds()?))
            }
            Self::E4a => {
                let x = bx[0];
                let w = x.square().scale_pow2(1).sub(ONE);
                let rad = HALF.add(w.cube()).sub(x.cube());
                Ok(x.square().add(w.square()).add(rad.pow_two_thirds()?))
            }
            Self::E4pos => {
                let x = bx[0];
                let w = x.square().scale_pow2(1).sub(ONE);
                Ok(HALF.add(w.cube()).sub(x.cube()))
            }
            Self::E4vtx => {
                let x = bx[0];
                let w = x.square().scale_pow2(1).sub(ONE);
                Ok(w.square().scale_pow2(2).sub(x))
            }
            Self::E4b => {
                let x = bx[0];
                let rad = HALF.sub(sqrt2_over_2().mul(x.square()));
                Ok(x.square().add(rad.pow_two_thirds()?))
            }
            Self::E5 => Ok(e5(bx[0])),
            Self::E5final => ONE.div(ONE.add(e5(bx[0]).scale_pow2(2))),
            Self::Ceps => Ok(ceps_value()),
        }
    }
}

fn e5(x: Interval) -> Interval {
    x.square()
        .add(x.square().scale_pow2(1).sub(c_0999994()).square())
}

impl fmt::Display for ExpressionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExpressionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_EXPRESSIONS
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown expression {s:?}")))
    }
}

impl Serialize for ExpressionId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ExpressionId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point_eval(e: ExpressionId, coords: &[f64]) -> Interval {
        let bx: Vec<Interval> = coords.iter().map(|&v| Interval::point(v)).collect();
        e.eval(&bx).unwrap()
    }

    fn assert_encloses_tightly(v: Interval, exact: f64) {
        assert!(
            v.lo() <= exact && exact <= v.hi(),
            "[{}, {}] misses {exact}",
            v.lo(),
            v.hi()
        );
        assert!(v.width() < 1e-12, "enclosure too wide: {}", v.width());
    }

    // Reference values computed independently at 60-digit precision.
    #[test]
    fn point_values_match_high_precision_references() {
        use ExpressionId::*;
        assert_encloses_tightly(point_eval(E1, &[0.33]), 0.248120300751879699);
        assert_encloses_tightly(point_eval(E2a, &[0.45, 0.7]), 0.249935532501537302);
        assert_encloses_tightly(point_eval(E2b, &[0.33, 0.7]), 0.751000974860847286);
        assert_encloses_tightly(point_eval(E2bx, &[0.33]), 0.751000974860847286);
        assert_encloses_tightly(point_eval(E2bx, &[0.45]), 0.824164479040705038);
        assert_encloses_tightly(point_eval(E3, &[0.45]), 0.753384269690687346);
        assert_encloses_tightly(point_eval(E3, &[0.59775]), 0.791818423824898757);
        assert_encloses_tightly(point_eval(E3, &[0.7455]), 0.750110873380990439);
        assert_encloses_tightly(point_eval(E4a, &[0.7455]), 0.764645107607140589);
        assert_encloses_tightly(point_eval(E4a, &[0.809016]), 0.750098435500561322);
        assert_encloses_tightly(point_eval(E4pos, &[0.7455]), 0.087060985567105055);
        assert_encloses_tightly(point_eval(E4pos, &[0.809016]), 1.03065205078091112e-6);
        assert_encloses_tightly(point_eval(E4vtx, &[0.809016]), -0.427057943703166868);
        assert_encloses_tightly(point_eval(E4b, &[0.7455]), 0.781169526788911207);
        assert_encloses_tightly(point_eval(E4b, &[0.809016]), 0.765931186664221585);
        assert_encloses_tightly(point_eval(E5, &[0.809016]), 0.750000110531526427);
        assert_encloses_tightly(point_eval(E5, &[1.0]), 2.000012000036);
        assert_encloses_tightly(point_eval(E5final, &[0.809016]), 0.249999972367121448);
        assert_encloses_tightly(ExpressionId::Ceps.eval(&[]).unwrap(), 6.7108864e-6);
    }

    #[test]
    fn validity_violations_are_errors() {
        use ExpressionId::*;
        // 1/2 - x^3 < 0 at x = 1
        assert!(E3.eval(&[Interval::point(1.0)]).is_err());
        // E2a denominator straddles zero on an absurd box
        assert!(E2a
            .eval(&[Interval::new(-4.0, 4.0).unwrap(), Interval::point(1.0)])
            .is_err());
        // arity mismatches
        assert!(E3.eval(&[]).is_err());
        assert!(E2a.eval(&[Interval::point(0.4)]).is_err());
        assert!(Ceps.eval(&[Interval::point(0.0)]).is_err());
    }

    #[test]
    fn scalar_samples_lie_inside_box_enclosures() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        // scalar reference evaluation, written independently of the interval path
        let scalar = |e: ExpressionId, v: &[f64]| -> Option<f64> {
            let p23 = |t: f64| (t >= 0.0).then(|| t.cbrt().powi(2));
            match e {
                ExpressionId::E1 => Some(v[0] / (1.0 + v[0])),
                ExpressionId::E2a => {
                    let (x, y) = (v[0], v[1]);
                    Some(x * y / (1.0 + x * y + 2.0 * x.powi(3) * y - 2.0 * x.powi(3)))
                }
                ExpressionId::E2b => {
                    let (x, y) = (v[0], v[1]);
                    Some(
                        (1.0 + y * y) * x * x
                            + p23(0.5 - (1.0 + y.powi(3)) * x.powi(3))?,
                    )
                }
                ExpressionId::E2bx => {
                    Some(1.49 * v[0] * v[0] + p23(0.5 - 1.343 * v[0].powi(3))?)
                }
                ExpressionId::E3 => Some(v[0] * v[0] + p23(0.5 - v[0].powi(3))?),
                ExpressionId::E4a => {
                    let w = 2.0 * v[0] * v[0] - 1.0;
                    Some(v[0] * v[0] + w * w + p23(0.5 + w.powi(3) - v[0].powi(3))?)
                }
                ExpressionId::E4pos => {
                    let w = 2.0 * v[0] * v[0] - 1.0;
                    Some(0.5 + w.powi(3) - v[0].powi(3))
                }
                ExpressionId::E4vtx => {
                    let w = 2.0 * v[0] * v[0] - 1.0;
                    Some(4.0 * w * w - v[0])
                }
                ExpressionId::E4b => Some(
                    v[0] * v[0] + p23(0.5 - std::f64::consts::FRAC_1_SQRT_2 * v[0] * v[0])?,
                ),
                ExpressionId::E5 => {
                    let w = 2.0 * v[0] * v[0] - 0.999994;
                    Some(v[0] * v[0] + w * w)
                }
                ExpressionId::E5final => {
                    let w = 2.0 * v[0] * v[0] - 0.999994;
                    Some(1.0 / (1.0 + 4.0 * (v[0] * v[0] + w * w)))
                }
                ExpressionId::Ceps => Some(512.0 * 0.24f64.powi(4) / 253125.0),
            }
        };
        for e in ALL_EXPRESSIONS {
            let mut tested = 0;
            while tested < 2000 {
                let dims = e.arity();
                let mut bx = Vec::with_capacity(dims);
                let mut pt = Vec::with_capacity(dims);
                for _ in 0..dims {
                    let lo = rng.gen_range(0.0..0.95);
                    let w = rng.gen_range(0.0..0.05);
                    bx.push(Interval::new(lo, lo + w).unwrap());
                    pt.push(rng.gen_range(lo..=(lo + w).max(lo + f64::MIN_POSITIVE)));
                }
                let Ok(enc) = e.eval(&bx) else { continue };
                let Some(val) = scalar(e, &pt) else { continue };
                assert!(
                    enc.lo() <= val && val <= enc.hi(),
                    "{e:?} at {pt:?} in {bx:?}: {val} outside [{}, {}]",
                    enc.lo(),
                    enc.hi()
                );
                tested += 1;
                if dims == 0 {
                    break;
                }
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for e in ALL_EXPRESSIONS {
            assert_eq!(e.name().parse::<ExpressionId>().unwrap(), e);
        }
        assert!("E99".parse::<ExpressionId>().is_err());
        let j = serde_json::to_string(&ExpressionId::E4pos).unwrap();
        assert_eq!(j, "\"E4pos\"");
        let back: ExpressionId = serde_json::from_str(&j).unwrap();
        assert_eq!(back, ExpressionId::E4pos);
    }
}
