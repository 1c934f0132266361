//! One-dimensional chaotic maps on the open unit interval.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Every emitted value is kept in `[EPSILON, 1 - EPSILON]` so the fixed
/// points at 0 and 1 cannot freeze a sequence.
pub const EPSILON: f64 = 1e-10;

/// Default starting value of every chaotic stream.
pub const DEFAULT_SEED_VALUE: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChaoticMapKind {
    Circle,
    GaussMouse,
    Logistic,
    Sine,
    Singer,
    Tent,
    Piecewise,
}

impl ChaoticMapKind {
    pub const ALL: [ChaoticMapKind; 7] = [
        Self::Circle,
        Self::GaussMouse,
        Self::Logistic,
        Self::Sine,
        Self::Singer,
        Self::Tent,
        Self::Piecewise,
    ];

    /// Lowercase command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Self::Circle => "circle",
            Self::GaussMouse => "gauss",
            Self::Logistic => "logistic",
            Self::Sine => "sine",
            Self::Singer => "singer",
            Self::Tent => "tent",
            Self::Piecewise => "piecewise",
        }
    }

    /// One application of the map, without the boundary guard.
    fn raw_next<T: Scalar>(self, x: T) -> T {
        let lit = T::lit;
        let pi = lit(std::f64::consts::PI);
        match self {
            Self::Circle => {
                let (a, b) = (lit(0.5), lit(0.2));
                let v = x + b - (a / (lit(2.0) * pi)) * (lit(2.0) * pi * x).sin();
                v - v.floor()
            }
            Self::GaussMouse => {
                if x == T::zero() {
                    T::one()
                } else {
                    let inv = T::one() / x;
                    inv - inv.floor()
                }
            }
            Self::Logistic => lit(4.0) * x * (T::one() - x),
            Self::Sine => (pi * x).sin(),
            Self::Singer => {
                let x2 = x * x;
                let x3 = x2 * x;
                let x4 = x3 * x;
                lit(1.07) * (lit(7.86) * x - lit(23.31) * x2 + lit(28.75) * x3 - lit(13.302875) * x4)
            }
            Self::Tent => {
                // x == 0.7 takes the first branch
                if x <= lit(0.7) {
                    x / lit(0.7)
                } else {
                    lit(10.0 / 3.0) * (T::one() - x)
                }
            }
            Self::Piecewise => {
                let p = lit(0.4);
                let half = lit(0.5);
                if x < p {
                    x / p
                } else if x < half {
                    (x - p) / (half - p)
                } else if x < T::one() - p {
                    (T::one() - p - x) / (half - p)
                } else {
                    (T::one() - x) / p
                }
            }
        }
    }

    /// One guarded application of the map.
    pub fn next<T: Scalar>(self, x: T) -> T {
        guard(self.raw_next(x))
    }
}

impl fmt::Display for ChaoticMapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChaoticMapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Lookup {
                kind: "chaotic map",
                name: s.to_string(),
                valid: Self::ALL.map(|k| k.name()).join(", "),
            })
    }
}

fn guard<T: Scalar>(v: T) -> T {
    // single precision cannot represent 1 - 1e-10
    let eps = T::lit(EPSILON).max(T::epsilon());
    if v.is_nan() {
        return T::lit(0.5);
    }
    v.max(eps).min(T::one() - eps)
}

/// Additive step of the restart sequence used when a stream stalls.
const RESTART_STEP: f64 = 0.732_050_807_568_877_2;

/// A chaotic stream: map kind plus current value in (0, 1).
///
/// The guarded maps have floating-point fixed points (the Gauss map sends
/// the lower guard to itself, since 1/1e-10 is an integer). A step that
/// returns its own input restarts the stream at `frac(0.7 + n * (sqrt 3 - 1))`
/// for the n-th restart, so a stream never stalls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaoticState<T> {
    kind: ChaoticMapKind,
    x: T,
    restarts: u32,
}

impl<T: Scalar> ChaoticState<T> {
    pub fn new(kind: ChaoticMapKind, x0: T) -> Result<Self> {
        if !(x0 > T::zero() && x0 < T::one()) {
            return Err(Error::domain(format!("chaotic start value {x0} outside (0, 1)")));
        }
        Ok(Self { kind, x: x0, restarts: 0 })
    }

    /// Stream starting at the default value 0.7.
    pub fn with_default_start(kind: ChaoticMapKind) -> Self {
        Self {
            kind,
            x: T::lit(DEFAULT_SEED_VALUE),
            restarts: 0,
        }
    }

    pub fn kind(&self) -> ChaoticMapKind {
        self.kind
    }

    pub fn value(&self) -> T {
        self.x
    }

    /// Number of stall restarts so far.
    pub fn restarts(&self) -> u32 {
        self.restarts
    }

    /// The successor state.
    pub fn next_state(&self) -> Self {
        let mut s = *self;
        s.advance();
        s
    }

    /// Advances in place and returns the new value.
    pub fn advance(&mut self) -> T {
        let next = self.kind.next(self.x);
        self.x = if next == self.x {
            self.restarts += 1;
            let r = DEFAULT_SEED_VALUE + f64::from(self.restarts) * RESTART_STEP;
            guard(T::lit(r - r.floor()))
        } else {
            next
        };
        self.x
    }
}

/// `n` successive values starting after `x0`.
pub fn chaotic_sequence<T: Scalar>(kind: ChaoticMapKind, x0: T, n: usize) -> Result<Vec<T>> {
    let mut state = ChaoticState::new(kind, x0)?;
    Ok((0..n).map(|_| state.advance()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn step(kind: ChaoticMapKind, x: f64) -> f64 {
        kind.next(x)
    }

    #[test]
    fn one_step_from_default_start() {
        use ChaoticMapKind::*;
        assert_abs_diff_eq!(step(Logistic, 0.7), 0.84, epsilon = 1e-12);
        assert_abs_diff_eq!(step(Sine, 0.7), 0.809_017, epsilon = 1e-6);
        assert_abs_diff_eq!(step(Piecewise, 0.7), 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(step(Singer, 0.7), 0.799_643, epsilon = 1e-6);
        assert_abs_diff_eq!(step(Circle, 0.7), 0.975_683, epsilon = 1e-6);
        assert_abs_diff_eq!(step(GaussMouse, 0.7), 0.428_571, epsilon = 1e-6);
    }

    #[test]
    fn logistic_boundary_is_guarded() {
        let seq = chaotic_sequence(ChaoticMapKind::Logistic, 0.5, 1).unwrap();
        assert_eq!(seq, vec![1.0 - EPSILON]);
    }

    #[test]
    fn tent_two_steps() {
        let seq = chaotic_sequence(ChaoticMapKind::Tent, 0.5, 2).unwrap();
        assert_abs_diff_eq!(seq[0], 0.714_286, epsilon = 1e-6);
        assert_abs_diff_eq!(seq[1], 0.952_381, epsilon = 1e-6);
        assert_eq!(step(ChaoticMapKind::Tent, 0.7), 1.0 - EPSILON);
    }

    #[test]
    fn single_element_sequence_is_one_step() {
        for kind in ChaoticMapKind::ALL {
            let seq = chaotic_sequence(kind, 0.3, 1).unwrap();
            assert_eq!(seq, vec![kind.next(0.3)]);
        }
    }

    #[test]
    fn start_outside_open_interval_rejected() {
        for x0 in [0.0, 1.0, -0.2, 1.5] {
            assert!(matches!(
                chaotic_sequence(ChaoticMapKind::Sine, x0, 3),
                Err(Error::Domain(_))
            ));
        }
    }

    #[test]
    fn gauss_integer_reciprocal_guarded() {
        // 1/0.5 = 2 has zero fractional part
        assert_eq!(step(ChaoticMapKind::GaussMouse, 0.5), EPSILON);
    }

    #[test]
    fn gauss_stream_does_not_stall() {
        // 0.7 -> 3/7 -> 1/3 -> guard, a fixed point of the guarded map
        let seq: Vec<f64> = chaotic_sequence(ChaoticMapKind::GaussMouse, 0.7, 200).unwrap();
        assert_eq!(seq[2], EPSILON);
        assert_ne!(seq[3], EPSILON);
        let distinct = seq.iter().filter(|&&v| v > 1e-3 && v < 1.0 - 1e-3).count();
        assert!(distinct > 150, "{distinct}");
        let mut s = ChaoticState::<f64>::with_default_start(ChaoticMapKind::GaussMouse);
        (0..4).for_each(|_| {
            s.advance();
        });
        assert_eq!(s.restarts(), 1);
    }

    #[test]
    fn names_round_trip() {
        for kind in ChaoticMapKind::ALL {
            assert_eq!(kind.name().parse::<ChaoticMapKind>().unwrap(), kind);
        }
        assert!("henon".parse::<ChaoticMapKind>().is_err());
    }

    #[test]
    fn logistic_is_not_constant() {
        let seq: Vec<f64> = chaotic_sequence(ChaoticMapKind::Logistic, 0.7, 100).unwrap();
        let distinct = seq.iter().filter(|&&v| (v - seq[0]).abs() > 1e-6).count();
        assert!(distinct > 50);
    }

    #[test]
    fn works_in_single_precision() {
        let v: f32 = ChaoticMapKind::Logistic.next(0.7f32);
        assert!((v - 0.84).abs() < 1e-6);
    }
}
