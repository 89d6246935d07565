//! Focus singularities `F_n` and their finite-order automorphisms.
//!
//! `F_n` is kept as pure cyclic combinatorics: rank-0 points `x_0, …, x_{n-1}`
//! around a cycle, with the two-dimensional orbit `c_j` joining `x_j` to
//! `x_{j+1 mod n}`. A finite-order automorphism is a shift of that cycle
//! combined with a flow along the periodic integral by a rational fraction of
//! its period. Both parts add under composition, so the group is abelian.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};

/// A flow angle as an exact fraction of the full period, in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Angle(Ratio<u64>);

impl Angle {
    pub const ZERO: Angle = Angle(Ratio::new_raw(0, 1));

    pub fn new(numer: u64, denom: u64) -> Result<Angle> {
        if denom == 0 {
            return Err(AtlasError::MalformedAngle(format!("{numer}/{denom}")));
        }
        let r = Ratio::new(numer, denom);
        if r >= Ratio::from_integer(1) {
            return Err(AtlasError::AngleOutOfRange {
                angle: format!("{numer}/{denom}"),
            });
        }
        Ok(Angle(r))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    /// Sum modulo one full period.
    pub fn plus(self, other: Angle) -> Angle {
        Angle((self.0 + other.0).fract())
    }

    pub fn negated(self) -> Angle {
        if self.is_zero() {
            self
        } else {
            Angle(Ratio::from_integer(1) - self.0)
        }
    }

    pub fn times(self, k: u64) -> Angle {
        Angle((self.0 * Ratio::from_integer(k)).fract())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Angle {
    type Err = AtlasError;

    /// Accepts `"p/q"`, or a bare integer (only `"0"` is in range).
    fn from_str(s: &str) -> Result<Angle> {
        let bad = || AtlasError::MalformedAngle(s.to_string());
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        Angle::new(p, q)
    }
}

impl Serialize for Angle {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FocusSingularity {
    #[serde(rename = "focus_complexity")]
    n: usize,
}

impl FocusSingularity {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(AtlasError::EmptyFocus);
        }
        Ok(FocusSingularity { n })
    }

    pub fn complexity(&self) -> usize {
        self.n
    }
}

impl fmt::Display for FocusSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.n)
    }
}

/// `x_q ↦ x_{q+shift}` composed with the flow by `angle`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FocusAutomorphism {
    n: usize,
    shift: usize,
    angle: Angle,
}

pub fn shift_automorphism(n: usize, shift: usize, angle: Angle) -> Result<FocusAutomorphism> {
    if n == 0 {
        return Err(AtlasError::EmptyFocus);
    }
    if shift >= n {
        return Err(AtlasError::ShiftOutOfRange { shift, n });
    }
    Ok(FocusAutomorphism { n, shift, angle })
}

impl FocusAutomorphism {
    pub fn identity(n: usize) -> Result<Self> {
        shift_automorphism(n, 0, Angle::ZERO)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn angle(&self) -> Angle {
        self.angle
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.angle.is_zero()
    }

    pub fn compose(&self, other: &FocusAutomorphism) -> FocusAutomorphism {
        assert_eq!(
            self.n, other.n,
            "composing automorphisms of different focus singularities"
        );
        FocusAutomorphism {
            n: self.n,
            shift: (self.shift + other.shift) % self.n,
            angle: self.angle.plus(other.angle),
        }
    }

    pub fn inverse(&self) -> FocusAutomorphism {
        FocusAutomorphism {
            n: self.n,
            shift: (self.n - self.shift) % self.n,
            angle: self.angle.negated(),
        }
    }

    pub fn pow(&self, k: u64) -> FocusAutomorphism {
        FocusAutomorphism {
            n: self.n,
            shift: ((self.shift as u64 * k) % self.n as u64) as usize,
            angle: self.angle.times(k),
        }
    }

    /// Order of the shift part alone: `n / gcd(n, shift)`.
    pub fn shift_order(&self) -> usize {
        self.n / self.n.gcd(&self.shift)
    }

    /// `lcm(n / gcd(n, shift), denominator(angle))`.
    pub fn order(&self) -> usize {
        self.shift_order().lcm(&(self.angle.denom() as usize))
    }

    /// The same automorphism seen through the reflection reversing the cyclic
    /// order of the rank-0 points.
    pub fn reflected(&self) -> FocusAutomorphism {
        FocusAutomorphism {
            n: self.n,
            shift: (self.n - self.shift) % self.n,
            angle: self.angle,
        }
    }

    /// Image of rank-0 point `q`.
    pub fn apply(&self, q: usize) -> usize {
        (q + self.shift) % self.n
    }

    pub fn to_json(&self) -> FocusAutomorphismJson {
        FocusAutomorphismJson {
            shift: self.shift,
            angle: self.angle,
        }
    }
}

/// No nontrivial power of `a` fixes a rank-0 point, i.e. every nontrivial
/// power has nonzero shift.
pub fn is_free_on_rank0(a: &FocusAutomorphism) -> bool {
    a.shift_order() == a.order()
}

/// Number of orbits of the shift parts of `group` on the `n` rank-0 points.
pub fn rank0_orbit_count(n: usize, group: &[FocusAutomorphism]) -> Result<usize> {
    if n == 0 {
        return Err(AtlasError::EmptyFocus);
    }
    if let Some(a) = group.iter().find(|a| a.n != n) {
        return Err(AtlasError::DegreeMismatch {
            expected: n,
            found: a.n,
        });
    }
    for a in group {
        for b in group {
            if !group.contains(&a.compose(b)) {
                return Err(AtlasError::NotClosed);
            }
        }
    }
    Ok(group.iter().fold(n, |g, a| g.gcd(&a.shift)))
}

/// `F_n / Z_k` for the free shift group of order `k`.
pub fn quotient_focus(n: usize, k: usize) -> Result<FocusSingularity> {
    if n == 0 {
        return Err(AtlasError::EmptyFocus);
    }
    if k == 0 || !n.is_multiple_of(k) {
        return Err(AtlasError::NotADivisor { k, n });
    }
    FocusSingularity::new(n / k)
}

/// `{"shift": d, "angle": "p/q"}`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocusAutomorphismJson {
    pub shift: usize,
    pub angle: Angle,
}
