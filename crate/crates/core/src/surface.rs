//! Closed connected surfaces in normal form and the surgery rules that act
//! on them.
//!
//! Every regular level component of a Morse function on a 3-manifold is a
//! closed surface. The simulator only tracks its homeomorphism type, so this
//! module is the whole calculus: connected sum (a 1-handle between two
//! components), self-tubing (a 1-handle with both feet on one component) and
//! the two inverse 2-handle moves along separating or non-separating
//! two-sided circles.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Normal form of a closed connected surface.
///
/// Orientable surfaces are stored by genus, non-orientable ones by crosscap
/// count (always at least 1). Dyck's relation is applied eagerly, so two
/// values are homeomorphic iff they are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SurfaceType {
    Orientable(u32),
    NonOrientable(u32),
}

/// Orientation behaviour of a self-tube 1-handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Framing {
    Preserve,
    Reverse,
}

impl Framing {
    pub const ALL: [Framing; 2] = [Framing::Preserve, Framing::Reverse];

    pub fn token(self) -> &'static str {
        match self {
            Framing::Preserve => "preserve",
            Framing::Reverse => "reverse",
        }
    }
}

impl FromStr for Framing {
    type Err = SurfaceParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "preserve" => Ok(Framing::Preserve),
            "reverse" => Ok(Framing::Reverse),
            _ => Err(SurfaceParseError::Framing(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceParseError {
    #[error("unknown surface token `{0}`")]
    Token(String),
    #[error("unknown framing `{0}` (expected preserve or reverse)")]
    Framing(String),
}

impl SurfaceType {
    pub const SPHERE: SurfaceType = SurfaceType::Orientable(0);
    pub const TORUS: SurfaceType = SurfaceType::Orientable(1);
    pub const PROJECTIVE_PLANE: SurfaceType = SurfaceType::NonOrientable(1);
    pub const KLEIN: SurfaceType = SurfaceType::NonOrientable(2);

    /// Builds a non-orientable surface, returning `None` for zero crosscaps.
    pub fn non_orientable(crosscaps: u32) -> Option<SurfaceType> {
        (crosscaps >= 1).then_some(SurfaceType::NonOrientable(crosscaps))
    }

    pub fn euler_char(self) -> i64 {
        match self {
            SurfaceType::Orientable(g) => 2 - 2 * i64::from(g),
            SurfaceType::NonOrientable(k) => 2 - i64::from(k),
        }
    }

    pub fn is_orientable(self) -> bool {
        matches!(self, SurfaceType::Orientable(_))
    }

    pub fn is_sphere(self) -> bool {
        self == SurfaceType::SPHERE
    }

    /// Crosscap count of the surface, treating genus `g` as `2g` crosscaps.
    /// Only meaningful once the result is known to be non-orientable.
    fn crosscap_weight(self) -> u32 {
        match self {
            SurfaceType::Orientable(g) => 2 * g,
            SurfaceType::NonOrientable(k) => k,
        }
    }

    /// Connected sum of two surfaces.
    pub fn connected_sum(self, other: SurfaceType) -> SurfaceType {
        match (self, other) {
            (SurfaceType::Orientable(a), SurfaceType::Orientable(b)) => SurfaceType::Orientable(a + b),
            _ => SurfaceType::NonOrientable(self.crosscap_weight() + other.crosscap_weight()),
        }
    }

    /// A 1-handle joining two distinct components: the tube between them is a
    /// connected sum.
    pub fn merge_components(self, other: SurfaceType) -> SurfaceType {
        self.connected_sum(other)
    }

    /// A 1-handle with both feet on this component.
    ///
    /// A reversing framing on an orientable surface adds a Klein-bottle
    /// handle, which by Dyck's relation is two crosscaps per existing handle
    /// plus two.
    pub fn self_tube(self, framing: Framing) -> SurfaceType {
        match (self, framing) {
            (SurfaceType::Orientable(g), Framing::Preserve) => SurfaceType::Orientable(g + 1),
            (SurfaceType::Orientable(g), Framing::Reverse) => SurfaceType::NonOrientable(2 * g + 2),
            (SurfaceType::NonOrientable(k), _) => SurfaceType::NonOrientable(k + 2),
        }
    }

    /// Every unordered pair `(a, b)` with `a # b == self`, listed with
    /// `a <= b`. These are the possible results of a 2-handle along a
    /// separating two-sided circle.
    pub fn split_outcomes(self) -> BTreeSet<(SurfaceType, SurfaceType)> {
        let mut out = BTreeSet::new();
        match self {
            SurfaceType::Orientable(g) => {
                for a in 0..=g / 2 {
                    out.insert((SurfaceType::Orientable(a), SurfaceType::Orientable(g - a)));
                }
            }
            SurfaceType::NonOrientable(k) => {
                // orientable piece of genus a takes 2a crosscaps
                let mut a = 0;
                while 2 * a < k {
                    out.insert((SurfaceType::Orientable(a), SurfaceType::NonOrientable(k - 2 * a)));
                    a += 1;
                }
                for a in 1..=k / 2 {
                    out.insert((SurfaceType::NonOrientable(a), SurfaceType::NonOrientable(k - a)));
                }
            }
        }
        out
    }

    /// Every surface that self-tubes into `self` under some framing: the
    /// results of a 2-handle along a non-separating two-sided circle.
    pub fn detube_outcomes(self) -> BTreeSet<SurfaceType> {
        let mut out = BTreeSet::new();
        match self {
            SurfaceType::Orientable(g) => {
                if g >= 1 {
                    out.insert(SurfaceType::Orientable(g - 1));
                }
            }
            SurfaceType::NonOrientable(k) => {
                if k >= 2 && k % 2 == 0 {
                    out.insert(SurfaceType::Orientable((k - 2) / 2));
                }
                if k >= 3 {
                    out.insert(SurfaceType::NonOrientable(k - 2));
                }
            }
        }
        out
    }

    /// All canonical surfaces with `|χ| <= bound`.
    pub fn all_with_euler_bound(bound: i64) -> Vec<SurfaceType> {
        let mut out = Vec::new();
        let mut g = 0u32;
        while (2 - 2 * i64::from(g)).abs() <= bound {
            out.push(SurfaceType::Orientable(g));
            g += 1;
        }
        let mut k = 1u32;
        while (2 - i64::from(k)).abs() <= bound {
            out.push(SurfaceType::NonOrientable(k));
            k += 1;
        }
        out
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SurfaceType::Orientable(0) => f.write_str("S2"),
            SurfaceType::Orientable(1) => f.write_str("T2"),
            SurfaceType::NonOrientable(1) => f.write_str("RP2"),
            SurfaceType::NonOrientable(2) => f.write_str("K2"),
            SurfaceType::Orientable(g) => write!(f, "O{g}"),
            SurfaceType::NonOrientable(k) => write!(f, "N{k}"),
        }
    }
}

impl FromStr for SurfaceType {
    type Err = SurfaceParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SurfaceParseError::Token(s.to_string());
        match s {
            "S2" => return Ok(SurfaceType::SPHERE),
            "T2" => return Ok(SurfaceType::TORUS),
            "K2" => return Ok(SurfaceType::KLEIN),
            "RP2" => return Ok(SurfaceType::PROJECTIVE_PLANE),
            _ => {}
        }
        let (kind, digits) = s.split_at(s.len().min(1));
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let n: u32 = digits.parse().map_err(|_| bad())?;
        match kind {
            "O" => Ok(SurfaceType::Orientable(n)),
            "N" => SurfaceType::non_orientable(n).ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}
