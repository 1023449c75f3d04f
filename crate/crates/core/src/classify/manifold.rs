//! Connected-sum normal forms of the 3-manifolds the classifier talks about.
//!
//! Descriptions use a small grammar: `#`-separated summand tokens
//! `S1xS2 | TwS1xS2 | Lens(<tag>) | NOr1(<tag>)`, whitespace-insensitive,
//! with the empty string standing for the 3-sphere. Any other well-formed
//! prime token (`RP2xS1`, `T3`, `Hyp(m003)`, ...) is accepted by the parser
//! as a foreign summand so callers can answer "no" rather than fail.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A prime summand that can occur when every level component is a sphere,
/// torus or Klein bottle.
///
/// Lens spaces and the other non-orientable degree-1 manifolds carry opaque
/// tags; Reeb data never determines their parameters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Summand {
    S1xS2,
    /// The non-trivial 2-sphere bundle over the circle.
    TwistedS1xS2,
    Lens(String),
    /// A non-orientable manifold of Heegaard degree 1 other than the
    /// twisted bundle (or not known to be it).
    NonOrientableDeg1(String),
}

impl Summand {
    /// Whether this summand can fill a non-orientable degree-1 slot.
    pub fn is_non_orientable_capable(&self) -> bool {
        matches!(self, Summand::TwistedS1xS2 | Summand::NonOrientableDeg1(_))
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::S1xS2 => f.write_str("S1xS2"),
            Summand::TwistedS1xS2 => f.write_str("TwS1xS2"),
            Summand::Lens(t) => write!(f, "Lens({t})"),
            Summand::NonOrientableDeg1(t) => write!(f, "NOr1({t})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptionError {
    #[error("empty summand in `{0}`")]
    EmptySummand(String),
    #[error("malformed summand token `{0}`")]
    Malformed(String),
    #[error("summand `{0}` is outside the S1xS2 / TwS1xS2 / Lens / NOr1 family")]
    Foreign(String),
}

/// One `#`-separated piece of a manifold description.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimeToken {
    Known(Summand),
    Foreign(String),
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_tag(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_.,:;'-/+".contains(c))
}

fn parse_token(token: &str) -> Result<PrimeToken, DescriptionError> {
    let malformed = || DescriptionError::Malformed(token.to_string());
    let (name, tag) = match token.find('(') {
        Some(open) => {
            let rest = token[open + 1..].strip_suffix(')').ok_or_else(malformed)?;
            (&token[..open], Some(rest))
        }
        None => (token, None),
    };
    if !is_name(name) || tag.is_some_and(|t| !is_tag(t)) {
        return Err(malformed());
    }
    let known = match (name, tag) {
        ("S1xS2", None) => Summand::S1xS2,
        ("TwS1xS2", None) => Summand::TwistedS1xS2,
        ("Lens", Some(t)) => Summand::Lens(t.to_string()),
        ("NOr1", Some(t)) => Summand::NonOrientableDeg1(t.to_string()),
        ("S1xS2" | "TwS1xS2" | "Lens" | "NOr1", _) => return Err(malformed()),
        _ => return Ok(PrimeToken::Foreign(token.to_string())),
    };
    Ok(PrimeToken::Known(known))
}

/// Parses a general connected-sum description into prime tokens.
pub fn parse_description(text: &str) -> Result<Vec<PrimeToken>, DescriptionError> {
    let squeezed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if squeezed.is_empty() {
        return Ok(Vec::new());
    }
    let mut tokens = squeezed
        .split('#')
        .map(|piece| if piece.is_empty() { Err(DescriptionError::EmptySummand(text.to_string())) } else { parse_token(piece) })
        .collect::<Result<Vec<_>, _>>()?;
    tokens.sort();
    Ok(tokens)
}

/// A connected sum of [`Summand`]s. The empty sum is the 3-sphere.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ManifoldClass {
    summands: Vec<Summand>,
}

/// Summand counts by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SummandCounts {
    pub sphere_bundles: usize,
    pub twisted: usize,
    pub lens: usize,
    pub non_orientable_other: usize,
}

impl ManifoldClass {
    pub fn sphere() -> Self {
        ManifoldClass::default()
    }

    pub fn new(summands: impl IntoIterator<Item = Summand>) -> Self {
        let mut summands: Vec<Summand> = summands.into_iter().collect();
        summands.sort();
        ManifoldClass { summands }
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn is_sphere(&self) -> bool {
        self.summands.is_empty()
    }

    /// Orientable iff no summand is non-orientable.
    pub fn is_orientable(&self) -> bool {
        !self.summands.iter().any(Summand::is_non_orientable_capable)
    }

    pub fn connected_sum(&self, other: &ManifoldClass) -> ManifoldClass {
        ManifoldClass::new(self.summands.iter().chain(&other.summands).cloned())
    }

    pub fn counts(&self) -> SummandCounts {
        let mut c = SummandCounts::default();
        for s in &self.summands {
            match s {
                Summand::S1xS2 => c.sphere_bundles += 1,
                Summand::TwistedS1xS2 => c.twisted += 1,
                Summand::Lens(_) => c.lens += 1,
                Summand::NonOrientableDeg1(_) => c.non_orientable_other += 1,
            }
        }
        c
    }
}

impl FromIterator<Summand> for ManifoldClass {
    fn from_iter<I: IntoIterator<Item = Summand>>(iter: I) -> Self {
        ManifoldClass::new(iter)
    }
}

impl fmt::Display for ManifoldClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str(" # ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for ManifoldClass {
    type Err = DescriptionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_description(s)?
            .into_iter()
            .map(|t| match t {
                PrimeToken::Known(s) => Ok(s),
                PrimeToken::Foreign(name) => Err(DescriptionError::Foreign(name)),
            })
            .collect()
    }
}
