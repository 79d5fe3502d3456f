use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::span::Span;
use super::DynamicsError;
use crate::error::ParseError;
use crate::rational::{format_rational, frac, parse_rational};

/// A discrete-time map on the unit interval (or, for the baker map, the unit
/// square).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MapSpec {
    /// `x -> 2x mod 1`.
    Doubling,
    /// `x -> 1 - |2x - 1|`.
    Tent,
    /// `x -> 4x(1 - x)`.
    Logistic4,
    /// `(x, y) -> (2x mod 1, (y + floor(2x)) / 2)`.
    Baker2D,
    /// `x -> x + angle mod 1`, the integrable control. `angle` in `[0, 1)`.
    RationalRotation(BigRational),
}

/// A point of the map's phase space. `y` is present exactly for the baker map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub x: BigRational,
    pub y: Option<BigRational>,
}

impl Point {
    pub fn line(x: BigRational) -> Self {
        Point { x, y: None }
    }

    pub fn square(x: BigRational, y: BigRational) -> Self {
        Point { x, y: Some(y) }
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl MapSpec {
    pub fn rotation(num: i64, den: i64) -> Result<Self, DynamicsError> {
        if den == 0 {
            return Err(DynamicsError::InvalidMap(format!("rotation({num}/0)")));
        }
        Self::rotation_by(BigRational::new(num.into(), den.into()))
    }

    pub fn rotation_by(angle: BigRational) -> Result<Self, DynamicsError> {
        if angle < BigRational::zero() || angle >= BigRational::one() {
            return Err(DynamicsError::InvalidMap(format!(
                "rotation angle {} is outside [0, 1)",
                format_rational(&angle)
            )));
        }
        Ok(MapSpec::RationalRotation(angle))
    }

    pub fn is_two_dimensional(&self) -> bool {
        matches!(self, MapSpec::Baker2D)
    }

    pub fn is_integrable(&self) -> bool {
        matches!(self, MapSpec::RationalRotation(_))
    }

    /// The chaotic maps of the catalog plus a few rotations.
    pub fn catalog() -> Vec<MapSpec> {
        vec![
            MapSpec::Doubling,
            MapSpec::Tent,
            MapSpec::Logistic4,
            MapSpec::Baker2D,
            MapSpec::RationalRotation(BigRational::new(1.into(), 4.into())),
            MapSpec::RationalRotation(BigRational::new(1.into(), 3.into())),
        ]
    }

    /// Monotone pieces of the x-coordinate map. Domains partition `[0, 1]`.
    pub(crate) fn pieces(&self) -> Vec<Piece> {
        let h = half();
        let lower = Span::half_open(BigRational::zero(), h.clone());
        match self {
            MapSpec::Doubling | MapSpec::Baker2D => vec![
                Piece::affine(lower, int(2), BigRational::zero()),
                Piece::affine(Span::half_open(h, BigRational::one()), int(2), int(-1)),
                Piece::constant(BigRational::one(), BigRational::zero()),
            ],
            MapSpec::Tent => vec![
                Piece::affine(lower, int(2), BigRational::zero()),
                Piece::affine(Span::closed(h, BigRational::one()), int(-2), int(2)),
            ],
            MapSpec::Logistic4 => vec![
                Piece::logistic(lower, true),
                Piece::logistic(Span::closed(h, BigRational::one()), false),
            ],
            MapSpec::RationalRotation(a) if a.is_zero() => vec![
                Piece::affine(Span::half_open(BigRational::zero(), BigRational::one()), int(1), BigRational::zero()),
                Piece::constant(BigRational::one(), BigRational::zero()),
            ],
            MapSpec::RationalRotation(a) => {
                let cut = BigRational::one() - a;
                vec![
                    Piece::affine(Span::half_open(BigRational::zero(), cut.clone()), int(1), a.clone()),
                    Piece::affine(Span::half_open(cut, BigRational::one()), int(1), a - int(1)),
                    Piece::constant(BigRational::one(), a.clone()),
                ]
            }
        }
    }

    /// Images of `region` under the x-coordinate map, one per monotone piece
    /// the region meets.
    pub(crate) fn image(&self, region: &Span) -> Vec<Span> {
        self.pieces()
            .iter()
            .filter_map(|p| p.image(region))
            .collect()
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Doubling => f.write_str("doubling"),
            MapSpec::Tent => f.write_str("tent"),
            MapSpec::Logistic4 => f.write_str("logistic4"),
            MapSpec::Baker2D => f.write_str("baker"),
            MapSpec::RationalRotation(a) => write!(f, "rotation({})", format_rational(a)),
        }
    }
}

impl FromStr for MapSpec {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "doubling" | "bernoulli" => Ok(MapSpec::Doubling),
            "tent" => Ok(MapSpec::Tent),
            "logistic4" | "logistic" => Ok(MapSpec::Logistic4),
            "baker" | "baker2d" => Ok(MapSpec::Baker2D),
            _ => {
                let inner = t
                    .strip_prefix("rotation(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| DynamicsError::InvalidMap(format!("unknown map `{s}`")))?;
                let angle = parse_rational(inner).map_err(|e: ParseError| {
                    DynamicsError::InvalidMap(format!("rotation angle: {}", e.message))
                })?;
                MapSpec::rotation_by(angle)
            }
        }
    }
}

impl Serialize for MapSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MapSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
enum PieceFn {
    /// `slope * x + offset`.
    Affine { slope: BigRational, offset: BigRational },
    /// `4x(1 - x)`, increasing on the left half and decreasing on the right.
    Logistic { increasing: bool },
}

#[derive(Clone, Debug)]
pub(crate) struct Piece {
    domain: Span,
    func: PieceFn,
}

impl Piece {
    fn affine(domain: Span, slope: BigRational, offset: BigRational) -> Self {
        Piece {
            domain,
            func: PieceFn::Affine { slope, offset },
        }
    }

    fn constant(at: BigRational, value: BigRational) -> Self {
        Piece::affine(Span::point(at), BigRational::zero(), value)
    }

    fn logistic(domain: Span, increasing: bool) -> Self {
        Piece {
            domain,
            func: PieceFn::Logistic { increasing },
        }
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        match &self.func {
            PieceFn::Affine { slope, offset } => slope * x + offset,
            PieceFn::Logistic { .. } => int(4) * x * (BigRational::one() - x),
        }
    }

    fn increasing(&self) -> bool {
        match &self.func {
            PieceFn::Affine { slope, .. } => !slope.is_negative(),
            PieceFn::Logistic { increasing } => *increasing,
        }
    }

    fn image(&self, region: &Span) -> Option<Span> {
        let part = region.intersect(&self.domain)?;
        let a = self.eval(&part.lo);
        let b = self.eval(&part.hi);
        Some(if self.increasing() {
            Span::new(a, b, part.lo_closed, part.hi_closed)
        } else {
            Span::new(b, a, part.hi_closed, part.lo_closed)
        })
    }
}

/// Exact image of `p` under `map`.
///
/// One-dimensional maps accept `x` in `[0, 1]`: the logistic and tent maps
/// send 1/2 to the endpoint 1, which every map then sends on (to 0, or to
/// the angle for a rotation). The baker map requires a point of `[0, 1)^2`.
pub fn step_exact(map: &MapSpec, p: &Point) -> Result<Point, DynamicsError> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let in_closed = |v: &BigRational| v >= &zero && v <= &one;
    let in_half_open = |v: &BigRational| v >= &zero && v < &one;
    let x = &p.x;
    match map {
        MapSpec::Baker2D => {
            let y = p.y.as_ref().ok_or_else(|| {
                DynamicsError::Domain("the baker map acts on points (x, y)".into())
            })?;
            if !in_half_open(x) || !in_half_open(y) {
                return Err(DynamicsError::Domain(format!(
                    "({}, {}) is outside the unit square",
                    format_rational(x),
                    format_rational(y)
                )));
            }
            let doubled = int(2) * x;
            let lead = doubled.floor();
            Ok(Point::square(&doubled - &lead, (y + lead) / int(2)))
        }
        _ => {
            if p.y.is_some() {
                return Err(DynamicsError::Domain(format!("{map} acts on a single coordinate")));
            }
            if !in_closed(x) {
                return Err(DynamicsError::Domain(format!(
                    "{} is outside [0, 1]",
                    format_rational(x)
                )));
            }
            let image = match map {
                MapSpec::Doubling => frac(&(int(2) * x)),
                MapSpec::Tent => &one - (int(2) * x - &one).abs(),
                MapSpec::Logistic4 => int(4) * x * (&one - x),
                MapSpec::RationalRotation(a) => frac(&(x + a)),
                MapSpec::Baker2D => unreachable!(),
            };
            Ok(Point::line(image))
        }
    }
}

/// Leading `m` binary digits of `x` in `[0, 1]`, most significant first. The
/// endpoint 1 reads as all ones (`0.111...`).
pub fn leading_bits(x: &BigRational, m: u32) -> Vec<bool> {
    let scaled = x * BigRational::from_integer(BigInt::one() << m);
    let max = (BigInt::one() << m) - 1;
    let cell = scaled.floor().to_integer().min(max).max(BigInt::zero());
    cell_bits(&cell, m)
}

pub(crate) fn cell_bits(cell: &BigInt, m: u32) -> Vec<bool> {
    let c: BigUint = cell.to_biguint().expect("cell index is non-negative");
    (0..m).rev().map(|i| c.bit(i as u64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn step(map: &MapSpec, x: BigRational) -> BigRational {
        step_exact(map, &Point::line(x)).unwrap().x
    }

    #[test]
    fn doubling_drops_leading_bit() {
        assert_eq!(step(&MapSpec::Doubling, q(5, 8)), q(1, 4));
    }

    #[test]
    fn logistic_half_reaches_endpoint_then_zero() {
        assert_eq!(step(&MapSpec::Logistic4, q(1, 2)), q(1, 1));
        assert_eq!(step(&MapSpec::Logistic4, q(1, 1)), q(0, 1));
        assert_eq!(leading_bits(&q(1, 1), 3), vec![true, true, true]);
    }

    #[test]
    fn tent_three_eighths() {
        // 1 - |2 * 3/8 - 1| = 1 - 1/4
        assert_eq!(step(&MapSpec::Tent, q(3, 8)), q(3, 4));
        assert_eq!(step(&MapSpec::Tent, q(1, 2)), q(1, 1));
    }

    #[test]
    fn rotation_wraps() {
        let r = MapSpec::rotation(3, 4).unwrap();
        assert_eq!(step(&r, q(1, 2)), q(1, 4));
        assert_eq!(step(&r, q(1, 1)), q(3, 4));
        assert!(MapSpec::rotation(1, 1).is_err());
    }

    #[test]
    fn baker_moves_lead_bit_to_y() {
        let p = step_exact(&MapSpec::Baker2D, &Point::square(q(3, 4), q(1, 2))).unwrap();
        assert_eq!(p, Point::square(q(1, 2), q(3, 4)));
        assert!(step_exact(&MapSpec::Baker2D, &Point::line(q(1, 4))).is_err());
        assert!(step_exact(&MapSpec::Doubling, &Point::square(q(1, 4), q(0, 1))).is_err());
    }

    #[test]
    fn domain_errors() {
        assert!(step_exact(&MapSpec::Tent, &Point::line(q(3, 2))).is_err());
        assert!(step_exact(&MapSpec::Doubling, &Point::line(q(-1, 2))).is_err());
    }

    #[test]
    fn pieces_agree_with_exact_step() {
        for map in MapSpec::catalog() {
            for k in 0..=64 {
                let x = q(k, 64);
                if map.is_two_dimensional() && k == 64 {
                    continue;
                }
                let images = map.image(&Span::point(x.clone()));
                assert_eq!(images.len(), 1, "{map} at {x}");
                let expected = match map {
                    MapSpec::Baker2D => step_exact(&map, &Point::square(x.clone(), q(0, 1))).unwrap().x,
                    _ => step(&map, x.clone()),
                };
                assert_eq!(images[0], Span::point(expected), "{map} at {x}");
            }
        }
    }

    #[test]
    fn map_names_roundtrip() {
        for map in MapSpec::catalog() {
            assert_eq!(map.to_string().parse::<MapSpec>().unwrap(), map);
        }
        assert!("rotation(3/2)".parse::<MapSpec>().is_err());
        assert!("henon".parse::<MapSpec>().is_err());
    }
}
