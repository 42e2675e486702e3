use std::fmt;
use std::str::FromStr;

use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactPoint {
    pub x: Rational,
    pub y: Rational,
}

impl ExactPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        ExactPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        ExactPoint::new(x.into(), y.into())
    }

    pub fn sub(&self, other: &ExactPoint) -> (Rational, Rational) {
        (&self.x - &other.x, &self.y - &other.y)
    }

    pub fn offset(&self, dx: &Rational, dy: &Rational) -> ExactPoint {
        ExactPoint::new(&self.x + dx, &self.y + dy)
    }

    /// Squared Euclidean distance.
    pub fn dist2(&self, other: &ExactPoint) -> Rational {
        let (dx, dy) = self.sub(other);
        dx.square() + dy.square()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, format!("point must be parenthesised: {t:?}")))?;
        let (x, y) = inner
            .split_once(',')
            .ok_or_else(|| Error::parse(0, format!("point needs two coordinates: {t:?}")))?;
        Ok(ExactPoint::new(x.parse()?, y.parse()?))
    }
}

/// A closed segment with distinct endpoints.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    p: ExactPoint,
    q: ExactPoint,
}

impl Segment {
    pub fn new(p: ExactPoint, q: ExactPoint) -> Result<Self> {
        if p == q {
            return Err(Error::DegenerateSegment(p.to_string()));
        }
        Ok(Segment { p, q })
    }

    pub fn p(&self) -> &ExactPoint {
        &self.p
    }

    pub fn q(&self) -> &ExactPoint {
        &self.q
    }

    pub fn direction(&self) -> (Rational, Rational) {
        self.q.sub(&self.p)
    }

    pub fn reversed(&self) -> Segment {
        Segment {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    /// Point at parameter `t`, where `t = 0` is `p` and `t = 1` is `q`.
    pub fn point_at(&self, t: &Rational) -> ExactPoint {
        let (dx, dy) = self.direction();
        ExactPoint::new(&self.p.x + &(t * &dx), &self.p.y + &(t * &dy))
    }

    /// Parameter of a point known to lie on the supporting line.
    pub fn param_of(&self, pt: &ExactPoint) -> Rational {
        let (dx, dy) = self.direction();
        if !dx.is_zero() {
            (&pt.x - &self.p.x) / dx
        } else {
            (&pt.y - &self.p.y) / dy
        }
    }

    /// The supporting line as a ray from `p` towards `q`.
    pub fn supporting_ray(&self) -> Ray {
        let (dx, dy) = self.direction();
        Ray {
            origin: self.p.clone(),
            dx,
            dy,
        }
    }

    pub fn len2(&self) -> Rational {
        self.p.dist2(&self.q)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.p, self.q)
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.p, self.q)
    }
}

/// Half-line `origin + t·(dx, dy)`, `t ≥ 0`. Operations that work on
/// supporting lines reuse this type and ignore the sign restriction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ray {
    origin: ExactPoint,
    dx: Rational,
    dy: Rational,
}

impl Ray {
    pub fn new(origin: ExactPoint, dx: Rational, dy: Rational) -> Result<Self> {
        if dx.is_zero() && dy.is_zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(Ray { origin, dx, dy })
    }

    /// The ray from `from` passing through `through`.
    pub fn through(from: ExactPoint, through: &ExactPoint) -> Result<Self> {
        let (dx, dy) = through.sub(&from);
        Ray::new(from, dx, dy)
    }

    pub fn origin(&self) -> &ExactPoint {
        &self.origin
    }

    pub fn dx(&self) -> &Rational {
        &self.dx
    }

    pub fn dy(&self) -> &Rational {
        &self.dy
    }

    /// Same origin and supporting line, opposite direction.
    pub fn complement(&self) -> Ray {
        Ray {
            origin: self.origin.clone(),
            dx: -&self.dx,
            dy: -&self.dy,
        }
    }

    pub fn point_at(&self, t: &Rational) -> ExactPoint {
        ExactPoint::new(&self.origin.x + &(t * &self.dx), &self.origin.y + &(t * &self.dy))
    }

    /// Parameter of a point known to lie on the supporting line.
    pub fn param_of(&self, pt: &ExactPoint) -> Rational {
        if !self.dx.is_zero() {
            (&pt.x - &self.origin.x) / &self.dx
        } else {
            (&pt.y - &self.origin.y) / &self.dy
        }
    }

    /// The supporting line evaluated at height `y`; `None` for horizontal lines.
    pub fn x_at_y(&self, y: &Rational) -> Option<Rational> {
        if self.dy.is_zero() {
            return None;
        }
        let t = (y - &self.origin.y) / &self.dy;
        Some(&self.origin.x + &(t * &self.dx))
    }

    /// The supporting line evaluated at abscissa `x`; `None` for vertical lines.
    pub fn y_at_x(&self, x: &Rational) -> Option<Rational> {
        if self.dx.is_zero() {
            return None;
        }
        let t = (x - &self.origin.x) / &self.dx;
        Some(&self.origin.y + &(t * &self.dy))
    }

    /// Slope `dy/dx`; `None` for vertical rays.
    pub fn slope(&self) -> Option<Rational> {
        self.dy.checked_div(&self.dx).ok()
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "origin={} dir=({}, {})", self.origin, self.dx, self.dy)
    }
}

/// Parses a run of parenthesised points, e.g. `"(1, 2) (3/4, 5)"`.
pub fn parse_points(s: &str) -> Result<Vec<ExactPoint>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let end = rest
            .find(')')
            .ok_or_else(|| Error::parse(0, format!("unterminated point in {s:?}")))?;
        out.push(rest[..=end].parse()?);
        rest = rest[end + 1..].trim_start();
    }
    Ok(out)
}
