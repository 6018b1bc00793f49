//! Positions in meters and the Euclidean distances consumed by the channel
//! models: the direct range `r` and the two cascaded legs `r1` (transmitter to
//! IRS) and `r2` (IRS to receiver).

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in 3D space, coordinates in meters. Always finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    x: f64,
    y: f64,
    z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::invalid(format!(
                "point coordinates must be finite, got ({x}, {y}, {z})"
            )));
        }
        Ok(Point3 { x, y, z })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Euclidean norm of the point seen as a vector from the origin.
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// The point reached by walking `distance` meters from `self` along `dir`.
    pub fn advance(self, dir: Direction, distance: f64) -> Result<Point3> {
        let [dx, dy, dz] = dir.components();
        Point3::new(
            self.x + distance * dx,
            self.y + distance * dy,
            self.z + distance * dz,
        )
    }
}

impl TryFrom<[f64; 3]> for Point3 {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Point3::new(v[0], v[1], v[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        p.to_array()
    }
}

impl Add for Point3 {
    type Output = Point3;

    fn add(self, o: Point3) -> Point3 {
        Point3 {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }
}

impl Sub for Point3 {
    type Output = Point3;

    fn sub(self, o: Point3) -> Point3 {
        Point3 {
            x: self.x - o.x,
            y: self.y - o.y,
            z: self.z - o.z,
        }
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A unit vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Direction([f64; 3]);

impl Direction {
    pub const X: Direction = Direction([1.0, 0.0, 0.0]);

    /// Normalizes `v`; the zero vector has no direction.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let p = Point3::try_from(v)?;
        let n = p.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::invalid("direction vector must be nonzero"));
        }
        Ok(Direction([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Unit vector in the horizontal plane at `azimuth_deg` from +x.
    pub fn horizontal(azimuth_deg: f64) -> Result<Self> {
        let a = azimuth_deg.to_radians();
        Direction::new([a.cos(), a.sin(), 0.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }
}

impl TryFrom<[f64; 3]> for Direction {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Direction::new(v)
    }
}

impl From<Direction> for [f64; 3] {
    fn from(d: Direction) -> Self {
        d.0
    }
}

/// Euclidean distance between two points.
pub fn distance(a: Point3, b: Point3) -> f64 {
    (a - b).norm()
}

/// Transmitter, IRS and receiver positions with both cascade legs resolved.
///
/// Construction rejects coincident endpoints, so `r1 > 0` and `r2 > 0` hold
/// for every value of this type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeGeometry {
    tx: Point3,
    irs: Point3,
    rx: Point3,
    r1: f64,
    r2: f64,
}

impl CascadeGeometry {
    pub fn tx(&self) -> Point3 {
        self.tx
    }

    pub fn irs(&self) -> Point3 {
        self.irs
    }

    pub fn rx(&self) -> Point3 {
        self.rx
    }

    /// Transmitter to IRS, meters.
    pub fn r1(&self) -> f64 {
        self.r1
    }

    /// IRS to receiver, meters.
    pub fn r2(&self) -> f64 {
        self.r2
    }
}

pub fn cascade_distances(tx: Point3, irs: Point3, rx: Point3) -> Result<CascadeGeometry> {
    let r1 = distance(tx, irs);
    if r1 <= 0.0 {
        return Err(Error::degenerate(format!(
            "transmitter and IRS coincide at {tx}"
        )));
    }
    let r2 = distance(irs, rx);
    if r2 <= 0.0 {
        return Err(Error::degenerate(format!(
            "IRS and receiver coincide at {irs}"
        )));
    }
    Ok(CascadeGeometry {
        tx,
        irs,
        rx,
        r1,
        r2,
    })
}
