//! Command-line spellings of points and polygons: `re,im` and `re,im;re,im;...`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use trimetric_core::geometry::point_serde;
use trimetric_core::ComplexPoint;

/// A complex number written as `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point(pub ComplexPoint);

impl FromStr for Point {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `re,im`, got `{s}`"))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad coordinate `{}` in `{s}`: {e}", x.trim()))
        };
        let z = ComplexPoint::new(parse(re)?, parse(im)?);
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(format!("non-finite point `{s}`"));
        }
        Ok(Point(z))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0.re, self.0.im)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        point_serde::serialize(&self.0, s)
    }
}

/// Polygon vertices written as `re,im;re,im;...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertices(pub Vec<ComplexPoint>);

impl FromStr for Vertices {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let points = s
            .split(';')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.parse::<Point>().map(|p| p.0))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Vertices(points))
    }
}

impl Serialize for Vertices {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        trimetric_core::geometry::points_serde::serialize(&self.0, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs() {
        assert_eq!("0.5,-0.25".parse::<Point>().unwrap().0, ComplexPoint::new(0.5, -0.25));
        assert_eq!(" -1 , 2e-3 ".parse::<Point>().unwrap().0, ComplexPoint::new(-1.0, 0.002));
        assert!("0.5".parse::<Point>().is_err());
        assert!("a,b".parse::<Point>().is_err());
        assert!("inf,0".parse::<Point>().is_err());
    }

    #[test]
    fn parses_vertices() {
        let v: Vertices = "-1,-1;1,-1;1,1;-1,1".parse().unwrap();
        assert_eq!(v.0.len(), 4);
        assert_eq!(v.0[2], ComplexPoint::new(1.0, 1.0));
        assert!("-1,-1;1".parse::<Vertices>().is_err());
    }
}
