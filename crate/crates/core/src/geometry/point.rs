use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A point of the truncated Hilbert cube `[0,1]^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalPoint {
    coords: Vec<Rational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if let Some((i, c)) = coords.iter().enumerate().find(|(_, c)| !c.in_unit_interval()) {
            return Err(Error::OutOfCube(format!("coordinate {i} = {c}")));
        }
        Ok(RationalPoint { coords })
    }

    /// Wraps coordinates that are already known to lie in the cube.
    pub(crate) fn from_coords(coords: Vec<Rational>) -> Self {
        debug_assert!(coords.iter().all(Rational::in_unit_interval));
        RationalPoint { coords }
    }

    pub fn origin(dim: usize) -> Self {
        RationalPoint {
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn in_unit_cube(&self) -> bool {
        self.coords.iter().all(Rational::in_unit_interval)
    }

    /// Appends `extra` zero coordinates.
    pub fn lifted(&self, extra: usize) -> Self {
        let mut coords = self.coords.clone();
        coords.resize(self.coords.len() + extra, Rational::zero());
        RationalPoint { coords }
    }

    /// Appends one coordinate with value `v` (which must lie in `[0,1]`).
    pub fn with_appended(&self, v: Rational) -> Self {
        debug_assert!(v.in_unit_interval());
        let mut coords = self.coords.clone();
        coords.push(v);
        RationalPoint { coords }
    }

    /// Zero-pads or truncates to `dim` coordinates.
    pub fn resized(&self, dim: usize) -> Self {
        let mut coords = self.coords.clone();
        coords.resize(dim, Rational::zero());
        RationalPoint { coords }
    }

    /// `t·self + (1−t)·other`, for `t` in `[0,1]`.
    pub fn lerp(&self, other: &RationalPoint, t: &Rational) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        let s = Rational::one() - t;
        Ok(RationalPoint::from_coords(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a * t + b * &s)
                .collect(),
        ))
    }

    pub fn midpoint(&self, other: &RationalPoint) -> Result<Self> {
        self.lerp(other, &Rational::new(1, 2))
    }

    /// Convex combination of `points` with the given weights.
    pub fn convex_combination(points: &[&RationalPoint], weights: &[Rational]) -> Result<Self> {
        let first = points.first().ok_or(Error::Empty("convex combination"))?;
        let dim = first.dim();
        let mut acc = vec![Rational::zero(); dim];
        for (p, w) in points.iter().zip(weights) {
            check_dims(dim, p.dim())?;
            if w.is_zero() {
                continue;
            }
            for (a, c) in acc.iter_mut().zip(&p.coords) {
                *a += w * c;
            }
        }
        RationalPoint::new(acc)
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// The truncated Hilbert-cube metric `Σ_n w_n |x_n − y_n|` with
/// `w_n = 2^{-(n+1)}` for the 0-based coordinate index `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertMetric {
    dim: usize,
}

impl HilbertMetric {
    pub fn new(dim: usize) -> Self {
        HilbertMetric { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self, index: usize) -> Rational {
        Rational::dyadic(index as u32 + 1)
    }

    pub fn weights(&self) -> Vec<Rational> {
        (0..self.dim).map(|n| self.weight(n)).collect()
    }

    /// `Σ_n w_n = 1 − 2^{-dim}`.
    pub fn total_weight(&self) -> Rational {
        Rational::one() - Rational::dyadic(self.dim as u32)
    }

    pub fn distance(&self, x: &RationalPoint, y: &RationalPoint) -> Result<Rational> {
        self.distance_coords(x.coords(), y.coords())
    }

    pub fn distance_coords(&self, x: &[Rational], y: &[Rational]) -> Result<Rational> {
        check_dims(self.dim, x.len())?;
        check_dims(self.dim, y.len())?;
        Ok(x.iter()
            .zip(y)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(n, (a, b))| self.weight(n) * (a - b).abs())
            .sum())
    }
}

pub fn hilbert_distance(x: &RationalPoint, y: &RationalPoint, m: &HilbertMetric) -> Result<Rational> {
    m.distance(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn pt(c: &[Rational]) -> RationalPoint {
        RationalPoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        let m2 = HilbertMetric::new(2);
        let x = pt(&[q(1, 2), q(1, 3)]);
        assert_eq!(hilbert_distance(&x, &x, &m2).unwrap(), Rational::zero());
        let m1 = HilbertMetric::new(1);
        assert_eq!(
            hilbert_distance(&pt(&[q(0, 1)]), &pt(&[q(1, 1)]), &m1).unwrap(),
            q(1, 2)
        );
        assert_eq!(
            hilbert_distance(&pt(&[q(0, 1), q(0, 1)]), &pt(&[q(1, 1), q(1, 1)]), &m2).unwrap(),
            q(3, 4)
        );
    }

    #[test]
    fn distance_rejects_mismatched_dims() {
        let m = HilbertMetric::new(2);
        let err = hilbert_distance(&pt(&[q(0, 1)]), &pt(&[q(0, 1), q(1, 1)]), &m).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn weights_decrease_and_sum_below_one() {
        let m = HilbertMetric::new(10);
        let w = m.weights();
        assert!(w.windows(2).all(|p| p[0] > p[1]));
        assert_eq!(w.iter().sum::<Rational>(), m.total_weight());
        assert!(m.total_weight() < Rational::one());
    }

    #[test]
    fn points_outside_cube_are_rejected() {
        assert!(RationalPoint::new(vec![q(3, 2)]).is_err());
        assert!(RationalPoint::new(vec![q(-1, 2)]).is_err());
    }
}
