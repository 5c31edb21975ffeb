//! Seeded randomness. Every random choice in the crate goes through a
//! `ChaCha8Rng` seeded from a single `u64`, so runs replay exactly.

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{RationalPoint, VPolytope};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational in `[0,1]` with denominator at most `max_denom`.
pub fn unit_rational(rng: &mut Rng, max_denom: i64) -> Rational {
    let d = rng.gen_range(1..=max_denom);
    Rational::new(rng.gen_range(0..=d), d)
}

/// `n` nonnegative rationals summing to 1.
pub fn simplex_weights(rng: &mut Rng, n: usize, granularity: i64) -> Vec<Rational> {
    loop {
        let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=granularity)).collect();
        let total: i64 = raw.iter().sum();
        if total > 0 {
            return raw.into_iter().map(|r| Rational::new(r, total)).collect();
        }
    }
}

/// A random convex combination of `vertices`.
pub fn hull_point(rng: &mut Rng, vertices: &[RationalPoint], granularity: i64) -> RationalPoint {
    let w = simplex_weights(rng, vertices.len(), granularity);
    let refs: Vec<&RationalPoint> = vertices.iter().collect();
    RationalPoint::convex_combination(&refs, &w).expect("convex combination of cube points stays in the cube")
}

pub fn permutation(rng: &mut Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// A random point of `[0,1]^dim` with denominators at most `max_denom`.
pub fn cube_point(rng: &mut Rng, dim: usize, max_denom: i64) -> RationalPoint {
    RationalPoint::new((0..dim).map(|_| unit_rational(rng, max_denom)).collect()).expect("unit rationals")
}

/// `n` random cube points, labelled `b0, b1, ...`; repeats are allowed.
pub fn polytope(rng: &mut Rng, dim: usize, n: usize, max_denom: i64) -> VPolytope {
    VPolytope::from_points((0..n).map(|_| cube_point(rng, dim, max_denom)).collect()).expect("n >= 1 points")
}

/// `n` distinct random points of `[0,1]^3` under the sup distance, labelled
/// `x1, ..., xn`. Unit-bounded by construction.
pub fn space(rng: &mut Rng, n: usize, max_denom: i64) -> FiniteMetricSpace {
    loop {
        let pts: Vec<RationalPoint> = (0..n).map(|_| cube_point(rng, 3, max_denom)).collect();
        let d: Vec<Vec<Rational>> = pts
            .iter()
            .map(|a| {
                pts.iter()
                    .map(|b| {
                        a.coords()
                            .iter()
                            .zip(b.coords())
                            .map(|(u, v)| (u - v).abs())
                            .max()
                            .expect("dim 3")
                    })
                    .collect()
            })
            .collect();
        if let Ok(x) = FiniteMetricSpace::new((1..=n).map(|i| format!("x{i}")), d) {
            return x;
        }
    }
}

/// A metric on `n` points with every distance drawn from `values`,
/// labelled `x1, ..., xn`, by rejection.
pub fn space_from_values(rng: &mut Rng, n: usize, values: &[Rational]) -> FiniteMetricSpace {
    loop {
        let mut d = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = values.choose(rng).expect("non-empty values").clone();
                d[i][j] = v.clone();
                d[j][i] = v;
            }
        }
        if let Ok(x) = FiniteMetricSpace::new((1..=n).map(|i| format!("x{i}")), d) {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replays_from_seed() {
        let a: Vec<Rational> = (0..5).map(|_| unit_rational(&mut seeded(7), 16)).collect();
        let mut r = seeded(7);
        let first = unit_rational(&mut r, 16);
        assert_eq!(a[0], first);
        let w = simplex_weights(&mut seeded(3), 4, 8);
        assert_eq!(w.iter().sum::<Rational>(), Rational::one());
        assert_eq!(space(&mut seeded(5), 4, 6), space(&mut seeded(5), 4, 6));
        assert!(space(&mut seeded(5), 4, 6).is_unit_bounded());
    }
}
