use serde::Serialize;

use super::space::FiniteMetricSpace;
use crate::error::{Error, Result};

/// Largest space the factorial search will accept.
pub const ISOMETRY_GUARD: usize = 9;

/// A distance-preserving bijection `X -> Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsometryWitness {
    /// `image[i]` is the index in `Y` of point `i` of `X`.
    pub image: Vec<usize>,
    /// The same map by label, in `X` order.
    pub mapping: Vec<(String, String)>,
}

impl IsometryWitness {
    pub fn map_label(&self, x: &str) -> Option<&str> {
        self.mapping.iter().find(|(a, _)| a == x).map(|(_, b)| b.as_str())
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Lexicographically first isometry by `image`, found by pruned search.
///
/// Returns `Ok(None)` when the sizes differ or no isometry exists and
/// refuses spaces above [`ISOMETRY_GUARD`] points.
pub fn brute_force_isometry(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<Option<IsometryWitness>> {
    if x.len() != y.len() {
        return Ok(None);
    }
    if x.len() > ISOMETRY_GUARD {
        return Err(Error::GuardExceeded(format!(
            "isometry search over {} points (limit {ISOMETRY_GUARD})",
            x.len()
        )));
    }
    let mut image = Vec::with_capacity(x.len());
    let mut used = vec![false; y.len()];
    if !search(x, y, &mut image, &mut used) {
        return Ok(None);
    }
    let mapping = image
        .iter()
        .enumerate()
        .map(|(i, &j)| (x.label(i).to_string(), y.label(j).to_string()))
        .collect();
    Ok(Some(IsometryWitness { image, mapping }))
}

fn search(x: &FiniteMetricSpace, y: &FiniteMetricSpace, image: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = image.len();
    if i == x.len() {
        return true;
    }
    for j in 0..y.len() {
        if used[j] {
            continue;
        }
        if image.iter().enumerate().all(|(a, &b)| x.dist(a, i) == y.dist(b, j)) {
            used[j] = true;
            image.push(j);
            if search(x, y, image, used) {
                return true;
            }
            image.pop();
            used[j] = false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, Rational};

    fn two(d: Rational) -> FiniteMetricSpace {
        FiniteMetricSpace::new(["a", "b"], vec![vec![q(0, 1), d.clone()], vec![d, q(0, 1)]]).unwrap()
    }

    fn path() -> FiniteMetricSpace {
        FiniteMetricSpace::new(
            ["a", "b", "c"],
            vec![
                vec![q(0, 1), q(1, 4), q(1, 2)],
                vec![q(1, 4), q(0, 1), q(1, 4)],
                vec![q(1, 2), q(1, 4), q(0, 1)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_on_equal_spaces() {
        let w = brute_force_isometry(&path(), &path()).unwrap().unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn finds_the_relabeling() {
        let p = path();
        let moved = p
            .reindexed(&[1, 2, 0], vec!["u".into(), "v".into(), "w".into()])
            .unwrap();
        let w = brute_force_isometry(&p, &moved).unwrap().unwrap();
        // b is the midpoint of the path, now called u.
        assert_eq!(w.map_label("b"), Some("u"));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p.dist(i, j), moved.dist(w.image[i], w.image[j]));
            }
        }
    }

    #[test]
    fn different_distances_and_sizes() {
        assert_eq!(brute_force_isometry(&two(q(1, 2)), &two(q(1, 3))).unwrap(), None);
        assert_eq!(brute_force_isometry(&two(q(1, 2)), &path()).unwrap(), None);
    }

    #[test]
    fn guard_refuses_large_spaces() {
        let n = 10;
        let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let d = (0..n)
            .map(|i| (0..n).map(|j| if i == j { q(0, 1) } else { q(1, 1) }).collect())
            .collect();
        let s = FiniteMetricSpace::new(labels, d).unwrap();
        assert!(matches!(brute_force_isometry(&s, &s), Err(Error::GuardExceeded(_))));
    }
}
