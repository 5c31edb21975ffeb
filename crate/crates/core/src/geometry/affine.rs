use serde::{Deserialize, Serialize};

use super::point::{check_dims, RationalPoint};
use super::polytope::VPolytope;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Rational;

/// `x ↦ matrix · x + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    matrix: Vec<Vec<Rational>>,
    offset: Vec<Rational>,
    cols: usize,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<Rational>>, offset: Vec<Rational>, cols: usize) -> Result<Self> {
        check_dims(matrix.len(), offset.len())?;
        for row in &matrix {
            check_dims(cols, row.len())?;
        }
        Ok(AffineMap { matrix, offset, cols })
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        AffineMap {
            matrix,
            offset: vec![Rational::zero(); n],
            cols: n,
        }
    }

    /// Output coordinate `i` is input coordinate `source[i]`.
    pub fn coordinate_permutation(source: &[usize]) -> Result<Self> {
        let n = source.len();
        let mut seen = vec![false; n];
        for &s in source {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Precondition(format!("{source:?} is not a permutation")));
            }
        }
        let matrix = source
            .iter()
            .map(|&s| {
                (0..n)
                    .map(|j| if j == s { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Ok(AffineMap {
            matrix,
            offset: vec![Rational::zero(); n],
            cols: n,
        })
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn offset(&self) -> &[Rational] {
        &self.offset
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        check_dims(self.cols, x.len())?;
        Ok(self
            .matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, o)| {
                let mut acc = o.clone();
                for (a, v) in row.iter().zip(x) {
                    if !a.is_zero() && !v.is_zero() {
                        acc += a * v;
                    }
                }
                acc
            })
            .collect())
    }

    /// Applies the map to a cube point; the image must stay in the cube.
    pub fn apply_point(&self, x: &RationalPoint) -> Result<RationalPoint> {
        RationalPoint::new(self.apply(x.coords())?)
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        if self.rows() != self.cols {
            return Err(Error::Singular("non-square affine map".into()));
        }
        let inv = linalg::inverse(&self.matrix).ok_or_else(|| Error::Singular("affine map".into()))?;
        let offset = inv
            .iter()
            .map(|row| -row.iter().zip(&self.offset).map(|(a, b)| a * b).sum::<Rational>())
            .collect();
        Ok(AffineMap {
            matrix: inv,
            offset,
            cols: self.cols,
        })
    }

    /// The affine map sending each `sources[i]` to `images[i]`.
    ///
    /// The linear part acts on the affine span of the sources and vanishes on
    /// its orthogonal complement. Errors if the images do not respect the
    /// affine dependencies among the sources.
    pub fn from_vertex_images(sources: &[Vec<Rational>], images: &[Vec<Rational>]) -> Result<AffineMap> {
        let first = sources.first().ok_or(Error::Empty("vertex list"))?;
        check_dims(sources.len(), images.len())?;
        let k = first.len();
        let out = images[0].len();
        for (s, t) in sources.iter().zip(images) {
            check_dims(k, s.len())?;
            check_dims(out, t.len())?;
        }
        let diffs: Vec<Vec<Rational>> = sources[1..]
            .iter()
            .map(|s| s.iter().zip(first).map(|(a, b)| a - b).collect())
            .collect();
        let matrix = if diffs.is_empty() {
            vec![vec![Rational::zero(); k]; out]
        } else {
            let cols = linalg::independent_columns(&linalg::transpose(&diffs));
            if cols.is_empty() {
                vec![vec![Rational::zero(); k]; out]
            } else {
                // B: k×r basis of source differences, C: out×r image differences.
                let b_t: Vec<Vec<Rational>> = cols.iter().map(|&c| diffs[c].clone()).collect();
                let c_t: Vec<Vec<Rational>> = cols
                    .iter()
                    .map(|&c| images[c + 1].iter().zip(&images[0]).map(|(a, b)| a - b).collect())
                    .collect();
                let gram = linalg::matmul(&b_t, &linalg::transpose(&b_t));
                let gram_inv = linalg::inverse(&gram).ok_or_else(|| Error::Singular("Gram matrix".into()))?;
                let c = linalg::transpose(&c_t);
                linalg::matmul(&linalg::matmul(&c, &gram_inv), &b_t)
            }
        };
        let mb0: Vec<Rational> = matrix
            .iter()
            .map(|row| row.iter().zip(first).map(|(a, b)| a * b).sum())
            .collect();
        let offset = images[0].iter().zip(&mb0).map(|(c, m)| c - m).collect();
        let map = AffineMap {
            matrix,
            offset,
            cols: k,
        };
        for (s, t) in sources.iter().zip(images) {
            if map.apply(s)? != *t {
                return Err(Error::Precondition(
                    "vertex images are not affinely consistent with the sources".into(),
                ));
            }
        }
        Ok(map)
    }
}

/// Image polytope with labels carried over.
pub fn apply_affine(f: &AffineMap, p: &VPolytope) -> Result<VPolytope> {
    check_dims(f.cols(), p.dim())?;
    let vertices = p
        .vertices()
        .iter()
        .map(|v| f.apply_point(v))
        .collect::<Result<Vec<_>>>()?;
    VPolytope::new(f.rows(), vertices, p.labels().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn pt(c: &[(i64, i64)]) -> RationalPoint {
        RationalPoint::new(c.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    fn square() -> VPolytope {
        VPolytope::from_points(vec![
            pt(&[(0, 1), (0, 1)]),
            pt(&[(1, 1), (0, 1)]),
            pt(&[(1, 1), (1, 1)]),
            pt(&[(0, 1), (1, 1)]),
        ])
        .unwrap()
    }

    #[test]
    fn identity_and_permutation() {
        let sq = square();
        assert_eq!(apply_affine(&AffineMap::identity(2), &sq).unwrap(), sq);
        let swap = AffineMap::coordinate_permutation(&[1, 0]).unwrap();
        let img = apply_affine(&swap, &sq).unwrap();
        assert_eq!(img.vertices()[1], pt(&[(0, 1), (1, 1)]));
        assert_eq!(img.labels(), sq.labels());
        assert!(AffineMap::coordinate_permutation(&[0, 0]).is_err());
    }

    #[test]
    fn projection_of_diagonal() {
        let diag = VPolytope::from_points(vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (1, 1)])]).unwrap();
        let proj = AffineMap::new(vec![vec![q(1, 1), q(0, 1)]], vec![q(0, 1)], 2).unwrap();
        let img = apply_affine(&proj, &diag).unwrap();
        assert_eq!(img.vertices(), &[pt(&[(0, 1)]), pt(&[(1, 1)])]);
        assert!(matches!(
            apply_affine(&proj, &VPolytope::from_points(vec![pt(&[(0, 1)])]).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inverse_restores_vertices() {
        let f = AffineMap::new(
            vec![vec![q(1, 2), q(0, 1)], vec![q(1, 4), q(1, 4)]],
            vec![q(1, 4), q(0, 1)],
            2,
        )
        .unwrap();
        let sq = square();
        let back = apply_affine(&f.inverse().unwrap(), &apply_affine(&f, &sq).unwrap()).unwrap();
        assert_eq!(back, sq);
    }

    #[test]
    fn vertex_images_determine_the_map() {
        let src = vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]];
        let dst = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        let f = AffineMap::from_vertex_images(&src, &dst).unwrap();
        assert_eq!(f.apply(&src[0]).unwrap(), dst[0]);
        assert_eq!(f.apply(&[q(1, 2), q(1, 2)]).unwrap(), vec![q(1, 2), q(1, 2)]);

        // Midpoint source with a non-midpoint image is inconsistent.
        let src = vec![vec![q(0, 1)], vec![q(1, 1)], vec![q(1, 2)]];
        let dst = vec![vec![q(0, 1)], vec![q(1, 1)], vec![q(1, 4)]];
        assert!(AffineMap::from_vertex_images(&src, &dst).is_err());
    }
}
