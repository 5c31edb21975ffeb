//! Cones over polytope points: `cone(S, s) = conv((S × {0}) ∪ {(s, 1)})`,
//! realized by appending one coordinate per apex.

use std::collections::HashSet;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{
    distance_to_hull, extreme_indices, in_convex_hull, is_face, AffineMap, HilbertMetric, RationalPoint, VPolytope,
};
use crate::rational::Rational;

/// One apex of an iterated cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApexRecord {
    pub label: String,
    /// The coned-over point, in base coordinates.
    pub base_point: RationalPoint,
    /// Index of the coordinate equal to 1 at this apex.
    pub coord: usize,
}

/// An iterated cone over a base polytope, with its apexes in construction
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledCone {
    base: VPolytope,
    apexes: Vec<ApexRecord>,
    poly: VPolytope,
}

impl Serialize for LabeledCone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            dim: usize,
            vertices: &'a [RationalPoint],
            labels: &'a [String],
            base_dim: usize,
            apexes: &'a [ApexRecord],
        }
        View {
            dim: self.poly.dim(),
            vertices: self.poly.vertices(),
            labels: self.poly.labels(),
            base_dim: self.base.dim(),
            apexes: &self.apexes,
        }
        .serialize(s)
    }
}

impl LabeledCone {
    pub fn base(&self) -> &VPolytope {
        &self.base
    }

    pub fn apexes(&self) -> &[ApexRecord] {
        &self.apexes
    }

    pub fn poly(&self) -> &VPolytope {
        &self.poly
    }

    pub fn depth(&self) -> usize {
        self.apexes.len()
    }

    pub fn apex(&self, label: &str) -> Result<&ApexRecord> {
        self.apexes
            .iter()
            .find(|a| a.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// The apex as a point of the cone.
    pub fn apex_point(&self, label: &str) -> Result<&RationalPoint> {
        let a = self.apex(label)?;
        Ok(self.poly.vertex(&a.label).expect("apex labels are vertex labels"))
    }
}

pub fn cone(p: &VPolytope, s: &RationalPoint, apex_label: &str) -> Result<LabeledCone> {
    iterated_cone(p, &[(s.clone(), apex_label.to_string())])
}

/// `cone(... cone(P, s_1) ..., s_n)` with every `s_i` taken in `hull(P)`.
pub fn iterated_cone(p: &VPolytope, points: &[(RationalPoint, String)]) -> Result<LabeledCone> {
    let k = p.dim();
    let n = points.len();
    let mut labels: HashSet<&str> = p.labels().iter().map(String::as_str).collect();
    for (s, label) in points {
        if s.dim() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: s.dim(),
            });
        }
        if !labels.insert(label) {
            return Err(Error::DuplicateLabel(label.clone()));
        }
        if !in_convex_hull(s, p.vertices())? {
            return Err(Error::NotInHull(format!("cone point {label}")));
        }
    }
    let lifted = p.lifted(n);
    let mut vertices = lifted.vertices().to_vec();
    let mut all_labels = lifted.labels().to_vec();
    let mut apexes = Vec::with_capacity(n);
    for (j, (s, label)) in points.iter().enumerate() {
        let mut coords = s.lifted(n).into_coords();
        coords[k + j] = Rational::one();
        vertices.push(RationalPoint::new(coords)?);
        all_labels.push(label.clone());
        apexes.push(ApexRecord {
            label: label.clone(),
            base_point: s.clone(),
            coord: k + j,
        });
    }
    Ok(LabeledCone {
        base: p.clone(),
        apexes,
        poly: VPolytope::new(k + n, vertices, all_labels)?,
    })
}

/// `y = Σ_j w_j · apex_j + (1 − Σ_j w_j) · base_part`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeDecomposition {
    pub base_part: RationalPoint,
    pub apex_weights: Vec<Rational>,
    pub base_weight: Rational,
}

/// Peels apexes last to first. At each step the apex weight is the cone
/// coordinate `t` and the rest is rescaled by `1/(1 − t)`.
///
/// When `y` is an apex the base weight is 0 and `base_part` is that apex's
/// base point.
pub fn decompose(c: &LabeledCone, y: &RationalPoint) -> Result<ConeDecomposition> {
    if y.dim() != c.poly.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.poly.dim(),
            found: y.dim(),
        });
    }
    let k = c.base.dim();
    let outside = || Error::NotInHull("point outside the cone".into());
    let mut z = y.coords().to_vec();
    let mut mass = Rational::one();
    let mut weights = vec![Rational::zero(); c.depth()];
    for (j, apex) in c.apexes.iter().enumerate().rev() {
        let t = z[k + j].clone();
        if t.is_zero() {
            continue;
        }
        let apex_coords = c.poly.vertex(&apex.label).expect("apex vertex").coords();
        if t.is_one() {
            if z != apex_coords {
                return Err(outside());
            }
            weights[j] = mass;
            return Ok(ConeDecomposition {
                base_part: apex.base_point.clone(),
                apex_weights: weights,
                base_weight: Rational::zero(),
            });
        }
        let rest = Rational::one() - &t;
        for (zi, ai) in z.iter_mut().zip(apex_coords) {
            *zi = (&*zi - &t * ai) / &rest;
        }
        weights[j] = &mass * &t;
        mass = &mass * &rest;
    }
    let base_part = RationalPoint::new(z[..k].to_vec()).map_err(|_| outside())?;
    if z[k..].iter().any(|v| !v.is_zero()) || !in_convex_hull(&base_part, c.base.vertices())? {
        return Err(outside());
    }
    Ok(ConeDecomposition {
        base_part,
        apex_weights: weights,
        base_weight: mass,
    })
}

/// Inverse of [`decompose`].
pub fn recombine(c: &LabeledCone, dec: &ConeDecomposition) -> Result<RationalPoint> {
    let mut points = vec![dec.base_part.lifted(c.depth())];
    let mut weights = vec![dec.base_weight.clone()];
    for (a, w) in c.apexes.iter().zip(&dec.apex_weights) {
        points.push(c.poly.vertex(&a.label).expect("apex vertex").clone());
        weights.push(w.clone());
    }
    let refs: Vec<&RationalPoint> = points.iter().collect();
    RationalPoint::convex_combination(&refs, &weights)
}

/// `γ = (1−β)α` and `δ = β / (1 − α(1−β))`; `δ = 0` at the singular
/// configuration `α = 1, β = 0`.
pub fn swap_parameters(alpha: &Rational, beta: &Rational) -> (Rational, Rational) {
    let gamma = (Rational::one() - beta) * alpha;
    let denom = Rational::one() - &gamma;
    let delta = if denom.is_zero() {
        Rational::zero()
    } else {
        beta / &denom
    };
    (gamma, delta)
}

/// `cone(cone(S, s_2), s_1)` for a double cone `cone(cone(S, s_1), s_2)`.
pub fn swap_cone(c12: &LabeledCone) -> Result<LabeledCone> {
    let [a1, a2] = double_apexes(c12)?;
    iterated_cone(
        &c12.base,
        &[
            (a2.base_point.clone(), a2.label.clone()),
            (a1.base_point.clone(), a1.label.clone()),
        ],
    )
}

fn double_apexes(c: &LabeledCone) -> Result<[&ApexRecord; 2]> {
    match c.apexes.as_slice() {
        [a, b] => Ok([a, b]),
        other => Err(Error::Precondition(format!(
            "double cone expected, found {} apexes",
            other.len()
        ))),
    }
}

/// Sends `(1−β)((1−α)x + α c(s_1)) + β c'(s_2)` in `cone(cone(S,s_1),s_2)` to
/// `(1−γ)((1−δ)x + δ c(s_2)) + γ c'(s_1)` in `cone(cone(S,s_2),s_1)`.
///
/// The point `c(s_1)` (α = 1, β = 0) goes to `c'(s_1)`.
pub fn double_cone_swap(c12: &LabeledCone, y: &RationalPoint) -> Result<RationalPoint> {
    let [a1, a2] = double_apexes(c12)?;
    let dec = decompose(c12, y)?;
    let beta = dec.apex_weights[1].clone();
    let outer = Rational::one() - &beta;
    let alpha = if outer.is_zero() {
        Rational::zero()
    } else {
        &dec.apex_weights[0] / &outer
    };
    let (gamma, delta) = swap_parameters(&alpha, &beta);
    let w_x = (Rational::one() - &gamma) * (Rational::one() - &delta);
    let w_s2 = (Rational::one() - &gamma) * &delta;
    let k = c12.base.dim();
    let mut coords: Vec<Rational> = (0..k)
        .map(|j| {
            &w_x * &dec.base_part.coords()[j] + &w_s2 * &a2.base_point.coords()[j] + &gamma * &a1.base_point.coords()[j]
        })
        .collect();
    coords.push(w_s2);
    coords.push(gamma);
    RationalPoint::new(coords)
}

/// `φ'(x, t) = (φ(x) + t·(s_2 − φ(s_1)), t)`: agrees with `φ` on the base
/// and sends `c(s_1)` to `c(s_2)`.
pub fn extend_affine_to_cone(
    phi: &AffineMap,
    s1: &RationalPoint,
    s2: &RationalPoint,
    eps: &Rational,
) -> Result<AffineMap> {
    let image = phi.apply(s1.coords())?;
    let metric = HilbertMetric::new(phi.rows());
    let gap = metric.distance_coords(&image, s2.coords())?;
    if gap >= *eps {
        return Err(Error::Precondition(format!(
            "d(φ(s1), s2) = {gap} is not below ε = {eps}"
        )));
    }
    let shift: Vec<Rational> = s2.coords().iter().zip(&image).map(|(a, b)| a - b).collect();
    let mut matrix: Vec<Vec<Rational>> = phi
        .matrix()
        .iter()
        .zip(&shift)
        .map(|(row, sh)| {
            let mut r = row.clone();
            r.push(sh.clone());
            r
        })
        .collect();
    let mut last = vec![Rational::zero(); phi.cols()];
    last.push(Rational::one());
    matrix.push(last);
    let mut offset = phi.offset().to_vec();
    offset.push(Rational::zero());
    AffineMap::new(matrix, offset, phi.cols() + 1)
}

/// `max_v d(φ(π(v)), π(φ'(v)))` over the vertices of a depth-1 cone, where
/// `π` drops the cone coordinate.
pub fn extension_discrepancy(phi: &AffineMap, phi_ext: &AffineMap, c: &LabeledCone) -> Result<Rational> {
    let k = c.base.dim();
    let metric = HilbertMetric::new(phi.rows());
    let mut worst = Rational::zero();
    for v in c.poly.vertices() {
        let lhs = phi.apply(&v.coords()[..k])?;
        let rhs = phi_ext.apply(v.coords())?;
        let d = metric.distance_coords(&lhs, &rhs[..phi.rows()])?;
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

/// Extreme points of a cone split into lifted base extremes and apexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremeClassification {
    pub base: Vec<String>,
    pub apexes: Vec<String>,
    /// Whether `ext(cone) = ext(base) ∪ {apexes}` as label sets.
    pub exhaustive: bool,
}

pub fn classify_extreme(c: &LabeledCone) -> ExtremeClassification {
    let apex_labels: HashSet<&str> = c.apexes.iter().map(|a| a.label.as_str()).collect();
    let mut base = Vec::new();
    let mut apexes = Vec::new();
    for i in extreme_indices(&c.poly) {
        let l = c.poly.labels()[i].clone();
        if apex_labels.contains(l.as_str()) {
            apexes.push(l);
        } else {
            base.push(l);
        }
    }
    let base_ext: Vec<String> = extreme_indices(&c.base)
        .into_iter()
        .map(|i| c.base.labels()[i].clone())
        .collect();
    let exhaustive = base == base_ext && apexes.len() == c.apexes.len();
    ExtremeClassification {
        base,
        apexes,
        exhaustive,
    }
}

/// Distance from an apex to the hull of every other extreme point.
pub fn isolation_margin(c: &LabeledCone, apex_label: &str) -> Result<Rational> {
    let apex = c.apex_point(apex_label)?;
    let others: Vec<RationalPoint> = extreme_indices(&c.poly)
        .into_iter()
        .filter(|&i| c.poly.labels()[i] != apex_label)
        .map(|i| c.poly.vertices()[i].clone())
        .collect();
    if others.is_empty() {
        return Err(Error::Empty("other extreme points"));
    }
    distance_to_hull(apex, &others, &c.poly.metric())
}

/// The cone over the selected apexes only, in their original order.
pub fn subcone(c: &LabeledCone, apex_subset: &[&str]) -> Result<LabeledCone> {
    for l in apex_subset {
        c.apex(l)?;
    }
    let points: Vec<(RationalPoint, String)> = c
        .apexes
        .iter()
        .filter(|a| apex_subset.contains(&a.label.as_str()))
        .map(|a| (a.base_point.clone(), a.label.clone()))
        .collect();
    iterated_cone(&c.base, &points)
}

/// Whether the vertices of `sub` span a face of `c`, matched by label.
pub fn subcone_is_face(c: &LabeledCone, sub: &LabeledCone) -> Result<bool> {
    let labels: Vec<&str> = sub.poly.labels().iter().map(String::as_str).collect();
    is_face(&c.poly, &labels)
}
