use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::point::{check_dims, HilbertMetric, RationalPoint};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::Rational;

/// A polytope given by a (possibly redundant) labeled vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPolytope")]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<RationalPoint>,
    labels: Vec<String>,
}

#[derive(Deserialize)]
struct RawPolytope {
    dim: usize,
    vertices: Vec<RationalPoint>,
    labels: Vec<String>,
}

impl TryFrom<RawPolytope> for VPolytope {
    type Error = Error;

    fn try_from(raw: RawPolytope) -> Result<Self> {
        VPolytope::new(raw.dim, raw.vertices, raw.labels)
    }
}

impl VPolytope {
    pub fn new(dim: usize, vertices: Vec<RationalPoint>, labels: Vec<String>) -> Result<Self> {
        let p = VPolytope { dim, vertices, labels };
        p.validate()?;
        Ok(p)
    }

    /// Labels vertices `b0, b1, ...` in order.
    pub fn from_points(points: Vec<RationalPoint>) -> Result<Self> {
        let dim = points.first().ok_or(Error::Empty("vertex list"))?.dim();
        let labels = (0..points.len()).map(|i| format!("b{i}")).collect();
        VPolytope::new(dim, points, labels)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::Empty("vertex list"));
        }
        check_dims(self.vertices.len(), self.labels.len())?;
        for v in &self.vertices {
            check_dims(self.dim, v.dim())?;
            if !v.in_unit_cube() {
                return Err(Error::OutOfCube(format!("vertex {:?}", v.coords())));
            }
        }
        let mut seen = HashSet::new();
        for l in &self.labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn vertex(&self, label: &str) -> Option<&RationalPoint> {
        self.index_of(label).map(|i| &self.vertices[i])
    }

    pub fn metric(&self) -> HilbertMetric {
        HilbertMetric::new(self.dim)
    }

    /// All vertices lifted by `extra` zero coordinates.
    pub fn lifted(&self, extra: usize) -> VPolytope {
        VPolytope {
            dim: self.dim + extra,
            vertices: self.vertices.iter().map(|v| v.lifted(extra)).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn contains(&self, p: &RationalPoint) -> Result<bool> {
        in_convex_hull(p, &self.vertices)
    }

    /// Vertex points as a set, ignoring labels and order.
    pub fn point_set(&self) -> std::collections::BTreeSet<RationalPoint> {
        self.vertices.iter().cloned().collect()
    }
}

/// Convex weights `λ` over `generators` with `Σ λ_i g_i = p`, if any exist.
///
/// Before the LP the generator set is shrunk to the smallest coordinate face
/// containing `p`: if `p_j` equals the minimum (or maximum) of coordinate `j`
/// over the generators, any convex representation uses only generators
/// attaining that value.
pub fn convex_weights(p: &RationalPoint, generators: &[RationalPoint]) -> Result<Option<Vec<Rational>>> {
    if generators.is_empty() {
        return Err(Error::Empty("generator list"));
    }
    for g in generators {
        check_dims(p.dim(), g.dim())?;
    }
    Ok(weights_by_index(p.coords(), generators))
}

fn weights_by_index(p: &[Rational], generators: &[RationalPoint]) -> Option<Vec<Rational>> {
    let dim = p.len();
    let mut active: Vec<usize> = (0..generators.len()).collect();
    loop {
        let before = active.len();
        for j in 0..dim {
            let col = |i: &usize| &generators[*i].coords()[j];
            let lo = active.iter().map(col).min()?;
            let hi = active.iter().map(col).max()?;
            if p[j] < *lo || p[j] > *hi {
                return None;
            }
            if lo == hi {
                continue;
            }
            if p[j] == *lo || p[j] == *hi {
                let target = p[j].clone();
                active.retain(|i| generators[*i].coords()[j] == target);
            }
        }
        if active.len() == before {
            break;
        }
    }
    let mut weights = vec![Rational::zero(); generators.len()];
    if active.len() == 1 {
        let g = &generators[active[0]];
        if g.coords() == p {
            weights[active[0]] = Rational::one();
            return Some(weights);
        }
        return None;
    }
    let live: Vec<usize> = (0..dim)
        .filter(|&j| {
            let first = &generators[active[0]].coords()[j];
            active.iter().any(|&i| generators[i].coords()[j] != *first)
        })
        .collect();
    let mut lp = LinearProgram::new(active.len());
    for &j in &live {
        lp.add_equality(
            active.iter().map(|&i| generators[i].coords()[j].clone()).collect(),
            p[j].clone(),
        );
    }
    lp.add_equality(vec![Rational::one(); active.len()], Rational::one());
    let x = lp.feasible_point()?;
    for (w, &i) in x.into_iter().zip(&active) {
        weights[i] = w;
    }
    Some(weights)
}

/// Exact hull membership: does `Σ λ_i g_i = p, Σ λ_i = 1, λ >= 0` have a solution.
pub fn in_convex_hull(p: &RationalPoint, generators: &[RationalPoint]) -> Result<bool> {
    Ok(convex_weights(p, generators)?.is_some())
}

fn is_extreme_at(vertices: &[RationalPoint], i: usize) -> bool {
    let v = &vertices[i];
    if vertices[..i].contains(v) {
        return false;
    }
    let others: Vec<RationalPoint> = vertices
        .iter()
        .enumerate()
        .filter(|(j, u)| *j != i && *u != v)
        .map(|(_, u)| u.clone())
        .collect();
    if others.is_empty() {
        return true;
    }
    weights_by_index(v.coords(), &others).is_none()
}

/// Indices of the extreme vertices. Repeated points keep their first copy.
pub fn extreme_indices(p: &VPolytope) -> Vec<usize> {
    let verts = p.vertices();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..verts.len())
            .into_par_iter()
            .filter(|&i| is_extreme_at(verts, i))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..verts.len()).filter(|&i| is_extreme_at(verts, i)).collect()
    }
}

pub fn extreme_points(p: &VPolytope) -> VPolytope {
    let idx = extreme_indices(p);
    VPolytope {
        dim: p.dim,
        vertices: idx.iter().map(|&i| p.vertices[i].clone()).collect(),
        labels: idx.iter().map(|&i| p.labels[i].clone()).collect(),
    }
}

/// Decides whether the vertices named by `subset` span a face of `p`.
///
/// Maximizes the total weight placed outside `subset` by a convex combination
/// of all vertices that lands in `hull(subset)`; the subset is a face exactly
/// when that maximum is zero.
pub fn is_face(p: &VPolytope, subset: &[&str]) -> Result<bool> {
    let mut inside = Vec::new();
    for l in subset {
        inside.push(p.index_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string()))?);
    }
    inside.sort_unstable();
    inside.dedup();
    if inside.is_empty() {
        return Ok(true);
    }
    let outside: Vec<usize> = (0..p.len()).filter(|i| !inside.contains(i)).collect();
    if outside.is_empty() {
        return Ok(true);
    }
    let (a, b) = (outside.len(), inside.len());
    let mut lp = LinearProgram::new(a + 2 * b);
    for j in 0..p.dim() {
        let mut row = Vec::with_capacity(a + 2 * b);
        row.extend(outside.iter().map(|&i| p.vertices[i].coords()[j].clone()));
        row.extend(inside.iter().map(|&i| p.vertices[i].coords()[j].clone()));
        row.extend(inside.iter().map(|&i| -&p.vertices[i].coords()[j]));
        lp.add_equality(row, Rational::zero());
    }
    let mut total = vec![Rational::one(); a + b];
    total.extend(vec![Rational::zero(); b]);
    lp.add_equality(total, Rational::one());
    let mut target = vec![Rational::zero(); a + b];
    target.extend(vec![Rational::one(); b]);
    lp.add_equality(target, Rational::one());
    let mut cost = vec![-Rational::one(); a];
    cost.extend(vec![Rational::zero(); 2 * b]);
    lp.set_cost(cost);
    match lp.minimize() {
        LpOutcome::Optimal { value, .. } => Ok(value.is_zero()),
        other => unreachable!("face LP is feasible and bounded, got {other:?}"),
    }
}

/// Minimum Hilbert-metric distance from `p` to `hull(generators)`.
pub fn distance_to_hull(p: &RationalPoint, generators: &[RationalPoint], metric: &HilbertMetric) -> Result<Rational> {
    if generators.is_empty() {
        return Err(Error::Empty("generator list"));
    }
    check_dims(metric.dim(), p.dim())?;
    for g in generators {
        check_dims(metric.dim(), g.dim())?;
    }
    if generators.contains(p) {
        return Ok(Rational::zero());
    }
    let n = generators.len();
    let dim = p.dim();
    // Variables: λ (n), s⁺ (dim), s⁻ (dim).
    let width = n + 2 * dim;
    let mut lp = LinearProgram::new(width);
    for j in 0..dim {
        let mut row = vec![Rational::zero(); width];
        for (i, g) in generators.iter().enumerate() {
            row[i] = g.coords()[j].clone();
        }
        row[n + j] = -Rational::one();
        row[n + dim + j] = Rational::one();
        lp.add_equality(row, p.coords()[j].clone());
    }
    let mut sum = vec![Rational::zero(); width];
    for v in sum.iter_mut().take(n) {
        *v = Rational::one();
    }
    lp.add_equality(sum, Rational::one());
    let mut cost = vec![Rational::zero(); width];
    for j in 0..dim {
        cost[n + j] = metric.weight(j);
        cost[n + dim + j] = metric.weight(j);
    }
    lp.set_cost(cost);
    match lp.minimize() {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => unreachable!("distance LP is feasible and bounded, got {other:?}"),
    }
}

/// Largest vertex-to-hull distance from `p` to `q`.
pub fn directed_hausdorff(p: &VPolytope, q: &VPolytope, metric: &HilbertMetric) -> Result<Rational> {
    check_dims(p.dim(), q.dim())?;
    let mut worst = Rational::zero();
    for v in p.vertices() {
        let d = distance_to_hull(v, q.vertices(), metric)?;
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

pub fn hausdorff_distance(p: &VPolytope, q: &VPolytope, metric: &HilbertMetric) -> Result<Rational> {
    let a = directed_hausdorff(p, q, metric)?;
    let b = directed_hausdorff(q, p, metric)?;
    Ok(if a > b { a } else { b })
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
    fn hull_membership_examples() {
        let g = vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (0, 1)])];
        assert!(in_convex_hull(&g[0], &g).unwrap());
        assert!(in_convex_hull(&pt(&[(1, 2), (0, 1)]), &g).unwrap());
        assert!(!in_convex_hull(&pt(&[(1, 1), (1, 1)]), &g).unwrap());
        assert!(matches!(in_convex_hull(&g[0], &[]), Err(Error::Empty(_))));
        assert!(matches!(
            in_convex_hull(&pt(&[(0, 1)]), &g),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn interior_point_needs_the_lp() {
        let sq = square();
        let w = convex_weights(&pt(&[(1, 3), (1, 4)]), sq.vertices()).unwrap().unwrap();
        let back = RationalPoint::convex_combination(&sq.vertices().iter().collect::<Vec<_>>(), &w).unwrap();
        assert_eq!(back, pt(&[(1, 3), (1, 4)]));
        assert_eq!(w.iter().sum::<Rational>(), Rational::one());
    }

    #[test]
    fn extreme_point_examples() {
        let mut pts = square().vertices().to_vec();
        pts.push(pt(&[(1, 2), (1, 2)]));
        let p = VPolytope::from_points(pts).unwrap();
        assert_eq!(extreme_points(&p).labels(), &["b0", "b1", "b2", "b3"]);

        let single = VPolytope::from_points(vec![pt(&[(1, 3)])]).unwrap();
        assert_eq!(extreme_points(&single), single);

        let seg = VPolytope::from_points(vec![pt(&[(0, 1)]), pt(&[(1, 1)]), pt(&[(1, 3)])]).unwrap();
        assert_eq!(extreme_points(&seg).labels(), &["b0", "b1"]);
    }

    #[test]
    fn duplicates_keep_first_copy() {
        let p = VPolytope::from_points(vec![pt(&[(0, 1)]), pt(&[(1, 1)]), pt(&[(0, 1)])]).unwrap();
        assert_eq!(extreme_points(&p).labels(), &["b0", "b1"]);
    }

    #[test]
    fn hausdorff_examples() {
        let m1 = HilbertMetric::new(1);
        let seg = VPolytope::from_points(vec![pt(&[(0, 1)]), pt(&[(1, 1)])]).unwrap();
        let origin = VPolytope::from_points(vec![pt(&[(0, 1)])]).unwrap();
        assert_eq!(hausdorff_distance(&seg, &seg, &m1).unwrap(), Rational::zero());
        assert_eq!(hausdorff_distance(&seg, &origin, &m1).unwrap(), q(1, 2));
        let m2 = HilbertMetric::new(2);
        let a = VPolytope::from_points(vec![pt(&[(0, 1), (0, 1)])]).unwrap();
        let b = VPolytope::from_points(vec![pt(&[(0, 1), (1, 1)])]).unwrap();
        assert_eq!(hausdorff_distance(&a, &b, &m2).unwrap(), q(1, 4));
    }

    #[test]
    fn distance_to_hull_uses_interior_points() {
        // Distance from (1/2, 1) to the bottom edge is attained at (1/2, 0).
        let m = HilbertMetric::new(2);
        let edge = vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (0, 1)])];
        assert_eq!(distance_to_hull(&pt(&[(1, 2), (1, 1)]), &edge, &m).unwrap(), q(1, 4));
    }

    #[test]
    fn face_examples() {
        let sq = square();
        assert!(is_face(&sq, &["b0"]).unwrap());
        assert!(is_face(&sq, &["b0", "b1"]).unwrap());
        assert!(!is_face(&sq, &["b0", "b2"]).unwrap());
        assert!(matches!(is_face(&sq, &["nope"]), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn polytope_validation() {
        assert!(VPolytope::from_points(vec![]).is_err());
        let err = VPolytope::new(1, vec![pt(&[(0, 1)]), pt(&[(1, 1)])], vec!["a".into(), "a".into()]);
        assert!(matches!(err, Err(Error::DuplicateLabel(_))));
        let json = r#"{"dim":1,"vertices":[["3/2"]],"labels":["a"]}"#;
        assert!(serde_json::from_str::<VPolytope>(json).is_err());
    }
}
