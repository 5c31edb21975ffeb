use std::sync::Arc;

use serde::Serialize;

use super::stage::{build_stage, Enumeration, SStage};
use crate::error::{Error, Result};
use crate::geometry::{hausdorff_distance, AffineMap, HilbertMetric, RationalPoint, VPolytope};
use crate::metric::{FiniteMetricSpace, PointFunction};
use crate::rational::Rational;

/// Affine maps `φ_m` from the `D`-stages into the full `E`-stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedSequence {
    /// `sources[m-1]` is the `D`-stage with `min(m, |D|)` vertices.
    pub sources: Vec<SStage>,
    pub target: SStage,
    pub maps: Vec<AffineMap>,
    /// `choices[m-1][i]` is the `E`-index chosen for `d_i` at step `m`.
    pub choices: Vec<Vec<usize>>,
    /// `ε_m = (1 − 2^{-k}) / m`, the Hilbert-metric bound on `d(b_i, φ_m(b_i))`.
    pub schedule: Vec<Rational>,
}

/// Builds `φ_1..φ_depth`, sending `b_i` to the `E`-point nearest `d_i`
/// (lowest index on ties) and failing if it is not strictly within `1/m`.
pub fn build_twisted(
    x: &Arc<FiniteMetricSpace>,
    d: &Enumeration,
    e: &Enumeration,
    f: &[PointFunction],
    depth: usize,
) -> Result<TwistedSequence> {
    if depth == 0 {
        return Err(Error::Precondition("twisted sequence needs depth >= 1".into()));
    }
    let k = f.len();
    let target = build_stage(x, e, f, e.len(), k)?;
    let e_idx: Vec<usize> = e.labels().iter().map(|l| x.index_of(l)).collect::<Result<_>>()?;
    let d_idx: Vec<usize> = d.labels().iter().map(|l| x.index_of(l)).collect::<Result<_>>()?;
    // Nearest E-point for each d_i; fixed across m.
    let nearest: Vec<usize> = d_idx
        .iter()
        .map(|&di| {
            let mut best = 0;
            for (j, &ej) in e_idx.iter().enumerate() {
                if x.dist(di, ej) < x.dist(di, e_idx[best]) {
                    best = j;
                }
            }
            best
        })
        .collect();
    let weight = HilbertMetric::new(k).total_weight();
    let mut seq = TwistedSequence {
        sources: Vec::with_capacity(depth),
        target,
        maps: Vec::with_capacity(depth),
        choices: Vec::with_capacity(depth),
        schedule: Vec::with_capacity(depth),
    };
    for m in 1..=depth {
        let gate = Rational::new(1, m as i64);
        let n = m.min(d.len());
        for i in 0..n {
            if *x.dist(d_idx[i], e_idx[nearest[i]]) >= gate {
                return Err(Error::ApproximationImpossible { index: i + 1, m });
            }
        }
        let source = build_stage(x, d, f, n, k)?;
        let choice = nearest[..n].to_vec();
        let src: Vec<Vec<Rational>> = source.poly().vertices().iter().map(|v| v.coords().to_vec()).collect();
        let img: Vec<Vec<Rational>> = choice
            .iter()
            .map(|&j| seq.target.poly().vertices()[j].coords().to_vec())
            .collect();
        seq.maps.push(AffineMap::from_vertex_images(&src, &img)?);
        seq.sources.push(source);
        seq.choices.push(choice);
        seq.schedule.push(&weight * &gate);
    }
    Ok(seq)
}

/// One condition of [`verify_twisted`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: &'static str,
    pub bound: &'static str,
    pub checks: usize,
    pub max_observed: Rational,
    pub violations: usize,
    /// Largest observed value among the violating checks.
    pub largest_violation: Option<Rational>,
    pub passed: bool,
}

impl ConditionReport {
    fn new(condition: &'static str, bound: &'static str) -> Self {
        ConditionReport {
            condition,
            bound,
            checks: 0,
            max_observed: Rational::zero(),
            violations: 0,
            largest_violation: None,
            passed: true,
        }
    }

    fn record(&mut self, observed: Rational, limit: &Rational) {
        self.checks += 1;
        if observed >= *limit {
            self.violations += 1;
            self.passed = false;
            if self.largest_violation.as_ref().is_none_or(|v| observed > *v) {
                self.largest_violation = Some(observed.clone());
            }
        }
        if observed > self.max_observed {
            self.max_observed = observed;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedReport {
    pub conditions: Vec<ConditionReport>,
    /// Hausdorff gap between the last image and the target stage.
    pub final_gap: Rational,
    pub passed: bool,
}

impl TwistedReport {
    pub fn condition(&self, name: &str) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.condition == name)
    }
}

fn images(seq: &TwistedSequence, m: usize, vertices: &[RationalPoint]) -> Result<Vec<Vec<Rational>>> {
    vertices.iter().map(|v| seq.maps[m].apply(v.coords())).collect()
}

/// Checks (i), (i'), (iii) at vertices and (ii) as a Hausdorff distance.
///
/// Thresholds: (i) `ε_k + ε_l`, (i') `ε_k`, (ii) `ε_depth`, (iii) `2ε_k`,
/// all strict.
pub fn verify_twisted(seq: &TwistedSequence) -> Result<TwistedReport> {
    let depth = seq.maps.len();
    let k = seq.target.k();
    let metric = HilbertMetric::new(k);
    let mut cond_i = ConditionReport::new("i", "d(φ_k(x), φ_l(x)) < ε_k + ε_l");
    let mut cond_i1 = ConditionReport::new("i'", "d(φ_k(x), x) < ε_k");
    let mut cond_ii = ConditionReport::new("ii", "d_H(rng φ_depth, target) < ε_depth");
    let mut cond_iii = ConditionReport::new("iii", "|d(φ_k x, φ_k y) − d(x, y)| < 2ε_k");
    let two = Rational::from_integer(2);
    for a in 0..depth {
        let verts = seq.sources[a].poly().vertices();
        let img_a = images(seq, a, verts)?;
        for (v, fv) in verts.iter().zip(&img_a) {
            cond_i1.record(metric.distance_coords(fv, v.coords())?, &seq.schedule[a]);
        }
        for b in a + 1..depth {
            let img_b = images(seq, b, verts)?;
            let limit = &seq.schedule[a] + &seq.schedule[b];
            for (fa, fb) in img_a.iter().zip(&img_b) {
                cond_i.record(metric.distance_coords(fa, fb)?, &limit);
            }
        }
        let limit = &two * &seq.schedule[a];
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let before = metric.distance(&verts[i], &verts[j])?;
                let after = metric.distance_coords(&img_a[i], &img_a[j])?;
                cond_iii.record((after - before).abs(), &limit);
            }
        }
    }
    let last = &seq.sources[depth - 1];
    let points = images(seq, depth - 1, last.poly().vertices())?
        .into_iter()
        .map(RationalPoint::new)
        .collect::<Result<Vec<_>>>()?;
    let range = VPolytope::new(k, points, last.poly().labels().to_vec())?;
    let final_gap = hausdorff_distance(&range, seq.target.poly(), &metric)?;
    cond_ii.record(final_gap.clone(), &seq.schedule[depth - 1]);
    let conditions = vec![cond_i, cond_i1, cond_ii, cond_iii];
    let passed = conditions.iter().all(|c| c.passed);
    Ok(TwistedReport {
        conditions,
        final_gap,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::sext::dxd;

    fn four_point() -> Arc<FiniteMetricSpace> {
        Arc::new(
            FiniteMetricSpace::new(
                ["a", "b", "c", "d"],
                vec![
                    vec![q(0, 1), q(1, 2), q(3, 4), q(1, 1)],
                    vec![q(1, 2), q(0, 1), q(1, 2), q(3, 4)],
                    vec![q(3, 4), q(1, 2), q(0, 1), q(1, 2)],
                    vec![q(1, 1), q(3, 4), q(1, 2), q(0, 1)],
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn identity_sequence_is_exact() {
        let x = four_point();
        let d = Enumeration::full(&x);
        let f = dxd(&x, &d).unwrap();
        let seq = build_twisted(&x, &d, &d, &f, 4).unwrap();
        for (m, map) in seq.maps.iter().enumerate() {
            for v in seq.sources[m].poly().vertices() {
                assert_eq!(map.apply(v.coords()).unwrap(), v.coords());
            }
        }
        let r = verify_twisted(&seq).unwrap();
        assert!(r.passed);
        assert!(r.conditions.iter().all(|c| c.max_observed.is_zero()));
    }

    #[test]
    fn reordered_enumeration_reaches_zero_gap() {
        let x = four_point();
        let d = Enumeration::full(&x);
        let e = Enumeration::new(["c", "a", "d", "b"], &x).unwrap();
        let f = dxd(&x, &d).unwrap();
        let seq = build_twisted(&x, &d, &e, &f, 4).unwrap();
        assert_eq!(seq.choices[3], vec![1, 3, 0, 2]);
        let r = verify_twisted(&seq).unwrap();
        assert!(r.passed);
        assert!(r.final_gap.is_zero());
        assert!(seq.schedule.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn one_over_m_gate() {
        let x = Arc::new(
            FiniteMetricSpace::new(["x1", "x2"], vec![vec![q(0, 1), q(1, 3)], vec![q(1, 3), q(0, 1)]]).unwrap(),
        );
        let d = Enumeration::new(["x1"], &x).unwrap();
        let e = Enumeration::new(["x2"], &x).unwrap();
        let f = dxd(&x, &Enumeration::full(&x)).unwrap();
        let seq = build_twisted(&x, &d, &e, &f, 2).unwrap();
        assert_eq!(seq.choices, vec![vec![0], vec![0]]);
        // 1/3 < 1/3 fails, so the gate closes at m = 3.
        assert_eq!(
            build_twisted(&x, &d, &e, &f, 4).unwrap_err(),
            Error::ApproximationImpossible { index: 1, m: 3 }
        );
    }

    #[test]
    fn corrupted_map_breaks_isometry() {
        let x = four_point();
        let d = Enumeration::full(&x);
        let f = dxd(&x, &d).unwrap();
        // At m = 8 the isometry slack 2ε_8 = 15/64 is below the 1/4 shift.
        let mut seq = build_twisted(&x, &d, &d, &f, 8).unwrap();
        let verts: Vec<Vec<Rational>> = seq.sources[7]
            .poly()
            .vertices()
            .iter()
            .map(|v| v.coords().to_vec())
            .collect();
        let mut img = verts.clone();
        // Vertex a = (0, 1/2, 3/4, 1): push its first coordinate up by 1/2.
        img[0][0] = q(1, 2);
        seq.maps[7] = AffineMap::from_vertex_images(&verts, &img).unwrap();
        let r = verify_twisted(&seq).unwrap();
        assert!(!r.passed);
        assert!(!r.condition("iii").unwrap().passed);
        assert!(!r.condition("i'").unwrap().passed);
    }
}
