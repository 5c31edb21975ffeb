use serde::{Serialize, Serializer};

use super::blowup::{PhiStage, QRule};
use super::detect::DetectedStructure;
use crate::error::{Error, Result};
use crate::geometry::HilbertMetric;
use crate::rational::Rational;

/// A decoded distance: a closed interval, or nothing to read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interval {
    Closed(Rational, Rational),
    Undetermined,
}

impl Interval {
    pub fn contains(&self, d: &Rational) -> bool {
        match self {
            Interval::Closed(lo, hi) => lo <= d && d <= hi,
            Interval::Undetermined => false,
        }
    }

    pub fn width(&self) -> Option<Rational> {
        match self {
            Interval::Closed(lo, hi) => Some(hi - lo),
            Interval::Undetermined => None,
        }
    }

    pub fn is_determined(&self) -> bool {
        matches!(self, Interval::Closed(..))
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Interval::Closed(lo, hi) => [lo, hi].serialize(s),
            Interval::Undetermined => s.serialize_str("undetermined"),
        }
    }
}

/// One row of a decode report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodeEntry {
    pub pair: [String; 2],
    pub interval: Interval,
    pub true_d: Rational,
    pub contains: bool,
}

/// Rebuilds the clipped window `[lo, hi]` from the marker parameters on one
/// segment, inverting `q = lo + t(hi − lo)` at the first and last fraction.
pub fn reconstruct_window(lambdas: &[Rational], rule: &QRule) -> Result<(Rational, Rational)> {
    let t = rule.fractions();
    if t.len() < 2 {
        return Err(Error::Precondition(
            "decoding needs a q rule with at least two fractions".into(),
        ));
    }
    if lambdas.len() != t.len() {
        return Err(Error::Precondition(format!(
            "segment carries {} markers, q rule has {}",
            lambdas.len(),
            t.len()
        )));
    }
    let (t0, t1) = (&t[0], &t[t.len() - 1]);
    let (l0, l1) = (&lambdas[0], &lambdas[lambdas.len() - 1]);
    let width = (l1 - l0) / &(t1 - t0);
    let lo = l0 - &(t0 * &width);
    let hi = &lo + &width;
    Ok((lo, hi))
}

/// Half the smallest positive Hilbert distance between base extremes, or 1
/// when there is at most one.
pub fn default_neighborhood(phi: &PhiStage, s: &DetectedStructure) -> Result<Rational> {
    let verts = phi.poly().vertices();
    let metric = HilbertMetric::new(phi.dim());
    let pts: Vec<_> = s.base_index.iter().map(|&i| s.project(&verts[i])).collect();
    let mut best: Option<Rational> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = metric.distance(&pts[i], &pts[j])?;
            if d.is_positive() && best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
    }
    Ok(best.map_or_else(Rational::one, |b| b / Rational::from_integer(2)))
}

/// Reads `d(x, y)` off the detected structure.
///
/// Every detected apex pair whose projections lie within `neighborhood` of
/// `embed(x)` and `embed(y)` (either orientation) contributes its
/// reconstructed window; the result is the closed hull of their
/// intersection.
pub fn decode_distance(
    phi: &PhiStage,
    s: &DetectedStructure,
    x: &str,
    y: &str,
    neighborhood: &Rational,
) -> Result<Interval> {
    let ex = phi.embed_point(x)?;
    let ey = phi.embed_point(y)?;
    if x == y {
        return Ok(Interval::Undetermined);
    }
    let metric = HilbertMetric::new(phi.dim());
    let verts = phi.poly().vertices();
    let near = |i: usize, e: &crate::geometry::RationalPoint| -> Result<bool> {
        Ok(metric.distance(&s.project(&verts[i]), e)? < *neighborhood)
    };
    let mut range: Option<(Rational, Rational)> = None;
    for p in &s.pairs {
        let (a, b) = p.index;
        let hit = (near(a, &ex)? && near(b, &ey)?) || (near(a, &ey)? && near(b, &ex)?);
        if !hit {
            continue;
        }
        let (lo, hi) = reconstruct_window(&p.lambdas, &phi.q_rule)?;
        range = Some(match range {
            None => (lo, hi),
            Some((l, h)) => (Rational::max_of(&l, &lo).clone(), Rational::min_of(&h, &hi).clone()),
        });
    }
    Ok(match range {
        Some((lo, hi)) if lo <= hi => Interval::Closed(lo, hi),
        _ => Interval::Undetermined,
    })
}

/// Decodes `(x, y)` and compares against the stored distance.
pub fn decode_entry(
    phi: &PhiStage,
    s: &DetectedStructure,
    x: &str,
    y: &str,
    neighborhood: &Rational,
) -> Result<DecodeEntry> {
    let interval = decode_distance(phi, s, x, y, neighborhood)?;
    let true_d = phi.stage().base().dist_by_label(x, y)?.clone();
    Ok(DecodeEntry {
        pair: [x.to_string(), y.to_string()],
        contains: interval.contains(&true_d),
        interval,
        true_d,
    })
}

/// Decodes every unordered pair of the stage enumeration, in order.
pub fn decode_all(phi: &PhiStage, s: &DetectedStructure, neighborhood: &Rational) -> Result<Vec<DecodeEntry>> {
    let labels = phi.stage().poly().labels();
    let pairs: Vec<(usize, usize)> = (0..labels.len())
        .flat_map(|i| (i + 1..labels.len()).map(move |j| (i, j)))
        .collect();
    let run = |&(i, j): &(usize, usize)| decode_entry(phi, s, &labels[i], &labels[j], neighborhood);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        pairs.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        pairs.iter().map(run).collect()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::codec::{build_phi, detect_geometric, PhiParams};
    use crate::metric::FiniteMetricSpace;
    use crate::rational::q;
    use crate::sext::{dxd, Enumeration};

    fn space(labels: &[&str], d: Vec<Vec<Rational>>) -> Arc<FiniteMetricSpace> {
        Arc::new(FiniteMetricSpace::new(labels.iter().copied(), d).unwrap())
    }

    fn decode(x: &Arc<FiniteMetricSpace>, widths: Vec<Rational>, depth: usize) -> Vec<DecodeEntry> {
        let e = Enumeration::full(x);
        let phi = build_phi(x, &e, &dxd(x, &e).unwrap(), &PhiParams::new(widths, depth)).unwrap();
        let s = detect_geometric(phi.poly()).unwrap();
        let r = default_neighborhood(&phi, &s).unwrap();
        decode_all(&phi, &s, &r).unwrap()
    }

    #[test]
    fn two_point_half() {
        let x = space(&["d1", "d2"], vec![vec![q(0, 1), q(1, 2)], vec![q(1, 2), q(0, 1)]]);
        let out = decode(&x, vec![q(1, 2), q(1, 4)], 2);
        assert_eq!(out[0].interval, Interval::Closed(q(3, 8), q(5, 8)));
        assert!(out[0].contains);
        assert!(out[0].interval.width().unwrap() <= q(1, 4));
    }

    #[test]
    fn equilateral_decodes_to_one() {
        let one = q(1, 1);
        let z = q(0, 1);
        let x = space(
            &["a", "b", "c"],
            vec![
                vec![z.clone(), one.clone(), one.clone()],
                vec![one.clone(), z.clone(), one.clone()],
                vec![one.clone(), one, z],
            ],
        );
        let out = decode(&x, vec![q(1, 2), q(1, 4), q(1, 8)], 9);
        assert_eq!(out.len(), 3);
        for e in &out {
            assert!(e.contains);
            assert_eq!(e.interval, Interval::Closed(q(15, 16), q(1, 1)));
        }
    }

    #[test]
    fn same_point_is_undetermined() {
        let x = space(&["d1", "d2"], vec![vec![q(0, 1), q(1, 2)], vec![q(1, 2), q(0, 1)]]);
        let e = Enumeration::full(&x);
        let phi = build_phi(&x, &e, &dxd(&x, &e).unwrap(), &PhiParams::new(vec![q(1, 2)], 1)).unwrap();
        let s = detect_geometric(phi.poly()).unwrap();
        assert_eq!(
            decode_distance(&phi, &s, "d1", "d1", &q(1, 1)).unwrap(),
            Interval::Undetermined
        );
        assert!(decode_distance(&phi, &s, "d1", "zz", &q(1, 1)).is_err());
    }

    #[test]
    fn serialization() {
        let e = DecodeEntry {
            pair: ["a".into(), "b".into()],
            interval: Interval::Closed(q(1, 4), q(3, 4)),
            true_d: q(1, 2),
            contains: true,
        };
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"pair":["a","b"],"interval":["1/4","3/4"],"true_d":"1/2","contains":true}"#
        );
        let u = serde_json::to_value(Interval::Undetermined).unwrap();
        assert_eq!(u, "undetermined");
    }

    #[test]
    fn window_reconstruction() {
        let rule = QRule::default();
        let lam = rule.values(&q(3, 4), &q(1, 1));
        assert_eq!(reconstruct_window(&lam, &rule).unwrap(), (q(3, 4), q(1, 1)));
        let one = QRule::new(vec![q(1, 2)]).unwrap();
        assert!(reconstruct_window(&[q(1, 2)], &one).is_err());
    }
}
