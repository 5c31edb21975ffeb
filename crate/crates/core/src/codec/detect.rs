use std::collections::BTreeSet;

use serde::Serialize;

use super::blowup::{apex_labels, PhiStage};
use crate::error::{Error, Result};
use crate::geometry::{extreme_indices, RationalPoint, VPolytope};
use crate::rational::Rational;

/// How [`detect_structure`] may look at the polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectMode {
    /// Geometry only; labels are carried through as opaque names.
    Strict,
    /// Structure read from the construction's own labels.
    Labeled,
}

impl std::str::FromStr for DetectMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(DetectMode::Strict),
            "labeled" => Ok(DetectMode::Labeled),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// A blow-up apex pair with the marker parameters found on its segment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetectedPair {
    pub c1: String,
    pub c2: String,
    /// Vertex indices of `c1` and `c2` in the Φ polytope.
    #[serde(skip)]
    pub index: (usize, usize),
    /// `λ` with `marker = λ·c1 + (1 − λ)·c2`, ascending.
    pub lambdas: Vec<Rational>,
}

/// The recovered partition of the extreme points of Φ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetectedStructure {
    pub markers: Vec<String>,
    pub pairs: Vec<DetectedPair>,
    pub base: Vec<String>,
    #[serde(skip)]
    pub base_index: Vec<usize>,
    /// Coordinates owned by detected apexes; zeroed by [`Self::project`].
    pub slots: Vec<usize>,
    /// Marker-apex candidates lying inside more than one segment.
    pub ambiguous: Vec<String>,
}

impl DetectedStructure {
    /// Zeroes every apex and marker coordinate.
    pub fn project(&self, p: &RationalPoint) -> RationalPoint {
        let mut c = p.coords().to_vec();
        for &s in &self.slots {
            c[s] = Rational::zero();
        }
        RationalPoint::new(c).expect("zeroing keeps coordinates in [0,1]")
    }

    pub fn partition(&self) -> Partition {
        Partition {
            markers: self.markers.iter().cloned().collect(),
            pairs: self.pairs.iter().map(|p| (p.c1.clone(), p.c2.clone())).collect(),
            base: self.base.iter().cloned().collect(),
        }
    }
}

/// Label sets of the three kinds of extreme point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub markers: BTreeSet<String>,
    pub pairs: BTreeSet<(String, String)>,
    pub base: BTreeSet<String>,
}

/// The partition the construction put in.
pub fn ground_truth(phi: &PhiStage) -> Partition {
    Partition {
        markers: phi.markers.markers.iter().map(|m| m.label.clone()).collect(),
        pairs: (1..=phi.scheme().len()).map(apex_labels).collect(),
        base: phi.stage().poly().labels().iter().cloned().collect(),
    }
}

fn support(p: &RationalPoint) -> Vec<usize> {
    p.coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, _)| j)
        .collect()
}

/// `λ ∈ (0,1)` with `p = λa + (1 − λ)b`, if any.
fn segment_parameter(p: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> Option<Rational> {
    let j = (0..p.dim()).find(|&j| a.coords()[j] != b.coords()[j])?;
    let (pj, aj, bj) = (&p.coords()[j], &a.coords()[j], &b.coords()[j]);
    let lambda = (pj - bj) / &(aj - bj);
    if !lambda.is_positive() || lambda >= Rational::one() {
        return None;
    }
    let ok = (0..p.dim()).all(|i| {
        let (ai, bi) = (&a.coords()[i], &b.coords()[i]);
        p.coords()[i] == &lambda * ai + &(Rational::one() - &lambda) * bi
    });
    ok.then_some(lambda)
}

fn last_nonzero(p: &RationalPoint) -> Option<usize> {
    p.coords().iter().rposition(|c| !c.is_zero())
}

/// Re-identifies marker apexes, blow-up apex pairs and base extremes.
pub fn detect_structure(phi: &PhiStage, mode: DetectMode) -> Result<DetectedStructure> {
    match mode {
        DetectMode::Strict => detect_geometric(phi.poly()),
        DetectMode::Labeled => Ok(detect_labeled(phi)),
    }
}

/// Structure of a Φ polytope from its geometry alone.
///
/// A marker apex is an extreme point with a private coordinate equal to 1
/// whose projection (that coordinate zeroed) lies strictly inside the
/// segment of exactly one pair of other extreme points; those pairs are the
/// blow-up apexes. The remaining extreme points are the base.
pub fn detect_geometric(poly: &VPolytope) -> Result<DetectedStructure> {
    let verts = poly.vertices();
    let labels = poly.labels();
    let ext = extreme_indices(poly);
    let supports: Vec<Vec<usize>> = ext.iter().map(|&i| support(&verts[i])).collect();
    let mut markers = Vec::new();
    let mut marker_slots = Vec::new();
    let mut ambiguous = Vec::new();
    let mut pairs: Vec<DetectedPair> = Vec::new();
    for (a, &i) in ext.iter().enumerate() {
        let private = supports[a]
            .iter()
            .copied()
            .find(|&j| verts[i].coords()[j].is_one() && ext.iter().all(|&o| o == i || verts[o].coords()[j].is_zero()));
        let Some(slot) = private else { continue };
        let mut c = verts[i].coords().to_vec();
        c[slot] = Rational::zero();
        let proj = RationalPoint::new(c)?;
        let proj_support: BTreeSet<usize> = support(&proj).into_iter().collect();
        let candidates: Vec<usize> = (0..ext.len())
            .filter(|&b| b != a && supports[b].iter().all(|j| proj_support.contains(j)))
            .collect();
        let mut hits = Vec::new();
        for (x, &u) in candidates.iter().enumerate() {
            for &v in &candidates[x + 1..] {
                let (pu, pv) = (&verts[ext[u]], &verts[ext[v]]);
                // Orient by owned coordinate so λ is measured at the earlier apex.
                let (first, second) = if last_nonzero(pu) <= last_nonzero(pv) {
                    (u, v)
                } else {
                    (v, u)
                };
                if let Some(l) = segment_parameter(&proj, &verts[ext[first]], &verts[ext[second]]) {
                    hits.push((ext[first], ext[second], l));
                }
            }
        }
        match hits.len() {
            0 => {}
            1 => {
                let (p1, p2, l) = hits.pop().expect("one hit");
                markers.push(labels[i].clone());
                marker_slots.push(slot);
                match pairs.iter_mut().find(|p| p.index == (p1, p2)) {
                    Some(p) => p.lambdas.push(l),
                    None => pairs.push(DetectedPair {
                        c1: labels[p1].clone(),
                        c2: labels[p2].clone(),
                        index: (p1, p2),
                        lambdas: vec![l],
                    }),
                }
            }
            _ => ambiguous.push(labels[i].clone()),
        }
    }
    let mut slots = marker_slots;
    for p in &mut pairs {
        p.lambdas.sort();
        for idx in [p.index.0, p.index.1] {
            slots.extend(last_nonzero(&verts[idx]));
        }
    }
    pairs.sort_by_key(|p| p.index);
    slots.sort_unstable();
    slots.dedup();
    let used: BTreeSet<&str> = markers
        .iter()
        .chain(pairs.iter().flat_map(|p| [&p.c1, &p.c2]))
        .chain(&ambiguous)
        .map(String::as_str)
        .collect();
    let base_index: Vec<usize> = ext
        .iter()
        .copied()
        .filter(|&i| !used.contains(labels[i].as_str()))
        .collect();
    Ok(DetectedStructure {
        markers,
        pairs,
        base: base_index.iter().map(|&i| labels[i].clone()).collect(),
        base_index,
        slots,
        ambiguous,
    })
}

fn detect_labeled(phi: &PhiStage) -> DetectedStructure {
    let poly = phi.poly();
    let index = |l: &str| poly.index_of(l).expect("construction labels are vertex labels");
    let mut pairs: Vec<DetectedPair> = (1..=phi.scheme().len())
        .map(|n| {
            let (c1, c2) = apex_labels(n);
            let index = (index(&c1), index(&c2));
            DetectedPair {
                c1,
                c2,
                index,
                lambdas: Vec::new(),
            }
        })
        .collect();
    for m in &phi.markers.markers {
        pairs[m.triple - 1].lambdas.push(m.q.clone());
    }
    for p in &mut pairs {
        p.lambdas.sort();
    }
    let mut slots: Vec<usize> = phi
        .blowup
        .cone
        .apexes()
        .iter()
        .chain(phi.marker_cone.apexes())
        .map(|a| a.coord)
        .collect();
    slots.sort_unstable();
    let base: Vec<String> = phi.stage().poly().labels().to_vec();
    DetectedStructure {
        markers: phi.markers.markers.iter().map(|m| m.label.clone()).collect(),
        pairs,
        base_index: base.iter().map(|l| index(l)).collect(),
        base,
        slots,
        ambiguous: Vec::new(),
    }
}
