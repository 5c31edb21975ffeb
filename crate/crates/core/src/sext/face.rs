use serde::Serialize;

use super::stage::SStage;
use crate::error::{Error, Result};
use crate::geometry::{distance_to_hull, in_convex_hull, RationalPoint, VPolytope};
use crate::rational::Rational;
use crate::rng;

const MAX_HALVINGS: u32 = 32;

/// Outcome of [`epsilon_face_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonFaceOutcome {
    pub holds: bool,
    pub pairs_checked: usize,
    /// A pair with midpoint in `A` and one end at distance `>= ε` from `A`.
    pub counterexample: Option<(RationalPoint, RationalPoint)>,
}

/// Searches for a pair `x, y` in the stage with `(x+y)/2 ∈ A` and one of
/// them at distance at least `ε` from `A`.
///
/// Tries every pair of stage vertices, then `samples` random pairs built as
/// `m ± t(x − m)` from a random `m ∈ A` and a random stage point `x`, halving
/// `t` until both ends lie in the stage. A `true` result means no
/// counterexample was found, not that `A` is an ε-face.
pub fn epsilon_face_check(
    stage: &SStage,
    a: &VPolytope,
    eps: &Rational,
    samples: usize,
    seed: u64,
) -> Result<EpsilonFaceOutcome> {
    if !eps.is_positive() {
        return Err(Error::Precondition(format!("ε = {eps} must be positive")));
    }
    let verts = stage.poly().vertices();
    for v in a.vertices() {
        if !in_convex_hull(v, verts)? {
            return Err(Error::Precondition("A is not contained in the stage".into()));
        }
    }
    let metric = stage.poly().metric();
    let far = |p: &RationalPoint| -> Result<bool> { Ok(distance_to_hull(p, a.vertices(), &metric)? >= *eps) };
    let mut checked = 0;
    for i in 0..verts.len() {
        for j in i..verts.len() {
            let mid = verts[i].midpoint(&verts[j])?;
            if !in_convex_hull(&mid, a.vertices())? {
                continue;
            }
            checked += 1;
            if far(&verts[i])? || far(&verts[j])? {
                return Ok(EpsilonFaceOutcome {
                    holds: false,
                    pairs_checked: checked,
                    counterexample: Some((verts[i].clone(), verts[j].clone())),
                });
            }
        }
    }
    let mut r = rng::seeded(seed);
    let two = Rational::from_integer(2);
    for _ in 0..samples {
        let m = rng::hull_point(&mut r, a.vertices(), 8);
        let x0 = rng::hull_point(&mut r, verts, 8);
        let mut t = Rational::one();
        let mut halvings = 0;
        let (x, y) = loop {
            if halvings == MAX_HALVINGS {
                // m sits on a boundary the direction x0 − m leaves; degenerate pair.
                break (m.clone(), m.clone());
            }
            // x = m + t(x0 − m), y = 2m − x.
            let x = x0.lerp(&m, &t)?;
            let y: Vec<Rational> = m
                .coords()
                .iter()
                .zip(x.coords())
                .map(|(mc, xc)| &two * mc - xc)
                .collect();
            if let Ok(y) = RationalPoint::new(y) {
                if in_convex_hull(&y, verts)? {
                    break (x, y);
                }
            }
            t = t / &two;
            halvings += 1;
        };
        checked += 1;
        if far(&x)? || far(&y)? {
            return Ok(EpsilonFaceOutcome {
                holds: false,
                pairs_checked: checked,
                counterexample: Some((x, y)),
            });
        }
    }
    Ok(EpsilonFaceOutcome {
        holds: true,
        pairs_checked: checked,
        counterexample: None,
    })
}
