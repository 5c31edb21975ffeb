use serde::Serialize;

use super::space::FiniteMetricSpace;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::Rational;

/// Witness points `d_1..d_n` with an invertible matrix `[d(x_i, d_j)]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationWitness {
    pub witnesses: Vec<String>,
    pub determinant: Rational,
}

/// Builds `d_1, d_2, ...` one at a time, keeping every leading minor of
/// `[d(x_i, d_j)]` nonzero, and backtracks when the pool runs dry.
///
/// Candidates are tried in pool order and may not repeat. Pool points that
/// are also targets are allowed.
pub fn saturation_witnesses(targets: &[&str], pool: &[&str], x: &FiniteMetricSpace) -> Result<SaturationWitness> {
    if targets.is_empty() {
        return Err(Error::Empty("target list"));
    }
    let t: Vec<usize> = targets.iter().map(|l| x.index_of(l)).collect::<Result<_>>()?;
    let p: Vec<usize> = pool.iter().map(|l| x.index_of(l)).collect::<Result<_>>()?;
    let mut chosen = Vec::with_capacity(t.len());
    let mut used = vec![false; p.len()];
    if !extend(x, &t, &p, &mut chosen, &mut used) {
        return Err(Error::ExhaustedPool(format!(
            "no invertible witness matrix for targets {targets:?}"
        )));
    }
    let determinant = linalg::determinant(&witness_matrix(x, &t, &chosen));
    Ok(SaturationWitness {
        witnesses: chosen.iter().map(|&j| x.label(j).to_string()).collect(),
        determinant,
    })
}

fn extend(x: &FiniteMetricSpace, t: &[usize], p: &[usize], chosen: &mut Vec<usize>, used: &mut [bool]) -> bool {
    if chosen.len() == t.len() {
        return true;
    }
    let k = chosen.len() + 1;
    for (slot, &cand) in p.iter().enumerate() {
        if used[slot] {
            continue;
        }
        chosen.push(cand);
        if !linalg::determinant(&witness_matrix(x, &t[..k], chosen)).is_zero() {
            used[slot] = true;
            if extend(x, t, p, chosen, used) {
                return true;
            }
            used[slot] = false;
        }
        chosen.pop();
    }
    false
}

/// `m[i][j] = d(targets[i], witnesses[j])` over point indices.
pub fn witness_matrix(x: &FiniteMetricSpace, targets: &[usize], witnesses: &[usize]) -> Vec<Vec<Rational>> {
    targets
        .iter()
        .map(|&i| witnesses.iter().map(|&j| x.dist(i, j).clone()).collect())
        .collect()
}
