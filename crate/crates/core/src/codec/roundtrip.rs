use std::sync::Arc;

use serde::Serialize;

use super::blowup::{build_phi, standard_functions, PhiParams, PhiStage};
use super::decode::{decode_all, default_neighborhood, DecodeEntry, Interval};
use super::detect::{detect_structure, ground_truth, DetectMode};
use super::scheme::build_scheme;
use crate::error::{Error, Result};
use crate::metric::{brute_force_isometry, FiniteMetricSpace};
use crate::rational::Rational;
use crate::rng;
use crate::sext::Enumeration;

/// Largest space `roundtrip` accepts.
pub const ROUNDTRIP_GUARD: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripOptions {
    pub params: PhiParams,
    /// Stage coordinates; defaults to `|D|`.
    pub coords: Option<usize>,
    pub mode: DetectMode,
    /// Apex matching radius; defaults to [`default_neighborhood`].
    pub neighborhood: Option<Rational>,
    pub seed: u64,
    /// Also build Φ for a seeded relabeled copy and compare vertex sets.
    pub isometric_copy: bool,
}

impl RoundtripOptions {
    pub fn new(params: PhiParams) -> Self {
        RoundtripOptions {
            params,
            coords: None,
            mode: DetectMode::Strict,
            neighborhood: None,
            seed: 0,
            isometric_copy: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checkpoint {
    pub depth: usize,
    pub max_width: Option<Rational>,
    pub all_contained: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopyCheck {
    pub mapping: Vec<(String, String)>,
    pub vertex_sets_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgainstCheck {
    pub isometric: bool,
    pub permutations_checked: usize,
    pub matching_permutations: usize,
    /// Sorted decoded intervals differ between the two spaces.
    pub decoded_differs: bool,
    pub decoded: Vec<DecodeEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub depth: usize,
    pub dim: usize,
    pub vertices: usize,
    pub entries: Vec<DecodeEntry>,
    pub all_contained: bool,
    pub max_width: Option<Rational>,
    pub smallest_window: Option<Rational>,
    /// Whether `depth` covers a full scheme cycle.
    pub full_cycle: bool,
    /// At full cycle depth: every interval is at most the smallest window.
    pub sharp: Option<bool>,
    pub checkpoints: Vec<Checkpoint>,
    pub widths_nonincreasing: bool,
    /// Pairs seen fewer than twice by the scheme.
    pub low_confidence: Vec<[String; 2]>,
    pub structure_recovered: bool,
    pub isometric_copy: Option<CopyCheck>,
    pub against: Option<AgainstCheck>,
    pub passed: bool,
}

fn functions_for(
    x: &Arc<FiniteMetricSpace>,
    d: &Enumeration,
    coords: Option<usize>,
) -> Result<Vec<crate::metric::PointFunction>> {
    standard_functions(x, d, coords.unwrap_or(d.len()))
}

/// Φ with the standard functions of `(x, d)`.
pub fn standard_phi(
    x: &Arc<FiniteMetricSpace>,
    d: &Enumeration,
    coords: Option<usize>,
    params: &PhiParams,
) -> Result<PhiStage> {
    build_phi(x, d, &functions_for(x, d, coords)?, params)
}

fn decode_phi(phi: &PhiStage, opts: &RoundtripOptions) -> Result<(Vec<DecodeEntry>, bool)> {
    let s = detect_structure(phi, opts.mode)?;
    let recovered = s.ambiguous.is_empty() && s.partition() == ground_truth(phi);
    let r = match &opts.neighborhood {
        Some(r) => r.clone(),
        None => default_neighborhood(phi, &s)?,
    };
    Ok((decode_all(phi, &s, &r)?, recovered))
}

fn max_width(entries: &[DecodeEntry]) -> Option<Rational> {
    entries
        .iter()
        .map(|e| e.interval.width())
        .collect::<Option<Vec<_>>>()?
        .into_iter()
        .max()
}

/// All orderings of `0..n`, lexicographic.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
    out
}

fn guard(x: &FiniteMetricSpace) -> Result<()> {
    if x.len() > ROUNDTRIP_GUARD {
        return Err(Error::GuardExceeded(format!(
            "roundtrip over {} points (limit {ROUNDTRIP_GUARD})",
            x.len()
        )));
    }
    Ok(())
}

/// Builds Φ, decodes every pair, tracks interval widths across width-level
/// checkpoints, and optionally compares against an isometric relabeled copy
/// and against a second space.
pub fn roundtrip(
    x: &Arc<FiniteMetricSpace>,
    d: &Enumeration,
    opts: &RoundtripOptions,
    against: Option<(&Arc<FiniteMetricSpace>, &Enumeration)>,
) -> Result<RoundtripReport> {
    guard(x)?;
    let params = &opts.params;
    let phi = standard_phi(x, d, opts.coords, params)?;
    let (entries, structure_recovered) = decode_phi(&phi, opts)?;
    let all_contained = entries.iter().all(|e| e.contains);
    let scheme = phi.scheme();
    let prefix = Enumeration::new(phi.stage().enumeration().labels()[..phi.stage().n()].iter().cloned(), x)?;
    let mut depths: Vec<usize> = scheme
        .width_checkpoints(x, &prefix)?
        .into_iter()
        .filter(|&c| c > 0 && c < params.depth)
        .collect();
    depths.push(params.depth);
    depths.dedup();
    let mut checkpoints = Vec::with_capacity(depths.len());
    for &c in &depths {
        let (es, contained) = if c == params.depth {
            (entries.clone(), all_contained)
        } else {
            let (es, _) = decode_phi(&standard_phi(x, d, opts.coords, &params.with_depth(c))?, opts)?;
            let ok = es.iter().all(|e| e.contains);
            (es, ok)
        };
        checkpoints.push(Checkpoint {
            depth: c,
            max_width: max_width(&es),
            all_contained: contained,
        });
    }
    let widths_nonincreasing = checkpoints
        .windows(2)
        .all(|w| match (&w[0].max_width, &w[1].max_width) {
            (Some(a), Some(b)) => b <= a,
            _ => true,
        });
    let full_cycle = scheme.cycle_len > 0 && params.depth >= scheme.cycle_len;
    let smallest_window = params.widths.iter().min().cloned();
    let mw = max_width(&entries);
    let sharp = match (full_cycle, &mw, &smallest_window) {
        (true, Some(m), Some(w)) => Some(m <= w),
        (true, None, _) => Some(false),
        _ => None,
    };
    let low_confidence = entries
        .iter()
        .filter(|e| scheme.occurrences(&e.pair[0], &e.pair[1]) < 2)
        .map(|e| e.pair.clone())
        .collect();
    let isometric_copy = if opts.isometric_copy {
        Some(copy_check(x, d, opts, &phi)?)
    } else {
        None
    };
    let against = match against {
        Some((y, dy)) => Some(against_check(&phi, &entries, x, y, dy, opts)?),
        None => None,
    };
    let passed = all_contained
        && structure_recovered
        && widths_nonincreasing
        && sharp != Some(false)
        && isometric_copy.as_ref().is_none_or(|c| c.vertex_sets_equal)
        && against
            .as_ref()
            .is_none_or(|a| a.isometric == (a.matching_permutations > 0));
    Ok(RoundtripReport {
        depth: params.depth,
        dim: phi.dim(),
        vertices: phi.poly().len(),
        entries,
        all_contained,
        max_width: mw,
        smallest_window,
        full_cycle,
        sharp,
        checkpoints,
        widths_nonincreasing,
        low_confidence,
        structure_recovered,
        isometric_copy,
        against,
        passed,
    })
}

/// A copy of `x` with points shuffled by `seed` and labels primed.
pub fn relabeled_copy(x: &FiniteMetricSpace, seed: u64) -> Result<FiniteMetricSpace> {
    let order = rng::permutation(&mut rng::seeded(seed), x.len());
    let labels = order.iter().map(|&i| format!("{}'", x.label(i))).collect();
    x.reindexed(&order, labels)
}

/// Φ of `y` with its enumeration aligned to `d` through an isometry.
pub fn aligned_phi(
    x: &FiniteMetricSpace,
    d: &Enumeration,
    y: &Arc<FiniteMetricSpace>,
    coords: Option<usize>,
    params: &PhiParams,
) -> Result<Option<(PhiStage, Vec<(String, String)>)>> {
    let Some(w) = brute_force_isometry(x, y)? else {
        return Ok(None);
    };
    let labels: Vec<String> = d
        .labels()
        .iter()
        .map(|l| w.map_label(l).expect("witness is total").to_string())
        .collect();
    let dy = Enumeration::new(labels, y)?;
    Ok(Some((standard_phi(y, &dy, coords, params)?, w.mapping)))
}

fn copy_check(
    x: &Arc<FiniteMetricSpace>,
    d: &Enumeration,
    opts: &RoundtripOptions,
    phi: &PhiStage,
) -> Result<CopyCheck> {
    let y = Arc::new(relabeled_copy(x, opts.seed)?);
    let (phi_y, mapping) = aligned_phi(x, d, &y, opts.coords, &opts.params)?.expect("a relabeled copy is isometric");
    Ok(CopyCheck {
        mapping,
        vertex_sets_equal: phi_y.poly().point_set() == phi.poly().point_set(),
    })
}

fn sorted_intervals(entries: &[DecodeEntry]) -> Vec<Option<(Rational, Rational)>> {
    let mut v: Vec<_> = entries
        .iter()
        .map(|e| match &e.interval {
            Interval::Closed(lo, hi) => Some((lo.clone(), hi.clone())),
            Interval::Undetermined => None,
        })
        .collect();
    v.sort();
    v
}

fn against_check(
    phi: &PhiStage,
    entries: &[DecodeEntry],
    x: &Arc<FiniteMetricSpace>,
    y: &Arc<FiniteMetricSpace>,
    dy: &Enumeration,
    opts: &RoundtripOptions,
) -> Result<AgainstCheck> {
    guard(y)?;
    let isometric = brute_force_isometry(x, y)?.is_some();
    let target = phi.poly().point_set();
    let orders = permutations(dy.len());
    let build = |perm: &Vec<usize>| -> Result<bool> {
        let e = Enumeration::new(perm.iter().map(|&i| dy.get(i).to_string()), y)?;
        Ok(standard_phi(y, &e, opts.coords, &opts.params)?.poly().point_set() == target)
    };
    #[cfg(feature = "parallel")]
    let hits: Vec<bool> = {
        use rayon::prelude::*;
        orders.par_iter().map(build).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let hits: Vec<bool> = orders.iter().map(build).collect::<Result<_>>()?;
    let phi_y = standard_phi(y, dy, opts.coords, &opts.params)?;
    let (decoded, _) = decode_phi(&phi_y, opts)?;
    Ok(AgainstCheck {
        isometric,
        permutations_checked: orders.len(),
        matching_permutations: hits.iter().filter(|h| **h).count(),
        decoded_differs: sorted_intervals(&decoded) != sorted_intervals(entries),
        decoded,
    })
}

/// Depth of one full scheme cycle for `(x, d)` over `widths`.
pub fn cycle_depth(x: &FiniteMetricSpace, d: &Enumeration, widths: &[Rational]) -> Result<usize> {
    Ok(build_scheme(x, d, widths, 0)?.cycle_len)
}
