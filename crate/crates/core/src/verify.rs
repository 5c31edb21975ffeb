//! Named invariant suites over a seeded corpus or a single input object.
//!
//! Every check records how many cases it ran and the first counterexample;
//! reports carry no timings, so a fixed seed gives byte-identical output.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::codec::{
    aligned_phi, build_scheme, cycle_depth, decode_all, default_neighborhood, detect_geometric, ground_truth,
    relabeled_copy, standard_phi, PhiParams,
};
use crate::cone::{
    cone, decompose, double_cone_swap, extend_affine_to_cone, extension_discrepancy, iterated_cone, recombine, subcone,
    subcone_is_face, swap_cone, swap_parameters,
};
use crate::error::{Error, Result};
use crate::geometry::{
    apply_affine, extreme_points, hausdorff_distance, in_convex_hull, is_face, AffineMap, HilbertMetric, RationalPoint,
    VPolytope,
};
use crate::linalg;
use crate::metric::{
    convex_combine_katetov, is_katetov, katetov_extend, saturation_witnesses, FiniteMetricSpace, KatetovFunction,
    PointFunction,
};
use crate::rational::Rational;
use crate::rng::{self, Rng};
use crate::sext::{build_stage, build_twisted, dxd, verify_extreme_embedding, verify_twisted, Enumeration};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Geometry,
    Cones,
    Sext,
    Codec,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Geometry, Suite::Cones, Suite::Sext, Suite::Codec],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "geometry" => Suite::Geometry,
            "cones" => Suite::Cones,
            "sext" => Suite::Sext,
            "codec" => Suite::Codec,
            "all" => Suite::All,
            other => return Err(Error::Parse(format!("unknown suite {other:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Geometry => "geometry",
            Suite::Cones => "cones",
            Suite::Sext => "sext",
            Suite::Codec => "codec",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

/// A polytope as read from disk, before any validation.
#[derive(Clone, Debug, Deserialize)]
pub struct RawPolytope {
    pub dim: usize,
    pub vertices: Vec<Vec<Rational>>,
    #[serde(default)]
    pub labels: Vec<String>,
}

/// What a suite runs on besides its generated corpus.
#[derive(Clone, Debug)]
pub enum VerifyInput {
    Generated,
    Polytope(RawPolytope),
    Space(FiniteMetricSpace),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            cases: 0,
            failures: 0,
            counterexample: None,
            passed: true,
        }
    }

    /// Records one case; an `Err` counts as a failure.
    fn case(&mut self, outcome: Result<bool>, describe: impl FnOnce() -> String) {
        self.cases += 1;
        let fail = match outcome {
            Ok(true) => None,
            Ok(false) => Some(describe()),
            Err(e) => Some(format!("{}: {e}", describe())),
        };
        if let Some(msg) = fail {
            self.failures += 1;
            self.passed = false;
            self.counterexample.get_or_insert(msg);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run_suite(suite: Suite, input: &VerifyInput, seed: u64) -> Vec<SuiteReport> {
    suite
        .expand()
        .into_iter()
        .map(|s| {
            let checks = match s {
                Suite::Geometry => geometry(input, seed),
                Suite::Cones => cones(input, seed),
                Suite::Sext => sext(input, seed),
                Suite::Codec => codec(input, seed),
                Suite::All => unreachable!("expanded"),
            };
            SuiteReport {
                suite: s,
                seed,
                passed: checks.iter().all(|c| c.passed),
                checks,
            }
        })
        .collect()
}

fn polytope_corpus(rng: &mut Rng) -> Vec<VPolytope> {
    let mut out = Vec::new();
    for i in 0..12 {
        let dim = 1 + i % 3;
        let n = 2 + i % 4;
        out.push(rng::polytope(rng, dim, n, 4));
    }
    out
}

fn space_corpus(rng: &mut Rng, count: usize) -> Vec<Arc<FiniteMetricSpace>> {
    (0..count).map(|i| Arc::new(rng::space(rng, 2 + i % 3, 4))).collect()
}

/// Structural invariants of a raw polytope; `Some` once they all hold.
fn structural(raw: &RawPolytope, checks: &mut Vec<Check>) -> Option<VPolytope> {
    let mut nonempty = Check::new("non-empty");
    nonempty.case(Ok(!raw.vertices.is_empty()), || "vertex list is empty".into());
    let mut dims = Check::new("dims-agree");
    for (i, v) in raw.vertices.iter().enumerate() {
        dims.case(Ok(v.len() == raw.dim), || {
            format!("vertex {i} has {} coordinates, dim {}", v.len(), raw.dim)
        });
    }
    let mut cube = Check::new("vertices-in-cube");
    for (i, v) in raw.vertices.iter().enumerate() {
        cube.case(Ok(v.iter().all(Rational::in_unit_interval)), || {
            format!("vertex {i} leaves [0,1]")
        });
    }
    let labels: Vec<String> = if raw.labels.is_empty() {
        (0..raw.vertices.len()).map(|i| format!("b{i}")).collect()
    } else {
        raw.labels.clone()
    };
    let mut unique = Check::new("labels-unique");
    let distinct: BTreeSet<&String> = labels.iter().collect();
    unique.case(
        Ok(distinct.len() == labels.len() && labels.len() == raw.vertices.len()),
        || "labels repeat or do not match the vertex count".into(),
    );
    let ok = [&nonempty, &dims, &cube, &unique].iter().all(|c| c.passed);
    checks.extend([nonempty, dims, cube, unique]);
    if !ok {
        return None;
    }
    let pts = raw
        .vertices
        .iter()
        .cloned()
        .map(RationalPoint::new)
        .collect::<Result<Vec<_>>>()
        .ok()?;
    VPolytope::new(raw.dim, pts, labels).ok()
}

/// Cube symmetries: a coordinate permutation followed by reflections.
fn cube_symmetry(rng: &mut Rng, dim: usize) -> AffineMap {
    use rand::Rng as _;
    let perm = rng::permutation(rng, dim);
    let mut matrix = vec![vec![Rational::zero(); dim]; dim];
    let mut offset = vec![Rational::zero(); dim];
    for (i, &j) in perm.iter().enumerate() {
        if rng.gen_bool(0.5) {
            matrix[i][j] = -Rational::one();
            offset[i] = Rational::one();
        } else {
            matrix[i][j] = Rational::one();
        }
    }
    AffineMap::new(matrix, offset, dim).expect("square map")
}

/// A map sending the cube into itself: rows are nonnegative with sum at most 1.
pub fn contraction(rng: &mut Rng, rows: usize, cols: usize) -> AffineMap {
    let matrix = (0..rows)
        .map(|_| {
            let mut w = rng::simplex_weights(rng, cols + 1, 6);
            w.pop();
            w
        })
        .collect();
    AffineMap::new(matrix, vec![Rational::zero(); rows], cols).expect("shape matches")
}

/// `(1 − t)·f + t·g` for maps of equal shape.
pub fn blend(f: &AffineMap, g: &AffineMap, t: &Rational) -> AffineMap {
    let s = Rational::one() - t;
    let matrix = f
        .matrix()
        .iter()
        .zip(g.matrix())
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| &s * x + t * y).collect())
        .collect();
    let offset = f.offset().iter().zip(g.offset()).map(|(x, y)| &s * x + t * y).collect();
    AffineMap::new(matrix, offset, f.cols()).expect("same shape")
}

/// Checks that vertex-wise agreement within `ε` survives at `samples` hull
/// points. Returns `(ε, worst sample distance)`.
pub fn affine_proximity(
    f: &AffineMap,
    g: &AffineMap,
    p: &VPolytope,
    samples: usize,
    rng: &mut Rng,
) -> Result<(Rational, Rational)> {
    let metric = HilbertMetric::new(f.rows());
    let mut eps = Rational::zero();
    for v in p.vertices() {
        let d = metric.distance_coords(&f.apply(v.coords())?, &g.apply(v.coords())?)?;
        eps = Rational::max_of(&eps, &d).clone();
    }
    let mut worst = Rational::zero();
    for _ in 0..samples {
        let x = rng::hull_point(rng, p.vertices(), 7);
        let d = metric.distance_coords(&f.apply(x.coords())?, &g.apply(x.coords())?)?;
        worst = Rational::max_of(&worst, &d).clone();
    }
    Ok((eps, worst))
}

fn geometry(input: &VerifyInput, seed: u64) -> Vec<Check> {
    let mut rng = rng::seeded(seed);
    let mut checks = Vec::new();
    let corpus = match input {
        VerifyInput::Polytope(raw) => match structural(raw, &mut checks) {
            Some(p) => vec![p],
            None => return checks,
        },
        _ => polytope_corpus(&mut rng),
    };
    let mut idem = Check::new("extreme-idempotent");
    let mut hull = Check::new("hull-consistency");
    let mut symmetric = Check::new("hausdorff-symmetric");
    let mut identity = Check::new("hausdorff-identity");
    let mut triangle = Check::new("hausdorff-triangle");
    let mut inverse = Check::new("affine-inverse");
    let mut proximity = Check::new("affine-proximity");
    for (i, p) in corpus.iter().enumerate() {
        let e = extreme_points(p);
        idem.case(Ok(extreme_points(&e) == e), || format!("polytope {i}"));
        for (v, l) in p.vertices().iter().zip(p.labels()) {
            if e.index_of(l).is_none() {
                hull.case(in_convex_hull(v, e.vertices()), || format!("polytope {i} vertex {l}"));
            }
        }
        let metric = p.metric();
        let others: Vec<&VPolytope> = corpus.iter().filter(|q| q.dim() == p.dim()).collect();
        for q in others.iter().take(3) {
            let pq = hausdorff_distance(p, q, &metric);
            let qp = hausdorff_distance(q, p, &metric);
            symmetric.case(Ok(pq == qp), || format!("polytope {i}"));
            let same = p.vertices().iter().all(|v| q.contains(v).unwrap_or(false))
                && q.vertices().iter().all(|v| p.contains(v).unwrap_or(false));
            identity.case(pq.as_ref().map(|d| d.is_zero() == same).map_err(Clone::clone), || {
                format!("polytope {i}")
            });
            for r in others.iter().take(3) {
                let ok = (|| -> Result<bool> {
                    let pr = hausdorff_distance(p, r, &metric)?;
                    let rq = hausdorff_distance(r, q, &metric)?;
                    Ok(hausdorff_distance(p, q, &metric)? <= pr + rq)
                })();
                triangle.case(ok, || format!("polytope {i}"));
            }
        }
        let f = cube_symmetry(&mut rng, p.dim());
        let ok = (|| -> Result<bool> {
            let back = apply_affine(&f.inverse()?, &apply_affine(&f, p)?)?;
            Ok(back == *p)
        })();
        inverse.case(ok, || format!("polytope {i}"));
        let f = contraction(&mut rng, p.dim(), p.dim());
        let g = blend(&f, &contraction(&mut rng, p.dim(), p.dim()), &Rational::new(1, 8));
        let ok = affine_proximity(&f, &g, p, 20, &mut rng).map(|(eps, worst)| worst <= eps);
        proximity.case(ok, || format!("polytope {i}"));
    }
    checks.extend([idem, hull, symmetric, identity, triangle, inverse, proximity]);
    checks
}

fn cones(input: &VerifyInput, seed: u64) -> Vec<Check> {
    let mut rng = rng::seeded(seed);
    let mut checks = Vec::new();
    let corpus = match input {
        VerifyInput::Polytope(raw) => match structural(raw, &mut checks) {
            Some(p) => vec![p],
            None => return checks,
        },
        _ => polytope_corpus(&mut rng),
    };
    let mut law = Check::new("cone-extreme-law");
    let mut face = Check::new("cone-base-face");
    let mut involution = Check::new("swap-involution");
    let mut swap_vertices = Check::new("swap-vertices");
    let mut roundtrip = Check::new("decompose-recombine");
    let mut extension = Check::new("extension-discrepancy");
    let mut sub = Check::new("subcone-face");
    let mut formula = Check::new("swap-formula");
    formula.case(
        Ok(swap_parameters(&Rational::new(1, 2), &Rational::new(1, 2)) == (Rational::new(1, 4), Rational::new(2, 3))),
        || "(1/2, 1/2) does not map to (1/4, 2/3)".into(),
    );
    for (i, p) in corpus.iter().enumerate() {
        let s1 = rng::hull_point(&mut rng, p.vertices(), 5);
        let s2 = rng::hull_point(&mut rng, p.vertices(), 5);
        let ok = cone(p, &s1, "v1").map(|c| extreme_points(c.poly()).len() == extreme_points(p).len() + 1);
        law.case(ok, || format!("polytope {i}"));
        let ok = cone(p, &s1, "v1").and_then(|c| {
            let base: Vec<&str> = p.labels().iter().map(String::as_str).collect();
            is_face(c.poly(), &base)
        });
        face.case(ok, || format!("polytope {i}"));
        let c12 = match iterated_cone(p, &[(s1.clone(), "v1".into()), (s2.clone(), "v2".into())]) {
            Ok(c) => c,
            Err(e) => {
                involution.case(Err(e), || format!("polytope {i}"));
                continue;
            }
        };
        let ok = (|| -> Result<bool> {
            let c21 = swap_cone(&c12)?;
            for _ in 0..10 {
                let y = rng::hull_point(&mut rng, c12.poly().vertices(), 6);
                let z = double_cone_swap(&c12, &y)?;
                if !c21.poly().contains(&z)? || double_cone_swap(&c21, &z)? != y {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        involution.case(ok, || format!("polytope {i}"));
        let ok = (|| -> Result<bool> {
            let c21 = swap_cone(&c12)?;
            let images = c12
                .poly()
                .vertices()
                .iter()
                .map(|v| double_cone_swap(&c12, v))
                .collect::<Result<BTreeSet<_>>>()?;
            Ok(images == c21.poly().point_set())
        })();
        swap_vertices.case(ok, || format!("polytope {i}"));
        let ok = (|| -> Result<bool> {
            let y = rng::hull_point(&mut rng, c12.poly().vertices(), 6);
            Ok(recombine(&c12, &decompose(&c12, &y)?)? == y)
        })();
        roundtrip.case(ok, || format!("polytope {i}"));
        let ok = (|| -> Result<bool> {
            let phi = AffineMap::identity(p.dim());
            let eps = Rational::one();
            let ext = extend_affine_to_cone(&phi, &s1, &s2, &eps)?;
            let c = cone(p, &s1, "v1")?;
            Ok(extension_discrepancy(&phi, &ext, &c)? < eps)
        })();
        extension.case(ok, || format!("polytope {i}"));
        let ok = subcone(&c12, &["v2"]).and_then(|s| subcone_is_face(&c12, &s));
        sub.case(ok, || format!("polytope {i}"));
    }
    checks.extend([law, face, formula, involution, swap_vertices, roundtrip, extension, sub]);
    checks
}

fn spaces(input: &VerifyInput, rng: &mut Rng, count: usize) -> Vec<Arc<FiniteMetricSpace>> {
    match input {
        VerifyInput::Space(x) => vec![Arc::new(x.clone())],
        _ => space_corpus(rng, count),
    }
}

/// Pool points `(1 − t)·d(x_i, ·) + t` for each target, plus `extra` blends
/// distinct blends of two such profiles, realized with `katetov_extend`.
pub fn saturation_pool(
    x: &Arc<FiniteMetricSpace>,
    rng: &mut Rng,
    extra: usize,
) -> Result<(FiniteMetricSpace, Vec<String>)> {
    use rand::Rng as _;
    let n = x.len();
    let one = Rational::one();
    let mut fs = Vec::new();
    for i in 0..n {
        let t = Rational::new(rng.gen_range(1..8), 8);
        let values = x.row(i).iter().map(|d| &(&one - &t) * d + &t).collect();
        fs.push(KatetovFunction::new(x, values)?);
    }
    // Blends that repeat an existing profile would be points at distance 0.
    let mut attempts = 0;
    while fs.len() < n + extra && attempts < 16 * (extra + 1) {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let alpha = Rational::new(rng.gen_range(1..6), 6);
        let f = convex_combine_katetov(&fs[a], &fs[b], &alpha)?;
        if fs.iter().all(|g| g.values() != f.values()) {
            fs.push(f);
        }
    }
    let labels: Vec<String> = (1..=fs.len()).map(|j| format!("w{j}")).collect();
    Ok((katetov_extend(x, &fs, &labels)?, labels))
}

/// `|b − Σα_i b_i| ≤ Σα_i a_i + δ` given `|b − b_i| ≤ a_i + δ`.
pub fn convex_estimate(b: &Rational, bs: &[Rational], alphas: &[Rational], a: &[Rational], delta: &Rational) -> bool {
    let hypothesis = bs.iter().zip(a).all(|(bi, ai)| (b - bi).abs() <= ai + delta);
    let mix: Rational = alphas.iter().zip(bs).map(|(w, bi)| w * bi).sum();
    let bound: Rational = alphas.iter().zip(a).map(|(w, ai)| w * ai).sum::<Rational>() + delta.clone();
    !hypothesis || (b - &mix).abs() <= bound
}

fn sext(input: &VerifyInput, seed: u64) -> Vec<Check> {
    use rand::Rng as _;
    let mut rng = rng::seeded(seed);
    let corpus = spaces(input, &mut rng, 6);
    let mut agree = Check::new("embedding-agreement");
    let mut lipschitz = Check::new("lipschitz-embedding");
    let mut monotone = Check::new("stage-monotone");
    let mut extreme = Check::new("extreme-embedding");
    let mut simplex = Check::new("simplex-certificate");
    let mut equivariant = Check::new("permutation-equivariance");
    let mut saturation = Check::new("saturation-determinant");
    let mut twisted = Check::new("twisted-reordered");
    let mut closure = Check::new("katetov-closure");
    let mut estimates = Check::new("convex-estimates");
    for (i, x) in corpus.iter().enumerate() {
        let d = Enumeration::full(x);
        let f = match dxd(x, &d) {
            Ok(f) => f,
            Err(e) => {
                agree.case(Err(e), || format!("space {i}"));
                continue;
            }
        };
        let n = d.len();
        let stage = match build_stage(x, &d, &f, n, n) {
            Ok(s) => s,
            Err(e) => {
                agree.case(Err(e), || format!("space {i}"));
                continue;
            }
        };
        for (j, l) in d.labels().iter().enumerate() {
            agree.case(stage.embed_point(l).map(|p| p == stage.poly().vertices()[j]), || {
                format!("space {i} point {l}")
            });
        }
        let metric = HilbertMetric::new(n);
        for a in 0..n {
            for b in a + 1..n {
                let ok = (|| -> Result<bool> {
                    let pa = stage.embed_point(d.get(a))?;
                    let pb = stage.embed_point(d.get(b))?;
                    Ok(metric.distance(&pa, &pb)? <= *x.dist(a, b))
                })();
                lipschitz.case(ok, || format!("space {i} pair ({}, {})", d.get(a), d.get(b)));
            }
        }
        for m in 1..n {
            let ok = (|| -> Result<bool> {
                let small = build_stage(x, &d, &f, m, n)?;
                let big = build_stage(x, &d, &f, m + 1, n)?;
                for v in small.poly().vertices() {
                    if !big.poly().contains(v)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            })();
            monotone.case(ok, || format!("space {i} stage {m}"));
        }
        extreme.case(Ok(verify_extreme_embedding(&stage).passed), || format!("space {i}"));
        let ok = (|| -> Result<bool> {
            let targets: Vec<&str> = d.labels().iter().map(String::as_str).collect();
            let sat = crate::sext::check_saturation(&f, &targets, x)?;
            if !sat.saturated {
                return Ok(true);
            }
            let v = stage.poly().vertices();
            let diffs: Vec<Vec<Rational>> = v[1..]
                .iter()
                .map(|p| p.coords().iter().zip(v[0].coords()).map(|(a, b)| a - b).collect())
                .collect();
            Ok(diffs.is_empty() || linalg::rank(&diffs) == n - 1)
        })();
        simplex.case(ok, || format!("space {i}"));
        let ok = (|| -> Result<bool> {
            let perm = rng::permutation(&mut rng, n);
            let g: Vec<PointFunction> = perm.iter().map(|&j| f[j].clone()).collect();
            let permuted = build_stage(x, &d, &g, n, n)?;
            let map = AffineMap::coordinate_permutation(&perm)?;
            Ok(apply_affine(&map, stage.poly())? == *permuted.poly())
        })();
        equivariant.case(ok, || format!("space {i}"));
        let ok = (|| -> Result<bool> {
            let (ext, pool) = saturation_pool(x, &mut rng, n)?;
            let targets: Vec<&str> = x.labels().iter().map(String::as_str).collect();
            let pool: Vec<&str> = pool.iter().map(String::as_str).collect();
            Ok(!saturation_witnesses(&targets, &pool, &ext)?.determinant.is_zero())
        })();
        saturation.case(ok, || format!("space {i}"));
        let ok = (|| -> Result<bool> {
            let rev = Enumeration::new(d.labels().iter().rev().cloned(), x)?;
            let seq = build_twisted(x, &d, &rev, &f, n)?;
            let r = verify_twisted(&seq)?;
            Ok(r.passed && r.final_gap.is_zero())
        })();
        twisted.case(ok, || format!("space {i}"));
        for _ in 0..10 {
            let ok = (|| -> Result<bool> {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                let fa = KatetovFunction::try_from(PointFunction::distance_to(x, a)?)?;
                let fb = KatetovFunction::try_from(PointFunction::distance_to(x, b)?)?;
                let alpha = rng::unit_rational(&mut rng, 8);
                let h = convex_combine_katetov(&fa, &fb, &alpha)?;
                Ok(is_katetov(&PointFunction::new(x, "h", h.values().to_vec())?))
            })();
            closure.case(ok, || format!("space {i}"));
        }
    }
    for j in 0..50 {
        let m = 1 + j % 4;
        let b = rng::unit_rational(&mut rng, 8);
        let a: Vec<Rational> = (0..m).map(|_| rng::unit_rational(&mut rng, 8)).collect();
        let delta = rng::unit_rational(&mut rng, 8) / Rational::from_integer(4);
        let bs: Vec<Rational> = a
            .iter()
            .map(|ai| {
                let reach = ai + &delta;
                let t = rng::unit_rational(&mut rng, 8);
                let lo = Rational::max_of(&Rational::zero(), &(&b - &reach)).clone();
                let hi = Rational::min_of(&Rational::one(), &(&b + &reach)).clone();
                &lo + &(&t * &(&hi - &lo))
            })
            .collect();
        let alphas = rng::simplex_weights(&mut rng, m, 6);
        estimates.case(Ok(convex_estimate(&b, &bs, &alphas, &a, &delta)), || {
            format!("instance {j}")
        });
    }
    vec![
        agree,
        lipschitz,
        monotone,
        extreme,
        simplex,
        equivariant,
        saturation,
        twisted,
        closure,
        estimates,
    ]
}

fn codec(input: &VerifyInput, seed: u64) -> Vec<Check> {
    let mut rng = rng::seeded(seed);
    let corpus = spaces(input, &mut rng, 3);
    let widths = vec![Rational::new(1, 2), Rational::new(1, 4)];
    let mut sound = Check::new("scheme-soundness");
    let mut marker = Check::new("marker-geometry");
    let mut structure = Check::new("structure-recovery");
    let mut decoder = Check::new("decoder-soundness");
    let mut sharp = Check::new("decoder-sharpness");
    let mut invariance = Check::new("isometry-invariance");
    for (i, x) in corpus.iter().enumerate() {
        let d = Enumeration::full(x);
        let depth = match cycle_depth(x, &d, &widths) {
            Ok(t) => t,
            Err(e) => {
                sound.case(Err(e), || format!("space {i}"));
                continue;
            }
        };
        let params = PhiParams::new(widths.clone(), depth);
        let ok = build_scheme(x, &d, &widths, depth).map(|s| {
            s.triples.iter().all(|t| {
                x.dist_by_label(&t.x, &t.y)
                    .map(|v| t.window.contains(v))
                    .unwrap_or(false)
            })
        });
        sound.case(ok, || format!("space {i}"));
        let phi = match standard_phi(x, &d, None, &params) {
            Ok(p) => p,
            Err(e) => {
                structure.case(Err(e), || format!("space {i}"));
                continue;
            }
        };
        let ok = (|| -> Result<bool> {
            let base = phi.blowup.stage.poly().lifted(phi.blowup.cone.depth());
            for m in &phi.markers.markers {
                let (l1, l2) = crate::codec::apex_labels(m.triple);
                let c1 = phi.blowup.cone.apex_point(&l1)?;
                let c2 = phi.blowup.cone.apex_point(&l2)?;
                let strictly_inside = m.q.is_positive() && m.q < Rational::one() && c1.lerp(c2, &m.q)? == m.point;
                if !strictly_inside || in_convex_hull(&m.point, base.vertices())? {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        marker.case(ok, || format!("space {i}"));
        let s = match detect_geometric(phi.poly()) {
            Ok(s) => s,
            Err(e) => {
                structure.case(Err(e), || format!("space {i}"));
                continue;
            }
        };
        structure.case(
            Ok(s.ambiguous.is_empty() && s.partition() == ground_truth(&phi)),
            || format!("space {i}"),
        );
        let smallest = widths.iter().min().expect("widths").clone();
        let ok = default_neighborhood(&phi, &s).and_then(|r| decode_all(&phi, &s, &r));
        match ok {
            Ok(entries) => {
                for e in &entries {
                    decoder.case(Ok(e.contains), || format!("space {i} pair {:?}", e.pair));
                    sharp.case(Ok(e.interval.width().is_some_and(|w| w <= smallest)), || {
                        format!("space {i} pair {:?}", e.pair)
                    });
                }
            }
            Err(e) => decoder.case(Err(e), || format!("space {i}")),
        }
        let ok = (|| -> Result<bool> {
            let y = Arc::new(relabeled_copy(x, rand::Rng::gen(&mut rng))?);
            let (phi_y, _) = aligned_phi(x, &d, &y, None, &params)?.expect("relabeled copy is isometric");
            Ok(phi_y.poly().point_set() == phi.poly().point_set())
        })();
        invariance.case(ok, || format!("space {i}"));
    }
    vec![sound, marker, structure, decoder, sharp, invariance]
}
