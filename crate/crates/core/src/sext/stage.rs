use std::collections::HashSet;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{RationalPoint, VPolytope};
use crate::linalg;
use crate::metric::{FiniteMetricSpace, PointFunction};
use crate::rational::Rational;

/// An ordered list of distinct points of a space: the finite stand-in for a
/// dense sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Enumeration(Vec<String>);

impl Enumeration {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>, space: &FiniteMetricSpace) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Empty("enumeration"));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            space.index_of(l)?;
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Enumeration(labels))
    }

    /// Every point of the space in its stored order.
    pub fn full(space: &FiniteMetricSpace) -> Self {
        Enumeration(space.labels().to_vec())
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.0.iter().position(|l| l == label)
    }
}

/// The distance functions `d(., d_i)` to the points of `d`, in order.
pub fn dxd(space: &Arc<FiniteMetricSpace>, d: &Enumeration) -> Result<Vec<PointFunction>> {
    d.labels()
        .iter()
        .map(|l| PointFunction::distance_to(space, space.index_of(l)?))
        .collect()
}

/// Stage `(n, k)`: the hull of `a_1..a_n` with `a_i[j] = f_j(d_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SStage {
    base: Arc<FiniteMetricSpace>,
    enumeration: Enumeration,
    functions: Vec<PointFunction>,
    n: usize,
    poly: VPolytope,
}

impl SStage {
    pub fn base(&self) -> &Arc<FiniteMetricSpace> {
        &self.base
    }

    pub fn enumeration(&self) -> &Enumeration {
        &self.enumeration
    }

    /// The `k` functions spanning the coordinates.
    pub fn functions(&self) -> &[PointFunction] {
        &self.functions
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.functions.len()
    }

    pub fn poly(&self) -> &VPolytope {
        &self.poly
    }

    /// `(f_1(x), ..., f_k(x))`.
    pub fn embed_point(&self, label: &str) -> Result<RationalPoint> {
        let i = self.base.index_of(label)?;
        Ok(self.embed_index(i))
    }

    pub(crate) fn embed_index(&self, i: usize) -> RationalPoint {
        RationalPoint::new(self.functions.iter().map(|f| f.value(i).clone()).collect())
            .expect("certified functions take values in [0,1]")
    }
}

impl Serialize for SStage {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Func<'a> {
            name: &'a str,
            values: &'a [Rational],
        }
        #[derive(Serialize)]
        struct View<'a> {
            space: &'a FiniteMetricSpace,
            enumeration: &'a Enumeration,
            n: usize,
            k: usize,
            functions: Vec<Func<'a>>,
            polytope: &'a VPolytope,
        }
        View {
            space: &self.base,
            enumeration: &self.enumeration,
            n: self.n,
            k: self.k(),
            functions: self
                .functions
                .iter()
                .map(|f| Func {
                    name: f.name(),
                    values: f.values(),
                })
                .collect(),
            polytope: &self.poly,
        }
        .serialize(s)
    }
}

pub fn build_stage(
    x: &Arc<FiniteMetricSpace>,
    d: &Enumeration,
    f: &[PointFunction],
    n: usize,
    k: usize,
) -> Result<SStage> {
    if n > d.len() {
        return Err(Error::IndexOverflow(format!("n = {n} exceeds |D| = {}", d.len())));
    }
    if k > f.len() {
        return Err(Error::IndexOverflow(format!("k = {k} exceeds |F| = {}", f.len())));
    }
    if n == 0 {
        return Err(Error::Empty("stage vertex list"));
    }
    for func in &f[..k] {
        if **func.base() != **x {
            return Err(Error::MismatchedBase);
        }
        if !func.is_certified() {
            return Err(Error::Uncertified(func.name().to_string()));
        }
    }
    let functions = f[..k].to_vec();
    let mut vertices = Vec::with_capacity(n);
    for label in &d.labels()[..n] {
        let i = x.index_of(label)?;
        vertices.push(RationalPoint::new(
            functions.iter().map(|g| g.value(i).clone()).collect(),
        )?);
    }
    let poly = VPolytope::new(k, vertices, d.labels()[..n].to_vec())?;
    Ok(SStage {
        base: Arc::clone(x),
        enumeration: d.clone(),
        functions,
        n,
        poly,
    })
}

/// Result of [`check_saturation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationCheck {
    pub saturated: bool,
    /// Indices into `F` of the first independent columns of the evaluation
    /// matrix, lowest index first.
    pub witnesses: Vec<usize>,
    pub rank: usize,
}

/// Whether some `n` members of `f` have linearly independent evaluation
/// vectors on the `n` targets.
pub fn check_saturation(f: &[PointFunction], targets: &[&str], x: &FiniteMetricSpace) -> Result<SaturationCheck> {
    let rows: Vec<usize> = targets.iter().map(|t| x.index_of(t)).collect::<Result<_>>()?;
    let m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&i| f.iter().map(|g| g.value(i).clone()).collect())
        .collect();
    let cols = if f.is_empty() {
        Vec::new()
    } else {
        linalg::independent_columns(&m)
    };
    Ok(SaturationCheck {
        saturated: cols.len() == targets.len(),
        rank: cols.len(),
        witnesses: cols,
    })
}

/// Which stage vertices came out extreme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremeReport {
    pub extreme: Vec<String>,
    /// `(label, label of the earlier equal vertex)`.
    pub degenerate: Vec<(String, String)>,
    pub failures: Vec<String>,
    pub passed: bool,
}

pub fn verify_extreme_embedding(stage: &SStage) -> ExtremeReport {
    let poly = stage.poly();
    let ext: HashSet<usize> = crate::geometry::extreme_indices(poly).into_iter().collect();
    let mut report = ExtremeReport {
        extreme: Vec::new(),
        degenerate: Vec::new(),
        failures: Vec::new(),
        passed: true,
    };
    for (i, v) in poly.vertices().iter().enumerate() {
        let label = poly.labels()[i].clone();
        if let Some(j) = poly.vertices()[..i].iter().position(|u| u == v) {
            report.degenerate.push((label, poly.labels()[j].clone()));
        } else if ext.contains(&i) {
            report.extreme.push(label);
        } else {
            report.failures.push(label);
        }
    }
    report.passed = report.failures.is_empty();
    report
}
