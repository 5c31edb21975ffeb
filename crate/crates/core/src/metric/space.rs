use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A finite metric space with exact distances.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    d: Vec<Vec<Rational>>,
    unit_bounded: bool,
}

#[derive(Deserialize)]
struct RawSpace {
    labels: Vec<String>,
    d: Vec<Vec<Rational>>,
    #[serde(default)]
    unit_bounded: bool,
}

impl TryFrom<RawSpace> for FiniteMetricSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        Ok(validate_metric(raw.labels, raw.d, raw.unit_bounded)?)
    }
}

/// Why a candidate matrix is not a metric. Points are named by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum MetricViolation {
    Empty,
    NotSquare {
        rows: usize,
        labels: usize,
    },
    DuplicateLabel {
        label: String,
    },
    NegativeDistance {
        a: String,
        b: String,
    },
    NonzeroDiagonal {
        point: String,
    },
    ZeroDistance {
        a: String,
        b: String,
    },
    Asymmetric {
        a: String,
        b: String,
    },
    /// `d(a,c) > d(a,b) + d(b,c)`.
    Triangle {
        a: String,
        b: String,
        c: String,
    },
    ExceedsUnit {
        a: String,
        b: String,
    },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::Empty => write!(f, "empty space"),
            MetricViolation::NotSquare { rows, labels } => {
                write!(f, "matrix is not square over {labels} labels ({rows} rows)")
            }
            MetricViolation::DuplicateLabel { label } => write!(f, "duplicate label {label:?}"),
            MetricViolation::NegativeDistance { a, b } => write!(f, "negative distance between {a} and {b}"),
            MetricViolation::NonzeroDiagonal { point } => write!(f, "nonzero self-distance at {point}"),
            MetricViolation::ZeroDistance { a, b } => write!(f, "distinct points {a} and {b} at distance 0"),
            MetricViolation::Asymmetric { a, b } => write!(f, "asymmetric distance between {a} and {b}"),
            MetricViolation::Triangle { a, b, c } => {
                write!(f, "triangle inequality fails: d({a},{c}) > d({a},{b}) + d({b},{c})")
            }
            MetricViolation::ExceedsUnit { a, b } => write!(f, "d({a},{b}) exceeds 1 in a unit-bounded space"),
        }
    }
}

/// Checks a labeled matrix and returns it as a metric space.
///
/// When `unit_bounded` is requested every entry must be at most 1; otherwise
/// the flag is set exactly when the diameter is at most 1.
pub fn validate_metric(
    labels: Vec<String>,
    d: Vec<Vec<Rational>>,
    unit_bounded: bool,
) -> std::result::Result<FiniteMetricSpace, MetricViolation> {
    let n = labels.len();
    if n == 0 {
        return Err(MetricViolation::Empty);
    }
    if d.len() != n || d.iter().any(|r| r.len() != n) {
        return Err(MetricViolation::NotSquare {
            rows: d.len(),
            labels: n,
        });
    }
    let mut seen = HashSet::new();
    for l in &labels {
        if !seen.insert(l.as_str()) {
            return Err(MetricViolation::DuplicateLabel { label: l.clone() });
        }
    }
    let name = |i: usize| labels[i].clone();
    for i in 0..n {
        if !d[i][i].is_zero() {
            return Err(MetricViolation::NonzeroDiagonal { point: name(i) });
        }
        for j in 0..n {
            if d[i][j].is_negative() {
                return Err(MetricViolation::NegativeDistance { a: name(i), b: name(j) });
            }
            if d[i][j] != d[j][i] {
                return Err(MetricViolation::Asymmetric { a: name(i), b: name(j) });
            }
            if i != j && d[i][j].is_zero() {
                return Err(MetricViolation::ZeroDistance { a: name(i), b: name(j) });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if d[i][k] > &d[i][j] + &d[j][k] {
                    return Err(MetricViolation::Triangle {
                        a: name(i),
                        b: name(j),
                        c: name(k),
                    });
                }
            }
        }
    }
    let bounded = d.iter().flatten().all(|v| *v <= Rational::one());
    if unit_bounded && !bounded {
        let (i, j) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| d[i][j] > Rational::one())
            .expect("some entry exceeds 1");
        return Err(MetricViolation::ExceedsUnit { a: name(i), b: name(j) });
    }
    Ok(FiniteMetricSpace {
        labels,
        d,
        unit_bounded: bounded,
    })
}

impl FiniteMetricSpace {
    /// Convenience constructor from string labels and a matrix.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>, d: Vec<Vec<Rational>>) -> Result<Self> {
        Ok(validate_metric(labels.into_iter().map(Into::into).collect(), d, false)?)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.d
    }

    pub fn is_unit_bounded(&self) -> bool {
        self.unit_bounded
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.d[i][j]
    }

    pub fn dist_by_label(&self, a: &str, b: &str) -> Result<&Rational> {
        Ok(&self.d[self.index_of(a)?][self.index_of(b)?])
    }

    pub fn diameter(&self) -> Rational {
        self.d.iter().flatten().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// Smallest distance between distinct points, if there are two points.
    pub fn min_separation(&self) -> Option<Rational> {
        self.d.iter().flatten().filter(|v| !v.is_zero()).min().cloned()
    }

    /// Row `i` of the distance matrix: the Kuratowski profile of point `i`.
    pub fn row(&self, i: usize) -> &[Rational] {
        &self.d[i]
    }

    /// The same space with points reordered so that new point `i` is old
    /// point `order[i]`, and relabeled with `labels`.
    pub fn reindexed(&self, order: &[usize], labels: Vec<String>) -> Result<Self> {
        let d = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.d[i][j].clone()).collect())
            .collect();
        Ok(validate_metric(labels, d, false)?)
    }
}

/// Entrywise `d ↦ d/(1+d)`.
pub fn normalize_diameter(m: &FiniteMetricSpace) -> FiniteMetricSpace {
    let d =
        m.d.iter()
            .map(|row| row.iter().map(|v| v / (Rational::one() + v)).collect())
            .collect();
    FiniteMetricSpace {
        labels: m.labels.clone(),
        d,
        unit_bounded: true,
    }
}
