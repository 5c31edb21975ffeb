use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::rational::Rational;
use crate::sext::Enumeration;

/// A basic open window `(c − w/2, c + w/2) ∩ [0,1]` with `c` on the grid
/// `(w/2)·ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    center: Rational,
    width: Rational,
}

impl Window {
    pub fn new(center: Rational, width: Rational) -> Self {
        Window { center, width }
    }

    pub fn center(&self) -> &Rational {
        &self.center
    }

    /// Unclipped width `w`.
    pub fn width(&self) -> &Rational {
        &self.width
    }

    fn half(&self) -> Rational {
        &self.width / Rational::from_integer(2)
    }

    /// Lower end after clipping to `[0,1]`.
    pub fn lo(&self) -> Rational {
        let lo = &self.center - self.half();
        if lo.is_negative() {
            Rational::zero()
        } else {
            lo
        }
    }

    /// Upper end after clipping to `[0,1]`.
    pub fn hi(&self) -> Rational {
        let hi = &self.center + self.half();
        if hi > Rational::one() {
            Rational::one()
        } else {
            hi
        }
    }

    pub fn contains(&self, d: &Rational) -> bool {
        let h = self.half();
        d.in_unit_interval() && *d > &self.center - &h && *d < &self.center + &h
    }

    /// Every grid window of width `w` containing `d`, in ascending order.
    pub fn admissible(d: &Rational, w: &Rational) -> Vec<Window> {
        let h = w / Rational::from_integer(2);
        let top = (Rational::one() / &h).floor();
        let below = (d / &h).floor();
        let mut out = Vec::new();
        for a in [below.clone() - 1, below.clone(), below + 1] {
            if a < 0.into() || a > top {
                continue;
            }
            let win = Window::new(&h * Rational::from_bigint(a), w.clone());
            if win.contains(d) {
                out.push(win);
            }
        }
        out
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo(), self.hi()].serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeTriple {
    pub x: String,
    pub y: String,
    pub window: Window,
}

/// A truncated fair enumeration of `(x, y, U)` triples.
///
/// One cycle lists, for each width in the given order, each unordered pair
/// `i < j` of the enumeration, each admissible window in ascending order.
/// Triple `n` (0-based) is entry `n mod T` of the cycle, where `T` is the
/// cycle length, so cycle `n div T` repeats everything.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricScheme {
    pub triples: Vec<SchemeTriple>,
    pub widths: Vec<Rational>,
    pub depth: usize,
    pub cycle_len: usize,
}

impl MetricScheme {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Occurrences of the unordered pair `{a, b}`.
    pub fn occurrences(&self, a: &str, b: &str) -> usize {
        self.triples
            .iter()
            .filter(|t| (t.x == a && t.y == b) || (t.x == b && t.y == a))
            .count()
    }

    /// Depths at which each width level of the first cycle is complete.
    pub fn width_checkpoints(&self, x: &FiniteMetricSpace, d: &Enumeration) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        let mut acc = 0;
        for w in &self.widths {
            acc += level(x, d, w)?.len();
            out.push(acc);
        }
        Ok(out)
    }
}

fn level(x: &FiniteMetricSpace, d: &Enumeration, w: &Rational) -> Result<Vec<SchemeTriple>> {
    let mut out = Vec::new();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let (a, b) = (d.get(i), d.get(j));
            let dist = x.dist_by_label(a, b)?;
            let windows = Window::admissible(dist, w);
            if windows.is_empty() {
                return Err(Error::Precondition(format!(
                    "no window of width {w} contains d({a},{b})"
                )));
            }
            out.extend(windows.into_iter().map(|window| SchemeTriple {
                x: a.to_string(),
                y: b.to_string(),
                window,
            }));
        }
    }
    Ok(out)
}

/// First `depth` triples of the scheme of `(X, D)` over dyadic `widths`.
pub fn build_scheme(x: &FiniteMetricSpace, d: &Enumeration, widths: &[Rational], depth: usize) -> Result<MetricScheme> {
    if !x.is_unit_bounded() {
        return Err(Error::Precondition("metric scheme needs a unit-bounded space".into()));
    }
    for w in widths {
        if w.dyadic_exponent().is_none_or(|e| e == 0) {
            return Err(Error::Precondition(format!("window width {w} is not 2^-j with j >= 1")));
        }
    }
    let mut cycle = Vec::new();
    for w in widths {
        cycle.extend(level(x, d, w)?);
    }
    let triples = if cycle.is_empty() {
        Vec::new()
    } else {
        (0..depth).map(|n| cycle[n % cycle.len()].clone()).collect()
    };
    Ok(MetricScheme {
        triples,
        widths: widths.to_vec(),
        depth,
        cycle_len: cycle.len(),
    })
}
