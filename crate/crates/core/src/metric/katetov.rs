use std::sync::Arc;

use serde::Serialize;

use super::space::{validate_metric, FiniteMetricSpace};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A `[0,1]`-valued function on the points of a finite metric space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointFunction {
    name: String,
    values: Vec<Rational>,
    lipschitz_cert: Option<bool>,
    #[serde(skip)]
    base: Arc<FiniteMetricSpace>,
}

impl PointFunction {
    pub fn new(base: &Arc<FiniteMetricSpace>, name: impl Into<String>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != base.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                found: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.in_unit_interval()) {
            return Err(Error::OutOfCube(format!("function value {v}")));
        }
        Ok(PointFunction {
            name: name.into(),
            values,
            lipschitz_cert: None,
            base: Arc::clone(base),
        })
    }

    /// `z ↦ d(z, x_i)`, certified Lipschitz-1. Needs a unit-bounded space.
    pub fn distance_to(base: &Arc<FiniteMetricSpace>, i: usize) -> Result<Self> {
        let f = PointFunction::new(base, format!("d(.,{})", base.label(i)), base.row(i).to_vec())?;
        Ok(f.certified())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn base(&self) -> &Arc<FiniteMetricSpace> {
        &self.base
    }

    pub fn lipschitz_cert(&self) -> Option<bool> {
        self.lipschitz_cert
    }

    /// Exact Lipschitz constant `max |f(x)−f(y)| / d(x,y)` over distinct pairs.
    pub fn lipschitz_constant(&self) -> Rational {
        lipschitz_of(&self.base, &self.values)
    }

    /// Records whether the function is Lipschitz-1, computed exactly.
    pub fn certified(mut self) -> Self {
        self.lipschitz_cert = Some(self.lipschitz_constant() <= Rational::one());
        self
    }

    /// Lipschitz-1 with values in `[0,1]`, using the recorded certificate if
    /// present and computing it otherwise.
    pub fn is_certified(&self) -> bool {
        self.lipschitz_cert
            .unwrap_or_else(|| self.lipschitz_constant() <= Rational::one())
    }
}

fn lipschitz_of(base: &FiniteMetricSpace, values: &[Rational]) -> Rational {
    let n = base.len();
    let mut best = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let ratio = (&values[i] - &values[j]).abs() / base.dist(i, j);
            if ratio > best {
                best = ratio;
            }
        }
    }
    best
}

fn same_base(a: &Arc<FiniteMetricSpace>, b: &Arc<FiniteMetricSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn katetov_values(base: &FiniteMetricSpace, values: &[Rational]) -> bool {
    let n = base.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let d = base.dist(i, j);
            (&values[i] - &values[j]).abs() <= *d && *d <= &values[i] + &values[j]
        })
    })
}

/// `|f(x)−f(y)| <= d(x,y) <= f(x)+f(y)` at every pair.
pub fn is_katetov(f: &PointFunction) -> bool {
    katetov_values(&f.base, &f.values)
}

/// A point function certified to satisfy the Katětov inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KatetovFunction {
    values: Vec<Rational>,
    #[serde(skip)]
    base: Arc<FiniteMetricSpace>,
}

impl KatetovFunction {
    pub fn new(base: &Arc<FiniteMetricSpace>, values: Vec<Rational>) -> Result<Self> {
        let f = PointFunction::new(base, "katetov", values)?;
        KatetovFunction::try_from(f)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn base(&self) -> &Arc<FiniteMetricSpace> {
        &self.base
    }
}

impl TryFrom<PointFunction> for KatetovFunction {
    type Error = Error;

    fn try_from(f: PointFunction) -> Result<Self> {
        if !is_katetov(&f) {
            return Err(Error::NotKatetov(format!("{:?}", f.values)));
        }
        Ok(KatetovFunction {
            values: f.values,
            base: f.base,
        })
    }
}

/// Pointwise `α·f + (1−α)·g`.
pub fn convex_combine_katetov(f: &KatetovFunction, g: &KatetovFunction, alpha: &Rational) -> Result<KatetovFunction> {
    if !same_base(&f.base, &g.base) {
        return Err(Error::MismatchedBase);
    }
    if !alpha.in_unit_interval() {
        return Err(Error::Precondition(format!("mixing weight {alpha} outside [0,1]")));
    }
    let beta = Rational::one() - alpha;
    let values = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a * alpha + b * &beta)
        .collect();
    KatetovFunction::new(&f.base, values)
}

/// Adjoins one new point per Katětov function.
///
/// `d(new_i, x) = f_i(x)` and `d(new_i, new_j) = max_x |f_i(x) − f_j(x)|`.
/// Extensions that would put a new point at distance 0 from any other point
/// are refused.
pub fn katetov_extend(
    x: &FiniteMetricSpace,
    fs: &[KatetovFunction],
    new_labels: &[String],
) -> Result<FiniteMetricSpace> {
    if fs.len() != new_labels.len() {
        return Err(Error::DimensionMismatch {
            expected: fs.len(),
            found: new_labels.len(),
        });
    }
    for f in fs {
        if *f.base != *x {
            return Err(Error::MismatchedBase);
        }
    }
    let mut labels = x.labels().to_vec();
    for l in new_labels {
        if labels.contains(l) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
        labels.push(l.clone());
    }
    let n = x.len();
    let m = fs.len();
    let mut d: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n + m]; n + m];
    for i in 0..n {
        for j in 0..n {
            d[i][j] = x.dist(i, j).clone();
        }
    }
    for (a, f) in fs.iter().enumerate() {
        for (i, v) in f.values.iter().enumerate() {
            if v.is_zero() {
                return Err(Error::Precondition(format!(
                    "{} would coincide with {} at distance 0",
                    new_labels[a],
                    x.label(i)
                )));
            }
            d[n + a][i] = v.clone();
            d[i][n + a] = v.clone();
        }
        for (b, g) in fs.iter().enumerate().skip(a + 1) {
            let sup = f
                .values
                .iter()
                .zip(&g.values)
                .map(|(u, v)| (u - v).abs())
                .max()
                .unwrap_or_else(Rational::zero);
            if sup.is_zero() {
                return Err(Error::Precondition(format!(
                    "{} and {} would coincide at distance 0",
                    new_labels[a], new_labels[b]
                )));
            }
            d[n + a][n + b] = sup.clone();
            d[n + b][n + a] = sup;
        }
    }
    Ok(validate_metric(labels, d, false)?)
}

/// Knobs for [`r1_family`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R1Options {
    /// Rational constant atoms, emitted before the distance functions.
    pub constants: Vec<Rational>,
    pub sums: bool,
    pub products: bool,
}

impl Default for R1Options {
    fn default() -> Self {
        R1Options {
            constants: vec![Rational::zero()],
            sums: true,
            products: true,
        }
    }
}

struct RingElement {
    name: String,
    values: Vec<Rational>,
    /// Sup-norm bound.
    bound: Rational,
    lipschitz: Rational,
    constant: bool,
}

/// Deterministic members of `R_1(D)`.
///
/// Enumerates ring elements breadth-first (constants, then distance functions
/// to the points of `d`, then pairwise sums, then pairwise products), rescales
/// each as `f/K + 3/4` with `K = 4·max(B, L)` from the symbolic sup bound `B`
/// and Lipschitz bound `L`, and keeps those whose exact range lies in
/// `[1/2, 1]` and whose exact Lipschitz constant is at most 1.
pub fn r1_family(
    x: &Arc<FiniteMetricSpace>,
    d: &[&str],
    budget: usize,
    opts: &R1Options,
) -> Result<Vec<PointFunction>> {
    if !x.is_unit_bounded() {
        return Err(Error::Precondition("r1_family needs a unit-bounded space".into()));
    }
    let n = x.len();
    let mut atoms: Vec<RingElement> = opts
        .constants
        .iter()
        .map(|c| RingElement {
            name: format!("const({c})"),
            values: vec![c.clone(); n],
            bound: c.abs(),
            lipschitz: Rational::zero(),
            constant: true,
        })
        .collect();
    for label in d {
        let i = x.index_of(label)?;
        atoms.push(RingElement {
            name: format!("d(.,{label})"),
            values: x.row(i).to_vec(),
            bound: Rational::one(),
            lipschitz: Rational::one(),
            constant: false,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..atoms.len())
        .flat_map(|i| (i + 1..atoms.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| !(atoms[i].constant && atoms[j].constant))
        .collect();
    let mut level: Vec<RingElement> = Vec::new();
    if opts.sums {
        for &(i, j) in &pairs {
            let (a, b) = (&atoms[i], &atoms[j]);
            level.push(RingElement {
                name: format!("({})+({})", a.name, b.name),
                values: a.values.iter().zip(&b.values).map(|(u, v)| u + v).collect(),
                bound: &a.bound + &b.bound,
                lipschitz: &a.lipschitz + &b.lipschitz,
                constant: false,
            });
        }
    }
    if opts.products {
        for &(i, j) in &pairs {
            let (a, b) = (&atoms[i], &atoms[j]);
            level.push(RingElement {
                name: format!("({})*({})", a.name, b.name),
                values: a.values.iter().zip(&b.values).map(|(u, v)| u * v).collect(),
                bound: &a.bound * &b.bound,
                lipschitz: &a.lipschitz * &b.bound + &b.lipschitz * &a.bound,
                constant: false,
            });
        }
    }
    let three_quarters = Rational::new(3, 4);
    let half = Rational::new(1, 2);
    let mut out = Vec::new();
    for e in atoms.into_iter().chain(level) {
        if out.len() == budget {
            break;
        }
        let scale = Rational::from_integer(4) * Rational::max_of(&e.bound, &e.lipschitz);
        let values: Vec<Rational> = if scale.is_zero() {
            vec![three_quarters.clone(); n]
        } else {
            e.values.iter().map(|v| v / &scale + &three_quarters).collect()
        };
        let in_range = values.iter().all(|v| *v >= half && *v <= Rational::one());
        if !in_range || lipschitz_of(x, &values) > Rational::one() {
            continue;
        }
        out.push(PointFunction::new(x, format!("r1[{}]", e.name), values)?.certified());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn two_point(d: Rational) -> Arc<FiniteMetricSpace> {
        Arc::new(FiniteMetricSpace::new(["x1", "x2"], vec![vec![q(0, 1), d.clone()], vec![d, q(0, 1)]]).unwrap())
    }

    fn equilateral() -> Arc<FiniteMetricSpace> {
        let (o, z) = (Rational::one(), Rational::zero());
        Arc::new(
            FiniteMetricSpace::new(
                ["x1", "x2", "x3"],
                vec![
                    vec![z.clone(), o.clone(), o.clone()],
                    vec![o.clone(), z.clone(), o.clone()],
                    vec![o.clone(), o, z],
                ],
            )
            .unwrap(),
        )
    }

    #[test]
    fn katetov_examples() {
        let x = two_point(q(1, 2));
        assert!(is_katetov(
            &PointFunction::new(&x, "f", vec![q(1, 2), q(1, 2)]).unwrap()
        ));
        assert!(!is_katetov(
            &PointFunction::new(&x, "f", vec![q(0, 1), q(1, 1)]).unwrap()
        ));
        let e = equilateral();
        for i in 0..3 {
            assert!(is_katetov(&PointFunction::distance_to(&e, i).unwrap()));
        }
    }

    #[test]
    fn convex_combination_examples() {
        let x = two_point(q(1, 2));
        let f = KatetovFunction::new(&x, vec![q(1, 2), q(1, 2)]).unwrap();
        let g = KatetovFunction::new(&x, vec![q(1, 2), q(1, 1)]).unwrap();
        assert_eq!(convex_combine_katetov(&f, &g, &Rational::one()).unwrap(), f);
        assert_eq!(convex_combine_katetov(&f, &g, &Rational::zero()).unwrap(), g);
        let h = convex_combine_katetov(&f, &g, &q(1, 2)).unwrap();
        assert_eq!(h.values(), &[q(1, 2), q(3, 4)]);

        let other = two_point(q(1, 3));
        let k = KatetovFunction::new(&other, vec![q(1, 3), q(1, 3)]).unwrap();
        assert_eq!(convex_combine_katetov(&f, &k, &q(1, 2)), Err(Error::MismatchedBase));
    }

    #[test]
    fn extension_examples() {
        let x = two_point(q(1, 2));
        let f = KatetovFunction::new(&x, vec![q(1, 2), q(1, 2)]).unwrap();
        let g = KatetovFunction::new(&x, vec![q(1, 2), q(1, 1)]).unwrap();
        let ext = katetov_extend(&x, &[f.clone()], &["y".into()]).unwrap();
        assert_eq!(ext.row(2), &[q(1, 2), q(1, 2), q(0, 1)]);

        let ext = katetov_extend(&x, &[f.clone(), g], &["y".into(), "z".into()]).unwrap();
        assert_eq!(ext.dist_by_label("y", "z").unwrap(), &q(1, 2));

        let dz = KatetovFunction::new(&x, x.row(0).to_vec()).unwrap();
        assert!(matches!(
            katetov_extend(&x, &[dz], &["dup".into()]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            katetov_extend(&x, &[f], &["x1".into()]),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn r1_distance_functions_only() {
        let x = two_point(q(1, 2));
        let opts = R1Options {
            constants: vec![],
            sums: true,
            products: false,
        };
        let fam = r1_family(&x, &["x1", "x2"], 2, &opts).unwrap();
        assert_eq!(fam.len(), 2);
        // d(.,x1)/4 + 3/4 = (3/4, 7/8)
        assert_eq!(fam[0].values(), &[q(3, 4), q(7, 8)]);
        assert_eq!(fam[1].values(), &[q(7, 8), q(3, 4)]);
        assert!(fam.iter().all(|f| f.lipschitz_cert() == Some(true)));
    }

    #[test]
    fn r1_constant_and_product() {
        let e = equilateral();
        let fam = r1_family(&e, &["x1", "x2"], 100, &R1Options::default()).unwrap();
        assert_eq!(fam[0].values(), &[q(3, 4), q(3, 4), q(3, 4)]);
        let prod = fam
            .iter()
            .find(|f| f.name() == "r1[(d(.,x1))*(d(.,x2))]")
            .expect("product member");
        // d(.,x1)·d(.,x2) = (0,0,1); rescaled by 1/8 then shifted by 3/4.
        assert_eq!(prod.values(), &[q(3, 4), q(3, 4), q(7, 8)]);
        for f in &fam {
            assert!(f.values().iter().all(|v| *v >= q(1, 2) && *v <= q(1, 1)));
            assert!(f.lipschitz_constant() <= Rational::one());
            assert!(is_katetov(f));
        }
    }
}
