use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::scheme::{build_scheme, MetricScheme};
use crate::cone::{iterated_cone, LabeledCone};
use crate::error::{Error, Result};
use crate::geometry::RationalPoint;
use crate::metric::{r1_family, FiniteMetricSpace, PointFunction, R1Options};
use crate::rational::Rational;
use crate::sext::{build_stage, dxd, Enumeration, SStage};

/// Apex labels of triple `n` (1-based).
pub fn apex_labels(n: usize) -> (String, String) {
    (format!("c1(p{n})"), format!("c2(p{n})"))
}

pub fn marker_label(j: usize) -> String {
    format!("c(m{j})")
}

/// Iterated double cones over an S-stage, one apex pair per scheme triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupStage {
    pub stage: SStage,
    pub scheme: MetricScheme,
    pub cone: LabeledCone,
}

impl BlowupStage {
    /// Labels of the apex pair of triple `n` (1-based).
    pub fn pair(&self, n: usize) -> (String, String) {
        apex_labels(n)
    }
}

/// Cones the stage over `embed(x_n)` then `embed(y_n)` for each triple.
pub fn build_blowup(stage: &SStage, scheme: &MetricScheme) -> Result<BlowupStage> {
    let mut points = Vec::with_capacity(2 * scheme.len());
    for (n, t) in scheme.triples.iter().enumerate() {
        let (l1, l2) = apex_labels(n + 1);
        for (label, apex) in [(&t.x, l1), (&t.y, l2)] {
            let pos = stage
                .poly()
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
            points.push((stage.poly().vertices()[pos].clone(), apex));
        }
    }
    let cone = iterated_cone(stage.poly(), &points)?;
    Ok(BlowupStage {
        stage: stage.clone(),
        scheme: scheme.clone(),
        cone,
    })
}

/// Window fractions `t` giving marker values `q = lo + t(hi − lo)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QRule {
    fractions: Vec<Rational>,
}

impl QRule {
    pub fn new(fractions: Vec<Rational>) -> Result<Self> {
        if fractions.is_empty() {
            return Err(Error::Empty("q rule"));
        }
        for t in &fractions {
            if !t.is_positive() || *t >= Rational::one() {
                return Err(Error::Precondition(format!("q-rule fraction {t} is not in (0,1)")));
            }
        }
        if fractions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "q-rule fractions must be strictly increasing".into(),
            ));
        }
        Ok(QRule { fractions })
    }

    pub fn fractions(&self) -> &[Rational] {
        &self.fractions
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    pub fn values(&self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        let span = hi - lo;
        self.fractions.iter().map(|t| lo + &(t * &span)).collect()
    }
}

impl Default for QRule {
    fn default() -> Self {
        QRule {
            fractions: vec![Rational::new(1, 4), Rational::new(1, 2), Rational::new(3, 4)],
        }
    }
}

impl FromStr for QRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "quartiles" | "default" => Ok(QRule::default()),
            "midpoint" => QRule::new(vec![Rational::new(1, 2)]),
            list => QRule::new(list.split(',').map(|p| p.trim().parse()).collect::<Result<_>>()?),
        }
    }
}

impl fmt::Display for QRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fractions.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for QRule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.fractions.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Marker {
    pub label: String,
    /// 1-based triple index.
    pub triple: usize,
    pub q: Rational,
    pub point: RationalPoint,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MarkerSet {
    pub markers: Vec<Marker>,
}

impl MarkerSet {
    pub fn len(&self) -> usize {
        self.markers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markers.is_empty()
    }
}

/// `q·c1(p_n) + (1 − q)·c2(p_n)` for every triple and every `q` of the rule.
pub fn marker_points(blowup: &BlowupStage, rule: &QRule) -> Result<MarkerSet> {
    let mut markers = Vec::new();
    for (n, t) in blowup.scheme.triples.iter().enumerate() {
        let (l1, l2) = apex_labels(n + 1);
        let c1 = blowup.cone.apex_point(&l1)?;
        let c2 = blowup.cone.apex_point(&l2)?;
        for q in rule.values(&t.window.lo(), &t.window.hi()) {
            let point = c1.lerp(c2, &q)?;
            markers.push(Marker {
                label: marker_label(markers.len() + 1),
                triple: n + 1,
                q,
                point,
            });
        }
    }
    Ok(MarkerSet { markers })
}

/// Geometry parameters of [`build_phi`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiParams {
    /// Stage size; defaults to `|D|`.
    pub n: Option<usize>,
    /// Stage coordinates; defaults to `|F|`.
    pub k: Option<usize>,
    pub widths: Vec<Rational>,
    pub depth: usize,
    pub q_rule: QRule,
}

impl PhiParams {
    pub fn new(widths: Vec<Rational>, depth: usize) -> Self {
        PhiParams {
            n: None,
            k: None,
            widths,
            depth,
            q_rule: QRule::default(),
        }
    }

    pub fn with_depth(&self, depth: usize) -> Self {
        PhiParams { depth, ..self.clone() }
    }
}

impl Default for PhiParams {
    fn default() -> Self {
        PhiParams::new(vec![Rational::new(1, 2), Rational::new(1, 4), Rational::new(1, 8)], 0)
    }
}

/// The marker cone over a blow-up stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiStage {
    pub blowup: BlowupStage,
    pub markers: MarkerSet,
    pub marker_cone: LabeledCone,
    pub q_rule: QRule,
}

impl PhiStage {
    pub fn poly(&self) -> &crate::geometry::VPolytope {
        self.marker_cone.poly()
    }

    pub fn stage(&self) -> &SStage {
        &self.blowup.stage
    }

    pub fn scheme(&self) -> &MetricScheme {
        &self.blowup.scheme
    }

    pub fn dim(&self) -> usize {
        self.poly().dim()
    }

    /// `embed(x)` padded with zeros to the full dimension.
    pub fn embed_point(&self, label: &str) -> Result<RationalPoint> {
        let p = self
            .stage()
            .poly()
            .vertex(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        Ok(p.resized(self.dim()))
    }
}

/// `build_stage → build_blowup → marker_points → iterated_cone`.
pub fn build_phi(
    x: &Arc<FiniteMetricSpace>,
    d: &Enumeration,
    f: &[PointFunction],
    params: &PhiParams,
) -> Result<PhiStage> {
    let n = params.n.unwrap_or(d.len());
    let k = params.k.unwrap_or(f.len());
    let stage = build_stage(x, d, f, n, k)?;
    let prefix = Enumeration::new(d.labels()[..n].iter().cloned(), x)?;
    let scheme = build_scheme(x, &prefix, &params.widths, params.depth)?;
    let blowup = build_blowup(&stage, &scheme)?;
    let markers = marker_points(&blowup, &params.q_rule)?;
    let points: Vec<(RationalPoint, String)> = markers
        .markers
        .iter()
        .map(|m| (m.point.clone(), m.label.clone()))
        .collect();
    let marker_cone = iterated_cone(blowup.cone.poly(), &points)?;
    Ok(PhiStage {
        blowup,
        markers,
        marker_cone,
        q_rule: params.q_rule.clone(),
    })
}

/// `coords` stage functions: distance functions to `D` (truncated when
/// `coords < |D|`), then members of `R_1(D)` to fill the rest.
pub fn standard_functions(x: &Arc<FiniteMetricSpace>, d: &Enumeration, coords: usize) -> Result<Vec<PointFunction>> {
    let mut f = dxd(x, d)?;
    if coords <= f.len() {
        f.truncate(coords);
        return Ok(f);
    }
    let need = coords - f.len();
    let labels: Vec<&str> = d.labels().iter().map(String::as_str).collect();
    let extra = r1_family(x, &labels, need, &R1Options::default())?;
    if extra.len() < need {
        return Err(Error::Precondition(format!(
            "only {} stage functions available, {coords} requested",
            f.len() + extra.len()
        )));
    }
    f.extend(extra.into_iter().take(need));
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::in_convex_hull;
    use crate::rational::q;

    pub(crate) fn two(d: Rational) -> Arc<FiniteMetricSpace> {
        Arc::new(FiniteMetricSpace::new(["d1", "d2"], vec![vec![q(0, 1), d.clone()], vec![d, q(0, 1)]]).unwrap())
    }

    fn equilateral() -> Arc<FiniteMetricSpace> {
        let one = q(1, 1);
        let z = q(0, 1);
        Arc::new(
            FiniteMetricSpace::new(
                ["a", "b", "c"],
                vec![
                    vec![z.clone(), one.clone(), one.clone()],
                    vec![one.clone(), z.clone(), one.clone()],
                    vec![one.clone(), one, z],
                ],
            )
            .unwrap(),
        )
    }

    fn phi(x: &Arc<FiniteMetricSpace>, widths: Vec<Rational>, depth: usize) -> PhiStage {
        let d = Enumeration::full(x);
        let f = dxd(x, &d).unwrap();
        build_phi(x, &d, &f, &PhiParams::new(widths, depth)).unwrap()
    }

    #[test]
    fn one_triple_blowup() {
        let x = two(q(1, 2));
        let d = Enumeration::full(&x);
        let stage = build_stage(&x, &d, &dxd(&x, &d).unwrap(), 2, 2).unwrap();
        let scheme = build_scheme(&x, &d, &[q(1, 2)], 1).unwrap();
        let b = build_blowup(&stage, &scheme).unwrap();
        assert_eq!(b.cone.poly().dim(), 4);
        assert_eq!(b.cone.poly().len(), 4);
        let c1 = b.cone.apex_point("c1(p1)").unwrap();
        assert_eq!(c1.coords(), &[q(0, 1), q(1, 2), q(1, 1), q(0, 1)]);
    }

    #[test]
    fn empty_scheme_lifts_the_stage() {
        let x = two(q(1, 2));
        let p = phi(&x, vec![q(1, 2)], 0);
        assert_eq!(p.poly(), p.stage().poly());
        assert!(p.markers.is_empty());
    }

    #[test]
    fn repeated_triples_get_fresh_apexes() {
        let x = two(q(1, 2));
        let p = phi(&x, vec![q(1, 2)], 2);
        assert_eq!(p.scheme().triples[0], p.scheme().triples[1]);
        let a = p.blowup.cone.apex_point("c1(p1)").unwrap();
        let b = p.blowup.cone.apex_point("c1(p2)").unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn quartile_markers() {
        let x = two(q(1, 2));
        let p = phi(&x, vec![q(1, 2)], 1);
        let qs: Vec<_> = p.markers.markers.iter().map(|m| m.q.clone()).collect();
        assert_eq!(qs, vec![q(3, 8), q(1, 2), q(5, 8)]);
        assert_eq!(p.dim(), 2 + 2 + 3);
        let mid = &p.markers.markers[1].point;
        let c1 = p.blowup.cone.apex_point("c1(p1)").unwrap();
        let c2 = p.blowup.cone.apex_point("c2(p1)").unwrap();
        assert_eq!(*mid, c1.midpoint(c2).unwrap());
        let base = p.blowup.stage.poly().lifted(2);
        for m in &p.markers.markers {
            assert!(!in_convex_hull(&m.point, base.vertices()).unwrap());
        }
    }

    #[test]
    fn equilateral_counts() {
        let x = equilateral();
        let p = phi(&x, vec![q(1, 2)], 3);
        assert_eq!(p.blowup.cone.apexes().len(), 6);
        assert_eq!(p.marker_cone.apexes().len(), 9);
        assert_eq!(p.dim(), 3 + 6 + 9);
    }

    #[test]
    fn q_rule_parsing() {
        assert_eq!("quartiles".parse::<QRule>().unwrap(), QRule::default());
        assert_eq!("1/3, 2/3".parse::<QRule>().unwrap().fractions(), &[q(1, 3), q(2, 3)]);
        assert!("1/2,1/4".parse::<QRule>().is_err());
        assert!("0,1/2".parse::<QRule>().is_err());
        assert!("a".parse::<QRule>().is_err());
    }

    #[test]
    fn unknown_scheme_point() {
        let x = two(q(1, 2));
        let d = Enumeration::full(&x);
        let stage = build_stage(&x, &d, &dxd(&x, &d).unwrap(), 1, 2).unwrap();
        let scheme = build_scheme(&x, &d, &[q(1, 2)], 1).unwrap();
        assert_eq!(
            build_blowup(&stage, &scheme).unwrap_err(),
            Error::UnknownLabel("d2".into())
        );
    }

    #[test]
    fn extra_coordinates_come_from_r1() {
        let x = two(q(1, 2));
        let d = Enumeration::full(&x);
        assert_eq!(standard_functions(&x, &d, 1).unwrap().len(), 1);
        let f = standard_functions(&x, &d, 4).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f[2].name().starts_with("r1["));
    }
}
