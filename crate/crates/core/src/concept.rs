//! Cuboids, star-shaped cores and fuzzy concepts.

use crate::error::{Error, Result};
use crate::metric::{DomainStructure, Metric, WeightSpec};

/// Points per axis of the falsification grid used by [`crisp_subsethood`].
pub const SUBSET_GRID_POINTS: usize = 9;

const CONTAINMENT_SLACK: f64 = 1e-12;

/// An axis-parallel box over all dimensions of a domain structure.
#[derive(Debug, Clone, PartialEq)]
pub struct Cuboid {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Cuboid {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Cuboid(format!(
                "{} lower bounds but {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        for (d, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && u.is_finite()) {
                return Err(Error::Cuboid(format!(
                    "bounds of dimension {d} are not finite"
                )));
            }
            if l > u {
                return Err(Error::Cuboid(format!(
                    "lower bound {l} exceeds upper bound {u} on dimension {d}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn point(p: &[f64]) -> Result<Self> {
        Self::new(p.to_vec(), p.to_vec())
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn n_dims(&self) -> usize {
        self.lower.len()
    }

    pub fn width(&self, d: usize) -> f64 {
        self.upper[d] - self.lower[d]
    }

    pub fn widths(&self) -> Vec<f64> {
        (0..self.n_dims()).map(|d| self.width(d)).collect()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (l + u))
            .collect()
    }

    /// True when some side has zero length (crisp volume zero).
    pub fn is_degenerate(&self) -> bool {
        self.lower.iter().zip(&self.upper).any(|(l, u)| l == u)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    pub fn intersect(&self, other: &Cuboid) -> Option<Cuboid> {
        let lower: Vec<f64> = self
            .lower
            .iter()
            .zip(&other.lower)
            .map(|(a, b)| a.max(*b))
            .collect();
        let upper: Vec<f64> = self
            .upper
            .iter()
            .zip(&other.upper)
            .map(|(a, b)| a.min(*b))
            .collect();
        lower
            .iter()
            .zip(&upper)
            .all(|(l, u)| l <= u)
            .then_some(Cuboid { lower, upper })
    }

    /// The point of the cuboid closest to `x` under any combined metric.
    pub fn clamp(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(v, (l, u))| v.clamp(*l, *u))
            .collect()
    }

    /// All `2^n` corners, in binary order (bit `d` set = upper bound on `d`).
    pub fn corners(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        let n = self.n_dims();
        (0u64..1 << n).map(move |mask| {
            (0..n)
                .map(|d| {
                    if mask >> d & 1 == 1 {
                        self.upper[d]
                    } else {
                        self.lower[d]
                    }
                })
                .collect()
        })
    }

    /// Smallest cuboid containing `self` and the point `p`.
    pub fn extend_to(&self, p: &[f64]) -> Cuboid {
        Cuboid {
            lower: self.lower.iter().zip(p).map(|(l, v)| l.min(*v)).collect(),
            upper: self.upper.iter().zip(p).map(|(u, v)| u.max(*v)).collect(),
        }
    }

    /// Keeps the listed dimension indices, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Cuboid {
        Cuboid {
            lower: indices.iter().map(|&i| self.lower[i]).collect(),
            upper: indices.iter().map(|&i| self.upper[i]).collect(),
        }
    }
}

/// `min_{y∈C} d(x, y)`, by clamping `x` onto the cuboid.
pub fn distance_to_cuboid(x: &[f64], cuboid: &Cuboid, metric: &Metric) -> f64 {
    metric.distance(x, &cuboid.clamp(x))
}

/// A union of cuboids with a nonempty common intersection.
#[derive(Debug, Clone, PartialEq)]
pub struct CoreRegion {
    structure: DomainStructure,
    cuboids: Vec<Cuboid>,
    central: Cuboid,
}

/// Validates that the cuboids share a point and builds the core.
pub fn validate_core(structure: &DomainStructure, cuboids: Vec<Cuboid>) -> Result<CoreRegion> {
    CoreRegion::new(structure.clone(), cuboids)
}

impl CoreRegion {
    pub fn new(structure: DomainStructure, cuboids: Vec<Cuboid>) -> Result<Self> {
        if structure.is_empty() {
            return Err(Error::Structure("a core needs at least one domain".into()));
        }
        let Some(first) = cuboids.first() else {
            return Err(Error::Cuboid("a core needs at least one cuboid".into()));
        };
        for (i, c) in cuboids.iter().enumerate() {
            if c.n_dims() != structure.n_dims() {
                return Err(Error::Structure(format!(
                    "cuboid {i} has {} dimensions, the core's domains have {}",
                    c.n_dims(),
                    structure.n_dims()
                )));
            }
        }
        let mut lower = first.lower.clone();
        let mut upper = first.upper.clone();
        for c in &cuboids[1..] {
            for d in 0..lower.len() {
                lower[d] = lower[d].max(c.lower[d]);
                upper[d] = upper[d].min(c.upper[d]);
            }
        }
        if let Some(d) = (0..lower.len()).find(|&d| lower[d] > upper[d]) {
            return Err(Error::EmptyCentralRegion {
                dimension: structure.dimension_name(d).to_string(),
                lower: lower[d],
                upper: upper[d],
            });
        }
        Ok(Self {
            structure,
            cuboids,
            central: Cuboid { lower, upper },
        })
    }

    pub fn structure(&self) -> &DomainStructure {
        &self.structure
    }

    pub fn cuboids(&self) -> &[Cuboid] {
        &self.cuboids
    }

    /// The central region `P = ∩ C_i`.
    pub fn central(&self) -> &Cuboid {
        &self.central
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.cuboids.iter().any(|c| c.contains(x))
    }

    /// True when every cuboid has zero crisp volume.
    pub fn is_degenerate(&self) -> bool {
        self.cuboids.iter().all(Cuboid::is_degenerate)
    }

    /// Restricts to the named domains.
    pub fn project<S: AsRef<str>>(&self, domains: &[S]) -> Result<CoreRegion> {
        let (sub, idx) = self.structure.restrict(domains)?;
        let cuboids = self.cuboids.iter().map(|c| c.restrict(&idx)).collect();
        CoreRegion::new(sub, cuboids)
    }
}

/// Outcome of [`intersect_cores`].
#[derive(Debug, Clone, PartialEq)]
pub enum CoreIntersection {
    Core {
        region: CoreRegion,
        /// The intersection has crisp volume zero (for example touching faces).
        degenerate: bool,
    },
    Empty,
}

/// Pairwise cuboid intersections of two cores on the same domains.
pub fn intersect_cores(a: &CoreRegion, b: &CoreRegion) -> Result<CoreIntersection> {
    if a.structure != b.structure {
        return Err(Error::Structure(
            "cores are defined on different domains".into(),
        ));
    }
    let mut pieces: Vec<Cuboid> = Vec::new();
    for ca in &a.cuboids {
        for cb in &b.cuboids {
            if let Some(c) = ca.intersect(cb) {
                if !pieces.contains(&c) {
                    pieces.push(c);
                }
            }
        }
    }
    if pieces.is_empty() {
        return Ok(CoreIntersection::Empty);
    }
    match CoreRegion::new(a.structure.clone(), pieces) {
        Ok(region) => {
            let degenerate = region.is_degenerate();
            Ok(CoreIntersection::Core { region, degenerate })
        }
        Err(Error::EmptyCentralRegion { .. }) => Ok(CoreIntersection::Empty),
        Err(e) => Err(e),
    }
}

/// A fuzzy simple star-shaped set `⟨S, μ0, c, W⟩`.
///
/// Membership is `μ0 · exp(−c · d(x, S))`, where `d(x, S)` is the combined
/// distance to the nearest cuboid of the core. Points are given in the
/// coordinate order of the concept's own domain structure.
#[derive(Debug, Clone, PartialEq)]
pub struct Concept {
    core: CoreRegion,
    mu0: f64,
    c: f64,
    metric: Metric,
}

impl Concept {
    pub fn new(core: CoreRegion, mu0: f64, c: f64, weights: WeightSpec) -> Result<Self> {
        if !(mu0 > 0.0 && mu0 <= 1.0) {
            return Err(Error::Parameter(format!(
                "mu0 must lie in (0, 1], got {mu0}"
            )));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Parameter(format!(
                "sensitivity c must be positive, got {c}"
            )));
        }
        let metric = Metric::new(core.structure.clone(), weights)?;
        Ok(Self {
            core,
            mu0,
            c,
            metric,
        })
    }

    /// Same core and μ0 with another sensitivity and weights.
    pub fn with_context(&self, c: f64, weights: WeightSpec) -> Result<Self> {
        Self::new(self.core.clone(), self.mu0, c, weights)
    }

    #[cfg(test)]
    pub(crate) fn with_mu0(&self, mu0: f64) -> Result<Self> {
        Self::new(self.core.clone(), mu0, self.c, self.weights().clone())
    }

    pub fn core(&self) -> &CoreRegion {
        &self.core
    }

    pub fn structure(&self) -> &DomainStructure {
        &self.core.structure
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn weights(&self) -> &WeightSpec {
        self.metric.weights()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// A property lives on a single domain.
    pub fn is_property(&self) -> bool {
        self.structure().n_domains() == 1
    }

    /// Distance from `x` to the nearest core cuboid.
    ///
    /// # Panics
    /// If `x` does not have one coordinate per dimension of the concept.
    pub fn distance_to_core(&self, x: &[f64]) -> f64 {
        assert_eq!(
            x.len(),
            self.structure().n_dims(),
            "point dimension does not match the concept"
        );
        self.core
            .cuboids
            .iter()
            .map(|c| distance_to_cuboid(x, c, &self.metric))
            .fold(f64::INFINITY, f64::min)
    }

    /// `μ0 · exp(−c · d(x, S))`.
    ///
    /// # Panics
    /// If `x` does not have one coordinate per dimension of the concept.
    pub fn membership(&self, x: &[f64]) -> f64 {
        self.mu0 * (-self.c * self.distance_to_core(x)).exp()
    }

    /// Membership of a point given in a larger structure that contains the
    /// concept's domains; extra coordinates are ignored.
    pub fn membership_in(&self, structure: &DomainStructure, x: &[f64]) -> Result<f64> {
        if x.len() != structure.n_dims() {
            return Err(Error::Structure(format!(
                "point has {} coordinates, the structure has {} dimensions",
                x.len(),
                structure.n_dims()
            )));
        }
        let own = self
            .structure()
            .dimension_names()
            .map(|n| {
                structure
                    .dimension_index(n)
                    .map(|i| x[i])
                    .ok_or_else(|| Error::Structure(format!("point lacks dimension `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.membership(&own))
    }

    /// Radius `ε(α) = −ln(α/μ0)/c` of the α-cut around the core.
    /// Negative when `α > μ0`.
    pub fn epsilon(&self, alpha: f64) -> f64 {
        -(alpha / self.mu0).ln() / self.c
    }

    pub fn alpha_cut_contains(&self, x: &[f64], alpha: f64) -> Result<bool> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Parameter(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if alpha > self.mu0 {
            return Ok(false);
        }
        Ok(self.distance_to_core(x) <= self.epsilon(alpha))
    }

    /// The same concept with its coordinates reordered to `target`, which
    /// must hold exactly the concept's domains.
    pub(crate) fn align_to(&self, target: &DomainStructure) -> Result<Concept> {
        if self.structure() == target {
            return Ok(self.clone());
        }
        if !self.structure().same_domains(target) {
            return Err(Error::Structure(
                "concepts are defined on different domains".into(),
            ));
        }
        let own = self.structure();
        let perm: Vec<usize> = target
            .dimension_names()
            .map(|n| own.dimension_index(n).expect("same domains"))
            .collect();
        let cuboids = self
            .core
            .cuboids
            .iter()
            .map(|c| c.restrict(&perm))
            .collect();
        let domain_w = target
            .domain_names()
            .map(|n| self.weights().domain_weights()[own.domain_index(n).expect("same domains")])
            .collect();
        let dim_w = perm
            .iter()
            .map(|&i| self.weights().dimension_weights()[i])
            .collect();
        let weights = WeightSpec::new(target, domain_w, dim_w)?;
        Concept::new(
            CoreRegion::new(target.clone(), cuboids)?,
            self.mu0,
            self.c,
            weights,
        )
    }

    /// Projects onto a nonempty subset of the concept's domains.
    ///
    /// Kept domain weights are rescaled by a common factor so they again sum
    /// to the number of domains; dimension weights are unchanged.
    pub fn project<S: AsRef<str>>(&self, domains: &[S]) -> Result<Concept> {
        if domains.is_empty() {
            return Err(Error::Projection("target domain set is empty".into()));
        }
        let structure = self.structure();
        let mut kept = Vec::new();
        for name in domains {
            match structure.domain_index(name.as_ref()) {
                Some(i) if !kept.contains(&i) => kept.push(i),
                Some(_) => {}
                None => {
                    return Err(Error::Projection(format!(
                        "domain `{}` is not one of the concept's domains",
                        name.as_ref()
                    )))
                }
            }
        }
        kept.sort_unstable();
        let core = self.core.project(domains)?;
        let weights = self.weights().project(structure, &kept);
        Concept::new(core, self.mu0, self.c, weights)
    }
}

/// The four conditions deciding whether `S1 ⊆ S2` as fuzzy sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetCondition {
    /// Every domain of `S2` is a domain of `S1`.
    Domains,
    /// `μ0⁽¹⁾ ≤ μ0⁽²⁾`.
    Height,
    /// The core of `S1` lies in the `μ0⁽¹⁾`-cut of `S2`.
    CoreInCut,
    /// `S1` decays at least as fast as `S2` along every dimension of `S2`.
    Decay,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsethoodReport {
    pub failed: Vec<SubsetCondition>,
    /// The core-in-cut condition passed only the corner and grid checks,
    /// which cannot prove containment.
    pub grid_approximate: bool,
}

impl SubsethoodReport {
    pub fn holds(&self) -> bool {
        self.failed.is_empty()
    }
}

/// Decides whether `S1 ⊆ S2` (`μ1 ≤ μ2` everywhere).
///
/// The core-in-cut condition is checked on every cuboid corner and then on a
/// grid of [`SUBSET_GRID_POINTS`] points per axis. A pass is therefore
/// approximate, and a warning is logged when it decides the outcome.
pub fn crisp_subsethood(s1: &Concept, s2: &Concept) -> SubsethoodReport {
    let report = subsethood_conditions(s1, s2);
    if report.holds() && report.grid_approximate {
        log::warn!(
            "core containment in the alpha-cut was checked on corners and a {}-point grid only",
            SUBSET_GRID_POINTS
        );
    }
    report
}

pub(crate) fn subsethood_conditions(s1: &Concept, s2: &Concept) -> SubsethoodReport {
    let mut failed = Vec::new();
    let mut grid_approximate = false;
    let st1 = s1.structure();
    let st2 = s2.structure();

    if !st2.is_subset_of(st1) {
        // Conditions 3 and 4 refer to dimensions of S2 that S1 lacks.
        return SubsethoodReport {
            failed: vec![
                SubsetCondition::Domains,
                SubsetCondition::CoreInCut,
                SubsetCondition::Decay,
            ],
            grid_approximate,
        };
    }
    if s1.mu0 > s2.mu0 {
        failed.push(SubsetCondition::Height);
    }

    // Positions of S2's dimensions inside S1's coordinate vector.
    let map: Vec<usize> = st2
        .dimension_names()
        .map(|n| st1.dimension_index(n).expect("subset checked above"))
        .collect();

    if s1.mu0 > s2.mu0 || !core_in_cut(s1, s2, &map) {
        failed.push(SubsetCondition::CoreInCut);
    } else {
        grid_approximate = true;
    }

    let stretch1 = s1.metric.stretch();
    let stretch2 = s2.metric.stretch();
    let decay_ok = map.iter().enumerate().all(|(j, &i)| {
        let r1 = s1.c * stretch1[i];
        let r2 = s2.c * stretch2[j];
        r1 >= r2 * (1.0 - CONTAINMENT_SLACK)
    });
    if !decay_ok {
        failed.push(SubsetCondition::Decay);
    }
    SubsethoodReport {
        failed,
        grid_approximate,
    }
}

fn core_in_cut(s1: &Concept, s2: &Concept, map: &[usize]) -> bool {
    let eps = s2.epsilon(s1.mu0).max(0.0);
    let limit = eps + CONTAINMENT_SLACK * (1.0 + eps);
    let inside = |p: &[f64]| {
        let q: Vec<f64> = map.iter().map(|&i| p[i]).collect();
        s2.distance_to_core(&q) <= limit
    };
    for cuboid in s1.core.cuboids() {
        if !cuboid.corners().all(|c| inside(&c)) {
            return false;
        }
    }
    let g = SUBSET_GRID_POINTS;
    for cuboid in s1.core.cuboids() {
        let n = cuboid.n_dims();
        let total = g.pow(n as u32);
        let mut p = vec![0.0; n];
        for k in 0..total {
            let mut rem = k;
            for (d, v) in p.iter_mut().enumerate() {
                let t = (rem % g) as f64 / (g - 1) as f64;
                rem /= g;
                *v = cuboid.lower[d] + t * cuboid.width(d);
            }
            if !inside(&p) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fruit_structure() -> DomainStructure {
        DomainStructure::new([
            ("color", vec!["hue"]),
            ("shape", vec!["round"]),
            ("taste", vec!["sweet"]),
        ])
        .unwrap()
    }

    fn concept(cubs: &[([f64; 3], [f64; 3])], c: f64, w: [f64; 3]) -> Concept {
        let s = fruit_structure();
        let cuboids = cubs
            .iter()
            .map(|(l, u)| Cuboid::new(l.to_vec(), u.to_vec()).unwrap())
            .collect();
        let core = CoreRegion::new(s.clone(), cuboids).unwrap();
        let weights = WeightSpec::new(&s, w.to_vec(), vec![1.0; 3]).unwrap();
        Concept::new(core, 1.0, c, weights).unwrap()
    }

    fn apple() -> Concept {
        concept(
            &[
                ([0.50, 0.65, 0.35], [0.80, 0.80, 0.50]),
                ([0.65, 0.65, 0.40], [0.85, 0.80, 0.55]),
                ([0.70, 0.65, 0.45], [1.00, 0.80, 0.60]),
            ],
            10.0,
            [0.5, 1.5, 1.0],
        )
    }

    fn granny_smith() -> Concept {
        concept(&[([0.55, 0.70, 0.35], [0.60, 0.80, 0.45])], 25.0, [1.0; 3])
    }

    fn red() -> Concept {
        let s = DomainStructure::new([("color", vec!["hue"])]).unwrap();
        let core =
            CoreRegion::new(s.clone(), vec![Cuboid::new(vec![0.9], vec![1.0]).unwrap()]).unwrap();
        Concept::new(core, 1.0, 20.0, WeightSpec::uniform(&s)).unwrap()
    }

    #[test]
    fn apple_central_region() {
        let a = apple();
        let p = a.core().central();
        let expect_lo = [0.70, 0.65, 0.45];
        let expect_hi = [0.80, 0.80, 0.50];
        for d in 0..3 {
            assert!((p.lower()[d] - expect_lo[d]).abs() < 1e-15);
            assert!((p.upper()[d] - expect_hi[d]).abs() < 1e-15);
        }
    }

    #[test]
    fn disjoint_cuboids_name_the_dimension() {
        let s = DomainStructure::new([("a", vec!["x"])]).unwrap();
        let err = validate_core(
            &s,
            vec![
                Cuboid::new(vec![0.0], vec![1.0]).unwrap(),
                Cuboid::new(vec![2.0], vec![3.0]).unwrap(),
            ],
        )
        .unwrap_err();
        match err {
            Error::EmptyCentralRegion { dimension, .. } => assert_eq!(dimension, "x"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn cuboid_distance_by_clamping() {
        let s = DomainStructure::new([("a", vec!["x"])]).unwrap();
        let m = Metric::uniform(s);
        let c = Cuboid::new(vec![0.9], vec![1.0]).unwrap();
        assert!((distance_to_cuboid(&[0.5], &c, &m) - 0.4).abs() < 1e-15);
        assert_eq!(distance_to_cuboid(&[0.95], &c, &m), 0.0);
    }

    #[test]
    fn membership_examples() {
        assert_eq!(apple().membership(&[0.575, 0.75, 0.40]), 1.0);
        let r = red();
        let v = r.membership(&[0.8]);
        assert!((v - (-2.0f64).exp()).abs() < 1e-12);
        assert!(r.alpha_cut_contains(&[0.8], 0.1).unwrap());
        assert!(r.alpha_cut_contains(&[0.95], 1.0).unwrap());
        assert!(r.alpha_cut_contains(&[0.8], 0.0).is_err());
        assert!(r.alpha_cut_contains(&[0.8], 1.5).is_err());
    }

    #[test]
    fn alpha_above_height_is_empty() {
        let a = apple().with_mu0(0.5).unwrap();
        assert!(!a.alpha_cut_contains(&[0.75, 0.7, 0.47], 0.6).unwrap());
        assert!(a.alpha_cut_contains(&[0.75, 0.7, 0.47], 0.5).unwrap());
    }

    #[test]
    fn projection_examples() {
        let a = apple();
        let same = a.project(&["color", "shape", "taste"]).unwrap();
        assert_eq!(same, a);
        let hue = a.project(&["color"]).unwrap();
        let bounds: Vec<(f64, f64)> = hue
            .core()
            .cuboids()
            .iter()
            .map(|c| (c.lower()[0], c.upper()[0]))
            .collect();
        assert_eq!(bounds, vec![(0.5, 0.8), (0.65, 0.85), (0.7, 1.0)]);
        let st = a.project(&["taste", "shape"]).unwrap();
        assert!((st.weights().domain_weights()[0] - 1.2).abs() < 1e-12);
        assert!((st.weights().domain_weights()[1] - 0.8).abs() < 1e-12);
        assert!(matches!(a.project::<&str>(&[]), Err(Error::Projection(_))));
        assert!(red().project(&["taste"]).is_err());
    }

    #[test]
    fn crisp_subsethood_examples() {
        let gs = granny_smith();
        let a = apple();
        assert!(crisp_subsethood(&gs, &a).holds());
        let back = crisp_subsethood(&a, &gs);
        assert!(back.failed.contains(&SubsetCondition::Decay));
        assert!(crisp_subsethood(&a, &a).holds());
        // Red lacks shape and taste, so it cannot contain Apple's decay ...
        let ra = crisp_subsethood(&red(), &a);
        assert!(ra.failed.contains(&SubsetCondition::Domains));
        // ... but Apple projected to color against Red is the other way.
        assert!(crisp_subsethood(&a, &red())
            .failed
            .contains(&SubsetCondition::CoreInCut));
    }

    #[test]
    fn core_intersections() {
        let a = apple();
        match intersect_cores(a.core(), a.core()).unwrap() {
            CoreIntersection::Core { region, degenerate } => {
                assert!(!degenerate);
                for c in a.core().cuboids() {
                    assert!(region.cuboids().contains(c));
                }
            }
            CoreIntersection::Empty => panic!("self intersection is empty"),
        }
        let gs = granny_smith();
        match intersect_cores(gs.core(), a.core()).unwrap() {
            CoreIntersection::Core { region, .. } => {
                assert_eq!(region.cuboids(), gs.core().cuboids());
            }
            CoreIntersection::Empty => panic!("GS lies inside Apple"),
        }
        let lemon = concept(
            &[([0.70, 0.45, 0.00], [0.80, 0.55, 0.10])],
            20.0,
            [0.5, 0.5, 2.0],
        );
        let orange = concept(&[([0.80, 0.90, 0.60], [0.90, 1.00, 0.70])], 15.0, [1.0; 3]);
        assert_eq!(
            intersect_cores(lemon.core(), orange.core()).unwrap(),
            CoreIntersection::Empty
        );
        assert!(intersect_cores(red().core(), a.core()).is_err());
    }

    #[test]
    fn touching_faces_are_degenerate() {
        let s = DomainStructure::new([("a", vec!["x"])]).unwrap();
        let a =
            CoreRegion::new(s.clone(), vec![Cuboid::new(vec![0.7], vec![0.8]).unwrap()]).unwrap();
        let b = CoreRegion::new(s, vec![Cuboid::new(vec![0.8], vec![0.9]).unwrap()]).unwrap();
        match intersect_cores(&a, &b).unwrap() {
            CoreIntersection::Core { degenerate, .. } => assert!(degenerate),
            CoreIntersection::Empty => panic!("touching intervals share a point"),
        }
    }
}
