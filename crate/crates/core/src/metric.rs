//! Domain structure, salience weights and the combined distance.
//!
//! Coordinates are stored densely, in the order fixed by a
//! [`DomainStructure`]: the dimensions of the first domain, then those of
//! the second, and so on.

use std::collections::{BTreeMap, HashSet};
use std::ops::{Deref, Range};

use crate::error::{Error, Result};

/// Relative tolerance of the triangle-equality test in [`is_between`].
pub const BETWEEN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    name: String,
    dimensions: Vec<String>,
}

impl Domain {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimensions(&self) -> &[String] {
        &self.dimensions
    }

    pub fn len(&self) -> usize {
        self.dimensions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dimensions.is_empty()
    }
}

/// Ordered dimensions partitioned into named domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainStructure {
    domains: Vec<Domain>,
    starts: Vec<usize>,
    n_dims: usize,
}

impl DomainStructure {
    /// Builds a structure from `(domain, dimensions)` pairs in order.
    pub fn new<N, D, I>(domains: I) -> Result<Self>
    where
        I: IntoIterator<Item = (N, Vec<D>)>,
        N: Into<String>,
        D: Into<String>,
    {
        let mut seen_domains = HashSet::new();
        let mut seen_dims = HashSet::new();
        let mut out = Vec::new();
        let mut starts = Vec::new();
        let mut n_dims = 0;
        for (name, dims) in domains {
            let name = name.into();
            let dims: Vec<String> = dims.into_iter().map(Into::into).collect();
            if dims.is_empty() {
                return Err(Error::Structure(format!(
                    "domain `{name}` has no dimensions"
                )));
            }
            if !seen_domains.insert(name.clone()) {
                return Err(Error::Structure(format!("domain `{name}` declared twice")));
            }
            for d in &dims {
                if !seen_dims.insert(d.clone()) {
                    return Err(Error::Structure(format!(
                        "dimension `{d}` belongs to more than one domain"
                    )));
                }
            }
            starts.push(n_dims);
            n_dims += dims.len();
            out.push(Domain {
                name,
                dimensions: dims,
            });
        }
        Ok(Self {
            domains: out,
            starts,
            n_dims,
        })
    }

    /// The structure with no domains at all.
    pub fn empty() -> Self {
        Self {
            domains: Vec::new(),
            starts: Vec::new(),
            n_dims: 0,
        }
    }

    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    pub fn n_domains(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    pub fn domain_names(&self) -> impl Iterator<Item = &str> {
        self.domains.iter().map(|d| d.name.as_str())
    }

    /// Index range of the coordinates belonging to domain `i`.
    pub fn domain_range(&self, i: usize) -> Range<usize> {
        self.starts[i]..self.starts[i] + self.domains[i].len()
    }

    pub fn domain_ranges(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.domains.len()).map(|i| self.domain_range(i))
    }

    /// Index of the domain containing dimension index `d`.
    pub fn domain_of(&self, d: usize) -> usize {
        self.starts.partition_point(|&s| s <= d) - 1
    }

    pub fn domain_index(&self, name: &str) -> Option<usize> {
        self.domains.iter().position(|d| d.name == name)
    }

    pub fn dimension_index(&self, name: &str) -> Option<usize> {
        self.dimension_names().position(|d| d == name)
    }

    pub fn dimension_names(&self) -> impl Iterator<Item = &str> {
        self.domains
            .iter()
            .flat_map(|d| d.dimensions.iter().map(String::as_str))
    }

    pub fn dimension_name(&self, d: usize) -> &str {
        let dom = self.domain_of(d);
        &self.domains[dom].dimensions[d - self.starts[dom]]
    }

    /// Restricts to the named domains, keeping this structure's order.
    ///
    /// Returns the sub-structure and, for each of its dimensions, the index
    /// of that dimension in `self`.
    pub fn restrict<S: AsRef<str>>(&self, names: &[S]) -> Result<(DomainStructure, Vec<usize>)> {
        for n in names {
            if self.domain_index(n.as_ref()).is_none() {
                return Err(Error::Structure(format!(
                    "domain `{}` is not part of the structure",
                    n.as_ref()
                )));
            }
        }
        let keep: HashSet<&str> = names.iter().map(AsRef::as_ref).collect();
        let mut parts = Vec::new();
        let mut indices = Vec::new();
        for (i, dom) in self.domains.iter().enumerate() {
            if keep.contains(dom.name.as_str()) {
                parts.push((dom.name.clone(), dom.dimensions.clone()));
                indices.extend(self.domain_range(i));
            }
        }
        Ok((DomainStructure::new(parts)?, indices))
    }

    /// Names of the domains present, with identical dimensions, in both.
    pub fn shared_domains(&self, other: &DomainStructure) -> Vec<String> {
        self.domains
            .iter()
            .filter(|d| other.domains.iter().any(|o| o == *d))
            .map(|d| d.name.clone())
            .collect()
    }

    /// Whether every domain of `self` also appears in `other`.
    pub fn is_subset_of(&self, other: &DomainStructure) -> bool {
        self.domains.iter().all(|d| other.domains.contains(d))
    }

    /// Same domains (as a set) regardless of order.
    pub fn same_domains(&self, other: &DomainStructure) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    fn check_len(&self, what: &str, len: usize) -> Result<()> {
        if len != self.n_dims {
            return Err(Error::Structure(format!(
                "{what} has {len} coordinates, the domain structure has {} dimensions",
                self.n_dims
            )));
        }
        Ok(())
    }
}

/// Domain weights `w_δ` and dimension weights `w_d`.
///
/// Domain weights sum to the number of domains and the dimension weights of
/// every domain sum to one. Both vectors follow the order of the
/// [`DomainStructure`] they were validated against.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    domain: Vec<f64>,
    dimension: Vec<f64>,
}

/// Factors applied by [`WeightSpec::normalized`].
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    pub domain_factor: f64,
    /// One factor per domain, applied to that domain's dimension weights.
    pub dimension_factors: Vec<f64>,
}

impl WeightSpec {
    /// Absolute tolerance on the weight-sum constraints.
    pub const TOLERANCE: f64 = 1e-9;

    pub fn new(
        structure: &DomainStructure,
        domain_weights: Vec<f64>,
        dimension_weights: Vec<f64>,
    ) -> Result<Self> {
        if domain_weights.len() != structure.n_domains() {
            return Err(Error::Weights(format!(
                "{} domain weights for {} domains",
                domain_weights.len(),
                structure.n_domains()
            )));
        }
        if dimension_weights.len() != structure.n_dims() {
            return Err(Error::Weights(format!(
                "{} dimension weights for {} dimensions",
                dimension_weights.len(),
                structure.n_dims()
            )));
        }
        for (i, &w) in domain_weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Weights(format!(
                    "weight of domain `{}` must be positive, got {w}",
                    structure.domains()[i].name()
                )));
            }
        }
        for (d, &w) in dimension_weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Weights(format!(
                    "weight of dimension `{}` must be positive, got {w}",
                    structure.dimension_name(d)
                )));
            }
        }
        let total: f64 = domain_weights.iter().sum();
        let expected = structure.n_domains() as f64;
        if (total - expected).abs() > Self::TOLERANCE {
            return Err(Error::Weights(format!(
                "domain weights sum to {total}, expected {expected}"
            )));
        }
        for (i, range) in structure.domain_ranges().enumerate() {
            let sum: f64 = dimension_weights[range].iter().sum();
            if (sum - 1.0).abs() > Self::TOLERANCE {
                return Err(Error::Weights(format!(
                    "dimension weights of domain `{}` sum to {sum}, expected 1",
                    structure.domains()[i].name()
                )));
            }
        }
        Ok(Self {
            domain: domain_weights,
            dimension: dimension_weights,
        })
    }

    /// Builds weights from name-keyed maps.
    pub fn from_named(
        structure: &DomainStructure,
        domain_weights: &BTreeMap<String, f64>,
        dimension_weights: &BTreeMap<String, f64>,
    ) -> Result<Self> {
        for key in domain_weights.keys() {
            if structure.domain_index(key).is_none() {
                return Err(Error::Weights(format!(
                    "weight given for unknown domain `{key}`"
                )));
            }
        }
        for key in dimension_weights.keys() {
            if structure.dimension_index(key).is_none() {
                return Err(Error::Weights(format!(
                    "weight given for unknown dimension `{key}`"
                )));
            }
        }
        let dw = structure
            .domain_names()
            .map(|n| {
                domain_weights
                    .get(n)
                    .copied()
                    .ok_or_else(|| Error::Weights(format!("missing weight for domain `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mw = structure
            .dimension_names()
            .map(|n| {
                dimension_weights
                    .get(n)
                    .copied()
                    .ok_or_else(|| Error::Weights(format!("missing weight for dimension `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(structure, dw, mw)
    }

    /// `w_δ = 1` and `w_d = 1/|δ|` everywhere.
    pub fn uniform(structure: &DomainStructure) -> Self {
        let dimension = structure
            .domains()
            .iter()
            .flat_map(|d| std::iter::repeat_n(1.0 / d.len() as f64, d.len()))
            .collect();
        Self {
            domain: vec![1.0; structure.n_domains()],
            dimension,
        }
    }

    /// Rescales arbitrary positive weights onto the constraint surface and
    /// reports the factors used.
    pub fn normalized(
        structure: &DomainStructure,
        domain_weights: Vec<f64>,
        dimension_weights: Vec<f64>,
    ) -> Result<(Self, Normalization)> {
        if domain_weights.len() != structure.n_domains()
            || dimension_weights.len() != structure.n_dims()
        {
            return Err(Error::Weights(
                "weight vectors do not match the domain structure".into(),
            ));
        }
        if domain_weights
            .iter()
            .chain(&dimension_weights)
            .any(|w| !(w.is_finite() && *w > 0.0))
        {
            return Err(Error::Weights("weights must be positive and finite".into()));
        }
        let total: f64 = domain_weights.iter().sum();
        let domain_factor = structure.n_domains() as f64 / total;
        let domain = domain_weights.iter().map(|w| w * domain_factor).collect();
        let mut dimension = dimension_weights;
        let mut dimension_factors = Vec::with_capacity(structure.n_domains());
        for range in structure.domain_ranges() {
            let f = 1.0 / dimension[range.clone()].iter().sum::<f64>();
            for w in &mut dimension[range] {
                *w *= f;
            }
            dimension_factors.push(f);
        }
        let spec = Self::new(structure, domain, dimension)?;
        Ok((
            spec,
            Normalization {
                domain_factor,
                dimension_factors,
            },
        ))
    }

    pub fn domain_weights(&self) -> &[f64] {
        &self.domain
    }

    pub fn dimension_weights(&self) -> &[f64] {
        &self.dimension
    }

    /// Per-dimension stretch factor `w_δ(d) · √w_d`.
    pub fn stretch(&self, structure: &DomainStructure) -> Vec<f64> {
        (0..structure.n_dims())
            .map(|d| self.domain[structure.domain_of(d)] * self.dimension[d].sqrt())
            .collect()
    }

    /// Linear interpolation `(1 - t)·self + t·other`; stays normalized.
    pub fn interpolate(&self, other: &WeightSpec, t: f64) -> WeightSpec {
        let lerp = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter()
                .zip(b)
                .map(|(x, y)| (1.0 - t) * x + t * y)
                .collect()
        };
        WeightSpec {
            domain: lerp(&self.domain, &other.domain),
            dimension: lerp(&self.dimension, &other.dimension),
        }
    }

    /// Keeps the listed domains (indices into `structure`) and rescales the
    /// kept domain weights multiplicatively so they sum to their count.
    /// Dimension weights are kept as they are.
    pub fn project(&self, structure: &DomainStructure, kept_domains: &[usize]) -> WeightSpec {
        let kept_sum: f64 = kept_domains.iter().map(|&i| self.domain[i]).sum();
        let scale = kept_domains.len() as f64 / kept_sum;
        let domain = kept_domains
            .iter()
            .map(|&i| self.domain[i] * scale)
            .collect();
        let dimension = kept_domains
            .iter()
            .flat_map(|&i| self.dimension[structure.domain_range(i)].iter().copied())
            .collect();
        WeightSpec { domain, dimension }
    }

    pub(crate) fn check(&self, structure: &DomainStructure) -> Result<()> {
        Self::new(structure, self.domain.clone(), self.dimension.clone()).map(|_| ())
    }
}

/// A point of the space, coordinates in domain-structure order.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    /// Builds a point from name-keyed coordinates; every dimension of the
    /// structure must be present, extra names are rejected.
    pub fn from_named(structure: &DomainStructure, coords: &BTreeMap<String, f64>) -> Result<Self> {
        if let Some(k) = coords
            .keys()
            .find(|k| structure.dimension_index(k).is_none())
        {
            return Err(Error::Structure(format!("unknown dimension `{k}`")));
        }
        structure
            .dimension_names()
            .map(|n| {
                coords
                    .get(n)
                    .copied()
                    .ok_or_else(|| Error::Structure(format!("missing coordinate `{n}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Point)
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// A domain structure together with weights: the combined metric `d_C^Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    structure: DomainStructure,
    weights: WeightSpec,
    stretch: Vec<f64>,
}

impl Metric {
    pub fn new(structure: DomainStructure, weights: WeightSpec) -> Result<Self> {
        weights.check(&structure)?;
        Ok(Self::new_unchecked(structure, weights))
    }

    pub(crate) fn new_unchecked(structure: DomainStructure, weights: WeightSpec) -> Self {
        let stretch = weights.stretch(&structure);
        Self {
            structure,
            weights,
            stretch,
        }
    }

    pub fn uniform(structure: DomainStructure) -> Self {
        let weights = WeightSpec::uniform(&structure);
        Self::new_unchecked(structure, weights)
    }

    pub fn structure(&self) -> &DomainStructure {
        &self.structure
    }

    pub fn weights(&self) -> &WeightSpec {
        &self.weights
    }

    pub fn stretch(&self) -> &[f64] {
        &self.stretch
    }

    /// `Σ_δ w_δ · sqrt(Σ_{d∈δ} w_d |x_d − y_d|²)`; coordinates unchecked.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.structure.n_dims());
        debug_assert_eq!(y.len(), self.structure.n_dims());
        self.structure
            .domain_ranges()
            .enumerate()
            .map(|(i, range)| {
                let inner: f64 = range
                    .map(|d| {
                        let diff = x[d] - y[d];
                        self.weights.dimension[d] * diff * diff
                    })
                    .sum();
                self.weights.domain[i] * inner.sqrt()
            })
            .sum()
    }

    pub fn checked_distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.structure.check_len("first point", x.len())?;
        self.structure.check_len("second point", y.len())?;
        Ok(self.distance(x, y))
    }
}

/// The combined distance `d_C^Δ(x, y, W)`.
pub fn combined_distance(
    x: &[f64],
    y: &[f64],
    structure: &DomainStructure,
    weights: &WeightSpec,
) -> Result<f64> {
    Metric::new(structure.clone(), weights.clone())?.checked_distance(x, y)
}

/// `exp(−c · d(x, y))`.
pub fn point_similarity(
    x: &[f64],
    y: &[f64],
    c: f64,
    structure: &DomainStructure,
    weights: &WeightSpec,
) -> Result<f64> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Parameter(format!(
            "sensitivity c must be positive, got {c}"
        )));
    }
    Ok((-c * combined_distance(x, y, structure, weights)?).exp())
}

fn triple_distances(
    x: &[f64],
    y: &[f64],
    z: &[f64],
    structure: &DomainStructure,
    weights: &WeightSpec,
) -> Result<(f64, f64, f64)> {
    let m = Metric::new(structure.clone(), weights.clone())?;
    structure.check_len("z", z.len())?;
    Ok((
        m.checked_distance(x, y)?,
        m.distance(y, z),
        m.distance(x, z),
    ))
}

/// Whether `y` lies between `x` and `z`: `d(x,y) + d(y,z) = d(x,z)` up to
/// [`BETWEEN_TOLERANCE`] relative error.
pub fn is_between(
    x: &[f64],
    y: &[f64],
    z: &[f64],
    structure: &DomainStructure,
    weights: &WeightSpec,
) -> Result<bool> {
    let (xy, yz, xz) = triple_distances(x, y, z, structure, weights)?;
    Ok(between_from_distances(xy, yz, xz))
}

pub(crate) fn between_from_distances(xy: f64, yz: f64, xz: f64) -> bool {
    let path = xy + yz;
    (path - xz).abs() <= BETWEEN_TOLERANCE * path
}

/// `d(x,z) / (d(x,y) + d(y,z))`, with the value 1 when `x = y = z`.
pub fn soft_betweenness_points(
    x: &[f64],
    y: &[f64],
    z: &[f64],
    structure: &DomainStructure,
    weights: &WeightSpec,
) -> Result<f64> {
    let (xy, yz, xz) = triple_distances(x, y, z, structure, weights)?;
    Ok(soft_from_distances(xy, yz, xz))
}

pub(crate) fn soft_from_distances(xy: f64, yz: f64, xz: f64) -> f64 {
    let path = xy + yz;
    if path <= 0.0 {
        1.0
    } else {
        (xz / path).clamp(0.0, 1.0)
    }
}
