//! Concept-space files and a named registry of concepts.
//!
//! A space file is UTF-8 JSON:
//!
//! ```json
//! {"version": 1,
//!  "domains": [{"name": "color", "dimensions": ["hue"]}],
//!  "concepts": [{"name": "Red", "domains": ["color"],
//!                "cuboids": [{"p_min": {"hue": 0.9}, "p_max": {"hue": 1.0}}],
//!                "mu0": 1.0, "c": 20.0,
//!                "domain_weights": {"color": 1.0},
//!                "dimension_weights": {"hue": 1.0}}]}
//! ```
//!
//! Concepts list only the domains they are defined on; bounds and weights
//! are given for exactly those domains and their dimensions.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::concept::{Concept, CoreRegion, Cuboid};
use crate::error::{Error, Result};
use crate::metric::{DomainStructure, WeightSpec};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub version: u32,
    pub domains: Vec<DomainEntry>,
    pub concepts: Vec<ConceptEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainEntry {
    pub name: String,
    pub dimensions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConceptEntry {
    pub name: String,
    pub domains: Vec<String>,
    pub cuboids: Vec<CuboidEntry>,
    pub mu0: f64,
    pub c: f64,
    pub domain_weights: BTreeMap<String, f64>,
    pub dimension_weights: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuboidEntry {
    pub p_min: BTreeMap<String, f64>,
    pub p_max: BTreeMap<String, f64>,
}

impl SpaceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("space files always serialize")
    }
}

/// Concepts over one domain structure, addressed by name.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptSpace {
    structure: DomainStructure,
    concepts: Vec<(String, Concept)>,
}

impl ConceptSpace {
    pub fn new(structure: DomainStructure) -> Self {
        Self {
            structure,
            concepts: Vec::new(),
        }
    }

    /// Adds a concept whose domains must belong to the space.
    pub fn insert(&mut self, name: impl Into<String>, concept: Concept) -> Result<()> {
        let name = name.into();
        if self.get(&name).is_some() {
            return Err(Error::Space {
                line: None,
                message: format!("concept `{name}` defined twice"),
            });
        }
        if !concept.structure().is_subset_of(&self.structure) {
            return Err(Error::Space {
                line: None,
                message: format!("concept `{name}` uses domains outside the space"),
            });
        }
        self.concepts.push((name, concept));
        Ok(())
    }

    pub fn structure(&self) -> &DomainStructure {
        &self.structure
    }

    pub fn get(&self, name: &str) -> Option<&Concept> {
        self.concepts
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
    }

    /// Looks a concept up, failing with a message listing known names.
    pub fn require(&self, name: &str) -> Result<&Concept> {
        self.get(name).ok_or_else(|| Error::Space {
            line: None,
            message: format!(
                "no concept named `{name}` (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ),
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.concepts.iter().map(|(n, _)| n.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Concept)> {
        self.concepts.iter().map(|(n, c)| (n.as_str(), c))
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses and validates a space file. Blank input is an empty space.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Self::new(DomainStructure::empty()));
        }
        Self::from_file(&SpaceFile::from_json(text)?, Some(text))
    }

    /// Validates a parsed file; `source` is used to anchor errors to lines.
    pub fn from_file(file: &SpaceFile, source: Option<&str>) -> Result<Self> {
        let locate = |key: &str, name: &str| source.and_then(|s| find_line(s, key, name));
        if file.version != FORMAT_VERSION {
            return Err(Error::Space {
                line: source.and_then(|s| find_key_line(s, "version")),
                message: format!(
                    "unsupported format version {} (expected {FORMAT_VERSION})",
                    file.version
                ),
            });
        }
        let structure = DomainStructure::new(
            file.domains
                .iter()
                .map(|d| (d.name.clone(), d.dimensions.clone())),
        )
        .map_err(|e| Error::Space {
            line: source.and_then(|s| find_key_line(s, "domains")),
            message: e.to_string(),
        })?;
        let mut space = Self::new(structure);
        for entry in &file.concepts {
            let concept = build_concept(&space.structure, entry).map_err(|e| Error::Space {
                line: locate("name", &entry.name),
                message: format!("concept `{}`: {e}", entry.name),
            })?;
            space
                .insert(entry.name.clone(), concept)
                .map_err(|e| match e {
                    Error::Space { message, .. } => Error::Space {
                        line: locate("name", &entry.name),
                        message,
                    },
                    other => other,
                })?;
        }
        Ok(space)
    }

    /// The file form of this space.
    pub fn to_file(&self) -> SpaceFile {
        let domains = self
            .structure
            .domains()
            .iter()
            .map(|d| DomainEntry {
                name: d.name().to_string(),
                dimensions: d.dimensions().to_vec(),
            })
            .collect();
        let concepts = self
            .concepts
            .iter()
            .map(|(name, c)| concept_entry(name, c))
            .collect();
        SpaceFile {
            version: FORMAT_VERSION,
            domains,
            concepts,
        }
    }
}

fn build_concept(space: &DomainStructure, entry: &ConceptEntry) -> Result<Concept> {
    if entry.domains.is_empty() {
        return Err(Error::Structure("no domains listed".into()));
    }
    let (structure, _) = space.restrict(&entry.domains)?;
    if structure.n_domains() != entry.domains.len() {
        return Err(Error::Structure("a domain is listed twice".into()));
    }
    let cuboids = entry
        .cuboids
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let lower = bounds(&structure, &c.p_min, "p_min", i)?;
            let upper = bounds(&structure, &c.p_max, "p_max", i)?;
            Cuboid::new(lower, upper).map_err(|e| match e {
                Error::Cuboid(m) => Error::Cuboid(format!("cuboid {i}: {m}")),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let core = CoreRegion::new(structure.clone(), cuboids)?;
    let weights =
        WeightSpec::from_named(&structure, &entry.domain_weights, &entry.dimension_weights)?;
    Concept::new(core, entry.mu0, entry.c, weights)
}

fn bounds(
    structure: &DomainStructure,
    values: &BTreeMap<String, f64>,
    field: &str,
    index: usize,
) -> Result<Vec<f64>> {
    if let Some(k) = values
        .keys()
        .find(|k| structure.dimension_index(k).is_none())
    {
        return Err(Error::Cuboid(format!(
            "cuboid {index}: {field} names `{k}`, which is not a dimension of the concept's domains"
        )));
    }
    structure
        .dimension_names()
        .map(|d| {
            values.get(d).copied().ok_or_else(|| {
                Error::Cuboid(format!("cuboid {index}: {field} lacks dimension `{d}`"))
            })
        })
        .collect()
}

fn concept_entry(name: &str, c: &Concept) -> ConceptEntry {
    let st = c.structure();
    let named = |values: &[f64]| -> BTreeMap<String, f64> {
        st.dimension_names()
            .map(str::to_string)
            .zip(values.iter().copied())
            .collect()
    };
    ConceptEntry {
        name: name.to_string(),
        domains: st.domain_names().map(str::to_string).collect(),
        cuboids: c
            .core()
            .cuboids()
            .iter()
            .map(|cub| CuboidEntry {
                p_min: named(cub.lower()),
                p_max: named(cub.upper()),
            })
            .collect(),
        mu0: c.mu0(),
        c: c.c(),
        domain_weights: st
            .domain_names()
            .map(str::to_string)
            .zip(c.weights().domain_weights().iter().copied())
            .collect(),
        dimension_weights: named(c.weights().dimension_weights()),
    }
}

/// 1-based line of the first `"key": "value"` pair.
fn find_line(source: &str, key: &str, value: &str) -> Option<usize> {
    let needle_key = format!("\"{key}\"");
    let needle_value = serde_json::to_string(value).ok()?;
    source.lines().enumerate().find_map(|(i, line)| {
        let k = line.find(&needle_key)?;
        line[k + needle_key.len()..]
            .trim_start()
            .strip_prefix(':')?
            .trim_start()
            .starts_with(&needle_value)
            .then_some(i + 1)
    })
}

fn find_key_line(source: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    source
        .lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1)
}
