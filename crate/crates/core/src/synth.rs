//! Seeded random instances for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{DatabaseInstance, RawTables};
use crate::schema::{ArgumentDoc, AttributeDoc, PopulationDoc, RelationshipDoc, Schema, SchemaDoc};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenAttribute {
    pub name: String,
    /// Values are `v0 .. v{domain_size-1}`.
    pub domain_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenPopulation {
    pub name: String,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    #[serde(default)]
    pub attributes: Vec<GenAttribute>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenRelationship {
    pub name: String,
    pub arguments: Vec<ArgumentDoc>,
    /// Probability that a given pair is related.
    pub density: f64,
    #[serde(default)]
    pub attributes: Vec<GenAttribute>,
}

/// Generator input. The seed is required so every instance is reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub populations: Vec<GenPopulation>,
    #[serde(default)]
    pub relationships: Vec<GenRelationship>,
}

fn domain(size: usize) -> Vec<String> {
    (0..size).map(|i| format!("v{i}")).collect()
}

fn attr_docs(attrs: &[GenAttribute]) -> Vec<AttributeDoc> {
    attrs
        .iter()
        .map(|a| AttributeDoc {
            name: a.name.clone(),
            domain: domain(a.domain_size),
        })
        .collect()
}

fn draw(rng: &mut ChaCha8Rng, attrs: &[GenAttribute]) -> Vec<String> {
    attrs.iter().map(|a| format!("v{}", rng.gen_range(0..a.domain_size))).collect()
}

impl GeneratorConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn schema(&self) -> Result<Schema> {
        Schema::from_doc(SchemaDoc {
            populations: self
                .populations
                .iter()
                .map(|p| PopulationDoc {
                    name: p.name.clone(),
                    table: None,
                    key: "id".into(),
                    variable: p.variable.clone(),
                    attributes: attr_docs(&p.attributes),
                })
                .collect(),
            relationships: self
                .relationships
                .iter()
                .map(|r| RelationshipDoc {
                    name: r.name.clone(),
                    table: None,
                    arguments: r.arguments.clone(),
                    attributes: attr_docs(&r.attributes),
                })
                .collect(),
        })
    }

    /// Same schema shape with population sizes multiplied by `factor`
    /// (rounded, at least 1). With `scale_domains`, every attribute domain is
    /// scaled the same way.
    pub fn scaled(&self, factor: f64, scale_domains: bool) -> GeneratorConfig {
        let scale = |n: usize| ((n as f64 * factor).round() as usize).max(1);
        let scale_attrs = |attrs: &[GenAttribute]| -> Vec<GenAttribute> {
            attrs
                .iter()
                .map(|a| GenAttribute {
                    name: a.name.clone(),
                    domain_size: if scale_domains { scale(a.domain_size) } else { a.domain_size },
                })
                .collect()
        };
        let mut out = self.clone();
        for p in &mut out.populations {
            p.size = scale(p.size);
            p.attributes = scale_attrs(&p.attributes);
        }
        for r in &mut out.relationships {
            r.attributes = scale_attrs(&r.attributes);
        }
        out
    }

    /// Draws entity attributes uniformly, then relates each pair of
    /// entities independently with the relationship's density.
    pub fn generate(&self) -> Result<(Schema, DatabaseInstance)> {
        let schema = self.schema()?;
        for r in &self.relationships {
            if !(0.0..=1.0).contains(&r.density) {
                return Err(Error::InvalidArgument(format!(
                    "density of `{}` must lie in [0, 1], got {}",
                    r.name, r.density
                )));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let key = |pop: &GenPopulation, i: usize| format!("{}{i}", pop.name);
        let mut raw = RawTables::default();
        for p in &self.populations {
            raw.entities
                .push((0..p.size).map(|i| (key(p, i), draw(&mut rng, &p.attributes))).collect());
        }
        for r in &self.relationships {
            let pops: Vec<&GenPopulation> = r
                .arguments
                .iter()
                .map(|a| {
                    self.populations
                        .iter()
                        .find(|p| p.name == a.population)
                        .expect("schema validation checked populations")
                })
                .collect();
            let mut tuples = Vec::new();
            for i in 0..pops[0].size {
                for j in 0..pops[1].size {
                    if rng.gen_bool(r.density) {
                        tuples.push((key(pops[0], i), key(pops[1], j), draw(&mut rng, &r.attributes)));
                    }
                }
            }
            raw.relationships.push(tuples);
        }
        let db = DatabaseInstance::from_rows(&schema, raw)?;
        Ok((schema, db))
    }
}

/// Small random configuration: one to three populations of at most
/// `max_size` entities, two first-order variables per population, and up to
/// `max_rels` relationships over random pairs of distinct variables, so
/// chains, cycles and self-relationships all occur. Domains have at most
/// three values. An empty `densities` draws each density uniformly.
pub fn random_config(seed: u64, max_rels: usize, max_size: usize, densities: &[f64]) -> GeneratorConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let attrs = |rng: &mut ChaCha8Rng, prefix: &str, max: usize| -> Vec<GenAttribute> {
        (0..rng.gen_range(0..=max))
            .map(|k| GenAttribute {
                name: format!("{prefix}{k}"),
                domain_size: rng.gen_range(1..=3),
            })
            .collect()
    };
    let n_pops = rng.gen_range(1..=3);
    let populations: Vec<GenPopulation> = (0..n_pops)
        .map(|p| GenPopulation {
            name: format!("P{p}"),
            size: rng.gen_range(0..=max_size),
            variable: None,
            attributes: attrs(&mut rng, &format!("a{p}_"), 2),
        })
        .collect();
    let pool: Vec<ArgumentDoc> = (0..n_pops)
        .flat_map(|p| {
            ["a", "b"].map(|s| ArgumentDoc {
                variable: format!("V{p}{s}"),
                population: format!("P{p}"),
            })
        })
        .collect();
    let n_rels = rng.gen_range(0..=max_rels);
    let relationships = (0..n_rels)
        .map(|r| {
            let first = rng.gen_range(0..pool.len());
            let mut second = rng.gen_range(0..pool.len() - 1);
            if second >= first {
                second += 1;
            }
            let density = if densities.is_empty() {
                rng.gen_range(0.0..=1.0)
            } else {
                densities[rng.gen_range(0..densities.len())]
            };
            GenRelationship {
                name: format!("R{r}"),
                arguments: vec![pool[first].clone(), pool[second].clone()],
                density,
                attributes: attrs(&mut rng, &format!("b{r}_"), 1),
            }
        })
        .collect();
    GeneratorConfig {
        seed,
        populations,
        relationships,
    }
}
