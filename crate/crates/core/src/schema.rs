//! Schema model: populations, binary relationships and the random variables
//! derived from them.
//!
//! Entity sets become populations, descriptive attributes become functors of
//! one first-order variable (`1Att`s), relationship tables become Boolean
//! relationship variables over two first-order variables, and relationship
//! attributes become functors of the relationship (`2Att`s) whose domain is
//! extended with the reserved value `n/a`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::{Value, NA};

/// Schema file document, as read from JSON.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SchemaDoc {
    pub populations: Vec<PopulationDoc>,
    #[serde(default)]
    pub relationships: Vec<RelationshipDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PopulationDoc {
    pub name: String,
    /// Entity table name; defaults to the population name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    pub key: String,
    /// First-order variable used when no relationship ranges over this
    /// population; defaults to the population name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    #[serde(default)]
    pub attributes: Vec<AttributeDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AttributeDoc {
    pub name: String,
    pub domain: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RelationshipDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    pub arguments: Vec<ArgumentDoc>,
    #[serde(default)]
    pub attributes: Vec<AttributeDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ArgumentDoc {
    pub variable: String,
    pub population: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Attribute {
    pub name: String,
    pub domain: Vec<Value>,
}

impl Attribute {
    pub fn contains(&self, v: &str) -> bool {
        self.domain.iter().any(|d| d.as_str() == v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub name: String,
    pub table: String,
    pub key: String,
    pub attributes: Vec<Attribute>,
}

/// A typed logical variable ranging over one population.
#[derive(Clone, Debug, PartialEq)]
pub struct FoVariable {
    pub name: String,
    pub population: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationshipDecl {
    pub name: String,
    pub table: String,
    /// Indices into [`Schema::variables`], one per argument slot.
    pub args: [usize; 2],
    pub attributes: Vec<Attribute>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableKind {
    Relationship,
    EntityAttribute,
    RelationshipAttribute,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomVariable {
    pub kind: VariableKind,
    /// Qualified name, e.g. `RA(P,S)`, `intelligence(S)`, `capability(P,S)`.
    pub name: String,
    /// The bare functor name.
    pub functor: String,
    /// First-order variable for entity attributes, relationship name otherwise.
    pub owner: String,
    pub domain: Vec<Value>,
}

/// A validated schema. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Schema {
    pub populations: Vec<Population>,
    pub relationships: Vec<RelationshipDecl>,
    pub variables: Vec<FoVariable>,
    doc: SchemaDoc,
    random_variables: Vec<RandomVariable>,
    by_name: HashMap<String, usize>,
}

impl PartialEq for Schema {
    fn eq(&self, other: &Self) -> bool {
        self.doc == other.doc
    }
}

pub fn load_schema(path: impl AsRef<Path>) -> Result<Schema> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Schema::from_json(&text)
}

/// One random variable per relationship, per (first-order variable, entity
/// attribute) and per (relationship, relationship attribute).
pub fn derive_random_variables(schema: &Schema) -> Vec<RandomVariable> {
    schema.random_variables.clone()
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSchema(msg.into())
}

fn check_attributes(owner: &str, attrs: &[AttributeDoc]) -> Result<Vec<Attribute>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(attrs.len());
    for a in attrs {
        if a.name.is_empty() {
            return Err(invalid(format!("`{owner}` has an attribute with an empty name")));
        }
        if !seen.insert(a.name.as_str()) {
            return Err(invalid(format!("duplicate attribute `{}` in `{owner}`", a.name)));
        }
        if a.domain.is_empty() {
            return Err(invalid(format!("empty domain for `{owner}.{}`", a.name)));
        }
        let mut values = HashSet::new();
        for v in &a.domain {
            if v == NA {
                return Err(invalid(format!(
                    "domain of `{owner}.{}` contains the reserved value `{NA}`",
                    a.name
                )));
            }
            if !values.insert(v.as_str()) {
                return Err(invalid(format!(
                    "duplicate value `{v}` in domain of `{owner}.{}`",
                    a.name
                )));
            }
        }
        out.push(Attribute {
            name: a.name.clone(),
            domain: a.domain.iter().map(|v| Value::from(v.as_str())).collect(),
        });
    }
    Ok(out)
}

impl Schema {
    pub fn from_json(text: &str) -> Result<Schema> {
        let doc: SchemaDoc = serde_json::from_str(text)?;
        Schema::from_doc(doc)
    }

    pub fn from_doc(doc: SchemaDoc) -> Result<Schema> {
        let mut populations = Vec::with_capacity(doc.populations.len());
        let mut pop_index = HashMap::new();
        let mut tables = HashSet::new();
        for p in &doc.populations {
            if p.name.is_empty() {
                return Err(invalid("population with an empty name"));
            }
            if pop_index.insert(p.name.clone(), populations.len()).is_some() {
                return Err(invalid(format!("duplicate population `{}`", p.name)));
            }
            let table = p.table.clone().unwrap_or_else(|| p.name.clone());
            if !tables.insert(table.clone()) {
                return Err(invalid(format!("duplicate table name `{table}`")));
            }
            let attributes = check_attributes(&p.name, &p.attributes)?;
            if attributes.iter().any(|a| a.name == p.key) {
                return Err(invalid(format!(
                    "key column `{}` of `{}` is also declared as an attribute",
                    p.key, p.name
                )));
            }
            populations.push(Population {
                name: p.name.clone(),
                table,
                key: p.key.clone(),
                attributes,
            });
        }

        let mut variables: Vec<FoVariable> = Vec::new();
        let mut var_index: HashMap<String, usize> = HashMap::new();
        let mut relationships = Vec::with_capacity(doc.relationships.len());
        let mut rel_names = HashSet::new();
        for r in &doc.relationships {
            if r.arguments.len() != 2 {
                return Err(Error::NonBinaryRelationship {
                    name: r.name.clone(),
                    arity: r.arguments.len(),
                });
            }
            if !rel_names.insert(r.name.as_str()) {
                return Err(invalid(format!("duplicate relationship `{}`", r.name)));
            }
            let table = r.table.clone().unwrap_or_else(|| r.name.clone());
            if !tables.insert(table.clone()) {
                return Err(invalid(format!("duplicate table name `{table}`")));
            }
            if r.arguments[0].variable == r.arguments[1].variable {
                return Err(invalid(format!(
                    "relationship `{}` uses first-order variable `{}` in both slots",
                    r.name, r.arguments[0].variable
                )));
            }
            let mut args = [0usize; 2];
            for (slot, a) in r.arguments.iter().enumerate() {
                let pop = *pop_index
                    .get(&a.population)
                    .ok_or_else(|| Error::UnknownPopulation(a.population.clone()))?;
                let idx = match var_index.get(&a.variable) {
                    Some(&i) => {
                        if variables[i].population != pop {
                            return Err(invalid(format!(
                                "first-order variable `{}` ranges over both `{}` and `{}`",
                                a.variable, populations[variables[i].population].name, a.population
                            )));
                        }
                        i
                    }
                    None => {
                        variables.push(FoVariable {
                            name: a.variable.clone(),
                            population: pop,
                        });
                        var_index.insert(a.variable.clone(), variables.len() - 1);
                        variables.len() - 1
                    }
                };
                args[slot] = idx;
            }
            if r.arguments.iter().any(|a| r.attributes.iter().any(|at| at.name == a.variable)) {
                return Err(invalid(format!(
                    "relationship `{}` has an attribute named like a key column",
                    r.name
                )));
            }
            relationships.push(RelationshipDecl {
                name: r.name.clone(),
                table,
                args,
                attributes: check_attributes(&r.name, &r.attributes)?,
            });
        }

        // Populations no relationship ranges over still get an entity node.
        for (pi, p) in doc.populations.iter().enumerate() {
            if variables.iter().any(|v| v.population == pi) {
                continue;
            }
            let name = p.variable.clone().unwrap_or_else(|| p.name.clone());
            if var_index.contains_key(&name) {
                return Err(invalid(format!(
                    "default variable `{name}` of `{}` is already bound",
                    p.name
                )));
            }
            var_index.insert(name.clone(), variables.len());
            variables.push(FoVariable {
                name,
                population: pi,
            });
        }

        let mut schema = Schema {
            populations,
            relationships,
            variables,
            doc,
            random_variables: Vec::new(),
            by_name: HashMap::new(),
        };
        schema.build_random_variables()?;
        Ok(schema)
    }

    fn build_random_variables(&mut self) -> Result<()> {
        let mut rvs = Vec::new();
        for (ri, r) in self.relationships.iter().enumerate() {
            rvs.push(RandomVariable {
                kind: VariableKind::Relationship,
                name: self.relationship_var(ri),
                functor: r.name.clone(),
                owner: r.name.clone(),
                domain: vec![Value::t(), Value::f()],
            });
        }
        for (vi, v) in self.variables.iter().enumerate() {
            for a in &self.populations[v.population].attributes {
                rvs.push(RandomVariable {
                    kind: VariableKind::EntityAttribute,
                    name: self.entity_attribute_name(&a.name, vi),
                    functor: a.name.clone(),
                    owner: v.name.clone(),
                    domain: a.domain.clone(),
                });
            }
        }
        for (ri, r) in self.relationships.iter().enumerate() {
            for a in &r.attributes {
                let mut domain = a.domain.clone();
                domain.push(Value::na());
                rvs.push(RandomVariable {
                    kind: VariableKind::RelationshipAttribute,
                    name: self.relationship_attribute_name(&a.name, ri),
                    functor: a.name.clone(),
                    owner: r.name.clone(),
                    domain,
                });
            }
        }
        let mut by_name = HashMap::new();
        for (i, rv) in rvs.iter().enumerate() {
            if by_name.insert(rv.name.clone(), i).is_some() {
                return Err(invalid(format!("random variable name `{}` is ambiguous", rv.name)));
            }
        }
        self.random_variables = rvs;
        self.by_name = by_name;
        Ok(())
    }

    pub fn doc(&self) -> &SchemaDoc {
        &self.doc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("schema document serializes")
    }

    pub fn random_variables(&self) -> &[RandomVariable] {
        &self.random_variables
    }

    pub fn random_variable(&self, name: &str) -> Option<&RandomVariable> {
        self.by_name.get(name).map(|&i| &self.random_variables[i])
    }

    pub fn population_index(&self, name: &str) -> Option<usize> {
        self.populations.iter().position(|p| p.name == name)
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn relationship_index(&self, name: &str) -> Option<usize> {
        self.relationships.iter().position(|r| r.name == name)
    }

    /// Number of relationship variables.
    pub fn m(&self) -> usize {
        self.relationships.len()
    }

    /// `R(X,Y)`.
    pub fn relationship_var(&self, rel: usize) -> String {
        let r = &self.relationships[rel];
        format!(
            "{}({},{})",
            r.name, self.variables[r.args[0]].name, self.variables[r.args[1]].name
        )
    }

    /// `attr(X)`.
    pub fn entity_attribute_name(&self, attr: &str, var: usize) -> String {
        format!("{attr}({})", self.variables[var].name)
    }

    /// `attr(X,Y)` for an attribute of relationship `R(X,Y)`.
    pub fn relationship_attribute_name(&self, attr: &str, rel: usize) -> String {
        let r = &self.relationships[rel];
        format!(
            "{attr}({},{})",
            self.variables[r.args[0]].name, self.variables[r.args[1]].name
        )
    }

    /// `1Atts(X)`.
    pub fn one_atts(&self, var: usize) -> Vec<String> {
        self.populations[self.variables[var].population]
            .attributes
            .iter()
            .map(|a| self.entity_attribute_name(&a.name, var))
            .collect()
    }

    /// `2Atts(R)`.
    pub fn two_atts(&self, rel: usize) -> Vec<String> {
        self.relationships[rel]
            .attributes
            .iter()
            .map(|a| self.relationship_attribute_name(&a.name, rel))
            .collect()
    }

    pub fn shares_variable(&self, a: usize, b: usize) -> bool {
        let (ra, rb) = (&self.relationships[a], &self.relationships[b]);
        ra.args.iter().any(|v| rb.args.contains(v))
    }
}

impl fmt::Display for RandomVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    pub const UNIVERSITY: &str = r#"{
      "populations": [
        {"name": "Student", "key": "s_id", "variable": "S",
         "attributes": [{"name": "intelligence", "domain": ["hi", "lo"]},
                        {"name": "ranking", "domain": ["1", "2"]}]},
        {"name": "Professor", "key": "p_id", "variable": "P",
         "attributes": [{"name": "popularity", "domain": ["hi", "lo"]},
                        {"name": "teachingability", "domain": ["hi", "lo"]}]},
        {"name": "Course", "key": "c_id", "variable": "C",
         "attributes": [{"name": "difficulty", "domain": ["hard", "easy"]}]}
      ],
      "relationships": [
        {"name": "RA", "arguments": [{"variable": "P", "population": "Professor"},
                                     {"variable": "S", "population": "Student"}],
         "attributes": [{"name": "capability", "domain": ["hi", "lo"]},
                        {"name": "salary", "domain": ["high", "low"]}]},
        {"name": "Reg", "arguments": [{"variable": "S", "population": "Student"},
                                      {"variable": "C", "population": "Course"}],
         "attributes": [{"name": "grade", "domain": ["A", "B"]}]},
        {"name": "Teaches", "arguments": [{"variable": "P", "population": "Professor"},
                                          {"variable": "C", "population": "Course"}]}
      ]
    }"#;
}
