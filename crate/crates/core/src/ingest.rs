//! Loading entity and relationship tables from CSV into a validated
//! in-memory instance.

use std::collections::HashMap;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::schema::{Attribute, Schema};
use crate::value::{Value, NA};

#[derive(Clone, Debug, Default, PartialEq)]
struct EntityTable {
    keys: Vec<String>,
    records: Vec<Vec<Value>>,
    index: HashMap<String, usize>,
}

#[derive(Clone, Debug, Default, PartialEq)]
struct RelationshipTable {
    pairs: Vec<(usize, usize)>,
    records: Vec<Vec<Value>>,
    index: HashMap<(usize, usize), usize>,
}

/// Loaded tuples for every entity and relationship table of a schema.
///
/// Entities are addressed by dense indices per population. Every read through
/// the tuple accessors bumps [`DatabaseInstance::tuple_accesses`].
#[derive(Debug)]
pub struct DatabaseInstance {
    entities: Vec<EntityTable>,
    relationships: Vec<RelationshipTable>,
    accesses: AtomicU64,
}

impl PartialEq for DatabaseInstance {
    fn eq(&self, other: &Self) -> bool {
        self.entities == other.entities && self.relationships == other.relationships
    }
}

impl Clone for DatabaseInstance {
    fn clone(&self) -> Self {
        DatabaseInstance {
            entities: self.entities.clone(),
            relationships: self.relationships.clone(),
            accesses: AtomicU64::new(0),
        }
    }
}

/// Raw rows for [`DatabaseInstance::from_rows`]: per population `(key, values)`,
/// per relationship `(first key, second key, values)`. Values follow the
/// schema's attribute order.
#[derive(Clone, Debug, Default)]
pub struct RawTables {
    pub entities: Vec<Vec<(String, Vec<String>)>>,
    pub relationships: Vec<Vec<(String, String, Vec<String>)>>,
}

fn checked_value(table: &str, attr: &Attribute, raw: &str) -> Result<Value> {
    if raw == NA || !attr.contains(raw) {
        return Err(Error::ValueOutsideDomain {
            table: table.to_string(),
            column: attr.name.clone(),
            value: raw.to_string(),
        });
    }
    Ok(attr
        .domain
        .iter()
        .find(|d| d.as_str() == raw)
        .cloned()
        .expect("checked above"))
}

impl DatabaseInstance {
    /// Validates and indexes raw rows against `schema`.
    pub fn from_rows(schema: &Schema, raw: RawTables) -> Result<Self> {
        if raw.entities.len() != schema.populations.len()
            || raw.relationships.len() != schema.relationships.len()
        {
            return Err(Error::InvalidArgument(
                "raw tables do not match the schema's table count".into(),
            ));
        }
        let mut entities = Vec::with_capacity(raw.entities.len());
        for (pop, rows) in schema.populations.iter().zip(raw.entities) {
            let mut t = EntityTable::default();
            for (key, values) in rows {
                if values.len() != pop.attributes.len() {
                    return Err(Error::InvalidArgument(format!(
                        "entity `{key}` of `{}` has {} values, expected {}",
                        pop.name,
                        values.len(),
                        pop.attributes.len()
                    )));
                }
                if t.index.contains_key(&key) {
                    return Err(Error::DuplicateKey {
                        table: pop.table.clone(),
                        key,
                    });
                }
                let rec = pop
                    .attributes
                    .iter()
                    .zip(&values)
                    .map(|(a, v)| checked_value(&pop.table, a, v))
                    .collect::<Result<Vec<_>>>()?;
                t.index.insert(key.clone(), t.keys.len());
                t.keys.push(key);
                t.records.push(rec);
            }
            entities.push(t);
        }

        let mut relationships = Vec::with_capacity(raw.relationships.len());
        for (rel, rows) in schema.relationships.iter().zip(raw.relationships) {
            let pops = rel.args.map(|v| schema.variables[v].population);
            let mut t = RelationshipTable::default();
            for (a, b, values) in rows {
                let mut ids = [0usize; 2];
                for (slot, key) in [&a, &b].into_iter().enumerate() {
                    ids[slot] = *entities[pops[slot]].index.get(key).ok_or_else(|| {
                        Error::DanglingForeignKey {
                            table: rel.table.clone(),
                            key: key.clone(),
                            population: schema.populations[pops[slot]].name.clone(),
                        }
                    })?;
                }
                if values.len() != rel.attributes.len() {
                    return Err(Error::InvalidArgument(format!(
                        "tuple ({a}, {b}) of `{}` has {} values, expected {}",
                        rel.name,
                        values.len(),
                        rel.attributes.len()
                    )));
                }
                let pair = (ids[0], ids[1]);
                if t.index.contains_key(&pair) {
                    return Err(Error::DuplicatePair {
                        table: rel.table.clone(),
                        first: a,
                        second: b,
                    });
                }
                let rec = rel
                    .attributes
                    .iter()
                    .zip(&values)
                    .map(|(at, v)| checked_value(&rel.table, at, v))
                    .collect::<Result<Vec<_>>>()?;
                t.index.insert(pair, t.pairs.len());
                t.pairs.push(pair);
                t.records.push(rec);
            }
            relationships.push(t);
        }
        Ok(DatabaseInstance {
            entities,
            relationships,
            accesses: AtomicU64::new(0),
        })
    }

    /// Number of entities of population `pop`.
    pub fn population_len(&self, pop: usize) -> usize {
        self.entities[pop].keys.len()
    }

    /// Number of tuples of relationship `rel`.
    pub fn relationship_len(&self, rel: usize) -> usize {
        self.relationships[rel].pairs.len()
    }

    pub fn entity_key(&self, pop: usize, idx: usize) -> &str {
        &self.entities[pop].keys[idx]
    }

    /// Attribute values of one entity.
    pub fn entity(&self, pop: usize, idx: usize) -> &[Value] {
        self.accesses.fetch_add(1, Ordering::Relaxed);
        &self.entities[pop].records[idx]
    }

    /// The `i`-th tuple of a relationship: entity indices and 2Att values.
    pub fn tuple(&self, rel: usize, i: usize) -> ((usize, usize), &[Value]) {
        self.accesses.fetch_add(1, Ordering::Relaxed);
        let t = &self.relationships[rel];
        (t.pairs[i], &t.records[i])
    }

    /// Looks up a related pair; `None` when the relationship is false.
    pub fn lookup(&self, rel: usize, a: usize, b: usize) -> Option<&[Value]> {
        self.accesses.fetch_add(1, Ordering::Relaxed);
        let t = &self.relationships[rel];
        t.index.get(&(a, b)).map(|&i| t.records[i].as_slice())
    }

    /// Raw data-tuple reads performed through this instance so far.
    pub fn tuple_accesses(&self) -> u64 {
        self.accesses.load(Ordering::Relaxed)
    }

    /// Writes every table as `<table>.csv` into `dir`.
    pub fn export(&self, schema: &Schema, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (pop, t) in schema.populations.iter().zip(&self.entities) {
            let path = dir.join(format!("{}.csv", pop.table));
            let mut w = csv::Writer::from_path(&path).map_err(|e| Error::csv(&path, e))?;
            let mut header = vec![pop.key.as_str()];
            header.extend(pop.attributes.iter().map(|a| a.name.as_str()));
            w.write_record(&header).map_err(|e| Error::csv(&path, e))?;
            for (k, rec) in t.keys.iter().zip(&t.records) {
                let mut row = vec![k.as_str()];
                row.extend(rec.iter().map(Value::as_str));
                w.write_record(&row).map_err(|e| Error::csv(&path, e))?;
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
        }
        for (ri, (rel, t)) in schema.relationships.iter().zip(&self.relationships).enumerate() {
            let path = dir.join(format!("{}.csv", rel.table));
            let mut w = csv::Writer::from_path(&path).map_err(|e| Error::csv(&path, e))?;
            let mut header: Vec<&str> = rel.args.iter().map(|&v| schema.variables[v].name.as_str()).collect();
            header.extend(rel.attributes.iter().map(|a| a.name.as_str()));
            w.write_record(&header).map_err(|e| Error::csv(&path, e))?;
            let pops = schema.relationships[ri].args.map(|v| schema.variables[v].population);
            for (&(a, b), rec) in t.pairs.iter().zip(&t.records) {
                let mut row = vec![
                    self.entities[pops[0]].keys[a].as_str(),
                    self.entities[pops[1]].keys[b].as_str(),
                ];
                row.extend(rec.iter().map(Value::as_str));
                w.write_record(&row).map_err(|e| Error::csv(&path, e))?;
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

/// Tuple count of a population, by name.
pub fn population_size(schema: &Schema, db: &DatabaseInstance, population: &str) -> Result<usize> {
    let p = schema
        .population_index(population)
        .ok_or_else(|| Error::UnknownPopulation(population.to_string()))?;
    Ok(db.population_len(p))
}

struct CsvTable {
    /// Position in the file of each expected column.
    positions: Vec<usize>,
    rows: Vec<csv::StringRecord>,
}

fn read_table(dir: &Path, table: &str, expected: &[&str]) -> Result<CsvTable> {
    let path = dir.join(format!("{table}.csv"));
    if !path.exists() {
        return Err(Error::MissingFile(path));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(&path)
        .map_err(|e| Error::csv(&path, e))?;
    let header = rdr.headers().map_err(|e| Error::csv(&path, e))?.clone();
    for h in header.iter() {
        if !expected.contains(&h) {
            return Err(Error::UnknownColumn {
                table: table.to_string(),
                column: h.to_string(),
            });
        }
    }
    let positions = expected
        .iter()
        .map(|&col| {
            header.iter().position(|h| h == col).ok_or_else(|| Error::MissingColumn {
                table: table.to_string(),
                column: col.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = rdr
        .records()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::csv(&path, e))?;
    Ok(CsvTable { positions, rows })
}

/// Reads `<table>.csv` for every entity and relationship table of `schema`
/// from `dir`.
pub fn load_database(schema: &Schema, dir: impl AsRef<Path>) -> Result<DatabaseInstance> {
    let dir = dir.as_ref();
    let mut raw = RawTables::default();
    for pop in &schema.populations {
        let mut cols = vec![pop.key.as_str()];
        cols.extend(pop.attributes.iter().map(|a| a.name.as_str()));
        let t = read_table(dir, &pop.table, &cols)?;
        raw.entities.push(
            t.rows
                .iter()
                .map(|r| {
                    let key = r[t.positions[0]].to_string();
                    let vals = t.positions[1..].iter().map(|&p| r[p].to_string()).collect();
                    (key, vals)
                })
                .collect(),
        );
    }
    for rel in &schema.relationships {
        let mut cols: Vec<&str> = rel.args.iter().map(|&v| schema.variables[v].name.as_str()).collect();
        cols.extend(rel.attributes.iter().map(|a| a.name.as_str()));
        let t = read_table(dir, &rel.table, &cols)?;
        raw.relationships.push(
            t.rows
                .iter()
                .map(|r| {
                    let a = r[t.positions[0]].to_string();
                    let b = r[t.positions[1]].to_string();
                    let vals = t.positions[2..].iter().map(|&p| r[p].to_string()).collect();
                    (a, b, vals)
                })
                .collect(),
        );
    }
    DatabaseInstance::from_rows(schema, raw)
}
