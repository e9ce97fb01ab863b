//! Reference counts by brute force: enumerate every instantiation of a
//! chain's first-order variables and look each relationship up. Exponential
//! in the number of variables; only for checking small instances.

use std::collections::HashMap;

use serde::Serialize;

use crate::ct::{ContingencyTable, Row};
use crate::error::{Error, Result};
use crate::ingest::DatabaseInstance;
use crate::lattice::{enumerate_chain_lattice, RelationshipChain};
use crate::mobius::{mobius_join, MjConfig};
use crate::schema::Schema;
use crate::value::Value;

pub const DEFAULT_CAP: u128 = 10_000_000;

/// Size of the cross product of the populations the chain ranges over.
pub fn instantiation_count(schema: &Schema, db: &DatabaseInstance, chain: &RelationshipChain) -> u128 {
    chain
        .variables(schema)
        .iter()
        .map(|&v| db.population_len(schema.variables[v].population) as u128)
        .product()
}

/// Full table of `chain` by exhaustive enumeration, in canonical column order.
pub fn oracle_ct(
    schema: &Schema,
    db: &DatabaseInstance,
    chain: &RelationshipChain,
    cap: u128,
) -> Result<ContingencyTable> {
    let size = instantiation_count(schema, db, chain);
    if size > cap {
        return Err(Error::OracleCapExceeded { size, cap });
    }
    let vars = chain.variables(schema);
    let sizes: Vec<usize> = vars
        .iter()
        .map(|&v| db.population_len(schema.variables[v].population))
        .collect();
    let slot = |v: usize| vars.iter().position(|&u| u == v).expect("chain variable");
    let rel_slots: Vec<(usize, usize, usize)> = chain
        .rels()
        .iter()
        .map(|&r| {
            let [a, b] = schema.relationships[r].args;
            (r, slot(a), slot(b))
        })
        .collect();

    let mut rows: HashMap<Row, u64> = HashMap::new();
    if size > 0 {
        let mut idx = vec![0usize; vars.len()];
        loop {
            let mut truth = Vec::new();
            let mut rel_atts = Vec::new();
            for &(r, a, b) in &rel_slots {
                match db.lookup(r, idx[a], idx[b]) {
                    Some(vals) => {
                        truth.push(Value::t());
                        rel_atts.extend(vals.iter().cloned());
                    }
                    None => {
                        truth.push(Value::f());
                        rel_atts.extend(schema.two_atts(r).iter().map(|_| Value::na()));
                    }
                }
            }
            let mut row = truth;
            for (k, &v) in vars.iter().enumerate() {
                row.extend(db.entity(schema.variables[v].population, idx[k]).iter().cloned());
            }
            row.extend(rel_atts);
            *rows.entry(row).or_insert(0) += 1;

            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < sizes[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    Ok(ContingencyTable::from_rows(chain.columns(schema), rows)?
        .with_note(format!("oracle ct{}", chain.label(schema))))
}

/// Entity table by direct enumeration.
pub fn oracle_entity_ct(schema: &Schema, db: &DatabaseInstance, var: usize) -> Result<ContingencyTable> {
    let pop = schema.variables[var].population;
    let rows = (0..db.population_len(pop)).map(|i| (db.entity(pop, i).to_vec(), 1u64));
    ContingencyTable::from_rows(schema.one_atts(var), rows)
}

/// Instantiations per stored row. An empty cross product stored as an empty
/// table has ratio 1.
pub fn compression_ratio(instantiations: u128, rows: usize) -> Result<f64> {
    match (instantiations, rows) {
        (0, 0) => Ok(1.0),
        (_, 0) => Err(Error::EmptyTable),
        (n, r) => Ok(n as f64 / r as f64),
    }
}

/// First row, in sorted order, whose count differs between two tables over
/// the same columns: `(row, expected, got)`.
pub fn first_difference(
    expected: &ContingencyTable,
    got: &ContingencyTable,
) -> Result<Option<(Vec<String>, u64, u64)>> {
    let got = got.reorder(expected.columns())?;
    let mut all: Vec<Row> = expected.rows().map(|(r, _)| r.clone()).collect();
    all.extend(got.rows().map(|(r, _)| r.clone()).filter(|r| expected.count(r) == 0));
    all.sort();
    Ok(all.into_iter().find_map(|r| {
        let (e, g) = (expected.count(&r), got.count(&r));
        (e != g).then(|| (r.iter().map(|v| v.to_string()).collect(), e, g))
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub table: String,
    pub columns: Vec<String>,
    pub row: Vec<String>,
    pub expected: u64,
    pub got: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOutcome {
    pub tables_checked: usize,
    pub mismatch: Option<Mismatch>,
}

/// Runs the full pipeline on every chain up to `max_length` and compares each
/// table with the brute-force one.
pub fn verify(schema: &Schema, db: &DatabaseInstance, max_length: usize, cap: u128) -> Result<VerifyOutcome> {
    let lattice = enumerate_chain_lattice(schema, max_length)?;
    for chain in lattice.chains() {
        let size = instantiation_count(schema, db, chain);
        if size > cap {
            return Err(Error::OracleCapExceeded { size, cap });
        }
    }
    let out = mobius_join(schema, db, &lattice, &MjConfig { verify_identities: true, jobs: 1 })?;
    let mut checked = 0;
    let entity_pairs = out.entity_tables.iter().map(|(&v, t)| {
        (format!("entity {}", schema.variables[v].name), oracle_entity_ct(schema, db, v), t)
    });
    let chain_pairs = out
        .chain_tables
        .iter()
        .map(|(c, t)| (c.label(schema), oracle_ct(schema, db, c, cap), t));
    for (name, expected, got) in entity_pairs.chain(chain_pairs) {
        let expected = expected?;
        checked += 1;
        if let Some((row, e, g)) = first_difference(&expected, got)? {
            return Ok(VerifyOutcome {
                tables_checked: checked,
                mismatch: Some(Mismatch {
                    table: name,
                    columns: expected.columns().to_vec(),
                    row,
                    expected: e,
                    got: g,
                }),
            });
        }
    }
    Ok(VerifyOutcome {
        tables_checked: checked,
        mismatch: None,
    })
}
