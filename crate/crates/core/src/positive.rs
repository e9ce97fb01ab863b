//! Counts with every relationship of a chain fixed to true, computed from the
//! stored tuples by hash join with eager aggregation.

use std::collections::HashMap;

use crate::ct::{ContingencyTable, Row};
use crate::error::Result;
use crate::ingest::DatabaseInstance;
use crate::lattice::RelationshipChain;
use crate::schema::Schema;
use crate::value::Value;

/// `ct(1Atts(X))`: entities of `var`'s population grouped by attribute values.
/// A population without attributes yields a zero-column table carrying its size.
pub fn entity_ct(schema: &Schema, db: &DatabaseInstance, var: usize) -> ContingencyTable {
    let pop = schema.variables[var].population;
    let mut rows: HashMap<Row, u64> = HashMap::new();
    for i in 0..db.population_len(pop) {
        *rows.entry(db.entity(pop, i).to_vec()).or_insert(0) += 1;
    }
    ContingencyTable::from_rows(schema.one_atts(var), rows)
        .expect("entity attribute names are unique")
        .with_note(format!("ct(1Atts({}))", schema.variables[var].name))
}

/// Partial join state: bindings of first-order variables still needed by a
/// later relationship, plus the attribute values collected so far.
type JoinState = HashMap<(Vec<usize>, Row), u64>;

/// `ct(1Atts(chain), 2Atts(chain) | chain = T)`.
///
/// Relationships are joined in chain order. As soon as a first-order variable
/// has no later relationship its binding is replaced by its entity attribute
/// values, so partial results are aggregated instead of materialized.
pub fn positive_chain_ct(
    schema: &Schema,
    db: &DatabaseInstance,
    chain: &RelationshipChain,
) -> Result<ContingencyTable> {
    let rels = chain.rels();
    let mut last_use: HashMap<usize, usize> = HashMap::new();
    for (k, &r) in rels.iter().enumerate() {
        for &v in &schema.relationships[r].args {
            last_use.insert(v, k);
        }
    }

    let mut open: Vec<usize> = Vec::new();
    let mut value_cols: Vec<String> = Vec::new();
    let mut state: JoinState = HashMap::new();
    state.insert((Vec::new(), Vec::new()), 1);

    for (k, &r) in rels.iter().enumerate() {
        let [va, vb] = schema.relationships[r].args;
        let pa = open.iter().position(|&v| v == va);
        let pb = open.iter().position(|&v| v == vb);
        let mut next_open = open.clone();
        if pa.is_none() {
            next_open.push(va);
        }
        if pb.is_none() {
            next_open.push(vb);
        }
        value_cols.extend(schema.two_atts(r));

        let mut next: JoinState = HashMap::new();
        let mut emit = |key: &[usize], vals: &Row, count: u64, fresh: &[usize], attrs: &[Value]| {
            let mut nk = key.to_vec();
            nk.extend_from_slice(fresh);
            let mut nv = vals.clone();
            nv.extend(attrs.iter().cloned());
            *next.entry((nk, nv)).or_insert(0) += count;
        };
        match (pa, pb) {
            (Some(ia), Some(ib)) => {
                for ((key, vals), &c) in &state {
                    if let Some(attrs) = db.lookup(r, key[ia], key[ib]) {
                        emit(key, vals, c, &[], attrs);
                    }
                }
            }
            (Some(i), None) | (None, Some(i)) => {
                let bound_first = pa.is_some();
                let mut index: HashMap<usize, Vec<(usize, &[Value])>> = HashMap::new();
                for t in 0..db.relationship_len(r) {
                    let ((a, b), attrs) = db.tuple(r, t);
                    let (probe, other) = if bound_first { (a, b) } else { (b, a) };
                    index.entry(probe).or_default().push((other, attrs));
                }
                for ((key, vals), &c) in &state {
                    if let Some(matches) = index.get(&key[i]) {
                        for &(other, attrs) in matches {
                            emit(key, vals, c, &[other], attrs);
                        }
                    }
                }
            }
            (None, None) => {
                for t in 0..db.relationship_len(r) {
                    let ((a, b), attrs) = db.tuple(r, t);
                    for ((key, vals), &c) in &state {
                        emit(key, vals, c, &[a, b], attrs);
                    }
                }
            }
        }

        // Close variables that no later relationship mentions.
        let closing: Vec<usize> = next_open
            .iter()
            .copied()
            .filter(|v| last_use[v] == k)
            .collect();
        if !closing.is_empty() {
            let keep: Vec<usize> = (0..next_open.len())
                .filter(|&i| !closing.contains(&next_open[i]))
                .collect();
            let close_pos: Vec<(usize, usize)> = closing
                .iter()
                .map(|v| (next_open.iter().position(|o| o == v).unwrap(), schema.variables[*v].population))
                .collect();
            for &v in &closing {
                value_cols.extend(schema.one_atts(v));
            }
            let mut closed: JoinState = HashMap::with_capacity(next.len());
            for ((key, mut vals), c) in next {
                for &(pos, pop) in &close_pos {
                    vals.extend(db.entity(pop, key[pos]).iter().cloned());
                }
                let nk: Vec<usize> = keep.iter().map(|&i| key[i]).collect();
                *closed.entry((nk, vals)).or_insert(0) += c;
            }
            next = closed;
            next_open = keep.iter().map(|&i| next_open[i]).collect();
        }
        state = next;
        open = next_open;
    }
    debug_assert!(open.is_empty());

    let table = ContingencyTable::from_rows(
        value_cols,
        state.into_iter().map(|((_, vals), c)| (vals, c)),
    )?;
    let mut layout = chain.one_atts(schema);
    layout.extend(chain.two_atts(schema));
    Ok(table
        .reorder(&layout)?
        .with_note(format!("ct(Atts{} | all T)", chain.label(schema))))
}
