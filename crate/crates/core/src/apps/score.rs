//! Frequency-weighted log-likelihood of a table under a parent structure.

use std::collections::BTreeMap;

use crate::ct::{project, ContingencyTable};
use crate::error::{Error, Result};

/// Node name to parent names. Nodes are the map's keys.
pub type Structure = BTreeMap<String, Vec<String>>;

/// Reads `{"child": ["parent", ...], ...}`.
pub fn parse_structure(json: &str) -> Result<Structure> {
    Ok(serde_json::from_str(json)?)
}

fn check_acyclic(structure: &Structure) -> Result<()> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit<'a>(node: &'a str, s: &'a Structure, marks: &mut BTreeMap<&'a str, Mark>) -> Result<()> {
        match marks.get(node) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Open) => return Err(Error::CyclicStructure(node.to_string())),
            None => {}
        }
        marks.insert(node, Mark::Open);
        for p in s.get(node).into_iter().flatten() {
            visit(p, s, marks)?;
        }
        marks.insert(node, Mark::Done);
        Ok(())
    }
    let mut marks = BTreeMap::new();
    for node in structure.keys() {
        visit(node, structure, &mut marks)?;
    }
    Ok(())
}

/// Per-node contribution `Σ freq(v, pa) · ln(count(v, pa) / count(pa))`,
/// natural log, frequencies relative to the table total.
pub fn score_terms(structure: &Structure, ct: &ContingencyTable) -> Result<BTreeMap<String, f64>> {
    if ct.is_empty() {
        return Err(Error::EmptyTable);
    }
    for (node, parents) in structure {
        for v in std::iter::once(node).chain(parents) {
            if !ct.has_column(v) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        if parents.contains(node) {
            return Err(Error::CyclicStructure(node.clone()));
        }
    }
    check_acyclic(structure)?;

    let total = ct.total() as f64;
    let mut terms = BTreeMap::new();
    for (node, parents) in structure {
        let mut family = parents.clone();
        family.push(node.clone());
        let joint = project(ct, &family)?;
        let marginal = project(ct, parents)?;
        let mut term = 0.0;
        for (row, c) in joint.rows() {
            let pa = marginal.count(&row[..parents.len()]);
            term += c as f64 / total * (c as f64 / pa as f64).ln();
        }
        terms.insert(node.clone(), term);
    }
    Ok(terms)
}

pub fn score_loglikelihood(structure: &Structure, ct: &ContingencyTable) -> Result<f64> {
    Ok(score_terms(structure, ct)?.values().sum())
}
