//! Relationship chains and the lattice they form under set inclusion.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::schema::Schema;

/// Sorted relationship indices; identifies a chain independently of order.
pub type ChainKey = Vec<usize>;

/// A connected set of relationship variables, stored in canonical order: the
/// first element is the lexicographically smallest name, and each following
/// element is the smallest-named remaining relationship that shares a
/// first-order variable with the prefix. Every prefix is therefore itself a
/// chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationshipChain {
    rels: Vec<usize>,
}

impl RelationshipChain {
    /// Builds the canonical chain over `set`; `None` if the set is empty or
    /// not connected.
    pub fn from_set(schema: &Schema, set: &[usize]) -> Option<Self> {
        let mut remaining: Vec<usize> = set.to_vec();
        remaining.sort_unstable();
        remaining.dedup();
        if remaining.is_empty() {
            return None;
        }
        remaining.sort_by(|&a, &b| schema.relationships[a].name.cmp(&schema.relationships[b].name));
        let mut rels = vec![remaining.remove(0)];
        while !remaining.is_empty() {
            let pos = remaining
                .iter()
                .position(|&r| rels.iter().any(|&p| schema.shares_variable(p, r)))?;
            rels.push(remaining.remove(pos));
        }
        Some(RelationshipChain { rels })
    }

    /// Keeps the given order; `None` unless every prefix is connected and no
    /// relationship repeats. The table it yields has the same rows as the
    /// canonical chain over the same set.
    pub fn from_order(schema: &Schema, order: &[usize]) -> Option<Self> {
        if order.is_empty() {
            return None;
        }
        for (k, &r) in order.iter().enumerate() {
            if r >= schema.relationships.len() || order[..k].contains(&r) {
                return None;
            }
            if k > 0 && !order[..k].iter().any(|&p| schema.shares_variable(p, r)) {
                return None;
            }
        }
        Some(RelationshipChain { rels: order.to_vec() })
    }

    pub fn rels(&self) -> &[usize] {
        &self.rels
    }

    pub fn len(&self) -> usize {
        self.rels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rels.is_empty()
    }

    pub fn key(&self) -> ChainKey {
        let mut k = self.rels.clone();
        k.sort_unstable();
        k
    }

    /// First-order variables in order of first appearance.
    pub fn variables(&self, schema: &Schema) -> Vec<usize> {
        variables_of(schema, &self.rels)
    }

    pub fn relationship_vars(&self, schema: &Schema) -> Vec<String> {
        self.rels.iter().map(|&r| schema.relationship_var(r)).collect()
    }

    /// `1Atts(chain)`.
    pub fn one_atts(&self, schema: &Schema) -> Vec<String> {
        self.variables(schema)
            .into_iter()
            .flat_map(|v| schema.one_atts(v))
            .collect()
    }

    /// `2Atts(chain)`.
    pub fn two_atts(&self, schema: &Schema) -> Vec<String> {
        self.rels.iter().flat_map(|&r| schema.two_atts(r)).collect()
    }

    /// Canonical column layout of the full table: relationship variables,
    /// then entity attributes, then relationship attributes.
    pub fn columns(&self, schema: &Schema) -> Vec<String> {
        let mut cols = self.relationship_vars(schema);
        cols.extend(self.one_atts(schema));
        cols.extend(self.two_atts(schema));
        cols
    }

    /// `[RA,Reg]`.
    pub fn label(&self, schema: &Schema) -> String {
        let names: Vec<&str> = self
            .rels
            .iter()
            .map(|&r| schema.relationships[r].name.as_str())
            .collect();
        format!("[{}]", names.join(","))
    }

    /// File-name friendly form of the label.
    pub fn file_stem(&self, schema: &Schema) -> String {
        let names: Vec<&str> = self
            .rels
            .iter()
            .map(|&r| schema.relationships[r].name.as_str())
            .collect();
        format!("chain_{}", names.join("__"))
    }
}

pub(crate) fn variables_of(schema: &Schema, rels: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for &r in rels {
        for &v in &schema.relationships[r].args {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// Splits a relationship set into connected components (each sorted).
pub fn components(schema: &Schema, set: &[usize]) -> Vec<Vec<usize>> {
    let mut left: Vec<usize> = set.to_vec();
    left.sort_unstable();
    let mut comps = Vec::new();
    while let Some(seed) = left.first().copied() {
        let mut comp = vec![seed];
        left.retain(|&r| r != seed);
        let mut grew = true;
        while grew {
            grew = false;
            let mut i = 0;
            while i < left.len() {
                if comp.iter().any(|&c| schema.shares_variable(c, left[i])) {
                    comp.push(left.remove(i));
                    grew = true;
                } else {
                    i += 1;
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Level-wise lattice of relationship chains. Level 0 holds the entity nodes
/// (first-order variables); level `l` holds the chains of length `l`.
#[derive(Clone, Debug)]
pub struct ChainLattice {
    pub entity_nodes: Vec<usize>,
    levels: Vec<Vec<RelationshipChain>>,
    /// `links[l-1][j]`: indices into level `l-1` of the connected sub-chains
    /// of `levels[l-1][j]` (empty at level 1).
    links: Vec<Vec<Vec<usize>>>,
    index: HashMap<ChainKey, (usize, usize)>,
}

impl ChainLattice {
    /// Level `l` (1-based); empty beyond the top.
    pub fn level(&self, l: usize) -> &[RelationshipChain] {
        if l == 0 || l > self.levels.len() {
            &[]
        } else {
            &self.levels[l - 1]
        }
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn chains(&self) -> impl Iterator<Item = &RelationshipChain> {
        self.levels.iter().flatten()
    }

    pub fn num_chains(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Number of tables the dynamic program produces: entity nodes plus chains.
    pub fn num_targets(&self) -> usize {
        self.entity_nodes.len() + self.num_chains()
    }

    pub fn get(&self, key: &[usize]) -> Option<&RelationshipChain> {
        self.index.get(key).map(|&(l, j)| &self.levels[l][j])
    }

    pub fn contains(&self, key: &[usize]) -> bool {
        self.index.contains_key(key)
    }

    /// Connected sub-chains one level down.
    pub fn subchains(&self, chain: &RelationshipChain) -> Vec<&RelationshipChain> {
        match self.index.get(&chain.key()) {
            Some(&(l, j)) if l > 0 => self.links[l][j]
                .iter()
                .map(|&i| &self.levels[l - 1][i])
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Chains not contained in any longer chain of the lattice.
    pub fn maximal_chains(&self) -> Vec<&RelationshipChain> {
        self.chains()
            .filter(|c| {
                let k = c.key();
                !self.level(c.len() + 1).iter().any(|up| {
                    let uk = up.key();
                    k.iter().all(|r| uk.contains(r))
                })
            })
            .collect()
    }
}

pub fn enumerate_chain_lattice(schema: &Schema, max_length: usize) -> Result<ChainLattice> {
    if max_length == 0 {
        return Err(Error::InvalidArgument("max_length must be at least 1".into()));
    }
    let m = schema.m();
    let top = max_length.min(m);
    let mut level_sets: Vec<BTreeSet<ChainKey>> = Vec::new();
    if top >= 1 {
        level_sets.push((0..m).map(|r| vec![r]).collect());
    }
    for l in 2..=top {
        let mut next = BTreeSet::new();
        for key in &level_sets[l - 2] {
            for r in 0..m {
                if key.contains(&r) || !key.iter().any(|&k| schema.shares_variable(k, r)) {
                    continue;
                }
                let mut k = key.clone();
                k.push(r);
                k.sort_unstable();
                next.insert(k);
            }
        }
        if next.is_empty() {
            break;
        }
        level_sets.push(next);
    }

    let mut levels: Vec<Vec<RelationshipChain>> = Vec::new();
    let mut index = HashMap::new();
    for (l, set) in level_sets.iter().enumerate() {
        let mut chains: Vec<RelationshipChain> = set
            .iter()
            .map(|k| RelationshipChain::from_set(schema, k).expect("enumerated sets are connected"))
            .collect();
        chains.sort_by_key(|c| c.label(schema));
        for (j, c) in chains.iter().enumerate() {
            index.insert(c.key(), (l, j));
        }
        levels.push(chains);
    }

    let mut links = Vec::with_capacity(levels.len());
    for (l, chains) in levels.iter().enumerate() {
        let mut lv = Vec::with_capacity(chains.len());
        for c in chains {
            let mut subs = Vec::new();
            if l > 0 {
                let key = c.key();
                for drop in &key {
                    let sub: ChainKey = key.iter().copied().filter(|r| r != drop).collect();
                    if let Some(&(sl, sj)) = index.get(&sub) {
                        debug_assert_eq!(sl, l - 1);
                        subs.push(sj);
                    }
                }
                subs.sort_unstable();
            }
            lv.push(subs);
        }
        links.push(lv);
    }

    Ok(ChainLattice {
        entity_nodes: (0..schema.variables.len()).collect(),
        levels,
        links,
        index,
    })
}
