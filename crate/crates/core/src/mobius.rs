//! Extension of positive-only chain tables to full tables covering both truth
//! values of every relationship, without touching the stored tuples.
//!
//! For a chain `R1..Rl` the positive table is pivoted on each relationship in
//! turn. Pivoting on `Ri` needs the table with `Ri` unspecified and `Ri+1..Rl`
//! true; that is obtained from the already computed table of the chain without
//! `Ri`, conditioned on the later relationships, times the entity table of any
//! first-order variable only `Ri` mentions.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ct::{self, Condition, ContingencyTable};
use crate::error::{Error, Result};
use crate::ingest::DatabaseInstance;
use crate::lattice::{components, variables_of, ChainKey, ChainLattice, RelationshipChain};
use crate::positive::{entity_ct, positive_chain_ct};
use crate::schema::Schema;
use crate::value::Value;

/// Operations performed, by kind. `extend` only annotates rows with constant
/// columns and is tallied but not counted as a table operation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTally {
    pub select: u64,
    pub project: u64,
    pub condition: u64,
    pub cross: u64,
    pub add: u64,
    pub subtract: u64,
    pub union: u64,
    pub extend: u64,
}

impl OpTally {
    /// Contingency-table operations: everything except `extend`.
    pub fn table_ops(&self) -> u64 {
        self.select + self.project + self.condition + self.cross + self.add + self.subtract + self.union
    }

    pub fn merge(&mut self, other: &OpTally) {
        self.select += other.select;
        self.project += other.project;
        self.condition += other.condition;
        self.cross += other.cross;
        self.add += other.add;
        self.subtract += other.subtract;
        self.union += other.union;
        self.extend += other.extend;
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MjConfig {
    /// Re-check the pivot identities (positive + negative = unspecified, and
    /// the subtraction result) and the `n/a` rule after every step.
    pub verify_identities: bool,
    /// Worker threads for chains within one lattice level.
    pub jobs: usize,
}

impl Default for MjConfig {
    fn default() -> Self {
        MjConfig {
            verify_identities: cfg!(debug_assertions),
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub chain: String,
    pub length: usize,
    pub ops: OpTally,
    pub table_ops: u64,
    pub rows: u64,
    /// Rows with at least one false relationship.
    pub negative_rows: u64,
    /// Rows per relationship-value assignment, when every assignment has the
    /// same number of rows.
    pub d: Option<u64>,
}

/// Operation and statistics counts of one run. Depends only on the schema,
/// the lattice, and the tables; never on timing or on how tuples were read.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub m: usize,
    pub chains: Vec<ChainReport>,
    pub total_table_ops: u64,
    /// Σ chain lengths, i.e. the number of pivots.
    pub pivots: u64,
    /// Worst-case bound `6·m·2^(m-1)`.
    pub ops_bound: u128,
    pub total_rows: u64,
    /// Rows involving at least one false relationship, over all chain tables.
    pub r: u64,
}

/// Wall times and raw tuple reads, per phase.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseStats {
    pub positive_secs: f64,
    pub negative_secs: f64,
    pub positive_tuple_accesses: u64,
    pub negative_tuple_accesses: u64,
}

pub struct MjOutput {
    /// Entity tables keyed by first-order variable index.
    pub entity_tables: BTreeMap<usize, ContingencyTable>,
    /// Full tables, in lattice order.
    pub chain_tables: Vec<(RelationshipChain, ContingencyTable)>,
    /// Positive-only tables (`ct(Atts | chain = T)`), aligned with `chain_tables`.
    pub positive_tables: Vec<ContingencyTable>,
    pub report: ComplexityReport,
    pub phases: PhaseStats,
}

impl MjOutput {
    pub fn table(&self, key: &[usize]) -> Option<&ContingencyTable> {
        self.chain_tables
            .iter()
            .find(|(c, _)| c.key() == key)
            .map(|(_, t)| t)
    }
}

/// Worst-case table-operation count `6·m·2^(m-1)`.
pub fn count_ops_bound(m: usize) -> u128 {
    if m == 0 {
        0
    } else {
        6 * m as u128 * (1u128 << (m - 1))
    }
}

/// Tables available to the dynamic program.
#[derive(Default)]
pub struct TableStore {
    pub entities: BTreeMap<usize, ContingencyTable>,
    pub chains: HashMap<ChainKey, ContingencyTable>,
}

impl TableStore {
    fn chain(&self, schema: &Schema, key: &[usize]) -> Result<&ContingencyTable> {
        self.chains.get(key).ok_or_else(|| {
            Error::MissingLowerTable(key.iter().map(|&r| schema.relationships[r].name.clone()).collect())
        })
    }

    fn entity(&self, schema: &Schema, var: usize) -> Result<&ContingencyTable> {
        self.entities
            .get(&var)
            .ok_or_else(|| Error::MissingLowerTable(vec![schema.variables[var].name.clone()]))
    }
}

struct Ops<'a> {
    tally: &'a mut OpTally,
}

impl Ops<'_> {
    fn condition(&mut self, t: &ContingencyTable, phi: &Condition) -> Result<ContingencyTable> {
        self.tally.condition += 1;
        ct::condition(t, phi)
    }
    fn cross(&mut self, a: &ContingencyTable, b: &ContingencyTable) -> Result<ContingencyTable> {
        self.tally.cross += 1;
        ct::cross_product(a, b)
    }
    fn project(&mut self, t: &ContingencyTable, vars: &[String]) -> Result<ContingencyTable> {
        self.tally.project += 1;
        ct::project(t, vars)
    }
    fn subtract(&mut self, a: &ContingencyTable, b: &ContingencyTable) -> Result<ContingencyTable> {
        self.tally.subtract += 1;
        ct::subtract(a, b)
    }
    fn extend(&mut self, t: &ContingencyTable, cols: &[(String, Value)]) -> Result<ContingencyTable> {
        self.tally.extend += 1;
        ct::extend_with_constants(t, cols)
    }
    fn union(&mut self, a: &ContingencyTable, b: &ContingencyTable) -> Result<ContingencyTable> {
        self.tally.union += 1;
        ct::union_disjoint(a, b)
    }
}

/// Pivot on relationship `rel`.
///
/// `ct_t` is the table over `Vars ∪ 2Atts(rel)` with `rel` true; `ct_star` is
/// the table over `Vars` with `rel` unspecified (both under the same fixed
/// condition on other relationships). Returns the table over
/// `Vars ∪ 2Atts(rel) ∪ {rel}`.
pub fn pivot(
    schema: &Schema,
    ct_t: &ContingencyTable,
    ct_star: &ContingencyTable,
    rel: usize,
) -> Result<ContingencyTable> {
    let mut tally = OpTally::default();
    pivot_counted(schema, ct_t, ct_star, rel, &mut tally, true)
}

fn pivot_counted(
    schema: &Schema,
    ct_t: &ContingencyTable,
    ct_star: &ContingencyTable,
    rel: usize,
    tally: &mut OpTally,
    verify: bool,
) -> Result<ContingencyTable> {
    let rel_var = schema.relationship_var(rel);
    let two = schema.two_atts(rel);
    let vars: Vec<String> = ct_star.columns().to_vec();
    if let Some(bad) = vars.iter().find(|c| **c == rel_var || two.contains(c)) {
        return Err(Error::InvalidArgument(format!(
            "pivot on {rel_var}: unspecified table already has column `{bad}`"
        )));
    }
    let mut expected: Vec<&String> = vars.iter().chain(two.iter()).collect();
    let mut got: Vec<&String> = ct_t.columns().iter().collect();
    expected.sort();
    got.sort();
    if expected != got {
        return Err(Error::ColumnMismatch {
            left: ct_t.columns().to_vec(),
            right: expected.into_iter().cloned().collect(),
        });
    }

    let mut ops = Ops { tally };
    let positive_marginal;
    let positive_vars = if two.is_empty() {
        ct_t
    } else {
        positive_marginal = ops.project(ct_t, &vars)?;
        &positive_marginal
    };
    let ct_f = ops.subtract(ct_star, positive_vars)?;
    let mut f_cols = vec![(rel_var.clone(), Value::f())];
    f_cols.extend(two.iter().map(|a| (a.clone(), Value::na())));
    let f_plus = ops.extend(&ct_f, &f_cols)?;
    let t_plus = ops.extend(ct_t, &[(rel_var.clone(), Value::t())])?;
    let out = ops.union(&f_plus, &t_plus)?;

    if verify {
        let negatives = ct::project(&ct::condition(&out, &Condition::new().eq(rel_var.as_str(), Value::f()))?, &vars)?;
        if negatives != ct_f {
            return Err(Error::IdentityViolation(format!(
                "pivot on {rel_var}: negative part differs from unspecified minus positive"
            )));
        }
        let mut drop_cond = Condition::new().any(rel_var.as_str());
        for a in &two {
            drop_cond = drop_cond.any(a.as_str());
        }
        if &ct::condition(&out, &drop_cond)? != ct_star {
            return Err(Error::IdentityViolation(format!(
                "pivot on {rel_var}: positive + negative does not recover the unspecified table"
            )));
        }
    }
    Ok(out)
}

/// Table for the chain with its `i`-th relationship (0-based) unspecified and
/// every later relationship true; earlier relationships stay as columns.
///
/// Built from the full tables of the connected components of
/// `chain ∖ {R_i}`, each conditioned on its later relationships being true,
/// crossed with the entity table of every first-order variable only `R_i`
/// mentions. For `i = 0` on a single relationship this is `ct(X) × ct(Y)`.
pub fn build_ct_star(
    schema: &Schema,
    chain: &RelationshipChain,
    i: usize,
    store: &TableStore,
) -> Result<ContingencyTable> {
    let mut tally = OpTally::default();
    build_ct_star_counted(schema, chain, i, store, &mut tally)
}

fn build_ct_star_counted(
    schema: &Schema,
    chain: &RelationshipChain,
    i: usize,
    store: &TableStore,
    tally: &mut OpTally,
) -> Result<ContingencyTable> {
    let rels = chain.rels();
    if i >= rels.len() {
        return Err(Error::InvalidArgument(format!(
            "pivot index {i} out of range for chain of length {}",
            rels.len()
        )));
    }
    let pivot_rel = rels[i];
    let later = &rels[i + 1..];
    let rest: Vec<usize> = rels.iter().copied().filter(|&r| r != pivot_rel).collect();
    let rest_vars = variables_of(schema, &rest);

    let mut ops = Ops { tally };
    let mut factors: Vec<ContingencyTable> = Vec::new();
    for comp in components(schema, &rest) {
        let full = store.chain(schema, &comp)?;
        let mut phi = Condition::new();
        for &r in later.iter().filter(|r| comp.contains(r)) {
            phi = phi.eq(schema.relationship_var(r), Value::t());
        }
        if phi.is_empty() {
            factors.push(full.clone());
        } else {
            factors.push(ops.condition(full, &phi)?);
        }
    }
    for &v in &schema.relationships[pivot_rel].args {
        if !rest_vars.contains(&v) {
            factors.push(store.entity(schema, v)?.clone());
        }
    }

    let mut iter = factors.into_iter();
    let mut acc = iter.next().expect("a relationship has two first-order variables");
    for f in iter {
        acc = ops.cross(&acc, &f)?;
    }
    Ok(acc.with_note(format!(
        "ct* for {} pivot {}",
        chain.label(schema),
        schema.relationships[pivot_rel].name
    )))
}

/// Checks the value-level invariants of a chain table: every value lies in
/// its variable's domain, and a relationship attribute is `n/a` exactly when
/// its relationship is false.
pub fn validate_table(schema: &Schema, table: &ContingencyTable) -> Result<()> {
    let cols = table.columns();
    let mut domains = Vec::with_capacity(cols.len());
    for c in cols {
        let rv = schema
            .random_variable(c)
            .ok_or_else(|| Error::UnknownVariable(c.clone()))?;
        domains.push(&rv.domain);
    }
    let mut na_pairs = Vec::new();
    for (ri, _) in schema.relationships.iter().enumerate() {
        if let Some(rc) = table.column_index(&schema.relationship_var(ri)) {
            for a in schema.two_atts(ri) {
                if let Some(ac) = table.column_index(&a) {
                    na_pairs.push((rc, ac));
                }
            }
        }
    }
    for (row, _) in table.rows() {
        for (v, dom) in row.iter().zip(&domains) {
            if !dom.contains(v) {
                return Err(Error::IdentityViolation(format!("value {v} outside its domain")));
            }
        }
        for &(rc, ac) in &na_pairs {
            if row[ac].is_na() != (row[rc].as_str() == crate::value::FALSE) {
                return Err(Error::IdentityViolation(format!(
                    "`{}` = {} while `{}` = {}",
                    cols[ac], row[ac], cols[rc], row[rc]
                )));
            }
        }
    }
    Ok(())
}

fn chain_report(schema: &Schema, chain: &RelationshipChain, table: &ContingencyTable, ops: OpTally) -> ChainReport {
    let rel_cols: Vec<usize> = chain
        .relationship_vars(schema)
        .iter()
        .map(|c| table.column_index(c).expect("full tables carry their relationship columns"))
        .collect();
    let mut per_assignment: HashMap<Vec<bool>, u64> = HashMap::new();
    let mut negative_rows = 0;
    for (row, _) in table.rows() {
        let assignment: Vec<bool> = rel_cols.iter().map(|&c| row[c].as_str() == crate::value::TRUE).collect();
        if assignment.iter().any(|t| !t) {
            negative_rows += 1;
        }
        *per_assignment.entry(assignment).or_insert(0) += 1;
    }
    let expected_groups = 1usize << chain.len();
    let mut sizes = per_assignment.values();
    let d = match sizes.next() {
        Some(&first) if per_assignment.len() == expected_groups && sizes.all(|&s| s == first) => Some(first),
        _ => None,
    };
    ChainReport {
        chain: chain.label(schema),
        length: chain.len(),
        table_ops: ops.table_ops(),
        ops,
        rows: table.len() as u64,
        negative_rows,
        d,
    }
}

/// Runs the pivots of one chain, starting from its positive table.
fn extend_chain(
    schema: &Schema,
    chain: &RelationshipChain,
    positive: &ContingencyTable,
    store: &TableStore,
    config: &MjConfig,
) -> Result<(ContingencyTable, OpTally)> {
    let mut tally = OpTally::default();
    let mut current = positive.clone();
    for (i, &rel) in chain.rels().iter().enumerate() {
        let star = build_ct_star_counted(schema, chain, i, store, &mut tally)?;
        current = pivot_counted(schema, &current, &star, rel, &mut tally, config.verify_identities)?;
    }
    let full = current
        .reorder(&chain.columns(schema))?
        .with_note(format!("ct{}", chain.label(schema)));
    if config.verify_identities {
        validate_table(schema, &full)?;
    }
    Ok((full, tally))
}

/// A dedicated pool for `jobs > 1`; single-job runs stay on the calling
/// thread.
fn thread_pool(jobs: usize) -> Result<Option<rayon::ThreadPool>> {
    if jobs <= 1 {
        return Ok(None);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map(Some)
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

/// Negative-extension phase: from entity tables and positive chain tables to
/// full chain tables. Reads no stored tuples.
pub fn extend_negative(
    schema: &Schema,
    lattice: &ChainLattice,
    entity_tables: &BTreeMap<usize, ContingencyTable>,
    positive: &HashMap<ChainKey, ContingencyTable>,
    config: &MjConfig,
) -> Result<(Vec<(RelationshipChain, ContingencyTable)>, ComplexityReport)> {
    let pool = thread_pool(config.jobs)?;
    let mut store = TableStore {
        entities: entity_tables.clone(),
        chains: HashMap::new(),
    };
    let mut out = Vec::with_capacity(lattice.num_chains());
    let mut chain_reports = Vec::with_capacity(lattice.num_chains());
    for l in 1..=lattice.height() {
        let level = lattice.level(l);
        let store_ref = &store;
        let run = |chain: &RelationshipChain| {
            let pos = positive
                .get(&chain.key())
                .ok_or_else(|| Error::MissingLowerTable(vec![chain.label(schema)]))?;
            extend_chain(schema, chain, pos, store_ref, config)
        };
        let results: Vec<(ContingencyTable, OpTally)> = match &pool {
            Some(pool) => pool.install(|| level.par_iter().map(run).collect::<Result<Vec<_>>>())?,
            None => level.iter().map(run).collect::<Result<Vec<_>>>()?,
        };
        for (chain, (table, tally)) in level.iter().zip(results) {
            chain_reports.push(chain_report(schema, chain, &table, tally));
            store.chains.insert(chain.key(), table.clone());
            out.push((chain.clone(), table));
        }
    }
    let report = ComplexityReport {
        m: schema.m(),
        total_table_ops: chain_reports.iter().map(|c| c.table_ops).sum(),
        pivots: chain_reports.iter().map(|c| c.length as u64).sum(),
        ops_bound: count_ops_bound(schema.m()),
        total_rows: chain_reports.iter().map(|c| c.rows).sum(),
        r: chain_reports.iter().map(|c| c.negative_rows).sum(),
        chains: chain_reports,
    };
    Ok((out, report))
}

/// Full pipeline: entity tables and positive chain tables from the data, then
/// the negative extension over the lattice.
pub fn mobius_join(
    schema: &Schema,
    db: &DatabaseInstance,
    lattice: &ChainLattice,
    config: &MjConfig,
) -> Result<MjOutput> {
    let reads_before = db.tuple_accesses();
    let started = Instant::now();
    let entity_tables: BTreeMap<usize, ContingencyTable> = lattice
        .entity_nodes
        .iter()
        .map(|&v| (v, entity_ct(schema, db, v)))
        .collect();
    let chains: Vec<&RelationshipChain> = lattice.chains().collect();
    let pool = thread_pool(config.jobs)?;
    let positives: Vec<ContingencyTable> = match &pool {
        Some(pool) => pool.install(|| {
            chains
                .par_iter()
                .map(|c| positive_chain_ct(schema, db, c))
                .collect::<Result<Vec<_>>>()
        })?,
        None => chains
            .iter()
            .map(|c| positive_chain_ct(schema, db, c))
            .collect::<Result<Vec<_>>>()?,
    };
    let positive_secs = started.elapsed().as_secs_f64();
    let reads_mid = db.tuple_accesses();

    let positive_map: HashMap<ChainKey, ContingencyTable> = chains
        .iter()
        .zip(&positives)
        .map(|(c, t)| (c.key(), t.clone()))
        .collect();
    let started = Instant::now();
    let (chain_tables, report) = extend_negative(schema, lattice, &entity_tables, &positive_map, config)?;
    let negative_secs = started.elapsed().as_secs_f64();
    let reads_after = db.tuple_accesses();

    Ok(MjOutput {
        entity_tables,
        chain_tables,
        positive_tables: positives,
        report,
        phases: PhaseStats {
            positive_secs,
            negative_secs,
            positive_tuple_accesses: reads_mid - reads_before,
            negative_tuple_accesses: reads_after - reads_mid,
        },
    })
}

/// Positive-only table with every chain relationship as a constant `T`
/// column: the statistics available without negative relationships.
pub fn link_off_table(
    schema: &Schema,
    chain: &RelationshipChain,
    positive: &ContingencyTable,
) -> Result<ContingencyTable> {
    let cols: Vec<(String, Value)> = chain
        .relationship_vars(schema)
        .into_iter()
        .map(|r| (r, Value::t()))
        .collect();
    ct::extend_with_constants(positive, &cols)?
        .reorder(&chain.columns(schema))
        .map(|t| t.with_note(format!("ct{} positives only", chain.label(schema))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::fixtures::f1;
    use crate::lattice::enumerate_chain_lattice;

    fn f1_joint() -> ContingencyTable {
        ContingencyTable::from_str_rows(
            &[
                "RA(P,S)",
                "intelligence(S)",
                "ranking(S)",
                "popularity(P)",
                "teachingability(P)",
                "capability(P,S)",
                "salary(P,S)",
            ],
            &[
                (&["T", "hi", "1", "hi", "hi", "hi", "high"], 1),
                (&["F", "lo", "2", "hi", "hi", "n/a", "n/a"], 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn ops_bound() {
        assert_eq!(count_ops_bound(0), 0);
        assert_eq!(count_ops_bound(1), 6);
        assert_eq!(count_ops_bound(3), 72);
    }

    #[test]
    fn f1_pivot_reduced_columns() {
        let (s, _) = f1();
        let ra = s.relationship_index("RA").unwrap();
        let two_atts_only = |cols: &[&str], rows: &[(&[&str], u64)]| ContingencyTable::from_str_rows(cols, rows).unwrap();
        let ct_t = two_atts_only(
            &["intelligence(S)", "popularity(P)", "capability(P,S)", "salary(P,S)"],
            &[(&["hi", "hi", "hi", "high"], 1)],
        );
        let ct_star = two_atts_only(
            &["intelligence(S)", "popularity(P)"],
            &[(&["hi", "hi"], 1), (&["lo", "hi"], 1)],
        );
        let out = pivot(&s, &ct_t, &ct_star, ra).unwrap();
        let want = two_atts_only(
            &["RA(P,S)", "intelligence(S)", "popularity(P)", "capability(P,S)", "salary(P,S)"],
            &[(&["T", "hi", "hi", "hi", "high"], 1), (&["F", "lo", "hi", "n/a", "n/a"], 1)],
        );
        assert_eq!(out, want);
    }

    #[test]
    fn pivot_all_negative_and_all_positive() {
        let (s, _) = f1();
        let ra = s.relationship_index("RA").unwrap();
        let star = ContingencyTable::from_str_rows(&["intelligence(S)"], &[(&["hi"], 2), (&["lo"], 3)]).unwrap();
        let empty_t = ContingencyTable::new(["intelligence(S)", "capability(P,S)", "salary(P,S)"]).unwrap();
        let out = pivot(&s, &empty_t, &star, ra).unwrap();
        let want = ct::extend_with_constants(
            &star,
            &[
                ("RA(P,S)".into(), Value::f()),
                ("capability(P,S)".into(), Value::na()),
                ("salary(P,S)".into(), Value::na()),
            ],
        )
        .unwrap();
        assert_eq!(out, want);

        let full_t = ContingencyTable::from_str_rows(
            &["intelligence(S)", "capability(P,S)", "salary(P,S)"],
            &[(&["hi", "hi", "low"], 2), (&["lo", "lo", "low"], 3)],
        )
        .unwrap();
        let out = pivot(&s, &full_t, &star, ra).unwrap();
        assert_eq!(out, ct::extend_with_constant(&full_t, "RA(P,S)", "T").unwrap());
    }

    #[test]
    fn pivot_rejects_inconsistent_inputs() {
        let (s, _) = f1();
        let ra = s.relationship_index("RA").unwrap();
        let star = ContingencyTable::from_str_rows(&["intelligence(S)"], &[(&["hi"], 1)]).unwrap();
        let too_many = ContingencyTable::from_str_rows(
            &["intelligence(S)", "capability(P,S)", "salary(P,S)"],
            &[(&["hi", "hi", "low"], 2)],
        )
        .unwrap();
        assert!(matches!(pivot(&s, &too_many, &star, ra), Err(Error::SubtractionUndefined { .. })));
        let bad_star = ct::extend_with_constant(&star, "RA(P,S)", "T").unwrap();
        assert!(pivot(&s, &too_many, &bad_star, ra).is_err());
    }

    #[test]
    fn f1_full_run() {
        let (s, db) = f1();
        let lat = enumerate_chain_lattice(&s, 3).unwrap();
        let out = mobius_join(&s, &db, &lat, &MjConfig { verify_identities: true, jobs: 1 }).unwrap();
        assert_eq!(out.chain_tables.len(), 1);
        assert_eq!(out.chain_tables[0].1, f1_joint());
        assert_eq!(out.chain_tables[0].1.total(), 2);
        assert_eq!(out.phases.negative_tuple_accesses, 0);
        assert!(out.phases.positive_tuple_accesses > 0);
        let rep = &out.report;
        assert_eq!(rep.m, 1);
        assert_eq!(rep.r, 1);
        assert_eq!(rep.total_rows, 2);
        assert_eq!(rep.chains[0].d, Some(1));
        assert!(rep.total_table_ops <= count_ops_bound(1) as u64);
        validate_table(&s, &out.chain_tables[0].1).unwrap();
    }

    #[test]
    fn f1_link_off() {
        let (s, db) = f1();
        let lat = enumerate_chain_lattice(&s, 3).unwrap();
        let out = mobius_join(&s, &db, &lat, &MjConfig::default()).unwrap();
        let off = link_off_table(&s, &out.chain_tables[0].0, &out.positive_tables[0]).unwrap();
        assert_eq!(off.len(), 1);
        assert_eq!(off, ct::select(&f1_joint(), &Condition::new().eq("RA(P,S)", "T")).unwrap());
    }

    #[test]
    fn validate_catches_na_violation() {
        let (s, _) = f1();
        let bad = ContingencyTable::from_str_rows(
            &["RA(P,S)", "capability(P,S)"],
            &[(&["T", "n/a"], 1)],
        )
        .unwrap();
        assert!(validate_table(&s, &bad).is_err());
    }
}
