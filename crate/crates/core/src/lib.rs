//! Multi-relational sufficient statistics.
//!
//! Computes contingency tables over entity attributes, relationship
//! attributes, and relationship indicator variables, including rows in which
//! relationships are *absent*. Positive-only counts come from joins over the
//! stored tuples; everything involving a false relationship is derived from
//! those with table algebra over a lattice of relationship chains, so the
//! cross product of entity sets is never enumerated.
//!
//! ```no_run
//! use mjoin_core::{enumerate_chain_lattice, load_database, load_schema, mobius_join, MjConfig};
//!
//! let schema = load_schema("schema.json")?;
//! let db = load_database(&schema, "data/")?;
//! let lattice = enumerate_chain_lattice(&schema, 3)?;
//! let out = mobius_join(&schema, &db, &lattice, &MjConfig::default())?;
//! for (chain, table) in &out.chain_tables {
//!     println!("{} -> {} rows", chain.label(&schema), table.len());
//! }
//! # Ok::<(), mjoin_core::Error>(())
//! ```

pub mod apps;
pub mod bench;
pub mod ct;
pub mod error;
pub mod ingest;
pub mod lattice;
pub mod mobius;
pub mod oracle;
pub mod positive;
pub mod schema;
pub mod synth;
pub mod value;

pub use ct::{CondValue, Condition, ContingencyTable};
pub use error::{Error, Result};
pub use ingest::{load_database, population_size, DatabaseInstance, RawTables};
pub use lattice::{enumerate_chain_lattice, ChainLattice, RelationshipChain};
pub use mobius::{
    build_ct_star, count_ops_bound, link_off_table, mobius_join, pivot, ComplexityReport, MjConfig,
    MjOutput, OpTally,
};
pub use oracle::{compression_ratio, oracle_ct, oracle_entity_ct, verify};
pub use positive::{entity_ct, positive_chain_ct};
pub use schema::{derive_random_variables, load_schema, RandomVariable, Schema, VariableKind};
pub use value::Value;
