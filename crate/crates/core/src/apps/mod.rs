//! Consumers of finished tables: association rules, log-likelihood scoring,
//! and a mutual-information feature ranker. All of them read counts only.

pub mod rank;
pub mod rules;
pub mod score;

pub use rank::rank_features;
pub use rules::{mine_rules, mine_rules_with, write_rules_csv, AssociationRule, Item};
pub use score::{parse_structure, score_loglikelihood, score_terms, Structure};
