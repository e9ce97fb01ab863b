//! Lift-ranked association rules over value conjunctions.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::ct::ContingencyTable;
use crate::error::{Error, Result};
use crate::value::Value;

pub const DEFAULT_MAX_LEN: usize = 3;

/// `variable = value`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Item {
    pub variable: String,
    pub value: Value,
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.variable, self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssociationRule {
    /// Sorted by variable name.
    pub body: Vec<Item>,
    pub head: Item,
    pub support: f64,
    pub confidence: f64,
    pub lift: f64,
    /// Raw counts of body∪head, body, and head, over `total`.
    pub count: u64,
    pub body_count: u64,
    pub head_count: u64,
    pub total: u128,
}

impl AssociationRule {
    pub fn body_string(&self) -> String {
        self.body.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" & ")
    }

    pub fn mentions(&self, variable: &str) -> bool {
        self.head.variable == variable || self.body.iter().any(|i| i.variable == variable)
    }

    /// Exact lift comparison: `count·total / (body·head)`; the total is shared.
    fn cmp_lift(&self, other: &Self) -> Ordering {
        let lhs = (self.count as u128)
            .checked_mul(other.body_count as u128)
            .and_then(|x| x.checked_mul(other.head_count as u128));
        let rhs = (other.count as u128)
            .checked_mul(self.body_count as u128)
            .and_then(|x| x.checked_mul(self.head_count as u128));
        match (lhs, rhs) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => self.lift.total_cmp(&other.lift),
        }
    }

    fn sort_key(&self) -> (String, String) {
        (self.body_string(), self.head.to_string())
    }
}

impl fmt::Display for AssociationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} (support {:.6}, confidence {:.6}, lift {:.6})",
            self.body_string(),
            self.head,
            self.support,
            self.confidence,
            self.lift
        )
    }
}

type Itemset = Vec<(usize, Value)>;

/// Top `top_k` rules by lift with conjunctions of at most three items.
pub fn mine_rules(ct: &ContingencyTable, top_k: usize, min_support: f64) -> Result<Vec<AssociationRule>> {
    mine_rules_with(ct, top_k, min_support, DEFAULT_MAX_LEN)
}

/// Levelwise search: an itemset of size `k` is counted only if all of its
/// `k-1` subsets met `min_support`. Columns holding a single value carry no
/// information and never enter an itemset. Rules have a non-empty body and
/// a single-item head; ties in lift are ordered by body, then head, as text.
pub fn mine_rules_with(
    ct: &ContingencyTable,
    top_k: usize,
    min_support: f64,
    max_len: usize,
) -> Result<Vec<AssociationRule>> {
    if ct.is_empty() {
        return Err(Error::EmptyTable);
    }
    if !(min_support > 0.0 && min_support <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "min_support must lie in (0, 1], got {min_support}"
        )));
    }
    let total = ct.total();
    let min_count = (min_support * total as f64).ceil().max(1.0) as u128;

    let cols = ct.columns();
    let varying: Vec<usize> = (0..cols.len())
        .filter(|&c| {
            let mut values = ct.rows().map(|(r, _)| &r[c]);
            let first = values.next();
            values.any(|v| Some(v) != first)
        })
        .collect();

    let mut frequent: HashMap<Itemset, u64> = HashMap::new();
    let mut previous: HashSet<Itemset> = HashSet::new();
    for k in 1..=max_len.min(varying.len()) {
        let mut counts: HashMap<Itemset, u64> = HashMap::new();
        for (row, c) in ct.rows() {
            for_each_subset(&varying, k, &mut |subset| {
                let items: Itemset = subset.iter().map(|&i| (i, row[i].clone())).collect();
                if k == 1 || all_subsets_frequent(&items, &previous) {
                    *counts.entry(items).or_insert(0) += c;
                }
            });
        }
        counts.retain(|_, c| *c as u128 >= min_count);
        if counts.is_empty() {
            break;
        }
        previous = counts.keys().cloned().collect();
        frequent.extend(counts);
    }

    let item = |(i, v): &(usize, Value)| Item {
        variable: cols[*i].clone(),
        value: v.clone(),
    };
    let mut rules = Vec::new();
    for (set, &count) in frequent.iter().filter(|(s, _)| s.len() >= 2) {
        for h in 0..set.len() {
            let body: Itemset = set.iter().enumerate().filter(|(j, _)| *j != h).map(|(_, x)| x.clone()).collect();
            let body_count = frequent[&body];
            let head_count = frequent[&vec![set[h].clone()]];
            let support = count as f64 / total as f64;
            let confidence = count as f64 / body_count as f64;
            let lift = confidence / (head_count as f64 / total as f64);
            let mut body_items: Vec<Item> = body.iter().map(item).collect();
            body_items.sort();
            rules.push(AssociationRule {
                body: body_items,
                head: item(&set[h]),
                support,
                confidence,
                lift,
                count,
                body_count,
                head_count,
                total,
            });
        }
    }
    rules.sort_by(|a, b| b.cmp_lift(a).then_with(|| a.sort_key().cmp(&b.sort_key())));
    rules.truncate(top_k);
    Ok(rules)
}

fn all_subsets_frequent(items: &Itemset, previous: &HashSet<Itemset>) -> bool {
    (0..items.len()).all(|skip| {
        let sub: Itemset = items
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != skip)
            .map(|(_, x)| x.clone())
            .collect();
        previous.contains(&sub)
    })
}

/// Calls `f` with every increasing `k`-subset of `pool`.
fn for_each_subset(pool: &[usize], k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(pool: &[usize], k: usize, start: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - acc.len() {
                break;
            }
            acc.push(pool[i]);
            rec(pool, k, i + 1, acc, f);
            acc.pop();
        }
    }
    rec(pool, k, 0, &mut Vec::with_capacity(k), f);
}

/// `body,head,support,confidence,lift` with six decimals.
pub fn write_rules_csv<W: Write>(rules: &[AssociationRule], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let fail = |e: csv::Error| Error::csv("<rules>", e);
    out.write_record(["body", "head", "support", "confidence", "lift"]).map_err(fail)?;
    for r in rules {
        out.write_record([
            r.body_string(),
            r.head.to_string(),
            format!("{:.6}", r.support),
            format!("{:.6}", r.confidence),
            format!("{:.6}", r.lift),
        ])
        .map_err(fail)?;
    }
    out.flush().map_err(|e| Error::io("<rules>", e))
}

/// Every rule with a non-empty body, any support, by exhaustive enumeration of
/// variable-disjoint assignments. Quadratic in the table and exponential in
/// the columns; used to cross-check the levelwise search.
pub fn all_rules_exhaustive(ct: &ContingencyTable, max_len: usize) -> Vec<(Vec<Item>, Item, f64)> {
    let total = ct.total() as f64;
    let cols = ct.columns();
    let mut values: Vec<BTreeSet<Value>> = vec![BTreeSet::new(); cols.len()];
    for (row, _) in ct.rows() {
        for (i, v) in row.iter().enumerate() {
            values[i].insert(v.clone());
        }
    }
    let freq = |items: &[(usize, &Value)]| -> f64 {
        ct.rows()
            .filter(|(r, _)| items.iter().all(|(i, v)| &r[*i] == *v))
            .map(|(_, c)| c as f64)
            .sum::<f64>()
            / total
    };
    let idx: Vec<usize> = (0..cols.len()).collect();
    let mut out = Vec::new();
    for k in 2..=max_len.min(cols.len()) {
        for_each_subset(&idx, k, &mut |subset| {
            let mut choices: Vec<Vec<(usize, &Value)>> = vec![Vec::new()];
            for &c in subset {
                choices = choices
                    .into_iter()
                    .flat_map(|pre| {
                        values[c].iter().map(move |v| {
                            let mut p = pre.clone();
                            p.push((c, v));
                            p
                        })
                    })
                    .collect();
            }
            for items in choices {
                let joint = freq(&items);
                if joint == 0.0 {
                    continue;
                }
                for h in 0..items.len() {
                    let body: Vec<(usize, &Value)> =
                        items.iter().enumerate().filter(|(j, _)| *j != h).map(|(_, x)| *x).collect();
                    let lift = joint / freq(&body) / freq(&items[h..=h]);
                    let to_item = |&(i, v): &(usize, &Value)| Item {
                        variable: cols[i].clone(),
                        value: v.clone(),
                    };
                    out.push((body.iter().map(to_item).collect(), to_item(&items[h]), lift));
                }
            }
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ContingencyTable {
        ContingencyTable::from_str_rows(
            &["a", "b", "c"],
            &[
                (&["x", "p", "1"], 4),
                (&["x", "q", "1"], 1),
                (&["y", "q", "2"], 4),
                (&["y", "p", "2"], 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn single_row_rules_are_trivial() {
        let t = ContingencyTable::from_str_rows(&["a", "b"], &[(&["x", "y"], 7)]).unwrap();
        for r in mine_rules(&t, 20, 0.1).unwrap() {
            assert_eq!(r.confidence, 1.0);
            assert_eq!(r.lift, 1.0);
        }
    }

    #[test]
    fn constant_columns_never_appear() {
        let t = crate::ct::extend_with_constant(&sample(), "R", "T").unwrap();
        let rules = mine_rules(&t, 100, 0.01).unwrap();
        assert!(!rules.is_empty());
        assert!(rules.iter().all(|r| !r.mentions("R")));
    }

    #[test]
    fn top_rule_is_deterministic_link() {
        let rules = mine_rules(&sample(), 5, 0.05).unwrap();
        assert_eq!(rules[0].lift, 2.0);
        assert_eq!(rules[0].confidence, 1.0);
        assert!(rules.windows(2).all(|w| w[0].lift >= w[1].lift));
        for w in rules.windows(2) {
            if w[0].lift == w[1].lift {
                assert!(w[0].sort_key() < w[1].sort_key());
            }
        }
    }

    #[test]
    fn support_threshold_and_invariants() {
        let rules = mine_rules(&sample(), 100, 0.3).unwrap();
        for r in &rules {
            assert!(r.count <= r.body_count);
            assert!(r.support >= 0.3);
            assert!(r.body.iter().all(|i| i.variable != r.head.variable));
            assert!((r.lift - r.confidence / (r.head_count as f64 / r.total as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn levelwise_agrees_with_exhaustive() {
        let t = sample();
        let mut mined: Vec<(String, f64)> = mine_rules_with(&t, usize::MAX, 1e-9, 3)
            .unwrap()
            .into_iter()
            .map(|r| (format!("{}->{}", r.body_string(), r.head), r.lift))
            .collect();
        let mut brute: Vec<(String, f64)> = all_rules_exhaustive(&t, 3)
            .into_iter()
            .map(|(b, h, l)| {
                let mut b = b;
                b.sort();
                let body: Vec<String> = b.iter().map(|i| i.to_string()).collect();
                (format!("{}->{}", body.join(" & "), h), l)
            })
            .collect();
        mined.sort_by(|a, b| a.0.cmp(&b.0));
        brute.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(mined.len(), brute.len());
        for (m, b) in mined.iter().zip(&brute) {
            assert_eq!(m.0, b.0);
            assert!((m.1 - b.1).abs() < 1e-12);
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(mine_rules(&ContingencyTable::new(["a"]).unwrap(), 5, 0.1), Err(Error::EmptyTable)));
        assert!(mine_rules(&sample(), 5, 0.0).is_err());
        assert!(mine_rules(&sample(), 5, 1.5).is_err());
    }

    #[test]
    fn csv_output() {
        let rules = mine_rules(&sample(), 1, 0.05).unwrap();
        let mut buf = Vec::new();
        write_rules_csv(&rules, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("body,head,support,confidence,lift\n"));
        assert!(text.contains(",2.000000\n"));
    }
}
