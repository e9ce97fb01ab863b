//! Mutual information of each column with a target column.

use crate::ct::{project, ContingencyTable};
use crate::error::{Error, Result};

/// `(variable, MI in bits)` for every non-target column, highest first, ties
/// by name.
pub fn rank_features(ct: &ContingencyTable, target: &str) -> Result<Vec<(String, f64)>> {
    if !ct.has_column(target) {
        return Err(Error::UnknownVariable(target.to_string()));
    }
    if ct.is_empty() {
        return Err(Error::EmptyTable);
    }
    let total = ct.total() as f64;
    let target_marginal = project(ct, &[target])?;
    let mut out = Vec::new();
    for col in ct.columns().iter().filter(|c| c.as_str() != target) {
        let joint = project(ct, &[col.as_str(), target])?;
        let marginal = project(ct, &[col.as_str()])?;
        let mut mi = 0.0;
        for (row, c) in joint.rows() {
            let p_xy = c as f64 / total;
            let p_x = marginal.count(&row[..1]) as f64 / total;
            let p_y = target_marginal.count(&row[1..]) as f64 / total;
            mi += p_xy * (p_xy / (p_x * p_y)).log2();
        }
        out.push((col.clone(), mi.max(0.0)));
    }
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Entropy of one column, in bits.
pub fn entropy(ct: &ContingencyTable, column: &str) -> Result<f64> {
    let total = ct.total() as f64;
    let marginal = project(ct, &[column])?;
    Ok(marginal
        .rows()
        .map(|(_, c)| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copy_ranks_first_independent_scores_zero() {
        let t = ContingencyTable::from_str_rows(
            &["t", "copy", "noise"],
            &[
                (&["a", "a", "0"], 1),
                (&["a", "a", "1"], 1),
                (&["b", "b", "0"], 1),
                (&["b", "b", "1"], 1),
            ],
        )
        .unwrap();
        let ranked = rank_features(&t, "t").unwrap();
        assert_eq!(ranked[0].0, "copy");
        assert!((ranked[0].1 - entropy(&t, "t").unwrap()).abs() < 1e-12);
        assert_eq!(ranked[1], ("noise".to_string(), 0.0));
    }

    #[test]
    fn unknown_target() {
        let t = ContingencyTable::from_str_rows(&["a"], &[(&["x"], 1)]).unwrap();
        assert!(matches!(rank_features(&t, "b"), Err(Error::UnknownVariable(_))));
    }
}
