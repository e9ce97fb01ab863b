#![allow(dead_code)]

use mjoin_core::{DatabaseInstance, RawTables, Schema};

pub const F1_SCHEMA: &str = r#"{
  "populations": [
    {"name": "Student", "key": "s_id", "variable": "S",
     "attributes": [{"name": "intelligence", "domain": ["hi", "lo"]},
                    {"name": "ranking", "domain": ["1", "2"]}]},
    {"name": "Professor", "key": "p_id", "variable": "P",
     "attributes": [{"name": "popularity", "domain": ["hi", "lo"]},
                    {"name": "teachingability", "domain": ["hi", "lo"]}]}
  ],
  "relationships": [
    {"name": "RA", "arguments": [{"variable": "P", "population": "Professor"},
                                 {"variable": "S", "population": "Student"}],
     "attributes": [{"name": "capability", "domain": ["hi", "lo"]},
                    {"name": "salary", "domain": ["high", "low"]}]}
  ]
}"#;

pub const F2_SCHEMA: &str = r#"{
  "populations": [
    {"name": "Student", "key": "s_id", "variable": "S",
     "attributes": [{"name": "intelligence", "domain": ["hi", "lo"]},
                    {"name": "ranking", "domain": ["1", "2"]}]},
    {"name": "Professor", "key": "p_id", "variable": "P",
     "attributes": [{"name": "popularity", "domain": ["hi", "lo"]},
                    {"name": "teachingability", "domain": ["hi", "lo"]}]},
    {"name": "Course", "key": "c_id", "variable": "C"}
  ],
  "relationships": [
    {"name": "RA", "arguments": [{"variable": "P", "population": "Professor"},
                                 {"variable": "S", "population": "Student"}],
     "attributes": [{"name": "capability", "domain": ["hi", "lo"]},
                    {"name": "salary", "domain": ["high", "low"]}]},
    {"name": "Reg", "arguments": [{"variable": "S", "population": "Student"},
                                  {"variable": "C", "population": "Course"}],
     "attributes": [{"name": "grade", "domain": ["A", "B"]}]}
  ]
}"#;

pub const UNIVERSITY_SCHEMA: &str = r#"{
  "populations": [
    {"name": "Student", "key": "s_id", "variable": "S",
     "attributes": [{"name": "intelligence", "domain": ["hi", "lo"]},
                    {"name": "ranking", "domain": ["1", "2"]}]},
    {"name": "Professor", "key": "p_id", "variable": "P",
     "attributes": [{"name": "popularity", "domain": ["hi", "lo"]},
                    {"name": "teachingability", "domain": ["hi", "lo"]}]},
    {"name": "Course", "key": "c_id", "variable": "C",
     "attributes": [{"name": "difficulty", "domain": ["hard", "easy"]}]}
  ],
  "relationships": [
    {"name": "RA", "arguments": [{"variable": "P", "population": "Professor"},
                                 {"variable": "S", "population": "Student"}],
     "attributes": [{"name": "capability", "domain": ["hi", "lo"]},
                    {"name": "salary", "domain": ["high", "low"]}]},
    {"name": "Reg", "arguments": [{"variable": "S", "population": "Student"},
                                  {"variable": "C", "population": "Course"}],
     "attributes": [{"name": "grade", "domain": ["A", "B"]}]},
    {"name": "Teaches", "arguments": [{"variable": "P", "population": "Professor"},
                                      {"variable": "C", "population": "Course"}]}
  ]
}"#;

/// Countries that border and trade with each other, plus the languages they
/// speak. Both `Borders` and `Trades` relate a country to a country.
pub const SELF_SCHEMA: &str = r#"{
  "populations": [
    {"name": "Country", "key": "code",
     "attributes": [{"name": "continent", "domain": ["eu", "as"]}]},
    {"name": "Language", "key": "id", "variable": "L",
     "attributes": [{"name": "script", "domain": ["latin", "other"]}]}
  ],
  "relationships": [
    {"name": "Borders", "arguments": [{"variable": "C1", "population": "Country"},
                                      {"variable": "C2", "population": "Country"}],
     "attributes": [{"name": "length", "domain": ["short", "long"]}]},
    {"name": "Trades", "arguments": [{"variable": "C1", "population": "Country"},
                                     {"variable": "C2", "population": "Country"}]},
    {"name": "Speaks", "arguments": [{"variable": "C2", "population": "Country"},
                                     {"variable": "L", "population": "Language"}]}
  ]
}"#;

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn ent(key: &str, vals: &[&str]) -> (String, Vec<String>) {
    (key.to_string(), strs(vals))
}

fn rel(a: &str, b: &str, vals: &[&str]) -> (String, String, Vec<String>) {
    (a.to_string(), b.to_string(), strs(vals))
}

fn build(schema: &str, raw: RawTables) -> (Schema, DatabaseInstance) {
    let schema = Schema::from_json(schema).unwrap();
    let db = DatabaseInstance::from_rows(&schema, raw).unwrap();
    (schema, db)
}

fn f1_students() -> Vec<(String, Vec<String>)> {
    vec![ent("s1", &["hi", "1"]), ent("s2", &["lo", "2"])]
}

pub fn f1() -> (Schema, DatabaseInstance) {
    build(
        F1_SCHEMA,
        RawTables {
            entities: vec![f1_students(), vec![ent("p1", &["hi", "hi"])]],
            relationships: vec![vec![rel("p1", "s1", &["hi", "high"])]],
        },
    )
}

pub fn f2() -> (Schema, DatabaseInstance) {
    build(
        F2_SCHEMA,
        RawTables {
            entities: vec![f1_students(), vec![ent("p1", &["hi", "hi"])], vec![ent("c1", &[])]],
            relationships: vec![
                vec![rel("p1", "s1", &["hi", "high"])],
                vec![rel("s1", "c1", &["A"]), rel("s2", "c1", &["B"])],
            ],
        },
    )
}

pub fn university() -> (Schema, DatabaseInstance) {
    build(
        UNIVERSITY_SCHEMA,
        RawTables {
            entities: vec![
                vec![
                    ent("s1", &["hi", "1"]),
                    ent("s2", &["lo", "2"]),
                    ent("s3", &["hi", "2"]),
                    ent("s4", &["lo", "1"]),
                ],
                vec![ent("p1", &["hi", "hi"]), ent("p2", &["lo", "hi"]), ent("p3", &["lo", "lo"])],
                vec![ent("c1", &["hard"]), ent("c2", &["easy"]), ent("c3", &["easy"])],
            ],
            relationships: vec![
                vec![
                    rel("p1", "s1", &["hi", "high"]),
                    rel("p1", "s3", &["lo", "low"]),
                    rel("p2", "s2", &["hi", "low"]),
                    rel("p3", "s1", &["lo", "high"]),
                ],
                vec![
                    rel("s1", "c1", &["A"]),
                    rel("s1", "c2", &["B"]),
                    rel("s2", "c1", &["B"]),
                    rel("s3", "c3", &["A"]),
                    rel("s4", "c2", &["A"]),
                ],
                vec![rel("p1", "c1", &[]), rel("p2", "c2", &[]), rel("p3", "c3", &[]), rel("p1", "c3", &[])],
            ],
        },
    )
}

pub fn self_relationship() -> (Schema, DatabaseInstance) {
    build(
        SELF_SCHEMA,
        RawTables {
            entities: vec![
                vec![ent("fr", &["eu"]), ent("de", &["eu"]), ent("cn", &["as"]), ent("mn", &["as"])],
                vec![ent("french", &["latin"]), ent("mongolian", &["other"])],
            ],
            relationships: vec![
                vec![
                    rel("fr", "de", &["short"]),
                    rel("de", "fr", &["short"]),
                    rel("cn", "mn", &["long"]),
                    rel("mn", "cn", &["long"]),
                ],
                vec![rel("fr", "de", &[]), rel("de", "fr", &[]), rel("fr", "cn", &[]), rel("cn", "cn", &[])],
                vec![rel("fr", "french", &[]), rel("mn", "mongolian", &[]), rel("cn", "mongolian", &[])],
            ],
        },
    )
}

/// `n_x` entities of which the first `n_active` have `active = yes`; each of
/// those is related to every one of `n_y` targets, nobody else is related.
/// Targets alternate between two colours.
pub fn planted(n_x: usize, n_active: usize, n_y: usize) -> (Schema, DatabaseInstance) {
    let schema = r#"{
      "populations": [
        {"name": "Person", "key": "id", "variable": "X",
         "attributes": [{"name": "active", "domain": ["yes", "no"]}]},
        {"name": "Item", "key": "id", "variable": "Y",
         "attributes": [{"name": "color", "domain": ["a", "b"]}]}
      ],
      "relationships": [
        {"name": "Likes", "arguments": [{"variable": "X", "population": "Person"},
                                        {"variable": "Y", "population": "Item"}]}
      ]
    }"#;
    let xs: Vec<_> = (0..n_x)
        .map(|i| ent(&format!("x{i}"), &[if i < n_active { "yes" } else { "no" }]))
        .collect();
    let ys: Vec<_> = (0..n_y)
        .map(|j| ent(&format!("y{j}"), &[if j % 2 == 0 { "a" } else { "b" }]))
        .collect();
    let likes = (0..n_active)
        .flat_map(|i| (0..n_y).map(move |j| rel(&format!("x{i}"), &format!("y{j}"), &[])))
        .collect();
    build(
        schema,
        RawTables {
            entities: vec![xs, ys],
            relationships: vec![likes],
        },
    )
}

pub mod tables {
    use mjoin_core::ContingencyTable;
    use proptest::prelude::*;

    pub fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    /// Random table over the given columns, values from a three-letter
    /// alphabet, counts 1..=5 (duplicates are summed).
    pub fn arb_table(columns: Vec<String>, max_rows: usize) -> impl Strategy<Value = ContingencyTable> {
        let width = columns.len();
        prop::collection::vec((prop::collection::vec(0u8..3, width), 1u64..=5), 0..=max_rows).prop_map(move |rows| {
            let rows = rows
                .into_iter()
                .map(|(r, c)| (r.into_iter().map(|v| ["a", "b", "c"][v as usize].into()).collect(), c));
            ContingencyTable::from_rows(columns.clone(), rows).unwrap()
        })
    }

    /// A table whose first column `R` holds `T`/`F`, followed by `width` value columns.
    pub fn arb_relationship_table(width: usize, max_rows: usize) -> impl Strategy<Value = ContingencyTable> {
        let mut cols = vec!["R".to_string()];
        cols.extend(names("v", width));
        prop::collection::vec((any::<bool>(), prop::collection::vec(0u8..3, width), 1u64..=5), 0..=max_rows)
            .prop_map(move |rows| {
                let rows = rows.into_iter().map(|(t, r, c)| {
                    let mut row: Vec<mjoin_core::Value> = vec![if t { "T" } else { "F" }.into()];
                    row.extend(r.into_iter().map(|v| ["a", "b", "c"][v as usize].into()));
                    (row, c)
                });
                ContingencyTable::from_rows(cols.clone(), rows).unwrap()
            })
    }

    /// Column subset chosen by a bit mask.
    pub fn pick(columns: &[String], mask: u32) -> Vec<String> {
        columns
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, c)| c.clone())
            .collect()
    }
}
