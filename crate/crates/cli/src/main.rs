use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use mjoin_core::apps::{mine_rules_with, parse_structure, rank_features, score_terms, write_rules_csv};
use mjoin_core::bench::{run_bench, BenchConfig};
use mjoin_core::oracle::{self, DEFAULT_CAP};
use mjoin_core::{
    enumerate_chain_lattice, entity_ct, link_off_table, load_database, load_schema, mobius_join,
    positive_chain_ct, ContingencyTable, MjConfig,
};

#[derive(Parser)]
#[command(name = "mjoin", version, about = "Contingency tables over relational data, negative relationships included")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Compute entity and chain tables and a report.
    Compute {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_chain_length: usize,
        /// `off` keeps only rows where every relationship is true.
        #[arg(long, value_enum, default_value = "on")]
        link_analysis: Switch,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Compare every chain table against brute-force enumeration.
    Verify {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        #[arg(long, default_value_t = 3)]
        max_chain_length: usize,
    },
    /// Scaling sweep over a synthetic generator configuration.
    Bench {
        #[arg(long)]
        generator: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Association rules ranked by lift.
    Rules {
        #[arg(long)]
        ct: PathBuf,
        #[arg(long, default_value_t = 20)]
        top_k: usize,
        #[arg(long, default_value_t = 0.01)]
        min_support: f64,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Write CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-likelihood of a table under a parent structure.
    Score {
        #[arg(long)]
        ct: PathBuf,
        #[arg(long)]
        structure: PathBuf,
    },
    /// Rank columns by mutual information with a target column.
    Rank {
        #[arg(long)]
        ct: PathBuf,
        #[arg(long)]
        target: String,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_table(dir: &Path, stem: &str, table: &ContingencyTable) -> Result<String> {
    let file = format!("{stem}.csv");
    table.save(dir.join(&file))?;
    Ok(file)
}

fn compute(
    schema: &Path,
    data: &Path,
    out: &Path,
    max_chain_length: usize,
    link: Switch,
    jobs: usize,
) -> Result<()> {
    let schema = load_schema(schema)?;
    let db = load_database(&schema, data)?;
    let lattice = enumerate_chain_lattice(&schema, max_chain_length)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;

    let mut tables = Vec::new();
    let mut complexity = serde_json::Value::Null;
    let mut phases = serde_json::Value::Null;
    let mut entity_tables = Vec::new();
    let mut chain_tables = Vec::new();
    match link {
        Switch::On => {
            let result = mobius_join(&schema, &db, &lattice, &MjConfig { verify_identities: false, jobs })?;
            complexity = serde_json::to_value(&result.report)?;
            // Timings vary run to run; keep them out of the report file.
            phases = json!({
                "positive_tuple_accesses": result.phases.positive_tuple_accesses,
                "negative_tuple_accesses": result.phases.negative_tuple_accesses,
            });
            println!(
                "positive phase {:.6}s, negative extension {:.6}s",
                result.phases.positive_secs, result.phases.negative_secs
            );
            entity_tables.extend(result.entity_tables);
            chain_tables.extend(result.chain_tables);
        }
        Switch::Off => {
            for &v in &lattice.entity_nodes {
                entity_tables.push((v, entity_ct(&schema, &db, v)));
            }
            for chain in lattice.chains() {
                let positive = positive_chain_ct(&schema, &db, chain)?;
                chain_tables.push((chain.clone(), link_off_table(&schema, chain, &positive)?));
            }
        }
    }
    for (v, t) in &entity_tables {
        let name = &schema.variables[*v].name;
        let file = write_table(out, &format!("entity_{name}"), t)?;
        tables.push(json!({"file": file, "variable": name, "rows": t.len(), "total": t.total().to_string()}));
    }
    for (chain, t) in &chain_tables {
        let file = write_table(out, &chain.file_stem(&schema), t)?;
        tables.push(json!({"file": file, "chain": chain.label(&schema), "rows": t.len(), "total": t.total().to_string()}));
    }
    let report = json!({
        "link_analysis": if link == Switch::On { "on" } else { "off" },
        "max_chain_length": max_chain_length,
        "statistics": chain_tables.iter().map(|(_, t)| t.len()).sum::<usize>(),
        "tables": tables,
        "complexity": complexity,
        "phases": phases,
    });
    let path = out.join("report.json");
    fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    println!(
        "wrote {} entity and {} chain tables to {}",
        entity_tables.len(),
        chain_tables.len(),
        out.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Compute {
            schema,
            data,
            out,
            max_chain_length,
            link_analysis,
            jobs,
        } => compute(&schema, &data, &out, max_chain_length, link_analysis, jobs)?,
        Command::Verify {
            schema,
            data,
            cap,
            max_chain_length,
        } => {
            let schema = load_schema(&schema)?;
            let db = load_database(&schema, &data)?;
            let outcome = oracle::verify(&schema, &db, max_chain_length, cap)?;
            match outcome.mismatch {
                None => println!("all {} tables match", outcome.tables_checked),
                Some(m) => {
                    println!("mismatch in {}", m.table);
                    println!("columns: {}", m.columns.join(","));
                    println!("row: {}", m.row.join(","));
                    println!("expected count {}, got {}", m.expected, m.got);
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Bench { generator, out } => {
            let config: BenchConfig = serde_json::from_str(&read(&generator)?)
                .with_context(|| format!("parsing {}", generator.display()))?;
            let report = run_bench(&config)?;
            for p in &report.points {
                println!(
                    "factor {:>8.3}  extra statistics {:>10}  extra time {:.6}s",
                    p.factor, p.extra_statistics, p.extra_time_s
                );
            }
            match report.slope {
                Some(s) => println!("log-log slope {s:.3}"),
                None => println!("log-log slope undefined"),
            }
            fs::write(&out, serde_json::to_string_pretty(&report)? + "\n")
                .with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Rules {
            ct,
            top_k,
            min_support,
            max_len,
            out,
        } => {
            let table = ContingencyTable::load(&ct)?;
            let rules = mine_rules_with(&table, top_k, min_support, max_len)?;
            match out {
                Some(path) => {
                    let f = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    write_rules_csv(&rules, f)?;
                }
                None => write_rules_csv(&rules, std::io::stdout().lock())?,
            }
        }
        Command::Score { ct, structure } => {
            let table = ContingencyTable::load(&ct)?;
            let structure = parse_structure(&read(&structure)?)?;
            let terms = score_terms(&structure, &table)?;
            for (node, term) in &terms {
                println!("{node}\t{term:.6}");
            }
            println!("total\t{:.6}", terms.values().sum::<f64>());
        }
        Command::Rank { ct, target } => {
            let table = ContingencyTable::load(&ct)?;
            for (var, mi) in rank_features(&table, &target)? {
                println!("{var}\t{mi:.6}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn rejects_bad_switch() {
        let r = Cli::try_parse_from(["mjoin", "compute", "--schema", "s", "--data", "d", "--out", "o", "--link-analysis", "maybe"]);
        assert!(r.is_err());
        if let Err(e) = r {
            assert_eq!(e.exit_code(), 2);
        }
    }
}
