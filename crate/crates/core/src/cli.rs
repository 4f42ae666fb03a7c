//! Command-line front end.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgraph::export::{from_summary, summary, to_dot, ComponentSummary};
use crate::fgraph::FunctionalGraph;
use crate::groups::{flower_decompose, FlowerOutcome, GroupSpec};
use crate::notation::{render, render_plain};
use crate::oracle::{brute_force, verify_group, VerifyReport, NO_THEOREM};
use crate::selftest;
use crate::structural::{describe_spec, semidirect_is_flower, Provenance};
use crate::tree::{RootedTree, TreeExpr};

/// Environment variable holding the worker thread count for `sweep`.
pub const THREADS_ENV: &str = "POWERGRAPH_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "powergraph",
    version,
    about = "Functional graphs of power maps g -> g^t on finite groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structural description of the graph of g -> g^t.
    Describe(GraphArgs),
    /// Compare the structural description with brute-force enumeration.
    Verify {
        #[command(flatten)]
        args: GraphArgs,
        /// Also write both graphs as DOT to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Enumerate the graph and export it with per-element orbit data.
    Export(GraphArgs),
    /// Verify a family of groups over a range of exponents.
    Sweep(SweepArgs),
    /// Run the acceptance checks; exits non-zero if any fails.
    Selftest {
        /// Run only this criterion (1 to 9).
        #[arg(long)]
        criterion: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(clap::Args, Debug)]
pub struct GraphArgs {
    /// Group spec, e.g. `quaternion:24` or `semidirect:n=65,m=4,s=8`.
    #[arg(long)]
    pub group: String,
    /// The exponent t >= 1.
    #[arg(long = "t")]
    pub t: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct SweepArgs {
    /// cyclic, units, dihedral (n: order 2n), quaternion (n: order 4n),
    /// semidirect (range over the order nm), or pgl2 (q).
    #[arg(long)]
    pub family: String,
    /// Inclusive parameter range `a..b`.
    #[arg(long)]
    pub range: Option<String>,
    /// Explicit comma-separated parameter values.
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<u64>,
    /// Inclusive exponent range `a..b`.
    #[arg(long, default_value = "1..12")]
    pub t_range: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// One component of a `describe` result, with its tree's symbolic name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedComponent {
    #[serde(flatten)]
    pub summary: ComponentSummary,
    pub tree_name: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Description {
    pub group: GroupSpec,
    pub t: u64,
    /// `None` when only the brute-force graph is available.
    pub provenance: Option<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flower_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
    pub notation: String,
    pub components: Vec<NamedComponent>,
}

impl Description {
    pub fn graph(&self) -> Result<FunctionalGraph> {
        let parts: Vec<ComponentSummary> =
            self.components.iter().map(|c| c.summary.clone()).collect();
        from_summary(&parts)
    }
}

/// Parse the JSON produced by `describe --format json` back into a graph.
pub fn graph_from_description_json(json: &str) -> Result<FunctionalGraph> {
    let d: Description =
        serde_json::from_str(json).map_err(|e| Error::parse(e.column(), e.to_string()))?;
    d.graph()
}

pub fn describe(spec: &GroupSpec, t: u64) -> Result<(Description, FunctionalGraph)> {
    let group = spec.build()?;
    let (graph, provenance, flower_type, notice, names) =
        match describe_spec(spec, group.as_ref(), t)? {
            Some(r) => (
                r.graph,
                Some(r.provenance),
                r.flower_type.map(|f| f.to_string()),
                None,
                r.names,
            ),
            None => (
                brute_force(group.as_ref(), t)?.graph,
                None,
                None,
                Some(NO_THEOREM.to_string()),
                BTreeMap::new(),
            ),
        };
    let name = |tree: &RootedTree| {
        names
            .get(tree)
            .cloned()
            .unwrap_or_else(|| TreeExpr::describe(tree))
    };
    let components = summary(&graph)
        .into_iter()
        .map(|s| NamedComponent {
            tree_name: name(&s.tree_code).to_string(),
            summary: s,
        })
        .collect();
    let d = Description {
        group: spec.clone(),
        t,
        provenance,
        flower_type,
        notice,
        notation: render(&graph, name),
        components,
    };
    Ok((d, graph))
}

#[derive(Serialize)]
struct ElementOrbit {
    element: usize,
    label: String,
    preperiod: u32,
    period: u32,
}

#[derive(Serialize)]
struct Export {
    group: GroupSpec,
    name: String,
    t: u64,
    notation: String,
    components: Vec<ComponentSummary>,
    orbits: Vec<ElementOrbit>,
}

fn export(args: &GraphArgs) -> Result<String> {
    let spec: GroupSpec = args.group.parse()?;
    let group = spec.build()?;
    let d = brute_force(group.as_ref(), args.t)?;
    Ok(match args.format {
        Format::Dot => to_dot(&d.graph, &format!("{spec} t={}", args.t)),
        Format::Text => {
            let mut s = format!(
                "{} ({}), t = {}\n{}\n",
                spec,
                group.name(),
                args.t,
                render_plain(&d.graph)
            );
            s.push_str("element\tpreperiod\tperiod\n");
            for (g, o) in d.orbits.iter().enumerate() {
                s.push_str(&format!(
                    "{}\t{}\t{}\n",
                    group.label(g),
                    o.preperiod,
                    o.period
                ));
            }
            s
        }
        Format::Json => {
            let e = Export {
                name: group.name(),
                t: args.t,
                notation: render_plain(&d.graph),
                components: summary(&d.graph),
                orbits: d
                    .orbits
                    .iter()
                    .enumerate()
                    .map(|(g, o)| ElementOrbit {
                        element: g,
                        label: group.label(g),
                        preperiod: o.preperiod,
                        period: o.period,
                    })
                    .collect(),
                group: spec,
            };
            serde_json::to_string_pretty(&e).expect("serializable") + "\n"
        }
    })
}

fn verify_text(r: &VerifyReport) -> String {
    let mut s = format!(
        "group: {} ({}), order {}, t = {}\n",
        r.group, r.name, r.order, r.t
    );
    match &r.structural {
        Some(st) => {
            let ft = st
                .flower_type
                .as_ref()
                .map(|f| format!(", type {f}"))
                .unwrap_or_default();
            s.push_str(&format!(
                "structural ({}{ft}): {}\n",
                serde_json::to_value(st.provenance)
                    .expect("serializable")
                    .as_str()
                    .unwrap_or(""),
                st.notation
            ));
        }
        None => s.push_str(&format!(
            "structural: {}\n",
            r.notice.as_deref().unwrap_or(NO_THEOREM)
        )),
    }
    let brute = from_summary(&r.brute_force)
        .map(|g| render_plain(&g))
        .unwrap_or_default();
    s.push_str(&format!("brute force: {brute}\n"));
    let verdict = match r.isomorphic {
        Some(true) => "isomorphic",
        Some(false) => "NOT isomorphic",
        None => "not applicable",
    };
    s.push_str(&format!("verdict: {verdict}\n"));
    s.push_str(&format!(
        "vertices: {}; periodic points: {}; distinct trees: {}\n",
        r.brute_force_vertices, r.periodic_points, r.distinct_trees
    ));
    let st_ms = r.structural.as_ref().map(|s| s.elapsed_ms).unwrap_or(0.0);
    s.push_str(&format!(
        "time: structural {st_ms:.2} ms, brute force {:.2} ms\n",
        r.brute_force_ms
    ));
    s
}

/// Parse an inclusive range `a..b` or `a..=b`.
pub fn parse_range(text: &str) -> Result<(u64, u64)> {
    let Some(dots) = text.find("..") else {
        return Err(Error::parse(0, format!("expected `a..b`, found {text:?}")));
    };
    let rest = &text[dots + 2..];
    let (rest, offset) = match rest.strip_prefix('=') {
        Some(r) => (r, dots + 3),
        None => (rest, dots + 2),
    };
    let num = |s: &str, pos: usize| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| Error::parse(pos, format!("expected an integer, found {:?}", s.trim())))
    };
    let (a, b) = (num(&text[..dots], 0)?, num(rest, offset)?);
    if a > b {
        return Err(Error::parse(0, format!("empty range {text:?}")));
    }
    Ok((a, b))
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub group: String,
    pub t: u64,
    pub order: u64,
    pub flower_type: String,
    pub components: u64,
    pub distinct_trees: usize,
    pub verdict: String,
}

/// Group specs of a sweep family over the given parameters.
pub fn family_specs(family: &str, params: &[u64]) -> Result<Vec<GroupSpec>> {
    let mut out = Vec::new();
    for &p in params {
        match family {
            "cyclic" => out.push(GroupSpec::Cyclic(p)),
            "units" => out.push(GroupSpec::Units(p)),
            "dihedral" => out.push(GroupSpec::Dihedral(2 * p)),
            "quaternion" => out.push(GroupSpec::Quaternion(4 * p)),
            "pgl2" => out.push(GroupSpec::Pgl2(p)),
            "semidirect" => {
                for n in 2..=p / 2 {
                    if p % n != 0 {
                        continue;
                    }
                    let m = p / n;
                    for s in 1..n {
                        if semidirect_is_flower(n, m, s) {
                            out.push(GroupSpec::Semidirect { n, m, s });
                        }
                    }
                }
            }
            other => {
                return Err(Error::domain(format!(
                    "unknown family {other:?}; expected cyclic, units, dihedral, quaternion, semidirect or pgl2"
                )))
            }
        }
    }
    Ok(out)
}

fn sweep_row(spec: &GroupSpec, t: u64) -> SweepRow {
    let mut row = SweepRow {
        group: spec.to_string(),
        t,
        order: spec.order().unwrap_or(0),
        flower_type: "-".into(),
        components: 0,
        distinct_trees: 0,
        verdict: String::new(),
    };
    let result = spec.build().and_then(|g| {
        if spec.abelian_factors().is_some() {
            row.flower_type = "abelian".into();
        } else if let Ok(FlowerOutcome::Flower(d)) = flower_decompose(g.as_ref()) {
            row.flower_type = d.flower_type.to_string();
        }
        verify_group(spec, g.as_ref(), t)
    });
    match result {
        Ok((r, _, brute)) => {
            row.components = brute.component_count();
            row.distinct_trees = r.distinct_trees;
            row.verdict = match r.isomorphic {
                Some(v) => v.to_string(),
                None => "n/a".into(),
            };
        }
        Err(e) => row.verdict = format!("error: {e}"),
    }
    row
}

pub fn sweep(args: &SweepArgs) -> Result<Vec<SweepRow>> {
    let mut params = args.values.clone();
    if let Some(r) = &args.range {
        let (a, b) = parse_range(r)?;
        params.extend(a..=b);
    }
    if params.is_empty() {
        return Err(Error::domain("sweep needs --range or --values"));
    }
    let (t0, t1) = parse_range(&args.t_range)?;
    if t0 == 0 {
        return Err(Error::domain("t must be positive"));
    }
    let specs = family_specs(&args.family, &params)?;
    let jobs: Vec<(GroupSpec, u64)> = specs
        .iter()
        .flat_map(|s| (t0..=t1).map(move |t| (s.clone(), t)))
        .collect();
    let run = || {
        jobs.par_iter()
            .map(|(s, t)| sweep_row(s, *t))
            .collect::<Vec<_>>()
    };
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    Ok(match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::domain(e.to_string()))?
            .install(run),
        None => run(),
    })
}

fn sweep_text(rows: &[SweepRow]) -> String {
    let mut s = format!(
        "{:<28} {:>4} {:>7}  {:<24} {:>10} {:>6}  {}\n",
        "group", "t", "order", "type", "components", "trees", "verdict"
    );
    for r in rows {
        s.push_str(&format!(
            "{:<28} {:>4} {:>7}  {:<24} {:>10} {:>6}  {}\n",
            r.group, r.t, r.order, r.flower_type, r.components, r.distinct_trees, r.verdict
        ));
    }
    s
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::domain(format!("writing {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::domain(format!("writing output: {e}")))
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

/// Run a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Describe(args) => {
            let spec: GroupSpec = args.group.parse()?;
            let (d, graph) = describe(&spec, args.t)?;
            if let Some(n) = &d.notice {
                eprintln!("{spec}: {n}");
            }
            let text = match args.format {
                Format::Text => format!("{}\n", d.notation),
                Format::Json => json(&d),
                Format::Dot => to_dot(&graph, &format!("{spec} t={}", args.t)),
            };
            emit(&args.out, &text)?;
            Ok(0)
        }
        Command::Verify { args, dot } => {
            let spec: GroupSpec = args.group.parse()?;
            let group = spec.build()?;
            let (report, structural, brute) = verify_group(&spec, group.as_ref(), args.t)?;
            if let Some(path) = dot {
                let mut text = String::new();
                if let Some(g) = &structural {
                    text.push_str(&to_dot(g, "structural"));
                }
                text.push_str(&to_dot(&brute, "brute_force"));
                emit(&Some(path), &text)?;
            }
            let text = match args.format {
                Format::Json => json(&report),
                Format::Text => verify_text(&report),
                Format::Dot => return Err(Error::domain("verify writes DOT through --dot <path>")),
            };
            emit(&args.out, &text)?;
            Ok(if report.isomorphic == Some(false) {
                1
            } else {
                0
            })
        }
        Command::Export(args) => {
            emit(&args.out, &export(&args)?)?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let rows = sweep(&args)?;
            let text = match args.format {
                Format::Json => json(&rows),
                Format::Text => sweep_text(&rows),
                Format::Dot => return Err(Error::domain("sweep output is text or json")),
            };
            emit(&args.out, &text)?;
            Ok(
                if rows
                    .iter()
                    .all(|r| r.verdict == "true" || r.verdict == "n/a")
                {
                    0
                } else {
                    1
                },
            )
        }
        Command::Selftest { criterion } => {
            let outcomes = match criterion {
                Some(id) => {
                    let o = selftest::run_one(id).ok_or_else(|| {
                        Error::domain(format!("no criterion {id}; expected 1 to 9"))
                    })?;
                    println!("{o}");
                    vec![o]
                }
                None => selftest::run_all(|o| println!("{o}")),
            };
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!(
                "{} of {} criteria passed",
                outcomes.len() - failed,
                outcomes.len()
            );
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn describe_examples() {
        let cases = [
            (
                "quaternion:24",
                3,
                "Cyc(2,T(3)) (+) 2xCyc(1,T(3)) (+) 6xCyc(2)",
            ),
            ("cyclic:4", 2, "{T(2,2)}"),
            ("abelian:6x12", 14, "{T(4,2)} (+) 4xCyc(2,T(4,2))"),
        ];
        for (spec, t, expected) in cases {
            let (d, _) = describe(&spec.parse().unwrap(), t).unwrap();
            assert_eq!(d.notation, expected);
        }
    }

    #[test]
    fn json_roundtrip() {
        for (spec, t) in [
            ("quaternion:48", 10),
            ("pgl2:5", 2),
            ("units:91", 14),
            ("dihedral:12", 4),
        ] {
            let (d, g) = describe(&spec.parse().unwrap(), t).unwrap();
            let text = serde_json::to_string(&d).unwrap();
            assert_eq!(graph_from_description_json(&text).unwrap(), g);
        }
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..10").unwrap(), (3, 10));
        assert_eq!(parse_range("3..=10").unwrap(), (3, 10));
        assert!(parse_range("10..3").is_err());
        assert!(matches!(
            parse_range("3..x"),
            Err(Error::Parse { pos: 3, .. })
        ));
    }

    #[test]
    fn sweep_family_expansion() {
        let specs = family_specs("semidirect", &[260]).unwrap();
        assert!(specs.contains(&GroupSpec::Semidirect { n: 65, m: 4, s: 8 }));
        assert!(family_specs("torus", &[3]).is_err());
        assert_eq!(
            family_specs("dihedral", &[3]).unwrap(),
            vec![GroupSpec::Dihedral(6)]
        );
    }
}
