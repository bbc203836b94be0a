use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use lcos_core::consistency::{
    build_matrix, synth_matrix, BuildConfig, ConsistencyMatrix, FailurePolicy, HttpOracle,
    MatrixJson, Oracle, PromptTemplate, ResponseCache, Sampling, SynthNoiseConfig,
};
use lcos_core::dataset::Dataset;
use lcos_core::graph::{condense, dot};
use lcos_core::metrics::{descendant_graph, evaluate_distribution, CoeMode, ReportJson};
use lcos_core::mtr::{brute_force_orders, Arc, BRUTE_FORCE_LIMIT};
use lcos_core::tournament::{run_search, DistributionJson, Engine, SearchOptions, SearchRun};
use lcos_core::{Error, ExactDistribution, Rational};

use crate::output::{load_matrix, read_to_string, save_matrix, write_atomic, write_json};
use crate::{
    Cli, Command, ConvertCommand, EngineArg, EvalOpts, Format, OracleArgs, OracleMode, PolicyArg,
    SamplingArg, SearchArgs,
};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Query(a) => {
            let dataset = Dataset::load_with_sidecar(&a.dataset)?;
            let q = query(&dataset, &a.oracle)?;
            save_matrix(&a.out.join("matrix.json"), &q.matrix)?;
            save_matrix(&a.out.join("matrix.csv"), &q.matrix)?;
            eprintln!(
                "{}: {} variables, {} oracle calls, {} answers settled by policy",
                dataset.name,
                dataset.variables.len(),
                q.queried,
                q.policy_resolved
            );
            Ok(())
        }
        Command::Solve(a) => {
            let matrix = load_matrix(&a.matrix)?;
            let solved = solve(&matrix, &a.search, &a.out)?;
            print_distribution(&solved.distribution);
            Ok(())
        }
        Command::Eval(a) => {
            let dataset = Dataset::load_with_sidecar(&a.dataset)?;
            let text = read_to_string(&a.distribution)?;
            let dj: DistributionJson = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", a.distribution.display()))?;
            let dist = dj.to_distribution()?;
            let (report, row) = evaluate(&dataset, &dist, &a.eval)?;
            write_json(&a.out.join("report.json"), &report)?;
            println!("{row}");
            Ok(())
        }
        Command::Pipeline(a) => pipeline(&a.dataset, &a.oracle, &a.search, &a.eval, &a.out),
        Command::Convert(c) => convert(c),
    }
}

struct Queried {
    matrix: ConsistencyMatrix,
    queried: usize,
    policy_resolved: usize,
}

fn template(args: &OracleArgs) -> Result<PromptTemplate> {
    let Some(path) = &args.verbs else {
        return Ok(PromptTemplate::default());
    };
    let verbs: Vec<String> = read_to_string(path)?
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    PromptTemplate::with_verbs(verbs).with_context(|| format!("verbs file {}", path.display()))
}

fn query(dataset: &Dataset, args: &OracleArgs) -> Result<Queried> {
    if args.oracle == OracleMode::Synthetic {
        let noise = SynthNoiseConfig {
            p_true: args.p_true,
            p_false: args.p_false,
            p_unrelated: args.p_unrelated,
            repeats: u32::try_from(args.repeats).context("repeats too large")?,
            sampling: match args.sampling {
                SamplingArg::Binomial => Sampling::Binomial,
                SamplingArg::Expected => Sampling::Expected,
            },
        };
        let dag = dataset
            .true_dag()
            .context("the synthetic oracle needs the dataset's true_edges")?;
        let synthetic = synth_matrix(&dag, &noise, args.seed)?;
        // Keep the dataset's descriptions on the matrix variables.
        let mut json: MatrixJson = synthetic.to_json();
        json.variables = dataset.variables.clone();
        return Ok(Queried {
            matrix: ConsistencyMatrix::from_json(&json)?,
            queried: 0,
            policy_resolved: 0,
        });
    }

    let cache = match (&args.cache, args.oracle) {
        (Some(path), _) => ResponseCache::open(path)?,
        (None, OracleMode::Replay) => bail!("replay mode needs --cache"),
        (None, _) => ResponseCache::in_memory(),
    };
    let live;
    let oracle: Option<&dyn Oracle> = if args.oracle == OracleMode::Live {
        live = HttpOracle::from_env(&args.endpoint, &args.model);
        Some(&live)
    } else {
        None
    };
    let config = BuildConfig {
        retry_limit: args.retry_limit,
        failure_policy: match args.failure_policy {
            PolicyArg::CountAsFalse => FailurePolicy::CountAsFalse,
            PolicyArg::ReaskNextVerb => FailurePolicy::ReaskNextVerb,
        },
        parallelism: args.parallelism,
        ..BuildConfig::new(&dataset.name, &args.model, args.repeats)
    };
    let out = build_matrix(
        &dataset.variables,
        oracle,
        &template(args)?,
        &cache,
        &config,
    )?;
    Ok(Queried {
        matrix: out.matrix,
        queried: out.queried,
        policy_resolved: out.policy_resolved,
    })
}

pub(crate) struct Solved {
    distribution: ExactDistribution,
    verification: String,
}

fn options(args: &SearchArgs) -> SearchOptions {
    SearchOptions {
        scc_cap: args.scc_cap,
        engine: match args.engine {
            EngineArg::Exclusion => Engine::ExclusionSearch,
            EngineArg::Dp => Engine::DpEnumeration,
        },
        prune_supersets: !args.no_prune,
        fixpoint_removal: args.fixpoint_removal,
        insert_removed: args.insert_removed,
    }
}

fn solve(matrix: &ConsistencyMatrix, args: &SearchArgs, out: &Path) -> Result<Solved> {
    let repeats = matrix.repeats() as i64;
    let exact = |s: i64| Rational::new(s, repeats);
    let run = run_search(matrix.names(), matrix.counts()?, &options(args))?;
    let verification = if args.verify {
        verify(&run)?
    } else {
        "not requested".to_string()
    };
    let distribution = run.distribution.clone().map_score(exact);
    write_atomic(
        &out.join("distribution.json"),
        &distribution.to_json().to_pretty_string(),
    )?;
    write_json(
        &out.join("scc.json"),
        &run.partition.dump(run.informative.names()),
    )?;
    write_json(
        &out.join("solve.json"),
        &json!({
            "score": fraction(distribution.score),
            "count": distribution.len(),
            "removed": distribution.removed,
            "components": run.partition.components.iter().filter(|c| c.len() > 1).count(),
            "largest_component": run.partition.components.iter().map(Vec::len).max().unwrap_or(0),
            "verification": verification,
        }),
    )?;
    if args.trace {
        write_json(&out.join("trace.json"), &trace_json(&run, repeats))?;
    }
    if args.format == Format::Dot {
        let names = run.informative.names();
        let (reduced, _) = run.informative.strip_bidirected();
        write_atomic(
            &out.join("semicomplete.dot"),
            &dot::semicomplete_to_dot(&run.full),
        )?;
        write_atomic(
            &out.join("components.dot"),
            &dot::component_graph_to_dot(&condense(&reduced, &run.partition), names),
        )?;
        for (k, order) in distribution.named_orders().iter().enumerate() {
            write_atomic(
                &out.join(format!("order-{k}.dot")),
                &dot::order_to_dot(order),
            )?;
        }
    }
    Ok(Solved {
        distribution,
        verification,
    })
}

/// Compares the emitted set with every maximal order found exhaustively.
fn verify(run: &SearchRun<i64>) -> Result<String> {
    let d = &run.distribution;
    let weights = if d.vertices.len() == run.informative.len() {
        run.informative.weights()
    } else {
        run.full.weights()
    };
    if d.vertices.len() > BRUTE_FORCE_LIMIT {
        return Ok(format!(
            "skipped: {} vertices exceed the exhaustive limit of {BRUTE_FORCE_LIMIT}",
            d.vertices.len()
        ));
    }
    let all: Vec<usize> = (0..d.vertices.len()).collect();
    let (best, orders) = brute_force_orders(weights, &all)?;
    let expected: BTreeSet<Vec<usize>> = orders.into_iter().collect();
    let emitted: BTreeSet<Vec<usize>> = d.tournaments.iter().map(|t| t.order().to_vec()).collect();
    if best != d.score {
        return Err(Error::VerificationMismatch(format!(
            "exhaustive optimum {best} differs from search score {}",
            d.score
        ))
        .into());
    }
    if expected != emitted {
        let missing = expected.difference(&emitted).count();
        let extra = emitted.difference(&expected).count();
        return Err(Error::VerificationMismatch(format!(
            "{missing} optimal orders missing and {extra} unexpected orders emitted"
        ))
        .into());
    }
    Ok("verified".to_string())
}

fn fraction(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn trace_json(run: &SearchRun<i64>, repeats: i64) -> Value {
    let names = run.informative.names();
    let arcs = |set: &BTreeSet<Arc>| -> Vec<[&str; 2]> {
        set.iter()
            .map(|&(u, v)| [names[u].as_str(), names[v].as_str()])
            .collect()
    };
    let components: Vec<Value> = run
        .traces
        .iter()
        .map(|t| {
            let steps: Vec<Value> = t
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "excluded": arcs(&s.excluded),
                        "score": s.score.map(|x| fraction(Rational::new(x, repeats))),
                        "reversed": s.reversed.as_ref().map(arcs),
                        "verdict": format!("{:?}", s.verdict).to_lowercase(),
                    })
                })
                .collect();
            json!({"vertices": t.vertices, "steps": steps})
        })
        .collect();
    json!({ "components": components })
}

fn print_distribution(d: &ExactDistribution) {
    println!(
        "score {}  orders {}  removed [{}]",
        fraction(d.score),
        d.len(),
        d.removed.join(", ")
    );
    for order in d.named_orders() {
        println!("  {}", order.join(" < "));
    }
}

fn evaluate(
    dataset: &Dataset,
    dist: &ExactDistribution,
    opts: &EvalOpts,
) -> Result<(ReportJson, String)> {
    let desc = descendant_graph(&dataset.true_dag()?);
    let mode: CoeMode = opts.coe_norm.into();
    let report = evaluate_distribution(&desc, dist, mode, opts.lenient)?;
    let n = dataset.variables.len();
    Ok((
        report.to_json(&dataset.name, n),
        report.table_row(&dataset.name, n),
    ))
}

#[derive(Serialize)]
struct PipelineSummary<'a> {
    dataset: &'a str,
    oracle: &'a str,
    queried: usize,
    policy_resolved: usize,
    score: String,
    count: usize,
    removed: &'a [String],
    verification: &'a str,
    report: Option<ReportJson>,
}

fn pipeline(
    dataset_path: &Path,
    oracle: &OracleArgs,
    search: &SearchArgs,
    eval: &EvalOpts,
    out: &Path,
) -> Result<()> {
    let dataset = Dataset::load_with_sidecar(dataset_path)?;
    let q = query(&dataset, oracle).context("query stage")?;
    save_matrix(&out.join("matrix.json"), &q.matrix)?;
    let solved = solve(&q.matrix, search, out).context("solve stage")?;
    print_distribution(&solved.distribution);
    let report = if dataset.true_edges.is_some() {
        let (report, row) = evaluate(&dataset, &solved.distribution, eval).context("eval stage")?;
        write_json(&out.join("report.json"), &report)?;
        println!("{row}");
        Some(report)
    } else {
        None
    };
    let summary = PipelineSummary {
        dataset: &dataset.name,
        oracle: match oracle.oracle {
            OracleMode::Live => "live",
            OracleMode::Replay => "replay",
            OracleMode::Synthetic => "synthetic",
        },
        queried: q.queried,
        policy_resolved: q.policy_resolved,
        score: fraction(solved.distribution.score),
        count: solved.distribution.len(),
        removed: &solved.distribution.removed,
        verification: &solved.verification,
        report,
    };
    write_json(&out.join("summary.json"), &summary)
}

fn convert(c: ConvertCommand) -> Result<()> {
    match c {
        ConvertCommand::Edges {
            input,
            name,
            descriptions,
            output,
        } => {
            let mut d = Dataset::from_edge_list(&name, &read_to_string(&input)?)?;
            if let Some(path) = descriptions {
                let map = serde_json::from_str(&read_to_string(&path)?)
                    .with_context(|| format!("parsing {}", path.display()))?;
                d.apply_descriptions(&map)?;
            }
            write_atomic(&output, &d.to_pretty_string())
        }
        ConvertCommand::Matrix { input, output } => save_matrix(&output, &load_matrix(&input)?),
    }
}
