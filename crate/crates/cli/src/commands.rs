use num_traits::One;
use serde_json::json;

use bellgraph::families::{generate, FamilyKind, FamilySpec};
use bellgraph::loss::{violation_report, LossDistribution, LossSet, MixtureOperator};
use bellgraph::mixture::{analyze_mixture, uniform_grid};
use bellgraph::oracle::ORACLE_QUBIT_CAP;
use bellgraph::quad::parse_rational;
use bellgraph::sweep::{binomial, combinations, critical_sets, tolerance_from_rows, tolerance_table, Semantics};
use bellgraph::verify::{random_graphs, verify_graphs, VerifyOptions};
use bellgraph::{exec, BoundMode, Error, Graph, Mode, Rational, VertexSet};

use crate::render::{self, json_line};
use crate::{
    AnalyzeArgs, BoundArg, CandidateArgs, Failure, Format, GraphSource, MixtureArgs, SemanticsArg, SweepArgs,
    VerifyArgs,
};

fn read_file(path: &std::path::Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(src: &GraphSource) -> Result<Graph, Failure> {
    match (&src.family, &src.file) {
        (Some(kind), None) => {
            let n = src.n.ok_or_else(|| Failure::usage("--family needs --n"))?;
            Ok(generate(&FamilySpec::new(*kind, n)?))
        }
        (None, Some(path)) => {
            let text = read_file(path)?;
            Graph::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        _ => Err(Failure::usage("give exactly one of --family (with --n) or --file")),
    }
}

fn check_vertices(g: &Graph, vs: &[usize]) -> Result<VertexSet, Failure> {
    for &v in vs {
        if v >= g.n() {
            return Err(Error::IndexOutOfRange { index: v, n: g.n() }.into());
        }
    }
    Ok(vs.iter().copied().collect())
}

fn leaves(g: &Graph) -> VertexSet {
    (0..g.n()).filter(|&v| g.degree(v) == Ok(1)).collect()
}

fn candidates(g: &Graph, args: &CandidateArgs) -> Result<VertexSet, Failure> {
    if args.leaves_only {
        Ok(leaves(g))
    } else if let Some(list) = &args.candidates {
        check_vertices(g, list)
    } else {
        Ok(g.vertices())
    }
}

fn bound_mode(b: BoundArg) -> BoundMode {
    match b {
        BoundArg::Induced => BoundMode::Induced,
        BoundArg::Full => BoundMode::Full,
    }
}

fn bound_name(b: BoundArg) -> &'static str {
    match b {
        BoundArg::Induced => "induced",
        BoundArg::Full => "full",
    }
}

fn check_budget(count: u128, budget: u64) -> Result<(), Failure> {
    if count > budget as u128 {
        Err(Error::BudgetExceeded {
            count,
            budget: budget as u128,
        }
        .into())
    } else {
        Ok(())
    }
}

pub fn analyze(args: &AnalyzeArgs, mode: Mode) -> Result<String, Failure> {
    let g = load_graph(&args.source)?;
    let sets: Vec<VertexSet> = if let Some(list) = &args.lose {
        vec![check_vertices(&g, list)?]
    } else if let Some(r) = args.lose_leaves_of_root {
        check_vertices(&g, &[r])?;
        let count = args.count.unwrap_or(0);
        let own: Vec<usize> = g.neighborhood(r)?.iter().filter(|&v| g.degree(v) == Ok(1)).collect();
        if own.len() < count {
            return Err(Failure::usage(format!(
                "vertex {r} has {} leaves, cannot lose {count}",
                own.len()
            )));
        }
        vec![own[..count].iter().copied().collect()]
    } else if let Some(k) = args.loss_size {
        let cand = candidates(&g, &args.candidates)?;
        check_budget(binomial(cand.len(), k), args.budget)?;
        combinations(&cand.to_vec(), k)
    } else {
        vec![VertexSet::new()]
    };
    let reports = exec::try_map(mode, &sets, |s| violation_report(&g, &LossSet::new(&g, s.clone())?))?;
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        match args.format {
            Format::Json => out.push_str(&json_line("loss_report", r)),
            Format::Table => {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&render::loss_report_table(r));
            }
        }
    }
    Ok(out)
}

pub fn sweep(args: &SweepArgs, mode: Mode) -> Result<String, Failure> {
    let g = load_graph(&args.source)?;
    let bound = bound_mode(args.bound);
    if let Some(max_size) = args.critical {
        let sets = critical_sets(&g, max_size, bound, args.budget as u128, mode)?;
        return Ok(match args.format {
            Format::Json => json_line(
                "critical_sets",
                &json!({ "bound": bound_name(args.bound), "max_size": max_size, "sets": sets }),
            ),
            Format::Table => render::critical_table(&sets, bound_name(args.bound), max_size),
        });
    }
    let cand = candidates(&g, &args.candidates)?;
    let rows = tolerance_table(&g, &cand, args.max_size, args.budget as u128, mode)?;
    let (semantics, sem_name) = match args.semantics {
        SemanticsArg::BestCase => (Semantics::BestCase, "best-case"),
        SemanticsArg::WorstCase => (Semantics::WorstCase, "worst-case"),
    };
    let tol = tolerance_from_rows(rows.clone(), semantics, bound);
    Ok(match args.format {
        Format::Json => {
            let mut out: String = rows.iter().map(|r| json_line("tolerance_row", r)).collect();
            out.push_str(&json_line(
                "tolerance",
                &json!({
                    "graph": g.fingerprint(),
                    "candidates": cand,
                    "semantics": sem_name,
                    "bound": bound_name(args.bound),
                    "k": tol.k,
                    "witness": tol.witness,
                }),
            ));
            out
        }
        Format::Table => render::sweep_table(&rows, &tol, sem_name, bound_name(args.bound)),
    })
}

pub fn verify(args: &VerifyArgs, mode: Mode) -> Result<String, Failure> {
    let graphs = if let Some(kind) = args.family {
        vec![generate(&FamilySpec::new(kind, args.n)?)]
    } else if let Some(path) = &args.file {
        vec![Graph::parse(&read_file(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?]
    } else {
        random_graphs(args.random.unwrap_or(50), args.n..=args.n, args.seed)
    };
    if let Some(big) = graphs.iter().find(|g| g.n() > ORACLE_QUBIT_CAP) {
        return Err(Error::SizeCapExceeded {
            qubits: big.n(),
            cap: ORACLE_QUBIT_CAP,
        }
        .into());
    }
    let (min_loss, max_loss) = match args.loss_size {
        Some(k) => (k, k),
        None => (0, args.max_loss),
    };
    let opts = VerifyOptions {
        min_loss,
        max_loss,
        loss_cap: args.loss_cap,
        replacement: args.replacement_invariance,
        dense: args.dense,
        mode,
    };
    let rep = verify_graphs(&graphs, &opts)?;
    let out = match args.format {
        Format::Json => json_line(
            "verify_summary",
            &json!({
                "seed": args.seed,
                "passed": rep.passed(),
                "total_checked": rep.total_checked(),
                "max_deviation": rep.max_deviation(),
                "report": rep,
            }),
        ),
        Format::Table => render::verify_table(&rep),
    };
    if rep.passed() {
        Ok(out)
    } else {
        Err(Failure::verification(
            format!(
                "{} checks failed",
                rep.categories().iter().map(|(_, s)| s.failed).sum::<u64>()
            ),
            out,
        ))
    }
}

/// First candidate vertex, in increasing order, that is not adjacent to `root`
/// and whose loss keeps `root` a root of the induced graph.
fn default_hypothesis(g: &Graph, dist: &LossDistribution, root: usize) -> Option<VertexSet> {
    let support: VertexSet = dist.entries().iter().flat_map(|(_, l)| l.vertices().iter()).collect();
    let found = support.iter().find_map(|v| {
        let lost = VertexSet::singleton(v);
        let loss = LossSet::new(g, lost.clone()).ok()?;
        let (induced, map) = loss.induced_graph(g);
        let keeps_root =
            !g.closed_neighborhood(root).ok()?.contains(v) && map.forward(root).is_some_and(|r| induced.is_root(r));
        keeps_root.then_some(lost)
    });
    found
}

pub fn mixture(args: &MixtureArgs) -> Result<String, Failure> {
    let g = load_graph(&args.source)?;
    let dist = match &args.dist {
        Some(path) => LossDistribution::parse(&g, &read_file(path)?)?,
        None => LossDistribution::single_loss(&g, &Rational::one(), &candidates(&g, &args.candidates)?)?,
    };
    let root = match args.root {
        Some(r) => r,
        None => g.roots().iter().next().ok_or(Error::DegenerateGraph)?,
    };
    let hypothesis = match &args.hypothesis {
        Some(list) => check_vertices(&g, list)?,
        None => default_hypothesis(&g, &dist, root)
            .ok_or_else(|| Failure::usage("no loss keeps the root a root; pass --hypothesis"))?,
    };
    let induced_root = args.induced_root.unwrap_or(root);
    let grid: Vec<Rational> = match &args.p {
        Some(list) => list.iter().map(|p| parse_rational(p)).collect::<Result<_, _>>()?,
        None => uniform_grid(args.grid, &parse_rational(&args.p_max)?),
    };
    let full = MixtureOperator::FullGraph { root };
    let induced = MixtureOperator::InducedGraph {
        hypothesis: LossSet::new(&g, hypothesis.clone())?,
        root: induced_root,
    };
    let a = analyze_mixture(&g, &dist, &full, &induced, &grid)?;
    Ok(match args.format {
        Format::Json => {
            let mut out: String = a.samples.iter().map(|s| json_line("mixture_sample", s)).collect();
            let mut summary = serde_json::to_value(&a).expect("analysis serializes");
            if let Some(obj) = summary.as_object_mut() {
                obj.remove("samples");
                obj.insert("graph".into(), g.fingerprint().into());
                obj.insert("root".into(), root.into());
                obj.insert("induced_root".into(), induced_root.into());
                obj.insert(
                    "hypothesis".into(),
                    serde_json::to_value(&hypothesis).expect("set serializes"),
                );
            }
            out.push_str(&json_line("mixture_summary", &summary));
            out
        }
        Format::Table => render::mixture_table(
            &a,
            &format!(
                "graph {}  full operator at root {root}  induced operator for loss {hypothesis} at root {induced_root}",
                g.fingerprint()
            ),
        ),
    })
}

pub fn family_list(format: Format) -> String {
    FamilyKind::ALL
        .iter()
        .map(|k| match format {
            Format::Json => json_line("family", &json!({ "name": k.name(), "description": k.describe() })),
            Format::Table => format!("{:<18} {}\n", k.name(), k.describe()),
        })
        .collect()
}

pub fn family_emit(kind: FamilyKind, n: usize, as_json: bool) -> Result<String, Failure> {
    let g = generate(&FamilySpec::new(kind, n)?);
    Ok(if as_json {
        format!("{}\n", g.to_json())
    } else {
        g.to_edge_list()
    })
}
