use std::fmt::Write as _;
use std::io::Read as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use rayon::prelude::*;
use shmat::analysis::{self, discrepancy_csv, discrepancy_table};
use shmat::graph::{edge_count, export_graph, ExportFormat};
use shmat::search::RvsTrace;
use shmat::{
    build_ortho_graph, exhaustive_search, find_cliques, osa_construct, rvs_construct,
    AcceptanceRule, CliqueBudget, Error, ExhaustiveStrategy, SearchBudget, ShMatrix, SignMatrix,
    ThresholdSchedule, VectorFamily,
};

use crate::args::*;

/// Everything a command produces. `main` writes it out and digests it.
#[derive(Default)]
pub struct Output {
    pub stdout: Vec<u8>,
    pub stderr: String,
    pub files: Vec<(PathBuf, Vec<u8>)>,
    pub exit: i32,
    /// Digest input when stdout and files carry non-deterministic parts.
    pub digest_override: Option<Vec<u8>>,
}

impl Output {
    fn text(s: String) -> Self {
        Self {
            stdout: s.into_bytes(),
            ..Self::default()
        }
    }

    fn emit(&mut self, path: &Option<PathBuf>, bytes: Vec<u8>) {
        match path {
            Some(p) => self.files.push((p.clone(), bytes)),
            None => self.stdout.extend(bytes),
        }
    }
}

fn order_to_k(order: usize) -> anyhow::Result<usize> {
    if order == 0 || !order.is_multiple_of(4) {
        bail!(Error::BadOrder(order));
    }
    Ok(order / 4)
}

fn budget(a: &SearchArgs, seed: u64) -> anyhow::Result<SearchBudget> {
    Ok(SearchBudget::new(a.max_iter, a.restarts, seed)?)
}

fn schedule(a: &SearchArgs) -> anyhow::Result<ThresholdSchedule> {
    let s: ThresholdSchedule = a.schedule.parse()?;
    Ok(s.with_total_steps(a.max_iter)?)
}

fn acceptance(a: &SearchArgs) -> AcceptanceRule {
    match a.acceptance {
        Acceptance::Threshold => AcceptanceRule::Threshold,
        Acceptance::Metropolis => AcceptanceRule::Metropolis {
            temperature_scale: a.temperature_scale,
        },
    }
}

pub fn enumerate(a: &EnumerateArgs) -> anyhow::Result<Output> {
    let kind = a.family.parse()?;
    let family = VectorFamily::new(kind, a.k)?;
    if a.count {
        return Ok(Output::text(format!("{}\n", family.count())));
    }
    let mut out = String::new();
    for v in family.members(a.cap)? {
        writeln!(out, "{v}").unwrap();
    }
    Ok(Output::text(out))
}

/// One successful construction.
struct Built {
    matrix: ShMatrix,
    iterations: u64,
    restart: u32,
    seed: u64,
    trace: Option<RvsTrace>,
}

fn build_one(method: Method, k: usize, s: &SearchArgs, seed: u64) -> anyhow::Result<Built> {
    let b = budget(s, seed)?;
    match method {
        Method::Rvs => {
            let out = rvs_construct(k, &b)?;
            Ok(Built {
                iterations: out.trace.total_iterations(),
                restart: out.trace.restart,
                seed: out.trace.seed,
                trace: Some(out.trace),
                matrix: out.matrix,
            })
        }
        Method::Osa => {
            let out = osa_construct(k, &schedule(s)?, acceptance(s), &b)?;
            Ok(Built {
                matrix: out.matrix,
                iterations: out.steps,
                restart: out.restart,
                seed: out.seed,
                trace: None,
            })
        }
        Method::Exhaustive => {
            let out = exhaustive_search(k, ExhaustiveStrategy::Auto, &b)?;
            let matrix = out
                .matrices
                .into_iter()
                .next()
                .ok_or_else(|| anyhow!("no SH matrix of order {}", 4 * k))?;
            Ok(Built {
                matrix,
                iterations: 0,
                restart: 0,
                seed,
                trace: None,
            })
        }
    }
}

pub fn construct(a: &ConstructArgs) -> anyhow::Result<Output> {
    let k = order_to_k(a.order)?;
    schedule(&a.search)?;
    let mut out = Output::default();
    if a.method == Method::Exhaustive {
        let found = exhaustive_search(
            k,
            ExhaustiveStrategy::Auto,
            &budget(&a.search, a.search.seed)?,
        )?;
        let first = found
            .matrices
            .first()
            .ok_or_else(|| anyhow!("no SH matrix of order {}", a.order))?;
        if let Some(dir) = &a.out_dir {
            for (i, m) in found.matrices.iter().enumerate() {
                out.files
                    .push((dir.join(format!("{i:06}.txt")), m.to_text().into_bytes()));
            }
        }
        out.emit(&a.out, first.to_text().into_bytes());
        out.stderr = format!(
            "method exhaustive order {} matrices {}\n",
            a.order,
            found.matrices.len()
        );
        return Ok(out);
    }
    if a.out_dir.is_some() {
        bail!("--out-dir applies to exhaustive search only");
    }
    let built = build_one(a.method, k, &a.search, a.search.seed)?;
    if let Some(path) = &a.trace_csv {
        let trace = built
            .trace
            .as_ref()
            .ok_or_else(|| anyhow!("--trace-csv applies to rvs only"))?;
        out.files.push((path.clone(), trace.to_csv().into_bytes()));
    }
    out.emit(&a.out, built.matrix.to_text().into_bytes());
    out.stderr = format!(
        "method {} order {} restart {} seed {} iterations {}\n",
        a.method.name(),
        a.order,
        built.restart,
        built.seed,
        built.iterations
    );
    Ok(out)
}

pub const EXIT_NOT_HADAMARD: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BAD_ORDER: i32 = 3;

pub fn verify(a: &VerifyArgs) -> anyhow::Result<Output> {
    let text = if a.path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(&a.path).with_context(|| format!("reading {}", a.path.display()))?
    };
    let m = match SignMatrix::parse_text(&text) {
        Ok(m) => m,
        Err(e @ Error::Parse { .. }) => {
            return Ok(Output {
                stderr: format!("{e}\n"),
                exit: EXIT_PARSE,
                ..Output::default()
            })
        }
        Err(e) => return Err(e.into()),
    };
    let order = m.order();
    if order % 4 != 0 {
        return Ok(Output {
            stdout: format!("order: {order}\n").into_bytes(),
            stderr: format!(
                "order {order} is not a multiple of 4; a Hadamard matrix of order m > 2 has m = 4k\n"
            ),
            exit: EXIT_BAD_ORDER,
            ..Output::default()
        });
    }
    let hadamard = m.is_hadamard();
    let energy = m.gram().off_diagonal_abs_sum();
    let yn = |b: bool| if b { "yes" } else { "no" };
    let report = format!(
        "order: {order}\nseminormalized: {}\nnormalized: {}\nhadamard: {}\nenergy: {energy}\n",
        yn(m.is_seminormalized()),
        yn(m.is_normalized()),
        yn(hadamard),
    );
    Ok(Output {
        stdout: report.into_bytes(),
        exit: if hadamard { 0 } else { EXIT_NOT_HADAMARD },
        ..Output::default()
    })
}

pub fn graph(a: &GraphArgs) -> anyhow::Result<Output> {
    let g = build_ortho_graph(a.k)?;
    let mut out = Output::default();
    let mut summary = format!(
        "vertices: {}\nedges: {}\ndegree: {}\n",
        g.vertex_count(),
        edge_count(&g),
        g.regular_degree()
            .map_or("irregular".to_string(), |d| d.to_string())
    );
    let cliques = if a.cliques {
        let c = find_cliques(
            &g,
            4 * a.k - 1,
            CliqueBudget {
                max_cliques: a.max_cliques,
            },
        )?;
        writeln!(summary, "cliques: {}", c.len()).unwrap();
        Some(c)
    } else {
        None
    };
    match &a.export {
        Some(fmt) => {
            let fmt: ExportFormat = fmt.parse()?;
            out.emit(&a.out, export_graph(&g, fmt));
            out.stderr = summary;
        }
        None => {
            out.stdout.extend(summary.into_bytes());
            for c in cliques.iter().flatten() {
                let line: Vec<String> = c.iter().map(u32::to_string).collect();
                out.stdout
                    .extend(format!("{}\n", line.join(" ")).into_bytes());
            }
        }
    }
    Ok(out)
}

const ANALYZE_HEADER: &str = "# shmat analyze v1\n\
k,order,n_v,n_o,n_qu,n_q,n_d,n_nh,n_sh,p_perp,log2_p_perp,p_perp_lower,p_perp_upper,\
log2_p_h_given_q,log2_p_h_given_q_lower,log2_p_h_given_q_upper,\
log2_expected,log2_expected_lower,log2_expected_upper,\
log2_expected_lower_unsimplified,log2_expected_upper_unsimplified\n";

pub fn analyze(a: &AnalyzeArgs) -> anyhow::Result<Output> {
    let ks = match (a.k, &a.k_range) {
        (Some(k), _) => vec![k],
        (None, Some(r)) => parse_range(r, 1)?,
        (None, None) if a.discrepancy => (1..=8).collect(),
        (None, None) => bail!("give --k or --k-range"),
    };
    anyhow::ensure!(ks[0] >= 1, "k must be at least 1");
    let mut text = String::new();
    let mut csv = String::from(ANALYZE_HEADER);
    for &k in &ks {
        let c = analysis::count_report(k)?;
        let p = shmat::analysis::probability_report::<f64>(k);
        let opt =
            |n: &Option<shmat::Count>| n.as_ref().map(ToString::to_string).unwrap_or_default();
        if !a.discrepancy {
            writeln!(
                text,
                "k {k} order {}\n  N_V {}\n  N_O {}\n  N_QU {}\n  N_D {}\n  N_SH {}\n  p_perp {} (2^{:.4}), bounds [{:.6}, {:.6}]\n  log2 p_H|Q {:.4}, bounds [{:.4}, {:.4}]\n  log2 E[H] {:.4}, bounds [{:.4}, {:.4}]",
                4 * k,
                c.n_v,
                c.n_o,
                c.n_qu,
                c.n_d,
                c.n_sh.as_ref().map_or("unknown".into(), ToString::to_string),
                p.p_perp,
                p.p_perp_log2,
                p.p_perp_bounds.0,
                p.p_perp_bounds.1,
                p.p_h_given_q_log2,
                p.p_h_given_q_bounds_log2.0,
                p.p_h_given_q_bounds_log2.1,
                p.expected_h_log2,
                p.expected_h_log2_bounds.0,
                p.expected_h_log2_bounds.1,
            )
            .unwrap();
        }
        writeln!(
            csv,
            "{k},{},{},{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            4 * k,
            c.n_v,
            c.n_o,
            c.n_qu,
            c.n_q,
            c.n_d,
            opt(&c.n_nh),
            opt(&c.n_sh),
            p.p_perp,
            p.p_perp_log2,
            p.p_perp_bounds.0,
            p.p_perp_bounds.1,
            p.p_h_given_q_log2,
            p.p_h_given_q_bounds_log2.0,
            p.p_h_given_q_bounds_log2.1,
            p.expected_h_log2,
            p.expected_h_log2_bounds.0,
            p.expected_h_log2_bounds.1,
            p.unsimplified.expected_h.lower,
            p.unsimplified.expected_h.upper,
        )
        .unwrap();
    }
    let mut out = Output::default();
    if a.discrepancy {
        let k_max = *ks.last().unwrap();
        let rows = discrepancy_table::<f64>(k_max);
        let rows: Vec<_> = rows.into_iter().filter(|r| ks.contains(&r.k)).collect();
        text = discrepancy_csv(&rows);
    }
    out.stdout = text.into_bytes();
    if let Some(path) = &a.csv {
        out.files.push((path.clone(), csv.into_bytes()));
    }
    Ok(out)
}

const BENCH_HEADER: &str =
    "# shmat bench v1\nkind,method,order,seed,status,restart,iterations,wall_ms,stage_iterations\n";

struct Run {
    order: usize,
    seed: u64,
    result: Result<Built, String>,
    wall_ms: f64,
}

pub fn bench(a: &BenchArgs) -> anyhow::Result<Output> {
    let orders = parse_range(&a.orders, 4)?;
    for &o in &orders {
        order_to_k(o)?;
    }
    schedule(&a.search)?;
    let jobs: Vec<(usize, u64)> = orders
        .iter()
        .flat_map(|&o| (0..a.seeds).map(move |i| (o, a.search.seed.wrapping_add(i))))
        .collect();
    let runs: Vec<Run> = jobs
        .par_iter()
        .map(|&(order, seed)| {
            let t = Instant::now();
            let result = build_one(a.method, order / 4, &a.search, seed).map_err(|e| e.to_string());
            Run {
                order,
                seed,
                result,
                wall_ms: t.elapsed().as_secs_f64() * 1e3,
            }
        })
        .collect();

    let render = |timing: bool| -> String {
        let wall = |ms: f64| {
            if timing {
                format!("{ms:.3}")
            } else {
                String::new()
            }
        };
        let mut csv = String::from(BENCH_HEADER);
        for r in &runs {
            let (status, restart, iters, stages) = match &r.result {
                Ok(b) => (
                    "ok",
                    b.restart.to_string(),
                    b.iterations.to_string(),
                    b.trace.as_ref().map(stage_list).unwrap_or_default(),
                ),
                Err(_) => ("failed", String::new(), String::new(), String::new()),
            };
            writeln!(
                csv,
                "run,{},{},{},{status},{restart},{iters},{},{stages}",
                a.method.name(),
                r.order,
                r.seed,
                wall(r.wall_ms)
            )
            .unwrap();
        }
        for &order in &orders {
            let group: Vec<&Run> = runs.iter().filter(|r| r.order == order).collect();
            let ok: Vec<&Built> = group
                .iter()
                .filter_map(|r| r.result.as_ref().ok())
                .collect();
            let mean = |xs: &[f64]| {
                if xs.is_empty() {
                    f64::NAN
                } else {
                    xs.iter().sum::<f64>() / xs.len() as f64
                }
            };
            let iters: Vec<f64> = ok.iter().map(|b| b.iterations as f64).collect();
            let walls: Vec<f64> = group.iter().map(|r| r.wall_ms).collect();
            let traces: Vec<&RvsTrace> = ok.iter().filter_map(|b| b.trace.as_ref()).collect();
            let stage_means = if traces.is_empty() {
                String::new()
            } else {
                let n = traces[0].stages.len();
                (0..n)
                    .map(|i| {
                        format!(
                            "{:.2}",
                            mean(
                                &traces
                                    .iter()
                                    .map(|t| t.stages[i].1 as f64)
                                    .collect::<Vec<_>>()
                            )
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(";")
            };
            writeln!(
                csv,
                "mean,{},{order},,{}/{},,{:.2},{},{stage_means}",
                a.method.name(),
                ok.len(),
                group.len(),
                mean(&iters),
                wall(mean(&walls)),
            )
            .unwrap();
        }
        csv
    };

    let mut out = Output {
        digest_override: Some(render(false).into_bytes()),
        ..Output::default()
    };
    out.emit(&a.csv, render(!a.no_timing).into_bytes());
    Ok(out)
}

fn stage_list(t: &RvsTrace) -> String {
    t.stages
        .iter()
        .map(|(_, n)| n.to_string())
        .collect::<Vec<_>>()
        .join(";")
}
