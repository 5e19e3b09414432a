use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gkm_core::catalog::{build_cp, build_hp, build_k33_family, build_op2, build_sphere};
use gkm_core::classifier::{check_face_sizes, classify, ClassifyFlags};
use gkm_core::cohomology::{betti_numbers, integer_precondition, ordinary_pontryagin};
use gkm_core::graph::validate;
use gkm_core::io::{export_dot, parse_weights, read_graph, to_json, Report, Status};
use gkm_core::lattice::Weight;
use gkm_core::rootsys::{homogeneous_gkm, weyl_bound_from_env, RootSystemPair};
use gkm_core::{GkmError, GkmGraph, WeightClass};

#[derive(Parser)]
#[command(name = "gkm", version, about = "GKM graphs: validation, cohomology, and classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check k-independence of the weights at every vertex.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// List the two-dimensional faces and check they have 2 or 3 vertices.
    Faces {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Betti numbers from the equivariant cohomology.
    Betti {
        file: PathBuf,
        /// Highest polynomial degree (default: half_dim).
        #[arg(long)]
        cutoff: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Equivariant and ordinary Pontryagin classes.
    Pontryagin {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Coprimality of the weights at every vertex.
    CheckInteger {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Identify the model space of the graph.
    Classify {
        file: PathBuf,
        #[arg(long)]
        gkm4: bool,
        #[arg(long)]
        almost_complex: bool,
        #[arg(long)]
        non_orientable: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Emit a model graph as JSON.
    Catalog {
        #[arg(value_enum)]
        kind: CatalogKind,
        #[arg(long)]
        n: Option<usize>,
        /// JSON array of integer weight vectors.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// k33: weights from the homogeneous space instead of a bare shape.
        #[arg(long)]
        labeled: bool,
        /// k33: edges per vertex pair (1, 2 or 4).
        #[arg(long, default_value_t = 1)]
        mult: usize,
        #[command(flatten)]
        output: Output,
    },
    /// GKM graph of G/K from root systems, e.g. `--g F4 --k B4`.
    Homogeneous {
        #[arg(long)]
        g: String,
        #[arg(long)]
        k: String,
        #[command(flatten)]
        output: Output,
    },
    /// DOT rendering of a graph.
    ExportDot {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogKind {
    Sphere,
    Cp,
    Hp,
    Op2,
    K33,
}

fn emit(text: &str, out: &Option<PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(report: &Report, output: &Output) -> anyhow::Result<ExitCode> {
    let text = if output.json { report.to_json() } else { report.render_text() };
    emit(&text, &output.out)?;
    Ok(match report.status {
        Status::Ok => ExitCode::SUCCESS,
        _ => ExitCode::from(2),
    })
}

fn load(path: &Path) -> anyhow::Result<GkmGraph> {
    Ok(read_graph(path)?)
}

fn units(r: usize, count: usize) -> Vec<Weight> {
    (0..count).map(|i| Weight::unit(r, i)).collect()
}

fn catalog_graph(kind: CatalogKind, n: Option<usize>, weights: &Option<PathBuf>, labeled: bool, mult: usize) -> anyhow::Result<GkmGraph> {
    let given = match weights {
        Some(p) => Some(parse_weights(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?),
        None => None,
    };
    let need_n = || n.context("--n or --weights is required");
    Ok(match kind {
        CatalogKind::Sphere => {
            let ws = match given {
                Some(w) => w,
                None => units(need_n()?, need_n()?),
            };
            let classes = ws.into_iter().map(WeightClass::try_from).collect::<Result<Vec<_>, _>>()?;
            build_sphere(&classes)?
        }
        CatalogKind::Cp => {
            let ws = match given {
                Some(w) => w,
                None => {
                    let n = need_n()?;
                    std::iter::once(Weight::zero(n)).chain(units(n, n)).collect()
                }
            };
            build_cp(&ws)?
        }
        CatalogKind::Hp => {
            let ws = match given {
                Some(w) => w,
                None => {
                    let n = need_n()?;
                    units(n + 1, n + 1)
                }
            };
            build_hp(&ws)?
        }
        CatalogKind::Op2 => build_op2(),
        CatalogKind::K33 => {
            if labeled {
                let (g, k) = match mult {
                    1 => ("A2", "T"),
                    2 => ("C3", "C1xC1xC1"),
                    4 => ("F4", "D4"),
                    m => bail!("no labeled K33 graph with {m} edges per pair"),
                };
                homogeneous_gkm(&RootSystemPair::parse(g, k)?, weyl_bound_from_env())?
            } else {
                build_k33_family(mult)?
            }
        }
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Validate { file, k, output } => {
            let g = load(&file)?;
            let r = validate(&g, k)?;
            let findings = r
                .vertices
                .iter()
                .map(|v| match &v.dependent {
                    None => format!("{}: degree {}, {k}-independent", v.vertex, v.degree),
                    Some(ws) => format!(
                        "{}: dependent weights {}",
                        v.vertex,
                        ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")
                    ),
                })
                .collect();
            let status = if r.pass { Status::Ok } else { Status::Failed };
            emit_report(&Report::new(status, findings, &r), &output)
        }
        Command::Faces { file, output } => {
            let g = load(&file)?;
            let r = check_face_sizes(&g)?;
            let mut findings = vec![format!("{} biangles, {} triangles", r.biangles, r.triangles)];
            findings.extend(r.failures.iter().map(|f| format!("face on {} has {} vertices", f.vertices.join(" "), f.size)));
            let status = if r.pass { Status::Ok } else { Status::Failed };
            emit_report(&Report::new(status, findings, &r), &output)
        }
        Command::Betti { file, cutoff, output } => {
            let g = load(&file)?;
            let cutoff = cutoff.unwrap_or(g.half_dim());
            match betti_numbers(&g, cutoff) {
                Ok(b) => {
                    let findings = b.dims.iter().enumerate().map(|(d, x)| format!("b_{} = {x}", 2 * d)).collect();
                    emit_report(&Report::new(Status::Ok, findings, json!({"cutoff": cutoff, "betti": b.dims})), &output)
                }
                Err(e @ GkmError::NotFormal(_)) => {
                    emit_report(&Report::new(Status::Failed, vec![e.to_string()], json!({"error": e.to_string()})), &output)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Pontryagin { file, output } => {
            let g = load(&file)?;
            let p = ordinary_pontryagin(&g)?;
            let equivariant: Vec<_> = p
                .equivariant
                .components
                .iter()
                .enumerate()
                .map(|(v, poly)| json!({"vertex": g.vertex_name(v), "class": poly.to_string()}))
                .collect();
            let mut findings: Vec<String> = p
                .equivariant
                .components
                .iter()
                .enumerate()
                .map(|(v, poly)| format!("{}: {poly}", g.vertex_name(v)))
                .collect();
            findings.extend(
                p.ordinary.iter().map(|c| format!("p_{} in H^{} (dim {}): [{}]", c.j, c.degree, c.quotient_dim, c.coordinates.join(", "))),
            );
            let body = json!({"equivariant": equivariant, "ordinary": p.ordinary});
            emit_report(&Report::new(Status::Ok, findings, body), &output)
        }
        Command::CheckInteger { file, output } => {
            let g = load(&file)?;
            let r = integer_precondition(&g)?;
            let mut findings: Vec<String> = r
                .vertices
                .iter()
                .map(|v| {
                    let mut s = format!(
                        "{}: {}{}",
                        v.vertex,
                        if v.coprime { "coprime" } else { "NOT coprime" },
                        if v.primitive { ", primitive" } else { "" }
                    );
                    for (a, b) in &v.offending {
                        s.push_str(&format!(" [{a}, {b}]"));
                    }
                    s
                })
                .collect();
            findings.push(format!("all weights primitive: {}", r.all_primitive));
            let status = if r.pass { Status::Ok } else { Status::Failed };
            emit_report(&Report::new(status, findings, &r), &output)
        }
        Command::Classify { file, gkm4, almost_complex, non_orientable, output } => {
            let g = load(&file)?;
            let r = classify(&g, ClassifyFlags { gkm4, almost_complex, orientable: !non_orientable })?;
            let mut findings = vec![format!("verdict: {}", r.cross)];
            findings.extend(r.trace.iter().map(|t| {
                format!("[{}] {}: {}", if t.passed { "pass" } else { "FAIL" }, t.lemma.description(), t.detail)
            }));
            let status = if r.cross.is_realizable() { Status::Ok } else { Status::NotRealizable };
            emit_report(&Report::new(status, findings, &r), &output)
        }
        Command::Catalog { kind, n, weights, labeled, mult, output } => {
            let g = catalog_graph(kind, n, &weights, labeled, mult)?;
            emit(&to_json(&g), &output.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Homogeneous { g, k, output } => {
            let graph = homogeneous_gkm(&RootSystemPair::parse(&g, &k)?, weyl_bound_from_env())?;
            emit(&to_json(&graph), &output.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportDot { file, output } => {
            let g = load(&file)?;
            emit(&export_dot(&g), &output.out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
