use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polycover::chord_graph::{all_diagrams, hamiltonian_path, intersection_graph, ChordDiagram, Graph};
use polycover::cover_solver::{solve_cover, verify_cover, CoverWitness, Polyline};
use polycover::curve_simplify::{
    build_dcs_instance, check_cone_structure, directed_hausdorff_leq, equivalence_nonzero_delta, half_safe_delta,
    PairCategory,
};
use polycover::exact_geom::Rational;
use polycover::needle_reduce::{build_cover_instance, CoverInstance};
use polycover::pipeline::run_pipeline;
use polycover::ray_embed::{embed, factorial, RayEmbedding};
use polycover::render::{render_embedding, render_instance};

#[derive(Parser)]
#[command(
    name = "polycover",
    version,
    about = "Circle graphs to ray graphs to polyline cover and curve simplification"
)]
struct Cli {
    /// Worker threads for internal parallelism (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Source {
    /// Chord diagram as endpoint labels, e.g. "1 2 1 2".
    #[arg(long)]
    diagram: Option<String>,
    /// Random diagram with this many chords (with --seed).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// 1-based endpoint where the circle is cut.
    #[arg(long, default_value_t = 1)]
    start: usize,
}

#[derive(Args, Clone)]
struct Out {
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factorial-curve ray embedding of a diagram.
    Embed {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
    /// Segment polyline cover instance from a diagram or an embedding file.
    ReduceCover {
        #[command(flatten)]
        src: Source,
        /// Embedding file instead of a diagram.
        #[arg(long)]
        embedding: Option<PathBuf>,
        /// Link budget (default 2n + 3).
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Curve simplification instance from a cover instance.
    ReduceDcs {
        #[command(flatten)]
        src: Source,
        /// Cover instance file instead of a diagram.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, default_value = "0")]
        delta: String,
        #[command(flatten)]
        out: Out,
    },
    /// Hamiltonian path of a graph file or of a diagram's circle graph.
    SolveHp {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Minimum-link cover witness.
    SolveCover {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        out: Out,
    },
    /// Checks a polyline or witness file against a cover instance.
    VerifyCover {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Decides H(P, Q) ≤ delta for two polyline files.
    Hausdorff {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        delta: String,
    },
    /// Prints the tolerance bound 3/(4·n!) for n needles.
    DeltaBound {
        #[arg(long)]
        n: usize,
    },
    /// Tail-tail enumeration for one instance or every diagram up to --max-n.
    CheckCones {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Tolerance (default 3/(8·n!)).
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        max_n: Option<usize>,
        /// Also compare verdicts at 0 and at the tolerance.
        #[arg(long)]
        equivalence: bool,
        #[command(flatten)]
        out: Out,
    },
    /// SVG of an embedding, or of a cover instance with optional witness.
    Render {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Diagram → embedding → reductions → solvers → checks.
    Pipeline {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Out,
    },
}

/// Outcome of a subcommand that completed without an input error.
enum Verdict {
    Found,
    None,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_file<T: std::str::FromStr>(path: &Path) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    read(path)?
        .parse::<T>()
        .with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &Out, text: &str) -> Result<()> {
    match &out.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn rational(s: &str) -> Result<Rational> {
    s.parse().with_context(|| format!("bad rational {s:?}"))
}

impl Source {
    fn diagram(&self) -> Result<ChordDiagram> {
        match (&self.diagram, self.n) {
            (Some(d), _) => Ok(d.parse()?),
            (None, Some(n)) => {
                let mut order: Vec<usize> = (1..=n).flat_map(|l| [l, l]).collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(self.seed));
                Ok(ChordDiagram::new(order)?)
            }
            (None, None) => bail!("give --diagram or --n"),
        }
    }

    fn embedding(&self) -> Result<RayEmbedding> {
        Ok(embed(&self.diagram()?, self.start)?)
    }

    fn instance(&self, file: Option<&PathBuf>) -> Result<CoverInstance> {
        match file {
            Some(p) => parse_file(p),
            None => Ok(build_cover_instance(&self.embedding()?)?),
        }
    }
}

fn run(cli: Cli) -> Result<Verdict> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match cli.cmd {
        Cmd::Embed { src, out } => {
            emit(&out, &src.embedding()?.to_string())?;
            Ok(Verdict::Found)
        }
        Cmd::ReduceCover { src, embedding, k, out } => {
            let e = match embedding {
                Some(p) => parse_file(&p)?,
                None => src.embedding()?,
            };
            let mut ci = build_cover_instance(&e)?;
            if let Some(k) = k {
                ci = ci.with_k(k);
            }
            emit(&out, &ci.to_string())?;
            Ok(Verdict::Found)
        }
        Cmd::ReduceDcs {
            src,
            instance,
            delta,
            out,
        } => {
            let ci = src.instance(instance.as_ref())?;
            let si = build_dcs_instance(&ci, &rational(&delta)?)?;
            emit(&out, &si.to_string())?;
            Ok(Verdict::Found)
        }
        Cmd::SolveHp { src, graph, out } => {
            let g: Graph = match graph {
                Some(p) => parse_file(&p)?,
                None => intersection_graph(&src.diagram()?),
            };
            match hamiltonian_path(&g)? {
                Some(p) => {
                    let line: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                    emit(&out, &format!("{}\n", line.join(" ")))?;
                    Ok(Verdict::Found)
                }
                None => {
                    emit(&out, "none\n")?;
                    Ok(Verdict::None)
                }
            }
        }
        Cmd::SolveCover { src, instance, k, out } => {
            let mut ci = src.instance(instance.as_ref())?;
            if let Some(k) = k {
                ci = ci.with_k(k);
            }
            match solve_cover(&ci)? {
                Some(w) => {
                    emit(&out, &w.to_string())?;
                    Ok(Verdict::Found)
                }
                None => {
                    emit(&out, "none\n")?;
                    Ok(Verdict::None)
                }
            }
        }
        Cmd::VerifyCover { instance, witness } => {
            let ci: CoverInstance = parse_file(&instance)?;
            let text = read(&witness)?;
            let poly = match text.parse::<CoverWitness>() {
                Ok(w) => w.polyline,
                Err(_) => text
                    .parse::<Polyline>()
                    .with_context(|| format!("parsing {}", witness.display()))?,
            };
            let ok = verify_cover(&ci, &poly);
            println!("{}", if ok { "valid" } else { "invalid" });
            Ok(if ok { Verdict::Found } else { Verdict::None })
        }
        Cmd::Hausdorff { p, q, delta } => {
            let (p, q): (Polyline, Polyline) = (parse_file(&p)?, parse_file(&q)?);
            let d = rational(&delta)?;
            if d.signum() < 0 {
                bail!("delta must be non-negative");
            }
            let ok = directed_hausdorff_leq(&p, &q, &d);
            println!("{ok}");
            Ok(if ok { Verdict::Found } else { Verdict::None })
        }
        Cmd::DeltaBound { n } => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            println!("3/{}", factorial(n as u64) * 4);
            Ok(Verdict::Found)
        }
        Cmd::CheckCones {
            src,
            instance,
            delta,
            max_n,
            equivalence,
            out,
        } => check_cones(&src, instance.as_ref(), delta.as_deref(), max_n, equivalence, &out),
        Cmd::Render {
            src,
            instance,
            witness,
            out,
        } => {
            let svg = match instance {
                Some(p) => {
                    let ci: CoverInstance = parse_file(&p)?;
                    let w = match witness {
                        Some(w) => {
                            let text = read(&w)?;
                            Some(match text.parse::<CoverWitness>() {
                                Ok(cw) => cw.polyline,
                                Err(_) => text.parse::<Polyline>()?,
                            })
                        }
                        None => None,
                    };
                    render_instance(&ci, w.as_ref())
                }
                None => render_embedding(&src.embedding()?),
            };
            emit(&out, &svg)?;
            Ok(Verdict::Found)
        }
        Cmd::Pipeline { src, out } => {
            let run = run_pipeline(&src.diagram()?, src.start)?;
            emit(&out, &run.to_string())?;
            if !run.checks_pass() || !run.chain_intact() {
                bail!("pipeline stages disagree");
            }
            Ok(if run.witness.is_some() {
                Verdict::Found
            } else {
                Verdict::None
            })
        }
    }
}

fn check_cones(
    src: &Source,
    instance: Option<&PathBuf>,
    delta: Option<&str>,
    max_n: Option<usize>,
    equivalence: bool,
    out: &Out,
) -> Result<Verdict> {
    let mut text = String::new();
    let mut clean = true;
    let one = |ci: &CoverInstance, text: &mut String| -> Result<bool> {
        let d = match delta {
            Some(s) => rational(s)?,
            None => half_safe_delta(ci)?,
        };
        let rep = check_cone_structure(ci, &d)?;
        text.push_str(&rep.to_string());
        if equivalence {
            text.push_str(&equivalence_nonzero_delta(ci)?.to_string());
        }
        Ok(rep.ok())
    };
    match max_n {
        Some(max) => {
            for n in 1..=max {
                let mut cross = 0;
                let mut failing = 0;
                let diagrams = all_diagrams(n);
                for d in &diagrams {
                    let ci = build_cover_instance(&embed(d, 1)?)?;
                    let dd = match delta {
                        Some(s) => rational(s)?,
                        None => half_safe_delta(&ci)?,
                    };
                    let rep = check_cone_structure(&ci, &dd)?;
                    let c = rep.count(PairCategory::CrossNeedle);
                    cross += c;
                    failing += (c > 0) as usize;
                }
                clean &= cross == 0;
                text.push_str(&format!(
                    "n={n} diagrams={} cross-needle violations={cross} diagrams with violations={failing}\n",
                    diagrams.len()
                ));
            }
        }
        None => clean = one(&src.instance(instance)?, &mut text)?,
    }
    emit(out, &text)?;
    Ok(if clean { Verdict::Found } else { Verdict::None })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Verdict::Found) => ExitCode::SUCCESS,
        Ok(Verdict::None) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
