use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use ggt_core::cases::{run_case, CaseId, CaseSpec};
use ggt_core::cayley::{BallOptions, CayleyBall};
use ggt_core::coned::{ConedGraph, SubgroupSpec};
use ggt_core::config::{load_hom, load_model, load_presentation};
use ggt_core::freesub::SubgroupAutomaton;
use ggt_core::ggh::{gamma_symbolic, ib_eval, lemma_residual, RegionId, Schedule};
use ggt_core::quasi::{defect_estimate, homogenize, Cochain, PairSamples, Quasimorphism};
use ggt_core::retract::{verify_homomorphism, verify_retraction};
use ggt_core::{Budget, Error, Presentation, Result, Word};

/// Geometric group theory toolkit: surface group balls, coned-off Cayley
/// graphs, quasimorphisms and the transfer map on a region model.
#[derive(Parser)]
#[command(name = "ggt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Output {
    /// Print a JSON document.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Fold a subgroup of a free group and test membership.
    Stallings {
        /// Comma-separated generators.
        #[arg(long, value_delimiter = ',')]
        gens: Vec<Word>,
        /// Rank of the ambient free group (default: letters used).
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        word: Option<Word>,
        #[command(flatten)]
        out: Output,
    },
    /// Scan conjugates of a free subgroup for nontrivial intersections.
    Malnormal {
        #[arg(long, value_delimiter = ',', required_unless_present = "f_infinity")]
        gens: Vec<Word>,
        #[arg(long)]
        rank: Option<usize>,
        /// Use the truncated subgroup generated by a^n b a^-n, |n| <= N.
        #[arg(long, conflicts_with = "gens")]
        f_infinity: Option<usize>,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        cap: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Relative distance from e to an element of ⟨a, b⟩ in π_1(N_g).
    Dhat {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        h: Word,
        /// Letter radius of the ball (default: |h| + 2, clamped to 4..=8).
        #[arg(long)]
        radius: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// The relative ball B_d̂(e, r) in π_1(N_g).
    DhatBall {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        r: usize,
        /// Letter radius of the ball (default: r + 1, at most 8).
        #[arg(long)]
        radius: Option<usize>,
        /// Print the coned-off graph in DOT instead.
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Hyperbolic-embedding evidence for a canned case; exits 1 when a
    /// threshold fails.
    Evidence {
        #[command(flatten)]
        case: CaseArgs,
    },
    /// Run any canned case, including the seeded suites; exits 1 when a
    /// threshold fails.
    Case {
        #[command(flatten)]
        case: CaseArgs,
    },
    /// A Cayley ball of a presentation.
    Ball {
        /// Presentation config file.
        #[arg(long, required_unless_present = "genus")]
        presentation: Option<PathBuf>,
        /// Non-orientable surface genus.
        #[arg(long, conflicts_with = "presentation")]
        genus: Option<usize>,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate a Brooks quasimorphism.
    QmEval {
        #[arg(long)]
        pattern: Word,
        #[arg(long)]
        word: Word,
        /// Also evaluate f(w^N)/N.
        #[arg(long)]
        homogenize: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Lower bound for the defect of a Brooks quasimorphism: exhaustive over
    /// pairs up to the length, or random pairs with a seed.
    QmDefect {
        #[arg(long)]
        pattern: Word,
        #[arg(long)]
        maxlen: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate the transfer of brooks(pattern) on a region model.
    GghEval {
        /// Region model config file.
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        pattern: Word,
        /// One word (non-homogeneous cochain) or two (homogeneous difference).
        #[arg(long, value_delimiter = ',')]
        tuple: Vec<Word>,
        #[command(flatten)]
        out: Output,
    },
    /// Residual bound along an epsilon schedule; exits 1 when it fails.
    GghLemma {
        #[arg(long, default_value = "default")]
        schedule: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value = "ab")]
        pattern: Word,
        #[arg(long, value_delimiter = ',', default_value = "abAB")]
        tuple: Vec<Word>,
        #[command(flatten)]
        out: Output,
    },
    /// Verify a homomorphism, or a retraction against an inclusion; exits 1
    /// unless verified.
    VerifyHom {
        #[arg(long)]
        spec: PathBuf,
        /// Inclusion config; checks that the map retracts onto it.
        #[arg(long)]
        inclusion: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct CaseArgs {
    /// g3 | g4 | g5 | g5plus(g) | f2-in-f4 | f2-in-fn(n) | counterexample |
    /// brooks-suite | ggh-suite
    #[arg(long)]
    case: CaseId,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: Output,
}

fn emit<T: Serialize>(out: Output, value: &T, text: impl FnOnce() -> String) {
    if out.json {
        println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
    } else {
        print!("{}", text());
    }
}

fn ambient_rank(explicit: Option<usize>, words: &[Word]) -> usize {
    explicit.unwrap_or_else(|| words.iter().map(Word::min_rank).max().unwrap_or(1).max(1))
}

fn surface(genus: usize) -> Result<Presentation> {
    Presentation::surface(genus, false)
}

fn ball_options(budget: Budget) -> BallOptions {
    BallOptions {
        budget,
        ..BallOptions::default()
    }
}

fn show(w: &Word) -> String {
    if w.is_identity() {
        "e".into()
    } else {
        w.to_string()
    }
}

fn run(cli: Cli) -> Result<bool> {
    let budget = Budget::from_env()?;
    match cli.command {
        Command::Stallings { gens, rank, word, out } => {
            let rank = ambient_rank(rank, &gens);
            let aut = SubgroupAutomaton::fold(&gens, rank)?;
            let member = word.as_ref().map(|w| aut.contains(w));
            let doc = json!({
                "generators": gens,
                "ambient_rank": rank,
                "states": aut.state_count(),
                "edges": aut.edge_count(),
                "subgroup_rank": aut.subgroup_rank(),
                "word": word,
                "member": member,
            });
            emit(out, &doc, || {
                let mut s = format!(
                    "states {}, edges {}, subgroup rank {}\n",
                    aut.state_count(),
                    aut.edge_count(),
                    aut.subgroup_rank()
                );
                if let (Some(w), Some(m)) = (&word, member) {
                    s += &format!("{} {} the subgroup\n", show(w), if m { "is in" } else { "is not in" });
                }
                s
            });
            Ok(true)
        }
        Command::Malnormal {
            gens,
            rank,
            f_infinity,
            radius,
            cap,
            out,
        } => {
            let aut = match f_infinity {
                Some(n) => SubgroupAutomaton::truncated_f_infinity(n),
                None => SubgroupAutomaton::fold(&gens, ambient_rank(rank, &gens))?,
            };
            let report = aut.malnormality_scan(radius, cap);
            emit(out, &report, || {
                let mut s = format!(
                    "scanned {} elements, {} violations\n",
                    report.scanned,
                    report.violations.len()
                );
                for v in &report.violations {
                    s += &format!("x = {}: {} witnesses, first {}\n", show(&v.x), v.witnesses, v.witness);
                }
                s
            });
            Ok(true)
        }
        Command::Dhat { genus, h, radius, out } => {
            let p = surface(genus)?;
            let radius = radius.unwrap_or((h.len() + 2).clamp(4, 8));
            let ball = CayleyBall::build_with(&p, radius, &ball_options(budget))?;
            let coned = ConedGraph::build(&ball, &SubgroupSpec::surface(genus))?;
            let value = coned.dhat(&h)?;
            let paths = coned.admissible_geodesics(&h, 16)?;
            let paths: Vec<Vec<Word>> = paths.iter().map(|p| p.iter().map(|&v| ball.rep(v)).collect()).collect();
            let doc = json!({
                "genus": genus,
                "h": h,
                "radius": radius,
                "dhat": value,
                "geodesics": paths,
                "certified": coned.is_certified(),
            });
            emit(out, &doc, || {
                let mut s = format!("d̂(e, {}) = {value:?} in the radius {radius} ball\n", show(&h));
                for p in &paths {
                    s += &p.iter().map(show).collect::<Vec<_>>().join(" -> ");
                    s.push('\n');
                }
                s
            });
            Ok(true)
        }
        Command::DhatBall {
            genus,
            r,
            radius,
            dot,
            out,
        } => {
            let p = surface(genus)?;
            let radius = radius.unwrap_or((r + 1).min(8));
            let ball = CayleyBall::build_with(&p, radius, &ball_options(budget))?;
            let coned = ConedGraph::build(&ball, &SubgroupSpec::surface(genus))?.with_horizon(radius.saturating_sub(1));
            if dot {
                print!("{}", coned.to_dot());
                return Ok(true);
            }
            let b = coned.dhat_ball(r);
            emit(out, &b, || {
                let mut s = format!(
                    "|B(e, {r})| = {} (horizon {}, truncated {}, certified {})\n",
                    b.len(),
                    b.horizon,
                    b.truncated,
                    b.certified
                );
                for (w, d) in &b.elements {
                    s += &format!("{} {d}\n", show(w));
                }
                s
            });
            Ok(true)
        }
        Command::Evidence { case } | Command::Case { case } => {
            let mut spec = CaseSpec::new(case.case).with_budget(budget);
            spec.radius = case.radius;
            spec.cap = case.cap;
            spec.seed = case.seed;
            let report = run_case(&spec)?;
            if case.out.json {
                println!("{}", report.to_json());
            } else {
                for c in &report.checks {
                    println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                }
                println!(
                    "{}",
                    if report.passed {
                        "all thresholds pass"
                    } else {
                        "thresholds failed"
                    }
                );
            }
            Ok(report.passed)
        }
        Command::Ball {
            presentation,
            genus,
            radius,
            dot,
            out,
        } => {
            let p = match (presentation, genus) {
                (Some(path), _) => load_presentation(&path)?,
                (None, Some(g)) => surface(g)?,
                (None, None) => return Err(Error::InvalidArgument("need --presentation or --genus".into())),
            };
            let ball = CayleyBall::build_with(&p, radius, &ball_options(budget))?;
            if dot {
                print!("{}", ball.to_dot());
            } else if out.json {
                println!("{}", ball.to_json());
            } else {
                println!("{} vertices, certified {}", ball.len(), ball.is_certified());
            }
            Ok(true)
        }
        Command::QmEval {
            pattern,
            word,
            homogenize: depth,
            out,
        } => {
            let f = Quasimorphism::brooks(pattern)?;
            let value = f.eval(&word);
            let hom = depth.map(|n| homogenize(&f, &word, n)).transpose()?;
            let doc = json!({
                "function": f.to_string(),
                "word": word,
                "value": value.to_string(),
                "homogenized": hom.map(|v| v.to_string()),
                "depth": depth,
            });
            emit(out, &doc, || match hom {
                Some(v) => format!("{value}\n{v}\n"),
                None => format!("{value}\n"),
            });
            Ok(true)
        }
        Command::QmDefect {
            pattern,
            maxlen,
            seed,
            samples,
            out,
        } => {
            let f = Quasimorphism::brooks(pattern)?;
            let s = match seed {
                Some(seed) => PairSamples::Random {
                    rank: 2,
                    max_len: maxlen,
                    count: samples,
                    seed,
                },
                None => PairSamples::Exhaustive {
                    rank: 2,
                    max_len: maxlen,
                },
            };
            let est = defect_estimate(&f, &s);
            let doc = json!({ "function": f.to_string(), "samples": s, "estimate": est });
            emit(out, &doc, || {
                format!(
                    "defect >= {} at ({}, {}) over {} pairs\n",
                    est.value,
                    show(&est.pair.0),
                    show(&est.pair.1),
                    est.pairs
                )
            });
            Ok(true)
        }
        Command::GghEval {
            model,
            pattern,
            tuple,
            out,
        } => {
            let m = load_model(&model)?;
            let f = Quasimorphism::brooks(pattern)?;
            let c = match tuple.len() {
                1 => Cochain::quasimorphism(f),
                2 => Cochain::quasimorphism_difference(f),
                n => return Err(Error::ArityMismatch { expected: 1, got: n }),
            };
            let value = ib_eval(&m, &c, &tuple)?;
            let mut images = Vec::new();
            for id in RegionId::ALL {
                let im = tuple
                    .iter()
                    .map(|w| gamma_symbolic(&m, w, id))
                    .collect::<Result<Vec<_>>>()?;
                images.push(json!({ "region": id, "measure": m.measure(id), "images": im }));
            }
            let doc = json!({ "cochain": c.describe(), "tuple": tuple, "value": value, "regions": images });
            emit(out, &doc, || format!("{value}\n"));
            Ok(true)
        }
        Command::GghLemma {
            schedule,
            steps,
            pattern,
            tuple,
            out,
        } => {
            if schedule != "default" {
                return Err(Error::InvalidArgument(format!("unknown schedule {schedule:?}")));
            }
            let s = Schedule::standard(steps)?;
            let c = match tuple.len() {
                1 => Cochain::quasimorphism(Quasimorphism::brooks(pattern)?),
                n => return Err(Error::ArityMismatch { expected: 1, got: n }),
            };
            let report = lemma_residual(&s, &c, &tuple)?;
            emit(out, &report, || {
                let mut s = String::new();
                for st in &report.steps {
                    s += &format!(
                        "{} residual {:.6e} bound {:.6e} {}\n",
                        st.index, st.residual, st.bound, st.holds
                    );
                }
                s += &format!("decay {:?}\n", report.decay);
                s
            });
            Ok(report.all_hold)
        }
        Command::VerifyHom { spec, inclusion, out } => {
            let h = load_hom(&spec)?;
            match inclusion {
                Some(path) => {
                    let i = load_hom(&path)?;
                    let v = verify_retraction(&h, &i, &budget)?;
                    emit(out, &v, || format!("{v:?}\n"));
                    Ok(v.is_verified())
                }
                None => {
                    let v = verify_homomorphism(&h, &budget)?;
                    emit(out, &v, || format!("{v:?}\n"));
                    Ok(v.is_verified())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
