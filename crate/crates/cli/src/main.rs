//! `fnlab`: command-line front end for the finite-space workbench.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use fnlab::game::{exhaustive_win, make_adversary, play, sigma_strategy, AdversaryKind};
use fnlab::quotient::{build_quotient, is_wcr, separation_report, EmptyTargets, WcrOptions};
use fnlab::topo::{FiniteSpace, PointSet, Role, SetFamily};
use fnlab::transfer::{representatives_agree, transfer_witness};
use fnlab::witness::{developable_fn, search_fns_within, verify_fn, verify_fns, WitnessVerdict};
use fnlab::workbench::doc::{
    parse, render, CoversDoc, Document, FamilyDoc, FnWitnessDoc, FnsWitnessDoc, SpaceDoc, Strictness, TranscriptDoc,
    TripleDoc,
};
use fnlab::workbench::sweep::{run_sweep, SweepKind};
use fnlab::workbench::{enumerate_by_closure_filter, enumerate_topologies, generate, GenSpec};
use fnlab::Error;

#[derive(Parser, Debug)]
#[command(name = "fnlab", version, about = "Witnesses, quotients and games on finite topological spaces")]
struct Cli {
    /// Keep unknown document keys instead of rejecting them.
    #[arg(long, global = true)]
    lax: bool,

    /// Close the opens of loaded spaces under unions and intersections.
    #[arg(long, global = true)]
    auto_close: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a space document.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        /// Order edges for alexandrov, e.g. `0<1,1<2`.
        #[arg(long, default_value = "")]
        edges: String,
        /// Blocks for cluster, e.g. `0,1;2,3`.
        #[arg(long, default_value = "")]
        blocks: String,
        #[arg(long)]
        name: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List every topology on N points, checked against the closure filter.
    Enumerate {
        #[arg(long)]
        points: usize,
        /// Directory that receives one space document per topology.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an FNS witness.
    VerifyFns {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Check an FN witness.
    VerifyFn {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Find an FNS witness of least uniform bound.
    SearchFns {
        #[arg(long)]
        space: PathBuf,
        /// Family to search on; defaults to the nonempty opens.
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = RoleArg::Base)]
        family_role: RoleArg,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the FN witness of a development.
    DevelopFn {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        covers: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Quotient by a family of opens.
    Quotient {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        check_wcr: bool,
        #[arg(long)]
        kcap: Option<usize>,
        /// Require empty intersections to be represented by a cover.
        #[arg(long)]
        strict_empty: bool,
        /// Where to write the quotient space.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Play sigma from an FNS witness against an adversary.
    Play {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long, default_value = "first_fit")]
        adversary: String,
        #[arg(long)]
        horizon: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether sigma wins against every base-member reply.
    OracleWin {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
        /// Where to write the worst line found.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Move an FNS witness along a co-absolute triple.
    Transfer {
        #[arg(long)]
        triple: PathBuf,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        /// Also try every representative choice, up to this many.
        #[arg(long)]
        check_representatives: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run an acceptance sweep.
    Sweep {
        #[arg(value_enum)]
        kind: SweepArg,
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Discrete,
    Indiscrete,
    Sierpinski,
    Alexandrov,
    Random,
    Cluster,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RoleArg {
    Base,
    #[value(name = "pi_base", alias = "pi-base")]
    PiBase,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepArg {
    Lemmas,
    Quotient,
    Game,
    Witness,
}

impl From<SweepArg> for SweepKind {
    fn from(a: SweepArg) -> Self {
        match a {
            SweepArg::Lemmas => SweepKind::Lemmas,
            SweepArg::Quotient => SweepKind::Quotient,
            SweepArg::Game => SweepKind::Game,
            SweepArg::Witness => SweepKind::Witness,
        }
    }
}

/// What a successful run found.
#[derive(Debug, PartialEq, Eq)]
enum Verdict {
    Ok,
    Violated,
}

struct Loader {
    strictness: Strictness,
    auto_close: bool,
}

impl Loader {
    fn doc<D: Document>(&self, path: &Path) -> anyhow::Result<D> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        parse(&text, self.strictness).with_context(|| format!("in {}", path.display()))
    }

    fn space(&self, path: &Path) -> anyhow::Result<Arc<FiniteSpace>> {
        let doc: SpaceDoc = self.doc(path)?;
        let (space, report) = doc.to_space(self.auto_close).with_context(|| format!("in {}", path.display()))?;
        if let Some(r) = report.filter(|r| r.added > 0) {
            eprintln!("note: closing the opens added {} sets", r.added);
        }
        Ok(Arc::new(space))
    }
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_verdict(v: WitnessVerdict, members: &[PointSet]) -> Verdict {
    match v.counterexample {
        None => {
            println!("ok");
            Verdict::Ok
        }
        Some((a, b)) => {
            println!("violated: members {a} {} and {b} {}", members[a], members[b]);
            Verdict::Violated
        }
    }
}

fn gen_spec(kind: GenKind, n: usize, seed: u64, density: f64, edges: &str, blocks: &str) -> anyhow::Result<GenSpec> {
    let number = |s: &str| s.trim().parse::<usize>().with_context(|| format!("bad point {s:?}"));
    Ok(match kind {
        GenKind::Discrete => GenSpec::Discrete(n),
        GenKind::Indiscrete => GenSpec::Indiscrete(n),
        GenKind::Sierpinski => GenSpec::Sierpinski,
        GenKind::Random => GenSpec::Random { points: n, density, seed },
        GenKind::Alexandrov => {
            let edges = edges
                .split(',')
                .filter(|e| !e.trim().is_empty())
                .map(|e| {
                    let (a, b) = e.split_once('<').with_context(|| format!("edge {e:?} is not of the form a<b"))?;
                    Ok((number(a)?, number(b)?))
                })
                .collect::<anyhow::Result<_>>()?;
            GenSpec::Alexandrov { points: n, edges }
        }
        GenKind::Cluster => {
            let blocks = blocks
                .split(';')
                .filter(|b| !b.trim().is_empty())
                .map(|b| b.split(',').map(number).collect())
                .collect::<anyhow::Result<_>>()?;
            GenSpec::Cluster(blocks)
        }
    })
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    let load = Loader {
        strictness: if cli.lax { Strictness::Lax } else { Strictness::Strict },
        auto_close: cli.auto_close,
    };
    match cli.command {
        Command::Gen { kind, n, seed, density, edges, blocks, name, output } => {
            let space = generate(&gen_spec(kind, n, seed, density, &edges, &blocks)?)?;
            emit(output.as_deref(), &render(&SpaceDoc::from_space(&space, name.as_deref())))?;
            Ok(Verdict::Ok)
        }

        Command::Enumerate { points, output } => {
            let fast = enumerate_topologies(points)?;
            let slow = enumerate_by_closure_filter(points)?;
            if let Some(dir) = &output {
                fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
                for (i, s) in fast.iter().enumerate() {
                    let name = format!("t{points}-{i:03}");
                    let text = render(&SpaceDoc::from_space(s, Some(&name)));
                    emit(Some(&dir.join(format!("{name}.toml"))), &text)?;
                }
            }
            if fast == slow {
                println!("{} topologies on {points} points; closure filter agrees", fast.len());
                Ok(Verdict::Ok)
            } else {
                let missing = slow.iter().find(|s| !fast.contains(s));
                let extra = fast.iter().find(|s| !slow.contains(s));
                println!("violated: {} topologies, closure filter finds {}", fast.len(), slow.len());
                if let Some(s) = missing.or(extra) {
                    print!("{}", render(&SpaceDoc::from_space(s, Some("disputed"))));
                }
                Ok(Verdict::Violated)
            }
        }

        Command::VerifyFns { space, witness } => {
            let space = load.space(&space)?;
            let w = load.doc::<FnsWitnessDoc>(&witness)?.to_witness(&space)?;
            Ok(report_verdict(verify_fns(&w), w.family().members()))
        }

        Command::VerifyFn { space, witness } => {
            let space = load.space(&space)?;
            let w = load.doc::<FnWitnessDoc>(&witness)?.to_witness(&space)?;
            Ok(report_verdict(verify_fn(&w), w.base().members()))
        }

        Command::SearchFns { space, family, family_role, kmax, budget, output } => {
            let space = load.space(&space)?;
            let role = match family_role {
                RoleArg::Base => Role::Base,
                RoleArg::PiBase => Role::PiBase,
            };
            let family = match family {
                Some(path) => load.doc::<FamilyDoc>(&path)?.to_family(&space)?.with_role(role)?,
                None => SetFamily::nonempty_opens(space.clone()).with_role(role)?,
            };
            match search_fns_within(&family, kmax, budget)? {
                Some(found) => {
                    eprintln!("k_min = {} ({} nodes)", found.k_min, found.nodes);
                    emit(output.as_deref(), &render(&FnsWitnessDoc::from_witness(&found.witness)))?;
                    Ok(Verdict::Ok)
                }
                None => {
                    println!("violated: no witness with |s(U)| <= {kmax}; every bound up to {kmax} was refuted");
                    Ok(Verdict::Violated)
                }
            }
        }

        Command::DevelopFn { space, covers, output } => {
            let space = load.space(&space)?;
            let seq = load.doc::<CoversDoc>(&covers)?.to_sequence(&space)?;
            let out = developable_fn(&seq)?;
            emit(output.as_deref(), &render(&FnWitnessDoc::from_witness(&out.witness)))?;
            let v = verify_fn(&out.witness);
            if let Some((a, b)) = v.counterexample {
                let m = out.base.members();
                eprintln!("violated: constructed witness fails on {} and {}", m[a], m[b]);
                return Ok(Verdict::Violated);
            }
            Ok(Verdict::Ok)
        }

        Command::Quotient { space, family, check_wcr, kcap, strict_empty, output } => {
            let space = load.space(&space)?;
            let family = load.doc::<FamilyDoc>(&family)?.to_family(&space)?;
            let q = build_quotient(&space, &family)?;
            let classes: Vec<String> = q.partition.classes.iter().map(ToString::to_string).collect();
            println!("classes: {}", classes.join(" "));
            let images: Vec<String> = q.base_image.members().iter().map(ToString::to_string).collect();
            println!("image of the family: {}", images.join(" "));
            let sep = separation_report(&q.quotient);
            println!("quotient: t0={} t1={} t2={} regular={}", sep.t0, sep.t1, sep.t2, sep.regular);
            if let Some(path) = &output {
                emit(Some(path), &render(&SpaceDoc::from_space(&q.quotient, None)))?;
            }
            if !check_wcr {
                return Ok(Verdict::Ok);
            }
            let empty_targets = if strict_empty { EmptyTargets::Strict } else { EmptyTargets::Vacuous };
            let verdict = is_wcr(&space, &family, WcrOptions { k_cap: kcap, empty_targets })?;
            if !verdict.holds {
                let (tuple, point) = verdict.failure.unwrap_or_default();
                let sets: Vec<String> = tuple.iter().map(|&i| family.members()[i].to_string()).collect();
                match point {
                    Some(x) => println!("not wcr: point {x} of the intersection of [{}] cannot be served", sets.join(" ")),
                    None => println!("not wcr: the empty intersection of [{}] has no covering B", sets.join(" ")),
                }
                return Ok(Verdict::Violated);
            }
            if !(q.base_image.satisfies(Role::Base) && sep.t2 && sep.regular) {
                println!("violated: the family is wcr but the quotient is not a regular T2 space with the image as base");
                return Ok(Verdict::Violated);
            }
            println!("wcr: ok");
            Ok(Verdict::Ok)
        }

        Command::Play { space, witness, adversary, horizon, output } => {
            let space = load.space(&space)?;
            let w = load.doc::<FnsWitnessDoc>(&witness)?.to_witness(&space)?;
            let sigma = sigma_strategy(&w)?;
            let two = make_adversary(AdversaryKind::parse(&adversary)?, w.family());
            let t = play(&space, &sigma, &two, horizon)?;
            emit(output.as_deref(), &render(&TranscriptDoc::from_transcript(&t)))?;
            eprintln!("{} rounds, dense = {}", t.rounds.len(), t.dense);
            Ok(if t.dense { Verdict::Ok } else { Verdict::Violated })
        }

        Command::OracleWin { space, witness, horizon, budget, output } => {
            let space = load.space(&space)?;
            let w = load.doc::<FnsWitnessDoc>(&witness)?.to_witness(&space)?;
            let sigma = sigma_strategy(&w)?;
            let out = exhaustive_win(&space, w.family(), &sigma, horizon, budget)?;
            if let Some(path) = &output {
                emit(Some(path), &render(&TranscriptDoc::from_transcript(&out.worst_line)))?;
            }
            if out.wins_all {
                let needed = out.required_horizon().unwrap_or(0);
                println!("wins: every line dense within {needed} rounds ({} nodes)", out.nodes);
                Ok(Verdict::Ok)
            } else {
                println!("violated: a line stays nowhere dense for {horizon} rounds");
                if output.is_none() {
                    print!("{}", render(&TranscriptDoc::from_transcript(&out.worst_line)));
                }
                Ok(Verdict::Violated)
            }
        }

        Command::Transfer { triple, base, witness, check_representatives, output } => {
            let t = load.doc::<TripleDoc>(&triple)?.to_triple()?;
            let base_x = load.doc::<FamilyDoc>(&base)?.to_family(t.x())?;
            let s = load.doc::<FnsWitnessDoc>(&witness)?.to_witness(t.x())?;
            let out = transfer_witness(&t, &base_x, &s)?;
            emit(output.as_deref(), &render(&FnsWitnessDoc::from_witness(&out.s_z)))?;
            if let Some(cap) = check_representatives {
                match representatives_agree(&t, &base_x, &s, cap)? {
                    Some(true) => eprintln!("every choice of representatives verifies"),
                    Some(false) => {
                        println!("violated: some choice of representatives does not verify");
                        return Ok(Verdict::Violated);
                    }
                    None => eprintln!("more than {cap} representative choices; not checked"),
                }
            }
            Ok(Verdict::Ok)
        }

        Command::Sweep { kind, max_points, workers, output } => {
            let report = run_sweep(kind.into(), max_points, workers)?;
            for c in &report.checks {
                let status = if c.passed() { "ok" } else { "FAILED" };
                println!("[{}] criterion {}: {} ({} instances, {} failures)", status, c.criterion, c.name, c.instances, c.failures);
            }
            if let Some(path) = &output {
                emit(Some(path), &render(&report))?;
            }
            Ok(if report.passed() { Verdict::Ok } else { Verdict::Violated })
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::BudgetExceeded { .. }) => 3,
        Some(Error::Postcondition(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Violated) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn edges_and_blocks_parse() {
        let spec = gen_spec(GenKind::Alexandrov, 3, 0, 0.0, "0<1, 1<2", "").unwrap();
        assert_eq!(spec, GenSpec::Alexandrov { points: 3, edges: vec![(0, 1), (1, 2)] });
        let spec = gen_spec(GenKind::Cluster, 0, 0, 0.0, "", "0,1;2").unwrap();
        assert_eq!(spec, GenSpec::Cluster(vec![vec![0, 1], vec![2]]));
        assert!(gen_spec(GenKind::Alexandrov, 2, 0, 0.0, "0-1", "").is_err());
    }

    #[test]
    fn budget_errors_map_to_three() {
        let err = anyhow::Error::new(Error::BudgetExceeded { budget: 1 }).context("while searching");
        assert_eq!(exit_code(&err), 3);
        assert_eq!(exit_code(&anyhow::anyhow!("bad input")), 2);
    }
}
