//! Command-line front end. Exit codes: 0 = property holds / all stages
//! pass, 1 = a checked property fails (witness or diagnostic printed),
//! 2 = input or resource error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tverberg_kit::complex::Coloring;
use tverberg_kit::error::Error;
use tverberg_kit::families::{
    make_bct_family, make_remark_counterexample, validate_parameters,
};
use tverberg_kit::geometry::{search_tverberg, verify_witness, PointConfiguration};
use tverberg_kit::homology::{
    build_chain_complex, reduced_homology_ranks, verify_connectivity_bound, PrimeField, Rationals,
};
use tverberg_kit::instance::{
    format_rational, load_field, load_instance, load_points, save_field, save_instance, Instance,
};
use tverberg_kit::kneser::{build_gamma, check_proposition};
use tverberg_kit::morse::{
    connectivity_certificate, run_matching, verify_acyclic, verify_critical_census,
    verify_pi_monotone, verify_vector_field, Verdict,
};
use tverberg_kit::complex::Parameters;
use tverberg_kit::unavoidability;

const DEFAULT_CAP: u64 = 1 << 26;

#[derive(Parser)]
#[command(name = "tverberg-kit", version, about = "Collective unavoidability, discrete Morse certificates, and rational Tverberg search")]
struct Cli {
    /// State-space cap for exhaustive enumerations ((r+1)^m).
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check theorem parameter identities and list compatible parameters.
    Validate(ValidateArgs),
    /// Emit a named family as an instance file.
    Demo {
        #[command(subcommand)]
        which: DemoCommand,
    },
    /// Decide an unavoidability property; print a witness on failure.
    CheckUnavoidable(CheckArgs),
    /// Build the Kneser graph and check the clique criterion.
    Kneser(KneserArgs),
    /// Run or verify the discrete Morse matching.
    Morse {
        #[command(subcommand)]
        which: MorseCommand,
    },
    /// Exact reduced homology of the symmetrized deleted join.
    Homology(HomologyArgs),
    /// Search for Tverberg partitions on rational point configurations.
    Tverberg {
        #[command(subcommand)]
        which: TverbergCommand,
    },
    /// Run every stage end to end and emit a consolidated report.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Theorem::Ctcruc)]
    theorem: Theorem,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Ctcruc,
    Ttrsu,
    Bct,
}

impl Theorem {
    fn tag(self) -> &'static str {
        match self {
            Theorem::Ctcruc => "ctcruc",
            Theorem::Ttrsu => "ttrsu",
            Theorem::Bct => "bct",
        }
    }
}

#[derive(Subcommand)]
enum DemoCommand {
    /// The balanced-colored family: top rainbow skeleta for the first s
    /// members, one lower for the rest.
    Bct {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The balanced family with empty Kneser graph that is nevertheless
    /// not (r,s)-unavoidable.
    Counterexample {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Count all violations instead of stopping at the first.
    #[arg(long)]
    census: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// r-unavoidability of the first complex alone.
    R,
    /// (r,s)-unavoidability of the first complex alone.
    Rs,
    /// Collective (r,s)-unavoidability of the whole family.
    CollectiveRs,
    /// Rainbow (r,s)-unavoidability of the whole family.
    RainbowRs,
}

#[derive(Args)]
struct KneserArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Build the graph inside the rainbow complex of the instance coloring.
    #[arg(long)]
    rainbow: bool,
    /// Clique size to search for; defaults to r-s+1.
    #[arg(long)]
    clique_size: Option<usize>,
}

#[derive(Subcommand)]
enum MorseCommand {
    /// Run the matching procedure and save the field.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Degrade precondition failures to warnings (negative controls).
        #[arg(long)]
        force: bool,
    },
    /// Re-verify a saved field against its instance.
    Verify {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = CheckKind::All)]
        check: CheckKind,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    All,
    Field,
    Acyclic,
    Pi,
    Census,
}

#[derive(Args)]
struct HomologyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Coefficients::Rational)]
    coefficients: Coefficients,
    /// Prime for mod-p coefficients.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Require vanishing reduced homology through this dimension.
    #[arg(long)]
    through_dim: Option<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coefficients {
    Rational,
    ModP,
}

#[derive(Subcommand)]
enum TverbergCommand {
    Search {
        #[arg(long)]
        instance: PathBuf,
        /// Point configuration file; mutually exclusive with --seed.
        #[arg(long, conflicts_with_all = ["seed", "trials"])]
        points: Option<PathBuf>,
        /// Seed for random rational configurations.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of seeded trials (seeds seed, seed+1, ..).
        #[arg(long, default_value_t = 1)]
        trials: u64,
    },
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Optional point configuration for the final geometric stage.
    #[arg(long)]
    points: Option<PathBuf>,
}

/// Outcome of a subcommand: property verdict separate from I/O errors.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = cli.cap;
    match dispatch(cli.command, cap) {
        Ok(Outcome::Pass) => ExitCode::from(0),
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command, cap: u64) -> tverberg_kit::Result<Outcome> {
    match command {
        Command::Validate(args) => cmd_validate(args),
        Command::Demo { which } => cmd_demo(which),
        Command::CheckUnavoidable(args) => cmd_check(args, cap),
        Command::Kneser(args) => cmd_kneser(args, cap),
        Command::Morse { which } => cmd_morse(which, cap),
        Command::Homology(args) => cmd_homology(args, cap),
        Command::Tverberg { which } => cmd_tverberg(which, cap),
        Command::Pipeline(args) => cmd_pipeline(args, cap),
    }
}

fn cmd_validate(args: ValidateArgs) -> tverberg_kit::Result<Outcome> {
    let inst = load_instance(&args.instance)?;
    let report = validate_parameters(&inst.params, args.theorem.tag())?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.ok { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_demo(which: DemoCommand) -> tverberg_kit::Result<Outcome> {
    let (params, coloring, fam, out) = match which {
        DemoCommand::Bct { r, k, s, out } => {
            let (params, coloring, fam) = make_bct_family(r, k, s)?;
            (params, coloring, fam, out)
        }
        DemoCommand::Counterexample { r, s, k, out } => {
            let (m, fam) = make_remark_counterexample(r, s, k)?;
            // one trivial color class: the family is uncolored
            let coloring = Coloring::new(
                m,
                vec![tverberg_kit::complex::VertexSet::full(m)],
            )?;
            let params = Parameters { r, d: 1, k, s, m };
            (params, coloring, fam, out)
        }
    };
    match out {
        Some(path) => {
            save_instance(&path, &params, &coloring, &fam)?;
            println!("wrote {}", path.display());
        }
        None => {
            let json =
                tverberg_kit::instance::InstanceJson::from_parts(&params, &coloring, &fam);
            println!("{}", serde_json::to_string_pretty(&json)?);
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_check(args: CheckArgs, cap: u64) -> tverberg_kit::Result<Outcome> {
    let inst = load_instance(&args.instance)?;
    let fam = &inst.family;
    let s = inst.params.s;
    let witness = match args.mode {
        Mode::R => unavoidability::is_r_unavoidable(fam.member(0), fam.r(), cap)?,
        Mode::Rs => unavoidability::is_rs_unavoidable_single(fam.member(0), fam.r(), s, cap)?,
        Mode::CollectiveRs => unavoidability::is_collectively_rs_unavoidable(fam, s, cap)?,
        Mode::RainbowRs => {
            unavoidability::is_rs_rainbow_unavoidable(fam, &inst.coloring, s, cap)?
        }
    };
    let census = if args.census {
        let coloring = matches!(args.mode, Mode::RainbowRs).then_some(&inst.coloring);
        Some(unavoidability::violation_census(fam, s, coloring, cap)?)
    } else {
        None
    };
    let holds = witness.is_none();
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "holds": holds,
            "witness": witness,
            "violation_count": census,
        }))?
    );
    Ok(if holds { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_kneser(args: KneserArgs, cap: u64) -> tverberg_kit::Result<Outcome> {
    let inst = load_instance(&args.instance)?;
    let coloring = args.rainbow.then_some(&inst.coloring);
    let gamma = build_gamma(&inst.family, inst.params.k, coloring)?;
    let q = args
        .clique_size
        .unwrap_or(inst.family.r() - inst.params.s as usize + 1);
    let report = check_proposition(&inst.family, inst.params.k, inst.params.s, coloring, cap)?;
    let adjacency: Vec<Vec<usize>> = (0..gamma.num_vertices())
        .map(|u| (0..gamma.num_vertices()).filter(|&v| gamma.adjacent(u, v)).collect())
        .collect();
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "vertices": gamma
                .vertices()
                .iter()
                .map(|&(i, a)| json!({"complex": i + 1, "missing": a.to_labels()}))
                .collect::<Vec<_>>(),
            "adjacency": adjacency,
            "clique_size_searched": q,
            "clique": gamma.find_clique(q),
            "report": report,
        }))?
    );
    Ok(if report.consistent { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_morse(which: MorseCommand, cap: u64) -> tverberg_kit::Result<Outcome> {
    match which {
        MorseCommand::Run { instance, out, force } => {
            let inst = load_instance(&instance)?;
            let run = run_matching(
                &inst.family,
                &inst.coloring,
                inst.params.k,
                inst.params.s,
                force,
                cap,
            )?;
            for w in &run.warnings {
                eprintln!("warning: {w}");
            }
            save_field(&out, &run.field, inst.params.m, inst.params.r)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "cells": run.cells.len(),
                    "pairs": run.field.pairs.len(),
                    "critical": run.field.critical.len(),
                    "type3_skips": run.type3.len(),
                    "warnings": run.warnings,
                    "field_written": out.display().to_string(),
                }))?
            );
            Ok(Outcome::Pass)
        }
        MorseCommand::Verify { field, instance, check } => {
            let inst = load_instance(&instance)?;
            let (field, m, _) = load_field(&field)?;
            if m != inst.params.m {
                return Err(Error::InvalidInput(format!(
                    "field ground set [{m}] does not match instance [{}]",
                    inst.params.m
                )));
            }
            let min_vertices = inst.params.r * inst.params.k + inst.params.s;
            let mut all_ok = true;
            let mut report = serde_json::Map::new();
            if matches!(check, CheckKind::All | CheckKind::Field) {
                let rep = verify_vector_field(&field, &inst.family, cap)?;
                all_ok &= rep.ok();
                report.insert("field".into(), json!({"ok": rep.ok(), "violations": rep.violations}));
            }
            if matches!(check, CheckKind::All | CheckKind::Acyclic) {
                let cycle = verify_acyclic(&field);
                all_ok &= cycle.is_none();
                report.insert(
                    "acyclic".into(),
                    json!({
                        "ok": cycle.is_none(),
                        "cycle": cycle.map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                    }),
                );
            }
            if matches!(check, CheckKind::All | CheckKind::Pi) {
                let rep = verify_pi_monotone(&field, &inst.coloring);
                all_ok &= rep.ok();
                report.insert(
                    "pi".into(),
                    json!({
                        "ok": rep.ok(),
                        "edges_checked": rep.edges_checked,
                        "violations": rep
                            .violations
                            .iter()
                            .map(|(a, b)| format!("{a} -> {b}"))
                            .collect::<Vec<_>>(),
                    }),
                );
            }
            if matches!(check, CheckKind::All | CheckKind::Census) {
                let rep = verify_critical_census(&field, &inst.family, min_vertices);
                all_ok &= rep.ok();
                report.insert(
                    "census".into(),
                    json!({
                        "ok": rep.ok(),
                        "zero_dim_critical": rep.zero_dim_critical.len(),
                        "too_small": rep.too_small.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "non_maximal": rep.non_maximal.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    }),
                );
            }
            if check == CheckKind::All {
                let field_rep = verify_vector_field(&field, &inst.family, cap)?;
                let cycle = verify_acyclic(&field);
                let census = verify_critical_census(&field, &inst.family, min_vertices);
                let verdict = connectivity_certificate(&field_rep, &cycle, &census, min_vertices);
                report.insert(
                    "certificate".into(),
                    match &verdict {
                        Verdict::Certified { level } => json!({"certified": true, "level": level}),
                        Verdict::Uncertified { reason } => {
                            json!({"certified": false, "reason": reason})
                        }
                    },
                );
            }
            println!("{}", serde_json::to_string_pretty(&serde_json::Value::Object(report))?);
            Ok(if all_ok { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn cmd_homology(args: HomologyArgs, cap: u64) -> tverberg_kit::Result<Outcome> {
    let inst = load_instance(&args.instance)?;
    let cc = build_chain_complex(&inst.family, cap)?;
    if !cc.boundary_squared_is_zero() {
        return Err(Error::InvalidInput("boundary squared is nonzero".into()));
    }
    let table = match args.coefficients {
        Coefficients::Rational => reduced_homology_ranks(&cc, &Rationals, "rational"),
        Coefficients::ModP => {
            reduced_homology_ranks(&cc, &PrimeField { p: args.p }, &format!("mod-{}", args.p))
        }
    };
    let ranks: serde_json::Map<String, serde_json::Value> = table
        .reduced
        .iter()
        .enumerate()
        .map(|(q, &b)| (q.to_string(), json!(b)))
        .collect();
    let pass = match args.through_dim {
        Some(q) => (0..=q).all(|d| table.reduced.get(d as usize).copied().unwrap_or(0) == 0),
        None => true,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "coefficients": table.coefficients,
            "reduced_betti": ranks,
            "euler_characteristic": cc.euler_characteristic(),
            "through_dim": args.through_dim,
            "vanishes_through_dim": args.through_dim.map(|_| pass),
        }))?
    );
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_tverberg(which: TverbergCommand, cap: u64) -> tverberg_kit::Result<Outcome> {
    let TverbergCommand::Search { instance, points, seed, trials } = which;
    let inst = load_instance(&instance)?;
    let configs: Vec<(Option<u64>, PointConfiguration)> = match (&points, seed) {
        (Some(path), _) => vec![(None, load_points(path)?)],
        (None, Some(seed)) => (seed..seed + trials)
            .map(|s| {
                (
                    Some(s),
                    PointConfiguration::random(s, inst.params.m as usize, inst.params.d as usize),
                )
            })
            .collect(),
        (None, None) => {
            return Err(Error::InvalidInput("provide --points or --seed".into()));
        }
    };
    let mut found = 0usize;
    let mut results = Vec::new();
    for (seed, config) in &configs {
        let witness = search_tverberg(config, &inst.family, cap)?;
        match witness {
            Some(w) => {
                verify_witness(config, &inst.family, &w)
                    .map_err(Error::InvalidInput)?;
                found += 1;
                results.push(json!({
                    "seed": seed,
                    "found": true,
                    "faces": w.faces.iter().map(|f| f.to_labels()).collect::<Vec<_>>(),
                    "point": w.point.iter().map(format_rational).collect::<Vec<_>>(),
                    "weights": w
                        .weights
                        .iter()
                        .map(|wl| {
                            wl.iter()
                                .map(|(v, x)| json!([v, format_rational(x)]))
                                .collect::<Vec<_>>()
                        })
                        .collect::<Vec<_>>(),
                }));
            }
            None => {
                results.push(json!({"seed": seed, "found": false}));
            }
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "trials": configs.len(),
            "found": found,
            "results": results,
        }))?
    );
    Ok(if found == configs.len() { Outcome::Pass } else { Outcome::Fail })
}

fn cmd_pipeline(args: PipelineArgs, cap: u64) -> tverberg_kit::Result<Outcome> {
    let inst = load_instance(&args.instance)?;
    let mut stages = Vec::new();
    let mut all_pass = true;
    let Instance { params, coloring, family } = &inst;

    let validation = validate_parameters(params, "ctcruc")?;
    stages.push(json!({"stage": "parameters", "pass": validation.ok, "report": validation}));
    all_pass &= validation.ok;

    // the colored machinery applies only when the coloring has the theorem
    // shape: k+1 classes of size 2r-1; otherwise fall back to the
    // uncolored (collective) notions
    let theorem_shape = coloring.num_colors() == (params.k + 1) as usize
        && coloring.classes().iter().all(|c| c.len() == 2 * params.r - 1);
    let balanced = if theorem_shape {
        family.members().iter().all(|k| k.is_rainbow_balanced(coloring, params.k))
    } else {
        family.members().iter().all(|k| k.is_balanced(params.k))
    };
    stages.push(json!({"stage": "balancedness", "pass": balanced, "rainbow": theorem_shape}));
    all_pass &= balanced;
    let rainbow = theorem_shape && balanced;

    let unavoidable = if rainbow {
        match unavoidability::is_rs_rainbow_unavoidable(family, coloring, params.s, cap)? {
            None => {
                stages.push(json!({"stage": "unavoidability", "pass": true}));
                true
            }
            Some(w) => {
                stages.push(json!({"stage": "unavoidability", "pass": false, "witness": w}));
                all_pass = false;
                false
            }
        }
    } else {
        // uncolored fallback: collective unavoidability without the
        // rainbow restriction
        match unavoidability::is_collectively_rs_unavoidable(family, params.s, cap)? {
            None => {
                stages.push(json!({"stage": "unavoidability", "pass": true, "variant": "collective"}));
                true
            }
            Some(w) => {
                stages.push(json!({
                    "stage": "unavoidability", "pass": false, "variant": "collective", "witness": w
                }));
                all_pass = false;
                false
            }
        }
    };

    match check_proposition(family, params.k, params.s, rainbow.then_some(coloring), cap) {
        Ok(rep) => {
            all_pass &= rep.consistent;
            stages.push(json!({"stage": "kneser", "pass": rep.consistent, "report": rep}));
        }
        Err(e) => {
            all_pass = false;
            stages.push(json!({"stage": "kneser", "pass": false, "skipped": e.to_string()}));
        }
    }

    if unavoidable && rainbow {
        let run = run_matching(family, coloring, params.k, params.s, false, cap)?;
        let min_vertices = params.r * params.k + params.s;
        let field_rep = verify_vector_field(&run.field, family, cap)?;
        let cycle = verify_acyclic(&run.field);
        let pi_rep = verify_pi_monotone(&run.field, coloring);
        let census = verify_critical_census(&run.field, family, min_vertices);
        let verdict = connectivity_certificate(&field_rep, &cycle, &census, min_vertices);
        let pass = field_rep.ok()
            && cycle.is_none()
            && pi_rep.ok()
            && census.ok()
            && matches!(verdict, Verdict::Certified { .. });
        all_pass &= pass;
        stages.push(json!({
            "stage": "morse",
            "pass": pass,
            "cells": run.cells.len(),
            "pairs": run.field.pairs.len(),
            "critical": run.field.critical.len(),
            "certificate": match &verdict {
                Verdict::Certified { level } => json!({"certified": true, "level": level}),
                Verdict::Uncertified { reason } => json!({"certified": false, "reason": reason}),
            },
        }));

        let through = (params.r * params.k + params.s) as i64 - 2;
        let hom = verify_connectivity_bound(family, 2, through, cap)?;
        all_pass &= hom.pass;
        // weak Morse inequality: reduced Betti <= critical count per dim
        let mut critical_by_dim = std::collections::HashMap::new();
        for c in &run.field.critical {
            *critical_by_dim.entry(c.dim()).or_insert(0usize) += 1;
        }
        let morse_ineq = hom
            .rational
            .iter()
            .enumerate()
            .all(|(q, &b)| b <= critical_by_dim.get(&(q as i64)).copied().unwrap_or(0));
        all_pass &= morse_ineq;
        stages.push(json!({
            "stage": "homology",
            "pass": hom.pass,
            "rational": hom.rational,
            "mod_p": hom.mod_p,
            "p": hom.p,
            "through_dim": hom.through_dim,
            "morse_inequality": morse_ineq,
        }));
    } else {
        stages.push(json!({
            "stage": "morse",
            "skipped": "preconditions not met (family not rainbow balanced or not unavoidable)",
        }));
        stages.push(json!({"stage": "homology", "skipped": "morse stage skipped"}));
    }

    if let Some(path) = &args.points {
        let config = load_points(path)?;
        match search_tverberg(&config, family, cap)? {
            Some(w) => {
                verify_witness(&config, family, &w).map_err(Error::InvalidInput)?;
                stages.push(json!({
                    "stage": "tverberg",
                    "pass": true,
                    "faces": w.faces.iter().map(|f| f.to_labels()).collect::<Vec<_>>(),
                    "point": w.point.iter().map(format_rational).collect::<Vec<_>>(),
                }));
            }
            None => {
                all_pass = false;
                stages.push(json!({"stage": "tverberg", "pass": false, "found": false}));
            }
        }
    }

    println!(
        "{}",
        serde_json::to_string_pretty(&json!({"stages": stages, "all_pass": all_pass}))?
    );
    Ok(if all_pass { Outcome::Pass } else { Outcome::Fail })
}
