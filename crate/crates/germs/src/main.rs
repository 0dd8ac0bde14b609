//! Command-line workbench: validate semigroup tables, enumerate
//! spectra, build germ groupoids, verify the ρ machinery, check
//! amenability certificates, and run the packaged example scenarios.
//!
//! Exit codes: 0 = all reports pass, 1 = a report failed, 2 = input or
//! guard error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use germs::action::{action_from_assignments, parse_action_file, Action};
use germs::cert::{
    check_certificate, verify_canonical_transport, Certificate, CertificateJson,
};
use germs::germ::build_germ_groupoid;
use germs::groupoid::{FiniteGroupoid, GroupoidJson};
use germs::rho::RhoBundle;
use germs::sample::random_action;
use germs::semigroup::{
    cyclic_group_table, double_zero_example, parse_table_file, InverseSemigroup,
};
use germs::spectrum::{enumerate_filters, tight_action};

#[derive(Parser)]
#[command(name = "germs", version, about = "Finite inverse semigroup and groupoid-of-germs workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text where applicable.
    #[arg(long, global = true)]
    json: bool,
    /// Equality tolerance for certificate checks.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Override the size guards (|S| cap and I(n) cap).
    #[arg(long, global = true)]
    max_size: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a semigroup table file.
    Build { semigroup: PathBuf },
    /// Print the spectrum, ultrafilters, and tight spectrum.
    Spectrum { semigroup: PathBuf },
    /// Build the groupoid of germs of an action and export it.
    Germs {
        action: PathBuf,
        /// Emit DOT instead of text/JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Print the ρ point table and the ρ̃ arrow map.
    Rho {
        action: PathBuf,
        /// Also run the exhaustive ρ fact checks; nonzero exit on any witness.
        #[arg(long)]
        verify: bool,
    },
    /// Check a certificate file against a groupoid JSON export.
    Check {
        groupoid: PathBuf,
        certificate: PathBuf,
    },
    /// Run the certificate transport pipeline for an action, or for a
    /// seeded corpus of random actions of a semigroup.
    Theorem {
        /// Action file (omit when using --sample-from).
        action: Option<PathBuf>,
        /// Sample random actions of this semigroup table instead.
        #[arg(long)]
        sample_from: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
    /// Packaged walkthrough scenarios.
    Example {
        /// Scenario name (currently: remark-3.5).
        name: String,
        /// Cyclic group order for the scenario.
        #[arg(long, default_value_t = 2)]
        group: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn load_semigroup(path: &Path, max_size: Option<usize>) -> anyhow::Result<Arc<InverseSemigroup>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let _ = max_size; // table parsing applies the default guard
    let sg = parse_table_file(&text)?;
    Ok(Arc::new(sg))
}

fn load_action(path: &Path, max_size: Option<usize>) -> anyhow::Result<Action> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let file = parse_action_file(&text)?;
    let sg_path = path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join(&file.semigroup_path);
    let sg = load_semigroup(&sg_path, max_size)?;
    Ok(action_from_assignments(sg, file.space, &file.assignments)?)
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Build { semigroup } => {
            let sg = load_semigroup(semigroup, cli.max_size)?;
            if cli.json {
                let out = serde_json::json!({
                    "elements": sg.size(),
                    "zero": sg.label(sg.zero()),
                    "zero_adjoined": sg.zero_was_adjoined(),
                    "idempotents": sg.idempotents().iter().map(|&e| sg.label(e)).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                if sg.zero_was_adjoined() {
                    println!("notice: table had no zero; fresh zero adjoined");
                }
                println!("valid inverse semigroup with {} elements", sg.size());
                println!(
                    "idempotents: {}",
                    sg.idempotents()
                        .iter()
                        .map(|&e| sg.label(e))
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
            Ok(true)
        }
        Command::Spectrum { semigroup } => {
            let sg = load_semigroup(semigroup, cli.max_size)?;
            let spec = enumerate_filters(&sg);
            let ultra = spec.ultrafilters();
            if cli.json {
                let filters: Vec<Vec<&str>> = spec
                    .filters()
                    .iter()
                    .map(|f| f.members().iter().map(|&e| sg.label(e)).collect())
                    .collect();
                let out = serde_json::json!({
                    "filters": filters,
                    "ultrafilters": ultra,
                    "tight_spectrum": spec.tight_spectrum(),
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                for f in spec.filters() {
                    println!("{}", f.display(&sg));
                }
                println!(
                    "ultrafilters: {}",
                    ultra
                        .iter()
                        .map(|&i| spec.filters()[i].display(&sg))
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
            Ok(true)
        }
        Command::Germs { action, dot } => {
            let a = load_action(action, cli.max_size)?;
            let gg = build_germ_groupoid(&a)?;
            if *dot {
                print!("{}", gg.groupoid().to_dot());
            } else if cli.json {
                println!("{}", serde_json::to_string_pretty(&gg.groupoid().to_json())?);
            } else {
                let g = gg.groupoid();
                println!("{} arrows, {} units", g.n_arrows, g.units().len());
                for arrow in 0..g.n_arrows {
                    let (s, x) = gg.class_rep(arrow);
                    println!(
                        "  {}: [{},{}]{}",
                        arrow,
                        a.semigroup().label(s),
                        a.point_label(x),
                        if g.is_unit(arrow) { " (unit)" } else { "" }
                    );
                }
            }
            Ok(true)
        }
        Command::Rho { action, verify } => {
            let a = load_action(action, cli.max_size)?;
            let bundle = RhoBundle::build(&a)?;
            let report = if *verify {
                bundle.verify_rhofacts()
            } else {
                Vec::new()
            };
            if cli.json {
                let points: BTreeMap<&str, String> = (0..a.space_size())
                    .map(|x| {
                        (
                            a.point_label(x),
                            bundle.spectrum().filters()[bundle.rho(x)].display(a.semigroup()),
                        )
                    })
                    .collect();
                let out = serde_json::json!({
                    "rho": points,
                    "rho_tilde": bundle.rho_tilde().map,
                    "violations": report,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                for x in 0..a.space_size() {
                    println!(
                        "ρ({}) = {}",
                        a.point_label(x),
                        bundle.spectrum().filters()[bundle.rho(x)].display(a.semigroup())
                    );
                }
                let g = bundle.germ_groupoid();
                for arrow in 0..g.n_arrows() {
                    let (s, x) = g.class_rep(arrow);
                    println!(
                        "ρ̃([{},{}]) = arrow {}",
                        a.semigroup().label(s),
                        a.point_label(x),
                        bundle.rho_tilde().map[arrow]
                    );
                }
                for v in &report {
                    println!("violation: {v}");
                }
            }
            Ok(report.is_empty())
        }
        Command::Check {
            groupoid,
            certificate,
        } => {
            let gj: GroupoidJson =
                serde_json::from_str(&std::fs::read_to_string(groupoid)?)?;
            let g = FiniteGroupoid::from_json(&gj)?;
            let axioms = g.check_axioms()?;
            if !axioms.is_empty() {
                anyhow::bail!("groupoid file violates axioms: {}", axioms[0]);
            }
            let cj: CertificateJson =
                serde_json::from_str(&std::fs::read_to_string(certificate)?)?;
            let cert = Certificate::from_json(&cj);
            let report = check_certificate(&g, &cert, cli.tol)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_text());
            }
            Ok(report.verdict)
        }
        Command::Theorem {
            action,
            sample_from,
            seed,
            count,
            points,
        } => match (action, sample_from) {
            (Some(path), None) => {
                let a = load_action(path, cli.max_size)?;
                let report = verify_canonical_transport(&a)?;
                if cli.json {
                    println!("{}", serde_json::to_string_pretty(&report)?);
                } else {
                    print!("{}", report.to_text());
                }
                Ok(report.pass)
            }
            (None, Some(path)) => {
                let sg = load_semigroup(path, cli.max_size)?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut all = true;
                let mut reports = Vec::new();
                for i in 0..*count {
                    let a = random_action(&sg, &mut rng, *points);
                    let report = verify_canonical_transport(&a)?;
                    all &= report.pass;
                    if cli.json {
                        reports.push(serde_json::json!({
                            "index": i,
                            "points": a.space_size(),
                            "pass": report.pass,
                        }));
                    } else {
                        println!(
                            "action {i} on {} points: {}",
                            a.space_size(),
                            if report.pass { "pass" } else { "fail" }
                        );
                    }
                }
                if cli.json {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&serde_json::json!({
                            "seed": seed,
                            "reports": reports,
                            "pass": all,
                        }))?
                    );
                }
                Ok(all)
            }
            _ => anyhow::bail!("provide either an action file or --sample-from"),
        },
        Command::Example { name, group } => {
            if name != "remark-3.5" {
                anyhow::bail!("unknown example {name:?} (available: remark-3.5)");
            }
            if *group < 2 {
                anyhow::bail!("--group must be at least 2");
            }
            let (labels, table) = cyclic_group_table(*group);
            let sg = Arc::new(double_zero_example(&labels, &table)?);
            let spec = enumerate_filters(&sg);
            let ultra = spec.ultrafilters();
            let theta = germs::spectrum::canonical_action(&sg);
            let universal = build_germ_groupoid(&theta)?;
            let tight = build_germ_groupoid(&tight_action(&sg))?;
            let pipeline = verify_canonical_transport(&theta)?;
            if cli.json {
                let out = serde_json::json!({
                    "group_order": group,
                    "semigroup_size": sg.size(),
                    "idempotents": sg.idempotents().iter().map(|&e| sg.label(e)).collect::<Vec<_>>(),
                    "spectrum": spec.filters().iter().map(|f| f.display(&sg)).collect::<Vec<_>>(),
                    "ultrafilters": ultra.len(),
                    "tight_groupoid": {
                        "arrows": tight.groupoid().n_arrows,
                        "units": tight.groupoid().units().len(),
                    },
                    "universal_groupoid": {
                        "arrows": universal.groupoid().n_arrows,
                        "units": universal.groupoid().units().len(),
                    },
                    "transport_pass": pipeline.pass,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("S = Z/{group} with two adjoined zeros, |S| = {}", sg.size());
                println!("|Ê| = {}", spec.len());
                println!("|Êtight| = {}", ultra.len());
                println!(
                    "tight groupoid: {} arrow(s), {} unit(s)",
                    tight.groupoid().n_arrows,
                    tight.groupoid().units().len()
                );
                println!(
                    "universal groupoid: {} arrow(s), {} unit(s)",
                    universal.groupoid().n_arrows,
                    universal.groupoid().units().len()
                );
                println!(
                    "certificate transport through ρ̃: {}",
                    if pipeline.pass { "pass" } else { "fail" }
                );
            }
            Ok(pipeline.pass)
        }
    }
}
