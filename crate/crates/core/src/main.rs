use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cactus::cli::{
    build_presentation, cmd_abelianize, cmd_counts, cmd_hom_check, cmd_hom_count, cmd_iso, cmd_lcs, cmd_order,
    cmd_present, cmd_table, cmd_verify_all, parse_group_spec, CliError, HomParams, MapName, PresKind, RunManifest,
};
use cactus::cosets::{EnumConfig, Strategy};
use cactus::presentations::{count_reports_csv, counts_closed_form};

#[derive(Parser)]
#[command(name = "cactus", version, about = "Presentations, homomorphisms and finite quotients of cactus groups")]
struct Cli {
    /// Print the run manifest as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on coset table rows.
    #[arg(long, global = true, env = "CACTUS_MAX_COSETS")]
    max_cosets: Option<usize>,
    #[arg(long, global = true, default_value = "hlt", value_parser = parse_strategy)]
    strategy: Strategy,
    /// Worker threads for independent jobs (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: cactus::cosets::EnumError| e.to_string())
}

fn parse_kind(s: &str) -> Result<PresKind, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_map(s: &str) -> Result<MapName, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

#[derive(Args)]
struct PresArgs {
    /// standard, minimal, thmd or trunc.
    #[arg(long, value_parser = parse_kind)]
    pres: PresKind,
    #[arg(short = 'n', long)]
    n: u32,
    /// Class for --pres trunc.
    #[arg(long)]
    class: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a presentation in GAP syntax (or JSON with --json).
    Present(PresArgs),
    /// Generator and relator counts against the closed forms.
    Counts {
        #[arg(long, default_value_t = 2)]
        n_from: u32,
        #[arg(long, default_value_t = 12)]
        n_to: u32,
        /// Write the counts as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Homomorphism checks and counts.
    Hom {
        #[command(subcommand)]
        action: HomAction,
    },
    /// Group order by coset enumeration.
    Order {
        #[command(flatten)]
        pres: PresArgs,
        /// Write the coset table as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Lower central series of a finite quotient.
    Lcs(PresArgs),
    /// Isomorphism test between a presentation and a finite group.
    Iso {
        /// Presentation spec such as thmd:4 or trunc:4:2.
        #[arg(long)]
        left: String,
        /// wreath, z2xwreath, quaternion, dihedral:M, cyclic:K, symmetric:N or a presentation spec.
        #[arg(long)]
        right: String,
    },
    /// Abelian invariants via Smith normal form.
    Abelianize(PresArgs),
    /// Layer ranks of the lower central series against the published table.
    Table {
        #[arg(long, value_delimiter = ',', default_value = "4,5,6")]
        n: Vec<u32>,
        /// Largest layer index; layer i is read from the class-i quotient.
        #[arg(long, default_value_t = 3)]
        max_class: u32,
    },
    /// Run every acceptance claim.
    VerifyAll {
        /// Largest n for the rank-table rows.
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
}

#[derive(Subcommand)]
enum HomAction {
    /// Check that a named map sends every relator to the identity.
    Check {
        /// pi, phi-d4, psi-d8, phi-inf, theta, theta-lambda, qn or dihedral.
        #[arg(long, value_parser = parse_map)]
        map: MapName,
        #[arg(short = 'n', long, default_value_t = 4)]
        n: u32,
        #[arg(long)]
        pivot: Option<u32>,
        /// Order parameter m of D_m for --map dihedral.
        #[arg(long)]
        target_m: Option<u64>,
        /// Use the standard presentation (only for pi).
        #[arg(long)]
        standard: bool,
    },
    /// Count homomorphisms into a finite group.
    Count {
        #[command(flatten)]
        pres: PresArgs,
        /// Target group spec, as for `iso --right`.
        #[arg(long)]
        target: String,
        #[arg(long)]
        surjective: bool,
    },
}

fn run(cli: &Cli, cfg: &EnumConfig) -> Result<RunManifest, CliError> {
    match &cli.command {
        Command::Present(a) => cmd_present(a.pres, a.n, a.class, cfg),
        Command::Counts { n_from, n_to, csv } => {
            if let Some(path) = csv {
                let reports = (*n_from..=*n_to).map(counts_closed_form).collect::<Result<Vec<_>, _>>()?;
                write_file(path, &count_reports_csv(&reports))?;
            }
            cmd_counts(*n_from, *n_to, cfg)
        }
        Command::Hom { action: HomAction::Check { map, n, pivot, target_m, standard } } => {
            let params = HomParams { n: *n, pivot: *pivot, target_m: *target_m, standard: *standard };
            cmd_hom_check(*map, &params, cfg)
        }
        Command::Hom { action: HomAction::Count { pres, target, surjective } } => {
            let p = build_presentation(pres.pres, pres.n, pres.class)?;
            let h = parse_group_spec(target, cfg)?;
            cmd_hom_count(&p, &h, *surjective, cfg)
        }
        Command::Order { pres, csv } => {
            let (m, table) = cmd_order(pres.pres, pres.n, pres.class, cfg)?;
            if let (Some(path), Some(t)) = (csv, &table) {
                let p = build_presentation(pres.pres, pres.n, pres.class)?;
                let names: Vec<String> = p.gens().into_iter().map(|g| p.alphabet().format_gen(g)).collect();
                write_file(path, &t.to_csv(&names))?;
            }
            Ok(m)
        }
        Command::Lcs(a) => cmd_lcs(a.pres, a.n, a.class, cfg),
        Command::Iso { left, right } => cmd_iso(left, right, cfg),
        Command::Abelianize(a) => cmd_abelianize(a.pres, a.n, a.class, cfg),
        Command::Table { n, max_class } => cmd_table(n, *max_class, cfg),
        Command::VerifyAll { n_max } => cmd_verify_all(*n_max, cfg),
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("cactus: {e}");
            return ExitCode::from(1);
        }
    }
    let mut cfg = EnumConfig::with_strategy(cli.strategy);
    if let Some(m) = cli.max_cosets {
        cfg = cfg.with_max_cosets(m);
    }
    match run(&cli, &cfg) {
        Ok(m) => {
            if cli.json {
                println!("{}", m.to_json());
            } else {
                print!("{}", m.render_text());
            }
            ExitCode::from(m.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("cactus: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
