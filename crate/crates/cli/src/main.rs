use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use prism_core::cube::{build_decomposition, diagram_of_space, isomax_table, CubeDiagram};
use prism_core::dispersion::{check_dispersion, thomason_heights, DispersionCandidate};
use prism_core::guiding::{n_star, NStarOrder};
use prism_core::liegroups::{flagged_snapshot, spectrum_is_noetherian, FiniteGroup, GroupId, ToralSemidirect};
use prism_core::oracle::{run_suite, SUITES};
use prism_core::{FlaggedPriestley, PrismError};

#[derive(Parser)]
#[command(name = "prism", version, about = "Prisms of spectral spaces and subgroup spaces of compact Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Complexity bound for subgroup snapshots.
    #[arg(long, global = true, default_value_t = 4)]
    bound: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print the flagged presentation of a space.
    Show { space: String },
    /// Thomason height of every point and family.
    Heights { space: String },
    /// Check a candidate dispersion given as a JSON file.
    CheckDispersion { space: String, candidate: PathBuf },
    /// Enumerate the closed subsets as clopen down-set classes.
    ClosedSets { space: String },
    Noetherian { space: String },
    /// Punctured-cube decomposition diagram.
    Cube { space: String },
    /// Isomax undercategories of the punctured cube on `0..=n`.
    Isomax { n: u32 },
    /// Run a brute-force oracle suite, or `all`.
    Oracle { suite: String },
}

enum Space {
    Group(GroupId),
    Flagged(FlaggedPriestley),
}

fn read(path: &str) -> Result<String, PrismError> {
    fs::read_to_string(path).map_err(|e| PrismError::InvalidArgument(format!("{path}: {e}")))
}

fn parse_space(arg: &str) -> Result<Space, PrismError> {
    if let Some(order) = NStarOrder::ALL.iter().find(|o| o.name() == arg) {
        return Ok(Space::Flagged(n_star(*order)));
    }
    let group = match arg {
        "circle" => GroupId::Circle,
        "o2" => GroupId::O2,
        "so3" => GroupId::SO3,
        "nsu3t" => GroupId::nsu3t(),
        _ => {
            if let Some(r) = arg.strip_prefix("torus:") {
                let r = r
                    .parse()
                    .map_err(|_| PrismError::InvalidArgument(format!("bad torus rank `{r}`")))?;
                GroupId::torus(r)?
            } else if let Some(path) = arg.strip_prefix("finite:") {
                GroupId::Finite(FiniteGroup::from_json(&read(path)?)?)
            } else if let Some(path) = arg.strip_prefix("semidirect:") {
                GroupId::ToralSemidirect(ToralSemidirect::from_json(&read(path)?)?)
            } else {
                return Ok(Space::Flagged(FlaggedPriestley::from_json(&read(arg)?)?));
            }
        }
    };
    Ok(Space::Group(group))
}

fn flagged(space: &Space, bound: u32) -> Result<FlaggedPriestley, PrismError> {
    match space {
        Space::Group(g) => Ok(flagged_snapshot(g, bound)?.space),
        Space::Flagged(f) => Ok(f.clone()),
    }
}

fn show_text(space: &FlaggedPriestley) -> String {
    let spec = space.to_spec();
    let mut out = String::new();
    for p in &spec.points {
        out.push_str(&format!("point\t{p}\n"));
    }
    for (a, b) in &spec.order {
        out.push_str(&format!("below\t{a}\t{b}\n"));
    }
    for f in &spec.families {
        let hint = f.height_hint.map(|h| format!("\thint={h}")).unwrap_or_default();
        out.push_str(&format!(
            "family\t{}\tlimit={}\tbelow=[{}]\tabove=[{}]{hint}\n",
            f.id,
            f.limit,
            f.member_lt.join(", "),
            f.member_gt.join(", ")
        ));
    }
    out
}

fn diagram(d: &CubeDiagram, format: Format) -> String {
    match format {
        Format::Json => d.to_json(),
        Format::Dot => d.to_dot(),
        Format::Text => d.to_text(),
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn run(cli: &Cli) -> Result<String, PrismError> {
    let bound = cli.bound;
    let json = cli.format == Format::Json;
    let out = match &cli.command {
        Command::Show { space } => {
            let f = flagged(&parse_space(space)?, bound)?;
            if json {
                f.to_json()
            } else {
                show_text(&f)
            }
        }
        Command::Heights { space } => {
            let h = thomason_heights(&flagged(&parse_space(space)?, bound)?)?;
            if json {
                h.to_json()
            } else {
                h.to_text()
            }
        }
        Command::CheckDispersion { space, candidate } => {
            let f = flagged(&parse_space(space)?, bound)?;
            let text = read(&candidate.to_string_lossy())?;
            let chi = DispersionCandidate::from_json(&text)?;
            check_dispersion(&f, &chi).map_err(|v| PrismError::ChecksFailed(v.to_string()))?;
            if json {
                json!({ "dispersion": true }).to_string()
            } else {
                "dispersion".into()
            }
        }
        Command::ClosedSets { space } => {
            let f = flagged(&parse_space(space)?, bound)?;
            let mut classes: Vec<_> = f.clopen_down_sets().iter().map(|c| (f.describe(c), c.clone())).collect();
            classes.sort_by(|a, b| a.0.cmp(&b.0));
            if json {
                let items: Vec<_> = classes
                    .iter()
                    .map(|(_, c)| {
                        let families: serde_json::Map<_, _> = f
                            .families()
                            .iter()
                            .zip(&c.families)
                            .map(|(fam, part)| (fam.id.clone(), format!("{part:?}").to_lowercase().into()))
                            .collect();
                        json!({ "points": f.names(&c.concrete), "families": families })
                    })
                    .collect();
                serde_json::to_string_pretty(&items).expect("json value serializes")
            } else {
                classes.into_iter().map(|(d, _)| d + "\n").collect()
            }
        }
        Command::Noetherian { space } => {
            let answer = match parse_space(space)? {
                Space::Group(g) => spectrum_is_noetherian(&g),
                Space::Flagged(f) => f.is_noetherian(),
            };
            answer.to_string()
        }
        Command::Cube { space } => {
            let d = match parse_space(space)? {
                Space::Group(g) => build_decomposition(&g, bound)?,
                Space::Flagged(f) => diagram_of_space(&f)?,
            };
            diagram(&d, cli.format)
        }
        Command::Isomax { n } => isomax_table(*n),
        Command::Oracle { suite } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut text = String::new();
            let mut failed = Vec::new();
            for name in names {
                let report = run_suite(name)?;
                text.push_str(&report.summary());
                text.push('\n');
                for m in &report.mismatches {
                    text.push_str(&format!("  {m}\n"));
                }
                if !report.passed() {
                    failed.push(name);
                }
            }
            if !failed.is_empty() {
                eprint!("{text}");
                return Err(PrismError::ChecksFailed(format!("oracle mismatches in {}", failed.join(", "))));
            }
            text
        }
    };
    Ok(with_newline(out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: Io: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::FAILURE
        }
    }
}
