use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use reslat::verify::Selection;
use reslat::Filter;
use reslat_cli::format::StructureFile;
use reslat_cli::*;

#[derive(Parser)]
#[command(name = "reslat", version, about = "Analyse finite residuated lattices")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DotWhat {
    Hasse,
    Filters,
}

#[derive(Subcommand)]
enum Command {
    /// Check every axiom and report the first witness of each failure.
    Validate { path: PathBuf },
    /// List all filters.
    Filters { path: PathBuf },
    /// Prime, maximal and minimal prime filters.
    Spectrum {
        path: PathBuf,
        /// Filter the minimal primes are taken over (default: {1}).
        #[arg(long)]
        base: Option<String>,
    },
    /// Coannihilators of the base filter.
    Coann {
        path: PathBuf,
        #[arg(long)]
        base: String,
        /// Elements to take the coannihilator of; all single elements if absent.
        #[arg(long)]
        of: Option<String>,
        /// Read --base as generators rather than as the filter itself.
        #[arg(long)]
        gen: bool,
    },
    /// Omega-filters, dense elements, divisors and sigma of the base filter.
    Omega {
        path: PathBuf,
        #[arg(long)]
        base: String,
    },
    /// Normality index with respect to a proper filter.
    Normality {
        path: PathBuf,
        #[arg(long)]
        base: Option<String>,
        /// Exit with 1 unless the structure is N-normal.
        #[arg(long, value_name = "N")]
        assert: Option<usize>,
    },
    /// Run the invariant battery.
    Verify {
        path: PathBuf,
        /// all, lattice, omega or normality.
        #[arg(long, default_value = "all")]
        battery: Selection,
    },
    /// Enumerate residuated lattices of a given size up to isomorphism.
    Search {
        /// Number of elements, 2 to 6.
        #[arg(long)]
        size: usize,
        /// Only search over the lattice described by this file.
        #[arg(long)]
        base_lattice: Option<PathBuf>,
        /// Census output file (newline-delimited JSON); standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stop after this many structures.
        #[arg(long)]
        limit: Option<usize>,
        /// Keep every labelling instead of one per isomorphism class.
        #[arg(long)]
        all_labelings: bool,
    },
    /// Graphviz rendering of the lattice or of its filter lattice.
    ExportDot {
        path: PathBuf,
        #[arg(long, value_enum)]
        what: DotWhat,
    },
}

fn base_or_trivial(s: &reslat::Structure, base: Option<&str>) -> anyhow::Result<Filter> {
    match base {
        Some(b) => parse_filter(s, b),
        None => Ok(Filter::trivial(s)),
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let output = match cli.command {
        Command::Validate { path } => {
            let (name, s) = read_structure(&path)?;
            cmd_validate(&name, &s)
        }
        Command::Filters { path } => {
            let (name, s) = load_structure(&path)?;
            cmd_filters(&name, &s)
        }
        Command::Spectrum { path, base } => {
            let (name, s) = load_structure(&path)?;
            let base = base_or_trivial(&s, base.as_deref())?;
            cmd_spectrum(&name, &s, base)
        }
        Command::Coann {
            path,
            base,
            of,
            gen,
        } => {
            let (name, s) = load_structure(&path)?;
            let base = if gen {
                parse_generated_filter(&s, &base)?
            } else {
                parse_filter(&s, &base)?
            };
            let of = of.map(|o| parse_elements(&s, &o)).transpose()?;
            cmd_coann(&name, &s, base, gen, of)
        }
        Command::Omega { path, base } => {
            let (name, s) = load_structure(&path)?;
            let base = parse_filter(&s, &base)?;
            cmd_omega(&name, &s, base)
        }
        Command::Normality { path, base, assert } => {
            let (name, s) = load_structure(&path)?;
            let base = match base {
                Some(b) => parse_proper_filter(&s, &b)?,
                None => Filter::trivial(&s),
            };
            cmd_normality(&name, &s, base, assert)
        }
        Command::Verify { path, battery } => {
            let (name, s) = load_structure(&path)?;
            cmd_verify(&name, &s, battery)
        }
        Command::Search {
            size,
            base_lattice,
            out,
            limit,
            all_labelings,
        } => {
            let base = base_lattice
                .map(|p| StructureFile::read(&p).and_then(|f| f.to_lattice()))
                .transpose()?;
            match out {
                Some(p) => {
                    let mut w = BufWriter::new(File::create(&p)?);
                    cmd_search(size, base, limit, all_labelings, &mut w)?
                }
                None => {
                    let stdout = io::stdout();
                    let mut lock = stdout.lock();
                    let o = cmd_search(size, base, limit, all_labelings, &mut lock)?;
                    // the census owns standard output; the summary goes to the error stream
                    eprint!("{}", o.render(cli.format));
                    return Ok(o.code);
                }
            }
        }
        Command::ExportDot { path, what } => {
            let (name, s) = load_structure(&path)?;
            print!(
                "{}",
                cmd_export_dot(&name, &s, matches!(what, DotWhat::Filters))
            );
            return Ok(0);
        }
    };
    let mut stdout = io::stdout().lock();
    stdout.write_all(output.render(cli.format).as_bytes())?;
    stdout.flush()?;
    Ok(output.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
