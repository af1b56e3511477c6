mod cache;
mod error;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::cache::Cache;

#[derive(Parser)]
#[command(name = "orbifold", version, about = "Finite subgroups of SO(4) and invariants of spherical 3-orbifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print compact single-line JSON instead of indented JSON
    #[arg(long, global = true)]
    json: bool,
    /// Directory for cached results
    #[arg(long, global = true, env = "ORBIFOLD_CACHE")]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the group and check its order, kernel and tuple round trip
    Build(SpecArgs),
    /// Orientation-preserving isometry group and orientation-reversing isometries
    Isom(SpecArgs),
    /// Standard Seifert fibrations preserved by the group
    Fibrations(SpecArgs),
    /// Base orbifold of the Hopf fibration and fibration-preserving isometries
    Base(SpecArgs),
    /// Singular locus of the quotient
    Singular(SpecArgs),
    /// Recompute table rows and compare with the transcribed values
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
pub struct SpecArgs {
    /// Family label, e.g. 1, 1p, 11pp, 2bis, 33p
    #[arg(long)]
    pub family: String,
    #[arg(short = 'm', default_value_t = 1)]
    pub m: u32,
    #[arg(short = 'n', default_value_t = 1)]
    pub n: u32,
    #[arg(short = 'r', default_value_t = 1)]
    pub r: u32,
    #[arg(short = 's', default_value_t = 1, allow_negative_numbers = true)]
    pub s: i64,
    /// Add the tabulated values and match flags
    #[arg(long)]
    pub expected: bool,
    /// Build inside the cyclotomic field of this conductor (a multiple of the required one)
    #[arg(long)]
    pub conductor_override: Option<u32>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Comma-separated table numbers
    #[arg(long, value_delimiter = ',', default_values_t = vec![1u8, 2, 3, 4, 5], value_parser = clap::value_parser!(u8).range(1..=5))]
    pub tables: Vec<u8>,
    /// Largest value of m and n; r runs up to max-param + 2
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub max_param: u32,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

fn print(value: &Value, compact: bool) {
    let text = if compact { serde_json::to_string(value) } else { serde_json::to_string_pretty(value) };
    println!("{}", text.expect("JSON values serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = match cli.cache.as_deref().map(Cache::open).transpose() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let result = match &cli.command {
        Command::Build(a) => report::build(a, cache.as_ref()),
        Command::Isom(a) => report::isom(a, cache.as_ref()),
        Command::Fibrations(a) => report::fibrations(a, cache.as_ref()),
        Command::Base(a) => report::base(a, cache.as_ref()),
        Command::Singular(a) => report::singular(a, cache.as_ref()),
        Command::Verify(a) => verify::run(a, cache.as_ref()),
    };
    match result {
        Ok(value) => {
            print(&value, cli.json);
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(value) = e.payload() {
                print(value, cli.json);
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
