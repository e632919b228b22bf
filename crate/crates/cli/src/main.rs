//! `hpmon`: command-line front end for hpmon-core.
//!
//! Exit status: 0 decided true (or plain success), 1 decided false,
//! 2 inconclusive at the given bound, 3 error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hpmon_core::engine::DEFAULT_CEILING;
use hpmon_core::{Bii, Gmn, Monoid, Word};

use crate::output::{Out, Status};

const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "hpmon", version, about = "Word problem, divisibility, Garside elements and conjugacy in homogeneous monoids")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Presentation file (`generators:` and `relation:` lines).
    #[arg(long, global = true, conflicts_with = "builtin")]
    file: Option<PathBuf>,
    /// Built-in presentation.
    #[arg(long, global = true, value_enum)]
    builtin: Option<Builtin>,
    /// Number of t letters of the built-in G_{m,n}.
    #[arg(long, global = true, default_value_t = 2, value_parser = positive)]
    m: usize,
    /// Number of u letters of the built-in G_{m,n}.
    #[arg(long, global = true, default_value_t = 2, value_parser = positive)]
    n: usize,
    /// Largest equivalence class to enumerate before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_CEILING, value_parser = positive)]
    ceiling: usize,
    /// Load the class cache from this file if present, and save it afterwards.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads (default: one per core). Output does not depend on it.
    #[arg(long, global = true, value_parser = positive)]
    jobs: Option<usize>,
    /// Print `key: value` records instead of aligned text.
    #[arg(long, global = true)]
    machine: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builtin {
    Bii,
    Gmn,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    #[value(name = "L", alias = "left", alias = "l")]
    Left,
    #[value(name = "R", alias = "right", alias = "r")]
    Right,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Decide U ≐ V.
    Eq { u: String, v: String },
    /// List the equivalence class of W.
    Class { w: String },
    /// Decide whether U divides V on the given side.
    Div {
        #[arg(long, value_enum)]
        side: SideArg,
        u: String,
        v: String,
    },
    /// Minimal common multiples of the words, up to a length bound.
    Mcm {
        #[arg(long, value_enum, default_value = "R")]
        side: SideArg,
        #[arg(long, value_parser = positive)]
        bound: usize,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Decide whether D is quasi-central.
    Qz { d: String },
    /// Decide whether D is fundamental.
    Fund { d: String },
    /// Decide whether D is a Garside element.
    Garside { d: String },
    /// Decide whether D is a minimal fundamental element.
    Minfund { d: String },
    /// Decide whether D is an indecomposable quasi-central element.
    Indec { d: String },
    /// Minimal transit elements of W up to a length bound.
    Transmin {
        #[arg(long, value_parser = positive)]
        bound: usize,
        w: String,
    },
    /// Orbit of W under conjugation by divisors of D.
    Orbit {
        w: String,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Decide whether V is a conjugate of U: through the orbit under D when
    /// given, else by searching conjugators up to the bound.
    Conj {
        u: String,
        v: String,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = 8, value_parser = positive)]
        bound: usize,
    },
    /// Check that every minimal transit element of W up to the bound divides D.
    #[command(name = "propP")]
    PropP {
        w: String,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = 6, value_parser = positive)]
        bound: usize,
    },
    /// Equality in the group of fractions; inverse letters are written `x^-1`.
    GroupEq {
        g1: String,
        g2: String,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Conjugacy in the group of fractions.
    GroupConj {
        g1: String,
        g2: String,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Procedures specific to B_ii.
    Bii {
        #[command(subcommand)]
        cmd: BiiCmd,
    },
    /// Procedures specific to G_{m,n}.
    Gmn {
        #[command(subcommand)]
        cmd: GmnCmd,
    },
}

#[derive(Subcommand)]
pub enum BiiCmd {
    /// Normal form Δ_0^k · shape.
    Nf { w: String },
    /// Minimal transit elements from the case table.
    Transmin {
        w: String,
        /// Also list instances up to this length.
        #[arg(long)]
        len: Option<usize>,
    },
    /// Decide conjugacy.
    Conj { u: String, v: String },
}

#[derive(Subcommand)]
pub enum GmnCmd {
    /// Block normal form of an element of W_{m,n}.
    Nf { w: String },
    /// The Δ, Δ_i and Δ_{i,s} powers split off the front of W.
    Strata { w: String },
    /// Minimal common right multiples of the letter X and W.
    Mcm {
        x: String,
        w: String,
        /// Instantiate families up to this length.
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Witnesses for property P.
    #[command(name = "propP")]
    PropP { w: String },
    /// Decide conjugacy.
    Conj { u: String, v: String },
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// The presentation a command runs against.
pub enum Context {
    File(Monoid),
    Bii(Bii),
    Gmn(Gmn),
}

impl Context {
    pub fn monoid(&self) -> &Monoid {
        match self {
            Context::File(m) => m,
            Context::Bii(b) => b.monoid(),
            Context::Gmn(g) => g.monoid(),
        }
    }

    pub fn word(&self, text: &str) -> Result<Word> {
        self.monoid().word(text).with_context(|| format!("cannot parse word `{text}`"))
    }

    pub fn fmt(&self, w: &[u8]) -> String {
        self.monoid().fmt(w)
    }

    /// The explicit Δ, or the built-in's own fundamental element.
    pub fn delta(&self, given: Option<&str>) -> Result<Word> {
        match (given, self) {
            (Some(d), _) => self.word(d),
            (None, Context::Bii(_)) => self.word("b c b c b c"),
            (None, Context::Gmn(g)) => Ok(g.delta().clone()),
            (None, Context::File(_)) => bail!("--delta is required with a presentation file"),
        }
    }
}

fn build_context(g: &Global, cmd: &Cmd) -> Result<Context> {
    let implied = match cmd {
        Cmd::Bii { .. } => Some(Builtin::Bii),
        Cmd::Gmn { .. } => Some(Builtin::Gmn),
        _ => None,
    };
    let source = match (implied, g.builtin, &g.file) {
        (Some(_), _, Some(_)) => bail!("this subcommand uses its built-in presentation; drop --file"),
        (Some(i), Some(b), _) if i != b => bail!("this subcommand conflicts with --builtin"),
        (Some(i), _, _) => Ok(i),
        (None, Some(b), _) => Ok(b),
        (None, None, Some(path)) => Err(path),
        (None, None, None) => bail!("give a presentation with --file or --builtin"),
    };
    Ok(match source {
        Ok(Builtin::Bii) => Context::Bii(Bii::new().with_ceiling(g.ceiling)),
        Ok(Builtin::Gmn) => Context::Gmn(Gmn::new(g.m, g.n)?.with_ceiling(g.ceiling)),
        Err(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Context::File(Monoid::parse(&text)?.with_ceiling(g.ceiling))
        }
    })
}

fn load_cache(ctx: &Context, path: &PathBuf) -> Result<()> {
    match std::fs::read_to_string(path) {
        Ok(text) => {
            ctx.monoid().load_cache(&text).with_context(|| format!("loading cache {}", path.display()))?;
            Ok(())
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
        Err(e) => Err(e).with_context(|| format!("reading cache {}", path.display())),
    }
}

fn save_cache(ctx: &Context, path: &PathBuf) -> Result<()> {
    let mut tmp = path.clone().into_os_string();
    tmp.push(".tmp");
    let file = std::fs::File::create(&tmp).with_context(|| format!("writing cache {}", path.display()))?;
    let mut w = std::io::BufWriter::new(file);
    ctx.monoid().save_cache(&mut w)?;
    std::io::Write::flush(&mut w)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn run(cli: Cli) -> Result<Status> {
    if let Some(jobs) = cli.global.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let ctx = build_context(&cli.global, &cli.cmd)?;
    if let Some(path) = &cli.global.cache {
        load_cache(&ctx, path)?;
    }
    let mut out = Out::default();
    let status = commands::dispatch(&ctx, &cli.cmd, &mut out)?;
    match out.write(cli.global.machine, std::io::stdout().lock()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    if let Some(path) = &cli.global.cache {
        save_cache(&ctx, path)?;
    }
    Ok(status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
