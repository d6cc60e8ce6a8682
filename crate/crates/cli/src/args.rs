use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use interline::axioms::AxiomId;
use interline::iata::RoundingMode;
use interline::RuleKind;

#[derive(Debug, Parser)]
#[command(name = "interline", version, about = "Revenue allocation among airlines sharing itineraries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Either one item or all of them.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Choice<T> {
    One(T),
    All,
}

impl<T: Copy> Choice<T> {
    pub fn expand(self, all: &[T]) -> Vec<T> {
        match self {
            Choice::One(x) => vec![x],
            Choice::All => all.to_vec(),
        }
    }
}

fn parse_rule(s: &str) -> Result<Choice<RuleKind>, String> {
    if s == "all" {
        Ok(Choice::All)
    } else {
        s.parse().map(Choice::One)
    }
}

fn parse_axiom(s: &str) -> Result<Choice<AxiomId>, String> {
    if s == "all" {
        Ok(Choice::All)
    } else {
        s.parse().map(Choice::One)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Rounding {
    HalfAwayFromZero,
    HalfEven,
}

impl From<Rounding> for RoundingMode {
    fn from(r: Rounding) -> Self {
        match r {
            Rounding::HalfAwayFromZero => RoundingMode::HalfAwayFromZero,
            Rounding::HalfEven => RoundingMode::HalfEven,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a problem file against every structural assumption.
    Validate {
        #[arg(long)]
        problem: PathBuf,
        /// Weight file replacing the weights in the problem file.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Allocate the ticket revenue of a problem with one rule or all of them.
    Allocate {
        #[arg(long)]
        problem: PathBuf,
        /// weighted, equal, r1..r5 or all
        #[arg(long, value_parser = parse_rule)]
        rule: Choice<RuleKind>,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Run seeded axiom audits against the rules.
    Audit {
        /// weighted, equal, r1..r5 or all
        #[arg(long, value_parser = parse_rule, default_value = "all")]
        rule: Choice<RuleKind>,
        /// An axiom name or all
        #[arg(long, value_parser = parse_axiom, default_value = "all")]
        axiom: Choice<AxiomId>,
        /// Every rule against every axiom.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = interline::axioms::DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Prorate a ticket over its segments with standard proration factors.
    Spf {
        #[arg(long)]
        segments: PathBuf,
        #[arg(long)]
        factors: PathBuf,
        #[arg(long)]
        atbp: f64,
        /// Round weights to two decimals and prorate with published SPFs.
        #[arg(long)]
        paper_table_mode: bool,
        #[arg(long, value_enum, default_value_t = Rounding::HalfAwayFromZero)]
        rounding: Rounding,
    },
    /// Shapley value, convexity and core of the pessimistic game.
    Game {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = interline::axioms::DEFAULT_TOLERANCE)]
        tol: f64,
    },
}
