//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for unreadable or invalid input (including
//! usage errors), 2 when the oracle's cut limit is exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cut::{optimal_average_cut, Objective};
use crate::dendro::{cluster, WeightScheme};
use crate::io::{parse_edgelist, parse_linkage_csv, parse_newick};
use crate::oracle::{brute_force_optimum, count_cuts, OracleError, DEFAULT_CUT_LIMIT};
use crate::report::{input_digest, RunReport};
use crate::tree::{RootedTree, TreeWarning};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "avgcut", version, about = "Optimal average-weight edge cuts of rooted trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ObjectiveArg {
    Max,
    Min,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Max => Objective::Maximize,
            ObjectiveArg::Min => Objective::Minimize,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Edgelist,
    Newick,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SchemeArg {
    Gap,
    Height,
}

impl From<SchemeArg> for WeightScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Gap => WeightScheme::Gap,
            SchemeArg::Height => WeightScheme::Height,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal cut by contraction
    Cut {
        #[arg(long, value_enum, default_value = "max")]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: FormatArg,
        #[arg(long)]
        input: PathBuf,
        /// Print every contraction with its λ and the resulting α₀
        #[arg(long)]
        trace: bool,
    },
    /// Optimal cut by exhaustive enumeration
    Oracle {
        #[arg(long, value_enum, default_value = "max")]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: FormatArg,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CUT_LIMIT)]
        limit: u64,
    },
    /// Number of root-separating cuts
    Count {
        #[arg(long, value_enum, default_value = "edgelist")]
        format: FormatArg,
        #[arg(long)]
        input: PathBuf,
    },
    /// Cut a linkage dendrogram into communities
    Cluster {
        #[arg(long)]
        linkage: PathBuf,
        #[arg(long, value_enum, default_value = "max")]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value = "gap")]
        scheme: SchemeArg,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_tree(path: &Path, format: FormatArg, err: &mut dyn Write) -> Result<(RootedTree, String), Failure> {
    let text = read_input(path)?;
    let tree = match format {
        FormatArg::Edgelist => parse_edgelist(&text),
        FormatArg::Newick => parse_newick(&text),
    }
    .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    for w in tree.warnings() {
        let TreeWarning::ZeroWeight(e) = w;
        let _ = writeln!(
            err,
            "warning: edge {} -> {} has zero weight",
            tree.label(tree.tail(e)),
            tree.label(e.head())
        );
    }
    Ok((tree, input_digest(text.as_bytes())))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let started = Instant::now();
    let rendered = match command {
        Command::Cut { objective, format, input, trace } => {
            let (tree, digest) = load_tree(&input, format, err)?;
            let objective = objective.into();
            let result = optimal_average_cut(&tree, objective);
            let mut report = RunReport::from_cut("cut", digest, objective, &tree, &result);
            if trace {
                report = report.with_trace(&tree, &result);
            }
            report.elapsed = started.elapsed();
            report.render()
        }
        Command::Oracle { objective, format, input, limit } => {
            let (tree, digest) = load_tree(&input, format, err)?;
            let objective = objective.into();
            let result = brute_force_optimum(&tree, objective, limit).map_err(|e| match e {
                OracleError::TooManyCuts { .. } => Failure { code: EXIT_LIMIT, message: e.to_string() },
                other => Failure::input(other),
            })?;
            let mut report = RunReport::from_cut("oracle", digest, objective, &tree, &result);
            report.cuts_enumerated = Some(count_cuts(&tree));
            report.elapsed = started.elapsed();
            report.render()
        }
        Command::Count { format, input } => {
            let (tree, digest) = load_tree(&input, format, err)?;
            let count = count_cuts(&tree);
            format!(
                "command=count\ninput_digest={digest}\ncount={count}\nelapsed_ms={:.3}\n",
                started.elapsed().as_secs_f64() * 1e3
            )
        }
        Command::Cluster { linkage, objective, scheme } => {
            let text = read_input(&linkage)?;
            let table = parse_linkage_csv(&text).map_err(|e| Failure::input(format!("{}: {e}", linkage.display())))?;
            let (objective, scheme) = (objective.into(), scheme.into());
            let outcome = cluster(&table, objective, scheme).map_err(Failure::input)?;
            let mut report = RunReport::from_cut("cluster", input_digest(text.as_bytes()), objective, &outcome.tree, &outcome.cut)
                .with_partition(&outcome.tree, &outcome.partition, scheme);
            report.elapsed = started.elapsed();
            report.render()
        }
    };
    out.write_all(rendered.as_bytes()).map_err(Failure::input)
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
