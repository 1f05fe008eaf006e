use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use msotree::automaton::AutomatonError;
use msotree::clp::{load_program, parse_query, solve, ClpError, Solution, SolveOptions, DEFAULT_DEPTH};
use msotree::compiler::{compile_file, satisfiable, CompileError, CompileOptions, Compiled, DEFAULT_MAX_WIDTH};
use msotree::logic::parse_formula;
use msotree::{LabeledTree, TreeAutomaton};

/// Compile tree logic formulas to tree automata, decide them, and solve
/// constraint logic programs over trees.
#[derive(Parser)]
#[command(name = "msotree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a formula file and write the automaton.
    Compile {
        file: PathBuf,
        /// Output file (default: standard output).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        compile: CompileFlags,
    },
    /// Print SAT or UNSAT.
    Sat {
        file: PathBuf,
        #[command(flatten)]
        compile: CompileFlags,
    },
    /// Print a smallest satisfying tree and the nodes of each variable.
    Witness {
        file: PathBuf,
        #[command(flatten)]
        compile: CompileFlags,
    },
    /// Run an automaton on a tree; print ACCEPT or REJECT.
    Member { automaton: PathBuf, tree: PathBuf },
    /// Compare two automata or formula files; print EQUIVALENT or INEQUIVALENT.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        compile: CompileFlags,
    },
    /// Solve a query against a clause program.
    Solve {
        program: PathBuf,
        /// Query text, e.g. `?- lexicon(x).`
        query: String,
        /// Maximum number of clause applications per branch.
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Print every solution instead of the first.
        #[arg(long)]
        all: bool,
        /// Print goal reductions and store sizes.
        #[arg(long)]
        trace: bool,
        /// Deepen the bound gradually up to --depth.
        #[arg(long)]
        iterative: bool,
        #[command(flatten)]
        compile: CompileFlags,
    },
}

#[derive(Args, Clone, Copy)]
struct CompileFlags {
    /// Skip minimization of intermediate automata.
    #[arg(long)]
    no_minimize: bool,
    /// Largest number of bit positions an automaton may use.
    #[arg(long, default_value_t = DEFAULT_MAX_WIDTH)]
    max_width: usize,
    /// Print one line per construction step to standard error.
    #[arg(long)]
    stats: bool,
}

impl Default for CompileFlags {
    fn default() -> Self {
        CompileFlags {
            no_minimize: false,
            max_width: DEFAULT_MAX_WIDTH,
            stats: false,
        }
    }
}

impl CompileFlags {
    fn options(self) -> CompileOptions {
        CompileOptions {
            minimize: !self.no_minimize,
            max_width: self.max_width,
            ..CompileOptions::default()
        }
    }
}

/// Failures, by exit code.
enum Failure {
    /// Bad usage, unreadable input, syntax or sort errors.
    Input(String),
    /// Width limits.
    Limit(String),
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Self {
        match e {
            CompileError::WidthOverflow { .. } | CompileError::Automaton(AutomatonError::WidthTooLarge(_)) => {
                Failure::Limit(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<AutomatonError> for Failure {
    fn from(e: AutomatonError) -> Self {
        CompileError::from(e).into()
    }
}

impl From<ClpError> for Failure {
    fn from(e: ClpError) -> Self {
        match e {
            ClpError::Compile(c) => c.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn compile_path(path: &Path, flags: CompileFlags) -> Result<Compiled, Failure> {
    let text = read(path)?;
    let file = parse_formula(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let compiled = compile_file(&file, flags.options())?;
    if flags.stats {
        for s in &compiled.stats {
            eprintln!("{s}");
        }
    }
    Ok(compiled)
}

/// Automaton text files start with a `width` line; anything else is read
/// as a formula file.
fn load_automaton(path: &Path, flags: CompileFlags) -> Result<TreeAutomaton, Failure> {
    let text = read(path)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    if first.is_some_and(|l| l.starts_with("width")) {
        return TreeAutomaton::from_text(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())));
    }
    Ok(compile_path(path, flags)?.automaton)
}

fn print_assignment(tree: &LabeledTree, vars: &[(String, Vec<msotree::automaton::Address>)]) {
    println!("{tree}");
    for (name, nodes) in vars {
        let nodes: Vec<String> = nodes.iter().map(ToString::to_string).collect();
        println!("{name}: {}", nodes.join(" "));
    }
}

fn print_solution(i: usize, s: &Solution) {
    println!("solution {} (depth {}, {} states)", i + 1, s.depth, s.store.automaton().num_states());
    print_assignment(&s.witness, &s.assignment);
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Compile { file, output, compile } => {
            let text = compile_path(&file, compile)?.automaton.to_text();
            match output {
                Some(out) => fs::write(&out, text).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Sat { file, compile } => {
            let sat = satisfiable(&compile_path(&file, compile)?.automaton)?;
            println!("{}", if sat { "SAT" } else { "UNSAT" });
            Ok(sat)
        }
        Command::Witness { file, compile } => {
            let c = compile_path(&file, compile)?;
            match c.automaton.witness() {
                Some(t) => {
                    let vars: Vec<_> = c
                        .table
                        .names()
                        .enumerate()
                        .map(|(i, n)| (n.to_string(), t.nodes_with_bit(i)))
                        .collect();
                    print_assignment(&t, &vars);
                    Ok(true)
                }
                None => {
                    println!("UNSAT");
                    Ok(false)
                }
            }
        }
        Command::Member { automaton, tree } => {
            let a = load_automaton(&automaton, CompileFlags::default())?;
            let text = read(&tree)?;
            let t = LabeledTree::parse(text.trim()).map_err(|e| Failure::Input(format!("{}: {e}", tree.display())))?;
            let accepted = a.run_membership(&t).map_err(|e| Failure::Input(e.to_string()))?;
            println!("{}", if accepted { "ACCEPT" } else { "REJECT" });
            Ok(accepted)
        }
        Command::Equiv { left, right, compile } => {
            let a = load_automaton(&left, compile)?;
            let b = load_automaton(&right, compile)?;
            let eq = a.equivalent(&b).map_err(|e| Failure::Input(e.to_string()))?;
            println!("{}", if eq { "EQUIVALENT" } else { "INEQUIVALENT" });
            Ok(eq)
        }
        Command::Solve {
            program,
            query,
            depth,
            all,
            trace,
            iterative,
            compile,
        } => {
            let text = read(&program)?;
            let p = load_program(&text).map_err(|e| Failure::Input(format!("{}: {e}", program.display())))?;
            for w in &p.warnings {
                eprintln!("warning: {w}");
            }
            let q = parse_query(&query, &p.defs).map_err(|e| Failure::Input(format!("query: {e}")))?;
            let options = SolveOptions {
                depth,
                iterative,
                trace,
                compile: compile.options(),
            };
            let mut solver = solve(&p, &q, options)?;
            let mut found = 0;
            let mut failure = None;
            for result in solver.by_ref() {
                match result {
                    Ok(s) => {
                        print_solution(found, &s);
                        found += 1;
                        if !all {
                            break;
                        }
                    }
                    Err(e) => {
                        failure = Some(e);
                        break;
                    }
                }
            }
            if trace {
                for line in solver.trace() {
                    eprintln!("{line}");
                }
            }
            if let Some(e) = failure {
                return Err(e.into());
            }
            if solver.cutoffs() > 0 {
                eprintln!("note: {} branch(es) cut at depth {depth}", solver.cutoffs());
            }
            if found == 0 {
                println!("no solutions");
            }
            Ok(found > 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Limit(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
